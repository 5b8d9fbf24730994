//! Implicit equation of the image curve by a resultant in the parameter,
//! and multiplicities of plane points on it.

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::Serialize;

use super::{PlaneModel, PlanePoint};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Poly;

/// Homogeneous polynomial in `X, Y, Z`. The coefficient of
/// `X^i Y^j Z^(d-i-j)` sits at `i * (d + 1) + j`.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogeneousPoly {
    field: Field,
    degree: usize,
    coeffs: Vec<FieldElement>,
}

impl HomogeneousPoly {
    pub fn zero(field: Field, degree: usize) -> Self {
        HomogeneousPoly { field, degree, coeffs: vec![field.zero(); (degree + 1) * (degree + 1)] }
    }

    /// `c0 X + c1 Y + c2 Z`.
    pub fn linear(c: [FieldElement; 3]) -> Self {
        let field = c[0].field();
        let mut p = Self::zero(field, 1);
        let [x, y, z] = c;
        *p.at_mut(1, 0) = x;
        *p.at_mut(0, 1) = y;
        *p.at_mut(0, 0) = z;
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.degree + 1) + j
    }

    /// Coefficient of `X^i Y^j Z^(d-i-j)`.
    pub fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.coeffs[self.idx(i, j)]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut FieldElement {
        let k = self.idx(i, j);
        &mut self.coeffs[k]
    }

    /// Exponents `(i, j)` of the degree, in graded-lexicographic order
    /// (`X > Y > Z`).
    pub fn monomials(&self) -> impl Iterator<Item = (usize, usize)> {
        let d = self.degree;
        (0..=d).rev().flat_map(move |i| (0..=d - i).rev().map(move |j| (i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    fn leading(&self) -> Option<(usize, usize)> {
        self.monomials().find(|&(i, j)| !self.at(i, j).is_zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.field, self.degree + o.degree);
        let terms: Vec<(usize, usize, &FieldElement)> =
            o.monomials().map(|(i, j)| (i, j, o.at(i, j))).filter(|t| !t.2.is_zero()).collect();
        for (i, j) in self.monomials() {
            let a = self.at(i, j);
            if a.is_zero() {
                continue;
            }
            for &(k, l, b) in &terms {
                let e = out.at_mut(i + k, j + l);
                *e = &*e + &(a * b);
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree);
        let mut out = self.clone();
        for (x, y) in out.coeffs.iter_mut().zip(&o.coeffs) {
            *x = &*x - y;
        }
        out
    }

    /// Exact quotient by `d`, dividing out leading terms in graded-lex
    /// order.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        if self.degree < d.degree {
            return if self.is_zero() { Ok(Self::zero(self.field, 0)) } else { Err(Error::DivisionByZero) };
        }
        let (li, lj) = d.leading().ok_or(Error::DivisionByZero)?;
        let lc_inv = d.at(li, lj).inv()?;
        let d_terms: Vec<(usize, usize, FieldElement)> =
            d.monomials().map(|(i, j)| (i, j, d.at(i, j).clone())).filter(|t| !t.2.is_zero()).collect();
        let mut rem = self.clone();
        let mut q = Self::zero(self.field, self.degree - d.degree);
        let mut mons = self.monomials();
        loop {
            let Some((i, j)) = mons.by_ref().find(|&(i, j)| !rem.at(i, j).is_zero()) else {
                break;
            };
            // the leading term of the remainder only moves down
            let (Some(qi), Some(qj)) = (i.checked_sub(li), j.checked_sub(lj)) else {
                return Err(Error::DivisionByZero);
            };
            if qi + qj > q.degree {
                return Err(Error::DivisionByZero);
            }
            let c = rem.at(i, j) * &lc_inv;
            for (a, b, v) in &d_terms {
                let e = rem.at_mut(qi + a, qj + b);
                *e = &*e - &(&c * v);
            }
            *q.at_mut(qi, qj) = c;
        }
        Ok(q)
    }

    /// Divides by `Z` when every monomial contains it.
    fn strip_z(&self) -> Option<Self> {
        if self.degree == 0 {
            return None;
        }
        let mut out = Self::zero(self.field, self.degree - 1);
        for (i, j) in self.monomials() {
            let c = self.at(i, j);
            if i + j == self.degree {
                if !c.is_zero() {
                    return None;
                }
            } else {
                *out.at_mut(i, j) = c.clone();
            }
        }
        Some(out)
    }

    fn normalized(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((i, j)) => {
                let inv = self.at(i, j).inv().expect("nonzero");
                let mut out = self.clone();
                for c in &mut out.coeffs {
                    *c = &*c * &inv;
                }
                out
            }
        }
    }

    /// `F(A, B, C)` for univariate `A, B, C`.
    pub fn substitute(&self, a: &Poly, b: &Poly, c: &Poly) -> Poly {
        let d = self.degree;
        let pows = |p: &Poly| {
            let mut v = vec![Poly::one(self.field)];
            for _ in 0..d {
                v.push(v.last().unwrap() * p);
            }
            v
        };
        let (pa, pb, pc) = (pows(a), pows(b), pows(c));
        let mut acc = Poly::zero(self.field);
        for (i, j) in self.monomials() {
            let coef = self.at(i, j);
            if !coef.is_zero() {
                acc = &acc + &(&(&pa[i] * &pb[j]) * &pc[d - i - j]).scale(coef);
            }
        }
        acc
    }

    /// Order of vanishing at `p`: the least total degree in the affine
    /// chart of a nonzero coordinate after moving `p` to the origin.
    pub fn multiplicity_at(&self, p: &PlanePoint) -> usize {
        let d = self.degree;
        let coords = p.coords();
        let chart = (0..3).rev().find(|&k| !coords[k].is_zero()).expect("nonzero point");
        let inv = coords[chart].inv().expect("nonzero");
        let others: Vec<usize> = (0..3).filter(|&k| k != chart).collect();
        let shift = [&coords[others[0]] * &inv, &coords[others[1]] * &inv];
        // bivariate coefficients c[u][v] of the dehomogenized polynomial
        let mut c = vec![vec![self.field.zero(); d + 1]; d + 1];
        for (i, j) in self.monomials() {
            let e = [i, j, d - i - j];
            c[e[others[0]]][e[others[1]]] = self.at(i, j).clone();
        }
        // Taylor shift in each variable
        let shift_vec = |v: &mut Vec<FieldElement>, a: &FieldElement| {
            let n = v.len();
            for i in 0..n {
                for j in (i..n - 1).rev() {
                    let t = &v[j + 1] * a;
                    v[j] = &v[j] + &t;
                }
            }
        };
        for row in c.iter_mut() {
            shift_vec(row, &shift[1]);
        }
        for v in 0..=d {
            let mut col: Vec<FieldElement> = c.iter().map(|row| row[v].clone()).collect();
            shift_vec(&mut col, &shift[0]);
            for (u, x) in col.into_iter().enumerate() {
                c[u][v] = x;
            }
        }
        let mut best = usize::MAX;
        for (u, row) in c.iter().enumerate() {
            for (v, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    best = best.min(u + v);
                }
            }
        }
        best
    }
}

impl std::fmt::Debug for HomogeneousPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = self.degree;
        let terms: Vec<String> = self
            .monomials()
            .filter(|&(i, j)| !self.at(i, j).is_zero())
            .map(|(i, j)| format!("({})X^{i}Y^{j}Z^{}", self.at(i, j), d - i - j))
            .collect();
        write!(f, "{}", if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }
}

#[derive(Serialize)]
struct Term {
    exp: [usize; 3],
    coeff: String,
}

/// Sparse `[{"exp":[i,j,k],"coeff":"expr"}]` in graded-lex order.
impl Serialize for HomogeneousPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(None)?;
        for (i, j) in self.monomials() {
            let c = self.at(i, j);
            if !c.is_zero() {
                seq.serialize_element(&Term { exp: [i, j, self.degree - i - j], coeff: c.to_expr() })?;
            }
        }
        seq.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplicitCurve {
    pub degree: usize,
    #[serde(rename = "F")]
    pub f: HomogeneousPoly,
}

/// Determinant by fraction-free elimination; rows below the pivot are
/// updated in parallel.
fn bareiss(mut m: Vec<Vec<HomogeneousPoly>>) -> Result<HomogeneousPoly> {
    let n = m.len();
    let field = m[0][0].field;
    let mut prev = HomogeneousPoly { field, degree: 0, coeffs: vec![field.one()] };
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Ok(HomogeneousPoly::zero(field, 0));
            };
            m.swap(k, r);
        }
        if k + 1 == n {
            break;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        rest.par_iter_mut().try_for_each(|row| -> Result<()> {
            for j in k + 1..n {
                let t = pivot_row[k].mul(&row[j]).sub(&row[k].mul(&pivot_row[j]));
                row[j] = t.div_exact(&prev)?;
            }
            Ok(())
        })?;
        prev = m[k][k].clone();
    }
    Ok(m[n - 1][n - 1].clone())
}

/// Eliminates the parameter from `Z A - X C` and `Z B - Y C`, then removes
/// the extraneous powers of `Z`.
pub fn implicitize(model: &PlaneModel) -> Result<ImplicitCurve> {
    let n = model.degree;
    let field = model.field();
    if n == 0 {
        return Err(Error::ExtraneousFactorIrremovable("constant map".into()));
    }
    let zero = field.zero();
    // coefficient k of each binary form as a linear form in X, Y, Z
    let form = |p: &Poly, var: usize, k: usize| {
        // Z p_k - X c_k (var = 0) or Z p_k - Y c_k (var = 1)
        let mut c = [zero.clone(), zero.clone(), p.coeff(k)];
        c[var] = -&model.c.coeff(k);
        HomogeneousPoly::linear(c)
    };
    let first: Vec<HomogeneousPoly> = (0..=n).map(|k| form(&model.a, 0, k)).collect();
    let second: Vec<HomogeneousPoly> = (0..=n).map(|k| form(&model.b, 1, k)).collect();
    let size = 2 * n;
    let mut rows = Vec::with_capacity(size);
    for (coeffs, count) in [(&first, n), (&second, n)] {
        for r in 0..count {
            let mut row = vec![HomogeneousPoly::zero(field, 1); size];
            for (k, c) in coeffs.iter().enumerate() {
                row[r + k] = c.clone();
            }
            rows.push(row);
        }
    }
    let mut res = bareiss(rows)?;
    if res.is_zero() {
        return Err(Error::ExtraneousFactorIrremovable("resultant vanishes".into()));
    }
    while res.degree > n {
        match res.strip_z() {
            Some(r) => res = r,
            None => break,
        }
    }
    if res.degree != n {
        return Err(Error::ExtraneousFactorIrremovable(format!("degree {} after removing Z", res.degree)));
    }
    let f = res.normalized();
    if !f.substitute(&model.a, &model.b, &model.c).is_zero() {
        return Err(Error::ExtraneousFactorIrremovable("equation does not vanish on the curve".into()));
    }
    Ok(ImplicitCurve { degree: n, f })
}
