//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Little-endian coefficients with no trailing zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: Field) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(c.field(), vec![c])
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn x(field: Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `c0 + c1 x`.
    pub fn linear(c0: FieldElement, c1: FieldElement) -> Self {
        Self::new(c0.field(), vec![c0, c1])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Self::new(self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Poly { field: self.field, coeffs: c }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.field);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        result
    }

    pub fn eval(&self, a: &FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * a) + c)
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = d.leading().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = &r[top] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                r[idx] = &r[idx] - &(&c * di);
            }
            q[top - dd] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(self.field, q), Poly::new(self.field, r)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero only if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: &FieldElement) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::linear(-a, self.field.one());
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.divrem(&lin).expect("nonzero divisor");
            if !r.is_zero() {
                return k;
            }
            p = q;
            k += 1;
        }
    }

    /// Coefficients of `p(a + u)` as a polynomial in `u`.
    pub fn taylor_shift(&self, a: &FieldElement) -> Poly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] = &c[j] + &t;
            }
        }
        Poly::new(self.field, c)
    }

    /// Reversed coefficient vector of formal degree `n`: the expansion of
    /// the degree-`n` form `u^n p(1/u)` at the point at infinity.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut c: Vec<FieldElement> = (0..=n).map(|k| self.coeff(k)).collect();
        c.reverse();
        Poly::new(self.field, c)
    }

    /// Lowest exponent with nonzero coefficient (`None` for zero).
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Distinct roots lying in the field. Finite fields are searched
    /// exhaustively after splitting off `gcd(p, x^q - x)`; in characteristic
    /// zero only the supplied candidates are tried.
    pub fn roots_in_field(&self, candidates: &[FieldElement]) -> Vec<FieldElement> {
        if self.is_constant() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        if let (Some(q), Some(all)) = (self.field.size(), self.field.elements()) {
            // product of the distinct linear factors
            let xq = Poly::x(self.field).pow_mod(q, self);
            let split = self.gcd(&(&xq - &Poly::x(self.field)));
            let want = split.degree().unwrap_or(0);
            if want == 0 {
                return roots;
            }
            for a in all {
                if split.eval(&a).is_zero() {
                    roots.push(a);
                    if roots.len() == want {
                        break;
                    }
                }
            }
        } else {
            for a in candidates {
                if !roots.contains(a) && self.eval(a).is_zero() {
                    roots.push(a.clone());
                }
            }
            roots.sort();
        }
        roots
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let reduce = |p: &Poly| p.divrem(m).expect("nonzero modulus").1;
        let mut result = reduce(&Poly::one(self.field));
        let mut b = reduce(self);
        while e > 0 {
            if e & 1 == 1 {
                result = reduce(&(&result * &b));
            }
            b = reduce(&(&b * &b));
            e >>= 1;
        }
        result
    }

    pub fn to_exprs(&self) -> Vec<String> {
        self.coeffs.iter().map(FieldElement::to_expr).collect()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.field, (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.field, (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
