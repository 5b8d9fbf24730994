//! Rational functions in one variable and generators of fixed fields of
//! finite subgroups of `PGL(2, k)`.

use std::fmt;

use serde::Serialize;

use crate::divisor::{orbit_sum, Divisor};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::pgl2::{Moebius, ProjPoint, Subgroup};
use crate::poly::Poly;

/// `num / den` in lowest terms with monic `den`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field();
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one(field) });
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lc = den.leading().unwrap().inv()?;
        Ok(RationalFunction { num: num.scale(&lc), den: den.scale(&lc) })
    }

    pub fn from_poly(p: Poly) -> Self {
        let field = p.field();
        RationalFunction { num: p, den: Poly::one(field) }
    }

    pub fn x(field: Field) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn field(&self) -> Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Degree of the induced map `P^1 -> P^1`.
    pub fn map_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
            .expect("nonzero denominator")
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
            .expect("nonzero denominator")
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn inv(&self) -> Result<Self> {
        Self::from_poly(Poly::one(self.field())).div(self)
    }

    /// Equality as functions, by cross-multiplication.
    pub fn same_function(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    /// `r(m(x))`, substituting into the binary forms of degree
    /// `map_degree` so that points at infinity need no special casing.
    pub fn compose_moebius(&self, m: &Moebius) -> Self {
        let field = self.field();
        let [a, b, c, d] = m.entries().clone();
        let top = Poly::linear(b, a);
        let bottom = Poly::linear(d, c);
        let n = self.map_degree();
        let mut top_pows = vec![Poly::one(field)];
        let mut bottom_pows = vec![Poly::one(field)];
        for _ in 0..n {
            top_pows.push(top_pows.last().unwrap() * &top);
            bottom_pows.push(bottom_pows.last().unwrap() * &bottom);
        }
        let subst = |p: &Poly| {
            let mut acc = Poly::zero(field);
            for (k, ck) in p.coeffs().iter().enumerate() {
                if !ck.is_zero() {
                    acc = &acc + &(&top_pows[k] * &bottom_pows[n - k]).scale(ck);
                }
            }
            acc
        };
        Self::new(subst(&self.num), subst(&self.den)).expect("Moebius substitution is invertible")
    }

    /// Value at a point of the line, as a point of the target line.
    pub fn eval(&self, q: &ProjPoint) -> ProjPoint {
        let field = self.field();
        match q.affine_coord() {
            Some(a) => {
                let den = self.den.eval(a);
                if den.is_zero() {
                    ProjPoint::infinity(field)
                } else {
                    ProjPoint::affine(&self.num.eval(a) / &den)
                }
            }
            None => {
                let n = self.map_degree();
                let lead_den = self.den.coeff(n);
                if lead_den.is_zero() {
                    ProjPoint::infinity(field)
                } else {
                    ProjPoint::affine(&self.num.coeff(n) / &lead_den)
                }
            }
        }
    }

    /// Valuation at `q`.
    pub fn ord_at(&self, q: &ProjPoint) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(match q.affine_coord() {
            Some(a) => self.num.root_multiplicity(a) as i64 - self.den.root_multiplicity(a) as i64,
            None => self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64,
        })
    }

    /// Ramification index of the map at `q`: the order of the pole if `q`
    /// is a pole, otherwise the order of `r - r(q)` at `q`.
    pub fn ramification_index(&self, q: &ProjPoint) -> Result<usize> {
        if self.is_constant() {
            return Err(Error::ZeroFunction);
        }
        match self.eval(q).affine_coord() {
            None => Ok((-self.ord_at(q)?) as usize),
            Some(v) => Ok(self.sub(&Self::constant(v.clone())).ord_at(q)? as usize),
        }
    }

    /// Pole divisor restricted to `candidates`.
    pub fn poles_among<'a>(&self, candidates: impl IntoIterator<Item = &'a ProjPoint>) -> Result<Divisor> {
        let mut d = Divisor::zero();
        for q in candidates {
            let o = self.ord_at(q)?;
            if o < 0 {
                d.add_term(q.clone(), -o);
            }
        }
        Ok(d)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

#[derive(Serialize)]
struct RawRatFunc {
    num: Vec<String>,
    den: Vec<String>,
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawRatFunc { num: self.num.to_exprs(), den: self.den.to_exprs() }.serialize(s)
    }
}

/// First nonconstant elementary symmetric function of the images
/// `{m(x) : m in g}`. Its map degree is checked to be `|g|` and its
/// invariance under every element is checked, so it generates the fixed
/// field.
pub fn invariant_generator(g: &Subgroup) -> Result<RationalFunction> {
    let field = g.field();
    // prod_m (T (c x + d) - (a x + b)) as a polynomial in T with Poly coefficients
    let mut prod: Vec<Poly> = vec![Poly::one(field)];
    for m in g.elements() {
        let [a, b, c, d] = m.entries().clone();
        let lin_t = Poly::linear(d, c);
        let lin_0 = -&Poly::linear(b, a);
        let mut next = vec![Poly::zero(field); prod.len() + 1];
        for (k, pk) in prod.iter().enumerate() {
            next[k] = &next[k] + &(pk * &lin_0);
            next[k + 1] = &next[k + 1] + &(pk * &lin_t);
        }
        prod = next;
    }
    let n = g.order();
    let common = &prod[n];
    for k in 1..=n {
        // coefficient of T^{n-k} is (-1)^k e_k * common
        let mut e = RationalFunction::new(prod[n - k].clone(), common.clone())?;
        if k % 2 == 1 {
            e = RationalFunction::new(-e.num(), e.den().clone())?;
        }
        if e.is_constant() {
            continue;
        }
        if e.map_degree() != n {
            return Err(Error::DegreeMismatch { expected: n as i64, actual: e.map_degree() as i64 });
        }
        for m in g.elements() {
            if !e.compose_moebius(m).same_function(&e) {
                return Err(Error::InvarianceFailure(format!("{e:?} under {m:?}")));
            }
        }
        return Ok(e);
    }
    Err(Error::NoNonconstantSymmetricFunction)
}

/// A generator of the fixed field of `g` whose pole divisor is the orbit
/// sum of `q`.
pub fn generator_with_pole_fiber(g: &Subgroup, q: &ProjPoint) -> Result<RationalFunction> {
    let pi = invariant_generator(g)?;
    let f = match pi.eval(q).affine_coord() {
        None => pi,
        Some(v) => pi.sub(&RationalFunction::constant(v.clone())).inv()?,
    };
    let expected = orbit_sum(g, q);
    let poles = f.poles_among(expected.support())?;
    if poles != expected || poles.degree() != f.map_degree() as i64 {
        return Err(Error::PoleDivisorMismatch(format!("{f:?}")));
    }
    Ok(f)
}
