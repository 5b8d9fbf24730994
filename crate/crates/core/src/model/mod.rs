//! The plane model `x -> (f : g : 1)` of a passing configuration and its
//! geometry computed on the parameter line.

mod implicit;
mod orders;

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::Serialize;

use crate::criterion::{Configuration, CriterionReport};
use crate::divisor::{orbit_sum, Divisor};
use crate::error::{Error, Result};
use crate::field::{Field, FieldDescription, FieldElement};
use crate::pgl2::ProjPoint;
use crate::poly::Poly;
use crate::quotient::{generator_with_pole_fiber, RationalFunction};

pub use implicit::{implicitize, HomogeneousPoly, ImplicitCurve};
pub use orders::{compare_orders, order_sequence_at, OrderComparison, OrderSequence};

/// A point of the projective plane, scaled so the first nonzero
/// coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint([FieldElement; 3]);

impl PlanePoint {
    pub fn new(x: FieldElement, y: FieldElement, z: FieldElement) -> Result<Self> {
        let lead = [&x, &y, &z].into_iter().find(|c| !c.is_zero()).cloned().ok_or(Error::DivisionByZero)?;
        let inv = lead.inv()?;
        Ok(PlanePoint([&x * &inv, &y * &inv, &z * &inv]))
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.0
    }

    /// `(0:1:0)`
    pub fn y_axis_point(field: Field) -> Self {
        PlanePoint([field.zero(), field.one(), field.zero()])
    }

    /// `(1:0:0)`
    pub fn x_axis_point(field: Field) -> Self {
        PlanePoint([field.one(), field.zero(), field.zero()])
    }
}

impl fmt::Debug for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.0[0], self.0[1], self.0[2])
    }
}

impl Serialize for PlanePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(3))?;
        for c in &self.0 {
            seq.serialize_element(&c.to_expr())?;
        }
        seq.end()
    }
}

/// `(A : B : C)` with `f = A/C`, `g = B/C`, `gcd(A, B, C) = 1`, read as
/// binary forms of degree `degree`.
#[derive(Clone, Debug)]
pub struct PlaneModel {
    pub f: RationalFunction,
    pub g: RationalFunction,
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub degree: usize,
    pub image_p1: PlanePoint,
    pub image_p2: PlanePoint,
    /// Points tried as roots when the field is infinite.
    hints: Vec<FieldElement>,
}

#[derive(Serialize)]
struct RawModel<'a> {
    #[serde(rename = "A")]
    a: Vec<String>,
    #[serde(rename = "B")]
    b: Vec<String>,
    #[serde(rename = "C")]
    c: Vec<String>,
    degree: usize,
    f: &'a RationalFunction,
    g: &'a RationalFunction,
    image_p1: &'a PlanePoint,
    image_p2: &'a PlanePoint,
}

impl Serialize for PlaneModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawModel {
            a: self.a.to_exprs(),
            b: self.b.to_exprs(),
            c: self.c.to_exprs(),
            degree: self.degree,
            f: &self.f,
            g: &self.g,
            image_p1: &self.image_p1,
            image_p2: &self.image_p2,
        }
        .serialize(s)
    }
}

fn lcm(p: &Poly, q: &Poly) -> Poly {
    (p * q).div_exact(&p.gcd(q)).expect("gcd divides the product").monic()
}

/// Candidate roots in characteristic zero: the given points together with
/// `0` and `±z^k`.
fn hint_elements(field: Field, points: &BTreeSet<ProjPoint>) -> Vec<FieldElement> {
    let mut out: BTreeSet<FieldElement> = points.iter().filter_map(|q| q.affine_coord().cloned()).collect();
    if let FieldDescription::Cyclotomic { conductor } = field.description() {
        out.insert(field.zero());
        let z = field.generator();
        let mut power = field.one();
        for _ in 0..2 * *conductor {
            out.insert(power.clone());
            out.insert(-&power);
            power = &power * &z;
        }
    }
    out.into_iter().collect()
}

impl PlaneModel {
    /// `(f : g : 1)` built from explicit functions. `hints` seeds root
    /// finding in characteristic zero.
    pub fn from_functions(f: RationalFunction, g: RationalFunction, hints: &BTreeSet<ProjPoint>) -> Result<Self> {
        let field = f.field();
        let c = lcm(f.den(), g.den());
        let a = f.num() * &c.div_exact(f.den())?;
        let b = g.num() * &c.div_exact(g.den())?;
        let common = a.gcd(&b).gcd(&c);
        let (a, b, c) = (a.div_exact(&common)?, b.div_exact(&common)?, c.div_exact(&common)?);
        let degree = [&a, &b, &c].iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        let model = PlaneModel {
            f,
            g,
            a,
            b,
            c,
            degree,
            image_p1: PlanePoint::y_axis_point(field),
            image_p2: PlanePoint::x_axis_point(field),
            hints: hint_elements(field, hints),
        };
        Ok(model)
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    /// `phi(q)`.
    pub fn image(&self, q: &ProjPoint) -> PlanePoint {
        let [a, b, c] = self.local_forms(q).map(|p| p.coeff(0));
        PlanePoint::new(a, b, c).expect("gcd(A, B, C) = 1")
    }

    /// `A, B, C` expanded in a local parameter at `q`: `x - a` at finite
    /// points, `1/x` at infinity.
    pub fn local_forms(&self, q: &ProjPoint) -> [Poly; 3] {
        match q.affine_coord() {
            Some(a) => [&self.a, &self.b, &self.c].map(|p| p.taylor_shift(a)),
            None => [&self.a, &self.b, &self.c].map(|p| p.reversed(self.degree)),
        }
    }

    /// `l0 A + l1 B + l2 C`.
    pub fn line_form(&self, line: &[FieldElement; 3]) -> Poly {
        &(&self.a.scale(&line[0]) + &self.b.scale(&line[1])) + &self.c.scale(&line[2])
    }

    /// Points of the line at which a binary form of degree `self.degree`
    /// vanishes, with multiplicities, plus the factor without roots in the
    /// field (or not among the hints).
    fn zeros(&self, form: &Poly) -> Pullback {
        let field = self.field();
        let mut rational = Divisor::zero();
        let mut residual = form.clone();
        for r in form.roots_in_field(&self.hints) {
            let m = form.root_multiplicity(&r);
            let lin = Poly::linear(-&r, field.one());
            residual = residual.div_exact(&lin.pow(m as u32)).expect("root factor divides");
            rational.add_term(ProjPoint::affine(r), m as i64);
        }
        let at_infinity = self.degree - form.degree().expect("nonzero form");
        rational.add_term(ProjPoint::infinity(field), at_infinity as i64);
        Pullback { rational, residual: residual.monic() }
    }

    /// `phi^* L` for the line `l0 X + l1 Y + l2 Z = 0`.
    pub fn line_pullback(&self, line: &[FieldElement; 3]) -> Result<Pullback> {
        if line.iter().all(FieldElement::is_zero) {
            return Err(Error::DivisionByZero);
        }
        let form = self.line_form(line);
        if form.is_zero() {
            return Err(Error::LineContainsCurve);
        }
        Ok(self.zeros(&form))
    }

    /// Points of the line sent to `p`.
    pub fn fiber(&self, p: &PlanePoint) -> Vec<ProjPoint> {
        let field = self.field();
        let [x, y, z] = p.coords();
        let minors = [
            &self.a.scale(y) - &self.b.scale(x),
            &self.a.scale(z) - &self.c.scale(x),
            &self.b.scale(z) - &self.c.scale(y),
        ];
        let common = minors.iter().fold(Poly::zero(field), |acc, m| acc.gcd(m));
        let mut out: Vec<ProjPoint> = if common.is_zero() {
            Vec::new()
        } else {
            common.roots_in_field(&self.hints).into_iter().map(ProjPoint::affine).collect()
        };
        let inf = ProjPoint::infinity(field);
        if &self.image(&inf) == p {
            out.push(inf);
        }
        out
    }

    /// Multiplicity of the image curve at `p`, as the sum over the fiber
    /// of the least order of a line through `p`.
    pub fn multiplicity(&self, p: &PlanePoint) -> Result<i64> {
        let mut m = 0;
        for q in self.fiber(p) {
            m += order_sequence_at(self, &q)?.alpha;
        }
        Ok(m)
    }

    /// Intersection multiplicity at `p` of the image with the line `L`
    /// through `p`, summed over the fiber.
    pub fn intersection(&self, p: &PlanePoint, line: &[FieldElement; 3]) -> Result<i64> {
        let form = self.line_form(line);
        if form.is_zero() {
            return Err(Error::LineContainsCurve);
        }
        let mut total = 0;
        for q in self.fiber(p) {
            let local = match q.affine_coord() {
                Some(a) => form.taylor_shift(a),
                None => form.reversed(self.degree),
            };
            total += local.low_order().expect("nonzero form") as i64;
        }
        Ok(total)
    }
}

/// Zeros of a pulled-back line: the part over the field's points and the
/// monic cofactor that has no roots there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pullback {
    pub rational: Divisor,
    #[serde(serialize_with = "serialize_poly")]
    pub residual: Poly,
}

fn serialize_poly<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    p.to_exprs().serialize(s)
}

impl Pullback {
    pub fn degree(&self) -> i64 {
        self.rational.degree() + self.residual.degree().unwrap_or(0) as i64
    }
}

/// Builds `(f : g : 1)` with `f` a generator of the fixed field of `G1`
/// with poles on `G1.P2` and `g` one of `G2` with poles on `G2.P1`.
pub fn build_model(cfg: &Configuration, report: &CriterionReport) -> Result<PlaneModel> {
    if !report.passes {
        return Err(Error::CriterionFailed("configuration does not pass".into()));
    }
    let f = generator_with_pole_fiber(&cfg.g1, &cfg.p2)?;
    let g = generator_with_pole_fiber(&cfg.g2, &cfg.p1)?;
    let hints: BTreeSet<ProjPoint> =
        report.orbits.g1_p2.iter().chain(&report.orbits.g2_p1).cloned().collect();
    let model = PlaneModel::from_functions(f, g, &hints)?;
    if model.degree as i64 != report.degree {
        return Err(Error::DegreeMismatch { expected: report.degree, actual: model.degree as i64 });
    }
    for (p, expected, name) in [(&cfg.p1, &model.image_p1, "P1"), (&cfg.p2, &model.image_p2, "P2")] {
        let got = model.image(p);
        if &got != expected {
            return Err(Error::ImageNotAsPredicted(format!("{name} maps to {got:?}")));
        }
    }
    Ok(model)
}

/// Ramification of one of the two quotient maps at a point of `O`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ramification {
    pub point: ProjPoint,
    /// `e_Q(f)` and `|G1(Q)|`
    pub e_f: usize,
    pub stab_g1: usize,
    /// `e_Q(g)` and `|G2(Q)|`
    pub e_g: usize,
    pub stab_g2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisVerification {
    pub invariance_checked_f: usize,
    pub invariance_checked_g: usize,
    pub degree_f: usize,
    pub degree_g: usize,
    pub ramification: Vec<Ramification>,
    /// `D`, equal to both sides of the balancing identity and to the
    /// pullback of `Z = 0`.
    pub d: Divisor,
}

/// Checks that the model's coordinate functions realize `G1` and `G2` as
/// the Galois groups of the two projections.
pub fn verify_galois(model: &PlaneModel, cfg: &Configuration, report: &CriterionReport) -> Result<GaloisVerification> {
    for (h, group, name) in [(&model.f, &cfg.g1, "f"), (&model.g, &cfg.g2, "g")] {
        for s in group.elements() {
            if !h.compose_moebius(s).same_function(h) {
                return Err(Error::InvarianceFailure(format!("{name} is not fixed by {s:?}")));
            }
        }
    }
    for (h, group, name) in [(&model.f, &cfg.g1, "f"), (&model.g, &cfg.g2, "g")] {
        if h.map_degree() != group.order() {
            return Err(Error::DegreeFailure(format!(
                "{name} has degree {} but the group has order {}",
                h.map_degree(),
                group.order()
            )));
        }
    }
    let union: BTreeSet<ProjPoint> = report.orbits.g1_p2.iter().chain(&report.orbits.g2_p1).cloned().collect();
    let mut ramification = Vec::with_capacity(union.len());
    for q in &union {
        let r = Ramification {
            point: q.clone(),
            e_f: model.f.ramification_index(q)?,
            stab_g1: cfg.g1.stabilizer_order(q),
            e_g: model.g.ramification_index(q)?,
            stab_g2: cfg.g2.stabilizer_order(q),
        };
        if r.e_f != r.stab_g1 || r.e_g != r.stab_g2 {
            return Err(Error::DegreeFailure(format!("ramification differs from stabilizer at {q:?}")));
        }
        ramification.push(r);
    }
    let lhs = report.bs_p1.add(&orbit_sum(&cfg.g1, &cfg.p2));
    let rhs = report.bs_p2.add(&orbit_sum(&cfg.g2, &cfg.p1));
    let field = model.field();
    let z = model.line_pullback(&[field.zero(), field.zero(), field.one()])?;
    if lhs != rhs {
        return Err(Error::DivisorIdentityFailure(format!("{lhs:?} != {rhs:?}")));
    }
    if !z.residual.is_constant() || z.rational != lhs {
        return Err(Error::DivisorIdentityFailure(format!("pullback of Z = 0 is {z:?}, expected {lhs:?}")));
    }
    Ok(GaloisVerification {
        invariance_checked_f: cfg.g1.order(),
        invariance_checked_g: cfg.g2.order(),
        degree_f: model.f.map_degree(),
        degree_g: model.g.map_degree(),
        ramification,
        d: lhs,
    })
}
