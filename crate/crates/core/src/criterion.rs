//! The existence criterion for a birational plane model of the projective
//! line with two inner Galois points, and the predicted local geometry of
//! such a model.

use std::fmt::Write as _;

use serde::Serialize;

use crate::divisor::{bs_divisors, orbit_sum, BsDivisors, Divisor};
use crate::error::{Error, Result};
use crate::field::{Field, RootBindings};
use crate::pgl2::{common_nontrivial_element, Fingerprint, Moebius, ProjPoint, Subgroup};

/// Groups `G1`, `G2` and distinct points `P1`, `P2` over one field. `G1`
/// is the Galois group at the image of `P1`, `G2` the one at `P2`.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub field: Field,
    pub g1: Subgroup,
    pub g2: Subgroup,
    pub p1: ProjPoint,
    pub p2: ProjPoint,
}

impl Configuration {
    pub fn new(g1: Subgroup, g2: Subgroup, p1: ProjPoint, p2: ProjPoint) -> Result<Self> {
        let field = g1.field();
        if g2.field() != field || p1.field() != field || p2.field() != field {
            return Err(Error::FieldMismatch);
        }
        if p1 == p2 {
            return Err(Error::PointsEqual);
        }
        Ok(Configuration { field, g1, g2, p1, p2 })
    }

    /// `(G2, G1, P2, P1)`.
    pub fn swapped(&self) -> Configuration {
        Configuration {
            field: self.field,
            g1: self.g2.clone(),
            g2: self.g1.clone(),
            p1: self.p2.clone(),
            p2: self.p1.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondA {
    pub holds: bool,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondB {
    pub holds: bool,
    /// A nonidentity element of `G1 ∩ G2`.
    pub witness: Option<Moebius>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// `"Bs_P1"` or `"Bs_P2"`.
    pub divisor: &'static str,
    pub point: ProjPoint,
    /// Multiplicity of the divisor minus the required one (negative).
    pub deficit: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondC {
    pub holds: bool,
    pub witnesses: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondD {
    pub holds: bool,
    /// `Bs_P1 + sum_{s in G1} s(P2)`
    pub lhs: Divisor,
    /// `Bs_P2 + sum_{t in G2} t(P1)`
    pub rhs: Divisor,
    /// `lhs - rhs`
    pub difference: Divisor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub g1_p2: Vec<ProjPoint>,
    pub g2_p1: Vec<ProjPoint>,
    pub intersection: Vec<ProjPoint>,
    /// `|G2(P1)|`
    pub stab_g2_p1: usize,
    /// `|G1(P2)|`
    pub stab_g1_p2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub fingerprint: Fingerprint,
    pub name: Option<String>,
}

impl GroupSummary {
    fn of(g: &Subgroup) -> Self {
        let fingerprint = g.fingerprint();
        GroupSummary { name: fingerprint.name(), fingerprint }
    }
}

/// Where a point of `supp(D)` is sent by the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Over {
    P1,
    P2,
    /// On the line `Z = 0` but over neither of the two Galois points.
    Neither,
}

/// Predicted order data at one point of `supp(D)`. A `None` entry means
/// the criterion makes no prediction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderPrediction {
    pub point: ProjPoint,
    pub over: Over,
    /// Multiplicity of the point in `D`.
    pub line_order: i64,
    pub second: Option<i64>,
    pub third: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub passes: bool,
    pub cond_a: CondA,
    pub cond_b: CondB,
    pub cond_c: CondC,
    pub cond_d: CondD,
    /// `|G1| + deg Bs_P1`
    pub degree: i64,
    pub m_p1: i64,
    pub m_p2: i64,
    pub tangent_at_p1: bool,
    pub tangent_at_p2: bool,
    pub bs_p1: Divisor,
    pub bs_p2: Divisor,
    pub orbits: OrbitSummary,
    pub g1: GroupSummary,
    pub g2: GroupSummary,
    pub order_table: Vec<OrderPrediction>,
    pub warnings: Vec<String>,
}

const LUROTH_NOTE: &str = "every subfield of k(x) properly containing k is rational";

pub fn check(cfg: &Configuration) -> Result<CriterionReport> {
    let bs = bs_divisors(&cfg.g1, &cfg.g2, &cfg.p1, &cfg.p2)?;
    let a = bs.stab_g2_p1 as i64;
    let b = bs.stab_g1_p2 as i64;
    let inter = bs.intersection();

    let witness = common_nontrivial_element(&cfg.g1, &cfg.g2);
    let cond_b = CondB { holds: witness.is_none(), witness };

    let mut witnesses = Vec::new();
    for (name, d, p) in [("Bs_P1", &bs.bs_p1, &cfg.p1), ("Bs_P2", &bs.bs_p2, &cfg.p2)] {
        for (point, deficit) in d.geq_violations(&Divisor::point(p.clone())) {
            witnesses.push(Violation { divisor: name, point, deficit });
        }
    }
    let cond_c = CondC { holds: witnesses.is_empty(), witnesses };

    let lhs = bs.bs_p1.add(&orbit_sum(&cfg.g1, &cfg.p2));
    let rhs = bs.bs_p2.add(&orbit_sum(&cfg.g2, &cfg.p1));
    let difference = lhs.sub(&rhs);
    let cond_d = CondD { holds: difference.is_zero(), lhs, rhs, difference };

    let passes = cond_b.holds && cond_c.holds && cond_d.holds;
    let degree = cfg.g1.order() as i64 + bs.bs_p1.degree();
    let only_g2 = bs.union.len() - bs.orbit_g1_p2.len();
    let only_g1 = bs.union.len() - bs.orbit_g2_p1.len();
    let m_p1 = a * only_g2 as i64 + (a - b) * inter.len() as i64;
    let m_p2 = b * only_g1 as i64;
    let tangent_at_p1 = !inter.is_empty() && a > b;

    let mut warnings = Vec::new();
    if passes {
        let other = cfg.g2.order() as i64 + bs.bs_p2.degree();
        if other != degree {
            return Err(Error::CriterionFailed(format!("degree {degree} via P1 but {other} via P2")));
        }
        if m_p1 != bs.bs_p1.degree() || m_p2 != bs.bs_p2.degree() {
            return Err(Error::CriterionFailed("multiplicity differs from base divisor degree".into()));
        }
        if degree < 4 {
            warnings.push(format!("degree {degree} is below 4"));
        }
    }

    Ok(CriterionReport {
        passes,
        cond_a: CondA { holds: true, note: LUROTH_NOTE },
        cond_b,
        cond_c,
        cond_d,
        degree,
        m_p1,
        m_p2,
        tangent_at_p1,
        tangent_at_p2: false,
        order_table: predicted_orders(&bs),
        orbits: OrbitSummary {
            g1_p2: bs.orbit_g1_p2.iter().cloned().collect(),
            g2_p1: bs.orbit_g2_p1.iter().cloned().collect(),
            intersection: inter.into_iter().collect(),
            stab_g2_p1: bs.stab_g2_p1,
            stab_g1_p2: bs.stab_g1_p2,
        },
        bs_p1: bs.bs_p1,
        bs_p2: bs.bs_p2,
        g1: GroupSummary::of(&cfg.g1),
        g2: GroupSummary::of(&cfg.g2),
        warnings,
    })
}

/// With `a = |G2(P1)|`, `b = |G1(P2)|`: second order `a` on
/// `G2.P1 \ G1.P2`, `b` on `G1.P2 \ G2.P1`, and `(a-b, a)` on the
/// intersection when `a > b`. Intersection points with `a <= b` get no
/// prediction.
fn predicted_orders(bs: &BsDivisors) -> Vec<OrderPrediction> {
    let a = bs.stab_g2_p1 as i64;
    let b = bs.stab_g1_p2 as i64;
    bs.union
        .iter()
        .map(|q| {
            let in1 = bs.orbit_g1_p2.contains(q);
            let in2 = bs.orbit_g2_p1.contains(q);
            let (over, line_order, second, third) = match (in1, in2) {
                (false, true) => (Over::P1, a, Some(a), None),
                (true, false) => (Over::P2, b, Some(b), None),
                _ if a > b => (Over::P1, a, Some(a - b), Some(a)),
                _ if a == b => (Over::Neither, a, None, None),
                _ => (Over::P2, b, None, None),
            };
            OrderPrediction { point: q.clone(), over, line_order, second, third }
        })
        .collect()
}

/// Runs [`check`] on `(G1, G2, P1, P2)` and on `(G2, G1, P2, P1)`.
pub fn both_orientations(cfg: &Configuration) -> Result<(CriterionReport, CriterionReport)> {
    Ok((check(cfg)?, check(&cfg.swapped())?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InnerOuterReport {
    pub passes: bool,
    pub cond_b: CondB,
    pub cond_c: CondC,
    pub cond_d: CondD,
    /// `eta(P)`
    pub eta_p: ProjPoint,
    pub bs_p: Divisor,
}

/// The variant for a Galois point with group `G1` off the model's point
/// set, related to `P` by `eta in G2`.
pub fn check_inner_outer(
    g1: &Subgroup,
    g2: &Subgroup,
    eta: &Moebius,
    p: &ProjPoint,
) -> Result<InnerOuterReport> {
    if g1.field() != g2.field() || p.field() != g1.field() {
        return Err(Error::FieldMismatch);
    }
    if !g2.contains(eta) {
        return Err(Error::EtaNotInG2);
    }
    let eta_p = eta.apply(p);
    let g2_p = g2.orbit(p);
    let g1_eta = g1.orbit(&eta_p);
    let a = g2.stabilizer_order(p) as i64;
    let b = g1.stabilizer_order(&eta_p) as i64;
    let mut bs_p = Divisor::zero();
    for q in g2_p.difference(&g1_eta) {
        bs_p.add_term(q.clone(), a);
    }
    for r in &g1_eta {
        bs_p.add_term(r.clone(), a - b);
    }

    let witness = common_nontrivial_element(g1, g2);
    let cond_b = CondB { holds: witness.is_none(), witness };

    let witnesses: Vec<Violation> = bs_p
        .geq_violations(&Divisor::point(p.clone()))
        .into_iter()
        .map(|(point, deficit)| Violation { divisor: "Bs_P", point, deficit })
        .collect();
    let cond_c = CondC { holds: witnesses.is_empty(), witnesses };

    let lhs = bs_p.add(&orbit_sum(g1, &eta_p));
    let rhs = orbit_sum(g2, p);
    let difference = lhs.sub(&rhs);
    let cond_d = CondD { holds: difference.is_zero(), lhs, rhs, difference };

    Ok(InnerOuterReport {
        passes: cond_b.holds && cond_c.holds && cond_d.holds,
        cond_b,
        cond_c,
        cond_d,
        eta_p,
        bs_p,
    })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn points(list: &[ProjPoint], roots: &RootBindings) -> String {
    let names: Vec<String> = list.iter().map(|q| q.pretty(roots)).collect();
    format!("{{{}}}", names.join(", "))
}

fn order(o: Option<i64>) -> String {
    o.map_or_else(|| "-".into(), |v| v.to_string())
}

impl CriterionReport {
    /// Human-readable rendering with point names resolved through `roots`.
    pub fn render_text(&self, roots: &RootBindings) -> String {
        let mut s = String::new();
        let name = |g: &GroupSummary| match &g.name {
            Some(n) => format!("{} {}", g.fingerprint, n),
            None => g.fingerprint.to_string(),
        };
        let _ = writeln!(s, "G1 {}", name(&self.g1));
        let _ = writeln!(s, "G2 {}", name(&self.g2));
        let _ = writeln!(s, "G1.P2 = {}", points(&self.orbits.g1_p2, roots));
        let _ = writeln!(s, "G2.P1 = {}", points(&self.orbits.g2_p1, roots));
        let _ = writeln!(s, "|G2(P1)| = {}, |G1(P2)| = {}", self.orbits.stab_g2_p1, self.orbits.stab_g1_p2);
        let _ = writeln!(s, "Bs_P1 = {}", self.bs_p1.pretty(roots));
        let _ = writeln!(s, "Bs_P2 = {}", self.bs_p2.pretty(roots));
        let _ = writeln!(s, "(a) {}", mark(self.cond_a.holds));
        match &self.cond_b.witness {
            None => {
                let _ = writeln!(s, "(b) ok");
            }
            Some(m) => {
                let _ = writeln!(s, "(b) FAIL: common element {}", m.pretty(roots));
            }
        }
        let _ = writeln!(s, "(c) {}", mark(self.cond_c.holds));
        for v in &self.cond_c.witnesses {
            let _ = writeln!(s, "    {} short by {} at {}", v.divisor, -v.deficit, v.point.pretty(roots));
        }
        let _ = writeln!(s, "(d) {}", mark(self.cond_d.holds));
        if !self.cond_d.holds {
            let _ = writeln!(s, "    lhs - rhs = {}", self.cond_d.difference.pretty(roots));
        }
        let _ = writeln!(s, "passes: {}", self.passes);
        let _ = writeln!(s, "degree {}, m_P1 {}, m_P2 {}", self.degree, self.m_p1, self.m_p2);
        let _ = writeln!(s, "tangent at P1: {}, tangent at P2: {}", self.tangent_at_p1, self.tangent_at_p2);
        let _ = writeln!(s, "orders (point, over, D, second, third):");
        for e in &self.order_table {
            let over = match e.over {
                Over::P1 => "P1",
                Over::P2 => "P2",
                Over::Neither => "-",
            };
            let _ = writeln!(
                s,
                "    {:<10} {:<3} {:>3} {:>3} {:>3}",
                e.point.pretty(roots),
                over,
                e.line_order,
                order(e.second),
                order(e.third)
            );
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}
