//! Divisors on the projective line: finite formal integer combinations of
//! points, keyed by canonical [`ProjPoint`]s.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeSeq;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::RootBindings;
use crate::pgl2::{ProjPoint, Subgroup};

#[derive(Clone, Default, PartialEq, Eq)]
pub struct Divisor {
    support: BTreeMap<ProjPoint, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(q: ProjPoint) -> Self {
        Self::from_terms([(q, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ProjPoint, i64)>) -> Self {
        let mut d = Self::zero();
        for (q, m) in terms {
            d.add_term(q, m);
        }
        d
    }

    pub fn add_term(&mut self, q: ProjPoint, m: i64) {
        if m == 0 {
            return;
        }
        match self.support.get_mut(&q) {
            Some(e) => {
                *e += m;
                if *e == 0 {
                    self.support.remove(&q);
                }
            }
            None => {
                self.support.insert(q, m);
            }
        }
    }

    pub fn mult(&self, q: &ProjPoint) -> i64 {
        self.support.get(q).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.support.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.support.values().all(|&m| m >= 0)
    }

    pub fn support(&self) -> impl Iterator<Item = &ProjPoint> {
        self.support.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ProjPoint, i64)> {
        self.support.iter().map(|(q, &m)| (q, m))
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (q, m) in other.terms() {
            d.add_term(q.clone(), m);
        }
        d
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (q, m) in other.terms() {
            d.add_term(q.clone(), -m);
        }
        d
    }

    /// `self >= other`: every multiplicity of `self` is at least that of
    /// `other` (absent points count as 0).
    pub fn geq(&self, other: &Divisor) -> bool {
        self.sub(other).is_effective()
    }

    /// Points where `self >= other` fails, with the deficit.
    pub fn geq_violations(&self, other: &Divisor) -> Vec<(ProjPoint, i64)> {
        self.sub(other).terms().filter(|(_, m)| *m < 0).map(|(q, m)| (q.clone(), m)).collect()
    }

    pub fn pretty(&self, roots: &RootBindings) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(q, m)| match m {
                1 => q.pretty(roots),
                -1 => format!("-{}", q.pretty(roots)),
                _ => format!("{m}{}", q.pretty(roots)),
            })
            .collect();
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.support.iter()).finish()
    }
}

#[derive(Serialize)]
struct Term<'a> {
    point: &'a ProjPoint,
    mult: i64,
}

/// Serialized as `[{"point": ["a","b"], "mult": n}, ...]` in canonical
/// point order.
impl Serialize for Divisor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.support.len()))?;
        for (point, &mult) in &self.support {
            seq.serialize_element(&Term { point, mult })?;
        }
        seq.end()
    }
}

/// `sum_{m in g} m(q)`: multiplicity `|g(q)|` at each orbit point.
pub fn orbit_sum(g: &Subgroup, q: &ProjPoint) -> Divisor {
    Divisor::from_terms(g.elements().iter().map(|m| (m.apply(q), 1)))
}

/// The two base divisors of the criterion together with the orbit data
/// they are built from.
#[derive(Clone, Debug)]
pub struct BsDivisors {
    pub bs_p1: Divisor,
    pub bs_p2: Divisor,
    /// `G1 . P2`
    pub orbit_g1_p2: BTreeSet<ProjPoint>,
    /// `G2 . P1`
    pub orbit_g2_p1: BTreeSet<ProjPoint>,
    /// `O = G1 . P2 ∪ G2 . P1`
    pub union: BTreeSet<ProjPoint>,
    /// `|G2(P1)|`
    pub stab_g2_p1: usize,
    /// `|G1(P2)|`
    pub stab_g1_p2: usize,
}

impl BsDivisors {
    pub fn intersection(&self) -> BTreeSet<ProjPoint> {
        self.orbit_g1_p2.intersection(&self.orbit_g2_p1).cloned().collect()
    }
}

/// Builds `Bs_{P1}` and `Bs_{P2}`. Negative multiplicities on the orbit
/// intersection are kept so that the effectivity test fails visibly.
pub fn bs_divisors(g1: &Subgroup, g2: &Subgroup, p1: &ProjPoint, p2: &ProjPoint) -> Result<BsDivisors> {
    if p1 == p2 {
        return Err(Error::PointsEqual);
    }
    let orbit_g1_p2 = g1.orbit(p2);
    let orbit_g2_p1 = g2.orbit(p1);
    let union: BTreeSet<ProjPoint> = orbit_g1_p2.union(&orbit_g2_p1).cloned().collect();
    let a = g2.stabilizer_order(p1) as i64;
    let b = g1.stabilizer_order(p2) as i64;
    let mut bs_p1 = Divisor::zero();
    let mut bs_p2 = Divisor::zero();
    for q in &union {
        let in1 = orbit_g1_p2.contains(q);
        let in2 = orbit_g2_p1.contains(q);
        if !in1 {
            bs_p1.add_term(q.clone(), a);
        } else if in2 {
            bs_p1.add_term(q.clone(), a - b);
        }
        if !in2 {
            bs_p2.add_term(q.clone(), b);
        }
    }
    Ok(BsDivisors {
        bs_p1,
        bs_p2,
        orbit_g1_p2,
        orbit_g2_p1,
        union,
        stab_g2_p1: a as usize,
        stab_g1_p2: b as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, FieldDescription};

    #[test]
    fn arithmetic_and_comparison() {
        let f = make_field(&FieldDescription::finite(7, 1)).unwrap();
        let q0 = ProjPoint::affine(f.zero());
        let q1 = ProjPoint::affine(f.one());
        let d = Divisor::from_terms([(q0.clone(), 2), (q1.clone(), 1)]);
        assert_eq!(d.add(&Divisor::zero()), d);
        assert!(d.geq(&Divisor::point(q0.clone())));
        assert!(!d.geq(&Divisor::from_terms([(q0.clone(), 3)])));
        assert_eq!(d.degree(), 3);
        let e = d.sub(&d);
        assert!(e.is_zero());
        assert_eq!(d.sub(&Divisor::from_terms([(q1, 1)])), Divisor::from_terms([(q0, 2)]));
    }

    #[test]
    fn zero_entries_are_dropped() {
        let f = make_field(&FieldDescription::finite(7, 1)).unwrap();
        let q = ProjPoint::affine(f.from_i64(3));
        let mut d = Divisor::point(q.clone());
        d.add_term(q.clone(), -1);
        assert!(d.is_zero());
        assert_eq!(d.mult(&q), 0);
    }

    #[test]
    fn points_equal_rejected() {
        let f = make_field(&FieldDescription::finite(7, 1)).unwrap();
        let g = Subgroup::trivial(f);
        let q = ProjPoint::infinity(f);
        assert!(matches!(bs_divisors(&g, &g, &q, &q), Err(Error::PointsEqual)));
    }
}
