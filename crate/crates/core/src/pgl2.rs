//! Points of the projective line, Möbius transformations (elements of
//! PGL(2, k)), finite subgroups generated by closure, orbits and
//! stabilizers.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, RootBindings};

/// Default closure cap for [`Subgroup::generate`].
pub const DEFAULT_CAP: usize = 10_000;

/// A point `(a : b)` of the projective line, stored canonically as
/// `(a : 1)` or `(1 : 0)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    a: FieldElement,
    b: FieldElement,
}

impl ProjPoint {
    pub fn new(a: FieldElement, b: FieldElement) -> Result<Self> {
        if a.field() != b.field() {
            return Err(Error::SpecMismatch);
        }
        if b.is_zero() {
            if a.is_zero() {
                return Err(Error::Parse("(0 : 0) is not a point".into()));
            }
            return Ok(Self::infinity(a.field()));
        }
        Ok(ProjPoint { a: &a / &b, b: a.field().one() })
    }

    /// `Q_a = (a : 1)`.
    pub fn affine(a: FieldElement) -> Self {
        let one = a.field().one();
        ProjPoint { a, b: one }
    }

    /// `Q_inf = (1 : 0)`.
    pub fn infinity(field: Field) -> Self {
        ProjPoint { a: field.one(), b: field.zero() }
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    /// The affine coordinate `a` of `(a : 1)`, `None` at infinity.
    pub fn affine_coord(&self) -> Option<&FieldElement> {
        (!self.is_infinity()).then_some(&self.a)
    }

    pub fn coords(&self) -> (&FieldElement, &FieldElement) {
        (&self.a, &self.b)
    }

    pub fn to_exprs(&self) -> [String; 2] {
        [self.a.to_expr(), self.b.to_expr()]
    }

    pub fn pretty(&self, roots: &RootBindings) -> String {
        match self.affine_coord() {
            None => "Q_inf".to_string(),
            Some(a) => format!("Q_{}", roots.pretty(a)),
        }
    }

    /// Every point of P^1 over a finite field, finite points first in
    /// canonical order, infinity last.
    pub fn all_points(field: Field) -> Option<Vec<ProjPoint>> {
        let mut pts: Vec<ProjPoint> = field.elements()?.map(ProjPoint::affine).collect();
        pts.push(ProjPoint::infinity(field));
        Some(pts)
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.affine_coord(), other.affine_coord()) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.a, self.b)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_exprs().serialize(s)
    }
}

/// A Möbius transformation `x -> (m00 x + m01) / (m10 x + m11)`, i.e. a 2x2
/// invertible matrix modulo scalars. Canonical form: the first nonzero
/// entry in row-major order is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Moebius {
    m: [FieldElement; 4],
}

impl Moebius {
    pub fn new(m00: FieldElement, m01: FieldElement, m10: FieldElement, m11: FieldElement) -> Result<Self> {
        let f = m00.field();
        if [&m01, &m10, &m11].iter().any(|x| x.field() != f) {
            return Err(Error::SpecMismatch);
        }
        let det = &(&m00 * &m11) - &(&m01 * &m10);
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self::canonical([m00, m01, m10, m11]))
    }

    fn canonical(m: [FieldElement; 4]) -> Self {
        let lead = m.iter().find(|x| !x.is_zero()).expect("nonsingular").clone();
        if lead.is_one() {
            return Moebius { m };
        }
        let inv = lead.inv().expect("nonzero");
        Moebius { m: m.map(|x| &x * &inv) }
    }

    pub fn identity(field: Field) -> Self {
        Moebius { m: [field.one(), field.zero(), field.zero(), field.one()] }
    }

    pub fn field(&self) -> Field {
        self.m[0].field()
    }

    pub fn entries(&self) -> &[FieldElement; 4] {
        &self.m
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field())
    }

    /// Matrix product `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Moebius) -> Moebius {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        Self::canonical([
            &(a * e) + &(b * g),
            &(a * f) + &(b * h),
            &(c * e) + &(d * g),
            &(c * f) + &(d * h),
        ])
    }

    pub fn inverse(&self) -> Moebius {
        let [a, b, c, d] = &self.m;
        Self::canonical([d.clone(), -b, -c, a.clone()])
    }

    /// `(a : b) -> (m00 a + m01 b : m10 a + m11 b)`.
    pub fn apply(&self, q: &ProjPoint) -> ProjPoint {
        let [m00, m01, m10, m11] = &self.m;
        let (a, b) = q.coords();
        let x = &(m00 * a) + &(m01 * b);
        let y = &(m10 * a) + &(m11 * b);
        ProjPoint::new(x, y).expect("invertible matrix maps points to points")
    }

    /// Order in PGL(2), searched up to `bound`.
    pub fn order(&self, bound: usize) -> Option<usize> {
        let id = Self::identity(self.field());
        let mut cur = self.clone();
        for k in 1..=bound {
            if cur == id {
                return Some(k);
            }
            cur = cur.compose(self);
        }
        None
    }

    pub fn to_exprs(&self) -> [[String; 2]; 2] {
        let [a, b, c, d] = &self.m;
        [[a.to_expr(), b.to_expr()], [c.to_expr(), d.to_expr()]]
    }

    pub fn pretty(&self, roots: &RootBindings) -> String {
        let [a, b, c, d] = &self.m;
        format!(
            "[[{}, {}], [{}, {}]]",
            roots.pretty(a),
            roots.pretty(b),
            roots.pretty(c),
            roots.pretty(d)
        )
    }
}

impl fmt::Debug for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl Serialize for Moebius {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_exprs().serialize(s)
    }
}

/// A finite subgroup of PGL(2, k) with its elements listed in canonical
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    field: Field,
    elements: Vec<Moebius>,
    generators: Vec<Moebius>,
}

/// Isomorphism proxy: group order and sorted multiset of element orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub element_orders: Vec<usize>,
}

impl Subgroup {
    /// Breadth-first closure of `gens` under composition. Fails once more
    /// than `cap` elements have been found.
    pub fn generate(field: Field, gens: &[Moebius], cap: usize) -> Result<Subgroup> {
        if gens.iter().any(|g| g.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let id = Moebius::identity(field);
        let mut seen: HashSet<Moebius> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for g in gens {
                let next = g.compose(&e);
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return Err(Error::NotFiniteWithinCap { cap });
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<Moebius> = seen.into_iter().collect();
        elements.sort();
        Ok(Subgroup { field, elements, generators: gens.to_vec() })
    }

    pub fn trivial(field: Field) -> Subgroup {
        Subgroup { field, elements: vec![Moebius::identity(field)], generators: Vec::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Moebius] {
        &self.elements
    }

    pub fn generators(&self) -> &[Moebius] {
        &self.generators
    }

    pub fn contains(&self, m: &Moebius) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    /// The orbit `G . q`, sorted.
    pub fn orbit(&self, q: &ProjPoint) -> BTreeSet<ProjPoint> {
        self.elements.iter().map(|m| m.apply(q)).collect()
    }

    /// The stabilizer `G(q)` as a subgroup (generated by itself).
    pub fn stabilizer(&self, q: &ProjPoint) -> Subgroup {
        let elements: Vec<Moebius> =
            self.elements.iter().filter(|m| &m.apply(q) == q).cloned().collect();
        Subgroup { field: self.field, generators: elements.clone(), elements }
    }

    pub fn stabilizer_order(&self, q: &ProjPoint) -> usize {
        self.elements.iter().filter(|m| &m.apply(q) == q).count()
    }

    /// Fingerprint used to name the isomorphism type.
    pub fn fingerprint(&self) -> Fingerprint {
        let mut element_orders: Vec<usize> = self
            .elements
            .iter()
            .map(|m| m.order(self.order()).expect("element of a finite group"))
            .collect();
        element_orders.sort_unstable();
        Fingerprint { order: self.order(), element_orders }
    }
}

/// `true` iff the only common element is the identity. Coprime orders
/// decide this without comparing elements.
pub fn intersect_trivial(g1: &Subgroup, g2: &Subgroup) -> bool {
    common_nontrivial_element(g1, g2).is_none()
}

/// A nonidentity element of `g1 ∩ g2`, if any.
pub fn common_nontrivial_element(g1: &Subgroup, g2: &Subgroup) -> Option<Moebius> {
    if num_integer::gcd(g1.order(), g2.order()) == 1 {
        return None;
    }
    g1.elements.iter().find(|m| !m.is_identity() && g2.contains(m)).cloned()
}

fn cyclic_pattern(n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).map(|k| n / num_integer::gcd(k, n)).collect();
    v.sort_unstable();
    v
}

fn dihedral_pattern(n: usize) -> Vec<usize> {
    let mut v = cyclic_pattern(n);
    v.extend(std::iter::repeat(2).take(n));
    v.sort_unstable();
    v
}

fn pattern(counts: &[(usize, usize)]) -> Vec<usize> {
    let mut v: Vec<usize> = counts.iter().flat_map(|&(o, c)| std::iter::repeat(o).take(c)).collect();
    v.sort_unstable();
    v
}

impl Fingerprint {
    /// Name of the isomorphism type when the fingerprint determines it.
    ///
    /// | fingerprint | name |
    /// |---|---|
    /// | an element of order `n = |G|` | `Z/nZ` |
    /// | `(4, {1,2,2,2})` | `Z/2Z x Z/2Z` |
    /// | `(6, {1,2,2,2,3,3})` | `S3 = AGL(1,F3)` |
    /// | dihedral pattern, `6 < 2n <= 24` | `Dn` |
    /// | `(12, {1,2^3,3^8})` | `A4` |
    /// | `(24, {1,2^9,3^8,4^6})` | `S4` |
    /// | `(60, {1,2^15,3^20,5^24})` | `A5` |
    /// | `(p^2, {1,p^(p^2-1)})`, p prime | `Z/pZ x Z/pZ` |
    pub fn name(&self) -> Option<String> {
        let n = self.order;
        if self.element_orders.last() == Some(&n) {
            return Some(if n == 1 { "trivial".into() } else { format!("Z/{n}Z") });
        }
        if self.element_orders == pattern(&[(1, 1), (2, 3)]) {
            return Some("Z/2Z x Z/2Z".into());
        }
        if n == 6 && self.element_orders == dihedral_pattern(3) {
            return Some("S3 = AGL(1,F3)".into());
        }
        if n % 2 == 0 && n > 6 && n <= 24 && self.element_orders == dihedral_pattern(n / 2) {
            return Some(format!("D{}", n / 2));
        }
        if self.element_orders == pattern(&[(1, 1), (2, 3), (3, 8)]) {
            return Some("A4".into());
        }
        if self.element_orders == pattern(&[(1, 1), (2, 9), (3, 8), (4, 6)]) {
            return Some("S4".into());
        }
        if self.element_orders == pattern(&[(1, 1), (2, 15), (3, 20), (5, 24)]) {
            return Some("A5".into());
        }
        let r = (n as f64).sqrt().round() as usize;
        if r > 1 && r * r == n && (2..r).all(|d| r % d != 0) && self.element_orders[1..].iter().all(|&o| o == r) {
            return Some(format!("Z/{r}Z x Z/{r}Z"));
        }
        None
    }

    /// Counts of each element order, for display.
    pub fn order_counts(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &o in &self.element_orders {
            *m.entry(o).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .order_counts()
            .into_iter()
            .map(|(o, c)| if c == 1 { o.to_string() } else { format!("{o}^{c}") })
            .collect();
        write!(f, "({}, {{{}}})", self.order, parts.join(","))
    }
}
