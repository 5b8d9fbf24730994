//! Test-only arithmetic for F_p[z]/(m) on plain integer vectors, used as an
//! oracle independent of the library's field, group and polynomial code.

#![allow(dead_code)]

use galois_forge::field::{Field, FieldElement};
use galois_forge::pgl2::{Moebius, ProjPoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub type E = Vec<i64>;

#[derive(Clone, Debug)]
pub struct Gf {
    pub p: i64,
    /// monic, lowest coefficient first, length n + 1
    pub modulus: Vec<i64>,
}

impl Gf {
    pub fn prime(p: i64) -> Self {
        Gf { p, modulus: vec![0, 1] }
    }

    pub fn n(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn q(&self) -> i64 {
        self.p.pow(self.n() as u32)
    }

    pub fn zero(&self) -> E {
        vec![0; self.n()]
    }

    pub fn int(&self, v: i64) -> E {
        let mut e = self.zero();
        e[0] = v.rem_euclid(self.p);
        e
    }

    pub fn one(&self) -> E {
        self.int(1)
    }

    pub fn is_zero(&self, a: &E) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &E, b: &E) -> E {
        a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(self.p)).collect()
    }

    pub fn neg(&self, a: &E) -> E {
        a.iter().map(|x| (-x).rem_euclid(self.p)).collect()
    }

    pub fn sub(&self, a: &E, b: &E) -> E {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &E, b: &E) -> E {
        let n = self.n();
        let mut prod = vec![0i64; 2 * n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y).rem_euclid(self.p);
            }
        }
        for k in (n..2 * n).rev() {
            let c = prod[k];
            if c != 0 {
                for (i, m) in self.modulus.iter().enumerate() {
                    prod[k - n + i] = (prod[k - n + i] - c * m).rem_euclid(self.p);
                }
            }
        }
        prod.truncate(n);
        prod
    }

    pub fn elements(&self) -> Vec<E> {
        (0..self.q())
            .map(|mut code| {
                let mut e = self.zero();
                for c in e.iter_mut() {
                    *c = code % self.p;
                    code /= self.p;
                }
                e
            })
            .collect()
    }

    pub fn inv(&self, a: &E) -> E {
        assert!(!self.is_zero(a));
        let one = self.one();
        self.elements().into_iter().find(|b| self.mul(a, b) == one).expect("unit")
    }

    pub fn div(&self, a: &E, b: &E) -> E {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &E, k: u64) -> E {
        let mut r = self.one();
        for _ in 0..k {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn mult_order(&self, a: &E) -> u64 {
        let one = self.one();
        let mut x = a.clone();
        let mut k = 1;
        while x != one {
            x = self.mul(&x, a);
            k += 1;
        }
        k
    }

    pub fn from_lib(&self, x: &FieldElement) -> E {
        let mut e = self.zero();
        for (i, c) in x.coeffs().iter().enumerate() {
            assert!(c.is_integer());
            e[i] = c.to_integer().to_i64().unwrap().rem_euclid(self.p);
        }
        e
    }

    pub fn to_lib(&self, field: Field, e: &E) -> FieldElement {
        let cs: Vec<BigRational> = e.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        field.from_coeffs(&cs).unwrap()
    }

    // projective line: normalized pairs, (x, 1) or (1, 0)

    pub fn point(&self, x: &E, y: &E) -> (E, E) {
        if self.is_zero(y) {
            (self.one(), self.zero())
        } else {
            (self.div(x, y), self.one())
        }
    }

    pub fn points(&self) -> Vec<(E, E)> {
        let mut v: Vec<(E, E)> = self.elements().into_iter().map(|x| (x, self.one())).collect();
        v.push((self.one(), self.zero()));
        v
    }

    pub fn point_from_lib(&self, q: &ProjPoint) -> (E, E) {
        match q.affine_coord() {
            Some(a) => (self.from_lib(a), self.one()),
            None => (self.one(), self.zero()),
        }
    }

    // matrices [a, b, c, d] acting by (x : y) -> (a x + b y : c x + d y)

    pub fn normalize(&self, m: [E; 4]) -> [E; 4] {
        let lead = m.iter().find(|c| !self.is_zero(c)).expect("nonzero matrix").clone();
        let inv = self.inv(&lead);
        m.map(|c| self.mul(&c, &inv))
    }

    pub fn mat_from_lib(&self, m: &Moebius) -> [E; 4] {
        let [a, b, c, d] = m.entries();
        self.normalize([self.from_lib(a), self.from_lib(b), self.from_lib(c), self.from_lib(d)])
    }

    pub fn compose(&self, m: &[E; 4], n: &[E; 4]) -> [E; 4] {
        let [a, b, c, d] = m;
        let [e, f, g, h] = n;
        let s = |x: &E, y: &E, z: &E, w: &E| self.add(&self.mul(x, y), &self.mul(z, w));
        self.normalize([s(a, e, b, g), s(a, f, b, h), s(c, e, d, g), s(c, f, d, h)])
    }

    pub fn apply(&self, m: &[E; 4], q: &(E, E)) -> (E, E) {
        let [a, b, c, d] = m;
        let (x, y) = q;
        let u = self.add(&self.mul(a, x), &self.mul(b, y));
        let v = self.add(&self.mul(c, x), &self.mul(d, y));
        self.point(&u, &v)
    }

    pub fn identity(&self) -> [E; 4] {
        [self.one(), self.zero(), self.zero(), self.one()]
    }

    /// All elements of the group generated by `gens`, by naive closure.
    pub fn closure(&self, gens: &[[E; 4]]) -> Vec<[E; 4]> {
        let mut elems = vec![self.identity()];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let h = self.compose(g, &elems[i]);
                if !elems.contains(&h) {
                    elems.push(h);
                }
            }
            i += 1;
        }
        elems
    }

    pub fn element_order(&self, m: &[E; 4]) -> usize {
        let id = self.identity();
        let mut x = m.clone();
        let mut k = 1;
        while x != id {
            x = self.compose(&x, m);
            k += 1;
        }
        k
    }

    pub fn orbit(&self, group: &[[E; 4]], q: &(E, E)) -> Vec<(E, E)> {
        let mut out: Vec<(E, E)> = Vec::new();
        for g in group {
            let r = self.apply(g, q);
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    pub fn stabilizer_order(&self, group: &[[E; 4]], q: &(E, E)) -> usize {
        group.iter().filter(|g| &self.apply(g, q) == q).count()
    }

    // polynomials over the field, lowest coefficient first

    pub fn poly_from_lib(&self, p: &galois_forge::poly::Poly) -> Vec<E> {
        p.coeffs().iter().map(|c| self.from_lib(c)).collect()
    }

    pub fn eval(&self, p: &[E], x: &E) -> E {
        p.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    /// Homogeneous evaluation of a degree-`n` form at `(x : y)`.
    pub fn eval_hom(&self, p: &[E], n: usize, q: &(E, E)) -> E {
        let (x, y) = q;
        let mut acc = self.zero();
        for (k, c) in p.iter().enumerate() {
            let term = self.mul(c, &self.mul(&self.pow(x, k as u64), &self.pow(y, (n - k) as u64)));
            acc = self.add(&acc, &term);
        }
        acc
    }

    /// Order of vanishing at `(x : y)` of the degree-`n` binary form `p`,
    /// by repeated synthetic division.
    pub fn vanishing_order(&self, p: &[E], n: usize, q: &(E, E)) -> Option<usize> {
        if p.iter().all(|c| self.is_zero(c)) {
            return None;
        }
        let mut cur: Vec<E> = p.to_vec();
        cur.resize(n + 1, self.zero());
        let mut k = 0;
        if self.is_zero(&q.1) {
            // at infinity the order is n minus the degree
            let deg = cur.iter().rposition(|c| !self.is_zero(c)).unwrap();
            return Some(n - deg);
        }
        let a = &q.0;
        loop {
            if !self.is_zero(&self.eval(&cur, a)) {
                return Some(k);
            }
            // divide by (x - a)
            let mut quo = vec![self.zero(); cur.len() - 1];
            let mut carry = self.zero();
            for i in (1..cur.len()).rev() {
                carry = self.add(&cur[i], &self.mul(&carry, a));
                quo[i - 1] = carry.clone();
            }
            cur = quo;
            k += 1;
        }
    }
}

pub fn f41() -> Gf {
    Gf::prime(41)
}

/// F_81 with the modulus the library selects automatically.
pub fn f81() -> Gf {
    Gf { p: 3, modulus: vec![2, 1, 0, 0, 1] }
}

/// Default configuration of every fixture, resolved.
pub fn fixture_configs() -> Vec<(String, galois_forge::config::Resolved)> {
    galois_forge::fixtures::all()
        .into_iter()
        .map(|f| (f.name.clone(), f.config.resolve(None).unwrap()))
        .collect()
}

pub fn oracle_for(field: Field) -> Gf {
    match field.size() {
        Some(41) => f41(),
        Some(81) => {
            assert_eq!(field.modulus_string(), "z^4+z+2");
            f81()
        }
        other => panic!("no oracle for field of size {other:?}"),
    }
}
