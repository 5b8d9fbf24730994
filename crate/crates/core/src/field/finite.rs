//! Finite fields F_p[z]/(m(z)) backed by logarithm and Zech tables.
//!
//! An element is encoded by the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! of its coefficient vector, so the canonical enumeration order of
//! coefficient vectors is the natural order of encodings.

use super::modp;
use crate::error::{Error, Result};

/// Largest supported field size; tables are three `u32` arrays of this length.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const NONE: u32 = u32::MAX;

#[derive(Debug)]
pub(crate) struct FiniteField {
    pub p: u32,
    pub degree: u32,
    pub q: u32,
    /// Monic modulus, little-endian, length `degree + 1`.
    pub modulus: Vec<u64>,
    log: Vec<u32>,
    exp: Vec<u32>,
    /// `1 + g^k = g^{zech[k]}`, or `NONE` when `1 + g^k = 0`.
    zech: Vec<u32>,
    log_minus_one: u32,
    /// Encoding of the class of `z`.
    pub z: u32,
}

/// First monic irreducible polynomial of the given degree, in increasing
/// order of the encoding of its lower coefficients.
pub(crate) fn auto_modulus(p: u64, degree: u32) -> Vec<u64> {
    let count = p.pow(degree);
    for code in 0..count {
        let mut m = digits_u64(code, p, degree as usize);
        m.push(1);
        if modp::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits_u64(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

impl FiniteField {
    pub fn new(p: u64, degree: u32, modulus: Vec<u64>) -> Result<Self> {
        let q = p
            .checked_pow(degree)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or_else(|| {
                Error::UnsupportedKind(format!(
                    "F_{p}^{degree} exceeds the supported size {MAX_FIELD_SIZE}"
                ))
            })?;
        let qm1 = q - 1;
        let factors = modp::prime_factors(qm1);

        // smallest encoding of a primitive element
        let poly_of = |code: u64| digits_u64(code, p, degree as usize);
        let one = modp::rem(&[1], &modulus, p);
        let generator = (1..q)
            .find(|&code| {
                let g = poly_of(code);
                factors
                    .iter()
                    .all(|&r| modp::pow_poly_mod(&g, (qm1 / r) as u128, &modulus, p) != one)
            })
            .expect("the multiplicative group of a finite field is cyclic");

        let encode = |v: &[u64]| -> u32 {
            v.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
        };
        let g = poly_of(generator);
        let mut exp = Vec::with_capacity(qm1 as usize);
        let mut log = vec![NONE; q as usize];
        let mut cur = one.clone();
        for k in 0..qm1 {
            let code = encode(&cur);
            exp.push(code);
            log[code as usize] = k as u32;
            cur = modp::mul_mod(&cur, &g, &modulus, p);
        }

        let mut zech = vec![NONE; qm1 as usize];
        for k in 0..qm1 as usize {
            let code = exp[k];
            let d0 = code % p as u32;
            let bumped = code - d0 + (d0 + 1) % p as u32;
            if bumped != 0 {
                zech[k] = log[bumped as usize];
            }
        }
        let minus_one = (p - 1) as u32;
        let log_minus_one = log[minus_one as usize];
        let z = if degree == 1 {
            ((p - modulus[0]) % p) as u32
        } else {
            p as u32
        };
        Ok(FiniteField {
            p: p as u32,
            degree,
            q: q as u32,
            modulus,
            log,
            exp,
            zech,
            log_minus_one,
            z,
        })
    }

    #[inline]
    fn qm1(&self) -> u32 {
        self.q - 1
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let (la, lb) = (self.log[a as usize], self.log[b as usize]);
        let (lo, hi) = if la <= lb { (la, lb) } else { (lb, la) };
        let z = self.zech[(hi - lo) as usize];
        if z == NONE {
            0
        } else {
            self.exp[((lo as u64 + z as u64) % self.qm1() as u64) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 + self.log_minus_one as u64;
        self.exp[(l % self.qm1() as u64) as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(l % self.qm1() as u64) as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.qm1() - l) % self.qm1()) as usize])
    }

    pub fn pow(&self, a: u32, e: i64) -> Option<u32> {
        if a == 0 {
            return match e {
                0 => Some(1),
                e if e > 0 => Some(0),
                _ => None,
            };
        }
        let l = self.log[a as usize] as i128 * e as i128;
        Some(self.exp[l.rem_euclid(self.qm1() as i128) as usize])
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_i128(&self, v: i128) -> u32 {
        v.rem_euclid(self.p as i128) as u32
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize] as u64;
        let n = self.qm1() as u64;
        Some(n / num_integer::gcd(l, n))
    }

    pub fn digits(&self, code: u32) -> Vec<u64> {
        digits_u64(code as u64, self.p as u64, self.degree as usize)
    }

    pub fn from_digits(&self, digits: &[u64]) -> u32 {
        let p = self.p as u64;
        let reduced = modp::rem(
            &digits.iter().map(|d| d % p).collect::<Vec<_>>(),
            &self.modulus,
            p,
        );
        reduced.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arith() {
        let f = FiniteField::new(5, 1, auto_modulus(5, 1)).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.neg(1), 4);
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(f.sub(1, 3), 3);
        assert_eq!(f.z, 0);
    }

    #[test]
    fn f81_tables_consistent() {
        let m = auto_modulus(3, 4);
        let f = FiniteField::new(3, 4, m).unwrap();
        for a in 0..81u32 {
            for b in 0..81u32 {
                // addition agrees with digitwise addition
                let da = f.digits(a);
                let db = f.digits(b);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(f.add(a, b), f.from_digits(&s));
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }
}
