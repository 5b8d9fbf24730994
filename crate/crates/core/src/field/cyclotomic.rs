//! Cyclotomic fields Q[z]/(Phi_n(z)) with arbitrary-precision rational
//! coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug)]
pub(crate) struct CyclotomicField {
    pub conductor: u32,
    pub dim: usize,
    /// Monic n-th cyclotomic polynomial, little-endian.
    pub modulus: Vec<BigInt>,
}

pub(crate) type Coeffs = Box<[BigRational]>;

/// Exact division of integer polynomials by a monic divisor.
fn div_exact_monic(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - dm];
    for top in (dm..r.len()).rev() {
        let c = r[top].clone();
        if c.is_zero() {
            continue;
        }
        q[top - dm] = c.clone();
        for (i, mi) in m.iter().enumerate() {
            r[top - dm + i] -= &c * mi;
        }
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

pub(crate) fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = div_exact_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

pub(crate) fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count()
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

// Little helpers on Q[z] used by the extended Euclidean algorithm.
fn qp_sub_mul(a: &[BigRational], b: &[BigRational], c: &[BigRational]) -> Vec<BigRational> {
    // a - b*c
    let mut out = a.to_vec();
    if !b.is_empty() && !c.is_empty() {
        let n = b.len() + c.len() - 1;
        if out.len() < n {
            out.resize(n, BigRational::zero());
        }
        for (i, x) in b.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in c.iter().enumerate() {
                out[i + j] -= x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn qp_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lc_inv = b[db].recip();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = &r[top] * &lc_inv;
        for (i, bi) in b.iter().enumerate() {
            r[top - db + i] -= &c * bi;
        }
        q[top - db] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

impl CyclotomicField {
    pub fn new(conductor: u32) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::UnsupportedKind("cyclotomic conductor must be >= 1".into()));
        }
        let modulus = cyclotomic_polynomial(conductor);
        let dim = modulus.len() - 1;
        debug_assert_eq!(dim, euler_phi(conductor));
        Ok(CyclotomicField { conductor, dim, modulus })
    }

    pub fn zero(&self) -> Coeffs {
        vec![BigRational::zero(); self.dim].into_boxed_slice()
    }

    pub fn from_rational(&self, v: BigRational) -> Coeffs {
        let mut c = self.zero();
        c[0] = v;
        c
    }

    /// Reduces an arbitrary coefficient vector modulo Phi_n.
    pub fn reduce(&self, mut v: Vec<BigRational>) -> Coeffs {
        let d = self.dim;
        while v.len() > d {
            let top = v.len() - 1;
            let c = v.pop().unwrap();
            if !c.is_zero() {
                for (i, mi) in self.modulus.iter().enumerate().take(d) {
                    if !mi.is_zero() {
                        v[top - d + i] -= &c * BigRational::from_integer(mi.clone());
                    }
                }
            }
        }
        v.resize(d, BigRational::zero());
        v.into_boxed_slice()
    }

    pub fn generator(&self) -> Coeffs {
        self.reduce(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn add(&self, a: &[BigRational], b: &[BigRational]) -> Coeffs {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[BigRational], b: &[BigRational]) -> Coeffs {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &[BigRational]) -> Coeffs {
        a.iter().map(|x| -x).collect()
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Coeffs {
        let mut out = vec![BigRational::zero(); 2 * self.dim - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.reduce(out)
    }

    pub fn inv(&self, a: &[BigRational]) -> Option<Coeffs> {
        let mut r0: Vec<BigRational> = self
            .modulus
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut r1 = a.to_vec();
        trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        // invariant: s_i * a == r_i (mod Phi_n)
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = qp_divrem(&r0, &r1);
            let s = qp_sub_mul(&s0, &q, &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant because Phi_n is irreducible
        let c = r1[0].recip();
        Some(self.reduce(s1.into_iter().map(|x| x * &c).collect()))
    }

    pub fn is_zero(a: &[BigRational]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    pub fn is_integer_constant(a: &[BigRational]) -> Option<BigInt> {
        if a[1..].iter().all(Zero::is_zero) && a[0].is_integer() {
            Some(a[0].to_integer())
        } else {
            None
        }
    }

    pub fn format(a: &[BigRational]) -> String {
        let mut out = String::new();
        for (k, c) in a.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push(if negative { '-' } else { '+' });
            }
            let mag_str = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match k {
                0 => out.push_str(&mag_str),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&mag_str);
                        out.push('*');
                    }
                    out.push('z');
                    if k > 1 {
                        out.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}
