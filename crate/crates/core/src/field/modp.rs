//! Dense polynomials over a prime field, used only while setting up
//! extension fields (irreducibility tests and table construction).

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo `m` (m nonzero).
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let inv_lc = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * inv_lc % p;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p - c * mi % p) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_poly_mod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's irreducibility test for a monic polynomial of degree `n` over F_p.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let mut m = m.to_vec();
    trim(&mut m);
    if m.len() < 2 {
        return false;
    }
    let n = (m.len() - 1) as u32;
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let frob = |k: u32| pow_poly_mod(&x, (p as u128).pow(k), &m, p);
    if !rem(&sub(&frob(n), &x, p), &m, p).is_empty() {
        return false;
    }
    for r in prime_factors(n as u64) {
        let h = sub(&frob(n / r as u32), &x, p);
        let g = gcd(&m, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
