//! Exact coefficient fields: finite fields F_p[z]/(m(z)) and cyclotomic
//! fields Q[z]/(Phi_n(z)).
//!
//! Fields are interned: [`make_field`] returns a `&'static FieldSpec` and
//! two descriptions that resolve to the same field yield the same
//! reference. Elements carry that reference and a canonical payload, so
//! equality, ordering and hashing are structural.

mod cyclotomic;
pub mod expr;
mod finite;
mod modp;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use cyclotomic::CyclotomicField;
use finite::FiniteField;

pub use finite::MAX_FIELD_SIZE;

/// User-facing description of a field, as it appears in config files.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDescription", into = "RawDescription")]
pub enum FieldDescription {
    Finite {
        p: u64,
        ext_degree: u32,
        /// `None` selects the modulus automatically.
        modulus: Option<Vec<u64>>,
    },
    Cyclotomic {
        conductor: u32,
    },
}

#[derive(Serialize, Deserialize)]
struct RawDescription {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ext_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conductor: Option<u32>,
}

impl TryFrom<RawDescription> for FieldDescription {
    type Error = Error;

    fn try_from(raw: RawDescription) -> Result<Self> {
        match raw.kind.as_str() {
            "finite" => {
                let p = raw
                    .p
                    .ok_or_else(|| Error::Parse("finite field needs \"p\"".into()))?;
                let ext_degree = raw.ext_degree.unwrap_or(1);
                let modulus = match raw.modulus {
                    None => None,
                    Some(serde_json::Value::String(s)) if s == "auto" => None,
                    Some(v) => Some(serde_json::from_value::<Vec<u64>>(v).map_err(|_| {
                        Error::Parse(
                            "modulus must be \"auto\" or a little-endian coefficient list".into(),
                        )
                    })?),
                };
                Ok(FieldDescription::Finite { p, ext_degree, modulus })
            }
            "cyclotomic" => {
                let conductor = raw
                    .conductor
                    .ok_or_else(|| Error::Parse("cyclotomic field needs \"conductor\"".into()))?;
                Ok(FieldDescription::Cyclotomic { conductor })
            }
            other => Err(Error::UnsupportedKind(format!("field kind {other:?}"))),
        }
    }
}

impl From<FieldDescription> for RawDescription {
    fn from(d: FieldDescription) -> Self {
        match d {
            FieldDescription::Finite { p, ext_degree, modulus } => RawDescription {
                kind: "finite".into(),
                p: Some(p),
                ext_degree: Some(ext_degree),
                modulus: Some(match modulus {
                    None => serde_json::Value::String("auto".into()),
                    Some(m) => serde_json::json!(m),
                }),
                conductor: None,
            },
            FieldDescription::Cyclotomic { conductor } => RawDescription {
                kind: "cyclotomic".into(),
                p: None,
                ext_degree: None,
                modulus: None,
                conductor: Some(conductor),
            },
        }
    }
}

impl FieldDescription {
    pub fn finite(p: u64, ext_degree: u32) -> Self {
        FieldDescription::Finite { p, ext_degree, modulus: None }
    }

    pub fn cyclotomic(conductor: u32) -> Self {
        FieldDescription::Cyclotomic { conductor }
    }
}

#[derive(Debug)]
enum Backend {
    Finite(FiniteField),
    Cyclotomic(CyclotomicField),
}

/// A validated exact field. Obtain one through [`make_field`].
#[derive(Debug)]
pub struct FieldSpec {
    /// Description with the modulus resolved (never "auto" for finite kind).
    resolved: FieldDescription,
    backend: Backend,
}

pub type Field = &'static FieldSpec;

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
    }
}
impl Eq for FieldSpec {}

fn registry() -> &'static Mutex<HashMap<FieldDescription, Field>> {
    static REGISTRY: OnceLock<Mutex<HashMap<FieldDescription, Field>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Validates a description and returns the interned field.
pub fn make_field(desc: &FieldDescription) -> Result<Field> {
    let resolved = match desc {
        FieldDescription::Finite { p, ext_degree, modulus } => {
            let (p, k) = (*p, *ext_degree);
            if !modp::is_prime(p) {
                return Err(Error::NonPrimeCharacteristic(p));
            }
            if k == 0 {
                return Err(Error::UnsupportedKind("ext_degree must be >= 1".into()));
            }
            if p.checked_pow(k).map_or(true, |q| q > MAX_FIELD_SIZE) {
                return Err(Error::UnsupportedKind(format!(
                    "F_{p}^{k} exceeds the supported size {MAX_FIELD_SIZE}"
                )));
            }
            let m = match modulus {
                None => finite::auto_modulus(p, k),
                Some(m) => {
                    let monic = m.len() == k as usize + 1 && m.last() == Some(&1);
                    if !monic || m.iter().any(|&c| c >= p) || !modp::is_irreducible(m, p) {
                        return Err(Error::ReducibleModulus(format!("{m:?}")));
                    }
                    m.clone()
                }
            };
            FieldDescription::Finite { p, ext_degree: k, modulus: Some(m) }
        }
        FieldDescription::Cyclotomic { conductor } => {
            if *conductor == 0 {
                return Err(Error::UnsupportedKind("conductor must be >= 1".into()));
            }
            desc.clone()
        }
    };
    let mut reg = registry().lock().expect("field registry poisoned");
    if let Some(f) = reg.get(&resolved) {
        return Ok(f);
    }
    let backend = match &resolved {
        FieldDescription::Finite { p, ext_degree, modulus } => Backend::Finite(FiniteField::new(
            *p,
            *ext_degree,
            modulus.clone().expect("resolved"),
        )?),
        FieldDescription::Cyclotomic { conductor } => {
            Backend::Cyclotomic(CyclotomicField::new(*conductor)?)
        }
    };
    let field: Field = Box::leak(Box::new(FieldSpec { resolved: resolved.clone(), backend }));
    reg.insert(resolved, field);
    if desc != &field.resolved {
        reg.insert(desc.clone(), field);
    }
    Ok(field)
}

impl FieldSpec {
    pub fn description(&self) -> &FieldDescription {
        &self.resolved
    }

    pub fn characteristic(&self) -> u64 {
        match &self.backend {
            Backend::Finite(f) => f.p as u64,
            Backend::Cyclotomic(_) => 0,
        }
    }

    /// Number of elements, `None` for characteristic zero.
    pub fn size(&self) -> Option<u64> {
        match &self.backend {
            Backend::Finite(f) => Some(f.q as u64),
            Backend::Cyclotomic(_) => None,
        }
    }

    /// Dimension over the prime field (ext_degree, or phi(n)).
    pub fn dimension(&self) -> usize {
        match &self.backend {
            Backend::Finite(f) => f.degree as usize,
            Backend::Cyclotomic(c) => c.dim,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.backend, Backend::Finite(_))
    }

    pub fn modulus_string(&self) -> String {
        match &self.backend {
            Backend::Finite(f) => poly_string(f.modulus.iter().map(|&c| BigInt::from(c))),
            Backend::Cyclotomic(c) => poly_string(c.modulus.iter().cloned()),
        }
    }

    pub fn zero(&'static self) -> FieldElement {
        let repr = match &self.backend {
            Backend::Finite(_) => Repr::Finite(0),
            Backend::Cyclotomic(c) => Repr::Rational(c.zero()),
        };
        FieldElement { field: self, repr }
    }

    pub fn one(&'static self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&'static self, v: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&'static self, v: &BigInt) -> FieldElement {
        let repr = match &self.backend {
            Backend::Finite(f) => {
                let r = (v % BigInt::from(f.p)).to_i64().unwrap();
                Repr::Finite(f.from_i128(r as i128))
            }
            Backend::Cyclotomic(c) => {
                Repr::Rational(c.from_rational(BigRational::from_integer(v.clone())))
            }
        };
        FieldElement { field: self, repr }
    }

    /// The class of `z` (the adjoined generator).
    pub fn generator(&'static self) -> FieldElement {
        let repr = match &self.backend {
            Backend::Finite(f) => Repr::Finite(f.z),
            Backend::Cyclotomic(c) => Repr::Rational(c.generator()),
        };
        FieldElement { field: self, repr }
    }

    /// Builds an element from coefficients in powers of `z`, reducing as
    /// needed (integers reduced mod p in positive characteristic).
    pub fn from_coeffs(&'static self, coeffs: &[BigRational]) -> Result<FieldElement> {
        let repr = match &self.backend {
            Backend::Finite(f) => {
                let p = BigInt::from(f.p);
                let mut digits = Vec::with_capacity(coeffs.len());
                for c in coeffs {
                    let num = (c.numer() % &p + &p) % &p;
                    let den = (c.denom() % &p + &p) % &p;
                    if den.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    let n = num.to_u64().unwrap();
                    let d = den.to_u64().unwrap();
                    digits.push(n * modp::inv_mod(d, f.p as u64) % f.p as u64);
                }
                Repr::Finite(f.from_digits(&digits))
            }
            Backend::Cyclotomic(c) => Repr::Rational(c.reduce(coeffs.to_vec())),
        };
        Ok(FieldElement { field: self, repr })
    }

    /// All elements in canonical enumeration order (finite kind only).
    pub fn elements(&'static self) -> Option<impl Iterator<Item = FieldElement>> {
        match &self.backend {
            Backend::Finite(f) => Some(
                (0..f.q).map(move |code| FieldElement { field: self, repr: Repr::Finite(code) }),
            ),
            Backend::Cyclotomic(_) => None,
        }
    }

    /// A deterministic element of exact multiplicative order `r`.
    ///
    /// Cyclotomic kind: `z^(n/r)` when `r | n`, otherwise `(-z)^(2n/r)` when
    /// `n` is odd and `r | 2n`. Finite kind: the first element of order `r`
    /// in increasing encoding order.
    pub fn root_of_unity(&'static self, r: u64) -> Result<FieldElement> {
        let no_root = || Error::NoSuchRoot { order: r, field: self.to_string() };
        if r == 0 {
            return Err(no_root());
        }
        match &self.backend {
            Backend::Finite(f) => {
                if r % f.p as u64 == 0 || (f.q as u64 - 1) % r != 0 {
                    return Err(no_root());
                }
                (1..f.q)
                    .find(|&code| f.order(code) == Some(r))
                    .map(|code| FieldElement { field: self, repr: Repr::Finite(code) })
                    .ok_or_else(no_root)
            }
            Backend::Cyclotomic(c) => {
                let n = c.conductor as u64;
                let z = self.generator();
                if n % r == 0 {
                    Ok(z.pow((n / r) as i64))
                } else if n % 2 == 1 && (2 * n) % r == 0 {
                    Ok((-z).pow((2 * n / r) as i64))
                } else {
                    Err(no_root())
                }
            }
        }
    }
}

fn poly_string(coeffs: impl DoubleEndedIterator<Item = BigInt> + ExactSizeIterator) -> String {
    let v: Vec<BigInt> = coeffs.collect();
    let mut out = String::new();
    for (k, c) in v.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        if !out.is_empty() || c.is_negative() {
            out.push(if c.is_negative() { '-' } else { '+' });
        }
        let mag = c.abs();
        match k {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if !mag.is_one() {
                    out.push_str(&format!("{mag}*"));
                }
                out.push('z');
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
    }
    out
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.backend {
            Backend::Finite(ff) if ff.degree == 1 => write!(f, "F_{}", ff.p),
            Backend::Finite(ff) => write!(
                f,
                "F_{}^{} = F_{}[z]/({})",
                ff.p,
                ff.degree,
                ff.p,
                self.modulus_string()
            ),
            Backend::Cyclotomic(c) => write!(f, "Q(zeta_{})", c.conductor),
        }
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Finite(u32),
    Rational(Box<[BigRational]>),
}

/// An element of a [`FieldSpec`], always in canonical form.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    repr: Repr,
}

/// Arithmetic operations accepted by [`FieldElement::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Finite(c) => *c == 0,
            Repr::Rational(v) => CyclotomicField::is_zero(v),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// Coefficients in powers of `z`, as rationals (integers in `0..p` for
    /// the finite kind).
    pub fn coeffs(&self) -> Vec<BigRational> {
        match (&self.repr, &self.field.backend) {
            (Repr::Finite(c), Backend::Finite(f)) => f
                .digits(*c)
                .into_iter()
                .map(|d| BigRational::from_integer(d.into()))
                .collect(),
            (Repr::Rational(v), _) => v.to_vec(),
            _ => unreachable!(),
        }
    }

    /// Checked arithmetic; operators panic where this returns an error.
    pub fn arith(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        if self.field != other.field {
            return Err(Error::SpecMismatch);
        }
        let repr = match (&self.field.backend, &self.repr, &other.repr) {
            (Backend::Finite(f), Repr::Finite(a), Repr::Finite(b)) => Repr::Finite(match op {
                ArithOp::Add => f.add(*a, *b),
                ArithOp::Sub => f.sub(*a, *b),
                ArithOp::Mul => f.mul(*a, *b),
                ArithOp::Div => f.mul(*a, f.inv(*b).ok_or(Error::DivisionByZero)?),
            }),
            (Backend::Cyclotomic(c), Repr::Rational(a), Repr::Rational(b)) => {
                Repr::Rational(match op {
                    ArithOp::Add => c.add(a, b),
                    ArithOp::Sub => c.sub(a, b),
                    ArithOp::Mul => c.mul(a, b),
                    ArithOp::Div => c.mul(a, &c.inv(b).ok_or(Error::DivisionByZero)?),
                })
            }
            _ => unreachable!("representation always matches its field"),
        };
        Ok(FieldElement { field: self.field, repr })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        self.field.one().arith(self, ArithOp::Div)
    }

    /// Integer power; negative exponents invert (error on zero).
    pub fn try_pow(&self, e: i64) -> Result<FieldElement> {
        match (&self.field.backend, &self.repr) {
            (Backend::Finite(f), Repr::Finite(a)) => Ok(FieldElement {
                field: self.field,
                repr: Repr::Finite(f.pow(*a, e).ok_or(Error::DivisionByZero)?),
            }),
            _ => {
                let base = if e < 0 { self.inv()? } else { self.clone() };
                let mut e = e.unsigned_abs();
                let mut result = self.field.one();
                let mut b = base;
                while e > 0 {
                    if e & 1 == 1 {
                        result = &result * &b;
                    }
                    b = &b * &b;
                    e >>= 1;
                }
                Ok(result)
            }
        }
    }

    pub fn pow(&self, e: i64) -> FieldElement {
        self.try_pow(e).expect("zero raised to a negative power")
    }

    /// Exact multiplicative order, searched up to `bound` for the
    /// characteristic-zero kind.
    pub fn multiplicative_order(&self, bound: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        if let (Backend::Finite(f), Repr::Finite(a)) = (&self.field.backend, &self.repr) {
            return f.order(*a);
        }
        let one = self.field.one();
        let mut cur = self.clone();
        for k in 1..=bound {
            if cur == one {
                return Some(k);
            }
            cur = &cur * self;
        }
        None
    }

    /// Value as a small integer when the element lies in the prime subfield
    /// (finite kind: symmetric residue in `-(p-1)/2..=p/2`) or is an integer
    /// (cyclotomic kind).
    pub fn as_integer(&self) -> Option<BigInt> {
        match (&self.field.backend, &self.repr) {
            (Backend::Finite(f), Repr::Finite(c)) => {
                if *c >= f.p {
                    return None;
                }
                let v = *c as i64;
                let p = f.p as i64;
                Some(BigInt::from(if v > p / 2 { v - p } else { v }))
            }
            (Backend::Cyclotomic(_), Repr::Rational(v)) => CyclotomicField::is_integer_constant(v),
            _ => unreachable!(),
        }
    }

    /// Canonical expression in `z`, parseable by [`expr::parse`].
    pub fn to_expr(&self) -> String {
        match &self.repr {
            Repr::Finite(_) => {
                let coeffs: Vec<BigRational> = self.coeffs();
                CyclotomicField::format(&coeffs)
            }
            Repr::Rational(v) => CyclotomicField::format(v),
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && match (&self.repr, &other.repr) {
                (Repr::Finite(a), Repr::Finite(b)) => a == b,
                (Repr::Rational(a), Repr::Rational(b)) => a == b,
                _ => false,
            }
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.repr {
            Repr::Finite(a) => a.hash(state),
            Repr::Rational(v) => v.hash(state),
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite kind: by encoding. Cyclotomic kind: lexicographic from the
/// highest power of `z` down.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Finite(a), Repr::Finite(b)) => a.cmp(b),
            (Repr::Rational(a), Repr::Rational(b)) => a.iter().rev().cmp(b.iter().rev()),
            (Repr::Finite(_), Repr::Rational(_)) => Ordering::Less,
            (Repr::Rational(_), Repr::Finite(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:expr) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                self.arith(rhs, $op).expect(concat!("field ", stringify!($m)))
            }
        }
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, ArithOp::Add);
binop!(Sub, sub, ArithOp::Sub);
binop!(Mul, mul, ArithOp::Mul);
binop!(Div, div, ArithOp::Div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let repr = match (&self.field.backend, &self.repr) {
            (Backend::Finite(f), Repr::Finite(a)) => Repr::Finite(f.neg(*a)),
            (Backend::Cyclotomic(c), Repr::Rational(a)) => Repr::Rational(c.neg(a)),
            _ => unreachable!(),
        };
        FieldElement { field: self.field, repr }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Named roots of unity, e.g. `{"xi": 5, "i": 4}`, resolved in a field.
#[derive(Debug, Clone, Default)]
pub struct RootBindings {
    entries: Vec<(String, u64, FieldElement)>,
}

impl RootBindings {
    pub fn resolve(field: Field, orders: &[(String, u64)]) -> Result<Self> {
        let mut entries = Vec::with_capacity(orders.len());
        for (name, order) in orders {
            if name == "z" || !expr::is_identifier(name) {
                return Err(Error::Parse(format!("invalid root name {name:?}")));
            }
            entries.push((name.clone(), *order, field.root_of_unity(*order)?));
        }
        Ok(RootBindings { entries })
    }

    pub fn get(&self, name: &str) -> Option<&FieldElement> {
        self.entries.iter().find(|(n, _, _)| n == name).map(|(_, _, v)| v)
    }

    pub fn orders(&self) -> Vec<(String, u64)> {
        self.entries.iter().map(|(n, o, _)| (n.clone(), *o)).collect()
    }

    /// Human-friendly name: small integer, or `±root^k`, else the canonical
    /// `z`-expression.
    pub fn pretty(&self, x: &FieldElement) -> String {
        let int = x.as_integer();
        if let Some(n) = int.as_ref().filter(|n| n.abs() <= BigInt::one()) {
            return n.to_string();
        }
        for (name, order, root) in &self.entries {
            let mut power = x.field().one();
            for k in 0..*order {
                if k > 0 {
                    let sym = if k == 1 { name.clone() } else { format!("{name}^{k}") };
                    if &power == x {
                        return sym;
                    }
                    if -&power == *x {
                        return format!("-{sym}");
                    }
                }
                power = &power * root;
            }
        }
        int.map_or_else(|| x.to_expr(), |n| n.to_string())
    }
}
