//! Coefficient rings and exact linear algebra.
//!
//! Three rings are supported, all at an odd prime `p`: the p-local rationals
//! `Z_(p)`, the truncations `Z/p^N`, and `Z/p^N[h]/h^M`. The first two are chain
//! rings and admit Smith normal form; the third is only handled after
//! [`flatten_to_base`].

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Which coefficient ring a computation lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum RingSpec {
    PLocal {
        p: u64,
    },
    ChainRing {
        p: u64,
        #[serde(rename = "N")]
        n: u32,
    },
    TruncPoly {
        p: u64,
        #[serde(rename = "N")]
        n: u32,
        #[serde(rename = "M")]
        m: u32,
    },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_u64(p: u64, n: u32) -> u64 {
    p.pow(n)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

fn val_u64(mut x: u64, p: u64) -> u32 {
    let mut k = 0;
    while x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    k
}

impl RingSpec {
    pub fn p(&self) -> u64 {
        match *self {
            RingSpec::PLocal { p } | RingSpec::ChainRing { p, .. } | RingSpec::TruncPoly { p, .. } => p,
        }
    }

    /// Exponent N of the residue ring, `None` for the p-local integers.
    pub fn precision(&self) -> Option<u32> {
        match *self {
            RingSpec::PLocal { .. } => None,
            RingSpec::ChainRing { n, .. } | RingSpec::TruncPoly { n, .. } => Some(n),
        }
    }

    pub fn is_chain_ring(&self) -> bool {
        !matches!(self, RingSpec::TruncPoly { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p();
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidRing(format!("p = {p} is not an odd prime")));
        }
        if let Some(n) = self.precision() {
            if n == 0 {
                return Err(Error::InvalidRing("N must be at least 1".into()));
            }
            // keep p^N below 2^62 so residues multiply safely in u128
            if (n as f64) * (p as f64).log2() > 62.0 {
                return Err(Error::InvalidRing(format!("p^N too large: {p}^{n}")));
            }
        }
        if let RingSpec::TruncPoly { m, .. } = *self {
            if m == 0 {
                return Err(Error::InvalidRing("M must be at least 1".into()));
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> Option<u64> {
        self.precision().map(|n| pow_u64(self.p(), n))
    }

    /// The ring `Z/p^N` underlying a truncated polynomial ring.
    pub fn base(&self) -> RingSpec {
        match *self {
            RingSpec::TruncPoly { p, n, .. } => RingSpec::ChainRing { p, n },
            other => other,
        }
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match *self {
            RingSpec::PLocal { p } => Scalar::PLocal(PLocalInt::from_int(x, p)),
            RingSpec::ChainRing { p, n } => Scalar::Chain(ChainRingElem::new(x, p, n)),
            RingSpec::TruncPoly { p, n, m } => {
                let mut coeffs = vec![0u64; m as usize];
                coeffs[0] = ChainRingElem::new(x, p, n).residue;
                Scalar::Poly(TruncPolyElem { coeffs, p, n })
            }
        }
    }

    pub fn from_bigint(&self, x: &BigInt) -> Scalar {
        match *self {
            RingSpec::PLocal { p } => Scalar::PLocal(PLocalInt { value: BigRational::from_integer(x.clone()), p }),
            _ => {
                let m = BigInt::from(self.modulus().unwrap());
                self.from_i64(x.mod_floor(&m).to_i64().unwrap())
            }
        }
    }

    /// `num/den` with `den` prime to p.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let p = self.p();
        if den == 0 || den.unsigned_abs().is_multiple_of(p) {
            return Err(Error::NotPLocal(format!("{num}/{den}")));
        }
        match *self {
            RingSpec::PLocal { p } => Ok(Scalar::PLocal(PLocalInt::new(BigInt::from(num), BigInt::from(den), p)?)),
            _ => {
                let m = self.modulus().unwrap();
                let d = ChainRingElem::new(den, p, self.precision().unwrap()).residue;
                let inv = inv_mod(d, m).ok_or_else(|| Error::NotUnit(den.to_string()))?;
                let r = mul_mod(ChainRingElem::new(num, p, self.precision().unwrap()).residue, inv, m);
                Ok(self.from_i64(r as i64))
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    /// `p^k` in this ring.
    pub fn p_power(&self, k: u32) -> Scalar {
        match *self {
            RingSpec::PLocal { p } => Scalar::PLocal(PLocalInt {
                value: BigRational::from_integer(BigInt::from(p).pow(k)),
                p,
            }),
            _ => {
                let m = self.modulus().unwrap();
                let mut r = 1u64 % m;
                for _ in 0..k {
                    r = mul_mod(r, self.p(), m);
                }
                self.from_i64(r as i64)
            }
        }
    }

    /// The variable `h` of a truncated polynomial ring.
    pub fn variable(&self) -> Result<Scalar> {
        match *self {
            RingSpec::TruncPoly { p, n, m } => {
                let mut coeffs = vec![0u64; m as usize];
                if m > 1 {
                    coeffs[1] = 1;
                }
                Ok(Scalar::Poly(TruncPolyElem { coeffs, p, n }))
            }
            other => Err(Error::InvalidRing(format!("{other} has no polynomial variable"))),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RingSpec::PLocal { p } => write!(f, "Z_({p})"),
            RingSpec::ChainRing { p, n } => write!(f, "Z/{p}^{n}"),
            RingSpec::TruncPoly { p, n, m } => write!(f, "Z/{p}^{n}[h]/h^{m}"),
        }
    }
}

/// Exact rational with denominator prime to `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLocalInt {
    value: BigRational,
    p: u64,
}

impl PLocalInt {
    pub fn new(num: BigInt, den: BigInt, p: u64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NotPLocal("zero denominator".into()));
        }
        let value = BigRational::new(num, den);
        if (value.denom() % BigInt::from(p)).is_zero() {
            return Err(Error::NotPLocal(value.to_string()));
        }
        Ok(PLocalInt { value, p })
    }

    pub fn from_int(x: i64, p: u64) -> Self {
        PLocalInt { value: BigRational::from_integer(BigInt::from(x)), p }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn valuation(&self) -> Option<u32> {
        valuation(self)
    }
}

/// Largest k with p^k dividing x; `None` stands for infinity (x = 0).
pub fn valuation(x: &PLocalInt) -> Option<u32> {
    if x.value.is_zero() {
        return None;
    }
    let p = BigInt::from(x.p);
    let mut num = x.value.numer().abs();
    let mut k = 0;
    loop {
        let (q, r) = num.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        num = q;
        k += 1;
    }
}

/// Residue modulo p^N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChainRingElem {
    residue: u64,
    p: u64,
    n: u32,
}

impl ChainRingElem {
    pub fn new(x: i64, p: u64, n: u32) -> Self {
        let m = pow_u64(p, n) as i128;
        ChainRingElem { residue: (x as i128).rem_euclid(m) as u64, p, n }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    fn modulus(&self) -> u64 {
        pow_u64(self.p, self.n)
    }

    pub fn valuation(&self) -> Option<u32> {
        if self.residue == 0 {
            None
        } else {
            Some(val_u64(self.residue, self.p))
        }
    }
}

/// Element of Z/p^N[h]/h^M, stored by coefficients c_0..c_{M-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncPolyElem {
    coeffs: Vec<u64>,
    p: u64,
    n: u32,
}

impl TruncPolyElem {
    pub fn new(coeffs: &[i64], p: u64, n: u32, m: u32) -> Self {
        let mut c = vec![0u64; m as usize];
        for (i, &x) in coeffs.iter().enumerate().take(m as usize) {
            c[i] = ChainRingElem::new(x, p, n).residue;
        }
        TruncPolyElem { coeffs: c, p, n }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> ChainRingElem {
        ChainRingElem { residue: self.coeffs[k], p: self.p, n: self.n }
    }
}

/// An element of the active coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    PLocal(PLocalInt),
    Chain(ChainRingElem),
    Poly(TruncPolyElem),
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed coefficient rings: {:?} and {:?}", a.spec(), b.spec())
}

impl Scalar {
    pub fn spec(&self) -> RingSpec {
        match self {
            Scalar::PLocal(x) => RingSpec::PLocal { p: x.p },
            Scalar::Chain(x) => RingSpec::ChainRing { p: x.p, n: x.n },
            Scalar::Poly(x) => RingSpec::TruncPoly { p: x.p, n: x.n, m: x.coeffs.len() as u32 },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::PLocal(x) => x.value.is_zero(),
            Scalar::Chain(x) => x.residue == 0,
            Scalar::Poly(x) => x.coeffs.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::PLocal(x) => x.value.is_one(),
            Scalar::Chain(x) => x.residue == 1 % x.modulus(),
            Scalar::Poly(x) => x.coeffs[0] == 1 % pow_u64(x.p, x.n) && x.coeffs[1..].iter().all(|&c| c == 0),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::PLocal(a), Scalar::PLocal(b)) if a.p == b.p => {
                Scalar::PLocal(PLocalInt { value: &a.value + &b.value, p: a.p })
            }
            (Scalar::Chain(a), Scalar::Chain(b)) if a.p == b.p && a.n == b.n => {
                let m = a.modulus();
                Scalar::Chain(ChainRingElem { residue: ((a.residue as u128 + b.residue as u128) % m as u128) as u64, ..*a })
            }
            (Scalar::Poly(a), Scalar::Poly(b)) if a.p == b.p && a.n == b.n && a.coeffs.len() == b.coeffs.len() => {
                let m = pow_u64(a.p, a.n) as u128;
                let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| ((x as u128 + y as u128) % m) as u64).collect();
                Scalar::Poly(TruncPolyElem { coeffs, p: a.p, n: a.n })
            }
            _ => mismatch(self, other),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::PLocal(a) => Scalar::PLocal(PLocalInt { value: -&a.value, p: a.p }),
            Scalar::Chain(a) => {
                let m = a.modulus();
                Scalar::Chain(ChainRingElem { residue: (m - a.residue) % m, ..*a })
            }
            Scalar::Poly(a) => {
                let m = pow_u64(a.p, a.n);
                Scalar::Poly(TruncPolyElem { coeffs: a.coeffs.iter().map(|&c| (m - c) % m).collect(), p: a.p, n: a.n })
            }
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::PLocal(a), Scalar::PLocal(b)) if a.p == b.p => {
                Scalar::PLocal(PLocalInt { value: &a.value * &b.value, p: a.p })
            }
            (Scalar::Chain(a), Scalar::Chain(b)) if a.p == b.p && a.n == b.n => {
                Scalar::Chain(ChainRingElem { residue: mul_mod(a.residue, b.residue, a.modulus()), ..*a })
            }
            (Scalar::Poly(a), Scalar::Poly(b)) if a.p == b.p && a.n == b.n && a.coeffs.len() == b.coeffs.len() => {
                let m = pow_u64(a.p, a.n);
                let len = a.coeffs.len();
                let mut coeffs = vec![0u64; len];
                for i in 0..len {
                    if a.coeffs[i] == 0 {
                        continue;
                    }
                    for j in 0..len - i {
                        coeffs[i + j] = (coeffs[i + j] + mul_mod(a.coeffs[i], b.coeffs[j], m)) % m;
                    }
                }
                Scalar::Poly(TruncPolyElem { coeffs, p: a.p, n: a.n })
            }
            _ => mismatch(self, other),
        }
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut r = self.spec().one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// p-adic valuation; `None` for zero. Fails on truncated polynomials.
    pub fn valuation(&self) -> Result<Option<u32>> {
        match self {
            Scalar::PLocal(x) => Ok(valuation(x)),
            Scalar::Chain(x) => Ok(x.valuation()),
            Scalar::Poly(_) => Err(Error::NotChainRing(self.spec().to_string())),
        }
    }

    /// Cheap unit test for chain rings.
    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::PLocal(x) => {
                let r = x.value.numer() % BigInt::from(x.p);
                !r.is_zero()
            }
            Scalar::Chain(x) => x.residue % x.p != 0,
            Scalar::Poly(x) => x.coeffs[0] % x.p != 0,
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if !self.is_unit() {
            return Err(Error::NotUnit(self.to_string()));
        }
        match self {
            Scalar::PLocal(x) => Ok(Scalar::PLocal(PLocalInt { value: x.value.recip(), p: x.p })),
            Scalar::Chain(x) => Ok(Scalar::Chain(ChainRingElem { residue: inv_mod(x.residue, x.modulus()).unwrap(), ..*x })),
            Scalar::Poly(x) => {
                // u = c0 (1 + t) with t nilpotent; invert by the geometric series
                let spec = self.spec();
                let m = pow_u64(x.p, x.n);
                let c0inv = inv_mod(x.coeffs[0], m).unwrap();
                let mut t = x.clone();
                t.coeffs = t.coeffs.iter().map(|&c| mul_mod(c, c0inv, m)).collect();
                t.coeffs[0] = 0;
                let t = Scalar::Poly(t);
                let mut sum = spec.one();
                let mut term = spec.one();
                for _ in 0..x.coeffs.len() {
                    term = term.mul(&t).neg();
                    sum = sum.add(&term);
                }
                Ok(sum.mul(&spec.from_i64(c0inv as i64)))
            }
        }
    }

    /// Split a nonzero chain-ring element as `p^k * u` with `u` a unit.
    pub fn split_unit(&self) -> Result<(u32, Scalar)> {
        let k = self.valuation()?.ok_or_else(|| Error::NotUnit("0".into()))?;
        match self {
            Scalar::PLocal(x) => {
                let pk = BigRational::from_integer(BigInt::from(x.p).pow(k));
                Ok((k, Scalar::PLocal(PLocalInt { value: &x.value / pk, p: x.p })))
            }
            Scalar::Chain(x) => {
                let u = x.residue / pow_u64(x.p, k);
                Ok((k, Scalar::Chain(ChainRingElem { residue: u % x.modulus(), ..*x })))
            }
            Scalar::Poly(_) => unreachable!(),
        }
    }

    /// `a / b` in a chain ring, assuming `v(a) >= v(b)`. In `Z/p^N` the
    /// quotient is only defined modulo `p^(N - v(b))`; one representative is
    /// returned.
    pub fn div_exact(&self, b: &Scalar) -> Result<Scalar> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        match (self, b) {
            (Scalar::PLocal(x), Scalar::PLocal(y)) => {
                let q = PLocalInt { value: &x.value / &y.value, p: x.p };
                if (q.value.denom() % BigInt::from(x.p)).is_zero() {
                    return Err(Error::NotPLocal(q.value.to_string()));
                }
                Ok(Scalar::PLocal(q))
            }
            (Scalar::Chain(x), Scalar::Chain(_)) => {
                let (kb, ub) = b.split_unit()?;
                let pk = pow_u64(x.p, kb);
                if x.residue % pk != 0 {
                    return Err(Error::NotUnit(format!("{} does not divide {}", b, self)));
                }
                let q = x.residue / pk;
                let inv = ub.inverse()?;
                Ok(Scalar::Chain(ChainRingElem { residue: q % x.modulus(), ..*x }).mul(&inv))
            }
            _ => Err(Error::NotChainRing(self.spec().to_string())),
        }
    }

    /// Exact integer value for p-local integers with trivial denominator and
    /// the least non-negative residue for `Z/p^N`.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::PLocal(x) if x.value.is_integer() => Some(x.value.numer().clone()),
            Scalar::Chain(x) => Some(BigInt::from(x.residue)),
            _ => None,
        }
    }

    /// Map an element into the ring `spec`: `Z_(p)` and `Z/p^M` reduce into
    /// `Z/p^N` (`N <= M`) or its truncated polynomial ring; a truncated
    /// polynomial reduces into `Z/p^N` by setting `h = 0`.
    pub fn reduce_to(&self, spec: RingSpec) -> Result<Scalar> {
        match (self, spec) {
            (_, s) if s == self.spec() => Ok(self.clone()),
            (Scalar::PLocal(x), RingSpec::ChainRing { p, n }) if p == x.p => {
                let m = BigInt::from(pow_u64(p, n));
                let num = x.value.numer().mod_floor(&m).to_u64().unwrap();
                let den = x.value.denom().mod_floor(&m).to_u64().unwrap();
                let inv = inv_mod(den, m.to_u64().unwrap()).ok_or_else(|| Error::NotUnit(x.value.to_string()))?;
                Ok(Scalar::Chain(ChainRingElem { residue: mul_mod(num, inv, m.to_u64().unwrap()), p, n }))
            }
            (Scalar::Chain(x), RingSpec::ChainRing { p, n }) if p == x.p && n <= x.n => {
                Ok(Scalar::Chain(ChainRingElem { residue: x.residue % pow_u64(p, n), p, n }))
            }
            (Scalar::Poly(x), RingSpec::ChainRing { p, n }) if p == x.p && n <= x.n => {
                Ok(Scalar::Chain(ChainRingElem { residue: x.coeffs[0] % pow_u64(p, n), p, n }))
            }
            (Scalar::PLocal(_) | Scalar::Chain(_), RingSpec::TruncPoly { p, n, m }) => {
                let c = self.reduce_to(RingSpec::ChainRing { p, n })?;
                let mut coeffs = vec![0u64; m as usize];
                coeffs[0] = c.to_bigint().unwrap().to_u64().unwrap();
                Ok(Scalar::Poly(TruncPolyElem { coeffs, p, n }))
            }
            _ => Err(Error::SpecMismatch(self.spec().to_string(), spec.to_string())),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::PLocal(x) => write!(f, "{}", x.value),
            Scalar::Chain(x) => write!(f, "{}", x.residue),
            Scalar::Poly(x) => {
                let mut first = true;
                for (k, &c) in x.coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, "+")?;
                    }
                    first = false;
                    match k {
                        0 => write!(f, "{c}")?,
                        1 => write!(f, "{c}h")?,
                        _ => write!(f, "{c}h^{k}")?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// JSON form: integers as numbers, fractions as "a/b", polynomials as arrays.
pub fn scalar_to_json(x: &Scalar) -> Value {
    match x {
        Scalar::PLocal(v) => {
            if v.value.is_integer() {
                if let Some(i) = v.value.numer().to_i64() {
                    return Value::from(i);
                }
            }
            Value::from(v.value.to_string())
        }
        Scalar::Chain(v) => Value::from(v.residue),
        Scalar::Poly(v) => Value::from(v.coeffs.clone()),
    }
}

pub fn scalar_from_json(v: &Value, spec: RingSpec) -> Result<Scalar> {
    let bad = || Error::Schema(format!("cannot read {v} as a scalar of {spec}"));
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(bad)?;
            Ok(spec.from_i64(i))
        }
        Value::String(s) => {
            let (a, b) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s.trim(), "1"),
            };
            let num: BigInt = a.parse().map_err(|_| bad())?;
            let den: BigInt = b.parse().map_err(|_| bad())?;
            match spec {
                RingSpec::PLocal { p } => Ok(Scalar::PLocal(PLocalInt::new(num, den, p)?)),
                _ => {
                    let q = Scalar::PLocal(PLocalInt::new(num, den, spec.p())?);
                    q.reduce_to(spec)
                }
            }
        }
        Value::Array(items) => match spec {
            RingSpec::TruncPoly { p, n, m } => {
                let mut c = Vec::with_capacity(items.len());
                for it in items {
                    c.push(it.as_i64().ok_or_else(bad)?);
                }
                if c.len() > m as usize {
                    return Err(bad());
                }
                Ok(Scalar::Poly(TruncPolyElem::new(&c, p, n, m)))
            }
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `y + c * x`.
pub fn axpy(y: &[(usize, Scalar)], c: &Scalar, x: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j >= x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i >= y.len() || x[j].0 < y[i].0 {
            let v = c.mul(&x[j].1);
            if !v.is_zero() {
                out.push((x[j].0, v));
            }
            j += 1;
        } else {
            let v = y[i].1.add(&c.mul(&x[j].1));
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Accumulate `c * e_index` into an unsorted map-backed vector.
pub fn sparse_from_map(m: std::collections::BTreeMap<usize, Scalar>) -> SparseVec {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Row-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub nrows: usize,
    pub ncols: usize,
    pub spec: RingSpec,
    rows: Vec<SparseVec>,
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize, spec: RingSpec) -> Self {
        Matrix { nrows, ncols, spec, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize, spec: RingSpec) -> Self {
        let mut m = Matrix::zeros(n, n, spec);
        for i in 0..n {
            m.rows[i].push((i, spec.one()));
        }
        m
    }

    pub fn from_rows(nrows: usize, ncols: usize, spec: RingSpec, rows: Vec<SparseVec>) -> Self {
        assert_eq!(rows.len(), nrows);
        Matrix { nrows, ncols, spec, rows }
    }

    /// Build from column vectors (each the image of a source basis element).
    pub fn from_columns(nrows: usize, spec: RingSpec, cols: &[SparseVec]) -> Self {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); nrows];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col {
                if !v.is_zero() {
                    rows[*i].push((j, v.clone()));
                }
            }
        }
        Matrix { nrows, ncols: cols.len(), spec, rows }
    }

    pub fn from_dense(spec: RingSpec, dense: &[Vec<Scalar>]) -> Self {
        let nrows = dense.len();
        let ncols = dense.first().map_or(0, |r| r.len());
        let rows = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
            .collect();
        Matrix { nrows, ncols, spec, rows }
    }

    pub fn from_ints(spec: RingSpec, dense: &[Vec<i64>]) -> Self {
        let d: Vec<Vec<Scalar>> = dense.iter().map(|r| r.iter().map(|&x| spec.from_i64(x)).collect()).collect();
        let mut m = Matrix::from_dense(spec, &d);
        if dense.is_empty() {
            m.ncols = 0;
        }
        m
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows[i]
            .binary_search_by_key(&j, |e| e.0)
            .map(|k| self.rows[i][k].1.clone())
            .unwrap_or_else(|_| self.spec.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                if v.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    row.insert(k, (j, v));
                }
            }
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![self.spec.zero(); self.ncols]; self.nrows];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                d[i][*j] = v.clone();
            }
        }
        d
    }

    pub fn transpose(&self) -> Matrix {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                rows[*j].push((i, v.clone()));
            }
        }
        Matrix { nrows: self.ncols, ncols: self.nrows, spec: self.spec, rows }
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().rows
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut rows = Vec::with_capacity(self.nrows);
        for r in &self.rows {
            let mut acc: SparseVec = Vec::new();
            for (k, a) in r {
                acc = axpy(&acc, a, &other.rows[*k]);
            }
            rows.push(acc);
        }
        Matrix { nrows: self.nrows, ncols: other.ncols, spec: self.spec, rows }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let one = self.spec.one();
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| axpy(a, &one, b)).collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, spec: self.spec, rows }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(j, v)| (*j, v.mul(c))).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, spec: self.spec, rows }
    }

    /// Apply to a sparse column vector.
    pub fn apply(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let mut acc = self.spec.zero();
            let (mut a, mut b) = (0, 0);
            while a < r.len() && b < x.len() {
                match r[a].0.cmp(&x[b].0) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        acc = acc.add(&r[a].1.mul(&x[b].1));
                        a += 1;
                        b += 1;
                    }
                }
            }
            if !acc.is_zero() {
                out.push((i, acc));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut colmap = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            colmap[c] = k;
        }
        let out = rows
            .iter()
            .map(|&i| {
                let mut r: SparseVec =
                    self.rows[i].iter().filter(|(j, _)| colmap[*j] != usize::MAX).map(|(j, v)| (colmap[*j], v.clone())).collect();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        Matrix { nrows: rows.len(), ncols: cols.len(), spec: self.spec, rows: out }
    }

    /// Re-express all entries in another ring (see [`Scalar::reduce_to`]).
    pub fn reduce_to(&self, spec: RingSpec) -> Result<Matrix> {
        let mut rows = Vec::with_capacity(self.nrows);
        for r in &self.rows {
            let mut out = Vec::with_capacity(r.len());
            for (j, v) in r {
                let w = v.reduce_to(spec)?;
                if !w.is_zero() {
                    out.push((*j, w));
                }
            }
            rows.push(out);
        }
        Ok(Matrix { nrows: self.nrows, ncols: self.ncols, spec, rows })
    }
}

/// Result of a Smith reduction `U * A * V = D`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// p-exponents of the nonzero diagonal entries, nondecreasing.
    pub exponents: Vec<u32>,
    pub d: Matrix,
    pub u: Matrix,
    pub v: Matrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }
}

#[derive(Clone, Copy, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub v: bool,
    pub vinv: bool,
}

pub(crate) struct Pivot {
    pub row: usize,
    pub col: usize,
    pub exp: u32,
    pub value: Scalar,
}

pub(crate) struct Elimination {
    pub pivots: Vec<Pivot>,
    /// rows of U (nrows x nrows)
    pub u: Vec<SparseVec>,
    /// columns of V (ncols x ncols)
    pub v: Vec<SparseVec>,
    /// rows of V^{-1}
    pub vinv: Vec<SparseVec>,
}

fn unit_vectors(n: usize, spec: RingSpec) -> Vec<SparseVec> {
    (0..n).map(|i| vec![(i, spec.one())]).collect()
}

/// Pivoted elimination over a chain ring. Pivots always have minimal
/// valuation among the remaining entries, so every division is exact.
pub(crate) fn eliminate(a: &Matrix, track: Track) -> Result<Elimination> {
    if !a.spec.is_chain_ring() {
        return Err(Error::NotChainRing(a.spec.to_string()));
    }
    let spec = a.spec;
    let mut rows = a.rows.clone();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.ncols];
    for (i, r) in rows.iter().enumerate() {
        for (j, _) in r {
            col_rows[*j].insert(i);
        }
    }
    let mut row_done = vec![false; a.nrows];
    let mut u = if track.u { unit_vectors(a.nrows, spec) } else { Vec::new() };
    let mut v = if track.v { unit_vectors(a.ncols, spec) } else { Vec::new() };
    let mut vinv = if track.vinv { unit_vectors(a.ncols, spec) } else { Vec::new() };
    let mut pivots = Vec::new();

    let mut do_pivot = |i: usize,
                        j: usize,
                        rows: &mut Vec<SparseVec>,
                        col_rows: &mut Vec<BTreeSet<usize>>,
                        row_done: &mut Vec<bool>,
                        pivots: &mut Vec<Pivot>|
     -> Result<()> {
        let piv = rows[i].iter().find(|e| e.0 == j).unwrap().1.clone();
        let others: Vec<usize> = col_rows[j].iter().copied().filter(|&r| r != i).collect();
        let prow = rows[i].clone();
        for r in others {
            let a_rj = rows[r].iter().find(|e| e.0 == j).unwrap().1.clone();
            let c = a_rj.div_exact(&piv)?.neg();
            let old: BTreeSet<usize> = rows[r].iter().map(|e| e.0).collect();
            let new_row = axpy(&rows[r], &c, &prow);
            let new: BTreeSet<usize> = new_row.iter().map(|e| e.0).collect();
            for k in old.difference(&new) {
                col_rows[*k].remove(&r);
            }
            for k in new.difference(&old) {
                col_rows[*k].insert(r);
            }
            rows[r] = new_row;
            if track.u {
                let ui = u[i].clone();
                u[r] = axpy(&u[r], &c, &ui);
            }
        }
        // column operations clear the rest of the pivot row
        for (jj, aij) in prow.iter() {
            if *jj == j {
                continue;
            }
            let c = aij.div_exact(&piv)?;
            if track.v {
                let vj = v[j].clone();
                v[*jj] = axpy(&v[*jj], &c.neg(), &vj);
            }
            if track.vinv {
                let vjj = vinv[*jj].clone();
                vinv[j] = axpy(&vinv[j], &c, &vjj);
            }
            col_rows[*jj].remove(&i);
        }
        rows[i] = vec![(j, piv.clone())];
        row_done[i] = true;
        let (exp, _) = piv.split_unit()?;
        pivots.push(Pivot { row: i, col: j, exp, value: piv });
        Ok(())
    };

    // phase 1: unit pivots, preferring sparse columns
    loop {
        let mut progress = false;
        for i in 0..a.nrows {
            if row_done[i] {
                continue;
            }
            let mut best: Option<(usize, usize)> = None;
            for (j, x) in &rows[i] {
                if x.is_unit() {
                    let cost = col_rows[*j].len();
                    if best.is_none_or(|(_, c)| cost < c) {
                        best = Some((*j, cost));
                    }
                }
            }
            if let Some((j, _)) = best {
                do_pivot(i, j, &mut rows, &mut col_rows, &mut row_done, &mut pivots)?;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    // phase 2: minimal valuation pivots
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in 0..a.nrows {
            if row_done[i] {
                continue;
            }
            for (j, x) in &rows[i] {
                let k = x.valuation()?.unwrap();
                if best.is_none_or(|(b, _, _)| k < b) {
                    best = Some((k, i, *j));
                }
            }
        }
        match best {
            Some((_, i, j)) => do_pivot(i, j, &mut rows, &mut col_rows, &mut row_done, &mut pivots)?,
            None => break,
        }
    }
    Ok(Elimination { pivots, u, v, vinv })
}

/// Smith normal form over `Z_(p)` or `Z/p^N`.
pub fn smith_normal_form(a: &Matrix) -> Result<SmithForm> {
    let spec = a.spec;
    let mut el = eliminate(a, Track { u: true, v: true, vinv: false })?;
    el.pivots.sort_by_key(|p| (p.exp, p.row, p.col));
    let mut used_rows = vec![false; a.nrows];
    let mut used_cols = vec![false; a.ncols];
    let mut row_order = Vec::with_capacity(a.nrows);
    let mut col_order = Vec::with_capacity(a.ncols);
    let mut scales = Vec::new();
    for p in &el.pivots {
        used_rows[p.row] = true;
        used_cols[p.col] = true;
        row_order.push(p.row);
        col_order.push(p.col);
        let (_, unit) = p.value.split_unit()?;
        scales.push(unit.inverse()?);
    }
    row_order.extend((0..a.nrows).filter(|&i| !used_rows[i]));
    col_order.extend((0..a.ncols).filter(|&j| !used_cols[j]));
    let mut urows = Vec::with_capacity(a.nrows);
    for (k, &r) in row_order.iter().enumerate() {
        let row = el.u[r].clone();
        if k < scales.len() {
            urows.push(row.iter().map(|(j, x)| (*j, x.mul(&scales[k]))).collect());
        } else {
            urows.push(row);
        }
    }
    let u = Matrix::from_rows(a.nrows, a.nrows, spec, urows);
    let vcols: Vec<SparseVec> = col_order.iter().map(|&c| el.v[c].clone()).collect();
    let v = Matrix::from_columns(a.ncols, spec, &vcols);
    let mut d = Matrix::zeros(a.nrows, a.ncols, spec);
    let exponents: Vec<u32> = el.pivots.iter().map(|p| p.exp).collect();
    for (k, &e) in exponents.iter().enumerate() {
        d.set(k, k, spec.p_power(e));
    }
    Ok(SmithForm { exponents, d, u, v })
}

/// p-exponents of the nonzero Smith invariants, without transforms.
pub fn smith_exponents(a: &Matrix) -> Result<Vec<u32>> {
    let el = eliminate(a, Track::default())?;
    let mut e: Vec<u32> = el.pivots.iter().map(|p| p.exp).collect();
    e.sort_unstable();
    Ok(e)
}

/// Cokernel of `a` as `(free rank, torsion exponents)`. Over `Z/p^N` a summand
/// `Z/p^N` counts as free.
pub fn cokernel(a: &Matrix) -> Result<(usize, Vec<u32>)> {
    let e = smith_exponents(a)?;
    let n = a.spec.precision();
    let torsion: Vec<u32> = e.iter().copied().filter(|&x| x > 0 && n.is_none_or(|n| x < n)).collect();
    let free = a.nrows - e.len() + e.iter().filter(|&&x| n == Some(x)).count();
    Ok((free, torsion))
}

/// Length of the cokernel of a matrix over `Z/p^N` (its cardinality is
/// `p^length`).
pub fn cokernel_length(a: &Matrix) -> Result<u64> {
    let n = a.spec.precision().ok_or_else(|| Error::InvalidRing("cokernel length needs Z/p^N".into()))?;
    let e = smith_exponents(a)?;
    let free = (a.nrows - e.len()) as u64;
    Ok(free * n as u64 + e.iter().map(|&x| x as u64).sum::<u64>())
}

/// Replace every entry of a matrix over `Z/p^N[h]/h^M` by its `M x M`
/// regular representation on the basis `1, h, ..., h^{M-1}`.
pub fn flatten_to_base(a: &Matrix) -> Result<Matrix> {
    let (p, n, m) = match a.spec {
        RingSpec::TruncPoly { p, n, m } => (p, n, m as usize),
        other => return Err(Error::InvalidRing(format!("flatten_to_base expects a truncated polynomial ring, got {other}"))),
    };
    let base = RingSpec::ChainRing { p, n };
    let mut rows: Vec<SparseVec> = vec![Vec::new(); a.nrows * m];
    for (i, r) in a.rows.iter().enumerate() {
        for (j, x) in r {
            let c = match x {
                Scalar::Poly(c) if c.coeffs.len() == m && c.p == p && c.n == n => c,
                _ => return Err(Error::SpecMismatch(x.spec().to_string(), a.spec.to_string())),
            };
            for l in 0..m {
                for k in 0..=l {
                    let v = c.coeffs[l - k];
                    if v != 0 {
                        rows[i * m + l].push((j * m + k, base.from_i64(v as i64)));
                    }
                }
            }
        }
    }
    for r in rows.iter_mut() {
        r.sort_by_key(|e| e.0);
    }
    Ok(Matrix { nrows: a.nrows * m, ncols: a.ncols * m, spec: base, rows })
}
