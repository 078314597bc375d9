//! p-series of formal group laws and the Euler-class polynomial `f` with
//! `f(-x^{p-1})` generating the same ideal as `[p](x)/x`.

use crate::coeff::{RingSpec, Scalar};
use crate::error::{Error, Result};

/// A p-series `[p](x)` given by its coefficients, lowest degree first.
/// Coefficients past the end are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PSeries {
    spec: RingSpec,
    coeffs: Vec<Scalar>,
}

impl PSeries {
    pub fn new(spec: RingSpec, coeffs: Vec<Scalar>) -> Result<Self> {
        spec.validate()?;
        if !spec.is_chain_ring() {
            return Err(Error::NotChainRing(spec.to_string()));
        }
        let zero = spec.zero();
        let at = |k: usize| coeffs.get(k).cloned().unwrap_or_else(|| zero.clone());
        if !at(0).is_zero() || at(1) != spec.from_i64(spec.p() as i64) {
            return Err(Error::InvalidHecke("a p-series starts p x + ...".into()));
        }
        Ok(PSeries { spec, coeffs })
    }

    pub fn from_ints(spec: RingSpec, coeffs: &[i64]) -> Result<Self> {
        Self::new(spec, coeffs.iter().map(|&c| spec.from_i64(c)).collect())
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.spec.zero())
    }
}

/// The Honda p-series `x^{p^h}` over `F_p`.
pub fn honda_pseries(p: u64, h: u32) -> Result<PSeries> {
    let spec = RingSpec::ChainRing { p, n: 1 };
    let deg = p.pow(h) as usize;
    let mut coeffs = vec![spec.zero(); deg + 1];
    coeffs[deg] = spec.one();
    PSeries::new(spec, coeffs)
}

fn trim(v: &mut Vec<Scalar>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn poly_mul(a: &[Scalar], b: &[Scalar], spec: RingSpec, cap: usize) -> Vec<Scalar> {
    let mut out = vec![spec.zero(); (a.len() + b.len()).min(cap + 1)];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j > cap {
                break;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Inverse of a power series with unit constant term, to degree `cap`.
fn series_inverse(a: &[Scalar], spec: RingSpec, cap: usize) -> Result<Vec<Scalar>> {
    let inv0 = a[0].inverse()?;
    let mut out = vec![spec.zero(); cap + 1];
    out[0] = inv0.clone();
    for k in 1..=cap {
        let mut s = spec.zero();
        for j in 1..=k.min(a.len() - 1) {
            s = s.add(&a[j].mul(&out[k - j]));
        }
        out[k] = s.neg().mul(&inv0);
    }
    Ok(out)
}

/// Weierstrass preparation: the monic distinguished polynomial generating
/// the same ideal as the series `q`. Returns its coefficients, lowest first.
pub fn weierstrass_polynomial(q: &[Scalar], spec: RingSpec) -> Result<Vec<Scalar>> {
    let n = q.iter().position(|c| c.is_unit()).ok_or_else(|| Error::Singular("series has no unit coefficient".into()))?;
    let precision = spec.precision().unwrap_or(64) as usize;
    let cap = n * (precision + 2) + q.len();
    let lo: Vec<Scalar> = q[..n].to_vec();
    let hi_inv = series_inverse(&q[n..], spec, cap)?;
    // x^n = Q q + R; iterate r -> r_low - (r_high / q_hi) q_low
    let mut r = vec![spec.zero(); n + 1];
    r[n] = spec.one();
    for _ in 0..=precision + 1 {
        let high: Vec<Scalar> = if r.len() > n { r[n..].to_vec() } else { Vec::new() };
        if high.iter().all(|c| c.is_zero()) {
            let mut rem: Vec<Scalar> = r[..n.min(r.len())].to_vec();
            rem.resize(n, spec.zero());
            let mut p: Vec<Scalar> = rem.iter().map(|c| c.neg()).collect();
            p.push(spec.one());
            return Ok(p);
        }
        let t = poly_mul(&high, &hi_inv, spec, cap);
        let t = poly_mul(&t, &lo, spec, cap);
        let mut next: Vec<Scalar> = r[..n].to_vec();
        next.resize(next.len().max(t.len()), spec.zero());
        for (i, c) in t.iter().enumerate() {
            next[i] = next[i].sub(c);
        }
        trim(&mut next);
        r = next;
    }
    Err(Error::Singular("Weierstrass division does not terminate at this precision".into()))
}

/// The monic `f` of degree `(p^h - 1)/(p - 1)`, lowest coefficient first.
pub fn euler_poly(ps: &PSeries, h: u32) -> Result<Vec<Scalar>> {
    let spec = ps.spec();
    let p = spec.p() as usize;
    let q: Vec<Scalar> = (1..ps.coeffs().len().max(2)).map(|k| ps.coefficient(k)).collect();
    let big = weierstrass_polynomial(&q, spec)?;
    let n = big.len() - 1;
    if n != p.pow(h) - 1 {
        return Err(Error::Singular(format!("p-series has height {} rather than {h}", height_of(n + 1, p))));
    }
    let d = n / (p - 1);
    // f(-x^{p-1}) = (-1)^d P(x)
    let sign = |k: usize| if k.is_multiple_of(2) { spec.one() } else { spec.from_i64(-1) };
    let mut f = Vec::with_capacity(d + 1);
    for (i, c) in big.iter().enumerate() {
        if i % (p - 1) != 0 {
            if !c.is_zero() {
                return Err(Error::Singular(format!("x^{i} term is not a power of x^{}", p - 1)));
            }
            continue;
        }
        let k = i / (p - 1);
        f.push(c.mul(&sign(d)).mul(&sign(k)));
    }
    Ok(f)
}

fn height_of(mut deg: usize, p: usize) -> String {
    let mut h = 0;
    while deg > 1 && deg.is_multiple_of(p) {
        deg /= p;
        h += 1;
    }
    if deg == 1 {
        h.to_string()
    } else {
        "undefined".into()
    }
}

/// Whether `f(-x^{p-1})` lies in the ideal generated by `[p](x)/x`.
pub fn satisfies(f: &[Scalar], ps: &PSeries) -> Result<bool> {
    let spec = ps.spec();
    let p = spec.p() as usize;
    let q: Vec<Scalar> = (1..ps.coeffs().len().max(2)).map(|k| ps.coefficient(k)).collect();
    let big = weierstrass_polynomial(&q, spec)?;
    let n = big.len() - 1;
    let mut sub = vec![spec.zero(); (f.len() - 1) * (p - 1) + 1];
    for (k, c) in f.iter().enumerate() {
        sub[k * (p - 1)] = if k % 2 == 0 { c.clone() } else { c.neg() };
    }
    // reduce modulo the monic P
    for i in (n..sub.len()).rev() {
        let c = sub[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, b) in big.iter().enumerate() {
            sub[i - n + j] = sub[i - n + j].sub(&c.mul(b));
        }
    }
    Ok(sub.iter().all(|c| c.is_zero()))
}

/// Render a polynomial in `e`, highest term first, e.g. `e^4` or `e + 3`.
pub fn render_poly(f: &[Scalar], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in f.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let coeff = c.to_string();
        let (negative, magnitude) = match coeff.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, coeff),
        };
        let term = if mono.is_empty() {
            magnitude
        } else if magnitude == "1" {
            mono
        } else {
            format!("{magnitude}*{mono}")
        };
        match (out.is_empty(), negative) {
            (true, false) => out = term,
            (true, true) => out = format!("-{term}"),
            (false, false) => out = format!("{out} + {term}"),
            (false, true) => out = format!("{out} - {term}"),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn honda_is_a_monomial() {
        let ps = honda_pseries(3, 2).unwrap();
        assert_eq!(ps.coeffs().len(), 10);
        assert!(ps.coefficient(9).is_one());
        assert_eq!(honda_pseries(5, 2).unwrap().coeffs().len(), 26);
    }

    #[test]
    fn honda_gives_pure_power() {
        for (h, d) in [(1, 1), (2, 4), (3, 13)] {
            let f = euler_poly(&honda_pseries(3, h).unwrap(), h).unwrap();
            assert_eq!(f.len(), d + 1);
            assert!(f[d].is_one());
            assert!(f[..d].iter().all(|c| c.is_zero()));
        }
        let f = euler_poly(&honda_pseries(3, 2).unwrap(), 2).unwrap();
        assert_eq!(render_poly(&f, "e"), "e^4");
        let spec = RingSpec::PLocal { p: 3 };
        let g = vec![spec.from_i64(-3), spec.from_i64(-1), spec.zero(), spec.from_i64(2)];
        assert_eq!(render_poly(&g, "e"), "2*e^3 - e - 3");
    }

    #[test]
    fn height_one_over_p_local() {
        let spec = RingSpec::PLocal { p: 3 };
        let f = euler_poly(&PSeries::from_ints(spec, &[0, 3, 0, -1]).unwrap(), 1).unwrap();
        assert_eq!(f, vec![spec.from_i64(3), spec.one()]);
        let g = euler_poly(&PSeries::from_ints(spec, &[0, 3, 0, 1]).unwrap(), 1).unwrap();
        assert_eq!(g, vec![spec.from_i64(-3), spec.one()]);
    }

    #[test]
    fn weierstrass_over_chain_ring() {
        // [p](x) = 3x + 3x^2 + x^3 over Z/27
        let spec = RingSpec::ChainRing { p: 3, n: 3 };
        let ps = PSeries::from_ints(spec, &[0, 3, 3, 1]).unwrap();
        let q: Vec<Scalar> = (1..4).map(|k| ps.coefficient(k)).collect();
        let big = weierstrass_polynomial(&q, spec).unwrap();
        assert_eq!(big.len(), 3);
        assert!(big[0].valuation().unwrap() >= Some(1));
    }

    #[test]
    fn perturbing_breaks_the_congruence() {
        let spec = RingSpec::PLocal { p: 3 };
        let ps = PSeries::from_ints(spec, &[0, 3, 0, -1]).unwrap();
        let f = euler_poly(&ps, 1).unwrap();
        assert!(satisfies(&f, &ps).unwrap());
        let mut g = f.clone();
        g[0] = g[0].add(&spec.one());
        assert!(!satisfies(&g, &ps).unwrap());
    }

    #[test]
    fn bad_start_rejected() {
        let spec = RingSpec::PLocal { p: 3 };
        assert!(PSeries::from_ints(spec, &[0, 1, 0, -1]).is_err());
    }
}
