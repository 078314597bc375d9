//! Pages of the weighted spectral sequence, asserted differentials, assembly
//! of the abutment, and closed-form answer tables used for cross-checking.
//!
//! Homological pages use `E^2_{s,t} = H_{s+1}(CE)_{t-1}`, so a class of
//! total degree `n` and internal degree `i` sits at `(n - 1, i + 1)` and
//! contributes to the abutment in degree `s + t = n + i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chain::{cohomology, homology, HomologyGroup, HomologySummary};
use crate::coeff::{cokernel, flatten_to_base, Matrix, RingSpec, Scalar};
use crate::error::{Error, Result};
use crate::hecke::{hecke_ce_complex, HeckeLieAlgebra, WeightPOpModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PageKind {
    Homological,
    Cohomological,
}

/// One page: `(s, t, w) -> group`. `period` is the periodicity of the
/// coefficients in `t` (2 for the even-periodic theories the engine
/// models); bidegrees are compared modulo it when locating targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: u32,
    pub kind: PageKind,
    pub period: i64,
    pub entries: BTreeMap<(i64, i64, u32), HomologyGroup>,
}

impl Page {
    pub fn new(r: u32, kind: PageKind) -> Self {
        Page { r, kind, period: 2, entries: BTreeMap::new() }
    }

    pub fn get(&self, s: i64, t: i64, w: u32) -> HomologyGroup {
        self.entries.get(&(s, t, w)).cloned().unwrap_or_default()
    }

    pub fn insert(&mut self, s: i64, t: i64, w: u32, g: HomologyGroup) {
        if g.is_zero() {
            return;
        }
        self.entries.entry((s, t, w)).or_default().add(&g);
    }

    /// Entries of a single weight.
    pub fn weight(&self, w: u32) -> Page {
        let entries = self.entries.iter().filter(|(k, _)| k.2 == w).map(|(k, v)| (*k, v.clone())).collect();
        Page { entries, ..*self }
    }

    /// The `s` values carrying a nonzero entry.
    pub fn lines(&self) -> BTreeSet<i64> {
        self.entries.keys().map(|k| k.0).collect()
    }

    pub fn total_free(&self) -> usize {
        self.entries.values().map(|g| g.free).sum()
    }

    pub fn torsion_classes(&self) -> Vec<((i64, i64, u32), u32)> {
        let mut out = Vec::new();
        for (k, g) in &self.entries {
            for &e in &g.torsion {
                out.push((*k, e));
            }
        }
        out
    }

    /// The same page with all torsion discarded.
    pub fn free_part(&self) -> Page {
        let mut out = Page { entries: BTreeMap::new(), ..*self };
        for (&(s, t, w), g) in &self.entries {
            out.insert(s, t, w, HomologyGroup { free: g.free, torsion: Vec::new() });
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(&(s, t, w), g)| json!({"s": s, "t": t, "w": w, "free": g.free, "torsion": g.torsion}))
            .collect();
        json!({"r": self.r, "kind": self.kind, "period": self.period, "entries": entries})
    }

    pub fn from_json_value(v: &Value) -> Result<Page> {
        #[derive(Deserialize)]
        struct Entry {
            s: i64,
            t: i64,
            w: u32,
            free: usize,
            #[serde(default)]
            torsion: Vec<u32>,
        }
        #[derive(Deserialize)]
        struct Raw {
            r: u32,
            kind: PageKind,
            #[serde(default = "two")]
            period: i64,
            entries: Vec<Entry>,
        }
        fn two() -> i64 {
            2
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| Error::Schema(e.to_string()))?;
        let mut page = Page { r: raw.r, kind: raw.kind, period: raw.period, entries: BTreeMap::new() };
        for e in raw.entries {
            let mut torsion = e.torsion;
            torsion.sort_unstable();
            page.insert(e.s, e.t, e.w, HomologyGroup { free: e.free, torsion });
        }
        Ok(page)
    }

    /// Tab-separated table with one row per `(s, t, w)`.
    pub fn to_tsv(&self, p: u64) -> String {
        let mut out = String::from("s\tt\tw\tfree\ttorsion\n");
        for (&(s, t, w), g) in &self.entries {
            let tors: Vec<String> = g.torsion.iter().map(|e| format!("Z/{p}^{e}")).collect();
            let _ = writeln!(out, "{s}\t{t}\t{w}\t{}\t{}", g.free, tors.join(","));
        }
        out
    }
}

fn reindex(h: &HomologySummary, kind: PageKind) -> Page {
    let mut page = Page::new(2, kind);
    for (&(n, i, w), g) in &h.entries {
        match kind {
            PageKind::Homological => page.insert(n - 1, i + 1, w, g.clone()),
            PageKind::Cohomological => page.insert(n - 1, i - 1, w, g.clone()),
        }
    }
    page
}

/// `E^2` from Hecke Lie algebra homology through weight `max_weight`. The
/// weight-0 unit of the Chevalley-Eilenberg complex lands at `(-1, 1)`.
pub fn e2_page(g: &HeckeLieAlgebra, max_weight: u32) -> Result<Page> {
    Ok(reindex(&homology(&hecke_ce_complex(g, max_weight)?)?, PageKind::Homological))
}

/// `E_2^{s,t} = H^{s+1}(CE^dual)_{t+1}`.
pub fn e2_page_cohomological(g: &HeckeLieAlgebra, max_weight: u32) -> Result<Page> {
    Ok(reindex(&cohomology(&hecke_ce_complex(g, max_weight)?)?, PageKind::Cohomological))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Effect {
    /// The image is all of the target's largest torsion summand.
    Surjects,
    /// The target's largest torsion exponent drops by this much.
    Drop(u32),
}

/// `d^r` from `source` to `(s - r, t + r - 1)` in the same weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialAssertion {
    pub r: u32,
    pub source: (i64, i64, u32),
    pub effect: Effect,
}

impl DifferentialAssertion {
    pub fn target(&self) -> (i64, i64, u32) {
        let (s, t, w) = self.source;
        (s - self.r as i64, t + self.r as i64 - 1, w)
    }
}

pub fn assertions_from_json(text: &str) -> Result<Vec<DifferentialAssertion>> {
    let v: Value = serde_json::from_str(text)?;
    serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))
}

fn same_t(a: i64, b: i64, period: i64) -> bool {
    if period == 0 {
        a == b
    } else {
        (a - b).rem_euclid(period) == 0
    }
}

/// Apply asserted differentials. The source keeps its free rank (a multiple
/// of the source class survives); the target's torsion shrinks.
pub fn apply_assertions(page: &Page, asserts: &[DifferentialAssertion]) -> Result<Page> {
    if page.kind != PageKind::Homological && !asserts.is_empty() {
        return Err(Error::InvalidAssertion("assertions are applied on homological pages".into()));
    }
    let mut out = page.clone();
    for a in asserts {
        if a.r < 2 || a.r < page.r {
            return Err(Error::InvalidAssertion(format!("d^{} cannot act on page {}", a.r, page.r)));
        }
        let (s, t, w) = a.source;
        if out.get(s, t, w).free == 0 {
            return Err(Error::InvalidAssertion(format!("empty source at ({s}, {t}, {w})")));
        }
        let (ts, tt, _) = a.target();
        let hits: Vec<(i64, i64, u32)> = out
            .entries
            .keys()
            .filter(|k| k.0 == ts && k.2 == w && same_t(k.1, tt, page.period))
            .copied()
            .collect();
        let with_torsion: Vec<_> = hits.iter().filter(|k| !out.entries[k].torsion.is_empty()).copied().collect();
        let key = match with_torsion.as_slice() {
            [k] => *k,
            [] if hits.is_empty() => {
                return Err(Error::InvalidAssertion(format!("target ({ts}, {tt}, {w}) is zero")));
            }
            [] => return Err(Error::InvalidAssertion(format!("target ({ts}, {tt}, {w}) is free"))),
            _ => return Err(Error::InvalidAssertion(format!("target ({ts}, {tt}, {w}) is ambiguous"))),
        };
        let g = out.entries.get_mut(&key).expect("target present");
        let e = g.torsion.pop().expect("torsion present");
        match a.effect {
            Effect::Surjects => {}
            Effect::Drop(u) if u > e => {
                return Err(Error::InvalidAssertion(format!("cannot drop Z/p^{e} by {u}")));
            }
            Effect::Drop(u) => {
                if e > u {
                    g.torsion.push(e - u);
                    g.torsion.sort_unstable();
                }
            }
        }
        if g.is_zero() {
            out.entries.remove(&key);
        }
        out.r = out.r.max(a.r + 1);
    }
    Ok(out)
}

/// The abutment: groups by `(weight, degree)` with `degree = s + t`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assembled {
    pub entries: BTreeMap<(u32, i64), HomologyGroup>,
}

impl Assembled {
    pub fn get(&self, w: u32, degree: i64) -> HomologyGroup {
        self.entries.get(&(w, degree)).cloned().unwrap_or_default()
    }

    pub fn insert(&mut self, w: u32, degree: i64, g: HomologyGroup) {
        if !g.is_zero() {
            self.entries.entry((w, degree)).or_default().add(&g);
        }
    }

    pub fn weight(&self, w: u32) -> Assembled {
        Assembled { entries: self.entries.iter().filter(|(k, _)| k.0 == w).map(|(k, v)| (*k, v.clone())).collect() }
    }

    /// Free ranks in one weight, by degree.
    pub fn free_ranks(&self, w: u32) -> BTreeMap<i64, usize> {
        self.entries.iter().filter(|(k, g)| k.0 == w && g.free > 0).map(|(k, g)| (k.1, g.free)).collect()
    }

    /// e.g. `S^0 R^1 + S^-1 Z/3^1` for one weight.
    pub fn render(&self, w: u32, p: u64) -> String {
        let parts: Vec<String> = self
            .entries
            .iter()
            .filter(|(k, _)| k.0 == w)
            .map(|(k, g)| format!("S^{} {}", k.1, g.render(p)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json_value(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(&(w, d), g)| json!({"w": w, "degree": d, "free": g.free, "torsion": g.torsion}))
            .collect();
        json!({ "entries": entries })
    }
}

/// Sum the lines of a final page. Two torsion contributions from different
/// lines in the same degree and weight are an extension problem and are
/// rejected.
pub fn assemble(einf: &Page) -> Result<Assembled> {
    let mut out = Assembled::default();
    let mut torsion_line: BTreeMap<(u32, i64), i64> = BTreeMap::new();
    for (&(s, t, w), g) in &einf.entries {
        let degree = match einf.kind {
            PageKind::Homological => s + t,
            PageKind::Cohomological => t - s,
        };
        if !g.torsion.is_empty() {
            let slot = if einf.period == 0 { degree } else { degree.rem_euclid(einf.period) };
            if let Some(&other) = torsion_line.get(&(w, slot)) {
                if other != s {
                    return Err(Error::AmbiguousExtension { degree, weight: w });
                }
            }
            torsion_line.insert((w, slot), s);
        }
        out.insert(w, degree, g.clone());
    }
    Ok(out)
}

/// The `d^{p-1}` from `gamma_p(x)` onto the torsion class of `[y]`, present
/// when `k` is even.
pub fn euclidean_assertions(k: i64, p: u64) -> Vec<DifferentialAssertion> {
    if k.rem_euclid(2) != 0 {
        return Vec::new();
    }
    let p = p as i64;
    vec![DifferentialAssertion { r: (p - 1) as u32, source: (p - 1, p * (k - 1) + 1, p as u32), effect: Effect::Drop(1) }]
}

/// The `d^{p-1}` from `gamma_p(cx)` onto the torsion class of `[cy]`.
pub fn surface_assertions(p: u64) -> Vec<DifferentialAssertion> {
    let p = p as i64;
    vec![DifferentialAssertion { r: (p - 1) as u32, source: (p - 1, 1 - p, p as u32), effect: Effect::Surjects }]
}

/// Weight-`p` answer for configurations in `R^n` with `S^k` labels:
/// free summands in the listed degrees plus `S^{k-1} E[e]/(f, e^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuclideanAnswer {
    pub p: u64,
    pub free_degrees: Vec<i64>,
    pub torsion_degree: i64,
    pub euler_power: u32,
}

pub fn closed_form_euclidean(n: u32, k: i64, p: u64) -> EuclideanAnswer {
    let pi = p as i64;
    let ni = n as i64;
    let (free_degrees, m) = match (n.is_multiple_of(2), k.rem_euclid(2) == 0) {
        (true, true) => (vec![k * pi, pi * k + ni - 1], n / 2 - 1),
        (true, false) => (Vec::new(), n / 2),
        (false, true) => (vec![k * pi], (n - 1) / 2),
        (false, false) => (vec![k + (2 * k + ni - 1) * (pi - 1) / 2], (n - 1) / 2),
    };
    EuclideanAnswer { p, free_degrees, torsion_degree: k - 1, euler_power: m }
}

impl EuclideanAnswer {
    /// Evaluate on a model: the torsion part is the cokernel of `e^m`.
    pub fn evaluate(&self, model: &WeightPOpModel) -> Result<Assembled> {
        let w = self.p as u32;
        let mut out = Assembled::default();
        for &d in &self.free_degrees {
            out.insert(w, d, HomologyGroup { free: 1, torsion: Vec::new() });
        }
        let (free, torsion) = cokernel(&model.euler_power(self.euler_power))?;
        out.insert(w, self.torsion_degree, HomologyGroup { free, torsion });
        Ok(out)
    }

    pub fn render(&self, theory: &str) -> String {
        let mut parts: Vec<String> = self.free_degrees.iter().map(|d| format!("S^{d} {theory}")).collect();
        if self.euler_power > 0 {
            parts.push(format!("S^{} {theory}[e]/(f, e^{})", self.torsion_degree, self.euler_power));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// The weight-`p` `E^2` expected at height one, line by line: the `s = 0`
/// torsion class, `s = (p-1)/2` for `n, k` odd, `s = p-2` for `n, k` even,
/// and `s = p-1` for `k` even.
pub fn closed_form_euclidean_e2(n: u32, k: i64, p: u64) -> Page {
    let (pi, ni) = (p as i64, n as i64);
    let w = p as u32;
    let k_even = k.rem_euclid(2) == 0;
    let n_even = n.is_multiple_of(2);
    let free = |r: usize| HomologyGroup { free: r, torsion: Vec::new() };
    let mut page = Page::new(2, PageKind::Homological);
    let e0 = if k_even { n.div_ceil(2) } else { n / 2 };
    if e0 > 0 {
        page.insert(0, k - 1, w, HomologyGroup { free: 0, torsion: vec![e0] });
    }
    if !n_even && !k_even {
        let s = (pi - 1) / 2;
        page.insert(s, k + (2 * k + ni - 1) * (pi - 1) / 2 - s, w, free(1));
    }
    if n_even && k_even {
        page.insert(pi - 2, pi * k + ni - 1 - (pi - 2), w, free(1));
    }
    if k_even {
        page.insert(pi - 1, pi * (k - 1) + 1, w, free(1));
    }
    page
}

/// `min((p^h - 1)/(p - 1), m)`.
pub fn kh_multiplicity(p: u64, h: u32, m: u32) -> u64 {
    ((p.pow(h) - 1) / (p - 1)).min(m as u64)
}

/// Total rank of the Morava K-theory of the weight-`p` summand.
pub fn kh_euclidean_total(n: u32, k: i64, p: u64, h: u32) -> u64 {
    let a = closed_form_euclidean(n, k, p);
    a.free_degrees.len() as u64 + 2 * kh_multiplicity(p, h, a.euler_power)
}

/// Number of monomials of degree `m` in `vars` variables.
fn monomials(vars: i64, m: i64) -> u64 {
    if m < 0 {
        0
    } else if vars == 0 {
        u64::from(m == 0)
    } else {
        binom(m + vars - 1, vars - 1)
    }
}

fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

/// Rank of the degree-`i` cohomology of `p` points in the once-punctured
/// genus-`g` surface, `0 <= i <= p`.
pub fn closed_form_surface_betti(g: u32, p: u64, i: u32) -> u64 {
    let (g, i) = (g as i64, i as i64);
    let two_g = 2 * g;
    let mut total: i64 = 0;
    for j in (0..=g).filter(|j| (i - j).rem_euclid(2) == 0) {
        let c = binom(two_g, j) as i64 - binom(two_g, j - 2) as i64;
        total += c * monomials(two_g, (i - j) / 2) as i64;
    }
    if i < p as i64 {
        for j in (g + 1..=two_g + 1).filter(|j| (i - j).rem_euclid(2) == 0) {
            let c = binom(two_g, j - 1) as i64 - binom(two_g, j + 1) as i64;
            total += c * monomials(two_g, (i - j) / 2) as i64;
        }
    }
    total as u64
}

pub fn surface_bettis(g: u32, p: u64) -> Vec<u64> {
    (0..=p as u32).map(|i| closed_form_surface_betti(g, p, i)).collect()
}

/// Torus specialization: `floor((3i+2)/2)` below `p`, `p + 1` at `p`.
pub fn torus_betti(p: u64, i: u32) -> u64 {
    if (i as u64) < p {
        (3 * i as u64 + 2) / 2
    } else {
        p + 1
    }
}

/// Even and odd `F_p`-Betti totals.
pub fn fp_surface_homology(g: u32, p: u64) -> (u64, u64) {
    let b = surface_bettis(g, p);
    let even = b.iter().enumerate().filter(|(i, _)| i % 2 == 0 && (*i as u64) < p).map(|(_, x)| x).sum();
    let odd = b.iter().enumerate().filter(|(i, _)| i % 2 == 1).map(|(_, x)| x).sum();
    (even, odd)
}

/// `alpha^4 - 6 alpha^2 + (h - 9) alpha - 3` over `Z/p^N[h]/h^M`, lowest
/// coefficient first.
pub fn zhu_quartic(spec: RingSpec) -> Result<Vec<Scalar>> {
    let h = spec.variable()?;
    Ok(vec![spec.from_i64(-3), h.sub(&spec.from_i64(9)), spec.from_i64(-6), spec.zero(), spec.one()])
}

/// Companion matrix of a monic polynomial, flattened to `Z/p^N` when the
/// coefficients are truncated polynomials.
pub fn companion_over_base(spec: RingSpec, coeffs: &[Scalar]) -> Result<Matrix> {
    let model = WeightPOpModel::from_euler_poly(spec, coeffs)?;
    match spec {
        RingSpec::TruncPoly { .. } => flatten_to_base(model.euler_mult()),
        _ => Ok(model.euler_mult().clone()),
    }
}

/// Reduce polynomial coefficients into another ring (e.g. modulo `(p, h)`).
pub fn reduce_poly(coeffs: &[Scalar], spec: RingSpec) -> Result<Vec<Scalar>> {
    coeffs.iter().map(|c| c.reduce_to(spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{euclidean_algebra, surface_algebra};

    #[test]
    fn torus_bettis() {
        assert_eq!(surface_bettis(1, 3), vec![1, 2, 4, 4]);
        assert_eq!(closed_form_surface_betti(1, 5, 2), 4);
        assert_eq!(closed_form_surface_betti(1, 3, 3), 4);
        for p in [3u64, 5, 7, 11] {
            for i in 0..=p as u32 {
                assert_eq!(closed_form_surface_betti(1, p, i), torus_betti(p, i), "p={p} i={i}");
            }
        }
    }

    #[test]
    fn fp_totals() {
        assert_eq!(fp_surface_homology(1, 3), (5, 6));
        // R^2: one class in degree 0, one in degree 1
        assert_eq!(surface_bettis(0, 3), vec![1, 1, 0, 0]);
        assert_eq!(fp_surface_homology(0, 3), (1, 1));
    }

    #[test]
    fn euclidean_closed_forms() {
        let a = closed_form_euclidean(3, 1, 3);
        assert_eq!(a.free_degrees, vec![5]);
        assert_eq!(a.euler_power, 1);
        assert_eq!(closed_form_euclidean(2, 0, 3).euler_power, 0);
        assert_eq!(closed_form_euclidean(2, 0, 3).free_degrees, vec![0, 1]);
    }

    #[test]
    fn weight_p_page_and_assertion() {
        let model = WeightPOpModel::height1(3).unwrap();
        let g = euclidean_algebra(3, 0, &model).unwrap();
        let e2 = e2_page(&g, 3).unwrap();
        assert_eq!(e2.get(-1, 1, 0).free, 1);
        assert_eq!(e2.weight(3), closed_form_euclidean_e2(3, 0, 3));
        let einf = apply_assertions(&e2, &euclidean_assertions(0, 3)).unwrap();
        assert_eq!(einf.get(0, -1, 3).torsion, vec![1]);
        assert_eq!(einf.get(2, -2, 3).free, 1);
        let got = assemble(&einf).unwrap().weight(3);
        assert_eq!(got, closed_form_euclidean(3, 0, 3).evaluate(&model).unwrap());
        assert_eq!(apply_assertions(&e2, &[]).unwrap(), e2);
    }

    #[test]
    fn bad_assertions_rejected() {
        let model = WeightPOpModel::height1(3).unwrap();
        let g = euclidean_algebra(2, 1, &model).unwrap();
        let e2 = e2_page(&g, 3).unwrap();
        // no gamma_p class when k is odd
        let a = DifferentialAssertion { r: 2, source: (2, 1, 3), effect: Effect::Surjects };
        assert!(matches!(apply_assertions(&e2, &[a]), Err(Error::InvalidAssertion(_))));
        let g = euclidean_algebra(2, 0, &model).unwrap();
        let e2 = e2_page(&g, 3).unwrap();
        let a = DifferentialAssertion { r: 3, source: (2, -2, 3), effect: Effect::Surjects };
        assert!(apply_assertions(&e2, &[a]).is_err());
        let mut page = Page::new(2, PageKind::Homological);
        page.insert(0, 0, 3, HomologyGroup { free: 1, torsion: Vec::new() });
        page.insert(2, -1, 3, HomologyGroup { free: 1, torsion: Vec::new() });
        let a = DifferentialAssertion { r: 2, source: (2, -1, 3), effect: Effect::Surjects };
        assert!(matches!(apply_assertions(&page, &[a]), Err(Error::InvalidAssertion(m)) if m.contains("free")));
    }

    #[test]
    fn ambiguous_extension_guard() {
        let mut page = Page::new(5, PageKind::Homological);
        page.insert(0, 2, 3, HomologyGroup { free: 0, torsion: vec![1] });
        page.insert(1, 1, 3, HomologyGroup { free: 0, torsion: vec![2] });
        assert!(matches!(assemble(&page), Err(Error::AmbiguousExtension { degree: 2, weight: 3 })));
    }

    #[test]
    fn page_json_round_trip() {
        let mut page = Page::new(2, PageKind::Homological);
        page.insert(0, -1, 3, HomologyGroup { free: 0, torsion: vec![2] });
        page.insert(2, -2, 3, HomologyGroup { free: 1, torsion: Vec::new() });
        assert_eq!(Page::from_json_value(&page.to_json_value()).unwrap(), page);
        let text = r#"[{"r": 2, "source": [2, -2, 3], "effect": {"drop": 1}}, {"r": 2, "source": [2, 0, 3], "effect": "surjects"}]"#;
        let a = assertions_from_json(text).unwrap();
        assert_eq!(a[0].effect, Effect::Drop(1));
        assert_eq!(a[1].target(), (0, 1, 3));
    }

    #[test]
    fn torus_surface_page() {
        let model = WeightPOpModel::height1(3).unwrap();
        let g = surface_algebra(1, &model).unwrap();
        let e2 = e2_page(&g, 3).unwrap().weight(3);
        let co = e2_page_cohomological(&g, 3).unwrap().weight(3);
        let tors: Vec<_> = co.torsion_classes();
        assert_eq!(tors.len(), 1);
        assert_eq!((tors[0].0 .0, tors[0].1), (1, 1));
        let einf = apply_assertions(&e2, &surface_assertions(3)).unwrap();
        let ranks = assemble(&einf).unwrap().free_ranks(3);
        let want: BTreeMap<i64, usize> = (0..=3).map(|i| (i as i64, torus_betti(3, i) as usize)).collect();
        assert_eq!(ranks, want);
    }
}
