//! Finite free weighted graded modules, maps between them, tensor products
//! and divided powers.
//!
//! Degrees are absolute integers; weights are non-negative and never enter a
//! sign.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coeff::{Matrix, RingSpec, Scalar, SparseVec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisElem {
    pub name: String,
    pub degree: i64,
    pub weight: u32,
}

impl BasisElem {
    pub fn new(name: impl Into<String>, degree: i64, weight: u32) -> Self {
        BasisElem { name: name.into(), degree, weight }
    }
}

/// A free module with a named, ordered, bigraded basis.
#[derive(Clone, Debug)]
pub struct FreeWGModule {
    basis: Vec<BasisElem>,
    index: HashMap<String, usize>,
    spec: RingSpec,
}

impl PartialEq for FreeWGModule {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.spec == other.spec
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    basis: Vec<BasisElem>,
    ring: RingSpec,
}

impl Serialize for FreeWGModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleJson { basis: self.basis.clone(), ring: self.spec }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreeWGModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ModuleJson::deserialize(d)?;
        FreeWGModule::new(m.ring, m.basis).map_err(serde::de::Error::custom)
    }
}

impl FreeWGModule {
    pub fn new(spec: RingSpec, basis: Vec<BasisElem>) -> Result<Self> {
        spec.validate()?;
        let mut index = HashMap::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.name.clone(), i).is_some() {
                return Err(Error::InvalidModule(format!("duplicate basis name {}", b.name)));
            }
        }
        Ok(FreeWGModule { basis, index, spec })
    }

    pub fn zero(spec: RingSpec) -> Self {
        FreeWGModule { basis: Vec::new(), index: HashMap::new(), spec }
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn elem(&self, i: usize) -> &BasisElem {
        &self.basis[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.basis[i].weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.basis.iter().map(|b| b.weight).min()
    }

    /// Basis indices grouped by (degree, weight).
    pub fn blocks(&self) -> BTreeMap<(i64, u32), Vec<usize>> {
        let mut out: BTreeMap<(i64, u32), Vec<usize>> = BTreeMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            out.entry((b.degree, b.weight)).or_default().push(i);
        }
        out
    }

    /// Shift every degree by `n`; names are kept.
    pub fn suspend(&self, n: i64) -> FreeWGModule {
        let basis = self.basis.iter().map(|b| BasisElem { degree: b.degree + n, ..b.clone() }).collect();
        FreeWGModule { basis, index: self.index.clone(), spec: self.spec }
    }

    /// Keep basis elements of weight at most `w`.
    pub fn truncate(&self, w: u32) -> FreeWGModule {
        let basis: Vec<BasisElem> = self.basis.iter().filter(|b| b.weight <= w).cloned().collect();
        FreeWGModule::new(self.spec, basis).unwrap()
    }

    pub fn direct_sum(&self, other: &FreeWGModule) -> Result<FreeWGModule> {
        check_spec(self.spec, other.spec)?;
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        FreeWGModule::new(self.spec, basis)
    }

    /// The module with degrees negated (weights kept).
    pub fn dual(&self) -> FreeWGModule {
        self.suspend(0).negated()
    }

    fn negated(mut self) -> FreeWGModule {
        for b in self.basis.iter_mut() {
            b.degree = -b.degree;
        }
        self
    }
}

pub(crate) fn check_spec(a: RingSpec, b: RingSpec) -> Result<()> {
    if a != b {
        return Err(Error::SpecMismatch(a.to_string(), b.to_string()));
    }
    Ok(())
}

/// A degree-shifting, weight-preserving map of free modules. The matrix has
/// one column per source basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct WGMap {
    pub source: FreeWGModule,
    pub target: FreeWGModule,
    pub matrix: Matrix,
    pub degree_shift: i64,
}

impl WGMap {
    pub fn new(source: FreeWGModule, target: FreeWGModule, matrix: Matrix, degree_shift: i64) -> Result<Self> {
        check_spec(source.spec, target.spec)?;
        check_spec(source.spec, matrix.spec)?;
        if matrix.nrows != target.rank() || matrix.ncols != source.rank() {
            return Err(Error::InvalidModule(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.nrows,
                matrix.ncols,
                target.rank(),
                source.rank()
            )));
        }
        for (i, row) in matrix.rows().iter().enumerate() {
            for (j, _) in row {
                let (s, t) = (source.elem(*j), target.elem(i));
                if t.degree != s.degree + degree_shift || t.weight != s.weight {
                    return Err(Error::InvalidModule(format!(
                        "entry {} -> {} does not respect (degree, weight)",
                        s.name, t.name
                    )));
                }
            }
        }
        Ok(WGMap { source, target, matrix, degree_shift })
    }

    pub fn identity(m: &FreeWGModule) -> WGMap {
        WGMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.rank(), m.spec), degree_shift: 0 }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &WGMap) -> Result<WGMap> {
        if other.target != self.source {
            return Err(Error::InvalidModule("composition of non-matching maps".into()));
        }
        Ok(WGMap {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix),
            degree_shift: self.degree_shift + other.degree_shift,
        })
    }

    pub fn apply(&self, x: &[(usize, Scalar)]) -> SparseVec {
        self.matrix.apply(x)
    }
}

/// The linear dual of a map of finite free modules.
pub fn dualize(f: &WGMap) -> WGMap {
    WGMap {
        source: f.target.dual(),
        target: f.source.dual(),
        matrix: f.matrix.transpose(),
        degree_shift: f.degree_shift,
    }
}

/// `M (x) N` together with the pair behind each basis element.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: FreeWGModule,
    pub pairs: Vec<(usize, usize)>,
}

pub fn tensor(m: &FreeWGModule, n: &FreeWGModule) -> Result<TensorProduct> {
    check_spec(m.spec, n.spec)?;
    let mut basis = Vec::with_capacity(m.rank() * n.rank());
    let mut pairs = Vec::with_capacity(m.rank() * n.rank());
    for (i, a) in m.basis.iter().enumerate() {
        for (j, b) in n.basis.iter().enumerate() {
            basis.push(BasisElem {
                name: format!("{}(x){}", a.name, b.name),
                degree: a.degree + b.degree,
                weight: a.weight + b.weight,
            });
            pairs.push((i, j));
        }
    }
    Ok(TensorProduct { module: FreeWGModule::new(m.spec, basis)?, pairs })
}

/// Koszul sign for swapping elements of internal degrees `i` and `j`.
pub fn koszul_sign(i: i64, j: i64) -> i64 {
    if (i * j).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The symmetry isomorphism `M (x) N -> N (x) M`, `x (x) y -> (-1)^{|x||y|} y (x) x`.
pub fn symmetry(m: &FreeWGModule, n: &FreeWGModule) -> Result<WGMap> {
    let mn = tensor(m, n)?;
    let nm = tensor(n, m)?;
    let spec = m.spec;
    let cols: Vec<SparseVec> = mn
        .pairs
        .iter()
        .map(|&(i, j)| {
            let target = j * m.rank() + i;
            vec![(target, spec.from_i64(koszul_sign(m.degree(i), n.degree(j))))]
        })
        .collect();
    let matrix = Matrix::from_columns(nm.module.rank(), spec, &cols);
    WGMap::new(mn.module, nm.module, matrix, 0)
}

/// A basis monomial of the divided power algebra on the suspension of a
/// module: each factor is (basis index, multiplicity), sorted by index.
/// Even-degree elements suspend to odd degree and so appear at most once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GammaMonomial {
    pub factors: Vec<(usize, u32)>,
}

/// Whether the suspension of a degree-`d` element is odd, making it an
/// exterior generator.
pub fn is_exterior(d: i64) -> bool {
    d.rem_euclid(2) == 0
}

impl GammaMonomial {
    pub fn one() -> Self {
        GammaMonomial { factors: Vec::new() }
    }

    pub fn single(i: usize, r: u32) -> Self {
        GammaMonomial { factors: vec![(i, r)] }
    }

    /// Number of factors counted with multiplicity.
    pub fn length(&self) -> u32 {
        self.factors.iter().map(|f| f.1).sum()
    }

    pub fn internal_degree(&self, m: &FreeWGModule) -> i64 {
        self.factors.iter().map(|&(i, r)| r as i64 * m.degree(i)).sum()
    }

    pub fn suspended_degree(&self, m: &FreeWGModule) -> i64 {
        self.factors.iter().map(|&(i, r)| r as i64 * (m.degree(i) + 1)).sum()
    }

    pub fn weight(&self, m: &FreeWGModule) -> u32 {
        self.factors.iter().map(|&(i, r)| r * m.weight(i)).sum()
    }

    pub fn multiplicity(&self, i: usize) -> u32 {
        self.factors.binary_search_by_key(&i, |f| f.0).map(|k| self.factors[k].1).unwrap_or(0)
    }

    pub fn is_valid(&self, m: &FreeWGModule) -> bool {
        self.factors.windows(2).all(|w| w[0].0 < w[1].0)
            && self.factors.iter().all(|&(i, r)| r >= 1 && i < m.rank() && (!is_exterior(m.degree(i)) || r == 1))
    }

    pub fn name(&self, m: &FreeWGModule) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(i, r)| if r == 1 { m.elem(i).name.clone() } else { format!("g{}({})", r, m.elem(i).name) })
            .collect();
        parts.join("*")
    }

    pub fn exterior_indices(&self, m: &FreeWGModule) -> Vec<usize> {
        self.factors.iter().filter(|f| is_exterior(m.degree(f.0))).map(|f| f.0).collect()
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Product of two divided-power monomials: `None` when an exterior factor
/// repeats. The sign comes from moving the odd suspended factors of `b` past
/// those of `a`.
pub fn gamma_multiply(m: &FreeWGModule, a: &GammaMonomial, b: &GammaMonomial) -> Option<(Scalar, GammaMonomial)> {
    let mut coeff = BigInt::one();
    let mut factors: BTreeMap<usize, u32> = a.factors.iter().copied().collect();
    for &(i, r) in &b.factors {
        let e = factors.entry(i).or_insert(0);
        if *e > 0 {
            if is_exterior(m.degree(i)) {
                return None;
            }
            coeff *= binomial((*e + r) as u64, r as u64);
        }
        *e += r;
    }
    let ea = a.exterior_indices(m);
    let eb = b.exterior_indices(m);
    let inversions: usize = ea.iter().map(|x| eb.iter().filter(|y| *y < x).count()).sum();
    if inversions % 2 == 1 {
        coeff = -coeff;
    }
    Some((m.spec.from_bigint(&coeff), GammaMonomial { factors: factors.into_iter().collect() }))
}

/// All monomials of weight at most `max_weight`, including the empty one,
/// in lexicographic order on (index, multiplicity).
pub fn divided_power_basis(m: &FreeWGModule, max_weight: u32) -> Result<Vec<GammaMonomial>> {
    if let Some(b) = m.basis.iter().find(|b| b.weight == 0) {
        return Err(Error::Truncation(format!("basis element {} has weight 0", b.name)));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    enumerate(m, 0, max_weight, &mut cur, &mut out);
    out.sort();
    Ok(out)
}

fn enumerate(m: &FreeWGModule, start: usize, budget: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<GammaMonomial>) {
    out.push(GammaMonomial { factors: cur.clone() });
    for i in start..m.rank() {
        let w = m.weight(i);
        if w > budget {
            continue;
        }
        let max_r = if is_exterior(m.degree(i)) { 1 } else { budget / w };
        for r in 1..=max_r {
            cur.push((i, r));
            enumerate(m, i + 1, budget - r * w, cur, out);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> RingSpec {
        RingSpec::PLocal { p: 3 }
    }

    fn module(elems: &[(&str, i64, u32)]) -> FreeWGModule {
        FreeWGModule::new(spec(), elems.iter().map(|&(n, d, w)| BasisElem::new(n, d, w)).collect()).unwrap()
    }

    #[test]
    fn tensor_adds_gradings() {
        let t = tensor(&module(&[("x", 1, 1)]), &module(&[("y", 2, 2)])).unwrap();
        assert_eq!(t.module.elem(0).degree, 3);
        assert_eq!(t.module.elem(0).weight, 3);
    }

    #[test]
    fn swap_signs_use_degree_only() {
        let s = symmetry(&module(&[("x", 1, 1)]), &module(&[("y", 1, 1)])).unwrap();
        assert_eq!(s.matrix.get(0, 0), spec().from_i64(-1));
        let s = symmetry(&module(&[("x", 0, 1)]), &module(&[("y", 0, 5)])).unwrap();
        assert_eq!(s.matrix.get(0, 0), spec().one());
    }

    #[test]
    fn divided_powers_of_one_generator() {
        let m = module(&[("x", 1, 1)]);
        let b = divided_power_basis(&m, 3).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b[3], GammaMonomial::single(0, 3));
        let m = module(&[("x", 0, 1)]);
        assert_eq!(divided_power_basis(&m, 3).unwrap().len(), 2);
    }

    #[test]
    fn mixed_parity_basis() {
        let m = module(&[("a", 0, 1), ("b", 1, 1)]);
        let names: Vec<String> = divided_power_basis(&m, 2).unwrap().iter().map(|g| g.name(&m)).collect();
        let mut expected = vec!["1", "a", "b", "g2(b)", "a*b"];
        expected.sort();
        let mut got = names.clone();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn weight_zero_rejected() {
        let m = module(&[("a", 0, 0)]);
        assert!(matches!(divided_power_basis(&m, 2), Err(Error::Truncation(_))));
    }

    #[test]
    fn products() {
        let m = module(&[("x", 1, 1), ("a", 0, 1), ("b", 2, 1)]);
        let (c, g) = gamma_multiply(&m, &GammaMonomial::single(0, 2), &GammaMonomial::single(0, 3)).unwrap();
        assert_eq!(c, spec().from_i64(10));
        assert_eq!(g, GammaMonomial::single(0, 5));
        assert!(gamma_multiply(&m, &GammaMonomial::single(1, 1), &GammaMonomial::single(1, 1)).is_none());
        let (c1, g1) = gamma_multiply(&m, &GammaMonomial::single(1, 1), &GammaMonomial::single(2, 1)).unwrap();
        let (c2, g2) = gamma_multiply(&m, &GammaMonomial::single(2, 1), &GammaMonomial::single(1, 1)).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(c1, c2.neg());
    }

    #[test]
    fn dual_of_identity_and_scalar() {
        let m = module(&[("x", 1, 1)]);
        let id = WGMap::identity(&m);
        assert_eq!(dualize(&id).matrix, id.matrix);
        let p = WGMap::new(m.clone(), m.clone(), Matrix::from_ints(spec(), &[vec![3]]), 0).unwrap();
        assert_eq!(dualize(&p).matrix.get(0, 0), spec().from_i64(3));
        assert_eq!(dualize(&p).source.elem(0).degree, -1);
    }

    #[test]
    fn map_rejects_grading_violation() {
        let m = module(&[("x", 1, 1)]);
        let n = module(&[("y", 2, 1)]);
        assert!(WGMap::new(m, n, Matrix::from_ints(spec(), &[vec![1]]), 0).is_err());
    }
}
