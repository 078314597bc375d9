//! Weight-p operation models, Hecke Lie algebras, the additive resolution
//! and Hecke Chevalley-Eilenberg homology.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::chain::{homology, normalize, total_complex, BigradedComplex, HomologySummary, SimplicialComplexOfComplexes};
use crate::coeff::{scalar_from_json, scalar_to_json, Matrix, RingSpec, Scalar, SparseVec};
use crate::error::{Error, Result};
use crate::lie::{ce_complex_with_basis, ce_map, GradedLieAlgebra};
use crate::wgmod::{BasisElem, FreeWGModule};

/// The weight-p operations as the free module `E0[e]/f(e)` with basis
/// `1, e, ..., e^{d-1}`, together with multiplication by the Euler class.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightPOpModel {
    spec: RingSpec,
    /// `f` from the constant term up, monic of degree `rank`
    f_coeffs: Vec<Scalar>,
    euler_mult: Matrix,
}

impl WeightPOpModel {
    /// Height one: `f(e) = e + p`.
    pub fn height1(p: u64) -> Result<Self> {
        let spec = RingSpec::PLocal { p };
        spec.validate()?;
        Self::from_euler_poly(spec, &[spec.from_i64(p as i64), spec.one()])
    }

    /// Model from a monic polynomial, lowest coefficient first.
    pub fn from_euler_poly(spec: RingSpec, coeffs: &[Scalar]) -> Result<Self> {
        spec.validate()?;
        let Some(lead) = coeffs.last() else {
            return Err(Error::NonMonic);
        };
        if coeffs.len() < 2 || !lead.is_one() {
            return Err(Error::NonMonic);
        }
        if coeffs[0].is_unit() {
            return Err(Error::InvalidHecke("constant term of f must lie in the maximal ideal".into()));
        }
        let d = coeffs.len() - 1;
        let mut cols: Vec<SparseVec> = Vec::with_capacity(d);
        for k in 0..d - 1 {
            cols.push(vec![(k + 1, spec.one())]);
        }
        cols.push((0..d).map(|i| (i, coeffs[i].neg())).filter(|(_, c)| !c.is_zero()).collect());
        let euler_mult = Matrix::from_columns(d, spec, &cols);
        Ok(WeightPOpModel { spec, f_coeffs: coeffs.to_vec(), euler_mult })
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.euler_mult.nrows
    }

    pub fn euler_mult(&self) -> &Matrix {
        &self.euler_mult
    }

    pub fn f_coeffs(&self) -> &[Scalar] {
        &self.f_coeffs
    }

    /// `e^m` on the model.
    pub fn euler_power(&self, m: u32) -> Matrix {
        let mut out = Matrix::identity(self.rank(), self.spec);
        for _ in 0..m {
            out = self.euler_mult.mul(&out);
        }
        out
    }

    /// Number of Euler-class factors picked up by `n` suspensions starting
    /// from degree `a`: one for every odd degree in `a, ..., a + n - 1`.
    pub fn euler_exponent(a: i64, n: u32) -> u32 {
        (a..a + n as i64).filter(|k| k.rem_euclid(2) == 1).count() as u32
    }

    /// The action matrix of `n` suspensions from source degree `a`.
    pub fn suspension(&self, a: i64, n: u32) -> Matrix {
        self.euler_power(Self::euler_exponent(a, n))
    }

    pub fn to_json_value(&self) -> Value {
        json!({"f_coeffs": self.f_coeffs.iter().map(scalar_to_json).collect::<Vec<_>>(), "ring": self.spec})
    }

    pub fn from_json_value(v: &Value, default_spec: Option<RingSpec>) -> Result<Self> {
        let spec = match v.get("ring") {
            Some(r) => serde_json::from_value(r.clone()).map_err(|e| Error::Schema(e.to_string()))?,
            None => default_spec.ok_or_else(|| Error::Schema("model needs a ring".into()))?,
        };
        let list = v.get("f_coeffs").and_then(|c| c.as_array()).ok_or_else(|| Error::Schema("model needs f_coeffs".into()))?;
        let coeffs = list.iter().map(|c| scalar_from_json(c, spec)).collect::<Result<Vec<_>>>()?;
        Self::from_euler_poly(spec, &coeffs)
    }
}

/// A Lie algebra with a weight-p operation action. `action[x][k]` is
/// `alpha_k . x` for the model basis element `e^k`.
#[derive(Clone, Debug)]
pub struct HeckeLieAlgebra {
    lie: GradedLieAlgebra,
    model: WeightPOpModel,
    action: HashMap<usize, Vec<SparseVec>>,
}

impl HeckeLieAlgebra {
    pub fn new(lie: GradedLieAlgebra, model: WeightPOpModel, action: HashMap<usize, Vec<SparseVec>>) -> Result<Self> {
        if lie.spec() != model.spec() {
            return Err(Error::SpecMismatch(lie.spec().to_string(), model.spec().to_string()));
        }
        let m = lie.module();
        let p = lie.spec().p() as u32;
        let d = model.rank();
        for (&x, cols) in &action {
            if cols.len() != d {
                return Err(Error::InvalidHecke(format!("action on {} needs {d} columns", m.elem(x).name)));
            }
            for col in cols {
                for (t, _) in col {
                    if m.degree(*t) != m.degree(x) - 1 || m.weight(*t) != p * m.weight(x) {
                        return Err(Error::InvalidHecke(format!(
                            "alpha.{} has a term {} outside degree {} and weight {}",
                            m.elem(x).name,
                            m.elem(*t).name,
                            m.degree(x) - 1,
                            p * m.weight(x)
                        )));
                    }
                    for b in 0..m.rank() {
                        if !lie.bracket_basis(*t, b).is_empty() {
                            return Err(Error::InvalidHecke(format!("{} is hit by an operation but brackets nontrivially", m.elem(*t).name)));
                        }
                    }
                }
            }
        }
        Ok(HeckeLieAlgebra { lie, model, action })
    }

    pub fn lie(&self) -> &GradedLieAlgebra {
        &self.lie
    }

    pub fn model(&self) -> &WeightPOpModel {
        &self.model
    }

    pub fn module(&self) -> &FreeWGModule {
        self.lie.module()
    }

    pub fn spec(&self) -> RingSpec {
        self.lie.spec()
    }

    /// `alpha_k . x`, zero when no action is recorded.
    pub fn act(&self, x: usize, k: usize) -> SparseVec {
        self.action.get(&x).map(|c| c[k].clone()).unwrap_or_default()
    }

    pub fn direct_sum(&self, other: &HeckeLieAlgebra) -> Result<HeckeLieAlgebra> {
        if self.model != other.model {
            return Err(Error::InvalidHecke("direct sum needs a common model".into()));
        }
        let lie = self.lie.direct_sum(&other.lie)?;
        let off = self.lie.rank();
        let mut action = self.action.clone();
        for (&x, cols) in &other.action {
            action.insert(x + off, cols.iter().map(|c| c.iter().map(|(i, v)| (i + off, v.clone())).collect()).collect());
        }
        HeckeLieAlgebra::new(lie, self.model.clone(), action)
    }

    /// Lie part plus `{"model": {...}, "action": [{"gen", "targets", "matrix"}]}`
    /// where `matrix` has one row per target and one column per model basis
    /// element.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        let lie = GradedLieAlgebra::from_json_value(&v)?;
        let spec = lie.spec();
        let model = match v.get("model") {
            Some(mv) => WeightPOpModel::from_json_value(mv, Some(spec))?,
            None => WeightPOpModel::height1(spec.p())?,
        };
        let m = lie.module();
        let lookup = |name: &Value| -> Result<usize> {
            let s = name.as_str().ok_or_else(|| Error::Schema("basis names must be strings".into()))?;
            m.index_of(s).ok_or_else(|| Error::Schema(format!("unknown basis element {s}")))
        };
        let mut action = HashMap::new();
        if let Some(list) = v.get("action") {
            for e in list.as_array().ok_or_else(|| Error::Schema("action must be a list".into()))? {
                let x = lookup(e.get("gen").unwrap_or(&Value::Null))?;
                let targets = e.get("targets").and_then(|t| t.as_array()).ok_or_else(|| Error::Schema("action entry needs targets".into()))?;
                let targets = targets.iter().map(&lookup).collect::<Result<Vec<_>>>()?;
                let rows = e.get("matrix").and_then(|t| t.as_array()).ok_or_else(|| Error::Schema("action entry needs matrix".into()))?;
                if rows.len() != targets.len() {
                    return Err(Error::Schema("one matrix row per target expected".into()));
                }
                let mut cols: Vec<SparseVec> = vec![Vec::new(); model.rank()];
                for (t, row) in targets.iter().zip(rows) {
                    let row = row.as_array().ok_or_else(|| Error::Schema("matrix rows must be lists".into()))?;
                    if row.len() != model.rank() {
                        return Err(Error::Schema("one matrix column per model basis element expected".into()));
                    }
                    for (k, c) in row.iter().enumerate() {
                        let c = scalar_from_json(c, spec)?;
                        if !c.is_zero() {
                            cols[k].push((*t, c));
                        }
                    }
                }
                for c in cols.iter_mut() {
                    c.sort_by_key(|e| e.0);
                }
                action.insert(x, cols);
            }
        }
        HeckeLieAlgebra::new(lie, model, action)
    }

    pub fn to_json_value(&self) -> Value {
        let mut v = self.lie.to_json_value();
        let m = self.module();
        let mut gens: Vec<&usize> = self.action.keys().collect();
        gens.sort();
        let action: Vec<Value> = gens
            .into_iter()
            .map(|&x| {
                let cols = &self.action[&x];
                let mut targets: Vec<usize> = cols.iter().flat_map(|c| c.iter().map(|e| e.0)).collect();
                targets.sort_unstable();
                targets.dedup();
                let rows: Vec<Value> = targets
                    .iter()
                    .map(|t| {
                        Value::Array(
                            cols.iter()
                                .map(|c| scalar_to_json(&c.iter().find(|e| e.0 == *t).map_or_else(|| self.spec().zero(), |e| e.1.clone())))
                                .collect(),
                        )
                    })
                    .collect();
                json!({"gen": m.elem(x).name, "targets": targets.iter().map(|t| m.elem(*t).name.clone()).collect::<Vec<_>>(), "matrix": rows})
            })
            .collect();
        v["model"] = self.model.to_json_value();
        v["action"] = Value::Array(action);
        v
    }
}

fn target_names(base: &str, d: usize) -> Vec<String> {
    if d == 1 {
        vec![base.to_string()]
    } else {
        (0..d).map(|l| format!("{base}{l}")).collect()
    }
}

/// Generator `x` in degree `a`, weight `w`, and a model-sized block of
/// targets in degree `a - 1`, weight `p w`, hit through `n` suspensions;
/// zero bracket.
pub fn atomic_algebra(a: i64, n: u32, w: u32, model: &WeightPOpModel) -> Result<HeckeLieAlgebra> {
    atomic_named(a, n, w, model, "x", "y")
}

pub fn atomic_named(a: i64, n: u32, w: u32, model: &WeightPOpModel, x: &str, y: &str) -> Result<HeckeLieAlgebra> {
    if w == 0 {
        return Err(Error::InvalidHecke("atomic generator needs positive weight".into()));
    }
    let spec = model.spec();
    let p = spec.p() as u32;
    let d = model.rank();
    let mut basis = vec![BasisElem::new(x, a, w)];
    for name in target_names(y, d) {
        basis.push(BasisElem::new(name, a - 1, p * w));
    }
    let module = FreeWGModule::new(spec, basis)?;
    let s = model.suspension(a, n);
    let cols: Vec<SparseVec> = s.columns().into_iter().map(|c| c.into_iter().map(|(l, v)| (l + 1, v)).collect()).collect();
    let mut action = HashMap::new();
    action.insert(0, cols);
    HeckeLieAlgebra::new(GradedLieAlgebra::abelian(module), model.clone(), action)
}

/// The Hecke Lie algebra of configurations in `R^n` with a `k`-sphere
/// label: one weight-1 atomic piece, plus a weight-2 piece when
/// `n + k - 1` is odd.
pub fn euclidean_algebra(n: u32, k: i64, model: &WeightPOpModel) -> Result<HeckeLieAlgebra> {
    if n == 0 {
        return Err(Error::InvalidHecke("n must be positive".into()));
    }
    let base = atomic_named(k - 1, n, 1, model, "x", "y")?;
    if (n as i64 + k - 1).rem_euclid(2) == 0 {
        return Ok(base);
    }
    let top = atomic_named(n as i64 + 2 * k - 2, n, 2, model, "xt", "yt")?;
    base.direct_sum(&top)
}

/// The Hecke Lie algebra of a once-punctured genus-`g` surface.
pub fn surface_algebra(genus: u32, model: &WeightPOpModel) -> Result<HeckeLieAlgebra> {
    let spec = model.spec();
    let p = spec.p() as u32;
    let d = model.rank();
    // (name, degree, weight, number of suspensions)
    let mut gens: Vec<(String, i64, u32, u32)> = vec![("cx".into(), -1, 1, 2)];
    for i in 1..=genus {
        gens.push((format!("a{i}x"), 0, 1, 1));
        gens.push((format!("b{i}x"), 0, 1, 1));
    }
    gens.push(("cxt".into(), 0, 2, 2));
    for i in 1..=genus {
        gens.push((format!("a{i}xt"), 1, 2, 1));
        gens.push((format!("b{i}xt"), 1, 2, 1));
    }
    let mut basis: Vec<BasisElem> = gens.iter().map(|(n, deg, w, _)| BasisElem::new(n.clone(), *deg, *w)).collect();
    let mut action = HashMap::new();
    for (i, (name, deg, w, n)) in gens.iter().enumerate() {
        let start = basis.len();
        let yname = name.replacen('x', "y", 1);
        for t in target_names(&yname, d) {
            basis.push(BasisElem::new(t, deg - 1, p * w));
        }
        let s = model.suspension(*deg, *n);
        let cols: Vec<SparseVec> = s.columns().into_iter().map(|c| c.into_iter().map(|(l, v)| (l + start, v)).collect()).collect();
        action.insert(i, cols);
    }
    let module = FreeWGModule::new(spec, basis)?;
    let idx = |s: &str| module.index_of(s).unwrap();
    let mut entries = Vec::new();
    for i in 1..=genus {
        entries.push((idx(&format!("a{i}x")), idx(&format!("b{i}x")), vec![(idx("cxt"), spec.from_i64(-1))]));
    }
    let lie = GradedLieAlgebra::new(module, entries)?;
    HeckeLieAlgebra::new(lie, model.clone(), action)
}

/// A symbol `[o_1|...|o_r|x]` with at most one non-identity operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// all slots hold the identity
    Plain(usize),
    /// `alpha_k` sits in slot `slot` (1-based)
    Op { slot: usize, op: usize, gen: usize },
}

/// The additive resolution through level `levels - 1`, as Lie algebras
/// with face and degeneracy maps (columns indexed by source symbols).
#[derive(Clone, Debug)]
pub struct AdditiveResolution {
    pub symbols: Vec<Vec<Symbol>>,
    pub algebras: Vec<GradedLieAlgebra>,
    pub faces: Vec<Vec<Vec<SparseVec>>>,
    pub degeneracies: Vec<Vec<Vec<SparseVec>>>,
}

fn check_truncation(g: &HeckeLieAlgebra, max_weight: u32) -> Result<u32> {
    let p = g.spec().p() as u32;
    let minw = g.module().min_weight().unwrap_or(1);
    if minw == 0 {
        return Err(Error::Truncation("weight-0 generator".into()));
    }
    if max_weight >= p * p * minw {
        return Err(Error::Truncation(format!(
            "weight {max_weight} reaches composites of operations (bound {})",
            p * p * minw
        )));
    }
    Ok(minw)
}

/// Number of levels with nondegenerate chains below the weight bound.
pub fn resolution_levels(g: &HeckeLieAlgebra, max_weight: u32) -> Result<usize> {
    let minw = check_truncation(g, max_weight)?;
    let p = g.spec().p() as u32;
    Ok((max_weight / (p * minw)) as usize + 1)
}

pub fn additive_resolution(g: &HeckeLieAlgebra, max_weight: u32) -> Result<AdditiveResolution> {
    let levels = resolution_levels(g, max_weight)?;
    build_resolution(g, max_weight, levels)
}

/// Build `levels` levels of the additive resolution.
pub fn build_resolution(g: &HeckeLieAlgebra, max_weight: u32, levels: usize) -> Result<AdditiveResolution> {
    check_truncation(g, max_weight)?;
    let spec = g.spec();
    let m = g.module().truncate(max_weight);
    let lie = g.lie().truncate(max_weight);
    let p = spec.p() as u32;
    let d = g.model().rank();
    let acting: Vec<usize> = (0..m.rank()).filter(|&x| p * m.weight(x) <= max_weight && g.action.contains_key(&x)).collect();

    let mut symbols: Vec<Vec<Symbol>> = Vec::new();
    let mut algebras = Vec::new();
    let mut positions: Vec<HashMap<Symbol, usize>> = Vec::new();
    for r in 0..levels {
        let mut syms: Vec<Symbol> = (0..m.rank()).map(Symbol::Plain).collect();
        for slot in 1..=r {
            for &x in &acting {
                for op in 0..d {
                    syms.push(Symbol::Op { slot, op, gen: x });
                }
            }
        }
        let basis: Vec<BasisElem> = syms.iter().map(|s| symbol_elem(&m, s, r, p, d)).collect();
        let module = FreeWGModule::new(spec, basis)?;
        let entries = (0..m.rank())
            .flat_map(|a| (0..m.rank()).map(move |b| (a, b)))
            .filter_map(|(a, b)| {
                let v = lie.bracket_basis(a, b);
                (!v.is_empty()).then(|| (a, b, v.to_vec()))
            })
            .collect();
        algebras.push(GradedLieAlgebra::new(module, entries)?);
        positions.push(syms.iter().enumerate().map(|(i, s)| (*s, i)).collect());
        symbols.push(syms);
    }

    let unit = |pos: &HashMap<Symbol, usize>, s: Symbol| -> SparseVec { vec![(pos[&s], spec.one())] };
    let mut faces = vec![Vec::new()];
    for r in 1..levels {
        let tgt = &positions[r - 1];
        let mut fr = Vec::new();
        for i in 0..=r {
            let cols: Vec<SparseVec> = symbols[r]
                .iter()
                .map(|s| match *s {
                    Symbol::Plain(x) => unit(tgt, Symbol::Plain(x)),
                    Symbol::Op { slot, op, gen } => {
                        if i == 0 {
                            if slot == 1 {
                                Vec::new()
                            } else {
                                unit(tgt, Symbol::Op { slot: slot - 1, op, gen })
                            }
                        } else if i < r {
                            // merge slots i and i + 1
                            let slot = if slot > i { slot - 1 } else { slot };
                            unit(tgt, Symbol::Op { slot, op, gen })
                        } else if slot == r {
                            let mut v: SparseVec = g.act(gen, op).into_iter().filter(|(t, _)| *t < m.rank()).map(|(t, c)| (tgt[&Symbol::Plain(t)], c)).collect();
                            v.sort_by_key(|e| e.0);
                            v
                        } else {
                            unit(tgt, Symbol::Op { slot, op, gen })
                        }
                    }
                })
                .collect();
            fr.push(cols);
        }
        faces.push(fr);
    }
    let mut degeneracies = Vec::new();
    for r in 0..levels.saturating_sub(1) {
        let tgt = &positions[r + 1];
        let mut sr = Vec::new();
        for k in 0..=r {
            let cols: Vec<SparseVec> = symbols[r]
                .iter()
                .map(|s| match *s {
                    Symbol::Plain(x) => unit(tgt, Symbol::Plain(x)),
                    Symbol::Op { slot, op, gen } => {
                        let slot = if slot > k { slot + 1 } else { slot };
                        unit(tgt, Symbol::Op { slot, op, gen })
                    }
                })
                .collect();
            sr.push(cols);
        }
        degeneracies.push(sr);
    }
    Ok(AdditiveResolution { symbols, algebras, faces, degeneracies })
}

fn symbol_elem(m: &FreeWGModule, s: &Symbol, r: usize, p: u32, d: usize) -> BasisElem {
    match *s {
        Symbol::Plain(x) => {
            let e = m.elem(x);
            let name = if r == 0 { e.name.clone() } else { format!("[{}{}]", "1|".repeat(r), e.name) };
            BasisElem::new(name, e.degree, e.weight)
        }
        Symbol::Op { slot, op, gen } => {
            let e = m.elem(gen);
            let ops: Vec<String> = (1..=r)
                .map(|k| if k != slot { "1".to_string() } else if d == 1 { "a".to_string() } else { format!("a{op}") })
                .collect();
            BasisElem::new(format!("[{}|{}]", ops.join("|"), e.name), e.degree - 1, p * e.weight)
        }
    }
}

/// `CE` applied levelwise to the additive resolution.
pub fn hecke_ce_simplicial(g: &HeckeLieAlgebra, max_weight: u32) -> Result<SimplicialComplexOfComplexes> {
    let ar = additive_resolution(g, max_weight)?;
    let spec = g.spec();
    let ces = ar.algebras.iter().map(|a| ce_complex_with_basis(a, max_weight)).collect::<Result<Vec<_>>>()?;
    let mut faces = vec![Vec::new()];
    for r in 1..ces.len() {
        faces.push(ar.faces[r].iter().map(|phi| ce_map(&ces[r], &ces[r - 1], ar.algebras[r - 1].module(), phi)).collect());
    }
    let mut degeneracies = Vec::new();
    for r in 0..ces.len().saturating_sub(1) {
        degeneracies.push(ar.degeneracies[r].iter().map(|phi| ce_map(&ces[r], &ces[r + 1], ar.algebras[r + 1].module(), phi)).collect());
    }
    let levels = ces.into_iter().map(|c| c.complex).collect();
    Ok(SimplicialComplexOfComplexes { spec, levels, faces, degeneracies })
}

/// The total complex of the normalized Hecke Chevalley-Eilenberg complex.
pub fn hecke_ce_complex(g: &HeckeLieAlgebra, max_weight: u32) -> Result<BigradedComplex> {
    let s = hecke_ce_simplicial(g, max_weight)?;
    let tot = total_complex(&normalize(&s)?)?;
    tot.verify()?;
    Ok(tot)
}

/// Hecke Lie algebra homology keyed by (total degree, internal degree,
/// weight). The weight-0 unit appears in total degree 0.
pub fn hecke_homology(g: &HeckeLieAlgebra, max_weight: u32) -> Result<HomologySummary> {
    homology(&hecke_ce_complex(g, max_weight)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::HomologyGroup;

    fn free(n: usize) -> HomologyGroup {
        HomologyGroup { free: n, torsion: Vec::new() }
    }

    fn torsion(e: u32) -> HomologyGroup {
        HomologyGroup { free: 0, torsion: vec![e] }
    }

    #[test]
    fn height_one_model() {
        let m = WeightPOpModel::height1(3).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.euler_mult().get(0, 0), RingSpec::PLocal { p: 3 }.from_i64(-3));
        assert_eq!(m.suspension(0, 2).get(0, 0).valuation().unwrap(), Some(1));
        assert_eq!(m.suspension(1, 1).get(0, 0).valuation().unwrap(), Some(1));
        assert_eq!(m.suspension(0, 1).get(0, 0).valuation().unwrap(), Some(0));
    }

    #[test]
    fn non_monic_rejected() {
        let spec = RingSpec::PLocal { p: 3 };
        assert_eq!(WeightPOpModel::from_euler_poly(spec, &[spec.from_i64(3), spec.from_i64(2)]), Err(Error::NonMonic));
    }

    #[test]
    fn atomic_even_degree() {
        let model = WeightPOpModel::height1(3).unwrap();
        let g = atomic_algebra(0, 4, 1, &model).unwrap();
        let h = hecke_homology(&g, 3).unwrap();
        assert_eq!(h.get(0, 0, 0), free(1));
        assert_eq!(h.get(1, 0, 1), free(1));
        assert_eq!(h.get(1, -1, 3), torsion(2));
        assert_eq!(h.entries.len(), 3, "{h:?}");
    }

    #[test]
    fn atomic_odd_degree() {
        let model = WeightPOpModel::height1(3).unwrap();
        let g = atomic_algebra(1, 3, 1, &model).unwrap();
        let h = hecke_homology(&g, 3).unwrap();
        for i in 1..=3u32 {
            assert_eq!(h.get(i as i64, i as i64, i), free(1));
        }
        assert_eq!(h.get(1, 0, 3), torsion(2));
        assert_eq!(h.entries.len(), 5, "{h:?}");
    }

    #[test]
    fn surface_generator_count() {
        let model = WeightPOpModel::height1(3).unwrap();
        let g = surface_algebra(2, &model).unwrap();
        assert_eq!(g.module().rank(), 20);
        assert_eq!(g.lie().nonzero_brackets(), 4);
        g.lie().check_axioms().unwrap();
    }
}
