//! Graded Lie algebras given by structure constants, the Chevalley-Eilenberg
//! complex on divided powers, free Lie algebras on super-Lyndon words, and a
//! bar-construction homology oracle.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chain::{
    homology, normalize, total_complex, with_pool, BigradedComplex, ChainMap, HomologyGroup, HomologySummary,
    SimplicialComplexOfComplexes,
};
use crate::coeff::{axpy, scalar_from_json, scalar_to_json, Matrix, RingSpec, Scalar, SparseVec};
use crate::error::{Error, Result};
use crate::wgmod::{divided_power_basis, gamma_multiply, is_exterior, BasisElem, FreeWGModule, GammaMonomial};

fn sign_of(i: i64, j: i64) -> bool {
    (i * j).rem_euclid(2) == 1
}

fn scale_vec(v: &[(usize, Scalar)], c: &Scalar) -> SparseVec {
    v.iter().map(|(i, x)| (*i, x.mul(c))).filter(|(_, x)| !x.is_zero()).collect()
}

/// A Lie algebra on a free weighted graded module. `table[(a, b)]` holds
/// `[a, b]` in basis coordinates; missing pairs bracket to zero.
#[derive(Clone, Debug)]
pub struct GradedLieAlgebra {
    module: FreeWGModule,
    table: HashMap<(usize, usize), SparseVec>,
}

impl GradedLieAlgebra {
    /// Build from brackets `[a, b] = out`. The opposite order is filled in by
    /// antisymmetry when not given; self-brackets of even elements are
    /// dropped.
    pub fn new(module: FreeWGModule, entries: Vec<(usize, usize, SparseVec)>) -> Result<Self> {
        let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
        for (a, b, out) in &entries {
            let (a, b) = (*a, *b);
            if a >= module.rank() || b >= module.rank() {
                return Err(Error::InvalidModule(format!("bracket index ({a}, {b}) out of range")));
            }
            let (ea, eb) = (module.elem(a), module.elem(b));
            for (c, _) in out {
                let ec = module.elem(*c);
                if ec.degree != ea.degree + eb.degree || ec.weight != ea.weight + eb.weight {
                    return Err(Error::InvalidModule(format!(
                        "[{}, {}] has a term {} outside its (degree, weight)",
                        ea.name, eb.name, ec.name
                    )));
                }
            }
            if a == b && !is_odd(ea.degree) {
                continue;
            }
            let mut out = out.clone();
            out.sort_by_key(|e| e.0);
            out.retain(|e| !e.1.is_zero());
            table.insert((a, b), out);
        }
        for (a, b, _) in &entries {
            let (a, b) = (*a, *b);
            if a == b || table.contains_key(&(b, a)) || !table.contains_key(&(a, b)) {
                continue;
            }
            let (da, db) = (module.degree(a), module.degree(b));
            let c = if sign_of(da, db) { module.spec().one() } else { module.spec().from_i64(-1) };
            let v = scale_vec(&table[&(a, b)], &c);
            table.insert((b, a), v);
        }
        table.retain(|_, v| !v.is_empty());
        Ok(GradedLieAlgebra { module, table })
    }

    pub fn abelian(module: FreeWGModule) -> Self {
        GradedLieAlgebra { module, table: HashMap::new() }
    }

    pub fn module(&self) -> &FreeWGModule {
        &self.module
    }

    pub fn spec(&self) -> RingSpec {
        self.module.spec()
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        self.table.get(&(a, b)).map_or(&[], |v| v.as_slice())
    }

    pub fn bracket(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (a, u) in x {
            for (b, v) in y {
                let br = self.bracket_basis(*a, *b);
                if !br.is_empty() {
                    acc = axpy(&acc, &u.mul(v), br);
                }
            }
        }
        acc
    }

    /// Number of ordered basis pairs with a nonzero bracket.
    pub fn nonzero_brackets(&self) -> usize {
        self.table.len()
    }

    /// Restrict to the basis elements of weight at most `w`.
    pub fn truncate(&self, w: u32) -> GradedLieAlgebra {
        let keep: Vec<usize> = (0..self.rank()).filter(|&i| self.module.weight(i) <= w).collect();
        let mut pos = vec![usize::MAX; self.rank()];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = k;
        }
        let module = FreeWGModule::new(self.spec(), keep.iter().map(|&i| self.module.elem(i).clone()).collect()).unwrap();
        let mut table = HashMap::new();
        for (&(a, b), v) in &self.table {
            if pos[a] != usize::MAX && pos[b] != usize::MAX && v.iter().all(|(c, _)| pos[*c] != usize::MAX) {
                table.insert((pos[a], pos[b]), v.iter().map(|(c, x)| (pos[*c], x.clone())).collect());
            }
        }
        GradedLieAlgebra { module, table }
    }

    pub fn direct_sum(&self, other: &GradedLieAlgebra) -> Result<GradedLieAlgebra> {
        let module = self.module.direct_sum(&other.module)?;
        let off = self.rank();
        let mut table = self.table.clone();
        for (&(a, b), v) in &other.table {
            table.insert((a + off, b + off), v.iter().map(|(c, x)| (c + off, x.clone())).collect());
        }
        Ok(GradedLieAlgebra { module, table })
    }

    fn tuple(&self, idx: &[usize]) -> String {
        let names: Vec<&str> = idx.iter().map(|&i| self.module.elem(i).name.as_str()).collect();
        format!("({})", names.join(", "))
    }

    /// Check antisymmetry, the graded Jacobi identity and `[a, [a, a]] = 0`
    /// for odd `a` on all basis pairs and triples.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.rank();
        let spec = self.spec();
        let deg = |i: usize| self.module.degree(i);
        let sgn = |i: i64, j: i64| if sign_of(i, j) { spec.from_i64(-1) } else { spec.one() };
        for a in 0..n {
            for b in a..n {
                let lhs = axpy(self.bracket_basis(a, b), &sgn(deg(a), deg(b)), self.bracket_basis(b, a));
                if !lhs.is_empty() {
                    return Err(Error::AxiomViolation { axiom: 1, tuple: self.tuple(&[a, b]) });
                }
            }
        }
        for a in 0..n {
            if is_odd(deg(a)) {
                let aa = self.bracket_basis(a, a).to_vec();
                if !self.bracket(&[(a, spec.one())], &aa).is_empty() {
                    return Err(Error::AxiomViolation { axiom: 3, tuple: self.tuple(&[a]) });
                }
            }
        }
        // only triples where some inner bracket is nonzero can fail
        let unit = |i: usize| vec![(i, spec.one())];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (bc, ca, ab) = (self.bracket_basis(b, c), self.bracket_basis(c, a), self.bracket_basis(a, b));
                    if bc.is_empty() && ca.is_empty() && ab.is_empty() {
                        continue;
                    }
                    let (i, j, k) = (deg(a), deg(b), deg(c));
                    let t1 = self.bracket(&unit(a), bc);
                    let t2 = self.bracket(&unit(b), ca);
                    let t3 = self.bracket(&unit(c), ab);
                    let mut sum = scale_vec(&t1, &sgn(i, k));
                    sum = axpy(&sum, &sgn(j, i), &t2);
                    sum = axpy(&sum, &sgn(k, j), &t3);
                    if !sum.is_empty() {
                        return Err(Error::AxiomViolation { axiom: 2, tuple: self.tuple(&[a, b, c]) });
                    }
                }
            }
        }
        Ok(())
    }

    /// `{"basis": [...], "ring": {...}, "bracket": [{"a", "b", "out": [{"basis", "coeff"}]}]}`.
    /// The module may also sit under a `"module"` key.
    pub fn from_json_value(v: &Value) -> Result<Self> {
        let module_value = v.get("module").unwrap_or(v);
        let module: FreeWGModule = serde_json::from_value(json!({
            "basis": module_value.get("basis").cloned().unwrap_or(Value::Null),
            "ring": module_value.get("ring").cloned().unwrap_or(Value::Null),
        }))
        .map_err(|e| Error::Schema(e.to_string()))?;
        let spec = module.spec();
        let lookup = |name: &Value| -> Result<usize> {
            let s = name.as_str().ok_or_else(|| Error::Schema("basis names must be strings".into()))?;
            module.index_of(s).ok_or_else(|| Error::Schema(format!("unknown basis element {s}")))
        };
        let mut entries = Vec::new();
        if let Some(list) = v.get("bracket") {
            let list = list.as_array().ok_or_else(|| Error::Schema("bracket must be a list".into()))?;
            for e in list {
                let a = lookup(e.get("a").unwrap_or(&Value::Null))?;
                let b = lookup(e.get("b").unwrap_or(&Value::Null))?;
                let mut out = BTreeMap::new();
                for t in e.get("out").and_then(|o| o.as_array()).ok_or_else(|| Error::Schema("bracket entry needs out".into()))? {
                    let c = lookup(t.get("basis").unwrap_or(&Value::Null))?;
                    let x = scalar_from_json(t.get("coeff").unwrap_or(&json!(1)), spec)?;
                    let cur: Scalar = out.remove(&c).unwrap_or_else(|| spec.zero());
                    out.insert(c, cur.add(&x));
                }
                entries.push((a, b, out.into_iter().filter(|(_, x): &(usize, Scalar)| !x.is_zero()).collect()));
            }
        }
        GradedLieAlgebra::new(module, entries)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_json_value(&v)
    }

    pub fn to_json_value(&self) -> Value {
        let mut m = serde_json::to_value(&self.module).unwrap();
        let mut keys: Vec<&(usize, usize)> = self.table.keys().collect();
        keys.sort();
        let bracket: Vec<Value> = keys
            .into_iter()
            .map(|&(a, b)| {
                let out: Vec<Value> = self.table[&(a, b)]
                    .iter()
                    .map(|(c, x)| json!({"basis": self.module.elem(*c).name, "coeff": scalar_to_json(x)}))
                    .collect();
                json!({"a": self.module.elem(a).name, "b": self.module.elem(b).name, "out": out})
            })
            .collect();
        m["bracket"] = Value::Array(bracket);
        m
    }
}

fn is_odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

/// Insert exterior generator `c` in front of `ext`, then sort. `None` when
/// `c` already occurs; otherwise the sign parity and sorted list.
fn ext_front(c: usize, ext: &[usize]) -> Option<(bool, Vec<usize>)> {
    match ext.binary_search(&c) {
        Ok(_) => None,
        Err(pos) => {
            let mut out = ext.to_vec();
            out.insert(pos, c);
            Some((pos % 2 == 1, out))
        }
    }
}

fn assemble(gamma: &BTreeMap<usize, u32>, ext: &[usize]) -> GammaMonomial {
    let mut factors: Vec<(usize, u32)> = gamma.iter().filter(|(_, r)| **r > 0).map(|(i, r)| (*i, *r)).collect();
    factors.extend(ext.iter().map(|&i| (i, 1)));
    factors.sort_unstable();
    GammaMonomial { factors }
}

fn lowered(gamma: &BTreeMap<usize, u32>, i: usize, by: u32) -> Option<BTreeMap<usize, u32>> {
    let r = *gamma.get(&i)?;
    if r < by {
        return None;
    }
    let mut g = gamma.clone();
    g.insert(i, r - by);
    Some(g)
}

/// The Chevalley-Eilenberg differential on one divided-power monomial.
pub fn ce_differential(g: &GradedLieAlgebra, mono: &GammaMonomial) -> Vec<(GammaMonomial, Scalar)> {
    let m = g.module();
    let spec = g.spec();
    let minus = spec.from_i64(-1);
    let half = spec.from_ratio(1, 2).expect("p is odd");
    let gamma: BTreeMap<usize, u32> = mono.factors.iter().copied().filter(|(i, _)| is_odd(m.degree(*i))).collect();
    let ext: Vec<usize> = mono.factors.iter().filter(|(i, _)| !is_odd(m.degree(*i))).map(|e| e.0).collect();
    let odd: Vec<usize> = gamma.keys().copied().collect();
    let mut out: BTreeMap<GammaMonomial, Scalar> = BTreeMap::new();
    let mut emit = |mono: GammaMonomial, c: Scalar| {
        let e = out.entry(mono).or_insert_with(|| spec.zero());
        *e = e.add(&c);
    };

    // pairs of distinct divided-power factors
    for (x, &ai) in odd.iter().enumerate() {
        for &aj in &odd[x + 1..] {
            let Some(low) = lowered(&gamma, ai, 1).and_then(|l| lowered(&l, aj, 1)) else { continue };
            for (c, v) in g.bracket_basis(ai, aj) {
                if let Some((neg, e)) = ext_front(*c, &ext) {
                    emit(assemble(&low, &e), if neg { v.neg() } else { v.clone() });
                }
            }
        }
    }
    // pairs of exterior factors
    for pi in 0..ext.len() {
        for pj in (pi + 1)..ext.len() {
            let rest: Vec<usize> = ext.iter().enumerate().filter(|(k, _)| *k != pi && *k != pj).map(|e| *e.1).collect();
            let base_neg = (pi + pj) % 2 == 1;
            for (c, v) in g.bracket_basis(ext[pi], ext[pj]) {
                if let Some((neg, e)) = ext_front(*c, &rest) {
                    emit(assemble(&gamma, &e), if neg ^ base_neg { v.neg() } else { v.clone() });
                }
            }
        }
    }
    // self-brackets of divided-power factors
    for &ai in &odd {
        let Some(low) = lowered(&gamma, ai, 2) else { continue };
        for (c, v) in g.bracket_basis(ai, ai) {
            if let Some((neg, e)) = ext_front(*c, &ext) {
                let x = v.mul(&half);
                emit(assemble(&low, &e), if neg { x.neg() } else { x });
            }
        }
    }
    // mixed brackets
    for &ai in &odd {
        let Some(low) = lowered(&gamma, ai, 1) else { continue };
        for (pj, &bj) in ext.iter().enumerate() {
            let rest: Vec<usize> = ext.iter().enumerate().filter(|(k, _)| *k != pj).map(|e| *e.1).collect();
            for (c, v) in g.bracket_basis(ai, bj) {
                let mut gm = low.clone();
                let r = gm.get(c).copied().unwrap_or(0);
                gm.insert(*c, r + 1);
                let mut x = v.mul(&spec.from_i64(r as i64 + 1));
                if pj % 2 == 1 {
                    x = x.mul(&minus);
                }
                emit(assemble(&gm, &rest), x);
            }
        }
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// A Chevalley-Eilenberg complex together with the monomial behind every
/// basis element.
#[derive(Clone, Debug)]
pub struct CeComplex {
    pub complex: BigradedComplex,
    /// `monomials[j][k]` is basis element `k` of `C_j`
    pub monomials: Vec<Vec<GammaMonomial>>,
    index: HashMap<GammaMonomial, usize>,
}

impl CeComplex {
    pub fn position(&self, m: &GammaMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// `CE(g)` truncated at weight `max_weight`, graded by monomial length.
pub fn ce_complex(g: &GradedLieAlgebra, max_weight: u32) -> Result<BigradedComplex> {
    Ok(ce_complex_with_basis(g, max_weight)?.complex)
}

pub fn ce_complex_with_basis(g: &GradedLieAlgebra, max_weight: u32) -> Result<CeComplex> {
    let m = g.module();
    let spec = g.spec();
    let monos = divided_power_basis(m, max_weight)?;
    let top = monos.iter().map(|x| x.length() as usize).max().unwrap_or(0);
    let mut by_len: Vec<Vec<GammaMonomial>> = vec![Vec::new(); top + 1];
    for x in monos {
        by_len[x.length() as usize].push(x);
    }
    let mut index: HashMap<GammaMonomial, usize> = HashMap::new();
    let mut modules = Vec::new();
    for level in &by_len {
        let mut basis = Vec::with_capacity(level.len());
        for (k, x) in level.iter().enumerate() {
            index.insert(x.clone(), k);
            basis.push(BasisElem { name: x.name(m), degree: x.internal_degree(m), weight: x.weight(m) });
        }
        modules.push(FreeWGModule::new(spec, basis)?);
    }
    let mut diffs = vec![Matrix::zeros(0, modules[0].rank(), spec)];
    for j in 1..=top {
        let cols: Vec<SparseVec> = with_pool(|| {
            by_len[j]
                .par_iter()
                .map(|x| {
                    let mut col: SparseVec = ce_differential(g, x).into_iter().map(|(y, c)| (index[&y], c)).collect();
                    col.sort_by_key(|e| e.0);
                    col
                })
                .collect()
        });
        diffs.push(Matrix::from_columns(modules[j - 1].rank(), spec, &cols));
    }
    let complex = BigradedComplex::new(spec, modules, diffs)?;
    Ok(CeComplex { complex, monomials: by_len, index })
}

/// `gamma_r(sigma v)` for a vector `v` of one (degree, weight) in `m`.
fn gamma_of_vector(m: &FreeWGModule, v: &[(usize, Scalar)], r: u32) -> Vec<(GammaMonomial, Scalar)> {
    if v.is_empty() {
        return Vec::new();
    }
    if is_exterior(m.degree(v[0].0)) {
        return if r == 1 { v.iter().map(|(i, c)| (GammaMonomial::single(*i, 1), c.clone())).collect() } else { Vec::new() };
    }
    // compositions of r over the support
    let mut out = Vec::new();
    let mut cur: Vec<(usize, u32)> = Vec::new();
    fn rec(v: &[(usize, Scalar)], k: usize, left: u32, cur: &mut Vec<(usize, u32)>, coeff: Scalar, out: &mut Vec<(GammaMonomial, Scalar)>) {
        if k + 1 == v.len() {
            let mut f = cur.clone();
            let c = if left > 0 {
                f.push((v[k].0, left));
                coeff.mul(&v[k].1.pow(left))
            } else {
                coeff
            };
            if !c.is_zero() {
                out.push((GammaMonomial { factors: f }, c));
            }
            return;
        }
        for t in 0..=left {
            if t > 0 {
                cur.push((v[k].0, t));
            }
            rec(v, k + 1, left - t, cur, coeff.mul(&v[k].1.pow(t)), out);
            if t > 0 {
                cur.pop();
            }
        }
    }
    rec(v, 0, r, &mut cur, m.spec().one(), &mut out);
    out
}

/// Image of a monomial under the map of divided power algebras induced by
/// the linear map `phi` (columns indexed by the source basis).
pub fn gamma_map(target: &FreeWGModule, phi: &[SparseVec], mono: &GammaMonomial) -> Vec<(GammaMonomial, Scalar)> {
    let spec = target.spec();
    let mut acc: BTreeMap<GammaMonomial, Scalar> = BTreeMap::new();
    acc.insert(GammaMonomial::one(), spec.one());
    for &(i, r) in &mono.factors {
        let terms = gamma_of_vector(target, &phi[i], r);
        let mut next: BTreeMap<GammaMonomial, Scalar> = BTreeMap::new();
        for (a, ca) in &acc {
            for (b, cb) in &terms {
                if let Some((c, prod)) = gamma_multiply(target, a, b) {
                    let x = ca.mul(cb).mul(&c);
                    let e = next.entry(prod).or_insert_with(|| spec.zero());
                    *e = e.add(&x);
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc.into_iter().collect()
}

/// The chain map `CE(phi) : CE(src) -> CE(tgt)` for a Lie algebra map with
/// columns `phi`.
pub fn ce_map(src: &CeComplex, tgt: &CeComplex, target: &FreeWGModule, phi: &[SparseVec]) -> ChainMap {
    let spec = target.spec();
    let components = (0..src.monomials.len())
        .map(|j| {
            let nrows = tgt.monomials.get(j).map_or(0, |l| l.len());
            let cols: Vec<SparseVec> = src.monomials[j]
                .iter()
                .map(|m| {
                    let mut col: SparseVec = gamma_map(target, phi, m)
                        .into_iter()
                        .map(|(x, c)| (tgt.position(&x).expect("image inside the truncation"), c))
                        .collect();
                    col.sort_by_key(|e| e.0);
                    col
                })
                .collect();
            Matrix::from_columns(nrows, spec, &cols)
        })
        .collect();
    ChainMap { components }
}

/// Homology of `CE(g)` through weight `max_weight`.
pub fn ce_homology(g: &GradedLieAlgebra, max_weight: u32) -> Result<HomologySummary> {
    homology(&ce_complex(g, max_weight)?)
}

type Word = Vec<u32>;
type Poly = BTreeMap<Word, Scalar>;

/// How a free Lie basis element is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieTree {
    /// a generator (index into the generator module)
    Leaf(usize),
    /// bracket of two earlier basis elements
    Bracket(usize, usize),
}

/// The free graded Lie algebra on a module, truncated by weight. Basis:
/// standard bracketings of Lyndon words, plus `[l, l]` for every odd
/// Lyndon element `l`. Coordinates are read off in the tensor algebra.
#[derive(Clone, Debug)]
pub struct FreeLie {
    generators: FreeWGModule,
    module: FreeWGModule,
    trees: Vec<LieTree>,
    polys: Vec<Poly>,
    /// leading word -> (basis index, inverse of its leading coefficient)
    leads: HashMap<Word, (usize, Scalar)>,
    leaf_of: Vec<usize>,
    max_weight: u32,
}

fn is_lyndon(w: &[u32]) -> bool {
    (1..w.len()).all(|k| w < &w[k..])
}

fn leaf_name(s: &str) -> String {
    if s.contains(['[', ',', '{']) {
        format!("{{{s}}}")
    } else {
        s.to_string()
    }
}

impl FreeLie {
    pub fn new(generators: &FreeWGModule, max_weight: u32) -> Result<Self> {
        if let Some(b) = generators.basis().iter().find(|b| b.weight == 0) {
            return Err(Error::Truncation(format!("generator {} has weight 0", b.name)));
        }
        let spec = generators.spec();
        let n = generators.rank();
        let word_weight = |w: &[u32]| w.iter().map(|&l| generators.weight(l as usize)).sum::<u32>();
        let word_degree = |w: &[u32]| w.iter().map(|&l| generators.degree(l as usize)).sum::<i64>();

        let weight_sorted = (1..n).all(|i| generators.weight(i - 1) <= generators.weight(i));
        // Lyndon words of bounded weight; every letter is at least the first
        let mut lyndon: Vec<Word> = Vec::new();
        let mut stack: Vec<(Word, u32)> = (0..n as u32).filter(|&l| generators.weight(l as usize) <= max_weight).map(|l| (vec![l], generators.weight(l as usize))).collect();
        while let Some((w, wt)) = stack.pop() {
            if is_lyndon(&w) {
                lyndon.push(w.clone());
            }
            for l in w[0]..n as u32 {
                let lw = generators.weight(l as usize);
                if wt + lw > max_weight {
                    if weight_sorted {
                        break;
                    }
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                stack.push((v, wt + lw));
            }
        }
        let mut entries: Vec<(u32, Word, bool)> = lyndon.iter().map(|w| (word_weight(w), w.clone(), false)).collect();
        for w in &lyndon {
            if is_odd(word_degree(w)) && 2 * word_weight(w) <= max_weight {
                let mut sq = w.clone();
                sq.extend_from_slice(w);
                entries.push((2 * word_weight(w), sq, true));
            }
        }
        entries.sort();

        let mut word_index: HashMap<Word, usize> = HashMap::new();
        let mut trees = Vec::with_capacity(entries.len());
        let mut polys: Vec<Poly> = Vec::with_capacity(entries.len());
        let mut basis = Vec::with_capacity(entries.len());
        let mut names: Vec<String> = Vec::with_capacity(entries.len());
        let mut leads = HashMap::new();
        let mut leaf_of = vec![usize::MAX; n];
        for (k, (wt, w, square)) in entries.into_iter().enumerate() {
            let tree = if square {
                let l = word_index[&w[..w.len() / 2]];
                LieTree::Bracket(l, l)
            } else if w.len() == 1 {
                leaf_of[w[0] as usize] = k;
                LieTree::Leaf(w[0] as usize)
            } else {
                let split = (1..w.len()).find(|&s| is_lyndon(&w[s..])).unwrap();
                LieTree::Bracket(word_index[&w[..split]], word_index[&w[split..]])
            };
            let (poly, name) = match tree {
                LieTree::Leaf(g) => {
                    let mut p = Poly::new();
                    p.insert(vec![g as u32], spec.one());
                    (p, leaf_name(&generators.elem(g).name))
                }
                LieTree::Bracket(a, b) => {
                    let da = basis_degree(&basis, a);
                    let db = basis_degree(&basis, b);
                    (commutator(&polys[a], da, &polys[b], db, spec), format!("[{},{}]", names[a], names[b]))
                }
            };
            let (lead, c) = poly.iter().next().map(|(w, c)| (w.clone(), c.clone())).ok_or_else(|| Error::InvalidModule("vanishing free Lie element".into()))?;
            if lead != w {
                return Err(Error::InvalidModule(format!("unexpected leading word for {name}")));
            }
            leads.insert(lead, (k, c.inverse()?));
            if !square {
                word_index.insert(w.clone(), k);
            }
            basis.push(BasisElem { name: name.clone(), degree: word_degree(&w), weight: wt });
            names.push(name);
            trees.push(tree);
            polys.push(poly);
        }
        let module = FreeWGModule::new(spec, basis)?;
        Ok(FreeLie { generators: generators.clone(), module, trees, polys, leads, leaf_of, max_weight })
    }

    pub fn module(&self) -> &FreeWGModule {
        &self.module
    }

    pub fn generators(&self) -> &FreeWGModule {
        &self.generators
    }

    pub fn trees(&self) -> &[LieTree] {
        &self.trees
    }

    /// Basis index of the generator `g`.
    pub fn leaf(&self, g: usize) -> usize {
        self.leaf_of[g]
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    fn reduce(&self, mut poly: Poly) -> Result<SparseVec> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        while let Some((w, c)) = poly.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            let Some((b, inv)) = self.leads.get(&w) else {
                return Err(Error::InvalidModule("element is not in the free Lie algebra".into()));
            };
            let coeff = c.mul(inv);
            for (v, x) in &self.polys[*b] {
                let e = poly.entry(v.clone()).or_insert_with(|| coeff.spec().zero());
                *e = e.sub(&coeff.mul(x));
                if e.is_zero() {
                    poly.remove(v);
                }
            }
            out.insert(*b, coeff);
        }
        Ok(out.into_iter().filter(|(_, x)| !x.is_zero()).collect())
    }

    /// Bracket in basis coordinates; terms beyond the weight bound vanish.
    pub fn bracket(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let spec = self.module.spec();
        let mut acc = Poly::new();
        for (a, u) in x {
            for (b, v) in y {
                if self.module.weight(*a) + self.module.weight(*b) > self.max_weight {
                    continue;
                }
                let c = u.mul(v);
                let p = commutator(&self.polys[*a], self.module.degree(*a), &self.polys[*b], self.module.degree(*b), spec);
                for (w, t) in p {
                    let e = acc.entry(w).or_insert_with(|| spec.zero());
                    *e = e.add(&t.mul(&c));
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        self.reduce(acc).expect("brackets of Lie elements are Lie elements")
    }

    /// Evaluate every basis element: generators via `leaf`, brackets via
    /// `bracket`.
    pub fn evaluate_all<L, B>(&self, leaf: L, bracket: B) -> Vec<SparseVec>
    where
        L: Fn(usize) -> SparseVec,
        B: Fn(&SparseVec, &SparseVec) -> SparseVec,
    {
        let mut vals: Vec<SparseVec> = Vec::with_capacity(self.trees.len());
        for t in &self.trees {
            let v = match *t {
                LieTree::Leaf(g) => leaf(g),
                LieTree::Bracket(a, b) => bracket(&vals[a], &vals[b]),
            };
            vals.push(v);
        }
        vals
    }

    /// The full bracket table as a [`GradedLieAlgebra`].
    pub fn to_lie_algebra(&self) -> Result<GradedLieAlgebra> {
        let spec = self.module.spec();
        let n = self.module.rank();
        let mut entries = Vec::new();
        for a in 0..n {
            for b in a..n {
                if self.module.weight(a) + self.module.weight(b) > self.max_weight {
                    continue;
                }
                let v = self.bracket(&[(a, spec.one())], &[(b, spec.one())]);
                if !v.is_empty() {
                    entries.push((a, b, v));
                }
            }
        }
        GradedLieAlgebra::new(self.module.clone(), entries)
    }
}

fn basis_degree(basis: &[BasisElem], i: usize) -> i64 {
    basis[i].degree
}

fn concat(a: &[u32], b: &[u32]) -> Word {
    let mut w = Vec::with_capacity(a.len() + b.len());
    w.extend_from_slice(a);
    w.extend_from_slice(b);
    w
}

/// `PQ - (-1)^{|P||Q|} QP` in the tensor algebra.
fn commutator(p: &Poly, dp: i64, q: &Poly, dq: i64, spec: RingSpec) -> Poly {
    let mut out = Poly::new();
    let flip = !sign_of(dp, dq);
    for (u, a) in p {
        for (v, b) in q {
            let c = a.mul(b);
            let e = out.entry(concat(u, v)).or_insert_with(|| spec.zero());
            *e = e.add(&c);
            let e = out.entry(concat(v, u)).or_insert_with(|| spec.zero());
            *e = if flip { e.sub(&c) } else { e.add(&c) };
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Free Lie algebra on `generators` through weight `max_weight`.
pub fn free_lie_basis(generators: &FreeWGModule, max_weight: u32) -> Result<GradedLieAlgebra> {
    FreeLie::new(generators, max_weight)?.to_lie_algebra()
}

fn matrix_from_cols(nrows: usize, spec: RingSpec, cols: Vec<SparseVec>) -> Matrix {
    Matrix::from_columns(nrows, spec, &cols)
}

fn single_degree(m: &FreeWGModule) -> BigradedComplex {
    BigradedComplex { spec: m.spec(), modules: vec![m.clone()], diffs: vec![Matrix::zeros(0, m.rank(), m.spec())] }
}

fn as_map(m: Matrix) -> ChainMap {
    ChainMap { components: vec![m] }
}

/// Apply `L` to a map `phi : src.generators -> tgt.generators`.
fn lift(phi: &[SparseVec], src: &FreeLie, tgt: &FreeLie) -> Vec<SparseVec> {
    src.evaluate_all(
        |g| phi[g].iter().map(|(j, c)| (tgt.leaf(*j), c.clone())).collect::<Vec<_>>().sorted(),
        |x, y| tgt.bracket(x, y),
    )
}

trait Sorted {
    fn sorted(self) -> Self;
}

impl Sorted for SparseVec {
    fn sorted(mut self) -> Self {
        self.sort_by_key(|e| e.0);
        self
    }
}

/// The simplicial object `r -> L^r(g)` with `d_0` the indecomposables of
/// the outer layer, middle faces composing layers, and the last face
/// evaluating the bracket of `g`; truncated at `levels` levels.
pub fn bar_construction(g: &GradedLieAlgebra, max_weight: u32, levels: usize) -> Result<SimplicialComplexOfComplexes> {
    let spec = g.spec();
    let base = g.module().truncate(max_weight);
    let g = g.truncate(max_weight);
    // frees[r] = L^r(g) as a free Lie algebra on L^{r-1}(g), r >= 1
    let mut frees: Vec<FreeLie> = Vec::new();
    let mut mods = vec![base.clone()];
    for r in 1..levels {
        let f = FreeLie::new(&mods[r - 1], max_weight)?;
        mods.push(f.module().clone());
        frees.push(f);
    }
    let fl = |r: usize| &frees[r - 1];
    let leaf_cols = |f: &FreeLie| -> Vec<SparseVec> {
        (0..f.module().rank())
            .map(|b| match f.trees()[b] {
                LieTree::Leaf(x) => vec![(x, spec.one())],
                _ => Vec::new(),
            })
            .collect()
    };
    let eta_cols = |f: &FreeLie| -> Vec<SparseVec> { (0..f.generators().rank()).map(|x| vec![(f.leaf(x), spec.one())]).collect() };
    // ev : L(g) -> g
    let ev: Vec<SparseVec> = if levels > 1 { fl(1).evaluate_all(|x| vec![(x, spec.one())], |x, y| g.bracket(x, y)) } else { Vec::new() };

    // apply L^k to a map between levels a -> b (given as columns)
    let lift_k = |mut cols: Vec<SparseVec>, mut a: usize, mut b: usize, k: usize| -> Vec<SparseVec> {
        for _ in 0..k {
            cols = lift(&cols, fl(a + 1), fl(b + 1));
            a += 1;
            b += 1;
        }
        cols
    };

    let mut faces: Vec<Vec<ChainMap>> = vec![Vec::new()];
    let mut degeneracies: Vec<Vec<ChainMap>> = Vec::new();
    for r in 1..levels {
        let mut fr = Vec::new();
        fr.push(as_map(matrix_from_cols(mods[r - 1].rank(), spec, leaf_cols(fl(r)))));
        for i in 1..r {
            // mu on L(L(X)) with X = L^{r-i-1}(g), lifted i-1 times
            let inner = fl(r - i + 1);
            let outer = fl(r - i);
            let mu = inner.evaluate_all(|x| vec![(x, spec.one())], |x, y| outer.bracket(x, y));
            let cols = lift_k(mu, r - i + 1, r - i, i - 1);
            fr.push(as_map(matrix_from_cols(mods[r - 1].rank(), spec, cols)));
        }
        let cols = lift_k(ev.clone(), 1, 0, r - 1);
        fr.push(as_map(matrix_from_cols(mods[r - 1].rank(), spec, cols)));
        faces.push(fr);
    }
    for r in 0..levels.saturating_sub(1) {
        let mut sr = Vec::new();
        for i in 0..=r {
            // eta into L(L^{r-i}(g)), lifted i times
            let cols = lift_k(eta_cols(fl(r - i + 1)), r - i, r - i + 1, i);
            sr.push(as_map(matrix_from_cols(mods[r + 1].rank(), spec, cols)));
        }
        degeneracies.push(sr);
    }
    let levels: Vec<BigradedComplex> = mods.iter().map(single_degree).collect();
    Ok(SimplicialComplexOfComplexes { spec, levels, faces, degeneracies })
}

/// Number of bar levels that can carry nondegenerate chains below the
/// weight bound: level `r` needs weight at least `(r + 1)` times the
/// smallest generator weight.
pub fn bar_levels(min_weight: u32, max_weight: u32) -> usize {
    (max_weight / min_weight).max(1) as usize
}

/// Largest supported `max_weight / min_weight` ratio for the bar oracle.
pub const BAR_RATIO_CAP: u32 = 8;

/// Lie algebra homology from the normalized bar construction, shifted up by
/// one and with the unit in weight 0, so it lines up with [`ce_homology`].
pub fn lie_homology_via_bar(g: &GradedLieAlgebra, max_weight: u32) -> Result<HomologySummary> {
    let spec = g.spec();
    let mut summary = HomologySummary::default();
    summary.insert(0, 0, 0, HomologyGroup { free: 1, torsion: Vec::new() });
    let Some(minw) = g.module().min_weight() else {
        return Ok(summary);
    };
    if minw == 0 {
        return Err(Error::Truncation("weight-0 generator".into()));
    }
    if max_weight >= BAR_RATIO_CAP * minw {
        return Err(Error::Truncation(format!(
            "bar oracle supports weights below {} times the smallest generator weight",
            BAR_RATIO_CAP
        )));
    }
    let s = bar_construction(g, max_weight, bar_levels(minw, max_weight))?;
    let d = normalize(&s)?;
    let tot = total_complex(&d)?;
    let h = homology(&tot)?;
    let _ = spec;
    for (&(n, i, w), grp) in &h.entries {
        summary.insert(n + 1, i, w, grp.clone());
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> RingSpec {
        RingSpec::PLocal { p: 3 }
    }

    fn module(elems: &[(&str, i64, u32)]) -> FreeWGModule {
        FreeWGModule::new(spec(), elems.iter().map(|(n, d, w)| BasisElem::new(*n, *d, *w)).collect()).unwrap()
    }

    fn one() -> Scalar {
        spec().one()
    }

    #[test]
    fn antisymmetry_fills_opposite_order() {
        let m = module(&[("a", 0, 1), ("b", 0, 1), ("c", 0, 2)]);
        let g = GradedLieAlgebra::new(m, vec![(0, 1, vec![(2, one())])]).unwrap();
        assert_eq!(g.bracket_basis(1, 0), &[(2, spec().from_i64(-1))]);
        g.check_axioms().unwrap();
    }

    #[test]
    fn odd_pair_must_be_symmetric() {
        let m = module(&[("a", 1, 1), ("b", 1, 1), ("c", 2, 2)]);
        let bad = GradedLieAlgebra::new(m.clone(), vec![(0, 1, vec![(2, one())]), (1, 0, vec![(2, spec().from_i64(-1))])]).unwrap();
        assert!(matches!(bad.check_axioms(), Err(Error::AxiomViolation { axiom: 1, .. })));
        let good = GradedLieAlgebra::new(m, vec![(0, 1, vec![(2, one())]), (1, 0, vec![(2, one())])]).unwrap();
        good.check_axioms().unwrap();
    }

    #[test]
    fn even_pair_must_be_antisymmetric() {
        let m = module(&[("a", 0, 1), ("b", 0, 1), ("c", 0, 2)]);
        let bad = GradedLieAlgebra::new(m, vec![(0, 1, vec![(2, one())]), (1, 0, vec![(2, one())])]).unwrap();
        let err = bad.check_axioms().unwrap_err();
        assert_eq!(err, Error::AxiomViolation { axiom: 1, tuple: "(a, b)".into() });
    }

    #[test]
    fn free_on_one_generator() {
        let even = free_lie_basis(&module(&[("x", 0, 1)]), 3).unwrap();
        assert_eq!(even.rank(), 1);
        let odd = free_lie_basis(&module(&[("x", 1, 1)]), 3).unwrap();
        let names: Vec<&str> = odd.module().basis().iter().map(|b| b.name.as_str()).collect();
        assert_eq!(names, vec!["x", "[x,x]"]);
        odd.check_axioms().unwrap();
    }

    #[test]
    fn free_on_two_even_generators() {
        let f = free_lie_basis(&module(&[("a", 0, 1), ("b", 0, 1)]), 3).unwrap();
        let count = |w| f.module().basis().iter().filter(|b| b.weight == w).count();
        assert_eq!((count(1), count(2), count(3)), (2, 1, 2));
        f.check_axioms().unwrap();
    }

    #[test]
    fn abelian_ce_has_zero_differential() {
        let g = GradedLieAlgebra::abelian(module(&[("x", 1, 1), ("y", 0, 1)]));
        let c = ce_complex(&g, 3).unwrap();
        assert!(c.diffs.iter().all(|d| d.is_zero()));
    }

    #[test]
    fn ce_squares_to_zero_on_free_algebras() {
        for gens in [vec![("x", 1, 1)], vec![("a", 0, 1), ("b", 1, 1)], vec![("a", 0, 1), ("b", 0, 1)]] {
            let f = free_lie_basis(&module(&gens), 5).unwrap();
            ce_complex(&f, 5).unwrap().verify().unwrap();
        }
    }

    #[test]
    fn json_round_trip() {
        let m = module(&[("a", 0, 1), ("b", 0, 1), ("c", 0, 2)]);
        let g = GradedLieAlgebra::new(m, vec![(0, 1, vec![(2, one())])]).unwrap();
        let back = GradedLieAlgebra::from_json_value(&g.to_json_value()).unwrap();
        assert_eq!(back.bracket_basis(1, 0), g.bracket_basis(1, 0));
    }
}
