//! Chain complexes of weighted graded modules, simplicial objects in them,
//! normalization and total complexes, and homology with torsion readout.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::{axpy, eliminate, smith_exponents, Matrix, RingSpec, Scalar, SparseVec, Track};
use crate::error::{Error, Result};
use crate::wgmod::{check_spec, BasisElem, FreeWGModule};

/// `C_0 <- C_1 <- ...`; `diffs[n]` is `d_n : C_n -> C_{n-1}` (with `d_0 = 0`).
#[derive(Clone, Debug)]
pub struct BigradedComplex {
    pub spec: RingSpec,
    pub modules: Vec<FreeWGModule>,
    pub diffs: Vec<Matrix>,
}

impl BigradedComplex {
    pub fn new(spec: RingSpec, modules: Vec<FreeWGModule>, mut diffs: Vec<Matrix>) -> Result<Self> {
        if diffs.len() + 1 == modules.len() {
            let c0 = modules.first().map_or(0, |m| m.rank());
            diffs.insert(0, Matrix::zeros(0, c0, spec));
        }
        if diffs.len() != modules.len() {
            return Err(Error::InvalidModule("one differential per homological degree expected".into()));
        }
        for m in &modules {
            check_spec(spec, m.spec())?;
        }
        for n in 1..modules.len() {
            let d = &diffs[n];
            check_spec(spec, d.spec)?;
            if d.ncols != modules[n].rank() || d.nrows != modules[n - 1].rank() {
                return Err(Error::InvalidModule(format!("d_{n} has the wrong shape")));
            }
            for (i, row) in d.rows().iter().enumerate() {
                for (j, _) in row {
                    let (s, t) = (modules[n].elem(*j), modules[n - 1].elem(i));
                    if s.degree != t.degree || s.weight != t.weight {
                        return Err(Error::InvalidModule(format!("d_{n}({}) leaves its (degree, weight) block", s.name)));
                    }
                }
            }
        }
        Ok(BigradedComplex { spec, modules, diffs })
    }

    pub fn zero(spec: RingSpec) -> Self {
        BigradedComplex { spec, modules: Vec::new(), diffs: Vec::new() }
    }

    pub fn top(&self) -> usize {
        self.modules.len().saturating_sub(1)
    }

    pub fn module(&self, n: usize) -> Option<&FreeWGModule> {
        self.modules.get(n)
    }

    /// Check `d_n d_{n+1} = 0`, naming the first offending basis element.
    pub fn verify(&self) -> Result<()> {
        for n in 1..self.modules.len().saturating_sub(1) {
            let dd = self.diffs[n].mul(&self.diffs[n + 1]);
            if !dd.is_zero() {
                let col = dd.rows().iter().flat_map(|r| r.iter().map(|e| e.0)).min().unwrap();
                return Err(Error::NotAComplex(self.modules[n + 1].elem(col).name.clone()));
            }
        }
        Ok(())
    }

    /// The dual cochain complex, re-indexed as a chain complex is not
    /// needed: see [`cohomology`].
    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }
}

/// Free rank and p-power torsion exponents of one homology group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free: usize,
    pub torsion: Vec<u32>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn add(&mut self, other: &HomologyGroup) {
        self.free += other.free;
        self.torsion.extend(other.torsion.iter().copied());
        self.torsion.sort_unstable();
    }

    /// Rendering such as `R^2 + Z/3^1`.
    pub fn render(&self, p: u64) -> String {
        let mut parts = Vec::new();
        if self.free > 0 {
            parts.push(format!("R^{}", self.free));
        }
        for e in &self.torsion {
            parts.push(format!("Z/{p}^{e}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Homology indexed by (homological degree, internal degree, weight).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologySummary {
    pub entries: BTreeMap<(i64, i64, u32), HomologyGroup>,
}

#[derive(Serialize, Deserialize)]
struct SummaryEntry {
    n: i64,
    i: i64,
    w: u32,
    free: usize,
    torsion: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SummaryJson {
    entries: Vec<SummaryEntry>,
}

impl Serialize for HomologySummary {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self
            .entries
            .iter()
            .map(|(&(n, i, w), g)| SummaryEntry { n, i, w, free: g.free, torsion: g.torsion.clone() })
            .collect();
        SummaryJson { entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomologySummary {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SummaryJson::deserialize(d)?;
        let mut out = HomologySummary::default();
        for e in j.entries {
            out.entries.insert((e.n, e.i, e.w), HomologyGroup { free: e.free, torsion: e.torsion });
        }
        Ok(out)
    }
}

impl HomologySummary {
    pub fn get(&self, n: i64, i: i64, w: u32) -> HomologyGroup {
        self.entries.get(&(n, i, w)).cloned().unwrap_or_default()
    }

    pub fn insert(&mut self, n: i64, i: i64, w: u32, g: HomologyGroup) {
        if !g.is_zero() {
            self.entries.entry((n, i, w)).or_default().add(&g);
        }
    }

    /// Entries restricted to one weight.
    pub fn weight(&self, w: u32) -> HomologySummary {
        HomologySummary { entries: self.entries.iter().filter(|(k, _)| k.2 == w).map(|(k, v)| (*k, v.clone())).collect() }
    }

    pub fn total_free(&self) -> usize {
        self.entries.values().map(|g| g.free).sum()
    }

    pub fn torsion_count(&self) -> usize {
        self.entries.values().map(|g| g.torsion.len()).sum()
    }
}

fn worker_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var("HECKE_CE_THREADS").ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
}

/// Run `f` on the worker pool sized by `HECKE_CE_THREADS`, or rayon's global
/// pool when unset.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match worker_pool() {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

type BlockKey = (i64, u32);

/// Position of every basis element inside its (degree, weight) block.
fn local_positions(m: &FreeWGModule) -> (Vec<usize>, BTreeMap<BlockKey, usize>) {
    let mut counts: BTreeMap<BlockKey, usize> = BTreeMap::new();
    let mut pos = Vec::with_capacity(m.rank());
    for b in m.basis() {
        let c = counts.entry((b.degree, b.weight)).or_insert(0);
        pos.push(*c);
        *c += 1;
    }
    (pos, counts)
}

/// Split a block-diagonal differential into its (degree, weight) blocks.
fn split_blocks(
    d: &Matrix,
    src: &FreeWGModule,
    tgt: &FreeWGModule,
    src_pos: &[usize],
    tgt_pos: &[usize],
    src_counts: &BTreeMap<BlockKey, usize>,
    tgt_counts: &BTreeMap<BlockKey, usize>,
) -> HashMap<BlockKey, Matrix> {
    let mut rows: HashMap<BlockKey, Vec<SparseVec>> = HashMap::new();
    for (key, &n) in tgt_counts {
        rows.insert(*key, vec![Vec::new(); n]);
    }
    for (i, row) in d.rows().iter().enumerate() {
        let b = tgt.elem(i);
        let key = (b.degree, b.weight);
        let local: SparseVec = row.iter().map(|(j, v)| (src_pos[*j], v.clone())).collect();
        let mut local = local;
        local.sort_by_key(|e| e.0);
        rows.get_mut(&key).unwrap()[tgt_pos[i]] = local;
    }
    let _ = src;
    let mut out = HashMap::new();
    for (key, r) in rows {
        let ncols = src_counts.get(&key).copied().unwrap_or(0);
        out.insert(key, Matrix::from_rows(r.len(), ncols, d.spec, r));
    }
    out
}

/// Homology of `C_{n+1} --inc--> C_n --out--> C_{n-1}` on one block, where
/// `dim = rank C_n`.
pub fn block_homology(spec: RingSpec, dim: usize, out: Option<&Matrix>, inc: Option<&Matrix>) -> Result<HomologyGroup> {
    if dim == 0 {
        return Ok(HomologyGroup::default());
    }
    match spec {
        RingSpec::PLocal { .. } => {
            let rank_out = match out {
                Some(m) if !m.is_zero() => smith_exponents(m)?.len(),
                _ => 0,
            };
            let exps = match inc {
                Some(m) if !m.is_zero() => smith_exponents(m)?,
                _ => Vec::new(),
            };
            let free = dim - rank_out - exps.len();
            let torsion = exps.into_iter().filter(|&e| e > 0).collect();
            Ok(HomologyGroup { free, torsion })
        }
        RingSpec::ChainRing { p, n } => chain_ring_block(p, n, dim, out, inc),
        RingSpec::TruncPoly { .. } => Err(Error::NotChainRing(spec.to_string())),
    }
}

fn chain_ring_block(p: u64, big_n: u32, dim: usize, out: Option<&Matrix>, inc: Option<&Matrix>) -> Result<HomologyGroup> {
    let spec = RingSpec::ChainRing { p, n: big_n };
    // order of the kernel generator attached to each column
    let mut order = vec![big_n; dim];
    let mut vinv: Option<Matrix> = None;
    if let Some(m) = out.filter(|m| !m.is_zero()) {
        let el = eliminate(m, Track { u: false, v: false, vinv: true })?;
        for pv in &el.pivots {
            order[pv.col] = pv.exp;
        }
        vinv = Some(Matrix::from_rows(dim, dim, spec, el.vinv));
    }
    let y = match inc.filter(|m| !m.is_zero()) {
        Some(b) => match &vinv {
            Some(vi) => vi.mul(b),
            None => b.clone(),
        },
        None => Matrix::zeros(dim, 0, spec),
    };
    let lifted = RingSpec::ChainRing { p, n: big_n + 1 };
    let gens: Vec<usize> = (0..dim).filter(|&j| order[j] > 0).collect();
    let mut rows = Vec::with_capacity(gens.len());
    for (g, &j) in gens.iter().enumerate() {
        let shift = p.pow(big_n - order[j]);
        let mut row: SparseVec = Vec::new();
        for (c, v) in y.row(j) {
            let r = v.to_bigint().unwrap();
            let r: u64 = r.try_into().unwrap();
            if !r.is_multiple_of(shift) {
                return Err(Error::NotAComplex(format!("image not inside the kernel at column {j}")));
            }
            let q = lifted.from_i64((r / shift) as i64);
            if !q.is_zero() {
                row.push((*c, q));
            }
        }
        row.push((y.ncols + g, lifted.p_power(order[j])));
        rows.push(row);
    }
    let pres = Matrix::from_rows(gens.len(), y.ncols + gens.len(), lifted, rows);
    let exps = smith_exponents(&pres)?;
    let mut group = HomologyGroup::default();
    for e in exps {
        if e == big_n {
            group.free += 1;
        } else if e > 0 {
            group.torsion.push(e);
        }
    }
    group.torsion.sort_unstable();
    Ok(group)
}

struct BlockData {
    /// blocks[n][key] = d_n restricted to the block
    blocks: Vec<HashMap<BlockKey, Matrix>>,
    counts: Vec<BTreeMap<BlockKey, usize>>,
}

fn block_data(c: &BigradedComplex) -> BlockData {
    let mut positions = Vec::new();
    let mut counts = Vec::new();
    for m in &c.modules {
        let (p, k) = local_positions(m);
        positions.push(p);
        counts.push(k);
    }
    let mut blocks = vec![HashMap::new()];
    for n in 1..c.modules.len() {
        blocks.push(split_blocks(
            &c.diffs[n],
            &c.modules[n],
            &c.modules[n - 1],
            &positions[n],
            &positions[n - 1],
            &counts[n],
            &counts[n - 1],
        ));
    }
    BlockData { blocks, counts }
}

/// Homology of a complex over `Z_(p)` or `Z/p^N`, block by block.
pub fn homology(c: &BigradedComplex) -> Result<HomologySummary> {
    if !c.spec.is_chain_ring() {
        return Err(Error::NotChainRing(c.spec.to_string()));
    }
    let data = block_data(c);
    let mut jobs = Vec::new();
    for n in 0..c.modules.len() {
        for (&key, &dim) in &data.counts[n] {
            jobs.push((n, key, dim));
        }
    }
    let results: Vec<Result<((i64, i64, u32), HomologyGroup)>> = with_pool(|| {
        jobs.par_iter()
            .map(|&(n, key, dim)| {
                let out = if n >= 1 { data.blocks[n].get(&key) } else { None };
                let inc = data.blocks.get(n + 1).and_then(|b| b.get(&key));
                let g = block_homology(c.spec, dim, out, inc)?;
                Ok(((n as i64, key.0, key.1), g))
            })
            .collect()
    });
    let mut summary = HomologySummary::default();
    for r in results {
        let ((n, i, w), g) = r?;
        summary.insert(n, i, w, g);
    }
    Ok(summary)
}

/// Cohomology of the dual complex `Hom(C, R)`, keyed by
/// (cohomological degree, dual internal degree, weight). Dual internal
/// degrees are the negatives of the original ones.
pub fn cohomology(c: &BigradedComplex) -> Result<HomologySummary> {
    if !c.spec.is_chain_ring() {
        return Err(Error::NotChainRing(c.spec.to_string()));
    }
    let data = block_data(c);
    let mut jobs = Vec::new();
    for n in 0..c.modules.len() {
        for (&key, &dim) in &data.counts[n] {
            jobs.push((n, key, dim));
        }
    }
    let results: Vec<Result<((i64, i64, u32), HomologyGroup)>> = with_pool(|| {
        jobs.par_iter()
            .map(|&(n, key, dim)| {
                let out = data.blocks.get(n + 1).and_then(|b| b.get(&key)).map(|m| m.transpose());
                let inc = if n >= 1 { data.blocks[n].get(&key).map(|m| m.transpose()) } else { None };
                let g = block_homology(c.spec, dim, out.as_ref(), inc.as_ref())?;
                Ok(((n as i64, -key.0, key.1), g))
            })
            .collect()
    });
    let mut summary = HomologySummary::default();
    for r in results {
        let ((n, i, w), g) = r?;
        summary.insert(n, i, w, g);
    }
    Ok(summary)
}

/// Degree-wise maps between complexes: `components[j] : A_j -> B_j`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub components: Vec<Matrix>,
}

impl ChainMap {
    pub fn component(&self, j: usize) -> Option<&Matrix> {
        self.components.get(j)
    }
}

/// A finite piece of a simplicial object in chain complexes.
/// `faces[r][k] : level r -> level r-1` for `1 <= r`, `0 <= k <= r`;
/// `degeneracies[r][k] : level r -> level r+1` for `0 <= k <= r`, present
/// when level `r+1` is.
#[derive(Clone, Debug)]
pub struct SimplicialComplexOfComplexes {
    pub spec: RingSpec,
    pub levels: Vec<BigradedComplex>,
    pub faces: Vec<Vec<ChainMap>>,
    pub degeneracies: Vec<Vec<ChainMap>>,
}

fn map_at(m: &ChainMap, j: usize, rows: usize, cols: usize, spec: RingSpec) -> Matrix {
    m.components.get(j).cloned().unwrap_or_else(|| Matrix::zeros(rows, cols, spec))
}

fn rank_at(c: &BigradedComplex, j: usize) -> usize {
    c.modules.get(j).map_or(0, |m| m.rank())
}

impl SimplicialComplexOfComplexes {
    /// Check the simplicial identities and that every structure map is a
    /// chain map.
    pub fn check_identities(&self) -> Result<()> {
        let spec = self.spec;
        let top = self.levels.iter().map(|l| l.modules.len()).max().unwrap_or(0);
        let fail = |what: String| Err(Error::NotAComplex(what));
        for j in 0..top {
            let face = |r: usize, k: usize| map_at(&self.faces[r][k], j, rank_at(&self.levels[r - 1], j), rank_at(&self.levels[r], j), spec);
            let deg = |r: usize, k: usize| map_at(&self.degeneracies[r][k], j, rank_at(&self.levels[r + 1], j), rank_at(&self.levels[r], j), spec);
            for r in 2..self.levels.len() {
                for i in 0..r {
                    for k in (i + 1)..=r {
                        // d_i d_k = d_{k-1} d_i
                        if face(r - 1, i).mul(&face(r, k)) != face(r - 1, k - 1).mul(&face(r, i)) {
                            return fail(format!("face identity d{i} d{k} at level {r}, degree {j}"));
                        }
                    }
                }
            }
            for r in 0..self.levels.len().saturating_sub(1) {
                let id = Matrix::identity(rank_at(&self.levels[r], j), spec);
                for k in 0..=r {
                    let s = deg(r, k);
                    for i in 0..=(r + 1) {
                        let lhs = face(r + 1, i).mul(&s);
                        let rhs = if i < k {
                            if r == 0 {
                                continue;
                            }
                            deg(r - 1, k - 1).mul(&face(r, i))
                        } else if i == k || i == k + 1 {
                            id.clone()
                        } else {
                            if r == 0 {
                                continue;
                            }
                            deg(r - 1, k).mul(&face(r, i - 1))
                        };
                        if lhs != rhs {
                            return fail(format!("degeneracy identity d{i} s{k} at level {r}, degree {j}"));
                        }
                    }
                }
            }
        }
        // structure maps commute with the internal differentials
        for r in 0..self.levels.len() {
            for j in 1..self.levels[r].modules.len() {
                let d = &self.levels[r].diffs[j];
                if r >= 1 {
                    for (k, f) in self.faces[r].iter().enumerate() {
                        let dl = self.levels[r - 1].diffs.get(j).cloned().unwrap_or_else(|| Matrix::zeros(rank_at(&self.levels[r - 1], j - 1), rank_at(&self.levels[r - 1], j), spec));
                        let a = dl.mul(&map_at(f, j, rank_at(&self.levels[r - 1], j), rank_at(&self.levels[r], j), spec));
                        let b = map_at(f, j - 1, rank_at(&self.levels[r - 1], j - 1), rank_at(&self.levels[r], j - 1), spec).mul(d);
                        if a != b {
                            return fail(format!("face d{k} at level {r} is not a chain map in degree {j}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A double complex: `modules[r][j]`, vertical `d : (r, j) -> (r, j-1)`
/// stored in `vertical[r][j]`, horizontal `(r, j) -> (r-1, j)` in
/// `horizontal[r][j]`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub spec: RingSpec,
    pub modules: Vec<Vec<FreeWGModule>>,
    pub vertical: Vec<Vec<Matrix>>,
    pub horizontal: Vec<Vec<Matrix>>,
}

impl DoubleComplex {
    pub fn module(&self, r: usize, j: usize) -> Option<&FreeWGModule> {
        self.modules.get(r).and_then(|l| l.get(j))
    }

    fn rank(&self, r: usize, j: usize) -> usize {
        self.module(r, j).map_or(0, |m| m.rank())
    }

    /// Concentrate a single complex in simplicial degree 0.
    pub fn from_complex(c: &BigradedComplex) -> DoubleComplex {
        DoubleComplex {
            spec: c.spec,
            modules: vec![c.modules.clone()],
            vertical: vec![c.diffs.clone()],
            horizontal: vec![c.modules.iter().map(|m| Matrix::zeros(0, m.rank(), c.spec)).collect()],
        }
    }
}

/// Projection onto the complement of a span that is a direct summand with
/// unit pivots.
struct Quotient {
    keep: Vec<usize>,
    proj: Matrix,
}

fn quotient_by_span(spec: RingSpec, dim: usize, vectors: Vec<SparseVec>) -> Result<Quotient> {
    // reduced basis: pivot index -> vector with coefficient 1 there and 0 at
    // every other pivot
    let mut basis: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for mut v in vectors {
        for (&piv, b) in &basis {
            if let Ok(k) = v.binary_search_by_key(&piv, |e| e.0) {
                let c = v[k].1.neg();
                v = axpy(&v, &c, b);
            }
        }
        if v.is_empty() {
            continue;
        }
        let Some(&(piv, ref c)) = v.iter().find(|e| e.1.is_unit()) else {
            return Err(Error::InvalidModule("degenerate part is not a direct summand".into()));
        };
        let inv = c.inverse()?;
        let v: SparseVec = v.iter().map(|(i, x)| (*i, x.mul(&inv))).collect();
        for b in basis.values_mut() {
            if let Ok(k) = b.binary_search_by_key(&piv, |e| e.0) {
                let c = b[k].1.neg();
                *b = axpy(b, &c, &v);
            }
        }
        basis.insert(piv, v);
    }
    let mut local = vec![usize::MAX; dim];
    let keep: Vec<usize> = (0..dim).filter(|i| !basis.contains_key(i)).collect();
    for (k, &i) in keep.iter().enumerate() {
        local[i] = k;
    }
    let mut cols: Vec<SparseVec> = vec![Vec::new(); dim];
    for &i in &keep {
        cols[i] = vec![(local[i], spec.one())];
    }
    for (&piv, b) in &basis {
        cols[piv] = b.iter().filter(|(i, _)| *i != piv).map(|(i, x)| (local[*i], x.neg())).collect();
        cols[piv].sort_by_key(|e| e.0);
    }
    let proj = Matrix::from_columns(keep.len(), spec, &cols);
    Ok(Quotient { keep, proj })
}

fn sub_module(m: &FreeWGModule, keep: &[usize]) -> FreeWGModule {
    FreeWGModule::new(m.spec(), keep.iter().map(|&i| m.elem(i).clone()).collect()).unwrap()
}

/// Normalized chains: divide each level by the images of the degeneracies
/// and use the alternating sum of faces as the simplicial differential.
pub fn normalize(s: &SimplicialComplexOfComplexes) -> Result<DoubleComplex> {
    let spec = s.spec;
    let mut quots: Vec<Vec<Quotient>> = Vec::new();
    for r in 0..s.levels.len() {
        let lvl = &s.levels[r];
        let mut per_j = Vec::new();
        for j in 0..lvl.modules.len() {
            let dim = lvl.modules[j].rank();
            let mut vecs = Vec::new();
            if r >= 1 {
                for dg in &s.degeneracies[r - 1] {
                    if let Some(m) = dg.component(j) {
                        vecs.extend(m.columns().into_iter().filter(|c| !c.is_empty()));
                    }
                }
            }
            per_j.push(quotient_by_span(spec, dim, vecs)?);
        }
        quots.push(per_j);
    }
    let mut modules = Vec::new();
    let mut vertical = Vec::new();
    let mut horizontal = Vec::new();
    for r in 0..s.levels.len() {
        let lvl = &s.levels[r];
        let mods: Vec<FreeWGModule> = (0..lvl.modules.len()).map(|j| sub_module(&lvl.modules[j], &quots[r][j].keep)).collect();
        let mut vert = Vec::new();
        let mut hor = Vec::new();
        for j in 0..lvl.modules.len() {
            let q = &quots[r][j];
            let incl = inclusion(lvl.modules[j].rank(), &q.keep, spec);
            if j == 0 {
                vert.push(Matrix::zeros(0, q.keep.len(), spec));
            } else {
                vert.push(quots[r][j - 1].proj.mul(&lvl.diffs[j]).mul(&incl));
            }
            if r == 0 {
                hor.push(Matrix::zeros(0, q.keep.len(), spec));
            } else {
                let below = &s.levels[r - 1];
                let tgt_rank = rank_at(below, j);
                let mut sum = Matrix::zeros(tgt_rank, lvl.modules[j].rank(), spec);
                for (k, f) in s.faces[r].iter().enumerate() {
                    let m = map_at(f, j, tgt_rank, lvl.modules[j].rank(), spec);
                    let m = if k % 2 == 0 { m } else { m.scale(&spec.from_i64(-1)) };
                    sum = sum.add(&m);
                }
                let proj = match quots[r - 1].get(j) {
                    Some(q) => q.proj.clone(),
                    None => Matrix::zeros(0, 0, spec),
                };
                hor.push(proj.mul(&sum).mul(&incl));
            }
        }
        modules.push(mods);
        vertical.push(vert);
        horizontal.push(hor);
    }
    Ok(DoubleComplex { spec, modules, vertical, horizontal })
}

fn inclusion(dim: usize, keep: &[usize], spec: RingSpec) -> Matrix {
    let cols: Vec<SparseVec> = keep.iter().map(|&i| vec![(i, spec.one())]).collect();
    Matrix::from_columns(dim, spec, &cols)
}

/// Total complex with `d = d_vertical + (-1)^j d_horizontal` in total degree
/// `j + r`.
pub fn total_complex(d: &DoubleComplex) -> Result<BigradedComplex> {
    let spec = d.spec;
    let top = (0..d.modules.len()).flat_map(|r| (0..d.modules[r].len()).map(move |j| r + j)).max();
    let Some(top) = top else {
        return Ok(BigradedComplex::zero(spec));
    };
    // offsets[n] : (r, j) -> start index inside C_n
    let mut modules = Vec::new();
    let mut offsets: Vec<BTreeMap<(usize, usize), usize>> = Vec::new();
    for n in 0..=top {
        let mut basis = Vec::new();
        let mut off = BTreeMap::new();
        for r in 0..d.modules.len() {
            if n < r {
                continue;
            }
            let j = n - r;
            if let Some(m) = d.module(r, j) {
                off.insert((r, j), basis.len());
                for b in m.basis() {
                    basis.push(BasisElem { name: format!("[{r}]{}", b.name), degree: b.degree, weight: b.weight });
                }
            }
        }
        modules.push(FreeWGModule::new(spec, basis)?);
        offsets.push(off);
    }
    let mut diffs = vec![Matrix::zeros(0, modules[0].rank(), spec)];
    for n in 1..=top {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); modules[n - 1].rank()];
        for (&(r, j), &src_off) in &offsets[n] {
            if j >= 1 {
                if let Some(&tgt_off) = offsets[n - 1].get(&(r, j - 1)) {
                    push_block(&mut rows, &d.vertical[r][j], src_off, tgt_off, None);
                }
            }
            if r >= 1 {
                if let Some(&tgt_off) = offsets[n - 1].get(&(r - 1, j)) {
                    let sign = if j % 2 == 0 { None } else { Some(spec.from_i64(-1)) };
                    push_block(&mut rows, &d.horizontal[r][j], src_off, tgt_off, sign.as_ref());
                }
            }
        }
        for r in rows.iter_mut() {
            r.sort_by_key(|e| e.0);
        }
        diffs.push(Matrix::from_rows(modules[n - 1].rank(), modules[n].rank(), spec, rows));
    }
    let _ = d.rank(0, 0);
    BigradedComplex::new(spec, modules, diffs)
}

fn push_block(rows: &mut [SparseVec], m: &Matrix, src_off: usize, tgt_off: usize, sign: Option<&Scalar>) {
    for (i, row) in m.rows().iter().enumerate() {
        for (j, v) in row {
            let v = match sign {
                Some(s) => v.mul(s),
                None => v.clone(),
            };
            rows[tgt_off + i].push((src_off + j, v));
        }
    }
}

/// Euler characteristic per (internal degree, weight) of the chain groups.
pub fn euler_characteristic(c: &BigradedComplex) -> BTreeMap<(i64, u32), i64> {
    let mut out: BTreeMap<(i64, u32), i64> = BTreeMap::new();
    for (n, m) in c.modules.iter().enumerate() {
        for b in m.basis() {
            *out.entry((b.degree, b.weight)).or_insert(0) += if n % 2 == 0 { 1 } else { -1 };
        }
    }
    out
}
