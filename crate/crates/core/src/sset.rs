//! Finite simplicial sets with dimension caps.
//!
//! Only nondegenerate simplices are stored; every simplex is handled in its
//! normal form, a nondegenerate base together with a degeneracy word encoded
//! as a monotone surjection. All simplicial operators funnel through
//! [`FiniteSimplicialSet::apply_cell`], which composes monotone maps and
//! factors them as surjection-after-injection, so the simplicial identities
//! for words hold by construction and only the stored face tables carry
//! actual data.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::budget::{Budget, BudgetExceeded};
use crate::cat::{CatError, FiniteCategory, FiniteCategoryPresentation, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SsetError {
    Invalid(String),
    IndexOutOfRange(String),
    Budget(BudgetExceeded),
    Cat(CatError),
    NotAVertex,
}

impl fmt::Display for SsetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SsetError::Invalid(s) => write!(f, "invalid simplicial data: {s}"),
            SsetError::IndexOutOfRange(s) => write!(f, "index out of range: {s}"),
            SsetError::Budget(b) => write!(f, "{b}"),
            SsetError::Cat(c) => write!(f, "{c}"),
            SsetError::NotAVertex => write!(f, "candidate is not a vertex of the over-category"),
        }
    }
}

impl From<BudgetExceeded> for SsetError {
    fn from(b: BudgetExceeded) -> SsetError {
        SsetError::Budget(b)
    }
}

impl From<CatError> for SsetError {
    fn from(c: CatError) -> SsetError {
        SsetError::Cat(c)
    }
}

/// Monotone map of finite ordinals `[dom] -> [cod]`, stored by its values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonoMap {
    pub cod: usize,
    pub vals: Vec<usize>,
}

impl MonoMap {
    pub fn identity(n: usize) -> MonoMap {
        MonoMap { cod: n, vals: (0..=n).collect() }
    }

    /// Injection `[n-1] -> [n]` missing `i`.
    pub fn delta(n: usize, i: usize) -> MonoMap {
        assert!(i <= n && n >= 1);
        MonoMap { cod: n, vals: (0..=n).filter(|&v| v != i).collect() }
    }

    /// Surjection `[n+1] -> [n]` hitting `j` twice.
    pub fn sigma(n: usize, j: usize) -> MonoMap {
        assert!(j <= n);
        let mut vals = Vec::with_capacity(n + 2);
        for v in 0..=n {
            vals.push(v);
            if v == j {
                vals.push(v);
            }
        }
        MonoMap { cod: n, vals }
    }

    pub fn dom(&self) -> usize {
        self.vals.len() - 1
    }

    pub fn is_identity(&self) -> bool {
        self.cod == self.dom() && self.vals.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_monotone(&self) -> bool {
        self.vals.windows(2).all(|w| w[0] <= w[1]) && self.vals.iter().all(|&v| v <= self.cod)
    }

    pub fn is_epi(&self) -> bool {
        (0..=self.cod).all(|v| self.vals.contains(&v))
    }

    /// `self . inner`: apply `inner` first.
    pub fn compose(&self, inner: &MonoMap) -> MonoMap {
        assert_eq!(inner.cod, self.dom());
        MonoMap { cod: self.cod, vals: inner.vals.iter().map(|&v| self.vals[v]).collect() }
    }

    /// Factor as `mono . epi`.
    pub fn factor(&self) -> (MonoMap, MonoMap) {
        let mut image: Vec<usize> = self.vals.clone();
        image.dedup();
        let epi_vals = self
            .vals
            .iter()
            .map(|v| image.iter().position(|w| w == v).unwrap())
            .collect();
        let epi = MonoMap { cod: image.len() - 1, vals: epi_vals };
        let mono = MonoMap { cod: self.cod, vals: image };
        (epi, mono)
    }
}

/// All monotone surjections `[m] -> [k]` in lexicographic order of values.
pub fn enumerate_epis(m: usize, k: usize) -> Vec<MonoMap> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    fn rec(m: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<MonoMap>) {
        if acc.len() == m + 1 {
            if *acc.last().unwrap() == k {
                out.push(MonoMap { cod: k, vals: acc.clone() });
            }
            return;
        }
        let cur = *acc.last().unwrap();
        for next in [cur, cur + 1] {
            if next <= k {
                acc.push(next);
                rec(m, k, acc, out);
                acc.pop();
            }
        }
    }
    let mut acc = vec![0];
    rec(m, k, &mut acc, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SimplexId {
    pub dim: usize,
    pub idx: usize,
}

/// Normal form of a simplex: nondegenerate base and an epi degeneracy word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub base: SimplexId,
    pub word: MonoMap, // epi [dim] -> [base.dim]
}

impl Cell {
    pub fn nondeg(base: SimplexId) -> Cell {
        Cell { word: MonoMap::identity(base.dim), base }
    }

    pub fn dim(&self) -> usize {
        self.word.dom()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.word.is_identity()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSimplicialSet {
    cap: usize,
    labels: Vec<Vec<String>>,
    /// `faces[n][idx][i]` for `n >= 1`; entry 0 of the outer vec is unused.
    faces: Vec<Vec<Vec<Cell>>>,
}

impl FiniteSimplicialSet {
    pub fn new(cap: usize, labels: Vec<Vec<String>>, faces: Vec<Vec<Vec<Cell>>>) -> FiniteSimplicialSet {
        FiniteSimplicialSet { cap, labels, faces }
    }

    pub fn empty() -> FiniteSimplicialSet {
        FiniteSimplicialSet { cap: 0, labels: vec![vec![]], faces: vec![vec![]] }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn count(&self, dim: usize) -> usize {
        self.labels.get(dim).map_or(0, |l| l.len())
    }

    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.cap).map(|d| self.count(d)).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn label(&self, id: SimplexId) -> &str {
        &self.labels[id.dim][id.idx]
    }

    pub fn face(&self, id: SimplexId, i: usize) -> &Cell {
        &self.faces[id.dim][id.idx][i]
    }

    /// Apply an arbitrary monotone operator to a cell.
    pub fn apply_cell(&self, cell: &Cell, op: &MonoMap) -> Cell {
        let composed = cell.word.compose(op);
        let (epi, mono) = composed.factor();
        if mono.is_identity() {
            return Cell { base: cell.base, word: epi };
        }
        let face_cell = self.resolve_mono(cell.base, &mono);
        self.apply_cell(&face_cell, &epi)
    }

    fn resolve_mono(&self, id: SimplexId, mono: &MonoMap) -> Cell {
        debug_assert!(!mono.is_identity());
        let missing = (0..=id.dim)
            .rev()
            .find(|v| !mono.vals.contains(v))
            .expect("proper injection misses a value");
        let face = self.face(id, missing).clone();
        let adjusted = MonoMap {
            cod: id.dim - 1,
            vals: mono.vals.iter().map(|&v| if v > missing { v - 1 } else { v }).collect(),
        };
        if adjusted.is_identity() {
            face
        } else {
            self.apply_cell(&face, &adjusted)
        }
    }

    pub fn face_of_cell(&self, cell: &Cell, i: usize) -> Cell {
        self.apply_cell(cell, &MonoMap::delta(cell.dim(), i))
    }

    pub fn degeneracy_of_cell(&self, cell: &Cell, j: usize) -> Cell {
        self.apply_cell(cell, &MonoMap::sigma(cell.dim(), j))
    }

    /// All cells of dimension `m` (nondegenerate bases first, then
    /// degeneracies of lower bases in descending base dimension).
    pub fn all_cells(&self, m: usize) -> Vec<Cell> {
        let mut out = Vec::new();
        for idx in 0..self.count(m) {
            out.push(Cell::nondeg(SimplexId { dim: m, idx }));
        }
        for k in (0..m).rev() {
            for idx in 0..self.count(k) {
                for epi in enumerate_epis(m, k) {
                    out.push(Cell { base: SimplexId { dim: k, idx }, word: epi });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), SsetError> {
        if self.labels.len() != self.cap + 1 || self.faces.len() != self.cap + 1 {
            return Err(SsetError::Invalid("table lengths do not match the cap".into()));
        }
        for n in 1..=self.cap {
            if self.faces[n].len() != self.labels[n].len() {
                return Err(SsetError::Invalid(format!("face table size mismatch in dim {n}")));
            }
            for (idx, fs) in self.faces[n].iter().enumerate() {
                if fs.len() != n + 1 {
                    return Err(SsetError::Invalid(format!(
                        "simplex {idx} in dim {n} has {} faces, expected {}",
                        fs.len(),
                        n + 1
                    )));
                }
                for (i, c) in fs.iter().enumerate() {
                    if c.dim() != n - 1
                        || !c.word.is_monotone()
                        || !c.word.is_epi()
                        || c.word.cod != c.base.dim
                        || c.base.dim > self.cap
                        || c.base.idx >= self.count(c.base.dim)
                    {
                        return Err(SsetError::Invalid(format!(
                            "face {i} of simplex {idx} in dim {n} is malformed"
                        )));
                    }
                }
            }
        }
        // simplicial identity d_i d_j = d_(j-1) d_i for i < j on every
        // nondegenerate simplex; words are correct by construction.
        for n in 2..=self.cap {
            for idx in 0..self.count(n) {
                let cell = Cell::nondeg(SimplexId { dim: n, idx });
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face_of_cell(&self.face_of_cell(&cell, j), i);
                        let rhs = self.face_of_cell(&self.face_of_cell(&cell, i), j - 1);
                        if lhs != rhs {
                            return Err(SsetError::Invalid(format!(
                                "simplicial identity d_{i} d_{j} fails on simplex {idx} in dim {n}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn label_of_subset(s: &[usize]) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Simplicial set whose nondegenerate simplices are an abstract simplicial
/// complex given as a downward-closed family of vertex subsets.
fn complex_from_subsets(n_vertices: usize, subsets: Vec<Vec<usize>>) -> FiniteSimplicialSet {
    let _ = n_vertices;
    let cap = subsets.iter().map(|s| s.len() - 1).max().unwrap_or(0);
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); cap + 1];
    for s in subsets {
        by_dim[s.len() - 1].push(s);
    }
    for level in by_dim.iter_mut() {
        level.sort();
        level.dedup();
    }
    let index: Vec<BTreeMap<Vec<usize>, usize>> = by_dim
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let labels = by_dim
        .iter()
        .map(|level| level.iter().map(|s| label_of_subset(s)).collect())
        .collect();
    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); cap + 1];
    for n in 1..=cap {
        for s in &by_dim[n] {
            let mut fs = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let mut sub = s.clone();
                sub.remove(i);
                let idx = *index[n - 1]
                    .get(&sub)
                    .expect("face of a stored subset must be stored");
                fs.push(Cell::nondeg(SimplexId { dim: n - 1, idx }));
            }
            faces[n].push(fs);
        }
    }
    FiniteSimplicialSet { cap, labels, faces }
}

/// The standard `n`-simplex together with the vertex subset of each
/// nondegenerate simplex.
pub fn standard_simplex_with_subsets(n: usize) -> (FiniteSimplicialSet, Vec<Vec<Vec<usize>>>) {
    let mut subsets = Vec::new();
    for mask in 1u64..(1 << (n + 1)) {
        let s: Vec<usize> = (0..=n).filter(|&v| mask & (1 << v) != 0).collect();
        subsets.push(s);
    }
    let sset = complex_from_subsets(n + 1, subsets);
    let table = (0..=sset.cap())
        .map(|d| {
            (0..sset.count(d))
                .map(|i| {
                    sset.labels[d][i]
                        .split(',')
                        .map(|v| v.parse().unwrap())
                        .collect()
                })
                .collect()
        })
        .collect();
    (sset, table)
}

pub fn standard_simplex(n: usize) -> FiniteSimplicialSet {
    standard_simplex_with_subsets(n).0
}

/// The horn with the top cell and the `i`-th facet removed.
pub fn horn(n: usize, i: usize) -> Result<FiniteSimplicialSet, SsetError> {
    if n == 0 || i > n {
        return Err(SsetError::IndexOutOfRange(format!("horn({n},{i})")));
    }
    let full: Vec<usize> = (0..=n).collect();
    let mut facet = full.clone();
    facet.remove(i);
    let mut subsets = Vec::new();
    for mask in 1u64..(1 << (n + 1)) {
        let s: Vec<usize> = (0..=n).filter(|&v| mask & (1 << v) != 0).collect();
        if s != full && s != facet {
            subsets.push(s);
        }
    }
    Ok(complex_from_subsets(n + 1, subsets))
}

/// Nerve of a finite poset: nondegenerate simplices are strict chains.
pub fn poset_nerve(labels: &[String], leq: impl Fn(usize, usize) -> bool) -> FiniteSimplicialSet {
    let n = labels.len();
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    while let Some(c) = stack.pop() {
        chains.push(c.clone());
        let last = *c.last().unwrap();
        for v in 0..n {
            if v != last && leq(last, v) && !leq(v, last) {
                let mut c2 = c.clone();
                c2.push(v);
                stack.push(c2);
            }
        }
    }
    nerve_from_chains(labels, chains)
}

fn nerve_from_chains(labels: &[String], chains: Vec<Vec<usize>>) -> FiniteSimplicialSet {
    let cap = chains.iter().map(|c| c.len() - 1).max().unwrap_or(0);
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); cap + 1];
    for c in chains {
        by_dim[c.len() - 1].push(c);
    }
    for level in by_dim.iter_mut() {
        level.sort();
        level.dedup();
    }
    let index: Vec<BTreeMap<Vec<usize>, usize>> = by_dim
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let cell_labels = by_dim
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|c| c.iter().map(|&v| labels[v].clone()).collect::<Vec<_>>().join("<"))
                .collect()
        })
        .collect();
    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); cap + 1];
    for d in 1..=cap {
        for c in &by_dim[d] {
            let mut fs = Vec::with_capacity(d + 1);
            for i in 0..=d {
                let mut sub = c.clone();
                sub.remove(i);
                let idx = index[d - 1]
                    .get(&sub)
                    .copied()
                    .expect("face chain of a stored chain is stored");
                fs.push(Cell::nondeg(SimplexId { dim: d - 1, idx }));
            }
            faces[d].push(fs);
        }
    }
    FiniteSimplicialSet { cap, labels: cell_labels, faces }
}

/// Nerve of the poset `P_{k,m}` of subsets of `[k..m]` containing both `k`
/// and `m`, the hom object of the coherent realization of the simplex.
pub fn coherent_hom(n: usize, k: usize, m: usize) -> Result<FiniteSimplicialSet, SsetError> {
    if !(k <= m && m <= n) {
        return Err(SsetError::IndexOutOfRange(format!("coherent_hom({n},{k},{m})")));
    }
    let (labels, elements) = coherent_poset_elements(k, m);
    let leq = |a: usize, b: usize| elements[a] & !elements[b] == 0;
    Ok(poset_nerve(&labels, leq))
}

fn coherent_poset_elements(k: usize, m: usize) -> (Vec<String>, Vec<u64>) {
    // subsets of {k..m} containing k and m, as bitmasks over k..=m
    let width = m - k + 1;
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for mask in 0u64..(1 << width) {
        let has_k = mask & 1 != 0;
        let has_m = mask & (1 << (width - 1)) != 0;
        let ok = if width == 1 { mask & 1 != 0 } else { has_k && has_m };
        if ok {
            elements.push(mask);
            let set: Vec<usize> = (0..width).filter(|b| mask & (1 << b) != 0).map(|b| k + b).collect();
            labels.push(label_of_subset(&set));
        }
    }
    (labels, elements)
}

/// Hom object `coherent_horn_hom(n, i)` of the realized horn: the cube
/// minus its interior cells and, for an inner `i`, minus the interior of
/// the facet of subsets avoiding `i`. A chain is removed exactly when its
/// bottom is `{0, n}` and its top is the full set or the full set minus `i`.
pub fn coherent_horn_hom(n: usize, i: usize) -> Result<FiniteSimplicialSet, SsetError> {
    if n == 0 || i > n {
        return Err(SsetError::IndexOutOfRange(format!("coherent_horn_hom({n},{i})")));
    }
    let (labels, elements) = coherent_poset_elements(0, n);
    let leq = |a: usize, b: usize| elements[a] & !elements[b] == 0;
    let bottom: u64 = 1 | (1 << n); // {0, n}
    let full: u64 = (1 << (n + 1)) - 1;
    let facet_top: Option<u64> = if i > 0 && i < n { Some(full & !(1 << i)) } else { None };
    // enumerate chains and filter
    let np = labels.len();
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..np).map(|v| vec![v]).collect();
    while let Some(c) = stack.pop() {
        chains.push(c.clone());
        let last = *c.last().unwrap();
        for v in 0..np {
            if v != last && leq(last, v) && !leq(v, last) {
                let mut c2 = c.clone();
                c2.push(v);
                stack.push(c2);
            }
        }
    }
    chains.retain(|c| {
        let bottom_el = elements[c[0]];
        let top_el = elements[*c.last().unwrap()];
        let removed =
            bottom_el == bottom && (top_el == full || Some(top_el) == facet_top);
        !removed
    });
    Ok(nerve_from_chains(&labels, chains))
}

/// Nerve of a finite category, capped: nondegenerate `n`-simplices are
/// composable tuples of non-identity morphisms.
pub fn nerve_of_category(cat: &FiniteCategory, cap: usize) -> FiniteSimplicialSet {
    let mut tuples: Vec<Vec<Vec<usize>>> = vec![Vec::new(); cap + 1];
    tuples[0] = (0..cat.objects.len()).map(|o| vec![o]).collect(); // vertex = [object]
    let nonid: Vec<usize> = (0..cat.morphisms.len())
        .filter(|m| !cat.identities.contains(m))
        .collect();
    for n in 1..=cap {
        let mut level = Vec::new();
        if n == 1 {
            for &m in &nonid {
                level.push(vec![m]);
            }
        } else {
            for prev in &tuples[n - 1] {
                let last_tgt = cat.morphisms[*prev.last().unwrap()].1;
                for &m in &nonid {
                    if cat.morphisms[m].0 == last_tgt {
                        let mut t = prev.clone();
                        t.push(m);
                        level.push(t);
                    }
                }
            }
        }
        level.sort();
        tuples[n] = level;
    }
    let index: Vec<BTreeMap<Vec<usize>, usize>> = tuples
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
        .collect();
    let labels: Vec<Vec<String>> = tuples
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .map(|t| {
                    if n == 0 {
                        cat.objects[t[0]].clone()
                    } else {
                        t.iter().map(|&m| cat.morphisms[m].2.clone()).collect::<Vec<_>>().join(";")
                    }
                })
                .collect()
        })
        .collect();

    // normal form of a possibly-identity-bearing tuple
    fn normalize(
        cat: &FiniteCategory,
        index: &[BTreeMap<Vec<usize>, usize>],
        start_obj: usize,
        tuple: &[usize],
    ) -> Cell {
        if let Some(pos) = tuple.iter().position(|m| cat.identities.contains(m)) {
            let mut reduced = tuple.to_vec();
            reduced.remove(pos);
            let inner = normalize(cat, index, start_obj, &reduced);
            let sigma = MonoMap::sigma(tuple.len() - 1, pos);
            return Cell { base: inner.base, word: inner.word.compose(&sigma) };
        }
        if tuple.is_empty() {
            let idx = index[0][&vec![start_obj]];
            return Cell::nondeg(SimplexId { dim: 0, idx });
        }
        let idx = index[tuple.len()][&tuple.to_vec()];
        Cell::nondeg(SimplexId { dim: tuple.len(), idx })
    }

    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); cap + 1];
    for n in 1..=cap {
        for t in &tuples[n] {
            let start_obj = cat.morphisms[t[0]].0;
            let mut fs = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let (raw, s_obj): (Vec<usize>, usize) = if i == 0 {
                    (t[1..].to_vec(), cat.morphisms[t[0]].1)
                } else if i == n {
                    (t[..n - 1].to_vec(), start_obj)
                } else {
                    let mut r = t.clone();
                    let c = cat.compose(t[i], t[i - 1]).expect("tuple is composable");
                    r[i - 1] = c;
                    r.remove(i);
                    (r, start_obj)
                };
                fs.push(normalize(cat, &index, s_obj, &raw));
            }
            faces[n].push(fs);
        }
    }
    FiniteSimplicialSet { cap, labels, faces }
}

/// Nerve of a presented category: materialize, then take the nerve.
pub fn nerve_of_presentation(
    p: &FiniteCategoryPresentation,
    cap: usize,
    word_bound: usize,
    budget: &Budget,
) -> Result<FiniteSimplicialSet, SsetError> {
    let cat = p.materialize(word_bound, budget)?;
    Ok(nerve_of_category(&cat, cap))
}

/// Generators-and-relations presentation of the homotopy category: vertices
/// as objects, nondegenerate edges as generators, one relation per
/// nondegenerate 2-simplex (degenerate edges read as identities).
pub fn homotopy_category(s: &FiniteSimplicialSet) -> FiniteCategoryPresentation {
    let objects: Vec<String> = (0..s.count(0)).map(|i| s.labels[0][i].clone()).collect();
    let edge_endpoints = |idx: usize| -> (usize, usize) {
        let src = s.face(SimplexId { dim: 1, idx }, 1).base.idx;
        let tgt = s.face(SimplexId { dim: 1, idx }, 0).base.idx;
        (src, tgt)
    };
    let generators: Vec<(usize, usize, String)> = (0..s.count(1))
        .map(|idx| {
            let (a, b) = edge_endpoints(idx);
            (a, b, s.labels[1][idx].clone())
        })
        .collect();
    let mut relations = Vec::new();
    if s.cap() >= 2 {
        // word of an edge cell: empty for a degenerate edge
        let word_of = |c: &Cell| -> Word {
            if c.base.dim == 0 {
                Word { start: c.base.idx, gens: vec![] }
            } else {
                let (a, _) = edge_endpoints(c.base.idx);
                Word { start: a, gens: vec![c.base.idx] }
            }
        };
        for idx in 0..s.count(2) {
            let id2 = SimplexId { dim: 2, idx };
            let f = word_of(s.face(id2, 2)); // 0 -> 1
            let g = word_of(s.face(id2, 0)); // 1 -> 2
            let h = word_of(s.face(id2, 1)); // 0 -> 2
            let mut lhs = f.clone();
            lhs.gens.extend(g.gens.iter().copied());
            relations.push((lhs, h));
        }
    }
    FiniteCategoryPresentation { objects, generators, relations }
}

/// Final object test: unique morphism from every object in the materialized
/// homotopy category.
pub fn is_final(
    s: &FiniteSimplicialSet,
    vertex: usize,
    word_bound: usize,
    budget: &Budget,
) -> Result<bool, SsetError> {
    let cat = homotopy_category(s).materialize(word_bound, budget)?;
    Ok((0..cat.objects.len()).all(|x| cat.hom_set(x, vertex).len() == 1))
}

/// A simplicial map, stored on nondegenerate simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub source: FiniteSimplicialSet,
    pub target: FiniteSimplicialSet,
    /// `assign[dim][idx]` is the image cell (same dimension).
    pub assign: Vec<Vec<Cell>>,
}

impl SimplicialMap {
    pub fn image_of_cell(&self, cell: &Cell) -> Cell {
        let img = &self.assign[cell.base.dim][cell.base.idx];
        self.target.apply_cell(img, &cell.word)
    }

    pub fn validate(&self) -> Result<(), SsetError> {
        for dim in 0..self.assign.len() {
            if self.assign[dim].len() != self.source.count(dim) {
                return Err(SsetError::Invalid(format!("assignment size mismatch in dim {dim}")));
            }
            for (idx, img) in self.assign[dim].iter().enumerate() {
                if img.dim() != dim {
                    return Err(SsetError::Invalid(format!(
                        "image of simplex {idx} in dim {dim} has wrong dimension"
                    )));
                }
                for i in 0..=dim {
                    if dim == 0 {
                        break;
                    }
                    let src_face = self.source.face(SimplexId { dim, idx }, i).clone();
                    let lhs = self.image_of_cell(&src_face);
                    let rhs = self.target.face_of_cell(img, i);
                    if lhs != rhs {
                        return Err(SsetError::Invalid(format!(
                            "map does not commute with d_{i} on simplex {idx} in dim {dim}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// All simplicial maps `source -> target` extending the `fixed` partial
/// assignment, deterministic backtracking in (dim, idx) order.
pub fn enumerate_maps(
    source: &FiniteSimplicialSet,
    target: &FiniteSimplicialSet,
    fixed: &BTreeMap<(usize, usize), Cell>,
    budget: &Budget,
) -> Result<Vec<SimplicialMap>, SsetError> {
    let mut order: Vec<(usize, usize)> = Vec::new();
    for dim in 0..=source.cap() {
        for idx in 0..source.count(dim) {
            order.push((dim, idx));
        }
    }
    let mut out = Vec::new();
    let mut assign: Vec<Vec<Option<Cell>>> =
        (0..=source.cap()).map(|d| vec![None; source.count(d)]).collect();
    // candidate cache per dimension
    let cells_by_dim: Vec<Vec<Cell>> = (0..=source.cap()).map(|d| target.all_cells(d)).collect();
    fn compatible(
        source: &FiniteSimplicialSet,
        target: &FiniteSimplicialSet,
        assign: &[Vec<Option<Cell>>],
        dim: usize,
        idx: usize,
        cand: &Cell,
    ) -> bool {
        if dim == 0 {
            return true;
        }
        for i in 0..=dim {
            let sf = source.face(SimplexId { dim, idx }, i);
            let img_base = assign[sf.base.dim][sf.base.idx]
                .as_ref()
                .expect("faces are assigned before cofaces");
            let expected = target.apply_cell(img_base, &sf.word);
            if target.face_of_cell(cand, i) != expected {
                return false;
            }
        }
        true
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        source: &FiniteSimplicialSet,
        target: &FiniteSimplicialSet,
        order: &[(usize, usize)],
        cells_by_dim: &[Vec<Cell>],
        fixed: &BTreeMap<(usize, usize), Cell>,
        assign: &mut Vec<Vec<Option<Cell>>>,
        pos: usize,
        budget: &Budget,
        out: &mut Vec<SimplicialMap>,
    ) -> Result<(), SsetError> {
        if pos == order.len() {
            let full: Vec<Vec<Cell>> = assign
                .iter()
                .map(|row| row.iter().map(|c| c.clone().unwrap()).collect())
                .collect();
            out.push(SimplicialMap {
                source: source.clone(),
                target: target.clone(),
                assign: full,
            });
            return Ok(());
        }
        let (dim, idx) = order[pos];
        let candidates: Vec<Cell> = match fixed.get(&(dim, idx)) {
            Some(c) => vec![c.clone()],
            None => cells_by_dim[dim].clone(),
        };
        for cand in candidates {
            budget.charge(1)?;
            if !compatible(source, target, assign, dim, idx, &cand) {
                continue;
            }
            assign[dim][idx] = Some(cand);
            rec(source, target, order, cells_by_dim, fixed, assign, pos + 1, budget, out)?;
            assign[dim][idx] = None;
        }
        Ok(())
    }
    rec(source, target, &order, &cells_by_dim, fixed, &mut assign, 0, budget, &mut out)?;
    Ok(out)
}

/// Outcome of a quasi-category check: `None` means every inner horn fills.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornWitness {
    pub n: usize,
    pub i: usize,
    pub description: String,
}

fn horn_fillers(
    s: &FiniteSimplicialSet,
    n: usize,
    horn_map: &SimplicialMap,
    horn_subsets: &BTreeMap<Vec<usize>, (usize, usize)>,
    budget: &Budget,
) -> Result<usize, SsetError> {
    // facet images demanded of a filler
    let mut expect: Vec<Option<Cell>> = vec![None; n + 1];
    for (subset, &(dim, idx)) in horn_subsets {
        if subset.len() == n {
            let missing = (0..=n).find(|v| !subset.contains(v)).unwrap();
            expect[missing] = Some(horn_map.assign[dim][idx].clone());
        }
    }
    let mut count = 0;
    for cand in s.all_cells(n) {
        budget.charge(1)?;
        let mut good = true;
        for (j, e) in expect.iter().enumerate() {
            if let Some(e) = e {
                if &s.face_of_cell(&cand, j) != e {
                    good = false;
                    break;
                }
            }
        }
        if good {
            count += 1;
        }
    }
    Ok(count)
}

/// Exhaustive inner-horn check for `2 <= m <= up_to`; reports the first
/// unfillable horn.
pub fn is_quasicategory(
    s: &FiniteSimplicialSet,
    up_to: usize,
    budget: &Budget,
) -> Result<Option<HornWitness>, SsetError> {
    check_horns(s, up_to, false, false, budget).map(|r| r.0)
}

/// Kan check: every horn, inner and outer, fills.
pub fn fills_all_horns(
    s: &FiniteSimplicialSet,
    up_to: usize,
    budget: &Budget,
) -> Result<Option<HornWitness>, SsetError> {
    check_horns(s, up_to, true, false, budget).map(|r| r.0)
}

/// Inner-horn check that also demands unique fillers.
pub fn inner_horns_fill_uniquely(
    s: &FiniteSimplicialSet,
    up_to: usize,
    budget: &Budget,
) -> Result<Option<HornWitness>, SsetError> {
    check_horns(s, up_to, false, true, budget).map(|r| r.0)
}

fn check_horns(
    s: &FiniteSimplicialSet,
    up_to: usize,
    include_outer: bool,
    require_unique: bool,
    budget: &Budget,
) -> Result<(Option<HornWitness>, usize), SsetError> {
    let mut checked = 0;
    for n in 2..=up_to {
        let range: Vec<usize> = if include_outer {
            (0..=n).collect()
        } else {
            (1..n).collect()
        };
        for i in range {
            let (h, subsets) = horn_with_subsets(n, i)?;
            let horn_maps = enumerate_maps(&h, s, &BTreeMap::new(), budget)?;
            for hm in &horn_maps {
                checked += 1;
                let fillers = horn_fillers(s, n, hm, &subsets, budget)?;
                let bad = fillers == 0 || (require_unique && fillers != 1);
                if bad {
                    let verts: Vec<String> = (0..h.count(0))
                        .map(|v| {
                            let img = &hm.assign[0][v];
                            s.label(img.base).to_string()
                        })
                        .collect();
                    return Ok((
                        Some(HornWitness {
                            n,
                            i,
                            description: format!(
                                "horn on vertices [{}] has {fillers} filler(s)",
                                verts.join(", ")
                            ),
                        }),
                        checked,
                    ));
                }
            }
        }
    }
    Ok((None, checked))
}

fn horn_with_subsets(
    n: usize,
    i: usize,
) -> Result<(FiniteSimplicialSet, BTreeMap<Vec<usize>, (usize, usize)>), SsetError> {
    let h = horn(n, i)?;
    let mut subsets = BTreeMap::new();
    for dim in 0..=h.cap() {
        for idx in 0..h.count(dim) {
            let s: Vec<usize> = h.labels[dim][idx].split(',').map(|v| v.parse().unwrap()).collect();
            subsets.insert(s, (dim, idx));
        }
    }
    Ok((h, subsets))
}

/// Join of two finite simplicial sets, with index tables for both factors
/// and for the mixed simplices.
pub struct JoinData {
    pub sset: FiniteSimplicialSet,
    pub left_index: Vec<Vec<usize>>,
    pub right_index: Vec<Vec<usize>>,
    pub pair_index: BTreeMap<(usize, usize, usize, usize), usize>,
}

pub fn join_data(s: &FiniteSimplicialSet, t: &FiniteSimplicialSet) -> JoinData {
    let s_empty = s.total_cells() == 0;
    let t_empty = t.total_cells() == 0;
    let cap = if s_empty {
        t.cap()
    } else if t_empty {
        s.cap()
    } else {
        s.cap() + t.cap() + 1
    };
    let mut labels: Vec<Vec<String>> = vec![Vec::new(); cap + 1];
    let mut left_index: Vec<Vec<usize>> = vec![Vec::new(); s.cap() + 1];
    let mut right_index: Vec<Vec<usize>> = vec![Vec::new(); t.cap() + 1];
    let mut pair_index = BTreeMap::new();
    for n in 0..=cap {
        if n <= s.cap() {
            for idx in 0..s.count(n) {
                left_index[n].push(labels[n].len());
                labels[n].push(s.labels[n][idx].clone());
            }
        }
        if n <= t.cap() {
            for idx in 0..t.count(n) {
                right_index[n].push(labels[n].len());
                labels[n].push(t.labels[n][idx].clone());
            }
        }
        if n >= 1 {
            for a in 0..n.min(s.cap() + 1) {
                let b = n - 1 - a;
                if b > t.cap() {
                    continue;
                }
                for si in 0..s.count(a) {
                    for ti in 0..t.count(b) {
                        pair_index.insert((a, si, b, ti), labels[n].len());
                        labels[n].push(format!("{}*{}", s.labels[a][si], t.labels[b][ti]));
                    }
                }
            }
        }
    }
    // face tables
    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); cap + 1];
    let lift_left = |c: &Cell| -> Cell {
        Cell { base: SimplexId { dim: c.base.dim, idx: left_index[c.base.dim][c.base.idx] }, word: c.word.clone() }
    };
    let lift_right = |c: &Cell| -> Cell {
        Cell { base: SimplexId { dim: c.base.dim, idx: right_index[c.base.dim][c.base.idx] }, word: c.word.clone() }
    };
    // join of a left cell with a nondegenerate right simplex
    let lift_pair_left = |c: &Cell, b: usize, ti: usize| -> Cell {
        let k = c.base.dim;
        let join_base = SimplexId {
            dim: k + b + 1,
            idx: pair_index[&(k, c.base.idx, b, ti)],
        };
        // word (x) id: epi [c.dim + b + 1] -> [k + b + 1]
        let mut vals = c.word.vals.clone();
        for j in 0..=b {
            vals.push(k + 1 + j);
        }
        Cell { base: join_base, word: MonoMap { cod: k + b + 1, vals } }
    };
    let lift_pair_right = |a: usize, si: usize, c: &Cell| -> Cell {
        let k = c.base.dim;
        let join_base = SimplexId { dim: a + k + 1, idx: pair_index[&(a, si, k, c.base.idx)] };
        let mut vals: Vec<usize> = (0..=a).collect();
        for &v in &c.word.vals {
            vals.push(a + 1 + v);
        }
        Cell { base: join_base, word: MonoMap { cod: a + k + 1, vals } }
    };
    for n in 1..=cap {
        let mut level: Vec<Vec<Cell>> = Vec::new();
        if n <= s.cap() {
            for idx in 0..s.count(n) {
                let fs = (0..=n).map(|i| lift_left(s.face(SimplexId { dim: n, idx }, i))).collect();
                level.push(fs);
            }
        }
        if n <= t.cap() {
            for idx in 0..t.count(n) {
                let fs = (0..=n).map(|i| lift_right(t.face(SimplexId { dim: n, idx }, i))).collect();
                level.push(fs);
            }
        }
        for a in 0..n.min(s.cap() + 1) {
            let b = n - 1 - a;
            if b > t.cap() {
                continue;
            }
            for si in 0..s.count(a) {
                for ti in 0..t.count(b) {
                    let mut fs = Vec::with_capacity(n + 1);
                    for l in 0..=n {
                        if l <= a {
                            if a == 0 {
                                fs.push(lift_right(&Cell::nondeg(SimplexId { dim: b, idx: ti })));
                            } else {
                                let c = s.face(SimplexId { dim: a, idx: si }, l);
                                fs.push(lift_pair_left(c, b, ti));
                            }
                        } else {
                            let lp = l - a - 1;
                            if b == 0 {
                                fs.push(lift_left(&Cell::nondeg(SimplexId { dim: a, idx: si })));
                            } else {
                                let c = t.face(SimplexId { dim: b, idx: ti }, lp);
                                fs.push(lift_pair_right(a, si, c));
                            }
                        }
                    }
                    level.push(fs);
                }
            }
        }
        faces[n] = level;
    }
    JoinData { sset: FiniteSimplicialSet { cap, labels, faces }, left_index, right_index, pair_index }
}

pub fn join(s: &FiniteSimplicialSet, t: &FiniteSimplicialSet) -> FiniteSimplicialSet {
    join_data(s, t).sset
}

impl SimplicialMap {
    /// `self . inner` as assignments.
    pub fn compose_with(&self, inner: &SimplicialMap) -> SimplicialMap {
        let assign = inner
            .assign
            .iter()
            .map(|row| row.iter().map(|c| self.image_of_cell(c)).collect())
            .collect();
        SimplicialMap { source: inner.source.clone(), target: self.target.clone(), assign }
    }
}

/// The map `join(Delta^m, C) -> join(Delta^n, C)` induced by `phi` on the
/// simplex factor (`right = false`) or `join(C, Delta^m) -> join(C, Delta^n)`
/// (`right = true`).
fn join_operator_map(
    phi: &MonoMap,
    c: &FiniteSimplicialSet,
    right: bool,
) -> SimplicialMap {
    let m = phi.dom();
    let n = phi.cod;
    let (dm, subs_m) = standard_simplex_with_subsets(m);
    let (dn, subs_n) = standard_simplex_with_subsets(n);
    let jm = if right { join_data(c, &dm) } else { join_data(&dm, c) };
    let jn = if right { join_data(c, &dn) } else { join_data(&dn, c) };
    // subset -> index lookup for the target simplex
    let mut subset_idx: BTreeMap<Vec<usize>, SimplexId> = BTreeMap::new();
    for dim in 0..subs_n.len() {
        for (idx, s) in subs_n[dim].iter().enumerate() {
            subset_idx.insert(s.clone(), SimplexId { dim, idx });
        }
    }
    // image of a nondegenerate simplex of Delta^m as a cell of Delta^n
    let delta_image = |dim: usize, idx: usize| -> Cell {
        let u = &subs_m[dim][idx];
        let g = MonoMap { cod: n, vals: u.iter().map(|&v| phi.vals[v]).collect() };
        let (epi, mono) = g.factor();
        let base = subset_idx[&mono.vals];
        Cell { base, word: epi }
    };
    let (delta_side_m, c_side_m): (&Vec<Vec<usize>>, &Vec<Vec<usize>>) = if right {
        (&jm.right_index, &jm.left_index)
    } else {
        (&jm.left_index, &jm.right_index)
    };
    let (delta_side_n, c_side_n) = if right {
        (&jn.right_index, &jn.left_index)
    } else {
        (&jn.left_index, &jn.right_index)
    };
    let mut assign: Vec<Vec<Cell>> =
        (0..=jm.sset.cap()).map(|d| vec![Cell::nondeg(SimplexId { dim: 0, idx: 0 }); jm.sset.count(d)]).collect();
    // simplex-factor simplices
    for dim in 0..delta_side_m.len() {
        for (idx, &jidx) in delta_side_m[dim].iter().enumerate() {
            let img = delta_image(dim, idx);
            let lifted = Cell {
                base: SimplexId {
                    dim: img.base.dim,
                    idx: delta_side_n[img.base.dim][img.base.idx],
                },
                word: img.word,
            };
            assign[dim][jidx] = lifted;
        }
    }
    // C-factor simplices map identically
    for dim in 0..c_side_m.len() {
        for (idx, &jidx) in c_side_m[dim].iter().enumerate() {
            assign[dim][jidx] = Cell::nondeg(SimplexId { dim, idx: c_side_n[dim][idx] });
        }
    }
    // mixed simplices
    for (&(a, si, b, ti), &jidx) in &jm.pair_index {
        let dim = a + b + 1;
        let (d_dim, d_idx, c_dim, c_idx) = if right { (b, ti, a, si) } else { (a, si, b, ti) };
        let img = delta_image(d_dim, d_idx);
        let k = img.base.dim;
        let cell = if right {
            // pair is (C part, simplex part): word acts on the simplex block
            let base = SimplexId {
                dim: c_dim + k + 1,
                idx: jn.pair_index[&(c_dim, c_idx, k, img.base.idx)],
            };
            let mut vals: Vec<usize> = (0..=c_dim).collect();
            for &v in &img.word.vals {
                vals.push(c_dim + 1 + v);
            }
            Cell { base, word: MonoMap { cod: c_dim + k + 1, vals } }
        } else {
            let base = SimplexId {
                dim: k + c_dim + 1,
                idx: jn.pair_index[&(k, img.base.idx, c_dim, c_idx)],
            };
            let mut vals = img.word.vals.clone();
            for j in 0..=c_dim {
                vals.push(k + 1 + j);
            }
            Cell { base, word: MonoMap { cod: k + c_dim + 1, vals } }
        };
        assign[dim][jidx] = cell;
    }
    SimplicialMap { source: jm.sset, target: jn.sset, assign }
}

/// Over- or under-category of a map `p: C -> D`, with its defining
/// simplex maps retained so vertices can be identified with cone data.
pub struct SliceCategory {
    pub sset: FiniteSimplicialSet,
    /// `simplices[n][idx]` is the defining map `join -> D` of the
    /// nondegenerate `n`-simplex `idx`.
    pub simplices: Vec<Vec<SimplicialMap>>,
}

/// The over-category: `n`-simplices are maps `Delta^n * C -> D` restricting
/// to `p` on `C`. `under = true` builds the dual `C * Delta^n` version.
pub fn slice_category(
    p: &SimplicialMap,
    max_dim: usize,
    under: bool,
    budget: &Budget,
) -> Result<SliceCategory, SsetError> {
    let c = &p.source;
    let d = &p.target;
    // all n-simplices (maps), per dimension
    let mut all: Vec<Vec<SimplicialMap>> = Vec::new();
    for n in 0..=max_dim {
        let dn = standard_simplex(n);
        let jd = if under { join_data(c, &dn) } else { join_data(&dn, c) };
        let c_side = if under { &jd.left_index } else { &jd.right_index };
        let mut fixed: BTreeMap<(usize, usize), Cell> = BTreeMap::new();
        for dim in 0..c_side.len() {
            for (idx, &jidx) in c_side[dim].iter().enumerate() {
                fixed.insert((dim, jidx), p.assign[dim][idx].clone());
            }
        }
        all.push(enumerate_maps(&jd.sset, d, &fixed, budget)?);
    }
    // operator maps between join levels
    let face_op = |m: usize, i: usize| join_operator_map(&MonoMap::delta(m, i), c, under);
    let degen_op = |m: usize, j: usize| join_operator_map(&MonoMap::sigma(m, j), c, under);
    let face_of = |x: &SimplicialMap, m: usize, i: usize| -> SimplicialMap {
        x.compose_with(&face_op(m, i))
    };
    let degen_of = |x: &SimplicialMap, m: usize, j: usize| -> SimplicialMap {
        x.compose_with(&degen_op(m, j))
    };
    // nondegenerate classification
    let is_degenerate = |x: &SimplicialMap, m: usize| -> Option<usize> {
        if m == 0 {
            return None;
        }
        (0..m).find(|&j| degen_of(&face_of(x, m, j), m - 1, j).assign == x.assign)
    };
    let mut nondeg: Vec<Vec<SimplicialMap>> = Vec::new();
    for (m, level) in all.iter().enumerate() {
        nondeg.push(
            level
                .iter()
                .filter(|x| is_degenerate(x, m).is_none())
                .cloned()
                .collect(),
        );
    }
    // normal form of an arbitrary simplex map
    fn normalize(
        nondeg: &[Vec<SimplicialMap>],
        face_of: &dyn Fn(&SimplicialMap, usize, usize) -> SimplicialMap,
        degen_of: &dyn Fn(&SimplicialMap, usize, usize) -> SimplicialMap,
        x: &SimplicialMap,
        m: usize,
    ) -> Cell {
        if m > 0 {
            for j in 0..m {
                let y = face_of(x, m, j);
                if degen_of(&y, m - 1, j).assign == x.assign {
                    let inner = normalize(nondeg, face_of, degen_of, &y, m - 1);
                    let sigma = MonoMap::sigma(m - 1, j);
                    return Cell { base: inner.base, word: inner.word.compose(&sigma) };
                }
            }
        }
        let idx = nondeg[m]
            .iter()
            .position(|y| y.assign == x.assign)
            .expect("enumeration is exhaustive");
        Cell::nondeg(SimplexId { dim: m, idx })
    }
    let labels: Vec<Vec<String>> = nondeg
        .iter()
        .enumerate()
        .map(|(m, level)| {
            (0..level.len())
                .map(|idx| {
                    if m == 0 {
                        // tip vertex image in D makes cone vertices readable
                        let jd = if under {
                            join_data(c, &standard_simplex(0))
                        } else {
                            join_data(&standard_simplex(0), c)
                        };
                        let tip = if under { jd.right_index[0][0] } else { jd.left_index[0][0] };
                        let img = &level[idx].assign[0][tip];
                        format!("{}#{}", d.label(img.base), idx)
                    } else {
                        format!("s{m}#{idx}")
                    }
                })
                .collect()
        })
        .collect();
    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); max_dim + 1];
    for m in 1..=max_dim {
        for x in &nondeg[m] {
            let fs = (0..=m)
                .map(|i| normalize(&nondeg, &face_of, &degen_of, &face_of(x, m, i), m - 1))
                .collect();
            faces[m].push(fs);
        }
    }
    let sset = FiniteSimplicialSet { cap: max_dim, labels, faces };
    Ok(SliceCategory { sset, simplices: nondeg })
}

pub fn over_category(
    p: &SimplicialMap,
    max_dim: usize,
    budget: &Budget,
) -> Result<SliceCategory, SsetError> {
    slice_category(p, max_dim, false, budget)
}

pub fn under_category(
    p: &SimplicialMap,
    max_dim: usize,
    budget: &Budget,
) -> Result<SliceCategory, SsetError> {
    slice_category(p, max_dim, true, budget)
}

/// A candidate limit cone is a vertex of the over-category that is final
/// in its homotopy category.
pub fn homotopy_limit_check(
    p: &SimplicialMap,
    candidate: &SimplicialMap,
    word_bound: usize,
    budget: &Budget,
) -> Result<bool, SsetError> {
    let oc = over_category(p, 2, budget)?;
    let v = oc.simplices[0]
        .iter()
        .position(|x| x.assign == candidate.assign)
        .ok_or(SsetError::NotAVertex)?;
    is_final(&oc.sset, v, word_bound, budget)
}

/// Exhaustive simplicial-set isomorphism search: per-dimension bijections of
/// nondegenerate simplices commuting with all face maps.
pub fn find_sset_isomorphism(
    a: &FiniteSimplicialSet,
    b: &FiniteSimplicialSet,
    budget: &Budget,
) -> Result<Option<Vec<Vec<usize>>>, SsetError> {
    if a.f_vector() != b.f_vector() {
        return Ok(None);
    }
    let cap = a.cap();
    let mut assign: Vec<Vec<Option<usize>>> = (0..=cap).map(|d| vec![None; a.count(d)]).collect();
    let mut used: Vec<Vec<bool>> = (0..=cap).map(|d| vec![false; b.count(d)]).collect();
    let order: Vec<(usize, usize)> = (0..=cap)
        .flat_map(|d| (0..a.count(d)).map(move |i| (d, i)))
        .collect();
    fn rec(
        a: &FiniteSimplicialSet,
        b: &FiniteSimplicialSet,
        order: &[(usize, usize)],
        pos: usize,
        assign: &mut Vec<Vec<Option<usize>>>,
        used: &mut Vec<Vec<bool>>,
        budget: &Budget,
    ) -> Result<bool, SsetError> {
        if pos == order.len() {
            return Ok(true);
        }
        let (dim, idx) = order[pos];
        'cand: for cand in 0..b.count(dim) {
            if used[dim][cand] {
                continue;
            }
            budget.charge(1)?;
            if dim > 0 {
                for i in 0..=dim {
                    let af = a.face(SimplexId { dim, idx }, i);
                    let mapped_base = assign[af.base.dim][af.base.idx]
                        .expect("faces assigned before cofaces");
                    let expected = Cell {
                        base: SimplexId { dim: af.base.dim, idx: mapped_base },
                        word: af.word.clone(),
                    };
                    if b.face(SimplexId { dim, idx: cand }, i) != &expected {
                        continue 'cand;
                    }
                }
            }
            assign[dim][idx] = Some(cand);
            used[dim][cand] = true;
            if rec(a, b, order, pos + 1, assign, used, budget)? {
                return Ok(true);
            }
            assign[dim][idx] = None;
            used[dim][cand] = false;
        }
        Ok(false)
    }
    if rec(a, b, &order, 0, &mut assign, &mut used, budget)? {
        Ok(Some(
            assign
                .into_iter()
                .map(|row| row.into_iter().map(|x| x.unwrap()).collect())
                .collect(),
        ))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_simplex_counts() {
        let d2 = standard_simplex(2);
        assert_eq!(d2.f_vector(), vec![3, 3, 1]);
        assert!(d2.validate().is_ok());
        let d3 = standard_simplex(3);
        assert_eq!(d3.f_vector(), vec![4, 6, 4, 1]);
        assert!(d3.validate().is_ok());
    }

    #[test]
    fn horn_counts() {
        let h = horn(2, 1).unwrap();
        assert_eq!(h.f_vector(), vec![3, 2]);
        assert!(h.validate().is_ok());
        // counts for the (3,1) horn by direct subset enumeration
        let h31 = horn(3, 1).unwrap();
        assert_eq!(h31.f_vector(), vec![4, 6, 3]);
    }

    #[test]
    fn degenerate_cells_enumerate() {
        let d1 = standard_simplex(1);
        // 2-cells of Delta^1: no nondegenerate, s-words over the edge and vertices
        let cells = d1.all_cells(2);
        // edge with epis [2]->[1] (2 of them) + 2 vertices with the unique epi [2]->[0]
        assert_eq!(cells.len(), 2 + 2);
    }

    #[test]
    fn apply_cell_satisfies_identities_on_nerve() {
        let cat = FiniteCategory::from_poset(
            vec!["a".into(), "b".into(), "c".into()],
            |a, b| a <= b,
        );
        let n = nerve_of_category(&cat, 3);
        assert!(n.validate().is_ok());
        // s_j d_j then compare a few mixed identities on degenerate cells
        for cell in n.all_cells(2) {
            for j in 0..2 {
                let d = n.face_of_cell(&cell, j);
                let s = n.degeneracy_of_cell(&d, j);
                let _ = s; // no panic = words compose correctly
            }
        }
    }

    #[test]
    fn nerve_of_arrow_is_delta1() {
        let cat = FiniteCategory::from_poset(vec!["0".into(), "1".into()], |a, b| a <= b);
        let n = nerve_of_category(&cat, 2);
        assert_eq!(n.count(0), 2);
        assert_eq!(n.count(1), 1);
        assert_eq!(n.count(2), 0);
    }

    #[test]
    fn nerve_of_boolean_poset_on_two_elements() {
        // subsets of {1,2}: 4 vertices, 5 edges, 2 triangles
        let labels: Vec<String> = vec!["e".into(), "1".into(), "2".into(), "12".into()];
        let masks = [0b00u8, 0b01, 0b10, 0b11];
        let n = poset_nerve(&labels, |a, b| masks[a] & !masks[b] == 0);
        assert_eq!(n.f_vector(), vec![4, 5, 2]);
        assert!(n.validate().is_ok());
    }

    #[test]
    fn nerve_is_quasicategory_with_unique_inner_fillers() {
        let cat = FiniteCategory::from_poset(
            vec!["x".into(), "y".into(), "z".into()],
            |a, b| a <= b,
        );
        let n = nerve_of_category(&cat, 3);
        let budget = Budget::new(2_000_000);
        assert!(is_quasicategory(&n, 3, &budget).unwrap().is_none());
        assert!(inner_horns_fill_uniquely(&n, 3, &budget).unwrap().is_none());
    }

    #[test]
    fn horn_itself_is_not_a_quasicategory() {
        let h = horn(2, 1).unwrap();
        let budget = Budget::new(1_000_000);
        let w = is_quasicategory(&h, 2, &budget).unwrap();
        assert!(w.is_some());
        let w = w.unwrap();
        assert_eq!((w.n, w.i), (2, 1));
    }

    #[test]
    fn join_of_points_is_edge() {
        let pt = standard_simplex(0);
        let j = join(&pt, &pt);
        assert_eq!(j.f_vector(), vec![2, 1]);
        assert!(j.validate().is_ok());
    }

    #[test]
    fn join_of_simplices_has_simplex_counts() {
        for m in 0..=2usize {
            for n in 0..=2usize {
                let j = join(&standard_simplex(m), &standard_simplex(n));
                let d = standard_simplex(m + n + 1);
                assert_eq!(j.f_vector(), d.f_vector(), "join {m} * {n}");
                assert!(j.validate().is_ok());
            }
        }
    }

    #[test]
    fn join_is_associative_on_counts() {
        let a = standard_simplex(1);
        let b = horn(2, 1).unwrap();
        let c = standard_simplex(0);
        let left = join(&join(&a, &b), &c);
        let right = join(&a, &join(&b, &c));
        assert_eq!(left.f_vector(), right.f_vector());
        assert!(left.validate().is_ok());
        assert!(right.validate().is_ok());
    }

    #[test]
    fn horn_join_point_counts() {
        let h = horn(2, 1).unwrap();
        let pt = standard_simplex(0);
        let j = join(&h, &pt);
        // dims: 0: 3+1, 1: 2 + 3*1, 2: 0 + 2*1
        assert_eq!(j.f_vector(), vec![4, 5, 2]);
    }

    #[test]
    fn coherent_hom_small_cases() {
        // P_{0,2} has two elements, nerve is Delta^1
        let c = coherent_hom(2, 0, 2).unwrap();
        assert_eq!(c.f_vector(), vec![2, 1]);
        // P_{0,3} is the square
        let c = coherent_hom(3, 0, 3).unwrap();
        assert_eq!(c.f_vector(), vec![4, 5, 2]);
        // hom(k,k) is a point
        let c = coherent_hom(2, 1, 1).unwrap();
        assert_eq!(c.f_vector(), vec![1]);
    }

    #[test]
    fn coherent_horn_hom_n2() {
        // the single composite route: one vertex
        let c = coherent_horn_hom(2, 1).unwrap();
        assert_eq!(c.total_cells(), 1);
        assert_eq!(c.count(0), 1);
        // the surviving vertex is the full subset {0,1,2}
        assert_eq!(c.labels[0][0], "0,1,2");
    }

    #[test]
    fn coherent_horn_hom_n3_counts() {
        let c = coherent_horn_hom(3, 1).unwrap();
        // removed: interior (3 cells) + facet interior (1 cell) from 11
        assert_eq!(c.total_cells(), 7);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn homotopy_category_of_nerve_recovers_poset() {
        let cat = FiniteCategory::from_poset(
            vec!["x".into(), "y".into(), "z".into()],
            |a, b| a <= b,
        );
        let n = nerve_of_category(&cat, 2);
        let p = homotopy_category(&n);
        let budget = Budget::new(5_000_000);
        let rec = p.materialize(6, &budget).unwrap();
        let iso = crate::cat::find_isomorphism(&cat, &rec, &budget).unwrap();
        assert!(iso.is_some());
    }

    fn map_to_vertex(c: &FiniteSimplicialSet, d: &FiniteSimplicialSet, v: usize) -> SimplicialMap {
        // constant map onto vertex v; c must be 0-dimensional here
        let assign = (0..=c.cap())
            .map(|dim| {
                (0..c.count(dim))
                    .map(|_| {
                        assert_eq!(dim, 0);
                        Cell::nondeg(SimplexId { dim: 0, idx: v })
                    })
                    .collect()
            })
            .collect();
        SimplicialMap { source: c.clone(), target: d.clone(), assign }
    }

    #[test]
    fn over_category_with_empty_diagram_recovers_target() {
        let d = standard_simplex(1);
        let c = FiniteSimplicialSet::empty();
        let p = SimplicialMap { source: c, target: d.clone(), assign: vec![vec![]] };
        let budget = Budget::new(5_000_000);
        let oc = over_category(&p, 1, &budget).unwrap();
        assert_eq!(oc.sset.count(0), d.count(0));
        assert_eq!(oc.sset.count(1), d.count(1));
    }

    #[test]
    fn over_category_of_vertex_in_edge() {
        // D = Delta^1, C = point mapped to vertex 1: objects are id_1 and 0->1
        let d = standard_simplex(1);
        let c = standard_simplex(0);
        let p = map_to_vertex(&c, &d, 1);
        let budget = Budget::new(5_000_000);
        let oc = over_category(&p, 2, &budget).unwrap();
        assert_eq!(oc.sset.count(0), 2);
        assert_eq!(oc.sset.count(1), 1);
        assert_eq!(oc.sset.count(2), 0);
        // the over-category is an edge: its top vertex is final
        let iso = find_sset_isomorphism(
            &oc.sset,
            &{
                let mut d1 = standard_simplex(1);
                d1 = FiniteSimplicialSet::new(
                    2,
                    vec![d1.labels[0].clone(), d1.labels[1].clone(), vec![]],
                    vec![vec![], d1.faces[1].clone(), vec![]],
                );
                d1
            },
            &budget,
        )
        .unwrap();
        assert!(iso.is_some());
    }

    #[test]
    fn product_vertex_passes_homotopy_limit_check() {
        // poset {bot, x, a, b} with bot <= x <= a, x <= b: x is the product of a and b
        let labels: Vec<String> = vec!["bot".into(), "x".into(), "a".into(), "b".into()];
        let leq = |p: usize, q: usize| {
            p == q || p == 0 || (p == 1 && (q == 2 || q == 3))
        };
        let d = poset_nerve(&labels, leq);
        // C = two discrete points mapped to a and b
        let c = FiniteSimplicialSet::new(
            0,
            vec![vec!["p".into(), "q".into()]],
            vec![vec![]],
        );
        let p_map = SimplicialMap {
            source: c.clone(),
            target: d.clone(),
            assign: vec![vec![
                Cell::nondeg(SimplexId { dim: 0, idx: 2 }),
                Cell::nondeg(SimplexId { dim: 0, idx: 3 }),
            ]],
        };
        let budget = Budget::new(20_000_000);
        let oc = over_category(&p_map, 2, &budget).unwrap();
        // cone candidates: bot and x
        assert_eq!(oc.sset.count(0), 2);
        let cone_x = {
            let j = join_data(&standard_simplex(0), &c);
            let tip = j.left_index[0][0];
            let mut assign: Vec<Vec<Cell>> =
                (0..=j.sset.cap()).map(|d2| vec![Cell::nondeg(SimplexId { dim: 0, idx: 0 }); j.sset.count(d2)]).collect();
            assign[0][tip] = Cell::nondeg(SimplexId { dim: 0, idx: 1 }); // x
            assign[0][j.right_index[0][0]] = Cell::nondeg(SimplexId { dim: 0, idx: 2 }); // a
            assign[0][j.right_index[0][1]] = Cell::nondeg(SimplexId { dim: 0, idx: 3 }); // b
            // edges tip*p -> x<=a, tip*q -> x<=b
            let e_xa = (0..d.count(1))
                .find(|&e| d.label(SimplexId { dim: 1, idx: e }) == "x<a")
                .unwrap();
            let e_xb = (0..d.count(1))
                .find(|&e| d.label(SimplexId { dim: 1, idx: e }) == "x<b")
                .unwrap();
            assign[1][j.pair_index[&(0, 0, 0, 0)]] = Cell::nondeg(SimplexId { dim: 1, idx: e_xa });
            assign[1][j.pair_index[&(0, 0, 0, 1)]] = Cell::nondeg(SimplexId { dim: 1, idx: e_xb });
            SimplicialMap { source: j.sset, target: d.clone(), assign }
        };
        assert!(cone_x.validate().is_ok());
        assert!(homotopy_limit_check(&p_map, &cone_x, 8, &budget).unwrap());
        // bot is a cone but not the limit
        let cone_bot = {
            let mut m = cone_x.clone();
            let j = join_data(&standard_simplex(0), &c);
            let tip = j.left_index[0][0];
            m.assign[0][tip] = Cell::nondeg(SimplexId { dim: 0, idx: 0 });
            let e_ba = (0..d.count(1))
                .find(|&e| d.label(SimplexId { dim: 1, idx: e }) == "bot<a")
                .unwrap();
            let e_bb = (0..d.count(1))
                .find(|&e| d.label(SimplexId { dim: 1, idx: e }) == "bot<b")
                .unwrap();
            m.assign[1][j.pair_index[&(0, 0, 0, 0)]] = Cell::nondeg(SimplexId { dim: 1, idx: e_ba });
            m.assign[1][j.pair_index[&(0, 0, 0, 1)]] = Cell::nondeg(SimplexId { dim: 1, idx: e_bb });
            m
        };
        assert!(cone_bot.validate().is_ok());
        assert!(!homotopy_limit_check(&p_map, &cone_bot, 8, &budget).unwrap());
    }

    #[test]
    fn coherent_hom_is_boolean_cube_nerve() {
        for n in 2..=4usize {
            let c = coherent_hom(n, 0, n).unwrap();
            let m = n - 1;
            let labels: Vec<String> = (0..1u64 << m).map(|k| format!("m{k}")).collect();
            let cube = poset_nerve(&labels, |a, b| (a as u64) & !(b as u64) == 0);
            let budget = Budget::new(50_000_000);
            let iso = find_sset_isomorphism(&c, &cube, &budget).unwrap();
            assert!(iso.is_some(), "coherent_hom({n},0,{n}) vs cube B_{m}");
        }
    }

    #[test]
    fn final_vertex_of_poset_nerve() {
        let labels: Vec<String> = vec!["a".into(), "b".into(), "top".into()];
        // a <= top, b <= top
        let leq = |x: usize, y: usize| x == y || y == 2;
        let n = poset_nerve(&labels, leq);
        let budget = Budget::new(5_000_000);
        assert!(is_final(&n, 2, 6, &budget).unwrap());
        assert!(!is_final(&n, 0, 6, &budget).unwrap());
        // discrete two-point set has no final vertex
        let d = poset_nerve(&labels[..2].to_vec(), |x, y| x == y);
        assert!(!is_final(&d, 0, 6, &budget).unwrap());
    }
}
