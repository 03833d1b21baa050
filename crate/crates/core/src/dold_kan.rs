//! The Dold-Kan correspondence at desk scale.
//!
//! Simplicial dimension `n` corresponds to cohomological degree `-n`, so the
//! correspondence applies to complexes supported in degrees `<= 0` and the
//! truncation replaces degree 0 by the kernel of the outgoing differential.
//! The functor `gamma` uses the basis indexed by monotone surjections; its
//! inverse `normalize` intersects the kernels of `d_1 .. d_n` and restricts
//! `d_0`, and `normalize(gamma(C))` reproduces `C` bit for bit.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::budget::{Budget, BudgetExceeded};
use crate::chain::{ChainComplex, ChainError};
use crate::matrix::{self, Matrix};
use crate::report::ValidationReport;
use crate::scalar::{Coefficient, Scalar};
use crate::sset::{enumerate_epis, Cell, FiniteSimplicialSet, MonoMap, SimplexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DoldKanError {
    Chain(ChainError),
    NotNonnegative { degree: i64 },
    CapExceeded { needed: usize, cap: usize },
    InfiniteField,
    Budget(BudgetExceeded),
}

impl fmt::Display for DoldKanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DoldKanError::Chain(e) => write!(f, "{e}"),
            DoldKanError::NotNonnegative { degree } => {
                write!(f, "complex has content in degree {degree} > 0; truncate first")
            }
            DoldKanError::CapExceeded { needed, cap } => {
                write!(f, "dimension cap {cap} is below the complex support {needed}")
            }
            DoldKanError::InfiniteField => {
                write!(f, "element enumeration requires a finite coefficient field")
            }
            DoldKanError::Budget(b) => write!(f, "{b}"),
        }
    }
}

impl From<ChainError> for DoldKanError {
    fn from(e: ChainError) -> DoldKanError {
        DoldKanError::Chain(e)
    }
}

impl From<BudgetExceeded> for DoldKanError {
    fn from(b: BudgetExceeded) -> DoldKanError {
        DoldKanError::Budget(b)
    }
}

/// Simplicial object in finite-rank free modules, with face and degeneracy
/// operators stored as matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialAbelianGroup {
    pub coeff: Coefficient,
    pub cap: usize,
    pub ranks: Vec<usize>,
    /// `face_ops[n][i]` is `d_i : G_n -> G_(n-1)` for `1 <= n <= cap`.
    pub face_ops: Vec<Vec<Matrix>>,
    /// `degen_ops[n][j]` is `s_j : G_n -> G_(n+1)` for `0 <= n < cap`.
    pub degen_ops: Vec<Vec<Matrix>>,
}

impl SimplicialAbelianGroup {
    pub fn face(&self, n: usize, i: usize) -> &Matrix {
        &self.face_ops[n][i]
    }

    pub fn degeneracy(&self, n: usize, j: usize) -> &Matrix {
        &self.degen_ops[n][j]
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.ranks.len() != self.cap + 1
            || self.face_ops.len() != self.cap + 1
            || self.degen_ops.len() < self.cap
        {
            report.push("tables", "operator table sizes do not match the cap");
            return report;
        }
        for n in 1..=self.cap {
            if self.face_ops[n].len() != n + 1 {
                report.push(format!("dim {n}"), "expected n+1 face operators");
                return report;
            }
            for (i, m) in self.face_ops[n].iter().enumerate() {
                if m.rows() != self.ranks[n - 1] || m.cols() != self.ranks[n] {
                    report.push(format!("dim {n}"), format!("face {i} has wrong shape"));
                    return report;
                }
            }
        }
        for n in 0..self.cap {
            if self.degen_ops[n].len() != n + 1 {
                report.push(format!("dim {n}"), "expected n+1 degeneracy operators");
                return report;
            }
            for (j, m) in self.degen_ops[n].iter().enumerate() {
                if m.rows() != self.ranks[n + 1] || m.cols() != self.ranks[n] {
                    report.push(format!("dim {n}"), format!("degeneracy {j} has wrong shape"));
                    return report;
                }
            }
        }
        let c = &self.coeff;
        // d_i d_j = d_(j-1) d_i (i < j)
        for n in 2..=self.cap {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = self.face(n - 1, i).mul(c, self.face(n, j));
                    let rhs = self.face(n - 1, j - 1).mul(c, self.face(n, i));
                    if lhs != rhs {
                        report.push(
                            format!("dim {n}"),
                            format!("d_{i} d_{j} != d_{} d_{i}", j - 1),
                        );
                    }
                }
            }
        }
        // s_i s_j = s_(j+1) s_i (i <= j)
        for n in 0..self.cap.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = self.degeneracy(n + 1, i).mul(c, self.degeneracy(n, j));
                    let rhs = self.degeneracy(n + 1, j + 1).mul(c, self.degeneracy(n, i));
                    if lhs != rhs {
                        report.push(
                            format!("dim {n}"),
                            format!("s_{i} s_{j} != s_{} s_{i}", j + 1),
                        );
                    }
                }
            }
        }
        // d_i s_j relations
        for n in 0..self.cap {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = self.face(n + 1, i).mul(c, self.degeneracy(n, j));
                    let rhs = if i == j || i == j + 1 {
                        Matrix::identity(c, self.ranks[n])
                    } else if i < j {
                        self.degeneracy(n - 1, j - 1).mul(c, self.face(n, i))
                    } else {
                        if n == 0 {
                            continue;
                        }
                        self.degeneracy(n - 1, j).mul(c, self.face(n, i - 1))
                    };
                    if lhs != rhs {
                        report.push(format!("dim {n}"), format!("d_{i} s_{j} relation fails"));
                    }
                }
            }
        }
        report
    }
}

/// Basis of `gamma(C)_n`: pairs of a monotone surjection `[n] -> [k]` and a
/// basis element of `C^(-k)`, ordered by `k`, then the surjection, then the
/// basis index.
pub fn gamma_basis(c: &ChainComplex, n: usize) -> Vec<(MonoMap, usize)> {
    let mut out = Vec::new();
    for k in 0..=n {
        let rank = c.rank_at(-(k as i64));
        if rank == 0 {
            continue;
        }
        for epi in enumerate_epis(n, k) {
            for e in 0..rank {
                out.push((epi.clone(), e));
            }
        }
    }
    out
}

/// Truncation to degrees `<= 0`: replaces degree 0 by `ker(d^0)` and zeroes
/// the positive part.
pub fn truncate_nonneg(c: &ChainComplex) -> Result<ChainComplex, DoldKanError> {
    if !c.is_bounded() {
        return Err(DoldKanError::Chain(ChainError::PeriodicUnsupported("truncate_nonneg")));
    }
    let coeff = *c.coefficient();
    let kernel = matrix::kernel_basis(&coeff, &c.diff_at(0));
    let (lo, _) = c.window();
    if lo > 0 {
        return Ok(ChainComplex::zero(coeff));
    }
    let mut ranks: Vec<usize> = (lo..0).map(|i| c.rank_at(i)).collect();
    ranks.push(kernel.cols());
    let mut diffs: Vec<Matrix> = (lo..-1).map(|i| c.diff_at(i)).collect();
    if lo < 0 {
        // incoming differential expressed in the kernel basis
        let img = c.diff_at(-1);
        let expressed = matrix::solve_matrix(&coeff, &kernel, &img)
            .expect("image of d(-1) lies in ker(d(0))");
        diffs.push(expressed);
    }
    Ok(ChainComplex::new(coeff, lo, ranks, diffs, None, None)?)
}

/// The simplicial module of a complex supported in degrees `<= 0`.
pub fn gamma(c: &ChainComplex, cap: usize) -> Result<SimplicialAbelianGroup, DoldKanError> {
    if !c.is_bounded() {
        return Err(DoldKanError::Chain(ChainError::PeriodicUnsupported("gamma")));
    }
    let (lo, hi) = c.window();
    if hi > 0 {
        return Err(DoldKanError::NotNonnegative { degree: hi });
    }
    if !c.is_empty_window() && (-lo) as usize > cap {
        return Err(DoldKanError::CapExceeded { needed: (-lo) as usize, cap });
    }
    let coeff = *c.coefficient();
    let bases: Vec<Vec<(MonoMap, usize)>> = (0..=cap).map(|n| gamma_basis(c, n)).collect();
    let ranks: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let index: Vec<BTreeMap<(MonoMap, usize), usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect())
        .collect();
    // operator matrix for alpha: [m] -> [n]
    let operator = |alpha: &MonoMap, m: usize, n: usize| -> Matrix {
        let mut out = Matrix::zero(&coeff, ranks[m], ranks[n]);
        for (col, (eta, e)) in bases[n].iter().enumerate() {
            let comp = eta.compose(alpha);
            let (eta2, eps) = comp.factor();
            if eps.is_identity() {
                let row = index[m][&(eta2, *e)];
                *out.at_mut(row, col) = coeff.one();
            } else if eps.cod >= 1 && eps.vals == (1..=eps.cod).collect::<Vec<_>>() {
                // injection missing exactly the bottom element: apply d
                let k = eta.cod;
                let d = c.diff_at(-(k as i64));
                for j in 0..d.rows() {
                    let v = d.at(j, *e);
                    if !coeff.is_zero(v) {
                        let row = index[m][&(eta2.clone(), j)];
                        *out.at_mut(row, col) = v.clone();
                    }
                }
            }
        }
        out
    };
    let mut face_ops: Vec<Vec<Matrix>> = vec![Vec::new(); cap + 1];
    for n in 1..=cap {
        face_ops[n] = (0..=n).map(|i| operator(&MonoMap::delta(n, i), n - 1, n)).collect();
    }
    let mut degen_ops: Vec<Vec<Matrix>> = vec![Vec::new(); cap.max(1)];
    for n in 0..cap {
        degen_ops[n] = (0..=n).map(|j| operator(&MonoMap::sigma(n, j), n + 1, n)).collect();
    }
    let g = SimplicialAbelianGroup { coeff, cap, ranks, face_ops, degen_ops };
    debug_assert!(g.validate().is_valid());
    Ok(g)
}

/// Normalized chain complex: degree `-n` is the intersection of the kernels
/// of `d_1 .. d_n`, with differential induced by `d_0`.
pub fn normalize(g: &SimplicialAbelianGroup) -> Result<ChainComplex, DoldKanError> {
    let coeff = g.coeff;
    let mut kernels: Vec<Matrix> = Vec::with_capacity(g.cap + 1);
    for n in 0..=g.cap {
        if n == 0 {
            kernels.push(Matrix::identity(&coeff, g.ranks[0]));
            continue;
        }
        let stacked_blocks: Vec<Matrix> = (1..=n).map(|i| g.face(n, i).clone()).collect();
        let refs: Vec<&Matrix> = stacked_blocks.iter().collect();
        let stacked = Matrix::vstack(&coeff, &refs);
        kernels.push(matrix::kernel_basis(&coeff, &stacked));
    }
    let ranks: Vec<usize> = (0..=g.cap).rev().map(|n| kernels[n].cols()).collect();
    let mut diffs: Vec<Matrix> = Vec::new();
    for n in (1..=g.cap).rev() {
        let mapped = g.face(n, 0).mul(&coeff, &kernels[n]);
        let expressed = matrix::solve_matrix(&coeff, &kernels[n - 1], &mapped)
            .expect("d_0 preserves the normalized part");
        diffs.push(expressed);
    }
    Ok(ChainComplex::new(coeff, -(g.cap as i64), ranks, diffs, None, None)?)
}

fn render_element(coeff: &Coefficient, v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| coeff.render(s)).collect();
    format!("({})", parts.join(","))
}

/// The underlying simplicial set of a simplicial module over a finite field:
/// simplices are module elements, operators act by the stored matrices.
pub fn underlying_simplicial_set(
    g: &SimplicialAbelianGroup,
    cap: usize,
    budget: &Budget,
) -> Result<FiniteSimplicialSet, DoldKanError> {
    let coeff = g.coeff;
    if coeff.element_count().is_none() {
        return Err(DoldKanError::InfiniteField);
    }
    let cap = cap.min(g.cap);
    let mut elements: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let v = crate::oracle::budgeted_vectors(&coeff, g.ranks[n], budget)?;
        elements.push(v);
    }
    let elt_index = |n: usize, v: &[Scalar]| -> usize {
        elements[n].iter().position(|w| w == v).expect("element enumerated")
    };
    let is_nondeg = |n: usize, v: &[Scalar]| -> bool {
        if n == 0 {
            return true;
        }
        (0..n).all(|j| {
            let d = g.face(n, j).apply(&coeff, v);
            let s = g.degeneracy(n - 1, j).apply(&coeff, &d);
            s != v
        })
    };
    let mut nondeg: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(cap + 1);
    let mut nondeg_index: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let mut level = Vec::new();
        let mut idx_map = BTreeMap::new();
        for (i, v) in elements[n].iter().enumerate() {
            if is_nondeg(n, v) {
                idx_map.insert(i, level.len());
                level.push(v.clone());
            }
        }
        nondeg.push(level);
        nondeg_index.push(idx_map);
    }
    fn normal_form(
        g: &SimplicialAbelianGroup,
        nondeg_index: &[BTreeMap<usize, usize>],
        elt_index: &dyn Fn(usize, &[Scalar]) -> usize,
        n: usize,
        v: &[Scalar],
    ) -> Cell {
        let coeff = g.coeff;
        if n > 0 {
            for j in 0..n {
                let d = g.face(n, j).apply(&coeff, v);
                let s = g.degeneracy(n - 1, j).apply(&coeff, &d);
                if s == v {
                    let inner = normal_form(g, nondeg_index, elt_index, n - 1, &d);
                    let sigma = MonoMap::sigma(n - 1, j);
                    return Cell { base: inner.base, word: inner.word.compose(&sigma) };
                }
            }
        }
        let idx = nondeg_index[n][&elt_index(n, v)];
        Cell::nondeg(SimplexId { dim: n, idx })
    }
    let labels: Vec<Vec<String>> = nondeg
        .iter()
        .map(|level| level.iter().map(|v| render_element(&coeff, v)).collect())
        .collect();
    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); cap + 1];
    for n in 1..=cap {
        for v in &nondeg[n] {
            let fs = (0..=n)
                .map(|i| {
                    let d = g.face(n, i).apply(&coeff, v);
                    normal_form(g, &nondeg_index, &elt_index, n - 1, &d)
                })
                .collect();
            faces[n].push(fs);
        }
    }
    Ok(FiniteSimplicialSet::new(cap, labels, faces))
}

/// Number of connected components of the underlying simplicial set, computed
/// directly on elements.
pub fn component_count(g: &SimplicialAbelianGroup, budget: &Budget) -> Result<usize, DoldKanError> {
    let coeff = g.coeff;
    if coeff.element_count().is_none() {
        return Err(DoldKanError::InfiniteField);
    }
    let vertices = crate::oracle::budgeted_vectors(&coeff, g.ranks[0], budget)?;
    if g.cap == 0 {
        return Ok(vertices.len());
    }
    let edges = crate::oracle::budgeted_vectors(&coeff, g.ranks[1], budget)?;
    let vid = |v: &[Scalar]| vertices.iter().position(|w| w == v).unwrap();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for e in &edges {
        let a = vid(&g.face(1, 1).apply(&coeff, e));
        let b = vid(&g.face(1, 0).apply(&coeff, e));
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut roots: Vec<usize> = (0..vertices.len()).map(|i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::sset;

    fn f2() -> Coefficient {
        Coefficient::fp(2).unwrap()
    }

    fn f3() -> Coefficient {
        Coefficient::fp(3).unwrap()
    }

    #[test]
    fn truncation_of_nonnegative_complex_is_identity() {
        let coeff = f3();
        let c = ChainComplex::new(
            coeff,
            -2,
            vec![1, 2, 1],
            vec![
                Matrix::from_rows_i64(&coeff, &[&[1], &[0]]),
                Matrix::from_rows_i64(&coeff, &[&[0, 1]]),
            ],
            None,
            None,
        )
        .unwrap();
        assert_eq!(truncate_nonneg(&c).unwrap(), c);
    }

    #[test]
    fn truncation_kills_kernel_of_isomorphism() {
        let coeff = f2();
        let c = ChainComplex::new(
            coeff,
            0,
            vec![1, 1],
            vec![Matrix::identity(&coeff, 1)],
            None,
            None,
        )
        .unwrap();
        let t = truncate_nonneg(&c).unwrap();
        assert_eq!(t, ChainComplex::zero(coeff));
    }

    #[test]
    fn truncation_degree0_rank_is_nullity() {
        let coeff = f3();
        let d0 = Matrix::from_rows_i64(&coeff, &[&[1, 2, 0], &[0, 0, 0]]);
        let c = ChainComplex::new(coeff, 0, vec![3, 2], vec![d0.clone()], None, None).unwrap();
        let t = truncate_nonneg(&c).unwrap();
        assert_eq!(t.rank_at(0), matrix::nullity(&coeff, &d0));
    }

    #[test]
    fn gamma_of_unit_is_constant() {
        let coeff = f2();
        let c = ChainComplex::unit(coeff, 0);
        let g = gamma(&c, 3).unwrap();
        assert_eq!(g.ranks, vec![1, 1, 1, 1]);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn gamma_rank_matches_surjection_count() {
        let coeff = f2();
        let c = ChainComplex::unit(coeff, -1);
        let g = gamma(&c, 3).unwrap();
        assert_eq!(g.ranks[2] as u64, oracle::count_order_surjections(2, 1));
        assert_eq!(g.ranks[2], 2);
        let c2 = ChainComplex::new(
            coeff,
            -2,
            vec![2, 1, 1],
            vec![
                Matrix::from_rows_i64(&coeff, &[&[0, 1]]),
                Matrix::from_rows_i64(&coeff, &[&[0]]),
            ],
            None,
            None,
        )
        .unwrap();
        let g2 = gamma(&c2, 3).unwrap();
        for n in 0..=3usize {
            let expect: u64 = (0..=n)
                .map(|k| oracle::count_order_surjections(n, k) * c2.rank_at(-(k as i64)) as u64)
                .sum();
            assert_eq!(g2.ranks[n] as u64, expect, "dim {n}");
        }
        assert!(g2.validate().is_valid());
    }

    #[test]
    fn normalize_gamma_roundtrips_bit_exactly() {
        let coeff = f3();
        let c = ChainComplex::new(
            coeff,
            -2,
            vec![1, 2, 1],
            vec![
                Matrix::from_rows_i64(&coeff, &[&[1], &[2]]),
                Matrix::from_rows_i64(&coeff, &[&[1, 1]]),
            ],
            None,
            None,
        )
        .unwrap();
        let g = gamma(&c, 3).unwrap();
        let n = normalize(&g).unwrap();
        // the normalized complex has window [-3, 0]; trailing zero ranks trim
        assert_eq!(n, c);
    }

    #[test]
    fn homology_survives_the_roundtrip() {
        let coeff = f3();
        let c = ChainComplex::new(
            coeff,
            -2,
            vec![1, 1, 1],
            vec![
                Matrix::from_rows_i64(&coeff, &[&[0]]),
                Matrix::from_rows_i64(&coeff, &[&[0]]),
            ],
            None,
            None,
        )
        .unwrap();
        let g = gamma(&c, 2).unwrap();
        let n = normalize(&g).unwrap();
        for i in -2..=0 {
            assert_eq!(n.homology(i).unwrap().free_rank, c.homology(i).unwrap().free_rank);
        }
    }

    #[test]
    fn underlying_set_of_constant_module_is_discrete() {
        let coeff = f2();
        let c = ChainComplex::unit(coeff, 0);
        let g = gamma(&c, 2).unwrap();
        let budget = Budget::new(1_000_000);
        let s = underlying_simplicial_set(&g, 2, &budget).unwrap();
        assert_eq!(s.count(0), 2);
        assert_eq!(s.count(1), 0);
        assert_eq!(s.count(2), 0);
        assert!(s.validate().is_ok());
    }

    #[test]
    fn gamma_in_degree_one_fills_all_horns() {
        let coeff = f2();
        let c = ChainComplex::unit(coeff, -1);
        let g = gamma(&c, 2).unwrap();
        let budget = Budget::new(10_000_000);
        let s = underlying_simplicial_set(&g, 2, &budget).unwrap();
        assert!(s.validate().is_ok());
        assert!(sset::fills_all_horns(&s, 2, &budget).unwrap().is_none());
    }

    #[test]
    fn component_count_matches_h0_cardinality() {
        let coeff = f2();
        let c = ChainComplex::new(coeff, 0, vec![2], vec![], None, None).unwrap();
        let g = gamma(&c, 1).unwrap();
        let budget = Budget::new(1_000_000);
        assert_eq!(component_count(&g, &budget).unwrap(), 4);
        let c2 = ChainComplex::new(
            coeff,
            -1,
            vec![1, 1],
            vec![Matrix::identity(&coeff, 1)],
            None,
            None,
        )
        .unwrap();
        let g2 = gamma(&c2, 1).unwrap();
        assert_eq!(component_count(&g2, &budget).unwrap(), 1);
    }

    #[test]
    fn factorization_through_truncation_is_unique() {
        let coeff = f2();
        let c = ChainComplex::new(
            coeff,
            0,
            vec![2, 1],
            vec![Matrix::from_rows_i64(&coeff, &[&[1, 0]])],
            None,
            None,
        )
        .unwrap();
        let t = truncate_nonneg(&c).unwrap();
        assert_eq!(t.rank_at(0), 1);
        let kernel = matrix::kernel_basis(&coeff, &c.diff_at(0));
        for v in crate::scalar::enumerate_vectors(&coeff, 2) {
            let vm = Matrix::new(2, 1, v.clone());
            let is_chain_map = c.diff_at(0).mul(&coeff, &vm).is_zero(&coeff);
            let factors = matrix::solve_matrix(&coeff, &kernel, &vm).is_some();
            assert_eq!(is_chain_map, factors);
        }
    }
}
