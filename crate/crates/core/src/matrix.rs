//! Dense exact matrices over a [`Coefficient`] ring, with deterministic
//! row reduction (leftmost pivot wins) so every derived basis and report is
//! reproducible bit for bit. Row-major storage; a matrix from a rank-`c`
//! space to a rank-`r` space has `r` rows and `c` columns.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{scalar_cmp, Coefficient, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Matrix { rows, cols, entries }
    }

    pub fn zero(coeff: &Coefficient, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, entries: vec![coeff.zero(); rows * cols] }
    }

    pub fn identity(coeff: &Coefficient, n: usize) -> Matrix {
        let mut m = Matrix::zero(coeff, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = coeff.one();
        }
        m
    }

    pub fn from_fn(
        coeff: &Coefficient,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> i64,
    ) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(coeff.from_i64(f(r, c)));
            }
        }
        Matrix::new(rows, cols, entries)
    }

    pub fn from_rows_i64(coeff: &Coefficient, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Matrix::from_fn(coeff, r, c, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self, coeff: &Coefficient) -> bool {
        self.entries.iter().all(|e| coeff.is_zero(e))
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.at(r, c).clone());
            }
        }
        Matrix::new(self.cols, self.rows, entries)
    }

    pub fn add(&self, coeff: &Coefficient, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| coeff.add(a, b))
            .collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    pub fn sub(&self, coeff: &Coefficient, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| coeff.sub(a, b))
            .collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    pub fn neg(&self, coeff: &Coefficient) -> Matrix {
        let entries = self.entries.iter().map(|a| coeff.neg(a)).collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    pub fn scale(&self, coeff: &Coefficient, s: &Scalar) -> Matrix {
        let entries = self.entries.iter().map(|a| coeff.mul(s, a)).collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    /// `self * other` (composition: `self` applied after `other`).
    pub fn mul(&self, coeff: &Coefficient, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zero(coeff, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if coeff.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let t = coeff.mul(a, other.at(k, c));
                    *out.at_mut(r, c) = coeff.add(out.at(r, c), &t);
                }
            }
        }
        out
    }

    pub fn apply(&self, coeff: &Coefficient, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![coeff.zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let t = coeff.mul(self.at(r, c), &v[c]);
                out[r] = coeff.add(&out[r], &t);
            }
        }
        out
    }

    /// Kronecker product: `(A ⊗ B)(x ⊗ y) = A x ⊗ B y` with row-major
    /// flattening of tensor indices (first factor most significant).
    pub fn kron(&self, coeff: &Coefficient, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zero(coeff, rows, cols);
        for ra in 0..self.rows {
            for ca in 0..self.cols {
                let a = self.at(ra, ca);
                if coeff.is_zero(a) {
                    continue;
                }
                for rb in 0..other.rows {
                    for cb in 0..other.cols {
                        let v = coeff.mul(a, other.at(rb, cb));
                        *out.at_mut(ra * other.rows + rb, ca * other.cols + cb) = v;
                    }
                }
            }
        }
        out
    }

    pub fn hstack(coeff: &Coefficient, blocks: &[&Matrix]) -> Matrix {
        let _ = coeff;
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for b in blocks {
                for c in 0..b.cols {
                    entries.push(b.at(r, c).clone());
                }
            }
        }
        Matrix::new(rows, cols, entries)
    }

    pub fn vstack(coeff: &Coefficient, blocks: &[&Matrix]) -> Matrix {
        let _ = coeff;
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols));
        let mut entries = Vec::new();
        for b in blocks {
            entries.extend(b.entries.iter().cloned());
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        Matrix::new(rows, cols, entries)
    }

    pub fn block_diag(coeff: &Coefficient, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(coeff, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    *out.at_mut(ro + r, co + c) = b.at(r, c).clone();
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Block matrix from a grid of blocks; row `i` of the grid must agree on
    /// row counts, column `j` on column counts.
    pub fn from_blocks(coeff: &Coefficient, grid: &[Vec<&Matrix>]) -> Matrix {
        let row_heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let col_widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let rows = row_heights.iter().sum();
        let cols = col_widths.iter().sum();
        let mut out = Matrix::zero(coeff, rows, cols);
        let mut ro = 0;
        for (gi, row) in grid.iter().enumerate() {
            let mut co = 0;
            for (gj, b) in row.iter().enumerate() {
                assert_eq!(b.rows, row_heights[gi]);
                assert_eq!(b.cols, col_widths[gj]);
                for r in 0..b.rows {
                    for c in 0..b.cols {
                        *out.at_mut(ro + r, co + c) = b.at(r, c).clone();
                    }
                }
                co += b.cols;
            }
            ro += row_heights[gi];
        }
        out
    }
}

/// Result of deterministic Gauss-Jordan elimination over a field.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row echelon form. Pivot search scans columns left to right and
/// within a column takes the topmost available nonzero entry.
pub fn rref(coeff: &Coefficient, m: &Matrix) -> Rref {
    assert!(coeff.is_field(), "rref needs field coefficients");
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        let mut pivot_row = None;
        for r in row..a.rows() {
            if !coeff.is_zero(a.at(r, col)) {
                pivot_row = Some(r);
                break;
            }
        }
        let Some(pr) = pivot_row else { continue };
        if pr != row {
            for c in 0..a.cols() {
                let tmp = a.at(pr, c).clone();
                *a.at_mut(pr, c) = a.at(row, c).clone();
                *a.at_mut(row, c) = tmp;
            }
        }
        let inv = coeff.inv(a.at(row, col)).expect("nonzero pivot");
        for c in 0..a.cols() {
            *a.at_mut(row, c) = coeff.mul(&inv, a.at(row, c));
        }
        for r in 0..a.rows() {
            if r == row || coeff.is_zero(a.at(r, col)) {
                continue;
            }
            let factor = a.at(r, col).clone();
            for c in 0..a.cols() {
                let t = coeff.mul(&factor, a.at(row, c));
                *a.at_mut(r, c) = coeff.sub(a.at(r, c), &t);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref { reduced: a, pivots }
}

pub fn rank(coeff: &Coefficient, m: &Matrix) -> usize {
    if coeff.is_field() {
        rref(coeff, m).rank()
    } else {
        smith_normal_form(m).iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn nullity(coeff: &Coefficient, m: &Matrix) -> usize {
    m.cols() - rank(coeff, m)
}

/// Canonical kernel basis from the rref: one vector per free column, with a
/// 1 in the free coordinate. Returned as columns of a matrix.
pub fn kernel_basis(coeff: &Coefficient, m: &Matrix) -> Matrix {
    let Rref { reduced, pivots } = rref(coeff, m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Matrix::zero(coeff, m.cols(), free.len());
    for (k, &fc) in free.iter().enumerate() {
        *basis.at_mut(fc, k) = coeff.one();
        for (prow, &pc) in pivots.iter().enumerate() {
            *basis.at_mut(pc, k) = coeff.neg(reduced.at(prow, fc));
        }
    }
    basis
}

/// One solution of `m x = b`, if any.
pub fn solve(coeff: &Coefficient, m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(m.rows(), b.len());
    let bm = Matrix::new(b.len(), 1, b.to_vec());
    let aug = Matrix::hstack(coeff, &[m, &bm]);
    let Rref { reduced, pivots } = rref(coeff, &aug);
    if pivots.contains(&m.cols()) {
        return None;
    }
    let mut x = vec![coeff.zero(); m.cols()];
    for (prow, &pc) in pivots.iter().enumerate() {
        x[pc] = reduced.at(prow, m.cols()).clone();
    }
    Some(x)
}

/// The lexicographically least solution of `m x = b` under the coordinate
/// order with scalars ordered 0 < 1 < ... (residue order over `F_p`).
///
/// Greedy over coordinates: fix the smallest value of `x_0` for which the
/// remaining system stays solvable, then `x_1`, and so on. Over infinite
/// coefficient rings lex order has no least element in general, so the
/// canonical particular solution (free variables zero) is returned instead.
pub fn solve_lex_min(coeff: &Coefficient, m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let Some(p) = coeff.element_count() else {
        return solve(coeff, m, b);
    };
    solve(coeff, m, b)?;
    let mut sys = m.clone();
    let mut rhs = b.to_vec();
    let mut fixed: Vec<Scalar> = Vec::with_capacity(m.cols());
    for i in 0..m.cols() {
        let mut chosen = None;
        for t in 0..p {
            let val = coeff.nth_element(t);
            let mut row = Matrix::zero(coeff, 1, m.cols());
            *row.at_mut(0, i) = coeff.one();
            let candidate_sys = Matrix::vstack(coeff, &[&sys, &row]);
            let mut candidate_rhs = rhs.clone();
            candidate_rhs.push(val.clone());
            if solve(coeff, &candidate_sys, &candidate_rhs).is_some() {
                sys = candidate_sys;
                rhs = candidate_rhs;
                chosen = Some(val);
                break;
            }
        }
        fixed.push(chosen.expect("solvable system stays solvable at some value"));
    }
    debug_assert!(m.apply(coeff, &fixed).iter().zip(b).all(|(l, r)| l == r));
    Some(fixed)
}

/// Solve `m X = B` column by column.
pub fn solve_matrix(coeff: &Coefficient, m: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(m.rows(), b.rows());
    let mut out = Matrix::zero(coeff, m.cols(), b.cols());
    for c in 0..b.cols() {
        let col: Vec<Scalar> = (0..b.rows()).map(|r| b.at(r, c).clone()).collect();
        let x = solve(coeff, m, &col)?;
        for r in 0..m.cols() {
            *out.at_mut(r, c) = x[r].clone();
        }
    }
    Some(out)
}

/// Whether a square matrix is invertible.
pub fn is_invertible(coeff: &Coefficient, m: &Matrix) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    if coeff.is_field() {
        rank(coeff, m) == m.rows()
    } else {
        let d = smith_normal_form(m);
        d.len() == m.rows() && d.iter().all(|x| x.abs().is_one())
    }
}

/// Cokernel presentation of a map into `k^n`: canonical quotient basis
/// (the non-pivot coordinates of the column space) plus the projection
/// matrix `k^n -> quotient`.
pub struct Cokernel {
    pub dim: usize,
    /// Indices of standard basis vectors representing quotient basis classes.
    pub basis_coords: Vec<usize>,
    /// `dim x n` projection matrix onto quotient coordinates.
    pub projection: Matrix,
}

pub fn cokernel(coeff: &Coefficient, m: &Matrix) -> Cokernel {
    // Row space of the transpose = column space of m.
    let Rref { reduced, pivots } = rref(coeff, &m.transpose());
    let n = m.rows();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    // v mod im: subtract pivot-row multiples to zero the pivot coordinates,
    // then read off the free coordinates.
    let mut projection = Matrix::zero(coeff, free.len(), n);
    for col in 0..n {
        // project e_col
        let mut v = vec![coeff.zero(); n];
        v[col] = coeff.one();
        for (prow, &pc) in pivots.iter().enumerate() {
            let c = v[pc].clone();
            if coeff.is_zero(&c) {
                continue;
            }
            for j in 0..n {
                let t = coeff.mul(&c, reduced.at(prow, j));
                v[j] = coeff.sub(&v[j], &t);
            }
        }
        for (k, &fc) in free.iter().enumerate() {
            *projection.at_mut(k, col) = v[fc].clone();
        }
    }
    Cokernel { dim: free.len(), basis_coords: free, projection }
}

fn bigint(s: &Scalar) -> BigInt {
    match s {
        Scalar::Int(x) => x.clone(),
        _ => panic!("integer matrix expected"),
    }
}

/// Invariant factors d_1 | d_2 | ... of an integer matrix (nonnegative,
/// zeros excluded). Deterministic: pivot = smallest absolute nonzero value,
/// ties broken by row-major position.
pub fn smith_normal_form(m: &Matrix) -> Vec<BigInt> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| (0..cols).map(|c| bigint(m.at(r, c))).collect())
        .collect();
    let mut factors = Vec::new();
    let mut top = 0;
    while top < rows.min(cols) {
        // find smallest |nonzero| in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for r in top..rows {
            for c in top..cols {
                if !a[r][c].is_zero() {
                    match &best {
                        None => best = Some((r, c)),
                        Some((br, bc)) => {
                            if a[r][c].abs() < a[*br][*bc].abs() {
                                best = Some((r, c));
                            }
                        }
                    }
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        a.swap(top, pr);
        for row in a.iter_mut() {
            row.swap(top, pc);
        }
        if a[top][top].is_negative() {
            for c in top..cols {
                a[top][c] = -a[top][c].clone();
            }
        }
        // clear column and row; restart if a remainder shrinks the pivot
        let mut dirty = false;
        for r in top + 1..rows {
            if !a[r][top].is_zero() {
                let q = a[r][top].div_floor(&a[top][top]);
                for c in top..cols {
                    let t = &q * &a[top][c];
                    a[r][c] -= t;
                }
                if !a[r][top].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        for c in top + 1..cols {
            if !a[top][c].is_zero() {
                let q = a[top][c].div_floor(&a[top][top]);
                for r in top..rows {
                    let t = &q * &a[r][top];
                    a[r][c] -= t;
                }
                if !a[top][c].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        // enforce divisibility: pivot must divide the rest of the block
        let mut fixed = true;
        'outer: for r in top + 1..rows {
            for c in top + 1..cols {
                if !(&a[r][c] % &a[top][top]).is_zero() {
                    for cc in top..cols {
                        let t = a[r][cc].clone();
                        a[top][cc] += t;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        factors.push(a[top][top].clone());
        top += 1;
    }
    factors.retain(|d| !d.is_zero());
    factors
}

/// Lexicographic comparison of coordinate vectors.
pub fn vec_lex_cmp(a: &[Scalar], b: &[Scalar]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match scalar_cmp(x, y) {
            core::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}
