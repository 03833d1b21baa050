//! Independent brute-force reference computations. Nothing here shares a
//! code path with the operations it cross-checks: ranks come from image
//! counting, homotopy classes from literal coset enumeration, combinatorial
//! counts from exhaustive filtering. The test suites compare these against
//! the production implementations. Finite prime fields only.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::budget::{Budget, BudgetExceeded};
use crate::chain::ChainComplex;
use crate::matrix::Matrix;
use crate::scalar::{enumerate_vectors, Coefficient, Scalar};

fn fp_val(s: &Scalar) -> u64 {
    match s {
        Scalar::Fp(v) => *v,
        _ => panic!("oracle works over prime fields only"),
    }
}

fn key(v: &[Scalar]) -> Vec<u64> {
    v.iter().map(fp_val).collect()
}

/// Rank as the logarithm of the image cardinality, by enumerating every
/// input vector.
pub fn rank_by_image_count(coeff: &Coefficient, m: &Matrix) -> usize {
    let p = coeff.element_count().expect("finite field required");
    let mut images: BTreeSet<Vec<u64>> = BTreeSet::new();
    for v in enumerate_vectors(coeff, m.cols()) {
        images.insert(key(&m.apply(coeff, &v)));
    }
    let mut r = 0;
    let mut n = 1u64;
    while n < images.len() as u64 {
        n *= p;
        r += 1;
    }
    assert_eq!(n, images.len() as u64, "image size must be a power of p");
    r
}

/// Homology rank at degree `i` from kernel and image cardinalities.
pub fn homology_rank_by_counting(c: &ChainComplex, i: i64) -> usize {
    let coeff = *c.coefficient();
    let d_out = c.diff_at(i);
    let d_in = c.diff_at(i - 1);
    let ker_rank = d_out.cols() - rank_by_image_count(&coeff, &d_out);
    ker_rank - rank_by_image_count(&coeff, &d_in)
}

/// Layout of a degree-0 graded map family `A -> B` as a flat coordinate
/// vector: blocks `A^i -> B^i` in ascending `i`, row-major.
#[derive(Clone, Debug)]
pub struct MapCoords {
    pub blocks: Vec<(i64, usize, usize, usize)>,
    pub dim: usize,
}

impl MapCoords {
    pub fn layout(a: &ChainComplex, b: &ChainComplex) -> MapCoords {
        let (alo, ahi) = a.window();
        let mut blocks = Vec::new();
        let mut off = 0;
        for i in alo..=ahi {
            let rows = b.rank_at(i);
            let cols = a.rank_at(i);
            if rows * cols > 0 {
                blocks.push((i, off, rows, cols));
                off += rows * cols;
            }
        }
        MapCoords { blocks, dim: off }
    }

    pub fn block(&self, coeff: &Coefficient, v: &[Scalar], a: &ChainComplex, b: &ChainComplex, i: i64) -> Matrix {
        for &(j, off, rows, cols) in &self.blocks {
            if j == i {
                return Matrix::new(rows, cols, v[off..off + rows * cols].to_vec());
            }
        }
        Matrix::zero(coeff, b.rank_at(i), a.rank_at(i))
    }
}

/// Every degree-0 chain map `A -> B`, found by enumerating all coordinate
/// vectors and testing the commuting condition with plain matrix products.
pub fn enumerate_chain_maps(
    a: &ChainComplex,
    b: &ChainComplex,
    budget: &Budget,
) -> Result<Vec<Vec<Scalar>>, BudgetExceeded> {
    assert!(a.is_bounded() && b.is_bounded());
    let coeff = *a.coefficient();
    let layout = MapCoords::layout(a, b);
    let (alo, ahi) = a.window();
    let mut out = Vec::new();
    for v in enumerate_vectors(&coeff, layout.dim) {
        budget.charge(1)?;
        let mut good = true;
        for i in alo - 1..=ahi {
            let lhs = layout
                .block(&coeff, &v, a, b, i + 1)
                .mul(&coeff, &a.diff_at(i));
            let rhs = b.diff_at(i).mul(&coeff, &layout.block(&coeff, &v, a, b, i));
            if lhs != rhs {
                good = false;
                break;
            }
        }
        if good {
            out.push(v);
        }
    }
    Ok(out)
}

/// Number of chain-homotopy classes of maps `A -> B`, by enumerating every
/// chain map, every homotopy value `d h + h d`, and splitting into cosets
/// with set arithmetic.
pub fn homotopy_class_count(
    a: &ChainComplex,
    b: &ChainComplex,
    budget: &Budget,
) -> Result<u64, BudgetExceeded> {
    let coeff = *a.coefficient();
    let p = coeff.element_count().expect("finite field required");
    let maps = enumerate_chain_maps(a, b, budget)?;
    let layout = MapCoords::layout(a, b);
    // homotopy components h(i): A^i -> B^(i-1)
    let (alo, ahi) = a.window();
    let mut hblocks = Vec::new();
    let mut hdim = 0;
    for i in alo..=ahi + 1 {
        let rows = b.rank_at(i - 1);
        let cols = a.rank_at(i);
        if rows * cols > 0 {
            hblocks.push((i, hdim, rows, cols));
            hdim += rows * cols;
        }
    }
    let hblock = |v: &[Scalar], i: i64| -> Matrix {
        for &(j, off, rows, cols) in &hblocks {
            if j == i {
                return Matrix::new(rows, cols, v[off..off + rows * cols].to_vec());
            }
        }
        Matrix::zero(&coeff, b.rank_at(i - 1), a.rank_at(i))
    };
    let mut boundary_keys: BTreeSet<Vec<u64>> = BTreeSet::new();
    for h in enumerate_vectors(&coeff, hdim) {
        budget.charge(1)?;
        let mut flat = Vec::with_capacity(layout.dim);
        for &(i, _, rows, cols) in &layout.blocks {
            let m = b
                .diff_at(i - 1)
                .mul(&coeff, &hblock(&h, i))
                .add(&coeff, &hblock(&h, i + 1).mul(&coeff, &a.diff_at(i)));
            debug_assert_eq!((m.rows(), m.cols()), (rows, cols));
            flat.extend(m.entries().iter().cloned());
        }
        boundary_keys.insert(key(&flat));
    }
    let mut remaining: BTreeSet<Vec<u64>> = maps.iter().map(|v| key(v)).collect();
    let mut classes = 0u64;
    while let Some(first) = remaining.iter().next().cloned() {
        classes += 1;
        for n in &boundary_keys {
            let sum: Vec<u64> = first.iter().zip(n).map(|(x, y)| (x + y) % p).collect();
            remaining.remove(&sum);
        }
    }
    Ok(classes)
}

/// Count of order-preserving surjections `[n] -> [k]` by filtering all maps.
pub fn count_order_surjections(n: usize, k: usize) -> u64 {
    let mut count = 0;
    let size = k + 1;
    let total = (size as u64).pow(n as u32 + 1);
    for code in 0..total {
        let mut vals = Vec::with_capacity(n + 1);
        let mut c = code;
        for _ in 0..=n {
            vals.push((c % size as u64) as usize);
            c /= size as u64;
        }
        let monotone = vals.windows(2).all(|w| w[0] <= w[1]);
        let surjective = (0..size).all(|v| vals.contains(&v));
        if monotone && surjective {
            count += 1;
        }
    }
    count
}

/// Strict chains in the Boolean poset on `m` elements running from the
/// empty set to the full set (the interior cells of the cube nerve).
pub fn boolean_interior_chain_count(m: usize) -> u64 {
    fn chains_from(current: u32, full: u32) -> u64 {
        if current == full {
            return 1;
        }
        let mut total = 0;
        // all strict supersets of current within full
        let free = full & !current;
        let mut sub = free;
        loop {
            if sub != 0 {
                total += chains_from(current | sub, full);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        total
    }
    let full = (1u32 << m) - 1;
    chains_from(0, full)
}

/// All vectors over a finite field in lex order, charged to a budget.
pub fn budgeted_vectors(
    coeff: &Coefficient,
    len: usize,
    budget: &Budget,
) -> Result<Vec<Vec<Scalar>>, BudgetExceeded> {
    let p = coeff.element_count().expect("finite field required");
    let count = (p as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    budget.charge(count.min(u64::MAX as u128) as u64)?;
    Ok(enumerate_vectors(coeff, len).collect())
}

/// p^rank as u64 with a loud failure on overflow.
pub fn pow_u64(p: u64, e: usize) -> u64 {
    let mut out = 1u64;
    for _ in 0..e {
        out = out.checked_mul(p).expect("cardinality overflows u64");
    }
    out
}
