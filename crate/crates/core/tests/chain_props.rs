//! Property tests for the chain layer: cones of identities vanish, shifts
//! reindex homology, totalizations of exact triples are acyclic, the long
//! exact sequence balances ranks, and homotopy-class counts agree with the
//! brute-force enumeration oracle.

use homcert_core::budget::Budget;
use homcert_core::chain::{
    cone, direct_sum, find_homotopy, hom_complex, totalize_exact_triple, ChainComplex, ChainMap,
    ExactTriple,
};
use homcert_core::matrix::{self, Matrix};
use homcert_core::oracle;
use homcert_core::scalar::{Coefficient, Scalar};
use proptest::prelude::*;

/// Small deterministic generator so proptest shrinks over a single seed.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    fn scalar(&mut self, coeff: &Coefficient) -> Scalar {
        let p = coeff.element_count().unwrap();
        coeff.nth_element(self.next() % p)
    }

    fn invertible(&mut self, coeff: &Coefficient, n: usize) -> Matrix {
        loop {
            let entries: Vec<Scalar> = (0..n * n).map(|_| self.scalar(coeff)).collect();
            let m = Matrix::new(n, n, entries);
            if matrix::is_invertible(coeff, &m) {
                return m;
            }
        }
    }
}

/// Random bounded complex: a sum of elementary pieces (two-term identity
/// complexes and one-term complexes) conjugated degreewise by random
/// invertible matrices. Over a field every bounded complex is isomorphic to
/// such a sum, so the generator covers all isomorphism classes.
fn random_complex(coeff: &Coefficient, lo: i64, len: usize, seed: u64, max_rank: usize) -> ChainComplex {
    let mut rng = Lcg(seed);
    let cap = max_rank.max(1) as u64;
    // elementary pieces: pair_counts[k] two-term identity complexes living
    // in degrees (k, k+1), single_counts[k] one-term complexes in degree k
    let pair_counts: Vec<usize> = (0..len.saturating_sub(1))
        .map(|_| (rng.next() % cap) as usize)
        .collect();
    let single_counts: Vec<usize> = (0..len).map(|_| (rng.next() % cap) as usize).collect();
    // degree layout: [targets of pairs from below | sources of pairs going
    // up | singles]
    let in_pairs = |k: usize| if k == 0 { 0 } else { pair_counts[k - 1] };
    let out_pairs = |k: usize| if k + 1 < len { pair_counts[k] } else { 0 };
    let ranks: Vec<usize> = (0..len)
        .map(|k| in_pairs(k) + out_pairs(k) + single_counts[k])
        .collect();
    let mut diffs = Vec::new();
    for k in 0..len.saturating_sub(1) {
        let mut d = Matrix::zero(coeff, ranks[k + 1], ranks[k]);
        for t in 0..pair_counts[k] {
            *d.at_mut(t, in_pairs(k) + t) = coeff.one();
        }
        diffs.push(d);
    }
    // conjugate by random change of basis
    let changes: Vec<Matrix> = ranks.iter().map(|&r| rng.invertible(coeff, r)).collect();
    let mut twisted = Vec::new();
    for k in 0..diffs.len() {
        let inv = matrix::solve_matrix(coeff, &changes[k], &Matrix::identity(coeff, ranks[k]))
            .expect("invertible");
        twisted.push(changes[k + 1].mul(coeff, &diffs[k]).mul(coeff, &inv));
    }
    ChainComplex::new(*coeff, lo, ranks, twisted, None, None).expect("valid by construction")
}

/// A random extension of random complexes, packaged as an exact triple.
fn random_triple(coeff: &Coefficient, seed: u64) -> ExactTriple {
    let mut rng = Lcg(seed);
    let k = random_complex(coeff, -1, 3, rng.next(), 2);
    let q = random_complex(coeff, -1, 3, rng.next(), 2);
    // twist phi = d_K h + h d_Q for a random degree-0 family h: Q -> K
    let (lo, hi) = (-2i64, 3i64);
    let h: Vec<Matrix> = (lo..=hi)
        .map(|i| {
            let rows = k.rank_at(i);
            let cols = q.rank_at(i);
            let entries = (0..rows * cols).map(|_| rng.scalar(coeff)).collect();
            Matrix::new(rows, cols, entries)
        })
        .collect();
    let h_at = |i: i64| -> Matrix {
        if (lo..=hi).contains(&i) {
            h[(i - lo) as usize].clone()
        } else {
            Matrix::zero(coeff, k.rank_at(i), q.rank_at(i))
        }
    };
    // middle term M = K (+) Q with d = [[dK, phi], [0, dQ]]
    let ranks: Vec<usize> = (lo..=hi).map(|i| k.rank_at(i) + q.rank_at(i)).collect();
    let diffs: Vec<Matrix> = (lo..hi)
        .map(|i| {
            let dk = k.diff_at(i);
            let dq = q.diff_at(i);
            let phi = dk.mul(coeff, &h_at(i)).sub(
                coeff,
                &h_at(i + 1).mul(coeff, &q.diff_at(i)),
            );
            let z = Matrix::zero(coeff, q.rank_at(i + 1), k.rank_at(i));
            Matrix::from_blocks(coeff, &[vec![&dk, &phi], vec![&z, &dq]])
        })
        .collect();
    let m = ChainComplex::new(*coeff, lo, ranks, diffs, None, None).expect("extension is valid");
    let (mlo, mhi) = m.window();
    let incl = ChainMap::new(
        k.clone(),
        m.clone(),
        mlo,
        (mlo..=mhi)
            .map(|i| {
                let id = Matrix::identity(coeff, k.rank_at(i));
                let z = Matrix::zero(coeff, q.rank_at(i), k.rank_at(i));
                Matrix::vstack(coeff, &[&id, &z])
            })
            .collect(),
        None,
        None,
    )
    .expect("inclusion is a chain map");
    let proj = ChainMap::new(
        m,
        q.clone(),
        mlo,
        (mlo..=mhi)
            .map(|i| {
                let z = Matrix::zero(coeff, q.rank_at(i), k.rank_at(i));
                let id = Matrix::identity(coeff, q.rank_at(i));
                Matrix::hstack(coeff, &[&z, &id])
            })
            .collect(),
        None,
        None,
    )
    .expect("projection is a chain map");
    ExactTriple::new(incl, proj).expect("exact by construction")
}

fn coeff_for(which: bool) -> Coefficient {
    if which {
        Coefficient::fp(2).unwrap()
    } else {
        Coefficient::fp(3).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cone_of_identity_is_acyclic(seed in any::<u64>(), f2 in any::<bool>()) {
        let coeff = coeff_for(f2);
        let c = random_complex(&coeff, -2, 4, seed, 2);
        let (cone_c, _, _) = cone(&ChainMap::identity(&c)).unwrap();
        prop_assert!(cone_c.is_acyclic());
    }

    #[test]
    fn shift_reindexes_homology(seed in any::<u64>(), f2 in any::<bool>(), n in -2i64..3) {
        let coeff = coeff_for(f2);
        let c = random_complex(&coeff, -1, 4, seed, 2);
        let s = c.shift(n);
        for i in -6..6 {
            let lhs = s.homology(i).unwrap_or_else(|_| c.homology(i + n).unwrap_or(
                homcert_core::chain::HomologyDescriptor { free_rank: 0, torsion: vec![] }));
            let rhs = match c.homology(i + n) {
                Ok(h) => h,
                Err(_) => homcert_core::chain::HomologyDescriptor { free_rank: 0, torsion: vec![] },
            };
            prop_assert_eq!(lhs.free_rank, rhs.free_rank);
        }
        prop_assert_eq!(s.shift(-n), c);
    }

    #[test]
    fn direct_sum_adds_homology_ranks(a in any::<u64>(), b in any::<u64>()) {
        let coeff = Coefficient::fp(3).unwrap();
        let x = random_complex(&coeff, -1, 3, a, 2);
        let y = random_complex(&coeff, 0, 3, b, 2);
        let s = direct_sum(coeff, &[&x, &y]).unwrap();
        for i in -3..5 {
            let expect = x.homology(i).map(|h| h.free_rank).unwrap_or(0)
                + y.homology(i).map(|h| h.free_rank).unwrap_or(0);
            let got = s.homology(i).map(|h| h.free_rank).unwrap_or(0);
            prop_assert_eq!(got, expect);
        }
    }

    #[test]
    fn totalizations_of_exact_triples_are_acyclic(seed in any::<u64>(), f2 in any::<bool>()) {
        let coeff = coeff_for(f2);
        let t = random_triple(&coeff, seed);
        let tot = totalize_exact_triple(&t).unwrap();
        prop_assert!(tot.is_acyclic());
    }

    #[test]
    fn long_exact_sequence_balances_ranks(a in any::<u64>(), b in any::<u64>(), f2 in any::<bool>()) {
        let coeff = coeff_for(f2);
        let src = random_complex(&coeff, -1, 3, a, 2);
        let tgt = random_complex(&coeff, -1, 3, b, 2);
        // a random chain map src -> tgt: d h + h d for random h is always one
        let mut rng = Lcg(a ^ b ^ 0x9e3779b97f4a7c15);
        let h: Vec<Matrix> = (-2i64..=3)
            .map(|i| {
                let rows = tgt.rank_at(i - 1);
                let cols = src.rank_at(i);
                Matrix::new(rows, cols, (0..rows * cols).map(|_| rng.scalar(&coeff)).collect())
            })
            .collect();
        let h_at = |i: i64| -> Matrix {
            if (-2..=3).contains(&i) {
                h[(i + 2) as usize].clone()
            } else {
                Matrix::zero(&coeff, tgt.rank_at(i - 1), src.rank_at(i))
            }
        };
        let maps: Vec<Matrix> = (-2i64..=3)
            .map(|i| {
                tgt.diff_at(i - 1)
                    .mul(&coeff, &h_at(i))
                    .add(&coeff, &h_at(i + 1).mul(&coeff, &src.diff_at(i)))
            })
            .collect();
        let f = ChainMap::new(src.clone(), tgt.clone(), -2, maps, None, None).unwrap();
        let (c, _, _) = cone(&f).unwrap();
        // alternating sum of H-ranks of src, tgt, cone vanishes
        let mut total = 0i64;
        for i in -4..6 {
            let ha = src.homology(i).map(|h| h.free_rank).unwrap_or(0) as i64;
            let hb = tgt.homology(i).map(|h| h.free_rank).unwrap_or(0) as i64;
            let hc = c.homology(i).map(|h| h.free_rank).unwrap_or(0) as i64;
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            total += sign * (ha - hb + hc);
        }
        prop_assert_eq!(total, 0);
        // cone rank bound, with equality iff both induced maps vanish
        for i in -4..5 {
            let ha1 = src.homology(i + 1).map(|h| h.free_rank).unwrap_or(0);
            let hb = tgt.homology(i).map(|h| h.free_rank).unwrap_or(0);
            let hc = c.homology(i).map(|h| h.free_rank).unwrap_or(0);
            prop_assert!(hc <= ha1 + hb);
            let r_i = matrix::rank(&coeff, &f.induced_on_homology(i));
            let r_i1 = matrix::rank(&coeff, &f.induced_on_homology(i + 1));
            prop_assert_eq!(hc == ha1 + hb, r_i == 0 && r_i1 == 0);
        }
        // a null-homotopic map admits a homotopy found by the solver
        let zero = ChainMap::zero(src, tgt);
        let found = find_homotopy(&f, &zero).expect("boundary maps are null-homotopic");
        prop_assert!(found.verify());
    }

    #[test]
    fn h0_of_hom_complex_counts_homotopy_classes(a in any::<u64>(), b in any::<u64>()) {
        let coeff = Coefficient::fp(2).unwrap();
        let x = random_complex(&coeff, 0, 2, a, 2);
        let y = random_complex(&coeff, 0, 2, b, 2);
        let budget = Budget::new(5_000_000);
        let classes = oracle::homotopy_class_count(&x, &y, &budget).unwrap();
        let h = hom_complex(&x, &y).unwrap();
        let rank = h.homology(0).map(|d| d.free_rank).unwrap_or(0);
        prop_assert_eq!(classes, oracle::pow_u64(2, rank));
    }
}

#[test]
fn generator_produces_nontrivial_complexes() {
    let coeff = Coefficient::fp(2).unwrap();
    let mut nonzero = 0;
    let mut with_differential = 0;
    for seed in 0..200u64 {
        let c = random_complex(&coeff, -2, 4, seed.wrapping_mul(0x9e3779b97f4a7c15), 2);
        if c.total_rank() > 0 {
            nonzero += 1;
        }
        let (lo, hi) = c.window();
        if (lo..hi).any(|i| !c.diff_at(i).is_zero(&coeff)) {
            with_differential += 1;
        }
    }
    assert!(nonzero > 150, "only {nonzero}/200 nonzero");
    assert!(with_differential > 100, "only {with_differential}/200 carry a differential");
}
