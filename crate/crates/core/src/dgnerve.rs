//! The differential graded nerve of a small DG-category.
//!
//! An `n`-simplex is a chain of objects `A_0 .. A_n` together with one hom
//! element `f_I` for every subset `I` of `{0..n}` with at least two
//! elements; `f_I` lives in cohomological degree `2 - |I|` of
//! `Hom(A_min, A_max)` and the family satisfies
//!
//! `d(f_I) = sum_j (-1)^(j+1) ( f_(I minus j-th interior)
//!                              - f_upper . f_lower )`
//!
//! with the interior indices read in ascending order. Faces restrict the
//! family along the coface; degeneracies insert identities and zero out
//! larger subsets containing the doubled index. Inner horns are filled by
//! solving the resulting linear system, lexicographically least solution
//! first.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::budget::{Budget, BudgetExceeded};
use crate::cat::FiniteCategory;
use crate::dgcat::{DgElement, DgError, SmallDGCategory};
use crate::matrix::{self, Matrix};
use crate::report::ValidationReport;
use crate::scalar::{enumerate_vectors, Scalar};
use crate::sset::{Cell, FiniteSimplicialSet, MonoMap, SimplexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NerveError {
    Dg(DgError),
    Invalid(String),
    IncompatibleHorn(String),
    NoSolution,
    OuterHornRefused { n: usize, i: usize },
    Budget(BudgetExceeded),
}

impl fmt::Display for NerveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NerveError::Dg(e) => write!(f, "{e}"),
            NerveError::Invalid(s) => write!(f, "invalid nerve data: {s}"),
            NerveError::IncompatibleHorn(s) => write!(f, "horn faces are incompatible: {s}"),
            NerveError::NoSolution => {
                write!(f, "no filler solves the system (horn faces are incompatible)")
            }
            NerveError::OuterHornRefused { n, i } => {
                write!(f, "horn ({n},{i}) is not inner; the solver may legitimately fail")
            }
            NerveError::Budget(b) => write!(f, "{b}"),
        }
    }
}

impl From<DgError> for NerveError {
    fn from(e: DgError) -> NerveError {
        NerveError::Dg(e)
    }
}

impl From<BudgetExceeded> for NerveError {
    fn from(b: BudgetExceeded) -> NerveError {
        NerveError::Budget(b)
    }
}

/// A simplex of the DG nerve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGNerveSimplex {
    /// objects `A_0 .. A_n` as indices into the ambient category
    pub objects: Vec<usize>,
    /// `f_I` for every sorted subset `I` with `|I| >= 2`
    pub components: BTreeMap<Vec<usize>, DgElement>,
}

impl DGNerveSimplex {
    pub fn dim(&self) -> usize {
        self.objects.len() - 1
    }

    pub fn vertex(object: usize) -> DGNerveSimplex {
        DGNerveSimplex { objects: vec![object], components: BTreeMap::new() }
    }

    pub fn edge(cat: &SmallDGCategory, a: usize, b: usize, f: DgElement) -> DGNerveSimplex {
        let _ = cat;
        let mut components = BTreeMap::new();
        components.insert(vec![0, 1], f);
        DGNerveSimplex { objects: vec![a, b], components }
    }
}

fn subsets_of_size_at_least_two(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u64..(1 << (n + 1)) {
        if mask.count_ones() >= 2 {
            let s: Vec<usize> = (0..=n).filter(|&v| mask & (1 << v) != 0).collect();
            out.push(s);
        }
    }
    // by size, then lexicographically: the defining equation for a subset
    // only references strictly smaller subsets
    out.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
    out
}

/// Expected cohomological degree of `f_I`.
fn component_degree(i: &[usize]) -> i64 {
    2 - i.len() as i64
}

/// Residual of the defining equation at subset `I`; zero iff satisfied.
fn equation_residual(
    cat: &SmallDGCategory,
    objects: &[usize],
    components: &BTreeMap<Vec<usize>, DgElement>,
    i_set: &[usize],
) -> Vec<Scalar> {
    let coeff = cat.coeff;
    let a = objects[i_set[0]];
    let b = objects[*i_set.last().unwrap()];
    let f = &components[i_set];
    let mut res = cat.differential(a, b, f).coords;
    let m = i_set.len() - 2;
    for j in 1..=m {
        let sign = coeff.from_i64(if (j + 1) % 2 == 0 { 1 } else { -1 });
        // f with the j-th interior index removed
        let mut removed = i_set.to_vec();
        removed.remove(j);
        let f_removed = &components[&removed];
        // upper and lower pieces through the j-th interior index
        let lower: Vec<usize> = i_set[..=j].to_vec();
        let upper: Vec<usize> = i_set[j..].to_vec();
        let mid = objects[i_set[j]];
        let composite = cat.compose(
            a,
            mid,
            b,
            &components[&upper],
            &components[&lower],
        );
        for (k, r) in res.iter_mut().enumerate() {
            let term = coeff.sub(&f_removed.coords[k], &composite.coords[k]);
            *r = coeff.sub(r, &coeff.mul(&sign, &term));
        }
    }
    res
}

/// Per-subset residual report; valid iff every residual vanishes.
pub fn validate_simplex(cat: &SmallDGCategory, s: &DGNerveSimplex) -> ValidationReport {
    let mut report = ValidationReport::new();
    let coeff = cat.coeff;
    let n = s.dim();
    for o in &s.objects {
        if *o >= cat.object_count() {
            report.push("objects", format!("object index {o} out of range"));
            return report;
        }
    }
    for i_set in subsets_of_size_at_least_two(n) {
        let Some(f) = s.components.get(&i_set) else {
            report.push(format!("subset {i_set:?}"), "component missing");
            continue;
        };
        let a = s.objects[i_set[0]];
        let b = s.objects[*i_set.last().unwrap()];
        let want_deg = component_degree(&i_set);
        if f.degree != want_deg || f.coords.len() != cat.homs[a][b].rank_at(want_deg) {
            report.push(format!("subset {i_set:?}"), "component has wrong degree or length");
            continue;
        }
        let res = equation_residual(cat, &s.objects, &s.components, &i_set);
        if res.iter().any(|x| !coeff.is_zero(x)) {
            report.push(format!("subset {i_set:?}"), "defining equation residual is nonzero");
        }
    }
    report
}

/// The `k`-th face: drop object `k`, restrict the family along the coface.
pub fn face(s: &DGNerveSimplex, k: usize) -> DGNerveSimplex {
    let n = s.dim();
    assert!(k <= n && n >= 1);
    let mut objects = s.objects.clone();
    objects.remove(k);
    let mut components = BTreeMap::new();
    for i_set in subsets_of_size_at_least_two(n - 1) {
        let lifted: Vec<usize> = i_set.iter().map(|&v| if v < k { v } else { v + 1 }).collect();
        components.insert(i_set, s.components[&lifted].clone());
    }
    DGNerveSimplex { objects, components }
}

/// The `k`-th degeneracy: double object `k`; subsets through the doubled
/// pair become identities (size 2) or zero (size > 2).
pub fn degeneracy(cat: &SmallDGCategory, s: &DGNerveSimplex, k: usize) -> DGNerveSimplex {
    let n = s.dim();
    assert!(k <= n);
    let mut objects = Vec::with_capacity(n + 2);
    for (pos, &o) in s.objects.iter().enumerate() {
        objects.push(o);
        if pos == k {
            objects.push(o);
        }
    }
    let coeff = cat.coeff;
    let mut components = BTreeMap::new();
    for i_set in subsets_of_size_at_least_two(n + 1) {
        let has_both = i_set.contains(&k) && i_set.contains(&(k + 1));
        let elt = if has_both {
            if i_set.len() == 2 {
                DgElement { degree: 0, coords: cat.ids[s.objects[k]].clone() }
            } else {
                let a = objects[i_set[0]];
                let b = objects[*i_set.last().unwrap()];
                let deg = component_degree(&i_set);
                DgElement { degree: deg, coords: vec![coeff.zero(); cat.homs[a][b].rank_at(deg)] }
            }
        } else {
            let collapsed: Vec<usize> =
                i_set.iter().map(|&v| if v <= k { v } else { v - 1 }).collect();
            s.components[&collapsed].clone()
        };
        components.insert(i_set, elt);
    }
    DGNerveSimplex { objects, components }
}

/// Exhaustive, deterministic enumeration of valid `n`-simplices. Edge
/// components run over cycle spaces, higher components over the affine
/// solution sets of the defining equations, all in lexicographic coordinate
/// order of the kernel parameters.
pub fn enumerate_simplices(
    cat: &SmallDGCategory,
    n: usize,
    budget: &Budget,
) -> Result<Vec<DGNerveSimplex>, NerveError> {
    if cat.coeff.element_count().is_none() {
        return Err(NerveError::Dg(DgError::FieldRequired));
    }
    let mut out = Vec::new();
    let mut tuple = vec![0usize; n + 1];
    loop {
        budget.charge(1)?;
        enumerate_for_objects(cat, &tuple, budget, &mut out)?;
        // next object tuple in lexicographic order
        let mut pos = n + 1;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < cat.object_count() {
                break;
            }
            tuple[pos] = 0;
            if pos == 0 {
                return Ok(out);
            }
        }
    }
}

fn enumerate_for_objects(
    cat: &SmallDGCategory,
    objects: &[usize],
    budget: &Budget,
    out: &mut Vec<DGNerveSimplex>,
) -> Result<(), NerveError> {
    let n = objects.len() - 1;
    let subsets = subsets_of_size_at_least_two(n);
    fn rec(
        cat: &SmallDGCategory,
        objects: &[usize],
        subsets: &[Vec<usize>],
        pos: usize,
        acc: &mut BTreeMap<Vec<usize>, DgElement>,
        budget: &Budget,
        out: &mut Vec<DGNerveSimplex>,
    ) -> Result<(), NerveError> {
        if pos == subsets.len() {
            out.push(DGNerveSimplex {
                objects: objects.to_vec(),
                components: acc.clone(),
            });
            return Ok(());
        }
        let coeff = cat.coeff;
        let i_set = &subsets[pos];
        let a = objects[i_set[0]];
        let b = objects[*i_set.last().unwrap()];
        let deg = component_degree(i_set);
        let rank = cat.homs[a][b].rank_at(deg);
        let d = cat.homs[a][b].diff_at(deg);
        // rhs of d(f_I) = ... with f_I unknown: all other terms are known
        let m = i_set.len() - 2;
        let mut rhs = vec![coeff.zero(); cat.homs[a][b].rank_at(deg + 1)];
        for j in 1..=m {
            let sign = coeff.from_i64(if (j + 1) % 2 == 0 { 1 } else { -1 });
            let mut removed = i_set.to_vec();
            removed.remove(j);
            let lower: Vec<usize> = i_set[..=j].to_vec();
            let upper: Vec<usize> = i_set[j..].to_vec();
            let mid = objects[i_set[j]];
            let composite = cat.compose(a, mid, b, &acc[&upper], &acc[&lower]);
            for (k, r) in rhs.iter_mut().enumerate() {
                let term = coeff.sub(&acc[&removed].coords[k], &composite.coords[k]);
                *r = coeff.add(r, &coeff.mul(&sign, &term));
            }
        }
        let Some(particular) = matrix::solve(&coeff, &d, &rhs) else {
            return Ok(()); // no component solves the equation on this branch
        };
        let kernel = matrix::kernel_basis(&coeff, &d);
        for combo in enumerate_vectors(&coeff, kernel.cols()) {
            budget.charge(1)?;
            let mut coords = particular.clone();
            let delta = kernel.apply(&coeff, &combo);
            for (c, dv) in coords.iter_mut().zip(delta) {
                *c = coeff.add(c, &dv);
            }
            debug_assert_eq!(coords.len(), rank);
            acc.insert(i_set.clone(), DgElement { degree: deg, coords });
            rec(cat, objects, subsets, pos + 1, acc, budget, out)?;
            acc.remove(i_set);
        }
        Ok(())
    }
    let mut acc = BTreeMap::new();
    rec(cat, objects, &subsets, 0, &mut acc, budget, out)
}

/// Coordinatewise reference count: loops over every joint coordinate vector
/// of every component and tests the defining equations directly. Shares no
/// solver machinery with `enumerate_simplices`.
pub fn brute_force_simplex_count(
    cat: &SmallDGCategory,
    objects: &[usize],
    budget: &Budget,
) -> Result<u64, NerveError> {
    let coeff = cat.coeff;
    let n = objects.len() - 1;
    let subsets = subsets_of_size_at_least_two(n);
    let dims: Vec<usize> = subsets
        .iter()
        .map(|i_set| {
            let a = objects[i_set[0]];
            let b = objects[*i_set.last().unwrap()];
            cat.homs[a][b].rank_at(component_degree(i_set))
        })
        .collect();
    let total: usize = dims.iter().sum();
    let mut count = 0;
    for flat in enumerate_vectors(&coeff, total) {
        budget.charge(1)?;
        let mut components = BTreeMap::new();
        let mut off = 0;
        for (i_set, dim) in subsets.iter().zip(&dims) {
            components.insert(
                i_set.clone(),
                DgElement {
                    degree: component_degree(i_set),
                    coords: flat[off..off + dim].to_vec(),
                },
            );
            off += dim;
        }
        let ok = subsets.iter().all(|i_set| {
            equation_residual(cat, objects, &components, i_set)
                .iter()
                .all(|x| coeff.is_zero(x))
        });
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

/// Horn data: everything except the top component and the missing facet's
/// top component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgHorn {
    pub n: usize,
    pub i: usize,
    pub objects: Vec<usize>,
    pub components: BTreeMap<Vec<usize>, DgElement>,
}

impl DgHorn {
    fn full_subset(&self) -> Vec<usize> {
        (0..=self.n).collect()
    }

    fn missing_facet_subset(&self) -> Vec<usize> {
        (0..=self.n).filter(|&v| v != self.i).collect()
    }

    /// Assemble a horn from its facets `d_k`, `k != i`.
    pub fn from_facets(
        cat: &SmallDGCategory,
        n: usize,
        i: usize,
        facets: &BTreeMap<usize, DGNerveSimplex>,
    ) -> Result<DgHorn, NerveError> {
        let _ = cat;
        let mut objects: Vec<Option<usize>> = vec![None; n + 1];
        let mut components: BTreeMap<Vec<usize>, DgElement> = BTreeMap::new();
        for (&k, facet) in facets {
            if k > n || k == i {
                return Err(NerveError::IncompatibleHorn(format!("unexpected facet {k}")));
            }
            if facet.dim() + 1 != n {
                return Err(NerveError::IncompatibleHorn(format!("facet {k} has wrong dimension")));
            }
            for (pos, &o) in facet.objects.iter().enumerate() {
                let abs = if pos < k { pos } else { pos + 1 };
                match objects[abs] {
                    None => objects[abs] = Some(o),
                    Some(prev) if prev == o => {}
                    Some(_) => {
                        return Err(NerveError::IncompatibleHorn(format!(
                            "facets disagree on object {abs}"
                        )))
                    }
                }
            }
            for (i_set, elt) in &facet.components {
                let lifted: Vec<usize> =
                    i_set.iter().map(|&v| if v < k { v } else { v + 1 }).collect();
                match components.get(&lifted) {
                    None => {
                        components.insert(lifted, elt.clone());
                    }
                    Some(prev) if prev == elt => {}
                    Some(_) => {
                        return Err(NerveError::IncompatibleHorn(format!(
                            "facets disagree on component {lifted:?}"
                        )))
                    }
                }
            }
        }
        let objects: Vec<usize> = objects
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| NerveError::IncompatibleHorn("an object is unconstrained".into()))?;
        Ok(DgHorn { n, i, objects, components })
    }

    pub fn validate(&self, cat: &SmallDGCategory) -> ValidationReport {
        let mut report = ValidationReport::new();
        let full = self.full_subset();
        let missing = self.missing_facet_subset();
        for i_set in subsets_of_size_at_least_two(self.n) {
            if i_set == full || i_set == missing {
                if self.components.contains_key(&i_set) {
                    report.push(format!("subset {i_set:?}"), "component must be absent from a horn");
                }
                continue;
            }
            if !self.components.contains_key(&i_set) {
                report.push(format!("subset {i_set:?}"), "component missing");
            }
        }
        if !report.is_valid() {
            return report;
        }
        // every present facet of the horn must be a valid simplex
        for k in 0..=self.n {
            if k == self.i {
                continue;
            }
            let facet = self.facet(k);
            report.merge(&format!("facet {k}"), validate_simplex(cat, &facet));
        }
        report
    }

    /// The `k`-th facet as a simplex (`k != i`).
    fn facet(&self, k: usize) -> DGNerveSimplex {
        let mut objects = self.objects.clone();
        objects.remove(k);
        let mut components = BTreeMap::new();
        for i_set in subsets_of_size_at_least_two(self.n - 1) {
            let lifted: Vec<usize> =
                i_set.iter().map(|&v| if v < k { v } else { v + 1 }).collect();
            components.insert(i_set, self.components[&lifted].clone());
        }
        DGNerveSimplex { objects, components }
    }
}

/// Fill an inner horn by solving the joint linear system for the missing
/// facet component and the top component; returns the lexicographically
/// least solution (missing facet coordinates first).
pub fn fill_inner_horn(
    cat: &SmallDGCategory,
    horn: &DgHorn,
) -> Result<DGNerveSimplex, NerveError> {
    let n = horn.n;
    let i = horn.i;
    if !(0 < i && i < n) {
        return Err(NerveError::OuterHornRefused { n, i });
    }
    let report = horn.validate(cat);
    if !report.is_valid() {
        return Err(NerveError::IncompatibleHorn(report.to_string()));
    }
    let coeff = cat.coeff;
    let a = horn.objects[0];
    let b = horn.objects[n];
    let hom = &cat.homs[a][b];
    let full = horn.full_subset();
    let missing = horn.missing_facet_subset();
    let x_deg = component_degree(&missing); // 3 - n ... = 2 - n + 1
    let y_deg = component_degree(&full);
    let x_rank = hom.rank_at(x_deg);
    let y_rank = hom.rank_at(y_deg);
    // residual of subset J as an affine function of the unknowns: evaluate
    // with unknowns set to zero for the constant, and perturb unit vectors
    // for the linear part.
    let with_unknowns = |xv: &[Scalar], yv: &[Scalar]| -> BTreeMap<Vec<usize>, DgElement> {
        let mut all = horn.components.clone();
        all.insert(missing.clone(), DgElement { degree: x_deg, coords: xv.to_vec() });
        all.insert(full.clone(), DgElement { degree: y_deg, coords: yv.to_vec() });
        all
    };
    let zero_x = vec![coeff.zero(); x_rank];
    let zero_y = vec![coeff.zero(); y_rank];
    let eq_subsets = [missing.clone(), full.clone()];
    let residual_of = |xv: &[Scalar], yv: &[Scalar]| -> Vec<Scalar> {
        let all = with_unknowns(xv, yv);
        let mut out = Vec::new();
        for j in &eq_subsets {
            out.extend(equation_residual(cat, &horn.objects, &all, j));
        }
        out
    };
    let constant = residual_of(&zero_x, &zero_y);
    let rows = constant.len();
    let mut system = Matrix::zero(&coeff, rows, x_rank + y_rank);
    for v in 0..x_rank {
        let mut xv = zero_x.clone();
        xv[v] = coeff.one();
        let r = residual_of(&xv, &zero_y);
        for row in 0..rows {
            *system.at_mut(row, v) = coeff.sub(&r[row], &constant[row]);
        }
    }
    for v in 0..y_rank {
        let mut yv = zero_y.clone();
        yv[v] = coeff.one();
        let r = residual_of(&zero_x, &yv);
        for row in 0..rows {
            *system.at_mut(row, x_rank + v) = coeff.sub(&r[row], &constant[row]);
        }
    }
    let rhs: Vec<Scalar> = constant.iter().map(|c| coeff.neg(c)).collect();
    let sol = matrix::solve_lex_min(&coeff, &system, &rhs).ok_or(NerveError::NoSolution)?;
    let filled = DGNerveSimplex {
        objects: horn.objects.clone(),
        components: with_unknowns(&sol[..x_rank], &sol[x_rank..]),
    };
    let check = validate_simplex(cat, &filled);
    if !check.is_valid() {
        return Err(NerveError::Invalid(format!("filler failed revalidation: {check}")));
    }
    Ok(filled)
}

/// Enumerate every inner horn of shape `(n, i)` assembled from enumerated
/// `(n-1)`-simplices with compatible shared faces.
pub fn enumerate_inner_horns(
    cat: &SmallDGCategory,
    n: usize,
    i: usize,
    budget: &Budget,
) -> Result<Vec<DgHorn>, NerveError> {
    assert!(0 < i && i < n);
    let facets_pool = enumerate_simplices(cat, n - 1, budget)?;
    let slots: Vec<usize> = (0..=n).filter(|&k| k != i).collect();
    let mut out = Vec::new();
    let mut chosen: BTreeMap<usize, DGNerveSimplex> = BTreeMap::new();
    fn rec(
        cat: &SmallDGCategory,
        n: usize,
        i: usize,
        slots: &[usize],
        pool: &[DGNerveSimplex],
        pos: usize,
        chosen: &mut BTreeMap<usize, DGNerveSimplex>,
        budget: &Budget,
        out: &mut Vec<DgHorn>,
    ) -> Result<(), NerveError> {
        if pos == slots.len() {
            if let Ok(h) = DgHorn::from_facets(cat, n, i, chosen) {
                if h.validate(cat).is_valid() {
                    out.push(h);
                }
            }
            return Ok(());
        }
        let k = slots[pos];
        'next: for cand in pool {
            budget.charge(1)?;
            // compatibility with already-chosen facets:
            // d_k(facet_l) == d_(l-1)(facet_k) for k < l
            for (&l, other) in chosen.iter() {
                debug_assert!(l < k);
                let lhs = face(cand, l);
                let rhs = face(other, k - 1);
                if lhs != rhs {
                    continue 'next;
                }
            }
            chosen.insert(k, cand.clone());
            rec(cat, n, i, slots, pool, pos + 1, chosen, budget, out)?;
            chosen.remove(&k);
        }
        Ok(())
    }
    rec(cat, n, i, &slots, &facets_pool, 0, &mut chosen, budget, &mut out)?;
    Ok(out)
}

/// Truncation of the DG nerve to a finite simplicial set, dimensions up to
/// `max_dim <= 3`.
pub fn nerve_truncation(
    cat: &SmallDGCategory,
    max_dim: usize,
    budget: &Budget,
) -> Result<FiniteSimplicialSet, NerveError> {
    let mut all: Vec<Vec<DGNerveSimplex>> = Vec::new();
    for n in 0..=max_dim {
        all.push(enumerate_simplices(cat, n, budget)?);
    }
    let is_degenerate = |s: &DGNerveSimplex| -> Option<usize> {
        let m = s.dim();
        if m == 0 {
            return None;
        }
        (0..m).find(|&j| &degeneracy(cat, &face(s, j), j) == s)
    };
    let nondeg: Vec<Vec<DGNerveSimplex>> = all
        .iter()
        .map(|level| level.iter().filter(|s| is_degenerate(s).is_none()).cloned().collect())
        .collect();
    fn normal_form(
        cat: &SmallDGCategory,
        nondeg: &[Vec<DGNerveSimplex>],
        s: &DGNerveSimplex,
    ) -> Cell {
        let m = s.dim();
        if m > 0 {
            for j in 0..m {
                let y = face(s, j);
                if &degeneracy(cat, &y, j) == s {
                    let inner = normal_form(cat, nondeg, &y);
                    let sigma = MonoMap::sigma(m - 1, j);
                    return Cell { base: inner.base, word: inner.word.compose(&sigma) };
                }
            }
        }
        let idx = nondeg[m]
            .iter()
            .position(|t| t == s)
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
                        cat.objects[level[idx].objects[0]].clone()
                    } else {
                        format!("n{m}#{idx}")
                    }
                })
                .collect()
        })
        .collect();
    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); max_dim + 1];
    for m in 1..=max_dim {
        for s in &nondeg[m] {
            let fs = (0..=m).map(|k| normal_form(cat, &nondeg, &face(s, k))).collect();
            faces[m].push(fs);
        }
    }
    Ok(FiniteSimplicialSet::new(max_dim, labels, faces))
}

/// Homotopy category of the nerve: build the 2-truncation and present it.
pub fn h0_of_nerve(
    cat: &SmallDGCategory,
    word_bound: usize,
    budget: &Budget,
) -> Result<FiniteCategory, NerveError> {
    let trunc = nerve_truncation(cat, 2, budget)?;
    let pres = crate::sset::homotopy_category(&trunc);
    pres.materialize(word_bound, budget).map_err(|e| NerveError::Invalid(e.to_string()))
}
