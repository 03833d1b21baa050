//! Small DG-categories with validated axioms.
//!
//! Hom complexes are bounded complexes over a field; composition is stored
//! as structure constants, one matrix per degree pair, applied to the
//! Kronecker vector of the two arguments. Degrees are cohomological
//! throughout, so closed morphisms are degree-0 cycles and the homotopy
//! category is H^0.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::budget::{Budget, BudgetExceeded};
use crate::cat::FiniteCategory;
use crate::chain::{ChainComplex, ChainError, ChainMap, HomBasis};
use crate::matrix::{self, Matrix};
use crate::report::ValidationReport;
use crate::scalar::{Coefficient, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DgError {
    Chain(ChainError),
    Invalid(String),
    ShapeMismatch(String),
    FieldRequired,
    Budget(BudgetExceeded),
}

impl fmt::Display for DgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DgError::Chain(e) => write!(f, "{e}"),
            DgError::Invalid(s) => write!(f, "invalid DG data: {s}"),
            DgError::ShapeMismatch(s) => write!(f, "shape mismatch: {s}"),
            DgError::FieldRequired => write!(f, "operation requires a finite field"),
            DgError::Budget(b) => write!(f, "{b}"),
        }
    }
}

impl From<ChainError> for DgError {
    fn from(e: ChainError) -> DgError {
        DgError::Chain(e)
    }
}

impl From<BudgetExceeded> for DgError {
    fn from(b: BudgetExceeded) -> DgError {
        DgError::Budget(b)
    }
}

/// Finite-dimensional graded algebra presented by structure constants, with
/// an optional degree-1 differential making it a DG-ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRingPresentation {
    pub coeff: Coefficient,
    /// degree of each basis element
    pub degrees: Vec<i64>,
    /// `mult[i][j]` = coordinates of `basis_i * basis_j` (sparse, sorted)
    pub mult: Vec<Vec<Vec<(usize, Scalar)>>>,
    /// coordinates of the unit
    pub unit: Vec<(usize, Scalar)>,
    /// degree-1 differential, if present
    pub differential: Option<Matrix>,
}

impl GradedRingPresentation {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// The same presentation with the differential erased.
    pub fn forget_differential(&self) -> GradedRingPresentation {
        let mut r = self.clone();
        r.differential = None;
        r
    }

    pub fn unit_vector(&self) -> Vec<Scalar> {
        let mut v = vec![self.coeff.zero(); self.dim()];
        for (k, s) in &self.unit {
            v[*k] = s.clone();
        }
        v
    }

    /// Bilinear product of coordinate vectors.
    pub fn multiply(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let c = &self.coeff;
        let mut out = vec![c.zero(); self.dim()];
        for (i, ai) in a.iter().enumerate() {
            if c.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if c.is_zero(bj) {
                    continue;
                }
                let coef = c.mul(ai, bj);
                for (k, s) in &self.mult[i][j] {
                    out[*k] = c.add(&out[*k], &c.mul(&coef, s));
                }
            }
        }
        out
    }

    fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.coeff.zero(); self.dim()];
        v[i] = self.coeff.one();
        v
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let c = &self.coeff;
        if !c.is_field() {
            report.push("coefficient", "graded ring presentations require a field");
            return report;
        }
        let n = self.dim();
        if self.mult.len() != n || self.mult.iter().any(|row| row.len() != n) {
            report.push("multiplication", "structure constant table has wrong shape");
            return report;
        }
        // homogeneity
        for i in 0..n {
            for j in 0..n {
                for (k, s) in &self.mult[i][j] {
                    if !c.is_zero(s) && self.degrees[*k] != self.degrees[i] + self.degrees[j] {
                        report.push(
                            format!("product ({i},{j})"),
                            "product is not degree-homogeneous",
                        );
                    }
                }
            }
        }
        // unit is degree 0 and acts as identity
        for (k, s) in &self.unit {
            if !c.is_zero(s) && self.degrees[*k] != 0 {
                report.push("unit", "unit has components outside degree 0");
            }
        }
        let u = self.unit_vector();
        for i in 0..n {
            let e = self.basis_vector(i);
            if self.multiply(&u, &e) != e || self.multiply(&e, &u) != e {
                report.push(format!("unit law at basis {i}"), "unit law fails");
            }
        }
        // associativity
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.multiply(&self.multiply(&self.basis_vector(i), &self.basis_vector(j)), &self.basis_vector(k));
                    let rhs = self.multiply(&self.basis_vector(i), &self.multiply(&self.basis_vector(j), &self.basis_vector(k)));
                    if lhs != rhs {
                        report.push(format!("associativity ({i},{j},{k})"), "associator is nonzero");
                    }
                }
            }
        }
        if let Some(d) = &self.differential {
            if d.rows() != n || d.cols() != n {
                report.push("differential", "wrong shape");
                return report;
            }
            for r in 0..n {
                for col in 0..n {
                    if !c.is_zero(d.at(r, col)) && self.degrees[r] != self.degrees[col] + 1 {
                        report.push("differential", "entry violates degree +1");
                    }
                }
            }
            if !d.mul(c, d).is_zero(c) {
                report.push("differential", "d^2 != 0");
            }
            // Leibniz on basis pairs
            for i in 0..n {
                for j in 0..n {
                    let prod = self.multiply(&self.basis_vector(i), &self.basis_vector(j));
                    let lhs = d.apply(c, &prod);
                    let di = d.apply(c, &self.basis_vector(i));
                    let dj = d.apply(c, &self.basis_vector(j));
                    let sign = c.from_i64(if self.degrees[i].rem_euclid(2) == 0 { 1 } else { -1 });
                    let mut rhs = self.multiply(&di, &self.basis_vector(j));
                    let term2 = self.multiply(&self.basis_vector(i), &dj);
                    for (t, r2) in rhs.iter_mut().zip(term2) {
                        *t = c.add(t, &c.mul(&sign, &r2));
                    }
                    if lhs != rhs {
                        report.push(format!("Leibniz ({i},{j})"), "Leibniz rule fails");
                    }
                }
            }
        }
        report
    }
}

/// A DG-module over a presented DG-ring: a bounded complex with an action
/// matrix per ring basis element and module degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGModulePresentation {
    pub ring: GradedRingPresentation,
    pub underlying: ChainComplex,
    /// `action[r][i - lo]` is `M^i -> M^(i + deg r)`
    pub action: Vec<Vec<Matrix>>,
}

impl DGModulePresentation {
    pub fn action_at(&self, r: usize, i: i64) -> Matrix {
        let (lo, hi) = self.underlying.window();
        let dr = self.ring.degrees[r];
        if i < lo || i > hi {
            return Matrix::zero(
                self.underlying.coefficient(),
                self.underlying.rank_at(i + dr),
                self.underlying.rank_at(i),
            );
        }
        self.action[r][(i - lo) as usize].clone()
    }

    /// Action of an arbitrary ring element in one module degree.
    pub fn element_action_at(&self, elt: &[Scalar], i: i64, out_degree: i64) -> Matrix {
        let coeff = *self.underlying.coefficient();
        let mut out = Matrix::zero(
            &coeff,
            self.underlying.rank_at(out_degree),
            self.underlying.rank_at(i),
        );
        for (r, s) in elt.iter().enumerate() {
            if coeff.is_zero(s) {
                continue;
            }
            if i + self.ring.degrees[r] != out_degree {
                continue;
            }
            out = out.add(&coeff, &self.action_at(r, i).scale(&coeff, s));
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.merge("ring", self.ring.validate());
        report.merge("underlying", self.underlying.validate());
        if !report.is_valid() {
            return report;
        }
        let coeff = *self.underlying.coefficient();
        if &coeff != &self.ring.coeff {
            report.push("coefficients", "module and ring coefficients differ");
            return report;
        }
        if !self.underlying.is_bounded() {
            report.push("window", "module presentations must be bounded");
            return report;
        }
        let (lo, hi) = self.underlying.window();
        let n = self.ring.dim();
        if self.action.len() != n {
            report.push("action", "one action family per ring basis element required");
            return report;
        }
        for r in 0..n {
            if self.action[r].len() != (hi - lo + 1).max(0) as usize {
                report.push(format!("action of basis {r}"), "family length mismatch");
                return report;
            }
            let dr = self.ring.degrees[r];
            for i in lo..=hi {
                let m = &self.action[r][(i - lo) as usize];
                if m.rows() != self.underlying.rank_at(i + dr) || m.cols() != self.underlying.rank_at(i)
                {
                    report.push(
                        format!("action of basis {r} at degree {i}"),
                        "matrix shape mismatch",
                    );
                    return report;
                }
            }
        }
        // unit acts as identity
        let u = self.ring.unit_vector();
        for i in lo..=hi {
            let m = self.element_action_at(&u, i, i);
            if m != Matrix::identity(&coeff, self.underlying.rank_at(i)) {
                report.push(format!("degree {i}"), "unit does not act as the identity");
            }
        }
        // associativity of the action on ring basis pairs
        for r in 0..n {
            for s in 0..n {
                let prod = self.ring.multiply(&unit_vec(&coeff, n, r), &unit_vec(&coeff, n, s));
                let dr = self.ring.degrees[r];
                let ds = self.ring.degrees[s];
                for i in lo..=hi {
                    let lhs = self.action_at(r, i + ds).mul(&coeff, &self.action_at(s, i));
                    let rhs = self.element_action_at(&prod, i, i + dr + ds);
                    if lhs != rhs {
                        report.push(
                            format!("action associativity ({r},{s}) at degree {i}"),
                            "the two action routes differ",
                        );
                    }
                }
            }
        }
        // compatibility with the differentials (Leibniz)
        let d_ring = self.ring.differential.clone();
        for r in 0..n {
            let dr = self.ring.degrees[r];
            for i in lo - 1..=hi {
                let lhs = self
                    .underlying
                    .diff_at(i + dr)
                    .mul(&coeff, &self.action_at(r, i));
                let sign = coeff.from_i64(if dr.rem_euclid(2) == 0 { 1 } else { -1 });
                let mut rhs = self
                    .action_at(r, i + 1)
                    .mul(&coeff, &self.underlying.diff_at(i))
                    .scale(&coeff, &sign);
                if let Some(dm) = &d_ring {
                    let dv = dm.apply(&coeff, &unit_vec(&coeff, n, r));
                    rhs = rhs.add(&coeff, &self.element_action_at(&dv, i, i + dr + 1));
                }
                if lhs != rhs {
                    report.push(
                        format!("Leibniz for basis {r} at degree {i}"),
                        "action is not a chain map",
                    );
                }
            }
        }
        report
    }
}

fn unit_vec(coeff: &Coefficient, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![coeff.zero(); n];
    v[i] = coeff.one();
    v
}

/// An element of a hom complex: degree plus coordinates in that degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgElement {
    pub degree: i64,
    pub coords: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallDGCategory {
    pub coeff: Coefficient,
    pub objects: Vec<String>,
    /// `homs[a][b]` is the hom complex `a -> b`
    pub homs: Vec<Vec<ChainComplex>>,
    /// `(a,b,c) -> (deg g, deg f) -> matrix` applied to `kron(g, f)` with
    /// `g` in `homs[b][c]`, `f` in `homs[a][b]`, output in `homs[a][c]`
    pub comp: BTreeMap<(usize, usize, usize), BTreeMap<(i64, i64), Matrix>>,
    /// identity cycles in `homs[a][a]` degree 0
    pub ids: Vec<Vec<Scalar>>,
}

impl SmallDGCategory {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn hom(&self, a: usize, b: usize) -> &ChainComplex {
        &self.homs[a][b]
    }

    /// Composite `g . f` for `f: a -> b`, `g: b -> c`.
    pub fn compose(
        &self,
        a: usize,
        b: usize,
        c: usize,
        g: &DgElement,
        f: &DgElement,
    ) -> DgElement {
        let coeff = &self.coeff;
        let out_deg = g.degree + f.degree;
        let out_rank = self.homs[a][c].rank_at(out_deg);
        let table = self
            .comp
            .get(&(a, b, c))
            .and_then(|t| t.get(&(g.degree, f.degree)));
        let coords = match table {
            None => vec![coeff.zero(); out_rank],
            Some(m) => {
                let mut kron = Vec::with_capacity(g.coords.len() * f.coords.len());
                for gv in &g.coords {
                    for fv in &f.coords {
                        kron.push(coeff.mul(gv, fv));
                    }
                }
                m.apply(coeff, &kron)
            }
        };
        DgElement { degree: out_deg, coords }
    }

    pub fn identity(&self, a: usize) -> DgElement {
        DgElement { degree: 0, coords: self.ids[a].clone() }
    }

    pub fn differential(&self, a: usize, b: usize, x: &DgElement) -> DgElement {
        let d = self.homs[a][b].diff_at(x.degree);
        DgElement { degree: x.degree + 1, coords: d.apply(&self.coeff, &x.coords) }
    }

    fn basis_elements(&self, a: usize, b: usize) -> Vec<DgElement> {
        let h = &self.homs[a][b];
        let (lo, hi) = h.window();
        let mut out = Vec::new();
        for n in lo..=hi {
            for k in 0..h.rank_at(n) {
                let mut coords = vec![self.coeff.zero(); h.rank_at(n)];
                coords[k] = self.coeff.one();
                out.push(DgElement { degree: n, coords });
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let n = self.object_count();
        if self.homs.len() != n
            || self.homs.iter().any(|row| row.len() != n)
            || self.ids.len() != n
        {
            report.push("tables", "hom/identity tables do not match the object count");
            return report;
        }
        if !self.coeff.is_field() {
            report.push("coefficient", "hom complexes require field coefficients");
            return report;
        }
        for a in 0..n {
            for b in 0..n {
                let h = &self.homs[a][b];
                if h.coefficient() != &self.coeff {
                    report.push(format!("hom({a},{b})"), "coefficient mismatch");
                }
                if !h.is_bounded() {
                    report.push(format!("hom({a},{b})"), "hom complexes must be bounded");
                }
                report.merge(&format!("hom({a},{b})"), h.validate());
            }
        }
        if !report.is_valid() {
            return report;
        }
        // identities: degree-0 cycles with correct length
        for a in 0..n {
            if self.ids[a].len() != self.homs[a][a].rank_at(0) {
                report.push(format!("id {a}"), "identity coordinate length mismatch");
                continue;
            }
            let idd = self.differential(a, a, &self.identity(a));
            if idd.coords.iter().any(|s| !self.coeff.is_zero(s)) {
                report.push(format!("id {a}"), "identity is not a cycle");
            }
        }
        if !report.is_valid() {
            return report;
        }
        // unit laws, associativity, Leibniz on basis elements
        for a in 0..n {
            for b in 0..n {
                for f in self.basis_elements(a, b) {
                    let left = self.compose(a, b, b, &self.identity(b), &f);
                    let right = self.compose(a, a, b, &f, &self.identity(a));
                    if left != f || right != f {
                        report.push(format!("unit law on hom({a},{b})"), "identity law fails");
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for f in self.basis_elements(a, b) {
                        for g in self.basis_elements(b, c) {
                            // Leibniz
                            let lhs = self.differential(a, c, &self.compose(a, b, c, &g, &f));
                            let dg = self.differential(b, c, &g);
                            let df = self.differential(a, b, &f);
                            let sign = self
                                .coeff
                                .from_i64(if g.degree.rem_euclid(2) == 0 { 1 } else { -1 });
                            let t1 = self.compose(a, b, c, &dg, &f);
                            let mut t2 = self.compose(a, b, c, &g, &df);
                            for s in t2.coords.iter_mut() {
                                *s = self.coeff.mul(&sign, s);
                            }
                            let sum: Vec<Scalar> = t1
                                .coords
                                .iter()
                                .zip(&t2.coords)
                                .map(|(x, y)| self.coeff.add(x, y))
                                .collect();
                            if lhs.coords != sum {
                                report.push(
                                    format!("Leibniz on ({a},{b},{c})"),
                                    format!(
                                        "fails for degrees ({}, {})",
                                        g.degree, f.degree
                                    ),
                                );
                            }
                            for d in 0..n {
                                for h in self.basis_elements(c, d) {
                                    let l =
                                        self.compose(a, c, d, &h, &self.compose(a, b, c, &g, &f));
                                    let r =
                                        self.compose(a, b, d, &self.compose(b, c, d, &h, &g), &f);
                                    if l != r {
                                        report.push(
                                            format!("associativity ({a},{b},{c},{d})"),
                                            "composition is not associative",
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Kernel basis of `d^0` on `hom(a, b)`: the closed degree-0 morphisms.
    pub fn closed_morphisms(&self, a: usize, b: usize) -> Matrix {
        matrix::kernel_basis(&self.coeff, &self.homs[a][b].diff_at(0))
    }

    /// Rank of `H^0 hom(a, b)`.
    pub fn h0_rank(&self, a: usize, b: usize) -> usize {
        self.homs[a][b].homology(0).map(|h| h.free_rank).unwrap_or(0)
    }
}

/// Presentation of `H^0` classes of one hom complex: cycle basis, boundary
/// expression, quotient projection and canonical coset representatives.
struct H0Classes {
    cycles: Matrix,
    projection: Matrix, // class coords <- cycle coords
    reps: Vec<Vec<Scalar>>, // ambient representative per class vector (lex order)
}

fn h0_classes(cat: &SmallDGCategory, a: usize, b: usize) -> H0Classes {
    let coeff = &cat.coeff;
    let h = &cat.homs[a][b];
    let cycles = matrix::kernel_basis(coeff, &h.diff_at(0));
    let boundaries = h.diff_at(-1);
    let in_cycles = matrix::solve_matrix(coeff, &cycles, &boundaries)
        .expect("boundaries are cycles");
    let quot = matrix::cokernel(coeff, &in_cycles);
    let p = coeff.element_count().expect("finite field required for materialized hom-sets");
    let _ = p;
    let mut reps = Vec::new();
    for class_vec in crate::scalar::enumerate_vectors(coeff, quot.dim) {
        // section: unit vectors at the quotient's basis coordinates
        let mut cycle_coords = vec![coeff.zero(); cycles.cols()];
        for (k, &coord) in quot.basis_coords.iter().enumerate() {
            cycle_coords[coord] = class_vec[k].clone();
        }
        let ambient = cycles.apply(coeff, &cycle_coords);
        reps.push(ambient);
    }
    H0Classes { cycles, projection: quot.projection, reps }
}

impl H0Classes {
    fn class_of(&self, coeff: &Coefficient, ambient: &[Scalar]) -> Vec<Scalar> {
        let as_matrix = Matrix::new(ambient.len(), 1, ambient.to_vec());
        let in_cycles = matrix::solve_matrix(coeff, &self.cycles, &as_matrix)
            .expect("cycle expected");
        let coords: Vec<Scalar> = (0..self.cycles.cols()).map(|r| in_cycles.at(r, 0).clone()).collect();
        self.projection.apply(coeff, &coords)
    }
}

/// The homotopy category with materialized hom-sets: one morphism per
/// `H^0` class, with induced composition.
pub fn h0_category(cat: &SmallDGCategory, budget: &Budget) -> Result<FiniteCategory, DgError> {
    if cat.coeff.element_count().is_none() {
        return Err(DgError::FieldRequired);
    }
    let coeff = cat.coeff;
    let n = cat.object_count();
    let mut classes: BTreeMap<(usize, usize), H0Classes> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            budget.charge(1)?;
            classes.insert((a, b), h0_classes(cat, a, b));
        }
    }
    let mut morphisms: Vec<(usize, usize, String)> = Vec::new();
    let mut index: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let cl = &classes[&(a, b)];
            for k in 0..cl.reps.len() {
                index.insert((a, b, k), morphisms.len());
                morphisms.push((a, b, format!("[{a}->{b}#{k}]")));
            }
        }
    }
    let class_number = |a: usize, b: usize, ambient: &[Scalar]| -> usize {
        let cl = &classes[&(a, b)];
        let cv = cl.class_of(&coeff, ambient);
        // class vectors enumerate in the same lex order as reps
        let p = coeff.element_count().unwrap();
        let mut num = 0u64;
        for s in &cv {
            let v = match s {
                Scalar::Fp(x) => *x,
                _ => unreachable!(),
            };
            num = num * p + v;
        }
        num as usize
    };
    let identities: Vec<usize> = (0..n)
        .map(|a| index[&(a, a, class_number(a, a, &cat.ids[a]))])
        .collect();
    let mut composition = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let cl_ab = &classes[&(a, b)];
                let cl_bc = &classes[&(b, c)];
                for (kf, f_rep) in cl_ab.reps.iter().enumerate() {
                    for (kg, g_rep) in cl_bc.reps.iter().enumerate() {
                        budget.charge(1)?;
                        let composite = cat.compose(
                            a,
                            b,
                            c,
                            &DgElement { degree: 0, coords: g_rep.clone() },
                            &DgElement { degree: 0, coords: f_rep.clone() },
                        );
                        let kc = class_number(a, c, &composite.coords);
                        composition.insert(
                            (index[&(b, c, kg)], index[&(a, b, kf)]),
                            index[&(a, c, kc)],
                        );
                    }
                }
            }
        }
    }
    let out = FiniteCategory {
        objects: cat.objects.clone(),
        morphisms,
        identities,
        composition,
    };
    out.validate().map_err(|e| DgError::Invalid(format!("H0 category broken: {e}")))?;
    Ok(out)
}

/// H0 composition does not depend on chosen representatives: perturb each
/// representative by every boundary basis vector and compare classes.
pub fn h0_well_defined(cat: &SmallDGCategory, budget: &Budget) -> Result<bool, DgError> {
    let coeff = cat.coeff;
    let n = cat.object_count();
    for a in 0..n {
        for b in 0..n {
            let cl_ab = h0_classes(cat, a, b);
            for c in 0..n {
                let cl_bc = h0_classes(cat, b, c);
                let cl_ac = h0_classes(cat, a, c);
                let bd_ab = cat.homs[a][b].diff_at(-1);
                for f in cl_ab.reps.iter() {
                    for g in cl_bc.reps.iter() {
                        budget.charge(1)?;
                        let base = cat.compose(
                            a,
                            b,
                            c,
                            &DgElement { degree: 0, coords: g.clone() },
                            &DgElement { degree: 0, coords: f.clone() },
                        );
                        let base_class = cl_ac.class_of(&coeff, &base.coords);
                        for col in 0..bd_ab.cols() {
                            let mut fp = f.clone();
                            for r in 0..bd_ab.rows() {
                                fp[r] = coeff.add(&fp[r], bd_ab.at(r, col));
                            }
                            let perturbed = cat.compose(
                                a,
                                b,
                                c,
                                &DgElement { degree: 0, coords: g.clone() },
                                &DgElement { degree: 0, coords: fp },
                            );
                            if cl_ac.class_of(&coeff, &perturbed.coords) != base_class {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Hom-vanishing table: rank `H^0 hom(c, d)` for every pair in
/// `s1 x s2`; the verdict is true iff all ranks are zero.
pub struct VanishingReport {
    pub rows: Vec<(usize, usize, usize)>,
    pub verdict: bool,
}

pub fn semiorthogonal_vanishing(
    cat: &SmallDGCategory,
    s1: &[usize],
    s2: &[usize],
) -> VanishingReport {
    let mut rows = Vec::new();
    let mut verdict = true;
    for &c in s1 {
        for &d in s2 {
            let r = cat.h0_rank(c, d);
            verdict &= r == 0;
            rows.push((c, d, r));
        }
    }
    VanishingReport { rows, verdict }
}

/// Witness for a representable identity: one matrix family per test object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorWitness {
    /// `components[t]` maps degrees of the source hom complex to matrices.
    pub components: Vec<BTreeMap<i64, Matrix>>,
}

/// `Hom(t, x) -> Hom(t, y)` postcomposition by a closed degree-0 element.
pub fn postcomposition_map(
    cat: &SmallDGCategory,
    t: usize,
    x: usize,
    y: usize,
    f: &DgElement,
) -> Result<ChainMap, DgError> {
    assert_eq!(f.degree, 0);
    let coeff = cat.coeff;
    let src = cat.homs[t][x].clone();
    let tgt = cat.homs[t][y].clone();
    let (lo, hi) = src.window();
    let maps: Vec<Matrix> = (lo..=hi)
        .map(|n| {
            let mut m = Matrix::zero(&coeff, tgt.rank_at(n), src.rank_at(n));
            for v in 0..src.rank_at(n) {
                let mut coords = vec![coeff.zero(); src.rank_at(n)];
                coords[v] = coeff.one();
                let out = cat.compose(t, x, y, f, &DgElement { degree: n, coords });
                for r in 0..out.coords.len() {
                    *m.at_mut(r, v) = out.coords[r].clone();
                }
            }
            m
        })
        .collect();
    Ok(ChainMap::new(src, tgt, lo, maps, None, None)?)
}

fn witness_checks(
    cat: &SmallDGCategory,
    src_of: &dyn Fn(usize) -> ChainComplex,
    tgt_of: &dyn Fn(usize) -> ChainComplex,
    tgt_precompose: &dyn Fn(usize, usize, &DgElement, i64, &[Scalar]) -> Vec<Scalar>,
    src_precompose: &dyn Fn(usize, usize, &DgElement, i64, &[Scalar]) -> Vec<Scalar>,
    witness: &FunctorWitness,
) -> Result<bool, DgError> {
    let coeff = cat.coeff;
    let n = cat.object_count();
    if witness.components.len() != n {
        return Err(DgError::ShapeMismatch("one component per object required".into()));
    }
    for t in 0..n {
        let src = src_of(t);
        let tgt = tgt_of(t);
        let (lo, hi) = src.window();
        let (tlo, thi) = tgt.window();
        let range_lo = lo.min(tlo) - 1;
        let range_hi = hi.max(thi) + 1;
        let comp_at = |d: i64| -> Matrix {
            witness.components[t]
                .get(&d)
                .cloned()
                .unwrap_or_else(|| Matrix::zero(&coeff, tgt.rank_at(d), src.rank_at(d)))
        };
        for d in range_lo..=range_hi {
            let w = comp_at(d);
            if w.rows() != tgt.rank_at(d) || w.cols() != src.rank_at(d) {
                return Err(DgError::ShapeMismatch(format!(
                    "component of object {t} at degree {d}"
                )));
            }
            // closed isomorphism of complexes: invertible in every degree
            if w.rows() != w.cols() || !matrix::is_invertible(&coeff, &w) {
                return Ok(false);
            }
        }
        for d in range_lo..range_hi {
            let lhs = comp_at(d + 1).mul(&coeff, &src.diff_at(d));
            let rhs = tgt.diff_at(d).mul(&coeff, &comp_at(d));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    // naturality: for every basis morphism g: t' -> t and every basis
    // element of the source functor at t, the two routes agree.
    for t in 0..n {
        for tp in 0..n {
            let basis_g = cat.basis_elements(tp, t);
            let src_t = src_of(t);
            let (lo, hi) = src_t.window();
            for g in &basis_g {
                for d in lo..=hi {
                    for v in 0..src_t.rank_at(d) {
                        let mut coords = vec![coeff.zero(); src_t.rank_at(d)];
                        coords[v] = coeff.one();
                        let phi = DgElement { degree: d, coords };
                        // route 1: precompose in source functor, then w_(t')
                        let pre = src_precompose(t, tp, g, phi.degree, &phi.coords);
                        let w_tp = witness.components[tp]
                            .get(&(d + g.degree))
                            .cloned()
                            .unwrap_or_else(|| {
                                Matrix::zero(
                                    &coeff,
                                    tgt_of(tp).rank_at(d + g.degree),
                                    src_of(tp).rank_at(d + g.degree),
                                )
                            });
                        let route1 = w_tp.apply(&coeff, &pre);
                        // route 2: w_t then precompose in target functor
                        let w_t = witness.components[t]
                            .get(&d)
                            .cloned()
                            .unwrap_or_else(|| {
                                Matrix::zero(&coeff, tgt_of(t).rank_at(d), src_t.rank_at(d))
                            });
                        let mid = w_t.apply(&coeff, &phi.coords);
                        let route2 = tgt_precompose(t, tp, g, d, &mid);
                        if route1 != route2 {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Check that `c` represents the shift of `x` by `i`: a natural family of
/// closed isomorphisms `Hom(t, c) ~ Hom(t, x)[i]`.
pub fn check_shift_witness(
    cat: &SmallDGCategory,
    x: usize,
    c: usize,
    shift_by: i64,
    witness: &FunctorWitness,
) -> Result<bool, DgError> {
    let src_of = |t: usize| cat.homs[t][c].clone();
    let tgt_of = |t: usize| cat.homs[t][x].shift(shift_by);
    let src_pre = |t: usize, tp: usize, g: &DgElement, d: i64, coords: &[Scalar]| -> Vec<Scalar> {
        let phi = DgElement { degree: d, coords: coords.to_vec() };
        cat.compose(tp, t, c, &phi, g).coords
    };
    let tgt_pre = |t: usize, tp: usize, g: &DgElement, d: i64, coords: &[Scalar]| -> Vec<Scalar> {
        // degree d in Hom(t,x)[i] is degree d + i in Hom(t,x)
        let phi = DgElement { degree: d + shift_by, coords: coords.to_vec() };
        cat.compose(tp, t, x, &phi, g).coords
    };
    witness_checks(cat, &src_of, &tgt_of, &tgt_pre, &src_pre, witness)
}

/// Check that `c` represents the cone of the closed morphism `f: x -> y`:
/// a natural family of closed isomorphisms `Hom(t, c) ~ Cone(f_*)`.
pub fn check_cone_witness(
    cat: &SmallDGCategory,
    x: usize,
    y: usize,
    f: &DgElement,
    c: usize,
    witness: &FunctorWitness,
) -> Result<bool, DgError> {
    if f.degree != 0 {
        return Err(DgError::Invalid("cone witness requires a degree-0 morphism".into()));
    }
    let coeff = cat.coeff;
    // per test object: cone of the postcomposition chain map
    let mut cones: Vec<ChainComplex> = Vec::new();
    for t in 0..cat.object_count() {
        let fstar = postcomposition_map(cat, t, x, y, f)?;
        let (cone_c, _, _) = crate::chain::cone(&fstar)?;
        cones.push(cone_c);
    }
    let src_of = |t: usize| cat.homs[t][c].clone();
    let tgt_of = |t: usize| cones[t].clone();
    let src_pre = |t: usize, tp: usize, g: &DgElement, d: i64, coords: &[Scalar]| -> Vec<Scalar> {
        let phi = DgElement { degree: d, coords: coords.to_vec() };
        cat.compose(tp, t, c, &phi, g).coords
    };
    // on the cone side precomposition acts blockwise on
    // Hom(t,x)^(d+1) (+) Hom(t,y)^d
    let tgt_pre = |t: usize, tp: usize, g: &DgElement, d: i64, coords: &[Scalar]| -> Vec<Scalar> {
        let hx = &cat.homs[t][x];
        let hy = &cat.homs[t][y];
        let rx = hx.rank_at(d + 1);
        let ry = hy.rank_at(d);
        assert_eq!(coords.len(), rx + ry);
        let phi_x = DgElement { degree: d + 1, coords: coords[..rx].to_vec() };
        let phi_y = DgElement { degree: d, coords: coords[rx..].to_vec() };
        let out_x = cat.compose(tp, t, x, &phi_x, g).coords;
        let out_y = cat.compose(tp, t, y, &phi_y, g).coords;
        let mut out = out_x;
        out.extend(out_y);
        let _ = coeff;
        out
    };
    witness_checks(cat, &src_of, &tgt_of, &tgt_pre, &src_pre, witness)
}

/// Hom complexes of DG-modules over a presented ring, as a DG-category.
/// Also returns the solution-space bases so hom elements can be read back
/// as graded map families: `bases[(a, b)][degree]` has one column per basis
/// element, in the flat coordinates of [`HomBasis`].
pub struct ModuleDgCategory {
    pub cat: SmallDGCategory,
    pub bases: BTreeMap<(usize, usize), BTreeMap<i64, Matrix>>,
}

pub fn module_dg_category(
    ring: &GradedRingPresentation,
    modules: &[DGModulePresentation],
    labels: &[String],
) -> Result<ModuleDgCategory, DgError> {
    let coeff = ring.coeff;
    for m in modules {
        let report = m.validate();
        if !report.is_valid() {
            return Err(DgError::Invalid(format!("module invalid: {report}")));
        }
        if m.ring != *ring {
            return Err(DgError::Invalid("modules must share the ambient ring".into()));
        }
    }
    let n = modules.len();
    // R-linearity constraint solution space per pair and degree
    let linear_basis = |ma: &DGModulePresentation, mb: &DGModulePresentation, deg: i64| -> Matrix {
        let layout = HomBasis::layout(&ma.underlying, &mb.underlying, deg);
        if layout.dim == 0 {
            return Matrix::zero(&coeff, 0, 0);
        }
        // constraints: f(i + dr) . act_a(r, i) = (-1)^(deg*dr) act_b(r, i+deg) . f(i)
        let mut rows: Vec<Matrix> = Vec::new();
        let (alo, ahi) = ma.underlying.window();
        for r in 0..ring.dim() {
            let dr = ring.degrees[r];
            for i in alo - dr.abs() - 1..=ahi + dr.abs() + 1 {
                let out_rows = mb.underlying.rank_at(i + dr + deg);
                let out_cols = ma.underlying.rank_at(i);
                if out_rows * out_cols == 0 {
                    continue;
                }
                let mut eq = Matrix::zero(&coeff, out_rows * out_cols, layout.dim);
                // f(i + dr) . act_a(r, i)
                if let Some(&(_, off, frows, fcols)) =
                    layout.blocks.iter().find(|&&(j, ..)| j == i + dr)
                {
                    let act = ma.action_at(r, i);
                    debug_assert_eq!(act.rows(), fcols);
                    for rr in 0..out_rows.min(frows) {
                        for cc in 0..out_cols {
                            for k in 0..fcols {
                                let idx = off + rr * fcols + k;
                                *eq.at_mut(rr * out_cols + cc, idx) =
                                    coeff.add(eq.at(rr * out_cols + cc, idx), act.at(k, cc));
                            }
                        }
                    }
                }
                // -(+-1) act_b(r, i+deg) . f(i)
                if let Some(&(_, off, frows, fcols)) =
                    layout.blocks.iter().find(|&&(j, ..)| j == i)
                {
                    let act = mb.action_at(r, i + deg);
                    debug_assert_eq!(act.rows(), out_rows);
                    let sign = coeff.from_i64(if (deg * dr).rem_euclid(2) == 0 { -1 } else { 1 });
                    for rr in 0..out_rows {
                        for cc in 0..out_cols.min(fcols) {
                            for k in 0..frows {
                                let idx = off + k * fcols + cc;
                                let t = coeff.mul(&sign, act.at(rr, k));
                                *eq.at_mut(rr * out_cols + cc, idx) =
                                    coeff.add(eq.at(rr * out_cols + cc, idx), &t);
                            }
                        }
                    }
                }
                rows.push(eq);
            }
        }
        if rows.is_empty() {
            return Matrix::identity(&coeff, layout.dim);
        }
        let refs: Vec<&Matrix> = rows.iter().collect();
        matrix::kernel_basis(&coeff, &Matrix::vstack(&coeff, &refs))
    };
    let mut bases: BTreeMap<(usize, usize), BTreeMap<i64, Matrix>> = BTreeMap::new();
    let mut homs: Vec<Vec<ChainComplex>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            let (alo, ahi) = modules[a].underlying.window();
            let (blo, bhi) = modules[b].underlying.window();
            if modules[a].underlying.is_empty_window() || modules[b].underlying.is_empty_window() {
                bases.insert((a, b), BTreeMap::new());
                homs[a].push(ChainComplex::zero(coeff));
                continue;
            }
            let lo = blo - ahi;
            let hi = bhi - alo;
            let mut deg_bases: BTreeMap<i64, Matrix> = BTreeMap::new();
            for d in lo..=hi {
                deg_bases.insert(d, linear_basis(&modules[a], &modules[b], d));
            }
            // differential in solution-space coordinates
            let ranks: Vec<usize> = (lo..=hi).map(|d| deg_bases[&d].cols()).collect();
            let mut diffs: Vec<Matrix> = Vec::new();
            for d in lo..hi {
                let src_basis = &deg_bases[&d];
                let tgt_basis = &deg_bases[&(d + 1)];
                let src_layout = HomBasis::layout(&modules[a].underlying, &modules[b].underlying, d);
                let tgt_layout =
                    HomBasis::layout(&modules[a].underlying, &modules[b].underlying, d + 1);
                let mut out = Matrix::zero(&coeff, tgt_basis.cols(), src_basis.cols());
                for col in 0..src_basis.cols() {
                    let flat: Vec<Scalar> =
                        (0..src_basis.rows()).map(|r| src_basis.at(r, col).clone()).collect();
                    // differential: d_B . f - (-1)^d f . d_A, blockwise
                    let mut out_flat = vec![coeff.zero(); tgt_layout.dim];
                    let sign = coeff.from_i64(if d.rem_euclid(2) == 0 { -1 } else { 1 });
                    for &(i, toff, trows, tcols) in &tgt_layout.blocks {
                        let f_i = src_layout.decode_block(&coeff, &flat, i);
                        let f_i1 = src_layout.decode_block(&coeff, &flat, i + 1);
                        let mut block = Matrix::zero(&coeff, trows, tcols);
                        if f_i.rows() > 0 {
                            block = block
                                .add(&coeff, &modules[b].underlying.diff_at(i + d).mul(&coeff, &f_i));
                        }
                        if f_i1.cols() > 0 {
                            let t = f_i1
                                .mul(&coeff, &modules[a].underlying.diff_at(i))
                                .scale(&coeff, &sign);
                            block = block.add(&coeff, &t);
                        }
                        for rr in 0..trows {
                            for cc in 0..tcols {
                                out_flat[toff + rr * tcols + cc] = block.at(rr, cc).clone();
                            }
                        }
                    }
                    let expressed = matrix::solve(&coeff, tgt_basis, &out_flat)
                        .expect("differential preserves R-linearity");
                    for r in 0..out.rows() {
                        *out.at_mut(r, col) = expressed[r].clone();
                    }
                }
                diffs.push(out);
            }
            homs[a].push(ChainComplex::from_parts(coeff, lo, ranks, diffs, None, None).canonical());
            // keep only the degrees that survive canonicalization for decoding
            bases.insert((a, b), deg_bases);
        }
    }
    // composition tables
    let mut comp: BTreeMap<(usize, usize, usize), BTreeMap<(i64, i64), Matrix>> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut tables = BTreeMap::new();
                let hab = &homs[a][b];
                let hbc = &homs[b][c];
                let hac = &homs[a][c];
                let (ablo, abhi) = hab.window();
                let (bclo, bchi) = hbc.window();
                for m in ablo..=abhi {
                    for ng in bclo..=bchi {
                        let rf = hab.rank_at(m);
                        let rg = hbc.rank_at(ng);
                        if rf * rg == 0 {
                            continue;
                        }
                        let out_deg = m + ng;
                        let out_rank = hac.rank_at(out_deg);
                        if out_rank == 0 {
                            // the composite is forced to zero; compose()
                            // falls back to the zero vector
                            continue;
                        }
                        let mut table = Matrix::zero(&coeff, out_rank, rg * rf);
                        let ab_layout =
                            HomBasis::layout(&modules[a].underlying, &modules[b].underlying, m);
                        let bc_layout =
                            HomBasis::layout(&modules[b].underlying, &modules[c].underlying, ng);
                        let ac_layout =
                            HomBasis::layout(&modules[a].underlying, &modules[c].underlying, out_deg);
                        let ab_basis = &bases[&(a, b)][&m];
                        let bc_basis = &bases[&(b, c)][&ng];
                        let ac_basis = &bases[&(a, c)][&out_deg];
                        for u in 0..rg {
                            let gflat: Vec<Scalar> =
                                (0..bc_basis.rows()).map(|r| bc_basis.at(r, u).clone()).collect();
                            for v in 0..rf {
                                let fflat: Vec<Scalar> = (0..ab_basis.rows())
                                    .map(|r| ab_basis.at(r, v).clone())
                                    .collect();
                                // composite family g . f
                                let mut out_flat = vec![coeff.zero(); ac_layout.dim];
                                for &(i, toff, trows, tcols) in &ac_layout.blocks {
                                    let f_i = ab_layout.decode_block(&coeff, &fflat, i);
                                    let g_mid = bc_layout.decode_block(&coeff, &gflat, i + m);
                                    if f_i.rows() == 0 || g_mid.rows() == 0 {
                                        continue;
                                    }
                                    let block = g_mid.mul(&coeff, &f_i);
                                    debug_assert_eq!((block.rows(), block.cols()), (trows, tcols));
                                    for rr in 0..trows {
                                        for cc in 0..tcols {
                                            out_flat[toff + rr * tcols + cc] =
                                                block.at(rr, cc).clone();
                                        }
                                    }
                                }
                                if out_rank > 0 {
                                    let expressed = matrix::solve(&coeff, ac_basis, &out_flat)
                                        .expect("composition preserves R-linearity");
                                    for r in 0..out_rank {
                                        *table.at_mut(r, u * rf + v) = expressed[r].clone();
                                    }
                                }
                            }
                        }
                        tables.insert((ng, m), table);
                    }
                }
                comp.insert((a, b, c), tables);
            }
        }
    }
    // identities
    let mut ids = Vec::new();
    for a in 0..n {
        if modules[a].underlying.is_empty_window() {
            ids.push(Vec::new());
            continue;
        }
        let layout = HomBasis::layout(&modules[a].underlying, &modules[a].underlying, 0);
        let idflat = layout.encode(&|i| Matrix::identity(&coeff, modules[a].underlying.rank_at(i)));
        let basis = &bases[&(a, a)][&0];
        let expressed =
            matrix::solve(&coeff, basis, &idflat).expect("identity is R-linear");
        ids.push(expressed);
    }
    let cat = SmallDGCategory {
        coeff,
        objects: labels.to_vec(),
        homs,
        comp,
        ids,
    };
    let report = cat.validate();
    if !report.is_valid() {
        return Err(DgError::Invalid(format!("module category failed validation: {report}")));
    }
    Ok(ModuleDgCategory { cat, bases })
}

/// The ring `F_p[x]/(x^2)` in degree 0, basis `{1, x}`.
pub fn dual_numbers_ring(coeff: Coefficient) -> GradedRingPresentation {
    let one = coeff.one();
    GradedRingPresentation {
        coeff,
        degrees: vec![0, 0],
        mult: vec![
            vec![vec![(0, one.clone())], vec![(1, one.clone())]],
            vec![vec![(1, one.clone())], vec![]],
        ],
        unit: vec![(0, one)],
        differential: None,
    }
}

/// A bounded complex of free rank-1 modules over `k[x]/(x^2)` read as a
/// DG-module: each listed degree carries one copy of the ring, consecutive
/// degrees connected by multiplication by `x`, with a leading or trailing
/// copy of `k` when requested.
pub fn dual_numbers_module(
    ring: &GradedRingPresentation,
    underlying: ChainComplex,
    action: Vec<Vec<Matrix>>,
) -> DGModulePresentation {
    DGModulePresentation { ring: ring.clone(), underlying, action }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;

    fn f2() -> Coefficient {
        Coefficient::fp(2).unwrap()
    }

    fn x_matrix(coeff: &Coefficient) -> Matrix {
        Matrix::from_rows_i64(coeff, &[&[0, 0], &[1, 0]])
    }

    /// R as a module over itself in degree 0.
    pub(crate) fn free_module(ring: &GradedRingPresentation) -> DGModulePresentation {
        let coeff = ring.coeff;
        let underlying = ChainComplex::new(coeff, 0, vec![2], vec![], None, None).unwrap();
        let action = vec![
            vec![Matrix::identity(&coeff, 2)],
            vec![x_matrix(&coeff)],
        ];
        DGModulePresentation { ring: ring.clone(), underlying, action }
    }

    /// k = R/(x) as a module in degree 0.
    pub(crate) fn residue_module(ring: &GradedRingPresentation) -> DGModulePresentation {
        let coeff = ring.coeff;
        let underlying = ChainComplex::new(coeff, 0, vec![1], vec![], None, None).unwrap();
        let action = vec![
            vec![Matrix::identity(&coeff, 1)],
            vec![Matrix::zero(&coeff, 1, 1)],
        ];
        DGModulePresentation { ring: ring.clone(), underlying, action }
    }

    /// The two-term complex R -x-> R in degrees [0, 1].
    pub(crate) fn two_term_module(ring: &GradedRingPresentation) -> DGModulePresentation {
        let coeff = ring.coeff;
        let underlying = ChainComplex::new(
            coeff,
            0,
            vec![2, 2],
            vec![x_matrix(&coeff)],
            None,
            None,
        )
        .unwrap();
        let id2 = Matrix::identity(&coeff, 2);
        let x = x_matrix(&coeff);
        DGModulePresentation {
            ring: ring.clone(),
            underlying,
            action: vec![vec![id2.clone(), id2], vec![x.clone(), x]],
        }
    }

    #[test]
    fn dual_numbers_ring_validates() {
        let r = dual_numbers_ring(f2());
        assert!(r.validate().is_valid());
    }

    #[test]
    fn modules_validate() {
        let r = dual_numbers_ring(f2());
        assert!(free_module(&r).validate().is_valid());
        assert!(residue_module(&r).validate().is_valid());
        assert!(two_term_module(&r).validate().is_valid());
    }

    #[test]
    fn mutated_action_fails_validation() {
        let r = dual_numbers_ring(f2());
        let mut m = free_module(&r);
        // x acting as the identity is not associative with x.x = 0
        m.action[1][0] = Matrix::identity(&f2(), 2);
        assert!(!m.validate().is_valid());
    }

    #[test]
    fn unit_category_validates_and_h0_has_two_morphisms() {
        let coeff = f2();
        let r = dual_numbers_ring(coeff);
        let k = residue_module(&r);
        // endomorphisms of k over R: 1-dimensional in degree 0
        let mdc = module_dg_category(&r, &[k], &["k".into()]).unwrap();
        assert!(mdc.cat.validate().is_valid());
        assert_eq!(mdc.cat.homs[0][0].rank_at(0), 1);
        let budget = Budget::new(10_000_000);
        let h0 = h0_category(&mdc.cat, &budget).unwrap();
        assert_eq!(h0.hom_set(0, 0).len(), 2);
    }

    #[test]
    fn end_of_free_module_is_the_ring() {
        let coeff = f2();
        let r = dual_numbers_ring(coeff);
        let free = free_module(&r);
        let mdc = module_dg_category(&r, &[free], &["R".into()]).unwrap();
        // End(R) = R: 2-dimensional in degree 0
        assert_eq!(mdc.cat.homs[0][0].rank_at(0), 2);
        assert!(mdc.cat.validate().is_valid());
    }

    #[test]
    fn module_category_fixture_validates() {
        let coeff = f2();
        let r = dual_numbers_ring(coeff);
        let ms = [free_module(&r), residue_module(&r), two_term_module(&r)];
        let mdc = module_dg_category(
            &r,
            &ms,
            &["R".into(), "k".into(), "RxR".into()],
        )
        .unwrap();
        assert!(mdc.cat.validate().is_valid());
        let budget = Budget::new(50_000_000);
        assert!(h0_well_defined(&mdc.cat, &budget).unwrap());
    }

    #[test]
    fn identity_shift_witness_passes() {
        let coeff = f2();
        let r = dual_numbers_ring(coeff);
        let ms = [free_module(&r), residue_module(&r)];
        let mdc = module_dg_category(&r, &ms, &["R".into(), "k".into()]).unwrap();
        // X = C, i = 0, identity witness
        let witness = FunctorWitness {
            components: (0..2)
                .map(|t| {
                    let h = &mdc.cat.homs[t][0];
                    let (lo, hi) = h.window();
                    (lo..=hi)
                        .map(|d| (d, Matrix::identity(&coeff, h.rank_at(d))))
                        .collect()
                })
                .collect(),
        };
        assert!(check_shift_witness(&mdc.cat, 0, 0, 0, &witness).unwrap());
        // non-invertible component fails
        let mut bad = witness.clone();
        if let Some(m) = bad.components[0].get_mut(&0) {
            *m = Matrix::zero(&coeff, m.rows(), m.cols());
        }
        assert!(!check_shift_witness(&mdc.cat, 0, 0, 0, &bad).unwrap());
    }

    #[test]
    fn vanishing_table_detects_identity() {
        let coeff = f2();
        let r = dual_numbers_ring(coeff);
        let ms = [free_module(&r)];
        let mdc = module_dg_category(&r, &ms, &["R".into()]).unwrap();
        let rep = semiorthogonal_vanishing(&mdc.cat, &[0], &[0]);
        assert!(!rep.verdict);
        assert_eq!(rep.rows[0].2, 2); // H^0 End(R) = R is 2-dimensional
    }
}
