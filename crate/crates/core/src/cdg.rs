//! Curved DG-rings and CDG-modules.
//!
//! A CDG-module carries a degree-1 operator whose square is the curvature
//! action, so it is deliberately *not* a [`ChainComplex`] and homology
//! requests must pass through [`underlying_complex_checked`], which refuses
//! curved input. Hom complexes of CDG-modules are genuine complexes: the
//! curvature terms cancel because the curvature has even degree, and the
//! cancellation is re-verified exactly rather than assumed.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::chain::{ChainComplex, ChainError};
use crate::dgcat::{DgError, GradedRingPresentation, SmallDGCategory};
use crate::matrix::{self, Matrix};
use crate::report::ValidationReport;
use crate::scalar::{Coefficient, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CdgError {
    /// Homology of a curved module is refused: d^2 != 0.
    Curved,
    Invalid(String),
    RingMismatch,
    Chain(ChainError),
    Dg(DgError),
}

impl fmt::Display for CdgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdgError::Curved => write!(
                f,
                "module is curved (d^2 = h != 0): homology is undefined and the request is refused"
            ),
            CdgError::Invalid(s) => write!(f, "invalid CDG data: {s}"),
            CdgError::RingMismatch => write!(f, "modules live over different CDG-rings"),
            CdgError::Chain(e) => write!(f, "{e}"),
            CdgError::Dg(e) => write!(f, "{e}"),
        }
    }
}

impl From<ChainError> for CdgError {
    fn from(e: ChainError) -> CdgError {
        CdgError::Chain(e)
    }
}

impl From<DgError> for CdgError {
    fn from(e: DgError) -> CdgError {
        CdgError::Dg(e)
    }
}

/// A curved DG-ring: graded ring, degree-1 derivation, curvature in degree 2
/// with `d^2(x) = hx - xh` and `d(h) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CDGRing {
    pub graded: GradedRingPresentation,
    pub derivation: Matrix,
    pub curvature: Vec<Scalar>,
}

impl CDGRing {
    pub fn coeff(&self) -> Coefficient {
        self.graded.coeff
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.graded.differential.is_some() {
            report.push("ring", "carry the derivation in the CDG structure, not the presentation");
            return report;
        }
        report.merge("graded ring", self.graded.validate());
        if !report.is_valid() {
            return report;
        }
        let c = self.graded.coeff;
        let n = self.graded.dim();
        if self.derivation.rows() != n || self.derivation.cols() != n {
            report.push("derivation", "wrong shape");
            return report;
        }
        if self.curvature.len() != n {
            report.push("curvature", "coordinate length mismatch");
            return report;
        }
        for (i, s) in self.curvature.iter().enumerate() {
            if !c.is_zero(s) && self.graded.degrees[i] != 2 {
                report.push("curvature", "components outside degree 2");
            }
        }
        for r in 0..n {
            for col in 0..n {
                if !c.is_zero(self.derivation.at(r, col))
                    && self.graded.degrees[r] != self.graded.degrees[col] + 1
                {
                    report.push("derivation", "entry violates degree +1");
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        let basis = |i: usize| -> Vec<Scalar> {
            let mut v = vec![c.zero(); n];
            v[i] = c.one();
            v
        };
        // Leibniz
        for i in 0..n {
            for j in 0..n {
                let prod = self.graded.multiply(&basis(i), &basis(j));
                let lhs = self.derivation.apply(&c, &prod);
                let di = self.derivation.apply(&c, &basis(i));
                let dj = self.derivation.apply(&c, &basis(j));
                let sign = c.from_i64(if self.graded.degrees[i].rem_euclid(2) == 0 { 1 } else { -1 });
                let mut rhs = self.graded.multiply(&di, &basis(j));
                let t2 = self.graded.multiply(&basis(i), &dj);
                for (a, b) in rhs.iter_mut().zip(t2) {
                    *a = c.add(a, &c.mul(&sign, &b));
                }
                if lhs != rhs {
                    report.push(format!("Leibniz ({i},{j})"), "derivation fails Leibniz");
                }
            }
        }
        // d^2(x) = hx - xh
        for i in 0..n {
            let d2 = self
                .derivation
                .apply(&c, &self.derivation.apply(&c, &basis(i)));
            let hx = self.graded.multiply(&self.curvature, &basis(i));
            let xh = self.graded.multiply(&basis(i), &self.curvature);
            let comm: Vec<Scalar> = hx.iter().zip(&xh).map(|(a, b)| c.sub(a, b)).collect();
            if d2 != comm {
                report.push(format!("curvature at basis {i}"), "d^2 differs from [h, -]");
            }
        }
        // d(h) = 0
        let dh = self.derivation.apply(&c, &self.curvature);
        if dh.iter().any(|s| !c.is_zero(s)) {
            report.push("curvature", "d(h) != 0");
        }
        report
    }
}

/// A left CDG-module: graded free module with a degree-1 operator squaring
/// to the curvature action. Deliberately not a chain complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CDGModule {
    pub ring: CDGRing,
    pub lo: i64,
    pub ranks: Vec<usize>,
    /// `d[i - lo]` is `M^i -> M^(i+1)`
    pub d: Vec<Matrix>,
    /// `action[r][i - lo]` is `M^i -> M^(i + deg r)`
    pub action: Vec<Vec<Matrix>>,
}

impl CDGModule {
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn rank_at(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    pub fn d_at(&self, i: i64) -> Matrix {
        let coeff = self.ring.coeff();
        if i >= self.lo && i < self.hi() {
            self.d[(i - self.lo) as usize].clone()
        } else {
            Matrix::zero(&coeff, self.rank_at(i + 1), self.rank_at(i))
        }
    }

    pub fn action_at(&self, r: usize, i: i64) -> Matrix {
        let coeff = self.ring.coeff();
        let dr = self.ring.graded.degrees[r];
        if i >= self.lo && i <= self.hi() {
            self.action[r][(i - self.lo) as usize].clone()
        } else {
            Matrix::zero(&coeff, self.rank_at(i + dr), self.rank_at(i))
        }
    }

    /// Action of the curvature element at one degree.
    pub fn curvature_action_at(&self, i: i64) -> Matrix {
        let coeff = self.ring.coeff();
        let mut out = Matrix::zero(&coeff, self.rank_at(i + 2), self.rank_at(i));
        for (r, s) in self.ring.curvature.iter().enumerate() {
            if coeff.is_zero(s) {
                continue;
            }
            debug_assert_eq!(self.ring.graded.degrees[r], 2);
            out = out.add(&coeff, &self.action_at(r, i).scale(&coeff, s));
        }
        out
    }

    pub fn is_curved(&self) -> bool {
        (self.lo - 1..=self.hi()).any(|i| !self.curvature_action_at(i).is_zero(&self.ring.coeff()))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.merge("ring", self.ring.validate());
        if !report.is_valid() {
            return report;
        }
        let coeff = self.ring.coeff();
        let hi = self.hi();
        if self.d.len() != self.ranks.len().saturating_sub(1) {
            report.push("operator", "differential family length mismatch");
            return report;
        }
        for i in self.lo..hi {
            let m = &self.d[(i - self.lo) as usize];
            if m.rows() != self.rank_at(i + 1) || m.cols() != self.rank_at(i) {
                report.push(format!("degree {i}"), "operator shape mismatch");
                return report;
            }
        }
        let nr = self.ring.graded.dim();
        if self.action.len() != nr {
            report.push("action", "one family per ring basis element required");
            return report;
        }
        for r in 0..nr {
            if self.action[r].len() != self.ranks.len() {
                report.push(format!("action {r}"), "family length mismatch");
                return report;
            }
            let dr = self.ring.graded.degrees[r];
            for i in self.lo..=hi {
                let m = &self.action[r][(i - self.lo) as usize];
                if m.rows() != self.rank_at(i + dr) || m.cols() != self.rank_at(i) {
                    report.push(format!("action {r} at degree {i}"), "shape mismatch");
                    return report;
                }
            }
        }
        // unit acts as identity; action associativity
        let unit = self.ring.graded.unit_vector();
        let elt_action = |elt: &[Scalar], i: i64, out_deg: i64| -> Matrix {
            let mut out = Matrix::zero(&coeff, self.rank_at(out_deg), self.rank_at(i));
            for (r, s) in elt.iter().enumerate() {
                if coeff.is_zero(s) || i + self.ring.graded.degrees[r] != out_deg {
                    continue;
                }
                out = out.add(&coeff, &self.action_at(r, i).scale(&coeff, s));
            }
            out
        };
        for i in self.lo..=hi {
            if elt_action(&unit, i, i) != Matrix::identity(&coeff, self.rank_at(i)) {
                report.push(format!("degree {i}"), "unit does not act as the identity");
            }
        }
        let basis = |r: usize| -> Vec<Scalar> {
            let mut v = vec![coeff.zero(); nr];
            v[r] = coeff.one();
            v
        };
        for r in 0..nr {
            for s in 0..nr {
                let prod = self.ring.graded.multiply(&basis(r), &basis(s));
                let dr = self.ring.graded.degrees[r];
                let ds = self.ring.graded.degrees[s];
                for i in self.lo..=hi {
                    let lhs = self.action_at(r, i + ds).mul(&coeff, &self.action_at(s, i));
                    let rhs = elt_action(&prod, i, i + dr + ds);
                    if lhs != rhs {
                        report.push(
                            format!("action associativity ({r},{s}) at degree {i}"),
                            "routes differ",
                        );
                    }
                }
            }
        }
        // Leibniz: d(a m) = d_B(a) m + (-1)^|a| a d(m)
        for r in 0..nr {
            let dr = self.ring.graded.degrees[r];
            let d_of_r = self.ring.derivation.apply(&coeff, &basis(r));
            for i in self.lo - 1..=hi {
                let lhs = self.d_at(i + dr).mul(&coeff, &self.action_at(r, i));
                let sign = coeff.from_i64(if dr.rem_euclid(2) == 0 { 1 } else { -1 });
                let mut rhs = self
                    .action_at(r, i + 1)
                    .mul(&coeff, &self.d_at(i))
                    .scale(&coeff, &sign);
                rhs = rhs.add(&coeff, &elt_action(&d_of_r, i, i + dr + 1));
                if lhs != rhs {
                    report.push(format!("Leibniz for basis {r} at degree {i}"), "fails");
                }
            }
        }
        // d^2 = h .
        for i in self.lo - 1..=hi {
            let d2 = self.d_at(i + 1).mul(&coeff, &self.d_at(i));
            let h = self.curvature_action_at(i);
            if d2 != h {
                report.push(
                    format!("degree {i}"),
                    "d^2 differs from the curvature action (residual d^2 - h . is nonzero)",
                );
            }
        }
        report
    }
}

/// The underlying complex, available only when the curvature acts by zero.
pub fn underlying_complex_checked(m: &CDGModule) -> Result<ChainComplex, CdgError> {
    if m.is_curved() {
        return Err(CdgError::Curved);
    }
    Ok(ChainComplex::new(
        m.ring.coeff(),
        m.lo,
        m.ranks.clone(),
        m.d.clone(),
        None,
        None,
    )?)
}

/// Solution-space basis of graded module-linear maps of one degree, with
/// the Koszul sign `f(a m) = (-1)^(|f||a|) a f(m)`.
fn linear_basis(
    m: &CDGModule,
    n: &CDGModule,
    deg: i64,
) -> (Vec<(i64, usize, usize, usize)>, Matrix) {
    let coeff = m.ring.coeff();
    let mut blocks = Vec::new();
    let mut dim = 0;
    for i in m.lo..=m.hi() {
        let rows = n.rank_at(i + deg);
        let cols = m.rank_at(i);
        if rows * cols > 0 {
            blocks.push((i, dim, rows, cols));
            dim += rows * cols;
        }
    }
    if dim == 0 {
        return (blocks, Matrix::zero(&coeff, 0, 0));
    }
    let nr = m.ring.graded.dim();
    let mut rows_mat: Vec<Matrix> = Vec::new();
    for r in 0..nr {
        let dr = m.ring.graded.degrees[r];
        for i in m.lo - dr.abs() - 1..=m.hi() + dr.abs() + 1 {
            let out_rows = n.rank_at(i + dr + deg);
            let out_cols = m.rank_at(i);
            if out_rows * out_cols == 0 {
                continue;
            }
            let mut eq = Matrix::zero(&coeff, out_rows * out_cols, dim);
            if let Some(&(_, off, _frows, fcols)) = blocks.iter().find(|&&(j, ..)| j == i + dr) {
                let act = m.action_at(r, i);
                for rr in 0..out_rows {
                    for cc in 0..out_cols {
                        for k in 0..fcols {
                            let idx = off + rr * fcols + k;
                            *eq.at_mut(rr * out_cols + cc, idx) =
                                coeff.add(eq.at(rr * out_cols + cc, idx), act.at(k, cc));
                        }
                    }
                }
            }
            if let Some(&(_, off, frows, fcols)) = blocks.iter().find(|&&(j, ..)| j == i) {
                let act = n.action_at(r, i + deg);
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
            rows_mat.push(eq);
        }
    }
    let basis = if rows_mat.is_empty() {
        Matrix::identity(&coeff, dim)
    } else {
        let refs: Vec<&Matrix> = rows_mat.iter().collect();
        matrix::kernel_basis(&coeff, &Matrix::vstack(&coeff, &refs))
    };
    (blocks, basis)
}

fn decode_block(
    coeff: &Coefficient,
    blocks: &[(i64, usize, usize, usize)],
    flat: &[Scalar],
    i: i64,
) -> Option<Matrix> {
    blocks.iter().find(|&&(j, ..)| j == i).map(|&(_, off, rows, cols)| {
        let _ = coeff;
        Matrix::new(rows, cols, flat[off..off + rows * cols].to_vec())
    })
}

/// Hom complex of two CDG-modules over the same ring. `d(f) = d_N . f -
/// (-1)^|f| f . d_M` squares to zero because the curvature terms cancel;
/// the constructor re-verifies this exactly.
pub struct CdgHom {
    pub complex: ChainComplex,
    pub bases: BTreeMap<i64, (Vec<(i64, usize, usize, usize)>, Matrix)>,
}

pub fn cdg_hom_complex(m: &CDGModule, n: &CDGModule) -> Result<CdgHom, CdgError> {
    if m.ring != n.ring {
        return Err(CdgError::RingMismatch);
    }
    let coeff = m.ring.coeff();
    if m.ranks.is_empty() || n.ranks.is_empty() {
        return Ok(CdgHom { complex: ChainComplex::zero(coeff), bases: BTreeMap::new() });
    }
    let lo = n.lo - m.hi();
    let hi = n.hi() - m.lo;
    let mut bases = BTreeMap::new();
    for d in lo..=hi {
        bases.insert(d, linear_basis(m, n, d));
    }
    let ranks: Vec<usize> = (lo..=hi).map(|d| bases[&d].1.cols()).collect();
    let mut diffs: Vec<Matrix> = Vec::new();
    for dd in lo..hi {
        let (src_blocks, src_basis) = &bases[&dd];
        let (tgt_blocks, tgt_basis) = &bases[&(dd + 1)];
        let mut out = Matrix::zero(&coeff, tgt_basis.cols(), src_basis.cols());
        let sign = coeff.from_i64(if dd.rem_euclid(2) == 0 { -1 } else { 1 });
        for col in 0..src_basis.cols() {
            let flat: Vec<Scalar> =
                (0..src_basis.rows()).map(|r| src_basis.at(r, col).clone()).collect();
            let mut out_flat = vec![coeff.zero(); tgt_basis.rows()];
            for &(i, toff, trows, tcols) in tgt_blocks {
                let mut block = Matrix::zero(&coeff, trows, tcols);
                if let Some(f_i) = decode_block(&coeff, src_blocks, &flat, i) {
                    block = block.add(&coeff, &n.d_at(i + dd).mul(&coeff, &f_i));
                }
                if let Some(f_i1) = decode_block(&coeff, src_blocks, &flat, i + 1) {
                    block = block.add(&coeff, &f_i1.mul(&coeff, &m.d_at(i)).scale(&coeff, &sign));
                }
                for rr in 0..trows {
                    for cc in 0..tcols {
                        out_flat[toff + rr * tcols + cc] = block.at(rr, cc).clone();
                    }
                }
            }
            let expressed = matrix::solve(&coeff, tgt_basis, &out_flat).ok_or_else(|| {
                CdgError::Invalid("hom differential leaves the module-linear subspace".into())
            })?;
            for r in 0..out.rows() {
                *out.at_mut(r, col) = expressed[r].clone();
            }
        }
        diffs.push(out);
    }
    // the validating constructor re-checks d^2 = 0, i.e. the cancellation
    let complex = ChainComplex::new(coeff, lo, ranks, diffs, None, None).map_err(|e| {
        CdgError::Invalid(format!("curvature terms failed to cancel: {e}"))
    })?;
    Ok(CdgHom { complex, bases })
}

/// Package a list of CDG-modules into the DG-category of their hom
/// complexes, validated.
pub fn cdg_dg_category(
    modules: &[CDGModule],
    labels: &[String],
) -> Result<SmallDGCategory, CdgError> {
    if modules.is_empty() {
        return Err(CdgError::Invalid("at least one module required".into()));
    }
    let ring = &modules[0].ring;
    for m in modules {
        if &m.ring != ring {
            return Err(CdgError::RingMismatch);
        }
        let report = m.validate();
        if !report.is_valid() {
            return Err(CdgError::Invalid(format!("module invalid: {report}")));
        }
    }
    let coeff = ring.coeff();
    let k = modules.len();
    let mut homs: Vec<Vec<ChainComplex>> = vec![Vec::new(); k];
    let mut all_bases: BTreeMap<(usize, usize), CdgHom> = BTreeMap::new();
    for a in 0..k {
        for b in 0..k {
            let hom = cdg_hom_complex(&modules[a], &modules[b])?;
            homs[a].push(hom.complex.clone());
            all_bases.insert((a, b), hom);
        }
    }
    let mut comp: BTreeMap<(usize, usize, usize), BTreeMap<(i64, i64), Matrix>> = BTreeMap::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let mut tables = BTreeMap::new();
                let hab = &homs[a][b];
                let hbc = &homs[b][c];
                let hac = &homs[a][c];
                let (ablo, abhi) = hab.window();
                let (bclo, bchi) = hbc.window();
                for mdeg in ablo..=abhi {
                    for ng in bclo..=bchi {
                        let rf = hab.rank_at(mdeg);
                        let rg = hbc.rank_at(ng);
                        if rf * rg == 0 || hac.rank_at(mdeg + ng) == 0 {
                            continue;
                        }
                        let out_rank = hac.rank_at(mdeg + ng);
                        let mut table = Matrix::zero(&coeff, out_rank, rg * rf);
                        let (ab_blocks, ab_basis) = &all_bases[&(a, b)].bases[&mdeg];
                        let (bc_blocks, bc_basis) = &all_bases[&(b, c)].bases[&ng];
                        let (ac_blocks, ac_basis) = &all_bases[&(a, c)].bases[&(mdeg + ng)];
                        for u in 0..rg {
                            let gflat: Vec<Scalar> =
                                (0..bc_basis.rows()).map(|r| bc_basis.at(r, u).clone()).collect();
                            for v in 0..rf {
                                let fflat: Vec<Scalar> = (0..ab_basis.rows())
                                    .map(|r| ab_basis.at(r, v).clone())
                                    .collect();
                                let mut out_flat = vec![coeff.zero(); ac_basis.rows()];
                                for &(i, toff, trows, tcols) in ac_blocks {
                                    let f_i = decode_block(&coeff, ab_blocks, &fflat, i);
                                    let g_mid = decode_block(&coeff, bc_blocks, &gflat, i + mdeg);
                                    if let (Some(f_i), Some(g_mid)) = (f_i, g_mid) {
                                        let block = g_mid.mul(&coeff, &f_i);
                                        debug_assert_eq!(
                                            (block.rows(), block.cols()),
                                            (trows, tcols)
                                        );
                                        for rr in 0..trows {
                                            for cc in 0..tcols {
                                                out_flat[toff + rr * tcols + cc] =
                                                    block.at(rr, cc).clone();
                                            }
                                        }
                                    }
                                }
                                let expressed = matrix::solve(&coeff, ac_basis, &out_flat)
                                    .ok_or_else(|| {
                                        CdgError::Invalid(
                                            "composite leaves the module-linear subspace".into(),
                                        )
                                    })?;
                                for r in 0..out_rank {
                                    *table.at_mut(r, u * rf + v) = expressed[r].clone();
                                }
                            }
                        }
                        tables.insert((ng, mdeg), table);
                    }
                }
                comp.insert((a, b, c), tables);
            }
        }
    }
    let mut ids = Vec::new();
    for a in 0..k {
        let (blocks, basis) = &all_bases[&(a, a)].bases[&0];
        let mut flat = vec![coeff.zero(); basis.rows()];
        for &(i, off, rows, cols) in blocks {
            debug_assert_eq!(rows, cols);
            let _ = i;
            for r in 0..rows {
                flat[off + r * cols + r] = coeff.one();
            }
        }
        let expressed = matrix::solve(&coeff, basis, &flat)
            .ok_or_else(|| CdgError::Invalid("identity is not module-linear".into()))?;
        ids.push(expressed);
    }
    let cat = SmallDGCategory { coeff, objects: labels.to_vec(), homs, comp, ids };
    let report = cat.validate();
    if !report.is_valid() {
        return Err(CdgError::Invalid(format!("packaged category invalid: {report}")));
    }
    Ok(cat)
}

/// Degreewise short exact sequence of CDG-modules with closed structure
/// maps.
#[derive(Clone, Debug)]
pub struct CdgExactTriple {
    pub sub: CDGModule,
    pub total: CDGModule,
    pub quotient: CDGModule,
    /// degreewise matrices `sub -> total`, indexed from `total.lo`
    pub incl: Vec<Matrix>,
    /// degreewise matrices `total -> quotient`
    pub proj: Vec<Matrix>,
}

impl CdgExactTriple {
    fn incl_at(&self, i: i64) -> Matrix {
        let coeff = self.total.ring.coeff();
        if i >= self.total.lo && i <= self.total.hi() {
            self.incl[(i - self.total.lo) as usize].clone()
        } else {
            Matrix::zero(&coeff, self.total.rank_at(i), self.sub.rank_at(i))
        }
    }

    fn proj_at(&self, i: i64) -> Matrix {
        let coeff = self.total.ring.coeff();
        if i >= self.total.lo && i <= self.total.hi() {
            self.proj[(i - self.total.lo) as usize].clone()
        } else {
            Matrix::zero(&coeff, self.quotient.rank_at(i), self.total.rank_at(i))
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (name, m) in [("sub", &self.sub), ("total", &self.total), ("quotient", &self.quotient)]
        {
            report.merge(name, m.validate());
        }
        if self.sub.ring != self.total.ring || self.quotient.ring != self.total.ring {
            report.push("rings", "triple members live over different rings");
        }
        if !report.is_valid() {
            return report;
        }
        let coeff = self.total.ring.coeff();
        let lo = self.total.lo.min(self.sub.lo).min(self.quotient.lo) - 1;
        let hi = self.total.hi().max(self.sub.hi()).max(self.quotient.hi()) + 1;
        if self.incl.len() != self.total.ranks.len() || self.proj.len() != self.total.ranks.len() {
            report.push("maps", "map families must be indexed by the middle window");
            return report;
        }
        for i in lo..=hi {
            let vi = self.incl_at(i);
            let vp = self.proj_at(i);
            if vi.rows() != self.total.rank_at(i)
                || vi.cols() != self.sub.rank_at(i)
                || vp.rows() != self.quotient.rank_at(i)
                || vp.cols() != self.total.rank_at(i)
            {
                report.push(format!("degree {i}"), "map shape mismatch");
                return report;
            }
        }
        // closed module maps: commute with d and with every ring action
        for i in lo..hi {
            if self.incl_at(i + 1).mul(&coeff, &self.sub.d_at(i))
                != self.total.d_at(i).mul(&coeff, &self.incl_at(i))
            {
                report.push(format!("degree {i}"), "inclusion does not commute with d");
            }
            if self.proj_at(i + 1).mul(&coeff, &self.total.d_at(i))
                != self.quotient.d_at(i).mul(&coeff, &self.proj_at(i))
            {
                report.push(format!("degree {i}"), "projection does not commute with d");
            }
        }
        for r in 0..self.total.ring.graded.dim() {
            let dr = self.total.ring.graded.degrees[r];
            for i in lo..=hi {
                if self.incl_at(i + dr).mul(&coeff, &self.sub.action_at(r, i))
                    != self.total.action_at(r, i).mul(&coeff, &self.incl_at(i))
                {
                    report.push(format!("degree {i}"), "inclusion is not module-linear");
                }
                if self.proj_at(i + dr).mul(&coeff, &self.total.action_at(r, i))
                    != self.quotient.action_at(r, i).mul(&coeff, &self.proj_at(i))
                {
                    report.push(format!("degree {i}"), "projection is not module-linear");
                }
            }
        }
        // degreewise exactness
        for i in lo..=hi {
            let vi = self.incl_at(i);
            let vp = self.proj_at(i);
            if !vp.mul(&coeff, &vi).is_zero(&coeff) {
                report.push(format!("degree {i}"), "projection . inclusion != 0");
                continue;
            }
            let ri = matrix::rank(&coeff, &vi);
            let rp = matrix::rank(&coeff, &vp);
            if ri != self.sub.rank_at(i) {
                report.push(format!("degree {i}"), "inclusion is not injective");
            }
            if rp != self.quotient.rank_at(i) {
                report.push(format!("degree {i}"), "projection is not surjective");
            }
            if matrix::nullity(&coeff, &vp) != ri {
                report.push(format!("degree {i}"), "image differs from kernel");
            }
        }
        report
    }
}

/// Total CDG-module of an exact triple: same three-column layout as the
/// chain-level totalization, vertical operator negated in the middle
/// column, actions blockwise. The result is validated (this constrains the
/// base ring to have zero derivation, which every shipped fixture does).
pub fn totalize_cdg_triple(t: &CdgExactTriple) -> Result<CDGModule, CdgError> {
    let report = t.validate();
    if !report.is_valid() {
        return Err(CdgError::Invalid(format!("exactness fails: {report}")));
    }
    let ring = t.total.ring.clone();
    let coeff = ring.coeff();
    let lo = t.sub.lo.min(t.total.lo + 1).min(t.quotient.lo + 2);
    let hi = t.sub.hi().max(t.total.hi() + 1).max(t.quotient.hi() + 2);
    let ranks: Vec<usize> = (lo..=hi)
        .map(|n| t.sub.rank_at(n) + t.total.rank_at(n - 1) + t.quotient.rank_at(n - 2))
        .collect();
    let d: Vec<Matrix> = (lo..hi)
        .map(|n| {
            let dk = t.sub.d_at(n);
            let i_n = t.incl_at(n);
            let dm = t.total.d_at(n - 1).neg(&coeff);
            let p_n = t.proj_at(n - 1);
            let dq = t.quotient.d_at(n - 2);
            let z_km = Matrix::zero(&coeff, t.sub.rank_at(n + 1), t.total.rank_at(n - 1));
            let z_kq = Matrix::zero(&coeff, t.sub.rank_at(n + 1), t.quotient.rank_at(n - 2));
            let z_mq = Matrix::zero(&coeff, t.total.rank_at(n), t.quotient.rank_at(n - 2));
            let z_qk = Matrix::zero(&coeff, t.quotient.rank_at(n - 1), t.sub.rank_at(n));
            Matrix::from_blocks(
                &coeff,
                &[
                    vec![&dk, &z_km, &z_kq],
                    vec![&i_n, &dm, &z_mq],
                    vec![&z_qk, &p_n, &dq],
                ],
            )
        })
        .collect();
    let action: Vec<Vec<Matrix>> = (0..ring.graded.dim())
        .map(|r| {
            (lo..=hi)
                .map(|n| {
                    let a = t.sub.action_at(r, n);
                    let b = t.total.action_at(r, n - 1);
                    let c = t.quotient.action_at(r, n - 2);
                    Matrix::block_diag(&coeff, &[&a, &b, &c])
                })
                .collect()
        })
        .collect();
    let out = CDGModule { ring, lo, ranks, d, action };
    let report = out.validate();
    if !report.is_valid() {
        return Err(CdgError::Invalid(format!("totalization failed validation: {report}")));
    }
    Ok(out)
}

/// Leaf-style certificate check in the CDG category: the totalization of a
/// validated exact triple must equal `x` bit for bit.
pub fn check_cdg_leaf_certificate(t: &CdgExactTriple, x: &CDGModule) -> Result<(), CdgError> {
    let tot = totalize_cdg_triple(t)?;
    if &tot != x {
        return Err(CdgError::Invalid(
            "totalization does not equal the certified module".into(),
        ));
    }
    Ok(())
}

/// `F_p[u]/(u^4)` with `|u| = 1`, zero derivation and curvature `h = u^2`.
pub fn truncated_polynomial_cdg_ring(coeff: Coefficient) -> CDGRing {
    let one = coeff.one();
    // basis 1, u, u^2, u^3
    let mut mult = vec![vec![Vec::new(); 4]; 4];
    for i in 0..4usize {
        for j in 0..4usize {
            if i + j < 4 {
                mult[i][j] = vec![(i + j, one.clone())];
            }
        }
    }
    let graded = GradedRingPresentation {
        coeff,
        degrees: vec![0, 1, 2, 3],
        mult,
        unit: vec![(0, one.clone())],
        differential: None,
    };
    let mut curvature = vec![coeff.zero(); 4];
    curvature[2] = one;
    CDGRing { graded, derivation: Matrix::zero(&coeff, 4, 4), curvature }
}

/// Rank-1 matrix factorization over the truncated polynomial ring:
/// one generator in degree 0 with `d = u .`, so `d^2 = u^2 = h`.
pub fn factorization_rank_one(ring: &CDGRing) -> CDGModule {
    let coeff = ring.coeff();
    // degrees 0..3 with basis u^i e
    let ranks = vec![1, 1, 1, 1];
    let d = vec![
        Matrix::identity(&coeff, 1),
        Matrix::identity(&coeff, 1),
        Matrix::identity(&coeff, 1),
    ];
    let action = action_for_free_rank(ring, 4, 1);
    CDGModule { ring: ring.clone(), lo: 0, ranks, d, action }
}

/// Rank-2 matrix factorization: generators `e0, e1` in degree 0 with
/// `d(e0) = u e1` and `d(e1) = u e0`.
pub fn factorization_rank_two(ring: &CDGRing) -> CDGModule {
    let coeff = ring.coeff();
    let ranks = vec![2, 2, 2, 2];
    let swap = Matrix::from_rows_i64(&coeff, &[&[0, 1], &[1, 0]]);
    let d = vec![swap.clone(), swap.clone(), swap];
    let action = action_for_free_rank(ring, 4, 2);
    CDGModule { ring: ring.clone(), lo: 0, ranks, d, action }
}

/// Free-module action over the truncated polynomial ring: `u^r` shifts the
/// power grading, identically on the generator slots.
fn action_for_free_rank(ring: &CDGRing, height: usize, gen_rank: usize) -> Vec<Vec<Matrix>> {
    let coeff = ring.coeff();
    (0..ring.graded.dim())
        .map(|r| {
            (0..height)
                .map(|i| {
                    let dr = ring.graded.degrees[r] as usize;
                    if i + dr < height {
                        Matrix::identity(&coeff, gen_rank)
                    } else {
                        Matrix::zero(&coeff, 0, gen_rank)
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;

    fn f2() -> Coefficient {
        Coefficient::fp(2).unwrap()
    }

    #[test]
    fn uncurved_trivial_ring_is_valid() {
        let coeff = f2();
        let graded = crate::dgcat::dual_numbers_ring(coeff);
        let ring = CDGRing {
            graded: graded.clone(),
            derivation: Matrix::zero(&coeff, 2, 2),
            curvature: vec![coeff.zero(); 2],
        };
        assert!(ring.validate().is_valid());
    }

    #[test]
    fn truncated_polynomial_ring_validates() {
        let ring = truncated_polynomial_cdg_ring(f2());
        assert!(ring.validate().is_valid());
    }

    #[test]
    fn matrix_factorizations_validate_and_are_curved() {
        let ring = truncated_polynomial_cdg_ring(f2());
        for m in [factorization_rank_one(&ring), factorization_rank_two(&ring)] {
            let report = m.validate();
            assert!(report.is_valid(), "{report}");
            assert!(m.is_curved());
            // d^2 = h . is confirmed separately and is nonzero
            let coeff = ring.coeff();
            let d2 = m.d_at(1).mul(&coeff, &m.d_at(0));
            assert!(!d2.is_zero(&coeff));
            assert_eq!(d2, m.curvature_action_at(0));
        }
    }

    #[test]
    fn sign_flip_in_d_is_reported() {
        let ring = truncated_polynomial_cdg_ring(f2());
        let mut m = factorization_rank_two(&ring);
        m.d[1] = Matrix::identity(&f2(), 2); // breaks d^2 = h
        let report = m.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.message.contains("d^2 differs from the curvature")));
    }

    #[test]
    fn homology_of_curved_module_is_refused() {
        let ring = truncated_polynomial_cdg_ring(f2());
        let m = factorization_rank_one(&ring);
        assert!(matches!(underlying_complex_checked(&m), Err(CdgError::Curved)));
    }

    #[test]
    fn hom_complex_squares_to_zero_despite_curvature() {
        let ring = truncated_polynomial_cdg_ring(f2());
        let m1 = factorization_rank_one(&ring);
        let m2 = factorization_rank_two(&ring);
        for (a, b) in [(&m1, &m1), (&m1, &m2), (&m2, &m1), (&m2, &m2)] {
            let hom = cdg_hom_complex(a, b).unwrap();
            // d^2 = 0 was re-verified by the validating constructor
            assert!(hom.complex.validate().is_valid());
        }
        // identity survives in H^0 of End(M1)
        let end1 = cdg_hom_complex(&m1, &m1).unwrap();
        assert!(end1.complex.homology(0).unwrap().free_rank >= 1);
    }

    #[test]
    fn packaged_category_validates() {
        let ring = truncated_polynomial_cdg_ring(f2());
        let m1 = factorization_rank_one(&ring);
        let m2 = factorization_rank_two(&ring);
        let cat = cdg_dg_category(&[m1, m2], &["mf1".into(), "mf2".into()]).unwrap();
        assert!(cat.validate().is_valid());
        let budget = Budget::new(50_000_000);
        assert!(crate::dgcat::h0_well_defined(&cat, &budget).unwrap());
    }

    #[test]
    fn uncurved_case_agrees_with_dg_path_bit_exactly() {
        let coeff = f2();
        let graded = crate::dgcat::dual_numbers_ring(coeff);
        let cdg_ring = CDGRing {
            graded: graded.clone(),
            derivation: Matrix::zero(&coeff, 2, 2),
            curvature: vec![coeff.zero(); 2],
        };
        // R -x-> R in degrees [0,1] both as a CDG-module and a DG-module
        let x = Matrix::from_rows_i64(&coeff, &[&[0, 0], &[1, 0]]);
        let cdg_m = CDGModule {
            ring: cdg_ring.clone(),
            lo: 0,
            ranks: vec![2, 2],
            d: vec![x.clone()],
            action: vec![
                vec![Matrix::identity(&coeff, 2), Matrix::identity(&coeff, 2)],
                vec![x.clone(), x.clone()],
            ],
        };
        assert!(cdg_m.validate().is_valid());
        assert!(!cdg_m.is_curved());
        let dg_m = crate::dgcat::DGModulePresentation {
            ring: graded.clone(),
            underlying: underlying_complex_checked(&cdg_m).unwrap(),
            action: vec![
                vec![Matrix::identity(&coeff, 2), Matrix::identity(&coeff, 2)],
                vec![x.clone(), x],
            ],
        };
        let via_cdg = cdg_hom_complex(&cdg_m, &cdg_m).unwrap().complex;
        let via_dg = crate::dgcat::module_dg_category(&graded, &[dg_m], &["M".into()])
            .unwrap()
            .cat
            .homs[0][0]
            .clone();
        assert_eq!(via_cdg, via_dg);
    }

    #[test]
    fn split_triple_totalizes_and_certifies() {
        let ring = truncated_polynomial_cdg_ring(f2());
        let coeff = ring.coeff();
        let m1 = factorization_rank_one(&ring);
        let m2 = factorization_rank_two(&ring);
        // split triple m1 -> m1 (+) m2 -> m2
        let total = CDGModule {
            ring: ring.clone(),
            lo: 0,
            ranks: (0..4).map(|i| m1.ranks[i] + m2.ranks[i]).collect(),
            d: (0..3)
                .map(|i| Matrix::block_diag(&coeff, &[&m1.d[i], &m2.d[i]]))
                .collect(),
            action: (0..ring.graded.dim())
                .map(|r| {
                    (0..4)
                        .map(|i| {
                            Matrix::block_diag(
                                &coeff,
                                &[&m1.action[r][i], &m2.action[r][i]],
                            )
                        })
                        .collect()
                })
                .collect(),
        };
        assert!(total.validate().is_valid());
        let incl: Vec<Matrix> = (0..4)
            .map(|i| {
                let id = Matrix::identity(&coeff, m1.ranks[i]);
                let z = Matrix::zero(&coeff, m2.ranks[i], m1.ranks[i]);
                Matrix::vstack(&coeff, &[&id, &z])
            })
            .collect();
        let proj: Vec<Matrix> = (0..4)
            .map(|i| {
                let z = Matrix::zero(&coeff, m2.ranks[i], m1.ranks[i]);
                let id = Matrix::identity(&coeff, m2.ranks[i]);
                Matrix::hstack(&coeff, &[&z, &id])
            })
            .collect();
        let triple = CdgExactTriple { sub: m1, total, quotient: m2, incl, proj };
        assert!(triple.validate().is_valid());
        let tot = totalize_cdg_triple(&triple).unwrap();
        assert!(check_cdg_leaf_certificate(&triple, &tot).is_ok());
        // a mutated target is rejected
        let mut wrong = tot.clone();
        let flipped = coeff.add(wrong.d[0].at(0, 0), &coeff.one());
        *wrong.d[0].at_mut(0, 0) = flipped;
        assert!(check_cdg_leaf_certificate(&triple, &wrong).is_err());
    }
}
