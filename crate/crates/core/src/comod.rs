//! Finite-dimensional coalgebras, comodules and contramodules, the
//! contratensor product, and the correspondence functors between cofree
//! comodules and free contramodules.
//!
//! Everything is plain exact linear algebra: tensor legs are flattened
//! row-major with the first factor most significant, and `Hom(C, P)` is
//! flattened with the `C`-leg most significant, so `phi_(i,j)` sends the
//! `i`-th basis vector of `C` to the `j`-th basis vector of `P`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::matrix::{self, Matrix};
use crate::report::ValidationReport;
use crate::scalar::Coefficient;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComodError {
    Invalid(String),
    CoalgebraMismatch,
    NoIsomorphism(String),
    DifferentialUnsupported,
}

impl fmt::Display for ComodError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComodError::Invalid(s) => write!(f, "invalid coalgebra data: {s}"),
            ComodError::CoalgebraMismatch => write!(f, "objects live over different coalgebras"),
            ComodError::NoIsomorphism(s) => write!(f, "no isomorphism witness found: {s}"),
            ComodError::DifferentialUnsupported => {
                write!(f, "nonzero coalgebra differentials are not supported here")
            }
        }
    }
}

/// A finite-dimensional coalgebra over a field, optionally graded with a
/// (validated) degree-1 codifferential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    pub coeff: Coefficient,
    pub dim: usize,
    /// `dim^2 x dim`, value row `a*dim+b` = coefficient of `e_a (x) e_b`
    pub comult: Matrix,
    /// `1 x dim`
    pub counit: Matrix,
    pub degrees: Option<Vec<i64>>,
    pub differential: Option<Matrix>,
}

impl Coalgebra {
    /// The trivial coalgebra `k`.
    pub fn trivial(coeff: Coefficient) -> Coalgebra {
        Coalgebra {
            coeff,
            dim: 1,
            comult: Matrix::identity(&coeff, 1),
            counit: Matrix::identity(&coeff, 1),
            degrees: None,
            differential: None,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let c = &self.coeff;
        if !c.is_field() {
            report.push("coefficient", "coalgebras require a field");
            return report;
        }
        let d = self.dim;
        if self.comult.rows() != d * d || self.comult.cols() != d {
            report.push("comultiplication", "matrix must be dim^2 x dim");
            return report;
        }
        if self.counit.rows() != 1 || self.counit.cols() != d {
            report.push("counit", "matrix must be 1 x dim");
            return report;
        }
        let id = Matrix::identity(c, d);
        let lhs = self.comult.kron(c, &id).mul(c, &self.comult);
        let rhs = id.kron(c, &self.comult).mul(c, &self.comult);
        if lhs != rhs {
            report.push("coassociativity", "the two iterated comultiplications differ");
        }
        let left_counit = self.counit.kron(c, &id).mul(c, &self.comult);
        let right_counit = id.kron(c, &self.counit).mul(c, &self.comult);
        if left_counit != id {
            report.push("counit", "left counit law fails");
        }
        if right_counit != id {
            report.push("counit", "right counit law fails");
        }
        if let Some(diff) = &self.differential {
            let Some(degrees) = &self.degrees else {
                report.push("differential", "a differential requires a grading");
                return report;
            };
            if diff.rows() != d || diff.cols() != d {
                report.push("differential", "wrong shape");
                return report;
            }
            for r in 0..d {
                for col in 0..d {
                    if !c.is_zero(diff.at(r, col)) && degrees[r] != degrees[col] + 1 {
                        report.push("differential", "entry violates degree +1");
                    }
                }
            }
            if !diff.mul(c, diff).is_zero(c) {
                report.push("differential", "d^2 != 0");
            }
            // coderivation: comult . d = (d (x) 1 + sign . (1 (x) d)) . comult
            let sign_block = {
                let mut m = Matrix::zero(c, d * d, d * d);
                for a in 0..d {
                    let s = c.from_i64(if degrees[a].rem_euclid(2) == 0 { 1 } else { -1 });
                    for b in 0..d {
                        *m.at_mut(a * d + b, a * d + b) = s.clone();
                    }
                }
                m
            };
            let lhs = self.comult.mul(c, diff);
            let rhs = diff
                .kron(c, &id)
                .add(c, &sign_block.mul(c, &id.kron(c, diff)))
                .mul(c, &self.comult);
            if lhs != rhs {
                report.push("differential", "coderivation law fails");
            }
        }
        report
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftComodule {
    pub coalgebra: Coalgebra,
    pub dim: usize,
    /// `N -> C (x) N`, `(dimC * dimN) x dimN`
    pub coaction: Matrix,
}

impl LeftComodule {
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.merge("coalgebra", self.coalgebra.validate());
        if !report.is_valid() {
            return report;
        }
        let c = &self.coalgebra.coeff;
        let dc = self.coalgebra.dim;
        let dn = self.dim;
        if self.coaction.rows() != dc * dn || self.coaction.cols() != dn {
            report.push("coaction", "matrix must be (dimC*dimN) x dimN");
            return report;
        }
        let idn = Matrix::identity(c, dn);
        let idc = Matrix::identity(c, dc);
        let lhs = self.coalgebra.comult.kron(c, &idn).mul(c, &self.coaction);
        let rhs = idc.kron(c, &self.coaction).mul(c, &self.coaction);
        if lhs != rhs {
            report.push("coassociativity square", "the two routes to C(x)C(x)N differ");
        }
        let counit_side = self.coalgebra.counit.kron(c, &idn).mul(c, &self.coaction);
        if counit_side != idn {
            report.push("counit triangle", "counit law fails");
        }
        report
    }

    /// Cofree comodule `C (x) V`.
    pub fn cofree(coalgebra: &Coalgebra, v_dim: usize) -> LeftComodule {
        let c = &coalgebra.coeff;
        let idv = Matrix::identity(c, v_dim);
        LeftComodule {
            coalgebra: coalgebra.clone(),
            dim: coalgebra.dim * v_dim,
            coaction: coalgebra.comult.kron(c, &idv),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightComodule {
    pub coalgebra: Coalgebra,
    pub dim: usize,
    /// `N -> N (x) C`, `(dimN * dimC) x dimN`
    pub coaction: Matrix,
}

impl RightComodule {
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.merge("coalgebra", self.coalgebra.validate());
        if !report.is_valid() {
            return report;
        }
        let c = &self.coalgebra.coeff;
        let dc = self.coalgebra.dim;
        let dn = self.dim;
        if self.coaction.rows() != dn * dc || self.coaction.cols() != dn {
            report.push("coaction", "matrix must be (dimN*dimC) x dimN");
            return report;
        }
        let idn = Matrix::identity(c, dn);
        let idc = Matrix::identity(c, dc);
        let lhs = self.coaction.kron(c, &idc).mul(c, &self.coaction);
        let rhs = idn.kron(c, &self.coalgebra.comult).mul(c, &self.coaction);
        if lhs != rhs {
            report.push("coassociativity square", "the two routes to N(x)C(x)C differ");
        }
        let counit_side = idn.kron(c, &self.coalgebra.counit).mul(c, &self.coaction);
        if counit_side != idn {
            report.push("counit triangle", "counit law fails");
        }
        report
    }

    /// `C` as a right comodule over itself.
    pub fn regular(coalgebra: &Coalgebra) -> RightComodule {
        RightComodule {
            coalgebra: coalgebra.clone(),
            dim: coalgebra.dim,
            coaction: coalgebra.comult.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftContramodule {
    pub coalgebra: Coalgebra,
    pub dim: usize,
    /// `Hom(C, P) -> P`, `dimP x (dimC * dimP)`, `Hom(C,P)` flattened with
    /// the `C`-leg most significant
    pub contraaction: Matrix,
}

/// Permutation matrix for the canonical `Hom(C, Hom(C, P)) ~ Hom(C (x) C, P)`
/// sending `psi` to `(a (x) b) -> psi(b)(a)`.
fn hom_hom_iso(coeff: &Coefficient, dc: usize, dp: usize) -> Matrix {
    let dim = dc * dc * dp;
    let mut m = Matrix::zero(coeff, dim, dim);
    for i in 0..dc {
        for i2 in 0..dc {
            for j in 0..dp {
                // psi = phi_(i, (i2, j)) maps to phi_((i2, i), j)
                let src = i * (dc * dp) + i2 * dp + j;
                let dst = (i2 * dc + i) * dp + j;
                *m.at_mut(dst, src) = coeff.one();
            }
        }
    }
    m
}

/// Evaluation `C (x) Hom(C, P) -> P`.
fn evaluation(coeff: &Coefficient, dc: usize, dp: usize) -> Matrix {
    let mut m = Matrix::zero(coeff, dp, dc * dc * dp);
    for i in 0..dc {
        for j in 0..dp {
            *m.at_mut(j, i * (dc * dp) + i * dp + j) = coeff.one();
        }
    }
    m
}

impl LeftContramodule {
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.merge("coalgebra", self.coalgebra.validate());
        if !report.is_valid() {
            return report;
        }
        let c = &self.coalgebra.coeff;
        let dc = self.coalgebra.dim;
        let dp = self.dim;
        if self.contraaction.rows() != dp || self.contraaction.cols() != dc * dp {
            report.push("contraaction", "matrix must be dimP x (dimC*dimP)");
            return report;
        }
        let idc = Matrix::identity(c, dc);
        let idp = Matrix::identity(c, dp);
        // contraassociativity
        let route1 = self.contraaction.mul(c, &idc.kron(c, &self.contraaction));
        let iso = hom_hom_iso(c, dc, dp);
        let precompose = self.coalgebra.comult.transpose().kron(c, &idp);
        let route2 = self.contraaction.mul(c, &precompose).mul(c, &iso);
        if route1 != route2 {
            report.push("contraassociativity square", "the two routes differ");
        }
        // counit triangle
        let from_counit = self.coalgebra.counit.transpose().kron(c, &idp);
        if self.contraaction.mul(c, &from_counit) != idp {
            report.push("counit triangle", "counit law fails");
        }
        report
    }

    /// Free contramodule `Hom(C, V)` with `alpha(g)(c) = g(c_2)(c_1)`.
    pub fn free(coalgebra: &Coalgebra, v_dim: usize) -> LeftContramodule {
        let c = &coalgebra.coeff;
        let dc = coalgebra.dim;
        let dp = dc * v_dim;
        let mut alpha = Matrix::zero(c, dp, dc * dp);
        // input phi_(i, (i2, w)): C -> Hom(C, V); output in Hom(C, V)
        for i in 0..dc {
            for i2 in 0..dc {
                for w in 0..v_dim {
                    let src = i * dp + i2 * v_dim + w;
                    // output at phi_(cc, w): coefficient comult[(i2, i), cc]
                    for cc in 0..dc {
                        let coefv = coalgebra.comult.at(i2 * dc + i, cc).clone();
                        if c.is_zero(&coefv) {
                            continue;
                        }
                        let dst = cc * v_dim + w;
                        *alpha.at_mut(dst, src) = c.add(alpha.at(dst, src), &coefv);
                    }
                }
            }
        }
        LeftContramodule { coalgebra: coalgebra.clone(), dim: dp, contraaction: alpha }
    }
}

/// Contratensor product presentation: dimension, canonical quotient basis
/// coordinates inside `N (x) P`, and the projection matrix.
pub struct Contratensor {
    pub dim: usize,
    pub basis_coords: Vec<usize>,
    pub projection: Matrix,
}

/// `N (.) P`: coequalizer of `id (x) alpha` and the coaction-evaluation
/// composite `N (x) Hom(C,P) -> N (x) P`.
pub fn contratensor(n: &RightComodule, p: &LeftContramodule) -> Result<Contratensor, ComodError> {
    if n.coalgebra != p.coalgebra {
        return Err(ComodError::CoalgebraMismatch);
    }
    let c = &n.coalgebra.coeff;
    let dc = n.coalgebra.dim;
    let dn = n.dim;
    let dp = p.dim;
    let idn = Matrix::identity(c, dn);
    let id_homcp = Matrix::identity(c, dc * dp);
    let m1 = idn.kron(c, &p.contraaction);
    let ev = evaluation(c, dc, dp);
    let m2 = idn.kron(c, &ev).mul(c, &n.coaction.kron(c, &id_homcp));
    let diff = m1.sub(c, &m2);
    let quot = matrix::cokernel(c, &diff);
    Ok(Contratensor { dim: quot.dim, basis_coords: quot.basis_coords, projection: quot.projection })
}

/// The contramodule of comodule maps `C -> N`, with the contraaction coming
/// from the right coaction of `C` on itself.
pub struct PsiResult {
    pub contramodule: LeftContramodule,
    /// kernel basis: columns are comodule maps, flattened in `Hom(C, N)`
    pub basis: Matrix,
}

pub fn psi(n: &LeftComodule) -> Result<PsiResult, ComodError> {
    let c = &n.coalgebra.coeff;
    let dc = n.coalgebra.dim;
    let dn = n.dim;
    // comodule-map condition: eta . f = (id (x) f) . comult
    let post = Matrix::identity(c, dc).kron(c, &n.coaction); // Hom(C,N) -> Hom(C, C(x)N)
    let mut twist = Matrix::zero(c, dc * dc * dn, dc * dn);
    // f |-> (id (x) f) . comult
    for b in 0..dc {
        for j in 0..dn {
            let src = b * dn + j;
            for i in 0..dc {
                for a in 0..dc {
                    let coefv = n.coalgebra.comult.at(a * dc + b, i).clone();
                    if c.is_zero(&coefv) {
                        continue;
                    }
                    let dst = i * (dc * dn) + a * dn + j;
                    *twist.at_mut(dst, src) = c.add(twist.at(dst, src), &coefv);
                }
            }
        }
    }
    let condition = post.sub(c, &twist);
    let basis = matrix::kernel_basis(c, &condition);
    let k = basis.cols();
    // contraaction on Hom_k(C, N) from the right coaction of C on itself:
    // alpha(psi)(c) = psi(c_2)(c_1)
    let mut alpha_raw = Matrix::zero(c, dc * dn, dc * dc * dn);
    for i in 0..dc {
        for i2 in 0..dc {
            for j in 0..dn {
                let src = i * (dc * dn) + i2 * dn + j;
                for cc in 0..dc {
                    let coefv = n.coalgebra.comult.at(i2 * dc + i, cc).clone();
                    if c.is_zero(&coefv) {
                        continue;
                    }
                    let dst = cc * dn + j;
                    *alpha_raw.at_mut(dst, src) = c.add(alpha_raw.at(dst, src), &coefv);
                }
            }
        }
    }
    // restrict: Hom(C, K) -> K
    let lift = Matrix::identity(c, dc).kron(c, &basis); // Hom(C,K) coords -> Hom(C, Hom(C,N))
    let image = alpha_raw.mul(c, &lift);
    let restricted = matrix::solve_matrix(c, &basis, &image).ok_or_else(|| {
        ComodError::Invalid("contraaction does not preserve comodule maps".into())
    })?;
    let contra = LeftContramodule {
        coalgebra: n.coalgebra.clone(),
        dim: k,
        contraaction: restricted,
    };
    let report = contra.validate();
    if !report.is_valid() {
        return Err(ComodError::Invalid(format!("psi output invalid: {report}")));
    }
    Ok(PsiResult { contramodule: contra, basis })
}

/// The comodule `C (.) P` with coaction induced from `C (x) P`.
pub struct PhiResult {
    pub comodule: LeftComodule,
    pub tensor: Contratensor,
}

pub fn phi(p: &LeftContramodule) -> Result<PhiResult, ComodError> {
    let c = &p.coalgebra.coeff;
    let dc = p.coalgebra.dim;
    let dp = p.dim;
    let n = RightComodule::regular(&p.coalgebra);
    let ct = contratensor(&n, p)?;
    // induced coaction: descend (id (x) proj) . (comult (x) id) through proj
    let idp = Matrix::identity(c, dp);
    let big = p.coalgebra.comult.kron(c, &idp); // C(x)P -> C(x)C(x)P
    let idc = Matrix::identity(c, dc);
    let to_quot = idc.kron(c, &ct.projection).mul(c, &big); // C(x)P -> C(x)Q
    // must kill the coequalizer relations
    let id_homcp = Matrix::identity(c, dc * dp);
    let m1 = idc.kron(c, &p.contraaction);
    let ev = evaluation(c, dc, dp);
    let m2 = idc.kron(c, &ev).mul(c, &n.coaction.kron(c, &id_homcp));
    let rel = m1.sub(c, &m2);
    if !to_quot.mul(c, &rel).is_zero(c) {
        return Err(ComodError::Invalid(
            "coaction fails to descend through the coequalizer".into(),
        ));
    }
    // coaction on quotient basis representatives
    let mut coaction = Matrix::zero(c, dc * ct.dim, ct.dim);
    for (q, &coord) in ct.basis_coords.iter().enumerate() {
        for r in 0..dc * ct.dim {
            *coaction.at_mut(r, q) = to_quot.at(r, coord).clone();
        }
    }
    let comodule = LeftComodule { coalgebra: p.coalgebra.clone(), dim: ct.dim, coaction };
    let report = comodule.validate();
    if !report.is_valid() {
        return Err(ComodError::Invalid(format!("phi output invalid: {report}")));
    }
    Ok(PhiResult { comodule, tensor: ct })
}

/// Explicit correspondence witnesses on (co)free objects.
pub struct CorrespondenceReport {
    pub comodule_dim: usize,
    pub contramodule_dim: usize,
    /// `Phi(Psi(C (x) V)) -> C (x) V`
    pub counit_witness: Matrix,
    /// `Hom(C, V) -> Psi(Phi(Hom(C, V)))`
    pub unit_witness: Matrix,
}

pub fn check_correspondence(
    coalgebra: &Coalgebra,
    v_dim: usize,
) -> Result<CorrespondenceReport, ComodError> {
    let c = &coalgebra.coeff;
    let dc = coalgebra.dim;
    // cofree side
    let n = LeftComodule::cofree(coalgebra, v_dim);
    let psi_n = psi(&n)?;
    let phi_psi_n = phi(&psi_n.contramodule)?;
    // evaluation C (x) Psi(N) -> N, c (x) f -> f(c)
    let k = psi_n.basis.cols();
    let mut ev = Matrix::zero(c, n.dim, dc * k);
    for i in 0..dc {
        for kappa in 0..k {
            for j in 0..n.dim {
                *ev.at_mut(j, i * k + kappa) = psi_n.basis.at(i * n.dim + j, kappa).clone();
            }
        }
    }
    // must vanish on the coequalizer relations
    let reg = RightComodule::regular(coalgebra);
    let id_homcp = Matrix::identity(c, dc * k);
    let m1 = Matrix::identity(c, dc).kron(c, &psi_n.contramodule.contraaction);
    let ev_c = evaluation(c, dc, k);
    let m2 = Matrix::identity(c, dc)
        .kron(c, &ev_c)
        .mul(c, &reg.coaction.kron(c, &id_homcp));
    let rel = m1.sub(c, &m2);
    if !ev.mul(c, &rel).is_zero(c) {
        return Err(ComodError::NoIsomorphism(
            "evaluation does not descend to the contratensor".into(),
        ));
    }
    let mut counit_witness = Matrix::zero(c, n.dim, phi_psi_n.tensor.dim);
    for (q, &coord) in phi_psi_n.tensor.basis_coords.iter().enumerate() {
        for r in 0..n.dim {
            *counit_witness.at_mut(r, q) = ev.at(r, coord).clone();
        }
    }
    if !matrix::is_invertible(c, &counit_witness) {
        return Err(ComodError::NoIsomorphism("counit witness is singular".into()));
    }
    // comodule morphism check
    let lhs = n.coaction.mul(c, &counit_witness);
    let rhs = Matrix::identity(c, dc)
        .kron(c, &counit_witness)
        .mul(c, &phi_psi_n.comodule.coaction);
    if lhs != rhs {
        return Err(ComodError::NoIsomorphism("counit witness is not a comodule map".into()));
    }
    // free side
    let p = LeftContramodule::free(coalgebra, v_dim);
    let phi_p = phi(&p)?;
    let psi_phi_p = psi(&phi_p.comodule)?;
    // unit: p -> (c -> [c (x) p])
    let mut unit_raw = Matrix::zero(c, dc * phi_p.tensor.dim, p.dim);
    for pp in 0..p.dim {
        for i in 0..dc {
            for l in 0..phi_p.tensor.dim {
                *unit_raw.at_mut(i * phi_p.tensor.dim + l, pp) =
                    phi_p.tensor.projection.at(l, i * p.dim + pp).clone();
            }
        }
    }
    let unit_witness = matrix::solve_matrix(c, &psi_phi_p.basis, &unit_raw).ok_or_else(|| {
        ComodError::NoIsomorphism("unit image is not a comodule map family".into())
    })?;
    if !matrix::is_invertible(c, &unit_witness) {
        return Err(ComodError::NoIsomorphism("unit witness is singular".into()));
    }
    // contramodule morphism check
    let lhs = unit_witness.mul(c, &p.contraaction);
    let rhs = psi_phi_p
        .contramodule
        .contraaction
        .mul(c, &Matrix::identity(c, dc).kron(c, &unit_witness));
    if lhs != rhs {
        return Err(ComodError::NoIsomorphism("unit witness is not a contramodule map".into()));
    }
    Ok(CorrespondenceReport {
        comodule_dim: n.dim,
        contramodule_dim: p.dim,
        counit_witness,
        unit_witness,
    })
}

/// The dual of `k[x]/(x^2)`: grouplike `1*` and primitive `x*`.
pub fn dual_numbers_coalgebra(coeff: Coefficient) -> Coalgebra {
    let mut comult = Matrix::zero(&coeff, 4, 2);
    // basis 0 = 1*, 1 = x*
    *comult.at_mut(0, 0) = coeff.one(); // 1* (x) 1*
    *comult.at_mut(1, 1) = coeff.one(); // 1* (x) x*
    *comult.at_mut(2, 1) = coeff.one(); // x* (x) 1*
    let mut counit = Matrix::zero(&coeff, 1, 2);
    *counit.at_mut(0, 0) = coeff.one();
    Coalgebra { coeff, dim: 2, comult, counit, degrees: None, differential: None }
}

/// Path coalgebra of the two-vertex quiver with one arrow: basis
/// `e1, e2, a` with `a` spanning the paths of length 1.
pub fn path_coalgebra_a2(coeff: Coefficient) -> Coalgebra {
    let mut comult = Matrix::zero(&coeff, 9, 3);
    let one = coeff.one();
    // e1 (x) e1 <- e1 ; e2 (x) e2 <- e2 ; e1 (x) a + a (x) e2 <- a
    *comult.at_mut(0, 0) = one.clone(); // (e1,e1) from e1
    *comult.at_mut(4, 1) = one.clone(); // (e2,e2) from e2
    *comult.at_mut(2, 2) = one.clone(); // (e1,a) from a
    *comult.at_mut(7, 2) = one.clone(); // (a,e2) from a
    let mut counit = Matrix::zero(&coeff, 1, 3);
    *counit.at_mut(0, 0) = one.clone();
    *counit.at_mut(0, 1) = one;
    Coalgebra { coeff, dim: 3, comult, counit, degrees: None, differential: None }
}

/// The 4-dimensional matrix coalgebra: basis `e_(rs)` with
/// `comult(e_(rs)) = sum_t e_(rt) (x) e_(ts)` and `counit(e_(rs)) = [r=s]`.
pub fn matrix_coalgebra_2(coeff: Coefficient) -> Coalgebra {
    let idx = |r: usize, s: usize| r * 2 + s;
    let mut comult = Matrix::zero(&coeff, 16, 4);
    for r in 0..2 {
        for s in 0..2 {
            for t in 0..2 {
                *comult.at_mut(idx(r, t) * 4 + idx(t, s), idx(r, s)) = coeff.one();
            }
        }
    }
    let mut counit = Matrix::zero(&coeff, 1, 4);
    *counit.at_mut(0, idx(0, 0)) = coeff.one();
    *counit.at_mut(0, idx(1, 1)) = coeff.one();
    Coalgebra { coeff, dim: 4, comult, counit, degrees: None, differential: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Coefficient {
        Coefficient::fp(2).unwrap()
    }

    fn f3() -> Coefficient {
        Coefficient::fp(3).unwrap()
    }

    #[test]
    fn fixture_coalgebras_validate() {
        assert!(Coalgebra::trivial(f2()).validate().is_valid());
        assert!(dual_numbers_coalgebra(f2()).validate().is_valid());
        assert!(path_coalgebra_a2(f3()).validate().is_valid());
        assert!(matrix_coalgebra_2(f3()).validate().is_valid());
    }

    #[test]
    fn mutated_comultiplication_fails() {
        let mut c = dual_numbers_coalgebra(f2());
        *c.comult.at_mut(1, 1) = c.coeff.zero(); // drop 1* (x) x* from comult(x*)
        let report = c.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.location.contains("counit")));
    }

    #[test]
    fn cofree_and_free_validate() {
        for c in [dual_numbers_coalgebra(f2()), path_coalgebra_a2(f3())] {
            for v in 1..=2 {
                assert!(LeftComodule::cofree(&c, v).validate().is_valid());
                assert!(LeftContramodule::free(&c, v).validate().is_valid());
            }
        }
        assert!(RightComodule::regular(&matrix_coalgebra_2(f3())).validate().is_valid());
    }

    #[test]
    fn trivial_coalgebra_contratensor_is_plain_tensor() {
        let c = Coalgebra::trivial(f2());
        let n = RightComodule::regular(&c);
        let p = LeftContramodule::free(&c, 3);
        let ct = contratensor(&n, &p).unwrap();
        assert_eq!(ct.dim, n.dim * p.dim);
    }

    #[test]
    fn contratensor_dimension_for_dual_numbers() {
        let c = dual_numbers_coalgebra(f2());
        let n = RightComodule::regular(&c);
        let p = LeftContramodule::free(&c, 1);
        let ct = contratensor(&n, &p).unwrap();
        // C (.) Hom(C, k) = C for the regular comodule: dimension dim C
        assert_eq!(ct.dim, 2);
    }

    #[test]
    fn contratensor_dimension_is_basis_independent() {
        let coeff = f2();
        let c = dual_numbers_coalgebra(coeff);
        let n = RightComodule::regular(&c);
        let p = LeftContramodule::free(&c, 2);
        let base = contratensor(&n, &p).unwrap().dim;
        // change of basis on N and P
        let tn = Matrix::from_rows_i64(&coeff, &[&[1, 1], &[0, 1]]);
        let tn_inv = Matrix::from_rows_i64(&coeff, &[&[1, 1], &[0, 1]]);
        let n2 = RightComodule {
            coalgebra: c.clone(),
            dim: n.dim,
            coaction: tn
                .kron(&coeff, &Matrix::identity(&coeff, c.dim))
                .mul(&coeff, &n.coaction)
                .mul(&coeff, &tn_inv),
        };
        assert!(n2.validate().is_valid());
        let tp = Matrix::from_rows_i64(
            &coeff,
            &[&[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
        );
        let tp_inv = Matrix::from_rows_i64(
            &coeff,
            &[&[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
        );
        let p2 = LeftContramodule {
            coalgebra: c.clone(),
            dim: p.dim,
            contraaction: tp
                .mul(&coeff, &p.contraaction)
                .mul(&coeff, &Matrix::identity(&coeff, c.dim).kron(&coeff, &tp_inv)),
        };
        assert!(p2.validate().is_valid());
        assert_eq!(contratensor(&n2, &p2).unwrap().dim, base);
    }

    #[test]
    fn psi_of_regular_comodule_has_coalgebra_dimension() {
        let c = dual_numbers_coalgebra(f2());
        let n = LeftComodule {
            coalgebra: c.clone(),
            dim: c.dim,
            coaction: c.comult.clone(),
        };
        assert!(n.validate().is_valid());
        let out = psi(&n).unwrap();
        assert_eq!(out.contramodule.dim, c.dim);
    }

    #[test]
    fn psi_of_cofree_has_full_dimension() {
        for c in [dual_numbers_coalgebra(f2()), path_coalgebra_a2(f3())] {
            for v in 1..=3 {
                let n = LeftComodule::cofree(&c, v);
                let out = psi(&n).unwrap();
                assert_eq!(out.contramodule.dim, c.dim * v);
            }
        }
    }

    #[test]
    fn phi_of_free_is_cofree_dimension() {
        for c in [dual_numbers_coalgebra(f2()), matrix_coalgebra_2(f3())] {
            for v in 1..=2 {
                let p = LeftContramodule::free(&c, v);
                let out = phi(&p).unwrap();
                assert_eq!(out.comodule.dim, c.dim * v);
            }
        }
    }

    #[test]
    fn phi_of_zero_is_zero() {
        let c = dual_numbers_coalgebra(f2());
        let p = LeftContramodule {
            coalgebra: c.clone(),
            dim: 0,
            contraaction: Matrix::zero(&c.coeff, 0, 0),
        };
        let out = phi(&p).unwrap();
        assert_eq!(out.comodule.dim, 0);
    }

    #[test]
    fn correspondence_on_trivial_coalgebra_is_identity() {
        let c = Coalgebra::trivial(f3());
        for v in 1..=3 {
            let rep = check_correspondence(&c, v).unwrap();
            assert_eq!(rep.comodule_dim, v);
            assert_eq!(rep.contramodule_dim, v);
            assert_eq!(rep.counit_witness, Matrix::identity(&c.coeff, v));
            assert_eq!(rep.unit_witness, Matrix::identity(&c.coeff, v));
        }
    }

    #[test]
    fn correspondence_on_fixture_coalgebras() {
        let fixtures = [
            dual_numbers_coalgebra(f2()),
            path_coalgebra_a2(f3()),
            matrix_coalgebra_2(f3()),
        ];
        for c in fixtures {
            for v in 1..=2 {
                let rep = check_correspondence(&c, v)
                    .unwrap_or_else(|e| panic!("dim {} v {v}: {e}", c.dim));
                assert_eq!(rep.comodule_dim, c.dim * v);
                assert_eq!(rep.contramodule_dim, c.dim * v);
            }
        }
    }

    #[test]
    fn psi_functoriality_commutes_with_contraactions() {
        let coeff = f2();
        let c = dual_numbers_coalgebra(coeff);
        let n = LeftComodule::cofree(&c, 1);
        let n2 = LeftComodule::cofree(&c, 2);
        // comodule map N -> N2: id (x) (inclusion k -> k^2)
        let incl = Matrix::from_rows_i64(&coeff, &[&[1], &[0]]);
        let g = Matrix::identity(&coeff, c.dim).kron(&coeff, &incl);
        // check comodule morphism
        let lhs = n2.coaction.mul(&coeff, &g);
        let rhs = Matrix::identity(&coeff, c.dim).kron(&coeff, &g).mul(&coeff, &n.coaction);
        assert_eq!(lhs, rhs);
        let pn = psi(&n).unwrap();
        let pn2 = psi(&n2).unwrap();
        // induced map on comodule-map spaces: postcompose with g
        let post = Matrix::identity(&coeff, c.dim).kron(&coeff, &g);
        let image = post.mul(&coeff, &pn.basis);
        let induced = matrix::solve_matrix(&coeff, &pn2.basis, &image).unwrap();
        // commutes with contraactions
        let lhs = induced.mul(&coeff, &pn.contramodule.contraaction);
        let rhs = pn2
            .contramodule
            .contraaction
            .mul(&coeff, &Matrix::identity(&coeff, c.dim).kron(&coeff, &induced));
        assert_eq!(lhs, rhs);
    }
}
