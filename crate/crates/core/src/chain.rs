//! Chain complexes of finite-rank free modules with exact arithmetic.
//!
//! The internal convention is cohomological: the differential has degree +1,
//! `d(i)` maps degree `i` to degree `i+1`, and the shift is
//! `(C[n])^i = C^(i+n)` with differential scaled by `(-1)^n`. A complex is a
//! finite window of ranks and differentials, optionally extended by a
//! periodic pattern on either side, so two-sided infinite objects such as a
//! periodic resolution are finite data. Constructors canonicalize windows
//! (trim zero edges, shrink redundant periodic padding) so equal complexes
//! compare equal bit for bit.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::matrix::{self, Matrix};
use crate::report::ValidationReport;
use crate::scalar::{Coefficient, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainError {
    Invalid(String),
    CoefficientMismatch,
    DegreeOutsideWindow(i64),
    PeriodicUnsupported(&'static str),
    FieldRequired(&'static str),
    NotExact { degree: i64, reason: String },
    Internal(String),
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::Invalid(s) => write!(f, "invalid chain data: {s}"),
            ChainError::CoefficientMismatch => write!(f, "coefficient rings differ"),
            ChainError::DegreeOutsideWindow(i) => {
                write!(f, "degree {i} lies outside the window of a non-periodic complex")
            }
            ChainError::PeriodicUnsupported(op) => {
                write!(f, "{op} does not support periodic complexes")
            }
            ChainError::FieldRequired(op) => write!(f, "{op} requires field coefficients"),
            ChainError::NotExact { degree, reason } => {
                write!(f, "triple fails exactness at degree {degree}: {reason}")
            }
            ChainError::Internal(s) => write!(f, "internal invariant violated: {s}"),
        }
    }
}

/// Homology at one degree: free rank plus invariant factors over `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyDescriptor {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyDescriptor {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    coeff: Coefficient,
    lo: i64,
    hi: i64, // hi == lo - 1 encodes the zero complex
    ranks: Vec<usize>,
    diffs: Vec<Matrix>, // d(lo) .. d(hi-1)
    left_period: Option<u32>,
    right_period: Option<u32>,
}

impl ChainComplex {
    /// Raw assembly without validation; pair with [`ChainComplex::validate`].
    pub fn from_parts(
        coeff: Coefficient,
        lo: i64,
        ranks: Vec<usize>,
        diffs: Vec<Matrix>,
        left_period: Option<u32>,
        right_period: Option<u32>,
    ) -> ChainComplex {
        let hi = lo + ranks.len() as i64 - 1;
        ChainComplex { coeff, lo, hi, ranks, diffs, left_period, right_period }
    }

    /// Validating constructor; returns the canonical form.
    pub fn new(
        coeff: Coefficient,
        lo: i64,
        ranks: Vec<usize>,
        diffs: Vec<Matrix>,
        left_period: Option<u32>,
        right_period: Option<u32>,
    ) -> Result<ChainComplex, ChainError> {
        let raw = ChainComplex::from_parts(coeff, lo, ranks, diffs, left_period, right_period);
        let report = raw.validate();
        if !report.is_valid() {
            return Err(ChainError::Invalid(report.to_string()));
        }
        Ok(raw.canonical())
    }

    pub fn zero(coeff: Coefficient) -> ChainComplex {
        ChainComplex { coeff, lo: 0, hi: -1, ranks: vec![], diffs: vec![], left_period: None, right_period: None }
    }

    /// The coefficient ring placed in a single degree.
    pub fn unit(coeff: Coefficient, degree: i64) -> ChainComplex {
        ChainComplex {
            coeff,
            lo: degree,
            hi: degree,
            ranks: vec![1],
            diffs: vec![],
            left_period: None,
            right_period: None,
        }
    }

    pub fn coefficient(&self) -> &Coefficient {
        &self.coeff
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn is_empty_window(&self) -> bool {
        self.hi < self.lo
    }

    pub fn left_period(&self) -> Option<u32> {
        self.left_period
    }

    pub fn right_period(&self) -> Option<u32> {
        self.right_period
    }

    pub fn is_bounded(&self) -> bool {
        self.left_period.is_none() && self.right_period.is_none()
    }

    fn wrap_right(&self, i: i64, q: u32) -> i64 {
        // smallest i - k q that is <= self.hi
        let q = q as i64;
        let over = i - self.hi;
        let k = (over + q - 1).div_euclid(q);
        i - k * q
    }

    fn wrap_left(&self, i: i64, p: u32) -> i64 {
        let p = p as i64;
        let under = self.lo - i;
        let k = (under + p - 1).div_euclid(p);
        i + k * p
    }

    pub fn rank_at(&self, i: i64) -> usize {
        if self.is_empty_window() {
            return 0;
        }
        if i < self.lo {
            match self.left_period {
                Some(p) => self.ranks[(self.wrap_left(i, p) - self.lo) as usize],
                None => 0,
            }
        } else if i > self.hi {
            match self.right_period {
                Some(q) => self.ranks[(self.wrap_right(i, q) - self.lo) as usize],
                None => 0,
            }
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    /// The differential leaving degree `i`, shaped `rank(i+1) x rank(i)`.
    pub fn diff_at(&self, i: i64) -> Matrix {
        let zero = |s: &ChainComplex| Matrix::zero(&s.coeff, s.rank_at(i + 1), s.rank_at(i));
        if self.is_empty_window() {
            return zero(self);
        }
        if i >= self.lo && i < self.hi {
            return self.diffs[(i - self.lo) as usize].clone();
        }
        if i >= self.hi {
            match self.right_period {
                Some(q) => {
                    // wrap so the result index sits in [lo, hi-1]
                    let q64 = q as i64;
                    let over = i - (self.hi - 1);
                    let k = (over + q64 - 1).div_euclid(q64);
                    let j = i - k * q64;
                    self.diffs[(j - self.lo) as usize].clone()
                }
                None => zero(self),
            }
        } else {
            match self.left_period {
                Some(p) => {
                    let p64 = p as i64;
                    let under = self.lo - i;
                    let k = (under + p64 - 1).div_euclid(p64);
                    let j = i + k * p64;
                    self.diffs[(j - self.lo) as usize].clone()
                }
                None => zero(self),
            }
        }
    }

    /// Degree range that covers the window plus one full period (or one
    /// zero step) on each side.
    pub fn probe_range(&self) -> (i64, i64) {
        let pl = self.left_period.unwrap_or(1) as i64;
        let pr = self.right_period.unwrap_or(1) as i64;
        (self.lo - pl - 1, self.hi + pr + 1)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.ranks.len() != (self.hi - self.lo + 1).max(0) as usize {
            report.push("window", "rank list length does not match window");
            return report;
        }
        let expected_diffs = (self.hi - self.lo).max(0) as usize;
        if self.diffs.len() != expected_diffs {
            report.push(
                "window",
                format!("expected {} differentials, found {}", expected_diffs, self.diffs.len()),
            );
            return report;
        }
        if self.is_empty_window() && (self.left_period.is_some() || self.right_period.is_some()) {
            report.push("window", "periodic declaration on an empty window");
            return report;
        }
        let len = self.hi - self.lo;
        for (side, p) in [("left", self.left_period), ("right", self.right_period)] {
            if let Some(p) = p {
                if p == 0 {
                    report.push(format!("{side} period"), "period must be positive");
                } else if (p as i64) > len {
                    report.push(
                        format!("{side} period"),
                        format!("period {p} exceeds window length {len}"),
                    );
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        // scalar kinds and shapes
        for (k, d) in self.diffs.iter().enumerate() {
            let i = self.lo + k as i64;
            if d.rows() != self.ranks[k + 1] || d.cols() != self.ranks[k] {
                report.push(
                    format!("degree {i}"),
                    format!(
                        "differential is {}x{}, expected {}x{}",
                        d.rows(),
                        d.cols(),
                        self.ranks[k + 1],
                        self.ranks[k]
                    ),
                );
            }
            for e in d.entries() {
                if !self.coeff.matches(e) {
                    report.push(format!("degree {i}"), "entry kind does not match coefficient");
                    break;
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        let (plo, phi) = self.probe_range();
        for i in plo..phi {
            let a = self.diff_at(i);
            let b = self.diff_at(i + 1);
            if !b.mul(&self.coeff, &a).is_zero(&self.coeff) {
                report.push(format!("degree {i}"), "d^2 != 0");
            }
        }
        report
    }

    /// Canonical form: drop all-zero complexes to the empty window, trim
    /// zero ranks from non-periodic edges, shrink periodic padding that is
    /// already implied by the period.
    pub fn canonical(mut self) -> ChainComplex {
        if self.ranks.iter().all(|&r| r == 0) {
            return ChainComplex::zero(self.coeff);
        }
        // trim non-periodic zero edges
        while self.left_period.is_none() && !self.is_empty_window() && self.ranks[0] == 0 {
            self.ranks.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        while self.right_period.is_none()
            && !self.is_empty_window()
            && *self.ranks.last().unwrap() == 0
        {
            self.ranks.pop();
            self.diffs.pop();
            self.hi -= 1;
        }
        // shrink periodic padding
        if let Some(q) = self.right_period {
            let q64 = q as i64;
            while self.hi - self.lo > q64 {
                let last_rank = *self.ranks.last().unwrap();
                let implied_rank = self.ranks[(self.hi - q64 - self.lo) as usize];
                let last_diff = self.diffs.last().unwrap();
                let implied_diff = &self.diffs[(self.hi - 1 - q64 - self.lo) as usize];
                if last_rank == implied_rank && last_diff == implied_diff {
                    self.ranks.pop();
                    self.diffs.pop();
                    self.hi -= 1;
                } else {
                    break;
                }
            }
        }
        if let Some(p) = self.left_period {
            let p64 = p as i64;
            while self.hi - self.lo > p64 {
                let first_rank = self.ranks[0];
                let implied_rank = self.ranks[p64 as usize];
                let first_diff = &self.diffs[0];
                let implied_diff = &self.diffs[p64 as usize];
                if first_rank == implied_rank && first_diff == implied_diff {
                    self.ranks.remove(0);
                    self.diffs.remove(0);
                    self.lo += 1;
                } else {
                    break;
                }
            }
        }
        self
    }

    fn homology_unchecked(&self, i: i64) -> HomologyDescriptor {
        let d_out = self.diff_at(i);
        let d_in = self.diff_at(i - 1);
        let nullity = matrix::nullity(&self.coeff, &d_out);
        let in_rank = matrix::rank(&self.coeff, &d_in);
        let free_rank = nullity - in_rank;
        let torsion = if self.coeff == Coefficient::Int {
            matrix::smith_normal_form(&d_in)
                .into_iter()
                .map(|d| d.abs())
                .filter(|d| d > &BigInt::from(1))
                .collect()
        } else {
            vec![]
        };
        HomologyDescriptor { free_rank, torsion }
    }

    /// Homology at degree `i`; errors outside the window of a non-periodic
    /// side, where the complex carries no data.
    pub fn homology(&self, i: i64) -> Result<HomologyDescriptor, ChainError> {
        if (i < self.lo && self.left_period.is_none())
            || (i > self.hi && self.right_period.is_none())
        {
            return Err(ChainError::DegreeOutsideWindow(i));
        }
        Ok(self.homology_unchecked(i))
    }

    /// True iff homology vanishes on the window and across one full period
    /// on each periodic side (sufficient there by periodicity).
    pub fn is_acyclic(&self) -> bool {
        let pl = self.left_period.unwrap_or(0) as i64;
        let pr = self.right_period.unwrap_or(0) as i64;
        (self.lo - pl..=self.hi + pr).all(|i| self.homology_unchecked(i).is_zero())
    }

    /// `(C[n])^i = C^(i+n)`, differential scaled by `(-1)^n`.
    pub fn shift(&self, n: i64) -> ChainComplex {
        if self.is_empty_window() {
            return self.clone();
        }
        let diffs = if n.rem_euclid(2) == 1 {
            self.diffs.iter().map(|d| d.neg(&self.coeff)).collect()
        } else {
            self.diffs.clone()
        };
        ChainComplex {
            coeff: self.coeff,
            lo: self.lo - n,
            hi: self.hi - n,
            ranks: self.ranks.clone(),
            diffs,
            left_period: self.left_period,
            right_period: self.right_period,
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Euler characteristic of a bounded complex.
    pub fn euler_characteristic(&self) -> i64 {
        assert!(self.is_bounded());
        (self.lo..=self.hi)
            .map(|i| {
                let r = self.rank_at(i) as i64;
                if i.rem_euclid(2) == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }

    /// Hard truncation to `[lo, hi]`, dropping periodicity. The result is a
    /// bounded complex that agrees with `self` on the window.
    pub fn window_to(&self, lo: i64, hi: i64) -> ChainComplex {
        let ranks: Vec<usize> = (lo..=hi).map(|i| self.rank_at(i)).collect();
        let diffs: Vec<Matrix> = (lo..hi).map(|i| self.diff_at(i)).collect();
        ChainComplex::from_parts(self.coeff, lo, ranks, diffs, None, None).canonical()
    }
}

/// Materialize a complex from rank/differential closures over a window and
/// validate the result. Periodic sides get one extra period of padding so
/// seams fall inside the stored window before canonicalization.
pub(crate) fn build_complex(
    coeff: Coefficient,
    lo: i64,
    hi: i64,
    left_period: Option<u32>,
    right_period: Option<u32>,
    rank_fn: impl Fn(i64) -> usize,
    diff_fn: impl Fn(i64) -> Matrix,
) -> Result<ChainComplex, ChainError> {
    let mut lo = lo;
    let mut hi = hi;
    if hi < lo {
        return Ok(ChainComplex::zero(coeff));
    }
    if let Some(p) = left_period {
        lo -= p as i64;
    }
    if let Some(q) = right_period {
        hi += q as i64;
    }
    let need = left_period.unwrap_or(1).max(right_period.unwrap_or(1)) as i64;
    if hi - lo < need {
        hi = lo + need;
    }
    let ranks: Vec<usize> = (lo..=hi).map(&rank_fn).collect();
    let diffs: Vec<Matrix> = (lo..hi).map(&diff_fn).collect();
    ChainComplex::new(coeff, lo, ranks, diffs, left_period, right_period)
}

fn lcm_period(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (None, None) => None,
        (Some(p), None) | (None, Some(p)) => Some(p),
        (Some(p), Some(q)) => Some(num_integer::lcm(p, q)),
    }
}

/// A degree-0 closed morphism of complexes: `f(i+1) d_src(i) = d_tgt(i) f(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    lo: i64,
    hi: i64,
    maps: Vec<Matrix>, // f(lo) .. f(hi)
    left_period: Option<u32>,
    right_period: Option<u32>,
}

impl ChainMap {
    pub fn from_parts(
        source: ChainComplex,
        target: ChainComplex,
        lo: i64,
        maps: Vec<Matrix>,
        left_period: Option<u32>,
        right_period: Option<u32>,
    ) -> ChainMap {
        let hi = lo + maps.len() as i64 - 1;
        ChainMap { source, target, lo, hi, maps, left_period, right_period }
    }

    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        lo: i64,
        maps: Vec<Matrix>,
        left_period: Option<u32>,
        right_period: Option<u32>,
    ) -> Result<ChainMap, ChainError> {
        let raw = ChainMap::from_parts(source, target, lo, maps, left_period, right_period);
        let report = raw.validate();
        if !report.is_valid() {
            return Err(ChainError::Invalid(report.to_string()));
        }
        Ok(raw.canonical())
    }

    pub fn zero(source: ChainComplex, target: ChainComplex) -> ChainMap {
        ChainMap {
            source,
            target,
            lo: 0,
            hi: -1,
            maps: vec![],
            left_period: None,
            right_period: None,
        }
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        let (lo, hi) = c.window();
        let maps = (lo..=hi)
            .map(|i| Matrix::identity(c.coefficient(), c.rank_at(i)))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            lo,
            hi,
            maps,
            left_period: c.left_period(),
            right_period: c.right_period(),
        }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn map_at(&self, i: i64) -> Matrix {
        let zero =
            || Matrix::zero(self.source.coefficient(), self.target.rank_at(i), self.source.rank_at(i));
        if self.hi < self.lo {
            return zero();
        }
        if i >= self.lo && i <= self.hi {
            return self.maps[(i - self.lo) as usize].clone();
        }
        if i > self.hi {
            match self.right_period {
                Some(q) => {
                    let q64 = q as i64;
                    let k = (i - self.hi + q64 - 1).div_euclid(q64);
                    self.maps[(i - k * q64 - self.lo) as usize].clone()
                }
                None => zero(),
            }
        } else {
            match self.left_period {
                Some(p) => {
                    let p64 = p as i64;
                    let k = (self.lo - i + p64 - 1).div_euclid(p64);
                    self.maps[(i + k * p64 - self.lo) as usize].clone()
                }
                None => zero(),
            }
        }
    }

    fn probe_range(&self) -> (i64, i64) {
        let (slo, shi) = self.source.probe_range();
        let (tlo, thi) = self.target.probe_range();
        let pl = self.left_period.unwrap_or(1) as i64;
        let pr = self.right_period.unwrap_or(1) as i64;
        (slo.min(tlo).min(self.lo - pl - 1), shi.max(thi).max(self.hi + pr + 1))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.source.coefficient() != self.target.coefficient() {
            report.push("coefficients", "source and target rings differ");
            return report;
        }
        let coeff = *self.source.coefficient();
        if self.maps.len() != (self.hi - self.lo + 1).max(0) as usize {
            report.push("window", "map list length does not match window");
            return report;
        }
        let (plo, phi) = self.probe_range();
        for i in plo..=phi {
            let f = self.map_at(i);
            if f.rows() != self.target.rank_at(i) || f.cols() != self.source.rank_at(i) {
                report.push(
                    format!("degree {i}"),
                    format!(
                        "component is {}x{}, expected {}x{}",
                        f.rows(),
                        f.cols(),
                        self.target.rank_at(i),
                        self.source.rank_at(i)
                    ),
                );
            }
        }
        if !report.is_valid() {
            return report;
        }
        for i in plo..phi {
            let lhs = self.map_at(i + 1).mul(&coeff, &self.source.diff_at(i));
            let rhs = self.target.diff_at(i).mul(&coeff, &self.map_at(i));
            if lhs != rhs {
                report.push(format!("degree {i}"), "does not commute with differentials");
            }
        }
        report
    }

    pub fn canonical(mut self) -> ChainMap {
        let coeff = *self.source.coefficient();
        if self.maps.iter().all(|m| m.is_zero(&coeff)) {
            return ChainMap::zero(self.source, self.target);
        }
        while self.left_period.is_none() && self.lo <= self.hi && self.maps[0].is_zero(&coeff) {
            self.maps.remove(0);
            self.lo += 1;
        }
        while self.right_period.is_none()
            && self.lo <= self.hi
            && self.maps.last().unwrap().is_zero(&coeff)
        {
            self.maps.pop();
            self.hi -= 1;
        }
        self
    }

    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap, ChainError> {
        if inner.target != self.source {
            return Err(ChainError::Invalid("composition endpoints do not match".into()));
        }
        let coeff = *self.source.coefficient();
        let lo = self.lo.min(inner.lo).min(self.source.window().0);
        let hi = self.hi.max(inner.hi).max(self.source.window().1);
        let lp = lcm_period(
            lcm_period(self.left_period, inner.left_period),
            lcm_period(self.source.left_period(), None),
        );
        let rp = lcm_period(
            lcm_period(self.right_period, inner.right_period),
            lcm_period(self.source.right_period(), None),
        );
        let maps = (lo..=hi)
            .map(|i| self.map_at(i).mul(&coeff, &inner.map_at(i)))
            .collect();
        ChainMap::new(inner.source.clone(), self.target.clone(), lo, maps, lp, rp)
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap, ChainError> {
        if self.source != other.source || self.target != other.target {
            return Err(ChainError::Invalid("sum of maps with different endpoints".into()));
        }
        let coeff = *self.source.coefficient();
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        if hi < lo {
            return Ok(ChainMap::zero(self.source.clone(), self.target.clone()));
        }
        let lp = lcm_period(self.left_period, other.left_period);
        let rp = lcm_period(self.right_period, other.right_period);
        let maps = (lo..=hi)
            .map(|i| self.map_at(i).add(&coeff, &other.map_at(i)))
            .collect();
        ChainMap::new(self.source.clone(), self.target.clone(), lo, maps, lp, rp)
    }

    pub fn neg(&self) -> ChainMap {
        let coeff = *self.source.coefficient();
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            lo: self.lo,
            hi: self.hi,
            maps: self.maps.iter().map(|m| m.neg(&coeff)).collect(),
            left_period: self.left_period,
            right_period: self.right_period,
        }
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap, ChainError> {
        self.add(&other.neg())
    }

    /// Matrix of the induced map on homology at degree `i`, expressed in the
    /// canonical quotient bases.
    pub fn induced_on_homology(&self, i: i64) -> Matrix {
        let coeff = *self.source.coefficient();
        induced_homology_matrix(&coeff, &self.source, &self.target, &self.map_at(i), i)
    }
}

fn homology_presentation(
    coeff: &Coefficient,
    c: &ChainComplex,
    i: i64,
) -> (Matrix, matrix::Cokernel) {
    let kernel = matrix::kernel_basis(coeff, &c.diff_at(i));
    // image of d(i-1) expressed in kernel coordinates
    let img = c.diff_at(i - 1);
    let in_kernel = matrix::solve_matrix(coeff, &kernel, &img)
        .expect("image of d lies in the kernel of the next d");
    let quot = matrix::cokernel(coeff, &in_kernel);
    (kernel, quot)
}

/// Induced map `H^i(source) -> H^i(target)` for a degree-`i` component `f`.
pub fn induced_homology_matrix(
    coeff: &Coefficient,
    source: &ChainComplex,
    target: &ChainComplex,
    f: &Matrix,
    i: i64,
) -> Matrix {
    let (ker_s, quot_s) = homology_presentation(coeff, source, i);
    let (ker_t, quot_t) = homology_presentation(coeff, target, i);
    // representatives of source classes
    let mut reps = Matrix::zero(coeff, ker_s.rows(), quot_s.dim);
    for (k, &coord) in quot_s.basis_coords.iter().enumerate() {
        for r in 0..ker_s.rows() {
            *reps.at_mut(r, k) = ker_s.at(r, coord).clone();
        }
    }
    let mapped = f.mul(coeff, &reps);
    let in_ker_t = matrix::solve_matrix(coeff, &ker_t, &mapped)
        .expect("chain map sends cycles to cycles");
    quot_t.projection.mul(coeff, &in_ker_t)
}

/// A homotopy between two parallel chain maps: degree -1 components with
/// `f(i) - g(i) = d_tgt(i-1) h(i) + h(i+1) d_src(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainHomotopy {
    pub f: ChainMap,
    pub g: ChainMap,
    lo: i64,
    hi: i64,
    comps: Vec<Matrix>, // h(lo) .. h(hi)
    left_period: Option<u32>,
    right_period: Option<u32>,
}

impl ChainHomotopy {
    pub fn from_parts(
        f: ChainMap,
        g: ChainMap,
        lo: i64,
        comps: Vec<Matrix>,
        left_period: Option<u32>,
        right_period: Option<u32>,
    ) -> ChainHomotopy {
        let hi = lo + comps.len() as i64 - 1;
        ChainHomotopy { f, g, lo, hi, comps, left_period, right_period }
    }

    pub fn zero(f: ChainMap, g: ChainMap) -> ChainHomotopy {
        ChainHomotopy { f, g, lo: 0, hi: -1, comps: vec![], left_period: None, right_period: None }
    }

    pub fn component_at(&self, i: i64) -> Matrix {
        let src = &self.f.source;
        let tgt = &self.f.target;
        let zero = || Matrix::zero(src.coefficient(), tgt.rank_at(i - 1), src.rank_at(i));
        if self.hi < self.lo {
            return zero();
        }
        if i >= self.lo && i <= self.hi {
            return self.comps[(i - self.lo) as usize].clone();
        }
        if i > self.hi {
            match self.right_period {
                Some(q) => {
                    let q64 = q as i64;
                    let k = (i - self.hi + q64 - 1).div_euclid(q64);
                    self.comps[(i - k * q64 - self.lo) as usize].clone()
                }
                None => zero(),
            }
        } else {
            match self.left_period {
                Some(p) => {
                    let p64 = p as i64;
                    let k = (self.lo - i + p64 - 1).div_euclid(p64);
                    self.comps[(i + k * p64 - self.lo) as usize].clone()
                }
                None => zero(),
            }
        }
    }

    pub fn verify_report(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.f.source != self.g.source || self.f.target != self.g.target {
            report.push("endpoints", "homotopy endpoints do not agree");
            return report;
        }
        let src = &self.f.source;
        let tgt = &self.f.target;
        let coeff = *src.coefficient();
        let (flo, fhi) = self.f.probe_range();
        let (glo, ghi) = self.g.probe_range();
        let pl = self.left_period.unwrap_or(1) as i64;
        let pr = self.right_period.unwrap_or(1) as i64;
        let lo = flo.min(glo).min(self.lo - pl - 1);
        let hi = fhi.max(ghi).max(self.hi + pr + 1);
        for i in lo..=hi {
            let h = self.component_at(i);
            if h.rows() != tgt.rank_at(i - 1) || h.cols() != src.rank_at(i) {
                report.push(format!("degree {i}"), "homotopy component has wrong shape");
                return report;
            }
        }
        for i in lo..=hi {
            let lhs = self.f.map_at(i).sub(&coeff, &self.g.map_at(i));
            let rhs = tgt
                .diff_at(i - 1)
                .mul(&coeff, &self.component_at(i))
                .add(&coeff, &self.component_at(i + 1).mul(&coeff, &src.diff_at(i)));
            if lhs != rhs {
                report.push(format!("degree {i}"), "homotopy identity fails");
            }
        }
        report
    }

    pub fn verify(&self) -> bool {
        self.verify_report().is_valid()
    }
}

/// Solve for a homotopy between two parallel maps of bounded complexes.
pub fn find_homotopy(f: &ChainMap, g: &ChainMap) -> Option<ChainHomotopy> {
    if f.source != g.source || f.target != g.target {
        return None;
    }
    let src = &f.source;
    let tgt = &f.target;
    if !src.is_bounded() || !tgt.is_bounded() {
        return None;
    }
    let coeff = *src.coefficient();
    let (slo, shi) = src.window();
    // unknown blocks h(i): tgt.rank(i-1) x src.rank(i) for slo <= i <= shi+1
    let lo = slo;
    let hi = shi + 1;
    let mut offsets = Vec::new();
    let mut total = 0usize;
    for i in lo..=hi {
        let rows = tgt.rank_at(i - 1);
        let cols = src.rank_at(i);
        offsets.push((i, total, rows, cols));
        total += rows * cols;
    }
    let block_of = |i: i64| offsets.iter().find(|(j, ..)| *j == i).cloned();
    // equations: for i in lo-1 ..= hi+1: d h(i) + h(i+1) d = f(i) - g(i)
    let mut rows_mat: Vec<Matrix> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for i in lo - 1..=hi + 1 {
        let out_rows = tgt.rank_at(i);
        let out_cols = src.rank_at(i);
        if out_rows * out_cols == 0 {
            // equation space is trivial here, but the rhs must vanish
            continue;
        }
        let mut eq = Matrix::zero(&coeff, out_rows * out_cols, total);
        // d_tgt(i-1) h(i): entry (r,c) = sum_k d[r,k] h(i)[k,c]
        if let Some((_, off, hrows, hcols)) = block_of(i) {
            let d = tgt.diff_at(i - 1);
            for r in 0..out_rows {
                for c in 0..out_cols.min(hcols) {
                    for k in 0..hrows {
                        let idx = off + k * hcols + c;
                        *eq.at_mut(r * out_cols + c, idx) =
                            coeff.add(eq.at(r * out_cols + c, idx), d.at(r, k));
                    }
                }
            }
        }
        // h(i+1) d_src(i): entry (r,c) = sum_k h(i+1)[r,k] d[k,c]
        if let Some((_, off, hrows, hcols)) = block_of(i + 1) {
            let d = src.diff_at(i);
            for r in 0..out_rows.min(hrows) {
                for c in 0..out_cols {
                    for k in 0..hcols {
                        let idx = off + r * hcols + k;
                        *eq.at_mut(r * out_cols + c, idx) =
                            coeff.add(eq.at(r * out_cols + c, idx), d.at(k, c));
                    }
                }
            }
        }
        let diff = f.map_at(i).sub(&coeff, &g.map_at(i));
        for r in 0..out_rows {
            for c in 0..out_cols {
                rhs.push(diff.at(r, c).clone());
            }
        }
        rows_mat.push(eq);
    }
    // degrees where the homotopy terms are empty still require f = g
    for i in lo - 1..=hi + 1 {
        if tgt.rank_at(i) * src.rank_at(i) == 0 {
            let diff = f.map_at(i).sub(&coeff, &g.map_at(i));
            if !diff.is_zero(&coeff) {
                return None;
            }
        }
    }
    let system = if rows_mat.is_empty() {
        Matrix::zero(&coeff, 0, total)
    } else {
        let refs: Vec<&Matrix> = rows_mat.iter().collect();
        Matrix::vstack(&coeff, &refs)
    };
    let sol = matrix::solve(&coeff, &system, &rhs)?;
    let comps: Vec<Matrix> = offsets
        .iter()
        .map(|&(_, off, rows, cols)| {
            let entries = sol[off..off + rows * cols].to_vec();
            Matrix::new(rows, cols, entries)
        })
        .collect();
    let h = ChainHomotopy::from_parts(f.clone(), g.clone(), lo, comps, None, None);
    debug_assert!(h.verify());
    Some(h)
}

/// Short exact sequence of complexes: `0 -> K -> M -> Q -> 0` degreewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactTriple {
    pub sub: ChainComplex,
    pub total: ChainComplex,
    pub quotient: ChainComplex,
    pub incl: ChainMap,
    pub proj: ChainMap,
}

impl ExactTriple {
    pub fn new(incl: ChainMap, proj: ChainMap) -> Result<ExactTriple, ChainError> {
        let t = ExactTriple {
            sub: incl.source.clone(),
            total: incl.target.clone(),
            quotient: proj.target.clone(),
            incl,
            proj,
        };
        let report = t.validate();
        if !report.is_valid() {
            return Err(ChainError::Invalid(report.to_string()));
        }
        Ok(t)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.merge("inclusion", self.incl.validate());
        report.merge("projection", self.proj.validate());
        if self.incl.source != self.sub
            || self.incl.target != self.total
            || self.proj.source != self.total
            || self.proj.target != self.quotient
        {
            report.push("endpoints", "maps do not connect K -> M -> Q");
        }
        if !report.is_valid() {
            return report;
        }
        let coeff = *self.total.coefficient();
        let (lo, hi) = {
            let (a, b) = self.sub.probe_range();
            let (c, d) = self.total.probe_range();
            let (e, f) = self.quotient.probe_range();
            (a.min(c).min(e), b.max(d).max(f))
        };
        for i in lo..=hi {
            let vi = self.incl.map_at(i);
            let vp = self.proj.map_at(i);
            let rk = self.sub.rank_at(i);
            let rq = self.quotient.rank_at(i);
            if let Some(err) = exactness_failure(&coeff, &vi, &vp, rk, rq) {
                report.push(format!("degree {i}"), err);
            }
        }
        report
    }
}

fn exactness_failure(
    coeff: &Coefficient,
    incl: &Matrix,
    proj: &Matrix,
    rank_sub: usize,
    rank_quot: usize,
) -> Option<String> {
    if !proj.mul(coeff, incl).is_zero(coeff) {
        return Some("projection . inclusion != 0".into());
    }
    if coeff.is_field() {
        let ri = matrix::rank(coeff, incl);
        let rp = matrix::rank(coeff, proj);
        if ri != rank_sub {
            return Some("inclusion is not injective".into());
        }
        if rp != rank_quot {
            return Some("projection is not surjective".into());
        }
        if matrix::nullity(coeff, proj) != ri {
            return Some("image of inclusion differs from kernel of projection".into());
        }
        None
    } else {
        // integer case: split injectivity/surjectivity via unit invariant factors
        let di = matrix::smith_normal_form(incl);
        let dp = matrix::smith_normal_form(proj);
        if di.len() != rank_sub || !di.iter().all(|d| d.abs().is_one()) {
            return Some("inclusion is not a split injection over Z".into());
        }
        if dp.len() != rank_quot || !dp.iter().all(|d| d.abs().is_one()) {
            return Some("projection is not a split surjection over Z".into());
        }
        if incl.cols() + proj.rows() != incl.rows() {
            return Some("ranks do not add up to the middle term".into());
        }
        None
    }
}

/// Mapping cone with `Cone(f)^i = A^(i+1) (+) B^i` and
/// `d(a, b) = (-d_A a, f(a) + d_B b)`, together with the canonical maps
/// `B -> Cone(f)` and `Cone(f) -> A[1]`.
pub fn cone(f: &ChainMap) -> Result<(ChainComplex, ChainMap, ChainMap), ChainError> {
    let a = &f.source;
    let b = &f.target;
    if a.coefficient() != b.coefficient() {
        return Err(ChainError::CoefficientMismatch);
    }
    let coeff = *a.coefficient();
    let (alo, ahi) = a.window();
    let (blo, bhi) = b.window();
    let lo = (alo - 1).min(blo);
    let hi = (ahi - 1).max(bhi);
    let lp = lcm_period(a.left_period(), b.left_period());
    let rp = lcm_period(a.right_period(), b.right_period());
    let c = build_complex(
        coeff,
        lo,
        hi,
        lp,
        rp,
        |i| a.rank_at(i + 1) + b.rank_at(i),
        |i| {
            let da = a.diff_at(i + 1).neg(&coeff);
            let fi = f.map_at(i + 1);
            let db = b.diff_at(i);
            let z = Matrix::zero(&coeff, a.rank_at(i + 2), b.rank_at(i));
            Matrix::from_blocks(&coeff, &[vec![&da, &z], vec![&fi, &db]])
        },
    )?;
    let (clo, chi) = c.window();
    let inc = ChainMap::new(
        b.clone(),
        c.clone(),
        clo,
        (clo..=chi)
            .map(|i| {
                let z = Matrix::zero(&coeff, a.rank_at(i + 1), b.rank_at(i));
                let id = Matrix::identity(&coeff, b.rank_at(i));
                Matrix::vstack(&coeff, &[&z, &id])
            })
            .collect(),
        c.left_period(),
        c.right_period(),
    )?;
    let shifted = a.shift(1);
    let out = ChainMap::new(
        c.clone(),
        shifted,
        clo,
        (clo..=chi)
            .map(|i| {
                let id = Matrix::identity(&coeff, a.rank_at(i + 1));
                let z = Matrix::zero(&coeff, a.rank_at(i + 1), b.rank_at(i));
                Matrix::hstack(&coeff, &[&id, &z])
            })
            .collect(),
        c.left_period(),
        c.right_period(),
    )?;
    Ok((c, inc, out))
}

/// Block-diagonal direct sum.
pub fn direct_sum(coeff: Coefficient, parts: &[&ChainComplex]) -> Result<ChainComplex, ChainError> {
    for p in parts {
        if p.coefficient() != &coeff {
            return Err(ChainError::CoefficientMismatch);
        }
    }
    if parts.is_empty() {
        return Ok(ChainComplex::zero(coeff));
    }
    let lo = parts.iter().map(|p| p.window().0).min().unwrap();
    let hi = parts.iter().map(|p| p.window().1).max().unwrap();
    let lp = parts
        .iter()
        .fold(None, |acc, p| lcm_period(acc, p.left_period()));
    let rp = parts
        .iter()
        .fold(None, |acc, p| lcm_period(acc, p.right_period()));
    build_complex(
        coeff,
        lo,
        hi,
        lp,
        rp,
        |i| parts.iter().map(|p| p.rank_at(i)).sum(),
        |i| {
            let blocks: Vec<Matrix> = parts.iter().map(|p| p.diff_at(i)).collect();
            let refs: Vec<&Matrix> = blocks.iter().collect();
            Matrix::block_diag(&coeff, &refs)
        },
    )
}

/// Total complex of the three-column bicomplex `K -> M -> Q` of an exact
/// triple, with the vertical differential negated in the middle column.
/// Degreewise exactness makes the result acyclic; this is re-checked.
pub fn totalize_exact_triple(t: &ExactTriple) -> Result<ChainComplex, ChainError> {
    let report = t.validate();
    if !report.is_valid() {
        let first = &report.violations[0];
        return Err(ChainError::NotExact {
            degree: first
                .location
                .split(|c: char| !c.is_ascii_digit() && c != '-')
                .find_map(|s| s.parse().ok())
                .unwrap_or(0),
            reason: first.message.clone(),
        });
    }
    let coeff = *t.total.coefficient();
    let (klo, khi) = t.sub.window();
    let (mlo, mhi) = t.total.window();
    let (qlo, qhi) = t.quotient.window();
    let lo = klo.min(mlo + 1).min(qlo + 2);
    let hi = khi.max(mhi + 1).max(qhi + 2);
    let lp = lcm_period(
        t.sub.left_period(),
        lcm_period(t.total.left_period(), t.quotient.left_period()),
    );
    let rp = lcm_period(
        t.sub.right_period(),
        lcm_period(t.total.right_period(), t.quotient.right_period()),
    );
    let tot = build_complex(
        coeff,
        lo,
        hi,
        lp,
        rp,
        |n| t.sub.rank_at(n) + t.total.rank_at(n - 1) + t.quotient.rank_at(n - 2),
        |n| {
            let dk = t.sub.diff_at(n);
            let i_n = t.incl.map_at(n);
            let dm = t.total.diff_at(n - 1).neg(&coeff);
            let p_n = t.proj.map_at(n - 1);
            let dq = t.quotient.diff_at(n - 2);
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
        },
    )?;
    if !tot.is_acyclic() {
        return Err(ChainError::Internal(
            "totalization of an exact triple failed its acyclicity re-check".into(),
        ));
    }
    Ok(tot)
}

/// Layout of the hom complex `Hom(A, B)` in one degree: blocks of graded
/// maps `A^i -> B^(i+n)` flattened row-major, ordered by ascending `i`.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub degree: i64,
    /// `(source degree i, offset, rows = rank B^(i+n), cols = rank A^i)`
    pub blocks: Vec<(i64, usize, usize, usize)>,
    pub dim: usize,
}

impl HomBasis {
    pub fn layout(a: &ChainComplex, b: &ChainComplex, n: i64) -> HomBasis {
        let (alo, ahi) = a.window();
        let mut blocks = Vec::new();
        let mut off = 0;
        for i in alo..=ahi {
            let rows = b.rank_at(i + n);
            let cols = a.rank_at(i);
            if rows * cols > 0 {
                blocks.push((i, off, rows, cols));
                off += rows * cols;
            }
        }
        HomBasis { degree: n, blocks, dim: off }
    }

    /// Flatten a graded map family into hom-complex coordinates.
    pub fn encode(&self, comps: &dyn Fn(i64) -> Matrix) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.dim);
        for &(i, _, rows, cols) in &self.blocks {
            let m = comps(i);
            assert_eq!((m.rows(), m.cols()), (rows, cols));
            out.extend(m.entries().iter().cloned());
        }
        out
    }

    /// Read one block of a hom-complex vector as a matrix.
    pub fn decode_block(&self, coeff: &Coefficient, v: &[Scalar], i: i64) -> Matrix {
        for &(j, off, rows, cols) in &self.blocks {
            if j == i {
                return Matrix::new(rows, cols, v[off..off + rows * cols].to_vec());
            }
        }
        Matrix::zero(coeff, 0, 0)
    }
}

/// Hom complex of bounded complexes over a field: degree `n` consists of all
/// graded maps of degree `n`, with `d(f) = d_B . f - (-1)^n f . d_A`.
pub fn hom_complex(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex, ChainError> {
    if a.coefficient() != b.coefficient() {
        return Err(ChainError::CoefficientMismatch);
    }
    if !a.is_bounded() || !b.is_bounded() {
        return Err(ChainError::PeriodicUnsupported("hom_complex"));
    }
    let coeff = *a.coefficient();
    if !coeff.is_field() {
        return Err(ChainError::FieldRequired("hom_complex"));
    }
    if a.is_empty_window() || b.is_empty_window() {
        return Ok(ChainComplex::zero(coeff));
    }
    let (alo, ahi) = a.window();
    let (blo, bhi) = b.window();
    let lo = blo - ahi;
    let hi = bhi - alo;
    build_complex(
        coeff,
        lo,
        hi,
        None,
        None,
        |n| HomBasis::layout(a, b, n).dim,
        |n| {
            let src = HomBasis::layout(a, b, n);
            let tgt = HomBasis::layout(a, b, n + 1);
            let sign = coeff.from_i64(if n.rem_euclid(2) == 0 { -1 } else { 1 });
            let mut m = Matrix::zero(&coeff, tgt.dim, src.dim);
            for &(i, off, rows, cols) in &src.blocks {
                // d_B(i+n) . f_i contributes to target block i
                let db = b.diff_at(i + n);
                if let Some(&(_, toff, trows, tcols)) =
                    tgt.blocks.iter().find(|&&(j, ..)| j == i)
                {
                    debug_assert_eq!(tcols, cols);
                    for r2 in 0..trows {
                        for r in 0..rows {
                            let coef = db.at(r2, r);
                            if coeff.is_zero(coef) {
                                continue;
                            }
                            for c in 0..cols {
                                let ti = toff + r2 * tcols + c;
                                let si = off + r * cols + c;
                                *m.at_mut(ti, si) = coeff.add(m.at(ti, si), coef);
                            }
                        }
                    }
                }
                // -(-1)^n f_i . d_A(i-1) contributes to target block i-1
                let da = a.diff_at(i - 1);
                if let Some(&(_, toff, trows, tcols)) =
                    tgt.blocks.iter().find(|&&(j, ..)| j == i - 1)
                {
                    debug_assert_eq!(trows, rows);
                    for r in 0..rows {
                        for c2 in 0..tcols {
                            for c in 0..cols {
                                let coef = coeff.mul(&sign, da.at(c, c2));
                                if coeff.is_zero(&coef) {
                                    continue;
                                }
                                let ti = toff + r * tcols + c2;
                                let si = off + r * cols + c;
                                *m.at_mut(ti, si) = coeff.add(m.at(ti, si), &coef);
                            }
                        }
                    }
                }
            }
            m
        },
    )
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

    /// Multiplication by x on R = k[x]/(x^2) in the basis {1, x}.
    fn x_matrix(coeff: &Coefficient) -> Matrix {
        Matrix::from_rows_i64(coeff, &[&[0, 0], &[1, 0]])
    }

    /// The two-sided periodic complex with R in every degree and d = x.
    pub(crate) fn periodic_full(coeff: &Coefficient) -> ChainComplex {
        ChainComplex::new(
            *coeff,
            0,
            vec![2, 2],
            vec![x_matrix(coeff)],
            Some(1),
            Some(1),
        )
        .unwrap()
    }

    /// Truncation ... -> R -> R -> k -> 0 with k in degree 0.
    pub(crate) fn truncated_above(coeff: &Coefficient) -> ChainComplex {
        ChainComplex::new(
            *coeff,
            -2,
            vec![2, 2, 1],
            vec![x_matrix(coeff), Matrix::from_rows_i64(coeff, &[&[1, 0]])],
            Some(1),
            None,
        )
        .unwrap()
    }

    /// Truncation 0 -> k -> R -> R -> ... with k in degree -1.
    pub(crate) fn truncated_below(coeff: &Coefficient) -> ChainComplex {
        ChainComplex::new(
            *coeff,
            -1,
            vec![1, 2, 2],
            vec![Matrix::from_rows_i64(coeff, &[&[0], &[1]]), x_matrix(coeff)],
            None,
            Some(1),
        )
        .unwrap()
    }

    #[test]
    fn zero_complex_is_valid_and_acyclic() {
        let z = ChainComplex::zero(f2());
        assert!(z.validate().is_valid());
        assert!(z.is_acyclic());
    }

    #[test]
    fn periodic_fixture_is_valid_and_acyclic() {
        let c = periodic_full(&f2());
        assert!(c.validate().is_valid());
        assert!(c.is_acyclic());
        // homology rank 0 far outside the window via periodicity
        assert_eq!(c.homology(17).unwrap().free_rank, 0);
        assert_eq!(c.homology(-23).unwrap().free_rank, 0);
    }

    #[test]
    fn identity_differential_in_one_degree_breaks_d_squared() {
        let coeff = f2();
        let raw = ChainComplex::from_parts(
            coeff,
            0,
            vec![2, 2],
            vec![Matrix::identity(&coeff, 2)],
            Some(1),
            Some(1),
        );
        let report = raw.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.message.contains("d^2")));
    }

    #[test]
    fn truncations_are_acyclic() {
        assert!(truncated_above(&f2()).is_acyclic());
        assert!(truncated_below(&f2()).is_acyclic());
    }

    #[test]
    fn iso_two_term_complex_has_no_homology() {
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
        assert_eq!(c.homology(0).unwrap().free_rank, 0);
        assert_eq!(c.homology(1).unwrap().free_rank, 0);
    }

    #[test]
    fn rank_one_each_side_example() {
        // 0 -> F_2^2 -> F_2^2 -> 0 with [[1,1],[0,0]]
        let coeff = f2();
        let c = ChainComplex::new(
            coeff,
            0,
            vec![2, 2],
            vec![Matrix::from_rows_i64(&coeff, &[&[1, 1], &[0, 0]])],
            None,
            None,
        )
        .unwrap();
        assert_eq!(c.homology(0).unwrap().free_rank, 1);
        assert_eq!(c.homology(1).unwrap().free_rank, 1);
    }

    #[test]
    fn homology_outside_bounded_window_errors() {
        let c = ChainComplex::unit(f2(), 0);
        assert!(c.homology(0).is_ok());
        assert!(matches!(c.homology(5), Err(ChainError::DegreeOutsideWindow(5))));
    }

    #[test]
    fn integer_homology_torsion() {
        // 0 -> Z -(2)-> Z -> 0: H at the right degree is Z/2
        let z = Coefficient::Int;
        let c = ChainComplex::new(
            z,
            0,
            vec![1, 1],
            vec![Matrix::from_rows_i64(&z, &[&[2]])],
            None,
            None,
        )
        .unwrap();
        let h1 = c.homology(1).unwrap();
        assert_eq!(h1.free_rank, 0);
        assert_eq!(h1.torsion, vec![BigInt::from(2)]);
        let h0 = c.homology(0).unwrap();
        assert!(h0.is_zero());
    }

    #[test]
    fn shift_reindexes_and_roundtrips() {
        let c = truncated_below(&f2());
        assert_eq!(c.shift(0), c);
        let s = c.shift(1);
        for i in -4..4 {
            assert_eq!(s.rank_at(i), c.rank_at(i + 1));
            assert_eq!(
                s.homology_unchecked(i).free_rank,
                c.homology_unchecked(i + 1).free_rank
            );
        }
        assert_eq!(s.shift(-1), c);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        for c in [truncated_above(&f2()), truncated_below(&f2()), periodic_full(&f2())] {
            let id = ChainMap::identity(&c);
            let (cone_c, inc, out) = cone(&id).unwrap();
            assert!(cone_c.validate().is_valid());
            assert!(cone_c.is_acyclic());
            assert!(inc.validate().is_valid());
            assert!(out.validate().is_valid());
        }
    }

    #[test]
    fn cone_of_zero_is_shift_plus_target() {
        let coeff = f3();
        let a = ChainComplex::new(
            coeff,
            0,
            vec![1, 2],
            vec![Matrix::zero(&coeff, 2, 1)],
            None,
            None,
        )
        .unwrap();
        let b = ChainComplex::unit(coeff, 0);
        let z = ChainMap::zero(a.clone(), b.clone());
        let (c, _, _) = cone(&z).unwrap();
        let expected = direct_sum(coeff, &[&a.shift(1), &b]).unwrap();
        for i in -3..3 {
            assert_eq!(c.rank_at(i), expected.rank_at(i));
            assert_eq!(
                c.homology_unchecked(i).free_rank,
                expected.homology_unchecked(i).free_rank
            );
        }
    }

    #[test]
    fn euler_characteristic_of_cone() {
        let coeff = f2();
        let a = truncated_below(&coeff).window_to(-1, 2);
        let b = a.clone();
        let f = ChainMap::identity(&a);
        let (c, _, _) = cone(&f).unwrap();
        assert_eq!(c.euler_characteristic(), b.euler_characteristic() - a.euler_characteristic());
    }

    #[test]
    fn socle_triple_totalizes_to_acyclic() {
        // 0 -> k -> R -> k -> 0 over R = F_2[x]/(x^2), complexes in degree 0
        let coeff = f2();
        let k = ChainComplex::unit(coeff, 0);
        let r = ChainComplex::new(coeff, 0, vec![2], vec![], None, None).unwrap();
        let soc = ChainMap::new(
            k.clone(),
            r.clone(),
            0,
            vec![Matrix::from_rows_i64(&coeff, &[&[0], &[1]])],
            None,
            None,
        )
        .unwrap();
        let aug = ChainMap::new(
            r.clone(),
            k.clone(),
            0,
            vec![Matrix::from_rows_i64(&coeff, &[&[1, 0]])],
            None,
            None,
        )
        .unwrap();
        let t = ExactTriple::new(soc, aug).unwrap();
        let tot = totalize_exact_triple(&t).unwrap();
        assert!(tot.is_acyclic());
        assert_eq!(tot.window(), (0, 2));
        assert_eq!(tot.rank_at(0), 1);
        assert_eq!(tot.rank_at(1), 2);
        assert_eq!(tot.rank_at(2), 1);
    }

    #[test]
    fn degenerate_triple_with_zero_kernel() {
        let coeff = f2();
        let m = truncated_above(&coeff).window_to(-3, 0);
        let z = ChainComplex::zero(coeff);
        let incl = ChainMap::zero(z.clone(), m.clone());
        let proj = ChainMap::identity(&m);
        let t = ExactTriple::new(incl, proj).unwrap();
        assert!(totalize_exact_triple(&t).unwrap().is_acyclic());
    }

    #[test]
    fn split_triple_over_f3_totalizes_to_acyclic() {
        let coeff = f3();
        let a = ChainComplex::new(
            coeff,
            0,
            vec![1, 1],
            vec![Matrix::from_rows_i64(&coeff, &[&[2]])],
            None,
            None,
        )
        .unwrap();
        let b = ChainComplex::unit(coeff, 1);
        let m = direct_sum(coeff, &[&a, &b]).unwrap();
        let (mlo, mhi) = m.window();
        let incl = ChainMap::new(
            a.clone(),
            m.clone(),
            mlo,
            (mlo..=mhi)
                .map(|i| {
                    let id = Matrix::identity(&coeff, a.rank_at(i));
                    let z = Matrix::zero(&coeff, b.rank_at(i), a.rank_at(i));
                    Matrix::vstack(&coeff, &[&id, &z])
                })
                .collect(),
            None,
            None,
        )
        .unwrap();
        let proj = ChainMap::new(
            m.clone(),
            b.clone(),
            mlo,
            (mlo..=mhi)
                .map(|i| {
                    let z = Matrix::zero(&coeff, b.rank_at(i), a.rank_at(i));
                    let id = Matrix::identity(&coeff, b.rank_at(i));
                    Matrix::hstack(&coeff, &[&z, &id])
                })
                .collect(),
            None,
            None,
        )
        .unwrap();
        let t = ExactTriple::new(incl, proj).unwrap();
        assert!(totalize_exact_triple(&t).unwrap().is_acyclic());
    }

    #[test]
    fn non_exact_triple_is_rejected() {
        let coeff = f2();
        let k = ChainComplex::unit(coeff, 0);
        let incl = ChainMap::identity(&k);
        let proj = ChainMap::identity(&k);
        // k = k -> k is not exact in the middle
        assert!(ExactTriple::new(incl, proj).is_err());
    }

    #[test]
    fn hom_complex_unit() {
        let coeff = f2();
        let k = ChainComplex::unit(coeff, 0);
        let h = hom_complex(&k, &k).unwrap();
        assert_eq!(h.window(), (0, 0));
        assert_eq!(h.homology(0).unwrap().free_rank, 1);
    }

    #[test]
    fn identity_is_a_cycle_in_end_complex() {
        let coeff = f2();
        let a = truncated_below(&coeff).window_to(-1, 2);
        let h = hom_complex(&a, &a).unwrap();
        let basis = HomBasis::layout(&a, &a, 0);
        let idv = basis.encode(&|i| Matrix::identity(&coeff, a.rank_at(i)));
        let d0 = h.diff_at(0);
        assert!(d0.apply(&coeff, &idv).iter().all(|e| coeff.is_zero(e)));
    }

    #[test]
    fn hom_complex_periodic_and_integer_rejected() {
        let coeff = f2();
        let p = periodic_full(&coeff);
        let b = ChainComplex::unit(coeff, 0);
        assert!(matches!(
            hom_complex(&p, &b),
            Err(ChainError::PeriodicUnsupported(_))
        ));
        let z = Coefficient::Int;
        let c = ChainComplex::unit(z, 0);
        assert!(matches!(hom_complex(&c, &c), Err(ChainError::FieldRequired(_))));
    }

    #[test]
    fn direct_sum_adds_homology() {
        let coeff = f2();
        let a = ChainComplex::unit(coeff, 0);
        let b = truncated_below(&coeff).window_to(-1, 1);
        let s = direct_sum(coeff, &[&a, &b]).unwrap();
        for i in -2..3 {
            assert_eq!(
                s.homology_unchecked(i).free_rank,
                a.homology_unchecked(i).free_rank + b.homology_unchecked(i).free_rank
            );
        }
        assert_eq!(direct_sum(coeff, &[]).unwrap(), ChainComplex::zero(coeff));
        assert_eq!(direct_sum(coeff, &[&b]).unwrap(), b);
    }

    #[test]
    fn mixed_coefficients_rejected_in_sum() {
        let a = ChainComplex::unit(f2(), 0);
        let b = ChainComplex::unit(f3(), 0);
        assert!(direct_sum(f2(), &[&a, &b]).is_err());
    }

    #[test]
    fn zero_homotopy_between_equal_maps() {
        let c = truncated_above(&f2()).window_to(-3, 0);
        let f = ChainMap::identity(&c);
        let h = ChainHomotopy::zero(f.clone(), f);
        assert!(h.verify());
    }

    #[test]
    fn contracting_homotopy_of_cone_found_by_solver() {
        let coeff = f2();
        let a = ChainComplex::unit(coeff, 0);
        let (cone_c, _, _) = cone(&ChainMap::identity(&a)).unwrap();
        let id = ChainMap::identity(&cone_c);
        let z = ChainMap::zero(cone_c.clone(), cone_c.clone());
        let h = find_homotopy(&id, &z).expect("cone of identity is contractible");
        assert!(h.verify());
    }

    #[test]
    fn zero_homotopy_rejected_between_distinct_maps() {
        let coeff = f2();
        let a = ChainComplex::unit(coeff, 0);
        let f = ChainMap::identity(&a);
        let g = ChainMap::zero(a.clone(), a.clone());
        let h = ChainHomotopy::zero(f, g);
        assert!(!h.verify());
    }

    #[test]
    fn induced_homology_map_of_identity() {
        let c = truncated_above(&f2()).window_to(-3, 0);
        let f = ChainMap::identity(&c);
        for i in -3..=0 {
            let m = f.induced_on_homology(i);
            assert_eq!(m.rows(), m.cols());
            assert_eq!(matrix::rank(&f2(), &m), m.rows());
        }
    }
}
