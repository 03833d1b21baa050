//! Exact-arithmetic toolkit for desk-scale homological algebra: chain
//! complexes with eventually-periodic windows, finite simplicial sets and
//! horn filling, the Dold-Kan correspondence, small DG-categories and their
//! differential graded nerve, coalgebra comodule/contramodule machinery,
//! certificate-checked co/contraacyclicity, and curved (CDG) modules.
//!
//! Everything is exact: coefficients are prime fields, the rationals or the
//! integers, and no operation ever touches floating point. All values are
//! immutable after construction and all operations are pure functions, so
//! results are reproducible bit for bit.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod budget;
pub mod cat;
pub mod cdg;
pub mod chain;
pub mod comod;
pub mod derived;
pub mod dgcat;
pub mod dgnerve;
pub mod dold_kan;
pub mod matrix;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod sset;

pub use budget::{Budget, BudgetExceeded};
pub use matrix::Matrix;
pub use report::ValidationReport;
pub use scalar::{Coefficient, Scalar};
