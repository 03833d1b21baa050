//! Validation reports: every violated invariant with its location.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Where the invariant fails, e.g. `degree 3` or `triple (a,b,c)`.
    pub location: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> ValidationReport {
        ValidationReport { violations: Vec::new() }
    }

    pub fn push(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation { location: location.into(), message: message.into() });
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, prefix: &str, other: ValidationReport) {
        for v in other.violations {
            let mut location = String::from(prefix);
            if !v.location.is_empty() {
                location.push_str(": ");
                location.push_str(&v.location);
            }
            self.violations.push(Violation { location, message: v.message });
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "[{}] {}", v.location, v.message)?;
        }
        Ok(())
    }
}
