use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

/// Where the expected value of a check comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    /// A value stated in the source derivation.
    Paper,
    /// Follows by direct substitution.
    Trivial,
    /// Produced by an independent numerical oracle.
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "PAPER",
            Provenance::Trivial => "TRIVIAL",
            Provenance::Derived => "DERIVED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub notes: String,
}

impl VerificationReport {
    /// Residual-style report: passes iff `|measured| <= tolerance`.
    pub fn residual(
        check_id: impl Into<String>,
        measured: f64,
        tolerance: f64,
        provenance: Provenance,
        notes: impl Into<String>,
    ) -> Self {
        let status = if measured.abs() <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            check_id: check_id.into(),
            status,
            measured,
            tolerance,
            provenance,
            notes: notes.into(),
        }
    }

    /// Report whose pass condition is an arbitrary predicate.
    pub fn predicate(
        check_id: impl Into<String>,
        holds: bool,
        measured: f64,
        tolerance: f64,
        provenance: Provenance,
        notes: impl Into<String>,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            status: if holds { Status::Pass } else { Status::Fail },
            measured,
            tolerance,
            provenance,
            notes: notes.into(),
        }
    }

    pub fn skipped(check_id: impl Into<String>, provenance: Provenance, notes: impl Into<String>) -> Self {
        Self {
            check_id: check_id.into(),
            status: Status::Skipped,
            measured: f64::NAN,
            tolerance: f64::NAN,
            provenance,
            notes: notes.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
