//! Executable checks of the heat-equation and transfer-equation results,
//! plus the general counterexamples and self-tests.
//!
//! Every check returns a [`CaseReport`] listing individual findings. A report
//! passes when every finding does; expected disagreements with printed
//! formulas are recorded as notes instead of failures.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::Result;

mod general;
pub(crate) mod heat;
pub(crate) mod transfer;

pub use general::{counterexamples, definition1_degeneracy, lemma_check, master_identity};
pub use heat::{
    heat_algebra, heat_context, heat_lie_algebra_check, heat_system, template1, template2, theorem1_determining_systems,
    theorem4_map, theorem4_nonlocal_map, theorem4_random, theorem5_hodograph_check, theorem5_random, theorems2_3_symmetry_checks,
    theta_compatibility_oracle,
};
pub use transfer::{h_of_t, theorem6_transfer_algebra, transfer_context, transfer_qcond_and_solutions, transfer_system, Reading, TRANSFER_READING};

/// One finding inside a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub ok: bool,
    pub detail: String,
}

/// Result of running one case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseReport {
    pub id: String,
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl CaseReport {
    pub fn new(id: &str, title: &str) -> Self {
        CaseReport { id: id.into(), title: title.into(), checks: Vec::new(), notes: Vec::new() }
    }

    pub fn check(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { label: label.into(), ok, detail: detail.into() });
        ok
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    /// Plain-text rendering; deterministic.
    pub fn render(&self) -> String {
        let mut s = format!("== {} [{}] {}\n", self.id, if self.passed() { "PASS" } else { "FAIL" }, self.title);
        for c in &self.checks {
            s.push_str(&format!("  {} {}", if c.ok { "ok  " } else { "FAIL" }, c.label));
            if !c.detail.is_empty() {
                s.push_str(&format!(": {}", c.detail));
            }
            s.push('\n');
        }
        for n in &self.notes {
            s.push_str(&format!("  note: {n}\n"));
        }
        s
    }
}

/// Identifiers accepted by [`run_case`].
pub const CASE_IDS: &[&str] = &[
    "identity",
    "heat.algebra",
    "thm1",
    "thm2-3",
    "thm4",
    "thm5",
    "thm6",
    "transfer.qcond",
    "counterexamples",
    "def1",
    "lemma",
];

/// Runs one case by identifier; `seed` drives the randomized ones.
pub fn run_case(id: &str, seed: u64) -> Result<CaseReport> {
    match id {
        "identity" => master_identity(seed, 100),
        "heat.algebra" => heat_lie_algebra_check(),
        "thm1" => theorem1_determining_systems(),
        "thm2-3" => theorems2_3_symmetry_checks(),
        "thm4" => theorem4_random(seed, 20),
        "thm5" => theorem5_random(seed, 20),
        "thm6" => theorem6_transfer_algebra(),
        "transfer.qcond" => transfer_qcond_and_solutions(2),
        "counterexamples" => counterexamples(),
        "def1" => definition1_degeneracy(seed, 20),
        "lemma" => lemma_check(seed, 5),
        other => Err(crate::Error::UnknownSymbol(format!("casebook entry `{other}`"))),
    }
}

/// Runs every case in order.
pub fn run_all(seed: u64) -> Result<Vec<CaseReport>> {
    CASE_IDS.iter().map(|id| run_case(id, seed)).collect()
}
