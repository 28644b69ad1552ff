//! Bounded checks over weak topologies that emit re-checkable reports.

mod builders;
mod checks;
mod continuity;

pub use builders::{build_antichain, build_chain, AntichainFlavor, ChainFlavor, Family};
pub use checks::{
    check_hausdorff, check_inversion_continuity, check_sigma_accumulation, check_tau_l_identities,
    check_trace_equality,
};
pub use continuity::{check_shift_continuity, check_shift_continuity_impostor, ShiftCase};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckVerdict {
    Pass,
    Fail { counterexample: Value },
    Unknown { bound: u64 },
}

/// One check, serialised as a single line of the machine report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub inputs: Vec<Value>,
    pub params: Value,
    pub verdict: CheckVerdict,
    pub witnesses: Vec<Value>,
}

impl CheckReport {
    pub fn is_pass(&self) -> bool {
        self.verdict == CheckVerdict::Pass
    }

    pub fn is_fail(&self) -> bool {
        matches!(self.verdict, CheckVerdict::Fail { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.verdict, CheckVerdict::Unknown { .. })
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialise")
    }
}
