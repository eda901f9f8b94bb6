use serde::Serialize;

use crate::config::{Mode, RunConfig};

/// Names of the checks, in report order.
pub const CHECK_NAMES: [&str; 12] = [
    "normalization",
    "atom_congruence",
    "oracle_equivalence",
    "orlicz_modular",
    "sup_bound",
    "pair_cancellation",
    "separation",
    "rudin_bound",
    "dirichlet_norms",
    "exponent_growth",
    "structural_invariants",
    "determinism",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    /// `None` when the check never ran (aborted run).
    pub measured: Option<f64>,
    pub threshold: f64,
    /// Skipped checks do not count towards the exit code.
    pub skipped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The configuration as it enters the report; output locations and thread
/// counts are left out so that they cannot change the report body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigSummary {
    pub phi: String,
    pub mode: String,
    #[serde(rename = "N")]
    pub big_n: f64,
    pub n: Option<usize>,
    pub grid: usize,
    pub oversample: usize,
    pub tol: f64,
    pub p: Vec<f64>,
}

impl From<&RunConfig> for ConfigSummary {
    fn from(cfg: &RunConfig) -> Self {
        let n = match cfg.mode {
            Mode::Decoupled { n, .. } => Some(n),
            Mode::Schedule { .. } => None,
        };
        Self {
            phi: cfg.phi.to_string(),
            mode: cfg.mode.name().to_string(),
            big_n: cfg.mode.big_n(),
            n,
            grid: cfg.grid_size,
            oversample: cfg.oversample,
            tol: cfg.tol,
            p: cfg.p_list.clone(),
        }
    }
}

/// Headline numbers of one construction; also the CSV row.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConstructionSummary {
    #[serde(rename = "N")]
    pub big_n: f64,
    pub n: usize,
    pub c: Option<f64>,
    #[serde(rename = "absD")]
    pub abs_d: Option<f64>,
    pub margin: Option<f64>,
    pub modular: Option<f64>,
    pub luxemburg: Option<f64>,
    pub sup_m: Option<f64>,
    /// `max_k` of the atom decay constant (needs `n ≥ 2`).
    pub c7: Option<f64>,
    /// `max_k` of the pair difference constant.
    pub c8: Option<f64>,
    pub ratio_p4: Option<f64>,
    pub slope_p4: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub version: String,
    pub grid: usize,
    pub rs_sweep_max: usize,
    pub sup_oversample: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub config: ConfigSummary,
    pub construction: Option<ConstructionSummary>,
    pub checks: Vec<CheckRecord>,
    pub aborted: bool,
    /// Stage that failed, for aborted runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub environment: Environment,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `true` iff the run completed and every non-skipped check passed.
    pub fn all_passed(&self) -> bool {
        !self.aborted && self.checks.iter().all(|c| c.skipped || c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise") + "\n"
    }
}
