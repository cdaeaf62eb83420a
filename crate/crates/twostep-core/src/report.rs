//! Machine-readable verification reports.
//!
//! Reports are serialized with a fixed field order so identical runs produce
//! byte-identical JSON.

use serde::Serialize;

/// Outcome of a single named check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckEntry {
    pub fn new(name: &str, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }
}

/// Echo of the configuration a report was produced with.
#[derive(Clone, Debug, Serialize)]
pub struct ReportConfig {
    pub lambdas: Vec<f64>,
    pub pair: [usize; 2],
    pub t_samples: u32,
    pub rk_step: f64,
    pub tol_alg: f64,
    pub tol_ode: f64,
    pub tol_defect: f64,
}

/// Aggregated verdicts of a verification run on one space.
///
/// All verdicts are stated at the algebra level (ad-invariance); connectedness
/// of the isotropy group is an assumption recorded by `assumed_connected`,
/// not something checked from matrix data.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub space: String,
    pub seed: u64,
    pub trials: u32,
    pub assumed_connected: bool,
    pub config: ReportConfig,
    pub checks: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
