//! Machine-readable report model. Every symbolic payload is serialized in
//! the input grammar so a report can be re-ingested, and every claimed
//! identity carries its recorded residual.

use serde::{Deserialize, Serialize};

use crate::problem::ProblemSpec;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EulerLagrangeResult {
    pub coefficients: Vec<String>,
    pub source_form: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HelmholtzResult {
    pub locally_variational: bool,
    pub representative: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryResult {
    pub field: String,
    pub is_symmetry: bool,
    pub lie_derivative: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoetherResult {
    pub field: String,
    pub momentum: String,
    pub current: String,
    /// Residual of 𝓛_Ξλ − Ξ_V⌟E(λ) − d_Hε, re-verified before emission.
    pub identity_residual: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MuReport {
    /// The Noether–Bessel-Hagen current is a Noether current for this μ:
    /// 𝓛_Ξ(λ − d_Hμ) = 0 and β − 𝓛_Ξμ is closed.
    pub is_noether_current: bool,
    pub shifted_invariant: bool,
    pub lie_mu: String,
    pub beta_matches_lie_mu: bool,
    pub exact_branch: bool,
    pub exact_momentum_vanishes: bool,
    pub vertical_split_ok: bool,
    pub noether_hypothesis: bool,
    pub potential: Option<String>,
    pub potential_residual: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NbhResult {
    pub field: String,
    pub current: String,
    pub boundary: String,
    pub nbh_current: String,
    pub onshell_divergence: String,
    pub conserved: bool,
    pub conclusive: bool,
    pub mu: Option<MuReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OnShellSample {
    pub section: usize,
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OnShellResult {
    pub field: String,
    pub current: String,
    pub divergence_reduced: String,
    pub conclusive: bool,
    pub vanishes_on_shell: bool,
    /// Spot checks of the reduced divergence along provided sections;
    /// nonzero values flag sections that are not solutions.
    pub numeric_samples: Vec<OnShellSample>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_lagrange: Option<EulerLagrangeResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub helmholtz: Option<HelmholtzResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<Vec<SymmetryResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noether: Option<Vec<NoetherResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nbh: Option<Vec<NbhResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub on_shell: Option<Vec<OnShellResult>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verification {
    pub all_passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDocument {
    pub inputs: ProblemSpec,
    pub results: Results,
    pub warnings: Vec<String>,
    pub verification: Verification,
    pub timing_ms: u128,
}

impl ReportDocument {
    pub fn human_summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "varseq report — {} task(s), {} warning(s), {} ms\n",
            self.inputs.tasks.len(),
            self.warnings.len(),
            self.timing_ms
        ));
        if let Some(el) = &self.results.euler_lagrange {
            out.push_str("euler_lagrange:\n");
            for (i, c) in el.coefficients.iter().enumerate() {
                out.push_str(&format!("  E_{} = {}\n", i + 1, c));
            }
        }
        if let Some(h) = &self.results.helmholtz {
            out.push_str(&format!(
                "helmholtz: {}\n",
                if h.locally_variational {
                    "locally variational"
                } else {
                    "not locally variational"
                }
            ));
        }
        if let Some(list) = &self.results.symmetry {
            for s in list {
                out.push_str(&format!(
                    "symmetry[{}]: {}\n",
                    s.field,
                    if s.is_symmetry { "yes" } else { "no" }
                ));
            }
        }
        if let Some(list) = &self.results.noether {
            for r in list {
                out.push_str(&format!("noether[{}]: current = {}\n", r.field, r.current));
            }
        }
        if let Some(list) = &self.results.nbh {
            for r in list {
                out.push_str(&format!(
                    "nbh[{}]: current = {} ({})\n",
                    r.field,
                    r.nbh_current,
                    if r.conserved {
                        "conserved on shell"
                    } else {
                        "divergence did not reduce to zero"
                    }
                ));
            }
        }
        if let Some(list) = &self.results.on_shell {
            for r in list {
                out.push_str(&format!(
                    "on_shell[{}]: reduced divergence = {}\n",
                    r.field, r.divergence_reduced
                ));
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out.push_str(&format!(
            "verification: {}\n",
            if self.verification.all_passed {
                "all checks passed".to_string()
            } else {
                format!("FAILED — {}", self.verification.failures.join("; "))
            }
        ));
        out
    }
}
