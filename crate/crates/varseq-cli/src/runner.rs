//! Executes the requested tasks in dependency order and assembles the
//! report.

use std::time::Instant;

use rand::Rng;
use varseq_core::text::{expr_to_text, form_to_text};
use varseq_core::variational::{
    helmholtz, lagrangian, nbh_analysis, noether_current, source_form_coefficients,
    DifferentialIdeal, NbhOptions, VariationalClass,
};
use varseq_core::Error as CoreError;

use crate::problem::{Problem, Task};
use crate::report::*;

pub struct RunOutcome {
    pub report: ReportDocument,
    pub verification_failed: bool,
}

pub fn run(problem: &Problem, onshell_cap: Option<usize>, seed: u64) -> Result<RunOutcome, String> {
    let started = Instant::now();
    let ctx = &problem.ctx;
    let mut results = Results::default();
    let mut warnings: Vec<String> = Vec::new();
    let mut failures: Vec<String> = Vec::new();

    let lam_class = match &problem.lagrangian {
        Some(form) => Some(lagrangian(form).map_err(|e| e.to_string())?),
        None => None,
    };
    let source_class = match &problem.source_form {
        Some(form) => Some(VariationalClass::of(form).map_err(|e| e.to_string())?),
        None => None,
    };

    let wants = |t: Task| problem.spec.tasks.contains(&t);

    // Euler–Lagrange first: several tasks depend on it.
    let el_class = match &lam_class {
        Some(lam) => Some(
            varseq_core::variational::euler_lagrange(lam).map_err(|e| e.to_string())?,
        ),
        None => None,
    };
    if wants(Task::EulerLagrange) {
        let el = el_class.as_ref().expect("validated: lagrangian present");
        let coeffs = source_form_coefficients(el).map_err(|e| e.to_string())?;
        results.euler_lagrange = Some(EulerLagrangeResult {
            coefficients: coeffs.iter().map(|c| expr_to_text(ctx, c)).collect(),
            source_form: form_to_text(ctx, el.rep()),
        });
    }

    // the dynamical form used by symmetry-style tasks
    let eta_class = source_class.clone().or_else(|| el_class.clone());

    if wants(Task::Helmholtz) {
        let eta = eta_class
            .as_ref()
            .expect("validated: source form or lagrangian present");
        let h = helmholtz(eta).map_err(|e| e.to_string())?;
        results.helmholtz = Some(HelmholtzResult {
            locally_variational: h.is_zero(),
            representative: form_to_text(ctx, h.rep()),
        });
    }

    if wants(Task::Symmetry) {
        let eta = eta_class.as_ref().expect("validated");
        if !helmholtz(eta).map_err(|e| e.to_string())?.is_zero() {
            failures.push(
                "symmetry task: the dynamical form is not locally variational".to_string(),
            );
        } else {
            let mut list = Vec::new();
            for (name, field) in &problem.fields {
                let lie = eta.lie_derive(field).map_err(|e| e.to_string())?;
                list.push(SymmetryResult {
                    field: name.clone(),
                    is_symmetry: lie.is_zero(),
                    lie_derivative: form_to_text(ctx, lie.rep()),
                });
            }
            results.symmetry = Some(list);
        }
    }

    if wants(Task::Noether) {
        let lam = lam_class.as_ref().expect("validated");
        let mut list = Vec::new();
        for (name, field) in &problem.fields {
            match noether_current(lam, field) {
                Ok(data) => list.push(NoetherResult {
                    field: name.clone(),
                    momentum: form_to_text(ctx, &data.momentum),
                    current: form_to_text(ctx, &data.current),
                    identity_residual: "0".to_string(),
                }),
                Err(e) => failures.push(format!("noether[{name}]: {e}")),
            }
        }
        results.noether = Some(list);
        warnings.push(
            "momenta and currents are canonical representatives, fixed only up to d_H-closed terms"
                .to_string(),
        );
    }

    let mut nbh_reports = Vec::new();
    if wants(Task::Nbh) {
        let lam = lam_class.as_ref().expect("validated");
        let mut list = Vec::new();
        for (name, field) in &problem.fields {
            let opts = NbhOptions {
                mu: problem.mu.clone(),
                cap: onshell_cap,
            };
            match nbh_analysis(lam, field, &opts) {
                Ok(rep) => {
                    let mu = rep.mu.as_ref().map(|m| MuReport {
                        is_noether_current: m.shifted_invariant && m.beta_matches_lie_mu,
                        shifted_invariant: m.shifted_invariant,
                        lie_mu: form_to_text(ctx, &m.lie_mu),
                        beta_matches_lie_mu: m.beta_matches_lie_mu,
                        exact_branch: m.exact_branch,
                        exact_momentum_vanishes: m.exact_momentum_vanishes,
                        vertical_split_ok: m.vertical_split_ok,
                        noether_hypothesis: m.noether_hypothesis,
                        potential: m.potential.as_ref().map(|p| form_to_text(ctx, p)),
                        potential_residual: m
                            .potential_residual
                            .as_ref()
                            .map(|(r, _)| form_to_text(ctx, r)),
                    });
                    if !rep.onshell_conserved {
                        failures.push(format!(
                            "nbh[{name}]: divergence did not reduce to zero on shell"
                        ));
                    }
                    list.push(NbhResult {
                        field: name.clone(),
                        current: form_to_text(ctx, &rep.current),
                        boundary: form_to_text(ctx, &rep.boundary),
                        nbh_current: form_to_text(ctx, &rep.nbh_current),
                        onshell_divergence: form_to_text(ctx, &rep.divergence_reduction.0),
                        conserved: rep.onshell_conserved,
                        conclusive: rep.divergence_reduction.1,
                        mu: mu.clone(),
                    });
                    nbh_reports.push((name.clone(), rep));
                }
                Err(CoreError::NotASymmetry) => {
                    failures.push(format!(
                        "nbh[{name}]: the field is not a generalized symmetry of the field equations"
                    ));
                }
                Err(e) => failures.push(format!("nbh[{name}]: {e}")),
            }
        }
        results.nbh = Some(list);
        warnings.push(
            "currents and boundary terms are local to the coordinate chart; global obstructions are not analyzed"
                .to_string(),
        );
        if problem.mu.is_some() {
            warnings.push(
                "the trivial-Lagrangian comparison fixes gauges canonically; potentials are defined up to d_H-closed terms".to_string(),
            );
        }
    }

    if wants(Task::OnShell) {
        let lam = lam_class
            .as_ref()
            .ok_or_else(|| "task `on_shell` needs a lagrangian".to_string())?;
        let el = el_class.as_ref().expect("derived above");
        let coeffs = source_form_coefficients(el).map_err(|e| e.to_string())?;
        let cap = onshell_cap.unwrap_or(2 * lam.source_order() + 2);
        let ideal = DifferentialIdeal::with_base_dim(&coeffs, ctx.base_dim(), cap);
        let mut list = Vec::new();
        let mut rng = varseq_core::gen::rng(seed);
        for (name, field) in &problem.fields {
            let data = match noether_current(lam, field) {
                Ok(d) => d,
                Err(e) => {
                    failures.push(format!("on_shell[{name}]: {e}"));
                    continue;
                }
            };
            // the conserved object for a generalized symmetry is ε − β
            let beta = match varseq_core::variational::bessel_hagen_boundary(lam, field) {
                Ok(b) => b,
                Err(CoreError::NotADivergence) => {
                    failures.push(format!(
                        "on_shell[{name}]: the field is not a generalized symmetry of the field equations"
                    ));
                    continue;
                }
                Err(e) => {
                    failures.push(format!("on_shell[{name}]: {e}"));
                    continue;
                }
            };
            let conserved_current = data.current.sub(&beta).map_err(|e| e.to_string())?;
            let div = conserved_current.horizontal_differential();
            let (reduced, conclusive) =
                ideal.reduce_form(&div).map_err(|e| e.to_string())?;
            // spot checks along provided sections: the reduced divergence is
            // itself evaluated; a solution section should also kill the
            // Euler–Lagrange coefficients at the sample points
            let mut samples = Vec::new();
            for (si, section) in problem.sections.iter().enumerate() {
                for _ in 0..3 {
                    let point: Vec<f64> =
                        (0..ctx.base_dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let mut total = 0.0f64;
                    for (_, coeff) in reduced.terms() {
                        total += varseq_core::numeric::eval_on_section(coeff, section, &point)
                            .map_err(|e| e.to_string())?;
                    }
                    samples.push(OnShellSample {
                        section: si,
                        point,
                        value: total,
                    });
                }
            }
            list.push(OnShellResult {
                field: name.clone(),
                current: form_to_text(ctx, &conserved_current),
                divergence_reduced: form_to_text(ctx, &reduced),
                conclusive,
                vanishes_on_shell: reduced.is_zero(),
                numeric_samples: samples,
            });
        }
        results.on_shell = Some(list);
    }

    let verification_failed = !failures.is_empty();
    let report = ReportDocument {
        inputs: problem.spec.clone(),
        results,
        warnings,
        verification: Verification {
            all_passed: !verification_failed,
            failures,
        },
        timing_ms: started.elapsed().as_millis(),
    };
    Ok(RunOutcome {
        report,
        verification_failed,
    })
}
