//! Momenta, Noether currents, divergence antiderivatives and the
//! Noether–Bessel-Hagen current analysis.

use crate::error::{Error, Result};
use crate::fields::ProjectableField;
use crate::form::DiffForm;
use crate::multiindex::MultiIndex;
use crate::Expr;

use super::euler::interior_euler_decompose;
use super::lie::{radial_integral, transport_sum};
use super::onshell::DifferentialIdeal;
use super::{euler_lagrange, source_form_coefficients, VariationalClass};

/// Canonical momentum −p_1 R(dρ) of a class, computed from its stored form.
/// Classes built as images of the sequence map carry an exact form, whose
/// momentum vanishes identically.
pub fn momentum_form(class: &VariationalClass) -> Result<DiffForm> {
    let d_raw = class.raw().exterior_differential();
    let dec = interior_euler_decompose(&d_raw, 1)?;
    let residual = dec.residual.ok_or_else(|| {
        Error::Internal("momentum needs a full-horizontal-degree decomposition".into())
    })?;
    Ok(residual.contact_component(1).neg())
}

/// Generalized momentum data of a class of degree q ≤ n−1: the ζ family of
/// the differential of its representative; its transport sum is the exact
/// vertical boundary entering the Cartan identity at that degree.
pub fn generalized_momentum(
    alpha: &VariationalClass,
) -> Result<super::euler::EulerDecomposition> {
    let n = alpha.ctx().base_dim();
    if alpha.degree() >= n {
        return Err(Error::DegreeMismatch {
            expected: n - 1,
            got: alpha.degree(),
        });
    }
    interior_euler_decompose(&alpha.rep().exterior_differential(), 1)
}

/// Data of one Noether-current computation.
#[derive(Debug, Clone)]
pub struct NoetherData {
    /// Canonical momentum of the Lagrangian.
    pub momentum: DiffForm,
    /// The current ε = h(Ξ_V ⌟ p) + Ξ_H ⌟ λ.
    pub current: DiffForm,
    /// The Euler–Lagrange class E(λ).
    pub euler: VariationalClass,
    /// h(L_{jΞ} λ).
    pub lie_rep: DiffForm,
}

/// The first Noether theorem as a computation: builds the canonical current
/// and re-verifies 𝓛_Ξλ = Ξ_V ⌟ E(λ) + d_H ε before returning.
pub fn noether_current(
    lambda: &VariationalClass,
    field: &ProjectableField,
) -> Result<NoetherData> {
    let n = lambda.ctx().base_dim();
    if lambda.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            got: lambda.degree(),
        });
    }
    if !lambda.raw().is_horizontal() {
        return Err(Error::Internal(
            "the canonical Noether current needs a Lagrangian given by a horizontal form".into(),
        ));
    }
    let theta = lambda.rep().clone();
    let pr = field.prolong(theta.order() + 1);

    let momentum = momentum_form(lambda)?;
    let vertical_part = pr.contract_vertical(&momentum).horizontalize();
    let horizontal_part = pr.contract_horizontal(&theta);
    let current = vertical_part.add(&horizontal_part)?;

    let euler = euler_lagrange(lambda)?;
    let lie_rep = field.lie_derivative(&theta).horizontalize();

    // re-verify the identity; a nonzero residual is a convention bug
    let source_term = pr.contract(euler.rep()).horizontalize();
    let residual = lie_rep
        .sub(&source_term)?
        .sub(&current.horizontal_differential())?;
    if !residual.is_zero() {
        return Err(Error::Internal(
            "Noether identity residual is nonzero".into(),
        ));
    }

    Ok(NoetherData {
        momentum,
        current,
        euler,
        lie_rep,
    })
}

/// Horizontal antiderivative of an exact divergence: given a horizontal
/// n-form σ with vanishing Euler–Lagrange image, produces β with d_H β = σ
/// through the fiber-radial homotopy plus a base-line integral; fails with
/// [`Error::NotADivergence`] when the input is not a total divergence.
pub fn divergence_antiderivative(sigma: &DiffForm) -> Result<DiffForm> {
    let ctx = sigma.ctx().clone();
    let n = ctx.base_dim();
    if sigma.degree() != n || !sigma.is_horizontal() {
        return Err(Error::DegreeMismatch {
            expected: n,
            got: sigma.degree(),
        });
    }
    if sigma.is_zero() {
        return Ok(DiffForm::zero(ctx, sigma.order(), n - 1));
    }

    // fiber-radial part: −∫₀¹ (1/t) [jR ⌟ p₁R(dσ)]|_{t·y} dt
    let dec = interior_euler_decompose(&sigma.exterior_differential(), 1)?;
    let residual = dec
        .residual
        .ok_or_else(|| Error::Internal("divergence decomposition lost the residual".into()))?;
    let radial = ProjectableField::new(
        ctx.clone(),
        vec![Expr::zero(); n],
        (0..ctx.fiber_dim())
            .map(|a| Expr::fiber_var(a, MultiIndex::empty()))
            .collect(),
    )?;
    let pr = radial.prolong(residual.order());
    let kappa = pr.contract(&residual).horizontalize();
    let mut fiber_part = DiffForm::zero(ctx.clone(), kappa.order(), n - 1);
    for (covs, coeff) in kappa.terms() {
        let integrated = radial_integral(coeff)?;
        let piece = DiffForm::from_parts(
            ctx.clone(),
            kappa.order(),
            n - 1,
            [(covs.clone(), integrated)].into_iter().collect(),
        );
        fiber_part = fiber_part.add(&piece)?;
    }

    // base part: integrate the fiber-independent remainder along x^1
    let mut base_coefficient = Expr::zero();
    for (_, coeff) in sigma.terms() {
        for (m, c) in coeff.terms() {
            if m.fiber_degree() == 0 {
                base_coefficient.add_term(m.clone(), c.clone());
            }
        }
    }
    let base_integrated = base_antiderivative(&base_coefficient, 0);
    let base_part = DiffForm::covolume(ctx.clone(), sigma.order(), &[0]).scale(&base_integrated);

    let beta = base_part.sub(&fiber_part)?;

    // final check doubles as the divergence test
    if !beta.horizontal_differential().equiv(sigma) {
        return Err(Error::NotADivergence);
    }
    Ok(beta)
}

/// Polynomial antiderivative in one base coordinate.
fn base_antiderivative(e: &Expr, dir: usize) -> Expr {
    use crate::poly::{JetVariable, Mono};
    let mut out = Expr::zero();
    for (m, c) in e.terms() {
        let v = JetVariable::Base(dir);
        let exp = m.exponent_of(&v);
        let bumped = m.mul(&Mono::var(v));
        out.add_term(bumped, c.clone() / <crate::poly::Rat as crate::poly::Coeff>::from_i64(exp as i64 + 1));
    }
    out
}

/// Boundary term β with d_H β = 𝓛_Ξ λ for a generalized symmetry; the
/// precondition E(𝓛_Ξλ) = 0 is checked and its failure reported as
/// [`Error::NotADivergence`].
pub fn bessel_hagen_boundary(
    lambda: &VariationalClass,
    field: &ProjectableField,
) -> Result<DiffForm> {
    let lie_class = lambda.lie_derive(field)?;
    if !lie_class.euler_map()?.is_zero() {
        return Err(Error::NotADivergence);
    }
    divergence_antiderivative(lie_class.rep())
}

/// Options for the Noether–Bessel-Hagen analysis.
#[derive(Debug, Clone, Default)]
pub struct NbhOptions {
    /// Optional current μ entering the trivial-Lagrangian comparison.
    pub mu: Option<DiffForm>,
    /// Jet-order cap of the on-shell ideal; defaults to 2r+2.
    pub cap: Option<usize>,
}

/// Results of the μ-comparison branch.
#[derive(Debug, Clone)]
pub struct MuAnalysis {
    /// 𝓛_Ξ(λ − d_Hμ) = 0.
    pub shifted_invariant: bool,
    /// Representative of 𝓛_Ξ μ.
    pub lie_mu: DiffForm,
    /// d_H(β − 𝓛_Ξμ) = 0.
    pub beta_matches_lie_mu: bool,
    /// β = 𝓛_Ξμ exactly.
    pub exact_branch: bool,
    /// The canonical momentum of the exact class [dμ] vanishes, hence
    /// d_H(Ξ_V ⌟ p_{d_V d_Hμ}) = 0.
    pub exact_momentum_vanishes: bool,
    /// h(Ξ_V ⌟ p₁ dμ) = h(Ξ_V ⌟ I(dμ)) + transport, exactly.
    pub vertical_split_ok: bool,
    /// ε − 𝓛_Ξμ − Ξ_H⌟d_Hμ is exactly d_H-closed (the canonical-current
    /// hypothesis backing the potential claim).
    pub noether_hypothesis: bool,
    /// The produced potential Ξ_H⌟μ + (ζ-extracted vertical part), when the
    /// hypothesis holds and n ≥ 2.
    pub potential: Option<DiffForm>,
    /// Reduced residual of ε − 𝓛_Ξμ − d_H(potential) modulo the ideal,
    /// with conclusiveness flag.
    pub potential_residual: Option<(DiffForm, bool)>,
}

/// Full report of one Noether–Bessel-Hagen analysis.
#[derive(Debug, Clone)]
pub struct NbhReport {
    /// ε, the canonical Noether current.
    pub current: DiffForm,
    /// β with d_H β = 𝓛_Ξλ (homotopy gauge).
    pub boundary: DiffForm,
    /// The Noether–Bessel-Hagen current ε − β.
    pub nbh_current: DiffForm,
    /// d_H(ε − β) reduced modulo the Euler–Lagrange ideal; conclusiveness.
    pub divergence_reduction: (DiffForm, bool),
    /// Whether the reduced divergence vanished.
    pub onshell_conserved: bool,
    /// Euler–Lagrange coefficients generating the ideal.
    pub euler_coefficients: Vec<Expr>,
    /// Ideal cap used.
    pub cap: usize,
    pub mu: Option<MuAnalysis>,
}

/// Splits the transport sum of a decomposition into a d_H-exact part (the
/// extracted potential) and a remainder, using
/// D_i(h ω_j) = D_j(h) ω_i − d_H(h ω_{ij}) on the off-diagonal pieces.
fn transport_extraction(
    dec: &super::euler::EulerDecomposition,
    field: &ProjectableField,
    degree: usize,
) -> Result<(DiffForm, DiffForm)> {
    let ctx = dec.contact_part.ctx().clone();
    let n = ctx.base_dim();
    let pr = field.prolong(1);
    let mut pot = DiffForm::zero(ctx.clone(), 1, degree.saturating_sub(1));
    let mut rem = DiffForm::zero(ctx.clone(), 1, degree);
    for ((alpha, index), zeta) in &dec.zeta {
        let vc = pr.vertical_component(*alpha, &MultiIndex::empty());
        if vc.is_zero() {
            continue;
        }
        let i = index.max_entry().expect("nonempty zeta index");
        let parent = index.remove_one(i).expect("entry present");
        let h_form = zeta.scale(&vc).form_total_derivative_multi(&parent);
        // coordinates of h_form in the co-volume basis: the word missing
        // direction j is (−1)^j ω_j
        for (covs, coeff) in h_form.terms() {
            let present: Vec<usize> = covs
                .iter()
                .filter_map(|c| match c {
                    crate::form::Covector::Dx(k) => Some(*k),
                    _ => None,
                })
                .collect();
            if present.len() != n - 1 || present.len() != covs.len() {
                return Err(Error::Internal(
                    "transport extraction expects horizontal co-volume words".into(),
                ));
            }
            let j = (0..n)
                .find(|k| !present.contains(k))
                .expect("one missing direction");
            let mut h = coeff.clone();
            if j % 2 == 1 {
                h = h.neg();
            }
            let h_omega_j = DiffForm::covolume(ctx.clone(), 1, &[j]).scale(&h);
            if j == i {
                rem = rem.add(&h_omega_j.form_total_derivative(i))?;
            } else {
                // D_i(h ω_j) = D_j(h) ω_i − d_H(h ω_{ij})
                let dj_h = h.total_derivative(j);
                let rem_piece = DiffForm::covolume(ctx.clone(), 1, &[i]).scale(&dj_h);
                rem = rem.add(&rem_piece)?;
                let pot_piece = DiffForm::covolume(ctx.clone(), 1, &[i, j]).scale(&h);
                pot = pot.sub(&pot_piece)?;
            }
        }
    }
    Ok((pot, rem))
}

/// Runs the Noether–Bessel-Hagen analysis for a generalized symmetry of the
/// Euler–Lagrange class of λ; a non-symmetry field is rejected.
pub fn nbh_analysis(
    lambda: &VariationalClass,
    field: &ProjectableField,
    options: &NbhOptions,
) -> Result<NbhReport> {
    let ctx = lambda.ctx().clone();
    let n = ctx.base_dim();
    let euler = euler_lagrange(lambda)?;
    if !euler.lie_derive(field)?.is_zero() {
        return Err(Error::NotASymmetry);
    }
    let euler_coefficients = source_form_coefficients(&euler)?;
    let cap = options.cap.unwrap_or(2 * lambda.source_order() + 2);
    let ideal = DifferentialIdeal::with_base_dim(&euler_coefficients, n, cap);

    let noether = noether_current(lambda, field)?;
    let beta = bessel_hagen_boundary(lambda, field)?;
    let nbh_current = noether.current.sub(&beta)?;

    let divergence = nbh_current.horizontal_differential();
    let divergence_reduction = ideal.reduce_form(&divergence)?;
    let onshell_conserved = divergence_reduction.0.is_zero();

    let mu_analysis = if let Some(mu_form) = &options.mu {
        if mu_form.degree() != n - 1 || !mu_form.is_horizontal() {
            return Err(Error::DegreeMismatch {
                expected: n - 1,
                got: mu_form.degree(),
            });
        }
        let mu_class = VariationalClass::of(mu_form)?;
        let d_mu_class = mu_class.euler_map()?;

        let shifted = lambda.sub(&d_mu_class)?;
        let shifted_invariant = shifted.lie_derive(field)?.is_zero();

        let lie_mu = mu_class.lie_derive(field)?.rep().clone();
        let beta_diff = beta.sub(&lie_mu)?;
        let beta_matches_lie_mu = beta_diff.horizontal_differential().is_zero();
        let exact_branch = beta_diff.is_zero();

        let exact_momentum = momentum_form(&d_mu_class)?;
        let exact_momentum_vanishes = exact_momentum.is_zero();

        // vertical-contraction splitting of d(hμ)
        let mu_rep = mu_class.rep().clone();
        let pr = field.prolong(mu_rep.order() + 1);
        let dec_mu = interior_euler_decompose(&mu_rep.exterior_differential(), 1)?;
        let lhs = pr
            .contract_vertical(&dec_mu.contact_part)
            .horizontalize();
        let transport =
            transport_sum(&dec_mu, field, mu_rep.degree(), mu_rep.order())?;
        let rhs = pr
            .contract(&dec_mu.source)
            .horizontalize()
            .add(&transport)?;
        let vertical_split_ok = lhs.equiv(&rhs);

        // canonical-current hypothesis: ε − 𝓛μ − Ξ_H⌟d_Hμ exactly closed
        let trivial_current = pr.contract_horizontal(d_mu_class.rep());
        let delta = noether
            .current
            .sub(&lie_mu)?
            .sub(&trivial_current)?;
        let noether_hypothesis = delta.horizontal_differential().is_zero();

        let (potential, potential_residual) = if noether_hypothesis && n >= 2 {
            let (pot_v, _rem) = transport_extraction(&dec_mu, field, mu_rep.degree())?;
            let pot = pr.contract_horizontal(&mu_rep).add(&pot_v)?.neg();
            let claim = noether
                .current
                .sub(&lie_mu)?
                .sub(&pot.horizontal_differential())?;
            let reduced = ideal.reduce_form(&claim)?;
            (Some(pot), Some(reduced))
        } else {
            (None, None)
        };

        Some(MuAnalysis {
            shifted_invariant,
            lie_mu,
            beta_matches_lie_mu,
            exact_branch,
            exact_momentum_vanishes,
            vertical_split_ok,
            noether_hypothesis,
            potential,
            potential_residual,
        })
    } else {
        None
    };

    Ok(NbhReport {
        current: noether.current,
        boundary: beta,
        nbh_current,
        divergence_reduction,
        onshell_conserved,
        euler_coefficients,
        cap,
        mu: mu_analysis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::JetContext;

    #[test]
    fn antiderivative_of_a_known_divergence() {
        // u_x dx = d_H u
        let ctx = JetContext::simple(1, 1, 1);
        let sigma = DiffForm::dx(ctx.clone(), 1, 0)
            .scale(&Expr::fiber_var(0, MultiIndex::single(0)));
        let beta = divergence_antiderivative(&sigma).unwrap();
        let expected =
            DiffForm::scalar(ctx.clone(), 1, Expr::fiber_var(0, MultiIndex::empty()));
        assert!(beta.equiv(&expected));
    }

    #[test]
    fn antiderivative_handles_base_only_parts() {
        // (x² + u_x) dx = d_H(x³/3 + u)
        let ctx = JetContext::simple(1, 1, 1);
        let sigma = DiffForm::dx(ctx.clone(), 1, 0).scale(
            &Expr::base_var(0)
                .pow(2)
                .add(&Expr::fiber_var(0, MultiIndex::single(0))),
        );
        let beta = divergence_antiderivative(&sigma).unwrap();
        assert!(beta.horizontal_differential().equiv(&sigma));
    }
}
