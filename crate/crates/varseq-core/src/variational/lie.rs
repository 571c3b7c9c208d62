//! Exact Cartan decompositions of the variational Lie derivative.
//!
//! At degree q ≤ n the Lie derivative of a class splits, exactly and at the
//! level of representatives, into the contraction with the interior-Euler
//! piece of the differential, the horizontal contraction with the
//! represented differential, an exact boundary, and a total-derivative
//! transport built from the ζ coefficient family. At q = n the transport
//! collapses to the exact boundary of the canonical momentum, which is the
//! first Noether theorem; at q ≥ n+1 the split is the upper Cartan formula.

use crate::error::Result;
use crate::fields::ProjectableField;
use crate::form::DiffForm;
use crate::multiindex::MultiIndex;
use crate::Expr;

use super::euler::{interior_euler_decompose, EulerDecomposition};
use super::{represent, VariationalClass};

/// Pieces of the exact Cartan identity at degree q ≤ n:
/// lie_rep = source_term + horizontal_term + d_H(horizontal_boundary) + transport.
#[derive(Debug, Clone)]
pub struct CartanSplitLower {
    /// h(L_{j^sΞ} θ) for θ the canonical representative.
    pub lie_rep: DiffForm,
    /// h(j^sΞ ⌟ 𝕴(dθ)): the contraction with the source piece of [dθ].
    pub source_term: DiffForm,
    /// Ξ_H ⌟ d_H θ: vanishes identically at q = n.
    pub horizontal_term: DiffForm,
    /// Ξ_H ⌟ θ: the horizontal part of the boundary current.
    pub horizontal_boundary: DiffForm,
    /// Σ_{|I|≥1} d_I((Ξ_V)^α ζ^I_α): the vertical boundary transport.
    pub transport: DiffForm,
    /// The decomposition of dθ backing the split.
    pub decomposition: EulerDecomposition,
}

impl CartanSplitLower {
    /// lie_rep − source_term − horizontal_term − d_H(horizontal_boundary)
    /// − transport; exactly zero.
    pub fn residual(&self) -> Result<DiffForm> {
        let boundary = self.horizontal_boundary.horizontal_differential();
        self.lie_rep
            .sub(&self.source_term)?
            .sub(&self.horizontal_term)?
            .sub(&boundary)?
            .sub(&self.transport)
    }
}

/// The transport sum Σ_{α,|I|≥1} d_I((Ξ_V)^α_∅ · ζ^I_α) for a decomposition
/// of d(θ) and a projectable field.
pub fn transport_sum(
    dec: &EulerDecomposition,
    field: &ProjectableField,
    degree: usize,
    order: usize,
) -> Result<DiffForm> {
    let ctx = dec.contact_part.ctx().clone();
    let pr = field.prolong(0);
    let mut acc = DiffForm::zero(ctx, order, degree);
    for ((alpha, index), zeta) in &dec.zeta {
        let vc = pr.vertical_component(*alpha, &MultiIndex::empty());
        if vc.is_zero() {
            continue;
        }
        let term = zeta.scale(&vc).form_total_derivative_multi(index);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Exact Cartan split at degree q ≤ n.
pub fn cartan_split_lower(
    class: &VariationalClass,
    field: &ProjectableField,
) -> Result<CartanSplitLower> {
    let theta = class.rep().clone();
    let pr = field.prolong(theta.order() + 1);

    let lie_rep = field.lie_derivative(&theta).horizontalize();

    let d_theta = theta.exterior_differential();
    let decomposition = interior_euler_decompose(&d_theta, 1)?;

    let source_term = pr.contract(&decomposition.source).horizontalize();
    let horizontal_term = pr.contract_horizontal(&theta.horizontal_differential());
    let horizontal_boundary = pr.contract_horizontal(&theta);
    let transport = transport_sum(&decomposition, field, theta.degree(), theta.order())?;

    Ok(CartanSplitLower {
        lie_rep,
        source_term,
        horizontal_term,
        horizontal_boundary,
        transport,
        decomposition,
    })
}

/// Pieces of the upper Cartan identity at degree q ≥ n+1:
/// lie_rep = vertical_euler_term + boundary_term.
#[derive(Debug, Clone)]
pub struct CartanSplitUpper {
    /// R(L_{j^sΞ} R[ρ]).
    pub lie_rep: DiffForm,
    /// R(j^sΞ_V ⌟ R[dρ]).
    pub vertical_euler_term: DiffForm,
    /// R(d(j^sΞ_V ⌟ R[ρ])).
    pub boundary_term: DiffForm,
}

impl CartanSplitUpper {
    pub fn residual(&self) -> Result<DiffForm> {
        self.lie_rep
            .sub(&self.vertical_euler_term)?
            .sub(&self.boundary_term)
    }
}

/// Exact Cartan split at degree q ≥ n+1 (supported through q = n+2 for the
/// Euler term, which needs one more represented degree).
pub fn cartan_split_upper(
    class: &VariationalClass,
    field: &ProjectableField,
) -> Result<CartanSplitUpper> {
    let rep = class.rep().clone();
    let pr = field.prolong(rep.order() + 1);

    let lie_rep = represent(&field.lie_derivative(&rep))?;

    let e_rep = represent(&class.raw().exterior_differential())?;
    let vertical_euler_term = represent(&pr.contract_vertical(&e_rep))?;

    let inner = pr.contract_vertical(&rep);
    let boundary_term = represent(&inner.exterior_differential())?;

    Ok(CartanSplitUpper {
        lie_rep,
        vertical_euler_term,
        boundary_term,
    })
}

/// Naturality residual E(𝓛_Ξ α) − 𝓛_Ξ(E α), compared on representatives.
pub fn naturality_residual(
    class: &VariationalClass,
    field: &ProjectableField,
) -> Result<DiffForm> {
    let a = class.lie_derive(field)?.euler_map()?;
    let b = class.euler_map()?.lie_derive(field)?;
    a.rep().sub(b.rep())
}

/// Contraction identities for a vertical field Ψ:
/// j^{r+2}Ψ ⌟ p_i d p_i ρ + p_{i−1} d (j^{r+1}Ψ ⌟ p_iρ) = 0, and the
/// corresponding Lie-derivative display; returns both residuals.
pub fn vertical_contraction_residuals(
    psi: &ProjectableField,
    rho: &DiffForm,
    i: usize,
) -> Result<(DiffForm, DiffForm)> {
    let pr = psi.prolong(rho.order() + 2);
    let p_i = rho.contact_component(i);

    // first display
    let lhs1 = pr.contract(&p_i.exterior_differential().contact_component(i));
    let rhs1 = pr.contract(&p_i).exterior_differential().contact_component(i - 1);
    let first = lhs1.add(&rhs1)?;

    // second display: L_{jΨ}(π*)p_iρ = jΨ ⌟ p_{i+1} d p_i ρ + p_i d (jΨ ⌟ p_i ρ)
    let lie = psi.lie_derivative(&p_i);
    let a = pr.contract(&p_i.exterior_differential().contact_component(i + 1));
    let b = pr.contract(&p_i).exterior_differential().contact_component(i);
    let second = lie.sub(&a)?.sub(&b)?;

    Ok((first, second))
}

/// Scales every fiber variable by a formal parameter and integrates it over
/// [0,1]; the homotopy step of the divergence antiderivative. Every
/// monomial must contain at least one fiber factor.
pub(crate) fn radial_integral(e: &Expr) -> Result<Expr> {
    let mut out = Expr::zero();
    for (m, c) in e.terms() {
        let d = m.fiber_degree() as i64;
        if d == 0 {
            return Err(crate::error::Error::Internal(
                "radial integral of a term without fiber variables".into(),
            ));
        }
        out.add_term(m.clone(), c.clone() / <crate::poly::Rat as crate::poly::Coeff>::from_i64(d));
    }
    Ok(out)
}
