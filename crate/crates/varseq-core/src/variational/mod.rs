//! The variational layer: representation of equivalence classes modulo
//! contact forms, Euler–Lagrange and Helmholtz maps, variational Lie
//! derivatives, momenta, conserved currents and on-shell reduction.

mod euler;
mod lie;
mod noether;
mod onshell;

pub use euler::{
    interior_euler, interior_euler_decompose, source_coefficients, ContactKey, EulerDecomposition,
};
pub use lie::{
    cartan_split_lower, cartan_split_upper, naturality_residual, transport_sum,
    vertical_contraction_residuals, CartanSplitLower, CartanSplitUpper,
};
pub use noether::{
    bessel_hagen_boundary, divergence_antiderivative, generalized_momentum, momentum_form,
    nbh_analysis, noether_current, MuAnalysis, NbhOptions, NbhReport, NoetherData,
};
pub use onshell::{CancelToken, DifferentialIdeal, ReductionOutcome};

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::fields::ProjectableField;
use crate::form::DiffForm;
use crate::Expr;

/// An equivalence class of forms modulo the contact structure, stored with
/// the raw form it was built from and its canonical representative.
#[derive(Debug, Clone)]
pub struct VariationalClass {
    ctx: Ctx,
    degree: usize,
    source_order: usize,
    raw: DiffForm,
    rep: DiffForm,
}

impl VariationalClass {
    /// Builds the class of `rho` at its own order, applying the
    /// representation map for its degree.
    pub fn of(rho: &DiffForm) -> Result<Self> {
        let degree = rho.degree();
        let source_order = rho.order();
        let rep = represent(rho)?;
        Ok(VariationalClass {
            ctx: rho.ctx().clone(),
            degree,
            source_order,
            raw: rho.clone(),
            rep,
        })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    /// The canonical representative R_q[ρ].
    pub fn rep(&self) -> &DiffForm {
        &self.rep
    }

    /// The form the class was constructed from.
    pub fn raw(&self) -> &DiffForm {
        &self.raw
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Classes are equal when their canonical representatives agree.
    pub fn equiv(&self, other: &Self) -> bool {
        self.rep.equiv(&other.rep)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(VariationalClass {
            ctx: self.ctx.clone(),
            degree: self.degree,
            source_order: self.source_order.max(other.source_order),
            raw: self.raw.add(&other.raw)?,
            rep: self.rep.add(&other.rep)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        VariationalClass {
            ctx: self.ctx.clone(),
            degree: self.degree,
            source_order: self.source_order,
            raw: self.raw.neg(),
            rep: self.rep.neg(),
        }
    }

    /// The image under the sequence map: [ρ] ↦ [dρ], represented.
    pub fn euler_map(&self) -> Result<Self> {
        let d_raw = self.raw.exterior_differential();
        let rep = represent(&d_raw)?;
        Ok(VariationalClass {
            ctx: self.ctx.clone(),
            degree: self.degree + 1,
            source_order: self.source_order,
            raw: d_raw,
            rep,
        })
    }

    /// Variational Lie derivative: the class of L_{j^sΞ} applied to the
    /// canonical representative.
    pub fn lie_derive(&self, field: &ProjectableField) -> Result<Self> {
        let moved = field.lie_derivative(&self.rep);
        let rep = represent(&moved)?;
        Ok(VariationalClass {
            ctx: self.ctx.clone(),
            degree: self.degree,
            source_order: self.source_order,
            raw: moved,
            rep,
        })
    }

    /// Variational contraction ι_Ξ[ρ] = [j^sΞ ⌟ R_q[ρ]], represented.
    pub fn contract(&self, field: &ProjectableField) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeZeroContraction);
        }
        let pr = field.prolong(self.rep.order());
        let inner = pr.contract(&self.rep);
        let rep = represent(&inner)?;
        Ok(VariationalClass {
            ctx: self.ctx.clone(),
            degree: self.degree - 1,
            source_order: self.source_order,
            raw: inner,
            rep,
        })
    }
}

/// The representation map R_q: horizontalization for q ≤ n, the interior
/// Euler operator for n+1 ≤ q ≤ n+2, the identity beyond.
pub fn represent(rho: &DiffForm) -> Result<DiffForm> {
    let ctx = rho.ctx();
    let n = ctx.base_dim();
    let q = rho.degree();
    if q <= n {
        let mut rep = rho.horizontalize();
        let table = rho.order() + 1;
        if rep.order() < table {
            rep = rep.promote(table)?;
        }
        Ok(rep)
    } else if q <= n + 2 {
        let k = q - n;
        let mut rep = interior_euler(rho, k)?;
        let table = 2 * rho.order() + 1;
        if rep.order() < table {
            rep = rep.promote(table)?;
        }
        Ok(rep)
    } else {
        Ok(rho.clone())
    }
}

/// A Lagrangian class: degree-n class built from a horizontal form.
pub fn lagrangian(form: &DiffForm) -> Result<VariationalClass> {
    let n = form.ctx().base_dim();
    if form.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            got: form.degree(),
        });
    }
    VariationalClass::of(form)
}

/// Euler–Lagrange map: E_n(λ) = [dλ] represented through the interior
/// Euler operator; the result is a source form ω^α ∧ E_α ω_0.
pub fn euler_lagrange(lambda: &VariationalClass) -> Result<VariationalClass> {
    let n = lambda.ctx().base_dim();
    if lambda.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            got: lambda.degree(),
        });
    }
    lambda.euler_map()
}

/// Source-form coefficients E_α of a degree-(n+1) class.
pub fn source_form_coefficients(eta: &VariationalClass) -> Result<Vec<Expr>> {
    source_coefficients(eta.rep())
}

/// Helmholtz map: E_{n+1}(η) = [dη] represented at contact depth 2;
/// vanishes exactly when η is locally variational.
pub fn helmholtz(eta: &VariationalClass) -> Result<VariationalClass> {
    let n = eta.ctx().base_dim();
    if eta.degree() != n + 1 {
        return Err(Error::DegreeMismatch {
            expected: n + 1,
            got: eta.degree(),
        });
    }
    eta.euler_map()
}

/// Checks 𝓛_Ξ η = 0 for a locally variational source form; rejects
/// non-variational inputs.
pub fn check_generalized_symmetry(
    eta: &VariationalClass,
    field: &ProjectableField,
) -> Result<bool> {
    if !helmholtz(eta)?.is_zero() {
        return Err(Error::NotVariational);
    }
    Ok(eta.lie_derive(field)?.is_zero())
}
