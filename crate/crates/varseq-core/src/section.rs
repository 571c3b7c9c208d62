//! Local sections of the fibered chart and their jet prolongations.

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::poly::{JetPoly, JetVariable, Rat};

pub type Expr = JetPoly<Rat>;

/// A section given by one polynomial per fiber coordinate, in base
/// variables only; the prolongation is computed by repeated base
/// differentiation.
#[derive(Debug, Clone)]
pub struct Section {
    ctx: Ctx,
    components: Vec<Expr>,
}

impl Section {
    pub fn new(ctx: Ctx, components: Vec<Expr>) -> Result<Self> {
        if components.len() != ctx.fiber_dim() {
            return Err(Error::DegreeMismatch {
                expected: ctx.fiber_dim(),
                got: components.len(),
            });
        }
        for c in &components {
            if c.max_fiber_order().is_some() {
                return Err(Error::InvalidContext(
                    "section components must not contain fiber variables".into(),
                ));
            }
        }
        Ok(Section { ctx, components })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn component(&self, field: usize) -> &Expr {
        &self.components[field]
    }

    /// ∂_I φ^α, the prolongation value for the jet coordinate y^α_I.
    pub fn jet_value(&self, field: usize, index: &MultiIndex) -> Expr {
        let mut out = self.components[field].clone();
        for &i in index.entries() {
            out = out.partial_derivative(&JetVariable::Base(i));
        }
        out
    }

    /// Substitutes y^α_I ← ∂_I φ^α; the result contains base variables only.
    pub fn pull_back(&self, e: &Expr) -> Expr {
        e.substitute_map(&|v| match v {
            JetVariable::Fiber { field, index } => Some(self.jet_value(*field, index)),
            JetVariable::Base(_) => None,
        })
    }
}
