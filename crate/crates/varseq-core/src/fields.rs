//! Projectable vector fields, jet prolongations and the horizontal/vertical
//! splitting entering every Cartan formula.

use std::collections::BTreeMap;

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::form::{Covector, DiffForm};
use crate::multiindex::MultiIndex;
use crate::Expr;

/// A π-projectable vector field ξ^i ∂_i + Ξ^α ∂_α: the ξ components live on
/// the base, the Ξ components on the total space.
#[derive(Debug, Clone)]
pub struct ProjectableField {
    ctx: Ctx,
    xi: Vec<Expr>,
    eta: Vec<Expr>,
}

impl ProjectableField {
    pub fn new(ctx: Ctx, xi: Vec<Expr>, eta: Vec<Expr>) -> Result<Self> {
        if xi.len() != ctx.base_dim() {
            return Err(Error::DegreeMismatch {
                expected: ctx.base_dim(),
                got: xi.len(),
            });
        }
        if eta.len() != ctx.fiber_dim() {
            return Err(Error::DegreeMismatch {
                expected: ctx.fiber_dim(),
                got: eta.len(),
            });
        }
        for c in &xi {
            if c.max_fiber_order().is_some() {
                return Err(Error::InvalidContext(
                    "base components of a projectable field must not contain fiber variables"
                        .into(),
                ));
            }
        }
        for c in &eta {
            if c.effective_order() > 0 {
                return Err(Error::InvalidContext(
                    "fiber components of a projectable field live on the total space".into(),
                ));
            }
        }
        Ok(ProjectableField { ctx, xi, eta })
    }

    pub fn zero(ctx: Ctx) -> Self {
        let xi = vec![Expr::zero(); ctx.base_dim()];
        let eta = vec![Expr::zero(); ctx.fiber_dim()];
        ProjectableField { ctx, xi, eta }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn xi(&self, i: usize) -> &Expr {
        &self.xi[i]
    }

    pub fn eta(&self, a: usize) -> &Expr {
        &self.eta[a]
    }

    pub fn is_vertical(&self) -> bool {
        self.xi.iter().all(Expr::is_zero)
    }

    /// Order-`s` prolongation through the recursion
    /// Ξ^α_{I·i} = D_i Ξ^α_I − y^α_{I·j} D_i ξ^j.
    pub fn prolong(&self, s: usize) -> ProlongedField {
        let mut comps: BTreeMap<(usize, MultiIndex), Expr> = BTreeMap::new();
        let n = self.ctx.base_dim();
        for a in 0..self.ctx.fiber_dim() {
            comps.insert((a, MultiIndex::empty()), self.eta[a].clone());
        }
        for len in 1..=s {
            for idx in MultiIndex::enumerate(n, len) {
                let i = idx.max_entry().expect("nonempty index");
                let parent = idx.remove_one(i).expect("entry present");
                for a in 0..self.ctx.fiber_dim() {
                    let prev = comps
                        .get(&(a, parent.clone()))
                        .expect("parents are built first")
                        .clone();
                    let mut comp = prev.total_derivative(i);
                    for j in 0..n {
                        let dxi = self.xi[j].total_derivative(i);
                        if !dxi.is_zero() {
                            comp = comp
                                .sub(&Expr::fiber_var(a, parent.push(j)).mul(&dxi));
                        }
                    }
                    comps.insert((a, idx.clone()), comp);
                }
            }
        }
        ProlongedField {
            base: self.clone(),
            order: s,
            comps,
        }
    }

    /// Lie derivative of a form via the Cartan formula, prolonging to the
    /// form's hosting order.
    pub fn lie_derivative(&self, rho: &DiffForm) -> DiffForm {
        let pr = self.prolong(rho.order());
        let a = pr.contract(&rho.exterior_differential());
        if rho.degree() == 0 {
            return a;
        }
        let b = pr.contract(rho).exterior_differential();
        a.add(&b).expect("Cartan formula terms share degree")
    }
}

/// A prolonged projectable field with stored components Ξ^α_I, |I| ≤ s.
#[derive(Debug, Clone)]
pub struct ProlongedField {
    base: ProjectableField,
    order: usize,
    comps: BTreeMap<(usize, MultiIndex), Expr>,
}

impl ProlongedField {
    pub fn ctx(&self) -> &Ctx {
        self.base.ctx()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn base(&self) -> &ProjectableField {
        &self.base
    }

    /// Ξ^α_I; extends the prolongation when the index exceeds the stored
    /// order.
    pub fn component(&self, a: usize, index: &MultiIndex) -> Expr {
        if index.len() <= self.order {
            return self.comps[&(a, index.clone())].clone();
        }
        self.base.prolong(index.len()).component(a, index)
    }

    /// (Ξ_V)^α_I = Ξ^α_I − y^α_{I·j} ξ^j.
    pub fn vertical_component(&self, a: usize, index: &MultiIndex) -> Expr {
        let mut out = self.component(a, index);
        for j in 0..self.ctx().base_dim() {
            let xi = self.base.xi(j);
            if !xi.is_zero() {
                out = out.sub(&Expr::fiber_var(a, index.push(j)).mul(xi));
            }
        }
        out
    }

    /// Truncation to a lower order.
    pub fn truncate(&self, s: usize) -> ProlongedField {
        if s >= self.order {
            return self.clone();
        }
        let comps = self
            .comps
            .iter()
            .filter(|((_, idx), _)| idx.len() <= s)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        ProlongedField {
            base: self.base.clone(),
            order: s,
            comps,
        }
    }

    /// j^sΞ ⌟ ρ.
    pub fn contract(&self, rho: &DiffForm) -> DiffForm {
        rho.contract_with(&|c| match c {
            Covector::Dx(i) => {
                let xi = self.base.xi(*i);
                if xi.is_zero() {
                    None
                } else {
                    Some(xi.clone())
                }
            }
            Covector::Contact { field, index } => {
                Some(self.vertical_component(*field, index))
            }
            Covector::DyTop { field, index } => Some(self.component(*field, index)),
        })
    }

    /// Ξ_V ⌟ ρ: the vertical part pairs both contact and top dy slots with
    /// the vertical components and annihilates dx.
    pub fn contract_vertical(&self, rho: &DiffForm) -> DiffForm {
        rho.contract_with(&|c| match c {
            Covector::Dx(_) => None,
            Covector::Contact { field, index } | Covector::DyTop { field, index } => {
                Some(self.vertical_component(*field, index))
            }
        })
    }

    /// Ξ_H ⌟ ρ = ξ^i (D_i ⌟ ρ): annihilates contact covectors, pairs
    /// dx^j ↦ ξ^j and dy^α_I ↦ y^α_{I·i} ξ^i.
    pub fn contract_horizontal(&self, rho: &DiffForm) -> DiffForm {
        rho.contract_with(&|c| match c {
            Covector::Dx(i) => {
                let xi = self.base.xi(*i);
                if xi.is_zero() {
                    None
                } else {
                    Some(xi.clone())
                }
            }
            Covector::Contact { .. } => None,
            Covector::DyTop { field, index } => {
                let mut out = Expr::zero();
                for i in 0..self.ctx().base_dim() {
                    let xi = self.base.xi(i);
                    if !xi.is_zero() {
                        out = out.add(&Expr::fiber_var(*field, index.push(i)).mul(xi));
                    }
                }
                if out.is_zero() {
                    None
                } else {
                    Some(out)
                }
            }
        })
    }

    /// The horizontal/vertical splitting view.
    pub fn split(&self) -> SplitField {
        SplitField {
            field: self.clone(),
        }
    }
}

/// Horizontal and vertical parts of a prolonged field, exposed through
/// their contractions; Ξ_H + Ξ_V recovers the full contraction.
#[derive(Debug, Clone)]
pub struct SplitField {
    field: ProlongedField,
}

impl SplitField {
    pub fn field(&self) -> &ProlongedField {
        &self.field
    }

    pub fn vertical_component(&self, a: usize, index: &MultiIndex) -> Expr {
        self.field.vertical_component(a, index)
    }

    pub fn horizontal_coefficient(&self, i: usize) -> &Expr {
        self.field.base().xi(i)
    }

    pub fn contract_vertical(&self, rho: &DiffForm) -> DiffForm {
        self.field.contract_vertical(rho)
    }

    pub fn contract_horizontal(&self, rho: &DiffForm) -> DiffForm {
        self.field.contract_horizontal(rho)
    }
}

/// Convenience constructor used by tests and the CLI: all components parsed
/// from expressions already validated against the chart.
pub fn projectable(ctx: &Ctx, xi: Vec<Expr>, eta: Vec<Expr>) -> Result<ProjectableField> {
    ProjectableField::new(ctx.clone(), xi, eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::JetContext;

    fn u(idx: &[usize]) -> Expr {
        Expr::fiber_var(0, MultiIndex::new(idx.to_vec()))
    }

    #[test]
    fn base_translation_has_trivial_prolongation() {
        let ctx = JetContext::simple(1, 1, 1);
        let f = ProjectableField::new(ctx, vec![Expr::one()], vec![Expr::zero()]).unwrap();
        let pr = f.prolong(2);
        for len in 0..=2 {
            for idx in MultiIndex::enumerate(1, len) {
                assert!(pr.component(0, &idx).is_zero());
            }
        }
    }

    #[test]
    fn scaling_field_prolongs_to_jets() {
        // Ξ = u ∂/∂u: first prolongation component is u_x
        let ctx = JetContext::simple(1, 1, 1);
        let f = ProjectableField::new(ctx, vec![Expr::zero()], vec![u(&[])]).unwrap();
        let pr = f.prolong(1);
        assert_eq!(pr.component(0, &MultiIndex::single(0)), u(&[0]));
    }

    #[test]
    fn boost_prolongation() {
        // Ξ = x ∂/∂u: D_x(x) = 1
        let ctx = JetContext::simple(1, 1, 1);
        let f = ProjectableField::new(ctx, vec![Expr::zero()], vec![Expr::base_var(0)]).unwrap();
        let pr = f.prolong(1);
        assert_eq!(pr.component(0, &MultiIndex::single(0)), Expr::one());
    }

    #[test]
    fn split_of_base_translation() {
        // Ξ = ∂/∂x: vertical components are −y_{I·x}
        let ctx = JetContext::simple(1, 1, 2);
        let f = ProjectableField::new(ctx, vec![Expr::one()], vec![Expr::zero()]).unwrap();
        let pr = f.prolong(1);
        assert_eq!(
            pr.vertical_component(0, &MultiIndex::empty()),
            u(&[0]).neg()
        );
        assert_eq!(
            pr.vertical_component(0, &MultiIndex::single(0)),
            u(&[0, 0]).neg()
        );
    }

    #[test]
    fn vertical_field_splits_trivially() {
        let ctx = JetContext::simple(1, 1, 1);
        let f = ProjectableField::new(ctx, vec![Expr::zero()], vec![Expr::base_var(0)]).unwrap();
        let pr = f.prolong(1);
        assert!(f.is_vertical());
        assert_eq!(
            pr.vertical_component(0, &MultiIndex::single(0)),
            pr.component(0, &MultiIndex::single(0))
        );
    }

    #[test]
    fn full_contraction_is_sum_of_parts() {
        let ctx = JetContext::simple(2, 1, 1);
        let f = ProjectableField::new(
            ctx.clone(),
            vec![Expr::base_var(1), Expr::one()],
            vec![u(&[])],
        )
        .unwrap();
        let pr = f.prolong(2);
        let rho = DiffForm::contact_one(ctx.clone(), 2, 0, MultiIndex::single(0))
            .wedge(&DiffForm::dx(ctx.clone(), 2, 1))
            .unwrap()
            .scale(&u(&[1]));
        let full = pr.contract(&rho);
        let parts = pr
            .contract_vertical(&rho)
            .add(&pr.contract_horizontal(&rho))
            .unwrap();
        assert!(full.equiv(&parts));
    }

    #[test]
    fn interior_product_of_volume() {
        // (∂/∂x^1) ⌟ ω_0 = ω_1
        let ctx = JetContext::simple(2, 1, 1);
        let f = ProjectableField::new(
            ctx.clone(),
            vec![Expr::one(), Expr::zero()],
            vec![Expr::zero()],
        )
        .unwrap();
        let pr = f.prolong(1);
        let vol = DiffForm::volume(ctx.clone(), 1);
        let contracted = pr.contract(&vol);
        assert!(contracted.equiv(&DiffForm::covolume(ctx, 1, &[0])));
    }

    #[test]
    fn lie_derivative_preserves_contact_ideal() {
        // h(L_{jΞ} ω^α_I) = 0 for projectable fields
        let ctx = JetContext::simple(1, 1, 2);
        let f = ProjectableField::new(
            ctx.clone(),
            vec![Expr::base_var(0)],
            vec![u(&[]).mul(&u(&[]))],
        )
        .unwrap();
        for idx in [MultiIndex::empty(), MultiIndex::single(0)] {
            let w = DiffForm::contact_one(ctx.clone(), 2, 0, idx);
            let lie = f.lie_derivative(&w);
            assert!(lie.horizontalize().is_zero());
        }
    }
}
