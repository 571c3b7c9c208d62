//! Differential and contact calculus on [`DiffForm`]: exterior differential,
//! contact splitting, horizontalization, the horizontal/vertical pair, total
//! derivatives of forms and interior products.

use super::{Covector, DiffForm, Expr, RawCov};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::poly::JetVariable;

impl DiffForm {
    /// Exterior differential, hosted at the same order: dy^α_I stays a
    /// cobasis element at top order and is re-expressed through the contact
    /// basis below it; d² = 0.
    pub fn exterior_differential(&self) -> Self {
        let s = self.order();
        let mut out = DiffForm::zero(self.ctx().clone(), s, self.degree() + 1);
        for (covs, coeff) in self.terms() {
            let base_raw: Vec<RawCov> = covs
                .iter()
                .map(|c| match c {
                    Covector::Dx(i) => RawCov::Dx(*i),
                    Covector::Contact { field, index } => RawCov::Contact(*field, index.clone()),
                    Covector::DyTop { field, index } => RawCov::Dy(*field, index.clone()),
                })
                .collect();

            // d(coefficient) ∧ rest
            for v in coeff.variables() {
                let d = coeff.partial_derivative(&v);
                if d.is_zero() {
                    continue;
                }
                let token = match &v {
                    JetVariable::Base(i) => RawCov::Dx(*i),
                    JetVariable::Fiber { field, index } => RawCov::Dy(*field, index.clone()),
                };
                let mut raw = Vec::with_capacity(base_raw.len() + 1);
                raw.push(token);
                raw.extend(base_raw.iter().cloned());
                out.push_raw(&raw, d);
            }

            // coefficient · Σ_p ± c_1 ∧ … ∧ d(c_p) ∧ … ∧ c_q,
            // with d(ω^α_I) = −dy^α_{I·j} ∧ dx^j and d(dx) = d(dy) = 0.
            for (p, c) in covs.iter().enumerate() {
                if let Covector::Contact { field, index } = c {
                    for j in 0..self.ctx().base_dim() {
                        let mut raw: Vec<RawCov> = Vec::with_capacity(covs.len() + 1);
                        raw.extend(base_raw[..p].iter().cloned());
                        raw.push(RawCov::Dy(*field, index.push(j)));
                        raw.push(RawCov::Dx(j));
                        raw.extend(base_raw[p + 1..].iter().cloned());
                        let sign = if p % 2 == 0 { -1 } else { 1 };
                        out.push_raw(&raw, coeff.scale(&crate::poly::Coeff::from_i64(sign)));
                    }
                }
            }
        }
        out
    }

    /// The i-contact components p_0ρ … p_qρ; the form is implicitly pulled
    /// back one order when top dy factors are present.
    pub fn contact_split(&self) -> Vec<DiffForm> {
        let base = if self.has_dy_top() {
            self.promote(self.order() + 1)
                .expect("promotion to a higher order cannot fail")
        } else {
            self.clone()
        };
        let mut parts: Vec<DiffForm> = (0..=self.degree())
            .map(|_| DiffForm::zero(base.ctx().clone(), base.order(), base.degree()))
            .collect();
        for (covs, coeff) in base.terms() {
            let k = DiffForm::contact_degree_of(covs);
            parts[k].push(covs.clone(), coeff.clone());
        }
        parts
    }

    /// p_iρ.
    pub fn contact_component(&self, i: usize) -> DiffForm {
        if i > self.degree() {
            let base = self.clone();
            return DiffForm::zero(base.ctx().clone(), base.order(), base.degree());
        }
        self.contact_split().swap_remove(i)
    }

    /// Horizontalization hρ = p_0ρ.
    pub fn horizontalize(&self) -> DiffForm {
        self.contact_component(0)
    }

    /// Total derivative of a form along D_i: degree-0 derivation with
    /// D_i f the total derivative on coefficients, D_i dx^j = 0,
    /// D_i ω^α_I = ω^α_{I·i} and D_i dy^α_I = dy^α_{I·i}; hosted one order up.
    pub fn form_total_derivative(&self, i: usize) -> DiffForm {
        let s = self.order() + 1;
        let mut out = DiffForm::zero(self.ctx().clone(), s, self.degree());
        for (covs, coeff) in self.terms() {
            let raw: Vec<RawCov> = covs
                .iter()
                .map(|c| match c {
                    Covector::Dx(j) => RawCov::Dx(*j),
                    Covector::Contact { field, index } => RawCov::Contact(*field, index.clone()),
                    Covector::DyTop { field, index } => RawCov::Dy(*field, index.clone()),
                })
                .collect();
            let dc = coeff.total_derivative(i);
            if !dc.is_zero() {
                out.push_raw(&raw, dc);
            }
            for (p, c) in covs.iter().enumerate() {
                let image = match c {
                    Covector::Dx(_) => None,
                    Covector::Contact { field, index } => {
                        Some(RawCov::Contact(*field, index.push(i)))
                    }
                    Covector::DyTop { field, index } => Some(RawCov::Dy(*field, index.push(i))),
                };
                if let Some(tok) = image {
                    let mut raw2 = raw.clone();
                    raw2[p] = tok;
                    out.push_raw(&raw2, coeff.clone());
                }
            }
        }
        out
    }

    /// Iterated total derivative along a multi-index.
    pub fn form_total_derivative_multi(&self, index: &MultiIndex) -> DiffForm {
        let mut out = self.clone();
        for &i in index.entries() {
            out = out.form_total_derivative(i);
        }
        out
    }

    /// Horizontal differential d_H = dx^i ∧ D_i, hosted one order up;
    /// agrees with Σ_i p_i d p_i after pullback.
    pub fn horizontal_differential(&self) -> DiffForm {
        let s = self.order() + 1;
        let mut out = DiffForm::zero(self.ctx().clone(), s, self.degree() + 1);
        for i in 0..self.ctx().base_dim() {
            let di = self.form_total_derivative(i);
            for (covs, coeff) in di.terms() {
                let mut word = Vec::with_capacity(covs.len() + 1);
                word.push(Covector::Dx(i));
                word.extend(covs.iter().cloned());
                out.push_unsorted(word, coeff.clone());
            }
        }
        out
    }

    /// Vertical differential: Σ ∂f/∂y^α_I ω^α_I ∧ (…) on coefficients, zero
    /// on the cobasis; agrees with Σ_i p_{i+1} d p_i after pullback.
    pub fn vertical_differential(&self) -> DiffForm {
        let base = if self.has_dy_top() {
            self.promote(self.order() + 1)
                .expect("promotion to a higher order cannot fail")
        } else {
            self.clone()
        };
        let s = base.order() + 1;
        let mut out = DiffForm::zero(base.ctx().clone(), s, base.degree() + 1);
        for (covs, coeff) in base.terms() {
            for v in coeff.variables() {
                if let JetVariable::Fiber { field, index } = &v {
                    let d = coeff.partial_derivative(&v);
                    if d.is_zero() {
                        continue;
                    }
                    let mut word = Vec::with_capacity(covs.len() + 1);
                    word.push(Covector::contact(*field, index.clone()));
                    word.extend(covs.iter().cloned());
                    out.push_unsorted(word, d);
                }
            }
        }
        out
    }

    /// Interior product against per-covector components; an anti-derivation
    /// of degree −1. `comp` returns the pairing of the vector field with a
    /// cobasis element (`None` ≡ zero).
    pub fn contract_with(&self, comp: &dyn Fn(&Covector) -> Option<Expr>) -> DiffForm {
        let mut max_order = self.order();
        let mut pieces: Vec<(Vec<Covector>, Expr)> = Vec::new();
        for (covs, coeff) in self.terms() {
            for (p, c) in covs.iter().enumerate() {
                if let Some(pairing) = comp(c) {
                    if pairing.is_zero() {
                        continue;
                    }
                    let mut rest = covs.clone();
                    rest.remove(p);
                    let mut val = coeff.mul(&pairing);
                    if p % 2 == 1 {
                        val = val.neg();
                    }
                    max_order = max_order.max(val.effective_order());
                    pieces.push((rest, val));
                }
            }
        }
        let mut out = DiffForm::zero(
            self.ctx().clone(),
            max_order,
            self.degree().saturating_sub(1),
        );
        if max_order > self.order() {
            // re-express any covector words against the higher host
            for (covs, val) in pieces {
                let raw: Vec<RawCov> = covs
                    .iter()
                    .map(|c| match c {
                        Covector::Dx(j) => RawCov::Dx(*j),
                        Covector::Contact { field, index } => {
                            RawCov::Contact(*field, index.clone())
                        }
                        Covector::DyTop { field, index } => RawCov::Dy(*field, index.clone()),
                    })
                    .collect();
                out.push_raw(&raw, val);
            }
        } else {
            for (covs, val) in pieces {
                out.push(covs, val);
            }
        }
        out
    }

    /// ∂/∂x^i ⌟ ρ (pairs only the dx slots).
    pub fn contract_base(&self, i: usize) -> DiffForm {
        self.contract_with(&|c| match c {
            Covector::Dx(j) if *j == i => Some(Expr::one()),
            _ => None,
        })
    }

    /// D_i ⌟ ρ: the formal total-derivative contraction, pairing dx^j ↦ δ,
    /// ω^α_I ↦ 0, dy^α_I ↦ y^α_{I·i}.
    pub fn contract_total(&self, i: usize) -> DiffForm {
        self.contract_with(&|c| match c {
            Covector::Dx(j) if *j == i => Some(Expr::one()),
            Covector::DyTop { field, index } => Some(Expr::fiber_var(*field, index.push(i))),
            _ => None,
        })
    }

    /// Checked interior product entry point for degree-0 inputs.
    pub fn interior_product_guard(&self) -> Result<()> {
        if self.degree() == 0 {
            Err(Error::DegreeZeroContraction)
        } else {
            Ok(())
        }
    }

    /// Extracts K from ρ = K ∧ ω_0 for a form whose monomials all carry the
    /// full horizontal factor; the inverse of wedging by the volume on such
    /// forms.
    pub fn factor_out_volume(&self) -> Result<DiffForm> {
        let n = self.ctx().base_dim();
        let mut out = DiffForm::zero(self.ctx().clone(), self.order(), self.degree() - n);
        for (covs, coeff) in self.terms() {
            let dx_count = covs.iter().filter(|c| c.is_horizontal()).count();
            if dx_count != n {
                return Err(Error::Internal(
                    "factor_out_volume on a form without full horizontal degree".into(),
                ));
            }
            // write the word as ω_0 ∧ K, moving each dx left past the
            // non-horizontal factors collected before it, then flip the
            // blocks to the K ∧ ω_0 layout
            let mut rest: Vec<Covector> = Vec::with_capacity(covs.len() - n);
            let mut sign_neg = false;
            let mut seen_nonhorizontal = 0usize;
            for c in covs.iter() {
                if c.is_horizontal() {
                    if seen_nonhorizontal % 2 == 1 {
                        sign_neg = !sign_neg;
                    }
                } else {
                    seen_nonhorizontal += 1;
                    rest.push(c.clone());
                }
            }
            if (n * rest.len()) % 2 == 1 {
                sign_neg = !sign_neg;
            }
            let val = if sign_neg { coeff.neg() } else { coeff.clone() };
            out.push(rest, val);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{Ctx, JetContext};

    fn ctx11() -> Ctx {
        JetContext::simple(1, 1, 1)
    }

    fn u_var(idx: &[usize]) -> Expr {
        Expr::fiber_var(0, MultiIndex::new(idx.to_vec()))
    }

    #[test]
    fn d_of_base_coordinate() {
        let ctx = ctx11();
        let x = DiffForm::scalar(ctx.clone(), 1, Expr::base_var(0));
        let dx = DiffForm::dx(ctx, 1, 0);
        assert!(x.exterior_differential().equiv(&dx));
    }

    #[test]
    fn d_of_u_dx_is_contact() {
        // d(u dx) = du∧dx = ω∧dx, the horizontal part cancels
        let ctx = ctx11();
        let udx = DiffForm::dx(ctx.clone(), 1, 0).scale(&u_var(&[]));
        let d = udx.exterior_differential();
        let expected = DiffForm::contact_one(ctx.clone(), 1, 0, MultiIndex::empty())
            .wedge(&DiffForm::dx(ctx, 1, 0))
            .unwrap();
        assert!(d.equiv(&expected));
    }

    #[test]
    fn d_squared_vanishes() {
        let ctx = JetContext::simple(2, 1, 2);
        // a mildly mixed 1-form
        let rho = DiffForm::dx(ctx.clone(), 2, 0)
            .scale(&u_var(&[0]).mul(&Expr::base_var(1)))
            .add(
                &DiffForm::contact_one(ctx.clone(), 2, 0, MultiIndex::single(1))
                    .scale(&u_var(&[]).pow(2)),
            )
            .unwrap();
        let dd = rho.exterior_differential().exterior_differential();
        assert!(dd.is_zero());
    }

    #[test]
    fn split_collects_contact_degrees() {
        // du∧dx at order 1: p_0 = 0, p_1 = ω∧dx
        let ctx = ctx11();
        let du = DiffForm::dy_top_one(ctx.clone(), 0, MultiIndex::empty());
        // host du at order 1 alongside dx
        let du = du.promote(1).unwrap();
        let rho = du.wedge(&DiffForm::dx(ctx.clone(), 1, 0)).unwrap();
        let parts = rho.contact_split();
        assert!(parts[0].is_zero());
        let expected = DiffForm::contact_one(ctx.clone(), 1, 0, MultiIndex::empty())
            .wedge(&DiffForm::dx(ctx, 1, 0))
            .unwrap();
        assert!(parts[1].equiv(&expected));
    }

    #[test]
    fn horizontalization_examples() {
        let ctx = ctx11();
        // h(du) = u_x dx
        let du = DiffForm::dy_top_one(ctx.clone(), 0, MultiIndex::empty());
        let h = du.horizontalize();
        let expected = DiffForm::dx(ctx.clone(), 1, 0).scale(&u_var(&[0]));
        assert!(h.equiv(&expected));
        // h(ω) = 0
        let w = DiffForm::contact_one(ctx, 1, 0, MultiIndex::empty());
        assert!(w.horizontalize().is_zero());
    }

    #[test]
    fn horizontal_differential_on_functions_and_contacts() {
        let ctx = ctx11();
        // d_H u = u_x dx
        let f = DiffForm::scalar(ctx.clone(), 1, u_var(&[]));
        let dh = f.horizontal_differential();
        let expected = DiffForm::dx(ctx.clone(), 2, 0).scale(&u_var(&[0]));
        assert!(dh.equiv(&expected));
        // d_H ω = −ω_x ∧ dx = dx ∧ ω_x
        let w = DiffForm::contact_one(ctx.clone(), 1, 0, MultiIndex::empty());
        let dhw = w.horizontal_differential();
        let expected = DiffForm::contact_one(ctx.clone(), 2, 0, MultiIndex::single(0))
            .wedge(&DiffForm::dx(ctx.clone(), 2, 0))
            .unwrap()
            .neg();
        assert!(dhw.equiv(&expected));
    }

    #[test]
    fn vertical_differential_of_horizontal_form() {
        // d_V(u dx) = ω ∧ dx
        let ctx = ctx11();
        let udx = DiffForm::dx(ctx.clone(), 1, 0).scale(&u_var(&[]));
        let dv = udx.vertical_differential();
        let expected = DiffForm::contact_one(ctx.clone(), 2, 0, MultiIndex::empty())
            .wedge(&DiffForm::dx(ctx, 2, 0))
            .unwrap();
        assert!(dv.equiv(&expected));
    }

    #[test]
    fn dh_squares_to_zero_and_anticommutes_with_dv() {
        let ctx = JetContext::simple(2, 1, 1);
        let rho = DiffForm::dx(ctx.clone(), 1, 1)
            .scale(&u_var(&[0]).mul(&u_var(&[])))
            .add(&DiffForm::contact_one(ctx.clone(), 1, 0, MultiIndex::empty()).scale(&Expr::base_var(0)))
            .unwrap();
        assert!(rho
            .horizontal_differential()
            .horizontal_differential()
            .is_zero());
        assert!(rho.vertical_differential().vertical_differential().is_zero());
        let a = rho.horizontal_differential().vertical_differential();
        let b = rho.vertical_differential().horizontal_differential();
        assert!(a.add(&b).unwrap().is_zero());
    }

    #[test]
    fn integration_formula() {
        // ω^α_{I·j} ∧ ω_0 = −dω^α_I ∧ ω_j for every j, after pullback
        let ctx = JetContext::simple(2, 1, 2);
        let idx = MultiIndex::single(0);
        for j in 0..2 {
            let lhs = DiffForm::contact_one(ctx.clone(), 2, 0, idx.push(j))
                .wedge(&DiffForm::volume(ctx.clone(), 2))
                .unwrap();
            let rhs = DiffForm::contact_one(ctx.clone(), 2, 0, idx.clone())
                .exterior_differential()
                .wedge(&DiffForm::covolume(ctx.clone(), 2, &[j]))
                .unwrap()
                .neg();
            assert!(lhs.equiv(&rhs), "integration formula failed for j = {j}");
        }
    }

    #[test]
    fn factor_out_volume_roundtrip() {
        let ctx = JetContext::simple(2, 1, 1);
        let k = DiffForm::contact_one(ctx.clone(), 1, 0, MultiIndex::empty()).scale(&u_var(&[1]));
        let vol = DiffForm::volume(ctx.clone(), 1);
        let prod = k.wedge(&vol).unwrap();
        let back = prod.factor_out_volume().unwrap();
        assert!(back.equiv(&k));
    }
}
