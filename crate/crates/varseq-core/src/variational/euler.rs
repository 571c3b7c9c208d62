//! Interior Euler operator: the intrinsic integration-by-parts normalizer.
//!
//! For a (p+k)-form ρ with k-contact part p_kρ = Σ ω^α_J ∧ η^J_α the
//! operator returns the source piece ω^α ∧ Σ_J (−1)^{|J|} d_J η^J_α together
//! with the coefficient family ζ^I_α reconstructing the remainder as
//! Σ_{|I|≥1} d_I(ω^α ∧ ζ^I_α). At full horizontal degree (p = n) the
//! remainder is additionally packaged as a single local form R with
//! remainder = p_k d p_k R.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::form::{Covector, DiffForm};
use crate::multiindex::{multiset_binomial, MultiIndex};
use crate::Expr;

/// Slot key: the fiber label α and symmetric index I of a contact factor.
pub type ContactKey = (usize, MultiIndex);

/// The decomposition data produced by [`interior_euler_decompose`].
#[derive(Debug, Clone)]
pub struct EulerDecomposition {
    /// Contact depth k of the decomposed component.
    pub contact_depth: usize,
    /// The k-contact component p_kρ the decomposition refers to.
    pub contact_part: DiffForm,
    /// Canonical coefficients η^J_α with p_kρ = Σ ω^α_J ∧ η^J_α.
    pub eta: BTreeMap<ContactKey, DiffForm>,
    /// The source piece ω^α ∧ Σ_J (−1)^{|J|} d_J η^J_α.
    pub source: DiffForm,
    /// ζ^I_α for |I| ≥ 1; the remainder is Σ d_I(ω^α ∧ ζ^I_α).
    pub zeta: BTreeMap<ContactKey, DiffForm>,
    /// Local form R with remainder = p_k d p_k R; present exactly when the
    /// monomials carry full horizontal degree n.
    pub residual: Option<DiffForm>,
}

impl EulerDecomposition {
    /// Σ_{|I|≥1} d_I(ω^α ∧ ζ^I_α), the remainder reconstructed from the
    /// coefficient family.
    pub fn remainder_sum(&self) -> DiffForm {
        let ctx = self.contact_part.ctx().clone();
        let mut acc = DiffForm::zero(
            ctx.clone(),
            self.contact_part.order(),
            self.contact_part.degree(),
        );
        for ((field, index), zeta) in &self.zeta {
            let omega = DiffForm::contact_one(ctx.clone(), 1, *field, MultiIndex::empty());
            let term = omega
                .wedge(zeta)
                .expect("same chart")
                .form_total_derivative_multi(index);
            acc = acc.add(&term).expect("degrees agree");
        }
        acc
    }

    /// The reconstruction identity p_kρ = source + Σ d_I(ω^α ∧ ζ^I_α),
    /// checked exactly.
    pub fn reconstructs(&self) -> bool {
        let rhs = self.source.add(&self.remainder_sum()).expect("same degree");
        self.contact_part.equiv(&rhs)
    }

    /// Coefficients E_α of a source-shaped piece ω^α ∧ E_α ω_0; only
    /// meaningful at contact depth 1 and full horizontal degree.
    pub fn source_coefficients(&self) -> Result<Vec<Expr>> {
        source_coefficients(&self.source)
    }
}

/// Extracts the coefficients E_α from a source form ω^α ∧ E_α ω_0.
pub fn source_coefficients(source: &DiffForm) -> Result<Vec<Expr>> {
    let ctx = source.ctx().clone();
    let n = ctx.base_dim();
    let mut out = vec![Expr::zero(); ctx.fiber_dim()];
    for (covs, coeff) in source.terms() {
        let mut field = None;
        let mut dx_count = 0usize;
        for c in covs {
            match c {
                Covector::Dx(_) => dx_count += 1,
                Covector::Contact { field: a, index } if index.is_empty() => {
                    field = Some(*a);
                }
                _ => {
                    return Err(Error::Internal(
                        "source piece has a non-source monomial".into(),
                    ))
                }
            }
        }
        let (Some(a), true) = (field, dx_count == n) else {
            return Err(Error::Internal(
                "source piece has a non-source monomial".into(),
            ));
        };
        // canonical word is dx^1∧…∧dx^n∧ω^α = (−1)^n ω^α∧ω_0
        let val = if n % 2 == 1 { coeff.neg() } else { coeff.clone() };
        out[a] = out[a].add(&val);
    }
    Ok(out)
}

/// Canonical contact coefficients: η^J_α = (1/k)·(slot contraction of ω^α_J
/// out of ρ_k). Requires a DyTop-free form whose monomials are k-contact.
fn contact_coefficients(rho_k: &DiffForm, k: usize) -> BTreeMap<ContactKey, DiffForm> {
    let ctx = rho_k.ctx().clone();
    let mut eta: BTreeMap<ContactKey, (usize, BTreeMap<Vec<Covector>, Expr>)> = BTreeMap::new();
    for (covs, coeff) in rho_k.terms() {
        debug_assert_eq!(DiffForm::contact_degree_of(covs), k);
        for (pos, c) in covs.iter().enumerate() {
            if let Covector::Contact { field, index } = c {
                let mut rest = covs.clone();
                rest.remove(pos);
                let mut val = coeff.clone();
                if pos % 2 == 1 {
                    val = val.neg();
                }
                let entry = eta
                    .entry((*field, index.clone()))
                    .or_insert_with(|| (rho_k.order(), BTreeMap::new()));
                match entry.1.entry(rest) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(val);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get().add(&val);
                        if sum.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = sum;
                        }
                    }
                }
            }
        }
    }
    let inv_k = Expr::ratio(1, k as i64);
    eta.into_iter()
        .filter(|(_, (_, terms))| !terms.is_empty())
        .map(|(key, (order, terms))| {
            let f =
                DiffForm::from_parts(ctx.clone(), order, rho_k.degree() - 1, terms).scale(&inv_k);
            (key, f)
        })
        .collect()
}

/// Decomposes the k-contact component of ρ through the interior Euler
/// operator; `k` must be at least 1 and at most the degree of ρ.
pub fn interior_euler_decompose(rho: &DiffForm, k: usize) -> Result<EulerDecomposition> {
    if k == 0 || k > rho.degree() {
        return Err(Error::UnsupportedContactDepth(k));
    }
    let ctx = rho.ctx().clone();
    let n = ctx.base_dim();
    let contact_part = rho.contact_component(k);
    let eta = contact_coefficients(&contact_part, k);
    let max_len = eta.keys().map(|(_, idx)| idx.len()).max().unwrap_or(0);

    // source piece ω^α ∧ Σ_J (−1)^{|J|} d_J η^J_α
    let mut source = DiffForm::zero(ctx.clone(), contact_part.order(), contact_part.degree());
    for ((field, index), eta_form) in &eta {
        let derived = eta_form.form_total_derivative_multi(index);
        let omega = DiffForm::contact_one(ctx.clone(), 1, *field, MultiIndex::empty());
        let mut term = omega.wedge(&derived)?;
        if index.len() % 2 == 1 {
            term = term.neg();
        }
        source = source.add(&term)?;
    }

    // ζ^L_α = Σ_J (−1)^{|J|} C(J·L; L) d_J η^{J·L}_α over sorted representatives
    let mut zeta: BTreeMap<ContactKey, DiffForm> = BTreeMap::new();
    for len in 1..=max_len {
        for l_idx in MultiIndex::enumerate(n, len) {
            for field in 0..ctx.fiber_dim() {
                let mut acc: Option<DiffForm> = None;
                for j_len in 0..=(max_len - len) {
                    for j_idx in MultiIndex::enumerate(n, j_len) {
                        let key = (field, j_idx.concat(&l_idx));
                        let Some(eta_form) = eta.get(&key) else {
                            continue;
                        };
                        let weight =
                            multiset_binomial(&key.1, &l_idx, n) as i64;
                        let sign = if j_len % 2 == 1 { -weight } else { weight };
                        let term = eta_form
                            .form_total_derivative_multi(&j_idx)
                            .scale(&Expr::int(sign));
                        acc = Some(match acc {
                            None => term,
                            Some(a) => a.add(&term)?,
                        });
                    }
                }
                if let Some(a) = acc {
                    if !a.is_zero() {
                        zeta.insert((field, l_idx.clone()), a);
                    }
                }
            }
        }
    }

    // At full horizontal degree, package the remainder as a single local
    // form R with remainder = d_H(p_k R): each d_I(ω^α ∧ ζ^I_α) with
    // I = I'·i equals (−1)^k d_H(K ∧ ω_i) for d_{I'}(ω^α ∧ ζ^I_α) = K ∧ ω_0.
    let full_horizontal = contact_part.degree() == n + k;
    let residual = if full_horizontal && !zeta.is_empty() {
        let mut acc = DiffForm::zero(ctx.clone(), contact_part.order(), contact_part.degree() - 1);
        for ((field, index), zeta_form) in &zeta {
            let i = index.max_entry().expect("zeta indices are nonempty");
            let parent = index.remove_one(i).expect("entry present");
            let omega = DiffForm::contact_one(ctx.clone(), 1, *field, MultiIndex::empty());
            let theta = omega.wedge(zeta_form)?.form_total_derivative_multi(&parent);
            let kappa = theta.factor_out_volume()?;
            let term = kappa.wedge(&DiffForm::covolume(ctx.clone(), kappa.order(), &[i]))?;
            acc = acc.add(&term)?;
        }
        if k % 2 == 1 {
            acc = acc.neg();
        }
        Some(acc)
    } else if full_horizontal {
        Some(DiffForm::zero(
            ctx.clone(),
            contact_part.order(),
            contact_part.degree() - 1,
        ))
    } else {
        None
    };

    Ok(EulerDecomposition {
        contact_depth: k,
        contact_part,
        eta,
        source,
        zeta,
        residual,
    })
}

/// The interior Euler operator alone.
pub fn interior_euler(rho: &DiffForm, k: usize) -> Result<DiffForm> {
    Ok(interior_euler_decompose(rho, k)?.source)
}
