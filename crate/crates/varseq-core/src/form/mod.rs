//! Exterior algebra on jet charts in the adapted cobasis
//! {dx^i, ω^α_I (|I| ≤ s−1), dy^α_I (|I| = s)}.
//!
//! Every form carries the order `s` of the jet space hosting it. Operations
//! that the theory states "up to pullback" promote their operands to the
//! minimal common order; equality always compares promoted normal forms.

mod calculus;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::context::{Ctx, JetContext};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::poly::{JetPoly, Rat};

pub type Expr = JetPoly<Rat>;

/// One element of the adapted cobasis on J^sY.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Covector {
    /// dx^i
    Dx(usize),
    /// ω^α_I = dy^α_I − y^α_{I·j} dx^j, with |I| ≤ s−1
    Contact { field: usize, index: MultiIndex },
    /// dy^α_I at top order |I| = s
    DyTop { field: usize, index: MultiIndex },
}

impl Covector {
    pub fn contact(field: usize, index: MultiIndex) -> Self {
        Covector::Contact { field, index }
    }

    pub fn dy_top(field: usize, index: MultiIndex) -> Self {
        Covector::DyTop { field, index }
    }

    pub fn is_horizontal(&self) -> bool {
        matches!(self, Covector::Dx(_))
    }

    fn valid_at(&self, ctx: &JetContext, order: usize) -> bool {
        match self {
            Covector::Dx(i) => *i < ctx.base_dim(),
            Covector::Contact { field, index } => {
                *field < ctx.fiber_dim()
                    && index.entries().iter().all(|&e| e < ctx.base_dim())
                    && (order >= 1 && index.len() <= order - 1)
            }
            Covector::DyTop { field, index } => {
                *field < ctx.fiber_dim()
                    && index.entries().iter().all(|&e| e < ctx.base_dim())
                    && index.len() == order
            }
        }
    }
}

/// Pre-normalization covector token; `Dy` stands for a dy^α_I of any order
/// and is re-expressed against the hosting order when a term is added.
#[derive(Debug, Clone)]
pub enum RawCov {
    Dx(usize),
    Contact(usize, MultiIndex),
    Dy(usize, MultiIndex),
}

/// Sorts a covector word into the canonical order, counting the sign;
/// `None` when a factor repeats.
fn sort_with_sign(mut covs: Vec<Covector>) -> Option<(Vec<Covector>, bool)> {
    let mut negative = false;
    for i in 1..covs.len() {
        let mut j = i;
        while j > 0 && covs[j] < covs[j - 1] {
            covs.swap(j, j - 1);
            negative = !negative;
            j -= 1;
        }
    }
    for w in covs.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((covs, negative))
}

/// Graded element of the exterior algebra with [`Expr`] coefficients.
#[derive(Debug, Clone)]
pub struct DiffForm {
    ctx: Ctx,
    order: usize,
    degree: usize,
    terms: BTreeMap<Vec<Covector>, Expr>,
}

impl DiffForm {
    pub fn zero(ctx: Ctx, order: usize, degree: usize) -> Self {
        DiffForm {
            ctx,
            order,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A 0-form from a coefficient; the hosting order grows with the
    /// coefficient's effective order.
    pub fn scalar(ctx: Ctx, order: usize, e: Expr) -> Self {
        let order = order.max(e.effective_order());
        let mut f = DiffForm::zero(ctx, order, 0);
        f.push(Vec::new(), e);
        f
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Covector>, &Expr)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of a canonical covector word (zero when absent).
    pub fn coefficient(&self, word: &[Covector]) -> Expr {
        self.terms.get(word).cloned().unwrap_or_else(Expr::zero)
    }

    pub(crate) fn push(&mut self, covs: Vec<Covector>, coeff: Expr) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(covs.len(), self.degree, "degree mismatch in push");
        debug_assert!(
            covs.iter().all(|c| c.valid_at(&self.ctx, self.order)),
            "covector invalid at hosting order {}: {covs:?}",
            self.order
        );
        debug_assert!(
            coeff.effective_order() <= self.order,
            "coefficient order exceeds hosting order"
        );
        match self.terms.entry(covs) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `coeff · c_1 ∧ … ∧ c_q` re-sorting with sign.
    pub(crate) fn push_unsorted(&mut self, covs: Vec<Covector>, coeff: Expr) {
        if let Some((sorted, neg)) = sort_with_sign(covs) {
            self.push(sorted, if neg { coeff.neg() } else { coeff });
        }
    }

    /// Adds a raw token word, expanding `Dy` tokens against the hosting
    /// order: dy^α_I = ω^α_I + y^α_{I·j} dx^j when |I| < s, dy^α_I itself at
    /// |I| = s.
    pub(crate) fn push_raw(&mut self, raw: &[RawCov], coeff: Expr) {
        if coeff.is_zero() {
            return;
        }
        let mut expansions: Vec<(Vec<Covector>, Expr)> = vec![(Vec::new(), coeff)];
        for token in raw {
            let alternatives: Vec<(Covector, Expr)> = match token {
                RawCov::Dx(i) => vec![(Covector::Dx(*i), Expr::one())],
                RawCov::Contact(a, idx) => {
                    vec![(Covector::contact(*a, idx.clone()), Expr::one())]
                }
                RawCov::Dy(a, idx) => {
                    if idx.len() == self.order {
                        vec![(Covector::dy_top(*a, idx.clone()), Expr::one())]
                    } else {
                        assert!(
                            idx.len() < self.order,
                            "dy token above hosting order"
                        );
                        let mut alts = vec![(Covector::contact(*a, idx.clone()), Expr::one())];
                        for j in 0..self.ctx.base_dim() {
                            alts.push((
                                Covector::Dx(j),
                                Expr::fiber_var(*a, idx.push(j)),
                            ));
                        }
                        alts
                    }
                }
            };
            let mut next = Vec::with_capacity(expansions.len() * alternatives.len());
            for (covs, c) in &expansions {
                for (cov, mult) in &alternatives {
                    let mut covs2 = covs.clone();
                    covs2.push(cov.clone());
                    let c2 = if mult.as_constant().map(|k| num_traits::One::is_one(&k)).unwrap_or(false) {
                        c.clone()
                    } else {
                        c.mul(mult)
                    };
                    next.push((covs2, c2));
                }
            }
            expansions = next;
        }
        for (covs, c) in expansions {
            self.push_unsorted(covs, c);
        }
    }

    fn same_chart(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Re-hosts the form at order `target ≥ order`, re-expressing top-order
    /// dy covectors through the contact basis; idempotent beyond the
    /// original order.
    pub fn promote(&self, target: usize) -> Result<Self> {
        if target < self.order {
            return Err(Error::OrderLowering {
                from: self.order,
                to: target,
            });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let mut out = DiffForm::zero(self.ctx.clone(), target, self.degree);
        for (covs, coeff) in &self.terms {
            let raw: Vec<RawCov> = covs
                .iter()
                .map(|c| match c {
                    Covector::Dx(i) => RawCov::Dx(*i),
                    Covector::Contact { field, index } => {
                        RawCov::Contact(*field, index.clone())
                    }
                    Covector::DyTop { field, index } => RawCov::Dy(*field, index.clone()),
                })
                .collect();
            out.push_raw(&raw, coeff.clone());
        }
        Ok(out)
    }

    /// Promotes both operands to their minimal common hosting order.
    pub fn align(&self, other: &Self) -> Result<(Self, Self)> {
        self.same_chart(other)?;
        let s = self.order.max(other.order);
        Ok((self.promote(s)?, other.promote(s)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            // a zero form is degree-agnostic
            if self.is_zero() {
                return Ok(other.clone());
            }
            if other.is_zero() {
                return Ok(self.clone());
            }
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let (mut a, b) = self.align(other)?;
        for (covs, c) in &b.terms {
            a.push(covs.clone(), c.clone());
        }
        Ok(a)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = DiffForm::zero(self.ctx.clone(), self.order, self.degree);
        for (covs, c) in &self.terms {
            out.push(covs.clone(), c.neg());
        }
        out
    }

    /// Multiplies every coefficient by an expression, re-hosting when the
    /// multiplier has higher effective order.
    pub fn scale(&self, e: &Expr) -> Self {
        if e.is_zero() {
            return DiffForm::zero(self.ctx.clone(), self.order, self.degree);
        }
        let needed = e.effective_order().max(self.order);
        let base = self
            .promote(needed)
            .expect("promotion to a higher order cannot fail");
        let mut out = DiffForm::zero(self.ctx.clone(), needed, self.degree);
        for (covs, c) in &base.terms {
            out.push(covs.clone(), c.mul(e));
        }
        out
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&Expr::ratio(num, den))
    }

    /// Graded-commutative wedge product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let mut out = DiffForm::zero(a.ctx.clone(), a.order, a.degree + b.degree);
        for (ca, fa) in &a.terms {
            for (cb, fb) in &b.terms {
                let mut covs = ca.clone();
                covs.extend(cb.iter().cloned());
                out.push_unsorted(covs, fa.mul(fb));
            }
        }
        Ok(out)
    }

    /// Exact equality of classes of hosted forms: both are promoted to the
    /// common order and compared as canonical normal forms.
    pub fn equiv(&self, other: &Self) -> bool {
        if self.ctx != other.ctx {
            return false;
        }
        if self.degree != other.degree {
            return self.is_zero() && other.is_zero();
        }
        match self.align(other) {
            Ok((a, b)) => a.terms == b.terms,
            Err(_) => false,
        }
    }

    /// Number of contact factors (ω or top dy) in a covector word.
    pub fn contact_degree_of(word: &[Covector]) -> usize {
        word.iter()
            .filter(|c| !matches!(c, Covector::Dx(_)))
            .count()
    }

    /// True when every monomial is purely horizontal.
    pub fn is_horizontal(&self) -> bool {
        self.terms
            .keys()
            .all(|covs| covs.iter().all(Covector::is_horizontal))
    }

    /// Whether any monomial carries a top-order dy factor.
    pub fn has_dy_top(&self) -> bool {
        self.terms
            .keys()
            .any(|covs| covs.iter().any(|c| matches!(c, Covector::DyTop { .. })))
    }

    /// dx^i as a 1-form.
    pub fn dx(ctx: Ctx, order: usize, i: usize) -> Self {
        let mut f = DiffForm::zero(ctx, order, 1);
        f.push(vec![Covector::Dx(i)], Expr::one());
        f
    }

    /// ω^α_I as a 1-form; requires order ≥ |I| + 1.
    pub fn contact_one(ctx: Ctx, order: usize, field: usize, index: MultiIndex) -> Self {
        let order = order.max(index.len() + 1);
        let mut f = DiffForm::zero(ctx, order, 1);
        f.push(vec![Covector::contact(field, index)], Expr::one());
        f
    }

    /// dy^α_I as a 1-form hosted exactly at |I|.
    pub fn dy_top_one(ctx: Ctx, field: usize, index: MultiIndex) -> Self {
        let order = index.len();
        let mut f = DiffForm::zero(ctx, order, 1);
        f.push(vec![Covector::dy_top(field, index)], Expr::one());
        f
    }

    /// The volume density ω_0 = dx^1∧…∧dx^n.
    pub fn volume(ctx: Ctx, order: usize) -> Self {
        let n = ctx.base_dim();
        let mut f = DiffForm::zero(ctx, order, n);
        f.push((0..n).map(Covector::Dx).collect(), Expr::one());
        f
    }

    /// ω_{i_1…i_k} = ∂_{i_k} ⌟ … ⌟ ∂_{i_1} ⌟ ω_0.
    pub fn covolume(ctx: Ctx, order: usize, dirs: &[usize]) -> Self {
        let mut f = DiffForm::volume(ctx, order);
        for &i in dirs {
            f = f.contract_base(i);
        }
        f
    }

    pub(crate) fn from_parts(
        ctx: Ctx,
        order: usize,
        degree: usize,
        terms: BTreeMap<Vec<Covector>, Expr>,
    ) -> Self {
        DiffForm {
            ctx,
            order,
            degree,
            terms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::JetContext;

    fn ctx1() -> Ctx {
        JetContext::simple(1, 1, 1)
    }

    #[test]
    fn wedge_kills_repeats() {
        let ctx = ctx1();
        let dx = DiffForm::dx(ctx.clone(), 1, 0);
        assert!(dx.wedge(&dx).unwrap().is_zero());
    }

    #[test]
    fn wedge_antisymmetry_resorts_with_sign() {
        let ctx = ctx1();
        let dx = DiffForm::dx(ctx.clone(), 1, 0);
        let w = DiffForm::contact_one(ctx.clone(), 1, 0, MultiIndex::empty());
        let a = w.wedge(&dx).unwrap();
        let b = dx.wedge(&w).unwrap().neg();
        assert!(a.equiv(&b));
        // canonical storage puts dx first
        let word = a.terms().next().unwrap().0.clone();
        assert!(matches!(word[0], Covector::Dx(0)));
    }

    #[test]
    fn scalar_coefficients_multiply_through() {
        let ctx = ctx1();
        let u = Expr::fiber_var(0, MultiIndex::empty());
        let udx = DiffForm::dx(ctx.clone(), 1, 0).scale(&u);
        let w = DiffForm::contact_one(ctx.clone(), 1, 0, MultiIndex::empty());
        let prod = udx.wedge(&w).unwrap();
        assert_eq!(prod.term_count(), 1);
        let (word, c) = prod.terms().next().unwrap();
        assert!(matches!(word[0], Covector::Dx(0)));
        assert_eq!(c, &u); // dx < ω is already canonical
    }

    #[test]
    fn promotion_expands_top_dy() {
        // dy_x at order 1, promoted to order 2, becomes ω_x + y_xx dx
        let ctx = ctx1();
        let dyx = DiffForm::dy_top_one(ctx.clone(), 0, MultiIndex::single(0));
        let promoted = dyx.promote(2).unwrap();
        let expected = DiffForm::contact_one(ctx.clone(), 2, 0, MultiIndex::single(0))
            .add(
                &DiffForm::dx(ctx.clone(), 2, 0)
                    .scale(&Expr::fiber_var(0, MultiIndex::new(vec![0, 0]))),
            )
            .unwrap();
        assert!(promoted.equiv(&expected));
        // idempotent once past the original order
        assert!(promoted.promote(3).unwrap().equiv(&promoted));
        // pullback of dx stays dx
        let dx = DiffForm::dx(ctx, 1, 0);
        assert!(dx.promote(4).unwrap().equiv(&dx));
    }

    #[test]
    fn promotion_cannot_lower() {
        let ctx = ctx1();
        let dx = DiffForm::dx(ctx, 3, 0);
        assert!(matches!(
            dx.promote(1),
            Err(Error::OrderLowering { .. })
        ));
    }

    #[test]
    fn covolume_fills_holes() {
        // n = 2: dx^k ∧ ω_j = δ^k_j ω_0
        let ctx = JetContext::simple(2, 1, 1);
        let vol = DiffForm::volume(ctx.clone(), 1);
        for j in 0..2 {
            let wj = DiffForm::covolume(ctx.clone(), 1, &[j]);
            for k in 0..2 {
                let lhs = DiffForm::dx(ctx.clone(), 1, k).wedge(&wj).unwrap();
                if k == j {
                    assert!(lhs.equiv(&vol));
                } else {
                    assert!(lhs.is_zero());
                }
            }
        }
    }
}
