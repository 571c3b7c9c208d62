//! Reduction modulo the differential ideal generated by the field
//! equations and their total derivatives.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::form::DiffForm;
use crate::multiindex::MultiIndex;
use crate::poly::{JetVariable, Mono};
use crate::Expr;

/// The differential ideal spanned by the source coefficients E_α and their
/// total derivatives, with jet order capped.
#[derive(Debug, Clone)]
pub struct DifferentialIdeal {
    generators: Vec<Expr>,
    leading: Vec<Mono>,
    cap: usize,
}

/// Ranks a variable so that higher jets dominate: the leading term of a
/// quasi-linear field equation is its top derivative.
fn var_rank(v: &JetVariable) -> (usize, usize, Vec<usize>, usize) {
    match v {
        JetVariable::Base(i) => (0, 0, Vec::new(), *i),
        JetVariable::Fiber { field, index } => {
            (1, index.len(), index.entries().to_vec(), *field)
        }
    }
}

/// Graded order on monomials with jet-dominant variable ranking.
fn mono_cmp(a: &Mono, b: &Mono) -> Ordering {
    let da = a.degree();
    let db = b.degree();
    if da != db {
        return da.cmp(&db);
    }
    // lexicographic on the exponent vectors read from the highest variable down
    let mut fa: Vec<((usize, usize, Vec<usize>, usize), u32)> = a
        .factors()
        .iter()
        .map(|(v, e)| (var_rank(v), *e))
        .collect();
    let mut fb: Vec<((usize, usize, Vec<usize>, usize), u32)> = b
        .factors()
        .iter()
        .map(|(v, e)| (var_rank(v), *e))
        .collect();
    fa.sort_by(|x, y| y.0.cmp(&x.0));
    fb.sort_by(|x, y| y.0.cmp(&x.0));
    for (x, y) in fa.iter().zip(fb.iter()) {
        match x.0.cmp(&y.0) {
            Ordering::Equal => {}
            other => return other,
        }
        match x.1.cmp(&y.1) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    fa.len().cmp(&fb.len())
}

fn leading_monomial(e: &Expr) -> Option<Mono> {
    e.terms()
        .map(|(m, _)| m.clone())
        .max_by(|a, b| mono_cmp(a, b))
}

/// Cooperative cancellation handle for long-running reductions.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, AtomicOrdering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(AtomicOrdering::Relaxed)
    }
}

/// One reduction: normal form plus the certificate of multipliers.
#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    pub normal_form: Expr,
    /// (generator index, accumulated multiplier): input = Σ qᵢ gᵢ + normal form.
    pub multipliers: Vec<(usize, Expr)>,
    /// Whether a nonzero normal form is a definitive non-membership verdict
    /// at this cap.
    pub conclusive: bool,
}

impl ReductionOutcome {
    pub fn is_zero(&self) -> bool {
        self.normal_form.is_zero()
    }
}

impl DifferentialIdeal {
    /// Builds the ideal from the source coefficients over a chart with `n`
    /// base directions, closing under total derivatives while the jet order
    /// stays within `cap`.
    pub fn with_base_dim(source_coefficients: &[Expr], n: usize, cap: usize) -> Self {
        let mut generators: Vec<Expr> = Vec::new();
        for e in source_coefficients {
            if e.is_zero() {
                continue;
            }
            let base_order = e.effective_order();
            generators.push(e.clone());
            if cap > base_order {
                for len in 1..=(cap - base_order) {
                    for idx in MultiIndex::enumerate(n, len) {
                        generators.push(e.total_derivative_multi(&idx));
                    }
                }
            }
        }
        let leading = generators
            .iter()
            .map(|g| leading_monomial(g).expect("generators are nonzero"))
            .collect();
        DifferentialIdeal {
            generators,
            leading,
            cap,
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[Expr] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Multi-divisor polynomial reduction with recorded multipliers.
    pub fn reduce(&self, e: &Expr) -> ReductionOutcome {
        self.reduce_cancellable(e, &CancelToken::new())
            .expect("reduction without cancellation cannot fail")
    }

    /// Reduction that polls a cancellation token between steps.
    pub fn reduce_cancellable(
        &self,
        e: &Expr,
        token: &CancelToken,
    ) -> Result<ReductionOutcome> {
        let mut rest = e.clone();
        let mut multipliers: Vec<Expr> = vec![Expr::zero(); self.generators.len()];
        'outer: loop {
            if token.is_cancelled() {
                return Err(Error::Cancelled);
            }
            // find a reducible monomial, largest first
            let mut monos: Vec<(Mono, Expr)> = rest
                .terms()
                .map(|(m, c)| (m.clone(), Expr::monomial(m.clone(), c.clone())))
                .collect();
            monos.sort_by(|a, b| mono_cmp(&b.0, &a.0));
            for (m, _) in &monos {
                for (gi, lead) in self.leading.iter().enumerate() {
                    if m.divisible_by(lead) {
                        let g = &self.generators[gi];
                        let lc = g
                            .terms()
                            .find(|(gm, _)| *gm == lead)
                            .map(|(_, c)| c.clone())
                            .expect("leading coefficient present");
                        let coeff = rest
                            .terms()
                            .find(|(rm, _)| *rm == m)
                            .map(|(_, c)| c.clone())
                            .expect("monomial present");
                        let q = Expr::monomial(m.quotient(lead), coeff / lc);
                        rest = rest.sub(&q.mul(g));
                        multipliers[gi] = multipliers[gi].add(&q);
                        continue 'outer;
                    }
                }
            }
            break;
        }
        let conclusive = rest.is_zero() || e.effective_order() <= self.cap;
        Ok(ReductionOutcome {
            normal_form: rest,
            multipliers: multipliers
                .into_iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .collect(),
            conclusive,
        })
    }

    /// Reduction lifted to horizontal forms, coefficient by coefficient.
    pub fn reduce_form(&self, rho: &DiffForm) -> Result<(DiffForm, bool)> {
        let mut out = DiffForm::zero(rho.ctx().clone(), rho.order(), rho.degree());
        let mut conclusive = true;
        for (covs, coeff) in rho.terms() {
            let outcome = self.reduce(coeff);
            conclusive &= outcome.conclusive;
            if !outcome.normal_form.is_zero() {
                let piece = DiffForm::from_parts(
                    rho.ctx().clone(),
                    rho.order().max(outcome.normal_form.effective_order()),
                    rho.degree(),
                    [(covs.clone(), outcome.normal_form)].into_iter().collect(),
                );
                out = out.add(&piece)?;
            }
        }
        Ok((out, conclusive))
    }

    /// Full outcome for a reduction expected to reach zero; errors with
    /// [`Error::Inconclusive`] when the cap is the obstruction.
    pub fn reduce_expect_zero(&self, e: &Expr) -> Result<ReductionOutcome> {
        let outcome = self.reduce(e);
        if !outcome.is_zero() && !outcome.conclusive {
            return Err(Error::Inconclusive(self.cap));
        }
        Ok(outcome)
    }
}
