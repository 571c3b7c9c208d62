//! Deterministic randomized inputs for the property and acceptance suites.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::context::Ctx;
use crate::form::{Covector, DiffForm};
use crate::multiindex::MultiIndex;
use crate::Expr;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random polynomial: up to `terms` monomials of total degree ≤ `degree` in
/// variables of jet order ≤ `max_order`, with small integer coefficients.
pub fn rand_expr(
    rng: &mut StdRng,
    ctx: &Ctx,
    max_order: usize,
    degree: usize,
    terms: usize,
) -> Expr {
    let mut pool: Vec<Expr> = (0..ctx.base_dim()).map(Expr::base_var).collect();
    for a in 0..ctx.fiber_dim() {
        for idx in MultiIndex::enumerate_up_to(ctx.base_dim(), max_order) {
            pool.push(Expr::fiber_var(a, idx));
        }
    }
    let mut out = Expr::zero();
    for _ in 0..terms {
        let c: i64 = loop {
            let c = rng.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        let mut mono = Expr::int(c);
        let d = rng.gen_range(0..=degree);
        for _ in 0..d {
            let v = &pool[rng.gen_range(0..pool.len())];
            mono = mono.mul(v);
        }
        out = out.add(&mono);
    }
    out
}

/// The full cobasis at a hosting order.
pub fn cobasis(ctx: &Ctx, order: usize) -> Vec<Covector> {
    let mut pool: Vec<Covector> = (0..ctx.base_dim()).map(Covector::Dx).collect();
    for a in 0..ctx.fiber_dim() {
        if order >= 1 {
            for idx in MultiIndex::enumerate_up_to(ctx.base_dim(), order - 1) {
                pool.push(Covector::contact(a, idx));
            }
        }
        for idx in MultiIndex::enumerate(ctx.base_dim(), order) {
            pool.push(Covector::dy_top(a, idx));
        }
    }
    pool
}

/// Random form of the given degree hosted at `order`: a few monomials with
/// distinct covector factors and small polynomial coefficients.
pub fn rand_form(rng: &mut StdRng, ctx: &Ctx, order: usize, degree: usize) -> DiffForm {
    let pool = cobasis(ctx, order);
    let mut out = DiffForm::zero(ctx.clone(), order, degree);
    if degree > pool.len() {
        return out;
    }
    let monomials = rng.gen_range(1..=2);
    for _ in 0..monomials {
        let mut picked: Vec<usize> = Vec::with_capacity(degree);
        while picked.len() < degree {
            let k = rng.gen_range(0..pool.len());
            if !picked.contains(&k) {
                picked.push(k);
            }
        }
        let covs: Vec<Covector> = picked.iter().map(|&k| pool[k].clone()).collect();
        let coeff = rand_expr(rng, ctx, order, 2, 2);
        out.push_unsorted(covs, coeff);
    }
    out
}

/// Random horizontal form (dx factors only).
pub fn rand_horizontal_form(
    rng: &mut StdRng,
    ctx: &Ctx,
    order: usize,
    degree: usize,
) -> DiffForm {
    let n = ctx.base_dim();
    let mut out = DiffForm::zero(ctx.clone(), order, degree);
    if degree > n {
        return out;
    }
    let monomials = rng.gen_range(1..=2);
    for _ in 0..monomials {
        let mut picked: Vec<usize> = Vec::with_capacity(degree);
        while picked.len() < degree {
            let k = rng.gen_range(0..n);
            if !picked.contains(&k) {
                picked.push(k);
            }
        }
        let covs: Vec<Covector> = picked.iter().map(|&k| Covector::Dx(k)).collect();
        let coeff = rand_expr(rng, ctx, order, 2, 2);
        out.push_unsorted(covs, coeff);
    }
    out
}

/// Random projectable field: base components in base variables, fiber
/// components of order 0.
pub fn rand_projectable_field(rng: &mut StdRng, ctx: &Ctx) -> crate::ProjectableField {
    let xi: Vec<Expr> = (0..ctx.base_dim())
        .map(|_| rand_base_expr(rng, ctx, 2, 2))
        .collect();
    let eta: Vec<Expr> = (0..ctx.fiber_dim())
        .map(|_| rand_expr(rng, ctx, 0, 2, 2))
        .collect();
    crate::ProjectableField::new(ctx.clone(), xi, eta).expect("generated field is projectable")
}

/// Random vertical field (ξ = 0).
pub fn rand_vertical_field(rng: &mut StdRng, ctx: &Ctx) -> crate::ProjectableField {
    let xi = vec![Expr::zero(); ctx.base_dim()];
    let eta: Vec<Expr> = (0..ctx.fiber_dim())
        .map(|_| rand_expr(rng, ctx, 0, 2, 2))
        .collect();
    crate::ProjectableField::new(ctx.clone(), xi, eta).expect("generated field is vertical")
}

/// Random polynomial in base variables only.
pub fn rand_base_expr(rng: &mut StdRng, ctx: &Ctx, degree: usize, terms: usize) -> Expr {
    let pool: Vec<Expr> = (0..ctx.base_dim()).map(Expr::base_var).collect();
    let mut out = Expr::zero();
    for _ in 0..terms {
        let c: i64 = loop {
            let c = rng.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        let mut mono = Expr::int(c);
        let d = rng.gen_range(0..=degree);
        for _ in 0..d {
            mono = mono.mul(&pool[rng.gen_range(0..pool.len())]);
        }
        out = out.add(&mono);
    }
    out
}

/// Random Lagrangian: horizontal volume form with a polynomial density of
/// bounded jet order and degree.
pub fn rand_lagrangian(rng: &mut StdRng, ctx: &Ctx, order: usize, degree: usize) -> DiffForm {
    let density = rand_expr(rng, ctx, order, degree, 3);
    DiffForm::volume(ctx.clone(), order.max(1)).scale(&density)
}

/// Random section: polynomial base-variable components.
pub fn rand_section(rng: &mut StdRng, ctx: &Ctx, degree: usize) -> crate::Section {
    let comps: Vec<Expr> = (0..ctx.fiber_dim())
        .map(|_| rand_base_expr(rng, ctx, degree, 3))
        .collect();
    crate::Section::new(ctx.clone(), comps).expect("generated section is valid")
}
