//! Shared test support: independent oracles kept deliberately separate from
//! the engine's implementation paths, plus reusable identity batteries.

#![allow(dead_code)]

use varseq_core::form::DiffForm;
use varseq_core::multiindex::{multiset_binomial, MultiIndex};
use varseq_core::poly::JetVariable;
use varseq_core::{Ctx, Expr, NumExpr};

/// Euler–Lagrange coefficients by the classical coordinate formula
/// E_α = Σ_J (−1)^{|J|} d_J (∂L/∂y^α_J), summed over sorted representatives.
/// Independent of the interior-Euler route.
pub fn euler_coefficients_direct(ctx: &Ctx, density: &Expr) -> Vec<Expr> {
    let n = ctx.base_dim();
    let r = density.effective_order();
    let mut out = Vec::with_capacity(ctx.fiber_dim());
    for a in 0..ctx.fiber_dim() {
        let mut acc = Expr::zero();
        for len in 0..=r {
            for idx in MultiIndex::enumerate(n, len) {
                let partial =
                    density.partial_derivative(&JetVariable::fiber(a, idx.clone()));
                if partial.is_zero() {
                    continue;
                }
                let term = partial.total_derivative_multi(&idx);
                acc = if len % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
        }
        out.push(acc);
    }
    out
}

/// Classical Helmholtz conditions in components: the source coefficients
/// E_α are locally variational iff for all α, β and every sorted K
///   ∂E_α/∂y^β_K = Σ_{J ⊇ K} (−1)^{|J|} C(J;K) d_{J∖K}(∂E_β/∂y^α_J).
/// Independent oracle; the engine's Helmholtz map is the interior Euler
/// operator at contact depth 2.
pub fn helmholtz_conditions_hold(ctx: &Ctx, coefficients: &[Expr]) -> bool {
    let n = ctx.base_dim();
    let r = coefficients
        .iter()
        .map(Expr::effective_order)
        .max()
        .unwrap_or(0);
    for a in 0..ctx.fiber_dim() {
        for b in 0..ctx.fiber_dim() {
            for k_len in 0..=r {
                for k_idx in MultiIndex::enumerate(n, k_len) {
                    let lhs = coefficients[a]
                        .partial_derivative(&JetVariable::fiber(b, k_idx.clone()));
                    let mut rhs = Expr::zero();
                    for j_len in k_len..=r {
                        for j_idx in MultiIndex::enumerate(n, j_len) {
                            if !j_idx.contains(&k_idx, n) {
                                continue;
                            }
                            let partial = coefficients[b]
                                .partial_derivative(&JetVariable::fiber(a, j_idx.clone()));
                            if partial.is_zero() {
                                continue;
                            }
                            let rest = j_idx.difference(&k_idx, n).expect("contained");
                            let weight =
                                multiset_binomial(&j_idx, &k_idx, n) as i64;
                            let signed = if j_len % 2 == 0 { weight } else { -weight };
                            rhs = rhs.add(
                                &partial
                                    .total_derivative_multi(&rest)
                                    .mul(&Expr::int(signed)),
                            );
                        }
                    }
                    if !lhs.sub(&rhs).is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Vainberg–Tonti Lagrangian density Σ_α y^α ∫₀¹ E_α(x, t·y) dt; exact for
/// polynomial coefficients. A source form is locally variational exactly
/// when the Euler–Lagrange coefficients of this density reproduce it.
pub fn tonti_density(ctx: &Ctx, coefficients: &[Expr]) -> Expr {
    let mut out = Expr::zero();
    for (a, e) in coefficients.iter().enumerate() {
        let integrated = e.fiber_scaled_integral();
        out = out.add(&Expr::fiber_var(a, MultiIndex::empty()).mul(&integrated));
    }
    out
}

/// Central-difference variation of the discretized 1-D action for a
/// first-order density: returns (discrete δS/δu divided by the cell size,
/// symbolic E on the section) sampled at interior nodes.
pub fn fd_variation_1d(
    ctx: &Ctx,
    density: &Expr,
    section: &varseq_core::Section,
    nodes: usize,
    bump: f64,
) -> Vec<(f64, f64)> {
    use varseq_core::numeric::{eval_num, to_num};

    let h = 1.0 / nodes as f64;
    let num_density = to_num(density);
    let phi = |x: f64| -> f64 {
        varseq_core::numeric::eval_on_section(
            &Expr::fiber_var(0, MultiIndex::empty()),
            section,
            &[x],
        )
        .expect("section evaluates")
    };
    let mut values: Vec<f64> = (0..=nodes).map(|j| phi(j as f64 * h)).collect();

    // fourth-order central stencils
    let ux = |v: &[f64], j: usize| -> f64 {
        (-v[j + 2] + 8.0 * v[j + 1] - 8.0 * v[j - 1] + v[j - 2]) / (12.0 * h)
    };
    let uxx = |v: &[f64], j: usize| -> f64 {
        (-v[j + 2] + 16.0 * v[j + 1] - 30.0 * v[j] + 16.0 * v[j - 1] - v[j - 2])
            / (12.0 * h * h)
    };
    let action = |v: &[f64]| -> f64 {
        let mut s = 0.0;
        for j in 2..=(nodes - 2) {
            let x = j as f64 * h;
            let val = eval_num(&num_density, &[x], &|_, idx| match idx.len() {
                0 => v[j],
                1 => ux(v, j),
                2 => uxx(v, j),
                _ => panic!("density order beyond the stencil"),
            })
            .expect("density evaluates");
            s += val * h;
        }
        s
    };

    let el = euler_coefficients_direct(ctx, density).remove(0);
    let mut out = Vec::new();
    for j in (5..nodes - 5).step_by((nodes / 7).max(1)) {
        let x = j as f64 * h;
        let keep = values[j];
        values[j] = keep + bump;
        let plus = action(&values);
        values[j] = keep - bump;
        let minus = action(&values);
        values[j] = keep;
        let discrete = (plus - minus) / (2.0 * bump) / h;
        let symbolic = varseq_core::numeric::eval_on_section(&el, section, &[x])
            .expect("EL evaluates on the section");
        out.push((discrete, symbolic));
    }
    out
}

/// Same for a first-order density on a 2-D chart.
pub fn fd_variation_2d(
    ctx: &Ctx,
    density: &Expr,
    section: &varseq_core::Section,
    nodes: usize,
    bump: f64,
) -> Vec<(f64, f64)> {
    use varseq_core::numeric::{eval_num, to_num};

    let h = 1.0 / nodes as f64;
    let num_density = to_num(density);
    let phi = |x: f64, y: f64| -> f64 {
        varseq_core::numeric::eval_on_section(
            &Expr::fiber_var(0, MultiIndex::empty()),
            section,
            &[x, y],
        )
        .expect("section evaluates")
    };
    let idx2 = |j: usize, k: usize| j * (nodes + 1) + k;
    let mut values: Vec<f64> = Vec::with_capacity((nodes + 1) * (nodes + 1));
    for j in 0..=nodes {
        for k in 0..=nodes {
            values.push(phi(j as f64 * h, k as f64 * h));
        }
    }

    let d1 = |v: &[f64], j: usize, k: usize| -> f64 {
        (-v[idx2(j + 2, k)] + 8.0 * v[idx2(j + 1, k)] - 8.0 * v[idx2(j - 1, k)]
            + v[idx2(j - 2, k)])
            / (12.0 * h)
    };
    let d2 = |v: &[f64], j: usize, k: usize| -> f64 {
        (-v[idx2(j, k + 2)] + 8.0 * v[idx2(j, k + 1)] - 8.0 * v[idx2(j, k - 1)]
            + v[idx2(j, k - 2)])
            / (12.0 * h)
    };
    let action = |v: &[f64]| -> f64 {
        let mut s = 0.0;
        for j in 2..=(nodes - 2) {
            for k in 2..=(nodes - 2) {
                let val = eval_num(
                    &num_density,
                    &[j as f64 * h, k as f64 * h],
                    &|_, idx| match idx.entries() {
                        [] => v[idx2(j, k)],
                        [0] => d1(v, j, k),
                        [1] => d2(v, j, k),
                        _ => panic!("density order beyond the stencil"),
                    },
                )
                .expect("density evaluates");
                s += val * h * h;
            }
        }
        s
    };

    let el = euler_coefficients_direct(ctx, density).remove(0);
    let mut out = Vec::new();
    let step = (nodes / 3).max(1);
    for j in (5..nodes - 5).step_by(step) {
        for k in (5..nodes - 5).step_by(step) {
            let (x, y) = (j as f64 * h, k as f64 * h);
            let at = idx2(j, k);
            let keep = values[at];
            values[at] = keep + bump;
            let plus = action(&values);
            values[at] = keep - bump;
            let minus = action(&values);
            values[at] = keep;
            let discrete = (plus - minus) / (2.0 * bump) / (h * h);
            let symbolic = varseq_core::numeric::eval_on_section(&el, section, &[x, y])
                .expect("EL evaluates on the section");
            out.push((discrete, symbolic));
        }
    }
    out
}

/// Runs the nine operator identities, the projector algebra, the splitting
/// of d and both contraction-vanishing statements on one form; panics with
/// a description on the first failure.
pub fn appendix_battery(rho: &DiffForm, field: &varseq_core::ProjectableField) {
    let q = rho.degree();

    // projector algebra and split-sum
    let parts = rho.contact_split();
    let mut sum = DiffForm::zero(rho.ctx().clone(), parts[0].order(), q);
    for (j, pj) in parts.iter().enumerate() {
        sum = sum.add(pj).unwrap();
        let again = pj.contact_split();
        for (i, pij) in again.iter().enumerate() {
            if i == j {
                assert!(pij.equiv(pj), "p_i p_i = (π*) p_i");
            } else {
                assert!(pij.is_zero(), "p_i p_j = 0 for i ≠ j");
            }
        }
    }
    assert!(sum.equiv(rho), "Σ p_i = π*");

    // d = d_H + d_V
    let d = rho.exterior_differential();
    let dh = rho.horizontal_differential();
    let dv = rho.vertical_differential();
    assert!(d.equiv(&dh.add(&dv).unwrap()), "(π*) d = d_H + d_V");

    for i in 1..=q.min(3) {
        assert!(
            dh.contact_component(i)
                .equiv(&rho.contact_component(i).horizontal_differential()),
            "p_i d_H = d_H p_i"
        );
        assert!(
            dv.contact_component(i)
                .equiv(&rho.contact_component(i - 1).vertical_differential()),
            "p_i d_V = d_V p_(i−1)"
        );
        let lhs = d.contact_component(i);
        let rhs = rho
            .contact_component(i)
            .exterior_differential()
            .contact_component(i)
            .add(
                &rho.contact_component(i - 1)
                    .exterior_differential()
                    .contact_component(i),
            )
            .unwrap();
        assert!(lhs.equiv(&rhs), "(π*)(p_i d) = p_i d (p_i + p_(i−1))");
    }

    assert!(
        dh.horizontalize()
            .equiv(&rho.horizontalize().horizontal_differential()),
        "h d_H = d_H h"
    );
    assert!(dv.horizontalize().is_zero(), "h d_V = 0");
    assert!(
        d.horizontalize()
            .equiv(&rho.horizontalize().horizontal_differential()),
        "(π*)(h d) = d_H h"
    );
    assert!(dh.horizontal_differential().is_zero(), "d_H² = 0");
    assert!(dv.vertical_differential().is_zero(), "d_V² = 0");
    assert!(
        dh.vertical_differential()
            .add(&dv.horizontal_differential())
            .unwrap()
            .is_zero(),
        "d_H d_V = −d_V d_H"
    );

    // contraction vanishing
    let pr = field.prolong(rho.order() + 1);
    assert!(
        pr.contract_vertical(&rho.horizontalize()).is_zero(),
        "Ξ_V ⌟ hρ = 0"
    );
    assert!(
        pr.contract_horizontal(&rho.contact_component(q)).is_zero(),
        "Ξ_H ⌟ p_top ρ = 0"
    );
}

/// Relative error with an absolute floor of one.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Evaluates a numeric expression on sampled (u, u_x) data of a 1-D chart,
/// substituting higher derivatives through the equation u'' = f(x, u, u').
pub fn eval_on_samples(
    e: &NumExpr,
    samples: &[(f64, f64, f64)],
    second: &dyn Fn(f64, f64, f64) -> f64,
) -> Vec<f64> {
    samples
        .iter()
        .map(|&(x, u, v)| {
            varseq_core::numeric::eval_num(e, &[x], &|_, idx| match idx.len() {
                0 => u,
                1 => v,
                2 => second(x, u, v),
                _ => panic!("sampled evaluation supports order ≤ 2"),
            })
            .expect("expression evaluates on samples")
        })
        .collect()
}
