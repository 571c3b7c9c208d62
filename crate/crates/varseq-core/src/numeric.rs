//! Numeric evaluation path: polynomial re-instantiation over `f64`, section
//! sampling and a small fixed-step integrator for the on-shell spot checks.

use crate::error::Result;
use crate::multiindex::MultiIndex;
use crate::poly::{Coeff, JetVariable};
use crate::section::Section;
use crate::{Expr, NumExpr};

/// Coefficient-wise conversion of an exact expression to its `f64` twin.
pub fn to_num(e: &Expr) -> NumExpr {
    e.map_coeff(&|c| Coeff::to_f64(c))
}

/// Evaluates a numeric polynomial at a jet point given by base values and a
/// fiber lookup.
pub fn eval_num(
    e: &NumExpr,
    base: &[f64],
    fiber: &dyn Fn(usize, &MultiIndex) -> f64,
) -> Result<f64> {
    e.evaluate(&|v| match v {
        JetVariable::Base(i) => base.get(*i).copied(),
        JetVariable::Fiber { field, index } => Some(fiber(*field, index)),
    })
}

/// Pulls an expression back along a polynomial section and evaluates the
/// result at a base point.
pub fn eval_on_section(e: &Expr, section: &Section, point: &[f64]) -> Result<f64> {
    let pulled = to_num(&section.pull_back(e));
    eval_num(&pulled, point, &|_, _| f64::NAN)
}

/// Classic fixed-step fourth-order Runge–Kutta for u'' = f(x, u, u');
/// returns samples (x, u, u').
pub fn rk4_second_order(
    f: &dyn Fn(f64, f64, f64) -> f64,
    x0: f64,
    u0: f64,
    v0: f64,
    h: f64,
    steps: usize,
) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(steps + 1);
    let (mut x, mut u, mut v) = (x0, u0, v0);
    out.push((x, u, v));
    for _ in 0..steps {
        let k1u = v;
        let k1v = f(x, u, v);
        let k2u = v + 0.5 * h * k1v;
        let k2v = f(x + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
        let k3u = v + 0.5 * h * k2v;
        let k3v = f(x + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
        let k4u = v + h * k3v;
        let k4v = f(x + h, u + h * k3u, v + h * k3v);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        x += h;
        out.push((x, u, v));
    }
    out
}
