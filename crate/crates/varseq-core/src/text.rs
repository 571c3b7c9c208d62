//! Serialization of expressions and forms into the input grammar, so that
//! reports are re-ingestible.

use crate::context::Ctx;
use crate::form::{Covector, DiffForm};
use crate::multiindex::MultiIndex;
use crate::poly::{JetVariable, Rat};
use crate::Expr;

fn index_suffix(index: &MultiIndex) -> String {
    let entries: Vec<String> = index.entries().iter().map(|e| (e + 1).to_string()).collect();
    format!("[{}]", entries.join(","))
}

pub fn variable_to_text(ctx: &Ctx, v: &JetVariable) -> String {
    match v {
        JetVariable::Base(i) => ctx.base_name(*i).to_string(),
        JetVariable::Fiber { field, index } => {
            if index.is_empty() {
                ctx.fiber_name(*field).to_string()
            } else {
                format!("{}{}", ctx.fiber_name(*field), index_suffix(index))
            }
        }
    }
}

fn coeff_to_text(c: &Rat) -> String {
    c.to_string()
}

/// Expression in the input grammar; canonical term order.
pub fn expr_to_text(ctx: &Ctx, e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (mono, coeff)) in e.terms().enumerate() {
        let mut pieces: Vec<String> = Vec::new();
        let negative = coeff < &Rat::from_integer(0.into());
        let abs = if negative { -coeff.clone() } else { coeff.clone() };
        if !num_traits::One::is_one(&abs) || mono.is_unit() {
            pieces.push(coeff_to_text(&abs));
        }
        for (v, exp) in mono.factors() {
            let name = variable_to_text(ctx, v);
            if *exp == 1 {
                pieces.push(name);
            } else {
                pieces.push(format!("{name}^{exp}"));
            }
        }
        let term = pieces.join("*");
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&term);
    }
    out
}

fn covector_to_text(c: &Covector) -> String {
    match c {
        Covector::Dx(i) => format!("dx{}", i + 1),
        Covector::Contact { field, index } => {
            format!("w{}{}", field + 1, index_suffix(index))
        }
        Covector::DyTop { field, index } => {
            format!("dU{}{}", field + 1, index_suffix(index))
        }
    }
}

/// Differential form in the input grammar: coefficient in parentheses,
/// wedge factors joined by `^`.
pub fn form_to_text(ctx: &Ctx, f: &DiffForm) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    for (covs, coeff) in f.terms() {
        let coeff_txt = format!("({})", expr_to_text(ctx, coeff));
        if covs.is_empty() {
            parts.push(coeff_txt);
        } else {
            let word: Vec<String> = covs.iter().map(covector_to_text).collect();
            parts.push(format!("{} {}", coeff_txt, word.join("^")));
        }
    }
    parts.join(" + ")
}
