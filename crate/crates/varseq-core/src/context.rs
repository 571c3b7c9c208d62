//! Chart and order data for a trivial fibered chart.
//!
//! A [`JetContext`] fixes the base dimension `n`, the fiber dimension `m`,
//! the problem order `r` and the coordinate names. Every other object in
//! the engine carries one (shared behind an `Arc`).

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Binomial coefficient as usize; small arguments only.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetContext {
    n: usize,
    m: usize,
    r: usize,
    base_names: Vec<String>,
    fiber_names: Vec<String>,
}

impl JetContext {
    pub fn new(
        n: usize,
        m: usize,
        r: usize,
        base_names: Vec<String>,
        fiber_names: Vec<String>,
    ) -> Result<Arc<Self>> {
        if n < 1 || m < 1 {
            return Err(Error::InvalidContext(
                "base and fiber dimensions must be at least 1".into(),
            ));
        }
        if base_names.len() != n || fiber_names.len() != m {
            return Err(Error::InvalidContext(format!(
                "expected {} base and {} fiber names, got {} and {}",
                n,
                m,
                base_names.len(),
                fiber_names.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in base_names.iter().chain(fiber_names.iter()) {
            if name.is_empty()
                || !name.chars().next().unwrap().is_ascii_alphabetic()
                || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(Error::InvalidContext(format!(
                    "coordinate name `{name}` is not an identifier"
                )));
            }
            if is_reserved_name(name) {
                return Err(Error::InvalidContext(format!(
                    "coordinate name `{name}` collides with the cobasis grammar"
                )));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidContext(format!(
                    "duplicate coordinate name `{name}`"
                )));
            }
        }
        Ok(Arc::new(JetContext {
            n,
            m,
            r,
            base_names,
            fiber_names,
        }))
    }

    /// Convenience constructor for tests: names `x1..xn`, `u1..um` (or `x`, `u` when 1-dimensional).
    pub fn simple(n: usize, m: usize, r: usize) -> Arc<Self> {
        let base = if n == 1 {
            vec!["x".to_string()]
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        };
        let fiber = if m == 1 {
            vec!["u".to_string()]
        } else {
            (1..=m).map(|a| format!("u{a}")).collect()
        };
        JetContext::new(n, m, r, base, fiber).expect("simple context is valid")
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn fiber_dim(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn base_name(&self, i: usize) -> &str {
        &self.base_names[i]
    }

    pub fn fiber_name(&self, a: usize) -> &str {
        &self.fiber_names[a]
    }

    pub fn base_index(&self, name: &str) -> Option<usize> {
        self.base_names.iter().position(|s| s == name)
    }

    pub fn fiber_index(&self, name: &str) -> Option<usize> {
        self.fiber_names.iter().position(|s| s == name)
    }

    /// Dimension of the order-`r` jet space over this chart: n + m·C(n+r, r).
    pub fn jet_dim(&self) -> usize {
        self.jet_dim_at(self.r)
    }

    pub fn jet_dim_at(&self, order: usize) -> usize {
        self.n + self.m * binomial(self.n + order, order)
    }

    /// Degree bound up to which the representation applies the interior
    /// Euler operator; beyond it classes are passed through unchanged.
    pub fn max_source_degree(&self) -> usize {
        (self.n + 2).min(self.jet_dim())
    }
}

fn is_reserved_name(name: &str) -> bool {
    for prefix in ["dx", "w", "dU"] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                return true;
            }
        }
    }
    false
}

pub type Ctx = Arc<JetContext>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(6, 3), 20);
    }

    #[test]
    fn jet_dimension_query() {
        let ctx = JetContext::simple(1, 1, 1);
        // x, u, u_x
        assert_eq!(ctx.jet_dim(), 3);
        let ctx = JetContext::simple(2, 2, 2);
        // 2 + 2*C(4,2)
        assert_eq!(ctx.jet_dim(), 2 + 2 * 6);
    }

    #[test]
    fn source_degree_bound() {
        let ctx = JetContext::simple(2, 1, 1);
        assert_eq!(ctx.max_source_degree(), 4);
        let ctx = JetContext::simple(1, 1, 0);
        // N = 1 + 1 = 2 < n + 2
        assert_eq!(ctx.max_source_degree(), 2);
    }

    #[test]
    fn rejects_bad_charts() {
        assert!(JetContext::new(0, 1, 0, vec![], vec!["u".into()]).is_err());
        assert!(
            JetContext::new(1, 1, 0, vec!["x".into()], vec!["x".into()]).is_err(),
            "duplicate names"
        );
        assert!(
            JetContext::new(1, 1, 0, vec!["dx1".into()], vec!["u".into()]).is_err(),
            "reserved names"
        );
    }
}
