//! Canonical multivariate polynomials in jet coordinates.
//!
//! [`JetPoly`] is generic over the scalar type through [`Coeff`]; the engine
//! instantiates it with exact rationals (see the [`crate::Expr`] alias) so
//! that the zero test is syntactic equality, and with `f64` on the numeric
//! evaluation path. Monomials are kept sorted, so every polynomial has a
//! unique normal form.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::ops::{Div, Neg, Sub};

use num_traits::{One, Zero};

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

/// Scalar requirements for polynomial coefficients.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact division; `None` for a zero divisor.
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self.clone() / other.clone())
        }
    }
}

/// Exact rational scalar used by the symbolic layer.
pub type Rat = num_rational::BigRational;

impl Coeff for Rat {
    fn from_i64(v: i64) -> Self {
        Rat::from_integer(v.into())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::new(num.into(), den.into())
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Coeff for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Coeff for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

/// A coordinate on some finite-order jet space of the chart.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JetVariable {
    /// Base coordinate x^i (0-based position).
    Base(usize),
    /// Fiber jet coordinate y^α_I; permutations of I denote the same variable.
    Fiber { field: usize, index: MultiIndex },
}

impl JetVariable {
    pub fn fiber(field: usize, index: MultiIndex) -> Self {
        JetVariable::Fiber { field, index }
    }

    pub fn order(&self) -> usize {
        match self {
            JetVariable::Base(_) => 0,
            JetVariable::Fiber { index, .. } => index.len(),
        }
    }

    pub fn validate_in(&self, ctx: &Ctx) -> Result<()> {
        let ok = match self {
            JetVariable::Base(i) => *i < ctx.base_dim(),
            JetVariable::Fiber { field, index } => {
                *field < ctx.fiber_dim() && index.entries().iter().all(|&e| e < ctx.base_dim())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnknownVariable(format!("{self:?}")))
        }
    }
}

/// Power product of jet variables, kept sorted with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(Vec<(JetVariable, u32)>);

impl Mono {
    pub fn unit() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: JetVariable) -> Self {
        Mono(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(JetVariable, u32)] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out: Vec<(JetVariable, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Mono(out)
    }

    pub fn exponent_of(&self, v: &JetVariable) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Whether `other` divides `self`.
    pub fn divisible_by(&self, other: &Mono) -> bool {
        other
            .0
            .iter()
            .all(|(v, e)| self.exponent_of(v) >= *e)
    }

    /// Quotient monomial; caller must ensure divisibility.
    pub fn quotient(&self, other: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len());
        for (v, e) in &self.0 {
            let d = other.exponent_of(v);
            if *e > d {
                out.push((v.clone(), e - d));
            }
        }
        Mono(out)
    }

    /// Total degree in the fiber variables.
    pub fn fiber_degree(&self) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| matches!(v, JetVariable::Fiber { .. }))
            .map(|(_, e)| e)
            .sum()
    }

    pub fn max_order(&self) -> usize {
        self.0.iter().map(|(v, _)| v.order()).max().unwrap_or(0)
    }
}

/// Canonical polynomial with [`Coeff`] scalars; no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetPoly<C: Coeff> {
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> JetPoly<C> {
    pub fn zero() -> Self {
        JetPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::unit(), c);
        }
        JetPoly { terms }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn int(v: i64) -> Self {
        Self::constant(C::from_i64(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(C::from_ratio(num, den))
    }

    pub fn var(v: JetVariable) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(v), C::one());
        JetPoly { terms }
    }

    pub fn base_var(i: usize) -> Self {
        Self::var(JetVariable::Base(i))
    }

    pub fn fiber_var(field: usize, index: MultiIndex) -> Self {
        Self::var(JetVariable::fiber(field, index))
    }

    pub fn monomial(m: Mono, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        JetPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.terms.is_empty() {
            return Some(C::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Mono::unit()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        JetPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = JetPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return JetPoly::zero();
        }
        JetPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact division by a constant; errors when the divisor is not a
    /// nonzero constant polynomial.
    pub fn div_constant(&self, divisor: &Self) -> Result<Self> {
        match divisor.as_constant() {
            Some(c) if !c.is_zero() => Ok(JetPoly {
                terms: self
                    .terms
                    .iter()
                    .map(|(m, k)| (m.clone(), k.clone() / c.clone()))
                    .collect(),
            }),
            _ => Err(Error::NonConstantDivisor),
        }
    }

    /// Formal partial derivative treating every jet variable as independent.
    pub fn partial_derivative(&self, v: &JetVariable) -> Self {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            if e == 0 {
                continue;
            }
            let mut factors: Vec<(JetVariable, u32)> = Vec::with_capacity(m.0.len());
            for (w, k) in &m.0 {
                if w == v {
                    if *k > 1 {
                        factors.push((w.clone(), k - 1));
                    }
                } else {
                    factors.push((w.clone(), *k));
                }
            }
            out.add_term(Mono(factors), c.clone() * C::from_i64(e as i64));
        }
        out
    }

    /// Distinct variables occurring in the polynomial.
    pub fn variables(&self) -> Vec<JetVariable> {
        let mut vars: Vec<JetVariable> = Vec::new();
        for (m, _) in &self.terms {
            for (v, _) in &m.0 {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
        vars.sort();
        vars
    }

    /// Total derivative D_i = ∂_i + Σ y^α_{I·i} ∂/∂y^α_I.
    pub fn total_derivative(&self, i: usize) -> Self {
        let mut out = self.partial_derivative(&JetVariable::Base(i));
        for v in self.variables() {
            if let JetVariable::Fiber { field, index } = &v {
                let next = JetVariable::fiber(*field, index.push(i));
                let d = self.partial_derivative(&v);
                if !d.is_zero() {
                    out = out.add(&d.mul(&JetPoly::var(next)));
                }
            }
        }
        out
    }

    /// Composition of total derivatives along the entries of `index`.
    pub fn total_derivative_multi(&self, index: &MultiIndex) -> Self {
        let mut out = self.clone();
        for &i in index.entries() {
            out = out.total_derivative(i);
        }
        out
    }

    /// Largest |I| among the fiber variables present.
    pub fn effective_order(&self) -> usize {
        self.terms.keys().map(|m| m.max_order()).max().unwrap_or(0)
    }

    pub fn max_fiber_order(&self) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter())
            .filter_map(|(v, _)| match v {
                JetVariable::Fiber { index, .. } => Some(index.len()),
                JetVariable::Base(_) => None,
            })
            .max()
    }

    /// Substitutes a polynomial for one variable.
    pub fn substitute(&self, v: &JetVariable, value: &Self) -> Self {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = JetPoly::constant(c.clone());
            for (w, e) in &m.0 {
                if w == v {
                    acc = acc.mul(&value.pow(*e));
                } else {
                    acc = acc.mul(&JetPoly::var(w.clone()).pow(*e));
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Simultaneous substitution through a lookup; variables without an
    /// entry stay untouched.
    pub fn substitute_map(&self, lookup: &dyn Fn(&JetVariable) -> Option<Self>) -> Self {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = JetPoly::constant(c.clone());
            for (w, e) in &m.0 {
                let factor = match lookup(w) {
                    Some(p) => p.pow(*e),
                    None => JetPoly::var(w.clone()).pow(*e),
                };
                acc = acc.mul(&factor);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Numeric evaluation; every variable present must be assigned.
    pub fn evaluate(&self, assign: &dyn Fn(&JetVariable) -> Option<C>) -> Result<C> {
        let mut total = C::zero();
        for (m, c) in &self.terms {
            let mut acc = c.clone();
            for (v, e) in &m.0 {
                let val = assign(v).ok_or_else(|| Error::UnknownVariable(format!("{v:?}")))?;
                for _ in 0..*e {
                    acc = acc * val.clone();
                }
            }
            total = total + acc;
        }
        Ok(total)
    }

    /// Coefficient-wise conversion to another scalar.
    pub fn map_coeff<C2: Coeff>(&self, f: &dyn Fn(&C) -> C2) -> JetPoly<C2> {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// ∫₀¹ p(x, t·y) dt for the fiber-scaled polynomial: each monomial is
    /// divided by (fiber degree + 1).
    pub fn fiber_scaled_integral(&self) -> Self {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            let d = m.fiber_degree() as i64;
            out.add_term(m.clone(), c.clone() / C::from_i64(d + 1));
        }
        out
    }
}
