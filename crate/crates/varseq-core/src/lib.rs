//! Symbolic variational calculus on jet prolongations of a trivial fibered
//! chart: exact polynomial coefficients, contact-adapted exterior algebra,
//! interior Euler operators, variational Lie derivatives and conservation
//! law analysis.
//!
//! The polynomial layer is generic over the scalar type ([`poly::Coeff`]);
//! the symbolic engine instantiates it with exact rationals so that every
//! identity check is a syntactic zero test, while the numeric evaluation
//! path re-instantiates the same polynomials over `f64`.

pub mod context;
pub mod error;
pub mod fields;
pub mod form;
pub mod gen;
pub mod multiindex;
pub mod numeric;
pub mod parse;
pub mod poly;
pub mod section;
pub mod text;
pub mod variational;

pub use context::{Ctx, JetContext};
pub use error::{Error, Result};
pub use fields::{ProjectableField, ProlongedField, SplitField};
pub use form::{Covector, DiffForm};
pub use multiindex::MultiIndex;
pub use poly::{Coeff, JetPoly, JetVariable};
pub use section::Section;

/// Exact rational scalar of the symbolic layer.
pub type Rat = poly::Rat;

/// Symbolic expression: canonical polynomial in jet coordinates with exact
/// rational coefficients.
pub type Expr = poly::JetPoly<Rat>;

/// Polynomial over `f64`, used by the numeric evaluation path.
pub type NumExpr = poly::JetPoly<f64>;

/// Identity normalization: expressions are always kept in canonical form,
/// so this is the identity map; it records that invariant as an operation.
pub fn normalize(e: &Expr) -> Expr {
    e.clone()
}
