//! Exact-arithmetic toolkit for raising-operator formulas of Macdonald
//! polynomials.
//!
//! The library builds `Q_λ(x; q, t)` three ways (Gram–Schmidt, the
//! `c_n` raising-operator series, and the Lassalle–Schlosser sum), works with
//! the modified Macdonald difference operator on truncated power series in the
//! ratios `x_{i+1}/x_i`, and checks the identities that connect them.
//!
//! All arithmetic is exact. Numerical code is generic over [`Field`]; the two
//! instances are [`Rational`] and the deformation field [`RatFunc`].

pub mod coeff;
pub mod difference;
pub mod context;
pub mod error;
pub mod ledger;
pub mod lassalle;
pub mod linalg;
pub mod n3;
pub mod oracle;
pub mod partition;
pub mod raising;
pub mod ratfunc;
pub mod scalar;
pub mod report;
pub mod series;
pub mod suite;
pub mod symfunc;
pub mod theta;

pub use context::{make_context, EvalContext, Genericity, SMode};
pub use error::{Error, Result};
pub use partition::Partition;
pub use ratfunc::{rf_limit_at_one, Poly, RatFunc};
pub use scalar::{parse_rational, q_pochhammer, Field, Rational};
pub use symfunc::{Basis, SymF};

/// Symmetric function with rational coefficients.
pub type SymFQ = SymF<Rational>;
/// Evaluation context at a rational point.
pub type ContextQ = EvalContext<Rational>;
/// Evaluation context in the deformation field.
pub type ContextZ = EvalContext<RatFunc>;
