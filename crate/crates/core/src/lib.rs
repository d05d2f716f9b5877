//! Christoffel functions and their box-regularized variant for finite
//! measures on `ℝᵈ`, built from moment matrices in the monomial basis.
//!
//! ```
//! use cdkernel::{BoxQuery, ChristoffelModel, JitterPolicy, MomentProvider};
//!
//! let mu = MomentProvider::chebyshev();
//! let model = ChristoffelModel::from_provider(&mu, 2, JitterPolicy::None).unwrap();
//! let q = BoxQuery::new(vec![0.5], 0.1).unwrap();
//! let inv = cdkernel::lambda_tilde_inv(&model, &q).unwrap();
//! assert!(inv > 0.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod christoffel;
pub mod error;
pub mod index;
pub mod measures;
pub mod oracle;
pub mod regularized;
mod telescope;

pub use christoffel::{ChristoffelModel, JitterPolicy, OrthonormalBasis};
pub use error::{Error, Result};
pub use index::{binomial_count, IndexSet, MultiIndex};
pub use measures::{AffineFrame, Axis, MeasureKind, MomentMatrix, MomentProvider, SampleCloud};
pub use regularized::{
    box_avg_monomial, box_avg_vector, boundary_estimates, classify_support, density_estimate,
    density_estimate_boundary_corrected, evaluate, lambda_tilde, lambda_tilde_inv, optimal_polynomial, sweep,
    BoundaryEstimate, BoxQuery, DomainBox, EpsilonRule, OptimalPolynomial, RegularizedEvaluation, SupportThresholds,
    SupportVerdict, SweepRow, Verdict,
};
