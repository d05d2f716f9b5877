//! Reference computations that share no numerical path with the main code.
//!
//! - [`solve_min_quadratic`] solves `min pᵀMp s.t. cᵀp = 1` through a
//!   symmetric eigendecomposition instead of the Cholesky factor.
//! - [`tanh_sinh`] and [`quadrature_moment`] integrate analytic densities
//!   directly, with nodes that carry their distance to both endpoints so the
//!   arcsine singularity is evaluated without cancellation.
//! - [`symbolic_box_average`] computes box averages of monomials in exact
//!   rational arithmetic.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::measures::{Axis, MomentProvider};
use crate::regularized::BoxQuery;

/// `min pᵀ M p` subject to `cᵀ p = 1`.
#[derive(Debug, Clone)]
pub struct QpInstance {
    pub gram: DMatrix<f64>,
    pub constraint: DVector<f64>,
}

#[derive(Debug, Clone)]
pub struct QpSolution {
    pub coeffs: DVector<f64>,
    /// `1 / (cᵀ M⁻¹ c)`.
    pub value: f64,
}

/// Closed form `p* = M⁻¹c / (cᵀM⁻¹c)` with `M⁻¹` from the eigendecomposition.
pub fn solve_min_quadratic(qp: &QpInstance) -> Result<QpSolution> {
    let n = qp.gram.nrows();
    if qp.gram.ncols() != n || qp.constraint.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: qp.constraint.len(),
        });
    }
    if qp.constraint.iter().all(|&c| c == 0.0) {
        return Err(Error::SingularGram);
    }
    let eig = SymmetricEigen::new(qp.gram.clone());
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let floor = max * f64::EPSILON * n as f64;
    if eig.eigenvalues.iter().any(|&l| l <= floor) {
        return Err(Error::SingularGram);
    }
    let proj = eig.eigenvectors.transpose() * &qp.constraint;
    let scaled = DVector::from_iterator(n, proj.iter().zip(eig.eigenvalues.iter()).map(|(p, l)| p / l));
    let m_inv_c = &eig.eigenvectors * scaled;
    let s = qp.constraint.dot(&m_inv_c);
    if !(s > 0.0) {
        return Err(Error::SingularGram);
    }
    Ok(QpSolution {
        coeffs: m_inv_c / s,
        value: 1.0 / s,
    })
}

/// A quadrature node with its distances to the interval ends.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    pub from_lo: f64,
    pub from_hi: f64,
}

const MAX_LEVEL: u32 = 12;
const T_MAX: f64 = 4.0;

/// Tanh-sinh quadrature of `f` over `[lo, hi]`, refined until successive
/// levels agree to `tol` relative to `∫|f|`.
pub fn tanh_sinh<F: Fn(Node) -> f64>(lo: f64, hi: f64, tol: f64, f: F) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
    }
    let half = 0.5 * (hi - lo);
    // Returns (w·f, w·|f|) at parameter t.
    let term = |t: f64| -> (f64, f64) {
        let u = FRAC_PI_2 * t.sinh();
        let from_hi = 2.0 * half / ((2.0 * u).exp() + 1.0);
        let from_lo = 2.0 * half / ((-2.0 * u).exp() + 1.0);
        let cu = u.cosh();
        let w = half * FRAC_PI_2 * t.cosh() / (cu * cu);
        if !(from_lo > 0.0) || !(from_hi > 0.0) || !(w > 0.0) || !w.is_finite() {
            return (0.0, 0.0);
        }
        let x = if t < 0.0 { lo + from_lo } else { hi - from_hi };
        let v = w * f(Node { x: x.clamp(lo, hi), from_lo, from_hi });
        (v, v.abs())
    };

    let mut h = 1.0;
    let (mut sum, mut abs) = term(0.0);
    let mut j = 1;
    while j as f64 * h <= T_MAX {
        for t in [j as f64 * h, -(j as f64) * h] {
            let (v, a) = term(t);
            sum += v;
            abs += a;
        }
        j += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for _ in 0..MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            for t in [k as f64 * h, -(k as f64) * h] {
                let (v, a) = term(t);
                sum += v;
                abs += a;
            }
            k += 2;
        }
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if error <= tol * (abs * h).max(f64::MIN_POSITIVE) {
            return Ok(estimate);
        }
    }
    Err(Error::NoConvergence {
        estimate,
        error,
    })
}

fn axis_density(axis: &Axis, node: Node) -> f64 {
    match *axis {
        Axis::Uniform { lo, hi } => 1.0 / (hi - lo),
        Axis::Arcsine { .. } => 1.0 / (std::f64::consts::PI * (node.from_lo * node.from_hi).sqrt()),
    }
}

fn analytic_axes(provider: &MomentProvider) -> Result<&[Axis]> {
    provider
        .axes()
        .ok_or_else(|| Error::InvalidArgument("quadrature oracle needs an analytic measure".into()))
}

/// `∫ x^α dμ` by tanh-sinh quadrature, one axis at a time.
pub fn quadrature_moment(provider: &MomentProvider, alpha: &MultiIndex) -> Result<f64> {
    let axes = analytic_axes(provider)?;
    if alpha.dim() != axes.len() {
        return Err(Error::DimensionMismatch {
            expected: axes.len(),
            got: alpha.dim(),
        });
    }
    let mut value = provider.total_mass();
    for (&k, axis) in alpha.exponents().iter().zip(axes) {
        let (lo, hi) = axis.bounds();
        value *= tanh_sinh(lo, hi, 1e-14, |node| node.x.powi(k as i32) * axis_density(axis, node))?;
    }
    Ok(value)
}

/// `∫_B 1/(τ² f) dx` for a box inside the support of an analytic density `f`,
/// with `τ = εᵈ`. This is the squared norm of the functional `p ↦ ∫_B p/τ`
/// on `L²(μ)` and bounds `Λ̃ₙ(ξ, ε)⁻¹` for every `n`.
pub fn box_functional_norm_sq(provider: &MomentProvider, q: &BoxQuery) -> Result<f64> {
    let axes = analytic_axes(provider)?;
    if q.dim() != axes.len() {
        return Err(Error::DimensionMismatch {
            expected: axes.len(),
            got: q.dim(),
        });
    }
    if q.width() == 0.0 {
        return Err(Error::ZeroWidth);
    }
    let mut value = 1.0 / (provider.total_mass() * q.volume() * q.volume());
    for (&c, axis) in q.center().iter().zip(axes) {
        let (lo, hi) = axis.bounds();
        let (a, b) = (c - 0.5 * q.width(), c + 0.5 * q.width());
        if a < lo || b > hi {
            return Err(Error::InvalidArgument("box must lie inside the support".into()));
        }
        value *= match *axis {
            Axis::Uniform { lo, hi } => (hi - lo) * (b - a),
            Axis::Arcsine { lo, hi } => tanh_sinh(a, b, 1e-14, |node| {
                std::f64::consts::PI * ((node.x - lo) * (hi - node.x)).max(0.0).sqrt()
            })?,
        };
    }
    Ok(value)
}

/// Exact `∫_B y^β dy / εᵈ` with `B = B_∞(ξ, ε)`.
pub fn symbolic_box_average(beta: &MultiIndex, center: &[BigRational], width: &BigRational) -> Result<BigRational> {
    if beta.dim() != center.len() {
        return Err(Error::DimensionMismatch {
            expected: beta.dim(),
            got: center.len(),
        });
    }
    if width.is_zero() {
        return Err(Error::ZeroWidth);
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let half = width / &two;
    let mut out = BigRational::one();
    for (&k, xi) in beta.exponents().iter().zip(center) {
        let a = xi + &half;
        let b = xi - &half;
        let k1 = k as i32 + 1;
        let diff = num_traits::pow::pow(a, k1 as usize) - num_traits::pow::pow(b, k1 as usize);
        out *= diff / (width * BigRational::from_integer(BigInt::from(k1)));
    }
    Ok(out)
}

/// The exact value of a finite `f64`.
pub fn to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}
