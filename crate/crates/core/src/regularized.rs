//! The box-regularized Christoffel function.
//!
//! For a cube `B = B_∞(ξ, ε) = {x : ‖x − ξ‖_∞ ≤ ε/2}` the regularized
//! function replaces the point constraint `p(ξ) = 1` of the standard
//! Christoffel function by the average constraint `∫_B p dx / εᵈ = 1`:
//!
//! ```text
//! Λ̃ₙ(ξ, ε) = min { ∫ p² dμ : deg p ≤ n, ∫_B p dx/εᵈ = 1 }
//! Λ̃ₙ(ξ, ε)⁻¹ = ṽₙ(ξ, ε)ᵀ Mₙ(μ)⁻¹ ṽₙ(ξ, ε),   ṽₙ(ξ, ε) = ∫_B vₙ(y) dy / εᵈ
//! ```
//!
//! Each entry of `ṽₙ` factors over the axes and is a polynomial in
//! `(ξ, ε)`: with `a = ξᵢ + ε/2`, `b = ξᵢ − ε/2`,
//! `∫ yᵏ dy / ε = Σⱼ a^{k−j} bʲ / (k + 1)` on each axis.
//!
//! At `ε = 0` the constraint is point evaluation and `Λ̃ₙ(ξ, 0) = Λₙ(ξ)`
//! exactly. For fixed `ε > 0` and a box inside the support of a density `f`,
//! `ε⁻ᵈ Λ̃ₙ(ξ, ε)` converges as `n → ∞` to `f(ζ)` for some `ζ ∈ B`, which is
//! what [`density_estimate`] reports. Outside the support `Λ̃ₙ⁻¹` grows at
//! least exponentially in `n`, which [`classify_support`] detects.

use rayon::prelude::*;

use crate::christoffel::{dot, norm_sq, ChristoffelModel};
use crate::error::{Error, Result};
use crate::index::{IndexSet, MultiIndex};
use crate::measures::MomentProvider;
use crate::telescope::interval_power_averages;

/// The cube `B_∞(center, width)`; `width = 0` means point evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxQuery {
    center: Vec<f64>,
    width: f64,
}

impl BoxQuery {
    pub fn new(center: Vec<f64>, width: f64) -> Result<Self> {
        if !(width >= 0.0) || !width.is_finite() {
            return Err(Error::InvalidArgument(format!("box width must be finite and ≥ 0, got {width}")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("box center must be finite".into()));
        }
        Ok(BoxQuery { center, width })
    }

    pub fn point(center: Vec<f64>) -> Result<Self> {
        Self::new(center, 0.0)
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// `τ_ε = εᵈ`.
    pub fn volume(&self) -> f64 {
        self.width.powi(self.dim() as i32)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.center)
            .all(|(xi, ci)| (xi - ci).abs() <= 0.5 * self.width)
    }
}

/// `∫_B y^β dy / εᵈ`; `ξ^β` when `ε = 0`.
pub fn box_avg_monomial(beta: &MultiIndex, q: &BoxQuery) -> Result<f64> {
    if beta.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: beta.dim(),
            got: q.dim(),
        });
    }
    Ok(beta
        .exponents()
        .iter()
        .zip(&q.center)
        .map(|(&k, &xi)| axis_table(xi, q.width, k as usize)[k as usize])
        .product())
}

/// `ṽₙ(ξ, ε)` over `set`. Equals `vₙ(ξ)` at `ε = 0` and for `n ≤ 1`.
pub fn box_avg_vector(set: &IndexSet, q: &BoxQuery) -> Result<Vec<f64>> {
    set.check_dim(q.dim())?;
    if q.width == 0.0 {
        return set.monomial_vector(&q.center);
    }
    let tables: Vec<Vec<f64>> = q
        .center
        .iter()
        .map(|&xi| axis_table(xi, q.width, set.degree()))
        .collect();
    Ok(set.product_vector(&tables))
}

fn axis_table(center: f64, width: f64, degree: usize) -> Vec<f64> {
    let mut table = if width == 0.0 {
        crate::telescope::powers(center, degree)
    } else {
        interval_power_averages(center - 0.5 * width, center + 0.5 * width, degree)
    };
    if degree >= 1 {
        table[1] = center;
    }
    table
}

/// `ṽₙ` in the chart of `model`.
fn local_box_vector(model: &ChristoffelModel, q: &BoxQuery) -> Result<Vec<f64>> {
    let center = model.to_local(&q.center)?;
    let local = BoxQuery {
        center,
        width: model.frame().apply_width(q.width),
    };
    box_avg_vector(model.index_set(), &local)
}

/// `Λ̃ₙ(ξ, ε)⁻¹ = ‖L⁻¹ ṽₙ(ξ, ε)‖²`.
pub fn lambda_tilde_inv(model: &ChristoffelModel, q: &BoxQuery) -> Result<f64> {
    let v = local_box_vector(model, q)?;
    Ok(norm_sq(&model.whiten(&v)))
}

/// `Λ̃ₙ(ξ, ε)`.
pub fn lambda_tilde(model: &ChristoffelModel, q: &BoxQuery) -> Result<f64> {
    Ok(1.0 / lambda_tilde_inv(model, q)?)
}

/// One evaluation of the regularized function and its density reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedEvaluation {
    pub lambda_tilde: f64,
    pub lambda_tilde_inv: f64,
    /// `ε⁻ᵈ Λ̃ₙ(ξ, ε)`; `None` at `ε = 0`.
    pub density_estimate: Option<f64>,
    pub degree: usize,
}

pub fn evaluate(model: &ChristoffelModel, q: &BoxQuery) -> Result<RegularizedEvaluation> {
    let inv = lambda_tilde_inv(model, q)?;
    let lambda_tilde = 1.0 / inv;
    Ok(RegularizedEvaluation {
        lambda_tilde,
        lambda_tilde_inv: inv,
        density_estimate: (q.width > 0.0).then(|| lambda_tilde / q.volume()),
        degree: model.degree(),
    })
}

/// The minimizer `p* = Λ̃ₙ · Mₙ⁻¹ ṽₙ` with its optimality residuals.
#[derive(Debug, Clone)]
pub struct OptimalPolynomial {
    /// Coefficients in the monomial basis of the model's chart.
    pub coeffs: Vec<f64>,
    pub lambda_tilde: f64,
    /// `⟨p*, ṽₙ⟩ − 1`.
    pub constraint_residual: f64,
    /// `p*ᵀ M p* − Λ̃ₙ`.
    pub objective_residual: f64,
}

impl OptimalPolynomial {
    /// `p*(x)` at a point in the model's chart coordinates.
    pub fn eval_local(&self, set: &IndexSet, x: &[f64]) -> Result<f64> {
        Ok(dot(&self.coeffs, &set.monomial_vector(x)?))
    }
}

pub fn optimal_polynomial(model: &ChristoffelModel, q: &BoxQuery) -> Result<OptimalPolynomial> {
    let v = local_box_vector(model, q)?;
    let lambda_tilde = 1.0 / norm_sq(&model.whiten(&v));
    let coeffs: Vec<f64> = model.solve(&v).into_iter().map(|c| c * lambda_tilde).collect();
    let m = model.matrix().values();
    let mp = m * nalgebra::DVector::from_column_slice(&coeffs);
    let objective = dot(&coeffs, mp.as_slice());
    Ok(OptimalPolynomial {
        constraint_residual: dot(&coeffs, &v) - 1.0,
        objective_residual: objective - lambda_tilde,
        coeffs,
        lambda_tilde,
    })
}

/// `ε⁻ᵈ Λ̃ₙ(ξ, ε)`, an estimate of the density near `ξ`.
pub fn density_estimate(model: &ChristoffelModel, q: &BoxQuery) -> Result<f64> {
    if q.width == 0.0 {
        return Err(Error::ZeroWidth);
    }
    Ok(lambda_tilde(model, q)? / q.volume())
}

/// An axis-aligned box `∏[loᵢ, hiᵢ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidArgument("domain bounds must be nonempty and of equal length".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidArgument("domain needs lo < hi on every axis".into()));
        }
        Ok(DomainBox { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// `B ∩ Ω` as per-axis bounds, or `None` if its volume is zero.
    pub fn clip(&self, q: &BoxQuery) -> Option<DomainBox> {
        let mut lo = Vec::with_capacity(self.dim());
        let mut hi = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let a = self.lo[i].max(q.center[i] - 0.5 * q.width);
            let b = self.hi[i].min(q.center[i] + 0.5 * q.width);
            if !(b > a) {
                return None;
            }
            lo.push(a);
            hi.push(b);
        }
        Some(DomainBox { lo, hi })
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn contains_box(&self, q: &BoxQuery) -> bool {
        (0..self.dim()).all(|i| {
            self.lo[i] <= q.center[i] - 0.5 * q.width && q.center[i] + 0.5 * q.width <= self.hi[i]
        })
    }
}

/// Density readings for a box that may stick out of a known box domain `Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEstimate {
    /// `ε⁻ᵈ Λ̃ₙ` for the average constraint restricted to `B ∩ Ω`; tends to
    /// `f(ζ) εᵈ / vol(B ∩ Ω)`.
    pub uncorrected: f64,
    /// `uncorrected · vol(B ∩ Ω) / εᵈ`; tends to `f(ζ)`.
    pub corrected: f64,
    pub overlap_volume: f64,
}

/// Estimates the density at `ξ` when part of `B_∞(ξ, ε)` may lie outside `Ω`.
///
/// Only `B ∩ Ω` is seen by the measure, so the average constraint is taken
/// over `B ∩ Ω` (still normalized by `εᵈ`). The resulting functional is
/// represented by `1_{B∩Ω}/(εᵈ f)` and its limit picks up the factor
/// `εᵈ / vol(B ∩ Ω)`, which the corrected value divides out.
pub fn boundary_estimates(model: &ChristoffelModel, q: &BoxQuery, domain: &DomainBox) -> Result<BoundaryEstimate> {
    if q.width == 0.0 {
        return Err(Error::ZeroWidth);
    }
    if domain.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            got: domain.dim(),
        });
    }
    let tau = q.volume();
    if domain.contains_box(q) {
        let f = density_estimate(model, q)?;
        return Ok(BoundaryEstimate {
            uncorrected: f,
            corrected: f,
            overlap_volume: tau,
        });
    }
    let cell = domain.clip(q).ok_or(Error::EmptyIntersection)?;
    let overlap = cell.volume();

    let frame = model.frame();
    let lo = frame.apply(&cell.lo);
    let hi = frame.apply(&cell.hi);
    let set = model.index_set();
    let tables: Vec<Vec<f64>> = lo
        .iter()
        .zip(&hi)
        .map(|(&a, &b)| interval_power_averages(a, b, set.degree()))
        .collect();
    let ratio = overlap / tau;
    let v: Vec<f64> = set.product_vector(&tables).into_iter().map(|x| x * ratio).collect();
    let uncorrected = 1.0 / (norm_sq(&model.whiten(&v)) * tau);
    Ok(BoundaryEstimate {
        uncorrected,
        corrected: uncorrected * ratio,
        overlap_volume: overlap,
    })
}

/// [`BoundaryEstimate::corrected`].
pub fn density_estimate_boundary_corrected(model: &ChristoffelModel, q: &BoxQuery, domain: &DomainBox) -> Result<f64> {
    Ok(boundary_estimates(model, q, domain)?.corrected)
}

/// How the box width depends on the degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonRule {
    Fixed(f64),
    /// `ε(n) = n^{−r}`.
    PowerLaw { r: f64 },
}

impl EpsilonRule {
    pub fn one_over_n() -> Self {
        EpsilonRule::PowerLaw { r: 1.0 }
    }

    pub fn width(&self, degree: usize) -> Result<f64> {
        match *self {
            EpsilonRule::Fixed(e) => {
                if e >= 0.0 && e.is_finite() {
                    Ok(e)
                } else {
                    Err(Error::InvalidArgument(format!("epsilon must be ≥ 0, got {e}")))
                }
            }
            EpsilonRule::PowerLaw { r } => {
                if degree == 0 {
                    return Err(Error::InvalidArgument("ε = n^-r needs n ≥ 1".into()));
                }
                if !(r > 0.0) {
                    return Err(Error::InvalidArgument(format!("exponent r must be positive, got {r}")));
                }
                Ok((degree as f64).powf(-r))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Inside,
    Outside,
    Uncertain,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Inside => "inside",
            Verdict::Outside => "outside",
            Verdict::Uncertain => "uncertain",
        })
    }
}

/// Slope thresholds on `log Λ̃ₙ⁻¹` per unit degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportThresholds {
    pub slope_hi: f64,
    pub slope_lo: f64,
}

impl Default for SupportThresholds {
    fn default() -> Self {
        SupportThresholds {
            slope_hi: 0.25,
            slope_lo: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportVerdict {
    pub verdict: Verdict,
    /// Least-squares slope of `log Λ̃ₙ⁻¹` (minus `r·d·log n` for power-law widths) against `n`.
    pub decay_slope: f64,
    pub degrees_used: Vec<usize>,
    /// `log Λ̃ₙ⁻¹(ξ, ε(n))` for each degree, before detrending.
    pub log_inv: Vec<f64>,
}

impl SupportThresholds {
    pub fn decide(&self, slope: f64) -> Verdict {
        if slope > self.slope_hi {
            Verdict::Outside
        } else if slope < self.slope_lo {
            Verdict::Inside
        } else {
            Verdict::Uncertain
        }
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Decides whether `ξ` lies in the support from the growth of `Λ̃ₙ⁻¹` in `n`.
///
/// Inside, `Λ̃ₙ⁻¹(ξ, ε)` stays bounded for fixed `ε` and grows at most like
/// `n^{rd}` for `ε = n^{−r}`; outside it grows exponentially. Models are
/// built with [`ChristoffelModel::fitted`].
pub fn classify_support(
    provider: &MomentProvider,
    xi: &[f64],
    rule: EpsilonRule,
    degrees: &[usize],
    thresholds: SupportThresholds,
) -> Result<SupportVerdict> {
    if degrees.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "support classification needs at least 4 degrees, got {}",
            degrees.len()
        )));
    }
    if degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("degrees must be strictly increasing".into()));
    }
    if xi.len() != provider.dim() {
        return Err(Error::DimensionMismatch {
            expected: provider.dim(),
            got: xi.len(),
        });
    }
    let log_inv = degrees
        .par_iter()
        .map(|&n| {
            let model = ChristoffelModel::fitted(provider, n)?;
            let q = BoxQuery::new(xi.to_vec(), rule.width(n)?)?;
            Ok(lambda_tilde_inv(&model, &q)?.ln())
        })
        .collect::<Result<Vec<f64>>>()?;

    let xs: Vec<f64> = degrees.iter().map(|&n| n as f64).collect();
    let trend = match rule {
        EpsilonRule::Fixed(_) => 0.0,
        EpsilonRule::PowerLaw { r } => r * xi.len() as f64,
    };
    let detrended: Vec<f64> = log_inv
        .iter()
        .zip(&xs)
        .map(|(y, n)| y - trend * n.ln())
        .collect();
    let decay_slope = fitted_slope(&xs, &detrended);
    Ok(SupportVerdict {
        verdict: thresholds.decide(decay_slope),
        decay_slope,
        degrees_used: degrees.to_vec(),
        log_inv,
    })
}

/// One row of a convergence sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub degree: usize,
    pub epsilon: f64,
    /// `εᵈ Λ̃ₙ⁻¹`.
    pub scaled_inverse: f64,
    /// `ε⁻ᵈ Λ̃ₙ`.
    pub density_estimate: f64,
    /// `nᵈ Λ̃ₙ`.
    pub degree_scaled: f64,
}

/// Evaluates `Λ̃ₙ(ξ, ε(n))` along `degrees`.
pub fn sweep(provider: &MomentProvider, xi: &[f64], rule: EpsilonRule, degrees: &[usize]) -> Result<Vec<SweepRow>> {
    let d = xi.len() as i32;
    degrees
        .par_iter()
        .map(|&n| {
            let model = ChristoffelModel::fitted(provider, n)?;
            let epsilon = rule.width(n)?;
            let q = BoxQuery::new(xi.to_vec(), epsilon)?;
            let inv = lambda_tilde_inv(&model, &q)?;
            let ed = epsilon.powi(d);
            Ok(SweepRow {
                degree: n,
                epsilon,
                scaled_inverse: ed * inv,
                density_estimate: 1.0 / (inv * ed),
                degree_scaled: (n as f64).powi(d) / inv,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::christoffel::JitterPolicy;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn q1(xi: f64, eps: f64) -> BoxQuery {
        BoxQuery::new(vec![xi], eps).unwrap()
    }

    #[test]
    fn box_average_examples() {
        let zero = MultiIndex::new(vec![0, 0]);
        assert_eq!(box_avg_monomial(&zero, &BoxQuery::new(vec![0.3, -2.0], 0.7).unwrap()).unwrap(), 1.0);
        assert_relative_eq!(
            box_avg_monomial(&MultiIndex::new(vec![2]), &q1(0.0, 1.0)).unwrap(),
            1.0 / 12.0,
            max_relative = 1e-15
        );
        for &(xi, eps) in &[(0.3, 0.1), (-4.0, 2.5), (1.0, 0.0)] {
            assert_eq!(box_avg_monomial(&MultiIndex::new(vec![1]), &q1(xi, eps)).unwrap(), xi);
        }
        assert_relative_eq!(
            box_avg_monomial(&MultiIndex::new(vec![5]), &q1(1.3, 0.0)).unwrap(),
            1.3f64.powi(5),
            max_relative = 1e-15
        );
    }

    #[test]
    fn box_vector_examples() {
        let set = IndexSet::enumerate(2, 1);
        let v = box_avg_vector(&set, &BoxQuery::new(vec![0.25, -0.5], 0.9).unwrap()).unwrap();
        assert_eq!(v, vec![1.0, 0.25, -0.5]);

        let set = IndexSet::enumerate(3, 4);
        let xi = vec![0.2, -0.7, 1.1];
        assert_eq!(
            box_avg_vector(&set, &BoxQuery::point(xi.clone()).unwrap()).unwrap(),
            set.monomial_vector(&xi).unwrap()
        );

        let set = IndexSet::enumerate(1, 2);
        let v = box_avg_vector(&set, &q1(0.0, 1.0)).unwrap();
        assert_eq!(v[0], 1.0);
        assert_eq!(v[1], 0.0);
        assert_relative_eq!(v[2], 1.0 / 12.0, max_relative = 1e-15);
    }

    #[test]
    fn negative_width_rejected() {
        assert!(BoxQuery::new(vec![0.0], -0.1).is_err());
        assert!(BoxQuery::new(vec![0.0], f64::NAN).is_err());
    }

    #[test]
    fn chebyshev_degree_one_ignores_width() {
        let model = ChristoffelModel::from_provider(&MomentProvider::chebyshev(), 1, JitterPolicy::None).unwrap();
        for &xi in &[-0.9, 0.1, 0.6] {
            let expected = 2.0 / PI * (0.5 + xi * xi);
            for &eps in &[0.0, 0.1, 0.5] {
                assert_relative_eq!(lambda_tilde_inv(&model, &q1(xi, eps)).unwrap(), expected, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn zero_width_is_point_evaluation() {
        let p = MomentProvider::lebesgue_box(&[-1.0, 0.0], &[1.0, 2.0]).unwrap();
        let model = ChristoffelModel::from_provider(&p, 4, JitterPolicy::None).unwrap();
        let x = [0.3, 1.7];
        let q = BoxQuery::point(x.to_vec()).unwrap();
        assert_eq!(lambda_tilde_inv(&model, &q).unwrap(), model.lambda_inv(&x).unwrap());
        let e = evaluate(&model, &q).unwrap();
        assert_eq!(e.density_estimate, None);
        assert_eq!(density_estimate(&model, &q), Err(Error::ZeroWidth));
    }

    #[test]
    fn evaluation_fields_consistent() {
        let model = ChristoffelModel::from_provider(&MomentProvider::chebyshev(), 6, JitterPolicy::None).unwrap();
        let e = evaluate(&model, &q1(0.2, 0.3)).unwrap();
        assert!((e.lambda_tilde * e.lambda_tilde_inv - 1.0).abs() < 1e-12);
        assert_relative_eq!(e.density_estimate.unwrap(), e.lambda_tilde / 0.3);
        assert_eq!(e.degree, 6);
    }

    #[test]
    fn optimal_polynomial_checks() {
        let model = ChristoffelModel::from_provider(&MomentProvider::chebyshev(), 1, JitterPolicy::None).unwrap();
        let p = optimal_polynomial(&model, &q1(0.0, 0.0)).unwrap();
        assert_relative_eq!(p.coeffs[0], 1.0, max_relative = 1e-14);
        assert!(p.coeffs[1].abs() < 1e-14);

        let p = MomentProvider::lebesgue_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let model = ChristoffelModel::from_provider(&p, 5, JitterPolicy::None).unwrap();
        let opt = optimal_polynomial(&model, &BoxQuery::new(vec![0.2, -0.4], 0.3).unwrap()).unwrap();
        assert!(opt.constraint_residual.abs() < 1e-10);
        assert!(opt.objective_residual.abs() < 1e-10 * opt.lambda_tilde);
    }

    #[test]
    fn boundary_inside_matches_plain_estimate() {
        let p = MomentProvider::uniform_box(&[0.0], &[1.0], 1.0).unwrap();
        let model = ChristoffelModel::fitted(&p, 10).unwrap();
        let domain = DomainBox::new(vec![0.0], vec![1.0]).unwrap();
        let q = q1(0.5, 0.2);
        assert_eq!(
            density_estimate_boundary_corrected(&model, &q, &domain).unwrap(),
            density_estimate(&model, &q).unwrap()
        );
    }

    #[test]
    fn boundary_empty_intersection() {
        let p = MomentProvider::uniform_box(&[0.0], &[1.0], 1.0).unwrap();
        let model = ChristoffelModel::fitted(&p, 4).unwrap();
        let domain = DomainBox::new(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(
            boundary_estimates(&model, &q1(-0.2, 0.2), &domain),
            Err(Error::EmptyIntersection)
        );
        assert_eq!(boundary_estimates(&model, &q1(0.5, 0.0), &domain), Err(Error::ZeroWidth));
    }

    #[test]
    fn epsilon_rules() {
        assert_eq!(EpsilonRule::Fixed(0.2).width(7).unwrap(), 0.2);
        assert_eq!(EpsilonRule::one_over_n().width(4).unwrap(), 0.25);
        assert_eq!(EpsilonRule::PowerLaw { r: 0.5 }.width(16).unwrap(), 0.25);
        assert!(EpsilonRule::one_over_n().width(0).is_err());
        assert!(EpsilonRule::Fixed(-1.0).width(3).is_err());
    }

    #[test]
    fn classify_rejects_short_degree_lists() {
        let p = MomentProvider::chebyshev();
        let err = classify_support(&p, &[0.0], EpsilonRule::Fixed(0.1), &[4, 6, 8], SupportThresholds::default());
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
        let err = classify_support(&p, &[0.0], EpsilonRule::Fixed(0.1), &[4, 6, 6, 8], SupportThresholds::default());
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn slope_fit() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        assert_relative_eq!(fitted_slope(&xs, &ys), 2.0);
    }

    #[test]
    fn thresholds_decide() {
        let t = SupportThresholds::default();
        assert_eq!(t.decide(1.0), Verdict::Outside);
        assert_eq!(t.decide(0.2), Verdict::Uncertain);
        assert_eq!(t.decide(0.01), Verdict::Inside);
    }
}
