//! Factorized moment matrices and the standard Christoffel function.
//!
//! `Mₙ(μ)` is never inverted. Every quadratic form `uᵀ Mₙ⁻¹ w` is computed as
//! `⟨L⁻¹u, L⁻¹w⟩` from the Cholesky factor `Mₙ = L Lᵀ`.
//!
//! Monomial moment matrices become ill-conditioned quickly. A model can carry
//! an [`AffineFrame`]: the measure is pushed forward into a chart where its
//! support sits in `[−1, 1]ᵈ`, and queries are mapped into that chart before
//! evaluation. Christoffel functions are invariant under this transport, so
//! the frame changes accuracy but not the values being computed.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::measures::{AffineFrame, MomentMatrix, MomentProvider};

/// What to do when the plain Cholesky factorization fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JitterPolicy {
    /// Fail with [`Error::NotPositiveDefinite`].
    None,
    /// Add `λ_rel · trace(M)/s(n) · I` once and retry.
    Relative(f64),
}

impl JitterPolicy {
    /// `Relative(1e-12)` for sample clouds, `None` for analytic measures.
    pub fn default_for(provider: &MomentProvider) -> Self {
        if provider.is_empirical() {
            JitterPolicy::Relative(1e-12)
        } else {
            JitterPolicy::None
        }
    }
}

/// An immutable evaluation engine for `Λₙ` and `Λ̃ₙ`.
#[derive(Debug, Clone)]
pub struct ChristoffelModel {
    matrix: MomentMatrix,
    factor: DMatrix<f64>,
    jitter_applied: f64,
    condition_estimate: f64,
    frame: AffineFrame,
}

impl ChristoffelModel {
    /// Factorizes `matrix` (identity frame).
    pub fn build(matrix: MomentMatrix, policy: JitterPolicy) -> Result<Self> {
        let frame = AffineFrame::identity(matrix.index_set().dim());
        Self::build_in_frame(matrix, policy, frame)
    }

    fn build_in_frame(matrix: MomentMatrix, policy: JitterPolicy, frame: AffineFrame) -> Result<Self> {
        let (factor, jitter_applied) = match cholesky(matrix.values(), 0.0) {
            Ok(l) => (l, 0.0),
            Err(err) => match policy {
                JitterPolicy::None => return Err(err),
                JitterPolicy::Relative(rel) => {
                    let s = matrix.size() as f64;
                    let jitter = rel * matrix.values().trace() / s;
                    (cholesky(matrix.values(), jitter)?, jitter)
                }
            },
        };
        let diag = factor.diagonal();
        let condition_estimate = (diag.max() / diag.min()).powi(2);
        Ok(ChristoffelModel {
            matrix,
            factor,
            jitter_applied,
            condition_estimate,
            frame,
        })
    }

    /// Assembles and factorizes `Mₙ(μ)` in the coordinates of `provider`.
    pub fn from_provider(provider: &MomentProvider, degree: usize, policy: JitterPolicy) -> Result<Self> {
        let set = IndexSet::enumerate(provider.dim(), degree);
        Self::build(MomentMatrix::assemble(provider, &set)?, policy)
    }

    /// Builds from `T#μ` for the chart `frame`; queries are given in the
    /// original coordinates.
    pub fn from_provider_in_frame(
        provider: &MomentProvider,
        degree: usize,
        policy: JitterPolicy,
        frame: AffineFrame,
    ) -> Result<Self> {
        if frame.dim() != provider.dim() {
            return Err(Error::DimensionMismatch {
                expected: provider.dim(),
                got: frame.dim(),
            });
        }
        let local = provider.pushforward(&frame.center, frame.scale)?;
        let set = IndexSet::enumerate(provider.dim(), degree);
        Self::build_in_frame(MomentMatrix::assemble(&local, &set)?, policy, frame)
    }

    /// The recommended constructor: fitted frame and default jitter policy.
    pub fn fitted(provider: &MomentProvider, degree: usize) -> Result<Self> {
        Self::from_provider_in_frame(
            provider,
            degree,
            JitterPolicy::default_for(provider),
            AffineFrame::fit(provider),
        )
    }

    pub fn index_set(&self) -> &IndexSet {
        self.matrix.index_set()
    }

    pub fn matrix(&self) -> &MomentMatrix {
        &self.matrix
    }

    /// Lower-triangular `L` with `L Lᵀ = M + jitter · I`.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn jitter_applied(&self) -> f64 {
        self.jitter_applied
    }

    /// `(max Lᵢᵢ / min Lᵢᵢ)²`, a cheap proxy for `cond(M)`.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn frame(&self) -> &AffineFrame {
        &self.frame
    }

    pub fn degree(&self) -> usize {
        self.index_set().degree()
    }

    pub fn dim(&self) -> usize {
        self.index_set().dim()
    }

    pub(crate) fn to_local(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.index_set().check_dim(x.len())?;
        Ok(self.frame.apply(x))
    }

    /// `L⁻¹ v` by forward substitution.
    pub fn whiten(&self, v: &[f64]) -> Vec<f64> {
        forward_substitute(&self.factor, v)
    }

    /// `M⁻¹ v` by a forward and a backward substitution.
    pub fn solve(&self, v: &[f64]) -> Vec<f64> {
        let y = self.whiten(v);
        backward_substitute_transposed(&self.factor, &y)
    }

    /// `Λₙ(x)⁻¹ = vₙ(x)ᵀ Mₙ⁻¹ vₙ(x)`.
    pub fn lambda_inv(&self, x: &[f64]) -> Result<f64> {
        let local = self.to_local(x)?;
        let v = self.index_set().monomial_vector(&local)?;
        Ok(norm_sq(&self.whiten(&v)))
    }

    /// `Λₙ(x)`.
    pub fn lambda(&self, x: &[f64]) -> Result<f64> {
        Ok(1.0 / self.lambda_inv(x)?)
    }

    /// `Kₙ(x, y) = vₙ(x)ᵀ Mₙ⁻¹ vₙ(y)`.
    pub fn cd_kernel(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let set = self.index_set();
        let u = self.whiten(&set.monomial_vector(&self.to_local(x)?)?);
        let w = self.whiten(&set.monomial_vector(&self.to_local(y)?)?);
        Ok(dot(&u, &w))
    }

    /// Orthonormal polynomials `P = D vₙ` with `D = L⁻¹`.
    pub fn orthonormal_basis(&self) -> OrthonormalBasis {
        let s = self.factor.nrows();
        let mut coeffs = DMatrix::zeros(s, s);
        for j in 0..s {
            let mut e = vec![0.0; s];
            e[j] = 1.0;
            let col = self.whiten(&e);
            for i in 0..s {
                coeffs[(i, j)] = col[i];
            }
        }
        OrthonormalBasis {
            index_set: self.index_set().clone(),
            coeffs,
            frame: self.frame.clone(),
        }
    }
}

/// Row `α` of `coeffs` holds `P_α` in the monomial basis of the model's chart.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    index_set: IndexSet,
    coeffs: DMatrix<f64>,
    frame: AffineFrame,
}

impl OrthonormalBasis {
    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index_set
    }

    /// `(P_α(x))_α` at a point given in original coordinates.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.index_set.check_dim(x.len())?;
        let v = self.index_set.monomial_vector(&self.frame.apply(x))?;
        Ok((&self.coeffs * nalgebra::DVector::from_vec(v)).iter().copied().collect())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

fn cholesky(m: &DMatrix<f64>, jitter: f64) -> Result<DMatrix<f64>> {
    let s = m.nrows();
    let max_diag = (0..s).map(|i| m[(i, i)]).fold(0.0f64, f64::max) + jitter;
    let floor = s as f64 * f64::EPSILON * max_diag;
    let mut l = DMatrix::zeros(s, s);
    for j in 0..s {
        let mut pivot = m[(j, j)] + jitter;
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if !(pivot > floor) {
            return Err(Error::NotPositiveDefinite { index: j, pivot, jitter });
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..s {
            let mut acc = m[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = acc / d;
        }
    }
    Ok(l)
}

fn forward_substitute(l: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    let s = l.nrows();
    let mut y = vec![0.0; s];
    for i in 0..s {
        let mut acc = b[i];
        for k in 0..i {
            acc -= l[(i, k)] * y[k];
        }
        y[i] = acc / l[(i, i)];
    }
    y
}

fn backward_substitute_transposed(l: &DMatrix<f64>, y: &[f64]) -> Vec<f64> {
    let s = l.nrows();
    let mut x = vec![0.0; s];
    for i in (0..s).rev() {
        let mut acc = y[i];
        for k in (i + 1)..s {
            acc -= l[(k, i)] * x[k];
        }
        x[i] = acc / l[(i, i)];
    }
    x
}
