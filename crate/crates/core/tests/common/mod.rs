#![allow(dead_code)]

use cdkernel::MomentProvider;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_axis(rng: &mut ChaCha8Rng) -> MomentProvider {
    let lo = rng.gen_range(-1.5..0.0);
    let hi = lo + rng.gen_range(0.5..2.0);
    if rng.gen_bool(0.5) {
        MomentProvider::lebesgue_box(&[lo], &[hi]).unwrap()
    } else {
        MomentProvider::chebyshev_on(lo, hi).unwrap()
    }
}

/// An analytic product measure in dimension `1..=max_dim` with random mass.
pub fn random_measure(rng: &mut ChaCha8Rng, max_dim: usize) -> MomentProvider {
    let d = rng.gen_range(1..=max_dim);
    let factors: Vec<MomentProvider> = (0..d).map(|_| random_axis(rng)).collect();
    let mass = rng.gen_range(0.5..3.0);
    MomentProvider::product(&factors).unwrap().with_mass(mass).unwrap()
}

/// A point drawn from the support box of `mu`.
pub fn random_point(rng: &mut ChaCha8Rng, mu: &MomentProvider) -> Vec<f64> {
    let (lo, hi) = mu.support_box();
    lo.iter().zip(&hi).map(|(a, b)| rng.gen_range(*a..*b)).collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `Σₖ (2k+1)/2 · Pₖ(x)²`, the inverse Christoffel function of `dx` on `[−1, 1]`.
pub fn legendre_lambda_inv(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    let mut acc = 0.5;
    if n >= 1 {
        acc += 1.5 * x * x;
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        acc += (2.0 * kf + 3.0) / 2.0 * p2 * p2;
        p0 = p1;
        p1 = p2;
    }
    acc
}

/// `(2/π)(1/2 + ξ² + (2ξ² − 1 + ε²/6)²)`, the Chebyshev `Λ̃₂⁻¹` computed from
/// the orthonormal family `T₀/√π, √(2/π)T₁, √(2/π)T₂` and the box averages
/// of `x` and `x²`.
pub fn chebyshev_lambda_tilde2_inv_derived(xi: f64, eps: f64) -> f64 {
    let t2 = 2.0 * xi * xi - 1.0 + eps * eps / 6.0;
    2.0 / std::f64::consts::PI * (0.5 + xi * xi + t2 * t2)
}
