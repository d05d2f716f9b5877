/// Averages of `y^k` over `[lo, hi]` for `k = 0..=degree`.
///
/// Uses `(hi^{k+1} − lo^{k+1}) / ((k+1)(hi − lo)) = Σⱼ hi^{k−j} lo^j / (k+1)`,
/// which stays well defined as `hi − lo → 0`. The partial sums obey
/// `S_k = hi·S_{k−1} + lo^k`.
pub(crate) fn interval_power_averages(lo: f64, hi: f64, degree: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(degree + 1);
    let mut sum = 1.0;
    let mut lo_pow = 1.0;
    out.push(1.0);
    for k in 1..=degree {
        lo_pow *= lo;
        sum = hi * sum + lo_pow;
        out.push(sum / (k as f64 + 1.0));
    }
    if degree >= 1 {
        out[1] = 0.5 * (lo + hi);
    }
    out
}

/// `x^k` for `k = 0..=degree`.
pub(crate) fn powers(x: f64, degree: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(degree + 1);
    let mut p = 1.0;
    out.push(p);
    for _ in 0..degree {
        p *= x;
        out.push(p);
    }
    out
}
