//! Moment providers for analytic and empirical measures.
//!
//! Analytic measures are products of one-dimensional factors (uniform on an
//! interval, or the arcsine/Chebyshev weight `1/√((x−a)(b−x))`), scaled to a
//! declared total mass. Empirical measures are weighted point clouds. Neither
//! kind is ever renormalized: `moment(0)` is the declared mass.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::Read;
use std::sync::RwLock;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::index::{IndexSet, MultiIndex};
use crate::telescope::{interval_power_averages, powers};

/// One coordinate of a product measure, as a probability measure.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    /// Uniform on `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// Arcsine law on `[lo, hi]`, the normalized Chebyshev weight.
    Arcsine { lo: f64, hi: f64 },
}

impl Axis {
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Axis::Uniform { lo, hi } | Axis::Arcsine { lo, hi } => (lo, hi),
        }
    }

    /// Normalized moments `∫ x^k`, `k = 0..=degree`.
    fn moments(&self, degree: usize) -> Vec<f64> {
        match *self {
            Axis::Uniform { lo, hi } => interval_power_averages(lo, hi, degree),
            Axis::Arcsine { lo, hi } => {
                let center = 0.5 * (lo + hi);
                let half = 0.5 * (hi - lo);
                let std = standard_arcsine_moments(degree);
                if center == 0.0 {
                    // h^k C(k, k/2) / 2^k, exact when h = 1
                    let hp = powers(half, degree);
                    return std.iter().zip(hp).map(|(m, h)| m * h).collect();
                }
                let cp = powers(center, degree);
                let hp = powers(half, degree);
                let mut out = Vec::with_capacity(degree + 1);
                for k in 0..=degree {
                    let mut binom = 1.0;
                    let mut acc = 0.0;
                    for j in 0..=k {
                        if j > 0 {
                            binom = binom * (k - j + 1) as f64 / j as f64;
                        }
                        if j % 2 == 0 {
                            acc += binom * cp[k - j] * hp[j] * std[j];
                        }
                    }
                    out.push(acc);
                }
                out
            }
        }
    }

    /// Probability density at `x`.
    pub fn density(&self, x: f64) -> f64 {
        match *self {
            Axis::Uniform { lo, hi } => {
                if x >= lo && x <= hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Axis::Arcsine { lo, hi } => {
                if x > lo && x < hi {
                    1.0 / (PI * ((x - lo) * (hi - x)).sqrt())
                } else {
                    0.0
                }
            }
        }
    }

    fn transform(&self, shift: f64, scale: f64) -> Axis {
        let (lo, hi) = self.bounds();
        let (lo, hi) = ((lo - shift) / scale, (hi - shift) / scale);
        match self {
            Axis::Uniform { .. } => Axis::Uniform { lo, hi },
            Axis::Arcsine { .. } => Axis::Arcsine { lo, hi },
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        match *self {
            Axis::Uniform { lo, hi } => lo + (hi - lo) * u,
            Axis::Arcsine { lo, hi } => 0.5 * (lo + hi) + 0.5 * (hi - lo) * (PI * u).cos(),
        }
    }
}

/// Moments of the arcsine law on `[−1, 1]`: `C(k, k/2)/2^k` for even `k`, 0 for odd.
fn standard_arcsine_moments(degree: usize) -> Vec<f64> {
    let mut out = vec![0.0; degree + 1];
    out[0] = 1.0;
    // m_{k+2} = m_k (k+1)/(k+2)
    let mut k = 0;
    while k + 2 <= degree {
        out[k + 2] = out[k] * (k as f64 + 1.0) / (k as f64 + 2.0);
        k += 2;
    }
    out
}

/// A weighted point cloud; weights are nonnegative and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleCloud {
    points: DMatrix<f64>,
    weights: Vec<f64>,
}

impl SampleCloud {
    /// Uniform weights `1/m`.
    pub fn new(points: DMatrix<f64>) -> Result<Self> {
        let m = points.nrows();
        let weights = vec![1.0 / m.max(1) as f64; m];
        Self::with_weights(points, weights)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(rows_to_matrix(rows)?)
    }

    pub fn with_weights(points: DMatrix<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.nrows() == 0 || points.ncols() == 0 {
            return Err(Error::InvalidSamples("need at least one point of positive dimension".into()));
        }
        if weights.len() != points.nrows() {
            return Err(Error::InvalidSamples(format!(
                "{} weights for {} points",
                weights.len(),
                points.nrows()
            )));
        }
        if let Some(k) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples(format!(
                "non-finite coordinate in row {}",
                k % points.nrows() + 1
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidSamples("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSamples(format!("weights sum to {total}, expected 1")));
        }
        Ok(SampleCloud { points, weights })
    }

    /// Rescales arbitrary nonnegative weights to sum to one.
    pub fn with_unnormalized_weights(points: DMatrix<f64>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidSamples("weights must have a positive finite sum".into()));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Self::with_weights(points, weights)
    }

    /// Reads one point per row: `d` numeric columns, an optional header row,
    /// and an optional final column headed `weight`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut weight_col = false;
        let mut width = None;
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::InvalidSamples(format!("line {}: {e}", line + 1)))?;
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            if line == 0 && record.iter().any(|f| f.parse::<f64>().is_err()) {
                weight_col = record
                    .iter()
                    .next_back()
                    .is_some_and(|f| f.eq_ignore_ascii_case("weight"));
                width = Some(record.len());
                continue;
            }
            if let Some(w) = width {
                if record.len() != w {
                    return Err(Error::InvalidSamples(format!(
                        "line {}: expected {w} columns, found {}",
                        line + 1,
                        record.len()
                    )));
                }
            } else {
                width = Some(record.len());
            }
            let mut row = Vec::with_capacity(record.len());
            for (col, field) in record.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| {
                    Error::InvalidSamples(format!("line {}, column {}: not a number: {field:?}", line + 1, col + 1))
                })?;
                if !v.is_finite() {
                    return Err(Error::InvalidSamples(format!(
                        "line {}, column {}: non-finite value",
                        line + 1,
                        col + 1
                    )));
                }
                row.push(v);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::InvalidSamples("no data rows".into()));
        }
        if weight_col {
            if rows[0].len() < 2 {
                return Err(Error::InvalidSamples("weight column without coordinates".into()));
            }
            let weights: Vec<f64> = rows.iter_mut().map(|r| r.pop().unwrap()).collect();
            Self::with_unnormalized_weights(rows_to_matrix(&rows)?, weights)
        } else {
            Self::from_rows(&rows)
        }
    }

    /// Writes `x1,…,xd[,weight]` with a header and 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, writer: W, include_weights: bool) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv write failed: {e}"));
        let mut header: Vec<String> = (1..=self.dim()).map(|i| format!("x{i}")).collect();
        if include_weights {
            header.push("weight".into());
        }
        wtr.write_record(&header).map_err(io)?;
        for j in 0..self.len() {
            let mut rec: Vec<String> = self.points.row(j).iter().map(|v| format!("{v:.16e}")).collect();
            if include_weights {
                rec.push(format!("{:.16e}", self.weights[j]));
            }
            wtr.write_record(&rec).map_err(io)?;
        }
        wtr.flush()
            .map_err(|e| Error::InvalidArgument(format!("csv write failed: {e}")))?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> &DMatrix<f64> {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn point(&self, j: usize) -> Vec<f64> {
        self.points.row(j).iter().copied().collect()
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let lo = (0..self.dim()).map(|i| self.points.column(i).min()).collect();
        let hi = (0..self.dim()).map(|i| self.points.column(i).max()).collect();
        (lo, hi)
    }
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let d = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidSamples("rows have different lengths".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]))
}

/// Which family a provider was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    LebesgueBox,
    Chebyshev1d,
    Product,
    Empirical,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::LebesgueBox => "lebesgue-box",
            MeasureKind::Chebyshev1d => "chebyshev-1d",
            MeasureKind::Product => "product",
            MeasureKind::Empirical => "empirical",
        })
    }
}

#[derive(Debug, Clone)]
enum Source {
    Analytic(Vec<Axis>),
    Empirical(SampleCloud),
}

/// Serves the moments `μ_α` of a finite measure.
///
/// Providers are immutable; single moments are memoized behind a lock so
/// that shared providers can be read from several threads.
#[derive(Debug)]
pub struct MomentProvider {
    kind: MeasureKind,
    source: Source,
    mass: f64,
    cache: RwLock<HashMap<MultiIndex, f64>>,
}

impl Clone for MomentProvider {
    fn clone(&self) -> Self {
        Self::from_parts(self.kind, self.source.clone(), self.mass)
    }
}

impl MomentProvider {
    fn from_parts(kind: MeasureKind, source: Source, mass: f64) -> Self {
        MomentProvider {
            kind,
            source,
            mass,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// Lebesgue measure on the box `∏[loᵢ, hiᵢ]` (mass = volume, density 1).
    pub fn lebesgue_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let axes = box_axes(lo, hi)?;
        let volume = lo.iter().zip(hi).map(|(a, b)| b - a).product();
        Ok(Self::from_parts(MeasureKind::LebesgueBox, Source::Analytic(axes), volume))
    }

    /// Uniform density on a box with the given total mass.
    pub fn uniform_box(lo: &[f64], hi: &[f64], mass: f64) -> Result<Self> {
        Self::lebesgue_box(lo, hi)?.with_mass(mass)
    }

    /// `dx/√(1−x²)` on `[−1, 1]`, total mass `π`.
    pub fn chebyshev() -> Self {
        Self::from_parts(
            MeasureKind::Chebyshev1d,
            Source::Analytic(vec![Axis::Arcsine { lo: -1.0, hi: 1.0 }]),
            PI,
        )
    }

    /// The Chebyshev weight transported to `[lo, hi]` (mass stays `π`).
    pub fn chebyshev_on(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Self::from_parts(
            MeasureKind::Chebyshev1d,
            Source::Analytic(vec![Axis::Arcsine { lo, hi }]),
            PI,
        ))
    }

    /// Tensor product of analytic factors; mass is the product of masses.
    pub fn product(factors: &[MomentProvider]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("product needs at least one factor".into()));
        }
        let mut axes = Vec::new();
        let mut mass = 1.0;
        for f in factors {
            match &f.source {
                Source::Analytic(a) => axes.extend(a.iter().cloned()),
                Source::Empirical(_) => {
                    return Err(Error::InvalidArgument("product factors must be analytic".into()))
                }
            }
            mass *= f.mass;
        }
        Ok(Self::from_parts(MeasureKind::Product, Source::Analytic(axes), mass))
    }

    pub fn empirical(cloud: SampleCloud) -> Self {
        Self::from_parts(MeasureKind::Empirical, Source::Empirical(cloud), 1.0)
    }

    /// Same shape, rescaled to total mass `mass`.
    pub fn with_mass(self, mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidArgument(format!("total mass must be positive, got {mass}")));
        }
        Ok(Self::from_parts(self.kind, self.source, mass))
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn is_empirical(&self) -> bool {
        matches!(self.source, Source::Empirical(_))
    }

    /// The per-axis factors of an analytic measure.
    pub fn axes(&self) -> Option<&[Axis]> {
        match &self.source {
            Source::Analytic(a) => Some(a),
            Source::Empirical(_) => None,
        }
    }

    pub fn samples(&self) -> Option<&SampleCloud> {
        match &self.source {
            Source::Empirical(c) => Some(c),
            Source::Analytic(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.source {
            Source::Analytic(axes) => axes.len(),
            Source::Empirical(c) => c.dim(),
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.mass
    }

    /// `∫ x^α dμ`.
    pub fn moment(&self, alpha: &MultiIndex) -> f64 {
        if let Some(v) = self.cache.read().unwrap().get(alpha) {
            return *v;
        }
        let value = match &self.source {
            Source::Analytic(axes) => {
                self.mass
                    * alpha
                        .exponents()
                        .iter()
                        .zip(axes)
                        .map(|(&a, axis)| axis.moments(a as usize)[a as usize])
                        .product::<f64>()
            }
            Source::Empirical(cloud) => {
                let mut acc = 0.0;
                for j in 0..cloud.len() {
                    let x: Vec<f64> = cloud.points.row(j).iter().copied().collect();
                    acc += cloud.weights[j] * alpha.eval(&x);
                }
                self.mass * acc
            }
        };
        self.cache.write().unwrap().insert(alpha.clone(), value);
        value
    }

    /// All moments indexed by `set`, in its order.
    pub fn moments(&self, set: &IndexSet) -> Result<Vec<f64>> {
        if set.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: set.dim(),
            });
        }
        let values = match &self.source {
            Source::Analytic(axes) => {
                let tables: Vec<Vec<f64>> = axes.iter().map(|a| a.moments(set.degree())).collect();
                let mut v = set.product_vector(&tables);
                v.iter_mut().for_each(|x| *x *= self.mass);
                v
            }
            Source::Empirical(cloud) => {
                let mut acc = vec![0.0; set.len()];
                let mut x = vec![0.0; cloud.dim()];
                for j in 0..cloud.len() {
                    for (i, xi) in x.iter_mut().enumerate() {
                        *xi = cloud.points[(j, i)];
                    }
                    let v = set.monomial_vector(&x)?;
                    let w = cloud.weights[j];
                    for (a, b) in acc.iter_mut().zip(v) {
                        *a += w * b;
                    }
                }
                acc.iter_mut().for_each(|x| *x *= self.mass);
                acc
            }
        };
        let mut cache = self.cache.write().unwrap();
        for (alpha, v) in set.entries().iter().zip(&values) {
            cache.entry(alpha.clone()).or_insert(*v);
        }
        Ok(values)
    }

    /// Density w.r.t. Lebesgue measure; `None` for empirical measures.
    pub fn density(&self, x: &[f64]) -> Option<f64> {
        match &self.source {
            Source::Analytic(axes) => Some(
                self.mass * axes.iter().zip(x).map(|(a, &xi)| a.density(xi)).product::<f64>(),
            ),
            Source::Empirical(_) => None,
        }
    }

    /// Per-axis bounds of the support (bounding box of the points for empirical measures).
    pub fn support_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.source {
            Source::Analytic(axes) => axes.iter().map(Axis::bounds).unzip(),
            Source::Empirical(c) => c.bounding_box(),
        }
    }

    /// The provider of `ν = T#μ` with `T(x) = (x − shift)/scale`.
    pub fn pushforward(&self, shift: &[f64], scale: f64) -> Result<MomentProvider> {
        if shift.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: shift.len(),
            });
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
        }
        let source = match &self.source {
            Source::Analytic(axes) => Source::Analytic(
                axes.iter()
                    .zip(shift)
                    .map(|(a, &s)| a.transform(s, scale))
                    .collect(),
            ),
            Source::Empirical(c) => {
                let points = DMatrix::from_fn(c.len(), c.dim(), |j, i| (c.points[(j, i)] - shift[i]) / scale);
                Source::Empirical(SampleCloud {
                    points,
                    weights: c.weights.clone(),
                })
            }
        };
        Ok(Self::from_parts(self.kind, source, self.mass))
    }

    /// Draws `m` points from the normalized measure with a seeded ChaCha8 stream.
    pub fn draw_samples(&self, m: usize, seed: u64) -> Result<SampleCloud> {
        let axes = match &self.source {
            Source::Analytic(axes) => axes,
            Source::Empirical(_) => {
                return Err(Error::InvalidArgument("sampling needs an analytic measure".into()))
            }
        };
        if m == 0 {
            return Err(Error::InvalidArgument("sample count must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = DMatrix::from_fn(m, axes.len(), |_, _| 0.0);
        let mut points = points;
        for j in 0..m {
            for (i, axis) in axes.iter().enumerate() {
                points[(j, i)] = axis.sample(&mut rng);
            }
        }
        SampleCloud::new(points)
    }

    /// Parses `{"kind": ..., "params": {...}}`.
    ///
    /// Kinds: `lebesgue-box` (`lo`, `hi` arrays, optional `mass`, default the
    /// volume), `chebyshev-1d` (optional `lo`/`hi`, default `[−1, 1]`, optional
    /// `mass`, default `π`), `product` (`factors`: array of configs, optional
    /// `mass`), and `empirical` (`points`: array of rows, optional `weights`).
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| {
            Error::InvalidArgument(format!("measure config: {e} (line {}, column {})", e.line(), e.column()))
        })?;
        Self::from_json_value(&value, "$")
    }

    fn from_json_value(value: &Value, path: &str) -> Result<Self> {
        let bad = |field: &str, msg: &str| Error::InvalidArgument(format!("measure config {path}.{field}: {msg}"));
        let obj = value.as_object().ok_or_else(|| bad("", "expected an object"))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("kind", "missing or not a string"))?;
        let empty = serde_json::Map::new();
        let params = match obj.get("params") {
            None => &empty,
            Some(p) => p.as_object().ok_or_else(|| bad("params", "expected an object"))?,
        };
        let number = |name: &str| -> Result<Option<f64>> {
            match params.get(name) {
                None => Ok(None),
                Some(v) => v
                    .as_f64()
                    .map(Some)
                    .ok_or_else(|| bad(&format!("params.{name}"), "expected a number")),
            }
        };
        let vector = |name: &str| -> Result<Vec<f64>> {
            let arr = params
                .get(name)
                .ok_or_else(|| bad(&format!("params.{name}"), "missing"))?;
            match arr {
                Value::Number(n) => Ok(vec![n.as_f64().unwrap()]),
                Value::Array(items) => items
                    .iter()
                    .map(|v| v.as_f64().ok_or_else(|| bad(&format!("params.{name}"), "expected numbers")))
                    .collect(),
                _ => Err(bad(&format!("params.{name}"), "expected a number or an array")),
            }
        };
        let provider = match kind {
            "lebesgue-box" => Self::lebesgue_box(&vector("lo")?, &vector("hi")?)?,
            "chebyshev-1d" => {
                let lo = number("lo")?.unwrap_or(-1.0);
                let hi = number("hi")?.unwrap_or(1.0);
                Self::chebyshev_on(lo, hi)?
            }
            "product" => {
                let factors = params
                    .get("factors")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("params.factors", "missing or not an array"))?;
                let parsed = factors
                    .iter()
                    .enumerate()
                    .map(|(k, f)| Self::from_json_value(f, &format!("{path}.params.factors[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                Self::product(&parsed)?
            }
            "empirical" => {
                let rows = params
                    .get("points")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("params.points", "missing or not an array"))?;
                let rows: Vec<Vec<f64>> = rows
                    .iter()
                    .map(|r| match r {
                        Value::Number(n) => Ok(vec![n.as_f64().unwrap()]),
                        Value::Array(items) => items
                            .iter()
                            .map(|v| v.as_f64().ok_or_else(|| bad("params.points", "expected numbers")))
                            .collect(),
                        _ => Err(bad("params.points", "expected rows of numbers")),
                    })
                    .collect::<Result<_>>()?;
                let points = rows_to_matrix(&rows)?;
                let cloud = match params.get("weights") {
                    None => SampleCloud::new(points)?,
                    Some(_) => SampleCloud::with_unnormalized_weights(points, vector("weights")?)?,
                };
                Self::empirical(cloud)
            }
            other => return Err(bad("kind", &format!("unknown kind {other:?}"))),
        };
        match number("mass")? {
            Some(mass) => provider.with_mass(mass),
            None => Ok(provider),
        }
    }
}

fn box_axes(lo: &[f64], hi: &[f64]) -> Result<Vec<Axis>> {
    if lo.is_empty() || lo.len() != hi.len() {
        return Err(Error::InvalidArgument("box bounds must be nonempty and of equal length".into()));
    }
    lo.iter()
        .zip(hi)
        .map(|(&a, &b)| {
            if a < b && a.is_finite() && b.is_finite() {
                Ok(Axis::Uniform { lo: a, hi: b })
            } else {
                Err(Error::InvalidArgument(format!("bad box side [{a}, {b}]")))
            }
        })
        .collect()
}

/// `Mₙ(μ)` with its index set.
#[derive(Debug, Clone)]
pub struct MomentMatrix {
    index_set: IndexSet,
    values: DMatrix<f64>,
}

impl MomentMatrix {
    /// Assembles `Mₙ(μ)(α, β) = μ_{α+β}`; each distinct `α + β` is computed once.
    pub fn assemble(provider: &MomentProvider, set: &IndexSet) -> Result<Self> {
        let doubled = IndexSet::enumerate(set.dim(), 2 * set.degree());
        let moments = provider.moments(&doubled)?;
        let s = set.len();
        let mut values = DMatrix::zeros(s, s);
        for i in 0..s {
            for j in 0..=i {
                let key = set.get(i).add(set.get(j));
                let v = moments[doubled.position(&key).expect("α+β has degree ≤ 2n")];
                values[(i, j)] = v;
                values[(j, i)] = v;
            }
        }
        Ok(MomentMatrix {
            index_set: set.clone(),
            values,
        })
    }

    /// Wraps an explicit symmetric matrix.
    pub fn from_matrix(index_set: IndexSet, values: DMatrix<f64>) -> Result<Self> {
        let s = index_set.len();
        if values.nrows() != s || values.ncols() != s {
            return Err(Error::DimensionMismatch {
                expected: s,
                got: values.nrows(),
            });
        }
        if (0..s).any(|i| (0..i).any(|j| values[(i, j)] != values[(j, i)])) {
            return Err(Error::InvalidArgument("moment matrix must be symmetric".into()));
        }
        Ok(MomentMatrix { index_set, values })
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index_set
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.index_set.len()
    }
}

/// The affine chart `x ↦ (x − center)/scale` used to keep monomials of order one.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFrame {
    pub center: Vec<f64>,
    pub scale: f64,
}

impl AffineFrame {
    pub fn identity(dim: usize) -> Self {
        AffineFrame {
            center: vec![0.0; dim],
            scale: 1.0,
        }
    }

    /// Maps the support box of `provider` into `[−1, 1]ᵈ` (largest side to `[−1, 1]`).
    pub fn fit(provider: &MomentProvider) -> Self {
        let (lo, hi) = provider.support_box();
        let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let half = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| 0.5 * (b - a))
            .fold(0.0f64, f64::max);
        let scale = if half > 0.0 && half.is_finite() { half } else { 1.0 };
        AffineFrame { center, scale }
    }

    pub fn is_identity(&self) -> bool {
        self.scale == 1.0 && self.center.iter().all(|&c| c == 0.0)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.center)
            .map(|(xi, c)| (xi - c) / self.scale)
            .collect()
    }

    pub fn apply_width(&self, width: f64) -> f64 {
        width / self.scale
    }
}
