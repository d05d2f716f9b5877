//! Parsing of measure sources, query points and epsilon specifications.

use std::fs;
use std::path::Path;

use cdkernel::{EpsilonRule, MomentProvider, SampleCloud};

use crate::CliError;

/// Loads a measure from a JSON file, a CSV sample file, or inline JSON.
pub fn load_measure(source: &str) -> Result<MomentProvider, CliError> {
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') {
        return MomentProvider::from_json(source).map_err(|e| CliError::Config(e.to_string()));
    }
    let path = Path::new(source);
    let is_csv = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let file = fs::File::open(path).map_err(|e| CliError::Config(format!("{source}: {e}")))?;
        let cloud = SampleCloud::from_csv(file).map_err(|e| CliError::Config(format!("{source}: {e}")))?;
        return Ok(MomentProvider::empirical(cloud));
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{source}: {e}")))?;
    MomentProvider::from_json(&text).map_err(|e| CliError::Config(format!("{source}: {e}")))
}

pub fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Config(format!("{what}: cannot parse {s:?} as a number")))
        })
        .collect()
}

pub fn parse_degrees(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<usize>()
                .map_err(|_| CliError::Config(format!("degrees: cannot parse {s:?} as a degree")))
        })
        .collect()
}

/// Box widths: one or more fixed values, or the rule `ε(n) = n^{−r}`.
#[derive(Debug, Clone, PartialEq)]
pub enum EpsSpec {
    Values(Vec<f64>),
    Rule(f64),
}

impl EpsSpec {
    /// `0.1`, `0.1,0.2`, `rule:1/n` or `rule:1/n^0.5`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        if let Some(rule) = text.strip_prefix("rule:") {
            return parse_rule(rule).map(EpsSpec::Rule);
        }
        let mut values = parse_list(text, "eps")?;
        if values.iter().any(|&e| e < 0.0) {
            return Err(CliError::Config("eps: values must be ≥ 0".into()));
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        Ok(EpsSpec::Values(values))
    }

    /// Widths used at degree `n`, ascending.
    pub fn widths(&self, n: usize) -> Result<Vec<f64>, CliError> {
        match self {
            EpsSpec::Values(v) => Ok(v.clone()),
            EpsSpec::Rule(r) => Ok(vec![EpsilonRule::PowerLaw { r: *r }
                .width(n)
                .map_err(|e| CliError::Config(e.to_string()))?]),
        }
    }

    /// The single rule this spec denotes, for per-degree commands.
    pub fn rule(&self) -> Result<EpsilonRule, CliError> {
        match self {
            EpsSpec::Values(v) if v.len() == 1 => Ok(EpsilonRule::Fixed(v[0])),
            EpsSpec::Values(_) => Err(CliError::Config("eps: expected a single value or a rule".into())),
            EpsSpec::Rule(r) => Ok(EpsilonRule::PowerLaw { r: *r }),
        }
    }
}

/// `1/n` or `1/n^r`.
pub fn parse_rule(text: &str) -> Result<f64, CliError> {
    let text = text.trim();
    let r = match text.strip_prefix("1/n") {
        Some("") => 1.0,
        Some(rest) => rest
            .strip_prefix('^')
            .and_then(|r| r.trim().parse::<f64>().ok())
            .ok_or_else(|| CliError::Config(format!("eps rule: cannot parse {text:?}, expected 1/n^r")))?,
        None => return Err(CliError::Config(format!("eps rule: cannot parse {text:?}, expected 1/n^r"))),
    };
    if !(r > 0.0) || !r.is_finite() {
        return Err(CliError::Config(format!("eps rule: exponent must be positive, got {r}")));
    }
    Ok(r)
}

/// One grid axis `lo:hi:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridAxis {
    fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let t = k as f64 / last;
                self.lo * (1.0 - t) + self.hi * t
            })
            .collect()
    }
}

/// `lo:hi:count` per axis, comma separated, e.g. `0:1:3,0:1:3`.
pub fn parse_grid(text: &str) -> Result<Vec<GridAxis>, CliError> {
    text.split(',')
        .enumerate()
        .map(|(i, part)| {
            let bad = || CliError::Config(format!("grid axis {}: expected lo:hi:count, got {part:?}", i + 1));
            let fields: Vec<&str> = part.trim().split(':').collect();
            if fields.len() != 3 {
                return Err(bad());
            }
            let lo: f64 = fields[0].trim().parse().map_err(|_| bad())?;
            let hi: f64 = fields[1].trim().parse().map_err(|_| bad())?;
            let count: usize = fields[2].trim().parse().map_err(|_| bad())?;
            if count == 0 {
                return Err(CliError::Config(format!("grid axis {}: count must be ≥ 1", i + 1)));
            }
            if !lo.is_finite() || !hi.is_finite() || hi < lo {
                return Err(CliError::Config(format!("grid axis {}: need finite lo ≤ hi", i + 1)));
            }
            Ok(GridAxis { lo, hi, count })
        })
        .collect()
}

/// Grid points in row-major order (the first axis varies slowest).
pub fn grid_points(axes: &[GridAxis]) -> Vec<Vec<f64>> {
    let values: Vec<Vec<f64>> = axes.iter().map(GridAxis::values).collect();
    let mut out = vec![Vec::new()];
    for axis in &values {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}
