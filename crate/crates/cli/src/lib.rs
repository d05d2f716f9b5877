//! Command-line front end: builds Christoffel models from measure configs or
//! sample files and writes plot-ready result tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use cdkernel::oracle::{quadrature_moment, solve_min_quadratic, symbolic_box_average, to_rational, QpInstance};
use cdkernel::{
    boundary_estimates, box_avg_monomial, box_avg_vector, classify_support, evaluate, sweep, AffineFrame, BoxQuery,
    ChristoffelModel, DomainBox, EpsilonRule, IndexSet, JitterPolicy, MomentProvider, MultiIndex, SupportThresholds,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use config::{grid_points, load_measure, parse_degrees, parse_grid, parse_list, parse_rule, EpsSpec};
use table::{Cell, Format, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn io(e: impl std::fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<cdkernel::Error> for CliError {
    fn from(e: cdkernel::Error) -> Self {
        use cdkernel::Error::*;
        match e {
            NotPositiveDefinite { .. } => CliError::Numerical(format!("{e}; increase samples or reduce n")),
            SingularGram | NoConvergence { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cdkernel", version, about = "Christoffel functions, density estimates and support tests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Λ, Λ̃ or the density estimate at points or on a grid.
    Eval(EvalArgs),
    /// Classify points as inside or outside the support.
    Support(SupportArgs),
    /// Tabulate the convergence quantities along a list of degrees.
    Sweep(SweepArgs),
    /// Draw seeded samples from an analytic measure.
    GenSamples(GenSamplesArgs),
    /// Run the oracle agreement checks.
    Selfcheck(SelfcheckArgs),
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Lambda,
    LambdaTilde,
    Density,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// A query point `x1,..,xd`; repeatable.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid")]
    pub point: Vec<String>,
    /// A grid `lo:hi:count` per axis, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// JSON config file, CSV sample file, or inline JSON.
    #[arg(long)]
    pub measure: String,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub query: QueryArgs,
    /// `v`, `v1,v2,..` or `rule:1/n^r`.
    #[arg(long, default_value = "0")]
    pub eps: String,
    #[arg(long, value_enum, default_value_t = Mode::Lambda)]
    pub mode: Mode,
    /// Known box domain `a1,b1,..,ad,bd`; densities are boundary-corrected.
    #[arg(long, allow_hyphen_values = true)]
    pub boundary_box: Option<String>,
    /// Evaluate in the measure's own coordinates instead of a fitted [-1,1] chart.
    #[arg(long)]
    pub no_rescale: bool,
    /// Relative jitter added if the moment matrix is numerically singular.
    #[arg(long)]
    pub jitter: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SupportArgs {
    #[arg(long)]
    pub measure: String,
    #[command(flatten)]
    pub query: QueryArgs,
    /// `v` or `rule:1/n^r`.
    #[arg(long)]
    pub eps: String,
    #[arg(long, default_value = "4,6,8,10,12,14,16")]
    pub degrees: String,
    #[arg(long, default_value_t = 0.25)]
    pub slope_hi: f64,
    #[arg(long, default_value_t = 0.15)]
    pub slope_lo: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub measure: String,
    #[command(flatten)]
    pub query: QueryArgs,
    /// `v` or `rule:1/n^r`.
    #[arg(long, conflicts_with = "eps_rule")]
    pub eps: Option<String>,
    /// `1/n^r` (with `--r`) or `1/n`.
    #[arg(long)]
    pub eps_rule: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub degrees: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenSamplesArgs {
    #[arg(long)]
    pub measure: String,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelfcheckArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub query: OracleQuery,
}

#[derive(Debug, Subcommand)]
pub enum OracleQuery {
    /// Exact box average of one monomial.
    BoxAverage {
        #[arg(long)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        eps: f64,
    },
    /// One moment by quadrature next to its closed form.
    Moment {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        alpha: String,
    },
}

/// Runs a parsed command, writing tables to `stdout` unless an output path is given.
pub fn run<W: Write>(cli: Cli, stdout: &mut W) -> Result<(), CliError> {
    match cli.command {
        Command::Eval(args) => {
            let table = cmd_eval(&args)?;
            emit(&table, &args.output, stdout)
        }
        Command::Support(args) => {
            let table = cmd_support(&args)?;
            emit(&table, &args.output, stdout)
        }
        Command::Sweep(args) => {
            let table = cmd_sweep(&args)?;
            emit(&table, &args.output, stdout)
        }
        Command::GenSamples(args) => cmd_gen_samples(&args, stdout),
        Command::Selfcheck(args) => cmd_selfcheck(&args, stdout),
        Command::Oracle(args) => cmd_oracle(&args, stdout),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, T, W>(args: I, stdout: &mut W, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{e}");
            return 2;
        }
        Err(e) => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit<W: Write>(table: &Table, output: &OutputArgs, stdout: &mut W) -> Result<(), CliError> {
    match &output.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            table.write(BufWriter::new(file), output.format)
        }
        None => table.write(stdout, output.format),
    }
}

fn query_points(query: &QueryArgs, dim: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let points = match &query.grid {
        Some(spec) => grid_points(&parse_grid(spec)?),
        None => query
            .point
            .iter()
            .map(|p| parse_list(p, "point"))
            .collect::<Result<Vec<_>, _>>()?,
    };
    if points.is_empty() {
        return Err(CliError::Config("give --point or --grid".into()));
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(CliError::Config(format!(
            "query point has {} coordinates, measure has dimension {dim}",
            p.len()
        )));
    }
    Ok(points)
}

fn coord_columns(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("x{i}")).collect()
}

fn build_model(provider: &MomentProvider, args: &EvalArgs) -> Result<ChristoffelModel, CliError> {
    let frame = if args.no_rescale {
        AffineFrame::identity(provider.dim())
    } else {
        AffineFrame::fit(provider)
    };
    let policy = match args.jitter {
        Some(j) if j > 0.0 => JitterPolicy::Relative(j),
        Some(0.0) => JitterPolicy::None,
        Some(j) => return Err(CliError::Config(format!("jitter must be ≥ 0, got {j}"))),
        None => JitterPolicy::default_for(provider),
    };
    Ok(ChristoffelModel::from_provider_in_frame(provider, args.n, policy, frame)?)
}

fn parse_domain(text: &str, dim: usize) -> Result<DomainBox, CliError> {
    let v = parse_list(text, "boundary-box")?;
    if v.len() != 2 * dim {
        return Err(CliError::Config(format!(
            "boundary-box needs {} numbers a1,b1,..,ad,bd, got {}",
            2 * dim,
            v.len()
        )));
    }
    let lo = v.iter().step_by(2).copied().collect();
    let hi = v.iter().skip(1).step_by(2).copied().collect();
    Ok(DomainBox::new(lo, hi)?)
}

/// One row per (point, ε): points in input or row-major grid order, then ε ascending.
pub fn cmd_eval(args: &EvalArgs) -> Result<Table, CliError> {
    let provider = load_measure(&args.measure)?;
    let dim = provider.dim();
    let points = query_points(&args.query, dim)?;
    let eps = EpsSpec::parse(&args.eps)?;
    let widths = match args.mode {
        Mode::Lambda => vec![0.0],
        _ => eps.widths(args.n)?,
    };
    if args.mode == Mode::Density && widths.contains(&0.0) {
        return Err(CliError::Config("density mode needs eps > 0".into()));
    }
    let domain = match (&args.boundary_box, args.mode) {
        (Some(text), Mode::Density) => Some(parse_domain(text, dim)?),
        (Some(_), _) => return Err(CliError::Config("boundary-box applies to density mode only".into())),
        (None, _) => None,
    };
    let model = build_model(&provider, args)?;

    let mut columns = coord_columns(dim);
    columns.extend(["epsilon", "n", "lambda", "lambda_inv"].map(String::from));
    if args.mode == Mode::Density {
        columns.push("density_estimate".into());
        if domain.is_some() {
            columns.push("density_uncorrected".into());
        }
    }

    let rows: Vec<Vec<Vec<Cell>>> = points
        .par_iter()
        .map(|x| {
            widths
                .iter()
                .map(|&eps| {
                    let mut row: Vec<Cell> = x.iter().map(|&v| Cell::Num(v)).collect();
                    row.push(Cell::Num(eps));
                    row.push(Cell::Int(args.n as i64));
                    let q = BoxQuery::new(x.clone(), eps)?;
                    let e = evaluate(&model, &q)?;
                    row.push(Cell::Num(e.lambda_tilde));
                    row.push(Cell::Num(e.lambda_tilde_inv));
                    if args.mode == Mode::Density {
                        match &domain {
                            Some(d) => {
                                let b = boundary_estimates(&model, &q, d)?;
                                row.push(Cell::Num(b.corrected));
                                row.push(Cell::Num(b.uncorrected));
                            }
                            None => row.push(Cell::Num(e.density_estimate.unwrap_or(f64::NAN))),
                        }
                    }
                    Ok(row)
                })
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(columns);
    table.rows = rows.into_iter().flatten().collect();
    Ok(table)
}

/// Per point: verdict, fitted slope and `log Λ̃ₙ⁻¹` for each degree.
pub fn cmd_support(args: &SupportArgs) -> Result<Table, CliError> {
    let provider = load_measure(&args.measure)?;
    let dim = provider.dim();
    let points = query_points(&args.query, dim)?;
    let rule = EpsSpec::parse(&args.eps)?.rule()?;
    let degrees = parse_degrees(&args.degrees)?;
    if degrees.len() < 4 {
        return Err(CliError::Config(format!(
            "support needs at least 4 degrees, got {}",
            degrees.len()
        )));
    }
    if args.slope_lo > args.slope_hi {
        return Err(CliError::Config("slope-lo must not exceed slope-hi".into()));
    }
    let thresholds = SupportThresholds {
        slope_hi: args.slope_hi,
        slope_lo: args.slope_lo,
    };

    let mut columns = coord_columns(dim);
    columns.extend(["verdict", "decay_slope"].map(String::from));
    columns.extend(degrees.iter().map(|n| format!("log_lambda_tilde_inv_n{n}")));
    let mut table = Table::new(columns);
    for x in &points {
        let v = classify_support(&provider, x, rule, &degrees, thresholds)?;
        let mut row: Vec<Cell> = x.iter().map(|&c| Cell::Num(c)).collect();
        row.push(Cell::Text(v.verdict.to_string()));
        row.push(Cell::Num(v.decay_slope));
        row.extend(v.log_inv.iter().map(|&y| Cell::Num(y)));
        table.rows.push(row);
    }
    Ok(table)
}

fn sweep_rule(args: &SweepArgs) -> Result<EpsilonRule, CliError> {
    match (&args.eps, &args.eps_rule) {
        (Some(e), None) => {
            if args.r.is_some() {
                return Err(CliError::Config("--r goes with --eps-rule".into()));
            }
            EpsSpec::parse(e)?.rule()
        }
        (None, Some(rule)) => {
            let rule = rule.trim();
            let r = if rule == "1/n^r" {
                args.r
                    .ok_or_else(|| CliError::Config("--eps-rule 1/n^r needs --r".into()))?
            } else {
                let parsed = parse_rule(rule)?;
                if args.r.is_some_and(|r| r != parsed) {
                    return Err(CliError::Config("--r disagrees with --eps-rule".into()));
                }
                parsed
            };
            if !(r > 0.0) || !r.is_finite() {
                return Err(CliError::Config(format!("--r must be positive, got {r}")));
            }
            Ok(EpsilonRule::PowerLaw { r })
        }
        _ => Err(CliError::Config("give exactly one of --eps or --eps-rule".into())),
    }
}

/// Per point and degree: `(n, ε(n), εᵈΛ̃ₙ⁻¹, ε⁻ᵈΛ̃ₙ, nᵈΛ̃ₙ)`.
pub fn cmd_sweep(args: &SweepArgs) -> Result<Table, CliError> {
    let provider = load_measure(&args.measure)?;
    let dim = provider.dim();
    let points = query_points(&args.query, dim)?;
    let rule = sweep_rule(args)?;
    let degrees = parse_degrees(&args.degrees)?;
    if degrees.is_empty() {
        return Err(CliError::Config("degrees list is empty".into()));
    }

    let mut columns = coord_columns(dim);
    columns.extend(
        [
            "n",
            "epsilon",
            "eps_d_lambda_tilde_inv",
            "eps_neg_d_lambda_tilde",
            "n_d_lambda_tilde",
        ]
        .map(String::from),
    );
    let mut table = Table::new(columns);
    for x in &points {
        for row in sweep(&provider, x, rule, &degrees)? {
            let mut cells: Vec<Cell> = x.iter().map(|&c| Cell::Num(c)).collect();
            cells.push(Cell::Int(row.degree as i64));
            cells.push(Cell::Num(row.epsilon));
            cells.push(Cell::Num(row.scaled_inverse));
            cells.push(Cell::Num(row.density_estimate));
            cells.push(Cell::Num(row.degree_scaled));
            table.rows.push(cells);
        }
    }
    Ok(table)
}

pub fn cmd_gen_samples<W: Write>(args: &GenSamplesArgs, stdout: &mut W) -> Result<(), CliError> {
    let provider = load_measure(&args.measure)?;
    if args.m == 0 {
        return Err(CliError::Config("--m must be positive".into()));
    }
    let cloud = provider.draw_samples(args.m, args.seed)?;
    let result = match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            cloud.write_csv(BufWriter::new(file), false)
        }
        None => cloud.write_csv(stdout, false),
    };
    result.map_err(|e| CliError::Io(e.to_string()))
}

struct Check {
    name: &'static str,
    worst: f64,
    tol: f64,
}

/// Agreement of the main code paths with the oracles on seeded random instances.
pub fn cmd_selfcheck<W: Write>(args: &SelfcheckArgs, stdout: &mut W) -> Result<(), CliError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let random_measure = |rng: &mut rand_chacha::ChaCha8Rng| {
        let d = rng.gen_range(1..=2);
        let factors: Vec<MomentProvider> = (0..d)
            .map(|_| {
                let lo = rng.gen_range(-1.5..0.0);
                let hi = lo + rng.gen_range(0.5..2.0);
                if rng.gen_bool(0.5) {
                    MomentProvider::lebesgue_box(&[lo], &[hi]).unwrap()
                } else {
                    MomentProvider::chebyshev_on(lo, hi).unwrap()
                }
            })
            .collect();
        MomentProvider::product(&factors).unwrap()
    };

    let mut moment = 0.0f64;
    let mut qp = 0.0f64;
    let mut boxavg = 0.0f64;
    for _ in 0..20 {
        let mu = random_measure(&mut rng);
        for alpha in IndexSet::enumerate(mu.dim(), 6).entries() {
            let exact = mu.moment(alpha);
            let quad = quadrature_moment(&mu, alpha)?;
            moment = moment.max((exact - quad).abs() / exact.abs().max(1.0));
        }
        let n = rng.gen_range(0..=3);
        let model = ChristoffelModel::from_provider(&mu, n, JitterPolicy::None)?;
        let (lo, hi) = mu.support_box();
        let xi: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| rng.gen_range(*a..*b)).collect();
        let q = BoxQuery::new(xi, rng.gen_range(0.0..0.5))?;
        let sol = solve_min_quadratic(&QpInstance {
            gram: model.matrix().values().clone(),
            constraint: DVector::from_vec(box_avg_vector(model.index_set(), &q)?),
        })?;
        let mine = evaluate(&model, &q)?.lambda_tilde;
        qp = qp.max((mine - sol.value).abs() / sol.value);
    }
    for _ in 0..100 {
        let d = rng.gen_range(1..=3);
        let beta = MultiIndex::new((0..d).map(|_| rng.gen_range(0..=4)).collect());
        let xi: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let eps = rng.gen_range(1e-3..1.0);
        let fast = box_avg_monomial(&beta, &BoxQuery::new(xi.clone(), eps)?)?;
        let center: Vec<_> = xi.iter().map(|&x| to_rational(x)).collect();
        let exact = symbolic_box_average(&beta, &center, &to_rational(eps))?;
        let exact = exact.to_f64().unwrap_or(f64::NAN);
        boxavg = boxavg.max((fast - exact).abs() / exact.abs().max(1.0));
    }

    let checks = [
        Check {
            name: "moments vs quadrature",
            worst: moment,
            tol: 1e-10,
        },
        Check {
            name: "lambda-tilde vs QP oracle",
            worst: qp,
            tol: 1e-8,
        },
        Check {
            name: "box average vs exact rational",
            worst: boxavg,
            tol: 1e-12,
        },
    ];
    let mut ok = true;
    for c in &checks {
        let pass = c.worst <= c.tol;
        ok &= pass;
        writeln!(
            stdout,
            "{} {}: max error {:.2e} (tolerance {:.0e})",
            if pass { "PASS" } else { "FAIL" },
            c.name,
            c.worst,
            c.tol
        )
        .map_err(CliError::io)?;
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Numerical("oracle agreement failed".into()))
    }
}

fn cmd_oracle<W: Write>(args: &OracleArgs, stdout: &mut W) -> Result<(), CliError> {
    match &args.query {
        OracleQuery::BoxAverage { beta, center, eps } => {
            let beta = parse_degrees(beta)?.into_iter().map(|b| b as u32).collect();
            let beta = MultiIndex::new(beta);
            let center = parse_list(center, "center")?;
            let exact = symbolic_box_average(
                &beta,
                &center.iter().map(|&x| to_rational(x)).collect::<Vec<_>>(),
                &to_rational(*eps),
            )?;
            let fast = box_avg_monomial(&beta, &BoxQuery::new(center, *eps)?)?;
            writeln!(stdout, "exact {exact}\nexact_f64 {:.16e}\nfast {fast:.16e}", exact.to_f64().unwrap_or(f64::NAN))
                .map_err(CliError::io)
        }
        OracleQuery::Moment { measure, alpha } => {
            let mu = load_measure(measure)?;
            let alpha = MultiIndex::new(parse_degrees(alpha)?.into_iter().map(|a| a as u32).collect());
            if alpha.dim() != mu.dim() {
                return Err(CliError::Config("alpha length must match the measure dimension".into()));
            }
            let quad = quadrature_moment(&mu, &alpha)?;
            writeln!(stdout, "closed_form {:.16e}\nquadrature {quad:.16e}", mu.moment(&alpha)).map_err(CliError::io)
        }
    }
}
