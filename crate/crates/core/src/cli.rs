//! The `bellbox` command line.
//!
//! Every subcommand writes one data file (CSV or JSON) to `--out` or stdout.
//! Options come from built-in defaults, then an optional JSON `--config`
//! file, then flags. Exit codes: 0 success, 2 usage, 3 domain, 4 I/O.

use std::f64::consts::{FRAC_PI_4, PI};
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::angle::{Angle, Direction};
use crate::error::Error;
use crate::feasibility::{lhv_feasibility, FeasibilityVerdict, DEFAULT_TOLERANCE};
use crate::lists::{chsh, four_list_report, CountInequality, CountSummary, FourLists};
use crate::models::{
    classical_to_quantum, eval_classical, eval_noisy, eval_quantum, eval_strong,
    spin_j_correlation, CorrelationModel, ExpectationValue,
};
use crate::sampling::{
    run_series, tally_series, ChshSettings, Outcome, SeededGenerator, CHSH_LABELS,
};
use crate::signalling::{marginal_scan, max_marginal_spread, MarginalReport};
use crate::spin::{self, Spin};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "bellbox",
    version,
    about = "Classical, quantum and stronger-than-quantum correlation experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub options: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate E(θ), E_qm(θ), E_s(θ) and optionally the noisy curve.
    Curves,
    /// Analytic and Monte Carlo CHSH value with an LHV feasibility verdict.
    Chsh,
    /// Singlet correlation from spin matrices against the closed form.
    Spin,
    /// Four-list experiment (local model) or the contradiction certificate.
    Fourlists,
    /// Marginal statistics of A across a grid of B settings.
    Signalling,
    /// LHV feasibility of a correlation quadruple.
    Feasibility {
        /// Quadruple `E(α',β),E(α,β),E(α,β'),E(α',β')`; defaults to the model at the configured angles.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        correlations: Option<Vec<f64>>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// classical, quantum, spin, strong, noisy[:<base>], quasi-quantum
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Spin quantum number, e.g. 1/2 or 1.5
    #[arg(long, global = true)]
    pub j: Option<String>,
    /// Noise strength in [0, 1]
    #[arg(long, global = true)]
    pub eta: Option<f64>,
    /// Polar angles a_p,a,b,b_p in radians (`pi/4`, `3pi/4` accepted)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub angles: Option<String>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Grid size for curves and spin tables
    #[arg(long, global = true)]
    pub points: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the fields above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Fully resolved options.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: String,
    pub j: Option<String>,
    pub eta: Option<f64>,
    pub angles: ChshSettings,
    pub trials: u64,
    pub seed: u64,
    pub points: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: "classical".into(),
            j: None,
            eta: None,
            angles: ChshSettings::default(),
            trials: 100_000,
            seed: 0,
            points: 181,
            format: Format::Csv,
            out: None,
        }
    }
}

/// Config file contents; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    model: Option<String>,
    j: Option<serde_json::Value>,
    eta: Option<f64>,
    angles: Option<serde_json::Value>,
    trials: Option<u64>,
    seed: Option<u64>,
    points: Option<usize>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Run(Error::Io(_)) => EXIT_IO,
            CliError::Run(Error::Csv(e)) if e.is_io_error() => EXIT_IO,
            CliError::Run(Error::Json(e)) if e.is_io() => EXIT_IO,
            CliError::Run(_) => EXIT_DOMAIN,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Run(e) => e.fmt(f),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Run(Error::Io(e))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("bellbox: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    let config = resolve_config(&cli.options)?;
    let output = match &cli.command {
        Command::Curves => cmd_curves(&config)?,
        Command::Chsh => cmd_chsh(&config)?,
        Command::Spin => cmd_spin(&config)?,
        Command::Fourlists => cmd_fourlists(&config)?,
        Command::Signalling => cmd_signalling(&config)?,
        Command::Feasibility {
            correlations,
            tolerance,
        } => cmd_feasibility(&config, correlations.as_deref(), *tolerance)?,
    };
    if !output.summary.is_empty() {
        eprintln!("{}", output.summary.trim_end());
    }
    match &config.out {
        Some(path) => fs::write(path, &output.data)?,
        None => io::stdout().lock().write_all(&output.data)?,
    }
    Ok(())
}

pub fn resolve_config(flags: &Flags) -> CliResult<RunConfig> {
    let mut c = RunConfig::default();
    if let Some(path) = &flags.config {
        let text = fs::read_to_string(path)?;
        let file: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        if let Some(m) = file.model {
            c.model = m;
        }
        if let Some(j) = file.j {
            c.j = Some(match j {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            });
        }
        c.eta = file.eta.or(c.eta);
        if let Some(a) = file.angles {
            c.angles = match a {
                serde_json::Value::String(s) => parse_angles(&s)?,
                other => serde_json::from_value(other)
                    .map_err(|e| CliError::Usage(format!("config angles: {e}")))?,
            };
        }
        c.trials = file.trials.unwrap_or(c.trials);
        c.seed = file.seed.unwrap_or(c.seed);
        c.points = file.points.unwrap_or(c.points);
        c.format = file.format.unwrap_or(c.format);
        c.out = file.out.or(c.out);
    }
    if let Some(m) = &flags.model {
        c.model = m.clone();
    }
    if let Some(j) = &flags.j {
        c.j = Some(j.clone());
    }
    c.eta = flags.eta.or(c.eta);
    if let Some(a) = &flags.angles {
        c.angles = parse_angles(a)?;
    }
    c.trials = flags.trials.unwrap_or(c.trials);
    c.seed = flags.seed.unwrap_or(c.seed);
    c.points = flags.points.unwrap_or(c.points);
    c.format = flags.format.unwrap_or(c.format);
    if flags.out.is_some() {
        c.out = flags.out.clone();
    }
    if c.trials == 0 {
        return usage("--trials must be at least 1");
    }
    if c.points < 2 {
        return usage("--points must be at least 2");
    }
    Ok(c)
}

/// Parses `a_p,a,b,b_p`; each entry is a number or `[k]pi[/d]`.
pub fn parse_angles(s: &str) -> CliResult<ChshSettings> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return usage(format!(
            "--angles needs four comma-separated values, got {s:?}"
        ));
    }
    let v = parts
        .iter()
        .map(|p| parse_angle(p))
        .collect::<CliResult<Vec<f64>>>()?;
    Ok(ChshSettings {
        alpha_prime: v[0],
        alpha: v[1],
        beta: v[2],
        beta_prime: v[3],
    })
}

fn parse_angle(s: &str) -> CliResult<f64> {
    let bad = || CliError::Usage(format!("cannot parse angle {s:?}"));
    let lower = s.to_ascii_lowercase();
    let Some(at) = lower.find("pi") else {
        return lower.parse::<f64>().map_err(|_| bad());
    };
    let (coef, rest) = lower.split_at(at);
    let coef = coef.trim().trim_end_matches('*');
    let k = match coef {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = rest[2..].trim();
    let d = match rest.strip_prefix('/') {
        Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
    };
    // k/d first keeps quarter angles exact
    Ok(k / d * PI)
}

/// Builds the model named in the config.
pub fn build_model(config: &RunConfig) -> CliResult<CorrelationModel> {
    let name = config.model.trim().to_ascii_lowercase();
    let (head, base) = match name.split_once(':') {
        Some((h, b)) => (h.to_string(), Some(b.to_string())),
        None => (name.clone(), None),
    };
    let simple = |n: &str| -> CliResult<CorrelationModel> {
        Ok(match n {
            "classical" => CorrelationModel::Classical,
            "quantum" => CorrelationModel::Quantum,
            "strong" => CorrelationModel::Strong,
            "quasi-quantum" | "quasi_quantum" | "quasiquantum" => CorrelationModel::QuasiQuantum,
            "spin" | "spin-j" => CorrelationModel::SpinJ {
                j: spin_arg(config)?,
            },
            other => return usage(format!("unknown model {other:?}")),
        })
    };
    match head.as_str() {
        "noisy" => {
            let Some(eta) = config.eta else {
                return usage("model noisy needs --eta");
            };
            let base = simple(base.as_deref().unwrap_or("classical"))?;
            Ok(CorrelationModel::noisy(base, eta)?)
        }
        _ if base.is_some() => usage(format!("unknown model {name:?}")),
        other => simple(other),
    }
}

fn spin_arg(config: &RunConfig) -> CliResult<Spin> {
    match &config.j {
        Some(j) => Ok(j.parse::<Spin>()?),
        None => usage("this command needs --j"),
    }
}

/// Rendered command output.
pub struct Output {
    pub data: Vec<u8>,
    /// Human-readable summary for stderr.
    pub summary: String,
}

fn render<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut data = serde_json::to_vec_pretty(value).map_err(Error::from)?;
    data.push(b'\n');
    Ok(data)
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(Error::from)?;
    for r in rows {
        w.write_record(&r).map_err(Error::from)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Run(Error::Io(e.into_error())))
}

fn grid(points: usize) -> Vec<Angle> {
    (0..points)
        .map(|k| Angle::new(k as f64 / (points - 1) as f64 * PI).expect("on [0, π]"))
        .collect()
}

#[derive(Debug, Serialize)]
struct CurveRow {
    theta: f64,
    classical: f64,
    quantum: f64,
    strong: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    noisy: Option<f64>,
}

pub fn cmd_curves(config: &RunConfig) -> CliResult<Output> {
    let rows = grid(config.points)
        .into_iter()
        .map(|t| {
            Ok(CurveRow {
                theta: t.radians(),
                classical: eval_classical(t).value(),
                quantum: eval_quantum(t).value(),
                strong: eval_strong(t).value(),
                noisy: config
                    .eta
                    .map(|eta| eval_noisy(&CorrelationModel::Classical, eta, t).map(|e| e.value()))
                    .transpose()?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let data = match config.format {
        Format::Json => render(&serde_json::json!({ "eta": config.eta, "rows": rows }))?,
        Format::Csv => {
            let mut header = vec!["theta", "classical", "quantum", "strong"];
            if config.eta.is_some() {
                header.push("noisy");
            }
            csv_table(
                &header,
                rows.iter().map(|r| {
                    let mut v = vec![
                        r.theta.to_string(),
                        r.classical.to_string(),
                        r.quantum.to_string(),
                        r.strong.to_string(),
                    ];
                    v.extend(r.noisy.map(|x| x.to_string()));
                    v
                }),
            )?
        }
    };
    Ok(Output {
        data,
        summary: format!("{} grid points on [0, π]", rows.len()),
    })
}

#[derive(Debug, Serialize)]
pub struct ChshEstimate {
    pub expectations: [f64; 4],
    pub standard_errors: [f64; 4],
    pub s: f64,
    pub s_standard_error: f64,
}

#[derive(Debug, Serialize)]
pub struct ChshReport {
    pub model: CorrelationModel,
    pub angles: ChshSettings,
    pub relative_angles: [f64; 4],
    pub trials: u64,
    pub seed: u64,
    pub analytic_expectations: [f64; 4],
    pub analytic_s: f64,
    pub monte_carlo: ChshEstimate,
    pub feasibility: FeasibilityVerdict,
}

const CHSH_WEIGHTS: [f64; 4] = [1.0, 1.0, 1.0, -1.0];

/// Monte Carlo CHSH estimate. Quasi-quantum estimates pass the classical
/// product means through `-cos(π/2 (E + 1))`, with delta-method errors; its
/// `s` error adds the per-setting errors, a bound that ignores their
/// correlation.
pub fn estimate_chsh(
    model: &CorrelationModel,
    angles: &ChshSettings,
    trials: u64,
    gen: &SeededGenerator,
) -> crate::error::Result<ChshEstimate> {
    let tally = tally_series(model, &angles.pairs(), trials, gen)?;
    let raw: [f64; 4] = std::array::from_fn(|k| tally.expectation(k));
    let raw_se: [f64; 4] = std::array::from_fn(|k| tally.expectation_se(k));
    if *model == CorrelationModel::QuasiQuantum {
        let e = raw.map(|x| classical_to_quantum(ExpectationValue::saturating(x)).value());
        let se: [f64; 4] = std::array::from_fn(|k| {
            std::f64::consts::FRAC_PI_2
                * (std::f64::consts::FRAC_PI_2 * (raw[k] + 1.0)).sin().abs()
                * raw_se[k]
        });
        let s = e.iter().zip(CHSH_WEIGHTS).map(|(x, w)| x * w).sum();
        return Ok(ChshEstimate {
            expectations: e,
            standard_errors: se,
            s,
            s_standard_error: se.iter().sum(),
        });
    }
    let (s, s_se) = tally.combination(&CHSH_WEIGHTS);
    Ok(ChshEstimate {
        expectations: raw,
        standard_errors: raw_se,
        s,
        s_standard_error: s_se,
    })
}

pub fn cmd_chsh(config: &RunConfig) -> CliResult<Output> {
    let model = build_model(config)?;
    let analytic = config.angles.expectations(&model)?;
    let [a, b, c, d] = analytic;
    let analytic_s = chsh(a, b, c, d).value();
    let gen = SeededGenerator::new(config.seed, 0);
    let monte_carlo = estimate_chsh(&model, &config.angles, config.trials, &gen)?;
    let feasibility = lhv_feasibility(analytic, DEFAULT_TOLERANCE)?;
    let report = ChshReport {
        relative_angles: config.angles.angles()?.map(|t| t.radians()),
        model,
        angles: config.angles,
        trials: config.trials,
        seed: config.seed,
        analytic_expectations: analytic.map(|e| e.value()),
        analytic_s,
        monte_carlo,
        feasibility,
    };
    let summary = format!(
        "{}: analytic |S| = {}, Monte Carlo S = {} ± {}, LHV feasible: {}",
        report.model,
        analytic_s.abs(),
        report.monte_carlo.s,
        report.monte_carlo.s_standard_error,
        report.feasibility.feasible
    );
    let data = match config.format {
        Format::Json => render(&report)?,
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = (0..4)
                .map(|k| {
                    vec![
                        CHSH_LABELS[k].to_string(),
                        report.relative_angles[k].to_string(),
                        report.analytic_expectations[k].to_string(),
                        report.monte_carlo.expectations[k].to_string(),
                        report.monte_carlo.standard_errors[k].to_string(),
                    ]
                })
                .collect();
            rows.push(vec![
                "chsh".into(),
                String::new(),
                analytic_s.to_string(),
                report.monte_carlo.s.to_string(),
                report.monte_carlo.s_standard_error.to_string(),
            ]);
            csv_table(
                &[
                    "quantity",
                    "theta",
                    "analytic",
                    "monte_carlo",
                    "standard_error",
                ],
                rows,
            )?
        }
    };
    Ok(Output { data, summary })
}

#[derive(Debug, Serialize)]
struct SpinRow {
    theta: f64,
    c_matrix: f64,
    c_closed_form: f64,
    e_normalized: f64,
    deviation: f64,
}

pub fn cmd_spin(config: &RunConfig) -> CliResult<Output> {
    let j = spin_arg(config)?;
    let ops = spin::SpinOperators::build(j)?;
    let singlet = spin::SingletState::build(j)?;
    let alpha = Direction::planar(0.0);
    let rows = grid(config.points)
        .into_iter()
        .map(|t| {
            let c =
                spin::correlation_with(&ops, &singlet, &alpha, &Direction::planar(t.radians()))?;
            let closed = spin_j_correlation(t, j);
            Ok(SpinRow {
                theta: t.radians(),
                c_matrix: c,
                c_closed_form: closed,
                e_normalized: 3.0 / j.casimir() * c,
                deviation: (c - closed).abs(),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let data = match config.format {
        Format::Json => render(&serde_json::json!({
            "j": j.to_string(),
            "max_deviation": max_deviation,
            "rows": rows,
        }))?,
        Format::Csv => csv_table(
            &[
                "theta",
                "c_matrix",
                "c_closed_form",
                "e_normalized",
                "deviation",
            ],
            rows.iter().map(|r| {
                [
                    r.theta,
                    r.c_matrix,
                    r.c_closed_form,
                    r.e_normalized,
                    r.deviation,
                ]
                .iter()
                .map(f64::to_string)
                .collect()
            }),
        )?,
    };
    Ok(Output {
        data,
        summary: format!("j = {j}: max |C_matrix - C_closed| = {max_deviation:e}"),
    })
}

#[derive(Debug, Serialize)]
struct FourListOutput {
    model: CorrelationModel,
    trials: u64,
    seed: u64,
    counts: CountSummary,
    agreements: [u64; 4],
    inequality: CountInequality,
    expectations: [ExpectationValue; 4],
    chsh: f64,
    lists: FourLists,
}

#[derive(Debug, Serialize)]
struct ContradictionOutput {
    model: CorrelationModel,
    analytic_expectations: [f64; 4],
    /// Equal-sign fractions u/N implied by the model.
    agreement_fractions: [f64; 4],
    verdict: FeasibilityVerdict,
}

pub fn cmd_fourlists(config: &RunConfig) -> CliResult<Output> {
    let model = build_model(config)?;
    if model == CorrelationModel::Classical {
        let gen = SeededGenerator::new(config.seed, 0);
        let series = run_series(&model, &config.angles.pairs(), config.trials, &gen)?;
        let lists = FourLists::from_series(&series)?;
        let report = four_list_report(&lists)?;
        let summary = format!(
            "N = {}: n = {:?}, path inequality holds: {} (slack {}), u-version holds: {}, S = {}",
            config.trials,
            report.counts.differences(),
            report.inequality.holds,
            report.inequality.slack,
            report.inequality.holds_agreements,
            report.chsh.value()
        );
        let data = match config.format {
            Format::Json => render(&FourListOutput {
                model,
                trials: config.trials,
                seed: config.seed,
                counts: report.counts,
                agreements: report.counts.agreements(),
                inequality: report.inequality,
                expectations: report.expectations,
                chsh: report.chsh.value(),
                lists,
            })?,
            Format::Csv => {
                let cell = |o: &Outcome| o.value().to_string();
                csv_table(
                    &["trial_index", "alpha_prime", "alpha", "beta", "beta_prime"],
                    (0..lists.len()).map(|i| {
                        vec![
                            i.to_string(),
                            cell(&lists.alpha_prime[i]),
                            cell(&lists.alpha[i]),
                            cell(&lists.beta[i]),
                            cell(&lists.beta_prime[i]),
                        ]
                    }),
                )?
            }
        };
        return Ok(Output { data, summary });
    }

    let analytic = config.angles.expectations(&model)?;
    let verdict = lhv_feasibility(analytic, DEFAULT_TOLERANCE)?;
    if verdict.feasible {
        return Err(CliError::Run(Error::Domain(format!(
            "model {model} is not generated by a local mechanism; \
             four genuine lists are only produced for the classical model"
        ))));
    }
    let facet = verdict
        .violated_facet
        .expect("infeasible verdict names a facet");
    let summary = format!(
        "{model}: no assignment of four lists reproduces these correlations; \
         CHSH facet {:?} reaches {} > 2",
        facet.signs, facet.value
    );
    let out = ContradictionOutput {
        model,
        analytic_expectations: analytic.map(|e| e.value()),
        agreement_fractions: analytic.map(|e| e.p_equal()),
        verdict,
    };
    let data = match config.format {
        Format::Json => render(&out)?,
        Format::Csv => verdict_csv(&out.verdict)?,
    };
    Ok(Output { data, summary })
}

fn verdict_csv(v: &FeasibilityVerdict) -> CliResult<Vec<u8>> {
    let join = |xs: &[String]| xs.join(";");
    let facet = v.violated_facet;
    csv_table(
        &[
            "feasible",
            "residual",
            "facet_signs",
            "facet_value",
            "witness",
        ],
        [vec![
            v.feasible.to_string(),
            v.residual.to_string(),
            facet
                .map(|f| join(&f.signs.map(|s| s.to_string())))
                .unwrap_or_default(),
            facet.map(|f| f.value.to_string()).unwrap_or_default(),
            v.witness
                .map(|w| join(&w.map(|x| x.to_string())))
                .unwrap_or_default(),
        ]],
    )
}

/// B directions used by the signalling scan: α rotated by `kπ/4`, `k = 0..5`.
pub fn signalling_grid(alpha: f64) -> Vec<Direction> {
    (0..5)
        .map(|k| Direction::planar(alpha + k as f64 * FRAC_PI_4))
        .collect()
}

pub fn cmd_signalling(config: &RunConfig) -> CliResult<Output> {
    let model = build_model(config)?;
    let gen = SeededGenerator::new(config.seed, 0);
    let alpha = Direction::planar(config.angles.alpha);
    let reports: Vec<MarginalReport> = marginal_scan(
        &model,
        &alpha,
        &signalling_grid(config.angles.alpha),
        config.trials,
        &gen,
    )?;
    let spread = max_marginal_spread(&reports);
    let summary = format!(
        "{model}: max spread of A-marginal means across the grid = {spread} (SE {})",
        1.0 / (config.trials as f64).sqrt()
    );
    let data = match config.format {
        Format::Json => render(&serde_json::json!({
            "model": model,
            "max_marginal_spread": spread,
            "reports": reports,
        }))?,
        Format::Csv => csv_table(
            &[
                "setting_label",
                "theta",
                "mean_a",
                "mean_b",
                "correlation",
                "n_trials",
                "standard_error",
            ],
            reports.iter().map(|r| {
                vec![
                    r.setting_label.clone(),
                    r.theta.to_string(),
                    r.empirical_mean_a.to_string(),
                    r.empirical_mean_b.to_string(),
                    r.empirical_correlation.to_string(),
                    r.n_trials.to_string(),
                    r.standard_error.to_string(),
                ]
            }),
        )?,
    };
    Ok(Output { data, summary })
}

pub fn cmd_feasibility(
    config: &RunConfig,
    correlations: Option<&[f64]>,
    tolerance: Option<f64>,
) -> CliResult<Output> {
    let quad: [ExpectationValue; 4] = match correlations {
        Some(c) => {
            let v = c
                .iter()
                .map(|&x| ExpectationValue::new(x))
                .collect::<crate::error::Result<Vec<_>>>()?;
            v.try_into()
                .map_err(|_| CliError::Usage("--correlations needs four values".into()))?
        }
        None => config.angles.expectations(&build_model(config)?)?,
    };
    let verdict = lhv_feasibility(quad, tolerance.unwrap_or(DEFAULT_TOLERANCE))?;
    let summary = match verdict.violated_facet {
        Some(f) => format!("infeasible: facet {:?} = {}", f.signs, f.value),
        None => "feasible".to_string(),
    };
    let data = match config.format {
        Format::Json => render(&serde_json::json!({
            "correlations": quad,
            "verdict": verdict,
        }))?,
        Format::Csv => verdict_csv(&verdict)?,
    };
    Ok(Output { data, summary })
}
