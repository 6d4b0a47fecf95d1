//! Batch command-line front end.
//!
//! Every table is written as CSV with a header row, or as a JSON array of
//! records. Exit codes: 0 success, 1 the parameters fall outside the regime
//! a result needs, 2 malformed input or usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bounds::{achievable_sum_rate, binning_sum_rate_bound, gap_tilde, outer_sum_rate, GapRow};
use crate::envelope::PowerGrid;
use crate::error::{Error, Result};
use crate::lattice::Family;
use crate::model::{classify_regime, Decoder, RawParams, RegimeFlags, StateVariance};
use crate::scenario::{OutputFormat, Scenario};
use crate::simulate::{
    alpha_grid, run_analog, run_digital, sweep_alpha, with_threads, AlphaSweep, Scheme,
    SchemeSpec, SimResult,
};

#[derive(Debug, Parser)]
#[command(name = "asdgic", version, about = "Bounds, gaps and lattice-chain simulation for the state-dependent Gaussian interference channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Envelope grid density (points per power axis minus one).
    #[arg(long, default_value_t = 256)]
    density: usize,
    /// Largest power boost considered by the envelope.
    #[arg(long, default_value_t = 100.0)]
    max_boost: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<PowerGrid> {
        PowerGrid::new(self.density, self.max_boost)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Outer bound, achievable sum rate and regime flags.
    Regions {
        scenario: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Gap rows at the given SNRs.
    GapTable {
        #[arg(long, value_delimiter = ',', required = true)]
        snrs: Vec<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Gap rows on a log-spaced SNR grid.
    GapCurve {
        #[arg(long, default_value_t = 0.05)]
        xmin: f64,
        #[arg(long, default_value_t = 50.0)]
        xmax: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Monte-Carlo run of a transceiver chain.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        decoder: Option<u8>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Finite-rate mode with nesting exponent k.
        #[arg(long, value_name = "K", conflicts_with = "sweep_alpha")]
        digital: Option<u32>,
        /// Sweep the receiver coefficient instead of a single run.
        #[arg(long)]
        sweep_alpha: bool,
        #[arg(long, default_value_t = 101)]
        alpha_points: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha_max: f64,
        /// Worker threads; output does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Random-binning sum-rate bound for equal state variances.
    Binning {
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',')]
        q_list: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Parameter validation and regime flags.
    Validate {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_condition_not_met() {
                1
            } else {
                2
            }
        }
    }
}

fn pick(flag: Option<FormatArg>, scenario: Option<&Scenario>) -> OutputFormat {
    flag.map(OutputFormat::from)
        .or_else(|| scenario.and_then(|s| s.format))
        .unwrap_or_default()
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Regions { scenario, grid, format } => {
            let sc = Scenario::load(&scenario)?;
            let params = sc.params()?;
            let outer = outer_sum_rate(&params);
            let ach = achievable_sum_rate(&params, &grid.grid()?)?;
            let row = RegionRow {
                outer_bits: outer.value,
                achievable_bits: ach.value,
                kind: ach.kind.tag(),
                limiting_decoder: ach.limiting_decoder,
                flags: ach.conditions.clone(),
                warnings: ach.warnings.clone(),
            };
            match pick(format, Some(&sc)) {
                OutputFormat::Csv => {
                    writeln!(out, "outer_bits,achievable_bits,kind,limiting_decoder,flags")?;
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        g17(row.outer_bits),
                        g17(row.achievable_bits),
                        row.kind,
                        row.limiting_decoder,
                        row.flags.compact()
                    )?;
                }
                OutputFormat::Json => write_json(out, &[row])?,
            }
        }
        Command::GapTable { snrs, grid, format } => {
            let grid = grid.grid()?;
            let rows = snrs.iter().map(|&x| gap_tilde(x, &grid)).collect::<Result<Vec<_>>>()?;
            write_gap_rows(out, &rows, pick(format, None))?;
        }
        Command::GapCurve { xmin, xmax, steps, grid, format } => {
            if !(xmin > 0.0 && xmax > xmin && xmax.is_finite()) {
                return Err(Error::InvalidInput(format!("need 0 < xmin < xmax (got {xmin}, {xmax})")));
            }
            if steps < 2 {
                return Err(Error::TooFewPoints { needed: 2, got: steps });
            }
            let grid = grid.grid()?;
            let ratio = (xmax / xmin).ln();
            let rows = (0..steps)
                .map(|i| {
                    let x = if i + 1 == steps {
                        xmax
                    } else {
                        xmin * (ratio * i as f64 / (steps - 1) as f64).exp()
                    };
                    gap_tilde(x, &grid)
                })
                .collect::<Result<Vec<_>>>()?;
            write_gap_rows(out, &rows, pick(format, None))?;
        }
        Command::Simulate {
            scenario,
            scheme,
            family,
            dim,
            decoder,
            trials,
            seed,
            digital,
            sweep_alpha: sweep,
            alpha_points,
            alpha_max,
            threads,
            format,
        } => {
            let mut sc = Scenario::load(&scenario)?;
            let params = sc.params()?;
            let sim = sc.sim.get_or_insert_with(Default::default);
            if let Some(s) = scheme {
                sim.scheme = Some(s.parse::<Scheme>()?);
            }
            if let Some(d) = decoder {
                sim.decoder = Some(Decoder::try_from(d).map_err(Error::InvalidInput)?);
            }
            sim.trials = trials.or(sim.trials);
            sim.seed = seed.or(sim.seed);
            let lat = sc.lattice.get_or_insert_with(Default::default);
            if let Some(f) = family {
                lat.family = Some(Family::from_tag(&f)?);
            }
            lat.dim = dim.or(lat.dim);
            let spec = sc.scheme_spec(&params)?;
            let fmt = pick(format, Some(&sc));
            let raw = sc.raw();

            if sweep {
                if !(alpha_max.is_finite() && alpha_max > 0.0) {
                    return Err(Error::NonPositiveValue { field: "alpha-max", value: alpha_max });
                }
                let grid = alpha_grid(alpha_points, alpha_max);
                let result = with_threads(threads, || sweep_alpha(&params, &spec, &grid))??;
                write_sweep(out, &result, fmt)?;
            } else {
                let mode = match digital {
                    Some(k) => format!("digital:{k}"),
                    None => "analog".to_string(),
                };
                let result = with_threads(threads, || match digital {
                    Some(k) => run_digital(&params, &spec, k),
                    None => run_analog(&params, &spec),
                })??;
                let record = SimRecord::new(&raw, &spec, &mode, result)?;
                write_sim(out, &record, fmt)?;
            }
        }
        Command::Binning { scenario, q_list, format } => {
            let sc = Scenario::load(&scenario)?;
            let params = sc.params()?;
            let pairs: Vec<(StateVariance, StateVariance)> = match q_list {
                Some(qs) => qs
                    .into_iter()
                    .map(|q| (StateVariance::Finite(q), StateVariance::Finite(q)))
                    .collect(),
                None => vec![(sc.q1, sc.q2)],
            };
            let mut rows = Vec::with_capacity(pairs.len());
            for (q1, q2) in pairs {
                let b = binning_sum_rate_bound(&params, q1, q2)?;
                rows.push(BinningRow {
                    q1: q1.finite().unwrap_or(f64::INFINITY),
                    q2: q2.finite().unwrap_or(f64::INFINITY),
                    gamma: b.gamma,
                    entropy_term: b.entropy_term,
                    value: b.value,
                });
            }
            match pick(format, Some(&sc)) {
                OutputFormat::Csv => {
                    writeln!(out, "q1,q2,gamma,entropy_term,value")?;
                    for r in &rows {
                        writeln!(
                            out,
                            "{},{},{},{},{}",
                            g17(r.q1),
                            g17(r.q2),
                            g17(r.gamma),
                            g17(r.entropy_term),
                            g17(r.value)
                        )?;
                    }
                }
                OutputFormat::Json => write_json(out, &rows)?,
            }
        }
        Command::Validate { scenario, format } => {
            let sc = Scenario::load(&scenario)?;
            let params = sc.params()?;
            let flags = classify_regime(&params);
            let row = ValidateRow {
                strong_interference: params.strong_interference(),
                flags,
            };
            match pick(format, Some(&sc)) {
                OutputFormat::Csv => {
                    writeln!(
                        out,
                        "strong_interference,imbalanced_dec1,imbalanced_dec2,balanced_dec1,balanced_dec2,notes"
                    )?;
                    let f = &row.flags;
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        row.strong_interference,
                        f.imbalanced_dec1,
                        f.imbalanced_dec2,
                        f.balanced_dec1,
                        f.balanced_dec2,
                        csv_field(&f.notes.join("; "))
                    )?;
                }
                OutputFormat::Json => write_json(out, &[row])?,
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct RegionRow {
    outer_bits: f64,
    achievable_bits: f64,
    kind: &'static str,
    limiting_decoder: Decoder,
    flags: RegimeFlags,
    warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
struct BinningRow {
    q1: f64,
    q2: f64,
    gamma: f64,
    entropy_term: f64,
    value: f64,
}

#[derive(Debug, Serialize)]
struct ValidateRow {
    strong_interference: bool,
    #[serde(flatten)]
    flags: RegimeFlags,
}

/// A simulation result with the configuration that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct SimRecord {
    pub scheme: Scheme,
    pub decoder: Decoder,
    pub family: Family,
    pub dim: usize,
    pub seed: u64,
    pub mode: String,
    #[serde(flatten)]
    pub result: SimResult,
    pub spec: SchemeSpec,
    pub params: ParamsEcho,
    pub config_hash: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsEcho {
    pub p1: f64,
    pub p2: f64,
    pub n1: f64,
    pub n2: f64,
    pub a12: f64,
    pub a21: f64,
    pub q1: StateVariance,
    pub q2: StateVariance,
}

impl SimRecord {
    pub fn new(raw: &RawParams, spec: &SchemeSpec, mode: &str, result: SimResult) -> Result<SimRecord> {
        let params = ParamsEcho {
            p1: raw.p1,
            p2: raw.p2,
            n1: raw.n1,
            n2: raw.n2,
            a12: raw.a12,
            a21: raw.a21,
            q1: raw.q1,
            q2: raw.q2,
        };
        Ok(SimRecord {
            scheme: spec.scheme,
            decoder: spec.decoder,
            family: spec.family,
            dim: spec.dim,
            seed: spec.seed,
            mode: mode.to_string(),
            config_hash: config_hash(&params, spec, mode)?,
            result,
            spec: spec.clone(),
            params,
        })
    }
}

/// SHA-256 over the canonical JSON of parameters, spec and mode.
pub fn config_hash(params: &ParamsEcho, spec: &SchemeSpec, mode: &str) -> Result<String> {
    let body = serde_json::to_string(&(params, spec, mode)).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let digest = Sha256::digest(body.as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

const SIM_HEADER: &str = "scheme,decoder,family,dim,trials,seed,mode,x1_power,x1_power_se,x2_power,x2_power_se,\
lattice1_sigma2,lattice2_sigma2,zeff_pre_var,zeff_pre_se,zeff_post_var,zeff_post_se,predicted_pre_var,\
max_alignment_residual,alpha,ser,ser_se,shaping_loss_bits,config_hash";

fn write_sim(out: &mut dyn Write, rec: &SimRecord, fmt: OutputFormat) -> Result<()> {
    match fmt {
        OutputFormat::Json => write_json(out, &[rec]),
        OutputFormat::Csv => {
            let r = &rec.result;
            let opt = |v: Option<f64>| v.map(g17).unwrap_or_default();
            let alpha: Vec<String> = r.alpha.iter().map(|&a| g17(a)).collect();
            writeln!(out, "{SIM_HEADER}")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                rec.scheme,
                rec.decoder,
                rec.family,
                rec.dim,
                r.trials,
                rec.seed,
                rec.mode,
                g17(r.x1_power),
                g17(r.x1_power_se),
                g17(r.x2_power),
                g17(r.x2_power_se),
                g17(r.lattice1_sigma2),
                g17(r.lattice2_sigma2),
                g17(r.zeff_pre_var),
                g17(r.zeff_pre_se),
                g17(r.zeff_post_var),
                g17(r.zeff_post_se),
                g17(r.predicted_pre_var),
                g17(r.max_alignment_residual),
                alpha.join(";"),
                opt(r.ser),
                opt(r.ser_se),
                g17(r.shaping_loss_bits),
                rec.config_hash
            )?;
            Ok(())
        }
    }
}

fn write_sweep(out: &mut dyn Write, s: &AlphaSweep, fmt: OutputFormat) -> Result<()> {
    match fmt {
        OutputFormat::Json => write_json(out, &[s]),
        OutputFormat::Csv => {
            writeln!(out, "alpha,pre_mod_var,std_error,is_argmin,closed_form")?;
            for (i, ((a, v), se)) in s.grid.iter().zip(&s.pre_mod_var).zip(&s.std_errors).enumerate() {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    g17(*a),
                    g17(*v),
                    g17(*se),
                    (i == s.argmin_index) as u8,
                    g17(s.closed_form)
                )?;
            }
            Ok(())
        }
    }
}

fn write_gap_rows(out: &mut dyn Write, rows: &[GapRow], fmt: OutputFormat) -> Result<()> {
    match fmt {
        OutputFormat::Json => write_json(out, rows),
        OutputFormat::Csv => {
            writeln!(out, "x,term_outer,term_inner_raw,term_inner_env,gap")?;
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    g17(r.x),
                    g17(r.term_outer),
                    g17(r.term_inner_raw),
                    g17(r.term_inner_env),
                    g17(r.gap)
                )?;
            }
            Ok(())
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<()> {
    let text = serde_json::to_string_pretty(rows).map_err(|e| Error::InvalidInput(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// exponent form outside `1e-4 ≤ |v| < 1e17`.
pub fn g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
