//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 parse error, 3 non-monotone
//! verdict during a threshold search, 4 unwritable output, 5 channel not
//! symmetric under the given transform.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::binary::{BoundKind, IterationLimits};
use crate::channel::decompose::{msc_decompose, symmetrized_matrix, CondMatrix, OutputPermutation};
use crate::channel::msc::MscMixture;
use crate::channel::spec::{parse_binary_channel, parse_channel, parse_msc, ChannelSpec};
use crate::de::{de_threshold, run_de, DeConfig};
use crate::ensemble::DegreeEnsemble;
use crate::error::Error;
use crate::family::ChannelFamily;
use crate::threshold::{
    channel_threshold, measure_threshold, region_sweep, Certifier, MeasureBound, RegionOverlay,
    DEFAULT_STEPS,
};
use crate::zm::{convergence_rate, necessary_stability_violated, sufficient_stability, zm_iterate};

#[derive(Debug, Parser)]
#[command(
    name = "ldpc-bounds",
    version,
    about = "Iterative CB/SB bounds on LDPC decoding thresholds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by the commands that iterate on an ensemble.
#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Degree ensemble JSON file; regular (3,6) when omitted.
    #[arg(long, value_name = "FILE")]
    pub ensemble: Option<PathBuf>,
    /// Iteration cap for bound recursions and DE runs.
    #[arg(long, value_name = "N")]
    pub max_iter: Option<usize>,
    /// RNG seed for density evolution.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// DE population size.
    #[arg(long, default_value_t = DeConfig::default().population_size)]
    pub population: usize,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    UbCb,
    LbCb,
    UbSb,
    UbCbsb,
    UbSbStar,
    De,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZmAction {
    Bound,
    Stability,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CB, SB, pe of one channel and whether they satisfy the measure inequalities.
    Measures {
        #[arg(long, value_name = "SPEC")]
        channel: String,
    },
    /// Threshold of a channel family under a bound or DE.
    Threshold {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        bound: BoundArg,
        #[arg(long, value_parser = parse_family)]
        family: ChannelFamily,
        /// Bracket width; defaults to the family range / 2^24 (2^12 for DE).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Decodable region of the two-dimensional bound as CSV, plus a JSON sidecar.
    Region {
        #[command(flatten)]
        common: Common,
        /// Grid size `NxM` (CB points x SB points).
        #[arg(long, default_value = "50x50", value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Z_m CB-vector bound or stability report for an MSC.
    Zm {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "SPEC")]
        channel: String,
        #[arg(long, value_enum, default_value = "bound")]
        action: ZmAction,
    },
    /// Splits a conditional matrix into MSCs.
    Decompose {
        /// JSON file `{"rows": [[P(y|x=0)...], ...]}`.
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        /// Output permutation as `cyclic` or a comma-separated image list.
        #[arg(long, default_value = "cyclic")]
        transform: String,
        /// Decompose the symmetrized channel instead.
        #[arg(long)]
        symmetrize: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Sampled density evolution on one channel, or a family threshold.
    De {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "SPEC", conflicts_with = "family")]
        channel: Option<String>,
        #[arg(long, value_parser = parse_family, required_unless_present = "channel")]
        family: Option<ChannelFamily>,
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
}

fn parse_family(s: &str) -> Result<ChannelFamily, String> {
    s.parse()
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid '{s}' is not of the form NxM"))?;
    let n = a.trim().parse().map_err(|e| format!("grid '{s}': {e}"))?;
    let m = b.trim().parse().map_err(|e| format!("grid '{s}': {e}"))?;
    Ok((n, m))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Unwritable {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Unreadable {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Parse { .. }) | CliError::Usage(_) => 2,
            CliError::Lib(Error::NonMonotone(_)) => 3,
            CliError::Unwritable { .. } => 4,
            CliError::Lib(Error::NotSymmetric { .. }) => 5,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` and runs the command, writing results to `stdout` or `--out`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Measures { channel } => emit(&None, stdout, &pretty(&measures(&channel)?)),
        Command::Threshold {
            common,
            bound,
            family,
            tol,
        } => {
            let e = load_ensemble(&common)?;
            let limits = limits(&common);
            let de = de_config(&common);
            let (lo, hi) = family.range();
            let cert = match bound {
                BoundArg::UbCb => Certifier::Bound(BoundKind::UbCb),
                BoundArg::LbCb => Certifier::Bound(BoundKind::LbCb),
                BoundArg::UbSb => Certifier::Bound(BoundKind::UbSb),
                BoundArg::UbCbsb => Certifier::Bound(BoundKind::UbCbSb),
                BoundArg::UbSbStar => Certifier::SbStar(with_jobs(&common, || {
                    measure_threshold(MeasureBound::UbSbStar, &e, 1e-5, &limits, &de)
                })?),
                BoundArg::De => Certifier::De(de),
            };
            let default_steps = if bound == BoundArg::De {
                12
            } else {
                DEFAULT_STEPS
            };
            let tol = tol.unwrap_or((hi - lo) / (1u64 << default_steps) as f64);
            let r = with_jobs(&common, || {
                channel_threshold(&cert, family, &e, tol, &limits)
            })??;
            emit(&common.out, stdout, &pretty(&r.to_json(family, &e)))
        }
        Command::Region { common, grid, tol } => {
            let e = load_ensemble(&common)?;
            let limits = limits(&common);
            let de = de_config(&common);
            // Fail on an unwritable destination before the sweep, not after.
            if let Some(path) = &common.out {
                write_file(path, "")?;
                write_file(&path.with_extension("json"), "")?;
            }
            let (grid, overlay) = with_jobs(&common, || {
                let g = region_sweep(&e, grid.0, grid.1, &limits);
                (g, RegionOverlay::compute(&e, tol, &limits, &de))
            })?;
            let grid = grid?;
            let overlay = pretty(&overlay.to_json(&e));
            match &common.out {
                Some(path) => {
                    write_file(path, &grid.to_csv())?;
                    write_file(&path.with_extension("json"), &overlay)
                }
                None => {
                    write_stdout(stdout, &grid.to_csv())?;
                    write_stdout(stdout, &overlay)
                }
            }
        }
        Command::Zm {
            common,
            channel,
            action,
        } => {
            let e = load_ensemble(&common)?;
            let v0 = parse_msc(&channel)?.cb_vector();
            let report = match action {
                ZmAction::Bound => {
                    let run = zm_iterate(&v0, &e, &limits(&common));
                    json!({
                        "schema": "ldpc-bounds/zm-bound/1",
                        "ensemble": e.label(),
                        "channel": channel,
                        "verdict": run.verdict,
                        "iterations": run.iterations,
                        "final_max_off_zero": run.last().max_off_zero(),
                        "trajectory": run.trajectory.iter().map(|v| v.values().to_vec()).collect::<Vec<_>>(),
                    })
                }
                ZmAction::Stability => json!({
                    "schema": "ldpc-bounds/zm-stability/1",
                    "ensemble": e.label(),
                    "channel": channel,
                    "cb_vector": v0.values(),
                    "sufficient": sufficient_stability(&e, &v0),
                    "necessary_violated": necessary_stability_violated(&e, &v0),
                    "convergence_rate": convergence_rate(&e, &v0),
                }),
            };
            emit(&common.out, stdout, &pretty(&report))
        }
        Command::Decompose {
            matrix,
            transform,
            symmetrize,
            out,
        } => {
            let text = fs::read_to_string(&matrix).map_err(|source| CliError::Unreadable {
                path: matrix.clone(),
                source,
            })?;
            let cond = parse_matrix(&text)?;
            let (cond, t) = if symmetrize {
                symmetrized_matrix(&cond)
            } else {
                let t = parse_transform(&transform, cond.outputs())?;
                (cond, t)
            };
            let mix = msc_decompose(&cond, &t)?;
            emit(&out, stdout, &pretty(&mixture_json(&mix)))
        }
        Command::De {
            common,
            channel,
            family,
            steps,
        } => {
            let e = load_ensemble(&common)?;
            let cfg = de_config(&common);
            let report = match (channel, family) {
                (Some(spec), _) => {
                    let ch = parse_binary_channel(&spec)?;
                    let r = with_jobs(&common, || run_de(&ch, &e, &cfg))??;
                    json!({
                        "schema": "ldpc-bounds/de-run/1",
                        "ensemble": e.label(),
                        "channel": spec,
                        "seed": cfg.seed,
                        "decodable": r.decodable,
                        "iterations": r.iterations,
                        "error_fraction": r.error_fraction,
                    })
                }
                (None, Some(family)) => {
                    let t = with_jobs(&common, || de_threshold(family, &e, &cfg, steps))??;
                    json!({
                        "schema": "ldpc-bounds/threshold/1",
                        "bound": "de",
                        "family": family.label(),
                        "parameter": family.parameter_name(),
                        "ensemble": e.label(),
                        "seed": cfg.seed,
                        "lo": t.lo,
                        "hi": t.hi,
                        "value": t.value,
                        "warning": t.warning,
                    })
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "either --channel or --family is required".into(),
                    ))
                }
            };
            emit(&common.out, stdout, &pretty(&report))
        }
    }
}

fn measures(spec: &str) -> CliResult<Value> {
    Ok(match parse_channel(spec)? {
        ChannelSpec::Binary(ch) => {
            let cb = ch.cb()?;
            let sb = ch.sb()?;
            let pe = ch.pe().ok();
            json!({
                "schema": "ldpc-bounds/measures/1",
                "channel": spec,
                "kind": ch.name(),
                "cb": cb,
                "sb": sb,
                "pe": pe,
                "symmetric": ch.is_symmetric(),
                "valid": crate::channel::NoisePair { cb, sb }.is_valid()
                    && pe.map_or(true, |pe| 2.0 * pe <= sb + 1e-12),
            })
        }
        ChannelSpec::Msc(ch) => {
            let v = ch.cb_vector();
            json!({
                "schema": "ldpc-bounds/measures/1",
                "channel": spec,
                "kind": "msc",
                "m": ch.m(),
                "cb_vector": v.values(),
                "cutoff_rate": v.cutoff_rate(),
                "pe": ch.pe(),
            })
        }
    })
}

fn mixture_json(mix: &MscMixture) -> Value {
    json!({
        "schema": "ldpc-bounds/msc-mixture/1",
        "m": mix.m(),
        "atoms": mix
            .atoms()
            .iter()
            .map(|(w, ch)| json!({ "weight": w, "p": ch.probs() }))
            .collect::<Vec<_>>(),
        "cb_vector": mix.cb_vector().values(),
    })
}

#[derive(serde::Deserialize)]
struct MatrixFile {
    rows: Vec<Vec<f64>>,
}

fn parse_matrix(text: &str) -> CliResult<CondMatrix> {
    let m: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        position: e.column(),
        message: format!("matrix file line {}: {e}", e.line()),
    })?;
    Ok(CondMatrix::new(m.rows)?)
}

fn parse_transform(spec: &str, outputs: usize) -> CliResult<OutputPermutation> {
    if spec.trim() == "cyclic" {
        return Ok(OutputPermutation::cyclic(outputs));
    }
    let mut image = Vec::new();
    let mut pos = 0;
    for tok in spec.split(',') {
        let v = tok.trim().parse::<usize>().map_err(|e| Error::Parse {
            position: pos,
            message: format!("transform entry '{tok}': {e}"),
        })?;
        image.push(v);
        pos += tok.len() + 1;
    }
    if image.len() != outputs {
        return Err(CliError::Usage(format!(
            "transform has {} entries, matrix has {outputs} outputs",
            image.len()
        )));
    }
    Ok(OutputPermutation::new(image)?)
}

fn load_ensemble(common: &Common) -> CliResult<DegreeEnsemble> {
    match &common.ensemble {
        None => Ok(DegreeEnsemble::regular(3, 6)?),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Unreadable {
                path: path.clone(),
                source,
            })?;
            Ok(DegreeEnsemble::from_json(&text)?)
        }
    }
}

fn limits(common: &Common) -> IterationLimits {
    let mut l = IterationLimits::default();
    if let Some(n) = common.max_iter {
        l.max_iter = n;
    }
    l
}

fn de_config(common: &Common) -> DeConfig {
    let mut c = DeConfig {
        population_size: common.population,
        seed: common.seed,
        ..DeConfig::default()
    };
    if let Some(n) = common.max_iter {
        c.max_iter = n;
    }
    c
}

fn with_jobs<R: Send>(common: &Common, f: impl FnOnce() -> R + Send) -> CliResult<R> {
    match common.jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| CliError::Usage(format!("--jobs {n}: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    match out {
        Some(path) => write_file(path, text),
        None => write_stdout(stdout, text),
    }
}

fn write_stdout(stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|source| CliError::Unwritable {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Unwritable {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let code = run(
            std::iter::once("ldpc-bounds").chain(args.iter().copied()),
            &mut out,
        );
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("50x40"), Ok((50, 40)));
        assert!(parse_grid("50").is_err());
    }

    #[test]
    fn measures_report() {
        let (code, out) = run_capture(&["measures", "--channel", "bsc:0.1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!((v["cb"].as_f64().unwrap() - 0.6).abs() < 1e-12);
        assert!((v["sb"].as_f64().unwrap() - 0.36).abs() < 1e-12);
        assert_eq!(v["schema"], "ldpc-bounds/measures/1");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["measures", "--channel", "bsc:abc"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(CliError::Lib(Error::NonMonotone("x".into())).exit_code(), 3);
    }

    #[test]
    fn transform_spec() {
        assert_eq!(
            parse_transform("cyclic", 3).unwrap(),
            OutputPermutation::cyclic(3)
        );
        assert_eq!(
            parse_transform("1,2,0", 3).unwrap(),
            OutputPermutation::new(vec![1, 2, 0]).unwrap()
        );
        assert_eq!(parse_transform("1,x,0", 3).unwrap_err().exit_code(), 2);
        assert_eq!(parse_transform("1,0", 3).unwrap_err().exit_code(), 2);
    }
}
