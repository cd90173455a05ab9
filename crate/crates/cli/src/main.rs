mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use output::{emit, render, Format, Meta};
use quadbound::counting::{
    count_simple, gw_derivative_at_one, gw_first_passage_simulation, log_count_exact, perimeter_sequence,
};
use quadbound::experiments::{
    asymptotic_rows, core_statistics, reglue_experiment, restrict_statistics, sqrt_scaling_points, tv_experiment,
    validate, ReglueConfig, ReglueSummary, RestrictConfig, TvConfig, ValidateConfig,
};
use quadbound::rng::replicate_rng;

const GW_CAP: u64 = 10_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "quadbound",
    version,
    about = "Quadrangulations with a boundary: sampling, counting, cores and restrictions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    replicates: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
struct ScaleArgs {
    /// Number of inner faces; a comma separated list runs every size.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of rooted maps with a simple boundary, `m` inner faces and perimeter `p`.
    Count {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        p: i64,
        /// Natural log through log-gamma.
        #[arg(long)]
        log: bool,
        /// Write the table `m,ell,count` for every area up to `m` and half-perimeter up to `p/2`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniform pointed maps with a general boundary, one per replicate.
    Sample {
        #[arg(long)]
        n: usize,
        /// Perimeter; defaults to `3 p_n`.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Encoder, bijection and core invariants.
    Validate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Area and perimeter of the core against `n` and `p_n`.
    CoreStats {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Restriction of the core with its goodness and certificate bounds.
    RestrictStats {
        #[command(flatten)]
        scale: ScaleArgs,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Skip the quadratic distortion bound.
        #[arg(long)]
        no_distortion: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Total variation between restrictions of uniform simple-boundary maps and of cores.
    Tv {
        #[command(flatten)]
        scale: ScaleArgs,
        #[arg(long, default_value_t = 200)]
        bootstrap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Mean number of first vertices at label `r` in a labelled geometric tree rooted at `r + gap`.
    GwCheck {
        #[arg(long, value_delimiter = ',', required = true)]
        gap: Vec<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact count against its asymptotic form along `ell = floor(sqrt m)`.
    AsymptoticCheck {
        #[arg(long, value_delimiter = ',', default_value = "100,10000,1000000")]
        m: Vec<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Reglue the complement and random fillers onto restrictions.
    ReglueTest {
        #[command(flatten)]
        scale: ScaleArgs,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Config(String),
    Assertion(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<quadbound::experiments::ExperimentError> for Failure {
    fn from(e: quadbound::experiments::ExperimentError) -> Self {
        match e {
            quadbound::experiments::ExperimentError::Config(m) => Failure::Config(m),
            other => Failure::Assertion(other.to_string()),
        }
    }
}

fn config(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn write<T: Serialize>(meta: Meta, rows: &[T], common: &Common) -> Result<(), Failure> {
    emit(&render(&meta, rows, common.format)?, common.out.as_deref())?;
    Ok(())
}

fn check_replicates(common: &Common) -> Result<(), Failure> {
    if common.replicates == 0 {
        return Err(Failure::Config("--replicates must be at least 1".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct CountRow {
    m: i64,
    ell: i64,
    count: String,
}

fn run_count(m: i64, p: i64, log: bool, out: Option<PathBuf>) -> Result<(), Failure> {
    if m < 0 || p < 0 || p % 2 == 1 {
        return Err(Failure::Config(format!("need m >= 0 and even p >= 0, got m = {m}, p = {p}")));
    }
    if let Some(path) = out {
        let mut rows = Vec::new();
        for mm in 0..=m {
            for ell in 1..=(p / 2).max(1) {
                let count = if log {
                    format!("{:.12e}", log_count_exact(mm, ell).0)
                } else {
                    count_simple(mm, 2 * ell).map_err(|e| Failure::Config(e.to_string()))?.to_string()
                };
                rows.push(CountRow { m: mm, ell, count });
            }
        }
        let meta = Meta {
            command: "count",
            seed: 0,
            config: config(&[("m", json!(m)), ("p", json!(p)), ("log", json!(log))]),
        };
        emit(&render(&meta, &rows, Format::Csv)?, Some(&path))?;
        return Ok(());
    }
    if log {
        let l = log_count_exact(m, p / 2).0;
        println!("{}", format_significant(l, 12));
    } else {
        let c = count_simple(m, p).map_err(|e| Failure::Config(e.to_string()))?;
        println!("{c}");
    }
    Ok(())
}

fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() || x == 0.0 {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Serialize)]
struct SampleRow {
    replicate: usize,
    n: usize,
    p: usize,
    vertices: usize,
    simple_boundary: bool,
    core_area: usize,
    core_perimeter: usize,
    ltb: String,
    planemap: String,
}

fn run_sample(n: usize, p: Option<usize>, alpha: f64, common: &Common) -> Result<(), Failure> {
    check_replicates(common)?;
    if !(alpha > 0.0) {
        return Err(Failure::Config("--alpha must be positive".into()));
    }
    let p = p.unwrap_or_else(|| 3 * perimeter_sequence(n.max(1) as u64, alpha) as usize);
    if p == 0 || p % 2 == 1 {
        return Err(Failure::Config(format!("--p must be even and positive, got {p}")));
    }
    let mut rows = Vec::with_capacity(common.replicates);
    for i in 0..common.replicates {
        let mut rng = replicate_rng(common.seed, i as u64);
        let inst = quadbound::experiments::sample_instance(n, p, &mut rng)?;
        rows.push(SampleRow {
            replicate: i,
            n,
            p,
            vertices: inst.enc.quad.map().vertex_count(),
            simple_boundary: inst.enc.quad.boundary_walk().simple,
            core_area: inst.core.area(),
            core_perimeter: inst.core.perimeter(),
            ltb: inst.ltb.to_text(),
            planemap: inst.enc.quad.map().to_text(),
        });
    }
    let meta = Meta {
        command: "sample",
        seed: common.seed,
        config: config(&[
            ("n", json!(n)),
            ("p", json!(p)),
            ("alpha", json!(alpha)),
            ("replicates", json!(common.replicates)),
        ]),
    };
    write(meta, &rows, common)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Count { m, p, log, out } => run_count(m, p, log, out),
        Command::Sample { n, p, alpha, common } => run_sample(n, p, alpha, &common),
        Command::Validate { n, p, common } => {
            check_replicates(&common)?;
            let report = validate(&ValidateConfig { n, p, replicates: common.replicates, seed: common.seed })?;
            let meta = Meta {
                command: "validate",
                seed: common.seed,
                config: config(&[("n", json!(n)), ("p", json!(p)), ("replicates", json!(common.replicates))]),
            };
            write(meta, std::slice::from_ref(&report), &common)?;
            if !report.is_ok() {
                return Err(Failure::Assertion(format!("{} invariant failures", report.failures())));
            }
            Ok(())
        }
        Command::CoreStats { n, alpha, common } => {
            check_replicates(&common)?;
            let rows = n
                .iter()
                .map(|&n| core_statistics(n, alpha, common.replicates, common.seed))
                .collect::<Result<Vec<_>, _>>()?;
            let meta = Meta {
                command: "core-stats",
                seed: common.seed,
                config: config(&[("n", json!(n)), ("alpha", json!(alpha)), ("replicates", json!(common.replicates))]),
            };
            write(meta, &rows, &common)
        }
        Command::RestrictStats { scale, delta, no_distortion, common } => {
            check_replicates(&common)?;
            let mut rows = Vec::new();
            for &n in &scale.n {
                let cfg = RestrictConfig {
                    n,
                    alpha: scale.alpha,
                    eps: scale.eps,
                    delta,
                    replicates: common.replicates,
                    seed: common.seed,
                    distortion: !no_distortion,
                };
                rows.extend(restrict_statistics(&cfg)?);
            }
            let meta = Meta {
                command: "restrict-stats",
                seed: common.seed,
                config: config(&[
                    ("n", json!(scale.n)),
                    ("alpha", json!(scale.alpha)),
                    ("eps", json!(scale.eps)),
                    ("delta", json!(delta)),
                    ("replicates", json!(common.replicates)),
                    ("distortion", json!(!no_distortion)),
                ]),
            };
            write(meta, &rows, &common)?;
            let bad = rows.iter().filter(|r| r.bounds_ok == Some(false)).count();
            if bad > 0 {
                return Err(Failure::Assertion(format!("certificate bounds fail on {bad} instances")));
            }
            Ok(())
        }
        Command::Tv { scale, bootstrap, common } => {
            check_replicates(&common)?;
            let cfg = TvConfig {
                sizes: scale.n.clone(),
                alpha: scale.alpha,
                eps: scale.eps,
                replicates: common.replicates,
                seed: common.seed,
                bootstrap,
                max_tries: 1_000_000,
            };
            let rows = tv_experiment(&cfg)?;
            let meta = Meta {
                command: "tv",
                seed: common.seed,
                config: config(&[
                    ("n", json!(scale.n)),
                    ("alpha", json!(scale.alpha)),
                    ("eps", json!(scale.eps)),
                    ("replicates", json!(common.replicates)),
                    ("bootstrap", json!(bootstrap)),
                ]),
            };
            write(meta, &rows, &common)
        }
        Command::GwCheck { gap, common } => run_gw(&gap, &common),
        Command::AsymptoticCheck { m, common } => {
            let rows = asymptotic_rows(&sqrt_scaling_points(&m))?;
            let meta = Meta { command: "asymptotic-check", seed: common.seed, config: config(&[("m", json!(m))]) };
            write(meta, &rows, &common)?;
            let monotone = rows.windows(2).all(|w| w[1].ratio_minus_one.abs() < w[0].ratio_minus_one.abs());
            if !monotone {
                return Err(Failure::Assertion("relative error does not decrease along ell = floor(sqrt m)".into()));
            }
            Ok(())
        }
        Command::ReglueTest { scale, common } => {
            check_replicates(&common)?;
            let mut rows = Vec::new();
            for &n in &scale.n {
                let cfg = ReglueConfig {
                    n,
                    alpha: scale.alpha,
                    eps: scale.eps,
                    replicates: common.replicates,
                    seed: common.seed,
                };
                rows.extend(reglue_experiment(&cfg)?);
            }
            let meta = Meta {
                command: "reglue-test",
                seed: common.seed,
                config: config(&[
                    ("n", json!(scale.n)),
                    ("alpha", json!(scale.alpha)),
                    ("eps", json!(scale.eps)),
                    ("replicates", json!(common.replicates)),
                ]),
            };
            write(meta, &rows, &common)?;
            let s = ReglueSummary::from_rows(&rows);
            if !s.all_ok() {
                return Err(Failure::Assertion(format!(
                    "{} of {} trials reconstruct, {} keep the restriction ({} fragile)",
                    s.reconstructed, s.trials, s.same_restriction, s.fragile
                )));
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct GwRow {
    gap: i64,
    replicates: u64,
    discarded: u64,
    discard_rate: f64,
    mean: f64,
    se: f64,
    zero_fraction: f64,
    derivative_at_one: f64,
    within_3se: bool,
}

fn run_gw(gaps: &[i64], common: &Common) -> Result<(), Failure> {
    check_replicates(common)?;
    if let Some(g) = gaps.iter().find(|&&g| g < 0) {
        return Err(Failure::Config(format!("--gap must be nonnegative, got {g}")));
    }
    let mut rows = Vec::new();
    for &gap in gaps {
        let s = gw_first_passage_simulation(gap, common.replicates as u64, common.seed, GW_CAP);
        let d = gw_derivative_at_one(gap, 1e-4, 1e-7).map_err(|e| Failure::Assertion(e.to_string()))?;
        rows.push(GwRow {
            gap,
            replicates: s.replicates,
            discarded: s.discarded,
            discard_rate: s.discard_rate(),
            mean: s.mean,
            se: s.se,
            zero_fraction: s.zero_fraction,
            derivative_at_one: d,
            within_3se: (s.mean - 1.0).abs() <= 3.0 * s.se,
        });
    }
    let meta = Meta {
        command: "gw-check",
        seed: common.seed,
        config: config(&[("gap", json!(gaps)), ("replicates", json!(common.replicates)), ("cap", json!(GW_CAP))]),
    };
    write(meta, &rows, common)?;
    let bad: Vec<i64> = rows.iter().filter(|r| !r.within_3se || r.discard_rate >= 1e-4).map(|r| r.gap).collect();
    if !bad.is_empty() {
        return Err(Failure::Assertion(format!("mean not within 3 SE of 1 or too many discards at gaps {bad:?}")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(m)) => {
            eprintln!("assertion failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Config(m)) => {
            eprintln!("configuration error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(2)
        }
    }
}
