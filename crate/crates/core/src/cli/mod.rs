//! Command-line front end.
//!
//! Every result is wrapped together with a [`RunManifest`]. Exit codes: 0 on
//! success, 2 for invalid input, 3 when the precision policy refuses, 1 for
//! anything else.

mod selftest;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::balancing::{
    approximate_point, approximation_falsifier, cluster_and_pair, greedy_signs, parity_balance_with, BalanceReport,
    ParityParams,
};
use crate::config::{CoefficientVector, VectorConfig};
use crate::constructions::{
    construct_exponential, construct_orthonormal_multiplicity, random_unit_config, ConstructionSpec, DEFAULT_RATIO,
};
use crate::enumerate::enumerate;
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use crate::search::{maximize_min_norm, parity_sweep, SearchSpec, SweepSpec};

pub use selftest::{run_selftest, Check, SelftestTarget};

#[derive(Debug, Parser)]
#[command(name = "signsum", version, about = "Signed sums of unit vectors")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// double, ext:<bits> or interval.
    #[arg(long, global = true, default_value = "double")]
    pub precision: String,
    /// Classification tolerance.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Greedy,
    Eliminate,
    Cluster,
    Parity,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Exponential,
    Ortho,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count signed sums inside the closed ball of radius r.
    Enumerate {
        #[arg(long, conflicts_with = "construct", required_unless_present = "construct")]
        config: Option<PathBuf>,
        /// A construction such as exponential:9 or ortho:3,1.
        #[arg(long)]
        construct: Option<String>,
        #[arg(long)]
        r: f64,
    },
    /// Write a configuration file: `construct exponential 9`, `construct tight`, ...
    Construct {
        kind: String,
        params: Vec<String>,
    },
    /// Choose signs for a target point of the cube.
    Balance {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        algo: Algo,
        /// `zeros` or a JSON file holding an array of coefficients.
        #[arg(long, default_value = "zeros")]
        lambda: String,
        /// Improvement target; the default is 2^-100 d^-80.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Obliqueness scale; overrides the value derived from epsilon.
        #[arg(long)]
        zeta: Option<f64>,
    },
    /// Look for a poorly approximated point of the cube.
    Falsify {
        #[arg(long)]
        config: PathBuf,
        /// Threshold on the squared approximation error.
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 100)]
        budget: usize,
    },
    /// Maximize the smallest signed sum over configurations.
    Search {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        initial_step: Option<f64>,
        #[arg(long)]
        decay: Option<f64>,
    },
    /// Search every (d, n) up to the bounds.
    Sweep {
        #[arg(long)]
        dmax: usize,
        #[arg(long)]
        nmax: usize,
        /// Number of seeds, counted from --seed.
        #[arg(long, default_value_t = 2)]
        seeds: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Hit probability as a function of n.
    Decay {
        #[arg(long, value_enum, default_value = "exponential")]
        family: Family,
        /// Comma separated list of n.
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,9")]
        n: Vec<usize>,
        /// Radius; defaults to 1, or sqrt(d - 1e-6) for the ortho family.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Configurations averaged per n in the random family.
        #[arg(long, default_value_t = 20)]
        samples: u64,
    },
    /// Built-in consistency checks.
    #[command(alias = "verify")]
    Selftest {
        #[arg(value_enum, default_value = "all")]
        target: SelftestTarget,
    },
}

/// Provenance of a result: enough to rerun it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub seed: u64,
    pub precision: String,
    pub tolerance: f64,
    pub version: String,
    pub timestamp: u64,
    /// SHA-256 of the input file, or of the command line when there is none.
    pub input_hash: String,
}

impl RunManifest {
    fn new(command_line: Vec<String>, seed: u64, policy: &PrecisionPolicy, input: Option<&[u8]>) -> Self {
        let hash = match input {
            Some(bytes) => Sha256::digest(bytes),
            None => Sha256::digest(command_line.join("\0").as_bytes()),
        };
        RunManifest {
            command_line,
            seed,
            precision: policy.to_string(),
            tolerance: policy.classification_tolerance,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            input_hash: hash.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let args: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    match execute(&cli, args, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing to `stdout` unless `--out` is given. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&args).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let line = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    execute(&cli, line, stdout)
}

fn execute(cli: &Cli, command_line: Vec<String>, stdout: &mut dyn Write) -> Result<i32> {
    let mut policy: PrecisionPolicy = cli.precision.parse()?;
    if let Some(t) = cli.tolerance {
        policy = policy.with_tolerance(t)?;
    }
    let ctx = Ctx {
        cli,
        command_line,
        policy,
    };
    match &cli.command {
        Command::Enumerate { config, construct, r } => {
            let (cfg, input) = match (config, construct) {
                (Some(path), _) => load(path)?,
                (None, Some(spec)) => (spec.parse::<ConstructionSpec>()?.build(&ctx.policy)?, None),
                (None, None) => return Err(Error::InvalidParameter("need --config or --construct".into())),
            };
            let report = enumerate(&cfg, *r, &ctx.policy)?;
            ctx.emit_json(stdout, input.as_deref(), report.to_json_value())?;
        }
        Command::Construct { kind, params } => {
            let spec = construction_string(kind, params, cli.seed);
            let cfg = spec.parse::<ConstructionSpec>()?.build(&ctx.policy)?;
            let mut file = cfg.to_file();
            file.manifest = Some(serde_json::to_value(ctx.manifest(None))?);
            ctx.write(stdout, &serde_json::to_string_pretty(&file)?)?;
        }
        Command::Balance {
            config,
            algo,
            lambda,
            epsilon,
            zeta,
        } => {
            let (cfg, input) = load(config)?;
            let lam = read_lambda(lambda, cfg.len())?;
            let report = balance(&cfg, &lam, *algo, *epsilon, *zeta, cli.seed)?;
            ctx.emit_json(stdout, input.as_deref(), serde_json::to_value(report)?)?;
        }
        Command::Falsify { config, r, budget } => {
            let (cfg, input) = load(config)?;
            let out = approximation_falsifier(&cfg, *r, *budget, cli.seed)?;
            let witness = match &out.witness {
                Some(w) => serde_json::to_value(w)?,
                None => json!("none"),
            };
            let result = json!({
                "witness": witness,
                "r": r,
                "best_value": out.best_value,
                "best_lambda": out.best_lambda,
                "best_start": out.best_start,
                "starts": out.starts,
            });
            ctx.emit_json(stdout, input.as_deref(), result)?;
        }
        Command::Search {
            d,
            n,
            restarts,
            steps,
            target,
            initial_step,
            decay,
        } => {
            let mut spec = SearchSpec::new(*d, *n, *restarts, *steps, cli.seed);
            spec.target = *target;
            if let Some(s) = initial_step {
                spec.initial_step = *s;
            }
            if let Some(k) = decay {
                spec.decay = *k;
            }
            let r = maximize_min_norm(&spec)?;
            if r.counterexample_candidate {
                let path = ctx.sibling("counterexample_candidate.json");
                let transcript = enumerate(&r.best_config, (*d as f64 - 1.0).sqrt(), &ctx.policy)?;
                let doc = json!({
                    "manifest": ctx.manifest(None),
                    "config": r.best_config,
                    "enumeration": transcript.to_json_value(),
                });
                fs::write(&path, serde_json::to_string_pretty(&doc)?)?;
                eprintln!("counterexample candidate written to {}", path.display());
            }
            let result = json!({
                "spec": spec,
                "best_value": r.best_value,
                "best_restart": r.best_restart,
                "best_config": r.best_config,
                "exceeded_target": r.exceeded_target,
                "counterexample_candidate": r.counterexample_candidate,
                "history": r.history,
            });
            ctx.emit_json(stdout, None, result)?;
        }
        Command::Sweep {
            dmax,
            nmax,
            seeds,
            restarts,
            steps,
        } => {
            let rows = parity_sweep(&SweepSpec {
                d_max: *dmax,
                n_max: *nmax,
                seeds: (cli.seed..cli.seed + seeds).collect(),
                restarts: *restarts,
                steps: *steps,
            })?;
            ctx.emit_table(stdout, &rows)?;
        }
        Command::Decay {
            family,
            n,
            r,
            d,
            samples,
        } => {
            let rows = decay_table(*family, n, *r, *d, *samples, cli.seed, &ctx.policy)?;
            ctx.emit_table(stdout, &rows)?;
        }
        Command::Selftest { target } => {
            let checks = run_selftest(*target, cli.seed);
            let failed = checks.iter().filter(|c| !c.passed).count();
            ctx.emit_json(stdout, None, json!({ "checks": checks, "failed": failed }))?;
            return Ok(if failed == 0 { 0 } else { 1 });
        }
    }
    Ok(0)
}

struct Ctx<'a> {
    cli: &'a Cli,
    command_line: Vec<String>,
    policy: PrecisionPolicy,
}

impl Ctx<'_> {
    fn manifest(&self, input: Option<&[u8]>) -> RunManifest {
        RunManifest::new(self.command_line.clone(), self.cli.seed, &self.policy, input)
    }

    /// A file next to `--out`, or in the working directory.
    fn sibling(&self, name: &str) -> PathBuf {
        match self.cli.out.as_deref().and_then(Path::parent) {
            Some(dir) => dir.join(name),
            None => PathBuf::from(name),
        }
    }

    fn write(&self, stdout: &mut dyn Write, text: &str) -> Result<()> {
        match &self.cli.out {
            Some(path) => fs::write(path, text)?,
            None => writeln!(stdout, "{text}")?,
        }
        Ok(())
    }

    fn emit_json(&self, stdout: &mut dyn Write, input: Option<&[u8]>, result: Value) -> Result<()> {
        if self.cli.format == Some(Format::Csv) {
            return Err(Error::InvalidParameter(
                "this command only writes JSON; csv is available for sweep and decay".into(),
            ));
        }
        let doc = json!({ "manifest": self.manifest(input), "result": result });
        self.write(stdout, &serde_json::to_string_pretty(&doc)?)
    }

    /// Tables default to CSV, with the manifest on a leading `#` line.
    fn emit_table<R: Serialize>(&self, stdout: &mut dyn Write, rows: &[R]) -> Result<()> {
        if self.cli.format == Some(Format::Json) {
            let doc = json!({ "manifest": self.manifest(None), "result": rows });
            return self.write(stdout, &serde_json::to_string_pretty(&doc)?);
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
            .expect("csv output is utf-8");
        let text = format!("# manifest {}\n{}", serde_json::to_string(&self.manifest(None))?, body.trim_end());
        self.write(stdout, &text)
    }
}

/// `construct ortho 3 1` means `ortho:3,1`; `construct random 3 5` takes the seed from `--seed`.
fn construction_string(kind: &str, params: &[String], seed: u64) -> String {
    if params.is_empty() {
        return kind.to_string();
    }
    let sep = match kind {
        "ortho" | "tight" => ",",
        _ => ":",
    };
    let mut joined = params.join(sep);
    if kind == "random" && params.len() == 2 {
        joined = format!("{joined}:{seed}");
    }
    format!("{kind}:{joined}")
}

fn load(path: &Path) -> Result<(VectorConfig, Option<Vec<u8>>)> {
    let bytes = fs::read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::InvalidParameter(format!("{} is not utf-8", path.display())))?;
    Ok((VectorConfig::from_json(&text)?, Some(bytes)))
}

fn read_lambda(spec: &str, n: usize) -> Result<CoefficientVector> {
    if spec == "zeros" {
        return Ok(CoefficientVector::zeros(n));
    }
    let values: Vec<f64> = serde_json::from_str(&fs::read_to_string(spec)?)?;
    if values.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: values.len(),
        });
    }
    CoefficientVector::new(values)
}

/// Dispatches `--algo`; `auto` uses the parity balancer when it applies.
pub fn balance(
    cfg: &VectorConfig,
    lambda: &CoefficientVector,
    algo: Algo,
    epsilon: Option<f64>,
    zeta: Option<f64>,
    seed: u64,
) -> Result<BalanceReport> {
    let is_zero = lambda.values().iter().all(|&x| x == 0.0);
    let needs_zero = |name: &str| {
        if is_zero {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{name} balances the origin only; use --lambda zeros")))
        }
    };
    let d = cfg.dim();
    let mut params = match epsilon {
        Some(e) => ParityParams::with_epsilon(d, e)?,
        None => ParityParams::default_for(d),
    }
    .with_seed(seed);
    if let Some(z) = zeta {
        params.zeta = z;
    }
    match algo {
        Algo::Greedy => greedy_signs(cfg, lambda),
        Algo::Eliminate => approximate_point(cfg, lambda),
        Algo::Cluster => {
            needs_zero("cluster")?;
            cluster_and_pair(cfg, params.zeta)
        }
        Algo::Parity => {
            needs_zero("parity")?;
            parity_balance_with(cfg, &params)
        }
        Algo::Auto if is_zero && cfg.len() % 2 != d % 2 => parity_balance_with(cfg, &params),
        Algo::Auto => approximate_point(cfg, lambda),
    }
}

/// One row of the decay table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub family: &'static str,
    pub n: usize,
    pub hits: u64,
    /// Hits over assignments, summed over samples.
    pub probability: f64,
    pub probability_exact: String,
    pub samples: u64,
}

pub fn decay_table(
    family: Family,
    ns: &[usize],
    r: Option<f64>,
    d: usize,
    samples: u64,
    seed: u64,
    policy: &PrecisionPolicy,
) -> Result<Vec<DecayRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let (name, configs): (&'static str, Vec<VectorConfig>) = match family {
            Family::Exponential => ("exponential", vec![construct_exponential(n, DEFAULT_RATIO, policy)?]),
            Family::Ortho => {
                if n < d || n % 2 != d % 2 {
                    return Err(Error::InvalidParameter(format!(
                        "ortho family needs n >= d with n = d (mod 2), got n = {n}, d = {d}"
                    )));
                }
                let mut m = vec![1usize; d];
                m[0] += n - d;
                ("ortho", vec![construct_orthonormal_multiplicity(d, &m)?])
            }
            Family::Random => {
                let cfgs = (0..samples)
                    .map(|s| random_unit_config(d, n, seed.wrapping_add(s)))
                    .collect::<Result<_>>()?;
                ("random", cfgs)
            }
        };
        let radius = r.unwrap_or(match family {
            Family::Ortho => (d as f64 - 1e-6).sqrt(),
            _ => 1.0,
        });
        let mut hits = 0u64;
        let mut total = 0u64;
        for cfg in &configs {
            let rep = enumerate(cfg, radius, policy)?;
            hits += rep.hits;
            total += rep.total;
        }
        let exact = num_rational::Ratio::new(hits, total);
        rows.push(DecayRow {
            family: name,
            n,
            hits,
            probability: hits as f64 / total as f64,
            probability_exact: exact.to_string(),
            samples: configs.len() as u64,
        });
    }
    Ok(rows)
}
