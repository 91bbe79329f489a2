//! `kprod` command-line front end.

pub mod builtin;
pub mod sweep;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kprod_core::partitions::{count_bounded, count_genuine, enumerate_bounded, enumerate_genuine};
use kprod_core::pi::{pi_lower_bound, pi_project, PiOptions};
use kprod_core::roof::{roof_upper, RoofOptions};
use kprod_core::state::io;
use kprod_core::{DensityOperator, MeasureParam, MeasureRegistry, PureState, StateData, Tolerances};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] kprod_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Parser)]
#[command(name = "kprod", version, about = "Partition-based multipartite entanglement measures")]
pub struct Cli {
    /// Eigenvalues at or below this are treated as zero.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_rank: f64,
    /// Most negative eigenvalue tolerated in a density operator.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_psd: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a measure on a pure state and print the report as JSON.
    Measure(MeasureArgs),
    /// List the partitions with every block of size at most k.
    Partitions(PartitionArgs),
    /// Sweep phitheta over a grid of angles and print CSV.
    Sweep(SweepArgs),
    /// Project onto the permutation-invariant part, optionally with the lower bound.
    Pi(PiArgs),
    /// Upper-bound the convex roof of a measure at a mixed state.
    Roof(RoofArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// JSON state file.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub state: Option<PathBuf>,
    /// Built-in state such as w4, ghz(3), phi1, phitheta:30.
    #[arg(long)]
    pub builtin: Option<String>,
}

impl StateArgs {
    fn load(&self, tol: &Tolerances) -> Result<StateData, CliError> {
        match (&self.state, &self.builtin) {
            (Some(path), _) => Ok(io::read_file(path, tol)?),
            (None, Some(name)) => Ok(StateData::Pure(builtin::parse(name)?)),
            (None, None) => Err(CliError::Usage("give --state or --builtin".into())),
        }
    }

    fn load_pure(&self, tol: &Tolerances) -> Result<PureState, CliError> {
        match self.load(tol)? {
            StateData::Pure(s) => Ok(s),
            StateData::Mixed(op) => op
                .as_pure(tol)?
                .ok_or_else(|| CliError::Usage("state is mixed; use `kprod roof` for mixed states".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// pe, gpe, genuine-pe or genuine-gpe.
    #[arg(long, default_value = "pe")]
    pub measure: String,
    /// Power p (q > 1 or 0 <= alpha < 1); fractions like 1/3 are accepted.
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long)]
    pub k: usize,
    /// Constant reported by genuine-pe when no partition is admitted.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Constant reported by genuine-gpe when no partition is admitted.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
}

impl ParamArgs {
    fn param(&self) -> Result<MeasureParam, CliError> {
        Ok(MeasureParam::new(parse_real(&self.p)?, self.k)?)
    }

    fn registry(&self) -> Result<MeasureRegistry, CliError> {
        Ok(MeasureRegistry::with_builtins(self.a, self.b)?)
    }
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub param: ParamArgs,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Only partitions whose largest block has size exactly k.
    #[arg(long)]
    pub genuine: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// State family; only phitheta is built in.
    #[arg(long, default_value = "phitheta")]
    pub family: String,
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    #[arg(long, default_value_t = 90.0)]
    pub stop: f64,
    #[arg(long, default_value_t = 91)]
    pub steps: usize,
    /// measure:p:k, repeatable.
    #[arg(long = "series", required = true)]
    pub series: Vec<String>,
}

#[derive(Debug, Args)]
pub struct PiArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Also report the lower bound; needs a pure state and --k.
    #[arg(long)]
    pub bound: bool,
    #[arg(long, default_value = "pe")]
    pub measure: String,
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long)]
    pub k: Option<usize>,
    /// Random product unitaries tried besides the identity.
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct RoofArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub param: ParamArgs,
    /// Ensemble size; defaults to rank + 2.
    #[arg(long)]
    pub members: Option<usize>,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub max_sweeps: usize,
}

/// Parses `2`, `0.5` or `1/3`.
pub fn parse_real(text: &str) -> Result<f64, CliError> {
    let bad = || CliError::Usage(format!("`{text}` is not a number"));
    match text.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            Ok(a / b)
        }
        None => text.trim().parse().map_err(|_| bad()),
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

impl Cli {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            rank: self.tol_rank,
            psd: self.tol_psd,
            ..Tolerances::default()
        }
    }

    /// Runs the command and returns what goes to standard output.
    pub fn run(&self) -> Result<String, CliError> {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(t) = self.threads {
            pool = pool.num_threads(t);
        }
        pool.build()?.install(|| self.dispatch())
    }

    fn dispatch(&self) -> Result<String, CliError> {
        let tol = self.tolerances();
        match &self.command {
            Command::Measure(args) => {
                let state = args.state.load_pure(&tol)?;
                let measure = args.param.registry()?.get(&args.param.measure)?;
                let report = measure.evaluate(&state, &args.param.param()?, &tol)?;
                Ok(pretty(&report.to_json()))
            }
            Command::Partitions(args) => {
                let mut out = String::new();
                let count = if args.genuine {
                    enumerate_genuine(args.n, args.k)?.for_each(|p| out.push_str(&format!("{p}\n")));
                    count_genuine(args.n, args.k)?
                } else {
                    enumerate_bounded(args.n, args.k)?.for_each(|p| out.push_str(&format!("{p}\n")));
                    count_bounded(args.n, args.k)?
                };
                out.push_str(&format!("# count {count}\n"));
                Ok(out)
            }
            Command::Sweep(args) => {
                if args.family != "phitheta" {
                    return Err(CliError::Usage(format!("unknown family `{}`", args.family)));
                }
                let spec = sweep::SweepSpec {
                    start: args.start,
                    stop: args.stop,
                    steps: args.steps,
                    series: args.series.iter().map(|s| sweep::Series::parse(s)).collect::<Result<_, _>>()?,
                };
                let registry = MeasureRegistry::with_builtins(1.0, 1.0)?;
                sweep::run(&spec, &registry, &tol)?.to_csv()
            }
            Command::Pi(args) => self.pi(args, &tol),
            Command::Roof(args) => {
                let op: DensityOperator = args.state.load(&tol)?.to_density();
                let measure = args.param.registry()?.get(&args.param.measure)?;
                let options = RoofOptions {
                    members: args.members,
                    restarts: args.restarts,
                    seed: self.seed,
                    max_sweeps: args.max_sweeps,
                    ..RoofOptions::default()
                };
                let est = roof_upper(&op, measure.as_ref(), &args.param.param()?, &options, &tol)?;
                Ok(pretty(&est.to_json()))
            }
        }
    }

    fn pi(&self, args: &PiArgs, tol: &Tolerances) -> Result<String, CliError> {
        let data = args.state.load(tol)?;
        let projected = pi_project(&data.to_density())?;
        let mut out = json!({ "projected": io::density_to_value(&projected) });
        if args.bound {
            let k = args.k.ok_or_else(|| CliError::Usage("--bound needs --k".into()))?;
            if !matches!(args.measure.as_str(), "pe" | "gpe") {
                return Err(CliError::Usage("the lower bound supports pe and gpe".into()));
            }
            let state = match data {
                StateData::Pure(s) => s,
                StateData::Mixed(op) => op
                    .as_pure(tol)?
                    .ok_or_else(|| CliError::Usage("--bound needs a pure state".into()))?,
            };
            let measure = MeasureRegistry::with_builtins(1.0, 1.0)?.get(&args.measure)?;
            let param = MeasureParam::new(parse_real(&args.p)?, k)?;
            let options = PiOptions {
                samples: args.samples,
                seed: self.seed,
                ..PiOptions::default()
            };
            let bound = pi_lower_bound(&state, measure.as_ref(), &param, &options, tol)?;
            out["bound"] = bound.to_json();
        }
        Ok(pretty(&out))
    }
}
