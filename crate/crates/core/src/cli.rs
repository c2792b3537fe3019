//! The `trk` command line. Every run writes one JSON document to stdout or
//! `--out`. Exit codes: 0 success, 1 property false, 2 usage or input error,
//! 3 internal invariant failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance;
use crate::algebra::io::{read_basis, read_tensor};
use crate::algebra::{PrimeField, SubspaceBasis};
use crate::error::{Error, Result};
use crate::extract::{extract_subspace, verify_certificate, ExtractionCertificate};
use crate::rank::{arank, bias, bias_on_axis, matrix_rank, prank_oracle, PartitionRank};
use crate::szemeredi::{
    independence_experiment, randomized_szemeredi_demo, tail_bound_check, trial_rng, SimParams, TailMode,
};

#[derive(Parser, Debug)]
#[command(name = "trk", version, about = "Analytic rank of tensors over prime fields")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "TRK_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact bias of a tensor.
    Bias {
        #[arg(short, long)]
        input: PathBuf,
        /// Contract this axis (0-based) instead of the first.
        #[arg(long)]
        axis: Option<usize>,
    },
    /// Analytic rank of a tensor.
    Arank {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Partition rank of a tiny tensor.
    Prank {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        r_max: usize,
    },
    /// Rank of a matrix.
    Mrank {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Extract a high-rank subspace and emit its certificate.
    Extract {
        #[command(flatten)]
        source: BasisSource,
        #[arg(short, long)]
        t: usize,
        #[arg(short, long)]
        r: usize,
    },
    /// Re-check a certificate.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Independence of Veronese images of random points.
    SzIndependence {
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Random differences, blocker sets and progression scans.
    SzDemo {
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Tail-bound links for a certificate or a basis file.
    TailCheck {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: TailMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Only criteria whose id contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct BasisSource {
    /// Basis JSON file.
    #[arg(short, long, conflicts_with_all = ["full", "random_dim"])]
    pub input: Option<PathBuf>,
    /// Use the full space F_p^{n×⋯×n}.
    #[arg(long, requires_all = ["p", "d", "n"])]
    pub full: bool,
    /// Use a seeded random subspace of this dimension.
    #[arg(long, requires_all = ["p", "d", "n"], conflicts_with = "full")]
    pub random_dim: Option<usize>,
    #[arg(short, long)]
    pub p: Option<u32>,
    #[arg(short, long)]
    pub d: Option<usize>,
    #[arg(short, long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct SimArgs {
    #[arg(short, long)]
    pub p: u32,
    /// Progression length (tensor order k - 1).
    #[arg(short, long, conflicts_with = "d")]
    pub k: Option<usize>,
    /// Tensor order (progression length d + 1).
    #[arg(short, long)]
    pub d: Option<usize>,
    #[arg(short, long)]
    pub n: usize,
    /// Random points per trial.
    #[arg(short, long)]
    pub s: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// The constant C in m - C·(log_p n)^2·n^(k-2).
    #[arg(long, default_value_t = 0.0)]
    pub c_knob: f64,
}

impl SimArgs {
    fn params(&self) -> Result<SimParams> {
        let k = match (self.k, self.d) {
            (Some(k), None) => k,
            (None, Some(d)) => d + 1,
            _ => return Err(Error::Parse("give exactly one of -k or -d".into())),
        };
        Ok(SimParams {
            p: self.p,
            k,
            n: self.n,
            samples: self.s,
            trials: self.trials,
            seed: self.seed,
            c_knob: self.c_knob,
        })
    }
}

/// A JSON report plus whether the checked property held.
struct Outcome {
    report: Value,
    ok: bool,
}

fn ok<T: Serialize>(v: &T) -> Result<Outcome> {
    Ok(Outcome {
        report: serde_json::to_value(v)?,
        ok: true,
    })
}

fn load_basis(src: &BasisSource) -> Result<SubspaceBasis> {
    if let Some(path) = &src.input {
        return read_basis(path);
    }
    let (Some(p), Some(d), Some(n)) = (src.p, src.d, src.n) else {
        return Err(Error::Parse("give -i FILE, or --full / --random-dim with -p, -d and -n".into()));
    };
    let field = PrimeField::new(p)?;
    match src.random_dim {
        Some(dim) => SubspaceBasis::random(field, n, d, dim, &mut trial_rng(src.seed, 0)),
        None if src.full => Ok(SubspaceBasis::full_space(field, n, d)),
        None => Err(Error::Parse("give -i FILE, --full or --random-dim".into())),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Bias { input, axis } => {
            let t = read_tensor(input)?;
            match axis {
                Some(a) => ok(&bias_on_axis(&t, *a)?),
                None => ok(&bias(&t)),
            }
        }
        Command::Arank { input } => {
            let t = read_tensor(input)?;
            ok(&json!({ "arank": arank(&t), "bias": bias(&t) }))
        }
        Command::Prank { input, r_max } => {
            let t = read_tensor(input)?;
            match prank_oracle(&t, *r_max)? {
                PartitionRank::Exact(r) => ok(&json!({ "prank": r, "exact": true })),
                PartitionRank::Exceeds(r) => ok(&json!({ "prank": null, "exceeds": r, "exact": false })),
            }
        }
        Command::Mrank { input } => ok(&json!({ "rank": matrix_rank(&read_tensor(input)?)? })),
        Command::Extract { source, t, r } => {
            let v = load_basis(source)?;
            ok(&extract_subspace(&v, *t, *r)?)
        }
        Command::Verify { input } => {
            let cert: ExtractionCertificate = serde_json::from_value(read_json(input)?)?;
            let report = verify_certificate(&cert);
            Ok(Outcome {
                ok: report.ok,
                report: serde_json::to_value(&report)?,
            })
        }
        Command::SzIndependence { sim } => ok(&independence_experiment(&sim.params()?)?),
        Command::SzDemo { sim } => {
            let report = randomized_szemeredi_demo(&sim.params()?)?;
            let good = report.aggregate.all_ap_free != Some(false) && report.aggregate.all_cw_passed != Some(false);
            Ok(Outcome {
                report: serde_json::to_value(&report)?,
                ok: good,
            })
        }
        Command::TailCheck { input, mode, seed } => {
            let doc = read_json(input)?;
            let report = if doc.get("w_basis").is_some() {
                let cert: ExtractionCertificate = serde_json::from_value(doc)?;
                tail_bound_check(&cert.w_basis, Some(&cert.threshold), *mode, *seed)?
            } else {
                let basis: SubspaceBasis = serde_json::from_value(doc)?;
                tail_bound_check(&basis, None, *mode, *seed)?
            };
            Ok(Outcome {
                ok: report.holds,
                report: serde_json::to_value(&report)?,
            })
        }
        Command::Selftest { filter } => {
            let results = acceptance::run_all(filter.as_deref());
            let all = results.iter().all(|r| r.passed);
            Ok(Outcome {
                report: json!({ "passed": all, "criteria": results }),
                ok: all,
            })
        }
    }
}

fn error_report(e: &Error) -> (Value, u8) {
    let (kind, code) = match e {
        Error::Invariant { .. } => ("invariant", 3),
        Error::Shape(_) => ("shape", 2),
        Error::Domain(_) => ("domain", 2),
        Error::Precondition(_) => ("precondition", 2),
        Error::Unsupported(_) => ("unsupported", 2),
        Error::ResourceGuard(_) => ("resource_guard", 2),
        Error::Parse(_) => ("parse", 2),
        Error::Io(_) => ("io", 2),
        Error::Json(_) => ("json", 2),
    };
    let step = match e {
        Error::Invariant { step, .. } => Some(*step),
        _ => None,
    };
    (json!({ "error": { "kind": kind, "step": step, "message": e.to_string() } }), code)
}

fn emit(doc: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                // a closed pipe (e.g. `| head`) is not worth an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

/// Run a parsed command line and return the process exit code.
pub fn run(cli: Cli) -> ExitCode {
    if cli.threads > 0 {
        // fails only if a global pool already exists, in which case it is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let (doc, code) = match dispatch(&cli.command) {
        Ok(outcome) => (outcome.report, if outcome.ok { 0 } else { 1 }),
        Err(e) => error_report(&e),
    };
    if let Err(e) = emit(&doc, cli.out.as_deref()) {
        eprintln!("trk: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

pub fn main() -> ExitCode {
    run(Cli::parse())
}
