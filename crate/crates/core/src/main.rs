//! `ltlab` command line: census, curve-scan, lt-count, bounds, twists and
//! simulate subcommands over the library.

use clap::{Parser, Subcommand};
use ltlab::chebotarev::Regime;
use ltlab::cli::{self, Command, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "ltlab", version, about = "Desk-scale Frobenius statistics lab")]
struct Args {
    /// Output directory for artifacts
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Record cache file (curve-scan and lt-count)
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// RNG seed for every randomised path
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Optional key=value config file; explicit flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Cli,
}

#[derive(Subcommand, Debug)]
enum Cli {
    /// Exact cardinality census of the group-scheme slices
    Census {
        /// Primes to census (comma separated)
        #[arg(long, value_delimiter = ',', default_values_t = [5u64, 7, 11, 13])]
        ell: Vec<u64>,
        /// Residue degrees of the splitting type, e.g. 1 or 1,1
        #[arg(long, value_delimiter = ',', default_values_t = [1usize])]
        n: Vec<usize>,
        /// Weight exponent c = k1 + k2 - 3
        #[arg(long, default_value_t = 1)]
        weight_exp: u64,
        /// Trace residue a for the diagonal slice
        #[arg(long, default_value_t = 0)]
        trace: u64,
    },
    /// Frobenius records for a curve list
    CurveScan {
        /// Curve list file (label : c0,c1,...); built-in set when omitted
        #[arg(long)]
        curves: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        pmax: u64,
    },
    /// Lang-Trotter counts against the bound curves
    LtCount {
        #[arg(long)]
        curves: Option<PathBuf>,
        /// Which curve of the list (default: first)
        #[arg(long)]
        curve: Option<String>,
        #[arg(long, default_value_t = 10000)]
        pmax: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [0i64])]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', default_values_t = [5u64, 13])]
        ell: Vec<u64>,
        /// x grid, comma separated
        #[arg(long, value_delimiter = ',')]
        x: Vec<u64>,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },
    /// Exponents and bound-curve tables
    Bounds {
        #[arg(long, value_delimiter = ',', default_values_t = [1u64])]
        n: Vec<u64>,
        /// unconditional | grh
        #[arg(long, default_value = "grh")]
        regime: String,
        #[arg(long, default_value_t = false)]
        a_zero: bool,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
    },
    /// Inner-twist detection
    Twists {
        /// Eigenvalue table CSV (p,coords...) over Q
        #[arg(long)]
        eigen: Option<PathBuf>,
        /// Built-in synthetic Q(sqrt d) system
        #[arg(long)]
        synthetic: Option<i64>,
        /// Character modulus bound M
        #[arg(long, default_value_t = 5)]
        modulus_bound: u64,
        /// Tolerated per-character failures (heuristic beyond 0)
        #[arg(long, default_value_t = 0)]
        twist_exceptions: usize,
        /// b_q/eps(q) table for the single-prime generation test
        #[arg(long)]
        b_table: Option<PathBuf>,
    },
    /// Seeded class-equidistribution stream
    Simulate {
        #[arg(long)]
        group_order: u64,
        /// label=size comma-separated
        #[arg(long, value_delimiter = ',')]
        class_sizes: Vec<String>,
        #[arg(long, default_value_t = 1000000)]
        x: u64,
    },
}

fn build_config(args: Args) -> Result<RunConfig, String> {
    let defaults = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
            cli::parse_config_file(&text)
        }
        None => Default::default(),
    };
    let lookup = |key: &str| defaults.get(key).cloned();

    let command = match args.command {
        Cli::Census {
            ell,
            n,
            weight_exp,
            trace,
        } => Command::Census {
            ells: ell,
            degrees: n,
            weight_exponent: weight_exp,
            trace_residue: trace,
        },
        Cli::CurveScan { curves, pmax } => Command::CurveScan {
            curves_file: curves.or_else(|| lookup("curves").map(PathBuf::from)),
            pmax,
        },
        Cli::LtCount {
            curves,
            curve,
            pmax,
            a,
            ell,
            x,
            eps,
        } => {
            let x_grid = if x.is_empty() {
                match lookup("x") {
                    Some(v) => v
                        .split(',')
                        .map(|s| s.trim().parse().map_err(|_| format!("bad x value {s}")))
                        .collect::<Result<Vec<u64>, _>>()?,
                    None => vec![pmax / 10, pmax / 3, pmax],
                }
            } else {
                x
            };
            Command::LtCount {
                curves_file: curves.or_else(|| lookup("curves").map(PathBuf::from)),
                curve_label: curve,
                pmax,
                a_values: a,
                ells: ell,
                x_grid,
                epsilon: eps,
            }
        }
        Cli::Bounds {
            n,
            regime,
            a_zero,
            eps,
            x,
        } => Command::Bounds {
            ns: n,
            regime: match regime.as_str() {
                "unconditional" => Regime::Unconditional,
                "grh" => Regime::Grh,
                other => return Err(format!("unknown regime {other}")),
            },
            a_zero,
            epsilon: eps,
            x_grid: x,
        },
        Cli::Twists {
            eigen,
            synthetic,
            modulus_bound,
            twist_exceptions,
            b_table,
        } => Command::Twists {
            eigen_file: eigen,
            synthetic_d: synthetic,
            modulus_bound,
            exceptions: twist_exceptions,
            b_table_file: b_table,
        },
        Cli::Simulate {
            group_order,
            class_sizes,
            x,
        } => {
            let mut sizes = Vec::new();
            for spec in class_sizes {
                let (label, size) = spec
                    .split_once('=')
                    .ok_or_else(|| format!("class size {spec} is not label=size"))?;
                sizes.push((
                    label.to_string(),
                    size.parse().map_err(|_| format!("bad size in {spec}"))?,
                ));
            }
            Command::Simulate {
                group_order,
                class_sizes: sizes,
                x,
            }
        }
    };
    Ok(RunConfig {
        command,
        out_dir: args.out,
        cache_path: args.cache,
        seed: args.seed,
        threads: args.threads,
    })
}

fn main() -> ExitCode {
    // exit 1 on every validation problem, including flag parsing; 2 is
    // reserved for arithmetic inconsistencies surfaced by inner modules
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let config = match build_config(args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: code=validation {msg}");
            return ExitCode::from(1);
        }
    };
    match cli::run(&config) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            for artifact in &outcome.artifacts {
                println!("wrote {}", artifact.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            eprintln!(
                "error: code={} {e}",
                if code == 2 {
                    "arithmetic"
                } else {
                    "validation"
                }
            );
            ExitCode::from(code as u8)
        }
    }
}
