use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use areatrap::constrained::{save_solution, load_path, solve_constrained, Method, SolverOptions};
use areatrap::harness::plot::{self, PlotKind};
use areatrap::harness::{
    fit_exponent, oracle_check, read_records, run_trial, sweep, write_records, ExperimentConfig,
    OracleCheckParams, SweepOptions,
};
use areatrap::limitshape::LimitShape;
use areatrap::lpp::lpp_length;
use areatrap::roughness::analyze;
use areatrap::sampler::{load_cloud, sample_poisson_square, save_cloud};
use areatrap::{Error, Point, Result, SeedSpec};

const EXIT_VALIDATION: u8 = 1;
const EXIT_INTERNAL: u8 = 2;
const EXIT_ORACLE: u8 = 3;

#[derive(Parser)]
#[command(name = "areatrap", version, about = "Area-trapping polymer simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a Poisson cloud on [0,n]² and write it to a file.
    Sample {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        seed: u64,
        /// Trial index mixed into the seed.
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the area-constrained problem on a cloud file or a fresh sample.
    Solve {
        #[arg(long, conflicts_with_all = ["n", "seed"], required_unless_present_all = ["n", "seed"])]
        cloud: Option<PathBuf>,
        #[arg(long, requires = "seed")]
        n: Option<f64>,
        #[arg(long, requires = "n")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = "auto", value_parser = parse_method)]
        mode: Method,
        /// Interior-sector margin for the facet statistics.
        #[arg(long, default_value_t = std::f64::consts::PI / 10.0)]
        delta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print c_α and w_α; optionally write ψ_α on [0,1].
    LimitShape {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        curve_out: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Run one trial of a config and print its results row.
    Trial {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        index: u64,
    },
    /// Run every trial of a config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Results CSV; defaults to the config's `outputs.results`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Fit the growth exponent of a results column against n.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        field: String,
    },
    /// Render an SVG figure.
    Plot {
        /// Results CSV (exponents, lln) or solved-path files (shape).
        #[arg(long = "in")]
        input: Vec<PathBuf>,
        #[arg(long, value_parser = parse_kind)]
        kind: PlotKind,
        #[arg(long)]
        out: PathBuf,
        /// Limit shapes to draw (shape plots).
        #[arg(long)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 400)]
        samples: usize,
    },
    /// Compare the solvers with brute force on tiny seeded clouds.
    OracleCheck {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        max_points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> std::result::Result<PlotKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Sample { n, seed, trial, out } => {
            let cloud = sample_poisson_square(n, SeedSpec::new(seed, trial))?;
            save_cloud(&cloud, &out)?;
            println!("{} points in [0,{n}]²", cloud.count());
        }
        Command::Solve {
            cloud,
            n,
            seed,
            trial,
            alpha,
            mode,
            delta,
            out,
        } => {
            let cloud = match (cloud, n, seed) {
                (Some(path), _, _) => load_cloud(path)?,
                (None, Some(n), Some(seed)) => sample_poisson_square(n, SeedSpec::new(seed, trial))?,
                _ => return Err(Error::Validation("give --cloud or both --n and --seed".into())),
            };
            let n = cloud.n();
            let sol = solve_constrained(&cloud, n, alpha, &SolverOptions::with_mode(mode))?;
            let report = analyze(&sol.path, n, delta)?;
            let l = lpp_length(&cloud, Point::ORIGIN, Point::new(n, n))?;
            println!("points={}", cloud.count());
            println!("L_unconstrained={l}");
            println!("L_alpha={}", sol.length);
            println!("threshold={}", sol.threshold);
            println!("achieved_area={}", sol.achieved_area);
            println!("upper_bound={}", sol.upper_bound);
            println!("gap={}", sol.gap);
            println!("method={}", sol.method);
            println!("mfl_interior={}", report.mfl_interior);
            println!("mlr_interior={}", report.mlr_interior);
            if let Some(out) = out {
                save_solution(&sol, out)?;
            }
        }
        Command::LimitShape {
            alpha,
            curve_out,
            samples,
        } => {
            let shape = LimitShape::new(alpha)?;
            println!("alpha,c,w");
            println!("{},{},{}", shape.alpha, shape.c, shape.w);
            if let Some(path) = curve_out {
                if samples < 1 {
                    return Err(Error::Validation("--samples must be at least 1".into()));
                }
                let mut text = String::from("x,psi\n");
                for i in 0..=samples {
                    let x = i as f64 / samples as f64;
                    text.push_str(&format!("{x},{}\n", shape.eval(x)));
                }
                write_file(&path, &text)?;
            }
        }
        Command::Trial { config, index } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rec = run_trial(&cfg, index)?;
            write_records(std::io::stdout().lock(), &[rec])?;
        }
        Command::Sweep { config, out, threads } => {
            let cfg = ExperimentConfig::load(&config)?;
            let out = match (out, &cfg.outputs.results) {
                (Some(p), _) => p,
                (None, Some(p)) => cfg.resolve(p),
                (None, None) => {
                    return Err(Error::Validation("give --out or set outputs.results in the config".into()))
                }
            };
            let summary = sweep(
                &cfg,
                &out,
                &SweepOptions {
                    threads,
                    abort_after: None,
                },
            )?;
            eprintln!(
                "{} trials ({} solved, {} infeasible) on {} threads",
                summary.trials, summary.solved, summary.infeasible, summary.threads
            );
            for p in &summary.written {
                eprintln!("wrote {}", p.display());
            }
        }
        Command::Fit { input, field } => {
            let records = read_records(open(&input)?)?;
            let fit = fit_exponent(&records, &field)?;
            for n in &fit.excluded {
                eprintln!("warning: n={n} excluded (nonpositive mean)");
            }
            println!("field,slope,intercept,stderr_slope,r_squared,points");
            println!(
                "{},{},{},{},{},{}",
                fit.field,
                fit.slope,
                fit.intercept,
                fit.stderr_slope,
                fit.r_squared,
                fit.points.len()
            );
        }
        Command::Plot {
            input,
            kind,
            out,
            alpha,
            samples,
        } => {
            let fig = match kind {
                PlotKind::Shape => {
                    let paths = input
                        .iter()
                        .map(|p| Ok((p.display().to_string(), load_path(p)?)))
                        .collect::<Result<Vec<_>>>()?;
                    plot::shape_figure(&alpha, &paths, samples)?
                }
                PlotKind::Exponents | PlotKind::Lln => {
                    let [path] = input.as_slice() else {
                        return Err(Error::Validation("expected exactly one --in results file".into()));
                    };
                    let records = read_records(open(path)?)?;
                    if kind == PlotKind::Lln {
                        plot::lln_figure(&records)?
                    } else {
                        plot::exponents_figure(&records, plot::EXPONENT_FIELDS)?
                    }
                }
            };
            write_file(&out, &fig.to_svg()?)?;
        }
        Command::OracleCheck {
            trials,
            max_points,
            seed,
        } => {
            let report = oracle_check(&OracleCheckParams {
                trials,
                max_points,
                seed,
                ..Default::default()
            })?;
            println!(
                "clouds={} lpp_checks={} constrained_checks={} feasible={} gap_zero={} ({:.1}%) mismatches={}",
                report.clouds,
                report.lpp_checks,
                report.constrained_checks,
                report.feasible,
                report.gap_zero,
                100.0 * report.gap_zero_fraction(),
                report.mismatches.len()
            );
            for m in &report.mismatches {
                println!(
                    "mismatch trial={} seed=({}, {}): {}",
                    m.trial, m.seed.master_seed, m.seed.trial_index, m.what
                );
            }
            if !report.mismatches.is_empty() {
                return Ok(EXIT_ORACLE);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_VALIDATION } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_INTERNAL
            })
        }
    }
}
