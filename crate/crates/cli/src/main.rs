use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rough_kernel::circle::{Construction, GeometrySpec};
use rough_kernel::trignorms::{
    dirichlet_norm_with, fit_exponent, rudin_shapiro_sup_sweep, unconditionality_ratio_with,
};
use roughk::config::parse_big_n;
use roughk::emit::{emit_sweep, emit_verify, plots};
use roughk::{margins_non_increasing, run_sweep, sweep_fit, verify, RunConfig, Settings, SweepAxis, VerificationReport};

/// `println!` that exits quietly when stdout is closed (e.g. piped into `head`).
macro_rules! say {
    ($($arg:tt)*) => {
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    };
}

/// Build and certify the rough-kernel counterexample Ω_n on the unit circle.
#[derive(Parser, Debug)]
#[command(name = "roughk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Flat `key = value` config file; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Young function: power_log:BETA, log_quotient or custom_table:PATH
    #[arg(long, global = true)]
    phi: Option<String>,
    /// schedule (n from Ψ) or decoupled (n and N independent)
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Inverse arc length, e.g. 1e6 or 2^64
    #[arg(long = "N", global = true)]
    big_n: Option<String>,
    /// Number of atom pairs (decoupled mode)
    #[arg(long = "n", global = true)]
    n: Option<String>,
    /// Profile grid size
    #[arg(long, global = true)]
    grid: Option<String>,
    /// FFT oversampling for L^p norms
    #[arg(long, global = true)]
    oversample: Option<String>,
    /// Relative tolerance of the Luxemburg norm
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Comma-separated exponents, each > 2
    #[arg(long, global = true)]
    p: Option<String>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<String>,
    /// Comma-separated subset of csv,json,svg
    #[arg(long, global = true)]
    emit: Option<String>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build Ω_n and print its geometry
    Construct,
    /// Run every check and write the report
    Verify,
    /// Verify along a list of N or n values
    Sweep {
        #[arg(long, value_enum)]
        axis: Axis,
        /// Comma-separated axis values (N accepts 1e6 and 2^64)
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
    /// Rudin–Shapiro, Dirichlet and unconditionality-ratio norms
    Norms {
        /// Largest degree of the Rudin–Shapiro sup sweep
        #[arg(long, default_value_t = 4096)]
        n_max: usize,
    },
    /// Write the profile and ratio plots
    Plot,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Axis {
    #[value(name = "N")]
    BigN,
    #[value(name = "n")]
    SmallN,
}

impl Opts {
    fn settings(&self) -> Result<Settings, roughk::ConfigError> {
        let file = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("phi", &self.phi),
            ("mode", &self.mode),
            ("N", &self.big_n),
            ("n", &self.n),
            ("grid", &self.grid),
            ("oversample", &self.oversample),
            ("tol", &self.tol),
            ("p", &self.p),
            ("out", &self.out),
            ("emit", &self.emit),
            ("jobs", &self.jobs),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v.clone())?;
            }
        }
        Ok(file.merged(&flags))
    }
}

fn print_checks(report: &VerificationReport) {
    if let Some(s) = &report.construction {
        say!("N = {}, n = {}, c = {}", s.big_n, s.n, s.c.unwrap_or(f64::NAN));
    }
    for c in &report.checks {
        let status = match (c.skipped, c.passed) {
            (true, _) => "skip",
            (false, true) => "pass",
            (false, false) => "FAIL",
        };
        let measured = c.measured.map(|m| format!("{m:.6e}")).unwrap_or_else(|| "-".into());
        say!("{status:>4}  {:<22} measured {measured:>14}  threshold {:e}", c.name, c.threshold);
    }
    if let (Some(stage), Some(err)) = (&report.stage, &report.error) {
        say!("aborted in stage {stage}: {err}");
    }
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = match cli.opts.settings().and_then(|s| RunConfig::from_settings(&s)) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = cfg.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    match run(&cli.command, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: &Command, cfg: &RunConfig) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        Command::Construct => {
            let params = cfg.params()?;
            let cons = Construction::new(params, GeometrySpec::auto())?;
            say!("N = {}, n = {}, c = {}", cons.big_n(), cons.n(), cons.c);
            say!("directions: s = {}, t_start = {}, t_step = {}", cons.dirs.s, cons.dirs.t_start, cons.dirs.t_step);
            say!("  k  sign  direction (rad)");
            for k in 1..=2 * cons.n() {
                let sign = rough_kernel::circle::atom_sign(&cons.signs, k);
                say!("{k:>3}  {sign:>+4}  {:.12}", cons.direction(k).value());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify => {
            let outcome = verify(cfg);
            print_checks(&outcome.report);
            for path in emit_verify(&outcome, &cfg.emit, &cfg.out_dir)? {
                say!("wrote {}", path.display());
            }
            Ok(exit(outcome.report.all_passed()))
        }
        Command::Sweep { axis, values } => {
            let axis = match axis {
                Axis::BigN => SweepAxis::BigN(
                    values
                        .iter()
                        .map(|v| parse_big_n(v).ok_or_else(|| format!("bad N value `{v}`")))
                        .collect::<Result<_, _>>()?,
                ),
                Axis::SmallN => SweepAxis::SmallN(
                    values.iter().map(|v| v.trim().parse().map_err(|_| format!("bad n value `{v}`"))).collect::<Result<_, _>>()?,
                ),
            };
            let reports = run_sweep(cfg, &axis)?;
            say!("{:>24} {:>5} {:>12} {:>10} {:>10}  status", "N", "n", "margin", "sup_m", "ratio_p4");
            for r in &reports {
                let s = r.construction.clone().unwrap_or_default();
                let f = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
                let status = if r.aborted { "aborted" } else if r.all_passed() { "pass" } else { "FAIL" };
                say!("{:>24} {:>5} {:>12} {:>10} {:>10}  {status}", r.config.big_n, s.n, f(s.margin), f(s.sup_m), f(s.ratio_p4));
            }
            let fit = if matches!(axis, SweepAxis::SmallN(_)) { sweep_fit(&reports) } else { None };
            if let Some(fit) = &fit {
                say!("ratio_p4 ~ n^{:.4} (residual {:.4})", fit.slope, fit.residual);
            }
            if matches!(axis, SweepAxis::BigN(_)) {
                say!("margins non-increasing: {}", margins_non_increasing(&reports));
            }
            for path in emit_sweep(&reports, fit.as_ref(), &cfg.emit, &cfg.out_dir)? {
                say!("wrote {}", path.display());
            }
            Ok(exit(reports.iter().all(VerificationReport::all_passed)))
        }
        Command::Norms { n_max } => {
            let sweep = rudin_shapiro_sup_sweep(*n_max, 16.max(cfg.oversample))?;
            let (worst_n, worst) = sweep
                .iter()
                .enumerate()
                .map(|(i, s)| (i + 1, s.bound() / ((i + 1) as f64).sqrt()))
                .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            say!("Rudin–Shapiro: max (sup + slack)/√n = {worst:.6} at n = {worst_n} (n ≤ {n_max})");
            say!("{:>6} {}", "n", cfg.p_list.iter().map(|p| format!("{:>14}", format!("|D_n|_{p}"))).collect::<String>());
            for e in (2..=14).step_by(2) {
                let n = 1usize << e;
                let row: String = cfg
                    .p_list
                    .iter()
                    .map(|&p| dirichlet_norm_with(n, p, cfg.oversample).map(|v| format!("{v:>14.6}")))
                    .collect::<Result<_, _>>()?;
                say!("{n:>6} {row}");
            }
            for &p in &cfg.p_list {
                let samples = (4..=12)
                    .map(|e| unconditionality_ratio_with(1 << e, p, cfg.oversample).map(|r| (1usize << e, r)))
                    .collect::<Result<Vec<_>, _>>()?;
                let fit = fit_exponent(&samples)?;
                say!(
                    "p = {p}: ratio ~ {:.4}·n^{:.4} (target exponent {:.4}, residual {:.4})",
                    fit.intercept.exp(),
                    fit.slope,
                    0.5 - 1.0 / p,
                    fit.residual
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot => {
            let outcome = verify(cfg);
            let Some(plot) = &outcome.plot else {
                print_checks(&outcome.report);
                return Ok(ExitCode::FAILURE);
            };
            std::fs::create_dir_all(&cfg.out_dir)?;
            for (name, body) in plots(plot) {
                let path = cfg.out_dir.join(name);
                std::fs::write(&path, body)?;
                say!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
