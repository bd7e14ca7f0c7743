//! Command-line front end: `run`, `sweep`, `constants` and `validate`.
//!
//! Exit status is 0 on success, 1 for usage errors (bad flags, unknown
//! use-case, malformed override) and 2 for runtime failures. Failures are
//! reported on stderr as one line `error kind=<kind> message="<text>"`.

use crate::global::{run_global, write_global_csv};
use crate::harness::{
    build_usecase, check_invariants, default_axes, emit_contour, output_header, run_sweep, Axis,
    HarnessError, Scenario, SweepSpec, Tier,
};
use crate::networked::{run_networked, write_networked_csv};
use crate::reduced::{
    delta_asymptotic, delta_dot_initial, reduced_constants, run_reduced, write_reduced_csv,
};
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "lanchester-c2",
    version,
    about = "Lanchester combat coupled to Kuramoto-Sakaguchi C2 dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one scenario and write its trajectory CSV.
    Run {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = "global")]
        tier: Tier,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Outcome grid over two parameters; writes grid.csv and plot_grid.py.
    Sweep {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = "global")]
        tier: Tier,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// `path:min:max:steps`; `path` may join keys with `+`.
        #[arg(long)]
        axis1: Option<String>,
        #[arg(long)]
        axis2: Option<String>,
        /// Overrides the step count of both axes.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the reduced-model constants, the fixed point and the initial drift.
    Constants {
        #[command(flatten)]
        src: Source,
    },
    /// Run the invariant suite on both the global and networked tiers.
    Validate {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Scenario TOML file.
    #[arg(long, conflicts_with = "usecase")]
    scenario: Option<PathBuf>,
    /// Built-in use-case 1, 2 or 3.
    #[arg(long)]
    usecase: Option<u32>,
    /// `path=value` override, repeatable.
    #[arg(long = "set", value_name = "PATH=VALUE")]
    sets: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "t-final")]
    t_final: Option<f64>,
}

impl Source {
    fn load(&self) -> Result<Scenario, CliError> {
        let mut sets = self.sets.clone();
        if let Some(seed) = self.seed {
            sets.push(format!("seed={seed}"));
        }
        if let Some(t) = self.t_final {
            sets.push(format!("t_final={t:e}"));
        }
        match (&self.scenario, self.usecase) {
            (Some(path), None) => Ok(Scenario::load(path)?.with_overrides(&sets)?),
            (None, Some(id)) => Ok(build_usecase(id, &sets)?),
            _ => Err(CliError::Usage(
                "give exactly one of --scenario FILE or --usecase N".into(),
            )),
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Harness(HarnessError),
    Invariant(String),
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        CliError::Harness(e)
    }
}

impl From<crate::error::ModelError> for CliError {
    fn from(e: crate::error::ModelError) -> Self {
        CliError::Harness(e.into())
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Harness(e) => e.kind(),
            CliError::Invariant(_) => "invariant",
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Harness(HarnessError::UnknownUseCase(_) | HarnessError::Override(_)) => 1,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Invariant(m) => m.clone(),
            CliError::Harness(e) => e.to_string(),
        }
    }
}

fn error_line(kind: &str, message: &str) -> String {
    let escaped = message
        .replace('\\', "\\\\")
        .replace('"', "\\\"")
        .replace('\n', " ");
    format!("error kind={kind} message=\"{escaped}\"")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| {
        CliError::Harness(HarnessError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Harness(HarnessError::Io {
        path: "<csv>".into(),
        source: e.into(),
    })
}

fn winner(p_final: f64) -> &'static str {
    if p_final > 0.0 {
        "blue"
    } else if p_final < 0.0 {
        "red"
    } else {
        "draw"
    }
}

fn cmd_run(src: &Source, tier: Tier, out_dir: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let scn = src.load()?;
    let t_final = scn.t_final;
    let settings = scn.integrator_settings(t_final);
    let mut body = Vec::new();
    let p_final = match tier {
        Tier::Global => {
            let run = run_global(&scn.global()?, t_final, &settings)?;
            write_global_csv(&mut body, &run).map_err(csv_err)?;
            run.p_final
        }
        Tier::Reduced => {
            let run = run_reduced(&scn.global()?, t_final, &settings)?;
            write_reduced_csv(&mut body, &run).map_err(csv_err)?;
            run.p_final
        }
        Tier::Networked => {
            let net = scn.networked()?;
            let run = run_networked(&net, t_final, &settings)?;
            write_networked_csv(&mut body, &net, &run).map_err(csv_err)?;
            run.p_final
        }
    };
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let path = out_dir.join(format!("{}_{}.csv", scn.name, tier.name()));
    let header = output_header(
        &scn,
        &[
            ("tier", tier.name().into()),
            ("t_final", t_final.to_string()),
        ],
    );
    let mut text = header.into_bytes();
    text.extend(body);
    std::fs::write(&path, text).map_err(io_err(&path))?;
    writeln!(
        out,
        "tier={} p_final={p_final:.6} winner={} file={}",
        tier.name(),
        winner(p_final),
        path.display()
    )
    .map_err(io_err(Path::new("<stdout>")))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    src: &Source,
    tier: Tier,
    out_dir: &Path,
    axis1: Option<&str>,
    axis2: Option<&str>,
    steps: Option<usize>,
    workers: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let scn = src.load()?;
    let defaults = src.usecase.map(default_axes).transpose()?;
    let pick =
        |given: Option<&str>, fallback: Option<Axis>, which: &str| -> Result<Axis, CliError> {
            match (given, fallback) {
                (Some(text), _) => Axis::parse(text).map_err(|e| CliError::Usage(e.to_string())),
                (None, Some(ax)) => Ok(ax),
                (None, None) => Err(CliError::Usage(format!(
                    "--{which} is required without --usecase"
                ))),
            }
        };
    let mut a1 = pick(axis1, defaults.as_ref().map(|d| d.0.clone()), "axis1")?;
    let mut a2 = pick(axis2, defaults.map(|d| d.1), "axis2")?;
    if let Some(n) = steps {
        a1.steps = n;
        a2.steps = n;
    }
    let mut spec = SweepSpec::new(scn, tier, a1, a2);
    spec.workers =
        workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let grid = run_sweep(&spec)?;
    emit_contour(&grid, out_dir)?;
    let failed = grid.cells.iter().filter(|c| !c.is_ok()).count();
    let (blue, red) = grid.win_fractions();
    writeln!(
        out,
        "tier={} cells={} failed={failed} blue_fraction={blue:.4} red_fraction={red:.4} out={}",
        tier.name(),
        grid.cells.len(),
        out_dir.display()
    )
    .map_err(io_err(Path::new("<stdout>")))?;
    Ok(())
}

fn cmd_constants(src: &Source, out: &mut dyn Write) -> Result<(), CliError> {
    let scn = src.load()?;
    let rc = reduced_constants(&scn.global()?);
    let asym = match delta_asymptotic(&rc) {
        Ok(d) => format!("{d:.6}"),
        Err(_) => "n/a".into(),
    };
    let text = format!(
        "C={:.6}\nS={:.6}\nK={:.6e}\nomega_bar_B={:.6}\nomega_bar_R={:.6}\nd_T_BR={}\nd_T_RB={}\nDelta_inf={asym}\nDelta_dot0={:.6}\n",
        rc.c,
        rc.s,
        rc.k,
        rc.omega_bar_b,
        rc.omega_bar_r,
        rc.d_t_br,
        rc.d_t_rb,
        delta_dot_initial(&rc)
    );
    out.write_all(text.as_bytes())
        .map_err(io_err(Path::new("<stdout>")))?;
    Ok(())
}

fn cmd_validate(src: &Source, out: &mut dyn Write) -> Result<(), CliError> {
    let scn = src.load()?;
    let report = check_invariants(&scn, scn.t_final)?;
    let mut text = String::new();
    for c in &report.checks {
        text.push_str(&format!(
            "{} {} {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    out.write_all(text.as_bytes())
        .map_err(io_err(Path::new("<stdout>")))?;
    if report.all_passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        Err(CliError::Invariant(format!(
            "violated: {}",
            names.join(", ")
        )))
    }
}

/// Runs the tool on `args` (including the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the exit status.
pub fn cli_main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = writeln!(
                        err,
                        "{}",
                        error_line("usage", e.render().to_string().trim())
                    );
                    1
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Run {
            src,
            tier,
            out: dir,
        } => cmd_run(src, *tier, dir, out),
        Command::Sweep {
            src,
            tier,
            out: dir,
            axis1,
            axis2,
            steps,
            workers,
        } => cmd_sweep(
            src,
            *tier,
            dir,
            axis1.as_deref(),
            axis2.as_deref(),
            *steps,
            *workers,
            out,
        ),
        Command::Constants { src } => cmd_constants(src, out),
        Command::Validate { src } => cmd_validate(src, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", error_line(e.kind(), &e.message()));
            e.exit_code()
        }
    }
}

/// [`cli_main_with`] on the process's stdout and stderr.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    cli_main_with(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
