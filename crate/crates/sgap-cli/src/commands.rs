//! Subcommand dispatch.
//!
//! Exit codes: 0 success, 1 usage, 2 configuration error, 3 numeric or I/O
//! failure, 4 verification failure.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use sgap_core::{
    box_counts, count_core, count_language, dimension_bounds, dyadic_scales,
    estimate_box_dimension, generate_points, solve_dimension_root, solve_entropy, verify_bounds,
    weighted_language_sum, Enclosure, GeometryError, LanguageError, SolveError,
};

use crate::config::{parse_config, ConfigError, Scenario};
use crate::csvio::{self, CountsRow, PressureRow};
use crate::verify;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(ConfigError),
    Numeric(String),
    Io(String),
    Verification { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
            CliError::Verification { .. } => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Numeric(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Verification { failed, total } => {
                write!(f, "{failed} of {total} verification checks failed")
            }
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<LanguageError> for CliError {
    fn from(e: LanguageError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Dimension bounds for subfractals of two-map IFS attractors selected by
/// gap-constrained symbol sequences.
#[derive(Parser, Debug)]
#[command(name = "sgap", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Scenario configuration file
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Directory for emitted CSV files
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,

    /// Override the scenario's point-generation seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Also report entropy in bits
    #[arg(long, global = true)]
    pub bits: bool,

    /// Emit the verification report as a JSON array on stdout
    #[arg(long, global = true)]
    pub json_report: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the dimension bounds [h, H]
    Bounds,
    /// Solve the gap-shift entropy equation
    Entropy,
    /// Emit a pressure table over an (n, t) grid
    PressureTable,
    /// Emit the table of language and core word counts
    LanguageCount,
    /// Generate a subfractal point cloud
    Points,
    /// Box-count a generated cloud and regress its dimension
    Boxdim,
    /// Run the built-in verification battery
    Verify,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Verify => run_verify(&cli),
        Command::Bounds => run_bounds(&load_scenario(&cli)?),
        Command::Entropy => run_entropy(&load_scenario(&cli)?, cli.bits),
        Command::PressureTable => run_pressure_table(&load_scenario(&cli)?, &cli),
        Command::LanguageCount => run_language_count(&load_scenario(&cli)?, &cli),
        Command::Points => run_points(&load_scenario(&cli)?, &cli),
        Command::Boxdim => run_boxdim(&load_scenario(&cli)?, &cli),
    }
}

fn load_scenario(cli: &Cli) -> Result<Scenario, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config <PATH> is required for this command".into()))?;
    let mut scenario = parse_config(path)?;
    if let Some(seed) = cli.seed {
        scenario.points.seed = seed;
    }
    Ok(scenario)
}

fn ensure_out_dir(cli: &Cli) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(&cli.out)?;
    Ok(cli.out.clone())
}

fn print_root(name: &str, enc: &Enclosure, tolerance: f64) {
    println!("{name} = {enc}  (mid {}, width {:.3e})", enc.mid(), enc.width());
    if enc.width() > tolerance {
        println!(
            "  note: {name} enclosure is wider than the requested tolerance {tolerance:.1e}; \
             the root separates from 1 only within floating-point slack"
        );
    }
}

fn run_bounds(sc: &Scenario) -> Result<(), CliError> {
    let bounds = dimension_bounds(&sc.contraction, &sc.gaps, &sc.solver)?;
    println!("gap set: {}", sc.gaps);
    print_root("h", &bounds.lower, sc.solver.tolerance);
    print_root("H", &bounds.upper, sc.solver.tolerance);
    Ok(())
}

fn run_entropy(sc: &Scenario, bits: bool) -> Result<(), CliError> {
    let solution = solve_entropy(&sc.gaps, &sc.solver)?;
    println!("gap set: {}", sc.gaps);
    print_root("lambda", &solution.lambda, sc.solver.tolerance);
    println!("entropy = {} nats", solution.entropy_nats);
    if bits {
        println!("entropy = {} bits", solution.entropy_nats / std::f64::consts::LN_2);
    }
    Ok(())
}

fn pressure_t_grid(sc: &Scenario) -> Result<Vec<f64>, CliError> {
    if let Some(grid) = &sc.pressure.t_grid {
        return Ok(grid.clone());
    }
    // center the default grid on the solved root so the zero crossing shows
    let h =
        solve_dimension_root(sc.contraction.c0_lower, sc.contraction.c1_lower, &sc.gaps, &sc.solver)?
            .mid();
    if h > 0.0 {
        Ok(vec![0.5 * h, 0.75 * h, h, 1.25 * h, 1.5 * h])
    } else {
        Ok(vec![0.25, 0.5, 1.0])
    }
}

fn run_pressure_table(sc: &Scenario, cli: &Cli) -> Result<(), CliError> {
    let out = ensure_out_dir(cli)?;
    let grid = pressure_t_grid(sc)?;
    let c = &sc.contraction;
    let mut rows = Vec::new();
    for &t in &grid {
        for n in 1..=sc.pressure.n_max {
            let sum_lower = weighted_language_sum(n, t, c.c0_lower, c.c1_lower, &sc.gaps);
            let sum_upper = weighted_language_sum(n, t, c.c0_upper, c.c1_upper, &sc.gaps);
            rows.push(PressureRow {
                n,
                t,
                sum_lower,
                pressure_lower: sum_lower.ln() / n as f64,
                sum_upper,
                pressure_upper: sum_upper.ln() / n as f64,
            });
        }
    }
    let path = out.join("pressure.csv");
    csvio::write_file(&path, &csvio::write_pressure_csv(&rows))?;
    println!(
        "wrote {} ({} rows, n <= {}, t grid {:?})",
        path.display(),
        rows.len(),
        sc.pressure.n_max,
        grid
    );
    Ok(())
}

fn run_language_count(sc: &Scenario, cli: &Cli) -> Result<(), CliError> {
    let out = ensure_out_dir(cli)?;
    let mut rows = Vec::new();
    for n in 0..=sc.counts_n_max {
        rows.push(CountsRow {
            n,
            language: count_language(n, &sc.gaps)?,
            core: count_core(n, &sc.gaps)?,
        });
    }
    let path = out.join("counts.csv");
    csvio::write_file(&path, &csvio::write_counts_csv(&rows))?;
    println!("wrote {} (n <= {})", path.display(), sc.counts_n_max);
    Ok(())
}

fn require_ifs(sc: &Scenario, cli: &Cli) -> Result<sgap_core::SimilarityIfs, CliError> {
    sc.ifs.ok_or_else(|| {
        CliError::Config(ConfigError {
            path: cli.config.clone().unwrap_or_default(),
            line: None,
            message: "this command needs an ifs.* section in the scenario".into(),
        })
    })
}

fn run_points(sc: &Scenario, cli: &Cli) -> Result<(), CliError> {
    let ifs = require_ifs(sc, cli)?;
    let out = ensure_out_dir(cli)?;
    let cloud =
        generate_points(&ifs, &sc.gaps, sc.points.depth, sc.points.cap, sc.points.seed)?;
    let path = out.join("points.csv");
    csvio::write_file(&path, &csvio::write_points_csv(&cloud))?;
    if !ifs.osc_attested {
        println!("warning: open set condition not attested; overlaps can inflate counts");
    }
    println!(
        "wrote {} ({} points over words of length {})",
        path.display(),
        cloud.len(),
        cloud.word_length()
    );
    Ok(())
}

fn run_boxdim(sc: &Scenario, cli: &Cli) -> Result<(), CliError> {
    let ifs = require_ifs(sc, cli)?;
    let out = ensure_out_dir(cli)?;
    let cloud =
        generate_points(&ifs, &sc.gaps, sc.points.depth, sc.points.cap, sc.points.seed)?;
    let scales = dyadic_scales(sc.boxdim.scale_min_exp, sc.boxdim.scale_max_exp);
    let series = box_counts(&cloud, &scales)?;
    let path = out.join("boxcounts.csv");
    csvio::write_file(&path, &csvio::write_box_counts_csv(&series))?;
    let estimate = estimate_box_dimension(&series, sc.boxdim.drop_low, sc.boxdim.drop_high)?;
    let bounds = dimension_bounds(&sc.contraction, &sc.gaps, &sc.solver)?;
    let contained = verify_bounds(estimate.slope, estimate.stderr, &bounds, 0.05);
    if !ifs.osc_attested {
        println!("warning: open set condition not attested; overlaps can inflate counts");
    }
    println!("wrote {} ({} scales)", path.display(), series.entries().len());
    println!(
        "box-dimension estimate: {} +/- {} ({} points over words of length {})",
        estimate.slope,
        estimate.stderr,
        cloud.len(),
        cloud.word_length()
    );
    println!("solver bounds: h mid {}, H mid {}", bounds.lower.mid(), bounds.upper.mid());
    println!(
        "estimate inside [h - 0.05, H + 0.05] = [{:.6}, {:.6}]: {}",
        contained.lower_limit,
        contained.upper_limit,
        if contained.pass { "yes" } else { "no" }
    );
    Ok(())
}

fn run_verify(cli: &Cli) -> Result<(), CliError> {
    // the battery is self-contained; a supplied scenario is validated only
    if let Some(path) = &cli.config {
        parse_config(path)?;
    }
    let checks = verify::run_battery();
    let total = checks.len();
    let failed = checks.iter().filter(|c| !c.pass).count();
    if cli.json_report {
        let report: Vec<serde_json::Value> = checks.iter().map(|c| c.to_json()).collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Array(report))
                .expect("report serializes")
        );
    } else {
        for check in &checks {
            println!("{}", check.format_line());
        }
        println!("{} of {} checks passed", total - failed, total);
    }
    if failed > 0 {
        return Err(CliError::Verification { failed, total });
    }
    Ok(())
}
