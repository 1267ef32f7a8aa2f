//! Command-line front end. One thin binary exposes the whole laboratory:
//!
//! ```text
//! pqfront bounds          analytic + numeric speed bounds
//! pqfront classify        admissibility of one speed
//! pqfront critical-speed  bisection bracket for c*
//! pqfront profile         wave profile reconstruction
//! pqfront simulate        direct PDE run with speed measurement
//! pqfront figure          regenerate the data behind the reference plots
//! pqfront sweep           parallel parameter sweeps
//! ```
//!
//! Configuration comes from a TOML file (`--config`), with CLI flags
//! overriding file values. Outputs land in `--out` as CSV/JSON with the
//! fully resolved configuration echoed into every file, so identical
//! configurations produce bit-identical outputs.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
//! 3 domain breach (competitive degeneration).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BoundError};
use crate::config::{ConfigError, FamilyKind, InitialKind, RunConfig};
use crate::operator::{Mode, Operator, OperatorError};
use crate::pdesim::{self, RunStatus};
use crate::profile::{self, ProfileError};
use crate::reaction::{Reaction, ReactionError};
use crate::shooting::{self, ShootError, SpeedClass};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("domain breach: {0}")]
    Breach(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Breach(_) => 3,
        }
    }
}

impl From<ShootError> for CliError {
    fn from(e: ShootError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<ProfileError> for CliError {
    fn from(e: ProfileError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<pdesim::PdeError> for CliError {
    fn from(e: pdesim::PdeError) -> Self {
        match e {
            pdesim::PdeError::InvalidGrid(msg) => CliError::Usage(msg),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<OperatorError> for CliError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::DomainBreach { .. } => CliError::Breach(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ReactionError> for CliError {
    fn from(e: ReactionError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl ValueEnum for Mode {
    fn value_variants<'a>() -> &'a [Self] {
        &[Mode::Cooperative, Mode::Competitive, Mode::SingleQ]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(match self {
            Mode::Cooperative => clap::builder::PossibleValue::new("cooperative"),
            Mode::Competitive => clap::builder::PossibleValue::new("competitive"),
            Mode::SingleQ => clap::builder::PossibleValue::new("single_q"),
        })
    }
}

impl ValueEnum for FamilyKind {
    fn value_variants<'a>() -> &'a [Self] {
        &[FamilyKind::PowerLogistic, FamilyKind::ClassicalLogistic, FamilyKind::Tabulated]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(match self {
            FamilyKind::PowerLogistic => clap::builder::PossibleValue::new("power_logistic"),
            FamilyKind::ClassicalLogistic => clap::builder::PossibleValue::new("classical_logistic"),
            FamilyKind::Tabulated => clap::builder::PossibleValue::new("tabulated"),
        })
    }
}

impl ValueEnum for InitialKind {
    fn value_variants<'a>() -> &'a [Self] {
        &[InitialKind::Profile, InitialKind::Step]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(match self {
            InitialKind::Profile => clap::builder::PossibleValue::new("profile"),
            InitialKind::Step => clap::builder::PossibleValue::new("step"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pqfront", version, about = "Traveling-front laboratory for (p,q)-Laplacian reaction-diffusion equations")]
struct Cli {
    /// TOML configuration file; flags below override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV/JSON files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Format of the summary record (datasets are always CSV).
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Override operator exponent p.
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Override operator exponent q.
    #[arg(long, global = true)]
    q: Option<f64>,
    /// Override operator mode.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    /// Override reaction family.
    #[arg(long, global = true, value_enum)]
    family: Option<FamilyKind>,
    /// Override reaction exponent gamma (power_logistic).
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Override reaction amplitude.
    #[arg(long, global = true)]
    amplitude: Option<f64>,
    /// Override the right equilibrium H.
    #[arg(long, global = true)]
    h: Option<f64>,
    /// CSV path for the tabulated reaction family.
    #[arg(long, global = true)]
    reaction_csv: Option<PathBuf>,
    /// Override solver seed_delta.
    #[arg(long, global = true)]
    seed_delta: Option<f64>,
    /// Override solver zero_tol.
    #[arg(long, global = true)]
    zero_tol: Option<f64>,
    /// Override solver bisect_tol.
    #[arg(long, global = true)]
    bisect_tol: Option<f64>,
    /// Override the competitive scan cap.
    #[arg(long, global = true)]
    scan_cap: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every analytic and numeric speed bound.
    Bounds {
        /// Supply L0 directly instead of deriving it from the reaction.
        #[arg(long)]
        l0: Option<f64>,
        /// Supply L+ directly instead of deriving it from the reaction.
        #[arg(long)]
        lplus: Option<f64>,
    },
    /// Classify one speed as admissible/inadmissible (H-problem speed).
    Classify {
        #[arg(long)]
        c: f64,
    },
    /// Bracket the critical speed by backward-shooting bisection.
    CriticalSpeed,
    /// Reconstruct the wave profile at an admissible speed.
    Profile {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        tail_tol: Option<f64>,
    },
    /// Direct PDE simulation with front tracking.
    Simulate {
        /// Front speed for the profile initial condition.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, value_enum)]
        initial: Option<InitialKind>,
    },
    /// Regenerate the data behind one of the five reference figures.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        id: u8,
    },
    /// Parameter sweep over p, q and L (critical speeds) or c (classification).
    Sweep {
        #[arg(long, value_delimiter = ',')]
        p_list: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        q_list: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        l_list: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        c_list: Option<Vec<f64>>,
    },
}

/// Parse the process arguments, run, and return the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 1 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    apply_overrides(&mut cfg, &cli);
    std::fs::create_dir_all(&cli.out)?;

    match &cli.command {
        Command::Bounds { l0, lplus } => cmd_bounds(&cfg, *l0, *lplus, &cli),
        Command::Classify { c } => cmd_classify(&cfg, *c, &cli),
        Command::CriticalSpeed => cmd_critical_speed(&cfg, &cli),
        Command::Profile { c, tail_tol } => cmd_profile(&cfg, *c, *tail_tol, &cli),
        Command::Simulate { c, initial } => cmd_simulate(&cfg, *c, *initial, &cli),
        Command::Figure { id } => cmd_figure(&cfg, *id, &cli),
        Command::Sweep { p_list, q_list, l_list, c_list } => {
            cmd_sweep(&cfg, p_list, q_list, l_list.as_deref(), c_list.as_deref(), &cli)
        }
    }
}

fn apply_overrides(cfg: &mut RunConfig, cli: &Cli) {
    if let Some(p) = cli.p {
        cfg.operator.p = Some(p);
    }
    if let Some(q) = cli.q {
        cfg.operator.q = q;
    }
    if let Some(mode) = cli.mode {
        cfg.operator.mode = mode;
    }
    if let Some(family) = cli.family {
        cfg.reaction.family = family;
    }
    if let Some(gamma) = cli.gamma {
        cfg.reaction.gamma = Some(gamma);
    }
    if let Some(a) = cli.amplitude {
        cfg.reaction.amplitude = a;
    }
    if let Some(h) = cli.h {
        cfg.reaction.h = h;
    }
    if let Some(csv) = &cli.reaction_csv {
        cfg.reaction.csv = Some(csv.clone());
    }
    if let Some(v) = cli.seed_delta {
        cfg.solver.seed_delta = v;
    }
    if let Some(v) = cli.zero_tol {
        cfg.solver.zero_tol = v;
    }
    if let Some(v) = cli.bisect_tol {
        cfg.solver.bisect_tol = v;
    }
    if let Some(v) = cli.scan_cap {
        cfg.solver.scan_cap = Some(v);
    }
}

// ---------------------------------------------------------------------
// output plumbing

fn config_echo(cfg: &RunConfig) -> String {
    toml::to_string(cfg).expect("config serializes")
}

fn write_summary<T: Serialize>(
    cli: &Cli,
    cfg: &RunConfig,
    name: &str,
    result: &T,
    csv_row: Option<(&str, Vec<String>)>,
) -> Result<PathBuf, CliError> {
    match cli.format {
        Format::Json => {
            let path = cli.out.join(format!("{name}.json"));
            let record = serde_json::json!({ "config": cfg, "result": result });
            std::fs::write(&path, serde_json::to_string_pretty(&record).expect("serializable"))?;
            Ok(path)
        }
        Format::Csv => {
            let path = cli.out.join(format!("{name}.csv"));
            let (header, row) = csv_row.ok_or_else(|| {
                CliError::Usage(format!("{name} has no CSV summary; use --format json"))
            })?;
            write_csv(&path, cfg, header, &[row])?;
            Ok(path)
        }
    }
}

fn write_csv(
    path: &Path,
    cfg: &RunConfig,
    header: &str,
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let mut text = String::new();
    for line in config_echo(cfg).lines() {
        let _ = writeln!(text, "# {line}");
    }
    let _ = writeln!(text, "{header}");
    for row in rows {
        let _ = writeln!(text, "{}", row.join(","));
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn shoot_csv_rows(out: &shooting::ShootOutcome, scale_v: f64) -> Vec<Vec<String>> {
    out.samples
        .iter()
        .map(|s| vec![(s.v * scale_v).to_string(), s.y.to_string(), s.phi.to_string()])
        .collect()
}

// ---------------------------------------------------------------------
// commands

#[derive(Serialize)]
struct BoundsReport {
    l0: f64,
    lplus: f64,
    l_source: &'static str,
    bounds: bounds::BoundSet,
}

fn cmd_bounds(
    cfg: &RunConfig,
    l0_override: Option<f64>,
    lplus_override: Option<f64>,
    cli: &Cli,
) -> Result<i32, CliError> {
    let op = cfg.build_operator()?;
    let (l0, lplus, source) = match (l0_override, lplus_override) {
        (Some(l0), Some(lp)) => (l0, lp, "override"),
        (None, None) => {
            let r = cfg.build_reaction(&op)?.rescale_to_unit().reaction;
            let (l0, lp) = r.slope_limits();
            (l0, lp, "reaction")
        }
        (l0_o, lp_o) => {
            let r = cfg.build_reaction(&op)?.rescale_to_unit().reaction;
            let (l0, lp) = r.slope_limits();
            (l0_o.unwrap_or(l0), lp_o.unwrap_or(lp), "reaction+override")
        }
    };
    let set = bounds::bound_set(&op, l0, lplus);
    let report = BoundsReport { l0, lplus, l_source: source, bounds: set.clone() };

    println!("operator: p = {}, q = {}, mode = {}", op.p(), op.q(), op.mode());
    println!("slopes:   L0 = {l0}, L+ = {lplus} ({source})");
    println!("lower bound:      {}", fmt_opt(set.lower));
    println!(
        "upper analytic:   {}{}",
        fmt_opt(set.upper_analytic),
        set.upper_case.map(|c| format!("  case {c}")).unwrap_or_default()
    );
    println!("upper numeric:    {}", fmt_opt(set.upper_numeric));
    if let Some(cb) = set.competitive {
        println!(
            "competitive: c* in [{}, {}], window cap {}{}",
            cb.c_lower,
            cb.c_upper_for_cstar,
            cb.c_max,
            if cb.window_empty { "  (window empty)" } else { "" }
        );
    }

    let header = "l0,lplus,lower,upper_analytic,upper_case,upper_numeric,competitive_c_max,window_empty";
    let row = vec![
        l0.to_string(),
        lplus.to_string(),
        fmt_opt(set.lower),
        fmt_opt(set.upper_analytic),
        set.upper_case.map(|c| c.to_string()).unwrap_or_default(),
        fmt_opt(set.upper_numeric),
        fmt_opt(set.competitive.map(|c| c.c_max)),
        set.competitive.map(|c| c.window_empty.to_string()).unwrap_or_default(),
    ];
    let path = write_summary(cli, cfg, "bounds", &report, Some((header, row)))?;
    println!("written: {}", path.display());
    Ok(0)
}

#[derive(Serialize)]
struct ClassifyReport {
    c: f64,
    c_unit: f64,
    classification: SpeedClass,
    y_at_zero: Option<f64>,
    max_y: f64,
    v_stop: f64,
}

fn cmd_classify(cfg: &RunConfig, c: f64, cli: &Cli) -> Result<i32, CliError> {
    let op = cfg.build_operator()?;
    let r = cfg.build_reaction(&op)?;
    let scaled = r.rescale_to_unit();
    let c_unit = c * scaled.speed_factor;
    let settings = cfg.shoot_settings();
    let class = shooting::classify_speed(&op, &scaled.reaction, c_unit, &settings)?;
    let shoot = shooting::integrate_backward(&op, &scaled.reaction, c_unit, &settings)?;

    let report = ClassifyReport {
        c,
        c_unit,
        classification: class,
        y_at_zero: shoot.y_at_zero,
        max_y: shoot.max_y,
        v_stop: shoot.v_stop * r.h(),
    };
    println!(
        "c = {c} (unit problem: {c_unit}): {class}; y(0) = {}, max y = {}",
        fmt_opt(shoot.y_at_zero),
        shoot.max_y
    );

    // Shoot samples in H-problem coordinates.
    let path = cli.out.join("shoot.csv");
    write_csv(&path, cfg, "v,y,phi", &shoot_csv_rows(&shoot, r.h()))?;
    let spath = write_summary(cli, cfg, "classify", &report, Some((
        "c,c_unit,classification,y_at_zero,max_y",
        vec![
            c.to_string(),
            c_unit.to_string(),
            class.to_string(),
            fmt_opt(shoot.y_at_zero),
            shoot.max_y.to_string(),
        ],
    )))?;
    println!("written: {}, {}", spath.display(), path.display());

    Ok(if class == SpeedClass::DomainBreach { 3 } else { 0 })
}

#[derive(Serialize)]
struct CriticalSpeedReport {
    c_star_unit: f64,
    c_star: f64,
    speed_factor: f64,
    result: shooting::CriticalSpeedResult,
}

fn cmd_critical_speed(cfg: &RunConfig, cli: &Cli) -> Result<i32, CliError> {
    let op = cfg.build_operator()?;
    let r = cfg.build_reaction(&op)?;
    let scaled = r.rescale_to_unit();
    let settings = cfg.shoot_settings();
    let result = match shooting::critical_speed(&op, &scaled.reaction, &settings) {
        Ok(res) => res,
        Err(e @ ShootError::BracketFailure { .. }) => {
            eprintln!("error: {e}");
            return Ok(2);
        }
        Err(e) => return Err(e.into()),
    };
    let c_star = result.c_star / scaled.speed_factor;
    println!(
        "c* = {c_star} (unit problem: {}), bracket [{}, {}], {} shots",
        result.c_star, result.bracket.0, result.bracket.1, result.iterations
    );
    if let (Some(lo), Some(hi)) = (result.bounds.lower, result.bounds.upper_analytic) {
        println!("analytic sandwich (unit problem): [{lo}, {hi}]");
    }
    let report = CriticalSpeedReport {
        c_star_unit: result.c_star,
        c_star,
        speed_factor: scaled.speed_factor,
        result: result.clone(),
    };
    let header = "c_star,c_star_unit,bracket_lo,bracket_hi,lower,upper_analytic,upper_numeric,iterations";
    let row = vec![
        c_star.to_string(),
        result.c_star.to_string(),
        result.bracket.0.to_string(),
        result.bracket.1.to_string(),
        fmt_opt(result.bounds.lower),
        fmt_opt(result.bounds.upper_analytic),
        fmt_opt(result.bounds.upper_numeric),
        result.iterations.to_string(),
    ];
    let path = write_summary(cli, cfg, "critical_speed", &report, Some((header, row)))?;
    println!("written: {}", path.display());
    Ok(0)
}

#[derive(Serialize)]
struct ProfileReport {
    c: f64,
    c_unit: f64,
    z_span: (f64, f64),
    tail_tol: f64,
    samples: usize,
    tail_rates: Option<(f64, f64)>,
    clamped_negative_y: bool,
}

fn cmd_profile(
    cfg: &RunConfig,
    c: f64,
    tail_tol: Option<f64>,
    cli: &Cli,
) -> Result<i32, CliError> {
    let op = cfg.build_operator()?;
    let r = cfg.build_reaction(&op)?;
    let scaled = r.rescale_to_unit();
    let c_unit = c * scaled.speed_factor;
    let settings = cfg.shoot_settings();
    let tail_tol = tail_tol.unwrap_or(cfg.solver.tail_tol);

    let shoot = shooting::integrate_backward(&op, &scaled.reaction, c_unit, &settings)?;
    let prof = profile::reconstruct_profile(&op, &shoot, tail_tol)?;
    let rates = profile::tail_exponents(&prof).ok();

    let rows: Vec<Vec<String>> = prof
        .samples
        .iter()
        .map(|s| vec![s.z.to_string(), s.u.to_string(), s.du_dz.to_string()])
        .collect();
    let path = cli.out.join("profile.csv");
    write_csv(&path, cfg, "z,u,du_dz", &rows)?;

    let report = ProfileReport {
        c,
        c_unit,
        z_span: prof.z_span,
        tail_tol,
        samples: prof.samples.len(),
        tail_rates: rates,
        clamped_negative_y: prof.clamped_negative_y,
    };
    println!(
        "profile at c = {c}: z in [{}, {}], {} samples{}",
        prof.z_span.0,
        prof.z_span.1,
        prof.samples.len(),
        rates
            .map(|(l, r)| format!(", tail rates ({l:.4}, {r:.4})"))
            .unwrap_or_default()
    );
    let spath = write_summary(cli, cfg, "profile_summary", &report, Some((
        "c,z_min,z_max,tail_tol,samples",
        vec![
            c.to_string(),
            prof.z_span.0.to_string(),
            prof.z_span.1.to_string(),
            tail_tol.to_string(),
            prof.samples.len().to_string(),
        ],
    )))?;
    println!("written: {}, {}", spath.display(), path.display());
    Ok(0)
}

#[derive(Serialize)]
struct SimulateReport {
    initial: InitialKind,
    c_requested: Option<f64>,
    fitted_speed: Option<f64>,
    signed_slope: Option<f64>,
    fit_residual: Option<f64>,
    status: RunStatus,
    steps_taken: u64,
    snapshots: usize,
}

fn cmd_simulate(
    cfg: &RunConfig,
    c_override: Option<f64>,
    initial_override: Option<InitialKind>,
    cli: &Cli,
) -> Result<i32, CliError> {
    let op = cfg.build_operator()?;
    let r = cfg.build_reaction(&op)?;
    let grid = cfg
        .grid
        .clone()
        .ok_or_else(|| CliError::Usage("simulate requires a [grid] section".into()))?;
    grid.validate()?;
    let sim = cfg.simulate.clone().unwrap_or(crate::config::SimulateConfig {
        initial: InitialKind::Profile,
        c: None,
    });
    let initial_kind = initial_override.unwrap_or(sim.initial);
    let c_requested = c_override.or(sim.c);

    let u0 = match initial_kind {
        InitialKind::Step => pdesim::step_initial(&grid, r.h(), 0.0),
        InitialKind::Profile => {
            let c = c_requested.ok_or_else(|| {
                CliError::Usage("profile initial condition needs --c or simulate.c".into())
            })?;
            let scaled = r.rescale_to_unit();
            let settings = cfg.shoot_settings();
            let shoot =
                shooting::integrate_backward(&op, &scaled.reaction, c * scaled.speed_factor, &settings)?;
            let prof = profile::reconstruct_profile(&op, &shoot, cfg.solver.tail_tol)?;
            pdesim::profile_initial(&grid, &prof, r.h())
        }
    };

    let run = pdesim::run(&u0, &op, &r, &grid)?;
    for (k, snap) in run.snapshots.iter().enumerate() {
        let rows: Vec<Vec<String>> = (0..grid.nx)
            .map(|i| vec![grid.x(i).to_string(), snap.u[i].to_string()])
            .collect();
        let path = cli.out.join(format!("snapshot_{k:04}.csv"));
        write_csv(&path, cfg, "x,u", &rows)?;
    }
    let track_rows: Vec<Vec<String>> = run
        .track
        .times
        .iter()
        .zip(run.track.positions.iter())
        .map(|(t, x)| vec![t.to_string(), x.to_string()])
        .collect();
    write_csv(&cli.out.join("front_track.csv"), cfg, "t,x_half", &track_rows)?;

    let report = SimulateReport {
        initial: initial_kind,
        c_requested,
        fitted_speed: run.track.fitted_speed,
        signed_slope: run.track.signed_slope,
        fit_residual: run.track.fit_residual,
        status: run.status,
        steps_taken: run.steps_taken,
        snapshots: run.snapshots.len(),
    };
    println!(
        "simulate: {} steps, {} snapshots, fitted speed {}{}",
        run.steps_taken,
        run.snapshots.len(),
        fmt_opt(run.track.fitted_speed),
        if run.status == RunStatus::BoundaryContaminated {
            " (boundary contaminated)"
        } else {
            ""
        }
    );
    let path = write_summary(cli, cfg, "run_manifest", &report, Some((
        "initial,c_requested,fitted_speed,status,steps",
        vec![
            format!("{initial_kind:?}").to_lowercase(),
            fmt_opt(c_requested),
            fmt_opt(run.track.fitted_speed),
            run.status.to_string(),
            run.steps_taken.to_string(),
        ],
    )))?;
    println!("written: {}", path.display());
    Ok(if run.status == RunStatus::BoundaryContaminated { 2 } else { 0 })
}

fn cmd_figure(cfg: &RunConfig, id: u8, cli: &Cli) -> Result<i32, CliError> {
    // Each figure bakes in the parameters of the corresponding reference
    // plot; the solver block of the configuration still applies.
    let settings = cfg.shoot_settings();
    match id {
        1 => {
            let op = Operator::cooperative(4.0, 3.0)?;
            let lplus = 6.0f64;
            let c_i = lplus.powf(1.0 / op.q_conj()) * op.q() / (op.q() - 1.0)
                * (op.p() + op.q() - 2.0).powf(1.0 / op.q());
            let rows: Vec<Vec<String>> = (0..=500)
                .map(|i| {
                    let beta = 2.5 * i as f64 / 500.0;
                    let g = if beta == 0.0 {
                        lplus
                    } else {
                        bounds::g_script(&op, lplus, c_i, beta)
                    };
                    vec![beta.to_string(), g.to_string()]
                })
                .collect();
            write_csv(&cli.out.join("figure_1.csv"), cfg, "beta,g_script", &rows)?;
            let min = bounds::minimize_g_script(&op, lplus, c_i);
            let numeric = bounds::numeric_cplus(&op, lplus)?;
            let meta = serde_json::json!({
                "p": 4.0, "q": 3.0, "lplus": lplus,
                "c": c_i,
                "g_min_beta": min.beta,
                "g_min_value": min.value,
                "numeric_cplus": numeric,
                "case_ii_value": 10.0,
            });
            std::fs::write(
                cli.out.join("figure_1.json"),
                serde_json::to_string_pretty(&meta).unwrap(),
            )?;
            println!(
                "figure 1: min G_c = {} at beta = {} (positive: bound (i) needs correcting); numeric c+ = {numeric}",
                min.value, min.beta
            );
        }
        2 | 3 => {
            let op = Operator::cooperative(4.0, 2.0)?;
            let (h, c) = if id == 2 { (1.0, 2.0) } else { (7.0, 2.0 * 7.0f64.sqrt()) };
            let r = Reaction::power_logistic(1.0, 1.0, h, op.q_conj())?;
            let scaled = r.rescale_to_unit();
            let shoot =
                shooting::integrate_backward(&op, &scaled.reaction, c * scaled.speed_factor, &settings)?;
            write_csv(
                &cli.out.join(format!("figure_{id}.csv")),
                cfg,
                "v,y,phi",
                &shoot_csv_rows(&shoot, h),
            )?;
            let meta = serde_json::json!({
                "p": 4.0, "q": 2.0, "h": h, "c": c,
                "classification": shoot.classification,
                "y_at_zero": shoot.y_at_zero,
                "max_y": shoot.max_y,
            });
            std::fs::write(
                cli.out.join(format!("figure_{id}.json")),
                serde_json::to_string_pretty(&meta).unwrap(),
            )?;
            println!(
                "figure {id}: c = {c}, {}, max y = {}",
                shoot.classification, shoot.max_y
            );
        }
        4 | 5 => {
            let op = Operator::competitive(4.0, 2.0)?;
            let (h, c) = if id == 4 { (1.0, 2.0) } else { (4.0, 4.0) };
            let r = Reaction::power_logistic(1.0, 1.0, h, op.q_conj())?;
            let scaled = r.rescale_to_unit();
            let shoot =
                shooting::integrate_backward(&op, &scaled.reaction, c * scaled.speed_factor, &settings)?;
            write_csv(
                &cli.out.join(format!("figure_{id}.csv")),
                cfg,
                "v,y,phi",
                &shoot_csv_rows(&shoot, h),
            )?;
            let scan = shooting::competitive_window(&op, &scaled.reaction, &settings)?;
            let (_, y_max) = op.invertibility_limit();
            let meta = serde_json::json!({
                "p": 4.0, "q": 2.0, "h": h, "c": c,
                "classification": shoot.classification,
                "max_y": shoot.max_y,
                "y_max": y_max,
                "v_stop": shoot.v_stop * h,
                "window_interval": scan.interval,
                "window_empty_analytic": scan.bounds.window_empty,
            });
            std::fs::write(
                cli.out.join(format!("figure_{id}.json")),
                serde_json::to_string_pretty(&meta).unwrap(),
            )?;
            println!(
                "figure {id}: c = {c}, {}, max y = {} (invertibility limit {y_max})",
                shoot.classification, shoot.max_y
            );
        }
        _ => unreachable!("clap range guard"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct SweepRow {
    p: f64,
    q: f64,
    l: Option<f64>,
    c: Option<f64>,
    lower: Option<f64>,
    upper_analytic: Option<f64>,
    upper_numeric: Option<f64>,
    c_star: Option<f64>,
    classification: Option<String>,
    error: Option<String>,
}

fn cmd_sweep(
    cfg: &RunConfig,
    p_list: &[f64],
    q_list: &[f64],
    l_list: Option<&[f64]>,
    c_list: Option<&[f64]>,
    cli: &Cli,
) -> Result<i32, CliError> {
    let mode = cfg.operator.mode;
    let settings = cfg.shoot_settings();
    let mut cells: Vec<(f64, f64, Option<f64>, Option<f64>)> = Vec::new();
    for &p in p_list {
        for &q in q_list {
            match (l_list, c_list) {
                (_, Some(cs)) => {
                    for &c in cs {
                        cells.push((p, q, None, Some(c)));
                    }
                }
                (Some(ls), None) => {
                    for &l in ls {
                        cells.push((p, q, Some(l), None));
                    }
                }
                (None, None) => cells.push((p, q, Some(1.0), None)),
            }
        }
    }

    let rows: Vec<SweepRow> = cells
        .par_iter()
        .map(|&(p, q, l, c)| {
            let mut row = SweepRow {
                p,
                q,
                l,
                c,
                lower: None,
                upper_analytic: None,
                upper_numeric: None,
                c_star: None,
                classification: None,
                error: None,
            };
            let result = (|| -> Result<(), CliError> {
                let op = Operator::new(mode, p, q)?;
                let amplitude = l.unwrap_or(cfg.reaction.amplitude);
                let r = Reaction::power_logistic(op.q_conj() - 1.0, amplitude, 1.0, op.q_conj())?;
                let (l0, lp) = r.slope_limits();
                let set = bounds::bound_set(&op, l0, lp);
                row.lower = set.lower;
                row.upper_analytic = set.upper_analytic;
                row.upper_numeric = set.upper_numeric;
                match c {
                    Some(c) => {
                        let class = shooting::classify_speed(&op, &r, c, &settings)?;
                        row.classification = Some(format!("{class:?}").to_lowercase());
                    }
                    None => {
                        if mode == Mode::Competitive {
                            let scan = shooting::competitive_window(&op, &r, &settings)?;
                            row.classification = Some(match scan.interval {
                                Some((lo, hi)) => format!("window [{lo}, {hi}]"),
                                None => "window empty".into(),
                            });
                        } else {
                            let res = shooting::critical_speed(&op, &r, &settings)?;
                            row.c_star = Some(res.c_star);
                        }
                    }
                }
                Ok(())
            })();
            if let Err(e) = result {
                row.error = Some(e.to_string());
            }
            row
        })
        .collect();

    let header = "p,q,l,c,lower,upper_analytic,upper_numeric,c_star,classification,error";
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.p.to_string(),
                r.q.to_string(),
                fmt_opt(r.l),
                fmt_opt(r.c),
                fmt_opt(r.lower),
                fmt_opt(r.upper_analytic),
                fmt_opt(r.upper_numeric),
                fmt_opt(r.c_star),
                r.classification.clone().unwrap_or_default(),
                r.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let path = cli.out.join("sweep.csv");
    write_csv(&path, cfg, header, &csv_rows)?;
    if cli.format == Format::Json {
        let record = serde_json::json!({ "config": cfg, "rows": rows });
        std::fs::write(
            cli.out.join("sweep.json"),
            serde_json::to_string_pretty(&record).unwrap(),
        )?;
    }

    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    println!("sweep: {} cells, {} failed; written {}", rows.len(), failed, path.display());
    for row in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("  cell (p={}, q={}): {}", row.p, row.q, row.error.as_deref().unwrap());
    }
    // Exit 0 if any row succeeded (or the sweep was empty).
    Ok(if rows.is_empty() || failed < rows.len() { 0 } else { 2 })
}
