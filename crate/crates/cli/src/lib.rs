//! Command-line surface for `drinfeld-core`: configuration, record output,
//! one subcommand per operation and the `verify` invariant suite.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod output;
pub mod parse;
pub mod verify;

use config::{ConfigError, RunConfig};
use output::Emitter;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(drinfeld_core::Error),
    Io(io::Error),
    /// A check that ran to completion and failed.
    Failed(String),
}

impl From<drinfeld_core::Error> for CliError {
    fn from(e: drinfeld_core::Error) -> CliError {
        CliError::Core(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> CliError {
        CliError::Usage(e.0)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        CliError::Io(e)
    }
}

impl CliError {
    /// 2 for usage errors, 3 for precision failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_precision_failure() => 3,
            _ => 1,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage: {m}"),
            CliError::Core(e) => format!("{}: {e}", e.name()),
            CliError::Io(e) => format!("io: {e}"),
            CliError::Failed(m) => format!("failed: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Drinfeld modules over F_q[t]")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct GlobalOpts {
    /// Configuration file with `key=value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override one configuration key (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,
    #[arg(long, global = true)]
    pub q: Option<u32>,
    #[arg(long, global = true)]
    pub ram: Option<u32>,
    #[arg(long, global = true)]
    pub prec: Option<i64>,
    /// Level `N` as ascending coefficient indices, e.g. "0 0 1".
    #[arg(long = "level", global = true)]
    pub level: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// One JSON object per line instead of text records.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients of the exponential (or logarithm) of a module over F.
    ExpSeries(commands::ExpSeriesArgs),
    /// phi_a for a module over F.
    Act(commands::ActArgs),
    /// Normalised isogeny with a given finite kernel.
    Isogeny(commands::IsogenyArgs),
    /// Value of a lattice exponential at a point of F_inf.
    LatticeExp(commands::LatticeExpArgs),
    /// psi_a attached to a lattice and a point of Omega.
    ModuleFromLattice(commands::ModuleArgs),
    /// u-expansion at the standard rank-2 cusp.
    UExpand(commands::UExpandArgs),
    /// Order at infinity of a coefficient form.
    OrderAtInfinity(commands::OrderArgs),
    /// Representatives of gp \ gp delta g, or blocks for a k-part.
    HeckeCosets(commands::CosetArgs),
    /// T_delta applied to a built-in form at a point.
    HeckeApply(commands::ApplyArgs),
    /// Composition law of two Hecke operators at level N.
    HeckeCompose(commands::ComposeArgs),
    /// Number of connected components at level N.
    Components(commands::ComponentArgs),
    /// Runs the invariant suites and reports each invariant.
    Verify(verify::VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ExpSeries(_) => "exp-series",
            Command::Act(_) => "act",
            Command::Isogeny(_) => "isogeny",
            Command::LatticeExp(_) => "lattice-exp",
            Command::ModuleFromLattice(_) => "module-from-lattice",
            Command::UExpand(_) => "u-expand",
            Command::OrderAtInfinity(_) => "order-at-infinity",
            Command::HeckeCosets(_) => "hecke-cosets",
            Command::HeckeApply(_) => "hecke-apply",
            Command::HeckeCompose(_) => "hecke-compose",
            Command::Components(_) => "components",
            Command::Verify(_) => "verify",
        }
    }
}

/// Defaults, then the file, then `--set`, then the dedicated flags.
pub fn resolve_config(g: &GlobalOpts) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &g.config {
        cfg.load(p)?;
    }
    for s in &g.set {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("--set expects KEY=VALUE, got {s:?}")))?;
        cfg.set(k, v)?;
    }
    if let Some(q) = g.q {
        cfg.q = q;
    }
    if let Some(r) = g.ram {
        cfg.ram = r;
    }
    if let Some(p) = g.prec {
        cfg.prec = p;
    }
    if let Some(n) = &g.level {
        cfg.level = n.trim().to_string();
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn dispatch<W: Write>(
    cmd: &Command,
    cfg: &RunConfig,
    out: &mut Emitter<W>,
) -> Result<(), CliError> {
    out.header(cmd.name(), cfg)?;
    match cmd {
        Command::ExpSeries(a) => commands::exp_series(cfg, a, out),
        Command::Act(a) => commands::act(cfg, a, out),
        Command::Isogeny(a) => commands::isogeny(cfg, a, out),
        Command::LatticeExp(a) => commands::lattice_exp(cfg, a, out),
        Command::ModuleFromLattice(a) => commands::module_from_lattice(cfg, a, out),
        Command::UExpand(a) => commands::u_expand(cfg, a, out),
        Command::OrderAtInfinity(a) => commands::order_at_infinity(cfg, a, out),
        Command::HeckeCosets(a) => commands::hecke_cosets(cfg, a, out),
        Command::HeckeApply(a) => commands::hecke_apply(cfg, a, out),
        Command::HeckeCompose(a) => commands::hecke_compose(cfg, a, out),
        Command::Components(a) => commands::components(cfg, a, out),
        Command::Verify(a) => verify::run_command(cfg, a, out),
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match resolve_config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("usage: {e}");
            return 2;
        }
    };
    let stdout = io::stdout();
    let mut out = Emitter::new(stdout.lock(), cli.global.json);
    match dispatch(&cli.command, &cfg, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.into_inner().flush();
            eprintln!("error: {}", e.describe());
            e.exit_code()
        }
    }
}
