use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entmap_core::criteria::{classify, sweep, threads_from_env};
use entmap_core::matcore::Tolerance;
use entmap_core::posmaps::MapDescriptor;
use entmap_core::states::FamilyId;
use entmap_cli::mapspec::{cyclic_maps, default_detect_maps, parse_family, parse_map};
use entmap_cli::report::{map_summary, render_detection, render_map_text, render_sweep_csv};
use entmap_cli::statefile::{load_state, LoadMode};
use entmap_cli::verify::{self, Scope};
use entmap_cli::{exit, CliError, CliResult};

#[derive(Parser)]
#[command(name = "entmap", version, about = "Entanglement detection with positive elementary operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run PPT, realignment and positive-map criteria on a state file.
    Detect(DetectArgs),
    /// Classify a state family over a simplex lattice and write CSV.
    Sweep(SweepArgs),
    /// Replay the claim ledger.
    Verify(VerifyArgs),
    /// Inspect built-in maps.
    Map {
        #[command(subcommand)]
        command: MapCommand,
    },
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    state: PathBuf,
    /// Map spec such as `phi:4:1`; repeatable. Defaults to `phi0` and every
    /// cyclic map fitting the first factor.
    #[arg(long = "map")]
    maps: Vec<String>,
    /// Slack below zero still counted as positive semidefinite.
    #[arg(long)]
    tol: Option<f64>,
    /// Skip the trace and positivity checks on the input matrix.
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// `ex33`, `ex34`, `ex42`, `ex43`, `ex54` or `ex55`, optionally suffixed `-<n>`.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    grid: usize,
    #[arg(long)]
    out: PathBuf,
    /// Accepted for uniformity; the lattice sweep draws no random numbers.
    #[arg(long)]
    seed: Option<u64>,
    /// Map spec; repeatable. Defaults to every cyclic map on the family's levels.
    #[arg(long = "map")]
    maps: Vec<String>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    scope: String,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum MapCommand {
    /// Print the Kraus-difference operators and the Choi minimum eigenvalue.
    Show(ShowArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ShowArgs {
    /// `phi`, `phi0`, `psi0`, `phi33`, `phi33p`, `phi4`, `delta` or `psipi`.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: Option<usize>,
    /// Shift for `phi` and `phi4`.
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated weights for `delta`; defaults to `n` repeated `n` times.
    #[arg(long)]
    t: Option<String>,
    /// Comma-separated zero-based permutation for `psipi`.
    #[arg(long)]
    perm: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn tolerance(tol: Option<f64>) -> CliResult<Tolerance> {
    let base = Tolerance::default();
    Ok(match tol {
        Some(t) => base.with_psd_slack(t)?,
        None => base,
    })
}

fn parse_maps(specs: &[String]) -> CliResult<Vec<MapDescriptor>> {
    specs.iter().map(|s| parse_map(s)).collect()
}

fn family_id(name: &str, n: Option<usize>) -> CliResult<FamilyId> {
    Ok(match (name.contains('-'), n) {
        (true, None) => name.parse()?,
        (true, Some(_)) => return Err(CliError::Usage(format!("family {name:?} already fixes n; drop --n"))),
        (false, n) => FamilyId::parse(name, n)?,
    })
}

fn detect(args: DetectArgs) -> CliResult<ExitCode> {
    let tol = tolerance(args.tol)?;
    let mode = if args.raw { LoadMode::Raw } else { LoadMode::Validated };
    let rho = load_state(&args.state, mode, &tol)?;
    let maps = if args.maps.is_empty() { default_detect_maps(rho.dims().a) } else { parse_maps(&args.maps)? };
    let report = classify(&rho, &maps, &tol)?;
    println!("state {} ({}x{})", args.state.display(), rho.dims().a, rho.dims().b);
    print!("{}", render_detection(&report));
    Ok(ExitCode::from(exit::SUCCESS))
}

fn run_sweep(args: SweepArgs) -> CliResult<ExitCode> {
    let fid = family_id(&args.family, args.n)?;
    let tol = tolerance(args.tol)?;
    let maps = if args.maps.is_empty() { cyclic_maps(fid.n()) } else { parse_maps(&args.maps)? };
    let rows = sweep(fid, args.grid, &maps, &tol, threads_from_env())?;
    let csv = render_sweep_csv(fid.n(), &maps, &rows);
    std::fs::write(&args.out, csv).map_err(|source| CliError::Io { path: args.out.clone(), source })?;
    println!("{fid}: {} rows written to {}", rows.len(), args.out.display());
    Ok(ExitCode::from(exit::SUCCESS))
}

fn run_verify(args: VerifyArgs) -> CliResult<ExitCode> {
    let scope: Scope = args.scope.parse()?;
    let records = verify::run(scope, args.seed);
    print!("{}", verify::render(&records));
    Ok(ExitCode::from(if verify::any_failed(&records) { exit::VERIFICATION_FAILED } else { exit::SUCCESS }))
}

fn show(args: ShowArgs) -> CliResult<ExitCode> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| CliError::Usage(format!("family {} needs --{flag}", args.family)))
    };
    let spec = match args.family.as_str() {
        "phi" => format!("phi:{}:{}", need(args.n, "n")?, need(args.k, "k")?),
        "phi4" => format!("phi4:{}", need(args.k, "k")?),
        "delta" => match (&args.t, args.n) {
            (Some(t), _) => format!("delta:{t}"),
            (None, Some(n)) => format!("delta:{}", vec![n.to_string(); n].join(",")),
            (None, None) => return Err(CliError::Usage("family delta needs --t or --n".into())),
        },
        "psipi" => format!("psipi:{}", args.perm.as_deref().ok_or_else(|| CliError::Usage("family psipi needs --perm".into()))?),
        other => other.to_string(),
    };
    let desc = MapDescriptor::new(parse_family(&spec)?)?;
    let summary = map_summary(&desc, &Tolerance::default())?;
    match args.format {
        Format::Text => print!("{}", render_map_text(&summary)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&summary).expect("plain data serializes")),
    }
    Ok(ExitCode::from(exit::SUCCESS))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(a) => detect(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(a) => run_verify(a),
        Command::Map { command: MapCommand::Show(a) } => show(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("entmap: {e}");
        ExitCode::from(exit::INPUT_ERROR)
    })
}
