use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qmagic_cli::output::{write_atomic, Table};
use qmagic_cli::statespec::{named_state, parse_state_spec, state_from_amps};
use qmagic_cli::sweep::{
    moller_clifford_sweep, moller_sweep, nn_sweep, stabilizers_table, CliffordSweepSpec,
    InitialSet, MollerSweepSpec, NnGrid, NnSweepSpec,
};
use qmagic_cli::verify::{
    classify_moller, classify_nn, clifford_id, four_af, groups_moller, groups_nn,
};
use qmagic_cli::CliError;

use qmagic_core::clifford::{clifford_averaged_antiflatness, AverageMode, CliffordGroup};
use qmagic_core::measures::magic_report;
use qmagic_core::nlopt::nonlocal_magic;
use qmagic_core::nn::load_phase_shifts_path;
use qmagic_core::stabilizers::{moller_group_of, nn_group_of, MollerGroup, NnGroup};
use qmagic_core::tomo::{estimate_antiflatness, Shots};
use qmagic_core::{OptimizerConfig64, StabilizerAtlas64, TwoQubitState64};

#[derive(Parser)]
#[command(
    name = "qmagic",
    version,
    about = "Magic, non-local magic and anti-flatness for two-qubit scattering processes"
)]
struct Cli {
    /// Worker threads for sweeps and verification (default: all cores).
    #[arg(long, global = true, env = "QMAGIC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the magic report of a single state as JSON.
    Magic(MagicArgs),
    /// Emit figure datasets over a kinematic grid.
    #[command(subcommand)]
    Sweep(SweepCmd),
    /// Clifford-averaged anti-flatness of a state, as JSON.
    CliffordAverage(CliffordAverageArgs),
    /// Finite-shot anti-flatness estimation from one particle's spin data.
    Tomo(TomoArgs),
    /// Run a named invariant suite; exits 0 iff every assertion passes.
    Verify(VerifyArgs),
    /// Stabilizer-atlas inspection.
    #[command(subcommand)]
    Stabilizers(StabilizersCmd),
    /// Group taxonomies, optionally with an empirical audit.
    Groups(GroupsArgs),
}

#[derive(Args)]
struct OptArgs {
    /// Multi-start count for the non-local magic minimization.
    #[arg(long, default_value_t = 32)]
    starts: usize,
    /// Objective tolerance of the minimization.
    #[arg(long, default_value_t = 1e-10)]
    f_tol: f64,
    /// Evaluation budget per start.
    #[arg(long, default_value_t = 2000)]
    max_evals: usize,
    /// Seed for the optimizer (and any sampling the command does).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OptArgs {
    fn config(&self) -> OptimizerConfig64 {
        OptimizerConfig64 {
            starts: self.starts,
            f_tol: self.f_tol,
            max_evals: self.max_evals,
            seed: self.seed,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct MagicArgs {
    /// Stabilizer index 1-60.
    #[arg(long, group = "state")]
    stabilizer: Option<usize>,
    /// 8 reals: (re, im) pairs for |00>, |01>, |10>, |11>.
    #[arg(long, num_args = 8, allow_negative_numbers = true, group = "state")]
    amps: Option<Vec<f64>>,
    /// Named shortcut (bell, T-tensor-T, psi1..psi5b, nn-psi1..nn-psi3).
    #[arg(long, group = "state")]
    named: Option<String>,
    #[command(flatten)]
    opt: OptArgs,
}

#[derive(Subcommand)]
enum SweepCmd {
    /// Nucleon-nucleon sweep over phase-shift differences or an ingested
    /// phase-shift table.
    Nn(NnArgs),
    /// Møller sweep over the center-of-momentum scattering angle.
    Moller(MollerArgs),
}

#[derive(Args)]
struct NnArgs {
    /// Range of the phase-shift difference in radians: MIN MAX.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], conflicts_with = "phase_shifts")]
    delta_range: Option<Vec<f64>>,
    /// Grid size for --delta-range.
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// CSV phase-shift table (p_lab_MeV,delta0_deg|rad,delta1_deg|rad).
    #[arg(long)]
    phase_shifts: Option<PathBuf>,
    /// Initial-state set: tensor, entangled or all.
    #[arg(long, value_enum, default_value_t = InitialArg::All)]
    initial: InitialArg,
    /// Restrict to one NN group (G1, G2, G3).
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[command(flatten)]
    opt: OptArgs,
}

#[derive(Args)]
struct MollerArgs {
    /// Angle range in radians: MIN MAX (default: the guarded open interval).
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"])]
    theta_range: Option<Vec<f64>>,
    /// Grid size (even counts avoid theta = pi/2 exactly, where the
    /// symmetric entangled state 37 is annihilated).
    #[arg(long, alias = "steps", default_value_t = 180)]
    theta_steps: usize,
    /// Initial-state set: tensor, entangled or all.
    #[arg(long, value_enum, default_value_t = InitialArg::Tensor)]
    initial: InitialArg,
    /// Restrict to one Møller group (G1..G4, G5a, G5b, G5ent).
    #[arg(long)]
    group: Option<String>,
    /// Emit the Clifford-averaged anti-flatness dataset instead of the
    /// per-group measures (uses tensor representatives; default G5a and G5b).
    #[arg(long)]
    clifford_average: bool,
    /// Averaging mode for --clifford-average.
    #[arg(long, value_enum, default_value_t = ModeArg::Sampled)]
    avg_mode: ModeArg,
    /// Sample count for --clifford-average in sampled mode.
    #[arg(long, default_value_t = 5000)]
    samples: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[command(flatten)]
    opt: OptArgs,
}

#[derive(Args)]
struct CliffordAverageArgs {
    /// State spec: stabilizer index, name, or 8 comma-separated reals.
    #[arg(long)]
    state: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Sampled)]
    mode: ModeArg,
    #[arg(long, default_value_t = 5000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TomoArgs {
    /// State spec: stabilizer index, name, or 8 comma-separated reals.
    #[arg(long)]
    state: String,
    /// Per-axis shot count, or `exact`.
    #[arg(long)]
    shots: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    /// Number of random states (four-af: default 1000; clifford-id: 50).
    #[arg(long)]
    n: Option<usize>,
    /// Averaging mode for clifford-id.
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Sample count for clifford-id in sampled mode.
    #[arg(long, default_value_t = 5000)]
    samples: usize,
    /// The shared --seed drives both the state draws and the optimizer.
    #[command(flatten)]
    opt: OptArgs,
}

#[derive(Subcommand)]
enum StabilizersCmd {
    /// Emit the 60-state atlas as CSV (stdout, or --out).
    List {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GroupsArgs {
    #[arg(value_enum)]
    process: ProcessArg,
    /// Also classify every state empirically from its final-state curves.
    #[arg(long)]
    audit: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitialArg {
    Tensor,
    Entangled,
    All,
}

impl From<InitialArg> for InitialSet {
    fn from(a: InitialArg) -> Self {
        match a {
            InitialArg::Tensor => InitialSet::Tensor,
            InitialArg::Entangled => InitialSet::Entangled,
            InitialArg::All => InitialSet::All,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Sampled,
    Exhaustive,
}

impl From<ModeArg> for AverageMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Sampled => AverageMode::Sampled,
            ModeArg::Exhaustive => AverageMode::Exhaustive,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    FourAf,
    CliffordId,
    GroupsNn,
    GroupsMoller,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProcessArg {
    Nn,
    Moller,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("qmagic: cannot build thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli.cmd)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qmagic: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, CliError> {
    match cmd {
        Cmd::Magic(args) => cmd_magic(args),
        Cmd::Sweep(SweepCmd::Nn(args)) => cmd_sweep_nn(args),
        Cmd::Sweep(SweepCmd::Moller(args)) => cmd_sweep_moller(args),
        Cmd::CliffordAverage(args) => cmd_clifford_average(args),
        Cmd::Tomo(args) => cmd_tomo(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Stabilizers(StabilizersCmd::List { out }) => cmd_stabilizers_list(out),
        Cmd::Groups(args) => cmd_groups(args),
    }
}

fn resolve_magic_state(args: &MagicArgs) -> Result<TwoQubitState64, CliError> {
    if let Some(index) = args.stabilizer {
        let atlas = StabilizerAtlas64::new();
        return atlas
            .stabilizer(index)
            .map(|s| s.state)
            .map_err(|e| CliError::Parse(e.to_string()));
    }
    if let Some(vals) = &args.amps {
        return state_from_amps(vals);
    }
    if let Some(name) = &args.named {
        return named_state(name)
            .ok_or_else(|| CliError::Parse(format!("unknown state name '{name}'")));
    }
    Err(CliError::Parse(
        "one of --stabilizer, --amps or --named is required".into(),
    ))
}

fn cmd_magic(args: MagicArgs) -> Result<ExitCode, CliError> {
    let psi = resolve_magic_state(&args)?;
    let cfg = args.opt.config();
    let report = magic_report(&psi).map_err(|e| CliError::Failed(e.to_string()))?;
    let nl = nonlocal_magic(&psi, &cfg);
    let out = json!({
        "m_lin": report.m_lin,
        "m2": report.m2,
        "xi_purity": report.xi_purity,
        "f_a": report.f_a,
        "e_lin": report.e_lin,
        "m_nl": nl.m_nl,
        "optimizer": {
            "starts": cfg.starts,
            "starts_used": nl.starts_used,
            "converged": nl.converged,
            "seed": cfg.seed,
        },
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(ExitCode::SUCCESS)
}

fn parse_group<T: std::str::FromStr>(label: &Option<String>) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    match label {
        None => Ok(None),
        Some(s) => s
            .parse::<T>()
            .map(Some)
            .map_err(|e| CliError::Parse(e.to_string())),
    }
}

fn write_table(
    table: &Table,
    out: &std::path::Path,
    format: FormatArg,
) -> Result<ExitCode, CliError> {
    let bytes = match format {
        FormatArg::Csv => table.to_csv(),
        FormatArg::Json => table.to_json(),
    };
    write_atomic(out, bytes.as_bytes())?;
    println!("{} rows -> {}", table.rows.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep_nn(args: NnArgs) -> Result<ExitCode, CliError> {
    let grid = match (&args.delta_range, &args.phase_shifts) {
        (Some(range), None) => NnGrid::DeltaRange {
            min: range[0],
            max: range[1],
            steps: args.steps,
        },
        (None, Some(path)) => NnGrid::PhaseShifts(load_phase_shifts_path(path)?),
        (None, None) => {
            return Err(CliError::Parse(
                "sweep nn needs --delta-range or --phase-shifts".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let spec = NnSweepSpec {
        grid,
        initial: args.initial.into(),
        group: parse_group::<NnGroup>(&args.group)?,
        cfg: args.opt.config(),
    };
    let table = nn_sweep(&spec)?;
    write_table(&table, &args.out, args.format)
}

fn cmd_sweep_moller(args: MollerArgs) -> Result<ExitCode, CliError> {
    let (lo, hi) = match &args.theta_range {
        Some(r) => (r[0], r[1]),
        None => MollerSweepSpec::default_range(),
    };
    let group = parse_group::<MollerGroup>(&args.group)?;
    if args.clifford_average {
        if args.initial != InitialArg::Tensor {
            return Err(CliError::Parse(
                "--clifford-average sweeps use tensor representatives; drop --initial".into(),
            ));
        }
        let groups = match group {
            Some(g) => vec![g],
            None => vec![MollerGroup::G5a, MollerGroup::G5b],
        };
        let spec = CliffordSweepSpec {
            theta_min: lo,
            theta_max: hi,
            steps: args.theta_steps,
            groups,
            mode: args.avg_mode.into(),
            samples: args.samples,
            seed: args.opt.seed,
        };
        let table = moller_clifford_sweep(&spec)?;
        return write_table(&table, &args.out, args.format);
    }
    let spec = MollerSweepSpec {
        theta_min: lo,
        theta_max: hi,
        steps: args.theta_steps,
        initial: args.initial.into(),
        group,
        cfg: args.opt.config(),
    };
    let table = moller_sweep(&spec)?;
    write_table(&table, &args.out, args.format)
}

fn cmd_clifford_average(args: CliffordAverageArgs) -> Result<ExitCode, CliError> {
    let psi = parse_state_spec(&args.state)?;
    let avg = clifford_averaged_antiflatness(
        CliffordGroup::shared(),
        &psi,
        args.mode.into(),
        args.samples,
        args.seed,
    );
    let report = magic_report(&psi).map_err(|e| CliError::Failed(e.to_string()))?;
    let out = json!({
        "mean_f": avg.mean_f,
        "std_err": avg.std_err,
        "std_dev": avg.std_dev,
        "samples": avg.samples,
        "mode": avg.mode.to_string(),
        "c_times_mlin": 0.1 * report.m_lin,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_tomo(args: TomoArgs) -> Result<ExitCode, CliError> {
    let psi = parse_state_spec(&args.state)?;
    let shots = match args.shots.as_str() {
        "exact" => Shots::Exact,
        s => Shots::PerAxis(s.parse::<u64>().map_err(|_| {
            CliError::Parse(format!("--shots expects a count or 'exact', got '{s}'"))
        })?),
    };
    if let Shots::PerAxis(0) = shots {
        return Err(CliError::Parse("--shots must be at least 1".into()));
    }
    let est = estimate_antiflatness(&psi, shots, args.seed);
    let out = json!({
        "estimate": est.estimate,
        "std_err": est.std_err,
        "bloch": est.bloch,
        "projected": est.projected,
        "shots": match shots { Shots::Exact => json!("exact"), Shots::PerAxis(n) => json!(n) },
        "seed": args.seed,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let cfg = args.opt.config();
    let outcome = match args.suite {
        SuiteArg::FourAf => four_af(args.n.unwrap_or(1000), args.opt.seed, &cfg),
        SuiteArg::CliffordId => {
            clifford_id(args.n.unwrap_or(50), args.opt.seed, args.mode.into(), args.samples)
        }
        SuiteArg::GroupsNn => groups_nn(&cfg),
        SuiteArg::GroupsMoller => groups_moller(&cfg),
    };
    println!("{}", serde_json::to_string_pretty(&outcome.report).expect("json"));
    if outcome.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        let msg = outcome.report["first_failure"]
            .as_str()
            .unwrap_or("assertion failed")
            .to_string();
        Err(CliError::Failed(msg))
    }
}

fn cmd_stabilizers_list(out: Option<PathBuf>) -> Result<ExitCode, CliError> {
    let table = stabilizers_table();
    match out {
        Some(path) => {
            write_atomic(&path, table.to_csv().as_bytes())?;
            println!("{} rows -> {}", table.rows.len(), path.display());
        }
        None => print!("{}", table.to_csv()),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_groups(args: GroupsArgs) -> Result<ExitCode, CliError> {
    use qmagic_cli::output::Value;
    let cfg = OptimizerConfig64::default();
    let columns: &[&str] = if args.audit {
        &["index", "group", "empirical"]
    } else {
        &["index", "group"]
    };
    let mut table = Table::new(columns);
    for index in 1..=60usize {
        let declared = match args.process {
            ProcessArg::Nn => nn_group_of(index).expect("index in range").to_string(),
            ProcessArg::Moller => moller_group_of(index).expect("index in range").to_string(),
        };
        let mut row = vec![Value::I(index as i64), Value::S(declared)];
        if args.audit {
            let empirical = match args.process {
                ProcessArg::Moller => classify_moller(index, &cfg)
                    .map(|g| g.to_string())
                    .unwrap_or_else(|| "unresolved".into()),
                ProcessArg::Nn => classify_nn(index)
                    .map(|g| g.to_string())
                    .unwrap_or_else(|| "unresolved".into()),
            };
            row.push(Value::S(empirical));
        }
        table.push(row);
    }
    match args.out {
        Some(path) => {
            write_atomic(&path, table.to_csv().as_bytes())?;
            println!("{} rows -> {}", table.rows.len(), path.display());
        }
        None => print!("{}", table.to_csv()),
    }
    Ok(ExitCode::SUCCESS)
}
