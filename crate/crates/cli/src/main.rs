//! `atlvis` command-line front end.
//!
//! Exit codes: 0 true or success, 1 false, 2 usage, 3 input error,
//! 4 resource bound.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use atlvis::checker::{CheckConfig, Checker, Semantics};
use atlvis::format::{parse_icgs, parse_vcgs, print_icgs, print_vcgs};
use atlvis::gen::{gen_icgs, GenParams};
use atlvis::logic::parse_formula;
use atlvis::reduction::{reduce, size_report, InitialLabelMode, LabelMode, ProtocolMode};
use atlvis::vcgs::well_formedness;
use atlvis::xval::{calibrate, replay, write_bundle, xvalidate, XValParams, DEFAULT_BOUND};
use atlvis::{Dialect, Error, Exec, Formula, Icgs, Machine, ReductionConfig, StateId};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "atlvis", version, about = "iCGS to vCGS reduction and ATL/ATL* checking under uniform positional strategies")]
struct Cli {
    /// Evaluate sequentially instead of on the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile an iCGS model into a vCGS.
    Compile {
        model: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        reduction: ReductionArgs,
    },
    /// Unfold a vCGS into an explicit iCGS.
    Unfold {
        vcgs: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a formula on an iCGS (`.icgs`) or vCGS (`.vcgs`, unfolded first).
    Check {
        file: PathBuf,
        #[arg(short, long)]
        formula: String,
        #[arg(long, default_value = "ATL")]
        dialect: Dialect,
        /// State to check at; defaults to all initial states, conjunctively.
        #[arg(long)]
        state: Option<String>,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Subjective)]
        semantics: SemanticsArg,
        /// Replace every indistinguishability relation by the identity.
        #[arg(long)]
        identity: bool,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Generate a random iCGS.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        agents: usize,
        #[arg(long, default_value_t = 2)]
        actions: usize,
        #[arg(long, default_value_t = 2)]
        classes: usize,
        #[arg(long, default_value_t = 1)]
        initial: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare verdicts on generated models and their compilations.
    Xvalidate {
        #[command(flatten)]
        batch: BatchArgs,
        #[command(flatten)]
        reduction: ReductionArgs,
        /// Write a repro bundle per disagreement under this directory.
        #[arg(long)]
        bundles: Option<PathBuf>,
    },
    /// Run xvalidate over every label-mode and initial-label setting.
    Calibrate {
        #[command(flatten)]
        batch: BatchArgs,
    },
    /// Re-run a repro bundle.
    Replay { dir: PathBuf },
    /// Report well-formedness of an iCGS or vCGS file.
    Validate { file: PathBuf },
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, value_enum, default_value_t = SemanticsArg::Subjective)]
    semantics: SemanticsArg,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReductionArgs {
    #[arg(long, value_enum, default_value_t = LabelArg::Source)]
    label_mode: LabelArg,
    /// Also set the proposition atoms of the initial state at init time.
    #[arg(long)]
    label_initial: bool,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Full)]
    protocol: ProtocolArg,
}

impl ReductionArgs {
    fn config(&self) -> ReductionConfig {
        ReductionConfig {
            label_mode: match self.label_mode {
                LabelArg::Source => LabelMode::LabelSource,
                LabelArg::Target => LabelMode::LabelTarget,
            },
            initial_label_mode: if self.label_initial { InitialLabelMode::LabelInitial } else { InitialLabelMode::None },
            protocol_mode: match self.protocol {
                ProtocolArg::Full => ProtocolMode::Full,
                ProtocolArg::Restrict => ProtocolMode::Restrict,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelArg {
    Source,
    Target,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Full,
    Restrict,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Subjective,
    Objective,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Subjective => Semantics::Subjective,
            SemanticsArg::Objective => Semantics::Objective,
        }
    }
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn emit(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(p.to_owned(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn is_vcgs(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "vcgs")
}

fn load_model(path: &Path, bound: usize) -> Res<Icgs> {
    let text = read(path)?;
    if is_vcgs(path) {
        let v = parse_vcgs(&text)?;
        Ok(Machine::new(&v)?.unfold(bound)?.model)
    } else {
        Ok(parse_icgs(&text)?)
    }
}

fn verdict(b: bool) -> ExitCode {
    ExitCode::from(if b { 0 } else { 1 })
}

fn run(cli: Cli) -> Res<ExitCode> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.cmd {
        Cmd::Compile { model, output, reduction } => {
            let m = parse_icgs(&read(&model)?)?;
            let r = reduce(&m, &reduction.config())?;
            let text = print_vcgs(&r.vcgs);
            let report = size_report(&r.vcgs);
            emit(output.as_deref(), &text)?;
            if output.is_some() {
                print!("{report}");
            } else {
                eprint!("{report}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Unfold { vcgs, bound, output } => {
            let v = parse_vcgs(&read(&vcgs)?)?;
            let un = Machine::new(&v)?.unfold(bound)?;
            emit(output.as_deref(), &print_icgs(&un.model))?;
            let s = &un.stats;
            let mut stats = format!("states {} edges {} initial {}\n", s.states, s.edges, s.initial);
            for (phase, n) in &s.phases {
                stats.push_str(&format!("  {phase}: {n}\n"));
            }
            if !s.refined.is_empty() {
                stats.push_str(&format!("refined by enabled commands: {}\n", s.refined.join(" ")));
            }
            if output.is_some() {
                print!("{stats}");
            } else {
                eprint!("{stats}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check { file, formula, dialect, state, semantics, identity, bound } => {
            let mut m = load_model(&file, bound)?;
            if identity {
                m = m.with_identity_indist();
            }
            let f = parse_formula(&formula, dialect)?;
            let cfg = CheckConfig::new(dialect).with_semantics(semantics.into()).with_exec(exec);
            let states: Vec<StateId> = match &state {
                Some(name) => vec![m
                    .state_id(name)
                    .ok_or_else(|| Error::Unknown { kind: "state", name: name.clone() })?],
                None => m.initial().to_vec(),
            };
            let mut checker = Checker::new(&m, cfg)?;
            let sat = checker.sat(&f)?;
            let holds = states.iter().all(|s| sat[s.index()]);
            println!("{holds}");
            if holds && matches!(f, Formula::Coalition(..)) {
                for &s in &states {
                    if let Some(w) = checker.witness(s, &f)? {
                        println!("witness at {}:", m.state_name(s));
                        println!("{}", w.display(&m));
                    }
                }
            }
            Ok(verdict(holds))
        }
        Cmd::Gen { seed, states, agents, actions, classes, initial, output } => {
            let p = GenParams { states, agents, actions, classes, initial, ..GenParams::default() };
            emit(output.as_deref(), &print_icgs(&gen_icgs(&p, seed)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Xvalidate { batch, reduction, bundles } => {
            let p = XValParams {
                seed: batch.seed,
                count: batch.count,
                config: reduction.config(),
                semantics: batch.semantics.into(),
                bound: batch.bound,
                ..XValParams::default()
            };
            let report = xvalidate(&p, exec)?;
            if batch.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{report}");
            }
            if let Some(dir) = bundles {
                for r in report.disagreements() {
                    let (m, f, _) = atlvis::xval::instance(&p, r.index)?;
                    let sub = dir.join(format!("seed{}-{}", p.seed, r.index));
                    write_bundle(&sub, &m, &f, &p.config, p.semantics, p.bound, Some((p.seed, r.index)))?;
                    eprintln!("wrote {}", sub.display());
                }
            }
            Ok(verdict(report.disagreed == 0))
        }
        Cmd::Calibrate { batch } => {
            let p = XValParams {
                seed: batch.seed,
                count: batch.count,
                semantics: batch.semantics.into(),
                bound: batch.bound,
                ..XValParams::default()
            };
            let report = calibrate(&p, exec)?;
            if batch.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{report}");
            }
            Ok(verdict(!report.perfect.is_empty()))
        }
        Cmd::Replay { dir } => {
            let r = replay(&dir)?;
            println!("formula  {}: M={} Δ={}", r.case.formula, r.full.verdict_model, r.full.verdict_reduced);
            println!("shrunk   {}: M={} Δ={}", r.case.shrunk, r.shrunk.verdict_model, r.shrunk.verdict_reduced);
            println!("config {} semantics {}", r.case.config, r.case.semantics);
            if !r.delta_matches {
                println!("note: delta.vcgs differs from a fresh compilation");
            }
            println!("{}", if r.reproduces() { "reproduced" } else { "not reproduced" });
            Ok(verdict(r.reproduces()))
        }
        Cmd::Validate { file } => {
            let text = read(&file)?;
            if is_vcgs(&file) {
                let report = well_formedness(&parse_vcgs(&text)?);
                for e in &report.errors {
                    println!("error: {e}");
                }
                for w in &report.warnings {
                    println!("warning: {w}");
                }
                if report.is_clean() {
                    println!("ok");
                }
                Ok(if report.errors.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(3) })
            } else {
                let report = parse_icgs(&text)?.validate();
                if report.is_clean() {
                    println!("ok");
                    Ok(ExitCode::SUCCESS)
                } else {
                    print!("{report}");
                    Ok(ExitCode::from(3))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource() { 4 } else { 3 })
        }
    }
}
