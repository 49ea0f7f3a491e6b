use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use handlecalc::commands::{self, KnotSpec};
use handlecalc::report::{error_exit_code, OutputFormat, Report, RunConfig, DEFAULT_ENGINE, DEFAULT_MAX_DEPTH, DEFAULT_SEED};
use handlecalc::search::{default_max_states, SearchProblem};
use handlecalc::suite::suite_cmd;
use handlecalc::{Error, FramedLink, MoveScript, Result};

#[derive(Parser)]
#[command(name = "handlecalc", version, about = "Handle-calculus verification runs with replayable certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Search engine: bfs or bfs-parallel.
    #[arg(long, global = true, default_value = DEFAULT_ENGINE)]
    engine: String,
    /// Force one cancellation strategy instead of registry selection.
    #[arg(long, global = true)]
    strategy: Option<String>,
    /// Oracle depth bound.
    #[arg(long, global = true)]
    max_depth: Option<usize>,
    /// Oracle state budget; defaults to HANDLECALC_MAX_STATES or 2000000.
    #[arg(long, global = true)]
    max_states: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the three forms of the global monodromy word.
    VerifyMonodromy { n: u32 },
    /// Slide k parallel -1 cycles into a -2-chain.
    BuildChain {
        k: usize,
        /// Cross-validate the script with the oracle search.
        #[arg(long)]
        verify: bool,
    },
    /// Unlink a pair with mutual linking -m over a -2-chain of length m+1.
    Unlink {
        m: i64,
        /// Include the starting diagram and the full move script.
        #[arg(long)]
        emit_script: bool,
    },
    /// Feasibility of cancelling all 1-handles after knot surgery.
    CheckKnotSurgery {
        #[arg(long)]
        n: u32,
        #[arg(long, required_unless_present = "torus", conflicts_with = "torus")]
        bridge: Option<u32>,
        /// Use the torus knot T(p,q).
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        torus: Option<Vec<u64>>,
    },
    /// Feasibility of cancelling all 1-handles after a log transform.
    CheckLogTransform {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
    /// Invariants of a link file (schema flk-1).
    Invariants { file: PathBuf },
    /// Replay a move script (mvs-1) on a link (flk-1) with per-step checks.
    Replay { link: PathBuf, script: PathBuf },
    /// Run the oracle search on a problem file.
    Search { problem: PathBuf },
    /// Time oracle searches on the unlinking instances.
    Bench {
        #[arg(long, default_value_t = 4)]
        max_m: i64,
    },
    /// Run the deterministic full suite.
    Suite,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn config(cli: &Cli) -> RunConfig {
    let g = &cli.global;
    let mut cfg = RunConfig::new(name(&cli.command));
    cfg.format = match g.format {
        Format::Json => OutputFormat::Json,
        Format::Text => OutputFormat::Text,
    };
    cfg.seed = g.seed;
    cfg.engine = g.engine.clone();
    cfg.strategy = g.strategy.clone();
    cfg.max_depth = g.max_depth.unwrap_or(DEFAULT_MAX_DEPTH);
    cfg.max_states = g.max_states.unwrap_or_else(default_max_states);
    match &cli.command {
        Command::VerifyMonodromy { n } => cfg.param("n", n),
        Command::BuildChain { k, verify } => cfg.param("k", k).param("verify", verify),
        Command::Unlink { m, emit_script } => cfg.param("m", m).param("emit_script", emit_script),
        Command::CheckKnotSurgery { n, bridge, torus } => cfg.param("n", n).param("bridge", bridge).param("torus", torus),
        Command::CheckLogTransform { n, p, q } => cfg.param("n", n).param("p", p).param("q", q),
        Command::Invariants { file } => cfg.param("file", file),
        Command::Replay { link, script } => cfg.param("link", link).param("script", script),
        Command::Search { problem } => cfg.param("problem", problem),
        Command::Bench { max_m } => cfg.param("max_m", max_m),
        Command::Suite => cfg,
    }
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::VerifyMonodromy { .. } => "verify-monodromy",
        Command::BuildChain { .. } => "build-chain",
        Command::Unlink { .. } => "unlink",
        Command::CheckKnotSurgery { .. } => "check-knot-surgery",
        Command::CheckLogTransform { .. } => "check-log-transform",
        Command::Invariants { .. } => "invariants",
        Command::Replay { .. } => "replay",
        Command::Search { .. } => "search",
        Command::Bench { .. } => "bench",
        Command::Suite => "suite",
    }
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Report> {
    match &cli.command {
        Command::VerifyMonodromy { n } => commands::verify_monodromy(cfg, *n),
        Command::BuildChain { k, verify } => commands::build_chain_cmd(cfg, *k, *verify),
        Command::Unlink { m, emit_script } => commands::unlink_cmd(cfg, *m, *emit_script),
        Command::CheckKnotSurgery { n, bridge, torus } => {
            let knot = match (bridge, torus.as_deref()) {
                (Some(b), _) => KnotSpec::Bridge(*b),
                (None, Some([p, q])) => KnotSpec::Torus(*p, *q),
                _ => return Err(Error::invalid("give --bridge B or --torus P Q")),
            };
            commands::check_knot_surgery_cmd(cfg, *n, knot)
        }
        Command::CheckLogTransform { n, p, q } => commands::check_log_transform_cmd(cfg, *n, *p, *q),
        Command::Invariants { file } => commands::invariants_cmd(cfg, &FramedLink::from_json(&read(file)?)?),
        Command::Replay { link, script } => {
            let link = FramedLink::from_json(&read(link)?)?;
            let script = MoveScript::from_json(&read(script)?)?;
            commands::replay_cmd(cfg, &link, &script)
        }
        Command::Search { problem } => {
            let mut p: SearchProblem = serde_json::from_str(&read(problem)?).map_err(|e| Error::Schema(e.to_string()))?;
            if let Some(d) = cli.global.max_depth {
                p.max_depth = d;
            }
            if let Some(s) = cli.global.max_states {
                p.max_states = s;
            }
            let cfg = RunConfig { max_depth: p.max_depth, max_states: p.max_states, ..cfg.clone() };
            commands::search_cmd(&cfg, &p)
        }
        Command::Bench { max_m } => commands::bench_cmd(cfg, *max_m),
        Command::Suite => suite_cmd(cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let cfg = config(&cli);
    match run(&cli, &cfg) {
        Ok(report) => {
            let report = report.stamped();
            println!("{}", report.render(cfg.format).trim_end());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
