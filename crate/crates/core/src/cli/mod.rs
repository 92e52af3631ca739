//! The `tiersynth` command line.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::automata::{dfa_to_dot, minimize, to_dfa_with, Caps};
use crate::domain::{load_domain, Domain};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ltlf::{parse_formula, Formula};
use crate::synthesis::{
    check_multitier, play, read_manifest, synth_multitier, write_bundle, EnvPolicy, GreedyAdversarial, GreedyCooperative,
    Interactive, PlayOutcome, RandomPolicy, Scripted, Termination,
};

#[derive(Debug, Parser)]
#[command(name = "tiersynth", version, about = "Adaptive strategy synthesis for multi-tier LTLf goals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate a planning domain.
    Validate {
        domain: PathBuf,
        /// Print a JSON report.
        #[arg(long)]
        json: bool,
    },
    /// Compile an LTLf formula to a DFA.
    Compile {
        formula: String,
        /// Comma-separated alphabet; defaults to the formula's atoms.
        #[arg(long, value_delimiter = ',')]
        atoms: Option<Vec<String>>,
        /// Write Graphviz output to a file, or `-` for stdout.
        #[arg(long)]
        dump_dot: Option<PathBuf>,
        #[arg(long)]
        minimize: bool,
        #[arg(long)]
        stats: bool,
    },
    /// Check that each goal strengthens the previous one over legal traces.
    CheckTiers { domain: PathBuf, goals: PathBuf },
    /// Synthesize all strategies and write a bundle directory.
    Synthesize {
        domain: PathBuf,
        goals: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Worker threads for the independent solves (1 = sequential).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the adaptive strategy against an environment.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub domain: PathBuf,
    #[arg(long, conflicts_with = "bundle", required_unless_present = "bundle")]
    pub goals: Option<PathBuf>,
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    /// scripted:R1,R2,... | random | greedy-adversarial | greedy-cooperative | interactive
    #[arg(long, default_value = "greedy-adversarial")]
    pub env: String,
    #[arg(long, default_value_t = 100)]
    pub max_steps: usize,
    /// Show the dispatch (j, l, m) behind every action.
    #[arg(long)]
    pub explain: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, stdin, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn load_domain_file(path: &Path) -> Result<Domain> {
    load_domain(&read(path)?)
}

pub fn load_goals_file(path: &Path) -> Result<Vec<Formula>> {
    let texts: Vec<String> = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::Schema(format!("goals file must be a JSON array of strings: {e}")))?;
    texts.iter().map(|t| parse_formula(t)).collect()
}

fn dispatch(command: Command, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { domain, json } => validate(&domain, json, out),
        Command::Compile {
            formula,
            atoms,
            dump_dot,
            minimize: min,
            stats,
        } => {
            let f = parse_formula(&formula)?;
            let atoms = atoms.unwrap_or_else(|| f.atoms());
            let mut dfa = to_dfa_with(&f, &atoms, &Caps::from_env())?;
            if min {
                dfa = minimize(&dfa)?;
            }
            if stats {
                writeln!(out, "states={} finals={}", dfa.num_states(), dfa.finals.len())?;
            }
            match dump_dot {
                Some(p) if p.as_os_str() == "-" => write!(out, "{}", dfa_to_dot(&dfa, &formula))?,
                Some(p) => fs::write(p, dfa_to_dot(&dfa, &formula))?,
                None if !stats => writeln!(out, "compiled: {} states, {} final", dfa.num_states(), dfa.finals.len())?,
                None => {}
            }
            Ok(0)
        }
        Command::CheckTiers { domain, goals } => {
            let d = load_domain_file(&domain)?;
            let goals = load_goals_file(&goals)?;
            match check_multitier(&d, &goals)? {
                None => {
                    writeln!(out, "ok: {} tier(s) form a multi-tier goal", goals.len())?;
                    Ok(0)
                }
                Some(cx) => {
                    let report = json!({
                        "valid": false,
                        "tier": cx.index + 1,
                        "weaker_tier": cx.index,
                        "trace": d.trace_to_document(&cx.trace),
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
                    Ok(2)
                }
            }
        }
        Command::Synthesize {
            domain,
            goals,
            output,
            jobs,
        } => {
            let d = Arc::new(load_domain_file(&domain)?);
            let goals = load_goals_file(&goals)?;
            let s = synth_multitier(&d, &goals, Execution::from_jobs(jobs))?;
            let m = write_bundle(&s, &output)?;
            writeln!(
                out,
                "wrote {}: {} single-objective and {} pair solves",
                output.display(),
                m.report.single_solves,
                m.report.pair_solves
            )?;
            Ok(0)
        }
        Command::Simulate(args) => simulate(args, stdin, out),
    }
}

fn validate(path: &Path, json: bool, out: &mut dyn Write) -> Result<i32> {
    let text = read(path)?;
    match load_domain(&text) {
        Ok(d) => {
            if json {
                let report = json!({
                    "valid": true,
                    "reachable_states": d.reachable_states().len(),
                    "sha256": d.fingerprint(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                writeln!(out, "ok: {} reachable states", d.reachable_states().len())?;
            }
            Ok(0)
        }
        Err(e) if json && e.exit_code() == 2 => {
            let mut report = json!({"valid": false, "kind": e.kind(), "message": e.to_string()});
            match &e {
                Error::Uniqueness { state, action, .. } => {
                    report["state"] = json!(state);
                    report["action"] = json!(action);
                }
                Error::DeadState { state } => report["state"] = json!(state),
                Error::DuplicateTransition { state, action, reaction } => {
                    report["state"] = json!(state);
                    report["action"] = json!(action);
                    report["reaction"] = json!(reaction);
                }
                _ => {}
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(2)
        }
        Err(e) => Err(e),
    }
}

fn simulate(args: SimulateArgs, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32> {
    let d = Arc::new(load_domain_file(&args.domain)?);
    let goals = match (&args.goals, &args.bundle) {
        (Some(g), _) => load_goals_file(g)?,
        (None, Some(dir)) => {
            let m = read_manifest(dir)?;
            if m.domain_sha256 != d.fingerprint() {
                return Err(Error::BundleMismatch("bundle was synthesized for a different domain".into()));
            }
            m.goals.iter().map(|g| parse_formula(g)).collect::<Result<Vec<_>>>()?
        }
        (None, None) => return Err(Error::NoGoals),
    };
    let synth = Arc::new(synth_multitier(&d, &goals, Execution::Parallel)?);
    let mut executor = synth.executor();

    let outcome = {
        let mut policy: Box<dyn EnvPolicy + '_> = match args.env.as_str() {
            "random" => Box::new(RandomPolicy::new(args.seed)),
            "greedy-adversarial" => Box::new(GreedyAdversarial),
            "greedy-cooperative" => Box::new(GreedyCooperative),
            "interactive" => Box::new(Interactive::new(&mut *stdin, &mut *out, args.explain)),
            other => match other.strip_prefix("scripted:") {
                Some(list) => Box::new(Scripted::new(&d, &list.split(',').map(str::trim).collect::<Vec<_>>())?),
                None => {
                    return Err(Error::UnknownName {
                        kind: "environment policy",
                        name: other.to_string(),
                    })
                }
            },
        };
        play(&mut executor, policy.as_mut(), args.max_steps)?
    };
    report_play(&d, &outcome, args.explain, args.json, out)?;
    Ok(0)
}

fn report_play(d: &Domain, o: &PlayOutcome, explain: bool, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let termination = match o.termination {
        Termination::Stopped => "stopped",
        Termination::Truncated => "truncated",
    };
    let violation = o.env_violation.map(|(a, r)| (d.action_name(a).to_string(), d.reaction_name(r).to_string()));
    if as_json {
        let mut report = json!({
            "trace": d.trace_to_document(&o.trace),
            "termination": termination,
            "env_violation": violation.as_ref().map(|(a, r)| json!({"action": a, "reaction": r})),
            "verdicts": o.verdicts,
            "highest_tier": o.highest_tier(),
        });
        if explain {
            report["dispatches"] = json!(o.dispatches.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        return Ok(());
    }
    let show = |s| format!("{{{}}}", d.state_names(s).join(","));
    writeln!(out, "start {}", show(o.trace.states[0]))?;
    for (i, &(a, r)) in o.trace.moves.iter().enumerate() {
        if explain {
            writeln!(out, "  dispatch: {}", o.dispatches[i])?;
        }
        writeln!(
            out,
            "step {}: {} / {} -> {}",
            i + 1,
            d.action_name(a),
            d.reaction_name(r),
            show(o.trace.states[i + 1])
        )?;
    }
    if let Some((a, r)) = &violation {
        writeln!(out, "environment violated the domain: {a} / {r}")?;
    }
    if explain {
        if let Some(last) = o.dispatches.last() {
            writeln!(out, "  dispatch: {last}")?;
        }
    }
    writeln!(out, "play {termination} after {} step(s)", o.trace.len() + usize::from(violation.is_some()))?;
    for (i, v) in o.verdicts.iter().enumerate() {
        writeln!(out, "tier {} {}", i + 1, if *v { "satisfied" } else { "not satisfied" })?;
    }
    writeln!(out, "highest tier satisfied: {}", o.highest_tier())?;
    Ok(())
}
