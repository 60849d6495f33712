//! `fixit`: learn command-repair rules from examples and suggest fixes.
//!
//! Exit codes: 0 success, 1 I/O or store failure, 2 malformed input,
//! 3 no suggestion, 4 unknown rule id, 5 evaluation below 100% accuracy.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;

use fixit::bench::{self, Mode};
use fixit::display;
use fixit::dsl::tokenize;
use fixit::partition::{learn_rules, LearnConfig};
use fixit::store::RuleStore;
use fixit::synthesis::{concretize, count_concrete, Example, SynthConfig};

#[derive(Parser)]
#[command(name = "fixit", version, about = "Learn command repairs from examples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn rules from a JSON-lines example file and merge them into the store.
    Learn {
        #[arg(long)]
        examples: PathBuf,
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_offset: u32,
        #[arg(long, default_value_t = 10)]
        max_group: usize,
    },
    /// Print fixed commands for a failing command, best first.
    Suggest {
        #[arg(long)]
        cmd: String,
        #[arg(long, default_value = "")]
        err: String,
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        top: Option<usize>,
    },
    /// List stored rules, or enumerate the concrete rules of one.
    Show {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, value_name = "ID")]
        concretize: Option<String>,
        /// Most concrete rules to print.
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Check that the store suggests the expected fix for every example.
    Test {
        #[arg(long)]
        examples: PathBuf,
        #[arg(long)]
        store: PathBuf,
    },
    /// Time synthesis on repeated-token examples; prints CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 4, 8])]
        sizes: Vec<usize>,
        #[arg(long)]
        non_lazy: bool,
        /// Timed runs per size; the median is reported.
        #[arg(long, default_value_t = 3)]
        runs: usize,
    },
}

enum Failure {
    Io(String),
    Input(String),
    NoSuggestion,
    UnknownId(String),
    Inaccurate,
    Output(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Output(_) => 1,
            Failure::Input(_) => 2,
            Failure::NoSuggestion => 3,
            Failure::UnknownId(_) => 4,
            Failure::Inaccurate => 5,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    cmd: String,
    #[serde(default)]
    err: String,
    fix: String,
}

fn read_examples(path: &Path) -> Result<Vec<Example>, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| Failure::Input(format!("{}:{}: {msg}", path.display(), n + 1));
        let record: Record = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let example = Example::parse(&record.cmd, &record.err, &record.fix)
            .map_err(|e| bad(e.to_string()))?;
        out.push(example);
    }
    Ok(out)
}

fn load_store(path: &Path) -> Result<RuleStore, Failure> {
    RuleStore::load_or_default(path).map_err(|e| Failure::Io(e.to_string()))
}

fn learn(
    out: &mut impl Write,
    examples: &Path,
    store_path: &Path,
    max_offset: u32,
    max_group: usize,
) -> Result<(), Failure> {
    let es = read_examples(examples)?;
    let mut store = load_store(store_path)?;
    let cfg = LearnConfig {
        synth: SynthConfig {
            max_offset,
            ..SynthConfig::default()
        },
        max_group,
    };
    let result = learn_rules(&es, &cfg);
    for learned in &result.rules {
        let id = store.insert(learned.rule.clone(), chrono::Utc::now());
        writeln!(
            out,
            "{id}  shape {}  examples {}  concrete {}",
            learned.shape,
            learned.examples.len(),
            count_concrete(&learned.rule)
        )?;
    }
    for shape in &result.greedy_groups {
        eprintln!("warning: group {shape} too large for exhaustive search, split greedily");
    }
    for e in &result.unexplained {
        eprintln!("warning: no rule for {:?}", e.cmd.join());
    }
    store
        .save(store_path)
        .map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out, "{} rules learned", result.rules.len())?;
    Ok(())
}

fn suggest(
    out: &mut impl Write,
    cmd: &str,
    err: &str,
    store_path: &Path,
    top: Option<usize>,
) -> Result<(), Failure> {
    let store = RuleStore::load(store_path).map_err(|e| Failure::Io(e.to_string()))?;
    let found = store.suggest(&tokenize(cmd), &tokenize(err));
    if found.is_empty() {
        return Err(Failure::NoSuggestion);
    }
    for s in found.iter().take(top.unwrap_or(usize::MAX)) {
        writeln!(out, "{}", s.fixed_command.join())?;
    }
    Ok(())
}

fn show(
    out: &mut impl Write,
    store_path: &Path,
    id: Option<&str>,
    limit: usize,
) -> Result<(), Failure> {
    let store = RuleStore::load(store_path).map_err(|e| Failure::Io(e.to_string()))?;
    let Some(id) = id else {
        for r in store.rules() {
            writeln!(
                out,
                "# {}  ({} examples, {})",
                r.id,
                r.rule.example_count(),
                r.created_at.to_rfc3339()
            )?;
            writeln!(out, "{}\n", display::symbolic_rule(&r.rule, 3))?;
        }
        return Ok(());
    };
    let stored = store
        .get(id)
        .ok_or_else(|| Failure::UnknownId(id.to_owned()))?;
    let total = count_concrete(&stored.rule);
    writeln!(out, "# {id}: {total} concrete rules")?;
    for (n, rule) in concretize(&stored.rule).take(limit).enumerate() {
        writeln!(out, "## {}\n{}", n + 1, display::concrete_rule(&rule))?;
    }
    if total > limit.into() {
        writeln!(out, "# ... {} more", total - limit)?;
    }
    Ok(())
}

fn test(out: &mut impl Write, examples: &Path, store_path: &Path) -> Result<(), Failure> {
    let es = read_examples(examples)?;
    let store = RuleStore::load(store_path).map_err(|e| Failure::Io(e.to_string()))?;
    let (mut by_one, mut by_many, mut unmatched) = (0usize, 0usize, 0usize);
    for e in &es {
        let found = store.suggest(&e.cmd, &e.err);
        if !found.iter().any(|s| s.fixed_command == e.fix) {
            unmatched += 1;
            writeln!(out, "miss: {}", e.cmd.join())?;
        } else if found.len() == 1 {
            by_one += 1;
        } else {
            by_many += 1;
        }
    }
    let total = es.len();
    let accuracy = if total == 0 {
        1.0
    } else {
        (by_one + by_many) as f64 / total as f64
    };
    writeln!(out, "matched by one rule: {by_one}")?;
    writeln!(out, "matched by many rules: {by_many}")?;
    writeln!(out, "unmatched: {unmatched}")?;
    writeln!(
        out,
        "accuracy: {}/{} ({:.1}%)",
        by_one + by_many,
        total,
        accuracy * 100.0
    )?;
    if unmatched == 0 {
        Ok(())
    } else {
        Err(Failure::Inaccurate)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let out = &mut stdout.lock();
    match cli.command {
        Command::Learn {
            examples,
            store,
            max_offset,
            max_group,
        } => learn(out, &examples, &store, max_offset, max_group),
        Command::Suggest {
            cmd,
            err,
            store,
            top,
        } => suggest(out, &cmd, &err, &store, top),
        Command::Show {
            store,
            concretize,
            limit,
        } => show(out, &store, concretize.as_deref(), limit),
        Command::Test { examples, store } => test(out, &examples, &store),
        Command::Bench {
            sizes,
            non_lazy,
            runs,
        } => {
            let mode = if non_lazy { Mode::NonLazy } else { Mode::Lazy };
            out.write_all(bench::to_csv(&bench::run(&sizes, mode, runs)).as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Io(msg) | Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::UnknownId(id) => eprintln!("error: no rule with id {id}"),
                Failure::Output(e) => eprintln!("error: writing output: {e}"),
                Failure::NoSuggestion | Failure::Inaccurate => {}
            }
            ExitCode::from(f.code())
        }
    }
}
