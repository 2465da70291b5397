// SPDX-License-Identifier: Apache-2.0
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use subreg::automata::{parse_automata, Alphabet, Automaton, DEFAULT_DETERMINIZE_CAP};
use subreg::classify::{classify_with, ClassifyOptions, DEFAULT_MONOID_CAP};
use subreg::generators::{
    gap1_to_dfa, gap2_to_nfa, l_nfa, m_nfa, monoid_to_ine, mpp_nfa, sat_to_commutative_ine,
    separation_report, vertex_cover_to_ine, zimin, CnfFormula, Graph, TransformationSystem,
};
use subreg::ine::{
    alternative_strategies, solve, IneInstance, IneResult, Limits, Promise, SolveOptions,
    Strategy,
};
use subreg::ponfa::ponfa_merge_minimize;
use subreg::random::{random_instance, Shape};
use subreg::unary::{star_free_threshold, unary_lengths};

const DET_CAP_VAR: &str = "SUBREG_DET_CAP";
const MONOID_CAP_VAR: &str = "SUBREG_MONOID_CAP";

/// Intersection non-emptiness for subregular automata.
#[derive(Parser, Debug)]
#[command(name = "subreg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the class flags of every automaton in a file.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the automata share a word.
    Ine {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Promised class; read from a `# promise:` line when absent.
        #[arg(long)]
        promise: Option<Promise>,
        #[arg(long)]
        strategy: Option<Strategy>,
        #[arg(long)]
        certify: bool,
        /// Skip promise verification.
        #[arg(long)]
        no_verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write a generated instance or word to stdout.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
    /// Merge states of a partially ordered NFA with equal residuals.
    PonfaMinimize {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the accepted lengths of a unary automaton.
    UnaryLengths {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run every applicable strategy and print CSV timings.
    Bench {
        /// Instance files; random instances are used when none are given.
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Promise of the random instances; all promises when absent.
        #[arg(long)]
        promise: Option<Promise>,
    },
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// Vertex cover of size at most k.
    Vc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Satisfiability of a CNF formula.
    Sat {
        #[arg(long)]
        cnf: PathBuf,
    },
    /// The Zimin word of order n.
    Zimin { n: usize },
    /// Automaton for the language M_n.
    Mn { n: usize },
    /// Automaton for the language M''_n.
    Mpp { n: usize },
    /// Automaton for the binary encoding L_n.
    Ln { n: usize },
    /// Reachability in a DAG as a partially ordered NFA.
    Gap2 {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Reachability in an outdegree-one DAG as a DFA.
    Gap1 {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Transformation monoid membership.
    Monoid {
        #[arg(long)]
        system: PathBuf,
    },
    /// Sizes around the Zimin word of order n.
    Separation {
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Input(String),
    Run(String),
    Disagreement(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Input(_) => 65,
            Failure::Run(_) => 2,
            Failure::Disagreement(_) => 70,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Run(m) | Failure::Disagreement(m) => m,
        }
    }
}

fn run_err(e: impl Display) -> Failure {
    Failure::Run(e.to_string())
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 64 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Outcome {
    let limits = limits_from_env()?;
    match command {
        Command::Classify { file, json } => classify(&file, json, &limits),
        Command::Ine {
            files,
            promise,
            strategy,
            certify,
            no_verify,
            json,
        } => {
            let opts = SolveOptions {
                limits,
                certify,
                verify_promise: !no_verify,
                strategy,
            };
            ine(&files, promise, &opts, json)
        }
        Command::Generate { what } => generate(what),
        Command::PonfaMinimize { file, json } => ponfa_minimize(&file, json),
        Command::UnaryLengths { file, json } => lengths(&file, json, &limits),
        Command::Bench {
            files,
            count,
            seed,
            promise,
        } => bench(&files, count, seed, promise, &limits),
    }
}

fn env_cap(var: &str, default: usize) -> Result<usize, Failure> {
    match std::env::var(var) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{var} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(default),
    }
}

fn limits_from_env() -> Result<Limits, Failure> {
    Ok(Limits {
        determinize_cap: env_cap(DET_CAP_VAR, DEFAULT_DETERMINIZE_CAP)?,
        monoid_cap: env_cap(MONOID_CAP_VAR, DEFAULT_MONOID_CAP)?,
        ..Limits::default()
    })
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Vec<Automaton>, Failure> {
    let text = read(path)?;
    let list = parse_automata(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if list.is_empty() {
        return Err(Failure::Input(format!("{}: no automaton found", path.display())));
    }
    Ok(list)
}

/// Promise recorded by `generate` as a `# promise: NAME` comment.
fn promise_comment(text: &str) -> Option<Promise> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .filter_map(|l| l.trim().strip_prefix("promise:"))
        .find_map(|p| p.trim().parse().ok())
}

fn load_instance(files: &[PathBuf], promise: Option<Promise>) -> Result<IneInstance, Failure> {
    let mut list = Vec::new();
    let mut recorded = None;
    for f in files {
        let text = read(f)?;
        recorded = recorded.or(promise_comment(&text));
        list.extend(load(f)?);
    }
    IneInstance::new(list, promise.or(recorded).unwrap_or(Promise::None))
        .map_err(|e| Failure::Input(e.to_string()))
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable value"));
}

fn format_witness(alphabet: &Alphabet, word: &[usize]) -> String {
    if word.is_empty() {
        "ε".to_string()
    } else {
        alphabet.format_word(word)
    }
}

fn classify(file: &Path, json: bool, limits: &Limits) -> Outcome {
    let opts = ClassifyOptions {
        determinize_cap: limits.determinize_cap,
        monoid_cap: limits.monoid_cap,
    };
    let list = load(file)?;
    let reports = list
        .iter()
        .map(|a| classify_with(a, &opts))
        .collect::<Result<Vec<_>, _>>()
        .map_err(run_err)?;
    if json {
        print_json(&reports);
    } else {
        for (i, (a, r)) in list.iter().zip(&reports).enumerate() {
            if list.len() > 1 {
                if i > 0 {
                    println!();
                }
                println!("name={}", a.name().map_or_else(|| i.to_string(), str::to_string));
            }
            print!("{r}");
        }
    }
    Ok(0)
}

fn ine(files: &[PathBuf], promise: Option<Promise>, opts: &SolveOptions, json: bool) -> Outcome {
    let inst = load_instance(files, promise)?;
    let result = solve(&inst, opts).map_err(run_err)?;
    let alphabet = inst.automata()[0].alphabet();
    if json {
        print_json(&json!({
            "nonempty": result.nonempty,
            "witness": result.witness.as_ref().map(|w| alphabet.format_word(w)),
            "witness_letters": result.witness,
            "strategy": result.strategy,
            "promise": inst.promise(),
            "promise_checked": result.promise_checked,
        }));
    } else {
        match &result.witness {
            Some(w) => println!("witness: {}", format_witness(alphabet, w)),
            None => println!("empty"),
        }
        println!("strategy: {}", result.strategy);
        println!("promise: {} (checked: {})", inst.promise(), result.promise_checked);
    }
    Ok(if result.nonempty { 0 } else { 1 })
}

fn print_instance(inst: &IneInstance) {
    println!("# promise: {}", inst.promise());
    for (i, a) in inst.automata().iter().enumerate() {
        if i > 0 {
            println!();
        }
        print!("{a}");
    }
}

fn parse_input<T>(path: &Path, parse: impl Fn(&str) -> subreg::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn generate(what: Generate) -> Outcome {
    match what {
        Generate::Vc { graph, k } => {
            let g = parse_input(&graph, Graph::parse)?;
            print_instance(&vertex_cover_to_ine(&g, k).map_err(run_err)?);
        }
        Generate::Sat { cnf } => {
            let f = parse_input(&cnf, CnfFormula::parse_dimacs)?;
            print_instance(&sat_to_commutative_ine(&f).map_err(run_err)?);
        }
        Generate::Zimin { n } => {
            let w = zimin(n).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{}", Alphabet::numeric(n).map_err(run_err)?.format_word(&w));
        }
        Generate::Mn { n } => print!("{}", m_nfa(n).map_err(|e| Failure::Usage(e.to_string()))?),
        Generate::Mpp { n } => print!("{}", mpp_nfa(n).map_err(|e| Failure::Usage(e.to_string()))?),
        Generate::Ln { n } => print!("{}", l_nfa(n).map_err(|e| Failure::Usage(e.to_string()))?),
        Generate::Gap2 { graph, s, t } => {
            let g = parse_input(&graph, Graph::parse)?;
            print!("{}", gap2_to_nfa(&g, s, t).map_err(run_err)?);
        }
        Generate::Gap1 { graph, s, t } => {
            let g = parse_input(&graph, Graph::parse)?;
            print!("{}", gap1_to_dfa(&g, s, t).map_err(run_err)?.automaton());
        }
        Generate::Monoid { system } => {
            let ts = parse_input(&system, TransformationSystem::parse)?;
            print_instance(&monoid_to_ine(&ts).map_err(run_err)?);
        }
        Generate::Separation { n, json } => {
            let r = separation_report(n).map_err(|e| Failure::Usage(e.to_string()))?;
            if json {
                print_json(&r);
            } else {
                println!("n={}", r.n);
                println!("zimin_length={}", r.zimin_length);
                println!("ones={}", r.ones);
                println!("m_nfa_states={}", r.m_nfa_states);
                println!("accepted={}", r.accepted);
                println!("deletions_rejected={}", r.deletions_rejected);
                println!("ponfa_lower_bound={}", r.ponfa_lower_bound);
            }
        }
    }
    Ok(0)
}

fn ponfa_minimize(file: &Path, json: bool) -> Outcome {
    let list = load(file)?;
    let mut outputs = Vec::new();
    for a in &list {
        let (m, trace) = ponfa_merge_minimize(a).map_err(run_err)?;
        outputs.push((m, trace));
    }
    if json {
        let v: Vec<_> = outputs
            .iter()
            .map(|(m, t)| json!({ "automaton": m.to_string(), "states": m.state_count(), "trace": t }))
            .collect();
        print_json(&v);
    } else {
        for (i, (m, t)) in outputs.iter().enumerate() {
            if i > 0 {
                println!();
            }
            println!("# {} merges", t.events.len());
            print!("{m}");
        }
    }
    Ok(0)
}

fn lengths(file: &Path, json: bool, limits: &Limits) -> Outcome {
    let list = load(file)?;
    let mut rows = Vec::new();
    for a in &list {
        let set = unary_lengths(a, limits.determinize_cap).map_err(run_err)?;
        let threshold = star_free_threshold(a, limits.determinize_cap).map_err(run_err)?;
        rows.push((set, threshold));
    }
    if json {
        let v: Vec<_> = rows
            .iter()
            .map(|(s, t)| json!({ "lengths": s, "description": s.to_string(), "star_free_threshold": t }))
            .collect();
        print_json(&v);
    } else {
        for (s, t) in &rows {
            println!("lengths={s}");
            match t {
                Some(t) => println!("star_free_threshold={t}"),
                None => println!("star_free_threshold=none"),
            }
        }
    }
    Ok(0)
}

struct Row {
    strategy: Strategy,
    result: IneResult,
    seconds: f64,
}

fn run_all(inst: &IneInstance, limits: &Limits) -> Result<Vec<Row>, Failure> {
    let mut strategies = vec![None];
    strategies.extend(alternative_strategies(inst).into_iter().map(Some));
    strategies.push(Some(Strategy::Oracle));
    let mut rows = Vec::new();
    for strategy in strategies {
        if strategy == Some(Strategy::Oracle) && rows.iter().any(|r: &Row| r.strategy == Strategy::Oracle) {
            continue;
        }
        let opts = SolveOptions {
            limits: *limits,
            certify: false,
            verify_promise: false,
            strategy,
        };
        let start = Instant::now();
        let result = solve(inst, &opts).map_err(run_err)?;
        let seconds = start.elapsed().as_secs_f64();
        rows.push(Row {
            strategy: result.strategy,
            result,
            seconds,
        });
    }
    Ok(rows)
}

fn bench(files: &[PathBuf], count: usize, seed: u64, promise: Option<Promise>, limits: &Limits) -> Outcome {
    let mut instances = Vec::new();
    if files.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape::default();
        let promises: Vec<Promise> = match promise {
            Some(p) => vec![p],
            None => Promise::ALL.to_vec(),
        };
        for p in promises {
            for i in 0..count {
                instances.push((format!("{p}-{i}"), random_instance(&mut rng, p, &shape)));
            }
        }
    } else {
        for f in files {
            instances.push((f.display().to_string(), load_instance(std::slice::from_ref(f), promise)?));
        }
    }
    println!("instance,strategy,verdict,witness_length,seconds");
    let mut disagreements = Vec::new();
    for (label, inst) in &instances {
        let rows = run_all(inst, limits)?;
        let reference = rows
            .iter()
            .find(|r| r.strategy == Strategy::Oracle)
            .expect("oracle row")
            .result
            .nonempty;
        for r in &rows {
            let verdict = if r.result.nonempty { "nonempty" } else { "empty" };
            let len = r.result.witness.as_ref().map_or(String::new(), |w| w.len().to_string());
            println!("{label},{},{verdict},{len},{:.6}", r.strategy, r.seconds);
            if r.result.nonempty != reference {
                disagreements.push(format!("{label}: {} disagrees with the oracle", r.strategy));
            }
        }
    }
    if disagreements.is_empty() {
        Ok(0)
    } else {
        Err(Failure::Disagreement(disagreements.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn promise_comments() {
        assert_eq!(promise_comment("# promise: st1\nalphabet: a\n"), Some(Promise::St1));
        assert_eq!(promise_comment("#promise: commutative-sf\n"), Some(Promise::CommutativeSf));
        assert_eq!(promise_comment("# promise: nonsense\n"), None);
        assert_eq!(promise_comment("alphabet: a\n"), None);
    }

    #[test]
    fn empty_witness_prints_epsilon() {
        let a = Alphabet::from_chars("ab").unwrap();
        assert_eq!(format_witness(&a, &[]), "ε");
        assert_eq!(format_witness(&a, &[1, 0]), "ba");
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["subreg", "ine", "x.aut", "--promise", "st_half"]).unwrap();
        match cli.command {
            Command::Ine { promise, .. } => assert_eq!(promise, Some(Promise::StHalf)),
            other => panic!("parsed {other:?}"),
        }
    }
}
