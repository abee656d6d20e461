use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cgdlab::disk::extract_disk;
use cgdlab::dot::to_dot;
use cgdlab::dynamics::{Dynamics, DynamicsError};
use cgdlab::graph::{Graph, VertexName};
use cgdlab::io::{read_graph, read_rule, write_graph, write_rule};
use cgdlab::library::{example, ExampleRule, EXAMPLE_NAMES};
use cgdlab::monotonizer::{simulate, MonotonizedRule};
use cgdlab::verify::{
    graph_category_checks, run_suite, user_rule_checks, Check, Report, Suite, VerifyConfig,
};

#[derive(Parser)]
#[command(
    name = "cgdlab",
    version,
    about = "Causal graph dynamics over labeled port graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Semantics {
    Cgd,
    Kan,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate a rule, writing step_K.json and step_K.dot for every step.
    Run {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, value_enum, default_value = "cgd")]
        semantics: Semantics,
        /// Sub-disk enumeration cap per vertex (Kan semantics).
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Print the disk of the given radius around a vertex.
    Disk {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: usize,
    },
    /// Turn a table rule into its monotonic simulation.
    Monotonize {
        #[arg(long)]
        rule: PathBuf,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the monotonic dynamics on the encoded graph with the
    /// encoding of the original dynamics.
    Simulate {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Check the comma-category construction for one graph.
    VerifyCategory {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Run a property suite and print a JSON report.
    Verify {
        #[arg(value_parser = Suite::NAMES)]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        cap: Option<usize>,
        /// Check this rule file instead of the shipped examples (localrule only).
        #[arg(long)]
        rule: Option<PathBuf>,
        /// Small corpora, for a fast smoke run.
        #[arg(long)]
        quick: bool,
    },
    /// Print a graph in Graphviz format.
    ExportDot {
        #[arg(long)]
        graph: PathBuf,
    },
    /// The shipped example rules.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
    /// Print an example rule, or write it and its fixtures to a directory.
    Show {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        let code = match e {
            DynamicsError::KanUndefined { .. } => 2,
            DynamicsError::Inconsistent { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    read_graph(&read_text(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_rule(path: &Path) -> Result<ExampleRule, Failure> {
    read_rule(&read_text(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn create_dir(path: &Path) -> CmdResult {
    fs::create_dir_all(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn check_signature(rule: &ExampleRule, g: &Graph) -> CmdResult {
    if rule.local_rule().signature() != g.signature() {
        return Err(Failure::input(
            "graph and rule are over different signatures",
        ));
    }
    Ok(())
}

fn print_table(checks: &[Check]) -> bool {
    for c in checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!("{status}  {:<36} {}", c.proposition_id, c.detail);
        if let Some(w) = &c.witness {
            println!("      witness: {w}");
        }
    }
    checks.iter().all(Check::passed)
}

fn run(
    rule: &Path,
    graph: &Path,
    steps: usize,
    semantics: Semantics,
    cap: usize,
    out: &Path,
) -> CmdResult {
    let rule = load_rule(rule)?;
    let mut g = load_graph(graph)?;
    check_signature(&rule, &g)?;
    let dynamics = Dynamics::from_arc(rule.local_rule());
    create_dir(out)?;
    for k in 0..=steps {
        write(&out.join(format!("step_{k}.json")), &write_graph(&g))?;
        write(&out.join(format!("step_{k}.dot")), &to_dot(&g))?;
        println!(
            "step {k}: {} vertices, {} edges",
            g.vertex_count(),
            g.edges().len()
        );
        if k < steps {
            g = match semantics {
                Semantics::Cgd => dynamics.apply_cgd(&g)?,
                Semantics::Kan => dynamics.apply_kan_with(Default::default(), &g, cap)?,
            };
        }
    }
    Ok(())
}

fn disk(graph: &Path, center: &str, radius: usize) -> CmdResult {
    let g = load_graph(graph)?;
    let center: VertexName = center
        .parse()
        .map_err(|_| Failure::input(format!("vertex name {center:?} is not valid")))?;
    let d = extract_disk(&g, &center, radius).map_err(Failure::input)?;
    println!("{}", write_graph(&d.graph));
    Ok(())
}

fn monotonize(rule: &Path, out: Option<&Path>) -> CmdResult {
    let table = match load_rule(rule)? {
        ExampleRule::Table(t) => t,
        ExampleRule::Monotonized(_) => return Err(Failure::input("rule is already monotonized")),
    };
    let m = MonotonizedRule::from_table(table).map_err(Failure::input)?;
    let text = write_rule(&ExampleRule::Monotonized(m.into()));
    match out {
        Some(path) => write(path, &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn simulate_cmd(rule: &Path, graph: &Path) -> CmdResult {
    let table = match load_rule(rule)? {
        ExampleRule::Table(t) => t,
        ExampleRule::Monotonized(_) => return Err(Failure::input("expected a table rule")),
    };
    let g = load_graph(graph)?;
    let base = Dynamics::from_arc(table.clone());
    let f_prime = Dynamics::new(MonotonizedRule::from_table(table).map_err(Failure::input)?);
    let s = simulate(&base, &f_prime, &g).map_err(|e| Failure::input(e.to_string()))?;
    println!("{}", write_graph(&s.simulated));
    if s.holds() {
        eprintln!("simulation holds");
        Ok(())
    } else {
        Err(Failure {
            code: 4,
            message: format!("simulation differs; expected\n{}", write_graph(&s.expected)),
        })
    }
}

fn verify_category(rule: &Path, graph: &Path, seed: u64, cap: usize) -> CmdResult {
    let rule = load_rule(rule)?;
    let g = load_graph(graph)?;
    check_signature(&rule, &g)?;
    let dynamics = Dynamics::from_arc(rule.local_rule());
    let cfg = VerifyConfig::full(seed).with_cap(cap);
    if print_table(&graph_category_checks(&dynamics, &g, &cfg)) {
        Ok(())
    } else {
        Err(Failure {
            code: 4,
            message: "some checks failed".to_owned(),
        })
    }
}

fn verify(
    suite: &str,
    seed: u64,
    cap: Option<usize>,
    rule: Option<&Path>,
    quick: bool,
) -> CmdResult {
    let suite: Suite = suite.parse().map_err(Failure::input)?;
    let mut cfg = if quick {
        VerifyConfig::quick(seed)
    } else {
        VerifyConfig::full(seed)
    };
    if let Some(cap) = cap {
        cfg = cfg.with_cap(cap);
    }
    let report = match rule {
        Some(path) => {
            if suite != Suite::LocalRule {
                return Err(Failure::input("--rule applies to the localrule suite only"));
            }
            Report {
                suite: suite.name().to_owned(),
                seed,
                checks: user_rule_checks(&load_rule(path)?, &cfg),
            }
        }
        None => run_suite(suite, &cfg),
    };
    for c in &report.checks {
        eprintln!("{:<40} {:?}", c.proposition_id, c.elapsed);
    }
    println!("{}", report.to_json());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure {
            code: 4,
            message: "some checks failed".to_owned(),
        })
    }
}

fn examples(action: ExamplesAction) -> CmdResult {
    match action {
        ExamplesAction::List => {
            for name in EXAMPLE_NAMES {
                let ex = example(name).expect("listed");
                println!("{name:<20} {}", ex.description);
            }
            Ok(())
        }
        ExamplesAction::Show { name, out } => {
            let ex = example(&name).ok_or_else(|| {
                Failure::input(format!(
                    "unknown example {name:?}, expected one of {EXAMPLE_NAMES:?}"
                ))
            })?;
            let rule = write_rule(&ex.rule);
            match out {
                None => {
                    println!("{rule}");
                    Ok(())
                }
                Some(dir) => {
                    create_dir(&dir)?;
                    write(&dir.join(format!("{name}.json")), &rule)?;
                    for (k, (input, output)) in ex.fixtures.iter().enumerate() {
                        write(
                            &dir.join(format!("{name}_{k}_in.json")),
                            &write_graph(input),
                        )?;
                        write(
                            &dir.join(format!("{name}_{k}_out.json")),
                            &write_graph(output),
                        )?;
                    }
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            rule,
            graph,
            steps,
            semantics,
            cap,
            out,
        } => run(&rule, &graph, steps, semantics, cap, &out),
        Command::Disk {
            graph,
            center,
            radius,
        } => disk(&graph, &center, radius),
        Command::Monotonize { rule, out } => monotonize(&rule, out.as_deref()),
        Command::Simulate { rule, graph } => simulate_cmd(&rule, &graph),
        Command::VerifyCategory {
            rule,
            graph,
            seed,
            cap,
        } => verify_category(&rule, &graph, seed, cap),
        Command::Verify {
            suite,
            seed,
            cap,
            rule,
            quick,
        } => verify(&suite, seed, cap, rule.as_deref(), quick),
        Command::ExportDot { graph } => load_graph(&graph).map(|g| print!("{}", to_dot(&g))),
        Command::Examples { action } => examples(action),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
