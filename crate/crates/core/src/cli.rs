//! The `provcalc` command line. Everything is computed into buffers and
//! returned, so the binary only prints and exits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::congruence::normalize;
use crate::denotation::{denote, ideal_included, DenotationError, IdealKind, Universe};
use crate::engine::{run, step_all, yields, Bounds, EngineError, Strategy, Trace};
use crate::generate::Generator;
use crate::provenance::{extract, ProvenanceDiagram, ProvenanceError};
use crate::spdag::LabelledDag;
use crate::syntax::parse_process;
use crate::terms::{Atom, Label, Name, Polarity, Process, Tuple, Valuation, Variable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BOUND: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Config {
    pub universe_extras: Vec<Name>,
    pub max_states: usize,
    pub max_depth: usize,
    pub max_dag_vertices: usize,
    pub strategy: Strategy,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            universe_extras: Vec::new(),
            max_states: 10_000,
            max_depth: 64,
            max_dag_vertices: 16,
            strategy: Strategy::Exhaustive,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl Config {
    /// Applies `key = value` lines on top of `self`. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn merge_text(mut self, text: &str) -> Result<Config, ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ConfigError { line: i + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            self.set(key.trim(), value.trim()).map_err(err)?;
        }
        Ok(self)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let positive = |v: &str| match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!("{key} must be a positive integer, got `{v}`")),
        };
        match key {
            "max_states" => self.max_states = positive(value)?,
            "max_depth" => self.max_depth = positive(value)?,
            "max_dag_vertices" => self.max_dag_vertices = positive(value)?,
            "strategy" => self.strategy = value.parse()?,
            "seed" => self.seed = value.parse().map_err(|_| format!("seed must be a 64-bit integer, got `{value}`"))?,
            "universe_extras" => {
                self.universe_extras = value
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        if crate::terms::is_identifier(s) {
                            Ok(Name::new(s))
                        } else {
                            Err(format!("`{s}` is not a valid name"))
                        }
                    })
                    .collect::<Result<_, _>>()?
            }
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    pub fn bounds(&self) -> Bounds {
        Bounds {
            max_states: self.max_states,
            max_depth: self.max_depth,
        }
    }

    pub fn header(&self) -> String {
        let extras: Vec<&str> = self.universe_extras.iter().map(Name::as_str).collect();
        format!(
            "// config max_states={} max_depth={} max_dag_vertices={} strategy={} seed={} universe_extras={}",
            self.max_states,
            self.max_depth,
            self.max_dag_vertices,
            self.strategy,
            self.seed,
            extras.join(",")
        )
    }
}

#[derive(Parser, Debug)]
#[command(name = "provcalc", version, about = "Provenance-tracking update calculus")]
struct Cli {
    /// key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    max_states: Option<usize>,
    #[arg(long, global = true)]
    max_depth: Option<usize>,
    #[arg(long, global = true)]
    max_dag_vertices: Option<usize>,
    /// Extra universe names for quantifiers, repeatable.
    #[arg(long = "extra", global = true)]
    extras: Vec<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a term in canonical syntax.
    Parse { file: PathBuf },
    /// Print the prenex sum-of-series-parallel normal form.
    Normalize { file: PathBuf },
    /// List every single-step successor.
    Step { file: PathBuf },
    /// Evolve a system to its terminal states.
    Run {
        file: PathBuf,
        #[arg(long)]
        strategy: Option<Strategy>,
        /// Write provenance of quiescent terminals as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write provenance of quiescent terminals as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Search for a derivation showing P yields Q.
    Yields { p: PathBuf, q: PathBuf },
    /// Print the generator graphs of a term's denotation as JSON.
    Denote {
        file: PathBuf,
        #[arg(long, default_value = "i")]
        kind: KindArg,
    },
    /// Decide whether the denotation of P is included in that of Q.
    Include {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, default_value = "i")]
        kind: KindArg,
    },
    /// Provenance diagram of a quiescent term.
    Provenance {
        file: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Draw every edge rather than only direct ones.
        #[arg(long)]
        transitive: bool,
    },
    /// Decide whether a JSON graph is series-parallel.
    Spcheck { file: PathBuf },
    /// Print random terms from the configured seed.
    Generate {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        literals: usize,
        #[arg(long, default_value_t = 2)]
        binders: usize,
        #[arg(long, value_enum, default_value = "system")]
        shape: ShapeArg,
    },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum KindArg {
    S,
    I,
}

impl From<KindArg> for IdealKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::S => IdealKind::Smoothing,
            KindArg::I => IdealKind::Interaction,
        }
    }
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum ShapeArg {
    System,
    Sp,
    Term,
}

impl clap::ValueEnum for Strategy {
    fn value_variants<'a>() -> &'a [Self] {
        &[Strategy::Exhaustive, Strategy::Eager]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Eager => "eager",
        }))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let code = match e {
            EngineError::BoundExceeded { .. } => EXIT_BOUND,
            EngineError::Invariant(_) => EXIT_INVARIANT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DenotationError> for Failure {
    fn from(e: DenotationError) -> Self {
        let code = match e {
            DenotationError::TooLarge(_) => EXIT_BOUND,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ProvenanceError> for Failure {
    fn from(e: ProvenanceError) -> Self {
        match e {
            ProvenanceError::Denotation(d) => d.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

/// Runs the command line given `args` (including the program name) and the
/// value of `PROVCALC_SEED`, if set.
pub fn main_with(args: impl IntoIterator<Item = String>, env_seed: Option<String>) -> Output {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut out = String::new();
    let result = configure(&cli, env_seed).and_then(|config| {
        out.push_str(&config.header());
        out.push('\n');
        execute(&cli.command, &config, &mut out)
    });
    match result {
        Ok(code) => Output {
            code,
            stdout: out,
            stderr: String::new(),
        },
        Err(f) => Output {
            code: f.code,
            stdout: out,
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn configure(cli: &Cli, env_seed: Option<String>) -> Result<Config, Failure> {
    let mut config = Config::default();
    if let Some(path) = &cli.config {
        let text = read(path)?;
        config = config.merge_text(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    }
    if let Some(seed) = env_seed {
        config.set("seed", seed.trim()).map_err(|e| Failure::input(format!("PROVCALC_SEED: {e}")))?;
    }
    let flags = [
        ("max_states", cli.max_states.map(|v| v.to_string())),
        ("max_depth", cli.max_depth.map(|v| v.to_string())),
        ("max_dag_vertices", cli.max_dag_vertices.map(|v| v.to_string())),
        ("seed", cli.seed.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            config.set(key, &v).map_err(Failure::input)?;
        }
    }
    if !cli.extras.is_empty() {
        config.set("universe_extras", &cli.extras.join(",")).map_err(Failure::input)?;
    }
    if let Command::Run { strategy: Some(s), .. } = &cli.command {
        config.strategy = *s;
    }
    Ok(config)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Process, Failure> {
    let text = read(path)?;
    parse_process(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn check_size(p: &Process, config: &Config) -> Result<(), Failure> {
    let n = p.literal_count();
    if n > config.max_dag_vertices {
        return Err(Failure {
            code: EXIT_BOUND,
            message: format!("term has {n} literals; max_dag_vertices is {}", config.max_dag_vertices),
        });
    }
    Ok(())
}

fn write_trace(out: &mut String, trace: &Trace, indent: &str) {
    for (i, step) in trace.steps.iter().enumerate() {
        writeln!(out, "{indent}{}. {step}", i + 1).unwrap();
    }
}

/// `out.dot` for the first file, `out.2.dot`, `out.3.dot`, … after it.
fn numbered(path: &Path, k: usize) -> PathBuf {
    if k == 0 {
        return path.to_path_buf();
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{}.{}", k + 1, ext.to_string_lossy()),
        None => format!("{stem}.{}", k + 1),
    };
    path.with_file_name(name)
}

fn execute(command: &Command, config: &Config, out: &mut String) -> Result<i32, Failure> {
    match command {
        Command::Parse { file } => {
            writeln!(out, "{}", load(file)?).unwrap();
            Ok(EXIT_OK)
        }
        Command::Normalize { file } => {
            writeln!(out, "{}", normalize(&load(file)?)).unwrap();
            Ok(EXIT_OK)
        }
        Command::Step { file } => {
            let p = load(file)?;
            let u = Universe::for_terms(&[&p], &config.universe_extras);
            for step in step_all(&p, &u) {
                writeln!(out, "{step}").unwrap();
            }
            Ok(EXIT_OK)
        }
        Command::Run { file, dot, json, .. } => {
            let s = load(file)?;
            if !s.classify().is_system() {
                writeln!(out, "// warning: not a system term").unwrap();
            }
            let u = Universe::for_terms(&[&s], &config.universe_extras);
            let report = run(&s, &u, config.strategy, config.bounds())?;
            writeln!(out, "states: {}", report.states).unwrap();
            let mut quiescent = 0;
            for (i, t) in report.terminals.iter().enumerate() {
                let status = if t.quiescent { "quiescent" } else { "stuck" };
                writeln!(out, "terminal {} ({status}): {}", i + 1, t.state).unwrap();
                write_trace(out, &t.trace, "  ");
                if t.quiescent {
                    let diagram = extract(&t.state, &Valuation::new())?;
                    if let Some(path) = dot {
                        write(&numbered(path, quiescent), &diagram.to_dot(false))?;
                    }
                    if let Some(path) = json {
                        write(&numbered(path, quiescent), &diagram.to_json())?;
                    }
                    quiescent += 1;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Yields { p, q } => {
            let (p, q) = (load(p)?, load(q)?);
            let u = Universe::for_terms(&[&p, &q], &config.universe_extras);
            match yields(&p, &q, &u, config.bounds()) {
                Ok(Some(trace)) => {
                    writeln!(out, "yields in {} steps", trace.steps.len()).unwrap();
                    write_trace(out, &trace, "");
                    Ok(EXIT_OK)
                }
                Ok(None) => {
                    writeln!(out, "absent").unwrap();
                    Ok(EXIT_NO)
                }
                Err(EngineError::BoundExceeded { states, .. }) => {
                    writeln!(out, "bound-exceeded after {states} states").unwrap();
                    Ok(EXIT_BOUND)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Denote { file, kind } => {
            let p = load(file)?;
            check_size(&p, config)?;
            let kind = IdealKind::from(*kind);
            let u = Universe::for_terms(&[&p], &config.universe_extras);
            let ideal = denote(&p, &Valuation::new(), kind, &u)?;
            let value = Denotation {
                kind: kind.to_string(),
                generators: ideal.generators.iter().map(Graph::of).collect(),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serializable")).unwrap();
            Ok(EXIT_OK)
        }
        Command::Include { p, q, kind } => {
            let (p, q) = (load(p)?, load(q)?);
            check_size(&p, config)?;
            check_size(&q, config)?;
            let u = Universe::for_terms(&[&p, &q], &config.universe_extras);
            let included = ideal_included(&p, &q, (*kind).into(), &u)?;
            writeln!(out, "{included}").unwrap();
            Ok(if included { EXIT_OK } else { EXIT_NO })
        }
        Command::Provenance {
            file,
            dot,
            json,
            transitive,
        } => {
            let p = load(file)?;
            check_size(&p, config)?;
            let diagram = extract(&p, &Valuation::new())?;
            write_diagram(out, &diagram, dot.as_deref(), json.as_deref(), *transitive)?;
            Ok(EXIT_OK)
        }
        Command::Spcheck { file } => {
            let dag = dag_from_json(&read(file)?).map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
            match dag.sp_decompose() {
                Ok(term) => {
                    writeln!(out, "series-parallel: {}", term.to_process()).unwrap();
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    match e.witness {
                        Some(w) => {
                            let names: Vec<String> = w.iter().map(|&v| format!("{v}:{}", dag.label(v))).collect();
                            writeln!(out, "not series-parallel: N on {}", names.join(" ")).unwrap();
                        }
                        None => writeln!(out, "not series-parallel").unwrap(),
                    }
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Generate {
            count,
            literals,
            binders,
            shape,
        } => {
            let mut g = Generator::new(config.seed);
            for _ in 0..*count {
                let p = match shape {
                    ShapeArg::System => g.system(*literals, *binders),
                    ShapeArg::Sp => g.sp_term(*literals),
                    ShapeArg::Term => g.term(*literals, *binders),
                };
                writeln!(out, "{p}").unwrap();
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_diagram(
    out: &mut String,
    diagram: &ProvenanceDiagram,
    dot: Option<&Path>,
    json: Option<&Path>,
    transitive: bool,
) -> Result<(), Failure> {
    if let Some(path) = dot {
        write(path, &diagram.to_dot(transitive))?;
    }
    if let Some(path) = json {
        write(path, &diagram.to_json())?;
    }
    if dot.is_none() && json.is_none() {
        out.push_str(&diagram.to_json());
    } else {
        writeln!(
            out,
            "{} nodes, {} direct edges, {} edges",
            diagram.len(),
            diagram.direct_edges().len(),
            diagram.dag().edge_count()
        )
        .unwrap();
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct GraphNode {
    id: usize,
    kind: String,
    tuple: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GraphEdge {
    src: usize,
    dst: usize,
}

#[derive(Serialize, Deserialize)]
struct Graph {
    nodes: Vec<GraphNode>,
    edges: Vec<GraphEdge>,
}

#[derive(Serialize)]
struct Denotation {
    kind: String,
    generators: Vec<Graph>,
}

fn kind_name(p: Polarity) -> &'static str {
    match p {
        Polarity::Stored => "stored",
        Polarity::Consume => "consume",
        Polarity::Artefact => "artefact",
    }
}

impl Graph {
    fn of(dag: &LabelledDag) -> Graph {
        Graph {
            nodes: dag
                .labels()
                .iter()
                .enumerate()
                .map(|(id, l)| GraphNode {
                    id,
                    kind: kind_name(l.polarity).to_string(),
                    tuple: l.tuple.atoms().iter().map(|a| a.to_string()).collect(),
                })
                .collect(),
            edges: dag.edges().into_iter().map(|(src, dst)| GraphEdge { src, dst }).collect(),
        }
    }
}

/// Graph as `{"nodes": [{id, kind, tuple}], "edges": [{src, dst}]}` with
/// every edge of the closure.
pub fn dag_to_json(dag: &LabelledDag) -> String {
    serde_json::to_string_pretty(&Graph::of(dag)).expect("serializable")
}

/// Reads the format of [`dag_to_json`]; edges need not be closed and any
/// extra fields (such as `direct`) are ignored.
pub fn dag_from_json(text: &str) -> Result<LabelledDag, String> {
    let graph: Graph = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut labels = vec![None; graph.nodes.len()];
    for node in graph.nodes {
        let polarity = match node.kind.as_str() {
            "stored" => Polarity::Stored,
            "consume" => Polarity::Consume,
            "artefact" => Polarity::Artefact,
            other => return Err(format!("unknown node kind `{other}`")),
        };
        if node.tuple.is_empty() {
            return Err(format!("node {} has an empty tuple", node.id));
        }
        let atoms = node
            .tuple
            .iter()
            .map(|a| match a.strip_prefix('?') {
                Some(v) if crate::terms::is_identifier(v) => Ok(Atom::Var(Variable::new(v))),
                None if crate::terms::is_identifier(a) => Ok(Atom::Name(Name::new(a))),
                _ => Err(format!("`{a}` is not a valid atom")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let slot = labels.get_mut(node.id).ok_or_else(|| format!("node id {} out of range", node.id))?;
        *slot = Some(Label::new(polarity, Tuple::new(atoms)));
    }
    let labels: Vec<Label> = labels.into_iter().collect::<Option<_>>().ok_or("node ids must be 0..n without gaps")?;
    let edges: Vec<(usize, usize)> = graph.edges.iter().map(|e| (e.src, e.dst)).collect();
    LabelledDag::from_edges(labels, &edges).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_layers() {
        let c = Config::default()
            .merge_text("# comment\nmax_states = 5\nstrategy=eager\nuniverse_extras = a, b\n")
            .unwrap();
        assert_eq!(c.max_states, 5);
        assert_eq!(c.strategy, Strategy::Eager);
        assert_eq!(c.universe_extras, vec![Name::new("a"), Name::new("b")]);
        assert_eq!(Config::default().merge_text("max_depth = 0").unwrap_err().line, 1);
        assert!(Config::default().merge_text("colour = red").is_err());
    }

    #[test]
    fn graph_json_round_trip() {
        let dag = LabelledDag::from_edges(
            vec![Label::stored(Tuple::ground(&["a"])), Label::consume(Tuple::ground(&["b", "c"]))],
            &[(0, 1)],
        )
        .unwrap();
        let back = dag_from_json(&dag_to_json(&dag)).unwrap();
        assert_eq!(back, dag);
    }
}
