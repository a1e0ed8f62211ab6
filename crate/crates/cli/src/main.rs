//! Command-line front end for the attack knowledge base.
//!
//! Every command builds the same session: the core ontology first, then
//! catalog files (emitting their ontology triples and generated attack
//! rules), pre-built triple files, rule files, step registries, the event
//! stream, and finally the state overrides. The subcommand decides what
//! happens to the loaded session afterwards.
//!
//! Exit codes: 0 success (empty results included), 2 input parse errors,
//! 3 consistency errors (is-a cycles, inconsistent concept graphs),
//! 4 inference limits, 1 everything else. Standard output carries only
//! data; warnings and errors go to standard error.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aokb_core::events::{assert_events, install_registry, parse_events, parse_registry, StepTracker};
use aokb_core::ingest::{
    apply_equivalences, build_graph, emit_ontology, generate_attack_rules, parse_catalog,
    parse_equivalences, CatalogEntry, CatalogKind,
};
use aokb_core::metrics::{compute_metrics, MetricsReport, Rational};
use aokb_core::predict::{parse_state, run_prediction, PredictionReport, SystemState};
use aokb_core::{
    evaluate, forward_chain, parse_query, parse_rules, ChainLimits, DerivationReport, Error,
    KnowledgeBase, RuleSet, Term,
};

#[derive(Parser)]
#[command(name = "aokb", version, about = "Ontology-driven attack knowledge base", arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn catalogs into ontology triples and generated attack rules.
    Ingest(IngestArgs),
    /// Forward-chain the loaded rules to fixpoint and report the derivation.
    Infer(SessionArgs),
    /// Assert the event stream and report how many triples it added.
    Events(SessionArgs),
    /// Evaluate a SELECT query against the inferred knowledge base.
    Query(QueryArgs),
    /// Run the full prediction pipeline and write the ranked report.
    Predict(SessionArgs),
    /// Compute ontology and knowledge-base metrics for the loaded session.
    Metrics(SessionArgs),
    /// Write the loaded knowledge base as sorted triple text.
    Export(SessionArgs),
}

/// Inputs shared by every command. Paths are read once, in the order the
/// module pipeline needs them; flags that a command does not use are
/// accepted and loaded all the same, so one bundle works everywhere.
#[derive(Args)]
struct SessionArgs {
    /// Catalog JSON file; repeatable. The document's own `kind` field
    /// selects the catalog type.
    #[arg(long = "catalog", value_name = "PATH")]
    catalogs: Vec<PathBuf>,

    /// Equivalence-map JSON bridging catalog identifiers.
    #[arg(long, value_name = "PATH")]
    equivalences: Option<PathBuf>,

    /// Triple text file imported into the knowledge base; repeatable.
    #[arg(long = "ontology", value_name = "PATH")]
    ontologies: Vec<PathBuf>,

    /// Rules text file; repeatable. Catalogs contribute their generated
    /// rules independently of this flag.
    #[arg(long = "rules", value_name = "PATH")]
    rules: Vec<PathBuf>,

    /// Attack step registry JSON; repeatable.
    #[arg(long = "registry", value_name = "PATH")]
    registries: Vec<PathBuf>,

    /// Line-delimited JSON event stream.
    #[arg(long, value_name = "PATH")]
    events: Option<PathBuf>,

    /// Node state overrides JSON.
    #[arg(long, value_name = "PATH")]
    state: Option<PathBuf>,

    /// Write the command's primary output here instead of standard output.
    /// `infer` and `events` treat it as the knowledge-base export path and
    /// keep their summary on standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format for summaries, query results, reports, and metrics.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Forward-chaining iteration limit.
    #[arg(long, value_name = "N", default_value_t = ChainLimits::default().max_iterations)]
    max_iterations: usize,

    /// Forward-chaining derived-triple limit.
    #[arg(long, value_name = "N", default_value_t = ChainLimits::default().max_derived)]
    max_derived: usize,
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    session: SessionArgs,

    /// Write the generated attack rules here, in the rules text format.
    #[arg(long, value_name = "PATH")]
    rules_out: Option<PathBuf>,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    session: SessionArgs,

    /// Query text, `SELECT ?v ... WHERE { pattern . pattern . ... }`.
    query: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Anything a command can fail with. Library errors keep their identity so
/// the exit-code mapping can stay exhaustive; file-system problems carry
/// the path they happened on.
enum Failure {
    Core(Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(error) => write!(f, "{error}"),
            Failure::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure::Core(error)
    }
}

impl Failure {
    /// The documented exit-code contract: 2 parse, 3 consistency, 4 limits,
    /// 1 everything else.
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io { .. } => 1,
            Failure::Core(error) => match error {
                Error::CycleDetected { .. } | Error::InconsistentGraph(_) => 3,
                Error::LimitExceeded { .. } => 4,
                Error::MalformedTerm(_)
                | Error::UndeclaredPredicate(_)
                | Error::UnknownClass(_)
                | Error::Parse { .. }
                | Error::DuplicateId(_)
                | Error::DuplicateEventId(_)
                | Error::UnsafeRule { .. }
                | Error::TooManyVariables { .. }
                | Error::UnboundSelect(_) => 2,
                _ => 1,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Ingest(args) => cmd_ingest(&args),
        Command::Infer(args) => cmd_infer(&args),
        Command::Events(args) => cmd_events(&args),
        Command::Query(args) => cmd_query(&args),
        Command::Predict(args) => cmd_predict(&args),
        Command::Metrics(args) => cmd_metrics(&args),
        Command::Export(args) => cmd_export(&args),
    }
}

/// Everything the flags load, ready for the subcommands.
struct Session {
    kb: KnowledgeBase,
    rules: RuleSet,
    state: SystemState,
    limits: ChainLimits,
    events: EventsSummary,
    catalog_records: usize,
}

#[derive(Default)]
struct EventsSummary {
    count: usize,
    new_triples: usize,
}

fn load_session(args: &SessionArgs) -> Result<Session, Failure> {
    let mut kb = KnowledgeBase::new();
    kb.load_core_ontology()?;

    let mut rules = Vec::new();
    let mut catalog_records = 0;
    if !args.catalogs.is_empty() {
        let mut entries = Vec::new();
        for path in &args.catalogs {
            entries.extend(read_catalog(path)?);
        }
        catalog_records = entries.len();
        let mut graph = build_graph(&entries)?;
        if let Some(path) = &args.equivalences {
            let map = parse_equivalences(&read(path)?)?;
            graph = apply_equivalences(graph, &map);
        }
        for warning in graph.warnings() {
            eprintln!("warning: {warning}");
        }
        emit_ontology(&graph, &mut kb)?;
        let generated = generate_attack_rules(&graph)?;
        for warning in &generated.warnings {
            eprintln!("warning: {warning}");
        }
        rules.extend(generated.rules);
    }
    for path in &args.ontologies {
        kb.import_text(&read(path)?)?;
    }
    for path in &args.rules {
        rules.extend(parse_rules(&read(path)?)?.rules);
    }
    let rules = RuleSet::new(rules)?;

    let mut tracker = StepTracker::new();
    for path in &args.registries {
        let registry = parse_registry(&read(path)?)?;
        install_registry(&mut kb, &mut tracker, &registry)?;
    }
    let mut events = EventsSummary::default();
    if let Some(path) = &args.events {
        let stream = parse_events(&read(path)?)?;
        let report = assert_events(&mut kb, &stream, &mut tracker)?;
        for warning in &report.warnings {
            eprintln!("warning: {warning}");
        }
        events = EventsSummary { count: stream.len(), new_triples: report.new_triples };
    }
    let mut state = SystemState::from_kb(&kb)?;
    if let Some(path) = &args.state {
        let overrides = parse_state(&read(path)?)?;
        state.apply_overrides(&kb, &overrides)?;
    }

    Ok(Session {
        kb,
        rules,
        state,
        limits: ChainLimits { max_iterations: args.max_iterations, max_derived: args.max_derived },
        events,
        catalog_records,
    })
}

fn cmd_ingest(args: &IngestArgs) -> Result<(), Failure> {
    let session = load_session(&args.session)?;
    if let Some(path) = &args.rules_out {
        emit(Some(path), &session.rules.to_text())?;
    }
    emit(args.session.out.as_deref(), &session.kb.export_text())?;
    eprintln!(
        "ingested {} records: {} classes, {} triples, {} rules",
        session.catalog_records,
        session.kb.classes().len(),
        session.kb.len(),
        session.rules.rules.len()
    );
    Ok(())
}

fn cmd_infer(args: &SessionArgs) -> Result<(), Failure> {
    let mut session = load_session(args)?;
    let report = forward_chain(&mut session.kb, &session.rules, session.limits)?;
    if let Some(path) = &args.out {
        emit(Some(path), &session.kb.export_text())?;
    }
    print!("{}", render_derivation(&report, args.format));
    Ok(())
}

fn cmd_events(args: &SessionArgs) -> Result<(), Failure> {
    let session = load_session(args)?;
    if let Some(path) = &args.out {
        emit(Some(path), &session.kb.export_text())?;
    }
    let body = match args.format {
        Format::Json => {
            let doc = serde_json::json!({
                "events": session.events.count,
                "new_triples": session.events.new_triples,
            });
            pretty(&doc)
        }
        Format::Text => format!(
            "events: {}\nnew triples: {}\n",
            session.events.count, session.events.new_triples
        ),
    };
    print!("{body}");
    Ok(())
}

fn cmd_query(args: &QueryArgs) -> Result<(), Failure> {
    let mut session = load_session(&args.session)?;
    let query = parse_query(&args.query)?;
    forward_chain(&mut session.kb, &session.rules, session.limits)?;
    let rows = evaluate(&session.kb, &query)?;
    emit(args.session.out.as_deref(), &render_rows(&rows, args.session.format))
}

fn cmd_predict(args: &SessionArgs) -> Result<(), Failure> {
    let mut session = load_session(args)?;
    let report = run_prediction(&mut session.kb, &session.rules, &session.state, session.limits)?;
    let body = match args.format {
        Format::Json => report.to_json(),
        Format::Text => render_report(&report),
    };
    emit(args.out.as_deref(), &body)
}

fn cmd_metrics(args: &SessionArgs) -> Result<(), Failure> {
    let session = load_session(args)?;
    let report = compute_metrics(&session.kb)?;
    let body = match args.format {
        Format::Json => report.to_json(),
        Format::Text => render_metrics(&report),
    };
    emit(args.out.as_deref(), &body)
}

fn cmd_export(args: &SessionArgs) -> Result<(), Failure> {
    let session = load_session(args)?;
    emit(args.out.as_deref(), &session.kb.export_text())
}

/// Reads one catalog file. The document's own `kind` field picks the
/// catalog type, so flag order never matters.
fn read_catalog(path: &Path) -> Result<Vec<CatalogEntry>, Failure> {
    let text = read(path)?;
    let probe: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::parse(e.line(), format!("catalog {}: {e}", path.display())))?;
    let kind = match probe.get("kind").and_then(serde_json::Value::as_str) {
        Some("attack_pattern") => CatalogKind::AttackPattern,
        Some("weakness") => CatalogKind::Weakness,
        Some("vulnerability") => CatalogKind::Vulnerability,
        Some(other) => {
            return Err(Error::parse(1, format!("catalog {}: unknown kind {other}", path.display())).into())
        }
        None => {
            return Err(Error::parse(1, format!("catalog {}: missing kind field", path.display())).into())
        }
    };
    Ok(parse_catalog(&text, kind)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::Io { path: path.to_path_buf(), source })
}

/// Writes to the path when given, otherwise to standard output.
fn emit(out: Option<&Path>, data: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, data).map_err(|source| Failure::Io { path: path.to_path_buf(), source })
        }
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn pretty(doc: &serde_json::Value) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("summary serializes");
    out.push('\n');
    out
}

fn render_derivation(report: &DerivationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let fired: serde_json::Map<String, serde_json::Value> = report
                .fired
                .iter()
                .map(|(rule, count)| (rule.clone(), serde_json::Value::from(*count)))
                .collect();
            pretty(&serde_json::json!({
                "iterations": report.iterations,
                "new_triples": report.new_triples,
                "fired": fired,
            }))
        }
        Format::Text => {
            let mut out =
                format!("iterations: {}\nnew triples: {}\n", report.iterations, report.new_triples);
            for (rule, count) in &report.fired {
                out.push_str(&format!("{rule}: {count}\n"));
            }
            out
        }
    }
}

fn render_rows(rows: &[Vec<Term>], format: Format) -> String {
    match format {
        Format::Json => {
            let doc: Vec<Vec<String>> =
                rows.iter().map(|row| row.iter().map(Term::to_string).collect()).collect();
            let mut out = serde_json::to_string_pretty(&doc).expect("rows serialize");
            out.push('\n');
            out
        }
        Format::Text => {
            let mut out = String::new();
            for row in rows {
                let cells: Vec<String> = row.iter().map(Term::to_string).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
            out
        }
    }
}

fn render_report(report: &PredictionReport) -> String {
    let mut out = format!("generated at: {}\n", report.generated_at);
    for entry in &report.entries {
        out.push_str(&format!(
            "{} {} {:?} score {}/{}",
            entry.node,
            entry.attack,
            entry.status,
            entry.score.0.numer(),
            entry.score.0.denom()
        ));
        if !entry.missing.is_empty() {
            out.push_str(&format!(" missing {}", entry.missing.join(", ")));
        }
        out.push('\n');
    }
    out
}

fn rational(r: &Rational) -> String {
    if r.is_undefined() {
        "undefined".into()
    } else {
        format!("{}/{}", r.value().numer(), r.value().denom())
    }
}

fn render_metrics(report: &MetricsReport) -> String {
    let o = &report.ontology;
    let k = &report.kb;
    let mut out = String::new();
    out.push_str(&format!("object properties richness: {}\n", rational(&o.object_properties_richness)));
    out.push_str(&format!("inheritance richness: {}\n", rational(&o.inheritance_richness)));
    out.push_str(&format!("data properties richness: {}\n", rational(&o.data_properties_richness)));
    out.push_str(&format!("classes: {}\n", o.class_count));
    out.push_str(&format!("medium part-of: {}\n", rational(&o.medium_po)));
    out.push_str(&format!("is-a depth: {}\n", o.isa_depth));
    out.push_str("is-a fanout:\n");
    for (class, count) in &o.isa_fanout_rank {
        out.push_str(&format!("  {class}: {count}\n"));
    }
    out.push_str("part-of fanout:\n");
    for (class, count) in &o.partof_fanout_rank {
        out.push_str(&format!("  {class}: {count}\n"));
    }
    out.push_str(&format!("class richness: {}\n", rational(&k.class_richness)));
    out.push_str(&format!("individual graph components: {}\n", k.individual_graph_components));
    out.push_str("class connectivity:\n");
    for (class, count) in &k.class_connectivity {
        out.push_str(&format!("  {class}: {count}\n"));
    }
    out.push_str("class importance:\n");
    for (class, value) in &k.class_importance {
        out.push_str(&format!("  {class}: {}\n", rational(value)));
    }
    out.push_str("class object-property richness:\n");
    for (class, value) in &k.kb_object_properties_richness {
        out.push_str(&format!("  {class}: {}\n", rational(value)));
    }
    out
}
