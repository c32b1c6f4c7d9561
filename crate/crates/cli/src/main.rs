//! `rmcs`: run reactive multi-context systems from system and stream files.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rmcs_core::bundled::{self, EXAMPLES};
use rmcs_core::{
    analyze, check_reducible, emit_stream, emit_system, enumerate_equilibria, find_repair, minimal_equilibria,
    parse_atom, parse_pattern, parse_stream, parse_system, query_belief, run_grounded_stream, run_partial_stream,
    run_stream, run_wf_stream, Error, InputStream, KbConfig, QueryMode, ReactiveMcs, ReducibilityMode, RepairPolicy,
    Selector, StreamRun, TraceFilter, TraceTable,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "rmcs", version, about = "Equilibria streams of reactive multi-context systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibria stream trace over the input stream.
    Run {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
        #[arg(long, default_value = "first")]
        selector: Selector,
        /// Partial stream: undefined wherever no equilibrium exists.
        #[arg(long)]
        partial: bool,
        /// Leave this instant undefined (non-strict partial stream). Repeatable.
        #[arg(long = "skip", requires = "partial")]
        skip: Vec<usize>,
    },
    /// Equilibria for the initial configuration at one instant.
    Equilibria {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long, default_value_t = 1)]
        at: usize,
        /// Only pointwise-minimal equilibria.
        #[arg(long)]
        minimal: bool,
    },
    /// Grounded equilibria streams.
    Grounded {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
        #[arg(long, default_value = "first")]
        selector: Selector,
    },
    /// The well-founded stream.
    Wfs {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
    },
    /// A repaired equilibria stream.
    Repair {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
        #[arg(long, default_value = "minimal")]
        policy: RepairPolicy,
    },
    /// Whether a belief holds at some instant of some or every equilibria stream.
    Query {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        context: String,
        #[arg(long)]
        belief: String,
        #[arg(long, conflicts_with = "forall", required_unless_present = "forall")]
        exists: bool,
        #[arg(long)]
        forall: bool,
    },
    /// Dependencies, acyclicity, coherence and reducibility.
    Analyze {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        /// Brute-force reducibility check with this operation bound.
        #[arg(long)]
        brute_force: Option<usize>,
    },
    /// Print the system (and stream) in canonical form.
    Emit {
        #[command(flatten)]
        src: Source,
    },
    /// Bundled example systems.
    Example {
        #[command(subcommand)]
        action: ExampleAction,
    },
}

#[derive(Subcommand)]
enum ExampleAction {
    List,
    Show {
        name: String,
        /// Print the stream file instead of the system file.
        #[arg(long)]
        stream: bool,
    },
}

#[derive(Args)]
struct Source {
    /// System file, or `example:NAME` for a bundled one.
    system: String,
    /// Stream file. Bundled examples default to their own stream, files to one empty instant.
    #[arg(long)]
    stream: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Leave out formulas and beliefs that never change.
    #[arg(long)]
    omit_fixed: bool,
    /// Leave out beliefs of a context matching a pattern, as `ctx:pattern`. Repeatable.
    #[arg(long = "hide")]
    hide: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

enum Failure {
    Core(Error),
    Io(String),
    NoStream(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::NoStream(_) => 2,
            Failure::Io(_) => 3,
            Failure::Core(Error::Parse { .. } | Error::Config(_) | Error::Structural(_)) => 3,
            Failure::Core(Error::Capability(_)) => 4,
            Failure::Core(_) => 1,
        }
    }

    fn record(&self) -> serde_json::Value {
        match self {
            Failure::NoStream(msg) => json!({ "error": "no_equilibria_stream", "message": msg }),
            Failure::Io(msg) => json!({ "error": "io", "message": msg }),
            Failure::Core(e @ Error::Parse { line, col, .. }) => {
                json!({ "error": e.kind(), "message": e.to_string(), "line": line, "col": col })
            }
            Failure::Core(e) => json!({ "error": e.kind(), "message": e.to_string() }),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &std::path::Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(src: &Source) -> Result<(ReactiveMcs, KbConfig, InputStream), Failure> {
    let (m, cfg, bundled_stream) = match src.system.strip_prefix("example:") {
        Some(name) => {
            let ex = bundled::example(name).ok_or_else(|| Error::Config(format!("no bundled example {name}")))?;
            let (m, cfg) = parse_system(ex.system)?;
            (m, cfg, Some(ex.stream))
        }
        None => {
            let (m, cfg) = parse_system(&read(src.system.as_ref())?)?;
            (m, cfg, None)
        }
    };
    let stream = match (&src.stream, bundled_stream) {
        (Some(p), _) => parse_stream(&read(p)?, &m)?,
        (None, Some(text)) => parse_stream(text, &m)?,
        (None, None) => InputStream::new(vec![m.empty_input()])?,
    };
    Ok((m, cfg, stream))
}

fn filter(m: &ReactiveMcs, out: &Output) -> Result<TraceFilter, Failure> {
    let mut f = TraceFilter { omit_fixed: out.omit_fixed, hide: Vec::new() };
    for h in &out.hide {
        let (ctx, pat) =
            h.split_once(':').ok_or_else(|| Error::Config(format!("--hide expects ctx:pattern, got {h}")))?;
        let c = m.context_index(ctx).ok_or_else(|| Error::Config(format!("unknown context {ctx}")))?;
        f.hide.push((c, parse_pattern(pat)?));
    }
    Ok(f)
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn render_tables(tables: &[TraceTable], exhaustive: Option<bool>, out: &Output, f: &TraceFilter) -> String {
    match out.format {
        Format::Json => {
            let streams: Vec<_> = tables.iter().map(|t| t.to_json(f)).collect();
            let mut v = json!({ "streams": streams });
            if let Some(e) = exhaustive {
                v["exhaustive"] = json!(e);
            }
            json_text(&v)
        }
        Format::Tsv if tables.len() == 1 && exhaustive != Some(false) => tables[0].to_tsv(f),
        Format::Tsv => {
            let mut s = String::new();
            for (k, t) in tables.iter().enumerate() {
                let _ = writeln!(s, "# stream {}", k + 1);
                s.push_str(&t.to_tsv(f));
            }
            if let Some(e) = exhaustive {
                let _ = writeln!(s, "# exhaustive {e}");
            }
            s
        }
    }
}

fn stream_tables(
    m: &ReactiveMcs,
    stream: &InputStream,
    run: &StreamRun,
    what: &str,
) -> Result<Vec<TraceTable>, Failure> {
    if run.streams.is_empty() {
        return Err(Failure::NoStream(format!("no {what} stream exists for the given input")));
    }
    Ok(run.streams.iter().map(|es| TraceTable::from_stream(m, stream, es)).collect())
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Run { src, out, selector, partial, skip } => {
            let (m, cfg, stream) = load(&src)?;
            let f = filter(&m, &out)?;
            if partial {
                let skip: BTreeSet<usize> = skip.into_iter().collect();
                let ps = run_partial_stream(&m, &cfg, &stream, skip.is_empty(), &skip)?;
                return Ok(render_tables(&[TraceTable::from_partial(&m, &stream, &ps)], None, &out, &f));
            }
            let r = run_stream(&m, &cfg, &stream, selector)?;
            let tables = stream_tables(&m, &stream, &r, "equilibria")?;
            let exhaustive = matches!(selector, Selector::All(_)).then_some(r.exhaustive);
            Ok(render_tables(&tables, exhaustive, &out, &f))
        }
        Command::Equilibria { src, format, at, minimal } => {
            let (m, cfg, stream) = load(&src)?;
            if at < 1 || at > stream.horizon() {
                return Err(Error::Config(format!("instant {at} outside 1..{}", stream.horizon())).into());
            }
            let eqs = if minimal {
                minimal_equilibria(&m, &cfg, stream.at(at))?
            } else {
                enumerate_equilibria(&m, &cfg, stream.at(at))?
            };
            if eqs.is_empty() {
                return Err(Failure::NoStream(format!("no equilibrium at instant {at}")));
            }
            Ok(match format {
                Format::Tsv => eqs.iter().map(|e| format!("{e}\n")).collect(),
                Format::Json => {
                    let list: Vec<Vec<Vec<String>>> = eqs
                        .iter()
                        .map(|e| e.0.iter().map(|s| s.iter().map(|a| a.to_string()).collect()).collect())
                        .collect();
                    let names: Vec<String> = m.contexts().iter().map(|c| c.name.to_string()).collect();
                    json_text(&json!({ "contexts": names, "equilibria": list }))
                }
            })
        }
        Command::Grounded { src, out, selector } => {
            let (m, cfg, stream) = load(&src)?;
            let f = filter(&m, &out)?;
            let r = run_grounded_stream(&m, &cfg, &stream, selector)?;
            let tables = stream_tables(&m, &stream, &r, "grounded equilibria")?;
            let exhaustive = matches!(selector, Selector::All(_)).then_some(r.exhaustive);
            Ok(render_tables(&tables, exhaustive, &out, &f))
        }
        Command::Wfs { src, out } => {
            let (m, cfg, stream) = load(&src)?;
            let f = filter(&m, &out)?;
            let w = run_wf_stream(&m, &cfg, &stream)?;
            let table = TraceTable::from_stream(&m, &stream, &w.stream);
            Ok(match out.format {
                Format::Tsv => {
                    let mut s = table.to_tsv(&f);
                    let flags: Vec<String> = w.has_grounded.iter().map(|b| b.to_string()).collect();
                    let _ = writeln!(s, "# has_grounded {}", flags.join(","));
                    s
                }
                Format::Json => {
                    let mut v = table.to_json(&f);
                    v["has_grounded"] = json!(w.has_grounded);
                    json_text(&v)
                }
            })
        }
        Command::Repair { src, out, policy } => {
            let (m, cfg, stream) = load(&src)?;
            let f = filter(&m, &out)?;
            let Some((repair, es)) = find_repair(&m, &cfg, &stream, policy)? else {
                return Err(Failure::NoStream(format!("no repaired equilibria stream under policy {policy}")));
            };
            Ok(render_tables(&[TraceTable::from_repair(&m, &stream, &repair, &es)], None, &out, &f))
        }
        Command::Query { src, format, context, belief, exists, forall: _ } => {
            let (m, cfg, stream) = load(&src)?;
            let c = m.context_index(&context).ok_or_else(|| Error::Config(format!("unknown context {context}")))?;
            let b = parse_atom(&belief)?;
            let mode = if exists { QueryMode::Exists } else { QueryMode::Forall };
            let answer = query_belief(&m, &cfg, &stream, c, &b, mode)?;
            Ok(match format {
                Format::Tsv => format!("{answer}\n"),
                Format::Json => json_text(&json!({
                    "context": context, "belief": b.to_string(), "mode": mode, "result": answer
                })),
            })
        }
        Command::Analyze { src, format, brute_force } => {
            let (m, cfg, _) = load(&src)?;
            let a = analyze(&m);
            let mode = match brute_force {
                Some(bound) => ReducibilityMode::BruteForce { bound },
                None => ReducibilityMode::Certified,
            };
            let r = check_reducible(&m, &cfg, mode)?;
            Ok(match format {
                Format::Json => json_text(&json!({ "analysis": a, "reducibility": r })),
                Format::Tsv => {
                    let mut s = String::new();
                    let _ = writeln!(s, "acyclic\t{}", a.acyclic);
                    let _ = writeln!(s, "acyclic_all_rules\t{}", a.acyclic_all_rules);
                    let _ = writeln!(s, "totally_coherent_all\t{}", a.totally_coherent_all);
                    let _ = writeln!(s, "strong_consistency_guaranteed\t{}", a.strong_consistency_guaranteed);
                    let deps: Vec<String> = a.dependencies.iter().map(|(x, y)| format!("{x}->{y}")).collect();
                    let _ = writeln!(s, "dependencies\t{}", deps.join(","));
                    let _ = writeln!(s, "reducible\t{}", r.overall);
                    for c in &r.per_context {
                        let _ = writeln!(
                            s,
                            "reducible.{}\tlogic={} commutes={:?} monotone={:?}",
                            c.context, c.logic_reducible, c.mng_commutes_with_red, c.monotone_sequences_ok
                        );
                    }
                    s
                }
            })
        }
        Command::Emit { src } => {
            let (m, cfg, stream) = load(&src)?;
            let mut s = emit_system(&m, &cfg);
            if src.stream.is_some() || src.system.starts_with("example:") {
                s.push_str("% stream\n");
                for line in emit_stream(&m, &stream).lines() {
                    let _ = writeln!(s, "% {line}");
                }
            }
            Ok(s)
        }
        Command::Example { action } => match action {
            ExampleAction::List => Ok(EXAMPLES.iter().map(|e| format!("{}\t{}\n", e.name, e.summary)).collect()),
            ExampleAction::Show { name, stream } => {
                let ex = bundled::example(&name).ok_or_else(|| Error::Config(format!("no bundled example {name}")))?;
                Ok(if stream { ex.stream } else { ex.system }.to_string())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.record());
            ExitCode::from(f.code())
        }
    }
}
