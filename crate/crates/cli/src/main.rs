//! `dset`: command-line front end over the JSON documents of `dset-core`.
//!
//! Exit codes: 0 success or a true verdict, 1 a false verdict (the JSON on
//! stdout carries the witness), 2 bad input (stdout carries an error object).

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dset_core::axioms::check_axioms;
use dset_core::generators::{apply_coloring, fixture_tree, gen_random, Coloring, TreeSpec};
use dset_core::homtypes::{
    check_partial_iso, extend_partial_iso, extend_partial_iso_brute, homogeneity_conditions, nonextendable_witness,
    IsoCheck,
};
use dset_core::indiscernible::{classify_window, hull_window, weakly_indiscernible_over, SequenceWindow, WindowClass};
use dset_core::json::{
    dset_from_str, dset_to_value, partial_iso_from_str, splitting_from_str, tree_from_str, tree_to_value,
};
use dset_core::splitting::{enumerate_splittings, enumerate_splittings_brute, extend_by_point_colored, SplittingKind};
use dset_core::tree::{d_from_tree, export_dot, labeled_form, tree_from_dset, LeafTree};
use dset_core::{DSet, ElementId};

/// Directory for relative `--out` paths.
const OUT_DIR_VAR: &str = "DSET_OUT_DIR";

#[derive(Parser)]
#[command(name = "dset", version, about = "Finite D-sets, their trees, splittings and indiscernible windows")]
struct Cli {
    /// Suppress the human summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Largest size accepted by brute-force searches.
    #[arg(long, global = true, default_value_t = 10)]
    max_n: usize,
    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms D1-D6.
    Check { input: String },
    /// D-set of a tree.
    FromTree { input: String },
    /// Tree of a D-set; given a tree, rebuilds it and compares.
    ToTree { input: String },
    /// All splittings.
    Splittings {
        input: String,
        /// Enumerate every partition instead of reading splittings off the tree.
        #[arg(long)]
        brute: bool,
    },
    /// Add a point inducing the given splitting.
    Extend {
        input: String,
        #[arg(long)]
        splitting: String,
        #[arg(long, default_value_t = 0)]
        color: u32,
    },
    /// Classify a window of single elements.
    Classify {
        input: String,
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<ElementId>,
    },
    /// Discernible hull of a window.
    Hull {
        input: String,
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<ElementId>,
    },
    /// Weak indiscernibility of a window over a set of parameters.
    Indisc {
        input: String,
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<ElementId>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        over: Vec<ElementId>,
    },
    /// Images of one more point under a partial isomorphism.
    Probe {
        input: String,
        #[arg(long)]
        map: String,
        #[arg(long)]
        add: ElementId,
        /// Cross-check against exhaustive search.
        #[arg(long)]
        brute: bool,
    },
    /// Regularity, density and colour conditions, plus a non-extendable map if one is found.
    Homreport { input: String },
    /// Fixture or generated tree.
    Gen {
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
        fixture: Option<String>,
        /// `star:K`, `caterpillar:K`, `d_regular:D:K`, `random:K` or `enumerated:K:I`.
        #[arg(long)]
        spec: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the D-set (with colouring) instead of the tree.
        #[arg(long)]
        dset: bool,
        /// `uniform`, `round_robin:K` or `starve`.
        #[arg(long, default_value = "uniform")]
        coloring: String,
    },
    /// Graphviz rendering of a tree (or of the tree of a D-set, with its colours).
    ExportDot { input: String },
}

/// Primary output, exit code and a one-line summary.
struct Report {
    output: String,
    code: u8,
    summary: String,
}

impl Report {
    fn json(value: Value, verdict: bool, summary: impl Into<String>) -> Report {
        let output = serde_json::to_string_pretty(&value).expect("json values serialize") + "\n";
        Report { output, code: if verdict { 0 } else { 1 }, summary: summary.into() }
    }
}

fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

enum Input {
    DSet(DSet),
    Tree(LeafTree),
}

/// A D-set document, or a tree document (recognised by its `edges` key).
fn load(path: &str) -> anyhow::Result<Input> {
    let text = read_input(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| dset_core::Error::Malformed(e.to_string()))?;
    if value.get("edges").is_some() {
        Ok(Input::Tree(tree_from_str(&text)?))
    } else {
        Ok(Input::DSet(dset_from_str(&text)?))
    }
}

fn load_dset(path: &str) -> anyhow::Result<DSet> {
    Ok(match load(path)? {
        Input::DSet(d) => d,
        Input::Tree(t) => d_from_tree(&t),
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let report = match &cli.command {
        Command::Check { input } => {
            let d = load_dset(input)?;
            let r = check_axioms(&d);
            let failing: Vec<&str> = r.verdicts().iter().take(4).filter(|(_, v)| !v.passed()).map(|(n, _)| *n).collect();
            let summary = if failing.is_empty() {
                format!("D1-D4 hold on {} elements", d.len())
            } else {
                format!("fails {}", failing.join(", "))
            };
            Report::json(to_value(&r), r.is_dset(), summary)
        }
        Command::FromTree { input } => {
            let t = match load(input)? {
                Input::Tree(t) => t,
                Input::DSet(_) => return Err(dset_core::Error::Malformed("expected a tree document".into()).into()),
            };
            let d = d_from_tree(&t);
            let summary = format!("{} elements, {} positive quadruples", d.len(), d.positives().len());
            Report::json(dset_to_value(&d), true, summary)
        }
        Command::ToTree { input } => {
            let (d, original) = match load(input)? {
                Input::DSet(d) => (d, None),
                Input::Tree(t) => (d_from_tree(&t), Some(t)),
            };
            match tree_from_dset(&d) {
                Ok(t) => {
                    let same = original.as_ref().map(|o| labeled_form(o) == labeled_form(&t));
                    let summary = match same {
                        Some(true) => "rebuilt tree is isomorphic to the input".to_string(),
                        Some(false) => "rebuilt tree differs from the input".to_string(),
                        None => format!("{} inner nodes", t.internal_nodes().len()),
                    };
                    Report::json(tree_to_value(&t), same.unwrap_or(true), summary)
                }
                Err(e @ dset_core::Error::NotRepresentable(_)) => {
                    let value = json!({ "representable": false, "reason": e.to_string(), "axioms": check_axioms(&d) });
                    Report::json(value, false, "not a D-set, so no tree")
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Splittings { input, brute } => {
            let d = load_dset(input)?;
            let all = if *brute { enumerate_splittings_brute(&d, cli.max_n)? } else { enumerate_splittings(&d)? };
            let items: Vec<Value> = all
                .iter()
                .map(|s| json!({ "kind": to_value(&s.kind()), "sectors": s.sectors() }))
                .collect();
            let nodes = all.iter().filter(|s| s.kind() == SplittingKind::Node).count();
            let summary = format!("{nodes} node and {} edge splittings", all.len() - nodes);
            Report::json(json!({ "splittings": items, "node_count": nodes, "edge_count": all.len() - nodes }), true, summary)
        }
        Command::Extend { input, splitting, color } => {
            let d = load_dset(input)?;
            let s = splitting_from_str(&read_input(splitting)?)?;
            let ext = extend_by_point_colored(&d, &s, *color)?;
            Report::json(dset_to_value(&ext), true, format!("added element {}", d.len()))
        }
        Command::Classify { input, seq } => {
            let d = load_dset(input)?;
            let class = classify_window(&d, &SequenceWindow::singletons(seq))?;
            let ok = !matches!(class, WindowClass::NotIndiscernible { .. });
            let summary = match &class {
                WindowClass::Constant => "constant",
                WindowClass::Petaled => "petaled",
                WindowClass::Monotonic => "monotonic",
                WindowClass::NotIndiscernible { .. } => "not indiscernible",
            };
            Report::json(to_value(&class), ok, summary)
        }
        Command::Hull { input, seq } => {
            let d = load_dset(input)?;
            let h = hull_window(&d, &SequenceWindow::singletons(seq))?;
            let summary = format!("hull has {} elements", h.hull.len());
            Report::json(to_value(&h), true, summary)
        }
        Command::Indisc { input, seq, over } => {
            let d = load_dset(input)?;
            let v = weakly_indiscernible_over(&d, &SequenceWindow::singletons(seq), over)?;
            let summary = if v.indiscernible { "indiscernible" } else { "not indiscernible" };
            Report::json(to_value(&v), v.indiscernible, summary)
        }
        Command::Probe { input, map, add, brute } => {
            let d = load_dset(input)?;
            let m = partial_iso_from_str(&read_input(map)?)?;
            let check = check_partial_iso(&d, &d, &m)?;
            if check != IsoCheck::Ok {
                let value = json!({ "map": m, "map_check": check, "x": add, "extensions": [] });
                return Ok(Report::json(value, false, "the map is not a partial isomorphism"));
            }
            let images = extend_partial_iso(&d, &m, *add)?;
            if *brute {
                if d.len() > cli.max_n {
                    return Err(dset_core::Error::TooLarge { n: d.len(), limit: cli.max_n }.into());
                }
                let exhaustive = extend_partial_iso_brute(&d, &m, *add)?;
                if exhaustive != images {
                    return Err(anyhow!("internal disagreement: {images:?} vs exhaustive {exhaustive:?}"));
                }
            }
            let summary = format!("{} possible images for {add}", images.len());
            let ok = !images.is_empty();
            Report::json(json!({ "map": m, "map_check": check, "x": add, "extensions": images }), ok, summary)
        }
        Command::Homreport { input } => {
            let d = load_dset(input)?;
            let report = homogeneity_conditions(&d)?;
            let witness = nonextendable_witness(&d)?;
            let ok = report.regularity.regular && report.color_hitting.holds && witness.is_none();
            let summary = format!(
                "regular: {}, colour-hitting: {}, non-extendable map: {}",
                report.regularity.regular,
                report.color_hitting.holds,
                if witness.is_some() { "found" } else { "none found" }
            );
            Report::json(json!({ "report": report, "nonextendable": witness }), ok, summary)
        }
        Command::Gen { fixture, spec, seed, dset, coloring } => {
            let t = match (fixture, spec) {
                (Some(name), _) => fixture_tree(name)?,
                (None, Some(spec)) => gen_random(TreeSpec::parse(spec)?, *seed)?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let coloring = Coloring::parse(coloring)?;
            let summary = format!("{} leaves, {} inner nodes", t.leaf_count(), t.internal_nodes().len());
            if *dset {
                let d = apply_coloring(&d_from_tree(&t), coloring, *seed)?;
                Report::json(dset_to_value(&d), true, summary)
            } else {
                Report::json(tree_to_value(&t), true, summary)
            }
        }
        Command::ExportDot { input } => {
            let (t, colors) = match load(input)? {
                Input::Tree(t) => (t, None),
                Input::DSet(d) => (tree_from_dset(&d)?, Some(d.colors().to_vec())),
            };
            let mut buf = Vec::new();
            export_dot(&t, colors.as_deref(), &mut buf)?;
            let summary = format!("{} nodes, {} edges", t.node_count(), t.edges().len());
            Report { output: String::from_utf8(buf).expect("dot output is utf-8"), code: 0, summary }
        }
    };
    Ok(report)
}

fn error_value(err: &anyhow::Error) -> Value {
    let kind = match err.downcast_ref::<dset_core::Error>() {
        Some(e) => e.kind(),
        None if err.downcast_ref::<io::Error>().is_some() => "io",
        None => "other",
    };
    json!({ "error": { "kind": kind, "message": format!("{err:#}") } })
}

fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(p) => {
            let p = out_path(p);
            fs::write(&p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|r| emit(&cli, &r.output).map(|_| r));
    match result {
        Ok(r) => {
            if !cli.quiet {
                eprintln!("{}", r.summary);
            }
            ExitCode::from(r.code)
        }
        Err(err) => {
            let text = serde_json::to_string_pretty(&error_value(&err)).expect("json values serialize");
            let _ = writeln!(io::stdout(), "{text}");
            if !cli.quiet {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(2)
        }
    }
}
