//! `rra`: command-line front end for the relevance-ra library.
//!
//! Exit codes: 0 when every requested check passes, 1 when a countermodel
//! or failed property is found, 2 on usage or parse errors.

use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use relevance_ra::logic::{
    axiom_suite, is_valid, parse, variable_sharing_demo, Matrix, ShareStyle, Suite, Verdict,
};
use relevance_ra::models::{self, ModelName};
use relevance_ra::properties::{equivalence_checks, exhaustive_equivalences, theorem_meanings_summary};
use relevance_ra::rm_export::export_rms;
use relevance_ra::sugihara::{chain_label, enumerate_chain, eval_expr, extended_chain, is_designated};
use relevance_ra::{Error, IndexSet, Relation};

#[derive(Parser)]
#[command(name = "rra", version, about = "Proper relation algebras for relevance logic")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads for validity search; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Named models.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Relative product of two elements of a model.
    Compose {
        #[arg(long, value_parser = model_name)]
        model: ModelName,
        a: String,
        b: String,
    },
    /// Residual `a -> b` of two elements of a model.
    Residual {
        #[arg(long, value_parser = model_name)]
        model: ModelName,
        a: String,
        b: String,
    },
    /// Converse of an element of a model.
    Conv {
        #[arg(long, value_parser = model_name)]
        model: ModelName,
        a: String,
    },
    /// Symbolic elements of the sequence algebras.
    Sym {
        #[command(subcommand)]
        action: SymAction,
    },
    /// The Sugihara chain of an index set.
    Chain {
        #[arg(long, value_parser = index_set)]
        index_set: IndexSet,
        /// The relativized chain.
        #[arg(long)]
        primed: bool,
        /// Index window `a..b`, required for infinite index sets.
        #[arg(long, value_parser = window, allow_hyphen_values = true)]
        window: Option<RangeInclusive<i64>>,
        /// Add the empty relation and the top element.
        #[arg(long)]
        extended: bool,
    },
    /// Validity of a formula in a model's matrix.
    Validate {
        #[arg(long, value_parser = model_name)]
        model: ModelName,
        formula: String,
    },
    /// Validity of an axiom suite in a model's matrix.
    Axioms {
        #[arg(long, value_parser = model_name)]
        model: ModelName,
        #[arg(long, value_parser = suite)]
        suite: Suite,
    },
    /// Variable-sharing countermodel for `f -> g` with disjoint variables.
    Varshare {
        #[arg(long, value_parser = style)]
        style: ShareStyle,
        f: String,
        g: String,
    },
    /// Relational property checks.
    Check {
        #[command(subcommand)]
        action: CheckAction,
    },
    /// Export a model.
    Export {
        #[command(subcommand)]
        action: ExportAction,
    },
}

#[derive(Subcommand)]
enum ModelAction {
    /// Atom table and matrix tables of a model.
    Show {
        #[arg(value_parser = model_name)]
        name: ModelName,
    },
}

#[derive(Subcommand)]
enum SymAction {
    /// Evaluate an element expression.
    Eval {
        #[arg(long, value_parser = index_set)]
        index_set: IndexSet,
        expr: String,
    },
}

#[derive(Subcommand)]
enum CheckAction {
    /// Axiom-to-property equivalences on random relations, or the axiom
    /// meanings of one model with `--model`.
    Meanings {
        #[arg(long, default_value_t = 2)]
        base: usize,
        /// Samples per check; 0 enumerates every relation (base <= 4).
        #[arg(long, default_value_t = 0)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = model_name)]
        model: Option<ModelName>,
    },
}

#[derive(Subcommand)]
enum ExportAction {
    /// Routley-Meyer model structure.
    Rms {
        #[arg(long, value_parser = model_name)]
        model: ModelName,
        /// Keep only diversity atoms as points.
        #[arg(long)]
        relativized: bool,
        /// Zero point; defaults to L1 for the relativized crystal.
        #[arg(long)]
        zero: Option<String>,
    },
    /// Atom structure in the algebra file format.
    Algebra {
        #[arg(long, value_parser = model_name)]
        model: ModelName,
    },
}

fn model_name(s: &str) -> Result<ModelName, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn index_set(s: &str) -> Result<IndexSet, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn style(s: &str) -> Result<ShareStyle, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn window(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad window start '{a}'"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad window end '{b}'"))?;
    if a > b {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok(a..=b)
}

/// What a verb produced: text, its structured form and whether it passed.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Text => print!("{}", r.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).unwrap()),
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> relevance_ra::Result<Report> {
    match &cli.command {
        Command::Model { action: ModelAction::Show { name } } => show_model(*name),
        Command::Compose { model, a, b } => binary(*model, a, b, "|", |x, y| x.compose(y)),
        Command::Residual { model, a, b } => binary(*model, a, b, "->", |x, y| x.residual(y)),
        Command::Conv { model, a } => {
            let alg = model.algebra();
            let r = alg.label(&alg.parse(a)?.converse());
            Ok(Report {
                text: format!("conv({a}) = {r}\n"),
                json: json!({"op": "conv", "a": a, "result": r}),
                ok: true,
            })
        }
        Command::Sym { action: SymAction::Eval { index_set, expr } } => {
            let e = eval_expr(index_set, expr)?;
            Ok(Report {
                text: format!("{e}\n"),
                json: json!({"index_set": index_set.to_string(), "expr": expr, "result": e.to_string()}),
                ok: true,
            })
        }
        Command::Chain {
            index_set,
            primed,
            window,
            extended,
        } => chain(index_set, *primed, window.clone(), *extended),
        Command::Validate { model, formula } => {
            let m = model.matrix();
            let f = parse(formula)?;
            let v = is_valid(&f, &m, cli.jobs)?;
            Ok(Report {
                text: format!("{}\n", v.render(&m)),
                json: verdict_json(&m, &v),
                ok: v.is_valid(),
            })
        }
        Command::Axioms { model, suite } => axioms(*model, *suite, cli.jobs),
        Command::Varshare { style, f, g } => {
            let rep = variable_sharing_demo(&parse(f)?, &parse(g)?, *style)?;
            let ok = !rep.designated && rep.traces_closed();
            Ok(Report {
                text: rep.to_string(),
                json: json!({
                    "valuation": rep.valuation.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                    "f_value": rep.f_value,
                    "g_value": rep.g_value,
                    "implication_value": rep.implication_value,
                    "designated": rep.designated,
                    "traces_closed": rep.traces_closed(),
                }),
                ok,
            })
        }
        Command::Check {
            action: CheckAction::Meanings { base, samples, seed, model },
        } => meanings(*base, *samples, *seed, *model),
        Command::Export { action: ExportAction::Rms { model, relativized, zero } } => {
            let alg = model.algebra();
            let zero = match (zero.as_deref(), model, relativized) {
                (Some(z), _, _) => Some(z),
                (None, ModelName::Crystal, true) => Some("L1"),
                _ => None,
            };
            let ms = export_rms(&alg.structure, *relativized, zero)?;
            let name = |p: usize| ms.points[p].clone();
            Ok(Report {
                text: ms.to_text(),
                json: json!({
                    "name": ms.name,
                    "points": ms.points,
                    "star": ms.star.iter().map(|&s| name(s)).collect::<Vec<_>>(),
                    "zero": ms.zero.iter().map(|&z| name(z)).collect::<Vec<_>>(),
                    "triple_count": ms.triple_count(),
                    "triples": ms.triples.iter().map(|&(x, y, z)| json!([name(x), name(y), name(z)])).collect::<Vec<_>>(),
                }),
                ok: true,
            })
        }
        Command::Export { action: ExportAction::Algebra { model } } => {
            let text = model.algebra().structure.to_text();
            Ok(Report {
                json: json!({"algebra": text}),
                text,
                ok: true,
            })
        }
    }
}

fn binary(
    model: ModelName,
    a: &str,
    b: &str,
    op: &str,
    f: impl Fn(&relevance_ra::RaElement, &relevance_ra::RaElement) -> relevance_ra::Result<relevance_ra::RaElement>,
) -> relevance_ra::Result<Report> {
    let alg = model.algebra();
    let r = alg.label(&f(&alg.parse(a)?, &alg.parse(b)?)?);
    Ok(Report {
        text: format!("{a} {op} {b} = {r}\n"),
        json: json!({"op": op, "a": a, "b": b, "result": r}),
        ok: true,
    })
}

fn table_json(m: &Matrix, op: impl Fn(usize, usize) -> usize) -> Value {
    let n = m.size();
    json!((0..n).map(|a| (0..n).map(|b| m.label(op(a, b))).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn show_model(name: ModelName) -> relevance_ra::Result<Report> {
    let alg = name.algebra();
    let m = name.matrix();
    let mut text = alg.structure.to_text();
    text.push_str(&format!("\nmatrix {} ({} elements)\n", m.name(), m.size()));
    text.push_str(&m.render_binary("->", |a, b| m.arrow(a, b)));
    text.push('\n');
    let width = m.labels().iter().map(String::len).max().unwrap_or(1);
    for a in 0..m.size() {
        let mark = if m.is_designated(a) { "  designated" } else { "" };
        text.push_str(&format!("~{:>width$} = {:>width$}{mark}\n", m.label(a), m.label(m.neg(a))));
    }
    let json = json!({
        "algebra": alg.structure.name(),
        "atoms": alg.structure.atom_names(),
        "matrix": m.name(),
        "labels": m.labels(),
        "arrow": table_json(&m, |a, b| m.arrow(a, b)),
        "join": table_json(&m, |a, b| m.join(a, b)),
        "meet": table_json(&m, |a, b| m.meet(a, b)),
        "neg": (0..m.size()).map(|a| m.label(m.neg(a))).collect::<Vec<_>>(),
        "designated": m.designated().into_iter().map(|d| m.label(d)).collect::<Vec<_>>(),
    });
    Ok(Report { text, json, ok: true })
}

fn chain(
    index: &IndexSet,
    primed: bool,
    window: Option<RangeInclusive<i64>>,
    extended: bool,
) -> relevance_ra::Result<Report> {
    let els = if extended {
        extended_chain(index, primed, window)?
    } else {
        enumerate_chain(index, primed, window)?
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for e in &els {
        let label = chain_label(e, primed);
        let d = is_designated(e, primed)?;
        text.push_str(&format!("{label:>8}  {e}{}\n", if d { "  designated" } else { "" }));
        rows.push(json!({"label": label, "element": e.to_string(), "designated": d}));
    }
    Ok(Report {
        text,
        json: json!({"index_set": index.to_string(), "primed": primed, "chain": rows}),
        ok: true,
    })
}

fn verdict_json(m: &Matrix, v: &Verdict) -> Value {
    match v {
        Verdict::Valid => json!({"verdict": "VALID"}),
        Verdict::Countermodel { valuation, value } => json!({
            "verdict": "COUNTERMODEL",
            "valuation": valuation.iter().map(|(k, &x)| (k.clone(), json!(m.label(x)))).collect::<serde_json::Map<_, _>>(),
            "value": m.label(*value),
        }),
    }
}

fn axioms(model: ModelName, suite: Suite, jobs: usize) -> relevance_ra::Result<Report> {
    let m = model.matrix();
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for (label, f) in axiom_suite(suite) {
        let v = is_valid(&f, &m, jobs)?;
        ok &= v.is_valid();
        text.push_str(&format!("{label:<4} {f}  {}\n", v.render(&m)));
        let mut row = verdict_json(&m, &v);
        row["axiom"] = json!(label);
        row["formula"] = json!(f.to_string());
        rows.push(row);
    }
    Ok(Report {
        text,
        json: json!({"matrix": m.name(), "axioms": rows}),
        ok,
    })
}

fn meanings(base: usize, samples: u64, seed: u64, model: Option<ModelName>) -> relevance_ra::Result<Report> {
    if let Some(model) = model {
        let s = match model {
            ModelName::Point => theorem_meanings_summary(&models::m0_matrix())?,
            ModelName::Crystal => theorem_meanings_summary(&models::crystal_lattice())?,
            ModelName::Church => theorem_meanings_summary(&models::church_diamond())?,
            ModelName::Rm84 => theorem_meanings_summary(&models::rm84_matrix())?,
        };
        let rows: Vec<Value> = s
            .axioms
            .iter()
            .map(|a| json!({"axiom": a.label, "class": a.class.to_string(), "consistent": a.consistent, "note": a.note}))
            .collect();
        return Ok(Report {
            text: s.to_string(),
            json: json!({"matrix": s.matrix, "axioms": rows}),
            ok: s.consistent(),
        });
    }
    let rep = if samples == 0 {
        if base > 4 {
            return Err(Error::Parse(format!("base {base} is too large to enumerate; pass --samples")));
        }
        exhaustive_equivalences(base)
    } else {
        equivalence_checks(base, samples, seed)
    };
    let items: Vec<Value> = rep
        .items
        .iter()
        .map(|i| {
            json!({
                "name": i.name,
                "checked": i.checked,
                "violations": i.violations,
                "first_counterexample": i.first_counterexample,
            })
        })
        .collect();
    let witnesses: Vec<Value> = rep
        .witnesses
        .iter()
        .map(|w| json!({"name": w.name, "separates": w.separates(), "detail": w.detail}))
        .collect();
    Ok(Report {
        text: rep.to_string(),
        json: json!({"base": rep.base, "mode": rep.mode, "items": items, "witnesses": witnesses}),
        ok: rep.all_hold(),
    })
}
