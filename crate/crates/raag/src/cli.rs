//! Command-line front end over the library: word calculus, classification,
//! quasi-root search and the uniqueness harness, for batch use.
//!
//! Exit codes: 0 success, 1 property/theorem violation, 2 usage or parse
//! error, 3 enumeration cap exceeded.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::Error;
use crate::graph::{DefiningGraph, VertexOrder};
use crate::normalform::{
    conical_conjugate, is_conical, is_pyramidal, is_sd_conical, normal_form, starting_generators,
};
use crate::quasiroot::{
    check_uniqueness, find_quasi_roots, format_rational, generate_instance, parse_rational,
    verify_quasi_root, InstanceLimits, QuasiRootDecomposition, QuasiRootParams, SearchOptions,
};
use crate::structure::{
    cyclically_reduce, extract_nth_roots, is_cyclically_reduced, is_non_split, is_primitive,
    is_strongly_non_split,
};
use crate::words::{GroupElement, Word};

const DEFAULT_CAP: usize = 1_000_000;

#[derive(Parser)]
#[command(name = "raag", version, about = "Word calculus and quasi-root search in right-angled Artin groups", disable_help_subcommand = true)]
struct Cli {
    /// Defining graph file (`vertices: ...` / `edges: a-b` format)
    #[arg(long, global = true)]
    graph: Option<PathBuf>,

    /// Vertex order override: comma-separated permutation of the vertices
    #[arg(long, global = true)]
    order: Option<String>,

    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Enumeration cap; overrides the RAAG_CAP environment variable
    #[arg(long, global = true)]
    cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QuasiArgs {
    /// Quasi-root parameter lambda as an exact rational `p/q`
    #[arg(long)]
    lambda: String,
    /// Minimum power N (at least 2)
    #[arg(long, default_value_t = 2)]
    min_power: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a word to a geodesic representative
    Reduce { word: String },
    /// Normal form under the vertex order
    Nf { word: String },
    /// Support of the element
    Support { word: String },
    /// Starting generators S(g)
    Startings { word: String },
    /// Structural classification of the element
    Classify { word: String },
    /// Conical conjugate with the given apex
    ConicalConjugate {
        #[arg(long)]
        apex: String,
        word: String,
    },
    /// Cyclic reduction g = u^-1 h u
    CycReduce { word: String },
    /// All n-th roots of the element
    Roots {
        #[arg(long)]
        n: usize,
        word: String,
    },
    /// Exhaustive (lambda,N)-quasi-root search
    FindQuasiroots {
        #[command(flatten)]
        quasi: QuasiArgs,
        /// Also list the degenerate decompositions with g = 1
        #[arg(long)]
        include_trivial: bool,
        word: String,
    },
    /// Verify one quasi-root decomposition h = a g^n b
    VerifyQuasiroot {
        #[command(flatten)]
        quasi: QuasiArgs,
        #[arg(long, default_value = "")]
        a: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        b: String,
        word: String,
    },
    /// Search for quasi-roots and check uniqueness across every pair
    TheoremCheck {
        #[command(flatten)]
        quasi: QuasiArgs,
        word: String,
    },
    /// Seeded random instances through the full search-and-check pipeline
    RandomTest {
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded(_) => 3,
        Error::TheoremViolation(_) | Error::ConclusionFailed(_) => 1,
        _ => 2,
    }
}

struct Ctx {
    graph: Arc<DefiningGraph>,
    order: VertexOrder,
    json: bool,
    cap: usize,
}

impl Ctx {
    fn element(&self, word: &str) -> Result<GroupElement, Error> {
        GroupElement::parse(&self.graph, word)
    }
}

fn load_ctx(cli: &Cli) -> Result<Ctx, Error> {
    let Some(path) = &cli.graph else {
        return Err(Error::Precondition(
            "this subcommand requires --graph".into(),
        ));
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    let graph = Arc::new(DefiningGraph::parse(&text)?);
    let order = match &cli.order {
        Some(list) => {
            let names: Vec<&str> = list.split(',').map(str::trim).collect();
            VertexOrder::from_names(&graph, &names)?
        }
        None => graph.default_order(),
    };
    Ok(Ctx {
        graph,
        order,
        json: cli.json,
        cap: resolve_cap(cli),
    })
}

fn resolve_cap(cli: &Cli) -> usize {
    cli.cap
        .or_else(|| std::env::var("RAAG_CAP").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(DEFAULT_CAP)
}

fn names(ctx: &Ctx, set: impl IntoIterator<Item = crate::graph::VertexId>) -> Vec<String> {
    set.into_iter()
        .map(|v| ctx.graph.vertex_name(v).to_owned())
        .collect()
}

fn print_word(ctx: &Ctx, key: &str, s: &str) {
    if ctx.json {
        println!("{}", json!({ key: s }));
    } else if !s.is_empty() {
        println!("{s}");
    }
}

fn decomposition_json(d: &QuasiRootDecomposition) -> serde_json::Value {
    json!({
        "a": d.a.to_token_string(),
        "g": d.g.to_token_string(),
        "n": d.n,
        "b": d.b.to_token_string(),
    })
}

/// Decompositions whose root qualifies for the uniqueness theorem.
fn theorem_candidates(
    found: &[QuasiRootDecomposition],
    cap: usize,
) -> Result<Vec<&QuasiRootDecomposition>, Error> {
    let mut out = Vec::new();
    for d in found {
        if is_strongly_non_split(&d.g) && is_primitive(&d.g, cap)? {
            out.push(d);
        }
    }
    Ok(out)
}

fn run_command(cli: &Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Reduce { word } => {
            let ctx = load_ctx(cli)?;
            let w = Word::parse(&ctx.graph, word)?;
            let reduced = crate::words::reduce(&ctx.graph, &w);
            print_word(&ctx, "word", &reduced.display(&ctx.graph));
        }
        Command::Nf { word } => {
            let ctx = load_ctx(cli)?;
            let nf = normal_form(&ctx.element(word)?, &ctx.order);
            print_word(&ctx, "word", &nf.display(&ctx.graph));
        }
        Command::Support { word } => {
            let ctx = load_ctx(cli)?;
            let supp = names(&ctx, ctx.element(word)?.support());
            if ctx.json {
                println!("{}", json!({ "support": supp }));
            } else if !supp.is_empty() {
                println!("{}", supp.join(" "));
            }
        }
        Command::Startings { word } => {
            let ctx = load_ctx(cli)?;
            let s = names(&ctx, starting_generators(&ctx.element(word)?));
            if ctx.json {
                println!("{}", json!({ "startings": s }));
            } else if !s.is_empty() {
                println!("{}", s.join(" "));
            }
        }
        Command::Classify { word } => {
            let ctx = load_ctx(cli)?;
            let g = ctx.element(word)?;
            let primitive = !g.is_identity() && is_primitive(&g, ctx.cap)?;
            let rows = [
                ("conical", is_conical(&g)),
                ("pyramidal", is_pyramidal(&g, &ctx.order)),
                ("sd-conical", is_sd_conical(&g, &ctx.order)),
                ("split", !is_non_split(&g)),
                ("strongly-non-split", is_strongly_non_split(&g)),
                ("cyclically-reduced", is_cyclically_reduced(&g)),
                ("primitive", primitive),
            ];
            if ctx.json {
                let map: serde_json::Map<String, serde_json::Value> = rows
                    .iter()
                    .map(|(k, v)| (k.to_string(), json!(v)))
                    .collect();
                println!("{}", serde_json::Value::Object(map));
            } else {
                for (k, v) in rows {
                    println!("{k}: {v}");
                }
            }
        }
        Command::ConicalConjugate { apex, word } => {
            let ctx = load_ctx(cli)?;
            let v0 = ctx.graph.vertex(apex)?;
            let r = conical_conjugate(&ctx.element(word)?, v0)?;
            if ctx.json {
                println!(
                    "{}",
                    json!({
                        "p": r.p.to_token_string(),
                        "a": r.a.to_token_string(),
                        "b": r.b.to_token_string(),
                        "k": r.k,
                        "apex": ctx.graph.vertex_name(r.v0),
                    })
                );
            } else {
                println!("p: {}", r.p.to_token_string());
                println!("a: {}", r.a.to_token_string());
                println!("b: {}", r.b.to_token_string());
                println!("k: {}", r.k);
                println!("apex: {}", ctx.graph.vertex_name(r.v0));
            }
        }
        Command::CycReduce { word } => {
            let ctx = load_ctx(cli)?;
            let r = cyclically_reduce(&ctx.element(word)?);
            if ctx.json {
                println!(
                    "{}",
                    json!({ "u": r.u.to_token_string(), "h": r.h.to_token_string() })
                );
            } else {
                println!("u: {}", r.u.to_token_string());
                println!("h: {}", r.h.to_token_string());
            }
        }
        Command::Roots { n, word } => {
            let ctx = load_ctx(cli)?;
            let roots = extract_nth_roots(&ctx.element(word)?, *n, ctx.cap)?;
            if ctx.json {
                let list: Vec<String> = roots.iter().map(|r| r.to_token_string()).collect();
                println!("{}", json!({ "roots": list }));
            } else {
                for r in &roots {
                    println!("{}", r.to_token_string());
                }
            }
        }
        Command::FindQuasiroots {
            quasi,
            include_trivial,
            word,
        } => {
            let ctx = load_ctx(cli)?;
            let params = QuasiRootParams::new(parse_rational(&quasi.lambda)?, quasi.min_power)?;
            let h = ctx.element(word)?;
            let opts = SearchOptions {
                nontrivial_only: !include_trivial,
                cap: ctx.cap,
            };
            let found = find_quasi_roots(&params, &h, &opts)?;
            if ctx.json {
                println!(
                    "{}",
                    json!({
                        "h": h.to_token_string(),
                        "lambda": format_rational(&params.lambda()),
                        "min_power": params.min_power(),
                        "results": found.iter().map(decomposition_json).collect::<Vec<_>>(),
                    })
                );
            } else {
                for d in &found {
                    println!(
                        "a=[{}] g=[{}] n={} b=[{}]",
                        d.a.to_token_string(),
                        d.g.to_token_string(),
                        d.n,
                        d.b.to_token_string()
                    );
                }
            }
        }
        Command::VerifyQuasiroot {
            quasi,
            a,
            g,
            n,
            b,
            word,
        } => {
            let ctx = load_ctx(cli)?;
            let params = QuasiRootParams::new(parse_rational(&quasi.lambda)?, quasi.min_power)?;
            let h = ctx.element(word)?;
            let d = QuasiRootDecomposition {
                a: ctx.element(a)?,
                g: ctx.element(g)?,
                n: *n,
                b: ctx.element(b)?,
            };
            let report = verify_quasi_root(&params, &h, &d)?;
            if ctx.json {
                println!(
                    "{}",
                    json!({
                        "h": h.to_token_string(),
                        "lambda": format_rational(&params.lambda()),
                        "decomposition": decomposition_json(&d),
                        "product": report.product_ok,
                        "geodesic": report.geodesic_ok,
                        "power": report.power_ok,
                        "a_bound": report.a_bound_ok,
                        "b_bound": report.b_bound_ok,
                        "ok": report.ok(),
                    })
                );
            } else {
                println!("product: {}", report.product_ok);
                println!("geodesic: {}", report.geodesic_ok);
                println!("power: {}", report.power_ok);
                println!("a-bound: {}", report.a_bound_ok);
                println!("b-bound: {}", report.b_bound_ok);
                println!("ok: {}", report.ok());
            }
            if !report.ok() {
                return Ok(1);
            }
        }
        Command::TheoremCheck { quasi, word } => {
            let ctx = load_ctx(cli)?;
            let params = QuasiRootParams::new(parse_rational(&quasi.lambda)?, quasi.min_power)?;
            let h = ctx.element(word)?;
            let found = find_quasi_roots(&params, &h, &SearchOptions {
                nontrivial_only: true,
                cap: ctx.cap,
            })?;
            let candidates = theorem_candidates(&found, ctx.cap)?;
            let mut violations = Vec::new();
            let mut pairs = 0usize;
            for i in 0..candidates.len() {
                for j in i..candidates.len() {
                    pairs += 1;
                    let report =
                        check_uniqueness(&params, &h, candidates[i], candidates[j], ctx.cap)?;
                    if report.theorem_violation() {
                        violations.push(json!({
                            "d1": decomposition_json(candidates[i]),
                            "d2": decomposition_json(candidates[j]),
                            "left_conjugate_equal": report.left_conjugate_equal,
                            "right_conjugate_equal": report.right_conjugate_equal,
                            "roots_conjugate": report.roots_conjugate,
                        }));
                    }
                }
            }
            if ctx.json {
                println!(
                    "{}",
                    json!({
                        "h": h.to_token_string(),
                        "lambda": format_rational(&params.lambda()),
                        "found": found.len(),
                        "candidates": candidates.len(),
                        "pairs": pairs,
                        "violations": violations,
                    })
                );
            } else {
                println!(
                    "found={} candidates={} pairs={} violations={}",
                    found.len(),
                    candidates.len(),
                    pairs,
                    violations.len()
                );
            }
            if !violations.is_empty() {
                return Ok(1);
            }
        }
        Command::RandomTest { trials, seed } => {
            let cap = resolve_cap(cli);
            let limits = InstanceLimits::default();
            let mut checked = 0u64;
            let mut skipped = 0u64;
            let mut violations = 0u64;
            for i in 0..*trials {
                let inst = generate_instance(seed.wrapping_add(i), &limits)?;
                if !verify_quasi_root(&inst.params, &inst.h, &inst.planted)?.ok() {
                    violations += 1;
                    continue;
                }
                let found = match find_quasi_roots(&inst.params, &inst.h, &SearchOptions {
                    nontrivial_only: true,
                    cap,
                }) {
                    Ok(found) => found,
                    Err(Error::CapExceeded(_)) => {
                        skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let candidates = theorem_candidates(&found, cap)?;
                for i in 0..candidates.len() {
                    for j in i..candidates.len() {
                        let report = check_uniqueness(
                            &inst.params,
                            &inst.h,
                            candidates[i],
                            candidates[j],
                            cap,
                        )?;
                        if report.theorem_violation() {
                            violations += 1;
                        }
                    }
                }
                checked += 1;
            }
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "trials": trials,
                        "checked": checked,
                        "skipped": skipped,
                        "violations": violations,
                    })
                );
            } else {
                println!(
                    "trials={trials} checked={checked} skipped={skipped} violations={violations}"
                );
            }
            if violations > 0 {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version go to stdout with success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
