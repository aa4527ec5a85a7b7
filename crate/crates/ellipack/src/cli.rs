//! The `ellipack` command line: thin verbs over the library, exact output.
//!
//! Every computed result — including an infeasible verdict — exits 0; usage
//! and domain errors exit 2; `reproduce` exits 1 when a recomputed reference
//! value fails to match. `--json` switches any verb to a machine-readable
//! document carrying a versioned `schema` field.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::cone::{self, Certificate, ConeOptions, Verdict};
use crate::ehcap::{self, ConeCheck};
use crate::engine::{self, EllipsoidPair, ExactValue, LambdaSup};
use crate::hclass::HClass;
use crate::rational::{format_rational, int, parse_rational, rat, Rational};
use crate::toric::{self, EdgeChain, LatticeTriangle, RenderObject};
use crate::weights;
use crate::Result;

/// Version tag stamped into every `--json` document.
pub const SCHEMA: &str = "ellipack/1";

#[derive(Parser)]
#[command(
    name = "ellipack",
    version,
    no_binary_name = true,
    about = "exact embedding and packing computations for 4-dimensional ellipsoids",
    disable_help_subcommand = true
)]
struct Cli {
    /// machine-readable JSON output (versioned "schema" field)
    #[arg(long, global = true)]
    json: bool,

    /// write an SVG rendering of geometric output to PATH
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// scale factor for the source, as p/q (default 1)
    #[arg(long, global = true, value_name = "P/Q")]
    lambda: Option<String>,

    /// class-degree search bound for problems on 9 or more points
    #[arg(long, global = true, value_name = "D")]
    degree_bound: Option<u32>,

    /// capacity-sequence depth
    #[arg(long, global = true, value_name = "T")]
    depth: Option<usize>,

    /// settle problems on 9 or more points by exact reduction instead of a
    /// degree-bounded search
    #[arg(long, global = true)]
    exact_reduction: bool,

    /// directory for the on-disk class cache (env ELLIPACK_CACHE)
    #[arg(long, global = true, value_name = "PATH")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// decide whether lambda E(m,n) embeds in the open E(m',n')
    Decide {
        m: String,
        n: String,
        #[arg(value_name = "into")]
        kw: String,
        m2: String,
        n2: String,
    },
    /// supremum of the scales at which E(m,n) embeds in the open E(m',n')
    Sup {
        m: u64,
        n: u64,
        #[arg(value_name = "into")]
        kw: String,
        m2: u64,
        n2: u64,
    },
    /// the ball-packing constants v(1), ..., v(8)
    FillTable,
    /// ball capacity of E(m,n): the smallest c with E(m,n) inside the open B(c)
    Capacity { m: u64, n: u64 },
    /// weight expansion of m/n: ball weights and continued-fraction multiplicities
    Weights { fraction: String },
    /// label vector of (m,n): the class of the complement of E(m,n) in a ball
    Inner { fraction: String },
    /// blow-up chain of the moment triangle of (m,n), optionally perturbed
    Chain {
        fraction: String,
        /// comma-separated perturbations delta_0,...,delta_N
        #[arg(long, value_name = "LIST")]
        delta: Option<String>,
        /// sample an admissible perturbation with steps of roughly this size
        #[arg(long, value_name = "P/Q")]
        sample: Option<String>,
    },
    /// tile the moment triangle of (m,n), or its complement in the ambient
    /// simplex, by affine images of standard triangles
    Decompose {
        fraction: String,
        #[arg(value_parser = ["ellipsoid", "complement"], default_value = "ellipsoid")]
        which: String,
    },
    /// place k disjoint unit triangles inside the triangle of (1,k)
    PackTriangles { k: u64 },
    /// capacity sequence of E(m,n)
    Ehcap { m: u64, n: u64 },
    /// termwise comparison of two capacity sequences to a finite depth
    Ehcmp {
        m: u64,
        n: u64,
        #[arg(value_name = "vs")]
        kw: String,
        m2: u64,
        n2: u64,
    },
    /// volume, capacity, and cone obstructions side by side for one problem
    Report {
        m: String,
        n: String,
        #[arg(value_name = "into")]
        kw: String,
        m2: String,
        n2: String,
        /// square of the scale factor, for irrational scales with a rational
        /// square (overrides --lambda)
        #[arg(long, value_name = "P/Q")]
        lambda_sq: Option<String>,
    },
    /// test a class d;m1,...,mk against the packing cone
    ConeCheck { class: String },
    /// the exceptional classes on k points (degree-bounded for k >= 9)
    Enumerate { k: usize },
    /// standalone SVG of a chain, a tiling, or a unit-triangle packing
    Render {
        #[arg(value_parser = ["chain", "ellipsoid", "complement", "pack"])]
        kind: String,
        arg: String,
    },
    /// recompute a frozen reference result and compare
    Reproduce {
        #[arg(value_parser = ["cor1.2", "prop1.6", "eq3.7", "eq3.10", "fig8"])]
        target: String,
    },
}

/// What a verb produced: its stdout text, and whether a reproduce target
/// diverged from its frozen reference.
enum Outcome {
    Done(String),
    Mismatch(String),
}

/// Run the CLI on `args` (program name already stripped). Returns the
/// process exit code: 0 computed, 1 reference mismatch, 2 usage error.
pub fn run(args: impl Iterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(Outcome::Done(text)) => {
            print!("{text}");
            0
        }
        Ok(Outcome::Mismatch(text)) => {
            print!("{text}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Flags shared across verbs, resolved once.
struct Ctx {
    json: bool,
    svg: Option<PathBuf>,
    lambda: Option<String>,
    depth: Option<usize>,
    opts: ConeOptions,
}

impl Ctx {
    /// --lambda, defaulting to 1.
    fn lambda(&self) -> Result<Rational> {
        match &self.lambda {
            Some(s) => {
                let l = parse_rational(s)?;
                if !l.is_positive() {
                    return crate::domain_err(format!("--lambda must be positive, got {s}"));
                }
                Ok(l)
            }
            None => Ok(int(1)),
        }
    }

    /// write svg to --svg if given; returns a note line for the text output.
    fn emit_svg(&self, svg: &str) -> Result<Option<String>> {
        match &self.svg {
            Some(path) => {
                std::fs::write(path, svg)?;
                Ok(Some(format!("svg: {}\n", path.display())))
            }
            None => Ok(None),
        }
    }
}

fn execute(cli: Cli) -> Result<Outcome> {
    let Cli {
        json,
        svg,
        lambda,
        degree_bound,
        depth,
        exact_reduction,
        cache_dir,
        cmd,
    } = cli;
    let opts = ConeOptions {
        degree_bound: degree_bound.unwrap_or(cone::DEFAULT_DEGREE_BOUND),
        exact_reduction,
        cache_dir: cache_dir.or_else(|| std::env::var_os("ELLIPACK_CACHE").map(PathBuf::from)),
    };
    let ctx = Ctx {
        json,
        svg,
        lambda,
        depth,
        opts,
    };
    match cmd {
        Cmd::Decide { m, n, kw, m2, n2 } => {
            expect_kw(&kw, "into")?;
            verb_decide(&ctx, &[m, n], &[m2, n2])
        }
        Cmd::Sup { m, n, kw, m2, n2 } => {
            expect_kw(&kw, "into")?;
            verb_sup(&ctx, (m, n), (m2, n2))
        }
        Cmd::FillTable => verb_fill_table(&ctx),
        Cmd::Capacity { m, n } => verb_capacity(&ctx, m, n),
        Cmd::Weights { fraction } => verb_weights(&ctx, &fraction),
        Cmd::Inner { fraction } => verb_inner(&ctx, &fraction),
        Cmd::Chain {
            fraction,
            delta,
            sample,
        } => verb_chain(&ctx, &fraction, delta.as_deref(), sample.as_deref()),
        Cmd::Decompose { fraction, which } => verb_decompose(&ctx, &fraction, &which),
        Cmd::PackTriangles { k } => verb_pack(&ctx, k),
        Cmd::Ehcap { m, n } => verb_ehcap(&ctx, m, n),
        Cmd::Ehcmp { m, n, kw, m2, n2 } => {
            expect_kw(&kw, "vs")?;
            verb_ehcmp(&ctx, (m, n), (m2, n2))
        }
        Cmd::Report {
            m,
            n,
            kw,
            m2,
            n2,
            lambda_sq,
        } => {
            expect_kw(&kw, "into")?;
            verb_report(&ctx, &[m, n], &[m2, n2], lambda_sq.as_deref())
        }
        Cmd::ConeCheck { class } => verb_cone_check(&ctx, &class),
        Cmd::Enumerate { k } => verb_enumerate(&ctx, k),
        Cmd::Render { kind, arg } => verb_render(&ctx, &kind, &arg),
        Cmd::Reproduce { target } => verb_reproduce(&ctx, &target),
    }
}

fn expect_kw(got: &str, want: &str) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        crate::domain_err(format!("expected the keyword `{want}`, got `{got}`"))
    }
}

/// "m/n" (or "m") as a positive coprime pair (numerator, denominator).
fn parse_pair(s: &str) -> Result<(u64, u64)> {
    let r = parse_rational(s)?;
    if !r.is_positive() {
        return crate::domain_err(format!("expected a positive fraction, got {s}"));
    }
    let m = r.numer().to_u64();
    let n = r.denom().to_u64();
    match (m, n) {
        (Some(m), Some(n)) => Ok((m, n)),
        _ => crate::domain_err(format!("fraction {s} out of range")),
    }
}

fn rstr(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn doc(command: &str, mut body: Value) -> String {
    let obj = body.as_object_mut().expect("json body is an object");
    obj.insert("schema".into(), SCHEMA.into());
    obj.insert("command".into(), command.into());
    let mut s = serde_json::to_string_pretty(&body).expect("serializable");
    s.push('\n');
    s
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Volume { self_int } => json!({"kind": "volume", "self_int": rstr(self_int)}),
        Certificate::Class { class, pairing } => {
            json!({"kind": "class", "class": class.to_string(), "pairing": rstr(pairing)})
        }
    }
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Yes => json!({"feasible": true}),
        Verdict::YesUpToDegree(d) => json!({"feasible": true, "qualified_degree": d}),
        Verdict::No(c) => json!({"feasible": false, "certificate": certificate_json(c)}),
    }
}

fn exact_value_json(v: &ExactValue) -> Value {
    match v {
        ExactValue::Rational(r) => json!({"kind": "rational", "value": rstr(r)}),
        ExactValue::Sqrt(r) => json!({"kind": "sqrt", "square": rstr(r)}),
    }
}

fn sup_json(s: &LambdaSup) -> Value {
    match s {
        LambdaSup::Exact { value, binding } => json!({
            "kind": "exact",
            "value": exact_value_json(value),
            "square": rstr(&value.square()),
            "binding": binding.as_ref().map(|b| b.to_string()),
        }),
        LambdaSup::Bracket {
            lower,
            upper,
            degree_bound,
        } => json!({
            "kind": "bracket",
            "lower": exact_value_json(lower),
            "upper": exact_value_json(upper),
            "degree_bound": degree_bound,
        }),
    }
}

fn verb_decide(ctx: &Ctx, src: &[String; 2], tgt: &[String; 2]) -> Result<Outcome> {
    let s = (parse_rational(&src[0])?, parse_rational(&src[1])?);
    let t = (parse_rational(&tgt[0])?, parse_rational(&tgt[1])?);
    let lambda = ctx.lambda()?;
    let pair = EllipsoidPair::new(s, t, lambda)?;
    let verdict = engine::decide(&pair, &ctx.opts)?;
    if ctx.json {
        let (sm, sn) = pair.source();
        let (tm, tn) = pair.target();
        return Ok(Outcome::Done(doc(
            "decide",
            json!({
                "source": [sm, sn],
                "target": [tm, tn],
                "lambda": rstr(pair.lambda()),
                "verdict": verdict_json(&verdict),
            }),
        )));
    }
    Ok(Outcome::Done(format!("{verdict}\n")))
}

fn verb_sup(ctx: &Ctx, src: (u64, u64), tgt: (u64, u64)) -> Result<Outcome> {
    let sup = engine::lambda_sup(src, tgt, &ctx.opts)?;
    if ctx.json {
        return Ok(Outcome::Done(doc(
            "sup",
            json!({"source": [src.0, src.1], "target": [tgt.0, tgt.1], "sup": sup_json(&sup)}),
        )));
    }
    Ok(Outcome::Done(format!("{sup}\n")))
}

fn verb_fill_table(ctx: &Ctx) -> Result<Outcome> {
    let table = engine::fill_table();
    if ctx.json {
        let rows: Vec<Value> = table
            .iter()
            .map(|(k, v)| json!({"k": k, "v": rstr(v)}))
            .collect();
        return Ok(Outcome::Done(doc("fill-table", json!({ "values": rows }))));
    }
    let cells: Vec<(String, String)> = table
        .iter()
        .map(|(k, v)| (k.to_string(), format_rational(v)))
        .collect();
    let mut head = String::from("k   ");
    let mut row = String::from("v(k)");
    for (k, v) in &cells {
        let w = k.len().max(v.len());
        write!(head, "  {k:>w$}").unwrap();
        write!(row, "  {v:>w$}").unwrap();
    }
    Ok(Outcome::Done(format!("{head}\n{row}\n")))
}

fn verb_capacity(ctx: &Ctx, m: u64, n: u64) -> Result<Outcome> {
    let cap = engine::ball_capacity(m, n, &ctx.opts)?;
    if ctx.json {
        return Ok(Outcome::Done(doc(
            "capacity",
            json!({"pair": [m, n], "capacity": sup_json(&cap)}),
        )));
    }
    Ok(Outcome::Done(format!("{cap}\n")))
}

fn verb_weights(ctx: &Ctx, fraction: &str) -> Result<Outcome> {
    let (m, n) = parse_pair(fraction)?;
    let w = weights::outer_weights(m, n)?;
    if ctx.json {
        return Ok(Outcome::Done(doc(
            "weights",
            json!({
                "pair": [m, n],
                "labels": w.labels(),
                "multiplicities": w.multiplicities(),
            }),
        )));
    }
    let labels: Vec<String> = w.labels().iter().map(u64::to_string).collect();
    let mult: Vec<String> = w.multiplicities().iter().map(u64::to_string).collect();
    Ok(Outcome::Done(format!(
        "{} | cf multiplicities: {}\n",
        labels.join(" "),
        mult.join(" ")
    )))
}

fn verb_inner(ctx: &Ctx, fraction: &str) -> Result<Outcome> {
    let (m, n) = parse_pair(fraction)?;
    let v = weights::inner_vector(m, n)?;
    if ctx.json {
        return Ok(Outcome::Done(doc(
            "inner",
            json!({
                "pair": [m, n],
                "degree": v.degree(),
                "labels": v.labels(),
                "class": v.as_hclass().to_string(),
            }),
        )));
    }
    Ok(Outcome::Done(format!("{}\n", v.as_hclass())))
}

fn parse_delta_list(list: &str) -> Result<Vec<Rational>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_rational)
        .collect()
}

fn chain_json(chain: &EdgeChain, admissible: Option<bool>) -> Value {
    let edges: Vec<Value> = chain
        .edges()
        .iter()
        .map(|e| {
            json!({
                "blow_up_index": e.blow_up_index,
                "conormal": [e.conormal.0, e.conormal.1],
                "support": rstr(&e.support),
                "from": [rstr(&e.from.0), rstr(&e.from.1)],
                "to": [rstr(&e.to.0), rstr(&e.to.1)],
                "class": e.class.to_string(),
                "affine_length": rstr(&e.signed_affine_length()),
            })
        })
        .collect();
    let (m, n) = chain.pair();
    json!({
        "pair": [m, n],
        "labels": chain.labels(),
        "delta": chain.delta().iter().map(rstr).collect::<Vec<_>>(),
        "symplectic_class": chain.symplectic_class().to_string(),
        "edges": edges,
        "admissible": admissible,
    })
}

fn verb_chain(
    ctx: &Ctx,
    fraction: &str,
    delta: Option<&str>,
    sample: Option<&str>,
) -> Result<Outcome> {
    let (m, n) = parse_pair(fraction)?;
    let (chain, admissible) = match (delta, sample) {
        (Some(_), Some(_)) => {
            return crate::domain_err("--delta and --sample are mutually exclusive")
        }
        (Some(list), None) => {
            let d = parse_delta_list(list)?;
            let (chain, adm) = toric::perturbed_chain(m, n, &d)?;
            (chain, Some(adm.admissible()))
        }
        (None, Some(scale)) => {
            let s = parse_rational(scale)?;
            let d = toric::sample_admissible_delta(m, n, &s, &[])?;
            let (chain, adm) = toric::perturbed_chain(m, n, &d)?;
            (chain, Some(adm.admissible()))
        }
        (None, None) => (toric::blowup_chain(m, n)?, None),
    };
    let svg_note = ctx.emit_svg(&toric::render_svg(&RenderObject::Chain(&chain)))?;
    if ctx.json {
        let mut body = chain_json(&chain, admissible);
        if let Some(path) = &ctx.svg {
            body["svg"] = json!(path.display().to_string());
        }
        return Ok(Outcome::Done(doc("chain", body)));
    }
    let mut out = toric::dump_chain(&chain);
    if let Some(adm) = admissible {
        let deltas: Vec<String> = chain.delta().iter().map(format_rational).collect();
        writeln!(out, "delta: {}", deltas.join(" ")).unwrap();
        writeln!(out, "admissible: {}", if adm { "yes" } else { "no" }).unwrap();
    }
    if let Some(note) = svg_note {
        out.push_str(&note);
    }
    Ok(Outcome::Done(out))
}

fn triangles_json(tris: &[LatticeTriangle]) -> Vec<Value> {
    tris.iter()
        .map(|t| {
            json!({
                "size": rstr(&t.size),
                "vertices": t.vertices.iter()
                    .map(|p| json!([rstr(&p.0), rstr(&p.1)]))
                    .collect::<Vec<_>>(),
            })
        })
        .collect()
}

fn triangles_text(tris: &[LatticeTriangle]) -> String {
    let mut out = format!("{} tiles\n", tris.len());
    for t in tris {
        let vs: Vec<String> = t
            .vertices
            .iter()
            .map(|p| format!("({},{})", format_rational(&p.0), format_rational(&p.1)))
            .collect();
        writeln!(out, "  size {}: {}", format_rational(&t.size), vs.join(" ")).unwrap();
    }
    out
}

fn verb_decompose(ctx: &Ctx, fraction: &str, which: &str) -> Result<Outcome> {
    let (m, n) = parse_pair(fraction)?;
    let tris = match which {
        "complement" => toric::decompose_complement(m, n)?,
        _ => toric::decompose_ellipsoid(m, n)?,
    };
    let svg_note = ctx.emit_svg(&toric::render_svg(&RenderObject::Triangles(&tris)))?;
    if ctx.json {
        let mut body = json!({
            "pair": [m, n],
            "which": which,
            "tiles": triangles_json(&tris),
        });
        if let Some(path) = &ctx.svg {
            body["svg"] = json!(path.display().to_string());
        }
        return Ok(Outcome::Done(doc("decompose", body)));
    }
    let mut out = triangles_text(&tris);
    if let Some(note) = svg_note {
        out.push_str(&note);
    }
    Ok(Outcome::Done(out))
}

fn verb_pack(ctx: &Ctx, k: u64) -> Result<Outcome> {
    let maps = toric::pack_unit_triangles(k);
    let svg_note = ctx.emit_svg(&toric::render_svg(&RenderObject::Packing {
        maps: &maps,
        width: k,
    }))?;
    if ctx.json {
        let ms: Vec<Value> = maps
            .iter()
            .map(|m| json!({"linear": m.linear, "translation": [m.translation.0, m.translation.1]}))
            .collect();
        let mut body = json!({"k": k, "maps": ms});
        if let Some(path) = &ctx.svg {
            body["svg"] = json!(path.display().to_string());
        }
        return Ok(Outcome::Done(doc("pack-triangles", body)));
    }
    let mut out = format!("{} unit triangles in the triangle of (1,{})\n", maps.len(), k);
    for (i, m) in maps.iter().enumerate() {
        writeln!(
            out,
            "  map {}: [[{},{}],[{},{}]] + ({},{})",
            i + 1,
            m.linear[0][0],
            m.linear[0][1],
            m.linear[1][0],
            m.linear[1][1],
            m.translation.0,
            m.translation.1
        )
        .unwrap();
    }
    if let Some(note) = svg_note {
        out.push_str(&note);
    }
    Ok(Outcome::Done(out))
}

fn verb_ehcap(ctx: &Ctx, m: u64, n: u64) -> Result<Outcome> {
    let depth = ctx.depth.unwrap_or_else(|| ehcap::default_depth(n.max(m), n.max(m)));
    let seq = ehcap::eh_sequence(m, n, depth)?;
    if ctx.json {
        return Ok(Outcome::Done(doc(
            "ehcap",
            json!({"pair": [m, n], "depth": depth, "terms": seq}),
        )));
    }
    let terms: Vec<String> = seq.iter().map(u64::to_string).collect();
    Ok(Outcome::Done(format!("{}\n", terms.join(" "))))
}

fn verb_ehcmp(ctx: &Ctx, a: (u64, u64), b: (u64, u64)) -> Result<Outcome> {
    let depth = ctx
        .depth
        .unwrap_or_else(|| ehcap::default_depth(a.0.max(a.1), b.0.max(b.1)));
    let dominated = ehcap::eh_dominates(a.0, a.1, b.0, b.1, depth)?;
    // locate the first failing term for the negative answer
    let failure = if dominated {
        None
    } else {
        let sa = ehcap::eh_sequence(a.0, a.1, depth)?;
        let sb = ehcap::eh_sequence(b.0, b.1, depth)?;
        sa.iter()
            .zip(&sb)
            .position(|(x, y)| x > y)
            .map(|i| (i + 1, sa[i], sb[i]))
    };
    if ctx.json {
        return Ok(Outcome::Done(doc(
            "ehcmp",
            json!({
                "left": [a.0, a.1],
                "right": [b.0, b.1],
                "depth": depth,
                "dominated": dominated,
                "first_violation": failure.map(|(i, x, y)| json!({"term": i, "left": x, "right": y})),
            }),
        )));
    }
    let line = match failure {
        None => format!(
            "N({},{}) <= N({},{}): yes (verified to depth {})\n",
            a.0, a.1, b.0, b.1, depth
        ),
        Some((i, x, y)) => format!(
            "N({},{}) <= N({},{}): no (term {}: {} > {}; verified to depth {})\n",
            a.0, a.1, b.0, b.1, i, x, y, depth
        ),
    };
    Ok(Outcome::Done(line))
}

fn cone_check_json(c: &ConeCheck) -> Value {
    match c {
        ConeCheck::Feasible => json!({"kind": "feasible"}),
        ConeCheck::FeasibleUpToDegree(d) => json!({"kind": "feasible", "qualified_degree": d}),
        ConeCheck::Infeasible(cert) => {
            json!({"kind": "infeasible", "certificate": certificate_json(cert)})
        }
        ConeCheck::AtOrAboveSup { binding } => json!({
            "kind": "at-or-above-sup",
            "binding": binding.as_ref().map(|b| b.to_string()),
        }),
        ConeCheck::Undetermined {
            lower,
            upper,
            degree_bound,
        } => json!({
            "kind": "undetermined",
            "lower": exact_value_json(lower),
            "upper": exact_value_json(upper),
            "degree_bound": degree_bound,
        }),
    }
}

fn verb_report(
    ctx: &Ctx,
    src: &[String; 2],
    tgt: &[String; 2],
    lambda_sq: Option<&str>,
) -> Result<Outcome> {
    let s = parse_pair_ints(src)?;
    let t = parse_pair_ints(tgt)?;
    let lsq = match lambda_sq {
        Some(raw) => {
            let v = parse_rational(raw)?;
            if !v.is_positive() {
                return crate::domain_err(format!("--lambda-sq must be positive, got {raw}"));
            }
            v
        }
        None => {
            let l = ctx.lambda()?;
            &l * &l
        }
    };
    let r = ehcap::obstruction_report(s, t, lsq, ctx.depth, &ctx.opts)?;
    if ctx.json {
        return Ok(Outcome::Done(doc(
            "report",
            json!({
                "source": [r.source.0, r.source.1],
                "target": [r.target.0, r.target.1],
                "lambda_sq": rstr(&r.lambda_sq),
                "volume_ratio": rstr(&r.volume_ratio),
                "volume_ok": r.volume_ok,
                "eh_ok": r.eh_ok,
                "eh_depth": r.eh_depth,
                "cone": cone_check_json(&r.cone),
                "discrepancy": r.discrepancy,
            }),
        )));
    }
    Ok(Outcome::Done(format!("{r}")))
}

/// two positional integers (axes of an integral ellipsoid)
fn parse_pair_ints(raw: &[String; 2]) -> Result<(u64, u64)> {
    let parse = |s: &String| -> Result<u64> {
        s.parse::<u64>()
            .map_err(|_| crate::Error::Parse(s.clone()))
    };
    Ok((parse(&raw[0])?, parse(&raw[1])?))
}

/// "d;m1,m2,..." with rational entries; "d" alone is the unblown plane.
fn parse_class(s: &str) -> Result<HClass> {
    let (d_part, m_part) = match s.split_once(';') {
        Some((d, m)) => (d, Some(m)),
        None => (s, None),
    };
    let d = parse_rational(d_part.trim())?;
    let ms: Vec<Rational> = match m_part {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(parse_rational)
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    Ok(HClass::new(d, ms))
}

fn verb_cone_check(ctx: &Ctx, class: &str) -> Result<Outcome> {
    let a = parse_class(class)?;
    let verdict = cone::in_cone(&a, &ctx.opts)?;
    if ctx.json {
        return Ok(Outcome::Done(doc(
            "cone-check",
            json!({"class": a.to_string(), "verdict": verdict_json(&verdict)}),
        )));
    }
    Ok(Outcome::Done(format!("{verdict}\n")))
}

fn verb_enumerate(ctx: &Ctx, k: usize) -> Result<Outcome> {
    let classes = cone::exceptional_classes(k, ctx.opts.degree_bound, ctx.opts.cache_dir.as_deref())?;
    if ctx.json {
        let body = json!({
            "k": k,
            "degree_bound": if k > cone::MAX_FINITE_RANK { Some(ctx.opts.degree_bound) } else { None },
            "classes": classes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "count": classes.len(),
        });
        return Ok(Outcome::Done(doc("enumerate", body)));
    }
    let mut out = String::new();
    for c in &classes {
        writeln!(out, "{c}").unwrap();
    }
    if k > cone::MAX_FINITE_RANK {
        writeln!(
            out,
            "count: {} (degree <= {})",
            classes.len(),
            ctx.opts.degree_bound
        )
        .unwrap();
    } else {
        writeln!(out, "count: {}", classes.len()).unwrap();
    }
    Ok(Outcome::Done(out))
}

fn verb_render(ctx: &Ctx, kind: &str, arg: &str) -> Result<Outcome> {
    let svg = match kind {
        "chain" => {
            let (m, n) = parse_pair(arg)?;
            let chain = toric::blowup_chain(m, n)?;
            toric::render_svg(&RenderObject::Chain(&chain))
        }
        "ellipsoid" | "complement" => {
            let (m, n) = parse_pair(arg)?;
            let tris = if kind == "complement" {
                toric::decompose_complement(m, n)?
            } else {
                toric::decompose_ellipsoid(m, n)?
            };
            toric::render_svg(&RenderObject::Triangles(&tris))
        }
        _ => {
            let k: u64 = arg
                .parse()
                .map_err(|_| crate::Error::Parse(arg.to_string()))?;
            let maps = toric::pack_unit_triangles(k);
            toric::render_svg(&RenderObject::Packing { maps: &maps, width: k })
        }
    };
    match ctx.emit_svg(&svg)? {
        Some(note) => Ok(Outcome::Done(note)),
        None => Ok(Outcome::Done(svg)),
    }
}

/// Accumulates expected-vs-computed lines for a reproduce target.
struct Repro {
    out: String,
    pass: usize,
    total: usize,
}

impl Repro {
    fn new(header: &str) -> Self {
        Repro {
            out: format!("{header}\n"),
            pass: 0,
            total: 0,
        }
    }

    fn check(&mut self, what: &str, expected: &str, got: &str) {
        self.total += 1;
        let tag = if expected == got {
            self.pass += 1;
            "match"
        } else {
            "MISMATCH"
        };
        writeln!(self.out, "  {what}: expected {expected}, got {got} -> {tag}").unwrap();
    }

    fn finish(mut self) -> Outcome {
        writeln!(self.out, "{}/{} match", self.pass, self.total).unwrap();
        if self.pass == self.total {
            Outcome::Done(self.out)
        } else {
            Outcome::Mismatch(self.out)
        }
    }
}

fn verb_reproduce(ctx: &Ctx, target: &str) -> Result<Outcome> {
    match target {
        "cor1.2" => repro_fill_table(),
        "prop1.6" => repro_sup_fixtures(ctx),
        "eq3.7" => repro_label_vectors(),
        "eq3.10" => repro_reduction_identity(),
        _ => repro_tilings(),
    }
}

fn repro_fill_table() -> Result<Outcome> {
    let frozen = [
        "1", "1/2", "3/4", "1", "4/5", "24/25", "63/64", "288/289",
    ];
    let mut r = Repro::new("ball-packing constants v(1)..v(8)");
    for (k, v) in engine::fill_table() {
        r.check(
            &format!("v({k})"),
            frozen[(k - 1) as usize],
            &format_rational(&v),
        );
    }
    Ok(r.finish())
}

fn repro_sup_fixtures(ctx: &Ctx) -> Result<Outcome> {
    let mut r = Repro::new("embedding suprema into the open E(2,3)");
    let s14 = engine::lambda_sup((1, 4), (2, 3), &ctx.opts)?;
    r.check("sup for E(1,4)", "6/5", &s14.to_string());
    let s15 = engine::lambda_sup((1, 5), (2, 3), &ctx.opts)?;
    r.check("sup for E(1,5)", "12/11", &s15.to_string());
    Ok(r.finish())
}

fn repro_label_vectors() -> Result<Outcome> {
    let mut r = Repro::new("label vectors along the descent to (10,17)");
    let fixtures = [
        ((3u64, 5u64), "5L-2E1-2E2-E3-E4"),
        ((7, 12), "12L-5E1-5E2-2E3-2E4-E5-E6"),
        ((10, 17), "17L-7E1-7E2-3E3-3E4-E5-E6-E7"),
    ];
    for ((m, n), expected) in fixtures {
        let v = weights::inner_vector(m, n)?;
        r.check(&format!("({m},{n})"), expected, &v.as_hclass().to_string());
    }
    Ok(r.finish())
}

fn repro_reduction_identity() -> Result<Outcome> {
    let mut r = Repro::new("packing class of lambda E(1,4) -> open E(2,3) at lambda = 6/5");
    let pair = EllipsoidPair::new((int(1), int(4)), (int(2), int(3)), rat(6, 5))?;
    let p = engine::reduce_to_packing(&pair)?;
    let ws: Vec<String> = p.weights.iter().map(format_rational).collect();
    r.check(
        "weights",
        "1/3 1/3 1/3 2/5 2/5 2/5 2/5",
        &ws.join(" "),
    );
    r.check(
        "slots (target inner + source outer)",
        "3 + 4",
        &format!("{} + {}", p.inner_count, p.k - p.inner_count),
    );
    // the class the weights define: n'(L - sum w_i E_i)
    let n_t = int(3);
    let rebuilt = HClass::new(
        n_t.clone(),
        p.weights.iter().map(|w| w * &n_t).collect(),
    );
    r.check(
        "ambient class n'(L - sum w_i E_i)",
        &rebuilt.to_string(),
        &p.ambient.to_string(),
    );
    Ok(r.finish())
}

fn repro_tilings() -> Result<Outcome> {
    let mut r = Repro::new("tile sizes of the standard triangle decompositions");
    let fixtures = [((1u64, 3u64), "1 1 1"), ((2, 5), "2 2 1 1"), ((3, 8), "3 3 2 1 1")];
    for ((m, n), expected) in fixtures {
        let tris = toric::decompose_ellipsoid(m, n)?;
        let mut sizes = tris.iter().map(|t| t.size.clone()).collect::<Vec<_>>();
        sizes.sort_by(|a, b| b.cmp(a));
        let got: Vec<String> = sizes.iter().map(format_rational).collect();
        r.check(&format!("({m},{n})"), expected, &got.join(" "));
    }
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        match Cli::try_parse_from(args.iter().map(|s| s.to_string())) {
            Ok(cli) => match execute(cli) {
                Ok(Outcome::Done(s)) => (0, s),
                Ok(Outcome::Mismatch(s)) => (1, s),
                Err(e) => (2, format!("error: {e}\n")),
            },
            Err(e) => {
                let code = match e.kind() {
                    ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                    _ => 2,
                };
                (code, e.to_string())
            }
        }
    }

    fn json_of(args: &[&str]) -> Value {
        let (code, out) = run_str(args);
        assert_eq!(code, 0, "exit 0 expected for {args:?}, got output {out}");
        serde_json::from_str(&out).expect("valid json")
    }

    #[test]
    fn sup_prints_the_exact_value() {
        assert_eq!(run_str(&["sup", "1", "4", "into", "2", "3"]), (0, "6/5\n".into()));
        assert_eq!(run_str(&["sup", "1", "5", "into", "2", "3"]), (0, "12/11\n".into()));
    }

    #[test]
    fn weights_output_is_frozen() {
        let (code, out) = run_str(&["weights", "7/12"]);
        assert_eq!(code, 0);
        assert_eq!(out, "7 5 2 2 1 1 | cf multiplicities: 1 1 2 2\n");
    }

    #[test]
    fn fill_table_lists_all_eight_constants() {
        let (code, out) = run_str(&["fill-table"]);
        assert_eq!(code, 0);
        for v in ["1/2", "3/4", "4/5", "24/25", "63/64", "288/289"] {
            assert!(out.contains(v), "missing {v} in {out}");
        }
        assert_eq!(out.lines().count(), 2);
    }

    #[test]
    fn decide_exits_zero_on_both_verdicts() {
        let (code, out) = run_str(&["decide", "1", "4", "into", "2", "3", "--lambda", "99/100"]);
        assert_eq!((code, out.as_str()), (0, "yes\n"));
        let (code, out) = run_str(&["decide", "1", "4", "into", "2", "3", "--lambda", "6/5"]);
        assert_eq!(code, 0, "infeasible is still a computed result");
        assert!(out.starts_with("no; "), "expected a certificate, got {out}");
    }

    #[test]
    fn decide_json_carries_schema_and_certificate() {
        let v = json_of(&["decide", "1", "1", "into", "1", "1", "--lambda", "1", "--json"]);
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["command"], "decide");
        assert_eq!(v["verdict"]["feasible"], false);
        assert_eq!(v["verdict"]["certificate"]["kind"], "volume");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["sup", "1", "4", "between", "2", "3"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["weights", "x/y"]).0, 2);
        assert_eq!(run_str(&["chain", "0/3"]).0, 2);
        assert_eq!(run_str(&["decide", "1", "4", "into", "2", "3", "--lambda", "-1"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn capacity_prints_the_frozen_value() {
        assert_eq!(run_str(&["capacity", "1", "5"]), (0, "5/2\n".into()));
        assert_eq!(run_str(&["capacity", "2", "3"]), (0, "3\n".into()));
    }

    #[test]
    fn ehcap_matches_the_frozen_prefix() {
        let (code, out) = run_str(&["ehcap", "1", "4", "--depth", "11"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1 2 3 4 4 5 6 7 8 8 9\n");
    }

    #[test]
    fn ehcmp_labels_the_checked_depth() {
        let (code, out) = run_str(&["ehcmp", "1", "4", "vs", "2", "2", "--depth", "100"]);
        assert_eq!(code, 0);
        assert!(out.contains("yes (verified to depth 100)"), "{out}");
        let (code, out) = run_str(&["ehcmp", "2", "2", "vs", "1", "4", "--depth", "10"]);
        assert_eq!(code, 0);
        assert!(out.contains("no (term 1: 2 > 1"), "{out}");
    }

    #[test]
    fn inner_prints_the_class() {
        let (code, out) = run_str(&["inner", "7/12"]);
        assert_eq!(code, 0);
        assert_eq!(out, "12L-5E1-5E2-2E3-2E4-E5-E6\n");
    }

    #[test]
    fn cone_check_parses_semicolon_classes() {
        let (code, out) = run_str(&["cone-check", "3;1,1,1,1,1,1,1"]);
        assert_eq!((code, out.as_str()), (0, "yes\n"));
        let (code, out) = run_str(&["cone-check", "1;1,1,1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("no; "), "{out}");
    }

    #[test]
    fn enumerate_counts_the_orbit() {
        let (code, out) = run_str(&["enumerate", "3"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("count: 6\n"), "{out}");
        assert!(out.contains("L-E1-E2"), "{out}");
    }

    #[test]
    fn report_json_flags_the_discrepancy() {
        let v = json_of(&[
            "report", "1", "5", "into", "1", "1", "--lambda-sq", "20/121", "--json",
        ]);
        assert_eq!(v["discrepancy"], true);
        assert_eq!(v["volume_ok"], true);
        assert_eq!(v["eh_ok"], true);
        assert_eq!(v["cone"]["kind"], "at-or-above-sup");
    }

    #[test]
    fn chain_dumps_edges_and_svg() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("chain.svg");
        let (code, out) = run_str(&["chain", "2/3", "--svg", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.contains("conormal="), "{out}");
        let svg = std::fs::read_to_string(&path).unwrap();
        assert!(svg.starts_with("<svg"), "svg file written");
    }

    #[test]
    fn chain_sample_reports_admissible() {
        let (code, out) = run_str(&["chain", "3/5", "--sample", "1/40"]);
        assert_eq!(code, 0);
        assert!(out.contains("admissible: yes"), "{out}");
    }

    #[test]
    fn decompose_and_pack_render() {
        let (code, out) = run_str(&["decompose", "2/5"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("4 tiles\n"), "{out}");
        let (code, out) = run_str(&["pack-triangles", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("map 3"), "{out}");
        let (code, out) = run_str(&["render", "pack", "3"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("<svg"), "{out}");
    }

    #[test]
    fn decompose_json_lists_sizes() {
        let v = json_of(&["decompose", "3/8", "--json"]);
        let tiles = v["tiles"].as_array().unwrap();
        assert_eq!(tiles.len(), 5);
        let mut sizes: Vec<String> = tiles
            .iter()
            .map(|t| t["size"].as_str().unwrap().to_string())
            .collect();
        sizes.sort();
        assert_eq!(sizes, ["1", "1", "2", "3", "3"]);
    }

    #[test]
    fn reproduce_targets_all_match() {
        for target in ["cor1.2", "prop1.6", "eq3.7", "eq3.10", "fig8"] {
            let (code, out) = run_str(&["reproduce", target]);
            assert_eq!(code, 0, "{target} diverged:\n{out}");
            assert!(!out.contains("MISMATCH"), "{target}:\n{out}");
            let last = out.lines().last().unwrap();
            assert!(last.ends_with("match"), "{target}: {last}");
        }
        assert_eq!(run_str(&["reproduce", "everything"]).0, 2);
    }

    #[test]
    fn sup_json_reports_brackets_for_many_balls() {
        let v = json_of(&["sup", "1", "9", "into", "1", "1", "--json"]);
        assert_eq!(v["sup"]["kind"], "bracket");
        assert_eq!(v["sup"]["upper"]["value"], "1/3");
    }
}
