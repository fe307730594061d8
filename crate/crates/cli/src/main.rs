mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use simplest_cubic::apps::{pythagoras, uqf_bounds};
use simplest_cubic::classify::{classify, table1};
use simplest_cubic::codifferent::Codifferent;
use simplest_cubic::indecomposables::{
    first_par_indec_table, generate_theorem_list, norm_extremes, verify_a41, verify_classification, Oracle,
    DEFAULT_MAX_A_ORACLE,
};
use simplest_cubic::lattice::all_candidates;
use simplest_cubic::{make_context, Context, Error, Rat};

use output::{render, Format, Rendered};

#[derive(Parser, Debug)]
#[command(name = "scf", version, about = "Indecomposables, codifferents and integral bases of simplest cubic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, env = "SC_THREADS", default_value_t = 0)]
    threads: usize,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Single {
    /// The parameter a of x³ − ax² − (a+3)x − 1.
    #[arg(long, allow_hyphen_values = true)]
    a: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyFilter {
    All,
    P3,
    Bp,
    Monogenic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discriminant, conductor, module index, monogenity and integral basis.
    Classify {
        /// A value, a comma list or an inclusive range such as 21..100.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum, default_value = "all")]
        family: FamilyFilter,
    },
    /// Integral basis, Gram matrix of the trace form and the dual basis.
    Basis(Single),
    /// Lattice points of both parallelepipeds.
    Candidates(Single),
    /// Indecomposables up to totally positive units, with minimal traces.
    Indecomposables {
        #[command(flatten)]
        a: Single,
        #[arg(long)]
        certify: Option<bool>,
        #[arg(long, default_value_t = DEFAULT_MAX_A_ORACLE)]
        max_a_oracle: i64,
    },
    /// Checks the closed-form list against the brute-force oracle.
    Verify {
        #[command(flatten)]
        a: Single,
        #[arg(long, default_value_t = DEFAULT_MAX_A_ORACLE)]
        max_a_oracle: i64,
    },
    /// Minimal trace of an element given in integral-basis coordinates.
    Mintrace {
        #[command(flatten)]
        a: Single,
        /// Coordinates b1,b2,b3 over (g1, g2, g3).
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
        elem: Vec<i64>,
        #[arg(long)]
        certify: Option<bool>,
    },
    /// Smallest and largest norms of indecomposables.
    Norms(Single),
    /// Minimal number of squares for the test element γ.
    Pythagoras(Single),
    /// Rank bounds for universal quadratic forms.
    Uqf(Single),
    /// Residues a mod p² admitting the basis B_p(k,l).
    Table1 {
        #[arg(long, default_value_t = 103)]
        pmax: i64,
    },
    /// Indecomposables of the first parallelepiped for p ∈ {7, 13, 19, 31}.
    TableFirstpar {
        #[arg(long)]
        p: Vec<i64>,
    },
    /// The complete list for a = 41.
    A41 {
        #[arg(long)]
        certify: Option<bool>,
    },
}

/// Certification is on by default while the certified search stays fast.
const CERTIFY_DEFAULT_MAX_A: i64 = 60;

enum Failure {
    Usage(String, Option<Value>),
    Mismatch(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string(), None)
    }
}

type Outcome = Result<Rendered, Failure>;

fn parse_a_list(s: &str) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::Usage(format!("cannot parse a = {s:?}; expected N, N,M,… or LO..HI"), None);
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn context(a: i64) -> Result<Context, Failure> {
    make_context(a).map_err(|e| verdict(a, e))
}

/// A library error together with the classification of a, when it exists.
fn verdict(a: i64, e: Error) -> Failure {
    Failure::Usage(e.to_string(), classify(a).ok().and_then(|c| serde_json::to_value(c).ok()))
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn progress(msg: &str) {
    eprintln!("{msg}");
}

fn rat(q: &Rat<i128>) -> String {
    q.to_string()
}

fn cmd_classify(a: &str, family: FamilyFilter) -> Outcome {
    let mut rows = Vec::new();
    for a in parse_a_list(a)? {
        let c = classify(a)?;
        let keep = match family {
            FamilyFilter::All => true,
            FamilyFilter::P3 => c.in_p3_family,
            FamilyFilter::Bp => c.basis.kind == simplest_cubic::BasisKind::Bp,
            FamilyFilter::Monogenic => c.monogenic,
        };
        if keep {
            rows.push(json!({
                "a": c.a,
                "delta_disc": c.delta_disc,
                "conductor": c.conductor,
                "module_index": c.module_index,
                "monogenic": c.monogenic,
                "exceptional": c.in_exceptional_list,
                "p3_family": c.in_p3_family,
                "basis": c.basis.label(),
                "p": c.basis.p,
                "k": c.basis.k,
                "l": c.basis.l,
            }));
        }
    }
    if rows.len() == 1 {
        return Ok(Rendered::same(rows.remove(0)));
    }
    Ok(Rendered::same(Value::Array(rows)))
}

fn cmd_basis(a: i64) -> Outcome {
    let ctx = context(a)?;
    let cod = Codifferent::new(&ctx).map_err(|e| verdict(a, e))?;
    let rows: Vec<Value> = (0..3)
        .map(|i| {
            json!({
                "i": i + 1,
                "g": to_json(&cod.g[i]),
                "phi": to_json(&cod.phi[i]),
                "gram_row": cod.gram[i].iter().map(rat).collect::<Vec<_>>(),
                "gram_inverse_row": cod.gram_inverse[i].iter().map(rat).collect::<Vec<_>>(),
            })
        })
        .collect();
    let json = json!({
        "a": a,
        "basis": ctx.classification().basis.label(),
        "duality_holds": cod.duality_holds(&ctx),
        "closed_form_inverse": ctx.classification().in_p3_family.then(|| cod.matches_closed_form(&ctx)),
        "rows": rows,
    });
    Ok(Rendered { table: Value::Array(rows), json })
}

fn cmd_candidates(a: i64) -> Outcome {
    let ctx = context(a)?;
    let cands = all_candidates(&ctx).map_err(|e| verdict(a, e))?;
    let rows: Vec<Value> = cands
        .iter()
        .map(|c| {
            json!({
                "parallelepiped": to_json(&c.parallelepiped),
                "t3_num": c.t3_num,
                "s": c.index.map(|i| i.s),
                "v": c.index.map(|i| i.v),
                "r": c.index.map(|i| i.r),
                "region": c.region.to_string(),
                "g1": c.integral[0] as i64,
                "g2": c.integral[1] as i64,
                "g3": c.integral[2] as i64,
            })
        })
        .collect();
    Ok(Rendered::same(Value::Array(rows)))
}

fn certify_for(a: i64, flag: Option<bool>) -> bool {
    flag.unwrap_or(a <= CERTIFY_DEFAULT_MAX_A)
}

fn cmd_indecomposables(a: i64, certify: Option<bool>, max_a: i64) -> Outcome {
    let ctx = context(a)?;
    let certify = certify_for(a, certify);
    let cod = Codifferent::new(&ctx).map_err(|e| verdict(a, e))?;
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    if ctx.classification().in_p3_family {
        for r in generate_theorem_list(&ctx)? {
            let computed = if certify { Some(cod.minimal_trace(&ctx, &r.elem, true)?.value) } else { None };
            if computed.is_some_and(|t| t != r.min_trace) {
                bad.push(to_json(&r));
            }
            rows.push(json!({
                "family": r.family.to_string(),
                "v": r.v,
                "r": r.r,
                "g1": r.integral[0] as i64,
                "g2": r.integral[1] as i64,
                "g3": r.integral[2] as i64,
                "min_trace": r.min_trace,
                "certified_min_trace": computed,
                "norm": r.norm_abs as i64,
            }));
        }
    } else {
        if a > max_a {
            return Err(Failure::Usage(format!("a = {a} exceeds --max-a-oracle {max_a}"), None));
        }
        eprintln!("a = {a} is outside the p = 3 family; running the oracle over all lattice candidates");
        let oracle = Oracle::new(&ctx)?;
        let mut found = vec![simplest_cubic::Elem::one()];
        for c in all_candidates(&ctx)? {
            if oracle.is_indecomposable(&ctx, &c.elem)? {
                found.push(c.elem);
            }
        }
        let basis = ctx.classification().basis;
        for x in found {
            let b = basis.to_integral(&x).ok_or(Error::NotIntegral)?;
            let t = cod.minimal_trace(&ctx, &x, certify)?;
            rows.push(json!({
                "family": "extern",
                "g1": b[0] as i64,
                "g2": b[1] as i64,
                "g3": b[2] as i64,
                "min_trace": t.value,
                "certified": t.certified,
                "norm": ctx.norm(&x).to_integer().abs() as i64,
            }));
        }
    }
    if !bad.is_empty() {
        return Err(Failure::Mismatch(json!({"a": a, "kind": "min_trace", "records": bad})));
    }
    Ok(Rendered::same(Value::Array(rows)))
}

fn cmd_verify(a: i64, max_a: i64) -> Outcome {
    let ctx = context(a)?;
    let rep = verify_classification(&ctx, max_a, Some(&progress)).map_err(|e| verdict(a, e))?;
    if !rep.ok() {
        return Err(Failure::Mismatch(to_json(&rep.mismatches)));
    }
    let summary = json!({
        "a": a,
        "summary": format!("{} indecomposables verified", rep.records),
        "expected_count": rep.expected_count,
        "candidates": rep.candidates,
        "oracle_indecomposable": rep.oracle_indecomposable,
        "oracle_decomposable": rep.oracle_decomposable,
        "associated_duplicates": rep.associated_duplicates,
        "listed_witnesses_checked": rep.listed_witnesses_checked,
    });
    let mut json = to_json(&rep);
    json["summary"] = summary["summary"].clone();
    Ok(Rendered { json, table: summary })
}

fn cmd_mintrace(a: i64, elem: &[i64], certify: Option<bool>) -> Outcome {
    if elem.len() != 3 {
        return Err(Failure::Usage(format!("--elem needs 3 coordinates, got {}", elem.len()), None));
    }
    let ctx = context(a)?;
    let cod = Codifferent::new(&ctx).map_err(|e| verdict(a, e))?;
    let b = [elem[0] as i128, elem[1] as i128, elem[2] as i128];
    let x = ctx.classification().basis.from_integral(&b);
    let t = cod.minimal_trace(&ctx, &x, certify_for(a, certify))?;
    Ok(Rendered::same(json!({
        "a": a,
        "element": elem,
        "min_trace": t.value,
        "certified": t.certified,
        "witness_phi_coords": t.witness.dual_coords.map(|u| u as i64),
    })))
}

fn cmd_norms(a: i64) -> Outcome {
    let ctx = context(a)?;
    let n = norm_extremes(&ctx).map_err(|e| verdict(a, e))?;
    if !n.matches {
        return Err(Failure::Mismatch(to_json(&n)));
    }
    Ok(Rendered::same(to_json(&n)))
}

fn cmd_pythagoras(a: i64) -> Outcome {
    let ctx = context(a)?;
    let rep = pythagoras(&ctx).map_err(|e| verdict(a, e))?;
    let mut table = to_json(&rep);
    if let Value::Object(m) = &mut table {
        m.remove("decomposition");
    }
    Ok(Rendered { json: to_json(&rep), table })
}

fn cmd_uqf(a: i64) -> Outcome {
    let ctx = context(a)?;
    let b = uqf_bounds(&ctx).map_err(|e| verdict(a, e))?;
    let mut v = to_json(&b);
    v["nonclassical_lower"] = match b.nonclassical_lower {
        Some(s) => Value::String(format!("sqrt({})/{}", s.radicand, s.denominator)),
        None => Value::Null,
    };
    Ok(Rendered::same(v))
}

fn cmd_table1(pmax: i64) -> Outcome {
    Ok(Rendered::same(to_json(&table1(pmax)?)))
}

fn cmd_table_firstpar(ps: &[i64]) -> Outcome {
    let ps = if ps.is_empty() { vec![7, 13, 19, 31] } else { ps.to_vec() };
    let mut rows = Vec::new();
    for p in ps {
        eprintln!("p = {p}");
        rows.extend(first_par_indec_table(p)?);
    }
    let json = to_json(&rows);
    if rows.iter().any(|r| !r.matches) {
        return Err(Failure::Mismatch(json));
    }
    let table = Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "p": r.p,
                    "class": r.class,
                    "a": r.a,
                    "k": r.k,
                    "l": r.l,
                    "indecomposables": if r.indecomposables.is_empty() { "none".to_string() } else { to_json(&r.indecomposables).to_string() },
                    "min_traces": to_json(&r.min_traces).to_string(),
                    "matches": r.matches,
                })
            })
            .collect(),
    );
    Ok(Rendered { json, table })
}

fn cmd_a41(certify: Option<bool>) -> Outcome {
    let ctx = context(41)?;
    let rep = verify_a41(&ctx, certify_for(41, certify), Some(&progress))?;
    if !rep.ok() {
        return Err(Failure::Mismatch(to_json(&rep)));
    }
    Ok(Rendered { json: to_json(&rep), table: to_json(&rep.items) })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Classify { a, family } => cmd_classify(a, *family),
        Command::Basis(s) => cmd_basis(s.a),
        Command::Candidates(s) => cmd_candidates(s.a),
        Command::Indecomposables { a, certify, max_a_oracle } => cmd_indecomposables(a.a, *certify, *max_a_oracle),
        Command::Verify { a, max_a_oracle } => cmd_verify(a.a, *max_a_oracle),
        Command::Mintrace { a, elem, certify } => cmd_mintrace(a.a, elem, *certify),
        Command::Norms(s) => cmd_norms(s.a),
        Command::Pythagoras(s) => cmd_pythagoras(s.a),
        Command::Uqf(s) => cmd_uqf(s.a),
        Command::Table1 { pmax } => cmd_table1(*pmax),
        Command::TableFirstpar { p } => cmd_table_firstpar(p),
        Command::A41 { certify } => cmd_a41(*certify),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(r) => match render(&r, cli.format).map_err(|e| e.to_string()).and_then(|t| emit(&t, &cli.out).map_err(|e| e.to_string())) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg, classification)) => {
            eprintln!("error: {msg}");
            if let Some(c) = classification {
                eprintln!("{}", serde_json::to_string_pretty(&c).expect("json value"));
            }
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(report)) => {
            eprintln!("verification mismatch");
            eprintln!("{}", serde_json::to_string_pretty(&report).expect("json value"));
            ExitCode::from(2)
        }
    }
}
