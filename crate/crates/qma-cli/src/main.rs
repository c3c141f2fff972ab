//! `qma`: command-line front end for the quantized matrix algebra workbench.
//!
//! Exit codes: 0 success, 1 mathematical falsity (an identity fails, an
//! element is not central, modules are not isomorphic, ...), 2 usage error,
//! 3 rewrite step cap exceeded.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qma_core::analysis::{
    commutant, generated_algebra_dim, has_invariant_complement, indecomposability_certificate,
    invariant_closure, is_absolutely_simple, radical_of_commutant, Certificate, Subspace,
};
use qma_core::lattice::{pi_degree, pi_degree_dd, IntMatrix};
use qma_core::ncalg::{dd, dd2, parse_poly, parse_presentation, rea2, Presentation};
use qma_core::repmod::{
    build_module, find_invertible_intertwiner, parse_module_params, representation_from_json,
    representation_to_json, verify_relations, Representation,
};
use qma_core::scalar::FieldContext;
use qma_core::structure::{is_central, q_normal_profile, verify_power_identity, PowerIdentity};
use qma_core::sweep::map_with_jobs;
use qma_core::Error;

#[derive(Parser)]
#[command(name = "qma", version, about = "Exact workbench for rank-2 quantized matrix algebras at a root of unity")]
struct Cli {
    /// Builtin presentation (dd2, rea2, dd3, dd4) or a presentation file
    #[arg(long, global = true, default_value = "dd2")]
    algebra: String,
    /// Scalar backend
    #[arg(long, global = true, value_enum, default_value_t = FieldKind::Cyclotomic)]
    field: FieldKind,
    /// Order of the root of unity
    #[arg(long, global = true)]
    m: Option<u64>,
    /// Prime modulus (prime backend only; requires m | p-1)
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Seed for any randomized search (recorded; current searches are
    /// deterministic)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweep-style commands
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum FieldKind {
    Cyclotomic,
    Prime,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite an expression to its PBW normal form
    Normalize(ExprArgs),
    /// Decide whether an expression is central
    Central(ExprArgs),
    /// Compute the q-normal commutation profile of an expression
    Qnormal(ExprArgs),
    /// Verify the power commutation identities up to a given exponent
    Identity {
        /// Identity family
        #[arg(long)]
        family: String,
        /// Clause (i, ii, iii, iv); all clauses of the family when omitted
        #[arg(long)]
        index: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_r: u64,
    },
    /// Check local confluence of the presentation's rewrite rules
    Confluence,
    /// PI degree of Mat_n(q) or of a quantum affine space matrix
    Pideg {
        /// Size n for the Dipper-Donkin algebra Mat_n(q)
        #[arg(long = "dd-n", conflicts_with = "matrix")]
        dd_n: Option<usize>,
        /// File with an antisymmetric integer exponent matrix
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Build a module from a parameter file and export it
    ModuleBuild {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check the defining relations on an exported module
    ModuleVerify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Simplicity / semisimplicity / indecomposability report
    ModuleAnalyze {
        #[arg(long = "in", conflicts_with = "params")]
        input: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Decide whether two exported modules are isomorphic
    ModuleIso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::StepCapExceeded(_) => 3,
        Error::NotQNormal(_) => 1,
        _ => 2,
    }
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

struct Reporter {
    json: bool,
    payload: Value,
}

impl Reporter {
    fn new(cli: &Cli, command: &str, inputs: Value) -> Self {
        let mut inputs = inputs;
        if let Value::Object(ref mut o) = inputs {
            o.insert("seed".into(), json!(cli.seed));
        }
        Reporter {
            json: cli.json,
            payload: json!({ "command": command, "inputs": inputs }),
        }
    }

    fn line(&self, text: &str) {
        if !self.json {
            println!("{text}");
        }
    }

    fn finish(mut self, result: Value, witness: Option<Value>) {
        if self.json {
            self.payload["result"] = result;
            if let Some(w) = witness {
                self.payload["witness"] = w;
            }
            println!("{}", self.payload);
        }
    }
}

fn make_field(cli: &Cli) -> Result<FieldContext, Error> {
    let m = cli
        .m
        .ok_or_else(|| Error::BadParams("--m is required".into()))?;
    match cli.field {
        FieldKind::Cyclotomic => FieldContext::cyclotomic(m),
        FieldKind::Prime => {
            let p = cli
                .p
                .ok_or_else(|| Error::BadParams("--p is required with --field prime".into()))?;
            FieldContext::prime(m, p)
        }
    }
}

fn make_presentation(cli: &Cli) -> Result<Presentation, Error> {
    let mut pres = match cli.algebra.as_str() {
        "dd2" => dd2(make_field(cli)?)?,
        "rea2" => rea2(make_field(cli)?)?,
        "dd3" => dd(3, make_field(cli)?)?,
        "dd4" => dd(4, make_field(cli)?)?,
        path => parse_presentation(&read_file(&PathBuf::from(path))?)?,
    };
    if let Ok(cap) = std::env::var("QMA_STEP_CAP") {
        pres.step_cap = cap
            .parse()
            .map_err(|_| Error::BadParams(format!("bad QMA_STEP_CAP `{cap}`")))?;
    }
    Ok(pres)
}

fn field_for_module(cli: &Cli, m: u64) -> Result<FieldContext, Error> {
    if let Some(cm) = cli.m {
        if cm != m {
            return Err(Error::BadParams(format!(
                "--m {cm} conflicts with the module file's m={m}"
            )));
        }
    }
    match cli.field {
        FieldKind::Cyclotomic => FieldContext::cyclotomic(m),
        FieldKind::Prime => {
            let p = cli
                .p
                .ok_or_else(|| Error::BadParams("--p is required with --field prime".into()))?;
            FieldContext::prime(m, p)
        }
    }
}

fn load_module(cli: &Cli, input: Option<&PathBuf>, params: Option<&PathBuf>) -> Result<Representation, Error> {
    match (input, params) {
        (Some(path), _) => representation_from_json(&read_file(path)?),
        (None, Some(path)) => {
            let mp = parse_module_params(&read_file(path)?)?;
            build_module(field_for_module(cli, mp.m)?, &mp)
        }
        (None, None) => Err(Error::BadParams("one of --in / --params is required".into())),
    }
}

/// Semisimplicity report: `Some(true)` when simple, `Some(false)` when an
/// exhibited invariant subspace does not split, `None` when the basis-vector
/// closure probe is inconclusive.
fn semisimple_probe(r: &Representation) -> (Option<bool>, Option<Subspace>) {
    let ctx = r.field();
    if is_absolutely_simple(r) {
        return (Some(true), None);
    }
    let mut seen: Vec<Subspace> = Vec::new();
    for i in 0..r.dim {
        let mut v = vec![ctx.zero(); r.dim];
        v[i] = ctx.one();
        let Ok(w) = invariant_closure(r, &[v]) else {
            continue;
        };
        if w.dim() == 0 || w.dim() == r.dim || seen.contains(&w) {
            continue;
        }
        seen.push(w);
    }
    for w in &seen {
        if has_invariant_complement(r, w) == Ok(false) {
            return (Some(false), Some(w.clone()));
        }
    }
    (None, None)
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.cmd {
        Cmd::Normalize(e) | Cmd::Central(e) | Cmd::Qnormal(e) => run_expr(cli, e),
        Cmd::Identity {
            family,
            index,
            max_r,
        } => {
            let ids = match index {
                Some(ix) => vec![PowerIdentity::parse(family, ix)?],
                None => PowerIdentity::indices_for(family)?,
            };
            let pres = make_presentation(cli)?;
            let mut cases = Vec::new();
            for &id in &ids {
                for r in 1..=*max_r {
                    cases.push((id, r));
                }
            }
            let outcomes = map_with_jobs(&cases, cli.jobs, |&(id, r)| {
                verify_power_identity(id, r, &pres)
            });
            let rep = Reporter::new(
                cli,
                "identity",
                json!({ "algebra": cli.algebra, "m": cli.m, "family": family,
                        "index": index, "max_r": max_r }),
            );
            let mut all_ok = true;
            let mut results = Vec::new();
            for ((id, r), out) in cases.iter().zip(outcomes) {
                let ok = out?;
                all_ok &= ok;
                rep.line(&format!("{id:?} r={r}: {}", if ok { "holds" } else { "FAILS" }));
                results.push(json!({ "identity": format!("{id:?}"), "r": r, "holds": ok }));
            }
            rep.finish(json!({ "all_hold": all_ok, "cases": results }), None);
            Ok(if all_ok { 0 } else { 1 })
        }
        Cmd::Confluence => {
            let pres = make_presentation(cli)?;
            let overlaps = pres.check_confluence()?;
            let rep = Reporter::new(
                cli,
                "confluence",
                json!({ "algebra": cli.algebra, "m": cli.m }),
            );
            if overlaps.is_empty() {
                rep.line("confluent: true");
                rep.finish(json!({ "confluent": true }), None);
                Ok(0)
            } else {
                for w in &overlaps {
                    rep.line(&format!("non-confluent overlap: {}", pres.format_word(w)));
                }
                let ws: Vec<String> = overlaps.iter().map(|w| pres.format_word(w)).collect();
                rep.finish(json!({ "confluent": false }), Some(json!(ws)));
                Ok(1)
            }
        }
        Cmd::Pideg { dd_n, matrix } => {
            let m = cli
                .m
                .ok_or_else(|| Error::BadParams("--m is required".into()))?;
            let (inputs, deg) = match (dd_n, matrix) {
                (Some(n), None) => (json!({ "dd_n": n, "m": m }), pi_degree_dd(*n, m)?),
                (None, Some(path)) => {
                    let h = IntMatrix::parse(&read_file(path)?)?;
                    (
                        json!({ "matrix": path.display().to_string(), "m": m }),
                        pi_degree(&h, m)?,
                    )
                }
                _ => {
                    return Err(Error::BadParams(
                        "exactly one of --dd-n / --matrix is required".into(),
                    ))
                }
            };
            let rep = Reporter::new(cli, "pideg", inputs);
            rep.line(&format!("pideg = {deg}"));
            let as_num: Value = deg
                .to_string()
                .parse::<u64>()
                .map(Value::from)
                .unwrap_or_else(|_| Value::String(deg.to_string()));
            rep.finish(json!(as_num), None);
            Ok(0)
        }
        Cmd::ModuleBuild { params, out } => {
            let mp = parse_module_params(&read_file(params)?)?;
            let r = build_module(field_for_module(cli, mp.m)?, &mp)?;
            let exported = representation_to_json(&r);
            let rep = Reporter::new(
                cli,
                "module-build",
                json!({ "params": params.display().to_string(),
                        "family": r.family.tag(), "m": mp.m }),
            );
            match out {
                Some(path) => {
                    std::fs::write(path, format!("{exported:#}\n"))
                        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    rep.line(&format!(
                        "built {} module of dim {} -> {}",
                        r.family.tag(),
                        r.dim,
                        path.display()
                    ));
                }
                None => {
                    if cli.json {
                        // exported representation goes into the result field
                    } else {
                        println!("{exported:#}");
                    }
                }
            }
            rep.finish(
                json!({ "dim": r.dim, "family": r.family.tag(),
                        "out": out.as_ref().map(|p| p.display().to_string()),
                        "module": if out.is_none() { exported } else { Value::Null } }),
                None,
            );
            Ok(0)
        }
        Cmd::ModuleVerify { input } => {
            let r = representation_from_json(&read_file(input)?)?;
            let bad = verify_relations(&r);
            let rep = Reporter::new(
                cli,
                "module-verify",
                json!({ "in": input.display().to_string(), "family": r.family.tag(),
                        "dim": r.dim }),
            );
            if bad.is_empty() {
                rep.line("all relations hold");
            } else {
                for b in &bad {
                    rep.line(&format!("violated: {b}"));
                }
            }
            let ok = bad.is_empty();
            rep.finish(json!({ "valid": ok, "violated": bad }), None);
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::ModuleAnalyze { input, params } => {
            let r = load_module(cli, input.as_ref(), params.as_ref())?;
            let rep = Reporter::new(
                cli,
                "module-analyze",
                json!({ "in": input.as_ref().map(|p| p.display().to_string()),
                        "params": params.as_ref().map(|p| p.display().to_string()),
                        "family": r.family.tag() }),
            );
            let gdim = generated_algebra_dim(&r);
            let simple = gdim == r.dim * r.dim;
            let (semi, witness) = semisimple_probe(&r);
            let c = commutant(&r);
            let rad = radical_of_commutant(&c).ok();
            let cert = match indecomposability_certificate(&r) {
                Ok(c) => Some(c),
                Err(Error::BadCharacteristic(_)) => None,
                Err(e) => return Err(e),
            };
            rep.line(&format!("family: {}  dim: {}", r.family.tag(), r.dim));
            rep.line(&format!("generated algebra dim: {gdim}"));
            rep.line(&format!("simple: {simple}"));
            rep.line(&format!(
                "semisimple: {}",
                semi.map_or("unknown".into(), |b| b.to_string())
            ));
            rep.line(&format!("commutant dim: {}", c.dim()));
            rep.line(&format!(
                "radical dim: {}",
                rad.as_ref().map_or("n/a".into(), |r| r.len().to_string())
            ));
            let (indec, cert_str) = match &cert {
                Some(Certificate::Indecomposable) => (Some(true), "indecomposable".to_string()),
                Some(Certificate::Decomposable(_)) => (Some(false), "decomposable".to_string()),
                Some(Certificate::Inconclusive { .. }) => (None, "inconclusive".to_string()),
                None => (None, "n/a (bad characteristic)".to_string()),
            };
            rep.line(&format!("indecomposable: {cert_str}"));
            let witness_json = witness.map(|w| {
                json!({ "invariant_subspace_dim": w.dim() })
            });
            rep.finish(
                json!({
                    "family": r.family.tag(),
                    "dim": r.dim,
                    "generated_algebra_dim": gdim,
                    "simple": simple,
                    "semisimple": semi,
                    "commutant_dim": c.dim(),
                    "radical_dim": rad.map(|x| x.len()),
                    "indecomposable": indec,
                }),
                witness_json,
            );
            Ok(0)
        }
        Cmd::ModuleIso { a, b } => {
            let ra = representation_from_json(&read_file(a)?)?;
            let rb = representation_from_json(&read_file(b)?)?;
            let rep = Reporter::new(
                cli,
                "module-iso",
                json!({ "a": a.display().to_string(), "b": b.display().to_string() }),
            );
            let witness = find_invertible_intertwiner(&ra, &rb);
            let iso = witness.is_some();
            rep.line(&format!("isomorphic: {iso}"));
            let witness_json = witness.map(|w| {
                let ctx = ra.field();
                let rows: Vec<Vec<String>> = (0..w.rows)
                    .map(|i| {
                        (0..w.cols)
                            .map(|j| qma_core::scalar::format_scalar(w.at(i, j), ctx))
                            .collect()
                    })
                    .collect();
                json!(rows)
            });
            rep.finish(json!({ "isomorphic": iso }), witness_json);
            Ok(if iso { 0 } else { 1 })
        }
    }
}

#[derive(Args)]
struct ExprArgs {
    /// Expression over the presentation's generators
    #[arg(short = 'e', long = "expr")]
    expr: String,
}

fn run_expr(cli: &Cli, e: &ExprArgs) -> Result<u8, Error> {
    let pres = make_presentation(cli)?;
    let poly = parse_poly(&e.expr, &pres)?;
    match &cli.cmd {
        Cmd::Normalize(_) => {
            let rep = Reporter::new(
                cli,
                "normalize",
                json!({ "algebra": cli.algebra, "m": cli.m, "expr": e.expr }),
            );
            let text = pres.format_poly(&poly);
            rep.line(&text);
            rep.finish(json!(text), None);
            Ok(0)
        }
        Cmd::Central(_) => {
            let rep = Reporter::new(
                cli,
                "central",
                json!({ "algebra": cli.algebra, "m": cli.m, "expr": e.expr }),
            );
            let central = is_central(&poly, &pres)?;
            rep.line(&format!("central: {central}"));
            rep.finish(json!({ "central": central }), None);
            Ok(if central { 0 } else { 1 })
        }
        Cmd::Qnormal(_) => {
            let rep = Reporter::new(
                cli,
                "qnormal",
                json!({ "algebra": cli.algebra, "m": cli.m, "expr": e.expr }),
            );
            let profile = q_normal_profile(&poly, &pres)?;
            let mut obj = BTreeMap::new();
            for (g, &exp) in profile.iter().enumerate() {
                let name = pres.gen_name(g as u8).to_string();
                rep.line(&format!("{name}: {exp}"));
                obj.insert(name, exp);
            }
            rep.finish(json!(obj), None);
            Ok(0)
        }
        _ => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
