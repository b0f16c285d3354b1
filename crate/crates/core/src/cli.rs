//! The `btt` command line.
//!
//! Exit codes: 0 when every checked property holds, 1 when one fails (the
//! report names it with a witness), 2 on input or usage errors.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::bv::{verify_bv, verify_bv_infinity, verify_conjugation_identity, BVStructure};
use crate::deformation::{char_p_probe, solve_mc, tt_solve_mc, McOutcome, SolveMethod};
use crate::degeneration::{degenerates_at_e1, u_freeness_stable, Verdict};
use crate::dglie::DgLie;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::format::{parse, print, Document, StructureSpec};
use crate::gallery;
use crate::quasi_abelian::{dd_lemma, induced_bracket_on_homology, zigzag_certificate};
use crate::report::{self, Report};
use crate::transfer::{build_contraction, transferred_brackets, verify_linfinity};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILS: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "btt", version, about = "Exact checks for BV and BV-infinity structures and their deformation theory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Io {
    /// Input document, or `-` for stdin.
    pub file: String,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Order-by-order exact elimination.
    Generic,
    /// The dΔ-lemma solver.
    Tt,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the axioms of the declared structure.
    Verify(Io),
    /// Decide the dΔ-lemma degree by degree.
    Ddlemma(Io),
    /// Decide E1-degeneration and u-freeness.
    Degeneration(Io),
    /// dΔ-lemma, zig-zag certificate and induced bracket on homology.
    Quasiabelian(Io),
    /// Solve the Maurer-Cartan system from an H1 class.
    Deform {
        #[command(flatten)]
        io: Io,
        /// H1 class coordinates, e.g. `1,0,-1/2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        class: Vec<String>,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Method::Generic)]
        method: Method,
    },
    /// Reduce mod p and solve to order p-1 for every H1 basis class.
    Charp {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        p: u64,
    },
    /// Transfer the bracket to homology up to the given arity.
    Transfer {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..=4))]
        arity: u64,
    },
    /// Print a gallery document, or replay its manifest.
    Gallery {
        /// Entry name; omit to list the entries.
        name: Option<String>,
        /// Re-check the manifest and emit a report instead of the document.
        #[arg(long)]
        replay: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command: a report, or plain text for `gallery`.
enum Output {
    Report(Report),
    Text(String),
}

/// A failure that is the input's fault rather than a property verdict.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

/// Errors that mean "the structure is not what it claims", reported as a
/// failing property rather than bad input.
fn is_property_error(e: &Error) -> bool {
    matches!(
        e,
        Error::JacobiFailure(_) | Error::NotAComplex(_) | Error::NotSecondOrder(_)
    )
}

/// Parses `argv`, runs the command, and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let out_path = match &cli.command {
        Command::Verify(io) | Command::Ddlemma(io) | Command::Degeneration(io) | Command::Quasiabelian(io) => {
            io.out.clone()
        }
        Command::Deform { io, .. } | Command::Charp { io, .. } | Command::Transfer { io, .. } => io.out.clone(),
        Command::Gallery { out, .. } => out.clone(),
    };
    let (output, code) = match execute(&cli.command, stdin) {
        Ok(Output::Report(r)) => {
            let code = if r.holds() { EXIT_OK } else { EXIT_PROPERTY_FAILS };
            if let Some(f) = r.first_failure() {
                let _ = writeln!(stderr, "property fails: {f}");
            }
            (r.render(), code)
        }
        Ok(Output::Text(t)) => (t, EXIT_OK),
        Err(InputError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_INPUT_ERROR;
        }
    };
    match out_path {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, output) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_INPUT_ERROR;
            }
        }
        None => {
            let _ = write!(stdout, "{output}");
        }
    }
    code
}

fn read_input(file: &str, stdin: &mut dyn Read) -> std::result::Result<Vec<u8>, InputError> {
    let mut buf = Vec::new();
    if file == "-" {
        stdin
            .read_to_end(&mut buf)
            .map_err(|e| InputError(format!("cannot read stdin: {e}")))?;
    } else {
        buf = std::fs::read(file).map_err(|e| InputError(format!("cannot read {file}: {e}")))?;
    }
    Ok(buf)
}

fn load(io: &Io, stdin: &mut dyn Read) -> std::result::Result<(Vec<u8>, Document), InputError> {
    let bytes = read_input(&io.file, stdin)?;
    let text = std::str::from_utf8(&bytes).map_err(|_| InputError("input is not UTF-8".into()))?;
    let doc = parse(text)?;
    Ok((bytes, doc))
}

fn execute(cmd: &Command, stdin: &mut dyn Read) -> std::result::Result<Output, InputError> {
    match cmd {
        Command::Verify(io) => {
            let (bytes, doc) = load(io, stdin)?;
            verify(Report::new("verify", &bytes), &doc)
        }
        Command::Ddlemma(io) => {
            let (bytes, doc) = load(io, stdin)?;
            let b = doc.bv_structure()?;
            let mut r = Report::new("ddlemma", &bytes);
            let cert = dd_lemma(&b)?;
            let mut degrees = Vec::new();
            for g in &cert.degrees {
                let witness = (!g.holds()).then(|| {
                    format!(
                        "degree {}: dim Ker d ∩ Im Δ = {}, dim Ker Δ ∩ Im d = {}, dim Im dΔ = {}",
                        g.degree,
                        g.ker_d_im_delta.dim(),
                        g.ker_delta_im_d.dim(),
                        g.im_d_delta.dim()
                    )
                });
                r.verdict(format!("dd-lemma in degree {}", g.degree), g.holds(), witness);
                degrees.push(json!({
                    "degree": g.degree,
                    "ker_d_im_delta": report::subspace(&g.ker_d_im_delta),
                    "ker_delta_im_d": report::subspace(&g.ker_delta_im_d),
                    "im_d_delta": report::subspace(&g.im_d_delta),
                }));
            }
            r.certificate("degrees", Value::Array(degrees));
            Ok(Output::Report(r))
        }
        Command::Degeneration(io) => {
            let (bytes, doc) = load(io, stdin)?;
            let b = doc.bv_structure()?;
            degeneration(Report::new("degeneration", &bytes), &b)
        }
        Command::Quasiabelian(io) => {
            let (bytes, doc) = load(io, stdin)?;
            let b = doc.bv_structure()?;
            quasiabelian(Report::new("quasiabelian", &bytes), &b)
        }
        Command::Deform {
            io,
            class,
            order,
            method,
        } => {
            let (bytes, doc) = load(io, stdin)?;
            deform(Report::new("deform", &bytes), &doc, class, *order, *method)
        }
        Command::Charp { io, p } => {
            let (bytes, doc) = load(io, stdin)?;
            charp(Report::new("charp", &bytes), &doc, *p)
        }
        Command::Transfer { io, arity } => {
            let (bytes, doc) = load(io, stdin)?;
            transfer(Report::new("transfer", &bytes), &doc, *arity as usize)
        }
        Command::Gallery { name, replay, .. } => {
            let Some(name) = name else {
                return Ok(Output::Text(gallery::NAMES.map(|n| format!("{n}\n")).concat()));
            };
            let entry = gallery::by_name(name)?;
            let text = print(&entry.document);
            if !replay {
                return Ok(Output::Text(text));
            }
            let mut r = Report::new("gallery", text.as_bytes());
            r.certificate("entry", json!(entry.name));
            r.certificate("demonstration_only", json!(entry.demonstration_only));
            for c in gallery::replay(&entry)? {
                let witness = (!c.holds).then(|| format!("observed {}", c.observed));
                r.verdict(c.claim.to_string(), c.holds, witness);
            }
            Ok(Output::Report(r))
        }
    }
}

fn verify(mut r: Report, doc: &Document) -> std::result::Result<Output, InputError> {
    let structure = doc
        .structure
        .as_ref()
        .ok_or_else(|| InputError("the document declares no structure to verify".into()))?;
    r.certificate("structure", json!(structure.kind()));
    if let StructureSpec::DgLieCochains { .. } = structure {
        match doc.dg_lie() {
            Ok(l) => {
                r.verdict("dg-Lie construction checks", true, None);
                r.certificate("betti", betti_json(&l)?);
            }
            Err(e) if is_property_error(&e) => r.verdict("dg-Lie construction checks", false, Some(e.to_string())),
            Err(e) => return Err(e.into()),
        }
        return Ok(Output::Report(r));
    }
    let b = match doc.bv_structure() {
        Ok(b) => b,
        Err(e) if is_property_error(&e) => {
            r.verdict("structure preconditions", false, Some(e.to_string()));
            return Ok(Output::Report(r));
        }
        Err(e) => return Err(e.into()),
    };
    if b.is_classical() {
        r.extend_from("bv", &verify_bv(&b));
    } else {
        r.extend_from("bv-infinity", &verify_bv_infinity(&b));
    }
    if b.lambda().is_some() {
        r.extend_from("conjugation", &verify_conjugation_identity(&b)?);
    }
    if matches!(structure, StructureSpec::DgLieDerived { .. }) && r.holds() {
        let l = DgLie::from_bv(&b)?;
        r.certificate("betti", betti_json(&l)?);
    }
    r.certificate(
        "deltas",
        Value::Array(b.deltas().iter().map(|x| json!({"degree": x.degree(), "zero": x.is_zero()})).collect()),
    );
    Ok(Output::Report(r))
}

fn betti_json(l: &DgLie) -> Result<Value> {
    Ok(Value::Object(
        l.betti()?.into_iter().map(|(n, b)| (n.to_string(), json!(b))).collect(),
    ))
}

fn degeneration(mut r: Report, b: &BVStructure) -> std::result::Result<Output, InputError> {
    let cert = degenerates_at_e1(b)?;
    let (free, freeness) = u_freeness_stable(b)?;
    let witness = cert.d1_witness.clone().or_else(|| cert.witness.clone());
    r.verdict("E1 degeneration", cert.verdict == Verdict::Holds, witness.or_else(|| inconclusive(cert.verdict)));
    r.verdict(
        "u-freeness",
        free == Verdict::Holds,
        freeness.torsion_witness.clone().or_else(|| inconclusive(free)),
    );
    let page = |m: &std::collections::BTreeMap<(usize, i64), usize>| {
        Value::Array(m.iter().map(|(&(p, n), &d)| json!([p, n, d])).collect())
    };
    r.certificate("verdict", json!(cert.verdict.as_str()));
    r.certificate("truncation", json!(cert.truncation));
    r.certificate("e1", page(&cert.e1));
    r.certificate("e_infinity", page(&cert.e_infinity));
    r.certificate("attempts", json!(cert.attempts));
    r.certificate(
        "freeness",
        json!({
            "verdict": free.as_str(),
            "truncation": freeness.truncation,
            "length": freeness.length,
            "generators": freeness.generators,
        }),
    );
    Ok(Output::Report(r))
}

fn inconclusive(v: Verdict) -> Option<String> {
    (v == Verdict::Inconclusive).then(|| "inconclusive up to the truncation cap".to_string())
}

fn quasiabelian(mut r: Report, b: &BVStructure) -> std::result::Result<Output, InputError> {
    let dd = dd_lemma(b)?;
    r.verdict(
        "dd-lemma",
        dd.holds(),
        dd.failing_degree().map(|n| format!("fails in degree {n}")),
    );
    if dd.holds() {
        let z = zigzag_certificate(b)?;
        r.verdict("zig-zag certificate", z.valid(), z.witness.clone());
        let degrees: Vec<Value> = z
            .degrees
            .iter()
            .map(|g| {
                json!({
                    "degree": g.degree,
                    "kernel_basis": report::vectors(&g.kernel_basis),
                    "projection": report::matrix(&g.projection),
                    "betti": [g.betti_a, g.betti_kernel, g.betti_h_delta],
                    "ranks": [g.inclusion_rank, g.projection_rank],
                })
            })
            .collect();
        r.certificate("zigzag", Value::Array(degrees));
    }
    let ib = induced_bracket_on_homology(b)?;
    r.verdict("induced bracket on homology is zero", ib.is_zero(), ib.witness());
    Ok(Output::Report(r))
}

fn parse_class(field: FieldSpec, coords: &[String]) -> std::result::Result<Vec<Scalar>, InputError> {
    coords
        .iter()
        .map(|s| {
            let bad = || InputError(format!("bad class coordinate '{s}'"));
            let (num, den) = match s.trim().split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s.trim(), "1"),
            };
            let num: BigInt = num.parse().map_err(|_| bad())?;
            let den: BigInt = den.parse().map_err(|_| bad())?;
            field.from_ratio(&num, &den).map_err(|_| bad())
        })
        .collect()
}

fn series_json(l: &DgLie, coefficients: &[Vec<Scalar>]) -> Value {
    Value::Array(
        coefficients
            .iter()
            .enumerate()
            .map(|(k, v)| json!({"order": k + 1, "coordinates": report::vector(v), "element": l.format_vector(1, v)}))
            .collect(),
    )
}

fn outcome_into(r: &mut Report, l: &DgLie, name: &str, outcome: &McOutcome) {
    match outcome {
        McOutcome::Solved(s) => {
            r.verdict(name, true, None);
            r.certificate("series", series_json(l, &s.coefficients));
        }
        McOutcome::Obstructed(o) => {
            r.verdict(
                name,
                false,
                Some(format!("obstructed at order {} with H2 class {:?}", o.order, strings(&o.class))),
            );
            r.certificate(
                "obstruction",
                json!({
                    "order": o.order,
                    "class": report::vector(&o.class),
                    "rhs": report::vector(&o.rhs),
                    "partial": series_json(l, &o.partial),
                }),
            );
        }
    }
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn deform(
    mut r: Report,
    doc: &Document,
    class: &[String],
    order: usize,
    method: Method,
) -> std::result::Result<Output, InputError> {
    let l = doc.dg_lie()?;
    let alpha = parse_class(l.field(), class)?;
    r.certificate("order", json!(order));
    r.certificate("class", report::vector(&alpha));
    match method {
        Method::Generic => {
            r.certificate("method", json!("generic"));
            let o = solve_mc(&l, &alpha, order, SolveMethod::Elimination)?;
            outcome_into(&mut r, &l, "Maurer-Cartan solvable to the requested order", &o);
        }
        Method::Tt => {
            r.certificate("method", json!("tt"));
            let b = doc.bv_structure()?;
            let sol = tt_solve_mc(&b, &alpha, order)?;
            r.certificate("fallback", json!(sol.fallback));
            outcome_into(&mut r, &l, "Maurer-Cartan solvable to the requested order", &sol.outcome);
        }
    }
    Ok(Output::Report(r))
}

fn charp(mut r: Report, doc: &Document, p: u64) -> std::result::Result<Output, InputError> {
    let reduced = match doc.field() {
        FieldSpec::Rationals => doc.reduce_mod(p)?,
        FieldSpec::PrimeField(q) if q == p => doc.clone(),
        FieldSpec::PrimeField(q) => {
            return Err(InputError(format!("the document is over F_{q}, not F_{p}")));
        }
    };
    let l = reduced.dg_lie()?;
    let probe = char_p_probe(&l)?;
    r.certificate("p", json!(p));
    r.certificate("order", json!(probe.order));
    let classes: Vec<Value> = probe
        .outcomes
        .iter()
        .enumerate()
        .map(|(i, o)| match o {
            McOutcome::Solved(_) => json!({"class": i, "solved": true}),
            McOutcome::Obstructed(ob) => {
                json!({"class": i, "solved": false, "order": ob.order, "obstruction": report::vector(&ob.class)})
            }
        })
        .collect();
    r.certificate("classes", Value::Array(classes));
    r.verdict(
        format!("every H1 basis class solvable mod t^{p}"),
        probe.all_solved(),
        probe
            .first_obstruction()
            .map(|(i, o)| format!("class {i} obstructed at order {}", o.order)),
    );
    Ok(Output::Report(r))
}

fn transfer(mut r: Report, doc: &Document, arity: usize) -> std::result::Result<Output, InputError> {
    let l = doc.dg_lie()?;
    let c = build_contraction(&l)?;
    r.extend_from("contraction", &c.verify(&l)?);
    let t = transferred_brackets(&l, &c, arity)?;
    if arity >= 3 {
        r.extend_from("L-infinity", &verify_linfinity(&l, &c)?);
    }
    let mut out = serde_json::Map::new();
    for (k, m) in &t.brackets {
        let entries: Vec<Value> = m
            .iter()
            .map(|(xs, v)| {
                let deg: i64 = xs.iter().map(|x| x.0).sum::<i64>() + 2 - *k as i64;
                json!({"inputs": xs, "degree": deg, "value": report::vector(v)})
            })
            .collect();
        out.insert(format!("l{k}"), Value::Array(entries));
    }
    r.certificate("betti", betti_json(&l)?);
    r.certificate("brackets", Value::Object(out));
    Ok(Output::Report(r))
}
