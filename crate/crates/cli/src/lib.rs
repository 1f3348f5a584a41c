//! Command-line front end for `diobound`.
//!
//! [`run`] parses arguments, dispatches one subcommand and writes its report
//! as text or JSON. Exit codes: 0 success or confirmed, 1 refuted (or a
//! failed cross-check), 2 inconclusive because a cap was reached, 3 usage,
//! parse or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use diobound::verifier::{
    canonical_quadruples, classify_triples, verify_coverage, verify_phi, CellClass, Mode,
    PhiOptions, PhiStatus,
};
use diobound::witnesses::WitnessPackage;
use diobound::{
    bounded_membership, conjectural_bound, counterexample_witness, domain_transform,
    enumerate_from, parse_polynomial, theorem1_witness, theorem2_witness, theorem6_padding,
    to_conjecture_form, CounterexampleKind, Domain, EquationSystem, Exec, Membership,
    HeightBound, PartialAssignment, PosTuple,
};
use num_bigint::BigUint;
use serde::Serialize;

/// First field of every JSON report.
pub const SCHEMA: &str = "diobound.report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "diobound", version)]
#[command(about = "Normal-form Diophantine systems and exhaustive checks of the height bound f(n)")]
pub struct RunConfig {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of standard output
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads: 1 runs sequentially, 0 uses every core
    #[arg(long, short, global = true, env = "DIOBOUND_JOBS")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Positive,
    Nonnegative,
    Integer,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Positive => Domain::Positive,
            DomainArg::Nonnegative => Domain::Nonnegative,
            DomainArg::Integer => Domain::Integer,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Nondecreasing,
    Increasing,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Nondecreasing => Mode::Nondecreasing,
            ModeArg::Increasing => Mode::Increasing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    /// Squaring chain with a unique solution (`--n`, at most 12)
    Theorem1,
    /// Divisor system on n + 4 variables (`--n`, at most 10)
    Theorem2,
    /// Addition counterexample to 2^(2^(n-1)) (`--k`, at least 3)
    CounterAdd,
    /// Unit counterexample to 2^(2^(n-1)) (`--k`, at least 4)
    CounterUnit,
    /// Pads `--psi` to exactly `--n` variables
    Padding,
}

fn parse_biguint(s: &str) -> Result<BigUint, String> {
    s.parse().map_err(|_| format!("`{s}` is not a non-negative integer"))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lower D = 0 to a system of x+1=y and x*y=z atoms
    Reduce {
        /// Polynomial in x1, x2, ... (e.g. "x1^2 - 2*x2 + 1")
        polynomial: String,
        #[arg(long, value_enum, default_value_t = DomainArg::Positive)]
        domain: DomainArg,
        /// Also print every pass and where each variable came from
        #[arg(long)]
        trace: bool,
    },
    /// Arity of the lowered system and the conjectural bound f(n)
    Bound {
        polynomial: String,
        #[arg(long, value_enum, default_value_t = DomainArg::Positive)]
        domain: DomainArg,
    },
    /// Decide b ∈ {b : W(b, x) = 0 for some x >= 0} by bounded search
    Membership {
        /// W, with x1 the parameter b
        polynomial: String,
        #[arg(long, value_parser = parse_biguint)]
        b: BigUint,
        /// Largest value searched per variable
        #[arg(long, default_value_t = 64)]
        cap: u64,
    },
    /// Enumerate positive solutions of a system file ("-" reads stdin)
    Solve {
        system: PathBuf,
        /// Largest value tried for each free variable
        #[arg(long)]
        cap: u64,
        /// Stop after this many solutions
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Check that every tuple with f(n) < max <= c has an extension beyond c
    VerifyPhi {
        c: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long)]
        n_max: Option<usize>,
        /// Free-variable cap for the extension search (default 2c + 2)
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Canonical quadruples with maximum in (16, limit]
    Quadruples {
        #[arg(long, default_value_t = 256)]
        limit: u64,
        /// Also scan every increasing quadruple and check the family catalog
        #[arg(long)]
        cross_check: bool,
    },
    /// The 24-cell table of triple signatures
    ClassifyTriples {
        /// Search bound for realizing triples and solution enumeration
        #[arg(long, default_value_t = 40)]
        bound: u64,
    },
    /// Print a witness system with its expected solution and claimed bound
    Witness {
        #[arg(value_enum)]
        kind: WitnessKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// System to pad (default: x1 * x1 = x2)
        #[arg(long)]
        psi: Option<PathBuf>,
    },
}

/// A rendered report plus its exit code.
struct Outcome {
    text: String,
    json: serde_json::Value,
    code: i32,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    command: &'a str,
    #[serde(flatten)]
    body: &'a serde_json::Value,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    dispatch(&config, stdin, stdout, stderr)
}

/// Runs a parsed configuration and writes its report.
pub fn dispatch(config: &RunConfig, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let started = Instant::now();
    let outcome = match execute(config, stdin) {
        Ok(o) => o,
        Err(Failure(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            return EXIT_USAGE;
        }
    };
    let report = match config.format {
        Format::Text => outcome.text,
        Format::Json => {
            let envelope = Envelope {
                schema: SCHEMA,
                command: command_name(&config.command),
                body: &outcome.json,
            };
            let mut s = serde_json::to_string_pretty(&envelope).expect("JSON values serialize");
            s.push('\n');
            s
        }
    };
    let written = match &config.output {
        Some(path) => std::fs::write(path, report.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(report.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    // Timing stays out of the report so reports compare byte for byte.
    let _ = writeln!(stderr, "{} finished in {:.2?}", command_name(&config.command), started.elapsed());
    outcome.code
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Reduce { .. } => "reduce",
        Command::Bound { .. } => "bound",
        Command::Membership { .. } => "membership",
        Command::Solve { .. } => "solve",
        Command::VerifyPhi { .. } => "verify-phi",
        Command::Quadruples { .. } => "quadruples",
        Command::ClassifyTriples { .. } => "classify-triples",
        Command::Witness { .. } => "witness",
    }
}

fn execute(config: &RunConfig, stdin: &mut dyn Read) -> Res<Outcome> {
    let exec = Exec::from_jobs(config.jobs);
    match &config.command {
        Command::Reduce {
            polynomial,
            domain,
            trace,
        } => reduce(polynomial, (*domain).into(), *trace),
        Command::Bound { polynomial, domain } => bound(polynomial, (*domain).into()),
        Command::Membership { polynomial, b, cap } => membership(polynomial, b, *cap),
        Command::Solve { system, cap, limit } => solve(&read_input(system, stdin)?, *cap, *limit, exec),
        Command::VerifyPhi { c, mode, n_max, cap } => phi(
            *c,
            PhiOptions {
                mode: (*mode).into(),
                n_max: *n_max,
                cap: *cap,
                exec,
            },
        ),
        Command::Quadruples { limit, cross_check } => quadruples(*limit, *cross_check, exec),
        Command::ClassifyTriples { bound } => triples(*bound),
        Command::Witness { kind, n, k, psi } => {
            let psi = match psi {
                Some(path) => Some(read_input(path, stdin)?),
                None => None,
            };
            witness(*kind, *n, *k, psi.as_deref())
        }
    }
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Res<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
    }
}

fn strings(t: &PosTuple) -> Vec<String> {
    t.values().iter().map(BigUint::to_string).collect()
}

fn reduce(text: &str, domain: Domain, trace: bool) -> Res<Outcome> {
    let d = parse_polynomial(text)?;
    let transformed = domain_transform(&d, domain)?;
    let t = to_conjecture_form(&transformed)?;
    let mut out = String::new();
    let stages: Vec<serde_json::Value> = t
        .stages
        .iter()
        .map(|s| {
            serde_json::json!({
                "pass": s.pass.to_string(),
                "n": s.system.n(),
                "system": s.system.to_text(),
            })
        })
        .collect();
    if trace {
        writeln!(out, "# input: {text} = 0 over {domain}")?;
        if domain != Domain::Positive {
            writeln!(out, "# positive form: {transformed}")?;
        }
        for s in &t.stages {
            writeln!(out, "# pass {}: {} variables", s.pass, s.system.n())?;
            for line in s.system.to_text().lines() {
                writeln!(out, "#   {line}")?;
            }
        }
        for (index, origin) in &t.provenance {
            writeln!(out, "# x{index} = {origin}")?;
        }
    }
    out.push_str(&t.final_system().to_text());
    let provenance: serde_json::Map<String, serde_json::Value> = t
        .provenance
        .iter()
        .map(|(i, s)| (format!("x{i}"), s.clone().into()))
        .collect();
    let mut json = serde_json::json!({
        "input": text,
        "domain": domain.to_string(),
        "positive_form": transformed.to_string(),
        "n": t.n(),
        "system": t.final_system().to_text(),
    });
    if trace {
        json["stages"] = stages.into();
        json["provenance"] = provenance.into();
    }
    Ok(Outcome {
        text: out,
        json,
        code: EXIT_OK,
    })
}

fn bound(text: &str, domain: Domain) -> Res<Outcome> {
    let d = parse_polynomial(text)?;
    let cb = conjectural_bound(&d, domain)?;
    let mut out = String::new();
    writeln!(out, "n = {}", cb.n)?;
    let exact = f_text(&cb.bound);
    if exact != cb.bound.to_string() {
        writeln!(out, "f(n) = {} = {exact}", cb.bound)?;
    } else if cb.bound.bits() == u64::MAX {
        writeln!(out, "f(n) = {} (more than 2^64 bits)", cb.bound)?;
    } else {
        writeln!(out, "f(n) = {} ({} bits)", cb.bound, cb.bound.bits())?;
    }
    writeln!(
        out,
        "if {text} = 0 has finitely many solutions over {domain}, each has {} <= f({})",
        cb.bounded_quantity(),
        cb.n
    )?;
    let json = serde_json::json!({
        "input": text,
        "domain": domain.to_string(),
        "n": cb.n,
        "f_n": cb.bound,
        "bits": cb.bound.bits(),
        "bounded_quantity": cb.bounded_quantity(),
    });
    Ok(Outcome {
        text: out,
        json,
        code: EXIT_OK,
    })
}

fn membership(text: &str, b: &BigUint, cap: u64) -> Res<Outcome> {
    let w = parse_polynomial(text)?;
    let m = bounded_membership(&w, b, cap)?;
    let (line, code) = match &m {
        Membership::Member { witness } => (format!("member: x = ({})", witness.join(", ")), EXIT_OK),
        Membership::NonMember => ("non-member: searched the whole bounded box".to_string(), EXIT_OK),
        Membership::Inconclusive { searched_edge } => (
            format!("inconclusive: no witness in [0, {searched_edge}] per variable"),
            EXIT_INCONCLUSIVE,
        ),
    };
    let mut json = serde_json::to_value(&m)?;
    json["b"] = b.to_string().into();
    json["cap"] = cap.into();
    Ok(Outcome {
        text: format!("b = {b}\n{line}\n"),
        json,
        code,
    })
}

fn solve(text: &str, cap: u64, limit: Option<usize>, exec: Exec) -> Res<Outcome> {
    if cap == 0 {
        return Err(Failure("--cap must be at least 1".into()));
    }
    let system: EquationSystem = text.parse()?;
    let e = enumerate_from(&system, PartialAssignment::empty(system.n()), cap, limit, exec);
    let mut out = String::new();
    for y in &e.solutions {
        writeln!(out, "{}", strings(y).join(","))?;
    }
    writeln!(
        out,
        "# {} solutions, truncated: {}, complete: {}",
        e.solutions.len(),
        e.truncated,
        e.exhaustive
    )?;
    let json = serde_json::json!({
        "n": system.n(),
        "cap": cap,
        "limit": limit,
        "count": e.solutions.len(),
        "truncated": e.truncated,
        "complete": e.exhaustive,
        "solutions": e.solutions.iter().map(strings).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        text: out,
        json,
        code: EXIT_OK,
    })
}

/// Exact value when short, closed form otherwise.
fn f_text(f: &HeightBound) -> String {
    match f.value() {
        Ok(v) if f.bits() <= 256 => v.to_string(),
        _ => f.to_string(),
    }
}

fn tuple_text(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("({})", parts.join(", "))
}

fn phi(c: u64, options: PhiOptions) -> Res<Outcome> {
    let r = verify_phi(c, &options)?;
    let mut out = String::new();
    writeln!(out, "# c = {c}, mode = {}, cap = {}", format!("{:?}", r.mode).to_lowercase(), r.cap)?;
    for a in &r.arities {
        writeln!(
            out,
            "n = {}  f(n) = {}  tuples = {}  extended = {}  signature classes = {}",
            a.n,
            f_text(&a.f_n),
            a.tuples_examined, a.extensions_found, a.signature_classes
        )?;
    }
    let code = match &r.status {
        PhiStatus::Confirmed => {
            writeln!(out, "Phi({c}) confirmed")?;
            EXIT_OK
        }
        PhiStatus::Refuted { witness } => {
            writeln!(out, "Phi({c}) refuted: {} has no extension", tuple_text(witness))?;
            EXIT_REFUTED
        }
        PhiStatus::Inconclusive { cap, tuple } => {
            writeln!(
                out,
                "Phi({c}) inconclusive: no extension of {} with free values <= {cap}",
                tuple_text(tuple)
            )?;
            EXIT_INCONCLUSIVE
        }
    };
    Ok(Outcome {
        text: out,
        json: serde_json::to_value(&r)?,
        code,
    })
}

fn quadruples(limit: u64, cross_check: bool, exec: Exec) -> Res<Outcome> {
    let mut out = String::new();
    let (list, coverage) = if cross_check {
        let report = verify_coverage(limit, exec)?;
        (canonical_quadruples(limit, exec)?, Some(report))
    } else {
        (canonical_quadruples(limit, exec)?, None)
    };
    for q in &list {
        writeln!(out, "{}", tuple_text(&q.quadruple))?;
    }
    writeln!(out, "count {}", list.len())?;
    let mut code = EXIT_OK;
    if let Some(r) = &coverage {
        if r.ok() {
            writeln!(
                out,
                "cross-check ok: {} quadruples dominated, families valid",
                r.quadruples_scanned
            )?;
        } else {
            code = EXIT_REFUTED;
            writeln!(
                out,
                "cross-check failed: {} undominated, {} uncatalogued, {} family failures",
                r.undominated.len(),
                r.uncatalogued.len(),
                r.family_failures.len()
            )?;
            for x in r.undominated.iter().take(20) {
                writeln!(out, "undominated {}", tuple_text(x))?;
            }
            for x in &r.uncatalogued {
                writeln!(out, "uncatalogued {}", tuple_text(x))?;
            }
            for f in &r.family_failures {
                writeln!(out, "family {}: {}", f.family, f.reason)?;
            }
        }
    }
    let mut json = serde_json::json!({
        "limit": limit,
        "count": list.len(),
        "quadruples": list.iter().map(|q| q.quadruple).collect::<Vec<_>>(),
    });
    if let Some(r) = &coverage {
        json["coverage"] = serde_json::to_value(r)?;
        json["coverage"]["ok"] = r.ok().into();
    }
    Ok(Outcome { text: out, json, code })
}

fn triples(bound: u64) -> Res<Outcome> {
    let cells = classify_triples(bound);
    let mut out = String::new();
    for cell in &cells {
        let class = match &cell.class {
            CellClass::NotInF => "not in F".to_string(),
            CellClass::InfiniteFamily { template } => format!("infinite: {template}"),
            CellClass::UniquelySolved {
                solutions,
                exhaustive,
            } => {
                let list: Vec<String> = solutions.iter().map(|s| tuple_text(s)).collect();
                let note = if *exhaustive { "" } else { " (within the bound)" };
                format!("only {}{note}", list.join(", "))
            }
            CellClass::Unresolved { solutions_found } => format!("unresolved: {solutions_found} solutions"),
        };
        let realized = cell.realized_by.map_or("-".to_string(), |t| tuple_text(&t));
        writeln!(
            out,
            "[{},{}] {:<36} {:<34} realized by {realized}",
            cell.row, cell.column, cell.system, class
        )?;
    }
    let json = serde_json::json!({
        "search_bound": bound,
        "cells": cells,
    });
    Ok(Outcome {
        text: out,
        json,
        code: EXIT_OK,
    })
}

fn witness(kind: WitnessKind, n: Option<usize>, k: Option<usize>, psi: Option<&str>) -> Res<Outcome> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure(format!("{flag} is required for this witness")));
    let package = match kind {
        WitnessKind::Theorem1 => theorem1_witness(need(n, "--n")?)?,
        WitnessKind::Theorem2 => theorem2_witness(need(n, "--n")?)?,
        WitnessKind::CounterAdd => counterexample_witness(CounterexampleKind::Addition, need(k, "--k")?)?,
        WitnessKind::CounterUnit => counterexample_witness(CounterexampleKind::Unit, need(k, "--k")?)?,
        WitnessKind::Padding => {
            let n = need(n, "--n")?;
            let psi: EquationSystem = psi.unwrap_or("vars 2\nx1 * x1 = x2\n").parse()?;
            let padded = theorem6_padding(&psi, n)?;
            let l = &padded.layout;
            let text = format!(
                "# padding of a {}-variable system to {n} variables\n\
                 # psi x{}..x{}, pads x{}..x{}, chain x{}..x{}, u = x{}, y = x{}\n\
                 # every solution has x1 = {n}\n{}",
                l.psi.len(),
                l.psi.start,
                l.psi.end - 1,
                l.pads.start,
                l.pads.end.saturating_sub(1).max(l.pads.start),
                l.chain.start,
                l.chain.end - 1,
                l.u,
                l.y,
                padded.system.to_text()
            );
            let json = serde_json::json!({
                "label": format!("padding n={n}"),
                "system": padded.system.to_text(),
                "layout": {
                    "psi": [l.psi.start, l.psi.end - 1],
                    "pads": [l.pads.start, l.pads.end],
                    "chain": [l.chain.start, l.chain.end - 1],
                    "u": l.u,
                    "y": l.y,
                },
            });
            return Ok(Outcome {
                text,
                json,
                code: EXIT_OK,
            });
        }
    };
    Ok(render_package(&package))
}

fn render_package(w: &WitnessPackage) -> Outcome {
    let expected = strings(&w.expected);
    let text = format!(
        "# {}\n# expected solution: ({})\n# max(expected) {} {}: {}\n{}",
        w.label,
        expected.join(", "),
        w.relation,
        w.claimed_bound,
        w.relation_holds(),
        w.system.to_text()
    );
    let json = serde_json::json!({
        "label": w.label,
        "system": w.system.to_text(),
        "expected": expected,
        "claimed_bound": w.claimed_bound.to_string(),
        "relation": w.relation,
        "relation_holds": w.relation_holds(),
    });
    Outcome {
        text,
        json,
        code: EXIT_OK,
    }
}
