//! Command-line front end and the `biquotient-report/1` record format.
//!
//! Exit codes: 0 success, 1 invalid input, 2 verification mismatch.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{CircleWeights, TorusWeights};
use crate::classify::{catalog_lookup, classify_circle, classify_torus, CatalogEntry, DiffeoType};
use crate::error::{Error, Result};
use crate::freeness::{
    circle_effectively_free, circle_fixed_point_oracle, torus_fixed_point_oracle, torus_weights_free,
    FreenessVerdict, Status, Witness,
};
use crate::lattice::{canonical_key, NormalizedTorus};
use crate::sweep::{self, SuiteOutcome, VerifyConfig};
use crate::swclass::w2_of_circle_quotient;

pub const SCHEMA: &str = "biquotient-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Criterion,
    Oracle,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputEcho {
    Circle { raw: [i64; 4], reduced: [i64; 4] },
    Torus { raw: [[i64; 4]; 2], reduced: [[i64; 4]; 2] },
}

impl InputEcho {
    fn columns(&self) -> (String, String) {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        match self {
            InputEcho::Circle { raw, reduced } => (join(raw), join(reduced)),
            InputEcho::Torus { raw, reduced } => {
                let m = |r: &[[i64; 4]; 2]| format!("{}/{}", join(&r[0]), join(&r[1]));
                (m(raw), m(reduced))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub input: InputEcho,
    pub verdict: FreenessVerdict,
    pub diffeo: Option<DiffeoType>,
    pub w2: Option<u8>,
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<NormalizedTorus>,
    /// Oracle verdict, present when the oracle ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_verdict: Option<FreenessVerdict>,
    pub provenance: Provenance,
}

impl Report {
    /// Criterion and oracle agree on effective freeness and kernel order.
    pub fn consistent(&self) -> bool {
        self.oracle_verdict.as_ref().is_none_or(|o| {
            o.is_effectively_free() == self.verdict.is_effectively_free()
                && (!o.is_effectively_free() || o.kernel_order == self.verdict.kernel_order)
        })
    }
}

#[derive(Debug, Serialize)]
struct CsvRow {
    raw_weights: String,
    reduced_weights: String,
    status: Status,
    kernel_order: u64,
    diffeo: Option<DiffeoType>,
    w2: Option<u8>,
    witness_order: Option<u64>,
}

impl From<&Report> for CsvRow {
    fn from(r: &Report) -> Self {
        let (raw_weights, reduced_weights) = r.input.columns();
        CsvRow {
            raw_weights,
            reduced_weights,
            status: r.verdict.status,
            kernel_order: r.verdict.kernel_order,
            diffeo: r.diffeo,
            w2: r.w2,
            witness_order: r.witness.as_ref().map(|w| w.order),
        }
    }
}

pub fn circle_report(w: &CircleWeights, oracle: Option<u64>) -> Result<Report> {
    let verdict = circle_effectively_free(w);
    let (diffeo, w2) = if verdict.is_effectively_free() {
        (Some(classify_circle(w)?), Some(w2_of_circle_quotient(w)?))
    } else {
        (None, None)
    };
    let oracle_verdict = oracle.map(|n| circle_fixed_point_oracle(w, n).verdict);
    Ok(Report {
        schema: SCHEMA.into(),
        input: InputEcho::Circle { raw: w.raw(), reduced: w.tuple() },
        witness: verdict.witness.clone(),
        verdict,
        diffeo,
        w2,
        normal_form: None,
        provenance: if oracle_verdict.is_some() { Provenance::Both } else { Provenance::Criterion },
        oracle_verdict,
    })
}

pub fn torus_report(w: &TorusWeights, oracle: Option<u64>) -> Result<Report> {
    let decision = torus_weights_free(w)?;
    let diffeo = if decision.verdict.is_effectively_free() { Some(classify_torus(w)?) } else { None };
    let oracle_verdict = oracle.map(|n| torus_fixed_point_oracle(w, n).verdict);
    Ok(Report {
        schema: SCHEMA.into(),
        input: InputEcho::Torus { raw: w.raw(), reduced: w.rows() },
        witness: decision.verdict.witness.clone(),
        normal_form: decision.normal_form().map(|n| n.normalized),
        verdict: decision.verdict,
        diffeo,
        w2: None,
        provenance: if oracle_verdict.is_some() { Provenance::Both } else { Provenance::Criterion },
        oracle_verdict,
    })
}

/// `a,b,c,d/e,f,g,h`.
pub fn parse_matrix(s: &str) -> Result<[[i64; 4]; 2]> {
    let rows: Vec<&str> = s.split('/').collect();
    if rows.len() != 2 {
        return Err(Error::invalid(format!("expected two rows separated by '/', got {s:?}")));
    }
    let mut m = [[0i64; 4]; 2];
    for (row, text) in m.iter_mut().zip(rows) {
        let entries: Vec<&str> = text.split(',').map(str::trim).collect();
        if entries.len() != 4 {
            return Err(Error::invalid(format!("row {text:?} needs four entries")));
        }
        for (slot, e) in row.iter_mut().zip(entries) {
            *slot = e.parse().map_err(|_| Error::invalid(format!("{e:?} is not an integer")))?;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct FormatArgs {
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Same as --format json.
    #[arg(long, global = true)]
    json: bool,
}

impl FormatArgs {
    fn resolve(&self, default: Format) -> Format {
        if self.json { Format::Json } else { self.format.unwrap_or(default) }
    }
}

#[derive(Debug, Subcommand)]
enum Subject {
    /// Circle action with exponents a b c d.
    #[command(allow_negative_numbers = true)]
    Circle { a: i64, b: i64, c: i64, d: i64 },
    /// Torus action with weight matrix "a,c,e,g/b,d,f,h".
    Torus {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
}

impl Subject {
    fn report(&self, oracle: Option<u64>) -> Result<Report> {
        match self {
            Subject::Circle { a, b, c, d } => circle_report(&CircleWeights::new([*a, *b, *c, *d])?, oracle),
            Subject::Torus { matrix } => torus_report(&TorusWeights::new(parse_matrix(matrix)?)?, oracle),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "biquotient", version, about = "Freeness and diffeomorphism type of torus biquotients of S³×S³")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide freeness of one action, optionally cross-checked by the oracle.
    Check {
        #[command(subcommand)]
        subject: Subject,
        /// Run the fixed-point oracle up to this element order.
        #[arg(long, global = true)]
        oracle: Option<u64>,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Print the diffeomorphism type of the quotient.
    Classify {
        #[command(subcommand)]
        subject: Subject,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Classify every action with entries in [−bound, bound], up to symmetry.
    Enumerate {
        #[arg(long, value_parser = ["4", "5"])]
        dim: String,
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Run the agreement sweeps.
    Verify {
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(i64).range(1..))]
        bound: i64,
        /// Oracle depth; automatic per action by default.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        oracle: Option<u64>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print the table of non-homogeneous biquotients in dimension 4 or 5.
    Catalog {
        dim: Option<u32>,
        #[arg(long = "dim", conflicts_with = "dim")]
        dim_flag: Option<u32>,
        #[command(flatten)]
        format: FormatArgs,
    },
}

fn emit_reports(reports: &[Report], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in reports {
                w.serialize(CsvRow::from(r)).map_err(|e| Error::Internal(e.to_string()))?;
            }
            w.flush().map_err(|e| Error::Internal(e.to_string()))?;
        }
        Format::Json | Format::Text => {
            for r in reports {
                let line = serde_json::to_string(r).map_err(|e| Error::Internal(e.to_string()))?;
                writeln!(out, "{line}").map_err(|e| Error::Internal(e.to_string()))?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub schema: String,
    pub dim: u32,
    pub bound: i64,
    /// Weight tuples in range before symmetry reduction.
    pub raw_count: u64,
    pub canonical_count: u64,
    /// Effectively free classes by type.
    pub histogram: BTreeMap<DiffeoType, u64>,
    pub status_counts: BTreeMap<Status, u64>,
}

pub struct Enumeration {
    pub reports: Vec<Report>,
    pub summary: EnumerationSummary,
}

pub fn enumerate(dim: u32, bound: i64) -> Result<Enumeration> {
    let (raw_count, reports) = match dim {
        5 => {
            let range = sweep::circle_range(bound);
            let reps: BTreeSet<[i64; 4]> = range.iter().map(|w| w.canonical().tuple()).collect();
            let reps: Vec<CircleWeights> = reps.into_iter().map(CircleWeights::new).collect::<Result<_>>()?;
            let reports: Result<Vec<Report>> = reps.par_iter().map(|w| circle_report(w, None)).collect();
            (range.len(), reports?)
        }
        4 => {
            let range = sweep::torus_range(bound);
            let keys: Vec<[[i64; 4]; 2]> = range.par_iter().map(canonical_key).collect();
            let reps: BTreeSet<[[i64; 4]; 2]> = keys.into_iter().collect();
            let reps: Vec<TorusWeights> = reps.into_iter().map(TorusWeights::new).collect::<Result<_>>()?;
            let reports: Result<Vec<Report>> = reps.par_iter().map(|w| torus_report(w, None)).collect();
            (range.len(), reports?)
        }
        other => return Err(Error::invalid(format!("dimension must be 4 or 5, not {other}"))),
    };
    let mut histogram = BTreeMap::new();
    let mut status_counts = BTreeMap::new();
    for r in &reports {
        *status_counts.entry(r.verdict.status).or_insert(0) += 1;
        if let Some(t) = r.diffeo {
            *histogram.entry(t).or_insert(0) += 1;
        }
    }
    let summary = EnumerationSummary {
        schema: SCHEMA.into(),
        dim,
        bound,
        raw_count: raw_count as u64,
        canonical_count: reports.len() as u64,
        histogram,
        status_counts,
    };
    Ok(Enumeration { reports, summary })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerifySummary {
    pub schema: String,
    pub bound: i64,
    pub passed: bool,
    pub suites: Vec<SuiteOutcome>,
}

#[derive(Debug, Serialize)]
struct CatalogDump<'a> {
    schema: &'a str,
    dimension: u32,
    entries: &'a [CatalogEntry],
}

fn aligned(entries: &[CatalogEntry]) -> String {
    let header = ["M", "G", "H", "H → G×G"];
    let rows: Vec<[&str; 4]> = entries
        .iter()
        .map(|e| [e.manifold.pretty(), e.group_g.as_str(), e.group_h.as_str(), e.embedding.as_str()])
        .collect();
    let width = |i: usize| {
        rows.iter().map(|r| r[i].chars().count()).chain([header[i].chars().count()]).max().unwrap_or(0)
    };
    let widths: Vec<usize> = (0..4).map(width).collect();
    let line = |r: &[&str; 4]| {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        cells.join("  ").trim_end().to_string()
    };
    let mut s = line(&header);
    s.push('\n');
    for r in &rows {
        s.push_str(&line(r));
        s.push('\n');
    }
    s
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Internal(e.to_string()))
}

fn io(e: std::io::Error) -> Error {
    Error::Internal(e.to_string())
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Check { subject, oracle, format } => {
            let report = subject.report(oracle)?;
            emit_reports(std::slice::from_ref(&report), format.resolve(Format::Json), out)?;
            if !report.consistent() {
                writeln!(err, "criterion and oracle disagree").map_err(io)?;
                return Ok(EXIT_MISMATCH);
            }
        }
        Command::Classify { subject, format } => {
            let report = subject.report(None)?;
            let Some(ty) = report.diffeo else {
                writeln!(err, "not effectively free: {}", report.verdict.status).map_err(io)?;
                if let Some(w) = &report.witness {
                    writeln!(err, "witness: {}", json(w)?).map_err(io)?;
                }
                return Ok(EXIT_INVALID);
            };
            match format.resolve(Format::Text) {
                Format::Text => writeln!(out, "{ty}").map_err(io)?,
                f => emit_reports(std::slice::from_ref(&report), f, out)?,
            }
        }
        Command::Enumerate { dim, bound, format } => {
            if bound < 0 {
                return Err(Error::invalid("bound must be nonnegative"));
            }
            let e = enumerate(dim.parse().expect("validated by clap"), bound)?;
            let format = format.resolve(Format::Json);
            emit_reports(&e.reports, format, out)?;
            match format {
                Format::Csv => writeln!(err, "{}", json(&e.summary)?).map_err(io)?,
                _ => writeln!(out, "{}", json(&e.summary)?).map_err(io)?,
            }
        }
        Command::Verify { bound, oracle, inject_fault } => {
            let mut config = VerifyConfig::new(bound, oracle);
            if inject_fault {
                config.circle_criterion = sweep::sign_flipped_criterion;
            }
            let suites = sweep::run_all(&config);
            let passed = suites.iter().all(SuiteOutcome::passed);
            for s in &suites {
                let mark = if s.passed() { "pass" } else { "FAIL" };
                writeln!(err, "{mark} {}: {} checked, {} mismatches", s.name, s.checked, s.mismatch_count)
                    .map_err(io)?;
            }
            let summary = VerifySummary { schema: SCHEMA.into(), bound, passed, suites };
            writeln!(out, "{}", json(&summary)?).map_err(io)?;
            if !passed {
                return Ok(EXIT_MISMATCH);
            }
        }
        Command::Catalog { dim, dim_flag, format } => {
            let dimension = dim.or(dim_flag).ok_or_else(|| Error::invalid("catalog needs a dimension"))?;
            let entries = catalog_lookup(dimension, None)?;
            match format.resolve(Format::Text) {
                Format::Json => {
                    let dump = CatalogDump { schema: SCHEMA, dimension, entries: &entries };
                    writeln!(out, "{}", json(&dump)?).map_err(io)?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["manifold", "group_g", "group_h", "embedding"]).map_err(|e| Error::Internal(e.to_string()))?;
                    for e in &entries {
                        w.write_record([e.manifold.tag(), &e.group_g, &e.group_h, &e.embedding])
                            .map_err(|e| Error::Internal(e.to_string()))?;
                    }
                    w.flush().map_err(io)?;
                }
                Format::Text => write!(out, "{}", aligned(&entries)).map_err(io)?,
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Internal(_) => EXIT_MISMATCH,
                _ => EXIT_INVALID,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("biquotient").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn check_circle_with_oracle() {
        let (code, out, _) = run_capture(&["check", "circle", "1", "0", "0", "1", "--oracle", "12"]);
        assert_eq!(code, 0);
        let r: Report = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(r.verdict.status, Status::Free);
        assert_eq!(r.diffeo, Some(DiffeoType::S3xS2));
        assert_eq!(r.w2, Some(0));
        assert_eq!(r.provenance, Provenance::Both);
    }

    #[test]
    fn check_torus() {
        let (code, out, _) = run_capture(&["check", "torus", "1,1,0,0/0,2,1,1"]);
        assert_eq!(code, 0);
        let r: Report = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(r.verdict.status, Status::Free);
        assert_eq!(r.diffeo, Some(DiffeoType::S2xS2));
        assert_eq!(r.schema, SCHEMA);
    }

    #[test]
    fn invalid_inputs_exit_one() {
        assert_eq!(run_capture(&["check", "circle", "0", "0", "0", "0"]).0, 1);
        assert_eq!(run_capture(&["check", "circle", "1", "x", "0", "0"]).0, 1);
        assert_eq!(run_capture(&["check", "torus", "1,2/3"]).0, 1);
        assert_eq!(run_capture(&["catalog", "7"]).0, 1);
        assert_eq!(run_capture(&["frobnicate"]).0, 1);
    }

    #[test]
    fn negative_entries_parse() {
        let (code, out, _) = run_capture(&["check", "circle", "-1", "0", "0", "1"]);
        assert_eq!(code, 0, "{out}");
        let (code, _, _) = run_capture(&["check", "torus", "-1,1,0,0/0,2,1,1"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn csv_columns() {
        let (code, out, _) = run_capture(&["check", "circle", "3", "2", "1", "0", "--format", "csv"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(
            lines.next().unwrap(),
            "raw_weights,reduced_weights,status,kernel_order,diffeo,w2,witness_order"
        );
        assert_eq!(lines.next().unwrap(), "\"3,2,1,0\",\"3,2,1,0\",effectively-free,2,S3twistS2,1,");
    }

    #[test]
    fn catalog_dumps() {
        let (code, out, _) = run_capture(&["catalog", "5", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), 2);
        let (code, out, _) = run_capture(&["catalog", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 11);
    }

    #[test]
    fn enumerate_small() {
        let e = enumerate(5, 2).unwrap();
        assert!(e.summary.histogram[&DiffeoType::S3xS2] > 0);
        assert!(e.summary.histogram[&DiffeoType::S3twistS2] > 0);
        assert!(e.summary.raw_count > e.summary.canonical_count);
        assert!(enumerate(5, 0).unwrap().summary.histogram.is_empty());
    }

    #[test]
    fn verify_with_fault_exits_two() {
        let (code, out, _) = run_capture(&["verify", "--bound", "1", "--inject-fault"]);
        assert_eq!(code, 2);
        let v: VerifySummary = serde_json::from_str(out.trim()).unwrap();
        assert!(!v.passed);
        assert!(v.suites.iter().any(|s| s.mismatches.iter().any(|m| !m.witnesses.is_empty())));
        assert_eq!(run_capture(&["verify", "--bound", "1"]).0, 0);
    }
}
