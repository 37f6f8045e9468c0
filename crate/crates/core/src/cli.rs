//! The `slp` command line: ideal selectors and files, the `check`, `gb` and
//! `hilbert` subcommands, and the JSON report.
//!
//! Exit codes: 0 when the requested property holds (or the dump succeeded),
//! 1 on a definitive failure, 2 on any input or validation error. Everything
//! is written once, after all work is done.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coxeter::{
    h4_coinvariant_ideal, h4_lambda, h4_natural_ideal, monomial_ci_ideal, type_a_coinvariant_ideal,
    CoinvariantIdealSpec, CoxeterError,
};
use crate::field::{FieldError, FieldSpec};
use crate::groebner::{buchberger_with, BuchbergerOptions, GroebnerError};
use crate::lefschetz::{
    check_candidate, CandidateElement, LefschetzError, LefschetzReport, Mode, Strategy,
};
use crate::poly::{PolyError, Polynomial, RingContext, TermOrder};

pub const TOOL_VERSION: &str = concat!("slp ", env!("CARGO_PKG_VERSION"));

const DETERMINISM_NOTE: &str =
    "no randomness is used; every field except timings is reproducible from the input";

const DEFAULT_PRIME: u64 = 13;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {msg}")]
    IdealFile { line: usize, msg: String },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Lefschetz(#[from] LefschetzError),
}

impl CliError {
    /// Machine-readable error class.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::IdealFile { .. } => "ideal_file",
            CliError::Io { .. } => "io",
            CliError::Field(_) | CliError::Coxeter(CoxeterError::Field(_)) => "field",
            CliError::Poly(PolyError::Parse { .. }) => "parse",
            CliError::Poly(_) | CliError::Coxeter(_) => "invalid_input",
            CliError::Groebner(GroebnerError::NotArtinian(_))
            | CliError::Lefschetz(LefschetzError::NotArtinian(_)) => "not_artinian",
            CliError::Groebner(_) => "groebner",
            CliError::Lefschetz(LefschetzError::WrongTermOrder(_)) => "wrong_term_order",
            CliError::Lefschetz(LefschetzError::ZeroCandidate) => "zero_candidate",
            CliError::Lefschetz(LefschetzError::Poly(PolyError::Parse { .. })) => "parse",
            CliError::Lefschetz(_) => "invalid_input",
        }
    }
}

/// A named built-in ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    /// H4 coinvariants in `v1 > v2 > v3 > l`.
    H4,
    /// H4 coinvariants in `x1..x4`, candidate `lambda`.
    H4Natural,
    /// Symmetric-group coinvariants in `n` variables.
    TypeA(usize),
    /// `<x1^a1, ..., xn^an>`.
    Ci(Vec<u32>),
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("unknown type {s:?}; expected h4, h4-natural, a<n> or ci:<a1,a2,...>");
        match s {
            "h4" => Ok(Selector::H4),
            "h4-natural" => Ok(Selector::H4Natural),
            _ => {
                if let Some(n) = s.strip_prefix('a') {
                    return n.parse().map(Selector::TypeA).map_err(|_| bad());
                }
                let list = s.strip_prefix("ci:").ok_or_else(bad)?;
                list.split(',')
                    .map(|a| a.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Selector::Ci)
            }
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::H4 => f.write_str("h4"),
            Selector::H4Natural => f.write_str("h4-natural"),
            Selector::TypeA(n) => write!(f, "a{n}"),
            Selector::Ci(e) => {
                let parts: Vec<String> = e.iter().map(u32::to_string).collect();
                write!(f, "ci:{}", parts.join(","))
            }
        }
    }
}

impl Selector {
    fn field(&self, p: u64) -> Result<FieldSpec, FieldError> {
        match self {
            Selector::H4 | Selector::H4Natural => FieldSpec::golden(p),
            _ => FieldSpec::prime(p),
        }
    }

    /// The ideal over `F_p` (or `F_{p^2}` for H4).
    pub fn build(&self, p: u64) -> Result<IdealFile, CliError> {
        let k = self.field(p)?;
        let (spec, candidate): (CoinvariantIdealSpec, Option<Polynomial>) = match self {
            Selector::H4 => (h4_coinvariant_ideal(k)?, None),
            Selector::H4Natural => (h4_natural_ideal(k)?, Some(h4_lambda(k)?)),
            Selector::TypeA(n) => (type_a_coinvariant_ideal(*n, k)?, None),
            Selector::Ci(e) => (monomial_ci_ideal(e, k)?, None),
        };
        Ok(IdealFile {
            ctx: spec.ctx,
            generators: spec.generators,
            candidate,
        })
    }
}

/// A line-oriented ideal description:
///
/// ```text
/// field: GF(13^2) tau^2-tau-1
/// vars: v1 > v2 > v3 > l
/// order: grevlex
/// <one homogeneous generator per line>
/// lefschetz: <linear form>        (optional)
/// ```
///
/// Blank lines and lines starting with `#` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealFile {
    pub ctx: Arc<RingContext>,
    pub generators: Vec<Polynomial>,
    pub candidate: Option<Polynomial>,
}

impl IdealFile {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        let mut lines = src
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let mut header = |key: &str| -> Result<(usize, String), CliError> {
            let (line, text) = lines.next().ok_or_else(|| CliError::IdealFile {
                line: src.lines().count(),
                msg: format!("missing `{key}:` header"),
            })?;
            let value = text
                .strip_prefix(key)
                .and_then(|r| r.trim_start().strip_prefix(':'))
                .ok_or_else(|| CliError::IdealFile {
                    line,
                    msg: format!("expected `{key}:` header"),
                })?;
            Ok((line, value.trim().to_string()))
        };
        let at = |line: usize| {
            move |e: &dyn fmt::Display| CliError::IdealFile {
                line,
                msg: e.to_string(),
            }
        };

        let (line, field) = header("field")?;
        let field: FieldSpec = field.parse().map_err(|e: FieldError| at(line)(&e))?;
        let (line, vars) = header("vars")?;
        let vars: Vec<String> = vars.split('>').map(|v| v.trim().to_string()).collect();
        let (order_line, order) = header("order")?;
        let order: TermOrder = order.parse().map_err(|e: PolyError| at(order_line)(&e))?;
        let ctx = RingContext::new(field, &vars, order).map_err(|e| at(line)(&e))?;

        let mut generators = Vec::new();
        let mut candidate = None;
        for (line, text) in lines {
            if candidate.is_some() {
                return Err(CliError::IdealFile {
                    line,
                    msg: "nothing may follow the `lefschetz:` line".into(),
                });
            }
            if let Some(form) = text.strip_prefix("lefschetz:") {
                let l = Polynomial::parse(&ctx, form.trim()).map_err(|e| at(line)(&e))?;
                l.linear_coefficients().map_err(|e| at(line)(&e))?;
                candidate = Some(l);
                continue;
            }
            let g = Polynomial::parse(&ctx, text).map_err(|e| at(line)(&e))?;
            if !g.is_homogeneous() {
                return Err(CliError::IdealFile {
                    line,
                    msg: format!("generator {text:?} is not homogeneous"),
                });
            }
            generators.push(g);
        }
        Ok(IdealFile {
            ctx,
            generators,
            candidate,
        })
    }
}

impl fmt::Display for IdealFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field: {}", self.ctx.field())?;
        writeln!(f, "vars: {}", self.ctx.vars().join(" > "))?;
        writeln!(f, "order: {}", self.ctx.order())?;
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        if let Some(l) = &self.candidate {
            writeln!(f, "lefschetz: {l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "slp",
    version,
    about = "Gröbner bases and Lefschetz-property certificates for graded Artinian quotients"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the strong (or weak) Lefschetz property for a candidate.
    Check(CheckArgs),
    /// Print the reduced Gröbner basis, one generator per line.
    Gb(DumpArgs),
    /// Print the Hilbert function of the quotient.
    Hilbert(DumpArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Built-in ideal: h4, h4-natural, a<n> or ci:<a1,a2,...>.
    #[arg(
        long = "type",
        value_name = "TYPE",
        conflicts_with = "ideal",
        required_unless_present = "ideal"
    )]
    pub selector: Option<Selector>,
    /// Ideal file.
    #[arg(long, value_name = "FILE")]
    pub ideal: Option<PathBuf>,
    /// Characteristic for built-in ideals; repeat for independent runs.
    #[arg(long = "prime", value_name = "P")]
    pub primes: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Linear form to test; defaults to the file's `lefschetz:` line, then
    /// to the last variable.
    #[arg(long, value_name = "FORM")]
    pub candidate: Option<String>,
    /// Check the weak property (s = 1) instead of the strong one.
    #[arg(long)]
    pub weak: bool,
    /// Check every (i, s) even when the Hilbert function is symmetric.
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Stop at this degree; needed for quotients that are not Artinian.
    #[arg(long, value_name = "D")]
    pub max_degree: Option<u32>,
}

/// One resolved input: either a built-in at one prime or a file.
struct Job {
    label: String,
    kind: &'static str,
    prime: Option<u64>,
    load: Box<dyn Fn() -> Result<(IdealFile, String), CliError>>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn jobs(input: &InputArgs) -> Result<Vec<Job>, CliError> {
    if let Some(path) = &input.ideal {
        if !input.primes.is_empty() {
            return Err(CliError::Usage(
                "--prime applies to --type only; an ideal file names its own field".into(),
            ));
        }
        let path = path.clone();
        return Ok(vec![Job {
            label: path.display().to_string(),
            kind: "file",
            prime: None,
            load: Box::new(move || {
                let bytes = std::fs::read(&path).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    msg: e.to_string(),
                })?;
                let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    msg: e.to_string(),
                })?;
                Ok((IdealFile::parse(&text)?, sha256_hex(&bytes)))
            }),
        }]);
    }
    let selector = input
        .selector
        .clone()
        .ok_or_else(|| CliError::Usage("one of --type or --ideal is required".into()))?;
    let primes = if input.primes.is_empty() {
        vec![DEFAULT_PRIME]
    } else {
        input.primes.clone()
    };
    Ok(primes
        .into_iter()
        .map(|p| {
            let sel = selector.clone();
            Job {
                label: selector.to_string(),
                kind: "type",
                prime: Some(p),
                load: Box::new(move || {
                    let file = sel.build(p)?;
                    let hash = sha256_hex(file.to_string().as_bytes());
                    Ok((file, hash))
                }),
            }
        })
        .collect())
}

/// The JSON document written by `check` for one run.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub input: InputInfo,
    pub prime: u32,
    pub field: String,
    pub determinism: &'static str,
    #[serde(flatten)]
    pub report: LefschetzReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub kind: &'static str,
    pub name: String,
    pub sha256: String,
}

fn error_json(e: &CliError, job: Option<&Job>) -> serde_json::Value {
    let mut obj = json!({
        "tool": TOOL_VERSION,
        "error": { "kind": e.kind(), "message": e.to_string() },
    });
    if let Some(job) = job {
        obj["input"] = json!({ "kind": job.kind, "name": job.label });
        if let Some(p) = job.prime {
            obj["prime"] = json!(p);
        }
    }
    obj
}

fn run_check(args: &CheckArgs, job: &Job) -> Result<ReportDocument, CliError> {
    let t = Instant::now();
    let (file, sha256) = (job.load)()?;
    let construction = t.elapsed().as_secs_f64();
    let form = match (&args.candidate, &file.candidate) {
        (Some(s), _) => Polynomial::parse(&file.ctx, s)?,
        (None, Some(l)) => l.clone(),
        (None, None) => Polynomial::var(&file.ctx, file.ctx.nvars() - 1),
    };
    let candidate = CandidateElement::new(form)?;
    let mode = if args.weak { Mode::Weak } else { Mode::Strong };
    let strategy = if args.exhaustive {
        Strategy::Exhaustive
    } else {
        Strategy::Auto
    };
    let mut report = check_candidate(&file.generators, &candidate, mode, strategy)?;
    report.timings.construction = construction;
    Ok(ReportDocument {
        tool: TOOL_VERSION,
        input: InputInfo {
            kind: job.kind,
            name: job.label.clone(),
            sha256,
        },
        prime: file.ctx.field().characteristic(),
        field: file.ctx.field().to_string(),
        determinism: DETERMINISM_NOTE,
        report,
    })
}

fn summary(doc: &ReportDocument) -> String {
    let r = &doc.report;
    let head = format!(
        "{} over {}: {} Lefschetz property for {}",
        doc.input.name,
        doc.field,
        r.mode.name(),
        r.candidate
    );
    let detail = format!(
        "{}/{} degree checks, dim {}, socle {}, {} Hilbert function, GB {} elements up to degree {}, {:.2}s",
        r.passed(),
        r.checks.len(),
        r.dimension,
        r.socle,
        if r.symmetric { "symmetric" } else { "non-symmetric" },
        r.gb_stats.size,
        r.gb_stats.maxdeg,
        r.timings.construction
            + r.timings.substitution
            + r.timings.groebner
            + r.timings.standard_monomials
            + r.timings.degree_checks,
    );
    match r.first_failure {
        None => format!("{head} HOLDS ({detail})"),
        Some((i, s)) => {
            let check = r
                .checks
                .iter()
                .find(|c| (c.i, c.s) == (i, s))
                .expect("listed");
            let witness = check
                .witness
                .as_ref()
                .map(|w| format!(", witness {} ({:?})", w.monomial, w.kind))
                .unwrap_or_default();
            format!(
                "{head} FAILS at i = {i}, s = {s}: rank {} < {}{witness} ({detail})",
                check.rank, check.full_rank
            )
        }
    }
}

fn cmd_check(args: &CheckArgs, out: &mut String, err: &mut String) -> Result<i32, CliError> {
    let jobs = jobs(&args.input)?;
    let mut code = 0;
    let mut docs = Vec::new();
    for job in &jobs {
        match run_check(args, job) {
            Ok(doc) => {
                err.push_str(&summary(&doc));
                err.push('\n');
                if !doc.report.verdict {
                    code = code.max(1);
                }
                docs.push(serde_json::to_value(&doc).expect("serializable"));
            }
            Err(e) => {
                err.push_str(&format!("{}: error: {e}\n", job.label));
                code = 2;
                docs.push(error_json(&e, Some(job)));
            }
        }
    }
    let value = if docs.len() == 1 {
        docs.pop().expect("one")
    } else {
        serde_json::Value::Array(docs)
    };
    out.push_str(&serde_json::to_string_pretty(&value).expect("serializable"));
    out.push('\n');
    Ok(code)
}

fn dump(
    args: &DumpArgs,
    out: &mut String,
    err: &mut String,
    body: impl Fn(&IdealFile, Option<u32>) -> Result<String, CliError>,
) -> Result<i32, CliError> {
    let jobs = jobs(&args.input)?;
    let mut code = 0;
    for job in &jobs {
        if jobs.len() > 1 {
            out.push_str(&format!("# {} p = {}\n", job.label, job.prime.unwrap_or(0)));
        }
        match (job.load)().and_then(|(file, _)| body(&file, args.max_degree)) {
            Ok(text) => out.push_str(&text),
            Err(e) => {
                err.push_str(&format!("{}: error: {e}\n", job.label));
                out.push_str(&serde_json::to_string(&error_json(&e, Some(job))).expect("json"));
                out.push('\n');
                code = 2;
            }
        }
    }
    Ok(code)
}

fn gb_text(file: &IdealFile, cap: Option<u32>) -> Result<String, CliError> {
    let gb = buchberger_with(
        &file.generators,
        &file.ctx,
        BuchbergerOptions { degree_cap: cap },
    )?;
    Ok(gb
        .sorted_elements()
        .iter()
        .map(|g| format!("{g}\n"))
        .collect())
}

fn hilbert_text(file: &IdealFile, cap: Option<u32>) -> Result<String, CliError> {
    let gb = buchberger_with(
        &file.generators,
        &file.ctx,
        BuchbergerOptions { degree_cap: cap },
    )?;
    let artinian = gb.initial_ideal().is_artinian();
    let basis = gb.standard_monomials(if artinian { None } else { cap })?;
    let hf = basis.hilbert_function();
    let values: Vec<String> = hf.values.iter().map(u64::to_string).collect();
    let mut text = format!("{}\n", values.join(" "));
    if artinian {
        text.push_str(&format!(
            "symmetric: {}\nsocle: {}\ntotal: {}\n",
            hf.is_symmetric(),
            hf.socle_degree().unwrap_or(0),
            hf.total()
        ));
    } else {
        text.push_str(&format!(
            "artinian: false (truncated at degree {})\n",
            cap.unwrap_or(0)
        ));
    }
    Ok(text)
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut stdout = String::new();
    let mut stderr = String::new();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr,
                };
            }
            let err = CliError::Usage(e.to_string());
            stdout = format!("{}\n", error_json(&err, None));
            return Outcome {
                code: 2,
                stdout,
                stderr: e.to_string(),
            };
        }
    };
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a, &mut stdout, &mut stderr),
        Command::Gb(a) => dump(a, &mut stdout, &mut stderr, gb_text),
        Command::Hilbert(a) => dump(a, &mut stdout, &mut stderr, hilbert_text),
    };
    let code = result.unwrap_or_else(|e| {
        stderr.push_str(&format!("error: {e}\n"));
        stdout.push_str(&format!("{}\n", error_json(&e, None)));
        2
    });
    Outcome {
        code,
        stdout,
        stderr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("slp").chain(args.iter().copied()))
    }

    #[test]
    fn selectors_parse_and_print() {
        for s in ["h4", "h4-natural", "a3", "ci:3,3", "ci:2,3,4"] {
            assert_eq!(s.parse::<Selector>().unwrap().to_string(), s);
        }
        assert!("b3".parse::<Selector>().is_err());
        assert!("ci:".parse::<Selector>().is_err());
        assert!("ax".parse::<Selector>().is_err());
    }

    #[test]
    fn ideal_file_round_trip() {
        let src = "field: GF(13^2) tau^2-tau-1\nvars: v1 > v2 > v3 > l\norder: grevlex\nv1^2 + tau*v2*l\nv3^3 - l^3\nlefschetz: v1 + (1 - tau)*l\n";
        let f = IdealFile::parse(src).unwrap();
        assert_eq!(f.generators.len(), 2);
        assert_eq!(f.to_string(), src);
        assert_eq!(IdealFile::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn ideal_file_tolerates_comments() {
        let src = "# squares\nfield: GF(7)\n\nvars: x>y\norder : grevlex\nx^2\n# second\ny^2\n";
        let f = IdealFile::parse(src).unwrap();
        assert_eq!(
            f.to_string(),
            "field: GF(7)\nvars: x > y\norder: grevlex\nx^2\ny^2\n"
        );
    }

    #[test]
    fn ideal_file_errors_carry_line_numbers() {
        let cases = [
            ("vars: x\n", 1, "field"),
            (
                "field: GF(11)\nvars: x > y\norder: grevlex\nx^2 + y\n",
                4,
                "homogeneous",
            ),
            (
                "field: GF(11)\nvars: x > y\norder: grevlex\nx^2 +\n",
                4,
                "parse",
            ),
            (
                "field: GF(11)\nvars: x > y\norder: degrevlex\n",
                3,
                "term order",
            ),
            (
                "field: GF(11^2) tau^2-tau-1\nvars: x\norder: grevlex\n",
                1,
                "tau",
            ),
            (
                "field: GF(7)\nvars: x > y\norder: grevlex\nlefschetz: x\ny^2\n",
                5,
                "follow",
            ),
            (
                "field: GF(7)\nvars: x > y\norder: grevlex\nlefschetz: x*y\n",
                4,
                "linear",
            ),
        ];
        for (src, line, needle) in cases {
            match IdealFile::parse(src) {
                Err(CliError::IdealFile { line: l, msg }) => {
                    assert_eq!(l, line, "{src:?}: {msg}");
                    assert!(msg.contains(needle), "{src:?}: {msg}");
                }
                other => panic!("{src:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn hilbert_of_ci() {
        let o = run_args(&["hilbert", "--type", "ci:3,3"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout, "1 2 3 2 1\nsymmetric: true\nsocle: 4\ntotal: 9\n");
    }

    #[test]
    fn hilbert_needs_a_cap_when_not_artinian() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("line.ideal");
        std::fs::write(&path, "field: GF(7)\nvars: x > y\norder: grevlex\nx^2\n").unwrap();
        let p = path.to_str().unwrap();
        let o = run_args(&["hilbert", "--ideal", p]);
        assert_eq!(o.code, 2);
        assert!(o.stdout.contains("not_artinian"));
        let o = run_args(&["hilbert", "--ideal", p, "--max-degree", "4"]);
        assert_eq!(o.code, 0);
        assert_eq!(
            o.stdout,
            "1 2 2 2 2\nartinian: false (truncated at degree 4)\n"
        );
    }

    #[test]
    fn type_a_candidates_exit_codes() {
        let o = run_args(&["check", "--type", "a3", "--candidate", "x3", "--prime", "7"]);
        assert_eq!(o.code, 1, "{}", o.stderr);
        let o = run_args(&[
            "check",
            "--type",
            "a3",
            "--candidate",
            "x1 + 2*x2 + 3*x3",
            "--prime",
            "7",
        ]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["verdict"], true);
        assert_eq!(v["prime"], 7);
        assert_eq!(v["hilbert"], json!([1, 2, 2, 1]));
    }

    #[test]
    fn usage_errors_exit_two() {
        for args in [
            vec!["check"],
            vec!["check", "--type", "b2"],
            vec!["check", "--type", "h4", "--prime", "11"],
            vec!["check", "--type", "a3", "--prime", "9"],
            vec!["check", "--type", "a3", "--candidate", "x1*x2"],
            vec!["check", "--type", "a3", "--candidate", "0"],
            vec!["check", "--ideal", "/nonexistent/file"],
            vec!["frobnicate"],
        ] {
            let o = run_args(&args);
            assert_eq!(o.code, 2, "{args:?}");
            let v: serde_json::Value = serde_json::from_str(o.stdout.trim()).unwrap();
            assert!(v["error"]["kind"].is_string(), "{args:?}");
            assert!(v.get("verdict").is_none());
        }
    }

    #[test]
    fn rejected_prime_explains_the_congruence() {
        let o = run_args(&["check", "--type", "h4", "--prime", "11"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["error"]["kind"], "field");
        assert!(v["error"]["message"].as_str().unwrap().contains("(mod 5)"));
    }

    #[test]
    fn multi_prime_runs_report_each_prime() {
        // (x1 + x2)^3 = x1^3 + x2^3 vanishes modulo <x1^2, x2^3> in characteristic 3
        let args = [
            "check",
            "--type",
            "ci:2,3",
            "--candidate",
            "x1 + x2",
            "--prime",
            "3",
            "--prime",
            "5",
        ];
        let o = run_args(&args);
        assert_eq!(o.code, 1);
        let o = run_args(&[&args[..], &["--prime", "4"]].concat());
        assert_eq!(o.code, 2);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        let runs = v.as_array().unwrap();
        assert_eq!(runs.len(), 3);
        assert_eq!(runs[0]["prime"], 3);
        assert_eq!(runs[0]["verdict"], false);
        assert_eq!(runs[1]["verdict"], true);
        assert_eq!(runs[2]["error"]["kind"], "field");
    }

    #[test]
    fn weak_and_strong_on_squares() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ci22.ideal");
        std::fs::write(
            &path,
            "field: GF(13)\nvars: x > y\norder: grevlex\nx^2\ny^2\n",
        )
        .unwrap();
        let p = path.to_str().unwrap();
        let o = run_args(&["check", "--ideal", p, "--candidate", "y"]);
        assert_eq!(o.code, 1);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["checks"][0]["i"], 0);
        assert_eq!(v["checks"][0]["pass"], false);
        assert_eq!(v["checks"][0]["witness"]["monomial"], "1");
        assert!(o.stderr.contains("FAILS at i = 0"));
        let o = run_args(&["check", "--ideal", p, "--candidate", "y", "--weak"]);
        assert_eq!(o.code, 0);
    }
}
