//! Command-line front end: JSON in, JSON or DOT out.
//!
//! Exit codes: 0 success, 2 input error, 3 verification failure. Every error is a single
//! `{"error": {"kind", "message"}}` line on stderr. Output depends only on the arguments.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dilworth::{dilworth, geometric_dilworth, relabel_complements};
use crate::dot::{graph_dot, lattice_dot};
use crate::error::Error;
use crate::foundation::{QMatrix, Subset};
use crate::linespace::{genericity_report, SubspaceInput};
use crate::matroid::Matroid;
use crate::pipeline::{analyze_lines, identity_suite, IdentityReport};
use crate::polyrel::{saturation_certificate, Fault, SaturationCertificate};
use crate::tropical::{
    bergman_chart, in_trop_linear_space, link_graph, smooth_degree2, trop_incidence_check, trop_plucker_check,
    TropPluecker, TropValue,
};

/// Guardrail on the ambient dimension; lifted by `--allow-large`.
pub const MAX_N: usize = 8;
/// Guardrail on the projective dimension; lifted by `--allow-large`.
pub const MAX_D: usize = 3;

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tropline",
    version,
    about = "Exact matroids, Dilworth truncations and Bergman fans of spaces of hyperplanes"
)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write each artifact to a file in this directory instead of stdout.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Comma-separated artifacts to produce (default: all of the command's artifacts).
    #[arg(long, global = true, value_delimiter = ',')]
    pub emit: Vec<String>,
    /// Lift the n ≤ 8, d ≤ 3 guardrails.
    #[arg(long, global = true)]
    pub allow_large: bool,
    /// Negative control for verify-identities.
    #[arg(long, global = true, hide = true, value_enum, default_value_t = FaultArg::None)]
    pub inject_fault: FaultArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    None,
    FlipFirstPhi,
    FlipBeta,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::None => Fault::None,
            FaultArg::FlipFirstPhi => Fault::FlipFirstPhi,
            FaultArg::FlipBeta => Fault::FlipBeta,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// U, V, the matroid of lines computed three ways, and a report on their agreement.
    LinesMatroid {
        #[arg(long)]
        input: PathBuf,
    },
    /// Whether the arrangement of lines is generic.
    Genericity {
        #[arg(long)]
        input: PathBuf,
    },
    /// Dilworth truncation of the free matroid on n elements.
    Dilworth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Relabel each flat by its complement.
        #[arg(long)]
        relabel: bool,
        /// Build the truncation from a seeded generic subspace instead of combinatorially.
        #[arg(long)]
        geometric: bool,
    },
    /// Bergman fan chart and link graph of a loopless matroid.
    Bergman {
        #[arg(long)]
        matroid: PathBuf,
    },
    /// Tropical Plücker, incidence and membership checks.
    Tropcheck {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: Option<PathBuf>,
        /// JSON array of tropical values tested for membership in the tropical linear space of p.
        #[arg(long)]
        point: Option<PathBuf>,
    },
    /// Exchange identities and saturation certificates over ranges of n and d.
    VerifyIdentities {
        /// A single value or an inclusive range such as 4..6.
        #[arg(long, value_parser = parse_range)]
        n: (usize, usize),
        #[arg(long, value_parser = parse_range)]
        d: (usize, usize),
    },
    /// Certificate that a power of Q_C times the Plücker relation R_{A,B} lies in the incidence ideal.
    CertifySaturation {
        /// Subset label such as "1" or "1,4"; empty for the empty set.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        b: String,
        /// Defaults to {1, …, |B|}.
        #[arg(long)]
        c: Option<String>,
    },
    /// Re-expands a certificate and checks it exactly.
    ReplayCertificate {
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Graphviz export of the lattice of flats and the Bergman link graph.
    ExportDot {
        #[arg(long)]
        matroid: PathBuf,
        #[arg(long)]
        lattice: bool,
        #[arg(long)]
        link: bool,
        /// Link graph with degree-2 vertices smoothed away (implies --link).
        #[arg(long)]
        smooth: bool,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad integer {t:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => (parse(s)?, parse(s)?),
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Input(m) => ("input", m),
            CliError::Verification(m) => ("verification", m),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Artifact {
    Json(Value),
    Dot(String),
}

impl Artifact {
    fn json<T: Serialize>(value: &T) -> Result<Self, CliError> {
        serde_json::to_value(value).map(Artifact::Json).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn render(&self) -> String {
        match self {
            Artifact::Json(v) => format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values serialize")),
            Artifact::Dot(s) => s.clone(),
        }
    }
}

/// Named artifacts in emission order, plus the verification failure to report after them.
#[derive(Debug, Default)]
pub struct Execution {
    pub artifacts: Vec<(String, Artifact)>,
    pub failure: Option<String>,
}

impl Execution {
    fn push(&mut self, name: &str, artifact: Artifact) {
        self.artifacts.push((name.to_string(), artifact));
    }

    fn fail_unless(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok && self.failure.is_none() {
            self.failure = Some(message());
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Input(format!("invalid {what} JSON in {}: {e}", path.display())))
}

fn parse_subset(label: &str) -> Result<Subset, CliError> {
    Ok(label.parse::<Subset>()?)
}

impl Cli {
    fn check_caps(&self, n: usize, d: Option<usize>) -> Result<(), CliError> {
        if self.allow_large {
            return Ok(());
        }
        if n > MAX_N || d.is_some_and(|d| d > MAX_D) {
            return Err(CliError::Input(format!(
                "n = {n}{} exceeds the guardrails n ≤ {MAX_N}, d ≤ {MAX_D}; pass --allow-large to override",
                d.map(|d| format!(", d = {d}")).unwrap_or_default()
            )));
        }
        Ok(())
    }

    fn subspace(&self, path: &Path) -> Result<SubspaceInput, CliError> {
        let x = SubspaceInput::from_json(&read(path)?)?;
        self.check_caps(x.n(), Some(x.d()))?;
        Ok(x)
    }

    /// Runs the command without touching stdout, stderr or the output directory.
    pub fn execute(&self) -> Result<Execution, CliError> {
        let mut out = Execution::default();
        match &self.command {
            Command::LinesMatroid { input } => {
                let a = analyze_lines(&self.subspace(input)?)?;
                let report = a.report();
                out.push("U.json", Artifact::json(&a.u)?);
                out.push("V.json", Artifact::json(&a.v)?);
                out.push("matroid.json", Artifact::json(&a.matroids)?);
                out.push("report.json", Artifact::json(&report)?);
                out.fail_unless(report.three_way_equality, || "the three matroids of lines differ".into());
                out.fail_unless(report.gale_duality, || "U and V are not Gale dual".into());
            }
            Command::Genericity { input } => {
                out.push("genericity.json", Artifact::json(&genericity_report(&self.subspace(input)?)?)?);
            }
            Command::Dilworth { n, k, relabel, geometric } => {
                self.check_caps(*n, None)?;
                if *k == 0 || k > n {
                    return Err(CliError::Input(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
                }
                let labels: Vec<String> = (1..=*n).map(|e| Subset::singleton(e).label()).collect();
                let mut m = if *geometric {
                    geometric_dilworth(&QMatrix::identity(*n), labels, *k, self.seed)?
                } else {
                    dilworth(&Matroid::uniform(*n, labels)?, *k)?
                };
                if *relabel {
                    m = relabel_complements(&m, *n)?;
                }
                out.push("matroid.json", Artifact::json(&m)?);
            }
            Command::Bergman { matroid } => {
                let m: Matroid = parse_json(matroid, "matroid")?;
                out.push("chart.json", Artifact::json(&bergman_chart(&m)?)?);
                out.push("link.dot", Artifact::Dot(graph_dot(&link_graph(&m)?, "link")));
            }
            Command::Tropcheck { p, q, point } => {
                let p: TropPluecker = parse_json(p, "tropical Plücker")?;
                let plucker = trop_plucker_check(&p);
                let incidence = match q {
                    Some(q) => Some(trop_incidence_check(&p, &parse_json(q, "tropical Plücker")?)?),
                    None => None,
                };
                let member = match point {
                    Some(x) => Some(in_trop_linear_space(&p, &parse_json::<Vec<TropValue>>(x, "tropical point")?)?),
                    None => None,
                };
                out.push(
                    "tropcheck.json",
                    Artifact::Json(json!({ "plucker": plucker, "incidence": incidence, "member": member })),
                );
                out.fail_unless(plucker, || "p violates a tropical Plücker relation".into());
                out.fail_unless(incidence != Some(false), || "p and q violate a tropical incidence relation".into());
                out.fail_unless(member != Some(false), || "the point is not in the tropical linear space of p".into());
            }
            Command::VerifyIdentities { n, d } => {
                self.check_caps(n.1, Some(d.1))?;
                let mut reports: Vec<IdentityReport> = Vec::new();
                for d in d.0.max(1)..=d.1 {
                    for n in n.0.max(d + 1)..=n.1 {
                        reports.push(identity_suite(n, d, self.inject_fault.into())?);
                    }
                }
                if reports.is_empty() {
                    return Err(CliError::Input("no (n, d) with 1 ≤ d < n in the given ranges".into()));
                }
                let passed = reports.iter().all(IdentityReport::passed);
                out.push("identities.json", Artifact::Json(json!({ "passed": passed, "reports": reports })));
                out.fail_unless(passed, || {
                    let first = reports.iter().flat_map(|r| &r.failures).next().expect("a failure");
                    format!(
                        "{} fails at A = {:?}, B = {:?}, C = {:?}, element {:?}",
                        first.identity, first.a, first.b, first.c, first.element
                    )
                });
            }
            Command::CertifySaturation { a, b, c } => {
                let (a, b) = (parse_subset(a)?, parse_subset(b)?);
                let c = match c {
                    Some(c) => parse_subset(c)?,
                    None => Subset::full(b.len()),
                };
                let n = a.union(b).union(c).max().unwrap_or(0);
                self.check_caps(n, Some(b.len().saturating_sub(1)))?;
                let cert = saturation_certificate(a, b, c)?;
                let replayed = cert.replay()?;
                out.push("certificate.json", Artifact::json(&cert)?);
                out.fail_unless(replayed, || "the certificate does not replay".into());
            }
            Command::ReplayCertificate { certificate } => {
                let cert: SaturationCertificate = parse_json(certificate, "certificate")?;
                let replayed = cert.replay()?;
                out.push(
                    "replay.json",
                    Artifact::Json(json!({ "target": cert.target, "exponent": cert.exponent, "replayed": replayed })),
                );
                out.fail_unless(replayed, || "the certificate does not replay".into());
            }
            Command::ExportDot { matroid, lattice, link, smooth } => {
                let m: Matroid = parse_json(matroid, "matroid")?;
                let want_link = *link || *smooth;
                if *lattice || !want_link {
                    out.push("lattice.dot", Artifact::Dot(lattice_dot(&m)));
                }
                if want_link {
                    let mut g = link_graph(&m)?;
                    if *smooth {
                        g = smooth_degree2(&g)?;
                    }
                    out.push("link.dot", Artifact::Dot(graph_dot(&g, "link")));
                }
            }
        }
        self.select(out)
    }

    /// Keeps the artifacts named by `--emit`, matching either the file name or its stem.
    fn select(&self, mut out: Execution) -> Result<Execution, CliError> {
        if self.emit.is_empty() {
            return Ok(out);
        }
        let stem = |name: &str| name.rsplit_once('.').map_or(name, |(s, _)| s).to_string();
        for wanted in &self.emit {
            if !out.artifacts.iter().any(|(name, _)| name == wanted || stem(name) == *wanted) {
                let known: Vec<&str> = out.artifacts.iter().map(|(n, _)| n.as_str()).collect();
                return Err(CliError::Input(format!("unknown artifact {wanted:?}; available: {}", known.join(", "))));
            }
        }
        out.artifacts.retain(|(name, _)| self.emit.iter().any(|w| w == name || *w == stem(name)));
        Ok(out)
    }

    /// Writes artifacts to the output directory, or to `stdout` when none is given.
    fn deliver(&self, exec: &Execution, stdout: &mut dyn Write) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Input(format!("cannot write output: {e}"));
        match &self.output_dir {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(io)?;
                let mut written = Vec::new();
                for (name, artifact) in &exec.artifacts {
                    let path = dir.join(name);
                    fs::write(&path, artifact.render()).map_err(io)?;
                    written.push(path.display().to_string());
                }
                writeln!(stdout, "{}", json!({ "written": written })).map_err(io)
            }
            None => match exec.artifacts.as_slice() {
                [(_, single)] => stdout.write_all(single.render().as_bytes()).map_err(io),
                many => {
                    let mut map = serde_json::Map::new();
                    for (name, artifact) in many {
                        let value = match artifact {
                            Artifact::Json(v) => v.clone(),
                            Artifact::Dot(s) => Value::String(s.clone()),
                        };
                        map.insert(name.clone(), value);
                    }
                    stdout.write_all(Artifact::Json(Value::Object(map)).render().as_bytes()).map_err(io)
                }
            },
        }
    }
}

/// Full run with explicit streams; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return EXIT_SUCCESS;
        }
        Err(e) => return report(&CliError::Input(e.to_string().trim_end().to_string()), stderr),
    };
    let result = cli.execute().and_then(|exec| {
        cli.deliver(&exec, stdout)?;
        exec.failure.map_or(Ok(()), |m| Err(CliError::Verification(m)))
    });
    match result {
        Ok(()) => EXIT_SUCCESS,
        Err(e) => report(&e, stderr),
    }
}

fn report(e: &CliError, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "{}", e.to_json());
    e.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("tropline").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("5"), Ok((5, 5)));
        assert_eq!(parse_range("4..6"), Ok((4, 6)));
        assert_eq!(parse_range("4..=6"), Ok((4, 6)));
        assert!(parse_range("6..4").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn dilworth_of_free_matroid() {
        let (code, out, err) = run_args(&["dilworth", "--n", "4", "--k", "2", "--relabel"]);
        assert_eq!(code, 0, "{err}");
        let m: Matroid = serde_json::from_str(&out).unwrap();
        assert_eq!((m.len(), m.rank()), (6, 3));
        assert_eq!(m.ground(), ["3,4", "2,4", "1,4", "2,3", "1,3", "1,2"]);
    }

    #[test]
    fn guardrails_and_override() {
        let (code, _, err) = run_args(&["dilworth", "--n", "9", "--k", "1"]);
        assert_eq!(code, EXIT_INPUT);
        let e: Value = serde_json::from_str(&err).unwrap();
        assert_eq!(e["error"]["kind"], "input");
        let (code, _, _) = run_args(&["--allow-large", "dilworth", "--n", "9", "--k", "1"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn verification_failure_exit_code() {
        let (code, out, err) = run_args(&["verify-identities", "--n", "4", "--d", "1", "--inject-fault", "flip-beta"]);
        assert_eq!(code, EXIT_VERIFICATION);
        let report: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(report["passed"], false);
        assert!(err.contains("moveB fails at"));
        let (code, _, _) = run_args(&["verify-identities", "--n", "4..5", "--d", "1..2"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn certificate_with_empty_a() {
        let (code, out, err) = run_args(&["certify-saturation", "--a", "", "--b", "1,2"]);
        assert_eq!(code, 0, "{err}");
        let cert: SaturationCertificate = serde_json::from_str(&out).unwrap();
        assert!(cert.replay().unwrap());
    }

    #[test]
    fn parse_errors_are_json() {
        let (code, _, err) = run_args(&["dilworth", "--n", "four"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(serde_json::from_str::<Value>(&err).unwrap()["error"]["message"].is_string());
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("lines-matroid"));
    }

    #[test]
    fn emit_selection() {
        let (code, out, _) = run_args(&["dilworth", "--n", "3", "--k", "2", "--emit", "matroid"]);
        assert_eq!(code, 0);
        assert!(out.starts_with('{'));
        let (code, _, err) = run_args(&["dilworth", "--n", "3", "--k", "2", "--emit", "nope"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("available: matroid.json"));
    }
}
