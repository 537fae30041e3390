//! Argument parsing, dispatch and report output.

use crate::campaigns;
use clap::{Args, Parser, Subcommand, ValueEnum};
use flatcliff::algebra::check_ai_semiring;
use flatcliff::classes::{check_in_class, Class};
use flatcliff::congruences::{all_congruences, classify_si, monolith};
use flatcliff::constructions::with_clifford_inverse;
use flatcliff::enumerate::{enumerate, EnumError, EnumOptions, EnumSpec, Filter};
use flatcliff::expr::parse_algebra;
use flatcliff::groups::check_group_axioms;
use flatcliff::quasivar::{in_qvar, join_equals, qvar_relation, verify_pentagon, Membership, PentagonKind, PentagonSpec, SearchConfig};
use flatcliff::report::{combine, Report, Verdict};
use flatcliff::terms::{parse_quasi_identity, satisfies, schema, Dialect, DEFAULT_BUDGET};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

pub const REPORT_FORMAT_VERSION: u32 = 1;
pub const BUDGET_ENV: &str = "FLATCLIFF_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "flatcliff", version, about = "Finite verification of identities, congruences and quasivarieties of ai-semirings")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Write the JSON report (the census for `enumerate`) to PATH
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Search budget; overrides FLATCLIFF_BUDGET
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Worker threads
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Shuffle homomorphism candidates with this seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Include wall-clock times in the output
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    OddSquare,
    FourP,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one schema or identity on one algebra
    Check {
        #[arg(long)]
        algebra: String,
        #[arg(long, conflicts_with = "identity", required_unless_present = "identity")]
        schema: Option<String>,
        /// Identity or quasi-identity text, e.g. "x*y = y*x"
        #[arg(long)]
        identity: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Check the ai-semiring (or group) axioms
    Axioms {
        #[arg(long)]
        algebra: String,
    },
    /// List all congruences and the monolith
    Congruences {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = flatcliff::congruences::DEFAULT_SIZE_BOUND)]
        bound: usize,
    },
    /// Class membership and subdirect irreducibility
    Classify {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Quasivariety relations between groups
    Qvar {
        #[command(subcommand)]
        query: QvarQuery,
    },
    /// Check the pentagon in the lattice of group quasivarieties
    Pentagon {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 3)]
        p: usize,
        /// Permit p = 5
        #[arg(long)]
        allow_large: bool,
    },
    /// Enumerate ai-semirings of one order up to isomorphism
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "all-ai")]
        filter: String,
        #[arg(long, default_value_t = 1)]
        n: u64,
        /// List every labelled copy instead of one per isomorphism type
        #[arg(long)]
        labelled: bool,
        /// Required for order 5
        #[arg(long)]
        allow_order5: bool,
        /// Wall-clock limit in seconds
        #[arg(long)]
        time_limit: Option<u64>,
    },
    /// Lemma and proposition checks over the fixture corpus
    VerifyLemmas {
        #[arg(long)]
        n: u64,
    },
    /// Both directions of the group/semiring correspondence on fixtures
    VerifyTheorem {
        #[arg(long)]
        n: u64,
    },
    /// Equivalence of the two bases on the census
    VerifyBasis {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = campaigns::CENSUS_ORDER)]
        order: usize,
    },
    /// Pointed semidiscriminator and power-term checks
    PsCheck {
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum QvarQuery {
    /// Is A in the quasivariety generated by B?
    Le { a: String, b: String },
    /// Relation between qvar{A} and qvar{B}
    Rel { a: String, b: String },
    /// Is qvar{A} join qvar{B} equal to qvar{T}?
    Join { a: String, b: String, t: String },
}

/// Outcome of one command: reports plus the configuration to echo.
pub struct Outcome {
    pub command: String,
    pub config: Value,
    pub reports: Vec<Report>,
    /// Human-readable lines printed before the reports.
    pub preamble: Vec<String>,
}

#[derive(Debug)]
pub struct UsageError(pub String);

fn usage<E: std::fmt::Display>(e: E) -> UsageError {
    UsageError(e.to_string())
}

pub fn resolve_budget(flag: Option<u64>) -> Result<u64, UsageError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| UsageError(format!("{BUDGET_ENV} must be an integer, got '{v}'"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

pub fn exit_code(reports: &[Report]) -> i32 {
    match combine(reports.iter().map(|r| r.verdict)) {
        Verdict::Fail => EXIT_FAIL,
        Verdict::Unknown => EXIT_UNKNOWN,
        _ => EXIT_OK,
    }
}

fn membership_verdict(m: Membership) -> Verdict {
    match m {
        Membership::True => Verdict::Pass,
        Membership::False => Verdict::Fail,
        Membership::Unknown => Verdict::Unknown,
    }
}

fn group_arg(expr: &str) -> Result<flatcliff::groups::Group, UsageError> {
    let g = parse_algebra(expr).map_err(usage)?.as_group(expr).map_err(usage)?;
    Ok(g.with_name(expr))
}

pub fn execute(command: &Command, budget: u64, seed: Option<u64>) -> Result<Outcome, UsageError> {
    let search = SearchConfig { budget, seed };
    let mut preamble = Vec::new();
    let (name, config, reports) = match command {
        Command::Check { algebra, schema: key, identity, n } => {
            let a = parse_algebra(algebra).map_err(usage)?.into_algebra();
            let (claim, dialect, texts) = match (key, identity) {
                (Some(key), _) => {
                    let s = schema(key).map_err(usage)?;
                    (format!("schema-{key}"), s.dialect, s.texts(*n))
                }
                (None, Some(text)) => {
                    let dialect = if a.signature().contains("add") { Dialect::Semiring } else { Dialect::Group };
                    ("identity".to_string(), dialect, vec![text.clone()])
                }
                (None, None) => return Err(UsageError("one of --schema or --identity is required".into())),
            };
            let a = if dialect == Dialect::Clifford && !a.signature().contains("inv") {
                with_clifford_inverse(&a, *n).map_err(usage)?
            } else {
                a
            };
            let mut reports = Vec::new();
            for text in &texts {
                let q = parse_quasi_identity(text, dialect).map_err(usage)?;
                let r = satisfies(&a, &q, *n, budget).map_err(usage)?;
                reports.push(r.with_claim(format!("{claim}: {text}")));
            }
            let verdict = combine(reports.iter().map(|r| r.verdict));
            let mut out = vec![Report::new(&claim, verdict, format!("{} identities on {algebra}", texts.len()))];
            out.extend(reports);
            ("check", json!({"algebra": algebra, "schema": key, "identity": identity, "n": n}), out)
        }
        Command::Axioms { algebra } => {
            let a = parse_algebra(algebra).map_err(usage)?.into_algebra();
            let r = if a.signature().contains("add") {
                check_ai_semiring(&a).map_err(usage)?
            } else {
                check_group_axioms(&a).map_err(usage)?
            };
            ("axioms", json!({"algebra": algebra}), vec![r])
        }
        Command::Congruences { algebra, bound } => {
            let a = parse_algebra(algebra).map_err(usage)?.into_algebra();
            let lattice = all_congruences(&a, *bound).map_err(usage)?;
            for (i, c) in lattice.congruences.iter().enumerate() {
                preamble.push(format!("cong#{i} {c}"));
            }
            let m = monolith(&a);
            preamble.push(match &m {
                Some(m) => format!("monolith {m}"),
                None => "no monolith".to_string(),
            });
            let r = Report::pass("congruences", format!("{} congruences", lattice.len()))
                .with_witness(json!({"congruences": lattice.congruences, "monolith": m}));
            ("congruences", json!({"algebra": algebra, "bound": bound}), vec![r])
        }
        Command::Classify { algebra, n } => {
            let a = parse_algebra(algebra).map_err(usage)?.into_algebra();
            let mut reports = Vec::new();
            for class in [Class::Sr, Class::M, Class::N] {
                reports.push(check_in_class(&a, class, *n, budget).map_err(usage)?);
            }
            reports.push(classify_si(&a, *n, budget).map_err(usage)?);
            // non-membership is an answer, not a failed claim
            for r in &mut reports {
                if r.verdict == Verdict::Fail && r.claim.starts_with("in-") {
                    r.verdict = Verdict::Inapplicable;
                    r.detail = format!("not a member: {}", r.detail);
                }
            }
            reports.sort_by(|x, y| x.claim.cmp(&y.claim));
            ("classify", json!({"algebra": algebra, "n": n}), reports)
        }
        Command::Qvar { query } => {
            let (config, r) = match query {
                QvarQuery::Le { a, b } => {
                    let (ga, gb) = (group_arg(a)?, group_arg(b)?);
                    let m = in_qvar(&ga, &gb, search);
                    let r = Report::new(format!("qvar-le:{a}<={b}"), membership_verdict(m.membership), format!("{a} in qvar{{{b}}}: {}", m.membership))
                        .with_witness(json!({"kernel_meet": m.kernel_meet, "certificate_factors": m.certificate_factors}))
                        .with_evaluations(m.checks);
                    (json!({"query": "le", "a": a, "b": b}), r)
                }
                QvarQuery::Rel { a, b } => {
                    let (ga, gb) = (group_arg(a)?, group_arg(b)?);
                    let (rel, checks) = qvar_relation(&ga, &gb, search);
                    let verdict = if rel == flatcliff::quasivar::QvarRelation::Unknown { Verdict::Unknown } else { Verdict::Pass };
                    let r = Report::new(format!("qvar-rel:{a}|{b}"), verdict, format!("relation {rel}"))
                        .with_witness(json!({"relation": rel}))
                        .with_evaluations(checks);
                    (json!({"query": "rel", "a": a, "b": b}), r)
                }
                QvarQuery::Join { a, b, t } => {
                    let (ga, gb, gt) = (group_arg(a)?, group_arg(b)?, group_arg(t)?);
                    let (m, checks) = join_equals(&ga, &gb, &gt, search);
                    let r = Report::new(format!("qvar-join:{a}v{b}={t}"), membership_verdict(m), format!("join equals qvar{{{t}}}: {m}"))
                        .with_evaluations(checks);
                    (json!({"query": "join", "a": a, "b": b, "t": t}), r)
                }
            };
            ("qvar", config, vec![r])
        }
        Command::Pentagon { kind, p, allow_large } => {
            let kind = match kind {
                KindArg::OddSquare => PentagonKind::OddSquare,
                KindArg::FourP => PentagonKind::FourP,
            };
            let spec = PentagonSpec::new(kind, *p, *allow_large).map_err(usage)?;
            ("pentagon", json!({"kind": kind.as_str(), "p": p}), verify_pentagon(&spec, search))
        }
        Command::Enumerate { .. } => unreachable!("handled by run_enumerate"),
        Command::VerifyLemmas { n } => {
            nonzero(*n)?;
            ("verify-lemmas", json!({"n": n}), campaigns::verify_lemmas(*n, budget).map_err(usage)?)
        }
        Command::VerifyTheorem { n } => {
            nonzero(*n)?;
            ("verify-theorem", json!({"n": n}), campaigns::verify_theorem(*n, budget).map_err(usage)?)
        }
        Command::VerifyBasis { n, order } => {
            nonzero(*n)?;
            let options = EnumOptions { budget, ..EnumOptions::default() };
            ("verify-basis", json!({"n": n, "order": order}), campaigns::verify_basis(*n, *order, budget, options).map_err(usage)?)
        }
        Command::PsCheck { n } => {
            if let Some(n) = n {
                nonzero(*n)?;
            }
            ("ps-check", json!({"n": n}), campaigns::ps_check(*n, budget).map_err(usage)?)
        }
    };
    let mut config = config;
    config["budget"] = json!(budget);
    if matches!(command, Command::Qvar { .. } | Command::Pentagon { .. }) {
        config["seed"] = json!(seed);
    }
    Ok(Outcome { command: name.to_string(), config, reports, preamble })
}

fn nonzero(n: u64) -> Result<(), UsageError> {
    if n == 0 {
        return Err(UsageError("--n must be at least 1".into()));
    }
    Ok(())
}

/// The JSON report document. Wall-clock time is only included on request,
/// so that reports are byte-identical across runs by default.
pub fn report_document(outcome: &Outcome, elapsed: Option<Duration>) -> Value {
    let mut doc = json!({
        "format": "flatcliff-report",
        "version": REPORT_FORMAT_VERSION,
        "command": outcome.command,
        "config": outcome.config,
        "verdict": combine(outcome.reports.iter().map(|r| r.verdict)),
        "reports": outcome.reports,
    });
    if let Some(t) = elapsed {
        doc["elapsed_ms"] = json!(t.as_millis() as u64);
    }
    doc
}

fn write_json(path: &PathBuf, v: &Value) -> Result<(), UsageError> {
    let text = serde_json::to_string_pretty(v).expect("serialisable") + "\n";
    std::fs::write(path, text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))
}

fn run_enumerate(cli: &Cli, budget: u64, out: &mut dyn Write) -> Result<i32, UsageError> {
    let Command::Enumerate { order, filter, n, labelled, allow_order5, time_limit } = &cli.command else {
        unreachable!()
    };
    let filter: Filter = filter.parse().map_err(UsageError)?;
    let spec = EnumSpec { order: *order, filter, n: *n, up_to_iso: !labelled };
    let options = EnumOptions { budget, allow_order5: *allow_order5, time_limit: time_limit.map(Duration::from_secs) };
    let start = Instant::now();
    let census = match enumerate(spec, options) {
        Ok(c) => c,
        Err(e @ (EnumError::BudgetExceeded(_) | EnumError::TimeLimit(_))) => {
            let r = Report::unknown(format!("census-order{order}-{filter}-n{n}"), e.to_string());
            writeln!(out, "{r}").ok();
            return Ok(EXIT_UNKNOWN);
        }
        Err(e) => return Err(usage(e)),
    };
    for (k, v) in &census.counts {
        writeln!(out, "{k}: {v}").ok();
    }
    let r = Report::pass(
        format!("census-order{order}-{filter}-n{n}"),
        format!("{} algebras, provenance {}", census.algebras.len(), census.provenance),
    );
    writeln!(out, "{r}").ok();
    if cli.global.timing {
        writeln!(out, "elapsed: {} ms", start.elapsed().as_millis()).ok();
    }
    if let Some(path) = &cli.global.json {
        write_json(path, &census.to_json())?;
    }
    Ok(EXIT_OK)
}

fn run_parsed(cli: &Cli, out: &mut dyn Write) -> Result<i32, UsageError> {
    let budget = resolve_budget(cli.global.budget)?;
    if let Some(jobs) = cli.global.jobs {
        if jobs == 0 {
            return Err(UsageError("--jobs must be at least 1".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    if matches!(cli.command, Command::Enumerate { .. }) {
        return run_enumerate(cli, budget, out);
    }
    let start = Instant::now();
    let outcome = execute(&cli.command, budget, cli.global.seed)?;
    let elapsed = cli.global.timing.then(|| start.elapsed());
    for line in &outcome.preamble {
        writeln!(out, "{line}").ok();
    }
    for r in &outcome.reports {
        writeln!(out, "{r}").ok();
    }
    let verdict = combine(outcome.reports.iter().map(|r| r.verdict));
    writeln!(out, "overall: {verdict}").ok();
    if let Some(t) = elapsed {
        writeln!(out, "elapsed: {} ms", t.as_millis()).ok();
    }
    if let Some(path) = &cli.global.json {
        write_json(path, &report_document(&outcome, elapsed))?;
    }
    Ok(exit_code(&outcome.reports))
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    write!(out, "{e}").ok();
                    EXIT_OK
                }
                _ => {
                    write!(err, "{e}").ok();
                    EXIT_USAGE
                }
            };
        }
    };
    match run_parsed(&cli, out) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            writeln!(err, "error: {msg}").ok();
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["flatcliff"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
    }

    #[test]
    fn check_flat_c3() {
        let (code, text) = run_capture(&["check", "--algebra", "flat(C3)", "--schema", "srn", "--n", "3"]);
        assert_eq!(code, EXIT_OK, "{text}");
        assert!(text.contains("[PASS] schema-srn"));
        let (code, _) = run_capture(&["check", "--algebra", "flat(C3)", "--schema", "srn", "--n", "2"]);
        assert_eq!(code, EXIT_FAIL);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["check", "--algebra", "flat(C3"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["check", "--algebra", "C3", "--schema", "nope"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["verify-lemmas", "--n", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["pentagon", "--kind", "four-p", "--p", "4"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn unknown_on_tiny_budget() {
        let (code, text) = run_capture(&["check", "--algebra", "flat(C3)", "--schema", "srn", "--n", "3", "--budget", "2"]);
        assert_eq!(code, EXIT_UNKNOWN, "{text}");
    }

    #[test]
    fn classify_flat() {
        let (code, text) = run_capture(&["classify", "--algebra", "flat(C2)", "--n", "2"]);
        assert_eq!(code, EXIT_OK, "{text}");
        assert!(text.contains("[PASS] si-equivalence"));
        // C3 flat is not in M_2: reported, not failed
        let (code, _) = run_capture(&["classify", "--algebra", "flat(C3)", "--n", "2"]);
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn qvar_queries() {
        let (code, text) = run_capture(&["qvar", "le", "C3", "C9"]);
        assert_eq!(code, EXIT_OK, "{text}");
        let (code, _) = run_capture(&["qvar", "le", "C9", "C3"]);
        assert_eq!(code, EXIT_FAIL);
        let (code, text) = run_capture(&["qvar", "rel", "C2", "C3"]);
        assert_eq!(code, EXIT_OK);
        assert!(text.contains("incomparable"));
        let (code, _) = run_capture(&["qvar", "join", "C2", "C3", "C6"]);
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn congruences_listing() {
        let (code, text) = run_capture(&["congruences", "--algebra", "flat(C2)"]);
        assert_eq!(code, EXIT_OK);
        assert!(text.contains("cong#0 {0}{1}{2}"));
        assert!(text.contains("cong#1 {0,1,2}"));
    }
}
