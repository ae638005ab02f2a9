//! The `hg` command line: argument parsing, dispatch and output formatting.
//!
//! Every subcommand is a thin shell over a library operation. Exit codes are stable:
//! 0 ok, 1 parse error, 2 precondition failure, 3 I/O error, 4 verification failure.

pub mod scan;
pub mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::arith::mat2::Mat2Display;
use crate::arith::{parse_rational_list, ArithError, Rational};
use crate::criteria::{classify, HGParams, Label};
use crate::eval::{pfq, pfq_at_1, Ball};
use crate::hodge::{
    canonical_frame, connection_matrix, d_chi, d_chi_all, delta_decomposition, hodge_triple, residue_eigenvalues_in_frame,
    residue_in_frame, tate_check, HodgeInput, SingularPoint,
};
use crate::regulator::{det0_closed_form, det_scan, e_det, RecurrenceParams};

pub use scan::{run_scan, ScanConfig, ScanRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 128;

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Parse(String),
    Precondition(String),
    Io(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::Io(_) => EXIT_IO,
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Precondition(m) | CliError::Io(m) | CliError::Verification(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Io(e.to_string())
    }
}

impl From<ArithError> for CliError {
    fn from(e: ArithError) -> CliError {
        match e {
            ArithError::Parse(_) | ArithError::ZeroDenominator(_) => CliError::Parse(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

/// Module errors other than parsing are precondition failures.
fn pre<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Precondition(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "hg", version, about = "Logarithmic-formula toolkit for 3F2(1,1,q; a,b; x)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Working precision in bits.
    #[arg(long, global = true)]
    pub prec: Option<u32>,
    /// Pass/fail threshold on residual magnitudes.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

impl GlobalOpts {
    pub fn prec(&self) -> u32 {
        self.prec.unwrap_or(DEFAULT_PREC)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate both interlacing criteria for (q, a, b) and assign a label.
    Classify(TripleArgs),
    /// Classify every triple with bounded denominators and write JSONL.
    Scan(ScanArgs),
    /// Enclose pFq(upper; lower; x) in a ball.
    Eval(EvalArgs),
    /// Hodge numbers and the Tate condition for (mu, β₁, β₂).
    Hodge(HodgeArgs),
    /// Gauss–Manin connection and canonical-extension residues for (β₁, β₂).
    Gm(GmArgs),
    /// Exact non-vanishing scan of the E-pair determinant.
    Detscan(DetscanArgs),
    /// Run a numerical verification suite.
    #[command(subcommand)]
    Verify(verify::Suite),
}

#[derive(Args, Debug)]
pub struct TripleArgs {
    #[arg(long)]
    pub q: Rational,
    #[arg(long)]
    pub a: Rational,
    #[arg(long)]
    pub b: Rational,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Largest denominator of q, a, b.
    #[arg(long)]
    pub max_den: u64,
    /// Output file (JSONL).
    #[arg(long)]
    pub out: std::path::PathBuf,
    /// Keep both orders of (a, b).
    #[arg(long)]
    pub no_dedup: bool,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Comma-separated upper parameters.
    #[arg(long)]
    pub upper: String,
    /// Comma-separated lower parameters.
    #[arg(long)]
    pub lower: String,
    #[arg(long)]
    pub x: Rational,
}

#[derive(Args, Debug)]
pub struct HodgeArgs {
    #[arg(long)]
    pub mu: Rational,
    #[arg(long)]
    pub beta1: Rational,
    #[arg(long)]
    pub beta2: Rational,
}

#[derive(Args, Debug)]
pub struct GmArgs {
    #[arg(long)]
    pub beta1: Rational,
    #[arg(long)]
    pub beta2: Rational,
}

#[derive(Args, Debug)]
pub struct DetscanArgs {
    #[arg(long)]
    pub mu: Rational,
    #[arg(long)]
    pub beta1: Rational,
    #[arg(long)]
    pub beta2: Rational,
    #[arg(long, default_value_t = 50)]
    pub rmax: u64,
}

/// Output of a successful or failed subcommand: text to print and an exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, code: EXIT_OK }
    }

    fn with_code(text: String, code: i32) -> Outcome {
        Outcome { text, code }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable output")
}

/// Parses `args` (including the program name) and runs the command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
            let target: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            if !o.text.is_empty() && writeln!(out, "{}", o.text.trim_end()).is_err() {
                return EXIT_IO;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Classify(t) => cmd_classify(t, g),
        Command::Scan(s) => {
            let config = ScanConfig { max_denominator: s.max_den, output: s.out.clone(), dedup: !s.no_dedup, parallelism: s.jobs };
            let n = run_scan(&config)?;
            let text = if g.json {
                to_json(&json!({ "records": n, "output": config.output }))
            } else {
                format!("wrote {n} records to {}", config.output.display())
            };
            Ok(Outcome::ok(text))
        }
        Command::Eval(e) => cmd_eval(e, g),
        Command::Hodge(h) => cmd_hodge(h, g),
        Command::Gm(m) => cmd_gm(m, g),
        Command::Detscan(d) => cmd_detscan(d, g),
        Command::Verify(s) => verify::run_suite(s, g),
    }
}

fn cmd_classify(t: &TripleArgs, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let p = HGParams::new(t.q.clone(), t.a.clone(), t.b.clone());
    let r = classify(&p).map_err(pre)?;
    let code = if r.label == Label::FailsPreconditions { EXIT_PRECONDITION } else { EXIT_OK };
    if g.json {
        return Ok(Outcome::with_code(to_json(&r), code));
    }
    let mut s = String::new();
    let _ = writeln!(s, "q = {}, a = {}, b = {}, N = {}", r.q, r.a, r.b, r.modulus);
    if !r.violations.is_empty() {
        let v: Vec<String> = r.violations.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "violations: {}", v.join(", "));
    } else {
        let _ = writeln!(s, "{:>6}  {:>5}  {:>5}", "s", "eq1", "eq2");
        for (k, v1) in &r.eq1 {
            let _ = writeln!(s, "{:>6}  {:>5}  {:>5}", k, v1, r.eq2[k]);
        }
    }
    let _ = writeln!(s, "bh = {}, converges at 1 = {}", r.bh, r.converges_at_1);
    let _ = write!(s, "label: {}", r.label);
    Ok(Outcome::with_code(s, code))
}

fn ball_line(name: &str, b: &Ball) -> String {
    format!("{name} = {b}{}", if b.is_heuristic() { "  (heuristic)" } else { "" })
}

fn cmd_eval(e: &EvalArgs, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let upper = parse_rational_list(&e.upper)?;
    let lower = parse_rational_list(&e.lower)?;
    let prec = g.prec();
    let one = Rational::one();
    let value = if e.x == one {
        match (&upper[..], &lower[..]) {
            ([u1, u2, q], [a, b]) if *u1 == one && *u2 == one => pfq_at_1(q, a, b, prec).map_err(pre)?,
            _ => return Err(CliError::Precondition("x = 1 is only supported for 3F2(1,1,q; a,b; 1)".into())),
        }
    } else {
        pfq(&upper, &lower, &Ball::from_rational(&e.x, prec), prec).map_err(pre)?
    };
    let text = if g.json { to_json(&value) } else { ball_line("value", &value) };
    Ok(Outcome::ok(text))
}

fn cmd_hodge(h: &HodgeArgs, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let input = HodgeInput::new(h.mu.clone(), h.beta1.clone(), h.beta2.clone());
    let d = d_chi(&input).map_err(pre)?;
    let delta = delta_decomposition(&input).map_err(pre)?;
    let triple = hodge_triple(d).map_err(pre)?;
    let tate = tate_check(&input).map_err(pre)?;
    let classes: Vec<(u64, u8)> = d_chi_all(&input).map_err(pre)?.into_iter().map(|(s, d)| (s.residue(), d)).collect();
    if g.json {
        let v = json!({
            "input": input, "d_chi": d, "delta": delta, "hodge": triple,
            "tate": tate, "d_chi_by_class": classes.iter().map(|(s, d)| (s.to_string(), *d)).collect::<std::collections::BTreeMap<_, _>>(),
        });
        return Ok(Outcome::ok(to_json(&v)));
    }
    let mut s = String::new();
    let _ = writeln!(s, "d_chi = {d}  (δ₁ = {}, δ₂ = {})", delta[0], delta[1]);
    let _ = writeln!(s, "(h20, h11, h02) = ({}, {}, {})", triple.h20, triple.h11, triple.h02);
    let per: Vec<String> = classes.iter().map(|(s, d)| format!("{s}:{d}")).collect();
    let _ = writeln!(s, "d_chi by unit class: {}", per.join(" "));
    let _ = write!(s, "Tate type (1,1) for all conjugates: {tate}");
    Ok(Outcome::ok(s))
}

fn cmd_gm(m: &GmArgs, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let conn = connection_matrix(&m.beta1, &m.beta2).map_err(pre)?;
    let mut points = Vec::new();
    for p in [SingularPoint::Zero, SingularPoint::One] {
        let frame = canonical_frame(&m.beta1, &m.beta2, p).map_err(pre)?;
        let res = residue_in_frame(&m.beta1, &m.beta2, p).map_err(pre)?;
        let ev = residue_eigenvalues_in_frame(&m.beta1, &m.beta2, p).map_err(pre)?;
        points.push((p, frame, res, ev));
    }
    let all_ok = points.iter().all(|(_, _, _, ev)| ev.in_unit_interval());
    let code = if all_ok { EXIT_OK } else { EXIT_VERIFY };
    if g.json {
        let pts: Vec<_> = points
            .iter()
            .map(|(p, frame, res, ev)| {
                json!({
                    "point": p.to_string(),
                    "frame": Mat2Display { matrix: frame, var: "t" },
                    "residue": res,
                    "eigenvalues": ev,
                    "in_unit_interval": ev.in_unit_interval(),
                })
            })
            .collect();
        let v = json!({ "connection": Mat2Display { matrix: &conn, var: "t" }, "points": pts });
        return Ok(Outcome::with_code(to_json(&v), code));
    }
    let mut s = String::new();
    let rows = conn.rows();
    let _ = writeln!(s, "connection: [[{}, {}], [{}, {}]]", rows[0][0].display_in("t"), rows[0][1].display_in("t"), rows[1][0].display_in("t"), rows[1][1].display_in("t"));
    for (p, _, res, ev) in &points {
        let _ = writeln!(
            s,
            "t = {p}: residue [[{}, {}], [{}, {}]], eigenvalues {}, in [0,1): {}",
            res[0][0],
            res[0][1],
            res[1][0],
            res[1][1],
            serde_json::to_string(ev).unwrap_or_default(),
            ev.in_unit_interval()
        );
    }
    Ok(Outcome::with_code(s, code))
}

fn cmd_detscan(d: &DetscanArgs, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let p = RecurrenceParams::new(d.mu.clone(), d.beta1.clone(), d.beta2.clone()).map_err(pre)?;
    let failing = det_scan(&p, d.rmax).map_err(pre)?;
    let det0 = e_det(&p, 0).map_err(pre)?;
    let closed = det0_closed_form(&p, &p.mu).map_err(pre)?;
    let closed_ok = det0 == closed;
    let code = if closed_ok && failing.is_empty() { EXIT_OK } else { EXIT_VERIFY };
    if g.json {
        let v = json!({
            "params": p, "rmax": d.rmax, "failing": failing,
            "det0": det0.display_in("λ"), "det0_closed_form_ok": closed_ok,
        });
        return Ok(Outcome::with_code(to_json(&v), code));
    }
    let list: Vec<String> = failing.iter().map(u64::to_string).collect();
    let text = format!(
        "vanishing determinants for r ≤ {}: [{}]\nr = 0 determinant: {}\nclosed form at r = 0: {}",
        d.rmax,
        list.join(", "),
        det0.display_in("λ"),
        if closed_ok { "ok" } else { "MISMATCH" }
    );
    Ok(Outcome::with_code(text, code))
}
