//! `hg verify <suite>`: numerical identity checks with per-check residuals.

use std::fmt::Write as _;

use clap::Subcommand;
use rug::Float;
use serde::Serialize;

use super::{pre, to_json, CliError, GlobalOpts, Outcome, EXIT_OK, EXIT_VERIFY};
use crate::arith::{parse_rational_list, q, Rational};
use crate::contiguity::{verify_contiguity, OpKind};
use crate::eval::{euler_integral_check, gauss_derivative_check, Ball};
use crate::explicit_log::{branch_diagnostic, explicit_residual};
use crate::hodge::gauss_type_data;

/// Default residual bound for the Euler integral check, whose quadrature is heuristic.
pub const EULER_TOL: f64 = 1e-15;
/// Default precision for the explicit formula.
pub const EXPLICIT_LOG_PREC: u32 = 192;

#[derive(Subcommand, Debug)]
pub enum Suite {
    /// Quadrature of the Euler integral against the Gauss series.
    EulerIntegral {
        #[arg(long = "N")]
        big_n: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        n: u64,
        /// Kernel size of the character.
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long)]
        t: Rational,
    },
    /// Derivative identities of 2F1(β₁, β₂; β₁+β₂; t).
    GaussDerivative {
        #[arg(long)]
        beta1: Rational,
        #[arg(long)]
        beta2: Rational,
        #[arg(long)]
        t: Rational,
    },
    /// Contiguity identities of 3F2, one at a time or the built-in battery.
    Contiguity {
        /// Run every operator on the built-in parameter sets at x ∈ {1/4, 1/3, 1/2}.
        #[arg(long)]
        all: bool,
        #[arg(long, required_unless_present = "all")]
        kind: Option<OpKind>,
        /// Comma-separated a₁,a₂,a₃,b₁,b₂.
        #[arg(long, required_unless_present = "all")]
        params: Option<String>,
        #[arg(long, required_unless_present = "all")]
        x: Option<Rational>,
    },
    /// The closed logarithmic formula for 3F2(1,1,1/2; 7/6,11/6; x).
    ExplicitLog {
        #[arg(long)]
        x: Rational,
        /// Also report every root assignment and log policy.
        #[arg(long)]
        diagnose: bool,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub residual: Ball,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckLine>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<serde_json::Value>,
}

/// Parameter sets for `verify contiguity --all`, as `(a₁, a₂, a₃, b₁, b₂)`.
pub fn contiguity_battery() -> Vec<[Rational; 5]> {
    vec![
        [q(1, 1), q(1, 1), q(1, 2), q(7, 6), q(11, 6)],
        [q(1, 3), q(2, 5), q(3, 7), q(5, 4), q(7, 3)],
        [q(3, 2), q(-1, 3), q(5, 8), q(9, 7), q(11, 5)],
        [q(2, 3), q(1, 1), q(1, 6), q(1, 4), q(3, 2)],
    ]
}

fn below(b: &Ball, tol: Option<f64>) -> bool {
    tol.map_or(true, |t| b.abs_upper() <= Float::with_val(64, t))
}

fn line(name: String, residual: Ball, pass: bool) -> CheckLine {
    CheckLine { name, residual, pass }
}

pub fn run_suite(s: &Suite, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let report = match s {
        Suite::EulerIntegral { big_n, a, b, n, d, t } => {
            let data = gauss_type_data(*big_n, *a, *b, *n, *d).map_err(pre)?;
            let c = euler_integral_check(&data, t, g.prec()).map_err(pre)?;
            let tol = g.tol.unwrap_or(EULER_TOL);
            let pass = below(&c.residual, Some(tol));
            SuiteReport {
                suite: "euler-integral".into(),
                checks: vec![line(format!("N={big_n} a={a} b={b} n={n} t={t}"), c.residual, pass)],
                pass,
                diagnostic: None,
            }
        }
        Suite::GaussDerivative { beta1, beta2, t } => {
            let (r1, r2) = gauss_derivative_check(beta1, beta2, t, g.prec()).map_err(pre)?;
            let checks: Vec<CheckLine> = [("first", r1), ("second", r2)]
                .into_iter()
                .map(|(n, r)| {
                    let pass = r.contains_zero() && below(&r, g.tol);
                    line(format!("{n} identity at t={t}"), r, pass)
                })
                .collect();
            let pass = checks.iter().all(|c| c.pass);
            SuiteReport { suite: "gauss-derivative".into(), checks, pass, diagnostic: None }
        }
        Suite::Contiguity { all, kind, params, x } => {
            let mut cases = Vec::new();
            if *all {
                for p in contiguity_battery() {
                    for k in OpKind::ALL {
                        for xv in [q(1, 4), q(1, 3), q(1, 2)] {
                            cases.push((k, p.to_vec(), xv));
                        }
                    }
                }
            } else {
                let p = parse_rational_list(params.as_deref().unwrap_or_default())?;
                cases.push((kind.expect("required by clap"), p, x.clone().expect("required by clap")));
            }
            let mut checks = Vec::new();
            for (k, p, xv) in cases {
                let c = verify_contiguity(k, &p, &xv, g.prec()).map_err(pre)?;
                let pass = c.residual.contains_zero() && below(&c.residual, g.tol);
                let ps: Vec<String> = p.iter().map(|r| r.to_string()).collect();
                checks.push(line(format!("{k} ({}) x={xv}", ps.join(",")), c.residual, pass));
            }
            let pass = checks.iter().all(|c| c.pass);
            SuiteReport { suite: "contiguity".into(), checks, pass, diagnostic: None }
        }
        Suite::ExplicitLog { x, diagnose } => {
            let prec = g.prec.unwrap_or(EXPLICIT_LOG_PREC);
            let xb = Ball::from_rational(x, prec + 32);
            let r = explicit_residual(&xb, prec).map_err(pre)?;
            let tol = g.tol.map_or_else(|| Float::with_val(64, Float::i_exp(1, -80)), |t| Float::with_val(64, t));
            let pass = r.contains_zero() && *r.rad() < tol;
            let diagnostic = diagnose.then(|| serde_json::to_value(branch_diagnostic(&xb, prec)).expect("serializable"));
            SuiteReport {
                suite: "explicit-log".into(),
                checks: vec![line(format!("x={x} prec={prec}"), r, pass)],
                pass,
                diagnostic,
            }
        }
    };
    let code = if report.pass { EXIT_OK } else { EXIT_VERIFY };
    if g.json {
        return Ok(Outcome::with_code(to_json(&report), code));
    }
    let mut s = String::new();
    for c in &report.checks {
        let _ = writeln!(
            s,
            "{}  {}  residual mid {} rad {}{}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.residual.mid_string(),
            c.residual.rad_string(),
            if c.residual.is_heuristic() { " (heuristic)" } else { "" }
        );
    }
    if let Some(d) = &report.diagnostic {
        for row in d.as_array().into_iter().flatten() {
            let _ = writeln!(
                s,
                "  assignment {} policy {}: {}",
                row["assignment"],
                row["policy"].as_str().unwrap_or("?"),
                if row["satisfied"].as_bool() == Some(true) { "satisfied" } else { "fails" }
            );
        }
    }
    let _ = write!(s, "{}: {}", report.suite, if report.pass { "pass" } else { "FAIL" });
    Ok(Outcome::with_code(s, code))
}
