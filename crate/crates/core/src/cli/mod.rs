//! Library side of the command-line front end: `derive`, `verify` and `report`.

pub mod config;
pub mod report;
pub mod suites;

use std::fmt::Write as _;
use std::path::Path;

pub use config::{Dim, RunConfig, Settings, SUITES};
pub use report::{render, CheckRecord, Report};
pub use suites::run_suite;

use crate::error::{arg, Result};
use crate::opcalc::{a_operator, a_tilde, check_order, derivation_report, is_self_adjoint, rank_flow_check, specialize, NCPoly, MAX_R};

fn operator_text(p: &NCPoly, n: Option<Dim>) -> Result<String> {
    match n {
        Some(Dim::Value(n)) => Ok(specialize(p, n as i64)?.to_text()),
        _ => Ok(p.to_text()),
    }
}

fn flag(ok: bool) -> f64 {
    f64::from(u8::from(!ok))
}

/// Table of Ã^(m,r,l) and A^(m,r,l) for l = 0..r, with the structural checks of each A.
/// Defaults: m = 0, r = 0, symbolic n.
pub fn derive(cfg: &RunConfig) -> Result<(String, Report)> {
    let (m, r) = (cfg.m.unwrap_or(0), cfg.r.unwrap_or(0));
    if r > MAX_R {
        return arg(format!("r = {r} exceeds the depth cap {MAX_R}; refusing to derive"));
    }
    let mut rep = Report::new("derive", cfg.echo());
    let mut out = String::new();
    for l in 0..=r {
        let at = a_tilde(m, r, l)?;
        let a = a_operator(m, r, l)?;
        let _ = writeln!(out, "A~({m},{r},{l}) = {}", operator_text(&at, cfg.n)?);
        let _ = writeln!(out, "A({m},{r},{l}) = {}", operator_text(&a, cfg.n)?);
        let sa = is_self_adjoint(&a);
        let order = check_order(&a, l).is_ok();
        let flow = rank_flow_check(&a).is_ok();
        let yn = |b: bool| if b { "ok" } else { "FAILED" };
        let _ = writeln!(out, "  checks: self-adjoint {}, order 2l {}, rank flow {}", yn(sa), yn(order), yn(flow));
        let name = |what: &str| format!("A({m},{r},{l}) {what}");
        rep.checks.push(CheckRecord::at_most("derive", name("self-adjoint"), flag(sa), 0.0));
        rep.checks.push(CheckRecord::at_most("derive", name("order"), flag(order), 0.0));
        rep.checks.push(CheckRecord::at_most("derive", name("rank flow"), flag(flow), 0.0));
        rep.derivations.push(serde_json::to_value(derivation_report(m, r, l)?).expect("derivation reports serialize"));
    }
    Ok((out, rep))
}

/// Runs the configured suite (default "all").
pub fn verify(cfg: &RunConfig) -> Result<Report> {
    let suite = cfg.suite.as_deref().unwrap_or("all");
    let mut rep = Report::new("verify", cfg.echo());
    rep.config.insert("suite".into(), suite.to_string());
    rep.checks = run_suite(suite, cfg)?;
    Ok(rep)
}

/// Reads and renders one or more saved reports.
pub fn report<P: AsRef<Path>>(paths: &[P]) -> Result<String> {
    let reports = paths.iter().map(|p| Report::read(p.as_ref())).collect::<Result<Vec<_>>>()?;
    Ok(render(&reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_prints_known_operators() {
        let (text, rep) = derive(&RunConfig { m: Some(0), r: Some(0), ..RunConfig::default() }).unwrap();
        assert!(text.contains("A(0,0,0) = 1\n"), "{text}");
        assert!(rep.all_passed());
        let (text, _) = derive(&RunConfig { m: Some(1), r: Some(2), n: Some(Dim::Symbolic), ..RunConfig::default() }).unwrap();
        assert!(text.contains("A~(1,2,0) = (n-1) * 1\n"), "{text}");
        assert!(derive(&RunConfig { r: Some(MAX_R + 1), ..RunConfig::default() }).is_err());
    }
}
