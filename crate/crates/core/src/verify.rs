//! Self-checks: closed forms against the generic torsion algorithm,
//! assembly identities, golden catalogs and convergence bounds.

use serde::Serialize;

use crate::char_variety::{enumerate_components, Catalog};
use crate::exact::Log2Multiple;
use crate::model_complexes::{
    circle_acyclic_all_n, circle_complex, circle_log_torsion, torus_acyclic_all_n, torus_complex, CircleRep, TorusRep,
};
use crate::seifert::{assembled_log_torsion, max_limit, seifert_log_torsion, SeifertIndex, SeifertRep};
use crate::sl2_rep::{sym_power, ConjClassDescriptor};
use crate::surgery_brieskorn::{brieskorn_leading_limit_exact, johnson_classify, TorusKnotExterior};
use crate::torsion_core::{check_multiplicativity, is_acyclic, split_sequence, torsion, torsion_with, LiftStrategy};
use crate::{Error, Result};

/// Names of the checks, in the order they run.
pub const CHECK_NAMES: [&str; 8] = [
    "circle_oracle",
    "torus_triviality",
    "acyclicity_predicates",
    "pivot_independence",
    "multiplicativity",
    "assembly_identity",
    "golden_catalogs",
    "convergence_bound",
];

const GOLDEN: [(&str, &str); 3] = [
    ("sigma_2_3_7", include_str!("../golden/sigma_2_3_7.json")),
    ("sigma_2_3_5_7", include_str!("../golden/sigma_2_3_5_7.json")),
    ("sigma_5_6_7", include_str!("../golden/sigma_5_6_7.json")),
];

/// Options for [`run`].
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Restrict to small oracles (`N ≤ 25`) and short convergence runs.
    pub quick: bool,
    /// Adds `epsilon` to every closed-form value inside the named check, as
    /// a negative control.
    pub perturb: Option<(String, f64)>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub max_deviation: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    worst: f64,
    failure: Option<String>,
    tol: f64,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Tally { name, cases: 0, worst: 0.0, failure: None, tol }
    }

    fn deviation(&mut self, dev: f64, what: impl FnOnce() -> String) {
        self.cases += 1;
        let dev = if dev.is_nan() { f64::INFINITY } else { dev };
        if dev > self.worst {
            self.worst = dev;
        }
        if dev > self.tol && self.failure.is_none() {
            self.failure = Some(format!("{} (deviation {dev:e})", what()));
        }
    }

    fn truth(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.deviation(if ok { 0.0 } else { f64::INFINITY }, what);
    }

    fn finish(self) -> CheckResult {
        let passed = self.failure.is_none();
        CheckResult {
            name: self.name.to_string(),
            passed,
            cases: self.cases,
            max_deviation: self.worst,
            detail: self.failure.unwrap_or_else(|| format!("tolerance {:e}", self.tol)),
        }
    }
}

fn offset(opts: &VerifyOptions, name: &str) -> f64 {
    match &opts.perturb {
        Some((target, eps)) if target == name => *eps,
        _ => 0.0,
    }
}

fn circle_oracle(opts: &VerifyOptions) -> Result<CheckResult> {
    let eps = offset(opts, "circle_oracle");
    let mut t = Tally::new("circle_oracle", 1e-7);
    for lambda in 1..=7i64 {
        for eta in (1..2 * lambda).step_by(2) {
            let Ok(rep) = CircleRep::new(eta, lambda) else { continue };
            for n in 1..=25u64 {
                let oracle = torsion(&circle_complex(&rep.sym_power(2 * n as usize)?));
                let closed = circle_log_torsion(&rep, n) + eps;
                t.deviation((oracle.log_abs - closed).abs(), || format!("η = {eta}, λ = {lambda}, N = {n}"));
            }
        }
    }
    Ok(t.finish())
}

fn torus_cases() -> Result<Vec<TorusRep>> {
    let mut reps = Vec::new();
    let minus = ConjClassDescriptor::of_order(2)?;
    for q in 1..=8u64 {
        reps.push(TorusRep::new(ConjClassDescriptor::of_order(q)?, minus)?);
    }
    for (q, h) in [(4u64, 8u64), (6, 3), (10, 5), (12, 4)] {
        let qd = ConjClassDescriptor::of_order(q)?;
        let hd = ConjClassDescriptor::of_order(h)?;
        reps.push(TorusRep::new(qd, hd)?);
    }
    Ok(reps)
}

fn torus_triviality(opts: &VerifyOptions) -> Result<CheckResult> {
    let eps = offset(opts, "torus_triviality");
    let mut t = Tally::new("torus_triviality", 1e-7);
    let max_n = if opts.quick { 10 } else { 20 };
    for rep in torus_cases()? {
        if !torus_acyclic_all_n(&rep) {
            continue;
        }
        for n in 1..=max_n {
            let (q, h) = rep.sym_powers(2 * n)?;
            let value = torsion(&torus_complex(&q, &h)?);
            t.deviation((value.log_abs - eps).abs(), || format!("{} / {}, 2N = {}", rep.q_desc, rep.h_desc, 2 * n));
        }
    }
    Ok(t.finish())
}

fn acyclicity_predicates(opts: &VerifyOptions) -> Result<CheckResult> {
    let flip = offset(opts, "acyclicity_predicates") != 0.0;
    let mut t = Tally::new("acyclicity_predicates", 0.0);
    let mut classes: Vec<ConjClassDescriptor> = (1..=8).map(ConjClassDescriptor::of_order).collect::<Result<_>>()?;
    classes.push(ConjClassDescriptor::parabolic(2)?);
    classes.push(ConjClassDescriptor::parabolic(-2)?);
    for desc in &classes {
        let max_n = if desc.is_hyperbolic() { 12 } else { 6 };
        let computed = (1..=max_n)
            .all(|n| sym_power(&desc.normal_form(), 2 * n).map(|l| is_acyclic(&circle_complex(&l))).unwrap_or(false));
        let predicted = circle_acyclic_all_n(desc) != flip;
        t.truth(computed == predicted, || format!("circle, {desc}"));
    }
    let pairs = [(3u64, 2u64), (3, 5), (1, 1), (4, 3), (3, 9), (6, 2), (7, 8), (1, 6)];
    for (q, h) in pairs {
        let rep = TorusRep::new(ConjClassDescriptor::of_order(q)?, ConjClassDescriptor::of_order(h)?)?;
        let computed = (1..=8).all(|n| {
            rep.sym_powers(2 * n).and_then(|(qm, hm)| torus_complex(&qm, &hm)).map(|c| is_acyclic(&c)).unwrap_or(false)
        });
        t.truth(computed == torus_acyclic_all_n(&rep), || format!("torus, orders ({q}, {h})"));
    }
    let para = ConjClassDescriptor::parabolic(2)?;
    let para_minus = ConjClassDescriptor::parabolic(-2)?;
    for (q, h) in [(para, para), (para, para_minus)] {
        let rep = TorusRep::new(q, h)?;
        let computed = (1..=6).all(|n| {
            rep.sym_powers(2 * n).and_then(|(qm, hm)| torus_complex(&qm, &hm)).map(|c| is_acyclic(&c)).unwrap_or(false)
        });
        t.truth(computed == torus_acyclic_all_n(&rep), || format!("torus, {q} / {h}"));
    }
    Ok(t.finish())
}

fn pivot_independence(opts: &VerifyOptions) -> Result<CheckResult> {
    let eps = offset(opts, "pivot_independence");
    let mut t = Tally::new("pivot_independence", 1e-8);
    let minus = ConjClassDescriptor::of_order(2)?;
    for q in [3u64, 4, 6] {
        let rep = TorusRep::new(ConjClassDescriptor::of_order(q)?, minus)?;
        for n in [2usize, 4, 8] {
            let (qm, hm) = rep.sym_powers(n)?;
            let c = torus_complex(&qm, &hm)?;
            let a = torsion_with(&c, LiftStrategy::ColumnPivoted).log_abs;
            let b = torsion_with(&c, LiftStrategy::FirstIndependent).log_abs + eps;
            t.deviation((a - b).abs(), || format!("order {q}, n = {n}"));
        }
    }
    Ok(t.finish())
}

fn multiplicativity(opts: &VerifyOptions) -> Result<CheckResult> {
    let eps = offset(opts, "multiplicativity");
    let mut t = Tally::new("multiplicativity", 1e-7);
    for (e1, l1, e2, l2) in [(1, 2, 1, 3), (3, 4, 5, 6), (1, 1, 3, 5)] {
        for n in [2usize, 4, 6] {
            let a = circle_complex(&CircleRep::new(e1, l1)?.sym_power(n)?);
            let b = circle_complex(&CircleRep::new(e2, l2)?.sym_power(n)?);
            let report = check_multiplicativity(&split_sequence(&a, &b)?)?;
            t.deviation(report.deviation() + eps, || format!("({e1}/{l1}) ⊕ ({e2}/{l2}), n = {n}"));
        }
    }
    Ok(t.finish())
}

fn catalog_indices() -> Result<Vec<SeifertIndex>> {
    GOLDEN.iter().map(|(_, json)| Catalog::from_json(json).map(|c| c.seifert)).collect()
}

fn assembly_identity(opts: &VerifyOptions) -> Result<CheckResult> {
    let eps = offset(opts, "assembly_identity");
    let mut t = Tally::new("assembly_identity", 1e-10);
    let max_n = if opts.quick { 25 } else { 100 };
    for idx in catalog_indices()? {
        for comp in enumerate_components(&idx)? {
            let rep = SeifertRep::from_xi(&idx, comp.xi.values())?;
            for n in 1..=max_n {
                let closed = seifert_log_torsion(&idx, &rep, n)? + eps;
                let assembled = assembled_log_torsion(&idx, &rep, n)?;
                t.deviation((closed - assembled).abs(), || format!("{idx}, ξ = {}, N = {n}", comp.xi));
            }
        }
    }
    Ok(t.finish())
}

fn golden_catalogs(opts: &VerifyOptions) -> Result<CheckResult> {
    let corrupt = offset(opts, "golden_catalogs") != 0.0;
    let mut t = Tally::new("golden_catalogs", 0.0);
    for (name, json) in GOLDEN {
        let golden = Catalog::from_json(json)?;
        let mut fresh = Catalog::build(&golden.seifert)?;
        if corrupt {
            fresh.components.pop();
        }
        t.truth(fresh == golden, || format!("{name} differs from the stored catalog"));
    }
    let tk = TorusKnotExterior::new(2, 3, 1)?;
    let sigma = catalog_indices()?.remove(0);
    for triple in johnson_classify(&tk).into_iter().filter(|t| t.acyclic) {
        let limit = brieskorn_leading_limit_exact(&tk, &triple.triple)?;
        t.truth(limit == max_limit(&sigma), || format!("Brieskorn triple {:?} vs Seifert maximum", triple.triple));
    }
    Ok(t.finish())
}

fn convergence_bound(opts: &VerifyOptions) -> Result<CheckResult> {
    let eps = offset(opts, "convergence_bound");
    let mut t = Tally::new("convergence_bound", 0.0);
    let checkpoints: &[u64] = if opts.quick { &[1, 2, 5, 10, 25] } else { &[1, 2, 5, 10, 100, 1000, 10_000] };
    for idx in catalog_indices()? {
        for comp in enumerate_components(&idx)? {
            let rep = SeifertRep::from_xi(&idx, comp.xi.values())?;
            let bound = rep.convergence_constant(&idx)?;
            let limit = comp.limit.to_f64();
            for &n in checkpoints {
                let avg = seifert_log_torsion(&idx, &rep, n)? / (2.0 * n as f64) + eps;
                let excess = (avg - limit).abs() - (bound / n as f64 + 1e-12);
                t.deviation(excess.max(0.0), || format!("{idx}, ξ = {}, N = {n}", comp.xi));
            }
        }
    }
    Ok(t.finish())
}

type Runner = fn(&VerifyOptions) -> Result<CheckResult>;

/// Runs every check, or only `only` when given.
pub fn run(opts: &VerifyOptions, only: Option<&str>) -> Result<VerifyReport> {
    if let Some((name, _)) = &opts.perturb {
        if !CHECK_NAMES.contains(&name.as_str()) {
            return Err(Error::parse("perturb", format!("unknown check {name:?}")));
        }
    }
    if let Some(name) = only {
        if !CHECK_NAMES.contains(&name) {
            return Err(Error::parse("check", format!("unknown check {name:?}")));
        }
    }
    let runners: [(&str, Runner); 8] = [
        ("circle_oracle", circle_oracle),
        ("torus_triviality", torus_triviality),
        ("acyclicity_predicates", acyclicity_predicates),
        ("pivot_independence", pivot_independence),
        ("multiplicativity", multiplicativity),
        ("assembly_identity", assembly_identity),
        ("golden_catalogs", golden_catalogs),
        ("convergence_bound", convergence_bound),
    ];
    let mut checks = Vec::new();
    for (name, f) in runners {
        if only.is_none_or(|o| o == name) {
            checks.push(f(opts)?);
        }
    }
    Ok(VerifyReport { checks })
}

/// `limit` formatted as an exact multiple of `log 2`.
pub fn describe_limit(limit: &Log2Multiple) -> String {
    limit.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_run_passes() {
        let report = run(&VerifyOptions { quick: true, perturb: None }, None).unwrap();
        assert!(report.all_passed(), "{:#?}", report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        assert_eq!(report.checks.len(), CHECK_NAMES.len());
    }

    #[test]
    fn perturbation_is_caught_by_name() {
        for name in ["circle_oracle", "assembly_identity", "golden_catalogs", "acyclicity_predicates"] {
            let opts = VerifyOptions { quick: true, perturb: Some((name.to_string(), 1e-3)) };
            let report = run(&opts, Some(name)).unwrap();
            assert_eq!(report.failures(), vec![name]);
        }
    }

    #[test]
    fn unknown_names_rejected() {
        let opts = VerifyOptions { quick: true, perturb: Some(("nope".into(), 1.0)) };
        assert!(run(&opts, None).unwrap_err().is_parse_error());
        assert!(run(&VerifyOptions::default(), Some("nope")).unwrap_err().is_parse_error());
    }
}
