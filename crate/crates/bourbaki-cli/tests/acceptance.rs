//! The nine acceptance checks, one test each, printing one PASS/FAIL line
//! per criterion (run with `--nocapture` to see them on success).

use bourbaki_core::bourbaki::{
    analyze, distribution_check, equigenerated, validate, BourbakiReport, EquiReport, ThetaMatrix,
};
use bourbaki_core::kw;
use bourbaki_core::parse::{parse_poly, render_poly};
use bourbaki_core::report::DEFAULT_SEED;
use bourbaki_core::resolution::Shape;
use bourbaki_core::selftest::{self, CheckResult, SelftestConfig};
use bourbaki_core::{FieldSpec, Polynomial};
use std::collections::BTreeMap;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn criterion<F: FnOnce()>(k: u32, label: &str, budget: Duration, f: F) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    let verdict = if result.is_ok() && elapsed <= budget { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {k} {label}: {verdict} ({elapsed:.2?})");
    if let Err(p) = result {
        resume_unwind(p);
    }
    assert!(elapsed <= budget, "criterion {k} took {elapsed:?}, budget {budget:?}");
}

fn theta_from(rows: [[&str; 4]; 2], n: usize, field: FieldSpec) -> ThetaMatrix {
    let parsed: Vec<Vec<Polynomial>> = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_poly(s, n, field).unwrap()).collect())
        .collect();
    validate(parsed, n, field).unwrap()
}

fn betti(entries: &[(usize, i64, usize)]) -> BTreeMap<(usize, i64), usize> {
    entries.iter().map(|&(i, d, r)| ((i, d), r)).collect()
}

// ---- shared fixtures, reused by the GF(32003) rerun ----

fn generic_linear(field: FieldSpec) -> BourbakiReport {
    let theta = theta_from([["x1", "x2", "x3", "x4"], ["x5", "x6", "x7", "x8"]], 8, field);
    analyze(&theta).unwrap()
}

fn check_generic_linear(rep: &BourbakiReport) {
    let c = rep.hilb_q.shift(rep.d2).canonical();
    assert_eq!(c.pole, 5, "series pole");
    assert_eq!(c.numer, BTreeMap::from([(0, 2), (1, 2)]), "series numerator (2 + 2t)");
    assert_eq!((rep.e0, rep.e1_paper), (0, 0));
    assert_eq!(rep.bour_formula, Some(3));
    assert_eq!(rep.bour_direct, Some(3));
    assert_eq!(rep.shape, Shape::BuchsbaumRim);
    // display twist: 0 -> R^2(-4) -> R^4(-3) -> R^4(-1) -> R^2
    let display = rep.betti_q.twisted(rep.d2);
    assert_eq!(display.entries, betti(&[(0, 0, 2), (1, 1, 4), (2, 3, 4), (3, 4, 2)]));
}

fn d2b1(field: FieldSpec) -> BourbakiReport {
    let theta = theta_from([["x1", "x2", "0", "x3"], ["0", "x1", "x2", "x4"]], 4, field);
    analyze(&theta).unwrap()
}

fn check_d2b1(rep: &BourbakiReport) {
    assert_eq!((rep.e, rep.e0, rep.e1_paper), (2, 0, 1));
    assert_eq!(rep.bour_formula, Some(2), "closed formula");
    assert_eq!(rep.bour_direct, Some(2), "direct Bourbaki-ideal route");
    // absolute grading: 0 -> R(-4) -> R^4(-3) -> R^5(-2) -> R^4 -> R^2(1)
    assert_eq!(
        rep.betti_q.entries,
        betti(&[(0, -1, 2), (1, 0, 4), (2, 2, 5), (3, 3, 4), (4, 4, 1)])
    );
    let hp: Vec<String> = rep.hp_q.iter().map(|c| c.to_string()).collect();
    assert_eq!(hp, ["3", "1"], "Hilbert polynomial t + 3");
}

fn quadrics(n: usize, field: FieldSpec) -> EquiReport {
    let gens: Vec<Polynomial> = ["x1*x4", "x2*x3", "x1*x3 - x2*x4"]
        .iter()
        .map(|s| parse_poly(s, n, field).unwrap())
        .collect();
    equigenerated(&gens, n, field).unwrap()
}

fn quadrics_invariants(eq: &EquiReport) -> (Option<i64>, i64, i64, i64, i64, u32, String) {
    (
        eq.base.bour_formula,
        eq.deg_rj,
        eq.base.e,
        eq.base.e0,
        eq.base.e1_paper,
        eq.height,
        eq.value_class.clone(),
    )
}

fn check_quadrics(eq: &EquiReport) {
    assert_eq!(eq.base.bour_formula, Some(2));
    assert_eq!(eq.deg_rj, 2);
    assert_eq!(eq.base.e, 2);
    assert!(eq.identity_ok, "deg(R/J) + Bour = d^2 + e^2 - ed");
}

fn nodal(field: FieldSpec) -> EquiReport {
    let f = parse_poly("x1*x2*x3^3 + x1^5 + x2^5", 3, field).unwrap();
    let gens: Vec<Polynomial> = (0..3).map(|i| f.partial_derivative(i)).collect();
    equigenerated(&gens, 3, field).unwrap()
}

fn check_nodal(eq: &EquiReport) {
    // 0 -> R(-11)^2 -> R(-10) + R(-8)^3 -> R(-4)^3 -> R
    assert_eq!(
        eq.betti_rj.entries,
        betti(&[(0, 0, 1), (1, 4, 3), (2, 8, 3), (2, 10, 1), (3, 11, 2)])
    );
    assert_eq!(eq.tau, Some(1), "Tjurina number");
    assert_eq!(eq.base.e, 4);
    assert_eq!(eq.base.bour_formula, Some(15), "Bour = d^2 - 1");
    assert_eq!(eq.value_class, "d^2-1");
}

fn suites() -> &'static Vec<CheckResult> {
    static RESULTS: OnceLock<Vec<CheckResult>> = OnceLock::new();
    RESULTS.get_or_init(|| selftest::run(&SelftestConfig { samples: 100, seed: DEFAULT_SEED }))
}

fn check_suite(results: &[CheckResult], name: &str, total: usize) {
    let suite = results.iter().find(|r| r.name == name).unwrap();
    assert_eq!(suite.total, total, "{name} sample count");
    assert!(suite.passed(), "{name} failures: {:?}", suite.failures);
}

// ---- the nine criteria ----

#[test]
fn acceptance_1_generic_linear() {
    criterion(1, "generic linear matrix, n = 8", Duration::from_secs(10), || {
        check_generic_linear(&generic_linear(FieldSpec::QQ));
    });
}

#[test]
fn acceptance_2_d2b1() {
    criterion(2, "D2|B1, n = 4", Duration::from_secs(5), || {
        check_d2b1(&d2b1(FieldSpec::QQ));
    });
}

#[test]
fn acceptance_3_kw_catalog() {
    criterion(3, "kw-catalog --verify", Duration::from_secs(120), || {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_bourbaki"))
            .args(["kw-catalog", "--verify"])
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "kw-catalog --verify: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    });
}

#[test]
fn acceptance_4_equigenerated_quadrics() {
    criterion(4, "equigenerated quadrics, n = 4 and 5", Duration::from_secs(5), || {
        let a = quadrics(4, FieldSpec::QQ);
        let b = quadrics(5, FieldSpec::QQ);
        check_quadrics(&a);
        check_quadrics(&b);
        assert_eq!(
            quadrics_invariants(&a),
            quadrics_invariants(&b),
            "invariants stable under a variable extension"
        );
    });
}

#[test]
fn acceptance_5_nodal_plane_curve() {
    criterion(5, "nodal plane quintic", Duration::from_secs(30), || {
        check_nodal(&nodal(FieldSpec::QQ));
    });
}

#[test]
fn acceptance_6_random_matrix_suite() {
    criterion(6, "100 random matrices vs formula and oracle", Duration::from_secs(600), || {
        check_suite(suites(), "matrix-suite", 100);
    });
}

#[test]
fn acceptance_7_quadric_exclusion() {
    criterion(7, "50 height-2 quadric triples, none Bour = 2", Duration::from_secs(300), || {
        check_suite(suites(), "quadric-triples", 50);
    });
}

#[test]
fn acceptance_8_distribution_criterion() {
    criterion(8, "distribution criterion", Duration::from_secs(120), || {
        let theta = theta_from([["x1", "x2", "0", "x3"], ["0", "x1", "x2", "x4"]], 4, FieldSpec::QQ);
        let dist = distribution_check(&theta).unwrap();
        assert!(dist.regular);
        assert_eq!(render_poly(&dist.h1), "x1^2 + x2^2 + x3*x4");

        let degenerate = theta_from(
            [["x3", "x4", "0", "0"], ["x1*x3", "x1*x4", "-x1*x2", "-x2^2"]],
            4,
            FieldSpec::QQ,
        );
        let dist = distribution_check(&degenerate).unwrap();
        assert!(!dist.regular, "degenerate row span must fail the test");

        check_suite(suites(), "jacobian-pencils", 20);
    });
}

#[test]
fn acceptance_9_multi_prime() {
    criterion(9, "criteria 1-5 over GF(32003)", Duration::from_secs(180), || {
        let p = FieldSpec::Fp(32003);
        check_generic_linear(&generic_linear(p));
        check_d2b1(&d2b1(p));
        let outcomes = kw::verify_catalog(p, None);
        let diffs: Vec<&String> = outcomes.iter().flat_map(|o| &o.diffs).collect();
        assert!(diffs.is_empty(), "catalog over GF(32003): {diffs:?}");
        let a = quadrics(4, p);
        let b = quadrics(5, p);
        check_quadrics(&a);
        check_quadrics(&b);
        assert_eq!(quadrics_invariants(&a), quadrics_invariants(&b));
        check_nodal(&nodal(p));
    });
}
