//! The Kronecker-Weierstrass catalog: every normal form of a 2x4 matrix of
//! linear forms, built from the block definitions (nilpotent, Jordan,
//! scroll), paired with its classified invariants and verified wholesale.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bourbaki::{analyze, validate, BourbakiReport, EngineError, ThetaMatrix};
use crate::field::FieldSpec;
use crate::poly::Polynomial;
use crate::resolution::Shape;

/// One block of a two-row pencil in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// Nilpotent of length m+1 (m fresh variables):
    /// rows (x1..xm, 0) and (0, x1..xm).
    D(usize),
    /// Jordan of length m with an integer eigenvalue:
    /// rows (y1..ym) and (l*y1, y1+l*y2, ..., y_{m-1}+l*ym).
    J(usize, i64),
    /// Scroll of length m (m+1 fresh variables z0..zm):
    /// rows (z1..zm) and (z0..z_{m-1}).
    B(usize),
}

impl Block {
    pub fn cols(&self) -> usize {
        match self {
            Block::D(m) => m + 1,
            Block::J(m, _) => *m,
            Block::B(m) => *m,
        }
    }

    pub fn vars(&self) -> usize {
        match self {
            Block::D(m) => *m,
            Block::J(m, _) => *m,
            Block::B(m) => m + 1,
        }
    }

    fn label(&self) -> String {
        match self {
            Block::D(m) => format!("D{m}"),
            Block::J(m, l) => format!("J{m}({l})"),
            Block::B(m) => format!("B{m}"),
        }
    }
}

/// Coincidence requirements on the Jordan eigenvalues, indexed by the order
/// the J blocks appear.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamPattern {
    pub equal: Vec<(usize, usize)>,
    pub distinct: Vec<(usize, usize)>,
    pub zero: Vec<usize>,
    pub nonzero: Vec<usize>,
    pub tag: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KWSpec {
    pub blocks: Vec<Block>,
    pub pattern: ParamPattern,
}

impl KWSpec {
    pub fn name(&self) -> String {
        self.blocks.iter().map(|b| b.label()).collect()
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.vars()).sum()
    }

    pub fn cols(&self) -> usize {
        self.blocks.iter().map(|b| b.cols()).sum()
    }

    fn eigenvalues(&self) -> Vec<i64> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                Block::J(_, l) => Some(*l),
                _ => None,
            })
            .collect()
    }
}

/// Concatenate the blocks over disjoint fresh variables and validate.
pub fn build(spec: &KWSpec, field: FieldSpec) -> Result<ThetaMatrix, EngineError> {
    if spec.cols() != 4 {
        return Err(EngineError::Validation(vec![format!(
            "blocks give {} columns, need 4",
            spec.cols()
        )]));
    }
    let ev = spec.eigenvalues();
    let mut errs = Vec::new();
    for &(a, b) in &spec.pattern.equal {
        if ev[a] != ev[b] {
            errs.push(format!("pattern {}: parameters {} and {} must be equal", spec.pattern.tag, a + 1, b + 1));
        }
    }
    for &(a, b) in &spec.pattern.distinct {
        if ev[a] == ev[b] {
            errs.push(format!("pattern {}: parameters {} and {} must differ", spec.pattern.tag, a + 1, b + 1));
        }
    }
    for &a in &spec.pattern.zero {
        if ev[a] != 0 {
            errs.push(format!("pattern {}: parameter {} must vanish", spec.pattern.tag, a + 1));
        }
    }
    for &a in &spec.pattern.nonzero {
        if ev[a] == 0 {
            errs.push(format!("pattern {}: parameter {} must not vanish", spec.pattern.tag, a + 1));
        }
    }
    if !errs.is_empty() {
        return Err(EngineError::Validation(errs));
    }

    let n = spec.n();
    let var = |i: usize| Polynomial::var(n, i, field);
    let zero = Polynomial::zero(n, field);
    let mut top = Vec::new();
    let mut bot = Vec::new();
    let mut off = 0;
    for block in &spec.blocks {
        match *block {
            Block::D(m) => {
                for j in 0..=m {
                    top.push(if j < m { var(off + j) } else { zero.clone() });
                    bot.push(if j > 0 { var(off + j - 1) } else { zero.clone() });
                }
            }
            Block::J(m, l) => {
                let le = field.from_int(l);
                for j in 0..m {
                    top.push(var(off + j));
                    let mut entry = var(off + j).scale(&le);
                    if j > 0 {
                        entry = entry.add(&var(off + j - 1));
                    }
                    bot.push(entry);
                }
            }
            Block::B(m) => {
                // variables z0..zm in subscript order
                for j in 1..=m {
                    top.push(var(off + j));
                    bot.push(var(off + j - 1));
                }
            }
        }
        off += block.vars();
    }
    validate(vec![top, bot], n, field)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedInvariants {
    pub bour: Option<i64>,
    pub e: i64,
    pub e0: i64,
    pub e1_paper: i64,
    pub shape: Shape,
    pub betti_q: BTreeMap<(usize, i64), usize>,
    /// Which classification result the entry belongs to.
    pub class: &'static str,
}

fn betti(entries: &[(usize, i64, usize)]) -> BTreeMap<(usize, i64), usize> {
    entries.iter().map(|&(i, d, r)| ((i, d), r)).collect()
}

fn br_class() -> ExpectedInvariants {
    ExpectedInvariants {
        bour: Some(3),
        e: 2,
        e0: 0,
        e1_paper: 0,
        shape: Shape::BuchsbaumRim,
        betti_q: betti(&[(0, -1, 2), (1, 0, 4), (2, 2, 4), (3, 3, 2)]),
        class: "determinantal",
    }
}

fn free_class() -> ExpectedInvariants {
    ExpectedInvariants {
        bour: Some(0),
        e: 1,
        e0: 0,
        e1_paper: 2,
        shape: Shape::Free,
        betti_q: betti(&[(0, -1, 2), (1, 0, 4), (2, 1, 2)]),
        class: "free",
    }
}

fn nf_codim2_class() -> ExpectedInvariants {
    ExpectedInvariants {
        bour: Some(1),
        e: 1,
        e0: 0,
        e1_paper: 1,
        shape: Shape::NearlyFree,
        betti_q: betti(&[(0, -1, 2), (1, 0, 4), (2, 1, 1), (2, 2, 2), (3, 3, 1)]),
        class: "nearly-free, codim 2",
    }
}

fn nf_codim1_class() -> ExpectedInvariants {
    ExpectedInvariants {
        bour: Some(1),
        e: 1,
        e0: 1,
        e1_paper: -1,
        shape: Shape::NearlyFree,
        betti_q: betti(&[(0, -1, 2), (1, 0, 4), (2, 1, 3), (3, 2, 1)]),
        class: "nearly-free, codim 1",
    }
}

fn bour2_class() -> ExpectedInvariants {
    ExpectedInvariants {
        bour: Some(2),
        e: 2,
        e0: 0,
        e1_paper: 1,
        shape: Shape::Other,
        betti_q: betti(&[(0, -1, 2), (1, 0, 4), (2, 2, 5), (3, 3, 4), (4, 4, 1)]),
        class: "exceptional degree 2",
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub spec: KWSpec,
    pub expected: ExpectedInvariants,
}

fn entry(blocks: Vec<Block>, pattern: ParamPattern, expected: ExpectedInvariants) -> CatalogEntry {
    CatalogEntry { spec: KWSpec { blocks, pattern }, expected }
}

fn pat(tag: &'static str) -> ParamPattern {
    ParamPattern { tag, ..ParamPattern::default() }
}

/// The full classification over default parameters 2, 3, 5, 7: one entry
/// per normal form and coincidence pattern. Note J2(l)|J1(l)|J1(l) lands in
/// the codimension-1 class: its minors generate x1*(x1,x3,x4), of height
/// one, even though the two distinct-eigenvalue coincidence patterns next
/// to it are codimension 2.
pub fn catalog() -> Vec<CatalogEntry> {
    use Block::{B, D, J};
    let mut out = Vec::new();

    // single blocks
    out.push(entry(vec![B(4)], pat(""), br_class()));
    out.push(entry(vec![D(3)], pat(""), br_class()));
    out.push(entry(vec![J(4, 2)], pat(""), br_class()));

    // two blocks
    out.push(entry(vec![D(2), B(1)], pat(""), bour2_class()));
    out.push(entry(vec![D(2), J(1, 2)], pat(""), nf_codim2_class()));
    out.push(entry(vec![J(3, 2), B(1)], pat(""), br_class()));
    out.push(entry(vec![B(3), J(1, 3)], pat(""), br_class()));
    out.push(entry(vec![B(3), B(1)], pat(""), br_class()));
    out.push(entry(vec![B(2), B(2)], pat(""), br_class()));
    out.push(entry(vec![D(1), J(2, 2)], pat(""), free_class()));
    out.push(entry(vec![D(1), B(2)], pat(""), free_class()));
    out.push(entry(
        vec![J(2, 2), J(2, 3)],
        ParamPattern { distinct: vec![(0, 1)], tag: "l != m", ..Default::default() },
        br_class(),
    ));
    out.push(entry(
        vec![J(2, 2), J(2, 2)],
        ParamPattern { equal: vec![(0, 1)], tag: "l == m", ..Default::default() },
        free_class(),
    ));
    // listed as D1|D2, which has five columns; the four-column form is D1|D1
    out.push(entry(vec![D(1), D(1)], pat(""), free_class()));
    out.push(entry(
        vec![J(3, 2), J(1, 3)],
        ParamPattern { distinct: vec![(0, 1)], tag: "l != m", ..Default::default() },
        br_class(),
    ));
    out.push(entry(
        vec![J(3, 2), J(1, 2)],
        ParamPattern { equal: vec![(0, 1)], tag: "l == m", ..Default::default() },
        nf_codim2_class(),
    ));
    out.push(entry(vec![J(2, 2), B(2)], pat(""), br_class()));

    // three blocks
    out.push(entry(vec![B(2), B(1), B(1)], pat(""), br_class()));
    out.push(entry(
        vec![J(2, 2), B(1), J(1, 3)],
        ParamPattern { distinct: vec![(0, 1)], tag: "l != m", ..Default::default() },
        br_class(),
    ));
    out.push(entry(
        vec![J(2, 2), B(1), J(1, 2)],
        ParamPattern { equal: vec![(0, 1)], tag: "l == m", ..Default::default() },
        nf_codim2_class(),
    ));
    out.push(entry(
        vec![B(2), J(1, 2), J(1, 3)],
        ParamPattern { distinct: vec![(0, 1)], tag: "l != m", ..Default::default() },
        br_class(),
    ));
    out.push(entry(
        vec![B(2), J(1, 0), J(1, 0)],
        ParamPattern { equal: vec![(0, 1)], zero: vec![0, 1], tag: "l == m == 0", ..Default::default() },
        nf_codim2_class(),
    ));
    out.push(entry(vec![D(1), B(1), B(1)], pat(""), free_class()));
    out.push(entry(vec![D(1), B(1), J(1, 2)], pat(""), free_class()));
    out.push(entry(
        vec![D(1), J(1, 2), J(1, 3)],
        ParamPattern { distinct: vec![(0, 1)], tag: "l != m", ..Default::default() },
        free_class(),
    ));
    out.push(entry(
        vec![D(1), J(1, 2), J(1, 2)],
        ParamPattern { equal: vec![(0, 1)], nonzero: vec![0], tag: "l == m != 0", ..Default::default() },
        nf_codim1_class(),
    ));
    out.push(entry(vec![J(2, 2), B(1), B(1)], pat(""), br_class()));
    out.push(entry(vec![B(2), B(1), J(1, 3)], pat(""), br_class()));
    out.push(entry(
        vec![J(2, 2), J(1, 3), J(1, 5)],
        ParamPattern { distinct: vec![(0, 1), (0, 2), (1, 2)], tag: "l, m, r distinct", ..Default::default() },
        br_class(),
    ));
    out.push(entry(
        vec![J(2, 2), J(1, 3), J(1, 3)],
        ParamPattern { equal: vec![(1, 2)], distinct: vec![(0, 1)], tag: "m == r != l", ..Default::default() },
        nf_codim2_class(),
    ));
    out.push(entry(
        vec![J(2, 2), J(1, 2), J(1, 3)],
        ParamPattern { equal: vec![(0, 1)], distinct: vec![(1, 2)], tag: "l == m != r", ..Default::default() },
        nf_codim2_class(),
    ));
    out.push(entry(
        vec![J(2, 2), J(1, 2), J(1, 2)],
        ParamPattern { equal: vec![(0, 1), (1, 2)], tag: "l == m == r", ..Default::default() },
        nf_codim1_class(),
    ));

    // four blocks
    out.push(entry(
        vec![J(1, 2), J(1, 3), J(1, 5), J(1, 7)],
        ParamPattern {
            distinct: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            tag: "all distinct",
            ..Default::default()
        },
        br_class(),
    ));
    out.push(entry(
        vec![J(1, 2), J(1, 2), J(1, 3), J(1, 5)],
        ParamPattern {
            equal: vec![(0, 1)],
            distinct: vec![(1, 2), (1, 3), (2, 3)],
            tag: "l == m, rest distinct",
            ..Default::default()
        },
        nf_codim2_class(),
    ));
    out.push(entry(
        vec![J(1, 2), J(1, 2), J(1, 3), J(1, 3)],
        ParamPattern {
            equal: vec![(0, 1), (2, 3)],
            distinct: vec![(0, 2)],
            tag: "two equal pairs",
            ..Default::default()
        },
        free_class(),
    ));
    out.push(entry(
        vec![J(1, 2), J(1, 2), J(1, 2), J(1, 3)],
        ParamPattern {
            equal: vec![(0, 1), (1, 2)],
            distinct: vec![(2, 3)],
            tag: "three equal",
            ..Default::default()
        },
        nf_codim1_class(),
    ));
    out.push(entry(vec![B(1), B(1), B(1), B(1)], pat(""), br_class()));

    out
}

#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub name: String,
    pub pattern: &'static str,
    pub n: usize,
    pub expected: ExpectedInvariants,
    pub report: Result<BourbakiReport, EngineError>,
    pub diffs: Vec<String>,
}

pub fn verify_entry(entry: &CatalogEntry, field: FieldSpec) -> VerifyOutcome {
    let name = entry.spec.name();
    let expected = entry.expected.clone();
    let report = build(&entry.spec, field).and_then(|theta| analyze(&theta));
    let mut diffs = Vec::new();
    match &report {
        Err(err) => diffs.push(format!("{name}: analysis failed: {err}")),
        Ok(rep) => {
            let mut diff = |what: &str, exp: String, got: String| {
                if exp != got {
                    diffs.push(format!("{name}: {what}: expected {exp}, computed {got}"));
                }
            };
            let show = |v: Option<i64>| match v {
                Some(x) => x.to_string(),
                None => "undefined".into(),
            };
            diff("bour", show(expected.bour), show(rep.bour_formula));
            diff("e", expected.e.to_string(), rep.e.to_string());
            diff("e0", expected.e0.to_string(), rep.e0.to_string());
            diff("e1", expected.e1_paper.to_string(), rep.e1_paper.to_string());
            diff("shape", expected.shape.to_string(), rep.shape.to_string());
            if expected.betti_q != rep.betti_q.entries {
                diffs.push(format!(
                    "{name}: betti: expected {:?}, computed {:?}",
                    expected.betti_q, rep.betti_q.entries
                ));
            }
        }
    }
    VerifyOutcome { name, pattern: entry.expected_pattern(), n: entry.spec.n(), expected, report, diffs }
}

impl CatalogEntry {
    fn expected_pattern(&self) -> &'static str {
        self.spec.pattern.tag
    }
}

/// Run the whole catalog (or the entries whose name contains `only`),
/// fanning out across workers; output order follows the catalog.
pub fn verify_catalog(field: FieldSpec, only: Option<&str>) -> Vec<VerifyOutcome> {
    let entries: Vec<CatalogEntry> = catalog()
        .into_iter()
        .filter(|e| match only {
            Some(pattern) => e.spec.name().to_lowercase().contains(&pattern.to_lowercase()),
            None => true,
        })
        .collect();
    entries.par_iter().map(|e| verify_entry(e, field)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::render_poly;

    #[test]
    fn blocks_concatenate_per_the_definitions() {
        let spec = KWSpec { blocks: vec![Block::D(2), Block::B(1)], pattern: pat("") };
        assert_eq!(spec.name(), "D2B1");
        assert_eq!(spec.n(), 4);
        let theta = build(&spec, FieldSpec::QQ).unwrap();
        let rows = theta.render_rows();
        assert_eq!(rows[0], vec!["x1", "x2", "0", "x4"]);
        assert_eq!(rows[1], vec!["0", "x1", "x2", "x3"]);

        let spec = KWSpec { blocks: vec![Block::J(2, 2)], pattern: pat("") };
        let err = build(&spec, FieldSpec::QQ).unwrap_err();
        assert!(matches!(err, EngineError::Validation(_)));

        let spec = KWSpec {
            blocks: vec![Block::J(2, 2), Block::J(2, 2)],
            pattern: ParamPattern { distinct: vec![(0, 1)], tag: "l != m", ..Default::default() },
        };
        match build(&spec, FieldSpec::QQ) {
            Err(EngineError::Validation(v)) => assert!(v[0].contains("differ"), "{v:?}"),
            other => panic!("expected a pattern rejection, got {other:?}"),
        }
    }

    #[test]
    fn catalog_is_complete_and_well_formed() {
        let cat = catalog();
        assert!(cat.len() >= 30, "only {} entries", cat.len());
        let mut names: Vec<String> = cat.iter().map(|e| e.spec.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), cat.len(), "duplicate names");
        for e in &cat {
            assert_eq!(e.spec.cols(), 4, "{}", e.spec.name());
            build(&e.spec, FieldSpec::QQ).unwrap_or_else(|err| {
                panic!("{} fails to build: {err}", e.spec.name())
            });
            // the expected numbers satisfy the degree formula
            if let Some(b) = e.expected.bour {
                let (e1, e0) = (e.expected.e, e.expected.e0);
                let e1_raw = if e0 == 0 { -e.expected.e1_paper } else { e.expected.e1_paper };
                let ell = (e0 * e0 + e0) / 2;
                assert_eq!(b, (e1 - 2) * (e1 + e0) + 3 + ell + e1_raw, "{}", e.spec.name());
            }
        }
        assert!(cat.iter().any(|e| e.spec.name() == "D2B1" && e.expected.bour == Some(2)));
        assert!(cat
            .iter()
            .any(|e| e.spec.name() == "J2(2)J2(2)" && e.expected.shape == Shape::Free));
        assert!(cat
            .iter()
            .any(|e| e.spec.name() == "J2(2)J2(3)" && e.expected.shape == Shape::BuchsbaumRim));
    }

    #[test]
    fn the_whole_catalog_verifies_over_the_rationals() {
        let outcomes = verify_catalog(FieldSpec::QQ, None);
        let diffs: Vec<&String> = outcomes.iter().flat_map(|o| o.diffs.iter()).collect();
        assert!(diffs.is_empty(), "{diffs:#?}");
    }

    #[test]
    fn filtered_verification_over_a_prime_field() {
        let outcomes = verify_catalog(FieldSpec::Fp(32003), Some("d2b1"));
        assert_eq!(outcomes.len(), 1);
        assert!(outcomes[0].diffs.is_empty(), "{:?}", outcomes[0].diffs);
        assert_eq!(outcomes[0].report.as_ref().unwrap().bour_formula, Some(2));
    }

    #[test]
    fn perturbed_expectation_is_caught_once() {
        let mut entry = catalog().into_iter().find(|e| e.spec.name() == "B4").unwrap();
        entry.expected.bour = Some(4);
        let outcome = verify_entry(&entry, FieldSpec::QQ);
        assert_eq!(outcome.diffs.len(), 1, "{:?}", outcome.diffs);
        assert!(outcome.diffs[0].contains("bour"));
    }

    #[test]
    fn distinct_parameter_choices_agree_on_determinantal_entries() {
        for (l, m) in [(2, 3), (3, 5), (7, 11)] {
            let spec = KWSpec {
                blocks: vec![Block::J(2, l), Block::J(2, m)],
                pattern: ParamPattern { distinct: vec![(0, 1)], tag: "l != m", ..Default::default() },
            };
            let entry = CatalogEntry { spec, expected: br_class() };
            let outcome = verify_entry(&entry, FieldSpec::QQ);
            assert!(outcome.diffs.is_empty(), "({l},{m}): {:?}", outcome.diffs);
        }
    }

    #[test]
    fn equal_jordan_pairs_collapse_to_the_zero_form() {
        // a Moebius change of coordinates sends an equal eigenvalue pair to
        // the nilpotent pair, so the invariants match B2|J1(0)|J1(0)
        let spec = KWSpec {
            blocks: vec![Block::B(2), Block::J(1, 5), Block::J(1, 5)],
            pattern: ParamPattern { equal: vec![(0, 1)], tag: "l == m", ..Default::default() },
        };
        let entry = CatalogEntry { spec, expected: nf_codim2_class() };
        let outcome = verify_entry(&entry, FieldSpec::QQ);
        assert!(outcome.diffs.is_empty(), "{:?}", outcome.diffs);
    }

    #[test]
    fn invariants_survive_an_unused_variable() {
        let cat = catalog();
        for name in ["D2B1", "D1J1(2)J1(2)", "J3(2)J1(2)"] {
            let entry = cat.iter().find(|e| e.spec.name() == name).unwrap();
            let theta = build(&entry.spec, FieldSpec::QQ).unwrap();
            let n1 = theta.n + 1;
            let rows = theta
                .rows
                .iter()
                .map(|row| row.iter().map(|p| p.extended(n1)).collect())
                .collect();
            let wide = validate(rows, n1, FieldSpec::QQ).unwrap();
            let a = analyze(&theta).unwrap();
            let b = analyze(&wide).unwrap();
            assert_eq!(a.bour_formula, b.bour_formula, "{name}");
            assert_eq!((a.e, a.e0, a.e1_paper), (b.e, b.e0, b.e1_paper), "{name}");
            assert_eq!(a.betti_q.entries, b.betti_q.entries, "{name}");
            assert_eq!(a.dim_q.map(|d| d + 1), b.dim_q, "{name}");
            assert_eq!(a.depth_q + 1, b.depth_q, "{name}");
            let h = render_poly(&theta.rows[0][0]);
            assert_eq!(h, "x1"); // sanity: nothing permuted the rows
        }
    }
}
