//! Report assembly: deterministic JSON (stable key order) and the aligned
//! text renderer behind --pretty.

use crate::bourbaki::{
    BourbakiReport, DistributionRecord, EmaxRecord, EquiReport, RowReport, RowSide, ThetaMatrix,
};
use crate::hilbert::HilbertSeries;
use crate::kw::{CatalogEntry, VerifyOutcome};
use crate::parse::render_poly;
use crate::resolution::BettiTable;
use crate::FieldSpec;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;

/// Seed printed in reports that involve no sampling.
pub const DEFAULT_SEED: u64 = 1729;

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn input_hash(bytes: &[u8]) -> String {
    format!("fnv1a:{:016x}", fnv1a(bytes))
}

fn push_term(out: &mut String, coeff: i64, exp: i64) {
    if coeff == 0 {
        return;
    }
    if out.is_empty() {
        if coeff < 0 {
            out.push('-');
        }
    } else if coeff < 0 {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    let a = coeff.abs();
    match exp {
        0 => {
            let _ = write!(out, "{a}");
        }
        1 => {
            if a == 1 {
                out.push('t');
            } else {
                let _ = write!(out, "{a}*t");
            }
        }
        _ => {
            if a == 1 {
                let _ = write!(out, "t^{exp}");
            } else {
                let _ = write!(out, "{a}*t^{exp}");
            }
        }
    }
}

/// "(2 + 2*t)/(1 - t)^5" style. Pole 0 drops the denominator.
pub fn render_series(hs: &HilbertSeries) -> String {
    let mut numer = String::new();
    for (&k, &c) in &hs.numer {
        push_term(&mut numer, c, k);
    }
    if numer.is_empty() {
        return "0".into();
    }
    match hs.pole {
        0 => numer,
        1 => format!("({numer})/(1 - t)"),
        p => format!("({numer})/(1 - t)^{p}"),
    }
}

pub fn series_json(hs: &HilbertSeries) -> Value {
    let numer: Vec<Value> = hs.numer.iter().map(|(&k, &c)| json!([k, c])).collect();
    json!({ "display": render_series(hs), "numerator": numer, "pole": hs.pole })
}

/// Hilbert polynomial from ascending coefficients, highest power first.
pub fn render_hp(coeffs: &[BigRational]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c == &BigRational::from_integer(0.into()) {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let one = a == BigRational::from_integer(1.into());
        match i {
            0 => {
                let _ = write!(out, "{a}");
            }
            1 => {
                let _ = write!(out, "{}t", if one { String::new() } else { format!("{a}*") });
            }
            _ => {
                let _ = write!(out, "{}t^{i}", if one { String::new() } else { format!("{a}*") });
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn hp_json(coeffs: &[BigRational]) -> Value {
    let list: Vec<Value> = coeffs.iter().map(|c| Value::String(c.to_string())).collect();
    json!({ "display": render_hp(coeffs), "coefficients": list })
}

/// Betti tables serialize as lists of {i, degree, rank}, sorted.
pub fn betti_json(b: &BettiTable) -> Value {
    let rows: Vec<Value> = b
        .entries
        .iter()
        .map(|(&(i, d), &r)| json!({ "i": i, "degree": d, "rank": r }))
        .collect();
    Value::Array(rows)
}

fn summand(degree: i64, rank: usize) -> String {
    let mut s = String::from("R");
    if rank != 1 {
        let _ = write!(s, "^{rank}");
    }
    if degree != 0 {
        let _ = write!(s, "({})", -degree);
    }
    s
}

/// "0 -> R(-4) -> R^4(-3) -> R^5(-2) -> R^4 -> R^2(1)".
pub fn complex_display(b: &BettiTable) -> String {
    if b.entries.is_empty() {
        return "0".into();
    }
    let pd = b.entries.keys().map(|&(i, _)| i).max().unwrap();
    let mut parts = vec!["0".to_string()];
    for i in (0..=pd).rev() {
        let terms: Vec<String> = b
            .entries
            .iter()
            .filter(|&(&(j, _), _)| j == i)
            .map(|(&(_, d), &r)| summand(d, r))
            .collect();
        parts.push(if terms.is_empty() { "0".into() } else { terms.join(" + ") });
    }
    parts.join(" -> ")
}

/// Matrix rows rendered with aligned columns.
pub fn matrix_lines(rows: &[Vec<String>]) -> Vec<String> {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().map(|r| r.get(j).map_or(0, |s| s.len())).max().unwrap_or(0))
        .collect();
    rows.iter()
        .map(|r| {
            let body: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(j, s)| format!("{:width$}", s, width = widths[j]))
                .collect();
            format!("[ {} ]", body.join("  "))
        })
        .collect()
}

fn opt_i64(v: Option<i64>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

fn theta_json(theta: &ThetaMatrix) -> Value {
    let rows: Vec<Value> = theta
        .rows
        .iter()
        .map(|r| Value::Array(r.iter().map(|p| Value::String(render_poly(p))).collect()))
        .collect();
    json!({
        "rows": rows,
        "d1": theta.d1,
        "d2": theta.d2,
        "swapped": theta.swapped,
        "jacobian": theta.jacobian,
    })
}

fn invariants_json(rep: &BourbakiReport) -> Value {
    let mut m = Map::new();
    m.insert("d".into(), json!(rep.d));
    m.insert("e".into(), json!(rep.e));
    m.insert("e0".into(), json!(rep.e0));
    m.insert("e1_raw".into(), json!(rep.e1_raw));
    m.insert("e1".into(), json!(rep.e1_paper));
    m.insert("q_theta".into(), json!(rep.q_theta));
    m.insert("ell_q".into(), json!(rep.ell_q));
    m.insert("s".into(), json!(rep.s));
    m.insert("bour_direct".into(), opt_i64(rep.bour_direct));
    m.insert("dim_q".into(), rep.dim_q.map_or(Value::Null, |d| json!(d)));
    m.insert("depth_q".into(), json!(rep.depth_q));
    m.insert("pd_q".into(), json!(rep.pd_q));
    m.insert("shape".into(), json!(rep.shape.to_string()));
    m.insert("bounds_ok".into(), json!(rep.bounds_ok));
    Value::Object(m)
}

fn flags_json(rep: &BourbakiReport) -> Value {
    json!({
        "free": rep.flags.free,
        "nearly_free": rep.flags.nearly_free,
        "three_syzygy": rep.flags.three_syzygy,
        "br_shape": rep.flags.br_shape,
        "compressible": rep.flags.compressible,
    })
}

/// Core of every analyze report; callers append optional sections.
pub fn base_report(
    hash: &str,
    seed: u64,
    mode: &str,
    theta: &ThetaMatrix,
    rep: &BourbakiReport,
) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("engine_version".into(), json!(crate::ENGINE_VERSION));
    m.insert("input_hash".into(), json!(hash));
    m.insert("field".into(), json!(rep.field.to_string()));
    m.insert("seed".into(), json!(seed));
    m.insert("n".into(), json!(rep.n));
    m.insert("mode".into(), json!(mode));
    m.insert("theta".into(), theta_json(theta));
    m.insert("bour".into(), opt_i64(rep.bour_formula));
    m.insert("invariants".into(), invariants_json(rep));
    m.insert("flags".into(), flags_json(rep));
    m.insert(
        "syz".into(),
        json!({
            "generator_degrees": rep.syz_gen_degrees,
            "nu": rep.nu.clone().map_or(Value::Null, |v| json!(v)),
            "betti": betti_json(&rep.betti_syz),
            "complex": complex_display(&rep.betti_syz),
        }),
    );
    m.insert(
        "q".into(),
        json!({
            "betti": betti_json(&rep.betti_q),
            "complex": complex_display(&rep.betti_q),
            "hilbert_series": series_json(&rep.hilb_q),
            "hilbert_polynomial": hp_json(&rep.hp_q),
        }),
    );
    m
}

pub fn resolution_section(rep: &BourbakiReport) -> Value {
    json!({
        "q_complex": complex_display(&rep.betti_q),
        "syz_complex": complex_display(&rep.betti_syz),
        "pd_q": rep.pd_q,
        "depth_q": rep.depth_q,
    })
}

fn row_side_json(side: &RowSide) -> Value {
    json!({
        "e_row": side.e_row,
        "s_row": side.s_row,
        "deg_direct": side.deg_direct,
        "deg_row_theta": side.deg_row_theta,
        "variant_2d1": side.variant_2d1,
        "variant_2d2": side.variant_2d2,
        "match_2d1": side.match_2d1,
        "match_2d2": side.match_2d2,
    })
}

pub fn row_wise_section(rr: &RowReport, emax: &EmaxRecord) -> Value {
    json!({
        "f": row_side_json(&rr.f),
        "g": row_side_json(&rr.g),
        "emax": {
            "e_f": emax.e_f,
            "e_g": emax.e_g,
            "t": emax.t,
            "checked_degree": emax.checked_degree,
            "dim_intersection": emax.dim_intersection,
            "dim_product": emax.dim_product,
            "condition_holds": emax.condition_holds,
            "e": emax.e,
        },
    })
}

pub fn distribution_section(dr: &DistributionRecord) -> Value {
    json!({
        "h1": render_poly(&dr.h1),
        "h2": render_poly(&dr.h2),
        "regular": dr.regular,
    })
}

/// Per-degree table: series coefficient vs brute-force dimension.
pub fn oracle_section(rows: &[(i64, i64, u64)]) -> Value {
    let table: Vec<Value> = rows
        .iter()
        .map(|&(t, series, oracle)| {
            json!({ "t": t, "series": series, "oracle": oracle, "match": series == oracle as i64 })
        })
        .collect();
    json!({ "max_degree": rows.last().map_or(0, |r| r.0), "table": table })
}

pub fn equi_section(eq: &EquiReport) -> Value {
    json!({
        "deg_gens": eq.deg_gens,
        "deg_RJ": eq.deg_rj,
        "dim_RJ": eq.dim_rj.map_or(Value::Null, |d| json!(d)),
        "height": eq.height,
        "pd_RJ": eq.pd_rj,
        "depth_RJ": eq.depth_rj,
        "betti_RJ": betti_json(&eq.betti_rj),
        "complex_RJ": complex_display(&eq.betti_rj),
        "tau": opt_i64(eq.tau),
        "ci": eq.ci,
        "perfect": eq.perfect,
        "saturated": eq.saturated,
        "aci": eq.aci,
        "value_class": eq.value_class,
        "identity_ok": eq.identity_ok,
        "bound_e2_ok": eq.bound_e2_ok,
    })
}

/// Ideal-mode document: the base report plus top-level deg_RJ (right after
/// bour) and the equi section.
pub fn equi_report_doc(
    hash: &str,
    seed: u64,
    theta: &ThetaMatrix,
    eq: &EquiReport,
) -> Map<String, Value> {
    let base = base_report(hash, seed, "ideal", theta, &eq.base);
    let mut m = Map::new();
    for (k, v) in base {
        let was_bour = k == "bour";
        m.insert(k, v);
        if was_bour {
            m.insert("deg_RJ".into(), json!(eq.deg_rj));
        }
    }
    m.insert("equi".into(), equi_section(eq));
    m
}

pub fn catalog_json(outcomes: &[VerifyOutcome], field: FieldSpec, seed: u64) -> Value {
    let mut total_diffs = 0usize;
    let entries: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            total_diffs += o.diffs.len();
            let mut m = Map::new();
            m.insert("name".into(), json!(o.name));
            m.insert("pattern".into(), json!(o.pattern));
            m.insert("n".into(), json!(o.n));
            m.insert("class".into(), json!(o.expected.class));
            match &o.report {
                Ok(rep) => {
                    m.insert("bour".into(), opt_i64(rep.bour_formula));
                    m.insert("e".into(), json!(rep.e));
                    m.insert("e0".into(), json!(rep.e0));
                    m.insert("e1".into(), json!(rep.e1_paper));
                    m.insert("shape".into(), json!(rep.shape.to_string()));
                    m.insert("betti".into(), betti_json(&rep.betti_q));
                }
                Err(err) => {
                    m.insert("error".into(), json!(err.to_string()));
                }
            }
            m.insert("status".into(), json!(if o.diffs.is_empty() { "ok" } else { "diff" }));
            m.insert("diffs".into(), json!(o.diffs));
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("engine_version".into(), json!(crate::ENGINE_VERSION));
    m.insert("field".into(), json!(field.to_string()));
    m.insert("seed".into(), json!(seed));
    m.insert("entries".into(), Value::Array(entries));
    m.insert("total_diffs".into(), json!(total_diffs));
    Value::Object(m)
}

const CATALOG_HEADER: [&str; 9] = ["name", "n", "class", "bour", "e", "e0", "e1", "shape", "status"];

fn aligned_table(rows: &[[String; 9]]) -> String {
    let widths: Vec<usize> =
        (0..9).map(|j| rows.iter().map(|r| r[j].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> =
            r.iter().enumerate().map(|(j, s)| format!("{:w$}", s, w = widths[j])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn catalog_text(outcomes: &[VerifyOutcome]) -> String {
    let mut rows: Vec<[String; 9]> = vec![CATALOG_HEADER.map(String::from)];
    for o in outcomes {
        let (bour, e, e0, e1, shape) = match &o.report {
            Ok(rep) => (
                rep.bour_formula.map_or("-".into(), |b| b.to_string()),
                rep.e.to_string(),
                rep.e0.to_string(),
                rep.e1_paper.to_string(),
                rep.shape.to_string(),
            ),
            Err(_) => ("!".into(), "!".into(), "!".into(), "!".into(), "error".into()),
        };
        rows.push([
            o.name.clone(),
            o.n.to_string(),
            o.expected.class.to_string(),
            bour,
            e,
            e0,
            e1,
            shape,
            if o.diffs.is_empty() { "ok".into() } else { "DIFF".into() },
        ]);
    }
    let mut out = aligned_table(&rows);
    for o in outcomes {
        for d in &o.diffs {
            let _ = writeln!(out, "  diff: {d}");
        }
    }
    out
}

fn betti_map_json(entries: &std::collections::BTreeMap<(usize, i64), usize>) -> Value {
    let rows: Vec<Value> = entries
        .iter()
        .map(|(&(i, d), &r)| json!({ "i": i, "degree": d, "rank": r }))
        .collect();
    Value::Array(rows)
}

/// The catalog as stated, without recomputation.
pub fn catalog_expected_text(entries: &[CatalogEntry]) -> String {
    let mut rows: Vec<[String; 9]> = vec![CATALOG_HEADER.map(String::from)];
    for e in entries {
        let x = &e.expected;
        rows.push([
            e.spec.name(),
            e.spec.n().to_string(),
            x.class.to_string(),
            x.bour.map_or("-".into(), |b| b.to_string()),
            x.e.to_string(),
            x.e0.to_string(),
            x.e1_paper.to_string(),
            x.shape.to_string(),
            "expected".into(),
        ]);
    }
    aligned_table(&rows)
}

pub fn catalog_expected_json(entries: &[CatalogEntry], seed: u64) -> Value {
    let list: Vec<Value> = entries
        .iter()
        .map(|e| {
            let x = &e.expected;
            let mut m = Map::new();
            m.insert("name".into(), json!(e.spec.name()));
            m.insert("pattern".into(), json!(e.spec.pattern.tag));
            m.insert("n".into(), json!(e.spec.n()));
            m.insert("class".into(), json!(x.class));
            m.insert("bour".into(), opt_i64(x.bour));
            m.insert("e".into(), json!(x.e));
            m.insert("e0".into(), json!(x.e0));
            m.insert("e1".into(), json!(x.e1_paper));
            m.insert("shape".into(), json!(x.shape.to_string()));
            m.insert("betti".into(), betti_map_json(&x.betti_q));
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("engine_version".into(), json!(crate::ENGINE_VERSION));
    m.insert("seed".into(), json!(seed));
    m.insert("entries".into(), Value::Array(list));
    Value::Object(m)
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn push_kv_block(out: &mut String, indent: &str, obj: &Map<String, Value>) {
    let width = obj.keys().map(|k| k.len()).max().unwrap_or(0);
    for (k, v) in obj {
        match v {
            Value::Object(inner) => {
                let _ = writeln!(out, "{indent}{k}:");
                push_kv_block(out, &format!("{indent}  "), inner);
            }
            Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
                let parts: Vec<String> = items.iter().map(scalar_text).collect();
                let _ = writeln!(out, "{indent}{:w$}  [{}]", k, parts.join(", "), w = width);
            }
            Value::Array(items) => {
                let _ = writeln!(out, "{indent}{k}:");
                for item in items {
                    if let Value::Object(inner) = item {
                        let parts: Vec<String> =
                            inner.iter().map(|(k, v)| format!("{k}={}", scalar_text(v))).collect();
                        let _ = writeln!(out, "{indent}  {}", parts.join("  "));
                    }
                }
            }
            scalar => {
                let _ = writeln!(out, "{indent}{:w$}  {}", k, scalar_text(scalar), w = width);
            }
        }
    }
}

/// Aligned-column text for --pretty, derived from the JSON report.
pub fn pretty_text(report: &Map<String, Value>) -> String {
    let mut out = String::new();
    let mut header = Vec::new();
    for key in ["mode", "field", "n", "seed", "engine_version", "input_hash"] {
        if let Some(v) = report.get(key) {
            header.push(format!("{key}={}", scalar_text(v)));
        }
    }
    out.push_str(&header.join("  "));
    out.push('\n');
    if let Some(Value::Object(theta)) = report.get("theta") {
        if let Some(Value::Array(rows)) = theta.get("rows") {
            let rendered: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.as_array().unwrap().iter().map(scalar_text).collect())
                .collect();
            out.push_str("theta:\n");
            for line in matrix_lines(&rendered) {
                let _ = writeln!(out, "  {line}");
            }
            let mut tail = Vec::new();
            for key in ["d1", "d2", "swapped", "jacobian"] {
                if let Some(v) = theta.get(key) {
                    tail.push(format!("{key}={}", scalar_text(v)));
                }
            }
            let _ = writeln!(out, "  {}", tail.join("  "));
        }
    }
    if let Some(b) = report.get("bour") {
        let _ = writeln!(out, "bour = {}", scalar_text(b));
    }
    if let Some(d) = report.get("deg_RJ") {
        let _ = writeln!(out, "deg_RJ = {}", scalar_text(d));
    }
    for key in
        ["invariants", "flags", "syz", "q", "equi", "resolution", "row_wise", "distribution", "oracle"]
    {
        if let Some(Value::Object(obj)) = report.get(key) {
            let _ = writeln!(out, "{key}:");
            push_kv_block(&mut out, "  ", obj);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn fnv1a_reference_vectors() {
        // Standard FNV-1a test vectors.
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn series_rendering() {
        let mut numer = BTreeMap::new();
        numer.insert(0, 2);
        numer.insert(1, 2);
        let hs = HilbertSeries { n: 8, numer, pole: 5 };
        assert_eq!(render_series(&hs), "(2 + 2*t)/(1 - t)^5");

        let mut numer = BTreeMap::new();
        numer.insert(-1, 2);
        numer.insert(0, -4);
        numer.insert(2, 1);
        let hs = HilbertSeries { n: 4, numer, pole: 1 };
        assert_eq!(render_series(&hs), "(2*t^-1 - 4 + t^2)/(1 - t)");

        let hs = HilbertSeries { n: 3, numer: BTreeMap::new(), pole: 0 };
        assert_eq!(render_series(&hs), "0");
    }

    #[test]
    fn hp_rendering() {
        let c = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(render_hp(&[c(3), c(1)]), "t + 3");
        assert_eq!(render_hp(&[c(0), c(-2), c(1)]), "t^2 - 2*t");
        assert_eq!(render_hp(&[]), "0");
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(render_hp(&[c(1), half]), "1/2*t + 1");
    }

    #[test]
    fn complex_and_betti_rendering() {
        let mut b = BettiTable { entries: BTreeMap::new() };
        b.entries.insert((0, -1), 2);
        b.entries.insert((1, 0), 4);
        b.entries.insert((2, 2), 5);
        b.entries.insert((3, 3), 4);
        b.entries.insert((4, 4), 1);
        assert_eq!(complex_display(&b), "0 -> R(-4) -> R^4(-3) -> R^5(-2) -> R^4 -> R^2(1)");
        let rows = betti_json(&b);
        assert_eq!(rows[0], json!({"i": 0, "degree": -1, "rank": 2}));
        assert_eq!(rows.as_array().unwrap().len(), 5);
    }

    #[test]
    fn matrix_alignment() {
        let rows = vec![
            vec!["x1".to_string(), "x2^2 + x3".to_string()],
            vec!["0".to_string(), "x1".to_string()],
        ];
        let lines = matrix_lines(&rows);
        assert_eq!(lines[0], "[ x1  x2^2 + x3 ]");
        assert_eq!(lines[1], "[ 0   x1        ]");
    }
}
