//! Input documents: JSON with keys exactly `n`, `field`, `mode`,
//! `rows` | `gens` | `pair`, `options`.

use crate::field::FieldSpec;
use crate::parse::parse_poly;
use crate::poly::Polynomial;
use serde_json::Value;
use std::fmt;

#[derive(Debug, Clone)]
pub enum InputError {
    /// Malformed JSON or a polynomial entry that does not lex; carries a
    /// position. Exit code 1.
    Parse(String),
    /// Structurally sound document with bad shape or values. Exit code 2.
    Validation(Vec<String>),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Parse(msg) => write!(f, "{msg}"),
            InputError::Validation(msgs) => write!(f, "{}", msgs.join("; ")),
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone)]
pub struct Options {
    pub resolution: bool,
    /// Max degree for the brute-force cross-check; None disables it.
    pub oracle: Option<i64>,
    pub row_wise: bool,
    pub distribution: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { resolution: false, oracle: None, row_wise: false, distribution: false }
    }
}

#[derive(Debug, Clone)]
pub enum ParsedMode {
    Matrix(Vec<Vec<Polynomial>>),
    Ideal(Vec<Polynomial>),
    Jacobian(Polynomial, Polynomial),
}

impl ParsedMode {
    pub fn tag(&self) -> &'static str {
        match self {
            ParsedMode::Matrix(_) => "matrix",
            ParsedMode::Ideal(_) => "ideal",
            ParsedMode::Jacobian(..) => "jacobian",
        }
    }
}

#[derive(Debug, Clone)]
pub struct InputDocument {
    pub n: usize,
    pub field: FieldSpec,
    pub mode: ParsedMode,
    pub options: Options,
}

fn validation(msg: String) -> InputError {
    InputError::Validation(vec![msg])
}

fn field_spec(v: &Value) -> Result<FieldSpec, InputError> {
    match v {
        Value::String(s) => FieldSpec::parse(s).map_err(|e| validation(format!("field: {e}"))),
        Value::Object(m) => {
            if m.len() == 1 {
                if let Some(p) = m.get("Fp").and_then(Value::as_u64) {
                    return FieldSpec::parse(&format!("Fp:{p}"))
                        .map_err(|e| validation(format!("field: {e}")));
                }
            }
            Err(validation("field: expected \"QQ\" or {\"Fp\": prime}".into()))
        }
        _ => Err(validation("field: expected \"QQ\" or {\"Fp\": prime}".into())),
    }
}

fn string_at<'a>(v: &'a Value, what: &str) -> Result<&'a str, InputError> {
    v.as_str().ok_or_else(|| validation(format!("{what}: expected a string")))
}

fn poly_at(v: &Value, what: &str, n: usize, field: FieldSpec) -> Result<Polynomial, InputError> {
    let s = string_at(v, what)?;
    parse_poly(s, n, field).map_err(|e| InputError::Parse(format!("{what}: {e}")))
}

fn bool_opt(m: &serde_json::Map<String, Value>, key: &str) -> Result<bool, InputError> {
    match m.get(key) {
        None => Ok(false),
        Some(Value::Bool(b)) => Ok(*b),
        Some(_) => Err(validation(format!("options.{key}: expected a boolean"))),
    }
}

fn options(v: Option<&Value>) -> Result<Options, InputError> {
    let m = match v {
        None => return Ok(Options::default()),
        Some(Value::Object(m)) => m,
        Some(_) => return Err(validation("options: expected an object".into())),
    };
    for key in m.keys() {
        if !matches!(key.as_str(), "resolution" | "oracle" | "row_wise" | "distribution") {
            return Err(validation(format!("options: unknown key {key:?}")));
        }
    }
    let oracle = match m.get("oracle") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_i64()
                .filter(|k| *k >= 0)
                .ok_or_else(|| validation("options.oracle: expected a degree bound".into()))?,
        ),
    };
    Ok(Options {
        resolution: bool_opt(m, "resolution")?,
        oracle,
        row_wise: bool_opt(m, "row_wise")?,
        distribution: bool_opt(m, "distribution")?,
    })
}

/// Parse and shape-check a document. `field_override` (from --field)
/// replaces the document's field. Entry polynomials are parsed here so a
/// bad entry reports its coordinates and byte position.
pub fn parse_document(
    src: &str,
    field_override: Option<FieldSpec>,
) -> Result<InputDocument, InputError> {
    let value: Value =
        serde_json::from_str(src).map_err(|e| InputError::Parse(format!("input: {e}")))?;
    let top = match &value {
        Value::Object(m) => m,
        _ => return Err(validation("input: expected a JSON object".into())),
    };

    let mut errs = Vec::new();
    for key in top.keys() {
        if !matches!(key.as_str(), "n" | "field" | "mode" | "rows" | "gens" | "pair" | "options") {
            errs.push(format!("input: unknown key {key:?}"));
        }
    }

    let n = match top.get("n").and_then(Value::as_u64) {
        Some(n) => n as usize,
        None => {
            errs.push("n: expected a positive integer".into());
            0
        }
    };
    if top.get("n").is_some() && n < 3 {
        errs.push(format!("n: need at least 3 variables, got {n}"));
    }

    let field = match field_override {
        Some(f) => f,
        None => match top.get("field") {
            Some(v) => match field_spec(v) {
                Ok(f) => f,
                Err(InputError::Validation(mut v)) => {
                    errs.append(&mut v);
                    FieldSpec::QQ
                }
                Err(e) => return Err(e),
            },
            None => {
                errs.push("field: missing".into());
                FieldSpec::QQ
            }
        },
    };

    let mode = match top.get("mode").and_then(Value::as_str) {
        Some(m @ ("matrix" | "ideal" | "jacobian")) => m,
        Some(other) => {
            errs.push(format!("mode: expected matrix | ideal | jacobian, got {other:?}"));
            ""
        }
        None => {
            errs.push("mode: missing".into());
            ""
        }
    };
    let payload_key = match mode {
        "matrix" => "rows",
        "ideal" => "gens",
        "jacobian" => "pair",
        _ => "",
    };
    for key in ["rows", "gens", "pair"] {
        if top.contains_key(key) && key != payload_key && !mode.is_empty() {
            errs.push(format!("{key}: not used in {mode} mode"));
        }
    }

    let opts = match options(top.get("options")) {
        Ok(o) => o,
        Err(InputError::Validation(mut v)) => {
            errs.append(&mut v);
            Options::default()
        }
        Err(e) => return Err(e),
    };

    if !errs.is_empty() {
        return Err(InputError::Validation(errs));
    }

    let parsed = match mode {
        "matrix" => {
            let rows = top
                .get("rows")
                .and_then(Value::as_array)
                .ok_or_else(|| validation("rows: expected a 2x4 array of strings".into()))?;
            if rows.len() != 2 {
                return Err(validation(format!("rows: expected 2 rows, got {}", rows.len())));
            }
            let mut out = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                let row = row
                    .as_array()
                    .ok_or_else(|| validation(format!("rows[{i}]: expected an array")))?;
                if row.len() != 4 {
                    return Err(validation(format!(
                        "rows[{i}]: expected 4 entries, got {}",
                        row.len()
                    )));
                }
                let mut entries = Vec::new();
                for (j, v) in row.iter().enumerate() {
                    entries.push(poly_at(v, &format!("rows[{i}][{j}]"), n, field)?);
                }
                out.push(entries);
            }
            ParsedMode::Matrix(out)
        }
        "ideal" => {
            let gens = top
                .get("gens")
                .and_then(Value::as_array)
                .ok_or_else(|| validation("gens: expected 3 generator strings".into()))?;
            if gens.len() != 3 {
                return Err(validation(format!("gens: expected 3 generators, got {}", gens.len())));
            }
            let mut out = Vec::new();
            for (j, v) in gens.iter().enumerate() {
                out.push(poly_at(v, &format!("gens[{j}]"), n, field)?);
            }
            ParsedMode::Ideal(out)
        }
        "jacobian" => {
            let pair = top
                .get("pair")
                .and_then(Value::as_array)
                .ok_or_else(|| validation("pair: expected 2 polynomial strings".into()))?;
            if pair.len() != 2 {
                return Err(validation(format!(
                    "pair: expected 2 polynomials, got {}",
                    pair.len()
                )));
            }
            let f = poly_at(&pair[0], "pair[0]", n, field)?;
            let g = poly_at(&pair[1], "pair[1]", n, field)?;
            ParsedMode::Jacobian(f, g)
        }
        _ => unreachable!(),
    };

    Ok(InputDocument { n, field, mode: parsed, options: opts })
}
