use bourbaki_core::bourbaki::{
    analyze, distribution_check, equigenerated, jacobian_theta, lemma_emax_check, row_wise,
    validate, EngineError, ThetaMatrix,
};
use bourbaki_core::hilbert::{hilbert_of_ideal_quotient, hilbert_of_quotient, HilbertSeries};
use bourbaki_core::input::{parse_document, InputDocument, InputError, ParsedMode};
use bourbaki_core::modgb::{ideal_gb, kernel, FreeModule};
use bourbaki_core::oracle::{ideal_dim_bruteforce, quotient_dim_bruteforce};
use bourbaki_core::poly::Polynomial;
use bourbaki_core::selftest::{self, SelftestConfig};
use bourbaki_core::{kw, report, FieldSpec};
use clap::{Parser, Subcommand};
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

// Exit codes: 0 ok, 1 parse error, 2 validation failure, 3 invariant
// violation / catalog mismatch / failed self-test.
const EXIT_PARSE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "bourbaki", version, about = "Syzygy and Bourbaki-degree analysis of 2x4 matrices of forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze an input document (matrix, ideal or jacobian mode).
    Analyze {
        file: PathBuf,
        /// Include the minimal free resolution section.
        #[arg(long)]
        resolution: bool,
        /// Compare the syzygies of the full matrix with those of each row.
        #[arg(long)]
        row_wise: bool,
        /// Run the tangent-distribution regularity test (n = 4).
        #[arg(long)]
        distribution: bool,
        /// Cross-check Hilbert function values by dense elimination up to this degree.
        #[arg(long, value_name = "K")]
        oracle: Option<i64>,
        /// Override the document's coefficient field (QQ or Fp:P).
        #[arg(long, value_parser = FieldSpec::parse)]
        field: Option<FieldSpec>,
        /// Aligned text instead of JSON.
        #[arg(long)]
        pretty: bool,
        /// Write the report here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Print the Kronecker-Weierstrass catalog; with --verify, recompute and diff it.
    KwCatalog {
        /// Recompute every entry and compare against the stated invariants.
        #[arg(long)]
        verify: bool,
        /// Restrict to entries whose name contains this string.
        #[arg(long, value_name = "NAME")]
        only: Option<String>,
        #[arg(long, value_parser = FieldSpec::parse)]
        field: Option<FieldSpec>,
        /// Emit the JSON table instead of aligned text.
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Analyze a three-equigenerated ideal document (ideal mode only).
    Equi { file: PathBuf },
    /// Run the randomized property suites.
    Selftest {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = report::DEFAULT_SEED)]
        seed: u64,
    },
    /// Per-degree brute-force Hilbert-function check of a document.
    Oracle {
        file: PathBuf,
        #[arg(long, value_name = "K", default_value_t = 8)]
        max_degree: i64,
        #[arg(long, value_parser = FieldSpec::parse)]
        field: Option<FieldSpec>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("BOURBAKI_THREADS") {
        if let Ok(k) = threads.trim().parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
    match Cli::parse().command {
        Command::Analyze {
            file,
            resolution,
            row_wise,
            distribution,
            oracle,
            field,
            pretty,
            out,
        } => cmd_analyze(&file, resolution, row_wise, distribution, oracle, field, pretty, out),
        Command::KwCatalog { verify, only, field, json, out } => {
            cmd_kw_catalog(verify, only.as_deref(), field, json, out)
        }
        Command::Equi { file } => cmd_equi(&file),
        Command::Selftest { samples, seed } => cmd_selftest(samples, seed),
        Command::Oracle { file, max_degree, field } => cmd_oracle(&file, max_degree, field),
    }
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn engine_fail(err: &EngineError) -> ExitCode {
    match err {
        EngineError::Validation(msgs) => {
            for m in msgs {
                eprintln!("error: {m}");
            }
            ExitCode::from(EXIT_VALIDATION)
        }
        EngineError::Invariant(_) => fail(EXIT_INVARIANT, &err.to_string()),
    }
}

fn read_document(
    path: &Path,
    field: Option<FieldSpec>,
) -> Result<(InputDocument, String), ExitCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, &format!("{}: {e}", path.display())))?;
    let doc = parse_document(&text, field).map_err(|e| match e {
        InputError::Parse(msg) => fail(EXIT_PARSE, &msg),
        InputError::Validation(msgs) => {
            for m in &msgs {
                eprintln!("error: {m}");
            }
            ExitCode::from(EXIT_VALIDATION)
        }
    })?;
    Ok((doc, report::input_hash(text.as_bytes())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), ExitCode> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| fail(EXIT_PARSE, &format!("{}: {e}", path.display()))),
    }
}

fn render(map: &Map<String, Value>, pretty: bool) -> String {
    if pretty {
        report::pretty_text(map)
    } else {
        let mut s = serde_json::to_string_pretty(&Value::Object(map.clone())).unwrap();
        s.push('\n');
        s
    }
}

/// Theta of a three-equigenerated ideal: a unit column next to the
/// generators, so the syzygies of the matrix are those of the ideal.
fn ideal_theta(gens: &[Polynomial], n: usize, field: FieldSpec) -> Result<ThetaMatrix, EngineError> {
    let zero = Polynomial::zero(n, field);
    let one = Polynomial::one(n, field);
    let rows = vec![
        vec![zero.clone(), zero.clone(), zero.clone(), one],
        vec![gens[0].clone(), gens[1].clone(), gens[2].clone(), zero],
    ];
    validate(rows, n, field)
}

fn oracle_rows(
    theta: &ThetaMatrix,
    hs: &HilbertSeries,
    max_degree: i64,
) -> Vec<(i64, i64, u64)> {
    let target = theta.target();
    let cols = theta.map().cols.clone();
    (0..=max_degree.max(0))
        .map(|t| (t, hs.value_at(t), quotient_dim_bruteforce(&target, &cols, t)))
        .collect()
}

fn oracle_rows_ideal(
    gens: &[Polynomial],
    n: usize,
    field: FieldSpec,
    hs: &HilbertSeries,
    max_degree: i64,
) -> Vec<(i64, i64, u64)> {
    let ring = FreeModule::new(n, field, vec![0]);
    (0..=max_degree.max(0))
        .map(|t| {
            let dim = ring.dim_at(t) - ideal_dim_bruteforce(n, field, gens, t);
            (t, hs.value_at(t), dim)
        })
        .collect()
}

fn oracle_mismatch(rows: &[(i64, i64, u64)]) -> Option<String> {
    rows.iter().find(|&&(_, series, dim)| series != dim as i64).map(|&(t, series, dim)| {
        format!("oracle dimension {dim} != series coefficient {series} at degree {t}")
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_analyze(
    file: &Path,
    resolution: bool,
    row_wise_flag: bool,
    distribution: bool,
    oracle: Option<i64>,
    field: Option<FieldSpec>,
    pretty: bool,
    out: Option<PathBuf>,
) -> ExitCode {
    let (doc, hash) = match read_document(file, field) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let opts = &doc.options;
    let resolution = resolution || opts.resolution;
    let row_wise_flag = row_wise_flag || opts.row_wise;
    let distribution = distribution || opts.distribution;
    let oracle = oracle.or(opts.oracle);

    let (theta, mode_tag, equi) = match &doc.mode {
        ParsedMode::Matrix(rows) => {
            match validate(rows.clone(), doc.n, doc.field) {
                Ok(t) => (t, "matrix", None),
                Err(e) => return engine_fail(&e),
            }
        }
        ParsedMode::Jacobian(f, g) => match jacobian_theta(f, g) {
            Ok(t) => (t, "jacobian", None),
            Err(e) => return engine_fail(&e),
        },
        ParsedMode::Ideal(gens) => {
            let eq = match equigenerated(gens, doc.n, doc.field) {
                Ok(eq) => eq,
                Err(e) => return engine_fail(&e),
            };
            let theta = match ideal_theta(gens, doc.n, doc.field) {
                Ok(t) => t,
                Err(e) => return engine_fail(&e),
            };
            (theta, "ideal", Some(eq))
        }
    };

    let mut code = ExitCode::SUCCESS;
    let mut map = match &equi {
        Some(eq) => report::equi_report_doc(&hash, report::DEFAULT_SEED, &theta, eq),
        None => {
            let rep = match analyze(&theta) {
                Ok(r) => r,
                Err(e) => return engine_fail(&e),
            };
            let mut m = report::base_report(&hash, report::DEFAULT_SEED, mode_tag, &theta, &rep);
            if resolution {
                m.insert("resolution".into(), report::resolution_section(&rep));
            }
            m
        }
    };
    if resolution {
        if let Some(eq) = &equi {
            map.insert("resolution".into(), report::resolution_section(&eq.base));
        }
    }
    if row_wise_flag {
        let rr = match row_wise(&theta) {
            Ok(rr) => rr,
            Err(e) => return engine_fail(&e),
        };
        let emax = match lemma_emax_check(&theta) {
            Ok(r) => r,
            Err(e) => return engine_fail(&e),
        };
        map.insert("row_wise".into(), report::row_wise_section(&rr, &emax));
    }
    if distribution {
        match distribution_check(&theta) {
            Ok(dr) => {
                map.insert("distribution".into(), report::distribution_section(&dr));
            }
            Err(e) => return engine_fail(&e),
        }
    }
    if let Some(k) = oracle {
        let rows = match &doc.mode {
            ParsedMode::Ideal(gens) => {
                let gb = ideal_gb(doc.n, doc.field, gens);
                let hs = hilbert_of_ideal_quotient(doc.n, doc.field, &gb);
                oracle_rows_ideal(gens, doc.n, doc.field, &hs, k)
            }
            _ => {
                let hs = hilbert_of_quotient(&theta.target(), &kernel(&theta.map()).image_gb);
                oracle_rows(&theta, &hs, k)
            }
        };
        if let Some(msg) = oracle_mismatch(&rows) {
            eprintln!("error: invariant violated: {msg}");
            code = ExitCode::from(EXIT_INVARIANT);
        }
        map.insert("oracle".into(), report::oracle_section(&rows));
    }
    if emit(&render(&map, pretty), out.as_deref()).is_err() {
        return ExitCode::from(EXIT_PARSE);
    }
    code
}

fn cmd_equi(file: &Path) -> ExitCode {
    let (doc, hash) = match read_document(file, None) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let gens = match &doc.mode {
        ParsedMode::Ideal(gens) => gens,
        other => {
            return fail(
                EXIT_VALIDATION,
                &format!("equi needs an ideal-mode document, got {}", other.tag()),
            )
        }
    };
    let eq = match equigenerated(gens, doc.n, doc.field) {
        Ok(eq) => eq,
        Err(e) => return engine_fail(&e),
    };
    let theta = match ideal_theta(gens, doc.n, doc.field) {
        Ok(t) => t,
        Err(e) => return engine_fail(&e),
    };
    let map = report::equi_report_doc(&hash, report::DEFAULT_SEED, &theta, &eq);
    match emit(&render(&map, false), None) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn cmd_kw_catalog(
    verify: bool,
    only: Option<&str>,
    field: Option<FieldSpec>,
    json: bool,
    out: Option<PathBuf>,
) -> ExitCode {
    let field = field.unwrap_or(FieldSpec::QQ);
    let text;
    let mut code = ExitCode::SUCCESS;
    if verify {
        let outcomes = kw::verify_catalog(field, only);
        if outcomes.is_empty() {
            return fail(EXIT_VALIDATION, "no catalog entry matches the filter");
        }
        let diffs: usize = outcomes.iter().map(|o| o.diffs.len()).sum();
        if diffs > 0 {
            code = ExitCode::from(EXIT_INVARIANT);
        }
        text = if json {
            let mut s = serde_json::to_string_pretty(&report::catalog_json(
                &outcomes,
                field,
                report::DEFAULT_SEED,
            ))
            .unwrap();
            s.push('\n');
            s
        } else {
            report::catalog_text(&outcomes)
        };
    } else {
        let entries: Vec<kw::CatalogEntry> = kw::catalog()
            .into_iter()
            .filter(|e| match only {
                Some(pat) => e.spec.name().to_lowercase().contains(&pat.to_lowercase()),
                None => true,
            })
            .collect();
        if entries.is_empty() {
            return fail(EXIT_VALIDATION, "no catalog entry matches the filter");
        }
        text = if json {
            let mut s = serde_json::to_string_pretty(&report::catalog_expected_json(
                &entries,
                report::DEFAULT_SEED,
            ))
            .unwrap();
            s.push('\n');
            s
        } else {
            report::catalog_expected_text(&entries)
        };
    }
    if emit(&text, out.as_deref()).is_err() {
        return ExitCode::from(EXIT_PARSE);
    }
    code
}

fn cmd_selftest(samples: usize, seed: u64) -> ExitCode {
    let cfg = SelftestConfig { samples, seed };
    println!("selftest seed {seed} samples {samples}");
    let results = selftest::run(&cfg);
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut failed = 0usize;
    for r in &results {
        println!(
            "{:w$}  {:>4} samples  {}",
            r.name,
            r.total,
            if r.passed() { "ok" } else { "FAIL" },
            w = width
        );
        for f in &r.failures {
            println!("  {f}");
            failed += 1;
        }
    }
    if failed == 0 {
        println!("selftest ok");
        ExitCode::SUCCESS
    } else {
        println!("selftest failed ({failed} failures; rerun with --seed to reproduce)");
        ExitCode::from(EXIT_INVARIANT)
    }
}

fn cmd_oracle(file: &Path, max_degree: i64, field: Option<FieldSpec>) -> ExitCode {
    let (doc, hash) = match read_document(file, field) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let rows = match &doc.mode {
        ParsedMode::Ideal(gens) => {
            let gb = ideal_gb(doc.n, doc.field, gens);
            let hs = hilbert_of_ideal_quotient(doc.n, doc.field, &gb);
            oracle_rows_ideal(gens, doc.n, doc.field, &hs, max_degree)
        }
        ParsedMode::Matrix(rows) => {
            let theta = match validate(rows.clone(), doc.n, doc.field) {
                Ok(t) => t,
                Err(e) => return engine_fail(&e),
            };
            let hs = hilbert_of_quotient(&theta.target(), &kernel(&theta.map()).image_gb);
            oracle_rows(&theta, &hs, max_degree)
        }
        ParsedMode::Jacobian(f, g) => {
            let theta = match jacobian_theta(f, g) {
                Ok(t) => t,
                Err(e) => return engine_fail(&e),
            };
            let hs = hilbert_of_quotient(&theta.target(), &kernel(&theta.map()).image_gb);
            oracle_rows(&theta, &hs, max_degree)
        }
    };
    let mut map = Map::new();
    map.insert("engine_version".into(), Value::String(bourbaki_core::ENGINE_VERSION.into()));
    map.insert("input_hash".into(), Value::String(hash));
    map.insert("field".into(), Value::String(doc.field.to_string()));
    map.insert("seed".into(), Value::from(report::DEFAULT_SEED));
    map.insert("n".into(), Value::from(doc.n));
    map.insert("mode".into(), Value::String(doc.mode.tag().into()));
    map.insert("oracle".into(), report::oracle_section(&rows));
    let code = match oracle_mismatch(&rows) {
        Some(msg) => {
            eprintln!("error: invariant violated: {msg}");
            ExitCode::from(EXIT_INVARIANT)
        }
        None => ExitCode::SUCCESS,
    };
    if emit(&render(&map, false), None).is_err() {
        return ExitCode::from(EXIT_PARSE);
    }
    code
}
