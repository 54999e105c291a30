//! Command line for the graded decomposition toolkit: loads a session
//! (a JSON file or an embedded fixture), runs one computation, and
//! reports on standard output as text or JSON.
//!
//! Exit codes: 0 success (and passing checks), 1 validation failure or
//! a failing check, 2 computation error.

use clap::{Parser, Subcommand, ValueEnum};
use gradec_core::{
    clear_denominators, decomposition_matrix, emit_session, export_module, factorization_check,
    fingerprint, fixture, fixture_session, graded_character, modular_reduce, parse_session,
    simple_modules, specialize_algebra, transport_fingerprint, Error, Fingerprint,
    GradedDecompMatrix, GradedModuleRep, Specialization, ValidatedSession,
    DEFAULT_FINGERPRINT_DEPTH, FIXTURE_NAMES,
};
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "gradec",
    version,
    about = "Exact graded decomposition matrices for finite-dimensional graded algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to a session file (JSON)
    #[arg(long, global = true, value_name = "PATH")]
    session: Option<PathBuf>,

    /// Name of an embedded fixture to use as the session
    #[arg(long, global = true, value_name = "NAME")]
    fixture: Option<String>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for the randomized parts of the simple-module search
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate the session, reporting its contents
    Validate,
    /// Graded character of a module on the degree-0 basis
    Character {
        #[arg(long)]
        module: String,
    },
    /// Graded fingerprint of a module (per-degree characteristic polynomials)
    Fingerprint {
        #[arg(long)]
        module: String,
        /// Maximum word length in degree-0 basis elements
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Clear denominators and reduce a module along a specialization
    Specialize {
        #[arg(long)]
        module: String,
        #[arg(long)]
        spec: String,
    },
    /// Simple modules of the algebra, optionally specialized first
    Simples {
        #[arg(long)]
        spec: Option<String>,
    },
    /// Graded decomposition matrix of the session modules under a specialization
    Decompose {
        /// Restrict to these module rows (default: all session modules)
        #[arg(long = "module")]
        modules: Vec<String>,
        #[arg(long)]
        spec: String,
    },
    /// Check that reduction commutes with the fingerprint transport
    Diagram {
        #[arg(long)]
        module: String,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Verify the factorization of decomposition matrices through a tower
    Factorcheck {
        #[arg(long)]
        tower: String,
    },
    /// List the embedded fixtures, or print one as a session file
    Fixtures {
        #[arg(long)]
        name: Option<String>,
    },
}

struct Output {
    exit: u8,
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let out = execute(cli).unwrap_or_else(|failure| failure);
    let body = match format {
        Format::Text => out.text,
        Format::Json => {
            let mut body = serde_json::to_string_pretty(&out.json).expect("report serializes");
            body.push('\n');
            body
        }
    };
    // A consumer that stops reading (head, grep -q) closes the pipe;
    // treat that as a normal exit rather than an error.
    let mut stdout = io::stdout();
    if let Err(err) = stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()) {
        if err.kind() != io::ErrorKind::BrokenPipe {
            let _ = writeln!(io::stderr(), "gradec: {err}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(out.exit)
}

fn kind(err: &Error) -> &'static str {
    use Error::*;
    match err {
        Syntax(_) => "Syntax",
        UndeclaredVariable(_) => "UndeclaredVariable",
        InexactDivision(_) => "InexactDivision",
        DivisionByZero(_) => "DivisionByZero",
        NonInvertibleDenominator(_) => "NonInvertibleDenominator",
        NonSquare(_, _) => "NonSquare",
        AlgebraMismatch(_) => "AlgebraMismatch",
        FieldMismatch(_) => "FieldMismatch",
        RingMismatch(_) => "RingMismatch",
        NoSolution(_) => "NoSolution",
        NegativeMultiplicity(_) => "NegativeMultiplicity",
        NonUnitAssignment(_) => "NonUnitAssignment",
        FractionFieldMismatch(_) => "FractionFieldMismatch",
        LatticeNotFound(_) => "LatticeNotFound",
        KernelNotNested(_) => "KernelNotNested",
        PhiNotDefinedOnB(_) => "PhiNotDefinedOnB",
        UnsupportedField(_) => "UnsupportedField",
        DimensionBound(_, _) => "DimensionBound",
        NotSplit(_) => "NotSplit",
        NotGradable(_) => "NotGradable",
        OracleMismatch(_) => "OracleMismatch",
        FactorizationFailure(_) => "FactorizationFailure",
        UnknownFixture(_) => "UnknownFixture",
        SchemaError(_) => "SchemaError",
        ValidationError(_) => "ValidationError",
        Internal(_) => "Internal",
    }
}

fn failure(exit: u8, err: &Error) -> Output {
    let message = err.to_string();
    Output {
        exit,
        text: format!("error: {message}\n"),
        json: json!({
            "status": "error",
            "errors": [{"kind": kind(err), "message": message}],
        }),
    }
}

/// Errors raised while loading or resolving names exit 1; errors raised
/// by the computation itself exit 2.
fn load(cli: &Cli) -> Result<ValidatedSession, Output> {
    let loaded = match (&cli.session, &cli.fixture) {
        (Some(_), Some(_)) => Err(Error::SchemaError(
            "pass either --session or --fixture, not both".into(),
        )),
        (Some(path), None) => parse_session(path),
        (None, Some(name)) => fixture_session(name),
        (None, None) => Err(Error::SchemaError(
            "no input: pass --session <path> or --fixture <name>".into(),
        )),
    };
    loaded.map_err(|e| failure(1, &e))
}

fn find_module<'s>(s: &'s ValidatedSession, name: &str) -> Result<&'s GradedModuleRep, Output> {
    s.module(name).ok_or_else(|| {
        failure(1, &Error::ValidationError(format!("no module named `{name}` in the session")))
    })
}

fn find_spec<'s>(s: &'s ValidatedSession, name: &str) -> Result<&'s Specialization, Output> {
    s.specialization(name).ok_or_else(|| {
        failure(
            1,
            &Error::ValidationError(format!("no specialization named `{name}` in the session")),
        )
    })
}

fn compute(e: Error) -> Output {
    failure(2, &e)
}

fn execute(cli: Cli) -> Result<Output, Output> {
    match &cli.command {
        Command::Fixtures { name } => run_fixtures(name.as_deref()),
        Command::Validate => run_validate(&load(&cli)?),
        Command::Character { module } => run_character(&load(&cli)?, module),
        Command::Fingerprint { module, depth } => {
            run_fingerprint(&load(&cli)?, module, depth.unwrap_or(DEFAULT_FINGERPRINT_DEPTH))
        }
        Command::Specialize { module, spec } => run_specialize(&load(&cli)?, module, spec),
        Command::Simples { spec } => run_simples(&load(&cli)?, spec.as_deref(), cli.seed),
        Command::Decompose { modules, spec } => {
            run_decompose(&load(&cli)?, modules, spec, cli.seed)
        }
        Command::Diagram { module, spec, depth } => run_diagram(
            &load(&cli)?,
            module,
            spec,
            depth.unwrap_or(DEFAULT_FINGERPRINT_DEPTH),
        ),
        Command::Factorcheck { tower } => run_factorcheck(&load(&cli)?, tower, cli.seed),
    }
}

fn run_fixtures(name: Option<&str>) -> Result<Output, Output> {
    match name {
        None => {
            let mut text = String::new();
            for n in FIXTURE_NAMES {
                let _ = writeln!(text, "{n}");
            }
            Ok(Output { exit: 0, text, json: json!({"status": "ok", "fixtures": FIXTURE_NAMES}) })
        }
        Some(n) => {
            let file = fixture(n).map_err(|e| failure(1, &e))?;
            let text = emit_session(&file);
            let json: Value = serde_json::from_str(&text).expect("emitted session is JSON");
            Ok(Output { exit: 0, text, json })
        }
    }
}

fn run_validate(session: &ValidatedSession) -> Result<Output, Output> {
    let module_names: Vec<&str> = session.modules.iter().map(|(n, _)| n.as_str()).collect();
    let spec_names: Vec<&str> = session.specializations.iter().map(|s| s.name()).collect();
    let tower_names: Vec<&str> = session.towers.iter().map(|(n, _)| n.as_str()).collect();
    let mut text = String::from("OK\n");
    let _ = writeln!(text, "session: {}", session.file.name);
    let _ = writeln!(text, "ring: {}", session.ring);
    let _ = writeln!(text, "algebra: {} (dim {})", session.file.algebra.name, session.algebra.dim());
    let _ = writeln!(text, "modules: {}", join_or_none(&module_names));
    let _ = writeln!(text, "specializations: {}", join_or_none(&spec_names));
    let _ = writeln!(text, "towers: {}", join_or_none(&tower_names));
    Ok(Output {
        exit: 0,
        text,
        json: json!({
            "status": "ok",
            "session": session.file.name,
            "ring": session.ring.to_string(),
            "algebra": {"name": session.file.algebra.name, "dim": session.algebra.dim()},
            "modules": module_names,
            "specializations": spec_names,
            "towers": tower_names,
        }),
    })
}

fn join_or_none(names: &[&str]) -> String {
    if names.is_empty() {
        "(none)".to_string()
    } else {
        names.join(", ")
    }
}

fn run_character(session: &ValidatedSession, module: &str) -> Result<Output, Output> {
    let m = find_module(session, module)?;
    let chi = graded_character(m);
    let alg = m.algebra();
    let mut text = format!("graded character of {module} over {}\n", m.field());
    let mut values = Map::new();
    for i in alg.deg0_indices() {
        let value = chi.value(i).map(|p| p.to_string()).unwrap_or_else(|| "0".to_string());
        let _ = writeln!(text, "{}: {}", alg.label(i), value);
        values.insert(alg.label(i).to_string(), Value::String(value));
    }
    Ok(Output {
        exit: 0,
        text,
        json: json!({
            "status": "ok",
            "module": module,
            "field": m.field().to_string(),
            "character": values,
        }),
    })
}

fn fingerprint_json(fp: &Fingerprint) -> Value {
    let mut words = Map::new();
    for word in sorted_words(fp) {
        let mut by_degree = Map::new();
        if let Some(polys) = fp.value(&word) {
            for (deg, poly) in polys {
                by_degree.insert(deg.to_string(), Value::String(poly.to_string()));
            }
        }
        words.insert(word, Value::Object(by_degree));
    }
    Value::Object(words)
}

fn sorted_words(fp: &Fingerprint) -> Vec<String> {
    let mut words: Vec<String> = fp.words().cloned().collect();
    words.sort();
    words
}

fn run_fingerprint(session: &ValidatedSession, module: &str, depth: usize) -> Result<Output, Output> {
    let m = find_module(session, module)?;
    let fp = fingerprint(m, depth);
    let mut text = format!("fingerprint of {module} at depth {depth} over {}\n", m.field());
    for word in sorted_words(&fp) {
        if let Some(polys) = fp.value(&word) {
            for (deg, poly) in polys {
                let _ = writeln!(text, "word `{word}`, degree {deg}: {poly}");
            }
        }
    }
    Ok(Output {
        exit: 0,
        text,
        json: json!({
            "status": "ok",
            "module": module,
            "depth": depth,
            "field": m.field().to_string(),
            "fingerprint": fingerprint_json(&fp),
        }),
    })
}

fn run_specialize(session: &ValidatedSession, module: &str, spec: &str) -> Result<Output, Output> {
    let m = find_module(session, module)?;
    let theta = find_spec(session, spec)?;
    let (cleared, factors) = clear_denominators(m, theta).map_err(compute)?;
    let reduced = modular_reduce(&cleared, theta).map_err(compute)?;
    let factor_strings: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
    let section = export_module(module, &reduced);
    let mut text = format!("specialized {module} along {spec}\n");
    let _ = writeln!(text, "rescalings: [{}]", factor_strings.join(", "));
    let _ = writeln!(
        text,
        "reduced module over {}: dim {}, degrees {:?}",
        reduced.field(),
        reduced.dim(),
        reduced.degrees()
    );
    for (label, rows) in &section.action {
        let printed: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(", "))).collect();
        let _ = writeln!(text, "action {label}: [{}]", printed.join(", "));
    }
    Ok(Output {
        exit: 0,
        text,
        json: json!({
            "status": "ok",
            "module": module,
            "spec": spec,
            "rescalings": factor_strings,
            "reduced": serde_json::to_value(&section).expect("module section serializes"),
        }),
    })
}

fn run_simples(session: &ValidatedSession, spec: Option<&str>, seed: u64) -> Result<Output, Output> {
    let algebra = match spec {
        None => session.algebra.clone(),
        Some(name) => {
            let theta = find_spec(session, name)?;
            Arc::new(specialize_algebra(&session.algebra, theta).map_err(compute)?)
        }
    };
    let set = simple_modules(&algebra, seed).map_err(compute)?;
    let mut text = format!(
        "{} simple modules over {} (seed {seed})\n",
        set.len(),
        algebra.ring()
    );
    let mut listed = Vec::new();
    for (i, s) in set.simples().iter().enumerate() {
        let _ = writeln!(text, "S{i}: dim {}, degrees {:?}", s.dim(), s.degrees());
        listed.push(json!({"name": format!("S{i}"), "dim": s.dim(), "degrees": s.degrees()}));
    }
    Ok(Output {
        exit: 0,
        text,
        json: json!({
            "status": "ok",
            "field": algebra.ring().to_string(),
            "seed": seed,
            "count": set.len(),
            "simples": listed,
        }),
    })
}

fn laurent_json(poly: &gradec_core::LaurentPoly) -> Value {
    let mut map = Map::new();
    for (exp, coeff) in poly.terms() {
        let rendered = coeff.to_string();
        let value = rendered.parse::<i64>().map(Value::from).unwrap_or(Value::String(rendered));
        map.insert(exp.to_string(), value);
    }
    Value::Object(map)
}

fn decomp_json(d: &GradedDecompMatrix) -> Value {
    let matrix: Vec<Vec<Value>> = (0..d.rows())
        .map(|i| (0..d.cols()).map(|j| laurent_json(d.entry(i, j))).collect())
        .collect();
    let rescalings: Vec<Vec<String>> = d
        .rescalings()
        .iter()
        .map(|row| row.iter().map(|s| s.to_string()).collect())
        .collect();
    json!({
        "rows": d.row_labels(),
        "columns": d.col_labels(),
        "matrix": matrix,
        "rescalings": rescalings,
        "convention": d.grading_convention(),
    })
}

fn decomp_text(d: &GradedDecompMatrix, indent: &str) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "{indent}columns: {}", d.col_labels().join(", "));
    let width = d.row_labels().iter().map(|l| l.len()).max().unwrap_or(0);
    for i in 0..d.rows() {
        let cells: Vec<String> = (0..d.cols()).map(|j| d.entry(i, j).to_string()).collect();
        let _ = writeln!(text, "{indent}{:width$}: [{}]", d.row_labels()[i], cells.join(", "));
    }
    for (i, row) in d.rescalings().iter().enumerate() {
        if row.iter().any(|f| !f.is_one()) {
            let printed: Vec<String> = row.iter().map(|f| f.to_string()).collect();
            let _ = writeln!(
                text,
                "{indent}rescaling {}: [{}]",
                d.row_labels()[i],
                printed.join(", ")
            );
        }
    }
    text
}

fn run_decompose(
    session: &ValidatedSession,
    only: &[String],
    spec: &str,
    seed: u64,
) -> Result<Output, Output> {
    let theta = find_spec(session, spec)?;
    let rows: Vec<(String, GradedModuleRep)> = if only.is_empty() {
        session.modules.clone()
    } else {
        let mut rows = Vec::with_capacity(only.len());
        for name in only {
            rows.push((name.clone(), find_module(session, name)?.clone()));
        }
        rows
    };
    let d = decomposition_matrix(&rows, theta, seed).map_err(compute)?;
    let mut text = format!("graded decomposition matrix along {spec} (seed {seed})\n");
    let _ = writeln!(text, "convention: {}", d.grading_convention());
    text.push_str(&decomp_text(&d, ""));
    let mut json = decomp_json(&d);
    let obj = json.as_object_mut().expect("object");
    obj.insert("status".into(), json!("ok"));
    obj.insert("spec".into(), json!(spec));
    obj.insert("seed".into(), json!(seed));
    Ok(Output { exit: 0, text, json })
}

fn run_diagram(
    session: &ValidatedSession,
    module: &str,
    spec: &str,
    depth: usize,
) -> Result<Output, Output> {
    let m = find_module(session, module)?;
    let theta = find_spec(session, spec)?;
    let (cleared, _) = clear_denominators(m, theta).map_err(compute)?;
    let reduced = modular_reduce(&cleared, theta).map_err(compute)?;
    let transported =
        transport_fingerprint(theta, &fingerprint(&cleared, depth)).map_err(compute)?;
    let target = fingerprint(&reduced, depth);
    let ok = gradec_core::fingerprint_equal(&transported, &target).map_err(compute)?;
    if ok {
        let text = format!(
            "PASS: the transported fingerprint of {module} matches its reduction along {spec} (depth {depth})\n"
        );
        let json = json!({
            "status": "pass",
            "module": module,
            "spec": spec,
            "depth": depth,
        });
        return Ok(Output { exit: 0, text, json });
    }
    let location = first_discrepancy(&transported, &target);
    let mut text = format!(
        "FAIL: the transported fingerprint of {module} disagrees with its reduction along {spec} (depth {depth})\n"
    );
    let mut json = json!({
        "status": "fail",
        "module": module,
        "spec": spec,
        "depth": depth,
    });
    if let Some((word, degree)) = location {
        let _ = writeln!(text, "first discrepancy at word `{word}`, degree {degree}");
        json.as_object_mut()
            .expect("object")
            .insert("discrepancy".into(), json!({"word": word, "degree": degree}));
    }
    Ok(Output { exit: 1, text, json })
}

/// Lexicographically first (word, degree) where the per-degree
/// characteristic polynomials differ.
fn first_discrepancy(a: &Fingerprint, b: &Fingerprint) -> Option<(String, i64)> {
    let mut words: Vec<String> = sorted_words(a);
    for w in sorted_words(b) {
        if !words.contains(&w) {
            words.push(w);
        }
    }
    words.sort();
    for word in words {
        let mut degrees: Vec<i64> = Vec::new();
        for fp in [a, b] {
            if let Some(m) = fp.value(&word) {
                for d in m.keys() {
                    if !degrees.contains(d) {
                        degrees.push(*d);
                    }
                }
            }
        }
        degrees.sort();
        for d in degrees {
            if a.charpoly_at(&word, d) != b.charpoly_at(&word, d) {
                return Some((word, d));
            }
        }
    }
    None
}

fn run_factorcheck(session: &ValidatedSession, tower: &str, seed: u64) -> Result<Output, Output> {
    let t = session.tower(tower).ok_or_else(|| {
        failure(1, &Error::ValidationError(format!("no tower named `{tower}` in the session")))
    })?;
    let fac = match factorization_check(t, &session.modules, seed) {
        Ok(fac) => fac,
        Err(Error::FactorizationFailure(msg)) => {
            let text = format!("FAIL: {msg}\n");
            let json = json!({
                "status": "fail",
                "tower": tower,
                "errors": [{"kind": "FactorizationFailure", "message": msg}],
            });
            return Ok(Output { exit: 1, text, json });
        }
        Err(e) => return Err(compute(e)),
    };
    let mut text =
        format!("PASS: D_theta' = D_theta * D_(theta,theta') for tower {tower} (seed {seed})\n");
    let _ = writeln!(text, "D_theta:");
    text.push_str(&decomp_text(&fac.d_theta, "  "));
    let _ = writeln!(text, "D_theta':");
    text.push_str(&decomp_text(&fac.d_theta_prime, "  "));
    let _ = writeln!(text, "D_(theta,theta') (adjustment):");
    text.push_str(&decomp_text(&fac.adjustment, "  "));
    Ok(Output {
        exit: 0,
        text,
        json: json!({
            "status": "pass",
            "tower": tower,
            "seed": seed,
            "d_theta": decomp_json(&fac.d_theta),
            "d_theta_prime": decomp_json(&fac.d_theta_prime),
            "adjustment": decomp_json(&fac.adjustment),
        }),
    })
}
