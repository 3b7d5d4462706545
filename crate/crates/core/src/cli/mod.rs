//! Command-line front end: subcommands, text tables and the versioned JSON
//! document.
//!
//! Every command yields a `RunRecord`. Standard output carries either the
//! text rendering or the record as JSON; `--out` also writes the record,
//! with the wall time, to a file. The JSON on standard output has no timing
//! field and every map in it is ordered, so repeated runs are byte-identical.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumerate::{
    census_algebras, census_modules, chain_analysis, enumerated_algebras, EnumerationConfig, ModuleBounds,
};
use crate::error::{Error, Result};
use crate::exactlin::FieldSpec;
use crate::families::{family_hilbert_rational, family_mi_bounds, koszul_poincare, verify_family_with};
use crate::freealg::{parse_presentation, Document, ModulePresentation};
use crate::groebner::{algebra_dims, groebner_truncated, growth_estimate, module_dims};
use crate::periodicity::{certify_period, default_max_shift, hilbert_series_set, shift_bounds, PeriodOutcome};
use crate::resolution::{algebra_homology, ideal_resolution, minimal_resolution};
use crate::series::{euler_check, TruncatedSeries};

pub const SCHEMA: &str = "hilbseries/1";

#[derive(Debug, Parser)]
#[command(name = "hilbseries", version, about = "Hilbert series, resolutions and periodicity of graded algebras")]
pub struct Cli {
    /// Emit the JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the run record (with wall time) to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated Gröbner basis and growth estimate.
    Gb(GbArgs),
    /// Hilbert function of the algebra or of a module.
    Hilb(HilbArgs),
    /// Betti table of a minimal resolution.
    Resolve(ResolveArgs),
    /// Certify periodicity of a module's Hilbert function.
    Period(PeriodArgs),
    /// Census of Hilbert series over all bounded presentations.
    Enum(EnumArgs),
    /// Verify a family of ideals and its series.
    Family(FamilyArgs),
    /// Compare two truncated series.
    Cmp(CmpArgs),
}

#[derive(Debug, Args)]
pub struct GbArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub deg: u32,
}

#[derive(Debug, Args)]
pub struct HilbArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub deg: u32,
    #[arg(long)]
    pub module: Option<String>,
}

#[derive(Debug, Args)]
pub struct ResolveArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub deg: u32,
    #[arg(long, default_value_t = 3)]
    pub imax: usize,
    /// Resolve this module instead of the trivial module.
    #[arg(long, conflicts_with = "ideal")]
    pub module: Option<String>,
    /// Resolve this right ideal.
    #[arg(long)]
    pub ideal: Option<String>,
}

#[derive(Debug, Args)]
pub struct PeriodArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub deg: u32,
    /// Defaults to the algebra as a module over itself.
    #[arg(long)]
    pub module: Option<String>,
    #[arg(long)]
    pub max_shift: Option<u32>,
}

#[derive(Debug, Args)]
pub struct EnumArgs {
    /// Prime field order.
    #[arg(long)]
    pub field: u32,
    #[arg(long)]
    pub gens: usize,
    /// Generator degrees, comma-separated; all 1 by default.
    #[arg(long, value_delimiter = ',')]
    pub gendegs: Vec<u32>,
    #[arg(long)]
    pub reldeg: u32,
    #[arg(long)]
    pub m3: Option<u32>,
    #[arg(long)]
    pub deg: u32,
    #[arg(long)]
    pub budget: Option<u128>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Census modules with these generator degrees over every algebra.
    #[arg(long, value_delimiter = ',')]
    pub module_gendegs: Vec<u32>,
    #[arg(long, default_value_t = 1)]
    pub module_reldeg: u32,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub deg: u32,
    #[arg(long, default_value_t = 3)]
    pub imax: usize,
    #[arg(long)]
    pub search_witnesses: bool,
}

#[derive(Debug, Args)]
pub struct CmpArgs {
    pub a: PathBuf,
    pub b: PathBuf,
}

/// The persisted outcome of one command.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub schema: &'static str,
    pub command: String,
    pub version: &'static str,
    pub config: Value,
    pub field: Option<String>,
    pub truncation: Option<u32>,
    pub result: Value,
}

/// What the process should print and return.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    pub record: Option<RunRecord>,
}

struct Done {
    record: RunRecord,
    text: String,
    exit_code: i32,
}

fn load(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_presentation(&text)
}

fn select_module(doc: &Document, name: Option<&str>) -> Result<ModulePresentation> {
    match name {
        None => Ok(ModulePresentation::regular(doc.algebra.clone())),
        Some(n) => doc.module(n).cloned().ok_or_else(|| Error::Input(format!("no module named `{n}`"))),
    }
}

fn record(command: &str, config: Value, field: Option<FieldSpec>, truncation: Option<u32>, result: Value) -> RunRecord {
    RunRecord {
        schema: SCHEMA,
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION"),
        config,
        field: field.map(|f| f.to_string()),
        truncation,
        result,
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn cmd_gb(a: &GbArgs) -> Result<Done> {
    let doc = load(&a.file)?;
    let p = &doc.algebra;
    let gb = groebner_truncated(p, a.deg)?;
    let growth = growth_estimate(&gb);
    let basis: Vec<String> = gb.basis().iter().map(|g| g.format(p.field(), p.gens())).collect();
    let leading: Vec<String> = gb.leading_words().iter().map(|w| p.gens().format_word(w)).collect();
    let mut text = String::new();
    for b in &basis {
        text.push_str(b);
        text.push('\n');
    }
    text.push_str(&format!("complete through degree {}: {}\n", a.deg, if gb.complete() { "yes" } else { "no" }));
    text.push_str(&format!("growth: {}{}", growth.kind, if growth.certified { "" } else { " (uncertified)" }));
    let result = json!({ "basis": basis, "leading_words": leading, "complete": gb.complete(), "growth": growth });
    Ok(Done {
        record: record("gb", json!({ "file": a.file, "deg": a.deg }), Some(p.field()), Some(a.deg), result),
        text,
        exit_code: 0,
    })
}

fn cmd_hilb(a: &HilbArgs) -> Result<Done> {
    let doc = load(&a.file)?;
    let dims: TruncatedSeries = match &a.module {
        None => TruncatedSeries::new(algebra_dims(&doc.algebra, a.deg)?),
        Some(_) => {
            let m = select_module(&doc, a.module.as_deref())?;
            TruncatedSeries::from_usize(&module_dims(&m, a.deg)?.0)
        }
    };
    Ok(Done {
        text: dims.to_string(),
        record: record(
            "hilb",
            json!({ "file": a.file, "deg": a.deg, "module": a.module }),
            Some(doc.algebra.field()),
            Some(a.deg),
            json!({ "dims": dims }),
        ),
        exit_code: 0,
    })
}

fn cmd_resolve(a: &ResolveArgs) -> Result<Done> {
    let doc = load(&a.file)?;
    let p = &doc.algebra;
    let mut extra = json!({});
    let profile = if let Some(name) = &a.ideal {
        let i = doc
            .ideals
            .iter()
            .find(|i| &i.name == name)
            .ok_or_else(|| Error::Input(format!("no ideal named `{name}`")))?;
        ideal_resolution(p, &i.generators, a.imax, a.deg)?
    } else if let Some(name) = &a.module {
        minimal_resolution(&select_module(&doc, Some(name))?, a.imax, a.deg)?
    } else {
        let prof = algebra_homology(p, a.imax, a.deg)?;
        let residual = euler_check(p, &prof.tor_all(), a.deg)?;
        extra = json!({ "euler_residual": residual, "euler_residual_zero": residual.is_zero() });
        prof
    };
    let mut result = to_value(&profile);
    if let (Value::Object(r), Value::Object(e)) = (&mut result, extra) {
        r.extend(e);
    }
    Ok(Done {
        text: profile.to_string(),
        record: record(
            "resolve",
            json!({ "file": a.file, "deg": a.deg, "imax": a.imax, "module": a.module, "ideal": a.ideal }),
            Some(p.field()),
            Some(a.deg),
            result,
        ),
        exit_code: 0,
    })
}

fn cmd_period(a: &PeriodArgs) -> Result<Done> {
    let doc = load(&a.file)?;
    let m = select_module(&doc, a.module.as_deref())?;
    let (_, rb) = shift_bounds(&m);
    if a.deg < rb {
        return Err(Error::TruncationTooSmall {
            needed: rb,
            have: a.deg,
            context: "relation bound of the shifts".into(),
        });
    }
    let s = match a.max_shift {
        Some(s) => s,
        None => default_max_shift(&m, a.deg)?.min(a.deg - rb),
    };
    let report = certify_period(&m, s, a.deg)?;
    let set = hilbert_series_set(&m, s, a.deg)?;
    let mut text = report.to_string();
    text.push_str(&format!("\ndistinct shift series through degree {}: {}", set.truncation, set.series.len()));
    let mut result = to_value(&report);
    if let Value::Object(r) = &mut result {
        r.insert("max_shift".into(), json!(s));
        r.insert("distinct_shift_series".into(), json!(set.series.len()));
        if let PeriodOutcome::Certified(c) = &report.outcome {
            r.insert("rational_form_text".into(), json!(c.rational_form.to_string()));
        }
    }
    Ok(Done {
        text,
        record: record(
            "period",
            json!({ "file": a.file, "deg": a.deg, "module": a.module, "max_shift": a.max_shift }),
            Some(doc.algebra.field()),
            Some(a.deg),
            result,
        ),
        exit_code: 0,
    })
}

fn cmd_enum(a: &EnumArgs) -> Result<Done> {
    let field = FieldSpec::prime(a.field)?;
    let degrees = if a.gendegs.is_empty() { vec![1; a.gens] } else { a.gendegs.clone() };
    if degrees.len() != a.gens {
        return Err(Error::Input(format!("--gendegs lists {} degrees for {} generators", degrees.len(), a.gens)));
    }
    let mut cfg = EnumerationConfig::new(field, degrees, a.reldeg, a.deg);
    cfg.m3_filter = a.m3;
    cfg.threads = a.threads;
    if let Some(b) = a.budget {
        cfg.budget = b;
    }
    let census = if a.module_gendegs.is_empty() {
        census_algebras(&cfg)?
    } else {
        let algebras = enumerated_algebras(&cfg)?;
        cfg.module = Some(ModuleBounds { gen_degrees: a.module_gendegs.clone(), max_rel_degree: a.module_reldeg });
        census_modules(&cfg, &algebras)?
    };
    let chains = chain_analysis(&census)?;
    let mut text = format!(
        "{} presentations, {} filtered out, {} distinct series through degree {}\n",
        census.enumerated,
        census.filtered_out,
        census.distinct(),
        census.truncation
    );
    for e in &census.entries {
        text.push_str(&format!("{:>8}  {}  [{}]\n", e.count, e.series, e.sample_relations.join("; ")));
    }
    text.push_str(&format!(
        "longest lex chain {}, longest coefficientwise chain {}",
        chains.lex_descending.len(),
        chains.coefficientwise_ascending.len()
    ));
    // the thread count does not affect results, so it is not echoed
    let config = json!({
        "field": a.field, "gens": a.gens, "gendegs": cfg.gen_degrees, "reldeg": a.reldeg, "m3": a.m3,
        "deg": a.deg, "budget": cfg.budget.to_string(),
        "module_gendegs": a.module_gendegs, "module_reldeg": a.module_reldeg,
    });
    let result = json!({
        "enumerated": census.enumerated.to_string(),
        "filtered_out": census.filtered_out.to_string(),
        "distinct": census.distinct(),
        "census": census.entries.iter().map(|e| json!({
            "series": e.series, "count": e.count.to_string(), "sample_relations": e.sample_relations,
        })).collect::<Vec<_>>(),
        "chains": chains,
    });
    Ok(Done { text, record: record("enum", config, Some(field), Some(a.deg), result), exit_code: 0 })
}

fn cmd_family(a: &FamilyArgs) -> Result<Done> {
    let doc = load(&a.file)?;
    let f = verify_family_with(&doc.algebra, &doc.ideals, &doc.witnesses, a.deg, a.search_witnesses)?;
    let r = f.report();
    let mut text = String::new();
    for i in &r.ideals {
        let m0 = i.m0.map_or("-".to_string(), |v| v.to_string());
        let status = if i.failures.is_empty() { "ok".to_string() } else { i.failures.join("; ") };
        text.push_str(&format!("{:<8} m_0 {:<3} {}\n", i.name, m0, status));
    }
    text.push_str(&format!(
        "family degree {}; {}",
        r.family_degree,
        if r.verified { "verified" } else { "NOT verified" }
    ));
    let mut result = json!({ "report": r });
    let exit_code = if r.verified {
        let bounds = family_mi_bounds(&f, a.imax)?;
        let forms = family_hilbert_rational(&f)?;
        for (b, fm) in bounds.iter().zip(&forms) {
            let ms: Vec<String> = b.m.iter().map(|m| m.to_string()).collect();
            text.push_str(&format!("\n{:<8} m_i {}  I(z)/A(z) = {}", b.name, ms.join(" "), fm.form));
        }
        result["bounds"] = to_value(&bounds);
        result["forms"] = to_value(&forms);
        if r.family_degree <= 1 {
            let p = koszul_poincare(&f, a.imax)?;
            for pr in &p {
                text.push_str(&format!("\n{:<8} P(z) = {}", pr.name, pr.poincare));
            }
            result["poincare"] = to_value(&p);
        }
        0
    } else {
        1
    };
    Ok(Done {
        text,
        record: record(
            "family",
            json!({ "file": a.file, "deg": a.deg, "imax": a.imax, "search_witnesses": a.search_witnesses }),
            Some(doc.algebra.field()),
            Some(a.deg),
            result,
        ),
        exit_code,
    })
}

fn cmd_cmp(a: &CmpArgs) -> Result<Done> {
    let read = |p: &Path| -> Result<TruncatedSeries> {
        TruncatedSeries::from_csv(&std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?)
    };
    let (x, y) = (read(&a.a)?, read(&a.b)?);
    let lex = x.lex_compare(&y)?;
    let leq = x.coefficientwise_leq(&y)?;
    let geq = y.coefficientwise_leq(&x)?;
    Ok(Done {
        text: lex.to_string(),
        record: record(
            "cmp",
            json!({ "a": a.a, "b": a.b }),
            None,
            Some(x.truncation() as u32),
            json!({ "lex": lex, "text": lex.to_string(), "coefficientwise_leq": leq, "coefficientwise_geq": geq }),
        ),
        exit_code: 0,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gb(_) => "gb",
        Command::Hilb(_) => "hilb",
        Command::Resolve(_) => "resolve",
        Command::Period(_) => "period",
        Command::Enum(_) => "enum",
        Command::Family(_) => "family",
        Command::Cmp(_) => "cmp",
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::Inhomogeneous { .. } => "inhomogeneous",
        Error::UnknownGenerator { .. } => "unknown-generator",
        Error::DegreeZeroGenerator { .. } => "degree-zero-generator",
        Error::FieldMismatch => "field-mismatch",
        Error::TruncationTooSmall { .. } => "truncation-too-small",
        Error::TruncationMismatch { .. } => "truncation-mismatch",
        Error::NotInvertible { .. } => "not-invertible",
        Error::BudgetExceeded { .. } => "budget-exceeded",
        Error::Verification(_) => "verification",
        Error::Input(_) => "input",
        Error::Io(_) => "io",
    }
}

/// Run an already parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    let started = Instant::now();
    let name = command_name(&cli.command);
    let done = match &cli.command {
        Command::Gb(a) => cmd_gb(a),
        Command::Hilb(a) => cmd_hilb(a),
        Command::Resolve(a) => cmd_resolve(a),
        Command::Period(a) => cmd_period(a),
        Command::Enum(a) => cmd_enum(a),
        Command::Family(a) => cmd_family(a),
        Command::Cmp(a) => cmd_cmp(a),
    };
    let (rec, text, code, stderr) = match done {
        Ok(d) => (d.record, d.text, d.exit_code, String::new()),
        Err(e) => {
            let rec = record(
                name,
                Value::Null,
                None,
                None,
                json!({ "error": { "kind": error_kind(&e), "message": e.to_string(), "exit_code": e.exit_code() } }),
            );
            (rec, String::new(), e.exit_code(), format!("error: {e}"))
        }
    };
    let mut stderr = stderr;
    if let Some(path) = &cli.out {
        let mut v = to_value(&rec);
        v["wall_time_ms"] = json!(started.elapsed().as_millis() as u64);
        let body = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
        if let Err(e) = std::fs::write(path, body) {
            stderr.push_str(&format!("error: cannot write {}: {e}", path.display()));
            return Outcome { exit_code: 2, stdout: String::new(), stderr, record: Some(rec) };
        }
    }
    let stdout = if cli.json {
        serde_json::to_string_pretty(&rec).expect("serializable") + "\n"
    } else if text.is_empty() {
        String::new()
    } else {
        text + "\n"
    };
    Outcome { exit_code: code, stdout, stderr, record: Some(rec) }
}

/// Parse `argv` (program name first) and run it. Usage errors exit with 2,
/// `--help` and `--version` with 0.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (rendered, String::new()) } else { (String::new(), rendered) };
            Outcome { exit_code: code, stdout, stderr, record: None }
        }
    }
}

/// The JSON document for `argv` (program name omitted), whatever the
/// `--json` flag says; usage errors become an error document.
pub fn run_json<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("hilbseries")).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(mut cli) => {
            cli.json = true;
            let o = execute(&cli);
            (o.exit_code, o.stdout)
        }
        Err(e) => {
            let rec = record(
                "usage",
                Value::Null,
                None,
                None,
                json!({ "error": { "kind": "usage", "message": e.to_string(), "exit_code": 2 } }),
            );
            (2, serde_json::to_string_pretty(&rec).expect("serializable") + "\n")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    fn run(args: &[&str]) -> Outcome {
        dispatch(std::iter::once("hilbseries").chain(args.iter().copied()))
    }

    #[test]
    fn hilb_text() {
        let f = file("field Q\ngen x:1 y:1\nrel x*y - y*x\n");
        let o = run(&["hilb", f.path().to_str().unwrap(), "--deg", "6"]);
        assert_eq!(o.exit_code, 0);
        assert_eq!(o.stdout, "1 2 3 4 5 6 7\n");
    }

    #[test]
    fn cmp_text() {
        let a = file("1,3,0\n");
        let b = file("1\n2\n9\n");
        let o = run(&["cmp", a.path().to_str().unwrap(), b.path().to_str().unwrap()]);
        assert_eq!(o.stdout, "GREATER (lex, first difference at degree 1)\n");
    }

    #[test]
    fn exit_codes() {
        let bad = file("field Q\ngen x:1\nrel x*+x\n");
        assert_eq!(run(&["hilb", bad.path().to_str().unwrap(), "--deg", "3"]).exit_code, 2);
        assert_eq!(run(&["bogus"]).exit_code, 2);
        let lin = file("field GF(2)\ngen x:1 y:1\nrel y^2; y*x\n");
        let o = run(&["period", lin.path().to_str().unwrap(), "--deg", "4", "--max-shift", "10"]);
        assert_eq!(o.exit_code, 3);
        let fam = file("field Q\ngen x:1 y:1\nrel x*y - y*x\nideal Z = 0\nideal X = (x)\nwit X Z Z 2 x\n");
        assert_eq!(run(&["family", fam.path().to_str().unwrap(), "--deg", "5"]).exit_code, 1);
    }

    #[test]
    fn json_document() {
        let f = file("field GF(2)\ngen x:1 y:1\nrel y^2; y*x\n");
        let (code, out) = run_json(["period", f.path().to_str().unwrap(), "--deg", "12", "--max-shift", "4"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["result"]["outcome"]["period"], 1);
        assert_eq!(v["result"]["rational_form_text"], "(1 + z) / (1 - z)");
        assert!(v.get("wall_time_ms").is_none());
    }
}
