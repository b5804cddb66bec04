//! `gs`: command-line driver. Reports go to stdout as JSON, a short summary
//! to stderr. Exit status 0 on success, 1 when a hard assertion fails, 2 on
//! usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gs_core::auxfun::{InstanceSpec, Mode};
use gs_core::constants::{compute_constants, instance_threshold};
use gs_core::exact::IntMatrix;
use gs_core::numfield::{element_from_json, parse_element, FieldSpec, NFElement};
use gs_core::pipeline::{run_pipeline, with_precision_retry, PipelineOptions, DEFAULT_PRECISION};
use gs_core::report::interval_json;
use gs_core::siegel::{siegel_int, siegel_ok};
use gs_core::Error;
use rug::{Float, Integer};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gs", version, about = "Certified replay of the Gelfond-Schneider construction")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Working precision in bits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Target width for enclosures.
    #[arg(long, global = true)]
    target_width: Option<f64>,
    /// Suppress the summary on stderr.
    #[arg(long, global = true)]
    json_only: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enclosure of the house of an element.
    House(ElemArgs),
    /// Minimal and characteristic polynomial of an element.
    Minpoly(ElemArgs),
    /// Exact norm and trace of an element.
    Norm(ElemArgs),
    /// Small solution of an underdetermined system.
    Siegel {
        /// `{"field": ..., "rows": [[...]]}`, inline or a file path.
        #[arg(long)]
        matrix: String,
    },
    /// Every stage on an instance file.
    Pipeline(InstanceArgs),
    /// The integral identity for `ρ` on a synthetic instance.
    SyntheticValidate(InstanceArgs),
    /// The constants table of an instance.
    Constants(InstanceArgs),
    /// The contradiction threshold of an instance.
    Threshold(InstanceArgs),
}

#[derive(Args)]
struct ElemArgs {
    /// `{"poly": [...]}` or `"Q"`, inline or a file path.
    #[arg(long)]
    field: String,
    /// Literal such as `1/2 + 3*x`.
    #[arg(long)]
    elem: String,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Overrides `q` from the file.
    #[arg(long)]
    q: Option<u32>,
    /// Overrides `mode` from the file.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Gelfond,
    Synthetic,
}

/// A finished command: report, summary, and whether the hard checks held.
struct Outcome {
    report: Value,
    summary: String,
    failed: Option<String>,
}

impl Outcome {
    fn ok(report: Value, summary: String) -> Outcome {
        Outcome { report, summary, failed: None }
    }
}

struct CliError {
    code: u8,
    stage: &'static str,
    message: String,
}

fn input_error(stage: &'static str, e: impl ToString) -> CliError {
    CliError { code: 2, stage, message: e.to_string() }
}

/// Input problems exit 2, failures during computation exit 1.
fn classify(stage: &'static str, e: Error) -> CliError {
    let code = match e {
        Error::Parse(_)
        | Error::InvalidPolynomial(_)
        | Error::Reducible(_)
        | Error::ShapeError(_)
        | Error::InvalidInstance(_)
        | Error::Divisibility { .. }
        | Error::DegreeTooSmall(_)
        | Error::ParamError(_)
        | Error::DivisionByZero => 2,
        _ => 1,
    };
    CliError { code, stage, message: e.to_string() }
}

/// Inline JSON, or the contents of a file when the argument names one.
fn json_arg(stage: &'static str, s: &str) -> Result<Value, CliError> {
    match serde_json::from_str(s) {
        Ok(v) => Ok(v),
        Err(_) if Path::new(s).is_file() => {
            let text = std::fs::read_to_string(s).map_err(|e| input_error(stage, e))?;
            serde_json::from_str(&text).map_err(|e| input_error(stage, format!("{s}: {e}")))
        }
        Err(_) if s == "Q" => Ok(json!("Q")),
        Err(e) => Err(input_error(stage, format!("not JSON and not a file: {e}"))),
    }
}

fn load_element(args: &ElemArgs, precision: Option<u32>) -> Result<NFElement, CliError> {
    let spec = FieldSpec::from_json(&json_arg("field", &args.field)?).map_err(|e| classify("field", e))?;
    let (field, _) = with_precision_retry(precision.unwrap_or(DEFAULT_PRECISION), |p| spec.build(Some(p)));
    let field = field.map_err(|e| classify("field", e))?;
    parse_element(&field, &args.elem).map_err(|e| classify("element", e))
}

fn load_instance(args: &InstanceArgs) -> Result<InstanceSpec, CliError> {
    let text = std::fs::read_to_string(&args.instance).map_err(|e| input_error("instance", format!("{}: {e}", args.instance.display())))?;
    let mut raw: Value = serde_json::from_str(&text).map_err(|e| input_error("instance", e))?;
    if let Some(obj) = raw.as_object_mut() {
        if let Some(q) = args.q {
            obj.insert("q".into(), json!(q));
        }
        if let Some(m) = args.mode {
            obj.insert("mode".into(), json!(match m {
                ModeArg::Gelfond => "gelfond",
                ModeArg::Synthetic => "synthetic",
            }));
        }
    }
    InstanceSpec::from_json(&raw).map_err(|e| classify("instance", e))
}

fn house(cli: &Cli, args: &ElemArgs) -> Result<Outcome, CliError> {
    let e = load_element(args, cli.precision)?;
    let hv = match cli.target_width {
        Some(w) => e.house_within(&Float::with_val(64, w)),
        None => Ok(e.house()),
    }
    .map_err(|err| classify("house", err))?;
    let via = e.house_via_minpoly().map_err(|err| classify("house", err))?;
    let overlap = hv.value.overlaps(&via.value);
    let report = json!({
        "element": e.to_literal(),
        "field": e.field().describe(),
        "house": interval_json(&hv.value),
        "house_decimal": hv.value.to_string(),
        "house_via_minpoly": interval_json(&via.value),
        "enclosures_overlap": overlap,
    });
    let mut out = Outcome::ok(report, format!("house({}) ∈ {}", e.to_literal(), hv.value));
    if !overlap {
        out.failed = Some("house enclosures disagree".into());
    }
    Ok(out)
}

fn minpoly(cli: &Cli, args: &ElemArgs) -> Result<Outcome, CliError> {
    let e = load_element(args, cli.precision)?;
    let mp = e.minpoly();
    let cp = e.charpoly();
    let coeffs = |p: &gs_core::exact::QPoly| p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>();
    let report = json!({
        "element": e.to_literal(),
        "minpoly": coeffs(&mp),
        "minpoly_text": mp.to_string_with("x"),
        "degree": mp.degree(),
        "charpoly": coeffs(&cp),
    });
    Ok(Outcome::ok(report, format!("minpoly({}) = {}", e.to_literal(), mp.to_string_with("x"))))
}

fn norm(cli: &Cli, args: &ElemArgs) -> Result<Outcome, CliError> {
    let e = load_element(args, cli.precision)?;
    let n = e.norm();
    let report = json!({
        "element": e.to_literal(),
        "norm": n.to_string(),
        "trace": e.trace().to_string(),
        "integral": e.is_integral(),
    });
    Ok(Outcome::ok(report, format!("N({}) = {n}", e.to_literal())))
}

fn siegel(cli: &Cli, matrix: &str) -> Result<Outcome, CliError> {
    let v = json_arg("matrix", matrix)?;
    let fspec = FieldSpec::from_json(v.get("field").unwrap_or(&json!("Q"))).map_err(|e| classify("matrix", e))?;
    let field = fspec.build(cli.precision).map_err(|e| classify("matrix", e))?;
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| input_error("matrix", "matrix needs a \"rows\" array"))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| input_error("matrix", "each row must be an array"))?
                .iter()
                .map(|x| element_from_json(&field, x).map_err(|e| classify("matrix", e)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    if field.degree() == 1 {
        let ints = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.as_rational().filter(|q| *q.denom() == 1).map(|q| q.numer().clone()))
                    .collect::<Option<Vec<Integer>>>()
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| input_error("matrix", "entries over Q must be integers"))?;
        let a = IntMatrix::from_rows(&ints).map_err(|e| classify("matrix", e))?;
        let sol = siegel_int(&a).map_err(|e| classify("siegel", e))?;
        let exact = a.mul_vec(&sol.vector).iter().all(|x| *x == 0) && sol.vector.iter().any(|x| *x != 0);
        let vector: Vec<String> = sol.vector.iter().map(|x| x.to_string()).collect();
        let summary = format!("x = ({}), claimed bound {}", vector.join(", "), sol.claimed_bound);
        let report = json!({
            "vector": vector,
            "claimed_bound": interval_json(&sol.claimed_bound),
            "achieved": interval_json(&sol.achieved),
            "bound_satisfied": sol.bound_satisfied,
            "method": sol.method,
            "exact_annihilation": exact,
        });
        let mut out = Outcome::ok(report, summary);
        if !exact {
            out.failed = Some("siegel".into());
        }
        return Ok(out);
    }
    let sol = siegel_ok(&rows).map_err(|e| classify("siegel", e))?;
    let zero = NFElement::zero(&field);
    let exact = rows.iter().all(|r| {
        r.iter().zip(&sol.vector).fold(zero.clone(), |acc, (a, x)| &acc + &(a * x)).is_zero()
    }) && sol.vector.iter().any(|x| !x.is_zero());
    let vector: Vec<String> = sol.vector.iter().map(NFElement::to_literal).collect();
    let summary = format!("x = ({}), house ≤ {}", vector.join(", "), sol.achieved);
    let report = json!({
        "vector": vector,
        "claimed_bound": interval_json(&sol.claimed_bound),
        "achieved": interval_json(&sol.achieved),
        "bound_satisfied": sol.bound_satisfied,
        "method": sol.method,
        "exact_annihilation": exact,
    });
    let mut out = Outcome::ok(report, summary);
    if !exact {
        out.failed = Some("siegel".into());
    }
    Ok(out)
}

fn options(cli: &Cli) -> PipelineOptions {
    let mut o = PipelineOptions::default();
    if let Some(p) = cli.precision {
        o.precision = p;
    }
    if let Some(w) = cli.target_width {
        o.target_width = w;
    }
    o
}

fn pipeline(cli: &Cli, args: &InstanceArgs, synthetic_only: bool) -> Result<Outcome, CliError> {
    let spec = load_instance(args)?;
    if synthetic_only && spec.mode != Mode::Synthetic {
        return Err(input_error("instance", "synthetic-validate needs a synthetic instance"));
    }
    let rep = run_pipeline(&spec, &options(cli)).map_err(|e| classify("pipeline", e))?;
    let failed = rep.failed_checks();
    let mut lines = vec![
        format!("params: h={} m={} n={} q={} t={}", rep.params.h, rep.params.m, rep.params.n, rep.params.q, rep.params.t),
        format!("order: r={} l0={}", rep.witness.r, rep.witness.l0),
        format!("norm certificate: {}", rep.norm.holds()),
        format!("house bounds: {:?}, bound chain: {:?}", rep.house_rho_flags, rep.bound_chain_flags),
    ];
    if let Some(e) = &rep.eq7 {
        lines.push(format!("integral identity: overlap={} width={:.3e}", e.overlap, e.combined_width));
    }
    match (&rep.threshold, &rep.threshold_error) {
        (Some(t), _) => lines.push(format!("threshold: log10 r* ≈ {:.2}", t.r_star_log10)),
        (None, Some(e)) => lines.push(format!("threshold: {e}")),
        _ => {}
    }
    let report = if synthetic_only {
        json!({
            "echo": rep.echo,
            "params": rep.params,
            "witness": rep.witness,
            "eq7": rep.eq7,
            "hard_checks": rep.hard_checks,
            "precision_bits": rep.precision_bits,
        })
    } else {
        serde_json::to_value(&rep).expect("serialisable")
    };
    Ok(Outcome {
        report,
        summary: lines.join("\n"),
        failed: (!failed.is_empty()).then(|| failed.join(", ")),
    })
}

fn constants(cli: &Cli, args: &InstanceArgs, threshold: bool) -> Result<Outcome, CliError> {
    let spec = load_instance(args)?;
    let (loaded, _) = with_precision_retry(cli.precision.unwrap_or(DEFAULT_PRECISION), |p| spec.load(Some(p)));
    let (inst, params) = loaded.map_err(|e| classify("instance", e))?;
    let (consts, _) = with_precision_retry(inst.field().precision(), |p| compute_constants(&inst.with_precision(p)?, &params));
    let consts = consts.map_err(|e| classify("constants", e))?;
    if !threshold {
        let summary = format!("log10 c15 ≤ {:.3}, c7 forms agree: {}", consts.log10_upper("c15"), consts.c7_forms_agree);
        return Ok(Outcome::ok(consts.to_json(), summary));
    }
    let (_, t) = instance_threshold(&inst, &params).map_err(|e| classify("threshold", e))?;
    let summary = format!("log10 r* ≈ {:.3}, certified: {}", t.r_star_log10, t.certified());
    let failed = (!t.certified()).then(|| "threshold certificate".to_string());
    Ok(Outcome { report: serde_json::to_value(&t).expect("serialisable"), summary, failed })
}

/// Writes the report to stdout; a closed pipe is not an error.
fn emit(v: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("serialisable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::House(a) => house(&cli, a),
        Cmd::Minpoly(a) => minpoly(&cli, a),
        Cmd::Norm(a) => norm(&cli, a),
        Cmd::Siegel { matrix } => siegel(&cli, matrix),
        Cmd::Pipeline(a) => pipeline(&cli, a, false),
        Cmd::SyntheticValidate(a) => pipeline(&cli, a, true),
        Cmd::Constants(a) => constants(&cli, a, false),
        Cmd::Threshold(a) => constants(&cli, a, true),
    };
    match result {
        Ok(out) => {
            emit(&out.report);
            if !cli.json_only {
                eprintln!("{}", out.summary);
            }
            match out.failed {
                None => ExitCode::SUCCESS,
                Some(stage) => {
                    eprintln!("assertion failed: {stage}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            emit(&json!({"error": e.message, "stage": e.stage}));
            eprintln!("error in {}: {}", e.stage, e.message);
            ExitCode::from(e.code)
        }
    }
}
