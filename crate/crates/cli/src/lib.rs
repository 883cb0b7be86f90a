//! Command-line front end: argument parsing, command dispatch and JSON reports.

use std::path::Path;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use starmul_core::catalog::{broken_variant, fixture_names, load_fixture, Fixture};
use starmul_core::dsl::{parse_mupoly, parse_solution, parse_system, print_system};
use starmul_core::finder::{find_a, find_a_monic, TensorFamily};
use starmul_core::mu_ring::{star_mul, star_pow, MonicZ, SolutionVec};
use starmul_core::numeric::{grid_residuals, NumericSystem};
use starmul_core::series::{series_eval_lower, ConvergenceMode, SeriesSpec};
use starmul_core::system::{check_admissibility, residuals, SystemSpec};
use starmul_core::algebra::{Rational, Vars};
use starmul_core::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "starmul", version, about = "Quotient-ring multiplication of PDE solutions")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Realness requirement on eigenvalues for series.
    #[arg(long, value_enum, default_value_t = Mode::Strict, global = true)]
    pub mode: Mode,
    /// Numeric tolerance for finite-difference residuals.
    #[arg(long, default_value_t = 1e-6, global = true)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Strict,
    Relaxed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Exp,
    Sin,
    Cos,
    Geometric,
    Explicit,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether the system admits *-multiplication.
    Check {
        #[arg(long)]
        system: String,
    },
    /// Star product of two solutions.
    Mul {
        #[arg(long)]
        system: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Star power of a solution.
    Pow {
        #[arg(long)]
        system: String,
        #[arg(long)]
        base: String,
        #[arg(long = "exp", allow_hyphen_values = true)]
        exponent: i64,
    },
    /// Residual forms of a candidate solution.
    Verify {
        #[arg(long)]
        system: String,
        #[arg(long)]
        solution: String,
    },
    /// Evaluate a star power series at a point.
    Series {
        #[arg(long)]
        system: String,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Ratio for geometric coefficients.
        #[arg(long, allow_hyphen_values = true)]
        ratio: Option<String>,
        /// Comma-separated coefficients for explicit series.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// Assignment such as x=0.2,y=0.9.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
    },
    /// Solve for admissible tensors given Z.
    Find {
        #[arg(long)]
        z: String,
        /// Comma-separated coordinate names.
        #[arg(long)]
        coords: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Fix the leading tensor to the identity.
        #[arg(long)]
        monic: bool,
    },
    /// List fixtures or print one as a system document.
    Catalog {
        #[arg(long)]
        name: Option<String>,
        /// Print the perturbed variant instead.
        #[arg(long)]
        broken: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Mul { .. } => "mul",
            Command::Pow { .. } => "pow",
            Command::Verify { .. } => "verify",
            Command::Series { .. } => "series",
            Command::Find { .. } => "find",
            Command::Catalog { .. } => "catalog",
        }
    }
}

#[derive(Serialize, Debug)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    pub values: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
    pub timings: Timings,
    #[serde(skip)]
    pub summary: String,
}

impl Report {
    /// 0 on success, 1 on a false verdict, 2 on errors.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            2
        } else if self.verdict == Some(false) {
            1
        } else {
            0
        }
    }
}

/// What a command produced before wrapping into a [`Report`].
struct Outcome {
    verdict: Option<bool>,
    values: Value,
    summary: String,
}

/// Result of running the program: exit code plus the two output streams.
#[derive(Debug)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: rendered, stderr: String::new() }
            } else {
                let body = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": null,
                    "error": {"kind": "usage", "message": rendered.trim_end()},
                });
                Output { code, stdout: format!("{body}\n"), stderr: rendered }
            };
        }
    };
    let report = run(&cli);
    let stdout = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")),
        Format::Text => format!("{}\n", report.summary),
    };
    Output {
        code: report.exit_code(),
        stdout,
        stderr: match cli.format {
            Format::Json => format!("{}\n", report.summary),
            Format::Text => String::new(),
        },
    }
}

pub fn run(cli: &Cli) -> Report {
    let start = Instant::now();
    let mut digest = Sha256::new();
    digest.update(format!("{:?}", cli.command).as_bytes());
    if let Some(path) = system_arg(&cli.command) {
        if let Ok(bytes) = std::fs::read(path) {
            digest.update(&bytes);
        }
    }
    let inputs_digest = hex::encode(digest.finalize());
    let result = dispatch(cli);
    let total_ms = start.elapsed().as_secs_f64() * 1e3;
    let command = cli.command.name().to_string();
    match result {
        Ok(o) => Report {
            schema_version: SCHEMA_VERSION,
            command,
            inputs_digest,
            verdict: o.verdict,
            values: o.values,
            error: None,
            timings: Timings { total_ms },
            summary: o.summary,
        },
        Err(e) => Report {
            schema_version: SCHEMA_VERSION,
            summary: format!("error: {e}"),
            command,
            inputs_digest,
            verdict: None,
            values: Value::Null,
            error: Some(json!({"kind": e.kind(), "message": e.to_string()})),
            timings: Timings { total_ms },
        },
    }
}

fn system_arg(cmd: &Command) -> Option<&str> {
    match cmd {
        Command::Check { system }
        | Command::Mul { system, .. }
        | Command::Pow { system, .. }
        | Command::Verify { system, .. }
        | Command::Series { system, .. } => Some(system),
        _ => None,
    }
}

/// A system given by file path or catalog name.
enum Resolved {
    Symbolic(SystemSpec),
    Numeric(Box<Fixture>),
}

fn resolve(arg: &str) -> Result<Resolved> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {arg}: {e}")))?;
        return Ok(Resolved::Symbolic(parse_system(&text)?));
    }
    let fx = load_fixture(arg)?;
    match fx.sys.clone() {
        Some(s) => Ok(Resolved::Symbolic(s)),
        None => Ok(Resolved::Numeric(Box::new(fx))),
    }
}

fn symbolic(arg: &str) -> Result<SystemSpec> {
    match resolve(arg)? {
        Resolved::Symbolic(s) => Ok(s),
        Resolved::Numeric(f) => Err(Error::Invalid(format!(
            "`{}` is numeric-only; this command needs exact coefficients",
            f.name
        ))),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check { system } => check(system, cli.tolerance),
        Command::Mul { system, left, right } => {
            let s = symbolic(system)?;
            let a = parse_solution(left, s.vars(), s.m())?;
            let b = parse_solution(right, s.vars(), s.m())?;
            let p = star_mul(&a.to_mupoly(), &b.to_mupoly(), s.z())?;
            let v = SolutionVec::from_mupoly(&p, s.m())?;
            Ok(Outcome {
                verdict: None,
                values: json!({"product": v.to_string(), "mu_form": p.to_string()}),
                summary: format!("{a} * {b} = {v}"),
            })
        }
        Command::Pow { system, base, exponent } => {
            let s = symbolic(system)?;
            let b = parse_solution(base, s.vars(), s.m())?;
            let p = star_pow(&b.to_mupoly(), *exponent, s.z())?;
            let v = SolutionVec::from_mupoly(&p, s.m())?;
            Ok(Outcome {
                verdict: None,
                values: json!({"power": v.to_string(), "mu_form": p.to_string()}),
                summary: format!("({b})^{exponent} = {v}"),
            })
        }
        Command::Verify { system, solution } => {
            let s = symbolic(system)?;
            let v = parse_solution(solution, s.vars(), s.m())?;
            let r = residuals(&s, &v)?;
            let ok = r.is_zero();
            let forms: Vec<Vec<String>> = r
                .rows
                .iter()
                .map(|row| row.iter().map(|e| e.to_string()).collect())
                .collect();
            Ok(Outcome {
                verdict: Some(ok),
                values: json!({"solution": v.to_string(), "residual_forms": forms}),
                summary: if ok {
                    format!("{v} solves {}", s.name())
                } else {
                    format!("{v} does not solve {}:\n{}", s.name(), r.to_string().trim_end())
                },
            })
        }
        Command::Series { system, kind, ratio, coeffs, point, epsilon } => {
            series(cli, system, *kind, ratio.as_deref(), coeffs.as_deref(), point, *epsilon)
        }
        Command::Find { z, coords, k, monic } => find(z, coords, *k, *monic),
        Command::Catalog { name, broken } => catalog(name.as_deref(), *broken),
    }
}

fn check(system: &str, tolerance: f64) -> Result<Outcome> {
    match resolve(system)? {
        Resolved::Symbolic(s) => {
            let adm = check_admissibility(&s);
            let witness = adm.witness.as_ref().map(|w| {
                json!({"form": w.form, "component": s.vars().names()[w.component], "value": w.value.to_string()})
            });
            let summary = match &adm.witness {
                None => format!("{} admits *-multiplication", s.name()),
                Some(w) => format!(
                    "{} does not admit *-multiplication: residual B{}[{}] = {}",
                    s.name(),
                    w.form,
                    s.vars().names()[w.component],
                    w.value
                ),
            };
            Ok(Outcome {
                verdict: Some(adm.admissible),
                values: json!({"system": s.name(), "admissible": adm.admissible, "witness": witness}),
                summary,
            })
        }
        Resolved::Numeric(fx) => {
            let ok = numeric_admissible(&fx.numeric, &fx.sample(20, 11), tolerance)?;
            Ok(Outcome {
                verdict: Some(ok.0),
                values: json!({"system": fx.name, "admissible": ok.0, "numeric": true, "worst_residual": ok.1}),
                summary: format!(
                    "{} {} *-multiplication (numeric, worst residual {:.3e})",
                    fx.name,
                    if ok.0 { "admits" } else { "does not admit" },
                    ok.1
                ),
            })
        }
    }
}

/// Admissibility of a numeric system: `Z` itself must solve the system.
pub fn numeric_admissible(sys: &NumericSystem, sample: &[Vec<f64>], tol: f64) -> Result<(bool, f64)> {
    let inner = sys.clone();
    let zv = move |p: &[f64]| Ok(inner.at(p)?.z);
    let g = grid_residuals(sys, &zv, sample, 1e-6)?;
    Ok((g.worst_residual < tol, g.worst_residual))
}

fn parse_point(text: &str, vars: &Vars) -> Result<Vec<f64>> {
    let mut values = vec![None; vars.len()];
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected name=value, got `{part}`")))?;
        let idx = vars.index_of(k.trim())?;
        let val: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("not a number: `{}`", v.trim())))?;
        values[idx] = Some(val);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::MissingCoordinate(vars.names()[i].clone())))
        .collect()
}

fn parse_rational(text: &str) -> Result<Rational> {
    text.trim()
        .parse::<Rational>()
        .map_err(|_| Error::Invalid(format!("not a rational number: `{text}`")))
}

fn series_spec(kind: Kind, ratio: Option<&str>, coeffs: Option<&str>) -> Result<SeriesSpec> {
    Ok(match kind {
        Kind::Exp => SeriesSpec::exp(),
        Kind::Sin => SeriesSpec::sin(),
        Kind::Cos => SeriesSpec::cos(),
        Kind::Geometric => SeriesSpec::geometric(parse_rational(
            ratio.ok_or_else(|| Error::Invalid("--ratio is required for geometric series".into()))?,
        )?),
        Kind::Explicit => SeriesSpec::explicit(
            coeffs
                .ok_or_else(|| Error::Invalid("--coeffs is required for explicit series".into()))?
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?,
        ),
    })
}

fn series(
    cli: &Cli,
    system: &str,
    kind: Kind,
    ratio: Option<&str>,
    coeffs: Option<&str>,
    point: &str,
    epsilon: f64,
) -> Result<Outcome> {
    let spec = series_spec(kind, ratio, coeffs)?;
    let (name, lower, p) = match resolve(system)? {
        Resolved::Symbolic(s) => {
            let p = parse_point(point, s.vars())?;
            let z: &MonicZ = s.z();
            (s.name().to_string(), starmul_core::roots::z_at_point(z, &p)?, p)
        }
        Resolved::Numeric(fx) => {
            let p = parse_point(point, &fx.coords)?;
            (fx.name.clone(), fx.numeric.at(&p)?.z, p)
        }
    };
    let mode = match cli.mode {
        Mode::Strict => ConvergenceMode::Strict,
        Mode::Relaxed => ConvergenceMode::Relaxed,
    };
    let value = match series_eval_lower(&spec, &lower, &p, epsilon, mode) {
        Err(Error::OutsideConvergence) => {
            let s = starmul_core::roots::spectrum_of(&lower, &p)?;
            let v = starmul_core::series::convergence_check_spectrum(&spec, &s, epsilon, mode);
            let reason = v.reason.unwrap_or_default();
            return Ok(Outcome {
                verdict: Some(false),
                values: json!({
                    "system": name,
                    "series": spec.to_string(),
                    "convergence": {"passes": false, "reason": reason},
                    "eigenvalues": eigen_json(&s),
                }),
                summary: format!("point outside convergence domain: {reason}"),
            });
        }
        other => other?,
    };
    let regime = if value.verdict.unproved_regime { "unproved regime" } else { "proved" };
    let summary = format!(
        "{} of {} at {:?}: {:?} ({} terms, {regime})",
        spec, name, p, value.values, value.terms
    );
    Ok(Outcome {
        verdict: Some(true),
        values: json!({
            "system": name,
            "series": spec.to_string(),
            "point": p,
            "values": value.values,
            "terms": value.terms,
            "spectral": value.spectral,
            "route_difference": value.route_difference,
            "routes_agree": value.routes_agree(),
            "eigenvalues": eigen_json(&value.spectrum),
            "jordan_ok": value.spectrum.jordan_ok,
            "convergence": {"passes": true, "mode": format!("{:?}", cli.mode).to_lowercase(), "regime": regime},
        }),
        summary,
    })
}

fn eigen_json(s: &starmul_core::roots::SpectrumAtPoint) -> Value {
    Value::Array(
        s.eigenvalues
            .iter()
            .map(|(l, k)| json!({"re": l.re, "im": l.im, "multiplicity": k}))
            .collect(),
    )
}

fn family_json(fam: &TensorFamily) -> Result<Value> {
    let basis: Vec<Vec<String>> = fam
        .basis
        .iter()
        .map(|b| b.iter().map(|e| e.to_string()).collect())
        .collect();
    let particular = fam
        .particular
        .as_ref()
        .map(|p| p.iter().map(|c| c.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
    let representative = if fam.basis.is_empty() && fam.particular.is_none() {
        None
    } else {
        Some(print_system(&fam.representative()?))
    };
    Ok(json!({
        "dimension": fam.dimension(),
        "free_slots": fam.slot_names(),
        "basis": basis,
        "particular": particular,
        "representative": representative,
    }))
}

fn find(z: &str, coords: &str, k: usize, monic: bool) -> Result<Outcome> {
    let names: Vec<String> = coords.split(',').map(|s| s.trim().to_string()).collect();
    let vars = Vars::new(&names)?;
    let z = MonicZ::from_mupoly(&parse_mupoly(z, &vars)?)?;
    let n = vars.len();
    let fam = if monic {
        match find_a_monic(&z, n, k, &vars)? {
            Some(f) => f,
            None => {
                return Ok(Outcome {
                    verdict: Some(false),
                    values: json!({"dimension": 0, "exists": false}),
                    summary: format!("no admissible family with A{k} = I"),
                })
            }
        }
    } else {
        find_a(&z, n, k, &vars)?
    };
    let values = family_json(&fam)?;
    Ok(Outcome {
        verdict: None,
        summary: format!("family of dimension {} for Z = {}", fam.dimension(), z),
        values,
    })
}

fn catalog(name: Option<&str>, broken: bool) -> Result<Outcome> {
    let Some(name) = name else {
        let names = fixture_names();
        return Ok(Outcome {
            verdict: None,
            summary: names.join("\n"),
            values: json!({"fixtures": names}),
        });
    };
    let fx = load_fixture(name)?;
    let sys = match (&fx.sys, broken) {
        (Some(s), false) => Some(s.clone()),
        (Some(s), true) => Some(broken_variant(s)?),
        (None, false) => None,
        (None, true) => {
            return Err(Error::Invalid(format!("`{name}` is numeric-only and has no document form")))
        }
    };
    let dsl = sys.as_ref().map(print_system);
    let solutions: Vec<Value> = fx
        .known_solutions
        .iter()
        .map(|(l, v)| json!({"label": l, "value": v.to_string()}))
        .chain(fx.numeric_solutions.iter().map(|s| json!({"label": s.label, "value": null})))
        .collect();
    let identities: Vec<Value> = fx
        .identities
        .iter()
        .map(|i| json!({"label": i.label, "holds": i.holds}))
        .collect();
    let summary = dsl.clone().unwrap_or_else(|| format!("{}: {} (numeric only)", fx.name, fx.description));
    Ok(Outcome {
        verdict: None,
        values: json!({
            "name": fx.name,
            "description": fx.description,
            "broken": broken,
            "dsl": dsl,
            "known_solutions": solutions,
            "identities": identities,
        }),
        summary: summary.trim_end().to_string(),
    })
}
