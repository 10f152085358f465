//! Command dispatch for the `rif-lab` binary.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 internal
//! anomaly (an odd vanishing order, a failed reproduction, an analysis error).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rif_core::compose::compose_with;
use rif_core::integrab::{analyze, sampler_for, IntegrabilityReport, QuadratureConfig};
use rif_core::poly::{angle_diff, GaussianRational, MultiPoly};
use rif_core::singular::{find_singularities_with, ray_profiles, SingularPoint};
use rif_core::{Rif, RifError};

use crate::config::Config;
use crate::parse::{infer_nvars, parse_poly};
use crate::registry::{self, Example};
use crate::report::{
    rational_value, Check, CompositionInfo, CutoffInfo, ErrorInfo, InputEcho, Report, ReproduceInfo, SingularInfo,
    SliceDetInfo, Validation,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ANOMALY: i32 = 3;

/// Tolerance for numeric cutoffs in `reproduce`.
pub const NUMERIC_CUTOFF_TOL: f64 = 0.05;
/// Angular tolerance for matching singular points in `reproduce`.
pub const POINT_TOL: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "rif-lab", version, about = "Analyze rational inner functions of polydegree (n, 1)")]
pub struct Cli {
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Number of variables for expression input (default: highest zj used).
    #[arg(long, global = true)]
    pub nvars: Option<usize>,
    /// Seed for randomized steps (falls back to RIF_LAB_SEED).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Settings file with `key = value` lines.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Override one setting, e.g. `--set quadrature.eps=0.05`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub sets: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// A registry name (see `reproduce --help`) or a denominator polynomial.
    pub input: String,
    /// Unimodular constant multiplying the numerator.
    #[arg(long)]
    pub unit: Option<String>,
    /// Declared polydegree, comma separated (default: the degrees of the input).
    #[arg(long, value_delimiter = ',')]
    pub polydegree: Option<Vec<u32>>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// `ray_id,r,V`: V along rays out of one singularity.
    Rays,
    /// `eps,p,integral,tail_exponent`: the criterion integral.
    Criterion,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check stability, atorality and the polydegree.
    Validate(Target),
    /// Print the slice determinant.
    SliceDet(Target),
    /// Locate torus singularities and their vanishing orders.
    Singularities(Target),
    /// Compose the function with itself N times.
    Compose {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        target: Target,
    },
    /// Derivative integrability cutoffs.
    Cutoff {
        /// Also estimate each cutoff by quadrature.
        #[arg(long)]
        numeric: bool,
        #[command(flatten)]
        target: Target,
    },
    /// Run the full pipeline on a registry example and compare with its
    /// known values. Names: bps_phi_plus, bps_phi_minus, bps_psi, pascoe_74,
    /// phi_d:<d>, phi_d:<d>:<N>.
    Reproduce {
        example: String,
        /// Skip the quadrature estimates.
        #[arg(long)]
        no_numeric: bool,
    },
    /// Emit CSV for external plotting.
    PlotData {
        #[arg(long, value_enum, default_value_t = PlotKind::Rays)]
        kind: PlotKind,
        /// Index of the singularity to sample around.
        #[arg(long, default_value_t = 0)]
        point: usize,
        /// Exponents for `criterion`, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0])]
        p: Vec<f64>,
        /// Ball radii for `criterion`, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [0.025, 0.05, 0.1])]
        eps: Vec<f64>,
        #[command(flatten)]
        target: Target,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    /// The input is not a valid RIF; the report records why.
    Invalid(Box<Report>),
    Anomaly(Box<Report>, String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

/// Variant name of an error, e.g. `NotStable`.
fn error_kind(e: &RifError) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn error_info(e: &RifError) -> ErrorInfo {
    let witness = match e {
        RifError::NotStable { witness, .. } => Some(witness.clone()),
        _ => None,
    };
    ErrorInfo { kind: error_kind(e), message: e.to_string(), witness }
}

fn is_usage_error(e: &RifError) -> bool {
    matches!(e, RifError::InvalidArgument(_) | RifError::Unsupported(_))
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, env_seed: Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let text = e.render().to_string();
            return match e.kind() {
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand if e.exit_code() == 0 => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let pretty = cli.pretty;
    let render = |r: &Report| if pretty { r.to_table() } else { r.to_json() + "\n" };
    match dispatch(&cli, env_seed) {
        Ok(Output::Report(r)) => {
            let code = if r.anomalies.is_empty() { EXIT_OK } else { EXIT_ANOMALY };
            let stderr = r.anomalies.iter().map(|a| format!("anomaly: {a}\n")).collect();
            Outcome { code, stdout: render(&r), stderr }
        }
        Ok(Output::Csv(s)) => Outcome { code: EXIT_OK, stdout: s, stderr: String::new() },
        Err(Failure::Usage(m)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Invalid(r)) => {
            let msg = r.error.as_ref().map(|e| e.message.clone()).unwrap_or_default();
            Outcome { code: EXIT_VALIDATION, stdout: render(&r), stderr: format!("invalid input: {msg}\n") }
        }
        Err(Failure::Anomaly(r, m)) => Outcome { code: EXIT_ANOMALY, stdout: render(&r), stderr: format!("anomaly: {m}\n") },
    }
}

enum Output {
    Report(Box<Report>),
    Csv(String),
}

struct Loaded {
    rif: Rif,
    example: Option<Example>,
    report: Report,
}

fn load(cli: &Cli, cfg: &Config, command: &str, t: &Target) -> Result<Loaded, Failure> {
    let mut echo = InputEcho { text: t.input.clone(), ..Default::default() };
    if registry::looks_like_name(&t.input) {
        if t.unit.is_some() || t.polydegree.is_some() {
            return Err(usage("--unit and --polydegree apply to expression input only"));
        }
        echo.source = "registry".into();
        let ex = registry::lookup(&t.input).map_err(|e| match e {
            registry::RegistryError::Build { source, .. } => {
                let mut rep = Report::new(command, echo.clone(), cfg);
                rep.status = "validation_failure".into();
                rep.error = Some(error_info(&source));
                Failure::Invalid(Box::new(rep))
            }
            other => usage(other),
        })?;
        echo.description = Some(ex.description.clone());
        echo.fill_from(&ex.rif);
        let report = Report::new(command, echo, cfg);
        return Ok(Loaded { rif: ex.rif.clone(), example: Some(ex), report });
    }
    echo.source = "expression".into();
    let nvars = cli.nvars.unwrap_or_else(|| infer_nvars(&t.input));
    echo.nvars = Some(nvars);
    let p = parse_poly(&t.input, nvars).map_err(usage)?;
    let unit = match &t.unit {
        None => GaussianRational::from_int(1),
        Some(u) => parse_poly(u, nvars)
            .map_err(usage)?
            .as_constant()
            .ok_or_else(|| usage(format!("unit `{u}` is not a constant")))?,
    };
    match Rif::with_config(p, unit, t.polydegree.clone(), &cfg.stability) {
        Ok(rif) => {
            echo.fill_from(&rif);
            Ok(Loaded { rif, example: None, report: Report::new(command, echo, cfg) })
        }
        Err(e) if is_usage_error(&e) => Err(usage(e)),
        Err(e) => {
            let mut rep = Report::new(command, echo, cfg);
            rep.status = "validation_failure".into();
            rep.validation = Some(Validation {
                stable: !matches!(e, RifError::NotStable { .. }),
                atoral: !matches!(e, RifError::ToralFactor(_)),
                min_margin: None,
                torus_points: 0,
                interior_points: 0,
                warnings: Vec::new(),
            });
            rep.error = Some(error_info(&e));
            Err(Failure::Invalid(Box::new(rep)))
        }
    }
}

/// Turns an analysis error into the right failure, keeping the partial report.
fn analysis_failure(mut rep: Report, e: RifError) -> Failure {
    if is_usage_error(&e) {
        return usage(e);
    }
    rep.status = "anomaly".into();
    rep.error = Some(error_info(&e));
    rep.anomalies.push(e.to_string());
    Failure::Anomaly(Box::new(rep), e.to_string())
}

fn singularities(l: &mut Loaded, cfg: &Config) -> Result<Vec<SingularPoint>, RifError> {
    let analysis = find_singularities_with(&l.rif, &cfg.singular)?;
    if let Some(v) = l.report.validation.as_mut() {
        v.warnings.extend(analysis.warnings.iter().cloned());
    }
    l.report.singularities = Some(analysis.points.iter().map(SingularInfo::of).collect());
    l.report.anomalies.extend(analysis.anomalies().map(str::to_string));
    Ok(analysis.points)
}

fn slice_det_info(r: &Rif) -> SliceDetInfo {
    let sd = r.slice_det();
    SliceDetInfo { poly: sd.poly.to_string(), unit: sd.unit.to_string(), identity_holds: sd.identity_holds_symbolically() }
}

fn dispatch(cli: &Cli, env_seed: Option<String>) -> Result<Output, Failure> {
    let cfg = Config::resolve(cli.config.as_deref(), &cli.sets, cli.seed, env_seed).map_err(usage)?;
    dispatch_with(cli, &cfg)
}

fn dispatch_with(cli: &Cli, cfg: &Config) -> Result<Output, Failure> {
    let boxed = |l: Loaded| Ok(Output::Report(Box::new(l.report)));
    match &cli.command {
        Command::Validate(t) => {
            let mut l = load(cli, cfg, "validate", t)?;
            l.report.validation = Some(Validation::of(&l.rif));
            boxed(l)
        }
        Command::SliceDet(t) => {
            let mut l = load(cli, cfg, "slice-det", t)?;
            l.report.validation = Some(Validation::of(&l.rif));
            l.report.slice_det = Some(slice_det_info(&l.rif));
            boxed(l)
        }
        Command::Singularities(t) => {
            let mut l = load(cli, cfg, "singularities", t)?;
            l.report.validation = Some(Validation::of(&l.rif));
            l.report.slice_det = Some(slice_det_info(&l.rif));
            if let Err(e) = singularities(&mut l, cfg) {
                return Err(analysis_failure(l.report, e));
            }
            boxed(l)
        }
        Command::Compose { n, target } => {
            let mut l = load(cli, cfg, "compose", target)?;
            l.report.validation = Some(Validation::of(&l.rif));
            match compose_with(&l.rif, *n, &cfg.stability) {
                Ok(c) => l.report.composition = Some(CompositionInfo::of(&c)),
                Err(e) => return Err(analysis_failure(l.report, e)),
            }
            boxed(l)
        }
        Command::Cutoff { numeric, target } => {
            let mut l = load(cli, cfg, "cutoff", target)?;
            l.report.validation = Some(Validation::of(&l.rif));
            let pts = match singularities(&mut l, cfg) {
                Ok(p) => p,
                Err(e) => return Err(analysis_failure(l.report, e)),
            };
            let rep = analyze(&l.rif, &pts, *numeric, &cfg.quadrature);
            l.report.cutoffs = Some(CutoffInfo::of(&rep));
            boxed(l)
        }
        Command::Reproduce { example, no_numeric } => {
            if !registry::looks_like_name(example) {
                return Err(usage(registry::RegistryError::UnknownExample { name: example.clone() }));
            }
            let t = Target { input: example.clone(), unit: None, polydegree: None };
            let l = load(cli, cfg, "reproduce", &t)?;
            reproduce(l, cfg, !no_numeric)
        }
        Command::PlotData { kind, point, p, eps, target } => {
            let mut l = load(cli, cfg, "plot-data", target)?;
            let pts = singularities(&mut l, cfg).map_err(|e| analysis_failure(l.report.clone(), e))?;
            let s = pts
                .get(*point)
                .ok_or_else(|| usage(format!("no singularity with index {point} (found {})", pts.len())))?;
            let mut out = String::new();
            match kind {
                PlotKind::Rays => {
                    out.push_str("ray_id,r,V\n");
                    for (id, ray) in ray_profiles(&l.rif, &s.zhat, &cfg.singular).iter().enumerate() {
                        for (r, v) in ray.radii.iter().zip(&ray.values) {
                            let _ = writeln!(out, "{id},{r:e},{v:e}");
                        }
                    }
                }
                PlotKind::Criterion => {
                    out.push_str("eps,p,integral,tail_exponent\n");
                    for &e in eps {
                        let qc = QuadratureConfig { eps: e, ..cfg.quadrature.clone() };
                        let sampler = sampler_for(&l.rif, s, &pts, &qc).map_err(|e| analysis_failure(l.report.clone(), e))?;
                        for &pp in p {
                            let ci = sampler.integral(pp);
                            let _ = writeln!(out, "{e},{pp},{:e},{}", ci.value, ci.tail_exponent);
                        }
                    }
                }
            }
            Ok(Output::Csv(out))
        }
    }
}

/// Equal up to a unimodular constant factor.
fn equal_up_to_unit(a: &MultiPoly, b: &MultiPoly) -> bool {
    let Some((idx, cb)) = b.terms().next() else { return a.is_zero() };
    let ca = a.coeff(&idx.0);
    match &ca / cb {
        c if c.is_unimodular() => a == &b.scale(&c),
        _ => false,
    }
}

fn reproduce(mut l: Loaded, cfg: &Config, numeric: bool) -> Result<Output, Failure> {
    let ex = l.example.clone().expect("registry input");
    let exp = &ex.expected;
    let mut checks = Vec::new();
    let mut check = |name: &str, expected: String, actual: String, ok: bool| {
        checks.push(Check { name: name.into(), expected, actual, ok });
    };
    l.report.validation = Some(Validation::of(&l.rif));
    l.report.slice_det = Some(slice_det_info(&l.rif));
    if let Some(c) = &ex.composition {
        l.report.composition = Some(CompositionInfo::of(c));
        if let Some(drop) = exp.polydegree_drop {
            check("polydegree_drop", drop.to_string(), c.polydegree_drop.to_string(), drop == c.polydegree_drop);
        }
    }
    if let Some(want) = &exp.slice_det {
        let got = l.rif.slice_det().poly;
        check("slice_det", want.to_string(), got.to_string(), &got == want);
    }
    if let Some(want) = &exp.denominator {
        check("denominator", want.to_string(), l.rif.p().to_string(), equal_up_to_unit(l.rif.p(), want));
    }
    if let Some(want) = &exp.numerator {
        check("numerator", want.to_string(), l.rif.ptilde().to_string(), equal_up_to_unit(l.rif.ptilde(), want));
    }
    let pts = match singularities(&mut l, cfg) {
        Ok(p) => p,
        Err(e) => return Err(analysis_failure(l.report, e)),
    };
    let cut = analyze(&l.rif, &pts, numeric, &cfg.quadrature);
    l.report.cutoffs = Some(CutoffInfo::of(&cut));
    check(
        "singularity_count",
        exp.singularities.len().to_string(),
        pts.len().to_string(),
        exp.singularities.len() == pts.len(),
    );
    for (i, want) in exp.singularities.iter().enumerate() {
        match match_point(&pts, &cut, &want.zhat) {
            None => check(&format!("singularity[{i}]"), format!("{:?}", want.zhat), "missing".into(), false),
            Some((s, local)) => {
                let eta_ok = angle_diff(s.eta.angle(), want.eta).abs() <= POINT_TOL;
                check(&format!("singularity[{i}].eta"), format!("{:.6}", want.eta), format!("{:.6}", s.eta.angle()), eta_ok);
                let ord = s.order.rounded();
                check(&format!("singularity[{i}].order"), want.order.to_string(), ord.to_string(), ord == want.order);
                let th = local.theoretical;
                check(
                    &format!("singularity[{i}].cutoff"),
                    want.cutoff.to_string(),
                    th.map_or("none".into(), |q| q.to_string()),
                    th == Some(want.cutoff),
                );
                if numeric {
                    let target = rational_value(want.cutoff);
                    let (actual, ok) = match &local.numeric {
                        Some(e) => (format!("{:.4}", e.value), (e.value - target).abs() <= NUMERIC_CUTOFF_TOL),
                        None => (local.numeric_error.clone().unwrap_or_default(), false),
                    };
                    check(&format!("singularity[{i}].numeric_cutoff"), format!("{target} +/- {NUMERIC_CUTOFF_TOL}"), actual, ok);
                }
            }
        }
    }
    let passed = checks.iter().all(|c| c.ok);
    let failed: Vec<String> = checks.iter().filter(|c| !c.ok).map(|c| c.name.clone()).collect();
    l.report.reproduce = Some(ReproduceInfo { example: ex.name.clone(), passed, checks });
    if !passed {
        let msg = format!("{} disagrees with its known values: {}", ex.name, failed.join(", "));
        l.report.status = "anomaly".into();
        l.report.anomalies.push(msg);
    }
    Ok(Output::Report(Box::new(l.report)))
}

fn match_point<'a>(
    pts: &'a [SingularPoint],
    rep: &'a IntegrabilityReport,
    zhat: &[f64],
) -> Option<(&'a SingularPoint, &'a rif_core::integrab::LocalCutoff)> {
    pts.iter().zip(&rep.per_singularity).find(|(s, _)| {
        s.zhat.angles().iter().zip(zhat).all(|(a, b)| angle_diff(*a, *b).abs() <= POINT_TOL)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        let mut v = vec!["rif-lab"];
        v.extend_from_slice(args);
        run(v, None)
    }

    #[test]
    fn unit_check() {
        let a = parse_poly("2 - z1 - z2", 2).unwrap();
        assert!(equal_up_to_unit(&(-&a), &a));
        assert!(equal_up_to_unit(&a.scale(&GaussianRational::i()), &a));
        assert!(!equal_up_to_unit(&a.scale(&GaussianRational::from_int(2)), &a));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["validate", "z1 + ("]).code, EXIT_USAGE);
        assert_eq!(run_args(&["validate", "no_such_example"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["compose", "--n", "0", "bps_phi_plus"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["validate", "2 - z1 - z2", "--set", "bogus=1"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).code, EXIT_OK);
    }

    #[test]
    fn error_kind_names() {
        assert_eq!(error_kind(&RifError::PoleAtPoint), "PoleAtPoint");
        assert_eq!(error_kind(&RifError::ToralFactor("x".into())), "ToralFactor");
        assert_eq!(error_kind(&RifError::NotStable { witness: "w".into(), point: vec![] }), "NotStable");
    }
}
