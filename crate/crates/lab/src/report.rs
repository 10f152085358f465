//! JSON report layout (see `schema/report.schema.json`) and the plain-text
//! rendering used by `--pretty`.

use std::fmt::Write as _;

use num_rational::Rational64;
use rif_core::compose::CompositionResult;
use rif_core::integrab::{CutoffEstimate, IntegrabilityReport};
use rif_core::singular::{Order, SingularPoint};
use rif_core::Rif;
use serde::Serialize;

use crate::config::Config;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub tool: Tool,
    pub command: String,
    pub input: InputEcho,
    pub seed: u64,
    pub config: Config,
    /// `ok`, `validation_failure` or `anomaly`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<Validation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slice_det: Option<SliceDetInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singularities: Option<Vec<SingularInfo>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<CutoffInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composition: Option<CompositionInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproduce: Option<ReproduceInfo>,
    pub anomalies: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Tool { name: "rif-lab", version: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct InputEcho {
    /// `expression` or `registry`.
    pub source: String,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polydegree: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denominator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numerator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl InputEcho {
    pub fn fill_from(&mut self, r: &Rif) {
        self.nvars = Some(r.dim());
        self.unit = Some(r.unit().to_string());
        self.polydegree = Some(r.polydegree().to_vec());
        self.denominator = Some(r.p().to_string());
        self.numerator = Some(r.ptilde().to_string());
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Validation {
    pub stable: bool,
    pub atoral: bool,
    /// Smallest sampled stability margin; absent when validation stopped early.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_margin: Option<f64>,
    pub torus_points: usize,
    pub interior_points: usize,
    pub warnings: Vec<String>,
}

impl Validation {
    pub fn of(r: &Rif) -> Self {
        let c = r.stability_certificate();
        Validation {
            stable: true,
            atoral: true,
            min_margin: Some(c.min_margin),
            torus_points: c.torus_points,
            interior_points: c.interior_points,
            warnings: r.warnings().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceDetInfo {
    /// The determinant as a polynomial in `z1, ..., z_{d-1}`.
    pub poly: String,
    pub unit: String,
    pub identity_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularInfo {
    pub zhat: Vec<String>,
    pub zhat_angles: Vec<f64>,
    pub eta: String,
    pub eta_angle: f64,
    /// `exact` or `numeric`.
    pub kind: String,
    pub order: f64,
    pub order_rounded: u32,
    pub contact_order: u32,
    pub isotropic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anomaly: Option<String>,
}

impl SingularInfo {
    pub fn of(s: &SingularPoint) -> Self {
        let interval = match &s.order {
            Order::Numeric(o) => Some([o.interval.0, o.interval.1]),
            Order::Exact(_) => None,
        };
        SingularInfo {
            zhat: s.zhat.coords.iter().map(|c| c.to_string()).collect(),
            zhat_angles: s.zhat.angles(),
            eta: s.eta.to_string(),
            eta_angle: s.eta.angle(),
            kind: s.kind().into(),
            order: s.order.value(),
            order_rounded: s.order.rounded(),
            contact_order: s.order.rounded(),
            isotropic: s.order.is_isotropic(),
            order_interval: interval,
            anomaly: s.anomaly.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericCutoff {
    pub value: f64,
    pub halfwidth: f64,
    pub iterations: u32,
    pub bracket: [f64; 2],
}

impl From<&CutoffEstimate> for NumericCutoff {
    fn from(e: &CutoffEstimate) -> Self {
        NumericCutoff { value: e.value, halfwidth: e.halfwidth, iterations: e.iterations, bracket: [e.bracket.0, e.bracket.1] }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalCutoffInfo {
    pub singularity: usize,
    /// Closed form `1 + (d-1)/order` as a fraction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theoretical: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theoretical_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericCutoff>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AggregateInfo {
    /// Smallest local cutoff: the function is in `L^p` for `p` below it.
    pub min_local: f64,
    /// Largest local cutoff.
    pub max_local: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutoffInfo {
    pub per_singularity: Vec<LocalCutoffInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<AggregateInfo>,
}

pub fn rational_value(q: Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

impl CutoffInfo {
    pub fn of(rep: &IntegrabilityReport) -> Self {
        CutoffInfo {
            per_singularity: rep
                .per_singularity
                .iter()
                .enumerate()
                .map(|(i, l)| LocalCutoffInfo {
                    singularity: i,
                    theoretical: l.theoretical.map(|q| q.to_string()),
                    theoretical_value: l.theoretical.map(rational_value),
                    numeric: l.numeric.as_ref().map(NumericCutoff::from),
                    numeric_error: l.numeric_error.clone(),
                })
                .collect(),
            aggregate: rep.aggregate.map(|a| AggregateInfo { min_local: a.min, max_local: a.max }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionInfo {
    pub n: u32,
    pub numerator: String,
    pub denominator: String,
    pub unit: String,
    pub polydegree: Vec<u32>,
    pub cancelled_factor: String,
    pub polydegree_drop: bool,
    pub cancellation_undetected: bool,
}

impl CompositionInfo {
    pub fn of(c: &CompositionResult) -> Self {
        CompositionInfo {
            n: c.n,
            numerator: c.rif.ptilde().to_string(),
            denominator: c.rif.p().to_string(),
            unit: c.rif.unit().to_string(),
            polydegree: c.rif.polydegree().to_vec(),
            cancelled_factor: c.cancelled_factor.to_string(),
            polydegree_drop: c.polydegree_drop,
            cancellation_undetected: c.cancellation_undetected,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproduceInfo {
    pub example: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, input: InputEcho, config: &Config) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: Tool::default(),
            command: command.into(),
            input,
            seed: config.seed,
            config: config.clone(),
            status: "ok".into(),
            error: None,
            validation: None,
            slice_det: None,
            singularities: None,
            cutoffs: None,
            composition: None,
            reproduce: None,
            anomalies: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable summary.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let row = |s: &mut String, k: &str, v: &str| {
            let _ = writeln!(s, "{k:<22} {v}");
        };
        row(&mut s, "command", &self.command);
        row(&mut s, "input", &self.input.text);
        if let Some(p) = &self.input.denominator {
            row(&mut s, "denominator", p);
        }
        if let Some(p) = &self.input.numerator {
            row(&mut s, "numerator", p);
        }
        if let Some(n) = &self.input.polydegree {
            row(&mut s, "polydegree", &format!("{n:?}"));
        }
        row(&mut s, "status", &self.status);
        if let Some(e) = &self.error {
            row(&mut s, "error", &format!("{}: {}", e.kind, e.message));
        }
        if let Some(v) = &self.validation {
            let margin = v.min_margin.map_or(String::new(), |m| format!(" (min margin {m:.3e})"));
            row(&mut s, "stable / atoral", &format!("{} / {}{margin}", v.stable, v.atoral));
        }
        if let Some(sd) = &self.slice_det {
            row(&mut s, "slice determinant", &sd.poly);
        }
        if let Some(pts) = &self.singularities {
            row(&mut s, "singularities", &pts.len().to_string());
            for (i, p) in pts.iter().enumerate() {
                let mut coords = p.zhat.clone();
                coords.push(p.eta.clone());
                row(
                    &mut s,
                    &format!("  [{i}]"),
                    &format!("({})  order {} ({}, {:.4})", coords.join(", "), p.order_rounded, p.kind, p.order),
                );
            }
        }
        if let Some(c) = &self.cutoffs {
            for l in &c.per_singularity {
                let mut v = l.theoretical.clone().unwrap_or_else(|| "-".into());
                if let Some(n) = &l.numeric {
                    let _ = write!(v, "   numeric {:.4} +/- {:.4}", n.value, n.halfwidth);
                }
                if let Some(e) = &l.numeric_error {
                    let _ = write!(v, "   numeric failed: {e}");
                }
                row(&mut s, &format!("  cutoff [{}]", l.singularity), &v);
            }
            if let Some(a) = &c.aggregate {
                row(&mut s, "cutoff min / max", &format!("{} / {}", a.min_local, a.max_local));
            }
        }
        if let Some(c) = &self.composition {
            row(&mut s, "composition power", &c.n.to_string());
            row(&mut s, "  denominator", &c.denominator);
            row(&mut s, "  numerator", &c.numerator);
            row(&mut s, "  polydegree", &format!("{:?}", c.polydegree));
            row(&mut s, "  cancelled factor", &c.cancelled_factor);
            row(&mut s, "  polydegree drop", &c.polydegree_drop.to_string());
        }
        if let Some(r) = &self.reproduce {
            for c in &r.checks {
                let mark = if c.ok { "ok" } else { "MISMATCH" };
                row(&mut s, &format!("  {}", c.name), &format!("{mark}: {} (expected {})", c.actual, c.expected));
            }
            row(&mut s, "reproduced", &r.passed.to_string());
        }
        for a in &self.anomalies {
            row(&mut s, "anomaly", a);
        }
        row(&mut s, "seed", &self.seed.to_string());
        s
    }
}
