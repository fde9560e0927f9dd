//! Named residual summaries and their JSON form.

use serde::{Deserialize, Deserializer, Serialize};

use crate::harmonic::GridSpec;
use crate::Cx;

pub const REPORT_VERSION: &str = "harmlab-report/1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl From<Cx> for Point {
    fn from(z: Cx) -> Self {
        Point { re: z.re, im: z.im }
    }
}

impl From<Point> for Cx {
    fn from(p: Point) -> Self {
        Cx::new(p.re, p.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub r_max: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub exclusion_centers: Vec<Point>,
    pub exclusion_radius: f64,
}

impl From<&GridSpec> for GridSummary {
    fn from(g: &GridSpec) -> Self {
        GridSummary {
            r_max: g.r_max,
            n_radial: g.n_radial,
            n_angular: g.n_angular,
            exclusion_centers: g.exclusion_centers.iter().map(|&z| z.into()).collect(),
            exclusion_radius: g.exclusion_radius,
        }
    }
}

/// One verified identity. `pass` holds exactly when `max_residual <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub grid: Option<GridSummary>,
    /// Finite-difference step; 0 for analytic evaluations.
    pub step: f64,
    /// Non-finite residuals serialize as `null`.
    #[serde(deserialize_with = "nullable_f64")]
    pub max_residual: f64,
    pub tolerance: f64,
    pub worst_point: Point,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn nullable_f64<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl Check {
    pub fn new(name: impl Into<String>, tracker: &MaxTracker, tolerance: f64) -> Self {
        let max_residual = tracker.max();
        Check {
            name: name.into(),
            grid: None,
            step: 0.0,
            max_residual,
            tolerance,
            worst_point: tracker.point().into(),
            pass: max_residual <= tolerance,
            reason: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(name: impl Into<String>, tolerance: f64, reason: impl ToString) -> Self {
        Check {
            name: name.into(),
            grid: None,
            step: 0.0,
            max_residual: f64::INFINITY,
            tolerance,
            worst_point: Point::default(),
            pass: false,
            reason: Some(reason.to_string()),
        }
    }

    pub fn on_grid(mut self, grid: &GridSpec) -> Self {
        self.grid = Some(grid.into());
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_reason(mut self, reason: impl ToString) -> Self {
        self.reason = Some(reason.to_string());
        self
    }
}

/// Running maximum of a residual with its location.
///
/// Ties go to the lexicographically smallest `(x, y)`; NaN counts as +inf.
#[derive(Clone, Debug)]
pub struct MaxTracker {
    max: f64,
    point: Cx,
    seen: bool,
}

impl Default for MaxTracker {
    fn default() -> Self {
        Self::new()
    }
}

impl MaxTracker {
    pub fn new() -> Self {
        MaxTracker {
            max: f64::NEG_INFINITY,
            point: Cx::default(),
            seen: false,
        }
    }

    pub fn update(&mut self, residual: f64, z: Cx) {
        let r = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        let better = !self.seen
            || r > self.max
            || (r == self.max && (z.re, z.im) < (self.point.re, self.point.im));
        if better {
            self.max = r;
            self.point = z;
            self.seen = true;
        }
    }

    pub fn merge(&mut self, other: &MaxTracker) {
        if other.seen {
            self.update(other.max, other.point);
        }
    }

    /// The maximum so far; 0 when nothing was recorded.
    pub fn max(&self) -> f64 {
        if self.seen {
            self.max
        } else {
            0.0
        }
    }

    pub fn point(&self) -> Cx {
        self.point
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite_name: String,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new(suite_name: impl Into<String>) -> Self {
        CheckReport {
            suite_name: suite_name.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check, for terminals.
    pub fn summary_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let mut line = format!(
                    "[{}] {:<28} max_residual={:.3e} tol={:.1e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.max_residual,
                    c.tolerance
                );
                if let Some(reason) = &c.reason {
                    line.push_str(&format!(" ({reason})"));
                }
                line
            })
            .collect()
    }
}

/// Top-level JSON document written by the `check` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: String,
    /// Seconds since the Unix epoch; the only field that varies between identical runs.
    pub generated_at: u64,
    pub map: String,
    pub map_type: Option<String>,
    pub seed: u64,
    pub all_pass: bool,
    #[serde(flatten)]
    pub report: CheckReport,
}

impl ReportDocument {
    pub fn new(report: CheckReport, map: String, map_type: Option<String>, seed: u64) -> Self {
        let generated_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        ReportDocument {
            version: REPORT_VERSION.to_string(),
            generated_at,
            map,
            map_type,
            seed,
            all_pass: report.all_pass(),
            report,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
