//! Deterministic rendering: fixed 10-significant-digit text, full
//! binary fidelity in JSON, and flat CSV.

use bosonaim::aim::EigenResult;
use bosonaim::oracle::{SpectrumReport, Truncation};
use serde::{Deserialize, Serialize};

use crate::config::{OutputMode, RunConfig};

/// Fixed decimal rendering with 10 significant digits; scientific
/// notation outside a sane magnitude window.
pub fn sig10(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..10).contains(&mag) {
        let decimals = (9 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.9e}")
    }
}

/// Compact deterministic rendering of a convergence delta.
fn delta_str(delta: Option<f64>) -> String {
    match delta {
        None => "-".to_string(),
        Some(d) => format!("{d:.3e}"),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolveOutput {
    pub model: String,
    pub parameters: String,
    pub depth: usize,
    pub precision: String,
    pub result: EigenResult,
}

pub fn render_solve(config: &RunConfig, shown: &EigenResult) -> String {
    match config.output {
        OutputMode::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "model: {} ({})\n",
                config.model.name(),
                config.describe_parameters()
            ));
            out.push_str(&format!(
                "method: iteration depth {}, window {}, tol {:.1e}, precision {}\n",
                config.aim.depth,
                config.aim.stability_window,
                config.aim.convergence_tol,
                config.aim.precision
            ));
            out.push_str(" n  energy           delta      converged  chain\n");
            for (n, root) in shown.roots.iter().enumerate() {
                out.push_str(&format!(
                    "{n:2}  {:<15}  {:<9}  {:<9}  {}\n",
                    sig10(root.value),
                    delta_str(root.delta),
                    if root.converged { "yes" } else { "no" },
                    root.chain
                ));
            }
            out
        }
        OutputMode::Json => {
            let payload = SolveOutput {
                model: config.model.name().to_string(),
                parameters: config.describe_parameters(),
                depth: config.aim.depth,
                precision: config.aim.precision.to_string(),
                result: shown.clone(),
            };
            let mut text = serde_json::to_string_pretty(&payload).expect("serializable");
            text.push('\n');
            text
        }
        OutputMode::Csv => {
            let mut out = String::from("n,value,delta,converged,chain\n");
            for (n, root) in shown.roots.iter().enumerate() {
                out.push_str(&format!(
                    "{n},{},{},{},{}\n",
                    root.value,
                    root.delta.map(|d| d.to_string()).unwrap_or_default(),
                    root.converged,
                    root.chain
                ));
            }
            out
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OracleOutput {
    pub model: String,
    pub parameters: String,
    pub truncation: String,
    pub residual_bound: f64,
    pub eigenvalues: Vec<ComplexValue>,
}

pub fn truncation_str(t: &Truncation) -> String {
    match t {
        Truncation::NMax(n) => format!("n_max = {n}"),
        Truncation::Block(label) => format!("block {label}"),
    }
}

/// A merged, truncated view of one or more spectrum reports.
pub struct OracleView {
    pub truncation: String,
    pub residual_bound: f64,
    pub eigenvalues: Vec<(f64, f64)>,
}

impl OracleView {
    pub fn merge(reports: &[SpectrumReport], levels: usize) -> Self {
        let mut eigenvalues: Vec<(f64, f64)> = reports
            .iter()
            .flat_map(|r| r.eigenvalues.iter().map(|z| (z.re, z.im)))
            .collect();
        eigenvalues.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        eigenvalues.truncate(levels);
        let labels: Vec<String> = reports
            .iter()
            .map(|r| truncation_str(&r.truncation))
            .collect();
        Self {
            truncation: labels.join(" + "),
            residual_bound: reports
                .iter()
                .map(|r| r.residual_bound)
                .fold(0.0, f64::max),
            eigenvalues,
        }
    }
}

pub fn render_oracle(config: &RunConfig, view: &OracleView) -> String {
    match config.output {
        OutputMode::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "model: {} ({})\n",
                config.model.name(),
                config.describe_parameters()
            ));
            out.push_str(&format!(
                "oracle: {}, residual bound {:.3e}\n",
                view.truncation, view.residual_bound
            ));
            out.push_str(" n  energy           im\n");
            for (n, (re, im)) in view.eigenvalues.iter().enumerate() {
                out.push_str(&format!("{n:2}  {:<15}  {:.3e}\n", sig10(*re), im));
            }
            out
        }
        OutputMode::Json => {
            let payload = OracleOutput {
                model: config.model.name().to_string(),
                parameters: config.describe_parameters(),
                truncation: view.truncation.clone(),
                residual_bound: view.residual_bound,
                eigenvalues: view
                    .eigenvalues
                    .iter()
                    .map(|&(re, im)| ComplexValue { re, im })
                    .collect(),
            };
            let mut text = serde_json::to_string_pretty(&payload).expect("serializable");
            text.push('\n');
            text
        }
        OutputMode::Csv => {
            let mut out = String::from("n,re,im\n");
            for (n, (re, im)) in view.eigenvalues.iter().enumerate() {
                out.push_str(&format!("{n},{re},{im}\n"));
            }
            out
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CompareRow {
    pub n: usize,
    pub aim: f64,
    pub oracle: f64,
    pub exact: Option<f64>,
    pub abs_dev: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CompareOutput {
    pub model: String,
    pub parameters: String,
    pub tolerance: f64,
    pub rows: Vec<CompareRow>,
    pub max_rel_dev: f64,
    pub within_tolerance: bool,
}

pub fn render_compare(config: &RunConfig, report: &CompareOutput) -> String {
    match config.output {
        OutputMode::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "model: {} ({})\n",
                report.model, report.parameters
            ));
            out.push_str(" n  aim              oracle           exact            abs dev    rel dev\n");
            for row in &report.rows {
                let exact = row
                    .exact
                    .map(sig10)
                    .unwrap_or_else(|| "-".to_string());
                out.push_str(&format!(
                    "{:2}  {:<15}  {:<15}  {:<15}  {:.3e}  {:.3e}\n",
                    row.n,
                    sig10(row.aim),
                    sig10(row.oracle),
                    exact,
                    row.abs_dev,
                    row.rel_dev
                ));
            }
            out.push_str(&format!(
                "max relative deviation: {:.3e} ({} tolerance {:.1e})\n",
                report.max_rel_dev,
                if report.within_tolerance {
                    "within"
                } else {
                    "EXCEEDS"
                },
                report.tolerance
            ));
            out
        }
        OutputMode::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("serializable");
            text.push('\n');
            text
        }
        OutputMode::Csv => {
            let mut out = String::from("n,aim,oracle,exact,abs_dev,rel_dev\n");
            for row in &report.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    row.n,
                    row.aim,
                    row.oracle,
                    row.exact.map(|x| x.to_string()).unwrap_or_default(),
                    row.abs_dev,
                    row.rel_dev
                ));
            }
            out
        }
    }
}
