//! Experiment orchestration: bound-vs-truth comparison grids and
//! rate-function trend tables over growing instance sizes, with
//! deterministic CSV/JSON reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{all_bounds, Direction};
use crate::error::{Error, Result};
use crate::family::IndicatorFamily;
use crate::instances::sequences::{ap_family, schur_family};
use crate::instances::subgraph::subgraph_family;
use crate::instances::kgraph_from_file;
use crate::phi::phi_neg;

/// Bumped whenever the CSV column set changes.
pub const ROW_SCHEMA_VERSION: u32 = 1;

/// Canonical bound order for report columns.
pub const BOUND_NAMES: [&str; 7] = [
    "janson_upper",
    "harris_product",
    "harris_exponential",
    "lt_main",
    "lt2",
    "lt3",
    "lt4",
];

const LOG_SLACK: f64 = 1e-10;
/// Minimum MC hit count before an estimate is treated as a usable truth.
const MC_MIN_HITS: f64 = 100.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceSpec {
    FamilyFile { path: PathBuf },
    Subgraph { h: PathBuf, n: usize, p: f64 },
    Ap { k: usize, n: usize, p: f64 },
    Schur { n: usize, p: f64 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum TruthMode {
    Exact,
    Mc { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub eps_grid: Vec<f64>,
    /// Bound names to evaluate; empty means all of them.
    #[serde(default)]
    pub bounds: Vec<String>,
    pub truth: TruthMode,
    /// Base path for reports; writes `<base>.csv` and `<base>.json`.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCell {
    pub name: String,
    pub log_value: f64,
    pub applicable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub schema: u32,
    pub instance_id: String,
    pub eps: f64,
    /// log of the (weak) lower-tail truth: exact value or MC point.
    pub truth_log: f64,
    /// log of the strict tail, exact mode only.
    pub truth_log_strict: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub bounds: Vec<BoundCell>,
    /// −log(tail) / (φ(−ε)·μ²/Λ)
    pub ratio_mu2_lambda: Option<f64>,
    /// −log(tail) / (φ(−ε)·Φ_H), subgraph instances
    pub ratio_phi_h: Option<f64>,
    /// −log(tail) / (φ(−ε)·Ψ_k), progression/Schur instances
    pub ratio_psi_k: Option<f64>,
}

struct ResolvedInstance {
    id: String,
    family: IndicatorFamily,
    phi_scale: Option<f64>,
    psi_scale: Option<f64>,
}

fn resolve_instance(spec: &InstanceSpec) -> Result<ResolvedInstance> {
    match spec {
        InstanceSpec::FamilyFile { path } => Ok(ResolvedInstance {
            id: format!("family:{}", path.display()),
            family: IndicatorFamily::from_file(path)?,
            phi_scale: None,
            psi_scale: None,
        }),
        InstanceSpec::Subgraph { h, n, p } => {
            let graph = kgraph_from_file(h)?;
            let inst = subgraph_family(&graph, *n, *p)?;
            Ok(ResolvedInstance {
                id: format!("subgraph:{},n={n},p={p}", h.display()),
                family: inst.family,
                phi_scale: Some(inst.phi_h),
                psi_scale: None,
            })
        }
        InstanceSpec::Ap { k, n, p } => {
            let (family, _) = ap_family(*k, *n, *p)?;
            Ok(ResolvedInstance {
                id: format!("ap:k={k},n={n},p={p}"),
                family,
                phi_scale: None,
                psi_scale: Some(psi_scale(*k, *n, *p)),
            })
        }
        InstanceSpec::Schur { n, p } => {
            let (family, _) = schur_family(*n, *p)?;
            Ok(ResolvedInstance {
                id: format!("schur:n={n},p={p}"),
                family,
                phi_scale: None,
                psi_scale: Some(psi_scale(3, *n, *p)),
            })
        }
    }
}

/// Ψ_k(n, p) = min{n²·p^k, n·p}.
pub fn psi_scale(k: usize, n: usize, p: f64) -> f64 {
    let nf = n as f64;
    (nf * nf * p.powi(k as i32)).min(nf * p)
}

/// Run a bound-vs-truth grid. With exact truth every applicable bound is
/// checked against the sandwich ordering and a violation aborts with
/// diagnostics; with MC truth bounds must stay inside 3 Wilson sigmas.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    let inst = resolve_instance(&config.instance)?;
    let selected: Vec<&str> = if config.bounds.is_empty() {
        BOUND_NAMES.to_vec()
    } else {
        let mut sel = Vec::new();
        for name in BOUND_NAMES {
            if config.bounds.iter().any(|b| b == name) {
                sel.push(name);
            }
        }
        for requested in &config.bounds {
            if !BOUND_NAMES.contains(&requested.as_str()) {
                return Err(Error::Domain(format!("unknown bound {requested:?}")));
            }
        }
        sel
    };
    let rows: Result<Vec<ExperimentRow>> = config
        .eps_grid
        .par_iter()
        .map(|&eps| experiment_row(&inst, eps, &selected, config.truth))
        .collect();
    let rows = rows?;
    if let Some(base) = &config.output {
        write_row_reports(&rows, base)?;
    }
    Ok(rows)
}

fn experiment_row(
    inst: &ResolvedInstance,
    eps: f64,
    selected: &[&str],
    truth: TruthMode,
) -> Result<ExperimentRow> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("eps {eps} outside [0,1]")));
    }
    let stats = inst.family.compute_stats();
    let evaluated = all_bounds(&inst.family, eps);
    let bounds: Vec<BoundCell> = evaluated
        .iter()
        .filter(|(name, _)| selected.contains(&name.as_str()))
        .map(|(name, b)| BoundCell {
            name: name.clone(),
            log_value: b.log_value,
            applicable: b.applicable,
        })
        .collect();

    let (truth_log, truth_log_strict, ci_low, ci_high, usable_point) = match truth {
        TruthMode::Exact => {
            let weak = inst.family.exact_lower_tail(eps)?;
            let strict = inst.family.exact_lower_tail_strict(eps)?;
            (weak.ln(), Some(strict.ln()), None, None, true)
        }
        TruthMode::Mc { samples, seed } => {
            let est = inst.family.mc_lower_tail(eps, samples, seed)?;
            let usable = est.point * samples as f64 >= MC_MIN_HITS;
            (
                est.point.ln(),
                None,
                Some(est.ci_low),
                Some(est.ci_high),
                usable,
            )
        }
    };

    // sandwich / CI-consistency enforcement
    for (name, b) in &evaluated {
        if !selected.contains(&name.as_str()) || !b.applicable {
            continue;
        }
        match truth {
            TruthMode::Exact => {
                let target = if name == "lt3" {
                    truth_log_strict.unwrap()
                } else {
                    truth_log
                };
                let ok = match b.direction {
                    Direction::UpperBoundOnTail => truth_log <= b.log_value + LOG_SLACK,
                    Direction::LowerBoundOnTail => b.log_value <= target + LOG_SLACK,
                };
                if !ok {
                    return Err(Error::Domain(format!(
                        "sandwich violation: {name} log={} vs truth log={target} \
                         (instance {}, eps={eps})",
                        b.log_value, inst.id
                    )));
                }
            }
            TruthMode::Mc { samples, .. } => {
                let point = truth_log.exp();
                let sigma = match (ci_low, ci_high) {
                    (Some(lo), Some(hi)) => (hi - lo) / (2.0 * 1.959963984540054),
                    _ => 0.0,
                };
                let _ = samples;
                let ok = match b.direction {
                    Direction::UpperBoundOnTail => point - 3.0 * sigma <= b.value(),
                    Direction::LowerBoundOnTail => b.value() <= point + 3.0 * sigma,
                };
                if !ok {
                    return Err(Error::Domain(format!(
                        "bound inconsistent with MC interval: {name} value={} vs \
                         point={point} ± 3σ={sigma} (instance {}, eps={eps})",
                        b.value(),
                        inst.id
                    )));
                }
            }
        }
    }

    let phi = phi_neg(eps)?;
    let ratio_for = |scale: Option<f64>| -> Option<f64> {
        let s = scale?;
        if !usable_point || phi * s <= 0.0 || truth_log >= 0.0 {
            return None;
        }
        Some(-truth_log / (phi * s))
    };
    let mu2_lambda = (stats.lambda > 0.0).then(|| stats.mu * stats.mu / stats.lambda);

    Ok(ExperimentRow {
        schema: ROW_SCHEMA_VERSION,
        instance_id: inst.id.clone(),
        eps,
        truth_log,
        truth_log_strict,
        ci_low,
        ci_high,
        bounds,
        ratio_mu2_lambda: ratio_for(mu2_lambda),
        ratio_phi_h: ratio_for(inst.phi_scale),
        ratio_psi_k: ratio_for(inst.psi_scale),
    })
}

fn opt_str<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Deterministic CSV: one row per (instance, ε), fixed column order.
pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::new();
    out.push_str("schema,instance_id,eps,truth_log,truth_log_strict,ci_low,ci_high");
    for name in BOUND_NAMES {
        let _ = write!(out, ",{name}_log,{name}_applicable");
    }
    out.push_str(",ratio_mu2_lambda,ratio_phi_h,ratio_psi_k\n");
    for row in rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{}",
            row.schema,
            row.instance_id,
            row.eps,
            row.truth_log,
            opt_str(&row.truth_log_strict),
            opt_str(&row.ci_low),
            opt_str(&row.ci_high),
        );
        for name in BOUND_NAMES {
            match row.bounds.iter().find(|b| b.name == name) {
                Some(cell) => {
                    let _ = write!(out, ",{},{}", cell.log_value, cell.applicable);
                }
                None => out.push_str(",,"),
            }
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            opt_str(&row.ratio_mu2_lambda),
            opt_str(&row.ratio_phi_h),
            opt_str(&row.ratio_psi_k),
        );
    }
    out
}

fn write_row_reports(rows: &[ExperimentRow], base: &Path) -> Result<()> {
    std::fs::write(base.with_extension("csv"), rows_to_csv(rows))?;
    std::fs::write(
        base.with_extension("json"),
        serde_json::to_string_pretty(rows)?,
    )?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrendInstance {
    Subgraph { h: PathBuf, p: f64 },
    Ap { k: usize, p: f64 },
    Schur { p: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrendConfig {
    pub instance: TrendInstance,
    pub n_grid: Vec<usize>,
    pub eps: f64,
    pub truth: TruthMode,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendRow {
    pub n: usize,
    pub tail_log: f64,
    pub scale_mu2_lambda: f64,
    pub ratio_mu2_lambda: f64,
    pub scale_phi_h: Option<f64>,
    pub ratio_phi_h: Option<f64>,
    pub scale_psi_k: Option<f64>,
    pub ratio_psi_k: Option<f64>,
    /// which term attains Ψ_k = min{n²p^k, np}
    pub psi_regime: Option<String>,
}

/// The normalized-ratio table −log(tail)/(φ(−ε)·scale) across the n grid,
/// with the max/min band per scale (the finite-n surrogate for the
/// rate-function Θ(·) claims).
#[derive(Debug, Clone, Serialize)]
pub struct TrendReport {
    pub eps: f64,
    pub rows: Vec<TrendRow>,
    pub band_mu2_lambda: f64,
    pub band_phi_h: Option<f64>,
    pub band_psi_k: Option<f64>,
}

pub fn rate_function_trend(config: &TrendConfig) -> Result<TrendReport> {
    let eps = config.eps;
    let phi = phi_neg(eps)?;
    if phi <= 0.0 {
        return Err(Error::Domain("trend needs ε > 0".into()));
    }
    let mut rows = Vec::new();
    for &n in &config.n_grid {
        let (family, phi_scale, psi): (IndicatorFamily, Option<f64>, Option<f64>) =
            match &config.instance {
                TrendInstance::Subgraph { h, p } => {
                    let graph = kgraph_from_file(h)?;
                    let inst = subgraph_family(&graph, n, *p)?;
                    (inst.family, Some(inst.phi_h), None)
                }
                TrendInstance::Ap { k, p } => {
                    let (family, _) = ap_family(*k, n, *p)?;
                    (family, None, Some(psi_scale(*k, n, *p)))
                }
                TrendInstance::Schur { p } => {
                    let (family, _) = schur_family(n, *p)?;
                    (family, None, Some(psi_scale(3, n, *p)))
                }
            };
        let tail = match config.truth {
            TruthMode::Exact => family.exact_lower_tail(eps)?,
            TruthMode::Mc { samples, seed } => {
                let est = family.mc_lower_tail(eps, samples, seed)?;
                if est.point * (samples as f64) < MC_MIN_HITS {
                    return Err(Error::Domain(format!(
                        "tail at n={n} too small for MC truth at {samples} samples \
                         (point {} needs ≥ {MC_MIN_HITS} hits)",
                        est.point
                    )));
                }
                est.point
            }
        };
        let tail_log = tail.ln();
        let stats = family.compute_stats();
        let scale_mu2_lambda = stats.mu * stats.mu / stats.lambda;
        let ratio = -tail_log / (phi * scale_mu2_lambda);
        let psi_regime = match (&config.instance, psi) {
            (TrendInstance::Ap { k, p }, Some(_)) => {
                let nf = n as f64;
                Some(if nf * nf * p.powi(*k as i32) <= nf * p {
                    "n2pk".to_string()
                } else {
                    "np".to_string()
                })
            }
            (TrendInstance::Schur { p }, Some(_)) => {
                let nf = n as f64;
                Some(if nf * nf * p.powi(3) <= nf * p {
                    "n2pk".to_string()
                } else {
                    "np".to_string()
                })
            }
            _ => None,
        };
        rows.push(TrendRow {
            n,
            tail_log,
            scale_mu2_lambda,
            ratio_mu2_lambda: ratio,
            scale_phi_h: phi_scale,
            ratio_phi_h: phi_scale.map(|s| -tail_log / (phi * s)),
            scale_psi_k: psi,
            ratio_psi_k: psi.map(|s| -tail_log / (phi * s)),
            psi_regime,
        });
    }
    let band = |get: &dyn Fn(&TrendRow) -> Option<f64>| -> Option<f64> {
        let vals: Vec<f64> = rows.iter().filter_map(get).collect();
        if vals.len() != rows.len() || vals.iter().any(|&v| v <= 0.0) {
            return None;
        }
        let max = vals.iter().cloned().fold(f64::MIN, f64::max);
        let min = vals.iter().cloned().fold(f64::MAX, f64::min);
        Some(max / min)
    };
    let report = TrendReport {
        eps,
        band_mu2_lambda: band(&|r| Some(r.ratio_mu2_lambda)).unwrap_or(f64::NAN),
        band_phi_h: band(&|r| r.ratio_phi_h),
        band_psi_k: band(&|r| r.ratio_psi_k),
        rows,
    };
    if let Some(base) = &config.output {
        std::fs::write(base.with_extension("csv"), trend_to_csv(&report))?;
        std::fs::write(
            base.with_extension("json"),
            serde_json::to_string_pretty(&report)?,
        )?;
    }
    Ok(report)
}

pub fn trend_to_csv(report: &TrendReport) -> String {
    let mut out = String::from(
        "schema,n,tail_log,scale_mu2_lambda,ratio_mu2_lambda,scale_phi_h,ratio_phi_h,scale_psi_k,ratio_psi_k,psi_regime\n",
    );
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            ROW_SCHEMA_VERSION,
            r.n,
            r.tail_log,
            r.scale_mu2_lambda,
            r.ratio_mu2_lambda,
            opt_str(&r.scale_phi_h),
            opt_str(&r.ratio_phi_h),
            opt_str(&r.scale_psi_k),
            opt_str(&r.ratio_psi_k),
            opt_str(&r.psi_regime),
        );
    }
    out
}
