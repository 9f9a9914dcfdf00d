//! Closed-form lower-tail bounds for X = Σ I_α, each returned as a
//! log-space value plus an applicability verdict, and a numerical verifier
//! for the Hölder three-factor decomposition of the strict tail.
//!
//! Inapplicable bounds still carry their formal value so the harness can
//! chart "formula vs validity region"; `applicable` is the AND of the named
//! gate conditions. All probabilities live in natural-log space.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FamilyStats, IndicatorFamily};
use crate::phi::phi_neg;

/// The explicit constants, one table mirroring the source formulas.
pub mod consts {
    /// Coefficient of ξ in the Poisson-regime lower bounds.
    pub const XI_COEFF: f64 = 135.0;
    /// Smallness gate on max{Π, δ} for the main lower bound.
    pub const SMALLNESS_GATE: f64 = 0.00006103515625; // 2^{-14}
    /// Coefficient of K = 5000/(1−Π)^5.
    pub const K_COEFF: f64 = 5000.0;
    /// Power of (1−Π) in K.
    pub const K_PI_POWER: i32 = 5;
    /// ε cutoff below which δ* keeps the dependency term.
    pub const EPS_CUT: f64 = 0.02; // 1/50
    /// Coefficient of ζ in the Harris-regime bound.
    pub const ZETA_COEFF: f64 = 10.0;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    UpperBoundOnTail,
    LowerBoundOnTail,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
}

/// A bound value in log space with its gate conditions and the constants
/// that entered the formula.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundResult {
    pub log_value: f64,
    pub applicable: bool,
    pub conditions: Vec<Condition>,
    pub constants: BTreeMap<String, f64>,
    pub direction: Direction,
}

impl BoundResult {
    pub fn new(
        direction: Direction,
        log_value: f64,
        conditions: Vec<(&str, bool)>,
        constants: &[(&str, f64)],
    ) -> Self {
        let applicable = conditions.iter().all(|&(_, h)| h);
        debug_assert!(log_value <= 0.0 || log_value.is_nan());
        Self {
            log_value,
            applicable,
            conditions: conditions
                .into_iter()
                .map(|(name, holds)| Condition {
                    name: name.into(),
                    holds,
                })
                .collect(),
            constants: constants
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
            direction: Direction::LowerBoundOnTail,
        }
        .with_direction(direction)
    }

    fn with_direction(mut self, d: Direction) -> Self {
        self.direction = d;
        self
    }

    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// −(1 + coeff)·φ(−ε)·μ with the 0·∞ corner pinned to 0: a zero exponent
/// means the bound is the trivial 1 no matter how large the error factor.
fn scaled_phi_exponent(coeff: f64, phi_mu: f64) -> f64 {
    if phi_mu == 0.0 {
        0.0
    } else {
        -(1.0 + coeff) * phi_mu
    }
}

/// Poisson-type upper bound exp{−φ(−ε)·μ²/Λ} on Pr(X ≤ (1−ε)·μ).
pub fn janson_upper(stats: &FamilyStats, eps: f64) -> BoundResult {
    let in_range = (0.0..=1.0).contains(&eps);
    let phi = if in_range { phi_neg(eps).unwrap() } else { f64::NAN };
    let log_value = if stats.mu == 0.0 || !in_range {
        0.0
    } else {
        -phi * stats.mu * stats.mu / stats.lambda
    };
    BoundResult::new(
        Direction::UpperBoundOnTail,
        log_value,
        vec![("eps_in_unit_interval", in_range)],
        &[
            ("phi", phi),
            ("mu", stats.mu),
            ("lambda", stats.lambda),
        ],
    )
}

/// The two Harris-type lower bounds on Pr(X = 0): the exact product
/// ∏(1 − E I_α) and its exponential relaxation exp{−μ/(1−Π)}.
#[derive(Debug, Clone, Serialize)]
pub struct HarrisBound {
    pub product: BoundResult,
    pub exponential: BoundResult,
}

pub fn harris_lower(family: &IndicatorFamily) -> HarrisBound {
    let stats = family.compute_stats();
    let log_product = family.log_harris_product();
    let product = BoundResult::new(
        Direction::LowerBoundOnTail,
        log_product,
        vec![],
        &[("pi", stats.pi), ("mu", stats.mu)],
    );
    let pi_ok = stats.pi < 1.0;
    let log_exp = if pi_ok {
        -stats.mu / (1.0 - stats.pi)
    } else {
        f64::NEG_INFINITY
    };
    let exponential = BoundResult::new(
        Direction::LowerBoundOnTail,
        log_exp,
        vec![("pi_lt_1", pi_ok)],
        &[("pi", stats.pi), ("mu", stats.mu)],
    );
    HarrisBound {
        product,
        exponential,
    }
}

/// Main Poisson-regime lower bound: exp{−(1+ξ)·φ(−ε)·μ} whenever
/// max{Π, 1{ε<1}·δ} ≤ 2^{−14} and ε²μ ≥ 1{ε<1}, with
/// ξ = 135·max{Π^{1/8}, 1{ε<1}·δ^{1/8}, 1{ε<1}·(ε²μ)^{−1/4}}.
pub fn lt_main(stats: &FamilyStats, eps: f64) -> BoundResult {
    let delta = stats.delta_or_zero();
    let strict = eps < 1.0;
    let in_range = (0.0..=1.0).contains(&eps);
    let phi = if in_range { phi_neg(eps).unwrap() } else { f64::NAN };
    let eps2mu = eps * eps * stats.mu;
    let smallness = stats.pi.max(if strict { delta } else { 0.0 }) <= consts::SMALLNESS_GATE;
    let mass = eps2mu >= if strict { 1.0 } else { 0.0 };
    let xi = consts::XI_COEFF
        * stats
            .pi
            .powf(0.125)
            .max(if strict { delta.powf(0.125) } else { 0.0 })
            .max(if strict { eps2mu.powf(-0.25) } else { 0.0 });
    let log_value = scaled_phi_exponent(xi, phi * stats.mu);
    BoundResult::new(
        Direction::LowerBoundOnTail,
        log_value,
        vec![
            ("eps_in_unit_interval", in_range),
            ("pi_delta_small", smallness),
            ("eps_sq_mu_large", mass),
        ],
        &[
            ("xi", xi),
            ("phi", phi),
            ("mu", stats.mu),
            ("pi", stats.pi),
            ("delta", delta),
        ],
    )
}

/// Any-Π lower bound: exp{−K·φ(−ε)·μ·(1+δ*)} with K = 5000/(1−Π)^5 and
/// δ* = 1{ε<1/50}·δ. The weaker ε² form is reported alongside.
pub fn lt2(stats: &FamilyStats, eps: f64) -> BoundResult {
    let delta = stats.delta_or_zero();
    let in_range = (0.0..=1.0).contains(&eps);
    let phi = if in_range { phi_neg(eps).unwrap() } else { f64::NAN };
    let tiny_eps = eps < consts::EPS_CUT;
    let pi_ok = stats.pi < 1.0;
    let mass = eps * eps * stats.mu
        >= if tiny_eps {
            (1.0 + delta).powf(-0.5)
        } else {
            0.0
        };
    let k = consts::K_COEFF / (1.0 - stats.pi).powi(consts::K_PI_POWER);
    let delta_star = if tiny_eps { delta } else { 0.0 };
    let exponent_scale = k * (1.0 + delta_star);
    let log_value = if phi * stats.mu == 0.0 {
        0.0
    } else {
        -exponent_scale * phi * stats.mu
    };
    let log_eps_sq_form = if eps * eps * stats.mu == 0.0 {
        0.0
    } else {
        -exponent_scale * eps * eps * stats.mu
    };
    BoundResult::new(
        Direction::LowerBoundOnTail,
        log_value,
        vec![
            ("eps_in_unit_interval", in_range),
            ("pi_lt_1", pi_ok),
            ("eps_sq_mu_large", mass),
        ],
        &[
            ("k", k),
            ("delta_star", delta_star),
            ("phi", phi),
            ("mu", stats.mu),
            ("pi", stats.pi),
            ("log_eps_sq_form", log_eps_sq_form),
        ],
    )
}

/// Strict-tail lower bound away from ε = 1: exp{−(1+ξ)·φ(−ε)·μ} on
/// Pr(X < (1−ε)·μ), gated by e(1−ε)ε²μ ≥ 1 and
/// ε ≤ 1 − 4·max{Π^{1/4}, δ^{1/4}}, with
/// ξ = 135·max{Π^{1/4}, δ^{1/4}, [e(1−ε)ε²μ]^{−1/2}}.
pub fn lt3(stats: &FamilyStats, eps: f64) -> BoundResult {
    let delta = stats.delta_or_zero();
    let in_range = (0.0..=1.0).contains(&eps);
    let phi = if in_range { phi_neg(eps).unwrap() } else { f64::NAN };
    let e_term = std::f64::consts::E * (1.0 - eps) * eps * eps * stats.mu;
    let mass = e_term >= 1.0;
    let quarter = stats.pi.powf(0.25).max(delta.powf(0.25));
    let eps_range = eps >= 0.0 && eps <= 1.0 - 4.0 * quarter;
    let xi = consts::XI_COEFF * quarter.max(e_term.powf(-0.5));
    let log_value = scaled_phi_exponent(xi, phi * stats.mu);
    BoundResult::new(
        Direction::LowerBoundOnTail,
        log_value,
        vec![
            ("eps_in_unit_interval", in_range),
            ("e_term_ge_1", mass),
            ("eps_below_pi_delta_margin", eps_range),
        ],
        &[
            ("xi", xi),
            ("phi", phi),
            ("mu", stats.mu),
            ("e_term", e_term),
        ],
    )
}

/// Harris-regime lower bound for ε ∈ [1−e^{−1}, 1]: exp{−(1+ζ)·φ(−ε)·μ}
/// with ζ = 10·max{√(1−ε), Π/(1−Π)}; valid for both Pr(X ≤ (1−ε)μ)
/// and Pr(X = 0).
pub fn lt4(stats: &FamilyStats, eps: f64) -> BoundResult {
    let lo = 1.0 - (-1.0f64).exp();
    let eps_ok = (lo..=1.0).contains(&eps);
    let pi_ok = stats.pi < 1.0;
    let phi = if (0.0..=1.0).contains(&eps) {
        phi_neg(eps).unwrap()
    } else {
        f64::NAN
    };
    let zeta = consts::ZETA_COEFF
        * (1.0 - eps)
            .max(0.0)
            .sqrt()
            .max(stats.pi / (1.0 - stats.pi));
    let log_value = scaled_phi_exponent(zeta, phi * stats.mu);
    BoundResult::new(
        Direction::LowerBoundOnTail,
        log_value,
        vec![("eps_ge_1_minus_1_over_e", eps_ok), ("pi_lt_1", pi_ok)],
        &[
            ("zeta", zeta),
            ("phi", phi),
            ("mu", stats.mu),
            ("pi", stats.pi),
        ],
    )
}

/// log lower bound on the Laplace transform:
/// E e^{−sX} ≥ exp{−μ(1−e^{−s}) − μΠ(1−e^{−s})²/(2(1−λ))}, λ = Π(1−e^{−s}).
pub fn laplace_lower(stats: &FamilyStats, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::Domain(format!("laplace_lower needs s ≥ 0, got {s}")));
    }
    let one_minus = -(-s).exp_m1();
    let lambda = stats.pi * one_minus;
    if lambda >= 1.0 {
        return Err(Error::Domain(format!(
            "laplace_lower needs Π(1−e^{{−s}}) < 1, got {lambda}"
        )));
    }
    Ok(-stats.mu * one_minus - stats.mu * stats.pi * one_minus * one_minus / (2.0 * (1.0 - lambda)))
}

/// log lower bound on the ratio E e^{−rX} / E e^{−tX} for t ≥ r ≥ 0:
/// (μ/(1+δ))·(e^{−(1+δ)r} − e^{−(1+δ)t}).
pub fn laplace_ratio_lower(stats: &FamilyStats, r: f64, t: f64) -> Result<f64> {
    if r < 0.0 || t < r {
        return Err(Error::Domain(format!(
            "laplace_ratio_lower needs t ≥ r ≥ 0, got r={r}, t={t}"
        )));
    }
    if stats.mu == 0.0 {
        return Ok(0.0);
    }
    let d1 = 1.0 + stats.delta_or_zero();
    Ok(stats.mu / d1 * ((-d1 * r).exp() - (-d1 * t).exp()))
}

/// The three exact factors of the Hölder split of Pr(X < (1−ε)·μ) at
/// s = p·z, alongside the analytic lower bounds each factor must dominate.
#[derive(Debug, Clone, Serialize)]
pub struct HolderReport {
    pub eps: f64,
    pub sigma: f64,
    pub tau: f64,
    pub p_holder: f64,
    pub q_holder: f64,
    pub z: f64,
    pub s: f64,
    /// log of [E(e^{−sX}·1{X<(1−ε)μ}) / E e^{−sX}]^{p/(p−1)}
    pub factor_a_log: f64,
    /// log of [E e^{−sX} / E e^{−psX}]^{1/(p−1)}
    pub factor_b_log: f64,
    /// log of E e^{−sX}
    pub factor_c_log: f64,
    pub lemma_lower_rhs_log: f64,
    pub lemma_negl_rhs_log: f64,
    pub lower_precondition_holds: bool,
    pub negl_precondition_holds: bool,
    /// product of factors ≤ exact strict tail (the Hölder direction)
    pub holder_inequality_ok: bool,
    /// lemma bound ≤ factor B·C whenever its precondition holds
    pub lower_bound_ok: bool,
    /// lemma bound ≤ factor A whenever its precondition holds
    pub negl_bound_ok: bool,
    pub exact_strict_tail_log: f64,
}

impl HolderReport {
    pub fn all_ok(&self) -> bool {
        self.holder_inequality_ok && self.lower_bound_ok && self.negl_bound_ok
    }
}

const LOG_SLACK: f64 = 1e-10;

/// Evaluate the Hölder decomposition exactly on an enumerable family.
pub fn holder_report(
    family: &IndicatorFamily,
    eps: f64,
    sigma: f64,
    tau: f64,
) -> Result<HolderReport> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Domain(format!("holder needs ε ∈ (0,1), got {eps}")));
    }
    if sigma <= 0.0 {
        return Err(Error::Domain(format!("holder needs σ > 0, got {sigma}")));
    }
    if !(0.0 < tau && tau < 1.0) {
        return Err(Error::Domain(format!("holder needs τ ∈ (0,1), got {tau}")));
    }
    let stats = family.compute_stats();
    if stats.mu == 0.0 {
        return Err(Error::Domain("holder needs μ > 0".into()));
    }
    let p = 1.0 + sigma;
    let q = 1.0 + 1.0 / sigma;
    let z = -(-eps).ln_1p();
    let s = p * z;

    let dist = family.exact_distribution()?;
    let threshold = family.lower_tail_threshold(eps);
    let psi_s = dist.laplace(s);
    let psi_ps = dist.laplace(p * s);
    let below = dist.laplace_below(s, &threshold);
    let strict_tail = dist.prob_lt(&threshold);

    let factor_a_log = (p / sigma) * (below.ln() - psi_s.ln());
    let factor_b_log = (1.0 / sigma) * (psi_s.ln() - psi_ps.ln());
    let factor_c_log = psi_s.ln();

    let delta = stats.delta_or_zero();
    let phi_mu = phi_neg(eps)? * stats.mu;
    let one_minus = -(-s).exp_m1();
    let lam = stats.pi * one_minus;

    let lower_pre = lam <= 0.5;
    let eta = 2.0 * p * p * (sigma + p * delta + stats.pi) + 2.0 * p * sigma;
    let lemma_lower_rhs_log = -(1.0 + eta) * phi_mu;

    let decay = (1.0 - eps).powf(p);
    let negl_pre = lam < 1.0
        && (1.0 - tau) * sigma * sigma * decay
            >= p * p * stats.pi / (1.0 - lam) + delta / (1.0 + delta);
    let negl_coeff =
        4.0 * p / (tau * sigma.powi(3) * decay * eps.powi(4) * stats.mu * stats.mu);
    let lemma_negl_rhs_log = -negl_coeff * phi_mu;

    Ok(HolderReport {
        eps,
        sigma,
        tau,
        p_holder: p,
        q_holder: q,
        z,
        s,
        factor_a_log,
        factor_b_log,
        factor_c_log,
        lemma_lower_rhs_log,
        lemma_negl_rhs_log,
        lower_precondition_holds: lower_pre,
        negl_precondition_holds: negl_pre,
        holder_inequality_ok: factor_a_log + factor_b_log + factor_c_log
            <= strict_tail.ln() + LOG_SLACK,
        lower_bound_ok: !lower_pre
            || lemma_lower_rhs_log <= factor_b_log + factor_c_log + LOG_SLACK,
        negl_bound_ok: !negl_pre || lemma_negl_rhs_log <= factor_a_log + LOG_SLACK,
        exact_strict_tail_log: strict_tail.ln(),
    })
}

/// All six tail bounds for one (stats, family, ε), in a fixed order usable
/// by the CLI and the harness.
pub fn all_bounds(family: &IndicatorFamily, eps: f64) -> Vec<(String, BoundResult)> {
    let stats = family.compute_stats();
    let harris = harris_lower(family);
    vec![
        ("janson_upper".into(), janson_upper(&stats, eps)),
        ("harris_product".into(), harris.product),
        ("harris_exponential".into(), harris.exponential),
        ("lt_main".into(), lt_main(&stats, eps)),
        ("lt2".into(), lt2(&stats, eps)),
        ("lt3".into(), lt3(&stats, eps)),
        ("lt4".into(), lt4(&stats, eps)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{overlapping_pair_example, GroundSet};

    fn binomial_family(n: usize, p: f64) -> IndicatorFamily {
        IndicatorFamily::new(
            GroundSet::uniform(n, p).unwrap(),
            (0..n as u32).map(|i| vec![i]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn janson_examples() {
        let pair = overlapping_pair_example();
        let stats = pair.compute_stats();
        assert_eq!(janson_upper(&stats, 0.0).log_value, 0.0);
        let at1 = janson_upper(&stats, 1.0);
        assert!((at1.log_value + 1.0 / 3.0).abs() < 1e-12);
        let exact = pair.exact_lower_tail(1.0).unwrap();
        assert!(exact <= at1.value() + 1e-12);

        let bin = binomial_family(4, 0.5);
        let b = janson_upper(&bin.compute_stats(), 1.0);
        assert!((b.log_value + 2.0).abs() < 1e-12);
        assert!(bin.exact_lower_tail(1.0).unwrap() <= b.value());
    }

    #[test]
    fn janson_monotone_in_eps() {
        let stats = overlapping_pair_example().compute_stats();
        let mut prev = 0.0f64;
        for i in 0..=100 {
            let eps = i as f64 / 100.0;
            let lv = janson_upper(&stats, eps).log_value;
            assert!(lv <= prev + 1e-15);
            prev = lv;
        }
    }

    #[test]
    fn harris_examples() {
        let pair = overlapping_pair_example();
        let h = harris_lower(&pair);
        assert!((h.product.value() - 0.5625).abs() < 1e-12);
        assert!(h.product.value() <= pair.exact_lower_tail(1.0).unwrap());
        assert!(h.exponential.applicable);
        assert!(h.exponential.log_value <= h.product.log_value);

        let empty = IndicatorFamily::new(GroundSet::uniform(2, 0.5).unwrap(), vec![]).unwrap();
        assert_eq!(harris_lower(&empty).product.log_value, 0.0);

        let certain =
            IndicatorFamily::new(GroundSet::uniform(1, 1.0).unwrap(), vec![vec![0]]).unwrap();
        let h = harris_lower(&certain);
        assert_eq!(h.product.log_value, f64::NEG_INFINITY);
        assert!(!h.exponential.applicable);
    }

    #[test]
    fn lt_main_gates_and_values() {
        // tiny-Π independent family: applicable at ε = 1
        let stats = FamilyStats {
            mu: 32.0,
            pi: 2f64.powi(-15),
            lambda: 32.0,
            delta: Some(0.0),
            n_members: 1 << 20,
            ordered_overlap_pairs: 0,
        };
        let at1 = lt_main(&stats, 1.0);
        assert!(at1.applicable);
        let xi = consts::XI_COEFF * 2f64.powf(-15.0 / 8.0);
        assert!((at1.constants["xi"] - xi).abs() < 1e-12);
        assert!((at1.log_value + (1.0 + xi) * 32.0).abs() < 1e-9);

        let half = lt_main(&stats, 0.5);
        assert!(half.applicable, "ε²μ = 8 ≥ 1 and δ = 0");

        // δ too large with ε < 1: the named condition flips
        let dep = FamilyStats {
            mu: 100.0,
            pi: 1e-6,
            lambda: 150.0,
            delta: Some(0.5),
            n_members: 100,
            ordered_overlap_pairs: 10,
        };
        let r = lt_main(&dep, 0.5);
        assert!(!r.applicable);
        assert!(r
            .conditions
            .iter()
            .any(|c| c.name == "pi_delta_small" && !c.holds));
        // ... but not at ε = 1 where the δ indicator vanishes
        assert!(lt_main(&dep, 1.0).applicable);
    }

    #[test]
    fn lt2_examples() {
        let pair = overlapping_pair_example();
        let stats = pair.compute_stats();
        let at1 = lt2(&stats, 1.0);
        let k = consts::K_COEFF / (1.0f64 - 0.25).powi(5);
        assert!(at1.applicable);
        assert!((at1.constants["k"] - k).abs() < 1e-9);
        assert!((at1.log_value + k * stats.mu).abs() < 1e-9);

        let mid = lt2(&stats, 0.6);
        assert!(mid.applicable);
        assert!(mid.value() <= pair.exact_lower_tail(0.6).unwrap() + 1e-12);

        let empty = FamilyStats {
            mu: 0.0,
            pi: 0.0,
            lambda: 0.0,
            delta: None,
            n_members: 0,
            ordered_overlap_pairs: 0,
        };
        assert_eq!(lt2(&empty, 0.5).log_value, 0.0);
    }

    #[test]
    fn lt3_examples() {
        let stats = FamilyStats {
            mu: 8.0,
            pi: 0.0,
            lambda: 8.0,
            delta: Some(0.0),
            n_members: 8,
            ordered_overlap_pairs: 0,
        };
        let r = lt3(&stats, 0.5);
        assert!(r.applicable);
        let e_term = std::f64::consts::E * 0.5 * 0.25 * 8.0;
        let xi = consts::XI_COEFF * e_term.powf(-0.5);
        assert!((r.constants["xi"] - xi).abs() < 1e-12);

        let at0 = lt3(&stats, 0.0);
        assert!(!at0.applicable);
        assert!(at0
            .conditions
            .iter()
            .any(|c| c.name == "e_term_ge_1" && !c.holds));
    }

    #[test]
    fn lt4_examples() {
        let pair = overlapping_pair_example();
        let stats = pair.compute_stats();
        let at1 = lt4(&stats, 1.0);
        assert!(at1.applicable);
        let zeta = consts::ZETA_COEFF * (0.25 / 0.75);
        assert!((at1.constants["zeta"] - zeta).abs() < 1e-12);
        assert!(at1.value() <= pair.exact_lower_tail(1.0).unwrap());

        let boundary = lt4(&stats, 1.0 - (-1.0f64).exp());
        assert!(boundary.applicable);
        assert!(!lt4(&stats, 0.5).applicable);

        // ζ → 0 as Π → 0 at ε = 1: matches the Harris asymptotics exp{−μ}
        let thin = FamilyStats {
            mu: 5.0,
            pi: 1e-12,
            lambda: 5.0,
            delta: Some(0.0),
            n_members: 100,
            ordered_overlap_pairs: 0,
        };
        let r = lt4(&thin, 1.0);
        assert!((r.log_value + 5.0).abs() < 1e-9);
    }

    #[test]
    fn laplace_lower_examples() {
        let pair = overlapping_pair_example();
        let stats = pair.compute_stats();
        assert_eq!(laplace_lower(&stats, 0.0).unwrap(), 0.0);
        let bound = laplace_lower(&stats, 1.0).unwrap();
        let exact = pair.exact_laplace(1.0).unwrap();
        assert!(bound <= exact.ln() + 1e-12);

        let empty = FamilyStats {
            mu: 0.0,
            pi: 0.0,
            lambda: 0.0,
            delta: None,
            n_members: 0,
            ordered_overlap_pairs: 0,
        };
        assert_eq!(laplace_lower(&empty, 3.0).unwrap(), 0.0);
        let certain = FamilyStats {
            mu: 1.0,
            pi: 1.0,
            lambda: 1.0,
            delta: Some(0.0),
            n_members: 1,
            ordered_overlap_pairs: 0,
        };
        assert!(laplace_lower(&certain, 50.0).is_err());
    }

    #[test]
    fn laplace_lower_pointwise_on_grid() {
        let pair = overlapping_pair_example();
        let stats = pair.compute_stats();
        let dist = pair.exact_distribution().unwrap();
        for i in 0..=40 {
            let s = i as f64 * 0.25;
            let bound = laplace_lower(&stats, s).unwrap();
            assert!(bound <= dist.laplace(s).ln() + 1e-12, "s={s}");
        }
    }

    #[test]
    fn laplace_ratio_examples() {
        let pair = overlapping_pair_example();
        let stats = pair.compute_stats();
        assert_eq!(laplace_ratio_lower(&stats, 1.0, 1.0).unwrap(), 0.0);
        let bound = laplace_ratio_lower(&stats, 0.0, 1.0).unwrap();
        let exact_ratio = 1.0 / pair.exact_laplace(1.0).unwrap();
        assert!(bound <= exact_ratio.ln() + 1e-12);
        assert!(laplace_ratio_lower(&stats, 1.0, 0.5).is_err());

        // δ = 0 specialization: exponent is μ(e^{−r} − e^{−t})
        let ind = FamilyStats {
            mu: 3.0,
            pi: 0.5,
            lambda: 3.0,
            delta: Some(0.0),
            n_members: 6,
            ordered_overlap_pairs: 0,
        };
        let b = laplace_ratio_lower(&ind, 0.5, 2.0).unwrap();
        assert!((b - 3.0 * ((-0.5f64).exp() - (-2.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn laplace_ratio_grid_against_exact() {
        let pair = overlapping_pair_example();
        let stats = pair.compute_stats();
        let dist = pair.exact_distribution().unwrap();
        for i in 0..6 {
            for j in i..6 {
                let (r, t) = (i as f64 * 0.5, j as f64 * 0.5);
                let bound = laplace_ratio_lower(&stats, r, t).unwrap();
                let exact = dist.laplace(r).ln() - dist.laplace(t).ln();
                assert!(bound <= exact + 1e-12, "r={r} t={t}");
            }
        }
    }

    #[test]
    fn holder_report_examples() {
        let pair = overlapping_pair_example();
        let rep = holder_report(&pair, 0.5, 0.5, 0.625).unwrap();
        assert!((1.0 / rep.p_holder + 1.0 / rep.q_holder - 1.0).abs() < 1e-12);
        assert!((rep.s - rep.p_holder * rep.z).abs() < 1e-12);
        assert!(rep.all_ok(), "{rep:?}");

        let bin = binomial_family(10, 0.1);
        let rep = holder_report(&bin, 0.5, 0.25, 0.5).unwrap();
        assert!(rep.holder_inequality_ok);
        assert!(
            rep.factor_a_log + rep.factor_b_log + rep.factor_c_log
                <= rep.exact_strict_tail_log + 1e-10
        );

        assert!(holder_report(&pair, 1.0, 0.5, 0.5).is_err());
        assert!(holder_report(&pair, 0.5, 0.0, 0.5).is_err());
    }

    #[test]
    fn zero_count_lower_bounds_at_eps_one() {
        // small-Π independent family where the Poisson-regime gates hold:
        // both ε=1 lower bounds must stay below the exact P(X = 0)
        let p = 2f64.powi(-15);
        let fam = binomial_family(20, p);
        let stats = fam.compute_stats();
        let exact_zero = fam.exact_lower_tail(1.0).unwrap().ln();
        let main = lt_main(&stats, 1.0);
        assert!(main.applicable);
        assert!(main.log_value <= exact_zero + 1e-12);
        let harris_regime = lt4(&stats, 1.0);
        assert!(harris_regime.applicable);
        assert!(harris_regime.log_value <= exact_zero + 1e-12);
    }

    #[test]
    fn sandwich_on_small_grids() {
        let pair = overlapping_pair_example();
        for i in 1..=10 {
            let eps = i as f64 / 10.0;
            let exact = pair.exact_lower_tail(eps).unwrap();
            let exact_strict = pair.exact_lower_tail_strict(eps).unwrap();
            for (name, b) in all_bounds(&pair, eps) {
                if !b.applicable {
                    continue;
                }
                match b.direction {
                    Direction::UpperBoundOnTail => {
                        assert!(exact.ln() <= b.log_value + 1e-10, "{name} at ε={eps}")
                    }
                    Direction::LowerBoundOnTail => {
                        let target = if name == "lt3" { exact_strict } else { exact };
                        assert!(b.log_value <= target.ln() + 1e-10, "{name} at ε={eps}");
                    }
                }
            }
        }
    }
}
