//! The rate function φ(x) = (1+x)·log(1+x) − x and the elementary
//! inequalities it satisfies on [0,1], exposed as checkable predicates.
//!
//! Conventions: φ(−1) = 1 (from 0·log 0 = 0), and the checks treat
//! log²(1−ε) as +∞ at ε = 1 where it appears alone on the large side.

use serde::Serialize;

use crate::error::{Error, Result};

/// Additive tolerance used by the inequality predicates.
pub const CHECK_TOL: f64 = 1e-12;

/// φ(x) for x ≥ −1, with φ(−1) = 1 and a series evaluation near 0 where
/// the direct formula loses all significant digits (φ(x) ≈ x²/2).
pub fn phi(x: f64) -> Result<f64> {
    if x < -1.0 || x.is_nan() {
        return Err(Error::Domain(format!("phi needs x ≥ −1, got {x}")));
    }
    if x == -1.0 {
        return Ok(1.0);
    }
    if x.abs() < 1e-3 {
        // x²/2 − x³/6 + x⁴/12 − x⁵/20 + x⁶/30; truncation below 1e−22 here
        let x2 = x * x;
        return Ok(x2 * (0.5 - x / 6.0 + x2 / 12.0 - x2 * x / 20.0 + x2 * x2 / 30.0));
    }
    Ok((1.0 + x) * x.ln_1p() - x)
}

/// φ(−ε) for ε ∈ [0,1].
pub fn phi_neg(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("phi_neg needs ε ∈ [0,1], got {eps}")));
    }
    phi(-eps)
}

/// The four atomic inequalities of
/// max{(1−ε)·log²(1−ε), ε²} ≤ 2φ(−ε) ≤ min{log²(1−ε), 2ε²}.
#[derive(Debug, Clone, Serialize)]
pub struct VarphiBounds {
    pub eps: f64,
    pub phi: f64,
    pub lower_log_term: bool,
    pub lower_eps_sq: bool,
    pub upper_log_sq: bool,
    pub upper_two_eps_sq: bool,
}

impl VarphiBounds {
    pub fn all_hold(&self) -> bool {
        self.lower_log_term && self.lower_eps_sq && self.upper_log_sq && self.upper_two_eps_sq
    }
}

pub fn varphi_bounds_check(eps: f64) -> Result<VarphiBounds> {
    let phi = phi_neg(eps)?;
    let two_phi = 2.0 * phi;
    let (lower_log, upper_log) = if eps == 1.0 {
        // 0·log² 0 = 0 on the left; log²(1−ε) = +∞ on the right
        (0.0, f64::INFINITY)
    } else {
        let l = (-eps).ln_1p();
        ((1.0 - eps) * l * l, l * l)
    };
    Ok(VarphiBounds {
        eps,
        phi,
        lower_log_term: lower_log <= two_phi + CHECK_TOL,
        lower_eps_sq: eps * eps <= two_phi + CHECK_TOL,
        upper_log_sq: two_phi <= upper_log + CHECK_TOL,
        upper_two_eps_sq: two_phi <= 2.0 * eps * eps + CHECK_TOL,
    })
}

/// For ε ∈ [1−e^{−1}, 1]:  φ(−ε) ≤ 1 ≤ (1 + 5√(1−ε))·φ(−ε).
#[derive(Debug, Clone, Serialize)]
pub struct Varphi2Check {
    pub eps: f64,
    pub phi: f64,
    pub upper_one: bool,
    pub lower_factor: bool,
}

impl Varphi2Check {
    pub fn all_hold(&self) -> bool {
        self.upper_one && self.lower_factor
    }
}

pub fn varphi2_check(eps: f64) -> Result<Varphi2Check> {
    let lo = 1.0 - (-1.0f64).exp();
    if !(lo..=1.0).contains(&eps) {
        return Err(Error::Domain(format!(
            "varphi2 needs ε ∈ [1−1/e, 1], got {eps}"
        )));
    }
    let phi = phi_neg(eps)?;
    Ok(Varphi2Check {
        eps,
        phi,
        upper_one: phi <= 1.0 + CHECK_TOL,
        lower_factor: 1.0 <= (1.0 + 5.0 * (1.0 - eps).sqrt()) * phi + CHECK_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Varphi3Branch {
    /// A·ε ≤ 1, factor (1 + A·ε)·A².
    Scaled,
    /// γ = A − 1 > 0 with 3√γ ≤ 1 − ε, factor 1 + √γ.
    NearOne,
}

/// Bound factor for φ(−A·ε) ≤ factor · φ(−ε).
#[derive(Debug, Clone, Serialize)]
pub struct Varphi3Factor {
    pub eps: f64,
    pub a: f64,
    pub branch: Varphi3Branch,
    pub factor: f64,
    /// φ(−A·ε) ≤ factor·φ(−ε), verified numerically (trivial at ε = 0).
    pub holds: bool,
}

/// Dispatch: the near-one branch is taken whenever γ = A−1 > 0 and
/// 3√γ ≤ 1−ε; otherwise the scaled branch requires A·ε ≤ 1.
pub fn varphi3_factor(eps: f64, a: f64) -> Result<Varphi3Factor> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("varphi3 needs ε ∈ [0,1], got {eps}")));
    }
    if a < 0.0 {
        return Err(Error::Domain(format!("varphi3 needs A ≥ 0, got {a}")));
    }
    let gamma = a - 1.0;
    let (branch, factor) = if gamma > 0.0 && 3.0 * gamma.sqrt() <= 1.0 - eps {
        (Varphi3Branch::NearOne, 1.0 + gamma.sqrt())
    } else if a * eps <= 1.0 {
        (Varphi3Branch::Scaled, (1.0 + a * eps) * a * a)
    } else {
        return Err(Error::Domain(format!(
            "varphi3: neither branch applies (ε={eps}, A={a})"
        )));
    };
    let holds = if eps == 0.0 {
        true
    } else {
        phi(-a * eps)? <= factor * phi_neg(eps)? + CHECK_TOL
    };
    Ok(Varphi3Factor {
        eps,
        a,
        branch,
        factor,
        holds,
    })
}
