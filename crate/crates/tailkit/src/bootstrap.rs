//! Bootstrapping transfers: lower-tail bounds for strongly dependent
//! counts obtained by conditioning on a simpler statistic — the size of
//! the random subset, a symmetric decomposition X = Σ_β I_β·X_β, or the
//! subgraph count inside one half of the vertex set — plus the one-sided
//! Chebyshev inequality and the conditional Harris correlation claim these
//! arguments rest on.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundResult, Direction};
use crate::error::{Error, Result};
use crate::family::{GroundSet, IndicatorFamily};
use crate::instances::kgraph::KGraph;
use crate::instances::subgraph::{subgraph_family_capped, DEFAULT_COPY_CAP};
use crate::numeric::{big_binomial, log_binomial_cdf, rational_of, rational_to_f64};

/// How a transfer bound obtains the tail of its auxiliary statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailTruth {
    Exact,
    Mc { samples: u64, seed: u64 },
}

/// One-sided Chebyshev: Pr(Z ≥ E Z + t) ≤ v/(v + t²) when Var Z ≤ v.
pub fn one_sided_chebyshev(v: f64, t: f64) -> Result<f64> {
    if v < 0.0 {
        return Err(Error::Domain(format!("variance bound {v} must be ≥ 0")));
    }
    if t <= 0.0 {
        return Err(Error::Domain(format!("threshold {t} must be > 0")));
    }
    Ok(v / (v + t * t))
}

/// Conditional mean and variance of X given |Γ_p| = j (uniform p).
#[derive(Debug, Clone, Serialize)]
pub struct SizeConditional {
    pub j: usize,
    pub cond_mean: f64,
    pub cond_var: f64,
}

/// E_j(I) for a member of size q: C(N−q, j−q)/C(N, j), i.e. the chance a
/// uniform j-subset covers q fixed elements.
fn hypergeom_exact(n: usize, j: usize, q: usize) -> BigRational {
    if q > j {
        return BigRational::zero();
    }
    BigRational::new(
        big_binomial((n - q) as u64, (j - q) as u64),
        big_binomial(n as u64, j as u64),
    )
}

/// Exact conditional moments: (E_j X, Var_j X) as rationals.
///
/// Requires a uniform probability vector; the conditional law given
/// |Γ_p| = j is then the uniform j-subset regardless of p.
pub fn conditional_moments_exact(
    family: &IndicatorFamily,
    j: usize,
) -> Result<(BigRational, BigRational)> {
    if family.ground().uniform_p().is_none() {
        return Err(Error::NonUniform);
    }
    let n = family.ground().size();
    if j > n {
        return Err(Error::Domain(format!("j={j} exceeds ground size {n}")));
    }
    // one hypergeometric value per set size, shared across members/pairs
    let mut table: Vec<BigRational> = Vec::with_capacity(n + 1);
    for q in 0..=n {
        table.push(hypergeom_exact(n, j, q));
    }
    let mut mean = BigRational::zero();
    for q in family.members() {
        mean += table[q.len()].clone();
    }
    let mut second = BigRational::zero();
    let members = family.members();
    for (a, qa) in members.iter().enumerate() {
        for (b, qb) in members.iter().enumerate() {
            let size = if a == b { qa.len() } else { union_size(qa, qb) };
            second += table[size].clone();
        }
    }
    let var = second - mean.clone() * mean.clone();
    Ok((mean, var))
}

pub fn conditional_moments_given_size(
    family: &IndicatorFamily,
    j: usize,
) -> Result<SizeConditional> {
    let (mean, var) = conditional_moments_exact(family, j)?;
    Ok(SizeConditional {
        j,
        cond_mean: rational_to_f64(&mean),
        cond_var: rational_to_f64(&var),
    })
}

fn union_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut size) = (0, 0, 0);
    while i < a.len() || j < b.len() {
        size += 1;
        if i == a.len() {
            j += 1;
        } else if j == b.len() {
            i += 1;
        } else {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
            }
        }
    }
    size
}

/// Oracle for the conditional moments: enumerate every j-subset directly.
/// Exact rational; exponential in N, so callers keep N small.
pub fn conditional_moments_by_enumeration(
    family: &IndicatorFamily,
    j: usize,
) -> Result<(BigRational, BigRational)> {
    let n = family.ground().size();
    if n > 20 {
        return Err(Error::SearchGuard("j-subset enumeration limited to N ≤ 20".into()));
    }
    let masks: Vec<u64> = family
        .members()
        .iter()
        .map(|q| q.iter().fold(0u64, |m, &i| m | (1u64 << i)))
        .collect();
    let mut count_subsets = 0u64;
    let mut sum_x = 0u64;
    let mut sum_x2 = 0u64;
    for s in 0u64..(1u64 << n) {
        if s.count_ones() as usize != j {
            continue;
        }
        count_subsets += 1;
        let x = masks.iter().filter(|&&q| s & q == q).count() as u64;
        sum_x += x;
        sum_x2 += x * x;
    }
    let c = BigRational::from_integer(count_subsets.into());
    let mean = BigRational::from_integer(sum_x.into()) / c.clone();
    let second = BigRational::from_integer(sum_x2.into()) / c;
    let var = second - mean.clone() * mean.clone();
    Ok((mean, var))
}

fn uniform_p_or_mean(family: &IndicatorFamily) -> (f64, bool) {
    match family.ground().uniform_p() {
        Some(p) => (p, true),
        None => {
            let probs = family.ground().probs();
            let mean = if probs.is_empty() {
                0.0
            } else {
                probs.iter().sum::<f64>() / probs.len() as f64
            };
            (mean, false)
        }
    }
}

/// Size-conditioning transfer: for uniform p, members of size ≥ 2,
/// ε ∈ (0,1] and (εμ)² ≥ 1{ε<1}·Λ,
/// Pr(X ≤ (1−ε)μ) ≥ c·Pr(|Γ_p| ≤ (1−ε)·Np) with c = 1/2 + 1{ε=1}/2.
///
/// On small uniform instances the conditional-moment contraction
/// (E_j X ≤ (1−ε)²μ and Var_j X ≤ (1−ε)²Λ for all j ≤ m) is verified and
/// reported as an extra condition.
pub fn rsize_transfer(family: &IndicatorFamily, eps: f64) -> Result<BoundResult> {
    let stats = family.compute_stats();
    let (p, uniform) = uniform_p_or_mean(family);
    let n = family.ground().size();
    let min_size_ok = family.min_member_size().is_none_or(|s| s >= 2);
    let eps_ok = 0.0 < eps && eps <= 1.0;
    let strict = eps < 1.0;
    let gate = (eps * stats.mu).powi(2) >= if strict { stats.lambda } else { 0.0 };
    let c: f64 = if eps == 1.0 { 1.0 } else { 0.5 };
    let m = (1.0 - eps) * n as f64 * p;
    let log_tail = log_binomial_cdf(n as u64, p, m);
    let mut conditions = vec![
        ("uniform_p", uniform),
        ("min_member_size_ge_2", min_size_ok),
        ("eps_in_(0,1]", eps_ok),
        ("eps_mu_sq_ge_lambda", gate),
    ];
    if uniform && n <= 16 && min_size_ok && eps_ok {
        conditions.push((
            "conditional_moment_contraction",
            verify_size_conditioning(family, eps)?,
        ));
    }
    Ok(BoundResult::new(
        Direction::LowerBoundOnTail,
        c.ln() + log_tail,
        conditions,
        &[
            ("c", c),
            ("binomial_threshold", m),
            ("log_binomial_tail", log_tail),
            ("mu", stats.mu),
            ("lambda", stats.lambda),
        ],
    ))
}

/// E_j X ≤ (1−ε)²μ and Var_j X ≤ (1−ε)²Λ for every j ≤ (1−ε)Np,
/// all comparisons exact rational.
pub fn verify_size_conditioning(family: &IndicatorFamily, eps: f64) -> Result<bool> {
    let p = family.ground().uniform_p().ok_or(Error::NonUniform)?;
    let n = family.ground().size();
    let (mu, _, lambda) = family.stats_exact();
    let shrink = {
        let r = BigRational::one() - rational_of(eps);
        r.clone() * r
    };
    let mean_cap = shrink.clone() * mu;
    let var_cap = shrink * lambda;
    let m = rational_of(1.0 - eps) * rational_of(p) * BigRational::from_integer(n.into());
    for j in 0..=n {
        if BigRational::from_integer(j.into()) > m {
            break;
        }
        let (mean, var) = conditional_moments_exact(family, j)?;
        if mean > mean_cap || var > var_cap {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sharper size-conditioning transfer with a slack parameter τ: for
/// members of size ≥ k, τ ≥ 1{k>1}·6ε and (εμ)² ≥ 4τ^{−2}Λ,
/// Pr(X ≤ (1−ε)μ) ≥ ½·Pr(|Γ_p| ≤ (1−(1+τ)ε/k)·Np).
pub fn rsize2_transfer(family: &IndicatorFamily, eps: f64, tau: f64) -> Result<BoundResult> {
    let stats = family.compute_stats();
    let (p, uniform) = uniform_p_or_mean(family);
    let n = family.ground().size();
    let k = family.min_member_size().unwrap_or(1).max(1);
    let eps_ok = 0.0 < eps && eps <= 1.0;
    let tau_ok = 0.0 < tau && tau <= 1.0;
    let tau_gate = tau >= if k > 1 { 6.0 * eps } else { 0.0 };
    let var_gate = (eps * stats.mu).powi(2) >= 4.0 / (tau * tau) * stats.lambda;
    let m = (1.0 - (1.0 + tau) * eps / k as f64) * n as f64 * p;
    let log_tail = log_binomial_cdf(n as u64, p, m);
    Ok(BoundResult::new(
        Direction::LowerBoundOnTail,
        0.5f64.ln() + log_tail,
        vec![
            ("uniform_p", uniform),
            ("eps_in_(0,1]", eps_ok),
            ("tau_in_(0,1]", tau_ok),
            ("tau_ge_6eps", tau_gate),
            ("eps_mu_sq_ge_4_lambda_over_tau_sq", var_gate),
        ],
        &[
            ("c", 0.5),
            ("k", k as f64),
            ("tau", tau),
            ("binomial_threshold", m),
            ("log_binomial_tail", log_tail),
        ],
    ))
}

/// A decomposition X = Σ_β I_β·X_β with X_β = Σ_α w_{α,β}·I_{Q(α)∖Q(β)}.
///
/// `x_parts[β]` lists (weight, full member set Q(α)); the set difference
/// Q(α)∖Q(β) is applied at evaluation time. κ is the symmetry defect
/// max_β E X_β / min_β E X_β − 1, computed in exact rational arithmetic
/// (∞ when some E X_β vanishes while another does not).
#[derive(Debug, Clone, Serialize)]
pub struct SymmetricDecomposition {
    pub y_family: IndicatorFamily,
    pub x_parts: Vec<Vec<(f64, Vec<u32>)>>,
    pub kappa: f64,
    #[serde(skip)]
    kappa_exact: Option<BigRational>,
}

impl SymmetricDecomposition {
    pub fn new(y_family: IndicatorFamily, x_parts: Vec<Vec<(f64, Vec<u32>)>>) -> Result<Self> {
        if x_parts.len() != y_family.len() {
            return Err(Error::Domain(format!(
                "{} part lists for {} Y-members",
                x_parts.len(),
                y_family.len()
            )));
        }
        let ground_len = y_family.ground().size();
        for parts in &x_parts {
            for (w, q) in parts {
                if *w < 0.0 || !w.is_finite() {
                    return Err(Error::Domain(format!("weight {w} must be ≥ 0")));
                }
                if let Some(&i) = q.iter().max() {
                    if i as usize >= ground_len {
                        return Err(Error::ElementIndex {
                            index: i as usize,
                            len: ground_len,
                        });
                    }
                }
            }
        }
        let mut dec = Self {
            y_family,
            x_parts,
            kappa: 0.0,
            kappa_exact: None,
        };
        dec.compute_kappa();
        Ok(dec)
    }

    /// E X_β = Σ_α w_{α,β} ∏_{i ∈ Q(α)∖Q(β)} p_i, exact.
    pub fn part_mean_exact(&self, beta: usize) -> BigRational {
        let probs = self.y_family.ground().probs();
        let q_beta = &self.y_family.members()[beta];
        let mut total = BigRational::zero();
        for (w, q_alpha) in &self.x_parts[beta] {
            let mut term = rational_of(*w);
            for &i in q_alpha {
                if q_beta.binary_search(&i).is_err() {
                    term *= rational_of(probs[i as usize]);
                }
            }
            total += term;
        }
        total
    }

    fn compute_kappa(&mut self) {
        if self.y_family.is_empty() {
            self.kappa = 0.0;
            self.kappa_exact = Some(BigRational::zero());
            return;
        }
        let means: Vec<BigRational> = (0..self.y_family.len())
            .map(|b| self.part_mean_exact(b))
            .collect();
        let max = means.iter().max().unwrap().clone();
        let min = means.iter().min().unwrap().clone();
        if min.is_zero() {
            if max.is_zero() {
                self.kappa = 0.0;
                self.kappa_exact = Some(BigRational::zero());
            } else {
                self.kappa = f64::INFINITY;
                self.kappa_exact = None;
            }
        } else {
            let k = max / min - BigRational::one();
            self.kappa = rational_to_f64(&k);
            self.kappa_exact = Some(k);
        }
    }

    pub fn kappa_exact(&self) -> Option<&BigRational> {
        self.kappa_exact.as_ref()
    }

    /// E X = Σ_β E I_β · E X_β, exact (the independence of I_β from
    /// I_{Q(α)∖Q(β)} is what the set-difference convention buys).
    pub fn mean_exact(&self) -> BigRational {
        let probs = self.y_family.ground().probs();
        let mut total = BigRational::zero();
        for (beta, q_beta) in self.y_family.members().iter().enumerate() {
            let mut e_beta = BigRational::one();
            for &i in q_beta {
                e_beta *= rational_of(probs[i as usize]);
            }
            total += e_beta * self.part_mean_exact(beta);
        }
        total
    }

    /// Evaluate Σ_β I_β X_β on one outcome (bitmask over the ground set).
    /// Weights in the tested instances are small dyadics, so the f64 sum
    /// is exact in the comparison range.
    pub fn evaluate(&self, outcome: u64) -> f64 {
        let mut total = 0.0;
        for (beta, q_beta) in self.y_family.members().iter().enumerate() {
            if !covered(outcome, q_beta) {
                continue;
            }
            for (w, q_alpha) in &self.x_parts[beta] {
                let diff_ok = q_alpha
                    .iter()
                    .filter(|i| q_beta.binary_search(i).is_err())
                    .all(|&i| outcome >> i & 1 == 1);
                if diff_ok {
                    total += w;
                }
            }
        }
        total
    }
}

fn covered(outcome: u64, q: &[u32]) -> bool {
    q.iter().all(|&i| outcome >> i & 1 == 1)
}

/// Check X = Σ_β I_β·X_β pointwise on every outcome of the shared ground
/// set against the target family's count.
pub fn verify_reconstruction(
    decomp: &SymmetricDecomposition,
    target: &IndicatorFamily,
) -> Result<bool> {
    if decomp.y_family.ground() != target.ground() {
        return Err(Error::Domain(
            "decomposition and target use different ground sets".into(),
        ));
    }
    let n = target.ground().size();
    if n > 26 {
        return Err(Error::EnumerationCap { n, cap: 26 });
    }
    let masks: Vec<u64> = target
        .members()
        .iter()
        .map(|q| q.iter().fold(0u64, |m, &i| m | (1u64 << i)))
        .collect();
    for outcome in 0u64..(1u64 << n) {
        let x = masks.iter().filter(|&&q| outcome & q == q).count() as f64;
        let recon = decomp.evaluate(outcome);
        if (recon - x).abs() > 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Symmetric-decomposition transfer: if γε ≥ 2κ and 1{E Y=0}·γε ≤ 2,
/// Pr(X ≤ (1−ε)μ) ≥ ½·γε·Pr(Y ≤ (1−(1+γ)ε)·E Y).
pub fn rcor_transfer(
    decomp: &SymmetricDecomposition,
    eps: f64,
    gamma: f64,
    truth: TailTruth,
) -> Result<BoundResult> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("rcor needs ε ∈ [0,1], got {eps}")));
    }
    if gamma < 0.0 {
        return Err(Error::Domain(format!("rcor needs γ ≥ 0, got {gamma}")));
    }
    let e_y = decomp.y_family.mean_exact();
    let ge_rat = rational_of(gamma) * rational_of(eps);
    let kappa_gate = match decomp.kappa_exact() {
        Some(k) => ge_rat >= BigRational::from_integer(2.into()) * k.clone(),
        None => false, // κ infinite
    };
    let zero_gate = if e_y.is_zero() {
        ge_rat <= BigRational::from_integer(2.into())
    } else {
        true
    };
    let threshold =
        (BigRational::one() - (BigRational::one() + rational_of(gamma)) * rational_of(eps))
            * e_y.clone();
    let log_tail = y_tail_log(&decomp.y_family, &threshold, truth)?;
    let ge = gamma * eps;
    // clamp at 0: when the gates fail, ½γε can exceed 1 and the formal
    // value would name a "probability" above one
    let log_value = if ge == 0.0 {
        f64::NEG_INFINITY
    } else {
        ((0.5 * ge).ln() + log_tail).min(0.0)
    };
    Ok(BoundResult::new(
        Direction::LowerBoundOnTail,
        log_value,
        vec![
            ("gamma_eps_ge_2kappa", kappa_gate),
            ("zero_mean_gamma_eps_le_2", zero_gate),
        ],
        &[
            ("c", 0.5),
            ("gamma", gamma),
            ("kappa", decomp.kappa),
            ("e_y", rational_to_f64(&e_y)),
            ("log_y_tail", log_tail),
        ],
    ))
}

/// Pr(X = 0) ≥ Pr(Y = 0): the zero-count comparison the decomposition
/// gives for free (X > 0 forces some I_β·X_β > 0, hence Y > 0).
pub fn rcor_zero_bound(decomp: &SymmetricDecomposition, truth: TailTruth) -> Result<BoundResult> {
    let log_tail = y_tail_log(&decomp.y_family, &BigRational::zero(), truth)?;
    Ok(BoundResult::new(
        Direction::LowerBoundOnTail,
        log_tail,
        vec![],
        &[("log_pr_y_zero", log_tail)],
    ))
}

fn y_tail_log(family: &IndicatorFamily, threshold: &BigRational, truth: TailTruth) -> Result<f64> {
    match truth {
        TailTruth::Exact => Ok(family.exact_distribution()?.prob_le(threshold).ln()),
        TailTruth::Mc { samples, seed } => {
            Ok(family.mc_tail_prob(threshold, samples, seed)?.point.ln())
        }
    }
}

/// Record of the conditional Harris correlation claim on one instance:
/// for increasing I₁, I₂ with Pr(I₁∩I₂) = Pr(I₁)Pr(I₂) and decreasing D,
/// Pr(I₁∩I₂ | D) ≤ Pr(I₁)·Pr(I₂ | D); the conditional product version
/// Pr(I₁|D)·Pr(I₂|D) on the right is NOT valid in general, and its status
/// is recorded separately.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationCheck {
    pub p_d: f64,
    pub p_i1: f64,
    pub p_i2: f64,
    pub p_i1_given_d: f64,
    pub p_i2_given_d: f64,
    pub p_joint_given_d: f64,
    /// Pr(I₁∩I₂) = Pr(I₁)·Pr(I₂), exactly.
    pub hypothesis_independent: bool,
    pub claim_holds: bool,
    /// the claim holds with exact equality
    pub claim_is_equality: bool,
    pub wrong_inequality_holds: bool,
}

/// Evaluate the claim exactly by rational enumeration over all outcomes.
/// `i1`/`i2` are element sets (the events {Q ⊆ Γ_p}); `d` is an arbitrary
/// outcome predicate, validated to be decreasing.
pub fn harris_conditional_check(
    ground: &GroundSet,
    i1: &[u32],
    i2: &[u32],
    d: &dyn Fn(u64) -> bool,
) -> Result<CorrelationCheck> {
    let n = ground.size();
    if n > 20 {
        return Err(Error::SearchGuard(
            "correlation check enumeration limited to N ≤ 20".into(),
        ));
    }
    for &i in i1.iter().chain(i2) {
        if i as usize >= n {
            return Err(Error::ElementIndex {
                index: i as usize,
                len: n,
            });
        }
    }
    // decreasing ⇔ the complement is closed under adding one element
    for s in 0u64..(1u64 << n) {
        if !d(s) {
            for i in 0..n {
                if s >> i & 1 == 0 && d(s | (1 << i)) {
                    return Err(Error::Domain(format!(
                        "event is not decreasing: accepts {:#b} but rejects a subset",
                        s | (1 << i)
                    )));
                }
            }
        }
    }

    let half = n / 2;
    let w_lo = rational_half_weights(&ground.probs()[..half]);
    let w_hi = rational_half_weights(&ground.probs()[half..]);
    let m1 = mask_of(i1);
    let m2 = mask_of(i2);

    let mut p_d = BigRational::zero();
    let mut p_i1 = BigRational::zero();
    let mut p_i2 = BigRational::zero();
    let mut p_i1_d = BigRational::zero();
    let mut p_i2_d = BigRational::zero();
    let mut p_joint = BigRational::zero();
    let mut p_joint_d = BigRational::zero();
    for s in 0u64..(1u64 << n) {
        let w = w_lo[(s & ((1 << half) - 1)) as usize].clone() * w_hi[(s >> half) as usize].clone();
        let in1 = s & m1 == m1;
        let in2 = s & m2 == m2;
        let in_d = d(s);
        if in_d {
            p_d += w.clone();
        }
        if in1 {
            p_i1 += w.clone();
        }
        if in2 {
            p_i2 += w.clone();
        }
        if in1 && in_d {
            p_i1_d += w.clone();
        }
        if in2 && in_d {
            p_i2_d += w.clone();
        }
        if in1 && in2 {
            p_joint += w.clone();
        }
        if in1 && in2 && in_d {
            p_joint_d += w.clone();
        }
    }
    if p_d.is_zero() {
        return Err(Error::Domain("conditioning event has probability 0".into()));
    }
    // claim: P(I₁∩I₂∩D) ≤ P(I₁)·P(I₂∩D); wrong form multiplies through by P(D)
    let claim_rhs = p_i1.clone() * p_i2_d.clone();
    let claim_holds = p_joint_d <= claim_rhs;
    let claim_is_equality = p_joint_d == claim_rhs;
    let wrong_holds = p_joint_d.clone() * p_d.clone() <= p_i1_d.clone() * p_i2_d.clone();
    let hypothesis = p_joint == p_i1.clone() * p_i2.clone();
    Ok(CorrelationCheck {
        p_d: rational_to_f64(&p_d),
        p_i1: rational_to_f64(&p_i1),
        p_i2: rational_to_f64(&p_i2),
        p_i1_given_d: rational_to_f64(&(p_i1_d.clone() / p_d.clone())),
        p_i2_given_d: rational_to_f64(&(p_i2_d / p_d.clone())),
        p_joint_given_d: rational_to_f64(&(p_joint_d / p_d)),
        hypothesis_independent: hypothesis,
        claim_holds,
        claim_is_equality,
        wrong_inequality_holds: wrong_holds,
    })
}

fn mask_of(q: &[u32]) -> u64 {
    q.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

fn rational_half_weights(probs: &[f64]) -> Vec<BigRational> {
    let mut w = vec![BigRational::one()];
    for &p in probs {
        let pr = rational_of(p);
        let qr = BigRational::one() - pr.clone();
        let mut next = vec![BigRational::zero(); w.len() * 2];
        for (m, base) in w.iter().enumerate() {
            next[m] = base.clone() * qr.clone();
            next[m | w.len()] = base.clone() * pr.clone();
        }
        w = next;
    }
    w
}

/// The counterexample events showing the conditional product inequality
/// fails: I₁ = {0 present}, I₂ = {1 present},
/// D = {at most one element present} ∪ {exactly {0,1} present}.
pub fn counterexample_check(n: usize, p: f64) -> Result<CorrelationCheck> {
    if n < 3 {
        return Err(Error::Domain("counterexample needs n ≥ 3".into()));
    }
    let ground = GroundSet::uniform(n, p)?;
    harris_conditional_check(&ground, &[0], &[1], &|s| s.count_ones() <= 1 || s == 0b11)
}

/// Vertex-symmetry transfer for subgraph counts: with every copy of G in
/// H induced and (ε·E X_H)² ≥ Λ(X_H),
/// Pr(X_H ≤ (1−ε)·E X_H) ≥ c·Pr(Y_G ≤ (1−λε)·E Y_G)
/// where Y_G counts G-copies inside the vertex block U, λ = 2^{v_H+3} and
/// log₂ c = −(4^{v_G²}+2). The constant is handled symbolically in log
/// space; a negative Y-threshold makes the bound vacuous (−∞).
#[allow(clippy::too_many_arguments)]
pub fn vxsym_transfer(
    h: &KGraph,
    g: &KGraph,
    n: usize,
    p: f64,
    eps: f64,
    u: &[usize],
    ell: usize,
    truth: TailTruth,
) -> Result<BoundResult> {
    if !(0.0 < eps && eps <= 1.0) {
        return Err(Error::Domain(format!("vxsym needs ε ∈ (0,1], got {eps}")));
    }
    let copies_gh = g.copies_in(h)?;
    if copies_gh.is_empty() {
        return Err(Error::Domain("G has no copies in H".into()));
    }
    if !g.all_copies_induced_in(h)? {
        return Err(Error::Domain(
            "every copy of G in H must be induced".into(),
        ));
    }
    let mut u_sorted = u.to_vec();
    u_sorted.sort_unstable();
    u_sorted.dedup();
    if u_sorted.len() != u.len() || u_sorted.iter().any(|&v| v >= n) {
        return Err(Error::Domain("U must be a subset of the host vertices".into()));
    }
    let u_size_ok = (u_sorted.len() as f64 - n as f64 / 2.0).abs() <= ell as f64;

    let x_inst = subgraph_family_capped(h, n, p, DEFAULT_COPY_CAP)?;
    let stats = x_inst.family.compute_stats();
    let var_gate = (eps * stats.mu).powi(2) >= stats.lambda;

    let v_h = h.vertex_count() as i32;
    let v_g = g.vertex_count() as f64;
    let lambda = 2f64.powi(v_h + 3);
    let log2_c = -(4f64.powf(v_g * v_g) + 2.0);
    let log_c = log2_c * std::f64::consts::LN_2;

    // Y_G lives on the complete k-graph over U, relabeled to 0..|U|.
    let y_inst = subgraph_family_capped(g, u_sorted.len(), p, DEFAULT_COPY_CAP)?;
    let e_y = y_inst.family.mean_exact();
    let threshold = (BigRational::one() - rational_of(lambda) * rational_of(eps)) * e_y.clone();
    let vacuous = threshold.is_negative();
    let log_tail = y_tail_log(&y_inst.family, &threshold, truth)?;

    Ok(BoundResult::new(
        Direction::LowerBoundOnTail,
        log_c + log_tail,
        vec![
            ("u_size_within_ell_of_half", u_size_ok),
            ("eps_ex_sq_ge_lambda", var_gate),
        ],
        &[
            ("lambda", lambda),
            ("log2_c", log2_c),
            ("e_y", rational_to_f64(&e_y)),
            ("log_y_tail", log_tail),
            ("vacuous", if vacuous { 1.0 } else { 0.0 }),
            ("mu", stats.mu),
            ("big_lambda", stats.lambda),
        ],
    ))
}

/// JSON wire format for decompositions: ground probabilities, Y members,
/// and a map β-index → [[weight, element list], …].
#[derive(Debug, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub ground_probs: Vec<f64>,
    pub y_members: Vec<Vec<u32>>,
    pub parts: BTreeMap<usize, Vec<(f64, Vec<u32>)>>,
}

impl DecompositionFile {
    pub fn from_decomposition(d: &SymmetricDecomposition) -> Self {
        Self {
            ground_probs: d.y_family.ground().probs().to_vec(),
            y_members: d.y_family.members().to_vec(),
            parts: d
                .x_parts
                .iter()
                .enumerate()
                .map(|(i, parts)| (i, parts.clone()))
                .collect(),
        }
    }

    pub fn into_decomposition(self) -> Result<SymmetricDecomposition> {
        let ground = GroundSet::new(self.ground_probs)?;
        let y_len = self.y_members.len();
        let y_family = IndicatorFamily::new(ground, self.y_members)?;
        let mut x_parts = vec![Vec::new(); y_len];
        for (beta, parts) in self.parts {
            if beta >= y_len {
                return Err(Error::MemberIndex {
                    index: beta,
                    len: y_len,
                });
            }
            x_parts[beta] = parts;
        }
        SymmetricDecomposition::new(y_family, x_parts)
    }
}
