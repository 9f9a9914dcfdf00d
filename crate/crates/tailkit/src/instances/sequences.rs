//! Additive-combinatorics instances over random subsets of {1,…,n}:
//! arithmetic progressions of a given length and Schur triples, each with
//! the endpoint/role-weighted symmetric decomposition that feeds the
//! conditioning transfer.
//!
//! Ground element i represents the integer i+1.

use num_rational::Rational64;

use crate::bootstrap::SymmetricDecomposition;
use crate::error::{Error, Result};
use crate::family::{GroundSet, IndicatorFamily};

/// Arithmetic progressions {b, b+d, …, b+(k−1)d} ⊆ [n] with d ≥ 1.
///
/// The decomposition splits each progression between its two endpoints
/// with weight 1/2, so Y is the sum of the n singleton indicators and
/// X = Σ_β I_β X_β pointwise.
pub fn ap_family(k_len: usize, n: usize, p: f64) -> Result<(IndicatorFamily, SymmetricDecomposition)> {
    if k_len < 2 {
        return Err(Error::Domain(format!(
            "progression length {k_len} must be ≥ 2"
        )));
    }
    let ground = GroundSet::uniform(n, p)?;
    let mut members: Vec<Vec<u32>> = Vec::new();
    // x_parts indexed by β = endpoint value − 1
    let mut x_parts: Vec<Vec<(f64, Vec<u32>)>> = vec![Vec::new(); n];
    for b in 1..=n {
        for d in 1.. {
            let last = b + (k_len - 1) * d;
            if last > n {
                break;
            }
            let q: Vec<u32> = (0..k_len).map(|i| (b + i * d - 1) as u32).collect();
            members.push(q.clone());
            x_parts[b - 1].push((0.5, q.clone()));
            x_parts[last - 1].push((0.5, q));
        }
    }
    let family = IndicatorFamily::new(ground.clone(), members)?;
    let singletons: Vec<Vec<u32>> = (0..n as u32).map(|i| vec![i]).collect();
    let y_family = IndicatorFamily::new(ground, singletons)?;
    let decomposition = SymmetricDecomposition::new(y_family, x_parts)?;
    Ok((family, decomposition))
}

/// Number of k-term progressions in [n] (the family size, without p).
pub fn ap_count(k_len: usize, n: usize) -> u64 {
    if k_len < 2 || n < k_len {
        return 0;
    }
    let mut total = 0u64;
    let mut d = 1;
    while (k_len - 1) * d < n {
        total += (n - (k_len - 1) * d) as u64;
        d += 1;
    }
    total
}

/// Endpoint count of β ∈ [n]: progressions starting or ending at β. The
/// part means are this count times p^{k−1}/2, so the symmetry defect κ is
/// a ratio of these integers.
pub fn ap_endpoint_count(k_len: usize, n: usize, beta: usize) -> u64 {
    let step = k_len - 1;
    ((n - beta) / step + (beta - 1) / step) as u64
}

/// Exact κ for the AP decomposition, as a ratio of endpoint counts.
pub fn ap_kappa(k_len: usize, n: usize) -> Option<Rational64> {
    let counts: Vec<u64> = (1..=n).map(|b| ap_endpoint_count(k_len, n, b)).collect();
    let max = *counts.iter().max()?;
    let min = *counts.iter().min()?;
    if min == 0 {
        return None;
    }
    Some(Rational64::new(max as i64, min as i64) - Rational64::new(1, 1))
}

/// Schur triples {x, y, x+y} ⊆ [n] with 1 ≤ x < y.
///
/// The decomposition assigns each triple weight 1/2 at its sum element and
/// 1/4 at each summand, so the three roles add to 1 and X = Σ_β I_β X_β.
pub fn schur_family(n: usize, p: f64) -> Result<(IndicatorFamily, SymmetricDecomposition)> {
    let ground = GroundSet::uniform(n, p)?;
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut x_parts: Vec<Vec<(f64, Vec<u32>)>> = vec![Vec::new(); n];
    for x in 1..=n {
        for y in x + 1..=n {
            let s = x + y;
            if s > n {
                break;
            }
            let q: Vec<u32> = vec![(x - 1) as u32, (y - 1) as u32, (s - 1) as u32];
            members.push(q.clone());
            x_parts[x - 1].push((0.25, q.clone()));
            x_parts[y - 1].push((0.25, q.clone()));
            x_parts[s - 1].push((0.5, q));
        }
    }
    let family = IndicatorFamily::new(ground.clone(), members)?;
    let singletons: Vec<Vec<u32>> = (0..n as u32).map(|i| vec![i]).collect();
    let y_family = IndicatorFamily::new(ground, singletons)?;
    let decomposition = SymmetricDecomposition::new(y_family, x_parts)?;
    Ok((family, decomposition))
}

/// Part mean of β in quarter units (4·Σ w over triples containing β); the
/// actual mean is quarters·p²/4.
pub fn schur_quarters(n: usize, beta: usize) -> u64 {
    // as sum: pairs x < y with x + y = β; as small/large summand: partners
    let as_sum = ((beta - 1) / 2) as u64;
    let as_small = (n as i64 - 2 * beta as i64).max(0) as u64;
    let as_large = (n - beta).min(beta - 1) as u64;
    2 * as_sum + as_small + as_large
}

/// Exact κ for the Schur decomposition.
pub fn schur_kappa(n: usize) -> Option<Rational64> {
    let counts: Vec<u64> = (1..=n).map(|b| schur_quarters(n, b)).collect();
    let max = *counts.iter().max()?;
    let min = *counts.iter().min()?;
    if min == 0 {
        return None;
    }
    Some(Rational64::new(max as i64, min as i64) - Rational64::new(1, 1))
}
