//! Numeric plumbing shared across the crate: compensated summation,
//! log-space tail sums and exact-rational mirrors of f64 quantities.
//!
//! Every finite f64 is a dyadic rational, so converting probabilities to
//! `BigRational` is lossless; the exact mirrors are used wherever a sharp
//! threshold or gate comparison must not be decided by rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Kahan compensated accumulator. Keeps the error of a long f64 sum near
/// one ulp of the total instead of growing with the term count.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// log(Σ exp(x_i)) without overflow/underflow; −∞ for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = KahanSum::new();
    for &x in xs {
        acc.add((x - m).exp());
    }
    m + acc.value().ln()
}

/// Table of ln(j!) for j = 0..=n, built with compensated summation.
pub fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = KahanSum::new();
    table.push(0.0);
    for j in 1..=n {
        acc.add((j as f64).ln());
        table.push(acc.value());
    }
    table
}

/// log Pr(Bin(n, p) ≤ m) by direct log-space summation of the CDF.
///
/// The threshold `m` may be fractional; the sum runs over integers
/// j ≤ m (with a 1e−12 relative slack on the comparison so that dyadic
/// thresholds that land exactly on a lattice point are kept inclusive).
pub fn log_binomial_cdf(n: u64, p: f64, m: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "p outside [0,1]");
    if m < 0.0 {
        return f64::NEG_INFINITY;
    }
    let j_max_f = (m + 1e-12 * m.abs().max(1.0)).floor();
    if j_max_f >= n as f64 {
        return 0.0;
    }
    let j_max = j_max_f as u64;
    if p == 0.0 {
        return 0.0; // mass entirely at 0 ≤ m
    }
    if p == 1.0 {
        // mass entirely at n, and j_max < n here
        return f64::NEG_INFINITY;
    }
    let lp = p.ln();
    let lq = (-p).ln_1p();
    let lfact = ln_factorial_table(n as usize);
    let terms: Vec<f64> = (0..=j_max)
        .map(|j| {
            let ln_choose = lfact[n as usize] - lfact[j as usize] - lfact[(n - j) as usize];
            ln_choose + j as f64 * lp + (n - j) as f64 * lq
        })
        .collect();
    log_sum_exp(&terms)
}

/// Exact rational mirror of an f64 (every finite f64 is dyadic).
pub fn rational_of(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite f64")
}

pub fn rational_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact C(n, k) as a BigInt (0 when k > n).
pub fn big_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// C(n, k) as u64; panics on overflow (callers guard sizes).
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    big_binomial(n, k).to_u64().expect("binomial fits u64")
}

/// Rounds a rational down to the largest integer ≤ x.
pub fn rational_floor_i64(x: &BigRational) -> Option<i64> {
    x.floor().to_integer().to_i64()
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    /// Exact CDF oracle: Σ_{j≤m} C(n,j) p^j (1−p)^{n−j} in BigRational.
    fn binomial_cdf_exact(n: u64, p: f64, m: u64) -> BigRational {
        let pr = rational_of(p);
        let qr = BigRational::one() - pr.clone();
        let mut total = BigRational::zero();
        for j in 0..=m.min(n) {
            let mut term = BigRational::from(big_binomial(n, j));
            for _ in 0..j {
                term *= pr.clone();
            }
            for _ in 0..(n - j) {
                term *= qr.clone();
            }
            total += term;
        }
        total
    }

    #[test]
    fn log_cdf_matches_rational_oracle() {
        for &(n, p) in &[(10u64, 0.3f64), (25, 0.5), (30, 0.125), (12, 0.9)] {
            for m in 0..=n {
                let got = log_binomial_cdf(n, p, m as f64);
                let want = rational_to_f64(&binomial_cdf_exact(n, p, m)).ln();
                assert!(
                    (got - want).abs() < 1e-11,
                    "n={n} p={p} m={m}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn log_cdf_edges() {
        assert_eq!(log_binomial_cdf(10, 0.5, -0.5), f64::NEG_INFINITY);
        assert_eq!(log_binomial_cdf(10, 0.5, 10.0), 0.0);
        assert_eq!(log_binomial_cdf(10, 0.0, 0.0), 0.0);
        assert_eq!(log_binomial_cdf(10, 1.0, 9.0), f64::NEG_INFINITY);
        // threshold exactly on a lattice point stays inclusive
        let at_lattice = log_binomial_cdf(10, 0.5, 5.0);
        let below = log_binomial_cdf(10, 0.5, 4.999);
        assert!(at_lattice > below);
    }

    #[test]
    fn kahan_beats_naive_on_long_sums() {
        let n = 10_000_000usize;
        let x = 0.1f64;
        let mut k = KahanSum::new();
        for _ in 0..n {
            k.add(x);
        }
        let exact = BigRational::from_usize(n).unwrap() * rational_of(x);
        let err = (k.value() - rational_to_f64(&exact)).abs();
        assert!(err < 1e-9, "kahan error {err}");
    }

    #[test]
    fn rational_of_roundtrips() {
        for &x in &[0.1, 0.3, 0.5, 1.0, 0.0, 2f64.powi(-15)] {
            assert_eq!(rational_to_f64(&rational_of(x)), x);
        }
    }
}
