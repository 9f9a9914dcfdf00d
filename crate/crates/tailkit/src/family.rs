//! Families of indicator variables over binomial random subsets.
//!
//! The probability space is a random subset of a ground set {0,…,N−1} where
//! element i is included independently with probability p_i. A family is a
//! list of member sets Q(α); the indicator I_α fires when Q(α) is entirely
//! included, and X = Σ_α I_α counts the members that fire. This module holds
//! the ground-truth machinery for X: dependency statistics, exact
//! distribution by enumeration of all 2^N outcomes, Laplace transform, and
//! seeded Monte Carlo estimation of the lower tail Pr(X ≤ (1−ε)·E X).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{rational_floor_i64, rational_of, KahanSum};

/// Default cap on the ground-set size for 2^N enumeration (~6.7e7 outcomes).
pub const DEFAULT_ENUMERATION_CAP: usize = 26;

/// Hard ceiling: enumeration masks are kept in a single u64 word and the
/// outcome count must stay addressable.
const ENUMERATION_HARD_LIMIT: usize = 30;

const MC_CHUNK: u64 = 8192;

/// z for a two-sided 95% interval.
const WILSON_Z: f64 = 1.959963984540054;

/// Ground set with per-element inclusion probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundSet {
    probs: Vec<f64>,
}

impl GroundSet {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for &p in &probs {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(Error::InvalidProbability { value: p });
            }
        }
        Ok(Self { probs })
    }

    /// N elements, all with the same inclusion probability.
    pub fn uniform(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// The single probability if the vector is uniform.
    pub fn uniform_p(&self) -> Option<f64> {
        let first = *self.probs.first()?;
        self.probs.iter().all(|&p| p == first).then_some(first)
    }
}

/// Dependency statistics of X = Σ I_α.
///
/// `lambda` is μ plus the sum of E(I_α I_β) over *ordered* pairs with
/// Q(α) ∩ Q(β) ≠ ∅ and α ≠ β, so each overlapping unordered pair
/// contributes twice. `delta` = Λ/μ − 1 is `None` when μ = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyStats {
    pub mu: f64,
    pub pi: f64,
    pub lambda: f64,
    pub delta: Option<f64>,
    pub n_members: usize,
    pub ordered_overlap_pairs: u64,
}

impl FamilyStats {
    /// δ treated as 0 where undefined (only possible when μ = 0, in which
    /// case every bound degenerates anyway).
    pub fn delta_or_zero(&self) -> f64 {
        self.delta.unwrap_or(0.0)
    }
}

/// Full distribution of X from 2^N enumeration. Support values with zero
/// probability are dropped.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub support: Vec<u64>,
    pub pmf: Vec<f64>,
    pub source_size: usize,
}

impl ExactDistribution {
    pub fn total_mass(&self) -> f64 {
        let mut acc = KahanSum::new();
        for &p in &self.pmf {
            acc.add(p);
        }
        acc.value()
    }

    pub fn mean(&self) -> f64 {
        let mut acc = KahanSum::new();
        for (&v, &p) in self.support.iter().zip(&self.pmf) {
            acc.add(v as f64 * p);
        }
        acc.value()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let mut acc = KahanSum::new();
        for (&v, &p) in self.support.iter().zip(&self.pmf) {
            let d = v as f64 - m;
            acc.add(d * d * p);
        }
        acc.value()
    }

    /// Pr(X ≤ t) with an exact rational threshold.
    pub fn prob_le(&self, t: &BigRational) -> f64 {
        match rational_floor_i64(t) {
            Some(floor) if floor >= 0 => self.prob_le_int(floor as u64),
            _ => {
                if t >= &BigRational::zero() {
                    self.prob_le_int(u64::MAX)
                } else {
                    0.0
                }
            }
        }
    }

    /// Pr(X < t) with an exact rational threshold.
    pub fn prob_lt(&self, t: &BigRational) -> f64 {
        if t <= &BigRational::zero() {
            return 0.0;
        }
        let floor = rational_floor_i64(t).unwrap_or(i64::MAX);
        let cut = if t.is_integer() { floor - 1 } else { floor };
        if cut < 0 {
            0.0
        } else {
            self.prob_le_int(cut as u64)
        }
    }

    fn prob_le_int(&self, v: u64) -> f64 {
        let mut acc = KahanSum::new();
        for (&s, &p) in self.support.iter().zip(&self.pmf) {
            if s <= v {
                acc.add(p);
            }
        }
        acc.value()
    }

    /// E e^{−sX} from the pmf.
    pub fn laplace(&self, s: f64) -> f64 {
        let mut acc = KahanSum::new();
        for (&v, &p) in self.support.iter().zip(&self.pmf) {
            acc.add(p * (-s * v as f64).exp());
        }
        acc.value()
    }

    /// E(e^{−sX} · 1{X < t}) with exact rational threshold.
    pub fn laplace_below(&self, s: f64, t: &BigRational) -> f64 {
        let mut acc = KahanSum::new();
        for (&v, &p) in self.support.iter().zip(&self.pmf) {
            if &BigRational::from_integer(v.into()) < t {
                acc.add(p * (-s * v as f64).exp());
            }
        }
        acc.value()
    }
}

/// Monte Carlo estimate of a probability with a Wilson-score 95% interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// One Wilson sigma: the 95% half-width rescaled by z.
    pub fn sigma(&self) -> f64 {
        (self.ci_high - self.ci_low) / (2.0 * WILSON_Z)
    }
}

fn wilson_interval(hits: u64, n: u64) -> (f64, f64) {
    let z = WILSON_Z;
    let nf = n as f64;
    let phat = hits as f64 / nf;
    let denom = 1.0 + z * z / nf;
    let center = (phat + z * z / (2.0 * nf)) / denom;
    let half = z * (phat * (1.0 - phat) / nf + z * z / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// A family of member sets Q(α) over a shared ground set.
///
/// Members may repeat: two positions with equal Q(α) are distinct summands
/// and count as a dependent pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorFamily {
    ground: GroundSet,
    members: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
}

impl IndicatorFamily {
    pub fn new(ground: GroundSet, members: Vec<Vec<u32>>) -> Result<Self> {
        let n = ground.size();
        let mut members = members;
        for q in &mut members {
            q.sort_unstable();
            q.dedup();
            if let Some(&i) = q.last() {
                if i as usize >= n {
                    return Err(Error::ElementIndex {
                        index: i as usize,
                        len: n,
                    });
                }
            }
        }
        Ok(Self {
            ground,
            members,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Smallest member size, if the family is nonempty.
    pub fn min_member_size(&self) -> Option<usize> {
        self.members.iter().map(Vec::len).min()
    }

    /// E I_α = ∏_{i ∈ Q(α)} p_i (1 for an empty member).
    pub fn expect_indicator(&self, alpha: usize) -> Result<f64> {
        let q = self.members.get(alpha).ok_or(Error::MemberIndex {
            index: alpha,
            len: self.members.len(),
        })?;
        Ok(q.iter().map(|&i| self.ground.probs[i as usize]).product())
    }

    fn expect_indicator_exact(&self, alpha: usize) -> BigRational {
        self.members[alpha]
            .iter()
            .map(|&i| rational_of(self.ground.probs[i as usize]))
            .fold(BigRational::one(), |a, b| a * b)
    }

    /// Exact rational μ = Σ_α ∏_{i∈Q(α)} p_i.
    pub fn mean_exact(&self) -> BigRational {
        let mut mu = BigRational::zero();
        for alpha in 0..self.members.len() {
            mu += self.expect_indicator_exact(alpha);
        }
        mu
    }

    /// Exact rational threshold (1−ε)·μ for tail comparisons.
    pub fn lower_tail_threshold(&self, eps: f64) -> BigRational {
        (BigRational::one() - rational_of(eps)) * self.mean_exact()
    }

    /// μ, Π, Λ and δ. Overlapping pairs are located by bucketing members on
    /// each ground element and attributing each unordered pair to the
    /// smallest shared element, so sparse overlap structures stay cheap.
    pub fn compute_stats(&self) -> FamilyStats {
        let probs = self.ground.probs();
        let mut mu_acc = KahanSum::new();
        let mut pi = 0.0f64;
        for q in &self.members {
            let e: f64 = q.iter().map(|&i| probs[i as usize]).product();
            mu_acc.add(e);
            pi = pi.max(e);
        }
        let mu = mu_acc.value();

        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); self.ground.size()];
        for (idx, q) in self.members.iter().enumerate() {
            for &i in q {
                buckets[i as usize].push(idx as u32);
            }
        }
        let mut overlap_acc = KahanSum::new();
        let mut unordered_pairs: u64 = 0;
        for (elem, bucket) in buckets.iter().enumerate() {
            for ai in 0..bucket.len() {
                for bi in ai + 1..bucket.len() {
                    let a = &self.members[bucket[ai] as usize];
                    let b = &self.members[bucket[bi] as usize];
                    if min_intersection(a, b) == Some(elem as u32) {
                        unordered_pairs += 1;
                        overlap_acc.add(union_product(a, b, probs));
                    }
                }
            }
        }
        let lambda = mu + 2.0 * overlap_acc.value();
        let delta = (mu > 0.0).then(|| lambda / mu - 1.0);
        FamilyStats {
            mu,
            pi,
            lambda,
            delta,
            n_members: self.members.len(),
            ordered_overlap_pairs: 2 * unordered_pairs,
        }
    }

    /// Exact rational (μ, Π, Λ). Quadratic in the member count; intended for
    /// the small instances where gate comparisons must be sharp.
    pub fn stats_exact(&self) -> (BigRational, BigRational, BigRational) {
        let m = self.members.len();
        let mut mu = BigRational::zero();
        let mut pi = BigRational::zero();
        for alpha in 0..m {
            let e = self.expect_indicator_exact(alpha);
            if e > pi {
                pi = e.clone();
            }
            mu += e;
        }
        let mut lambda = mu.clone();
        for a in 0..m {
            for b in a + 1..m {
                let qa = &self.members[a];
                let qb = &self.members[b];
                if min_intersection(qa, qb).is_some() {
                    let mut e = BigRational::one();
                    for &i in union_elems(qa, qb).iter() {
                        e *= rational_of(self.ground.probs[i as usize]);
                    }
                    lambda += BigRational::from_integer(2.into()) * e;
                }
            }
        }
        (mu, pi, lambda)
    }

    /// Full pmf of X by enumerating all 2^N outcomes.
    pub fn exact_distribution(&self) -> Result<ExactDistribution> {
        self.exact_distribution_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn exact_distribution_capped(&self, cap: usize) -> Result<ExactDistribution> {
        let n = self.ground.size();
        let cap = cap.min(ENUMERATION_HARD_LIMIT);
        if n > cap {
            return Err(Error::EnumerationCap { n, cap });
        }
        let probs = self.ground.probs();
        let masks: Vec<u64> = self
            .members
            .iter()
            .map(|q| q.iter().fold(0u64, |m, &i| m | (1u64 << i)))
            .collect();

        // Outcome weights via two half tables: weight(S) = w_lo[S_lo]·w_hi[S_hi].
        let lo_bits = n / 2;
        let hi_bits = n - lo_bits;
        let w_lo = half_weights(&probs[..lo_bits]);
        let w_hi = half_weights(&probs[lo_bits..]);
        let lo_mask = (1u64 << lo_bits) - 1;

        let mut buckets = vec![KahanSum::new(); self.members.len() + 1];
        for s in 0u64..(1u64 << hi_bits) {
            let wh = w_hi[s as usize];
            if wh == 0.0 {
                continue;
            }
            for t in 0u64..(1u64 << lo_bits) {
                let w = wh * w_lo[t as usize];
                if w == 0.0 {
                    continue;
                }
                let outcome = (s << lo_bits) | (t & lo_mask);
                let count = masks.iter().filter(|&&q| outcome & q == q).count();
                buckets[count].add(w);
            }
        }
        let mut support = Vec::new();
        let mut pmf = Vec::new();
        for (v, acc) in buckets.iter().enumerate() {
            let p = acc.value();
            if p > 0.0 {
                support.push(v as u64);
                pmf.push(p);
            }
        }
        Ok(ExactDistribution {
            support,
            pmf,
            source_size: n,
        })
    }

    /// Exact Pr(X ≤ (1−ε)·μ); the threshold comparison is exact rational.
    pub fn exact_lower_tail(&self, eps: f64) -> Result<f64> {
        let dist = self.exact_distribution()?;
        Ok(dist.prob_le(&self.lower_tail_threshold(eps)))
    }

    /// Exact strict tail Pr(X < (1−ε)·μ).
    pub fn exact_lower_tail_strict(&self, eps: f64) -> Result<f64> {
        let dist = self.exact_distribution()?;
        Ok(dist.prob_lt(&self.lower_tail_threshold(eps)))
    }

    /// Exact E e^{−sX} for s ≥ 0.
    pub fn exact_laplace(&self, s: f64) -> Result<f64> {
        if s < 0.0 {
            return Err(Error::Domain(format!("laplace needs s ≥ 0, got {s}")));
        }
        Ok(self.exact_distribution()?.laplace(s))
    }

    /// Exact Var X from the pmf.
    pub fn exact_variance(&self) -> Result<f64> {
        Ok(self.exact_distribution()?.variance())
    }

    /// Count of members fully contained in the outcome described by
    /// `included` (one bit per ground element, little-endian blocks).
    fn count_in_blocks(&self, included: &[u64]) -> u64 {
        self.members
            .iter()
            .filter(|q| {
                q.iter()
                    .all(|&i| included[i as usize / 64] >> (i % 64) & 1 == 1)
            })
            .count() as u64
    }

    /// Monte Carlo estimate of Pr(X ≤ (1−ε)·μ).
    pub fn mc_lower_tail(&self, eps: f64, samples: u64, seed: u64) -> Result<McEstimate> {
        let threshold = self.lower_tail_threshold(eps);
        self.mc_tail_prob(&threshold, samples, seed)
    }

    /// Monte Carlo estimate of Pr(X ≤ t) for an arbitrary rational threshold.
    ///
    /// Sampling is deterministic in (seed, samples): the sample index space
    /// is split into fixed chunks, each drawn from its own ChaCha stream, so
    /// results do not depend on the number of worker threads.
    pub fn mc_tail_prob(
        &self,
        threshold: &BigRational,
        samples: u64,
        seed: u64,
    ) -> Result<McEstimate> {
        if samples == 0 {
            return Err(Error::Domain("mc requires samples ≥ 1".into()));
        }
        let cut: i64 = rational_floor_i64(threshold).unwrap_or(i64::MAX);
        let n_chunks = samples.div_ceil(MC_CHUNK);
        let hits: u64 = (0..n_chunks)
            .into_par_iter()
            .map(|chunk| {
                let lo = chunk * MC_CHUNK;
                let hi = (lo + MC_CHUNK).min(samples);
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                rng.set_stream(chunk + 1);
                let mut included = vec![0u64; self.ground.size().div_ceil(64).max(1)];
                let mut local = 0u64;
                for _ in lo..hi {
                    included.fill(0);
                    for (i, &p) in self.ground.probs().iter().enumerate() {
                        if rng.random::<f64>() < p {
                            included[i / 64] |= 1u64 << (i % 64);
                        }
                    }
                    let x = self.count_in_blocks(&included) as i64;
                    if x <= cut {
                        local += 1;
                    }
                }
                local
            })
            .sum();
        let (ci_low, ci_high) = wilson_interval(hits, samples);
        Ok(McEstimate {
            point: hits as f64 / samples as f64,
            ci_low,
            ci_high,
            samples,
            seed,
        })
    }

    /// Parse the text family format: first token N, then N probabilities,
    /// then one member per line as space-separated element indices.
    /// `#` starts a comment; blank lines are skipped.
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        let mut tokens: Vec<(usize, &str)> = Vec::new();
        let mut member_lines: Vec<(usize, Vec<&str>)> = Vec::new();
        let mut header_done = false;
        let mut need = usize::MAX;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if !header_done {
                for tok in line.split_whitespace() {
                    tokens.push((lineno + 1, tok));
                }
                if need == usize::MAX && !tokens.is_empty() {
                    need = 1 + tokens[0].1.parse::<usize>().map_err(|_| Error::Parse {
                        path: path.into(),
                        line: tokens[0].0,
                        msg: format!("expected ground-set size, got {:?}", tokens[0].1),
                    })?;
                }
                if tokens.len() >= need {
                    header_done = true;
                    if tokens.len() > need {
                        return Err(Error::Parse {
                            path: path.into(),
                            line: lineno + 1,
                            msg: "unexpected extra tokens after probabilities".into(),
                        });
                    }
                }
            } else {
                member_lines.push((lineno + 1, line.split_whitespace().collect()));
            }
        }
        if !header_done {
            return Err(Error::Parse {
                path: path.into(),
                line: 1,
                msg: "missing header (size and probabilities)".into(),
            });
        }
        let n: usize = tokens[0].1.parse().unwrap();
        let mut probs = Vec::with_capacity(n);
        for &(line, tok) in &tokens[1..] {
            let p: f64 = tok.parse().map_err(|_| Error::Parse {
                path: path.into(),
                line,
                msg: format!("bad probability {tok:?}"),
            })?;
            probs.push(p);
        }
        let mut members = Vec::with_capacity(member_lines.len());
        for (line, toks) in member_lines {
            let mut q = Vec::with_capacity(toks.len());
            for tok in toks {
                let i: u32 = tok.parse().map_err(|_| Error::Parse {
                    path: path.into(),
                    line,
                    msg: format!("bad element index {tok:?}"),
                })?;
                q.push(i);
            }
            members.push(q);
        }
        Self::new(GroundSet::new(probs)?, members)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Render in the same text format `parse` accepts.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.ground.size());
        let probs: Vec<String> = self.ground.probs().iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "{}", probs.join(" "));
        for q in &self.members {
            let elems: Vec<String> = q.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(out, "{}", elems.join(" "));
        }
        out
    }

    /// Pr(X = 0) lower bound ingredients: (1 − E I_α) per member in log space.
    pub fn log_harris_product(&self) -> f64 {
        let mut acc = KahanSum::new();
        for q in &self.members {
            let e: f64 = q.iter().map(|&i| self.ground.probs[i as usize]).product();
            if e >= 1.0 {
                return f64::NEG_INFINITY;
            }
            acc.add((-e).ln_1p());
        }
        acc.value()
    }
}

/// Weight table over all subsets of a probability slice: entry m is the
/// product of p_i for set bits and (1−p_i) otherwise. Built by doubling,
/// with no divisions, so p_i ∈ {0,1} stays exact.
fn half_weights(probs: &[f64]) -> Vec<f64> {
    let mut w = vec![1.0f64];
    for &p in probs {
        let mut next = vec![0.0f64; w.len() * 2];
        for (m, &base) in w.iter().enumerate() {
            next[m] = base * (1.0 - p);
            next[m | w.len()] = base * p;
        }
        w = next;
    }
    w
}

fn min_intersection(a: &[u32], b: &[u32]) -> Option<u32> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return Some(a[i]),
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    None
}

fn union_elems(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable();
    out.dedup();
    out
}

fn union_product(a: &[u32], b: &[u32], probs: &[f64]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut prod = 1.0;
    while i < a.len() || j < b.len() {
        let next = if i == a.len() {
            let v = b[j];
            j += 1;
            v
        } else if j == b.len() {
            let v = a[i];
            i += 1;
            v
        } else {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Equal => {
                    let v = a[i];
                    i += 1;
                    j += 1;
                    v
                }
                std::cmp::Ordering::Less => {
                    let v = a[i];
                    i += 1;
                    v
                }
                std::cmp::Ordering::Greater => {
                    let v = b[j];
                    j += 1;
                    v
                }
            }
        };
        prod *= probs[next as usize];
    }
    prod
}

/// Convenience: the three-element family with Q(a) = {0,1}, Q(b) = {1,2}
/// at p = 1/2 used throughout the tests as a hand-checkable instance.
pub fn overlapping_pair_example() -> IndicatorFamily {
    IndicatorFamily::new(
        GroundSet::uniform(3, 0.5).unwrap(),
        vec![vec![0, 1], vec![1, 2]],
    )
    .unwrap()
}

/// JSON-facing summary of a family (size, member count, stats).
#[derive(Debug, Serialize)]
pub struct FamilySummary {
    pub ground_size: usize,
    pub n_members: usize,
    pub member_sizes: BTreeMap<usize, usize>,
    pub stats: FamilyStats,
}

pub fn summarize(family: &IndicatorFamily) -> FamilySummary {
    let mut member_sizes = BTreeMap::new();
    for q in family.members() {
        *member_sizes.entry(q.len()).or_insert(0) += 1;
    }
    FamilySummary {
        ground_size: family.ground().size(),
        n_members: family.len(),
        member_sizes,
        stats: family.compute_stats(),
    }
}

/// Exact mean check used by tests: E X recomputed from the pmf must match
/// the stats μ to 1e−10 relative.
pub fn mean_consistent(dist: &ExactDistribution, mu: f64) -> bool {
    let m = dist.mean();
    (m - mu).abs() <= 1e-10 * mu.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial_family(n: usize, p: f64) -> IndicatorFamily {
        IndicatorFamily::new(
            GroundSet::uniform(n, p).unwrap(),
            (0..n as u32).map(|i| vec![i]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn expect_indicator_examples() {
        let fam = IndicatorFamily::new(
            GroundSet::uniform(3, 0.5).unwrap(),
            vec![vec![0, 1], vec![], vec![0]],
        )
        .unwrap();
        assert_eq!(fam.expect_indicator(0).unwrap(), 0.25);
        assert_eq!(fam.expect_indicator(1).unwrap(), 1.0);
        let zero = IndicatorFamily::new(GroundSet::new(vec![0.0]).unwrap(), vec![vec![0]]).unwrap();
        assert_eq!(zero.expect_indicator(0).unwrap(), 0.0);
        assert!(matches!(
            fam.expect_indicator(3),
            Err(Error::MemberIndex { index: 3, len: 3 })
        ));
    }

    #[test]
    fn stats_overlapping_pair() {
        let fam = overlapping_pair_example();
        let s = fam.compute_stats();
        assert!((s.mu - 0.5).abs() < 1e-15);
        assert!((s.pi - 0.25).abs() < 1e-15);
        assert!((s.lambda - 0.75).abs() < 1e-15, "lambda={}", s.lambda);
        assert!((s.delta.unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(s.ordered_overlap_pairs, 2);
    }

    #[test]
    fn stats_disjoint_singletons_and_single_member() {
        let s = binomial_family(8, 0.3).compute_stats();
        assert_eq!(s.delta, Some(0.0));
        assert_eq!(s.ordered_overlap_pairs, 0);

        let single = IndicatorFamily::new(GroundSet::uniform(4, 0.7).unwrap(), vec![vec![0, 2]])
            .unwrap()
            .compute_stats();
        assert_eq!(single.lambda, single.mu);
        assert_eq!(single.delta, Some(0.0));
    }

    #[test]
    fn stats_duplicate_members_count_as_dependent_pair() {
        let fam = IndicatorFamily::new(
            GroundSet::uniform(2, 0.5).unwrap(),
            vec![vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let s = fam.compute_stats();
        // Λ = 2·0.25 + 2·0.25 (the ordered pair of equal members)
        assert!((s.lambda - 1.0).abs() < 1e-15);
        assert_eq!(s.ordered_overlap_pairs, 2);
    }

    /// Independent oracle for Λ: direct loop over all ordered pairs.
    fn lambda_naive(fam: &IndicatorFamily) -> f64 {
        let probs = fam.ground().probs();
        let mut lambda = 0.0;
        for q in fam.members() {
            lambda += q.iter().map(|&i| probs[i as usize]).product::<f64>();
        }
        for (a, qa) in fam.members().iter().enumerate() {
            for (b, qb) in fam.members().iter().enumerate() {
                if a != b && min_intersection(qa, qb).is_some() {
                    lambda += union_product(qa, qb, probs);
                }
            }
        }
        lambda
    }

    #[test]
    fn lambda_bucketing_matches_naive_oracle() {
        use rand::rngs::StdRng;
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(1..8usize);
            let m = rng.random_range(0..10usize);
            let probs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let members: Vec<Vec<u32>> = (0..m)
                .map(|_| {
                    let size = rng.random_range(0..=n);
                    let mut q: Vec<u32> = (0..n as u32).collect();
                    for i in (1..q.len()).rev() {
                        q.swap(i, rng.random_range(0..=i));
                    }
                    q.truncate(size);
                    q
                })
                .collect();
            let fam = IndicatorFamily::new(GroundSet::new(probs).unwrap(), members).unwrap();
            let s = fam.compute_stats();
            let naive = lambda_naive(&fam);
            assert!(
                (s.lambda - naive).abs() < 1e-10 * naive.abs().max(1.0),
                "bucketing {} vs naive {}",
                s.lambda,
                naive
            );
        }
    }

    #[test]
    fn exact_distribution_examples() {
        let two = binomial_family(2, 0.5);
        let d = two.exact_distribution().unwrap();
        assert_eq!(d.support, vec![0, 1, 2]);
        assert!((d.pmf[0] - 0.25).abs() < 1e-15);
        assert!((d.pmf[1] - 0.5).abs() < 1e-15);
        assert!((d.pmf[2] - 0.25).abs() < 1e-15);

        let pair = overlapping_pair_example();
        let d = pair.exact_distribution().unwrap();
        assert!((d.prob_le(&BigRational::zero()) - 0.625).abs() < 1e-15);

        let empty =
            IndicatorFamily::new(GroundSet::uniform(2, 0.5).unwrap(), Vec::new()).unwrap();
        let d = empty.exact_distribution().unwrap();
        assert_eq!(d.support, vec![0]);
        assert_eq!(d.pmf, vec![1.0]);
    }

    #[test]
    fn enumeration_cap_is_refused_by_name() {
        let fam = binomial_family(27, 0.5);
        match fam.exact_distribution() {
            Err(Error::EnumerationCap { n: 27, cap: 26 }) => {}
            other => panic!("expected cap refusal, got {other:?}"),
        }
    }

    #[test]
    fn exact_lower_tail_examples() {
        let fam = binomial_family(4, 0.5);
        assert!((fam.exact_lower_tail(1.0).unwrap() - 0.0625).abs() < 1e-15);

        let single =
            IndicatorFamily::new(GroundSet::uniform(1, 0.3).unwrap(), vec![vec![0]]).unwrap();
        assert!((single.exact_lower_tail(0.0).unwrap() - 0.7).abs() < 1e-12);

        let pair = overlapping_pair_example();
        assert!((pair.exact_lower_tail(1.0).unwrap() - 0.625).abs() < 1e-15);
    }

    #[test]
    fn strict_vs_weak_tail_at_lattice_points() {
        // Binomial(4, 1/2), ε = 1/2: threshold is exactly 1.
        let fam = binomial_family(4, 0.5);
        let weak = fam.exact_lower_tail(0.5).unwrap();
        let strict = fam.exact_lower_tail_strict(0.5).unwrap();
        assert!((weak - 5.0 / 16.0).abs() < 1e-15);
        assert!((strict - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn laplace_examples() {
        let pair = overlapping_pair_example();
        assert!((pair.exact_laplace(0.0).unwrap() - 1.0).abs() < 1e-12);
        let single =
            IndicatorFamily::new(GroundSet::uniform(1, 0.5).unwrap(), vec![vec![0]]).unwrap();
        let v = single.exact_laplace(2f64.ln()).unwrap();
        assert!((v - 0.75).abs() < 1e-15);
        // s → ∞ limit recovers P(X = 0)
        assert!((pair.exact_laplace(50.0).unwrap() - 0.625).abs() < 1e-10);
        assert!(pair.exact_laplace(-0.1).is_err());
    }

    #[test]
    fn laplace_monotone_and_log_convex() {
        let pair = overlapping_pair_example();
        let d = pair.exact_distribution().unwrap();
        let grid: Vec<f64> = (0..60).map(|i| i as f64 * 0.1).collect();
        let vals: Vec<f64> = grid.iter().map(|&s| d.laplace(s).ln()).collect();
        for w in vals.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        for w in vals.windows(3) {
            assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-9, "log-convexity violated");
        }
    }

    #[test]
    fn variance_examples() {
        assert!((binomial_family(2, 0.5).exact_variance().unwrap() - 0.5).abs() < 1e-12);
        let pair = overlapping_pair_example();
        let var = pair.exact_variance().unwrap();
        let stats = pair.compute_stats();
        assert!(var <= stats.lambda + 1e-10);
        let constant =
            IndicatorFamily::new(GroundSet::uniform(1, 1.0).unwrap(), vec![vec![0]]).unwrap();
        assert!(constant.exact_variance().unwrap().abs() < 1e-15);
    }

    #[test]
    fn mc_is_deterministic_and_consistent() {
        let pair = overlapping_pair_example();
        let a = pair.mc_lower_tail(1.0, 100_000, 42).unwrap();
        let b = pair.mc_lower_tail(1.0, 100_000, 42).unwrap();
        assert_eq!(a, b);
        let exact = pair.exact_lower_tail(1.0).unwrap();
        assert!(
            (a.point - exact).abs() <= 3.0 * a.sigma(),
            "point {} exact {} sigma {}",
            a.point,
            exact,
            a.sigma()
        );
        assert!(a.ci_low <= a.point && a.point <= a.ci_high);
    }

    #[test]
    fn mc_degenerate_cases() {
        // all probabilities 1 with nonempty members: X is a.s. maximal
        let fam =
            IndicatorFamily::new(GroundSet::uniform(3, 1.0).unwrap(), vec![vec![0], vec![1, 2]])
                .unwrap();
        let est = fam.mc_lower_tail(1.0, 1000, 1).unwrap();
        assert_eq!(est.point, 0.0);
        assert!(fam.mc_lower_tail(0.5, 0, 1).is_err());
    }

    #[test]
    fn mc_interval_shrinks_like_sqrt() {
        let pair = overlapping_pair_example();
        let small = pair.mc_lower_tail(1.0, 1_000, 5).unwrap();
        let large = pair.mc_lower_tail(1.0, 100_000, 5).unwrap();
        let ratio = small.sigma() / large.sigma();
        assert!(ratio > 5.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn pmf_mass_and_mean_match_stats() {
        let fams = [
            overlapping_pair_example(),
            binomial_family(10, 0.3),
            IndicatorFamily::new(
                GroundSet::new(vec![0.1, 0.9, 0.5, 0.25]).unwrap(),
                vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3], vec![]],
            )
            .unwrap(),
        ];
        for fam in fams {
            let d = fam.exact_distribution().unwrap();
            assert!((d.total_mass() - 1.0).abs() < 1e-12);
            assert!(mean_consistent(&d, fam.compute_stats().mu));
            assert!(d.variance() <= fam.compute_stats().lambda + 1e-10);
        }
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let text = "# demo family\n3\n0.5 0.5 0.5\n0 1\n1 2   # member b\n";
        let fam = IndicatorFamily::parse(text, "demo").unwrap();
        assert_eq!(fam.ground().size(), 3);
        assert_eq!(fam.members(), &[vec![0, 1], vec![1, 2]]);
        let rendered = fam.to_file_string();
        let again = IndicatorFamily::parse(&rendered, "demo2").unwrap();
        assert_eq!(fam, again);

        assert!(IndicatorFamily::parse("2\n0.5\n", "x").is_err());
        assert!(IndicatorFamily::parse("1\n1.5\n", "x").is_err());
        assert!(IndicatorFamily::parse("1\n0.5\n3\n", "x").is_err());
    }
}
