//! Subgraph-count instances: the family of H-copies in the complete
//! k-graph on n vertices with uniform edge probability p, together with
//! the derived quantities that control its lower tail (least expected
//! subgraph count, maximal-edge subgraph classes, copy-count identities,
//! Turán numbers).

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;

use crate::bounds::{BoundResult, Direction};
use crate::error::{Error, Result};
use crate::family::{GroundSet, IndicatorFamily};
use crate::instances::kgraph::{k_subsets, subset_rank, GraphCopy, KGraph};
use crate::numeric::binomial_u64;

/// Guard on the number of materialized copies.
pub const DEFAULT_COPY_CAP: u64 = 2_000_000;

/// Guard on 2^{e_H} subgraph-class enumeration.
pub const EDGE_SUBSET_LIMIT: usize = 12;

/// Guard on the ground-set size for brute-force Turán search.
pub const TURAN_GROUND_LIMIT: usize = 20;

/// Number of copies of H in the complete k-graph on n vertices:
/// C(n, v_H) placements of the vertex set times the distinct edge images.
pub fn copies_count(h: &KGraph, n: usize) -> Result<u64> {
    if n < h.vertex_count() {
        return Ok(0);
    }
    let patterns = h.placement_patterns()?.len() as u64;
    Ok(binomial_u64(n as u64, h.vertex_count() as u64) * patterns)
}

/// Materialize every copy of H in the complete k-graph on n vertices.
pub fn enumerate_copies(h: &KGraph, n: usize, cap: u64) -> Result<Vec<GraphCopy>> {
    let total = copies_count(h, n)?;
    if total > cap {
        return Err(Error::SearchGuard(format!(
            "{total} copies exceed cap {cap}"
        )));
    }
    let patterns = h.placement_patterns()?;
    let mut out = Vec::with_capacity(total as usize);
    for w in k_subsets(n, h.vertex_count()) {
        for pat in &patterns {
            let mut edges: Vec<Vec<usize>> = pat
                .iter()
                .map(|e| {
                    let mut img: Vec<usize> = e.iter().map(|&v| w[v]).collect();
                    img.sort_unstable();
                    img
                })
                .collect();
            edges.sort();
            out.push(GraphCopy {
                vertices: w.clone(),
                edges,
            });
        }
    }
    Ok(out)
}

/// C_{J,H}: copies of J inside H.
pub fn count_copies_in(j: &KGraph, h: &KGraph) -> Result<u64> {
    Ok(j.copies_in(h)?.len() as u64)
}

/// E X_J = N(n, J) · p^{e_J}.
pub fn expected_copies(j: &KGraph, n: usize, p: f64) -> Result<f64> {
    Ok(copies_count(j, n)? as f64 * p.powi(j.edge_count() as i32))
}

/// All isomorphism classes of subgraphs J ⊆ H with e_J ≥ 1, vertices
/// restricted to the span of the chosen edges.
pub fn subgraph_classes(h: &KGraph) -> Result<Vec<KGraph>> {
    let e = h.edge_count();
    if e > EDGE_SUBSET_LIMIT {
        return Err(Error::SearchGuard(format!(
            "subgraph-class enumeration limited to {EDGE_SUBSET_LIMIT} edges, got {e}"
        )));
    }
    let mut seen: BTreeMap<Vec<Vec<usize>>, KGraph> = BTreeMap::new();
    for mask in 1u32..(1u32 << e) {
        let edges: Vec<&Vec<usize>> = h
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        let mut span: Vec<usize> = edges.iter().flat_map(|e| e.iter().copied()).collect();
        span.sort_unstable();
        span.dedup();
        let relabeled: Vec<Vec<usize>> = edges
            .iter()
            .map(|e| {
                e.iter()
                    .map(|v| span.binary_search(v).unwrap())
                    .collect::<Vec<usize>>()
            })
            .collect();
        let j = KGraph::new(h.k(), span.len(), relabeled)?;
        seen.entry(j.canonical_form()?).or_insert(j);
    }
    // canonical-form key order keeps the class list deterministic
    Ok(seen.into_values().collect())
}

/// Φ_H(n, p) = min{E X_J : J ⊆ H, e_J ≥ 1}, with the attaining class.
///
/// Padding a class with isolated vertices multiplies N(n, J) by at least
/// (n − v_J)/(pad count) > 1 for n > v_H, so the minimum over span-only
/// classes equals the minimum over all classes; `phi_h_with_isolated`
/// verifies that on demand.
pub fn phi_h(h: &KGraph, n: usize, p: f64) -> Result<(f64, KGraph)> {
    let mut best: Option<(f64, KGraph)> = None;
    for j in subgraph_classes(h)? {
        let v = expected_copies(&j, n, p)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, j));
        }
    }
    best.ok_or_else(|| Error::Domain("phi_h needs e_H ≥ 1".into()))
}

/// Minimum of E X_J across classes padded with isolated vertices up to v_H.
pub fn phi_h_with_isolated(h: &KGraph, n: usize, p: f64) -> Result<f64> {
    let mut best = f64::INFINITY;
    for j in subgraph_classes(h)? {
        for pad in 0..=(h.vertex_count().saturating_sub(j.vertex_count())) {
            let padded = KGraph::new(j.k(), j.vertex_count() + pad, j.edges().to_vec())?;
            best = best.min(expected_copies(&padded, n, p)?);
        }
    }
    if best.is_infinite() {
        return Err(Error::Domain("phi_h needs e_H ≥ 1".into()));
    }
    Ok(best)
}

/// m_k(H): max over J ⊆ H with e_J ≥ 2 of (e_J − 1)/(v_J − k), and 1/k
/// when H has a single edge. Exact rational.
pub fn m_k(h: &KGraph) -> Result<Rational64> {
    let e = h.edge_count();
    if e == 0 {
        return Err(Error::Domain("m_k needs e_H ≥ 1".into()));
    }
    if e == 1 {
        return Ok(Rational64::new(1, h.k() as i64));
    }
    if e > EDGE_SUBSET_LIMIT {
        return Err(Error::SearchGuard(format!(
            "m_k enumeration limited to {EDGE_SUBSET_LIMIT} edges"
        )));
    }
    let mut best: Option<Rational64> = None;
    for mask in 1u32..(1u32 << e) {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut span: Vec<usize> = h
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, e)| e.iter().copied())
            .collect();
        span.sort_unstable();
        span.dedup();
        let ratio = Rational64::new(
            mask.count_ones() as i64 - 1,
            span.len() as i64 - h.k() as i64,
        );
        if best.is_none_or(|b| ratio > b) {
            best = Some(ratio);
        }
    }
    best.ok_or_else(|| Error::Domain("m_k: no subgraph with two edges".into()))
}

/// The maximal-edge subgraph classes: all non-isomorphic J ⊆ H with
/// e_J ≥ max{e_K, 1} over every K ⊆ H on the same vertex count. Each such
/// J is an induced subgraph H[W] of maximal edge count at |W|, and the
/// returned classes are verified to have only induced copies in H.
pub fn ih_family(h: &KGraph) -> Result<Vec<KGraph>> {
    let v = h.vertex_count();
    let mut max_edges = vec![0usize; v + 1];
    let mut witnesses: Vec<Vec<KGraph>> = vec![Vec::new(); v + 1];
    for size in 1..=v {
        for w in k_subsets(v, size) {
            let edges: Vec<Vec<usize>> = h
                .edges()
                .iter()
                .filter(|e| e.iter().all(|x| w.contains(x)))
                .map(|e| {
                    e.iter()
                        .map(|x| w.binary_search(x).unwrap())
                        .collect::<Vec<usize>>()
                })
                .collect();
            let count = edges.len();
            let g = KGraph::new(h.k(), size, edges)?;
            if count > max_edges[size] {
                max_edges[size] = count;
                witnesses[size] = vec![g];
            } else if count == max_edges[size] {
                witnesses[size].push(g);
            }
        }
    }
    let mut seen: BTreeMap<Vec<Vec<usize>>, KGraph> = BTreeMap::new();
    for size in 1..=v {
        if max_edges[size] == 0 {
            continue;
        }
        for g in witnesses[size].drain(..) {
            seen.entry(g.canonical_form()?).or_insert(g);
        }
    }
    let classes: Vec<KGraph> = seen.into_values().collect();
    for j in &classes {
        if !j.all_copies_induced_in(h)? {
            return Err(Error::InvalidGraph(format!(
                "maximal-edge class with a non-induced copy in the host: {j:?}"
            )));
        }
    }
    Ok(classes)
}

/// λ_{J,H}(n) from the double-counting identity N(n,H)·C_{J,H}/N(n,J).
pub fn lambda_jh_formula(j: &KGraph, h: &KGraph, n: usize) -> Result<u64> {
    let num = copies_count(h, n)? as u128 * count_copies_in(j, h)? as u128;
    let den = copies_count(j, n)? as u128;
    if den == 0 || !num.is_multiple_of(den) {
        return Err(Error::Domain(format!(
            "double-counting identity fails to divide: {num}/{den}"
        )));
    }
    Ok((num / den) as u64)
}

/// λ_{J,H}(n) measured directly: H-copies containing one fixed J-copy.
pub fn lambda_jh_measured(j: &KGraph, h: &KGraph, n: usize, cap: u64) -> Result<u64> {
    let j_copies = enumerate_copies(j, n, cap)?;
    let fixed = j_copies
        .first()
        .ok_or_else(|| Error::Domain("no J-copies in the host".into()))?;
    let mut count = 0u64;
    for hc in enumerate_copies(h, n, cap)? {
        let vs_ok = fixed.vertices.iter().all(|v| hc.vertices.contains(v));
        let es_ok = fixed
            .edges
            .iter()
            .all(|e| hc.edges.binary_search(e).is_ok());
        if vs_ok && es_ok {
            count += 1;
        }
    }
    Ok(count)
}

/// A subgraph-count instance: the indicator family over the edges of the
/// complete k-graph plus every derived quantity the bounds consume.
#[derive(Debug, Clone, Serialize)]
pub struct SubgraphInstance {
    pub h: KGraph,
    pub n: usize,
    pub p: f64,
    pub family: IndicatorFamily,
    pub copies: u64,
    pub phi_h: f64,
    pub phi_h_with_isolated: f64,
    pub phi_minimizer: KGraph,
    pub mk: Rational64,
    pub ih: Vec<KGraph>,
    pub cjh: Vec<u64>,
}

/// Build the H-count family on n vertices with edge probability p.
pub fn subgraph_family(h: &KGraph, n: usize, p: f64) -> Result<SubgraphInstance> {
    subgraph_family_capped(h, n, p, DEFAULT_COPY_CAP)
}

pub fn subgraph_family_capped(
    h: &KGraph,
    n: usize,
    p: f64,
    cap: u64,
) -> Result<SubgraphInstance> {
    if h.edge_count() == 0 {
        return Err(Error::Domain("subgraph family needs e_H ≥ 1".into()));
    }
    if n < h.vertex_count() {
        return Err(Error::Domain(format!(
            "host size {n} below v_H = {}",
            h.vertex_count()
        )));
    }
    let ground_size = binomial_u64(n as u64, h.k() as u64) as usize;
    let copies = enumerate_copies(h, n, cap)?;
    let members: Vec<Vec<u32>> = copies
        .iter()
        .map(|c| {
            let mut q: Vec<u32> = c.edges.iter().map(|e| subset_rank(e)).collect();
            q.sort_unstable();
            q
        })
        .collect();
    let family = IndicatorFamily::new(GroundSet::uniform(ground_size, p)?, members)?;
    let (phi, phi_minimizer) = phi_h(h, n, p)?;
    let ih = ih_family(h)?;
    let cjh = ih
        .iter()
        .map(|j| count_copies_in(j, h))
        .collect::<Result<Vec<u64>>>()?;
    Ok(SubgraphInstance {
        h: h.clone(),
        n,
        p,
        family,
        copies: copies.len() as u64,
        phi_h: phi,
        phi_h_with_isolated: phi_h_with_isolated(h, n, p)?,
        phi_minimizer,
        mk: m_k(h)?,
        ih,
        cjh,
    })
}

/// The leading-order prediction Σ_{J∈I_H} C²_{J,H}·(E X_H)²/E X_J for Λ(X_H).
pub fn lambda_asymptotic(instance: &SubgraphInstance) -> Result<f64> {
    if instance.p <= 0.0 {
        return Err(Error::Domain("lambda asymptotic needs p > 0".into()));
    }
    let ex_h = expected_copies(&instance.h, instance.n, instance.p)?;
    let mut total = 0.0;
    for (j, &c) in instance.ih.iter().zip(&instance.cjh) {
        let ex_j = expected_copies(j, instance.n, instance.p)?;
        total += (c * c) as f64 * ex_h * ex_h / ex_j;
    }
    Ok(total)
}

/// Turán data for H on n vertices: the exact extremal edge count when the
/// brute force is feasible, and/or the limiting density.
#[derive(Debug, Clone, Serialize)]
pub struct TuranData {
    pub n: usize,
    pub ex_n: Option<u64>,
    pub pi_h: Option<f64>,
}

/// ex(n, H): maximum edges of an H-free sub-k-graph of the complete
/// k-graph on n vertices, by exhaustive search over edge subsets.
pub fn turan_number(h: &KGraph, n: usize) -> Result<u64> {
    let ground = binomial_u64(n as u64, h.k() as u64) as usize;
    if ground > TURAN_GROUND_LIMIT {
        return Err(Error::SearchGuard(format!(
            "turán brute force limited to {TURAN_GROUND_LIMIT} ground edges, got {ground}"
        )));
    }
    let copies = enumerate_copies(h, n, DEFAULT_COPY_CAP)?;
    let copy_masks: Vec<u32> = copies
        .iter()
        .map(|c| c.edges.iter().fold(0u32, |m, e| m | (1 << subset_rank(e))))
        .collect();
    let mut best = 0u32;
    for mask in 0u32..(1u32 << ground) {
        if mask.count_ones() <= best {
            continue;
        }
        if copy_masks.iter().all(|&cm| mask & cm != cm) {
            best = mask.count_ones();
        }
    }
    Ok(best as u64)
}

/// π_H = 1 − 1/(χ(H) − 1) for graphs (k = 2).
pub fn pi_from_chromatic(h: &KGraph) -> Result<f64> {
    if h.edge_count() == 0 {
        return Err(Error::Domain("π_H needs e_H ≥ 1".into()));
    }
    let chi = h.chromatic_number()?;
    Ok(1.0 - 1.0 / (chi as f64 - 1.0))
}

/// Turán lower bound on Pr(X_H = 0): keep the random graph inside a fixed
/// extremal H-free graph, giving (C(n,k) − ex(n,H))·log(1−p).
pub fn turan_lower_bound(h: &KGraph, n: usize, p: f64, data: &TuranData) -> Result<BoundResult> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability { value: p });
    }
    let ground = binomial_u64(n as u64, h.k() as u64);
    let (ex, exact) = match data.ex_n {
        Some(ex) => (ex, true),
        None => {
            let pi = data.pi_h.ok_or_else(|| {
                Error::Domain("turán bound needs ex_n or pi_h".into())
            })?;
            ((pi * ground as f64).floor() as u64, false)
        }
    };
    let missing = ground.saturating_sub(ex) as f64;
    let log_value = if p == 0.0 { 0.0 } else { missing * (-p).ln_1p() };
    Ok(BoundResult::new(
        Direction::LowerBoundOnTail,
        log_value,
        vec![("extremal_count_exact", exact)],
        &[
            ("ex_n", ex as f64),
            ("ground_edges", ground as f64),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> KGraph {
        KGraph::complete(2, 3).unwrap()
    }

    #[test]
    fn copy_counts() {
        assert_eq!(copies_count(&triangle(), 4).unwrap(), 4);
        assert_eq!(copies_count(&triangle(), 5).unwrap(), 10);
        let edge = KGraph::complete(2, 2).unwrap();
        assert_eq!(copies_count(&edge, 7).unwrap(), 21);
        let k_edge = KGraph::complete(3, 3).unwrap();
        assert_eq!(copies_count(&k_edge, 6).unwrap(), 20);
    }

    #[test]
    fn copies_match_injection_formula() {
        for h in [
            triangle(),
            KGraph::path(2).unwrap(),
            KGraph::complete(2, 4).unwrap(),
            KGraph::path(3).unwrap(),
            KGraph::new(2, 4, vec![vec![0, 1], vec![2, 3]]).unwrap(),
        ] {
            for n in h.vertex_count()..=8 {
                let injections: u64 = {
                    let v = h.vertex_count() as u64;
                    let nn = n as u64;
                    (0..v).map(|i| nn - i).product()
                };
                let expected = injections / h.automorphism_count().unwrap();
                assert_eq!(
                    copies_count(&h, n).unwrap(),
                    expected,
                    "H={h:?} n={n}"
                );
                assert_eq!(
                    enumerate_copies(&h, n, DEFAULT_COPY_CAP).unwrap().len() as u64,
                    expected
                );
            }
        }
    }

    #[test]
    fn count_copies_in_examples() {
        let edge = KGraph::complete(2, 2).unwrap();
        assert_eq!(count_copies_in(&edge, &triangle()).unwrap(), 3);
        assert_eq!(count_copies_in(&triangle(), &triangle()).unwrap(), 1);
        let p3 = KGraph::path(2).unwrap();
        assert_eq!(count_copies_in(&triangle(), &p3).unwrap(), 0);
    }

    #[test]
    fn mk_examples() {
        assert_eq!(m_k(&triangle()).unwrap(), Rational64::new(2, 1));
        let k_edge = KGraph::complete(3, 3).unwrap();
        assert_eq!(m_k(&k_edge).unwrap(), Rational64::new(1, 3));
        assert_eq!(m_k(&KGraph::path(2).unwrap()).unwrap(), Rational64::new(1, 1));
        assert_eq!(
            m_k(&KGraph::complete(2, 4).unwrap()).unwrap(),
            Rational64::new(5, 2)
        );
    }

    #[test]
    fn ih_examples() {
        let ih = ih_family(&triangle()).unwrap();
        assert_eq!(ih.len(), 2);
        let sizes: Vec<(usize, usize)> = {
            let mut v: Vec<_> = ih.iter().map(|g| (g.vertex_count(), g.edge_count())).collect();
            v.sort();
            v
        };
        assert_eq!(sizes, vec![(2, 1), (3, 3)]);

        let single = KGraph::complete(3, 3).unwrap();
        let ih = ih_family(&single).unwrap();
        assert_eq!(ih.len(), 1);
        assert_eq!(ih[0].edge_count(), 1);

        let ih4 = ih_family(&KGraph::complete(2, 4).unwrap()).unwrap();
        let mut sizes: Vec<_> = ih4.iter().map(|g| (g.vertex_count(), g.edge_count())).collect();
        sizes.sort();
        assert_eq!(sizes, vec![(2, 1), (3, 3), (4, 6)]);
    }

    #[test]
    fn subgraph_family_examples() {
        let inst = subgraph_family(&triangle(), 4, 0.5).unwrap();
        assert_eq!(inst.copies, 4);
        let stats = inst.family.compute_stats();
        assert!((stats.mu - 0.5).abs() < 1e-12);
        assert_eq!(inst.family.members()[0].len(), 3);

        // single-edge H: disjoint ground elements, δ = 0
        let edge = KGraph::complete(2, 2).unwrap();
        let inst = subgraph_family(&edge, 4, 0.3).unwrap();
        let stats = inst.family.compute_stats();
        assert!((stats.mu - 6.0 * 0.3).abs() < 1e-12);
        assert_eq!(stats.delta, Some(0.0));
    }

    #[test]
    fn harris_holds_on_triangle_instance() {
        let inst = subgraph_family(&triangle(), 4, 0.5).unwrap();
        let exact = inst.family.exact_lower_tail(1.0).unwrap();
        let product = (1.0 - 0.125f64).powi(4);
        assert!(exact >= product - 1e-12);
    }

    #[test]
    fn phi_h_is_min_over_all_classes() {
        let h = triangle();
        for &(n, p) in &[(10usize, 0.01f64), (10, 0.5), (20, 0.9)] {
            let (phi, _) = phi_h(&h, n, p).unwrap();
            for j in subgraph_classes(&h).unwrap() {
                assert!(phi <= expected_copies(&j, n, p).unwrap() + 1e-9);
            }
            assert!((phi - phi_h_with_isolated(&h, n, p).unwrap()).abs() < 1e-9 * phi.max(1.0));
        }
    }

    #[test]
    fn phi_minimizer_lies_in_ih() {
        let h = triangle();
        // sparse side: the triangle itself is least expected; dense side: the edge
        for &(n, p) in &[(30usize, 0.001f64), (30, 0.9)] {
            let (_, minimizer) = phi_h(&h, n, p).unwrap();
            let ih = ih_family(&h).unwrap();
            assert!(ih
                .iter()
                .any(|j| j.is_isomorphic(&minimizer).unwrap()));
        }
    }

    #[test]
    fn edge_term_dominates_well_above_threshold() {
        // for p comfortably above n^{-1/m_k(H)} the single edge is the
        // least expected class: E(edge count) ≤ E X_J for the other
        // maximal classes once n^{v_J-k}·p^{e_J-1} clears the
        // normalization constants
        for (h, n, p) in [
            (KGraph::complete(2, 3).unwrap(), 50usize, 0.35f64),
            (KGraph::complete(2, 4).unwrap(), 50, 0.4),
        ] {
            let edge = KGraph::complete(h.k(), h.k()).unwrap();
            let e_edge = expected_copies(&edge, n, p).unwrap();
            for j in ih_family(&h).unwrap() {
                if j.vertex_count() == h.k() {
                    continue;
                }
                let raw = (n as f64).powi((j.vertex_count() - h.k()) as i32)
                    * p.powi(j.edge_count() as i32 - 1);
                assert!(raw >= 1.0, "scale term below threshold for {j:?}");
                assert!(
                    e_edge <= expected_copies(&j, n, p).unwrap(),
                    "edge term fails to dominate {j:?} at n={n}, p={p}"
                );
            }
            let (_, minimizer) = phi_h(&h, n, p).unwrap();
            assert!(minimizer.is_isomorphic(&edge).unwrap());
        }
    }

    #[test]
    fn double_counting_identity_small() {
        let h = KGraph::complete(2, 4).unwrap();
        for j in ih_family(&h).unwrap() {
            for n in [6usize, 8] {
                let formula = lambda_jh_formula(&j, &h, n).unwrap();
                let measured = lambda_jh_measured(&j, &h, n, DEFAULT_COPY_CAP).unwrap();
                assert_eq!(formula, measured, "J={j:?} n={n}");
            }
        }
    }

    #[test]
    fn lambda_asymptotic_single_edge_is_exact() {
        let edge = KGraph::complete(2, 2).unwrap();
        let inst = subgraph_family(&edge, 6, 0.4).unwrap();
        let formula = lambda_asymptotic(&inst).unwrap();
        let exact = inst.family.compute_stats().lambda;
        assert!((formula - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn turan_examples() {
        assert_eq!(turan_number(&triangle(), 5).unwrap(), 6);
        assert_eq!(turan_number(&triangle(), 4).unwrap(), 4);
        assert!((pi_from_chromatic(&triangle()).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(pi_from_chromatic(&KGraph::path(2).unwrap()).unwrap(), 0.0);

        let data = TuranData {
            n: 5,
            ex_n: Some(6),
            pi_h: Some(0.5),
        };
        let b = turan_lower_bound(&triangle(), 5, 0.0, &data).unwrap();
        assert_eq!(b.log_value, 0.0);
        let b = turan_lower_bound(&triangle(), 5, 0.5, &data).unwrap();
        assert!((b.log_value - 4.0 * 0.5f64.ln()).abs() < 1e-12);
    }
}
