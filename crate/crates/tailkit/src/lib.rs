//! tailkit: lower-tail bounds for sums of dependent indicators over
//! binomial random subsets.
//!
//! The model: a ground set whose elements appear independently with given
//! probabilities, a family of member sets Q(α), and the count
//! X = Σ_α 1{Q(α) ⊆ Γ_p}. The crate evaluates the Poisson-type upper
//! bound and the matching family of explicit lower bounds on
//! Pr(X ≤ (1−ε)·E X), generates the standard combinatorial instances
//! (subgraph counts, arithmetic progressions, Schur triples), and checks
//! every bound against exact enumeration or seeded Monte Carlo.

pub mod bootstrap;
pub mod bounds;
pub mod error;
pub mod family;
pub mod harness;
pub mod instances;
pub mod numeric;
pub mod phi;

pub use error::{Error, Result};
pub use family::{
    ExactDistribution, FamilyStats, GroundSet, IndicatorFamily, McEstimate,
};
