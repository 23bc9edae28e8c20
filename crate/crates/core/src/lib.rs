//! A numerical laboratory for function lattices on metric spaces.
//!
//! The crate provides:
//!
//! * concrete metric spaces (Euclidean, half-line, interval fibers,
//!   bounded remetrizations) and real functions on them closed under the
//!   pointwise lattice and ring operations ([`space`], [`function`]);
//! * deterministic seeded pair samplers and sampling-based estimators for
//!   Lipschitz constants, sup norms and moduli of continuity
//!   ([`sampling`], [`estimate`]);
//! * the mutually inverse radial transforms between Lipschitz functions
//!   and bounded Lipschitz functions, with their quantitative bounds
//!   ([`transforms`]);
//! * f-ring products f·g/Δ with unit Δ, their axioms, the intertwiners
//!   between different units, and scaled point evaluations ([`fring`]);
//! * constructive counterexamples: the tangential blow-up of the expansion
//!   in dimension ≥ 2 and the fiber space whose function lattice admits no
//!   unital f-ring structure ([`counterexamples`]).
//!
//! Estimators are deterministic: pair `i` of a plan is a pure function of
//! `(seed, i)`, and reductions are order-independent, so identical plans
//! produce identical reports under any thread scheduling.

pub mod corpus;
pub mod counterexamples;
pub mod error;
pub mod estimate;
pub mod fring;
pub mod function;
pub mod sampling;
pub mod space;
pub mod transforms;

pub use error::{Error, Result};
pub use estimate::{
    check_metric_axioms, dominance_ratio, estimate_large_distance_lip, estimate_lip,
    estimate_modulus, estimate_sup, EstimateReport, PairWitness, VerifyReport,
};
pub use function::{verify_certificates, RealFunction};
pub use sampling::{SamplingPlan, Strategy};
pub use space::{Point, Space};
