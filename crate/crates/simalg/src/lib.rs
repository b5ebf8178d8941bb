//! Numerical kernel for epsilon-approximate ("similarity") algebraic
//! structures.
//!
//! Classical algebra demands its axioms exactly; here every axiom is a
//! quantitative statement instead: the two sides of each law must agree
//! within a tolerance under a metric on the carrier. This crate makes such
//! structures executable and measurable:
//!
//! - [`point`], [`metric`], [`sample`], [`mod@defect`]: carriers, metrics,
//!   seeded sampling over compact boxes, and defect measurement — the
//!   substrate everything else consumes.
//! - [`structures`]: the axiom catalog for each kind in the hierarchy
//!   (semigroup through field, modules, Lie algebras) and the auditor that
//!   grades a structure against its tolerance.
//! - [`instances`]: the perturbed real field x + y + eps*xy /
//!   xy + eps*x^2*y, a vector space over it, and rounded machine floats.
//! - [`liegroup`]: matrix multiplication deformed by a bilinear map, the
//!   implicitly defined inverse, bracket extraction at the identity, and
//!   C1 convergence diagnostics.
//! - [`collapse`]: tolerance sweeps, log-log rate fits, and the per-axiom
//!   verdicts certifying that defects vanish in the classical limit.
//! - [`fuzzy`]: t-norms, membership functions, the induced similarity, and
//!   the tolerance a fuzzy algebra hands its similarity counterpart.
//! - [`morphisms`]: similarity preservation, approximate homomorphism
//!   defects, composition laws, and the discrete embedding of classical
//!   algebra.

pub mod collapse;
pub mod defect;
pub mod error;
pub mod expr;
pub mod fuzzy;
pub mod instances;
pub mod liegroup;
pub mod metric;
pub mod morphisms;
pub mod point;
pub mod sample;
pub mod structures;

pub use defect::{defect, estimate_lipschitz, DefectStatistics};
pub use error::{Error, Result};
pub use metric::{approx_equal, similarity_from_metric, similarity_threshold, Metric, SimilarityMode};
pub use point::{Point, PointShape};
pub use sample::{Domain, SampleSet, SplitMix64, DEFAULT_SAMPLE_COUNT};
pub use structures::{
    audit, axiom_catalog, check_closure, AxiomDefectReport, Carrier, OperationTable,
    StructureDescriptor, StructureKind,
};
