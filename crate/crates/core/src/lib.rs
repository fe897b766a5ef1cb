//! Executable generalized metric theory.
//!
//! * [`axioms`] and [`fit`] check and fit the constants of metrics,
//!   b-metrics, strong b-metrics, b-suprametrics, strong b-suprametrics and
//!   interpolative metrics on seeded samples; [`classify`] combines them.
//! * [`comparison`] holds comparison functions `θ` and the `Θ₁`/`Θ₂` tests.
//! * [`picard`] iterates self-maps and certifies Ćirić-type contractions,
//!   bounded orbits, convergence and uniqueness.
//! * [`gallery`] ships spaces and maps with known answers.
//! * [`falsify`] searches for counterexamples to a claimed class.

pub mod axioms;
pub mod classify;
pub mod comparison;
pub mod error;
pub mod falsify;
pub mod feasibility;
pub mod fit;
pub mod gallery;
pub mod oracle;
pub mod picard;
pub mod point;
pub mod sampling;
pub mod spacefile;

pub use axioms::{check_semimetric, Axiom, AxiomCheck, SemimetricReport, TripleWitness};
pub use classify::{classify, AxiomReport, ClassVerdict, ClassifyConfig};
pub use comparison::{ComparisonFn, ThetaConfig, ThetaVerdict};
pub use error::{Error, Result};
pub use falsify::{falsify, Claim, FalsifyConfig, FalsifyReport};
pub use fit::{ConstantsFit, FitKind, FitLimits, FitOutcome};
pub use gallery::{list_gallery, load_gallery, GalleryItem};
pub use oracle::{DistanceOracle, FiniteSpace, Formula};
pub use picard::{ContractionCertificate, SelfMap, SolveConfig, SolveResult};
pub use point::{DomainBox, Point};
pub use sampling::SampleConfig;
