//! Decision engine, certificate constructor, and independent verifier for
//! (semi-regular) Sasakian structures on simply connected 5-manifolds.

pub mod abelian;
pub mod construct;
pub mod decide;
pub mod lattice;
pub mod seifert;

pub use abelian::{Barden, BardenName, GkClause, H2Data, TorsionSummand};
pub use construct::{ConstructError, RankOneRequest, SphereRequest};
pub use decide::{Decision, Obstruction, Verdict};
pub use lattice::{DivisorClass, RationalClass, SurfaceKind, SurfaceLattice};
pub use seifert::{
    Assumptions, FiveManifoldInvariants, OrbitDivisor, SeifertCertificate, SeifertError,
};
