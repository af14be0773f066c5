//! Stable rank of rings and skew corners, computed exactly.

pub mod error;
pub mod harness;
pub mod idempotent;
pub mod ring;
pub mod stablerank;
pub mod trace;
pub mod transforms;
pub mod zsolvers;

pub use error::{Error, Result};
pub use idempotent::{EquivalenceWitness, FullnessCertificate, Idempotent};
pub use ring::{Elem, Ring, RingKind, RingRef};
pub use stablerank::{
    CornerEquation, CornerSolution, Reducer, ReducerRef, Reduction, SkewCorner, Solver, SolverRef,
};
pub use trace::PipelineTrace;
