//! Solver and reducer transforms: each takes a certified solver or reducer
//! and returns one for a related corner or ring, checking witnesses on the
//! way in and answers on the way out.

pub mod blocks;
pub mod bounds;
pub mod combine;
pub mod corner_idempotent;
pub mod corner_ops;
pub mod full_corner;
pub mod row_corner;
pub mod steps;

pub use blocks::{grow, shift, shift_witness, shrink, support, BlockMap};
pub use bounds::{morita_bounds, vaserstein_bound};
pub use combine::{absorb, combine, copies, BlockLayout};
pub use full_corner::{ambient_size, reducer_from_full_corner, CornerSource, FullCornerPlan, FullCornerReducer};
pub use corner_idempotent::{corner_idempotent, CornerIdempotent, CornerIdempotentChecks};
pub use corner_ops::{extend, restrict, subequivalence_from_solver, transport};
pub use row_corner::{corner_solver_from_reducer, reducer_from_corner_solver, row_corner};
pub use steps::{Step, StepStack};
