//! Batteries, demos and JSON reports with replayable witnesses.

pub mod batteries;
pub mod corpus;
pub mod demos;
pub mod report;

pub use batteries::{run_battery, Battery};
pub use corpus::{builtin_corpus, parse_corpus, CorpusEntry};
pub use demos::{m2z_reduce, sr_report, z_reduce};
pub use report::{replay, Outcome, Record, Replay, Report, Witness, SCHEMA_VERSION};

use crate::error::Error;

/// Process exit code for an error: 1 verification failure, 2 unsupported
/// or over a cap, 3 bad input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SolverFailure(_) | Error::Invariant(_) => 1,
        Error::Unsupported(_) | Error::CapExceeded { .. } | Error::AmbientTooSmall { .. } => 2,
        _ => 3,
    }
}

/// Exit code for a finished report.
pub fn report_exit_code(r: &Report) -> i32 {
    match r.outcome() {
        Outcome::Pass => 0,
        Outcome::Fail => 1,
        Outcome::Unsupported => 2,
    }
}
