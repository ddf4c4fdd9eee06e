//! End-to-end pipeline: assemble Taylor models, reach sets and containment
//! checks into the robust-control-invariance conditions, produce a
//! certificate, and re-verify certificates with exact arithmetic alone.

mod certificate;
mod pipeline;
mod problem;
pub mod sim;
mod verifier;

pub use certificate::{
    canonical_problem_json, problem_hash, Certificate, PolyDto, TermDto, TmDto, VerdictSet,
};
pub use pipeline::check_rci;
pub use problem::{CheckReport, Condition, ConditionReport, ProblemSpec};
pub use verifier::{verify_certificate, VerifyError, VerifyOutcome};
