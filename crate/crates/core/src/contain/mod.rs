//! Zonotope containment: float LP witness search, exact witness repair,
//! and the relaxed exact certification, plus exact box containment.
//!
//! Module split matters here: [`witness`] is the exact, float-free side
//! used by the certificate verifier; [`lp`] and [`search`] own all the
//! binary64 code.

pub mod lp;
pub mod search;
pub mod witness;

pub use search::{check_containment, exactify, lp_witness_search, Containment, WitnessSearch};
pub use witness::{certify, hull_disproof, in_box, BoxReport, CertifyReport, ContainmentWitness};
