//! Certification toolkit for zonotopic control envelopes of polynomial
//! sampled-data systems.
//!
//! The pipeline builds a Taylor-model enclosure of the one-period flow,
//! turns it into reach-set zonotopes for the sampling instant and for the
//! whole sampling interval, and certifies the robust-control-invariance
//! conditions with exact rational witnesses. Every verdict is backed by a
//! compact certificate that re-checks with exact arithmetic alone.

pub mod certify;
pub mod config;
pub mod contain;
pub mod exact;
pub mod interval;
pub mod poly;
pub mod selfcheck;
pub mod taylor;
pub mod zono;

mod util;

/// Three-valued outcome of a certification condition.
///
/// `Fail` is only reported when a violation is proven exactly; checks that
/// are sufficient-only surface their inability to decide as `Unknown`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail => write!(f, "FAIL"),
            Verdict::Unknown => write!(f, "UNKNOWN"),
        }
    }
}
