//! Problem specification and report types shared by the pipeline and the
//! exact re-verifier. This module stays float-free: it sits on the
//! certificate verification path.

use serde::{Deserialize, Serialize};

use super::certificate::{problem_hash, VerdictSet};
use crate::config::Config;
use crate::exact::Rational;
use crate::interval::IvBox;
use crate::poly::PolyVector;
use crate::taylor::OdeSystem;
use crate::zono::{DimRole, Zonotope};
use crate::Verdict;

/// A fully specified certification problem. Dimension bookkeeping is fixed
/// at construction: extended coordinates are ordered x1..x_nx, u1..u_nu and
/// every set follows that order.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub nx: usize,
    pub nu: usize,
    /// Extended-plant dynamics (held inputs carry zero rows).
    pub sys: OdeSystem,
    /// Candidate control envelope over (x, u).
    pub envelope: Zonotope,
    /// Initial state set over x.
    pub x0: Zonotope,
    /// Safety box over x.
    pub x_safe: IvBox,
    /// Admissible-input box over u.
    pub u_adm: IvBox,
    pub config: Config,
}

impl ProblemSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: String,
        nx: usize,
        nu: usize,
        sys: OdeSystem,
        envelope: Zonotope,
        x0: Zonotope,
        x_safe: IvBox,
        u_adm: IvBox,
        config: Config,
    ) -> Result<Self, String> {
        let n = nx + nu;
        if sys.dim() != n {
            return Err(format!("dynamics have {} dims, expected {}", sys.dim(), n));
        }
        if envelope.dim() != n {
            return Err(format!(
                "envelope has {} rows, expected {}",
                envelope.dim(),
                n
            ));
        }
        let expected_roles: Vec<DimRole> = (0..n)
            .map(|i| {
                if i < nx {
                    DimRole::State
                } else {
                    DimRole::Input
                }
            })
            .collect();
        if envelope.roles() != expected_roles.as_slice() {
            return Err("envelope roles must be x rows then u rows".into());
        }
        if x0.dim() != nx {
            return Err(format!("X0 has {} rows, expected {}", x0.dim(), nx));
        }
        if x_safe.dim() != nx {
            return Err("state box dimension mismatch".into());
        }
        if u_adm.dim() != nu {
            return Err("input box dimension mismatch".into());
        }
        if !sys.dt.is_positive() {
            return Err("sampling period must be positive".into());
        }
        Ok(ProblemSpec {
            name,
            nx,
            nu,
            sys,
            envelope,
            x0,
            x_safe,
            u_adm,
            config,
        })
    }

    pub fn dynamics(&self) -> &PolyVector {
        &self.sys.f
    }

    pub fn hash(&self) -> String {
        problem_hash(self)
    }
}

/// The five certified conditions, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    TaylorModel,
    Invariance,
    Safety,
    Admissibility,
    InitialCoverage,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::TaylorModel,
        Condition::Invariance,
        Condition::Safety,
        Condition::Admissibility,
        Condition::InitialCoverage,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Condition::TaylorModel => "taylor-model",
            Condition::Invariance => "invariance",
            Condition::Safety => "safety",
            Condition::Admissibility => "admissibility",
            Condition::InitialCoverage => "initial-coverage",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub condition: Condition,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub conditions: Vec<ConditionReport>,
    pub overall: Verdict,
}

impl CheckReport {
    pub fn from_conditions(conditions: Vec<ConditionReport>) -> Self {
        let overall = if conditions.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if conditions.iter().any(|c| c.verdict == Verdict::Unknown) {
            Verdict::Unknown
        } else {
            Verdict::Pass
        };
        CheckReport {
            conditions,
            overall,
        }
    }

    pub fn verdict_of(&self, c: Condition) -> Verdict {
        self.conditions
            .iter()
            .find(|r| r.condition == c)
            .map(|r| r.verdict)
            .unwrap_or(Verdict::Unknown)
    }

    pub fn verdict_set(&self) -> VerdictSet {
        VerdictSet {
            taylor_model: self.verdict_of(Condition::TaylorModel),
            invariance: self.verdict_of(Condition::Invariance),
            safety: self.verdict_of(Condition::Safety),
            admissibility: self.verdict_of(Condition::Admissibility),
            initial_coverage: self.verdict_of(Condition::InitialCoverage),
            overall: self.overall,
        }
    }
}

pub(crate) fn fmt_margins(margins: &[Rational]) -> String {
    margins
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
