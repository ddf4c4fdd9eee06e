//! Certificate serialization and the problem content hash.
//!
//! Everything numeric is a rational string, so a certificate is a plain
//! JSON document that re-checks bit for bit. Derived fields (polynomials,
//! reach sets, epsilon) are stored verbatim and re-derived on verification,
//! which pins every byte of the file.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::problem::ProblemSpec;
use crate::config::Config;
use crate::contain::witness::ContainmentWitness;
use crate::exact::{RVector, Rational};
use crate::interval::{AffineIntervalFn, IvBox};
use crate::poly::{PolyVector, Polynomial, VarSpace};
use crate::taylor::TaylorModel;
use crate::zono::Zonotope;
use crate::Verdict;

pub const SCHEMA: &str = "cert-v1";

pub fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

/// One polynomial term: exponents follow the owning variable space order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDto {
    pub exponents: Vec<u32>,
    pub coeff: Rational,
}

/// Polynomial as an ordered term list (ascending graded-lex).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDto(pub Vec<TermDto>);

impl PolyDto {
    pub fn from_poly(p: &Polynomial) -> Self {
        PolyDto(
            p.terms()
                .map(|(m, c)| TermDto {
                    exponents: m.0.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        )
    }

    pub fn to_poly(&self, space: &std::sync::Arc<VarSpace>) -> Result<Polynomial, String> {
        for t in &self.0 {
            if t.exponents.len() != space.len() {
                return Err("term exponent arity mismatch".into());
            }
        }
        Ok(Polynomial::from_terms(
            space.clone(),
            self.0
                .iter()
                .map(|t| (t.exponents.clone(), t.coeff.clone())),
        ))
    }
}

/// Serialized Taylor model: flow polynomials over (t, l1..lp), one affine
/// remainder per dimension, the sampling period and the initial zonotope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmDto {
    pub dt: Rational,
    pub p: Vec<PolyDto>,
    #[serde(rename = "I")]
    pub remainders: Vec<AffineIntervalFn>,
    pub init: Zonotope,
}

impl TmDto {
    pub fn from_model(tm: &TaylorModel) -> Self {
        TmDto {
            dt: tm.dt.clone(),
            p: tm.p.iter().map(PolyDto::from_poly).collect(),
            remainders: tm.remainders.clone(),
            init: tm.init.clone(),
        }
    }

    /// Rebuild the (unvalidated) model; the verifier re-runs the premises.
    pub fn to_model(&self) -> Result<TaylorModel, String> {
        if self.p.len() != self.remainders.len() || self.p.len() != self.init.dim() {
            return Err("taylor model dimension bookkeeping broken".into());
        }
        let space = VarSpace::time_lambda(self.init.generators().cols());
        let polys: Result<Vec<Polynomial>, String> =
            self.p.iter().map(|dto| dto.to_poly(&space)).collect();
        Ok(TaylorModel::new(
            PolyVector(polys?),
            self.remainders.clone(),
            self.dt.clone(),
            self.init.clone(),
        ))
    }
}

/// Stored verdicts, one per condition plus the overall one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictSet {
    pub taylor_model: Verdict,
    pub invariance: Verdict,
    pub safety: Verdict,
    pub admissibility: Verdict,
    pub initial_coverage: Verdict,
    pub overall: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub tool_version: String,
    pub problem_hash: String,
    pub config: Config,
    pub taylor_model: Option<TmDto>,
    pub reach_discrete: Option<Zonotope>,
    pub reach_interval: Option<Zonotope>,
    pub invariance_witness: Option<ContainmentWitness>,
    pub initial_witness: Option<ContainmentWitness>,
    pub verdicts: VerdictSet,
}

impl Certificate {
    pub(crate) fn assemble(
        ps: &ProblemSpec,
        tm: Option<&TaylorModel>,
        reach_discrete: Option<Zonotope>,
        reach_interval: Option<Zonotope>,
        invariance_witness: Option<ContainmentWitness>,
        initial_witness: Option<ContainmentWitness>,
        verdicts: VerdictSet,
    ) -> Certificate {
        Certificate {
            schema: SCHEMA.to_string(),
            tool_version: tool_version(),
            problem_hash: problem_hash(ps),
            config: ps.config.clone(),
            taylor_model: tm.map(TmDto::from_model),
            reach_discrete,
            reach_interval,
            invariance_witness,
            initial_witness,
            verdicts,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization")
    }

    pub fn from_json(s: &str) -> Result<Certificate, String> {
        serde_json::from_str(s).map_err(|e| e.to_string())
    }
}

/// Canonical serialization of a problem for hashing: field order is fixed
/// by the DTO declaration, collections are ordered, rationals canonical.
#[derive(Serialize)]
struct ProblemDto<'a> {
    name: &'a str,
    nx: usize,
    nu: usize,
    dt: &'a Rational,
    dynamics: Vec<PolyDto>,
    disturbance: &'a RVector,
    envelope: &'a Zonotope,
    x0: &'a Zonotope,
    x_safe: &'a IvBox,
    u_adm: &'a IvBox,
    config: &'a Config,
}

pub fn canonical_problem_json(ps: &ProblemSpec) -> String {
    let dto = ProblemDto {
        name: &ps.name,
        nx: ps.nx,
        nu: ps.nu,
        dt: &ps.sys.dt,
        dynamics: ps.sys.f.iter().map(PolyDto::from_poly).collect(),
        disturbance: &ps.sys.disturbance,
        envelope: &ps.envelope,
        x0: &ps.x0,
        x_safe: &ps.x_safe,
        u_adm: &ps.u_adm,
        config: &ps.config,
    };
    serde_json::to_string(&dto).expect("problem serialization")
}

/// Content hash binding a certificate to one problem and configuration.
pub fn problem_hash(ps: &ProblemSpec) -> String {
    let mut hasher = Sha256::new();
    hasher.update(canonical_problem_json(ps).as_bytes());
    hex::encode(hasher.finalize())
}
