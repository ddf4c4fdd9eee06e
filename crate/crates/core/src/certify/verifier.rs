//! Exact re-verification of certificates.
//!
//! The verifier re-derives every stored field with rational arithmetic
//! alone: Picard polynomials are recomputed and compared, Taylor-model
//! premises are re-checked, reach zonotopes are rebuilt and compared bit
//! for bit, witnesses are re-certified with their epsilon and right
//! inverse pinned to the recomputed values, and box verdicts recompute.
//! No linear programming and no remainder search happen here.

use thiserror::Error;

use super::certificate::{tool_version, Certificate, SCHEMA};
use super::problem::{CheckReport, Condition, ConditionReport, ProblemSpec};
use crate::contain::witness::{certify, hull_disproof, in_box};
use crate::exact::{mat_inf_norm, right_inverse, ExactError};
use crate::taylor::{
    check_derivative_premise, check_initial_premise, h_from_zonotope, picard_iterate,
};
use crate::zono::{reach_discrete, reach_interval, Zonotope};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    /// Structurally broken certificate (schema, version, wiring).
    #[error("malformed certificate: {0}")]
    Malformed(String),
    /// The certificate was issued for a different problem or configuration.
    #[error("problem hash mismatch")]
    HashMismatch,
}

#[derive(Debug)]
pub struct VerifyOutcome {
    /// Report re-derived from stored data by exact checks only.
    pub report: CheckReport,
    /// True when every stored field re-derived and all verdicts match.
    pub reproduced: bool,
    /// Human-readable discrepancies, empty when `reproduced`.
    pub issues: Vec<String>,
}

pub fn verify_certificate(
    cert: &Certificate,
    ps: &ProblemSpec,
) -> Result<VerifyOutcome, VerifyError> {
    if cert.schema != SCHEMA {
        return Err(VerifyError::Malformed(format!(
            "unknown schema {:?}",
            cert.schema
        )));
    }
    if cert.tool_version != tool_version() {
        return Err(VerifyError::Malformed(format!(
            "certificate was produced by version {}, verifier is {}",
            cert.tool_version,
            tool_version()
        )));
    }
    if cert.config != ps.config {
        return Err(VerifyError::Malformed(
            "certificate configuration differs from the problem's".into(),
        ));
    }
    if cert.problem_hash != ps.hash() {
        return Err(VerifyError::HashMismatch);
    }

    let cfg = &ps.config;
    let mut issues: Vec<String> = Vec::new();
    let mut conditions = Vec::new();

    // Taylor model: polynomial identity with the re-derived Picard iterate,
    // then both premises.
    let mut valid_model = None;
    let tm_verdict = match &cert.taylor_model {
        Some(dto) => {
            let mut ok = true;
            if dto.dt != ps.sys.dt {
                issues.push("stored dt differs from the problem's".into());
                ok = false;
            }
            if dto.init != ps.envelope {
                issues.push("stored initial zonotope differs from the envelope".into());
                ok = false;
            }
            match dto.to_model() {
                Err(e) => {
                    issues.push(format!("taylor model does not reconstruct: {e}"));
                    ok = false;
                }
                Ok(model) => {
                    let h = h_from_zonotope(&ps.envelope);
                    match picard_iterate(&ps.sys, &h, cfg.picard_order, cfg.degree_cap) {
                        Err(e) => {
                            issues.push(format!("picard re-derivation failed: {e}"));
                            ok = false;
                        }
                        Ok(p) => {
                            if ok && p != model.p {
                                issues.push(
                                    "stored flow polynomial is not the picard iterate".into(),
                                );
                                ok = false;
                            }
                        }
                    }
                    if ok {
                        let derivative = check_derivative_premise(&model, &ps.sys, cfg);
                        let initial = check_initial_premise(&model, &ps.envelope);
                        match derivative {
                            Ok(rep) if rep.pass && initial.pass => {
                                match model.validate(&ps.sys, cfg) {
                                    Ok(m) if m.is_valid() => valid_model = Some(m),
                                    _ => {
                                        issues.push("model validation disagreed".into());
                                        ok = false;
                                    }
                                }
                            }
                            Ok(_) => {
                                issues.push("taylor model premises do not re-verify".into());
                                ok = false;
                            }
                            Err(e) => {
                                issues.push(format!("premise re-check failed: {e}"));
                                ok = false;
                            }
                        }
                    }
                }
            }
            if ok {
                Verdict::Pass
            } else {
                Verdict::Unknown
            }
        }
        None => {
            if cert.verdicts.taylor_model != Verdict::Unknown {
                issues.push("definite taylor-model verdict without a stored model".into());
            }
            // The verifier never re-runs the remainder search, so an
            // absent model reproduces only an UNKNOWN verdict.
            Verdict::Unknown
        }
    };
    conditions.push(ConditionReport {
        condition: Condition::TaylorModel,
        verdict: tm_verdict,
        detail: "re-derived".into(),
    });

    // Reach sets must equal the deterministic reconstruction exactly; a
    // reconstruction error (e.g. the dt cap of literal time handling) is
    // consistent only with an absent stored set.
    let mut reach_dt = None;
    let mut reach_tube = None;
    if let Some(model) = &valid_model {
        match (reach_discrete(model, cfg), &cert.reach_discrete) {
            (Ok(z), Some(stored)) if *stored == z => reach_dt = Some(z),
            (Ok(_), Some(_)) => issues.push("stored discrete reach set does not re-derive".into()),
            (Ok(_), None) => issues.push("discrete reach set missing".into()),
            (Err(_), None) => {}
            (Err(e), Some(_)) => {
                issues.push(format!("stored discrete reach set cannot re-derive: {e}"))
            }
        }
        match (reach_interval(model, cfg), &cert.reach_interval) {
            (Ok(z), Some(stored)) if *stored == z => reach_tube = Some(z),
            (Ok(_), Some(_)) => issues.push("stored reach tube does not re-derive".into()),
            (Ok(_), None) => issues.push("reach tube missing".into()),
            (Err(_), None) => {}
            (Err(e), Some(_)) => issues.push(format!("stored reach tube cannot re-derive: {e}")),
        }
    } else if cert.reach_discrete.is_some() || cert.reach_interval.is_some() {
        issues.push("reach sets stored without a valid taylor model".into());
    }

    let env_x = ps.envelope.project_states();

    // Witness-route conditions share the same re-check.
    let check_witness_route = |inner: Option<&Zonotope>,
                               witness: &Option<crate::contain::witness::ContainmentWitness>,
                               stored: Verdict,
                               what: &str,
                               issues: &mut Vec<String>|
     -> Verdict {
        let Some(inner) = inner else {
            if witness.is_some() {
                issues.push(format!("{what}: witness stored without a reach set"));
            }
            if stored != Verdict::Unknown {
                issues.push(format!("{what}: definite verdict without a reach set"));
            }
            return Verdict::Unknown;
        };
        if inner.dim() != env_x.dim() {
            issues.push(format!("{what}: dimension mismatch"));
            return Verdict::Unknown;
        }
        if let Some(axis) = hull_disproof(inner, &env_x) {
            if witness.is_some() {
                issues.push(format!("{what}: witness stored despite hull disproof"));
            }
            let _ = axis;
            return Verdict::Fail;
        }
        match witness {
            Some(w) => {
                // Re-derive the certification target (identity inflation
                // only repairs a rank-deficient envelope projection).
                let mut outer_used = env_x.clone();
                let mut hplus = right_inverse(outer_used.generators());
                if hplus == Err(ExactError::RankDeficient) {
                    if let Some(delta) = &cfg.inflate_outer {
                        if delta.is_positive() {
                            outer_used = outer_used.widen_identity(delta);
                            hplus = right_inverse(outer_used.generators());
                        }
                    }
                }
                let Ok(hplus) = hplus else {
                    issues.push(format!("{what}: witness stored for a degenerate target"));
                    return Verdict::Unknown;
                };
                if w.hplus != hplus {
                    issues.push(format!("{what}: stored right inverse does not re-derive"));
                    return Verdict::Unknown;
                }
                if w.gamma.rows() != outer_used.generators().cols()
                    || w.gamma.cols() != inner.generators().cols()
                    || w.beta.len() != outer_used.generators().cols()
                {
                    issues.push(format!("{what}: witness dimensions are wrong"));
                    return Verdict::Unknown;
                }
                let residual = mat_inf_norm(
                    &(&outer_used.generators().mat_mul(&w.gamma) - inner.generators()),
                );
                if residual != w.epsilon {
                    issues.push(format!(
                        "{what}: stored epsilon {} is not the exact residual {}",
                        w.epsilon, residual
                    ));
                    return Verdict::Unknown;
                }
                let report = certify(inner, &outer_used, w);
                if report.pass {
                    Verdict::Pass
                } else {
                    issues.push(format!("{what}: stored witness fails certification"));
                    Verdict::Unknown
                }
            }
            None => {
                if stored == Verdict::Pass {
                    issues.push(format!("{what}: PASS verdict without a witness"));
                    return Verdict::Unknown;
                }
                if stored == Verdict::Fail {
                    issues.push(format!("{what}: FAIL verdict without an exact disproof"));
                    return Verdict::Unknown;
                }
                Verdict::Unknown
            }
        }
    };

    let invariance_verdict = check_witness_route(
        reach_dt.as_ref().map(|z| z.project_states()).as_ref(),
        &cert.invariance_witness,
        cert.verdicts.invariance,
        "invariance",
        &mut issues,
    );
    conditions.push(ConditionReport {
        condition: Condition::Invariance,
        verdict: invariance_verdict,
        detail: "re-derived".into(),
    });

    let safety_verdict = match &reach_tube {
        Some(z) => {
            if in_box(&z.project_states(), &ps.x_safe).pass {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        None => {
            if cert.verdicts.safety != Verdict::Unknown {
                issues.push("safety: definite verdict without a reach tube".into());
            }
            Verdict::Unknown
        }
    };
    conditions.push(ConditionReport {
        condition: Condition::Safety,
        verdict: safety_verdict,
        detail: "re-derived".into(),
    });

    let adm_verdict = if ps.nu == 0 || in_box(&ps.envelope.project_inputs(), &ps.u_adm).pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    conditions.push(ConditionReport {
        condition: Condition::Admissibility,
        verdict: adm_verdict,
        detail: "re-derived".into(),
    });

    let initial_verdict = check_witness_route(
        Some(&ps.x0),
        &cert.initial_witness,
        cert.verdicts.initial_coverage,
        "initial-coverage",
        &mut issues,
    );
    conditions.push(ConditionReport {
        condition: Condition::InitialCoverage,
        verdict: initial_verdict,
        detail: "re-derived".into(),
    });

    let overall = if conditions.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if conditions.iter().any(|c| c.verdict == Verdict::Unknown) {
        Verdict::Unknown
    } else {
        Verdict::Pass
    };
    let report = CheckReport {
        conditions,
        overall,
    };
    let rederived = report.verdict_set();
    if rederived != cert.verdicts {
        issues.push(format!(
            "stored verdicts {:?} do not match re-derived {:?}",
            cert.verdicts, rederived
        ));
    }
    let reproduced = issues.is_empty();
    Ok(VerifyOutcome {
        report,
        reproduced,
        issues,
    })
}
