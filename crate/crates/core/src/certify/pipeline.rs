//! The forward pipeline: Taylor model, reach sets, containment checks,
//! certificate assembly. This is the float-using side; re-verification
//! lives in `verifier`.

use super::certificate::Certificate;
use super::problem::{fmt_margins, CheckReport, Condition, ConditionReport, ProblemSpec};
use crate::contain::{check_containment, in_box, Containment};
use crate::exact::Rational;
use crate::taylor::{build_taylor_model, TaylorModel};
use crate::zono::{reach_discrete, reach_interval};
use crate::Verdict;

/// Run the whole pipeline: build a Taylor model of the one-period flow
/// from the envelope, construct both reach zonotopes, and check one-step
/// invariance, one-step safety, control admissibility and initial
/// coverage. Returns the report and a self-contained certificate.
pub fn check_rci(ps: &ProblemSpec) -> (CheckReport, Certificate) {
    let cfg = &ps.config;
    let env_x = ps.envelope.project_states();

    // Taylor model of the extended flow, with the envelope as initial set.
    let tm: Result<TaylorModel, String> = build_taylor_model(&ps.sys, &ps.envelope, cfg)
        .map_err(|e| format!("{e}; raise picard_order or shrink dt"));

    let mut conditions = Vec::new();
    let (tm_report, tm_opt) = match &tm {
        Ok(model) => {
            let slopes: Vec<Rational> = model.remainders.iter().map(|r| r.b.hi.clone()).collect();
            (
                ConditionReport {
                    condition: Condition::TaylorModel,
                    verdict: Verdict::Pass,
                    detail: format!("remainder slopes [{}]", fmt_margins(&slopes)),
                },
                Some(model.clone()),
            )
        }
        Err(e) => (
            ConditionReport {
                condition: Condition::TaylorModel,
                verdict: Verdict::Unknown,
                detail: e.clone(),
            },
            None,
        ),
    };
    conditions.push(tm_report);

    // Reach sets (only with a valid model).
    let reach_dt = tm_opt.as_ref().and_then(|m| reach_discrete(m, cfg).ok());
    let reach_tube = tm_opt.as_ref().and_then(|m| reach_interval(m, cfg).ok());

    // One-step invariance: x-projection of the instant reach set inside
    // the x-projection of the envelope.
    let mut invariance_witness = None;
    let invariance = match &reach_dt {
        None => ConditionReport {
            condition: Condition::Invariance,
            verdict: Verdict::Unknown,
            detail: "no reach set available".into(),
        },
        Some(z) => {
            let inner = z.project_states();
            match check_containment(&inner, &env_x, cfg) {
                Containment::Certified { witness, .. } => {
                    let detail = format!(
                        "witness certified: epsilon {}, norm within budget",
                        witness.epsilon
                    );
                    invariance_witness = Some(witness);
                    ConditionReport {
                        condition: Condition::Invariance,
                        verdict: Verdict::Pass,
                        detail,
                    }
                }
                Containment::Disproved { axis } => ConditionReport {
                    condition: Condition::Invariance,
                    verdict: Verdict::Fail,
                    detail: format!("reach hull protrudes along state {}", axis + 1),
                },
                Containment::Unknown { reason } => ConditionReport {
                    condition: Condition::Invariance,
                    verdict: Verdict::Unknown,
                    detail: reason,
                },
            }
        }
    };
    conditions.push(invariance);

    // One-step safety: the whole tube inside the safety box.
    let safety = match &reach_tube {
        None => ConditionReport {
            condition: Condition::Safety,
            verdict: Verdict::Unknown,
            detail: "no reach tube available".into(),
        },
        Some(z) => {
            let r = in_box(&z.project_states(), &ps.x_safe);
            ConditionReport {
                condition: Condition::Safety,
                verdict: if r.pass { Verdict::Pass } else { Verdict::Fail },
                detail: format!("hull margins [{}]", fmt_margins(&r.margins)),
            }
        }
    };
    conditions.push(safety);

    // Control admissibility: every envelope fiber inside the input box.
    let adm = if ps.nu == 0 {
        ConditionReport {
            condition: Condition::Admissibility,
            verdict: Verdict::Pass,
            detail: "no inputs".into(),
        }
    } else {
        let r = in_box(&ps.envelope.project_inputs(), &ps.u_adm);
        ConditionReport {
            condition: Condition::Admissibility,
            verdict: if r.pass { Verdict::Pass } else { Verdict::Fail },
            detail: format!("hull margins [{}]", fmt_margins(&r.margins)),
        }
    };
    conditions.push(adm);

    // Initial coverage: X0 inside the x-projection of the envelope.
    let mut initial_witness = None;
    let initial = match check_containment(&ps.x0, &env_x, cfg) {
        Containment::Certified { witness, .. } => {
            let detail = format!("witness certified: epsilon {}", witness.epsilon);
            initial_witness = Some(witness);
            ConditionReport {
                condition: Condition::InitialCoverage,
                verdict: Verdict::Pass,
                detail,
            }
        }
        Containment::Disproved { axis } => ConditionReport {
            condition: Condition::InitialCoverage,
            verdict: Verdict::Fail,
            detail: format!("X0 hull protrudes along state {}", axis + 1),
        },
        Containment::Unknown { reason } => ConditionReport {
            condition: Condition::InitialCoverage,
            verdict: Verdict::Unknown,
            detail: reason,
        },
    };
    conditions.push(initial);

    let report = CheckReport::from_conditions(conditions);
    let cert = Certificate::assemble(
        ps,
        tm_opt.as_ref(),
        reach_dt,
        reach_tube,
        invariance_witness,
        initial_witness,
        report.verdict_set(),
    );
    (report, cert)
}
