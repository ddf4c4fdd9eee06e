//! Float witness search and its exactification.
//!
//! The LP finds a candidate (Gamma, beta) in binary64; `exactify` then
//! rationalizes Gamma, repairs beta to exact center equality through the
//! right inverse, and computes the exact residual norm epsilon. The pair
//! (search, certify) keeps the trusted side purely rational.

use thiserror::Error;

use super::lp::{self, LpFailure, LpOutcome, StandardLp};
use super::witness::ContainmentWitness;
use crate::config::Config;
use crate::exact::fromfloat::{rationalize, to_f64};
use crate::exact::{mat_inf_norm, ExactError, RMatrix, RVector, Rational};
use crate::zono::Zonotope;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    /// Simplex cycling or pivot-cap exhaustion; the caller must report
    /// "unknown", never "contained".
    #[error("numerical failure in witness search: {0}")]
    NumericalFailure(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Float witness candidate as returned by the LP.
#[derive(Debug, Clone)]
pub struct FloatWitness {
    pub gamma: Vec<Vec<f64>>,
    pub beta: Vec<f64>,
    /// The LP optimum of the stacked row norm.
    pub norm: f64,
}

#[derive(Debug, Clone)]
pub enum WitnessSearch {
    Found(FloatWitness),
    /// Equality constraints inconsistent, or the optimal norm exceeds
    /// 1 + 1e-6: no useful witness exists at float precision.
    Infeasible,
}

/// LP encoding: minimize s subject to H Gamma = G, H beta = b - c and
/// per-row abs-sums of [Gamma beta] at most s, via the usual split into
/// non-negative parts.
pub fn lp_witness_search(
    inner: &Zonotope,
    outer: &Zonotope,
    cfg: &Config,
) -> Result<WitnessSearch, SearchError> {
    assert_eq!(inner.dim(), outer.dim(), "zonotope dimension mismatch");
    let n = inner.dim();
    let p_in = inner.generators().cols();
    let p_out = outer.generators().cols();
    let h: Vec<Vec<f64>> = (0..n)
        .map(|i| outer.generators().row(i).iter().map(to_f64).collect())
        .collect();
    let g: Vec<Vec<f64>> = (0..n)
        .map(|i| inner.generators().row(i).iter().map(to_f64).collect())
        .collect();
    let bc: Vec<f64> = (0..n)
        .map(|i| to_f64(&(&outer.center()[i] - &inner.center()[i])))
        .collect();

    // Variable layout: gamma+ (p_out*p_in), gamma- (p_out*p_in),
    // beta+ (p_out), beta- (p_out), s, slack (p_out).
    let gp = |i: usize, j: usize| i * p_in + j;
    let gm = |i: usize, j: usize| p_out * p_in + i * p_in + j;
    let bp = |i: usize| 2 * p_out * p_in + i;
    let bm = |i: usize| 2 * p_out * p_in + p_out + i;
    let s_var = 2 * p_out * p_in + 2 * p_out;
    let slack = |i: usize| s_var + 1 + i;
    let n_vars = s_var + 1 + p_out;

    let mut a = Vec::new();
    let mut b = Vec::new();
    // H Gamma = G, column by column.
    for j in 0..p_in {
        for r in 0..n {
            let mut row = vec![0.0; n_vars];
            for i in 0..p_out {
                row[gp(i, j)] = h[r][i];
                row[gm(i, j)] = -h[r][i];
            }
            a.push(row);
            b.push(g[r][j]);
        }
    }
    // H beta = b - c.
    for r in 0..n {
        let mut row = vec![0.0; n_vars];
        for i in 0..p_out {
            row[bp(i)] = h[r][i];
            row[bm(i)] = -h[r][i];
        }
        a.push(row);
        b.push(bc[r]);
    }
    // Row norms: sum_j (gamma+ + gamma-) + beta+ + beta- - s + slack = 0.
    for i in 0..p_out {
        let mut row = vec![0.0; n_vars];
        for j in 0..p_in {
            row[gp(i, j)] = 1.0;
            row[gm(i, j)] = 1.0;
        }
        row[bp(i)] = 1.0;
        row[bm(i)] = 1.0;
        row[s_var] = -1.0;
        row[slack(i)] = 1.0;
        a.push(row);
        b.push(0.0);
    }
    let mut c = vec![0.0; n_vars];
    c[s_var] = 1.0;

    let outcome = lp::solve(
        &StandardLp { a, b, c },
        to_f64(&cfg.lp_tol),
        cfg.lp_max_iter,
    )
    .map_err(|e| match e {
        LpFailure::IterationLimit => SearchError::NumericalFailure("pivot cap exceeded".into()),
        LpFailure::Unbounded => SearchError::NumericalFailure("unbounded witness norm".into()),
    })?;
    match outcome {
        LpOutcome::Infeasible => Ok(WitnessSearch::Infeasible),
        LpOutcome::Optimal { objective, x } => {
            if objective > 1.0 + 1e-6 {
                return Ok(WitnessSearch::Infeasible);
            }
            let gamma = (0..p_out)
                .map(|i| (0..p_in).map(|j| x[gp(i, j)] - x[gm(i, j)]).collect())
                .collect();
            let beta = (0..p_out).map(|i| x[bp(i)] - x[bm(i)]).collect();
            Ok(WitnessSearch::Found(FloatWitness {
                gamma,
                beta,
                norm: objective,
            }))
        }
    }
}

/// Turn a float witness into an exact one.
///
/// beta is repaired through the right inverse so that H beta = b - c holds
/// exactly; Gamma is rationalized entrywise and the residual is absorbed
/// into the computed epsilon = ||H Gamma - G||.
pub fn exactify(
    w: &FloatWitness,
    inner: &Zonotope,
    outer: &Zonotope,
    hplus: &RMatrix,
    cfg: &Config,
) -> Result<ContainmentWitness, SearchError> {
    let rat = |v: f64| -> Result<Rational, SearchError> {
        Ok(rationalize(
            v,
            cfg.cfrac_max_denominator,
            cfg.rationalization,
        )?)
    };
    let p_out = outer.generators().cols();
    let p_in = inner.generators().cols();
    let mut gamma = RMatrix::zeros(p_out, p_in);
    for i in 0..p_out {
        for j in 0..p_in {
            gamma[(i, j)] = rat(w.gamma[i][j])?;
        }
    }
    let mut beta_rat = RVector::zeros(p_out);
    for i in 0..p_out {
        beta_rat[i] = rat(w.beta[i])?;
    }
    let h = outer.generators();
    let diff = outer.center() - inner.center();
    let residual = &h.mat_vec(&beta_rat) - &diff;
    let beta = &beta_rat - &hplus.mat_vec(&residual);
    debug_assert_eq!(h.mat_vec(&beta), diff);
    let epsilon = mat_inf_norm(&(&h.mat_mul(&gamma) - inner.generators()));
    Ok(ContainmentWitness {
        gamma,
        beta,
        hplus: hplus.clone(),
        epsilon,
    })
}

/// Outcome of the full containment pipeline for zonotope targets.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Containment {
    /// Exact witness certified; containment holds in the target actually
    /// used (the original outer zonotope unless inflation repaired rank).
    Certified {
        witness: ContainmentWitness,
        outer_used: Zonotope,
    },
    /// Containment is exactly disproven: the inner hull protrudes along
    /// the given axis.
    Disproved { axis: usize },
    /// Neither certified nor disproven.
    Unknown { reason: String },
}

/// Search, exactify and certify in one go. Rank-deficient outer targets
/// are repaired with the configured identity inflation when available.
pub fn check_containment(inner: &Zonotope, outer: &Zonotope, cfg: &Config) -> Containment {
    if let Some(axis) = super::witness::hull_disproof(inner, outer) {
        return Containment::Disproved { axis };
    }
    let mut outer_used = outer.clone();
    let mut hplus = crate::exact::right_inverse(outer_used.generators());
    if hplus == Err(ExactError::RankDeficient) {
        match &cfg.inflate_outer {
            Some(delta) if delta.is_positive() => {
                outer_used = outer_used.widen_identity(delta);
                hplus = crate::exact::right_inverse(outer_used.generators());
            }
            _ => {
                return Containment::Unknown {
                    reason: "outer generator matrix is rank deficient; \
                             consider --inflate-outer"
                        .into(),
                }
            }
        }
    }
    let hplus = match hplus {
        Ok(h) => h,
        Err(e) => {
            return Containment::Unknown {
                reason: e.to_string(),
            }
        }
    };
    let found = match lp_witness_search(inner, &outer_used, cfg) {
        Ok(WitnessSearch::Found(w)) => w,
        Ok(WitnessSearch::Infeasible) => {
            return Containment::Unknown {
                reason: "no float witness: LP infeasible or norm above 1".into(),
            }
        }
        Err(e) => {
            return Containment::Unknown {
                reason: e.to_string(),
            }
        }
    };
    let witness = match exactify(&found, inner, &outer_used, &hplus, cfg) {
        Ok(w) => w,
        Err(e) => {
            return Containment::Unknown {
                reason: e.to_string(),
            }
        }
    };
    let report = super::witness::certify(inner, &outer_used, &witness);
    if report.pass {
        Containment::Certified {
            witness,
            outer_used,
        }
    } else {
        Containment::Unknown {
            reason: format!(
                "exact witness insufficient: norm {} exceeds budget {}",
                report.witness_norm, report.norm_budget
            ),
        }
    }
}
