//! Non-certified floating-point sanity simulation.
//!
//! Closed-loop RK4 rollouts sampled from the envelope, with the control
//! re-chosen from the envelope fiber at every sampling instant via a small
//! re-centering LP. Purely advisory: nothing here feeds a verdict.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ProblemSpec;
use crate::contain::lp::{self, LpOutcome, StandardLp};
use crate::exact::fromfloat::to_f64;
use crate::poly::{PolyVector, Polynomial};
use crate::zono::Zonotope;

/// Evaluate a polynomial at a float point (one value per variable).
pub fn poly_eval_f64(p: &Polynomial, point: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = to_f64(c);
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                t *= point[i];
            }
        }
        acc += t;
    }
    acc
}

pub fn field_eval_f64(f: &PolyVector, point: &[f64]) -> Vec<f64> {
    f.iter().map(|p| poly_eval_f64(p, point)).collect()
}

/// One RK4 step of x' = f(x).
pub fn rk4_step(f: &PolyVector, x: &[f64], h: f64) -> Vec<f64> {
    let k1 = field_eval_f64(f, x);
    let mid1: Vec<f64> = x.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
    let k2 = field_eval_f64(f, &mid1);
    let mid2: Vec<f64> = x.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
    let k3 = field_eval_f64(f, &mid2);
    let end: Vec<f64> = x.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
    let k4 = field_eval_f64(f, &end);
    x.iter()
        .enumerate()
        .map(|(i, a)| a + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

fn zonotope_f64(z: &Zonotope) -> (Vec<f64>, Vec<Vec<f64>>) {
    let c = z.center().iter().map(to_f64).collect();
    let g = (0..z.dim())
        .map(|i| z.generators().row(i).iter().map(to_f64).collect())
        .collect();
    (c, g)
}

fn point_from_lambda(c: &[f64], g: &[Vec<f64>], lambda: &[f64]) -> Vec<f64> {
    c.iter()
        .zip(g)
        .map(|(ci, row)| ci + row.iter().zip(lambda).map(|(a, l)| a * l).sum::<f64>())
        .collect()
}

/// Minimal-norm fiber re-centerer: find lambda with G_x lambda = x - c_x
/// and minimal infinity norm. Returns the induced input when the fiber is
/// feasible (norm at most 1).
fn recenter_input(ps: &ProblemSpec, x: &[f64]) -> Option<Vec<f64>> {
    let (c, g) = zonotope_f64(&ps.envelope);
    let p = ps.envelope.generators().cols();
    let nx = ps.nx;
    // variables: lambda+ (p), lambda- (p), s, slack (p)
    let s_var = 2 * p;
    let n_vars = 2 * p + 1 + p;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for r in 0..nx {
        let mut row = vec![0.0; n_vars];
        for j in 0..p {
            row[j] = g[r][j];
            row[p + j] = -g[r][j];
        }
        a.push(row);
        b.push(x[r] - c[r]);
    }
    for j in 0..p {
        let mut row = vec![0.0; n_vars];
        row[j] = 1.0;
        row[p + j] = 1.0;
        row[s_var] = -1.0;
        row[s_var + 1 + j] = 1.0;
        a.push(row);
        b.push(0.0);
    }
    let mut c_obj = vec![0.0; n_vars];
    c_obj[s_var] = 1.0;
    match lp::solve(
        &StandardLp { a, b, c: c_obj },
        to_f64(&ps.config.lp_tol),
        ps.config.lp_max_iter,
    ) {
        Ok(LpOutcome::Optimal { objective, x: sol }) if objective <= 1.0 + 1e-9 => {
            let lambda: Vec<f64> = (0..p).map(|j| sol[j] - sol[p + j]).collect();
            let point = point_from_lambda(&c, &g, &lambda);
            Some(point[nx..].to_vec())
        }
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct SimReport {
    pub samples: usize,
    pub steps: usize,
    pub checked_points: usize,
    pub fraction_safe: f64,
    pub fraction_in_tube: f64,
    pub text: String,
}

/// Roll out `samples` closed-loop trajectories for 50 sampling periods.
/// Reports the fraction of checkpoints inside the safety box and, for
/// steps whose start lies in the envelope, inside the reach-tube hull.
pub fn simulate_sanity(
    ps: &ProblemSpec,
    tube: Option<&Zonotope>,
    samples: usize,
    seed: u64,
) -> SimReport {
    assert!(samples >= 1);
    let steps = 50usize;
    let substeps = 20usize;
    let checks_per_step = 5usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, g) = zonotope_f64(&ps.envelope);
    let p = ps.envelope.generators().cols();
    let dt = to_f64(&ps.sys.dt);
    let h = dt / substeps as f64;

    let safe_lo: Vec<f64> = ps.x_safe.0.iter().map(|iv| to_f64(&iv.lo)).collect();
    let safe_hi: Vec<f64> = ps.x_safe.0.iter().map(|iv| to_f64(&iv.hi)).collect();
    let tube_hull = tube.map(|z| {
        let hull = z.project_states().interval_hull();
        let lo: Vec<f64> = hull.0.iter().map(|iv| to_f64(&iv.lo)).collect();
        let hi: Vec<f64> = hull.0.iter().map(|iv| to_f64(&iv.hi)).collect();
        (lo, hi)
    });

    let mut checked = 0usize;
    let mut safe = 0usize;
    let mut tube_checked = 0usize;
    let mut tube_inside = 0usize;
    for _ in 0..samples {
        let lambda: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let mut state = point_from_lambda(&c, &g, &lambda);
        let mut in_envelope = true;
        for _ in 0..steps {
            for sub in 1..=substeps {
                state = rk4_step(&ps.sys.f, &state, h);
                if sub % (substeps / checks_per_step) == 0 {
                    checked += 1;
                    let ok = (0..ps.nx)
                        .all(|i| state[i] >= safe_lo[i] - 1e-9 && state[i] <= safe_hi[i] + 1e-9);
                    if ok {
                        safe += 1;
                    }
                    if in_envelope {
                        if let Some((lo, hi)) = &tube_hull {
                            tube_checked += 1;
                            let inside = (0..ps.nx)
                                .all(|i| state[i] >= lo[i] - 1e-9 && state[i] <= hi[i] + 1e-9);
                            if inside {
                                tube_inside += 1;
                            }
                        }
                    }
                }
            }
            // Sampling instant: re-choose the input from the fiber.
            match recenter_input(ps, &state[..ps.nx]) {
                Some(u) => {
                    for (i, v) in u.into_iter().enumerate() {
                        state[ps.nx + i] = v;
                    }
                    in_envelope = true;
                }
                None => in_envelope = false,
            }
        }
    }
    let fraction_safe = safe as f64 / checked.max(1) as f64;
    let fraction_in_tube = if tube_checked > 0 {
        tube_inside as f64 / tube_checked as f64
    } else {
        f64::NAN
    };
    let text = format!(
        "simulate: samples={samples} steps={steps} checked={checked} \
         safe={safe} ({:.4}) tube_checked={tube_checked} tube_inside={tube_inside} ({:.4})",
        fraction_safe, fraction_in_tube
    );
    SimReport {
        samples,
        steps,
        checked_points: checked,
        fraction_safe,
        fraction_in_tube,
        text,
    }
}
