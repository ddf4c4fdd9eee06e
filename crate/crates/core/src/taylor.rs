//! Taylor models for the one-period flow: Picard iteration, the two
//! validity premises (initial coverage and strict derivative enclosure),
//! and the doubling search that synthesizes remainder slopes.

use std::sync::Arc;

use thiserror::Error;

use crate::config::{Config, DisturbanceMode};
use crate::exact::{RVector, Rational};
use crate::interval::{eval_poly_subdivided, AffineIntervalFn, Interval, IvBox};
use crate::poly::{PolyError, PolyVector, Polynomial, VarRole, VarSpace};
use crate::util::par_map;
use crate::zono::Zonotope;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TaylorError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    /// Polynomial and system variable spaces disagree.
    #[error("taylor model and system dimensions do not match")]
    DomainMismatch,
    /// The doubling search exhausted its budget without a passing slope
    /// vector; raise the Picard order or shrink the sampling period.
    #[error("no valid remainder found after {0} doublings")]
    NoValidRemainder(u32),
}

/// Polynomial sampled-data plant in extended coordinates: the state vector
/// includes the held inputs (with zero derivative rows).
#[derive(Debug, Clone)]
pub struct OdeSystem {
    /// Right-hand side over x1..xn.
    pub f: PolyVector,
    /// Additive disturbance magnitude per dimension (zero where undisturbed).
    pub disturbance: RVector,
    /// Sampling period, > 0.
    pub dt: Rational,
}

impl OdeSystem {
    pub fn new(f: PolyVector, disturbance: RVector, dt: Rational) -> Self {
        assert!(dt.is_positive(), "sampling period must be positive");
        assert_eq!(f.len(), disturbance.len(), "disturbance arity mismatch");
        assert!(
            disturbance.iter().all(|w| !w.is_negative()),
            "disturbance bounds must be non-negative"
        );
        OdeSystem { f, disturbance, dt }
    }

    pub fn dim(&self) -> usize {
        self.f.len()
    }

    /// Disturbance bounds as seen by the premise check under `cfg`.
    fn effective_w(&self, cfg: &Config) -> RVector {
        match cfg.disturbance_mode {
            DisturbanceMode::Nominal => RVector::zeros(self.dim()),
            DisturbanceMode::Robust => self.disturbance.clone(),
        }
    }
}

/// Taylor model (p, I) over t in [0, dt], lambda in [-1,1]^p, built from an
/// initial zonotope Z(c, G) so that p(0, lambda) = c + G*lambda identically.
#[derive(Debug, Clone)]
pub struct TaylorModel {
    pub p: PolyVector,
    pub remainders: Vec<AffineIntervalFn>,
    pub dt: Rational,
    pub init: Zonotope,
    valid: bool,
}

impl TaylorModel {
    pub fn new(
        p: PolyVector,
        remainders: Vec<AffineIntervalFn>,
        dt: Rational,
        init: Zonotope,
    ) -> Self {
        assert_eq!(p.len(), remainders.len(), "one remainder per dimension");
        assert_eq!(
            p.len(),
            init.dim(),
            "taylor model / zonotope dimension mismatch"
        );
        TaylorModel {
            p,
            remainders,
            dt,
            init,
            valid: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn lambda_count(&self) -> usize {
        self.init.generators().cols()
    }

    /// True once both premises have been checked on this exact model.
    pub fn is_valid(&self) -> bool {
        self.valid
    }

    /// Domain box (t, lambda) of the model.
    pub fn domain(&self) -> IvBox {
        let mut ivs = vec![Interval::new(Rational::zero(), self.dt.clone())];
        ivs.extend((0..self.lambda_count()).map(|_| Interval::from_ints(-1, 1)));
        IvBox(ivs)
    }

    /// Run both premises; on success the validity flag is set.
    pub fn validate(mut self, sys: &OdeSystem, cfg: &Config) -> Result<TaylorModel, TaylorError> {
        let derivative = check_derivative_premise(&self, sys, cfg)?;
        let initial = check_initial_premise(&self, &self.init);
        if derivative.pass && initial.pass {
            self.valid = true;
        }
        Ok(self)
    }

    #[cfg(test)]
    pub(crate) fn force_valid(mut self) -> TaylorModel {
        self.valid = true;
        self
    }
}

/// Per-dimension strict margins of the derivative premise. Both margins
/// must be strictly positive for the dimension to pass.
#[derive(Debug, Clone)]
pub struct DimMargin {
    /// d_lower - I'_lower: slack below the defect.
    pub lo_margin: Rational,
    /// I'_upper - d_upper: slack above the defect.
    pub hi_margin: Rational,
}

impl DimMargin {
    pub fn pass(&self) -> bool {
        self.lo_margin.is_positive() && self.hi_margin.is_positive()
    }
}

#[derive(Debug, Clone)]
pub struct PremiseReport {
    pub pass: bool,
    pub margins: Vec<DimMargin>,
}

/// Initial-coverage premise result.
#[derive(Debug, Clone)]
pub struct InitialReport {
    pub pass: bool,
    /// Whether p(0, lambda) - (c + G lambda) vanished identically.
    pub polynomial_identity: bool,
    /// Whether 0 in I(0) held componentwise.
    pub zero_in_remainder: bool,
}

/// Picard iterate p_k: p_0 = h, p_{k+1} = h + integral_0^t f(p_k(s, .)) ds.
///
/// `h` must be time-free (the initial parametrization over lambda alone).
pub fn picard_iterate(
    sys: &OdeSystem,
    h: &PolyVector,
    order: u32,
    degree_cap: u32,
) -> Result<PolyVector, TaylorError> {
    let tm_space = h.space().clone();
    let t_idx = tm_space.time_index().ok_or(TaylorError::DomainMismatch)?;
    for hp in h.iter() {
        if hp.terms().any(|(m, _)| m.0[t_idx] > 0) {
            return Err(TaylorError::DomainMismatch);
        }
    }
    if sys.f.len() != h.len() || sys.f.space().len() != h.len() {
        return Err(TaylorError::DomainMismatch);
    }
    let mut p = h.clone();
    for _ in 0..order {
        let next: Result<Vec<Polynomial>, PolyError> = sys
            .f
            .iter()
            .zip(h.iter())
            .map(|(fi, hi)| {
                let substituted = fi.compose(&tm_space, &p.0, degree_cap)?;
                Ok(hi.add(&substituted.integrate_time()))
            })
            .collect();
        p = PolyVector(next?);
    }
    Ok(p)
}

/// Initial parametrization h(lambda) = c + G*lambda of a zonotope, over the
/// (t, lambda) space.
pub fn h_from_zonotope(z: &Zonotope) -> PolyVector {
    let p = z.generators().cols();
    let space = VarSpace::time_lambda(p);
    let polys = (0..z.dim())
        .map(|i| {
            let mut terms: Vec<(Vec<u32>, Rational)> = Vec::new();
            terms.push((vec![0; space.len()], z.center()[i].clone()));
            for j in 0..p {
                let mut exps = vec![0u32; space.len()];
                exps[1 + j] = 1;
                terms.push((exps, z.generators()[(i, j)].clone()));
            }
            Polynomial::from_terms(space.clone(), terms)
        })
        .collect();
    PolyVector(polys)
}

/// Defect polynomials d_i = f_i(p + xi) - dp_i/dt over (t, lambda, xi).
///
/// The xi variables stand for the per-dimension remainder values; their
/// evaluation box is the hull of I_j over [0, dt]. Additive disturbances
/// are not part of the polynomial; they widen the defect interval later.
///
/// This single composition is bounded by deg(f) * deg(p) and runs without
/// the degree cap: the cap guards the iterated Picard loop, where degrees
/// can actually run away.
fn defect_polynomials(
    sys: &OdeSystem,
    p: &PolyVector,
) -> Result<(Arc<VarSpace>, Vec<Polynomial>), TaylorError> {
    let n = sys.dim();
    let tm_space = p.space().clone();
    let lambda_count = tm_space.indices_with_role(VarRole::Init).len();
    let dspace = VarSpace::defect(lambda_count, n);
    let images: Vec<Polynomial> = (0..n)
        .map(|j| {
            let pj = p[j].lift(&dspace);
            let xij = Polynomial::var(dspace.clone(), &format!("xi{}", j + 1));
            pj.add(&xij)
        })
        .collect();
    let mut defects = Vec::with_capacity(n);
    for i in 0..n {
        let f_at = sys.f[i].compose(&dspace, &images, u32::MAX)?;
        let pdot = p[i].partial("t").lift(&dspace);
        defects.push(f_at.sub(&pdot));
    }
    Ok((dspace, defects))
}

fn defect_box(tm: &TaylorModel) -> IvBox {
    let t_range = Interval::new(Rational::zero(), tm.dt.clone());
    let mut ivs = vec![t_range.clone()];
    ivs.extend((0..tm.lambda_count()).map(|_| Interval::from_ints(-1, 1)));
    ivs.extend(tm.remainders.iter().map(|r| r.hull_over(&t_range)));
    IvBox(ivs)
}

/// Defect terms with the (t, lambda) factor pre-multiplied: across the
/// doubling rounds only the xi hulls change, so each round reduces to the
/// xi power products. Exact interval multiplication is associative, so
/// this regrouping returns the same enclosure as a full evaluation.
struct PartialDefect {
    terms: Vec<(Interval, Vec<(usize, u32)>)>,
}

fn build_partials(defects: &[Polynomial], n_lambda: usize, dt: &Rational) -> Vec<PartialDefect> {
    let mut txl = vec![Interval::new(Rational::zero(), dt.clone())];
    txl.extend((0..n_lambda).map(|_| Interval::from_ints(-1, 1)));
    let mut cache: Vec<Vec<Interval>> = txl
        .iter()
        .map(|iv| vec![Interval::point(Rational::one()), iv.clone()])
        .collect();
    defects
        .iter()
        .map(|d| {
            let terms = d
                .terms()
                .map(|(m, c)| {
                    let mut partial = Interval::point(c.clone());
                    let mut xi_exps = Vec::new();
                    for (i, &e) in m.0.iter().enumerate() {
                        if e == 0 {
                            continue;
                        }
                        if i <= n_lambda {
                            while cache[i].len() <= e as usize {
                                let next = txl[i].pow(cache[i].len() as u32);
                                cache[i].push(next);
                            }
                            partial = partial.mul(&cache[i][e as usize]);
                        } else {
                            xi_exps.push((i - n_lambda - 1, e));
                        }
                    }
                    (partial, xi_exps)
                })
                .collect();
            PartialDefect { terms }
        })
        .collect()
}

fn eval_partial(pd: &PartialDefect, xi_hulls: &[Interval]) -> Interval {
    let mut acc = Interval::zero();
    for (partial, xi_exps) in &pd.terms {
        let mut term = partial.clone();
        for &(j, e) in xi_exps {
            term = term.mul(&xi_hulls[j].pow(e));
        }
        acc = acc.add(&term);
    }
    acc
}

fn margins_from_partials(
    partials: &[PartialDefect],
    tm: &TaylorModel,
    w: &RVector,
) -> Vec<DimMargin> {
    let t_range = Interval::new(Rational::zero(), tm.dt.clone());
    let xi_hulls: Vec<Interval> = tm
        .remainders
        .iter()
        .map(|r| r.hull_over(&t_range))
        .collect();
    let jobs: Vec<usize> = (0..partials.len()).collect();
    par_map(jobs, |i| {
        let mut enc = eval_partial(&partials[i], &xi_hulls);
        if !w[i].is_zero() {
            enc = enc.add(&Interval::symmetric(w[i].clone()));
        }
        let b = &tm.remainders[i].b;
        DimMargin {
            lo_margin: &enc.lo - &b.lo,
            hi_margin: &b.hi - &enc.hi,
        }
    })
}

fn margins_for(
    defects: &[Polynomial],
    partials: &[PartialDefect],
    tm: &TaylorModel,
    w: &RVector,
    depth: u32,
) -> Vec<DimMargin> {
    if depth == 0 {
        return margins_from_partials(partials, tm, w);
    }
    // Subdivision splits every variable jointly; no factorization applies.
    let dbox = defect_box(tm);
    let jobs: Vec<usize> = (0..defects.len()).collect();
    par_map(jobs, |i| {
        let mut enc = eval_poly_subdivided(&defects[i], &dbox, depth);
        if !w[i].is_zero() {
            enc = enc.add(&Interval::symmetric(w[i].clone()));
        }
        // I affine in t, so its derivative is the constant interval b.
        let b = &tm.remainders[i].b;
        DimMargin {
            lo_margin: &enc.lo - &b.lo,
            hi_margin: &b.hi - &enc.hi,
        }
    })
}

/// Strict derivative premise: the interval evaluation of the defect over
/// t in `[0,dt]`, lambda in `[-1,1]^p`, xi in hull(I), widened by `[-W, W]`,
/// must lie strictly inside (I'_lower, I'_upper) componentwise.
pub fn check_derivative_premise(
    tm: &TaylorModel,
    sys: &OdeSystem,
    cfg: &Config,
) -> Result<PremiseReport, TaylorError> {
    if tm.dim() != sys.dim() {
        return Err(TaylorError::DomainMismatch);
    }
    let (_, defects) = defect_polynomials(sys, &tm.p)?;
    let partials = build_partials(&defects, tm.lambda_count(), &tm.dt);
    let w = sys.effective_w(cfg);
    let margins = margins_for(&defects, &partials, tm, &w, cfg.subdivision_depth);
    Ok(PremiseReport {
        pass: margins.iter().all(DimMargin::pass),
        margins,
    })
}

/// Initial premise: p(0, lambda) coincides with c + G*lambda as a
/// polynomial, and each remainder contains zero at t = 0.
pub fn check_initial_premise(tm: &TaylorModel, init: &Zonotope) -> InitialReport {
    let polynomial_identity =
        if init.dim() != tm.dim() || init.generators().cols() != tm.lambda_count() {
            false
        } else {
            let h = h_from_zonotope(init);
            (0..tm.dim()).all(|i| {
                let at_zero = tm.p[i].substitute_const("t", &Rational::zero());
                at_zero.sub(&h[i]).is_zero()
            })
        };
    let zero = Rational::zero();
    let zero_in_remainder = tm.remainders.iter().all(|r| r.a.contains(&zero));
    InitialReport {
        pass: polynomial_identity && zero_in_remainder,
        polynomial_identity,
        zero_in_remainder,
    }
}

/// Starting slope of the remainder search, 10^-6.
fn start_slope() -> Rational {
    Rational::new(1, 1_000_000)
}

const MAX_DOUBLINGS: u32 = 80;

/// Search symmetric pure-slope remainders [-s_i t, s_i t] for the Picard
/// iterate `p`: start each slope at 10^-6, re-check the derivative premise,
/// double the slopes of failing dimensions, and stop at the first pass.
/// The returned model has passed both premises (re-checked, not assumed).
pub fn synthesize_remainder(
    sys: &OdeSystem,
    p: &PolyVector,
    init: &Zonotope,
    cfg: &Config,
) -> Result<TaylorModel, TaylorError> {
    let (_, defects) = defect_polynomials(sys, p)?;
    let lambda_count = p.space().indices_with_role(VarRole::Init).len();
    let partials = build_partials(&defects, lambda_count, &sys.dt);
    let w = sys.effective_w(cfg);
    let mut slopes: Vec<Rational> = vec![start_slope(); sys.dim()];
    let two = Rational::from_int(2);
    for _round in 0..=MAX_DOUBLINGS {
        let tm = TaylorModel::new(
            p.clone(),
            slopes
                .iter()
                .map(|s| AffineIntervalFn::symmetric_slope(s.clone()))
                .collect(),
            sys.dt.clone(),
            init.clone(),
        );
        let margins = margins_for(&defects, &partials, &tm, &w, cfg.subdivision_depth);
        if margins.iter().all(DimMargin::pass) {
            let tm = tm.validate(sys, cfg)?;
            if tm.is_valid() {
                return Ok(tm);
            }
            // The re-check disagrees with the search only if the initial
            // premise fails, which no slope can repair.
            return Err(TaylorError::NoValidRemainder(0));
        }
        for (i, m) in margins.iter().enumerate() {
            if !m.pass() {
                slopes[i] = &slopes[i] * &two;
            }
        }
    }
    Err(TaylorError::NoValidRemainder(MAX_DOUBLINGS))
}

/// Picard iteration plus remainder synthesis from an initial zonotope.
pub fn build_taylor_model(
    sys: &OdeSystem,
    init: &Zonotope,
    cfg: &Config,
) -> Result<TaylorModel, TaylorError> {
    let h = h_from_zonotope(init);
    let p = picard_iterate(sys, &h, cfg.picard_order, cfg.degree_cap)?;
    synthesize_remainder(sys, &p, init, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zono::DimRole;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// Double integrator in extended coordinates: f = (x2, u, 0).
    fn double_integrator() -> OdeSystem {
        let s = VarSpace::states(3);
        let f = PolyVector(vec![
            Polynomial::var(s.clone(), "x2"),
            Polynomial::var(s.clone(), "x3"),
            Polynomial::zero(s),
        ]);
        OdeSystem::new(f, RVector::zeros(3), rat(1, 10))
    }

    fn unit_box_zonotope(n: usize) -> Zonotope {
        Zonotope::new(
            RVector::zeros(n),
            crate::exact::RMatrix::identity(n),
            vec![DimRole::State; n],
        )
    }

    #[test]
    fn picard_double_integrator_matches_printout() {
        let sys = double_integrator();
        let init = unit_box_zonotope(3);
        let h = h_from_zonotope(&init);
        let p = picard_iterate(&sys, &h, 2, 12).unwrap();
        assert_eq!(p[0].to_string(), "l1 + t*l2 + 1/2*t^2*l3");
        assert_eq!(p[1].to_string(), "l2 + t*l3");
        assert_eq!(p[2].to_string(), "l3");
    }

    #[test]
    fn picard_zero_field_is_identity() {
        let s = VarSpace::states(2);
        let f = PolyVector(vec![Polynomial::zero(s.clone()), Polynomial::zero(s)]);
        let sys = OdeSystem::new(f, RVector::zeros(2), rat(1, 10));
        let init = unit_box_zonotope(2);
        let h = h_from_zonotope(&init);
        let p = picard_iterate(&sys, &h, 3, 12).unwrap();
        assert_eq!(p, h);
    }

    #[test]
    fn picard_scalar_exponential() {
        let s = VarSpace::states(1);
        let f = PolyVector(vec![Polynomial::var(s, "x1")]);
        let sys = OdeSystem::new(f, RVector::zeros(1), rat(1, 10));
        let init = unit_box_zonotope(1);
        let h = h_from_zonotope(&init);
        let p = picard_iterate(&sys, &h, 2, 12).unwrap();
        // truncated exponential: l1 (1 + t + t^2/2)
        assert_eq!(p[0].to_string(), "l1 + t*l1 + 1/2*t^2*l1");
    }

    #[test]
    fn derivative_premise_paper_slopes_pass() {
        let sys = double_integrator();
        let init = unit_box_zonotope(3);
        let h = h_from_zonotope(&init);
        let p = picard_iterate(&sys, &h, 2, 12).unwrap();
        let tm = TaylorModel::new(
            p,
            vec![
                AffineIntervalFn::symmetric_slope(rat(101020, 100_000_000_000)),
                AffineIntervalFn::symmetric_slope(rat(1, 1_000_000)),
                AffineIntervalFn::symmetric_slope(rat(1, 1_000_000)),
            ],
            rat(1, 10),
            init,
        );
        let report = check_derivative_premise(&tm, &sys, &Config::default()).unwrap();
        assert!(report.pass, "margins: {:?}", report.margins);
    }

    #[test]
    fn derivative_premise_zero_field() {
        let s = VarSpace::states(1);
        let f = PolyVector(vec![Polynomial::zero(s)]);
        let sys = OdeSystem::new(f, RVector::zeros(1), rat(1, 10));
        let init = unit_box_zonotope(1);
        let h = h_from_zonotope(&init);
        let p = picard_iterate(&sys, &h, 1, 12).unwrap();

        // [-t, t] strictly encloses the zero defect
        let tm = TaylorModel::new(
            p.clone(),
            vec![AffineIntervalFn::symmetric_slope(rat(1, 1))],
            rat(1, 10),
            init.clone(),
        );
        assert!(
            check_derivative_premise(&tm, &sys, &Config::default())
                .unwrap()
                .pass
        );

        // I = 0 fails: strict inclusion 0 < 0 is impossible
        let tm = TaylorModel::new(p, vec![AffineIntervalFn::zero()], rat(1, 10), init);
        assert!(
            !check_derivative_premise(&tm, &sys, &Config::default())
                .unwrap()
                .pass
        );
    }

    #[test]
    fn initial_premise_examples() {
        let sys = double_integrator();
        let init = unit_box_zonotope(3);
        let h = h_from_zonotope(&init);
        let p = picard_iterate(&sys, &h, 2, 12).unwrap();
        let slopes = vec![AffineIntervalFn::symmetric_slope(rat(1, 1_000_000)); 3];
        let tm = TaylorModel::new(p.clone(), slopes.clone(), rat(1, 10), init.clone());
        assert!(check_initial_premise(&tm, &init).pass);

        // remainder offset excluding zero fails
        let mut bad = slopes.clone();
        bad[0] = AffineIntervalFn {
            a: Interval::from_ints(1, 2),
            b: Interval::zero(),
        };
        let tm_bad = TaylorModel::new(p.clone(), bad, rat(1, 10), init.clone());
        let rep = check_initial_premise(&tm_bad, &init);
        assert!(!rep.pass);
        assert!(!rep.zero_in_remainder);

        // scaled initial set breaks the polynomial identity
        let scaled = Zonotope::new(
            init.center().clone(),
            &init.generators().clone() * &rat(11, 10),
            vec![DimRole::State; 3],
        );
        let tm = TaylorModel::new(p, slopes, rat(1, 10), init);
        let rep = check_initial_premise(&tm, &scaled);
        assert!(!rep.pass);
        assert!(!rep.polynomial_identity);
    }

    #[test]
    fn synthesize_double_integrator_stays_below_paper_bounds() {
        let sys = double_integrator();
        let init = unit_box_zonotope(3);
        let tm = build_taylor_model(&sys, &init, &Config::default()).unwrap();
        assert!(tm.is_valid());
        let paper = [
            rat(101020, 100_000_000_000),
            rat(1, 1_000_000),
            rat(1, 1_000_000),
        ];
        for (r, bound) in tm.remainders.iter().zip(&paper) {
            assert!(&r.b.hi <= bound, "slope {:?} above {:?}", r.b.hi, bound);
        }
    }

    #[test]
    fn synthesize_zero_field_takes_first_candidate() {
        let s = VarSpace::states(2);
        let f = PolyVector(vec![Polynomial::zero(s.clone()), Polynomial::zero(s)]);
        let sys = OdeSystem::new(f, RVector::zeros(2), rat(1, 10));
        let init = unit_box_zonotope(2);
        let tm = build_taylor_model(&sys, &init, &Config::default()).unwrap();
        for r in &tm.remainders {
            assert_eq!(r.b.hi, rat(1, 1_000_000));
        }
    }

    #[test]
    fn synthesize_stiff_system_gives_up() {
        // x' = 100 x over a full unit of time: the defect outgrows any
        // [-s t, s t] at order 1, so the search must hit its budget.
        let s = VarSpace::states(1);
        let f = PolyVector(vec![Polynomial::var(s, "x1").scale(&rat(100, 1))]);
        let sys = OdeSystem::new(f, RVector::zeros(1), rat(1, 1));
        let init = unit_box_zonotope(1);
        let h = h_from_zonotope(&init);
        let p = picard_iterate(&sys, &h, 1, 12).unwrap();
        let err = synthesize_remainder(&sys, &p, &init, &Config::default()).unwrap_err();
        assert!(matches!(err, TaylorError::NoValidRemainder(_)));
    }

    #[test]
    fn doubling_a_passing_model_still_passes() {
        let sys = double_integrator();
        let init = unit_box_zonotope(3);
        let tm = build_taylor_model(&sys, &init, &Config::default()).unwrap();
        let doubled = TaylorModel::new(
            tm.p.clone(),
            tm.remainders
                .iter()
                .map(|r| AffineIntervalFn {
                    a: r.a.clone(),
                    b: r.b.scale(&rat(2, 1)),
                })
                .collect(),
            tm.dt.clone(),
            tm.init.clone(),
        );
        assert!(
            check_derivative_premise(&doubled, &sys, &Config::default())
                .unwrap()
                .pass
        );
    }

    #[test]
    fn robust_mode_widens_the_defect() {
        let mut sys = double_integrator();
        sys.disturbance = RVector(vec![rat(1, 10), rat(1, 10), Rational::zero()]);
        let init = unit_box_zonotope(3);
        let h = h_from_zonotope(&init);
        let p = picard_iterate(&sys, &h, 2, 12).unwrap();
        let paper_slopes = vec![
            AffineIntervalFn::symmetric_slope(rat(101020, 100_000_000_000)),
            AffineIntervalFn::symmetric_slope(rat(1, 1_000_000)),
            AffineIntervalFn::symmetric_slope(rat(1, 1_000_000)),
        ];
        let tm = TaylorModel::new(p, paper_slopes, rat(1, 10), init.clone());
        let mut cfg = Config::default();
        // nominal reproduces the paper's bounds
        assert!(check_derivative_premise(&tm, &sys, &cfg).unwrap().pass);
        // robust mode cannot hide the 0.1-magnitude disturbance under them
        cfg.disturbance_mode = DisturbanceMode::Robust;
        assert!(!check_derivative_premise(&tm, &sys, &cfg).unwrap().pass);
        // but the search absorbs it with wider slopes
        let tm = build_taylor_model(&sys, &init, &cfg).unwrap();
        assert!(tm.is_valid());
        assert!(tm.remainders[0].b.hi > rat(1, 10));
    }
}
