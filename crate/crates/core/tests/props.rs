//! Property and oracle tests: exactness round trips, algebraic identities,
//! soundness fuzzing of the interval evaluator and reach constructions.

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use envcert_core::config::Config;
use envcert_core::contain::{check_containment, Containment};
use envcert_core::exact::fromfloat::{rationalize, to_f64, RationalizeMode};
use envcert_core::exact::{mat_inf_norm, right_inverse, RMatrix, RVector, Rational};
use envcert_core::interval::{eval_poly, Interval, IvBox};
use envcert_core::poly::{PolyVector, Polynomial, VarSpace};
use envcert_core::taylor::{build_taylor_model, OdeSystem};
use envcert_core::zono::{reach_discrete, reach_interval, Zonotope};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| Rational::new(n, d))
}

proptest! {
    #[test]
    fn add_sub_round_trip(a in arb_rational(), b in arb_rational()) {
        prop_assert_eq!((a.clone() + b.clone()) - b, a);
    }

    #[test]
    fn mul_div_round_trip(a in arb_rational(), b in arb_rational()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((a.clone() * b.clone()) / b, a);
    }

    #[test]
    fn dyadic_round_trip_is_identity(v in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
        let r = rationalize(v, 1, RationalizeMode::Dyadic).unwrap();
        prop_assert_eq!(to_f64(&r), v);
    }
}

/// Random full-row-rank matrix with entries in {-9..9}/{1..9}.
fn random_full_rank(rng: &mut ChaCha8Rng) -> RMatrix {
    loop {
        let r = rng.gen_range(1..=4usize);
        let k = rng.gen_range(r..=8usize);
        let m = RMatrix::from_rows(
            (0..r)
                .map(|_| {
                    (0..k)
                        .map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                        .collect()
                })
                .collect(),
        );
        if right_inverse(&m).is_ok() {
            return m;
        }
    }
}

#[test]
fn right_inverse_holds_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let h = random_full_rank(&mut rng);
        let hp = right_inverse(&h).unwrap();
        assert_eq!(h.mat_mul(&hp), RMatrix::identity(h.rows()));
    }
}

#[test]
fn inf_norm_is_submultiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4usize);
        let m = rng.gen_range(1..=4usize);
        let k = rng.gen_range(1..=4usize);
        let rand_mat = |rng: &mut ChaCha8Rng, r: usize, c: usize| {
            RMatrix::from_rows(
                (0..r)
                    .map(|_| {
                        (0..c)
                            .map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                            .collect()
                    })
                    .collect(),
            )
        };
        let a = rand_mat(&mut rng, n, m);
        let b = rand_mat(&mut rng, m, k);
        assert!(mat_inf_norm(&a.mat_mul(&b)) <= mat_inf_norm(&a) * mat_inf_norm(&b));
    }
}

/// Random polynomial over the given space, with bounded degree and terms.
fn random_poly(rng: &mut ChaCha8Rng, space: &std::sync::Arc<VarSpace>, max_deg: u32) -> Polynomial {
    let terms = rng.gen_range(1..=6usize);
    let nvars = space.len();
    Polynomial::from_terms(
        space.clone(),
        (0..terms).map(|_| {
            let mut exps = vec![0u32; nvars];
            let mut budget = max_deg;
            for e in exps.iter_mut() {
                let d = rng.gen_range(0..=budget.min(3));
                *e = d;
                budget -= d;
            }
            (
                exps,
                Rational::new(rng.gen_range(-20..=20), rng.gen_range(1..=10)),
            )
        }),
    )
}

#[test]
fn derivative_undoes_time_integration() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..500 {
        let nvars = rng.gen_range(0..=4usize);
        let space = VarSpace::time_lambda(nvars);
        let p = random_poly(&mut rng, &space, 6);
        assert_eq!(p.integrate_time().partial("t"), p);
    }
}

#[test]
fn substitution_is_a_ring_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let space = VarSpace::time_lambda(2);
    for _ in 0..100 {
        let a = random_poly(&mut rng, &space, 3);
        let b = random_poly(&mut rng, &space, 3);
        let image = random_poly(&mut rng, &space, 2);
        let mut bindings = std::collections::BTreeMap::new();
        bindings.insert("l1".to_string(), image);
        assert_eq!(
            a.mul(&b).substitute(&bindings),
            a.substitute(&bindings).mul(&b.substitute(&bindings))
        );
        assert_eq!(
            a.add(&b).substitute(&bindings),
            a.substitute(&bindings).add(&b.substitute(&bindings))
        );
    }
}

#[test]
fn gradient_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let space = VarSpace::time_lambda(3);
    for _ in 0..100 {
        let a = random_poly(&mut rng, &space, 4);
        let b = random_poly(&mut rng, &space, 4);
        let ga = a.gradient(&["l1", "l2", "l3"]);
        let gb = b.gradient(&["l1", "l2", "l3"]);
        let gsum = a.add(&b).gradient(&["l1", "l2", "l3"]);
        for i in 0..3 {
            assert_eq!(gsum[i], ga[i].add(&gb[i]));
        }
    }
}

fn random_box(rng: &mut ChaCha8Rng, dim: usize) -> IvBox {
    IvBox(
        (0..dim)
            .map(|_| {
                let a = Rational::new(rng.gen_range(-8..=8), rng.gen_range(1..=4));
                let b = Rational::new(rng.gen_range(-8..=8), rng.gen_range(1..=4));
                Interval::new(a.clone().min(b.clone()), a.max(b))
            })
            .collect(),
    )
}

fn random_point_in(rng: &mut ChaCha8Rng, b: &IvBox) -> Vec<Rational> {
    b.0.iter()
        .map(|iv| {
            // random rational convex combination of the endpoints
            let t = Rational::new(rng.gen_range(0..=64), 64);
            &iv.lo + &((&iv.hi - &iv.lo) * t)
        })
        .collect()
}

#[test]
fn interval_evaluation_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..1000 {
        let nvars = rng.gen_range(1..=3usize);
        let space = VarSpace::states(nvars);
        let p = random_poly(&mut rng, &space, 5);
        let dom = random_box(&mut rng, nvars);
        let enc = eval_poly(&p, &dom);
        for _ in 0..100 {
            let point = random_point_in(&mut rng, &dom);
            let v = p.eval(&point);
            assert!(
                enc.contains(&v),
                "point value {v:?} escapes enclosure {enc:?}"
            );
        }
    }
}

#[test]
fn even_power_tightens_the_naive_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..200 {
        let b = random_box(&mut rng, 1);
        let iv = &b.0[0];
        let sq = iv.pow(2);
        let naive = iv.mul(iv);
        assert!(naive.contains_interval(&sq));
        if iv.lo.is_negative() && iv.hi.is_positive() {
            assert!(sq.lo > naive.lo);
        }
    }
}

/// Double integrator in extended coordinates, no disturbance.
fn double_integrator() -> OdeSystem {
    let s = VarSpace::states(3);
    let f = PolyVector(vec![
        Polynomial::var(s.clone(), "x2"),
        Polynomial::var(s.clone(), "x3"),
        Polynomial::zero(s),
    ]);
    OdeSystem::new(f, RVector::zeros(3), rat(1, 10))
}

fn rk4_trajectory(sys: &OdeSystem, x0: &[f64], t_end: f64, steps: usize) -> Vec<f64> {
    let h = t_end / steps as f64;
    let mut x = x0.to_vec();
    for _ in 0..steps {
        x = envcert_core::certify::sim::rk4_step(&sys.f, &x, h);
    }
    x
}

#[test]
fn taylor_model_encloses_sampled_trajectories() {
    let sys = double_integrator();
    let init = Zonotope::state_space(RVector::zeros(3), RMatrix::identity(3));
    let tm = build_taylor_model(&sys, &init, &Config::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let dt = to_f64(&sys.dt);
    for _ in 0..100 {
        let lambda: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        for frac in [0.25, 0.5, 1.0] {
            let t = dt * frac;
            // step size dt/1000
            let x = rk4_trajectory(&sys, &lambda, t, (1000.0 * frac) as usize);
            for i in 0..3 {
                let p_val = envcert_core::certify::sim::poly_eval_f64(&tm.p[i], &{
                    let mut point = vec![t];
                    point.extend(&lambda);
                    point
                });
                let bound = to_f64(&tm.remainders[i].b.hi) * t + 1e-9;
                assert!(
                    (x[i] - p_val).abs() <= bound,
                    "dim {i}: deviation {} exceeds {}",
                    (x[i] - p_val).abs(),
                    bound
                );
            }
        }
    }
}

#[test]
fn reach_sets_enclose_sampled_endpoints() {
    let sys = double_integrator();
    let init = Zonotope::state_space(RVector::zeros(3), &RMatrix::identity(3) * &rat(1, 2));
    let cfg = Config::default();
    let tm = build_taylor_model(&sys, &init, &cfg).unwrap();
    let rd = reach_discrete(&tm, &cfg).unwrap();
    let ri = reach_interval(&tm, &cfg).unwrap();
    let rd_hull = rd.interval_hull();
    let ri_hull = ri.interval_hull();
    let dt = to_f64(&sys.dt);
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut exact_checked = 0;
    for sample in 0..60 {
        let lambda: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let x0: Vec<f64> = lambda.iter().map(|l| 0.5 * l).collect();
        let x_end = rk4_trajectory(&sys, &x0, dt, 250);
        for i in 0..3 {
            let lo = to_f64(&rd_hull.0[i].lo) - 1e-9;
            let hi = to_f64(&rd_hull.0[i].hi) + 1e-9;
            assert!(x_end[i] >= lo && x_end[i] <= hi, "endpoint outside hull");
            let lo = to_f64(&ri_hull.0[i].lo) - 1e-9;
            let hi = to_f64(&ri_hull.0[i].hi) + 1e-9;
            assert!(
                x_end[i] >= lo && x_end[i] <= hi,
                "endpoint outside tube hull"
            );
        }
        // Exact membership of the endpoint in the reach zonotopes via the
        // witness route on a point zonotope, for a few samples.
        if sample < 20 {
            // The double integrator map is exact on rationals: reproduce
            // the endpoint exactly instead of trusting the float RK4.
            let l: Vec<Rational> = lambda
                .iter()
                .map(|&v| rationalize(v, 1, RationalizeMode::Dyadic).unwrap())
                .collect();
            let half = rat(1, 2);
            let x1 = &half * &l[0];
            let x2 = &half * &l[1];
            let u = &half * &l[2];
            let dtr = rat(1, 10);
            let end = RVector(vec![
                &x1 + &(&(&dtr * &x2) + &(&(&dtr * &dtr) * &(&u * &rat(1, 2)))),
                &x2 + &(&dtr * &u),
                u.clone(),
            ]);
            let point = Zonotope::state_space(end, RMatrix::zeros(3, 0));
            match check_containment(&point, &rd, &cfg) {
                Containment::Certified { .. } => exact_checked += 1,
                other => panic!("exact endpoint membership failed: {other:?}"),
            }
            match check_containment(&point, &ri, &cfg) {
                Containment::Certified { .. } => {}
                other => panic!("exact tube membership failed: {other:?}"),
            }
        }
    }
    assert_eq!(exact_checked, 20);
}

#[test]
fn zonogon_vertices_match_brute_force_hull() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for _ in 0..60 {
        let p = rng.gen_range(0..=10usize);
        let g = RMatrix::from_rows(
            (0..2)
                .map(|_| {
                    (0..p)
                        .map(|_| Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
                        .collect()
                })
                .collect(),
        );
        let c = RVector(vec![
            Rational::new(rng.gen_range(-3..=3), 1),
            Rational::new(rng.gen_range(-3..=3), 1),
        ]);
        let z = Zonotope::state_space(c.clone(), g.clone());
        let vertices = z.vertices_2d((0, 1));
        let hull = brute_force_hull(&c, &g);
        assert_eq!(
            canonical_cycle(&vertices),
            canonical_cycle(&hull),
            "vertices {vertices:?} vs hull {hull:?}"
        );
    }
}

/// Convex hull of the 2^p extreme points, via exact monotone chain.
fn brute_force_hull(c: &RVector, g: &RMatrix) -> Vec<(Rational, Rational)> {
    let p = g.cols();
    let mut points = Vec::new();
    for mask in 0..(1u32 << p) {
        let mut x = c[0].clone();
        let mut y = c[1].clone();
        for j in 0..p {
            if mask >> j & 1 == 1 {
                x += &g[(0, j)];
                y += &g[(1, j)];
            } else {
                x -= &g[(0, j)];
                y -= &g[(1, j)];
            }
        }
        points.push((x, y));
    }
    points.sort();
    points.dedup();
    if points.len() <= 2 {
        return points;
    }
    let cross = |o: &(Rational, Rational), a: &(Rational, Rational), b: &(Rational, Rational)| {
        &(&(&a.0 - &o.0) * &(&b.1 - &o.1)) - &(&(&a.1 - &o.1) * &(&b.0 - &o.0))
    };
    let mut lower: Vec<(Rational, Rational)> = Vec::new();
    for pt in &points {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], pt).is_positive()
        {
            lower.pop();
        }
        lower.push(pt.clone());
    }
    let mut upper: Vec<(Rational, Rational)> = Vec::new();
    for pt in points.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], pt).is_positive()
        {
            upper.pop();
        }
        upper.push(pt.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Rotate a CCW vertex cycle so it starts at the lexicographic minimum.
fn canonical_cycle(v: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    if v.is_empty() {
        return Vec::new();
    }
    let start = v
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    let mut out = Vec::with_capacity(v.len());
    for i in 0..v.len() {
        out.push(v[(start + i) % v.len()].clone());
    }
    out
}
