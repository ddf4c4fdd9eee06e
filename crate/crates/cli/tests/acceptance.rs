//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `-- --nocapture` to see them live).

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use envcert_cli::problem::load_problem;
use envcert_core::certify::{check_rci, sim, verify_certificate, Certificate, ProblemSpec};
use envcert_core::config::Config;
use envcert_core::contain::{check_containment, Containment};
use envcert_core::exact::fromfloat::to_f64;
use envcert_core::exact::{RMatrix, RVector, Rational};
use envcert_core::interval::AffineIntervalFn;
use envcert_core::poly::{PolyVector, Polynomial, VarSpace};
use envcert_core::taylor::{
    build_taylor_model, check_derivative_premise, check_initial_premise, h_from_zonotope,
    picard_iterate, synthesize_remainder, OdeSystem, TaylorModel,
};
use envcert_core::zono::{reach_interval, Zonotope};
use envcert_core::Verdict;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn problems_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

fn load(name: &str) -> ProblemSpec {
    let path = problems_dir().join(name);
    let json = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    load_problem(&json, &[]).expect("problem loads").1
}

fn report_line(n: u32, name: &str, pass: bool) {
    println!(
        "ACCEPTANCE {n} {name}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {n} ({name}) failed");
}

/// Double integrator in extended coordinates (x1, x2, u), no disturbance.
fn double_integrator_sys() -> OdeSystem {
    let s = VarSpace::states(3);
    let f = PolyVector(vec![
        Polynomial::var(s.clone(), "x2"),
        Polynomial::var(s.clone(), "x3"),
        Polynomial::zero(s),
    ]);
    OdeSystem::new(f, RVector::zeros(3), rat(1, 10))
}

/// Jet engine in extended coordinates (x1, x2, u), no disturbance.
fn jet_engine_sys() -> OdeSystem {
    let s = VarSpace::states(3);
    let x1 = Polynomial::var(s.clone(), "x1");
    let x2 = Polynomial::var(s.clone(), "x2");
    let u = Polynomial::var(s.clone(), "x3");
    let f1 = x2
        .neg()
        .sub(&x1.mul(&x1).scale(&rat(3, 2)))
        .sub(&x1.mul(&x1).mul(&x1).scale(&rat(1, 2)));
    let f = PolyVector(vec![f1, u, Polynomial::zero(s)]);
    OdeSystem::new(f, RVector::zeros(3), rat(1, 10))
}

fn unit_box(n: usize) -> Zonotope {
    Zonotope::state_space(RVector::zeros(n), RMatrix::identity(n))
}

/// Criterion 1: the order-2 flow polynomial of the double integrator
/// equals the reference rendering exactly, and the reference remainder
/// slopes satisfy the strict derivative premise. Exact, zero tolerance.
#[test]
fn acceptance_1_double_integrator_taylor_model() {
    let t0 = Instant::now();
    let sys = double_integrator_sys();
    let init = unit_box(3);
    let h = h_from_zonotope(&init);
    let p = picard_iterate(&sys, &h, 2, 12).unwrap();
    let rendered: Vec<String> = p.iter().map(|q| q.to_string()).collect();
    let expected = ["l1 + t*l2 + 1/2*t^2*l3", "l2 + t*l3", "l3"];
    let polys_match = rendered == expected;

    let slopes = [
        rat(101020, 100_000_000_000),
        rat(1, 1_000_000),
        rat(1, 1_000_000),
    ];
    let tm = TaylorModel::new(
        p,
        slopes
            .iter()
            .map(|s| AffineIntervalFn::symmetric_slope(s.clone()))
            .collect(),
        rat(1, 10),
        init.clone(),
    );
    let cfg = Config::default();
    let derivative = check_derivative_premise(&tm, &sys, &cfg).unwrap();
    let initial = check_initial_premise(&tm, &init);
    let elapsed = t0.elapsed();
    report_line(
        1,
        "double-integrator taylor model",
        polys_match && derivative.pass && initial.pass && elapsed.as_secs_f64() < 1.0,
    );
}

/// Criterion 2: the jet engine admits a synthesized remainder from the
/// unit box, and on the 3/10-scaled box the synthesized x1 slope stays
/// within a factor two of the reference bound 28605705206e-11.
#[test]
fn acceptance_2_jet_engine_taylor_model() {
    let t0 = Instant::now();
    let sys = jet_engine_sys();
    let cfg = Config::default();

    let unit_tm = build_taylor_model(&sys, &unit_box(3), &cfg);
    let unit_valid = matches!(&unit_tm, Ok(tm) if tm.is_valid());

    let scaled = Zonotope::state_space(RVector::zeros(3), &RMatrix::identity(3) * &rat(3, 10));
    let h = h_from_zonotope(&scaled);
    let p = picard_iterate(&sys, &h, 2, 12).unwrap();
    let tm = synthesize_remainder(&sys, &p, &scaled, &cfg).unwrap();
    let slope_x1 = tm.remainders[0].b.hi.clone();
    let bound = rat(2, 1) * rat(28_605_705_206, 100_000_000_000);
    let elapsed = t0.elapsed();
    println!("  jet x1 slope {slope_x1} vs bound {bound}");
    report_line(
        2,
        "jet-engine taylor model",
        unit_valid && tm.is_valid() && slope_x1 <= bound && elapsed.as_secs_f64() < 5.0,
    );
}

fn random_zonotope(rng: &mut ChaCha8Rng, p_range: std::ops::RangeInclusive<usize>) -> Zonotope {
    let p = rng.gen_range(p_range);
    let g = RMatrix::from_rows(
        (0..2)
            .map(|_| {
                (0..p)
                    .map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                    .collect()
            })
            .collect(),
    );
    let c = RVector(vec![
        Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=2)),
        Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=2)),
    ]);
    Zonotope::state_space(c, g)
}

/// Exact membership oracle: point inside the zonogon polygon.
fn point_in_zonogon(point: (&Rational, &Rational), z: &Zonotope) -> bool {
    let verts = z.vertices_2d((0, 1));
    match verts.len() {
        1 => point.0 == &verts[0].0 && point.1 == &verts[0].1,
        2 => {
            let (a, b) = (&verts[0], &verts[1]);
            let ab = (&b.0 - &a.0, &b.1 - &a.1);
            let ap = (point.0 - &a.0, point.1 - &a.1);
            let cross = &ab.0 * &ap.1 - &ab.1 * &ap.0;
            if !cross.is_zero() {
                return false;
            }
            // between a and b: 0 <= ap.ab <= ab.ab
            let dot = &ap.0 * &ab.0 + &ap.1 * &ab.1;
            let len = &ab.0 * &ab.0 + &ab.1 * &ab.1;
            !dot.is_negative() && dot <= len
        }
        _ => {
            for i in 0..verts.len() {
                let a = &verts[i];
                let b = &verts[(i + 1) % verts.len()];
                let edge = (&b.0 - &a.0, &b.1 - &a.1);
                let to_p = (point.0 - &a.0, point.1 - &a.1);
                let cross = &edge.0 * &to_p.1 - &edge.1 * &to_p.0;
                if cross.is_negative() {
                    return false;
                }
            }
            true
        }
    }
}

/// Brute-force containment oracle: every inner extreme point inside the
/// outer zonogon, all in exact arithmetic.
fn oracle_contained(inner: &Zonotope, outer: &Zonotope) -> bool {
    let p = inner.generators().cols();
    assert!(p <= 16, "oracle needs a small generator count");
    for mask in 0..(1u32 << p) {
        let mut x = inner.center()[0].clone();
        let mut y = inner.center()[1].clone();
        for j in 0..p {
            if mask >> j & 1 == 1 {
                x += &inner.generators()[(0, j)];
                y += &inner.generators()[(1, j)];
            } else {
                x -= &inner.generators()[(0, j)];
                y -= &inner.generators()[(1, j)];
            }
        }
        if !point_in_zonogon((&x, &y), outer) {
            return false;
        }
    }
    true
}

/// Criterion 3: certification is sound; every certified pair out of 500
/// random ones is confirmed by the brute-force vertex oracle.
#[test]
fn acceptance_3_containment_soundness() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let cfg = Config::default();
    let mut certified = 0usize;
    let mut confirmed = 0usize;
    for case in 0..500 {
        let outer = random_zonotope(&mut rng, 2..=6);
        let inner = if case % 2 == 0 {
            // likely-contained mode: inner generators are small outer combos
            let p_out = outer.generators().cols();
            let p_in = rng.gen_range(1..=4usize);
            let mut d = RMatrix::zeros(p_out, p_in);
            for i in 0..p_out {
                for j in 0..p_in {
                    d[(i, j)] = Rational::new(rng.gen_range(-2..=2), rng.gen_range(4..=9));
                }
            }
            let g = outer.generators().mat_mul(&d);
            let offset = RVector(vec![
                Rational::new(rng.gen_range(-1..=1), 8),
                Rational::new(rng.gen_range(-1..=1), 8),
            ]);
            Zonotope::state_space(outer.center() + &offset, g)
        } else {
            random_zonotope(&mut rng, 1..=6)
        };
        if let Containment::Certified { .. } = check_containment(&inner, &outer, &cfg) {
            certified += 1;
            if oracle_contained(&inner, &outer) {
                confirmed += 1;
            }
        }
    }
    let elapsed = t0.elapsed();
    println!("  certified {certified}/500, oracle-confirmed {confirmed}");
    report_line(
        3,
        "containment soundness",
        certified >= 100 && confirmed == certified && elapsed.as_secs_f64() < 60.0,
    );
}

/// Criterion 4: a 1.05-inflated copy re-certifies at least 95% of the time.
#[test]
fn acceptance_4_containment_completeness_at_slack() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let cfg = Config::default();
    let mut passes = 0usize;
    for _ in 0..200 {
        let inner = random_zonotope(&mut rng, 2..=6);
        let outer = inner.inflate(&rat(21, 20));
        if let Containment::Certified { .. } = check_containment(&inner, &outer, &cfg) {
            passes += 1;
        }
    }
    println!("  slack-pair pass rate {passes}/200");
    report_line(4, "containment completeness at slack", passes >= 190);
}

fn enclosure_check(ps: &ProblemSpec) -> bool {
    let cfg = &ps.config;
    let tm = build_taylor_model(&ps.sys, &ps.envelope, cfg).expect("taylor model");
    let tube = reach_interval(&tm, cfg).expect("reach tube");
    let hull = tube.interval_hull();
    let lo: Vec<f64> = hull.0.iter().map(|iv| to_f64(&iv.lo) - 1e-9).collect();
    let hi: Vec<f64> = hull.0.iter().map(|iv| to_f64(&iv.hi) + 1e-9).collect();
    let n = ps.nx + ps.nu;
    let p = ps.envelope.generators().cols();
    let c: Vec<f64> = ps.envelope.center().iter().map(to_f64).collect();
    let g: Vec<Vec<f64>> = (0..n)
        .map(|i| ps.envelope.generators().row(i).iter().map(to_f64).collect())
        .collect();
    let dt = to_f64(&ps.sys.dt);
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..100 {
        let lambda: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let mut state: Vec<f64> = (0..n)
            .map(|i| c[i] + g[i].iter().zip(&lambda).map(|(a, l)| a * l).sum::<f64>())
            .collect();
        let substeps = 100usize;
        let h = dt / substeps as f64;
        for sub in 1..=substeps {
            state = sim::rk4_step(&ps.sys.f, &state, h);
            if sub % (substeps / 10) == 0 {
                for i in 0..n {
                    if state[i] < lo[i] || state[i] > hi[i] {
                        println!(
                            "  escape at dim {i}: {} not in [{}, {}]",
                            state[i], lo[i], hi[i]
                        );
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Criterion 5: sampled trajectories of both case studies stay inside the
/// reach-tube hull (inflated by 1e-9) at ten checkpoints per period.
#[test]
fn acceptance_5_enclosure_sanity() {
    let di = enclosure_check(&load("double_integrator.json"));
    let jet = enclosure_check(&load("jet_engine.json"));
    report_line(5, "enclosure sanity", di && jet);
}

/// Collect JSON pointer paths of every mutable leaf.
fn leaf_paths(value: &serde_json::Value, prefix: String, out: &mut Vec<String>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                leaf_paths(v, format!("{prefix}/{k}"), out);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                leaf_paths(v, format!("{prefix}/{i}"), out);
            }
        }
        serde_json::Value::Null => {}
        _ => out.push(prefix),
    }
}

fn mutate_leaf(value: &mut serde_json::Value, path: &str) {
    let target = value.pointer_mut(path).expect("leaf exists");
    match target {
        serde_json::Value::String(s) => {
            if let Ok(r) = s.parse::<Rational>() {
                *s = (r + Rational::one()).to_string();
            } else {
                s.push('X');
            }
        }
        serde_json::Value::Number(n) => {
            let bumped = n.as_f64().unwrap_or(0.0) + 1.0;
            *target = serde_json::json!(bumped);
        }
        serde_json::Value::Bool(b) => {
            let flipped = !*b;
            *target = serde_json::json!(flipped);
        }
        _ => unreachable!("only leaves are mutated"),
    }
}

/// Criterion 6: round-trip verification reproduces the verdicts, fifty
/// random single-field mutations each break verification, and the
/// verifier path is float-free by source audit.
#[test]
fn acceptance_6_certificate_integrity() {
    let ps = load("double_integrator.json");
    let (report, cert) = check_rci(&ps);
    assert_eq!(report.overall, Verdict::Pass, "base problem must certify");

    let json = cert.to_json();
    let loaded = Certificate::from_json(&json).expect("round trip parse");
    let outcome = verify_certificate(&loaded, &ps).expect("round trip verify");
    let round_trip_ok = outcome.reproduced
        && outcome.report.overall == Verdict::Pass
        && outcome.report.verdict_set() == cert.verdicts;

    let base: serde_json::Value = serde_json::from_str(&json).unwrap();
    let mut paths = Vec::new();
    leaf_paths(&base, String::new(), &mut paths);
    assert!(paths.len() > 100, "certificate should have many leaves");
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut flipped = 0usize;
    for k in 0..50 {
        let path = &paths[rng.gen_range(0..paths.len())];
        let mut mutated = base.clone();
        mutate_leaf(&mut mutated, path);
        let text = serde_json::to_string(&mutated).unwrap();
        let verdict_flipped = match Certificate::from_json(&text) {
            Err(_) => true, // malformed
            Ok(c) => {
                // cmd_verify semantics: the problem spec is rebuilt under
                // the certificate's stored configuration.
                let mut ps2 = ps.clone();
                ps2.config = c.config.clone();
                match verify_certificate(&c, &ps2) {
                    Err(_) => true, // hash mismatch or malformed
                    Ok(o) => !o.reproduced || o.report.overall != Verdict::Pass,
                }
            }
        };
        if verdict_flipped {
            flipped += 1;
        } else {
            println!("  mutation {k} at {path} did not flip");
        }
    }

    let audit = envcert_core::selfcheck::audit_this_crate();
    if !audit.is_empty() {
        println!("  float audit violations: {audit:?}");
    }
    println!("  round_trip={round_trip_ok} mutations_flipped={flipped}/50");
    report_line(
        6,
        "certificate integrity",
        round_trip_ok && flipped == 50 && audit.is_empty(),
    );
}

/// Criterion 7: the CLI certifies both shipped problems end to end with a
/// definite verdict table and written certificates, under 30 seconds.
#[test]
fn acceptance_7_end_to_end_smoke() {
    let t0 = Instant::now();
    let bin = env!("CARGO_BIN_EXE_envcert");
    let tmp = std::env::temp_dir().join(format!("envcert-accept-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let mut all_ok = true;
    for name in ["double_integrator.json", "jet_engine.json"] {
        let problem = problems_dir().join(name);
        let cert_path = tmp.join(format!("{name}.cert.json"));
        let out = std::process::Command::new(bin)
            .arg("certify")
            .arg(&problem)
            .arg("--out")
            .arg(&cert_path)
            .output()
            .expect("binary runs");
        let stdout = String::from_utf8_lossy(&out.stdout);
        let definite = matches!(out.status.code(), Some(0) | Some(1));
        let has_table = stdout.contains("overall") && stdout.contains("invariance");
        let wrote = cert_path.exists();
        println!(
            "  {name}: exit {:?} table={has_table} cert={wrote}",
            out.status.code()
        );
        all_ok &= definite && has_table && wrote;

        // and the certificate re-verifies through the CLI
        let verify = std::process::Command::new(bin)
            .arg("verify")
            .arg(&cert_path)
            .arg(&problem)
            .output()
            .expect("binary runs");
        all_ok &= verify.status.code() == out.status.code();
    }
    let elapsed = t0.elapsed();
    println!("  total {:?}", elapsed);
    std::fs::remove_dir_all(&tmp).ok();
    report_line(
        7,
        "end-to-end smoke",
        all_ok && elapsed.as_secs_f64() < 30.0,
    );
}
