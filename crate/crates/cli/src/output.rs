//! Report table printing and CSV plot-data emission.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use envcert_core::certify::{check_rci, Certificate, CheckReport, ProblemSpec};
use envcert_core::exact::fromfloat::to_f64;
use envcert_core::interval::IvBox;
use envcert_core::zono::Zonotope;

use crate::problem;

pub fn print_report(ps: &ProblemSpec, report: &CheckReport) {
    println!("problem: {} (dt = {})", ps.name, ps.sys.dt);
    println!("{:<18} {:<8} detail", "condition", "verdict");
    for c in &report.conditions {
        let mut detail = c.detail.clone();
        if detail.len() > 100 {
            detail.truncate(97);
            detail.push_str("...");
        }
        println!(
            "{:<18} {:<8} {}",
            c.condition.label(),
            c.verdict.to_string(),
            detail
        );
    }
    println!("{:<18} {}", "overall", report.overall);
}

fn write_polygon_csv(path: &Path, vertices: &[(f64, f64)]) -> Result<()> {
    let mut text = String::from("x,y\n");
    for (x, y) in vertices {
        text.push_str(&format!("{x},{y}\n"));
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn zonotope_polygon(z: &Zonotope, rows: (usize, usize)) -> Vec<(f64, f64)> {
    z.vertices_2d(rows)
        .into_iter()
        .map(|(x, y)| (to_f64(&x), to_f64(&y)))
        .collect()
}

fn box_polygon(b: &IvBox, rows: (usize, usize)) -> Vec<(f64, f64)> {
    let x = &b.0[rows.0];
    let y = &b.0[rows.1];
    let (xl, xh) = (to_f64(&x.lo), to_f64(&x.hi));
    let (yl, yh) = (to_f64(&y.lo), to_f64(&y.hi));
    vec![(xh, yh), (xl, yh), (xl, yl), (xh, yl)]
}

/// Emit CSV vertex polygons: envelope projection, both reach projections,
/// and (when a problem is available) the safety box.
pub fn plot_data(
    input: &Path,
    problem_path: Option<&Path>,
    rows_1based: (usize, usize),
    out_prefix: &Path,
    overrides: &[(String, String)],
) -> Result<u8> {
    let text = std::fs::read_to_string(input)
        .with_context(|| format!("cannot read {}", input.display()))?;
    let is_cert = serde_json::from_str::<serde_json::Value>(&text)
        .ok()
        .and_then(|v| v.get("schema").and_then(|s| s.as_str().map(String::from)))
        .is_some();

    let (envelope, reach_dt, reach_tube, safety): (
        Zonotope,
        Option<Zonotope>,
        Option<Zonotope>,
        Option<IvBox>,
    );
    if is_cert {
        let cert = Certificate::from_json(&text).map_err(|e| anyhow!("certificate: {e}"))?;
        let tm = cert
            .taylor_model
            .as_ref()
            .ok_or_else(|| anyhow!("certificate holds no taylor model"))?;
        envelope = tm.init.clone();
        reach_dt = cert.reach_discrete.clone();
        reach_tube = cert.reach_interval.clone();
        safety = match problem_path {
            Some(p) => {
                let json = std::fs::read_to_string(p)
                    .with_context(|| format!("cannot read {}", p.display()))?;
                let (_, spec) = problem::load_problem(&json, &[])?;
                Some(spec.x_safe.clone())
            }
            None => None,
        };
    } else {
        let (_, spec) = problem::load_problem(&text, overrides)?;
        let (_, cert) = check_rci(&spec);
        envelope = spec.envelope.clone();
        reach_dt = cert.reach_discrete.clone();
        reach_tube = cert.reach_interval.clone();
        safety = Some(spec.x_safe.clone());
    }

    let nx = envelope
        .roles()
        .iter()
        .filter(|r| matches!(r, envcert_core::zono::DimRole::State))
        .count();
    let (i, j) = rows_1based;
    if i == 0 || j == 0 || i > nx || j > nx || i == j {
        eprintln!("row indices must be distinct 1-based state rows (1..={nx})");
        return Ok(3);
    }
    let rows = (i - 1, j - 1);

    let prefix = out_prefix.to_string_lossy();
    let env_x = envelope.project_states();
    write_polygon_csv(
        Path::new(&format!("{prefix}_envelope.csv")),
        &zonotope_polygon(&env_x, rows),
    )?;
    let mut written = vec![format!("{prefix}_envelope.csv")];
    if let Some(z) = &reach_dt {
        let path = format!("{prefix}_reach_discrete.csv");
        write_polygon_csv(
            Path::new(&path),
            &zonotope_polygon(&z.project_states(), rows),
        )?;
        written.push(path);
    }
    if let Some(z) = &reach_tube {
        let path = format!("{prefix}_reach_interval.csv");
        write_polygon_csv(
            Path::new(&path),
            &zonotope_polygon(&z.project_states(), rows),
        )?;
        written.push(path);
    }
    if let Some(b) = &safety {
        let path = format!("{prefix}_safety_box.csv");
        write_polygon_csv(Path::new(&path), &box_polygon(b, rows))?;
        written.push(path);
    }
    for w in &written {
        println!("wrote {w}");
    }
    if reach_dt.is_none() && reach_tube.is_none() {
        bail!("no reach sets available to plot");
    }
    Ok(0)
}
