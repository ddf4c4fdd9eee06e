//! `envcert`: certify zonotopic control envelopes of polynomial
//! sampled-data systems and re-check the resulting certificates.

use envcert_cli::{output, problem};

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use envcert_core::certify::{
    check_rci, sim, verify_certificate, Certificate, ProblemSpec, VerifyError,
};
use envcert_core::exact::Rational;
use envcert_core::interval::AffineIntervalFn;
use envcert_core::taylor::{
    check_derivative_premise, check_initial_premise, h_from_zonotope, picard_iterate,
    synthesize_remainder, TaylorModel,
};
use envcert_core::zono::{reach_discrete, reach_interval};
use envcert_core::Verdict;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_HASH: u8 = 4;

#[derive(Parser)]
#[command(
    name = "envcert",
    version,
    about = "Certify zonotopic control envelopes with exact rational witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ConfigArgs {
    /// Override a config key, e.g. --config picard_order=3 or lp.tol=1e-6.
    #[arg(long = "config", value_name = "KEY=VALUE")]
    config: Vec<String>,
    /// Shorthand for --config picard_order=K.
    #[arg(long, value_name = "K")]
    picard_order: Option<u32>,
    /// Shorthand for --config inflate_outer=DELTA.
    #[arg(long, value_name = "DELTA")]
    inflate_outer: Option<String>,
}

impl ConfigArgs {
    fn overrides(&self) -> Result<Vec<(String, String)>> {
        let mut out = Vec::new();
        for kv in &self.config {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| anyhow!("--config expects KEY=VALUE, got {kv:?}"))?;
            out.push((k.to_string(), v.to_string()));
        }
        if let Some(k) = self.picard_order {
            out.push(("picard_order".into(), k.to_string()));
        }
        if let Some(d) = &self.inflate_outer {
            out.push(("inflate_outer".into(), d.clone()));
        }
        Ok(out)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write a certificate.
    Certify {
        problem: PathBuf,
        /// Certificate output path (default: `<problem>.cert.json`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Re-verify a certificate against its problem, exactly.
    Verify { cert: PathBuf, problem: PathBuf },
    /// Print the Picard polynomial and remainder slopes.
    Taylor {
        problem: PathBuf,
        /// Picard order (overrides config).
        #[arg(long, value_name = "K")]
        order: Option<u32>,
        /// Validate user-supplied slopes instead of synthesizing.
        #[arg(long, value_name = "SLOPES_JSON")]
        check_bounds: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Print the reach zonotopes for the sampling instant and interval.
    Reach {
        problem: PathBuf,
        /// Write them as JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Emit CSV vertex polygons for plotting.
    PlotData {
        /// A problem file or a certificate file.
        input: PathBuf,
        /// Problem file (required when input is a certificate and the
        /// safety box should be plotted).
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Two 1-based state row indices to project onto.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        rows: Vec<usize>,
        /// Output prefix; files become `<prefix>_envelope.csv` etc.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Float RK4 sanity rollouts (advisory only).
    Simulate {
        problem: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_spec(path: &Path, config: &ConfigArgs) -> Result<ProblemSpec> {
    let json = read_file(path)?;
    let overrides = config.overrides()?;
    let (_, spec) = problem::load_problem(&json, &overrides)?;
    Ok(spec)
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn cmd_certify(problem: &Path, out: Option<&Path>, config: &ConfigArgs) -> Result<u8> {
    let ps = load_spec(problem, config)?;
    let (report, cert) = check_rci(&ps);
    output::print_report(&ps, &report);
    let out_path = match out {
        Some(p) => p.to_path_buf(),
        None => problem.with_extension("cert.json"),
    };
    std::fs::write(&out_path, cert.to_json())
        .with_context(|| format!("cannot write {}", out_path.display()))?;
    println!("certificate written to {}", out_path.display());
    Ok(verdict_exit(report.overall))
}

fn cmd_verify(cert_path: &Path, problem: &Path) -> Result<u8> {
    let cert_json = read_file(cert_path)?;
    let cert = match Certificate::from_json(&cert_json) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("malformed certificate: {e}");
            return Ok(EXIT_INPUT);
        }
    };
    // The certificate's stored configuration reproduces the problem spec,
    // including how the problem file's literals were parsed.
    let json = read_file(problem)?;
    let ps = problem::load_problem_with_config(&json, cert.config.clone())?;
    match verify_certificate(&cert, &ps) {
        Ok(outcome) => {
            output::print_report(&ps, &outcome.report);
            for issue in &outcome.issues {
                println!("issue: {issue}");
            }
            if outcome.reproduced && outcome.report.overall == Verdict::Pass {
                println!("verification: all verdicts reproduce as PASS");
                Ok(EXIT_PASS)
            } else if outcome.reproduced {
                println!(
                    "verification: verdicts reproduce, overall {}",
                    outcome.report.overall
                );
                Ok(verdict_exit(outcome.report.overall))
            } else {
                println!("verification: certificate does NOT reproduce");
                Ok(EXIT_FAIL)
            }
        }
        Err(VerifyError::HashMismatch) => {
            eprintln!("problem hash mismatch: certificate was issued for a different problem");
            Ok(EXIT_HASH)
        }
        Err(VerifyError::Malformed(m)) => {
            eprintln!("malformed certificate: {m}");
            Ok(EXIT_INPUT)
        }
    }
}

fn cmd_taylor(
    problem: &Path,
    order: Option<u32>,
    check_bounds: Option<&Path>,
    config: &ConfigArgs,
) -> Result<u8> {
    let mut config = config.clone();
    if let Some(k) = order {
        config.config.push(format!("picard_order={k}"));
    }
    let ps = load_spec(problem, &config)?;
    let h = h_from_zonotope(&ps.envelope);
    let p = picard_iterate(&ps.sys, &h, ps.config.picard_order, ps.config.degree_cap)
        .map_err(|e| anyhow!("picard iteration failed: {e}"))?;
    println!("picard order {}:", ps.config.picard_order);
    for (i, poly) in p.iter().enumerate() {
        println!("  p[{}] = {}", dim_name(&ps, i), poly);
    }
    match check_bounds {
        Some(path) => {
            let slopes = problem::parse_slopes(&read_file(path)?)?;
            if slopes.len() != ps.nx + ps.nu {
                bail!("expected {} slopes, found {}", ps.nx + ps.nu, slopes.len());
            }
            if slopes.iter().any(Rational::is_negative) {
                bail!("slopes must be non-negative");
            }
            let tm = TaylorModel::new(
                p,
                slopes
                    .iter()
                    .map(|s| AffineIntervalFn::symmetric_slope(s.clone()))
                    .collect(),
                ps.sys.dt.clone(),
                ps.envelope.clone(),
            );
            let derivative = check_derivative_premise(&tm, &ps.sys, &ps.config)
                .map_err(|e| anyhow!("premise check failed: {e}"))?;
            let initial = check_initial_premise(&tm, &ps.envelope);
            for (i, m) in derivative.margins.iter().enumerate() {
                println!(
                    "  {}: slope {} -> {} (margins {} / {})",
                    dim_name(&ps, i),
                    slopes[i],
                    if m.pass() { "PASS" } else { "FAIL" },
                    m.lo_margin,
                    m.hi_margin
                );
            }
            println!(
                "  initial premise: {}",
                if initial.pass { "PASS" } else { "FAIL" }
            );
            Ok(if derivative.pass && initial.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            })
        }
        None => match synthesize_remainder(&ps.sys, &p, &ps.envelope, &ps.config) {
            Ok(tm) => {
                println!("remainder slopes (I(t) = [-s*t, s*t]):");
                for (i, r) in tm.remainders.iter().enumerate() {
                    println!("  {}: s = {}", dim_name(&ps, i), r.b.hi);
                }
                Ok(EXIT_PASS)
            }
            Err(e) => {
                eprintln!("no valid remainder: {e}");
                Ok(EXIT_UNKNOWN)
            }
        },
    }
}

fn dim_name(ps: &ProblemSpec, i: usize) -> String {
    if i < ps.nx {
        format!("x{}", i + 1)
    } else {
        format!("u{}", i + 1 - ps.nx)
    }
}

fn cmd_reach(problem: &Path, out: Option<&Path>, config: &ConfigArgs) -> Result<u8> {
    let ps = load_spec(problem, config)?;
    let tm = envcert_core::taylor::build_taylor_model(&ps.sys, &ps.envelope, &ps.config)
        .map_err(|e| anyhow!("taylor model construction failed: {e}"))?;
    let rd = reach_discrete(&tm, &ps.config).map_err(|e| anyhow!("{e}"))?;
    let ri = reach_interval(&tm, &ps.config).map_err(|e| anyhow!("{e}"))?;
    let doc = serde_json::json!({
        "reach_discrete": rd,
        "reach_interval": ri,
    });
    let text = serde_json::to_string_pretty(&doc).expect("reach serialization");
    match out {
        Some(p) => {
            std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?;
            println!("reach sets written to {}", p.display());
        }
        None => println!("{text}"),
    }
    Ok(EXIT_PASS)
}

fn cmd_plot_data(
    input: &Path,
    problem: Option<&Path>,
    rows: &[usize],
    out: &Path,
    config: &ConfigArgs,
) -> Result<u8> {
    if rows.len() != 2 {
        bail!("--rows expects exactly two indices");
    }
    output::plot_data(
        input,
        problem,
        (rows[0], rows[1]),
        out,
        &config.overrides()?,
    )
}

fn cmd_simulate(problem: &Path, samples: usize, seed: u64, config: &ConfigArgs) -> Result<u8> {
    let ps = load_spec(problem, config)?;
    let tube = envcert_core::taylor::build_taylor_model(&ps.sys, &ps.envelope, &ps.config)
        .ok()
        .and_then(|tm| reach_interval(&tm, &ps.config).ok());
    let report = sim::simulate_sanity(&ps, tube.as_ref(), samples, seed);
    println!("{}", report.text);
    Ok(EXIT_PASS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Certify {
            problem,
            out,
            config,
        } => cmd_certify(problem, out.as_deref(), config),
        Command::Verify { cert, problem } => cmd_verify(cert, problem),
        Command::Taylor {
            problem,
            order,
            check_bounds,
            config,
        } => cmd_taylor(problem, *order, check_bounds.as_deref(), config),
        Command::Reach {
            problem,
            out,
            config,
        } => cmd_reach(problem, out.as_deref(), config),
        Command::PlotData {
            input,
            problem,
            rows,
            out,
            config,
        } => cmd_plot_data(input, problem.as_deref(), rows, out, config),
        Command::Simulate {
            problem,
            samples,
            seed,
            config,
        } => cmd_simulate(problem, *samples, *seed, config),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
