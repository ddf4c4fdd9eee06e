//! Problem-file ingestion: JSON schema, the polynomial expression parser,
//! and assembly into a `ProblemSpec`.
//!
//! Dynamics are written per state dimension over `x1..xn`, `u1..um` and
//! `w1..wq`; disturbances must enter additively (a linear `w` term with a
//! constant coefficient). Held inputs get implicit zero derivative rows.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use envcert_core::certify::ProblemSpec;
use envcert_core::config::Config;
use envcert_core::exact::fromfloat::rationalize;
use envcert_core::exact::{RMatrix, RVector, Rational};
use envcert_core::interval::{Interval, IvBox};
use envcert_core::poly::{PolyVector, Polynomial, Var, VarRole, VarSpace};
use envcert_core::taylor::OdeSystem;
use envcert_core::zono::{DimRole, Zonotope};

#[derive(Debug, Deserialize)]
pub struct ZonotopeFile {
    pub c: Vec<String>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
pub struct ProblemFile {
    #[serde(default)]
    pub name: String,
    pub dt: String,
    pub state_dim: usize,
    pub input_dim: usize,
    /// One polynomial string per state dimension.
    pub dynamics: Vec<String>,
    /// Bounds for w1..wq; may be empty when the dynamics mention no w.
    #[serde(default)]
    pub disturbance: Vec<String>,
    /// Safety box over x: one [lo, hi] pair per state.
    pub state_box: Vec<[String; 2]>,
    /// Admissible-input box over u.
    pub input_box: Vec<[String; 2]>,
    pub envelope: ZonotopeFile,
    pub x0: ZonotopeFile,
    #[serde(default)]
    pub config: serde_json::Value,
}

fn parse_rational(s: &str, what: &str) -> Result<Rational> {
    s.parse::<Rational>().map_err(|e| anyhow!("{what}: {e}"))
}

fn parse_vector(v: &[String], what: &str) -> Result<RVector> {
    Ok(RVector(
        v.iter()
            .map(|s| parse_rational(s, what))
            .collect::<Result<_>>()?,
    ))
}

fn parse_matrix(m: &[Vec<String>], what: &str) -> Result<RMatrix> {
    let cols = m.first().map_or(0, |r| r.len());
    if m.iter().any(|r| r.len() != cols) {
        bail!("{what}: ragged generator matrix");
    }
    let rows = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_rational(s, what))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RMatrix::from_rows(rows))
}

fn parse_box(pairs: &[[String; 2]], what: &str) -> Result<IvBox> {
    let ivs = pairs
        .iter()
        .map(|[lo, hi]| {
            let lo = parse_rational(lo, what)?;
            let hi = parse_rational(hi, what)?;
            if lo > hi {
                bail!("{what}: interval endpoints out of order");
            }
            Ok(Interval::new(lo, hi))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IvBox(ivs))
}

fn parse_zonotope(z: &ZonotopeFile, roles: Vec<DimRole>, what: &str) -> Result<Zonotope> {
    let c = parse_vector(&z.c, what)?;
    let g = if z.g.is_empty() {
        RMatrix::zeros(c.len(), 0)
    } else {
        parse_matrix(&z.g, what)?
    };
    if g.rows() != c.len() || c.len() != roles.len() {
        bail!("{what}: center/generator dimensions disagree");
    }
    Ok(Zonotope::new(c, g, roles))
}

/// Tokenizer for polynomial expressions.
#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str, cfg: &Config) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                let mut saw_dot = false;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                    if bytes[i] == '.' {
                        if saw_dot {
                            bail!("malformed number in {src:?}");
                        }
                        saw_dot = true;
                    }
                    i += 1;
                }
                let lit: String = bytes[start..i].iter().collect();
                let value = if saw_dot {
                    // Decimal literals go through the configured float
                    // conversion; dyadic keeps the exact binary value.
                    let f: f64 = lit
                        .parse()
                        .with_context(|| format!("bad numeric literal {lit:?}"))?;
                    rationalize(f, cfg.cfrac_max_denominator, cfg.literal_mode)
                        .map_err(|e| anyhow!("literal {lit:?}: {e}"))?
                } else {
                    parse_rational(&lit, "integer literal")?
                };
                toks.push(Tok::Num(value));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(bytes[start..i].iter().collect()));
            }
            other => bail!("unexpected character {other:?} in polynomial {src:?}"),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    space: Arc<VarSpace>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Star => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    self.pos += 1;
                    let divisor = self.unary()?;
                    let c = constant_of(&divisor)
                        .ok_or_else(|| anyhow!("division only by nonzero constants"))?;
                    if c.is_zero() {
                        bail!("division by zero");
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let exp = match self.next() {
                Some(Tok::Num(n)) => n
                    .to_integer_u32()
                    .ok_or_else(|| anyhow!("exponent must be a non-negative integer"))?,
                other => bail!("expected integer exponent, got {other:?}"),
            };
            let mut acc = Polynomial::constant(self.space.clone(), Rational::one());
            for _ in 0..exp {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Polynomial::constant(self.space.clone(), n)),
            Some(Tok::Ident(name)) => {
                if self.space.index_of(&name).is_none() {
                    bail!("unknown variable {name:?}");
                }
                Ok(Polynomial::var(self.space.clone(), &name))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => bail!("missing closing parenthesis"),
                }
            }
            other => bail!("unexpected token {other:?}"),
        }
    }
}

fn constant_of(p: &Polynomial) -> Option<Rational> {
    if p.is_zero() {
        return Some(Rational::zero());
    }
    if p.total_degree() == 0 {
        let point = vec![Rational::zero(); p.space().len()];
        return Some(p.eval(&point));
    }
    None
}

/// Parse one dynamics string over the extended+disturbance space.
fn parse_dynamics_poly(src: &str, space: &Arc<VarSpace>, cfg: &Config) -> Result<Polynomial> {
    let toks = lex(src, cfg)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        space: space.clone(),
    };
    let poly = p.expr()?;
    if p.pos != toks.len() {
        bail!("trailing input in polynomial {src:?}");
    }
    Ok(poly)
}

/// Variable space for parsing: x1..xnx, u1..unu (all State role for the
/// extended plant), then w1..wq as Disturbance.
fn parse_space(nx: usize, nu: usize, nw: usize) -> Arc<VarSpace> {
    let mut vars: Vec<Var> = Vec::new();
    for i in 1..=nx {
        vars.push(Var {
            name: format!("x{i}"),
            role: VarRole::State,
        });
    }
    for j in 1..=nu {
        vars.push(Var {
            name: format!("u{j}"),
            role: VarRole::State,
        });
    }
    for k in 1..=nw {
        vars.push(Var {
            name: format!("w{k}"),
            role: VarRole::Disturbance,
        });
    }
    VarSpace::new(vars)
}

/// Split a parsed dynamics polynomial into its nominal part (over x/u) and
/// the additive disturbance magnitude it contributes.
fn split_disturbance(
    poly: &Polynomial,
    parse_sp: &Arc<VarSpace>,
    w_bounds: &[Rational],
    nx: usize,
    nu: usize,
) -> Result<(Polynomial, Rational)> {
    let w_indices = parse_sp.indices_with_role(VarRole::Disturbance);
    let mut nominal_terms: Vec<(Vec<u32>, Rational)> = Vec::new();
    let mut w_total = Rational::zero();
    for (m, c) in poly.terms() {
        let w_degree: u32 = w_indices.iter().map(|&i| m.0[i]).sum();
        if w_degree == 0 {
            nominal_terms.push((m.0[..nx + nu].to_vec(), c.clone()));
            continue;
        }
        if w_degree != 1 || m.total_degree() != 1 {
            bail!("disturbances must enter additively (pure linear w terms)");
        }
        let k = w_indices
            .iter()
            .position(|&i| m.0[i] == 1)
            .expect("w exponent present");
        let bound = w_bounds
            .get(k)
            .ok_or_else(|| anyhow!("w{} has no disturbance bound", k + 1))?;
        w_total += &(c.abs() * bound.clone());
    }
    let state_space = VarSpace::states(nx + nu);
    Ok((Polynomial::from_terms(state_space, nominal_terms), w_total))
}

/// Assemble the full problem. `overrides` apply on top of the file config.
pub fn load_problem(
    json: &str,
    overrides: &[(String, String)],
) -> Result<(ProblemFile, ProblemSpec)> {
    let file: ProblemFile = serde_json::from_str(json).context("problem file does not parse")?;
    let mut config = Config::default();
    if !file.config.is_null() {
        let obj = file
            .config
            .as_object()
            .ok_or_else(|| anyhow!("config must be an object"))?;
        for (k, v) in obj {
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            config
                .set_key(k, &text)
                .map_err(|e| anyhow!("config: {e}"))?;
        }
    }
    for (k, v) in overrides {
        config.set_key(k, v).map_err(|e| anyhow!("config: {e}"))?;
    }
    let spec = assemble(&file, config)?;
    Ok((file, spec))
}

/// Assemble the problem under a fully specified configuration, ignoring
/// the file's own config section. Re-verification parses the problem
/// under the certificate's stored configuration so that literal handling
/// matches the run that produced the certificate.
pub fn load_problem_with_config(json: &str, config: Config) -> Result<ProblemSpec> {
    let file: ProblemFile = serde_json::from_str(json).context("problem file does not parse")?;
    assemble(&file, config)
}

fn assemble(file: &ProblemFile, config: Config) -> Result<ProblemSpec> {
    let nx = file.state_dim;
    let nu = file.input_dim;
    if file.dynamics.len() != nx {
        bail!(
            "expected {} dynamics rows, found {}",
            nx,
            file.dynamics.len()
        );
    }
    let nw = file.disturbance.len();
    let w_bounds: Vec<Rational> = file
        .disturbance
        .iter()
        .map(|s| parse_rational(s, "disturbance bound"))
        .collect::<Result<_>>()?;
    if w_bounds.iter().any(|w| w.is_negative()) {
        bail!("disturbance bounds must be non-negative");
    }

    let parse_sp = parse_space(nx, nu, nw);
    let mut f_polys = Vec::with_capacity(nx + nu);
    let mut w_vec = Vec::with_capacity(nx + nu);
    for (i, src) in file.dynamics.iter().enumerate() {
        let poly = parse_dynamics_poly(src, &parse_sp, &config)
            .with_context(|| format!("dynamics row {}", i + 1))?;
        let (nominal, w) = split_disturbance(&poly, &parse_sp, &w_bounds, nx, nu)?;
        f_polys.push(nominal);
        w_vec.push(w);
    }
    // Held inputs: zero derivative, no disturbance.
    let state_space = VarSpace::states(nx + nu);
    for _ in 0..nu {
        f_polys.push(Polynomial::zero(state_space.clone()));
        w_vec.push(Rational::zero());
    }

    let dt = parse_rational(&file.dt, "dt")?;
    if !dt.is_positive() {
        bail!("dt must be positive");
    }
    let sys = OdeSystem::new(PolyVector(f_polys), RVector(w_vec), dt);

    let mut roles = vec![DimRole::State; nx];
    roles.extend(vec![DimRole::Input; nu]);
    let envelope = parse_zonotope(&file.envelope, roles, "envelope")?;
    let x0 = parse_zonotope(&file.x0, vec![DimRole::State; nx], "x0")?;
    let x_safe = parse_box(&file.state_box, "state_box")?;
    let u_adm = parse_box(&file.input_box, "input_box")?;

    let name = if file.name.is_empty() {
        "unnamed".to_string()
    } else {
        file.name.clone()
    };
    ProblemSpec::new(name, nx, nu, sys, envelope, x0, x_safe, u_adm, config)
        .map_err(|e| anyhow!("problem is inconsistent: {e}"))
}

/// Slopes file for `taylor --check-bounds`.
#[derive(Debug, Deserialize)]
pub struct SlopesFile {
    pub slopes: Vec<String>,
}

pub fn parse_slopes(json: &str) -> Result<Vec<Rational>> {
    let f: SlopesFile = serde_json::from_str(json).context("slopes file does not parse")?;
    f.slopes
        .iter()
        .map(|s| parse_rational(s, "slope"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use envcert_core::exact::RationalizeMode;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn parses_simple_polynomials() {
        let sp = parse_space(2, 1, 2);
        let p = parse_dynamics_poly("x2 + w1", &sp, &cfg()).unwrap();
        assert_eq!(p.to_string(), "x2 + w1");
        let p = parse_dynamics_poly("-x2 - 3/2*x1^2 - 1/2*x1^3 + w1", &sp, &cfg()).unwrap();
        assert_eq!(p.to_string(), "-x2 + w1 - 3/2*x1^2 - 1/2*x1^3");
        let p = parse_dynamics_poly("(x1 + u1)^2 / 4", &sp, &cfg()).unwrap();
        assert_eq!(p.to_string(), "1/4*x1^2 + 1/2*x1*u1 + 1/4*u1^2");
    }

    #[test]
    fn decimal_literals_are_dyadic_by_default() {
        let sp = parse_space(1, 0, 0);
        let p = parse_dynamics_poly("0.5*x1", &sp, &cfg()).unwrap();
        assert_eq!(p.to_string(), "1/2*x1");
        // 0.1 is not dyadic; the exact float value is kept.
        let p = parse_dynamics_poly("0.1", &sp, &cfg()).unwrap();
        assert_ne!(p.to_string(), "1/10");
        let mut c = cfg();
        c.literal_mode = RationalizeMode::Cfrac;
        let p = parse_dynamics_poly("0.1", &sp, &c).unwrap();
        assert_eq!(p.to_string(), "1/10");
    }

    #[test]
    fn rejects_malformed_input() {
        let sp = parse_space(1, 1, 0);
        assert!(parse_dynamics_poly("x1 +", &sp, &cfg()).is_err());
        assert!(parse_dynamics_poly("y3", &sp, &cfg()).is_err());
        assert!(parse_dynamics_poly("x1 / u1", &sp, &cfg()).is_err());
        assert!(parse_dynamics_poly("x1 ^ -2", &sp, &cfg()).is_err());
        assert!(parse_dynamics_poly("x1 x1", &sp, &cfg()).is_err());
    }

    #[test]
    fn disturbance_must_be_additive() {
        let sp = parse_space(1, 0, 1);
        let bounds = [Rational::new(1, 10)];
        let p = parse_dynamics_poly("x1 + 2*w1", &sp, &cfg()).unwrap();
        let (nominal, w) = split_disturbance(&p, &sp, &bounds, 1, 0).unwrap();
        assert_eq!(nominal.to_string(), "x1");
        assert_eq!(w, Rational::new(2, 10));

        let p = parse_dynamics_poly("x1*w1", &sp, &cfg()).unwrap();
        assert!(split_disturbance(&p, &sp, &bounds, 1, 0).is_err());
        let p = parse_dynamics_poly("w1^2", &sp, &cfg()).unwrap();
        assert!(split_disturbance(&p, &sp, &bounds, 1, 0).is_err());
    }
}
