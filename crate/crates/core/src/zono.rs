//! Zonotopes, the linear interval abstraction, and the reach-set
//! constructions for the sampling instant and the sampling interval.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{AbstractionDomain, Config, TimeNormalization};
use crate::exact::{RMatrix, RVector, Rational};
use crate::interval::{eval_poly_subdivided, Interval, IvBox};
use crate::poly::{Polynomial, VarRole, VarSpace};
use crate::taylor::TaylorModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZonoError {
    /// The Taylor model has not passed its validity premises.
    #[error("taylor model is not validated")]
    InvalidTm,
    /// Literal time handling is only sound for dt <= 1.
    #[error("paper-literal time normalization requires dt <= 1")]
    DtTooLarge,
}

/// Role of a zonotope row: plant state or held control input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimRole {
    #[serde(rename = "x")]
    State,
    #[serde(rename = "u")]
    Input,
}

/// Zonotope Z(c, G) = { c + G*lambda : ||lambda||_inf <= 1 }.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Zonotope {
    c: RVector,
    #[serde(rename = "G")]
    g: RMatrix,
    roles: Vec<DimRole>,
}

impl<'de> Deserialize<'de> for Zonotope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            c: RVector,
            #[serde(rename = "G")]
            g: RMatrix,
            roles: Vec<DimRole>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.c.len() != raw.g.rows() || raw.c.len() != raw.roles.len() {
            return Err(serde::de::Error::custom(
                "zonotope center, generators and roles disagree",
            ));
        }
        Ok(Zonotope {
            c: raw.c,
            g: raw.g,
            roles: raw.roles,
        })
    }
}

impl Zonotope {
    pub fn new(c: RVector, g: RMatrix, roles: Vec<DimRole>) -> Self {
        assert_eq!(c.len(), g.rows(), "center / generator row mismatch");
        assert_eq!(c.len(), roles.len(), "center / roles mismatch");
        Zonotope { c, g, roles }
    }

    /// All-state zonotope without explicit role bookkeeping.
    pub fn state_space(c: RVector, g: RMatrix) -> Self {
        let n = c.len();
        Zonotope::new(c, g, vec![DimRole::State; n])
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn center(&self) -> &RVector {
        &self.c
    }

    pub fn generators(&self) -> &RMatrix {
        &self.g
    }

    pub fn roles(&self) -> &[DimRole] {
        &self.roles
    }

    pub fn order(&self) -> usize {
        self.g.cols()
    }

    /// Keep the selected rows; existential projection of a zonotope is
    /// exactly row selection.
    pub fn project(&self, rows: &[usize]) -> Zonotope {
        assert!(!rows.is_empty(), "projection needs at least one row");
        Zonotope {
            c: RVector(rows.iter().map(|&i| self.c[i].clone()).collect()),
            g: self.g.select_rows(rows),
            roles: rows.iter().map(|&i| self.roles[i]).collect(),
        }
    }

    pub fn state_rows(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.roles[i] == DimRole::State)
            .collect()
    }

    pub fn input_rows(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.roles[i] == DimRole::Input)
            .collect()
    }

    pub fn project_states(&self) -> Zonotope {
        self.project(&self.state_rows())
    }

    pub fn project_inputs(&self) -> Zonotope {
        self.project(&self.input_rows())
    }

    /// Exact axis-aligned hull: row i spans c_i plus/minus the absolute
    /// row sum of G.
    pub fn interval_hull(&self) -> IvBox {
        IvBox(
            (0..self.dim())
                .map(|i| {
                    let spread = self
                        .g
                        .row(i)
                        .iter()
                        .fold(Rational::zero(), |acc, x| acc + x.abs());
                    Interval::new(&self.c[i] - &spread, &self.c[i] + &spread)
                })
                .collect(),
        )
    }

    pub fn drop_zero_generators(&self) -> Zonotope {
        Zonotope {
            c: self.c.clone(),
            g: self.g.drop_zero_cols(),
            roles: self.roles.clone(),
        }
    }

    /// Same center, generators scaled by `factor`.
    pub fn inflate(&self, factor: &Rational) -> Zonotope {
        Zonotope {
            c: self.c.clone(),
            g: &self.g * factor,
            roles: self.roles.clone(),
        }
    }

    /// Append identity generators scaled by `delta` (the rank-repair knob
    /// for degenerate containment targets).
    pub fn widen_identity(&self, delta: &Rational) -> Zonotope {
        let mut eye = RMatrix::identity(self.dim());
        eye = &eye * delta;
        Zonotope {
            c: self.c.clone(),
            g: self.g.hcat(&eye),
            roles: self.roles.clone(),
        }
    }

    /// Exact vertex polygon of the 2-D projection onto `rows`, counter-
    /// clockwise. Parallel generator columns are merged first, so the
    /// output has no collinear vertices; a point and a segment degenerate
    /// to one and two vertices.
    pub fn vertices_2d(&self, rows: (usize, usize)) -> Vec<(Rational, Rational)> {
        let cx = &self.c[rows.0];
        let cy = &self.c[rows.1];
        // Normalize every nonzero generator into the upper half plane.
        let mut dirs: Vec<(Rational, Rational)> = Vec::new();
        for j in 0..self.g.cols() {
            let mut gx = self.g[(rows.0, j)].clone();
            let mut gy = self.g[(rows.1, j)].clone();
            if gx.is_zero() && gy.is_zero() {
                continue;
            }
            if gy.is_negative() || (gy.is_zero() && gx.is_negative()) {
                gx = -gx;
                gy = -gy;
            }
            // Merge with an existing parallel direction if there is one.
            let mut merged = false;
            for d in dirs.iter_mut() {
                let cross = &d.0 * &gy - &d.1 * &gx;
                if cross.is_zero() {
                    d.0 += &gx;
                    d.1 += &gy;
                    merged = true;
                    break;
                }
            }
            if !merged {
                dirs.push((gx, gy));
            }
        }
        // Merging antiparallel columns can cancel exactly; drop the husk.
        dirs.retain(|d| !(d.0.is_zero() && d.1.is_zero()));
        if dirs.is_empty() {
            return vec![(cx.clone(), cy.clone())];
        }
        // Sort by angle in [0, pi) using the exact cross product.
        dirs.sort_by(|a, b| {
            let cross = &a.0 * &b.1 - &a.1 * &b.0;
            if cross.is_positive() {
                std::cmp::Ordering::Less
            } else if cross.is_negative() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        // Walk the boundary starting from the topmost vertex c + sum(dirs):
        // subtracting 2*d_i in angle order traces one chain, adding them
        // back traces the other.
        let mut vx = cx.clone();
        let mut vy = cy.clone();
        for d in &dirs {
            vx += &d.0;
            vy += &d.1;
        }
        let mut vertices = vec![(vx.clone(), vy.clone())];
        let two = Rational::from_int(2);
        for d in &dirs {
            vx -= &(&d.0 * &two);
            vy -= &(&d.1 * &two);
            vertices.push((vx.clone(), vy.clone()));
        }
        for d in dirs.iter().take(dirs.len() - 1) {
            vx += &(&d.0 * &two);
            vy += &(&d.1 * &two);
            vertices.push((vx.clone(), vy.clone()));
        }
        vertices
    }
}

/// Linear interval abstraction at the origin: returns the affine part
/// p(0) + grad p(0)^T x and the interval remainder R enclosing the
/// nonlinear residue over `domain`, so p(x) lies in affine(x) + R there.
pub fn linear_abstraction(p: &Polynomial, domain: &IvBox) -> (Polynomial, Interval) {
    let origin = vec![Rational::zero(); p.space().len()];
    assert!(
        domain.contains_point(&origin),
        "domain must contain the expansion point"
    );
    let names: Vec<&str> = p.space().vars().iter().map(|v| v.name.as_str()).collect();
    let affine = affine_part(p, &names);
    let residue = p.sub(&affine);
    let r = eval_poly_subdivided(&residue, domain, 0);
    (affine, r)
}

/// p(0) + sum_v (dp/dv)(0) * v for the listed variables (all others are
/// pinned to zero in the constant and gradient evaluations).
fn affine_part(p: &Polynomial, vars: &[&str]) -> Polynomial {
    let space = p.space().clone();
    let zero_point = vec![Rational::zero(); space.len()];
    let mut out = Polynomial::constant(space.clone(), p.eval(&zero_point));
    for name in vars {
        let coeff = p.partial(name).eval(&zero_point);
        out = out.add(&Polynomial::var(space.clone(), name).scale(&coeff));
    }
    out
}

/// Residue of the abstraction in a subset of variables, leaving the rest
/// symbolic: p - p|vars=0 - sum_v (dp/dv)|vars=0 * v.
fn partial_residue(p: &Polynomial, vars: &[&str]) -> Polynomial {
    let space = p.space().clone();
    let zero_sub = |q: &Polynomial| -> Polynomial {
        let mut out = q.clone();
        for v in vars {
            out = out.substitute_const(v, &Rational::zero());
        }
        out
    };
    let mut affine = zero_sub(p);
    for name in vars {
        let grad_at = zero_sub(&p.partial(name));
        affine = affine.add(&Polynomial::var(space.clone(), name).mul(&grad_at));
    }
    p.sub(&affine)
}

/// Zonotope enclosing the reachable set at the sampling instant dt.
///
/// Center p(dt,0) + mid(I(dt)) + mid(R); generators are the lambda
/// gradient at (dt, 0), a diagonal block of half-radii of I(dt), and a
/// diagonal block of half-radii of the abstraction remainder R. Zero
/// columns are dropped.
pub fn reach_discrete(tm: &TaylorModel, cfg: &Config) -> Result<Zonotope, ZonoError> {
    if !tm.is_valid() {
        return Err(ZonoError::InvalidTm);
    }
    let n = tm.dim();
    let p_count = tm.lambda_count();
    let dt = &tm.dt;
    let space = tm.p.space().clone();
    let lambda_names: Vec<String> = space
        .indices_with_role(VarRole::Init)
        .into_iter()
        .map(|i| space.vars()[i].name.clone())
        .collect();
    let lambda_refs: Vec<&str> = lambda_names.iter().map(|s| s.as_str()).collect();

    // Evaluation domain for the remainder of the lambda abstraction.
    let t_iv = match cfg.abstraction_domain {
        AbstractionDomain::PaperLiteral => Interval::new(Rational::zero(), dt.clone()),
        AbstractionDomain::Tight => Interval::point(dt.clone()),
    };
    let mut dom = vec![t_iv];
    dom.extend((0..p_count).map(|_| Interval::from_ints(-1, 1)));
    let dom = IvBox(dom);

    let mut center = RVector::zeros(n);
    let mut lambda_block = RMatrix::zeros(n, p_count);
    let mut i_half = RVector::zeros(n);
    let mut r_half = RVector::zeros(n);
    for i in 0..n {
        let pi = &tm.p[i];
        // p_i(dt, 0)
        let at_origin = pi.substitute_const("t", dt).zero_out_role(VarRole::Init);
        debug_assert_eq!(at_origin.total_degree(), 0);
        let p_dt_0 = at_origin.eval(&vec![Rational::zero(); space.len()]);

        // gradient wrt lambda at (dt, 0)
        for (j, name) in lambda_refs.iter().enumerate() {
            let g = pi
                .partial(name)
                .substitute_const("t", dt)
                .zero_out_role(VarRole::Init)
                .eval(&vec![Rational::zero(); space.len()]);
            lambda_block[(i, j)] = g;
        }

        let i_dt = tm.remainders[i].at(dt);
        let residue = partial_residue(pi, &lambda_refs);
        let r = eval_poly_subdivided(&residue, &dom, cfg.subdivision_depth);

        center[i] = &(&p_dt_0 + &i_dt.mid()) + &r.mid();
        i_half[i] = i_dt.half_rad();
        r_half[i] = r.half_rad();
    }
    let g = lambda_block.hcat(&diag(&i_half)).hcat(&diag(&r_half));
    Ok(Zonotope::new(center, g, tm.init.roles().to_vec()).drop_zero_generators())
}

/// Zonotope enclosing the reachable tube over [0, dt].
///
/// The remainder polynomial r collects everything the first-order
/// expansion at (t, lambda, xi) = 0 misses; its interval range R joins
/// the generator set as a diagonal block. The time generator covers
/// t in [0, dt] either exactly (tight) or by the [-1, 1] superset
/// (paper-literal, requiring dt <= 1).
pub fn reach_interval(tm: &TaylorModel, cfg: &Config) -> Result<Zonotope, ZonoError> {
    if !tm.is_valid() {
        return Err(ZonoError::InvalidTm);
    }
    if cfg.time_normalization == TimeNormalization::PaperLiteral && tm.dt > Rational::one() {
        return Err(ZonoError::DtTooLarge);
    }
    let n = tm.dim();
    let p_count = tm.lambda_count();
    let dt = &tm.dt;
    let space = tm.p.space().clone();
    let lambda_names: Vec<String> = space
        .indices_with_role(VarRole::Init)
        .into_iter()
        .map(|i| space.vars()[i].name.clone())
        .collect();
    let mut abstract_vars: Vec<&str> = vec!["t"];
    abstract_vars.extend(lambda_names.iter().map(|s| s.as_str()));

    // Domain J = [0,dt] x [-1,1]^p x [-1,1]^n for the remainder range.
    let dspace = VarSpace::defect(p_count, n);
    let mut dom = vec![Interval::new(Rational::zero(), dt.clone())];
    dom.extend((0..p_count).map(|_| Interval::from_ints(-1, 1)));
    dom.extend((0..n).map(|_| Interval::from_ints(-1, 1)));
    let dom = IvBox(dom);

    let zero_point = vec![Rational::zero(); space.len()];
    let mut center = RVector::zeros(n);
    let mut g_t = RVector::zeros(n);
    let mut lambda_block = RMatrix::zeros(n, p_count);
    let mut i0_half = RVector::zeros(n);
    let mut r_half = RVector::zeros(n);
    for i in 0..n {
        let pi = &tm.p[i];
        let rem = &tm.remainders[i];
        let p_00 = pi
            .substitute_const("t", &Rational::zero())
            .zero_out_role(VarRole::Init)
            .eval(&zero_point);
        let pdot_00 = pi
            .partial("t")
            .substitute_const("t", &Rational::zero())
            .zero_out_role(VarRole::Init)
            .eval(&zero_point);
        let i0 = &rem.a;
        let mid_slope = rem.b.mid();

        for (j, name) in lambda_names.iter().enumerate() {
            lambda_block[(i, j)] = pi
                .partial(name)
                .substitute_const("t", &Rational::zero())
                .zero_out_role(VarRole::Init)
                .eval(&zero_point);
        }

        // r_i(t,lambda,xi): the residue of p_i in (t,lambda) plus the
        // time-varying part of the remainder generator, (1/2)rad(b)*t*xi_i.
        // The mid terms of an affine-in-t interval cancel exactly.
        let residue = partial_residue(pi, &abstract_vars).lift(&dspace);
        let xi_term = Polynomial::var(dspace.clone(), &format!("xi{}", i + 1))
            .mul(&Polynomial::var(dspace.clone(), "t"))
            .scale(&rem.b.half_rad());
        let r_poly = residue.add(&xi_term);
        let r = eval_poly_subdivided(&r_poly, &dom, cfg.subdivision_depth);

        center[i] = &(&p_00 + &i0.mid()) + &r.mid();
        g_t[i] = &pdot_00 + &mid_slope;
        i0_half[i] = i0.half_rad();
        r_half[i] = r.half_rad();
    }

    let time_col = match cfg.time_normalization {
        TimeNormalization::Tight => {
            let half_dt = dt * &Rational::new(1, 2);
            let scaled = g_t.scale(&half_dt);
            center = &center + &scaled;
            scaled
        }
        TimeNormalization::PaperLiteral => g_t,
    };
    let mut g = RMatrix::zeros(n, 0);
    g = g.hcat_col(&time_col);
    g = g.hcat(&lambda_block);
    g = g.hcat(&diag(&i0_half));
    g = g.hcat(&diag(&r_half));
    Ok(Zonotope::new(center, g, tm.init.roles().to_vec()).drop_zero_generators())
}

fn diag(v: &RVector) -> RMatrix {
    let n = v.len();
    let mut m = RMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = v[i].clone();
    }
    m
}
