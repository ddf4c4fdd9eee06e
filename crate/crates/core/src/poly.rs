//! Multivariate polynomials with rational coefficients over a named
//! variable space.
//!
//! Terms live in a map keyed by exponent vectors ordered graded-lex
//! (total degree first, then lexicographic), so iteration order, printing
//! and serialization are deterministic. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    /// A composition intermediate exceeded the configured total-degree cap.
    #[error("degree {degree} exceeds cap {cap} during composition")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    /// Operands belong to different variable spaces.
    #[error("variable spaces do not match")]
    SpaceMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum VarRole {
    /// The single time variable t.
    Time,
    /// Initial-set parameter (the lambda box coordinates).
    Init,
    /// Remainder parameter (the xi coordinates of interval abstractions).
    Remainder,
    /// Disturbance parameter.
    Disturbance,
    /// State coordinate of an ODE right-hand side (includes held inputs).
    State,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub role: VarRole,
}

/// Ordered list of named variables. Polynomials refer to their space by
/// `Arc`, so sharing is cheap and equality is structural.
#[derive(Debug, PartialEq, Eq)]
pub struct VarSpace {
    vars: Vec<Var>,
}

impl VarSpace {
    pub fn new(vars: Vec<Var>) -> Arc<Self> {
        let mut seen = std::collections::BTreeSet::new();
        let mut time_count = 0;
        for v in &vars {
            assert!(seen.insert(v.name.clone()), "duplicate variable {}", v.name);
            if v.role == VarRole::Time {
                time_count += 1;
            }
        }
        assert!(time_count <= 1, "more than one time variable");
        Arc::new(VarSpace { vars })
    }

    /// Space of an ODE right-hand side: x1..xn (held inputs included).
    pub fn states(n: usize) -> Arc<Self> {
        VarSpace::new(
            (1..=n)
                .map(|i| Var {
                    name: format!("x{i}"),
                    role: VarRole::State,
                })
                .collect(),
        )
    }

    /// Taylor-model space: t, l1..lp.
    pub fn time_lambda(p: usize) -> Arc<Self> {
        let mut vars = vec![Var {
            name: "t".to_string(),
            role: VarRole::Time,
        }];
        vars.extend((1..=p).map(|i| Var {
            name: format!("l{i}"),
            role: VarRole::Init,
        }));
        VarSpace::new(vars)
    }

    /// Defect space: t, l1..lp, xi1..xin.
    pub fn defect(p: usize, n: usize) -> Arc<Self> {
        let mut vars = vec![Var {
            name: "t".to_string(),
            role: VarRole::Time,
        }];
        vars.extend((1..=p).map(|i| Var {
            name: format!("l{i}"),
            role: VarRole::Init,
        }));
        vars.extend((1..=n).map(|i| Var {
            name: format!("xi{i}"),
            role: VarRole::Remainder,
        }));
        VarSpace::new(vars)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn time_index(&self) -> Option<usize> {
        self.vars.iter().position(|v| v.role == VarRole::Time)
    }

    pub fn indices_with_role(&self, role: VarRole) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.vars[i].role == role)
            .collect()
    }
}

/// Exponent vector over a fixed variable space, ordered graded-lex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn constant(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    /// Graded order: total degree first; ties break lexicographically with
    /// earlier variables dominant, so `t^2 < t*l1 < l1^2` and maps iterate
    /// in the order polynomials are conventionally written.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    space: Arc<VarSpace>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(space: Arc<VarSpace>) -> Self {
        Polynomial {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: Arc<VarSpace>, c: Rational) -> Self {
        let mut p = Polynomial::zero(space);
        if !c.is_zero() {
            let n = p.space.len();
            p.terms.insert(Monomial::constant(n), c);
        }
        p
    }

    /// The variable `name` as a polynomial.
    pub fn var(space: Arc<VarSpace>, name: &str) -> Self {
        let idx = space
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut exps = vec![0; space.len()];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), Rational::one());
        Polynomial { space, terms }
    }

    /// Build from explicit (exponents, coefficient) pairs; repeated
    /// monomials accumulate and zero coefficients drop out.
    pub fn from_terms(
        space: Arc<VarSpace>,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Self {
        let mut p = Polynomial::zero(space);
        for (exps, coeff) in terms {
            assert_eq!(exps.len(), p.space.len(), "exponent arity mismatch");
            p.add_term(Monomial(exps), coeff);
        }
        p
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn assert_same_space(&self, other: &Polynomial) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space) || self.space == other.space,
            "variable spaces do not match"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_space(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.space.clone());
        }
        Polynomial {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_space(other);
        let mut out = Polynomial::zero(self.space.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Product with a total-degree guard, used on composition paths where
    /// repeated multiplication can run away.
    pub fn try_mul(&self, other: &Polynomial, cap: u32) -> Result<Polynomial, PolyError> {
        let out = self.mul(other);
        let degree = out.total_degree();
        if degree > cap {
            return Err(PolyError::DegreeCapExceeded { degree, cap });
        }
        Ok(out)
    }

    /// Antiderivative in the time variable with zero constant of
    /// integration: the coefficient of t^k moves to t^(k+1)/(k+1).
    pub fn integrate_time(&self) -> Polynomial {
        let t = self.space.time_index().expect("space has no time variable");
        let mut out = Polynomial::zero(self.space.clone());
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps[t] += 1;
            let k = exps[t] as i64;
            out.add_term(Monomial(exps), c * &Rational::new(1, k));
        }
        out
    }

    /// Partial derivative with respect to one variable.
    pub fn partial(&self, name: &str) -> Polynomial {
        let idx = self
            .space
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut out = Polynomial::zero(self.space.clone());
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] -= 1;
            out.add_term(Monomial(exps), c * &Rational::from_int(e as i64));
        }
        out
    }

    /// Syntactic partial gradient with respect to the listed variables,
    /// in the listed order.
    pub fn gradient(&self, names: &[&str]) -> PolyVector {
        PolyVector(names.iter().map(|n| self.partial(n)).collect())
    }

    /// Substitute some variables by polynomials (or constants) over the
    /// same space; unbound variables pass through.
    pub fn substitute(&self, bindings: &BTreeMap<String, Polynomial>) -> Polynomial {
        let mut map = Vec::with_capacity(self.space.len());
        for v in self.space.vars() {
            match bindings.get(&v.name) {
                Some(p) => {
                    p.assert_same_space(self);
                    map.push(p.clone());
                }
                None => map.push(Polynomial::var(self.space.clone(), &v.name)),
            }
        }
        // Substitution cannot run away on its own here; callers that loop
        // substitution go through compose() with a real cap.
        self.compose(&self.space.clone(), &map, u32::MAX)
            .expect("uncapped composition cannot fail")
    }

    /// Substitute a single variable by a constant.
    pub fn substitute_const(&self, name: &str, value: &Rational) -> Polynomial {
        let mut bindings = BTreeMap::new();
        bindings.insert(
            name.to_string(),
            Polynomial::constant(self.space.clone(), value.clone()),
        );
        self.substitute(&bindings)
    }

    /// Set every variable with the given role to zero.
    pub fn zero_out_role(&self, role: VarRole) -> Polynomial {
        let mut bindings = BTreeMap::new();
        for v in self.space.vars() {
            if v.role == role {
                bindings.insert(v.name.clone(), Polynomial::zero(self.space.clone()));
            }
        }
        self.substitute(&bindings)
    }

    /// Full composition: variable i of `self` maps to `images[i]`, all of
    /// which live in `target`. Power products are built incrementally and
    /// checked against the total-degree cap.
    pub fn compose(
        &self,
        target: &Arc<VarSpace>,
        images: &[Polynomial],
        cap: u32,
    ) -> Result<Polynomial, PolyError> {
        assert_eq!(images.len(), self.space.len(), "one image per variable");
        for img in images {
            if !(Arc::ptr_eq(&img.space, target) || *img.space == **target) {
                return Err(PolyError::SpaceMismatch);
            }
        }
        let mut out = Polynomial::zero(target.clone());
        // Cache powers of each image as they are needed.
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|img| {
                vec![
                    Polynomial::constant(target.clone(), Rational::one()),
                    img.clone(),
                ]
            })
            .collect();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().try_mul(&images[i], cap)?;
                    powers[i].push(next);
                }
                term = term.try_mul(&powers[i][e as usize], cap)?;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Re-express over `target`, matching variables by name. Every variable
    /// actually used must exist in the target space.
    pub fn lift(&self, target: &Arc<VarSpace>) -> Polynomial {
        let mapping: Vec<Option<usize>> = self
            .space
            .vars()
            .iter()
            .map(|v| target.index_of(&v.name))
            .collect();
        let mut out = Polynomial::zero(target.clone());
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = mapping[i].unwrap_or_else(|| {
                    panic!("variable {} missing in target", self.space.vars()[i].name)
                });
                exps[j] = e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Exact evaluation at a rational point (one value per variable).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.space.len(), "point arity mismatch");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &point[i].pow(e);
                }
            }
            acc += &t;
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    /// Canonical rendering: terms ascending graded-lex, `*` between factors,
    /// `^` for exponents, unit coefficients omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if mag != Rational::one() || m.total_degree() == 0 {
                factors.push(mag.to_string());
            }
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &self.space.vars()[j].name;
                if e == 1 {
                    factors.push(name.clone());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// One polynomial per state dimension, all sharing a variable space.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyVector(pub Vec<Polynomial>);

impl PolyVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        self.0.first().expect("empty polynomial vector").space()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Polynomial> {
        self.0.iter()
    }
}

impl Index<usize> for PolyVector {
    type Output = Polynomial;
    fn index(&self, i: usize) -> &Polynomial {
        &self.0[i]
    }
}

use std::ops::Index;

impl fmt::Debug for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}
