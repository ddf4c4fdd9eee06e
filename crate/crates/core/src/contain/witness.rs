//! Exact side of zonotope containment: witness certification and box
//! containment. Everything here is rational arithmetic; this module sits
//! on the certificate re-verification path.

use serde::{Deserialize, Serialize};

use crate::exact::{mat_inf_norm, RMatrix, RVector, Rational};
use crate::interval::IvBox;
use crate::zono::Zonotope;

/// Containment witness for Z(c, G) inside Z(b, H): all four certification
/// premises are re-checkable from these fields alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentWitness {
    #[serde(rename = "Gamma")]
    pub gamma: RMatrix,
    pub beta: RVector,
    #[serde(rename = "Hplus")]
    pub hplus: RMatrix,
    pub epsilon: Rational,
}

/// Result of the exact witness check. `pass` soundly implies containment;
/// a failed check means the witness is insufficient, not that the sets are
/// disjoint.
#[derive(Debug, Clone)]
pub struct CertifyReport {
    pub pass: bool,
    /// H * Hplus = I held exactly.
    pub right_inverse_ok: bool,
    /// b - c = H * beta held exactly.
    pub center_ok: bool,
    /// ||H Gamma - G|| <= epsilon held exactly.
    pub residual_ok: bool,
    /// ||[Gamma beta]|| <= 1 - epsilon ||Hplus|| held exactly.
    pub norm_ok: bool,
    /// The exact residual norm ||H Gamma - G||.
    pub residual_norm: Rational,
    /// The exact stacked norm ||[Gamma beta]||.
    pub witness_norm: Rational,
    /// The exact budget 1 - epsilon ||Hplus||.
    pub norm_budget: Rational,
}

/// Check the four containment premises in exact arithmetic.
pub fn certify(inner: &Zonotope, outer: &Zonotope, w: &ContainmentWitness) -> CertifyReport {
    assert_eq!(inner.dim(), outer.dim(), "zonotope dimension mismatch");
    let g = inner.generators();
    let h = outer.generators();
    // A witness with inconsistent shapes can never certify; reject it
    // without tripping matrix asserts downstream.
    if w.beta.len() != w.gamma.rows() {
        return CertifyReport {
            pass: false,
            right_inverse_ok: false,
            center_ok: false,
            residual_ok: false,
            norm_ok: false,
            residual_norm: Rational::zero(),
            witness_norm: Rational::zero(),
            norm_budget: Rational::zero(),
        };
    }
    let right_inverse_ok =
        h.cols() == w.hplus.rows() && h.mat_mul(&w.hplus) == RMatrix::identity(h.rows());
    let diff = outer.center() - inner.center();
    let center_ok = w.beta.len() == h.cols() && h.mat_vec(&w.beta) == diff;
    let (residual_ok, residual_norm) = if w.gamma.rows() == h.cols() && w.gamma.cols() == g.cols() {
        let norm = mat_inf_norm(&(&h.mat_mul(&w.gamma) - g));
        (norm <= w.epsilon, norm)
    } else {
        (false, Rational::zero())
    };
    let stacked = w.gamma.hcat_col(&w.beta);
    let witness_norm = mat_inf_norm(&stacked);
    let norm_budget = Rational::one() - &w.epsilon * &mat_inf_norm(&w.hplus);
    let norm_ok = witness_norm <= norm_budget;
    CertifyReport {
        pass: right_inverse_ok && center_ok && residual_ok && norm_ok,
        right_inverse_ok,
        center_ok,
        residual_ok,
        norm_ok,
        residual_norm,
        witness_norm,
        norm_budget,
    }
}

/// Exact box containment: interval_hull(Z) inside `target`. For box
/// targets this is both necessary and sufficient.
#[derive(Debug, Clone)]
pub struct BoxReport {
    pub pass: bool,
    /// Per-dimension slack (min of both sides); negative means violated.
    pub margins: Vec<Rational>,
}

pub fn in_box(z: &Zonotope, target: &IvBox) -> BoxReport {
    assert_eq!(z.dim(), target.dim(), "box dimension mismatch");
    let hull = z.interval_hull();
    let margins: Vec<Rational> = hull
        .0
        .iter()
        .zip(&target.0)
        .map(|(h, t)| {
            let lo = &h.lo - &t.lo;
            let hi = &t.hi - &h.hi;
            lo.min(hi)
        })
        .collect();
    BoxReport {
        pass: margins.iter().all(|m| !m.is_negative()),
        margins,
    }
}

/// Exact disproof of containment via interval hulls. The hull bounds of a
/// zonotope are attained, so an inner hull face outside the outer hull
/// exhibits an inner point not in the outer set.
pub fn hull_disproof(inner: &Zonotope, outer: &Zonotope) -> Option<usize> {
    let hi = inner.interval_hull();
    let ho = outer.interval_hull();
    (0..inner.dim()).find(|&i| !ho.0[i].contains_interval(&hi.0[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::right_inverse;
    use crate::interval::Interval;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn unit(n: usize) -> Zonotope {
        Zonotope::state_space(RVector::zeros(n), RMatrix::identity(n))
    }

    #[test]
    fn identity_witness_on_self() {
        let z = unit(2);
        let w = ContainmentWitness {
            gamma: RMatrix::identity(2),
            beta: RVector::zeros(2),
            hplus: RMatrix::identity(2),
            epsilon: Rational::zero(),
        };
        let r = certify(&z, &z, &w);
        assert!(r.pass);
        assert_eq!(r.witness_norm, rat(1, 1));
        assert_eq!(r.norm_budget, rat(1, 1));
    }

    #[test]
    fn half_identity_witness() {
        let inner = unit(2);
        let outer = Zonotope::state_space(RVector::zeros(2), &RMatrix::identity(2) * &rat(2, 1));
        let hplus = right_inverse(outer.generators()).unwrap();
        let w = ContainmentWitness {
            gamma: &RMatrix::identity(2) * &rat(1, 2),
            beta: RVector::zeros(2),
            hplus,
            epsilon: Rational::zero(),
        };
        let r = certify(&inner, &outer, &w);
        assert!(r.pass);
        assert_eq!(r.witness_norm, rat(1, 2));

        // a fabricated epsilon of 3 wrecks the norm budget: 1 - 3/2 < 1/2
        let bad = ContainmentWitness {
            epsilon: rat(3, 1),
            ..w
        };
        let r = certify(&inner, &outer, &bad);
        assert!(!r.pass);
        assert!(r.norm_ok == false);
    }

    #[test]
    fn in_box_examples() {
        let z = Zonotope::state_space(
            RVector::zeros(2),
            RMatrix::from_rows(vec![
                vec![rat(1, 1), rat(1, 10)],
                vec![rat(0, 1), rat(1, 1)],
            ]),
        );
        let target = IvBox(vec![
            Interval::new(rat(-12, 10), rat(12, 10)),
            Interval::from_ints(-1, 1),
        ]);
        let r = in_box(&z, &target);
        assert!(r.pass);
        assert_eq!(r.margins[0], rat(1, 10));
        assert_eq!(r.margins[1], Rational::zero());

        let small = IvBox(vec![Interval::from_ints(0, 1)]);
        assert!(!in_box(&unit(1), &small).pass);

        // a point zonotope sitting exactly on the corner is contained
        let corner = Zonotope::state_space(RVector::from_ints(&[1]), RMatrix::zeros(1, 0));
        assert!(in_box(&corner, &IvBox(vec![Interval::from_ints(-1, 1)])).pass);
    }

    #[test]
    fn hull_disproof_detects_protrusion() {
        let inner = unit(2);
        let outer = Zonotope::state_space(RVector::zeros(2), &RMatrix::identity(2) * &rat(1, 2));
        assert_eq!(hull_disproof(&inner, &outer), Some(0));
        assert_eq!(hull_disproof(&outer, &inner), None);
    }
}
