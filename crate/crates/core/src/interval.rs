//! Rational interval arithmetic and sound interval evaluation of
//! polynomials over boxes.
//!
//! Endpoints are exact rationals, so every enclosure here is sound by
//! construction with no outward rounding. Following the paper's
//! convention, `rad` is the full width of an interval; generator columns
//! built from interval remainders carry the 1/2 factor explicitly.

use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: Rational,
            hi: Rational,
        }
        let raw = Raw::deserialize(d)?;
        if raw.lo > raw.hi {
            return Err(serde::de::Error::custom("interval endpoints out of order"));
        }
        Ok(Interval {
            lo: raw.lo,
            hi: raw.hi,
        })
    }
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn zero() -> Self {
        Interval::point(Rational::zero())
    }

    /// Symmetric interval [-m, m]; `m` must be non-negative.
    pub fn symmetric(m: Rational) -> Self {
        assert!(!m.is_negative());
        Interval { lo: -&m, hi: m }
    }

    pub fn from_ints(lo: i64, hi: i64) -> Self {
        Interval::new(Rational::from_int(lo), Rational::from_int(hi))
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        Interval { lo, hi }
    }

    pub fn scale(&self, s: &Rational) -> Interval {
        if s.is_negative() {
            Interval {
                lo: &self.hi * s,
                hi: &self.lo * s,
            }
        } else {
            Interval {
                lo: &self.lo * s,
                hi: &self.hi * s,
            }
        }
    }

    pub fn translate(&self, s: &Rational) -> Interval {
        Interval {
            lo: &self.lo + s,
            hi: &self.hi + s,
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Exact range of x^k over the interval; even powers straddling zero
    /// tighten to [0, max endpoint^k].
    pub fn pow(&self, k: u32) -> Interval {
        if k == 0 {
            return Interval::point(Rational::one());
        }
        let lo_k = self.lo.pow(k);
        let hi_k = self.hi.pow(k);
        if k % 2 == 1 {
            return Interval { lo: lo_k, hi: hi_k };
        }
        let peak = lo_k.max(hi_k);
        if self.lo.is_negative() && self.hi.is_positive() {
            Interval {
                lo: Rational::zero(),
                hi: peak,
            }
        } else if !self.lo.is_negative() {
            Interval {
                lo: self.lo.pow(k),
                hi: self.hi.pow(k),
            }
        } else {
            Interval {
                lo: self.hi.pow(k),
                hi: self.lo.pow(k),
            }
        }
    }

    /// Mid-point and radius, with radius the full width (upper - lower).
    pub fn mid_rad(&self) -> (Rational, Rational) {
        let mid = (&self.hi + &self.lo) * Rational::new(1, 2);
        let rad = &self.hi - &self.lo;
        (mid, rad)
    }

    pub fn mid(&self) -> Rational {
        self.mid_rad().0
    }

    /// Half of the full-width radius: the magnitude a generator column
    /// built from this interval carries.
    pub fn half_rad(&self) -> Rational {
        (&self.hi - &self.lo) * Rational::new(1, 2)
    }

    fn split(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval::new(self.lo.clone(), m.clone()),
            Interval::new(m, self.hi.clone()),
        )
    }
}

/// Axis-aligned box: one interval per variable of a `VarSpace`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IvBox(pub Vec<Interval>);

impl IvBox {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains_point(&self, point: &[Rational]) -> bool {
        self.0.len() == point.len() && self.0.iter().zip(point).all(|(iv, v)| iv.contains(v))
    }

    pub fn contains_box(&self, other: &IvBox) -> bool {
        self.0.len() == other.0.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| a.contains_interval(b))
    }
}

/// Affine-in-time interval function I(t) = a + b*t, evaluated for t >= 0.
///
/// Its time derivative is the constant interval `b`, which is what makes
/// the strict derivative-premise comparison a pair of rational inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineIntervalFn {
    pub a: Interval,
    pub b: Interval,
}

impl AffineIntervalFn {
    /// Pure-slope remainder [-s*t, s*t].
    pub fn symmetric_slope(s: Rational) -> Self {
        AffineIntervalFn {
            a: Interval::zero(),
            b: Interval::symmetric(s),
        }
    }

    pub fn zero() -> Self {
        AffineIntervalFn {
            a: Interval::zero(),
            b: Interval::zero(),
        }
    }

    /// I(t) at a fixed non-negative time.
    pub fn at(&self, t: &Rational) -> Interval {
        assert!(!t.is_negative(), "time must be non-negative");
        self.a.add(&self.b.scale(t))
    }

    /// Exact hull of { a + b*t : t in t_range } for t_range >= 0.
    pub fn hull_over(&self, t_range: &Interval) -> Interval {
        assert!(!t_range.lo.is_negative(), "time range must be non-negative");
        self.a.add(&self.b.mul(t_range))
    }
}

/// Sound interval enclosure of `p` over `domain`, monomial-wise: each
/// monomial is the coefficient times the product of per-variable powers
/// (with even-power tightening), and terms sum by interval addition.
/// Per-variable powers are cached; defect polynomials reuse them heavily.
pub fn eval_poly(p: &Polynomial, domain: &IvBox) -> Interval {
    assert_eq!(
        domain.dim(),
        p.space().len(),
        "domain does not cover the polynomial's variables"
    );
    let mut power_cache: Vec<Vec<Interval>> = domain
        .0
        .iter()
        .map(|iv| vec![Interval::point(Rational::one()), iv.clone()])
        .collect();
    let mut acc = Interval::zero();
    for (m, c) in p.terms() {
        let mut term = Interval::point(c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                while power_cache[i].len() <= e as usize {
                    let next = domain.0[i].pow(power_cache[i].len() as u32);
                    power_cache[i].push(next);
                }
                term = term.mul(&power_cache[i][e as usize]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// [`eval_poly`] with uniform domain subdivision: every interval is split
/// in half `depth` times and the per-cell enclosures are hulled. Depth 0
/// is plain monomial-wise evaluation.
pub fn eval_poly_subdivided(p: &Polynomial, domain: &IvBox, depth: u32) -> Interval {
    if depth == 0 {
        return eval_poly(p, domain);
    }
    let pieces: Vec<Vec<Interval>> = domain
        .0
        .iter()
        .map(|iv| {
            let mut cells = vec![iv.clone()];
            for _ in 0..depth {
                cells = cells
                    .into_iter()
                    .flat_map(|c| {
                        if c.lo == c.hi {
                            vec![c]
                        } else {
                            let (lo, hi) = c.split();
                            vec![lo, hi]
                        }
                    })
                    .collect();
            }
            cells
        })
        .collect();
    let mut result: Option<Interval> = None;
    let mut idx = vec![0usize; pieces.len()];
    loop {
        let cell = IvBox(
            idx.iter()
                .zip(&pieces)
                .map(|(&i, p)| p[i].clone())
                .collect(),
        );
        let enc = eval_poly(p, &cell);
        result = Some(match result {
            None => enc,
            Some(r) => r.hull(&enc),
        });
        // mixed-radix increment over the cell grid
        let mut carry = true;
        for (i, cells) in idx.iter_mut().zip(&pieces) {
            if !carry {
                break;
            }
            *i += 1;
            if *i == cells.len() {
                *i = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            break;
        }
    }
    result.unwrap_or_else(Interval::zero)
}
