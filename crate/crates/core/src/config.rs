//! Pipeline configuration. Every knob that can change a verdict lives
//! here and is covered by the problem hash, so a certificate can only be
//! re-verified under the exact configuration that produced it.

use serde::{Deserialize, Serialize};

use crate::exact::{Rational, RationalizeMode};

/// Domain used for the remainder of the discrete-instant abstraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbstractionDomain {
    /// Evaluate the residue over [0, dt] x [-1,1]^p, as in the source rule.
    PaperLiteral,
    /// Evaluate at t = dt only; still sound since only p(dt, .) is abstracted.
    Tight,
}

/// Handling of the time generator in the interval reach construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeNormalization {
    /// Shift the center by g_t*dt/2 and emit g_t*dt/2, covering [0, dt] exactly.
    Tight,
    /// Emit g_t unscaled; sound only for dt <= 1 since `[0,dt]` is covered by `[-1,1]`.
    PaperLiteral,
}

/// Whether disturbance bounds enter the derivative-premise defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisturbanceMode {
    /// W = 0: reproduces nominal remainder bounds.
    Nominal,
    /// Defect widened by [-W, W] per disturbed dimension.
    Robust,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Picard iteration order for the flow polynomial.
    pub picard_order: u32,
    /// Total-degree cap on polynomial composition intermediates.
    pub degree_cap: u32,
    pub abstraction_domain: AbstractionDomain,
    pub time_normalization: TimeNormalization,
    pub disturbance_mode: DisturbanceMode,
    /// How float LP output becomes rational during witness exactification.
    pub rationalization: RationalizeMode,
    /// How decimal literals in problem files become rational. Dyadic keeps
    /// the exact binary value, never silently perturbing a constraint.
    pub literal_mode: RationalizeMode,
    pub cfrac_max_denominator: u64,
    /// Uniform subdivision depth for interval evaluation of remainders.
    pub subdivision_depth: u32,
    /// Feasibility / optimality tolerance of the float LP (converted to
    /// binary64 at the solver boundary).
    pub lp_tol: Rational,
    /// Simplex pivot cap; beyond it the search reports a numerical failure.
    pub lp_max_iter: usize,
    /// Optional generator inflation for rank-deficient outer zonotopes.
    /// When set, containment is certified against the inflated target and
    /// the certificate records the inflated zonotope.
    pub inflate_outer: Option<Rational>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            picard_order: 2,
            degree_cap: 12,
            abstraction_domain: AbstractionDomain::PaperLiteral,
            time_normalization: TimeNormalization::Tight,
            disturbance_mode: DisturbanceMode::Nominal,
            rationalization: RationalizeMode::Cfrac,
            literal_mode: RationalizeMode::Dyadic,
            cfrac_max_denominator: 1_000_000,
            subdivision_depth: 0,
            lp_tol: Rational::new(1, 1_000_000_000),
            lp_max_iter: 10_000,
            inflate_outer: None,
        }
    }
}

impl Config {
    /// Apply a `key=value` override (dots in keys normalize to underscores,
    /// so `lp.tol=1e-6` and `lp_tol=1e-6` are the same key).
    pub fn set_key(&mut self, key: &str, value: &str) -> Result<(), String> {
        let key = key.trim().replace('.', "_");
        let v = value.trim();
        let bad = |what: &str| format!("invalid value {v:?} for {what}");
        match key.as_str() {
            "picard_order" => self.picard_order = v.parse().map_err(|_| bad("picard_order"))?,
            "degree_cap" => self.degree_cap = v.parse().map_err(|_| bad("degree_cap"))?,
            "abstraction_domain" => {
                self.abstraction_domain = match v {
                    "paper-literal" => AbstractionDomain::PaperLiteral,
                    "tight" => AbstractionDomain::Tight,
                    _ => return Err(bad("abstraction_domain")),
                }
            }
            "time_normalization" => {
                self.time_normalization = match v {
                    "paper-literal" => TimeNormalization::PaperLiteral,
                    "tight" => TimeNormalization::Tight,
                    _ => return Err(bad("time_normalization")),
                }
            }
            "disturbance_mode" => {
                self.disturbance_mode = match v {
                    "nominal" => DisturbanceMode::Nominal,
                    "robust" => DisturbanceMode::Robust,
                    _ => return Err(bad("disturbance_mode")),
                }
            }
            "rationalization" => {
                self.rationalization = match v {
                    "cfrac" => RationalizeMode::Cfrac,
                    "dyadic" => RationalizeMode::Dyadic,
                    _ => return Err(bad("rationalization")),
                }
            }
            "literal_mode" => {
                self.literal_mode = match v {
                    "cfrac" => RationalizeMode::Cfrac,
                    "dyadic" => RationalizeMode::Dyadic,
                    _ => return Err(bad("literal_mode")),
                }
            }
            "cfrac_max_denominator" => {
                self.cfrac_max_denominator = v.parse().map_err(|_| bad("cfrac_max_denominator"))?
            }
            "subdivision_depth" => {
                self.subdivision_depth = v.parse().map_err(|_| bad("subdivision_depth"))?
            }
            "lp_tol" => self.lp_tol = v.parse().map_err(|_| bad("lp_tol"))?,
            "lp_max_iter" => self.lp_max_iter = v.parse().map_err(|_| bad("lp_max_iter"))?,
            "inflate_outer" => {
                self.inflate_outer = Some(v.parse().map_err(|_| bad("inflate_outer"))?)
            }
            _ => return Err(format!("unknown config key {key:?}")),
        }
        Ok(())
    }
}
