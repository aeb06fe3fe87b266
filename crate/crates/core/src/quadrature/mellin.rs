use serde::{Deserialize, Serialize};

use super::gauss::{integrate_panels, integrate_piecewise_detailed, panels};
use crate::error::{Error, Result};
use crate::numeric::U;
use crate::weights::{EnvelopeParams, PeriodicExpansion, WeightSpec};

/// Largest finite-part limit X accepted by `mellin_numeric`.
pub const MAX_FINITE_PART: f64 = 1e7;

const FINITE_TOL: f64 = 1e-12;

/// How the tail ∫_X^∞ is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TailEnvelope {
    /// Exact Euler–Maclaurin expansion of the lattice sum (polynomial densities, integer X).
    Periodic,
    /// |W(t)| ≤ c·t^{−power}, with W ≥ 0 when `nonnegative`.
    Pointwise { c: f64, power: f64, nonnegative: bool },
}

impl TailEnvelope {
    /// 0 ≤ G₁(t) ≤ 1/t².
    pub fn g1() -> Self {
        Self::Pointwise { c: 1.0, power: 2.0, nonnegative: true }
    }

    /// 0 ≤ H₁(t) ≤ 2.1/t.
    pub fn h1() -> Self {
        Self::Pointwise { c: 2.1, power: 1.0, nonnegative: true }
    }

    /// |H(t)| ≤ ‖H‖∞.
    pub fn sup_norm(env: &EnvelopeParams) -> Self {
        Self::Pointwise { c: env.sup_norm, power: 0.0, nonnegative: false }
    }

    pub fn tag(&self) -> String {
        match self {
            Self::Periodic => "periodic-expansion".into(),
            Self::Pointwise { c, power, nonnegative } => {
                format!("pointwise{}{}*t^-{}", if *nonnegative { "+" } else { "" }, c, power)
            }
        }
    }
}

/// Enclosure of ∫₁^∞ W(t)t^{−σ}dt, with σ = s for G weights and σ = s + 1 for H weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MellinBracket {
    pub lo: f64,
    pub hi: f64,
    pub finite_part_limit: f64,
    pub tail_bound_used: String,
    pub finite_part: f64,
    pub finite_error: f64,
    pub tail: (f64, f64),
}

impl MellinBracket {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

pub fn mellin_numeric(weight: &WeightSpec, s: f64, x_limit: f64, tail: &TailEnvelope) -> Result<MellinBracket> {
    if !s.is_finite() {
        return Err(Error::Domain(format!("s = {} is not finite", s)));
    }
    if !(x_limit >= 1.0 && x_limit.is_finite()) {
        return Err(Error::InvalidArgument(format!("finite-part limit X = {} must be ≥ 1", x_limit)));
    }
    if x_limit > MAX_FINITE_PART {
        return Err(Error::Resource(format!("X = {} exceeds {}", x_limit, MAX_FINITE_PART)));
    }
    let sigma = if weight.is_g_type() { s } else { s + 1.0 };
    let tail_range = tail_bound(weight, sigma, x_limit, tail)?;

    let bps = weight.breakpoints(1.0, x_limit)?;
    let (finite, err) = match weight {
        WeightSpec::Analytic(d) => {
            let ex = PeriodicExpansion::from_density(d)?;
            let f = |t: f64| ex.eval_cell(t.floor(), t) * t.powf(-sigma);
            let q = integrate_piecewise_detailed(&f, 1.0, x_limit, &bps, FINITE_TOL)?;
            let mag = |t: f64| ex.magnitude_cell(t.floor(), t) * t.powf(-sigma);
            let m = integrate_panels(&mag, &panels(1.0, x_limit, &bps)?, 1e-6);
            let terms = ex.terms.len() as f64;
            let rounding = (8.0 + 4.0 * terms) * U * (m.value.abs() * 1.001 + m.error);
            (q.value, q.error + rounding)
        }
        WeightSpec::Coefficients(c) => {
            let f = |t: f64| weight.eval(t).unwrap_or(f64::NAN) * t.powf(-sigma);
            let q = integrate_piecewise_detailed(&f, 1.0, x_limit, &bps, FINITE_TOL)?;
            let mag = |t: f64| {
                (1.0 + c.entries().iter().map(|&(r, cr)| (cr * (t / r).floor()).abs()).sum::<f64>()) * t.powf(-sigma)
            };
            let m = integrate_panels(&mag, &panels(1.0, x_limit, &bps)?, 1e-6);
            let rounding = (8.0 + 4.0 * c.len() as f64) * U * (m.value.abs() * 1.001 + m.error);
            (q.value, q.error + rounding)
        }
    };
    let pad = 4.0 * U * finite.abs();
    Ok(MellinBracket {
        lo: finite - err - pad + tail_range.0,
        hi: finite + err + pad + tail_range.1,
        finite_part_limit: x_limit,
        tail_bound_used: tail.tag(),
        finite_part: finite,
        finite_error: err,
        tail: tail_range,
    })
}

fn tail_bound(weight: &WeightSpec, sigma: f64, x: f64, tail: &TailEnvelope) -> Result<(f64, f64)> {
    match tail {
        TailEnvelope::Periodic => match weight {
            WeightSpec::Analytic(d) => PeriodicExpansion::from_density(d)?.tail(sigma, x),
            WeightSpec::Coefficients(_) => {
                Err(Error::InvalidArgument("periodic tail needs an analytic density".into()))
            }
        },
        TailEnvelope::Pointwise { c, power, nonnegative } => {
            let e = power + sigma;
            if !(e > 1.0) {
                return Err(Error::Domain(format!("tail ∫ t^-{} diverges", e)));
            }
            let b = c * x.powf(1.0 - e) / (e - 1.0) * (1.0 + 4.0 * U);
            Ok(if *nonnegative { (0.0, b) } else { (-b, b) })
        }
    }
}
