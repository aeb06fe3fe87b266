use super::coeffs::CoeffWeight;
use super::density::{Density, DensityKind, Polynomial};
use crate::arith::MuTable;
use crate::error::{Error, Result};
use crate::numeric::Neumaier;

/// Cost guard on the number of lattice points per call.
pub const MAX_LATTICE_TERMS: u64 = 10_000_000;

fn lattice_count(t: f64) -> Result<u64> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::Domain(format!("lattice sum needs t ≥ 1, got {}", t)));
    }
    let k = t.floor();
    if k > MAX_LATTICE_TERMS as f64 {
        return Err(Error::Resource(format!("lattice sum with {} terms exceeds {}", k, MAX_LATTICE_TERMS)));
    }
    Ok(k as u64)
}

/// Smallest q ≤ 720 making every coefficient an integer (to 1e-12), with the scaled polynomial.
fn integer_form(p: &Polynomial) -> Option<(f64, Polynomial)> {
    (1..=720).map(f64::from).find_map(|q| {
        let c: Vec<f64> = p.0.iter().map(|a| (a * q).round()).collect();
        let ok = p.0.iter().zip(&c).all(|(a, r)| (a * q - r).abs() <= 1e-12 * r.abs().max(1.0));
        ok.then_some((q, Polynomial(c)))
    })
}

fn lattice_sum(d: &Density, t: f64) -> Result<f64> {
    let k = lattice_count(t)?;
    // a coefficient like 16/3 carries a rounding error that would add up coherently over k terms
    let (q, p) = integer_form(&d.poly).unwrap_or((1.0, d.poly.clone()));
    let mut acc = Neumaier::new();
    for n in 1..=k {
        acc.add(p.eval(n as f64 / t));
    }
    Ok(acc.value() / q)
}

/// G(t) = 1 − (1/t)·Σ_{n≤t} g(n/t).
pub fn eval_g(d: &Density, t: f64) -> Result<f64> {
    if d.kind != DensityKind::G {
        return Err(Error::InvalidArgument(format!("{} is not a G-type density", d.name)));
    }
    Ok(1.0 - lattice_sum(d, t)? / t)
}

/// H(t) = 1 − Σ_{n≤t} h(n/t).
pub fn eval_h(d: &Density, t: f64) -> Result<f64> {
    if d.kind != DensityKind::H {
        return Err(Error::InvalidArgument(format!("{} is not an H-type density", d.name)));
    }
    Ok(1.0 - lattice_sum(d, t)?)
}

/// ⌊t/r⌋ for r > 0, exact for binary64 inputs: near-integer quotients are settled
/// by the sign of the fused residual t − n·r.
pub fn floor_div(t: f64, r: f64) -> f64 {
    let q = t / r;
    let n = q.round();
    if (q - n).abs() <= 4.0 * f64::EPSILON * q.abs().max(1.0) {
        if (-n).mul_add(r, t) >= 0.0 {
            n
        } else {
            n - 1.0
        }
    } else {
        q.floor()
    }
}

/// {t/r} computed from the fused residual t − ⌊t/r⌋·r.
pub fn frac_div(t: f64, r: f64) -> f64 {
    let f = floor_div(t, r);
    ((-f).mul_add(r, t) / r).clamp(0.0, 1.0)
}

/// Both evaluations of a coefficient weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HCoeffForms {
    /// 1 − Σ c_r ⌊t/r⌋
    pub floor_form: f64,
    /// 1 + Σ c_r {t/r}
    pub fractional_form: f64,
}

pub fn eval_h_coeffs(w: &CoeffWeight, t: f64) -> HCoeffForms {
    let mut fl = Neumaier::new();
    let mut fr = Neumaier::new();
    for &(r, c) in w.entries() {
        fl.add(c * floor_div(t, r));
        fr.add(c * frac_div(t, r));
    }
    HCoeffForms { floor_form: 1.0 - fl.value(), fractional_form: 1.0 + fr.value() }
}

/// ε₁(t) = 1/3 − 1/(3t) + (4/3)({t}³ − 3{t}²/2 + {t}/2)/t² − (1/3)({t}⁴ − 2{t}³ + {t}²)/t³.
pub fn epsilon1(t: f64) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("ε₁ needs t ≥ 1, got {}", t)));
    }
    let f = t - t.floor();
    let b3 = f * (f * (f - 1.5) + 0.5);
    let c4 = f * f * (f - 1.0) * (f - 1.0);
    Ok(1.0 / 3.0 - 1.0 / (3.0 * t) + (4.0 / 3.0) * b3 / (t * t) - c4 / (3.0 * t * t * t))
}

/// Euler–Maclaurin approximation of H₁: [(10/3)({t}² − {t}) + 1]/t with error bound 1.56/(6t²).
pub fn em_h1_envelope(t: f64) -> Result<(f64, f64)> {
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("envelope needs t ≥ 1, got {}", t)));
    }
    let f = t - t.floor();
    Ok((((10.0 / 3.0) * (f * f - f) + 1.0) / t, 1.56 / (6.0 * t * t)))
}

/// S_K(t) = Σ_{k≤K} μ(k){t/k}.
pub fn partial_moebius_fractional_sum(table: &MuTable, k_max: u64, t: f64) -> Result<f64> {
    if k_max > table.limit() {
        return Err(Error::Range(format!("K = {} exceeds sieve limit {}", k_max, table.limit())));
    }
    let mut acc = Neumaier::new();
    for k in 1..=k_max {
        let u = table.mu(k);
        if u != 0 {
            acc.add(u as f64 * frac_div(t, k as f64));
        }
    }
    Ok(acc.value())
}
