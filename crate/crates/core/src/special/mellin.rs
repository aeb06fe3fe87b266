use super::zeta::{zeta_divided, zeta_reg};
use super::SpecialValue;
use crate::error::{Error, Result};
use crate::numeric::U;
use crate::weights::EnvelopeParams;

fn check(s: f64) -> Result<()> {
    if !(s > -1.0) {
        return Err(Error::Domain(format!("closed form needs s > −1, got {}", s)));
    }
    Ok(())
}

/// ∫₁^∞ G₁(t)t^{−s}dt = 1/(s−1) − 8ζ(s)/((s+1)(s+3)), evaluated as
/// (s + 5 − 8ζ_reg(s))/((s+1)(s+3)); equals 3/4 − γ at s = 1.
pub fn mellin_g1_closed(s: f64) -> Result<SpecialValue> {
    check(s)?;
    let z = zeta_reg(s)?;
    let den = (s + 1.0) * (s + 3.0);
    let num = s + 5.0 - 8.0 * z.value;
    let value = num / den;
    let abs_error = 8.0 * z.abs_error / den.abs() + 4.0 * U * ((s + 5.0).abs() + 8.0 * z.value.abs()) / den.abs();
    Ok(SpecialValue { value, abs_error })
}

/// 1 + ∫₁^∞ G₁(t)t^{−s}dt = s/(s−1) − 8ζ(s)/((s+1)(s+3)); equals 7/4 − γ at s = 1.
pub fn mellin_g1check_closed(s: f64) -> Result<SpecialValue> {
    let g = mellin_g1_closed(s)?;
    let value = 1.0 + g.value;
    Ok(SpecialValue { value, abs_error: g.abs_error + U * value.abs() })
}

/// ∫₁^∞ H₁(t)t^{−s−1}dt = 1/s − 4(s−1)(5s+9)ζ(s)/(3s(s+1)(s+2)(s+3));
/// 2ζ′(0) + 41/18 at s = 0 and 2/9 at s = 1.
pub fn mellin_h1_closed(s: f64) -> Result<SpecialValue> {
    check(s)?;
    let q = (s + 1.0) * (s + 2.0) * (s + 3.0);
    if (s - 1.0).abs() < 0.5 {
        let z = zeta_reg(s)?;
        let w = 1.0 + (s - 1.0) * z.value;
        let c = 4.0 * (5.0 * s + 9.0) / (3.0 * s * q);
        let value = 1.0 / s - c * w;
        let abs_error =
            c.abs() * ((s - 1.0).abs() * z.abs_error + 2.0 * U * w.abs()) + 4.0 * U * (1.0 / s.abs() + (c * w).abs());
        Ok(SpecialValue { value, abs_error })
    } else {
        let d = zeta_divided(s)?;
        let a = (3.0 * s * s + 28.0 * s + 41.0) / (3.0 * q);
        let p = 4.0 * (s - 1.0) * (5.0 * s + 9.0) / (3.0 * q);
        let value = a - p * d.value;
        let abs_error = p.abs() * d.abs_error + 6.0 * U * (a.abs() + (p * d.value).abs());
        Ok(SpecialValue { value, abs_error })
    }
}

/// (1/(1−δ))·(sup/(I·δ))^δ·I with I = l1_mellin2: bound on ∫₁^∞|H(t)|t^{−2+δ}dt.
pub fn envelope_integral_bound(env: &EnvelopeParams, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("δ = {} not in (0, 1)", delta)));
    }
    let i = env.l1_mellin2;
    Ok((env.sup_norm / (i * delta)).powf(delta) * i / (1.0 - delta))
}

/// Integral factor for δ ∈ [0, 1): l1_mellin2 at δ = 0, the interpolation bound otherwise.
pub fn envelope_factor(env: &EnvelopeParams, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        Ok(env.l1_mellin2)
    } else {
        envelope_integral_bound(env, delta)
    }
}

/// The bound with the published H₂ envelope.
pub fn h2_integral_bound(delta: f64) -> Result<f64> {
    envelope_integral_bound(&EnvelopeParams::h2_published(), delta)
}

/// T_δ = e^{j/δ}, the rank from which the shift j/log T is at most δ.
pub fn envelope_rank(j: f64, delta: f64) -> f64 {
    (j / delta).exp()
}
