use std::sync::OnceLock;

use super::SpecialValue;
use crate::error::{Error, Result};
use crate::numeric::{Neumaier, U};

const N: usize = 10;
const MAX_K: usize = 14;

/// B_{2k} for k = 1..=15 as (numerator, denominator).
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// B_{2k}/(2k)! for k = 1..=15.
fn em_coeffs() -> &'static [f64; 15] {
    static C: OnceLock<[f64; 15]> = OnceLock::new();
    C.get_or_init(|| {
        let mut out = [0.0; 15];
        let mut fact = 1.0f64;
        for (k, slot) in out.iter_mut().enumerate() {
            let m = 2 * (k + 1);
            fact *= ((m - 1) * m) as f64;
            let (a, b) = BERNOULLI[k];
            *slot = a / b / fact;
        }
        out
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Form {
    Zeta,
    /// ζ(s) − 1/(s−1)
    Regular,
    /// (ζ(s) − ζ(0))/s
    Divided,
}

fn phi(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        z.exp_m1() / z
    }
}

/// Euler–Maclaurin with N = 10 and the real-argument remainder bound
/// |R_K| ≤ |first omitted term|, valid for s > −(2K+1).
fn euler_maclaurin(s: f64, form: Form) -> SpecialValue {
    let nf = N as f64;
    let l = nf.ln();
    let mut acc = Neumaier::new();
    let mut abs_terms = 0.0;
    let mut push = |acc: &mut Neumaier, x: f64| {
        acc.add(x);
        abs_terms += x.abs();
    };
    match form {
        Form::Zeta | Form::Regular => {
            for n in 1..N {
                push(&mut acc, (n as f64).powf(-s));
            }
            let pole = if form == Form::Zeta { nf.powf(1.0 - s) / (s - 1.0) } else { -l * phi((1.0 - s) * l) };
            push(&mut acc, pole);
            push(&mut acc, 0.5 * nf.powf(-s));
        }
        Form::Divided => {
            for n in 2..N {
                let ln = (n as f64).ln();
                push(&mut acc, -ln * phi(-s * ln));
            }
            let p = phi(-s * l);
            push(&mut acc, nf / (s - 1.0) * (1.0 - l * p));
            push(&mut acc, -0.5 * l * p);
        }
    }
    let c = em_coeffs();
    let mut poch = if form == Form::Divided { 1.0 } else { s };
    let mut power = nf.powf(1.0 - s) / (nf * nf);
    let mut terms = [0.0f64; MAX_K + 1];
    for (k, t) in terms.iter_mut().enumerate() {
        *t = c[k] * poch * power;
        let a = s + (2 * k + 1) as f64;
        poch *= a * (a + 1.0);
        power /= nf * nf;
    }
    let mut best_k = 1;
    for k in 1..=MAX_K {
        if terms[k].abs() < terms[best_k].abs() {
            best_k = k;
        }
        if terms[k].abs() <= 1e-18 * (1.0 + acc.value().abs()) {
            best_k = k;
            break;
        }
    }
    for &t in &terms[..best_k] {
        push(&mut acc, t);
    }
    let value = acc.value();
    let abs_error = terms[best_k].abs() + 6.0 * U * abs_terms + acc.error_bound();
    SpecialValue { value, abs_error }
}

fn check_internal(s: f64) -> Result<()> {
    if !(s > -1.0 && s <= 60.0) {
        return Err(Error::Domain(format!("s = {} outside (−1, 60]", s)));
    }
    Ok(())
}

/// ζ(s) on the real axis for −0.99 ≤ s ≤ 30, |s − 1| ≥ 10⁻⁹.
pub fn zeta_real(s: f64) -> Result<SpecialValue> {
    if !(-0.99..=30.0).contains(&s) || (s - 1.0).abs() < 1e-9 {
        return Err(Error::Domain(format!("zeta_real needs s in [−0.99, 30] with |s − 1| ≥ 1e-9, got {}", s)));
    }
    Ok(euler_maclaurin(s, Form::Zeta))
}

/// ζ(s) − 1/(s−1), analytic on s > −1 (value γ at s = 1).
pub fn zeta_reg(s: f64) -> Result<SpecialValue> {
    check_internal(s)?;
    Ok(euler_maclaurin(s, Form::Regular))
}

/// (ζ(s) + ½)/s, analytic on s > −1 except the pole at 1 (value ζ′(0) at s = 0).
pub fn zeta_divided(s: f64) -> Result<SpecialValue> {
    check_internal(s)?;
    if (s - 1.0).abs() < 1e-9 {
        return Err(Error::Domain("zeta_divided has a pole at s = 1".into()));
    }
    if s.abs() < 0.5 {
        Ok(euler_maclaurin(s, Form::Divided))
    } else {
        let z = euler_maclaurin(s, Form::Zeta);
        let value = (z.value + 0.5) / s;
        Ok(SpecialValue { value, abs_error: z.abs_error / s.abs() + 2.0 * U * value.abs() })
    }
}
