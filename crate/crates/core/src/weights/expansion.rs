use super::density::{Density, DensityKind, Polynomial};
use crate::error::{Error, Result};

const MAX_DEGREE: usize = 4;

/// Bernoulli polynomial B_r, r ≤ 5.
fn bernoulli_poly(r: usize) -> Polynomial {
    Polynomial(match r {
        0 => vec![1.0],
        1 => vec![-0.5, 1.0],
        2 => vec![1.0 / 6.0, -1.0, 1.0],
        3 => vec![0.0, 0.5, -1.5, 1.0],
        4 => vec![-1.0 / 30.0, 0.0, 1.0, -2.0, 1.0],
        5 => vec![0.0, -1.0 / 6.0, 0.0, 5.0 / 3.0, -2.5, 1.0],
        _ => unreachable!("Bernoulli polynomial degree > 5"),
    })
}

fn factorial(r: usize) -> f64 {
    (1..=r).map(|i| i as f64).product()
}

/// Exact expansion W(t) = Σ_k P_k({t})·t^{−k} of a lattice-sum weight of a polynomial
/// density (Euler–Maclaurin terminates after deg + 1 terms).
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicExpansion {
    pub terms: Vec<(u32, Polynomial)>,
}

impl PeriodicExpansion {
    pub fn from_density(d: &Density) -> Result<Self> {
        let deg = d.poly.degree();
        if deg > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("density degree {} exceeds {}", deg, MAX_DEGREE)));
        }
        let mut derivs = vec![d.poly.clone()];
        for _ in 0..deg {
            let next = derivs.last().unwrap().derivative();
            derivs.push(next);
        }
        // Σ_{0<n≤t} g(n/t) = t∫g + Σ_r Q_r({t}) t^{1−r}
        let q: Vec<Polynomial> = (1..=deg + 1)
            .map(|r| {
                let gd = &derivs[r - 1];
                let b = bernoulli_poly(r);
                let at0 = b.0[0] * gd.eval(0.0);
                let p = b.scale(gd.eval(1.0)).add(&Polynomial(vec![-at0]));
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                p.scale(sign / factorial(r))
            })
            .collect();
        let mass = d.poly.integral(0.0, 1.0);
        let mut terms = Vec::new();
        match d.kind {
            DensityKind::G => {
                if (1.0 - mass).abs() > 1e-14 {
                    terms.push((0, Polynomial(vec![1.0 - mass])));
                }
                for (i, p) in q.into_iter().enumerate() {
                    terms.push((i as u32 + 1, p.scale(-1.0)));
                }
            }
            DensityKind::H => {
                if mass.abs() > 1e-14 {
                    return Err(Error::InvalidArgument(format!("H density has ∫h = {} ≠ 0", mass)));
                }
                for (i, p) in q.into_iter().enumerate() {
                    let p = if i == 0 { Polynomial(vec![1.0]).add(&p.scale(-1.0)) } else { p.scale(-1.0) };
                    terms.push((i as u32, p));
                }
            }
        }
        terms.retain(|(_, p)| p.0.iter().any(|c| c.abs() > 1e-15));
        Ok(Self { terms })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_cell(t.floor(), t)
    }

    /// W(t) for t in the cell [k, k + 1].
    pub fn eval_cell(&self, k: f64, t: f64) -> f64 {
        let f = t - k;
        let u = 1.0 / t;
        self.terms.iter().map(|(e, p)| p.eval(f) * u.powi(*e as i32)).sum()
    }

    /// Σ |p|(f)·t^{−k} with absolute coefficients: scale of the rounding error of `eval_cell`.
    pub fn magnitude_cell(&self, k: f64, t: f64) -> f64 {
        let f = (t - k).abs();
        let u = 1.0 / t;
        self.terms.iter().map(|(e, p)| p.0.iter().rev().fold(0.0, |acc, c| acc * f + c.abs()) * u.powi(*e as i32)).sum()
    }

    /// Enclosure of ∫_X^∞ W(t)t^{−σ}dt for integer X ≥ 1: for each term with exponent e = k + σ,
    /// the mean contributes exactly p̄·X^{1−e}/(e−1) and the zero-mean part at most
    /// sup|Π|·X^{−e} (integration by parts with the periodic antiderivative Π, Π(0) = 0).
    pub fn tail(&self, sigma: f64, x: f64) -> Result<(f64, f64)> {
        if !(x >= 1.0 && x.fract() == 0.0) {
            return Err(Error::Domain(format!("periodic tail needs an integer X ≥ 1, got {}", x)));
        }
        let (mut lo, mut hi) = (0.0, 0.0);
        for (k, p) in &self.terms {
            let e = *k as f64 + sigma;
            let mean = p.integral(0.0, 1.0);
            let osc = p.add(&Polynomial(vec![-mean]));
            if mean.abs() > 1e-15 {
                if !(e > 1.0) {
                    return Err(Error::Domain(format!("tail diverges: exponent {} with nonzero mean", e)));
                }
                let m = mean * x.powf(1.0 - e) / (e - 1.0);
                lo += m;
                hi += m;
            }
            if !osc.is_zero() {
                if !(e > 0.0) {
                    return Err(Error::Domain(format!("tail diverges: exponent {}", e)));
                }
                let b = sup_abs(&osc.antiderivative()) * x.powf(-e);
                lo -= b;
                hi += b;
            }
        }
        let pad = 4.0 * f64::EPSILON * (lo.abs() + hi.abs());
        Ok((lo - pad, hi + pad))
    }
}

/// Upper bound of sup_{[0,1]}|p| from a grid plus a Lipschitz margin.
fn sup_abs(p: &Polynomial) -> f64 {
    const GRID: usize = 4096;
    let lip: f64 = p.derivative().0.iter().map(|c| c.abs()).sum();
    let m = (0..=GRID).map(|i| p.eval(i as f64 / GRID as f64).abs()).fold(0.0, f64::max);
    m + lip / (2.0 * GRID as f64)
}

/// S_i(k) = Σ_{n=1}^k n^i for i = 0..=4, computed exactly in u128 then rounded.
pub fn power_sums(k: u64) -> [f64; 5] {
    let k = k as u128;
    let s1 = k * (k + 1) / 2;
    let s2 = k * (k + 1) * (2 * k + 1) / 6;
    let s3 = s1 * s1;
    let s4 = if k == 0 { 0 } else { k * (k + 1) * (2 * k + 1) * (3 * k * k + 3 * k - 1) / 30 };
    [k as f64, s1 as f64, s2 as f64, s3 as f64, s4 as f64]
}

/// Lattice-sum weight of a polynomial density on a panel inside [k, k+1):
/// Σ_{n≤k} g(n/t) = Σ_i a_i S_i(k) t^{−i}.
#[derive(Debug, Clone)]
pub struct PanelPolynomial {
    coeffs: Vec<f64>,
    g_type: bool,
}

impl PanelPolynomial {
    pub fn new(d: &Density, k: u64) -> Result<Self> {
        if d.poly.degree() > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("density degree exceeds {}", MAX_DEGREE)));
        }
        if k > 10_000_000 {
            return Err(Error::Resource(format!("panel index {} too large for exact power sums", k)));
        }
        let s = power_sums(k);
        let coeffs = d.poly.0.iter().enumerate().map(|(i, a)| a * s[i]).collect();
        Ok(Self { coeffs, g_type: d.kind == DensityKind::G })
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let u = 1.0 / t;
        let s = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c);
        if self.g_type {
            1.0 - u * s
        } else {
            1.0 - s
        }
    }
}
