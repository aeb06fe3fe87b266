use std::sync::OnceLock;

use super::series::{ell_series, m_series, PrefixSeries};
use super::sieve::{sieve_mu_with, MuTable, SieveOptions};
use crate::error::{Error, Result};
use crate::numeric::{Neumaier, U};

/// A sieve table together with its m series and a lazily built ℓ series.
#[derive(Debug)]
pub struct Tables {
    mu: MuTable,
    m: PrefixSeries,
    ell: OnceLock<PrefixSeries>,
}

impl Tables {
    pub fn new(mu: MuTable) -> Self {
        let m = m_series(&mu);
        Self { mu, m, ell: OnceLock::new() }
    }

    pub fn sieve(limit: u64, opts: &SieveOptions) -> Result<Self> {
        Ok(Self::new(sieve_mu_with(limit, opts)?))
    }

    pub fn limit(&self) -> u64 {
        self.mu.limit()
    }

    pub fn mu(&self) -> &MuTable {
        &self.mu
    }

    pub fn m(&self) -> &PrefixSeries {
        &self.m
    }

    pub fn ell(&self) -> &PrefixSeries {
        self.ell.get_or_init(|| ell_series(&self.mu))
    }

    /// Fails with a range error unless `1 ≤ x < limit + 1`.
    pub fn check_x(&self, x: f64) -> Result<u64> {
        if !(x >= 1.0) || x >= (self.limit() + 1) as f64 {
            return Err(Error::Range(format!("x = {} outside [1, {}); sieve to a larger limit", x, self.limit() + 1)));
        }
        Ok(x.floor() as u64)
    }
}

/// M(x)/x, m(x), m₁(x) and m̌(x) at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationPoint {
    pub x: f64,
    pub m: f64,
    pub m1: f64,
    pub m_over_x: f64,
    pub m_check: f64,
    pub error_radius: f64,
}

pub fn evaluate(tables: &Tables, x: f64) -> Result<EvaluationPoint> {
    let n = tables.check_x(x)?;
    let big = tables.mu().mertens(n) as f64;
    let m = tables.m().value(n);
    let rm = tables.m().error_radius(n);
    let ell = tables.ell();
    let l = x.ln();
    let m_over_x = big / x;
    let m1 = m - m_over_x;
    let m_check = m * l - ell.value(n);
    let r_m1 = rm + U * m_over_x.abs() + U * m1.abs();
    let r_check = rm * l + 3.0 * U * (m * l).abs() + ell.error_radius(n) + U * m_check.abs();
    let error_radius = r_m1.max(r_check) * (1.0 + 8.0 * U) + 8.0 * U;
    Ok(EvaluationPoint { x, m, m1, m_over_x, m_check, error_radius })
}

/// m₁(x) − ∫₁ˣ M(u)u⁻² du, the integral summed exactly piecewise.
pub fn abel_residual(tables: &Tables, x: f64) -> Result<f64> {
    let n = tables.check_x(x)?;
    let mu = tables.mu();
    let mut acc = Neumaier::new();
    for k in 1..n {
        let big = mu.mertens(k);
        if big != 0 {
            let kf = k as f64;
            acc.add(big as f64 / (kf * (kf + 1.0)));
        }
    }
    let nf = n as f64;
    acc.add(mu.mertens(n) as f64 * ((x - nf) / (nf * x)));
    let m1 = tables.m().value(n) - mu.mertens(n) as f64 / x;
    Ok(m1 - acc.value())
}
