use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauss::{adaptive_panel, panels, MAX_PANELS};
use crate::arith::Tables;
use crate::error::{Error, Result};
use crate::numeric::{Neumaier, U};
use crate::weights::{PeriodicExpansion, WeightSpec};

/// Which step function multiplies the weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelForm {
    /// ∫₁ˣ (M(x/t)/(x/t))·W(t)dt/t
    #[serde(rename = "M-kernel")]
    BigM,
    /// ∫₁ˣ m(x/t)·W(t)dt/t²
    #[serde(rename = "m-kernel")]
    SmallM,
    /// ∫₁ˣ m₁(x/t)·W(t)dt/t
    #[serde(rename = "m1-kernel")]
    M1,
}

impl fmt::Display for KernelForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BigM => "M-kernel",
            Self::SmallM => "m-kernel",
            Self::M1 => "m1-kernel",
        })
    }
}

impl FromStr for KernelForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "M-kernel" => Ok(Self::BigM),
            "m" | "m-kernel" => Ok(Self::SmallM),
            "m1" | "m1-kernel" => Ok(Self::M1),
            _ => Err(Error::InvalidArgument(format!("unknown kernel form {:?}", s))),
        }
    }
}

/// The weight factor: a lattice-sum weight or the constant 1.
#[derive(Debug, Clone, Copy)]
pub enum KernelWeight<'a> {
    Unit,
    Weight(&'a WeightSpec),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelIntegral {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Default absolute tolerance of kernel integrals.
pub const KERNEL_TOL: f64 = 1e-10;

pub fn identity_kernel_integral(
    tables: &Tables,
    x: f64,
    weight: &WeightSpec,
    form: KernelForm,
) -> Result<KernelIntegral> {
    kernel_integral(tables, x, KernelWeight::Weight(weight), form, KERNEL_TOL)
}

/// Jump points x/k of n ↦ step(x/t) together with the weight's own breakpoints, inside (1, x).
pub fn kernel_breakpoints(x: f64, weight: KernelWeight<'_>) -> Result<Vec<f64>> {
    let n = x.floor();
    if 2.0 * n > MAX_PANELS as f64 {
        return Err(Error::Resource(format!(
            "x = {} needs about {} panels (limit {}); use a smaller x",
            x,
            2.0 * n,
            MAX_PANELS
        )));
    }
    let mut bps: Vec<f64> = (2..=n as u64).map(|k| x / k as f64).filter(|&p| p > 1.0 && p < x).collect();
    if let KernelWeight::Weight(w) = weight {
        bps.extend(w.breakpoints(1.0, x)?);
    }
    if bps.len() > MAX_PANELS {
        return Err(Error::Resource(format!("{} panels exceed {}; use a smaller x", bps.len(), MAX_PANELS)));
    }
    bps.sort_unstable_by(f64::total_cmp);
    bps.dedup();
    Ok(bps)
}

enum Cell {
    Unit,
    Expansion(PeriodicExpansion),
    Piecewise(WeightSpec),
}

pub fn kernel_integral(
    tables: &Tables,
    x: f64,
    weight: KernelWeight<'_>,
    form: KernelForm,
    tol: f64,
) -> Result<KernelIntegral> {
    let nx = tables.check_x(x)?;
    if x == 1.0 {
        return Ok(KernelIntegral { value: 0.0, error: 0.0, panels: 0 });
    }
    let cell = match weight {
        KernelWeight::Unit => Cell::Unit,
        KernelWeight::Weight(WeightSpec::Analytic(d)) => Cell::Expansion(PeriodicExpansion::from_density(d)?),
        KernelWeight::Weight(w) => Cell::Piecewise(w.clone()),
    };
    let bps = kernel_breakpoints(x, weight)?;
    let ps = panels(1.0, x, &bps)?;
    let mu = tables.mu();
    let ms = tables.m();
    let span = x - 1.0;

    let per_panel = |&(a, b): &(f64, f64)| -> Result<(f64, f64)> {
        let mid = 0.5 * (a + b);
        let n = ((x / mid).floor() as u64).clamp(1, nx);
        let k = mid.floor();
        let c = match &cell {
            Cell::Piecewise(w) => w.eval(mid)?,
            _ => 1.0,
        };
        let w = |t: f64| match &cell {
            Cell::Expansion(ex) => ex.eval_cell(k, t),
            _ => c,
        };
        let tol = tol * (b - a) / span;
        let big = mu.mertens(n) as f64 / x;
        let m = ms.value(n);
        let rm = ms.error_radius(n);
        Ok(match form {
            KernelForm::BigM => {
                let r = adaptive_panel(&w, a, b, tol);
                let v = big * r.value;
                (v, big.abs() * (r.error + 64.0 * U * r.abs) + U * v.abs())
            }
            KernelForm::SmallM => {
                let r = adaptive_panel(&|t: f64| w(t) / (t * t), a, b, tol);
                let v = m * r.value;
                (v, m.abs() * (r.error + 64.0 * U * r.abs) + rm * r.abs + U * v.abs())
            }
            KernelForm::M1 => {
                let r1 = adaptive_panel(&|t: f64| w(t) / t, a, b, 0.5 * tol);
                let r0 = adaptive_panel(&w, a, b, 0.5 * tol);
                let v1 = m * r1.value;
                let v0 = big * r0.value;
                let e = m.abs() * (r1.error + 64.0 * U * r1.abs)
                    + rm * r1.abs
                    + big.abs() * (r0.error + 64.0 * U * r0.abs)
                    + 2.0 * U * (v1.abs() + v0.abs());
                (v1 - v0, e)
            }
        })
    };

    let results: Vec<(f64, f64)> = ps.par_iter().map(per_panel).collect::<Result<_>>()?;
    let mut acc = Neumaier::new();
    let mut error = 0.0;
    for (v, e) in &results {
        acc.add(*v);
        error += e;
    }
    Ok(KernelIntegral { value: acc.value(), error: error + acc.error_bound(), panels: ps.len() })
}
