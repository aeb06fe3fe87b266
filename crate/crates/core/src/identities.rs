//! Residuals of the integral identities tying M, m, m₁ and m̌ to the weights.

use serde::{Deserialize, Serialize};

use crate::arith::{evaluate, Tables};
use crate::error::{Error, Result};
use crate::numeric::{Neumaier, U};
use crate::quadrature::{identity_kernel_integral, KernelForm};
use crate::weights::{epsilon1, h1, Density, DensityKind, Polynomial, WeightSpec};

/// Base tolerance of every residual check.
pub const BASE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    fn new(name: &str, x: f64, lhs: f64, rhs: f64, numeric_error: f64, panels: usize) -> Self {
        let residual = lhs - rhs;
        let tolerance = BASE_TOL * (1.0 + panels as f64 * 16.0 * U) + numeric_error;
        Self { name: name.into(), x, lhs, rhs, residual, tolerance, pass: residual.abs() <= tolerance }
    }
}

fn g_density(w: &WeightSpec) -> Result<&Density> {
    match w {
        WeightSpec::Analytic(d) if d.kind == DensityKind::G => Ok(d),
        _ => Err(Error::InvalidArgument(format!("{} is not a G-type density", w.name()))),
    }
}

/// m₁(x) = ∫₁ˣ (M(x/t)/(x/t))G(t)dt/t + (1/x)∫_{1/x}¹ g(y)/y dy.
pub fn residual_thm1_g(tables: &Tables, x: f64, g: &WeightSpec) -> Result<IdentityReport> {
    let d = g_density(g)?;
    let p = evaluate(tables, x)?;
    let k = identity_kernel_integral(tables, x, g, KernelForm::BigM)?;
    let rhs = k.value + d.integral_over_y(1.0 / x) / x;
    Ok(IdentityReport::new("thm1g", x, p.m1, rhs, k.error + p.error_radius, k.panels))
}

/// m₁(x) = ∫₁ˣ m(x/t)H(t)dt/t² − ∫₀^{1/x} h(y)dy, for an H density or a coefficient weight.
pub fn residual_thm1_h(tables: &Tables, x: f64, h: &WeightSpec) -> Result<IdentityReport> {
    let tail = match h {
        WeightSpec::Analytic(d) if d.kind == DensityKind::H => d.integral_to(1.0 / x),
        WeightSpec::Coefficients(c) => c.integral_to(1.0 / x),
        _ => return Err(Error::InvalidArgument(format!("{} is not an H-type weight", h.name()))),
    };
    let p = evaluate(tables, x)?;
    let k = identity_kernel_integral(tables, x, h, KernelForm::SmallM)?;
    let rhs = k.value - tail;
    Ok(IdentityReport::new("thm1h", x, p.m1, rhs, k.error + p.error_radius, k.panels))
}

/// The G₁ integral term (1/x)∫₁ˣ M(x/t)ε₁′(t)dt, summed exactly as Σ_n M(n)(ε₁(b) − ε₁(a))
/// over the intervals where M(x/t) = M(n).
pub fn bal2_integral(tables: &Tables, x: f64) -> Result<(f64, f64, usize)> {
    let nx = tables.check_x(x)?;
    let mu = tables.mu();
    let mut acc = Neumaier::new();
    for n in 1..=nx {
        let big = mu.mertens(n);
        if big == 0 {
            continue;
        }
        let hi = if n == 1 { x } else { x / n as f64 };
        let lo = (x / (n + 1) as f64).max(1.0);
        if hi > lo {
            acc.add(big as f64 * (epsilon1(hi)? - epsilon1(lo)?));
        }
    }
    let v = acc.value() / x;
    let err = (acc.error_bound() + 8.0 * U * acc.abs_sum()) / x + U * v.abs();
    Ok((v, err, nx as usize))
}

/// m₁(x) = (1/x)∫₁ˣ M(x/t)ε₁′(t)dt + 8/(3x) − (4/x²)(1 − 1/(3x²)).
pub fn residual_bal2(tables: &Tables, x: f64) -> Result<IdentityReport> {
    let p = evaluate(tables, x)?;
    let (v, err, n) = bal2_integral(tables, x)?;
    let rhs = v + 8.0 / (3.0 * x) - 4.0 / (x * x) * (1.0 - 1.0 / (3.0 * x * x));
    Ok(IdentityReport::new("bal2", x, p.m1, rhs, err + p.error_radius, n))
}

/// (m̌(x) − 1) − m₁(x) = ∫₁ˣ m₁(x/t)G(t)dt/t − (1/x)∫_{1/x}¹ g/y − ∫₀^{1/x} g.
pub fn residual_mchliss(tables: &Tables, x: f64, g: &WeightSpec) -> Result<IdentityReport> {
    let d = g_density(g)?;
    let p = evaluate(tables, x)?;
    let k = identity_kernel_integral(tables, x, g, KernelForm::M1)?;
    let lhs = (p.m_check - 1.0) - p.m1;
    let rhs = k.value - d.integral_over_y(1.0 / x) / x - d.integral_to(1.0 / x);
    Ok(IdentityReport::new("mchliss", x, lhs, rhs, k.error + 2.0 * p.error_radius, k.panels))
}

/// ∫₀^{1/x} h₁ and the shape of x ↦ −x∫₀^{1/x}h₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H1Remainder {
    pub x: f64,
    pub integral: f64,
    /// −x∫₀^{1/x}h₁, which increases to 2
    pub scaled: f64,
    pub within_bound: bool,
    pub nonnegative: bool,
    pub increasing: bool,
}

pub fn residual_h1_remainder(x: f64) -> Result<H1Remainder> {
    if !(x >= 1.0) {
        return Err(Error::Domain(format!("x = {} must be ≥ 1", x)));
    }
    let a = 1.0 / x;
    let d = h1();
    let integral = d.integral_to(a);
    // −x·P(1/x) = q(1/x) with q(a) = −P(a)/a, P the antiderivative vanishing at 0
    let p = d.poly.antiderivative();
    let q = Polynomial(p.0.iter().skip(1).map(|c| -c).collect());
    let scaled = q.eval(a);
    // d/dx q(1/x) = −q′(a)/x²
    let increasing = q.derivative().eval(a) <= 4.0 * U;
    Ok(H1Remainder {
        x,
        integral,
        scaled,
        within_bound: integral.abs() <= 2.0 / x * (1.0 + 4.0 * U),
        nonnegative: scaled >= 0.0,
        increasing,
    })
}

/// n points log-uniform in [lo, hi] from the golden-ratio Weyl sequence.
pub fn sample_points(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let phi = 0.618_033_988_749_894_9;
    let (a, b) = (lo.ln(), hi.ln());
    (1..=n)
        .map(|i| {
            let u = (i as f64 * phi).fract();
            (a + u * (b - a)).exp().clamp(lo, hi)
        })
        .collect()
}
