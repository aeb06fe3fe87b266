#![allow(clippy::excessive_precision)]

use rayon::prelude::*;

use crate::error::{Bracket, Error, Result};
use crate::numeric::{Neumaier, U};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Deepest bisection level inside one panel.
const MAX_DEPTH: u32 = 40;

/// Panels beyond which piecewise integration refuses to start.
pub const MAX_PANELS: usize = 10_000_000;

/// Kronrod 15-point value, embedded Gauss 7-point error estimate and Σ|w·f|.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = (WGK[7] * fc).abs();
    for i in 0..7 {
        let dx = h * XGK[i];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += WGK[i] * (f1 + f2);
        abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs(), abs * h.abs())
}

/// Value, error estimate and evaluation count of one adaptively refined panel.
#[derive(Debug, Clone, Copy, Default)]
pub struct PanelResult {
    pub value: f64,
    pub error: f64,
    /// quadrature of |f|, the scale for rounding allowances
    pub abs: f64,
    pub subpanels: usize,
}

/// Bisects [a, b] until every piece meets its share of `tol`; pieces that hit the depth
/// limit keep their estimate in `error`.
pub fn adaptive_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> PanelResult {
    let mut out = PanelResult::default();
    let mut acc = Neumaier::new();
    let mut stack = vec![(a, b, tol, 0u32)];
    while let Some((lo, hi, t, depth)) = stack.pop() {
        let (v, e, abs) = gk15(f, lo, hi);
        let floor = 50.0 * U * abs;
        if e <= t.max(floor) || depth >= MAX_DEPTH || hi - lo <= 4.0 * U * lo.abs().max(hi.abs()) {
            acc.add(v);
            out.error += e;
            out.abs += abs;
            out.subpanels += 1;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, 0.5 * t, depth + 1));
            stack.push((lo, mid, 0.5 * t, depth + 1));
        }
    }
    out.value = acc.value();
    out.error += acc.error_bound();
    out
}

/// Result of a piecewise integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// quadrature estimate plus summation rounding bound
    pub error: f64,
    pub panels: usize,
    pub subpanels: usize,
}

/// Splits [a, b] at the breakpoints inside it.
pub fn panels(a: f64, b: f64, breakpoints: &[f64]) -> Result<Vec<(f64, f64)>> {
    if !(a <= b) {
        return Err(Error::InvalidArgument(format!("interval [{}, {}] is reversed", a, b)));
    }
    if breakpoints.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidArgument("breakpoints must be sorted".into()));
    }
    let inner: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    if inner.len() >= MAX_PANELS {
        return Err(Error::Resource(format!("{} panels exceed {}", inner.len() + 1, MAX_PANELS)));
    }
    let mut out = Vec::with_capacity(inner.len() + 1);
    let mut lo = a;
    for p in inner {
        if p > lo {
            out.push((lo, p));
            lo = p;
        }
    }
    if b > lo || out.is_empty() {
        out.push((lo, b));
    }
    Ok(out)
}

/// Integrates panel by panel, each panel receiving tolerance in proportion to its length.
/// Panels are computed in parallel and summed in index order.
pub fn integrate_panels<F>(f: &F, panels: &[(f64, f64)], tol: f64) -> Quadrature
where
    F: Fn(f64) -> f64 + Sync,
{
    let total: f64 = panels.iter().map(|p| p.1 - p.0).sum();
    let share = |p: &(f64, f64)| if total > 0.0 { tol * (p.1 - p.0) / total } else { tol };
    let results: Vec<PanelResult> = if panels.len() >= 64 {
        panels.par_iter().map(|p| adaptive_panel(f, p.0, p.1, share(p))).collect()
    } else {
        panels.iter().map(|p| adaptive_panel(f, p.0, p.1, share(p))).collect()
    };
    let mut acc = Neumaier::new();
    let mut error = 0.0;
    let mut subpanels = 0;
    for r in &results {
        acc.add(r.value);
        error += r.error;
        subpanels += r.subpanels;
    }
    Quadrature { value: acc.value(), error: error + acc.error_bound(), panels: panels.len(), subpanels }
}

/// ∫_a^b f with panels split at `breakpoints`; fails with the best bracket when the
/// error estimate exceeds `tol`.
pub fn integrate_piecewise<F>(f: F, a: f64, b: f64, breakpoints: &[f64], tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let q = integrate_piecewise_detailed(&f, a, b, breakpoints, tol)?;
    Ok(q.value)
}

pub fn integrate_piecewise_detailed<F>(f: &F, a: f64, b: f64, breakpoints: &[f64], tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {} must be positive", tol)));
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, panels: 0, subpanels: 0 });
    }
    let ps = panels(a, b, breakpoints)?;
    let q = integrate_panels(f, &ps, tol);
    if !q.value.is_finite() {
        return Err(Error::Domain("integrand is not finite on the interval".into()));
    }
    if q.error > tol {
        return Err(Error::Accuracy(Bracket { best: q.value, error: q.error }));
    }
    Ok(q)
}
