//! Weight functions: densities g, h, coefficient weights and their lattice sums G, H.

mod coeffs;
mod density;
mod envelope;
mod expansion;
mod lattice;

pub use coeffs::{eval_h_coeffs_exact, parse_rational, CoeffWeight};
pub use density::{g1, h1, Density, DensityKind, Polynomial};
pub use envelope::EnvelopeParams;
pub use expansion::{power_sums, PanelPolynomial, PeriodicExpansion};
pub use lattice::{
    em_h1_envelope, epsilon1, eval_g, eval_h, eval_h_coeffs, floor_div, frac_div, partial_moebius_fractional_sum,
    HCoeffForms, MAX_LATTICE_TERMS,
};

use crate::error::{Error, Result};

/// A weight: an analytic density of G or H type, or a finite coefficient list (H type).
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Analytic(Density),
    Coefficients(CoeffWeight),
}

impl WeightSpec {
    pub fn g1() -> Self {
        Self::Analytic(g1())
    }

    pub fn h1() -> Self {
        Self::Analytic(h1())
    }

    pub fn name(&self) -> String {
        match self {
            Self::Analytic(d) => d.name.clone(),
            Self::Coefficients(c) => format!("coefficients[{}]", c.len()),
        }
    }

    pub fn is_g_type(&self) -> bool {
        matches!(self, Self::Analytic(d) if d.kind == DensityKind::G)
    }

    /// G(t) or H(t) by direct summation.
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Self::Analytic(d) => match d.kind {
                DensityKind::G => eval_g(d, t),
                DensityKind::H => eval_h(d, t),
            },
            Self::Coefficients(c) => Ok(eval_h_coeffs(c, t).floor_form),
        }
    }

    /// Points in (a, b) where the lattice sum jumps or kinks.
    pub fn breakpoints(&self, a: f64, b: f64) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        match self {
            Self::Analytic(_) => {
                let mut k = a.floor() + 1.0;
                while k < b {
                    out.push(k);
                    k += 1.0;
                }
            }
            Self::Coefficients(c) => {
                for &(r, _) in c.entries() {
                    let mut k = (a / r).floor() + 1.0;
                    while k * r < b {
                        out.push(k * r);
                        k += 1.0;
                        if out.len() > 10_000_000 {
                            return Err(Error::Resource("too many coefficient breakpoints".into()));
                        }
                    }
                }
                out.sort_by(|x, y| x.partial_cmp(y).unwrap());
                out.dedup();
            }
        }
        Ok(out)
    }

    /// Fast evaluator valid on a panel [a, b] containing no breakpoint in its interior.
    pub fn panel(&self, a: f64, b: f64) -> Result<PanelEval> {
        let mid = 0.5 * (a + b);
        match self {
            Self::Analytic(d) => {
                let k = mid.floor() as u64;
                Ok(PanelEval::Poly(PanelPolynomial::new(d, k)?))
            }
            Self::Coefficients(c) => Ok(PanelEval::Constant(eval_h_coeffs(c, mid).floor_form)),
        }
    }
}

/// Lattice-sum weight restricted to one panel.
#[derive(Debug, Clone)]
pub enum PanelEval {
    Poly(PanelPolynomial),
    Constant(f64),
}

impl PanelEval {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Poly(p) => p.eval(t),
            Self::Constant(c) => *c,
        }
    }
}
