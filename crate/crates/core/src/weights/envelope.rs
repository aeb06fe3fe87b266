use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Published properties of a coefficient weight H used as certified inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeParams {
    /// ‖H‖∞
    pub sup_norm: f64,
    /// bound on ∫₁^∞ |H(t)| t⁻² dt
    pub l1_mellin2: f64,
    /// H vanishes on [1, K]
    pub k: f64,
    /// bound on |Σ c_r|
    pub sum_c: f64,
    pub max_r: f64,
}

impl EnvelopeParams {
    /// K of the published weight.
    pub const K_PUBLISHED: f64 = 100_882.0;
    /// The same K with two digits swapped, as it also appears in print.
    pub const K_SWAPPED: f64 = 100_822.0;

    /// Envelope of the Cohen–Dress–El Marraki weight H₂.
    pub fn h2_published() -> Self {
        Self { sup_norm: 22_527.5, l1_mellin2: PI * PI / 6.0 / 4345.0, k: Self::K_PUBLISHED, sum_c: 6.0, max_r: 5e13 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sup_norm", self.sup_norm),
            ("l1_mellin2", self.l1_mellin2),
            ("k", self.k),
            ("sum_c", self.sum_c),
            ("max_r", self.max_r),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("envelope {} = {} must be finite and ≥ 0", name, v)));
            }
        }
        Ok(())
    }

    /// Note about the two printed values of K, if this envelope uses one of them.
    pub fn k_note(&self) -> Option<String> {
        if self.k == Self::K_PUBLISHED || self.k == Self::K_SWAPPED {
            Some(format!("K = {} (printed both as {} and {})", self.k, Self::K_PUBLISHED, Self::K_SWAPPED))
        } else {
            None
        }
    }
}
