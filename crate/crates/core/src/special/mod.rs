//! Real ζ, fundamental constants and closed-form Mellin values.

mod constants;
mod mellin;
mod zeta;

pub use constants::{euler_gamma, zeta_prime_zero, EULER_GAMMA, ZETA_PRIME_ZERO};
pub use mellin::{
    envelope_factor, envelope_integral_bound, envelope_rank, h2_integral_bound, mellin_g1_closed,
    mellin_g1check_closed, mellin_h1_closed,
};
pub use zeta::{zeta_divided, zeta_real, zeta_reg};

/// A value with a certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub value: f64,
    pub abs_error: f64,
}

impl SpecialValue {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.abs_error
    }
}
