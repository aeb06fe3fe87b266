#![allow(clippy::excessive_precision)]

use super::SpecialValue;
use crate::numeric::U;

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// ζ′(0) = −½·log(2π).
pub const ZETA_PRIME_ZERO: f64 = -0.918_938_533_204_672_741_780_329_736_406;

pub fn euler_gamma() -> SpecialValue {
    SpecialValue { value: EULER_GAMMA, abs_error: U * EULER_GAMMA }
}

pub fn zeta_prime_zero() -> SpecialValue {
    SpecialValue { value: ZETA_PRIME_ZERO, abs_error: U * ZETA_PRIME_ZERO.abs() }
}
