//! Interval verification of inequalities on the piecewise arithmetic functions.

mod predicate;
mod range;
mod ratio;

pub use predicate::{Func, Predicate, Weight};
pub use range::{
    sup_scan, verify_range, Escalation, SupScan, VerificationReport, VerifyOptions, Violation, MAX_RECORDS,
};
pub use ratio::{ratio_theorem_c, theorem_d_arithmetic, RatioReport, RatioViolation, RATIO_LOWER, RATIO_UPPER};
