use serde::{Deserialize, Serialize};

use super::range::MAX_RECORDS;
use crate::arith::Tables;
use crate::error::{Error, Result};
use crate::numeric::U;

pub const RATIO_LOWER: f64 = 2.0 / 3.0;
pub const RATIO_UPPER: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioViolation {
    pub x: f64,
    pub ratio: f64,
}

/// sup_{t≤x}|m(t)|t / sup_{t≤x}|M(t)| over x ∈ [lo, hi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub lo: f64,
    pub hi: f64,
    pub min_ratio: f64,
    pub argmin: f64,
    pub max_ratio: f64,
    pub argmax: f64,
    pub violations: Vec<RatioViolation>,
    pub violation_count: u64,
    pub unresolved: u64,
    pub pass: bool,
}

/// Checks 2/3 ≤ ratio ≤ 3/2 on [lo, hi). On [n, n+1) the denominator is constant and the
/// numerator nondecreasing, so the minimum is at x = n and the supremum is the limit at n + 1.
/// Running suprema start at t = 1 whatever `lo` is.
pub fn ratio_theorem_c(tables: &Tables, lo: f64, hi: f64) -> Result<RatioReport> {
    if !(lo >= 1.0 && lo < hi) {
        return Err(Error::InvalidArgument(format!("range [{}, {}) must satisfy 1 ≤ lo < hi", lo, hi)));
    }
    if hi > (tables.limit() + 1) as f64 {
        return Err(Error::Range(format!("range end {} beyond sieve limit {}", hi, tables.limit())));
    }
    let mu = tables.mu();
    let ms = tables.m();
    let mut rep = RatioReport {
        lo,
        hi,
        min_ratio: f64::INFINITY,
        argmin: lo,
        max_ratio: 0.0,
        argmax: lo,
        violations: Vec::new(),
        violation_count: 0,
        unresolved: 0,
        pass: false,
    };
    // numerator sup with its rounding radius; the denominator is an exact integer
    let (mut num, mut num_r) = (0.0f64, 0.0f64);
    let mut den = 0i64;
    let last = hi.ceil() as u64;
    for n in 1..last {
        let m = ms.value(n).abs();
        let rm = ms.error_radius(n);
        den = den.max(mu.mertens(n).abs());
        let a = (n as f64).max(lo);
        let b = ((n + 1) as f64).min(hi);
        let left = m * a;
        let (nl, nl_r) = if left > num { (left, rm * a + U * left) } else { (num, num_r) };
        let right = m * b;
        let (nr, nr_r) = if right > nl { (right, rm * b + U * right) } else { (nl, nl_r) };
        if a < b {
            let d = den as f64;
            let (rl, rr) = (nl / d, nr / d);
            let (el, er) = (nl_r / d + U * rl, nr_r / d + U * rr);
            if rl < rep.min_ratio {
                rep.min_ratio = rl;
                rep.argmin = a;
            }
            if rr > rep.max_ratio {
                rep.max_ratio = rr;
                rep.argmax = b;
            }
            for (x, r, e, low) in [(a, rl, el, true), (b, rr, er, false)] {
                let bad = if low { r + e < RATIO_LOWER } else { r - e > RATIO_UPPER };
                let unsure = if low { (r - RATIO_LOWER).abs() <= e } else { (r - RATIO_UPPER).abs() <= e };
                if bad {
                    rep.violation_count += 1;
                    if rep.violations.len() < MAX_RECORDS {
                        rep.violations.push(RatioViolation { x, ratio: r });
                    }
                } else if unsure {
                    rep.unresolved += 1;
                }
            }
        }
        // the running sup over t ≤ n + 1⁻ includes |m(n)|(n + 1)
        let full = m * (n + 1) as f64;
        if full > num {
            num = full;
            num_r = rm * (n + 1) as f64 + U * full;
        }
    }
    rep.pass = rep.violation_count == 0 && rep.unresolved == 0;
    Ok(rep)
}

/// limsup_M/(1 + b) with b = 2 + (368/315)ζ(1/2).
pub fn theorem_d_arithmetic(limsup_m: f64) -> Result<f64> {
    let b = crate::special::mellin_h1_closed(0.5)?.value;
    Ok(limsup_m / (1.0 + b))
}
