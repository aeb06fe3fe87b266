use num::rational::BigRational;
use num::{FromPrimitive, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::predicate::{Func, Predicate, Weight};
use crate::arith::Tables;
use crate::error::{Error, Result};
use crate::numeric::{DoubleDouble, U};

/// Intervals [n, n+1) per work unit; fixed so results do not depend on the worker count.
const CHUNK: u64 = 1 << 15;
/// Recorded (not counted) violations and escalations per report.
pub const MAX_RECORDS: usize = 1000;
/// Escalations attempted per chunk; further indeterminate points stay unresolved.
const MAX_ESCALATIONS_PER_CHUNK: usize = 16;
/// Largest n re-decided in exact rational arithmetic.
const EXACT_LIMIT: u64 = 2000;

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub n: u64,
    pub x: f64,
    pub value: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Escalation {
    pub n: u64,
    pub x: f64,
    pub value: f64,
    pub radius: f64,
    pub method: String,
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub predicate: String,
    pub lo: f64,
    pub hi: f64,
    pub intervals: u64,
    /// sup of scale·weight·|f| over [lo, hi)
    pub sup: f64,
    pub sup_radius: f64,
    pub argmax: f64,
    pub argmax_n: u64,
    pub max_ratio: f64,
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub indeterminate: Vec<Escalation>,
    pub unresolved: u64,
    pub pass: bool,
}

/// Signed f at x ∈ [n, n+1) and its rounding radius.
fn f_at(tables: &Tables, func: Func, n: u64, x: f64) -> (f64, f64) {
    let big = tables.mu().mertens(n) as f64;
    match func {
        Func::BigM => (big, 0.0),
        Func::SmallM => (tables.m().value(n), tables.m().error_radius(n)),
        Func::M1 => {
            let m = tables.m().value(n);
            let q = big / x;
            let v = m - q;
            (v, tables.m().error_radius(n) + U * (q.abs() + v.abs()))
        }
        Func::MCheck => {
            let m = tables.m().value(n);
            let ell = tables.ell();
            let l = x.ln();
            let v = m * l - ell.value(n) - 1.0;
            let r = tables.m().error_radius(n) * l
                + 3.0 * U * (m * l).abs()
                + ell.error_radius(n)
                + 2.0 * U * (v.abs() + 1.0 + ell.value(n).abs());
            (v, r)
        }
    }
}

/// Weighted |f| and radius, including the weight's own rounding.
fn weighted(tables: &Tables, p: &Predicate, n: u64, x: f64) -> (f64, f64) {
    let (v, r) = f_at(tables, p.func, n, x);
    let w = p.weight.eval(x);
    let val = p.scale * w * v.abs();
    (val, p.scale * w * r + 8.0 * U * val)
}

fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Interior critical points of weight·f on (a, b) for the smooth pieces of m₁ and m̌ − 1.
fn critical_points(tables: &Tables, func: Func, weight: Weight, n: u64, a: f64, b: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let m = tables.m().value(n);
    let big = tables.mu().mertens(n) as f64;
    match func {
        Func::BigM | Func::SmallM => {}
        Func::M1 => {
            // weight·(c − d/x) with c = m(n), d = M(n)
            let (c, d) = (m, big);
            match weight {
                Weight::One => {}
                Weight::Log | Weight::Log2 => {
                    let k = weight.log_power().unwrap() as f64;
                    let psi = |x: f64| k * (c * x - d) + d * x.ln();
                    let mut cuts = vec![a];
                    if c != 0.0 {
                        let xe = -d / (k * c);
                        if xe > a && xe < b {
                            cuts.push(xe);
                        }
                    }
                    cuts.push(b);
                    for w in cuts.windows(2) {
                        if let Some(r) = bisect_root(psi, w[0], w[1]) {
                            out.push(r);
                        }
                    }
                }
                Weight::Sqrt => {
                    if c != 0.0 {
                        out.push(-d / c);
                    }
                }
                Weight::InvSqrt => {
                    if c != 0.0 {
                        out.push(3.0 * d / c);
                    }
                }
            }
        }
        Func::MCheck => {
            // weight·(αL − β) with α = m(n), β = ℓ(n) + 1
            let alpha = m;
            let beta = tables.ell().value(n) + 1.0;
            if alpha != 0.0 {
                let l = match weight {
                    Weight::One => None,
                    Weight::Log => Some(beta / (2.0 * alpha)),
                    Weight::Log2 => Some(2.0 * beta / (3.0 * alpha)),
                    Weight::Sqrt => Some((beta - 2.0 * alpha) / alpha),
                    Weight::InvSqrt => Some((2.0 * alpha + beta) / alpha),
                };
                if let Some(l) = l {
                    out.push(l.exp());
                }
            }
        }
    }
    out.retain(|&x| x > a && x < b);
    out.sort_by(f64::total_cmp);
    out
}

/// sup over [a, b) ⊂ [n, n+1): (value, radius, point).
fn interval_sup(tables: &Tables, p: &Predicate, n: u64, a: f64, b: f64) -> (f64, f64, f64) {
    let constant = matches!(p.func, Func::BigM | Func::SmallM);
    let mut cands = Vec::with_capacity(4);
    if constant {
        // weight monotone: sup at one end (the left end for 1 and 1/√x)
        match p.weight {
            Weight::One | Weight::InvSqrt => cands.push(a),
            _ => cands.push(b),
        }
    } else {
        cands.push(a);
        cands.extend(critical_points(tables, p.func, p.weight, n, a, b));
        cands.push(b);
    }
    let mut best = (f64::NEG_INFINITY, 0.0, a);
    for x in cands {
        let (v, r) = weighted(tables, p, n, x);
        if v > best.0 {
            best = (v, r, x);
        }
    }
    best
}

/// m(n) in double-double with its error bound.
fn m_double_double(tables: &Tables, n: u64) -> (DoubleDouble, f64) {
    let mu = tables.mu();
    let mut acc = DoubleDouble::ZERO;
    let mut abs = 0.0;
    for k in 1..=n {
        let s = mu.mu(k);
        if s != 0 {
            let t = DoubleDouble::ratio(s as f64, k as f64);
            acc = acc.add(t);
            abs += 1.0 / k as f64;
        }
    }
    let u2 = U * U;
    (acc, 16.0 * n as f64 * u2 * (abs + acc.to_f64().abs()))
}

fn m_exact(tables: &Tables, n: u64) -> BigRational {
    let mu = tables.mu();
    let mut acc = BigRational::zero();
    for k in 1..=n {
        let s = mu.mu(k);
        if s != 0 {
            acc += BigRational::new((s as i64).into(), (k as i64).into());
        }
    }
    acc
}

/// Re-decides value ≤ bound at one point: Some(true) holds, Some(false) violated, None undecided.
fn escalate(tables: &Tables, p: &Predicate, n: u64, x: f64) -> (Option<bool>, f64, f64, &'static str) {
    if p.func == Func::SmallM && p.weight == Weight::One && n <= EXACT_LIMIT {
        let m = m_exact(tables, n).abs();
        let lhs = m * BigRational::from_f64(p.scale).unwrap();
        let rhs = BigRational::from_f64(p.bound).unwrap();
        let v = num::ToPrimitive::to_f64(&lhs).unwrap_or(f64::NAN);
        return (Some(lhs <= rhs), v, 0.0, "exact");
    }
    if p.func == Func::BigM {
        let big = tables.mu().mertens(n).unsigned_abs() as f64;
        let q = |v: f64| BigRational::from_f64(v).unwrap();
        let lhs = q(p.scale) * q(big);
        let exact = match p.weight {
            Weight::One => Some(lhs <= q(p.bound)),
            Weight::InvSqrt => Some(lhs.clone() * lhs <= q(p.bound) * q(p.bound) * q(x)),
            _ => None,
        };
        let val = p.scale * p.weight.eval(x) * big;
        if let Some(d) = exact {
            return (Some(d), val, 0.0, "exact");
        }
        let rad = 16.0 * U * val;
        let decided = if val + rad <= p.bound {
            Some(true)
        } else if val - rad > p.bound {
            Some(false)
        } else {
            None
        };
        return (decided, val, rad, "double");
    }
    let (v, r) = match p.func {
        Func::BigM => unreachable!(),
        Func::MCheck => return (None, f64::NAN, f64::NAN, "none"),
        Func::SmallM => {
            let (m, r) = m_double_double(tables, n);
            (m.abs().to_f64(), r)
        }
        Func::M1 => {
            let (m, r) = m_double_double(tables, n);
            let big = tables.mu().mertens(n) as f64;
            let v = m.sub(DoubleDouble::ratio(big, x)).abs();
            (v.to_f64(), r + 4.0 * U * U * (big / x).abs())
        }
    };
    let w = p.weight.eval(x);
    let val = p.scale * w * v;
    let rad = p.scale * w * r + 8.0 * U * val;
    let decided = if val + rad <= p.bound {
        Some(true)
    } else if val - rad > p.bound {
        Some(false)
    } else {
        None
    };
    (decided, val, rad, "double-double")
}

#[derive(Default)]
struct Partial {
    intervals: u64,
    sup: Option<(f64, f64, f64, u64)>,
    violations: Vec<Violation>,
    violation_count: u64,
    escalations: Vec<Escalation>,
    unresolved: u64,
}

fn scan_chunk(tables: &Tables, p: &Predicate, lo: f64, hi: f64, n0: u64, n1: u64) -> Partial {
    let mut out = Partial::default();
    let mut attempts = 0;
    for n in n0..n1 {
        let a = (n as f64).max(lo);
        let b = ((n + 1) as f64).min(hi);
        if !(a < b) {
            continue;
        }
        out.intervals += 1;
        let (v, r, x) = interval_sup(tables, p, n, a, b);
        if out.sup.is_none_or(|s| v > s.0) {
            out.sup = Some((v, r, x, n));
        }
        if v + r <= p.bound {
            continue;
        }
        let violated = if v - r > p.bound {
            Some(false)
        } else if attempts < MAX_ESCALATIONS_PER_CHUNK {
            attempts += 1;
            let (d, val, rad, method) = escalate(tables, p, n, x);
            if out.escalations.len() < MAX_RECORDS {
                out.escalations.push(Escalation {
                    n,
                    x,
                    value: val,
                    radius: rad,
                    method: method.into(),
                    resolved: d.is_some(),
                });
            }
            if d.is_none() {
                out.unresolved += 1;
            }
            d
        } else {
            out.unresolved += 1;
            None
        };
        if violated == Some(false) {
            out.violation_count += 1;
            if out.violations.len() < MAX_RECORDS {
                out.violations.push(Violation { n, x, value: v, margin: p.bound - v });
            }
        }
    }
    out
}

pub fn verify_range(
    tables: &Tables,
    pred: &Predicate,
    lo: f64,
    hi: f64,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    if !(lo >= 1.0 && lo < hi) {
        return Err(Error::InvalidArgument(format!("range [{}, {}) must satisfy 1 ≤ lo < hi", lo, hi)));
    }
    if hi > (tables.limit() + 1) as f64 {
        return Err(Error::Range(format!(
            "range end {} beyond sieve limit {}; sieve to a larger limit",
            hi,
            tables.limit()
        )));
    }
    if !(pred.scale > 0.0) || pred.bound.is_nan() {
        return Err(Error::InvalidArgument(format!("bad predicate {}", pred)));
    }
    if pred.func == Func::MCheck {
        tables.ell();
    }
    let first = lo.floor() as u64;
    let last = hi.ceil() as u64;
    let chunks: Vec<(u64, u64)> = (first..last).step_by(CHUNK as usize).map(|s| (s, (s + CHUNK).min(last))).collect();
    let run = || -> Vec<Partial> { chunks.par_iter().map(|&(a, b)| scan_chunk(tables, pred, lo, hi, a, b)).collect() };
    let parts = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {}", e)))?
            .install(run),
        None => run(),
    };

    let mut rep = VerificationReport {
        predicate: pred.to_string(),
        lo,
        hi,
        intervals: 0,
        sup: f64::NEG_INFINITY,
        sup_radius: 0.0,
        argmax: lo,
        argmax_n: first,
        max_ratio: 0.0,
        violations: Vec::new(),
        violation_count: 0,
        indeterminate: Vec::new(),
        unresolved: 0,
        pass: false,
    };
    for part in parts {
        rep.intervals += part.intervals;
        if let Some((v, r, x, n)) = part.sup {
            if v > rep.sup {
                rep.sup = v;
                rep.sup_radius = r;
                rep.argmax = x;
                rep.argmax_n = n;
            }
        }
        rep.violation_count += part.violation_count;
        for v in part.violations {
            if rep.violations.len() < MAX_RECORDS {
                rep.violations.push(v);
            }
        }
        for e in part.escalations {
            if rep.indeterminate.len() < MAX_RECORDS {
                rep.indeterminate.push(e);
            }
        }
        rep.unresolved += part.unresolved;
    }
    rep.max_ratio = if pred.bound > 0.0 { rep.sup / pred.bound } else { f64::INFINITY };
    rep.pass = rep.violation_count == 0 && rep.unresolved == 0;
    Ok(rep)
}

/// Exact supremum of weight·|f| over [lo, hi) with its location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupScan {
    pub sup: f64,
    pub radius: f64,
    pub argmax: f64,
    pub argmax_n: u64,
}

pub fn sup_scan(
    tables: &Tables,
    func: Func,
    weight: Weight,
    lo: f64,
    hi: f64,
    opts: &VerifyOptions,
) -> Result<SupScan> {
    let p = Predicate::new(func, weight, f64::INFINITY);
    let r = verify_range(tables, &p, lo, hi, opts)?;
    Ok(SupScan { sup: r.sup, radius: r.sup_radius, argmax: r.argmax, argmax_n: r.argmax_n })
}
