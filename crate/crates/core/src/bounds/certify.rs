//! Dominance checks for sums of terms c·e^{αL}·L^β in L = log x.
//!
//! Each term is monotone on either side of its critical point L = −β/α, so on an
//! interval free of critical points the sum is bounded by the sum of the endpoint
//! maxima of its terms. Branch and bound on that bound decides `sum ≤ bound`.

use crate::numeric::U;

/// c·e^{αL}·L^β with c = e^{ln_coef}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub ln_coef: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Term {
    fn ln_parts(&self, l: f64) -> (f64, f64) {
        let lb = if self.beta == 0.0 { 0.0 } else { self.beta * l.ln() };
        if !lb.is_finite() {
            return (lb, 0.0);
        }
        let v = self.ln_coef + self.alpha * l + lb;
        let err = 8.0 * U * (self.ln_coef.abs() + (self.alpha * l).abs() + lb.abs() + 1.0);
        (v, err)
    }

    pub fn at(&self, l: f64) -> f64 {
        self.ln_parts(l).0.exp()
    }

    fn upper(&self, l: f64) -> f64 {
        let (v, e) = self.ln_parts(l);
        (v + e).exp()
    }

    fn lower(&self, l: f64) -> f64 {
        let (v, e) = self.ln_parts(l);
        (v - e).exp()
    }

    /// Interior extremum −β/α, when positive.
    pub fn critical(&self) -> Option<f64> {
        if self.alpha != 0.0 && self.beta != 0.0 {
            let c = -self.beta / self.alpha;
            (c > 0.0).then_some(c)
        } else {
            None
        }
    }

    fn eventually_nonincreasing(&self) -> bool {
        self.alpha < 0.0 || (self.alpha == 0.0 && self.beta <= 0.0)
    }

    /// Start of the nonincreasing tail.
    fn tail_start(&self) -> f64 {
        if self.alpha < 0.0 && self.beta > 0.0 {
            self.beta / -self.alpha
        } else {
            0.0
        }
    }
}

pub fn sum_value(terms: &[Term], l: f64) -> f64 {
    terms.iter().map(|t| t.at(l)).sum()
}

fn sum_upper(terms: &[Term], l: f64) -> f64 {
    terms.iter().map(|t| t.upper(l)).sum::<f64>() * (1.0 + 4.0 * U * terms.len() as f64)
}

fn sum_lower(terms: &[Term], l: f64) -> f64 {
    terms.iter().map(|t| t.lower(l)).sum::<f64>() * (1.0 - 4.0 * U * terms.len() as f64)
}

/// Outcome of a dominance check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check {
    Holds,
    /// A point where the sum certainly exceeds the bound (L = +∞ for unbounded growth).
    Fails {
        at: f64,
        value: f64,
    },
    Inconclusive {
        at: f64,
    },
}

impl Check {
    pub fn holds(self) -> bool {
        self == Check::Holds
    }
}

const BUDGET: usize = 200_000;

/// sum(L) ≤ bound for all L in [la, lb]; lb = None means [la, ∞).
pub fn certify_le(terms: &[Term], la: f64, lb: Option<f64>, bound: f64) -> Check {
    let hi = match lb {
        Some(b) => b,
        None => {
            if terms.iter().any(|t| !t.eventually_nonincreasing()) {
                return Check::Fails { at: f64::INFINITY, value: f64::INFINITY };
            }
            let lt = terms.iter().map(Term::tail_start).fold(la, f64::max);
            let lo = sum_lower(terms, lt);
            if lo > bound {
                return Check::Fails { at: lt, value: lo };
            }
            if sum_upper(terms, lt) > bound {
                return Check::Inconclusive { at: lt };
            }
            lt
        }
    };
    if hi < la {
        return Check::Holds;
    }
    let mut cuts: Vec<f64> = terms.iter().filter_map(Term::critical).filter(|&c| c > la && c < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(la);
    edges.extend(cuts);
    edges.push(hi);
    let mut budget = BUDGET;
    for w in edges.windows(2) {
        match monotone_pieces(terms, w[0], w[1], bound, &mut budget) {
            Check::Holds => {}
            other => return other,
        }
    }
    Check::Holds
}

fn monotone_pieces(terms: &[Term], a: f64, b: f64, bound: f64, budget: &mut usize) -> Check {
    let mut stack = vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        for p in [a, b] {
            let lo = sum_lower(terms, p);
            if lo > bound {
                return Check::Fails { at: p, value: lo };
            }
        }
        let ub: f64 =
            terms.iter().map(|t| t.upper(a).max(t.upper(b))).sum::<f64>() * (1.0 + 4.0 * U * terms.len() as f64);
        if ub <= bound {
            continue;
        }
        let mid = 0.5 * (a + b);
        if *budget == 0 || mid <= a || mid >= b {
            return Check::Inconclusive { at: a };
        }
        *budget -= 1;
        stack.push((mid, b));
        stack.push((a, mid));
    }
    Check::Holds
}

/// Smallest L′ in [lo, hi] with sum ≤ bound on [L′, hi] (hi = None: on [L′, ∞)).
pub fn lowest_start(terms: &[Term], lo: f64, hi: Option<f64>, bound: f64) -> Option<f64> {
    if certify_le(terms, lo, hi, bound).holds() {
        return Some(lo);
    }
    let mut ok = match hi {
        Some(h) => {
            if !certify_le(terms, h, Some(h), bound).holds() {
                return None;
            }
            h
        }
        None => {
            let mut l = lo.max(1.0);
            let mut found = None;
            for _ in 0..64 {
                l *= 2.0;
                if certify_le(terms, l, None, bound).holds() {
                    found = Some(l);
                    break;
                }
            }
            found?
        }
    };
    let mut bad = lo;
    for _ in 0..200 {
        let mid = 0.5 * (bad + ok);
        if mid <= bad || mid >= ok {
            break;
        }
        if certify_le(terms, mid, hi, bound).holds() {
            ok = mid;
        } else {
            bad = mid;
        }
    }
    Some(ok)
}

/// Largest L″ ≥ lo with sum ≤ bound on [lo, L″], capped at `cap`; None when unlimited.
pub fn highest_end(terms: &[Term], lo: f64, cap: Option<f64>, bound: f64) -> Option<f64> {
    if certify_le(terms, lo, cap, bound).holds() {
        return cap;
    }
    let mut ok = lo;
    let mut bad = match cap {
        Some(c) => c,
        None => {
            let mut l = lo.max(1.0);
            loop {
                l *= 2.0;
                if !certify_le(terms, lo, Some(l), bound).holds() {
                    break l;
                }
                ok = l;
                if l > 1e300 {
                    return None;
                }
            }
        }
    };
    for _ in 0..200 {
        let mid = 0.5 * (ok + bad);
        if mid <= ok || mid >= bad {
            break;
        }
        if certify_le(terms, lo, Some(mid), bound).holds() {
            ok = mid;
        } else {
            bad = mid;
        }
    }
    Some(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c: f64, alpha: f64, beta: f64) -> Term {
        Term { ln_coef: c.ln(), alpha, beta }
    }

    #[test]
    fn decreasing_tail() {
        let terms = [t(1.0, 0.0, 0.0), t(100.0, -1.0, 0.0)];
        assert!(certify_le(&terms, 10.0, None, 1.01).holds());
        assert!(matches!(certify_le(&terms, 1.0, None, 1.01), Check::Fails { .. }));
        let l = lowest_start(&terms, 0.0, None, 1.01).unwrap();
        assert!((l - (100.0f64 / 0.01).ln()).abs() < 1e-9);
    }

    #[test]
    fn hump_is_found() {
        // L²e^{−L/2} peaks at L = 4 with value 16/e².
        let terms = [t(1.0, -0.5, 2.0)];
        let peak = 16.0 / (2.0f64).exp();
        assert!(certify_le(&terms, 0.5, Some(30.0), peak * (1.0 + 1e-9)).holds());
        assert!(matches!(certify_le(&terms, 0.5, Some(30.0), peak * 0.999), Check::Fails { .. }));
        assert!(matches!(certify_le(&[t(1.0, 0.1, 0.0)], 0.0, None, 10.0), Check::Fails { .. }));
    }

    #[test]
    fn increasing_region_end() {
        // L/97.7 ≤ 1 up to L = 97.7.
        let terms = [t(1.0 / 97.7, 0.0, 1.0)];
        let e = highest_end(&terms, 10.0, None, 1.0).unwrap();
        assert!((e - 97.7).abs() < 1e-9);
    }
}
