use super::sieve::MuTable;
use crate::numeric::{gamma, two_sum, U};

const RADIUS_BLOCK: usize = 4096;

/// Prefix sums Σ_{k≤n} term(k) in binary64 with a certified absolute error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixSeries {
    values: Vec<f64>,
    radius: Vec<f64>,
}

impl PrefixSeries {
    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// Value at n (n = 0 gives the empty sum).
    #[inline]
    pub fn value(&self, n: u64) -> f64 {
        self.values[n as usize]
    }

    /// Certified bound on |value(n) − exact prefix sum|; nondecreasing in n.
    #[inline]
    pub fn error_radius(&self, n: u64) -> f64 {
        self.radius[n as usize / RADIUS_BLOCK]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// m(n) = Σ_{k≤n} μ(k)/k.
pub fn m_series(table: &MuTable) -> PrefixSeries {
    accumulate(table, |k| {
        let q = 1.0 / k;
        let lo = (-q).mul_add(k, 1.0) / k;
        (q, lo, 0.0)
    })
}

/// ℓ(n) = Σ_{k≤n} μ(k)·log(k)/k.
pub fn ell_series(table: &MuTable) -> PrefixSeries {
    accumulate(table, |k| {
        let l = k.ln();
        let q = l / k;
        let lo = (-q).mul_add(k, l) / k;
        // log is taken to be within 2 ulp
        (q, lo, 2.0 * U * q.abs())
    })
}

/// Sum2 (TwoSum cascade) over the split terms hi + lo, with the Ogita–Rump–Oishi bound
/// plus the representation error of each split term.
fn accumulate(table: &MuTable, term: impl Fn(f64) -> (f64, f64, f64)) -> PrefixSeries {
    let limit = table.limit() as usize;
    let mut values = vec![0.0; limit + 1];
    let mut radius = vec![0.0; limit / RADIUS_BLOCK + 1];
    let mu = table.mu_values();
    let (mut s, mut c) = (0.0f64, 0.0f64);
    let mut abs_sum = 0.0f64;
    let mut term_err = 0.0f64;
    let mut count = 0.0f64;
    let mut running = 0.0f64;
    for n in 1..=limit {
        let u = mu[n];
        if u != 0 {
            let (mut hi, mut lo, extra) = term(n as f64);
            if u < 0 {
                hi = -hi;
                lo = -lo;
            }
            let (s1, e1) = two_sum(s, hi);
            let (s2, e2) = two_sum(s1, lo);
            s = s2;
            c += e1;
            c += e2;
            abs_sum += hi.abs() + lo.abs();
            term_err += U * lo.abs() + extra;
            count += 2.0;
        }
        let v = s + c;
        values[n] = v;
        let g = gamma(count + 2.0);
        let r = (U * v.abs() + g * g * abs_sum * (1.0 + g) + term_err * (1.0 + g)) / (1.0 - U);
        running = running.max(r * (1.0 + 4.0 * U));
        let b = n / RADIUS_BLOCK;
        radius[b] = running;
    }
    // a block's radius is the running maximum at its last filled index, which dominates earlier entries
    PrefixSeries { values, radius }
}
