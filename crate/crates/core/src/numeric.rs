//! Error-free transformations, compensated accumulators and double-double arithmetic.

/// Unit roundoff of binary64.
pub const U: f64 = f64::EPSILON / 2.0;

/// γ_n = n·u/(1 − n·u).
pub fn gamma(n: f64) -> f64 {
    let nu = n * U;
    nu / (1.0 - nu)
}

#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
    abs: f64,
    count: usize,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.comp += e;
        self.abs += x.abs();
        self.count += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Σ|x| of the added terms.
    pub fn abs_sum(&self) -> f64 {
        self.abs
    }

    /// Rounding bound of the compensated result relative to the exact sum of the added doubles.
    pub fn error_bound(&self) -> f64 {
        let g = gamma(self.count as f64 + 1.0);
        (U * self.value().abs() + g * g * self.abs * (1.0 + g)) / (1.0 - U)
    }
}

/// Fixed-order compensated sum of a slice.
pub fn sum(xs: &[f64]) -> f64 {
    let mut acc = Neumaier::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Unevaluated sum hi + lo with |lo| ≤ u·|hi|.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// a/b to ~u² relative accuracy.
    pub fn ratio(a: f64, b: f64) -> Self {
        let q = a / b;
        let r = (-q).mul_add(b, a);
        Self::renorm(q, r / b)
    }

    fn renorm(a: f64, b: f64) -> Self {
        let (s, e) = two_sum(a, b);
        Self { hi: s, lo: e }
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = {
            let e = e + t;
            let (s2, e2) = two_sum(s, e);
            (s2, e2 + f)
        };
        Self::renorm(s, e)
    }

    pub fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Self::renorm(p, e + self.lo * b)
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let r = self.sub(Self::from_f64(q1).mul_f64(b));
        let q2 = r.hi / b;
        Self::renorm(q1, q2)
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}
