use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// h(y) = Σ c_r·1_{[0,1]}(r·y), stored as pairs (r, c_r).
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffWeight {
    entries: Vec<(f64, f64)>,
    exact: Option<Vec<(BigRational, BigRational)>>,
}

impl CoeffWeight {
    /// Checks r > 0 and Σ c_r/r = 0 to 10⁻¹⁵ relative to Σ|c_r/r|.
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self> {
        let mut s = 0.0f64;
        let mut a = 0.0f64;
        for &(r, c) in &entries {
            if !(r > 0.0 && r.is_finite() && c.is_finite()) {
                return Err(Error::InvalidArgument(format!("bad coefficient pair ({}, {})", r, c)));
            }
            s += c / r;
            a += (c / r).abs();
        }
        if s.abs() > 1e-15 * a.max(1.0) {
            return Err(Error::InvalidArgument(format!("Σ c_r/r = {:e}, expected 0", s)));
        }
        Ok(Self { entries, exact: None })
    }

    /// Exact rational coefficients; Σ c_r/r must vanish exactly.
    pub fn from_rationals(exact: Vec<(BigRational, BigRational)>) -> Result<Self> {
        let mut s = BigRational::zero();
        for (r, c) in &exact {
            if !r.is_positive() {
                return Err(Error::InvalidArgument(format!("r = {} must be positive", r)));
            }
            s += c / r;
        }
        if !s.is_zero() {
            return Err(Error::InvalidArgument(format!("Σ c_r/r = {} ≠ 0", s)));
        }
        let entries = exact.iter().map(|(r, c)| (to_f64(r), to_f64(c))).collect();
        Ok(Self { entries, exact: Some(exact) })
    }

    /// Parses lines "r c_r" (decimal or a/b); blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut exact = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::InvalidArgument(format!("line {}: expected \"r c_r\"", i + 1)));
            }
            let r = parse_rational(parts[0])
                .ok_or_else(|| Error::InvalidArgument(format!("line {}: bad number {:?}", i + 1, parts[0])))?;
            let c = parse_rational(parts[1])
                .ok_or_else(|| Error::InvalidArgument(format!("line {}: bad number {:?}", i + 1, parts[1])))?;
            exact.push((r, c));
        }
        Self::from_rationals(exact)
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn exact(&self) -> Option<&[(BigRational, BigRational)]> {
        self.exact.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_r(&self) -> f64 {
        self.entries.iter().map(|e| e.0).fold(0.0, f64::max)
    }

    /// ∫₀^a h(y)dy = Σ c_r·min(a, 1/r), from the indicator definition.
    pub fn integral_to(&self, a: f64) -> f64 {
        self.entries.iter().map(|&(r, c)| c * a.min(1.0 / r)).sum()
    }
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses "a/b", "-12", "0.125", "1e-3", "2.5E+4" into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((a, b)) = s.split_once('/') {
        let a = parse_rational(a)?;
        let b = parse_rational(b)?;
        if b.is_zero() {
            return None;
        }
        return Some(a / b);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{}{}", int, frac).parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(digits);
    if scale >= 0 {
        q *= BigRational::from_integer(num::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Some(if neg { -q } else { q })
}

/// Exact (floor form, fractional form) of H at rational t.
pub fn eval_h_coeffs_exact(exact: &[(BigRational, BigRational)], t: &BigRational) -> (BigRational, BigRational) {
    let mut fl = BigRational::one();
    let mut fr = BigRational::one();
    for (r, c) in exact {
        let q = t / r;
        let f = q.floor();
        fl -= c * &f;
        fr += c * (q - f);
    }
    (fl, fr)
}
