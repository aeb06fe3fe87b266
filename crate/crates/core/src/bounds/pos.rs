use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest natural log kept as a plain double.
const PLAIN_LN_MAX: f64 = 700.0;
/// Slack, in units of the last kept digit, absorbing binary noise on decimal grid points.
const GRID_SLACK: f64 = 1e-9;

/// A nonnegative extended real: a plain double, or e^exp for magnitudes beyond the double range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Pos {
    Plain(f64),
    Exp { exp: f64 },
}

impl Pos {
    pub const ZERO: Pos = Pos::Plain(0.0);
    pub const ONE: Pos = Pos::Plain(1.0);

    pub fn new(v: f64) -> Result<Self> {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!("{} is not a finite nonnegative number", v)));
        }
        Ok(Pos::Plain(v))
    }

    pub fn from_ln(l: f64) -> Self {
        if l == f64::NEG_INFINITY {
            Pos::ZERO
        } else if l < PLAIN_LN_MAX {
            Pos::Plain(l.exp())
        } else {
            Pos::Exp { exp: l }
        }
    }

    pub fn ln(self) -> f64 {
        match self {
            Pos::Plain(v) => v.ln(),
            Pos::Exp { exp } => exp,
        }
    }

    /// The value as a double, +∞ when out of range.
    pub fn value(self) -> f64 {
        match self {
            Pos::Plain(v) => v,
            Pos::Exp { exp } => exp.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self == Pos::ZERO
    }

    pub fn mul(self, o: Pos) -> Pos {
        if let (Pos::Plain(a), Pos::Plain(b)) = (self, o) {
            let p = a * b;
            if p.is_finite() {
                return Pos::Plain(p);
            }
        }
        if self.is_zero() || o.is_zero() {
            return Pos::ZERO;
        }
        Pos::from_ln(self.ln() + o.ln())
    }

    pub fn scale(self, f: f64) -> Pos {
        self.mul(Pos::Plain(f))
    }

    pub fn add(self, o: Pos) -> Pos {
        if let (Pos::Plain(a), Pos::Plain(b)) = (self, o) {
            let s = a + b;
            if s.is_finite() {
                return Pos::Plain(s);
            }
        }
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (a, b) = (self.ln(), o.ln());
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        Pos::from_ln(hi + (lo - hi).exp().ln_1p())
    }

    pub fn powf(self, q: f64) -> Pos {
        if self.is_zero() {
            return if q == 0.0 { Pos::ONE } else { Pos::ZERO };
        }
        if let Pos::Plain(v) = self {
            let p = v.powf(q);
            if p.is_finite() && p > 0.0 {
                return Pos::Plain(p);
            }
        }
        Pos::from_ln(q * self.ln())
    }
}

impl Default for Pos {
    fn default() -> Self {
        Pos::ZERO
    }
}

impl PartialOrd for Pos {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        match (self, o) {
            (Pos::Plain(a), Pos::Plain(b)) => a.partial_cmp(b),
            _ => self.ln().partial_cmp(&o.ln()),
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Pos::Plain(v) => f.write_str(&fmt_num(v)),
            Pos::Exp { exp } => write!(f, "exp({})", fmt_sig(exp, 9)),
        }
    }
}

/// Accepts a decimal, `p/q` or `exp(v)`.
impl FromStr for Pos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot read {:?} as a positive quantity", s));
        if let Some(inner) = t.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
            let l: f64 = inner.trim().parse().map_err(|_| bad())?;
            if !l.is_finite() {
                return Err(bad());
            }
            return Ok(Pos::from_ln(l));
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            return Pos::new(p / q).map_err(|_| bad());
        }
        Pos::new(t.parse().map_err(|_| bad())?).map_err(|_| bad())
    }
}

/// Shortest round-trip text, plain or exponent form.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return format!("{}", v);
    }
    let plain = format!("{}", v);
    let exp = format!("{:e}", v);
    if exp.len() < plain.len() {
        exp
    } else {
        plain
    }
}

/// v with at most `digits` significant digits, shortest form.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return fmt_num(v);
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), v);
    fmt_num(s.parse().unwrap_or(v))
}

/// Outward rounding applied when a derived constant is fixed.
#[derive(Debug, Clone, PartialEq)]
pub enum Rounding {
    None,
    /// 1/N with N truncated to k decimals: the result is ≥ the input.
    Recip(u32),
    /// Up to k significant digits.
    Sig(u32),
    /// Up to k decimals.
    Dec(u32),
    /// A printed value, accepted only if it is not smaller than the input.
    Publish(String),
}

impl FromStr for Rounding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad rounding {:?} (none, recip[:k], sig:k, dec:k, publish:v)", s));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let digits = |a: Option<&str>| -> Result<u32> { a.ok_or_else(bad)?.parse().map_err(|_| bad()) };
        match head {
            "none" if arg.is_none() => Ok(Rounding::None),
            "recip" => Ok(Rounding::Recip(match arg {
                Some(_) => digits(arg)?,
                None => 0,
            })),
            "sig" => {
                let k = digits(arg)?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(Rounding::Sig(k))
            }
            "dec" => Ok(Rounding::Dec(digits(arg)?)),
            "publish" => {
                let a = arg.ok_or_else(bad)?;
                a.parse::<Pos>()?;
                Ok(Rounding::Publish(a.to_string()))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Rounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rounding::None => f.write_str("none"),
            Rounding::Recip(0) => f.write_str("recip"),
            Rounding::Recip(k) => write!(f, "recip:{}", k),
            Rounding::Sig(k) => write!(f, "sig:{}", k),
            Rounding::Dec(k) => write!(f, "dec:{}", k),
            Rounding::Publish(v) => write!(f, "publish:{}", v),
        }
    }
}

/// A rounded constant and its printed text.
#[derive(Debug, Clone, PartialEq)]
pub struct Rounded {
    pub value: f64,
    pub text: Option<String>,
}

/// v = y·10^e with y ∈ [10^{k−1}, 10^k).
fn sig_split(v: f64, k: u32) -> (f64, i32) {
    let mut e = v.log10().floor() as i32 - (k as i32 - 1);
    let mut y = v / 10f64.powi(e);
    if y >= 10f64.powi(k as i32) {
        y /= 10.0;
        e += 1;
    } else if y < 10f64.powi(k as i32 - 1) {
        y *= 10.0;
        e -= 1;
    }
    (y, e)
}

fn decimal(mantissa: f64, exp10: i32) -> f64 {
    format!("{}e{}", mantissa, exp10).parse().unwrap_or(f64::NAN)
}

/// Smallest n·10^e with n·10^e ≥ v − GRID_SLACK·10^e; v itself once the grid is finer than f64.
fn grid_up(v: f64, y: f64, e: i32) -> f64 {
    if y >= 2f64.powi(52) {
        return v;
    }
    let floor = v - GRID_SLACK * 10f64.powi(e);
    let mut n = (y - GRID_SLACK).ceil().max(0.0);
    let mut value = decimal(n, e);
    while value < floor {
        n += 1.0;
        value = decimal(n, e);
    }
    value
}

/// Largest n·10^e with n·10^e ≤ v + GRID_SLACK·10^e.
fn grid_down(v: f64, y: f64, e: i32) -> f64 {
    if y >= 2f64.powi(52) {
        return v;
    }
    let ceil = v + GRID_SLACK * 10f64.powi(e);
    let mut n = (y + GRID_SLACK).floor();
    let mut value = decimal(n, e);
    while value > ceil && n > 0.0 {
        n -= 1.0;
        value = decimal(n, e);
    }
    value
}

impl Rounding {
    /// Rounds v > 0 upward onto the grid.
    pub fn up(&self, v: f64) -> Result<Rounded> {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!("cannot round {}", v)));
        }
        let out = match self {
            Rounding::None => Rounded { value: v, text: None },
            Rounding::Recip(k) => {
                if v == 0.0 {
                    return Err(Error::InvalidArgument("cannot write 0 as 1/N".into()));
                }
                let scale = 10f64.powi(*k as i32);
                let r = 1.0 / v;
                let mut n = (r * scale + GRID_SLACK).floor();
                while n >= 1.0 && decimal(n, -(*k as i32)) > r + GRID_SLACK / scale {
                    n -= 1.0;
                }
                if n < 1.0 {
                    return Err(Error::InvalidArgument(format!("{} is too large for 1/N rounding", v)));
                }
                let den = decimal(n, -(*k as i32));
                let text = format!("1/{}", fmt_num(den));
                Rounded { value: 1.0 / den, text: Some(text) }
            }
            Rounding::Sig(k) => {
                if v == 0.0 {
                    return Ok(Rounded { value: 0.0, text: Some("0".into()) });
                }
                let (y, e) = sig_split(v, *k);
                let value = grid_up(v, y, e);
                Rounded { value, text: Some(fmt_num(value)) }
            }
            Rounding::Dec(k) => {
                let value = grid_up(v, v * 10f64.powi(*k as i32), -(*k as i32));
                Rounded { value, text: Some(fmt_num(value)) }
            }
            Rounding::Publish(text) => {
                let p: Pos = text.parse()?;
                let value = p.value();
                if value < v {
                    return Err(Error::Plan(format!("published value {} is below the derived {}", text, fmt_num(v))));
                }
                Rounded { value, text: Some(text.clone()) }
            }
        };
        Ok(out)
    }

    /// Rounds a magnitude upward (ranks, remainder coefficients); decimal mantissa for huge values.
    pub fn up_pos(&self, p: Pos) -> Result<Pos> {
        match (self, p) {
            (Rounding::None, _) => Ok(p),
            (_, Pos::Plain(v)) => Ok(Pos::Plain(self.up(v)?.value)),
            (Rounding::Sig(k), Pos::Exp { exp }) => {
                let l10 = exp / std::f64::consts::LN_10;
                let e = l10.floor();
                let m = 10f64.powf(l10 - e);
                let r = Rounding::Sig(*k).up(m)?.value;
                Ok(Pos::from_ln((r.log10() + e) * std::f64::consts::LN_10))
            }
            (Rounding::Publish(t), Pos::Exp { .. }) => {
                let q: Pos = t.parse()?;
                if q < p {
                    return Err(Error::Plan(format!("published value {} is below the derived {}", t, p)));
                }
                Ok(q)
            }
            _ => Err(Error::Plan(format!("rounding {} cannot apply to {}", self, p))),
        }
    }

    /// Rounds a magnitude downward (upper ends of validity ranges).
    pub fn down_pos(&self, p: Pos) -> Result<Pos> {
        match (self, p) {
            (Rounding::None, _) => Ok(p),
            (Rounding::Sig(k), Pos::Plain(v)) if v > 0.0 => {
                let (y, e) = sig_split(v, *k);
                Ok(Pos::Plain(grid_down(v, y, e)))
            }
            (Rounding::Sig(k), Pos::Exp { exp }) => {
                let l10 = exp / std::f64::consts::LN_10;
                let e = l10.floor();
                let m = 10f64.powf(l10 - e);
                let r = Rounding::Sig(*k).down_pos(Pos::Plain(m))?.value();
                Ok(Pos::from_ln((r.log10() + e) * std::f64::consts::LN_10))
            }
            _ => Err(Error::Plan(format!("rounding {} cannot round {} down", self, p))),
        }
    }
}
