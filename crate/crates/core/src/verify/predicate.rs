use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::parse_rational;

/// The arithmetic function under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Func {
    /// |M(x)|
    #[serde(rename = "M")]
    BigM,
    /// |m(x)|
    #[serde(rename = "m")]
    SmallM,
    /// |m₁(x)|
    #[serde(rename = "m1")]
    M1,
    /// |m̌(x) − 1|
    #[serde(rename = "mcheck")]
    MCheck,
}

/// Weight multiplying |f(x)|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Weight {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "log")]
    Log,
    #[serde(rename = "log2")]
    Log2,
    #[serde(rename = "sqrt")]
    Sqrt,
    /// 1/√x, for bounds |M(x)| ≤ c√x
    #[serde(rename = "invsqrt")]
    InvSqrt,
}

impl Weight {
    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Log => x.ln(),
            Self::Log2 => {
                let l = x.ln();
                l * l
            }
            Self::Sqrt => x.sqrt(),
            Self::InvSqrt => 1.0 / x.sqrt(),
        }
    }

    /// Power k of log x, for the log weights.
    pub fn log_power(self) -> Option<u32> {
        match self {
            Self::One => Some(0),
            Self::Log => Some(1),
            Self::Log2 => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BigM => "M",
            Self::SmallM => "m",
            Self::M1 => "m1",
            Self::MCheck => "mcheck",
        })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::One => "1",
            Self::Log => "log",
            Self::Log2 => "log2",
            Self::Sqrt => "sqrt",
            Self::InvSqrt => "invsqrt",
        })
    }
}

impl FromStr for Func {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" => Ok(Self::BigM),
            "m" => Ok(Self::SmallM),
            "m1" => Ok(Self::M1),
            "mcheck" => Ok(Self::MCheck),
            _ => Err(Error::InvalidArgument(format!("unknown function {:?} (M, m, m1, mcheck)", s))),
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Self::One),
            "log" => Ok(Self::Log),
            "log2" => Ok(Self::Log2),
            "sqrt" => Ok(Self::Sqrt),
            "invsqrt" => Ok(Self::InvSqrt),
            _ => Err(Error::InvalidArgument(format!("unknown weight {:?} (1, log, log2, sqrt, invsqrt)", s))),
        }
    }
}

/// scale·weight(x)·|f(x)| ≤ bound for every real x in the range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub func: Func,
    pub weight: Weight,
    pub scale: f64,
    pub bound: f64,
}

impl Predicate {
    pub fn new(func: Func, weight: Weight, bound: f64) -> Self {
        Self { func, weight, scale: 1.0, bound }
    }

    /// 4343·|m(x)| ≤ 1
    pub fn m4343() -> Self {
        Self { func: Func::SmallM, weight: Weight::One, scale: 4343.0, bound: 1.0 }
    }

    /// log x·|m(x)| ≤ 0.0130073
    pub fn mlog() -> Self {
        Self::new(Func::SmallM, Weight::Log, 0.0130073)
    }

    /// |M(x)| ≤ c√x
    pub fn big_m_sqrt(c: f64) -> Self {
        Self::new(Func::BigM, Weight::InvSqrt, c)
    }

    /// |m(x)|√x ≤ c
    pub fn m_sqrt(c: f64) -> Self {
        Self::new(Func::SmallM, Weight::Sqrt, c)
    }

    /// Built-in names, or `f:weight:bound` with bound a decimal or `1/N`.
    pub fn parse(s: &str) -> Result<Self> {
        let named = match s {
            "m4343" => Some(Self::m4343()),
            "mlog" => Some(Self::mlog()),
            "Msqrt05" => Some(Self::big_m_sqrt(0.5)),
            "Msqrt0571" => Some(Self::big_m_sqrt(0.571)),
            "msqrt05" => Some(Self::m_sqrt(0.5)),
            "m1log2" => Some(Self::new(Func::M1, Weight::Log2, 0.138)),
            "mchecklog2" => Some(Self::new(Func::MCheck, Weight::Log2, 0.162)),
            _ => None,
        };
        if let Some(p) = named {
            return Ok(p);
        }
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "unknown predicate {:?}; use a built-in name or f:weight:bound",
                s
            )));
        }
        let func = parts[0].parse()?;
        let weight = parts[1].parse()?;
        let bad = || Error::InvalidArgument(format!("bad bound {:?}", parts[2]));
        if let Some(("1", den)) = parts[2].split_once('/') {
            let scale: f64 = den.trim().parse().map_err(|_| bad())?;
            if !(scale > 0.0) {
                return Err(bad());
            }
            return Ok(Self { func, weight, scale, bound: 1.0 });
        }
        let q = parse_rational(parts[2]).ok_or_else(bad)?;
        let bound = num::ToPrimitive::to_f64(&q).ok_or_else(bad)?;
        if !(bound >= 0.0) {
            return Err(bad());
        }
        Ok(Self::new(func, weight, bound))
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 1.0 {
            write!(f, "{}:{}:{}", self.func, self.weight, self.bound)
        } else if self.bound == 1.0 {
            write!(f, "{}:{}:1/{}", self.func, self.weight, self.scale)
        } else {
            write!(f, "{}*{}:{}:{}", self.scale, self.func, self.weight, self.bound)
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
