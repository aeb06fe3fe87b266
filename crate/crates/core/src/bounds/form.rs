use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::certify::Term;
use super::pos::{fmt_num, Pos};
use crate::error::{Error, Result};

/// The function a bound controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    /// |M(x)|/x
    #[serde(rename = "M-over-x")]
    MOverX,
    #[serde(rename = "m")]
    SmallM,
    #[serde(rename = "m1")]
    M1,
    /// |m̌(x) − 1|
    #[serde(rename = "mcheck-minus-1")]
    MCheck,
}

impl Target {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::MOverX => "|M(x)|/x",
            Self::SmallM => "|m(x)|",
            Self::M1 => "|m1(x)|",
            Self::MCheck => "|mcheck(x) - 1|",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MOverX => "M-over-x",
            Self::SmallM => "m",
            Self::M1 => "m1",
            Self::MCheck => "mcheck-minus-1",
        })
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M-over-x" | "M/x" => Ok(Self::MOverX),
            "m" => Ok(Self::SmallM),
            "m1" => Ok(Self::M1),
            "mcheck-minus-1" | "mcheck" => Ok(Self::MCheck),
            _ => Err(Error::InvalidArgument(format!("unknown target {:?} (M-over-x, m, m1, mcheck-minus-1)", s))),
        }
    }
}

/// coef·x^{−power}
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Remainder {
    pub coef: Pos,
    pub power: f64,
}

/// How an entry was obtained.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    /// Step kind, `axiom` for inputs.
    pub step: String,
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    /// Numeric parameters and intermediate values of the step.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Pos>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Provenance {
    pub fn axiom(citation: &str) -> Self {
        Self { step: "axiom".into(), citation: Some(citation.into()), ..Self::default() }
    }

    pub fn derived(step: &str, inputs: &[&str]) -> Self {
        Self { step: step.into(), inputs: inputs.iter().map(|s| s.to_string()).collect(), ..Self::default() }
    }

    pub fn is_axiom(&self) -> bool {
        self.step == "axiom"
    }

    pub fn set(&mut self, key: &str, v: Pos) {
        self.values.insert(key.into(), v);
    }

    pub fn set_f(&mut self, key: &str, v: f64) {
        if v.is_finite() {
            if v >= 0.0 {
                self.values.insert(key.into(), Pos::Plain(v));
            } else {
                self.values.insert(format!("{}_neg", key), Pos::Plain(-v));
            }
        }
    }

    pub fn value(&self, key: &str) -> Option<Pos> {
        self.values.get(key).copied()
    }
}

/// |target(x)| ≤ A·x^{θ−1}/logʲx + Σ coef·x^{−power} for rank ≤ x ≤ upper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundForm {
    pub target: Target,
    #[serde(rename = "A")]
    pub a: f64,
    /// Printed form of A after outward rounding.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_text: Option<String>,
    pub theta: f64,
    pub j: f64,
    #[serde(rename = "T")]
    pub rank: Pos,
    /// None: no upper limit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Pos>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub remainders: Vec<Remainder>,
    pub provenance: Provenance,
}

impl BoundForm {
    pub fn new(target: Target, a: f64, theta: f64, j: f64, rank: Pos) -> Result<Self> {
        let f = Self {
            target,
            a,
            a_text: None,
            theta,
            j,
            rank,
            upper: None,
            remainders: Vec::new(),
            provenance: Provenance::default(),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn with_upper(mut self, upper: Pos) -> Result<Self> {
        self.upper = Some(upper);
        self.validate()?;
        Ok(self)
    }

    pub fn with_remainder(mut self, coef: Pos, power: f64) -> Self {
        if !coef.is_zero() {
            self.remainders.push(Remainder { coef, power });
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return bad(format!("A = {} must be finite and ≥ 0", self.a));
        }
        if !self.theta.is_finite() || !(self.j >= 0.0 && self.j.is_finite()) {
            return bad(format!("bad shape θ = {}, j = {}", self.theta, self.j));
        }
        if !(self.rank >= Pos::ONE) {
            return bad(format!("rank {} must be ≥ 1", self.rank));
        }
        if let Some(u) = self.upper {
            if u < self.rank {
                return bad(format!("upper limit {} below rank {}", u, self.rank));
            }
        }
        for r in &self.remainders {
            if !r.power.is_finite() {
                return bad(format!("bad remainder power {}", r.power));
            }
        }
        Ok(())
    }

    pub fn rank_ln(&self) -> f64 {
        self.rank.ln()
    }

    pub fn upper_ln(&self) -> Option<f64> {
        self.upper.map(Pos::ln)
    }

    /// Terms in L = log x.
    pub fn terms(&self) -> Vec<Term> {
        let mut t = Vec::with_capacity(1 + self.remainders.len());
        if self.a > 0.0 {
            t.push(Term { ln_coef: self.a.ln(), alpha: self.theta - 1.0, beta: -self.j });
        }
        for r in &self.remainders {
            t.push(Term { ln_coef: r.coef.ln(), alpha: -r.power, beta: 0.0 });
        }
        t
    }

    /// Terms of form(x)/(x^{θ′−1}/log^{j′}x).
    pub fn ratio_terms(&self, theta: f64, j: f64) -> Vec<Term> {
        self.terms()
            .into_iter()
            .map(|t| Term { ln_coef: t.ln_coef, alpha: t.alpha - (theta - 1.0), beta: t.beta + j })
            .collect()
    }

    pub fn evaluate_ln(&self, l: f64) -> f64 {
        super::certify::sum_value(&self.terms(), l)
    }

    /// The majorant at x.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.evaluate_ln(x.ln())
    }

    pub fn is_pure(&self) -> bool {
        self.remainders.is_empty()
    }

    pub fn covers(&self, lo: Pos, hi: Pos) -> bool {
        self.rank <= lo && self.upper.is_none_or(|u| hi <= u)
    }

    pub fn same_shape(&self, o: &BoundForm) -> bool {
        self.theta == o.theta && self.j == o.j
    }

    pub fn a_display(&self) -> String {
        self.a_text.clone().unwrap_or_else(|| fmt_num(self.a))
    }

    /// The √-model view when the shape is c/√x on a bounded range.
    pub fn sqrt_model(&self) -> Option<SqrtModel> {
        if self.theta == 0.5 && self.j == 0.0 && self.is_pure() {
            Some(SqrtModel { target: self.target, c: self.a, x_lo: self.rank, x_hi: self.upper })
        } else {
            None
        }
    }

    pub fn shape_text(&self) -> String {
        let mut s = self.a_display();
        let p = self.theta - 1.0;
        if p == -0.5 {
            s.push_str("/√x");
        } else if p != 0.0 {
            s.push_str(&format!("·x^{}", fmt_num(p)));
        }
        if self.j == 1.0 {
            s.push_str("/log x");
        } else if self.j > 0.0 {
            s.push_str(&format!("/log^{} x", fmt_num(self.j)));
        }
        for r in &self.remainders {
            s.push_str(&format!(" + {}·x^-{}", r.coef, fmt_num(r.power)));
        }
        s
    }
}

impl fmt::Display for BoundForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = match self.target {
            Target::MOverX => "|M|/x",
            Target::SmallM => "m",
            Target::M1 => "m1",
            Target::MCheck => "|mcheck-1|",
        };
        match self.upper {
            Some(u) => write!(f, "{} ≤ {} for {} ≤ x ≤ {}", lhs, self.shape_text(), self.rank, u),
            None => write!(f, "{} ≤ {} for x ≥ {}", lhs, self.shape_text(), self.rank),
        }
    }
}

/// |target(x)| ≤ c/√x (|M(x)| ≤ c√x for M-over-x) on [x_lo, x_hi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqrtModel {
    pub target: Target,
    pub c: f64,
    pub x_lo: Pos,
    pub x_hi: Option<Pos>,
}

impl SqrtModel {
    pub fn new(target: Target, c: f64, x_lo: f64, x_hi: f64) -> Result<Self> {
        if !(c > 0.0 && x_lo >= 1.0 && x_lo <= x_hi) {
            return Err(Error::InvalidArgument(format!("bad √ model c = {} on [{}, {}]", c, x_lo, x_hi)));
        }
        Ok(Self { target, c, x_lo: Pos::Plain(x_lo), x_hi: Some(Pos::new(x_hi)?) })
    }

    pub fn form(&self) -> BoundForm {
        BoundForm {
            target: self.target,
            a: self.c,
            a_text: None,
            theta: 0.5,
            j: 0.0,
            rank: self.x_lo,
            upper: self.x_hi,
            remainders: Vec::new(),
            provenance: Provenance::default(),
        }
    }
}
