use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Deserialize;

use super::form::{BoundForm, Provenance, Remainder, Target};
use super::ledger::Ledger;
use super::ops::{
    abs_m_integral_model, convert_via_g1, convert_via_g1check, convert_via_h1, convert_via_h1_localized,
    convert_via_h_envelope, descend_at, form_integral, lower_rank, majorant_descent, merge, triangle_m, weaken,
    ConvertParams, EnvelopeOptions,
};
use super::pos::{fmt_num, Pos, Rounding};
use crate::arith::{abs_mertens_prefix_integral, SieveOptions, Tables};
use crate::error::{Error, Result};
use crate::verify::{verify_range, Func, Predicate, VerifyOptions, Weight};
use crate::weights::EnvelopeParams;

/// Built-in plan replaying the √x models and the constant, 1/log, 1/log² and m̌ chains.
pub const MASTER_PLAN: &str = include_str!("master.toml");

/// Chains of the built-in plan.
pub const CHAINS: [&str; 5] = ["models", "const", "log", "log2", "mcheck"];

/// Largest rank a verify-lower step scans from.
pub const MAX_VERIFY_RANK: f64 = 1e8;
const VERIFY_WINDOW: f64 = 262_144.0;

/// A number written as a TOML number or as text (`1/4345`, `exp(18900)`).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Value(f64),
    Text(String),
}

impl Num {
    pub fn pos(&self) -> Result<Pos> {
        match self {
            Num::Value(v) => Pos::new(*v),
            Num::Text(s) => s.parse(),
        }
    }

    fn text(&self) -> Option<String> {
        match self {
            Num::Text(s) => Some(s.clone()),
            Num::Value(_) => None,
        }
    }

    fn finite(&self) -> Result<f64> {
        let v = self.pos()?.value();
        if !v.is_finite() {
            return Err(Error::Plan(format!("{:?} is too large here", self)));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemainderSpec {
    pub coef: Num,
    pub power: f64,
}

/// One piece of a cut integral, from the previous piece's end to `to`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub to: Num,
    /// A known bound for the piece.
    #[serde(default)]
    pub value: Option<Num>,
    /// The exact value from the sieve (first piece only).
    #[serde(default)]
    pub sieve: bool,
    /// Integrate the bound of a ledger entry.
    #[serde(default, rename = "use")]
    pub use_entry: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvertStep {
    pub id: String,
    pub hyp: String,
    pub t_cut: Num,
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub j: Option<f64>,
    #[serde(default)]
    pub integral: Option<Vec<Piece>>,
    #[serde(default)]
    pub integral_round: Option<String>,
    #[serde(default)]
    pub factor_round: Option<String>,
    #[serde(default)]
    pub round: Option<String>,
    #[serde(default)]
    pub rem_round: Option<String>,
    #[serde(default)]
    pub rem_per_cut: bool,
    #[serde(default)]
    pub envelope: Option<EnvelopeParams>,
    /// Moving cut T = x^{3/4−ε} (h₁ conversion only).
    #[serde(default)]
    pub localize_eps: Option<f64>,
    #[serde(default)]
    pub chain: Option<String>,
}

/// A plan step; each step adds one ledger entry.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Step {
    Axiom {
        id: String,
        target: String,
        a: Num,
        theta: f64,
        #[serde(default)]
        j: f64,
        rank: Num,
        #[serde(default)]
        upper: Option<Num>,
        #[serde(default)]
        remainders: Vec<RemainderSpec>,
        citation: String,
        #[serde(default)]
        chain: Option<String>,
    },
    ConvertG1(ConvertStep),
    ConvertG1check(ConvertStep),
    ConvertH2(ConvertStep),
    ConvertH1(ConvertStep),
    Triangle {
        id: String,
        m1: String,
        m_over_x: String,
        #[serde(default)]
        round: Option<String>,
        #[serde(default)]
        chain: Option<String>,
    },
    Merge {
        id: String,
        hyps: Vec<String>,
        #[serde(default)]
        round: Option<String>,
        #[serde(default)]
        chain: Option<String>,
    },
    Weaken {
        id: String,
        hyp: String,
        #[serde(default)]
        a: Option<Num>,
        #[serde(default)]
        rank: Option<Num>,
        #[serde(default)]
        upper: Option<Num>,
        #[serde(default)]
        chain: Option<String>,
    },
    Descend {
        id: String,
        hyp: String,
        #[serde(default)]
        at: Option<Num>,
        #[serde(default)]
        goal: Option<Num>,
        #[serde(default)]
        theta: Option<f64>,
        #[serde(default)]
        j: Option<f64>,
        #[serde(default)]
        round: Option<String>,
        #[serde(default)]
        rank_round: Option<String>,
        #[serde(default)]
        chain: Option<String>,
    },
    Lower {
        id: String,
        hyp: String,
        via: Vec<String>,
        #[serde(default)]
        rank_round: Option<String>,
        #[serde(default)]
        chain: Option<String>,
    },
    VerifyLower {
        id: String,
        hyp: String,
        floor: Num,
        #[serde(default)]
        chain: Option<String>,
    },
}

impl Step {
    pub fn id(&self) -> &str {
        match self {
            Step::Axiom { id, .. }
            | Step::Triangle { id, .. }
            | Step::Merge { id, .. }
            | Step::Weaken { id, .. }
            | Step::Descend { id, .. }
            | Step::Lower { id, .. }
            | Step::VerifyLower { id, .. } => id,
            Step::ConvertG1(c) | Step::ConvertG1check(c) | Step::ConvertH2(c) | Step::ConvertH1(c) => &c.id,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Step::Axiom { .. } => "axiom",
            Step::ConvertG1(_) => "convert-g1",
            Step::ConvertG1check(_) => "convert-g1check",
            Step::ConvertH2(_) => "convert-h2",
            Step::ConvertH1(_) => "convert-h1",
            Step::Triangle { .. } => "triangle",
            Step::Merge { .. } => "merge",
            Step::Weaken { .. } => "weaken",
            Step::Descend { .. } => "descend",
            Step::Lower { .. } => "lower",
            Step::VerifyLower { .. } => "verify-lower",
        }
    }

    pub fn chain(&self) -> Option<&str> {
        match self {
            Step::Axiom { chain, .. }
            | Step::Triangle { chain, .. }
            | Step::Merge { chain, .. }
            | Step::Weaken { chain, .. }
            | Step::Descend { chain, .. }
            | Step::Lower { chain, .. }
            | Step::VerifyLower { chain, .. } => chain.as_deref(),
            Step::ConvertG1(c) | Step::ConvertG1check(c) | Step::ConvertH2(c) | Step::ConvertH1(c) => {
                c.chain.as_deref()
            }
        }
    }

    /// Ledger entries the step reads.
    pub fn inputs(&self) -> Vec<&str> {
        match self {
            Step::Axiom { .. } => vec![],
            Step::ConvertG1(c) | Step::ConvertG1check(c) | Step::ConvertH2(c) | Step::ConvertH1(c) => {
                let mut v = vec![c.hyp.as_str()];
                for p in c.integral.iter().flatten() {
                    if let Some(u) = &p.use_entry {
                        v.push(u);
                    }
                }
                v
            }
            Step::Triangle { m1, m_over_x, .. } => vec![m1, m_over_x],
            Step::Merge { hyps, .. } => hyps.iter().map(String::as_str).collect(),
            Step::Weaken { hyp, .. } | Step::Descend { hyp, .. } | Step::VerifyLower { hyp, .. } => vec![hyp],
            Step::Lower { hyp, via, .. } => {
                let mut v = vec![hyp.as_str()];
                v.extend(via.iter().map(String::as_str));
                v
            }
        }
    }
}

/// An ordered list of steps.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Plan {
    #[serde(default, rename = "step")]
    pub steps: Vec<Step>,
}

impl Plan {
    pub fn parse(text: &str) -> Result<Self> {
        let p: Plan = toml::from_str(text).map_err(|e| Error::Plan(format!("plan file: {}", e)))?;
        p.check()?;
        Ok(p)
    }

    pub fn master() -> Self {
        Self::parse(MASTER_PLAN).expect("built-in plan parses")
    }

    /// Ids are unique and every input is produced by an earlier step or already known.
    fn check(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for s in &self.steps {
            if !seen.insert(s.id()) {
                return Err(Error::Plan(format!("step id {:?} appears twice", s.id())));
            }
        }
        Ok(())
    }

    /// The steps labelled `chain` with everything they depend on, in plan order.
    pub fn select(&self, chain: &str) -> Result<Plan> {
        let pos: HashMap<&str, usize> = self.steps.iter().enumerate().map(|(i, s)| (s.id(), i)).collect();
        let mut keep = vec![false; self.steps.len()];
        let mut stack: Vec<usize> =
            self.steps.iter().enumerate().filter(|(_, s)| s.chain() == Some(chain)).map(|(i, _)| i).collect();
        if stack.is_empty() {
            return Err(Error::Plan(format!("no steps belong to chain {:?}", chain)));
        }
        while let Some(i) = stack.pop() {
            if keep[i] {
                continue;
            }
            keep[i] = true;
            for inp in self.steps[i].inputs() {
                match pos.get(inp) {
                    Some(&k) => stack.push(k),
                    None => {
                        return Err(Error::Plan(format!("step {:?} reads unknown entry {:?}", self.steps[i].id(), inp)))
                    }
                }
            }
        }
        Ok(Plan { steps: self.steps.iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s.clone()).collect() })
    }

    /// Ids of the steps labelled `chain`.
    pub fn chain_ids(&self, chain: &str) -> Vec<String> {
        self.steps.iter().filter(|s| s.chain() == Some(chain)).map(|s| s.id().to_string()).collect()
    }
}

type Provider<'a> = Box<dyn FnMut(u64) -> Result<Arc<Tables>> + 'a>;

/// Sieve access and verification settings for running plans.
pub struct Context<'a> {
    pub verify: VerifyOptions,
    provider: Provider<'a>,
    tables: Option<Arc<Tables>>,
}

impl Default for Context<'_> {
    fn default() -> Self {
        Self::new()
    }
}

impl<'a> Context<'a> {
    /// Sieves on demand.
    pub fn new() -> Self {
        Self::with_provider(|limit| Ok(Arc::new(Tables::sieve(limit, &SieveOptions::default())?)))
    }

    pub fn with_provider(f: impl FnMut(u64) -> Result<Arc<Tables>> + 'a) -> Self {
        Self { verify: VerifyOptions::default(), provider: Box::new(f), tables: None }
    }

    pub fn with_tables(t: Arc<Tables>) -> Self {
        let mut c = Self::new();
        c.tables = Some(t);
        c
    }

    pub fn tables(&mut self, limit: u64) -> Result<Arc<Tables>> {
        if let Some(t) = &self.tables {
            if t.limit() >= limit {
                return Ok(t.clone());
            }
        }
        let t = (self.provider)(limit.max(1000))?;
        if t.limit() < limit {
            return Err(Error::Range(format!("tables reach {}, {} needed", t.limit(), limit)));
        }
        self.tables = Some(t.clone());
        Ok(t)
    }
}

fn rounding(s: &Option<String>) -> Result<Rounding> {
    match s {
        Some(t) => t.parse(),
        None => Ok(Rounding::None),
    }
}

fn apply_round(mut f: BoundForm, r: &Option<String>) -> Result<BoundForm> {
    let r = rounding(r)?;
    if r != Rounding::None {
        let v = r.up(f.a)?;
        f.provenance.set_f("computed", f.a);
        f.a = v.value;
        f.a_text = v.text;
    }
    Ok(f)
}

/// Which integral a conversion needs.
#[derive(Debug, Clone, Copy)]
enum Cut {
    /// ∫₁^T |M|
    AbsM,
    /// ∫₁^T |m|
    AbsSmallM,
    /// ∫₁^T u|m(u)| du
    MomentSmallM,
}

fn sieve_integral(ctx: &mut Context, cut: Cut, to: Pos) -> Result<Pos> {
    let t = to.value();
    if !(t >= 2.0 && t.fract() == 0.0 && t <= MAX_VERIFY_RANK) {
        return Err(Error::Plan(format!("sieve integral needs an integer end in [2, 1e8], got {}", to)));
    }
    let t = t as u64;
    let tables = ctx.tables(t)?;
    match cut {
        Cut::AbsM => Ok(Pos::Plain(abs_mertens_prefix_integral(tables.mu(), t)? as f64)),
        Cut::AbsSmallM | Cut::MomentSmallM => {
            let m = tables.m();
            let mut s = 0.0f64;
            let mut r = 0.0f64;
            for n in 1..t {
                let w = match cut {
                    Cut::MomentSmallM => n as f64 + 0.5,
                    _ => 1.0,
                };
                s += w * m.value(n).abs();
                r += w * m.error_radius(n);
            }
            let total = s + r + s * 4.0 * crate::numeric::gamma(t as f64);
            Ok(Pos::Plain(total))
        }
    }
}

fn cut_integral(
    ctx: &mut Context,
    ledger: &Ledger,
    c: &ConvertStep,
    cut: Cut,
    inputs: &mut Vec<String>,
    prov: &mut Provenance,
) -> Result<Pos> {
    let t_cut = c.t_cut.pos()?;
    let total = match &c.integral {
        None => match cut {
            Cut::AbsM => {
                prov.notes.push("cut integral from |M(t)| ≤ √t below 1e16, |M(t)| ≤ t above".into());
                abs_m_integral_model(t_cut)
            }
            _ => return Err(Error::Plan(format!("step {:?} needs an integral specification", c.id))),
        },
        Some(pieces) => {
            let (target, moment) = match cut {
                Cut::AbsM => (Target::MOverX, 1.0),
                Cut::AbsSmallM => (Target::SmallM, 0.0),
                Cut::MomentSmallM => (Target::SmallM, 1.0),
            };
            let mut start = Pos::ONE;
            let mut total = Pos::ZERO;
            for (k, p) in pieces.iter().enumerate() {
                let to = p.to.pos()?;
                if to < start {
                    return Err(Error::Plan(format!("integral pieces of {:?} are not increasing", c.id)));
                }
                let sources = p.value.is_some() as u8 + p.sieve as u8 + p.use_entry.is_some() as u8;
                if sources != 1 {
                    return Err(Error::Plan(format!(
                        "integral piece {} of {:?} needs exactly one of value, sieve, use",
                        k + 1,
                        c.id
                    )));
                }
                let v = if let Some(v) = &p.value {
                    v.pos()?
                } else if p.sieve {
                    if k != 0 {
                        return Err(Error::Plan(format!("sieve piece of {:?} must come first", c.id)));
                    }
                    sieve_integral(ctx, cut, to)?
                } else {
                    let id = p.use_entry.as_deref().unwrap_or_default();
                    let f = ledger.get(id)?;
                    if f.target != target {
                        return Err(Error::Plan(format!(
                            "integral piece uses {:?} bounding {}, {} needed",
                            id, f.target, target
                        )));
                    }
                    inputs.push(id.to_string());
                    form_integral(f, start, to, moment)?
                };
                total = total.add(v);
                start = to;
            }
            if start != t_cut {
                return Err(Error::Plan(format!(
                    "integral pieces of {:?} end at {}, not at the cut {}",
                    c.id, start, t_cut
                )));
            }
            total
        }
    };
    prov.set("integral_computed", total);
    rounding(&c.integral_round)?.up_pos(total)
}

fn convert(ctx: &mut Context, ledger: &Ledger, c: &ConvertStep, kind: &str) -> Result<BoundForm> {
    let hyp = ledger.get(&c.hyp)?;
    let mut inputs = vec![c.hyp.clone()];
    let mut scratch = Provenance::default();
    if c.localize_eps.is_some() && kind != "convert-h1" {
        return Err(Error::Plan(format!("localize_eps applies to convert-h1 only ({:?})", c.id)));
    }
    if (c.rem_round.is_some() || c.rem_per_cut || c.envelope.is_some()) && kind != "convert-h2" {
        return Err(Error::Plan(format!("remainder and envelope options apply to convert-h2 only ({:?})", c.id)));
    }
    let mut f = if let (Some(eps), "convert-h1") = (c.localize_eps, kind) {
        convert_via_h1_localized(hyp, eps)?
    } else {
        let cut = match kind {
            "convert-g1" | "convert-g1check" => Cut::AbsM,
            "convert-h2" => Cut::AbsSmallM,
            _ => Cut::MomentSmallM,
        };
        let integral = cut_integral(ctx, ledger, c, cut, &mut inputs, &mut scratch)?;
        let p = ConvertParams {
            t_cut: c.t_cut.pos()?,
            theta: c.theta.unwrap_or(hyp.theta),
            j: c.j.unwrap_or(hyp.j),
            integral,
            factor_round: rounding(&c.factor_round)?,
        };
        match kind {
            "convert-g1" => convert_via_g1(hyp, &p)?,
            "convert-g1check" => convert_via_g1check(hyp, &p)?,
            "convert-h2" => {
                let o = EnvelopeOptions {
                    env: c.envelope.unwrap_or_else(EnvelopeParams::h2_published),
                    rem_round: rounding(&c.rem_round)?,
                    rem_per_cut: c.rem_per_cut,
                };
                convert_via_h_envelope(hyp, &p, &o)?
            }
            _ => convert_via_h1(hyp, &p)?,
        }
    };
    f.provenance.values.extend(scratch.values);
    f.provenance.notes.extend(scratch.notes);
    f.provenance.inputs = inputs;
    apply_round(f, &c.round)
}

/// Last n in [floor, top) whose interval [n, n+1) breaks the predicate, scanning down.
fn last_violation(
    tables: &Tables,
    pred: &Predicate,
    floor: f64,
    top: f64,
    opts: &VerifyOptions,
) -> Result<Option<u64>> {
    let mut hi = top;
    while hi > floor {
        let lo = (hi - VERIFY_WINDOW).max(floor);
        let mut from = lo;
        let mut found: Option<u64> = None;
        loop {
            let rep = verify_range(tables, pred, from, hi, opts)?;
            let bad = rep
                .violations
                .iter()
                .map(|v| v.n)
                .chain(rep.indeterminate.iter().filter(|e| !e.resolved).map(|e| e.n))
                .max();
            let complete = rep.violations.len() as u64 == rep.violation_count
                && rep.indeterminate.iter().filter(|e| !e.resolved).count() as u64 == rep.unresolved;
            match bad {
                Some(n) => {
                    found = Some(n);
                    if complete || (n + 1) as f64 >= hi {
                        break;
                    }
                    from = (n + 1) as f64;
                }
                None => break,
            }
        }
        if found.is_some() {
            return Ok(found);
        }
        hi = lo;
    }
    Ok(None)
}

fn predicate_for(f: &BoundForm) -> Result<Predicate> {
    let func = match f.target {
        Target::SmallM => Func::SmallM,
        Target::M1 => Func::M1,
        Target::MCheck => Func::MCheck,
        Target::MOverX => return Err(Error::Plan("verify-lower supports m, m1 and mcheck bounds".into())),
    };
    let weight = match (f.theta, f.j) {
        (t, j) if t == 1.0 && j == 0.0 => Weight::One,
        (t, j) if t == 1.0 && j == 1.0 => Weight::Log,
        (t, j) if t == 1.0 && j == 2.0 => Weight::Log2,
        (t, j) if t == 0.5 && j == 0.0 => Weight::Sqrt,
        _ => return Err(Error::Plan(format!("no verification weight for θ = {}, j = {}", f.theta, f.j))),
    };
    if !f.is_pure() {
        return Err(Error::Plan(format!("{} must be pure to be verified", f)));
    }
    if let Some(den) = f.a_text.as_deref().and_then(|t| t.strip_prefix("1/")) {
        if let Ok(scale) = den.parse::<f64>() {
            return Ok(Predicate { func, weight, scale, bound: 1.0 });
        }
    }
    Ok(Predicate::new(func, weight, f.a))
}

fn verify_lower(ctx: &mut Context, hyp: &BoundForm, floor: Pos) -> Result<BoundForm> {
    let top = hyp.rank.value();
    let fl = floor.value();
    if !(top <= MAX_VERIFY_RANK) {
        return Err(Error::Resource(format!("verification from {} is beyond the sieve range 1e8", hyp.rank)));
    }
    if !(fl >= 1.0 && fl <= top) {
        return Err(Error::Plan(format!("floor {} must lie in [1, {}]", floor, hyp.rank)));
    }
    let pred = predicate_for(hyp)?;
    let tables = ctx.tables(top.ceil() as u64)?;
    let last = last_violation(&tables, &pred, fl, top, &ctx.verify)?;
    let rank = match last {
        Some(n) => ((n + 1) as f64).max(fl),
        None => fl,
    };
    let mut f = hyp.clone();
    f.rank = Pos::Plain(rank);
    f.provenance = Provenance::derived("verify-lower", &[]);
    f.provenance.set_f("floor", fl);
    f.provenance.set_f("verified_to", top);
    if let Some(n) = last {
        f.provenance.set_f("last_violation", n as f64);
    }
    f.provenance.notes.push(format!("{} verified on [{}, {})", pred, fmt_num(rank), fmt_num(top)));
    Ok(f)
}

fn execute(ctx: &mut Context, ledger: &Ledger, step: &Step) -> Result<BoundForm> {
    let mut f = match step {
        Step::Axiom { target, a, theta, j, rank, upper, remainders, citation, .. } => {
            let target: Target = target.parse()?;
            let mut f = BoundForm::new(target, a.finite()?, *theta, *j, rank.pos()?)?;
            f.a_text = a.text();
            if let Some(u) = upper {
                f = f.with_upper(u.pos()?)?;
            }
            for r in remainders {
                f.remainders.push(Remainder { coef: r.coef.pos()?, power: r.power });
            }
            f.provenance = Provenance::axiom(citation);
            f.validate()?;
            return Ok(f);
        }
        Step::ConvertG1(c) => convert(ctx, ledger, c, "convert-g1")?,
        Step::ConvertG1check(c) => convert(ctx, ledger, c, "convert-g1check")?,
        Step::ConvertH2(c) => convert(ctx, ledger, c, "convert-h2")?,
        Step::ConvertH1(c) => convert(ctx, ledger, c, "convert-h1")?,
        Step::Triangle { m1, m_over_x, round, .. } => {
            apply_round(triangle_m(ledger.get(m1)?, ledger.get(m_over_x)?)?, round)?
        }
        Step::Merge { hyps, round, .. } => {
            let forms = hyps.iter().map(|h| ledger.get(h)).collect::<Result<Vec<_>>>()?;
            apply_round(merge(&forms)?, round)?
        }
        Step::Weaken { hyp, a, rank, upper, .. } => {
            let base = ledger.get(hyp)?;
            let av = a.as_ref().map(Num::finite).transpose()?;
            let mut f =
                weaken(base, av, rank.as_ref().map(Num::pos).transpose()?, upper.as_ref().map(Num::pos).transpose()?)?;
            if let Some(a) = a {
                f.a_text = a.text();
            }
            f
        }
        Step::Descend { hyp, at, goal, theta, j, round, rank_round, .. } => {
            let base = ledger.get(hyp)?;
            let th = theta.unwrap_or(base.theta);
            let jj = j.unwrap_or(base.j);
            match (at, goal) {
                (Some(at), None) => {
                    if rank_round.is_some() {
                        return Err(Error::Plan("rank_round applies to goal descents".into()));
                    }
                    descend_at(base, th, jj, at.pos()?, &rounding(round)?)?
                }
                (None, Some(goal)) => {
                    if round.is_some() {
                        return Err(Error::Plan("a goal descent keeps the goal constant; drop round".into()));
                    }
                    let g = goal.finite()?;
                    let x0 = majorant_descent(base, g, jj, th)?;
                    let x0r = rounding(rank_round)?.up_pos(x0)?;
                    let text = goal.text().unwrap_or_else(|| fmt_num(g));
                    let mut f = descend_at(base, th, jj, x0r, &Rounding::Publish(text))?;
                    f.provenance.set("descent_rank", x0);
                    f
                }
                _ => return Err(Error::Plan("descend needs exactly one of at, goal".into())),
            }
        }
        Step::Lower { hyp, via, rank_round, .. } => {
            let base = ledger.get(hyp)?;
            if via.is_empty() {
                return Err(Error::Plan("lower needs at least one model".into()));
            }
            let mut cur = base.clone();
            let mut prov = Provenance::derived("lower", &[]);
            for v in via {
                let model = ledger.get(v)?;
                let low = lower_rank(&cur, model)?;
                if let Some(t) = low.threshold {
                    prov.set(&format!("threshold:{}", v), t);
                }
                if let Some(e) = low.upper_edge {
                    prov.set(&format!("upper_edge:{}", v), e);
                }
                prov.set(&format!("rank:{}", v), low.rank);
                cur.rank = low.rank;
            }
            let r = rounding(rank_round)?.up_pos(cur.rank)?;
            cur.rank = if r <= base.rank { r } else { base.rank };
            cur.provenance = prov;
            cur
        }
        Step::VerifyLower { hyp, floor, .. } => verify_lower(ctx, ledger.get(hyp)?, floor.pos()?)?,
    };
    if f.provenance.inputs.is_empty() {
        f.provenance.inputs = step.inputs().iter().map(|s| s.to_string()).collect();
    }
    f.validate()?;
    Ok(f)
}

/// Runs the steps in order, adding one entry per step; returns the new ids.
pub fn run_plan(plan: &Plan, ledger: &mut Ledger, ctx: &mut Context) -> Result<Vec<String>> {
    let mut ids = Vec::with_capacity(plan.steps.len());
    for step in &plan.steps {
        for inp in step.inputs() {
            if !ledger.contains(inp) {
                return Err(Error::Plan(format!(
                    "step {:?} reads {:?}, which no earlier step produced",
                    step.id(),
                    inp
                )));
            }
        }
        let f = execute(ctx, ledger, step).map_err(|e| match e {
            Error::Plan(m) => Error::Plan(format!("step {:?} ({}): {}", step.id(), step.kind(), m)),
            Error::NoDescent(m) => Error::NoDescent(format!("step {:?}: {}", step.id(), m)),
            other => other,
        })?;
        ledger.insert(step.id(), f)?;
        ids.push(step.id().to_string());
    }
    Ok(ids)
}

/// Replays one chain of the built-in plan (with its dependencies) into a fresh ledger.
pub fn bootstrap(chain: &str, ctx: &mut Context) -> Result<(Ledger, Vec<String>)> {
    let master = Plan::master();
    let plan = master.select(chain)?;
    let mut ledger = Ledger::new();
    run_plan(&plan, &mut ledger, ctx)?;
    Ok((ledger, master.chain_ids(chain)))
}
