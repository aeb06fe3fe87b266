use super::certify::{certify_le, highest_end, lowest_start, sum_value, Check, Term};
use super::form::{BoundForm, Provenance, SqrtModel, Target};
use super::pos::{fmt_num, Pos, Rounding};
use crate::error::{Error, Result};
use crate::special::{envelope_factor, mellin_g1_closed, mellin_g1check_closed, mellin_h1_closed};
use crate::weights::EnvelopeParams;

/// Parameters shared by the conversions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvertParams {
    pub t_cut: Pos,
    pub theta: f64,
    pub j: f64,
    /// Bound on the cut integral (∫₁^T|M|, ∫₁^T|m| or ∫₁^T u|m(u)|du, depending on the conversion).
    pub integral: Pos,
    pub factor_round: Rounding,
}

impl ConvertParams {
    pub fn new(t_cut: f64, theta: f64, j: f64, integral: f64) -> Result<Self> {
        Ok(Self { t_cut: Pos::new(t_cut)?, theta, j, integral: Pos::new(integral)?, factor_round: Rounding::None })
    }
}

fn expect(hyp: &BoundForm, target: Target, p: &ConvertParams) -> Result<()> {
    if hyp.target != target {
        return Err(Error::Plan(format!("hypothesis bounds {}, the conversion needs {}", hyp.target, target)));
    }
    if !hyp.is_pure() {
        return Err(Error::Plan(format!(
            "hypothesis {} carries remainder terms; descend it to a pure shape first",
            hyp
        )));
    }
    if hyp.theta != p.theta || hyp.j != p.j {
        return Err(Error::Plan(format!(
            "hypothesis shape (θ = {}, j = {}) differs from the conversion (θ = {}, j = {})",
            hyp.theta, hyp.j, p.theta, p.j
        )));
    }
    if hyp.rank > p.t_cut {
        return Err(Error::Plan(format!(
            "hypothesis rank {} exceeds the cut T = {}; its use range starts at T",
            hyp.rank, p.t_cut
        )));
    }
    Ok(())
}

fn pos_max(a: Pos, b: Pos) -> Pos {
    if a >= b {
        a
    } else {
        b
    }
}

fn finish(mut f: BoundForm) -> Result<BoundForm> {
    if let Some(u) = f.upper {
        if u < f.rank {
            return Err(Error::Plan(format!(
                "derived validity range is empty: rank {} above upper limit {}",
                f.rank, u
            )));
        }
    }
    f.validate()?;
    f.a_text = None;
    Ok(f)
}

fn g1_like(hyp: &BoundForm, p: &ConvertParams, check: bool) -> Result<BoundForm> {
    let (from, to, step) = if check {
        (Target::M1, Target::MCheck, "convert-g1check")
    } else {
        (Target::MOverX, Target::M1, "convert-g1")
    };
    if !(p.t_cut > Pos::ONE) {
        return Err(Error::Domain(format!("cut T = {} must exceed 1", p.t_cut)));
    }
    expect(hyp, from, p)?;
    let s = p.theta - p.j / p.t_cut.ln();
    if !(s > -1.0) {
        return Err(Error::Domain(format!("exponent s = θ − j/log T = {} must exceed −1", s)));
    }
    let fv = if check { mellin_g1check_closed(s)? } else { mellin_g1_closed(s)? };
    let factor = p.factor_round.up(fv.value + fv.abs_error)?.value;
    let mut f = BoundForm {
        target: to,
        a: hyp.a * factor,
        a_text: None,
        theta: p.theta,
        j: p.j,
        rank: pos_max(hyp.rank, p.t_cut),
        upper: hyp.upper,
        remainders: Vec::new(),
        provenance: Provenance::derived(step, &[]),
    }
    .with_remainder(Pos::Plain(8.0 / 3.0), 1.0)
    .with_remainder(p.integral, 2.0);
    f.provenance.set_f("s", s);
    f.provenance.set_f("factor", factor);
    f.provenance.set("T_cut", p.t_cut);
    f.provenance.set("integral", p.integral);
    finish(f)
}

/// |M/x| hypothesis → |m₁| bound through the weight G₁: A′ = A·∫G₁t^{−s}, s = θ − j/log T.
pub fn convert_via_g1(hyp: &BoundForm, p: &ConvertParams) -> Result<BoundForm> {
    g1_like(hyp, p, false)
}

/// |m₁| hypothesis → |m̌ − 1| bound: A′ = A·(1 + ∫G₁t^{−s}).
pub fn convert_via_g1check(hyp: &BoundForm, p: &ConvertParams) -> Result<BoundForm> {
    g1_like(hyp, p, true)
}

/// Options of the coefficient-weight conversion.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeOptions {
    pub env: EnvelopeParams,
    /// Rounding of the remainder numerator sup‖H‖·∫|m| + Σc.
    pub rem_round: Rounding,
    /// Round the numerator in units of T.
    pub rem_per_cut: bool,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        Self { env: EnvelopeParams::h2_published(), rem_round: Rounding::None, rem_per_cut: false }
    }
}

/// |m| hypothesis → |m₁| bound through a coefficient weight with published envelope,
/// factor from δ = (1 − θ) + j/log T; valid from max(T, max r) up to K times the hypothesis limit.
pub fn convert_via_h_envelope(hyp: &BoundForm, p: &ConvertParams, o: &EnvelopeOptions) -> Result<BoundForm> {
    o.env.validate()?;
    if !(p.theta > 0.0) {
        return Err(Error::Domain(format!("θ = {} must be positive", p.theta)));
    }
    if !(p.t_cut > Pos::ONE) {
        return Err(Error::Domain(format!("cut T = {} must exceed 1", p.t_cut)));
    }
    expect(hyp, Target::SmallM, p)?;
    let delta = (1.0 - p.theta) + p.j / p.t_cut.ln();
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!("δ = {} must lie in [0, 1)", delta)));
    }
    let raw = envelope_factor(&o.env, delta)?;
    let factor = p.factor_round.up(raw)?.value;
    let num = p.integral.scale(o.env.sup_norm).add(Pos::Plain(o.env.sum_c));
    let rem = if o.rem_per_cut {
        o.rem_round.up_pos(Pos::from_ln(num.ln() - p.t_cut.ln()))?.mul(p.t_cut)
    } else {
        o.rem_round.up_pos(num)?
    };
    let rank = pos_max(pos_max(hyp.rank, p.t_cut), Pos::Plain(o.env.max_r));
    let mut f = BoundForm {
        target: Target::M1,
        a: hyp.a * factor,
        a_text: None,
        theta: p.theta,
        j: p.j,
        rank,
        upper: hyp.upper.map(|u| u.scale(o.env.k)),
        remainders: Vec::new(),
        provenance: Provenance::derived("convert-h2", &[]),
    }
    .with_remainder(rem, 1.0);
    f.provenance.set_f("delta", delta);
    f.provenance.set_f("factor_raw", raw);
    f.provenance.set_f("factor", factor);
    f.provenance.set("T_cut", p.t_cut);
    f.provenance.set("integral", p.integral);
    f.provenance.set("remainder", rem);
    if let Some(n) = o.env.k_note() {
        f.provenance.notes.push(n);
    }
    finish(f)
}

/// |m| hypothesis → |m₁| bound through h₁: factor ∫H₁t^{−1−θ}, remainder 2/x + 2.1·∫₁^T u|m|/x².
pub fn convert_via_h1(hyp: &BoundForm, p: &ConvertParams) -> Result<BoundForm> {
    if !(p.theta > -1.0) {
        return Err(Error::Domain(format!("θ = {} must exceed −1", p.theta)));
    }
    if p.j != 0.0 {
        return Err(Error::Domain("the h₁ conversion has no logarithmic variant (j = 0)".into()));
    }
    if !(p.t_cut >= Pos::ONE) {
        return Err(Error::Domain(format!("cut T = {} must be ≥ 1", p.t_cut)));
    }
    expect(hyp, Target::SmallM, p)?;
    let fv = mellin_h1_closed(p.theta)?;
    let factor = p.factor_round.up(fv.value + fv.abs_error)?.value;
    let mut f = BoundForm {
        target: Target::M1,
        a: hyp.a * factor,
        a_text: None,
        theta: p.theta,
        j: 0.0,
        rank: pos_max(hyp.rank, p.t_cut),
        upper: hyp.upper,
        remainders: Vec::new(),
        provenance: Provenance::derived("convert-h1", &[]),
    }
    .with_remainder(Pos::Plain(2.0), 1.0)
    .with_remainder(p.integral.scale(2.1), 2.0);
    f.provenance.set_f("factor", factor);
    f.provenance.set("T_cut", p.t_cut);
    f.provenance.set("integral", p.integral);
    finish(f)
}

/// The h₁ conversion with the moving cut T = x^{3/4−ε} and Meissel's |m| ≤ 1 on [1, T]:
/// remainder 2/x + 1.05·x^{2(3/4−ε)}/x².
pub fn convert_via_h1_localized(hyp: &BoundForm, eps: f64) -> Result<BoundForm> {
    if !(eps > 0.0 && eps < 0.75) {
        return Err(Error::Domain(format!("ε = {} must lie in (0, 3/4)", eps)));
    }
    if hyp.target != Target::SmallM || !hyp.is_pure() || hyp.j != 0.0 {
        return Err(Error::Plan(format!("hypothesis {} is not a pure power bound on m", hyp)));
    }
    let a = 0.75 - eps;
    let fv = mellin_h1_closed(hyp.theta)?;
    let factor = fv.value + fv.abs_error;
    let mut f = BoundForm {
        target: Target::M1,
        a: hyp.a * factor,
        a_text: None,
        theta: hyp.theta,
        j: 0.0,
        rank: pos_max(Pos::from_ln(hyp.rank.ln() / a), Pos::ONE),
        upper: hyp.upper,
        remainders: Vec::new(),
        provenance: Provenance::derived("convert-h1", &[]),
    }
    .with_remainder(Pos::Plain(2.0), 1.0)
    .with_remainder(Pos::Plain(1.05), 2.0 - 2.0 * a);
    f.provenance.set_f("factor", factor);
    f.provenance.set_f("eps", eps);
    finish(f)
}

/// |m| ≤ |M/x| + |m₁| for two bounds of the same shape.
pub fn triangle_m(hyp_m1: &BoundForm, hyp_m: &BoundForm) -> Result<BoundForm> {
    if hyp_m1.target != Target::M1 || hyp_m.target != Target::MOverX {
        return Err(Error::Plan(format!(
            "triangle needs an m1 bound and an M-over-x bound, got {} and {}",
            hyp_m1.target, hyp_m.target
        )));
    }
    if !hyp_m1.same_shape(hyp_m) {
        return Err(Error::Plan("triangle needs both bounds in the same shape".into()));
    }
    let upper = match (hyp_m1.upper, hyp_m.upper) {
        (Some(a), Some(b)) => Some(if a <= b { a } else { b }),
        (a, b) => a.or(b),
    };
    let mut remainders = hyp_m1.remainders.clone();
    remainders.extend(hyp_m.remainders.iter().copied());
    let f = BoundForm {
        target: Target::SmallM,
        a: hyp_m1.a + hyp_m.a,
        a_text: None,
        theta: hyp_m1.theta,
        j: hyp_m1.j,
        rank: pos_max(hyp_m1.rank, hyp_m.rank),
        upper,
        remainders,
        provenance: Provenance::derived("triangle", &[]),
    };
    finish(f)
}

/// One bound with the largest constant over contiguous ranges.
pub fn merge(forms: &[&BoundForm]) -> Result<BoundForm> {
    let first = forms.first().ok_or_else(|| Error::Plan("merge needs at least one bound".into()))?;
    let mut sorted: Vec<&BoundForm> = forms.to_vec();
    sorted.sort_by(|a, b| a.rank.partial_cmp(&b.rank).unwrap_or(std::cmp::Ordering::Equal));
    let mut a: f64 = 0.0;
    let mut reach = Some(sorted[0].rank);
    for f in &sorted {
        if f.target != first.target || !f.same_shape(first) || !f.is_pure() {
            return Err(Error::Plan("merge needs pure bounds of one target and shape".into()));
        }
        match reach {
            Some(r) if f.rank <= r => {}
            Some(r) => return Err(Error::Plan(format!("merge ranges leave a gap between {} and {}", r, f.rank))),
            None => {}
        }
        reach = match (reach, f.upper) {
            (None, _) | (_, None) => None,
            (Some(r), Some(u)) => Some(pos_max(r, u)),
        };
        a = a.max(f.a);
    }
    let f = BoundForm {
        target: first.target,
        a,
        a_text: None,
        theta: first.theta,
        j: first.j,
        rank: sorted[0].rank,
        upper: reach,
        remainders: Vec::new(),
        provenance: Provenance::derived("merge", &[]),
    };
    finish(f)
}

/// Replaces A, the rank or the upper limit by weaker values.
pub fn weaken(form: &BoundForm, a: Option<f64>, rank: Option<Pos>, upper: Option<Pos>) -> Result<BoundForm> {
    let mut f = form.clone();
    f.provenance = Provenance::derived("weaken", &[]);
    if let Some(a) = a {
        if a < form.a {
            return Err(Error::Plan(format!("weaken: {} is smaller than A = {}", fmt_num(a), fmt_num(form.a))));
        }
        f.a = a;
        f.a_text = None;
    }
    if let Some(r) = rank {
        if r < form.rank {
            return Err(Error::Plan(format!("weaken: rank {} is below {}", r, form.rank)));
        }
        f.rank = r;
    }
    if let Some(u) = upper {
        if form.upper.is_some_and(|v| u > v) {
            return Err(Error::Plan(format!("weaken: upper limit {} exceeds the valid range", u)));
        }
        f.upper = Some(u);
    }
    f.validate()?;
    Ok(f)
}

fn check_message(c: Check) -> String {
    match c {
        Check::Holds => "holds".into(),
        Check::Fails { at, value } if at.is_finite() => {
            format!("exceeded at x = exp({}) with value {}", fmt_num(at), fmt_num(value))
        }
        Check::Fails { .. } => "the majorant grows without bound".into(),
        Check::Inconclusive { at } => format!("undecided near x = exp({})", fmt_num(at)),
    }
}

/// Value of form(x)·x^{1−θ}·log^j x at `at`, rounded outward, certified as the sup over [at, upper].
pub fn descend_at(form: &BoundForm, theta: f64, j: f64, at: Pos, round: &Rounding) -> Result<BoundForm> {
    if at < form.rank || form.upper.is_some_and(|u| at > u) {
        return Err(Error::Plan(format!("descent point {} outside the validity range of {}", at, form)));
    }
    let terms = form.ratio_terms(theta, j);
    let l0 = at.ln();
    let v = sum_value(&terms, l0);
    let r = round.up(v * (1.0 + 1e-12))?;
    let c = certify_le(&terms, l0, form.upper_ln(), r.value);
    if !c.holds() {
        return Err(Error::NoDescent(format!(
            "majorant of {} is not below {} on [{}, ∞): {}",
            form,
            fmt_num(r.value),
            at,
            check_message(c)
        )));
    }
    let mut f = BoundForm {
        target: form.target,
        a: r.value,
        a_text: r.text,
        theta,
        j,
        rank: at,
        upper: form.upper,
        remainders: Vec::new(),
        provenance: Provenance::derived("descend", &[]),
    };
    f.provenance.set_f("computed", v);
    f.provenance.set("at", at);
    f.validate()?;
    Ok(f)
}

/// Smallest x₀ ≥ form.T with form(x) ≤ target_A·x^{θ−1}/logʲx for all x ≥ x₀.
pub fn majorant_descent(form: &BoundForm, target_a: f64, target_j: f64, target_theta: f64) -> Result<Pos> {
    if !(target_a > 0.0) {
        return Err(Error::InvalidArgument(format!("target constant {} must be positive", target_a)));
    }
    if form.is_pure() && form.theta == target_theta && form.j == target_j && form.a <= target_a {
        return Ok(form.rank);
    }
    let mut terms = form.ratio_terms(target_theta, target_j);
    for t in &mut terms {
        t.ln_coef -= target_a.ln();
    }
    let l_rank = form.rank_ln();
    match lowest_start(&terms, l_rank, form.upper_ln(), 1.0) {
        Some(l) if l == l_rank => Ok(form.rank),
        Some(l) => Ok(Pos::from_ln(l)),
        None => Err(Error::NoDescent(format!(
            "{} never falls below {}·x^{}/log^{} x",
            form,
            fmt_num(target_a),
            fmt_num(target_theta - 1.0),
            fmt_num(target_j)
        ))),
    }
}

/// Result of comparing a bound against a model valid further down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lowering {
    /// New validity rank, before presentation rounding.
    pub rank: Pos,
    /// Where the model crosses the bound, when it lies above the model's own rank.
    pub threshold: Option<Pos>,
    /// Largest x up to which the model stays below the bound, when finite.
    pub upper_edge: Option<Pos>,
}

/// Lowers form.T to T′ by certifying via(x) ≤ form shape on [T′, form.T].
pub fn lower_rank(form: &BoundForm, via: &BoundForm) -> Result<Lowering> {
    if form.target != via.target {
        return Err(Error::Plan(format!("cannot compare a {} bound with a {} model", form.target, via.target)));
    }
    if !form.is_pure() || !(form.a > 0.0) {
        return Err(Error::Plan(format!("{} must be a pure positive shape to be lowered", form)));
    }
    if via.upper.is_some_and(|u| u < form.rank) {
        return Err(Error::Plan(format!("model {} stops below the rank {} of {}", via, form.rank, form)));
    }
    if via.rank >= form.rank {
        return Err(Error::Plan(format!("model {} starts above the rank {} of {}", via, form.rank, form)));
    }
    let mut terms: Vec<Term> = via.ratio_terms(form.theta, form.j);
    for t in &mut terms {
        t.ln_coef -= form.a.ln();
    }
    let lr = form.rank_ln();
    let lv = via.rank_ln();
    let start = lowest_start(&terms, lv, Some(lr), 1.0)
        .ok_or_else(|| Error::Plan(format!("model {} is not below {} at x = {}", via, form, form.rank)))?;
    let closed = match via.sqrt_model() {
        Some(SqrtModel { c, .. }) if form.theta == 1.0 && form.j == 0.0 => {
            let r = c / form.a;
            Some(Pos::Plain(r * r))
        }
        _ => None,
    };
    let threshold = closed.or((start > lv).then(|| Pos::from_ln(start)));
    let grows = terms.iter().any(|t| t.alpha > 0.0 || (t.alpha == 0.0 && t.beta > 0.0));
    let upper_edge = if grows { highest_end(&terms, lr, via.upper_ln(), 1.0).map(Pos::from_ln) } else { None };
    let rank = if start == lv { via.rank } else { Pos::from_ln(start) };
    Ok(Lowering { rank, threshold, upper_edge })
}

/// Lowering against a √x model; for constant bounds the crossing is (c/A)².
pub fn sqrt_range_lowering(form: &BoundForm, model: &SqrtModel) -> Result<Lowering> {
    lower_rank(form, &model.form())
}

/// ∫_a^b t^q dt.
pub fn power_integral(q: f64, a: Pos, b: Pos) -> Pos {
    if b <= a {
        return Pos::ZERO;
    }
    let (la, lb) = (a.ln(), b.ln());
    let e = q + 1.0;
    if e == 0.0 {
        return Pos::new(lb - la).unwrap_or(Pos::ZERO);
    }
    if let (Pos::Plain(x), Pos::Plain(y)) = (a, b) {
        let v = (y.powf(e) - x.powf(e)) / e;
        if v.is_finite() && v > 0.0 && e > 0.0 {
            return Pos::Plain(v);
        }
    }
    if e > 0.0 {
        Pos::from_ln(e * lb + (-(e * (la - lb)).exp_m1()).ln() - e.ln())
    } else {
        Pos::from_ln(e * la + (-(e * (lb - la)).exp_m1()).ln() - (-e).ln())
    }
}

/// Bound on ∫_a^b t^moment·form(t) dt; log factors are bounded by their value at a.
pub fn form_integral(form: &BoundForm, a: Pos, b: Pos, moment: f64) -> Result<Pos> {
    if !form.covers(a, b) {
        return Err(Error::Plan(format!("{} does not cover [{}, {}]", form, a, b)));
    }
    let mut total = Pos::ZERO;
    if form.a > 0.0 {
        let mut main = power_integral(form.theta - 1.0 + moment, a, b).scale(form.a);
        if form.j > 0.0 {
            let la = a.ln();
            if !(la > 0.0) {
                return Err(Error::Plan("a log-shaped bound cannot be integrated from x = 1".into()));
            }
            main = main.scale(la.powf(-form.j));
        }
        total = total.add(main);
    }
    for r in &form.remainders {
        total = total.add(power_integral(moment - r.power, a, b).mul(r.coef));
    }
    Ok(total)
}

/// Default cut integral ∫₁^T|M|: √t model below 10¹⁶, else the trivial bound T²/2.
pub fn abs_m_integral_model(t_cut: Pos) -> Pos {
    if t_cut <= Pos::Plain(1e16) {
        power_integral(0.5, Pos::ONE, t_cut)
    } else {
        power_integral(1.0, Pos::ONE, t_cut)
    }
}
