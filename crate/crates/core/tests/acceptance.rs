//! Acceptance criteria 1 to 11, one PASS/FAIL line each.

use std::sync::Arc;
use std::time::Instant;

use mertens_core::arith::{abs_mertens_prefix_integral, evaluate};
use mertens_core::bounds::{run_plan, BoundForm, Context, Ledger, Plan};
use mertens_core::identities::{residual_bal2, residual_mchliss, residual_thm1_g, residual_thm1_h, sample_points};
use mertens_core::quadrature::{integrate_piecewise, mellin_numeric, TailEnvelope};
use mertens_core::special::{h2_integral_bound, mellin_g1_closed, mellin_h1_closed, SpecialValue};
use mertens_core::verify::{
    ratio_theorem_c, sup_scan, theorem_d_arithmetic, verify_range, Func, Predicate, VerificationReport, VerifyOptions,
    Weight,
};
use mertens_core::weights::{em_h1_envelope, epsilon1, eval_g, eval_h, g1, h1, WeightSpec};
use mertens_core::{SieveOptions, Tables};

const LIMIT: u64 = 10_000_001;

// pinned tolerances
const SUP_TOL: f64 = 1e-9;
const M1_SUP_TOL: f64 = 1e-14;
const MELLIN_WIDTH: f64 = 1e-6;
const MELLIN_X: f64 = 1e5;
const IDENTITY_TOL: f64 = 1e-7;
const EPS1_TOL: f64 = 1e-9;
const ENVELOPE_SLACK: f64 = 1e-15;
const C1_SECONDS: f64 = 120.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn opts(jobs: usize) -> VerifyOptions {
    VerifyOptions { jobs: Some(jobs) }
}

fn verify(t: &Tables, p: &Predicate, lo: f64, hi: f64, jobs: usize) -> VerificationReport {
    verify_range(t, p, lo, hi, &opts(jobs)).unwrap()
}

fn encloses(b: &mertens_core::quadrature::MellinBracket, c: &SpecialValue) -> bool {
    b.lo <= c.value + c.abs_error && c.value - c.abs_error <= b.hi
}

/// The engine display and the printed value agree to ±1 in the last printed digit.
fn within_last_digit(got: &str, want: &str) -> bool {
    let parse = |s: &str| -> Option<(f64, f64)> {
        let (inv, body) = match s.strip_prefix("1/") {
            Some(b) => (true, b),
            None => (false, s),
        };
        let v: f64 = body.parse().ok()?;
        let mantissa = body.split(['e', 'E']).next()?;
        let exp: i32 = body.split(['e', 'E']).nth(1).map_or(Some(0), |e| e.parse().ok())?;
        let decimals = mantissa.split('.').nth(1).map_or(0, |d| d.len()) as i32;
        let unit = 10f64.powi(exp - decimals);
        Some((if inv { -v } else { v }, unit))
    };
    match (parse(got), parse(want)) {
        (Some((a, _)), Some((b, u))) => (a - b).abs() <= u * (1.0 + 1e-9),
        _ => false,
    }
}

fn criterion_1(t: &Tables) -> Outcome {
    let start = Instant::now();
    let fresh = Tables::sieve(5_000_000, &SieveOptions::default()).unwrap();
    let main = verify(&fresh, &Predicate::m4343(), 2_160_605.0, 5e6, 1);
    let seconds = start.elapsed().as_secs_f64();
    let witness = verify(t, &Predicate::m4343(), 2_160_535.0, 2_160_605.0, 1);
    let mlog = verify(t, &Predicate::mlog(), 97_063.0, 230_000.0, 1);
    let last = mlog.violations.iter().map(|v| v.n).max().unwrap_or(0);
    let from = verify(t, &Predicate::mlog(), (last + 1) as f64, 230_000.0, 1);
    let m4343_ok = main.pass && witness.violation_count >= 1 && seconds < C1_SECONDS;
    let detail = format!(
        "4343|m| ≤ 1 on [2160605, 5e6): {} violations, {:.1}s with sieve; witness below: {} violations; \
         log·|m| ≤ 0.0130073 on [97063, 230000): {} violations, sup {:.10} at n = {}, holds from {} ({})",
        main.violation_count,
        seconds,
        witness.violation_count,
        mlog.violation_count,
        mlog.sup,
        mlog.argmax_n,
        last + 1,
        if from.pass { "verified" } else { "not verified" },
    );
    outcome(m4343_ok && mlog.pass, detail)
}

/// The failing half of criterion 1 is known; anything else about it is a regression.
fn criterion_1_documented(t: &Tables) -> bool {
    let mlog = verify(t, &Predicate::mlog(), 97_063.0, 230_000.0, 1);
    let last = mlog.violations.iter().map(|v| v.n).max();
    let from = verify(t, &Predicate::mlog(), 120_561.0, 230_000.0, 1);
    !mlog.pass && mlog.argmax_n == 119_601 && last == Some(120_560) && from.pass
}

fn criterion_2(t: &Tables) -> Outcome {
    let mu = t.mu();
    let m1637 = mu.mertens(1637);
    let s200 = abs_mertens_prefix_integral(mu, 201).unwrap();
    let s32 = abs_mertens_prefix_integral(mu, 33).unwrap();
    let p = evaluate(t, 8510.0).unwrap();
    let v = 8510.0 * p.m;
    let ok = m1637 == -16 && s200 == 461 && s32 == 59 && v - 8510.0 * p.error_radius > 36.0;
    outcome(ok, format!("M(1637) = {}, Σ|M| to 200 = {}, to 32 = {}, 8510·m(8510) = {:.6}", m1637, s200, s32, v))
}

fn criterion_3(t: &Tables, jobs: usize) -> (VerificationReport, VerificationReport) {
    let a = verify(t, &Predicate::big_m_sqrt(0.5), 201.0, 1e7 + 1.0, jobs);
    let b = verify(t, &Predicate::m_sqrt(0.5), 3.0, 1e7 + 1.0, jobs);
    (a, b)
}

fn criterion_4(t: &Tables, ledger: &Ledger) -> Outcome {
    let l7 = 7f64.ln();
    let want1 = 29.0 / 105.0 * l7 * l7;
    let s = sup_scan(t, Func::M1, Weight::Log2, 1.0, 671.0, &opts(1)).unwrap();
    let at_end = {
        let p = evaluate(t, 671.0).unwrap();
        p.m1.abs() * 671f64.ln().powi(2)
    };
    let ok1 = s.argmax == 7.0 && (s.sup - want1).abs() < M1_SUP_TOL && at_end < s.sup;
    let l2 = 2f64.ln();
    let want2 = 2.0 * (2.0 - l2).powi(3) / 27.0;
    let xstar = ((4.0 - 2.0 * l2) / 3.0).exp();
    let c = sup_scan(t, Func::MCheck, Weight::Log2, 1.0, 3.0, &opts(1)).unwrap();
    let tail: &BoundForm = ledger.get("mc-log2").unwrap();
    let ok2 = (c.sup - want2).abs() < SUP_TOL
        && (c.argmax - xstar).abs() < SUP_TOL
        && tail.rank.value() <= 3.0
        && tail.j == 2.0
        && tail.a < c.sup;
    outcome(
        ok1 && ok2,
        format!(
            "sup m₁log² on [1,671] = {:.12} at x = {}; sup log²|m̌−1| on [1,3) = {:.12} at {:.12}, then {}/log²x from {}",
            s.sup,
            s.argmax,
            c.sup,
            c.argmax,
            tail.a_display(),
            tail.rank.value()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut widest = 0.0f64;
    let mut notes = Vec::new();
    for s in [-0.5, 0.0, 0.5, 1.0, 2.0] {
        let b = mellin_numeric(&WeightSpec::g1(), s, MELLIN_X, &TailEnvelope::Periodic).unwrap();
        let c = mellin_g1_closed(s).unwrap();
        ok &= encloses(&b, &c) && b.width() < MELLIN_WIDTH;
        widest = widest.max(b.width());
    }
    for s in [0.0, 0.5, 1.0] {
        let b = mellin_numeric(&WeightSpec::h1(), s, MELLIN_X, &TailEnvelope::Periodic).unwrap();
        let c = mellin_h1_closed(s).unwrap();
        ok &= encloses(&b, &c) && b.width() < MELLIN_WIDTH;
        widest = widest.max(b.width());
    }
    let g = mellin_g1_closed(1.0).unwrap().value;
    let h0 = mellin_h1_closed(0.0).unwrap().value;
    let hb = mellin_h1_closed(0.5).unwrap().value;
    // mpmath, 30 digits; printed as 0.1727, 0.4399... and 0.2939...
    let frozen = [(g, 0.172_784_335_098_467_1), (h0, 0.439_900_711_368_432_3), (hb, 0.293_935_050_025_625_6)];
    ok &= frozen.iter().all(|&(v, w)| (v - w).abs() < 1e-12);
    ok &= (g * 1e4).trunc() == 1727.0 && (h0 * 1e4).trunc() == 4399.0 && (hb * 1e4).trunc() == 2939.0;
    notes.push(format!("G₁(1) = {:.10}, H₁(0) = {:.10}, b = {:.10}", g, h0, hb));
    outcome(ok, format!("8 brackets at X = 1e5 enclose closed forms, widest {:.2e}; {}", widest, notes.join(", ")))
}

fn criterion_6() -> Outcome {
    let table = [
        (0.5, 8.26, 0.01),
        (0.1, 0.0032, 1e-4),
        (0.05, 0.00114, 1e-5),
        (0.01, 0.000479, 1e-6),
        (0.001, 0.000389, 1e-6),
    ];
    let mut ok = true;
    let mut got = Vec::new();
    for (d, want, tol) in table {
        let v = h2_integral_bound(d).unwrap();
        ok &= (v - want).abs() <= tol;
        got.push(format!("{}→{:.4e}", d, v));
    }
    let lim = h2_integral_bound(1e-12).unwrap();
    ok &= (lim - 0.000378).abs() < 1e-6;
    let a = 1.0 / h2_integral_bound(1.0 / (8.2e25f64).ln()).unwrap();
    let b = 1.0 / h2_integral_bound(2.0 / 18900.0).unwrap();
    // four significant digits
    ok &= (a - 1796.57).abs() < 0.5 && (b - 2633.6).abs() < 0.5;
    got.push(format!("0→{:.4e}", lim));
    outcome(ok, format!("C_δ: {}; factors 1/{:.2}, 1/{:.1}", got.join(" "), a, b))
}

fn criterion_7(t: &Tables) -> Outcome {
    let mut worst = [0.0f64; 5];
    let mut ok = true;
    for x in sample_points(50, 1.0, 1e5) {
        let rs = [
            residual_thm1_g(t, x, &WeightSpec::g1()).unwrap(),
            residual_thm1_h(t, x, &WeightSpec::h1()).unwrap(),
            residual_bal2(t, x).unwrap(),
            residual_mchliss(t, x, &WeightSpec::g1()).unwrap(),
        ];
        for (w, r) in worst.iter_mut().zip(&rs) {
            *w = w.max(r.residual.abs());
            ok &= r.residual.abs() < IDENTITY_TOL;
        }
    }
    let w = WeightSpec::g1();
    for x in [2.0f64, 7.0, 50.0, 1000.0] {
        let bps: Vec<f64> = (2..x.ceil() as u32).map(f64::from).collect();
        let v = integrate_piecewise(|u| w.eval(u).unwrap(), 1.0, x, &bps, 1e-12).unwrap();
        let e = (v - epsilon1(x).unwrap()).abs();
        worst[4] = worst[4].max(e);
        ok &= e < EPS1_TOL;
    }
    outcome(
        ok,
        format!(
            "max residuals thm1-g {:.1e}, thm1-h {:.1e}, bal2 {:.1e}, mchliss {:.1e}; ε₁ {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn criterion_8() -> Outcome {
    let phi = 0.618_033_988_749_894_9;
    let hi = 1e5f64;
    let (g, h) = (g1(), h1());
    let mut bad = 0u64;
    let mut worst_em = 0.0f64;
    for i in 1..=100_000u32 {
        let t = ((i as f64 * phi).fract() * hi.ln()).exp();
        let gv = eval_g(&g, t).unwrap();
        let hv = eval_h(&h, t).unwrap();
        let (approx, err) = em_h1_envelope(t).unwrap();
        if !(gv >= -ENVELOPE_SLACK && gv <= 1.0 / (t * t) + ENVELOPE_SLACK) || !(hv >= 0.0 && hv <= 2.1 / t) {
            bad += 1;
        }
        let r = (hv - approx).abs() / err;
        worst_em = worst_em.max(r);
        if r > 1.0 {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("10⁵ samples: {} envelope failures, max |H₁ − EM|/bound = {:.4}", bad, worst_em))
}

fn criterion_9(ledger: &Ledger) -> Outcome {
    let chains: [(&str, &[(&str, &str)]); 4] = [
        (
            "const",
            &[
                ("m1-25146", "1/25146"),
                ("m-3704", "1/3704"),
                ("m-4342-high", "1/4342.67"),
                ("m1-11470909", "1/11470909"),
                ("m-4343", "1/4343"),
            ],
        ),
        (
            "log",
            &[
                ("m1-log-0023", "0.0023"),
                ("m1-log-8517", "8.517e-6"),
                ("m1-log-7265", "7.265e-6"),
                ("m-log", "0.0130073"),
            ],
        ),
        (
            "log2",
            &[
                ("m1-log2-6424", "64.24"),
                ("m-log2-42694", "426.94"),
                ("m1-log2-1622", "0.1622"),
                ("m1-log2-1378", "0.1378"),
                ("m-log2", "362.84"),
            ],
        ),
        ("mcheck", &[("mc-const", "1/9780919"), ("mc-log", "8.55e-6"), ("mc-log2", "0.162")]),
    ];
    let mut ok = true;
    let mut off = Vec::new();
    for (_, entries) in chains {
        for &(id, want) in entries {
            let got = ledger.get(id).ok().map(|f| f.a_display()).unwrap_or_default();
            if got != want {
                if within_last_digit(&got, want) {
                    off.push(format!("{} = {} (printed {})", id, got, want));
                } else {
                    ok = false;
                    off.push(format!("{} = {} ≠ {}", id, got, want));
                }
            }
        }
    }
    let p = |id: &str, k: &str| {
        ledger.get(id).ok().and_then(|f| f.provenance.value(k)).map(|v| v.value()).unwrap_or(f64::NAN)
    };
    let thresholds = [
        (p("m1-8119793", "threshold:m1-sqrt-0129"), (0.129f64 * 8119793.0).powi(2), 1.1e12),
        (p("m-4343-low", "threshold:m-sqrt-05"), (0.5f64 * 4343.0).powi(2), 4.72e6),
        (p("m-3704", "threshold:m-sqrt-05"), (0.5f64 * 3704.0).powi(2), 3.5e6),
        (p("mc-const", "threshold:mc-sqrt-016"), (0.16f64 * 9780918.0).powi(2), 2.5e12),
    ];
    for (got, square, rank) in thresholds {
        ok &= (got - square).abs() <= 1e-9 * square && got < rank;
    }
    let detail = if off.is_empty() {
        "all constants at printed precision; thresholds match".to_string()
    } else {
        format!("thresholds match; last-digit differences: {}", off.join(", "))
    };
    outcome(ok, detail)
}

fn criterion_10(t: &Tables) -> Outcome {
    let r = ratio_theorem_c(t, 94.0, 1e6 + 1.0).unwrap();
    let below = ratio_theorem_c(t, 1.0, 94.0).unwrap();
    let d = theorem_d_arithmetic(1.837625).unwrap();
    let ok = r.pass && below.violation_count >= 1 && d > 1.42018 && 1.42018 > 2f64.sqrt();
    let witness = below.violations.last().map_or(f64::NAN, |v| v.x);
    outcome(
        ok,
        format!(
            "ratio in [{:.6}, {:.6}] on [94, 1e6]; {} violations below 94 (last at x = {}); 1.837625/(1+b) = {:.6}",
            r.min_ratio, r.max_ratio, below.violation_count, witness, d
        ),
    )
}

fn criterion_11(t: &Tables) -> Outcome {
    let run = |jobs: usize| {
        (
            verify(t, &Predicate::m4343(), 2_160_605.0, 5e6, jobs),
            verify(t, &Predicate::m4343(), 2_160_535.0, 2_160_605.0, jobs),
            verify(t, &Predicate::mlog(), 97_063.0, 230_000.0, jobs),
            criterion_3(t, jobs),
        )
    };
    let one = run(1);
    let same = [4, 16].iter().all(|&j| run(j) == one);
    let sieved = [4usize, 16].iter().all(|&j| {
        Tables::sieve(1_000_000, &SieveOptions { jobs: Some(j), ..SieveOptions::default() }).unwrap().mu()
            == &t.mu().truncated(1_000_000).unwrap()
    });
    outcome(same && sieved, "reports for criteria 1 and 3 identical with 1, 4, 16 workers; sieve identical")
}

fn main() {
    let tables = Arc::new(Tables::sieve(LIMIT, &SieveOptions::default()).unwrap());
    let t = tables.as_ref();
    let mut ledger = Ledger::new();
    let mut ctx = Context::with_tables(tables.clone());
    run_plan(&Plan::master(), &mut ledger, &mut ctx).unwrap();

    let c3 = {
        let (a, b) = criterion_3(t, 1);
        outcome(
            a.pass && b.pass,
            format!(
                "|M| ≤ 0.5√x on [201, 1e7]: {} violations (max ratio {:.6}); √x|m| ≤ 0.5 on [3, 1e7]: {} violations (max ratio {:.6})",
                a.violation_count, a.max_ratio, b.violation_count, b.max_ratio
            ),
        )
    };
    let results = [
        criterion_1(t),
        criterion_2(t),
        c3,
        criterion_4(t, &ledger),
        criterion_5(),
        criterion_6(),
        criterion_7(t),
        criterion_8(),
        criterion_9(&ledger),
        criterion_10(t),
        criterion_11(t),
    ];
    let mut unexpected = Vec::new();
    for (i, r) in results.iter().enumerate() {
        let n = i + 1;
        println!("criterion {:>2}: {} {}", n, if r.pass { "PASS" } else { "FAIL" }, r.detail);
        if !r.pass && !(n == 1 && criterion_1_documented(t)) {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {:?}", unexpected);
        std::process::exit(1);
    }
}
