use std::sync::OnceLock;

use mertens_core::arith::{evaluate, sieve_mu, Tables};
use mertens_core::verify::{
    ratio_theorem_c, sup_scan, theorem_d_arithmetic, verify_range, Func, Predicate, VerifyOptions, Weight,
};
use proptest::prelude::*;

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| Tables::new(sieve_mu(5_000_000).unwrap()))
}

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

#[test]
fn m4343_from_optimal_rank() {
    let r = verify_range(tables(), &Predicate::m4343(), 2_160_605.0, 5e6, &opts()).unwrap();
    assert!(r.pass, "{:?}", r.violations.first());
    let r = verify_range(tables(), &Predicate::m4343(), 2_160_535.0, 2_160_605.0, &opts()).unwrap();
    assert!(r.violation_count >= 1);
    assert!(!r.pass);
}

#[test]
fn mlog_window() {
    // log x·|m(x)| ≤ 0.0130073 fails inside [97063, 230000): largest excess at n = 119601
    let r = verify_range(tables(), &Predicate::mlog(), 97_063.0, 230_000.0, &opts()).unwrap();
    assert!(!r.pass);
    assert_eq!(r.argmax_n, 119_601);
    assert!((r.sup - 0.013_193_131_762_998).abs() < 1e-12);
    let last = r.violations.iter().map(|v| v.n).max().unwrap();
    assert_eq!(last, 120_560);
    let r = verify_range(tables(), &Predicate::mlog(), 120_561.0, 230_000.0, &opts()).unwrap();
    assert!(r.pass);
}

#[test]
fn m1_log2_sup_at_seven() {
    let s = sup_scan(tables(), Func::M1, Weight::Log2, 1.0, 671.0, &opts()).unwrap();
    let l7 = 7f64.ln();
    assert_eq!(s.argmax, 7.0);
    assert!((s.sup - 29.0 / 105.0 * l7 * l7).abs() < 1e-14);
}

#[test]
fn mcheck_log2_sup_on_first_pieces() {
    let s = sup_scan(tables(), Func::MCheck, Weight::Log2, 1.0, 3.0, &opts()).unwrap();
    let l2 = 2f64.ln();
    assert!((s.sup - 2.0 * (2.0 - l2).powi(3) / 27.0).abs() < 1e-9);
    assert!((s.argmax - ((4.0 - 2.0 * l2) / 3.0).exp()).abs() < 1e-9);
}

#[test]
fn big_m_sqrt_sup() {
    let s = sup_scan(tables(), Func::BigM, Weight::InvSqrt, 33.0, 5e6, &opts()).unwrap();
    assert!(s.sup <= 0.571);
    let r = verify_range(tables(), &Predicate::big_m_sqrt(0.5), 201.0, 5e6, &opts()).unwrap();
    assert!(r.pass);
    let r = verify_range(tables(), &Predicate::m_sqrt(0.5), 3.0, 5e6, &opts()).unwrap();
    assert!(r.pass);
}

#[test]
fn parallel_matches_single_thread() {
    for p in [Predicate::m4343(), Predicate::m_sqrt(0.5), Predicate::new(Func::M1, Weight::Log2, 0.138)] {
        let one = verify_range(tables(), &p, 3.0, 1e6, &VerifyOptions { jobs: Some(1) }).unwrap();
        let many = verify_range(tables(), &p, 3.0, 1e6, &VerifyOptions { jobs: Some(7) }).unwrap();
        assert_eq!(one, many);
    }
}

#[test]
fn range_errors() {
    let t = Tables::new(sieve_mu(100).unwrap());
    assert!(verify_range(&t, &Predicate::m4343(), 10.0, 200.0, &opts()).is_err());
    assert!(verify_range(&t, &Predicate::m4343(), 10.0, 5.0, &opts()).is_err());
}

#[test]
fn escalation_decides_exact_ties() {
    // |m(3)| = 1/6 exactly: 6·|m| ≤ 1 holds at n = 3 and needs the exact re-check
    let p = Predicate { func: Func::SmallM, weight: Weight::One, scale: 6.0, bound: 1.0 };
    let r = verify_range(tables(), &p, 3.0, 4.0, &opts()).unwrap();
    assert!(r.pass, "{:?}", r);
    assert_eq!(r.indeterminate.len(), 1);
    assert_eq!(r.indeterminate[0].method, "exact");
}

#[test]
fn theorem_c_ratio() {
    let r = ratio_theorem_c(tables(), 94.0, 1e6).unwrap();
    assert!(r.pass, "{:?}", r.violations.first());
    assert!(ratio_theorem_c(tables(), 94.0, 8510.0).unwrap().pass);
    let r = ratio_theorem_c(tables(), 2.0, 93.0).unwrap();
    assert!(r.violation_count >= 1);
    let big = tables().mu().mertens(8510);
    assert!(8510.0 * evaluate(tables(), 8510.0).unwrap().m > 36.0);
    assert!(big.abs() < 100);
}

#[test]
fn theorem_d() {
    let v = theorem_d_arithmetic(1.837625).unwrap();
    assert!(v > 1.42018 && 1.42018 > 2f64.sqrt());
    let b = theorem_d_arithmetic(1.0).unwrap();
    assert!((b - 0.7728).abs() < 1e-4);
    assert!((1.0 / b) * 2f64.sqrt() < 1.837625);
}

#[test]
fn predicate_names() {
    for s in ["m4343", "mlog", "Msqrt05", "msqrt05", "Msqrt0571", "m1log2", "mchecklog2", "m1:log2:0.138", "m:1:1/4343"]
    {
        let p = Predicate::parse(s).unwrap();
        assert_eq!(Predicate::parse(&p.to_string()).unwrap(), p, "{}", s);
    }
    assert_eq!(Predicate::parse("m:1:1/4343").unwrap(), Predicate::m4343());
    assert!(Predicate::parse("q:1:2").is_err());
    assert!(Predicate::parse("m:cube:2").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sup_dominates_samples(lo in 1.0f64..5000.0, len in 1.0f64..300.0, f in 0usize..4, w in 0usize..5) {
        let func = [Func::BigM, Func::SmallM, Func::M1, Func::MCheck][f];
        let weight = [Weight::One, Weight::Log, Weight::Log2, Weight::Sqrt, Weight::InvSqrt][w];
        let hi = lo + len;
        let s = sup_scan(tables(), func, weight, lo, hi, &opts()).unwrap();
        for i in 0..200 {
            let x = lo + (hi - lo) * i as f64 / 200.0;
            let p = evaluate(tables(), x).unwrap();
            let v = match func {
                Func::BigM => p.m_over_x * x,
                Func::SmallM => p.m,
                Func::M1 => p.m1,
                Func::MCheck => p.m_check - 1.0,
            };
            let wv = weight.eval(x) * v.abs();
            prop_assert!(wv <= s.sup + s.radius + 1e-12 * wv, "x={} {} > {}", x, wv, s.sup);
        }
    }
}

#[test]
fn exact_ties_for_big_m() {
    // ties |M(x)| = √x at x = 1 and |M(n)| = 1 below 5 are decided exactly
    let r = verify_range(tables(), &Predicate::big_m_sqrt(1.0), 1.0, 100.0, &opts()).unwrap();
    assert!(r.pass && r.unresolved == 0);
    assert_eq!(r.indeterminate[0].method, "exact");
    let r = verify_range(tables(), &Predicate::new(Func::BigM, Weight::One, 1.0), 1.0, 5.0, &opts()).unwrap();
    assert!(r.pass);
    let r = verify_range(tables(), &Predicate::big_m_sqrt(0.99), 1.0, 2.0, &opts()).unwrap();
    assert_eq!(r.violation_count, 1);
}
