use mertens_core::arith::{evaluate, sieve_mu, Tables};
use mertens_core::identities::{
    bal2_integral, residual_bal2, residual_h1_remainder, residual_mchliss, residual_thm1_g, residual_thm1_h,
    sample_points,
};
use mertens_core::quadrature::{identity_kernel_integral, KernelForm};
use mertens_core::weights::{CoeffWeight, WeightSpec};

fn tables(limit: u64) -> Tables {
    Tables::new(sieve_mu(limit).unwrap())
}

#[test]
fn thm1_g_examples() {
    let t = tables(2000);
    let r = residual_thm1_g(&t, 1.0, &WeightSpec::g1()).unwrap();
    assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    for x in [10.0, 100.0, 1234.5] {
        let r = residual_thm1_g(&t, x, &WeightSpec::g1()).unwrap();
        assert!(r.pass && r.residual.abs() < 1e-8, "{:?}", r);
    }
    // m₁(7) = m(7) − M(7)/7 with M(7) = −2
    let p = evaluate(&t, 7.0).unwrap();
    let m7 = 1.0 - 1.0 / 2.0 - 1.0 / 3.0 - 1.0 / 5.0 + 1.0 / 6.0 - 1.0 / 7.0;
    assert!((p.m1 - (m7 - (-2.0) / 7.0)).abs() < 1e-15);
    assert!((p.m1 - 29.0 / 105.0).abs() < 1e-15);
}

#[test]
fn thm1_h_examples() {
    let t = tables(1000);
    let r = residual_thm1_h(&t, 1.0, &WeightSpec::h1()).unwrap();
    assert!(r.residual.abs() < 1e-15);
    for x in [50.0, 500.0, 777.7] {
        let r = residual_thm1_h(&t, x, &WeightSpec::h1()).unwrap();
        assert!(r.pass && r.residual.abs() < 1e-8, "{:?}", r);
    }
}

#[test]
fn thm1_h_with_coefficient_weight() {
    let t = tables(1000);
    // h = 1_[0,1] − 2·1_[0,1/2]: Σ c_r/r = 1 − 1 = 0
    let w = WeightSpec::Coefficients(CoeffWeight::parse("1 1\n2 -2\n").unwrap());
    for x in [1.0, 1.5, 3.0, 40.25, 999.0] {
        let r = residual_thm1_h(&t, x, &w).unwrap();
        assert!(r.pass && r.residual.abs() < 1e-9, "{:?}", r);
    }
}

#[test]
fn bal2_examples() {
    let t = tables(10_000);
    let r = residual_bal2(&t, 1.0).unwrap();
    assert!(r.rhs.abs() < 1e-15);
    for x in [20.0, 300.0] {
        let r = residual_bal2(&t, x).unwrap();
        assert!(r.pass && r.residual.abs() < 1e-8, "{:?}", r);
    }
    let r = residual_bal2(&t, 1e4).unwrap();
    assert!(r.pass && r.residual.abs() < 1e-7, "{:?}", r);
}

#[test]
fn mchliss_examples() {
    let t = tables(1000);
    let r = residual_mchliss(&t, 1.0, &WeightSpec::g1()).unwrap();
    assert_eq!(r.lhs, -1.0);
    assert!(r.residual.abs() < 1e-10, "{:?}", r);
    for x in [2.39, 10.0, 777.0] {
        let r = residual_mchliss(&t, x, &WeightSpec::g1()).unwrap();
        assert!(r.pass && r.residual.abs() < 1e-8, "{:?}", r);
    }
    // on [2, 3): m̌(x) − 1 = (log x + log 2)/2 − 1
    let x = 2.39f64;
    let r = residual_mchliss(&t, x, &WeightSpec::g1()).unwrap();
    let p = evaluate(&t, x).unwrap();
    assert!((r.lhs + p.m1 - ((x.ln() + 2f64.ln()) / 2.0 - 1.0)).abs() < 1e-14);
}

#[test]
fn h1_remainder() {
    let r = residual_h1_remainder(1.0).unwrap();
    assert!(r.integral.abs() < 1e-15);
    let r = residual_h1_remainder(2.0).unwrap();
    // ∫₀^a h₁ = −2a + (8/3)a² + (2/3)a³ − (4/3)a⁴
    let a = 0.5f64;
    let exact = -2.0 * a + 8.0 / 3.0 * a * a + 2.0 / 3.0 * a.powi(3) - 4.0 / 3.0 * a.powi(4);
    assert!((r.integral - exact).abs() < 1e-15);
    let r = residual_h1_remainder(1e8).unwrap();
    assert!((r.scaled - 2.0).abs() < 1e-6);
    for x in sample_points(200, 1.0, 1e8).into_iter().chain([1.0, 1.5, 2.0]) {
        let r = residual_h1_remainder(x).unwrap();
        assert!(r.within_bound && r.nonnegative && r.increasing, "{:?}", r);
    }
    let mut xs = sample_points(200, 1.0, 1e8);
    xs.sort_by(f64::total_cmp);
    let vals: Vec<f64> = xs.iter().map(|&x| residual_h1_remainder(x).unwrap().scaled).collect();
    assert!(vals.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn thm1_g_and_bal2_agree() {
    let t = tables(100_000);
    for x in sample_points(10, 2.0, 1e5) {
        let k = identity_kernel_integral(&t, x, &WeightSpec::g1(), KernelForm::BigM).unwrap();
        let (b, _, _) = bal2_integral(&t, x).unwrap();
        assert!((k.value - b).abs() < 1e-9, "x = {}: {} vs {}", x, k.value, b);
    }
}

#[test]
fn sample_points_are_log_uniform() {
    let xs = sample_points(1000, 1.0, 1e5);
    assert!(xs.iter().all(|&x| (1.0..=1e5).contains(&x)));
    let below = xs.iter().filter(|&&x| x < 316.2).count();
    assert!((450..=550).contains(&below));
}
