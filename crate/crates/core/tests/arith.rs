use mertens_core::arith::*;
use mertens_core::Error;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use proptest::prelude::*;

fn mu_by_factorization(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[test]
fn small_limits() {
    let t = sieve_mu(1).unwrap();
    assert_eq!((t.mu(1), t.mertens(1)), (1, 1));
    assert_eq!(sieve_mu(10).unwrap().mertens(10), -1);
    assert_eq!(sieve_mu(1637).unwrap().mertens(1637), -16);
    assert!(matches!(sieve_mu(0), Err(Error::InvalidArgument(_))));
}

#[test]
fn table_invariants() {
    let t = sieve_mu(1_000_000).unwrap();
    assert_eq!(t.mu(1), 1);
    assert_eq!(t.mertens(1), 1);
    for n in 2..=t.limit() {
        assert!(t.mu(n).abs() <= 1);
        assert_eq!(t.mertens(n) - t.mertens(n - 1), t.mu(n) as i64);
    }
    for n in 1..=10_000 {
        assert_eq!(t.mu(n), mu_by_factorization(n), "n = {}", n);
    }
}

#[test]
fn abs_integrals() {
    let t = sieve_mu(1000).unwrap();
    assert_eq!(abs_mertens_prefix_integral(&t, 201).unwrap(), 461);
    assert_eq!(abs_mertens_prefix_integral(&t, 33).unwrap(), 59);
    assert_eq!(abs_mertens_prefix_integral(&t, 2).unwrap(), 1);
    assert!(abs_mertens_prefix_integral(&t, 1).is_err());
    assert!(abs_mertens_prefix_integral(&t, 1001).is_err());
}

#[test]
fn block_size_does_not_change_table() {
    let a = sieve_mu_with(3_000_000, &SieveOptions { block_size: 1 << 16, jobs: Some(4) }).unwrap();
    let b = sieve_mu_with(3_000_000, &SieveOptions { block_size: 1 << 20, jobs: Some(1) }).unwrap();
    assert!(a == b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn sieve_agrees_with_factorization(limit in 1u64..3000, block in 1usize..700, jobs in 1usize..5) {
        let t = sieve_mu_with(limit, &SieveOptions { block_size: block, jobs: Some(jobs) }).unwrap();
        let mut acc = 0i64;
        for n in 1..=limit {
            prop_assert_eq!(t.mu(n), mu_by_factorization(n));
            acc += t.mu(n) as i64;
            prop_assert_eq!(t.mertens(n), acc);
        }
    }
}

/// |a/d − v| as f64, using integer arithmetic only.
fn dyadic_distance(a: &BigInt, d: &BigInt, v: f64) -> f64 {
    let (mant, exp, sign) = num::Float::integer_decode(v);
    let mut lhs = a.clone();
    let mut rhs = BigInt::from(mant) * d * BigInt::from(sign);
    if exp >= 0 {
        rhs <<= exp as usize;
    } else {
        lhs <<= (-exp) as usize;
    }
    let den = if exp >= 0 { d.clone() } else { d.clone() << ((-exp) as usize) };
    let diff = (lhs - rhs).abs();
    let shift = den.bits().saturating_sub(200) as usize;
    (diff >> shift).to_f64().unwrap() / (den >> shift).to_f64().unwrap()
}

#[test]
fn m_series_error_radius_against_exact_oracle() {
    let n_max = 10_000u64;
    let t = sieve_mu(n_max).unwrap();
    let s = m_series(&t);
    // common denominator D = lcm(1..n_max); A_n = D·m(n)
    let mut d = BigInt::one();
    for k in 1..=n_max {
        let kk = BigInt::from(k);
        let g = num::Integer::gcd(&d, &kk);
        d = d * &kk / g;
    }
    let mut a = BigInt::zero();
    let mut prev = 0.0;
    for n in 1..=n_max {
        let u = t.mu(n);
        if u != 0 {
            let q = &d / BigInt::from(n);
            if u > 0 {
                a += q;
            } else {
                a -= q;
            }
        }
        let err = dyadic_distance(&a, &d, s.value(n));
        let r = s.error_radius(n);
        assert!(err <= r, "n = {}: error {:e} > radius {:e}", n, err, r);
        assert!(r >= prev);
        prev = r;
    }
}

#[test]
fn series_examples() {
    let t = sieve_mu(10_000).unwrap();
    let m = m_series(&t);
    assert_eq!(m.value(1), 1.0);
    assert!((m.value(3) - 1.0 / 6.0).abs() <= m.error_radius(3) + f64::EPSILON / 12.0);
    assert!(8510.0 * m.value(8510) > 36.0);
    let l = ell_series(&t);
    assert_eq!(l.value(1), 0.0);
    assert!((l.value(2) + 2f64.ln() / 2.0).abs() <= l.error_radius(2) + 1e-17);
    assert!(m.error_radius(10_000) < 1e-12);
}

#[test]
fn radius_stays_below_1e12_at_1e7() {
    let t = sieve_mu(10_000_000).unwrap();
    let m = m_series(&t);
    assert!(m.error_radius(10_000_000) <= 1e-12);
    let l = ell_series(&t);
    assert!(l.error_radius(10_000_000) <= 1e-12);
}

#[test]
fn evaluation_points() {
    let tables = Tables::new(sieve_mu(2000).unwrap());
    let p = evaluate(&tables, 1.0).unwrap();
    assert_eq!((p.m, p.m1, p.m_check), (1.0, 0.0, 0.0));
    let p = evaluate(&tables, 7.0).unwrap();
    let l7 = 7f64.ln();
    assert!((p.m1 * l7 * l7 - 29.0 / 105.0 * l7 * l7).abs() < 1e-14);
    assert!((p.m1 * l7 * l7 - 1.0458136).abs() < 1e-6);
    for x in [2.0, 2.39, 2.5, 2.99] {
        let p = evaluate(&tables, x).unwrap();
        let want = (x.ln() + 2f64.ln()) / 2.0 - 1.0;
        assert!((p.m_check - 1.0 - want).abs() <= p.error_radius, "x = {}", x);
    }
    for x in [1.5, 10.0, 123.4, 1999.9] {
        let p = evaluate(&tables, x).unwrap();
        assert!((p.m1 - (p.m - p.m_over_x)).abs() <= f64::EPSILON * p.m.abs().max(1.0));
    }
    assert!(matches!(evaluate(&tables, 2001.0), Err(Error::Range(_))));
    assert!(matches!(evaluate(&tables, 0.5), Err(Error::Range(_))));
}

#[test]
fn abel_identity_exact_at_100() {
    // m₁(100) and Σ M(n)(1/n − 1/(n+1)) agree as rationals
    let t = sieve_mu(100).unwrap();
    let mut m = BigRational::zero();
    for k in 1..=100u64 {
        m += BigRational::new(BigInt::from(t.mu(k)), BigInt::from(k));
    }
    let m1 = m - BigRational::new(BigInt::from(t.mertens(100)), BigInt::from(100));
    let mut i = BigRational::zero();
    for n in 1..100u64 {
        i += BigRational::new(BigInt::from(t.mertens(n)), BigInt::from(n * (n + 1)));
    }
    assert_eq!(m1, i);
}

#[test]
fn abel_residuals() {
    let tables = Tables::new(sieve_mu(1_000_000).unwrap());
    assert_eq!(abel_residual(&tables, 1.0).unwrap(), 0.0);
    assert!(abel_residual(&tables, 100.0).unwrap().abs() < 1e-12);
    assert!(abel_residual(&tables, 1e6).unwrap().abs() < 1e-10);
    let mut x = 0.5f64;
    for _ in 0..1000 {
        x = (x + 0.618_033_988_749_894_9).fract();
        let xv = 1.0 + x * 99_998.0;
        let r = abel_residual(&tables, xv).unwrap();
        let p = evaluate(&tables, xv).unwrap();
        assert!(r.abs() <= 10.0 * p.error_radius, "x = {}: {:e} vs {:e}", xv, r, p.error_radius);
    }
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let t = sieve_mu(50_000).unwrap();
    let path = save_table(&t, dir.path()).unwrap();
    assert_eq!(path, cache_path(dir.path(), 50_000));
    assert_eq!(load_table(&path).unwrap(), t);
    let head = std::fs::read(&path).unwrap();
    assert!(head.starts_with(b"MOEBIUS-TABLE v1 limit=50000\n"));
    let small = find_cached(dir.path(), 20_000).unwrap().unwrap();
    assert_eq!(small, sieve_mu(20_000).unwrap());
    assert!(find_cached(dir.path(), 60_000).unwrap().is_none());
    let mut bytes = head.clone();
    bytes[40] ^= 1;
    std::fs::write(&path, &bytes).unwrap();
    assert!(matches!(load_table(&path), Err(Error::Cache(_))));
}
