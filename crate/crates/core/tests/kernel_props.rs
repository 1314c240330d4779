use arctic_core::kernel::{
    ballot, binomial, catalan, int_rational, inverse_binomial_sum, ln_abs_integer, log_binomial, trinomial,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Coefficients of a polynomial or truncated series, lowest degree first.
type Series = Vec<BigInt>;

fn mul_trunc(a: &Series, b: &Series, len: usize) -> Series {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn pow_trunc(base: &Series, e: usize, len: usize) -> Series {
    let mut acc = vec![BigInt::zero(); len];
    acc[0] = BigInt::one();
    for _ in 0..e {
        acc = mul_trunc(&acc, base, len);
    }
    acc
}

#[test]
fn binomial_as_four_coefficients() {
    let one_plus_x: Series = vec![BigInt::one(), BigInt::one()];
    for n in 0..=20usize {
        let len = n + 2;
        let poly = pow_trunc(&one_plus_x, n, len);
        // 1/(1-x) = 1 + x + x² + ...
        let geometric: Series = vec![BigInt::one(); len];
        for k in 0..=n {
            let want = binomial(n as i64, k as i64);
            let a = pow_trunc(&geometric, k + 1, len);
            let b = pow_trunc(&geometric, n - k + 1, len);
            assert_eq!(poly[k], want);
            assert_eq!(poly[n - k], want);
            assert_eq!(a[n - k], want, "n={n} k={k}");
            assert_eq!(b[k], want, "n={n} k={k}");
        }
    }
}

#[test]
fn binomial_as_iterated_derivative() {
    // (1/k!) d^k/dt^k t^n at t = 1 is the falling factorial n(n-1)...(n-k+1)/k!.
    for n in 0..=20i64 {
        for k in 0..=n {
            let ff: BigInt = (0..k).map(|i| BigInt::from(n - i)).product();
            let kf: BigInt = (1..=k).map(BigInt::from).product();
            assert_eq!(ff / kf, binomial(n, k));
        }
    }
}

#[test]
fn inverse_binomial_identity() {
    for n in 0..=20 {
        for a in 1..=6 {
            let s = inverse_binomial_sum(n, a).unwrap();
            assert_eq!(s * int_rational(binomial(n + a, a)), int_rational(1), "n={n} a={a}");
        }
    }
}

#[test]
fn catalan_is_ballot_at_height_zero() {
    for m in 0..=30 {
        assert_eq!(catalan(m).unwrap(), ballot(2 * m, 0), "m={m}");
    }
}

#[test]
fn trinomial_factorizes() {
    for m in 0..=20i64 {
        for p in 0..=m {
            for q in 0..=m - p {
                let r = m - p - q;
                assert_eq!(trinomial(m, p, q, r).unwrap(), binomial(m, p) * binomial(m - p, q));
            }
        }
    }
}

fn range_product(lo: u64, hi: u64) -> BigInt {
    if lo > hi {
        return BigInt::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).map(BigInt::from).product();
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

fn exact_ln_binomial(n: u64, k: u64) -> f64 {
    let m = k.min(n - k);
    ln_abs_integer(&range_product(n - m + 1, n)) - ln_abs_integer(&range_product(1, m))
}

fn n_and_k() -> impl Strategy<Value = (u64, u64)> {
    (0.0f64..6.0).prop_flat_map(|e| {
        let n = 10f64.powf(e).round().max(1.0) as u64;
        (Just(n), 0..=n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn log_binomial_matches_exact((n, k) in n_and_k()) {
        let got = log_binomial(n as f64, k as f64).unwrap().ln_or_neg_inf();
        let want = exact_ln_binomial(n, k);
        let rel = (got - want).abs() / want.abs().max(1.0);
        prop_assert!(rel <= 1e-9, "n={} k={} got={} want={}", n, k, got, want);
    }

    #[test]
    fn pascal_rule(n in 1i64..200, k in 0i64..200) {
        prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
}
