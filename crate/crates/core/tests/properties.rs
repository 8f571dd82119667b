//! Cross-module randomized invariants and independent-oracle checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sqsf::arithfun::{self, count_roots_mod_p2, factorize, g_at_prime, g_value, gcd};
use sqsf::asymptotic::{
    self, brute_tail_sum_2omega, casework_verify, explicit_error_budget, main_term,
    singular_product, tail_sum_2omega,
};
use sqsf::divisor_bound::{self, log_c_exact, partial_summation, tau_sieve, Integration};
use sqsf::kahan::KahanSum;
use sqsf::primes::{build_prime_table, is_prime_u64, pi_upper_bound, PrimeTable};
use sqsf::representation::{
    interval_solution_count, r_count_with, remainder_r, sieve_squarefree, verify_positivity,
};

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5153_4653 ^ stream)
}

fn table_1e6() -> PrimeTable {
    build_prime_table(1_000_000).unwrap()
}

// ---- primes ----

#[test]
fn mertens_bounds_on_log_grid() {
    let t = table_1e6();
    let limit = t.limit() as f64;
    let loglog2 = 2f64.ln().ln();
    let mut x = 2.0f64;
    while x <= limit {
        let s = t.sum_reciprocal_primes(x).unwrap();
        assert!(s <= x.ln().ln() + 3.0 - loglog2, "reciprocal sum bound at x = {x}");
        let s = t.sum_logp_over_p(x).unwrap();
        assert!(s <= x.ln() + 4f64.ln(), "log p / p bound at x = {x}");
        if x >= 17.0 {
            let pi = t.prime_count(x).unwrap() as f64;
            assert!(pi < pi_upper_bound(x).unwrap(), "pi bound at x = {x}");
        }
        x *= 1.11;
    }
}

#[test]
fn theta_bound_to_1e5() {
    let t = table_1e6();
    let r = t.check_theta_bound(100_000).unwrap();
    assert!(r.passed());
    let w = r.extremal_value("min_slack").unwrap();
    assert_eq!(w.n, 8);
}

#[test]
fn table_counts_agree_with_primality_recheck_on_windows() {
    let t = table_1e6();
    let mut rng = rng(1);
    for _ in 0..1000 {
        let x = rng.gen_range(300u64..=1_000_000);
        let w = 200.min(x - 2);
        let by_table = t.prime_count(x as f64).unwrap() - t.prime_count((x - w) as f64).unwrap();
        let by_test = ((x - w + 1)..=x).filter(|&k| is_prime_u64(k)).count() as u64;
        assert_eq!(by_table, by_test, "pi window at {x}");

        let dt = t.chebyshev_theta(x as f64).unwrap() - t.chebyshev_theta((x - w) as f64).unwrap();
        let direct: KahanSum = ((x - w + 1)..=x)
            .filter(|&k| is_prime_u64(k))
            .map(|k| (k as f64).ln())
            .collect();
        assert!((dt - direct.value()).abs() < 1e-8, "theta window at {x}");
    }
}

// ---- arithfun ----

#[test]
fn g_matches_exhaustive_root_count() {
    let t = table_1e6();
    let primes: Vec<u64> = t.primes().iter().copied().take_while(|&p| p <= 10_000).collect();
    let mut rng = rng(2);
    for i in 0..1000 {
        // log-uniform prime size keeps the exhaustive oracle affordable
        // while still exercising four-digit primes
        let hi = if i % 10 == 0 { primes.len() } else { primes.partition_point(|&p| p <= 1000) };
        let p = primes[rng.gen_range(0..hi)];
        let n = rng.gen_range(1u64..=u64::MAX >> 1);
        assert_eq!(
            g_at_prime(n, p).unwrap(),
            count_roots_mod_p2(n, p).unwrap(),
            "n = {n}, p = {p}"
        );
    }
}

#[test]
fn random_factorizations_reconstruct() {
    let mut rng = rng(3);
    for _ in 0..200 {
        let n: u64 = rng.gen_range(1..=u64::MAX);
        let f = factorize(n).unwrap();
        let mut prod = 1u64;
        for &(p, e) in f.factors() {
            assert!(is_prime_u64(p), "factor {p} of {n} not prime");
            prod = prod.checked_mul(p.checked_pow(e).unwrap()).unwrap();
        }
        assert_eq!(prod, n);
        for w in f.factors().windows(2) {
            assert!(w[0].0 < w[1].0);
        }
    }
}

#[test]
fn multiplicativity_on_coprime_pairs() {
    let mut rng = rng(4);
    for _ in 0..500 {
        let a = rng.gen_range(1u64..=10_000);
        let b = rng.gen_range(1u64..=10_000);
        if gcd(a, b) != 1 {
            continue;
        }
        assert_eq!(arithfun::tau(a * b).unwrap(), arithfun::tau(a).unwrap() * arithfun::tau(b).unwrap());
        assert_eq!(
            arithfun::mobius(a * b).unwrap(),
            arithfun::mobius(a).unwrap() * arithfun::mobius(b).unwrap()
        );
        let n = rng.gen_range(1u64..=1_000_000_000);
        assert_eq!(g_value(n, a * b).unwrap(), g_value(n, a).unwrap() * g_value(n, b).unwrap());
    }
}

#[test]
fn sqfree_split_reconstructs_below_1e5() {
    for n in 1u64..=100_000 {
        let s = arithfun::sqfree_split(n).unwrap();
        assert_eq!(s.root * s.root * s.sqfree, n);
        assert!(arithfun::is_squarefree(s.sqfree));
    }
}

#[test]
fn tau_matches_divisor_enumeration_below_1e4() {
    for n in 1u64..=10_000 {
        let brute = (1..=n).filter(|d| n % d == 0).count() as u64;
        assert_eq!(arithfun::tau(n).unwrap(), brute, "n = {n}");
    }
}

#[test]
fn g_value_never_exceeds_argument() {
    let mut rng = rng(5);
    for _ in 0..300 {
        let n = rng.gen_range(1u64..=1_000_000_000_000);
        let d = rng.gen_range(1u64..=1_000_000);
        assert!(g_value(n, d).unwrap() <= d);
    }
}

// ---- representation ----

#[test]
fn interval_count_equals_g_and_ignores_offset() {
    let mut rng = rng(6);
    let mut cases = 0;
    while cases < 300 {
        let d = rng.gen_range(1u64..=300);
        if !arithfun::is_squarefree(d) {
            continue;
        }
        cases += 1;
        let n = rng.gen_range(1u64..=1_000_000_000);
        let t0 = rng.gen_range(0u64..=1_000_000_000_000);
        let at_zero = interval_solution_count(n, d, 0).unwrap();
        assert_eq!(at_zero, g_value(n, d).unwrap(), "n = {n}, d = {d}");
        assert_eq!(at_zero, interval_solution_count(n, d, t0).unwrap(), "offset {t0}");
        let r = remainder_r(n, d).unwrap();
        assert!(r.abs() <= g_value(n, d).unwrap() as f64 + 1e-9, "remainder at n = {n}, d = {d}");
    }
}

#[test]
fn r_star_below_r_and_primes_have_witnesses() {
    let flags = sieve_squarefree(0, 100_000).unwrap();
    let t = build_prime_table(100_000).unwrap();
    for n in 1u64..=100_000 {
        let c = r_count_with(&flags, n).unwrap();
        assert!(c.r_star <= c.r);
        assert!(c.r <= n.isqrt() + 1);
        if let Some(x) = c.witness {
            assert!(x * x <= n && flags.is_squarefree(n - x * x));
        }
    }
    for &p in t.primes() {
        let c = r_count_with(&flags, p).unwrap();
        assert!(c.r >= 1, "prime {p} has no representation");
        assert!(c.witness.is_some());
    }
}

#[test]
fn segmented_sieve_agrees_with_pointwise_oracle() {
    let mut rng = rng(7);
    let segments = [
        sieve_squarefree(0, 70_000).unwrap(),
        sieve_squarefree(1 << 20, (1 << 20) + 50_000).unwrap(),
        sieve_squarefree(999_950_000, 1_000_000_000).unwrap(),
    ];
    for seg in &segments {
        for _ in 0..3_400 {
            let v = rng.gen_range(seg.lo()..=seg.hi());
            assert_eq!(seg.is_squarefree(v), arithfun::is_squarefree(v), "at {v}");
        }
    }
}

#[test]
fn positivity_campaign_small() {
    let r = verify_positivity(100_000, true).unwrap();
    assert!(r.passed());
    let w = r.extremal_value("max_witness_x").unwrap();
    // the first witness index stays tiny on this range
    assert!(w.value <= 13.0);
}

// ---- asymptotic ----

#[test]
fn singular_product_contains_brute_finite_product() {
    let t = table_1e6();
    let mut rng = rng(8);
    for _ in 0..40 {
        let n = rng.gen_range(1u64..=10_000);
        let enc = singular_product(n, &t, 1_000_000).unwrap();
        let mut brute = 1.0f64;
        for &p in t.primes() {
            let g = g_at_prime(n, p).unwrap() as f64;
            brute *= 1.0 - g / (p as f64 * p as f64);
        }
        assert!(
            enc.contains(brute),
            "n = {n}: brute {brute} outside {enc}"
        );
    }
}

#[test]
fn budget_dominates_observed_error_on_sample() {
    let t = table_1e6();
    let flags = sieve_squarefree(0, 100_000).unwrap();
    let mut rng = rng(9);
    for _ in 0..150 {
        let n = rng.gen_range(8100u64..=100_000);
        let c = r_count_with(&flags, n).unwrap();
        let mt = main_term(n, &t, 2_000).unwrap();
        let budget = explicit_error_budget(n).unwrap();
        let err = (c.r as f64 - mt.mid()).abs();
        assert!(
            err <= budget.total + mt.width(),
            "n = {n}: err {err} over budget {}",
            budget.total
        );
    }
}

#[test]
fn closed_form_dominates_components_under_tau_bound() {
    let delta = 0.25;
    let c_delta = divisor_bound::h_of_delta(delta).unwrap().exp();
    let mut rng = rng(10);
    for _ in 0..200 {
        let n = rng.gen_range(8100u64..=2_000_000);
        let budget = explicit_error_budget(n).unwrap();
        let closed = asymptotic::closed_form_error_bound(n, delta, c_delta).unwrap();
        // tau(n) <= C(delta) n^delta certified separately; under it the
        // component total must not exceed the closed form
        assert!(divisor_bound::tau_bound_check(n, delta).unwrap());
        assert!(budget.total <= closed, "n = {n}: {} > {closed}", budget.total);
    }
}

#[test]
fn singular_product_dominates_closed_form_lower_bound() {
    let t = table_1e6();
    let kappa = singular_product(1, &t, 1_000_000).unwrap();
    let mut rng = rng(13);
    for _ in 0..60 {
        let n = rng.gen_range(16u64..=10_000);
        let enc = singular_product(n, &t, 1_000_000).unwrap();
        let bound = asymptotic::product_lower_bound(
            sqsf::LogMagnitude::from_u64(n).unwrap(),
            kappa.lo(),
        )
        .unwrap();
        assert!(enc.lo() >= bound, "n = {n}: {} < {bound}", enc.lo());
    }
}

#[test]
fn tail_bound_dominates_truncated_sum() {
    for z in [5.0f64, 21.0, 100.0, 1000.0] {
        let brute = brute_tail_sum_2omega(z, 1_000_000).unwrap();
        assert!(brute <= tail_sum_2omega(z), "z = {z}");
    }
}

/// Multiplicative fill of g(n, d) for all d up to the limit, driven by a
/// smallest-prime-factor sieve; complete multiplicativity needs no
/// coprimality so one division step per d suffices.
fn g_vector(n: u64, limit: usize) -> (Vec<f64>, Vec<bool>, Vec<i8>) {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            for m in (i..=limit).step_by(i) {
                if spf[m] == 0 {
                    spf[m] = i as u32;
                }
            }
        }
    }
    let mut g = vec![0f64; limit + 1];
    let mut sqfree = vec![true; limit + 1];
    let mut mu = vec![0i8; limit + 1];
    g[1] = 1.0;
    mu[1] = 1;
    let mut gp_cache: std::collections::HashMap<u32, f64> = std::collections::HashMap::new();
    for d in 2..=limit {
        let p = spf[d];
        let rest = d / p as usize;
        let gp = *gp_cache
            .entry(p)
            .or_insert_with(|| g_at_prime(n, p as u64).unwrap() as f64);
        g[d] = g[rest] * gp;
        sqfree[d] = sqfree[rest] && rest % p as usize != 0;
        mu[d] = if sqfree[d] { -mu[rest] } else { 0 };
    }
    (g, sqfree, mu)
}

#[test]
fn brute_g_sums_stay_under_their_bounds() {
    const LIMIT: usize = 1_000_000;
    for n in [360u64, 4095, 9999] {
        let (g, sqfree, mu) = g_vector(n, LIMIT);
        for y in [50.0f64, 200.0, 1000.0] {
            // tail of the Moebius-weighted series, truncated at the limit
            let mut tail = KahanSum::new();
            for d in (y.floor() as usize + 1)..=LIMIT {
                if sqfree[d] {
                    tail.add(mu[d] as f64 * g[d] / ((d * d) as f64));
                }
            }
            let bound = asymptotic::mobius_g_tail_bound(n, y).unwrap();
            assert!(tail.value().abs() <= bound, "n = {n}, y = {y}: {} > {bound}", tail.value());

            // sum of g(d) over squarefree d <= y, which dominates sum |R(d)|
            let mut head = KahanSum::new();
            for d in 1..=(y.floor() as usize) {
                if sqfree[d] {
                    head.add(g[d]);
                }
            }
            let rd = asymptotic::rd_bound(n, y).unwrap();
            assert!(head.value() <= rd, "n = {n}, y = {y}: {} > {rd}", head.value());
        }
    }
}

#[test]
fn coprime_counter_tracks_its_main_term() {
    let t = table_1e6();
    let flags = sieve_squarefree(0, 100_000).unwrap();
    let mut rng = rng(14);
    for _ in 0..80 {
        let n = rng.gen_range(8100u64..=100_000);
        let c = r_count_with(&flags, n).unwrap();
        let ms = asymptotic::main_term_star(n, &t, 2_000).unwrap();
        let budget = explicit_error_budget(n).unwrap();
        let err = (c.r_star as f64 - ms.mid()).abs();
        assert!(err <= budget.total + ms.width(), "n = {n}: {err} over {}", budget.total);
    }
}

#[test]
fn casework_campaign_to_2e4() {
    let r = casework_verify(20_000).unwrap();
    assert!(r.passed(), "failures: {:?}", r.failures);
}

// ---- divisor_bound ----

/// Independent oracle: integral_2^X pi(t)/t dt computed exactly from the
/// prime staircase, then summed over the k-range. Shares no code with the
/// double-sum evaluation.
fn log_c_by_integral(delta: f64, table: &PrimeTable) -> f64 {
    let pi_integral = |x: f64| -> f64 {
        let mut acc = KahanSum::new();
        let primes = table.primes();
        for (i, &p) in primes.iter().enumerate() {
            if (p as f64) > x {
                break;
            }
            let next = primes.get(i + 1).map_or(x, |&q| (q as f64).min(x));
            acc.add((i as f64 + 1.0) * (next.ln() - (p as f64).ln()));
        }
        acc.value()
    };
    let k_max = (1.0 / (2f64.powf(delta) - 1.0)).floor() as u64;
    let mut total = KahanSum::new();
    for k in 1..=k_max {
        total.add(pi_integral((1.0 + 1.0 / k as f64).powf(1.0 / delta)));
    }
    delta * total.value()
}

#[test]
fn log_c_double_sum_matches_integral_oracle() {
    let t = build_prime_table(1 << 21).unwrap();
    for delta in [0.3f64, 0.45, 0.6, 0.8] {
        let by_sum = log_c_exact(delta, &t).unwrap();
        let by_integral = log_c_by_integral(delta, &t);
        assert!(
            (by_sum - by_integral).abs() < 1e-9,
            "delta = {delta}: {by_sum} vs {by_integral}"
        );
    }
}

#[test]
fn tau_sieve_cross_checked_against_factorization() {
    let tau = tau_sieve(200_000).unwrap();
    let mut rng = rng(11);
    for _ in 0..2_000 {
        let n = rng.gen_range(1u64..=200_000);
        assert_eq!(tau[n as usize] as u64, arithfun::tau(n).unwrap(), "n = {n}");
    }
}

#[test]
#[allow(clippy::needless_range_loop)]
fn tau_bounds_hold_on_medium_range() {
    let tau = tau_sieve(100_000).unwrap();
    for n in 3..=100_000usize {
        let ln_n = (n as f64).ln();
        let lt = (tau[n] as f64).ln();
        assert!(lt < 3.0 / ln_n.ln() * ln_n, "simple bound at {n}");
        for delta in [0.1f64, 0.5, 0.9] {
            let h = divisor_bound::h_of_delta(delta).unwrap();
            assert!(lt < h + delta * ln_n, "H bound at {n}, delta {delta}");
        }
    }
}

#[test]
fn summation_identity_randomized() {
    let mut rng = rng(12);
    for case in 0..30 {
        let len = rng.gen_range(20usize..=120);
        let a: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let m = rng.gen_range(0..len / 2);
        let n = rng.gen_range(m + 1..=len);
        let (value, direct) = if case % 2 == 0 {
            let f = |x: f64| 0.5 * x * x - 3.0 * x;
            let fp = |x: f64| x - 3.0;
            let v = partial_summation(&a, &f, &fp, m, n, Integration::Quadrature { step: 0.25 })
                .unwrap();
            let d: f64 = (m + 1..=n).map(|k| f(k as f64) * a[k - 1]).sum();
            (v, d)
        } else {
            let kink = m as f64 + rng.gen_range(0.0..=1.0) * (n - m) as f64;
            let f = move |x: f64| (x - kink).abs() + 0.1 * x;
            let fp = move |x: f64| if x < kink { -0.9 } else { 1.1 };
            let v = partial_summation(&a, &f, &fp, m, n, Integration::Antiderivative(&f)).unwrap();
            let d: f64 = (m + 1..=n).map(|k| f(k as f64) * a[k - 1]).sum();
            (v, d)
        };
        assert!((value - direct).abs() < 1e-9, "case {case}: {value} vs {direct}");
    }
}

// ---- proptest invariants ----

mod prop {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn sqfree_split_reconstructs(n in 1u64..=10u64.pow(12)) {
            let s = arithfun::sqfree_split(n).unwrap();
            prop_assert_eq!(s.root * s.root * s.sqfree, n);
            prop_assert!(arithfun::is_squarefree(s.sqfree));
        }

        #[test]
        fn mobius_zero_iff_not_squarefree(n in 1u64..=10u64.pow(9)) {
            let mu = arithfun::mobius(n).unwrap();
            prop_assert_eq!(mu == 0, !arithfun::is_squarefree(n));
        }

        #[test]
        fn enclosure_product_contains_point_product(
            a in 0.0f64..10.0, wa in 0.0f64..0.5,
            b in 0.0f64..10.0, wb in 0.0f64..0.5,
        ) {
            let ea = sqsf::Enclosure::from_bounds(a, a + wa, "").unwrap();
            let eb = sqsf::Enclosure::from_bounds(b, b + wb, "").unwrap();
            let p = ea.mul(&eb);
            prop_assert!(p.contains(a * b));
            prop_assert!(p.contains((a + wa) * (b + wb)));
            prop_assert!(p.contains((a + 0.5 * wa) * (b + 0.5 * wb)));
        }

        #[test]
        fn report_json_round_trips(
            lo in 1u64..1000, span in 0u64..10_000,
            nfail in 0usize..4, wall in 0.0f64..1e4,
        ) {
            let mut r = sqsf::VerifyReport::new("prop", (lo, lo + span));
            for i in 0..nfail {
                r.push_failure(lo + i as u64, format!("f{i}"));
            }
            r.push_extremal("w", lo, wall);
            r.wall_time_seconds = wall;
            let s = serde_json::to_string(&r).unwrap();
            let back: sqsf::VerifyReport = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn logmag_mul_div_inverse(a in -300.0f64..300.0, b in -300.0f64..300.0) {
            let x = sqsf::LogMagnitude::from_log10(a);
            let y = sqsf::LogMagnitude::from_log10(b);
            let back = x.mul(&y).div(&y);
            prop_assert!((back.log10() - a).abs() < 1e-9);
        }
    }
}
