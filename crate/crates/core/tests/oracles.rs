//! Brute-force and enumeration oracles for the number families.

use std::collections::HashSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use stirling_bessel::exactnum::{binomial_int, binomial_poly_upper, binomial_rat, factorial, rat};
use stirling_bessel::polyengine::{
    bessel_poly, pn_recurrence, pn_recurrence_at, reverse_bessel_poly,
};
use stirling_bessel::triangles::{bessel_first, lah, stirling1, stirling2};
use stirling_bessel::{Rat, UniPoly};

/// Cycle counts of all permutations of `0..n`, by Heap's algorithm.
fn cycle_count_histogram(n: usize) -> Vec<u64> {
    fn cycles(p: &[usize]) -> usize {
        let mut seen = vec![false; p.len()];
        let mut c = 0;
        for i in 0..p.len() {
            if !seen[i] {
                c += 1;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = p[j];
                }
            }
        }
        c
    }
    let mut hist = vec![0u64; n + 1];
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    hist[cycles(&p)] += 1;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            hist[cycles(&p)] += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hist
}

/// Block counts of all set partitions of `0..n`, via restricted growth strings.
fn block_count_histogram(n: usize) -> Vec<u64> {
    fn go(pos: usize, n: usize, max: usize, hist: &mut [u64]) {
        if pos == n {
            hist[max] += 1;
            return;
        }
        for b in 0..=max {
            go(pos + 1, n, max.max(b + 1), hist);
        }
    }
    let mut hist = vec![0u64; n + 1];
    if n == 0 {
        hist[0] = 1;
    } else {
        go(0, n, 0, &mut hist);
    }
    hist
}

#[test]
fn stirling1_counts_permutation_cycles() {
    assert_eq!(cycle_count_histogram(0), vec![1]);
    for n in 0..=8usize {
        let hist = cycle_count_histogram(n);
        for (k, &count) in hist.iter().enumerate() {
            assert_eq!(
                stirling1(n as u32, k as i64),
                BigInt::from(count),
                "[{n} {k}]"
            );
        }
    }
}

#[test]
fn stirling2_counts_set_partitions() {
    for n in 0..=8usize {
        let hist = block_count_histogram(n);
        for (k, &count) in hist.iter().enumerate() {
            assert_eq!(
                stirling2(n as u32, k as i64),
                BigInt::from(count),
                "{{{n} {k}}}"
            );
        }
    }
}

#[test]
fn distinct_partitions_are_distinct() {
    // sanity check of the restricted growth enumeration itself: Bell(5) = 52
    let total: u64 = block_count_histogram(5).iter().sum();
    let strings: HashSet<Vec<usize>> = {
        let mut out = HashSet::new();
        fn go(cur: &mut Vec<usize>, n: usize, max: usize, out: &mut HashSet<Vec<usize>>) {
            if cur.len() == n {
                out.insert(cur.clone());
                return;
            }
            for b in 0..=max {
                cur.push(b);
                go(cur, n, max.max(b + 1), out);
                cur.pop();
            }
        }
        go(&mut Vec::new(), 5, 0, &mut out);
        out
    };
    assert_eq!(total, 52);
    assert_eq!(strings.len(), 52);
}

#[test]
fn bessel_first_is_a_bessel_polynomial_coefficient() {
    // b(n,k) is the coefficient of x^(n-k) in y_{n-1}(-x)
    for n in 1..=25u32 {
        let y = bessel_poly(n - 1);
        for k in 1..=n {
            let d = (n - k) as usize;
            let sign = if d.is_multiple_of(2) {
                rat(1, 1)
            } else {
                rat(-1, 1)
            };
            assert_eq!(
                y.coeff(d) * sign,
                Rat::from_integer(bessel_first(n, k as i64)),
                "n={n} k={k}"
            );
        }
    }
}

#[test]
fn lah_counts_ordered_partitions() {
    // L(n,k) = sum over set partitions into k blocks of prod (block size)!
    fn go(pos: usize, n: usize, sizes: &mut Vec<u64>, hist: &mut [u64]) {
        if pos == n {
            let w: u64 = sizes.iter().map(|&s| (1..=s).product::<u64>()).product();
            hist[sizes.len()] += w;
            return;
        }
        for b in 0..sizes.len() {
            sizes[b] += 1;
            go(pos + 1, n, sizes, hist);
            sizes[b] -= 1;
        }
        sizes.push(1);
        go(pos + 1, n, sizes, hist);
        sizes.pop();
    }
    for n in 1..=7usize {
        let mut hist = vec![0u64; n + 1];
        go(0, n, &mut Vec::new(), &mut hist);
        for (k, &count) in hist.iter().enumerate().skip(1) {
            assert_eq!(lah(n as u32, k as i64), BigInt::from(count), "L({n},{k})");
        }
    }
}

#[test]
fn reverse_bessel_matches_coefficient_reversal() {
    for n in 0..=25u32 {
        assert_eq!(reverse_bessel_poly(n), bessel_poly(n).reversed(n as usize));
    }
}

/// `P_n(x0, z0)` from the recurrence run on numbers only.
fn pn_numeric(n: u32, x0: &Rat, z0: &Rat) -> Rat {
    let mut values = vec![x0.clone()];
    while values.len() < n as usize {
        let m_max = values.len() as i64;
        let mut acc = binomial_rat(&(z0 + rat(m_max, 1)), m_max as u32);
        for (idx, v) in values.iter().enumerate() {
            let m = idx as i64 + 1;
            acc -= binomial_rat(&(z0 + rat(m_max - m, 1)), (m_max - m + 1) as u32) * v;
        }
        values.push(x0 * acc);
    }
    values.pop().unwrap()
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_homomorphism(x0 in small_rat(), z0 in small_rat(), n in 1u32..=12) {
        let poly = pn_recurrence(n).unwrap();
        prop_assert_eq!(poly.eval(&x0, &z0), pn_numeric(n, &x0, &z0));
        prop_assert_eq!(pn_recurrence_at(n, &z0).unwrap().eval(&x0), pn_numeric(n, &x0, &z0));
    }

    #[test]
    fn binomial_poly_upper_is_binomial_rat(c in -6i64..=6, k in 0u32..=8, z in small_rat()) {
        prop_assert_eq!(binomial_poly_upper(c, k).eval(&z), binomial_rat(&(z + rat(c, 1)), k));
    }

    #[test]
    fn pascal_rule_holds_for_all_integers(n in -30i64..=30, k in -3i64..=30) {
        prop_assert_eq!(
            binomial_int(n + 1, k + 1),
            binomial_int(n, k) + binomial_int(n, k + 1)
        );
    }

    #[test]
    fn rationals_stay_canonical(a in small_rat(), b in small_rat()) {
        for v in [&a + &b, &a * &b, &a - &b] {
            prop_assert!(*v.denom() > BigInt::from(0));
            prop_assert_eq!(num_integer::Integer::gcd(v.numer(), v.denom()), if v.numer() == &BigInt::from(0) { v.denom().clone() } else { BigInt::from(1) });
        }
    }

    #[test]
    fn poly_product_evaluates_pointwise(
        p in proptest::collection::vec(-9i64..=9, 0..6),
        q in proptest::collection::vec(-9i64..=9, 0..6),
        x in small_rat(),
    ) {
        let (p, q) = (UniPoly::from_ints(&p), UniPoly::from_ints(&q));
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!((&p + &q).eval(&x), p.eval(&x) + q.eval(&x));
    }
}

#[test]
fn factorial_is_repeated_multiplication() {
    let mut acc = BigInt::from(1);
    for n in 1..=120u32 {
        acc *= n;
        assert_eq!(factorial(n), acc);
    }
}
