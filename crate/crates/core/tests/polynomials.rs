use stirling_bessel::exactnum::rat;
use stirling_bessel::polyengine::{
    pn_closed_form, pn_recurrence, pn_recurrence_at, pn_skew_bm, pn_via_chebyshev, pn_z_minus2,
    pn_z_one,
};
use stirling_bessel::{Error, Rat, UniPoly};

#[test]
fn recurrence_equals_closed_form() {
    for n in 1..=25 {
        assert_eq!(
            pn_recurrence(n).unwrap(),
            pn_closed_form(n).unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn special_slices() {
    let x = UniPoly::x();
    let one_minus_x = &UniPoly::one() - &x;
    let mut x_pow = UniPoly::one();
    let mut c_pow = UniPoly::one();
    for n in 1..=25 {
        x_pow = &x_pow * &x;
        c_pow = &c_pow * &one_minus_x;
        let at = |z: Rat| pn_recurrence(n).unwrap().substitute_z(&z);
        assert_eq!(at(rat(0, 1)), x, "z=0 n={n}");
        assert_eq!(at(rat(-1, 1)), x_pow, "z=-1 n={n}");
        assert_eq!(at(rat(1, 1)), &UniPoly::one() - &c_pow, "z=1 n={n}");
        assert_eq!(pn_z_one(n).unwrap(), &UniPoly::one() - &c_pow);
        assert_eq!(at(rat(-1, 2)), pn_skew_bm(n).unwrap(), "z=-1/2 n={n}");
        assert_eq!(at(rat(-2, 1)), pn_z_minus2(n).unwrap(), "z=-2 n={n}");
        assert_eq!(
            at(rat(-2, 1)),
            pn_via_chebyshev(n).unwrap(),
            "chebyshev n={n}"
        );
    }
}

#[test]
fn recurrence_in_x_agrees_with_substitution() {
    for z in [rat(-3, 4), rat(5, 2), rat(-7, 1)] {
        for n in 1..=15 {
            assert_eq!(
                pn_recurrence_at(n, &z).unwrap(),
                pn_recurrence(n).unwrap().substitute_z(&z)
            );
        }
    }
}

#[test]
fn arcsine_moments() {
    // at alpha = 1/2 the moments are C(2n, n) / 4^n
    let expected = [rat(1, 2), rat(3, 8), rat(5, 16), rat(35, 128)];
    for (n, e) in (1..=4).zip(expected) {
        assert_eq!(pn_skew_bm(n).unwrap().eval(&rat(1, 2)), e);
    }
    let mut c = rat(1, 1);
    for n in 1..=30u32 {
        c *= rat(2 * n as i64 - 1, 2 * n as i64);
        assert_eq!(pn_skew_bm(n).unwrap().eval(&rat(1, 2)), c, "n={n}");
    }
}

#[test]
fn moments_are_probabilities() {
    // P_n(x, z) at x in [0,1] and z in (-1, 0] is a moment of a [0,1] variable
    for z in [rat(-1, 2), rat(-1, 3), rat(-9, 10)] {
        for x in [rat(0, 1), rat(1, 5), rat(2, 3), rat(1, 1)] {
            let mut prev = rat(1, 1);
            for n in 1..=12 {
                let v = pn_recurrence_at(n, &z).unwrap().eval(&x);
                assert!(v >= rat(0, 1) && v <= prev, "z={z} x={x} n={n}");
                prev = v;
            }
            assert_eq!(pn_recurrence_at(5, &z).unwrap().eval(&rat(1, 1)), rat(1, 1));
        }
    }
}

#[test]
fn n_zero_is_a_domain_error() {
    assert!(matches!(pn_recurrence(0), Err(Error::Domain(_))));
    assert!(matches!(pn_closed_form(0), Err(Error::Domain(_))));
    assert!(matches!(pn_skew_bm(0), Err(Error::Domain(_))));
}
