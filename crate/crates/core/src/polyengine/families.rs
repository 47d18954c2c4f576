use std::sync::Mutex;

use num_traits::{One, Zero};

use super::{BiPoly, UniPoly};
use crate::error::{Error, Result};
use crate::exactnum::{
    binomial_int, binomial_poly_upper, binomial_rat, factorial, int_pow, rat, sign_pow, Int, Rat,
};
use crate::triangles::{stirling1, stirling2};

fn require_positive(n: u32, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::Domain(format!("{what} is defined for n >= 1")))
    } else {
        Ok(())
    }
}

fn ratio(num: Int, den: Int) -> Rat {
    Rat::new(num, den)
}

/// `P_1, P_2, ...` from the recurrence, built once and shared.
static PN_PREFIX: Mutex<Vec<BiPoly>> = Mutex::new(Vec::new());

/// `P_n(x, z)` over `Q[x, z]` from
/// `P_1 = x`, `P_{n+1} = x C(n+z, n) - x sum_{m=1}^{n} C(n-m+z, n-m+1) P_m`.
pub fn pn_recurrence(n: u32) -> Result<BiPoly> {
    require_positive(n, "P_n")?;
    let mut prefix = PN_PREFIX.lock().expect("P_n cache poisoned");
    if prefix.is_empty() {
        prefix.push(BiPoly::x());
    }
    while prefix.len() < n as usize {
        let m_max = prefix.len() as i64;
        let mut acc = BiPoly::zero();
        for (idx, p_m) in prefix.iter().enumerate() {
            let m = idx as i64 + 1;
            let binom = binomial_poly_upper(m_max - m, (m_max - m + 1) as u32);
            acc = &acc + &p_m.mul_z_poly(&binom);
        }
        let head = BiPoly::monomial(Rat::one(), 0, 0)
            .mul_z_poly(&binomial_poly_upper(m_max, m_max as u32));
        prefix.push((&head - &acc).mul_x(1));
    }
    Ok(prefix[n as usize - 1].clone())
}

/// The same recurrence run directly in `Q[x]` at a fixed `z`.
pub fn pn_recurrence_at(n: u32, z: &Rat) -> Result<UniPoly> {
    require_positive(n, "P_n")?;
    let mut prefix = vec![UniPoly::x()];
    while prefix.len() < n as usize {
        let m_max = prefix.len() as i64;
        let mut acc = UniPoly::constant(binomial_rat(&(z + rat(m_max, 1)), m_max as u32));
        for (idx, p_m) in prefix.iter().enumerate() {
            let m = idx as i64 + 1;
            let c = binomial_rat(&(z + rat(m_max - m, 1)), (m_max - m + 1) as u32);
            acc = &acc - &p_m.scale(&c);
        }
        prefix.push(acc.shift(1));
    }
    Ok(prefix.pop().expect("nonempty"))
}

/// Closed form
/// `P_n = sum_{k=1}^{n} sum_{j=1}^{k} (-1)^(j-1) (j-1)! / (n-1)! [n k] {k j} x^j z^(k-1)`.
pub fn pn_closed_form(n: u32) -> Result<BiPoly> {
    require_positive(n, "P_n")?;
    let denom = factorial(n - 1);
    let mut p = BiPoly::zero();
    for k in 1..=n {
        let s1 = stirling1(n, k as i64);
        for j in 1..=k {
            let num =
                Int::from(sign_pow(j as i64 - 1)) * factorial(j - 1) * &s1 * stirling2(k, j as i64);
            p.add_term(j, k - 1, ratio(num, denom.clone()));
        }
    }
    Ok(p)
}

/// `P_n(x, -1/2) = sum_{k=0}^{n-1} C(n+k-1, k) x^(n-k) / 2^(n+k-1)`, the
/// occupation-time moments of skew Brownian motion.
pub fn pn_skew_bm(n: u32) -> Result<UniPoly> {
    require_positive(n, "P_n(x, -1/2)")?;
    let mut coeffs = vec![Rat::zero(); n as usize + 1];
    for k in 0..n {
        coeffs[(n - k) as usize] = ratio(
            binomial_int((n + k - 1) as i64, k as i64),
            int_pow(2, n + k - 1),
        );
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

/// `P_n(x, -2) = (n/2) sum_{k=ceil(n/2)}^{n} (-1)^(n-k) (k-1)! 2^(2k-n) / ((n-k)! (2k-n)!) x^k`.
pub fn pn_z_minus2(n: u32) -> Result<UniPoly> {
    require_positive(n, "P_n(x, -2)")?;
    let mut coeffs = vec![Rat::zero(); n as usize + 1];
    for k in n.div_ceil(2)..=n {
        let num =
            Int::from(sign_pow((n - k) as i64)) * factorial(k - 1) * int_pow(2, 2 * k - n) * n;
        let den = factorial(n - k) * factorial(2 * k - n) * 2;
        coeffs[k as usize] = ratio(num, den);
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

/// `P_n(x, 1) = 1 - (1 - x)^n = sum_{k=1}^{n} (-1)^(k+1) C(n, k) x^k`.
pub fn pn_z_one(n: u32) -> Result<UniPoly> {
    require_positive(n, "P_n(x, 1)")?;
    let mut coeffs = vec![Rat::zero()];
    coeffs.extend(
        (1..=n as i64)
            .map(|k| Rat::from_integer(Int::from(sign_pow(k + 1)) * binomial_int(n as i64, k))),
    );
    Ok(UniPoly::from_coeffs(coeffs))
}

/// Runs a two-term recurrence `p_n = step(n, p_{n-1}, p_{n-2})` from `p_0`, `p_1`.
fn two_term(
    n: u32,
    p0: UniPoly,
    p1: UniPoly,
    step: impl Fn(u32, &UniPoly, &UniPoly) -> UniPoly,
) -> UniPoly {
    if n == 0 {
        return p0;
    }
    let (mut prev, mut cur) = (p0, p1);
    for i in 2..=n {
        let next = step(i, &cur, &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Bessel polynomial `y_n`: `y_n = (2n-1) x y_{n-1} + y_{n-2}`.
pub fn bessel_poly(n: u32) -> UniPoly {
    two_term(n, UniPoly::one(), UniPoly::from_ints(&[1, 1]), |i, a, b| {
        &a.shift(1).scale(&rat(2 * i as i64 - 1, 1)) + b
    })
}

/// Reverse Bessel polynomial `theta_n`: `theta_n = (2n-1) theta_{n-1} + x^2 theta_{n-2}`.
pub fn reverse_bessel_poly(n: u32) -> UniPoly {
    two_term(n, UniPoly::one(), UniPoly::from_ints(&[1, 1]), |i, a, b| {
        &a.scale(&rat(2 * i as i64 - 1, 1)) + &b.shift(2)
    })
}

/// Chebyshev polynomial of the first kind: `T_{n+1} = 2x T_n - T_{n-1}`.
pub fn chebyshev_t(n: u32) -> UniPoly {
    two_term(n, UniPoly::one(), UniPoly::x(), |_, a, b| {
        &a.shift(1).scale(&rat(2, 1)) - b
    })
}

/// `P_n(x, -2) = (sqrt x)^n T_n(sqrt x)`, built by sending each `t^m` of
/// `T_n` to `x^((n+m)/2)`.
///
/// Panics if `T_n` has a monomial whose parity differs from `n`.
pub fn pn_via_chebyshev(n: u32) -> Result<UniPoly> {
    require_positive(n, "P_n(x, -2)")?;
    let t = chebyshev_t(n);
    let mut coeffs = vec![Rat::zero(); n as usize + 1];
    for (m, c) in t.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        assert_eq!(
            (n as usize + m) % 2,
            0,
            "T_{n} has a monomial t^{m} of the wrong parity"
        );
        coeffs[(n as usize + m) / 2] = c.clone();
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(terms: &[((u32, u32), i64, i64)]) -> BiPoly {
        BiPoly::from_terms(terms.iter().map(|&(k, p, q)| (k, rat(p, q))))
    }

    #[test]
    fn small_pn() {
        assert_eq!(pn_recurrence(1).unwrap(), BiPoly::x());
        let p2 = bi(&[((1, 0), 1, 1), ((1, 1), 1, 1), ((2, 1), -1, 1)]);
        assert_eq!(pn_recurrence(2).unwrap(), p2);
        assert_eq!(pn_closed_form(2).unwrap(), p2);
        assert_eq!(pn_closed_form(1).unwrap(), BiPoly::x());
        assert_eq!(pn_closed_form(3).unwrap().coeff(2, 2), rat(-3, 2));
        assert_eq!(pn_recurrence(3).unwrap().coeff(2, 2), rat(-3, 2));
        assert_eq!(
            p2.substitute_z(&rat(-2, 1)),
            UniPoly::from_ints(&[0, -1, 2])
        );
        assert!(matches!(pn_recurrence(0), Err(Error::Domain(_))));
        assert!(matches!(pn_closed_form(0), Err(Error::Domain(_))));
        assert!(pn_skew_bm(0).is_err());
    }

    #[test]
    fn pn_degrees() {
        for n in 1..=10 {
            let p = pn_recurrence(n).unwrap();
            assert_eq!(p.degree_x(), Some(n));
            assert_eq!(p.degree_z(), Some(n - 1));
        }
    }

    #[test]
    fn special_slices() {
        assert_eq!(pn_skew_bm(1).unwrap(), UniPoly::x());
        let half = rat(1, 2);
        assert_eq!(
            pn_skew_bm(2).unwrap(),
            UniPoly::from_coeffs(vec![rat(0, 1), half.clone(), half.clone()])
        );
        assert_eq!(pn_skew_bm(3).unwrap().eval(&rat(1, 1)), rat(1, 1));
        assert_eq!(pn_z_minus2(1).unwrap(), UniPoly::x());
        assert_eq!(pn_z_minus2(2).unwrap(), UniPoly::from_ints(&[0, -1, 2]));
        assert_eq!(pn_z_minus2(3).unwrap(), UniPoly::from_ints(&[0, 0, -3, 4]));
        assert_eq!(pn_z_one(1).unwrap(), UniPoly::x());
        assert_eq!(pn_z_one(2).unwrap(), UniPoly::from_ints(&[0, 2, -1]));
        assert_eq!(pn_z_one(3).unwrap(), UniPoly::from_ints(&[0, 3, -3, 1]));
    }

    #[test]
    fn bessel_polys() {
        assert_eq!(bessel_poly(0), UniPoly::one());
        assert_eq!(bessel_poly(2), UniPoly::from_ints(&[1, 3, 3]));
        assert_eq!(bessel_poly(3), UniPoly::from_ints(&[1, 6, 15, 15]));
        assert_eq!(bessel_poly(4), UniPoly::from_ints(&[1, 10, 45, 105, 105]));
        assert_eq!(reverse_bessel_poly(2), UniPoly::from_ints(&[3, 3, 1]));
        for n in 0..=20 {
            assert_eq!(reverse_bessel_poly(n), bessel_poly(n).reversed(n as usize));
        }
    }

    #[test]
    fn chebyshev() {
        assert_eq!(chebyshev_t(2), UniPoly::from_ints(&[-1, 0, 2]));
        assert_eq!(chebyshev_t(3), UniPoly::from_ints(&[0, -3, 0, 4]));
        for n in 0..=30 {
            assert_eq!(chebyshev_t(n).eval(&rat(1, 1)), rat(1, 1));
        }
        assert_eq!(pn_via_chebyshev(1).unwrap(), UniPoly::x());
        assert_eq!(
            pn_via_chebyshev(2).unwrap(),
            UniPoly::from_ints(&[0, -1, 2])
        );
        assert_eq!(
            pn_via_chebyshev(4).unwrap(),
            UniPoly::from_ints(&[0, 0, 1, -8, 8])
        );
    }

    #[test]
    fn recurrence_at_fixed_z_matches_substitution() {
        for z in [rat(-1, 2), rat(-2, 1), rat(3, 7), rat(5, 1)] {
            for n in 1..=12 {
                assert_eq!(
                    pn_recurrence_at(n, &z).unwrap(),
                    pn_recurrence(n).unwrap().substitute_z(&z),
                    "n={n} z={z}"
                );
            }
        }
    }
}
