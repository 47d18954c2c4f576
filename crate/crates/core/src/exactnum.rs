//! Exact integers and rationals, factorials, binomial coefficients with
//! integer, rational and polynomial upper index, and the rising/falling
//! factorial polynomials.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyengine::UniPoly;

/// Arbitrary-precision signed integer.
pub type Int = BigInt;

/// Exact rational. `num_rational` keeps every value reduced with a positive
/// denominator, so `==` is value equality.
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// The rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_from_int(v: Int) -> Rat {
    Rat::from_integer(v)
}

/// Parses `"p/q"` or a plain integer such as `"-3"`.
pub fn parse_rat(input: &str) -> Result<Rat> {
    let err = || Error::Parse {
        input: input.to_string(),
        expected: "a rational p/q or an integer",
    };
    let s = input.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: Int = num.parse().map_err(|_| err())?;
    let den: Int = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(num, den))
}

/// `(-1)^e` as a machine integer.
pub fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn int_pow(base: i64, exp: u32) -> Int {
    num_traits::pow(Int::from(base), exp as usize)
}

pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    num_traits::pow(base.clone(), exp as usize)
}

static FACTORIALS: RwLock<Vec<Int>> = RwLock::new(Vec::new());

/// `n!`, served from a process-wide table that grows on demand.
pub fn factorial(n: u32) -> Int {
    let n = n as usize;
    {
        let table = FACTORIALS.read().expect("factorial table poisoned");
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = FACTORIALS.write().expect("factorial table poisoned");
    if table.is_empty() {
        table.push(Int::one());
    }
    while table.len() <= n {
        let next = table.last().unwrap() * Int::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

/// Checked variant of [`factorial`] for signed input.
pub fn try_factorial(n: i64) -> Result<Int> {
    u32::try_from(n)
        .map(factorial)
        .map_err(|_| Error::Domain(format!("factorial of negative or oversized argument {n}")))
}

/// `C(n, k)` for arbitrary integers.
///
/// Zero when `k < 0`. For `n < 0` the negative upper index rule
/// `C(n, k) = (-1)^k C(k - n - 1, k)` applies.
pub fn binomial_int(n: i64, k: i64) -> Int {
    if k < 0 {
        return Int::zero();
    }
    if n < 0 {
        return Int::from(sign_pow(k)) * binomial_int(k - n - 1, k);
    }
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 1..=k {
        // Every partial product is itself a binomial coefficient.
        acc = acc * Int::from(n - k + i) / Int::from(i);
    }
    acc
}

/// `C(a, k) = a (a-1) ... (a-k+1) / k!` for rational `a`.
pub fn binomial_rat(a: &Rat, k: u32) -> Rat {
    let mut num = Rat::one();
    for i in 0..k {
        num *= a - rat_from_int(Int::from(i));
    }
    num / rat_from_int(factorial(k))
}

/// `C(c + Z, k)` as a degree-`k` polynomial in the formal variable `Z`.
pub fn binomial_poly_upper(c: i64, k: u32) -> UniPoly {
    let mut p = UniPoly::one();
    for i in 0..k as i64 {
        p = &p * &UniPoly::from_ints(&[c - i, 1]);
    }
    p.scale(&Rat::new(Int::one(), factorial(k)))
}

/// `X (X + 1) ... (X + n - 1)`.
pub fn rising_factorial_poly(n: u32) -> UniPoly {
    (0..n as i64).fold(UniPoly::one(), |p, i| &p * &UniPoly::from_ints(&[i, 1]))
}

/// `X (X - 1) ... (X - n + 1)`.
pub fn falling_factorial_poly(n: u32) -> UniPoly {
    (0..n as i64).fold(UniPoly::one(), |p, i| &p * &UniPoly::from_ints(&[-i, 1]))
}

/// Exact quotient `num / den`; panics when the division leaves a remainder.
pub(crate) fn exact_div(num: &Int, den: &Int) -> Int {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "inexact division {num} / {den}");
    q
}
