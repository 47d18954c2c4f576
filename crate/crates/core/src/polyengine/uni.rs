use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::exactnum::{Int, Rat};

/// Dense univariate polynomial over the rationals; `coeffs[i]` multiplies `x^i`.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// an empty coefficient list and structural equality is value equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    pub fn monomial(c: Rat, degree: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Integer coefficients in ascending degree order.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| Rat::from_integer(Int::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> Rat {
        self.coeffs.get(degree).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, at: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * at + c)
    }

    pub fn scale(&self, by: &Rat) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * by).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `x^n p(1/x)`, the coefficient reversal within degree `n`.
    ///
    /// Panics if the degree exceeds `n`.
    pub fn reversed(&self, n: usize) -> Self {
        assert!(
            self.degree().is_none_or(|d| d <= n),
            "cannot reverse a degree {:?} polynomial within degree {n}",
            self.degree()
        );
        Self::from_coeffs((0..=n).map(|i| self.coeff(n - i)).collect())
    }

    /// Renders with the given variable name, highest degree first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let power = match deg {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{deg}"),
            };
            push_term(&mut out, c, &power);
        }
        out
    }
}

/// Appends `c * power` to a sum rendering, handling signs and unit coefficients.
pub(crate) fn push_term(out: &mut String, c: &Rat, power: &str) {
    let negative = c.is_negative();
    if out.is_empty() {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let mag = c.abs();
    if power.is_empty() {
        out.push_str(&mag.to_string());
    } else if mag.is_one() {
        out.push_str(power);
    } else if mag.is_integer() {
        out.push_str(&format!("{mag}{power}"));
    } else {
        out.push_str(&format!("({mag}){power}"));
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;

    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;

    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;

    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for UniPoly {
    type Output = UniPoly;

    fn neg(self) -> UniPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn canonical_form() {
        let p = UniPoly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.coeffs().len(), 2);
        assert_eq!(UniPoly::from_ints(&[0, 0]), UniPoly::zero());
        assert_eq!(UniPoly::zero().degree(), None);
        let q = UniPoly::from_ints(&[1, 1]);
        assert_eq!(&q - &q, UniPoly::zero());
    }

    #[test]
    fn arithmetic_and_eval() {
        let p = UniPoly::from_ints(&[1, 1]);
        let q = UniPoly::from_ints(&[-1, 1]);
        assert_eq!(&p * &q, UniPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(&p + &q, UniPoly::from_ints(&[0, 2]));
        assert_eq!((&p * &q).eval(&rat(1, 2)), rat(-3, 4));
        assert_eq!(p.shift(2), UniPoly::from_ints(&[0, 0, 1, 1]));
        assert_eq!(
            UniPoly::from_ints(&[1, 3, 3]).reversed(2),
            UniPoly::from_ints(&[3, 3, 1])
        );
        assert_eq!(
            UniPoly::from_ints(&[0, 1]).reversed(3),
            UniPoly::from_ints(&[0, 0, 1])
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(
            UniPoly::from_ints(&[1, 6, 15, 15]).to_string(),
            "15x^3 + 15x^2 + 6x + 1"
        );
        assert_eq!(UniPoly::from_ints(&[0, -1, 2]).to_string(), "2x^2 - x");
        assert_eq!(UniPoly::from_ints(&[-1]).to_string(), "-1");
        let half = UniPoly::from_coeffs(vec![rat(0, 1), rat(1, 2), rat(-1, 2)]);
        assert_eq!(half.to_string(), "-(1/2)x^2 + (1/2)x");
        assert_eq!(UniPoly::zero().to_string(), "0");
    }
}
