use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::uni::{push_term, UniPoly};
use crate::exactnum::{rat_pow, Rat};

/// Sparse polynomial in two formal variables `x` and `z` over the rationals.
///
/// Keys are `(deg_x, deg_z)`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1, 0)
    }

    pub fn monomial(c: Rat, deg_x: u32, deg_z: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(deg_x, deg_z, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rat)>) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Adds `c x^deg_x z^deg_z` in place.
    pub fn add_term(&mut self, deg_x: u32, deg_z: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let key = (deg_x, deg_z);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn coeff(&self, deg_x: u32, deg_z: u32) -> Rat {
        self.terms
            .get(&(deg_x, deg_z))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Terms in lexicographic `(deg_x, deg_z)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn degree_z(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn scale(&self, by: &Rat) -> Self {
        Self::from_terms(self.terms.iter().map(|(&k, c)| (k, c * by)))
    }

    /// Multiplies by `x^k`.
    pub fn mul_x(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + k, j), c.clone()))
                .collect(),
        }
    }

    /// Multiplies by a polynomial in `z` alone.
    pub fn mul_z_poly(&self, p: &UniPoly) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            for (d, pc) in p.coeffs().iter().enumerate() {
                out.add_term(i, j + d as u32, c * pc);
            }
        }
        out
    }

    /// Substitutes `z := z0`, leaving a polynomial in `x`.
    pub fn substitute_z(&self, z0: &Rat) -> UniPoly {
        let deg = self.degree_x().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![Rat::zero(); deg];
        for (&(i, j), c) in &self.terms {
            coeffs[i as usize] += c * rat_pow(z0, j);
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn eval(&self, x0: &Rat, z0: &Rat) -> Rat {
        self.substitute_z(z0).eval(x0)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (&(i, j), c) in &self.terms {
            let var = |name: &str, d: u32| match d {
                0 => String::new(),
                1 => name.to_string(),
                _ => format!("{name}^{d}"),
            };
            let power = [var("x", i), var("z", j)]
                .into_iter()
                .filter(|s| !s.is_empty())
                .collect::<Vec<_>>()
                .join("*");
            push_term(&mut out, c, &power);
        }
        f.write_str(&out)
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;

    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;

    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;

    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, a * b);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;

    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}
