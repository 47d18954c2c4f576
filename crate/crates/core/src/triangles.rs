//! Number triangles: Stirling numbers of both kinds, signed Stirling, Lah,
//! Bessel numbers of both kinds and the generalized Stirling numbers
//! `GS_{s;h}(n, k)`.
//!
//! Stirling and generalized Stirling numbers are built row by row from their
//! recurrences and memoized in process-wide tables. The Bessel and Lah
//! families are evaluated from their closed forms, so checking them against
//! the recurrence-built `GS` specializations compares two independent routes.
//!
//! Every family is zero-extended: any `k` outside `0..=n` (or outside the
//! family's support band) yields zero, and `(0, 0)` is one.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial_int, exact_div, factorial, int_pow, sign_pow, Int, Rat};

/// Identifies a recurrence-built triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Stirling1,
    Stirling2,
    /// `GS_{s;h}` keyed by the exact parameter pair.
    Gs {
        s: Rat,
        h: Rat,
    },
}

/// Rows `0..=n_max` of a triangle; row `n` stores `k = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleTable<V> {
    family: Family,
    rows: Vec<Vec<V>>,
}

impl<V> TriangleTable<V>
where
    V: Clone + Zero + One,
    for<'a> &'a V: std::ops::Mul<&'a V, Output = V>,
{
    /// Builds rows through `n_max` from
    /// `T(n+1, k) = T(n, k-1) + weight(n, k) T(n, k)`, `T(0, 0) = 1`,
    /// with `T(n, 0) = 0` for `n > 0`.
    fn build(family: Family, n_max: u32, weight: impl Fn(u32, u32) -> V) -> Self {
        let mut table = Self {
            family,
            rows: vec![vec![V::one()]],
        };
        table.extend(n_max, weight);
        table
    }

    fn extend(&mut self, n_max: u32, weight: impl Fn(u32, u32) -> V) {
        while self.n_max() < n_max {
            let n = self.n_max();
            let prev = &self.rows[n as usize];
            let mut row = Vec::with_capacity(n as usize + 2);
            row.push(V::zero());
            for k in 1..=n + 1 {
                let mut v = prev[k as usize - 1].clone();
                if let Some(t) = prev.get(k as usize) {
                    v = v + &weight(n, k) * t;
                }
                row.push(v);
            }
            self.rows.push(row);
        }
    }
}

impl<V: Clone + Zero> TriangleTable<V> {
    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn n_max(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn row(&self, n: u32) -> Option<&[V]> {
        self.rows.get(n as usize).map(Vec::as_slice)
    }

    /// `T(n, k)` with zero extension in `k`; `None` if row `n` is not built.
    pub fn get(&self, n: u32, k: i64) -> Option<V> {
        let row = self.rows.get(n as usize)?;
        Some(
            usize::try_from(k)
                .ok()
                .and_then(|k| row.get(k))
                .cloned()
                .unwrap_or_else(V::zero),
        )
    }

    /// Overwrites one stored entry. Used to inject faults when testing that
    /// the identity checks notice corrupted data.
    pub fn set(&mut self, n: u32, k: u32, value: V) {
        self.rows[n as usize][k as usize] = value;
    }
}

/// Rows are built in chunks so that neighbouring requests reuse a table.
const GROWTH_STEP: u32 = 16;

#[derive(Default)]
struct Cache {
    ints: RwLock<HashMap<Family, Arc<TriangleTable<Int>>>>,
    rats: RwLock<HashMap<Family, Arc<TriangleTable<Rat>>>>,
}

static CACHE: std::sync::LazyLock<Cache> = std::sync::LazyLock::new(Cache::default);

fn cached<V>(
    map: &RwLock<HashMap<Family, Arc<TriangleTable<V>>>>,
    family: &Family,
    n_max: u32,
    weight: impl Fn(u32, u32) -> V,
) -> Arc<TriangleTable<V>>
where
    V: Clone + Zero + One,
    for<'a> &'a V: std::ops::Mul<&'a V, Output = V>,
{
    if let Some(t) = map.read().expect("triangle cache poisoned").get(family) {
        if t.n_max() >= n_max {
            return Arc::clone(t);
        }
    }
    let mut guard = map.write().expect("triangle cache poisoned");
    let target = n_max.div_ceil(GROWTH_STEP) * GROWTH_STEP;
    let table = match guard.get(family) {
        Some(t) if t.n_max() >= n_max => return Arc::clone(t),
        Some(t) => {
            let mut grown = TriangleTable::clone(t);
            grown.extend(target, weight);
            grown
        }
        None => TriangleTable::build(family.clone(), target, weight),
    };
    let table = Arc::new(table);
    guard.insert(family.clone(), Arc::clone(&table));
    table
}

/// Shared table of unsigned Stirling numbers of the first kind, rows `0..=n_max` at least.
pub fn stirling1_table(n_max: u32) -> Arc<TriangleTable<Int>> {
    cached(&CACHE.ints, &Family::Stirling1, n_max, |n, _| Int::from(n))
}

/// Shared table of Stirling numbers of the second kind, rows `0..=n_max` at least.
pub fn stirling2_table(n_max: u32) -> Arc<TriangleTable<Int>> {
    cached(&CACHE.ints, &Family::Stirling2, n_max, |_, k| Int::from(k))
}

/// Shared table of `GS_{s;h}`, rows `0..=n_max` at least.
pub fn gs_table(s: &Rat, h: &Rat, n_max: u32) -> Result<Arc<TriangleTable<Rat>>> {
    if h.is_zero() {
        return Err(Error::Domain(
            "generalized Stirling numbers need h != 0".into(),
        ));
    }
    let family = Family::Gs {
        s: s.clone(),
        h: h.clone(),
    };
    Ok(cached(&CACHE.rats, &family, n_max, |n, k| {
        // h (k + s (n - k)) for the T(n, k) term of row n + 1
        let (n, k) = (Rat::from_integer(n.into()), Rat::from_integer(k.into()));
        h * (&k + s * (n - &k))
    }))
}

/// Unsigned Stirling number of the first kind: permutations of `n` elements with `k` cycles.
pub fn stirling1(n: u32, k: i64) -> Int {
    stirling1_table(n).get(n, k).expect("row was built")
}

/// Stirling number of the second kind: partitions of an `n`-set into `k` blocks.
pub fn stirling2(n: u32, k: i64) -> Int {
    stirling2_table(n).get(n, k).expect("row was built")
}

/// `(-1)^(n-k)` times [`stirling1`].
pub fn stirling1_signed(n: u32, k: i64) -> Int {
    Int::from(sign_pow(n as i64 - k)) * stirling1(n, k)
}

/// Signed Bessel number of the first kind,
/// `b(n,k) = (-1)^(n-k) (2n-k-1)! / (2^(n-k) (k-1)! (n-k)!)` for `1 <= k <= n`.
#[doc(alias = "bessel_b")]
pub fn bessel_first(n: u32, k: i64) -> Int {
    if n == 0 {
        return if k == 0 { Int::one() } else { Int::zero() };
    }
    if k < 1 || k > n as i64 {
        return Int::zero();
    }
    let (n, k) = (n as i64, k as u32);
    let n_minus_k = n as u32 - k;
    let quotient = exact_div(
        &factorial(2 * n as u32 - k - 1),
        &(factorial(k - 1) * factorial(n_minus_k)),
    );
    Int::from(sign_pow(n_minus_k as i64)) * exact_div(&quotient, &int_pow(2, n_minus_k))
}

/// Bessel number of the second kind,
/// `B(n,k) = n! / (2^(n-k) (2k-n)! (n-k)!)` for `ceil(n/2) <= k <= n`.
#[doc(alias = "bessel_B")]
pub fn bessel_second(n: u32, k: i64) -> Int {
    if n == 0 {
        return if k == 0 { Int::one() } else { Int::zero() };
    }
    if k < n.div_ceil(2) as i64 || k > n as i64 {
        return Int::zero();
    }
    let k = k as u32;
    let n_minus_k = n - k;
    exact_div(
        &factorial(n),
        &(int_pow(2, n_minus_k) * factorial(2 * k - n) * factorial(n_minus_k)),
    )
}

/// Lah number `L(n,k) = ((n-1)! / (k-1)!) C(n, k)` for `1 <= k <= n`.
pub fn lah(n: u32, k: i64) -> Int {
    if n == 0 {
        return if k == 0 { Int::one() } else { Int::zero() };
    }
    if k < 1 || k > n as i64 {
        return Int::zero();
    }
    exact_div(&factorial(n - 1), &factorial(k as u32 - 1)) * binomial_int(n as i64, k)
}

/// Generalized Stirling number `GS_{s;h}(n, k)`.
pub fn gs(s: &Rat, h: &Rat, n: u32, k: i64) -> Result<Rat> {
    Ok(gs_table(s, h, n)?.get(n, k).expect("row was built"))
}

/// Stirling tables captured at a fixed size, so that identity checks read one
/// consistent snapshot. A snapshot may be altered with the `override_*`
/// methods without touching the shared cache.
#[derive(Clone, Debug)]
pub struct Tables {
    stirling1: Arc<TriangleTable<Int>>,
    stirling2: Arc<TriangleTable<Int>>,
}

impl Tables {
    pub fn new(n_max: u32) -> Self {
        Self {
            stirling1: stirling1_table(n_max),
            stirling2: stirling2_table(n_max),
        }
    }

    pub fn n_max(&self) -> u32 {
        self.stirling1.n_max().min(self.stirling2.n_max())
    }

    pub fn stirling1(&self, n: u32, k: i64) -> Int {
        self.stirling1.get(n, k).unwrap_or_else(|| stirling1(n, k))
    }

    pub fn stirling2(&self, n: u32, k: i64) -> Int {
        self.stirling2.get(n, k).unwrap_or_else(|| stirling2(n, k))
    }

    pub fn override_stirling1(&mut self, n: u32, k: u32, value: Int) {
        Arc::make_mut(&mut self.stirling1).set(n, k, value);
    }

    pub fn override_stirling2(&mut self, n: u32, k: u32, value: Int) {
        Arc::make_mut(&mut self.stirling2).set(n, k, value);
    }
}
