//! Registry of summation identities, each checked exactly over a finite
//! parameter range.
//!
//! An [`Identity`] is declared as an id, an ordered list of integer parameter
//! points, and two evaluators producing the left and right hand sides.
//! Points are scanned in lexicographic order and the first mismatch becomes
//! the reported counterexample; the scan may run on a rayon pool but always
//! reports the same (lexicographically smallest) failure.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{
    binomial_int, binomial_rat, factorial, falling_factorial_poly, int_pow, rat, rat_pow,
    rising_factorial_poly, sign_pow, Int, Rat,
};
use crate::polyengine::{
    pn_closed_form, pn_recurrence, pn_skew_bm, pn_via_chebyshev, pn_z_minus2, pn_z_one,
    reverse_bessel_poly, BiPoly, UniPoly,
};
use crate::triangles::{bessel_first, bessel_second, gs, lah, Tables};

/// Integer coordinates of one instance of an identity.
pub type Point = Vec<i64>;

/// One side of an identity evaluated at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(Int),
    Rat(Rat),
    Poly(UniPoly),
    BiPoly(BiPoly),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => v.fmt(f),
            Value::Rat(v) => v.fmt(f),
            Value::Poly(v) => v.fmt(f),
            Value::BiPoly(v) => v.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub point: Point,
    pub at: Vec<Binding>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub range: String,
    pub status: Status,
    /// Number of parameter points in the range.
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// JSON object with the fields `id`, `range`, `status`, `points`, an
    /// optional `counterexample`, and `elapsed_ms` when `with_timing` is set.
    /// Timing is opt-in so that repeated runs serialize identically.
    pub fn to_json(&self, with_timing: bool) -> serde_json::Value {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if with_timing {
            value["elapsed_ms"] = serde_json::Value::from(self.elapsed.as_millis() as u64);
        }
        value
    }
}

type Evaluator = Box<dyn Fn(&[i64]) -> Value + Send + Sync>;
type Describer = Box<dyn Fn(&[i64]) -> Vec<Binding> + Send + Sync>;

pub struct Identity {
    id: &'static str,
    range: String,
    points: Vec<Point>,
    lhs: Evaluator,
    rhs: Evaluator,
    describe: Describer,
}

impl Identity {
    fn new(
        id: &'static str,
        range: String,
        mut points: Vec<Point>,
        lhs: impl Fn(&[i64]) -> Value + Send + Sync + 'static,
        rhs: impl Fn(&[i64]) -> Value + Send + Sync + 'static,
        describe: Describer,
    ) -> Self {
        points.sort();
        points.dedup();
        Self {
            id,
            range,
            points,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            describe,
        }
    }

    pub fn id(&self) -> &'static str {
        self.id
    }

    pub fn range(&self) -> &str {
        &self.range
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Both sides at `point`.
    pub fn evaluate(&self, point: &[i64]) -> (Value, Value) {
        ((self.lhs)(point), (self.rhs)(point))
    }

    pub fn check(&self, point: &[i64]) -> Option<Counterexample> {
        let (lhs, rhs) = self.evaluate(point);
        (lhs != rhs).then(|| Counterexample {
            point: point.to_vec(),
            at: (self.describe)(point),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    }

    /// Checks every point, in parallel on the current rayon pool.
    pub fn verify(&self) -> IdentityReport {
        let start = Instant::now();
        let counterexample = self.points.par_iter().find_map_first(|p| self.check(p));
        IdentityReport {
            id: self.id.to_string(),
            range: self.range.clone(),
            status: if counterexample.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            points: self.points.len(),
            counterexample,
            elapsed: start.elapsed(),
        }
    }
}

fn named(names: &'static [&'static str]) -> Describer {
    Box::new(move |p| {
        names
            .iter()
            .zip(p)
            .map(|(name, v)| Binding {
                name: name.to_string(),
                value: v.to_string(),
            })
            .collect()
    })
}

fn bind(name: &str, value: impl ToString) -> Binding {
    Binding {
        name: name.to_string(),
        value: value.to_string(),
    }
}

/// All `(n, k)` with `n_lo <= n <= n_max` and `k_lo <= k <= n`.
fn lower_triangle(n_lo: i64, n_max: u32, k_lo: i64) -> Vec<Point> {
    (n_lo..=n_max as i64)
        .flat_map(|n| (k_lo..=n).map(move |k| vec![n, k]))
        .collect()
}

fn with_tag(points: Vec<Point>, tags: usize) -> Vec<Point> {
    points
        .into_iter()
        .flat_map(|p| {
            (0..tags as i64).map(move |t| {
                let mut q = p.clone();
                q.push(t);
                q
            })
        })
        .collect()
}

fn u(v: i64) -> u32 {
    u32::try_from(v).expect("nonnegative index")
}

fn ratv(v: Int) -> Value {
    Value::Rat(Rat::from_integer(v))
}

/// `sum_{i=k}^{n} [n i] {i k} w(i)`.
fn stirling_composition(t: &Tables, n: i64, k: i64, w: impl Fn(i64) -> Int) -> Int {
    (k.max(0)..=n)
        .map(|i| t.stirling1(u(n), i) * t.stirling2(u(i), k) * w(i))
        .sum()
}

/// Same as [`stirling_composition`] with rational weights.
fn stirling_composition_rat(t: &Tables, n: i64, k: i64, w: impl Fn(i64) -> Rat) -> Rat {
    (k.max(0)..=n)
        .map(|i| Rat::from_integer(t.stirling1(u(n), i) * t.stirling2(u(i), k)) * w(i))
        .sum()
}

/// Ids in registry order; [`run_suite`] reports in this order.
pub const ALL_IDS: &[&str] = &[
    "lemma1",
    "special-z",
    "z-minus2-tail",
    "thm1",
    "thm2",
    "inversion",
    "lah",
    "bessel-duality",
    "bessel-cross",
    "gs-specializations",
    "gs-scaling",
    "gs-composition",
    "sss2",
    "gs-moment-form",
    "lemma-keys",
    "hagen-rothe",
    "gould-3-120",
    "moment-bessel-form",
    "theta-b",
    "rising-factorial",
    "falling-factorial",
];

/// `(s, nu, sigma)` triples checked by default in [`gs_composition`]: the
/// two instances giving the Bessel identities followed by five more.
pub fn default_composition_triples() -> Vec<(Rat, Rat, Rat)> {
    [
        ((-2, 1), (-1, 1), (1, 1)),
        ((-1, 2), (1, 2), (1, 1)),
        ((1, 1), (2, 1), (1, 1)),
        ((3, 2), (-1, 1), (2, 1)),
        ((-1, 1), (1, 3), (1, 2)),
        ((2, 3), (3, 1), (5, 4)),
        ((0, 1), (-2, 1), (3, 1)),
    ]
    .into_iter()
    .map(|((a, b), (c, d), (e, f))| (rat(a, b), rat(c, d), rat(e, f)))
    .collect()
}

/// `z` values checked by default in [`sss2`].
pub fn default_sss2_z() -> Vec<Rat> {
    vec![rat(1, 1), rat(-2, 1), rat(2, 1), rat(-1, 2), rat(1, 3)]
}

/// `z` values checked by default in [`gs_moment_form`].
pub fn default_moment_z() -> Vec<Rat> {
    vec![rat(-1, 2), rat(-1, 3), rat(-3, 4), rat(1, 3), rat(2, 1)]
}

/// A Hagen–Rothe instance `(a, b, c, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HagenRotheCase {
    pub a: Rat,
    pub b: i64,
    pub c: Rat,
    pub n: u32,
}

/// The instances `a = 1, b = 2, c = N + k - 1, n = k` for `1 <= N <= n_max`,
/// `0 <= k < N`, plus a handful with rational `a` and `c`.
pub fn default_hagen_rothe_cases(n_max: u32) -> Vec<HagenRotheCase> {
    let mut cases = Vec::new();
    for big_n in 1..=n_max as i64 {
        for k in 0..big_n {
            cases.push(HagenRotheCase {
                a: rat(1, 1),
                b: 2,
                c: rat(big_n + k - 1, 1),
                n: k as u32,
            });
        }
    }
    for (a, b, c, n) in [
        (rat(1, 2), 3, rat(7, 3), 4),
        (rat(-5, 2), 1, rat(1, 3), 5),
        (rat(5, 2), -1, rat(3, 4), 6),
        (rat(3, 5), 2, rat(-4, 1), 3),
        (rat(2, 1), 0, rat(9, 7), 4),
        (rat(1, 1), 2, rat(4, 1), 2),
        (rat(-7, 3), 3, rat(2, 1), 0),
    ] {
        cases.push(HagenRotheCase { a, b, c, n });
    }
    cases
}

/// `P_n` from the recurrence equals the Stirling double-sum closed form in `Q[x, z]`.
pub fn lemma1(n_max: u32) -> Identity {
    Identity::new(
        "lemma1",
        format!("1<=n<={n_max}"),
        (1..=n_max as i64).map(|n| vec![n]).collect(),
        |p| Value::BiPoly(pn_recurrence(u(p[0])).expect("n >= 1")),
        |p| Value::BiPoly(pn_closed_form(u(p[0])).expect("n >= 1")),
        named(&["n"]),
    )
}

const SPECIAL_Z: [(i64, i64, &str); 6] = [
    (0, 1, "x"),
    (-1, 1, "x^n"),
    (1, 1, "1-(1-x)^n"),
    (-1, 2, "skew-bm"),
    (-2, 1, "z-minus2"),
    (-2, 1, "chebyshev"),
];

/// `P_n(x, z)` at `z = 0, -1, 1, -1/2, -2` against the known closed forms.
pub fn special_z(n_max: u32) -> Identity {
    Identity::new(
        "special-z",
        format!("1<=n<={n_max}, z in {{0,-1,1,-1/2,-2}}"),
        with_tag(
            (1..=n_max as i64).map(|n| vec![n]).collect(),
            SPECIAL_Z.len(),
        ),
        |p| {
            let (zn, zd, _) = SPECIAL_Z[p[1] as usize];
            Value::Poly(
                pn_recurrence(u(p[0]))
                    .expect("n >= 1")
                    .substitute_z(&rat(zn, zd)),
            )
        },
        |p| {
            let n = u(p[0]);
            Value::Poly(
                match p[1] {
                    0 => Ok(UniPoly::x()),
                    1 => Ok(UniPoly::monomial(Rat::one(), n as usize)),
                    2 => pn_z_one(n),
                    3 => pn_skew_bm(n),
                    4 => pn_z_minus2(n),
                    _ => pn_via_chebyshev(n),
                }
                .expect("n >= 1"),
            )
        },
        Box::new(|p| {
            let (zn, zd, form) = SPECIAL_Z[p[1] as usize];
            vec![bind("n", p[0]), bind("z", rat(zn, zd)), bind("form", form)]
        }),
    )
}

/// At `z = -2` the recurrence collapses to `P_{n+1} = x (2 P_n - P_{n-1})` for `n >= 3`.
pub fn z_minus2_tail(n_max: u32) -> Identity {
    let at = |n: i64| {
        pn_recurrence(u(n))
            .expect("n >= 1")
            .substitute_z(&rat(-2, 1))
    };
    Identity::new(
        "z-minus2-tail",
        format!("3<=n, n+1<={n_max}"),
        (3..n_max as i64).map(|n| vec![n]).collect(),
        move |p| Value::Poly(at(p[0] + 1)),
        move |p| {
            let two = UniPoly::constant(rat(2, 1));
            Value::Poly((&(&two * &at(p[0])) - &at(p[0] - 1)).shift(1))
        },
        named(&["n"]),
    )
}

/// `sum_i [n i] {i k} (-2)^(n-i) = b(n, k)`.
pub fn thm1(t: &Tables, n_max: u32) -> Identity {
    let t = t.clone();
    Identity::new(
        "thm1",
        format!("1<=k<=n<={n_max}"),
        lower_triangle(1, n_max, 1),
        move |p| {
            Value::Int(stirling_composition(&t, p[0], p[1], |i| {
                int_pow(-2, u(p[0] - i))
            }))
        },
        |p| Value::Int(bessel_first(u(p[0]), p[1])),
        named(&["n", "k"]),
    )
}

/// `sum_i [n i] {i k} (-2)^(i-k) = (-1)^(n-k) B(n, k)`, zero below `ceil(n/2)`.
pub fn thm2(t: &Tables, n_max: u32) -> Identity {
    let t = t.clone();
    Identity::new(
        "thm2",
        format!("1<=k<=n<={n_max}"),
        lower_triangle(1, n_max, 1),
        move |p| {
            Value::Int(stirling_composition(&t, p[0], p[1], |i| {
                int_pow(-2, u(i - p[1]))
            }))
        },
        |p| Value::Int(Int::from(sign_pow(p[0] - p[1])) * bessel_second(u(p[0]), p[1])),
        named(&["n", "k"]),
    )
}

/// `sum_i [n i] {i k} (-1)^(n-i) = delta_{n,k}`.
pub fn inversion(t: &Tables, n_max: u32) -> Identity {
    let t = t.clone();
    Identity::new(
        "inversion",
        format!("0<=k<=n<={n_max}"),
        lower_triangle(0, n_max, 0),
        move |p| {
            Value::Int(stirling_composition(&t, p[0], p[1], |i| {
                Int::from(sign_pow(p[0] - i))
            }))
        },
        |p| Value::Int(Int::from((p[0] == p[1]) as i64)),
        named(&["n", "k"]),
    )
}

/// `sum_i [n i] {i k} = L(n, k)`.
pub fn lah_identity(t: &Tables, n_max: u32) -> Identity {
    let t = t.clone();
    Identity::new(
        "lah",
        format!("1<=k<=n<={n_max}"),
        lower_triangle(1, n_max, 1),
        move |p| Value::Int(stirling_composition(&t, p[0], p[1], |_| Int::one())),
        |p| Value::Int(lah(u(p[0]), p[1])),
        named(&["n", "k"]),
    )
}

/// `sum_k B(n,k) b(k,m) = sum_k b(n,k) B(k,m) = delta_{m,n}`; the last
/// coordinate selects the composition order.
pub fn bessel_duality(n_max: u32) -> Identity {
    Identity::new(
        "bessel-duality",
        format!("1<=m<=n<={n_max}, both orders"),
        with_tag(lower_triangle(1, n_max, 1), 2),
        |p| {
            let (n, m) = (p[0], p[1]);
            let sum: Int = (m..=n)
                .map(|k| {
                    if p[2] == 0 {
                        bessel_second(u(n), k) * bessel_first(u(k), m)
                    } else {
                        bessel_first(u(n), k) * bessel_second(u(k), m)
                    }
                })
                .sum();
            Value::Int(sum)
        },
        |p| Value::Int(Int::from((p[0] == p[1]) as i64)),
        Box::new(|p| {
            let order = if p[2] == 0 { "B*b" } else { "b*B" };
            vec![bind("n", p[0]), bind("m", p[1]), bind("order", order)]
        }),
    )
}

/// `(-1)^(n-k) B(n, k) = b(k+1, 2k-n+1)`.
pub fn bessel_cross(n_max: u32) -> Identity {
    Identity::new(
        "bessel-cross",
        format!("1<=k<=n<={n_max}"),
        lower_triangle(1, n_max, 1),
        |p| Value::Int(Int::from(sign_pow(p[0] - p[1])) * bessel_second(u(p[0]), p[1])),
        |p| Value::Int(bessel_first(u(p[1] + 1), 2 * p[1] - p[0] + 1)),
        named(&["n", "k"]),
    )
}

const SPECIALIZATIONS: [(i64, i64, i64, &str); 5] = [
    (1, 1, 1, "stirling1"),
    (0, 1, 1, "stirling2"),
    (2, 1, -1, "bessel-b"),
    (-1, 1, 1, "bessel-B"),
    (1, 2, 2, "lah"),
];

/// `GS_{1;1}`, `GS_{0;1}`, `GS_{2;-1}`, `GS_{-1;1}`, `GS_{1/2;2}` against the
/// Stirling, Bessel and Lah numbers.
pub fn gs_specializations(t: &Tables, n_max: u32) -> Identity {
    let t = t.clone();
    Identity::new(
        "gs-specializations",
        format!("0<=k<=n<={n_max}"),
        with_tag(lower_triangle(0, n_max, 0), SPECIALIZATIONS.len()),
        |p| {
            let (sn, sd, h, _) = SPECIALIZATIONS[p[2] as usize];
            Value::Rat(gs(&rat(sn, sd), &rat(h, 1), u(p[0]), p[1]).expect("h != 0"))
        },
        move |p| {
            let (n, k) = (u(p[0]), p[1]);
            ratv(match p[2] {
                0 => t.stirling1(n, k),
                1 => t.stirling2(n, k),
                2 => bessel_first(n, k),
                3 => bessel_second(n, k),
                _ => lah(n, k),
            })
        },
        Box::new(|p| {
            let (sn, sd, h, name) = SPECIALIZATIONS[p[2] as usize];
            vec![
                bind("n", p[0]),
                bind("k", p[1]),
                bind("s", rat(sn, sd)),
                bind("h", h),
                bind("family", name),
            ]
        }),
    )
}

fn scaling_grid() -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    (
        vec![rat(-2, 1), rat(-1, 1), rat(1, 2), rat(3, 1)],
        vec![rat(-2, 1), rat(-1, 2), rat(0, 1), rat(1, 1)],
        vec![rat(1, 1), rat(-2, 3)],
    )
}

/// `GS_{s;ah}(n,k) = a^(n-k) GS_{s;h}(n,k)`; coordinates `(n, k, a, s, h)` index the grid.
pub fn gs_scaling(n_max: u32) -> Identity {
    let (a_vals, s_vals, h_vals) = scaling_grid();
    let mut points = Vec::new();
    for p in lower_triangle(0, n_max, 0) {
        for a in 0..a_vals.len() as i64 {
            for s in 0..s_vals.len() as i64 {
                for h in 0..h_vals.len() as i64 {
                    points.push(vec![p[0], p[1], a, s, h]);
                }
            }
        }
    }
    let grid = scaling_grid();
    let grid2 = scaling_grid();
    Identity::new(
        "gs-scaling",
        format!("0<=k<=n<={n_max}, a in {{-2,-1,1/2,3}}, s in {{-2,-1/2,0,1}}, h in {{1,-2/3}}"),
        points,
        move |p| {
            let (a, s, h) = (
                &grid.0[p[2] as usize],
                &grid.1[p[3] as usize],
                &grid.2[p[4] as usize],
            );
            Value::Rat(gs(s, &(a * h), u(p[0]), p[1]).expect("h != 0"))
        },
        move |p| {
            let (a, s, h) = (
                &grid2.0[p[2] as usize],
                &grid2.1[p[3] as usize],
                &grid2.2[p[4] as usize],
            );
            Value::Rat(rat_pow(a, u(p[0] - p[1])) * gs(s, h, u(p[0]), p[1]).expect("h != 0"))
        },
        Box::new(move |p| {
            vec![
                bind("n", p[0]),
                bind("k", p[1]),
                bind("a", &a_vals[p[2] as usize]),
                bind("s", &s_vals[p[3] as usize]),
                bind("h", &h_vals[p[4] as usize]),
            ]
        }),
    )
}

/// `GS_{s/nu; nu}(n,k) = sum_i GS_{s/(nu-sigma); nu-sigma}(n,i) GS_{(s+sigma-nu)/sigma; sigma}(i,k)`.
///
/// Each triple needs `nu != 0`, `sigma > 0` and `nu != sigma`.
pub fn gs_composition(n_max: u32, triples: &[(Rat, Rat, Rat)]) -> Result<Identity> {
    for (s, nu, sigma) in triples {
        if nu.is_zero() || *sigma <= Rat::zero() || nu == sigma {
            return Err(Error::Domain(format!(
                "composition triple (s={s}, nu={nu}, sigma={sigma}) needs nu != 0, sigma > 0, nu != sigma"
            )));
        }
    }
    // (outer (s, h), left (s, h), right (s, h)) per triple
    type Params = Vec<[(Rat, Rat); 3]>;
    let params: Params = triples
        .iter()
        .map(|(s, nu, sigma)| {
            let inner = nu - sigma;
            [
                (s / nu, nu.clone()),
                (s / &inner, inner.clone()),
                ((s + sigma - nu) / sigma, sigma.clone()),
            ]
        })
        .collect();
    let lhs_params = params.clone();
    let rhs_params = params;
    let labels: Vec<_> = triples.to_vec();
    let listed = triples
        .iter()
        .map(|(s, nu, sigma)| format!("({s},{nu},{sigma})"))
        .collect::<Vec<_>>()
        .join(",");
    Ok(Identity::new(
        "gs-composition",
        format!("0<=k<=n<={n_max}, (s,nu,sigma) in {{{listed}}}"),
        with_tag(lower_triangle(0, n_max, 0), triples.len()),
        move |p| {
            let (s, h) = &lhs_params[p[2] as usize][0];
            Value::Rat(gs(s, h, u(p[0]), p[1]).expect("h != 0"))
        },
        move |p| {
            let [_, (s1, h1), (s2, h2)] = &rhs_params[p[2] as usize];
            let (n, k) = (p[0], p[1]);
            let sum: Rat = (k..=n)
                .map(|i| {
                    gs(s1, h1, u(n), i).expect("h != 0") * gs(s2, h2, u(i), k).expect("h != 0")
                })
                .sum();
            Value::Rat(sum)
        },
        Box::new(move |p| {
            let (s, nu, sigma) = &labels[p[2] as usize];
            vec![
                bind("n", p[0]),
                bind("k", p[1]),
                bind("s", s),
                bind("nu", nu),
                bind("sigma", sigma),
            ]
        }),
    ))
}

fn check_z(z_values: &[Rat]) -> Result<()> {
    for z in z_values {
        if z.is_zero() || *z == rat(-1, 1) {
            return Err(Error::Domain(format!(
                "z = {z} is excluded (need z not in {{0, -1}})"
            )));
        }
    }
    Ok(())
}

/// `GS_{1/(z+1); (z+1)/z}`.
fn sss2_params(z: &Rat) -> (Rat, Rat) {
    let z1 = z + Rat::one();
    (z1.recip(), z1 / z)
}

/// `sum_i [n i] {i k} z^i = z^n GS_{1/(z+1); (z+1)/z}(n, k)`.
pub fn sss2(t: &Tables, n_max: u32, z_values: &[Rat]) -> Result<Identity> {
    check_z(z_values)?;
    let t = t.clone();
    let zs = z_values.to_vec();
    let zs_rhs = zs.clone();
    let zs_desc = zs.clone();
    Ok(Identity::new(
        "sss2",
        format!(
            "0<=k<=n<={n_max}, z in {{{}}}",
            zs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        ),
        with_tag(lower_triangle(0, n_max, 0), zs.len()),
        move |p| {
            let z = &zs[p[2] as usize];
            Value::Rat(stirling_composition_rat(&t, p[0], p[1], |i| {
                rat_pow(z, u(i))
            }))
        },
        move |p| {
            let z = &zs_rhs[p[2] as usize];
            let (s, h) = sss2_params(z);
            Value::Rat(rat_pow(z, u(p[0])) * gs(&s, &h, u(p[0]), p[1]).expect("h != 0"))
        },
        Box::new(move |p| {
            vec![
                bind("n", p[0]),
                bind("k", p[1]),
                bind("z", &zs_desc[p[2] as usize]),
            ]
        }),
    ))
}

/// `P_n(x, z) = z^(n-1)/(n-1)! sum_k (-1)^(k-1) (k-1)! x^k GS_{1/(z+1); (z+1)/z}(n, k)`
/// for fixed rational `z`.
pub fn gs_moment_form(n_max: u32, z_values: &[Rat]) -> Result<Identity> {
    check_z(z_values)?;
    let zs = z_values.to_vec();
    let zs_rhs = zs.clone();
    let zs_desc = zs.clone();
    Ok(Identity::new(
        "gs-moment-form",
        format!(
            "1<=n<={n_max}, z in {{{}}}",
            zs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        ),
        with_tag((1..=n_max as i64).map(|n| vec![n]).collect(), zs.len()),
        move |p| {
            Value::Poly(
                pn_recurrence(u(p[0]))
                    .expect("n >= 1")
                    .substitute_z(&zs[p[1] as usize]),
            )
        },
        move |p| {
            let n = u(p[0]);
            let z = &zs_rhs[p[1] as usize];
            let (s, h) = sss2_params(z);
            let coeffs = (0..=n)
                .map(|k| {
                    if k == 0 {
                        return Rat::zero();
                    }
                    Rat::from_integer(Int::from(sign_pow(k as i64 - 1)) * factorial(k - 1))
                        * gs(&s, &h, n, k as i64).expect("h != 0")
                })
                .collect();
            let scale = rat_pow(z, n - 1) / Rat::from_integer(factorial(n - 1));
            Value::Poly(UniPoly::from_coeffs(coeffs).scale(&scale))
        },
        Box::new(move |p| vec![bind("n", p[0]), bind("z", &zs_desc[p[1] as usize])]),
    ))
}

/// The two auxiliary identities behind the induction step of the closed form:
///
/// (a) `[n+1, n-j+i+1] C(n-j+i, i-1) = sum_{k=i}^{j} [k i] [n-k+1, n-j+1] C(n, k-1)`
///     for `1 <= i <= j <= n`, points `(n, i, j, 0)`;
/// (b) `sum_{i=j}^{k} {i j} C(k, i-1) = j {k+1, j+1}` for `1 <= j <= k`,
///     points `(k, j, 0, 1)`.
pub fn lemma_keys(t: &Tables, n_max: u32) -> Identity {
    let mut points = Vec::new();
    for n in 1..=n_max as i64 {
        for i in 1..=n {
            for j in i..=n {
                points.push(vec![n, i, j, 0]);
            }
        }
        for j in 1..=n {
            points.push(vec![n, j, 0, 1]);
        }
    }
    let tl = t.clone();
    let tr = t.clone();
    Identity::new(
        "lemma-keys",
        format!("(a) 1<=i<=j<=n<={n_max}; (b) 1<=j<=k<={n_max}"),
        points,
        move |p| {
            let t = &tl;
            Value::Int(if p[3] == 0 {
                let (n, i, j) = (p[0], p[1], p[2]);
                t.stirling1(u(n + 1), n - j + i + 1) * binomial_int(n - j + i, i - 1)
            } else {
                let (k, j) = (p[0], p[1]);
                (j..=k)
                    .map(|i| t.stirling2(u(i), j) * binomial_int(k, i - 1))
                    .sum()
            })
        },
        move |p| {
            let t = &tr;
            Value::Int(if p[3] == 0 {
                let (n, i, j) = (p[0], p[1], p[2]);
                (i..=j)
                    .map(|k| {
                        t.stirling1(u(k), i)
                            * t.stirling1(u(n - k + 1), n - j + 1)
                            * binomial_int(n, k - 1)
                    })
                    .sum()
            } else {
                let (k, j) = (p[0], p[1]);
                Int::from(j) * t.stirling2(u(k + 1), j + 1)
            })
        },
        Box::new(|p| {
            if p[3] == 0 {
                vec![
                    bind("part", "a"),
                    bind("n", p[0]),
                    bind("i", p[1]),
                    bind("j", p[2]),
                ]
            } else {
                vec![bind("part", "b"), bind("k", p[0]), bind("j", p[1])]
            }
        }),
    )
}

/// `sum_{k=0}^{n} a/(a+bk) C(a+bk, k) C(c-bk, n-k) = C(a+c, n)` on the given cases.
///
/// Rejects any case where some `a + bk` vanishes.
pub fn hagen_rothe(cases: &[HagenRotheCase]) -> Result<Identity> {
    for case in cases {
        for k in 0..=case.n as i64 {
            if (&case.a + rat(case.b * k, 1)).is_zero() {
                return Err(Error::Domain(format!(
                    "Hagen-Rothe case a={}, b={}, n={} has a + bk = 0 at k={k}",
                    case.a, case.b, case.n
                )));
            }
        }
    }
    let cases = cases.to_vec();
    let cases_rhs = cases.clone();
    let cases_desc = cases.clone();
    Ok(Identity::new(
        "hagen-rothe",
        format!("{} cases", cases.len()),
        (0..cases.len() as i64).map(|i| vec![i]).collect(),
        move |p| {
            let HagenRotheCase { a, b, c, n } = &cases[p[0] as usize];
            let sum: Rat = (0..=*n)
                .map(|k| {
                    let bk = rat(b * k as i64, 1);
                    let top = a + &bk;
                    a / &top * binomial_rat(&top, k) * binomial_rat(&(c - &bk), n - k)
                })
                .sum();
            Value::Rat(sum)
        },
        move |p| {
            let HagenRotheCase { a, c, n, .. } = &cases_rhs[p[0] as usize];
            Value::Rat(binomial_rat(&(a + c), *n))
        },
        Box::new(move |p| {
            let case = &cases_desc[p[0] as usize];
            vec![
                bind("case", p[0]),
                bind("a", &case.a),
                bind("b", case.b),
                bind("c", &case.c),
                bind("n", case.n),
            ]
        }),
    ))
}

/// `sum_{m=k}^{floor(n/2)} C(n, 2m) C(m, k) = 2^(n-2k-1) C(n-k, k) n/(n-k)` for
/// `n >= 1`, `0 <= k <= floor(n/2)`.
pub fn gould_3_120(n_max: u32) -> Identity {
    let points = (1..=n_max as i64)
        .flat_map(|n| (0..=n / 2).map(move |k| vec![n, k]))
        .collect();
    Identity::new(
        "gould-3-120",
        format!("1<=n<={n_max}, 0<=k<=floor(n/2)"),
        points,
        |p| {
            let (n, k) = (p[0], p[1]);
            ratv(
                (k..=n / 2)
                    .map(|m| binomial_int(n, 2 * m) * binomial_int(m, k))
                    .sum(),
            )
        },
        |p| {
            let (n, k) = (p[0], p[1]);
            // 2^(n-2k-1) may be 1/2 when n = 2k
            let two_pow = rat_pow(&rat(2, 1), u(n - 2 * k)) / rat(2, 1);
            Value::Rat(two_pow * Rat::from_integer(binomial_int(n - k, k)) * rat(n, n - k))
        },
        named(&["n", "k"]),
    )
}

/// `P_n(x, -1/2) = 1/(2^(n-1) (n-1)!) sum_k (-1)^(n-k) (k-1)! x^k b(n, k)`.
pub fn moment_bessel_form(n_max: u32) -> Identity {
    Identity::new(
        "moment-bessel-form",
        format!("1<=n<={n_max}"),
        (1..=n_max as i64).map(|n| vec![n]).collect(),
        |p| Value::Poly(pn_skew_bm(u(p[0])).expect("n >= 1")),
        |p| {
            let n = u(p[0]);
            let coeffs = (0..=n as i64)
                .map(|k| {
                    if k == 0 {
                        return Rat::zero();
                    }
                    Rat::from_integer(
                        Int::from(sign_pow(n as i64 - k))
                            * factorial(u(k - 1))
                            * bessel_first(n, k),
                    )
                })
                .collect();
            let scale = Rat::new(Int::one(), int_pow(2, n - 1) * factorial(n - 1));
            Value::Poly(UniPoly::from_coeffs(coeffs).scale(&scale))
        },
        named(&["n"]),
    )
}

/// `x theta_{n-1}(x) = sum_{k=1}^{n} (-1)^(n-k) x^k b(n, k)`.
pub fn theta_b(n_max: u32) -> Identity {
    Identity::new(
        "theta-b",
        format!("1<=n<={n_max}"),
        (1..=n_max as i64).map(|n| vec![n]).collect(),
        |p| Value::Poly(reverse_bessel_poly(u(p[0] - 1)).shift(1)),
        |p| {
            let n = p[0];
            let coeffs = (0..=n)
                .map(|k| Rat::from_integer(Int::from(sign_pow(n - k)) * bessel_first(u(n), k)))
                .collect();
            Value::Poly(UniPoly::from_coeffs(coeffs))
        },
        named(&["n"]),
    )
}

/// `X (X+1) ... (X+n-1) = sum_k [n k] X^k`.
pub fn rising_factorial(t: &Tables, n_max: u32) -> Identity {
    let t = t.clone();
    Identity::new(
        "rising-factorial",
        format!("0<=n<={n_max}"),
        (0..=n_max as i64).map(|n| vec![n]).collect(),
        |p| Value::Poly(rising_factorial_poly(u(p[0]))),
        move |p| {
            let n = u(p[0]);
            Value::Poly(UniPoly::from_coeffs(
                (0..=n as i64)
                    .map(|k| Rat::from_integer(t.stirling1(n, k)))
                    .collect(),
            ))
        },
        named(&["n"]),
    )
}

/// `sum_k {n k} X (X-1) ... (X-k+1) = X^n`.
pub fn falling_factorial(t: &Tables, n_max: u32) -> Identity {
    let t = t.clone();
    Identity::new(
        "falling-factorial",
        format!("0<=n<={n_max}"),
        (0..=n_max as i64).map(|n| vec![n]).collect(),
        move |p| {
            let n = u(p[0]);
            Value::Poly((0..=n).fold(UniPoly::zero(), |acc, k| {
                &acc + &falling_factorial_poly(k)
                    .scale(&Rat::from_integer(t.stirling2(n, k as i64)))
            }))
        },
        |p| Value::Poly(UniPoly::monomial(Rat::one(), p[0] as usize)),
        named(&["n"]),
    )
}

/// Builds the identity registered under `id` with its default parameters.
pub fn build(id: &str, t: &Tables, n_max: u32) -> Result<Identity> {
    Ok(match id {
        "lemma1" => lemma1(n_max),
        "special-z" => special_z(n_max),
        "z-minus2-tail" => z_minus2_tail(n_max),
        "thm1" => thm1(t, n_max),
        "thm2" => thm2(t, n_max),
        "inversion" => inversion(t, n_max),
        "lah" => lah_identity(t, n_max),
        "bessel-duality" => bessel_duality(n_max),
        "bessel-cross" => bessel_cross(n_max),
        "gs-specializations" => gs_specializations(t, n_max),
        "gs-scaling" => gs_scaling(n_max),
        "gs-composition" => gs_composition(n_max, &default_composition_triples())?,
        "sss2" => sss2(t, n_max, &default_sss2_z())?,
        "gs-moment-form" => gs_moment_form(n_max, &default_moment_z())?,
        "lemma-keys" => lemma_keys(t, n_max),
        "hagen-rothe" => hagen_rothe(&default_hagen_rothe_cases(n_max))?,
        "gould-3-120" => gould_3_120(n_max),
        "moment-bessel-form" => moment_bessel_form(n_max),
        "theta-b" => theta_b(n_max),
        "rising-factorial" => rising_factorial(t, n_max),
        "falling-factorial" => falling_factorial(t, n_max),
        other => return Err(Error::Usage(format!("unknown identity id {other:?}"))),
    })
}

/// Runs the selected identities over `n_max`, reporting in registry order.
pub fn run_suite<S: AsRef<str>>(
    t: &Tables,
    n_max: u32,
    selection: &[S],
) -> Result<Vec<IdentityReport>> {
    if selection.is_empty() {
        return Err(Error::Usage("empty identity selection".into()));
    }
    for id in selection {
        if !ALL_IDS.contains(&id.as_ref()) {
            return Err(Error::Usage(format!(
                "unknown identity id {:?}",
                id.as_ref()
            )));
        }
    }
    ALL_IDS
        .iter()
        .filter(|id| selection.iter().any(|s| s.as_ref() == **id))
        .map(|id| build(id, t, n_max).map(|identity| identity.verify()))
        .collect()
}

pub fn verify_thm1(n_max: u32) -> IdentityReport {
    thm1(&Tables::new(n_max), n_max).verify()
}

pub fn verify_thm2(n_max: u32) -> IdentityReport {
    thm2(&Tables::new(n_max), n_max).verify()
}

pub fn verify_inversion(n_max: u32) -> IdentityReport {
    inversion(&Tables::new(n_max), n_max).verify()
}

pub fn verify_lah(n_max: u32) -> IdentityReport {
    lah_identity(&Tables::new(n_max), n_max).verify()
}

pub fn verify_bessel_duality(n_max: u32) -> IdentityReport {
    bessel_duality(n_max).verify()
}

pub fn verify_gs_composition(n_max: u32, triples: &[(Rat, Rat, Rat)]) -> Result<IdentityReport> {
    Ok(gs_composition(n_max, triples)?.verify())
}

pub fn verify_sss2(n_max: u32, z_values: &[Rat]) -> Result<IdentityReport> {
    Ok(sss2(&Tables::new(n_max), n_max, z_values)?.verify())
}

pub fn verify_lemma_keys(n_max: u32) -> IdentityReport {
    lemma_keys(&Tables::new(n_max + 1), n_max).verify()
}

pub fn verify_hagen_rothe(cases: &[HagenRotheCase]) -> Result<IdentityReport> {
    Ok(hagen_rothe(cases)?.verify())
}

pub fn verify_gould_3_120(n_max: u32) -> IdentityReport {
    gould_3_120(n_max).verify()
}

pub fn verify_moment_bessel_form(n_max: u32) -> IdentityReport {
    moment_bessel_form(n_max).verify()
}
