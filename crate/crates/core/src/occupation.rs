//! Monte Carlo estimates of the moments of the time skew Brownian motion
//! spends on `[0, inf)` up to time 1, compared with the exact moments
//! `P_n(alpha, -1/2)`.
//!
//! Skew Brownian motion is approximated by a skew simple random walk: from 0
//! the walk steps up with probability `alpha`, elsewhere it steps up or down
//! with probability 1/2. The unit interval `[i, i+1)` counts as time on the
//! nonnegative side when the linear interpolation of the walk is nonnegative
//! on it, i.e. when `S_i + S_{i+1} > 0`. Each excursion from zero is thereby
//! assigned to one side, positive with probability `alpha`, which is exactly
//! the excursion structure of skew Brownian motion; at `alpha = 1/2` the
//! occupation fraction is symmetric about 1/2 for every walk length.
//!
//! Path `i` draws from ChaCha8 stream `i` of the configured seed, and
//! per-path counts are merged as an integer histogram, so results do not
//! depend on how paths are spread over threads.

use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{rat_pow, Int, Rat};
use crate::polyengine::pn_skew_bm;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    /// Skewness: probability of leaving 0 upwards.
    pub alpha: f64,
    /// Walk length `N`; one step is `1/N` time units.
    pub steps: u64,
    pub paths: u64,
    pub max_moment: u32,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.steps == 0 || self.paths == 0 || self.max_moment == 0 {
            return Err(Error::Domain(
                "steps, paths and max_moment must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn rat_string<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRecord {
    pub n: u32,
    pub empirical_mean: f64,
    /// Absent with fewer than two paths.
    #[serde(rename = "stderr")]
    pub standard_error: Option<f64>,
    #[serde(serialize_with = "rat_string")]
    pub exact: Rat,
    pub exact_value: f64,
    /// `(empirical_mean - exact) / stderr`; absent when the standard error is absent or zero.
    pub z_score: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimResult {
    pub config: SimConfig,
    /// Time horizon `t`; moments estimate `E[A_t^n]`.
    #[serde(serialize_with = "rat_string")]
    pub horizon: Rat,
    /// Walk steps simulated per path, `floor(t * steps)`.
    pub horizon_steps: u64,
    pub paths: u64,
    pub moments: Vec<MomentRecord>,
    /// `histogram[c]` counts paths with `c` nonnegative unit intervals.
    #[serde(skip)]
    pub histogram: Vec<u64>,
}

impl SimResult {
    /// True when every available z-score is below `bound` in magnitude.
    pub fn within(&self, bound: f64) -> bool {
        self.moments
            .iter()
            .filter_map(|m| m.z_score)
            .all(|z| z.abs() < bound)
    }

    /// Fraction of paths whose occupation fraction exceeds `level`.
    pub fn fraction_above(&self, level: f64) -> f64 {
        let n = self.config.steps as f64;
        let above: u64 = self
            .histogram
            .iter()
            .enumerate()
            .filter(|(c, _)| *c as f64 / n > level)
            .map(|(_, h)| h)
            .sum();
        above as f64 / self.paths as f64
    }

    /// CSV with header `n,empirical_mean,stderr,exact,z_score`; absent values are empty.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("n,empirical_mean,stderr,exact,z_score\n");
        for m in &self.moments {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                m.n,
                m.empirical_mean,
                opt(m.standard_error),
                m.exact_value,
                opt(m.z_score)
            ));
        }
        out
    }
}

/// Random stream for path `path` under `seed`.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

/// `P(next_u64() < threshold) = alpha` up to 2^-64.
fn up_threshold(alpha: f64) -> u64 {
    (alpha * 18_446_744_073_709_551_616.0) as u64
}

/// Number of unit intervals among the first `steps` on which the walk is
/// nonnegative.
fn nonnegative_intervals(threshold: u64, steps: u64, rng: &mut impl RngCore) -> u64 {
    let mut pos: i64 = 0;
    let mut count = 0u64;
    let mut bits = 0u64;
    let mut left = 0u32;
    let mut remaining = steps;
    while remaining > 0 {
        // 64 steps from |pos| >= 64 cannot cross zero, so the whole block
        // lands on one side.
        if pos.abs() >= 64 && remaining >= 64 {
            let ups = rng.next_u64().count_ones() as i64;
            if pos > 0 {
                count += 64;
            }
            pos += 2 * ups - 64;
            remaining -= 64;
            continue;
        }
        let up = if pos == 0 {
            i64::from(rng.next_u64() < threshold)
        } else {
            if left == 0 {
                bits = rng.next_u64();
                left = 64;
            }
            let b = (bits & 1) as i64;
            bits >>= 1;
            left -= 1;
            b
        };
        let next = pos + 2 * up - 1;
        count += u64::from(pos + next > 0);
        pos = next;
        remaining -= 1;
    }
    count
}

/// Occupation fraction of `[0, inf)` for one skew walk of `steps` steps.
pub fn simulate_skew_walk(alpha: f64, steps: u64, rng: &mut impl RngCore) -> f64 {
    nonnegative_intervals(up_threshold(alpha), steps, rng) as f64 / steps as f64
}

const PATHS_PER_CHUNK: u64 = 1024;

/// Histogram over all paths of the nonnegative-interval count after `horizon_steps` steps.
pub fn occupation_histogram(config: &SimConfig, horizon_steps: u64) -> Vec<u64> {
    let threshold = up_threshold(config.alpha);
    let chunks = config.paths.div_ceil(PATHS_PER_CHUNK);
    let empty = || vec![0u64; horizon_steps as usize + 1];
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut hist = empty();
            let end = ((chunk + 1) * PATHS_PER_CHUNK).min(config.paths);
            for path in chunk * PATHS_PER_CHUNK..end {
                let mut rng = path_rng(config.seed, path);
                hist[nonnegative_intervals(threshold, horizon_steps, &mut rng) as usize] += 1;
            }
            hist
        })
        .reduce(empty, |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        })
}

fn run(config: &SimConfig, horizon: &Rat) -> Result<SimResult> {
    config.validate()?;
    if *horizon <= Rat::zero() || *horizon > Rat::one() {
        return Err(Error::Domain(format!(
            "time horizon must lie in (0, 1], got {horizon}"
        )));
    }
    let horizon_steps = (horizon * Rat::from_integer(Int::from(config.steps)))
        .floor()
        .to_integer()
        .to_u64()
        .expect("horizon steps fit in u64");
    if horizon_steps == 0 {
        return Err(Error::Domain(format!(
            "time horizon {horizon} is shorter than one step of {}",
            config.steps
        )));
    }
    let histogram = occupation_histogram(config, horizon_steps);
    let alpha = Rat::from_float(config.alpha).expect("alpha is finite");
    let m = config.paths as f64;
    let unit = config.steps as f64;
    let mut moments = Vec::with_capacity(config.max_moment as usize);
    for n in 1..=config.max_moment {
        let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
        for (c, &h) in histogram.iter().enumerate() {
            if h == 0 {
                continue;
            }
            let v = (c as f64 / unit).powi(n as i32);
            sum += h as f64 * v;
            sum_sq += h as f64 * v * v;
        }
        let mean = sum / m;
        let standard_error = (config.paths >= 2).then(|| {
            let var = ((sum_sq - m * mean * mean) / (m - 1.0)).max(0.0);
            (var / m).sqrt()
        });
        let exact = pn_skew_bm(n)?.eval(&alpha) * rat_pow(horizon, n);
        let exact_value = exact.to_f64().expect("exact moment converts to f64");
        let z_score = standard_error
            .filter(|se| *se > 0.0)
            .map(|se| (mean - exact_value) / se);
        moments.push(MomentRecord {
            n,
            empirical_mean: mean,
            standard_error,
            exact,
            exact_value,
            z_score,
        });
    }
    Ok(SimResult {
        config: config.clone(),
        horizon: horizon.clone(),
        horizon_steps,
        paths: config.paths,
        moments,
        histogram,
    })
}

/// Moments `E[A_1^n]`, `n = 1..=max_moment`, against `P_n(alpha, -1/2)`.
pub fn estimate_moments(config: &SimConfig) -> Result<SimResult> {
    run(config, &Rat::one())
}

/// Moments of `A_t` from the same paths cut at `floor(t * steps)` steps,
/// against `t^n P_n(alpha, -1/2)`.
pub fn self_similarity_check(config: &SimConfig, t: &Rat) -> Result<SimResult> {
    run(config, t)
}
