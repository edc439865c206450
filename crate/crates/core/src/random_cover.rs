//! Seeded simulation of the random AP_k-covering set
//! `P(n ∈ A) = min(1, c·(ln n / n)^(1/(k-1)))`.
//!
//! Each `n` draws its own uniform from a ChaCha8 stream at word position
//! `2n`, keyed by the run seed. Membership of `n` therefore depends only on
//! `(seed, n, c, k)`: samples extend consistently when `n_max` grows, and
//! raising `c` never removes an element.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ap::{verify_covering, IntegerSet, NaturalSequence};
use crate::density::{ratio_series, DensityTable, Normalization};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomCoverParams {
    pub k: usize,
    pub c: f64,
    pub rng_seed: u64,
    pub n_max: u64,
}

impl RandomCoverParams {
    pub fn new(k: usize, c: f64, rng_seed: u64, n_max: u64) -> Result<Self> {
        let p = Self {
            k,
            c,
            rng_seed,
            n_max,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 3 {
            return Err(Error::InvalidK { k: self.k, min: 3 });
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::Precondition(format!(
                "c must be positive, got {}",
                self.c
            )));
        }
        if self.n_max < 2 {
            return Err(Error::Precondition(format!(
                "n_max must be at least 2, got {}",
                self.n_max
            )));
        }
        Ok(())
    }

    /// Inclusion probability of `n`; 0 and 1 are always included.
    pub fn probability(&self, n: u64) -> f64 {
        if n < 2 {
            return 1.0;
        }
        let x = n as f64;
        (self.c * (x.ln() / x).powf(1.0 / (self.k as f64 - 1.0))).min(1.0)
    }
}

/// Smallest `c` with `c^(k-1) / (2k(k-1)) >= 2`, i.e. `(4k(k-1))^(1/(k-1))`.
pub fn default_c(k: usize) -> f64 {
    let k = k as f64;
    (4.0 * k * (k - 1.0)).powf(1.0 / (k - 1.0))
}

/// The uniform in `[0, 1)` assigned to `n` under `seed`.
pub fn uniform_draw(seed: u64, n: u64) -> f64 {
    draw_at(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn draw_at(rng: &mut ChaCha8Rng, n: u64) -> f64 {
    rng.set_word_pos(2 * n as u128);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Samples `A ∩ [0, n_max]`.
pub fn sample_set(params: &RandomCoverParams) -> Result<NaturalSequence> {
    params.validate()?;
    const CHUNK: u64 = 4096;
    let chunks = params.n_max / CHUNK + 1;
    let elements: Vec<u64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK - 1).min(params.n_max);
            let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
            (lo..=hi).filter(move |&n| draw_at(&mut rng, n) < params.probability(n))
        })
        .collect();
    NaturalSequence::new(elements)
}

/// The classes `Y_(n,u) = {n - i·u : 1 <= i <= k-1}` for every integer `u`
/// with `n/(2k) <= u <= n/(2(k-1))`.
pub fn disjoint_difference_classes(n: u64, k: usize) -> Result<Vec<(u64, Vec<u64>)>> {
    if k < 3 {
        return Err(Error::InvalidK { k, min: 3 });
    }
    let k64 = k as u64;
    if n < 2 * k64 {
        return Err(Error::Precondition(format!(
            "need n >= 2k = {}, got {n}",
            2 * k64
        )));
    }
    let lo = n.div_ceil(2 * k64);
    let hi = n / (2 * (k64 - 1));
    Ok((lo..=hi)
        .map(|u| (u, (1..k64).map(|i| n - i * u).collect()))
        .collect())
}

/// Every `n` in the range that no k-term progression with earlier terms in
/// `set` ends at.
pub fn covering_failures<S: IntegerSet + ?Sized>(
    set: &S,
    k: usize,
    range_lo: u64,
    range_hi: u64,
) -> Result<Vec<u64>> {
    Ok(verify_covering(set, k, range_lo, range_hi)?.failures)
}

/// `A(n)` normalized by `(ln n)^(1/(k-1)) · n^((k-2)/(k-1))`.
pub fn growth_report<S: IntegerSet + ?Sized>(
    set: &S,
    k: usize,
    checkpoints: &[u64],
) -> Result<DensityTable> {
    if k < 3 {
        return Err(Error::InvalidK { k, min: 3 });
    }
    ratio_series(set, checkpoints, Normalization::growth(k))
}
