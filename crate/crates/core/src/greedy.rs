//! Greedy sequences: Stanley sequences of order k, the generalized
//! `n != k*b - a` rule seeded by a single element, and the closed-form
//! interval chain that describes the latter.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::ap::{extends_to_kap, is_k_ap_free, IntegerSet, NaturalSequence};
use crate::error::{Error, Result};

/// Where a greedy generation stops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    /// Total number of terms, seed included.
    Count(usize),
    /// Largest admissible value.
    MaxValue(u64),
}

/// Smallest `a > max(seq)` that keeps `seq ∪ {a}` free of k-term progressions.
/// An empty sequence continues with 0.
pub fn stanley_next(seq: &NaturalSequence, k: usize) -> Result<u64> {
    let Some(max) = seq.max() else {
        return Ok(0);
    };
    let mut candidate = max;
    loop {
        candidate = candidate
            .checked_add(1)
            .ok_or(Error::Overflow("next Stanley term exceeds u64"))?;
        if extends_to_kap(seq, candidate, k)?.is_none() {
            return Ok(candidate);
        }
    }
}

/// Extends `seed` greedily until `limit`.
///
/// Forbidden values are tracked incrementally: when `x` is appended, every
/// progression with `x` as its second-to-last term marks its next term.
pub fn stanley_sequence(seed: &NaturalSequence, k: usize, limit: Limit) -> Result<NaturalSequence> {
    if !is_k_ap_free(seed, k)? {
        return Err(Error::InvalidSeed { k });
    }
    let mut out = NaturalSequence::empty();
    let mut forbidden: HashSet<u64> = HashSet::new();
    let done = |out: &NaturalSequence, next: u64| match limit {
        Limit::Count(c) => out.len() >= c,
        Limit::MaxValue(v) => next > v,
    };

    let push = |out: &mut NaturalSequence, forbidden: &mut HashSet<u64>, x: u64| {
        let dmax = x / (k as u64 - 2);
        for &a in out.as_slice().iter().rev() {
            let d = x - a;
            if d > dmax {
                break;
            }
            if (2..k as u64 - 1).all(|i| out.contains(x - i * d)) {
                if let Some(next) = x.checked_add(d) {
                    forbidden.insert(next);
                }
            }
        }
        out.push(x);
    };

    for x in seed.iter() {
        if done(&out, x) {
            return Ok(out);
        }
        push(&mut out, &mut forbidden, x);
    }
    let mut candidate = seed.max().map_or(Some(0), |m| m.checked_add(1));
    loop {
        let Some(c) = candidate else {
            return match limit {
                Limit::MaxValue(_) => Ok(out),
                Limit::Count(_) => Err(Error::Overflow("next Stanley term exceeds u64")),
            };
        };
        if done(&out, c) {
            return Ok(out);
        }
        if !forbidden.remove(&c) {
            push(&mut out, &mut forbidden, c);
        }
        candidate = c.checked_add(1);
    }
}

/// Order-3 admission test: `n` is admitted iff it is not `2b - a` for
/// members `a, b < n`.
pub fn order3_admits(seq: &NaturalSequence, n: u64) -> bool {
    let below = seq.below(n);
    !below.iter().any(|&b| {
        (2 * b)
            .checked_sub(n)
            .is_some_and(|a| below.binary_search(&a).is_ok())
    })
}

/// Output of [`generalized_greedy`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedGreedy {
    pub a0: u64,
    pub k: u64,
    pub sequence: NaturalSequence,
    /// False outside `a0 >= 3, k >= 4`, where the set has no known
    /// interval structure.
    pub structure_guaranteed: bool,
}

/// Maximal runs of consecutive integers, ascending.
#[derive(Default)]
struct Runs(Vec<(u64, u64)>);

impl Runs {
    fn push(&mut self, x: u64) {
        match self.0.last_mut() {
            Some((_, end)) if *end + 1 == x => *end = x,
            _ => self.0.push((x, x)),
        }
    }

    /// Whether `n = k*b - a` for members `a, b` (all members are below `n`).
    fn represents(&self, n: u64, k: u64) -> bool {
        if n == 0 {
            return false;
        }
        let (n, k) = (n as u128, k as u128);
        let runs = &self.0;
        // a = k*b - n must lie in [0, n-1]
        let b_lo = n.div_ceil(k);
        let b_hi = (2 * n - 1) / k;
        let first = runs.partition_point(|&(_, e)| (e as u128) < b_lo);
        for &(s, e) in &runs[first..] {
            let (s, e) = (s as u128, e as u128);
            if s > b_hi {
                break;
            }
            let (s, e) = (s.max(b_lo), e.min(b_hi));
            if s > e {
                continue;
            }
            // a ranges over k*s - n, k*s - n + k, ..., k*e - n
            let (a_lo, a_hi) = (k * s - n, k * e - n);
            let j = runs.partition_point(|&(_, ae)| (ae as u128) < a_lo);
            for &(rs, re) in &runs[j..] {
                let (rs, re) = (rs as u128, re as u128);
                if rs > a_hi {
                    break;
                }
                let lo = rs.max(a_lo);
                let hi = re.min(a_hi);
                if (lo + n).div_ceil(k) <= (hi + n) / k {
                    return true;
                }
            }
        }
        false
    }
}

/// `{a0} ∪ {n > a0 : n != k*b - a for all members a, b < n}` up to `limit`.
///
/// `a = b` is allowed. Membership queries run on the run-length encoding of
/// the prefix, so each step costs a few binary searches per run pair rather
/// than a scan over all member pairs.
pub fn generalized_greedy(a0: u64, k: u64, limit: u64) -> Result<GeneralizedGreedy> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "multiplier k must be at least 2, got {k}"
        )));
    }
    let mut runs = Runs::default();
    let mut sequence = NaturalSequence::empty();
    if a0 <= limit {
        runs.push(a0);
        sequence.push(a0);
        for n in a0 + 1..=limit {
            if !runs.represents(n, k) {
                runs.push(n);
                sequence.push(n);
            }
        }
    }
    Ok(GeneralizedGreedy {
        a0,
        k,
        sequence,
        structure_guaranteed: a0 >= 3 && k >= 4,
    })
}

/// The union of closed intervals `[a_l, b_l]` given by
/// `b_0 = ⌊k·a0/2⌋`, `a_l = k·b_{l-1} - a0 + 1`, `b_l = ⌊k·a_l/2⌋`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalChain {
    pub a0: u64,
    pub k: u64,
    pub intervals: Vec<(u64, u64)>,
}

impl IntervalChain {
    /// The gaps `[b_l + 1, a_{l+1} - 1]` between stored intervals.
    pub fn gaps(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.intervals.windows(2).map(|w| (w[0].1 + 1, w[1].0 - 1))
    }
}

impl IntegerSet for IntervalChain {
    fn contains(&self, n: u64) -> bool {
        interval_chain_member(n, self.a0, self.k).unwrap_or(false)
    }
}

fn check_chain_params(a0: u64, k: u64) -> Result<()> {
    if a0 < 3 || k < 4 {
        return Err(Error::Precondition(format!(
            "interval chain needs a0 >= 3 and k >= 4, got a0={a0}, k={k}"
        )));
    }
    Ok(())
}

/// Iterator over `(a_l, b_l)` in exact arithmetic; ends when a value no
/// longer fits in `u128`.
fn chain(a0: u64, k: u64) -> impl Iterator<Item = (u128, u128)> {
    let (a0, k) = (a0 as u128, k as u128);
    let mut cur = Some((a0, k * a0 / 2));
    std::iter::from_fn(move || {
        let out = cur?;
        cur = k
            .checked_mul(out.1)
            .and_then(|x| x.checked_add(1))
            .map(|x| x - a0)
            .and_then(|a| Some((a, k.checked_mul(a)? / 2)));
        Some(out)
    })
}

/// The first `count` intervals of the chain.
pub fn interval_chain(a0: u64, k: u64, count: usize) -> Result<IntervalChain> {
    check_chain_params(a0, k)?;
    if count == 0 {
        return Err(Error::Precondition(
            "interval count must be at least 1".into(),
        ));
    }
    let mut intervals = Vec::with_capacity(count);
    for (a, b) in chain(a0, k).take(count) {
        let a = u64::try_from(a).map_err(|_| Error::Overflow("interval start exceeds u64"))?;
        let b = u64::try_from(b).map_err(|_| Error::Overflow("interval end exceeds u64"))?;
        intervals.push((a, b));
    }
    if intervals.len() < count {
        return Err(Error::Overflow("interval chain exceeds u128"));
    }
    Ok(IntervalChain { a0, k, intervals })
}

/// Whether `n` lies in some chain interval, found by walking the
/// recurrence until it passes `n`.
pub fn interval_chain_member(n: u64, a0: u64, k: u64) -> Result<bool> {
    check_chain_params(a0, k)?;
    let n = n as u128;
    for (a, b) in chain(a0, k) {
        if a > n {
            return Ok(false);
        }
        if n <= b {
            return Ok(true);
        }
    }
    // chain left u128 while still below n: impossible for n < 2^64
    Err(Error::Overflow("interval chain exceeds u128"))
}
