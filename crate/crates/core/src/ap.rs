//! Arithmetic-progression predicates, witness search and the covering verifier.

use std::fmt;

use bitvec::prelude::*;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sets larger than this are never enumerated element by element.
pub const ENUMERATION_BOUND: u64 = 1_000_000_000;

/// Largest `range_hi` for which [`verify_covering`] materializes a bitmap.
/// Above it the verifier queries the membership predicate directly.
pub const INDEX_LIMIT: u64 = 1 << 32;

/// A set of nonnegative integers, queried by membership.
///
/// Explicit sequences, closed-form constructions and plain closures all
/// implement this, so a single verifier serves every kind of set.
pub trait IntegerSet: Sync {
    fn contains(&self, n: u64) -> bool;

    /// `|A ∩ [0, n]|`. The default enumerates and refuses past
    /// [`ENUMERATION_BOUND`].
    fn count_up_to(&self, n: u64) -> Result<u64> {
        if n > ENUMERATION_BOUND {
            return Err(Error::EnumerationBound {
                n,
                bound: ENUMERATION_BOUND,
            });
        }
        Ok((0..=n)
            .into_par_iter()
            .filter(|&m| self.contains(m))
            .count() as u64)
    }
}

impl<F> IntegerSet for F
where
    F: Fn(u64) -> bool + Sync,
{
    fn contains(&self, n: u64) -> bool {
        self(n)
    }
}

/// Strictly increasing sequence of nonnegative integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct NaturalSequence(Vec<u64>);

impl NaturalSequence {
    pub fn new(elements: Vec<u64>) -> Result<Self> {
        if let Some(i) = elements.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing { index: i + 1 });
        }
        Ok(Self(elements))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Every integer in `lo..=hi`.
    pub fn interval(lo: u64, hi: u64) -> Self {
        Self((lo..=hi).collect())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    /// Appends a new maximum.
    pub(crate) fn push(&mut self, value: u64) {
        debug_assert!(self.max().is_none_or(|m| m < value));
        self.0.push(value);
    }

    /// Elements strictly below `bound`.
    pub fn below(&self, bound: u64) -> &[u64] {
        &self.0[..self.0.partition_point(|&x| x < bound)]
    }

    pub fn truncated(&self, max_value: u64) -> Self {
        Self(self.0[..self.0.partition_point(|&x| x <= max_value)].to_vec())
    }

    /// Parses one decimal integer per line. Blank lines and lines starting
    /// with `#` are skipped; values must be strictly increasing.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut out: Vec<u64> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let value: u64 = line.parse().map_err(|e| Error::Parse {
                line: i + 1,
                message: format!("{line:?}: {e}"),
            })?;
            if let Some(&last) = out.last() {
                if value <= last {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: format!("{value} does not exceed previous value {last}"),
                    });
                }
            }
            out.push(value);
        }
        Ok(Self(out))
    }

    /// One value per line, LF terminated.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.0.len() * 8);
        for v in &self.0 {
            s.push_str(&v.to_string());
            s.push('\n');
        }
        s
    }
}

impl TryFrom<Vec<u64>> for NaturalSequence {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<NaturalSequence> for Vec<u64> {
    fn from(s: NaturalSequence) -> Self {
        s.0
    }
}

impl IntegerSet for NaturalSequence {
    fn contains(&self, n: u64) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    fn count_up_to(&self, n: u64) -> Result<u64> {
        Ok(self.0.partition_point(|&x| x <= n) as u64)
    }
}

/// A k-term progression `start, start + diff, ..., start + (length-1)*diff`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ApWitness {
    pub start: u64,
    pub diff: u64,
    pub length: usize,
}

impl ApWitness {
    pub fn last(&self) -> u64 {
        self.start + (self.length as u64 - 1) * self.diff
    }

    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length as u64).map(move |i| self.start + i * self.diff)
    }

    /// Checks the witness certifies `n`: it ends at `n`, has positive
    /// difference and every earlier term belongs to `set`.
    pub fn certifies<S: IntegerSet + ?Sized>(&self, set: &S, n: u64) -> bool {
        self.length >= 3
            && self.diff >= 1
            && self.last() == n
            && self.terms().take(self.length - 1).all(|t| set.contains(t))
    }
}

impl fmt::Display for ApWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i (i<{})", self.start, self.diff, self.length)
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidK { k, min: 3 });
    }
    Ok(())
}

/// Whether `n - i*d` lies in `set` for every `i` in `from..k`.
fn tail_in<S: IntegerSet + ?Sized>(set: &S, n: u64, d: u64, from: usize, k: usize) -> bool {
    (from as u64..k as u64).all(|i| set.contains(n - i * d))
}

/// True iff `seq` contains no k-term progression with positive difference.
pub fn is_k_ap_free(seq: &NaturalSequence, k: usize) -> Result<bool> {
    check_k(k)?;
    let s = seq.as_slice();
    for (j, &last) in s.iter().enumerate() {
        for &prev in s[..j].iter().rev() {
            let d = last - prev;
            if d > last / (k as u64 - 1) {
                break;
            }
            if tail_in(seq, last, d, 2, k) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The progression, if any, that `candidate` would complete on top of `seq`.
///
/// `candidate` must exceed `max(seq)`. The smallest difference wins.
pub fn extends_to_kap(
    seq: &NaturalSequence,
    candidate: u64,
    k: usize,
) -> Result<Option<ApWitness>> {
    check_k(k)?;
    if let Some(max) = seq.max() {
        if candidate <= max {
            return Err(Error::CandidateNotAboveMax { candidate, max });
        }
    }
    let dmax = candidate / (k as u64 - 1);
    for &prev in seq.as_slice().iter().rev() {
        let d = candidate - prev;
        if d > dmax {
            break;
        }
        if tail_in(seq, candidate, d, 2, k) {
            return Ok(Some(ApWitness {
                start: candidate - (k as u64 - 1) * d,
                diff: d,
                length: k,
            }));
        }
    }
    Ok(None)
}

/// Searches `d = 1..=n/(k-1)` in order for a progression ending at `n` whose
/// other `k-1` terms satisfy `set`.
pub fn find_cover_witness<S: IntegerSet + ?Sized>(set: &S, n: u64, k: usize) -> Option<ApWitness> {
    if k < 2 {
        return None;
    }
    let dmax = n / (k as u64 - 1);
    (1..=dmax)
        .find(|&d| tail_in(set, n, d, 1, k))
        .map(|d| ApWitness {
            start: n - (k as u64 - 1) * d,
            diff: d,
            length: k,
        })
}

/// Bitmap of a set over `[0, hi]` for fast repeated witness queries.
pub struct CoverIndex {
    bits: BitVec<u64, Lsb0>,
}

impl CoverIndex {
    pub fn build<S: IntegerSet + ?Sized>(set: &S, hi: u64) -> Self {
        let len = hi.checked_add(1).expect("index bound below u64::MAX");
        let words = len.div_ceil(64) as usize;
        let mut raw = vec![0u64; words];
        raw.par_iter_mut().enumerate().for_each(|(w, word)| {
            let base = w as u64 * 64;
            for bit in 0..64 {
                let n = base + bit;
                if n < len && set.contains(n) {
                    *word |= 1 << bit;
                }
            }
        });
        let mut bits = BitVec::from_vec(raw);
        bits.truncate(len as usize);
        Self { bits }
    }

    pub fn hi(&self) -> u64 {
        self.bits.len() as u64 - 1
    }

    pub fn contains(&self, n: u64) -> bool {
        self.bits.get(n as usize).is_some_and(|b| *b)
    }

    /// Same answer as [`find_cover_witness`], found by walking set members
    /// below `n` downward (so differences come out in increasing order).
    pub fn witness(&self, n: u64, k: usize) -> Option<ApWitness> {
        if k < 2 || n > self.hi() {
            return None;
        }
        let dmax = n / (k as u64 - 1);
        if dmax == 0 {
            return None;
        }
        let lowest = n - dmax;
        for prev in self.bits[lowest as usize..n as usize].iter_ones().rev() {
            let d = n - (lowest + prev as u64);
            if (2..k as u64).all(|i| self.bits[(n - i * d) as usize]) {
                return Some(ApWitness {
                    start: n - (k as u64 - 1) * d,
                    diff: d,
                    length: k,
                });
            }
        }
        None
    }
}

/// Outcome of sweeping `[range_lo, range_hi]` for covering witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub range_lo: u64,
    pub range_hi: u64,
    pub k: usize,
    /// Every n in range with no witness, ascending.
    pub failures: Vec<u64>,
    /// Number of n for which a witness was found and re-validated.
    pub witnesses_checked: u64,
}

impl CoverReport {
    pub fn is_covered(&self) -> bool {
        self.failures.is_empty()
    }
}

/// [`verify_covering_jobs`] on the global thread pool.
pub fn verify_covering<S: IntegerSet + ?Sized>(
    set: &S,
    k: usize,
    range_lo: u64,
    range_hi: u64,
) -> Result<CoverReport> {
    verify_covering_jobs(set, k, range_lo, range_hi, 0)
}

/// Lists every `n` in `[range_lo, range_hi]` that is not the last term of a
/// k-term progression with its other terms in `set`.
///
/// The range is split into `jobs` contiguous parts (0 means one per rayon
/// thread); the report does not depend on the split.
pub fn verify_covering_jobs<S: IntegerSet + ?Sized>(
    set: &S,
    k: usize,
    range_lo: u64,
    range_hi: u64,
    jobs: usize,
) -> Result<CoverReport> {
    check_k(k)?;
    if range_lo > range_hi {
        return Err(Error::Precondition(format!(
            "empty range [{range_lo}, {range_hi}]"
        )));
    }
    let index = (range_hi <= INDEX_LIMIT).then(|| CoverIndex::build(set, range_hi));
    let sweep = |lo: u64, hi: u64| -> (Vec<u64>, u64) {
        let mut failures = Vec::new();
        let mut found = 0u64;
        for n in lo..=hi {
            let w = match &index {
                Some(ix) => ix.witness(n, k),
                None => find_cover_witness(set, n, k),
            };
            match w {
                Some(w) if w.certifies(set, n) => found += 1,
                _ => failures.push(n),
            }
        }
        (failures, found)
    };

    let parts = if jobs == 0 {
        rayon::current_num_threads()
    } else {
        jobs
    }
    .max(1) as u64;
    let span = range_hi - range_lo + 1;
    let step = span.div_ceil(parts).max(1);
    let chunks: Vec<(u64, u64)> = (0..parts)
        .filter_map(|p| {
            let lo = range_lo.checked_add(p.checked_mul(step)?)?;
            (lo <= range_hi).then(|| (lo, lo.saturating_add(step - 1).min(range_hi)))
        })
        .collect();

    let run = || {
        chunks
            .par_iter()
            .map(|&(lo, hi)| sweep(lo, hi))
            .collect::<Vec<_>>()
    };
    let results = if jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run())
    };

    let mut failures = Vec::new();
    let mut witnesses_checked = 0;
    for (f, c) in results {
        failures.extend(f);
        witnesses_checked += c;
    }
    Ok(CoverReport {
        range_lo,
        range_hi,
        k,
        failures,
        witnesses_checked,
    })
}
