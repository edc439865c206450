//! The two explicit AP_3-covering sets.
//!
//! * [`BlockSet`]: levels `A_k = [n_k + 1, n_k + 2^(n_k+1)] ∪ {m·2^(n_k) : 3 <= m <= 2^(n_k+1) + 2}`
//!   with `n_1 = 1`, `n_(k+1) = 2^(2·n_k + 2)`. Its counting function dips to
//!   about `2·√n` at `n = 2^(2·n_k + 2)`.
//! * [`DigitSet`]: nine shifted copies `i·4^(k-1) + B_k` of the base-4 digit
//!   sets `B_k` (exactly k digits, each 1 or 2). Its counting function stays
//!   below `34·√n`.
//!
//! Both come with the explicit witness pairs `(a, b)`, `2b = a + n`, that
//! certify coverage of every `n`.

use serde::{Deserialize, Serialize};

use crate::ap::{IntegerSet, ENUMERATION_BOUND};
use crate::error::{Error, Result};

fn pow2(e: u64) -> Option<u64> {
    (e < 64).then(|| 1u64 << e)
}

/// `n_k`; level 4 and beyond do not fit in 64 bits.
pub fn block_level_base(k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::Precondition("level index starts at 1".into()));
    }
    let mut nk: u64 = 1;
    for _ in 1..k {
        nk = nk
            .checked_mul(2)
            .and_then(|x| x.checked_add(2))
            .and_then(pow2)
            .ok_or(Error::Overflow("level base n_k exceeds u64"))?;
    }
    Ok(nk)
}

/// Multiples `m·step` for `first_multiplier <= m`, clipped to the `u64` domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipleBlock {
    pub step: u64,
    pub first: u64,
    pub last: u64,
}

impl MultipleBlock {
    fn contains(&self, n: u64) -> bool {
        (self.first..=self.last).contains(&n) && n.is_multiple_of(self.step)
    }

    /// Members inside `[lo, hi]`.
    fn count_in(&self, lo: u64, hi: u64) -> u64 {
        let (lo, hi) = (lo.max(self.first), hi.min(self.last));
        if lo > hi {
            return 0;
        }
        hi / self.step - lo.div_ceil(self.step) + 1
    }
}

/// One level `A_k` of the block construction, clipped to the `u64` domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLevel {
    pub index: u32,
    pub nk: u64,
    /// `[n_k + 1, n_k + 2^(n_k+1)]`, saturated at `u64::MAX`.
    pub interval: (u64, u64),
    /// `None` when even the first multiple is beyond `u64`.
    pub multiples: Option<MultipleBlock>,
}

impl BlockLevel {
    pub fn new(index: u32) -> Result<Self> {
        let nk = block_level_base(index)?;
        let width = pow2(nk + 1).unwrap_or(u64::MAX);
        let interval = (nk + 1, nk.saturating_add(width));
        let multiples = pow2(nk).and_then(|step| {
            let first = step.checked_mul(3)?;
            let m_hi = width.saturating_add(2);
            let last = m_hi.checked_mul(step).unwrap_or(u64::MAX / step * step);
            Some(MultipleBlock { step, first, last })
        });
        Ok(Self {
            index,
            nk,
            interval,
            multiples,
        })
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.interval.0..=self.interval.1).contains(&n)
            || self.multiples.is_some_and(|m| m.contains(n))
    }

    pub fn max(&self) -> u64 {
        self.multiples
            .map_or(self.interval.1, |m| m.last.max(self.interval.1))
    }

    /// `|A_k ∩ [0, n]|`, with the interval/multiple overlap removed.
    pub fn count_up_to(&self, n: u64) -> u64 {
        let (lo, hi) = self.interval;
        let in_interval = if n < lo { 0 } else { n.min(hi) - lo + 1 };
        let Some(m) = self.multiples else {
            return in_interval;
        };
        let overlap = if n < lo { 0 } else { m.count_in(lo, n.min(hi)) };
        in_interval + m.count_in(0, n) - overlap
    }
}

/// All levels with at least one element in the `u64` domain.
pub fn block_levels() -> Vec<BlockLevel> {
    (1..).map_while(|k| BlockLevel::new(k).ok()).collect()
}

/// Block-construction set; membership and counting are pure block
/// arithmetic.
#[derive(Clone, Debug)]
pub struct BlockSet {
    levels: Vec<BlockLevel>,
}

impl Default for BlockSet {
    fn default() -> Self {
        Self::new()
    }
}

impl BlockSet {
    pub fn new() -> Self {
        let levels = block_levels();
        debug_assert!(levels.windows(2).all(|w| w[0].max() < w[1].interval.0));
        Self { levels }
    }

    pub fn levels(&self) -> &[BlockLevel] {
        &self.levels
    }
}

impl IntegerSet for BlockSet {
    fn contains(&self, n: u64) -> bool {
        self.levels
            .iter()
            .take_while(|l| l.interval.0 <= n)
            .any(|l| l.contains(n))
    }

    /// Exact; levels occupy disjoint ranges, so per-level counts add.
    fn count_up_to(&self, n: u64) -> Result<u64> {
        Ok(self.levels.iter().map(|l| l.count_up_to(n)).sum())
    }
}

pub fn block_member(n: u64) -> bool {
    BlockSet::new().contains(n)
}

pub fn block_count(n: u64) -> u64 {
    BlockSet::new()
        .count_up_to(n)
        .expect("block counting is infallible")
}

/// Which branch of the covering argument produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockCase {
    /// `n` inside the level's interval block: `(n-2, n-1)`.
    Consecutive,
    /// `d = 2c - n > n_k`: `(d, c)`.
    Direct,
    /// `d <= n_k`: `(d + 2^(n_k+1), c + 2^(n_k))`.
    Shifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockWitness {
    pub a: u64,
    pub b: u64,
    pub case: BlockCase,
}

/// Witness pair for `n >= 4`, following the case analysis on the level `k`
/// with `n_k + 3 <= n < n_(k+1) + 3`.
pub fn block_witness(n: u64) -> Result<BlockWitness> {
    if n < 4 {
        return Err(Error::Precondition(format!(
            "block witness needs n >= 4, got {n}"
        )));
    }
    let n128 = n as u128;
    let mut k = 1;
    let nk = loop {
        let nk = block_level_base(k)?;
        match block_level_base(k + 1) {
            Ok(next) if n128 >= next as u128 + 3 => k += 1,
            _ => break nk,
        }
    };
    let width = pow2(nk + 1);
    if width.is_none_or(|w| n128 <= nk as u128 + w as u128) {
        return Ok(BlockWitness {
            a: n - 2,
            b: n - 1,
            case: BlockCase::Consecutive,
        });
    }
    // case 2 only happens for levels whose widths fit in u64
    let width = width.unwrap() as u128;
    let half = width / 2;
    let c = half * n128.div_ceil(width);
    let d = 2 * c - n128;
    let (a, b, case) = if d > nk as u128 {
        (d, c, BlockCase::Direct)
    } else {
        (d + width, c + half, BlockCase::Shifted)
    };
    Ok(BlockWitness {
        a: a as u64,
        b: b as u64,
        case,
    })
}

/// Does `m` have exactly `k` base-4 digits, each 1 or 2?
fn in_digit_set(mut m: u128, k: u32) -> bool {
    for _ in 0..k {
        if !matches!(m % 4, 1 | 2) {
            return false;
        }
        m /= 4;
    }
    m == 0
}

/// Smallest and largest member of `B_k`.
pub fn digit_set_bounds(k: u32) -> (u128, u128) {
    let ones = (4u128.pow(k) - 1) / 3;
    (ones, 2 * ones)
}

pub fn digit_member(n: u64) -> bool {
    let n = n as u128;
    let mut k = 1;
    let mut unit: u128 = 1; // 4^(k-1)
    while unit <= n {
        for i in 0..=8u128 {
            let shift = i * unit;
            if shift > n {
                break;
            }
            if in_digit_set(n - shift, k) {
                return true;
            }
        }
        k += 1;
        unit *= 4;
    }
    false
}

/// Witness pair for `n >= 3` from the base-4 digit map
/// `0 -> (2,1), 1 -> (1,1), 2 -> (2,2), 3 -> (1,2)`, applied after shifting
/// `n` into `[3·4^(t-1), 4^t)`.
pub fn digit_witness(n: u64) -> Result<(u64, u64)> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "digit witness needs n >= 3, got {n}"
        )));
    }
    let n = n as u128;
    let mut t = 1u32;
    let mut unit: u128 = 1; // 4^(t-1)
    while n >= 3 * unit * 4 {
        t += 1;
        unit *= 4;
    }
    let shift = (n / unit - 3) * unit;
    let mut rest = n - shift;
    let (mut a, mut b) = (0u128, 0u128);
    let mut place: u128 = 1;
    for _ in 0..t {
        let (ea, eb) = match rest % 4 {
            0 => (2, 1),
            1 => (1, 1),
            2 => (2, 2),
            _ => (1, 2),
        };
        a += ea * place;
        b += eb * place;
        rest /= 4;
        place *= 4;
    }
    debug_assert_eq!(rest, 0);
    Ok(((a + shift) as u64, (b + shift) as u64))
}

/// Sorted, deduplicated members of the digit set in `[0, limit]`.
pub fn digit_elements(limit: u64) -> Vec<u64> {
    let limit = limit as u128;
    let mut out = Vec::new();
    let mut k = 1u32;
    let mut unit: u128 = 1;
    while unit <= limit {
        let (lo, _) = digit_set_bounds(k);
        for i in 0..=8u128 {
            let shift = i * unit;
            if shift + lo > limit {
                break;
            }
            for mask in 0u64..1 << k {
                let mut v = shift;
                let mut place = 1u128;
                for j in 0..k {
                    v += (1 + ((mask >> j) & 1) as u128) * place;
                    place *= 4;
                }
                if v <= limit {
                    out.push(v as u64);
                }
            }
        }
        k += 1;
        unit *= 4;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Exact count of digit-set members in `[0, n]` by enumerating the shifted
/// copies; refuses `n` beyond [`ENUMERATION_BOUND`].
pub fn digit_count(n: u64) -> Result<u64> {
    if n > ENUMERATION_BOUND {
        return Err(Error::EnumerationBound {
            n,
            bound: ENUMERATION_BOUND,
        });
    }
    Ok(digit_elements(n).len() as u64)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DigitSet;

impl IntegerSet for DigitSet {
    fn contains(&self, n: u64) -> bool {
        digit_member(n)
    }

    fn count_up_to(&self, n: u64) -> Result<u64> {
        digit_count(n)
    }
}
