//! Counting functions `A(n)` and normalized ratio tables
//! `A(n) / (n^alpha · (ln n)^beta)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ap::IntegerSet;
use crate::error::{Error, Result};
use crate::FORMAT_VERSION;

/// Attached to every report whose subject is a limit as `n -> ∞`.
pub const ASYMPTOTIC_NOTE: &str = "asymptotic claim — checkpoint evidence only";

pub const CSV_HEADER: &str = "n,count,ratio,alpha,beta";

/// Exponents of the normalization `n^alpha · (ln n)^beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub alpha: f64,
    pub beta: f64,
}

impl Normalization {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn sqrt() -> Self {
        Self::new(0.5, 0.0)
    }

    /// `(ln n)^(1/(k-1)) · n^((k-2)/(k-1))`.
    pub fn growth(k: usize) -> Self {
        let k = k as f64;
        Self::new((k - 2.0) / (k - 1.0), 1.0 / (k - 1.0))
    }

    pub fn denominator(&self, n: u64) -> f64 {
        let x = n as f64;
        let mut d = x.powf(self.alpha);
        if self.beta != 0.0 {
            d *= x.ln().powf(self.beta);
        }
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub n: u64,
    pub count: u64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityTable {
    pub normalization: Normalization,
    pub rows: Vec<DensityRow>,
}

impl DensityTable {
    pub fn to_csv(&self) -> String {
        let Normalization { alpha, beta } = self.normalization;
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{alpha},{beta}\n", r.n, r.count, r.ratio));
        }
        out
    }

    /// `{"params": ..., "rows": [...], "version": ...}` with sorted keys.
    pub fn to_json_value(&self, params: Value) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "count": r.count,
                    "ratio": r.ratio,
                    "alpha": self.normalization.alpha,
                    "beta": self.normalization.beta,
                })
            })
            .collect();
        json!({ "params": params, "rows": rows, "version": FORMAT_VERSION })
    }
}

/// `|A ∩ [0, n]|`, using the set's own counter when it has one.
pub fn count_up_to<S: IntegerSet + ?Sized>(set: &S, n: u64) -> Result<u64> {
    set.count_up_to(n)
}

fn check_ascending(checkpoints: &[u64]) -> Result<()> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "checkpoints must be strictly ascending".into(),
        ));
    }
    Ok(())
}

pub fn ratio_series<S: IntegerSet + ?Sized>(
    set: &S,
    checkpoints: &[u64],
    normalization: Normalization,
) -> Result<DensityTable> {
    check_ascending(checkpoints)?;
    let rows = checkpoints
        .par_iter()
        .map(|&n| {
            let denom = normalization.denominator(n);
            if !(denom.is_finite() && denom > 0.0) {
                return Err(Error::Precondition(format!(
                    "normalization n^{} (ln n)^{} is not positive at n = {n}",
                    normalization.alpha, normalization.beta
                )));
            }
            let count = set.count_up_to(n)?;
            Ok(DensityRow {
                n,
                count,
                ratio: count as f64 / denom,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityTable {
        normalization,
        rows,
    })
}

/// `sqrt(2n - 2n0 + 1/4) + 1/2`, the least `A(n)` an AP_3-covering set with
/// threshold `n0` can have: each `n0 < m <= n` needs its own pair below `m`.
/// Zero when `n < n0`.
pub fn covering_lower_bound(n: u64, n0: u64) -> f64 {
    let radicand = 2.0 * n as f64 - 2.0 * n0 as f64 + 0.25;
    if radicand < 0.0 {
        0.0
    } else {
        radicand.sqrt() + 0.5
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundRow {
    pub n: u64,
    pub count: u64,
    pub bound: f64,
    pub pass: bool,
}

/// Checks `A(n) >= covering_lower_bound(n, n0)` at each checkpoint.
pub fn gerver_ramsey_check<S: IntegerSet + ?Sized>(
    set: &S,
    n0: u64,
    checkpoints: &[u64],
) -> Result<Vec<LowerBoundRow>> {
    checkpoints
        .par_iter()
        .map(|&n| {
            let count = set.count_up_to(n)?;
            let bound = covering_lower_bound(n, n0);
            Ok(LowerBoundRow {
                n,
                count,
                bound,
                pass: count as f64 >= bound,
            })
        })
        .collect()
}

/// For each row, the minimum and maximum ratio from that row to the end of
/// the table.
pub fn subsequence_extremes(table: &DensityTable) -> Result<Vec<(f64, f64)>> {
    if table.rows.is_empty() {
        return Err(Error::Precondition("empty density table".into()));
    }
    let mut out = vec![(0.0, 0.0); table.rows.len()];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, r) in table.rows.iter().enumerate().rev() {
        lo = lo.min(r.ratio);
        hi = hi.max(r.ratio);
        out[i] = (lo, hi);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ap::NaturalSequence;
    use crate::constructions::BlockSet;

    #[test]
    fn counting_examples() {
        let s = NaturalSequence::new(vec![0, 1, 3, 4]).unwrap();
        assert_eq!(count_up_to(&s, 3).unwrap(), 3);
        assert_eq!(count_up_to(&BlockSet::new(), 16).unwrap(), 8);
        let late = NaturalSequence::new(vec![10, 20]).unwrap();
        assert_eq!(count_up_to(&late, 9).unwrap(), 0);
        let closure = |n: u64| n.is_multiple_of(3);
        assert_eq!(count_up_to(&closure, 9).unwrap(), 4);
        assert!(count_up_to(&closure, 2_000_000_000).is_err());
    }

    #[test]
    fn ratio_rows() {
        let t = ratio_series(&BlockSet::new(), &[16], Normalization::sqrt()).unwrap();
        assert_eq!(
            t.rows,
            vec![DensityRow {
                n: 16,
                count: 8,
                ratio: 2.0
            }]
        );
        let t = ratio_series(&NaturalSequence::empty(), &[10, 20], Normalization::sqrt()).unwrap();
        assert!(t.rows.iter().all(|r| r.ratio == 0.0));
        assert!(ratio_series(&NaturalSequence::empty(), &[20, 10], Normalization::sqrt()).is_err());
        assert!(ratio_series(
            &NaturalSequence::empty(),
            &[1],
            Normalization::new(0.5, 1.0)
        )
        .is_err());
        assert!(ratio_series(&NaturalSequence::empty(), &[0], Normalization::sqrt()).is_err());
    }

    #[test]
    fn csv_layout() {
        let t = DensityTable {
            normalization: Normalization::sqrt(),
            rows: vec![DensityRow {
                n: 16,
                count: 8,
                ratio: 2.0,
            }],
        };
        assert_eq!(t.to_csv(), "n,count,ratio,alpha,beta\n16,8,2,0.5,0\n");
    }

    #[test]
    fn lower_bound_values() {
        assert!((covering_lower_bound(4, 3) - 2.0).abs() < 1e-12);
        assert_eq!(covering_lower_bound(1, 5), 0.0);
        let rows = gerver_ramsey_check(&BlockSet::new(), 3, &[10_000]).unwrap();
        assert_eq!(rows[0].count, 9992);
        assert!((rows[0].bound - (19994.25f64.sqrt() + 0.5)).abs() < 1e-12);
        assert!(rows[0].pass);
    }

    #[test]
    fn extremes() {
        let table = |ratios: &[f64]| DensityTable {
            normalization: Normalization::sqrt(),
            rows: ratios
                .iter()
                .enumerate()
                .map(|(i, &ratio)| DensityRow {
                    n: i as u64 + 1,
                    count: 0,
                    ratio,
                })
                .collect(),
        };
        assert_eq!(
            subsequence_extremes(&table(&[1.5, 1.5, 1.5])).unwrap(),
            vec![(1.5, 1.5); 3]
        );
        assert_eq!(
            subsequence_extremes(&table(&[0.7])).unwrap(),
            vec![(0.7, 0.7)]
        );
        assert_eq!(
            subsequence_extremes(&table(&[3.0, 1.0, 2.0])).unwrap(),
            vec![(1.0, 3.0), (1.0, 2.0), (2.0, 2.0)]
        );
        assert!(subsequence_extremes(&table(&[])).is_err());
    }
}
