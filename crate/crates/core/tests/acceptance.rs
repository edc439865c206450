//! Acceptance criteria. Run with `cargo test --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use apcover::constructions::{
    block_count, block_level_base, block_member, block_witness, digit_count, digit_elements,
    BlockSet, DigitSet,
};
use apcover::density::{
    gerver_ramsey_check, ratio_series, subsequence_extremes, Normalization, ASYMPTOTIC_NOTE,
};
use apcover::greedy::{
    generalized_greedy, interval_chain, interval_chain_member, stanley_sequence, Limit,
};
use apcover::random_cover::{covering_failures, default_c, sample_set, RandomCoverParams};
use apcover::{is_k_ap_free, verify_covering, IntegerSet, NaturalSequence};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{detail}; took {took:.1?}, limit {limit:?}"));
    }
    Ok(format!("{detail}; {took:.1?}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn interval_chain_equivalence() -> Outcome {
    timed(Duration::from_secs(30), || {
        const N: u64 = 100_000;
        let cases: Vec<(u64, u64)> = (3..=10)
            .flat_map(|a0| (4..=8).map(move |k| (a0, k)))
            .collect();
        let mismatches: Vec<String> = cases
            .par_iter()
            .filter_map(|&(a0, k)| {
                let greedy = generalized_greedy(a0, k, N).ok()?.sequence;
                let closed: Vec<u64> = (0..=N)
                    .filter(|&n| interval_chain_member(n, a0, k).unwrap())
                    .collect();
                (greedy.as_slice() != closed.as_slice()).then(|| format!("a0={a0} k={k}"))
            })
            .collect();
        ensure(mismatches.is_empty(), || {
            format!("mismatch at {mismatches:?}")
        })?;
        Ok(format!("{} (a0, k) pairs agree on [0, {N}]", cases.len()))
    })
}

fn interval_chain_example() -> Outcome {
    let c = interval_chain(3, 4, 3).map_err(|e| e.to_string())?;
    ensure(c.intervals == vec![(3, 6), (22, 44), (174, 348)], || {
        format!("{:?}", c.intervals)
    })?;
    Ok(format!("{:?}", c.intervals))
}

fn block_covering() -> Outcome {
    timed(Duration::from_secs(60), || {
        const HI: u64 = 1_000_000;
        let report = verify_covering(&BlockSet::new(), 3, 4, HI).map_err(|e| e.to_string())?;
        ensure(report.is_covered(), || {
            format!(
                "failures {:?}",
                &report.failures[..report.failures.len().min(10)]
            )
        })?;
        let bad = (4..=HI).into_par_iter().find_any(|&n| {
            let Ok(w) = block_witness(n) else { return true };
            !(w.a < w.b && w.b < n && 2 * w.b == w.a + n && block_member(w.a) && block_member(w.b))
        });
        ensure(bad.is_none(), || {
            format!("invalid proof witness at n={bad:?}")
        })?;
        Ok(format!(
            "[4, {HI}] covered, {} proof witnesses valid",
            HI - 3
        ))
    })
}

fn block_density_subsequence() -> Outcome {
    let mut notes = Vec::new();
    for k in 1..=2u32 {
        let nk = block_level_base(k).map_err(|e| e.to_string())?;
        let checkpoint = 1u64 << (2 * nk + 2);
        let count = block_count(checkpoint);
        let ratio = count as f64 / (1u64 << (nk + 1)) as f64;
        let bound = nk + 2 * (1u64 << (nk + 1));
        ensure(count <= bound, || {
            format!("k={k}: A={count} exceeds {bound}")
        })?;
        match k {
            1 => ensure(count == 8 && ratio == 2.0, || {
                format!("k=1: A={count}, ratio {ratio}")
            })?,
            _ => ensure(count == 262_152 && ratio > 2.0 && ratio < 2.001, || {
                format!("k=2: A={count}, ratio {ratio}")
            })?,
        }
        notes.push(format!(
            "k={k}: A({checkpoint})={count} ratio={ratio:.9} bound={bound}"
        ));
    }
    Ok(notes.join(", "))
}

fn digit_bounds() -> Outcome {
    timed(Duration::from_secs(120), || {
        const HI: u64 = 1_000_000;
        let elems = digit_elements(HI);
        let mut count = 0u64;
        let mut it = elems.iter().peekable();
        let mut worst = 0f64;
        for n in 1..=HI {
            while it.next_if(|&&x| x <= n).is_some() {
                count += 1;
            }
            let r = count as f64 / (n as f64).sqrt();
            worst = worst.max(r);
            ensure(r < 34.0, || format!("A({n}) = {count} >= 34 sqrt(n)"))?;
        }
        for n in [1, 10, 1000, 123_457, HI] {
            let expect = elems.partition_point(|&x| x <= n) as u64;
            ensure(digit_count(n) == Ok(expect), || {
                format!("digit_count({n}) disagrees")
            })?;
        }
        let report = verify_covering(&DigitSet, 3, 3, HI).map_err(|e| e.to_string())?;
        ensure(report.is_covered(), || {
            format!(
                "failures {:?}",
                &report.failures[..report.failures.len().min(10)]
            )
        })?;
        Ok(format!(
            "max A(n)/sqrt(n) on [1, {HI}] = {worst:.4} < 34; [3, {HI}] covered"
        ))
    })
}

fn lower_bound_property() -> Outcome {
    let stanley = stanley_sequence(
        &NaturalSequence::new(vec![0, 1]).unwrap(),
        3,
        Limit::MaxValue(100_000),
    )
    .map_err(|e| e.to_string())?;
    let checkpoints = [1_000, 10_000, 100_000];
    let sets: [(&str, &dyn IntegerSet, u64); 3] = [
        ("blocks", &BlockSet::new(), 3),
        ("digits", &DigitSet, 2),
        ("stanley{0,1}", &stanley, 1),
    ];
    let mut notes = Vec::new();
    for (name, set, n0) in sets {
        let rows = gerver_ramsey_check(set, n0, &checkpoints).map_err(|e| e.to_string())?;
        for r in &rows {
            ensure(r.pass, || {
                format!("{name}: A({}) = {} < {:.2}", r.n, r.count, r.bound)
            })?;
        }
        notes.push(format!(
            "{name} A(1e5)={} >= {:.1}",
            rows[2].count, rows[2].bound
        ));
    }
    Ok(notes.join(", "))
}

fn base3_binary(i: u64) -> u64 {
    let (mut v, mut place, mut i) = (0, 1, i);
    while i > 0 {
        v += (i & 1) * place;
        place *= 3;
        i >>= 1;
    }
    v
}

fn stanley_oracle() -> Outcome {
    let s = stanley_sequence(
        &NaturalSequence::new(vec![0, 1]).unwrap(),
        3,
        Limit::Count(200),
    )
    .map_err(|e| e.to_string())?;
    let oracle: Vec<u64> = (0..200).map(base3_binary).collect();
    ensure(s.as_slice() == oracle.as_slice(), || {
        "first 200 terms differ from base-3 digit oracle".into()
    })?;

    // xorshift-driven seeds: size <= 4, values <= 50
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let (mut runs, mut rejected) = (0, 0);
    for _ in 0..300 {
        let k = 3 + (next() % 3) as usize;
        let size = (next() % 5) as usize;
        let mut seed: Vec<u64> = (0..size).map(|_| next() % 51).collect();
        seed.sort_unstable();
        seed.dedup();
        let seed = NaturalSequence::new(seed).unwrap();
        match stanley_sequence(&seed, k, Limit::MaxValue(1000)) {
            Ok(out) => {
                ensure(is_k_ap_free(&out, k).unwrap(), || {
                    format!("seed {seed:?} k={k} output has a {k}-AP")
                })?;
                runs += 1;
            }
            Err(_) => {
                ensure(!is_k_ap_free(&seed, k).unwrap(), || {
                    format!("valid seed {seed:?} rejected")
                })?;
                rejected += 1;
            }
        }
    }
    Ok(format!("200 terms match; {runs} random greedy runs progression-free, {rejected} invalid seeds rejected"))
}

fn random_cover_simulation() -> Outcome {
    timed(Duration::from_secs(60), || {
        let c = 1.1 * default_c(3);
        let n_max = 100_000u64;
        let norm = (n_max as f64).ln().sqrt() * (n_max as f64).sqrt();
        let per_seed: Vec<(u64, usize, f64)> = (1..=20u64)
            .into_par_iter()
            .map(|seed| {
                let p = RandomCoverParams::new(3, c, seed, n_max).unwrap();
                let set = sample_set(&p).unwrap();
                let failures = covering_failures(&set, 3, 1000, n_max).unwrap().len();
                let ratio = set.count_up_to(n_max).unwrap() as f64 / norm;
                (seed, failures, ratio)
            })
            .collect();
        let mut counts: Vec<usize> = per_seed.iter().map(|r| r.1).collect();
        counts.sort_unstable();
        let median = (counts[9] + counts[10]) as f64 / 2.0;
        let target = 2.0 * c;
        let out_of_band: Vec<u64> = per_seed
            .iter()
            .filter(|r| !(r.2 >= target / 3.0 && r.2 <= target * 3.0))
            .map(|r| r.0)
            .collect();
        let (lo, hi) = per_seed.iter().fold((f64::INFINITY, 0f64), |(lo, hi), r| {
            (lo.min(r.2), hi.max(r.2))
        });
        ensure(median == 0.0, || {
            format!("median failures {median}, distribution {counts:?}")
        })?;
        ensure(out_of_band.is_empty(), || {
            format!("growth ratio outside [2c/3, 6c] for seeds {out_of_band:?}")
        })?;
        Ok(format!(
            "c={c:.4}: failure counts {counts:?} (median {median}); A(1e5)/sqrt(n ln n) in [{lo:.3}, {hi:.3}], 2c={target:.3}"
        ))
    })
}

fn asymptotic_trends() -> Outcome {
    let checkpoints: Vec<u64> = (1..=2)
        .map(|k| 1u64 << (2 * block_level_base(k).unwrap() + 2))
        .collect();
    let table = ratio_series(&BlockSet::new(), &checkpoints, Normalization::sqrt())
        .map_err(|e| e.to_string())?;
    let extremes = subsequence_extremes(&table).map_err(|e| e.to_string())?;
    ensure(extremes[0].0 <= 2.25, || {
        format!("tail min {:.4}", extremes[0].0)
    })?;
    let digits = ratio_series(
        &DigitSet,
        &[1_000, 10_000, 100_000, 1_000_000],
        Normalization::sqrt(),
    )
    .map_err(|e| e.to_string())?;
    let dx = subsequence_extremes(&digits).map_err(|e| e.to_string())?;
    Ok(format!(
        "{ASYMPTOTIC_NOTE}: blocks A(n)/sqrt(n) at 2^(2n_k+2) = {:?}; digits tail max {:.3}",
        table.rows.iter().map(|r| r.ratio).collect::<Vec<_>>(),
        dx[0].1
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        (
            "1 interval chain equals generalized greedy",
            interval_chain_equivalence,
        ),
        ("2 interval chain example (3,4)", interval_chain_example),
        ("3 block set covering + proof witnesses", block_covering),
        (
            "4 block set density along 2^(2n_k+2)",
            block_density_subsequence,
        ),
        ("5 digit set 34 sqrt(n) bound + covering", digit_bounds),
        (
            "6 covering lower bound A(n) >= sqrt(2n-2n0+1/4)+1/2",
            lower_bound_property,
        ),
        (
            "7 Stanley base-3 oracle + progression-freeness",
            stanley_oracle,
        ),
        ("8 random covering simulation", random_cover_simulation),
        ("9 asymptotic trend report", asymptotic_trends),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
