//! Pressure from separated sets of statistically typical words.
//!
//! Fix a target measure, a marginal depth `L`, and a radius `theta`. A word
//! of length `n + ball_depth(eps) + depth(phi) - 1` survives when the
//! empirical distribution of its depth-`L` windows lies within total
//! variation `theta` of the target marginal. The estimator then takes
//! `(1/n) ln sum exp(S_n phi)` over a separated family of survivors:
//!
//! * `NEps`: words must differ within their visible prefix, so the family
//!   keeps at most one word per `(n + m)`-cylinder and the supremum over
//!   families is attained by keeping the best word of each cylinder.
//! * `Hamming`: at least `ceil(delta n)` of the `n` width-`(m+1)` blocks
//!   must differ. No efficiently computable supremum exists here, so the
//!   family is grown greedily. Candidates are grouped by their empirical
//!   window counts and groups are visited in order of decreasing total
//!   weight (lexicographic within a group), which keeps the greedy family
//!   inside the heavy classes where the supremum lives; a plain
//!   lexicographic scan can get stuck under low weight words and lose a
//!   constant factor per symbol.
//!
//! Repeating this along a schedule of growing `n` (and shrinking `theta`)
//! approximates the measure theoretic pressure of the target: mixtures
//! concentrate on their best component, so the limit sees the largest
//! component free energy rather than the weight average.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::measure::{MeasureSpec, NeighborhoodSpec};
use crate::report::{EstimateReport, ScaleParams};
use crate::separation::{ceil_count, differing_blocks};
use crate::shift::{ball_depth, birkhoff_prefix, Potential, Sided, Subshift};
use crate::solve::{logsumexp, vec_of, LogSum};

/// Separation notion used on the surviving words.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpMode {
    NEps,
    Hamming { delta: f64 },
}

const WORD_BUDGET: u128 = 1 << 22;
const TABLE_BUDGET: usize = 1 << 16;

struct Survivor {
    symbols: Vec<u8>,
    weight: f64,
}

/// One stage of the counting estimator at fixed scales. The trace carries
/// the single point `(n, value)`; `flagged` marks an empty survivor set
/// (value `-inf`).
pub fn separated_pressure(
    shift: &Subshift,
    phi: &Potential,
    neighborhood: &NeighborhoodSpec,
    n: usize,
    eps: f64,
    mode: SpMode,
) -> Result<EstimateReport> {
    if shift.sided() != Sided::OneSided {
        return Err(Error::InvalidSubshift(
            "counting estimators enumerate prefixes and need a one sided system".to_string(),
        ));
    }
    if phi.alphabet() != shift.alphabet() {
        return Err(Error::InvalidPotential(
            "potential alphabet does not match the subshift".to_string(),
        ));
    }
    neighborhood.center().validate_on(shift)?;
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be positive".to_string(),
        });
    }
    let depth = neighborhood.depth();
    if depth > n {
        return Err(Error::InvalidParameter {
            name: "depth",
            reason: "empirical depth must not exceed n".to_string(),
        });
    }
    let m = ball_depth(eps)?;
    let word_len = n + m + phi.depth() - 1;
    if word_len < depth {
        return Err(Error::InvalidParameter {
            name: "depth",
            reason: "empirical depth exceeds the enumerated word length".to_string(),
        });
    }
    if shift.count_words(word_len) > WORD_BUDGET {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "word enumeration would exceed the budget".to_string(),
        });
    }
    let k = shift.alphabet();
    let table_len = k.pow(depth as u32);
    if table_len > TABLE_BUDGET {
        return Err(Error::InvalidParameter {
            name: "depth",
            reason: "empirical window table would be too large".to_string(),
        });
    }
    let delta = match mode {
        SpMode::NEps => None,
        SpMode::Hamming { delta } => {
            if !(0.0..=1.0).contains(&delta) {
                return Err(Error::InvalidParameter {
                    name: "delta",
                    reason: "must lie in [0, 1]".to_string(),
                });
            }
            Some(delta)
        }
    };

    let marginal = neighborhood.dense_marginal(shift);
    let theta = neighborhood.radius();
    let windows = word_len - depth + 1;
    let inv_windows = 1.0 / windows as f64;
    let mut counts = vec_of(0u32, table_len);
    let mut survivors: Vec<Survivor> = Vec::new();
    let mut classes: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    let keep_classes = delta.is_some();
    let radix_cut = table_len / k;

    for word in shift.words(word_len) {
        let symbols = word.symbols();
        let mut idx = 0usize;
        for &s in &symbols[..depth - 1] {
            idx = idx * k + s as usize;
        }
        for &s in &symbols[depth - 1..] {
            idx = (idx % radix_cut) * k + s as usize;
            counts[idx] += 1;
        }
        let mut tv = 0.0;
        for (c, target) in counts.iter().zip(&marginal) {
            tv += (*c as f64 * inv_windows - target).abs();
        }
        tv *= 0.5;
        if tv < theta {
            let weight = birkhoff_prefix(phi, symbols, n)?;
            if keep_classes {
                classes
                    .entry(counts.clone())
                    .or_default()
                    .push(survivors.len());
            }
            survivors.push(Survivor {
                symbols: word.into_symbols(),
                weight,
            });
        }
        counts.iter_mut().for_each(|c| *c = 0);
    }

    let visible = n + m;
    let total = match delta {
        None => best_per_cylinder(&survivors, visible),
        Some(delta) => greedy_hamming(&survivors, &classes, n, m, k, ceil_count(delta * n as f64)),
    };

    let mut report = EstimateReport::new(
        total / n as f64,
        ScaleParams {
            n: Some(n),
            eps: Some(eps),
            theta: Some(theta),
            delta,
            depth: Some(depth),
            ..ScaleParams::default()
        },
    );
    report.trace.push((n as f64, report.value));
    report.flagged = survivors.is_empty();
    Ok(report)
}

/// `ln sum exp(weight)` over the best survivor of each visible cylinder:
/// the exact supremum over `(n, eps)`-separated families of survivors.
fn best_per_cylinder(survivors: &[Survivor], visible: usize) -> f64 {
    let mut acc = LogSum::new();
    // enumeration order is lexicographic, so equal prefixes are adjacent
    let mut current: Option<(&[u8], f64)> = None;
    for s in survivors {
        let prefix = &s.symbols[..visible.min(s.symbols.len())];
        match current {
            Some((p, best)) if p == prefix => {
                if s.weight > best {
                    current = Some((p, s.weight));
                }
            }
            Some((_, best)) => {
                acc.push(best);
                current = Some((prefix, s.weight));
            }
            None => current = Some((prefix, s.weight)),
        }
    }
    if let Some((_, best)) = current {
        acc.push(best);
    }
    acc.value()
}

/// Greedy `(delta, n, eps)`-separated family over survivor classes in
/// decreasing weight order; returns `ln sum exp(weight)` over what was kept.
fn greedy_hamming(
    survivors: &[Survivor],
    classes: &BTreeMap<Vec<u32>, Vec<usize>>,
    n: usize,
    m: usize,
    alphabet: usize,
    threshold: usize,
) -> f64 {
    let mut acc = LogSum::new();
    if threshold == 0 {
        for s in survivors {
            acc.push(s.weight);
        }
        return acc.value();
    }
    let mut ordered: Vec<(f64, &Vec<usize>)> = classes
        .values()
        .map(|members| {
            let weights: Vec<f64> = members.iter().map(|&i| survivors[i].weight).collect();
            (logsumexp(&weights), members)
        })
        .collect();
    ordered.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(core::cmp::Ordering::Equal));

    let visible = n + m;
    let mut kept_visible: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut kept_slow: Vec<&[u8]> = Vec::new();
    let fast = threshold <= 2;
    for (_, members) in ordered {
        for &i in members {
            let symbols = &survivors[i].symbols;
            let vis = &symbols[..visible.min(symbols.len())];
            let conflict = if fast {
                fast_conflict(&kept_visible, vis, n, m, alphabet, threshold)
            } else {
                kept_slow
                    .iter()
                    .any(|k| differing_blocks(k, vis, n, m, threshold) < threshold)
            };
            if conflict {
                continue;
            }
            if fast {
                kept_visible.insert(vis.to_vec());
            } else {
                kept_slow.push(vis);
            }
            acc.push(survivors[i].weight);
        }
    }
    acc.value()
}

/// Conflict test against the kept set for thresholds 1 and 2, where "fewer
/// than `threshold` differing blocks" pins the visible part down to an
/// explicit finite probe set:
///
/// * threshold 1: identical visible parts;
/// * threshold 2, `m = 0`: identical or differing in exactly one coordinate;
/// * threshold 2, `m >= 1`: identical or differing in exactly the first or
///   last visible coordinate (interior mismatches hit two or more
///   overlapping blocks).
fn fast_conflict(
    kept: &BTreeSet<Vec<u8>>,
    vis: &[u8],
    n: usize,
    m: usize,
    alphabet: usize,
    threshold: usize,
) -> bool {
    if kept.contains(vis) {
        return true;
    }
    if threshold == 1 {
        return false;
    }
    let positions: Vec<usize> = if m == 0 {
        (0..n.min(vis.len())).collect()
    } else {
        alloc::vec![0, vis.len() - 1]
    };
    let mut probe = vis.to_vec();
    for pos in positions {
        let original = probe[pos];
        for c in 0..alphabet as u8 {
            if c == original {
                continue;
            }
            probe[pos] = c;
            if kept.contains(&probe) {
                probe[pos] = original;
                return true;
            }
        }
        probe[pos] = original;
    }
    false
}

/// One stage of a counting schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpPoint {
    pub n: usize,
    pub eps: f64,
    pub theta: f64,
}

/// An evenly spaced schedule ending at `(n_final, eps, theta_final)`, with
/// the radius widened as `theta_final * sqrt(n_final / n)` at shorter
/// lengths so early stages stay populated.
pub fn standard_schedule(
    n_final: usize,
    eps: f64,
    theta_final: f64,
    stages: usize,
) -> Result<Vec<SpPoint>> {
    if n_final < 2 {
        return Err(Error::InvalidParameter {
            name: "n_final",
            reason: "must be at least 2".to_string(),
        });
    }
    if stages == 0 {
        return Err(Error::InvalidParameter {
            name: "stages",
            reason: "must be positive".to_string(),
        });
    }
    if !(theta_final > 0.0) {
        return Err(Error::InvalidParameter {
            name: "theta_final",
            reason: "must be positive".to_string(),
        });
    }
    ball_depth(eps)?;
    let mut points = Vec::with_capacity(stages);
    for i in 1..=stages {
        let n = (n_final * i).div_ceil(stages).max(2);
        if points.last().is_some_and(|p: &SpPoint| p.n >= n) {
            continue;
        }
        let theta = theta_final * (n_final as f64 / n as f64).sqrt();
        points.push(SpPoint { n, eps, theta });
    }
    Ok(points)
}

/// Runs [`separated_pressure`] along a schedule against the depth-`depth`
/// marginal of `center`. The report's trace has one `(n, value)` pair per
/// stage and `value` is the final stage's estimate.
pub fn separated_pressure_estimate(
    shift: &Subshift,
    phi: &Potential,
    center: &MeasureSpec,
    depth: usize,
    schedule: &[SpPoint],
    mode: SpMode,
) -> Result<EstimateReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameter {
            name: "schedule",
            reason: "must not be empty".to_string(),
        });
    }
    let mut trace = Vec::with_capacity(schedule.len());
    let mut flagged = false;
    let mut last: Option<EstimateReport> = None;
    for point in schedule {
        let nb = NeighborhoodSpec::new(center.clone(), depth, point.theta)?;
        let stage = separated_pressure(shift, phi, &nb, point.n, point.eps, mode)?;
        flagged |= stage.flagged;
        trace.push((point.n as f64, stage.value));
        last = Some(stage);
    }
    let mut report = last.unwrap();
    report.trace = trace;
    report.flagged = flagged;
    Ok(report)
}
