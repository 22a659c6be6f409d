//! Caratheodory style cover functionals and the jump-up point.
//!
//! The weight of a dynamical ball `B_n(x, eps)` at scale `alpha` is
//! `exp(-alpha n + sup S_n phi)`, the supremum running over the ball, which
//! is a cylinder on `n + ball_depth(eps)` coordinates. The cover functional
//! at stage `N` is the infimum of total weight over covers of the target set
//! by balls with lengths in `[N, max_depth]`; as `alpha` grows it drops from
//! infinite to zero and the jump-up point is the threshold, found here by
//! bisecting on "functional below 1". Because ball prefixes nest, the exact
//! infimum over this truncated cover family is computable by one pass over
//! the cylinder tree: every node either pays for a ball of its own depth or
//! delegates to its children.
//!
//! The fixed length variant (all balls of length `n`) yields the uniform
//! crossing `(1/n) ln sum exp(sup S_n phi)` whose liminf and limsup bracket
//! the lower and upper pressures.
//!
//! These estimators walk prefixes from coordinate zero and therefore
//! require one sided systems.

use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::report::{EstimateReport, ScaleParams};
use crate::shift::{ball_depth, Potential, Sided, Subshift, Word};
use crate::solve::bisect_predicate;

/// Scales for a single cover functional evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpParams {
    /// Exponential scale `alpha`.
    pub alpha: f64,
    /// Minimum ball length `N`.
    pub min_len: usize,
    /// Ball resolution.
    pub eps: f64,
    /// Maximum ball length (covers are truncated here).
    pub max_depth: usize,
}

/// The set being covered: everything, or a finite union of cylinders given
/// by equal length words.
#[derive(Debug, Clone, PartialEq)]
pub enum CoverTarget {
    WholeSpace,
    CylinderUnion { len: usize, words: Vec<Vec<u8>> },
}

impl CoverTarget {
    pub fn whole() -> Self {
        CoverTarget::WholeSpace
    }

    /// Sorts, deduplicates, and validates the base words.
    pub fn cylinders(shift: &Subshift, words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidParameter {
                name: "words",
                reason: "cylinder union must be non-empty".to_string(),
            });
        }
        let len = words[0].len();
        if len == 0 {
            return Err(Error::InvalidParameter {
                name: "words",
                reason: "cylinder words must be non-empty".to_string(),
            });
        }
        let mut base: Vec<Vec<u8>> = Vec::with_capacity(words.len());
        for w in words {
            if w.len() != len {
                return Err(Error::LengthMismatch {
                    left: len,
                    right: w.len(),
                });
            }
            if !shift.is_admissible(w.symbols()) {
                return Err(Error::InvalidParameter {
                    name: "words",
                    reason: alloc::format!("cylinder word {w} is not admissible"),
                });
            }
            base.push(w.into_symbols());
        }
        base.sort();
        base.dedup();
        Ok(CoverTarget::CylinderUnion { len, words: base })
    }
}

/// Range of target words compatible with the current tree node.
#[derive(Debug, Clone, Copy)]
enum TargetState {
    /// Node meets the target regardless of deeper symbols.
    Inside,
    /// Node prefix matches target words in `lo..hi`.
    Range { lo: usize, hi: usize },
}

struct CoverWalk<'a> {
    shift: &'a Subshift,
    phi: &'a Potential,
    alpha: f64,
    min_len: usize,
    max_len: usize,
    m: usize,
    target: &'a CoverTarget,
    buf: Vec<u8>,
    window_sums: Vec<f64>,
}

impl CoverWalk<'_> {
    /// Exact infimum of total ball weight over covers of the target by
    /// balls of length in `[min_len, max_len]` at resolution `m`.
    fn run(&mut self) -> f64 {
        let state = match self.target {
            CoverTarget::WholeSpace => TargetState::Inside,
            CoverTarget::CylinderUnion { words, .. } => TargetState::Range {
                lo: 0,
                hi: words.len(),
            },
        };
        self.node(state)
    }

    fn node(&mut self, state: TargetState) -> f64 {
        let depth = self.buf.len();
        let mut ball = f64::INFINITY;
        if depth >= self.min_len + self.m && depth - self.m <= self.max_len {
            let n = depth - self.m;
            ball = (-self.alpha * n as f64 + self.sup_birkhoff(n)).exp();
        }
        if depth == self.max_len + self.m {
            return ball;
        }
        let mut children = 0.0;
        for c in 0..self.shift.alphabet() as u8 {
            if depth > 0 && !self.shift.allows(self.buf[depth - 1], c) {
                continue;
            }
            let Some(child_state) = self.narrow(state, c, depth) else {
                continue;
            };
            self.push(c);
            children += self.node(child_state);
            self.pop();
            if children >= ball {
                // the subtree can only get more expensive than its own ball
                return ball;
            }
        }
        if children < ball {
            children
        } else {
            ball
        }
    }

    fn narrow(&self, state: TargetState, c: u8, depth: usize) -> Option<TargetState> {
        let TargetState::Range { lo, hi } = state else {
            return Some(TargetState::Inside);
        };
        let CoverTarget::CylinderUnion { len, words } = self.target else {
            unreachable!("range state implies a cylinder target");
        };
        let lo = lo + words[lo..hi].partition_point(|w| w[depth] < c);
        let hi = lo + words[lo..hi].partition_point(|w| w[depth] == c);
        if lo == hi {
            return None;
        }
        if depth + 1 == *len {
            Some(TargetState::Inside)
        } else {
            Some(TargetState::Range { lo, hi })
        }
    }

    fn push(&mut self, c: u8) {
        self.buf.push(c);
        let d = self.phi.depth();
        if self.buf.len() >= d {
            let next =
                self.window_sums.last().unwrap() + self.phi.eval(&self.buf[self.buf.len() - d..]);
            self.window_sums.push(next);
        }
    }

    fn pop(&mut self) {
        let d = self.phi.depth();
        if self.buf.len() >= d {
            self.window_sums.pop();
        }
        self.buf.pop();
    }

    /// `sup S_n phi` over the cylinder fixed by the current buffer. Windows
    /// protruding past the buffer are maximized over admissible completions.
    fn sup_birkhoff(&self, n: usize) -> f64 {
        let depth = self.buf.len();
        let d = self.phi.depth();
        let available = (depth + 1).saturating_sub(d);
        if available >= n {
            return self.window_sums[n];
        }
        let determined = self.window_sums[available];
        determined + self.sup_completion(&self.buf[depth + 1 - d..], n - available)
    }

    fn sup_completion(&self, tail: &[u8], missing: usize) -> f64 {
        if missing == 0 {
            return 0.0;
        }
        let mut best = f64::NEG_INFINITY;
        let last = *tail.last().unwrap();
        for c in 0..self.shift.alphabet() as u8 {
            if !self.shift.allows(last, c) {
                continue;
            }
            let mut window = Vec::with_capacity(tail.len() + 1);
            window.extend_from_slice(tail);
            window.push(c);
            let value = self.phi.eval(&window) + self.sup_completion(&window[1..], missing - 1);
            if value > best {
                best = value;
            }
        }
        best
    }
}

fn check_inputs(
    shift: &Subshift,
    phi: &Potential,
    target: &CoverTarget,
    min_len: usize,
    max_depth: usize,
    eps: f64,
) -> Result<usize> {
    if shift.sided() != Sided::OneSided {
        return Err(Error::InvalidSubshift(
            "cover functionals walk prefixes and need a one sided system".to_string(),
        ));
    }
    if phi.alphabet() != shift.alphabet() {
        return Err(Error::InvalidPotential(
            "potential alphabet does not match the subshift".to_string(),
        ));
    }
    if min_len == 0 {
        return Err(Error::InvalidParameter {
            name: "min_len",
            reason: "must be positive".to_string(),
        });
    }
    if max_depth < min_len {
        return Err(Error::InvalidParameter {
            name: "max_depth",
            reason: "must be at least min_len".to_string(),
        });
    }
    let m = ball_depth(eps)?;
    if shift.count_words(max_depth + m) > 1u128 << 24 {
        return Err(Error::InvalidParameter {
            name: "max_depth",
            reason: "cylinder tree would exceed the enumeration budget".to_string(),
        });
    }
    if let CoverTarget::CylinderUnion { words, .. } = target {
        if let Some(w) = words.iter().find(|w| !shift.is_admissible(w)) {
            return Err(Error::InvalidParameter {
                name: "target",
                reason: alloc::format!("cylinder word {:?} is not admissible", w),
            });
        }
    }
    Ok(m)
}

/// Value of the truncated cover functional at the scales in `params`.
pub fn cover_value(
    shift: &Subshift,
    phi: &Potential,
    target: &CoverTarget,
    params: &CpParams,
) -> Result<f64> {
    let m = check_inputs(
        shift,
        phi,
        target,
        params.min_len,
        params.max_depth,
        params.eps,
    )?;
    let mut walk = CoverWalk {
        shift,
        phi,
        alpha: params.alpha,
        min_len: params.min_len,
        max_len: params.max_depth,
        m,
        target,
        buf: Vec::with_capacity(params.max_depth + m),
        window_sums: alloc::vec![0.0],
    };
    Ok(walk.run())
}

/// Fixed length variant: total weight of the balls of length exactly `len`
/// whose cylinders meet the target.
pub fn uniform_cover_value(
    shift: &Subshift,
    phi: &Potential,
    target: &CoverTarget,
    alpha: f64,
    len: usize,
    eps: f64,
) -> Result<f64> {
    cover_value(
        shift,
        phi,
        target,
        &CpParams {
            alpha,
            min_len: len,
            eps,
            max_depth: len,
        },
    )
}

fn alpha_bracket(phi: &Potential, shift: &Subshift, m: usize) -> (f64, f64) {
    let pad = (shift.alphabet() as f64).ln() * (1.0 + m as f64) + 1.0;
    (phi.min_value() - pad, phi.max_value() + pad)
}

/// The jump-up point of the cover functional for each stage in
/// `n_schedule`: the `alpha` at which the stage-`N` functional crosses 1,
/// located by bisection to 1e-6. The report's trace holds one
/// `(N, alpha)` pair per stage and `value` is the final stage's crossing.
pub fn jump_up_point(
    shift: &Subshift,
    phi: &Potential,
    target: &CoverTarget,
    n_schedule: &[usize],
    eps: f64,
    max_depth: usize,
) -> Result<EstimateReport> {
    if n_schedule.is_empty() {
        return Err(Error::InvalidParameter {
            name: "n_schedule",
            reason: "must not be empty".to_string(),
        });
    }
    if let Some(&bad) = n_schedule.iter().find(|&&n| n == 0 || n > max_depth) {
        return Err(Error::InvalidParameter {
            name: "n_schedule",
            reason: alloc::format!("stage {bad} outside [1, max_depth]"),
        });
    }
    let m = check_inputs(shift, phi, target, n_schedule[0], max_depth, eps)?;
    let (lo, hi) = alpha_bracket(phi, shift, m);
    let mut trace = Vec::with_capacity(n_schedule.len());
    for &n in n_schedule {
        let params = |alpha: f64| CpParams {
            alpha,
            min_len: n,
            eps,
            max_depth,
        };
        let below_at = |alpha: f64| {
            cover_value(shift, phi, target, &params(alpha)).map(|v| v < 1.0)
        };
        if below_at(lo)? || !below_at(hi)? {
            return Err(Error::Numerical(
                "jump-up bracket does not straddle the crossing".to_string(),
            ));
        }
        let (crossing, _) = bisect_predicate(lo, hi, 1e-6, |alpha| {
            cover_value(shift, phi, target, &params(alpha))
                .map(|v| v < 1.0)
                .unwrap_or(true)
        });
        trace.push((n as f64, crossing));
    }
    let mut report = EstimateReport::new(
        trace.last().unwrap().1,
        ScaleParams {
            eps: Some(eps),
            max_depth: Some(max_depth),
            ..ScaleParams::default()
        },
    );
    report.trace = trace;
    Ok(report)
}

/// Lower and upper pressure of the target from uniform crossings
/// `(1/n) ln R_n` for `n` in `n_range`: the minimum and maximum crossing
/// over the range, together with the whole crossing sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverCrossings {
    pub lower: f64,
    pub upper: f64,
    pub crossings: Vec<(usize, f64)>,
}

pub fn cover_crossing_bounds(
    shift: &Subshift,
    phi: &Potential,
    target: &CoverTarget,
    eps: f64,
    n_range: (usize, usize),
) -> Result<CoverCrossings> {
    let (n_lo, n_hi) = n_range;
    if n_lo == 0 || n_hi < n_lo {
        return Err(Error::InvalidParameter {
            name: "n_range",
            reason: "need 1 <= n_lo <= n_hi".to_string(),
        });
    }
    let mut crossings = Vec::with_capacity(n_hi - n_lo + 1);
    for n in n_lo..=n_hi {
        let total = uniform_cover_value(shift, phi, target, 0.0, n, eps)?;
        crossings.push((n, total.ln() / n as f64));
    }
    let lower = crossings.iter().map(|&(_, c)| c).fold(f64::INFINITY, f64::min);
    let upper = crossings
        .iter()
        .map(|&(_, c)| c)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(CoverCrossings {
        lower,
        upper,
        crossings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::pressure_oracle;
    use alloc::vec;

    #[test]
    fn uniform_crossing_counts_cylinders_at_zero_potential() {
        // alpha = 0, phi = 0: the fixed length functional counts words
        let s = Subshift::golden_mean();
        let phi = Potential::constant(&s, 0.0).unwrap();
        let t = CoverTarget::whole();
        for n in 1..=6 {
            let total = uniform_cover_value(&s, &phi, &t, 0.0, n, 1.0).unwrap();
            assert!((total - s.count_words(n) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn resolution_deepens_the_counted_cylinders() {
        let s = Subshift::full(2, Sided::OneSided);
        let phi = Potential::constant(&s, 0.0).unwrap();
        let t = CoverTarget::whole();
        // eps = 0.5 fixes one extra coordinate: 2^{n+1} cylinders
        let total = uniform_cover_value(&s, &phi, &t, 0.0, 3, 0.5).unwrap();
        assert!((total - 16.0).abs() < 1e-9);
    }

    #[test]
    fn cover_functional_prefers_coarse_balls_at_small_alpha() {
        // at alpha = 0 and phi = 0 every ball costs 1, so the infimum is
        // the smallest number of balls: cover the whole space by the two
        // length-1 cylinders rather than deeper ones
        let s = Subshift::full(2, Sided::OneSided);
        let phi = Potential::constant(&s, 0.0).unwrap();
        let v = cover_value(
            &s,
            &phi,
            &CoverTarget::whole(),
            &CpParams {
                alpha: 0.0,
                min_len: 1,
                eps: 1.0,
                max_depth: 6,
            },
        )
        .unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cover_functional_prefers_deep_balls_at_large_alpha() {
        // alpha far above the pressure: weights shrink with depth, so the
        // infimum over the truncated family sits at the deepest level
        let s = Subshift::full(2, Sided::OneSided);
        let phi = Potential::constant(&s, 0.0).unwrap();
        let alpha = 2.0;
        let v = cover_value(
            &s,
            &phi,
            &CoverTarget::whole(),
            &CpParams {
                alpha,
                min_len: 1,
                eps: 1.0,
                max_depth: 5,
            },
        )
        .unwrap();
        // 2^5 balls of length 5: total = 2^5 e^{-5 alpha}
        assert!((v - (32.0 * (-5.0 * alpha).exp())).abs() < 1e-12);
    }

    #[test]
    fn jump_up_point_meets_oracle_on_full_shift() {
        let s = Subshift::full(2, Sided::OneSided);
        let phi = Potential::constant(&s, 0.0).unwrap();
        let report = jump_up_point(
            &s,
            &phi,
            &CoverTarget::whole(),
            &[4, 8],
            1.0,
            10,
        )
        .unwrap();
        // for the full shift at phi = 0 the functional at alpha is exactly
        // sum over lengths, crossing 1 at ln 2 independent of stage
        assert!((report.value - core::f64::consts::LN_2).abs() < 1e-5);
        assert_eq!(report.trace.len(), 2);
        for &(_, c) in &report.trace {
            assert!((c - core::f64::consts::LN_2).abs() < 1e-5);
        }
    }

    #[test]
    fn restricting_the_target_lowers_the_crossing() {
        let s = Subshift::full(2, Sided::OneSided);
        let phi = Potential::from_pairs(&s, 1, &[(vec![0], 0.4), (vec![1], -0.4)]).unwrap();
        let whole = jump_up_point(&s, &phi, &CoverTarget::whole(), &[6], 1.0, 12).unwrap();
        let target = CoverTarget::cylinders(&s, vec![Word::new(vec![0, 0])]).unwrap();
        let part = jump_up_point(&s, &phi, &target, &[6], 1.0, 12).unwrap();
        assert!(part.value <= whole.value + 1e-6);
        let oracle = pressure_oracle(&s, &phi).unwrap();
        assert!((whole.value - oracle).abs() < 0.02);
    }

    #[test]
    fn two_sided_input_is_rejected() {
        let s = Subshift::full(2, Sided::TwoSided);
        let phi = Potential::constant(&s, 0.0).unwrap();
        let err = jump_up_point(&s, &phi, &CoverTarget::whole(), &[4], 1.0, 8);
        assert!(matches!(err, Err(Error::InvalidSubshift(_))));
    }

    #[test]
    fn crossing_bounds_settle_onto_the_oracle_from_above() {
        let g = Subshift::golden_mean();
        let phi = Potential::from_pairs(&g, 1, &[(vec![0], 0.2), (vec![1], -0.3)]).unwrap();
        let bounds =
            cover_crossing_bounds(&g, &phi, &CoverTarget::whole(), 1.0, (4, 14)).unwrap();
        let oracle = pressure_oracle(&g, &phi).unwrap();
        assert_eq!(bounds.crossings.len(), 11);
        // on an irreducible whole space the crossings decrease onto the
        // pressure; the frozen endpoints are (1/4) ln R_4 and (1/14) ln R_14
        assert!((bounds.upper - 0.5776672926032008).abs() < 1e-12);
        assert!((bounds.lower - 0.5611806196403475).abs() < 1e-12);
        assert!(bounds.lower >= oracle - 1e-9);
        assert!(bounds.lower - oracle < 0.01);
        for pair in bounds.crossings.windows(2) {
            assert!(pair[1].1 <= pair[0].1 + 1e-12);
        }
    }
}
