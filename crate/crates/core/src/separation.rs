//! Separated sets of words and Hamming ball counting.
//!
//! Two words are `(n, eps)`-separated when they differ somewhere in their
//! first `n + ball_depth(eps)` coordinates, and `(delta, n, eps)`-separated
//! when at least `ceil(delta * n)` of the length-`ball_depth(eps) + 1`
//! blocks starting at offsets `0..n` differ. The second notion degrades the
//! first by allowing a positive fraction of mismatched blocks, which is what
//! makes the counting estimators in [`crate::counting`] robust to a small
//! amount of orbit corruption.

use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::shift::{ball_depth, Word};

/// Number of coordinates at which two words of equal length differ.
pub fn hamming_distance(v: &Word, w: &Word) -> Result<usize> {
    if v.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: v.len(),
            right: w.len(),
        });
    }
    Ok(v.symbols()
        .iter()
        .zip(w.symbols())
        .filter(|(a, b)| a != b)
        .count())
}

/// A separation fraction `delta` together with its binary entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HammingParams {
    delta: f64,
}

impl HammingParams {
    pub fn new(delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: "must lie in [0, 1]".to_string(),
            });
        }
        Ok(HammingParams { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Binary entropy `-d log2 d - (1-d) log2 (1-d)` with `0 log 0 = 0`.
    pub fn eta(&self) -> f64 {
        let d = self.delta;
        let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
        term(d) + term(1.0 - d)
    }
}

/// Fractional counts like `delta * n` are meant on a decimal grid; a tiny
/// epsilon keeps `0.3 * 10` from rounding down to 2.
pub(crate) fn floor_count(x: f64) -> usize {
    (x + 1e-9).floor() as usize
}

pub(crate) fn ceil_count(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

fn binomial(n: usize, j: usize) -> Option<u128> {
    debug_assert!(j <= n);
    let j = j.min(n - j);
    let mut acc: u128 = 1;
    for i in 0..j {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// Exact size of a Hamming ball of radius `floor(delta * n)` in the space of
/// `n`-words over `alphabet` symbols:
/// `sum_{j <= floor(delta n)} C(n, j) (alphabet - 1)^j`.
pub fn hamming_ball_count(alphabet: usize, n: usize, delta: f64) -> Result<u128> {
    check_ball_inputs(alphabet, n, delta)?;
    let radius = floor_count(delta * n as f64);
    let mut total: u128 = 0;
    for j in 0..=radius.min(n) {
        let c = binomial(n, j)
            .zip((alphabet as u128 - 1).checked_pow(j as u32))
            .and_then(|(b, p)| b.checked_mul(p))
            .ok_or_else(|| Error::Numerical("hamming ball count overflows u128".to_string()))?;
        total = total
            .checked_add(c)
            .ok_or_else(|| Error::Numerical("hamming ball count overflows u128".to_string()))?;
    }
    Ok(total)
}

/// The exponential upper bound `2^{n eta(delta)} (alphabet - 1)^{n delta}`
/// on [`hamming_ball_count`], valid for `delta <= (alphabet - 1)/alphabet`.
pub fn hamming_ball_bound(alphabet: usize, n: usize, delta: f64) -> Result<f64> {
    check_ball_inputs(alphabet, n, delta)?;
    let eta = HammingParams::new(delta)?.eta();
    let nf = n as f64;
    Ok((nf * eta).exp2() * (alphabet as f64 - 1.0).powf(nf * delta))
}

fn check_ball_inputs(alphabet: usize, n: usize, delta: f64) -> Result<()> {
    if alphabet < 2 {
        return Err(Error::InvalidParameter {
            name: "alphabet",
            reason: "must be at least 2".to_string(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be positive".to_string(),
        });
    }
    let cap = (alphabet as f64 - 1.0) / alphabet as f64;
    if !(0.0..=cap + 1e-9).contains(&delta) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: alloc::format!("must lie in [0, {cap}] for this alphabet"),
        });
    }
    Ok(())
}

/// Which separation notion to extract or estimate with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Separation {
    /// Words must differ within their first `n + ball_depth(eps)` symbols.
    NEps { eps: f64 },
    /// At least `ceil(delta * n)` of the `n` blocks of width
    /// `ball_depth(eps) + 1` must differ.
    Hamming { eps: f64, delta: f64 },
}

/// Counts offsets `j` in `0..n` whose block `[j, min(j + m, last)]` differs,
/// stopping early once `threshold` blocks have been found.
pub(crate) fn differing_blocks(v: &[u8], w: &[u8], n: usize, m: usize, threshold: usize) -> usize {
    let len = v.len().min(w.len());
    if len == 0 {
        return 0;
    }
    let mut count = 0;
    for j in 0..n {
        if j >= len {
            break;
        }
        let end = (j + m).min(len - 1);
        if v[j..=end] != w[j..=end] {
            count += 1;
            if count >= threshold {
                return count;
            }
        }
    }
    count
}

/// Greedy extraction of a separated subset: scan the words in lexicographic
/// order and keep each word separated from everything kept so far. The
/// result is inclusion-maximal but not necessarily of maximum cardinality.
pub fn extract_separated(words: &[Word], sep: &Separation, n: usize) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be positive".to_string(),
        });
    }
    let (m, threshold) = match *sep {
        Separation::NEps { eps } => (ball_depth(eps)?, 1),
        Separation::Hamming { eps, delta } => {
            HammingParams::new(delta)?;
            (ball_depth(eps)?, ceil_count(delta * n as f64))
        }
    };
    if let Some(first) = words.first() {
        if let Some(bad) = words.iter().find(|w| w.len() != first.len()) {
            return Err(Error::LengthMismatch {
                left: first.len(),
                right: bad.len(),
            });
        }
    }
    let mut sorted: Vec<&Word> = words.iter().collect();
    sorted.sort();
    let mut kept: Vec<Word> = Vec::new();
    for w in sorted {
        let ok = threshold == 0
            || kept
                .iter()
                .all(|k| differing_blocks(k.symbols(), w.symbols(), n, m, threshold) >= threshold);
        if ok {
            kept.push(w.clone());
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{Sided, Subshift};
    use alloc::vec;

    #[test]
    fn hamming_distance_counts_mismatches() {
        let v = Word::new(vec![0, 1, 1, 0]);
        let w = Word::new(vec![1, 1, 0, 0]);
        assert_eq!(hamming_distance(&v, &w).unwrap(), 2);
        assert!(hamming_distance(&v, &Word::new(vec![0])).is_err());
    }

    #[test]
    fn binary_entropy_at_frozen_points() {
        assert_eq!(HammingParams::new(0.0).unwrap().eta(), 0.0);
        assert_eq!(HammingParams::new(1.0).unwrap().eta(), 0.0);
        assert!((HammingParams::new(0.5).unwrap().eta() - 1.0).abs() < 1e-15);
        let eta = HammingParams::new(0.3).unwrap().eta();
        assert!((eta - 0.8812908992306927).abs() < 1e-15);
    }

    #[test]
    fn ball_count_binary_radius_two() {
        assert_eq!(hamming_ball_count(2, 4, 0.5).unwrap(), 11);
    }

    #[test]
    fn ball_count_stays_under_entropy_bound() {
        let count = hamming_ball_count(2, 10, 0.3).unwrap();
        assert_eq!(count, 176);
        let bound = hamming_ball_bound(2, 10, 0.3).unwrap();
        assert!((bound - 449.7280292229677).abs() < 1e-9);
        assert!((count as f64) <= bound);
    }

    #[test]
    fn ball_count_handles_near_integer_radius() {
        let a = hamming_ball_count(2, 10, 0.3).unwrap();
        let b = hamming_ball_count(2, 10, 3.0 / 10.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn delta_above_alphabet_cap_is_rejected() {
        assert!(hamming_ball_count(2, 10, 0.6).is_err());
        assert!(hamming_ball_count(3, 10, 0.6).is_ok());
    }

    #[test]
    fn differing_blocks_sees_window_overlap() {
        // v and w differ only at coordinate 2; with m = 1 both block 1
        // (coords 1..=2) and block 2 (coords 2..=3) see the mismatch.
        let v = [0, 0, 0, 0, 0];
        let w = [0, 0, 1, 0, 0];
        assert_eq!(differing_blocks(&v, &w, 4, 0, usize::MAX), 1);
        assert_eq!(differing_blocks(&v, &w, 4, 1, usize::MAX), 2);
    }

    #[test]
    fn greedy_on_full_square_keeps_even_weight_code() {
        let s = Subshift::full(2, Sided::OneSided);
        let words: Vec<Word> = s.words(4).collect();
        let sep = Separation::Hamming {
            eps: 1.0,
            delta: 0.5,
        };
        let kept = extract_separated(&words, &sep, 4).unwrap();
        let got: Vec<Vec<u8>> = kept.into_iter().map(Word::into_symbols).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0, 0, 0],
                vec![0, 0, 1, 1],
                vec![0, 1, 0, 1],
                vec![0, 1, 1, 0],
                vec![1, 0, 0, 1],
                vec![1, 0, 1, 0],
                vec![1, 1, 0, 0],
                vec![1, 1, 1, 1],
            ]
        );
    }

    #[test]
    fn n_eps_extraction_collapses_words_sharing_long_prefix() {
        let words = vec![
            Word::new(vec![0, 0, 1]),
            Word::new(vec![0, 0, 0]),
            Word::new(vec![0, 1, 0]),
        ];
        // n = 2, eps = 1: only the first two coordinates count.
        let kept = extract_separated(&words, &Separation::NEps { eps: 1.0 }, 2).unwrap();
        let got: Vec<Vec<u8>> = kept.into_iter().map(Word::into_symbols).collect();
        assert_eq!(got, vec![vec![0, 0, 0], vec![0, 1, 0]]);
    }
}
