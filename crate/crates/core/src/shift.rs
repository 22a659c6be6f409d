//! Subshifts of finite type, finite words, and potentials of finite range.
//!
//! Points are symbol sequences over `{0, .., k-1}` constrained by a 0/1
//! transition matrix; only finite words ever materialize. The metric is
//! `d(x, y) = 2^{-j}` where `j` is the first index (from the anchor) at
//! which the sequences differ, so a dynamical ball `B_n(x, eps)` is exactly
//! the cylinder on the first `n + ball_depth(eps)` coordinates.

use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::solve::vec_of;

pub const MAX_ALPHABET: usize = 32;

/// Whether sequences are indexed by the naturals or by all integers.
/// Two sided systems support the exact oracles (transfer operator, free
/// energies); the cover and counting estimators require one sided input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sided {
    OneSided,
    TwoSided,
}

/// A topologically mixing-free, merely irreducible subshift of finite type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subshift {
    alphabet: usize,
    rows: Vec<u64>,
    sided: Sided,
}

impl Subshift {
    /// Builds a subshift from a 0/1 transition matrix. `allowed[a][b] != 0`
    /// means symbol `b` may follow symbol `a`. The matrix must be square,
    /// free of zero rows and columns, and irreducible.
    pub fn new(alphabet: usize, allowed: &[Vec<u8>], sided: Sided) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&alphabet) {
            return Err(Error::InvalidSubshift(
                "alphabet size must be between 2 and 32".to_string(),
            ));
        }
        if allowed.len() != alphabet || allowed.iter().any(|r| r.len() != alphabet) {
            return Err(Error::InvalidSubshift(
                "transition matrix must be square of alphabet size".to_string(),
            ));
        }
        let mut rows = vec_of(0u64, alphabet);
        for (a, row) in allowed.iter().enumerate() {
            for (b, &bit) in row.iter().enumerate() {
                if bit != 0 {
                    rows[a] |= 1 << b;
                }
            }
        }
        let shift = Subshift {
            alphabet,
            rows,
            sided,
        };
        for a in 0..alphabet {
            if shift.rows[a] == 0 {
                return Err(Error::InvalidSubshift(alloc::format!(
                    "symbol {a} has no admissible successor"
                )));
            }
        }
        for b in 0..alphabet {
            if (0..alphabet).all(|a| !shift.allows(a as u8, b as u8)) {
                return Err(Error::InvalidSubshift(alloc::format!(
                    "symbol {b} has no admissible predecessor"
                )));
            }
        }
        if !shift.is_irreducible() {
            return Err(Error::InvalidSubshift(
                "transition matrix is not irreducible".to_string(),
            ));
        }
        Ok(shift)
    }

    /// The full shift on `alphabet` symbols.
    pub fn full(alphabet: usize, sided: Sided) -> Self {
        assert!(
            (2..=MAX_ALPHABET).contains(&alphabet),
            "alphabet size must be between 2 and 32"
        );
        let mask = if alphabet == 64 {
            u64::MAX
        } else {
            (1u64 << alphabet) - 1
        };
        Subshift {
            alphabet,
            rows: vec_of(mask, alphabet),
            sided,
        }
    }

    /// The one sided golden mean shift: binary sequences without `11`.
    pub fn golden_mean() -> Self {
        Subshift {
            alphabet: 2,
            rows: alloc::vec![0b11, 0b01],
            sided: Sided::OneSided,
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn sided(&self) -> Sided {
        self.sided
    }

    pub fn allows(&self, a: u8, b: u8) -> bool {
        (a as usize) < self.alphabet
            && (b as usize) < self.alphabet
            && self.rows[a as usize] & (1 << b) != 0
    }

    pub fn is_admissible(&self, symbols: &[u8]) -> bool {
        if symbols.iter().any(|&s| (s as usize) >= self.alphabet) {
            return false;
        }
        symbols.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    fn is_irreducible(&self) -> bool {
        let k = self.alphabet;
        let reach = |forward: bool| -> u64 {
            let mut seen = 1u64;
            let mut frontier = alloc::vec![0usize];
            while let Some(a) = frontier.pop() {
                for b in 0..k {
                    let edge = if forward {
                        self.allows(a as u8, b as u8)
                    } else {
                        self.allows(b as u8, a as u8)
                    };
                    if edge && seen & (1 << b) == 0 {
                        seen |= 1 << b;
                        frontier.push(b);
                    }
                }
            }
            seen
        };
        let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        reach(true) == all && reach(false) == all
    }

    /// Iterates over all admissible words of length `n` in lexicographic
    /// order.
    pub fn words(&self, n: usize) -> Words<'_> {
        assert!(n >= 1, "word length must be positive");
        Words {
            shift: self,
            n,
            state: self.first_word(n),
        }
    }

    fn first_word(&self, n: usize) -> Option<Vec<u8>> {
        let mut w = Vec::with_capacity(n);
        w.push(0u8);
        for _ in 1..n {
            let prev = *w.last().unwrap();
            w.push(self.min_successor(prev)?);
        }
        Some(w)
    }

    fn min_successor(&self, a: u8) -> Option<u8> {
        let row = self.rows[a as usize];
        (row != 0).then(|| row.trailing_zeros() as u8)
    }

    /// Number of admissible words of length `n`, by powers of the transition
    /// matrix. Saturates at `u128::MAX` rather than overflowing.
    pub fn count_words(&self, n: usize) -> u128 {
        assert!(n >= 1, "word length must be positive");
        let k = self.alphabet;
        let mut counts = vec_of(1u128, k);
        for _ in 1..n {
            let mut next = vec_of(0u128, k);
            for a in 0..k {
                for b in 0..k {
                    if self.allows(a as u8, b as u8) {
                        next[a] = next[a].saturating_add(counts[b]);
                    }
                }
            }
            counts = next;
        }
        counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
    }
}

/// Lexicographic word enumerator; see [`Subshift::words`].
pub struct Words<'a> {
    shift: &'a Subshift,
    n: usize,
    state: Option<Vec<u8>>,
}

impl Iterator for Words<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.state.as_ref()?.clone();
        self.advance();
        Some(Word::new(current))
    }
}

impl Words<'_> {
    fn advance(&mut self) {
        let Some(w) = self.state.as_mut() else {
            return;
        };
        let k = self.shift.alphabet as u8;
        for i in (0..self.n).rev() {
            let start = w[i] + 1;
            for b in start..k {
                let ok = i == 0 || self.shift.allows(w[i - 1], b);
                if !ok {
                    continue;
                }
                w[i] = b;
                let mut filled = true;
                for j in i + 1..self.n {
                    match self.shift.min_successor(w[j - 1]) {
                        Some(s) => w[j] = s,
                        None => {
                            filled = false;
                            break;
                        }
                    }
                }
                if filled {
                    return;
                }
            }
        }
        self.state = None;
    }
}

/// A finite word, optionally anchored away from coordinate zero (two sided
/// samples use negative anchors). Comparison and equality are by symbols
/// first, then anchor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<u8>,
    start: i64,
}

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word { symbols, start: 0 }
    }

    pub fn anchored(symbols: Vec<u8>, start: i64) -> Self {
        Word { symbols, start }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }
}

impl core::fmt::Display for Word {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.start != 0 {
            write!(f, "@{}:", self.start)?;
        }
        for &s in &self.symbols {
            if s < 10 {
                write!(f, "{s}")?;
            } else {
                write!(f, "[{s}]")?;
            }
        }
        Ok(())
    }
}

/// Resolution depth of `eps`: the unique `m >= 0` with
/// `2^{-(m+1)} < eps <= 2^{-m}`. A ball `B_n(x, eps)` then fixes the first
/// `n + m` coordinates.
pub fn ball_depth(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: "must lie in (0, 1]".to_string(),
        });
    }
    let mut m = 0usize;
    let mut half = 0.5f64;
    while half >= eps {
        m += 1;
        half *= 0.5;
    }
    Ok(m)
}

/// A real valued potential depending on finitely many coordinates: a
/// function of the `depth` symbols starting at the evaluation point.
/// Values on inadmissible windows are unset (NaN) and never observable
/// through admissible words.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    alphabet: usize,
    depth: usize,
    values: Vec<f64>,
}

pub const MAX_POTENTIAL_DEPTH: usize = 8;

impl Potential {
    /// Tabulates `f` on every admissible window of the given depth.
    pub fn from_fn(shift: &Subshift, depth: usize, f: impl Fn(&[u8]) -> f64) -> Result<Self> {
        Self::check_depth(shift, depth)?;
        let mut values = vec_of(f64::NAN, shift.alphabet().pow(depth as u32));
        for w in shift.words(depth) {
            let v = f(w.symbols());
            if !v.is_finite() {
                return Err(Error::InvalidPotential(alloc::format!(
                    "value on window {w} is not finite"
                )));
            }
            values[Self::radix_index(shift.alphabet(), w.symbols())] = v;
        }
        Ok(Potential {
            alphabet: shift.alphabet(),
            depth,
            values,
        })
    }

    /// Builds a potential from explicit `(window, value)` pairs. Every
    /// admissible window of the given depth must appear exactly once.
    pub fn from_pairs(shift: &Subshift, depth: usize, pairs: &[(Vec<u8>, f64)]) -> Result<Self> {
        Self::check_depth(shift, depth)?;
        let mut values = vec_of(f64::NAN, shift.alphabet().pow(depth as u32));
        for (w, v) in pairs {
            if w.len() != depth || !shift.is_admissible(w) {
                return Err(Error::InvalidPotential(alloc::format!(
                    "window {:?} is not an admissible word of length {depth}",
                    w
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidPotential(alloc::format!(
                    "value on window {:?} is not finite",
                    w
                )));
            }
            let idx = Self::radix_index(shift.alphabet(), w);
            if !values[idx].is_nan() {
                return Err(Error::InvalidPotential(alloc::format!(
                    "window {:?} specified twice",
                    w
                )));
            }
            values[idx] = *v;
        }
        for w in shift.words(depth) {
            if values[Self::radix_index(shift.alphabet(), w.symbols())].is_nan() {
                return Err(Error::InvalidPotential(alloc::format!(
                    "no value for admissible window {w}"
                )));
            }
        }
        Ok(Potential {
            alphabet: shift.alphabet(),
            depth,
            values,
        })
    }

    /// The constant potential of depth 1.
    pub fn constant(shift: &Subshift, c: f64) -> Result<Self> {
        Self::from_fn(shift, 1, |_| c)
    }

    fn check_depth(shift: &Subshift, depth: usize) -> Result<()> {
        if !(1..=MAX_POTENTIAL_DEPTH).contains(&depth) {
            return Err(Error::InvalidPotential(alloc::format!(
                "depth must be between 1 and {MAX_POTENTIAL_DEPTH}"
            )));
        }
        let table = (shift.alphabet() as u64).checked_pow(depth as u32);
        if table.map_or(true, |t| t > 1 << 20) {
            return Err(Error::InvalidPotential(
                "value table would be too large".to_string(),
            ));
        }
        Ok(())
    }

    fn radix_index(alphabet: usize, window: &[u8]) -> usize {
        window
            .iter()
            .fold(0usize, |acc, &s| acc * alphabet + s as usize)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// Value on a window of exactly `depth` symbols. NaN on inadmissible
    /// windows.
    pub fn eval(&self, window: &[u8]) -> f64 {
        debug_assert_eq!(window.len(), self.depth);
        self.values[Self::radix_index(self.alphabet, window)]
    }

    /// Pointwise scaling `c * phi`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            if !v.is_nan() {
                *v *= c;
            }
        }
        out
    }

    /// Pointwise shift `phi + c`.
    pub fn plus_const(&self, c: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            if !v.is_nan() {
                *v += c;
            }
        }
        out
    }

    /// Minimum over admissible windows.
    pub fn min_value(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| !v.is_nan())
            .fold(f64::INFINITY, |a, &b| if b < a { b } else { a })
    }

    /// Maximum over admissible windows.
    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| !v.is_nan())
            .fold(f64::NEG_INFINITY, |a, &b| if b > a { b } else { a })
    }
}

/// Birkhoff sum of `phi` over every complete window of `w`, that is
/// `S_n phi` with `n = |w| - depth + 1`.
pub fn birkhoff_sum(phi: &Potential, w: &Word) -> Result<f64> {
    if w.len() < phi.depth() {
        return Err(Error::WordTooShort {
            needed: phi.depth(),
            got: w.len(),
        });
    }
    birkhoff_prefix(phi, w.symbols(), w.len() - phi.depth() + 1)
}

/// `S_n phi` read off the first `n + depth - 1` symbols of `symbols`.
pub(crate) fn birkhoff_prefix(phi: &Potential, symbols: &[u8], n: usize) -> Result<f64> {
    let needed = n + phi.depth() - 1;
    if symbols.len() < needed {
        return Err(Error::WordTooShort {
            needed,
            got: symbols.len(),
        });
    }
    let mut acc = 0.0;
    for i in 0..n {
        acc += phi.eval(&symbols[i..i + phi.depth()]);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn golden_mean_word_counts_are_fibonacci() {
        let s = Subshift::golden_mean();
        let counts: Vec<u128> = (1..=8).map(|n| s.count_words(n)).collect();
        assert_eq!(counts, vec![2, 3, 5, 8, 13, 21, 34, 55]);
    }

    #[test]
    fn golden_mean_words_of_length_four() {
        let s = Subshift::golden_mean();
        let words: Vec<Vec<u8>> = s.words(4).map(Word::into_symbols).collect();
        assert_eq!(
            words,
            vec![
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, 1, 0],
                vec![0, 1, 0, 0],
                vec![0, 1, 0, 1],
                vec![1, 0, 0, 0],
                vec![1, 0, 0, 1],
                vec![1, 0, 1, 0],
            ]
        );
        assert_eq!(words.len() as u128, s.count_words(4));
    }

    #[test]
    fn full_shift_enumeration_is_odometer_order() {
        let s = Subshift::full(3, Sided::OneSided);
        let words: Vec<Vec<u8>> = s.words(2).map(Word::into_symbols).collect();
        assert_eq!(words.len(), 9);
        assert_eq!(words[0], vec![0, 0]);
        assert_eq!(words[5], vec![1, 2]);
        assert_eq!(words[8], vec![2, 2]);
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(words, sorted);
    }

    #[test]
    fn admissibility_respects_forbidden_pair() {
        let s = Subshift::golden_mean();
        assert!(s.is_admissible(&[0, 1, 0, 1, 0]));
        assert!(!s.is_admissible(&[0, 1, 1, 0]));
        assert!(!s.is_admissible(&[0, 2]));
    }

    #[test]
    fn reducible_and_defective_matrices_are_rejected() {
        let dead_row = Subshift::new(2, &[vec![1, 1], vec![0, 0]], Sided::OneSided);
        assert!(matches!(dead_row, Err(Error::InvalidSubshift(_))));
        let reducible = Subshift::new(
            3,
            &[vec![1, 1, 0], vec![1, 1, 0], vec![1, 1, 1]],
            Sided::OneSided,
        );
        assert!(matches!(reducible, Err(Error::InvalidSubshift(_))));
        let ok = Subshift::new(2, &[vec![1, 1], vec![1, 0]], Sided::OneSided).unwrap();
        assert_eq!(ok, Subshift::golden_mean());
    }

    #[test]
    fn ball_depth_matches_dyadic_brackets() {
        assert_eq!(ball_depth(1.0).unwrap(), 0);
        assert_eq!(ball_depth(0.6).unwrap(), 0);
        assert_eq!(ball_depth(0.5).unwrap(), 1);
        assert_eq!(ball_depth(0.3).unwrap(), 1);
        assert_eq!(ball_depth(0.25).unwrap(), 2);
        assert_eq!(ball_depth(2.0f64.powi(-5)).unwrap(), 5);
        assert!(ball_depth(0.0).is_err());
        assert!(ball_depth(1.5).is_err());
    }

    #[test]
    fn potential_tabulates_only_admissible_windows() {
        let s = Subshift::golden_mean();
        let phi = Potential::from_pairs(
            &s,
            2,
            &[
                (vec![0, 0], 0.15),
                (vec![0, 1], -0.1),
                (vec![1, 0], -0.1),
            ],
        )
        .unwrap();
        assert_eq!(phi.eval(&[0, 0]), 0.15);
        assert!(phi.eval(&[1, 1]).is_nan());
        assert_eq!(phi.min_value(), -0.1);
        assert_eq!(phi.max_value(), 0.15);

        let missing = Potential::from_pairs(&s, 2, &[(vec![0, 0], 0.15)]);
        assert!(matches!(missing, Err(Error::InvalidPotential(_))));
        let forbidden = Potential::from_pairs(
            &s,
            2,
            &[
                (vec![0, 0], 0.15),
                (vec![0, 1], -0.1),
                (vec![1, 0], -0.1),
                (vec![1, 1], 7.0),
            ],
        );
        assert!(matches!(forbidden, Err(Error::InvalidPotential(_))));
    }

    #[test]
    fn birkhoff_sum_slides_windows_of_potential_depth() {
        let s = Subshift::full(2, Sided::OneSided);
        let phi = Potential::from_fn(&s, 1, |w| if w[0] == 1 { 1.0 } else { 0.0 }).unwrap();
        let w = Word::new(vec![1, 0, 1, 1, 0]);
        assert_eq!(birkhoff_sum(&phi, &w).unwrap(), 3.0);

        let pair = Potential::from_fn(&s, 2, |w| (w[0] * 2 + w[1]) as f64).unwrap();
        let sum = birkhoff_sum(&pair, &w).unwrap();
        assert_eq!(sum, 2.0 + 1.0 + 3.0 + 2.0);
        assert!(birkhoff_sum(&pair, &Word::new(vec![1])).is_err());
    }

    #[test]
    fn scaling_and_shifting_act_pointwise() {
        let s = Subshift::golden_mean();
        let phi = Potential::from_pairs(
            &s,
            1,
            &[(vec![0], 0.2), (vec![1], -0.3)],
        )
        .unwrap();
        let g = phi.scaled(2.0).plus_const(1.0);
        assert!((g.eval(&[0]) - 1.4).abs() < 1e-15);
        assert!((g.eval(&[1]) - 0.4).abs() < 1e-15);
    }
}
