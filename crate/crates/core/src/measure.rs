//! Shift invariant measures: Bernoulli, stationary Markov, and finite
//! mixtures of those, plus empirical measures of finite words and total
//! variation neighborhoods around a target measure.
//!
//! A mixture is the measure theoretic stand-in for non-ergodic behaviour:
//! cylinder masses, entropy, and integrals are affine in the weights, while
//! quantities like the essential supremum of local entropies see only the
//! individual components. Components must be pairwise distinct ergodic
//! specs with positive total weight.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;
use rand::Rng;

use crate::error::{Error, Result};
use crate::shift::{Potential, Subshift, Word};
use crate::solve::{logsumexp, vec_of};

const SUM_TOL: f64 = 1e-12;

/// A Bernoulli, stationary Markov, or mixture measure on sequence space.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    Bernoulli {
        probs: Vec<f64>,
    },
    Markov {
        rows: Vec<Vec<f64>>,
        stationary: Vec<f64>,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<MeasureSpec>,
    },
}

fn check_prob_vector(p: &[f64], what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidMeasure(alloc::format!("{what} is empty")));
    }
    if p.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::InvalidMeasure(alloc::format!(
            "{what} has entries outside [0, 1]"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidMeasure(alloc::format!(
            "{what} sums to {total}, not 1"
        )));
    }
    Ok(())
}

impl MeasureSpec {
    pub fn bernoulli(probs: Vec<f64>) -> Result<Self> {
        check_prob_vector(&probs, "probability vector")?;
        if probs.len() < 2 {
            return Err(Error::InvalidMeasure(
                "need at least two symbols".to_string(),
            ));
        }
        Ok(MeasureSpec::Bernoulli { probs })
    }

    /// A stationary Markov chain. `stationary` must actually be stationary
    /// for `rows`, and the chain must be irreducible on the support of its
    /// transition matrix.
    pub fn markov(rows: Vec<Vec<f64>>, stationary: Vec<f64>) -> Result<Self> {
        let k = rows.len();
        if k < 2 || rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidMeasure(
                "transition rows must form a square matrix of size >= 2".to_string(),
            ));
        }
        for (i, row) in rows.iter().enumerate() {
            check_prob_vector(row, &alloc::format!("transition row {i}"))?;
        }
        check_prob_vector(&stationary, "stationary vector")?;
        if stationary.len() != k {
            return Err(Error::InvalidMeasure(
                "stationary vector length does not match transition matrix".to_string(),
            ));
        }
        for j in 0..k {
            let pushed: f64 = (0..k).map(|i| stationary[i] * rows[i][j]).sum();
            if (pushed - stationary[j]).abs() > SUM_TOL {
                return Err(Error::InvalidMeasure(alloc::format!(
                    "vector is not stationary: (pi P)_{j} = {pushed} vs pi_{j} = {}",
                    stationary[j]
                )));
            }
        }
        let spec = MeasureSpec::Markov { rows, stationary };
        if !spec.markov_support_irreducible() {
            return Err(Error::InvalidMeasure(
                "transition matrix is not irreducible on its support".to_string(),
            ));
        }
        Ok(spec)
    }

    /// A convex combination of pairwise distinct ergodic components.
    pub fn mixture(weights: Vec<f64>, components: Vec<MeasureSpec>) -> Result<Self> {
        if components.len() < 2 || weights.len() != components.len() {
            return Err(Error::InvalidMeasure(
                "mixture needs at least two components with matching weights".to_string(),
            ));
        }
        check_prob_vector(&weights, "weight vector")?;
        let k = components[0].alphabet();
        for c in &components {
            if matches!(c, MeasureSpec::Mixture { .. }) {
                return Err(Error::InvalidMeasure(
                    "mixture components must be ergodic (not mixtures)".to_string(),
                ));
            }
            if c.alphabet() != k {
                return Err(Error::InvalidMeasure(
                    "mixture components must share one alphabet".to_string(),
                ));
            }
        }
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                if components[i] == components[j] {
                    return Err(Error::InvalidMeasure(alloc::format!(
                        "mixture components {i} and {j} are identical"
                    )));
                }
            }
        }
        Ok(MeasureSpec::Mixture {
            weights,
            components,
        })
    }

    fn markov_support_irreducible(&self) -> bool {
        let MeasureSpec::Markov { rows, .. } = self else {
            return true;
        };
        let k = rows.len();
        let reach = |forward: bool| -> u64 {
            let mut seen = 1u64;
            let mut frontier = alloc::vec![0usize];
            while let Some(a) = frontier.pop() {
                for b in 0..k {
                    let edge = if forward {
                        rows[a][b] > 0.0
                    } else {
                        rows[b][a] > 0.0
                    };
                    if edge && seen & (1 << b) == 0 {
                        seen |= 1 << b;
                        frontier.push(b);
                    }
                }
            }
            seen
        };
        let all = (1u64 << k) - 1;
        reach(true) == all && reach(false) == all
    }

    pub fn alphabet(&self) -> usize {
        match self {
            MeasureSpec::Bernoulli { probs } => probs.len(),
            MeasureSpec::Markov { rows, .. } => rows.len(),
            MeasureSpec::Mixture { components, .. } => components[0].alphabet(),
        }
    }

    pub fn is_ergodic_spec(&self) -> bool {
        !matches!(self, MeasureSpec::Mixture { .. })
    }

    /// `(weight, component)` pairs; a single pair `(1, self)` for ergodic
    /// specs.
    pub fn component_weights(&self) -> Vec<(f64, &MeasureSpec)> {
        match self {
            MeasureSpec::Mixture {
                weights,
                components,
            } => weights.iter().copied().zip(components.iter()).collect(),
            other => alloc::vec![(1.0, other)],
        }
    }

    /// Checks that the measure lives on the given subshift: the alphabet
    /// matches and no mass sits on forbidden transitions.
    pub fn validate_on(&self, shift: &Subshift) -> Result<()> {
        if self.alphabet() != shift.alphabet() {
            return Err(Error::InvalidMeasure(alloc::format!(
                "measure alphabet {} does not match subshift alphabet {}",
                self.alphabet(),
                shift.alphabet()
            )));
        }
        match self {
            MeasureSpec::Bernoulli { probs } => {
                for a in 0..probs.len() {
                    for b in 0..probs.len() {
                        if probs[a] > 0.0 && probs[b] > 0.0 && !shift.allows(a as u8, b as u8) {
                            return Err(Error::InvalidMeasure(alloc::format!(
                                "product measure puts mass on forbidden pair {a}{b}"
                            )));
                        }
                    }
                }
            }
            MeasureSpec::Markov { rows, stationary } => {
                for a in 0..rows.len() {
                    for b in 0..rows.len() {
                        if stationary[a] > 0.0
                            && rows[a][b] > 0.0
                            && !shift.allows(a as u8, b as u8)
                        {
                            return Err(Error::InvalidMeasure(alloc::format!(
                                "markov chain puts mass on forbidden pair {a}{b}"
                            )));
                        }
                    }
                }
            }
            MeasureSpec::Mixture { components, .. } => {
                for c in components {
                    c.validate_on(shift)?;
                }
            }
        }
        Ok(())
    }

    /// Mass of the cylinder fixed by `word` at the anchor.
    pub fn cylinder_mass(&self, word: &[u8]) -> f64 {
        match self {
            MeasureSpec::Bernoulli { probs } => word
                .iter()
                .map(|&s| probs.get(s as usize).copied().unwrap_or(0.0))
                .product(),
            MeasureSpec::Markov { rows, stationary } => {
                let Some(&first) = word.first() else {
                    return 1.0;
                };
                let mut mass = stationary.get(first as usize).copied().unwrap_or(0.0);
                for pair in word.windows(2) {
                    if mass == 0.0 {
                        return 0.0;
                    }
                    mass *= rows[pair[0] as usize][pair[1] as usize];
                }
                mass
            }
            MeasureSpec::Mixture {
                weights,
                components,
            } => weights
                .iter()
                .zip(components)
                .map(|(w, c)| w * c.cylinder_mass(word))
                .sum(),
        }
    }

    /// `ln` of [`Self::cylinder_mass`], computed in log space so that long
    /// cylinders (lengths in the tens of thousands) do not underflow.
    /// Returns `-inf` on mass zero.
    pub fn log_cylinder_mass(&self, word: &[u8]) -> f64 {
        match self {
            MeasureSpec::Bernoulli { probs } => word
                .iter()
                .map(|&s| probs.get(s as usize).copied().unwrap_or(0.0).ln())
                .sum(),
            MeasureSpec::Markov { rows, stationary } => {
                let Some(&first) = word.first() else {
                    return 0.0;
                };
                let mut acc = stationary.get(first as usize).copied().unwrap_or(0.0).ln();
                for pair in word.windows(2) {
                    acc += rows[pair[0] as usize][pair[1] as usize].ln();
                }
                acc
            }
            MeasureSpec::Mixture {
                weights,
                components,
            } => {
                let terms: Vec<f64> = weights
                    .iter()
                    .zip(components)
                    .map(|(w, c)| w.ln() + c.log_cylinder_mass(word))
                    .collect();
                logsumexp(&terms)
            }
        }
    }

    /// Kolmogorov-Sinai entropy, in nats. Affine over mixture weights.
    pub fn entropy(&self) -> f64 {
        let xlnx = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
        match self {
            MeasureSpec::Bernoulli { probs } => probs.iter().copied().map(xlnx).sum(),
            MeasureSpec::Markov { rows, stationary } => stationary
                .iter()
                .zip(rows)
                .map(|(&pi, row)| pi * row.iter().copied().map(xlnx).sum::<f64>())
                .sum(),
            MeasureSpec::Mixture {
                weights,
                components,
            } => weights
                .iter()
                .zip(components)
                .map(|(w, c)| w * c.entropy())
                .sum(),
        }
    }

    /// Entropy of each component, in component order.
    pub fn component_entropies(&self) -> Vec<f64> {
        self.component_weights()
            .iter()
            .map(|(_, c)| c.entropy())
            .collect()
    }

    /// `integral of phi` with respect to the measure, via the marginal of
    /// depth `phi.depth()`.
    pub fn integrate(&self, shift: &Subshift, phi: &Potential) -> f64 {
        self.component_weights()
            .iter()
            .map(|(w, c)| {
                if *w == 0.0 {
                    0.0
                } else {
                    w * c.ergodic_integral(shift, phi)
                }
            })
            .sum()
    }

    fn ergodic_integral(&self, shift: &Subshift, phi: &Potential) -> f64 {
        shift
            .words(phi.depth())
            .map(|w| {
                let mass = self.cylinder_mass(w.symbols());
                if mass == 0.0 {
                    0.0
                } else {
                    mass * phi.eval(w.symbols())
                }
            })
            .sum()
    }

    /// Integral of `phi` against each component.
    pub fn component_integrals(&self, shift: &Subshift, phi: &Potential) -> Vec<f64> {
        self.component_weights()
            .iter()
            .map(|(_, c)| c.ergodic_integral(shift, phi))
            .collect()
    }

    /// Free energy `h + integral of phi`, affine over mixture weights.
    pub fn free_energy(&self, shift: &Subshift, phi: &Potential) -> f64 {
        self.entropy() + self.integrate(shift, phi)
    }

    /// Free energy of each component.
    pub fn component_free_energies(&self, shift: &Subshift, phi: &Potential) -> Vec<f64> {
        self.component_weights()
            .iter()
            .map(|(_, c)| c.entropy() + c.ergodic_integral(shift, phi))
            .collect()
    }

    /// The depth-`depth` marginal: every admissible word with its cylinder
    /// mass, in lexicographic order.
    pub fn marginal(&self, shift: &Subshift, depth: usize) -> Vec<(Vec<u8>, f64)> {
        shift
            .words(depth)
            .map(|w| {
                let mass = self.cylinder_mass(w.symbols());
                (w.into_symbols(), mass)
            })
            .collect()
    }

    /// Draws `len` symbols. For mixtures, one component is drawn first and
    /// the sample stays inside it; the chosen index is returned.
    pub fn sample_into(&self, len: usize, rng: &mut impl Rng) -> (Vec<u8>, Option<usize>) {
        match self {
            MeasureSpec::Bernoulli { probs } => {
                let mut out = Vec::with_capacity(len);
                for _ in 0..len {
                    out.push(draw_index(probs, rng) as u8);
                }
                (out, None)
            }
            MeasureSpec::Markov { rows, stationary } => {
                let mut out = Vec::with_capacity(len);
                if len == 0 {
                    return (out, None);
                }
                let mut state = draw_index(stationary, rng);
                out.push(state as u8);
                for _ in 1..len {
                    state = draw_index(&rows[state], rng);
                    out.push(state as u8);
                }
                (out, None)
            }
            MeasureSpec::Mixture {
                weights,
                components,
            } => {
                let idx = draw_index(weights, rng);
                let (sample, _) = components[idx].sample_into(len, rng);
                (sample, Some(idx))
            }
        }
    }
}

fn draw_index(probs: &[f64], rng: &mut impl Rng) -> usize {
    let r: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if r < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// The empirical distribution of depth-`depth` windows of a word.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    depth: usize,
    freqs: BTreeMap<Vec<u8>, f64>,
}

impl EmpiricalMeasure {
    /// Sliding window frequencies over all `len - depth + 1` windows.
    pub fn from_word(word: &Word, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter {
                name: "depth",
                reason: "must be positive".to_string(),
            });
        }
        if word.len() < depth {
            return Err(Error::WordTooShort {
                needed: depth,
                got: word.len(),
            });
        }
        let symbols = word.symbols();
        let windows = symbols.len() - depth + 1;
        let weight = 1.0 / windows as f64;
        let mut freqs: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
        for i in 0..windows {
            *freqs.entry(symbols[i..i + depth].to_vec()).or_insert(0.0) += weight;
        }
        Ok(EmpiricalMeasure { depth, freqs })
    }

    /// Builds an empirical measure from explicit frequencies (which must be
    /// nonnegative and sum to 1).
    pub fn from_frequencies(depth: usize, entries: &[(Vec<u8>, f64)]) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter {
                name: "depth",
                reason: "must be positive".to_string(),
            });
        }
        let mut freqs = BTreeMap::new();
        let mut total = 0.0;
        for (w, f) in entries {
            if w.len() != depth {
                return Err(Error::LengthMismatch {
                    left: depth,
                    right: w.len(),
                });
            }
            if *f < 0.0 {
                return Err(Error::InvalidMeasure(
                    "empirical frequencies must be nonnegative".to_string(),
                ));
            }
            if freqs.insert(w.clone(), *f).is_some() {
                return Err(Error::InvalidMeasure(alloc::format!(
                    "window {:?} specified twice",
                    w
                )));
            }
            total += *f;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidMeasure(alloc::format!(
                "empirical frequencies sum to {total}, not 1"
            )));
        }
        Ok(EmpiricalMeasure { depth, freqs })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn frequency(&self, window: &[u8]) -> f64 {
        self.freqs.get(window).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&[u8], f64)> {
        self.freqs.iter().map(|(w, &f)| (w.as_slice(), f))
    }
}

/// A total variation ball of radius `radius` around the depth-`depth`
/// marginal of `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodSpec {
    center: MeasureSpec,
    depth: usize,
    radius: f64,
}

impl NeighborhoodSpec {
    pub fn new(center: MeasureSpec, depth: usize, radius: f64) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter {
                name: "depth",
                reason: "must be positive".to_string(),
            });
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter {
                name: "radius",
                reason: "must be positive".to_string(),
            });
        }
        Ok(NeighborhoodSpec {
            center,
            depth,
            radius,
        })
    }

    pub fn center(&self) -> &MeasureSpec {
        &self.center
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Total variation distance between an empirical measure and the center
    /// marginal of matching depth.
    pub fn tv_distance(&self, empirical: &EmpiricalMeasure, shift: &Subshift) -> Result<f64> {
        if empirical.depth() != self.depth {
            return Err(Error::InvalidParameter {
                name: "empirical",
                reason: alloc::format!(
                    "depth {} does not match neighborhood depth {}",
                    empirical.depth(),
                    self.depth
                ),
            });
        }
        let mut marginal: BTreeMap<Vec<u8>, f64> =
            self.center.marginal(shift, self.depth).into_iter().collect();
        let mut acc = 0.0;
        for (w, f) in empirical.support() {
            acc += (f - marginal.remove(w).unwrap_or(0.0)).abs();
        }
        for (_, mass) in marginal {
            acc += mass;
        }
        Ok(0.5 * acc)
    }

    /// Strict membership: `tv_distance < radius`.
    pub fn contains(&self, empirical: &EmpiricalMeasure, shift: &Subshift) -> Result<bool> {
        Ok(self.tv_distance(empirical, shift)? < self.radius)
    }

    /// Dense center marginal table indexed by radix, for hot loops.
    pub(crate) fn dense_marginal(&self, shift: &Subshift) -> Vec<f64> {
        let k = shift.alphabet();
        let mut table = vec_of(0.0f64, k.pow(self.depth as u32));
        for (w, mass) in self.center.marginal(shift, self.depth) {
            let idx = w.iter().fold(0usize, |acc, &s| acc * k + s as usize);
            table[idx] = mass;
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::Sided;
    use alloc::vec;

    fn golden_markov() -> MeasureSpec {
        MeasureSpec::markov(
            vec![vec![0.5, 0.5], vec![1.0, 0.0]],
            vec![2.0 / 3.0, 1.0 / 3.0],
        )
        .unwrap()
    }

    #[test]
    fn bernoulli_cylinder_mass_is_a_product() {
        let mu = MeasureSpec::bernoulli(vec![0.25, 0.75]).unwrap();
        let mass = mu.cylinder_mass(&[1, 0, 1]);
        assert!((mass - 0.75 * 0.25 * 0.75).abs() < 1e-16);
        assert!((mu.log_cylinder_mass(&[1, 0, 1]) - mass.ln()).abs() < 1e-14);
    }

    #[test]
    fn markov_cylinder_mass_chains_transitions() {
        let mu = golden_markov();
        let mass = mu.cylinder_mass(&[0, 1, 0]);
        assert!((mass - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(mu.cylinder_mass(&[1, 1]), 0.0);
        assert_eq!(mu.log_cylinder_mass(&[1, 1]), f64::NEG_INFINITY);
    }

    #[test]
    fn mixture_mass_is_affine_in_weights() {
        let a = MeasureSpec::bernoulli(vec![0.5, 0.5]).unwrap();
        let b = MeasureSpec::bernoulli(vec![0.25, 0.75]).unwrap();
        let mix = MeasureSpec::mixture(vec![0.5, 0.5], vec![a, b]).unwrap();
        let mass = mix.cylinder_mass(&[1, 1]);
        assert!((mass - 13.0 / 32.0).abs() < 1e-16);
        assert!((mix.log_cylinder_mass(&[1, 1]) - mass.ln()).abs() < 1e-14);
    }

    #[test]
    fn log_mass_survives_ten_thousand_symbols() {
        let a = MeasureSpec::bernoulli(vec![0.5, 0.5]).unwrap();
        let b = MeasureSpec::bernoulli(vec![0.1, 0.9]).unwrap();
        let mix = MeasureSpec::mixture(vec![0.5, 0.5], vec![a, b]).unwrap();
        let word = vec_of(1u8, 10_000);
        let lm = mix.log_cylinder_mass(&word);
        // the 0.9-heavy component dominates: ln(0.5 * 0.9^10000) plus an
        // exponentially small correction from the fair component
        let expected = 0.5f64.ln() + 10_000.0 * 0.9f64.ln();
        assert!((lm - expected).abs() < 1e-7);
        // the direct product is subnormal garbage at this length
        assert!(mix.cylinder_mass(&word) < 1e-300);
    }

    #[test]
    fn entropies_match_closed_forms() {
        let fair = MeasureSpec::bernoulli(vec![0.5, 0.5]).unwrap();
        assert!((fair.entropy() - core::f64::consts::LN_2).abs() < 1e-15);

        let skew = MeasureSpec::bernoulli(vec![0.1, 0.9]).unwrap();
        assert!((skew.entropy() - 0.3250829733914482).abs() < 1e-15);

        let markov = golden_markov();
        assert!((markov.entropy() - 2.0 / 3.0 * core::f64::consts::LN_2).abs() < 1e-15);

        let mix = MeasureSpec::mixture(vec![0.5, 0.5], vec![fair, skew]).unwrap();
        assert!((mix.entropy() - 0.5091150769756967).abs() < 1e-15);
    }

    #[test]
    fn integral_uses_depth_matching_marginal() {
        let s = Subshift::golden_mean();
        let mu = golden_markov();
        let phi = Potential::from_pairs(
            &s,
            2,
            &[(vec![0, 0], 0.0), (vec![0, 1], 1.0), (vec![1, 0], 0.0)],
        )
        .unwrap();
        let integral = mu.integrate(&s, &phi);
        assert!((integral - 1.0 / 3.0).abs() < 1e-15);
        assert!((mu.free_energy(&s, &phi) - (mu.entropy() + integral)).abs() < 1e-15);
    }

    #[test]
    fn stationarity_is_enforced() {
        let bad = MeasureSpec::markov(
            vec![vec![0.5, 0.5], vec![1.0, 0.0]],
            vec![0.5, 0.5],
        );
        assert!(matches!(bad, Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn mixture_rejects_identical_components() {
        let a = MeasureSpec::bernoulli(vec![0.5, 0.5]).unwrap();
        let bad = MeasureSpec::mixture(vec![0.5, 0.5], vec![a.clone(), a.clone()]);
        assert!(matches!(bad, Err(Error::InvalidMeasure(_))));
        let nested = MeasureSpec::mixture(
            vec![0.5, 0.5],
            vec![
                a.clone(),
                MeasureSpec::mixture(
                    vec![0.5, 0.5],
                    vec![a, MeasureSpec::bernoulli(vec![0.1, 0.9]).unwrap()],
                )
                .unwrap(),
            ],
        );
        assert!(matches!(nested, Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn measure_on_wrong_support_is_rejected() {
        let s = Subshift::golden_mean();
        let fair = MeasureSpec::bernoulli(vec![0.5, 0.5]).unwrap();
        assert!(fair.validate_on(&s).is_err());
        assert!(golden_markov().validate_on(&s).is_ok());
        let full = Subshift::full(2, Sided::OneSided);
        assert!(fair.validate_on(&full).is_ok());
    }

    #[test]
    fn empirical_measure_counts_sliding_windows() {
        let w = Word::new(vec![0, 1, 1, 0, 1]);
        let e = EmpiricalMeasure::from_word(&w, 2).unwrap();
        assert!((e.frequency(&[0, 1]) - 0.5).abs() < 1e-15);
        assert!((e.frequency(&[1, 1]) - 0.25).abs() < 1e-15);
        assert!((e.frequency(&[1, 0]) - 0.25).abs() < 1e-15);
        assert_eq!(e.frequency(&[0, 0]), 0.0);
    }

    #[test]
    fn tv_neighborhood_accepts_exact_marginal() {
        let s = Subshift::full(2, Sided::OneSided);
        let center = MeasureSpec::bernoulli(vec![0.5, 0.5]).unwrap();
        let nb = NeighborhoodSpec::new(center, 1, 0.05).unwrap();
        let exact = EmpiricalMeasure::from_frequencies(
            1,
            &[(vec![0], 0.5), (vec![1], 0.5)],
        )
        .unwrap();
        assert!(nb.contains(&exact, &s).unwrap());
        let off = EmpiricalMeasure::from_frequencies(
            1,
            &[(vec![0], 0.4), (vec![1], 0.6)],
        )
        .unwrap();
        let tv = nb.tv_distance(&off, &s).unwrap();
        assert!((tv - 0.1).abs() < 1e-15);
        assert!(!nb.contains(&off, &s).unwrap());
    }

    #[test]
    fn sampling_is_reproducible_for_equal_seeds() {
        use rand_chacha::rand_core::SeedableRng;
        let mix = MeasureSpec::mixture(
            vec![0.5, 0.5],
            vec![
                MeasureSpec::bernoulli(vec![0.5, 0.5]).unwrap(),
                MeasureSpec::bernoulli(vec![0.1, 0.9]).unwrap(),
            ],
        )
        .unwrap();
        let mut r1 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut r2 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (w1, c1) = mix.sample_into(64, &mut r1);
        let (w2, c2) = mix.sample_into(64, &mut r2);
        assert_eq!(w1, w2);
        assert_eq!(c1, c2);
        assert!(c1.is_some());
    }
}
