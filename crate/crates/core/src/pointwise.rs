//! Per-orbit quantities and their measure theoretic envelopes.
//!
//! The local entropy of an orbit at scale `(n, eps)` is
//! `-(1/n) ln mu(B_n(x, eps))`, read off the cylinder mass of the visible
//! prefix; adding the Birkhoff average of the potential gives the pointwise
//! pressure. For an ergodic measure these converge almost surely to
//! `h + integral of phi`. Under a mixture they converge to the free energy
//! of whichever component the orbit was drawn from, so the essential
//! supremum over orbits is the maximum component free energy while the
//! plain average stays the weighted mean; the gap between the two is the
//! defect of ergodicity.
//!
//! Everything is seeded: equal seeds give equal samples, which the
//! consistency checks and the command line runner both rely on.

use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measure::MeasureSpec;
use crate::shift::{ball_depth, birkhoff_prefix, Potential, Subshift, Word};

const MAX_SAMPLE_LEN: usize = 10_000_000;

/// A finite orbit segment drawn from a measure, remembering its seed and,
/// for mixtures, the component it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSample {
    word: Word,
    seed: u64,
    component: Option<usize>,
}

impl OrbitSample {
    /// Draws `len` symbols from `mu` with a dedicated generator seeded by
    /// `seed`. Mixtures first draw a component and stay inside it.
    pub fn draw(mu: &MeasureSpec, len: usize, seed: u64) -> Result<OrbitSample> {
        check_len(len)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (symbols, component) = mu.sample_into(len, &mut rng);
        Ok(OrbitSample {
            word: Word::new(symbols),
            seed,
            component,
        })
    }

    /// Draws from one fixed component of a mixture (or from an ergodic
    /// measure when `component` is 0).
    pub fn draw_from_component(
        mu: &MeasureSpec,
        component: usize,
        len: usize,
        seed: u64,
    ) -> Result<OrbitSample> {
        check_len(len)?;
        let parts = mu.component_weights();
        let Some((_, part)) = parts.get(component) else {
            return Err(Error::InvalidParameter {
                name: "component",
                reason: alloc::format!(
                    "index {component} out of range for {} component(s)",
                    parts.len()
                ),
            });
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (symbols, _) = part.sample_into(len, &mut rng);
        Ok(OrbitSample {
            word: Word::new(symbols),
            seed,
            component: Some(component),
        })
    }

    /// Wraps an explicit word as an orbit segment (seed 0, no component).
    pub fn from_word(word: Word) -> OrbitSample {
        OrbitSample {
            word,
            seed: 0,
            component: None,
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn component(&self) -> Option<usize> {
        self.component
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || len > MAX_SAMPLE_LEN {
        return Err(Error::InvalidParameter {
            name: "len",
            reason: alloc::format!("must lie in [1, {MAX_SAMPLE_LEN}]"),
        });
    }
    Ok(())
}

/// Local entropy of an orbit at scale `(n, eps)`.
///
/// `raw` divides by `n` (the dynamical normalization); `depth_corrected`
/// divides by `n + ball_depth(eps)`, which removes the resolution bias for
/// product-like measures. `infinite` marks a prefix of mass zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalEntropy {
    pub raw: f64,
    pub depth_corrected: f64,
    pub infinite: bool,
}

pub fn local_entropy(
    mu: &MeasureSpec,
    orbit: &OrbitSample,
    n: usize,
    eps: f64,
) -> Result<LocalEntropy> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be positive".to_string(),
        });
    }
    let m = ball_depth(eps)?;
    let visible = n + m;
    if orbit.word().len() < visible {
        return Err(Error::WordTooShort {
            needed: visible,
            got: orbit.word().len(),
        });
    }
    let log_mass = mu.log_cylinder_mass(&orbit.word().symbols()[..visible]);
    Ok(LocalEntropy {
        raw: -log_mass / n as f64,
        depth_corrected: -log_mass / visible as f64,
        infinite: log_mass == f64::NEG_INFINITY,
    })
}

/// Birkhoff average `(1/n) S_n phi` along the orbit.
pub fn birkhoff_average(phi: &Potential, orbit: &OrbitSample, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be positive".to_string(),
        });
    }
    Ok(birkhoff_prefix(phi, orbit.word().symbols(), n)? / n as f64)
}

/// Local entropy plus Birkhoff average at a common `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwisePressure {
    pub value: f64,
    pub entropy: LocalEntropy,
    pub average: f64,
}

pub fn pointwise_pressure(
    mu: &MeasureSpec,
    phi: &Potential,
    orbit: &OrbitSample,
    n: usize,
    eps: f64,
) -> Result<PointwisePressure> {
    let entropy = local_entropy(mu, orbit, n, eps)?;
    let average = birkhoff_average(phi, orbit, n)?;
    Ok(PointwisePressure {
        value: entropy.raw + average,
        entropy,
        average,
    })
}

/// Measure theoretic pressure: the essential supremum over orbits of the
/// pointwise pressure, which for these measures is the largest free energy
/// among components of positive weight.
pub fn measure_pressure(shift: &Subshift, mu: &MeasureSpec, phi: &Potential) -> f64 {
    let energies = mu.component_free_energies(shift, phi);
    mu.component_weights()
        .iter()
        .zip(&energies)
        .filter(|((w, _), _)| *w > 0.0)
        .map(|(_, &e)| e)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Entropy split of a possibly non-ergodic measure: the essential supremum
/// of local entropies, the average (Kolmogorov-Sinai) entropy, and their
/// gap. The gap vanishes exactly when every positive weight component has
/// the same entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySplit {
    pub ess_sup: f64,
    pub average: f64,
    pub gap: f64,
}

pub fn measure_entropy(mu: &MeasureSpec) -> EntropySplit {
    let ess_sup = mu
        .component_weights()
        .iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(_, c)| c.entropy())
        .fold(f64::NEG_INFINITY, f64::max);
    let average = mu.entropy();
    EntropySplit {
        ess_sup,
        average,
        gap: ess_sup - average,
    }
}

/// Sampling plan for [`ess_sup_check`]: each positive weight component is
/// sampled once per seed at scale `(n, eps)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EssSupPlan {
    pub n: usize,
    pub eps: f64,
    pub seeds: Vec<u64>,
}

/// Sampled pointwise pressures for one component.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentCluster {
    pub component: usize,
    /// The component's free energy (its almost sure limit).
    pub oracle: f64,
    pub mean: f64,
    pub max_abs_dev: f64,
}

/// Outcome of [`ess_sup_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct EssSupReport {
    pub clusters: Vec<ComponentCluster>,
    /// Largest sampled pointwise pressure across all components.
    pub max_observed: f64,
    /// The claimed essential supremum, from [`measure_pressure`].
    pub oracle: f64,
}

/// Samples pointwise pressures per component and clusters them against the
/// component free energies. For mixtures this exhibits the essential
/// supremum directly: each cluster concentrates at its own component's free
/// energy, and the overall maximum approaches the measure pressure rather
/// than the weighted average.
pub fn ess_sup_check(
    shift: &Subshift,
    mu: &MeasureSpec,
    phi: &Potential,
    plan: &EssSupPlan,
) -> Result<EssSupReport> {
    if plan.seeds.is_empty() {
        return Err(Error::InvalidParameter {
            name: "seeds",
            reason: "must not be empty".to_string(),
        });
    }
    mu.validate_on(shift)?;
    let m = ball_depth(plan.eps)?;
    let len = plan.n + m + phi.depth();
    let energies = mu.component_free_energies(shift, phi);
    let mut clusters = Vec::new();
    let mut max_observed = f64::NEG_INFINITY;
    for (idx, (weight, _)) in mu.component_weights().iter().enumerate() {
        if *weight == 0.0 {
            continue;
        }
        let mut values = Vec::with_capacity(plan.seeds.len());
        for &seed in &plan.seeds {
            let orbit = OrbitSample::draw_from_component(mu, idx, len, seed)?;
            let p = pointwise_pressure(mu, phi, &orbit, plan.n, plan.eps)?;
            values.push(p.value);
            if p.value > max_observed {
                max_observed = p.value;
            }
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let max_abs_dev = values
            .iter()
            .map(|v| (v - energies[idx]).abs())
            .fold(0.0, f64::max);
        clusters.push(ComponentCluster {
            component: idx,
            oracle: energies[idx],
            mean,
            max_abs_dev,
        });
    }
    Ok(EssSupReport {
        clusters,
        max_observed,
        oracle: measure_pressure(shift, mu, phi),
    })
}
