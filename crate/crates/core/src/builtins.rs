//! Named example systems, measures, and models.
//!
//! These are the fixtures the command line tool and the test suite share:
//! full shifts, the golden mean shift, product and Markov measures with
//! known entropies, two middle-third style repellers, and a linear
//! hyperbolic surrogate whose expansion factor is the largest eigenvalue
//! `(3 + sqrt 5) / 2` of the trace-3 unimodular matrix, coded on the two
//! sided full shift on three symbols (its entropy, `ln((3+sqrt 5)/2)`,
//! exceeds `ln 2`, so two symbols would not carry it).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::dimension::{dimension_oracle, HyperbolicModel, RepellerModel};
use crate::error::{Error, Result};
use crate::measure::MeasureSpec;
use crate::shift::{Potential, Sided, Subshift};

/// Log of the expansion factor of the hyperbolic surrogate.
pub fn cat_expansion() -> f64 {
    ((3.0 + 5.0f64.sqrt()) / 2.0).ln()
}

pub fn system(name: &str) -> Result<Subshift> {
    match name {
        "full-2" => Ok(Subshift::full(2, Sided::OneSided)),
        "full-3" => Ok(Subshift::full(3, Sided::OneSided)),
        "golden-mean" => Ok(Subshift::golden_mean()),
        "two-sided-full-2" => Ok(Subshift::full(2, Sided::TwoSided)),
        "two-sided-full-3" => Ok(Subshift::full(3, Sided::TwoSided)),
        _ => Err(Error::InvalidParameter {
            name: "system",
            reason: format!("unknown system `{name}`"),
        }),
    }
}

pub fn measure(name: &str) -> Result<MeasureSpec> {
    match name {
        "bernoulli-half" => MeasureSpec::bernoulli(alloc::vec![0.5, 0.5]),
        "bernoulli-07" => MeasureSpec::bernoulli(alloc::vec![0.3, 0.7]),
        "bernoulli-09" => MeasureSpec::bernoulli(alloc::vec![0.1, 0.9]),
        "golden-markov" => MeasureSpec::markov(
            alloc::vec![alloc::vec![0.5, 0.5], alloc::vec![1.0, 0.0]],
            alloc::vec![2.0 / 3.0, 1.0 / 3.0],
        ),
        "mix-half-ninety" => MeasureSpec::mixture(
            alloc::vec![0.5, 0.5],
            alloc::vec![measure("bernoulli-half")?, measure("bernoulli-09")?],
        ),
        "mix-half-quarter" => MeasureSpec::mixture(
            alloc::vec![0.5, 0.5],
            alloc::vec![
                measure("bernoulli-half")?,
                MeasureSpec::bernoulli(alloc::vec![0.25, 0.75])?,
            ],
        ),
        "catmap-max-entropy" => bernoulli_with_entropy(3, cat_expansion()),
        "catmap-half-entropy" => bernoulli_with_entropy(3, 0.5 * cat_expansion()),
        "catmap-mix" => MeasureSpec::mixture(
            alloc::vec![0.5, 0.5],
            alloc::vec![
                measure("catmap-max-entropy")?,
                measure("catmap-half-entropy")?,
            ],
        ),
        _ => Err(Error::InvalidParameter {
            name: "measure",
            reason: format!("unknown measure `{name}`"),
        }),
    }
}

pub fn repeller(name: &str) -> Result<RepellerModel> {
    match name {
        "middle-third" => {
            let base = system("full-2")?;
            let geometry = Potential::constant(&base, 3.0f64.ln())?;
            RepellerModel::new(base, geometry)
        }
        "ratios-half-quarter" => {
            let base = system("full-2")?;
            let geometry = Potential::from_pairs(
                &base,
                1,
                &[
                    (alloc::vec![0], 2.0f64.ln()),
                    (alloc::vec![1], 4.0f64.ln()),
                ],
            )?;
            RepellerModel::new(base, geometry)
        }
        _ => Err(Error::InvalidParameter {
            name: "model",
            reason: format!("unknown repeller `{name}`"),
        }),
    }
}

pub fn hyperbolic(name: &str) -> Result<HyperbolicModel> {
    match name {
        "catmap-surrogate" => {
            let base = system("two-sided-full-3")?;
            let rate = cat_expansion();
            let unstable = Potential::constant(&base, rate)?;
            let stable = Potential::constant(&base, -rate)?;
            HyperbolicModel::new(base, unstable, stable, true)
        }
        _ => Err(Error::InvalidParameter {
            name: "model",
            reason: format!("unknown hyperbolic model `{name}`"),
        }),
    }
}

/// The symmetric Bernoulli measure `(p, q, .., q)` on `alphabet` symbols
/// with entropy `target`, found by bisecting `p` on `[1/alphabet, 1)`
/// where the entropy falls from `ln alphabet` to 0.
pub fn bernoulli_with_entropy(alphabet: usize, target: f64) -> Result<MeasureSpec> {
    if alphabet < 2 {
        return Err(Error::InvalidParameter {
            name: "alphabet",
            reason: "must be at least 2".to_string(),
        });
    }
    let hmax = (alphabet as f64).ln();
    if !(target > 0.0 && target <= hmax) {
        return Err(Error::InvalidParameter {
            name: "target",
            reason: format!("entropy must lie in (0, ln {alphabet}]"),
        });
    }
    let rest = (alphabet - 1) as f64;
    let entropy = |p: f64| {
        let q = (1.0 - p) / rest;
        let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
        term(p) + rest * term(q)
    };
    let mut lo = 1.0 / alphabet as f64;
    let mut hi = 1.0 - 1e-15;
    if entropy(lo) < target {
        return probs_for(lo, alphabet);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let spec = probs_for(p, alphabet)?;
    let achieved = spec.entropy();
    if (achieved - target).abs() > 1e-12 {
        return Err(Error::Numerical(format!(
            "entropy match failed: wanted {target}, reached {achieved}"
        )));
    }
    Ok(spec)
}

fn probs_for(p: f64, alphabet: usize) -> Result<MeasureSpec> {
    let q = (1.0 - p) / (alphabet - 1) as f64;
    let mut probs = alloc::vec![q; alphabet];
    probs[0] = p;
    // guard against float drift in the tail
    let tail: f64 = probs[1..].iter().sum();
    probs[0] = 1.0 - tail;
    MeasureSpec::bernoulli(probs)
}

/// One catalog row for discovery listings.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltinEntry {
    pub kind: &'static str,
    pub name: &'static str,
    pub summary: String,
}

/// Every builtin with a short summary of its defining constants.
pub fn catalog() -> Vec<BuiltinEntry> {
    let mut rows = Vec::new();
    for name in [
        "full-2",
        "full-3",
        "golden-mean",
        "two-sided-full-2",
        "two-sided-full-3",
    ] {
        let s = system(name).expect("builtin");
        let sided = match s.sided() {
            Sided::OneSided => "one sided",
            Sided::TwoSided => "two sided",
        };
        let zero = Potential::constant(&s, 0.0).expect("builtin");
        let entropy = crate::transfer::pressure_oracle(&s, &zero).expect("builtin");
        rows.push(BuiltinEntry {
            kind: "system",
            name,
            summary: format!(
                "{sided}, alphabet {}, topological entropy {:.12}",
                s.alphabet(),
                entropy
            ),
        });
    }
    for name in [
        "bernoulli-half",
        "bernoulli-07",
        "bernoulli-09",
        "golden-markov",
        "mix-half-ninety",
        "mix-half-quarter",
        "catmap-max-entropy",
        "catmap-half-entropy",
        "catmap-mix",
    ] {
        let mu = measure(name).expect("builtin");
        let parts = mu.component_weights().len();
        rows.push(BuiltinEntry {
            kind: "measure",
            name,
            summary: format!(
                "alphabet {}, {} component(s), entropy {:.12}",
                mu.alphabet(),
                parts,
                mu.entropy()
            ),
        });
    }
    for name in ["middle-third", "ratios-half-quarter"] {
        let model = repeller(name).expect("builtin");
        let k = model.base().alphabet();
        let uniform =
            MeasureSpec::bernoulli(alloc::vec![1.0 / k as f64; k]).expect("builtin");
        let dim = dimension_oracle(&model, &uniform).expect("builtin");
        rows.push(BuiltinEntry {
            kind: "repeller",
            name,
            summary: format!(
                "alphabet {k}, log rates in [{:.12}, {:.12}], uniform measure dimension {:.12}",
                model.geometry().min_value(),
                model.geometry().max_value(),
                dim.value
            ),
        });
    }
    let model = hyperbolic("catmap-surrogate").expect("builtin");
    rows.push(BuiltinEntry {
        kind: "hyperbolic",
        name: "catmap-surrogate",
        summary: format!(
            "alphabet {}, unstable log rate {:.12}",
            model.base().alphabet(),
            model.unstable().max_value()
        ),
    });
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::hyperbolic_roots;
    use crate::pointwise::measure_pressure;
    use crate::shift::Potential;

    #[test]
    fn expansion_factor_matches_the_trace_three_matrix() {
        // largest root of x^2 - 3x + 1
        let lambda = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((lambda - 2.618033988749895).abs() < 1e-15);
        assert!((cat_expansion() - 0.9624236501192069).abs() < 1e-15);
        assert!((lambda * lambda - 3.0 * lambda + 1.0).abs() < 1e-14);
    }

    #[test]
    fn entropy_matched_bernoulli_hits_its_target() {
        let target = cat_expansion();
        let mu = bernoulli_with_entropy(3, target).unwrap();
        assert!((mu.entropy() - target).abs() < 1e-12);
        let half = bernoulli_with_entropy(3, 0.5 * target).unwrap();
        assert!((half.entropy() - 0.5 * target).abs() < 1e-12);
        // the half-entropy solution is more concentrated
        let MeasureSpec::Bernoulli { probs: p1 } = &mu else {
            unreachable!()
        };
        let MeasureSpec::Bernoulli { probs: p2 } = &half else {
            unreachable!()
        };
        assert!(p2[0] > p1[0]);
        // ln 3 is the ceiling on three symbols
        assert!(bernoulli_with_entropy(3, 1.09).is_ok());
        assert!(bernoulli_with_entropy(3, 1.2).is_err());
    }

    #[test]
    fn full_entropy_request_returns_the_uniform_measure() {
        let mu = bernoulli_with_entropy(2, core::f64::consts::LN_2).unwrap();
        let MeasureSpec::Bernoulli { probs } = &mu else {
            unreachable!()
        };
        assert!((probs[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn surrogate_dimensions_are_two_one_two() {
        let model = hyperbolic("catmap-surrogate").unwrap();
        let full = measure("catmap-max-entropy").unwrap();
        let half = measure("catmap-half-entropy").unwrap();
        let mix = measure("catmap-mix").unwrap();
        assert!((hyperbolic_roots(&model, &full).unwrap().value - 2.0).abs() < 1e-8);
        assert!((hyperbolic_roots(&model, &half).unwrap().value - 1.0).abs() < 1e-8);
        assert!((hyperbolic_roots(&model, &mix).unwrap().value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn two_sided_systems_reach_the_free_energy_oracles() {
        let s = system("two-sided-full-3").unwrap();
        let mu = measure("catmap-mix").unwrap();
        let phi = Potential::constant(&s, 0.0).unwrap();
        let p = measure_pressure(&s, &mu, &phi);
        assert!((p - cat_expansion()).abs() < 1e-12);
    }

    #[test]
    fn catalog_names_resolve_to_their_constructors() {
        let rows = catalog();
        assert_eq!(rows.len(), 17);
        for row in &rows {
            match row.kind {
                "system" => {
                    system(row.name).unwrap();
                }
                "measure" => {
                    measure(row.name).unwrap();
                }
                "repeller" => {
                    repeller(row.name).unwrap();
                }
                "hyperbolic" => {
                    hyperbolic(row.name).unwrap();
                }
                other => panic!("unexpected kind {other}"),
            }
            assert!(!row.summary.is_empty());
        }
    }
}
