//! Exact topological pressure via the transfer operator.
//!
//! For a potential of depth `d` the operator acts on admissible `d`-words:
//! the weighted adjacency matrix has entry `exp(phi(v))` whenever `w` can
//! follow `v` (the words overlap in `d - 1` symbols and, for `d = 1`, the
//! transition is allowed). Pressure is the log of its spectral radius.
//! Everything here is independent of the cover and counting estimators, so
//! it serves as the reference they are checked against.

use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::shift::{Potential, Subshift, Word};
use crate::solve::vec_of;

/// Topological pressure of `phi` on the subshift, in nats, to a relative
/// spectral radius accuracy of about 1e-13.
pub fn pressure_oracle(shift: &Subshift, phi: &Potential) -> Result<f64> {
    if phi.alphabet() != shift.alphabet() {
        return Err(Error::InvalidPotential(alloc::format!(
            "potential alphabet {} does not match subshift alphabet {}",
            phi.alphabet(),
            shift.alphabet()
        )));
    }
    let states: Vec<Vec<u8>> = shift.words(phi.depth()).map(Word::into_symbols).collect();
    let n = states.len();
    let d = phi.depth();
    let mut matrix = vec_of(vec_of(0.0f64, n), n);
    for (i, v) in states.iter().enumerate() {
        let weight = phi.eval(v).exp();
        for (j, w) in states.iter().enumerate() {
            let follows = if d == 1 {
                shift.allows(v[0], w[0])
            } else {
                v[1..] == w[..d - 1]
            };
            if follows {
                matrix[i][j] = weight;
            }
        }
    }
    if !strongly_connected(&matrix) {
        return Err(Error::OracleUndefined(
            "transfer graph on potential windows is not strongly connected".to_string(),
        ));
    }
    spectral_radius(&matrix).map(|rho| rho.ln())
}

fn strongly_connected(matrix: &[Vec<f64>]) -> bool {
    let n = matrix.len();
    if n == 0 {
        return false;
    }
    let reach = |forward: bool| -> usize {
        let mut seen = vec_of(false, n);
        seen[0] = true;
        let mut frontier = alloc::vec![0usize];
        let mut count = 1;
        while let Some(a) = frontier.pop() {
            for b in 0..n {
                let edge = if forward {
                    matrix[a][b] > 0.0
                } else {
                    matrix[b][a] > 0.0
                };
                if edge && !seen[b] {
                    seen[b] = true;
                    count += 1;
                    frontier.push(b);
                }
            }
        }
        count
    };
    reach(true) == n && reach(false) == n
}

/// Perron root of an irreducible nonnegative matrix by power iteration on
/// the primitive shift `M + I`, with two sided Collatz-Wielandt bounds as
/// the stopping rule.
fn spectral_radius(matrix: &[Vec<f64>]) -> Result<f64> {
    let n = matrix.len();
    let mut x = vec_of(1.0f64, n);
    let mut y = vec_of(0.0f64, n);
    for _ in 0..200_000 {
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..n {
                acc += matrix[i][j] * x[j];
            }
            y[i] = acc;
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let ratio = y[i] / x[i];
            lo = if ratio < lo { ratio } else { lo };
            hi = if ratio > hi { ratio } else { hi };
        }
        // lo and hi bracket rho(M) + 1, hence both exceed 1
        if hi - lo <= 1e-13 * (hi - 1.0) {
            return Ok(0.5 * (lo + hi) - 1.0);
        }
        let scale = 1.0 / hi;
        for i in 0..n {
            x[i] = y[i] * scale;
        }
    }
    Err(Error::Numerical(
        "power iteration for the spectral radius did not converge".to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::Sided;
    use alloc::vec;

    #[test]
    fn zero_potential_gives_log_word_growth() {
        let s = Subshift::full(2, Sided::OneSided);
        let phi = Potential::constant(&s, 0.0).unwrap();
        let p = pressure_oracle(&s, &phi).unwrap();
        assert!((p - core::f64::consts::LN_2).abs() < 1e-12);

        let g = Subshift::golden_mean();
        let phi = Potential::constant(&g, 0.0).unwrap();
        let p = pressure_oracle(&g, &phi).unwrap();
        let golden = 0.5 * (1.0 + 5.0f64.sqrt());
        assert!((p - golden.ln()).abs() < 1e-12);
        assert!((p - 0.4812118250596035).abs() < 1e-12);
    }

    #[test]
    fn constant_potential_shifts_pressure_linearly() {
        let g = Subshift::golden_mean();
        let phi = Potential::constant(&g, 0.37).unwrap();
        let p = pressure_oracle(&g, &phi).unwrap();
        assert!((p - (0.4812118250596035 + 0.37)).abs() < 1e-12);
    }

    #[test]
    fn depth_one_pressure_matches_weighted_matrix_eigenvalue() {
        // weighted golden mean matrix [[a, a], [b, 0]] with a = e^{0.2},
        // b = e^{-0.3}; rho = (a + sqrt(a^2 + 4ab)) / 2
        let g = Subshift::golden_mean();
        let phi = Potential::from_pairs(&g, 1, &[(vec![0], 0.2), (vec![1], -0.3)]).unwrap();
        let a = 0.2f64.exp();
        let b = (-0.3f64).exp();
        let rho = 0.5 * (a + (a * a + 4.0 * a * b).sqrt());
        let p = pressure_oracle(&g, &phi).unwrap();
        assert!((p - rho.ln()).abs() < 1e-12);
    }

    #[test]
    fn depth_two_potential_uses_pair_states() {
        // full 2-shift, phi on pairs: equal pairs get s, unequal pairs get t.
        // By symmetry the Perron root is e^s + e^t.
        let s = Subshift::full(2, Sided::OneSided);
        let phi = Potential::from_fn(&s, 2, |w| if w[0] == w[1] { 0.15 } else { -0.1 }).unwrap();
        let p = pressure_oracle(&s, &phi).unwrap();
        let rho = 0.15f64.exp() + (-0.1f64).exp();
        assert!((p - rho.ln()).abs() < 1e-12);
    }

    #[test]
    fn two_sided_systems_share_the_oracle() {
        let s1 = Subshift::full(3, Sided::OneSided);
        let s2 = Subshift::full(3, Sided::TwoSided);
        let phi1 = Potential::from_fn(&s1, 1, |w| w[0] as f64 * 0.1).unwrap();
        let phi2 = Potential::from_fn(&s2, 1, |w| w[0] as f64 * 0.1).unwrap();
        let p1 = pressure_oracle(&s1, &phi1).unwrap();
        let p2 = pressure_oracle(&s2, &phi2).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn pressure_dominates_every_free_energy() {
        use crate::measure::MeasureSpec;
        let s = Subshift::full(2, Sided::OneSided);
        let phi = Potential::from_pairs(&s, 1, &[(vec![0], 0.3), (vec![1], -0.2)]).unwrap();
        let p = pressure_oracle(&s, &phi).unwrap();
        for probs in [vec![0.5, 0.5], vec![0.3, 0.7], vec![0.9, 0.1]] {
            let mu = MeasureSpec::bernoulli(probs).unwrap();
            assert!(mu.free_energy(&s, &phi) <= p + 1e-12);
        }
        // the equilibrium state of a depth-1 potential is Bernoulli with
        // p_i = e^{phi(i) - P}
        let eq = MeasureSpec::bernoulli(vec![(0.3 - p).exp(), (-0.2 - p).exp()]).unwrap();
        assert!((eq.free_energy(&s, &phi) - p).abs() < 1e-12);
    }
}
