//! Dimension of measures on conformal repellers and volume preserving
//! hyperbolic models, through Bowen equations.
//!
//! A repeller is coded by a one sided subshift with a geometric potential
//! `phi > 0` holding the log expansion rates: the cylinder of depth `d`
//! around an orbit has diameter comparable to `exp(-S_d phi)`. For a
//! (possibly non-ergodic) measure the dimension solves
//! `max_i (h_i - t * integral phi dnu_i) = 0` over the positive weight
//! components, so it equals the largest component ratio
//! `h_i / lambda_i`, an essential supremum rather than an average.
//!
//! A volume preserving hyperbolic model is coded by a two sided subshift
//! with an unstable log rate `phi_u > 0` and a stable one `phi_s < 0`
//! satisfying `integral phi_u = -integral phi_s` componentwise; the
//! dimension adds the roots of the stable and unstable Bowen equations.

use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::measure::MeasureSpec;
use crate::pointwise::OrbitSample;
use crate::shift::{Potential, Sided, Subshift};
use crate::solve::bisect_decreasing;

const ROOT_TOL: f64 = 1e-10;
const VOLUME_TOL: f64 = 1e-12;

/// A conformal repeller: one sided code plus strictly positive geometric
/// potential.
#[derive(Debug, Clone, PartialEq)]
pub struct RepellerModel {
    base: Subshift,
    geometry: Potential,
}

impl RepellerModel {
    pub fn new(base: Subshift, geometry: Potential) -> Result<Self> {
        if base.sided() != Sided::OneSided {
            return Err(Error::InvalidSubshift(
                "repeller codes are one sided".to_string(),
            ));
        }
        if geometry.alphabet() != base.alphabet() {
            return Err(Error::InvalidPotential(
                "geometry alphabet does not match the code".to_string(),
            ));
        }
        if !(geometry.min_value() > 0.0) {
            return Err(Error::InvalidPotential(
                "geometric potential must be strictly positive (log expansion rates)"
                    .to_string(),
            ));
        }
        Ok(RepellerModel { base, geometry })
    }

    pub fn base(&self) -> &Subshift {
        &self.base
    }

    pub fn geometry(&self) -> &Potential {
        &self.geometry
    }
}

/// How a dimension value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimMethod {
    BowenRoot,
    ClosedForm,
}

/// One root of a Bowen equation: the located value, the final bisection
/// bracket, and the number of bisection steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootData {
    pub value: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
}

/// A dimension value with its provenance. `roots` holds the Bowen roots
/// that were solved (stable before unstable for hyperbolic models);
/// `cross_check` holds an independently computed value of the same
/// dimension when one is available.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionResult {
    pub value: f64,
    pub method: DimMethod,
    pub roots: Vec<RootData>,
    pub cross_check: Option<f64>,
}

struct ComponentData {
    entropy: f64,
    lambda: f64,
}

fn positive_components(
    shift: &Subshift,
    mu: &MeasureSpec,
    rate: &Potential,
) -> Result<Vec<ComponentData>> {
    mu.validate_on(shift)?;
    let entropies = mu.component_entropies();
    let lambdas = mu.component_integrals(shift, rate);
    let data: Vec<ComponentData> = mu
        .component_weights()
        .iter()
        .enumerate()
        .filter(|(_, (w, _))| *w > 0.0)
        .map(|(i, _)| ComponentData {
            entropy: entropies[i],
            lambda: lambdas[i],
        })
        .collect();
    for c in &data {
        if !(c.lambda > 0.0) {
            return Err(Error::Numerical(
                "component has nonpositive expansion rate".to_string(),
            ));
        }
    }
    Ok(data)
}

fn bowen_root_of(components: &[ComponentData]) -> Result<RootData> {
    let g = |t: f64| {
        components
            .iter()
            .map(|c| c.entropy - t * c.lambda)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    if g(0.0) <= 0.0 {
        return Ok(RootData {
            value: 0.0,
            bracket: (0.0, 0.0),
            iterations: 0,
        });
    }
    let mut hi = 1.0;
    let mut doublings = 0;
    while g(hi) > 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::Numerical(
                "bowen equation has no root below 2^60".to_string(),
            ));
        }
    }
    let (value, bracket, iterations) = bisect_decreasing(0.0, hi, ROOT_TOL, g);
    Ok(RootData {
        value,
        bracket,
        iterations,
    })
}

/// Dimension of `mu` on the repeller as the root of the Bowen equation
/// `max_i (h_i - t lambda_i) = 0`, bisected to 1e-10.
pub fn bowen_root(model: &RepellerModel, mu: &MeasureSpec) -> Result<DimensionResult> {
    let components = positive_components(model.base(), mu, model.geometry())?;
    let root = bowen_root_of(&components)?;
    Ok(DimensionResult {
        value: root.value,
        method: DimMethod::BowenRoot,
        roots: alloc::vec![root],
        cross_check: None,
    })
}

/// The same dimension in closed form: `max_i h_i / lambda_i` over positive
/// weight components.
pub fn dimension_oracle(model: &RepellerModel, mu: &MeasureSpec) -> Result<DimensionResult> {
    let components = positive_components(model.base(), mu, model.geometry())?;
    let value = components
        .iter()
        .map(|c| c.entropy / c.lambda)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DimensionResult {
        value,
        method: DimMethod::ClosedForm,
        roots: Vec::new(),
        cross_check: None,
    })
}

/// One radius of a pointwise dimension scan: the mass ratio estimate from
/// the deepest cylinder of diameter at least `r`, and the same ratio one
/// level deeper as a bracket partner. Their gap shrinks as `r` does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimPoint {
    pub r: f64,
    pub estimate: f64,
    pub bracket: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseDimReport {
    pub points: Vec<DimPoint>,
    /// The estimate at the smallest radius scanned.
    pub value: f64,
}

fn cylinder_log_sizes(model: &RepellerModel, orbit: &OrbitSample) -> Result<Vec<f64>> {
    let symbols = orbit.word().symbols();
    let d = model.geometry().depth();
    if symbols.len() < d {
        return Err(Error::WordTooShort {
            needed: d,
            got: symbols.len(),
        });
    }
    let max_depth = symbols.len() - d + 1;
    let mut sums = Vec::with_capacity(max_depth + 1);
    sums.push(0.0);
    for dep in 1..=max_depth {
        let window = &symbols[dep - 1..dep - 1 + d];
        sums.push(sums[dep - 1] + model.geometry().eval(window));
    }
    Ok(sums)
}

/// `mu(cylinder) ^ (1 / log r)` style scan of the local dimension along an
/// orbit: for each radius the deepest cylinder of diameter at least `r`
/// stands in for the ball `B(x, r)`. Radii are matched to cylinder
/// boundaries with a small log-space slack so that exact boundary radii
/// resolve to their own depth.
pub fn pointwise_dimension(
    model: &RepellerModel,
    mu: &MeasureSpec,
    orbit: &OrbitSample,
    radii: &[f64],
) -> Result<PointwiseDimReport> {
    mu.validate_on(model.base())?;
    if radii.is_empty() {
        return Err(Error::InvalidParameter {
            name: "radii",
            reason: "must not be empty".to_string(),
        });
    }
    let sums = cylinder_log_sizes(model, orbit)?;
    let max_depth = sums.len() - 1;
    let symbols = orbit.word().symbols();
    let mut points = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter {
                name: "radii",
                reason: "radii must lie in (0, 1)".to_string(),
            });
        }
        let target = -r.ln() + 1e-9;
        let dep = sums.partition_point(|&s| s <= target) - 1;
        if dep >= max_depth {
            return Err(Error::WordTooShort {
                needed: max_depth + model.geometry().depth(),
                got: symbols.len(),
            });
        }
        let estimate = mu.log_cylinder_mass(&symbols[..dep]) / r.ln();
        let bracket = mu.log_cylinder_mass(&symbols[..dep + 1]) / r.ln();
        points.push(DimPoint {
            r,
            estimate,
            bracket,
        });
    }
    let value = points
        .iter()
        .min_by(|a, b| a.r.partial_cmp(&b.r).unwrap_or(core::cmp::Ordering::Equal))
        .unwrap()
        .estimate;
    Ok(PointwiseDimReport { points, value })
}

/// Diameters of the depth-`dep` cylinders along the orbit, one per entry of
/// `depths`: radii that [`pointwise_dimension`] resolves exactly.
pub fn radius_schedule(
    model: &RepellerModel,
    orbit: &OrbitSample,
    depths: &[usize],
) -> Result<Vec<f64>> {
    let sums = cylinder_log_sizes(model, orbit)?;
    let max_depth = sums.len() - 1;
    depths
        .iter()
        .map(|&dep| {
            if dep == 0 || dep >= max_depth {
                return Err(Error::InvalidParameter {
                    name: "depths",
                    reason: alloc::format!("depth {dep} outside [1, {})", max_depth),
                });
            }
            Ok((-sums[dep]).exp())
        })
        .collect()
}

/// A volume preserving hyperbolic model: two sided code, unstable log rate
/// `phi_u > 0`, stable log rate `phi_s < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicModel {
    base: Subshift,
    unstable: Potential,
    stable: Potential,
    volume_preserving: bool,
}

impl HyperbolicModel {
    pub fn new(
        base: Subshift,
        unstable: Potential,
        stable: Potential,
        volume_preserving: bool,
    ) -> Result<Self> {
        if base.sided() != Sided::TwoSided {
            return Err(Error::InvalidSubshift(
                "hyperbolic codes are two sided".to_string(),
            ));
        }
        if unstable.alphabet() != base.alphabet() || stable.alphabet() != base.alphabet() {
            return Err(Error::InvalidPotential(
                "rate alphabet does not match the code".to_string(),
            ));
        }
        if !(unstable.min_value() > 0.0) {
            return Err(Error::InvalidPotential(
                "unstable rate must be strictly positive".to_string(),
            ));
        }
        if !(stable.max_value() < 0.0) {
            return Err(Error::InvalidPotential(
                "stable rate must be strictly negative".to_string(),
            ));
        }
        Ok(HyperbolicModel {
            base,
            unstable,
            stable,
            volume_preserving,
        })
    }

    pub fn base(&self) -> &Subshift {
        &self.base
    }

    pub fn unstable(&self) -> &Potential {
        &self.unstable
    }

    pub fn stable(&self) -> &Potential {
        &self.stable
    }

    pub fn volume_preserving(&self) -> bool {
        self.volume_preserving
    }
}

/// Dimension of `mu` under the hyperbolic model: the sum of the stable and
/// unstable Bowen roots. Requires the volume preservation identity
/// `integral phi_u dnu_i = -integral phi_s dnu_i` on every positive weight
/// component (tolerance 1e-12); the cross-check reports
/// `max_i h_i (1/lambda_u_i - 1/lambda_s_i)`, which the sum must equal.
pub fn hyperbolic_roots(model: &HyperbolicModel, mu: &MeasureSpec) -> Result<DimensionResult> {
    if !model.volume_preserving() {
        return Err(Error::NotVolumePreserving(
            "model is not declared volume preserving, so the stable and unstable \
             dimensions do not add"
                .to_string(),
        ));
    }
    let unstable = positive_components(model.base(), mu, model.unstable())?;
    let stable_rates = mu.component_integrals(model.base(), model.stable());
    let weights = mu.component_weights();
    let mut stable = Vec::with_capacity(unstable.len());
    let mut u_iter = unstable.iter();
    for (i, (w, _)) in weights.iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let u = u_iter.next().expect("positive components align");
        let s = stable_rates[i];
        if (u.lambda + s).abs() > VOLUME_TOL {
            return Err(Error::NotVolumePreserving(alloc::format!(
                "component {i}: unstable rate {} but negated stable rate {}",
                u.lambda,
                -s
            )));
        }
        stable.push(ComponentData {
            entropy: u.entropy,
            lambda: -s,
        });
    }
    let root_s = bowen_root_of(&stable)?;
    let root_u = bowen_root_of(&unstable)?;
    let cross = unstable
        .iter()
        .zip(&stable)
        .map(|(u, s)| u.entropy * (1.0 / u.lambda + 1.0 / s.lambda))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DimensionResult {
        value: root_s.value + root_u.value,
        method: DimMethod::BowenRoot,
        roots: alloc::vec![root_s, root_u],
        cross_check: Some(cross),
    })
}
