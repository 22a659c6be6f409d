//! Task runners. Schedule points are dispatched to the worker pool and
//! rows are assembled in schedule order, so output is deterministic for
//! any thread count. A failure partway through keeps the rows that
//! finished before it.

use rayon::prelude::*;
use shiftpress::counting::{separated_pressure, SpMode, SpPoint};
use shiftpress::cover::{cover_crossing_bounds, jump_up_point, CoverTarget};
use shiftpress::dimension::{
    bowen_root, dimension_oracle, hyperbolic_roots, pointwise_dimension, radius_schedule,
    HyperbolicModel, RepellerModel,
};
use shiftpress::pointwise::{ess_sup_check, EssSupPlan, OrbitSample};
use shiftpress::separation::{hamming_ball_bound, hamming_ball_count};
use shiftpress::transfer::pressure_oracle;
use shiftpress::{MeasureSpec, NeighborhoodSpec, Potential, Subshift};

use crate::emit::{fmt_float, Table};

#[derive(Debug, Clone)]
pub enum TaskPlan {
    Pressure {
        shift: Subshift,
        phi: Potential,
        scales: Vec<usize>,
        eps: f64,
        max_depth: usize,
    },
    Cp {
        shift: Subshift,
        phi: Potential,
        target: CoverTarget,
        scales: Vec<usize>,
        eps: f64,
    },
    Sp {
        shift: Subshift,
        phi: Potential,
        center_label: String,
        center: MeasureSpec,
        depth: usize,
        points: Vec<SpPoint>,
        mode: SpMode,
    },
    Entropy {
        shift: Subshift,
        mu_label: String,
        mu: MeasureSpec,
        phi: Potential,
        n: usize,
        eps: f64,
        seeds: Vec<u64>,
    },
    Pointwise {
        model_name: String,
        model: RepellerModel,
        mu_label: String,
        mu: MeasureSpec,
        depths: Vec<usize>,
        orbit_len: usize,
        seeds: Vec<u64>,
    },
    Dimension {
        model_name: String,
        model: RepellerModel,
        measures: Vec<(String, MeasureSpec)>,
    },
    Hyperbolic {
        model_name: String,
        model: HyperbolicModel,
        measures: Vec<(String, MeasureSpec)>,
    },
    LemmaCheck {
        ks: Vec<usize>,
        n_max: usize,
        delta_step: f64,
    },
}

#[derive(Debug)]
pub struct TaskOutput {
    pub table: Table,
    pub failure: Option<String>,
}

/// Rows that finished before the first failure, in input order, plus the
/// first failure message if any.
fn until_first_error<T>(results: Vec<shiftpress::Result<T>>) -> (Vec<T>, Option<String>) {
    let mut kept = Vec::with_capacity(results.len());
    let mut failure = None;
    for r in results {
        match r {
            Ok(v) if failure.is_none() => kept.push(v),
            Ok(_) => {}
            Err(e) => {
                failure.get_or_insert(e.to_string());
            }
        }
    }
    (kept, failure)
}

pub fn execute(plan: &TaskPlan, pool: &rayon::ThreadPool) -> TaskOutput {
    match plan {
        TaskPlan::Pressure {
            shift,
            phi,
            scales,
            eps,
            max_depth,
        } => {
            let mut table = Table::new(vec!["n", "eps", "value", "oracle", "abs_diff"]);
            let oracle = match pressure_oracle(shift, phi) {
                Ok(p) => p,
                Err(e) => {
                    return TaskOutput {
                        table,
                        failure: Some(e.to_string()),
                    }
                }
            };
            let target = CoverTarget::whole();
            let results = pool.install(|| {
                scales
                    .par_iter()
                    .map(|&n| {
                        jump_up_point(shift, phi, &target, &[n], *eps, *max_depth)
                            .map(|report| (n, report.value))
                    })
                    .collect::<Vec<_>>()
            });
            let (rows, failure) = until_first_error(results);
            for (n, value) in rows {
                table.push(vec![
                    n.to_string(),
                    fmt_float(*eps),
                    fmt_float(value),
                    fmt_float(oracle),
                    fmt_float((value - oracle).abs()),
                ]);
            }
            TaskOutput { table, failure }
        }
        TaskPlan::Cp {
            shift,
            phi,
            target,
            scales,
            eps,
        } => {
            let mut table = Table::new(vec!["n", "eps", "value", "oracle", "abs_diff"]);
            let oracle = match pressure_oracle(shift, phi) {
                Ok(p) => p,
                Err(e) => {
                    return TaskOutput {
                        table,
                        failure: Some(e.to_string()),
                    }
                }
            };
            let results = pool.install(|| {
                scales
                    .par_iter()
                    .map(|&n| {
                        cover_crossing_bounds(shift, phi, target, *eps, (n, n))
                            .map(|c| (n, c.crossings[0].1))
                    })
                    .collect::<Vec<_>>()
            });
            let (rows, failure) = until_first_error(results);
            for (n, value) in rows {
                table.push(vec![
                    n.to_string(),
                    fmt_float(*eps),
                    fmt_float(value),
                    fmt_float(oracle),
                    fmt_float((value - oracle).abs()),
                ]);
            }
            TaskOutput { table, failure }
        }
        TaskPlan::Sp {
            shift,
            phi,
            center_label: _,
            center,
            depth,
            points,
            mode,
        } => {
            let mut table =
                Table::new(vec!["n", "eps", "theta", "value", "oracle", "abs_diff"]);
            let oracle = center.free_energy(shift, phi);
            let results = pool.install(|| {
                points
                    .par_iter()
                    .map(|p| {
                        let hood = NeighborhoodSpec::new(center.clone(), *depth, p.theta)?;
                        separated_pressure(shift, phi, &hood, p.n, p.eps, *mode)
                            .map(|report| (p, report))
                    })
                    .collect::<Vec<_>>()
            });
            let (rows, mut failure) = until_first_error(results);
            for (p, report) in rows {
                if report.flagged && failure.is_none() {
                    failure = Some(format!(
                        "scale n={}: estimate flagged (empty survivor set)",
                        p.n
                    ));
                }
                table.push(vec![
                    p.n.to_string(),
                    fmt_float(p.eps),
                    fmt_float(p.theta),
                    fmt_float(report.value),
                    fmt_float(oracle),
                    fmt_float((report.value - oracle).abs()),
                ]);
            }
            TaskOutput { table, failure }
        }
        TaskPlan::Entropy {
            shift,
            mu_label: _,
            mu,
            phi,
            n,
            eps,
            seeds,
        } => {
            let mut table = Table::new(vec![
                "component",
                "weight",
                "n",
                "eps",
                "samples",
                "value",
                "oracle",
                "abs_diff",
            ]);
            let plan = EssSupPlan {
                n: *n,
                eps: *eps,
                seeds: seeds.clone(),
            };
            let report = match pool.install(|| ess_sup_check(shift, mu, phi, &plan)) {
                Ok(r) => r,
                Err(e) => {
                    return TaskOutput {
                        table,
                        failure: Some(e.to_string()),
                    }
                }
            };
            let weights = mu.component_weights();
            let mut failure = None;
            for cluster in &report.clusters {
                if !cluster.mean.is_finite() && failure.is_none() {
                    failure = Some(format!(
                        "component {}: non-finite sampled pressure",
                        cluster.component
                    ));
                }
                table.push(vec![
                    cluster.component.to_string(),
                    fmt_float(weights[cluster.component].0),
                    n.to_string(),
                    fmt_float(*eps),
                    seeds.len().to_string(),
                    fmt_float(cluster.mean),
                    fmt_float(cluster.oracle),
                    fmt_float((cluster.mean - cluster.oracle).abs()),
                ]);
            }
            if !mu.is_ergodic_spec() {
                table.push(vec![
                    "esssup".to_string(),
                    String::new(),
                    n.to_string(),
                    fmt_float(*eps),
                    (seeds.len() * report.clusters.len()).to_string(),
                    fmt_float(report.max_observed),
                    fmt_float(report.oracle),
                    fmt_float((report.max_observed - report.oracle).abs()),
                ]);
            }
            TaskOutput { table, failure }
        }
        TaskPlan::Pointwise {
            model_name: _,
            model,
            mu_label: _,
            mu,
            depths,
            orbit_len,
            seeds,
        } => {
            let mut table = Table::new(vec![
                "seed", "component", "depth", "radius", "value", "bracket", "oracle", "abs_diff",
            ]);
            let component_oracles: Vec<f64> = {
                let per: shiftpress::Result<Vec<f64>> = mu
                    .component_weights()
                    .iter()
                    .map(|(_, c)| dimension_oracle(model, c).map(|d| d.value))
                    .collect();
                match per {
                    Ok(v) => v,
                    Err(e) => {
                        return TaskOutput {
                            table,
                            failure: Some(e.to_string()),
                        }
                    }
                }
            };
            let results = pool.install(|| {
                seeds
                    .par_iter()
                    .map(|&seed| {
                        let orbit = OrbitSample::draw(mu, *orbit_len, seed)?;
                        let radii = radius_schedule(model, &orbit, depths)?;
                        let report = pointwise_dimension(model, mu, &orbit, &radii)?;
                        Ok((seed, orbit.component().unwrap_or(0), report))
                    })
                    .collect::<Vec<shiftpress::Result<_>>>()
            });
            let (rows, failure) = until_first_error(results);
            for (seed, component, report) in rows {
                let oracle = component_oracles[component];
                for (depth, point) in depths.iter().zip(&report.points) {
                    table.push(vec![
                        seed.to_string(),
                        component.to_string(),
                        depth.to_string(),
                        fmt_float(point.r),
                        fmt_float(point.estimate),
                        fmt_float(point.bracket),
                        fmt_float(oracle),
                        fmt_float((point.estimate - oracle).abs()),
                    ]);
                }
            }
            TaskOutput { table, failure }
        }
        TaskPlan::Dimension {
            model_name,
            model,
            measures,
        } => {
            let mut table = Table::new(vec!["model", "measure", "value", "oracle", "abs_diff"]);
            let results = pool.install(|| {
                measures
                    .par_iter()
                    .map(|(label, mu)| {
                        let solved = bowen_root(model, mu)?;
                        let oracle = dimension_oracle(model, mu)?;
                        Ok((label.clone(), solved.value, oracle.value))
                    })
                    .collect::<Vec<shiftpress::Result<_>>>()
            });
            let (rows, failure) = until_first_error(results);
            for (label, value, oracle) in rows {
                table.push(vec![
                    model_name.clone(),
                    label,
                    fmt_float(value),
                    fmt_float(oracle),
                    fmt_float((value - oracle).abs()),
                ]);
            }
            TaskOutput { table, failure }
        }
        TaskPlan::Hyperbolic {
            model_name,
            model,
            measures,
        } => {
            let mut table = Table::new(vec![
                "model",
                "measure",
                "stable_root",
                "unstable_root",
                "value",
                "oracle",
                "abs_diff",
            ]);
            let results = pool.install(|| {
                measures
                    .par_iter()
                    .map(|(label, mu)| {
                        hyperbolic_roots(model, mu).map(|r| (label.clone(), r))
                    })
                    .collect::<Vec<shiftpress::Result<_>>>()
            });
            let (rows, failure) = until_first_error(results);
            for (label, result) in rows {
                let oracle = result.cross_check.unwrap_or(f64::NAN);
                table.push(vec![
                    model_name.clone(),
                    label,
                    fmt_float(result.roots[0].value),
                    fmt_float(result.roots[1].value),
                    fmt_float(result.value),
                    fmt_float(oracle),
                    fmt_float((result.value - oracle).abs()),
                ]);
            }
            TaskOutput { table, failure }
        }
        TaskPlan::LemmaCheck {
            ks,
            n_max,
            delta_step,
        } => {
            let mut table = Table::new(vec!["k", "n", "delta", "exact", "bound", "margin"]);
            let pairs: Vec<(usize, usize)> = ks
                .iter()
                .flat_map(|&k| (1..=*n_max).map(move |n| (k, n)))
                .collect();
            let results = pool.install(|| {
                pairs
                    .par_iter()
                    .map(|&(k, n)| {
                        let cap = (k - 1) as f64 / k as f64;
                        let mut rows = Vec::new();
                        let mut i = 1;
                        loop {
                            let delta = delta_step * i as f64;
                            if delta > cap + 1e-9 {
                                break;
                            }
                            let count = hamming_ball_count(k, n, delta)?;
                            let bound = hamming_ball_bound(k, n, delta)?;
                            rows.push((k, n, delta, count, bound));
                            i += 1;
                        }
                        Ok(rows)
                    })
                    .collect::<Vec<shiftpress::Result<_>>>()
            });
            let (groups, mut failure) = until_first_error(results);
            for rows in groups {
                for (k, n, delta, count, bound) in rows {
                    let margin = bound - count as f64;
                    if margin < -1e-9 * bound.abs() && failure.is_none() {
                        failure = Some(format!(
                            "counting bound violated at k={k}, n={n}, delta={delta}"
                        ));
                    }
                    table.push(vec![
                        k.to_string(),
                        n.to_string(),
                        fmt_float(delta),
                        count.to_string(),
                        fmt_float(bound),
                        fmt_float(margin),
                    ]);
                }
            }
            TaskOutput { table, failure }
        }
    }
}
