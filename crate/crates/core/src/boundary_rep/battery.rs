//! The representation property battery: a deterministic, seeded sweep of the
//! operator-model checks, with one aggregated outcome per check.
//!
//! Every outcome carries the worst deviation seen, the threshold it was held
//! to, and a structured error (depth too shallow, parameter outside the
//! strip) when a precondition failed instead. Outcomes are reproducible from
//! the seed; sweeps over independent parameters can run concurrently since
//! all inputs are immutable.

use super::{
    check_isometry, hecke_compression_defect, homomorphism_defect, matrix_coefficient,
    unitarity_defect, CylinderSpace,
};
use crate::radial_hecke::RadialFunction;
use crate::spherical::{eval_boundary_integral, SpectralParameter};
use crate::tree_model::{GroupElement, Portrait, SemiRegularTree, Transporter};
use crate::util::SplitMix64;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Aggregated result of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// Human-readable summary of the sampled instances.
    pub params: String,
    /// Worst deviation over the instances, when all preconditions held.
    pub deviation: Option<f64>,
    pub threshold: f64,
    /// First structured error, when a precondition failed.
    pub error: Option<String>,
    pub pass: bool,
}

/// Thresholds of the battery, one per check.
#[derive(Debug, Clone, Copy)]
pub struct RepThresholds {
    pub homomorphism: f64,
    pub isometry: f64,
    pub unitarity: f64,
    pub coefficient: f64,
    pub compression: f64,
}

impl Default for RepThresholds {
    fn default() -> Self {
        RepThresholds {
            homomorphism: 1e-12,
            isometry: 1e-12,
            unitarity: 1e-12,
            coefficient: 1e-12,
            compression: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BatteryConfig {
    pub depth: usize,
    pub seed: u64,
    /// Number of random composable pairs for the homomorphism check.
    pub pairs: usize,
    /// Elements per real part for the isometry check.
    pub isometry_samples: usize,
    /// Elements for the unitarity and coefficient checks.
    pub element_samples: usize,
    /// Support radius of the compression functions.
    pub radius: usize,
    pub thresholds: RepThresholds,
}

impl BatteryConfig {
    pub fn new(depth: usize) -> Self {
        BatteryConfig {
            depth,
            seed: 1,
            pairs: 50,
            isometry_samples: 7,
            element_samples: 12,
            radius: 4,
            thresholds: RepThresholds::default(),
        }
    }
}

fn sample_portrait(tree: SemiRegularTree, depth: usize, rng: &mut SplitMix64) -> Portrait {
    let mut perms = BTreeMap::new();
    for level in 0..depth {
        for vertex in tree.addresses_at_depth(level) {
            let n = tree.branching(level) as usize;
            let mut perm: Vec<u8> = (0..n as u8).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.pick(i + 1));
            }
            perms.insert(vertex, perm);
        }
    }
    Portrait::new(tree, perms).expect("sampled permutations are valid")
}

fn sample_element(
    tree: SemiRegularTree,
    max_disp: usize,
    portrait_depth: usize,
    rng: &mut SplitMix64,
) -> GroupElement {
    let step = tree.distance_step();
    let choices: Vec<usize> = (0..=max_disp).step_by(step).collect();
    let disp = choices[rng.pick(choices.len())];
    let sphere = tree.addresses_at_depth(disp);
    let target = sphere[rng.pick(sphere.len())].clone();
    GroupElement::new(
        Transporter::new(tree, target).expect("sampled target is admissible"),
        sample_portrait(tree, portrait_depth, rng),
    )
    .expect("same tree")
}

fn strip_z(rng: &mut SplitMix64) -> Complex64 {
    Complex64::new(0.1 + 0.8 * rng.next_f64(), 4.0 * rng.next_f64() - 2.0)
}

fn outcome(
    name: &'static str,
    params: String,
    threshold: f64,
    result: Result<f64, String>,
) -> CheckOutcome {
    match result {
        Ok(deviation) => CheckOutcome {
            name,
            params,
            deviation: Some(deviation),
            threshold,
            error: None,
            pass: deviation < threshold,
        },
        Err(error) => CheckOutcome {
            name,
            params,
            deviation: None,
            threshold,
            error: Some(error),
            pass: false,
        },
    }
}

/// Runs the five checks and returns one aggregated outcome per check, in a
/// fixed order.
pub fn run_battery(tree: SemiRegularTree, config: &BatteryConfig) -> Vec<CheckOutcome> {
    let thresholds = config.thresholds;
    let mut results = Vec::with_capacity(5);
    let space = match CylinderSpace::new(tree, config.depth) {
        Ok(space) => space,
        Err(err) => {
            // the whole battery is a precondition failure
            let message = err.to_string();
            for name in [
                "homomorphism",
                "isometry",
                "unitarity",
                "coefficient",
                "compression",
            ] {
                results.push(outcome(
                    name,
                    format!("depth {}", config.depth),
                    0.0,
                    Err(message.clone()),
                ));
            }
            return results;
        }
    };

    // homomorphism: products of random composable pairs
    {
        let mut rng = SplitMix64(config.seed ^ 0xa076_1d64_78bd_642f);
        let mut worst = 0.0f64;
        let mut error = None;
        for _ in 0..config.pairs {
            let g = sample_element(tree, 2, 2, &mut rng);
            let h = sample_element(tree, 2, 2, &mut rng);
            let z = strip_z(&mut rng);
            match homomorphism_defect(&space, z, 2.0, &g, &h) {
                Ok(defect) => worst = worst.max(defect),
                Err(err) => {
                    error = Some(err.to_string());
                    break;
                }
            }
        }
        results.push(outcome(
            "homomorphism",
            format!(
                "{} random pairs, displacement <= 2, depth {}, seed {}",
                config.pairs, config.depth, config.seed
            ),
            thresholds.homomorphism,
            error.map_or(Ok(worst), Err),
        ));
    }

    // isometry at p = 1/Re(z) for the three sample real parts
    {
        let mut rng = SplitMix64(config.seed ^ 0xe703_7ed1_a0b4_28db);
        let mut worst = 0.0f64;
        let mut error = None;
        'outer: for re in [0.2, 0.25, 1.0 / 3.0] {
            for _ in 0..config.isometry_samples {
                let z = Complex64::new(re, 4.0 * rng.next_f64() - 2.0);
                let g = sample_element(tree, 2, 2, &mut rng);
                match check_isometry(&space, z, &g) {
                    Ok(defect) => worst = worst.max(defect),
                    Err(err) => {
                        error = Some(err.to_string());
                        break 'outer;
                    }
                }
            }
        }
        results.push(outcome(
            "isometry",
            format!(
                "Re(z) in {{1/5, 1/4, 1/3}}, {} elements each, depth {}, seed {}",
                config.isometry_samples, config.depth, config.seed
            ),
            thresholds.isometry,
            error.map_or(Ok(worst), Err),
        ));
    }

    // unitarity on the critical line
    {
        let mut rng = SplitMix64(config.seed ^ 0x8ebc_6af0_9c88_c6e3);
        let mut worst = 0.0f64;
        let mut error = None;
        for _ in 0..config.element_samples {
            let z = Complex64::new(0.5, 6.0 * rng.next_f64() - 3.0);
            let g = sample_element(tree, 2, 2, &mut rng);
            match unitarity_defect(&space, z, &g) {
                Ok(defect) => worst = worst.max(defect),
                Err(err) => {
                    error = Some(err.to_string());
                    break;
                }
            }
        }
        results.push(outcome(
            "unitarity",
            format!(
                "Re(z) = 1/2, {} elements, depth {}, seed {}",
                config.element_samples, config.depth, config.seed
            ),
            thresholds.unitarity,
            error.map_or(Ok(worst), Err),
        ));
    }

    // matrix coefficients against the spherical evaluator
    {
        let mut rng = SplitMix64(config.seed ^ 0x5898_4e1c_91d3_15a7);
        let mut worst = 0.0f64;
        let mut error = None;
        for _ in 0..config.element_samples {
            let z = strip_z(&mut rng);
            let max_disp = config.depth.saturating_sub(1).min(4);
            let g = sample_element(tree, max_disp, 2, &mut rng);
            match matrix_coefficient(&space, z, &g) {
                Ok(value) => {
                    let param = SpectralParameter::new(tree, z);
                    let expected = eval_boundary_integral(&param, g.displacement())
                        .expect("displacements are admissible");
                    worst = worst.max((value - expected).norm());
                }
                Err(err) => {
                    error = Some(err.to_string());
                    break;
                }
            }
        }
        results.push(outcome(
            "coefficient",
            format!(
                "{} elements with portraits, depth {}, seed {}",
                config.element_samples, config.depth, config.seed
            ),
            thresholds.coefficient,
            error.map_or(Ok(worst), Err),
        ));
    }

    // Hecke compression: sphere indicators and a dense radial function
    {
        let mut rng = SplitMix64(config.seed ^ 0x1d8e_4e27_c47d_124f);
        let step = tree.distance_step();
        let mut functions: Vec<RadialFunction> = Vec::new();
        for m in (0..=config.radius).step_by(step) {
            functions.push(RadialFunction::delta(tree, m).expect("admissible"));
        }
        let dense: Vec<(usize, Complex64)> = (0..=config.radius)
            .step_by(step)
            .map(|n| {
                let scale = 1.0 / tree.sphere_size(n) as f64;
                (
                    n,
                    Complex64::new(
                        scale * (2.0 * rng.next_f64() - 1.0),
                        scale * (2.0 * rng.next_f64() - 1.0),
                    ),
                )
            })
            .collect();
        functions.push(RadialFunction::from_coeffs(tree, dense).expect("admissible"));
        let mut worst = 0.0f64;
        let mut error = None;
        'comp: for f in &functions {
            for _ in 0..3 {
                let z = strip_z(&mut rng);
                match hecke_compression_defect(&space, z, f) {
                    Ok(defect) => worst = worst.max(defect),
                    Err(err) => {
                        error = Some(err.to_string());
                        break 'comp;
                    }
                }
            }
        }
        results.push(outcome(
            "compression",
            format!(
                "sphere indicators and one dense function, radius {}, depth {}, seed {}",
                config.radius, config.depth, config.seed
            ),
            thresholds.compression,
            error.map_or(Ok(worst), Err),
        ));
    }

    results
}
