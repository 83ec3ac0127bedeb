//! Implementations of the five subcommands.

use crate::fmt::{fmt_f64, fmt_rational, ComplexField};
use crate::reports::*;
use crate::{CertifyArgs, RepcheckArgs, SphericalArgs, TreeArgs, VerifyArgs, WeylArgs};
use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use treeharmonic::boundary_rep::battery::{BatteryConfig, RepThresholds};
use treeharmonic::radial_hecke::PdSettings;
use treeharmonic::spherical::{
    certify_non_wiener, eval_boundary_integral, eval_recursion, CertifySettings,
    SpectralParameter, SphericalFunction, Verdict,
};
use treeharmonic::tree_model::SemiRegularTree;
use treeharmonic::weyl::{
    build_root_system, hermitian_constraint, rho_multiple_scan, weyl_group, RootSystemType,
};
use treeharmonic::BigRational;

fn tree_from(args: &TreeArgs) -> Result<SemiRegularTree> {
    SemiRegularTree::new(args.d1, args.d2).map_err(|e| anyhow!(e))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Expands `re_min:re_max:im_min:im_max:steps` into a row-major grid.
fn parse_grid(spec: &str) -> Result<Vec<Complex64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 5 {
        bail!("grid spec must be re_min:re_max:im_min:im_max:steps, got {spec:?}");
    }
    let re_min: f64 = parts[0].parse().context("grid re_min")?;
    let re_max: f64 = parts[1].parse().context("grid re_max")?;
    let im_min: f64 = parts[2].parse().context("grid im_min")?;
    let im_max: f64 = parts[3].parse().context("grid im_max")?;
    let steps: usize = parts[4].parse().context("grid steps")?;
    if steps == 0 {
        bail!("grid needs at least one step");
    }
    let lattice = |min: f64, max: f64, i: usize| {
        if steps == 1 {
            (min + max) / 2.0
        } else {
            min + (max - min) * i as f64 / (steps - 1) as f64
        }
    };
    let mut points = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            points.push(Complex64::new(
                lattice(re_min, re_max, i),
                lattice(im_min, im_max, j),
            ));
        }
    }
    Ok(points)
}

fn collect_z(explicit: &[Complex64], grid: &Option<String>) -> Result<Vec<Complex64>> {
    let mut z_values = explicit.to_vec();
    if let Some(spec) = grid {
        z_values.extend(parse_grid(spec)?);
    }
    if z_values.is_empty() {
        bail!("no spectral parameters given: use --z or --z-grid");
    }
    Ok(z_values)
}

pub fn spherical(args: SphericalArgs) -> Result<i32> {
    let tree = tree_from(&args.tree)?;
    let z_values = collect_z(&args.z, &args.z_grid)?;
    let step = tree.distance_step();
    // one evaluation context per parameter; indexed collect keeps the
    // output order independent of the scheduling
    let blocks: Vec<Vec<SphericalRow>> = z_values
        .par_iter()
        .map(|&z| {
            let param = SpectralParameter::new(tree, z);
            (0..=args.n_max)
                .step_by(step)
                .map(|n| {
                    let integral = eval_boundary_integral(&param, n)
                        .expect("stepped distances are admissible");
                    let recursion = eval_recursion(&param, n);
                    let (recursion_field, error, delta) = match recursion {
                        Ok(value) => (
                            Some(ComplexField::from_complex(value)),
                            None,
                            Some(fmt_f64((value - integral).norm())),
                        ),
                        Err(err) => (None, Some(err.to_string()), None),
                    };
                    SphericalRow {
                        z: ComplexField::from_complex(z),
                        n,
                        integral: ComplexField::from_complex(integral),
                        recursion: recursion_field,
                        recursion_error: error,
                        delta,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let rows: Vec<SphericalRow> = blocks.into_iter().flatten().collect();

    let content = match args.format.as_str() {
        "json" => {
            let report = SphericalReport {
                schema: SPHERICAL_SCHEMA.to_string(),
                config: SphericalConfig {
                    d1: tree.d1(),
                    d2: tree.d2(),
                    n_max: args.n_max,
                    z_values: z_values
                        .iter()
                        .map(|&z| ComplexField::from_complex(z))
                        .collect(),
                },
                rows,
            };
            to_pretty_json(&report)?
        }
        "csv" => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record([
                "z_re",
                "z_im",
                "n",
                "integral_re",
                "integral_im",
                "recursion_re",
                "recursion_im",
                "delta",
            ])?;
            for row in &rows {
                writer.write_record([
                    row.z.re.clone(),
                    row.z.im.clone(),
                    row.n.to_string(),
                    row.integral.re.clone(),
                    row.integral.im.clone(),
                    row.recursion.as_ref().map_or(String::new(), |r| r.re.clone()),
                    row.recursion.as_ref().map_or(String::new(), |r| r.im.clone()),
                    row.delta.clone().unwrap_or_default(),
                ])?;
            }
            String::from_utf8(writer.into_inner()?)?
        }
        other => bail!("unknown format {other:?}"),
    };
    emit(&args.out, &content)?;
    Ok(0)
}

fn settings_from(args: &CertifyArgs) -> CertifySettings {
    CertifySettings {
        strip_margin: 1e-12,
        congruence_tol: args.tol_congruence,
        lambda_tol: args.tol_lambda,
        pd: PdSettings {
            hermitian_entry_tol: 1e-10,
            witness_im_tol: args.tol_witness,
            psd_floor: args.tol_psd,
            route_match_tol: 1e-9,
        },
    }
}

pub fn certify(args: CertifyArgs) -> Result<i32> {
    let tree = tree_from(&args.tree)?;
    if args.radius < 2 {
        bail!("certification needs --radius >= 2");
    }
    let settings = settings_from(&args);
    let certificate = certify_non_wiener(tree, args.z, args.radius, &settings);
    let report = CertificateReport::build(&certificate, &settings);
    emit(&args.out, &to_pretty_json(&report)?)?;
    Ok(match certificate.verdict {
        Verdict::NotWienerCertified => 0,
        Verdict::Inconclusive => 1,
    })
}

pub fn repcheck(args: RepcheckArgs) -> Result<i32> {
    let tree = tree_from(&args.tree)?;
    let mut config = BatteryConfig::new(args.depth);
    config.seed = args.seed;
    config.pairs = args.pairs;
    config.isometry_samples = args.isometry_samples;
    config.element_samples = args.element_samples;
    config.radius = args.radius;
    config.thresholds = RepThresholds::default();
    let outcomes = treeharmonic::boundary_rep::battery::run_battery(tree, &config);
    let all_pass = outcomes.iter().all(|o| o.pass);
    let report = RepcheckReport {
        schema: REPCHECK_SCHEMA.to_string(),
        config: RepcheckConfig {
            d1: tree.d1(),
            d2: tree.d2(),
            depth: args.depth,
            radius: args.radius,
            seed: args.seed,
            pairs: args.pairs,
            isometry_samples: args.isometry_samples,
            element_samples: args.element_samples,
        },
        checks: outcomes
            .into_iter()
            .map(|o| RepcheckRow {
                name: o.name.to_string(),
                params: o.params,
                deviation: o.deviation.map(fmt_f64),
                threshold: fmt_f64(o.threshold),
                error: o.error,
                pass: o.pass,
            })
            .collect(),
        all_pass,
    };
    emit(&args.out, &to_pretty_json(&report)?)?;
    Ok(if all_pass { 0 } else { 1 })
}

pub fn weyl(args: WeylArgs) -> Result<i32> {
    let type_label = RootSystemType::parse(&args.system)
        .ok_or_else(|| anyhow!("unknown root system type {:?}", args.system))?;
    let rs = build_root_system(type_label, args.rank).map_err(|e| anyhow!(e))?;
    let group = weyl_group(&rs).map_err(|e| anyhow!(e))?;
    let scan = rho_multiple_scan(&rs, &group);
    let z_values = if args.z.is_empty() && args.z_grid.is_none() {
        Vec::new()
    } else {
        collect_z(&args.z, &args.z_grid)?
    };
    let axis = z_values
        .iter()
        .map(|&z| {
            let verdict = hermitian_constraint(&rs, &group, z).map_err(|e| anyhow!(e))?;
            Ok(AxisRow {
                z: ComplexField::from_complex(z),
                verdict: verdict.as_str().to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rho: Vec<String> = rs
        .rho()
        .iter()
        .map(|r| fmt_rational(&BigRational::new((*r.numer()).into(), (*r.denom()).into())))
        .collect();
    let pairings: Vec<String> = (0..rs.rank())
        .map(|i| {
            let value = rs.rho_simple_pairing(i);
            format!("{}/{}", value.numer(), value.denom())
        })
        .collect();
    let report = WeylReport {
        schema: WEYL_SCHEMA.to_string(),
        config: WeylConfig {
            system: type_label.as_str().to_string(),
            rank: args.rank,
            z_values: z_values
                .iter()
                .map(|&z| ComplexField::from_complex(z))
                .collect(),
        },
        root_count: rs.roots().len(),
        positive_count: rs.positive_count(),
        weyl_order: group.order(),
        rho,
        rho_simple_pairings: pairings,
        rho_multiples: scan
            .iter()
            .map(|hit| RhoMultipleRow {
                element: if hit.is_identity {
                    "id".to_string()
                } else if hit.is_longest {
                    "w_longest".to_string()
                } else {
                    format!("#{}", hit.element)
                },
                scalar: hit.scalar,
            })
            .collect(),
        axis,
    };
    emit(&args.out, &to_pretty_json(&report)?)?;
    Ok(0)
}

pub fn verify(args: VerifyArgs) -> Result<i32> {
    let path: &Path = &args.certificate;
    let raw = match std::fs::read_to_string(path) {
        Ok(raw) => raw,
        Err(error) => {
            eprintln!("error: cannot read {}: {error}", path.display());
            return Ok(2);
        }
    };
    let report: CertificateReport = match serde_json::from_str(&raw) {
        Ok(report) => report,
        Err(error) => {
            eprintln!("error: invalid certificate: {error}");
            return Ok(2);
        }
    };
    if report.schema != CERT_SCHEMA {
        eprintln!("error: unknown schema {:?}", report.schema);
        return Ok(2);
    }
    let tree = SemiRegularTree::new(report.config.d1, report.config.d2)
        .map_err(|e| anyhow!("certificate tree invalid: {e}"))?;
    let z = report.config.z.to_complex()?;
    let witness = match &report.witness {
        Some(witness) => witness,
        None => {
            eprintln!("verification failed: certificate carries no witness");
            return Ok(1);
        }
    };
    let coefficients = witness
        .coefficients
        .iter()
        .map(|c| {
            Ok((
                c.distance,
                Complex64::new(
                    crate::fmt::parse_f64(&c.re)?,
                    crate::fmt::parse_f64(&c.im)?,
                ),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let recorded = witness.form_value.to_complex()?;
    let witness_tol = crate::fmt::parse_f64(&report.config.tolerances.witness_im)?;
    let psd_floor = crate::fmt::parse_f64(&report.config.tolerances.psd_floor)?;

    // recompute from scratch: structure constants and the spherical
    // evaluator only
    let phi = SphericalFunction::new(SpectralParameter::new(tree, z));
    let recomputed = treeharmonic::radial_hecke::witness_form_value(&phi, &coefficients)
        .map_err(|e| anyhow!("witness coefficients invalid: {e}"))?;
    let difference = (recomputed - recorded).norm();
    let escapes = recomputed.im.abs() > witness_tol
        || (recomputed.re < -psd_floor && recomputed.im.abs() <= witness_tol);
    let verified = difference <= args.tol_verify && escapes;
    let out = VerifyReport {
        schema: VERIFY_SCHEMA.to_string(),
        certificate: path.display().to_string(),
        verdict: report.verdict.clone(),
        recorded: ComplexField::from_complex(recorded),
        recomputed: ComplexField::from_complex(recomputed),
        difference: fmt_f64(difference),
        tolerance: fmt_f64(args.tol_verify),
        escapes_nonnegative_reals: escapes,
        verified,
    };
    print!("{}", to_pretty_json(&out)?);
    Ok(if verified { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_expansion() {
        let points = parse_grid("0.1:0.3:0.0:1.0:3").unwrap();
        assert_eq!(points.len(), 9);
        assert_eq!(points[0], Complex64::new(0.1, 0.0));
        assert_eq!(points[8], Complex64::new(0.3, 1.0));
        assert!(parse_grid("1:2:3").is_err());
        let single = parse_grid("0.0:1.0:0.0:2.0:1").unwrap();
        assert_eq!(single, vec![Complex64::new(0.5, 1.0)]);
    }

    #[test]
    fn complex_cli_parsing_matches_fmt() {
        assert_eq!(
            crate::fmt::parse_complex("0.5").unwrap(),
            Complex64::new(0.5, 0.0)
        );
    }
}
