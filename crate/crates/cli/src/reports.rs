//! Serializable report schemas. Field order is fixed by declaration order
//! and all floats are decimal strings, so identical configurations always
//! produce byte-identical JSON.

use crate::fmt::{fmt_f64, ComplexField};
use serde::{Deserialize, Serialize};
use treeharmonic::spherical::{Certificate, CertifySettings};

pub const CERT_SCHEMA: &str = "treeharmonic/cert-v1";
pub const SPHERICAL_SCHEMA: &str = "treeharmonic/spherical-v1";
pub const REPCHECK_SCHEMA: &str = "treeharmonic/repcheck-v1";
pub const WEYL_SCHEMA: &str = "treeharmonic/weyl-v1";
pub const VERIFY_SCHEMA: &str = "treeharmonic/verify-v1";

#[derive(Debug, Serialize, Deserialize)]
pub struct ToleranceFields {
    pub strip_margin: String,
    pub congruence: String,
    pub lambda: String,
    pub hermitian_entry: String,
    pub witness_im: String,
    pub psd_floor: String,
    pub route_match: String,
}

impl ToleranceFields {
    pub fn from_settings(settings: &CertifySettings) -> Self {
        ToleranceFields {
            strip_margin: fmt_f64(settings.strip_margin),
            congruence: fmt_f64(settings.congruence_tol),
            lambda: fmt_f64(settings.lambda_tol),
            hermitian_entry: fmt_f64(settings.pd.hermitian_entry_tol),
            witness_im: fmt_f64(settings.pd.witness_im_tol),
            psd_floor: fmt_f64(settings.pd.psd_floor),
            route_match: fmt_f64(settings.pd.route_match_tol),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateConfig {
    pub d1: u32,
    pub d2: u32,
    pub z: ComplexField,
    pub radius: usize,
    pub tolerances: ToleranceFields,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ChecksField {
    pub strip: bool,
    pub irreducible_parameter: bool,
    pub non_hermitian: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CoefficientField {
    pub distance: usize,
    pub re: String,
    pub im: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WitnessField {
    pub radius: usize,
    pub coefficients: Vec<CoefficientField>,
    pub form_value: ComplexField,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateReport {
    pub schema: String,
    pub config: CertificateConfig,
    pub lambda: ComplexField,
    pub lambda_base: String,
    pub checks: ChecksField,
    pub witness: Option<WitnessField>,
    pub verdict: String,
    pub failed_check: Option<String>,
}

impl CertificateReport {
    pub fn build(certificate: &Certificate, settings: &CertifySettings) -> Self {
        use treeharmonic::spherical::SpectralParameter;
        let param = SpectralParameter::new(certificate.tree, certificate.z);
        CertificateReport {
            schema: CERT_SCHEMA.to_string(),
            config: CertificateConfig {
                d1: certificate.tree.d1(),
                d2: certificate.tree.d2(),
                z: ComplexField::from_complex(certificate.z),
                radius: certificate.radius,
                tolerances: ToleranceFields::from_settings(settings),
            },
            lambda: ComplexField::from_complex(param.lambda()),
            lambda_base: fmt_f64(SpectralParameter::cocycle_base(&certificate.tree)),
            checks: ChecksField {
                strip: certificate.checks.strip,
                irreducible_parameter: certificate.checks.irreducible_parameter,
                non_hermitian: certificate.checks.non_hermitian,
            },
            witness: certificate.witness.as_ref().map(|w| WitnessField {
                radius: w.radius,
                coefficients: w
                    .coefficients
                    .iter()
                    .map(|(distance, value)| CoefficientField {
                        distance: *distance,
                        re: fmt_f64(value.re),
                        im: fmt_f64(value.im),
                    })
                    .collect(),
                form_value: ComplexField::from_complex(w.form_value),
            }),
            verdict: certificate.verdict.as_str().to_string(),
            failed_check: certificate.failure.map(|f| f.as_str().to_string()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SphericalConfig {
    pub d1: u32,
    pub d2: u32,
    pub n_max: usize,
    pub z_values: Vec<ComplexField>,
}

#[derive(Debug, Serialize)]
pub struct SphericalRow {
    pub z: ComplexField,
    pub n: usize,
    pub integral: ComplexField,
    pub recursion: Option<ComplexField>,
    pub recursion_error: Option<String>,
    pub delta: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SphericalReport {
    pub schema: String,
    pub config: SphericalConfig,
    pub rows: Vec<SphericalRow>,
}

#[derive(Debug, Serialize)]
pub struct RepcheckConfig {
    pub d1: u32,
    pub d2: u32,
    pub depth: usize,
    pub radius: usize,
    pub seed: u64,
    pub pairs: usize,
    pub isometry_samples: usize,
    pub element_samples: usize,
}

#[derive(Debug, Serialize)]
pub struct RepcheckRow {
    pub name: String,
    pub params: String,
    pub deviation: Option<String>,
    pub threshold: String,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct RepcheckReport {
    pub schema: String,
    pub config: RepcheckConfig,
    pub checks: Vec<RepcheckRow>,
    pub all_pass: bool,
}

#[derive(Debug, Serialize)]
pub struct WeylConfig {
    pub system: String,
    pub rank: usize,
    pub z_values: Vec<ComplexField>,
}

#[derive(Debug, Serialize)]
pub struct RhoMultipleRow {
    pub element: String,
    pub scalar: i64,
}

#[derive(Debug, Serialize)]
pub struct AxisRow {
    pub z: ComplexField,
    pub verdict: String,
}

#[derive(Debug, Serialize)]
pub struct WeylReport {
    pub schema: String,
    pub config: WeylConfig,
    pub root_count: usize,
    pub positive_count: usize,
    pub weyl_order: usize,
    pub rho: Vec<String>,
    pub rho_simple_pairings: Vec<String>,
    pub rho_multiples: Vec<RhoMultipleRow>,
    pub axis: Vec<AxisRow>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema: String,
    pub certificate: String,
    pub verdict: String,
    pub recorded: ComplexField,
    pub recomputed: ComplexField,
    pub difference: String,
    pub tolerance: String,
    pub escapes_nonnegative_reals: bool,
    pub verified: bool,
}
