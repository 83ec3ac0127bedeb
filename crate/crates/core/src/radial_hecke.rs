//! The radial Hecke algebra: compactly supported functions of the distance
//! `d(o, g o)`, under convolution.
//!
//! For a boundary-transitive group with vertex stabiliser `K`, the
//! `K`-double cosets are the spheres around the root, so a bi-invariant
//! function is a finitely supported map from admissible distances to complex
//! values. Convolution reduces to the exact integer structure constants
//! `N(m, n; k)`: the number of vertices at distance `m` from the root and
//! `n` from a fixed vertex at distance `k`. Haar measure is normalised so
//! the stabiliser has mass one, making the distance-zero indicator the unit
//! of the algebra.

use crate::tree_model::{SemiRegularTree, VertexType};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("distance {n} is not admissible on this tree (step {step})")]
    InadmissibleDistance { n: usize, step: usize },
    #[error("radial functions live on different trees")]
    TreeMismatch,
}

/// Exact count of vertices `w` with `d(o, w) = m` and `d(v, w) = n`, where
/// `v` is any vertex with `d(o, v) = k`.
///
/// The projection of `w` onto the geodesic `[o, v]` sits at distance
/// `i = (m - n + k) / 2` from the root, with a branch of length
/// `h = (m + n - k) / 2` hanging off it; the count is the number of such
/// branches, a product of branching factors.
pub fn structure_constants(tree: &SemiRegularTree, m: usize, n: usize, k: usize) -> u128 {
    if k > m + n || m > n + k || n > m + k || !(m + n + k).is_multiple_of(2) {
        return 0;
    }
    let h = (m + n - k) / 2;
    let i = (m + k - n) / 2;
    if h == 0 {
        return 1;
    }
    let excluded = if k == 0 {
        0
    } else if i == 0 || i == k {
        1
    } else {
        2
    };
    let mut vertex_type = tree.type_at_depth(i);
    let first = u128::from(tree.degree(vertex_type)) - excluded;
    let mut count = first;
    for _ in 1..h {
        vertex_type = match vertex_type {
            VertexType::A => VertexType::B,
            VertexType::B => VertexType::A,
        };
        count *= u128::from(tree.degree(vertex_type)) - 1;
    }
    count
}

/// Cached table of structure constants for `m, n <= radius` (and every `k`
/// they can reach). Built once, then read-only.
#[derive(Debug, Clone)]
pub struct StructureTable {
    tree: SemiRegularTree,
    radius: usize,
    counts: BTreeMap<(usize, usize, usize), u128>,
}

impl StructureTable {
    pub fn new(tree: SemiRegularTree, radius: usize) -> Self {
        let step = tree.distance_step();
        let mut counts = BTreeMap::new();
        for m in (0..=radius).step_by(step) {
            for n in (0..=radius).step_by(step) {
                for k in ((m.abs_diff(n))..=(m + n)).step_by(2) {
                    let value = structure_constants(&tree, m, n, k);
                    if value != 0 {
                        counts.insert((m, n, k), value);
                    }
                }
            }
        }
        StructureTable {
            tree,
            radius,
            counts,
        }
    }

    pub fn tree(&self) -> &SemiRegularTree {
        &self.tree
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn get(&self, m: usize, n: usize, k: usize) -> u128 {
        if m <= self.radius && n <= self.radius {
            self.counts.get(&(m, n, k)).copied().unwrap_or(0)
        } else {
            structure_constants(&self.tree, m, n, k)
        }
    }
}

/// Finitely supported radial function: coefficients indexed by admissible
/// distances. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    tree: SemiRegularTree,
    coeffs: BTreeMap<usize, Complex64>,
}

impl RadialFunction {
    pub fn zero(tree: SemiRegularTree) -> Self {
        RadialFunction {
            tree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Indicator of the sphere of radius `n` (as a double coset).
    pub fn delta(tree: SemiRegularTree, n: usize) -> Result<Self, HeckeError> {
        Self::from_coeffs(tree, [(n, Complex64::new(1.0, 0.0))])
    }

    pub fn from_coeffs(
        tree: SemiRegularTree,
        coeffs: impl IntoIterator<Item = (usize, Complex64)>,
    ) -> Result<Self, HeckeError> {
        let mut map = BTreeMap::new();
        for (n, value) in coeffs {
            if !tree.is_admissible_distance(n) {
                return Err(HeckeError::InadmissibleDistance {
                    n,
                    step: tree.distance_step(),
                });
            }
            if value != Complex64::new(0.0, 0.0) {
                map.insert(n, value);
            }
        }
        Ok(RadialFunction { tree, coeffs: map })
    }

    pub fn tree(&self) -> &SemiRegularTree {
        &self.tree
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs
            .get(&n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Complex64> {
        &self.coeffs
    }

    pub fn support_radius(&self) -> usize {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// `f^*(n) = conj(f(n))`: radial functions are inversion-invariant, so
    /// the involution is plain conjugation of coefficients.
    pub fn involution(&self) -> RadialFunction {
        RadialFunction {
            tree: self.tree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&n, &v)| (n, v.conj()))
                .collect(),
        }
    }
}

/// Convolution `(f * g)(k) = sum_{m,n} f(m) g(n) N(m, n; k)`; commutative
/// because the structure constants are symmetric in `m` and `n`.
pub fn convolve(f: &RadialFunction, g: &RadialFunction) -> Result<RadialFunction, HeckeError> {
    if f.tree != g.tree {
        return Err(HeckeError::TreeMismatch);
    }
    let mut out: BTreeMap<usize, Complex64> = BTreeMap::new();
    for (&m, &fm) in &f.coeffs {
        for (&n, &gn) in &g.coeffs {
            for k in (m.abs_diff(n)..=(m + n)).step_by(2) {
                let count = structure_constants(&f.tree, m, n, k);
                if count != 0 {
                    *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) +=
                        fm * gn * count as f64;
                }
            }
        }
    }
    out.retain(|_, v| *v != Complex64::new(0.0, 0.0));
    Ok(RadialFunction {
        tree: f.tree,
        coeffs: out,
    })
}

/// A radial function that can be evaluated at every admissible distance;
/// the interface the characters pair against.
pub trait RadialEval {
    fn tree(&self) -> &SemiRegularTree;
    /// Value at an admissible distance.
    fn value(&self, n: usize) -> Complex64;
}

/// The character `chi_phi(f) = sum_n sphere_size(n) f(n) phi(n)`, the
/// multiplicative functional attached to a spherical function.
pub fn character(phi: &impl RadialEval, f: &RadialFunction) -> Complex64 {
    let tree = f.tree();
    debug_assert_eq!(tree, phi.tree());
    f.coeffs
        .iter()
        .map(|(&n, &c)| c * phi.value(n) * tree.sphere_size(n) as f64)
        .sum()
}

/// Gram matrix of the quadratic form `f -> chi_phi(f * f^*)` on radial
/// functions supported in the ball of the given radius.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    distances: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

impl GramMatrix {
    pub fn distances(&self) -> &[usize] {
        &self.distances
    }

    pub fn dim(&self) -> usize {
        self.distances.len()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `max |M - M^H|`; the matrix is symmetric by construction, so this is
    /// twice the largest imaginary part.
    pub fn hermitian_defect(&self) -> f64 {
        let mut defect: f64 = 0.0;
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                defect = defect.max((self.matrix[(a, b)] - self.matrix[(b, a)].conj()).norm());
            }
        }
        defect
    }

    /// Quadratic form `sum_{a,b} M[a][b] c_a conj(c_b)` against coefficient
    /// vectors aligned with `distances`.
    pub fn form_value(&self, coeffs: &[Complex64]) -> Complex64 {
        assert_eq!(coeffs.len(), self.dim());
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                acc += self.matrix[(a, b)] * coeffs[a] * coeffs[b].conj();
            }
        }
        acc
    }

    /// Eigenvalues of the real symmetric part, ascending; meaningful when
    /// the matrix is Hermitian, i.e. real.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim();
        let real = DMatrix::from_fn(n, n, |a, b| self.matrix[(a, b)].re);
        let mut eigen: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
        eigen.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eigen
    }
}

/// `M[a][b] = chi_phi(delta_a * delta_b^*)` over admissible distances up to
/// `radius`. A spherical function is positive definite only if this matrix
/// is Hermitian positive semidefinite at every radius.
pub fn pd_form_matrix(phi: &impl RadialEval, radius: usize) -> GramMatrix {
    let tree = *phi.tree();
    let step = tree.distance_step();
    let distances: Vec<usize> = (0..=radius).step_by(step).collect();
    let dim = distances.len();
    let mut matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for a in 0..dim {
        for b in a..dim {
            let (m, n) = (distances[a], distances[b]);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in (m.abs_diff(n)..=(m + n)).step_by(2) {
                let count = structure_constants(&tree, m, n, k);
                if count != 0 {
                    acc += phi.value(k) * (count as f64 * tree.sphere_size(k) as f64);
                }
            }
            matrix[(a, b)] = acc;
            matrix[(b, a)] = acc;
        }
    }
    GramMatrix { distances, matrix }
}

/// Thresholds for the positivity test.
#[derive(Debug, Clone, Copy)]
pub struct PdSettings {
    /// Entry-level gate above which the Gram matrix counts as non-Hermitian.
    pub hermitian_entry_tol: f64,
    /// Required magnitude of the imaginary part of a non-real witness value.
    pub witness_im_tol: f64,
    /// Eigenvalue floor below which a Hermitian matrix yields a negative
    /// witness.
    pub psd_floor: f64,
    /// Agreement required between the two evaluation routes of the witness
    /// value (Gram form versus convolve-then-character).
    pub route_match_tol: f64,
}

impl Default for PdSettings {
    fn default() -> Self {
        PdSettings {
            hermitian_entry_tol: 1e-10,
            witness_im_tol: 1e-6,
            psd_floor: 1e-10,
            route_match_tol: 1e-9,
        }
    }
}

/// A concrete obstruction to positive definiteness: a radial function whose
/// quadratic-form value escapes the nonnegative reals.
#[derive(Debug, Clone)]
pub struct PdWitness {
    /// Gram radius at which the witness was found.
    pub radius: usize,
    /// Coefficients of the witness, by distance (real in practice).
    pub coefficients: Vec<(usize, Complex64)>,
    /// `chi_phi(f * f^*)`, recomputed through convolution and the character.
    pub form_value: Complex64,
}

/// Searches the ball of the given radius for a witness against positive
/// definiteness of `phi`.
///
/// If the Gram matrix is non-Hermitian, the extremal eigenvector of its
/// imaginary part gives a real function with a non-real form value; if it is
/// Hermitian but indefinite, the most negative eigenvector does. The value
/// is computed twice (quadratic form, and convolution followed by the
/// character) and the witness is only reported when the routes agree.
/// Absence of a witness is a statement about this radius only.
pub fn pd_witness(
    phi: &impl RadialEval,
    radius: usize,
    settings: &PdSettings,
) -> Option<PdWitness> {
    let gram = pd_form_matrix(phi, radius);
    let dim = gram.dim();
    if dim <= 1 {
        return None;
    }
    let imag = DMatrix::from_fn(dim, dim, |a, b| gram.matrix[(a, b)].im);
    let max_imag = imag.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let candidate: Option<Vec<f64>> = if max_imag > settings.hermitian_entry_tol {
        // extremal eigenvector of the imaginary part maximises |Im form|
        // over real coefficient vectors
        let eigen = imag.symmetric_eigen();
        let (mut best, mut best_abs) = (0, 0.0f64);
        for (i, value) in eigen.eigenvalues.iter().enumerate() {
            if value.abs() > best_abs {
                best_abs = value.abs();
                best = i;
            }
        }
        Some(eigen.eigenvectors.column(best).iter().copied().collect())
    } else {
        let real = DMatrix::from_fn(dim, dim, |a, b| gram.matrix[(a, b)].re);
        let eigen = real.symmetric_eigen();
        let (mut worst, mut worst_val) = (0, f64::INFINITY);
        for (i, value) in eigen.eigenvalues.iter().enumerate() {
            if *value < worst_val {
                worst_val = *value;
                worst = i;
            }
        }
        if worst_val < -settings.psd_floor {
            Some(eigen.eigenvectors.column(worst).iter().copied().collect())
        } else {
            None
        }
    };

    let vector = candidate?;
    let coeffs: Vec<Complex64> = vector.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let quadratic = gram.form_value(&coeffs);

    let pairs: Vec<(usize, Complex64)> = gram
        .distances
        .iter()
        .copied()
        .zip(coeffs.iter().copied())
        .collect();
    let f = RadialFunction::from_coeffs(*phi.tree(), pairs.clone()).ok()?;
    let product = convolve(&f, &f.involution()).ok()?;
    let form_value = character(phi, &product);
    if (form_value - quadratic).norm() > settings.route_match_tol {
        return None;
    }
    let non_real = form_value.im.abs() > settings.witness_im_tol;
    let negative = form_value.re < -settings.psd_floor
        && form_value.im.abs() <= settings.witness_im_tol;
    if non_real || negative {
        Some(PdWitness {
            radius,
            coefficients: pairs,
            form_value,
        })
    } else {
        None
    }
}

/// Recomputes `chi_phi(f * f^*)` for serialized witness coefficients, using
/// only structure constants and the supplied evaluator.
pub fn witness_form_value(
    phi: &impl RadialEval,
    coefficients: &[(usize, Complex64)],
) -> Result<Complex64, HeckeError> {
    let f = RadialFunction::from_coeffs(*phi.tree(), coefficients.iter().copied())?;
    let product = convolve(&f, &f.involution())?;
    Ok(character(phi, &product))
}
