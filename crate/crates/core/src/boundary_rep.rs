//! Finite, exact operator models of the boundary representations.
//!
//! Step functions over the depth-`n` cylinder partition form a finite
//! subspace of every `L^p` of the boundary. A group element `g` of
//! displacement `d` maps it exactly into the depth-`(n+d)` step space:
//! the operator is stored row-sparsely, one weighted entry per output
//! cylinder, with the cocycle power `c(g, C)^z` as the weight. Nothing is
//! truncated or approximated: above the depth threshold the model is exact,
//! so homomorphism, isometry, unitarity, coefficient and compression checks
//! hold to float roundoff, and every checked quantity is unchanged when the
//! depth is increased.

pub mod battery;

use crate::radial_hecke::{character, RadialFunction};
use crate::spherical::{SpectralParameter, SphericalFunction};
use crate::tree_model::{
    radon_nikodym, Cylinder, GroupElement, SemiRegularTree, Transporter, VertexAddress,
};
use crate::util::real_pow;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error("cylinder space of depth {depth} too shallow for displacement {displacement}: need depth >= {required}")]
    DepthTooShallow {
        depth: usize,
        displacement: usize,
        required: usize,
    },
    #[error("cylinder space at depth {depth} would have {size} basis elements")]
    SpaceTooLarge { depth: usize, size: u128 },
    #[error("isometry exponent needs 0 < Re(z) < 1, got Re(z) = {re}")]
    ParameterOutsideStrip { re: f64 },
    #[error("objects live on different trees")]
    TreeMismatch,
    #[error("operator domains do not line up: {outer} vs {inner}")]
    SpaceMismatch { outer: usize, inner: usize },
}

/// The space of step functions over depth-`n` cylinders, with the boundary
/// measure weights. Every depth-`n` cylinder has the same mass `1/N(n)`.
#[derive(Debug, Clone)]
pub struct CylinderSpace {
    tree: SemiRegularTree,
    depth: usize,
    bases: Vec<VertexAddress>,
    index: HashMap<VertexAddress, usize>,
}

impl CylinderSpace {
    pub fn new(tree: SemiRegularTree, depth: usize) -> Result<Self, BoundaryError> {
        let size = tree.sphere_size(depth);
        if size > 2_000_000 {
            return Err(BoundaryError::SpaceTooLarge { depth, size });
        }
        let bases = tree.addresses_at_depth(depth);
        let index = bases
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        Ok(CylinderSpace {
            tree,
            depth,
            bases,
            index,
        })
    }

    pub fn tree(&self) -> &SemiRegularTree {
        &self.tree
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[VertexAddress] {
        &self.bases
    }

    pub fn index_of(&self, base: &VertexAddress) -> Option<usize> {
        self.index.get(base).copied()
    }

    /// Mass of each basis cylinder.
    pub fn weight(&self) -> f64 {
        1.0 / self.dim() as f64
    }

    pub fn ones(&self) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); self.dim()]
    }

    /// Boundary integral of a step function.
    pub fn integral(&self, values: &[Complex64]) -> Complex64 {
        debug_assert_eq!(values.len(), self.dim());
        values.iter().sum::<Complex64>() * self.weight()
    }

    /// `L^p` norm with respect to the boundary measure. Terms are summed in
    /// sorted order, so permuting a step function never changes its norm,
    /// not even in the last bit.
    pub fn lp_norm(&self, values: &[Complex64], p: f64) -> f64 {
        let mut terms: Vec<f64> = values.iter().map(|v| v.norm().powf(p)).collect();
        terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let total: f64 = terms.iter().sum();
        (total * self.weight()).powf(1.0 / p)
    }

    /// Measure-weighted inner product.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter()
            .zip(g.iter())
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            * self.weight()
    }
}

/// Exact matrix of a boundary-representation operator on cylinder step
/// functions.
///
/// The domain is the step space of the given cylinder space; the codomain is
/// the step space `displacement(g)` levels deeper, where the image lands
/// exactly. Each output cylinder receives exactly one weighted entry,
/// `c(g, C)^z` at the column of the cylinder containing `g^{-1} C`, so the
/// matrix is a weighted permutation whenever `g` fixes the root.
#[derive(Debug, Clone)]
pub struct RepOperator {
    domain: CylinderSpace,
    codomain: CylinderSpace,
    z: Complex64,
    p: f64,
    element: GroupElement,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl RepOperator {
    pub fn domain(&self) -> &CylinderSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &CylinderSpace {
        &self.codomain
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn element(&self) -> &GroupElement {
        &self.element
    }

    /// Column index of the single nonzero entry in each row.
    pub fn columns(&self) -> &[usize] {
        &self.cols
    }

    /// Value of the single nonzero entry in each row.
    pub fn values(&self) -> &[Complex64] {
        &self.vals
    }

    pub fn apply(&self, input: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(input.len(), self.domain.dim());
        self.cols
            .iter()
            .zip(self.vals.iter())
            .map(|(&c, &v)| v * input[c])
            .collect()
    }

    /// Dense matrix, codomain dimension by domain dimension.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(
            self.codomain.dim(),
            self.domain.dim(),
            Complex64::new(0.0, 0.0),
        );
        for (row, (&col, &val)) in self.cols.iter().zip(self.vals.iter()).enumerate() {
            m[(row, col)] = val;
        }
        m
    }
}

/// Builds the exact operator of `g` on the step functions of `space`.
///
/// Needs `depth >= displacement(g) + 1` so the cocycle is constant on every
/// codomain cylinder; shallower spaces are an error.
pub fn build_operator(
    space: &CylinderSpace,
    z: Complex64,
    p: f64,
    g: &GroupElement,
) -> Result<RepOperator, BoundaryError> {
    if space.tree() != g.tree() {
        return Err(BoundaryError::TreeMismatch);
    }
    let tree = *space.tree();
    let displacement = g.displacement();
    if space.depth() < displacement + 1 {
        return Err(BoundaryError::DepthTooShallow {
            depth: space.depth(),
            displacement,
            required: displacement + 1,
        });
    }
    let codomain = CylinderSpace::new(tree, space.depth() + displacement)?;
    let mut cols = Vec::with_capacity(codomain.dim());
    let mut vals = Vec::with_capacity(codomain.dim());
    for base in codomain.bases() {
        let preimage = g.apply_inverse(base);
        debug_assert!(preimage.depth() >= space.depth());
        let col = space
            .index_of(&preimage.prefix(space.depth()))
            .expect("preimage prefix is a domain cylinder");
        let ratio = radon_nikodym(&tree, g, &Cylinder::new(&tree, base.clone()).unwrap())
            .expect("codomain depth exceeds the displacement")
            .to_f64()
            .expect("cocycle ratio fits in f64");
        cols.push(col);
        vals.push(real_pow(ratio, z));
    }
    Ok(RepOperator {
        domain: space.clone(),
        codomain,
        z,
        p,
        element: g.clone(),
        cols,
        vals,
    })
}

/// `outer . inner` as sparse matrices; the inner codomain must be the outer
/// domain.
pub fn compose(outer: &RepOperator, inner: &RepOperator) -> Result<RepOperator, BoundaryError> {
    if outer.domain.tree() != inner.codomain.tree() {
        return Err(BoundaryError::TreeMismatch);
    }
    if outer.domain.depth() != inner.codomain.depth() {
        return Err(BoundaryError::SpaceMismatch {
            outer: outer.domain.depth(),
            inner: inner.codomain.depth(),
        });
    }
    let cols = outer
        .cols
        .iter()
        .map(|&mid| inner.cols[mid])
        .collect::<Vec<_>>();
    let vals = outer
        .cols
        .iter()
        .zip(outer.vals.iter())
        .map(|(&mid, &v)| v * inner.vals[mid])
        .collect::<Vec<_>>();
    Ok(RepOperator {
        domain: inner.domain.clone(),
        codomain: outer.codomain.clone(),
        z: outer.z,
        p: outer.p,
        element: outer.element.compose(inner.element()).expect("same tree"),
        cols,
        vals,
    })
}

/// Rewrites the operator against a deeper codomain partition; values copy
/// onto the refined cylinders, nothing changes as an operator on `L^p`.
pub fn refine_codomain(
    op: &RepOperator,
    target_depth: usize,
) -> Result<RepOperator, BoundaryError> {
    assert!(target_depth >= op.codomain.depth());
    let codomain = CylinderSpace::new(*op.codomain.tree(), target_depth)?;
    let mut cols = Vec::with_capacity(codomain.dim());
    let mut vals = Vec::with_capacity(codomain.dim());
    for base in codomain.bases() {
        let coarse = op
            .codomain
            .index_of(&base.prefix(op.codomain.depth()))
            .expect("prefix is a coarse cylinder");
        cols.push(op.cols[coarse]);
        vals.push(op.vals[coarse]);
    }
    Ok(RepOperator {
        domain: op.domain.clone(),
        codomain,
        z: op.z,
        p: op.p,
        element: op.element.clone(),
        cols,
        vals,
    })
}

/// Maximal entrywise difference between `op_g . op_h` and the operator of
/// the composed element, compared on the common refinement. A column
/// mismatch (the permutation structures disagreeing) reports as infinity.
pub fn homomorphism_defect(
    space: &CylinderSpace,
    z: Complex64,
    p: f64,
    g: &GroupElement,
    h: &GroupElement,
) -> Result<f64, BoundaryError> {
    let op_h = build_operator(space, z, p, h)?;
    let op_g = build_operator(op_h.codomain(), z, p, g)?;
    let product = compose(&op_g, &op_h)?;
    let gh = g.compose(h).map_err(|_| BoundaryError::TreeMismatch)?;
    let op_gh = build_operator(space, z, p, &gh)?;
    let refined = refine_codomain(&op_gh, product.codomain().depth())?;
    let mut defect = 0.0f64;
    for row in 0..product.codomain().dim() {
        if product.cols[row] != refined.cols[row] {
            return Ok(f64::INFINITY);
        }
        defect = defect.max((product.vals[row] - refined.vals[row]).norm());
    }
    Ok(defect)
}

/// Largest deviation `| ||op f||_p - ||f||_p |` over a basis-spanning test
/// set at the isometric exponent `p = 1 / Re(z)`.
pub fn check_isometry(
    space: &CylinderSpace,
    z: Complex64,
    g: &GroupElement,
) -> Result<f64, BoundaryError> {
    if z.re <= 0.0 || z.re >= 1.0 {
        return Err(BoundaryError::ParameterOutsideStrip { re: z.re });
    }
    let p = 1.0 / z.re;
    let op = build_operator(space, z, p, g)?;
    let w_dom = space.weight();
    let w_cod = op.codomain().weight();
    // indicators, accumulated in one pass over the rows
    let mut mass = vec![0.0f64; space.dim()];
    for (row, &col) in op.cols.iter().enumerate() {
        mass[col] += w_cod * op.vals[row].norm().powf(p);
    }
    let indicator_norm = w_dom.powf(1.0 / p);
    let mut defect = mass
        .iter()
        .map(|m| (m.powf(1.0 / p) - indicator_norm).abs())
        .fold(0.0f64, f64::max);
    // a few dense deterministic vectors
    let mut rng = crate::util::SplitMix64(0x1505_0005);
    for _ in 0..3 {
        let f: Vec<Complex64> = (0..space.dim())
            .map(|_| Complex64::new(rng.next_f64() * 2.0 - 1.0, rng.next_f64() * 2.0 - 1.0))
            .collect();
        let image = op.apply(&f);
        defect = defect.max((op.codomain().lp_norm(&image, p) - space.lp_norm(&f, p)).abs());
    }
    Ok(defect)
}

/// Deviation of the measure-weighted Gram identity `A^* W A = W`, the exact
/// form of unitarity for the isometric embedding of step spaces; zero in
/// exact arithmetic on the critical line `Re(z) = 1/2`.
pub fn unitarity_defect(
    space: &CylinderSpace,
    z: Complex64,
    g: &GroupElement,
) -> Result<f64, BoundaryError> {
    let op = build_operator(space, z, 2.0, g)?;
    let scale = space.dim() as f64 / op.codomain().dim() as f64;
    let mut mass = vec![0.0f64; space.dim()];
    for (row, &col) in op.cols.iter().enumerate() {
        mass[col] += scale * op.vals[row].norm_sqr();
    }
    Ok(mass.iter().map(|m| (m - 1.0).abs()).fold(0.0f64, f64::max))
}

/// `<pi(g) 1, 1>` in the measure-weighted pairing: the spherical function of
/// the displacement, independent of the portrait part of `g`.
pub fn matrix_coefficient(
    space: &CylinderSpace,
    z: Complex64,
    g: &GroupElement,
) -> Result<Complex64, BoundaryError> {
    let op = build_operator(space, z, 2.0, g)?;
    Ok(op.vals.iter().sum::<Complex64>() * op.codomain().weight())
}

/// Projection onto the constants, `f -> (integral of f) 1`: the
/// stabiliser-average operator, exact because the stabiliser acts
/// transitively on same-depth cylinders.
pub fn project_onto_constants(space: &CylinderSpace, values: &[Complex64]) -> Vec<Complex64> {
    let mean = space.integral(values);
    vec![mean; space.dim()]
}

/// Compression defect of the double-coset operator of `f`: builds
/// `pi(f) 1 = sum_m f(m) sum_{|w| = m} pi(t_w) 1` from the full transporter
/// orbit, compresses onto the constants and compares the eigenvalue with the
/// character `chi_phi(f)` computed through the spherical evaluator.
pub fn hecke_compression_defect(
    space: &CylinderSpace,
    z: Complex64,
    f: &RadialFunction,
) -> Result<f64, BoundaryError> {
    if space.tree() != f.tree() {
        return Err(BoundaryError::TreeMismatch);
    }
    let tree = *space.tree();
    let radius = f.support_radius();
    if space.depth() < radius + 1 {
        return Err(BoundaryError::DepthTooShallow {
            depth: space.depth(),
            displacement: radius,
            required: radius + 1,
        });
    }
    let out_space = CylinderSpace::new(tree, space.depth() + radius)?;
    let mut image = vec![Complex64::new(0.0, 0.0); out_space.dim()];
    for (&m, &fm) in f.coeffs() {
        for target in tree.addresses_at_depth(m) {
            let transporter =
                Transporter::new(tree, target).expect("sphere addresses are admissible");
            let op = build_operator(space, z, 2.0, &GroupElement::from_transporter(transporter))?;
            // applied to the constant function, the operator returns its
            // value column
            let coarse_depth = op.codomain().depth();
            for (row, base) in out_space.bases().iter().enumerate() {
                let coarse = op
                    .codomain()
                    .index_of(&base.prefix(coarse_depth))
                    .expect("prefix is a codomain cylinder");
                image[row] += fm * op.vals[coarse];
            }
        }
    }
    let eigenvalue = out_space.integral(&image);
    let phi = SphericalFunction::new(SpectralParameter::new(tree, z));
    let chi = character(&phi, f);
    Ok((eigenvalue - chi).norm())
}

/// Worst compression defect over the sphere indicators of support up to
/// `radius`, together with one dense deterministic radial function of the
/// same radius.
pub fn hecke_compression_check(
    space: &CylinderSpace,
    z: Complex64,
    radius: usize,
) -> Result<f64, BoundaryError> {
    let tree = *space.tree();
    let step = tree.distance_step();
    let mut worst = 0.0f64;
    for m in (0..=radius).step_by(step) {
        let f = RadialFunction::delta(tree, m).expect("stepped distances are admissible");
        worst = worst.max(hecke_compression_defect(space, z, &f)?);
    }
    let mut rng = crate::util::SplitMix64(0x9e37_0042);
    let dense: Vec<(usize, Complex64)> = (0..=radius)
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
    let f = RadialFunction::from_coeffs(tree, dense).expect("admissible support");
    worst = worst.max(hecke_compression_defect(space, z, &f)?);
    Ok(worst)
}
