//! Exact combinatorics and measure theory of the semi-regular tree.
//!
//! Vertices are addressed by their child-index path from a fixed root `o`.
//! The boundary is the space of ends (infinite rays from the root); a
//! depth-`n` vertex `v` determines the cylinder of ends passing through `v`,
//! and the visibility measure gives every depth-`n` cylinder the same mass
//! `1 / sphere_size(n)`. Everything in this module is exact: vertex counts
//! are integers, measures and cocycle values are big rationals.

mod automorphism;

pub use automorphism::{GroupElement, Portrait, Transporter};

use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;
use thiserror::Error;

/// Errors from tree-side constructors and measure/cocycle evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("degrees (d1, d2) = ({d1}, {d2}) out of range: need d1 >= 2 and d2 >= 3")]
    InvalidDegrees { d1: u32, d2: u32 },
    #[error("address letter {letter} at depth {depth} exceeds branching {branching}")]
    InvalidAddress {
        letter: u8,
        depth: usize,
        branching: u32,
    },
    #[error("transporter target has odd depth {depth}, but d1 != d2 forces type-preserving maps")]
    OddDisplacement { depth: usize },
    #[error("permutation at depth {depth} has length {len}, expected {expected}")]
    InvalidPermutation {
        depth: usize,
        len: usize,
        expected: u32,
    },
    #[error("cylinder depth {depth} too shallow: displacement {displacement} needs depth >= {required}")]
    DepthTooShallow {
        depth: usize,
        displacement: usize,
        required: usize,
    },
    #[error("elements live on different trees")]
    TreeMismatch,
    #[error("element does not stabilise the standard end")]
    NotInEndStabilizer,
}

/// The two sides of the bipartition. Type-A vertices have degree `d1`,
/// type-B vertices degree `d2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexType {
    A,
    B,
}

impl VertexType {
    fn other(self) -> VertexType {
        match self {
            VertexType::A => VertexType::B,
            VertexType::B => VertexType::A,
        }
    }
}

/// The semi-regular tree `T(d1, d2)`: the infinite bipartite tree in which
/// every type-A vertex has degree `d1` and every type-B vertex degree `d2`.
///
/// When `d1 != d2` every automorphism preserves vertex types, so all
/// displacements `d(o, g o)` are even and only even distances carry
/// double cosets. When `d1 == d2` the tree is regular and type-exchanging
/// maps are admitted, so every distance occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemiRegularTree {
    d1: u32,
    d2: u32,
    root_type: VertexType,
}

impl SemiRegularTree {
    /// Tree with a type-A root. Requires `d1 >= 2` and `d2 >= 3`.
    pub fn new(d1: u32, d2: u32) -> Result<Self, TreeError> {
        if d1 < 2 || d2 < 3 {
            return Err(TreeError::InvalidDegrees { d1, d2 });
        }
        Ok(SemiRegularTree {
            d1,
            d2,
            root_type: VertexType::A,
        })
    }

    pub fn with_root_type(mut self, root_type: VertexType) -> Self {
        self.root_type = root_type;
        self
    }

    pub fn d1(&self) -> u32 {
        self.d1
    }

    pub fn d2(&self) -> u32 {
        self.d2
    }

    pub fn root_type(&self) -> VertexType {
        self.root_type
    }

    pub fn degree(&self, vertex_type: VertexType) -> u32 {
        match vertex_type {
            VertexType::A => self.d1,
            VertexType::B => self.d2,
        }
    }

    pub fn type_at_depth(&self, depth: usize) -> VertexType {
        if depth.is_multiple_of(2) {
            self.root_type
        } else {
            self.root_type.other()
        }
    }

    /// Number of children of a vertex at the given depth: the root keeps its
    /// full degree, deeper vertices lose the edge back to their parent.
    pub fn branching(&self, depth: usize) -> u32 {
        let deg = self.degree(self.type_at_depth(depth));
        if depth == 0 {
            deg
        } else {
            deg - 1
        }
    }

    /// Spacing of admissible displacements: 1 on a regular tree, 2 otherwise.
    pub fn distance_step(&self) -> usize {
        if self.d1 == self.d2 {
            1
        } else {
            2
        }
    }

    pub fn is_admissible_distance(&self, n: usize) -> bool {
        n.is_multiple_of(self.distance_step())
    }

    /// Exact number of vertices at distance `n` from the root.
    ///
    /// `N(0) = 1` and `N(n+1) = N(n) * branching(n)`. Panics on `u128`
    /// overflow, which needs depths far beyond anything this crate builds.
    pub fn sphere_size(&self, n: usize) -> u128 {
        let mut count: u128 = 1;
        for level in 0..n {
            count = count
                .checked_mul(u128::from(self.branching(level)))
                .expect("sphere size overflows u128");
        }
        count
    }

    /// Visibility measure of the cylinder below `base`: the unique
    /// stabiliser-invariant probability measure splits each depth evenly,
    /// so a depth-`n` cylinder has mass `1 / sphere_size(n)`.
    pub fn cylinder_measure(&self, cylinder: &Cylinder) -> BigRational {
        BigRational::new(
            BigInt::from(1),
            BigInt::from(self.sphere_size(cylinder.depth())),
        )
    }

    /// Checks letters against the branching profile.
    pub fn validate_address(&self, address: &VertexAddress) -> Result<(), TreeError> {
        for (depth, &letter) in address.letters().iter().enumerate() {
            let branching = self.branching(depth);
            if u32::from(letter) >= branching {
                return Err(TreeError::InvalidAddress {
                    letter,
                    depth,
                    branching,
                });
            }
        }
        Ok(())
    }

    /// All addresses at the given depth, in lexicographic order.
    pub fn addresses_at_depth(&self, depth: usize) -> Vec<VertexAddress> {
        let mut level = vec![VertexAddress::root()];
        for d in 0..depth {
            let branching = self.branching(d);
            let mut next = Vec::with_capacity(level.len() * branching as usize);
            for addr in &level {
                for letter in 0..branching {
                    next.push(addr.child(letter as u8));
                }
            }
            level = next;
        }
        level
    }
}

/// Path of child indices from the root; the empty path is the root itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAddress(Vec<u8>);

impl VertexAddress {
    pub fn root() -> Self {
        VertexAddress(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Self {
        VertexAddress(letters)
    }

    /// The depth-`n` vertex on the standard (all-zeros) ray.
    pub fn standard_ray(n: usize) -> Self {
        VertexAddress(vec![0; n])
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn parent(&self) -> Option<VertexAddress> {
        if self.is_root() {
            None
        } else {
            Some(VertexAddress(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn child(&self, letter: u8) -> VertexAddress {
        let mut letters = self.0.clone();
        letters.push(letter);
        VertexAddress(letters)
    }

    pub fn prefix(&self, depth: usize) -> VertexAddress {
        VertexAddress(self.0[..depth.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &VertexAddress) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Depth of the confluence (longest common prefix) with `other`.
    pub fn common_prefix_len(&self, other: &VertexAddress) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Graph distance between the two vertices.
    pub fn distance(&self, other: &VertexAddress) -> usize {
        let common = self.common_prefix_len(other);
        self.depth() + other.depth() - 2 * common
    }

    /// Concatenation: the vertex reached from `self` by descending `tail`.
    pub fn join(&self, tail: &[u8]) -> VertexAddress {
        let mut letters = self.0.clone();
        letters.extend_from_slice(tail);
        VertexAddress(letters)
    }
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            write!(f, "o")
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

/// The set of ends passing through a base vertex. Cylinders of a fixed depth
/// partition the boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cylinder {
    base: VertexAddress,
}

impl Cylinder {
    pub fn new(tree: &SemiRegularTree, base: VertexAddress) -> Result<Self, TreeError> {
        tree.validate_address(&base)?;
        Ok(Cylinder { base })
    }

    pub fn base(&self) -> &VertexAddress {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.base.depth()
    }
}

/// Radon–Nikodym derivative of the pushforward measure on the cylinder:
/// `d(g mu)/d(mu) = mu(g^{-1} C) / mu(C)`, exact.
///
/// The derivative is constant on a cylinder as soon as its depth exceeds the
/// displacement of `g`; shallower requests are an error, never an
/// approximation.
pub fn radon_nikodym(
    tree: &SemiRegularTree,
    g: &GroupElement,
    cylinder: &Cylinder,
) -> Result<BigRational, TreeError> {
    let displacement = g.displacement();
    let depth = cylinder.depth();
    if depth < displacement + 1 {
        return Err(TreeError::DepthTooShallow {
            depth,
            displacement,
            required: displacement + 1,
        });
    }
    let preimage = g.apply_inverse(cylinder.base());
    Ok(BigRational::new(
        BigInt::from(tree.sphere_size(depth)),
        BigInt::from(tree.sphere_size(preimage.depth())),
    ))
}

/// Cocycle value `c(g, omega)` shared by every end through `end_prefix`.
///
/// Satisfies `c(gh, omega) = c(g, omega) * c(h, g^{-1} omega)` exactly in
/// rational arithmetic.
pub fn cocycle_value(
    tree: &SemiRegularTree,
    g: &GroupElement,
    end_prefix: &VertexAddress,
) -> Result<BigRational, TreeError> {
    tree.validate_address(end_prefix)?;
    radon_nikodym(tree, g, &Cylinder::new(tree, end_prefix.clone())?)
}
