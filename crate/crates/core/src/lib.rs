//! Harmonic analysis on semi-regular trees at finite desk scale.
//!
//! The crate models the bipartite tree `T(d1, d2)` whose two vertex types have
//! constant degrees `d1` and `d2`, together with the objects attached to the
//! Gelfand pair formed by its boundary-transitive automorphism group and a
//! vertex stabiliser:
//!
//! * [`tree_model`] — exact combinatorics of the tree: addresses, spheres,
//!   boundary cylinders, the visibility measure, a finite automorphism
//!   calculus (portraits and transporters), and the Radon–Nikodym cocycle,
//!   all in arbitrary-precision rational arithmetic.
//! * [`radial_hecke`] — the commutative convolution algebra of radial
//!   functions: exact structure constants, involution, characters and the
//!   Gram-matrix positivity test.
//! * [`spherical`] — two independent evaluators for the spherical functions,
//!   the spectral-parameter classification (equality classes, Hermitian
//!   test, irreducibility parameter families), and the non-Wiener
//!   certification pipeline.
//! * [`boundary_rep`] — finite, exact operator models of the boundary
//!   representations on cylinder step functions, with the property battery
//!   (homomorphism, isometry, unitarity, coefficient, Hecke compression).
//! * [`weyl`] — root-system and Weyl-group calculator for the reductive-group
//!   side: the Weyl vector, the longest element, and the orbit constraint
//!   that forces Hermitian parameters onto the real or imaginary axis.

pub mod boundary_rep;
pub mod radial_hecke;
pub mod spherical;
pub mod tree_model;
mod util;
pub mod weyl;

pub use num_complex::Complex64;
pub use num_rational::BigRational;
