//! Root systems, Weyl groups and the orbit constraint on Hermitian
//! parameters.
//!
//! Roots live in standard integer-coordinate realizations (type A in the
//! sum-zero hyperplane of rank+1 coordinates, B/C/D in rank coordinates,
//! G2 in the sum-zero hyperplane of three), so every computation here is
//! exact integer arithmetic. Group elements are stored as permutations of
//! the root set, which is faithful and cheap to compose; the enumeration is
//! capped at rank 4, keeping every supported group at or below 384 elements.
//!
//! The payoff is the scan for `w(rho) = c rho`: machine verification that
//! the Weyl vector is only ever fixed or negated, which pins the parameter
//! of a Hermitian-symmetric induced character to the real or the imaginary
//! axis.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("unsupported root system {type_label:?} of rank {rank}")]
    UnsupportedType {
        type_label: RootSystemType,
        rank: usize,
    },
    #[error("rank {rank} exceeds the enumeration bound 4")]
    EnumerationBound { rank: usize },
    #[error("the axis constraint is undefined at z = 0")]
    ZeroParameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootSystemType {
    A,
    B,
    C,
    D,
    G2,
}

impl RootSystemType {
    pub fn as_str(&self) -> &'static str {
        match self {
            RootSystemType::A => "A",
            RootSystemType::B => "B",
            RootSystemType::C => "C",
            RootSystemType::D => "D",
            RootSystemType::G2 => "G2",
        }
    }

    pub fn parse(s: &str) -> Option<RootSystemType> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Some(RootSystemType::A),
            "B" => Some(RootSystemType::B),
            "C" => Some(RootSystemType::C),
            "D" => Some(RootSystemType::D),
            "G2" | "G" => Some(RootSystemType::G2),
            _ => None,
        }
    }
}

type Vector = Vec<i64>;

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// `s_alpha(x) = x - (2 <x, alpha> / <alpha, alpha>) alpha`; exact on the
/// root lattice.
fn reflect(x: &[i64], alpha: &[i64]) -> Vector {
    let num = 2 * dot(x, alpha);
    let den = dot(alpha, alpha);
    debug_assert_eq!(num % den, 0, "non-integral reflection coefficient");
    let c = num / den;
    x.iter()
        .zip(alpha.iter())
        .map(|(xi, ai)| xi - c * ai)
        .collect()
}

/// A crystallographic root system in a fixed integer realization.
#[derive(Debug, Clone)]
pub struct RootSystem {
    type_label: RootSystemType,
    rank: usize,
    roots: Vec<Vector>,
    simple: Vec<Vector>,
    /// Indices into `roots` of the positive roots.
    positive: Vec<usize>,
}

impl RootSystem {
    pub fn type_label(&self) -> RootSystemType {
        self.type_label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Vector] {
        &self.roots
    }

    pub fn simple_roots(&self) -> &[Vector] {
        &self.simple
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Vector> {
        self.positive.iter().map(|&i| &self.roots[i])
    }

    pub fn positive_count(&self) -> usize {
        self.positive.len()
    }

    /// Twice the Weyl vector: the sum of the positive roots, an integer
    /// vector (the half-sum itself may have half-integer coordinates).
    pub fn rho_doubled(&self) -> Vector {
        let dim = self.roots[0].len();
        let mut acc = vec![0i64; dim];
        for root in self.positive_roots() {
            for (a, r) in acc.iter_mut().zip(root.iter()) {
                *a += r;
            }
        }
        acc
    }

    /// The Weyl vector itself: half the sum of the positive roots, with
    /// exact rational coordinates.
    pub fn rho(&self) -> Vec<Rational64> {
        self.rho_doubled()
            .into_iter()
            .map(|x| Rational64::new(x, 2))
            .collect()
    }

    /// `<rho, alpha^vee>` for a simple root: equals 1 for every simple root,
    /// the defining normalisation of the Weyl vector.
    pub fn rho_simple_pairing(&self, simple_index: usize) -> Rational64 {
        let alpha = &self.simple[simple_index];
        Rational64::new(dot(&self.rho_doubled(), alpha), dot(alpha, alpha))
    }
}

fn simple_roots_for(type_label: RootSystemType, rank: usize) -> Result<Vec<Vector>, WeylError> {
    let unsupported = WeylError::UnsupportedType { type_label, rank };
    if rank > 4 {
        return Err(WeylError::EnumerationBound { rank });
    }
    let unit = |dim: usize, i: usize| -> Vector {
        let mut v = vec![0i64; dim];
        v[i] = 1;
        v
    };
    let diff = |dim: usize, i: usize, j: usize| -> Vector {
        let mut v = vec![0i64; dim];
        v[i] = 1;
        v[j] = -1;
        v
    };
    match type_label {
        RootSystemType::A => {
            if rank < 1 {
                return Err(unsupported);
            }
            let dim = rank + 1;
            Ok((0..rank).map(|i| diff(dim, i, i + 1)).collect())
        }
        RootSystemType::B => {
            if rank < 2 {
                return Err(unsupported);
            }
            let mut simple: Vec<Vector> = (0..rank - 1).map(|i| diff(rank, i, i + 1)).collect();
            simple.push(unit(rank, rank - 1));
            Ok(simple)
        }
        RootSystemType::C => {
            if rank < 2 {
                return Err(unsupported);
            }
            let mut simple: Vec<Vector> = (0..rank - 1).map(|i| diff(rank, i, i + 1)).collect();
            let mut long = vec![0i64; rank];
            long[rank - 1] = 2;
            simple.push(long);
            Ok(simple)
        }
        RootSystemType::D => {
            if rank < 3 {
                return Err(unsupported);
            }
            let mut simple: Vec<Vector> = (0..rank - 1).map(|i| diff(rank, i, i + 1)).collect();
            let mut fork = vec![0i64; rank];
            fork[rank - 2] = 1;
            fork[rank - 1] = 1;
            simple.push(fork);
            Ok(simple)
        }
        RootSystemType::G2 => {
            if rank != 2 {
                return Err(unsupported);
            }
            Ok(vec![vec![1, -1, 0], vec![-2, 1, 1]])
        }
    }
}

/// Builds the root system: closure of the simple roots under the simple
/// reflections, with positivity decided by the simple-basis coordinates.
pub fn build_root_system(
    type_label: RootSystemType,
    rank: usize,
) -> Result<RootSystem, WeylError> {
    let simple = simple_roots_for(type_label, rank)?;
    let mut roots: Vec<Vector> = Vec::new();
    let mut seen: HashSet<Vector> = HashSet::new();
    let mut queue: Vec<Vector> = simple.clone();
    while let Some(root) = queue.pop() {
        if !seen.insert(root.clone()) {
            continue;
        }
        roots.push(root.clone());
        for alpha in &simple {
            queue.push(reflect(&root, alpha));
        }
    }
    roots.sort();
    let positive = roots
        .iter()
        .enumerate()
        .filter(|(_, root)| {
            simple_coordinates(&simple, root)
                .iter()
                .all(|c| *c >= Rational64::zero())
        })
        .map(|(i, _)| i)
        .collect::<Vec<_>>();
    assert_eq!(2 * positive.len(), roots.len(), "positive/negative split");
    Ok(RootSystem {
        type_label,
        rank,
        roots,
        simple,
        positive,
    })
}

/// Coordinates of a lattice vector in the simple-root basis, by exact
/// Gaussian elimination.
fn simple_coordinates(simple: &[Vector], target: &Vector) -> Vec<Rational64> {
    let rows = target.len();
    let cols = simple.len();
    let mut m: Vec<Vec<Rational64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational64> =
                (0..cols).map(|c| Rational64::from(simple[c][r])).collect();
            row.push(Rational64::from(target[r]));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if let Some(r) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) {
            m.swap(pivot_row, r);
            let inv = m[pivot_row][col];
            for entry in &mut m[pivot_row][col..=cols] {
                *entry /= inv;
            }
            for r in 0..rows {
                if r != pivot_row && !m[r][col].is_zero() {
                    let factor = m[r][col];
                    let pivot = m[pivot_row][col..=cols].to_vec();
                    for (entry, p) in m[r][col..=cols].iter_mut().zip(pivot.iter()) {
                        *entry -= factor * p;
                    }
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    let mut coords = vec![Rational64::zero(); cols];
    for (row, col) in pivots {
        coords[col] = m[row][cols];
    }
    coords
}

/// A Weyl group element as a permutation of the root list.
pub type RootPermutation = Vec<u16>;

/// The full Weyl group, enumerated by closure of the simple reflections.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    elements: Vec<RootPermutation>,
    identity: usize,
    longest: usize,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[RootPermutation] {
        &self.elements
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    /// Index of the longest element: the unique one sending every positive
    /// root to a negative root.
    pub fn longest_index(&self) -> usize {
        self.longest
    }

    /// Number of positive roots mapped to negative ones by the element.
    pub fn inversions(&self, rs: &RootSystem, element: usize) -> usize {
        let perm = &self.elements[element];
        let positive: HashSet<usize> = rs.positive.iter().copied().collect();
        rs.positive
            .iter()
            .filter(|&&i| !positive.contains(&usize::from(perm[i])))
            .count()
    }
}

/// Enumerates the Weyl group of a supported system.
pub fn weyl_group(rs: &RootSystem) -> Result<WeylGroup, WeylError> {
    if rs.rank > 4 {
        return Err(WeylError::EnumerationBound { rank: rs.rank });
    }
    let index_of = |v: &Vector| -> u16 {
        rs.roots
            .binary_search(v)
            .expect("reflection stays inside the root system") as u16
    };
    let generators: Vec<RootPermutation> = rs
        .simple
        .iter()
        .map(|alpha| {
            rs.roots
                .iter()
                .map(|r| index_of(&reflect(r, alpha)))
                .collect()
        })
        .collect();
    let identity: RootPermutation = (0..rs.roots.len() as u16).collect();
    let mut seen: HashSet<RootPermutation> = HashSet::new();
    let mut elements: Vec<RootPermutation> = Vec::new();
    let mut queue: Vec<RootPermutation> = vec![identity.clone()];
    while let Some(perm) = queue.pop() {
        if !seen.insert(perm.clone()) {
            continue;
        }
        for generator in &generators {
            // generator after perm
            let composed: RootPermutation =
                perm.iter().map(|&i| generator[usize::from(i)]).collect();
            queue.push(composed);
        }
        elements.push(perm);
    }
    elements.sort();
    let identity = elements
        .binary_search(&identity)
        .expect("identity enumerated");
    let positive: HashSet<usize> = rs.positive.iter().copied().collect();
    let mut longest = None;
    for (i, perm) in elements.iter().enumerate() {
        let flips_all = rs
            .positive
            .iter()
            .all(|&p| !positive.contains(&usize::from(perm[p])));
        if flips_all {
            assert!(longest.is_none(), "two longest elements");
            longest = Some(i);
        }
    }
    Ok(WeylGroup {
        elements,
        identity,
        longest: longest.expect("longest element exists"),
    })
}

/// One hit of the scan: an element with `w(rho) = c rho`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RhoMultiple {
    pub element: usize,
    pub scalar: i64,
    pub is_identity: bool,
    pub is_longest: bool,
}

/// Scans the whole group for elements mapping the Weyl vector to a multiple
/// of itself. The scalar is asserted to be +1 or -1, with +1 only at the
/// identity: the machine check behind the axis constraint.
pub fn rho_multiple_scan(rs: &RootSystem, group: &WeylGroup) -> Vec<RhoMultiple> {
    let rho2 = rs.rho_doubled();
    let mut hits = Vec::new();
    for (index, perm) in group.elements().iter().enumerate() {
        let mut image = vec![0i64; rho2.len()];
        for &p in &rs.positive {
            let mapped = &rs.roots[usize::from(perm[p])];
            for (a, r) in image.iter_mut().zip(mapped.iter()) {
                *a += r;
            }
        }
        let scalar = if image == rho2 {
            Some(1)
        } else if image.iter().zip(rho2.iter()).all(|(a, b)| *a == -b) {
            Some(-1)
        } else {
            // any other parallel image would contradict regularity of rho
            let parallel = image
                .iter()
                .zip(rho2.iter())
                .all(|(a, b)| a * rho2[0] == b * image[0]);
            assert!(
                !parallel || image.iter().all(|v| *v == 0),
                "rho image parallel with scalar outside {{1, -1}}"
            );
            None
        };
        if let Some(scalar) = scalar {
            assert!(
                scalar != 1 || index == group.identity_index(),
                "rho fixed by a non-identity element"
            );
            hits.push(RhoMultiple {
                element: index,
                scalar,
                is_identity: index == group.identity_index(),
                is_longest: index == group.longest_index(),
            });
        }
    }
    hits
}

/// Verdict of the axis constraint for a spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisVerdict {
    /// `-conj(z)/z = -1`: the parameter is real.
    RealAxis,
    /// `-conj(z)/z = +1`: the parameter is purely imaginary.
    ImaginaryAxis,
    /// The required ratio is not a real unit, so no Weyl element can match
    /// the induced character with its Hermitian conjugate.
    Neither,
}

impl AxisVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisVerdict::RealAxis => "REAL_AXIS",
            AxisVerdict::ImaginaryAxis => "IMAGINARY_AXIS",
            AxisVerdict::Neither => "NONE",
        }
    }
}

/// Solves `w(rho) = (-conj(z)/z) rho` over the scan results: the ratio must
/// be +1 (purely imaginary `z`) or -1 (real `z`); everything off both axes
/// returns [`AxisVerdict::Neither`], certifying that the induced character
/// at `z` is not Hermitian.
pub fn hermitian_constraint(
    rs: &RootSystem,
    group: &WeylGroup,
    z: Complex64,
) -> Result<AxisVerdict, WeylError> {
    let modulus = z.norm();
    if modulus == 0.0 {
        return Err(WeylError::ZeroParameter);
    }
    let tol = 1e-12;
    let scan = rho_multiple_scan(rs, group);
    let has_minus = scan.iter().any(|hit| hit.scalar == -1);
    let has_plus = scan.iter().any(|hit| hit.scalar == 1);
    if z.im.abs() <= tol * modulus && has_minus {
        Ok(AxisVerdict::RealAxis)
    } else if z.re.abs() <= tol * modulus && has_plus {
        Ok(AxisVerdict::ImaginaryAxis)
    } else {
        Ok(AxisVerdict::Neither)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(t: RootSystemType, rank: usize) -> (RootSystem, WeylGroup) {
        let rs = build_root_system(t, rank).unwrap();
        let wg = weyl_group(&rs).unwrap();
        (rs, wg)
    }

    #[test]
    fn root_counts() {
        let cases = [
            (RootSystemType::A, 1, 2),
            (RootSystemType::A, 2, 6),
            (RootSystemType::A, 3, 12),
            (RootSystemType::B, 2, 8),
            (RootSystemType::B, 3, 18),
            (RootSystemType::C, 3, 18),
            (RootSystemType::D, 4, 24),
            (RootSystemType::G2, 2, 12),
        ];
        for (t, rank, count) in cases {
            assert_eq!(
                build_root_system(t, rank).unwrap().roots().len(),
                count,
                "{t:?}{rank}"
            );
        }
    }

    #[test]
    fn group_orders() {
        let cases = [
            (RootSystemType::A, 1, 2),
            (RootSystemType::A, 2, 6),
            (RootSystemType::A, 3, 24),
            (RootSystemType::B, 2, 8),
            (RootSystemType::B, 3, 48),
            (RootSystemType::C, 3, 48),
            (RootSystemType::D, 4, 192),
            (RootSystemType::G2, 2, 12),
        ];
        for (t, rank, order) in cases {
            let (_, wg) = build(t, rank);
            assert_eq!(wg.order(), order, "{t:?}{rank}");
        }
    }

    #[test]
    fn longest_element_involution_and_inversions() {
        for (t, rank) in [
            (RootSystemType::A, 2),
            (RootSystemType::B, 2),
            (RootSystemType::B, 3),
            (RootSystemType::D, 4),
            (RootSystemType::G2, 2),
        ] {
            let (rs, wg) = build(t, rank);
            let w = &wg.elements()[wg.longest_index()];
            // involution
            let square: RootPermutation = w.iter().map(|&i| w[usize::from(i)]).collect();
            let id: RootPermutation = (0..rs.roots().len() as u16).collect();
            assert_eq!(square, id);
            assert_eq!(wg.inversions(&rs, wg.longest_index()), rs.positive_count());
        }
    }

    #[test]
    fn b2_longest_is_minus_identity() {
        let (rs, wg) = build(RootSystemType::B, 2);
        let w = &wg.elements()[wg.longest_index()];
        for (i, root) in rs.roots().iter().enumerate() {
            let image = &rs.roots()[usize::from(w[i])];
            let negated: Vector = root.iter().map(|x| -x).collect();
            assert_eq!(*image, negated);
        }
    }

    #[test]
    fn rho_pairs_to_one_with_every_simple_coroot() {
        for (t, rank) in [
            (RootSystemType::A, 1),
            (RootSystemType::A, 2),
            (RootSystemType::A, 3),
            (RootSystemType::B, 2),
            (RootSystemType::B, 3),
            (RootSystemType::C, 3),
            (RootSystemType::D, 4),
            (RootSystemType::G2, 2),
        ] {
            let rs = build_root_system(t, rank).unwrap();
            for i in 0..rank {
                assert_eq!(rs.rho_simple_pairing(i), Rational64::from(1), "{t:?}{rank}");
            }
        }
    }

    #[test]
    fn a1_rho_is_half_the_root() {
        let rs = build_root_system(RootSystemType::A, 1).unwrap();
        assert_eq!(
            rs.rho(),
            vec![Rational64::new(1, 2), Rational64::new(-1, 2)]
        );
    }

    #[test]
    fn a2_rho_is_the_sum_of_the_simple_roots() {
        let rs = build_root_system(RootSystemType::A, 2).unwrap();
        let expected: Vec<Rational64> = rs.simple_roots()[0]
            .iter()
            .zip(rs.simple_roots()[1].iter())
            .map(|(a, b)| Rational64::from(a + b))
            .collect();
        assert_eq!(rs.rho(), expected);
    }

    #[test]
    fn scan_returns_identity_and_longest_only() {
        for (t, rank) in [
            (RootSystemType::A, 1),
            (RootSystemType::A, 2),
            (RootSystemType::A, 3),
            (RootSystemType::B, 2),
            (RootSystemType::B, 3),
            (RootSystemType::C, 3),
            (RootSystemType::D, 4),
            (RootSystemType::G2, 2),
        ] {
            let (rs, wg) = build(t, rank);
            let scan = rho_multiple_scan(&rs, &wg);
            assert_eq!(scan.len(), 2, "{t:?}{rank}");
            assert!(scan.iter().any(|hit| hit.scalar == 1 && hit.is_identity));
            assert!(scan.iter().any(|hit| hit.scalar == -1 && hit.is_longest));
        }
    }

    #[test]
    fn rho_orbit_is_free() {
        for (t, rank) in [
            (RootSystemType::A, 2),
            (RootSystemType::B, 2),
            (RootSystemType::G2, 2),
        ] {
            let (rs, wg) = build(t, rank);
            let mut orbit: HashSet<Vector> = HashSet::new();
            for perm in wg.elements() {
                let mut image = vec![0i64; rs.roots()[0].len()];
                for &p in &rs.positive {
                    let mapped = &rs.roots()[usize::from(perm[p])];
                    for (a, r) in image.iter_mut().zip(mapped.iter()) {
                        *a += r;
                    }
                }
                orbit.insert(image);
            }
            assert_eq!(orbit.len(), wg.order());
        }
    }

    #[test]
    fn axis_constraint_classifies() {
        let (rs, wg) = build(RootSystemType::A, 2);
        assert_eq!(
            hermitian_constraint(&rs, &wg, Complex64::new(0.3, 0.0)).unwrap(),
            AxisVerdict::RealAxis
        );
        assert_eq!(
            hermitian_constraint(&rs, &wg, Complex64::new(0.0, 0.5)).unwrap(),
            AxisVerdict::ImaginaryAxis
        );
        assert_eq!(
            hermitian_constraint(&rs, &wg, Complex64::new(0.25, 0.1)).unwrap(),
            AxisVerdict::Neither
        );
        assert_eq!(
            hermitian_constraint(&rs, &wg, Complex64::new(0.0, 0.0)),
            Err(WeylError::ZeroParameter)
        );
    }

    #[test]
    fn unsupported_inputs_are_rejected() {
        assert!(matches!(
            build_root_system(RootSystemType::G2, 3),
            Err(WeylError::UnsupportedType { .. })
        ));
        assert!(matches!(
            build_root_system(RootSystemType::A, 5),
            Err(WeylError::EnumerationBound { rank: 5 })
        ));
        assert!(matches!(
            build_root_system(RootSystemType::D, 2),
            Err(WeylError::UnsupportedType { .. })
        ));
    }
}
