//! A finite calculus of tree automorphisms.
//!
//! Two generating shapes are enough for every finite-depth computation:
//!
//! * a [`Portrait`] is a root-fixing automorphism given by a permutation of
//!   the children at each vertex inside a finite ball, identity below;
//! * a [`Transporter`] is the canonical automorphism carrying the root to a
//!   chosen target, built by relabelling addresses along the geodesic
//!   `[o, target]` with lowest-index tie-breaking.
//!
//! A [`GroupElement`] is a pair `g = t . k` (transporter after portrait).
//! Both factors act on every address, so elements apply, compose and invert
//! without any ball restriction; compositions are renormalised back to the
//! `t . k` shape by extracting the root-fixing part as a portrait.

use super::{SemiRegularTree, TreeError, VertexAddress};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;

/// One move away from a vertex: up to the parent or down into a child.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Parent,
    Child(u8),
}

/// Root-fixing automorphism of finite depth: a permutation of the children
/// of every vertex strictly above `depth`, identity elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Portrait {
    tree: SemiRegularTree,
    perms: BTreeMap<VertexAddress, Vec<u8>>,
    inverse_perms: BTreeMap<VertexAddress, Vec<u8>>,
    depth: usize,
}

impl Portrait {
    pub fn identity(tree: SemiRegularTree) -> Self {
        Portrait {
            tree,
            perms: BTreeMap::new(),
            inverse_perms: BTreeMap::new(),
            depth: 0,
        }
    }

    /// Validates every key against the tree and every value as a permutation
    /// of the children at that vertex. Identity permutations are dropped.
    pub fn new(
        tree: SemiRegularTree,
        perms: BTreeMap<VertexAddress, Vec<u8>>,
    ) -> Result<Self, TreeError> {
        let mut kept: BTreeMap<VertexAddress, Vec<u8>> = BTreeMap::new();
        for (vertex, perm) in perms {
            tree.validate_address(&vertex)?;
            let expected = tree.branching(vertex.depth());
            if perm.len() != expected as usize {
                return Err(TreeError::InvalidPermutation {
                    depth: vertex.depth(),
                    len: perm.len(),
                    expected,
                });
            }
            let mut seen = vec![false; perm.len()];
            for &image in &perm {
                if usize::from(image) >= perm.len() || seen[usize::from(image)] {
                    return Err(TreeError::InvalidPermutation {
                        depth: vertex.depth(),
                        len: perm.len(),
                        expected,
                    });
                }
                seen[usize::from(image)] = true;
            }
            if perm.iter().enumerate().any(|(i, &img)| i as u8 != img) {
                kept.insert(vertex, perm);
            }
        }
        let depth = kept.keys().map(|v| v.depth() + 1).max().unwrap_or(0);
        // Invert: the permutation of g^{-1} at the image vertex is the
        // inverse permutation. BTreeMap order visits prefixes first, so the
        // forward images of the keys are already well defined.
        let partial = Portrait {
            tree,
            perms: kept.clone(),
            inverse_perms: BTreeMap::new(),
            depth,
        };
        let mut inverse_perms = BTreeMap::new();
        for (vertex, perm) in &kept {
            let image_vertex = partial.apply(vertex);
            let mut inv = vec![0u8; perm.len()];
            for (i, &img) in perm.iter().enumerate() {
                inv[usize::from(img)] = i as u8;
            }
            inverse_perms.insert(image_vertex, inv);
        }
        Ok(Portrait {
            inverse_perms,
            ..partial
        })
    }

    /// Depth below which the portrait acts trivially.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_identity(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perms(&self) -> &BTreeMap<VertexAddress, Vec<u8>> {
        &self.perms
    }

    pub fn apply(&self, vertex: &VertexAddress) -> VertexAddress {
        self.apply_with(&self.perms, vertex)
    }

    pub fn apply_inverse(&self, vertex: &VertexAddress) -> VertexAddress {
        self.apply_with(&self.inverse_perms, vertex)
    }

    fn apply_with(
        &self,
        perms: &BTreeMap<VertexAddress, Vec<u8>>,
        vertex: &VertexAddress,
    ) -> VertexAddress {
        let mut image = Vec::with_capacity(vertex.depth());
        let mut prefix = VertexAddress::root();
        for &letter in vertex.letters() {
            let mapped = match perms.get(&prefix) {
                Some(perm) => perm[usize::from(letter)],
                None => letter,
            };
            image.push(mapped);
            prefix = prefix.child(letter);
        }
        VertexAddress::new(image)
    }
}

/// The canonical automorphism `t` with `t(o) = target`.
///
/// Walking down from the root, the children of each source vertex are
/// matched, in index order, with the free neighbours of the image vertex,
/// parent direction first. This reflects the standard ray back along the
/// geodesic `[target, o]` and copies addresses verbatim outside the ball of
/// radius `depth(target) + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transporter {
    tree: SemiRegularTree,
    target: VertexAddress,
}

impl Transporter {
    /// Fails on invalid addresses, and on odd-depth targets when `d1 != d2`
    /// (no type-preserving automorphism moves the root an odd distance).
    pub fn new(tree: SemiRegularTree, target: VertexAddress) -> Result<Self, TreeError> {
        tree.validate_address(&target)?;
        if tree.distance_step() == 2 && target.depth() % 2 == 1 {
            return Err(TreeError::OddDisplacement {
                depth: target.depth(),
            });
        }
        Ok(Transporter { tree, target })
    }

    pub fn trivial(tree: SemiRegularTree) -> Self {
        Transporter {
            tree,
            target: VertexAddress::root(),
        }
    }

    pub fn target(&self) -> &VertexAddress {
        &self.target
    }

    pub fn displacement(&self) -> usize {
        self.target.depth()
    }

    pub fn is_trivial(&self) -> bool {
        self.target.is_root()
    }

    /// The free neighbours of the image vertex `w`, parent first, children
    /// in index order, skipping the direction already used to enter `w`.
    fn assignment(&self, w: &VertexAddress, taken: Option<Step>) -> Vec<Step> {
        let mut order = Vec::with_capacity(self.tree.branching(w.depth()) as usize + 1);
        if !w.is_root() && taken != Some(Step::Parent) {
            order.push(Step::Parent);
        }
        for j in 0..self.tree.branching(w.depth()) {
            let step = Step::Child(j as u8);
            if taken != Some(step) {
                order.push(step);
            }
        }
        order
    }

    fn advance(w: &VertexAddress, step: Step) -> (VertexAddress, Step) {
        match step {
            // Entering the parent, the direction back down to w is taken.
            Step::Parent => {
                let last = *w.letters().last().expect("parent of the root");
                (w.parent().unwrap(), Step::Child(last))
            }
            Step::Child(j) => (w.child(j), Step::Parent),
        }
    }

    pub fn apply(&self, vertex: &VertexAddress) -> VertexAddress {
        let mut w = self.target.clone();
        let mut taken: Option<Step> = None;
        for &letter in vertex.letters() {
            let order = self.assignment(&w, taken);
            let (next, next_taken) = Self::advance(&w, order[usize::from(letter)]);
            w = next;
            taken = Some(next_taken);
        }
        w
    }

    /// Inverse image, found by walking the image side along the geodesic
    /// from the target to `vertex` and reading off the source letters.
    pub fn apply_inverse(&self, vertex: &VertexAddress) -> VertexAddress {
        let mut source = Vec::new();
        let mut w = self.target.clone();
        let mut taken: Option<Step> = None;
        while w != *vertex {
            let desired = if w.is_prefix_of(vertex) {
                Step::Child(vertex.letters()[w.depth()])
            } else {
                Step::Parent
            };
            debug_assert_ne!(Some(desired), taken, "image geodesic backtracked");
            let order = self.assignment(&w, taken);
            let letter = order
                .iter()
                .position(|&s| s == desired)
                .expect("desired step missing from assignment");
            source.push(letter as u8);
            let (next, next_taken) = Self::advance(&w, desired);
            w = next;
            taken = Some(next_taken);
        }
        VertexAddress::new(source)
    }
}

/// An automorphism `g = t . k`: a canonical transporter applied after a
/// root-fixing portrait. Every composition and inverse of such elements is
/// renormalised back to this shape, so the family is closed under the group
/// operations while staying finitely described.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    tree: SemiRegularTree,
    transporter: Transporter,
    portrait: Portrait,
}

impl GroupElement {
    pub fn identity(tree: SemiRegularTree) -> Self {
        GroupElement {
            tree,
            transporter: Transporter::trivial(tree),
            portrait: Portrait::identity(tree),
        }
    }

    pub fn from_portrait(portrait: Portrait) -> Self {
        GroupElement {
            tree: portrait.tree,
            transporter: Transporter::trivial(portrait.tree),
            portrait,
        }
    }

    pub fn from_transporter(transporter: Transporter) -> Self {
        GroupElement {
            tree: transporter.tree,
            portrait: Portrait::identity(transporter.tree),
            transporter,
        }
    }

    pub fn new(transporter: Transporter, portrait: Portrait) -> Result<Self, TreeError> {
        if transporter.tree != portrait.tree {
            return Err(TreeError::TreeMismatch);
        }
        Ok(GroupElement {
            tree: transporter.tree,
            transporter,
            portrait,
        })
    }

    /// The translation by `steps` along the standard ray: sends the vertex at
    /// depth `n` on the all-zeros ray to the one at depth `n + steps`, fixing
    /// the standard end. `steps` must be an admissible displacement.
    pub fn standard_translation(
        tree: SemiRegularTree,
        steps: usize,
    ) -> Result<Self, TreeError> {
        if steps == 0 {
            return Ok(GroupElement::identity(tree));
        }
        let transporter = Transporter::new(tree, VertexAddress::standard_ray(steps))?;
        // Swapping the first two root branches before the reflection turns
        // it into a translation along the zero ray.
        let mut root_perm: Vec<u8> = (0..tree.branching(0) as u8).collect();
        root_perm.swap(0, 1);
        let mut perms = BTreeMap::new();
        perms.insert(VertexAddress::root(), root_perm);
        let portrait = Portrait::new(tree, perms)?;
        Ok(GroupElement {
            tree,
            transporter,
            portrait,
        })
    }

    pub fn tree(&self) -> &SemiRegularTree {
        &self.tree
    }

    pub fn transporter(&self) -> &Transporter {
        &self.transporter
    }

    pub fn portrait(&self) -> &Portrait {
        &self.portrait
    }

    /// Distance `d(o, g o)`; even whenever `d1 != d2`.
    pub fn displacement(&self) -> usize {
        self.transporter.displacement()
    }

    pub fn is_identity(&self) -> bool {
        self.transporter.is_trivial() && self.portrait.is_identity()
    }

    /// Depth below which `g` copies addresses: `g(v . w) = g(v) . w` for
    /// every `v` at least this deep.
    pub fn active_depth(&self) -> usize {
        let transporter_active = if self.transporter.is_trivial() {
            0
        } else {
            self.transporter.displacement() + 1
        };
        self.portrait.depth().max(transporter_active)
    }

    pub fn apply(&self, vertex: &VertexAddress) -> VertexAddress {
        self.transporter.apply(&self.portrait.apply(vertex))
    }

    pub fn apply_inverse(&self, vertex: &VertexAddress) -> VertexAddress {
        self.portrait
            .apply_inverse(&self.transporter.apply_inverse(vertex))
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement, TreeError> {
        if self.tree != other.tree {
            return Err(TreeError::TreeMismatch);
        }
        let active = other
            .active_depth()
            .max(self.active_depth() + other.displacement());
        Self::canonicalize(self.tree, active, |v| self.apply(&other.apply(v)))
    }

    pub fn inverse(&self) -> GroupElement {
        let active = self.active_depth() + self.displacement();
        Self::canonicalize(self.tree, active, |v| self.apply_inverse(v))
            .expect("inverse shares the tree")
    }

    /// Renormalises an automorphism, given as a map that copies addresses
    /// below `active`, into transporter-portrait shape.
    fn canonicalize(
        tree: SemiRegularTree,
        active: usize,
        map: impl Fn(&VertexAddress) -> VertexAddress,
    ) -> Result<GroupElement, TreeError> {
        let target = map(&VertexAddress::root());
        let transporter = Transporter::new(tree, target.clone())?;
        let bound = (2 * target.depth() + 1).max(active + target.depth());
        let fixing = |v: &VertexAddress| transporter.apply_inverse(&map(v));
        let portrait = extract_portrait(tree, bound, fixing)?;
        Ok(GroupElement {
            tree,
            transporter,
            portrait,
        })
    }

    /// Level homomorphism of the stabiliser of the standard end: the signed
    /// half-shift along the all-zeros ray, `+1` for the translation by two
    /// steps towards the end. Errors if `g` moves the standard end.
    pub fn end_level(&self) -> Result<BigRational, TreeError> {
        let probe = self.active_depth() + self.displacement() + 2;
        let image = self.apply(&VertexAddress::standard_ray(probe));
        let deeper = self.apply(&VertexAddress::standard_ray(probe + 1));
        let on_ray = |v: &VertexAddress| v.letters().iter().all(|&l| l == 0);
        if !on_ray(&image) || !on_ray(&deeper) || deeper.depth() != image.depth() + 1 {
            return Err(TreeError::NotInEndStabilizer);
        }
        let shift = image.depth() as i64 - probe as i64;
        Ok(BigRational::new(BigInt::from(shift), BigInt::from(2)))
    }
}

/// Reads off the portrait of a root-fixing automorphism that copies
/// addresses below `bound`.
fn extract_portrait(
    tree: SemiRegularTree,
    bound: usize,
    map: impl Fn(&VertexAddress) -> VertexAddress,
) -> Result<Portrait, TreeError> {
    assert!(
        map(&VertexAddress::root()).is_root(),
        "portrait extraction needs a root-fixing map"
    );
    let mut perms = BTreeMap::new();
    let mut level: Vec<(VertexAddress, VertexAddress)> =
        vec![(VertexAddress::root(), VertexAddress::root())];
    for depth in 0..bound {
        let branching = tree.branching(depth);
        let mut next = Vec::with_capacity(level.len() * branching as usize);
        for (vertex, image) in &level {
            let mut perm = Vec::with_capacity(branching as usize);
            for letter in 0..branching as u8 {
                let child = vertex.child(letter);
                let child_image = map(&child);
                assert!(
                    image.is_prefix_of(&child_image)
                        && child_image.depth() == image.depth() + 1,
                    "map is not a tree automorphism at {child}"
                );
                perm.push(*child_image.letters().last().unwrap());
                next.push((child, child_image));
            }
            perms.insert(vertex.clone(), perm);
        }
        level = next;
    }
    Portrait::new(tree, perms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree_model::{cocycle_value, radon_nikodym, Cylinder};
    use num_traits::One;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn t33() -> SemiRegularTree {
        SemiRegularTree::new(3, 3).unwrap()
    }

    fn t23() -> SemiRegularTree {
        SemiRegularTree::new(2, 3).unwrap()
    }

    fn addr(letters: &[u8]) -> VertexAddress {
        VertexAddress::new(letters.to_vec())
    }

    pub(crate) fn random_portrait(
        tree: SemiRegularTree,
        depth: usize,
        rng: &mut StdRng,
    ) -> Portrait {
        let mut perms = BTreeMap::new();
        for level in 0..depth {
            for vertex in tree.addresses_at_depth(level) {
                let n = tree.branching(level) as usize;
                let mut perm: Vec<u8> = (0..n as u8).collect();
                for i in (1..n).rev() {
                    perm.swap(i, rng.gen_range(0..=i));
                }
                perms.insert(vertex, perm);
            }
        }
        Portrait::new(tree, perms).unwrap()
    }

    pub(crate) fn random_element(
        tree: SemiRegularTree,
        max_disp: usize,
        portrait_depth: usize,
        rng: &mut StdRng,
    ) -> GroupElement {
        let step = tree.distance_step();
        let choices: Vec<usize> = (0..=max_disp).step_by(step).collect();
        let disp = choices[rng.gen_range(0..choices.len())];
        let target = if disp == 0 {
            VertexAddress::root()
        } else {
            // random vertex at the chosen depth
            let verts = tree.addresses_at_depth(disp);
            verts[rng.gen_range(0..verts.len())].clone()
        };
        let transporter = Transporter::new(tree, target).unwrap();
        let portrait = random_portrait(tree, portrait_depth, rng);
        GroupElement::new(transporter, portrait).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let id = GroupElement::identity(t33());
        for v in t33().addresses_at_depth(3) {
            assert_eq!(id.apply(&v), v);
            assert_eq!(id.apply_inverse(&v), v);
        }
    }

    #[test]
    fn transporter_hits_target_and_preserves_distances() {
        for tree in [t33(), t23()] {
            for target in tree.addresses_at_depth(4) {
                let t = Transporter::new(tree, target.clone()).unwrap();
                assert_eq!(t.apply(&VertexAddress::root()), target);
                assert_eq!(t.displacement(), 4);
            }
        }
        // distance preservation on all pairs in the 3-ball
        let tree = t33();
        let t = Transporter::new(tree, addr(&[1, 0])).unwrap();
        let ball: Vec<VertexAddress> = (0..=3).flat_map(|d| tree.addresses_at_depth(d)).collect();
        for u in &ball {
            for v in &ball {
                assert_eq!(t.apply(u).distance(&t.apply(v)), u.distance(v));
            }
        }
    }

    #[test]
    fn transporter_inverse_round_trips() {
        let tree = t33();
        for target in tree.addresses_at_depth(3) {
            let t = Transporter::new(tree, target).unwrap();
            for v in (0..=4).flat_map(|d| tree.addresses_at_depth(d)) {
                assert_eq!(t.apply_inverse(&t.apply(&v)), v);
                assert_eq!(t.apply(&t.apply_inverse(&v)), v);
            }
        }
    }

    #[test]
    fn odd_targets_rejected_on_bipartite_trees() {
        assert!(matches!(
            Transporter::new(t23(), addr(&[0])),
            Err(TreeError::OddDisplacement { depth: 1 })
        ));
        assert!(Transporter::new(t33(), addr(&[0])).is_ok());
    }

    #[test]
    fn portrait_preserves_distances_on_four_ball() {
        let tree = t33();
        let mut rng = StdRng::seed_from_u64(7);
        let k = random_portrait(tree, 3, &mut rng);
        let ball: Vec<VertexAddress> = (0..=4).flat_map(|d| tree.addresses_at_depth(d)).collect();
        for u in &ball {
            for v in &ball {
                assert_eq!(k.apply(u).distance(&k.apply(v)), u.distance(v));
            }
        }
    }

    #[test]
    fn composition_matches_pointwise_action() {
        let mut rng = StdRng::seed_from_u64(11);
        for tree in [t33(), t23()] {
            for _ in 0..20 {
                let g = random_element(tree, 2, 2, &mut rng);
                let h = random_element(tree, 2, 2, &mut rng);
                let gh = g.compose(&h).unwrap();
                for v in (0..=5).flat_map(|d| tree.addresses_at_depth(d)) {
                    assert_eq!(gh.apply(&v), g.apply(&h.apply(&v)));
                }
            }
        }
    }

    #[test]
    fn inverse_matches_pointwise_action() {
        let mut rng = StdRng::seed_from_u64(13);
        for tree in [t33(), t23()] {
            for _ in 0..20 {
                let g = random_element(tree, 2, 2, &mut rng);
                let ginv = g.inverse();
                for v in (0..=5).flat_map(|d| tree.addresses_at_depth(d)) {
                    assert_eq!(ginv.apply(&g.apply(&v)), v);
                    assert_eq!(g.apply(&ginv.apply(&v)), v);
                    assert_eq!(ginv.apply(&v), g.apply_inverse(&v));
                }
            }
        }
    }

    #[test]
    fn displacement_even_on_bipartite_trees() {
        let mut rng = StdRng::seed_from_u64(17);
        let tree = t23();
        for _ in 0..30 {
            let g = random_element(tree, 4, 2, &mut rng);
            let h = random_element(tree, 2, 2, &mut rng);
            let gh = g.compose(&h).unwrap();
            assert_eq!(gh.displacement() % 2, 0);
            assert_eq!(gh.inverse().displacement() % 2, 0);
        }
    }

    #[test]
    fn standard_translation_shifts_the_zero_ray() {
        for (tree, steps) in [(t33(), 1), (t33(), 2), (t23(), 2)] {
            let tau = GroupElement::standard_translation(tree, steps).unwrap();
            for m in 0..6 {
                assert_eq!(
                    tau.apply(&VertexAddress::standard_ray(m)),
                    VertexAddress::standard_ray(m + steps)
                );
            }
        }
    }

    #[test]
    fn end_level_of_translation() {
        let tau2 = GroupElement::standard_translation(t33(), 2).unwrap();
        assert!(tau2.end_level().unwrap().is_one());
        let back = tau2.inverse();
        assert_eq!(
            back.end_level().unwrap(),
            -BigRational::new(BigInt::from(1), BigInt::from(1))
        );
        let id = GroupElement::identity(t33());
        assert_eq!(id.end_level().unwrap(), BigRational::from(BigInt::from(0)));
    }

    #[test]
    fn end_level_rejects_end_movers() {
        // the reflection swaps the standard end with another one
        let t = GroupElement::from_transporter(
            Transporter::new(t33(), addr(&[0, 0])).unwrap(),
        );
        assert_eq!(t.end_level(), Err(TreeError::NotInEndStabilizer));
    }

    #[test]
    fn radon_nikodym_identity_is_one() {
        let tree = t33();
        let id = GroupElement::identity(tree);
        for base in tree.addresses_at_depth(3) {
            let c = Cylinder::new(&tree, base).unwrap();
            assert!(radon_nikodym(&tree, &id, &c).unwrap().is_one());
        }
    }

    #[test]
    fn radon_nikodym_translation_values() {
        // translation by two towards the standard end: derivative 4 on the
        // cylinder containing the end, 1/4 in the opposite direction
        let tree = t33();
        let tau2 = GroupElement::standard_translation(tree, 2).unwrap();
        let along = Cylinder::new(&tree, VertexAddress::standard_ray(4)).unwrap();
        assert_eq!(
            radon_nikodym(&tree, &tau2, &along).unwrap(),
            BigRational::from(BigInt::from(4))
        );
        let opposite = Cylinder::new(&tree, addr(&[1, 0, 0, 0])).unwrap();
        assert_eq!(
            radon_nikodym(&tree, &tau2, &opposite).unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
    }

    #[test]
    fn radon_nikodym_depth_precondition() {
        let tree = t33();
        let tau2 = GroupElement::standard_translation(tree, 2).unwrap();
        let shallow = Cylinder::new(&tree, addr(&[0, 0])).unwrap();
        assert!(matches!(
            radon_nikodym(&tree, &tau2, &shallow),
            Err(TreeError::DepthTooShallow { .. })
        ));
    }

    #[test]
    fn pushforward_total_mass_is_one() {
        let mut rng = StdRng::seed_from_u64(19);
        for tree in [t33(), t23()] {
            for _ in 0..5 {
                let g = random_element(tree, 2, 2, &mut rng);
                let depth = g.displacement() + 1;
                let total: BigRational = tree
                    .addresses_at_depth(depth)
                    .into_iter()
                    .map(|base| {
                        let c = Cylinder::new(&tree, base).unwrap();
                        radon_nikodym(&tree, &g, &c).unwrap() * tree.cylinder_measure(&c)
                    })
                    .sum();
                assert!(total.is_one());
            }
        }
    }

    #[test]
    fn portraits_fix_the_measure() {
        let tree = t33();
        let mut rng = StdRng::seed_from_u64(23);
        let k = GroupElement::from_portrait(random_portrait(tree, 3, &mut rng));
        for base in tree.addresses_at_depth(4) {
            assert!(cocycle_value(&tree, &k, &base).unwrap().is_one());
        }
    }

    #[test]
    fn cocycle_identity_exact() {
        let mut rng = StdRng::seed_from_u64(29);
        for tree in [t33(), t23()] {
            for _ in 0..25 {
                let g = random_element(tree, 2, 2, &mut rng);
                let h = random_element(tree, 2, 2, &mut rng);
                let gh = g.compose(&h).unwrap();
                let depth = g.displacement() + h.displacement() + 1;
                for prefix in tree.addresses_at_depth(depth) {
                    let lhs = cocycle_value(&tree, &gh, &prefix).unwrap();
                    let rhs = cocycle_value(&tree, &g, &prefix).unwrap()
                        * cocycle_value(&tree, &h, &g.apply_inverse(&prefix)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
