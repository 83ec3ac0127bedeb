//! Property tests of the structural invariants.

use num_complex::Complex64;
use num_traits::One;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;
use treeharmonic::radial_hecke::{convolve, RadialFunction};
use treeharmonic::spherical::{eval_boundary_integral, SpectralParameter};
use treeharmonic::tree_model::{
    cocycle_value, Cylinder, GroupElement, Portrait, SemiRegularTree, Transporter,
};
use treeharmonic::BigRational;

fn tree_strategy() -> impl Strategy<Value = SemiRegularTree> {
    (2u32..=4, 3u32..=5).prop_map(|(d1, d2)| SemiRegularTree::new(d1, d2).unwrap())
}

fn seeded_element(tree: SemiRegularTree, max_disp: usize, seed: u64) -> GroupElement {
    let mut rng = StdRng::seed_from_u64(seed);
    let step = tree.distance_step();
    let choices: Vec<usize> = (0..=max_disp).step_by(step).collect();
    let disp = choices[rng.gen_range(0..choices.len())];
    let sphere = tree.addresses_at_depth(disp);
    let target = sphere[rng.gen_range(0..sphere.len())].clone();
    let mut perms = BTreeMap::new();
    for level in 0..2 {
        for vertex in tree.addresses_at_depth(level) {
            let n = tree.branching(level) as usize;
            let mut perm: Vec<u8> = (0..n as u8).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            perms.insert(vertex, perm);
        }
    }
    GroupElement::new(
        Transporter::new(tree, target).unwrap(),
        Portrait::new(tree, perms).unwrap(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cylinder_partition_sums_to_one(tree in tree_strategy(), depth in 0usize..=5) {
        let total: BigRational = tree
            .addresses_at_depth(depth)
            .into_iter()
            .map(|a| tree.cylinder_measure(&Cylinder::new(&tree, a).unwrap()))
            .sum();
        prop_assert!(total.is_one());
    }

    #[test]
    fn cocycle_identity_on_random_pairs(tree in tree_strategy(), seed in 0u64..1_000_000) {
        let g = seeded_element(tree, 2, seed);
        let h = seeded_element(tree, 2, seed.wrapping_add(1));
        let gh = g.compose(&h).unwrap();
        let depth = g.displacement() + h.displacement() + 1;
        for prefix in tree.addresses_at_depth(depth) {
            let lhs = cocycle_value(&tree, &gh, &prefix).unwrap();
            let rhs = cocycle_value(&tree, &g, &prefix).unwrap()
                * cocycle_value(&tree, &h, &g.apply_inverse(&prefix)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pushforward_keeps_total_mass(tree in tree_strategy(), seed in 0u64..1_000_000) {
        let g = seeded_element(tree, 2, seed);
        let depth = g.displacement() + 1;
        let total: BigRational = tree
            .addresses_at_depth(depth)
            .into_iter()
            .map(|base| {
                let c = Cylinder::new(&tree, base).unwrap();
                treeharmonic::tree_model::radon_nikodym(&tree, &g, &c).unwrap()
                    * tree.cylinder_measure(&c)
            })
            .sum();
        prop_assert!(total.is_one());
    }

    #[test]
    fn spherical_normalisation_and_bound(
        tree in tree_strategy(),
        re in 0.05f64..0.95,
        im in -3.0f64..3.0,
    ) {
        let param = SpectralParameter::new(tree, Complex64::new(re, im));
        prop_assert_eq!(eval_boundary_integral(&param, 0).unwrap(), Complex64::new(1.0, 0.0));
        let step = tree.distance_step();
        for n in (0..=12).step_by(step) {
            let value = eval_boundary_integral(&param, n).unwrap();
            prop_assert!(value.norm() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn convolution_commutes(
        tree in tree_strategy(),
        seed in 0u64..1_000_000,
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let step = tree.distance_step();
        let draw = |rng: &mut StdRng| {
            let pairs: Vec<(usize, Complex64)> = (0..=4)
                .step_by(step)
                .map(|n| (n, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
                .collect();
            RadialFunction::from_coeffs(tree, pairs).unwrap()
        };
        let f = draw(&mut rng);
        let g = draw(&mut rng);
        let fg = convolve(&f, &g).unwrap();
        let gf = convolve(&g, &f).unwrap();
        for k in 0..=8 {
            prop_assert!((fg.coeff(k) - gf.coeff(k)).norm() < 1e-11);
        }
    }
}
