use geofix::group::small_groups;
use geofix::gset::biset_iso_classes;
use geofix::linalg::rank_of;
use geofix::twisted::{brute_force_fixed_dim, decompose, fixed_basis, is_fixed_vector, twisted_fixed_dim};
use geofix::wreath::{enumerate_wreath_homs, Wreath};
use geofix::Caps;
use proptest::prelude::*;

fn caps() -> Caps {
    Caps { group_order: 64, ..Caps::default() }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn fast_dimension_matches_linear_algebra(
        li in 0usize..8, qi in 0usize..3, q in 1usize..4, si in 0usize..10_000, xi in 0usize..10_000, wi in 0usize..10_000,
    ) {
        let caps = caps();
        let (_, lam) = &small_groups(6)[li];
        let (_, qg) = &small_groups(3)[qi];
        let w = Wreath::new(q, qg);
        let homs = enumerate_wreath_homs(lam, &w, &caps).unwrap();
        let sigma = &homs[si % homs.len()];
        let xs = biset_iso_classes(lam, qg, 3, &caps).unwrap();
        let x = &xs[xi % xs.len()];

        let dim = twisted_fixed_dim(x, sigma).unwrap();
        prop_assert_eq!(dim, brute_force_fixed_dim(x, sigma, &caps).unwrap());

        let basis: Vec<Vec<i64>> = fixed_basis(x, sigma, &decompose(sigma).unwrap()).unwrap().into_iter().map(|v| v.vector).collect();
        prop_assert_eq!(basis.len(), dim);
        prop_assert!(basis.iter().all(|v| is_fixed_vector(x, sigma, v)));
        prop_assert_eq!(rank_of(&basis, q * x.size()), dim);

        // Conjugating σ inside the wreath product does not change the dimension.
        let elems = w.elements(&caps).unwrap();
        let conj = sigma.conjugate_by(&elems[wi % elems.len()]);
        prop_assert_eq!(twisted_fixed_dim(x, &conj).unwrap(), dim);
    }

    #[test]
    fn block_sums_add(li in 0usize..8, a in 0usize..10_000, b in 0usize..10_000, xi in 0usize..10_000) {
        let caps = caps();
        let (_, lam) = &small_groups(6)[li];
        let qg = &small_groups(2)[1].1;
        let h1 = enumerate_wreath_homs(lam, &Wreath::new(1, qg), &caps).unwrap();
        let h2 = enumerate_wreath_homs(lam, &Wreath::new(2, qg), &caps).unwrap();
        let (s1, s2) = (&h1[a % h1.len()], &h2[b % h2.len()]);
        let xs = biset_iso_classes(lam, qg, 3, &caps).unwrap();
        let x = &xs[xi % xs.len()];
        let sum = s1.block_sum(s2).unwrap();
        prop_assert_eq!(
            brute_force_fixed_dim(x, &sum, &caps).unwrap(),
            brute_force_fixed_dim(x, s1, &caps).unwrap() + brute_force_fixed_dim(x, s2, &caps).unwrap()
        );
    }
}

#[test]
fn trivial_hom_counts_orbits_once_per_coordinate() {
    let caps = caps();
    for (_, lam) in small_groups(6) {
        let qg = &small_groups(1)[0].1;
        for q in 1..=3 {
            let homs = enumerate_wreath_homs(&lam, &Wreath::new(q, qg), &caps).unwrap();
            let trivial = homs.iter().find(|h| h.s.iter().all(|p| p.is_identity())).unwrap();
            for x in biset_iso_classes(&lam, qg, 3, &caps).unwrap() {
                // Each coordinate contributes the Λ-orbits of X.
                assert_eq!(twisted_fixed_dim(&x, trivial).unwrap(), q * x.orbits().len());
            }
        }
    }
}
