mod common;

use common::{acyc_suite, check_closure};
use geofix::acyc::{component_catalog, faithfulness_shadow, faithfulness_shadow_finite, finite_component_dims};
use geofix::acyc::{AcycData, CyclicRep};
use geofix::{Caps, Perm};
use proptest::prelude::*;

#[test]
fn suite_is_valid_and_member() {
    let caps = Caps::default();
    let suite = acyc_suite();
    assert_eq!(suite.len(), 10);
    assert_eq!(suite.iter().filter(|e| e.p == Some(2)).count(), 5);
    for e in &suite {
        assert!(e.data.validate(&caps).is_empty(), "{}: {:?}", e.name, e.data.validate(&caps));
        let m = e.data.in_d_acyc(&caps).unwrap();
        assert!(m.member, "{}: {:?}", e.name, m.reasons);
        if let Some(p) = e.p {
            assert!(e.data.in_d_acyc_p(p, &caps).unwrap().member, "{}", e.name);
        }
    }
}

#[test]
fn closure_under_two_step_words() {
    let caps = Caps::default();
    for e in acyc_suite() {
        let (checked, failures) = check_closure(&e, 2, &caps);
        assert!(checked > 0);
        assert!(failures.is_empty(), "{:?}", failures);
    }
}

#[test]
fn closed_form_components_match_finite_model() {
    let caps = Caps::default();
    for e in acyc_suite() {
        let cat = component_catalog(&e.data, &caps).unwrap();
        let finite = finite_component_dims(&e.data, &caps).unwrap();
        assert_eq!(cat.components.len(), finite.len(), "{}", e.name);
        for (c, f) in cat.components.iter().zip(&finite) {
            match f {
                Some(d) => assert_eq!(c.fiber_dim, *d, "{}", e.name),
                None => assert!(!c.nonempty, "{}", e.name),
            }
        }
    }
}

#[test]
fn members_pass_the_shadow() {
    let caps = Caps::default();
    for e in acyc_suite() {
        let r = faithfulness_shadow(&e.data, 3, &caps).unwrap();
        assert!(r.holds, "{}: {}", e.name, r.summary());
    }
}

#[test]
fn closure_under_three_step_words() {
    let caps = Caps::default();
    for e in acyc_suite() {
        let (checked, failures) = check_closure(&e, 3, &caps);
        assert_eq!(checked, if e.p.is_some() { 6 + 36 + 216 } else { 7 + 49 + 343 });
        assert!(failures.is_empty(), "{:?}", failures);
    }
}

#[test]
fn shadow_matches_finite_model_on_the_suite() {
    let caps = Caps::default();
    for e in acyc_suite() {
        let fast = faithfulness_shadow(&e.data, 3, &caps).unwrap();
        let finite = faithfulness_shadow_finite(&e.data, 3, &caps).unwrap();
        for (a, b) in fast.levels.iter().zip(&finite.levels) {
            assert_eq!((a.homs, a.components, a.faithful), (b.homs, b.components, b.faithful), "{} k={}", e.name, a.k);
        }
    }
}

fn block_perm(size: usize, seed: usize) -> Vec<usize> {
    // Fisher-Yates driven by the seed digits.
    let mut p: Vec<usize> = (0..size).collect();
    let mut s = seed;
    for i in (1..size).rev() {
        p.swap(i, s % (i + 1));
        s /= i + 1;
    }
    p
}

prop_compose! {
    fn small_data()(
        n in prop::sample::select(vec![1usize, 2, 3, 4, 6]),
        q0 in 0usize..3,
        qs in prop::collection::vec(1usize..3, 1..3),
        picks in prop::collection::vec((0usize..4, 1usize..3, 0usize..3, 0usize..3), 2),
        seeds in prop::collection::vec(0usize..1000, 1..3),
    ) -> AcycData {
        let r = qs.len();
        let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let mut q = vec![q0];
        q.extend(&qs);
        let (mut m, mut l, mut v) = (Vec::new(), Vec::new(), Vec::new());
        for &(li, f, scale, kind) in &picks[..r] {
            let li = divisors[li % divisors.len()];
            let mi = [li, n, 2 * n][scale] * f;
            l.push(li);
            m.push(mi);
            let o = mi / li;
            v.push(match kind {
                0 => CyclicRep::regular(o),
                1 => CyclicRep::trivial(o, 1),
                _ => CyclicRep::regular(o).direct_sum(&CyclicRep::trivial(o, 1)).unwrap(),
            });
        }
        let deg: usize = q.iter().sum();
        let q_generators = seeds
            .iter()
            .map(|&seed| {
                let mut img = Vec::with_capacity(deg);
                let mut off = 0;
                for (b, &size) in q.iter().enumerate() {
                    img.extend(block_perm(size, seed / (b + 1)).into_iter().map(|x| (x + off) as u32));
                    off += size;
                }
                Perm::from_images(img).unwrap()
            })
            .collect();
        AcycData { n, q, m, l, v, q_generators }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn shadow_matches_finite_model(d in small_data()) {
        let caps = Caps::default();
        prop_assume!(d.validate(&caps).is_empty());
        let fast = faithfulness_shadow(&d, 3, &caps).unwrap();
        let finite = faithfulness_shadow_finite(&d, 3, &caps).unwrap();
        for (a, b) in fast.levels.iter().zip(&finite.levels) {
            prop_assert_eq!((a.homs, a.components, a.faithful), (b.homs, b.components, b.faithful), "k={}", a.k);
        }
    }

    #[test]
    fn membership_matches_enumeration(d in small_data()) {
        let caps = Caps::default();
        prop_assume!(d.validate(&caps).is_empty());
        let qg = d.q_group(&caps).unwrap();
        let kernel = qg.elements().iter().skip(1).any(|g| (1..d.q.len()).all(|b| d.block_part(g, b).is_identity()));
        let semiregular = d.v.iter().all(|v| v.is_semiregular());
        prop_assert_eq!(d.in_d_acyc(&caps).unwrap().member, !kernel && semiregular);
        prop_assert_eq!(d.q_chain(&[]).order(), Some(qg.order() as u128));
    }
}
