mod common;

use common::bundles::bundle_family;
use geofix::bundle::{iterphi_bundle_iso, BundleData};
use geofix::group::{enumerate_subgroups, named, subgroup_classes};
use geofix::Caps;

fn family(g: &str, q: &str) -> Vec<BundleData> {
    bundle_family(&named(g).unwrap(), &named(q).unwrap(), 2, 2, &Caps::default())
}

#[test]
fn specs_round_trip() {
    let caps = Caps::default();
    for b in family("S3", "C2") {
        let spec = b.spec(&caps).unwrap();
        let back = BundleData::from_spec(b.gamma(), b.q(), &spec, &caps).unwrap();
        assert_eq!(back.spec(&caps).unwrap(), spec);
        assert_eq!(back.fiber_dims(), b.fiber_dims());
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<geofix::bundle::BundleSpec>(&text).unwrap(), spec);
    }
}

#[test]
fn product_fibers_add() {
    let caps = Caps::default();
    let bs = family("C4", "C2");
    for a in bs.iter().step_by(3) {
        for b in bs.iter().step_by(5) {
            let (p, _) = a.product(b, &caps).unwrap();
            assert_eq!(p.base().size(), a.base().size() * b.base().size());
            let mut got = p.fiber_dims();
            let mut want: Vec<usize> =
                a.fiber_dims().iter().flat_map(|&x| b.fiber_dims().into_iter().map(move |y| x + y)).collect();
            got.sort_unstable();
            want.sort_unstable();
            assert_eq!(got, want);
            assert_eq!(p.q().order(), a.q().order() * b.q().order());
            assert_eq!(p.is_q_faithful().faithful, a.is_q_faithful().faithful && b.is_q_faithful().faithful);
        }
    }
}

#[test]
fn first_symmetric_power_is_the_bundle() {
    let caps = Caps::default();
    for b in family("C6", "C2") {
        let s = b.sym_power(1, None, &caps).unwrap().bundle;
        assert_eq!(s.base().size(), b.base().size());
        let (mut x, mut y) = (s.fiber_dims(), b.fiber_dims());
        x.sort_unstable();
        y.sort_unstable();
        assert_eq!(x, y);
    }
}

#[test]
fn criterion_implies_brute_force_on_small_groups() {
    let caps = Caps::default();
    let mut positive = 0;
    for g in ["C2", "C3", "C4", "V4"] {
        let gamma = named(g).unwrap();
        for cls in subgroup_classes(&gamma, &caps).unwrap() {
            for b in family(g, "C2") {
                if b.ifcrit_check(&cls[0], &caps).unwrap().holds {
                    positive += 1;
                    assert!(b.inheritably_faithful_bruteforce(&cls[0], 2, &caps).unwrap().iter().all(|&x| x));
                }
            }
        }
    }
    assert!(positive > 0);
}

#[test]
fn trivial_chain_compares_components_over_shared_fibers() {
    // Distinct components of η(M) can sit over the same points of E.
    let caps = Caps::default();
    let gamma = named("D4").unwrap();
    let subs = enumerate_subgroups(&gamma, &caps).unwrap();
    let one = subs.iter().find(|s| s.order() == 1).unwrap();
    for b in family("D4", "C2").iter().filter(|b| b.is_q_faithful().faithful) {
        for m in subs.iter().filter(|s| s.is_normal()) {
            let r = iterphi_bundle_iso(b, one, one, m, &caps).unwrap();
            assert!(r.is_isomorphism, "{r:?}");
            assert_eq!(r.lhs_fiber_dims, r.rhs_fiber_dims);
        }
    }
}
