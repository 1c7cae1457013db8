//! Deterministic families of small bundle data.

use geofix::bundle::{BundleData, FiberGenerator, FiberSpec};
use geofix::gset::{biset_iso_classes, BiSet};
use geofix::tomdieck::gset_iso_classes;
use geofix::{Caps, Group};

/// Every fiber choice of dimension `1..=fiber_max` over the orbit of `rep`:
/// one per isomorphism class of sets with an action of the isotropy group.
pub fn fiber_choices(base: &BiSet, rep: usize, fiber_max: usize, caps: &Caps) -> Vec<FiberSpec> {
    let (dp, comb) = base.combined(caps).unwrap();
    let (gamma, q) = (base.left_group(), base.right_group());
    let (sg, inc) = comb.stabilizer(rep).to_group();
    let mut out = Vec::new();
    for d in 1..=fiber_max {
        for c in gset_iso_classes(&sg, d, caps).unwrap().classes {
            let generators = sg
                .generators()
                .iter()
                .map(|&x| {
                    let comps = dp.components(inc.map[x]);
                    FiberGenerator {
                        gamma: gamma.element(comps[0]).clone(),
                        q: q.element(q.inv(comps[1])).clone(),
                        image: c.gset.perm(x).clone(),
                    }
                })
                .collect();
            out.push(FiberSpec { orbit_rep: rep, points: d, generators });
        }
    }
    out
}

/// Bundles over every base of size at most `base_max` (up to isomorphism),
/// with every combination of per-orbit fibers of dimension at most `fiber_max`.
pub fn bundle_family(gamma: &Group, q: &Group, base_max: usize, fiber_max: usize, caps: &Caps) -> Vec<BundleData> {
    let mut out = Vec::new();
    for base in biset_iso_classes(gamma, q, base_max, caps).unwrap() {
        if base.size() == 0 {
            continue;
        }
        let reps: Vec<usize> = base.orbits().iter().map(|o| o[0]).collect();
        let choices: Vec<Vec<FiberSpec>> = reps.iter().map(|&r| fiber_choices(&base, r, fiber_max, caps)).collect();
        let mut idx = vec![0usize; reps.len()];
        loop {
            let fibers: Vec<FiberSpec> = choices.iter().zip(&idx).map(|(c, &i)| c[i].clone()).collect();
            out.push(BundleData::from_orbit_fibers(&base, &fibers, caps).unwrap());
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}
