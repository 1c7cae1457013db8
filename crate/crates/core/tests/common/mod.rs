//! Shared fixtures: the cyclic data suite and the closure operations applied to it.
#![allow(dead_code)]

pub mod bundles;

use geofix::acyc::{self, AcycData, CyclicRep};
use geofix::{Caps, Perm};

fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
    Perm::from_cycles(n, cycles).unwrap()
}

pub struct SuiteEntry {
    pub name: &'static str,
    pub data: AcycData,
    /// Prime for the p-local variant, when the tuple belongs to it.
    pub p: Option<usize>,
}

/// Ten tuples, the first five 2-local.
pub fn acyc_suite() -> Vec<SuiteEntry> {
    let reg = CyclicRep::regular;
    let e = |name, n, q: Vec<usize>, m: Vec<usize>, l: Vec<usize>, v: Vec<CyclicRep>, g: Vec<Perm>, p| SuiteEntry {
        name,
        data: AcycData { n, q, m, l, v, q_generators: g },
        p,
    };
    vec![
        e("standard", 2, vec![0, 2], vec![2], vec![1], vec![reg(2)], vec![cyc(2, &[&[0, 1]])], Some(2)),
        e("unit", 1, vec![0, 1], vec![1], vec![1], vec![CyclicRep::trivial(1, 1)], vec![], Some(2)),
        e("n4_l2", 4, vec![0, 2], vec![4], vec![2], vec![reg(2)], vec![cyc(2, &[&[0, 1]])], Some(2)),
        e("fixed_point", 2, vec![1, 2], vec![2], vec![1], vec![reg(2)], vec![cyc(3, &[&[1, 2]])], Some(2)),
        e("n8_m4", 8, vec![0, 2], vec![4], vec![2], vec![reg(2)], vec![cyc(2, &[&[0, 1]])], Some(2)),
        e("c3", 3, vec![0, 3], vec![3], vec![1], vec![reg(3)], vec![cyc(3, &[&[0, 1, 2]])], None),
        e(
            "n6_two_blocks",
            6,
            vec![0, 2, 3],
            vec![6, 3],
            vec![2, 1],
            vec![reg(3), reg(3)],
            vec![cyc(5, &[&[0, 1]]), cyc(5, &[&[2, 3, 4]])],
            None,
        ),
        e("n6_l3", 6, vec![0, 2], vec![6], vec![3], vec![reg(2)], vec![cyc(2, &[&[0, 1]])], None),
        e(
            "s3_block",
            3,
            vec![1, 3],
            vec![3],
            vec![1],
            vec![reg(3).direct_sum(&CyclicRep::trivial(3, 1)).unwrap()],
            vec![cyc(4, &[&[1, 2]]), cyc(4, &[&[1, 2, 3]])],
            None,
        ),
        e("n10_l5", 10, vec![0, 2], vec![10], vec![5], vec![reg(2)], vec![cyc(2, &[&[0, 1]])], None),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Stretch(usize),
    Phi(usize),
    Sym(usize),
    Free,
    SmashStandard,
    SmashUnit,
}

/// Operations that keep `p`-local data `p`-local (or all of them when `p` is `None`).
pub fn ops_for(p: Option<usize>) -> Vec<Op> {
    match p {
        Some(p) => vec![Op::Stretch(p), Op::Phi(p), Op::Sym(2), Op::Free, Op::SmashStandard, Op::SmashUnit],
        None => vec![
            Op::Stretch(2),
            Op::Stretch(3),
            Op::Phi(2),
            Op::Sym(2),
            Op::Free,
            Op::SmashStandard,
            Op::SmashUnit,
        ],
    }
}

/// Applies one operation; stretches also report whether the homomorphism
/// bijection held.
pub fn apply(op: Op, d: &AcycData, caps: &Caps) -> geofix::Result<(AcycData, Option<bool>)> {
    let suite = acyc_suite();
    Ok(match op {
        Op::Stretch(k) => {
            let r = acyc::stretch(d, k, caps)?;
            (r.data, Some(r.bijective && r.hom_count == r.hom_k_count))
        }
        Op::Phi(k) => (acyc::phi(d, k, caps)?.data, None),
        Op::Sym(k) => (acyc::sym(d, k, caps)?, None),
        Op::Free => (acyc::free_smash(d), None),
        Op::SmashStandard => (acyc::smash(d, &suite[0].data, caps)?, None),
        Op::SmashUnit => (acyc::smash(d, &suite[1].data, caps)?, None),
    })
}

/// All operation words of length 1..=max_len, in lexicographic order.
pub fn words(ops: &[Op], max_len: usize) -> Vec<Vec<Op>> {
    let mut out: Vec<Vec<Op>> = Vec::new();
    let mut layer: Vec<Vec<Op>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &o in ops {
                let mut w2 = w.clone();
                w2.push(o);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Debug)]
pub struct ClosureFailure {
    pub tuple: &'static str,
    pub word: Vec<Op>,
    pub reason: String,
}

/// Runs every word on one entry, checking membership after each step.
pub fn check_closure(entry: &SuiteEntry, max_len: usize, caps: &Caps) -> (usize, Vec<ClosureFailure>) {
    let ops = ops_for(entry.p);
    let mut failures = Vec::new();
    let mut checked = 0;
    for w in words(&ops, max_len) {
        checked += 1;
        let mut d = entry.data.clone();
        for (i, &op) in w.iter().enumerate() {
            let fail = |reason: String| ClosureFailure { tuple: entry.name, word: w[..=i].to_vec(), reason };
            match apply(op, &d, caps) {
                Err(e) => {
                    failures.push(fail(e.to_string()));
                    break;
                }
                Ok((next, bij)) => {
                    if bij == Some(false) {
                        failures.push(fail("stretch changed the homomorphism count".into()));
                        break;
                    }
                    let mem = match entry.p {
                        Some(p) => next.in_d_acyc_p(p, caps),
                        None => next.in_d_acyc(caps),
                    };
                    match mem {
                        Ok(m) if m.member => d = next,
                        Ok(m) => {
                            failures.push(fail(m.reasons.join("; ")));
                            break;
                        }
                        Err(e) => {
                            failures.push(fail(e.to_string()));
                            break;
                        }
                    }
                }
            }
        }
    }
    (checked, failures)
}
