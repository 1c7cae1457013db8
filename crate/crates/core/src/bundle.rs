//! Equivariant permutation-representation bundles over finite bases.
//!
//! A bundle is an equivariant map `E -> B` of finite `(Γ, Q)` bi-sets; the
//! fiber over `b` is the span of the points of `E` lying over it. Fixed-point
//! constructions replace fibers by twisted fixed subspaces, whose orbit-sum
//! bases are again permuted by the actions, so every construction stays in
//! this form.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Caps, Error, Result};
use crate::group::{enumerate_homs, ensure_same, enumerate_subgroups, same_group, DirectProduct, Group, GroupHom, Subgroup};
use crate::gset::{BiSet, GSet};
use crate::perm::Perm;
use crate::wreath::{Wreath, WreathElem};

#[derive(Clone, Debug)]
pub struct BundleData {
    base: BiSet,
    total: BiSet,
    proj: Vec<usize>,
    /// Start of each base point's fiber in `total` (points sorted by base).
    offsets: Vec<usize>,
}

impl PartialEq for BundleData {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.total == other.total && self.proj == other.proj
    }
}

/// Isotropy generator `(γ, s)` with `γ·b·s = b`, acting on the fiber by `e -> γ·e·s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberGenerator {
    pub gamma: Perm,
    pub q: Perm,
    pub image: Perm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberSpec {
    pub orbit_rep: usize,
    pub points: usize,
    pub generators: Vec<FiberGenerator>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSpec {
    pub base: crate::gset::BiSetSpec,
    pub fibers: Vec<FiberSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaithfulnessReport {
    pub faithful: bool,
    /// Base point and isotropy element acting trivially on its fiber.
    pub witness: Option<(usize, usize)>,
}

impl BundleData {
    /// Validates equivariance of the projection.
    pub fn new(base: BiSet, total: BiSet, proj: Vec<usize>) -> Result<BundleData> {
        ensure_same(base.left_group(), total.left_group(), "base and total space (Γ)")?;
        ensure_same(base.right_group(), total.right_group(), "base and total space (Q)")?;
        if proj.len() != total.size() || proj.iter().any(|&b| b >= base.size()) {
            return Err(Error::InvalidInput("projection has wrong shape".into()));
        }
        for &g in base.left_group().generators() {
            for e in 0..total.size() {
                if proj[total.act_left(g, e)] != base.act_left(g, proj[e]) {
                    return Err(Error::InvalidInput("projection is not Γ-equivariant".into()));
                }
            }
        }
        for &s in base.right_group().generators() {
            for e in 0..total.size() {
                if proj[total.act_right(e, s)] != base.act_right(proj[e], s) {
                    return Err(Error::InvalidInput("projection is not Q-equivariant".into()));
                }
            }
        }
        // Sort total points by base point so fibers are contiguous.
        let mut order: Vec<usize> = (0..total.size()).collect();
        order.sort_by_key(|&e| (proj[e], e));
        let mut relabel = vec![0u32; total.size()];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new as u32;
        }
        let relabel = Perm::from_images_unchecked(relabel);
        let total = relabel_biset(&total, &relabel);
        let proj: Vec<usize> = order.iter().map(|&old| proj[old]).collect();
        let mut offsets = vec![0usize; base.size() + 1];
        for &b in &proj {
            offsets[b + 1] += 1;
        }
        for b in 0..base.size() {
            offsets[b + 1] += offsets[b];
        }
        Ok(BundleData { base, total, proj, offsets })
    }

    /// Point base with the given fiber.
    pub fn over_point(fiber: &BiSet) -> BundleData {
        let base = BiSet::from_gset(&GSet::trivial(fiber.left_group(), 1), fiber.right_group());
        BundleData::new(base, fiber.clone(), vec![0; fiber.size()]).expect("point base is equivariant")
    }

    /// Induces the total space from a fiber over one point of each orbit of
    /// `Γ × Q^op` on the base.
    pub fn from_orbit_fibers(base: &BiSet, fibers: &[FiberSpec], caps: &Caps) -> Result<BundleData> {
        let (dp, comb) = base.combined(caps)?;
        let gamma = base.left_group();
        let q = base.right_group();
        let orbits = comb.orbits();
        let mut orbit_fiber: Vec<Option<(usize, GSet, GroupHom)>> = vec![None; orbits.len()];
        for f in fibers {
            let o = orbits
                .iter()
                .position(|o| o.binary_search(&f.orbit_rep).is_ok())
                .ok_or_else(|| Error::InvalidInput(format!("orbit_rep {} out of range", f.orbit_rep)))?;
            if orbit_fiber[o].is_some() {
                return Err(Error::InvalidInput("two fibers given for one orbit".into()));
            }
            let stab = comb.stabilizer(f.orbit_rep);
            let (lg, inc) = stab.to_group();
            let mut gens = Vec::new();
            let mut perms = Vec::new();
            for g in &f.generators {
                let gi = gamma
                    .index_of(&g.gamma)
                    .ok_or_else(|| Error::InvalidInput("fiber generator: γ not in Γ".into()))?;
                let si = q
                    .index_of(&g.q)
                    .ok_or_else(|| Error::InvalidInput("fiber generator: s not in Q".into()))?;
                let e = dp.element_of(&[gi, q.inv(si)]);
                let li = inc
                    .map
                    .binary_search(&e)
                    .map_err(|_| Error::InvalidInput("fiber generator does not fix the orbit rep".into()))?;
                gens.push(li);
                perms.push(g.image.clone());
            }
            let fg = GSet::from_generator_images(&lg, f.points, &gens, &perms)?;
            orbit_fiber[o] = Some((f.orbit_rep, fg, inc));
        }
        let mut fiber_of_point: Vec<(usize, usize)> = vec![(0, 0); base.size()];
        let mut transporter = vec![0usize; base.size()];
        for (o, orb) in orbits.iter().enumerate() {
            let (rep, fg, _) = orbit_fiber[o]
                .as_ref()
                .ok_or_else(|| Error::InvalidInput(format!("no fiber for orbit of point {}", orb[0])))?;
            for &b in orb {
                fiber_of_point[b] = (o, fg.size());
                transporter[b] = (0..dp.group.order()).find(|&g| comb.act(g, *rep) == b).unwrap();
            }
        }
        let mut offsets = vec![0usize; base.size() + 1];
        for b in 0..base.size() {
            offsets[b + 1] = offsets[b] + fiber_of_point[b].1;
        }
        let n = offsets[base.size()];
        let g = &dp.group;
        let act = |e: usize| -> Perm {
            let mut img = vec![0u32; n];
            for b in 0..base.size() {
                let (o, k) = fiber_of_point[b];
                let (_, fg, inc) = orbit_fiber[o].as_ref().unwrap();
                let b2 = comb.act(e, b);
                let l = g.mul(g.inv(transporter[b2]), g.mul(e, transporter[b]));
                let li = inc.map.binary_search(&l).expect("transported element fixes the rep");
                for f in 0..k {
                    img[offsets[b] + f] = (offsets[b2] + fg.act(li, f)) as u32;
                }
            }
            Perm::from_images_unchecked(img)
        };
        let lgens: Vec<Perm> = gamma.generators().iter().map(|&x| act(dp.element_of(&[x, 0]))).collect();
        let rgens: Vec<Perm> = q
            .generators()
            .iter()
            .map(|&s| act(dp.element_of(&[0, q.inv(s)])))
            .collect();
        let total = BiSet::new(gamma, q, n, &lgens, &rgens)?;
        let proj = (0..base.size()).flat_map(|b| std::iter::repeat_n(b, offsets[b + 1] - offsets[b])).collect();
        BundleData::new(base.clone(), total, proj)
    }

    pub fn from_spec(gamma: &Group, q: &Group, spec: &BundleSpec, caps: &Caps) -> Result<BundleData> {
        let base = BiSet::from_spec(gamma, q, &spec.base)?;
        BundleData::from_orbit_fibers(&base, &spec.fibers, caps)
    }

    /// Canonical wire form: smallest point of each orbit, canonical isotropy generators.
    pub fn spec(&self, caps: &Caps) -> Result<BundleSpec> {
        let (dp, comb) = self.base.combined(caps)?;
        let q = self.q();
        let mut fibers = Vec::new();
        for orb in comb.orbits() {
            let b = orb[0];
            let (lg, inc) = comb.stabilizer(b).to_group();
            let fiber = self.fiber(b);
            let mut generators = Vec::new();
            for &lgen in lg.generators() {
                let e = inc.map[lgen];
                let c = dp.components(e);
                let (gi, si) = (c[0], q.inv(c[1]));
                let image = Perm::from_images_unchecked(
                    fiber
                        .clone()
                        .map(|p| (self.total.act_right(self.total.act_left(gi, p), si) - fiber.start) as u32)
                        .collect(),
                );
                generators.push(FiberGenerator {
                    gamma: self.gamma().element(gi).clone(),
                    q: q.element(si).clone(),
                    image,
                });
            }
            fibers.push(FiberSpec { orbit_rep: b, points: fiber.len(), generators });
        }
        Ok(BundleSpec { base: self.base.spec(), fibers })
    }

    pub fn gamma(&self) -> &Group {
        self.base.left_group()
    }

    pub fn q(&self) -> &Group {
        self.base.right_group()
    }

    pub fn base(&self) -> &BiSet {
        &self.base
    }

    pub fn total(&self) -> &BiSet {
        &self.total
    }

    pub fn projection(&self) -> &[usize] {
        &self.proj
    }

    pub fn fiber(&self, b: usize) -> std::ops::Range<usize> {
        self.offsets[b]..self.offsets[b + 1]
    }

    pub fn fiber_dim(&self, b: usize) -> usize {
        self.offsets[b + 1] - self.offsets[b]
    }

    pub fn fiber_dims(&self) -> Vec<usize> {
        (0..self.base.size()).map(|b| self.fiber_dim(b)).collect()
    }

    /// Every isotropy group `Q_b` acts faithfully on the fiber over `b`.
    pub fn is_q_faithful(&self) -> FaithfulnessReport {
        let q = self.q();
        for b in 0..self.base.size() {
            for s in 1..q.order() {
                if self.base.act_right(b, s) != b {
                    continue;
                }
                if self.fiber(b).all(|e| self.total.act_right(e, s) == e) {
                    return FaithfulnessReport { faithful: false, witness: Some((b, s)) };
                }
            }
        }
        FaithfulnessReport { faithful: true, witness: None }
    }

    /// Sub-bundle over a stable set of base points.
    pub fn restrict_base(&self, points: &[usize]) -> Result<(BundleData, Vec<usize>)> {
        let (base, pts) = self.base.restrict_points(points)?;
        let tot: Vec<usize> = pts.iter().flat_map(|&b| self.fiber(b)).collect();
        let (total, _) = self.total.restrict_points(&tot)?;
        let pos: HashMap<usize, usize> = pts.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let proj = tot.iter().map(|&e| pos[&self.proj[e]]).collect();
        Ok((BundleData::new(base, total, proj)?, pts))
    }

    /// Pullback along homomorphisms into `Γ` and `Q`.
    pub fn restrict_groups(&self, gamma: &GroupHom, q: &GroupHom) -> Result<BundleData> {
        BundleData::new(self.base.restrict(gamma, q)?, self.total.restrict(gamma, q)?, self.proj.clone())
    }

    /// Product over `B × B'` with fiber `E_b ⊕ E'_{b'}` and quotient group `Q × Q'`.
    pub fn product(&self, other: &BundleData, caps: &Caps) -> Result<(BundleData, DirectProduct)> {
        ensure_same(self.gamma(), other.gamma(), "product of bundles")?;
        let gamma = self.gamma();
        let dp = DirectProduct::new(&[self.q().clone(), other.q().clone()], caps.materialize)?;
        let (nb, nb2) = (self.base.size(), other.base.size());
        let size = nb * nb2;
        let tot1 = self.total.size() * nb2;
        let ntot = tot1 + nb * other.total.size();
        let base_idx = |b: usize, b2: usize| b * nb2 + b2;
        // Points (e, b') first, then (b, e').
        let tot_a = |e: usize, b2: usize| e * nb2 + b2;
        let tot_b = |b: usize, e2: usize| tot1 + b * other.total.size() + e2;
        let mk = |fb: &dyn Fn(usize, usize) -> (usize, usize), fe: &dyn Fn(usize) -> usize, fe2: &dyn Fn(usize) -> usize| {
            let mut bimg = vec![0u32; size];
            let mut timg = vec![0u32; ntot];
            for b in 0..nb {
                for b2 in 0..nb2 {
                    let (x, y) = fb(b, b2);
                    bimg[base_idx(b, b2)] = base_idx(x, y) as u32;
                }
            }
            for e in 0..self.total.size() {
                for b2 in 0..nb2 {
                    let (_, y) = fb(self.proj[e], b2);
                    timg[tot_a(e, b2)] = tot_a(fe(e), y) as u32;
                }
            }
            for b in 0..nb {
                for e2 in 0..other.total.size() {
                    let (x, _) = fb(b, other.proj[e2]);
                    timg[tot_b(b, e2)] = tot_b(x, fe2(e2)) as u32;
                }
            }
            (Perm::from_images_unchecked(bimg), Perm::from_images_unchecked(timg))
        };
        let mut lb = Vec::new();
        let mut lt = Vec::new();
        for &g in gamma.generators() {
            let (pb, pt) = mk(
                &|b, b2| (self.base.act_left(g, b), other.base.act_left(g, b2)),
                &|e| self.total.act_left(g, e),
                &|e2| other.total.act_left(g, e2),
            );
            lb.push(pb);
            lt.push(pt);
        }
        let mut rb = Vec::new();
        let mut rt = Vec::new();
        for &x in dp.group.generators() {
            let c = dp.components(x);
            let (s, s2) = (c[0], c[1]);
            let (pb, pt) = mk(
                &|b, b2| (self.base.act_right(b, s), other.base.act_right(b2, s2)),
                &|e| self.total.act_right(e, s),
                &|e2| other.total.act_right(e2, s2),
            );
            rb.push(pb);
            rt.push(pt);
        }
        let base = BiSet::new(gamma, &dp.group, size, &lb, &rb)?;
        let total = BiSet::new(gamma, &dp.group, ntot, &lt, &rt)?;
        let mut proj = vec![0usize; ntot];
        for e in 0..self.total.size() {
            for b2 in 0..nb2 {
                proj[tot_a(e, b2)] = base_idx(self.proj[e], b2);
            }
        }
        for b in 0..nb {
            for e2 in 0..other.total.size() {
                proj[tot_b(b, e2)] = base_idx(b, other.proj[e2]);
            }
        }
        Ok((BundleData::new(base, total, proj)?, dp))
    }

    /// `Sym^q` over `B^q` for the subgroup `Σ ≤ Σ_q` given by its elements,
    /// with quotient group `Σ ≀ Q` and fiber `⊕_i E_{b_i}` over `(b_i)`.
    pub fn sym_power(&self, q: usize, sigma: Option<&[Perm]>, caps: &Caps) -> Result<SymPower> {
        let wreath = Wreath::new(q, self.q());
        let elems = match sigma {
            None => wreath.elements(caps)?,
            Some(s) => {
                let sym = crate::group::symmetric(q);
                for p in s {
                    if sym.index_of(p).is_none() {
                        return Err(Error::InvalidInput("Σ must consist of permutations of 0..q".into()));
                    }
                }
                let idx: Vec<usize> = s.iter().map(|p| sym.index_of(p).unwrap()).collect();
                let sub = sym.closure(&idx);
                if sub.order() != {
                    let mut d = s.to_vec();
                    d.sort();
                    d.dedup();
                    d.len()
                } {
                    return Err(Error::NotASubgroup("Σ is not closed".into()));
                }
                wreath.restricted_elements(s, caps)?
            }
        };
        let nb = self.base.size();
        let nbase = nb.checked_pow(q as u32).unwrap_or(usize::MAX);
        let fiber_total: usize = (0..nb).map(|b| self.fiber_dim(b)).sum();
        let ntot = if nb == 0 { 0 } else { q * fiber_total * nb.pow(q.saturating_sub(1) as u32) };
        caps.check_materialize("symmetric power base", nbase)?;
        caps.check_materialize("symmetric power total space", ntot.max(elems.len()))?;
        let perms: Vec<Perm> = elems.iter().map(|x| wreath.to_perm(x)).collect();
        let group = std::sync::Arc::new(crate::group::FinGroup::from_closed(q * self.q().degree(), perms));
        let mut by_index = vec![wreath.identity(); group.order()];
        for x in elems {
            let i = group.index_of(&wreath.to_perm(&x)).unwrap();
            by_index[i] = x;
        }
        let tuple = |mut k: usize| -> Vec<usize> {
            let mut t = vec![0usize; q];
            for i in (0..q).rev() {
                t[i] = k % nb;
                k /= nb;
            }
            t
        };
        let index = |t: &[usize]| t.iter().fold(0usize, |acc, &b| acc * nb + b);
        // Total points: base tuple, then slot j, then point of E over b_j.
        let mut tot_offset = vec![0usize; nbase + 1];
        for k in 0..nbase {
            let t = tuple(k);
            tot_offset[k + 1] = tot_offset[k] + t.iter().map(|&b| self.fiber_dim(b)).sum::<usize>();
        }
        let ntot = tot_offset[nbase];
        let locate = |t: &[usize], j: usize, e: usize| -> usize {
            let k = index(t);
            let before: usize = t[..j].iter().map(|&b| self.fiber_dim(b)).sum();
            tot_offset[k] + before + (e - self.offsets[t[j]])
        };
        let gamma = self.gamma();
        let mut lb = Vec::new();
        let mut lt = Vec::new();
        for &g in gamma.generators() {
            let mut bimg = vec![0u32; nbase];
            let mut timg = vec![0u32; ntot];
            for k in 0..nbase {
                let t = tuple(k);
                let gt: Vec<usize> = t.iter().map(|&b| self.base.act_left(g, b)).collect();
                bimg[k] = index(&gt) as u32;
                for j in 0..q {
                    for e in self.fiber(t[j]) {
                        timg[locate(&t, j, e)] = locate(&gt, j, self.total.act_left(g, e)) as u32;
                    }
                }
            }
            lb.push(Perm::from_images_unchecked(bimg));
            lt.push(Perm::from_images_unchecked(timg));
        }
        let mut rb = Vec::new();
        let mut rt = Vec::new();
        for &w in group.generators() {
            let x = &by_index[w];
            let sinv = x.s.inverse();
            let mut bimg = vec![0u32; nbase];
            let mut timg = vec![0u32; ntot];
            for k in 0..nbase {
                let t = tuple(k);
                let tw: Vec<usize> = (0..q)
                    .map(|i| self.base.act_right(t[x.s.image(i)], x.a[x.s.image(i)]))
                    .collect();
                bimg[k] = index(&tw) as u32;
                for j in 0..q {
                    for e in self.fiber(t[j]) {
                        let j2 = sinv.image(j);
                        timg[locate(&t, j, e)] = locate(&tw, j2, self.total.act_right(e, x.a[j])) as u32;
                    }
                }
            }
            rb.push(Perm::from_images_unchecked(bimg));
            rt.push(Perm::from_images_unchecked(timg));
        }
        let base = BiSet::new(gamma, &group, nbase, &lb, &rb)?;
        let total = BiSet::new(gamma, &group, ntot, &lt, &rt)?;
        let mut proj = vec![0usize; ntot];
        for k in 0..nbase {
            for e in tot_offset[k]..tot_offset[k + 1] {
                proj[e] = k;
            }
        }
        Ok(SymPower { bundle: BundleData::new(base, total, proj)?, wreath, elements: by_index })
    }

    /// `η(Λ)`: over each `σ: Λ -> Q`, the twisted fixed points `B^{Λ,σ}` with
    /// fibers `(E_b)^{Λ,σ}`.
    pub fn eta_lambda(&self, lambda: &Subgroup, caps: &Caps) -> Result<DerivedBundle> {
        ensure_same(lambda.group(), self.gamma(), "Λ must be a subgroup of Γ")?;
        if !lambda.is_normal() {
            return Err(Error::NotNormal);
        }
        let (lg, inc) = lambda.to_group();
        let q = self.q();
        let homs = enumerate_homs(&lg, q, caps)?;
        let key: HashMap<Vec<usize>, usize> =
            homs.iter().enumerate().map(|(i, h)| (h.generator_images(), i)).collect();
        let gamma = self.gamma();
        // Base points (σ, b) and total points (σ, orbit).
        let mut base_pts: Vec<(usize, usize)> = Vec::new();
        let mut base_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut tot: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut tot_index: HashMap<(usize, usize), usize> = HashMap::new();
        for (c, sigma) in homs.iter().enumerate() {
            for b in self.base.twisted_fixed_points(&inc, sigma) {
                let bi = base_pts.len();
                base_index.insert((c, b), bi);
                base_pts.push((c, b));
                let fiber: Vec<usize> = self.fiber(b).collect();
                for orb in self.total.twisted_orbits(&inc, sigma, &fiber) {
                    tot_index.insert((c, orb[0]), tot.len());
                    tot.push((bi, orb));
                }
            }
        }
        // Conjugation actions on the homomorphism list.
        let conj_gamma = |g: usize, c: usize| -> usize {
            // σ^γ(λ) = σ(γ^{-1} λ γ)
            let ginv = gamma.inv(g);
            let imgs: Vec<usize> = lg
                .generators()
                .iter()
                .map(|&x| {
                    let l = gamma.mul(ginv, gamma.mul(inc.map[x], g));
                    let li = inc.map.binary_search(&l).expect("Λ is normal");
                    homs[c].map[li]
                })
                .collect();
            key[&imgs]
        };
        let conj_q = |s: usize, c: usize| -> usize {
            key[&homs[c].conjugate_by(s).generator_images()]
        };
        let lperm = |g: usize| -> (Perm, Perm) {
            let bimg = base_pts
                .iter()
                .map(|&(c, b)| base_index[&(conj_gamma(g, c), self.base.act_left(g, b))] as u32)
                .collect();
            let timg = tot
                .iter()
                .map(|(bi, orb)| {
                    let c2 = conj_gamma(g, base_pts[*bi].0);
                    let m = orb.iter().map(|&e| self.total.act_left(g, e)).min().unwrap();
                    tot_index[&(c2, m)] as u32
                })
                .collect();
            (Perm::from_images_unchecked(bimg), Perm::from_images_unchecked(timg))
        };
        let rperm = |s: usize| -> (Perm, Perm) {
            let bimg = base_pts
                .iter()
                .map(|&(c, b)| base_index[&(conj_q(s, c), self.base.act_right(b, s))] as u32)
                .collect();
            let timg = tot
                .iter()
                .map(|(bi, orb)| {
                    let c2 = conj_q(s, base_pts[*bi].0);
                    let m = orb.iter().map(|&e| self.total.act_right(e, s)).min().unwrap();
                    tot_index[&(c2, m)] as u32
                })
                .collect();
            (Perm::from_images_unchecked(bimg), Perm::from_images_unchecked(timg))
        };
        let (lb, lt): (Vec<Perm>, Vec<Perm>) = gamma.generators().iter().map(|&g| lperm(g)).unzip();
        let (rb, rt): (Vec<Perm>, Vec<Perm>) = q.generators().iter().map(|&s| rperm(s)).unzip();
        let base = BiSet::new(gamma, q, base_pts.len(), &lb, &rb)?;
        let total = BiSet::new(gamma, q, tot.len(), &lt, &rt)?;
        let proj = tot.iter().map(|(bi, _)| *bi).collect();
        let bundle = BundleData::new(base, total, proj)?;
        // `new` keeps the order here because totals were produced base by base.
        Ok(DerivedBundle {
            bundle,
            homs,
            component: base_pts.iter().map(|&(c, _)| c).collect(),
            base_origin: base_pts.iter().map(|&(_, b)| b).collect(),
            fiber_origin: tot.into_iter().map(|(_, o)| o).collect(),
        })
    }

    /// `η(Λ|K)`: the part of `η(Λ)` where the `σ|K`-twisted action of `K` on
    /// the whole fiber `E_b` is trivial.
    pub fn eta_lambda_rel(&self, lambda: &Subgroup, k: &Subgroup, caps: &Caps) -> Result<DerivedBundle> {
        ensure_same(k.group(), self.gamma(), "K must be a subgroup of Γ")?;
        if !k.is_subgroup_of(lambda) {
            return Err(Error::NotNested);
        }
        if !k.is_normal() {
            return Err(Error::NotNormal);
        }
        let full = self.eta_lambda(lambda, caps)?;
        let lam_members = lambda.members();
        let keep: Vec<usize> = (0..full.bundle.base.size())
            .filter(|&x| {
                let sigma = &full.homs[full.component[x]];
                let b = full.base_origin[x];
                k.members().iter().all(|&kk| {
                    let li = lam_members.binary_search(&kk).unwrap();
                    let s = sigma.map[li];
                    self.fiber(b).all(|e| self.total.act_left(kk, e) == self.total.act_right(e, s))
                })
            })
            .collect();
        let (bundle, pts) = full
            .bundle
            .restrict_base(&keep)
            .map_err(|_| Error::InvalidInput("the relative condition does not cut out a stable subset".into()))?;
        let tot_keep: Vec<usize> = pts.iter().flat_map(|&x| full.bundle.fiber(x)).collect();
        Ok(DerivedBundle {
            bundle,
            homs: full.homs,
            component: pts.iter().map(|&x| full.component[x]).collect(),
            base_origin: pts.iter().map(|&x| full.base_origin[x]).collect(),
            fiber_origin: tot_keep.iter().map(|&e| full.fiber_origin[e].clone()).collect(),
        })
    }

    /// Checks the criterion for inheritable faithfulness relative to `Λ`.
    pub fn ifcrit_check(&self, lambda: &Subgroup, caps: &Caps) -> Result<IfcritReport> {
        ensure_same(lambda.group(), self.gamma(), "Λ must be a subgroup of Γ")?;
        let q = self.q().clone();
        let (lg, linc) = lambda.to_group();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        for hsub in enumerate_subgroups(&lg, caps)? {
            let (hg, hinc_l) = hsub.to_group();
            let hinc = hinc_l.then(&linc);
            let h_in_gamma: Vec<usize> = hinc.map.clone();
            for sigma in enumerate_homs(&hg, &q, caps)? {
                let sig_imgs: Vec<usize> = sigma.map.clone();
                for b in self.base.twisted_fixed_points(&hinc, &sigma) {
                    checked += 1;
                    let fiber: Vec<usize> = self.fiber(b).collect();
                    let orbits = self.total.twisted_orbits(&hinc, &sigma, &fiber);
                    let witness = |condition: u8, lambda_el: Option<usize>, s: Option<usize>| IfcritFailure {
                        condition,
                        subgroup: h_in_gamma.clone(),
                        sigma: sig_imgs.clone(),
                        base_point: b,
                        lambda: lambda_el,
                        s,
                    };
                    if orbits.is_empty() {
                        failures.push(witness(1, None, None));
                        continue;
                    }
                    let as_set = |v: Vec<usize>| {
                        let mut v = v;
                        v.sort_unstable();
                        v
                    };
                    for &l in lambda.members() {
                        if h_in_gamma.binary_search(&l).is_ok() {
                            continue;
                        }
                        let lb = self.base.act_left(l, b);
                        for s in 0..q.order() {
                            if self.base.act_right(b, s) != lb {
                                continue;
                            }
                            let differs = orbits.iter().any(|o| {
                                as_set(o.iter().map(|&e| self.total.act_left(l, e)).collect())
                                    != as_set(o.iter().map(|&e| self.total.act_right(e, s)).collect())
                            });
                            if !differs {
                                failures.push(witness(2, Some(l), Some(s)));
                            }
                        }
                    }
                    for s in 1..q.order() {
                        if self.base.act_right(b, s) != b {
                            continue;
                        }
                        if !sig_imgs.iter().all(|&t| q.mul(s, t) == q.mul(t, s)) {
                            continue;
                        }
                        let moves = orbits.iter().any(|o| {
                            as_set(o.iter().map(|&e| self.total.act_right(e, s)).collect()) != *o
                        });
                        if !moves {
                            failures.push(witness(3, None, Some(s)));
                        }
                    }
                }
            }
        }
        Ok(IfcritReport { holds: failures.is_empty(), checked, failures })
    }

    /// Sufficient condition (a): every fiber contains the regular
    /// representation of its isotropy group in `Γ × Q^op`.
    pub fn ifcritex_a(&self, caps: &Caps) -> Result<bool> {
        let (_, comb) = self.base.combined(caps)?;
        let (_, tcomb) = self.total.combined(caps)?;
        for b in 0..self.base.size() {
            let stab = comb.stabilizer(b);
            let free = self.fiber(b).any(|e| stab.members().iter().all(|&g| g == 0 || tcomb.act(g, e) != e));
            if !free {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sufficient condition (b): `Q` is trivial and every fiber restricted to
    /// `Γ_b ∩ Λ` contains the regular representation.
    pub fn ifcritex_b(&self, lambda: &Subgroup) -> Result<bool> {
        ensure_same(lambda.group(), self.gamma(), "Λ must be a subgroup of Γ")?;
        if self.q().order() != 1 {
            return Ok(false);
        }
        for b in 0..self.base.size() {
            let stab: Vec<usize> = lambda
                .members()
                .iter()
                .copied()
                .filter(|&l| self.base.act_left(l, b) == b)
                .collect();
            let free = self.fiber(b).any(|e| stab.iter().all(|&g| g == 0 || self.total.act_left(g, e) != e));
            if !free {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The `τ`-twisted `Λ` fixed points of `η^t` for `τ: Λ -> Σ_t ≀ Q`,
    /// keeping base points where `K` (indices in `Λ`) acts trivially on the
    /// fiber. Returns the number of base points and their fiber dimensions.
    pub fn wreath_twisted_component(
        &self,
        inc: &GroupHom,
        tau: &crate::wreath::WreathHom,
        k: &[usize],
        caps: &Caps,
    ) -> Result<(usize, Vec<usize>)> {
        ensure_same(&inc.target, self.gamma(), "Λ must map into Γ")?;
        let t = tau.q();
        let mut image: Vec<Perm> = tau.s.clone();
        image.sort();
        image.dedup();
        let sp = self.sym_power(t, Some(&image), caps)?;
        let g = sp.bundle.q().clone();
        let map = (0..tau.source.order())
            .map(|l| g.index_of(&sp.wreath.to_perm(&tau.elem(l))).expect("τ lands in Σ ≀ Q"))
            .collect();
        let sigma = GroupHom { source: tau.source.clone(), target: g, map };
        let (base, total) = (sp.bundle.base(), sp.bundle.total());
        let dims: Vec<usize> = base
            .twisted_fixed_points(inc, &sigma)
            .into_iter()
            .filter(|&b| {
                k.iter().all(|&kk| {
                    sp.bundle
                        .fiber(b)
                        .all(|e| total.act_left(inc.map[kk], e) == total.act_right(e, sigma.map[kk]))
                })
            })
            .map(|b| total.twisted_orbits(inc, &sigma, &sp.bundle.fiber(b).collect::<Vec<_>>()).len())
            .collect();
        Ok((dims.len(), dims))
    }

    /// `η × D` for a finite set `D` with trivial actions.
    pub fn times_set(&self, d: usize) -> Result<BundleData> {
        let point = |n: usize| BiSet::from_gset(&GSet::trivial(self.gamma(), n), self.q());
        let base = self.base.product_with(&point(d))?;
        let total = self.total.product_with(&point(d))?;
        let proj = (0..self.total.size() * d).map(|x| self.proj[x / d] * d + x % d).collect();
        BundleData::new(base, total, proj)
    }

    /// Whether `(Sym^q_Σ η)(Λ)` is faithful for `q = 1..=q_max`, with `Σ = Σ_q`.
    pub fn inheritably_faithful_bruteforce(&self, lambda: &Subgroup, q_max: usize, caps: &Caps) -> Result<Vec<bool>> {
        (1..=q_max)
            .map(|q| {
                let sp = self.sym_power(q, None, caps)?;
                Ok(sp.bundle.eta_lambda(lambda, caps)?.bundle.is_q_faithful().faithful)
            })
            .collect()
    }
}

fn relabel_biset(b: &BiSet, p: &Perm) -> BiSet {
    let inv = p.inverse();
    let conj = |x: &Perm| p.compose(x).compose(&inv);
    let l = (0..b.left_group().order()).map(|g| conj(b.left_perm(g))).collect();
    let r = (0..b.right_group().order()).map(|s| conj(b.right_perm(s))).collect();
    BiSet::from_tables(b.left_group(), b.right_group(), b.size(), l, r)
}

/// Result of a symmetric power: the bundle plus the decoding of its quotient group.
#[derive(Clone, Debug)]
pub struct SymPower {
    pub bundle: BundleData,
    pub wreath: Wreath,
    /// Wreath element of each element index of the quotient group.
    pub elements: Vec<WreathElem>,
}

/// A bundle obtained by taking twisted fixed points, with its provenance.
#[derive(Clone, Debug)]
pub struct DerivedBundle {
    pub bundle: BundleData,
    /// All homomorphisms `Λ -> Q`, in canonical order.
    pub homs: Vec<GroupHom>,
    /// Homomorphism index of each base point.
    pub component: Vec<usize>,
    /// Parent base point of each base point.
    pub base_origin: Vec<usize>,
    /// Parent total points whose sum is each new total point.
    pub fiber_origin: Vec<Vec<usize>>,
}

impl DerivedBundle {
    /// Base points per homomorphism, including empty components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.homs.len()];
        for (x, &c) in self.component.iter().enumerate() {
            out[c].push(x);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IfcritFailure {
    /// 1: empty fixed fiber; 2: some `λ ∉ H` agrees with `s` on it; 3: some `s ≠ 1` is trivial on it.
    pub condition: u8,
    pub subgroup: Vec<usize>,
    pub sigma: Vec<usize>,
    pub base_point: usize,
    pub lambda: Option<usize>,
    pub s: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IfcritReport {
    pub holds: bool,
    pub checked: usize,
    pub failures: Vec<IfcritFailure>,
}

/// Outcome of comparing `η(M|K)` with `(η(Λ|K))(M|Λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterPhiReport {
    pub lhs_base: usize,
    pub rhs_base: usize,
    pub lhs_fiber_dims: Vec<usize>,
    pub rhs_fiber_dims: Vec<usize>,
    /// Image of each left base point, when defined.
    pub base_map: Vec<Option<usize>>,
    pub total_map: Vec<Option<usize>>,
    pub is_isomorphism: bool,
}

/// Compares `η(M|K)` with `(η(Λ|K))(M|Λ)` through `(σ, b) -> (σ, (σ|Λ, b))`.
pub fn iterphi_bundle_iso(
    eta: &BundleData,
    k: &Subgroup,
    lambda: &Subgroup,
    m: &Subgroup,
    caps: &Caps,
) -> Result<IterPhiReport> {
    for s in [k, lambda, m] {
        ensure_same(s.group(), eta.gamma(), "subgroups must lie in Γ")?;
    }
    if !k.is_subgroup_of(lambda) || !lambda.is_subgroup_of(m) {
        return Err(Error::NotNested);
    }
    if !m.is_normal() || !lambda.is_normal() || !k.is_normal() {
        return Err(Error::NotNormal);
    }
    if !eta.is_q_faithful().faithful {
        return Err(Error::FaithfulnessHypothesisFails("η".into()));
    }
    let mid = eta.eta_lambda_rel(lambda, k, caps)?;
    if !mid.bundle.is_q_faithful().faithful {
        return Err(Error::FaithfulnessHypothesisFails("η(Λ|K)".into()));
    }
    let lhs = eta.eta_lambda_rel(m, k, caps)?;
    let rhs = mid.bundle.eta_lambda_rel(m, lambda, caps)?;
    // Restriction M -> Λ on homomorphisms, matched through generator images.
    let lam_in_m: Vec<usize> = lambda
        .members()
        .iter()
        .map(|&x| m.members().binary_search(&x).unwrap())
        .collect();
    let mid_key: HashMap<Vec<usize>, usize> =
        mid.homs.iter().enumerate().map(|(i, h)| (h.map.clone(), i)).collect();
    let mid_point: HashMap<(usize, usize), usize> = (0..mid.bundle.base().size())
        .map(|x| ((mid.component[x], mid.base_origin[x]), x))
        .collect();
    let rhs_point: HashMap<(usize, usize), usize> = (0..rhs.bundle.base().size())
        .map(|x| ((rhs.component[x], rhs.base_origin[x]), x))
        .collect();
    let base_map: Vec<Option<usize>> = (0..lhs.bundle.base().size())
        .map(|x| {
            let sigma = &lhs.homs[lhs.component[x]];
            let restricted: Vec<usize> = lam_in_m.iter().map(|&i| sigma.map[i]).collect();
            let rho = *mid_key.get(&restricted)?;
            let y = *mid_point.get(&(rho, lhs.base_origin[x]))?;
            rhs_point.get(&(lhs.component[x], y)).copied()
        })
        .collect();
    // Total points compared as sets of points of E.
    let expand_rhs = |t: usize| -> Vec<usize> {
        let mut v: Vec<usize> = rhs.fiber_origin[t]
            .iter()
            .flat_map(|&u| mid.fiber_origin[u].iter().copied())
            .collect();
        v.sort_unstable();
        v
    };
    // Keyed by base point too: different components can sit over the same points of E.
    let rhs_tot: HashMap<(usize, Vec<usize>), usize> = (0..rhs.bundle.total().size())
        .map(|t| ((rhs.bundle.projection()[t], expand_rhs(t)), t))
        .collect();
    let total_map: Vec<Option<usize>> = (0..lhs.bundle.total().size())
        .map(|t| {
            let bx = base_map[lhs.bundle.projection()[t]]?;
            rhs_tot.get(&(bx, lhs.fiber_origin[t].clone())).copied()
        })
        .collect();
    let bijective = |v: &[Option<usize>], n: usize| {
        let mut img: Vec<usize> = v.iter().flatten().copied().collect();
        img.sort_unstable();
        img.dedup();
        img.len() == v.len() && v.iter().all(|x| x.is_some()) && img.len() == n
    };
    let mut iso = bijective(&base_map, rhs.bundle.base().size())
        && bijective(&total_map, rhs.bundle.total().size());
    if iso {
        let bm: Vec<usize> = base_map.iter().map(|x| x.unwrap()).collect();
        let tm: Vec<usize> = total_map.iter().map(|x| x.unwrap()).collect();
        let (lb, rb) = (lhs.bundle.base(), rhs.bundle.base());
        let (lt, rt) = (lhs.bundle.total(), rhs.bundle.total());
        for &g in eta.gamma().generators() {
            iso &= (0..lb.size()).all(|x| bm[lb.act_left(g, x)] == rb.act_left(g, bm[x]));
            iso &= (0..lt.size()).all(|x| tm[lt.act_left(g, x)] == rt.act_left(g, tm[x]));
        }
        for &s in eta.q().generators() {
            iso &= (0..lb.size()).all(|x| bm[lb.act_right(x, s)] == rb.act_right(bm[x], s));
            iso &= (0..lt.size()).all(|x| tm[lt.act_right(x, s)] == rt.act_right(tm[x], s));
        }
    }
    let dims = |d: &DerivedBundle| d.bundle.fiber_dims();
    Ok(IterPhiReport {
        lhs_base: lhs.bundle.base().size(),
        rhs_base: rhs.bundle.base().size(),
        lhs_fiber_dims: dims(&lhs),
        rhs_fiber_dims: dims(&rhs),
        base_map,
        total_map,
        is_isomorphism: iso,
    })
}

/// Whether two groups agree, for callers comparing bundle signatures.
pub fn same_signature(a: &BundleData, b: &BundleData) -> bool {
    same_group(a.gamma(), b.gamma()) && same_group(a.q(), b.q())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, trivial};

    fn c4_over_c2_regular() -> (BundleData, Subgroup) {
        // C4 ×_{C2} R<C2> -> C4/C2, Q trivial.
        let caps = Caps::default();
        let c4 = cyclic(4);
        let one = trivial();
        let c2 = c4.closure(&[c4.pow(c4.generators()[0], 2)]);
        let base = BiSet::from_gset(&GSet::coset_space(&c2), &one);
        let gen2 = c4.element(c4.pow(c4.generators()[0], 2)).clone();
        let fiber = FiberSpec {
            orbit_rep: 0,
            points: 2,
            generators: vec![FiberGenerator {
                gamma: gen2,
                q: Perm::identity(1),
                image: Perm::from_cycles(2, &[&[0, 1]]).unwrap(),
            }],
        };
        (BundleData::from_orbit_fibers(&base, &[fiber], &caps).unwrap(), c2)
    }

    #[test]
    fn eta_lambda_of_induced_regular() {
        let caps = Caps::default();
        let (eta, c2) = c4_over_c2_regular();
        assert_eq!(eta.total().size(), 4);
        let d = eta.eta_lambda(&c2, &caps).unwrap();
        assert_eq!(d.homs.len(), 1);
        assert_eq!(d.bundle.base().size(), 2);
        assert_eq!(d.bundle.fiber_dims(), vec![1, 1]);
        // The generator of C4 swaps the two base points.
        let g = eta.gamma().generators()[0];
        assert_eq!(d.bundle.base().act_left(g, 0), 1);
    }

    #[test]
    fn relative_version_can_be_empty() {
        let caps = Caps::default();
        let c2 = cyclic(2);
        let one = trivial();
        let fiber = BiSet::from_gset(&GSet::regular(&c2), &one);
        let eta = BundleData::over_point(&fiber);
        let whole = c2.whole();
        let d = eta.eta_lambda_rel(&whole, &whole, &caps).unwrap();
        assert_eq!(d.bundle.base().size(), 0);
        let d1 = eta.eta_lambda_rel(&whole, &c2.trivial_subgroup(), &caps).unwrap();
        assert_eq!(d1.bundle.base().size(), 1);
    }

    #[test]
    fn spec_round_trip() {
        let caps = Caps::default();
        let (eta, _) = c4_over_c2_regular();
        let spec = eta.spec(&caps).unwrap();
        let back = BundleData::from_spec(eta.gamma(), eta.q(), &spec, &caps).unwrap();
        assert_eq!(back, eta);
    }

    #[test]
    fn product_with_point_of_zero_fiber() {
        let caps = Caps::default();
        let (eta, _) = c4_over_c2_regular();
        let pt = BundleData::over_point(&BiSet::from_gset(&GSet::trivial(eta.gamma(), 0), &trivial()));
        let (p, _) = eta.product(&pt, &caps).unwrap();
        assert_eq!(p.base().size(), eta.base().size());
        assert_eq!(p.fiber_dims(), eta.fiber_dims());
    }

    #[test]
    fn sym_square_of_swap_fiber() {
        let caps = Caps::default();
        let c2 = cyclic(2);
        let one = trivial();
        let eta = BundleData::over_point(&BiSet::from_gset(&GSet::regular(&c2), &one));
        let sp = eta.sym_power(2, None, &caps).unwrap();
        assert_eq!(sp.bundle.base().size(), 1);
        assert_eq!(sp.bundle.fiber_dims(), vec![4]);
        assert_eq!(sp.bundle.q().order(), 2);
        assert!(sp.bundle.is_q_faithful().faithful);
    }
}
