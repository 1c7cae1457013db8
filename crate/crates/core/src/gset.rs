//! Finite G-sets, bi-sets with commuting left and right actions, and the
//! permutation representations they span.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Caps, Error, Result};
use crate::group::{ensure_same, same_group, DirectProduct, Group, GroupHom, Subgroup};
use crate::perm::Perm;

/// Tabulates an action from generator images; `right` selects `x·(gs) = (x·g)·s`.
fn tabulate(group: &Group, size: usize, gens: &[usize], perms: &[Perm], right: bool) -> Result<Vec<Perm>> {
    if gens.len() != perms.len() {
        return Err(Error::InvalidInput("generator/action count mismatch".into()));
    }
    if let Some(p) = perms.iter().find(|p| p.degree() != size) {
        return Err(Error::InvalidInput(format!(
            "action permutation {:?} has degree {}, expected {size}",
            p.images(),
            p.degree()
        )));
    }
    let mut tab: Vec<Option<Perm>> = vec![None; group.order()];
    tab[0] = Some(Perm::identity(size));
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let px = tab[x].clone().unwrap();
        for (&g, pg) in gens.iter().zip(perms) {
            let (y, val) = if right {
                (group.mul(x, g), pg.compose(&px))
            } else {
                (group.mul(g, x), pg.compose(&px))
            };
            match &tab[y] {
                None => {
                    tab[y] = Some(val);
                    queue.push_back(y);
                }
                Some(old) if *old != val => {
                    return Err(Error::InvalidInput("action violates a group relation".into()))
                }
                _ => {}
            }
        }
    }
    tab.into_iter()
        .collect::<Option<Vec<Perm>>>()
        .ok_or_else(|| Error::InvalidInput("action generators do not generate the group".into()))
}

fn orbits_of(size: usize, perms: &[&Perm]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; size];
    let mut out = Vec::new();
    for start in 0..size {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orb = vec![start];
        let mut k = 0;
        while k < orb.len() {
            let x = orb[k];
            k += 1;
            for p in perms {
                let y = p.image(x);
                if !seen[y] {
                    seen[y] = true;
                    orb.push(y);
                }
            }
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

/// A left G-set on the points `0..size`.
#[derive(Clone, Debug)]
pub struct GSet {
    group: Group,
    action: Vec<Perm>,
    size: usize,
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.action == other.action
    }
}

/// Wire form: images of the group's canonical generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSetSpec {
    pub points: usize,
    pub action: Vec<Perm>,
}

impl GSet {
    pub fn from_generator_images(group: &Group, size: usize, gens: &[usize], perms: &[Perm]) -> Result<GSet> {
        let action = tabulate(group, size, gens, perms, false)?;
        Ok(GSet { group: group.clone(), action, size })
    }

    pub fn from_spec(group: &Group, spec: &GSetSpec) -> Result<GSet> {
        GSet::from_generator_images(group, spec.points, group.generators(), &spec.action)
    }

    pub fn spec(&self) -> GSetSpec {
        GSetSpec {
            points: self.size,
            action: self.group.generators().iter().map(|&g| self.action[g].clone()).collect(),
        }
    }

    /// Action through a homomorphism into a permutation group.
    pub fn from_hom(h: &GroupHom) -> GSet {
        GSet {
            group: h.source.clone(),
            action: h.map.iter().map(|&x| h.target.element(x).clone()).collect(),
            size: h.target.degree(),
        }
    }

    /// The natural action of a permutation group on its points.
    pub fn natural(group: &Group) -> GSet {
        GSet { group: group.clone(), action: group.elements().to_vec(), size: group.degree() }
    }

    pub fn trivial(group: &Group, size: usize) -> GSet {
        GSet { group: group.clone(), action: vec![Perm::identity(size); group.order()], size }
    }

    pub fn regular(group: &Group) -> GSet {
        GSet::coset_space(&group.trivial_subgroup())
    }

    /// `G/H` on left cosets, listed by lex-minimal representative.
    pub fn coset_space(h: &Subgroup) -> GSet {
        let g = h.group();
        let reps = h.left_coset_reps();
        let mut coset_of = vec![0usize; g.order()];
        for (ci, &r) in reps.iter().enumerate() {
            for &x in h.members() {
                coset_of[g.mul(r, x)] = ci;
            }
        }
        let action = (0..g.order())
            .map(|x| {
                Perm::from_images_unchecked(reps.iter().map(|&r| coset_of[g.mul(x, r)] as u32).collect())
            })
            .collect();
        GSet { group: g.clone(), action, size: reps.len() }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g].image(x)
    }

    pub fn perm(&self, g: usize) -> &Perm {
        &self.action[g]
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let gens: Vec<&Perm> = self.group.generators().iter().map(|&g| &self.action[g]).collect();
        orbits_of(self.size, &gens)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        let m = (0..self.group.order()).filter(|&g| self.act(g, x) == x).collect();
        Subgroup::new_unchecked(self.group.clone(), m)
    }

    pub fn fixed_points(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.size).filter(|&x| h.members().iter().all(|&g| self.act(g, x) == x)).collect()
    }

    /// Orbit-sum basis of the `H`-fixed subspace of the permutation representation.
    pub fn fixed_subspace(&self, h: &Subgroup) -> Vec<Vec<i64>> {
        let gens: Vec<&Perm> = h.generators().iter().map(|&g| &self.action[g]).collect();
        orbits_of(self.size, &gens)
            .into_iter()
            .map(|orb| {
                let mut v = vec![0i64; self.size];
                for x in orb {
                    v[x] = 1;
                }
                v
            })
            .collect()
    }

    /// Has an orbit on which the group acts freely.
    pub fn has_free_orbit(&self) -> bool {
        (0..self.size).any(|x| self.stabilizer(x).order() == 1)
    }

    /// Whether some `H`-orbit is free, i.e. `ℝ⟨X⟩` restricted to `H` has a
    /// summand `ℝ⟨H⟩` coming from a single orbit.
    pub fn is_semiregular(&self, h: &Subgroup) -> bool {
        (0..self.size).any(|x| h.members().iter().all(|&g| g == 0 || self.act(g, x) != x))
    }

    pub fn is_free(&self) -> bool {
        (0..self.size).all(|x| self.stabilizer(x).order() == 1)
    }

    pub fn is_faithful(&self) -> bool {
        (1..self.group.order()).all(|g| !self.action[g].is_identity())
    }

    pub fn disjoint_union(&self, other: &GSet) -> Result<GSet> {
        ensure_same(&self.group, &other.group, "disjoint union of G-sets")?;
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.direct_sum(b)).collect();
        Ok(GSet { group: self.group.clone(), action, size: self.size + other.size })
    }

    /// Cartesian product, point `(x, y)` numbered `x * |other| + y`.
    pub fn product(&self, other: &GSet) -> Result<GSet> {
        ensure_same(&self.group, &other.group, "product of G-sets")?;
        let m = other.size;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                Perm::from_images_unchecked(
                    (0..self.size * m)
                        .map(|p| (a.image(p / m) * m + b.image(p % m)) as u32)
                        .collect(),
                )
            })
            .collect();
        Ok(GSet { group: self.group.clone(), action, size: self.size * m })
    }

    /// Pullback along a homomorphism `K -> G`.
    pub fn restrict(&self, h: &GroupHom) -> Result<GSet> {
        ensure_same(&h.target, &self.group, "restriction of a G-set")?;
        Ok(GSet {
            group: h.source.clone(),
            action: h.map.iter().map(|&x| self.action[x].clone()).collect(),
            size: self.size,
        })
    }

    /// Relabels points by `perm` (new label of old point `x` is `perm[x]`).
    pub fn relabel(&self, perm: &Perm) -> GSet {
        let inv = perm.inverse();
        GSet {
            group: self.group.clone(),
            action: self.action.iter().map(|a| perm.compose(a).compose(&inv)).collect(),
            size: self.size,
        }
    }

    /// Equivariant map check.
    pub fn is_equivariant_map(&self, other: &GSet, f: &[usize]) -> bool {
        f.len() == self.size
            && self.group.generators().iter().all(|&g| {
                (0..self.size).all(|x| f[self.act(g, x)] == other.act(g, f[x]))
            })
    }

    /// An equivariant bijection `self -> other` if one exists.
    pub fn find_isomorphism(&self, other: &GSet) -> Option<Vec<usize>> {
        if !same_group(&self.group, &other.group) || self.size != other.size {
            return None;
        }
        equivariant_bijections(self, other, Some(1)).pop()
    }

    /// The action as a homomorphism into the symmetric group `sym` of degree `size`.
    pub fn to_hom(&self, sym: &Group) -> Result<GroupHom> {
        if sym.degree() != self.size {
            return Err(Error::GroupMismatch("symmetric group of wrong degree".into()));
        }
        let map: Option<Vec<usize>> = self.action.iter().map(|p| sym.index_of(p)).collect();
        Ok(GroupHom {
            source: self.group.clone(),
            target: sym.clone(),
            map: map.ok_or_else(|| Error::GroupMismatch("action leaves the given group".into()))?,
        })
    }
}

/// Equivariant bijections between two G-sets, in lexicographic order of the
/// image list, stopping after `limit` results.
pub fn equivariant_bijections(a: &GSet, b: &GSet, limit: Option<usize>) -> Vec<Vec<usize>> {
    let orbits = a.orbits();
    let reps: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
    let stabs: Vec<Subgroup> = reps.iter().map(|&x| a.stabilizer(x)).collect();
    let b_stabs: Vec<Subgroup> = (0..b.size).map(|y| b.stabilizer(y)).collect();
    let mut out = Vec::new();
    let mut f = vec![usize::MAX; a.size];
    let mut used = vec![false; b.size];
    fn rec(
        k: usize,
        a: &GSet,
        b: &GSet,
        reps: &[usize],
        stabs: &[Subgroup],
        b_stabs: &[Subgroup],
        f: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        limit: Option<usize>,
    ) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        if k == reps.len() {
            out.push(f.clone());
            return;
        }
        for y in 0..b.size {
            if used[y] || b_stabs[y] != stabs[k] {
                continue;
            }
            let g = a.group();
            let mut assigned = Vec::new();
            for e in 0..g.order() {
                let x = a.act(e, reps[k]);
                if f[x] == usize::MAX {
                    f[x] = b.act(e, y);
                    used[f[x]] = true;
                    assigned.push(x);
                }
            }
            rec(k + 1, a, b, reps, stabs, b_stabs, f, used, out, limit);
            for x in assigned {
                used[f[x]] = false;
                f[x] = usize::MAX;
            }
        }
    }
    rec(0, a, b, &reps, &stabs, &b_stabs, &mut f, &mut used, &mut out, limit);
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Bi-sets

/// A finite set with a left `Γ` action and a commuting right `Q` action.
#[derive(Clone, Debug)]
pub struct BiSet {
    left: Group,
    right: Group,
    size: usize,
    l: Vec<Perm>,
    /// `r[s]` sends `x` to `x·s`.
    r: Vec<Perm>,
}

impl PartialEq for BiSet {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.left, &other.left)
            && same_group(&self.right, &other.right)
            && self.l == other.l
            && self.r == other.r
    }
}

/// Wire form of a bi-set: generator images of both actions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiSetSpec {
    pub points: usize,
    pub left: Vec<Perm>,
    #[serde(default)]
    pub right: Vec<Perm>,
}

impl BiSet {
    pub fn new(
        left: &Group,
        right: &Group,
        size: usize,
        left_gens: &[Perm],
        right_gens: &[Perm],
    ) -> Result<BiSet> {
        let l = tabulate(left, size, left.generators(), left_gens, false)?;
        let r = tabulate(right, size, right.generators(), right_gens, true)?;
        let b = BiSet { left: left.clone(), right: right.clone(), size, l, r };
        b.check_commuting()?;
        Ok(b)
    }

    pub fn from_spec(left: &Group, right: &Group, spec: &BiSetSpec) -> Result<BiSet> {
        let right_gens = if spec.right.is_empty() && right.generators().is_empty() {
            vec![]
        } else {
            spec.right.clone()
        };
        BiSet::new(left, right, spec.points, &spec.left, &right_gens)
    }

    pub fn spec(&self) -> BiSetSpec {
        BiSetSpec {
            points: self.size,
            left: self.left.generators().iter().map(|&g| self.l[g].clone()).collect(),
            right: self.right.generators().iter().map(|&g| self.r[g].clone()).collect(),
        }
    }

    pub(crate) fn from_tables(left: &Group, right: &Group, size: usize, l: Vec<Perm>, r: Vec<Perm>) -> BiSet {
        let b = BiSet { left: left.clone(), right: right.clone(), size, l, r };
        debug_assert!(b.check_commuting().is_ok());
        b
    }

    /// Inverse of [`BiSet::combined`]: reads `x·s` as `(1, s^{-1})·x`.
    pub fn from_combined(dp: &DirectProduct, x: &GSet) -> Result<BiSet> {
        ensure_same(&dp.group, x.group(), "combined action")?;
        if dp.factors.len() != 2 {
            return Err(Error::InvalidInput("expected a product of two groups".into()));
        }
        let (left, right) = (&dp.factors[0], &dp.factors[1]);
        let l = (0..left.order()).map(|g| x.perm(dp.element_of(&[g, 0])).clone()).collect();
        let r = (0..right.order())
            .map(|s| x.perm(dp.element_of(&[0, right.inv(s)])).clone())
            .collect();
        Ok(BiSet::from_tables(left, right, x.size(), l, r))
    }

    fn check_commuting(&self) -> Result<()> {
        for &g in self.left.generators() {
            for &s in self.right.generators() {
                for x in 0..self.size {
                    if self.r[s].image(self.l[g].image(x)) != self.l[g].image(self.r[s].image(x)) {
                        return Err(Error::ActionMismatch(format!(
                            "left and right actions disagree at point {x}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// A left G-set viewed as a bi-set with the given right group acting trivially.
    pub fn from_gset(x: &GSet, right: &Group) -> BiSet {
        BiSet {
            left: x.group().clone(),
            right: right.clone(),
            size: x.size(),
            l: x.action.clone(),
            r: vec![Perm::identity(x.size()); right.order()],
        }
    }

    /// `Q` acting on itself by right multiplication, `Γ` acting trivially.
    pub fn right_regular(left: &Group, right: &Group) -> BiSet {
        let n = right.order();
        let r = (0..n)
            .map(|s| Perm::from_images_unchecked((0..n).map(|x| right.mul(x, s) as u32).collect()))
            .collect();
        BiSet { left: left.clone(), right: right.clone(), size: n, l: vec![Perm::identity(n); left.order()], r }
    }

    pub fn left_group(&self) -> &Group {
        &self.left
    }

    pub fn right_group(&self) -> &Group {
        &self.right
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act_left(&self, g: usize, x: usize) -> usize {
        self.l[g].image(x)
    }

    #[inline]
    pub fn act_right(&self, x: usize, s: usize) -> usize {
        self.r[s].image(x)
    }

    pub fn left_perm(&self, g: usize) -> &Perm {
        &self.l[g]
    }

    pub fn right_perm(&self, s: usize) -> &Perm {
        &self.r[s]
    }

    pub fn left_gset(&self) -> GSet {
        GSet { group: self.left.clone(), action: self.l.clone(), size: self.size }
    }

    /// The combined action of `Γ × Q` given by `(γ, t)·x = γ·x·t^{-1}`.
    pub fn combined(&self, caps: &Caps) -> Result<(DirectProduct, GSet)> {
        let dp = DirectProduct::new(&[self.left.clone(), self.right.clone()], caps.materialize)?;
        let action = (0..dp.group.order())
            .map(|e| {
                let c = dp.components(e);
                let tinv = self.right.inv(c[1]);
                self.r[tinv].compose(&self.l[c[0]])
            })
            .collect();
        let g = GSet { group: dp.group.clone(), action, size: self.size };
        Ok((dp, g))
    }

    /// Orbits under both actions.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut gens: Vec<&Perm> = self.left.generators().iter().map(|&g| &self.l[g]).collect();
        gens.extend(self.right.generators().iter().map(|&s| &self.r[s]));
        orbits_of(self.size, &gens)
    }

    /// Points `x` with `h·x·σ(h)^{-1} = x` for all `h`, where `inc: H -> Γ`.
    pub fn twisted_fixed_points(&self, inc: &GroupHom, sigma: &GroupHom) -> Vec<usize> {
        let gens = inc.source.generators();
        (0..self.size)
            .filter(|&x| {
                gens.iter().all(|&h| {
                    let hx = self.act_left(inc.map[h], x);
                    hx == self.act_right(x, sigma.map[h])
                })
            })
            .collect()
    }

    /// Orbits of `h * x = h·x·σ(h)^{-1}` restricted to a subset of points
    /// that the twisted action preserves.
    pub fn twisted_orbits(&self, inc: &GroupHom, sigma: &GroupHom, points: &[usize]) -> Vec<Vec<usize>> {
        let perms: Vec<Perm> = inc
            .source
            .generators()
            .iter()
            .map(|&h| {
                let sinv = self.right.inv(sigma.map[h]);
                self.r[sinv].compose(&self.l[inc.map[h]])
            })
            .collect();
        let refs: Vec<&Perm> = perms.iter().collect();
        let all = orbits_of(self.size, &refs);
        let inside: std::collections::HashSet<usize> = points.iter().copied().collect();
        all.into_iter().filter(|o| inside.contains(&o[0])).collect()
    }

    /// Cartesian product with diagonal actions, point `(x, y)` numbered `x * |other| + y`.
    pub fn product_with(&self, other: &BiSet) -> Result<BiSet> {
        ensure_same(&self.left, &other.left, "product of bi-sets (left)")?;
        ensure_same(&self.right, &other.right, "product of bi-sets (right)")?;
        let m = other.size;
        let prod = |a: &Perm, b: &Perm| {
            Perm::from_images_unchecked((0..self.size * m).map(|p| (a.image(p / m) * m + b.image(p % m)) as u32).collect())
        };
        let l = self.l.iter().zip(&other.l).map(|(a, b)| prod(a, b)).collect();
        let r = self.r.iter().zip(&other.r).map(|(a, b)| prod(a, b)).collect();
        Ok(BiSet::from_tables(&self.left, &self.right, self.size * m, l, r))
    }

    pub fn disjoint_union(&self, other: &BiSet) -> Result<BiSet> {
        ensure_same(&self.left, &other.left, "disjoint union of bi-sets (left)")?;
        ensure_same(&self.right, &other.right, "disjoint union of bi-sets (right)")?;
        Ok(BiSet {
            left: self.left.clone(),
            right: self.right.clone(),
            size: self.size + other.size,
            l: self.l.iter().zip(&other.l).map(|(a, b)| a.direct_sum(b)).collect(),
            r: self.r.iter().zip(&other.r).map(|(a, b)| a.direct_sum(b)).collect(),
        })
    }

    /// Restriction of both actions along homomorphisms into them.
    pub fn restrict(&self, left: &GroupHom, right: &GroupHom) -> Result<BiSet> {
        ensure_same(&left.target, &self.left, "left restriction")?;
        ensure_same(&right.target, &self.right, "right restriction")?;
        Ok(BiSet {
            left: left.source.clone(),
            right: right.source.clone(),
            size: self.size,
            l: left.map.iter().map(|&g| self.l[g].clone()).collect(),
            r: right.map.iter().map(|&s| self.r[s].clone()).collect(),
        })
    }

    /// Sub-bi-set on a stable subset, relabelled in increasing order.
    pub fn restrict_points(&self, points: &[usize]) -> Result<(BiSet, Vec<usize>)> {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        let pos: HashMap<usize, usize> = pts.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let sub = |p: &Perm| -> Result<Perm> {
            let imgs: Option<Vec<u32>> = pts.iter().map(|&x| pos.get(&p.image(x)).map(|&i| i as u32)).collect();
            Ok(Perm::from_images_unchecked(
                imgs.ok_or_else(|| Error::InvalidInput("subset is not stable".into()))?,
            ))
        };
        let l = self.l.iter().map(sub).collect::<Result<Vec<_>>>()?;
        let r = self.r.iter().map(sub).collect::<Result<Vec<_>>>()?;
        Ok((
            BiSet { left: self.left.clone(), right: self.right.clone(), size: pts.len(), l, r },
            pts,
        ))
    }
}

/// Transitive bi-sets `(Γ × Q)/L` of size at most `max_size`, one per
/// conjugacy class of `L`, ordered by class representative.
pub fn transitive_bisets(left: &Group, right: &Group, max_size: usize, caps: &Caps) -> Result<Vec<BiSet>> {
    let dp = DirectProduct::new(&[left.clone(), right.clone()], caps.materialize)?;
    let classes = crate::group::subgroup_classes(&dp.group, caps)?;
    let mut out = Vec::new();
    for cls in classes {
        if cls[0].index() <= max_size {
            out.push(BiSet::from_combined(&dp, &GSet::coset_space(&cls[0]))?);
        }
    }
    Ok(out)
}

/// Bi-sets of size at most `max_size` up to isomorphism: disjoint unions of
/// transitive ones taken as multisets, ordered by size then by multiset.
pub fn biset_iso_classes(left: &Group, right: &Group, max_size: usize, caps: &Caps) -> Result<Vec<BiSet>> {
    let transitive = transitive_bisets(left, right, max_size, caps)?;
    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    let mut k = 0;
    while k < combos.len() {
        let c = combos[k].clone();
        k += 1;
        let size: usize = c.iter().map(|&i| transitive[i].size()).sum();
        let start = c.last().copied().unwrap_or(0);
        for (i, t) in transitive.iter().enumerate().skip(start) {
            if size + t.size() <= max_size {
                let mut c2 = c.clone();
                c2.push(i);
                combos.push(c2);
            }
        }
    }
    let mut keyed: Vec<(usize, Vec<usize>)> = combos
        .into_iter()
        .map(|c| (c.iter().map(|&i| transitive[i].size()).sum(), c))
        .collect();
    keyed.sort();
    keyed
        .into_iter()
        .map(|(size, c)| {
            let mut acc = BiSet::from_tables(
                left,
                right,
                0,
                vec![Perm::identity(0); left.order()],
                vec![Perm::identity(0); right.order()],
            );
            for i in c {
                acc = acc.disjoint_union(&transitive[i])?;
            }
            debug_assert_eq!(acc.size(), size);
            Ok(acc)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Based G-sets and indexed smash products

/// A G-set with a fixed basepoint.
#[derive(Clone, Debug, PartialEq)]
pub struct BasedGSet {
    pub set: GSet,
    pub basepoint: usize,
}

impl BasedGSet {
    pub fn new(set: GSet, basepoint: usize) -> Result<BasedGSet> {
        if basepoint >= set.size() {
            return Err(Error::InvalidInput("basepoint out of range".into()));
        }
        if (0..set.group().order()).any(|g| set.act(g, basepoint) != basepoint) {
            return Err(Error::InvalidInput("basepoint is not fixed".into()));
        }
        Ok(BasedGSet { set, basepoint })
    }

    /// `X_+`: a new fixed basepoint placed first.
    pub fn plus(x: &GSet) -> BasedGSet {
        let pt = GSet::trivial(x.group(), 1);
        BasedGSet { set: pt.disjoint_union(x).unwrap(), basepoint: 0 }
    }

    pub fn non_base_points(&self) -> Vec<usize> {
        (0..self.set.size()).filter(|&x| x != self.basepoint).collect()
    }

    /// `X ∧ Y`: basepoint first, then pairs of non-base points in lex order.
    pub fn smash(&self, other: &BasedGSet) -> Result<BasedGSet> {
        ensure_same(self.set.group(), other.set.group(), "smash product")?;
        let xs = self.non_base_points();
        let ys = other.non_base_points();
        let index = |x: usize, y: usize| -> usize {
            if x == self.basepoint || y == other.basepoint {
                0
            } else {
                1 + xs.binary_search(&x).unwrap() * ys.len() + ys.binary_search(&y).unwrap()
            }
        };
        let size = 1 + xs.len() * ys.len();
        let g = self.set.group();
        let mut gen_perms = Vec::new();
        for &e in g.generators() {
            let mut img = vec![0u32; size];
            for &x in &xs {
                for &y in &ys {
                    img[index(x, y)] = index(self.set.act(e, x), other.set.act(e, y)) as u32;
                }
            }
            gen_perms.push(Perm::from_images_unchecked(img));
        }
        let set = GSet::from_generator_images(g, size, g.generators(), &gen_perms)?;
        Ok(BasedGSet { set, basepoint: 0 })
    }
}

/// The indexed smash product `A^{(S)}` with its point labels.
#[derive(Clone, Debug)]
pub struct IndexedSmash {
    pub result: BasedGSet,
    /// Function values (`S -> A`) of each non-base point, in point order;
    /// index 0 is the basepoint and has an empty label.
    pub labels: Vec<Vec<usize>>,
}

impl IndexedSmash {
    pub fn point_of(&self, f: &[usize]) -> Option<usize> {
        self.labels.iter().skip(1).position(|l| l == f).map(|i| i + 1)
    }
}

/// Functions `S -> A` up to collapsing every function that hits the basepoint,
/// with `(g·f)(ζ) = g·f(g^{-1}ζ)`.
pub fn indexed_smash(a: &BasedGSet, s: &GSet, caps: &Caps) -> Result<IndexedSmash> {
    ensure_same(a.set.group(), s.group(), "indexed smash product")?;
    let vals = a.non_base_points();
    let k = s.size();
    let count = (vals.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if count >= caps.materialize as u128 {
        return Err(Error::EnumerationCapExceeded {
            what: "indexed smash product points".into(),
            needed: count.min(usize::MAX as u128) as usize,
            cap: caps.materialize,
        });
    }
    let mut labels: Vec<Vec<usize>> = vec![vec![]];
    if !vals.is_empty() || k == 0 {
        let mut f = vec![0usize; k];
        'odometer: loop {
            labels.push(f.iter().map(|&i| vals[i]).collect());
            for j in (0..k).rev() {
                f[j] += 1;
                if f[j] < vals.len() {
                    continue 'odometer;
                }
                f[j] = 0;
            }
            break;
        }
    }
    let lookup: HashMap<Vec<usize>, usize> =
        labels.iter().enumerate().skip(1).map(|(i, l)| (l.clone(), i)).collect();
    let g = s.group();
    let mut perms = Vec::new();
    for &e in g.generators() {
        let einv = g.inv(e);
        let mut img = vec![0u32; labels.len()];
        for (i, l) in labels.iter().enumerate().skip(1) {
            let h: Vec<usize> = (0..k).map(|z| a.set.act(e, l[s.act(einv, z)])).collect();
            img[i] = lookup[&h] as u32;
        }
        perms.push(Perm::from_images_unchecked(img));
    }
    let set = GSet::from_generator_images(g, labels.len(), g.generators(), &perms)?;
    Ok(IndexedSmash { result: BasedGSet { set, basepoint: 0 }, labels })
}

/// Orbit representatives `ζ_i` of `S` plus, for every point `ζ`, an element
/// `g_ζ` with `g_ζ·ζ_i = ζ` for the representative of its orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDecomposition {
    pub base_points: Vec<usize>,
    pub reps: Vec<usize>,
}

impl OrbitDecomposition {
    /// Smallest point of each orbit and lex-minimal transporters.
    pub fn canonical(s: &GSet) -> OrbitDecomposition {
        let orbits = s.orbits();
        let base_points: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
        let mut reps = vec![usize::MAX; s.size()];
        for &b in &base_points {
            for g in 0..s.group().order() {
                let z = s.act(g, b);
                if reps[z] == usize::MAX {
                    reps[z] = g;
                }
            }
        }
        OrbitDecomposition { base_points, reps }
    }
}

/// Result of the diagonal map `⋀_i A^{H_i} -> (A^{(S)})^G`.
#[derive(Clone, Debug)]
pub struct HhrDiagonal {
    /// Tuples `(a_1, ..., a_r)` of non-base `H_i`-fixed points, in lex order.
    pub domain: Vec<Vec<usize>>,
    /// Image point in `A^{(S)}` of each domain tuple.
    pub images: Vec<usize>,
    pub fixed_points: Vec<usize>,
    pub injective: bool,
    pub surjective: bool,
}

impl HhrDiagonal {
    pub fn is_bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

/// The diagonal `a_1 ∧ ... ∧ a_r -> (ζ -> g_ζ·a_i)` onto the fixed points of
/// the indexed smash product. Basepoints correspond, so only non-base points
/// are listed.
pub fn hhr_diagonal(a: &BasedGSet, s: &GSet, dec: &OrbitDecomposition, caps: &Caps) -> Result<HhrDiagonal> {
    let g = s.group();
    let orbits = s.orbits();
    if dec.reps.len() != s.size() || dec.base_points.len() != orbits.len() {
        return Err(Error::BadDecomposition("wrong number of points or orbits".into()));
    }
    let mut orbit_of = vec![usize::MAX; s.size()];
    for (i, &b) in dec.base_points.iter().enumerate() {
        let o = orbits
            .iter()
            .position(|o| o.contains(&b))
            .ok_or_else(|| Error::BadDecomposition("base point out of range".into()))?;
        for &z in &orbits[o] {
            if orbit_of[z] != usize::MAX {
                return Err(Error::BadDecomposition("two base points in one orbit".into()));
            }
            orbit_of[z] = i;
        }
    }
    for z in 0..s.size() {
        let r = dec.reps[z];
        if r >= g.order() || s.act(r, dec.base_points[orbit_of[z]]) != z {
            return Err(Error::BadDecomposition(format!("representative for point {z} is inconsistent")));
        }
    }
    let smash = indexed_smash(a, s, caps)?;
    let stabs: Vec<Subgroup> = dec.base_points.iter().map(|&b| s.stabilizer(b)).collect();
    let fixed_sets: Vec<Vec<usize>> = stabs
        .iter()
        .map(|h| a.set.fixed_points(h).into_iter().filter(|&x| x != a.basepoint).collect())
        .collect();
    let mut domain: Vec<Vec<usize>> = vec![vec![]];
    for fs in &fixed_sets {
        domain = domain
            .into_iter()
            .flat_map(|t| fs.iter().map(move |&x| {
                let mut t2 = t.clone();
                t2.push(x);
                t2
            }))
            .collect();
    }
    let images: Vec<usize> = domain
        .iter()
        .map(|t| {
            let f: Vec<usize> = (0..s.size()).map(|z| a.set.act(dec.reps[z], t[orbit_of[z]])).collect();
            smash.point_of(&f).expect("function avoids the basepoint")
        })
        .collect();
    let whole = g.whole();
    let fixed_points: Vec<usize> = smash
        .result
        .set
        .fixed_points(&whole)
        .into_iter()
        .filter(|&x| x != 0)
        .collect();
    let mut sorted = images.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let injective = sorted.len() == images.len();
    let surjective = sorted == fixed_points;
    Ok(HhrDiagonal { domain, images, fixed_points, injective, surjective })
}
