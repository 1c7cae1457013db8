//! Finite permutation groups, subgroup lattices and homomorphisms.
//!
//! Elements of a [`FinGroup`] are stored sorted lexicographically by one-line
//! notation, so element indices are canonical and the identity is index 0.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Caps, Error, Result};
use crate::perm::Perm;

pub type Group = Arc<FinGroup>;

const TABLE_LIMIT: usize = 512;

pub struct FinGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Option<Vec<u32>>,
    inv: Vec<usize>,
    orders: Vec<usize>,
    gens: Vec<usize>,
    hash: String,
}

impl fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinGroup(order {}, degree {}, {})", self.order(), self.degree, self.hash)
    }
}

/// Wire form of a group: a degree and generating permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Perm>,
}

impl FinGroup {
    /// Closes the generators under composition. Fails once the order passes `cap`.
    pub fn generate(degree: usize, gens: &[Perm], cap: usize) -> Result<Group> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::InvalidInput(format!(
                    "generator {:?} has degree {}, expected {degree}",
                    g.images(),
                    g.degree()
                )));
            }
        }
        let id = Perm::identity(degree);
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        let mut elems = Vec::new();
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = g.compose(&x);
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), ());
                    if seen.len() > cap {
                        return Err(Error::OrderCapExceeded { order: seen.len(), cap });
                    }
                    queue.push_back(y);
                }
            }
            elems.push(x);
        }
        Ok(Arc::new(FinGroup::from_closed(degree, elems)))
    }

    pub fn from_spec(spec: &GroupSpec, cap: usize) -> Result<Group> {
        FinGroup::generate(spec.degree, &spec.generators, cap)
    }

    /// Builds a group from a list already closed under composition.
    pub(crate) fn from_closed(degree: usize, mut elements: Vec<Perm>) -> FinGroup {
        elements.sort_unstable();
        elements.dedup();
        let n = elements.len();
        let index: HashMap<Perm, usize> =
            elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let table = if n <= TABLE_LIMIT {
            let mut t = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    t[i * n + j] = index[&elements[i].compose(&elements[j])] as u32;
                }
            }
            Some(t)
        } else {
            None
        };
        let inv = elements.iter().map(|p| index[&p.inverse()]).collect();
        let orders = elements.iter().map(|p| p.order()).collect();
        let mut g = FinGroup {
            degree,
            elements,
            index,
            table,
            inv,
            orders,
            gens: Vec::new(),
            hash: String::new(),
        };
        g.gens = g.greedy_generators();
        g.hash = g.compute_hash();
        g
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let n = self.order();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut gens = Vec::new();
        for i in 0..n {
            if inside[i] {
                continue;
            }
            gens.push(i);
            // Extend the current subgroup by closing under all generators.
            let mut queue: VecDeque<usize> = members.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = self.mul(g, x);
                    if !inside[y] {
                        inside[y] = true;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    fn compute_hash(&self) -> String {
        let spec = self.spec();
        let bytes = serde_json::to_vec(&spec).expect("group spec serializes");
        let digest = Sha256::digest(&bytes);
        hex::encode(&digest[..8])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.index[&self.elements[a].compose(&self.elements[b])],
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `b^{-1} a b`.
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.inv(b), self.mul(a, b))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(a, acc);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    /// Canonical generating set: greedily the lex-smallest elements not yet generated.
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec {
            degree: self.degree,
            generators: self.gens.iter().map(|&g| self.elements[g].clone()).collect(),
        }
    }

    /// Short content hash of the canonical generating set.
    pub fn content_hash(&self) -> &str {
        &self.hash
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gens;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(self: &Arc<Self>) -> Subgroup {
        Subgroup::new_unchecked(self.clone(), (0..self.order()).collect())
    }

    pub fn trivial_subgroup(self: &Arc<Self>) -> Subgroup {
        Subgroup::new_unchecked(self.clone(), vec![0])
    }

    /// Subgroup generated by the given elements.
    pub fn closure(self: &Arc<Self>, gens: &[usize]) -> Subgroup {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        Subgroup::new_unchecked(self.clone(), members)
    }

    /// Conjugacy classes of elements, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|b| self.conj(a, b)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &c in &cls {
                class_of[c] = out.len();
            }
            out.push(cls);
        }
        out
    }
}

pub fn same_group(a: &Group, b: &Group) -> bool {
    Arc::ptr_eq(a, b) || (a.degree == b.degree && a.elements == b.elements)
}

pub(crate) fn ensure_same(a: &Group, b: &Group, what: &str) -> Result<()> {
    if same_group(a, b) {
        Ok(())
    } else {
        Err(Error::GroupMismatch(what.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Standard groups

fn all_permutations(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..n as u32).collect();
    loop {
        out.push(Perm::from_images_unchecked(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn symmetric(n: usize) -> Group {
    Arc::new(FinGroup::from_closed(n, all_permutations(n)))
}

pub fn alternating(n: usize) -> Group {
    let elems = all_permutations(n)
        .into_iter()
        .filter(|p| p.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0)
        .collect();
    Arc::new(FinGroup::from_closed(n, elems))
}

pub fn trivial() -> Group {
    symmetric(1)
}

pub fn cyclic(n: usize) -> Group {
    assert!(n >= 1, "cyclic group needs positive order");
    let elems = (0..n)
        .map(|k| Perm::from_images_unchecked((0..n).map(|i| ((i + k) % n) as u32).collect()))
        .collect();
    Arc::new(FinGroup::from_closed(n, elems))
}

/// Dihedral group of order `2n` acting on an `n`-gon, `n >= 3`.
pub fn dihedral(n: usize) -> Result<Group> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("dihedral group needs n >= 3, got {n}")));
    }
    let mut elems = Vec::new();
    for k in 0..n {
        elems.push(Perm::from_images_unchecked((0..n).map(|i| ((i + k) % n) as u32).collect()));
        elems.push(Perm::from_images_unchecked(
            (0..n).map(|i| ((k + n - i) % n) as u32).collect(),
        ));
    }
    Ok(Arc::new(FinGroup::from_closed(n, elems)))
}

/// Quaternion group in its left regular representation on 8 points.
pub fn quaternion() -> Group {
    // Units 1,i,j,k as 0..4; sign bit adds 4.
    fn mul_unit(a: usize, b: usize) -> (usize, bool) {
        const T: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        T[a][b]
    }
    let mul = |x: usize, y: usize| {
        let (u, neg) = mul_unit(x % 4, y % 4);
        let sign = (x / 4 + y / 4 + neg as usize) % 2;
        u + 4 * sign
    };
    let elems = (0..8)
        .map(|x| Perm::from_images_unchecked((0..8).map(|y| mul(x, y) as u32).collect()))
        .collect();
    Arc::new(FinGroup::from_closed(8, elems))
}

/// Direct product of groups acting on the disjoint union of their points.
pub struct DirectProduct {
    pub group: Group,
    pub factors: Vec<Group>,
    tuples: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl DirectProduct {
    pub fn new(factors: &[Group], cap: usize) -> Result<DirectProduct> {
        let size = factors.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.order()));
        let size = size.unwrap_or(usize::MAX);
        if size > cap {
            return Err(Error::OrderCapExceeded { order: size, cap });
        }
        let degree: usize = factors.iter().map(|f| f.degree()).sum();
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for f in factors {
            let mut next = Vec::with_capacity(tuples.len() * f.order());
            for t in &tuples {
                for e in 0..f.order() {
                    let mut t2 = t.clone();
                    t2.push(e);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let to_perm = |t: &Vec<usize>| {
            let mut p = Perm::identity(0);
            for (f, &e) in factors.iter().zip(t) {
                p = p.direct_sum(f.element(e));
            }
            p
        };
        let elems: Vec<Perm> = tuples.iter().map(to_perm).collect();
        let group = Arc::new(FinGroup::from_closed(degree, elems));
        let mut by_index = vec![Vec::new(); group.order()];
        for t in tuples {
            let idx = group.index_of(&to_perm(&t)).unwrap();
            by_index[idx] = t;
        }
        let lookup = by_index.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(DirectProduct { group, factors: factors.to_vec(), tuples: by_index, lookup })
    }

    pub fn components(&self, e: usize) -> &[usize] {
        &self.tuples[e]
    }

    pub fn element_of(&self, comps: &[usize]) -> usize {
        self.lookup[comps]
    }

    /// Projection onto factor `k` as a homomorphism.
    pub fn projection(&self, k: usize) -> GroupHom {
        GroupHom {
            source: self.group.clone(),
            target: self.factors[k].clone(),
            map: self.tuples.iter().map(|t| t[k]).collect(),
        }
    }

    /// Inclusion of factor `k` with identity elsewhere.
    pub fn inclusion(&self, k: usize) -> GroupHom {
        let map = (0..self.factors[k].order())
            .map(|e| {
                let mut t = vec![0; self.factors.len()];
                t[k] = e;
                self.element_of(&t)
            })
            .collect();
        GroupHom { source: self.factors[k].clone(), target: self.group.clone(), map }
    }
}

pub fn direct_product(factors: &[Group]) -> Group {
    DirectProduct::new(factors, usize::MAX).unwrap().group
}

/// Resolves names such as `C4`, `S3`, `A4`, `D4` (order 8), `Q8`, `V4`,
/// `C2xC2`, `C2^3` and `trivial`.
pub fn named(name: &str) -> Result<Group> {
    let name = name.trim();
    if name.contains('x') {
        let parts: Result<Vec<Group>> = name.split('x').map(named).collect();
        return Ok(direct_product(&parts?));
    }
    if let Some((base, exp)) = name.split_once('^') {
        let k: usize = exp
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad exponent in group name {name}")))?;
        let g = named(base)?;
        return Ok(direct_product(&vec![g; k]));
    }
    let bad = || Error::InvalidInput(format!("unknown group name {name}"));
    match name {
        "1" | "trivial" | "e" => return Ok(trivial()),
        "Q8" => return Ok(quaternion()),
        "Dic3" => return Ok(dicyclic12()),
        "V4" => return Ok(direct_product(&[cyclic(2), cyclic(2)])),
        _ => {}
    }
    let (head, num) = name.split_at(name.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
    let n: usize = num.parse().map_err(|_| bad())?;
    match head {
        "C" if (1..=64).contains(&n) => Ok(cyclic(n)),
        "S" | "Sigma" if n <= 8 => Ok(symmetric(n)),
        "A" if n <= 8 => Ok(alternating(n)),
        "D" => dihedral(n),
        _ => Err(bad()),
    }
}

// ---------------------------------------------------------------------------
// Subgroups

/// A subgroup given by its sorted member indices in the ambient group.
#[derive(Clone)]
pub struct Subgroup {
    group: Group,
    members: Vec<usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}
impl Eq for Subgroup {}
impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state)
    }
}
impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Subgroup {
    /// Order first, then lexicographic member list.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.members.len(), &self.members).cmp(&(other.members.len(), &other.members))
    }
}

impl Subgroup {
    pub(crate) fn new_unchecked(group: Group, members: Vec<usize>) -> Subgroup {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subgroup { group, members }
    }

    /// Validates closure of an arbitrary element set.
    pub fn from_members(group: &Group, members: &[usize]) -> Result<Subgroup> {
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if m.iter().any(|&x| x >= group.order()) {
            return Err(Error::NotASubgroup("element index out of range".into()));
        }
        let sub = Subgroup { group: group.clone(), members: m };
        if !sub.contains(0) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for &a in &sub.members {
            for &b in &sub.members {
                if !sub.contains(group.mul(a, b)) {
                    return Err(Error::NotASubgroup("not closed under products".into()));
                }
            }
        }
        Ok(sub)
    }

    pub fn from_perms(group: &Group, perms: &[Perm]) -> Result<Subgroup> {
        let idx: Option<Vec<usize>> = perms.iter().map(|p| group.index_of(p)).collect();
        let idx = idx.ok_or_else(|| Error::NotASubgroup("element not in group".into()))?;
        Ok(group.closure(&idx))
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.group.order() / self.members.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&a| other.contains(a))
    }

    /// `g^{-1} H g`.
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let mut m: Vec<usize> = self.members.iter().map(|&h| self.group.conj(h, g)).collect();
        m.sort_unstable();
        Subgroup::new_unchecked(self.group.clone(), m)
    }

    pub fn is_normal(&self) -> bool {
        self.group.generators().iter().all(|&g| self.conjugate(g) == *self)
    }

    pub fn normalizer(&self) -> Subgroup {
        let m: Vec<usize> =
            (0..self.group.order()).filter(|&g| self.conjugate(g) == *self).collect();
        Subgroup::new_unchecked(self.group.clone(), m)
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.generators();
        gens.extend(other.generators());
        self.group.closure(&gens)
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let m = self.members.iter().copied().filter(|&a| other.contains(a)).collect();
        Subgroup::new_unchecked(self.group.clone(), m)
    }

    /// Greedy generating set in member order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut cur = self.group.trivial_subgroup();
        for &a in &self.members {
            if !cur.contains(a) {
                gens.push(a);
                cur = self.group.closure(&gens);
            }
        }
        gens
    }

    /// Left coset representatives, lex-minimal in each coset, sorted.
    pub fn left_coset_reps(&self) -> Vec<usize> {
        let n = self.group.order();
        let mut seen = vec![false; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &h in &self.members {
                seen[self.group.mul(g, h)] = true;
            }
        }
        reps
    }

    /// The subgroup as a group in its own right, with its inclusion.
    pub fn to_group(&self) -> (Group, GroupHom) {
        let elems: Vec<Perm> = self.members.iter().map(|&a| self.group.element(a).clone()).collect();
        let sub = Arc::new(FinGroup::from_closed(self.group.degree(), elems));
        // Member order is lex order, so indices line up.
        let inc = GroupHom {
            source: sub.clone(),
            target: self.group.clone(),
            map: self.members.clone(),
        };
        (sub, inc)
    }
}

/// All subgroups sorted by (order, lex member set).
pub fn enumerate_subgroups(g: &Group, caps: &Caps) -> Result<Vec<Subgroup>> {
    caps.check_order(g.order())?;
    let mut cyclics: Vec<Subgroup> = (0..g.order()).map(|a| g.closure(&[a])).collect();
    cyclics.sort();
    cyclics.dedup();
    let mut found: std::collections::HashSet<Subgroup> = cyclics.iter().cloned().collect();
    let mut queue: VecDeque<Subgroup> = cyclics.iter().cloned().collect();
    while let Some(h) = queue.pop_front() {
        for c in &cyclics {
            if c.is_subgroup_of(&h) {
                continue;
            }
            let j = h.join(c);
            if !found.contains(&j) {
                found.insert(j.clone());
                queue.push_back(j);
            }
        }
    }
    let mut all: Vec<Subgroup> = found.into_iter().collect();
    all.sort();
    Ok(all)
}

/// Conjugacy classes of subgroups; each class lists its members sorted, the
/// first being the representative. Classes are ordered by representative.
pub fn subgroup_classes(g: &Group, caps: &Caps) -> Result<Vec<Vec<Subgroup>>> {
    let subs = enumerate_subgroups(g, caps)?;
    let mut assigned: std::collections::HashSet<Subgroup> = Default::default();
    let mut out = Vec::new();
    for h in subs {
        if assigned.contains(&h) {
            continue;
        }
        let mut cls: Vec<Subgroup> = (0..g.order()).map(|x| h.conjugate(x)).collect();
        cls.sort();
        cls.dedup();
        for c in &cls {
            assigned.insert(c.clone());
        }
        out.push(cls);
    }
    Ok(out)
}

/// Quotient by a normal subgroup, realized on left cosets by left multiplication.
pub fn quotient(n: &Subgroup) -> Result<(Group, GroupHom)> {
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    let g = n.group();
    let reps = n.left_coset_reps();
    let mut coset_of = vec![0usize; g.order()];
    for (ci, &r) in reps.iter().enumerate() {
        for &h in n.members() {
            coset_of[g.mul(r, h)] = ci;
        }
    }
    let k = reps.len();
    let perm_of = |x: usize| {
        Perm::from_images_unchecked(reps.iter().map(|&r| coset_of[g.mul(x, r)] as u32).collect())
    };
    let mut elems: Vec<Perm> = reps.iter().map(|&r| perm_of(r)).collect();
    elems.sort_unstable();
    let q = Arc::new(FinGroup::from_closed(k, elems));
    let map = (0..g.order()).map(|x| q.index_of(&perm_of(x)).unwrap()).collect();
    Ok((q.clone(), GroupHom { source: g.clone(), target: q, map }))
}

/// `N_G(H)/H` together with the data needed to act on `G/H`.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub normalizer: Subgroup,
    pub normalizer_group: Group,
    pub weyl: Group,
    /// Projection `N_G(H) -> W_G(H)` on the materialized normalizer.
    pub projection: GroupHom,
    /// For each Weyl element, the lex-minimal ambient element mapping to it.
    pub coset_reps: Vec<usize>,
}

pub fn weyl_group(h: &Subgroup) -> Result<WeylGroup> {
    let normalizer = h.normalizer();
    let (ng, inc) = normalizer.to_group();
    let h_in_n: Vec<usize> = h
        .members()
        .iter()
        .map(|&a| normalizer.members().binary_search(&a).unwrap())
        .collect();
    let h_sub = Subgroup::new_unchecked(ng.clone(), h_in_n);
    let (weyl, projection) = quotient(&h_sub)?;
    let mut coset_reps = vec![usize::MAX; weyl.order()];
    for x in 0..ng.order() {
        let w = projection.map[x];
        if coset_reps[w] == usize::MAX {
            coset_reps[w] = inc.map[x];
        }
    }
    Ok(WeylGroup { normalizer, normalizer_group: ng, weyl, projection, coset_reps })
}

// ---------------------------------------------------------------------------
// Homomorphisms

#[derive(Clone)]
pub struct GroupHom {
    pub source: Group,
    pub target: Group,
    /// Image of each source element index.
    pub map: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom{:?}", self.generator_images())
    }
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && same_group(&self.source, &other.source)
            && same_group(&self.target, &other.target)
    }
}
impl Eq for GroupHom {}

impl GroupHom {
    /// Extends images of `gens` to a homomorphism, checking well-definedness.
    pub fn extend(
        source: &Group,
        target: &Group,
        gens: &[usize],
        images: &[usize],
    ) -> Result<GroupHom> {
        match extend_partial(source, target, gens, images) {
            Some(map) if map.iter().all(|&x| x != usize::MAX) => Ok(GroupHom {
                source: source.clone(),
                target: target.clone(),
                map,
            }),
            Some(_) => Err(Error::NotAHomomorphism("generators do not generate the source".into())),
            None => Err(Error::NotAHomomorphism("generator images violate a relation".into())),
        }
    }

    pub fn from_generator_images(source: &Group, target: &Group, images: &[usize]) -> Result<GroupHom> {
        GroupHom::extend(source, target, source.generators(), images)
    }

    pub fn trivial(source: &Group, target: &Group) -> GroupHom {
        GroupHom { source: source.clone(), target: target.clone(), map: vec![0; source.order()] }
    }

    pub fn identity(g: &Group) -> GroupHom {
        GroupHom { source: g.clone(), target: g.clone(), map: (0..g.order()).collect() }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn generator_images(&self) -> Vec<usize> {
        self.source.generators().iter().map(|&g| self.map[g]).collect()
    }

    pub fn is_homomorphism(&self) -> bool {
        let s = &self.source;
        let t = &self.target;
        s.generators().iter().all(|&g| {
            (0..s.order()).all(|x| self.map[s.mul(g, x)] == t.mul(self.map[g], self.map[x]))
        })
    }

    pub fn kernel(&self) -> Subgroup {
        let m = (0..self.source.order()).filter(|&a| self.map[a] == 0).collect();
        Subgroup::new_unchecked(self.source.clone(), m)
    }

    pub fn image(&self) -> Subgroup {
        let mut m = self.map.clone();
        m.sort_unstable();
        m.dedup();
        Subgroup::new_unchecked(self.target.clone(), m)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().order() == 1
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        }
    }

    /// Restriction along an inclusion `inc: K -> source`.
    pub fn restrict(&self, inc: &GroupHom) -> GroupHom {
        inc.then(self)
    }

    /// `x -> b^{-1} self(x) b`.
    pub fn conjugate_by(&self, b: usize) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.iter().map(|&x| self.target.conj(x, b)).collect(),
        }
    }
}

/// Labels the Cayley graph from the identity; `None` if inconsistent.
/// Unreached elements are left as `usize::MAX`.
fn extend_partial(source: &Group, target: &Group, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; source.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&g, &y) in gens.iter().zip(images) {
            let gx = source.mul(g, x);
            let val = target.mul(y, map[x]);
            if map[gx] == usize::MAX {
                map[gx] = val;
                queue.push_back(gx);
            } else if map[gx] != val {
                return None;
            }
        }
    }
    Some(map)
}

/// All homomorphisms `A -> B`, ordered lexicographically by the images of the
/// canonical generators of `A`.
pub fn enumerate_homs(a: &Group, b: &Group, caps: &Caps) -> Result<Vec<GroupHom>> {
    let needed = a.order().saturating_mul(b.order());
    if needed > caps.hom_candidates {
        return Err(Error::EnumerationCapExceeded {
            what: "homomorphisms".into(),
            needed,
            cap: caps.hom_candidates,
        });
    }
    let gens = a.generators().to_vec();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let og = a.element_order(g);
            (0..b.order()).filter(|&y| og.is_multiple_of(b.element_order(y))).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    fn rec(
        a: &Group,
        b: &Group,
        gens: &[usize],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        out: &mut Vec<GroupHom>,
    ) {
        let k = images.len();
        if k == gens.len() {
            let map = extend_partial(a, b, gens, images).expect("checked at each level");
            out.push(GroupHom { source: a.clone(), target: b.clone(), map });
            return;
        }
        for &y in &candidates[k] {
            images.push(y);
            if extend_partial(a, b, &gens[..=k], images).is_some() {
                rec(a, b, gens, candidates, images, out);
            }
            images.pop();
        }
    }
    rec(a, b, &gens, &candidates, &mut images, &mut out);
    Ok(out)
}

/// Orbits of `B`-conjugation on a list of homomorphisms `A -> B`. Each class is
/// a sorted list of positions into `homs`; classes are ordered by their first
/// (lex-minimal) member.
pub fn hom_conjugacy_classes(homs: &[GroupHom]) -> Result<Vec<Vec<usize>>> {
    let Some(first) = homs.first() else {
        return Ok(Vec::new());
    };
    for h in homs {
        if !same_group(&h.source, &first.source) || !same_group(&h.target, &first.target) {
            return Err(Error::MixedSignature("homomorphisms have different signatures".into()));
        }
    }
    let b = &first.target;
    let pos: HashMap<Vec<usize>, usize> =
        homs.iter().enumerate().map(|(i, h)| (h.generator_images(), i)).collect();
    let mut order: Vec<usize> = (0..homs.len()).collect();
    order.sort_by_key(|&i| homs[i].generator_images());
    let mut class_of = vec![usize::MAX; homs.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        if class_of[i] != usize::MAX {
            continue;
        }
        let mut cls = Vec::new();
        for x in 0..b.order() {
            let key = homs[i].conjugate_by(x).generator_images();
            if let Some(&j) = pos.get(&key) {
                if class_of[j] == usize::MAX {
                    class_of[j] = out.len();
                    cls.push(j);
                }
            }
        }
        cls.sort_by_key(|&j| homs[j].generator_images());
        out.push(cls);
    }
    Ok(out)
}

/// An isomorphism `A -> B` if one exists.
pub fn find_isomorphism(a: &Group, b: &Group, caps: &Caps) -> Result<Option<GroupHom>> {
    if a.order() != b.order() {
        return Ok(None);
    }
    Ok(enumerate_homs(a, b, caps)?.into_iter().find(|h| h.is_injective()))
}

/// Dicyclic group of order 12, `C3 ⋊ C4`, on 7 points.
pub fn dicyclic12() -> Group {
    let a = Perm::from_images_unchecked(vec![1, 2, 0, 3, 4, 5, 6]);
    let b = Perm::from_images_unchecked(vec![0, 2, 1, 4, 5, 6, 3]);
    FinGroup::generate(7, &[a, b], 12).expect("order 12")
}

/// Groups up to isomorphism of each order up to 12, for test grids.
pub fn small_groups(max_order: usize) -> Vec<(String, Group)> {
    let names = [
        "1", "C2", "C3", "C4", "V4", "C5", "C6", "S3", "C7", "C8", "C4xC2", "C2^3", "D4", "Q8", "C9",
        "C3xC3", "C10", "D5", "C11", "C12", "C6xC2", "A4", "D6", "Dic3",
    ];
    names
        .iter()
        .map(|n| (n.to_string(), named(n).unwrap()))
        .filter(|(_, g)| g.order() <= max_order)
        .collect()
}

/// Counts elements by order, used for cheap isomorphism invariants.
pub fn order_statistics(g: &FinGroup) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for a in 0..g.order() {
        *m.entry(g.element_order(a)).or_insert(0) += 1;
    }
    m
}

/// All automorphisms of `g`, ordered like `enumerate_homs`.
pub fn automorphisms(g: &Group, caps: &Caps) -> Result<Vec<GroupHom>> {
    Ok(enumerate_homs(g, g, caps)?.into_iter().filter(|h| h.is_injective()).collect())
}

// ---------------------------------------------------------------------------
// Cyclic tower

/// The cyclic subgroup `C_m(n)` of order `m` in the circle `T(n) = R/nZ`,
/// generated by `n/m`. Only `m` determines the group; `n` is tower metadata.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicTower {
    pub n: usize,
    pub m: usize,
}

impl CyclicTower {
    pub fn new(n: usize, m: usize) -> Result<CyclicTower> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidInput("tower labels must be positive".into()));
        }
        Ok(CyclicTower { n, m })
    }

    /// Element index `k` is the rotation `k * n/m`; index 1 is the canonical generator.
    pub fn group(&self) -> Group {
        cyclic(self.m)
    }

    /// `C_l(n)` as a subgroup of `C_m(n)`; needs `l | m`.
    pub fn subgroup(&self, l: usize) -> Result<Subgroup> {
        if l == 0 || !self.m.is_multiple_of(l) {
            return Err(Error::DivisibilityViolation(format!("{l} does not divide {}", self.m)));
        }
        let g = self.group();
        let step = self.m / l;
        Subgroup::from_members(&g, &(0..l).map(|k| k * step).collect::<Vec<_>>())
    }

    /// Image under `T(n) -> T(n)/C_l(n) = T(n/l)`.
    pub fn quotient_label(&self, l: usize) -> Result<CyclicTower> {
        if l == 0 || !self.m.is_multiple_of(l) || !self.n.is_multiple_of(l) {
            return Err(Error::DivisibilityViolation(format!(
                "need {l} | {} and {l} | {}",
                self.m, self.n
            )));
        }
        CyclicTower::new(self.n / l, self.m / l)
    }

    /// Pullback along the k-th root `T(kn) -> T(n)`: `C_m(n)` corresponds to `C_{km}(kn)`
    /// containing the kernel `C_k(kn)`.
    pub fn stretch(&self, k: usize) -> CyclicTower {
        CyclicTower { n: k * self.n, m: k * self.m }
    }
}

/// The canonical isomorphism `C_m(n)/C_l(n) -> C_{m/l}(n/l)`, sending the coset of the
/// generator `n/m` to the generator `(n/l)/(m/l)`.
pub fn cyclic_quotient_iso(m: usize, l: usize, n: usize) -> Result<GroupHom> {
    let tower = CyclicTower::new(n, m)?;
    let target_label = tower.quotient_label(l)?;
    let (quo, proj) = quotient(&tower.subgroup(l)?)?;
    let target = target_label.group();
    let gen_image = if target.order() == 1 { 0 } else { 1 };
    GroupHom::extend(&quo, &target, &[proj.apply(1 % m)], &[gen_image])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_index_zero_and_elements_sorted() {
        for (_, g) in small_groups(8) {
            assert!(g.element(0).is_identity());
            assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn subgroup_counts() {
        let caps = Caps::default();
        let s3 = symmetric(3);
        assert_eq!(enumerate_subgroups(&s3, &caps).unwrap().len(), 6);
        assert_eq!(subgroup_classes(&s3, &caps).unwrap().len(), 4);
        let s4 = symmetric(4);
        assert_eq!(enumerate_subgroups(&s4, &caps).unwrap().len(), 30);
        assert_eq!(subgroup_classes(&s4, &caps).unwrap().len(), 11);
        assert_eq!(enumerate_subgroups(&cyclic(6), &caps).unwrap().len(), 4);
        assert_eq!(enumerate_subgroups(&named("D4").unwrap(), &caps).unwrap().len(), 10);
        assert_eq!(enumerate_subgroups(&quaternion(), &caps).unwrap().len(), 6);
    }

    #[test]
    fn subgroup_cap_is_enforced() {
        let caps = Caps::default();
        let err = enumerate_subgroups(&symmetric(5), &caps).unwrap_err();
        assert!(matches!(err, Error::OrderCapExceeded { order: 120, cap: 24 }));
    }

    #[test]
    fn weyl_group_orders() {
        let caps = Caps::default();
        let s3 = symmetric(3);
        let orders: Vec<usize> = subgroup_classes(&s3, &caps)
            .unwrap()
            .iter()
            .map(|c| weyl_group(&c[0]).unwrap().weyl.order())
            .collect();
        assert_eq!(orders, vec![6, 1, 2, 1]);
        let w = weyl_group(&s3.whole()).unwrap();
        assert_eq!(w.weyl.order(), 1);
    }

    #[test]
    fn hom_counts() {
        let caps = Caps::default();
        assert_eq!(enumerate_homs(&cyclic(2), &cyclic(2), &caps).unwrap().len(), 2);
        assert_eq!(enumerate_homs(&cyclic(3), &symmetric(3), &caps).unwrap().len(), 3);
        assert_eq!(enumerate_homs(&symmetric(3), &cyclic(2), &caps).unwrap().len(), 2);
        assert_eq!(enumerate_homs(&cyclic(4), &cyclic(2), &caps).unwrap().len(), 2);
        // |Hom(V4, S3)| = 1 + 3 * 3
        let v4 = named("V4").unwrap();
        assert_eq!(enumerate_homs(&v4, &symmetric(3), &caps).unwrap().len(), 10);
    }

    #[test]
    fn hom_classes_of_c2_into_s3() {
        let caps = Caps::default();
        let homs = enumerate_homs(&cyclic(2), &symmetric(3), &caps).unwrap();
        let classes = hom_conjugacy_classes(&homs).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes.iter().map(|c| c.len()).collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn mixed_signature_rejected() {
        let caps = Caps::default();
        let mut homs = enumerate_homs(&cyclic(2), &symmetric(3), &caps).unwrap();
        homs.extend(enumerate_homs(&cyclic(3), &symmetric(3), &caps).unwrap());
        assert!(matches!(hom_conjugacy_classes(&homs), Err(Error::MixedSignature(_))));
    }

    #[test]
    fn isomorphism_detection() {
        let caps = Caps::default();
        assert!(find_isomorphism(&dihedral(3).unwrap(), &symmetric(3), &caps).unwrap().is_some());
        assert!(find_isomorphism(&cyclic(6), &symmetric(3), &caps).unwrap().is_none());
        assert!(find_isomorphism(&named("C2xC3").unwrap(), &cyclic(6), &caps).unwrap().is_some());
    }

    #[test]
    fn quotient_of_s3_by_a3() {
        let s3 = symmetric(3);
        let a3 = s3.closure(&[s3.index_of(&Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()).unwrap()]);
        let (q, p) = quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        assert!(p.is_homomorphism());
        assert_eq!(p.kernel(), a3);
    }

    #[test]
    fn named_groups_have_expected_orders() {
        let expect = [("C5", 5), ("S4", 24), ("A4", 12), ("D4", 8), ("Q8", 8), ("C2^3", 8), ("C2xC3", 6)];
        for (n, o) in expect {
            assert_eq!(named(n).unwrap().order(), o, "{n}");
        }
        assert!(named("X9").is_err());
    }

    #[test]
    fn cyclic_quotient_isos() {
        let h = cyclic_quotient_iso(4, 2, 2).unwrap();
        assert_eq!(h.source.order(), 2);
        assert!(h.is_injective() && h.target.order() == 2);
        let h = cyclic_quotient_iso(2, 1, 2).unwrap();
        assert_eq!(h.map, vec![0, 1]);
        assert!(matches!(cyclic_quotient_iso(6, 4, 4), Err(Error::DivisibilityViolation(_))));
        assert!(matches!(cyclic_quotient_iso(4, 2, 3), Err(Error::DivisibilityViolation(_))));
    }

    #[test]
    fn automorphism_counts() {
        let caps = Caps::default();
        assert_eq!(automorphisms(&cyclic(8), &caps).unwrap().len(), 4);
        assert_eq!(automorphisms(&named("V4").unwrap(), &caps).unwrap().len(), 6);
        assert_eq!(automorphisms(&symmetric(3), &caps).unwrap().len(), 6);
        assert_eq!(automorphisms(&named("D4").unwrap(), &caps).unwrap().len(), 8);
    }
}
