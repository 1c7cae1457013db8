//! Irreducible homomorphisms `Λ -> Σ_q ≀ Q`, block sums, centralizers and
//! the summand catalog of fixed points of symmetric powers.
//!
//! A homomorphism `σ` is the same thing as a `(Λ, Q)`-bi-set
//! `X_σ = {0..q} × Q` that is free on the right, with
//! `λ·(i, u) = (s(λ)(i), a_{s(λ)(i)}(λ)·u)`. Conjugators are bi-set
//! isomorphisms and centralizers are automorphism groups; irreducible
//! classes correspond to conjugacy classes of graph subgroups
//! `{(h, α(h))} ≤ Λ × Q`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bundle::BundleData;
use crate::error::{Caps, Error, Result};
use crate::group::{enumerate_homs, ensure_same, same_group, subgroup_classes, symmetric, Group, GroupHom, Subgroup};
use crate::perm::Perm;
use crate::wreath::{enumerate_wreath_homs, Wreath, WreathElem, WreathHom};

/// The irreducible homomorphism induced from `α: H -> Q`, using the
/// smallest left coset representatives `ℓ_i` of `H` (so `ℓ_0 = 1`):
/// `s(λ)(i) = j` when `λℓ_i ∈ ℓ_j H`, and
/// `a_j(λ) = α(ℓ_j^{-1} λ ℓ_{s(λ)^{-1}(j)})`.
pub fn induced_wreath_hom(h: &Subgroup, alpha: &GroupHom) -> Result<WreathHom> {
    let lam = h.group();
    if alpha.source.order() != h.order() {
        return Err(Error::GroupMismatch("α must be defined on H".into()));
    }
    let reps = h.left_coset_reps();
    let q = reps.len();
    let mut coset_of = vec![0usize; lam.order()];
    for (i, &l) in reps.iter().enumerate() {
        for &x in h.members() {
            coset_of[lam.mul(l, x)] = i;
        }
    }
    let wreath = Wreath::new(q, &alpha.target);
    let mut s_tab = Vec::with_capacity(lam.order());
    let mut a_tab = Vec::with_capacity(lam.order());
    for l in 0..lam.order() {
        let img: Vec<usize> = reps.iter().map(|&r| coset_of[lam.mul(l, r)]).collect();
        let s = Perm::from_usize(&img).expect("left multiplication permutes cosets");
        let sinv = s.inverse();
        let a = (0..q)
            .map(|j| {
                let k = sinv.image(j);
                let x = lam.mul(lam.inv(reps[j]), lam.mul(l, reps[k]));
                let hi = h.members().binary_search(&x).expect("element lies in H");
                alpha.map[hi]
            })
            .collect();
        s_tab.push(s);
        a_tab.push(a);
    }
    Ok(WreathHom { source: lam.clone(), wreath, s: s_tab, a: a_tab })
}

#[derive(Clone, Debug)]
pub struct IrreducibleClass {
    pub cardinality: usize,
    /// Stabilizer of the point `0`.
    pub subgroup: Subgroup,
    /// `a_0` restricted to the stabilizer.
    pub alpha: GroupHom,
    pub tau: WreathHom,
}

#[derive(Clone, Debug)]
pub struct IrreducibleCatalog {
    pub lambda: Group,
    pub q: Group,
    pub classes: Vec<IrreducibleClass>,
}

/// One representative per conjugacy class of irreducible homomorphisms,
/// sorted by (cardinality, generator images).
pub fn irreducible_catalog(lambda: &Group, q: &Group, caps: &Caps) -> Result<IrreducibleCatalog> {
    caps.check_order(lambda.order())?;
    caps.check_order(q.order())?;
    let mut classes = Vec::new();
    for cls in subgroup_classes(lambda, caps)? {
        let h = &cls[0];
        let (hg, _) = h.to_group();
        let norm = h.normalizer();
        let homs = enumerate_homs(&hg, q, caps)?;
        let key: HashMap<Vec<usize>, usize> = homs.iter().enumerate().map(|(i, a)| (a.map.clone(), i)).collect();
        let mut seen = vec![false; homs.len()];
        for start in 0..homs.len() {
            if seen[start] {
                continue;
            }
            // Orbit of α under (n, u): h -> u^{-1} α(n^{-1} h n) u.
            let mut orbit = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < orbit.len() {
                let a = &homs[orbit[k]];
                k += 1;
                for &n in norm.members() {
                    for u in 0..q.order() {
                        let map: Vec<usize> = h
                            .members()
                            .iter()
                            .map(|&x| {
                                let y = lambda.conj(x, lambda.inv(n));
                                let yi = h.members().binary_search(&y).unwrap();
                                q.conj(a.map[yi], u)
                            })
                            .collect();
                        let j = key[&map];
                        if !seen[j] {
                            seen[j] = true;
                            orbit.push(j);
                        }
                    }
                }
            }
            let best = *orbit.iter().min().unwrap();
            let alpha = homs[best].clone();
            let tau = induced_wreath_hom(h, &alpha)?;
            classes.push(IrreducibleClass { cardinality: h.index(), subgroup: h.clone(), alpha, tau });
        }
    }
    classes.sort_by_key(|x| (x.cardinality, x.tau.key()));
    Ok(IrreducibleCatalog { lambda: lambda.clone(), q: q.clone(), classes })
}

impl IrreducibleCatalog {
    pub fn cardinalities(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.cardinality).collect()
    }

    /// `τ(n) = τ_1^{⊕n_1} ⊕ ... ⊕ τ_T^{⊕n_T}`.
    pub fn tau(&self, n: &[usize]) -> Result<WreathHom> {
        if n.len() != self.classes.len() {
            return Err(Error::InvalidInput(format!("expected {} multiplicities", self.classes.len())));
        }
        let mut out = empty_hom(&self.lambda, &self.q);
        for (c, &k) in self.classes.iter().zip(n) {
            for _ in 0..k {
                out = out.block_sum(&c.tau)?;
            }
        }
        Ok(out)
    }

    /// All multiplicity vectors with `n·t = q`, in lex order.
    pub fn vectors_of_cardinality(&self, q: usize) -> Vec<Vec<usize>> {
        let t = self.cardinalities();
        let mut out = Vec::new();
        let mut cur = vec![0usize; t.len()];
        fn rec(t: &[usize], i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == t.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for k in 0..=left / t[i] {
                cur[i] = k;
                rec(t, i + 1, left - k * t[i], cur, out);
            }
            cur[i] = 0;
        }
        rec(&t, 0, q, &mut cur, &mut out);
        out.sort();
        out
    }
}

fn empty_hom(lambda: &Group, q: &Group) -> WreathHom {
    WreathHom {
        source: lambda.clone(),
        wreath: Wreath::new(0, q),
        s: vec![Perm::identity(0); lambda.order()],
        a: vec![Vec::new(); lambda.order()],
    }
}

/// Left action tables of `Λ` on `X_σ`, points indexed `i·|Q| + u`.
fn biset_tables(sigma: &WreathHom) -> Vec<Vec<usize>> {
    let qg = sigma.base();
    let n = qg.order();
    (0..sigma.source.order())
        .map(|l| {
            let mut img = vec![0usize; sigma.q() * n];
            for i in 0..sigma.q() {
                let j = sigma.s[l].image(i);
                let a = sigma.a[l][j];
                for u in 0..n {
                    img[i * n + u] = j * n + qg.mul(a, u);
                }
            }
            img
        })
        .collect()
}

/// Extends `x0 -> y0` to an isomorphism from the orbit of `x0` in `X_from`
/// into `X_to`, filling `phi`; returns false on inconsistency.
fn extend_iso(
    from: &[Vec<usize>],
    to: &[Vec<usize>],
    qg: &Group,
    gens: &[usize],
    x0: usize,
    y0: usize,
    phi: &mut [usize],
) -> bool {
    let n = qg.order();
    let right = |x: usize, u: usize| (x / n) * n + qg.mul(x % n, u);
    let mut stack = vec![(x0, y0)];
    let mut touched = Vec::new();
    let ok = 'outer: loop {
        let Some((x, y)) = stack.pop() else { break true };
        if phi[x] != usize::MAX {
            if phi[x] != y {
                break 'outer false;
            }
            continue;
        }
        phi[x] = y;
        touched.push(x);
        for &g in gens {
            stack.push((from[g][x], to[g][y]));
        }
        for &u in qg.generators() {
            stack.push((right(x, u), right(y, u)));
        }
    };
    if !ok {
        for x in touched {
            phi[x] = usize::MAX;
        }
    }
    ok
}

fn wreath_elem_of_iso(phi: &[usize], q: usize, qg: &Group) -> WreathElem {
    let n = qg.order();
    let mut s = vec![0usize; q];
    let mut a = vec![0usize; q];
    for i in 0..q {
        let y = phi[i * n];
        s[i] = y / n;
        a[y / n] = y % n;
    }
    WreathElem { a, s: Perm::from_usize(&s).expect("isomorphism permutes blocks") }
}

/// Some `w` with `w^{-1} σ(λ) w = τ(λ)` for all `λ`, if one exists.
pub fn find_conjugator(sigma: &WreathHom, tau: &WreathHom) -> Result<Option<WreathElem>> {
    if !same_group(&sigma.source, &tau.source) || !same_group(sigma.base(), tau.base()) {
        return Err(Error::MixedSignature("conjugacy across different signatures".into()));
    }
    if sigma.q() != tau.q() {
        return Ok(None);
    }
    let qg = sigma.base().clone();
    let n = qg.order();
    let size = sigma.q() * n;
    // φ: X_τ -> X_σ with φ(τ(λ)x) = σ(λ)φ(x) is the element w.
    let from = biset_tables(tau);
    let to = biset_tables(sigma);
    let gens: Vec<usize> = tau.source.generators().to_vec();
    let from_orbits = tau.orbits();
    let mut phi = vec![usize::MAX; size];
    let mut used = vec![false; sigma.q()];
    fn rec(
        k: usize,
        orbits: &[Vec<usize>],
        target_orbit: &[usize],
        from: &[Vec<usize>],
        to: &[Vec<usize>],
        qg: &Group,
        gens: &[usize],
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == orbits.len() {
            return true;
        }
        let n = qg.order();
        let x0 = orbits[k][0] * n;
        for i in 0..used.len() {
            if used[i] || target_orbit[i] != i {
                continue;
            }
            for u in 0..n {
                let snapshot = phi.clone();
                if extend_iso(from, to, qg, gens, x0, i * n + u, phi) {
                    // The image must be a whole unused orbit of the same size.
                    let img: HashSet<usize> = orbits[k].iter().map(|&p| phi[p * n] / n).collect();
                    if img.len() == orbits[k].len() && img.iter().all(|&j| !used[j]) {
                        for &j in &img {
                            used[j] = true;
                        }
                        if rec(k + 1, orbits, target_orbit, from, to, qg, gens, phi, used) {
                            return true;
                        }
                        for &j in &img {
                            used[j] = false;
                        }
                    }
                }
                *phi = snapshot;
            }
        }
        false
    }
    // Only try orbit minima as first images; every orbit is hit through them.
    let mut target_orbit = vec![0usize; sigma.q()];
    for o in sigma.orbits() {
        for &i in &o {
            target_orbit[i] = i;
        }
    }
    if !rec(0, &from_orbits, &target_orbit, &from, &to, &qg, &gens, &mut phi, &mut used) {
        return Ok(None);
    }
    let w = wreath_elem_of_iso(&phi, sigma.q(), &qg);
    debug_assert!(sigma.conjugate_by(&w) == *tau);
    Ok(Some(w))
}

#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub n: Vec<usize>,
    /// `w` with `w^{-1} σ w = τ(n)`.
    pub conjugator: WreathElem,
}

/// The unique `n` with `σ` conjugate to `τ(n)`, with an explicit conjugator.
pub fn classify(sigma: &WreathHom, catalog: &IrreducibleCatalog) -> Result<BlockDecomposition> {
    if !same_group(&sigma.source, &catalog.lambda) || !same_group(sigma.base(), &catalog.q) {
        return Err(Error::MixedSignature("σ and the catalog differ in signature".into()));
    }
    let qg = &catalog.q;
    let nq = qg.order();
    let mut n = vec![0usize; catalog.classes.len()];
    // (class, orbit points, conjugator of the restricted piece)
    let mut pieces: Vec<(usize, Vec<usize>, WreathElem)> = Vec::new();
    for orb in sigma.orbits() {
        let piece = sigma.restrict_to(&orb);
        let mut found = None;
        for (ci, c) in catalog.classes.iter().enumerate() {
            if c.cardinality != orb.len() {
                continue;
            }
            if let Some(w) = find_conjugator(&piece, &c.tau)? {
                found = Some((ci, w));
                break;
            }
        }
        let (ci, w) = found.ok_or_else(|| {
            Error::UnknownClass(format!("orbit {orb:?} matches no catalog entry"))
        })?;
        n[ci] += 1;
        pieces.push((ci, orb, w));
    }
    pieces.sort_by_key(|p| (p.0, p.1[0]));
    let q = sigma.q();
    let mut s = vec![0usize; q];
    let mut a = vec![0usize; q];
    let mut off = 0;
    for (_, orb, w) in &pieces {
        for k in 0..orb.len() {
            let t = orb[w.s.image(k)];
            s[off + k] = t;
            a[t] = w.a[w.s.image(k)];
        }
        off += orb.len();
    }
    let conjugator = WreathElem { a, s: Perm::from_usize(&s).unwrap() };
    let tau = catalog.tau(&n)?;
    if sigma.conjugate_by(&conjugator) != tau {
        return Err(Error::UnknownClass("assembled conjugator does not reach τ(n)".into()));
    }
    let _ = nq;
    Ok(BlockDecomposition { n, conjugator })
}

/// `C(σ)` as a list of wreath elements, sorted. Brute force over the
/// materialized wreath product, pruned by the permutation part.
pub fn centralizer(sigma: &WreathHom, caps: &Caps) -> Result<Vec<WreathElem>> {
    let w = &sigma.wreath;
    caps.check_materialize("wreath product", w.order().unwrap_or(usize::MAX))?;
    let gens: Vec<usize> = sigma.source.generators().to_vec();
    let sym = symmetric(sigma.q());
    let qn = sigma.base().order();
    let mut out = Vec::new();
    for r in sym.elements() {
        if gens.iter().any(|&g| sigma.s[g].compose(r) != r.compose(&sigma.s[g])) {
            continue;
        }
        let mut a = vec![0usize; sigma.q()];
        loop {
            let x = WreathElem { a: a.clone(), s: r.clone() };
            if gens.iter().all(|&g| w.mul(&sigma.elem(g), &x) == w.mul(&x, &sigma.elem(g))) {
                out.push(x);
            }
            let mut k = 0;
            while k < a.len() {
                a[k] += 1;
                if a[k] < qn {
                    break;
                }
                a[k] = 0;
                k += 1;
            }
            if k == a.len() {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerCheck {
    pub n: Vec<usize>,
    /// `∏ n_i! · |C(τ_i)|^{n_i}`.
    pub product_order: u128,
    pub centralizer_order: usize,
    pub image_in_centralizer: bool,
    pub injective: bool,
    pub is_isomorphism: bool,
}

/// Builds `∏ Σ_{n_i} ≀ C(τ_i) -> C(τ(n))` by block permutation and checks
/// that it is an isomorphism.
pub fn centralizer_product_check(catalog: &IrreducibleCatalog, n: &[usize], caps: &Caps) -> Result<CentralizerCheck> {
    let tau = catalog.tau(n)?;
    let cent: HashSet<WreathElem> = centralizer(&tau, caps)?.into_iter().collect();
    let factors: Vec<(usize, Vec<WreathElem>)> = catalog
        .classes
        .iter()
        .zip(n)
        .filter(|(_, &k)| k > 0)
        .map(|(c, &k)| Ok((k, centralizer(&c.tau, caps)?)))
        .collect::<Result<_>>()?;
    let mut product_order: u128 = 1;
    for (k, c) in &factors {
        product_order *= (1..=*k as u128).product::<u128>() * (c.len() as u128).pow(*k as u32);
    }
    caps.check_materialize("centralizer product", usize::try_from(product_order).unwrap_or(usize::MAX))?;
    let q = tau.q();
    // Enumerate the product and map each element to a wreath element.
    let mut images: HashSet<WreathElem> = HashSet::new();
    let mut all_inside = true;
    let mut count: u128 = 0;
    let mut cur: Vec<WreathElem> = vec![tau.wreath.identity()];
    let mut off = 0;
    for (ci, (k, cents)) in factors.iter().enumerate() {
        let t = catalog.classes.iter().zip(n).filter(|(_, &m)| m > 0).nth(ci).unwrap().0.cardinality;
        let block_perms = symmetric(*k);
        let mut next = Vec::new();
        for base in &cur {
            for pi in block_perms.elements() {
                let mut choice = vec![0usize; *k];
                loop {
                    let mut x = base.clone();
                    let mut s: Vec<usize> = (0..q).map(|i| x.s.image(i)).collect();
                    for b in 0..*k {
                        let c = &cents[choice[b]];
                        let tb = pi.image(b);
                        for j in 0..t {
                            let src = off + b * t + j;
                            let dst = off + tb * t + c.s.image(j);
                            s[src] = dst;
                            x.a[dst] = c.a[c.s.image(j)];
                        }
                    }
                    x.s = Perm::from_usize(&s).unwrap();
                    next.push(x);
                    let mut m = 0;
                    while m < *k {
                        choice[m] += 1;
                        if choice[m] < cents.len() {
                            break;
                        }
                        choice[m] = 0;
                        m += 1;
                    }
                    if m == *k {
                        break;
                    }
                }
            }
        }
        cur = next;
        off += k * t;
    }
    for x in cur {
        count += 1;
        all_inside &= cent.contains(&x);
        images.insert(x);
    }
    let injective = images.len() as u128 == count;
    Ok(CentralizerCheck {
        n: n.to_vec(),
        product_order,
        centralizer_order: cent.len(),
        image_in_centralizer: all_inside,
        injective,
        is_isomorphism: all_inside && injective && images.len() == cent.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomCountIdentity {
    pub q: usize,
    pub hom_count: usize,
    /// `(n, [Σ'_q : C(τ(n))])` for every `n` with `n·t = q`.
    pub terms: Vec<(Vec<usize>, usize)>,
    pub index_sum: usize,
    pub holds: bool,
}

/// `|Hom(Λ, Σ_q ≀ Q)| = Σ_{n·t = q} [Σ_q ≀ Q : C(τ(n))]`, both sides enumerated.
pub fn hom_count_identity(catalog: &IrreducibleCatalog, q: usize, caps: &Caps) -> Result<HomCountIdentity> {
    let w = Wreath::new(q, &catalog.q);
    let order = w.order().unwrap_or(usize::MAX);
    let hom_count = enumerate_wreath_homs(&catalog.lambda, &w, caps)?.len();
    let mut terms = Vec::new();
    for n in catalog.vectors_of_cardinality(q) {
        let c = centralizer(&catalog.tau(&n)?, caps)?.len();
        terms.push((n, order / c));
    }
    let index_sum = terms.iter().map(|t| t.1).sum();
    Ok(HomCountIdentity { q, hom_count, terms, index_sum, holds: index_sum == hom_count })
}

/// Count of irreducible homomorphisms `Λ -> Σ_q` and how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibleCount {
    pub q: usize,
    pub count: usize,
    /// `true` when every homomorphism into `Σ_q` was enumerated.
    pub enumerated: bool,
}

/// Irreducible homomorphisms `Λ -> Σ_q`. Irreducibility depends only on the
/// permutation part, so this covers every `Q`. Enumerates `Hom(Λ, Σ_q)` when
/// `Σ_q` fits the caps; otherwise counts transitive actions as
/// `(q-1)!` labellings per subgroup of index `q`.
pub fn irreducible_count(lambda: &Group, q: usize, caps: &Caps) -> Result<IrreducibleCount> {
    let order = (1..=q).try_fold(1usize, |acc, k| acc.checked_mul(k)).unwrap_or(usize::MAX);
    let fits = order <= caps.materialize && lambda.order().saturating_mul(order) <= caps.hom_candidates;
    if !fits {
        caps.check_order(lambda.order())?;
        let subgroups = crate::group::enumerate_subgroups(lambda, caps)?.iter().filter(|h| h.index() == q).count();
        let labellings = (1..q).try_fold(1usize, |acc, k| acc.checked_mul(k)).unwrap_or(usize::MAX);
        let count = if subgroups == 0 { 0 } else { subgroups.saturating_mul(labellings) };
        return Ok(IrreducibleCount { q, count, enumerated: false });
    }
    let sym = symmetric(q);
    let homs = enumerate_homs(lambda, &sym, caps)?;
    let count = homs
        .iter()
        .filter(|h| {
            let mut seen = vec![false; q];
            seen[0] = true;
            let mut stack = vec![0usize];
            while let Some(i) = stack.pop() {
                for &g in lambda.generators() {
                    let j = sym.element(h.map[g]).image(i);
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen.iter().all(|&b| b)
        })
        .count();
    Ok(IrreducibleCount { q, count, enumerated: true })
}

/// Number of irreducible homomorphisms `Λ -> Σ_q` for each `q` in `1..=q_max`,
/// by direct enumeration.
pub fn irreducible_counts(lambda: &Group, q_max: usize, caps: &Caps) -> Result<Vec<(usize, usize)>> {
    (1..=q_max)
        .map(|q| {
            let order: usize = (1..=q).product();
            caps.check_materialize("symmetric group", order)?;
            let needed = lambda.order().saturating_mul(order);
            if needed > caps.hom_candidates {
                return Err(Error::EnumerationCapExceeded { what: "homomorphisms".into(), needed, cap: caps.hom_candidates });
            }
            let c = irreducible_count(lambda, q, caps)?;
            Ok((q, c.count))
        })
        .collect()
}

/// Brute-force count of conjugacy classes of irreducible homomorphisms of
/// cardinality `q`, through the materialized wreath product.
pub fn irreducible_class_count_bruteforce(lambda: &Group, qg: &Group, q: usize, caps: &Caps) -> Result<usize> {
    let w = Wreath::new(q, qg);
    let target = w.materialize(caps)?;
    let homs = enumerate_homs(lambda, &target, caps)?;
    let irr: Vec<GroupHom> = homs
        .into_iter()
        .filter(|h| WreathHom::from_group_hom(h, &w).map(|x| x.is_irreducible()).unwrap_or(false))
        .collect();
    if irr.is_empty() {
        return Ok(0);
    }
    Ok(crate::group::hom_conjugacy_classes(&irr)?.len())
}

/// One entry of the catalog of summands `X_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub q: usize,
    pub tau_index: usize,
    /// Point stabilizer and twist of `τ`, as element indices in `Λ` and `Q`.
    pub subgroup: Vec<usize>,
    pub alpha: Vec<usize>,
    pub base_points: usize,
    pub fiber_dims: Vec<usize>,
    pub residual_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandCatalog {
    pub lambda_order: usize,
    pub summands: Vec<Summand>,
}

/// Per irreducible `τ_i`: the `τ_i`-twisted `Λ` fixed points of `η^{t_i}`,
/// restricted to the `K`-trivial part, with residual group `C(τ_i)`.
pub fn xq_catalog(eta: &BundleData, lambda: &Subgroup, k: &Subgroup, caps: &Caps) -> Result<SummandCatalog> {
    ensure_same(lambda.group(), eta.gamma(), "Λ must be a subgroup of Γ")?;
    if !k.is_subgroup_of(lambda) {
        return Err(Error::NotNested);
    }
    if !eta.is_q_faithful().faithful {
        return Err(Error::FaithfulnessHypothesisFails("η".into()));
    }
    let (lg, inc) = lambda.to_group();
    let catalog = irreducible_catalog(&lg, eta.q(), caps)?;
    let k_in_l: Vec<usize> = k.members().iter().map(|x| lambda.members().binary_search(x).unwrap()).collect();
    let mut summands = Vec::new();
    for (i, c) in catalog.classes.iter().enumerate() {
        let t = c.cardinality;
        let (base_points, fiber_dims) = eta.wreath_twisted_component(&inc, &c.tau, &k_in_l, caps)?;
        summands.push(Summand {
            q: t,
            tau_index: i,
            subgroup: c.subgroup.members().iter().map(|&x| inc.map[x]).collect(),
            alpha: c.alpha.map.clone(),
            base_points,
            fiber_dims,
            residual_order: centralizer(&c.tau, caps)?.len(),
        });
    }
    Ok(SummandCatalog { lambda_order: lambda.order(), summands })
}

/// Multiplicity vectors sorted by cardinality, keyed for display.
pub fn vectors_by_cardinality(catalog: &IrreducibleCatalog, q_max: usize) -> BTreeMap<usize, Vec<Vec<usize>>> {
    (1..=q_max).map(|q| (q, catalog.vectors_of_cardinality(q))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, named, trivial};

    #[test]
    fn catalog_sizes() {
        let caps = Caps::default();
        let c = irreducible_catalog(&cyclic(2), &trivial(), &caps).unwrap();
        assert_eq!(c.cardinalities(), vec![1, 2]);
        let c = irreducible_catalog(&trivial(), &cyclic(3), &caps).unwrap();
        assert_eq!(c.cardinalities(), vec![1]);
        for c in &irreducible_catalog(&named("S3").unwrap(), &cyclic(2), &caps).unwrap().classes {
            c.tau.validate().unwrap();
            assert!(c.tau.is_irreducible());
        }
    }

    #[test]
    fn centralizer_examples() {
        let caps = Caps::default();
        let c = irreducible_catalog(&cyclic(2), &trivial(), &caps).unwrap();
        assert_eq!(centralizer(&c.tau(&[0, 1]).unwrap(), &caps).unwrap().len(), 2);
        assert_eq!(centralizer(&c.tau(&[0, 2]).unwrap(), &caps).unwrap().len(), 8);
        assert_eq!(centralizer(&c.tau(&[1, 1]).unwrap(), &caps).unwrap().len(), 2);
        let chk = centralizer_product_check(&c, &[0, 2], &caps).unwrap();
        assert!(chk.is_isomorphism);
        assert_eq!(chk.product_order, 8);
    }

    #[test]
    fn classify_scrambled_block_sum() {
        let caps = Caps::default();
        let c2 = cyclic(2);
        let cat = irreducible_catalog(&c2, &trivial(), &caps).unwrap();
        let swap13 = Perm::from_cycles(3, &[&[0, 2]]).unwrap();
        let sigma = WreathHom::from_permutation_action(&c2, &trivial(), &[Perm::identity(3), swap13]).unwrap();
        let d = classify(&sigma, &cat).unwrap();
        assert_eq!(d.n, vec![1, 1]);
        assert_eq!(sigma.conjugate_by(&d.conjugator), cat.tau(&[1, 1]).unwrap());
    }

    #[test]
    fn hom_count_identity_small() {
        let caps = Caps::default();
        let cat = irreducible_catalog(&cyclic(2), &trivial(), &caps).unwrap();
        let r = hom_count_identity(&cat, 2, &caps).unwrap();
        assert_eq!(r.hom_count, 2);
        assert!(r.holds);
    }
}
