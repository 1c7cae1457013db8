//! The wreath product `Σ_q ≀ Q = Q^q ⋊ Σ_q` and homomorphisms into it.
//!
//! An element is a pair `(a; s)` with cofactors `a_0..a_{q-1}` in `Q` and
//! `s` in `Σ_q`. Products follow
//! `(a; s)(a'; s') = (a_i · a'_{s^{-1}(i)}; s s')`, and the group acts on the
//! right of `X^q` by `((x)(a; s))_i = x_{s(i)} · a_{s(i)}`.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Caps, Error, Result};
use crate::group::{same_group, FinGroup, Group, GroupHom};
use crate::perm::Perm;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElem {
    /// Cofactors as element indices of `Q`.
    pub a: Vec<usize>,
    pub s: Perm,
}

#[derive(Clone, Debug)]
pub struct Wreath {
    pub q: usize,
    pub base: Group,
}

impl Wreath {
    pub fn new(q: usize, base: &Group) -> Wreath {
        Wreath { q, base: base.clone() }
    }

    pub fn order(&self) -> Option<usize> {
        let mut o: usize = 1;
        for k in 1..=self.q {
            o = o.checked_mul(k)?.checked_mul(self.base.order())?;
        }
        Some(o)
    }

    pub fn identity(&self) -> WreathElem {
        WreathElem { a: vec![0; self.q], s: Perm::identity(self.q) }
    }

    pub fn mul(&self, x: &WreathElem, y: &WreathElem) -> WreathElem {
        let sinv = x.s.inverse();
        let a = (0..self.q)
            .map(|i| self.base.mul(x.a[i], y.a[sinv.image(i)]))
            .collect();
        WreathElem { a, s: x.s.compose(&y.s) }
    }

    pub fn inv(&self, x: &WreathElem) -> WreathElem {
        let a = (0..self.q).map(|j| self.base.inv(x.a[x.s.image(j)])).collect();
        WreathElem { a, s: x.s.inverse() }
    }

    /// `y^{-1} x y`.
    pub fn conj(&self, x: &WreathElem, y: &WreathElem) -> WreathElem {
        self.mul(&self.inv(y), &self.mul(x, y))
    }

    /// Faithful left action on `q × deg(Q)` points:
    /// `(a; s)·(i, p) = (s(i), a_{s(i)}·p)`.
    pub fn to_perm(&self, x: &WreathElem) -> Perm {
        let d = self.base.degree();
        let mut img = vec![0u32; self.q * d];
        for i in 0..self.q {
            let t = x.s.image(i);
            let ap = self.base.element(x.a[t]);
            for p in 0..d {
                img[i * d + p] = (t * d + ap.image(p)) as u32;
            }
        }
        Perm::from_images_unchecked(img)
    }

    pub fn from_perm(&self, p: &Perm) -> Option<WreathElem> {
        let d = self.base.degree();
        if p.degree() != self.q * d {
            return None;
        }
        if d == 0 {
            return if self.q == 0 { Some(self.identity()) } else { None };
        }
        let mut s = vec![0usize; self.q];
        let mut a = vec![0usize; self.q];
        for i in 0..self.q {
            let t = p.image(i * d) / d;
            s[i] = t;
            let imgs: Vec<u32> = (0..d)
                .map(|x| {
                    let y = p.image(i * d + x);
                    if y / d == t {
                        Some((y - t * d) as u32)
                    } else {
                        None
                    }
                })
                .collect::<Option<Vec<u32>>>()?;
            a[t] = self.base.index_of(&Perm::from_images(imgs).ok()?)?;
        }
        Some(WreathElem { a, s: Perm::from_usize(&s).ok()? })
    }

    /// All elements, generated directly without closure.
    pub fn elements(&self, caps: &Caps) -> Result<Vec<WreathElem>> {
        let order = self.order().unwrap_or(usize::MAX);
        caps.check_materialize("wreath product elements", order)?;
        let sym = crate::group::symmetric(self.q);
        let qn = self.base.order();
        let mut out = Vec::with_capacity(order);
        for s in sym.elements() {
            let mut a = vec![0usize; self.q];
            loop {
                out.push(WreathElem { a: a.clone(), s: s.clone() });
                // odometer over Q^q
                let mut k = 0;
                while k < self.q {
                    a[k] += 1;
                    if a[k] < qn {
                        break;
                    }
                    a[k] = 0;
                    k += 1;
                }
                if k == self.q {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// The wreath product as a permutation group on `q·deg(Q)` points.
    pub fn materialize(&self, caps: &Caps) -> Result<Group> {
        let elems = self.elements(caps)?.iter().map(|x| self.to_perm(x)).collect();
        Ok(Arc::new(FinGroup::from_closed(self.q * self.base.degree(), elems)))
    }

    /// Subgroup `Σ ≀ Q` for a subgroup `Σ ≤ Σ_q`, given by its permutations.
    pub fn restricted_elements(&self, sigma: &[Perm], caps: &Caps) -> Result<Vec<WreathElem>> {
        let order = sigma.len().saturating_mul(
            self.base.order().checked_pow(self.q as u32).unwrap_or(usize::MAX),
        );
        caps.check_materialize("wreath product elements", order)?;
        Ok(self
            .elements(&Caps { materialize: usize::MAX, ..caps.clone() })?
            .into_iter()
            .filter(|x| sigma.contains(&x.s))
            .collect())
    }
}

/// A homomorphism `σ: Λ -> Σ_q ≀ Q`, tabulated on every element of `Λ`.
#[derive(Clone, Debug)]
pub struct WreathHom {
    pub source: Group,
    pub wreath: Wreath,
    /// `s(λ)` for each element index `λ`.
    pub s: Vec<Perm>,
    /// `a(λ)` cofactors for each element index `λ`.
    pub a: Vec<Vec<usize>>,
}

impl PartialEq for WreathHom {
    fn eq(&self, other: &Self) -> bool {
        self.wreath.q == other.wreath.q
            && same_group(&self.source, &other.source)
            && same_group(&self.wreath.base, &other.wreath.base)
            && self.s == other.s
            && self.a == other.a
    }
}
impl Eq for WreathHom {}

/// Wire form: images of the canonical generators of `Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathHomSpec {
    pub q: usize,
    /// `s` of each generator in one-line notation.
    pub s: Vec<Perm>,
    /// Cofactors of each generator as permutations of `Q`'s points.
    pub a: Vec<Vec<Perm>>,
}

impl WreathHom {
    pub fn elem(&self, l: usize) -> WreathElem {
        WreathElem { a: self.a[l].clone(), s: self.s[l].clone() }
    }

    pub fn q(&self) -> usize {
        self.wreath.q
    }

    pub fn base(&self) -> &Group {
        &self.wreath.base
    }

    /// Extends generator images, checking that they respect all relations.
    pub fn extend(source: &Group, wreath: &Wreath, gens: &[usize], images: &[WreathElem]) -> Result<WreathHom> {
        if gens.len() != images.len() {
            return Err(Error::InvalidWreathHom("generator/image count mismatch".into()));
        }
        for im in images {
            if im.s.degree() != wreath.q || im.a.len() != wreath.q {
                return Err(Error::InvalidWreathHom("image has wrong cardinality".into()));
            }
            if im.a.iter().any(|&x| x >= wreath.base.order()) {
                return Err(Error::InvalidWreathHom("cofactor out of range".into()));
            }
        }
        let n = source.order();
        let mut tab: Vec<Option<WreathElem>> = vec![None; n];
        tab[0] = Some(wreath.identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let vx = tab[x].clone().unwrap();
            for (&g, y) in gens.iter().zip(images) {
                let gx = source.mul(g, x);
                let val = wreath.mul(y, &vx);
                match &tab[gx] {
                    None => {
                        tab[gx] = Some(val);
                        queue.push_back(gx);
                    }
                    Some(old) if *old != val => {
                        return Err(Error::InvalidWreathHom(
                            "generator images violate a relation of the source".into(),
                        ))
                    }
                    _ => {}
                }
            }
        }
        let tab: Option<Vec<WreathElem>> = tab.into_iter().collect();
        let tab = tab.ok_or_else(|| Error::InvalidWreathHom("generators do not generate the source".into()))?;
        Ok(WreathHom {
            source: source.clone(),
            wreath: wreath.clone(),
            s: tab.iter().map(|e| e.s.clone()).collect(),
            a: tab.into_iter().map(|e| e.a).collect(),
        })
    }

    pub fn from_generator_images(source: &Group, wreath: &Wreath, images: &[WreathElem]) -> Result<WreathHom> {
        WreathHom::extend(source, wreath, source.generators(), images)
    }

    pub fn from_spec(source: &Group, base: &Group, spec: &WreathHomSpec) -> Result<WreathHom> {
        let gens = source.generators();
        if spec.s.len() != gens.len() || spec.a.len() != gens.len() {
            return Err(Error::InvalidWreathHom(format!(
                "expected images for {} generators",
                gens.len()
            )));
        }
        let wreath = Wreath::new(spec.q, base);
        let mut images = Vec::new();
        for (s, a) in spec.s.iter().zip(&spec.a) {
            let a: Option<Vec<usize>> = a.iter().map(|p| base.index_of(p)).collect();
            let a = a.ok_or_else(|| Error::InvalidWreathHom("cofactor is not an element of Q".into()))?;
            images.push(WreathElem { a, s: s.clone() });
        }
        WreathHom::from_generator_images(source, &wreath, &images)
    }

    pub fn spec(&self) -> WreathHomSpec {
        let gens = self.source.generators();
        WreathHomSpec {
            q: self.q(),
            s: gens.iter().map(|&g| self.s[g].clone()).collect(),
            a: gens
                .iter()
                .map(|&g| self.a[g].iter().map(|&x| self.base().element(x).clone()).collect())
                .collect(),
        }
    }

    /// Checks the homomorphism law on every pair, i.e. that `s` is a
    /// homomorphism and the cofactors satisfy
    /// `a_i(λμ) = a_i(λ) · a_{s(λ)^{-1}(i)}(μ)`.
    pub fn validate(&self) -> Result<()> {
        let g = &self.source;
        for l in 0..g.order() {
            for m in 0..g.order() {
                let lm = g.mul(l, m);
                if self.wreath.mul(&self.elem(l), &self.elem(m)) != self.elem(lm) {
                    return Err(Error::InvalidWreathHom(format!(
                        "cocycle condition fails at elements {l}, {m}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Lift of a homomorphism into the materialized wreath group.
    pub fn from_group_hom(h: &GroupHom, wreath: &Wreath) -> Result<WreathHom> {
        let elems: Option<Vec<WreathElem>> =
            h.map.iter().map(|&x| wreath.from_perm(h.target.element(x))).collect();
        let elems = elems.ok_or_else(|| Error::InvalidWreathHom("target is not this wreath product".into()))?;
        Ok(WreathHom {
            source: h.source.clone(),
            wreath: wreath.clone(),
            s: elems.iter().map(|e| e.s.clone()).collect(),
            a: elems.into_iter().map(|e| e.a).collect(),
        })
    }

    pub fn to_group_hom(&self, materialized: &Group) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: materialized.clone(),
            map: (0..self.source.order())
                .map(|l| materialized.index_of(&self.wreath.to_perm(&self.elem(l))).unwrap())
                .collect(),
        }
    }

    /// Trivial cofactors over a permutation action `s`.
    pub fn from_permutation_action(source: &Group, base: &Group, s: &[Perm]) -> Result<WreathHom> {
        let q = s.first().map(|p| p.degree()).unwrap_or(0);
        let w = WreathHom {
            source: source.clone(),
            wreath: Wreath::new(q, base),
            s: s.to_vec(),
            a: vec![vec![0; q]; source.order()],
        };
        w.validate()?;
        Ok(w)
    }

    /// Orbits of the image of `s` on `0..q`, sorted, listed by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let q = self.q();
        let mut seen = vec![false; q];
        let mut out = Vec::new();
        for start in 0..q {
            if seen[start] {
                continue;
            }
            let mut orb: Vec<usize> = self.s.iter().map(|p| p.image(start)).collect();
            orb.sort_unstable();
            orb.dedup();
            for &i in &orb {
                seen[i] = true;
            }
            out.push(orb);
        }
        out
    }

    pub fn is_irreducible(&self) -> bool {
        self.orbits().len() <= 1 && self.q() > 0
    }

    /// `λ -> w^{-1} σ(λ) w`.
    pub fn conjugate_by(&self, w: &WreathElem) -> WreathHom {
        let elems: Vec<WreathElem> = (0..self.source.order())
            .map(|l| self.wreath.conj(&self.elem(l), w))
            .collect();
        WreathHom {
            source: self.source.clone(),
            wreath: self.wreath.clone(),
            s: elems.iter().map(|e| e.s.clone()).collect(),
            a: elems.into_iter().map(|e| e.a).collect(),
        }
    }

    /// Block sum: `other` acts on the points after those of `self`.
    pub fn block_sum(&self, other: &WreathHom) -> Result<WreathHom> {
        if !same_group(&self.source, &other.source) || !same_group(self.base(), other.base()) {
            return Err(Error::MixedSignature("block sum of different signatures".into()));
        }
        let q = self.q() + other.q();
        Ok(WreathHom {
            source: self.source.clone(),
            wreath: Wreath::new(q, self.base()),
            s: self.s.iter().zip(&other.s).map(|(x, y)| x.direct_sum(y)).collect(),
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(x, y)| x.iter().chain(y).copied().collect())
                .collect(),
        })
    }

    /// Restriction to an invariant set of points, relabelled in increasing order.
    pub fn restrict_to(&self, points: &[usize]) -> WreathHom {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        let pos = |x: usize| pts.binary_search(&x).expect("invariant point set");
        WreathHom {
            source: self.source.clone(),
            wreath: Wreath::new(pts.len(), self.base()),
            s: self
                .s
                .iter()
                .map(|p| Perm::from_usize(&pts.iter().map(|&i| pos(p.image(i))).collect::<Vec<_>>()).unwrap())
                .collect(),
            a: self.a.iter().map(|a| pts.iter().map(|&i| a[i]).collect()).collect(),
        }
    }

    /// Restriction along an inclusion `K -> Λ`.
    pub fn restrict(&self, inc: &GroupHom) -> WreathHom {
        WreathHom {
            source: inc.source.clone(),
            wreath: self.wreath.clone(),
            s: inc.map.iter().map(|&l| self.s[l].clone()).collect(),
            a: inc.map.iter().map(|&l| self.a[l].clone()).collect(),
        }
    }

    /// Key for canonical ordering: the generator images.
    pub fn key(&self) -> Vec<WreathElem> {
        self.source.generators().iter().map(|&g| self.elem(g)).collect()
    }
}

/// All homomorphisms `Λ -> Σ_q ≀ Q`, in canonical order.
pub fn enumerate_wreath_homs(source: &Group, wreath: &Wreath, caps: &Caps) -> Result<Vec<WreathHom>> {
    let target = wreath.materialize(caps)?;
    let homs = crate::group::enumerate_homs(source, &target, caps)?;
    homs.iter().map(|h| WreathHom::from_group_hom(h, wreath)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, enumerate_homs, named, symmetric};

    #[test]
    fn perm_embedding_is_a_homomorphism() {
        let caps = Caps::default();
        for (q, qg) in [(2, cyclic(2)), (3, cyclic(2)), (2, symmetric(3)), (3, cyclic(3))] {
            let w = Wreath::new(q, &qg);
            let elems = w.elements(&caps).unwrap();
            assert_eq!(Some(elems.len()), w.order());
            for x in elems.iter().step_by(3) {
                assert_eq!(w.from_perm(&w.to_perm(x)).as_ref(), Some(x));
                for y in elems.iter().step_by(5) {
                    assert_eq!(w.to_perm(&w.mul(x, y)), w.to_perm(x).compose(&w.to_perm(y)));
                }
                assert_eq!(w.mul(x, &w.inv(x)), w.identity());
            }
        }
    }

    #[test]
    fn wreath_order_and_hom_counts() {
        let caps = Caps::default();
        let w = Wreath::new(2, &cyclic(2));
        let g = w.materialize(&caps).unwrap();
        assert_eq!(g.order(), 8);
        // Σ_2 ≀ C_2 is dihedral of order 8.
        assert!(crate::group::find_isomorphism(&g, &named("D4").unwrap(), &caps)
            .unwrap()
            .is_some());
        let homs = enumerate_wreath_homs(&cyclic(2), &w, &caps).unwrap();
        assert_eq!(homs.len(), enumerate_homs(&cyclic(2), &g, &caps).unwrap().len());
        for h in &homs {
            h.validate().unwrap();
        }
    }

    #[test]
    fn extend_rejects_bad_images() {
        let w = Wreath::new(2, &cyclic(2));
        // A transposition with cofactor (1,0) has order 4, which C2 cannot hit.
        let bad = WreathElem { a: vec![1, 0], s: Perm::from_cycles(2, &[&[0, 1]]).unwrap() };
        assert!(WreathHom::from_generator_images(&cyclic(2), &w, &[bad]).is_err());
        let good = WreathElem { a: vec![1, 1], s: Perm::from_cycles(2, &[&[0, 1]]).unwrap() };
        assert!(WreathHom::from_generator_images(&cyclic(2), &w, &[good]).is_ok());
    }

    #[test]
    fn spec_round_trip() {
        let caps = Caps::default();
        let w = Wreath::new(2, &cyclic(3));
        for h in enumerate_wreath_homs(&cyclic(2), &w, &caps).unwrap() {
            let back = WreathHom::from_spec(&h.source, h.base(), &h.spec()).unwrap();
            assert_eq!(back, h);
        }
    }
}
