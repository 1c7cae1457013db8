//! Finite G-sets up to isomorphism, their automorphism groups, and the
//! summand catalog of geometric fixed points of a free commutative cell.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Caps, Error, Result};
use crate::group::{enumerate_homs, hom_conjugacy_classes, subgroup_classes, symmetric, weyl_group, FinGroup};
use crate::group::{Group, GroupHom, Subgroup};
use crate::gset::{equivariant_bijections, BiSet, GSet, GSetSpec};
use crate::linalg::Rational;
use crate::perm::Perm;
use crate::twisted::twisted_fixed_dim;
use crate::wreath::WreathHom;

fn factorial(q: usize) -> Option<usize> {
    (1..=q).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

fn subgroup_perms(h: &Subgroup) -> Vec<Perm> {
    h.members().iter().map(|&x| h.group().element(x).clone()).collect()
}

/// One orbit type `G/H` occurring `multiplicity` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitType {
    /// Position of `[H]` in `subgroup_classes(G)`.
    pub class: usize,
    pub subgroup: Vec<Perm>,
    pub index: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GSetClass {
    pub size: usize,
    pub orbit_types: Vec<OrbitType>,
    /// Canonical representative: `∐ G/Hᵢ^{qᵢ}` with classes in catalog order.
    pub representative: GSetSpec,
    #[serde(skip)]
    pub gset: GSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct GSetClassification {
    pub group: String,
    pub q: usize,
    pub classes: Vec<GSetClass>,
    /// `|Hom(G, Σ_q)|`.
    pub hom_count: usize,
    /// Number of `Σ_q`-conjugacy classes of homomorphisms `G -> Σ_q`.
    pub hom_class_count: usize,
    /// Both enumerations give the same set of orbit-type vectors.
    pub agree: bool,
}

/// Multiplicity vector over subgroup classes describing the orbits of `z`.
pub fn orbit_type_vector(z: &GSet, classes: &[Vec<Subgroup>]) -> Result<Vec<usize>> {
    let mut mult = vec![0usize; classes.len()];
    for orb in z.orbits() {
        let stab = z.stabilizer(orb[0]);
        let c = classes
            .iter()
            .position(|cls| cls.binary_search(&stab).is_ok())
            .ok_or_else(|| Error::InvalidInput("stabilizer outside the subgroup catalog".into()))?;
        mult[c] += 1;
    }
    Ok(mult)
}

/// The canonical G-set with the given orbit-type vector.
pub fn gset_from_types(g: &Group, classes: &[Vec<Subgroup>], mult: &[usize]) -> Result<GSet> {
    let mut z = GSet::trivial(g, 0);
    for (cls, &k) in classes.iter().zip(mult) {
        let orbit = GSet::coset_space(&cls[0]);
        for _ in 0..k {
            z = z.disjoint_union(&orbit)?;
        }
    }
    Ok(z)
}

fn make_class(g: &Group, classes: &[Vec<Subgroup>], mult: &[usize]) -> Result<GSetClass> {
    let gset = gset_from_types(g, classes, mult)?;
    let orbit_types = classes
        .iter()
        .enumerate()
        .filter(|&(c, _)| mult[c] > 0)
        .map(|(c, cls)| OrbitType {
            class: c,
            subgroup: subgroup_perms(&cls[0]),
            index: cls[0].index(),
            multiplicity: mult[c],
        })
        .collect();
    Ok(GSetClass { size: gset.size(), orbit_types, representative: gset.spec(), gset })
}

/// Orbit-type vectors `(qᵢ)` with `Σ qᵢ·[G:Hᵢ] = q`, in lexicographic order.
fn type_vectors(indices: &[usize], q: usize) -> Vec<Vec<usize>> {
    fn rec(indices: &[usize], k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == indices.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for m in 0..=left / indices[k] {
            cur.push(m);
            rec(indices, k + 1, left - m * indices[k], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(indices, 0, q, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Isomorphism classes of G-sets of size `q`, enumerated by orbit types and
/// independently by `Σ_q`-conjugacy classes of homomorphisms `G -> Σ_q`.
pub fn gset_iso_classes(g: &Group, q: usize, caps: &Caps) -> Result<GSetClassification> {
    let qf = factorial(q).unwrap_or(usize::MAX);
    caps.check_materialize("symmetric group elements", qf)?;
    let sym = symmetric(q);
    // Backtracking cost: candidate images per generator, multiplied.
    let needed = g.generators().iter().try_fold(1usize, |acc, &x| {
        let o = g.element_order(x);
        acc.checked_mul((0..sym.order()).filter(|&y| o.is_multiple_of(sym.element_order(y))).count())
    });
    let needed = needed.unwrap_or(usize::MAX);
    if needed > caps.hom_candidates {
        return Err(Error::EnumerationCapExceeded {
            what: "homomorphisms into the symmetric group".into(),
            needed,
            cap: caps.hom_candidates,
        });
    }
    let classes = subgroup_classes(g, caps)?;
    let indices: Vec<usize> = classes.iter().map(|c| c[0].index()).collect();
    let vectors = type_vectors(&indices, q);

    let homs = enumerate_homs(g, &sym, caps)?;
    let hom_classes = hom_conjugacy_classes(&homs)?;
    let mut from_homs = BTreeSet::new();
    for cls in &hom_classes {
        from_homs.insert(orbit_type_vector(&GSet::from_hom(&homs[cls[0]]), &classes)?);
    }
    let from_types: BTreeSet<Vec<usize>> = vectors.iter().cloned().collect();
    let agree = from_homs == from_types && hom_classes.len() == vectors.len();

    let out: Result<Vec<GSetClass>> = vectors.iter().map(|v| make_class(g, &classes, v)).collect();
    Ok(GSetClassification {
        group: g.content_hash().to_string(),
        q,
        classes: out?,
        hom_count: homs.len(),
        hom_class_count: hom_classes.len(),
        agree,
    })
}

/// One factor `Σ_{qᵢ} ≀ WHᵢ` of the automorphism group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutFactor {
    pub class: usize,
    pub multiplicity: usize,
    pub weyl_order: usize,
    pub order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AutReport {
    /// Order of the brute-force automorphism group.
    pub order: usize,
    /// `∏ qᵢ!·|WHᵢ|^{qᵢ}`.
    pub formula_order: usize,
    pub factors: Vec<AutFactor>,
    /// The map to `∏ Σ_{qᵢ} ≀ WHᵢ` is injective and the orders agree.
    pub bijection_verified: bool,
    /// Generators of the automorphism group as permutations of `Z`.
    pub generators: Vec<Perm>,
    #[serde(skip)]
    pub group: Option<Group>,
}

/// `Aut_G(Z)` by brute force, with an explicit comparison against the
/// wreath-product description.
///
/// An automorphism `φ` is sent to, for each orbit type, the permutation `s` of
/// the orbits of that type and the Weyl elements `wⱼ` with
/// `φ(xⱼ) = nⱼ·x_{s(j)}`, `wⱼ = nⱼH`, where `xⱼ` are base points whose
/// stabilizer is exactly the class representative `H`.
pub fn aut_gset(z: &GSet, caps: &Caps) -> Result<AutReport> {
    let g = z.group();
    let classes = subgroup_classes(g, caps)?;
    let mult = orbit_type_vector(z, &classes)?;

    let mut factors = Vec::new();
    let mut formula: usize = 1;
    let mut weyls = Vec::new();
    for (c, &k) in mult.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let w = weyl_group(&classes[c][0])?;
        let wo = w.weyl.order();
        let order = (0..k)
            .try_fold(factorial(k).unwrap_or(usize::MAX), |acc, _| acc.checked_mul(wo))
            .unwrap_or(usize::MAX);
        formula = formula.saturating_mul(order);
        factors.push(AutFactor { class: c, multiplicity: k, weyl_order: wo, order });
        weyls.push((c, w));
    }
    if formula > caps.materialize {
        return Err(Error::EnumerationCapExceeded {
            what: "equivariant automorphisms".into(),
            needed: formula,
            cap: caps.materialize,
        });
    }

    let auts = equivariant_bijections(z, z, None);
    let perms: Vec<Perm> = auts.iter().map(|f| Perm::from_images_unchecked(f.iter().map(|&x| x as u32).collect())).collect();
    let group = FinGroup::generate(z.size(), &perms, caps.materialize.max(1))?;

    // Base points per orbit type, with stabilizer equal to the representative.
    let orbits = z.orbits();
    let mut base: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    let mut slot = vec![0usize; z.size()];
    for orb in &orbits {
        let stab = z.stabilizer(orb[0]);
        let c = classes.iter().position(|cls| cls.binary_search(&stab).is_ok()).unwrap();
        let rep = &classes[c][0];
        let x = *orb.iter().find(|&&x| z.stabilizer(x) == *rep).expect("every orbit realizes each conjugate");
        for &y in orb {
            slot[y] = base[c].len();
        }
        base[c].push(x);
    }

    let mut keys = BTreeSet::new();
    for f in &auts {
        let mut key: Vec<(usize, usize)> = Vec::new();
        for (c, w) in &weyls {
            for &x in &base[*c] {
                let y = f[x];
                let j = slot[y];
                let target = base[*c][j];
                let n = (0..g.order()).find(|&n| z.act(n, target) == y).unwrap();
                let ni = w.normalizer.members().binary_search(&n).expect("transporter normalizes H");
                key.push((j, w.projection.map[ni]));
            }
        }
        keys.insert(key);
    }
    let bijection_verified = keys.len() == auts.len() && auts.len() == formula;
    let generators = group.generators().iter().map(|&i| group.element(i).clone()).collect();
    Ok(AutReport { order: auts.len(), formula_order: formula, factors, bijection_verified, generators, group: Some(group) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub q: usize,
    /// `dim (ℝ^m ⊕ ℝ⟨G/H⟩)^q`.
    pub cell_dim: usize,
    /// `dim ℝ⟨G/H⟩^q`.
    pub suspension_dim: usize,
    pub sym_group: String,
    pub sym_order: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingClass {
    /// Members of the class representative.
    #[serde(rename = "H")]
    pub h: Vec<Perm>,
    pub index: usize,
    /// Content hash of `WH`, realized as `Aut_G(G/H)` acting on `G/H`.
    #[serde(rename = "WH")]
    pub wh: String,
    pub wh_order: usize,
    pub summands: Vec<Summand>,
    /// The `q` of the summand through which the transfer factors.
    pub transfer_marker: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingCatalog {
    pub group: String,
    pub m: usize,
    pub q_max: usize,
    pub truncated: bool,
    pub note: String,
    pub classes: Vec<SplittingClass>,
}

const CATALOG_NOTE: &str = "indexing data only; the weak equivalences assembling these summands are not modeled";

/// `q!·|WH|^q` in decimal; "overflow" past `u128`.
fn sym_order(q: usize, wh: usize) -> String {
    (1..=q as u128)
        .try_fold(1u128, |acc, k| acc.checked_mul(k)?.checked_mul(wh as u128))
        .map_or_else(|| "overflow".into(), |v| v.to_string())
}

fn summands(m: usize, index: usize, wh: usize, q_max: usize) -> Vec<Summand> {
    (0..=q_max)
        .map(|q| Summand {
            q,
            cell_dim: (m + index) * q,
            suspension_dim: index * q,
            sym_group: format!("Σ{q}≀W"),
            sym_order: sym_order(q, wh),
        })
        .collect()
}

/// `WH` as the group of permutations of `G/H` given by `gH ↦ g·n⁻¹H`, `n ∈ N(H)`.
pub fn weyl_on_cosets(h: &Subgroup) -> Result<Group> {
    let g = h.group();
    let z = GSet::coset_space(h);
    let base = z.act(0, 0);
    let reps = h.left_coset_reps();
    let w = weyl_group(h)?;
    let perms: Vec<Perm> = w
        .normalizer
        .members()
        .iter()
        .map(|&n| {
            let ni = g.inv(n);
            Perm::from_images_unchecked(reps.iter().map(|&r| z.act(g.mul(r, ni), base) as u32).collect())
        })
        .collect();
    FinGroup::generate(z.size(), &perms, g.order().max(1))
}

/// Summand catalog indexed by conjugacy classes of subgroups.
pub fn splitting_catalog(g: &Group, m: usize, q_max: usize, caps: &Caps) -> Result<SplittingCatalog> {
    let classes = subgroup_classes(g, caps)?;
    let mut out = Vec::new();
    for cls in &classes {
        let h = &cls[0];
        let wg = weyl_on_cosets(h)?;
        out.push(SplittingClass {
            h: subgroup_perms(h),
            index: h.index(),
            wh: wg.content_hash().to_string(),
            wh_order: wg.order(),
            summands: summands(m, h.index(), wg.order(), q_max),
            transfer_marker: 1,
        });
    }
    Ok(SplittingCatalog {
        group: g.content_hash().to_string(),
        m,
        q_max,
        truncated: true,
        note: CATALOG_NOTE.into(),
        classes: out,
    })
}

/// The same catalog with `|G/H|` counted on the coset G-set, `WH` taken as the
/// brute-force automorphism group of `G/H`, and dimensions counted on bases.
pub fn splitting_catalog_bruteforce(g: &Group, m: usize, q_max: usize, caps: &Caps) -> Result<SplittingCatalog> {
    let classes = subgroup_classes(g, caps)?;
    let mut out = Vec::new();
    for cls in &classes {
        let h = &cls[0];
        let orbit = GSet::coset_space(h);
        let aut = aut_gset(&orbit, caps)?;
        let wg = aut.group.expect("brute force materializes the group");
        let index = orbit.size();
        let cell = GSet::trivial(g, m).disjoint_union(&orbit)?;
        let summands = (0..=q_max)
            .map(|q| {
                let power = (0..q).try_fold(GSet::trivial(g, 0), |acc, _| acc.disjoint_union(&cell));
                let susp = (0..q).try_fold(GSet::trivial(g, 0), |acc, _| acc.disjoint_union(&orbit));
                Ok(Summand {
                    q,
                    cell_dim: power?.size(),
                    suspension_dim: susp?.size(),
                    sym_group: format!("Σ{q}≀W"),
                    sym_order: sym_order(q, aut.order),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(SplittingClass {
            h: subgroup_perms(h),
            index,
            wh: wg.content_hash().to_string(),
            wh_order: wg.order(),
            summands,
            transfer_marker: 1,
        });
    }
    Ok(SplittingCatalog {
        group: g.content_hash().to_string(),
        m,
        q_max,
        truncated: true,
        note: CATALOG_NOTE.into(),
        classes: out,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bookkeeping {
    /// `dim ((ℝ^m ⊕ ℝ⟨G⟩) ⊗ ℝ⟨Z⟩)^G` by orbit counting.
    pub cell_dim: usize,
    /// `dim ℝ⟨G × Z⟩^G` by orbit counting.
    pub suspension_dim: usize,
    /// The same two dimensions as twisted fixed points of `σ` with trivial cofactors.
    pub twisted_cell_dim: usize,
    pub twisted_suspension_dim: usize,
    pub agree: bool,
}

/// Fixed-point dimensions for the G-set `Z` of `σ: G -> Σ_q`.
pub fn fixed_point_bookkeeping(sigma: &GroupHom, m: usize) -> Result<Bookkeeping> {
    let g = &sigma.source;
    let z = GSet::from_hom(sigma);
    let q = z.size();
    let regular = GSet::regular(g);
    let cell = GSet::trivial(g, m).disjoint_union(&regular)?;
    let cell_dim = cell.product(&z)?.orbits().len();
    let suspension_dim = regular.product(&z)?.orbits().len();

    let one = crate::group::trivial();
    let s: Vec<Perm> = sigma.map.iter().map(|&x| sigma.target.element(x).clone()).collect();
    let w = if q == 0 {
        WreathHom::from_permutation_action(g, &one, &vec![Perm::identity(0); g.order()])?
    } else {
        WreathHom::from_permutation_action(g, &one, &s)?
    };
    let twisted_cell_dim = twisted_fixed_dim(&BiSet::from_gset(&cell, &one), &w)?;
    let twisted_suspension_dim = twisted_fixed_dim(&BiSet::from_gset(&regular, &one), &w)?;
    Ok(Bookkeeping {
        cell_dim,
        suspension_dim,
        twisted_cell_dim,
        twisted_suspension_dim,
        agree: cell_dim == twisted_cell_dim && suspension_dim == twisted_suspension_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentialCheck {
    pub q: usize,
    /// `Σ_{[Z], |Z|=q} 1/|Aut_G(Z)|` with brute-force automorphism orders.
    pub class_sum: Rational,
    /// `|Hom(G, Σ_q)| / q!`.
    pub hom_ratio: Rational,
}

impl ExponentialCheck {
    pub fn holds(&self) -> bool {
        self.class_sum == self.hom_ratio
    }
}

/// Orbit-stabilizer cross-check between the classification and the hom count.
pub fn exponential_identity(g: &Group, q: usize, caps: &Caps) -> Result<ExponentialCheck> {
    let cl = gset_iso_classes(g, q, caps)?;
    let mut class_sum = Rational::zero();
    for c in &cl.classes {
        let a = aut_gset(&c.gset, caps)?;
        class_sum += Rational::new(1, a.order as i128);
    }
    let f = factorial(q).ok_or_else(|| Error::InvalidInput("q! overflows".into()))?;
    Ok(ExponentialCheck { q, class_sum, hom_ratio: Rational::new(cl.hom_count as i128, f as i128) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, named, trivial};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn classification_examples() {
        let c2 = cyclic(2);
        let r = gset_iso_classes(&c2, 2, &caps()).unwrap();
        assert_eq!(r.classes.len(), 2);
        assert!(r.agree);
        let r0 = gset_iso_classes(&c2, 0, &caps()).unwrap();
        assert_eq!(r0.classes.len(), 1);
        assert_eq!(r0.classes[0].size, 0);
        for q in 0..5 {
            assert_eq!(gset_iso_classes(&trivial(), q, &caps()).unwrap().classes.len(), 1);
        }
    }

    #[test]
    fn aut_examples() {
        let c2 = cyclic(2);
        let two_points = GSet::trivial(&c2, 2);
        let a = aut_gset(&two_points, &caps()).unwrap();
        assert_eq!((a.order, a.formula_order), (2, 2));
        let free = GSet::regular(&c2);
        let a = aut_gset(&free, &caps()).unwrap();
        assert_eq!(a.order, 2);
        assert!(a.bijection_verified);
        let s3 = named("S3").unwrap();
        let a3 = crate::group::enumerate_subgroups(&s3, &caps()).unwrap().into_iter().find(|h| h.order() == 3).unwrap();
        let a = aut_gset(&GSet::coset_space(&a3), &caps()).unwrap();
        assert_eq!(a.order, 2);
        assert!(a.bijection_verified);
    }

    #[test]
    fn catalog_examples() {
        let c2 = cyclic(2);
        let cat = splitting_catalog(&c2, 1, 2, &caps()).unwrap();
        assert_eq!(cat.classes.len(), 2);
        let whole = cat.classes.iter().find(|c| c.index == 1).unwrap();
        assert_eq!((whole.summands[1].cell_dim, whole.summands[1].suspension_dim), (2, 1));
        let s3 = named("S3").unwrap();
        let cat = splitting_catalog(&s3, 0, 1, &caps()).unwrap();
        let orders: Vec<usize> = cat.classes.iter().map(|c| c.wh_order).collect();
        assert_eq!(orders, vec![6, 1, 2, 1]);
        assert_eq!(cat, splitting_catalog_bruteforce(&s3, 0, 1, &caps()).unwrap());
        assert_eq!(splitting_catalog(&trivial(), 2, 3, &caps()).unwrap().classes.len(), 1);
    }

    #[test]
    fn bookkeeping_examples() {
        let c2 = cyclic(2);
        let sym2 = symmetric(2);
        let free = GroupHom::identity(&c2);
        let free = GroupHom { source: c2.clone(), target: sym2.clone(), map: free.map };
        let b = fixed_point_bookkeeping(&free, 0).unwrap();
        assert_eq!(b.cell_dim, 2);
        assert!(b.agree);
        let empty = GroupHom::trivial(&c2, &symmetric(0));
        let b = fixed_point_bookkeeping(&empty, 3).unwrap();
        assert_eq!((b.cell_dim, b.suspension_dim), (0, 0));
        let point = GroupHom::trivial(&c2, &symmetric(1));
        let b = fixed_point_bookkeeping(&point, 3).unwrap();
        assert_eq!(b.cell_dim, 4);
        assert!(b.agree);
    }

    #[test]
    fn exponential_small() {
        for name in ["C2", "C3", "V4", "S3"] {
            let g = named(name).unwrap();
            for q in 0..=4 {
                assert!(exponential_identity(&g, q, &caps()).unwrap().holds(), "{name} q={q}");
            }
        }
    }
}
