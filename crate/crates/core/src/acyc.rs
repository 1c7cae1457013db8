//! Data tuples `(n, r, (q_0..q_r), (m_i), (l_i), (V_i), Q)` for cyclotomic
//! cells and the operations under which their admissible class is closed.
//!
//! The circle `T(n) = R/nZ` only enters through finite cyclic subgroups
//! `C_m(n) = <n/m>`. Each `V_i` is a permutation representation of the cyclic
//! quotient `C_{m_i}(n)/C_{l_i}(n)` of order `m_i/l_i`, given by the image of
//! the canonical generator. `Q` is a subgroup of `Σ_{q_0} × ... × Σ_{q_r}`,
//! given by permutations of `0..q_0+...+q_r` that preserve the blocks.
//!
//! A homomorphism `Λ(n) = C_n(n) -> Q` is recorded by the image of the
//! generator `1`.

use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleData;
use crate::error::{Caps, Error, Result};
use crate::group::{cyclic, symmetric, trivial, FinGroup, Group, GroupHom, Subgroup};
use crate::gset::{BiSet, GSet};
use crate::perm::Perm;
use crate::schreier::StabChain;

/// A permutation representation of the cyclic group of order `order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicRep {
    pub order: usize,
    pub generator: Perm,
}

impl CyclicRep {
    pub fn regular(order: usize) -> CyclicRep {
        let g = (0..order).map(|i| ((i + 1) % order) as u32).collect();
        CyclicRep { order, generator: Perm::from_images(g).expect("rotation") }
    }

    pub fn trivial(order: usize, dim: usize) -> CyclicRep {
        CyclicRep { order, generator: Perm::identity(dim) }
    }

    pub fn direct_sum(&self, other: &CyclicRep) -> Result<CyclicRep> {
        if self.order != other.order {
            return Err(Error::GroupMismatch("cyclic representations of different orders".into()));
        }
        Ok(CyclicRep { order: self.order, generator: self.generator.direct_sum(&other.generator) })
    }

    pub fn dim(&self) -> usize {
        self.generator.degree()
    }

    /// Whether `generator^order` is the identity.
    pub fn is_valid(&self) -> bool {
        self.order >= 1 && self.order.is_multiple_of(self.generator.order())
    }

    /// Some orbit of the generator has full length `order`.
    pub fn is_semiregular(&self) -> bool {
        self.generator.cycles().iter().any(|c| c.len() == self.order)
    }

    /// Number of orbits of `<generator^e>` on the basis.
    pub fn orbits_of_power(&self, e: usize) -> usize {
        self.generator.pow(e).cycles().len()
    }

    /// As a `GSet` of `cyclic(order)`, element `k` acting as `generator^k`.
    pub fn gset(&self) -> Result<GSet> {
        let g = cyclic(self.order);
        let perms: Vec<Perm> = g.generators().iter().map(|&k| self.generator.pow(k)).collect();
        GSet::from_generator_images(&g, self.dim(), g.generators(), &perms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AcycData {
    pub n: usize,
    /// `q_0, ..., q_r`.
    pub q: Vec<usize>,
    pub m: Vec<usize>,
    pub l: Vec<usize>,
    pub v: Vec<CyclicRep>,
    /// Generators of `Q` acting on `0..q_0+...+q_r`, block `i` occupying
    /// `offset(i)..offset(i)+q_i`.
    pub q_generators: Vec<Perm>,
}

/// Outcome of a membership test, with the failed conditions spelled out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub reasons: Vec<String>,
}

impl AcycData {
    pub fn r(&self) -> usize {
        self.m.len()
    }

    pub fn degree(&self) -> usize {
        self.q.iter().sum()
    }

    pub fn offset(&self, block: usize) -> usize {
        self.q[..block].iter().sum()
    }

    /// The component of `g` in `Σ_{q_block}`.
    pub fn block_part(&self, g: &Perm, block: usize) -> Perm {
        g.restrict_block(self.offset(block), self.q[block])
    }

    pub fn q_group(&self, caps: &Caps) -> Result<Group> {
        FinGroup::generate(self.degree(), &self.q_generators, caps.materialize)
    }

    /// Structural problems; an empty list means the data is valid.
    pub fn validate(&self, _caps: &Caps) -> Vec<String> {
        self.structural_violations()
    }

    /// Stabilizer chain of `Q` with base starting at `prefix`; never lists
    /// the elements.
    pub fn q_chain(&self, prefix: &[usize]) -> StabChain {
        StabChain::new(self.degree(), &self.q_generators, prefix)
    }

    fn structural_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let r = self.r();
        if self.n == 0 {
            out.push("n must be at least 1".into());
        }
        if r == 0 {
            out.push("r must be at least 1".into());
        }
        if self.q.len() != r + 1 || self.l.len() != r || self.v.len() != r {
            out.push(format!(
                "expected r+1 = {} block sizes and r = {r} values of l and V, got {}, {}, {}",
                r + 1,
                self.q.len(),
                self.l.len(),
                self.v.len()
            ));
            return out;
        }
        for i in 0..r {
            let idx = i + 1;
            if self.q[idx] == 0 {
                out.push(format!("q_{idx} must be at least 1"));
            }
            let (m, l) = (self.m[i], self.l[i]);
            if m == 0 || l == 0 {
                out.push(format!("m_{idx} and l_{idx} must be at least 1"));
                continue;
            }
            if self.n > 0 && !self.n.is_multiple_of(l) {
                out.push(format!("l_{idx} = {l} does not divide n = {}", self.n));
            }
            if m % l != 0 {
                out.push(format!("l_{idx} = {l} does not divide m_{idx} = {m}"));
                continue;
            }
            let v = &self.v[i];
            if v.order != m / l {
                out.push(format!(
                    "V_{idx} is a representation of a cyclic group of order {}, expected m/l = {}",
                    v.order,
                    m / l
                ));
            } else if !v.is_valid() {
                out.push(format!("V_{idx}: generator order does not divide {}", v.order));
            }
        }
        let deg = self.degree();
        for (k, g) in self.q_generators.iter().enumerate() {
            if g.degree() != deg {
                out.push(format!("Q generator {k} has degree {}, expected {deg}", g.degree()));
                continue;
            }
            for b in 0..self.q.len() {
                let off = self.offset(b);
                if (off..off + self.q[b]).any(|x| {
                    let y = g.image(x);
                    y < off || y >= off + self.q[b]
                }) {
                    out.push(format!("Q generator {k} does not preserve block {b}"));
                }
            }
        }
        out
    }

    fn check(&self, _caps: &Caps) -> Result<()> {
        let v = self.structural_violations();
        if !v.is_empty() {
            return Err(Error::InvalidInput(v.join("; ")));
        }
        Ok(())
    }

    /// Generator images `g ∈ Q` with `ord(g) | total` and `ord(g|block b) | bound[b]`.
    fn homs_with(&self, qg: &Group, total: usize, bounds: &[usize]) -> Vec<Perm> {
        qg.elements()
            .iter()
            .filter(|g| {
                total.is_multiple_of(g.order())
                    && bounds.iter().enumerate().all(|(b, &d)| d % self.block_part(g, b).order() == 0)
            })
            .cloned()
            .collect()
    }

    /// `Hom(𝒬)`: generator images whose block `i > 0` part has order dividing `n/l_i`.
    pub fn hom_set(&self, caps: &Caps) -> Result<Vec<Perm>> {
        self.check(caps)?;
        let qg = self.q_group(caps)?;
        let mut bounds = vec![self.n];
        bounds.extend(self.l.iter().map(|&l| self.n / l));
        Ok(self.homs_with(&qg, self.n, &bounds))
    }

    /// Homomorphisms `C_{kn}(n) -> Q` killing `C_{l_i}(n)` in every block `i > 0`.
    pub fn hom_set_extended(&self, k: usize, caps: &Caps) -> Result<Vec<Perm>> {
        self.check(caps)?;
        let qg = self.q_group(caps)?;
        let kn = k * self.n;
        let mut bounds = vec![kn];
        bounds.extend(self.l.iter().map(|&l| kn / l));
        Ok(self.homs_with(&qg, kn, &bounds))
    }

    pub fn in_d_acyc(&self, caps: &Caps) -> Result<Membership> {
        self.check(caps)?;
        let mut reasons = Vec::new();
        // The kernel of Q -> Σ_{q_1} × ... × Σ_{q_r} fixes every point outside block 0.
        let outside: Vec<usize> = (self.q[0]..self.degree()).collect();
        let chain = self.q_chain(&outside);
        if let Some(g) = chain.stabilizer_generators(outside.len()).first() {
            reasons.push(format!("Q element {:?} acts only on the q_0 block", g.images()));
        }
        for (i, v) in self.v.iter().enumerate() {
            if !v.is_semiregular() {
                reasons.push(format!("V_{} has no free orbit", i + 1));
            }
        }
        Ok(Membership { member: reasons.is_empty(), reasons })
    }

    pub fn in_d_acyc_p(&self, p: usize, caps: &Caps) -> Result<Membership> {
        let mut mem = self.in_d_acyc(caps)?;
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if !is_power_of(self.n, p) {
            mem.reasons.push(format!("n = {} is not a power of {p}", self.n));
        }
        for (i, &m) in self.m.iter().enumerate() {
            if !is_power_of(m, p) {
                mem.reasons.push(format!("m_{} = {m} is not a power of {p}", i + 1));
            }
        }
        mem.member = mem.reasons.is_empty();
        Ok(mem)
    }
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn is_power_of(mut x: usize, p: usize) -> bool {
    while x > 1 && x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

// ---------------------------------------------------------------------------
// Closure operations

/// `k𝒬` with the bijection `Hom(𝒬) -> Hom_k(k𝒬)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StretchReport {
    pub data: AcycData,
    /// `(σ, σ')` by generator images; the canonical bijection keeps the image.
    pub bijection: Vec<(Perm, Perm)>,
    pub hom_count: usize,
    /// `|Hom_k(k𝒬)|` by direct enumeration.
    pub hom_k_count: usize,
    /// `|Hom(k𝒬)|`, which can exceed `|Hom_k(k𝒬)|` when `q_0 > 0`.
    pub stretched_hom_count: usize,
    pub bijective: bool,
    pub member_before: bool,
    pub member_after: bool,
}

pub fn stretch(d: &AcycData, k: usize, caps: &Caps) -> Result<StretchReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    d.check(caps)?;
    let data = AcycData {
        n: k * d.n,
        q: d.q.clone(),
        m: d.m.iter().map(|&m| k * m).collect(),
        l: d.l.iter().map(|&l| k * l).collect(),
        v: d.v.clone(),
        q_generators: d.q_generators.clone(),
    };
    let homs = d.hom_set(caps)?;
    let stretched = data.hom_set(caps)?;
    // Hom_k: the Σ_{q_0} part must kill C_k(kn) = <n>.
    let hom_k: Vec<Perm> =
        stretched.iter().filter(|g| d.block_part(g, 0).pow(d.n).is_identity()).cloned().collect();
    let bijection: Vec<(Perm, Perm)> = homs.iter().map(|g| (g.clone(), g.clone())).collect();
    let bijective = hom_k == homs;
    Ok(StretchReport {
        hom_count: homs.len(),
        hom_k_count: hom_k.len(),
        stretched_hom_count: stretched.len(),
        bijective,
        member_before: d.in_d_acyc(caps)?.member,
        member_after: data.in_d_acyc(caps)?.member,
        bijection,
        data,
    })
}

/// Concatenation over `n = lcm(n_A, n_B)` after stretching both sides.
pub fn smash(a: &AcycData, b: &AcycData, caps: &Caps) -> Result<AcycData> {
    a.check(caps)?;
    b.check(caps)?;
    let n = a.n.lcm(&b.n);
    let sa = stretch_data(a, n / a.n);
    let sb = stretch_data(b, n / b.n);
    let mut q = vec![sa.q[0] + sb.q[0]];
    q.extend_from_slice(&sa.q[1..]);
    q.extend_from_slice(&sb.q[1..]);
    let deg: usize = q.iter().sum();
    // New position of each old point of A and B.
    let (a0, b0) = (sa.q[0], sb.q[0]);
    let (da, db) = (sa.degree(), sb.degree());
    let pos_a = |x: usize| if x < a0 { x } else { x + b0 };
    let pos_b = |x: usize| if x < b0 { a0 + x } else { x - b0 + da + b0 };
    let embed = |g: &Perm, own: &dyn Fn(usize) -> usize, len: usize| {
        let mut img: Vec<u32> = (0..deg as u32).collect();
        for x in 0..len {
            img[own(x)] = own(g.image(x)) as u32;
        }
        Perm::from_images(img).expect("block embedding")
    };
    let mut gens: Vec<Perm> = sa.q_generators.iter().map(|g| embed(g, &pos_a, da)).collect();
    gens.extend(sb.q_generators.iter().map(|g| embed(g, &pos_b, db)));
    let mut m = sa.m.clone();
    m.extend_from_slice(&sb.m);
    let mut l = sa.l.clone();
    l.extend_from_slice(&sb.l);
    let mut v = sa.v.clone();
    v.extend_from_slice(&sb.v);
    Ok(AcycData { n, q, m, l, v, q_generators: gens })
}

fn stretch_data(d: &AcycData, k: usize) -> AcycData {
    AcycData {
        n: k * d.n,
        q: d.q.clone(),
        m: d.m.iter().map(|&m| k * m).collect(),
        l: d.l.iter().map(|&l| k * l).collect(),
        v: d.v.clone(),
        q_generators: d.q_generators.clone(),
    }
}

/// `𝒬(k)` together with the restriction of its homomorphisms to `C_n(kn)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiReport {
    pub data: AcycData,
    /// For each `σ ∈ Hom(𝒬(k))`, the image of the generator `k` of `C_n(kn)`.
    pub restrictions: Vec<(Perm, Perm)>,
    /// Over all homomorphisms `Λ(kn) -> Q`: membership in `Hom(𝒬(k))` agrees
    /// with legality of the restriction.
    pub restriction_criterion_holds: bool,
}

/// Re-reads the data over `T(kn)` along the k-th root; only `n` changes.
/// Requires the finite faithfulness shadow to pass up to `k`.
pub fn phi(d: &AcycData, k: usize, caps: &Caps) -> Result<PhiReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    d.check(caps)?;
    let shadow = faithfulness_shadow(d, k, caps)?;
    if !shadow.holds {
        return Err(Error::FaithfulnessShadowFails(shadow.summary()));
    }
    let data = AcycData { n: k * d.n, ..d.clone() };
    let homs = data.hom_set(caps)?;
    let qg = d.q_group(caps)?;
    let legal_restriction = |r: &Perm| {
        d.n.is_multiple_of(r.order())
            && d.l.iter().enumerate().all(|(i, &l)| (d.n / l).is_multiple_of(d.block_part(r, i + 1).order()))
    };
    let restrictions = homs.iter().map(|g| (g.clone(), g.pow(k))).collect();
    let all = data.homs_with(&qg, data.n, &vec![data.n; d.q.len()]);
    let restriction_criterion_holds =
        all.iter().all(|g| homs.binary_search(g).is_ok() == legal_restriction(&g.pow(k)));
    Ok(PhiReport { data, restrictions, restriction_criterion_holds })
}

/// `S^k 𝒬`: every block becomes `k` copies of itself and `Q` becomes `Σ_k ≀ Q`
/// acting diagonally on the copies.
pub fn sym(d: &AcycData, k: usize, caps: &Caps) -> Result<AcycData> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    d.check(caps)?;
    let q: Vec<usize> = d.q.iter().map(|&x| k * x).collect();
    let deg = k * d.degree();
    // Old point x of block b in copy j sits at offset'(b) + j*q_b + (x - offset(b)).
    let new_off: Vec<usize> = (0..q.len()).map(|b| q[..b].iter().sum()).collect();
    let block_of = |x: usize| (0..d.q.len()).rfind(|&b| d.offset(b) <= x && d.q[b] > 0).unwrap_or(0);
    let pos = |j: usize, x: usize| {
        let b = block_of(x);
        new_off[b] + j * d.q[b] + (x - d.offset(b))
    };
    let mut gens = Vec::new();
    let copies = symmetric(k);
    for &t in copies.generators() {
        let t = copies.element(t);
        let mut img = vec![0u32; deg];
        for j in 0..k {
            for x in 0..d.degree() {
                img[pos(j, x)] = pos(t.image(j), x) as u32;
            }
        }
        gens.push(Perm::from_images(img)?);
    }
    for g in &d.q_generators {
        let mut img: Vec<u32> = (0..deg as u32).collect();
        for x in 0..d.degree() {
            img[pos(0, x)] = pos(0, g.image(x)) as u32;
        }
        gens.push(Perm::from_images(img)?);
    }
    let out = AcycData { q, q_generators: gens, ..d.clone() };
    let expected = d
        .q_chain(&[])
        .order()
        .and_then(|x| x.checked_pow(k as u32))
        .and_then(|x| (1..=k as u128).try_fold(x, |acc, i| acc.checked_mul(i)));
    let got = out.q_chain(&[]).order();
    if got.is_none() || got != expected {
        return Err(Error::InvalidInput(format!("Σ_k ≀ Q has order {got:?}, expected {expected:?}")));
    }
    Ok(out)
}

/// `q_0 -> q_0 + 1`, with `Q` fixing the new point.
pub fn free_smash(d: &AcycData) -> AcycData {
    let q0 = d.q[0];
    let deg = d.degree() + 1;
    let shift = |x: usize| if x < q0 { x } else { x + 1 };
    let gens = d
        .q_generators
        .iter()
        .map(|g| {
            let mut img: Vec<u32> = (0..deg as u32).collect();
            for x in 0..d.degree() {
                img[shift(x)] = shift(g.image(x)) as u32;
            }
            Perm::from_images(img).expect("shifted generator")
        })
        .collect();
    let mut q = d.q.clone();
    q[0] += 1;
    AcycData { q, q_generators: gens, ..d.clone() }
}

// ---------------------------------------------------------------------------
// Components

/// `T(n)/C_m(n)`: the position of one orbit representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleLabel {
    pub n: usize,
    pub m: usize,
    /// Length of the `σ`-orbit on coordinates that this factor parametrizes.
    pub orbit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockComponent {
    pub block: usize,
    pub orbit_sizes: Vec<usize>,
    /// Fiber dimension contributed by each orbit.
    pub fiber_dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub sigma: Perm,
    /// Empty when some orbit stabilizer is not contained in `C_{m_i}(n)`.
    pub nonempty: bool,
    /// One circle per orbit in blocks `i > 0`; the `q_0` block contributes a point.
    pub base: Vec<CircleLabel>,
    pub blocks: Vec<BlockComponent>,
    pub fiber_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCatalog {
    pub n: usize,
    pub components: Vec<Component>,
    /// For each generator of `Q`, the permutation `σ -> u^{-1} σ u` of component indices.
    pub q_action: Vec<Vec<usize>>,
}

/// Per `σ ∈ Hom(𝒬)`, the twisted fixed base and fiber of `η_𝒬`. An orbit of
/// length `o` in block `i` has stabilizer `C_{n/o}(n)`; it fixes a point of
/// `T(n)/C_{m_i}(n)` iff `n/o | m_i`, and then acts on `V_i` through
/// `generator^{m_i o / n}`.
pub fn component_catalog(d: &AcycData, caps: &Caps) -> Result<ComponentCatalog> {
    let homs = d.hom_set(caps)?;
    let qg = d.q_group(caps)?;
    let mut components = Vec::with_capacity(homs.len());
    for g in &homs {
        let mut blocks = Vec::new();
        let mut base = Vec::new();
        let mut nonempty = true;
        for b in 0..d.q.len() {
            let part = d.block_part(g, b);
            let orbit_sizes: Vec<usize> = part.cycles().iter().map(|c| c.len()).collect();
            let fiber_dims: Vec<usize> = if b == 0 {
                vec![1; orbit_sizes.len()]
            } else {
                let (m, v) = (d.m[b - 1], &d.v[b - 1]);
                orbit_sizes
                    .iter()
                    .map(|&o| {
                        let h = d.n / o;
                        if m % h != 0 {
                            nonempty = false;
                            0
                        } else {
                            v.orbits_of_power(m / h)
                        }
                    })
                    .collect()
            };
            if b > 0 {
                base.extend(orbit_sizes.iter().map(|&o| CircleLabel { n: d.n, m: d.m[b - 1], orbit: o }));
            }
            blocks.push(BlockComponent { block: b, orbit_sizes, fiber_dims });
        }
        let fiber_dim = if nonempty { blocks.iter().flat_map(|c| &c.fiber_dims).sum() } else { 0 };
        components.push(Component { sigma: g.clone(), nonempty, base, blocks, fiber_dim });
    }
    let index: HashMap<&Perm, usize> = homs.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let q_action = qg
        .generators()
        .iter()
        .map(|&u| {
            let up = qg.element(u);
            let uinv = up.inverse();
            homs.iter().map(|g| index[&uinv.compose(g).compose(up)]).collect()
        })
        .collect();
    Ok(ComponentCatalog { n: d.n, components, q_action })
}

// ---------------------------------------------------------------------------
// Finite model and faithfulness

/// `η_𝒬` restricted to the finite subgroup `C_big(n)` of `T(n)`, where `big`
/// is a multiple of `n` and every `m_i`. Element `j` of `cyclic(big)` is the
/// rotation by `j·n/big`.
pub fn finite_model(d: &AcycData, big: usize, caps: &Caps) -> Result<BundleData> {
    d.check(caps)?;
    if !big.is_multiple_of(d.n) || d.m.iter().any(|&m| !big.is_multiple_of(m)) {
        return Err(Error::DivisibilityViolation(format!("{big} is not a common multiple of n and all m_i")));
    }
    let gamma = cyclic(big);
    let one = trivial();
    let mut blocks: Vec<BundleData> = Vec::new();
    if d.q[0] > 0 {
        let q0 = d.q[0];
        let s = symmetric(q0);
        let right: Vec<Perm> = s.generators().iter().map(|&x| s.element(x).inverse()).collect();
        let left: Vec<Perm> = gamma.generators().iter().map(|_| Perm::identity(q0)).collect();
        let fiber = BiSet::new(&gamma, &s, q0, &left, &right)?;
        blocks.push(BundleData::over_point(&fiber));
    }
    for i in 0..d.r() {
        let eta = circle_bundle(&gamma, big, d.m[i], &d.v[i], &one)?;
        let sp = eta.sym_power(d.q[i + 1], None, caps)?;
        blocks.push(sp.bundle);
    }
    let mut it = blocks.into_iter();
    let mut acc = it.next().expect("r >= 1");
    for b in it {
        acc = acc.product(&b, caps)?.0;
    }
    let qg = d.q_group(caps)?;
    let big_q = acc.q().clone();
    let map = qg
        .elements()
        .iter()
        .map(|p| big_q.index_of(p).ok_or_else(|| Error::NotASubgroup("Q is not inside the block product".into())))
        .collect::<Result<Vec<usize>>>()?;
    let inc = GroupHom { source: qg, target: big_q, map };
    acc.restrict_groups(&GroupHom::identity(&gamma), &inc)
}

/// `C_big(n) ×_{C_m(n)} V -> C_big(n)/C_m(n)`, the generator of `C_m(n)`
/// acting on `V` through the canonical generator of its cyclic quotient.
fn circle_bundle(gamma: &Group, big: usize, m: usize, v: &CyclicRep, q: &Group) -> Result<BundleData> {
    let nb = big / m;
    let dim = v.dim();
    let rot_base = Perm::from_images((0..nb).map(|c| ((c + 1) % nb) as u32).collect())?;
    let mut img = vec![0u32; nb * dim];
    for c in 0..nb {
        for x in 0..dim {
            img[c * dim + x] = if c + 1 < nb {
                ((c + 1) * dim + x) as u32
            } else {
                v.generator.image(x) as u32
            };
        }
    }
    let rot_tot = Perm::from_images(img)?;
    let lb: Vec<Perm> = gamma.generators().iter().map(|&g| rot_base.pow(g)).collect();
    let lt: Vec<Perm> = gamma.generators().iter().map(|&g| rot_tot.pow(g)).collect();
    let rb: Vec<Perm> = q.generators().iter().map(|_| Perm::identity(nb)).collect();
    let rt: Vec<Perm> = q.generators().iter().map(|_| Perm::identity(nb * dim)).collect();
    let base = BiSet::new(gamma, q, nb, &lb, &rb)?;
    let total = BiSet::new(gamma, q, nb * dim, &lt, &rt)?;
    BundleData::new(base, total, (0..nb * dim).map(|e| e / dim).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowLevel {
    pub k: usize,
    /// Homomorphisms `C_{kn}(n) -> Q` satisfying the kernel conditions.
    pub homs: usize,
    /// How many of them have a nonempty twisted fixed base.
    pub components: usize,
    pub faithful: bool,
    /// `(generator image, Q element)` with the element fixing a base point of
    /// that component and acting trivially on its fiber.
    pub witness: Option<(Perm, Perm)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowReport {
    pub holds: bool,
    pub levels: Vec<ShadowLevel>,
}

impl ShadowReport {
    pub fn summary(&self) -> String {
        match self.levels.iter().find(|l| !l.faithful) {
            None => "faithful".into(),
            Some(l) => format!("not Q-faithful at k = {}: {:?}", l.k, l.witness),
        }
    }
}

/// Per-orbit data of `g` for the closed-form shadow.
struct OrbitData {
    block: usize,
    cycle: Vec<usize>,
}

/// For `k = 1..=k_max`, checks that `Q` acts faithfully on the fibers of
/// `∐_σ η_𝒬^{C_{kn}(n), σ}` over the homomorphisms killing each `C_{l_i}(n)`.
///
/// Works orbit by orbit. Let `g = σ(1/k)` and `s ∈ Q` fix a base point. Every
/// `⟨g⟩`-orbit carries a nonzero fiber summand, so a trivially acting `s`
/// centralizes `g` and preserves each orbit, acting on an orbit `O` of block
/// `i` as some `g^t`. It then fixes the base point iff `kn | t m_i` (for any
/// position), and acts on the summand `V_i^{<x^{o m_i/kn}>}` through
/// `x^{t m_i/kn}`, `x` the generator of `V_i`. The candidates are therefore
/// products of orbit powers, tested for membership in `Q`.
pub fn faithfulness_shadow(d: &AcycData, k_max: usize, caps: &Caps) -> Result<ShadowReport> {
    d.check(caps)?;
    let qg = d.q_group(caps)?;
    let mut levels = Vec::new();
    for k in 1..=k_max {
        let kn = k * d.n;
        let allowed = d.hom_set_extended(k, caps)?;
        let mut components = 0;
        let mut witness = None;
        for g in &allowed {
            let orbits = orbit_data(d, g);
            let nonempty = orbits.iter().all(|o| o.block == 0 || (o.cycle.len() * d.m[o.block - 1]).is_multiple_of(kn));
            if !nonempty {
                continue;
            }
            components += 1;
            if witness.is_none() {
                witness = trivial_isotropy(d, &qg, &orbits, kn, caps)?.map(|s| (g.clone(), s));
            }
        }
        levels.push(ShadowLevel { k, homs: allowed.len(), components, faithful: witness.is_none(), witness });
    }
    Ok(ShadowReport { holds: levels.iter().all(|l| l.faithful), levels })
}

fn orbit_data(d: &AcycData, g: &Perm) -> Vec<OrbitData> {
    let mut out = Vec::new();
    for b in 0..d.q.len() {
        let off = d.offset(b);
        for c in d.block_part(g, b).cycles() {
            out.push(OrbitData { block: b, cycle: c.iter().map(|&x| x + off).collect() });
        }
    }
    out
}

/// A nonidentity element of `Q` built from admissible powers of `σ(1/k)` on
/// each orbit that acts trivially on the fiber, if any.
fn trivial_isotropy(
    d: &AcycData,
    qg: &Group,
    orbits: &[OrbitData],
    kn: usize,
    caps: &Caps,
) -> Result<Option<Perm>> {
    let mut choices: Vec<Vec<usize>> = Vec::with_capacity(orbits.len());
    for o in orbits {
        let len = o.cycle.len();
        let ts: Vec<usize> = if o.block == 0 {
            (0..len).collect()
        } else {
            let (m, v) = (d.m[o.block - 1], &d.v[o.block - 1]);
            let fixed = v.generator.pow(len * m / kn);
            (0..len)
                .filter(|&t| (t * m) % kn == 0 && preserves_cycles(&v.generator.pow(t * m / kn), &fixed))
                .collect()
        };
        choices.push(ts);
    }
    let total = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len())).unwrap_or(usize::MAX);
    if total > caps.hom_candidates {
        return Err(Error::EnumerationCapExceeded {
            what: "shadow candidates".into(),
            needed: total,
            cap: caps.hom_candidates,
        });
    }
    let deg = d.degree();
    let mut idx = vec![0usize; orbits.len()];
    loop {
        if idx.iter().any(|&i| i != 0) {
            let mut img: Vec<u32> = (0..deg as u32).collect();
            for (o, (ts, &i)) in orbits.iter().zip(choices.iter().zip(&idx)) {
                let (t, len) = (ts[i], o.cycle.len());
                for (a, &x) in o.cycle.iter().enumerate() {
                    img[x] = o.cycle[(a + t) % len] as u32;
                }
            }
            let s = Perm::from_images_unchecked(img);
            if qg.index_of(&s).is_some() {
                return Ok(Some(s));
            }
        }
        // Odometer over the choices; every list contains t = 0 first.
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `a` maps every cycle of `h` onto itself.
fn preserves_cycles(a: &Perm, h: &Perm) -> bool {
    h.cycles().iter().all(|c| c.contains(&a.image(c[0])))
}

/// The same check on the finite model: builds the derived bundle over
/// `C_big(n)` and tests faithfulness point by point. Exponential in the `q_i`;
/// kept as an oracle for small data.
pub fn faithfulness_shadow_finite(d: &AcycData, k_max: usize, caps: &Caps) -> Result<ShadowReport> {
    d.check(caps)?;
    let mut levels = Vec::new();
    for k in 1..=k_max {
        let kn = k * d.n;
        let big = d.m.iter().fold(kn, |acc, &m| acc.lcm(&m));
        let points: usize = d
            .m
            .iter()
            .zip(&d.q[1..])
            .try_fold(1usize, |acc, (&m, &q)| acc.checked_mul((big / m).checked_pow(q as u32)?))
            .unwrap_or(usize::MAX);
        caps.check_materialize("finite model base points", points)?;
        let model = finite_model(d, big, caps)?;
        let gamma = model.gamma().clone();
        let step = big / kn;
        let lam = Subgroup::from_members(&gamma, &(0..kn).map(|j| j * step).collect::<Vec<_>>())?;
        let derived = model.eta_lambda(&lam, caps)?;
        let allowed = d.hom_set_extended(k, caps)?;
        let gen_index = if kn > 1 { 1 } else { 0 };
        let qg = model.q();
        let image = |x: usize| qg.element(derived.homs[derived.component[x]].map[gen_index]);
        let keep: Vec<usize> =
            (0..derived.bundle.base().size()).filter(|&x| allowed.binary_search(image(x)).is_ok()).collect();
        let mut comps: Vec<usize> = keep.iter().map(|&x| derived.component[x]).collect();
        comps.dedup();
        let (theta, _) = derived.bundle.restrict_base(&keep)?;
        let rep = theta.is_q_faithful();
        let witness = rep.witness.map(|(b, s)| (image(keep[b]).clone(), qg.element(s).clone()));
        levels.push(ShadowLevel {
            k,
            homs: allowed.len(),
            components: comps.len(),
            faithful: rep.faithful,
            witness,
        });
    }
    Ok(ShadowReport { holds: levels.iter().all(|l| l.faithful), levels })
}

/// Fiber dimension of each `σ`-component computed on the finite model with
/// `k = 1`; absent components map to `None`.
pub fn finite_component_dims(d: &AcycData, caps: &Caps) -> Result<Vec<Option<usize>>> {
    let big = d.m.iter().fold(d.n, |acc, &m| acc.lcm(&m));
    let model = finite_model(d, big, caps)?;
    let gamma = model.gamma().clone();
    let step = big / d.n;
    let lam = Subgroup::from_members(&gamma, &(0..d.n).map(|j| j * step).collect::<Vec<_>>())?;
    let derived = model.eta_lambda(&lam, caps)?;
    let homs = d.hom_set(caps)?;
    let gen_index = if d.n > 1 { 1 } else { 0 };
    let qg = model.q();
    let mut out = vec![None; homs.len()];
    for x in 0..derived.bundle.base().size() {
        let img = qg.element(derived.homs[derived.component[x]].map[gen_index]);
        if let Ok(c) = homs.binary_search(img) {
            let dim = derived.bundle.fiber_dim(x);
            match out[c] {
                None => out[c] = Some(dim),
                Some(prev) if prev != dim => {
                    return Err(Error::InvalidInput("fiber dimension varies within a component".into()))
                }
                _ => {}
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard() -> AcycData {
        AcycData {
            n: 2,
            q: vec![0, 2],
            m: vec![2],
            l: vec![1],
            v: vec![CyclicRep::regular(2)],
            q_generators: vec![Perm::from_cycles(2, &[&[0, 1]]).unwrap()],
        }
    }

    fn unit() -> AcycData {
        AcycData {
            n: 1,
            q: vec![0, 1],
            m: vec![1],
            l: vec![1],
            v: vec![CyclicRep::trivial(1, 1)],
            q_generators: vec![],
        }
    }

    #[test]
    fn validation_examples() {
        let caps = Caps::default();
        assert!(standard().validate(&caps).is_empty());
        let bad = AcycData { l: vec![3], ..standard() };
        assert!(bad.validate(&caps).iter().any(|v| v.contains("does not divide n")));
        let wrong_v = AcycData { v: vec![CyclicRep::regular(3)], ..standard() };
        assert!(!wrong_v.validate(&caps).is_empty());
    }

    #[test]
    fn hom_set_examples() {
        let caps = Caps::default();
        assert_eq!(standard().hom_set(&caps).unwrap().len(), 2);
        assert_eq!(unit().hom_set(&caps).unwrap().len(), 1);
        let l2 = AcycData { l: vec![2], v: vec![CyclicRep::regular(1)], ..standard() };
        assert_eq!(l2.hom_set(&caps).unwrap().len(), 1);
    }

    #[test]
    fn membership_examples() {
        let caps = Caps::default();
        assert!(standard().in_d_acyc(&caps).unwrap().member);
        assert!(standard().in_d_acyc_p(2, &caps).unwrap().member);
        let only_q0 = AcycData {
            q: vec![2, 1],
            q_generators: vec![Perm::from_cycles(3, &[&[0, 1]]).unwrap()],
            v: vec![CyclicRep::regular(2)],
            ..standard()
        };
        assert!(!only_q0.in_d_acyc(&caps).unwrap().member);
        let m6 = AcycData { n: 6, m: vec![6], l: vec![3], ..standard() };
        assert!(m6.in_d_acyc(&caps).unwrap().member);
        assert!(!m6.in_d_acyc_p(2, &caps).unwrap().member);
    }

    #[test]
    fn stretch_examples() {
        let caps = Caps::default();
        let s = stretch(&standard(), 3, &caps).unwrap();
        assert_eq!((s.data.n, s.data.m[0], s.data.l[0]), (6, 6, 3));
        assert_eq!(s.bijection.len(), 2);
        assert!(s.bijective && s.member_after);
        assert_eq!(stretch(&standard(), 1, &caps).unwrap().data, standard());
    }

    #[test]
    fn smash_with_unit_and_with_doubling() {
        let caps = Caps::default();
        let s = smash(&standard(), &unit(), &caps).unwrap();
        assert_eq!(s.n, 2);
        assert_eq!(s.q, vec![0, 2, 1]);
        assert_eq!((s.m.clone(), s.l.clone()), (vec![2, 2], vec![1, 2]));
        let s = smash(&unit(), &standard(), &caps).unwrap();
        assert_eq!(s.m[0], 2);
        assert!(s.in_d_acyc(&caps).unwrap().member);
    }

    #[test]
    fn phi_sym_free_examples() {
        let caps = Caps::default();
        let p = phi(&standard(), 2, &caps).unwrap();
        assert_eq!(p.data.n, 4);
        assert_eq!(p.restrictions.len(), 2);
        assert!(p.restriction_criterion_holds);
        let s = sym(&standard(), 2, &caps).unwrap();
        assert_eq!(s.q, vec![0, 4]);
        assert_eq!(s.q_group(&caps).unwrap().order(), 8);
        assert_eq!(sym(&standard(), 1, &caps).unwrap().q_group(&caps).unwrap().order(), 2);
        let f = free_smash(&free_smash(&standard()));
        assert_eq!(f.q[0], 2);
        assert_eq!(f.hom_set(&caps).unwrap().len(), 2);
    }

    #[test]
    fn component_examples() {
        let caps = Caps::default();
        let c = component_catalog(&unit(), &caps).unwrap();
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.components[0].fiber_dim, 1);
        let c = component_catalog(&standard(), &caps).unwrap();
        let dims: Vec<usize> = c.components.iter().map(|x| x.fiber_dim).collect();
        assert_eq!(dims, vec![2, 2]);
        let finite = finite_component_dims(&standard(), &caps).unwrap();
        assert_eq!(finite, vec![Some(2), Some(2)]);
    }

    #[test]
    fn shadow_examples() {
        let caps = Caps::default();
        assert!(faithfulness_shadow(&standard(), 3, &caps).unwrap().holds);
        assert!(faithfulness_shadow(&unit(), 2, &caps).unwrap().holds);
        let triv_v = AcycData { v: vec![CyclicRep::trivial(2, 1)], ..standard() };
        assert!(!triv_v.in_d_acyc(&caps).unwrap().member);
        assert!(!faithfulness_shadow(&triv_v, 2, &caps).unwrap().holds);
    }
}
