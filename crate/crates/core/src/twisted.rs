//! Fixed points of `X^q` under `λ·_σ x = (λx)σ(λ^{-1})` for a homomorphism
//! `σ: Λ -> Σ_q ≀ Q`, computed orbit by orbit.
//!
//! For each orbit `O_j` of `Λ` on `0..q` with chosen point `m_j`, let `H_j`
//! be the stabilizer of `m_j` and `α_j = a_{m_j}|H_j`. Then
//! `(x_j) -> (ℓ_i·x_{j_i}·a_{m_{j_i}}(ℓ_i^{-1}))_i` identifies
//! `∏_j X^{H_j, α_j}` with the fixed points, where `s(ℓ_i)(m_{j_i}) = i`.

use crate::error::{Caps, Error, Result};
use crate::group::{ensure_same, GroupHom, Subgroup};
use crate::gset::BiSet;
use crate::linalg::QMatrix;
use crate::perm::Perm;
use crate::wreath::{WreathElem, WreathHom};

#[derive(Clone, Debug)]
pub struct OrbitData {
    pub points: Vec<usize>,
    /// Chosen point `m_j`.
    pub rep: usize,
    /// Stabilizer `H_j` of `m_j` in `Λ`.
    pub stabilizer: Subgroup,
    /// `H_j` as a group with its inclusion into `Λ`.
    pub inclusion: GroupHom,
    /// `α_j: H_j -> Q`.
    pub alpha: GroupHom,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub orbits: Vec<OrbitData>,
    /// Orbit index `j_i` of each point `i`.
    pub orbit_of: Vec<usize>,
    /// Transporter `ℓ_i` with `s(ℓ_i)(m_{j_i}) = i`.
    pub transporters: Vec<usize>,
}

/// Canonical choice: smallest point of each orbit, smallest transporters.
pub fn decompose(sigma: &WreathHom) -> Result<Decomposition> {
    let reps: Vec<usize> = sigma.orbits().iter().map(|o| o[0]).collect();
    decompose_with(sigma, &reps, None)
}

/// Decomposition with prescribed orbit points and, optionally, transporters.
pub fn decompose_with(sigma: &WreathHom, reps: &[usize], transporters: Option<&[usize]>) -> Result<Decomposition> {
    let lam = &sigma.source;
    let q = sigma.q();
    let orbits = sigma.orbits();
    if reps.len() != orbits.len() {
        return Err(Error::InvalidInput("need exactly one chosen point per orbit".into()));
    }
    let mut orbit_of = vec![usize::MAX; q];
    let mut data = Vec::new();
    for (j, &m) in reps.iter().enumerate() {
        let pts = orbits
            .iter()
            .find(|o| o.binary_search(&m).is_ok())
            .ok_or_else(|| Error::InvalidInput(format!("point {m} out of range")))?;
        for &i in pts {
            if orbit_of[i] != usize::MAX {
                return Err(Error::InvalidInput("two chosen points in one orbit".into()));
            }
            orbit_of[i] = j;
        }
        let members: Vec<usize> = (0..lam.order()).filter(|&l| sigma.s[l].image(m) == m).collect();
        let stabilizer = Subgroup::from_members(lam, &members)?;
        let (hg, inclusion) = stabilizer.to_group();
        let alpha = GroupHom {
            source: hg.clone(),
            target: sigma.base().clone(),
            map: inclusion.map.iter().map(|&l| sigma.a[l][m]).collect(),
        };
        if !alpha.is_homomorphism() {
            return Err(Error::InvalidWreathHom("cofactor at a chosen point is not a homomorphism on its stabilizer".into()));
        }
        data.push(OrbitData { points: pts.clone(), rep: m, stabilizer, inclusion, alpha });
    }
    let transporters = match transporters {
        Some(t) => {
            if t.len() != q {
                return Err(Error::InvalidInput("need one transporter per point".into()));
            }
            for i in 0..q {
                if t[i] >= lam.order() || sigma.s[t[i]].image(data[orbit_of[i]].rep) != i {
                    return Err(Error::InvalidInput(format!("transporter for point {i} does not reach it")));
                }
            }
            t.to_vec()
        }
        None => (0..q)
            .map(|i| {
                let m = data[orbit_of[i]].rep;
                (0..lam.order()).find(|&l| sigma.s[l].image(m) == i).unwrap()
            })
            .collect(),
    };
    Ok(Decomposition { orbits: data, orbit_of, transporters })
}

/// Other valid transporters `ℓ_i·μ` with `μ` the `k`-th non-identity element
/// of `H_{j_i}` (cycling), or `ℓ_i` itself when `H_{j_i}` is trivial.
pub fn alternative_transporters(sigma: &WreathHom, dec: &Decomposition, k: usize) -> Vec<usize> {
    let lam = &sigma.source;
    (0..sigma.q())
        .map(|i| {
            let h = dec.orbits[dec.orbit_of[i]].stabilizer.members();
            if h.len() == 1 {
                dec.transporters[i]
            } else {
                let mu = h[1 + (k + i) % (h.len() - 1)];
                lam.mul(dec.transporters[i], mu)
            }
        })
        .collect()
}

fn check_signature(x: &BiSet, sigma: &WreathHom) -> Result<()> {
    ensure_same(x.left_group(), &sigma.source, "X must be acted on by the source of σ")?;
    ensure_same(x.right_group(), sigma.base(), "X must carry a right action of Q")
}

/// `X^{H, α}`: points with `h·x = x·α(h)`.
pub fn twisted_fixed_set(x: &BiSet, orbit: &OrbitData) -> Vec<usize> {
    x.twisted_fixed_points(&orbit.inclusion, &orbit.alpha)
}

/// Orbits of `H` on `X` under `h * x = h·x·α(h)^{-1}`, i.e. the orbit sums
/// spanning the fixed subspace of `ℝ⟨X⟩`.
pub fn twisted_fixed_orbits(x: &BiSet, orbit: &OrbitData) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..x.size()).collect();
    x.twisted_orbits(&orbit.inclusion, &orbit.alpha, &all)
}

/// Dimension of the fixed subspace of `ℝ⟨X⟩^{⊕q}`: `Σ_j dim ℝ⟨X⟩^{H_j, α_j}`.
pub fn twisted_fixed_dim(x: &BiSet, sigma: &WreathHom) -> Result<usize> {
    check_signature(x, sigma)?;
    let dec = decompose(sigma)?;
    Ok(dec.orbits.iter().map(|o| twisted_fixed_orbits(x, o).len()).sum())
}

/// Per-orbit dimensions `dim ℝ⟨X⟩^{H_j, α_j}`.
pub fn twisted_fixed_dims_by_orbit(x: &BiSet, sigma: &WreathHom) -> Result<Vec<usize>> {
    check_signature(x, sigma)?;
    let dec = decompose(sigma)?;
    Ok(dec.orbits.iter().map(|o| twisted_fixed_orbits(x, o).len()).collect())
}

/// Number of fixed points of the set `X^q`: `∏_j |X^{H_j, α_j}|`.
pub fn twisted_fixed_count(x: &BiSet, sigma: &WreathHom) -> Result<u128> {
    check_signature(x, sigma)?;
    let dec = decompose(sigma)?;
    Ok(dec.orbits.iter().map(|o| twisted_fixed_set(x, o).len() as u128).product())
}

/// The set-level map `∏_j X^{H_j, α_j} -> (X^q)^{Λ, σ}`.
pub fn diagonal_point(x: &BiSet, sigma: &WreathHom, dec: &Decomposition, xs: &[usize]) -> Result<Vec<usize>> {
    if xs.len() != dec.orbits.len() {
        return Err(Error::InvalidInput("need one point per orbit".into()));
    }
    for (o, &p) in dec.orbits.iter().zip(xs) {
        if !twisted_fixed_set(x, o).contains(&p) {
            return Err(Error::InvalidInput(format!("point {p} is not twisted-fixed by its stabilizer")));
        }
    }
    let lam = &sigma.source;
    Ok((0..sigma.q())
        .map(|i| {
            let j = dec.orbit_of[i];
            let l = dec.transporters[i];
            let linv = lam.inv(l);
            x.act_right(x.act_left(l, xs[j]), sigma.a[linv][dec.orbits[j].rep])
        })
        .collect())
}

/// Twisted action of `λ` on the basis `(i, x)` of `ℝ⟨X⟩^{⊕q}`, point `(i, x)`
/// numbered `i·|X| + x`: `(i, x) -> (s(λ)(i), λ·x·a_i(λ^{-1}))`.
pub fn twisted_perm(x: &BiSet, sigma: &WreathHom, l: usize) -> Perm {
    let n = x.size();
    let linv = sigma.source.inv(l);
    let mut img = vec![0u32; sigma.q() * n];
    for i in 0..sigma.q() {
        let t = sigma.s[l].image(i);
        for p in 0..n {
            img[i * n + p] = (t * n + x.act_right(x.act_left(l, p), sigma.a[linv][i])) as u32;
        }
    }
    Perm::from_images(img).expect("twisted action permutes the basis")
}

/// A basis vector of the fixed subspace in the coordinates `(i, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedVector {
    pub orbit: usize,
    /// Twisted `H_j`-orbit in `X` whose sum is mapped.
    pub source: Vec<usize>,
    pub vector: Vec<i64>,
    /// `#O_j`; the normalized image is `vector / sqrt(scale_sq)`.
    pub scale_sq: usize,
}

/// Images of the orbit-sum bases of the `ℝ⟨X⟩^{H_j, α_j}` under the diagonal map.
pub fn fixed_basis(x: &BiSet, sigma: &WreathHom, dec: &Decomposition) -> Result<Vec<FixedVector>> {
    check_signature(x, sigma)?;
    let n = x.size();
    let lam = &sigma.source;
    let mut out = Vec::new();
    for (j, o) in dec.orbits.iter().enumerate() {
        for orb in twisted_fixed_orbits(x, o) {
            let mut v = vec![0i64; sigma.q() * n];
            for &i in &o.points {
                let l = dec.transporters[i];
                let cof = sigma.a[lam.inv(l)][o.rep];
                for &p in &orb {
                    v[i * n + x.act_right(x.act_left(l, p), cof)] += 1;
                }
            }
            out.push(FixedVector { orbit: j, source: orb, vector: v, scale_sq: o.points.len() });
        }
    }
    Ok(out)
}

pub fn is_fixed_vector(x: &BiSet, sigma: &WreathHom, v: &[i64]) -> bool {
    sigma.source.generators().iter().all(|&g| {
        let p = twisted_perm(x, sigma, g);
        (0..v.len()).all(|k| v[p.image(k)] == v[k])
    })
}

/// Dimension of the fixed subspace by exact elimination on `(P_g - I) v = 0`
/// over the generators `g` of `Λ`.
pub fn brute_force_fixed_dim(x: &BiSet, sigma: &WreathHom, caps: &Caps) -> Result<usize> {
    let m = brute_force_fixed_space(x, sigma, caps)?;
    Ok(m.cols() - m.rank())
}

/// The stacked system `(P_g - I)` whose nullspace is the fixed subspace.
pub fn brute_force_fixed_space(x: &BiSet, sigma: &WreathHom, caps: &Caps) -> Result<QMatrix> {
    check_signature(x, sigma)?;
    let dim = sigma.q() * x.size();
    if dim > caps.brute_force_dim {
        return Err(Error::EnumerationCapExceeded {
            what: "brute-force ambient dimension".into(),
            needed: dim,
            cap: caps.brute_force_dim,
        });
    }
    let gens = sigma.source.generators();
    let mut rows = Vec::with_capacity(gens.len() * dim);
    for &g in gens {
        let p = twisted_perm(x, sigma, g);
        for k in 0..dim {
            // (P v)_{p(k)} = v_k, so row p(k) of P - I reads v_k - v_{p(k)}.
            let mut r = vec![0i64; dim];
            r[k] += 1;
            r[p.image(k)] -= 1;
            rows.push(r);
        }
    }
    Ok(QMatrix::from_rows(&rows, dim))
}

/// Right action of `w = (a; s)` on the basis of `ℝ⟨X⟩^{⊕q}`: `(i, x) -> (s^{-1}(i), x·a_i)`.
pub fn wreath_basis_perm(x: &BiSet, w: &WreathElem) -> Perm {
    let n = x.size();
    let sinv = w.s.inverse();
    let mut img = vec![0u32; w.a.len() * n];
    for i in 0..w.a.len() {
        let t = sinv.image(i);
        for p in 0..n {
            img[i * n + p] = (t * n + x.act_right(p, w.a[i])) as u32;
        }
    }
    Perm::from_images(img).expect("wreath action permutes the basis")
}

/// The orbit-sum basis of the fixed subspace together with the permutation of
/// it induced by each element of `p`.
#[derive(Clone, Debug)]
pub struct PermutedBasis {
    pub basis: Vec<FixedVector>,
    /// `action[k]` sends basis index `b` to the index of `basis[b]·p[k]`.
    pub action: Vec<Perm>,
}

/// Each element of `p` must commute with `σ(Λ)`; it then permutes the Λ-orbits
/// on the basis `(i, x)` and hence the orbit-sum basis.
pub fn permuted_basis(x: &BiSet, sigma: &WreathHom, p: &[WreathElem]) -> Result<PermutedBasis> {
    check_signature(x, sigma)?;
    let w = &sigma.wreath;
    for (k, e) in p.iter().enumerate() {
        if e.a.len() != sigma.q() || e.a.iter().any(|&c| c >= w.base.order()) {
            return Err(Error::InvalidInput(format!("element {k} is not in the wreath product")));
        }
        for &g in sigma.source.generators() {
            let img = sigma.elem(g);
            if w.mul(&img, e) != w.mul(e, &img) {
                return Err(Error::NotCentralizing(format!("element {k} does not commute with σ")));
            }
        }
    }
    let dec = decompose(sigma)?;
    let basis = fixed_basis(x, sigma, &dec)?;
    let index: std::collections::HashMap<&[i64], usize> =
        basis.iter().enumerate().map(|(b, v)| (v.vector.as_slice(), b)).collect();
    let mut action = Vec::with_capacity(p.len());
    for e in p {
        let perm = wreath_basis_perm(x, e);
        let mut img = Vec::with_capacity(basis.len());
        for v in &basis {
            let mut moved = vec![0i64; v.vector.len()];
            for (k, &c) in v.vector.iter().enumerate() {
                moved[perm.image(k)] = c;
            }
            let b = index.get(moved.as_slice()).ok_or_else(|| {
                Error::NotCentralizing("image of a basis vector is not a basis vector".into())
            })?;
            img.push(*b as u32);
        }
        action.push(Perm::from_images(img)?);
    }
    Ok(PermutedBasis { basis, action })
}
