//! Stabilizer chains for permutation groups too large to list (deterministic
//! Schreier-Sims).

use crate::perm::Perm;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Perm>,
    /// `transversal[p]` maps `point` to `p`, for `p` in the orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Level {
        let mut transversal = vec![None; degree];
        transversal[point] = Some(Perm::identity(degree));
        Level { point, gens: Vec::new(), transversal, orbit: vec![point] }
    }

    fn rebuild_orbit(&mut self) {
        let degree = self.transversal.len();
        self.transversal = vec![None; degree];
        self.transversal[self.point] = Some(Perm::identity(degree));
        self.orbit = vec![self.point];
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i];
            for s in &self.gens {
                let q = s.image(p);
                if self.transversal[q].is_none() {
                    self.transversal[q] = Some(s.compose(self.transversal[p].as_ref().unwrap()));
                    self.orbit.push(q);
                }
            }
            i += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Chain whose base starts with `prefix` (in order), so the pointwise
    /// stabilizer of any initial segment of `prefix` can be read off.
    pub fn new(degree: usize, gens: &[Perm], prefix: &[usize]) -> StabChain {
        let mut chain = StabChain { degree, levels: prefix.iter().map(|&p| Level::new(p, degree)).collect() };
        for g in gens.iter().filter(|g| !g.is_identity()) {
            let top = chain.ensure_moved_base_point(g);
            for l in &mut chain.levels[..=top] {
                l.gens.push(g.clone());
            }
        }
        for l in &mut chain.levels {
            l.rebuild_orbit();
        }
        chain.complete();
        chain
    }

    /// Appends a base point moved by `g` if every base point is fixed; returns
    /// the first level whose point `g` moves.
    fn ensure_moved_base_point(&mut self, g: &Perm) -> usize {
        if let Some(i) = self.levels.iter().position(|l| g.image(l.point) != l.point) {
            return i;
        }
        let p = (0..self.degree).find(|&p| g.image(p) != p).expect("nonidentity");
        self.levels.push(Level::new(p, self.degree));
        self.levels.len() - 1
    }

    /// Sifts `h` through levels `from..`; returns the residue and the level
    /// where it stopped (`levels.len()` if it passed every level).
    fn strip(&self, mut h: Perm, from: usize) -> (Perm, usize) {
        for (j, l) in self.levels.iter().enumerate().skip(from) {
            let p = h.image(l.point);
            match &l.transversal[p] {
                None => return (h, j),
                Some(u) => h = u.inverse().compose(&h),
            }
        }
        let n = self.levels.len();
        (h, n)
    }

    fn complete(&mut self) {
        let mut i = self.levels.len();
        'outer: while i > 0 {
            let lvl = i - 1;
            let orbit = self.levels[lvl].orbit.clone();
            let gens = self.levels[lvl].gens.clone();
            for &b in &orbit {
                let ub = self.levels[lvl].transversal[b].clone().unwrap();
                for s in &gens {
                    let sb = s.image(b);
                    let usb = self.levels[lvl].transversal[sb].as_ref().unwrap();
                    let sg = usb.inverse().compose(&s.compose(&ub));
                    let (h, j) = self.strip(sg, lvl + 1);
                    if h.is_identity() {
                        continue;
                    }
                    let j = if j == self.levels.len() { self.ensure_moved_base_point(&h) } else { j };
                    for l in &mut self.levels[lvl + 1..=j] {
                        l.gens.push(h.clone());
                        l.rebuild_orbit();
                    }
                    i = j + 1;
                    continue 'outer;
                }
            }
            i -= 1;
        }
    }

    /// `|G|`, or `None` when it does not fit in `u128`.
    pub fn order(&self) -> Option<u128> {
        self.order_from(0)
    }

    /// Order of the pointwise stabilizer of the first `depth` base points.
    pub fn order_from(&self, depth: usize) -> Option<u128> {
        self.levels[depth.min(self.levels.len())..]
            .iter()
            .try_fold(1u128, |acc, l| acc.checked_mul(l.orbit.len() as u128))
    }

    /// Generators of the pointwise stabilizer of the first `depth` base points.
    pub fn stabilizer_generators(&self, depth: usize) -> &[Perm] {
        self.levels.get(depth).map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.strip(g.clone(), 0).0.is_identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FinGroup;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn orders_match_enumeration() {
        let cases: Vec<(usize, Vec<Perm>)> = vec![
            (4, vec![cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])]),
            (5, vec![cyc(5, &[&[0, 1, 2]]), cyc(5, &[&[2, 3, 4]])]),
            (6, vec![cyc(6, &[&[0, 1], &[2, 3]]), cyc(6, &[&[1, 2], &[4, 5]])]),
            (3, vec![]),
        ];
        for (deg, gens) in cases {
            let g = FinGroup::generate(deg, &gens, 1 << 20).unwrap();
            let chain = StabChain::new(deg, &gens, &[]);
            assert_eq!(chain.order(), Some(g.order() as u128));
            for e in g.elements() {
                assert!(chain.contains(e));
            }
        }
    }

    #[test]
    fn large_symmetric_and_stabilizer() {
        let gens = [cyc(12, &[&[0, 1]]), cyc(12, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]])];
        let chain = StabChain::new(12, &gens, &[0, 1, 2]);
        assert_eq!(chain.order(), Some(479_001_600));
        assert_eq!(chain.order_from(3), Some(362_880));
        assert!(chain.stabilizer_generators(3).iter().all(|g| (0..3).all(|p| g.image(p) == p)));
        assert!(!chain.contains(&Perm::identity(11)));
    }
}
