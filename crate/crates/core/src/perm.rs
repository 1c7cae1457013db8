//! Permutations in one-line notation on the points `0..degree`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation stored by its images: `p.image(i)` is where `i` goes.
///
/// Composition follows function composition: `a.compose(&b)` applies `b`
/// first, so `a.compose(&b).image(i) == a.image(b.image(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Perm(Vec<u32>);

impl TryFrom<Vec<u32>> for Perm {
    type Error = Error;
    fn try_from(images: Vec<u32>) -> Result<Perm> {
        Perm::from_images(images)
    }
}

impl From<Perm> for Vec<u32> {
    fn from(p: Perm) -> Vec<u32> {
        p.0
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u32).collect())
    }

    /// Validates that `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidInput(format!(
                    "not a permutation of 0..{n}: {images:?}"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Perm {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm(images)
    }

    pub fn from_usize(images: &[usize]) -> Result<Perm> {
        Perm::from_images(images.iter().map(|&x| x as u32).collect())
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Perm> {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                let b = cyc[(k + 1) % cyc.len()];
                if a >= degree || b >= degree {
                    return Err(Error::InvalidInput(format!("cycle point out of range: {cyc:?}")));
                }
                img[a] = b as u32;
            }
        }
        Perm::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn pow(&self, k: usize) -> Perm {
        let mut acc = Perm::identity(self.degree());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Orbits of `<self>` on the points, each sorted, listed by smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.image(x);
            }
            cyc.sort_unstable();
            out.push(cyc);
        }
        out
    }

    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .fold(1usize, |acc, c| num_integer::lcm(acc, c.len()))
    }

    /// Restriction to the block `offset..offset+len`, relabelled to start at 0.
    /// The block must be invariant.
    pub fn restrict_block(&self, offset: usize, len: usize) -> Perm {
        Perm(
            (offset..offset + len)
                .map(|i| self.0[i] - offset as u32)
                .collect(),
        )
    }

    /// Disjoint union: `self` on the first block, `other` shifted after it.
    pub fn direct_sum(&self, other: &Perm) -> Perm {
        let off = self.degree() as u32;
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&x| x + off));
        Perm(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_factor_first() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        let ab = a.compose(&b);
        assert_eq!(ab.image(1), a.image(b.image(1)));
        assert_eq!(ab.images(), &[1, 2, 0]);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn order_is_lcm_of_cycle_lengths() {
        let p = Perm::from_cycles(5, &[&[0, 1], &[2, 3, 4]]).unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert!(p.compose(&p.inverse()).is_identity());
    }
}
