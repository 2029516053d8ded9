use std::fmt;

use crate::error::{usage, Result};
use crate::gfspace::PointIndex;

/// A bijection on `[0, v)`, stored as its image list.
///
/// Composition is a left action: `g.compose(h)` is the map `x -> g(h(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<PointIndex>,
}

impl Permutation {
    pub fn identity(v: u32) -> Self {
        Permutation {
            images: (0..v).collect(),
        }
    }

    /// Validates that `images` is a bijection on `[0, images.len())`.
    pub fn from_images(images: Vec<PointIndex>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(usage(format!("image list is not a bijection on [0, {n})")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<PointIndex>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation of degree `v` from disjoint cycles.
    pub fn from_cycles(v: u32, cycles: &[Vec<PointIndex>]) -> Result<Self> {
        let mut images: Vec<PointIndex> = (0..v).collect();
        let mut touched = vec![false; v as usize];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= v {
                    return Err(usage(format!("point {x} out of range [0, {v})")));
                }
                if std::mem::replace(&mut touched[x as usize], true) {
                    return Err(usage(format!("point {x} appears in two cycles")));
                }
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn images(&self) -> &[PointIndex] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: PointIndex) -> PointIndex {
        self.images[x as usize]
    }

    /// `x -> self(h(x))`.
    pub fn compose(&self, h: &Permutation) -> Result<Permutation> {
        if self.degree() != h.degree() {
            return Err(usage(format!(
                "cannot compose permutations of degrees {} and {}",
                self.degree(),
                h.degree()
            )));
        }
        Ok(self.after(h))
    }

    #[inline]
    pub(crate) fn after(&self, h: &Permutation) -> Permutation {
        Permutation {
            images: h.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as PointIndex;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Image of a sorted subset, re-sorted.
    pub fn apply_set(&self, set: &[PointIndex]) -> Vec<PointIndex> {
        let mut out: Vec<PointIndex> = set.iter().map(|&x| self.apply(x)).collect();
        out.sort_unstable();
        out
    }

    /// Non-trivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<PointIndex>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as PointIndex);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_examples() {
        let id = Permutation::identity(5);
        assert_eq!(id.apply(3), 3);
        let c = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let c2 = c.compose(&c).unwrap();
        assert_eq!(c2, Permutation::from_cycles(3, &[vec![0, 2, 1]]).unwrap());
        assert!(c.inverse().compose(&c).unwrap().is_identity());
        assert!(c.compose(&id).is_err());
    }

    #[test]
    fn left_action_convention() {
        let g = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        let h = Permutation::from_cycles(4, &[vec![1, 2]]).unwrap();
        let gh = g.compose(&h).unwrap();
        for x in 0..4 {
            assert_eq!(gh.apply(x), g.apply(h.apply(x)));
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn display_uses_cycle_notation() {
        let g = Permutation::from_images(vec![1, 2, 0, 3, 5, 4]).unwrap();
        assert_eq!(g.to_string(), "(0 1 2)(4 5)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }
}
