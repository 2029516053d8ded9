//! Base and strong generating set by Schreier-Sims.
//!
//! A randomized phase sifts product-replacement elements until a run of them
//! sifts to the identity; a deterministic pass then sifts every Schreier
//! generator at every level, so the resulting chain is always exact.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perm::Permutation;
use crate::error::Result;
use crate::gfspace::PointIndex;
use crate::guard::Guard;

const SEED: u64 = 0x5e_ed0f_5c4e;
const RANDOM_RUN: usize = 30;

#[derive(Debug, Clone)]
struct Level {
    base: PointIndex,
    gens: Vec<Permutation>,
    // transversal[x] maps the base point to x
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<PointIndex>,
}

/// A stabilizer chain `G = G_0 > G_1 > ... > G_n = 1` along a base.
#[derive(Debug, Clone)]
pub struct StabChain {
    v: u32,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn build(v: u32, generators: &[Permutation], guard: &Guard) -> Result<StabChain> {
        let mut chain = StabChain {
            v,
            levels: Vec::new(),
        };
        let gens: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        if gens.is_empty() {
            return Ok(chain);
        }
        let b0 = first_moved(&gens[0]).unwrap();
        chain.levels.push(Level {
            base: b0,
            gens: gens.clone(),
            transversal: Vec::new(),
            orbit: Vec::new(),
        });
        chain.rebuild(0, guard)?;
        chain.random_phase(&gens, guard)?;
        chain.verify(guard)?;
        Ok(chain)
    }

    pub fn degree(&self) -> u32 {
        self.v
    }

    pub fn base(&self) -> Vec<PointIndex> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * l.orbit.len())
    }

    /// Strips `g` through levels `start..`, returning the residue and the
    /// level at which it got stuck (`levels.len()` if it passed every level).
    pub fn sift(&self, g: &Permutation, start: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let x = h.apply(level.base);
            match &level.transversal[x as usize] {
                Some(u) => h = u.inverse().after(&h),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.v && self.sift(g, 0).0.is_identity()
    }

    fn rebuild(&mut self, i: usize, guard: &Guard) -> Result<()> {
        let v = self.v;
        let level = &mut self.levels[i];
        let mut transversal: Vec<Option<Permutation>> = vec![None; v as usize];
        transversal[level.base as usize] = Some(Permutation::identity(v));
        let mut orbit = vec![level.base];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for s in &level.gens {
                let y = s.apply(x);
                if transversal[y as usize].is_none() {
                    let u = s.after(transversal[x as usize].as_ref().unwrap());
                    transversal[y as usize] = Some(u);
                    orbit.push(y);
                }
            }
        }
        level.transversal = transversal;
        level.orbit = orbit;
        let stored: u64 = self
            .levels
            .iter()
            .map(|l| l.orbit.len() as u64 * v as u64)
            .sum();
        guard.check("stabilizer chain transversals", Some(stored))
    }

    /// Adds a residue `h` that fixes the first `from` base points as a strong
    /// generator of levels `from..=to`, extending the base when `to` is new.
    fn add_strong(&mut self, h: Permutation, from: usize, to: usize, guard: &Guard) -> Result<()> {
        if to == self.levels.len() {
            let b = first_moved(&h).expect("residue is not the identity");
            self.levels.push(Level {
                base: b,
                gens: Vec::new(),
                transversal: Vec::new(),
                orbit: Vec::new(),
            });
        }
        for l in from..=to {
            self.levels[l].gens.push(h.clone());
            self.rebuild(l, guard)?;
        }
        Ok(())
    }

    fn random_phase(&mut self, gens: &[Permutation], guard: &Guard) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut state: Vec<Permutation> = gens.iter().cycle().take(gens.len().max(10)).cloned().collect();
        let mut acc = Permutation::identity(self.v);
        let mut step = |rng: &mut ChaCha8Rng, acc: &mut Permutation| {
            let n = state.len();
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            state[i] = if rng.gen_bool(0.5) {
                state[i].after(&state[j])
            } else {
                state[i].after(&state[j].inverse())
            };
            *acc = acc.after(&state[i]);
        };
        for _ in 0..50 {
            step(&mut rng, &mut acc);
        }
        let mut run = 0;
        let mut budget = 2000;
        while run < RANDOM_RUN && budget > 0 {
            budget -= 1;
            step(&mut rng, &mut acc);
            let (h, j) = self.sift(&acc, 0);
            if h.is_identity() {
                run += 1;
            } else {
                run = 0;
                self.add_strong(h, 1.min(j), j, guard)?;
            }
        }
        Ok(())
    }

    fn verify(&mut self, guard: &Guard) -> Result<()> {
        let mut i = self.levels.len();
        while i > 0 {
            i -= 1;
            let mut added = None;
            'scan: for x_idx in 0..self.levels[i].orbit.len() {
                let level = &self.levels[i];
                let x = level.orbit[x_idx];
                let ux = level.transversal[x as usize].as_ref().unwrap();
                for s in &level.gens {
                    let sx = s.apply(x);
                    let usx = level.transversal[sx as usize].as_ref().unwrap();
                    // u_{s(x)}^{-1} s u_x fixes the base point of level i
                    let y = usx.inverse().after(&s.after(ux));
                    let (h, j) = self.sift(&y, i + 1);
                    if !h.is_identity() {
                        added = Some((h, j));
                        break 'scan;
                    }
                }
            }
            if let Some((h, j)) = added {
                self.add_strong(h, i + 1, j, guard)?;
                i = j + 1;
            }
        }
        Ok(())
    }
}

fn first_moved(g: &Permutation) -> Option<PointIndex> {
    g.images()
        .iter()
        .enumerate()
        .find(|&(i, &x)| i as u32 != x)
        .map(|(i, _)| i as u32)
}
