#![allow(dead_code)]

use equiweight::complexes::{ChainComplex, FilteredGComplex, GChainComplex};
use equiweight::gf2::{BitVec, GF2Matrix, Subspace};
use equiweight::groups::{invariants, FiniteGroup, GModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cells of one degree: `fixed` fixed cells followed by `orbits` free orbits of size `d`,
/// orbit `o` occupying `fixed + o*d .. fixed + (o+1)*d` with the generator shifting by one.
#[derive(Clone, Copy, Debug)]
pub struct Layout {
    pub fixed: usize,
    pub orbits: usize,
}

impl Layout {
    pub fn dim(&self, d: usize) -> usize {
        self.fixed + self.orbits * d
    }
}

fn generator_perm(l: Layout, d: usize) -> GF2Matrix {
    let n = l.dim(d);
    let mut m = GF2Matrix::zeros(n, n);
    for i in 0..l.fixed {
        m.set(i, i, true);
    }
    for o in 0..l.orbits {
        for j in 0..d {
            let base = l.fixed + o * d;
            m.set(base + (j + 1) % d, base + j, true);
        }
    }
    m
}

fn generator_action(group: &FiniteGroup, m: &GModule) -> GF2Matrix {
    group.generators().first().map_or_else(|| GF2Matrix::identity(m.dim()), |&g| m.action(g).clone())
}

fn random_in(rng: &mut ChaCha8Rng, s: &Subspace) -> BitVec {
    let mut v = BitVec::zeros(s.ambient_dim());
    for b in s.basis() {
        if rng.gen_bool(0.5) {
            v.xor_assign(b);
        }
    }
    v
}

/// Equivariant map out of a permutation module, with images drawn from the G-stable `target`.
fn random_equivariant(rng: &mut ChaCha8Rng, group: &FiniteGroup, src: Layout, tgt: &GModule, target: &Subspace, d: usize) -> GF2Matrix {
    let g = generator_action(group, tgt);
    let inv = invariants(group, tgt).intersect(target);
    let mut cols = Vec::new();
    for _ in 0..src.fixed {
        cols.push(random_in(rng, &inv));
    }
    for _ in 0..src.orbits {
        let mut v = random_in(rng, target);
        for _ in 0..d {
            cols.push(v.clone());
            v = g.mul_vec(&v);
        }
    }
    GF2Matrix::from_columns(tgt.dim(), &cols)
}

/// Random filtered permutation complex in degrees `0..=2` for the cyclic group of order `d`,
/// with filtration levels `alpha_min..=0`.
pub fn random_filtered(seed: u64, d: usize, alpha_min: i64) -> FilteredGComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = FiniteGroup::cyclic(d).unwrap();
    let lay: Vec<Layout> = (0..3).map(|_| Layout { fixed: rng.gen_range(0..3), orbits: rng.gen_range(0..3) }).collect();
    let dims: Vec<usize> = lay.iter().map(|l| l.dim(d)).collect();
    let modules: Vec<GModule> = lay.iter().map(|&l| GModule::from_generator_images(&group, l.dim(d), &[generator_perm(l, d)][..group.generators().len()]).unwrap()).collect();
    let d0 = GF2Matrix::zeros(0, dims[0]);
    let d1 = random_equivariant(&mut rng, &group, lay[1], &modules[0], &Subspace::full(dims[0]), d);
    let d2 = random_equivariant(&mut rng, &group, lay[2], &modules[1], &d1.kernel(), d);
    let chain = ChainComplex::new(0, dims.clone(), vec![d0, d1.clone(), d2.clone()]).unwrap();
    let base = GChainComplex::new(group.clone(), chain, modules.clone()).unwrap();
    let bd = [None, Some(d1), Some(d2)];

    // Build levels top-down; each is a G-stable subcomplex of the one above.
    let mut levels = vec![dims.iter().map(|&n| Subspace::full(n)).collect::<Vec<_>>()];
    for _ in alpha_min..0 {
        let above = levels.last().unwrap().clone();
        let mut level: Vec<Subspace> = dims.iter().map(|&n| Subspace::zero(n)).collect();
        for q in (0..3).rev() {
            let g = generator_action(&group, &modules[q]);
            let mut gens: Vec<BitVec> = level[q].basis().to_vec();
            for _ in 0..rng.gen_range(0..3) {
                let mut v = random_in(&mut rng, &above[q]);
                for _ in 0..d {
                    gens.push(v.clone());
                    v = g.mul_vec(&v);
                }
            }
            level[q] = Subspace::span(dims[q], gens);
            if let Some(m) = &bd[q] {
                level[q - 1] = level[q - 1].sum(&level[q].map(m));
            }
        }
        levels.push(level);
    }
    levels.reverse();
    FilteredGComplex::new(base, alpha_min, levels).unwrap()
}
