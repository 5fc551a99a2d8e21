//! Coordinates on `Hom_gr(𝔪^{⊗n} ⊗ M, N)` for window modules.
//!
//! The space splits into blocks indexed by a tuple of algebra degrees
//! `(e_1, …, e_n)` (each `≥ 1`) and a source degree `i`; the block is
//! `Hom(A_{e_1} ⊗ … ⊗ A_{e_n} ⊗ M_i, N_{i+Σe})`. Inside a block, coordinates are
//! ordered by the algebra multi-index (first factor most significant), then
//! the source basis vector, then the target basis vector.

use std::collections::HashMap;

use crate::graded::TruncatedGradedAlgebra;

#[derive(Clone, Debug)]
pub struct Block {
    pub degs: Vec<usize>,
    pub src: usize,
    pub tgt: usize,
    pub a_dims: Vec<usize>,
    pub n_a: usize,
    pub dm: usize,
    pub dn: usize,
    pub offset: usize,
}

impl Block {
    pub fn len(&self) -> usize {
        self.n_a * self.dm * self.dn
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn local(&self, a_flat: usize, v: usize, w: usize) -> usize {
        self.offset + (a_flat * self.dm + v) * self.dn + w
    }

    pub fn split_a(&self, mut a_flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.a_dims.len()];
        for k in (0..self.a_dims.len()).rev() {
            out[k] = a_flat % self.a_dims[k];
            a_flat /= self.a_dims[k];
        }
        out
    }

    pub fn join_a(&self, a: &[usize]) -> usize {
        a.iter().zip(&self.a_dims).fold(0, |acc, (x, d)| acc * d + x)
    }
}

/// A decoded coordinate: block index, flat algebra index, source and target basis indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Coord {
    pub block: u32,
    pub a: u32,
    pub v: u32,
    pub w: u32,
}

#[derive(Clone, Debug)]
pub struct Layout {
    pub n: usize,
    pub blocks: Vec<Block>,
    lookup: HashMap<(Vec<usize>, usize), usize>,
    coords: Vec<Coord>,
}

impl Layout {
    /// Cochains of arity `n` from a module with degree dimensions `src_dims`
    /// to one with `tgt_dims` on the same window.
    pub fn new(alg: &TruncatedGradedAlgebra, src_dims: &[usize], tgt_dims: &[usize], n: usize) -> Layout {
        let len = src_dims.len() - 1;
        let mut blocks = Vec::new();
        let mut lookup = HashMap::new();
        let mut coords = Vec::new();
        let mut offset = 0;
        for degs in compositions_up_to(n, len) {
            if degs.iter().any(|&e| alg.dim(e) == 0) {
                continue;
            }
            let s: usize = degs.iter().sum();
            for src in 0..=len - s {
                let tgt = src + s;
                let a_dims: Vec<usize> = degs.iter().map(|&e| alg.dim(e)).collect();
                let n_a = a_dims.iter().product();
                let b = Block {
                    degs: degs.clone(),
                    src,
                    tgt,
                    a_dims,
                    n_a,
                    dm: src_dims[src],
                    dn: tgt_dims[tgt],
                    offset,
                };
                if b.is_empty() {
                    continue;
                }
                let bi = blocks.len();
                for a in 0..b.n_a {
                    for v in 0..b.dm {
                        for w in 0..b.dn {
                            coords.push(Coord { block: bi as u32, a: a as u32, v: v as u32, w: w as u32 });
                        }
                    }
                }
                offset += b.len();
                lookup.insert((degs.clone(), src), bi);
                blocks.push(b);
            }
        }
        Layout { n, blocks, lookup, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn block_index(&self, degs: &[usize], src: usize) -> Option<usize> {
        self.lookup.get(&(degs.to_vec(), src)).copied()
    }

    pub fn coord(&self, idx: usize) -> Coord {
        self.coords[idx]
    }

    pub fn block_of(&self, idx: usize) -> &Block {
        &self.blocks[self.coords[idx].block as usize]
    }

    /// Flag-level gap `level_src(v) - level_tgt(w)` of a coordinate.
    pub fn gap(&self, idx: usize, src_levels: &[Vec<u32>], tgt_levels: &[Vec<u32>]) -> i64 {
        let c = self.coords[idx];
        let b = &self.blocks[c.block as usize];
        src_levels[b.src][c.v as usize] as i64 - tgt_levels[b.tgt][c.w as usize] as i64
    }
}

/// Tuples of `n` positive integers with sum at most `max_sum`, lexicographic.
pub fn compositions_up_to(n: usize, max_sum: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=max_sum {
        if max_sum - first < n - 1 {
            break;
        }
        for mut rest in compositions_up_to(n - 1, max_sum - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
