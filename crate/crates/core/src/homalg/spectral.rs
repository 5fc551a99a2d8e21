use std::collections::HashMap;

use serde::Serialize;

use super::FilteredComplex;

/// One cell `E_r^{p,q}` with total degree `n = p + q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub p: i64,
    pub q: i64,
    pub dim: usize,
    /// Rank of `d_r` arriving from `E_r^{p-r, q+r-1}`.
    pub rank_in: usize,
    /// Rank of `d_r` leaving towards `E_r^{p+r, q-r+1}`.
    pub rank_out: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralPage {
    pub r: usize,
    pub cells: Vec<Cell>,
}

impl SpectralPage {
    pub fn dim(&self, p: i64, n: i64) -> usize {
        self.cells.iter().find(|c| c.p == p && c.p + c.q == n).map_or(0, |c| c.dim)
    }

    /// `Σ_{p+q=n} dim E_r^{p,q}`.
    pub fn total(&self, n: i64) -> usize {
        self.cells.iter().filter(|c| c.p + c.q == n).map(|c| c.dim).sum()
    }

    pub fn has_nonzero_differential(&self) -> bool {
        self.cells.iter().any(|c| c.rank_out > 0)
    }
}

/// Ranks of blocks of the differentials, memoized.
struct Ranks<'a> {
    c: &'a FilteredComplex,
    memo: HashMap<(usize, i64, i64), usize>,
}

impl Ranks<'_> {
    /// Rank of `dⁿ` from `F_a Cⁿ` to `C^{n+1}/F_b C^{n+1}`; `b = None` means no quotient.
    fn get(&mut self, n: i64, a: i64, b: Option<i64>) -> usize {
        if n < 0 || n as usize > self.c.valid_through() {
            return 0;
        }
        let t = self.c.filtration_length() as i64;
        let b = b.unwrap_or(t).min(t);
        let a = a.max(0);
        if b <= a {
            return 0;
        }
        if let Some(&r) = self.memo.get(&(n as usize, a, b)) {
            return r;
        }
        let n_u = n as usize;
        let src = self.c.degrees(n_u);
        let tgt = self.c.degrees(n_u + 1);
        let r = self.c.diff(n_u).sub_rank(|i| (tgt[i] as i64) < b, |j| (src[j] as i64) >= a);
        self.memo.insert((n_u, a, b), r);
        r
    }
}

fn count_at_least(degs: &[u32], p: i64) -> usize {
    degs.iter().filter(|&&d| d as i64 >= p).count()
}

/// Pages `E_0 … E_{r_max}` of the spectral sequence of a coordinate-filtered
/// complex, for total degrees up to the complex's `valid_through`.
///
/// With `Z_r^p = F_p ∩ d⁻¹(F_{p+r})` and
/// `E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`, every term is a rank
/// of a block of `d` when the filtration is by coordinate subspaces, which
/// gives `dim E_r^p` in total degree `n` as
/// `|F_p| − |F_{p+1}| − R(n; p, p+r) + R(n; p+1, p+r) + R(n−1; p−r+1, p) − R(n−1; p−r+1, p+1)`.
pub fn spectral_sequence(c: &FilteredComplex, r_max: usize) -> Vec<SpectralPage> {
    let t = c.filtration_length() as i64;
    let top = c.valid_through() as i64;
    let mut ranks = Ranks { c, memo: HashMap::new() };
    let dim = |r: i64, p: i64, n: i64, ranks: &mut Ranks| -> usize {
        let degs = c.degrees(n as usize);
        let base = count_at_least(degs, p) - count_at_least(degs, p + 1);
        let plus = ranks.get(n, p + 1, Some(p + r)) + ranks.get(n - 1, p - r + 1, Some(p));
        let minus = ranks.get(n, p, Some(p + r)) + ranks.get(n - 1, p - r + 1, Some(p + 1));
        (base + plus).checked_sub(minus).expect("spectral sequence bookkeeping")
    };
    let mut pages = Vec::new();
    let mut dims: Vec<Vec<usize>> = (0..t).map(|p| (0..=top).map(|n| dim(0, p, n, &mut ranks)).collect()).collect();
    for r in 0..=r_max as i64 {
        let next: Vec<Vec<usize>> =
            (0..t).map(|p| (0..=top).map(|n| dim(r + 1, p, n, &mut ranks)).collect()).collect();
        let mut out_rank = vec![vec![0usize; (top + 1) as usize]; t as usize];
        let mut cells = Vec::new();
        for p in 0..t {
            for n in 0..=top {
                let (pu, nu) = (p as usize, n as usize);
                let rank_in = if p - r >= 0 && n >= 1 { out_rank[(p - r) as usize][nu - 1] } else { 0 };
                let rank_out = dims[pu][nu] - next[pu][nu] - rank_in;
                out_rank[pu][nu] = rank_out;
                cells.push(Cell { p, q: n - p, dim: dims[pu][nu], rank_in, rank_out });
            }
        }
        pages.push(SpectralPage { r: r as usize, cells });
        dims = next;
    }
    pages
}
