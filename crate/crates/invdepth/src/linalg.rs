//! Dense exact linear algebra over F_p.
//!
//! Rank is the hot operation (Koszul homology, quotient spans, kernel
//! dimensions); for p = 2 it runs on bit-packed rows, one u64 per 64 columns.

use serde::{Deserialize, Serialize};

use crate::field::{invm, mulm, negm, subm};

/// Row-major dense matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MatFp {
    p: u32,
    nrows: usize,
    ncols: usize,
    data: Vec<u32>,
}

impl MatFp {
    pub fn zero(p: u32, nrows: usize, ncols: usize) -> Self {
        MatFp {
            p,
            nrows,
            ncols,
            data: vec![0; nrows * ncols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u32, rows: Vec<Vec<u32>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r.into_iter().map(|c| c % p));
        }
        MatFp {
            p,
            nrows,
            ncols,
            data,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.ncols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.ncols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.ncols);
        self.data.extend(row.iter().map(|&c| c % self.p));
        self.nrows += 1;
    }

    pub fn mul(&self, other: &MatFp) -> MatFp {
        assert_eq!(self.ncols, other.nrows);
        assert_eq!(self.p, other.p);
        let mut out = MatFp::zero(self.p, self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.ncols {
                    let v = out.get(i, j);
                    out.set(i, j, (v + mulm(a, other.get(k, j), self.p)) % self.p);
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.ncols);
        (0..self.nrows)
            .map(|i| {
                let mut s = 0u64;
                for j in 0..self.ncols {
                    s += self.get(i, j) as u64 * v[j] as u64;
                }
                (s % self.p as u64) as u32
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(pr) = (r..self.nrows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = invm(self.get(r, c), p);
            for j in c..self.ncols {
                let v = mulm(self.get(r, j), inv, p);
                self.set(r, j, v);
            }
            for i in 0..self.nrows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..self.ncols {
                    let v = subm(self.get(i, j), mulm(f, self.get(r, j), p), p);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (top, bottom) = self.data.split_at_mut(b * self.ncols);
        top[a * self.ncols..(a + 1) * self.ncols].swap_with_slice(&mut bottom[..self.ncols]);
    }

    pub fn rank(&self) -> usize {
        if self.p == 2 {
            self.rank_gf2()
        } else {
            self.clone().rref().len()
        }
    }

    fn rank_gf2(&self) -> usize {
        let words = self.ncols.div_ceil(64).max(1);
        let mut pivot_rows: Vec<Option<Vec<u64>>> = vec![None; self.ncols];
        let mut rank = 0;
        let mut packed = vec![0u64; words];
        for i in 0..self.nrows {
            packed.iter_mut().for_each(|w| *w = 0);
            let row = self.row(i);
            for (j, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    packed[j / 64] |= 1u64 << (j % 64);
                }
            }
            loop {
                let Some(lead) = first_set_bit(&packed) else {
                    break;
                };
                match &pivot_rows[lead] {
                    Some(pr) => {
                        for (w, pw) in packed.iter_mut().zip(pr.iter()) {
                            *w ^= pw;
                        }
                    }
                    None => {
                        pivot_rows[lead] = Some(packed.clone());
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }

    /// Basis of the right kernel {x : A·x = 0}.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u32; self.ncols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = negm(m.get(r, fc), self.p);
            }
            basis.push(v);
        }
        basis
    }

    /// Inverse of a square matrix, or None when singular.
    pub fn inverse(&self) -> Option<MatFp> {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut aug = MatFp::zero(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = MatFp::zero(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn rows_vec(&self) -> Vec<Vec<u32>> {
        (0..self.nrows).map(|i| self.row(i).to_vec()).collect()
    }
}

fn first_set_bit(words: &[u64]) -> Option<usize> {
    for (wi, &w) in words.iter().enumerate() {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

/// Incremental row-space tracker over F_p: feed rows, query rank. Rows are
/// kept reduced so membership tests and rank updates stay cheap. For p = 2
/// rows are bit-packed.
#[derive(Clone)]
pub struct RowSpace {
    p: u32,
    ncols: usize,
    // p == 2: packed pivot rows indexed by pivot column
    packed: Vec<Option<Vec<u64>>>,
    // p != 2: reduced rows with pivot columns
    rows: Vec<(usize, Vec<u32>)>,
    rank: usize,
}

impl RowSpace {
    pub fn new(p: u32, ncols: usize) -> Self {
        RowSpace {
            p,
            ncols,
            packed: if p == 2 { vec![None; ncols] } else { Vec::new() },
            rows: Vec::new(),
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Insert a row; returns true if it enlarged the span.
    pub fn insert(&mut self, row: &[u32]) -> bool {
        assert_eq!(row.len(), self.ncols);
        if self.p == 2 {
            let words = self.ncols.div_ceil(64).max(1);
            let mut packed = vec![0u64; words];
            for (j, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    packed[j / 64] |= 1u64 << (j % 64);
                }
            }
            self.insert_packed(packed)
        } else {
            let mut v: Vec<u32> = row.iter().map(|&c| c % self.p).collect();
            loop {
                let Some(lead) = v.iter().position(|&c| c != 0) else {
                    return false;
                };
                if let Some((_, pr)) = self.rows.iter().find(|(pc, _)| *pc == lead) {
                    let f = v[lead];
                    let pr = pr.clone();
                    for (a, b) in v.iter_mut().zip(pr.iter()) {
                        *a = subm(*a, mulm(f, *b, self.p), self.p);
                    }
                } else {
                    let inv = invm(v[lead], self.p);
                    for a in v.iter_mut() {
                        *a = mulm(*a, inv, self.p);
                    }
                    self.rows.push((lead, v));
                    self.rank += 1;
                    return true;
                }
            }
        }
    }

    /// Insert a pre-packed GF(2) row (p must be 2).
    pub fn insert_packed(&mut self, mut packed: Vec<u64>) -> bool {
        debug_assert_eq!(self.p, 2);
        loop {
            let Some(lead) = first_set_bit(&packed) else {
                return false;
            };
            match &self.packed[lead] {
                Some(pr) => {
                    for (w, pw) in packed.iter_mut().zip(pr.iter()) {
                        *w ^= pw;
                    }
                }
                None => {
                    self.packed[lead] = Some(packed);
                    self.rank += 1;
                    return true;
                }
            }
        }
    }

    /// True iff the row already lies in the span.
    pub fn contains(&mut self, row: &[u32]) -> bool {
        // reduce a copy without inserting
        if self.p == 2 {
            let words = self.ncols.div_ceil(64).max(1);
            let mut packed = vec![0u64; words];
            for (j, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    packed[j / 64] |= 1u64 << (j % 64);
                }
            }
            loop {
                let Some(lead) = first_set_bit(&packed) else {
                    return true;
                };
                match &self.packed[lead] {
                    Some(pr) => {
                        for (w, pw) in packed.iter_mut().zip(pr.iter()) {
                            *w ^= pw;
                        }
                    }
                    None => return false,
                }
            }
        } else {
            let mut v: Vec<u32> = row.iter().map(|&c| c % self.p).collect();
            loop {
                let Some(lead) = v.iter().position(|&c| c != 0) else {
                    return true;
                };
                let Some((_, pr)) = self.rows.iter().find(|(pc, _)| *pc == lead) else {
                    return false;
                };
                let f = v[lead];
                let pr = pr.clone();
                for (a, b) in v.iter_mut().zip(pr.iter()) {
                    *a = subm(*a, mulm(f, *b, self.p), self.p);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank() {
        let m = MatFp::from_rows(5, vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let mut mm = m.clone();
        let pivots = mm.rref();
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn gf2_rank_matches_generic() {
        // compare packed GF(2) rank against generic elimination on random-ish data
        let mut rows = Vec::new();
        let mut state = 12345u64;
        for _ in 0..40 {
            let mut r = Vec::new();
            for _ in 0..70 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                r.push(((state >> 33) & 1) as u32);
            }
            rows.push(r);
        }
        let m = MatFp::from_rows(2, rows);
        let generic = m.clone().rref().len();
        assert_eq!(m.rank(), generic);
    }

    #[test]
    fn kernel_is_kernel() {
        let m = MatFp::from_rows(3, vec![vec![1, 1, 1], vec![0, 1, 2]]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(m.mat_vec(v).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = MatFp::from_rows(7, vec![vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), MatFp::identity(7, 2));
        let sing = MatFp::from_rows(7, vec![vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn rowspace_rank_tracking() {
        for p in [2u32, 3, 5] {
            let mut rs = RowSpace::new(p, 4);
            assert!(rs.insert(&[1, 0, 1, 0]));
            assert!(rs.insert(&[0, 1, 0, 1]));
            assert!(!rs.insert(&[1, 1, 1, 1]));
            assert_eq!(rs.rank(), 2);
            assert!(rs.contains(&[1, 1, 1, 1]));
            assert!(!rs.contains(&[1, 1, 1, 0]));
        }
    }
}
