//! Cell complexes and their F2 homology.
//!
//! Boundary matrices are assembled sparsely, split into connected blocks
//! (a column and a row are linked when the entry is nonzero), and each block
//! is reduced by bit-parallel Gaussian elimination on packed rows. Blocks too
//! large to densify fall back to sparse column reduction.

use rayon::prelude::*;
use serde::Serialize;

/// A finite regular cell complex described by its codimension-one incidences.
///
/// `boundary[m][c]` lists the (m-1)-cells in the boundary of the m-cell `c`
/// (empty for m = 0). All coefficients are 1 over F2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CellComplex {
    pub counts: Vec<usize>,
    pub boundary: Vec<Vec<Vec<u32>>>,
}

impl CellComplex {
    pub fn new(boundary: Vec<Vec<Vec<u32>>>) -> Self {
        let counts = boundary.iter().map(|b| b.len()).collect();
        CellComplex { counts, boundary }
    }

    /// Top dimension, or None for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.counts.iter().rposition(|&c| c > 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(m, &c)| if m % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Disjoint union, shifting cell indices of the second complex.
    pub fn disjoint_union(&self, other: &CellComplex) -> CellComplex {
        let dims = self.boundary.len().max(other.boundary.len());
        let mut boundary = Vec::with_capacity(dims);
        for m in 0..dims {
            let mut cells = self.boundary.get(m).cloned().unwrap_or_default();
            let shift = if m == 0 { 0 } else { self.counts.get(m - 1).copied().unwrap_or(0) as u32 };
            if let Some(b) = other.boundary.get(m) {
                cells.extend(b.iter().map(|f| f.iter().map(|&x| x + shift).collect()));
            }
            boundary.push(cells);
        }
        CellComplex::new(boundary)
    }

    /// Checks that incidences reference existing cells and that the boundary
    /// of a boundary vanishes mod 2.
    pub fn check(&self) -> Result<(), String> {
        for m in 1..self.boundary.len() {
            for (c, faces) in self.boundary[m].iter().enumerate() {
                for &f in faces {
                    if f as usize >= self.counts[m - 1] {
                        return Err(format!("{m}-cell {c} references missing face {f}"));
                    }
                }
                if m >= 2 {
                    let mut parity = std::collections::HashMap::new();
                    for &f in faces {
                        for &g in &self.boundary[m - 1][f as usize] {
                            *parity.entry(g).or_insert(0u32) ^= 1;
                        }
                    }
                    if parity.values().any(|&p| p == 1) {
                        return Err(format!("boundary of boundary of {m}-cell {c} is nonzero"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// F2 Betti numbers b_0..b_top.
pub fn betti_f2(cx: &CellComplex) -> Vec<usize> {
    let dims = cx.counts.len();
    let ranks: Vec<usize> = (0..dims)
        .into_par_iter()
        .map(|m| if m == 0 { 0 } else { boundary_rank(cx.counts[m - 1], &cx.boundary[m]) })
        .collect();
    (0..dims)
        .map(|m| {
            let next = ranks.get(m + 1).copied().unwrap_or(0);
            cx.counts[m] - ranks[m] - next
        })
        .collect()
}

/// Rank over F2 of a sparse 0/1 matrix given by columns.
pub fn boundary_rank(rows: usize, cols: &[Vec<u32>]) -> usize {
    if cols.is_empty() || rows == 0 {
        return 0;
    }
    blocks(rows, cols)
        .into_par_iter()
        .map(|(brows, bcols)| {
            if (brows.len() as u64) * (bcols.len() as u64) <= DENSE_LIMIT {
                dense_block_rank(&brows, &bcols, cols)
            } else {
                let sub: Vec<Vec<u32>> = bcols.iter().map(|&c| cols[c].clone()).collect();
                sparse_rank(&sub)
            }
        })
        .sum()
}

/// Largest block (rows times columns, in bits) reduced densely.
const DENSE_LIMIT: u64 = 1 << 28;

/// Connected blocks of the bipartite row/column incidence graph.
fn blocks(rows: usize, cols: &[Vec<u32>]) -> Vec<(Vec<u32>, Vec<usize>)> {
    let mut uf = UnionFind::new(rows);
    for col in cols {
        for w in col.windows(2) {
            uf.union(w[0] as usize, w[1] as usize);
        }
    }
    let mut block_of_root = std::collections::HashMap::new();
    let mut out: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
    for (c, col) in cols.iter().enumerate() {
        let Some(&first) = col.first() else { continue };
        let root = uf.find(first as usize);
        let b = *block_of_root.entry(root).or_insert_with(|| {
            out.push((Vec::new(), Vec::new()));
            out.len() - 1
        });
        out[b].1.push(c);
    }
    for r in 0..rows {
        if let Some(&b) = block_of_root.get(&uf.find(r)) {
            out[b].0.push(r as u32);
        }
    }
    out
}

/// Dense elimination on packed rows. Rows of the matrix become bit words
/// indexed by column position within the block.
fn dense_block_rank(brows: &[u32], bcols: &[usize], cols: &[Vec<u32>]) -> usize {
    let width = bcols.len().div_ceil(64);
    let mut local_row = std::collections::HashMap::with_capacity(brows.len());
    for (i, &r) in brows.iter().enumerate() {
        local_row.insert(r, i);
    }
    let mut m = vec![0u64; brows.len() * width];
    for (j, &c) in bcols.iter().enumerate() {
        for &r in &cols[c] {
            let i = local_row[&r];
            m[i * width + j / 64] ^= 1 << (j % 64);
        }
    }
    BitMatrix {
        rows: brows.len(),
        width,
        data: m,
    }
    .rank()
}

/// Row-major packed F2 matrix.
pub struct BitMatrix {
    rows: usize,
    width: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let width = ncols.div_ceil(64).max(1);
        let mut data = vec![0u64; rows.len() * width];
        for (i, r) in rows.iter().enumerate() {
            for (j, &b) in r.iter().enumerate() {
                if b {
                    data[i * width + j / 64] |= 1 << (j % 64);
                }
            }
        }
        BitMatrix {
            rows: rows.len(),
            width,
            data,
        }
    }

    /// Rank by forward elimination; destroys the matrix.
    pub fn rank(mut self) -> usize {
        let w = self.width;
        let mut rank = 0;
        for word in 0..w {
            for bit in 0..64 {
                let mask = 1u64 << bit;
                let Some(p) = (rank..self.rows).find(|&r| self.data[r * w + word] & mask != 0) else {
                    continue;
                };
                if p != rank {
                    for k in word..w {
                        self.data.swap(p * w + k, rank * w + k);
                    }
                }
                let (head, tail) = self.data.split_at_mut((rank + 1) * w);
                let pivot = &head[rank * w..];
                for row in tail.chunks_exact_mut(w) {
                    if row[word] & mask != 0 {
                        for k in word..w {
                            row[k] ^= pivot[k];
                        }
                    }
                }
                rank += 1;
                if rank == self.rows {
                    return rank;
                }
            }
        }
        rank
    }
}

/// Standard column reduction with a pivot table; columns are sorted row lists.
pub fn sparse_rank(cols: &[Vec<u32>]) -> usize {
    let mut pivot_owner: std::collections::HashMap<u32, Vec<u32>> = std::collections::HashMap::new();
    let mut rank = 0;
    for col in cols {
        let mut c = col.clone();
        c.sort_unstable();
        while let Some(&low) = c.last() {
            match pivot_owner.get(&low) {
                Some(other) => c = xor_sorted(&c, other),
                None => {
                    pivot_owner.insert(low, c);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
        true
    }

    /// Dense labels 0..count in order of first appearance.
    pub fn labels(&mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut map = std::collections::HashMap::new();
        let mut labels = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            let next = map.len();
            labels.push(*map.entry(r).or_insert(next));
        }
        (map.len(), labels)
    }
}
