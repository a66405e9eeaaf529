//! Generators for standard unimodular triangulations.

use std::collections::HashMap;

use crate::lattice::{LatticePoint, Polytope, Simplex, Triangulation};

/// Collects vertices by coordinates and emits sorted simplices.
#[derive(Default)]
pub struct Builder {
    ids: HashMap<LatticePoint, u32>,
    coords: Vec<LatticePoint>,
    simplices: Vec<Simplex>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, p: LatticePoint) -> u32 {
        if let Some(&id) = self.ids.get(&p) {
            return id;
        }
        let id = self.coords.len() as u32;
        self.ids.insert(p.clone(), id);
        self.coords.push(p);
        id
    }

    pub fn simplex(&mut self, pts: Vec<LatticePoint>) {
        let ids = pts.into_iter().map(|p| self.vertex(p)).collect();
        self.simplices.push(Simplex::new(ids));
    }

    /// Finish, renumbering vertices in lexicographic coordinate order so the
    /// output does not depend on insertion order.
    pub fn finish(self, polytope: Polytope) -> Triangulation {
        let mut order: Vec<u32> = (0..self.coords.len() as u32).collect();
        order.sort_by(|&a, &b| self.coords[a as usize].cmp(&self.coords[b as usize]));
        let mut new_id = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old as usize] = new as u32;
        }
        let coords = order.iter().map(|&o| self.coords[o as usize].clone()).collect();
        let simplices = self
            .simplices
            .into_iter()
            .map(|s| Simplex::new(s.vertices().iter().map(|&v| new_id[v as usize]).collect()))
            .collect();
        Triangulation::new(polytope, coords, simplices).expect("generated triangulation")
    }
}

/// The unimodular simplex conv(0, e_1, ..., e_n) with vertex i = e_i (vertex 0 the origin).
pub fn standard_simplex(n: usize) -> Triangulation {
    let p = Polytope::standard_simplex(n, 1);
    let coords = p.vertices.clone();
    Triangulation::new(p, coords, vec![Simplex::from_sorted((0..=n as u32).collect())])
        .expect("standard simplex")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Kuhn simplices of the unit cubes with corners in [0, d)^n, kept when all
/// vertices satisfy `keep`.
fn kuhn_simplices(n: usize, d: i64, keep: impl Fn(&[i64]) -> bool) -> Vec<Vec<LatticePoint>> {
    let perms = permutations(n);
    let mut out = Vec::new();
    let mut corner = vec![0i64; n];
    loop {
        for p in &perms {
            let mut pts = vec![corner.clone()];
            let mut cur = corner.clone();
            for &axis in p {
                cur[axis] += 1;
                pts.push(cur.clone());
            }
            if pts.iter().all(|q| keep(q)) {
                out.push(pts);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if corner[i] + 1 < d {
                corner[i] += 1;
                break;
            }
            corner[i] = 0;
            i += 1;
        }
    }
}

/// Freudenthal triangulation of d * Delta_n with d^n simplices.
///
/// In the coordinates y_i = x_i + ... + x_n the dilated simplex becomes the
/// order region d >= y_1 >= ... >= y_n >= 0, which is a union of Kuhn
/// simplices of the unit grid.
pub fn freudenthal(n: usize, d: i64) -> Triangulation {
    let mut b = Builder::new();
    let in_region = |y: &[i64]| {
        y.first().is_none_or(|&y1| y1 <= d)
            && y.windows(2).all(|w| w[0] >= w[1])
            && y.last().is_none_or(|&yn| yn >= 0)
    };
    for pts in kuhn_simplices(n, d, in_region) {
        b.simplex(
            pts.into_iter()
                .map(|y| (0..n).map(|i| y[i] - y.get(i + 1).copied().unwrap_or(0)).collect())
                .collect(),
        );
    }
    b.finish(Polytope::standard_simplex(n, d))
}

/// Kuhn triangulation of the cube [0, d]^n with n! d^n simplices.
pub fn kuhn_cube(n: usize, d: i64) -> Triangulation {
    let mut b = Builder::new();
    for pts in kuhn_simplices(n, d, |_| true) {
        b.simplex(pts);
    }
    b.finish(Polytope::cube(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn freudenthal_counts_and_validity() {
        for (n, d) in [(1, 3), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
            let t = freudenthal(n, d);
            assert_eq!(t.maximal().len() as i64, d.pow(n as u32));
            let r = t.validate();
            assert!(r.is_valid(), "{n} {d}: {:?}", r.problems());
        }
    }

    #[test]
    fn kuhn_cube_validity() {
        let t = kuhn_cube(3, 2);
        assert_eq!(t.maximal().len(), 48);
        assert!(t.validate().is_valid());
    }
}
