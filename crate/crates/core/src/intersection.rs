//! Stable intersection of real phase structures.
//!
//! An orientation of the edges of the triangulation that has no oriented
//! cycle inside any simplex orders the vertices of every simplex. Given such
//! an orientation, a k1-structure and a k2-structure combine into a
//! (k1 + k2)-structure by intersecting the coset of the first k1 + 1 vertices
//! with the coset of the last k2 + 1 vertices.
//!
//! Convention: `u < v` in a simplex iff the edge `[u, v]` points from `v` to
//! `u`, so the rank of a vertex is its out-degree inside the simplex.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::Bits;
use crate::lattice::{Simplex, Triangulation};
use crate::phase::{from_sign_distribution, trivial_codim0, RealPhaseStructure, SignDistribution};

/// Head vertex of every edge, aligned with `tri.faces(1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrientation {
    heads: Vec<u32>,
}

impl EdgeOrientation {
    /// From an explicit list of `(tail, head)` pairs covering every edge once.
    pub fn from_edges(tri: &Triangulation, edges: &[(u32, u32)]) -> Result<Self> {
        let mut heads: Vec<Option<u32>> = vec![None; tri.faces(1).len()];
        for &(tail, head) in edges {
            let e = Simplex::new(vec![tail, head]);
            if e.len() != 2 {
                return Err(Error::InvalidOrientation(format!("loop at vertex {tail}")));
            }
            let i = tri.face_index(&e).ok_or_else(|| {
                Error::InvalidOrientation(format!("{e} is not an edge of the triangulation"))
            })?;
            if heads[i].replace(head).is_some() {
                return Err(Error::InvalidOrientation(format!("edge {e} oriented twice")));
            }
        }
        let heads = heads
            .into_iter()
            .enumerate()
            .map(|(i, h)| {
                h.ok_or_else(|| {
                    Error::InvalidOrientation(format!("edge {} has no orientation", tri.faces(1)[i]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EdgeOrientation { heads })
    }

    /// Orient every edge towards the endpoint of smaller key. Keys must
    /// differ on the endpoints of every edge.
    pub fn from_key<K: Ord>(tri: &Triangulation, key: impl Fn(u32) -> K) -> Result<Self> {
        let heads = tri
            .faces(1)
            .iter()
            .map(|e| {
                let (a, b) = (e.vertices()[0], e.vertices()[1]);
                match key(a).cmp(&key(b)) {
                    std::cmp::Ordering::Less => Ok(a),
                    std::cmp::Ordering::Greater => Ok(b),
                    std::cmp::Ordering::Equal => Err(Error::InvalidOrientation(format!(
                        "endpoints of {e} have equal keys"
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EdgeOrientation { heads })
    }

    /// Orientation induced by a global order listing every vertex once:
    /// earlier vertices are smaller, so edges point towards them.
    pub fn from_vertex_order(tri: &Triangulation, order: &[u32]) -> Result<Self> {
        let nv = tri.num_vertices();
        let mut pos = vec![usize::MAX; nv];
        for (p, &v) in order.iter().enumerate() {
            let slot = pos.get_mut(v as usize).ok_or(Error::UnknownVertex(v as usize))?;
            if *slot != usize::MAX {
                return Err(Error::InvalidOrientation(format!("vertex {v} listed twice")));
            }
            *slot = p;
        }
        if let Some(v) = pos.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidOrientation(format!("vertex {v} missing from order")));
        }
        Self::from_key(tri, |v| pos[v as usize])
    }

    /// Every edge reversed.
    pub fn transposed(&self, tri: &Triangulation) -> Self {
        let heads = tri
            .faces(1)
            .iter()
            .zip(&self.heads)
            .map(|(e, &h)| if e.vertices()[0] == h { e.vertices()[1] } else { e.vertices()[0] })
            .collect();
        EdgeOrientation { heads }
    }

    pub fn heads(&self) -> &[u32] {
        &self.heads
    }

    /// Does the edge `[u, v]` point from `u` to `v`?
    pub fn points_to(&self, tri: &Triangulation, u: u32, v: u32) -> Result<bool> {
        let i = tri.require_index(&Simplex::new(vec![u, v]))?;
        Ok(self.heads[i] == v)
    }

    /// `(tail, head)` pairs in edge order.
    pub fn edges(&self, tri: &Triangulation) -> Vec<(u32, u32)> {
        tri.faces(1)
            .iter()
            .zip(&self.heads)
            .map(|(e, &h)| {
                let t = if e.vertices()[0] == h { e.vertices()[1] } else { e.vertices()[0] };
                (t, h)
            })
            .collect()
    }
}

/// Out-degree of each vertex of `s` inside `s`.
fn ranks(tri: &Triangulation, o: &EdgeOrientation, s: &Simplex) -> Result<Vec<usize>> {
    let vs = s.vertices();
    let mut rank = vec![0usize; vs.len()];
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            if o.points_to(tri, vs[a], vs[b])? {
                rank[a] += 1;
            } else {
                rank[b] += 1;
            }
        }
    }
    Ok(rank)
}

/// An oriented 3-cycle among the vertices of `s`, if any.
fn find_cycle(tri: &Triangulation, o: &EdgeOrientation, s: &Simplex) -> Result<Option<[u32; 3]>> {
    let vs = s.vertices();
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            for c in b + 1..vs.len() {
                let (x, y, z) = (vs[a], vs[b], vs[c]);
                let xy = o.points_to(tri, x, y)?;
                let yz = o.points_to(tri, y, z)?;
                let zx = o.points_to(tri, z, x)?;
                if xy && yz && zx {
                    return Ok(Some([x, y, z]));
                }
                if !xy && !yz && !zx {
                    return Ok(Some([x, z, y]));
                }
            }
        }
    }
    Ok(None)
}

/// Vertices of `s` in increasing order for `o`.
pub fn ordered_vertices(tri: &Triangulation, o: &EdgeOrientation, s: &Simplex) -> Result<Vec<u32>> {
    let rank = ranks(tri, o, s)?;
    let mut out = vec![u32::MAX; s.len()];
    for (&v, &r) in s.vertices().iter().zip(&rank) {
        if out[r] != u32::MAX {
            let cycle = find_cycle(tri, o, s)?.expect("a non-transitive tournament has a 3-cycle");
            return Err(cycle_error(s, cycle));
        }
        out[r] = v;
    }
    Ok(out)
}

fn cycle_error(s: &Simplex, c: [u32; 3]) -> Error {
    Error::InvalidOrientation(format!(
        "oriented cycle {} -> {} -> {} -> {} in simplex {s}",
        c[0], c[1], c[2], c[0]
    ))
}

/// Every maximal simplex containing an oriented cycle, with a witness.
pub fn cyclic_simplices(tri: &Triangulation, o: &EdgeOrientation) -> Result<Vec<(Simplex, [u32; 3])>> {
    let found: Vec<Option<(Simplex, [u32; 3])>> = tri
        .maximal()
        .par_iter()
        .map(|s| Ok(find_cycle(tri, o, s)?.map(|c| (s.clone(), c))))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Check local acyclicity and return the vertex order of every maximal
/// simplex, aligned with `tri.maximal()`.
pub fn validate_orientation(tri: &Triangulation, o: &EdgeOrientation) -> Result<Vec<Vec<u32>>> {
    if o.heads.len() != tri.faces(1).len() {
        return Err(Error::InvalidOrientation(format!(
            "orientation covers {} edges, triangulation has {}",
            o.heads.len(),
            tri.faces(1).len()
        )));
    }
    let bad = cyclic_simplices(tri, o)?;
    if !bad.is_empty() {
        let list: Vec<String> = bad
            .iter()
            .map(|(s, c)| format!("{s} ({} -> {} -> {} -> {})", c[0], c[1], c[2], c[0]))
            .collect();
        return Err(Error::InvalidOrientation(format!(
            "{} simplices contain an oriented cycle: {}",
            bad.len(),
            list.join(", ")
        )));
    }
    tri.maximal()
        .par_iter()
        .map(|s| ordered_vertices(tri, o, s))
        .collect()
}

/// The (k1 + k2)-structure E1 ∩_O E2.
pub fn intersect(
    tri: &Triangulation,
    e1: &RealPhaseStructure,
    e2: &RealPhaseStructure,
    o: &EdgeOrientation,
) -> Result<RealPhaseStructure> {
    let n = tri.dim();
    let (k1, k2) = (e1.codim(), e2.codim());
    let k = k1 + k2;
    if k > n {
        return Err(Error::precondition(format!(
            "codimensions {k1} + {k2} exceed dimension {n}"
        )));
    }
    if e1.ambient() != n || e2.ambient() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if e1.ambient() != n { e1.ambient() } else { e2.ambient() },
            context: "phase structure".into(),
        });
    }
    let cells = tri
        .faces(k)
        .par_iter()
        .map(|s| {
            let vs = ordered_vertices(tri, o, s)?;
            let a = e1.get(tri, &Simplex::new(vs[..=k1].to_vec()))?;
            let b = e2.get(tri, &Simplex::new(vs[k1..].to_vec()))?;
            a.intersect(b).ok_or_else(|| {
                Error::invariant(format!(
                    "empty intersection on {s}; the simplex is probably not unimodular"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RealPhaseStructure::from_cells(n, k, cells))
}

/// E_0, E_mu, E_mu ∩ E_mu, ... up to codimension n.
pub fn build_k_rps(
    tri: &Triangulation,
    mu: &SignDistribution,
    o: &EdgeOrientation,
) -> Result<Vec<RealPhaseStructure>> {
    validate_orientation(tri, o)?;
    let n = tri.dim();
    let mut out = vec![trivial_codim0(tri)];
    if n == 0 {
        return Ok(out);
    }
    let e_mu = from_sign_distribution(tri, mu)?;
    for _ in 1..=n {
        let next = intersect(tri, out.last().expect("nonempty"), &e_mu, o)?;
        out.push(next);
    }
    Ok(out)
}

/// Is the copy s(tau) a compatible triangle for (mu1, mu2)?
pub fn compatible_triangle(
    tri: &Triangulation,
    mu1: &SignDistribution,
    mu2: &SignDistribution,
    o: &EdgeOrientation,
    tau: &Simplex,
    s: Bits,
) -> Result<bool> {
    if tau.len() != 3 {
        return Err(Error::precondition(format!("{tau} is not a triangle")));
    }
    let v = ordered_vertices(tri, o, tau)?;
    Ok(mu1.extended(tri, v[0], s) != mu1.extended(tri, v[1], s)
        && mu2.extended(tri, v[1], s) != mu2.extended(tri, v[2], s))
}

/// Axis of the curve in a tetrahedron, from the signs at its ordered
/// vertices: the common edge (as positions) of the two compatible faces.
pub fn axis_of_pattern(signs: [bool; 4]) -> Result<Option<(usize, usize)>> {
    let compatible: Vec<usize> = (0..4)
        .filter(|&drop| {
            let p: Vec<bool> = (0..4).filter(|&i| i != drop).map(|i| signs[i]).collect();
            p[0] != p[1] && p[1] != p[2]
        })
        .collect();
    match compatible.as_slice() {
        [] => Ok(None),
        [a, b] => {
            let rest: Vec<usize> = (0..4).filter(|i| i != a && i != b).collect();
            Ok(Some((rest[0], rest[1])))
        }
        other => Err(Error::invariant(format!(
            "{} compatible faces in one tetrahedron",
            other.len()
        ))),
    }
}

/// Axis of the curve of E_mu ∩_O E_mu in the copy s(sigma) of a tetrahedron.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axis {
    /// Positions in the oriented vertex order, increasing.
    pub positions: (usize, usize),
    pub edge: Simplex,
}

pub fn axis(
    tri: &Triangulation,
    mu: &SignDistribution,
    o: &EdgeOrientation,
    sigma: &Simplex,
    s: Bits,
) -> Result<Option<Axis>> {
    if tri.dim() != 3 || sigma.len() != 4 {
        return Err(Error::precondition(format!(
            "axis needs a tetrahedron in dimension 3, got {sigma} in dimension {}",
            tri.dim()
        )));
    }
    let v = ordered_vertices(tri, o, sigma)?;
    let signs = [0, 1, 2, 3].map(|i| mu.extended(tri, v[i], s));
    Ok(axis_of_pattern(signs)?.map(|(i, j)| Axis {
        positions: (i, j),
        edge: Simplex::new(vec![v[i], v[j]]),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{freudenthal, standard_simplex};
    use crate::phase::validate_rps;

    #[test]
    fn cycle_detected() {
        let t = standard_simplex(2);
        let o = EdgeOrientation::from_edges(&t, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let err = validate_orientation(&t, &o).unwrap_err();
        assert!(err.to_string().contains("cycle"));
    }

    #[test]
    fn order_round_trip() {
        let t = freudenthal(2, 2);
        let order: Vec<u32> = (0..t.num_vertices() as u32).rev().collect();
        let o = EdgeOrientation::from_vertex_order(&t, &order).unwrap();
        for (s, vs) in t.maximal().iter().zip(validate_orientation(&t, &o).unwrap()) {
            let mut expect = s.vertices().to_vec();
            expect.reverse();
            assert_eq!(vs, expect);
        }
    }

    #[test]
    fn full_chain_on_tetrahedron() {
        let t = standard_simplex(3);
        let o = EdgeOrientation::from_vertex_order(&t, &[0, 1, 2, 3]).unwrap();
        let mu = SignDistribution::parse("+-+-").unwrap();
        let chain = build_k_rps(&t, &mu, &o).unwrap();
        for (k, e) in chain.iter().enumerate() {
            assert_eq!(e.codim(), k);
            assert!(validate_rps(&t, e).unwrap().is_valid());
        }
        assert_eq!(chain[3].cells()[0].len(), 1);
    }

    #[test]
    fn axis_patterns() {
        assert_eq!(axis_of_pattern([false, false, true, false]).unwrap(), Some((2, 3)));
        assert_eq!(axis_of_pattern([false, true, false, false]).unwrap(), Some((0, 1)));
        assert_eq!(axis_of_pattern([false; 4]).unwrap(), None);
    }
}
