//! The dual graph of a triangulation and bounds on the number of components
//! of T-curves and T-surfaces.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::complex::{connected_components, TManifold};
use crate::error::{Error, Result};
use crate::lattice::{binomial, factorial, Polytope, Simplex, Triangulation};
use crate::planarity::{is_planar, Graph};
use crate::poly::{Poly, Q};

/// Vertices `0..alpha` are the maximal simplices (in `tri.maximal()` order),
/// the following ones the boundary ridges; every ridge gives an edge.
#[derive(Clone, Debug, Serialize)]
pub struct DualGraph {
    pub n: usize,
    pub maximal: usize,
    /// Ridge index (into `tri.faces(n - 1)`) of each boundary vertex.
    pub boundary: Vec<usize>,
    pub graph: Graph,
}

impl DualGraph {
    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    /// Degree invariants: n + 1 at maximal simplices, 1 at boundary ridges.
    pub fn check_degrees(&self) -> Result<()> {
        for v in 0..self.num_vertices() {
            let expect = if v < self.maximal { self.n + 1 } else { 1 };
            if self.graph.degree(v) != expect {
                return Err(Error::InvalidTriangulation(format!(
                    "dual vertex {v} has degree {}, expected {expect}",
                    self.graph.degree(v)
                )));
            }
        }
        Ok(())
    }
}

pub fn dual_graph(tri: &Triangulation) -> Result<DualGraph> {
    let n = tri.dim();
    if n == 0 {
        return Err(Error::precondition("dual graph needs dimension at least 1"));
    }
    let alpha = tri.maximal().len();
    let cofaces = tri.ridge_cofaces();
    let mut boundary = Vec::new();
    let mut edges = Vec::with_capacity(cofaces.len());
    for (r, c) in cofaces.iter().enumerate() {
        match c.as_slice() {
            [t] => {
                edges.push((*t, alpha + boundary.len()));
                boundary.push(r);
            }
            [a, b] => edges.push((*a, *b)),
            _ => {
                return Err(Error::InvalidTriangulation(format!(
                    "ridge {} lies in {} maximal simplices",
                    tri.faces(n - 1)[r],
                    c.len()
                )))
            }
        }
    }
    let graph = Graph::new(alpha + boundary.len(), edges);
    Ok(DualGraph {
        n,
        maximal: alpha,
        boundary,
        graph,
    })
}

/// ((n - 1) alpha - beta) / 2 + 1.
pub fn b1_formula(n: usize, alpha: u64, beta: u64) -> i64 {
    ((n as i64 - 1) * alpha as i64 - beta as i64) / 2 + 1
}

/// First Betti number E - V + 1, checked against the volume formula.
pub fn b1_dual(dg: &DualGraph) -> Result<usize> {
    let g = &dg.graph;
    if g.connected_components() != 1 {
        return Err(Error::InvalidTriangulation("dual graph is disconnected".into()));
    }
    let b1 = g.num_edges() + 1 - g.num_vertices();
    let formula = b1_formula(dg.n, dg.maximal as u64, dg.boundary.len() as u64);
    if b1 as i64 != formula {
        return Err(Error::invariant(format!(
            "dual graph has b1 = {b1}, volume formula gives {formula}"
        )));
    }
    Ok(b1)
}

/// Lattice volume as the sum of the simplex determinants.
pub fn volume(tri: &Triangulation) -> u64 {
    tri.maximal()
        .iter()
        .map(|s| tri.signed_volume(s).unsigned_abs() as u64)
        .sum()
}

/// Boundary volume of a unimodular triangulation: the number of boundary ridges.
pub fn boundary_volume(tri: &Triangulation) -> u64 {
    tri.boundary_ridges().len() as u64
}

/// A subdivision of K_{n+1} in the dual graph around an interior vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnWitness {
    /// The interior vertex of the triangulation.
    pub point: u32,
    /// Dual vertices of sigma and of its n neighbours across the facets through the point.
    pub branch: Vec<usize>,
    /// One path per pair of branch vertices, endpoints included.
    pub paths: Vec<Vec<usize>>,
}

/// If the triangulation has an interior vertex, the K_{n+1} subdivision
/// built from the cycles of simplices around the codimension-two faces
/// through it.
pub fn interior_point_obstruction(tri: &Triangulation) -> Result<Option<KnWitness>> {
    let n = tri.dim();
    if n < 2 {
        return Ok(None);
    }
    let Some(&p) = tri.interior_vertices().first() else {
        return Ok(None);
    };
    let cofaces = tri.ridge_cofaces();
    let maximal = tri.maximal();
    let other = |ridge: &Simplex, t: usize| -> Result<usize> {
        let r = tri.require_index(ridge)?;
        cofaces[r]
            .iter()
            .copied()
            .find(|&c| c != t)
            .ok_or_else(|| Error::invariant(format!("ridge {ridge} through an interior point is on the boundary")))
    };
    let v = maximal
        .iter()
        .position(|s| s.contains_vertex(p))
        .ok_or_else(|| Error::invariant(format!("vertex {p} lies in no maximal simplex")))?;
    let sigma = &maximal[v];
    let others: Vec<u32> = sigma.vertices().iter().copied().filter(|&q| q != p).collect();
    let ridge_without = |s: &Simplex, q: u32| Simplex::new(s.vertices().iter().copied().filter(|&x| x != q).collect());
    let neighbours: Vec<usize> = others
        .iter()
        .map(|&q| other(&ridge_without(sigma, q), v))
        .collect::<Result<_>>()?;

    let mut branch = vec![v];
    branch.extend(&neighbours);
    let mut paths: Vec<Vec<usize>> = neighbours.iter().map(|&w| vec![v, w]).collect();
    for i in 0..n {
        for j in i + 1..n {
            // walk around gamma = sigma minus q_i, q_j, from sigma_i away from sigma
            let gamma = ridge_without(&ridge_without(sigma, others[i]), others[j]);
            let mut path = vec![neighbours[i]];
            let (mut prev, mut cur) = (v, neighbours[i]);
            while cur != neighbours[j] {
                let tau = &maximal[cur];
                let free: Vec<u32> = tau
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|x| !gamma.contains_vertex(*x))
                    .collect();
                let mut next = None;
                for &x in &free {
                    let w = other(&ridge_without(tau, x), cur)?;
                    if w != prev {
                        next = Some(w);
                    }
                }
                let w = next.ok_or_else(|| Error::invariant("degenerate cycle around a codimension-two face"))?;
                if w == v || path.len() > maximal.len() {
                    return Err(Error::invariant(format!("cycle around {gamma} does not close")));
                }
                path.push(w);
                prev = cur;
                cur = w;
            }
            paths.push(path);
        }
    }
    let witness = KnWitness {
        point: p,
        branch,
        paths,
    };
    Ok(Some(witness))
}

/// Paths are walks along dual edges joining distinct pairs of branch
/// vertices and share no vertex except at their endpoints.
pub fn verify_kn_witness(dg: &DualGraph, w: &KnWitness) -> Result<()> {
    let k = w.branch.len();
    if w.paths.len() != k * (k - 1) / 2 {
        return Err(Error::invariant("wrong number of paths"));
    }
    let mut pairs = std::collections::BTreeSet::new();
    let mut used = std::collections::HashSet::new();
    for path in &w.paths {
        let (a, b) = (path[0], *path.last().expect("nonempty path"));
        if !w.branch.contains(&a) || !w.branch.contains(&b) || a == b {
            return Err(Error::invariant("path does not join two branch vertices"));
        }
        pairs.insert((a.min(b), a.max(b)));
        for e in path.windows(2) {
            if !dg.graph.neighbors(e[0]).contains(&e[1]) {
                return Err(Error::invariant(format!("{}-{} is not a dual edge", e[0], e[1])));
            }
        }
        for &x in &path[1..path.len() - 1] {
            if w.branch.contains(&x) || !used.insert(x) {
                return Err(Error::invariant(format!("paths meet at dual vertex {x}")));
            }
        }
    }
    if pairs.len() != w.paths.len() {
        return Err(Error::invariant("two paths join the same pair"));
    }
    Ok(())
}

/// floor((n + 1) alpha / 3).
pub fn curve_bound(n: usize, alpha: u64) -> u64 {
    (n as u64 + 1) * alpha / 3
}

pub fn curve_bound_volume(tri: &Triangulation) -> u64 {
    curve_bound(tri.dim(), volume(tri))
}

/// floor((7n^2 + 5n + 12) alpha / 60).
pub fn surface_bound(n: usize, alpha: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::precondition("surface bound needs dimension at least 2"));
    }
    let n = n as u64;
    Ok((7 * n * n + 5 * n + 12) * alpha / 60)
}

/// floor((4f + t) / 20) from the number of faces f and triangles t.
pub fn surface_bound_from_counts(f: Q, t: Q) -> i128 {
    ((f * Q::from_integer(4) + t) / Q::from_integer(20)).floor().to_integer()
}

/// Number of 2-faces of a T-surface, and the upper bound on its triangles.
pub fn surface_face_counts(n: usize, alpha: u64) -> (Q, Q) {
    let (n, a) = (n as i128, alpha as i128);
    let f = Q::new((n * n + n + 2) * a, 2);
    let t = Q::new(n * (n - 1) * a, 3);
    (f, t)
}

/// Hodge numbers h^{0,q} of a generic complete intersection of k
/// hypersurfaces with Newton polytope `poly`, for q = 0..=n-k.
///
/// For k = n the two cases of the formula coincide (q = 0) and add up; the
/// result is then the number of intersection points.
pub fn hodge_h0(poly: &Polytope, k: usize) -> Result<Vec<i64>> {
    let n = poly.dim;
    if k == 0 || k > n {
        return Err(Error::precondition(format!("codimension {k} outside 1..={n}")));
    }
    let top: i64 = (1..=k)
        .map(|l| {
            let sign = if (k - l).is_multiple_of(2) { 1 } else { -1 };
            sign * binomial(k as u64, l as u64) as i64 * poly.interior_lattice_points(l as i64) as i64
        })
        .sum();
    let mut h = vec![0i64; n - k + 1];
    h[0] = 1;
    h[n - k] += top;
    Ok(h)
}

/// Stirling number of the second kind.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![1u64];
    for m in 1..=n {
        let mut next = vec![0u64; m + 1];
        for j in 1..=m {
            let a = if j < row.len() { j as u64 * row[j] } else { 0 };
            next[j] = a + row[j - 1];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

/// (k!/n!) S(n, k) Vol.
pub fn hodge_leading_expected(n: usize, k: usize, vol: u64) -> Q {
    Q::new(
        factorial(k) as i128 * stirling2(n, k) as i128 * vol as i128,
        factorial(n) as i128,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeFit {
    pub poly: Poly,
    pub leading: Q,
    pub expected_leading: Q,
}

/// d -> 1 + sum_l C(k,l) (-1)^(n+k-l) P(-dl), sampled at `ds` from the
/// Ehrhart polynomial and interpolated exactly.
pub fn hodge_sum_fit(poly: &Polytope, k: usize, ds: &[i64]) -> Result<HodgeFit> {
    let n = poly.dim;
    if k == 0 || k > n {
        return Err(Error::precondition(format!("codimension {k} outside 1..={n}")));
    }
    if ds.len() < n + 2 {
        return Err(Error::precondition(format!(
            "{} samples, need at least {}",
            ds.len(),
            n + 2
        )));
    }
    let ehrhart = poly.ehrhart();
    let samples: Vec<(Q, Q)> = ds
        .iter()
        .map(|&d| {
            let mut acc = Q::one();
            for l in 1..=k {
                let sign = if (n + k - l).is_multiple_of(2) { Q::one() } else { -Q::one() };
                let c = Q::from_integer(binomial(k as u64, l as u64) as i128);
                acc += sign * c * ehrhart.eval_int(-d * l as i64);
            }
            (Q::from_integer(d as i128), acc)
        })
        .collect();
    let fit = Poly::interpolate_rational(&samples);
    let vol = poly.lattice_volume();
    Ok(HodgeFit {
        leading: if fit.degree() == Some(n) { fit.leading() } else { Q::zero() },
        expected_leading: hodge_leading_expected(n, k, vol),
        poly: fit,
    })
}

/// Leading coefficient of the fitted Hodge sum, required to have degree n.
pub fn hodge_sum_leading(poly: &Polytope, k: usize, ds: &[i64]) -> Result<Q> {
    let fit = hodge_sum_fit(poly, k, ds)?;
    if fit.poly.degree() != Some(poly.dim) {
        return Err(Error::invariant(format!(
            "Hodge sum has degree {:?}, expected {}",
            fit.poly.degree(),
            poly.dim
        )));
    }
    Ok(fit.leading)
}

/// Smallest l >= 1 such that l times the polytope has an interior lattice point.
pub fn codegree(poly: &Polytope) -> u64 {
    (1..=poly.dim as i64 + 1)
        .find(|&l| poly.interior_lattice_points(l) > 0)
        .unwrap_or(poly.dim as i64 + 1) as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveVerdict {
    pub b0: usize,
    pub harnack_bound: usize,
    /// Euler characteristic of the surface built from the components; 2 iff maximal.
    pub surface_euler: i64,
    pub maximal: bool,
    pub planar: bool,
}

/// Compare the components of a T-curve with b1(G) + 1.
pub fn maximality_check(curve: &TManifold, dg: &DualGraph) -> Result<CurveVerdict> {
    if curve.dim() != 1 || curve.ambient() != dg.n {
        return Err(Error::precondition("maximality check needs a T-curve on this triangulation"));
    }
    let b1 = b1_dual(dg)?;
    let b0 = connected_components(curve).count;
    let planar = is_planar(&dg.graph);
    let maximal = b0 == b1 + 1;
    if b0 > b1 + 1 {
        return Err(Error::invariant(format!("curve has {b0} components, above b1 + 1 = {}", b1 + 1)));
    }
    if maximal && !planar {
        return Err(Error::invariant("maximal curve on a triangulation with non-planar dual graph"));
    }
    Ok(CurveVerdict {
        b0,
        harnack_bound: b1 + 1,
        surface_euler: b0 as i64 + 1 - b1 as i64,
        maximal,
        planar,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub volume: u64,
    pub boundary_volume: u64,
    pub b1_graph: usize,
    pub b1_formula: i64,
    pub planar: bool,
    pub harnack_bound: usize,
    pub curve_volume_bound: u64,
    pub surface_bound: Option<u64>,
    /// h^{0,q} for each codimension k = 1..=n.
    pub hodge: Vec<Vec<i64>>,
    pub codegree: u64,
    pub interior_point: bool,
    /// Interior point in dimension at least 4: no maximal T-curve.
    pub interior_point_obstruction: bool,
    pub volume_bound_stricter: bool,
    pub maximal_curve_possible: bool,
}

pub fn bounds_report(tri: &Triangulation) -> Result<BoundsReport> {
    let n = tri.dim();
    let dg = dual_graph(tri)?;
    dg.check_degrees()?;
    let b1 = b1_dual(&dg)?;
    let alpha = volume(tri);
    let beta = boundary_volume(tri);
    let planar = is_planar(&dg.graph);
    let interior_point = !tri.interior_vertices().is_empty();
    let obstruction = n >= 4 && interior_point;
    let hodge = (1..=n)
        .map(|k| hodge_h0(tri.polytope(), k))
        .collect::<Result<Vec<_>>>()?;
    let curve_volume_bound = curve_bound(n, alpha);
    Ok(BoundsReport {
        n,
        volume: alpha,
        boundary_volume: beta,
        b1_graph: b1,
        b1_formula: b1_formula(n, alpha, beta),
        planar,
        harnack_bound: b1 + 1,
        curve_volume_bound,
        surface_bound: surface_bound(n, alpha).ok(),
        hodge,
        codegree: codegree(tri.polytope()),
        interior_point,
        interior_point_obstruction: obstruction,
        volume_bound_stricter: (curve_volume_bound as usize) < b1 + 1,
        maximal_curve_possible: planar && !obstruction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{freudenthal, standard_simplex};

    #[test]
    fn tetrahedron_dual_graph_is_a_star() {
        let t = standard_simplex(3);
        let dg = dual_graph(&t).unwrap();
        assert_eq!((dg.num_vertices(), dg.num_edges()), (5, 4));
        dg.check_degrees().unwrap();
        assert_eq!(b1_dual(&dg).unwrap(), 0);
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(3, 2), 3);
        assert_eq!(stirling2(4, 2), 7);
        assert_eq!(stirling2(5, 3), 25);
        assert_eq!(stirling2(3, 0), 0);
    }

    #[test]
    fn codegrees() {
        assert_eq!(codegree(&Polytope::standard_simplex(3, 1)), 4);
        assert_eq!(codegree(&Polytope::standard_simplex(3, 2)), 2);
        assert_eq!(codegree(&Polytope::cube(3, 1)), 2);
    }

    #[test]
    fn planar_triangle_mesh() {
        let t = freudenthal(2, 3);
        let r = bounds_report(&t).unwrap();
        assert!(r.planar);
        assert_eq!(r.b1_graph as i64, r.b1_formula);
    }
}
