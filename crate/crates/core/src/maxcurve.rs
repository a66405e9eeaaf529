//! The floor triangulation of dΔ3 and the maximal pair (surface, curve).
//!
//! Points are addressed by `(x, y, t)` with `t = d - z`, so that the slice
//! `T_t` is the triangle `x, y >= 0, x + y <= t` at height `z = d - t`.
//! Even slices are cut by the rows `y = const` and odd slices by the columns
//! `x = const`; the segment `S_t^l` is the row (or column) of length `l`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{build_tmanifold_from_classes, cell_components, connected_components, TManifold};
use crate::error::{Error, Result};
use crate::families::Builder;
use crate::glued::FaceClasses;
use crate::intersection::{axis, build_k_rps, EdgeOrientation};
use crate::lattice::{LatticePoint, Polytope, Simplex, Triangulation};
use crate::phase::{RealPhaseStructure, SignDistribution};

/// Parity code of a lattice point of dΔ3, from the parities of x, y, d - z.
pub fn parity_code(point: &[i64], d: i64) -> Result<u8> {
    if point.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: point.len(),
            context: "parity code".into(),
        });
    }
    let (x, y, z) = (point[0], point[1], point[2]);
    if x < 0 || y < 0 || z < 0 || x + y + z > d {
        return Err(Error::precondition(format!("{point:?} lies outside {d}Δ3")));
    }
    let odd = |v: i64| v.rem_euclid(2) == 1;
    Ok(match (odd(x), odd(y), odd(d - z)) {
        (true, true, false) => 1,
        (false, false, false) => 2,
        (false, true, false) => 3,
        (false, false, true) => 4,
        (true, false, false) => 5,
        (true, false, true) => 6,
        (false, true, true) => 7,
        (true, true, true) => 8,
    })
}

#[derive(Clone, Debug)]
pub struct FloorData {
    pub d: i64,
    pub triangulation: Triangulation,
    /// Parity code of every vertex.
    pub parity: Vec<u8>,
    pub mu: SignDistribution,
    pub orientation: EdgeOrientation,
}

impl FloorData {
    /// `(x, y, t)` of a vertex.
    pub fn slice_coords(&self, v: u32) -> (i64, i64, i64) {
        let c = self.triangulation.coord(v);
        (c[0], c[1], self.d - c[2])
    }
}

fn point(d: i64, x: i64, y: i64, t: i64) -> LatticePoint {
    vec![x, y, d - t]
}

/// Unimodular triangles of the slice `T_t`, as `(x, y)` pairs.
fn slice_triangles(t: i64) -> Vec<[(i64, i64); 3]> {
    let mut out = Vec::new();
    for j in 0..t {
        let len = t - j;
        if j % 2 == 0 {
            // diagonal from (len, j) to (0, j + 1)
            for i in 0..len {
                out.push([(i, j), (i + 1, j), (0, j + 1)]);
            }
            for i in 0..len - 1 {
                out.push([(i, j + 1), (i + 1, j + 1), (len, j)]);
            }
        } else {
            // diagonal from (0, j) to (len - 1, j + 1)
            for i in 0..len {
                out.push([(i, j), (i + 1, j), (len - 1, j + 1)]);
            }
            for i in 0..len - 1 {
                out.push([(i, j + 1), (i + 1, j + 1), (0, j)]);
            }
        }
    }
    if t % 2 == 1 {
        for tri in out.iter_mut() {
            for p in tri.iter_mut() {
                *p = (p.1, p.0);
            }
        }
    }
    out
}

/// The floor triangulation of dΔ3 with d^3 tetrahedra.
pub fn floor_triangulation_only(d: i64) -> Result<Triangulation> {
    if d < 1 {
        return Err(Error::precondition(format!("degree must be positive, got {d}")));
    }
    let mut b = Builder::new();
    for j in 0..d {
        let (e, o) = if j % 2 == 0 { (j, j + 1) } else { (j + 1, j) };
        // cone of the even slice over the end (0, o) of the odd slice
        for tri in slice_triangles(e) {
            let mut pts: Vec<LatticePoint> = tri.iter().map(|&(x, y)| point(d, x, y, e)).collect();
            pts.push(point(d, 0, o, o));
            b.simplex(pts);
        }
        // cone of the odd slice over the end (e, 0) of the even slice
        for tri in slice_triangles(o) {
            let mut pts: Vec<LatticePoint> = tri.iter().map(|&(x, y)| point(d, x, y, o)).collect();
            pts.push(point(d, e, 0, e));
            b.simplex(pts);
        }
        // join of the row y = 0 of T_e with the column x = 0 of T_o
        for i in 0..e {
            for k in 0..o {
                b.simplex(vec![
                    point(d, i, 0, e),
                    point(d, i + 1, 0, e),
                    point(d, 0, k, o),
                    point(d, 0, k + 1, o),
                ]);
            }
        }
    }
    Ok(b.finish(Polytope::standard_simplex(3, d)))
}

/// Floor triangulation with parity codes, signs and orientation.
pub fn floor_triangulation(d: i64) -> Result<FloorData> {
    let tri = floor_triangulation_only(d)?;
    let parity = tri
        .coords()
        .iter()
        .map(|c| parity_code(c, d))
        .collect::<Result<Vec<u8>>>()?;
    let mu = SignDistribution::new(parity.iter().map(|&p| p % 2 == 1).collect());
    let orientation = EdgeOrientation::from_key(&tri, |v| parity[v as usize])?;
    Ok(FloorData {
        d,
        triangulation: tri,
        parity,
        mu,
        orientation,
    })
}

/// The T-surface X_{E_mu} and the T-curve X_{E_mu ∩ E_mu}.
#[derive(Clone, Debug)]
pub struct MaximalPair {
    pub floor: FloorData,
    pub surface_structure: RealPhaseStructure,
    pub curve_structure: RealPhaseStructure,
    pub surface: TManifold,
    pub curve: TManifold,
}

pub fn build_family(d: i64) -> Result<MaximalPair> {
    let floor = floor_triangulation(d)?;
    let tri = &floor.triangulation;
    let mut chain = build_k_rps(tri, &floor.mu, &floor.orientation)?;
    chain.truncate(3);
    let curve_structure = chain.pop().expect("codimension 2");
    let surface_structure = chain.pop().expect("codimension 1");
    let classes = FaceClasses::new(tri)?;
    let surface = build_tmanifold_from_classes(tri, &classes, &surface_structure)?;
    let curve = build_tmanifold_from_classes(tri, &classes, &curve_structure)?;
    Ok(MaximalPair {
        floor,
        surface_structure,
        curve_structure,
        surface,
        curve,
    })
}

/// Families of cycles of the maximal curve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CycleClasses {
    pub horizontal: usize,
    pub transversal: usize,
    pub pure_join: usize,
    pub boundary_join: usize,
    pub axisless: usize,
    pub global: usize,
}

impl CycleClasses {
    pub fn total(&self) -> usize {
        self.horizontal
            + self.transversal
            + self.pure_join
            + self.boundary_join
            + self.axisless
            + self.global
    }

    /// Counts predicted by the enumeration of cycles.
    pub fn expected(d: i64) -> CycleClasses {
        let c2 = |m: i64| if m < 2 { 0 } else { m * (m - 1) / 2 };
        let horizontal: i64 = (2..d).map(|k| 2 * c2(k - 1)).sum::<i64>() + c2(d - 1);
        let transversal: i64 = (1..d)
            .map(|k| (1..k).map(|l| 2 * (l - 1)).sum::<i64>() + (k - 1))
            .sum();
        let pure_join: i64 = (0..d).map(|k| k * (k - 1)).sum();
        let boundary_join: i64 = (2..d).map(|k| 2 * (k - 1)).sum::<i64>() + (d - 1);
        let axisless: i64 = (2..d).map(|k| 2 * (k - 1)).sum();
        let global = 1i64;
        CycleClasses {
            horizontal: horizontal as usize,
            transversal: transversal as usize,
            pure_join: pure_join as usize,
            boundary_join: boundary_join as usize,
            axisless: axisless as usize,
            global: global as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleCensus {
    pub total: usize,
    pub classified: CycleClasses,
    /// Every component has as many vertices as edges (and is a circle).
    pub all_circles: bool,
}

/// Where a vertex sits in the slice structure.
fn segment_of(fd: &FloorData, v: u32) -> (i64, i64, i64) {
    let (x, y, t) = fd.slice_coords(v);
    // (slice, segment length l, position along the segment)
    if t % 2 == 0 {
        (t, t - y, x)
    } else {
        (t, t - x, y)
    }
}

fn slice_interior(fd: &FloorData, v: u32) -> bool {
    let (x, y, t) = fd.slice_coords(v);
    x > 0 && y > 0 && x + y < t
}

fn segment_interior(fd: &FloorData, v: u32) -> bool {
    let (_, l, p) = segment_of(fd, v);
    p > 0 && p < l
}

/// Interior of the bottom segment S_t^t.
fn base_interior(fd: &FloorData, v: u32) -> bool {
    let (t, l, _) = segment_of(fd, v);
    l == t && segment_interior(fd, v)
}

/// Is `v` the apex of a cone of slice `t` (the far end of S_{t±1}^{t±1})?
fn is_apex_for(fd: &FloorData, v: u32, t: i64) -> bool {
    let (x, y, tv) = fd.slice_coords(v);
    if (tv - t).abs() != 1 {
        return false;
    }
    if t % 2 == 0 {
        x == 0 && y == tv
    } else {
        y == 0 && x == tv
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Horizontal,
    Transversal,
    PureJoin,
    BoundaryJoin,
}

fn classify_axis(fd: &FloorData, a: u32, b: u32) -> Option<Kind> {
    let ta = fd.slice_coords(a).2;
    let tb = fd.slice_coords(b).2;
    for (v0, v1, t0, t1) in [(a, b, ta, tb), (b, a, tb, ta)] {
        if base_interior(fd, v0) {
            if (t1 - t0).abs() == 1 && base_interior(fd, v1) {
                return Some(Kind::PureJoin);
            }
            if is_apex_for(fd, v1, t0) {
                return Some(Kind::BoundaryJoin);
            }
        }
        if slice_interior(fd, v0) && (t1 - t0).abs() == 1 {
            return Some(Kind::Horizontal);
        }
        if t0 == t1 && segment_interior(fd, v0) {
            let (_, l0, _) = segment_of(fd, v0);
            let (_, l1, _) = segment_of(fd, v1);
            if (l0 - l1).abs() == 1 {
                return Some(Kind::Transversal);
            }
        }
    }
    None
}

/// Count the components of the curve and sort them into families.
///
/// A component has an axis edge e when the axis of the curve is the same
/// edge e in every tetrahedron it crosses. Components without an axis that
/// avoid the top vertex are axisless; the single remaining one is global.
pub fn cycle_census(fd: &FloorData, curve: &TManifold) -> Result<CycleCensus> {
    let tri = &fd.triangulation;
    if curve.codim() != 2 || tri.dim() != 3 {
        return Err(Error::precondition("cycle census needs a curve in dimension 3"));
    }
    let comps = connected_components(curve);
    let labels = cell_components(curve, &comps);
    let cx = curve.complex();

    let mut vertex_count = vec![0usize; comps.count];
    for &l in &labels[0] {
        vertex_count[l] += 1;
    }
    let mut edge_count = vec![0usize; comps.count];
    for &l in &labels[1] {
        edge_count[l] += 1;
    }
    let all_circles = vertex_count == edge_count;

    let top = tri
        .coords()
        .iter()
        .position(|c| c[0] == 0 && c[1] == 0 && c[2] == fd.d)
        .expect("top vertex") as u32;

    // Common axis per component: None = not yet seen, Some(None) = conflict.
    let mut axes: Vec<Option<Option<Simplex>>> = vec![None; comps.count];
    let mut touches_top = vec![false; comps.count];
    for c in 0..cx.counts[1] {
        let l = labels[1][c];
        let sigma = curve.cell_simplex(tri, 1, c);
        if sigma.contains_vertex(top) {
            touches_top[l] = true;
        }
        let s = curve.labels()[1][c].orthant;
        let ax = axis(tri, &fd.mu, &fd.orientation, sigma, s)?
            .ok_or_else(|| Error::invariant(format!("curve cell in {sigma} without an axis")))?;
        axes[l] = match axes[l].take() {
            None => Some(Some(ax.edge)),
            Some(Some(e)) if e == ax.edge => Some(Some(e)),
            _ => Some(None),
        };
    }

    let mut classes = CycleClasses::default();
    let mut unclassified = Vec::new();
    for l in 0..comps.count {
        match axes[l].clone().flatten() {
            Some(e) => {
                let (a, b) = (e.vertices()[0], e.vertices()[1]);
                match classify_axis(fd, a, b) {
                    Some(Kind::Horizontal) => classes.horizontal += 1,
                    Some(Kind::Transversal) => classes.transversal += 1,
                    Some(Kind::PureJoin) => classes.pure_join += 1,
                    Some(Kind::BoundaryJoin) => classes.boundary_join += 1,
                    None => unclassified.push(format!(
                        "cycle around {:?}-{:?}",
                        fd.slice_coords(a),
                        fd.slice_coords(b)
                    )),
                }
            }
            None if !touches_top[l] => classes.axisless += 1,
            None => classes.global += 1,
        }
    }
    if !unclassified.is_empty() {
        return Err(Error::invariant(format!(
            "unclassified components: {}",
            unclassified.join("; ")
        )));
    }
    Ok(CycleCensus {
        total: comps.count,
        classified: classes,
        all_circles,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalityVerdict {
    pub d: i64,
    pub components: usize,
    pub expected_components: i64,
    pub surface_betti: Vec<usize>,
    pub surface_total: usize,
    pub expected_surface_total: i64,
    /// First Betti number of the dual graph of the floor triangulation.
    pub b1_graph: usize,
    pub planar: bool,
    pub pass: bool,
    pub problems: Vec<String>,
}

/// Build the pair and compare against the component and Betti targets.
pub fn verify_maximality(d: i64) -> Result<MaximalityVerdict> {
    let pair = build_family(d)?;
    let components = connected_components(&pair.curve).count;
    let expected_components = d * d * d - 2 * d * d + 2;
    let surface_betti = crate::complex::betti(&pair.surface);
    let surface_total: usize = surface_betti.iter().sum();
    let expected_surface_total = d * d * d - 4 * d * d + 6 * d;
    let dg = crate::bounds::dual_graph(&pair.floor.triangulation)?;
    let b1_graph = crate::bounds::b1_dual(&dg)?;
    let planar = crate::planarity::is_planar(&dg.graph);
    let mut problems = Vec::new();
    if components != b1_graph + 1 {
        problems.push(format!("curve has {components} components, b1 + 1 = {}", b1_graph + 1));
    }
    if !planar {
        problems.push("dual graph is not planar".into());
    }
    if components as i64 != expected_components {
        problems.push(format!(
            "curve has {components} components, expected {expected_components}"
        ));
    }
    if surface_total as i64 != expected_surface_total {
        problems.push(format!(
            "surface total Betti number {surface_total}, expected {expected_surface_total}"
        ));
    }
    Ok(MaximalityVerdict {
        d,
        components,
        expected_components,
        surface_betti,
        surface_total,
        expected_surface_total,
        b1_graph,
        planar,
        pass: problems.is_empty(),
        problems,
    })
}

/// Tally of the maximal simplices of the floor triangulation by slab.
pub fn slab_sizes(fd: &FloorData) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for s in fd.triangulation.maximal() {
        let t = s.vertices().iter().map(|&v| fd.slice_coords(v).2).min().unwrap_or(0);
        *out.entry(t).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_examples() {
        assert_eq!(parity_code(&[0, 0, 0], 2).unwrap(), 2);
        assert_eq!(parity_code(&[0, 0, 0], 3).unwrap(), 4);
        assert_eq!(parity_code(&[1, 1, 0], 2).unwrap(), 1);
        assert!(parity_code(&[2, 2, 0], 3).is_err());
    }

    #[test]
    fn floor_sizes() {
        for d in 1..=4 {
            let t = floor_triangulation_only(d).unwrap();
            assert_eq!(t.maximal().len() as i64, d * d * d);
            let report = t.validate();
            assert!(report.is_valid(), "d={d}: {:?}", report.problems());
        }
    }

    #[test]
    fn small_counts() {
        for d in 1..=4 {
            let v = verify_maximality(d).unwrap();
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn census_matches_enumeration() {
        for d in 1..=4 {
            let pair = build_family(d).unwrap();
            let c = cycle_census(&pair.floor, &pair.curve).unwrap();
            assert!(c.all_circles);
            assert_eq!(c.classified, CycleClasses::expected(d), "d={d}");
            assert_eq!(c.total, c.classified.total());
        }
    }
}
