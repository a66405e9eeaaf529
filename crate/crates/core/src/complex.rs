//! The canonical cell complex of a T-manifold.
//!
//! The m-cells are the glued classes s(tau) with dim tau = m + k and s in
//! E(tau). Membership is constant on a class because the minimal-face
//! orthogonal of tau is contained in the direction of every E(sigma) for the
//! k-faces sigma of tau. The cell of s(tau') is a face of the cell of s(tau)
//! when tau' is a facet of tau of dimension at least k with s in E(tau').

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{self, Bits};
use crate::glued::{FaceClasses, GluedComplex};
use crate::homology::{betti_f2, CellComplex, UnionFind};
use crate::lattice::{Simplex, Triangulation};
use crate::phase::{validate_rps, RealPhaseStructure, SignDistribution};

/// Which glued class a T-manifold cell comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellLabel {
    /// Index of tau in `tri.faces(m + k)`.
    pub simplex: u32,
    /// Canonical orthant of the class.
    pub orthant: Bits,
}

#[derive(Clone, Debug)]
pub struct TManifold {
    n: usize,
    k: usize,
    complex: CellComplex,
    labels: Vec<Vec<CellLabel>>,
}

impl TManifold {
    pub fn codim(&self) -> usize {
        self.k
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Dimension n - k.
    pub fn dim(&self) -> usize {
        self.n - self.k
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    /// `labels()[m][c]` names the m-cell `c`.
    pub fn labels(&self) -> &[Vec<CellLabel>] {
        &self.labels
    }

    /// Simplex of the triangulation carrying an m-cell.
    pub fn cell_simplex<'a>(&self, tri: &'a Triangulation, m: usize, c: usize) -> &'a Simplex {
        &tri.faces(m + self.k)[self.labels[m][c].simplex as usize]
    }
}

/// Builds the canonical complex; validates the structure first.
pub fn build_tmanifold(
    tri: &Triangulation,
    gc: &GluedComplex,
    rps: &RealPhaseStructure,
) -> Result<TManifold> {
    let report = validate_rps(tri, rps)?;
    if !report.is_valid() {
        return Err(Error::InvalidPhaseStructure(format!(
            "{} direction failures, {} parity failures",
            report.direction_failures.len(),
            report.parity_failures.len()
        )));
    }
    Ok(build_unchecked(tri, gc.face_classes(), rps))
}

/// As [`build_tmanifold`] without building the glued complex or revalidating.
pub fn build_tmanifold_from_classes(
    tri: &Triangulation,
    classes: &FaceClasses,
    rps: &RealPhaseStructure,
) -> Result<TManifold> {
    let report = validate_rps(tri, rps)?;
    if !report.is_valid() {
        return Err(Error::InvalidPhaseStructure("structure fails validation".into()));
    }
    Ok(build_unchecked(tri, classes, rps))
}

fn build_unchecked(tri: &Triangulation, classes: &FaceClasses, rps: &RealPhaseStructure) -> TManifold {
    let n = tri.dim();
    let k = rps.codim();
    let top = n - k;
    // reps[m][i]: sorted classes of face i of dim m + k lying in E; start[m][i]: first cell id.
    let mut reps: Vec<Vec<Vec<Bits>>> = Vec::with_capacity(top + 1);
    let mut start: Vec<Vec<u32>> = Vec::with_capacity(top + 1);
    for m in 0..=top {
        let d = m + k;
        let row: Vec<Vec<Bits>> = tri
            .faces(d)
            .par_iter()
            .enumerate()
            .map(|(i, tau)| {
                let cosets = rps.face_cosets(tri, tau);
                let mut v: Vec<Bits> = classes
                    .classes(d, i)
                    .filter(|&r| cosets.iter().any(|e| e.contains(r)))
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        let mut acc = 0u32;
        start.push(
            row.iter()
                .map(|v| {
                    let o = acc;
                    acc += v.len() as u32;
                    o
                })
                .collect(),
        );
        reps.push(row);
    }

    let mut boundary = Vec::with_capacity(top + 1);
    let mut labels = Vec::with_capacity(top + 1);
    for m in 0..=top {
        let d = m + k;
        labels.push(
            reps[m]
                .iter()
                .enumerate()
                .flat_map(|(i, v)| v.iter().map(move |&r| CellLabel { simplex: i as u32, orthant: r }))
                .collect::<Vec<_>>(),
        );
        if m == 0 {
            boundary.push(vec![Vec::new(); labels[0].len()]);
            continue;
        }
        let cells: Vec<Vec<u32>> = tri
            .faces(d)
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, tau)| {
                let facets: Vec<usize> =
                    tau.facets().map(|f| tri.face_index(&f).expect("facet")).collect();
                let (reps, start) = (&reps, &start);
                reps[m][i].iter().map(move |&r| {
                    let mut b = Vec::with_capacity(facets.len());
                    for &j in &facets {
                        let cls = classes.class_of(d - 1, j, r);
                        if let Ok(pos) = reps[m - 1][j].binary_search(&cls) {
                            b.push(start[m - 1][j] + pos as u32);
                        }
                    }
                    b.sort_unstable();
                    b
                })
            })
            .collect();
        boundary.push(cells);
    }
    TManifold {
        n,
        k,
        complex: CellComplex::new(boundary),
        labels,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Components {
    pub count: usize,
    /// Component of each top-dimensional cell.
    pub top_labels: Vec<usize>,
}

/// Connected components via top cells glued along codimension-one cells.
pub fn connected_components(tm: &TManifold) -> Components {
    let cx = &tm.complex;
    let top = tm.dim();
    let ntop = cx.counts.get(top).copied().unwrap_or(0);
    let mut uf = UnionFind::new(ntop);
    if top > 0 {
        let mut first_top: Vec<Option<usize>> = vec![None; cx.counts[top - 1]];
        for (c, faces) in cx.boundary[top].iter().enumerate() {
            for &f in faces {
                match first_top[f as usize] {
                    Some(o) => {
                        uf.union(o, c);
                    }
                    None => first_top[f as usize] = Some(c),
                }
            }
        }
    }
    let (count, top_labels) = uf.labels();
    Components { count, top_labels }
}

/// Component label of every cell of every dimension, derived from the
/// top-cell labels.
pub fn cell_components(tm: &TManifold, comps: &Components) -> Vec<Vec<usize>> {
    let cx = &tm.complex;
    let top = tm.dim();
    let mut out: Vec<Vec<usize>> = cx.counts.iter().map(|&c| vec![usize::MAX; c]).collect();
    out[top] = comps.top_labels.clone();
    for m in (1..=top).rev() {
        for (c, faces) in cx.boundary[m].iter().enumerate() {
            let l = out[m][c];
            for &f in faces {
                out[m - 1][f as usize] = l;
            }
        }
    }
    out
}

pub fn betti(tm: &TManifold) -> Vec<usize> {
    betti_f2(&tm.complex)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CellCensus {
    pub max_cells: usize,
    /// Top cells with exactly (top dimension + 1) facets.
    pub simplicial_max_cells: usize,
}

pub fn cell_census(tm: &TManifold) -> CellCensus {
    let top = tm.dim();
    let max_cells = tm.complex.counts[top];
    let simplicial_max_cells = if top == 0 {
        max_cells
    } else {
        tm.complex.boundary[top]
            .iter()
            .filter(|b| b.len() == top + 1)
            .count()
    };
    CellCensus {
        max_cells,
        simplicial_max_cells,
    }
}

/// A witness that X_B is not contained in X_A: a simplex and an orthant in
/// E_B but not in E_A.
pub fn containment_witness(
    tri: &Triangulation,
    a: &RealPhaseStructure,
    b: &RealPhaseStructure,
) -> Result<Option<(Simplex, Bits)>> {
    if a.ambient() != tri.dim() || b.ambient() != tri.dim() {
        return Err(Error::precondition("structures live on different triangulations"));
    }
    if b.codim() < a.codim() {
        return Err(Error::precondition("containment needs codim B >= codim A"));
    }
    // It suffices to test the kB-simplices: for larger tau, E_B(tau) is the
    // union of E_B over its kB-faces, each contained in E_A of that face and
    // hence in E_A(tau).
    let kb = b.codim();
    Ok(tri
        .faces(kb)
        .par_iter()
        .zip(b.cells().par_iter())
        .find_map_any(|(sigma, e)| {
            let cosets = a.face_cosets(tri, sigma);
            e.elements()
                .find(|&s| !cosets.iter().any(|c| c.contains(s)))
                .map(|s| (sigma.clone(), s))
        }))
}

/// Is X_B a subcomplex of X_A?
pub fn contains(tri: &Triangulation, a: &RealPhaseStructure, b: &RealPhaseStructure) -> Result<bool> {
    Ok(containment_witness(tri, a, b)?.is_none())
}

pub const DEFAULT_ENCLOSURE_CAP: usize = 24;

/// All sign distributions mu (normalized to `+` at vertex 0) whose
/// hypersurface contains X_E, by exhaustive scan.
///
/// X_E lies in X_mu iff for every k-simplex sigma and s in E(sigma) some
/// edge of sigma lies in E_mu, i.e. the signs of the mirrored vertices s(v),
/// v in sigma, are not all equal.
pub fn enclosure_search(
    tri: &Triangulation,
    rps: &RealPhaseStructure,
    cap: usize,
) -> Result<Vec<SignDistribution>> {
    let nv = tri.num_vertices();
    if nv > cap.min(31) {
        return Err(Error::precondition(format!(
            "{nv} vertices exceed the enclosure search cap of {cap}"
        )));
    }
    if rps.codim() < 1 {
        return Err(Error::precondition("enclosure search needs codimension at least 1"));
    }
    if nv == 0 {
        return Ok(Vec::new());
    }
    // Each constraint: vertex mask of sigma and the mask of vertices whose
    // sign flips under s. Signs are constant on sigma iff mu ^ flip restricted
    // to sigma is all zeros or all ones.
    let mut constraints: Vec<(u32, u32)> = Vec::new();
    for (sigma, e) in rps.assignments(tri) {
        let vmask = sigma.vertices().iter().fold(0u32, |m, &v| m | 1 << v);
        for s in e.elements() {
            let flip = sigma
                .vertices()
                .iter()
                .filter(|&&v| f2::dot(s, tri.vertex_parity(v)))
                .fold(0u32, |m, &v| m | 1 << v);
            constraints.push((vmask, flip));
        }
    }
    constraints.sort_unstable();
    constraints.dedup();
    let total: u64 = 1 << (nv - 1);
    let mut found: Vec<u32> = (0..total)
        .into_par_iter()
        .map(|x| (x as u32) << 1)
        .filter(|&mu| {
            constraints.iter().all(|&(vmask, flip)| {
                let signs = (mu ^ flip) & vmask;
                signs != 0 && signs != vmask
            })
        })
        .collect();
    found.sort_unstable();
    Ok(found
        .into_iter()
        .map(|mu| SignDistribution::new((0..nv).map(|v| mu >> v & 1 == 1).collect()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::standard_simplex;
    use crate::glued::build_glued;
    use crate::phase::{from_sign_distribution, trivial_codim0};

    #[test]
    fn codim0_is_glued_space() {
        let t = standard_simplex(2);
        let gc = build_glued(&t).unwrap();
        let tm = build_tmanifold(&t, &gc, &trivial_codim0(&t)).unwrap();
        assert_eq!(tm.complex().counts, gc.complex().counts);
        assert_eq!(betti(&tm), vec![1, 1, 1]);
    }

    #[test]
    fn line_in_triangle() {
        let t = standard_simplex(2);
        let gc = build_glued(&t).unwrap();
        let mu = SignDistribution::parse("+--").unwrap();
        let e = from_sign_distribution(&t, &mu).unwrap();
        let tm = build_tmanifold(&t, &gc, &e).unwrap();
        assert_eq!(tm.complex().counts, vec![3, 3]);
        assert_eq!(connected_components(&tm).count, 1);
        assert_eq!(betti(&tm), vec![1, 1]);
    }

    #[test]
    fn enclosure_contains_source() {
        let t = crate::families::freudenthal(2, 2);
        let mu = SignDistribution::new(vec![false, true, true, false, true, false]);
        let e = from_sign_distribution(&t, &mu).unwrap();
        let found = enclosure_search(&t, &e, DEFAULT_ENCLOSURE_CAP).unwrap();
        assert!(found.contains(&mu.normalized()));
    }
}
