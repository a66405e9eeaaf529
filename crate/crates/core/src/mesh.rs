//! Mesh export of T-manifolds in dimension 3.
//!
//! Geometry comes from the barycentric subdivision: the piece of X_E in the
//! copy s(tau) is the union of the chains sigma_0 < ... < tau of faces with s
//! in E(sigma_i), realised with the barycentres of the faces mirrored by s.
//! Copies glued along the boundary of the polytope are emitted separately,
//! so identified points may appear at several (mirrored) positions; every
//! vertex records the glued cell whose barycentre it is.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::complex::{cell_components, connected_components, TManifold};
use crate::error::{Error, Result};
use crate::f2::{orthant_string, Bits};
use crate::lattice::{Simplex, Triangulation};
use crate::glued::FaceClasses;
use crate::phase::RealPhaseStructure;
use crate::poly::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mesh {
    pub vertices: Vec<[Q; 3]>,
    /// Glued cell of each vertex: dimension, face index and the canonical
    /// orthant of its class. Vertices with equal keys are identified.
    pub vertex_cells: Vec<CellKey>,
    /// Triangles, for T-manifolds of dimension 2 and 3.
    pub faces: Vec<[usize; 3]>,
    /// Segments, for T-curves.
    pub lines: Vec<[usize; 2]>,
    /// Component of every face or line.
    pub components: Vec<usize>,
    pub component_count: usize,
    /// Orthant copy of every face or line.
    pub orthants: Vec<Bits>,
}

pub type CellKey = (usize, usize, Bits);

#[derive(Default)]
struct Points {
    index: HashMap<([Q; 3], CellKey), usize>,
    list: Vec<[Q; 3]>,
    keys: Vec<CellKey>,
}

impl Points {
    fn get(&mut self, p: [Q; 3], key: CellKey) -> usize {
        if let Some(&i) = self.index.get(&(p, key)) {
            return i;
        }
        self.list.push(p);
        self.keys.push(key);
        self.index.insert((p, key), self.list.len() - 1);
        self.list.len() - 1
    }
}

fn key(tri: &Triangulation, classes: &FaceClasses, f: &Simplex, s: Bits) -> Result<CellKey> {
    let m = f.len() - 1;
    let i = tri.require_index(f)?;
    Ok((m, i, classes.class_of(m, i, s)))
}

fn barycentre(tri: &Triangulation, s: &Simplex, orthant: Bits) -> [Q; 3] {
    let k = s.len() as i128;
    let mut out = [Q::from_integer(0); 3];
    for (i, slot) in out.iter_mut().enumerate() {
        let sum: i64 = s.vertices().iter().map(|&v| tri.coord(v)[i]).sum();
        let sign = if orthant >> i & 1 == 1 { -1 } else { 1 };
        *slot = Q::new(sign * sum as i128, k);
    }
    out
}

/// Maximal chains of faces from dimension k up to tau, all meeting E in s.
fn chains(tri: &Triangulation, rps: &RealPhaseStructure, tau: &Simplex, s: Bits) -> Vec<Vec<Simplex>> {
    let k = rps.codim();
    let mut out = Vec::new();
    let mut stack = vec![vec![tau.clone()]];
    while let Some(chain) = stack.pop() {
        let last = chain.last().expect("nonempty chain");
        if last.len() == k + 1 {
            let mut c = chain.clone();
            c.reverse();
            out.push(c);
            continue;
        }
        for f in last.facets() {
            if rps.orthant_in(tri, &f, s) {
                let mut c = chain.clone();
                c.push(f);
                stack.push(c);
            }
        }
    }
    out
}

/// Geometry of the T-manifold `tm` of `rps`. Codimension 0 yields the
/// boundary triangles of every mirrored maximal simplex.
pub fn build_mesh(tri: &Triangulation, rps: &RealPhaseStructure, tm: &TManifold) -> Result<Mesh> {
    if tri.dim() != 3 {
        return Err(Error::precondition(format!(
            "mesh export needs dimension 3, got {}",
            tri.dim()
        )));
    }
    let comps = connected_components(tm);
    let labels = cell_components(tm, &comps);
    let top = tm.dim();
    let classes = FaceClasses::new(tri)?;
    let mut pts = Points::default();
    let mut mesh = Mesh {
        vertices: Vec::new(),
        vertex_cells: Vec::new(),
        faces: Vec::new(),
        lines: Vec::new(),
        components: Vec::new(),
        component_count: comps.count,
        orthants: Vec::new(),
    };
    for (c, label) in tm.labels()[top].iter().enumerate() {
        let tau = tm.cell_simplex(tri, top, c).clone();
        let s = label.orthant;
        let comp = labels[top][c];
        if rps.codim() == 0 {
            for f in tau.facets() {
                let v = f
                    .vertices()
                    .iter()
                    .map(|&x| {
                        let point = Simplex::from_sorted(vec![x]);
                        Ok(pts.get(barycentre(tri, &point, s), key(tri, &classes, &point, s)?))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                mesh.faces.push([v[0], v[1], v[2]]);
                mesh.components.push(comp);
                mesh.orthants.push(s);
            }
            continue;
        }
        for chain in chains(tri, rps, &tau, s) {
            let v = chain
                .iter()
                .map(|f| Ok(pts.get(barycentre(tri, f, s), key(tri, &classes, f, s)?)))
                .collect::<Result<Vec<usize>>>()?;
            match v.as_slice() {
                [a, b] => mesh.lines.push([*a, *b]),
                [a, b, c] => mesh.faces.push([*a, *b, *c]),
                _ => return Err(Error::invariant("chain of unexpected length")),
            }
            mesh.components.push(comp);
            mesh.orthants.push(s);
        }
    }
    mesh.vertices = pts.list;
    mesh.vertex_cells = pts.keys;
    Ok(mesh)
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}", q.to_f64().unwrap_or(f64::NAN))
    }
}

/// OFF triangle mesh; component and orthant of each face in the comments.
pub fn to_off(mesh: &Mesh) -> Result<String> {
    if !mesh.lines.is_empty() {
        return Err(Error::precondition("OFF export holds triangles only; use OBJ for curves"));
    }
    let mut out = String::from("OFF\n");
    writeln!(out, "# components {}", mesh.component_count).ok();
    for (i, (c, s)) in mesh.components.iter().zip(&mesh.orthants).enumerate() {
        writeln!(out, "# face {i} component {c} orthant {}", orthant_string(*s, 3)).ok();
    }
    for (i, (m, f, s)) in mesh.vertex_cells.iter().enumerate() {
        writeln!(out, "# vertex {i} glued cell {m}:{f}:{}", orthant_string(*s, 3)).ok();
    }
    writeln!(out, "{} {} 0", mesh.vertices.len(), mesh.faces.len()).ok();
    for p in &mesh.vertices {
        writeln!(out, "{} {} {}", fmt_q(&p[0]), fmt_q(&p[1]), fmt_q(&p[2])).ok();
    }
    for f in &mesh.faces {
        writeln!(out, "3 {} {} {}", f[0], f[1], f[2]).ok();
    }
    Ok(out)
}

/// OBJ with one group per component, faces or polylines.
pub fn to_obj(mesh: &Mesh) -> String {
    let mut out = String::new();
    writeln!(out, "# components {}", mesh.component_count).ok();
    for (p, (m, f, s)) in mesh.vertices.iter().zip(&mesh.vertex_cells) {
        writeln!(out, "v {} {} {}", fmt_q(&p[0]), fmt_q(&p[1]), fmt_q(&p[2])).ok();
        writeln!(out, "# glued cell {m}:{f}:{}", orthant_string(*s, 3)).ok();
    }
    let mut by_comp: Vec<Vec<usize>> = vec![Vec::new(); mesh.component_count];
    for (i, &c) in mesh.components.iter().enumerate() {
        by_comp[c].push(i);
    }
    for (c, items) in by_comp.iter().enumerate() {
        writeln!(out, "g component_{c}").ok();
        for &i in items {
            if mesh.lines.is_empty() {
                let f = mesh.faces[i];
                writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).ok();
            } else {
                let l = mesh.lines[i];
                writeln!(out, "l {} {}", l[0] + 1, l[1] + 1).ok();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_tmanifold_from_classes;
    use crate::families::standard_simplex;
    use crate::glued::FaceClasses;
    use crate::phase::trivial_codim0;

    #[test]
    fn mirrored_tetrahedra() {
        let t = standard_simplex(3);
        let e = trivial_codim0(&t);
        let tm = build_tmanifold_from_classes(&t, &FaceClasses::new(&t).unwrap(), &e).unwrap();
        let m = build_mesh(&t, &e, &tm).unwrap();
        assert_eq!(m.faces.len(), 32);
        assert_eq!(m.vertices.len(), 7);
        assert!(to_off(&m).unwrap().starts_with("OFF\n"));
    }
}
