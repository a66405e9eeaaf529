mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use patchwork::complex::{betti, connected_components};
use patchwork::families::standard_simplex;
use patchwork::maxcurve::build_family;
use patchwork::mesh::{build_mesh, to_obj, to_off, Mesh};
use patchwork::phase::trivial_codim0;

/// Euler characteristic of the mesh after gluing vertices with equal keys.
fn glued_euler(mesh: &Mesh) -> i64 {
    let key = |v: usize| mesh.vertex_cells[v];
    let verts: BTreeSet<_> = (0..mesh.vertices.len()).map(key).collect();
    if mesh.faces.is_empty() {
        let edges: BTreeSet<_> = mesh
            .lines
            .iter()
            .map(|l| {
                let mut e = [key(l[0]), key(l[1])];
                e.sort();
                e
            })
            .collect();
        return verts.len() as i64 - edges.len() as i64;
    }
    let mut edges = BTreeSet::new();
    let mut tris = BTreeSet::new();
    for f in &mesh.faces {
        let mut t = [key(f[0]), key(f[1]), key(f[2])];
        t.sort();
        tris.insert(t);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            edges.insert([t[a], t[b]]);
        }
    }
    verts.len() as i64 - edges.len() as i64 + tris.len() as i64
}

#[test]
fn codimension_zero_gives_mirrored_tetrahedra() {
    let t = standard_simplex(3);
    let e = trivial_codim0(&t);
    let m = build_mesh(&t, &e, &tmanifold(&t, &e)).unwrap();
    assert_eq!(m.faces.len(), 32);
    assert_eq!(m.orthants.iter().collect::<BTreeSet<_>>().len(), 8);
}

#[test]
fn curve_of_degree_two_has_two_loops() {
    let pair = build_family(2).unwrap();
    let t = &pair.floor.triangulation;
    let m = build_mesh(t, &pair.curve_structure, &pair.curve).unwrap();
    assert_eq!(m.component_count, 2);
    // Each component closes up once copies are glued: every glued vertex has degree 2.
    let mut degree: BTreeMap<(usize, _), usize> = BTreeMap::new();
    for (l, &c) in m.lines.iter().zip(&m.components) {
        for &v in l {
            *degree.entry((c, m.vertex_cells[v])).or_default() += 1;
        }
    }
    assert!(degree.values().all(|&d| d == 2));
    assert_eq!(glued_euler(&m), 0);
    let obj = to_obj(&m);
    assert_eq!(obj.lines().filter(|l| l.starts_with("g ")).count(), 2);
    assert!(to_off(&m).is_err());
}

#[test]
fn surfaces_match_homology_after_gluing() {
    for d in 1..=3 {
        let pair = build_family(d).unwrap();
        let t = &pair.floor.triangulation;
        let m = build_mesh(t, &pair.surface_structure, &pair.surface).unwrap();
        let b = betti(&pair.surface);
        let chi: i64 = b.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        assert_eq!(glued_euler(&m), chi, "d={d}");
        assert_eq!(m.component_count, connected_components(&pair.surface).count);
        let off = to_off(&m).unwrap();
        let header = off.lines().find(|l| !l.starts_with('#') && *l != "OFF").unwrap();
        assert_eq!(header, format!("{} {} 0", m.vertices.len(), m.faces.len()));
    }
}

#[test]
fn fixtures_match_homology_after_gluing() {
    for (t, e) in [e2(), e3()] {
        let tm = tmanifold(&t, &e);
        let m = build_mesh(&t, &e, &tm).unwrap();
        let b = betti(&tm);
        let chi: i64 = b.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        assert_eq!(glued_euler(&m), chi);
    }
}

#[test]
fn other_dimensions_are_rejected() {
    let (t, e) = e1();
    assert!(build_mesh(&t, &e, &tmanifold(&t, &e)).is_err());
}
