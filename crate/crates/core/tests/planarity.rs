mod common;

use common::rng;
use patchwork::planarity::{is_planar, planarity, verify_embedding, verify_kuratowski, Graph, KuratowskiKind, Planarity};
use rand::seq::SliceRandom;
use rand::Rng;

/// A triangulated grid with random diagonals, some edges removed and labels shuffled.
fn random_planar(r: &mut rand_chacha::ChaCha8Rng, w: usize, h: usize) -> Graph {
    let id = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
            if x + 1 < w && y + 1 < h {
                edges.push(if r.gen() { (id(x, y), id(x + 1, y + 1)) } else { (id(x + 1, y), id(x, y + 1)) });
            }
        }
    }
    edges.retain(|_| r.gen_bool(0.85));
    relabel(r, w * h, edges)
}

fn relabel(r: &mut rand_chacha::ChaCha8Rng, n: usize, edges: Vec<(usize, usize)>) -> Graph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    Graph::new(n, edges.into_iter().map(|(a, b)| (perm[a], perm[b])))
}

/// Subdivide every edge of `core` a random number of times and add random pendant trees.
fn subdivided(r: &mut rand_chacha::ChaCha8Rng, core: &Graph) -> Graph {
    let mut n = core.num_vertices();
    let mut edges = Vec::new();
    for &(a, b) in core.edges() {
        let mut prev = a;
        for _ in 0..r.gen_range(0..3) {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, b));
    }
    for _ in 0..r.gen_range(0..5) {
        let at = r.gen_range(0..n);
        edges.push((at, n));
        n += 1;
    }
    relabel(r, n, edges)
}

#[test]
fn random_planar_graphs_are_embedded() {
    let mut r = rng(5);
    for _ in 0..60 {
        let (w, h) = (r.gen_range(2..8), r.gen_range(2..8));
        let g = random_planar(&mut r, w, h);
        match planarity(&g) {
            Planarity::Planar(emb) => verify_embedding(&g, &emb).unwrap(),
            Planarity::NonPlanar(k) => panic!("grid graph reported non-planar: {k:?}"),
        }
        assert!(is_planar(&g));
    }
}

#[test]
fn hidden_kuratowski_graphs_are_certified() {
    let mut r = rng(6);
    for trial in 0..40 {
        let core = if trial % 2 == 0 { Graph::complete(5) } else { Graph::complete_bipartite(3, 3) };
        let g = subdivided(&mut r, &core);
        assert!(!is_planar(&g));
        match planarity(&g) {
            Planarity::NonPlanar(k) => {
                verify_kuratowski(&g, &k).unwrap();
                let want = if trial % 2 == 0 { KuratowskiKind::K5 } else { KuratowskiKind::K33 };
                assert_eq!(k.kind, want);
            }
            Planarity::Planar(_) => panic!("subdivision reported planar"),
        }
    }
}

#[test]
fn dense_random_graphs_agree_with_edge_bound() {
    let mut r = rng(7);
    for _ in 0..80 {
        let n = r.gen_range(5..14);
        let p = r.gen_range(0.1..0.8);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if r.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        let g = Graph::new(n, edges);
        let cert = planarity(&g);
        assert_eq!(cert.is_planar(), is_planar(&g));
        if g.num_edges() > 3 * n - 6 {
            assert!(!cert.is_planar());
        }
        match cert {
            Planarity::Planar(emb) => verify_embedding(&g, &emb).unwrap(),
            Planarity::NonPlanar(k) => verify_kuratowski(&g, &k).unwrap(),
        }
    }
}
