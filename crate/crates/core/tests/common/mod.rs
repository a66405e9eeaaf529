//! Fixtures, random generators and brute-force oracles shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use patchwork::complex::{build_tmanifold_from_classes, TManifold};
use patchwork::f2::{parse_orthant, AffineF2, Bits, F2Subspace};
use patchwork::families::{freudenthal, kuhn_cube, standard_simplex};
use patchwork::glued::FaceClasses;
use patchwork::homology::CellComplex;
use patchwork::intersection::EdgeOrientation;
use patchwork::lattice::{Facet, Polytope, Simplex, Triangulation};
use patchwork::maxcurve::floor_triangulation_only;
use patchwork::phase::{RealPhaseStructure, SignDistribution};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Orthant from a sign string such as "+-+".
pub fn o(text: &str) -> Bits {
    parse_orthant(text).unwrap().0
}

/// The coset with exactly the listed elements; panics if they do not form one.
pub fn coset(n: usize, elems: &[&str]) -> AffineF2 {
    let bits: BTreeSet<Bits> = elems.iter().map(|e| o(e)).collect();
    let base = *bits.iter().next().unwrap();
    let dir = F2Subspace::span(n, bits.iter().map(|b| b ^ base));
    let e = AffineF2::new(base, dir);
    assert_eq!(e.elements().collect::<BTreeSet<_>>(), bits, "not a coset: {elems:?}");
    e
}

fn structure(tri: &Triangulation, k: usize, cells: &[(&[u32], &[&str])]) -> RealPhaseStructure {
    let n = tri.dim();
    let cells: Vec<(Simplex, AffineF2)> = cells
        .iter()
        .map(|(s, e)| (Simplex::new(s.to_vec()), coset(n, e)))
        .collect();
    RealPhaseStructure::new(tri, k, cells).unwrap()
}

const A: u32 = 0;
const B: u32 = 1;
const C: u32 = 2;
const D: u32 = 3;

/// The 1-structure on the triangle [a, b, c].
pub fn e1() -> (Triangulation, RealPhaseStructure) {
    let t = standard_simplex(2);
    let e = structure(
        &t,
        1,
        &[
            (&[A, B], &["++", "+-"]),
            (&[A, C], &["++", "-+"]),
            (&[B, C], &["+-", "-+"]),
        ],
    );
    (t, e)
}

/// E1 with the coset of [a, b] directed along the edge instead of across it.
pub fn e1_corrupted() -> (Triangulation, RealPhaseStructure) {
    let t = standard_simplex(2);
    let e = structure(
        &t,
        1,
        &[
            (&[A, B], &["++", "-+"]),
            (&[A, C], &["++", "-+"]),
            (&[B, C], &["+-", "-+"]),
        ],
    );
    (t, e)
}

/// The 1-structure on the tetrahedron [a, b, c, d].
pub fn e2() -> (Triangulation, RealPhaseStructure) {
    let t = standard_simplex(3);
    let e = structure(
        &t,
        1,
        &[
            (&[A, B], &["+++", "+-+", "++-", "+--"]),
            (&[A, C], &["+-+", "--+", "+--", "---"]),
            (&[A, D], &["+++", "-++", "+-+", "--+"]),
            (&[B, C], &["+++", "++-", "--+", "---"]),
            (&[B, D], &["-++", "--+", "++-", "+--"]),
            (&[C, D], &["+++", "-++", "+--", "---"]),
        ],
    );
    (t, e)
}

/// The 2-structure on the tetrahedron [a, b, c, d].
pub fn e3() -> (Triangulation, RealPhaseStructure) {
    let t = standard_simplex(3);
    let e = structure(
        &t,
        2,
        &[
            (&[A, B, C], &["+++", "++-"]),
            (&[A, B, D], &["+++", "+-+"]),
            (&[A, C, D], &["++-", "-+-"]),
            (&[B, C, D], &["+-+", "-+-"]),
        ],
    );
    (t, e)
}

/// The hexagon with two interior points and the 2-structure whose ten points
/// lie on no T-curve.
pub fn delta_s() -> (Triangulation, RealPhaseStructure) {
    let corners = vec![vec![0, 1], vec![1, 0], vec![3, 0], vec![3, 1], vec![2, 2], vec![0, 2]];
    let facets = vec![
        Facet { normal: vec![-1, -1], offset: -1 },
        Facet { normal: vec![0, -1], offset: 0 },
        Facet { normal: vec![1, 0], offset: 3 },
        Facet { normal: vec![1, 1], offset: 4 },
        Facet { normal: vec![0, 1], offset: 2 },
        Facet { normal: vec![-1, 0], offset: 0 },
    ];
    let poly = Polytope::new(2, corners, facets).unwrap();
    let pts: Vec<Vec<i64>> = vec![
        vec![0, 1],
        vec![0, 2],
        vec![1, 0],
        vec![1, 1],
        vec![1, 2],
        vec![2, 0],
        vec![2, 1],
        vec![2, 2],
        vec![3, 0],
        vec![3, 1],
    ];
    let id = |x: i64, y: i64| pts.iter().position(|p| p == &vec![x, y]).unwrap() as u32;
    let labelled: Vec<([(i64, i64); 3], &str)> = vec![
        ([(0, 1), (0, 2), (1, 1)], "++"),
        ([(0, 1), (1, 0), (1, 1)], "--"),
        ([(1, 0), (2, 0), (1, 1)], "-+"),
        ([(2, 0), (2, 1), (1, 1)], "--"),
        ([(2, 0), (3, 0), (2, 1)], "++"),
        ([(3, 0), (2, 1), (3, 1)], "-+"),
        ([(3, 1), (2, 2), (2, 1)], "++"),
        ([(2, 2), (1, 2), (2, 1)], "+-"),
        ([(1, 2), (1, 1), (2, 1)], "++"),
        ([(1, 2), (0, 2), (1, 1)], "+-"),
    ];
    let simplices: Vec<Simplex> = labelled
        .iter()
        .map(|(p, _)| Simplex::new(p.iter().map(|&(x, y)| id(x, y)).collect()))
        .collect();
    let tri = Triangulation::new(poly, pts.clone(), simplices.clone()).unwrap();
    let cells: Vec<(Simplex, AffineF2)> = simplices
        .into_iter()
        .zip(&labelled)
        .map(|(s, (_, l))| (s, AffineF2::point(2, o(l))))
        .collect();
    let e = RealPhaseStructure::new(&tri, 2, cells).unwrap();
    (tri, e)
}

/// Rows of the local axis table: signs of v0..v3 and the axis as positions.
pub const AXIS_TABLE: [(&str, Option<(usize, usize)>); 8] = [
    ("++++", None),
    ("+++-", None),
    ("++-+", Some((2, 3))),
    ("++--", None),
    ("+-++", Some((0, 1))),
    ("+-+-", Some((1, 2))),
    ("+--+", Some((0, 3))),
    ("+---", None),
];

pub fn tmanifold(tri: &Triangulation, e: &RealPhaseStructure) -> TManifold {
    build_tmanifold_from_classes(tri, &FaceClasses::new(tri).unwrap(), e).unwrap()
}

/// A random unimodular simplex: the standard one under random shears and a shift.
pub fn random_unimodular_simplex(rng: &mut ChaCha8Rng, n: usize) -> Triangulation {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..2 * n {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = rng.gen_range(-1..=1);
        for col in 0..n {
            m[i][col] += c * m[j][col];
        }
    }
    let shift: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    let mut verts = vec![shift.clone()];
    for col in 0..n {
        verts.push((0..n).map(|row| shift[row] + m[row][col]).collect());
    }
    Triangulation::single_simplex(verts).unwrap()
}

pub fn random_signs(rng: &mut ChaCha8Rng, nv: usize) -> SignDistribution {
    SignDistribution::new((0..nv).map(|_| rng.gen_bool(0.5)).collect())
}

pub fn random_order(rng: &mut ChaCha8Rng, nv: usize) -> Vec<u32> {
    let mut order: Vec<u32> = (0..nv as u32).collect();
    order.shuffle(rng);
    order
}

pub fn random_orientation(rng: &mut ChaCha8Rng, tri: &Triangulation) -> (Vec<u32>, EdgeOrientation) {
    let order = random_order(rng, tri.num_vertices());
    let o = EdgeOrientation::from_vertex_order(tri, &order).unwrap();
    (order, o)
}

/// Sign of the monomial of vertex v at the orthant s, flipped by mu(v).
pub fn extended_sign(tri: &Triangulation, minus: &[bool], v: u32, s: Bits) -> bool {
    let c = tri.coord(v);
    let odd = (0..c.len()).filter(|&i| s >> i & 1 == 1).map(|i| c[i]).sum::<i64>().rem_euclid(2) == 1;
    minus[v as usize] ^ odd
}

/// Membership in the k-th iterated intersection of E_mu straight from the
/// definition: along the ordered vertices, consecutive signs differ.
pub fn chain_membership(tri: &Triangulation, minus: &[bool], order: &[u32], sigma: &Simplex, s: Bits) -> bool {
    let pos = |v: u32| order.iter().position(|&w| w == v).unwrap();
    let mut vs = sigma.vertices().to_vec();
    vs.sort_by_key(|&v| pos(v));
    vs.windows(2)
        .all(|w| extended_sign(tri, minus, w[0], s) != extended_sign(tri, minus, w[1], s))
}

/// Triangulations with at most 50 vertices used for randomized checks.
pub fn small_triangulations() -> Vec<(String, Triangulation)> {
    let mut out = vec![
        ("delta2".into(), standard_simplex(2)),
        ("delta3".into(), standard_simplex(3)),
        ("delta4".into(), standard_simplex(4)),
        ("freudenthal(2,3)".into(), freudenthal(2, 3)),
        ("freudenthal(2,5)".into(), freudenthal(2, 5)),
        ("freudenthal(3,2)".into(), freudenthal(3, 2)),
        ("freudenthal(3,3)".into(), freudenthal(3, 3)),
        ("kuhn(2,3)".into(), kuhn_cube(2, 3)),
        ("kuhn(3,2)".into(), kuhn_cube(3, 2)),
        ("freudenthal(4,2)".into(), freudenthal(4, 2)),
        ("floor(3)".into(), floor_triangulation_only(3).unwrap()),
    ];
    out.retain(|(_, t)| t.num_vertices() <= 50);
    out
}

/// F2 Betti numbers of the order complex of the face poset of a regular cell
/// complex, by dense elimination of the simplicial boundary matrices.
pub fn barycentric_betti(cx: &CellComplex) -> Vec<usize> {
    let dims = cx.counts.len();
    // Global ids and strict face sets via transitive closure.
    let mut offset = vec![0usize; dims + 1];
    for m in 0..dims {
        offset[m + 1] = offset[m] + cx.counts[m];
    }
    let total = offset[dims];
    let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); total];
    for m in 1..dims {
        for (c, faces) in cx.boundary[m].iter().enumerate() {
            let id = offset[m] + c;
            for &f in faces {
                let fid = offset[m - 1] + f as usize;
                let mut set = below[fid].clone();
                set.insert(fid);
                below[id].extend(set);
            }
        }
    }
    // Chains c_0 > c_1 > ... ; each chain of length j+1 is a j-simplex.
    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..total).map(|c| vec![c]).collect();
    while let Some(chain) = stack.pop() {
        let j = chain.len() - 1;
        if simplices.len() <= j {
            simplices.resize(j + 1, Vec::new());
        }
        let last = *chain.last().unwrap();
        for &f in &below[last] {
            let mut next = chain.clone();
            next.push(f);
            stack.push(next);
        }
        simplices[j].push(chain);
    }
    let index: Vec<HashMap<Vec<usize>, usize>> = simplices
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let rank = |j: usize| -> usize {
        if j == 0 || j >= simplices.len() {
            return 0;
        }
        let mut rows: Vec<Vec<bool>> = simplices[j]
            .iter()
            .map(|s| {
                let mut row = vec![false; simplices[j - 1].len()];
                for skip in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(skip);
                    row[index[j - 1][&f]] ^= true;
                }
                row
            })
            .collect();
        gauss_rank(&mut rows)
    };
    let ranks: Vec<usize> = (0..=simplices.len()).map(rank).collect();
    (0..simplices.len())
        .map(|j| simplices[j].len() - ranks[j] - ranks[j + 1])
        .collect()
}

pub fn gauss_rank(rows: &mut [Vec<bool>]) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c]) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] {
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Compare Betti vectors ignoring trailing zeros.
pub fn same_betti(a: &[usize], b: &[usize]) -> bool {
    let trim = |v: &[usize]| {
        let mut v = v.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    trim(a) == trim(b)
}
