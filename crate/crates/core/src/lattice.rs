//! Lattice polytopes, simplices and unimodular triangulations.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{check_dim, Bits, F2Subspace};
use crate::poly::Poly;

pub type LatticePoint = Vec<i64>;

/// A simplex of a triangulation, given by sorted vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn new(mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Simplex(ids)
    }

    /// Build from ids that are already strictly increasing.
    pub fn from_sorted(ids: Vec<u32>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        Simplex(ids)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    /// Dimension, which is the vertex count minus one. The empty simplex has
    /// dimension -1.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|&v| other.contains_vertex(v))
    }

    /// The face obtained by dropping the vertex at position `i`.
    pub fn drop_at(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    /// Codimension-one faces, in the order of the dropped vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |i| self.drop_at(i))
    }

    /// All faces with `k + 1` vertices, in lexicographic order.
    pub fn faces_of_dim(&self, k: usize) -> Vec<Simplex> {
        let m = self.0.len();
        let r = k + 1;
        if r > m {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            out.push(Simplex(idx.iter().map(|&i| self.0[i]).collect()));
            let mut i = r;
            while i > 0 && idx[i - 1] == m - r + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..r {
                idx[j] = idx[j - 1] + 1;
            }
        }
        out
    }

    pub fn union_vertex(&self, v: u32) -> Simplex {
        let mut ids = self.0.clone();
        ids.push(v);
        Simplex::new(ids)
    }

    pub fn intersection(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&v| other.contains_vertex(v)).collect())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Facet inequality `normal . x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn eval(&self, x: &[i64]) -> i64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn is_tight(&self, x: &[i64]) -> bool {
        self.eval(x) == self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    pub dim: usize,
    pub vertices: Vec<LatticePoint>,
    pub facets: Vec<Facet>,
}

impl Polytope {
    pub fn new(dim: usize, vertices: Vec<LatticePoint>, facets: Vec<Facet>) -> Result<Self> {
        check_dim(dim)?;
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                    context: "polytope vertex".into(),
                });
            }
        }
        for f in &facets {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.normal.len(),
                    context: "facet normal".into(),
                });
            }
        }
        Ok(Polytope { dim, vertices, facets })
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|f| f.eval(x) <= f.offset)
    }

    pub fn contains_strictly(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|f| f.eval(x) < f.offset)
    }

    /// Checks the stated invariants: vertices satisfy every inequality and
    /// each facet is tight on `dim` affinely independent vertices.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if !self.contains(v) {
                problems.push(format!("vertex {i} {v:?} violates a facet inequality"));
            }
        }
        for (j, f) in self.facets.iter().enumerate() {
            let tight: Vec<&LatticePoint> =
                self.vertices.iter().filter(|v| f.is_tight(v)).collect();
            if affine_rank(&tight) + 1 < self.dim {
                problems.push(format!("facet {j} is tight on too few independent vertices"));
            }
        }
        problems
    }

    pub fn dilate(&self, d: i64) -> Polytope {
        Polytope {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|x| x * d).collect())
                .collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal.clone(),
                    offset: f.offset * d,
                })
                .collect(),
        }
    }

    /// Standard simplex conv(0, e_1, ..., e_n) scaled by `d`.
    pub fn standard_simplex(n: usize, d: i64) -> Polytope {
        let mut vertices = vec![vec![0; n]];
        let mut facets = Vec::new();
        for i in 0..n {
            let mut v = vec![0; n];
            v[i] = d;
            vertices.push(v);
            let mut a = vec![0; n];
            a[i] = -1;
            facets.push(Facet { normal: a, offset: 0 });
        }
        facets.push(Facet {
            normal: vec![1; n],
            offset: d,
        });
        Polytope { dim: n, vertices, facets }
    }

    /// The cube [0, d]^n.
    pub fn cube(n: usize, d: i64) -> Polytope {
        let mut vertices = Vec::new();
        for mask in 0u32..1 << n {
            vertices.push((0..n).map(|i| if mask >> i & 1 == 1 { d } else { 0 }).collect());
        }
        let mut facets = Vec::new();
        for i in 0..n {
            let mut a = vec![0; n];
            a[i] = -1;
            facets.push(Facet { normal: a.clone(), offset: 0 });
            a[i] = 1;
            facets.push(Facet { normal: a, offset: d });
        }
        Polytope { dim: n, vertices, facets }
    }

    /// Axis-aligned bounding box of `l` times the polytope.
    fn bounding_box(&self, l: i64) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for v in &self.vertices {
            for i in 0..self.dim {
                lo[i] = lo[i].min(v[i] * l);
                hi[i] = hi[i].max(v[i] * l);
            }
        }
        (lo, hi)
    }

    fn count_points(&self, l: i64, strict: bool) -> u64 {
        if self.vertices.is_empty() {
            return 0;
        }
        let (lo, hi) = self.bounding_box(l);
        let mut x = lo.clone();
        let mut count = 0;
        loop {
            let inside = self.facets.iter().all(|f| {
                let e = f.eval(&x);
                if strict {
                    e < f.offset * l
                } else {
                    e <= f.offset * l
                }
            });
            if inside {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == self.dim {
                    return count;
                }
                if x[i] < hi[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = lo[i];
                i += 1;
            }
        }
    }

    /// Number of lattice points in `l` times the polytope, boundary included.
    pub fn lattice_points(&self, l: i64) -> u64 {
        if l == 0 {
            return 1;
        }
        self.count_points(l, false)
    }

    /// Number of lattice points strictly inside `l` times the polytope, by
    /// brute force over the bounding box.
    pub fn interior_lattice_points(&self, l: i64) -> u64 {
        self.count_points(l, true)
    }

    /// Ehrhart polynomial, interpolated exactly from the counts at 0..=dim.
    pub fn ehrhart(&self) -> Poly {
        let samples: Vec<(i64, i64)> = (0..=self.dim as i64)
            .map(|l| (l, self.lattice_points(l) as i64))
            .collect();
        Poly::interpolate(&samples)
    }

    /// Lattice volume, i.e. dim! times the Euclidean volume, read off the
    /// leading Ehrhart coefficient. Independent of any triangulation.
    pub fn lattice_volume(&self) -> u64 {
        let lead = self.ehrhart().coeff(self.dim);
        let v = lead * num_rational::Ratio::from_integer(factorial(self.dim) as i128);
        debug_assert!(v.is_integer());
        v.to_integer() as u64
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Exact determinant of a square integer matrix by fraction-free elimination.
pub fn determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Rank over Q of a list of integer vectors.
fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| gcd(g, x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn affine_rank(points: &[&LatticePoint]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

/// Mod-2 reduction of a lattice point.
pub fn parity_bits(x: &[i64]) -> Bits {
    x.iter()
        .enumerate()
        .fold(0, |acc, (i, &c)| if c.rem_euclid(2) == 1 { acc | 1 << i } else { acc })
}

/// Tight facets and orthogonal tangent space of the smallest face of the
/// polytope containing a simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDescriptor {
    pub tight_facets: Vec<usize>,
    pub perp: F2Subspace,
}

/// A unimodular triangulation together with its face lattice.
#[derive(Clone, Debug)]
pub struct Triangulation {
    polytope: Polytope,
    coords: Vec<LatticePoint>,
    parity: Vec<Bits>,
    maximal: Vec<Simplex>,
    faces: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl Triangulation {
    /// Builds the face lattice. Does not check unimodularity or coverage;
    /// see [`Triangulation::validate`].
    pub fn new(
        polytope: Polytope,
        coords: Vec<LatticePoint>,
        maximal: Vec<Simplex>,
    ) -> Result<Self> {
        let n = polytope.dim;
        check_dim(n)?;
        for c in &coords {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                    context: "vertex coordinates".into(),
                });
            }
        }
        for s in &maximal {
            if s.len() != n + 1 {
                return Err(Error::InvalidTriangulation(format!(
                    "maximal simplex {s} has {} vertices, expected {}",
                    s.len(),
                    n + 1
                )));
            }
            if let Some(&v) = s.vertices().iter().find(|&&v| v as usize >= coords.len()) {
                return Err(Error::UnknownVertex(v as usize));
            }
        }
        let mut maximal = maximal;
        maximal.sort();
        maximal.dedup();

        let mut faces: Vec<Vec<Simplex>> = vec![Vec::new(); n + 1];
        let mut index: Vec<HashMap<Simplex, usize>> = vec![HashMap::new(); n + 1];
        for s in &maximal {
            for k in 0..=n {
                for f in s.faces_of_dim(k) {
                    if !index[k].contains_key(&f) {
                        index[k].insert(f.clone(), 0);
                        faces[k].push(f);
                    }
                }
            }
        }
        for k in 0..=n {
            faces[k].sort();
            for (i, f) in faces[k].iter().enumerate() {
                index[k].insert(f.clone(), i);
            }
        }
        let parity = coords.iter().map(|c| parity_bits(c)).collect();
        Ok(Triangulation {
            polytope,
            coords,
            parity,
            maximal,
            faces,
            index,
        })
    }

    /// The trivial triangulation of a single lattice simplex given by its vertices.
    pub fn single_simplex(vertices: Vec<LatticePoint>) -> Result<Self> {
        let n = vertices.len().saturating_sub(1);
        let polytope = simplex_polytope(&vertices)?;
        let ids = Simplex::from_sorted((0..=n as u32).collect());
        Triangulation::new(polytope, vertices, vec![ids])
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn coords(&self) -> &[LatticePoint] {
        &self.coords
    }

    pub fn coord(&self, v: u32) -> &LatticePoint {
        &self.coords[v as usize]
    }

    pub fn vertex_parity(&self, v: u32) -> Bits {
        self.parity[v as usize]
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len()
    }

    pub fn maximal(&self) -> &[Simplex] {
        &self.maximal
    }

    /// Sorted list of the k-dimensional faces.
    pub fn faces(&self, k: usize) -> &[Simplex] {
        &self.faces[k]
    }

    pub fn face_index(&self, s: &Simplex) -> Option<usize> {
        if s.is_empty() || s.len() > self.dim() + 1 {
            return None;
        }
        self.index[s.len() - 1].get(s).copied()
    }

    pub fn require_index(&self, s: &Simplex) -> Result<usize> {
        self.face_index(s).ok_or_else(|| Error::UnknownSimplex(s.clone()))
    }

    /// T_2(s): span of the mod-2 reduced edge vectors from the first vertex.
    pub fn tangent_mod2(&self, s: &Simplex) -> Result<F2Subspace> {
        self.require_index(s)?;
        Ok(self.tangent_mod2_unchecked(s))
    }

    pub(crate) fn tangent_mod2_unchecked(&self, s: &Simplex) -> F2Subspace {
        let vs = s.vertices();
        let p0 = self.parity[vs[0] as usize];
        F2Subspace::span(self.dim(), vs[1..].iter().map(|&v| self.parity[v as usize] ^ p0))
    }

    /// T_2^perp(s).
    pub fn tangent_perp(&self, s: &Simplex) -> Result<F2Subspace> {
        Ok(self.tangent_mod2(s)?.orthogonal())
    }

    pub fn tight_facets(&self, s: &Simplex) -> Vec<usize> {
        self.polytope
            .facets
            .iter()
            .enumerate()
            .filter(|(_, f)| s.vertices().iter().all(|&v| f.is_tight(self.coord(v))))
            .map(|(j, _)| j)
            .collect()
    }

    /// Smallest face of the polytope containing `s`.
    ///
    /// The face is cut out by the facets tight on every vertex of `s`; its
    /// mod-2 tangent space is spanned by differences of triangulation
    /// vertices lying on it (a unimodular triangulation restricts to a
    /// unimodular triangulation of every face, so these generate the face
    /// lattice). Interior simplices get the empty set and the zero space.
    pub fn minimal_face(&self, s: &Simplex) -> Result<FaceDescriptor> {
        for &v in s.vertices() {
            if v as usize >= self.coords.len() {
                return Err(Error::UnknownVertex(v as usize));
            }
            if !self.polytope.contains(self.coord(v)) {
                return Err(Error::OutsidePolytope(s.clone()));
            }
        }
        let tight = self.tight_facets(s);
        let perp = self.face_perp_for(&tight);
        Ok(FaceDescriptor {
            tight_facets: tight,
            perp,
        })
    }

    fn face_perp_for(&self, tight: &[usize]) -> F2Subspace {
        if tight.is_empty() {
            return F2Subspace::zero(self.dim());
        }
        let on_face: Vec<u32> = (0..self.coords.len() as u32)
            .filter(|&v| tight.iter().all(|&j| self.polytope.facets[j].is_tight(self.coord(v))))
            .collect();
        let Some(&first) = on_face.first() else {
            return F2Subspace::full(self.dim());
        };
        let p0 = self.parity[first as usize];
        F2Subspace::span(self.dim(), on_face.iter().map(|&v| self.parity[v as usize] ^ p0))
            .orthogonal()
    }

    /// Minimal-face orthogonals for every face of every dimension, computed
    /// once per distinct tight-facet set.
    pub fn all_face_perps(&self) -> Result<Vec<Vec<F2Subspace>>> {
        let mut cache: HashMap<Vec<usize>, F2Subspace> = HashMap::new();
        let mut out = Vec::with_capacity(self.dim() + 1);
        for v in 0..self.coords.len() {
            if !self.polytope.contains(&self.coords[v]) {
                return Err(Error::OutsidePolytope(Simplex::from_sorted(vec![v as u32])));
            }
        }
        for k in 0..=self.dim() {
            let mut row = Vec::with_capacity(self.faces[k].len());
            for s in &self.faces[k] {
                let tight = self.tight_facets(s);
                let p = cache
                    .entry(tight)
                    .or_insert_with_key(|t| self.face_perp_for(t))
                    .clone();
                row.push(p);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Signed determinant of the edge vectors of an n-simplex.
    pub fn signed_volume(&self, s: &Simplex) -> i128 {
        let vs = s.vertices();
        let p0 = self.coord(vs[0]);
        let m: Vec<Vec<i128>> = vs[1..]
            .iter()
            .map(|&v| {
                self.coord(v)
                    .iter()
                    .zip(p0)
                    .map(|(a, b)| (a - b) as i128)
                    .collect()
            })
            .collect();
        determinant(m)
    }

    /// For each (n-1)-face, the indices of the maximal simplices containing it.
    pub fn ridge_cofaces(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut out = vec![Vec::new(); self.faces[n - 1].len()];
        for (t, s) in self.maximal.iter().enumerate() {
            for f in s.facets() {
                out[self.index[n - 1][&f]].push(t);
            }
        }
        out
    }

    /// Ridges lying in the boundary of the polytope.
    pub fn boundary_ridges(&self) -> Vec<usize> {
        let n = self.dim();
        (0..self.faces[n - 1].len())
            .filter(|&i| !self.tight_facets(&self.faces[n - 1][i]).is_empty())
            .collect()
    }

    /// Lattice vertices of the triangulation lying strictly inside the polytope.
    pub fn interior_vertices(&self) -> Vec<u32> {
        (0..self.coords.len() as u32)
            .filter(|&v| self.polytope.contains_strictly(self.coord(v)))
            .collect()
    }

    pub fn validate(&self) -> TriangulationReport {
        validate_triangulation(self)
    }
}

/// Facet description of the simplex spanned by `vertices`, with primitive
/// integer normals obtained from the adjugate of the edge matrix.
pub fn simplex_polytope(vertices: &[LatticePoint]) -> Result<Polytope> {
    let n = vertices.len().saturating_sub(1);
    check_dim(n)?;
    if vertices.iter().any(|v| v.len() != n) {
        return Err(Error::precondition("simplex needs n+1 points in Z^n"));
    }
    let mut facets = Vec::new();
    for skip in 0..=n {
        // The facet opposite vertex `skip`: find the normal a with a.(w - w0) = 0
        // for the other vertices, via cofactors of the (n-1) x n edge matrix.
        let others: Vec<&LatticePoint> =
            (0..=n).filter(|&i| i != skip).map(|i| &vertices[i]).collect();
        let base = others[0];
        let rows: Vec<Vec<i128>> = others[1..]
            .iter()
            .map(|w| w.iter().zip(base).map(|(a, b)| (a - b) as i128).collect())
            .collect();
        let mut normal: Vec<i128> = (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = rows
                    .iter()
                    .map(|r| (0..n).filter(|&j| j != c).map(|j| r[j]).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * determinant(minor)
            })
            .collect();
        let g = normal.iter().fold(0, |g, &x| gcd(g, x));
        if g == 0 {
            return Err(Error::precondition("degenerate simplex"));
        }
        normal.iter_mut().for_each(|x| *x /= g);
        let dot = |p: &LatticePoint| -> i128 {
            normal.iter().zip(p).map(|(a, b)| a * *b as i128).sum()
        };
        let mut offset = dot(base);
        if dot(&vertices[skip]) > offset {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        facets.push(Facet {
            normal: normal.iter().map(|&x| x as i64).collect(),
            offset: offset as i64,
        });
    }
    Polytope::new(n, vertices.to_vec(), facets)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TriangulationReport {
    /// Maximal simplices whose edge determinant is not +-1, with that determinant.
    pub non_unimodular: Vec<(Simplex, i128)>,
    /// Vertices violating a facet inequality.
    pub outside_vertices: Vec<usize>,
    /// Ridges with the wrong number of cofaces, or two cofaces on the same side.
    pub face_to_face_violations: Vec<String>,
    /// Problems with the polytope description itself.
    pub polytope_problems: Vec<String>,
    pub maximal_simplices: usize,
    /// Sum of |det| over maximal simplices.
    pub determinant_volume: u64,
    /// Lattice volume of the polytope from its Ehrhart polynomial, when the
    /// lattice-point enumeration is small enough to run.
    pub polytope_volume: Option<u64>,
}

impl TriangulationReport {
    pub fn is_valid(&self) -> bool {
        self.non_unimodular.is_empty()
            && self.outside_vertices.is_empty()
            && self.face_to_face_violations.is_empty()
            && self.polytope_problems.is_empty()
            && self.polytope_volume.is_none_or(|v| v == self.determinant_volume)
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (s, d) in &self.non_unimodular {
            out.push(format!("simplex {s} has determinant {d}"));
        }
        for v in &self.outside_vertices {
            out.push(format!("vertex {v} lies outside the polytope"));
        }
        out.extend(self.face_to_face_violations.iter().cloned());
        out.extend(self.polytope_problems.iter().cloned());
        if let Some(v) = self.polytope_volume {
            if v != self.determinant_volume {
                out.push(format!(
                    "simplices cover volume {} but the polytope has volume {v}",
                    self.determinant_volume
                ));
            }
        }
        out
    }
}

/// Bound on the lattice-point enumeration used for the independent volume.
const VOLUME_ENUMERATION_LIMIT: f64 = 5e7;

pub fn validate_triangulation(tri: &Triangulation) -> TriangulationReport {
    let n = tri.dim();
    let mut report = TriangulationReport {
        maximal_simplices: tri.maximal.len(),
        polytope_problems: tri.polytope.check(),
        ..Default::default()
    };
    for (i, c) in tri.coords.iter().enumerate() {
        if !tri.polytope.contains(c) {
            report.outside_vertices.push(i);
        }
    }
    let mut vol: u64 = 0;
    for s in &tri.maximal {
        let d = tri.signed_volume(s);
        vol += d.unsigned_abs() as u64;
        if d.abs() != 1 {
            report.non_unimodular.push((s.clone(), d));
        }
    }
    report.determinant_volume = vol;

    if n >= 1 {
        let cofaces = tri.ridge_cofaces();
        for (r, cof) in cofaces.iter().enumerate() {
            let ridge = &tri.faces[n - 1][r];
            let on_boundary = !tri.tight_facets(ridge).is_empty();
            match (on_boundary, cof.len()) {
                (true, 1) => {}
                (false, 2) => {
                    let side = |t: usize| {
                        let apex = tri.maximal[t]
                            .vertices()
                            .iter()
                            .copied()
                            .find(|&v| !ridge.contains_vertex(v))
                            .expect("apex");
                        let mut ids = ridge.vertices().to_vec();
                        ids.push(apex);
                        ordered_volume(tri, &ids).signum()
                    };
                    if side(cof[0]) == side(cof[1]) {
                        report.face_to_face_violations.push(format!(
                            "ridge {ridge} has both cofaces on the same side"
                        ));
                    }
                }
                (b, c) => report.face_to_face_violations.push(format!(
                    "ridge {ridge} ({}) lies in {c} maximal simplices",
                    if b { "boundary" } else { "interior" }
                )),
            }
        }
    }

    let (lo, hi) = tri.polytope.bounding_box(n as i64);
    let box_size: f64 = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as f64).product();
    if box_size * n as f64 <= VOLUME_ENUMERATION_LIMIT {
        report.polytope_volume = Some(tri.polytope.lattice_volume());
    }
    report
}

/// Determinant of the edge vectors in the given vertex order.
fn ordered_volume(tri: &Triangulation, ids: &[u32]) -> i128 {
    let p0 = tri.coord(ids[0]);
    determinant(
        ids[1..]
            .iter()
            .map(|&v| {
                tri.coord(v)
                    .iter()
                    .zip(p0)
                    .map(|(a, b)| (a - b) as i128)
                    .collect()
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(n: usize) -> Triangulation {
        crate::families::standard_simplex(n)
    }

    #[test]
    fn tangent_examples() {
        let t = delta(2);
        let e = Simplex::new(vec![0, 1]);
        assert_eq!(t.tangent_mod2(&e).unwrap(), F2Subspace::span(2, [0b01]));
        let v = Simplex::new(vec![0]);
        assert!(t.tangent_mod2(&v).unwrap().is_zero());
        let t3 = delta(3);
        let acd = Simplex::new(vec![0, 2, 3]);
        assert_eq!(
            t3.tangent_mod2(&acd).unwrap(),
            F2Subspace::span(3, [0b010, 0b100])
        );
        assert!(t3.tangent_mod2(&Simplex::new(vec![0, 9])).is_err());
    }

    #[test]
    fn minimal_face_examples() {
        let t = delta(2);
        let ab = t.minimal_face(&Simplex::new(vec![0, 1])).unwrap();
        assert_eq!(ab.tight_facets.len(), 1);
        assert_eq!(ab.perp, F2Subspace::span(2, [0b10]));
        let a = t.minimal_face(&Simplex::new(vec![0])).unwrap();
        assert_eq!(a.tight_facets.len(), 2);
        assert_eq!(a.perp, F2Subspace::full(2));
    }

    #[test]
    fn interior_point_counts() {
        let d3 = Polytope::standard_simplex(3, 1);
        assert_eq!(d3.interior_lattice_points(3), 0);
        assert_eq!(d3.interior_lattice_points(4), 1);
        assert_eq!(Polytope::standard_simplex(2, 1).interior_lattice_points(3), 1);
    }

    #[test]
    fn volumes() {
        assert_eq!(Polytope::standard_simplex(3, 2).lattice_volume(), 8);
        assert_eq!(Polytope::cube(3, 1).lattice_volume(), 6);
        assert_eq!(Polytope::standard_simplex(4, 1).lattice_volume(), 1);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(vec![vec![2, 0], vec![0, 1]]), 2);
        assert_eq!(determinant(vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(
            determinant(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]),
            -3
        );
    }

    #[test]
    fn simplex_facets_are_tight() {
        let verts = vec![vec![1, 0, 0], vec![0, 2, 1], vec![3, 1, 1], vec![0, 0, 5]];
        let p = simplex_polytope(&verts).unwrap();
        assert!(p.check().is_empty());
    }

    #[test]
    fn non_unimodular_detected() {
        let t = Triangulation::single_simplex(vec![vec![0, 0], vec![2, 0], vec![0, 1]]).unwrap();
        let r = t.validate();
        assert!(!r.is_valid());
        assert_eq!(r.non_unimodular[0].1.abs(), 2);
    }

    #[test]
    fn faces_of_dim_enumeration() {
        let s = Simplex::new(vec![0, 1, 2, 3]);
        assert_eq!(s.faces_of_dim(1).len(), 6);
        assert_eq!(s.faces_of_dim(3), vec![s.clone()]);
        assert!(s.faces_of_dim(4).is_empty());
    }
}
