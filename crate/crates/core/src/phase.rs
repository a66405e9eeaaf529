//! Real phase structures and sign distributions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{self, AffineF2, Bits, F2Subspace};
use crate::lattice::{Simplex, Triangulation};

/// A k-real phase structure: one coset of Q^n per k-simplex.
///
/// `cells[i]` is the coset of `tri.faces(k)[i]`. The structure does not own
/// its triangulation; every operation takes the triangulation alongside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealPhaseStructure {
    n: usize,
    k: usize,
    cells: Vec<AffineF2>,
}

impl RealPhaseStructure {
    /// Build from an assignment covering every k-simplex exactly once.
    pub fn new(
        tri: &Triangulation,
        k: usize,
        assignments: impl IntoIterator<Item = (Simplex, AffineF2)>,
    ) -> Result<Self> {
        let n = tri.dim();
        if k > n {
            return Err(Error::precondition(format!("codimension {k} exceeds dimension {n}")));
        }
        let mut cells: Vec<Option<AffineF2>> = vec![None; tri.faces(k).len()];
        for (s, e) in assignments {
            if s.len() != k + 1 {
                return Err(Error::InvalidPhaseStructure(format!(
                    "simplex {s} is not {k}-dimensional"
                )));
            }
            if e.ambient() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: e.ambient(),
                    context: format!("coset of {s}"),
                });
            }
            let i = tri
                .face_index(&s)
                .ok_or_else(|| Error::InvalidPhaseStructure(format!("extra assignment for {s}, which is not a simplex of the triangulation")))?;
            if cells[i].replace(e).is_some() {
                return Err(Error::InvalidPhaseStructure(format!("duplicate assignment for {s}")));
            }
        }
        let cells = cells
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| {
                    Error::InvalidPhaseStructure(format!(
                        "missing assignment for {}",
                        tri.faces(k)[i]
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RealPhaseStructure { n, k, cells })
    }

    pub(crate) fn from_cells(n: usize, k: usize, cells: Vec<AffineF2>) -> Self {
        RealPhaseStructure { n, k, cells }
    }

    pub fn codim(&self) -> usize {
        self.k
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Cosets aligned with `tri.faces(codim)`.
    pub fn cells(&self) -> &[AffineF2] {
        &self.cells
    }

    pub fn get(&self, tri: &Triangulation, s: &Simplex) -> Result<&AffineF2> {
        if s.len() != self.k + 1 {
            return Err(Error::precondition(format!("{s} is not a {}-simplex", self.k)));
        }
        Ok(&self.cells[tri.require_index(s)?])
    }

    /// Pairs (simplex, coset) in simplex order.
    pub fn assignments<'a>(
        &'a self,
        tri: &'a Triangulation,
    ) -> impl Iterator<Item = (&'a Simplex, &'a AffineF2)> + 'a {
        tri.faces(self.k).iter().zip(&self.cells)
    }

    /// Does `s` lie in E(t) for a simplex `t` of dimension at least k?
    pub fn orthant_in(&self, tri: &Triangulation, t: &Simplex, s: Bits) -> bool {
        t.faces_of_dim(self.k).iter().any(|f| {
            tri.face_index(f).is_some_and(|i| self.cells[i].contains(s))
        })
    }

    /// The cosets E(sigma) for the k-faces sigma of `t`.
    pub fn face_cosets<'a>(&'a self, tri: &Triangulation, t: &Simplex) -> Vec<&'a AffineF2> {
        t.faces_of_dim(self.k)
            .iter()
            .filter_map(|f| tri.face_index(f))
            .map(|i| &self.cells[i])
            .collect()
    }
}

/// A sign per vertex; `true` means `-`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignDistribution {
    pub minus: Vec<bool>,
}

impl SignDistribution {
    pub fn new(minus: Vec<bool>) -> Self {
        SignDistribution { minus }
    }

    pub fn constant_plus(len: usize) -> Self {
        SignDistribution { minus: vec![false; len] }
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| match c {
                '+' => Ok(false),
                '-' | '\u{2212}' => Ok(true),
                _ => Err(Error::Parse(format!("invalid sign {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignDistribution::new)
    }

    pub fn len(&self) -> usize {
        self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minus.is_empty()
    }

    pub fn negated(&self) -> Self {
        SignDistribution::new(self.minus.iter().map(|m| !m).collect())
    }

    /// The representative of {mu, -mu} with a `+` at vertex 0.
    pub fn normalized(&self) -> Self {
        if self.minus.first() == Some(&true) {
            self.negated()
        } else {
            self.clone()
        }
    }

    /// Sign of the mirrored vertex s(v): mu(s(v)) = (-1)^(s.v) mu(v).
    #[inline]
    pub fn extended(&self, tri: &Triangulation, v: u32, s: Bits) -> bool {
        self.minus[v as usize] ^ f2::dot(s, tri.vertex_parity(v))
    }
}

impl fmt::Display for SignDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &m in &self.minus {
            f.write_str(if m { "-" } else { "+" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignDistribution({self})")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RpsReport {
    /// k-simplices whose coset is not directed by T_2^perp.
    pub direction_failures: Vec<Simplex>,
    /// (k+1)-simplices and orthants met by an odd number of k-faces.
    pub parity_failures: Vec<(Simplex, String)>,
}

impl RpsReport {
    pub fn is_valid(&self) -> bool {
        self.direction_failures.is_empty() && self.parity_failures.is_empty()
    }
}

/// Checks directions and the parity condition.
pub fn validate_rps(tri: &Triangulation, rps: &RealPhaseStructure) -> Result<RpsReport> {
    let n = tri.dim();
    let k = rps.k;
    if rps.n != n || rps.cells.len() != tri.faces(k).len() {
        return Err(Error::InvalidPhaseStructure(
            "assignments do not match the triangulation".into(),
        ));
    }
    let direction_failures: Vec<Simplex> = tri
        .faces(k)
        .par_iter()
        .zip(rps.cells.par_iter())
        .filter(|(s, e)| *e.direction() != tri.tangent_mod2_unchecked(s).orthogonal())
        .map(|(s, _)| s.clone())
        .collect();

    let mut parity_failures = Vec::new();
    if k < n {
        parity_failures = tri
            .faces(k + 1)
            .par_iter()
            .flat_map_iter(|tau| {
                let cosets = rps.face_cosets(tri, tau);
                let mut counts: BTreeMap<Bits, u32> = BTreeMap::new();
                for e in &cosets {
                    for s in e.elements() {
                        *counts.entry(s).or_insert(0) += 1;
                    }
                }
                counts
                    .into_iter()
                    .filter(|&(_, c)| c % 2 == 1)
                    .map(|(s, _)| (tau.clone(), f2::orthant_string(s, n)))
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    Ok(RpsReport {
        direction_failures,
        parity_failures,
    })
}

/// The unique 0-structure: every vertex carries all of Q^n.
pub fn trivial_codim0(tri: &Triangulation) -> RealPhaseStructure {
    let n = tri.dim();
    RealPhaseStructure::from_cells(n, 0, vec![AffineF2::whole(n); tri.faces(0).len()])
}

/// The 1-structure of a sign distribution: s is in E([a,b]) iff the signs of
/// s(a) and s(b) differ.
pub fn from_sign_distribution(
    tri: &Triangulation,
    mu: &SignDistribution,
) -> Result<RealPhaseStructure> {
    let n = tri.dim();
    if n == 0 {
        return Err(Error::precondition("codimension 1 needs dimension at least 1"));
    }
    if mu.len() != tri.num_vertices() {
        return Err(Error::precondition(format!(
            "sign distribution has {} entries for {} vertices",
            mu.len(),
            tri.num_vertices()
        )));
    }
    let cells = tri
        .faces(1)
        .iter()
        .map(|e| {
            let (a, b) = (e.vertices()[0], e.vertices()[1]);
            // s.(a ^ b) must equal 1 ^ mu(a) ^ mu(b)
            let w = tri.vertex_parity(a) ^ tri.vertex_parity(b);
            let c = !(mu.minus[a as usize] ^ mu.minus[b as usize]);
            let base = if c { w & w.wrapping_neg() } else { 0 };
            AffineF2::new(base, F2Subspace::span(n, [w]).orthogonal())
        })
        .collect();
    Ok(RealPhaseStructure::from_cells(n, 1, cells))
}

/// Recovers the sign distribution of a 1-structure, normalized to `+` at vertex 0.
pub fn to_sign_distribution(
    tri: &Triangulation,
    rps: &RealPhaseStructure,
) -> Result<SignDistribution> {
    if rps.k != 1 {
        return Err(Error::precondition("sign distributions correspond to codimension 1"));
    }
    let nv = tri.num_vertices();
    let mut adj: Vec<Vec<(u32, usize)>> = vec![Vec::new(); nv];
    for (i, e) in tri.faces(1).iter().enumerate() {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        adj[a as usize].push((b, i));
        adj[b as usize].push((a, i));
    }
    // mu(a) ^ mu(b) = 1 ^ (x . (a ^ b)) for any x in E([a,b]); use x = base.
    let flips = |i: usize, a: u32, b: u32| -> bool {
        let base = rps.cells[i].base();
        !f2::dot(base, tri.vertex_parity(a) ^ tri.vertex_parity(b))
    };
    let mut sign: Vec<Option<bool>> = vec![None; nv];
    let mut queue = VecDeque::new();
    for root in 0..nv {
        if sign[root].is_some() {
            continue;
        }
        if root != 0 && !adj[root].is_empty() {
            return Err(Error::precondition("1-skeleton is not connected"));
        }
        sign[root] = Some(false);
        queue.push_back(root as u32);
        while let Some(a) = queue.pop_front() {
            for &(b, i) in &adj[a as usize] {
                if sign[b as usize].is_none() {
                    sign[b as usize] = Some(sign[a as usize].unwrap() ^ flips(i, a, b));
                    queue.push_back(b);
                }
            }
        }
    }
    let mu = SignDistribution::new(sign.into_iter().map(|s| s.unwrap()).collect());
    if from_sign_distribution(tri, &mu)? != *rps {
        return Err(Error::InvalidPhaseStructure(
            "structure does not come from a sign distribution".into(),
        ));
    }
    Ok(mu)
}

/// Union of E(sigma) over the k-faces of `t`, sorted.
pub fn orthant_set(tri: &Triangulation, rps: &RealPhaseStructure, t: &Simplex) -> Result<Vec<Bits>> {
    if t.len() < rps.k + 1 {
        return Err(Error::precondition(format!(
            "{t} has dimension below the codimension {}",
            rps.k
        )));
    }
    tri.require_index(t)?;
    let mut set = BTreeSet::new();
    for e in rps.face_cosets(tri, t) {
        set.extend(e.elements());
    }
    Ok(set.into_iter().collect())
}

fn single_simplex(tri: &Triangulation) -> Result<&Simplex> {
    match tri.maximal() {
        [s] if tri.signed_volume(s).abs() == 1 => Ok(s),
        _ => Err(Error::precondition("expected a single unimodular simplex")),
    }
}

/// Quotient map Q^n -> Q^(n-1) identifying Q^n / T_2^perp(F) with the orthants
/// of the facet F re-coordinatized as a standard simplex (w_0 -> 0, w_i -> e_i).
fn facet_chart(tri: &Triangulation, facet: &Simplex) -> Result<(Vec<Bits>, Vec<u32>)> {
    let top = single_simplex(tri)?;
    if facet.len() != tri.dim() || !facet.is_face_of(top) {
        return Err(Error::precondition(format!("{facet} is not a facet")));
    }
    let w = facet.vertices();
    let p0 = tri.vertex_parity(w[0]);
    let cols = w[1..].iter().map(|&v| tri.vertex_parity(v) ^ p0).collect();
    Ok((cols, w.to_vec()))
}

fn relabel(s: &Simplex, ids: &[u32]) -> Simplex {
    Simplex::new(
        s.vertices()
            .iter()
            .map(|v| ids.iter().position(|w| w == v).expect("vertex of facet") as u32)
            .collect(),
    )
}

/// Restriction E|F to a facet F of a single simplex. The facet is returned as
/// the standard simplex with its vertices renumbered in sorted order.
pub fn restriction(
    tri: &Triangulation,
    rps: &RealPhaseStructure,
    facet: &Simplex,
) -> Result<(Triangulation, RealPhaseStructure)> {
    let n = tri.dim();
    if rps.k >= n {
        return Err(Error::precondition("restriction needs k < n"));
    }
    let (cols, ids) = facet_chart(tri, facet)?;
    let sub = crate::families::standard_simplex(n - 1);
    let assignments = facet
        .faces_of_dim(rps.k)
        .into_iter()
        .map(|sigma| {
            let e = rps.get(tri, &sigma)?.map_dual(&cols);
            Ok((relabel(&sigma, &ids), e))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = RealPhaseStructure::new(&sub, rps.k, assignments)?;
    Ok((sub, out))
}

/// Projection E^F: each (k-1)-face gamma of F receives the image of
/// E(gamma + v_F), where v_F is the vertex opposite F.
pub fn projection(
    tri: &Triangulation,
    rps: &RealPhaseStructure,
    facet: &Simplex,
) -> Result<(Triangulation, RealPhaseStructure)> {
    let n = tri.dim();
    if rps.k == 0 {
        return Err(Error::precondition("projection needs k > 0"));
    }
    let (cols, ids) = facet_chart(tri, facet)?;
    let top = single_simplex(tri)?;
    let apex = *top
        .vertices()
        .iter()
        .find(|&&v| !facet.contains_vertex(v))
        .expect("opposite vertex");
    let sub = crate::families::standard_simplex(n - 1);
    let assignments = facet
        .faces_of_dim(rps.k - 1)
        .into_iter()
        .map(|gamma| {
            let sigma = gamma.union_vertex(apex);
            let e = rps.get(tri, &sigma)?.map_dual(&cols);
            Ok((relabel(&gamma, &ids), e))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = RealPhaseStructure::new(&sub, rps.k - 1, assignments)?;
    Ok((sub, out))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthantCensus {
    /// Orthants of E(Delta_n), sorted.
    pub nonempty: Vec<Bits>,
    /// Nonempty orthants meeting exactly n - k + 1 of the k-simplices.
    pub simplicial: Vec<Bits>,
    /// For each nonempty orthant, the k-simplices whose coset contains it.
    pub incidence: BTreeMap<Bits, Vec<Simplex>>,
    /// For simplicial orthants and 1 <= k <= n-1, the (k-1)-simplex contained
    /// in exactly the incident k-simplices.
    pub gamma: BTreeMap<Bits, Simplex>,
}

pub fn orthant_census(tri: &Triangulation, rps: &RealPhaseStructure) -> Result<OrthantCensus> {
    single_simplex(tri)?;
    let n = tri.dim();
    let k = rps.k;
    let mut incidence: BTreeMap<Bits, Vec<Simplex>> = BTreeMap::new();
    for (sigma, e) in rps.assignments(tri) {
        for s in e.elements() {
            incidence.entry(s).or_default().push(sigma.clone());
        }
    }
    let nonempty: Vec<Bits> = incidence.keys().copied().collect();
    let simplicial: Vec<Bits> = incidence
        .iter()
        .filter(|(_, v)| v.len() == n - k + 1)
        .map(|(&s, _)| s)
        .collect();
    let mut gamma = BTreeMap::new();
    if k >= 1 && k < n {
        for &s in &simplicial {
            let inc = &incidence[&s];
            let g = inc.iter().skip(1).fold(inc[0].clone(), |g, t| g.intersection(t));
            if g.len() != k {
                return Err(Error::invariant(format!(
                    "simplicial orthant {} has no shared ({})-simplex",
                    f2::orthant_string(s, n),
                    k as isize - 1
                )));
            }
            gamma.insert(s, g);
        }
    }
    Ok(OrthantCensus {
        nonempty,
        simplicial,
        incidence,
        gamma,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecklaceDecomposition {
    /// The k-faces of tau in cyclic order.
    pub cyclic_order: Vec<Simplex>,
    /// Blocks B_i directed by T_2^perp(tau), with E(sigma_i) = B_i u B_{i+1}.
    pub blocks: Vec<AffineF2>,
}

/// Necklace decomposition of the k-faces of a (k+1)-simplex.
///
/// Each E(sigma) splits into two cosets of T_2^perp(tau). The cosets are the
/// nodes and the faces the edges of a graph, which for a valid structure is a
/// single cycle through all k+2 faces. The walk starts at the first face in
/// sorted order and its smaller block.
pub fn necklace(
    tri: &Triangulation,
    rps: &RealPhaseStructure,
    tau: &Simplex,
) -> Result<NecklaceDecomposition> {
    let k = rps.k;
    if k >= tri.dim() || tau.len() != k + 2 {
        return Err(Error::precondition(format!("{tau} is not a ({})-simplex", k + 1)));
    }
    tri.require_index(tau)?;
    let perp = tri.tangent_mod2_unchecked(tau).orthogonal();
    let faces = tau.faces_of_dim(k);
    let mut split: Vec<[AffineF2; 2]> = Vec::with_capacity(faces.len());
    for f in &faces {
        let e = rps.get(tri, f)?;
        if !perp.is_subspace_of(e.direction()) || e.direction().dim() != perp.dim() + 1 {
            return Err(Error::InvalidPhaseStructure(format!("coset of {f} has the wrong direction")));
        }
        let parts = e.split(&perp);
        let [a, b]: [AffineF2; 2] = parts
            .try_into()
            .map_err(|_| Error::invariant("coset did not split in two"))?;
        split.push(if a.base() <= b.base() { [a, b] } else { [b, a] });
    }
    let m = faces.len();
    let mut used = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut blocks = Vec::with_capacity(m);
    let mut cur_face = 0;
    let mut cur_block = split[0][0].clone();
    for _ in 0..m {
        used[cur_face] = true;
        order.push(faces[cur_face].clone());
        blocks.push(cur_block.clone());
        let next_block = if split[cur_face][0] == cur_block {
            split[cur_face][1].clone()
        } else {
            split[cur_face][0].clone()
        };
        match (0..m).find(|&j| !used[j] && split[j].contains(&next_block)) {
            Some(j) => {
                cur_face = j;
                cur_block = next_block;
            }
            None => {
                if order.len() == m && next_block == blocks[0] {
                    return Ok(NecklaceDecomposition {
                        cyclic_order: order,
                        blocks,
                    });
                }
                break;
            }
        }
    }
    Err(Error::InvalidPhaseStructure(format!(
        "no necklace decomposition for {tau}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::standard_simplex;

    #[test]
    fn sign_distribution_on_segment() {
        let t = standard_simplex(1);
        let mu = SignDistribution::parse("+-").unwrap();
        let e = from_sign_distribution(&t, &mu).unwrap();
        assert_eq!(e.cells()[0].sorted_elements(), vec![0]);
        assert_eq!(e.cells()[0].len(), 1);
    }

    #[test]
    fn constant_signs_miss_positive_orthant() {
        let t = crate::families::freudenthal(2, 3);
        let mu = SignDistribution::constant_plus(t.num_vertices());
        let e = from_sign_distribution(&t, &mu).unwrap();
        assert!(e.cells().iter().all(|c| !c.contains(0)));
    }

    #[test]
    fn trivial_structure_is_valid() {
        let t = standard_simplex(3);
        let e = trivial_codim0(&t);
        assert_eq!(e.cells()[0].len(), 8);
        assert!(validate_rps(&t, &e).unwrap().is_valid());
    }

    #[test]
    fn round_trip_signs() {
        let t = crate::families::freudenthal(3, 2);
        for seed in 0u32..20 {
            let mu = SignDistribution::new(
                (0..t.num_vertices()).map(|i| (seed.wrapping_mul(2654435761) >> (i % 31)) & 1 == 1).collect(),
            )
            .normalized();
            let e = from_sign_distribution(&t, &mu).unwrap();
            assert!(validate_rps(&t, &e).unwrap().is_valid());
            assert_eq!(to_sign_distribution(&t, &e).unwrap(), mu);
        }
    }

    #[test]
    fn codim0_necklace_halves() {
        let t = standard_simplex(2);
        let e = trivial_codim0(&t);
        let nk = necklace(&t, &e, &Simplex::new(vec![0, 1])).unwrap();
        assert_eq!(nk.blocks.len(), 2);
        assert_eq!(nk.blocks[0].len(), 2);
        assert_ne!(nk.blocks[0], nk.blocks[1]);
    }
}
