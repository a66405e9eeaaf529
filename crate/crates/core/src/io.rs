//! JSON file formats for triangulations, phase structures, sign
//! distributions and edge orientations.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{check_dim, orthant_string, parse_orthant, AffineF2, F2Subspace};
use crate::intersection::EdgeOrientation;
use crate::lattice::{simplex_polytope, Facet, Polytope, Simplex, Triangulation};
use crate::maxcurve::parity_code;
use crate::phase::{RealPhaseStructure, SignDistribution};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationFile {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub maximal_simplices: Vec<Vec<u32>>,
    /// Optional only for a single simplex, whose facets are derived.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Facet>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellFile {
    pub simplex: Vec<u32>,
    pub base: String,
    pub direction: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RpsFile {
    pub codim: usize,
    pub cells: Vec<CellFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignsFile {
    pub signs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrientationFile {
    Edges { edges: Vec<[u32; 2]> },
    Builtin {
        builtin: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<Vec<u32>>,
    },
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

pub fn triangulation_to_file(tri: &Triangulation) -> TriangulationFile {
    TriangulationFile {
        dim: tri.dim(),
        vertices: tri.coords().to_vec(),
        maximal_simplices: tri.maximal().iter().map(|s| s.vertices().to_vec()).collect(),
        facets: Some(tri.polytope().facets.clone()),
    }
}

pub fn triangulation_from_file(file: TriangulationFile) -> Result<Triangulation> {
    let n = file.dim;
    check_dim(n)?;
    let facets = match file.facets {
        Some(f) => f,
        None if file.maximal_simplices.len() == 1 => {
            let pts: Vec<Vec<i64>> = file.maximal_simplices[0]
                .iter()
                .map(|&v| file.vertices.get(v as usize).cloned().ok_or(Error::UnknownVertex(v as usize)))
                .collect::<Result<_>>()?;
            simplex_polytope(&pts)?.facets
        }
        None => {
            return Err(Error::Parse(
                "\"facets\" is required unless the triangulation is a single simplex".into(),
            ))
        }
    };
    // Polytope vertices: points of the triangulation tight on at least n facets.
    let corners: Vec<Vec<i64>> = file
        .vertices
        .iter()
        .filter(|v| v.len() == n && facets.iter().filter(|f| f.normal.len() == n && f.is_tight(v)).count() >= n)
        .cloned()
        .collect();
    let polytope = Polytope::new(n, corners, facets)?;
    let maximal = file.maximal_simplices.into_iter().map(Simplex::new).collect();
    Triangulation::new(polytope, file.vertices, maximal)
}

pub fn triangulation_to_json(tri: &Triangulation) -> String {
    to_json(&triangulation_to_file(tri))
}

pub fn triangulation_from_json(text: &str) -> Result<Triangulation> {
    triangulation_from_file(parse_json(text, "triangulation file")?)
}

pub fn load_triangulation(path: &Path) -> Result<Triangulation> {
    triangulation_from_json(&read_text(path)?)
        .map_err(|e| with_path(e, path))
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    }
}

/// Direction vectors are written as sign strings, `-` marking a 1.
pub fn rps_to_file(tri: &Triangulation, rps: &RealPhaseStructure) -> RpsFile {
    let n = rps.ambient();
    RpsFile {
        codim: rps.codim(),
        cells: rps
            .assignments(tri)
            .map(|(s, e)| CellFile {
                simplex: s.vertices().to_vec(),
                base: orthant_string(e.base(), n),
                direction: e
                    .direction()
                    .basis()
                    .iter()
                    .map(|&v| orthant_string(v, n))
                    .collect(),
            })
            .collect(),
    }
}

/// Parse a vector given as a sign string or as a string of 0s and 1s.
fn parse_vector(text: &str, n: usize) -> Result<u32> {
    let (bits, len) = if text.chars().all(|c| c == '0' || c == '1') && !text.is_empty() {
        let bits = text
            .chars()
            .enumerate()
            .fold(0u32, |acc, (i, c)| if c == '1' { acc | 1 << i } else { acc });
        (bits, text.len())
    } else {
        parse_orthant(text)?
    };
    if len != n {
        return Err(Error::Parse(format!("{text:?} has length {len}, expected {n}")));
    }
    Ok(bits)
}

pub fn rps_from_file(tri: &Triangulation, file: RpsFile) -> Result<RealPhaseStructure> {
    let n = tri.dim();
    let cells = file
        .cells
        .into_iter()
        .map(|c| {
            let base = parse_vector(&c.base, n)?;
            let dir = c
                .direction
                .iter()
                .map(|d| parse_vector(d, n))
                .collect::<Result<Vec<_>>>()?;
            Ok((Simplex::new(c.simplex), AffineF2::new(base, F2Subspace::span(n, dir))))
        })
        .collect::<Result<Vec<_>>>()?;
    RealPhaseStructure::new(tri, file.codim, cells)
}

pub fn rps_to_json(tri: &Triangulation, rps: &RealPhaseStructure) -> String {
    to_json(&rps_to_file(tri, rps))
}

pub fn rps_from_json(tri: &Triangulation, text: &str) -> Result<RealPhaseStructure> {
    rps_from_file(tri, parse_json(text, "phase structure file")?)
}

pub fn signs_to_json(mu: &SignDistribution) -> String {
    to_json(&SignsFile {
        signs: mu.to_string(),
    })
}

pub fn signs_from_json(text: &str) -> Result<SignDistribution> {
    let f: SignsFile = parse_json(text, "sign distribution file")?;
    SignDistribution::parse(&f.signs)
}

pub fn orientation_to_json(tri: &Triangulation, o: &EdgeOrientation) -> String {
    to_json(&OrientationFile::Edges {
        edges: o.edges(tri).into_iter().map(|(t, h)| [t, h]).collect(),
    })
}

pub fn orientation_from_json(tri: &Triangulation, text: &str) -> Result<EdgeOrientation> {
    match parse_json::<OrientationFile>(text, "orientation file")? {
        OrientationFile::Edges { edges } => {
            let pairs: Vec<(u32, u32)> = edges.iter().map(|e| (e[0], e[1])).collect();
            EdgeOrientation::from_edges(tri, &pairs)
        }
        OrientationFile::Builtin { builtin, order } => match builtin.as_str() {
            "vertex_order" => {
                let order = order.ok_or_else(|| Error::Parse("vertex_order needs \"order\"".into()))?;
                EdgeOrientation::from_vertex_order(tri, &order)
            }
            "parity_code" => parity_orientation(tri),
            other => Err(Error::Parse(format!("unknown builtin orientation {other:?}"))),
        },
    }
}

/// Orientation from the parity codes, for a triangulation of a dilated
/// standard tetrahedron.
pub fn parity_orientation(tri: &Triangulation) -> Result<EdgeOrientation> {
    if tri.dim() != 3 {
        return Err(Error::precondition("parity_code orientation needs dimension 3"));
    }
    let d = tri.coords().iter().map(|c| c.iter().sum::<i64>()).max().unwrap_or(0);
    if tri.polytope().facets != Polytope::standard_simplex(3, d).facets {
        return Err(Error::precondition(format!(
            "parity_code orientation needs the polytope {d}Δ3"
        )));
    }
    let codes = tri
        .coords()
        .iter()
        .map(|c| parity_code(c, d))
        .collect::<Result<Vec<u8>>>()?;
    EdgeOrientation::from_key(tri, |v| codes[v as usize])
}

/// A phase structure from either a phase-structure file or a sign file.
pub fn structure_from_json(tri: &Triangulation, text: &str) -> Result<RealPhaseStructure> {
    let value: serde_json::Value = parse_json(text, "structure file")?;
    if value.get("signs").is_some() {
        let mu = signs_from_json(text)?;
        crate::phase::from_sign_distribution(tri, &mu)
    } else {
        rps_from_json(tri, text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::freudenthal;
    use crate::phase::from_sign_distribution;

    #[test]
    fn triangulation_round_trip() {
        let t = freudenthal(3, 2);
        let back = triangulation_from_json(&triangulation_to_json(&t)).unwrap();
        assert_eq!(back.coords(), t.coords());
        assert_eq!(back.maximal(), t.maximal());
        assert_eq!(back.polytope().facets, t.polytope().facets);
    }

    #[test]
    fn rps_round_trip() {
        let t = freudenthal(2, 2);
        let mu = SignDistribution::parse("+-+--+").unwrap();
        let e = from_sign_distribution(&t, &mu).unwrap();
        let back = rps_from_json(&t, &rps_to_json(&t, &e)).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn single_simplex_without_facets() {
        let text = r#"{"dim":2,"vertices":[[0,0],[1,0],[0,1]],"maximal_simplices":[[0,1,2]]}"#;
        let t = triangulation_from_json(text).unwrap();
        assert!(t.validate().is_valid());
    }

    #[test]
    fn bad_orientation_names_edge() {
        let t = freudenthal(2, 1);
        let err = orientation_from_json(&t, r#"{"edges":[[0,1]]}"#).unwrap_err();
        assert!(err.to_string().contains("no orientation"));
    }
}
