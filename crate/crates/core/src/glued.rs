//! The glued space: 2^n mirrored copies of the polytope identified along faces.
//!
//! The copy s(sigma) of a simplex is identified with t(sigma) when t - s lies
//! in T_2^perp of the smallest face of the polytope containing sigma. A cell
//! is named by its simplex and the canonical (smallest) orthant of its class.
//!
//! Over F2 every face class of a cell enters its boundary with coefficient 1:
//! identifications only ever pair copies of the same simplex, so two distinct
//! faces of one simplex are never glued together and the boundary of a cell
//! has no repeated terms that could cancel.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::f2::{extract, full_mask, Bits, F2Subspace};
use crate::homology::{betti_f2, CellComplex};
use crate::lattice::{Simplex, Triangulation};

/// A cell of the glued space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GluedCellId {
    pub simplex: Simplex,
    pub orthant_class: Bits,
}

/// Per-simplex data for the identification: the orthogonal space of the
/// minimal face, and the free (non-pivot) bits indexing the copies.
#[derive(Clone, Debug)]
pub struct FaceClasses {
    pub perp: Vec<Vec<F2Subspace>>,
    pub free: Vec<Vec<Bits>>,
}

impl FaceClasses {
    pub fn new(tri: &Triangulation) -> Result<Self> {
        let perp = tri.all_face_perps()?;
        let mask = full_mask(tri.dim());
        let free = perp
            .iter()
            .map(|row| row.iter().map(|p| mask & !p.pivot_mask()).collect())
            .collect();
        Ok(FaceClasses { perp, free })
    }

    /// Canonical class of the copy s(sigma) for face `i` of dimension `m`.
    #[inline]
    pub fn class_of(&self, m: usize, i: usize, s: Bits) -> Bits {
        self.perp[m][i].reduce(s)
    }

    /// Number of distinct copies of face `i` of dimension `m`.
    pub fn copy_count(&self, m: usize, i: usize) -> u64 {
        1 << self.free[m][i].count_ones()
    }

    /// Canonical class representatives of face `i` of dimension `m`.
    pub fn classes(&self, m: usize, i: usize) -> impl Iterator<Item = Bits> {
        self.perp[m][i].coset_representatives()
    }
}

#[derive(Clone, Debug)]
pub struct GluedComplex {
    classes: FaceClasses,
    offsets: Vec<Vec<u32>>,
    complex: CellComplex,
}

impl GluedComplex {
    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn face_classes(&self) -> &FaceClasses {
        &self.classes
    }

    /// Index of the cell containing the copy s(sigma), sigma face `i` of dim `m`.
    pub fn cell_index(&self, m: usize, i: usize, s: Bits) -> u32 {
        let rep = self.classes.class_of(m, i, s);
        self.offsets[m][i] + extract(rep, self.classes.free[m][i])
    }

    pub fn cell_id(&self, tri: &Triangulation, m: usize, cell: u32) -> GluedCellId {
        let i = self.offsets[m].partition_point(|&o| o <= cell) - 1;
        let local = cell - self.offsets[m][i];
        GluedCellId {
            simplex: tri.faces(m)[i].clone(),
            orthant_class: crate::f2::deposit(local, self.classes.free[m][i]),
        }
    }

    /// Number of distinct copies of each simplex of dimension `m`.
    pub fn copy_counts(&self, m: usize) -> Vec<u64> {
        (0..self.classes.free[m].len())
            .map(|i| self.classes.copy_count(m, i))
            .collect()
    }
}

pub fn build_glued(tri: &Triangulation) -> Result<GluedComplex> {
    let n = tri.dim();
    let classes = FaceClasses::new(tri)?;
    let mut offsets = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut acc = 0u32;
        let row: Vec<u32> = (0..tri.faces(m).len())
            .map(|i| {
                let o = acc;
                acc += classes.copy_count(m, i) as u32;
                o
            })
            .collect();
        offsets.push(row);
    }
    let mut gc = GluedComplex {
        classes,
        offsets,
        complex: CellComplex::default(),
    };
    let mut boundary = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let cells: Vec<Vec<u32>> = tri
            .faces(m)
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, sigma)| {
                let facet_ids: Vec<usize> = if m == 0 {
                    Vec::new()
                } else {
                    sigma
                        .facets()
                        .map(|f| tri.face_index(&f).expect("face of a simplex"))
                        .collect()
                };
                let gc = &gc;
                gc.classes.classes(m, i).map(move |r| {
                    let mut b: Vec<u32> =
                        facet_ids.iter().map(|&j| gc.cell_index(m - 1, j, r)).collect();
                    b.sort_unstable();
                    b
                })
            })
            .collect();
        boundary.push(cells);
    }
    gc.complex = CellComplex::new(boundary);
    Ok(gc)
}

/// F2 Betti numbers of the glued space.
pub fn betti_glued(gc: &GluedComplex) -> Vec<usize> {
    betti_f2(&gc.complex)
}
