//! Linear algebra over F2 on single machine words.
//!
//! A vector of F2^n is a `Bits` word with coordinate `i` stored in bit `i`.
//! Orthants of Q^n use the same encoding, `+` as 0 and `-` as 1, so that the
//! sign rule `mu(s(v)) = (-1)^(s.v) mu(v)` becomes a parity of `s & v`.

use std::fmt;

use crate::error::{Error, Result};

pub type Bits = u32;

/// Largest supported ambient dimension. Orthant enumeration is 2^n, so the
/// practical limit sits well below the word width.
pub const MAX_DIM: usize = 24;

pub fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        Err(Error::DimensionTooLarge(n))
    } else {
        Ok(())
    }
}

#[inline]
pub fn dot(a: Bits, b: Bits) -> bool {
    (a & b).count_ones() & 1 == 1
}

#[inline]
pub fn full_mask(n: usize) -> Bits {
    if n >= Bits::BITS as usize {
        Bits::MAX
    } else {
        (1 << n) - 1
    }
}

/// Render an orthant as a sign string in coordinate order.
pub fn orthant_string(s: Bits, n: usize) -> String {
    (0..n).map(|i| if s >> i & 1 == 1 { '-' } else { '+' }).collect()
}

/// Parse a sign string. Accepts ASCII `-` and the Unicode minus sign.
pub fn parse_orthant(text: &str) -> Result<(Bits, usize)> {
    let mut bits: Bits = 0;
    let mut n = 0;
    for c in text.chars() {
        match c {
            '+' => {}
            '-' | '\u{2212}' => bits |= 1 << n,
            _ => return Err(Error::Parse(format!("invalid sign character {c:?} in {text:?}"))),
        }
        n += 1;
        check_dim(n)?;
    }
    Ok((bits, n))
}

/// Wrapper used purely for display of an orthant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orthant {
    pub bits: Bits,
    pub n: u8,
}

impl Orthant {
    pub fn new(bits: Bits, n: usize) -> Self {
        Orthant { bits, n: n as u8 }
    }
}

impl fmt::Display for Orthant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&orthant_string(self.bits, self.n as usize))
    }
}

impl fmt::Debug for Orthant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// A linear subspace of F2^n kept in fully reduced echelon form.
///
/// Rows are sorted by decreasing pivot, where the pivot of a row is its
/// highest set bit, and no row has a bit set at another row's pivot. With
/// this normal form two subspaces are equal iff their row lists are equal,
/// and reducing a vector yields the smallest member of its coset.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Subspace {
    n: usize,
    rows: Vec<Bits>,
}

#[inline]
fn pivot(row: Bits) -> u32 {
    Bits::BITS - 1 - row.leading_zeros()
}

impl F2Subspace {
    pub fn zero(n: usize) -> Self {
        F2Subspace { n, rows: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        F2Subspace {
            n,
            rows: (0..n).rev().map(|i| 1 << i).collect(),
        }
    }

    pub fn span(n: usize, gens: impl IntoIterator<Item = Bits>) -> Self {
        let mut s = F2Subspace::zero(n);
        for g in gens {
            s.insert(g);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Bits] {
        &self.rows
    }

    /// Number of elements, 2^dim.
    pub fn len(&self) -> u64 {
        1u64 << self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivot_mask(&self) -> Bits {
        self.rows.iter().fold(0, |m, &r| m | 1 << pivot(r))
    }

    /// Reduce `v` against the basis. The result is the smallest element of
    /// `v + self` when read as an integer.
    pub fn reduce(&self, mut v: Bits) -> Bits {
        for &r in &self.rows {
            if v >> pivot(r) & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    pub fn contains(&self, v: Bits) -> bool {
        self.reduce(v) == 0
    }

    /// Add a generator. Returns false if it was already in the span.
    pub fn insert(&mut self, v: Bits) -> bool {
        let v = self.reduce(v & full_mask(self.n));
        if v == 0 {
            return false;
        }
        let p = pivot(v);
        for r in self.rows.iter_mut() {
            if *r >> p & 1 == 1 {
                *r ^= v;
            }
        }
        let at = self.rows.partition_point(|&r| pivot(r) > p);
        self.rows.insert(at, v);
        true
    }

    pub fn is_subspace_of(&self, other: &F2Subspace) -> bool {
        self.rows.iter().all(|&r| other.contains(r))
    }

    /// Annihilator under the standard dot pairing.
    ///
    /// For every free (non-pivot) coordinate `f` the vector with bit `f` set
    /// and bit `p` set for each row of pivot `p` containing `f` pairs to zero
    /// with every row, and these vectors are independent.
    pub fn orthogonal(&self) -> F2Subspace {
        let pivots = self.pivot_mask();
        let mut out = F2Subspace::zero(self.n);
        for f in 0..self.n {
            if pivots >> f & 1 == 1 {
                continue;
            }
            let mut v: Bits = 1 << f;
            for &r in &self.rows {
                if r >> f & 1 == 1 {
                    v |= 1 << pivot(r);
                }
            }
            out.insert(v);
        }
        out
    }

    pub fn sum(&self, other: &F2Subspace) -> F2Subspace {
        let mut s = self.clone();
        for &r in &other.rows {
            s.insert(r);
        }
        s
    }

    pub fn intersection(&self, other: &F2Subspace) -> F2Subspace {
        self.orthogonal().sum(&other.orthogonal()).orthogonal()
    }

    /// Image under the linear map `x -> (x.c_0, x.c_1, ...)` into F2^m,
    /// where `m = cols.len()`.
    pub fn map_dual(&self, cols: &[Bits]) -> F2Subspace {
        F2Subspace::span(cols.len(), self.rows.iter().map(|&r| apply_dual(r, cols)))
    }

    /// All elements, in no particular order.
    pub fn elements(&self) -> impl Iterator<Item = Bits> + '_ {
        let d = self.rows.len();
        (0u64..1 << d).map(move |mask| {
            let mut v = 0;
            for (i, &r) in self.rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v ^= r;
                }
            }
            v
        })
    }

    /// Canonical coset representatives of F2^n / self, i.e. the words with
    /// zero at every pivot position.
    pub fn coset_representatives(&self) -> impl Iterator<Item = Bits> {
        let free = full_mask(self.n) & !self.pivot_mask();
        let count = 1u64 << free.count_ones();
        (0..count).map(move |i| deposit(i as Bits, free))
    }
}

/// `x -> (x.c_0, ..., x.c_{m-1})`.
#[inline]
pub fn apply_dual(x: Bits, cols: &[Bits]) -> Bits {
    cols.iter()
        .enumerate()
        .fold(0, |acc, (i, &c)| if dot(x, c) { acc | 1 << i } else { acc })
}

/// Scatter the low bits of `x` onto the set bits of `mask` (software pdep).
#[inline]
pub fn deposit(mut x: Bits, mut mask: Bits) -> Bits {
    let mut out = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if x & 1 == 1 {
            out |= low;
        }
        x >>= 1;
        mask ^= low;
    }
    out
}

/// Gather the bits of `x` at the set bits of `mask` into the low bits (software pext).
#[inline]
pub fn extract(x: Bits, mut mask: Bits) -> Bits {
    let mut out = 0;
    let mut i = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if x & low != 0 {
            out |= 1 << i;
        }
        i += 1;
        mask ^= low;
    }
    out
}

/// An affine subspace `base + direction` of Q^n, stored canonically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineF2 {
    base: Bits,
    dir: F2Subspace,
}

impl AffineF2 {
    pub fn new(base: Bits, dir: F2Subspace) -> Self {
        let base = dir.reduce(base & full_mask(dir.n));
        AffineF2 { base, dir }
    }

    pub fn point(n: usize, s: Bits) -> Self {
        AffineF2::new(s, F2Subspace::zero(n))
    }

    pub fn whole(n: usize) -> Self {
        AffineF2::new(0, F2Subspace::full(n))
    }

    pub fn ambient(&self) -> usize {
        self.dir.n
    }

    /// Smallest member, read as an integer.
    pub fn base(&self) -> Bits {
        self.base
    }

    pub fn direction(&self) -> &F2Subspace {
        &self.dir
    }

    pub fn len(&self) -> u64 {
        self.dir.len()
    }

    pub fn contains(&self, s: Bits) -> bool {
        self.dir.contains(s ^ self.base)
    }

    pub fn elements(&self) -> impl Iterator<Item = Bits> + '_ {
        self.dir.elements().map(move |v| v ^ self.base)
    }

    pub fn sorted_elements(&self) -> Vec<Bits> {
        let mut v: Vec<Bits> = self.elements().collect();
        v.sort_unstable();
        v
    }

    pub fn translate(&self, v: Bits) -> AffineF2 {
        AffineF2::new(self.base ^ v, self.dir.clone())
    }

    /// Intersection of two cosets, or None when disjoint.
    pub fn intersect(&self, other: &AffineF2) -> Option<AffineF2> {
        // Find u in U, v in V with base_a + u = base_b + v, i.e. solve
        // base_a ^ base_b = u ^ v. Rows carry (value, U-part).
        let mut rows: Vec<(Bits, Bits)> = Vec::new();
        let push = |rows: &mut Vec<(Bits, Bits)>, mut val: Bits, mut upart: Bits| {
            for &(rv, ru) in rows.iter() {
                if val >> pivot(rv) & 1 == 1 {
                    val ^= rv;
                    upart ^= ru;
                }
            }
            if val != 0 {
                rows.push((val, upart));
                rows.sort_unstable_by(|a, b| b.0.cmp(&a.0));
            }
        };
        for &u in self.dir.basis() {
            push(&mut rows, u, u);
        }
        for &v in other.dir.basis() {
            push(&mut rows, v, 0);
        }
        let mut target = self.base ^ other.base;
        let mut uacc = 0;
        // Rows are sorted by decreasing value, so pivots are decreasing and
        // a single pass reduces the target.
        for &(rv, ru) in &rows {
            if target >> pivot(rv) & 1 == 1 {
                target ^= rv;
                uacc ^= ru;
            }
        }
        if target != 0 {
            return None;
        }
        Some(AffineF2::new(
            self.base ^ uacc,
            self.dir.intersection(&other.dir),
        ))
    }

    /// Image under `x -> (x.c_0, ..., x.c_{m-1})`.
    pub fn map_dual(&self, cols: &[Bits]) -> AffineF2 {
        AffineF2::new(apply_dual(self.base, cols), self.dir.map_dual(cols))
    }

    /// Split into the cosets of a subspace `w` of the direction.
    pub fn split(&self, w: &F2Subspace) -> Vec<AffineF2> {
        let mut seen = std::collections::BTreeSet::new();
        for x in self.dir.elements() {
            seen.insert(w.reduce(x ^ self.base));
        }
        seen.into_iter().map(|b| AffineF2::new(b, w.clone())).collect()
    }
}

impl fmt::Debug for AffineF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dir.n;
        write!(f, "{} + <", orthant_string(self.base, n))?;
        for (i, &r) in self.dir.basis().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&orthant_string(r, n))?;
        }
        f.write_str(">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Bits {
        s.chars()
            .enumerate()
            .fold(0, |acc, (i, c)| if c == '1' { acc | 1 << i } else { acc })
    }

    #[test]
    fn orthogonal_examples() {
        let s = F2Subspace::span(2, [bits("10")]);
        assert_eq!(s.orthogonal(), F2Subspace::span(2, [bits("01")]));
        assert_eq!(F2Subspace::zero(3).orthogonal(), F2Subspace::full(3));
        let s = F2Subspace::span(3, [bits("110")]);
        assert_eq!(
            s.orthogonal(),
            F2Subspace::span(3, [bits("110"), bits("001")])
        );
    }

    #[test]
    fn double_orthogonal_exhaustive_n4() {
        // every subspace of F2^4 arises as a span of at most 4 vectors
        for a in 0..16 {
            for b in 0..16 {
                for c in 0..16 {
                    let s = F2Subspace::span(4, [a, b, c]);
                    let o = s.orthogonal();
                    assert_eq!(o.dim() + s.dim(), 4);
                    assert_eq!(o.orthogonal(), s);
                    for x in s.elements() {
                        for y in o.elements() {
                            assert!(!dot(x, y));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reduce_gives_coset_minimum() {
        for a in 0..32 {
            for b in 0..32 {
                let s = F2Subspace::span(5, [a, b]);
                for x in 0..32 {
                    let min = s.elements().map(|e| e ^ x).min().unwrap();
                    assert_eq!(s.reduce(x), min);
                }
            }
        }
    }

    #[test]
    fn affine_intersection_matches_brute_force() {
        let n = 4;
        let subs: Vec<F2Subspace> = (0..16)
            .flat_map(|a| (0..16).map(move |b| F2Subspace::span(n, [a, b])))
            .step_by(7)
            .collect();
        for u in &subs {
            for v in &subs {
                for a in [0, 3, 9] {
                    for b in [0, 5, 14] {
                        let x = AffineF2::new(a, u.clone());
                        let y = AffineF2::new(b, v.clone());
                        let brute: Vec<Bits> =
                            (0..16).filter(|&s| x.contains(s) && y.contains(s)).collect();
                        match x.intersect(&y) {
                            None => assert!(brute.is_empty()),
                            Some(z) => assert_eq!(z.sorted_elements(), brute),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn deposit_extract_roundtrip() {
        let mask = 0b1011_0100;
        for x in 0..16 {
            assert_eq!(extract(deposit(x, mask), mask), x);
        }
    }

    #[test]
    fn orthant_text() {
        assert_eq!(orthant_string(0b010, 3), "+-+");
        assert_eq!(parse_orthant("+\u{2212}+").unwrap(), (0b010, 3));
        assert!(parse_orthant("+x").is_err());
    }

    #[test]
    fn coset_representatives_are_canonical() {
        let s = F2Subspace::span(4, [0b0110, 0b1001]);
        let reps: Vec<Bits> = s.coset_representatives().collect();
        assert_eq!(reps.len(), 4);
        for r in reps {
            assert_eq!(s.reduce(r), r);
        }
    }
}
