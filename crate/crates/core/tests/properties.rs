mod common;

use common::*;
use patchwork::complex::{betti, connected_components};
use patchwork::intersection::build_k_rps;
use proptest::prelude::*;

/// Structures on a random corpus triangulation from random signs and a random orientation.
fn structures(index: usize, seed: u64) -> Vec<patchwork::complex::TManifold> {
    let tris = small_triangulations();
    let (_, t) = &tris[index % tris.len()];
    let mut r = rng(seed);
    let mu = random_signs(&mut r, t.num_vertices());
    let (_, o) = random_orientation(&mut r, t);
    build_k_rps(t, &mu, &o).unwrap().iter().map(|e| tmanifold(t, e)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_ridge_bounds_two_top_cells(index in 0usize..64, seed in any::<u64>()) {
        for tm in structures(index, seed) {
            let cx = tm.complex();
            let top = tm.dim();
            if top == 0 || cx.counts.get(top).copied().unwrap_or(0) == 0 {
                continue;
            }
            let mut hits = vec![0usize; cx.counts[top - 1]];
            for faces in &cx.boundary[top] {
                for &f in faces {
                    hits[f as usize] += 1;
                }
            }
            prop_assert!(hits.iter().all(|&h| h == 2), "ridge incidences {:?}", hits);
        }
    }

    #[test]
    fn components_match_reduced_homology(index in 0usize..64, seed in any::<u64>()) {
        for tm in structures(index, seed) {
            let b = betti(&tm);
            let comps = connected_components(&tm);
            prop_assert_eq!(b.first().copied().unwrap_or(0), comps.count);
            let chi: i64 = b.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
            prop_assert_eq!(chi, tm.complex().euler_characteristic());
            if tm.dim() == 1 {
                // A closed curve: every component is a circle.
                prop_assert_eq!(chi, 0);
                prop_assert_eq!(b[0], b[1]);
            }
            // Poincare duality over F2 for a closed manifold.
            let rev: Vec<usize> = b.iter().rev().copied().collect();
            prop_assert_eq!(&b, &rev);
        }
    }
}
