use std::collections::HashSet;

use gridthresh::threshold::{
    count_oriented_prime_segments, enumerate_threshold, is_threshold, oriented_prime_segments,
    threshold_from_segment,
};
use gridthresh::{GridDims, GridFunction};
use proptest::prelude::*;

mod common;
use common::{brute_force_threshold, oriented_segments, seg_mask, SeparabilityOracle};

fn dims(m: u32, n: u32) -> GridDims {
    GridDims::new(m, n).unwrap()
}

fn mask_of(f: &GridFunction) -> u64 {
    f.words()[0]
}

#[test]
fn enumeration_equals_brute_force_small() {
    for m in 1..=16i32 {
        for n in 1..=16 / m {
            if m * n > 12 {
                continue;
            }
            let lib: Vec<u64> = enumerate_threshold(dims(m as u32, n as u32))
                .unwrap()
                .iter()
                .map(mask_of)
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            assert_eq!(lib, brute_force_threshold(m, n), "{m}x{n}");
        }
    }
}

#[test]
fn goldens() {
    assert_eq!(brute_force_threshold(2, 2).len(), 14);
    assert_eq!(brute_force_threshold(3, 3).len(), 58);
    assert_eq!(enumerate_threshold(dims(2, 2)).unwrap().len(), 14);
    assert_eq!(enumerate_threshold(dims(3, 3)).unwrap().len(), 58);
    assert_eq!(enumerate_threshold(dims(1, 1)).unwrap().len(), 2);
}

#[test]
fn is_threshold_agrees_with_oracle_on_every_function() {
    for (m, n) in [(2, 2), (2, 3), (3, 3), (2, 5), (3, 4)] {
        let oracle = SeparabilityOracle::new(m, n);
        let d = dims(m as u32, n as u32);
        for mask in 0..1u64 << (m * n) {
            let f = GridFunction::from_words(d, &[mask]).unwrap();
            assert_eq!(is_threshold(&f), oracle.separable(mask), "{m}x{n} mask {mask:#x}");
        }
    }
}

#[test]
fn segments_biject_onto_nonconstant_threshold_functions() {
    for m in 1..=6u32 {
        for n in 1..=6u32 {
            let d = dims(m, n);
            let segs = oriented_prime_segments(d);
            assert_eq!(segs.len() as u64, count_oriented_prime_segments(d));
            assert_eq!(segs.len(), oriented_segments(m as i32, n as i32).len());
            let mut seen = HashSet::new();
            for s in &segs {
                let f = threshold_from_segment(d, *s).unwrap();
                assert!(!f.is_constant());
                assert!(is_threshold(&f));
                assert!(seen.insert(f), "{m}x{n}: duplicate function");
            }
            assert_eq!(enumerate_threshold(d).unwrap().len(), segs.len() + 2, "{m}x{n}");
        }
    }
}

#[test]
fn segment_functions_match_oracle() {
    let d = dims(5, 4);
    for s in oriented_prime_segments(d) {
        let f = threshold_from_segment(d, s).unwrap();
        assert_eq!(mask_of(&f), seg_mask(5, 4, s.head, s.tail));
    }
}

/// Image of cell `i` of an `m x n` grid under symmetry `k`, and the image dims.
fn sym_index(k: u8, m: u32, n: u32, i: usize) -> (usize, u32, u32) {
    let (mut x, mut y) = (i as u32 % m, i as u32 / m);
    let (mut mm, mut nn) = (m, n);
    if k & 1 != 0 {
        x = mm - 1 - x;
    }
    if k & 2 != 0 {
        y = nn - 1 - y;
    }
    if k & 4 != 0 {
        std::mem::swap(&mut x, &mut y);
        std::mem::swap(&mut mm, &mut nn);
    }
    ((x + y * mm) as usize, mm, nn)
}

proptest! {
    #[test]
    fn is_threshold_invariant_under_symmetries(m in 1u32..7, n in 1u32..7, bits in any::<u64>(), k in 0u8..8) {
        let cells = m * n;
        let mask = if cells == 64 { bits } else { bits & ((1u64 << cells) - 1) };
        let f = GridFunction::from_words(dims(m, n), &[mask]).unwrap();
        let (_, mm, nn) = sym_index(k, m, n, 0);
        let mut img = 0u64;
        for i in 0..cells as usize {
            if mask >> i & 1 == 1 {
                img |= 1 << sym_index(k, m, n, i).0;
            }
        }
        let g = GridFunction::from_words(dims(mm, nn), &[img]).unwrap();
        prop_assert_eq!(is_threshold(&f), is_threshold(&g));
        prop_assert_eq!(is_threshold(&f), is_threshold(&f.complement()));
    }

    #[test]
    fn threshold_images_of_segments(m in 2u32..9, n in 2u32..9, k in 0u8..8, pick in any::<prop::sample::Index>()) {
        let d = dims(m, n);
        let segs = oriented_prime_segments(d);
        let s = segs[pick.index(segs.len())];
        let f = threshold_from_segment(d, s).unwrap();
        let (_, mm, nn) = sym_index(k, m, n, 0);
        let mut g = GridFunction::zeros(dims(mm, nn));
        for i in 0..d.cells() {
            if f.get_index(i) {
                let j = sym_index(k, m, n, i).0;
                g.set(dims(mm, nn).point(j), true);
            }
        }
        prop_assert!(is_threshold(&g));
    }
}
