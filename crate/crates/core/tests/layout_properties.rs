// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{all_pairs, pair_counts};
use proptest::prelude::*;
use xbar::layout::neighbors;
use xbar::{build, build_even, build_odd, min_pe_count, replicate_lower_bound, validate, EndPlacement, Layout};

fn end_placement(layout: &Layout, class: usize) -> EndPlacement {
    let first = layout.slots[0];
    let last = *layout.slots.last().unwrap();
    match (first == class, last == class) {
        (true, true) => EndPlacement::SameClassBothEnds,
        (false, false) => EndPlacement::Interior,
        _ => EndPlacement::DistinctClassAtEnd,
    }
}

proptest! {
    #[test]
    fn even_layouts_cover_with_half_minus_one_repeats(h in 2usize..=32) {
        let n = 2 * h;
        let layout = build_even(n).unwrap();
        prop_assert_eq!(layout.len(), n * n / 2);
        let counts = pair_counts(&layout.slots);
        prop_assert_eq!(counts.keys().copied().collect::<std::collections::BTreeSet<_>>(), all_pairs(n));
        prop_assert_eq!(counts.values().filter(|&&c| c == 2).count(), n / 2 - 1);
        prop_assert!(counts.values().all(|&c| c <= 2));
        let report = validate(&layout);
        prop_assert!(report.is_valid(), "{:?}", report.violations);
        prop_assert_eq!(report.redundant_pairs.len(), n / 2 - 1);
    }

    #[test]
    fn odd_layouts_cover_every_pair_once(h in 1usize..=31) {
        let n = 2 * h + 1;
        let layout = build_odd(n).unwrap();
        prop_assert_eq!(layout.len(), n * (n - 1) / 2 + 1);
        let counts = pair_counts(&layout.slots);
        prop_assert_eq!(counts.len(), n * (n - 1) / 2);
        prop_assert!(counts.values().all(|&c| c == 1));
        prop_assert!(validate(&layout).is_valid());
    }

    #[test]
    fn built_layouts_are_well_formed(n in 2usize..=64) {
        let layout = build(n).unwrap();
        prop_assert_eq!(layout.len(), min_pe_count(n).unwrap());
        prop_assert!(layout.slots.windows(2).all(|w| w[0] != w[1]));
        prop_assert_eq!(layout.provenance.len(), layout.len());
        prop_assert_eq!(&build(n).unwrap(), &layout);
        let mut tally = vec![0usize; n];
        for &s in &layout.slots {
            tally[s] += 1;
        }
        prop_assert_eq!(&layout.replicate_counts(), &tally);
        for (class, &count) in tally.iter().enumerate() {
            prop_assert!(count >= replicate_lower_bound(n, end_placement(&layout, class)));
        }
    }

    #[test]
    fn report_counts_agree_with_scan(n in 3usize..=40) {
        let layout = build(n).unwrap();
        let report = validate(&layout);
        let counts = pair_counts(&layout.slots);
        for (&(a, b), &c) in &counts {
            prop_assert_eq!(report.coverage_of(a, b), c);
        }
        prop_assert_eq!(report.pe_count, layout.len());
        prop_assert_eq!(report.end_classes, Some((layout.slots[0], *layout.slots.last().unwrap())));
    }

    #[test]
    fn neighbors_are_adjacent_slots(n in 3usize..=20, pick in any::<prop::sample::Index>()) {
        let layout = build(n).unwrap();
        let k = pick.index(layout.len());
        let (l, r) = neighbors(&layout, k).unwrap();
        prop_assert_eq!(l, k.checked_sub(1).map(|i| layout.slots[i]));
        prop_assert_eq!(r, layout.slots.get(k + 1).copied());
    }

    #[test]
    fn corrupting_a_slot_is_reported(n in 4usize..=20, pick in any::<prop::sample::Index>()) {
        let mut layout = build(n).unwrap();
        let k = pick.index(layout.len());
        layout.slots.remove(k);
        layout.provenance.remove(k);
        prop_assert!(!validate(&layout).is_valid());
    }
}

#[test]
fn small_layouts() {
    assert_eq!(build_odd(3).unwrap().slots, vec![0, 1, 2, 0]);
    assert_eq!(build(2).unwrap().slots, vec![0, 1]);
    assert_eq!(
        build_even(6).unwrap().slots,
        vec![0, 1, 2, 3, 4, 5, 0, 2, 4, 0, 3, 1, 3, 5, 1, 4, 2, 5]
    );
    let l7 = build_odd(7).unwrap();
    assert_eq!(neighbors(&l7, 0).unwrap(), (None, Some(1)));
    assert_eq!(neighbors(&l7, 21).unwrap(), (Some(6), None));
    assert!(neighbors(&l7, 22).is_err());
}

#[test]
fn bound_table() {
    assert_eq!(min_pe_count(5).unwrap(), 11);
    assert_eq!(min_pe_count(12).unwrap(), 72);
    assert_eq!(min_pe_count(7).unwrap(), 22);
    assert!(min_pe_count(1).is_err());
    assert_eq!(replicate_lower_bound(7, EndPlacement::Interior), 3);
    assert_eq!(replicate_lower_bound(12, EndPlacement::SameClassBothEnds), 7);
    assert_eq!(replicate_lower_bound(12, EndPlacement::DistinctClassAtEnd), 6);
}

#[test]
fn degenerate_layout_violation() {
    let layout = Layout::from_slots(2, vec![0, 0]).unwrap();
    let report = validate(&layout);
    assert!(report.violations.iter().any(|v| v.starts_with("adjacent same-class slots")));
}

#[test]
fn layout_json_round_trip() {
    let layout = build_odd(5).unwrap();
    let back: Layout = serde_json::from_str(&layout.to_json()).unwrap();
    assert_eq!(back, layout);
    assert_eq!(layout.to_string(), "0-1-2-3-0-2-4-1-3-4-0");
}
