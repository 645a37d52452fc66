// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{argmax, argmin, ceil_lg, choose, chunk_detects, popcount, rank_oracle};
use num_bigint::BigInt;
use proptest::prelude::*;
use xbar::circuits::{
    build_encoder, build_max_circuit, build_min_circuit, build_ones_counter, build_priority_encoder,
    build_rank_circuit_threshold, max_index, min_index, miss_probability, rank_at_least_probabilistic, search,
    select_rank,
};
use xbar::netlist::legalize;
use xbar::{build, build_odd, depth, sort, FaninLimit, Netlist};

fn values() -> impl Strategy<Value = Vec<i32>> {
    (3usize..=33).prop_flat_map(|n| prop::collection::vec(-20i32..20, n))
}

fn assert_same_function(a: &Netlist, b: &Netlist, inputs: &[bool]) {
    assert_eq!(a.evaluate(inputs).unwrap(), b.evaluate(inputs).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn min_and_max_follow_the_tie_rule(a in values()) {
        let t = sort(&build(a.len()).unwrap(), &a).unwrap().t;
        prop_assert_eq!(min_index(&t).unwrap(), argmin(&a));
        prop_assert_eq!(max_index(&t).unwrap(), argmax(&a));
    }

    #[test]
    fn select_rank_finds_every_rank(a in values()) {
        let t = sort(&build(a.len()).unwrap(), &a).unwrap().t;
        let ranks = rank_oracle(&a);
        for r in 0..a.len() {
            let want = ranks.iter().position(|&x| x == r);
            let got = select_rank(&t, r).unwrap();
            prop_assert!(got.exact);
            prop_assert_eq!(got.index, want);
        }
    }

    #[test]
    fn search_returns_first_holder(a in values(), key in -25i32..25) {
        let got = search(&build(a.len()).unwrap(), &a, &key).unwrap();
        prop_assert_eq!(got.index, a.iter().position(|&x| x == key));
    }

    #[test]
    fn ones_counter_is_one_hot_popcount(row in prop::collection::vec(any::<bool>(), 1..=64)) {
        let c = build_ones_counter(row.len()).unwrap();
        let out = c.evaluate_named(&row).unwrap();
        prop_assert_eq!(out.word("c"), popcount(&row));
        let hot: Vec<usize> = (0..=row.len()).filter(|m| out.get(&format!("e{m}")) == Some(true)).collect();
        prop_assert_eq!(hot, vec![popcount(&row)]);
    }

    #[test]
    fn encoder_maps_hot_line_to_index(n in 2usize..=64, pick in any::<prop::sample::Index>()) {
        let hot = pick.index(n);
        let line: Vec<bool> = (0..n).map(|i| i == hot).collect();
        let enc = build_encoder(n).unwrap();
        let out = enc.evaluate_named(&line).unwrap();
        prop_assert_eq!(out.word("idx"), hot);
        prop_assert_eq!(out.get("valid"), Some(true));
    }

    #[test]
    fn priority_encoder_picks_lowest(line in prop::collection::vec(any::<bool>(), 2..=40)) {
        let enc = build_priority_encoder(line.len()).unwrap();
        let out = enc.evaluate_named(&line).unwrap();
        let first = line.iter().position(|&x| x);
        prop_assert_eq!(out.get("valid"), Some(first.is_some()));
        if let Some(i) = first {
            prop_assert_eq!(out.word("idx"), i);
        }
    }

    #[test]
    fn chunked_verdict_matches_scan(row in prop::collection::vec(any::<bool>(), 1..=40), k in 1usize..=6, j in 1usize..=6) {
        prop_assume!(j <= k);
        let (verdict, _) = rank_at_least_probabilistic(&row, j, k).unwrap();
        prop_assert_eq!(verdict, chunk_detects(&row, j, k));
        if verdict {
            prop_assert!(popcount(&row) >= j);
        }
    }

    #[test]
    fn miss_probability_closed_form(n in 1usize..=48, k in 1usize..=6, j in 1usize..=6) {
        prop_assume!(j <= k);
        let padded = n.div_ceil(k) * k;
        let per_chunk: u128 = (0..j).map(|i| choose(k, i)).sum();
        let p = miss_probability(n, j, k).unwrap();
        let lhs = p * BigInt::from(2).pow(padded as u32);
        prop_assert_eq!(lhs.to_integer(), BigInt::from(per_chunk).pow((padded / k) as u32));
        prop_assert!(lhs.is_integer());
    }

    #[test]
    fn legalization_preserves_function(n in 2usize..=12, b in 2usize..=5, seed in any::<u64>()) {
        for circuit in [build_min_circuit(n).unwrap(), build_max_circuit(n).unwrap(), build_priority_encoder(n).unwrap()] {
            let legal = legalize(&circuit, b);
            prop_assert!(legal.gates.iter().all(|g| g.inputs.len() <= b));
            let mut s = seed;
            for _ in 0..8 {
                let inputs: Vec<bool> = (0..circuit.input_count())
                    .map(|_| { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); s >> 63 == 1 })
                    .collect();
                assert_same_function(&circuit, &legal, &inputs);
            }
            let unbounded = depth(&circuit, FaninLimit::Unbounded).depth;
            prop_assert!(unbounded <= depth(&circuit, FaninLimit::Bounded(b)).depth);
        }
    }
}

#[test]
fn threshold_counter_is_constant_depth_and_exact() {
    for n in 2..=10 {
        let c = build_rank_circuit_threshold(n).unwrap();
        assert!(depth(&c, FaninLimit::Unbounded).depth <= 4);
        let unbounded = depth(&c, FaninLimit::Unbounded).depth;
        assert!(unbounded <= depth(&c, FaninLimit::Bounded(2)).depth);
    }
}

#[test]
fn min_max_depth_grows_with_log_n() {
    for n in [4usize, 8, 16, 32, 64] {
        let want = ceil_lg(n) + ceil_lg(n / 2);
        for c in [build_min_circuit(n).unwrap(), build_max_circuit(n).unwrap()] {
            assert!(depth(&c, FaninLimit::Unbounded).depth <= 2);
            assert_eq!(depth(&c, FaninLimit::Bounded(2)).depth, want, "n = {n}");
        }
    }
}

#[test]
fn named_examples() {
    let t = sort(&build(2).unwrap(), &[1, 9]).unwrap().t;
    assert_eq!(max_index(&t).unwrap(), 1);
    let ascending = sort(&build(6).unwrap(), &[1, 2, 3, 4, 5, 6]).unwrap().t;
    assert_eq!(min_index(&ascending).unwrap(), 0);
    let l5 = build_odd(5).unwrap();
    assert_eq!(search(&l5, &[8, 6, 9, 5, 7], &9).unwrap().index, Some(2));
    assert_eq!(search(&l5, &[7, 6, 7, 5, 7], &7).unwrap().index, Some(0));
    assert_eq!(search(&l5, &[8, 6, 9, 5, 7], &4).unwrap().index, None);
    let mut row = vec![false; 10];
    row[0] = true;
    row[1] = true;
    assert!(rank_at_least_probabilistic(&row, 2, 2).unwrap().0);
}
