// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference implementations shared by the integration tests.
//! None of these call into the library's algorithms.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Cycles of `i -> (i + j) mod n` by walking the map with a visited set.
pub fn cycles_of_shift(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = (x + j) % n;
        }
        out.push(cycle);
    }
    out
}

pub fn gcd_ref(a: usize, b: usize) -> usize {
    (1..=a.max(b)).rev().find(|d| a.is_multiple_of(*d) && b.is_multiple_of(*d)).unwrap_or(a.max(b))
}

/// Occurrences of each unordered pair among consecutive slots.
pub fn pair_counts(slots: &[usize]) -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for w in slots.windows(2) {
        *m.entry((w[0].min(w[1]), w[0].max(w[1]))).or_insert(0) += 1;
    }
    m
}

pub fn all_pairs(n: usize) -> BTreeSet<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// `#{k: A[k] < A[i]} + #{k < i: A[k] = A[i]}`.
pub fn rank_oracle<T: Ord>(a: &[T]) -> Vec<usize> {
    (0..a.len())
        .map(|i| {
            let less = a.iter().filter(|x| **x < a[i]).count();
            let tied_before = a[..i].iter().filter(|x| **x == a[i]).count();
            less + tied_before
        })
        .collect()
}

/// `T[i][k] = 1` iff element `k` loses to element `i`.
pub fn t_oracle<T: Ord>(a: &[T]) -> Vec<Vec<u8>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| u8::from(k != i && (a[k] < a[i] || (a[k] == a[i] && k < i))))
                .collect()
        })
        .collect()
}

/// First position of the smallest value.
pub fn argmin<T: Ord>(a: &[T]) -> usize {
    (0..a.len()).fold(0, |best, i| if a[i] < a[best] { i } else { best })
}

/// Last position of the largest value.
pub fn argmax<T: Ord>(a: &[T]) -> usize {
    (0..a.len()).fold(0, |best, i| if a[i] >= a[best] { i } else { best })
}

pub fn popcount(bits: &[bool]) -> usize {
    bits.iter().filter(|&&b| b).count()
}

pub fn ceil_lg(n: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// `C(k, i)` by Pascal's triangle.
pub fn choose(k: usize, i: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..k {
        let mut next = vec![1u128; row.len() + 1];
        for x in 1..row.len() {
            next[x] = row[x - 1] + row[x];
        }
        row = next;
    }
    row.get(i).copied().unwrap_or(0)
}

/// Does some `k`-bit chunk of the zero-padded row hold `j` or more ones?
pub fn chunk_detects(row: &[bool], j: usize, k: usize) -> bool {
    row.chunks(k).any(|c| popcount(c) >= j)
}
