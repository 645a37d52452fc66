// SPDX-License-Identifier: Apache-2.0

//! Powers of the cyclic generator `p = (0 1 2 ... n-1)` and their disjoint
//! cycle structure.
//!
//! A power `p^j` maps class `i` to `(i + j) mod n`. It is stored as the pair
//! `(n, j)` and evaluated on demand, so very large `n` costs nothing until a
//! decomposition is requested.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    n: usize,
    j: usize,
}

impl Permutation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn exponent(&self) -> usize {
        self.j
    }

    /// Image of class `i`.
    pub fn apply(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        (i + self.j) % self.n
    }

    pub fn is_identity(&self) -> bool {
        self.j.is_multiple_of(self.n)
    }

    pub fn cycle_count(&self) -> usize {
        gcd(self.n, self.j)
    }

    pub fn mapping(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.apply(i)).collect()
    }
}

/// `p^j` on `n` classes.
pub fn power(n: usize, j: usize) -> Result<Permutation> {
    if n < 2 {
        return Err(Error::TooFewClasses(n, 2));
    }
    if j == 0 || j > n {
        return Err(Error::ExponentOutOfRange { n, j });
    }
    Ok(Permutation { n, j })
}

/// One cycle of some `p^j`, rotated so the smallest class comes first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle {
    pub exponent: usize,
    pub elements: Vec<usize>,
}

impl Cycle {
    pub fn first(&self) -> usize {
        self.elements[0]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_pair(&self) -> bool {
        self.elements.len() == 2
    }
}

impl std::fmt::Display for Cycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.elements.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Disjoint cycles of `perm`, ordered by first element.
///
/// The cycles of `p^j` are exactly the residue classes modulo `gcd(n, j)`,
/// so cycle `c` starts at `c` and steps by `j`.
pub fn cycle_decomposition(perm: &Permutation) -> Vec<Cycle> {
    let count = perm.cycle_count();
    let len = perm.n / count;
    (0..count)
        .map(|start| {
            let mut elements = Vec::with_capacity(len);
            let mut e = start;
            for _ in 0..len {
                elements.push(e);
                e = perm.apply(e);
            }
            Cycle { exponent: perm.j, elements }
        })
        .collect()
}

/// All cycles of `p, p^2, ..., p^(n/2)` grouped by their first element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPartition {
    pub n: usize,
    /// `sets[i]` holds the cycles starting with class `i`, in ascending
    /// exponent order. The 2-element cycle from `p^(n/2)` is therefore last.
    pub sets: Vec<Vec<Cycle>>,
}

impl QPartition {
    pub fn total_elements(&self) -> usize {
        self.sets.iter().flatten().map(Cycle::len).sum()
    }
}

pub fn partition_q(n: usize) -> Result<QPartition> {
    if !n.is_multiple_of(2) {
        return Err(Error::ExpectedEven(n));
    }
    if n < 4 {
        return Err(Error::TooFewClasses(n, 4));
    }
    Ok(partition_unchecked(n))
}

/// Also used for the degenerate `n = 2` array, where `Q_0 = {(0,1)}`.
pub(crate) fn partition_unchecked(n: usize) -> QPartition {
    let half = n / 2;
    let mut sets = vec![Vec::new(); half];
    for j in 1..=half {
        let perm = Permutation { n, j };
        for cycle in cycle_decomposition(&perm) {
            sets[cycle.first()].push(cycle);
        }
    }
    QPartition { n, sets }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycles_of(n: usize, j: usize) -> Vec<Vec<usize>> {
        cycle_decomposition(&power(n, j).unwrap())
            .into_iter()
            .map(|c| c.elements)
            .collect()
    }

    #[test]
    fn power_rejects_bad_arguments() {
        assert_eq!(power(1, 1), Err(Error::TooFewClasses(1, 2)));
        assert_eq!(power(5, 0), Err(Error::ExponentOutOfRange { n: 5, j: 0 }));
        assert_eq!(power(5, 6), Err(Error::ExponentOutOfRange { n: 5, j: 6 }));
    }

    #[test]
    fn full_power_is_identity() {
        let p = power(12, 12).unwrap();
        assert!(p.is_identity());
        assert_eq!(p.mapping(), (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn twelve_class_powers() {
        assert_eq!(cycles_of(12, 5), vec![vec![0, 5, 10, 3, 8, 1, 6, 11, 4, 9, 2, 7]]);
        assert_eq!(cycles_of(12, 2), vec![vec![0, 2, 4, 6, 8, 10], vec![1, 3, 5, 7, 9, 11]]);
        assert_eq!(
            cycles_of(12, 4),
            vec![vec![0, 4, 8], vec![1, 5, 9], vec![2, 6, 10], vec![3, 7, 11]]
        );
        assert_eq!(cycles_of(6, 3), vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
    }

    #[test]
    fn generator_is_one_long_cycle() {
        for n in 2..40 {
            assert_eq!(cycles_of(n, 1), vec![(0..n).collect::<Vec<_>>()]);
        }
    }

    #[test]
    fn partition_rejects_odd_and_small() {
        assert_eq!(partition_q(7), Err(Error::ExpectedEven(7)));
        assert_eq!(partition_q(2), Err(Error::TooFewClasses(2, 4)));
    }

    #[test]
    fn partition_of_twelve() {
        let q = partition_q(12).unwrap();
        assert_eq!(q.sets.len(), 6);
        let q0: Vec<String> = q.sets[0].iter().map(|c| c.to_string()).collect();
        assert_eq!(
            q0,
            [
                "(0,1,2,3,4,5,6,7,8,9,10,11)",
                "(0,2,4,6,8,10)",
                "(0,3,6,9)",
                "(0,4,8)",
                "(0,5,10,3,8,1,6,11,4,9,2,7)",
                "(0,6)"
            ]
        );
        assert_eq!(q.sets[5].len(), 1);
        assert_eq!(q.sets[5][0].elements, vec![5, 11]);
        assert_eq!(q.total_elements(), 12 * 6);
    }

    #[test]
    fn partition_of_six_and_four() {
        let q = partition_q(6).unwrap();
        let els: Vec<Vec<Vec<usize>>> = q
            .sets
            .iter()
            .map(|s| s.iter().map(|c| c.elements.clone()).collect())
            .collect();
        assert_eq!(
            els,
            vec![
                vec![vec![0, 1, 2, 3, 4, 5], vec![0, 2, 4], vec![0, 3]],
                vec![vec![1, 3, 5], vec![1, 4]],
                vec![vec![2, 5]],
            ]
        );

        let q = partition_q(4).unwrap();
        let els: Vec<Vec<Vec<usize>>> = q
            .sets
            .iter()
            .map(|s| s.iter().map(|c| c.elements.clone()).collect())
            .collect();
        assert_eq!(els, vec![vec![vec![0, 1, 2, 3], vec![0, 2]], vec![vec![1, 3]]]);
    }

    #[test]
    fn huge_n_is_cheap_to_construct() {
        let p = power(1_000_000, 250_000).unwrap();
        assert_eq!(p.cycle_count(), 250_000);
        assert_eq!(p.apply(999_999), 249_999);
    }
}
