// SPDX-License-Identifier: Apache-2.0

//! Minimal 1D crosspoint arrays built from cyclic permutation groups, a
//! phase-accurate simulator for parallel enumeration sort on those arrays,
//! and gate-level models of the min/max/rank/search query circuits.
//!
//! ```
//! use xbar::circuits::{min_index, select_rank};
//! use xbar::{build, sort};
//!
//! let layout = build(5)?;
//! assert_eq!(layout.to_string(), "0-1-2-3-0-2-4-1-3-4-0");
//! let out = sort(&layout, &[8, 6, 9, 5, 7])?;
//! assert_eq!(out.ranks.0, vec![3, 1, 4, 0, 2]);
//! assert_eq!(min_index(&out.t)?, 3);
//! assert_eq!(select_rank(&out.t, 2)?.index, Some(4));
//! # Ok::<(), xbar::Error>(())
//! ```

pub mod circuits;
pub mod error;
pub mod layout;
pub mod netlist;
pub mod perm;
pub mod sim;

pub use error::{Error, Result};
pub use layout::{build, build_even, build_odd, min_pe_count, replicate_lower_bound, validate, EndPlacement, Layout, ValidationReport};
pub use netlist::{depth, DepthReport, FaninLimit, Netlist};
pub use perm::{cycle_decomposition, gcd, partition_q, power, Cycle, Permutation, QPartition};
pub use sim::{sort, ComparisonMatrix, RankVector, SortOutcome, SortTrace};
