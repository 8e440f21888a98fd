//! Exact p-adic valuative capacities for sets of sums of d-th powers.
//!
//! For a prime p and E = lD (sums of l d-th powers of integers), the valuative
//! capacity L_{E,p} is the limit of alpha_{E,p}(n)/n, where alpha is the
//! characteristic sequence of E (p-adic valuations of difference products along
//! a p-ordering). This crate derives the p-adic closure structure of lD,
//! evaluates L exactly (a rational or a quadratic irrational with its minimal
//! polynomial), and cross-checks every result against two independent oracles:
//! greedy p-orderings on explicit integer truncations, and exact
//! characteristic-sequence streams generated from the closure structure.
//!
//! The `report` module additionally audits a built-in table of previously
//! published capacity values; disagreements are first-class output.

pub mod bitset;
pub mod capacity;
pub mod error;
pub mod exactnum;
pub mod ordering;
pub mod padic;
pub mod powersets;
pub mod report;

pub use error::{Error, Result};

use std::sync::OnceLock;

const DEFAULT_BUDGET: u64 = 1 << 22;

/// Ceiling for p^e in exhaustive residue enumeration. Overridable through the
/// VALCAP_BUDGET environment variable (read once per process).
pub fn enumeration_budget() -> u64 {
    static BUDGET: OnceLock<u64> = OnceLock::new();
    *BUDGET.get_or_init(|| {
        std::env::var("VALCAP_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&b| b >= 2)
            .unwrap_or(DEFAULT_BUDGET)
    })
}
