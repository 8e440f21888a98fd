//! Ground-truth oracles for capacities: greedy p-orderings over explicit
//! integer truncations, exact characteristic-sequence streams generated from
//! a closure structure, and slope estimation. The two oracles are
//! independent of the engine and of each other.

mod greedy;
mod slope;
mod stream;
mod truncation;

pub use greedy::{alpha_order_independence_check, greedy_p_ordering, POrdering};
pub use slope::{slope_estimate, SlopeEstimate};
pub use stream::alpha_stream_from_spec;
pub use truncation::{alpha_from_integers, power_sum_truncation, TruncationAlpha};

use crate::error::{Error, Result};

/// Where a characteristic sequence came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Greedy ordering over the integer truncation at the given base bound.
    GreedyTruncation { bound: u64 },
    /// Greedy ordering over a caller-supplied finite set.
    ExplicitSet,
    /// Exact digit-descent stream from a closure structure.
    SpecStream,
}

/// alpha(0..=n): the p-adic valuations of difference products along a
/// p-ordering. Always starts at 0 and never decreases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSequence {
    values: Vec<u64>,
    provenance: Provenance,
}

impl CharSequence {
    pub fn new(values: Vec<u64>, provenance: Provenance) -> Result<Self> {
        match values.first() {
            None => return Err(Error::InvalidParams("empty characteristic sequence".into())),
            Some(&v) if v != 0 => {
                return Err(Error::InvalidParams("alpha(0) must be 0".into()));
            }
            _ => {}
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParams(
                "characteristic sequence must be nondecreasing".into(),
            ));
        }
        Ok(CharSequence { values, provenance })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}
