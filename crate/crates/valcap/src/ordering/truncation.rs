//! Explicit integer truncations of power-sum sets, and the stabilized
//! characteristic sequences obtained from them.
//!
//! The closure and the integer set share the same characteristic sequence,
//! so a greedy ordering over a boxed slice of the integer set is ground
//! truth for the symbolic machinery, up to truncation effects. Stability is
//! certified by recomputing at three geometric bounds; nothing is
//! extrapolated.

use std::collections::BTreeSet;

use crate::bitset::BitVec;
use crate::error::{Error, Result};
use crate::ordering::greedy::greedy_p_ordering;
use crate::ordering::{CharSequence, Provenance};
use crate::powersets::PowerSumParams;

/// Summand values x^d with |x^d| <= bound. For even d the negatives add
/// nothing; for odd d both signs appear.
fn summands(d: u32, bound: u64) -> Vec<i128> {
    let mut out = Vec::new();
    let mut x: u64 = 0;
    loop {
        let pow = (0..d).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(x)));
        match pow {
            Some(v) if v <= u128::from(bound) => {
                out.push(v as i128);
                if d % 2 == 1 && x > 0 {
                    out.push(-(v as i128));
                }
            }
            _ => break,
        }
        x += 1;
    }
    out.sort_unstable();
    out
}

/// Number of multisets of size ell from n values, saturating.
fn multiset_count(n: usize, ell: u32) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..u128::from(ell) {
        acc = acc.saturating_mul(n as u128 + i);
        acc /= i + 1;
    }
    acc
}

const TUPLE_LIMIT: u128 = 20_000_000;
const SIEVE_BIT_LIMIT: u128 = 1 << 31;

/// All values of x_1^d + ... + x_ell^d within [-bound, bound] (within
/// [0, bound] for even d), as a sorted list of distinct integers.
pub fn power_sum_truncation(params: &PowerSumParams, bound: u64) -> Result<Vec<i128>> {
    if bound == 0 {
        return Err(Error::InvalidParams("bound must be positive".into()));
    }
    let d = params.d();
    let ell = params.ell();
    let sums = summands(d, bound);
    if multiset_count(sums.len(), ell) <= TUPLE_LIMIT {
        return Ok(tuple_sums(&sums, ell, bound));
    }
    sieve_sums(&sums, ell, bound, d % 2 == 1)
}

fn tuple_sums(sums: &[i128], ell: u32, bound: u64) -> Vec<i128> {
    let mut out = BTreeSet::new();
    tuple_rec(sums, ell, i128::from(bound), 0, 0, &mut out);
    out.into_iter().collect()
}

fn tuple_rec(
    sums: &[i128],
    left: u32,
    bound: i128,
    start: usize,
    acc: i128,
    out: &mut BTreeSet<i128>,
) {
    if left == 0 {
        if acc.abs() <= bound {
            out.insert(acc);
        }
        return;
    }
    for (i, &s) in sums.iter().enumerate().skip(start) {
        tuple_rec(sums, left - 1, bound, i, acc + s, out);
    }
}

/// Dense bitset convolution. Signed sums use an offset grid wide enough for
/// every partial sum, so intermediate dips below -bound are kept. Unsigned
/// sums only grow, so truncating partials at the bound loses nothing.
fn sieve_sums(sums: &[i128], ell: u32, bound: u64, signed: bool) -> Result<Vec<i128>> {
    let max_summand = sums.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0);
    let (len, offset_step) = if signed {
        let half = u128::from(ell) * max_summand;
        (2 * half + 1, max_summand as i128)
    } else {
        (u128::from(bound) + 1, 0i128)
    };
    if len > SIEVE_BIT_LIMIT {
        return Err(Error::InvalidParams(format!(
            "bound {bound} needs a {len}-bit sieve; lower the bound"
        )));
    }
    let len = len as usize;
    let mut cur = BitVec::new(len);
    cur.set(0);
    for _ in 0..ell {
        let mut next = BitVec::new(len);
        for &s in sums {
            // Index i at round r encodes the value i - r*offset_step.
            next.or_shifted(&cur, (s + offset_step) as usize);
        }
        cur = next;
    }
    let total_offset = i128::from(ell) * offset_step;
    let bound = i128::from(bound);
    Ok(cur
        .iter_ones()
        .map(|i| i as i128 - total_offset)
        .filter(|v| v.abs() <= bound)
        .collect())
}

/// Stabilized characteristic sequence from integer truncations at bound,
/// 2*bound and 4*bound. `stable` holds the prefix on which all three runs
/// agree; `unstable_tail` holds the remaining entries of the largest run,
/// reported but not certified. No automatic escalation happens here.
#[derive(Clone, Debug)]
pub struct TruncationAlpha {
    pub stable: CharSequence,
    pub unstable_tail: Vec<u64>,
}

pub fn alpha_from_integers(
    params: &PowerSumParams,
    bound: u64,
    n_max: usize,
) -> Result<TruncationAlpha> {
    if bound == 0 || bound > u64::MAX / 4 {
        return Err(Error::InvalidParams("bound out of range".into()));
    }
    let p = params.p();
    let mut runs: Vec<Vec<u64>> = Vec::with_capacity(3);
    for b in [bound, 2 * bound, 4 * bound] {
        let elems = power_sum_truncation(params, b)?;
        if elems.len() <= n_max {
            let needed = n_max + 1;
            let got = elems.len();
            let suggest = (u128::from(b) * 2 * needed as u128) / (got as u128 + 1);
            return Err(Error::TooFewElements {
                needed,
                got,
                suggest_bound: suggest.max(u128::from(b) * 2),
            });
        }
        runs.push(greedy_p_ordering(&elems, p, n_max)?.into_alphas().values().to_vec());
    }
    let mut stable_len = 0;
    while stable_len <= n_max
        && runs[0][stable_len] == runs[1][stable_len]
        && runs[1][stable_len] == runs[2][stable_len]
    {
        stable_len += 1;
    }
    let last = runs.pop().expect("three runs");
    let stable = CharSequence::new(
        last[..stable_len].to_vec(),
        Provenance::GreedyTruncation { bound },
    )?;
    Ok(TruncationAlpha {
        stable,
        unstable_tail: last[stable_len..].to_vec(),
    })
}
