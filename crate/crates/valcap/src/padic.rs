//! p-adic primitives: valuations, factorial valuations, and finite residue
//! sets at a fixed prime-power modulus.
//!
//! A [`ResidueSet`] is the basic currency of the whole crate. It stands for
//! the union of cosets `r + p^e Z_p` over its residues, so "full ring" means
//! every residue class mod p^e is present (canonically `e = 0`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::enumeration_budget;

/// Deterministic primality check by trial division. Intended for the small
/// primes this crate works with, not for cryptographic sizes.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut f = 5u64;
    while f.checked_mul(f).map_or(false, |sq| sq <= n) {
        if n % f == 0 || n % (f + 2) == 0 {
            return false;
        }
        f += 6;
    }
    true
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: i128, p: u64) -> Result<u32> {
    if p < 2 {
        return Err(Error::InvalidParams(format!("valuation base {p} < 2")));
    }
    if x == 0 {
        return Err(Error::ValuationOfZero);
    }
    let p = p as i128;
    let mut x = x;
    let mut v = 0u32;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Ok(v)
}

/// Valuation of n! via Legendre's formula sum_{i>=1} floor(n/p^i).
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    assert!(p >= 2, "factorial_valuation needs p >= 2");
    let mut total = 0u64;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// Base-p digit sum; `(n - digit_sum) / (p - 1)` equals
/// [`factorial_valuation`], which the tests exploit as a cross-check.
pub fn digit_sum(mut n: u64, p: u64) -> u64 {
    assert!(p >= 2);
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// Union of residue classes `r + p^e Z_p`, kept sorted and deduplicated.
///
/// `e = 0` encodes the full ring as the single class `0 + Z_p`. Construction
/// validates primality of `p` and refuses moduli above the enumeration
/// budget, so downstream code can index `Vec`s by residue without overflow
/// checks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResidueSet {
    p: u64,
    e: u32,
    residues: Vec<u64>,
}

/// `p^e` with budget enforcement; shared by everything that scales a modulus.
pub fn checked_modulus(p: u64, e: u32) -> Result<u64> {
    let budget = enumeration_budget();
    let mut m = 1u64;
    for _ in 0..e {
        m = m
            .checked_mul(p)
            .filter(|&m| m <= budget)
            .ok_or(Error::ModulusTooLarge { p, e, budget })?;
    }
    Ok(m)
}

impl ResidueSet {
    /// Main constructor: reduces mod `p^e`, sorts, dedups. Empty input is an
    /// error here; internal callers that need empty sets use
    /// [`ResidueSet::empty`].
    pub fn new(p: u64, e: u32, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set = Self::empty(p, e)?;
        let m = set.modulus();
        set.residues = residues.into_iter().map(|r| r % m).collect();
        set.residues.sort_unstable();
        set.residues.dedup();
        if set.residues.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(set)
    }

    /// Signed variant of [`ResidueSet::new`] for callers holding differences.
    pub fn from_signed(p: u64, e: u32, residues: impl IntoIterator<Item = i128>) -> Result<Self> {
        let mut set = Self::empty(p, e)?;
        let m = set.modulus() as i128;
        set.residues = residues
            .into_iter()
            .map(|r| r.rem_euclid(m) as u64)
            .collect();
        set.residues.sort_unstable();
        set.residues.dedup();
        if set.residues.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(set)
    }

    /// Empty set at the given modulus. Not public: an empty union of cosets
    /// is meaningless to callers, but the capacity engine builds sets
    /// incrementally and needs the degenerate starting point.
    pub(crate) fn empty(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        checked_modulus(p, e)?;
        Ok(ResidueSet { p, e, residues: Vec::new() })
    }

    /// All of Z_p, canonically at `e = 0`.
    pub fn full_ring(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(ResidueSet { p, e: 0, residues: vec![0] })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        // Fits by construction: checked at build time.
        self.p.pow(self.e)
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_full_ring(&self) -> bool {
        self.residues.len() as u64 == self.modulus()
    }

    /// Membership of an ordinary integer in the union of cosets.
    pub fn contains(&self, x: i128) -> bool {
        let r = x.rem_euclid(self.modulus() as i128) as u64;
        self.residues.binary_search(&r).is_ok()
    }

    /// Splits by lowest digit: for each digit `j` present, the set of
    /// `(r - j) / p` at modulus `p^(e-1)`. Classes with no members are
    /// omitted. Needs `e >= 1` since digits of a full-ring encoding are
    /// meaningless.
    pub fn partition_mod_p(&self) -> Result<Vec<(u64, ResidueSet)>> {
        if self.e == 0 {
            return Err(Error::InvalidParams(
                "cannot partition a set held at modulus p^0".into(),
            ));
        }
        let mut classes: Vec<(u64, ResidueSet)> = Vec::new();
        for &r in &self.residues {
            let j = r % self.p;
            let q = r / self.p;
            match classes.iter_mut().find(|(d, _)| *d == j) {
                Some((_, set)) => set.residues.push(q),
                None => {
                    let mut set = ResidueSet {
                        p: self.p,
                        e: self.e - 1,
                        residues: vec![q],
                    };
                    set.residues.reserve(8);
                    classes.push((j, set));
                }
            }
        }
        classes.sort_by_key(|(d, _)| *d);
        for (_, set) in &mut classes {
            set.residues.sort_unstable();
            set.residues.dedup();
        }
        Ok(classes)
    }

    /// Translate every coset by `t`; capacity is translation invariant, which
    /// the property tests lean on.
    pub fn translated(&self, t: i128) -> Self {
        let m = self.modulus() as i128;
        let mut residues: Vec<u64> = self
            .residues
            .iter()
            .map(|&r| (r as i128 + t).rem_euclid(m) as u64)
            .collect();
        residues.sort_unstable();
        residues.dedup();
        ResidueSet { p: self.p, e: self.e, residues }
    }

    /// Same underlying set re-expressed at a finer modulus `new_e >= e`:
    /// each coset splits into `p^(new_e - e)` cosets.
    pub fn lift_to(&self, new_e: u32) -> Result<Self> {
        if new_e < self.e {
            return Err(Error::InvalidParams(format!(
                "lift_to({new_e}) below current exponent {}",
                self.e
            )));
        }
        let new_m = checked_modulus(self.p, new_e)?;
        let m = self.modulus();
        let steps = new_m / m;
        let mut residues = Vec::with_capacity(self.residues.len() * steps as usize);
        for k in 0..steps {
            for &r in &self.residues {
                residues.push(r + k * m);
            }
        }
        residues.sort_unstable();
        Ok(ResidueSet { p: self.p, e: new_e, residues })
    }

    /// Projection mod `p^new_e` (a coarsening, in general lossy).
    pub fn reduce_modulus(&self, new_e: u32) -> Self {
        if new_e >= self.e {
            return self.clone();
        }
        let m = self.p.pow(new_e);
        let mut residues: Vec<u64> = self.residues.iter().map(|&r| r % m).collect();
        residues.sort_unstable();
        residues.dedup();
        ResidueSet { p: self.p, e: new_e, residues }
    }

    /// Smallest exponent representation describing the same union of cosets:
    /// drops to `e'` whenever the set is invariant under adding `p^e'`.
    /// A full ring canonicalizes to `{0}` at `e = 0`.
    pub fn minimal_exact_form(&self) -> Self {
        let mut best = self.clone();
        while best.e > 0 {
            let candidate = best.reduce_modulus(best.e - 1);
            let lifted = candidate
                .lift_to(best.e)
                .expect("re-lift within existing budget");
            if lifted.residues == best.residues {
                best = candidate;
            } else {
                break;
            }
        }
        best
    }

    /// Set union; both operands must live at the same modulus.
    pub fn union(&self, other: &ResidueSet) -> Result<ResidueSet> {
        if self.p != other.p || self.e != other.e {
            return Err(Error::InvalidParams(format!(
                "union of mismatched moduli {}^{} vs {}^{}",
                self.p, self.e, other.p, other.e
            )));
        }
        let mut residues = self.residues.clone();
        residues.extend_from_slice(&other.residues);
        residues.sort_unstable();
        residues.dedup();
        Ok(ResidueSet { p: self.p, e: self.e, residues })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_table() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(7919));
        assert!(!is_prime(7917));
        assert!(is_prime(2_147_483_647));
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(18, 3).unwrap(), 2);
        assert_eq!(valuation(-12, 2).unwrap(), 2);
        assert_eq!(valuation(1, 5).unwrap(), 0);
        assert_eq!(valuation(250, 5).unwrap(), 3);
        assert!(matches!(valuation(0, 3), Err(Error::ValuationOfZero)));
    }

    #[test]
    fn factorial_valuation_matches_legendre() {
        assert_eq!(factorial_valuation(8, 2), 7);
        assert_eq!(factorial_valuation(9, 3), 4);
        assert_eq!(factorial_valuation(100, 5), 24);
        for n in 0..500u64 {
            for &p in &[2u64, 3, 5, 7] {
                let direct = factorial_valuation(n, p);
                let via_digits = (n - digit_sum(n, p)) / (p - 1);
                assert_eq!(direct, via_digits, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn constructor_normalizes() {
        let s = ResidueSet::new(2, 3, [9, 1, 4, 12]).unwrap();
        assert_eq!(s.residues(), &[1, 4]);
        assert_eq!(s.modulus(), 8);
        assert!(matches!(
            ResidueSet::new(2, 3, std::iter::empty()),
            Err(Error::EmptySet)
        ));
        assert!(matches!(ResidueSet::new(4, 2, [1]), Err(Error::NotPrime(4))));
        assert!(matches!(
            ResidueSet::new(2, 40, [1]),
            Err(Error::ModulusTooLarge { .. })
        ));
    }

    #[test]
    fn signed_constructor_wraps() {
        let s = ResidueSet::from_signed(3, 2, [-1, -10, 4]).unwrap();
        assert_eq!(s.residues(), &[4, 8]);
    }

    #[test]
    fn full_ring_and_membership() {
        let full = ResidueSet::full_ring(5).unwrap();
        assert!(full.is_full_ring());
        assert_eq!(full.e(), 0);
        assert!(full.contains(123));
        assert!(full.contains(-7));

        let s = ResidueSet::new(2, 3, [0, 1, 4]).unwrap();
        assert!(s.contains(0));
        assert!(s.contains(9));
        assert!(s.contains(-4)); // -4 = 4 mod 8
        assert!(s.contains(-7)); // -7 = 1 mod 8
        assert!(!s.contains(3));
        assert!(!s.contains(-1));
    }

    #[test]
    fn partition_by_digit() {
        let s = ResidueSet::new(2, 3, [0, 1, 4]).unwrap();
        let parts = s.partition_mod_p().unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, 0);
        assert_eq!(parts[0].1.residues(), &[0, 2]);
        assert_eq!(parts[0].1.e(), 2);
        assert_eq!(parts[1].0, 1);
        assert_eq!(parts[1].1.residues(), &[0]);

        // Reassembly j + p * class recovers the set exactly.
        let mut rebuilt: Vec<u64> = Vec::new();
        for (j, class) in &parts {
            for &q in class.residues() {
                rebuilt.push(j + 2 * q);
            }
        }
        rebuilt.sort_unstable();
        assert_eq!(rebuilt, s.residues());

        let full = ResidueSet::full_ring(3).unwrap();
        assert!(full.partition_mod_p().is_err());
    }

    #[test]
    fn translation_and_lift_reduce() {
        let s = ResidueSet::new(3, 2, [1, 2, 3]).unwrap();
        let t = s.translated(-1);
        assert_eq!(t.residues(), &[0, 1, 2]);
        let back = t.translated(1);
        assert_eq!(back, s);

        let lifted = s.lift_to(3).unwrap();
        assert_eq!(lifted.len(), 9);
        assert!(lifted.contains(10) && lifted.contains(21) && !lifted.contains(4));
        assert_eq!(lifted.reduce_modulus(2), s);
        assert!(s.lift_to(1).is_err());
    }

    #[test]
    fn minimal_exact_forms() {
        let full8 = ResidueSet::new(2, 3, 0..8).unwrap();
        let m = full8.minimal_exact_form();
        assert_eq!(m.e(), 0);
        assert_eq!(m.residues(), &[0]);
        assert!(m.is_full_ring());

        let odds = ResidueSet::new(2, 3, [1, 3, 5, 7]).unwrap();
        let m = odds.minimal_exact_form();
        assert_eq!((m.e(), m.residues()), (1, &[1u64][..]));

        let s = ResidueSet::new(3, 3, [0, 1, 2, 3, 10, 11, 12, 19, 20, 21]).unwrap();
        let m = s.minimal_exact_form();
        assert_eq!(m, s, "not invariant under +9, stays at e=3");

        let s = ResidueSet::new(2, 3, [1, 2, 3, 5, 6]).unwrap();
        assert_eq!(s.minimal_exact_form(), s);

        let cosets = ResidueSet::new(3, 4, (0..81).filter(|r| r % 27 < 4)).unwrap();
        let m = cosets.minimal_exact_form();
        assert_eq!((m.e(), m.residues()), (3, &[0u64, 1, 2, 3][..]));
    }

    #[test]
    fn union_checks_moduli() {
        let a = ResidueSet::new(2, 3, [1]).unwrap();
        let b = ResidueSet::new(2, 3, [2, 1]).unwrap();
        assert_eq!(a.union(&b).unwrap().residues(), &[1, 2]);
        let c = ResidueSet::new(2, 2, [1]).unwrap();
        assert!(a.union(&c).is_err());
    }
}
