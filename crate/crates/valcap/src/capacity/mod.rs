//! Valuative capacities of p-adic closure structures.
//!
//! The capacity L of a set S measures the linear growth rate of the minimal
//! factorial-like valuations over S; equivalently the slope of n -> alpha(n).
//! Everything here is exact: coset unions give rationals, self-similar
//! closures give roots of integer quadratics.

pub(crate) mod descriptor;
mod engine;
mod expr;
mod formulas;

pub use expr::{johnson_combine, shuffle_capacity, CapacityExpr};
pub use formulas::{
    classify_special, published_alpha_polynomial, published_quadratic_formula,
    published_rational_formula, AlphaPolyClaim, QuadraticClaim, SpecialCase,
};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactnum::{rat_int, CapacityValue, Exact, MobiusTransform, Rational};
use crate::padic::{checked_modulus, valuation, ResidueSet};
use crate::powersets::ClosureSpec;

/// Capacity of a finite union of cosets of p^m Z, by digit descent.
/// Always rational: 1/(p-1) at m = 0, otherwise combine the p-adic digit
/// classes with 1/L = sum over classes of 1/(1 + L_class).
pub fn coset_union_capacity(set: &ResidueSet) -> Result<Rational> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = set.p();
    if set.e() == 0 {
        return Ok(Rational::new(BigInt::one(), BigInt::from(p - 1)));
    }
    let mut inv = Rational::new(BigInt::from(0u32), BigInt::one());
    for (_, class) in set.partition_mod_p()? {
        let l = coset_union_capacity(&class)?;
        inv += (Rational::one() + l).recip();
    }
    Ok(inv.recip())
}

/// Capacity of the set described by a closure structure.
pub fn spec_capacity(spec: &ClosureSpec) -> Result<CapacityValue> {
    match spec {
        ClosureSpec::CosetUnion { residues } => {
            Ok(CapacityValue::Rat(coset_union_capacity(residues)?))
        }
        ClosureSpec::SelfSimilar { base, scale } => {
            Ok(CapacityValue::from_exact(engine::self_similar_capacity(base, *scale)?))
        }
    }
}

/// One valuation level of a stratified set: the elements whose pairwise
/// distance to all later strata is exactly `level`, together with the
/// capacity of that part (possibly still carrying the unknown for a
/// self-similar tail).
#[derive(Clone, Debug)]
pub struct Stratum {
    pub level: u32,
    pub set: ResidueSet,
    pub value: CapacityExpr,
}

/// Parts A_0, ..., A_m with cross-part representative distances
/// v_p(a - b) = min(level_a, level_b). Levels must be contiguous from 0.
#[derive(Clone, Debug)]
pub struct Stratification {
    strata: Vec<Stratum>,
}

impl Stratification {
    pub fn new(strata: Vec<Stratum>) -> Result<Self> {
        if strata.is_empty() {
            return Err(Error::InvalidStratification("no strata".into()));
        }
        let p = strata[0].set.p();
        for (i, s) in strata.iter().enumerate() {
            if s.level != i as u32 {
                return Err(Error::InvalidStratification(format!(
                    "levels must be contiguous from 0; position {i} has level {}",
                    s.level
                )));
            }
            if s.set.p() != p {
                return Err(Error::InvalidStratification("mixed primes".into()));
            }
            if s.set.is_empty() {
                return Err(Error::InvalidStratification(format!("stratum {i} is empty")));
            }
        }
        for i in 0..strata.len() {
            for j in (i + 1)..strata.len() {
                check_distance(&strata[i], &strata[j], p)?;
            }
        }
        Ok(Stratification { strata })
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }
}

/// Representatives of the lower stratum must sit at valuation distance
/// exactly `low.level` from every representative of the higher one. The
/// distance is only determined up to the coarser of the two moduli, so
/// agreement mod p^min(e) with level >= min(e) passes uncertified.
fn check_distance(low: &Stratum, high: &Stratum, p: u64) -> Result<()> {
    let min_e = low.set.e().min(high.set.e());
    let m = checked_modulus(p, min_e)?;
    for &a in low.set.residues() {
        for &b in high.set.residues() {
            let r = (i128::from(a) - i128::from(b)).rem_euclid(m as i128);
            if r == 0 {
                if u64::from(low.level) < u64::from(min_e) {
                    return Err(Error::InvalidStratification(format!(
                        "representatives {a} and {b} agree mod {m}, deeper than level {}",
                        low.level
                    )));
                }
            } else {
                let v = valuation(r, p)?;
                if v != low.level {
                    return Err(Error::InvalidStratification(format!(
                        "v_{p}({a} - {b}) = {v}, expected level {}",
                        low.level
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Continued-fraction coefficients for a stratified capacity:
/// [0; 1/(L_0 - 0), 1, 1/(L_1 - 1), 1, ..., 1/(L_{m-1} - (m-1)), L_m - (m-1)].
/// A single stratum returns its value as the whole expansion.
pub fn stratified_continued_fraction(strata: &Stratification) -> Result<Vec<CapacityExpr>> {
    let parts = strata.strata();
    let m = parts.len() - 1;
    if m == 0 {
        return Ok(vec![parts[0].value.clone()]);
    }
    let mut out = Vec::with_capacity(2 * m + 1);
    out.push(CapacityExpr::from_rational(rat_int(0)));
    for (k, part) in parts.iter().take(m).enumerate() {
        out.push(stratum_reciprocal(part, k)?);
        if k + 1 < m {
            out.push(CapacityExpr::from_rational(rat_int(1)));
        }
    }
    let last = parts[m].value.add_rational(&rat_int(-(m as i64 - 1)))?;
    if let Some(v) = last.as_known() {
        if !v.is_positive() {
            return Err(Error::InvalidStratumCapacity(format!(
                "terminal stratum capacity must exceed {}",
                m - 1
            )));
        }
    }
    out.push(last);
    Ok(out)
}

/// 1/(L_k - k) for a non-terminal stratum; its capacity must be known and
/// strictly above its own level.
fn stratum_reciprocal(part: &Stratum, k: usize) -> Result<CapacityExpr> {
    let v = part.value.as_known().ok_or_else(|| {
        Error::UnsupportedNesting("non-terminal stratum carries the unknown".into())
    })?;
    let shifted = v.sub(&Exact::int(k as i64))?;
    if !shifted.is_positive() {
        return Err(Error::InvalidStratumCapacity(format!(
            "stratum at level {k} has capacity <= {k}"
        )));
    }
    Ok(CapacityExpr::Known(shifted.recip()?))
}

/// Folds [c_0; c_1, ..., c_n] to c_0 + 1/(c_1 + 1/(... + 1/c_n)). At most
/// one entry may carry the unknown.
pub fn evaluate_continued_fraction(coeffs: &[CapacityExpr]) -> Result<CapacityExpr> {
    let mut iter = coeffs.iter().rev();
    let mut acc = match iter.next() {
        None => return Err(Error::InvalidParams("empty continued fraction".into())),
        Some(c) => c.clone(),
    };
    for entry in iter {
        acc = cf_step(entry, acc)?;
    }
    Ok(acc)
}

fn cf_step(entry: &CapacityExpr, acc: CapacityExpr) -> Result<CapacityExpr> {
    let inv = match acc {
        CapacityExpr::Known(v) => CapacityExpr::Known(v.recip()?),
        CapacityExpr::Pending(t) => {
            CapacityExpr::Pending(MobiusTransform::reciprocal().compose(&t)?)
        }
    };
    match (entry, inv) {
        (CapacityExpr::Known(e), CapacityExpr::Known(w)) => Ok(CapacityExpr::Known(e.add(&w)?)),
        (CapacityExpr::Known(Exact::Rat(r)), CapacityExpr::Pending(t)) => Ok(
            CapacityExpr::Pending(MobiusTransform::add_constant(r.clone()).compose(&t)?),
        ),
        (CapacityExpr::Pending(t), CapacityExpr::Known(Exact::Rat(r))) => Ok(
            CapacityExpr::Pending(MobiusTransform::add_constant(r).compose(t)?),
        ),
        (CapacityExpr::Pending(_), CapacityExpr::Pending(_)) => Err(Error::UnsupportedNesting(
            "two unknowns in one continued fraction".into(),
        )),
        _ => Err(Error::UnsupportedNesting(
            "irrational value next to the unknown".into(),
        )),
    }
}
