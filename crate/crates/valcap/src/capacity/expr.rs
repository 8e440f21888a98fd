//! Capacity expressions: either an exact value or a Mobius transform of one
//! anonymous unknown. The unknown appears while a self-similar tail is still
//! being resolved; the composition laws stay applicable in its presence.

use crate::error::{Error, Result};
use crate::exactnum::{rat_int, Exact, MobiusTransform, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum CapacityExpr {
    Known(Exact),
    Pending(MobiusTransform),
}

impl CapacityExpr {
    pub fn known(v: Exact) -> Self {
        CapacityExpr::Known(v)
    }

    pub fn from_rational(r: Rational) -> Self {
        CapacityExpr::Known(Exact::Rat(r))
    }

    /// The bare unknown.
    pub fn unknown() -> Self {
        CapacityExpr::Pending(MobiusTransform::identity())
    }

    pub fn is_known(&self) -> bool {
        matches!(self, CapacityExpr::Known(_))
    }

    pub fn as_known(&self) -> Option<&Exact> {
        match self {
            CapacityExpr::Known(v) => Some(v),
            CapacityExpr::Pending(_) => None,
        }
    }

    /// Substitutes a value for the unknown (no-op on known expressions).
    pub fn resolve(&self, x: &Exact) -> Result<Exact> {
        match self {
            CapacityExpr::Known(v) => Ok(v.clone()),
            CapacityExpr::Pending(t) => t.apply_exact(x),
        }
    }

    pub fn add_rational(&self, c: &Rational) -> Result<CapacityExpr> {
        match self {
            CapacityExpr::Known(v) => Ok(CapacityExpr::Known(v.add(&Exact::Rat(c.clone()))?)),
            CapacityExpr::Pending(t) => Ok(CapacityExpr::Pending(
                MobiusTransform::add_constant(c.clone()).compose(t)?,
            )),
        }
    }
}

/// Capacity of a disjoint union of parts at pairwise valuation distance 0:
/// 1/L = sum of 1/L_i. At most one part may carry the unknown, and then the
/// remaining parts must be rational so the result stays a Mobius transform.
pub fn shuffle_capacity(values: &[CapacityExpr]) -> Result<CapacityExpr> {
    if values.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut known_sum: Option<Exact> = None;
    let mut pending: Option<&MobiusTransform> = None;
    for v in values {
        match v {
            CapacityExpr::Known(x) => {
                let term = x.recip()?;
                known_sum = Some(match known_sum {
                    None => term,
                    Some(acc) => acc.add(&term)?,
                });
            }
            CapacityExpr::Pending(t) => {
                if pending.is_some() {
                    return Err(Error::UnsupportedNesting(
                        "more than one component carries the unknown".into(),
                    ));
                }
                pending = Some(t);
            }
        }
    }
    match pending {
        None => {
            let total = known_sum.expect("nonempty input");
            Ok(CapacityExpr::Known(total.recip()?))
        }
        Some(t) => {
            let s = match known_sum {
                None => rat_int(0),
                Some(Exact::Rat(r)) => r,
                Some(Exact::Surd(_)) => {
                    return Err(Error::UnsupportedNesting(
                        "irrational component beside the unknown".into(),
                    ))
                }
            };
            // L = 1/(s + 1/T(x)).
            let m = MobiusTransform::reciprocal().compose(t)?;
            let m = MobiusTransform::add_constant(s).compose(&m)?;
            let m = MobiusTransform::reciprocal().compose(&m)?;
            Ok(CapacityExpr::Pending(m))
        }
    }
}

/// Capacity of a disjoint union of parts at pairwise valuation distance
/// exactly k: L = k + 1/(sum of 1/(L_i - k)). Degenerates to the shuffle law
/// at k = 0. A known part with L_i <= k contradicts the claimed distance and
/// is rejected.
pub fn johnson_combine(k: u32, values: &[CapacityExpr]) -> Result<CapacityExpr> {
    if k == 0 {
        return shuffle_capacity(values);
    }
    if values.is_empty() {
        return Err(Error::EmptySet);
    }
    let k_rat = rat_int(k as i64);
    let k_exact = Exact::Rat(k_rat.clone());
    let mut known_sum: Option<Exact> = None;
    let mut pending: Option<&MobiusTransform> = None;
    for v in values {
        match v {
            CapacityExpr::Known(x) => {
                let shifted = x.sub(&k_exact)?;
                if !shifted.is_positive() {
                    return Err(Error::InvalidStratumCapacity(format!(
                        "component capacity does not exceed the distance level {k}"
                    )));
                }
                let term = shifted.recip()?;
                known_sum = Some(match known_sum {
                    None => term,
                    Some(acc) => acc.add(&term)?,
                });
            }
            CapacityExpr::Pending(t) => {
                if pending.is_some() {
                    return Err(Error::UnsupportedNesting(
                        "more than one component carries the unknown".into(),
                    ));
                }
                pending = Some(t);
            }
        }
    }
    match pending {
        None => {
            let total = known_sum.expect("nonempty input");
            Ok(CapacityExpr::Known(k_exact.add(&total.recip()?)?))
        }
        Some(t) => {
            let s = match known_sum {
                None => rat_int(0),
                Some(Exact::Rat(r)) => r,
                Some(Exact::Surd(_)) => {
                    return Err(Error::UnsupportedNesting(
                        "irrational component beside the unknown".into(),
                    ))
                }
            };
            // L = k + 1/(s + 1/(T(x) - k)).
            let m = MobiusTransform::add_constant(-k_rat.clone()).compose(t)?;
            let m = MobiusTransform::reciprocal().compose(&m)?;
            let m = MobiusTransform::add_constant(s).compose(&m)?;
            let m = MobiusTransform::reciprocal().compose(&m)?;
            let m = MobiusTransform::add_constant(k_rat).compose(&m)?;
            Ok(CapacityExpr::Pending(m))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn kn(n: i64, d: i64) -> CapacityExpr {
        CapacityExpr::from_rational(rat(n, d))
    }

    fn as_rat(e: &CapacityExpr) -> Rational {
        match e.as_known().unwrap() {
            Exact::Rat(r) => r.clone(),
            other => panic!("expected rational, got {other:?}"),
        }
    }

    #[test]
    fn shuffle_of_p_cosets_reproduces_full_ring() {
        for p in [2i64, 3, 5, 7] {
            let parts: Vec<CapacityExpr> = (0..p).map(|_| kn(p, p - 1)).collect();
            let l = shuffle_capacity(&parts).unwrap();
            assert_eq!(as_rat(&l), rat(1, p - 1));
        }
    }

    #[test]
    fn shuffle_two_copies() {
        let l = shuffle_capacity(&[kn(5, 2), kn(5, 2)]).unwrap();
        assert_eq!(as_rat(&l), rat(5, 4));
    }

    #[test]
    fn johnson_offset_example() {
        let l = johnson_combine(1, &[kn(5, 2), kn(7, 2)]).unwrap();
        assert_eq!(as_rat(&l), rat(31, 16));
        let total = shuffle_capacity(&[kn(5, 4), l]).unwrap();
        assert_eq!(as_rat(&total), rat(155, 204));
    }

    #[test]
    fn johnson_zero_is_shuffle() {
        let xs = [kn(5, 2), kn(7, 3), kn(11, 4)];
        assert_eq!(johnson_combine(0, &xs).unwrap(), shuffle_capacity(&xs).unwrap());
    }

    #[test]
    fn johnson_with_unknown() {
        // Inner step with parts 5/2 and (unknown + 5) at distance 1.
        let tail = CapacityExpr::unknown().add_rational(&rat_int(5)).unwrap();
        let expr = johnson_combine(1, &[kn(5, 2), tail]).unwrap();
        assert!(!expr.is_known());
        // At x = 1 the parts are 5/2 and 6: 1 + 1/(2/3 + 1/5) = 28/13.
        let got = expr.resolve(&Exact::int(1)).unwrap();
        assert_eq!(got, Exact::Rat(rat(28, 13)));
        // At x = 0: parts 5/2 and 5: 1 + 1/(2/3 + 1/4) = 23/11.
        let got = expr.resolve(&Exact::int(0)).unwrap();
        assert_eq!(got, Exact::Rat(rat(23, 11)));
    }

    #[test]
    fn low_stratum_rejected() {
        let err = johnson_combine(3, &[kn(5, 2), kn(7, 2)]).unwrap_err();
        assert!(matches!(err, Error::InvalidStratumCapacity(_)));
        // Exactly equal to k is rejected too.
        let err = johnson_combine(2, &[kn(2, 1), kn(7, 2)]).unwrap_err();
        assert!(matches!(err, Error::InvalidStratumCapacity(_)));
    }

    #[test]
    fn two_unknowns_rejected() {
        let err = shuffle_capacity(&[CapacityExpr::unknown(), CapacityExpr::unknown()]).unwrap_err();
        assert!(matches!(err, Error::UnsupportedNesting(_)));
        let err = johnson_combine(1, &[CapacityExpr::unknown(), CapacityExpr::unknown()]).unwrap_err();
        assert!(matches!(err, Error::UnsupportedNesting(_)));
    }

    #[test]
    fn surd_beside_unknown_rejected() {
        let surd = CapacityExpr::Known(Exact::surd(rat_int(0), rat_int(1), 2.into()));
        let err = shuffle_capacity(&[surd, CapacityExpr::unknown()]).unwrap_err();
        assert!(matches!(err, Error::UnsupportedNesting(_)));
    }

    #[test]
    fn shuffle_with_unknown_resolves_consistently() {
        // 1/L = 1/2 + 1/(x+1), checked at x = 2 against direct arithmetic.
        let tail = CapacityExpr::unknown().add_rational(&rat_int(1)).unwrap();
        let expr = shuffle_capacity(&[kn(2, 1), tail]).unwrap();
        let got = expr.resolve(&Exact::int(2)).unwrap();
        assert_eq!(got, Exact::Rat(rat(6, 5)));
    }
}
