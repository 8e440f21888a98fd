//! Published closed forms for power-sum capacities.
//!
//! These are reproduced as stated so reports can compare them against the
//! composition-law engine. Two of them carry a `cross_check_required` flag
//! because they are known to disagree with the engine on some inputs; the
//! quadratic claim additionally ships a repaired polynomial rebuilt from the
//! composition laws (1/L = (n-1)(p-1)/p + 1/(d+L) with n = |ellD mod p|).

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactnum::{CapacityValue, Rational};
use crate::padic::is_prime;
use crate::powersets::power_sum_residues;

fn big_rat(num: i128, den: i128) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn check_basic(p: u64, d: u32, ell: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d == 0 || ell == 0 {
        return Err(Error::InvalidParams("d and ell must be >= 1".into()));
    }
    Ok(())
}

/// Size of the mod-p image of the ell-fold sumset of d-th powers.
fn classes_mod_p(p: u64, d: u32, ell: u32) -> Result<u64> {
    Ok(power_sum_residues(p, 1, d, ell)?.base.len() as u64)
}

/// p / (n (p-1)) with n = |ellD mod p|, valid when p does not divide d and
/// p = 1 mod 2^(a+1) for a = v_2(d).
pub fn published_rational_formula(p: u64, d: u32, ell: u32) -> Result<Rational> {
    check_basic(p, d, ell)?;
    if u64::from(d) % p == 0 {
        return Err(Error::FormulaNotApplicable(format!("p = {p} divides d = {d}")));
    }
    let a = d.trailing_zeros();
    let m = 1u64 << (a + 1);
    if p % m != 1 {
        return Err(Error::FormulaNotApplicable(format!(
            "p = {p} is not 1 mod 2^{}",
            a + 1
        )));
    }
    let n = classes_mod_p(p, d, ell)?;
    Ok(Rational::new(
        BigInt::from(p),
        BigInt::from(n) * BigInt::from(p - 1),
    ))
}

/// A quadratic satisfied by the capacity, per the published statement, next
/// to a repaired variant rebuilt from the composition laws. Coefficients are
/// for A x^2 + B x + C in the order [A, B, C].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticClaim {
    pub stated: [Rational; 3],
    pub repaired: [Rational; 3],
    pub cross_check_required: bool,
}

pub fn published_quadratic_formula(p: u64, d: u32, ell: u32) -> Result<QuadraticClaim> {
    check_basic(p, d, ell)?;
    if p == 2 {
        return Err(Error::FormulaNotApplicable("requires odd p".into()));
    }
    if d % 2 != 0 {
        return Err(Error::FormulaNotApplicable("requires even d".into()));
    }
    if u64::from(d) % p == 0 {
        return Err(Error::FormulaNotApplicable(format!("p = {p} divides d = {d}")));
    }
    let a = d.trailing_zeros();
    let m = 1u64 << (a + 1);
    if p % m == 1 {
        return Err(Error::FormulaNotApplicable(format!(
            "p = {p} is 1 mod 2^{}; the rational form applies instead",
            a + 1
        )));
    }
    let n = classes_mod_p(p, d, ell)?;
    if n < 2 {
        return Err(Error::FormulaNotApplicable(
            "fewer than two residue classes mod p".into(),
        ));
    }
    let one = big_rat(1, 1);
    let dr = big_rat(i128::from(d), 1);
    let stated_c = -big_rat(i128::from(p - 1) * i128::from(d), i128::from(n));
    let repaired_c = -big_rat(
        i128::from(p) * i128::from(d),
        i128::from(n - 1) * i128::from(p - 1),
    );
    Ok(QuadraticClaim {
        stated: [one.clone(), dr.clone(), stated_c],
        repaired: [one, dr, repaired_c],
        cross_check_required: true,
    })
}

/// Quadratic claimed for p = 2, ell = 2 and d with v_2(d) = alpha >= 1,
/// as published. Always cross-checked; the constant term is known to
/// disagree with the engine for d = 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaPolyClaim {
    pub poly: [Rational; 3],
    pub cross_check_required: bool,
}

pub fn published_alpha_polynomial(alpha: u32, d: u32) -> Result<AlphaPolyClaim> {
    if alpha < 1 {
        return Err(Error::FormulaNotApplicable("requires alpha >= 1".into()));
    }
    if d == 0 || d.trailing_zeros() != alpha {
        return Err(Error::FormulaNotApplicable(format!(
            "d = {d} does not have 2-adic valuation {alpha}"
        )));
    }
    let al = i128::from(alpha);
    let dd = i128::from(d);
    let a_coef = 2 * al + 6;
    let b_coef = 2 * al * dd - 2 * al + 6 * dd - 7;
    let c_coef = al + 3 - al * dd * dd - 6 * al * dd - 9 * dd;
    Ok(AlphaPolyClaim {
        poly: [big_rat(a_coef, 1), big_rat(b_coef, 1), big_rat(c_coef, 1)],
        cross_check_required: true,
    })
}

/// Parameter families with a shortcut value that bypasses the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialCase {
    /// p = 2, d = 2, ell >= 4: sums of four or more squares fill every
    /// 2-adic level, so the capacity is 1.
    FourSquares,
    /// p > (d-1)^4, d > 2 odd: capacity 1/(p-1).
    LargePrimeOdd,
    /// p > (d-1)^4, d > 2 even, p = 1 mod 2^(v_2(d)+1): capacity 1/(p-1).
    LargePrimeEvenFull,
    /// p > (d-1)^4, d > 2 even, p not 1 mod 2^(v_2(d)+1), ell = 2: no
    /// rational shortcut; the quadratic claim and the engine decide.
    LargePrimeEvenPair,
    /// Same congruence class as above but ell >= 3: p/(n(p-1)).
    LargePrimeEvenMany,
    /// gcd(d, p-1) = 1, p not dividing d, ell >= 2: the two-fold sumset
    /// covers every class, so the capacity is 1/(p-1).
    CoprimeExponent,
    /// No shortcut applies.
    General,
}

pub fn classify_special(p: u64, d: u32, ell: u32) -> Result<(SpecialCase, Option<CapacityValue>)> {
    check_basic(p, d, ell)?;
    let floor = CapacityValue::Rat(Rational::new(BigInt::from(1u32), BigInt::from(p - 1)));
    if p == 2 && d == 2 && ell >= 4 {
        return Ok((SpecialCase::FourSquares, Some(CapacityValue::Rat(big_rat(1, 1)))));
    }
    let large = d > 2 && u128::from(p) > u128::from(d - 1).pow(4);
    if large {
        if d % 2 == 1 {
            return Ok((SpecialCase::LargePrimeOdd, Some(floor)));
        }
        let a = d.trailing_zeros();
        let m = 1u64 << (a + 1);
        if p % m == 1 {
            return Ok((SpecialCase::LargePrimeEvenFull, Some(floor)));
        }
        if ell == 2 {
            return Ok((SpecialCase::LargePrimeEvenPair, None));
        }
        let value = if p <= 10_000 {
            let n = classes_mod_p(p, d, ell)?;
            CapacityValue::Rat(Rational::new(
                BigInt::from(p),
                BigInt::from(n) * BigInt::from(p - 1),
            ))
        } else {
            // Above the enumeration cutoff, p > (d-1)^4 already forces every
            // class to be a sum of two d-th powers, so n = p.
            floor
        };
        return Ok((SpecialCase::LargePrimeEvenMany, Some(value)));
    }
    if u64::from(d).gcd(&(p - 1)) == 1 && u64::from(d) % p != 0 && ell >= 2 {
        return Ok((SpecialCase::CoprimeExponent, Some(floor)));
    }
    Ok((SpecialCase::General, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::engine::self_similar_capacity;
    use crate::exactnum::{positive_quadratic_root, rat, rat_int, Exact};
    use crate::padic::ResidueSet;

    #[test]
    fn rational_formula_examples() {
        assert_eq!(published_rational_formula(7, 3, 2).unwrap(), rat(7, 30));
        assert_eq!(published_rational_formula(5, 3, 2).unwrap(), rat(1, 4));
        assert_eq!(published_rational_formula(11, 1, 2).unwrap(), rat(1, 10));
    }

    #[test]
    fn rational_formula_preconditions() {
        // 3 = 3 mod 4 fails the congruence for d = 2.
        assert!(matches!(
            published_rational_formula(3, 2, 2),
            Err(Error::FormulaNotApplicable(_))
        ));
        assert!(matches!(
            published_rational_formula(3, 6, 2),
            Err(Error::FormulaNotApplicable(_))
        ));
        assert!(matches!(
            published_rational_formula(2, 3, 2),
            Err(Error::FormulaNotApplicable(_))
        ));
    }

    #[test]
    fn quadratic_claim_for_squares_mod_three() {
        let claim = published_quadratic_formula(3, 2, 2).unwrap();
        assert!(claim.cross_check_required);
        assert_eq!(claim.stated, [rat_int(1), rat_int(2), rat(-4, 3)]);
        assert_eq!(claim.repaired, [rat_int(1), rat_int(2), rat(-3, 2)]);

        let stated_root =
            positive_quadratic_root(&claim.stated[0], &claim.stated[1], &claim.stated[2]).unwrap();
        assert_eq!(stated_root, Exact::surd(rat_int(-1), rat(1, 3), 21.into()));

        // The repaired polynomial has exactly the engine's value as root.
        let repaired_root =
            positive_quadratic_root(&claim.repaired[0], &claim.repaired[1], &claim.repaired[2])
                .unwrap();
        let base = ResidueSet::new(3, 1, [1, 2]).unwrap();
        assert_eq!(repaired_root, self_similar_capacity(&base, 2).unwrap());
    }

    #[test]
    fn quadratic_claim_preconditions() {
        assert!(published_quadratic_formula(5, 3, 2).is_err());
        assert!(published_quadratic_formula(2, 2, 2).is_err());
        assert!(published_quadratic_formula(5, 2, 2).is_err()); // 5 = 1 mod 4
        assert!(published_quadratic_formula(3, 6, 2).is_err()); // p | d
    }

    #[test]
    fn alpha_polynomial_coefficients() {
        let c1 = published_alpha_polynomial(1, 2).unwrap();
        assert_eq!(c1.poly, [rat_int(8), rat_int(7), rat_int(-30)]);
        let c2 = published_alpha_polynomial(2, 4).unwrap();
        assert_eq!(c2.poly, [rat_int(10), rat_int(29), rat_int(-111)]);
        assert!(c2.cross_check_required);
    }

    #[test]
    fn alpha_polynomial_disagrees_with_engine_for_d_four() {
        let claim = published_alpha_polynomial(2, 4).unwrap();
        let claimed =
            positive_quadratic_root(&claim.poly[0], &claim.poly[1], &claim.poly[2]).unwrap();
        let base = ResidueSet::new(2, 4, [1, 2]).unwrap();
        let engine = self_similar_capacity(&base, 4).unwrap();
        assert_ne!(claimed, engine);
    }

    #[test]
    fn alpha_polynomial_preconditions() {
        assert!(published_alpha_polynomial(0, 3).is_err());
        assert!(published_alpha_polynomial(1, 4).is_err()); // v_2(4) = 2, not 1
        assert!(published_alpha_polynomial(2, 2).is_err());
    }

    #[test]
    fn classification_table() {
        use SpecialCase::*;
        let one = CapacityValue::Rat(rat_int(1));

        let (case, v) = classify_special(17, 3, 2).unwrap();
        assert_eq!(case, LargePrimeOdd);
        assert_eq!(v, Some(CapacityValue::Rat(rat(1, 16))));

        let (case, v) = classify_special(5, 3, 2).unwrap();
        assert_eq!(case, CoprimeExponent);
        assert_eq!(v, Some(CapacityValue::Rat(rat(1, 4))));

        let (case, v) = classify_special(2, 2, 4).unwrap();
        assert_eq!(case, FourSquares);
        assert_eq!(v, Some(one.clone()));

        let (case, v) = classify_special(97, 4, 2).unwrap();
        assert_eq!(case, LargePrimeEvenFull);
        assert_eq!(v, Some(CapacityValue::Rat(rat(1, 96))));

        let (case, v) = classify_special(83, 4, 2).unwrap();
        assert_eq!(case, LargePrimeEvenPair);
        assert_eq!(v, None);

        let (case, v) = classify_special(83, 4, 3).unwrap();
        assert_eq!(case, LargePrimeEvenMany);
        let n = classes_mod_p(83, 4, 3).unwrap();
        assert_eq!(
            v,
            Some(CapacityValue::Rat(Rational::new(
                BigInt::from(83u32),
                BigInt::from(n) * BigInt::from(82u32),
            )))
        );

        // p = 2 with odd d: units are closed under d-th powers and two
        // summands already cover the even classes.
        let (case, v) = classify_special(2, 3, 2).unwrap();
        assert_eq!(case, CoprimeExponent);
        assert_eq!(v, Some(one));

        let (case, v) = classify_special(3, 2, 2).unwrap();
        assert_eq!(case, General);
        assert_eq!(v, None);
    }

    #[test]
    fn classification_rejects_bad_input() {
        assert!(matches!(classify_special(6, 2, 2), Err(Error::NotPrime(6))));
        assert!(classify_special(3, 0, 2).is_err());
    }
}
