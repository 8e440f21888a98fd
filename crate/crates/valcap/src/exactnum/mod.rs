//! Exact arithmetic for capacity values: big rationals, real quadratic surds
//! a + b*sqrt(n), and the Mobius transforms used to solve self-referential
//! capacity recursions. No floating point is used anywhere on the exact path;
//! decimal output is produced by exact integer floor and half-even rounding.

pub mod decimal;
pub mod mobius;
pub mod surd;

pub use mobius::MobiusTransform;
pub use surd::{Exact, QuadraticSurd};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Final form of a valuative capacity. Irrational capacities are quadratic
/// over Q, so the surd carries its integer minimal polynomial (content-free,
/// positive leading coefficient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CapacityValue {
    Rat(Rational),
    Surd {
        value: QuadraticSurd,
        minimal_poly: (BigInt, BigInt, BigInt),
    },
}

impl CapacityValue {
    pub fn from_exact(x: Exact) -> Self {
        match x {
            Exact::Rat(r) => CapacityValue::Rat(r),
            Exact::Surd(s) => {
                let minimal_poly = s.minimal_poly();
                CapacityValue::Surd {
                    value: s,
                    minimal_poly,
                }
            }
        }
    }

    pub fn to_exact(&self) -> Exact {
        match self {
            CapacityValue::Rat(r) => Exact::Rat(r.clone()),
            CapacityValue::Surd { value, .. } => Exact::Surd(value.clone()),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, CapacityValue::Rat(_))
    }

    /// Fixed-point decimal with `digits` fractional digits, half-even.
    pub fn decimal(&self, digits: usize) -> String {
        decimal::render_decimal(&self.to_exact(), digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.decimal(17).parse().expect("decimal rendering is a valid float literal")
    }
}

/// The positive real root of A x^2 + B x + C = 0 (A may be zero: linear case).
///
/// `NoPositiveFixedPoint` when no root is positive, `AmbiguousFixedPoint` when
/// two distinct positive roots exist or every value is a root.
pub fn positive_quadratic_root(a: &Rational, b: &Rational, c: &Rational) -> Result<Exact> {
    if a.is_zero() {
        if b.is_zero() {
            return Err(if c.is_zero() {
                Error::AmbiguousFixedPoint
            } else {
                Error::NoPositiveFixedPoint
            });
        }
        let x = -(c / b);
        return if x.is_positive() {
            Ok(Exact::Rat(x))
        } else {
            Err(Error::NoPositiveFixedPoint)
        };
    }
    let disc = b * b - rat_int(4) * a * c;
    if disc.is_negative() {
        return Err(Error::NoPositiveFixedPoint);
    }
    let two_a = rat_int(2) * a;
    let center = -(b / &two_a);
    if disc.is_zero() {
        return if center.is_positive() {
            Ok(Exact::Rat(center))
        } else {
            Err(Error::NoPositiveFixedPoint)
        };
    }
    // sqrt(num/den) = sqrt(num*den) / den
    let (s, m) = surd::squarefree_decompose(&(disc.numer() * disc.denom()));
    let spread = Rational::new(s, disc.denom() * two_a.numer()) * Rational::from(two_a.denom().clone());
    let roots = [
        Exact::surd(center.clone(), spread.clone(), m.clone()),
        Exact::surd(center, -spread, m),
    ];
    let mut positive = roots.into_iter().filter(|r| r.is_positive());
    match (positive.next(), positive.next()) {
        (Some(r), None) => Ok(r),
        (Some(_), Some(_)) => Err(Error::AmbiguousFixedPoint),
        _ => Err(Error::NoPositiveFixedPoint),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_helpers() {
        assert_eq!(rat(2, 3) + rat(2, 5), rat(16, 15));
        assert_eq!(rat_int(-3), rat(-6, 2));
    }

    #[test]
    fn linear_root() {
        let r = positive_quadratic_root(&rat_int(0), &rat_int(204), &rat_int(-155)).unwrap();
        assert_eq!(r, Exact::Rat(rat(155, 204)));
    }

    #[test]
    fn rational_quadratic_roots() {
        // (x - 2)(x + 1): one positive root
        let r = positive_quadratic_root(&rat_int(1), &rat_int(-1), &rat_int(-2)).unwrap();
        assert_eq!(r, Exact::Rat(rat_int(2)));
        // (x - 1)(x - 2): two positive roots
        assert!(matches!(
            positive_quadratic_root(&rat_int(1), &rat_int(-3), &rat_int(2)),
            Err(Error::AmbiguousFixedPoint)
        ));
        // (x + 1)(x + 2): none
        assert!(matches!(
            positive_quadratic_root(&rat_int(1), &rat_int(3), &rat_int(2)),
            Err(Error::NoPositiveFixedPoint)
        ));
        // x^2 + 1: no real root
        assert!(matches!(
            positive_quadratic_root(&rat_int(1), &rat_int(0), &rat_int(1)),
            Err(Error::NoPositiveFixedPoint)
        ));
    }

    #[test]
    fn surd_root_with_minimal_poly() {
        // 30 x^2 + 152 x - 140 = 0, positive root (-38 + sqrt(2494)) / 15
        let r = positive_quadratic_root(&rat_int(30), &rat_int(152), &rat_int(-140)).unwrap();
        let cv = CapacityValue::from_exact(r);
        match &cv {
            CapacityValue::Surd { value, minimal_poly } => {
                assert_eq!(value.a, rat(-38, 15));
                assert_eq!(value.b, rat(1, 15));
                assert_eq!(value.n, BigInt::from(2494));
                assert_eq!(
                    *minimal_poly,
                    (BigInt::from(15), BigInt::from(76), BigInt::from(-70))
                );
            }
            other => panic!("expected surd, got {other:?}"),
        }
        assert_eq!(cv.decimal(4), "0.7960");
    }

    #[test]
    fn golden_ratio_style_root() {
        // x^2 + x - 3: root (-1 + sqrt(13)) / 2
        let r = positive_quadratic_root(&rat_int(1), &rat_int(1), &rat_int(-3)).unwrap();
        let cv = CapacityValue::from_exact(r);
        assert_eq!(cv.decimal(4), "1.3028");
        match cv {
            CapacityValue::Surd { minimal_poly, .. } => {
                assert_eq!(
                    minimal_poly,
                    (BigInt::from(1), BigInt::from(1), BigInt::from(-3))
                );
            }
            other => panic!("expected surd, got {other:?}"),
        }
    }

    #[test]
    fn double_root() {
        // (x - 3)^2
        let r = positive_quadratic_root(&rat_int(1), &rat_int(-6), &rat_int(9)).unwrap();
        assert_eq!(r, Exact::Rat(rat_int(3)));
    }

    #[test]
    fn f64_round_trip() {
        let cv = CapacityValue::Rat(rat(155, 204));
        assert!((cv.to_f64() - 155.0 / 204.0).abs() < 1e-15);
    }
}
