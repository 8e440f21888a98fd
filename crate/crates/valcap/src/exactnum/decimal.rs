//! Decimal rendering without floating point. The scaled value is floored by
//! exact integer arithmetic (integer square roots bound the surd part) and
//! ties round half to even, so printed digits are reproducible across
//! platforms and never suffer double-rounding.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::{rat, Exact, Rational};

/// Largest integer k >= 0 with k^2 <= q. Requires q >= 0.
fn floor_sqrt_rational(q: &Rational) -> BigInt {
    debug_assert!(!q.is_negative());
    let num = q.numer();
    let den = q.denom();
    let mut k = (num * den).sqrt() / den;
    loop {
        let up = &k + 1;
        if &up * &up * den <= *num {
            k = up;
        } else {
            break;
        }
    }
    while &k * &k * den > *num {
        k -= 1;
    }
    k
}

pub fn floor_exact(x: &Exact) -> BigInt {
    match x {
        Exact::Rat(r) => r.floor().to_integer(),
        Exact::Surd(s) => {
            let b2n = &s.b * &s.b * Rational::from(s.n.clone());
            let k = floor_sqrt_rational(&b2n);
            // b sqrt(n) is irrational, so for b < 0 the floor is -k - 1
            let t = if s.b.is_positive() { k } else { -k - 1 };
            let mut f = s.a.floor().to_integer() + t;
            // floor(a) + floor(b sqrt(n)) undershoots by at most 1
            loop {
                let next = &f + BigInt::from(1);
                let over = x
                    .sub(&Exact::Rat(Rational::from(next.clone())))
                    .expect("same field")
                    .is_negative();
                if over {
                    break;
                }
                f = next;
            }
            f
        }
    }
}

/// Fixed-point decimal with `digits` fractional digits, round half to even.
pub fn render_decimal(x: &Exact, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = x
        .mul(&Exact::Rat(Rational::from(scale)))
        .expect("rational scaling stays in the field");
    let f = floor_exact(&scaled);
    let frac = scaled
        .sub(&Exact::Rat(Rational::from(f.clone())))
        .expect("same field");
    let half = Exact::Rat(rat(1, 2));
    let rounded = match frac.cmp_exact(&half).expect("same field") {
        Ordering::Less => f,
        Ordering::Greater => f + 1,
        // ties only occur for rationals; pick the even neighbour
        Ordering::Equal => {
            if f.is_even() {
                f
            } else {
                f + 1
            }
        }
    };
    let neg = rounded.is_negative();
    let mut abs = rounded.abs().to_string();
    if abs.len() <= digits {
        abs = format!("{}{}", "0".repeat(digits + 1 - abs.len()), abs);
    }
    let split = abs.len() - digits;
    let body = if digits == 0 {
        abs
    } else {
        format!("{}.{}", &abs[..split], &abs[split..])
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
