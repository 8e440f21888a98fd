use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

use super::Rational;

/// a + b*sqrt(n) with rational a, b. Invariants: b != 0, n >= 2 squarefree.
/// Anything violating them collapses to a rational at construction, so a
/// `QuadraticSurd` is always genuinely irrational and structural equality is
/// numeric equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub a: Rational,
    pub b: Rational,
    pub n: BigInt,
}

impl QuadraticSurd {
    /// A x^2 + B x + C with integer coefficients, gcd 1, A > 0, vanishing at
    /// a + b*sqrt(n). Derived from the conjugate pair: x^2 - 2a x + (a^2 - b^2 n).
    pub fn minimal_poly(&self) -> (BigInt, BigInt, BigInt) {
        let lin = -(&self.a + &self.a);
        let cst = &self.a * &self.a - &self.b * &self.b * Rational::from(self.n.clone());
        let d = lin.denom().lcm(cst.denom());
        let a_int = d.clone();
        let b_int = (lin * Rational::from(d.clone())).to_integer();
        let c_int = (cst * Rational::from(d)).to_integer();
        let g = a_int.gcd(&b_int).gcd(&c_int);
        (a_int / &g, b_int / &g, c_int / &g)
    }

    fn sign(&self) -> i32 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        let a2 = &self.a * &self.a;
        let b2n = &self.b * &self.b * Rational::from(self.n.clone());
        match a2.cmp(&b2n) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            // |a| = |b| sqrt(n) would make sqrt(n) rational
            Ordering::Equal => unreachable!("squarefree radicand has irrational square root"),
        }
    }
}

fn rational_sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// n = s^2 * m with m squarefree, best effort: trial division up to 100 000
/// and a perfect-square test on the cofactor. A cofactor with a repeated prime
/// factor above the bound stays unsplit; radicands here are far smaller.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "radicand must be positive");
    let mut rem = n.clone();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut f = BigInt::from(2u32);
    let limit = BigInt::from(100_000u32);
    while f <= limit && &f * &f <= rem {
        if (&rem % &f).is_zero() {
            let mut e = 0u32;
            while (&rem % &f).is_zero() {
                rem /= &f;
                e += 1;
            }
            s *= num_traits::pow(f.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                m *= &f;
            }
        }
        f += 1u32;
    }
    if rem > BigInt::one() {
        let r = rem.sqrt();
        if &r * &r == rem {
            s *= r;
        } else {
            m *= rem;
        }
    }
    (s, m)
}

/// Exact real number: rational or an element of one real quadratic field.
/// Arithmetic mixing two different fields Q(sqrt(n)), Q(sqrt(m)) is refused
/// with `UnsupportedNesting` rather than approximated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exact {
    Rat(Rational),
    Surd(QuadraticSurd),
}

impl Exact {
    pub fn int(k: i64) -> Self {
        Exact::Rat(Rational::from(BigInt::from(k)))
    }

    /// Normalizing constructor: pulls square factors out of n, then collapses
    /// b = 0 or perfect-square n into `Rat`.
    pub fn surd(a: Rational, b: Rational, n: BigInt) -> Self {
        assert!(n.is_positive(), "radicand must be positive");
        if b.is_zero() {
            return Exact::Rat(a);
        }
        let (s, m) = squarefree_decompose(&n);
        if m.is_one() {
            return Exact::Rat(a + b * Rational::from(s));
        }
        Exact::Surd(QuadraticSurd {
            a,
            b: b * Rational::from(s),
            n: m,
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Exact::Rat(r) if r.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    fn sign(&self) -> i32 {
        match self {
            Exact::Rat(r) => rational_sign(r),
            Exact::Surd(s) => s.sign(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Exact::Rat(r) => Some(r),
            Exact::Surd(_) => None,
        }
    }

    pub fn add(&self, other: &Exact) -> Result<Exact> {
        match (self, other) {
            (Exact::Rat(x), Exact::Rat(y)) => Ok(Exact::Rat(x + y)),
            (Exact::Rat(x), Exact::Surd(s)) | (Exact::Surd(s), Exact::Rat(x)) => {
                Ok(Exact::surd(x + &s.a, s.b.clone(), s.n.clone()))
            }
            (Exact::Surd(s), Exact::Surd(t)) => {
                if s.n != t.n {
                    return Err(Error::UnsupportedNesting(format!(
                        "cannot combine sqrt({}) with sqrt({})",
                        s.n, t.n
                    )));
                }
                Ok(Exact::surd(&s.a + &t.a, &s.b + &t.b, s.n.clone()))
            }
        }
    }

    pub fn neg(&self) -> Exact {
        match self {
            Exact::Rat(r) => Exact::Rat(-r),
            Exact::Surd(s) => Exact::Surd(QuadraticSurd {
                a: -&s.a,
                b: -&s.b,
                n: s.n.clone(),
            }),
        }
    }

    pub fn sub(&self, other: &Exact) -> Result<Exact> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Exact) -> Result<Exact> {
        match (self, other) {
            (Exact::Rat(x), Exact::Rat(y)) => Ok(Exact::Rat(x * y)),
            (Exact::Rat(x), Exact::Surd(s)) | (Exact::Surd(s), Exact::Rat(x)) => {
                Ok(Exact::surd(x * &s.a, x * &s.b, s.n.clone()))
            }
            (Exact::Surd(s), Exact::Surd(t)) => {
                if s.n != t.n {
                    return Err(Error::UnsupportedNesting(format!(
                        "cannot combine sqrt({}) with sqrt({})",
                        s.n, t.n
                    )));
                }
                let nn = Rational::from(s.n.clone());
                Ok(Exact::surd(
                    &s.a * &t.a + &s.b * &t.b * nn,
                    &s.a * &t.b + &s.b * &t.a,
                    s.n.clone(),
                ))
            }
        }
    }

    pub fn recip(&self) -> Result<Exact> {
        match self {
            Exact::Rat(r) => {
                if r.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Exact::Rat(r.recip()))
            }
            Exact::Surd(s) => {
                // (a - b sqrt(n)) / (a^2 - b^2 n); the norm is nonzero because
                // sqrt(n) is irrational
                let norm = &s.a * &s.a - &s.b * &s.b * Rational::from(s.n.clone());
                Ok(Exact::surd(&s.a / &norm, -(&s.b / &norm), s.n.clone()))
            }
        }
    }

    pub fn div(&self, other: &Exact) -> Result<Exact> {
        self.mul(&other.recip()?)
    }

    pub fn cmp_exact(&self, other: &Exact) -> Result<Ordering> {
        Ok(match self.sub(other)?.sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }
}
