use num_traits::{One, Zero};

use crate::{Error, Result};

use super::{positive_quadratic_root, Exact, Rational};

/// x -> (alpha x + beta) / (gamma x + delta) over Q.
///
/// Valid when the determinant is nonzero, or in the degenerate constant form
/// alpha = gamma = 0 with delta != 0 (needed because a capacity recursion can
/// collapse to a constant once a subtree is fully resolved).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTransform {
    alpha: Rational,
    beta: Rational,
    gamma: Rational,
    delta: Rational,
}

impl MobiusTransform {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, delta: Rational) -> Result<Self> {
        let det = &alpha * &delta - &beta * &gamma;
        let constant_form = alpha.is_zero() && gamma.is_zero() && !delta.is_zero();
        if det.is_zero() && !constant_form {
            return Err(Error::DegenerateTransform);
        }
        Ok(MobiusTransform {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn identity() -> Self {
        MobiusTransform {
            alpha: Rational::one(),
            beta: Rational::zero(),
            gamma: Rational::zero(),
            delta: Rational::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        MobiusTransform {
            alpha: Rational::zero(),
            beta: c,
            gamma: Rational::zero(),
            delta: Rational::one(),
        }
    }

    pub fn add_constant(c: Rational) -> Self {
        MobiusTransform {
            alpha: Rational::one(),
            beta: c,
            gamma: Rational::zero(),
            delta: Rational::one(),
        }
    }

    pub fn reciprocal() -> Self {
        MobiusTransform {
            alpha: Rational::zero(),
            beta: Rational::one(),
            gamma: Rational::one(),
            delta: Rational::zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.alpha.is_zero() && self.gamma.is_zero()
    }

    /// self after other: (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &MobiusTransform) -> Result<MobiusTransform> {
        MobiusTransform::new(
            &self.alpha * &other.alpha + &self.beta * &other.gamma,
            &self.alpha * &other.beta + &self.beta * &other.delta,
            &self.gamma * &other.alpha + &self.delta * &other.gamma,
            &self.gamma * &other.beta + &self.delta * &other.delta,
        )
    }

    pub fn apply_rational(&self, x: &Rational) -> Result<Rational> {
        let den = &self.gamma * x + &self.delta;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok((&self.alpha * x + &self.beta) / den)
    }

    pub fn apply_exact(&self, x: &Exact) -> Result<Exact> {
        let num = Exact::Rat(self.alpha.clone())
            .mul(x)?
            .add(&Exact::Rat(self.beta.clone()))?;
        let den = Exact::Rat(self.gamma.clone())
            .mul(x)?
            .add(&Exact::Rat(self.delta.clone()))?;
        num.div(&den)
    }

    /// Solves T(x) = x for x > 0, i.e. gamma x^2 + (delta - alpha) x - beta = 0.
    pub fn positive_fixed_point(&self) -> Result<Exact> {
        positive_quadratic_root(&self.gamma, &(&self.delta - &self.alpha), &-self.beta.clone())
    }
}
