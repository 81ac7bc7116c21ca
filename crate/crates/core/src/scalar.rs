//! Backend abstraction over amplitude arithmetic.
//!
//! The exact backend ([`Amplitude`]) is the default and carries every
//! reported number; the floating backend ([`Complex64`]) exists for ancilla
//! phases outside the quarter-turn set, where the exact ring is not closed.
//! Both expose the same interface so state algebra, circuits and measurement
//! are written once.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::amplitude::{Amplitude, Rational};
use crate::error::{Error, Result};

/// Magnitudes below this are treated as zero by the float backend. Exact
/// cancellations (HOM nulls) leave residues around 1e-16; genuine pipeline
/// amplitudes are never below 2^(-13/2) ≈ 1.1e-2.
pub const FLOAT_EPS: f64 = 1e-12;

/// A relative phase for ancilla preparation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Phase {
    /// e^(i·q·π/2); exact in both backends.
    Quarter(u8),
    /// e^(i·r); float backend only, unless r is a multiple of π/2.
    Radians(f64),
}

impl Phase {
    pub fn zero() -> Self {
        Phase::Quarter(0)
    }

    /// True for any representation of zero phase.
    pub fn is_zero(&self) -> bool {
        match *self {
            Phase::Quarter(q) => q % 4 == 0,
            Phase::Radians(r) => r == 0.0,
        }
    }

    /// The phase of the complex conjugate.
    pub fn negated(&self) -> Self {
        match *self {
            Phase::Quarter(q) => Phase::Quarter((4 - (q % 4)) % 4),
            Phase::Radians(r) => Phase::Radians(-r),
        }
    }

    /// The quarter-turn index when the phase is an exact multiple of π/2.
    pub fn as_quarter(&self) -> Option<u8> {
        match *self {
            Phase::Quarter(q) => Some(q % 4),
            Phase::Radians(r) => {
                let turns = r / std::f64::consts::FRAC_PI_2;
                let nearest = turns.round();
                ((turns - nearest).abs() < 1e-9)
                    .then(|| (nearest.rem_euclid(4.0)) as u8 % 4)
            }
        }
    }
}

/// Probability semantics for a backend: exact rationals or floats.
pub trait ProbValue: Clone + PartialEq + PartialOrd + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// self / rhs; rhs must be nonzero.
    fn div(&self, rhs: &Self) -> Self;
    /// self · n for a combinatorial weight n.
    fn mul_nat(&self, n: u64) -> Self;
    fn is_zero(&self) -> bool;
    /// Equality with 1, exact or within the backend's tolerance.
    fn is_one(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl ProbValue for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        Rational::div(self, rhs)
    }
    fn mul_nat(&self, n: u64) -> Self {
        self.mul_int(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Rational::is_one(self)
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
}

impl ProbValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn mul_nat(&self, n: u64) -> Self {
        self * n as f64
    }
    fn is_zero(&self) -> bool {
        // Probability scale: genuine pipeline probabilities stay above 1e-6,
        // cancellation residues below 1e-15.
        self.abs() < FLOAT_EPS
    }
    fn is_one(&self) -> bool {
        (self - 1.0).abs() < 1e-9
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Amplitude arithmetic for one backend.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    type Prob: ProbValue;

    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn inv_sqrt2() -> Self;
    fn from_int(n: i64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn abs_squared(&self) -> Self::Prob;
    /// e^(iφ) for the given phase; the exact backend rejects phases that are
    /// not quarter turns.
    fn phase(phase: &Phase) -> Result<Self>;
    /// The scale factor 1/√p when representable in this backend.
    fn inv_sqrt_of(p: &Self::Prob) -> Option<Self>;
    /// Approximation for cross-backend comparisons.
    fn to_complex_f64(&self) -> Complex64;
}

impl Scalar for Amplitude {
    type Prob = Rational;

    fn zero() -> Self {
        Amplitude::zero()
    }
    fn one() -> Self {
        Amplitude::one()
    }
    fn i() -> Self {
        Amplitude::i()
    }
    fn inv_sqrt2() -> Self {
        Amplitude::inv_sqrt2()
    }
    fn from_int(n: i64) -> Self {
        Amplitude::from_int(n)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Amplitude::conj(self)
    }
    fn is_zero(&self) -> bool {
        Amplitude::is_zero(self)
    }
    fn abs_squared(&self) -> Rational {
        Amplitude::abs_squared(self)
    }

    fn phase(phase: &Phase) -> Result<Self> {
        match phase.as_quarter() {
            Some(q) => Ok(Amplitude::quarter_phase(q)),
            None => Err(Error::NotRepresentable(format!(
                "phase {phase:?} is not a quarter turn; use the float backend"
            ))),
        }
    }

    fn inv_sqrt_of(p: &Rational) -> Option<Self> {
        // 1/√(2^e) = √2^(-e); representable exactly when p is a power of 2.
        let num_log = pow2_log(p.numer())?;
        let den_log = pow2_log(p.denom())?;
        Some(if num_log >= den_log {
            Amplitude::one().div_sqrt2_pow(num_log - den_log)
        } else {
            Amplitude::one().mul_sqrt2_pow(den_log - num_log)
        })
    }

    fn to_complex_f64(&self) -> Complex64 {
        Amplitude::to_complex_f64(self)
    }
}

/// log2(n) when n is an exact positive power of two.
fn pow2_log(n: &BigInt) -> Option<u32> {
    use num_traits::Signed;
    if !n.is_positive() {
        return None;
    }
    let bits = n.bits();
    (n == &(BigInt::one() << (bits - 1))).then(|| (bits - 1) as u32)
}

impl Scalar for Complex64 {
    type Prob = f64;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn inv_sqrt2() -> Self {
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.norm_sqr() < FLOAT_EPS * FLOAT_EPS
    }
    fn abs_squared(&self) -> f64 {
        self.norm_sqr()
    }

    fn phase(phase: &Phase) -> Result<Self> {
        Ok(match *phase {
            // Quarter turns stay exact even in floats.
            Phase::Quarter(q) => match q % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            },
            Phase::Radians(r) => Complex64::from_polar(1.0, r),
        })
    }

    fn inv_sqrt_of(p: &f64) -> Option<Self> {
        (*p > 0.0).then(|| Complex64::new(1.0 / p.sqrt(), 0.0))
    }

    fn to_complex_f64(&self) -> Complex64 {
        *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_detection_from_radians() {
        assert_eq!(Phase::Radians(0.0).as_quarter(), Some(0));
        assert_eq!(Phase::Radians(std::f64::consts::PI).as_quarter(), Some(2));
        assert_eq!(Phase::Radians(-std::f64::consts::FRAC_PI_2).as_quarter(), Some(3));
        assert_eq!(Phase::Radians(0.7).as_quarter(), None);
    }

    #[test]
    fn exact_phase_rejects_free_angles() {
        assert!(<Amplitude as Scalar>::phase(&Phase::Radians(0.7)).is_err());
        assert_eq!(
            <Amplitude as Scalar>::phase(&Phase::Radians(std::f64::consts::PI)).unwrap(),
            Amplitude::from_int(-1)
        );
    }

    #[test]
    fn inv_sqrt_of_powers_of_two() {
        let quarter = Rational::new(1, 4);
        let scale = <Amplitude as Scalar>::inv_sqrt_of(&quarter).unwrap();
        assert_eq!(scale, Amplitude::from_int(2));

        let four = Rational::from_int(4);
        let scale = <Amplitude as Scalar>::inv_sqrt_of(&four).unwrap();
        assert_eq!(scale, Amplitude::from_parts(1, 0, 2));

        let two = Rational::from_int(2);
        let scale = <Amplitude as Scalar>::inv_sqrt_of(&two).unwrap();
        assert_eq!(scale, Amplitude::inv_sqrt2());

        assert!(<Amplitude as Scalar>::inv_sqrt_of(&Rational::from_int(3)).is_none());
        assert!(<Amplitude as Scalar>::inv_sqrt_of(&Rational::new(3, 8)).is_none());
    }

    #[test]
    fn float_prob_tolerances() {
        assert!(ProbValue::is_one(&(1.0 + 1e-12)));
        assert!(!ProbValue::is_one(&1.01));
        assert!(ProbValue::is_zero(&1e-30));
        assert!(!ProbValue::is_zero(&1e-4));
    }
}
