//! Exact complex amplitude arithmetic over the ring Z[i, 1/√2].
//!
//! Every amplitude a 50:50 beam-splitter network can produce from integer
//! starting coefficients lives in this ring: each splitter contributes factors
//! of 1/√2 and i, and superposition adds them. A value is stored as
//!
//! ```text
//! (re_int + re_rt2·√2  +  i·(im_int + im_rt2·√2)) · 2^(-half_denom/2)
//! ```
//!
//! with unbounded integer coefficients. The familiar three-field form
//! (re, im, k) meaning (re + i·im)·2^(-k/2) is the subring with zero √2
//! parts; it is not closed under mixed-parity addition (1 + 1/√2 has no such
//! form), which is why the two extra coefficients exist. Circuit pipelines
//! never leave the three-field subring on any single occupation (every
//! contribution to one occupation carries the same power-of-√2 parity), so
//! [`Amplitude::to_parts`] succeeds on everything the simulator serializes.
//!
//! Canonical form: `half_denom` is minimal, i.e. either 0 or the value cannot
//! absorb a factor √2 into the coefficients (re_int and im_int not both even).
//! Zero is uniquely all-zero coefficients with `half_denom = 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact element of Z[i, 1/√2].
///
/// Value: `(re_int + re_rt2·√2 + i·(im_int + im_rt2·√2)) · 2^(-half_denom/2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Amplitude {
    re_int: BigInt,
    re_rt2: BigInt,
    im_int: BigInt,
    im_rt2: BigInt,
    half_denom: u32,
}

impl Amplitude {
    /// The additive identity.
    pub fn zero() -> Self {
        Self::raw(BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), 0)
    }

    /// The multiplicative identity.
    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::raw(BigInt::zero(), BigInt::zero(), BigInt::one(), BigInt::zero(), 0)
    }

    /// √2 exactly.
    pub fn sqrt2() -> Self {
        Self::raw(BigInt::zero(), BigInt::one(), BigInt::zero(), BigInt::zero(), 0)
    }

    /// 1/√2 exactly.
    pub fn inv_sqrt2() -> Self {
        Self::raw(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero(), 1)
    }

    /// An integer as an amplitude.
    pub fn from_int(n: i64) -> Self {
        Self::raw(BigInt::from(n), BigInt::zero(), BigInt::zero(), BigInt::zero(), 0)
    }

    /// Builds (re + i·im)·2^(-k/2) from the three-field form.
    pub fn from_parts(re: impl Into<BigInt>, im: impl Into<BigInt>, k: u32) -> Self {
        Self::raw(re.into(), BigInt::zero(), im.into(), BigInt::zero(), k)
    }

    /// i^q for a quarter-turn index q (taken mod 4).
    pub fn quarter_phase(q: u8) -> Self {
        match q % 4 {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    fn raw(re_int: BigInt, re_rt2: BigInt, im_int: BigInt, im_rt2: BigInt, half_denom: u32) -> Self {
        let mut v = Self { re_int, re_rt2, im_int, im_rt2, half_denom };
        v.canonicalize();
        v
    }

    /// Reduces `half_denom` to its minimum. One step divides the value's
    /// representation by √2: (a, b, c, d, k) -> (b, a/2, d, c/2, k-1),
    /// legal exactly when a and c are even.
    fn canonicalize(&mut self) {
        while self.half_denom > 0 && self.re_int.is_even() && self.im_int.is_even() {
            let a_half = &self.re_int / 2;
            let c_half = &self.im_int / 2;
            self.re_int = std::mem::replace(&mut self.re_rt2, a_half);
            self.im_int = std::mem::replace(&mut self.im_rt2, c_half);
            self.half_denom -= 1;
        }
        if self.re_int.is_zero()
            && self.re_rt2.is_zero()
            && self.im_int.is_zero()
            && self.im_rt2.is_zero()
        {
            self.half_denom = 0;
        }
    }

    /// Multiplies the representation by √2 without changing the value:
    /// (a, b, c, d, k) -> (2b, a, 2d, c, k+1).
    fn promoted(&self, target_half_denom: u32) -> Self {
        debug_assert!(target_half_denom >= self.half_denom);
        let mut a = self.re_int.clone();
        let mut b = self.re_rt2.clone();
        let mut c = self.im_int.clone();
        let mut d = self.im_rt2.clone();
        for _ in self.half_denom..target_half_denom {
            let new_a = &b * 2;
            let new_c = &d * 2;
            b = std::mem::replace(&mut a, new_a);
            d = std::mem::replace(&mut c, new_c);
        }
        Self { re_int: a, re_rt2: b, im_int: c, im_rt2: d, half_denom: target_half_denom }
    }

    /// True exactly for the zero value.
    pub fn is_zero(&self) -> bool {
        self.re_int.is_zero()
            && self.re_rt2.is_zero()
            && self.im_int.is_zero()
            && self.im_rt2.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            re_int: self.re_int.clone(),
            re_rt2: self.re_rt2.clone(),
            im_int: -&self.im_int,
            im_rt2: -&self.im_rt2,
            half_denom: self.half_denom,
        }
    }

    /// |self|² as an exact rational.
    ///
    /// Panics when the squared modulus is irrational, which requires a value
    /// with both a nonzero integer part and a nonzero √2 part on the same
    /// axis pair. Sums of same-parity terms (every circuit-produced
    /// amplitude) keep one of the two parts zero, so the panic is
    /// unreachable through the pipeline.
    pub fn abs_squared(&self) -> Rational {
        // |x|² = (a² + 2b² + c² + 2d²) + 2(ab + cd)·√2, all over 2^k.
        let rt2_part: BigInt = (&self.re_int * &self.re_rt2 + &self.im_int * &self.im_rt2) * 2;
        assert!(
            rt2_part.is_zero(),
            "abs_squared of a mixed-parity amplitude is irrational: {self:?}"
        );
        let num = &self.re_int * &self.re_int
            + &self.re_rt2 * &self.re_rt2 * 2
            + &self.im_int * &self.im_int
            + &self.im_rt2 * &self.im_rt2 * 2;
        Rational::new(num, BigInt::one() << self.half_denom)
    }

    /// Projects onto the three-field form (re, im, k) with value
    /// (re + i·im)·2^(-k/2). `None` when the value genuinely mixes integer
    /// and √2 coefficients and has no such form.
    pub fn to_parts(&self) -> Option<(BigInt, BigInt, u32)> {
        if self.re_rt2.is_zero() && self.im_rt2.is_zero() {
            return Some((self.re_int.clone(), self.im_int.clone(), self.half_denom));
        }
        if self.re_int.is_zero() && self.im_int.is_zero() {
            // Pure √2 multiple: one promotion clears the √2 parts.
            return Some((&self.re_rt2 * 2, &self.im_rt2 * 2, self.half_denom + 1));
        }
        None
    }

    /// The value as a floating complex number (for the float backend bridge
    /// and display; never used in exact comparisons).
    pub fn to_complex_f64(&self) -> num_complex::Complex64 {
        let rt2 = std::f64::consts::SQRT_2;
        let scale = 0.5f64.powf(f64::from(self.half_denom) / 2.0);
        let re = big_to_f64(&self.re_int) + big_to_f64(&self.re_rt2) * rt2;
        let im = big_to_f64(&self.im_int) + big_to_f64(&self.im_rt2) * rt2;
        num_complex::Complex64::new(re * scale, im * scale)
    }

    /// Scales by 2^(-t/2), i.e. multiplies by (1/√2)^t.
    pub fn div_sqrt2_pow(&self, t: u32) -> Self {
        Self {
            re_int: self.re_int.clone(),
            re_rt2: self.re_rt2.clone(),
            im_int: self.im_int.clone(),
            im_rt2: self.im_rt2.clone(),
            half_denom: self.half_denom + t,
        }
        .also_canonical()
    }

    /// Scales by 2^(t/2), i.e. multiplies by √2^t.
    pub fn mul_sqrt2_pow(&self, t: u32) -> Self {
        let drop = t.min(self.half_denom);
        let mut v = self.clone();
        v.half_denom -= drop;
        let mut v = v.also_canonical();
        for _ in 0..(t - drop) {
            v = &v * &Self::sqrt2();
        }
        v
    }

    fn also_canonical(mut self) -> Self {
        self.canonicalize();
        self
    }
}

fn big_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(f64::NAN)
}

impl Add for &Amplitude {
    type Output = Amplitude;
    fn add(self, rhs: &Amplitude) -> Amplitude {
        let k = self.half_denom.max(rhs.half_denom);
        let x = self.promoted(k);
        let y = rhs.promoted(k);
        Amplitude::raw(
            x.re_int + y.re_int,
            x.re_rt2 + y.re_rt2,
            x.im_int + y.im_int,
            x.im_rt2 + y.im_rt2,
            k,
        )
    }
}

impl Sub for &Amplitude {
    type Output = Amplitude;
    fn sub(self, rhs: &Amplitude) -> Amplitude {
        self + &(-rhs)
    }
}

impl Neg for &Amplitude {
    type Output = Amplitude;
    fn neg(self) -> Amplitude {
        Amplitude {
            re_int: -&self.re_int,
            re_rt2: -&self.re_rt2,
            im_int: -&self.im_int,
            im_rt2: -&self.im_rt2,
            half_denom: self.half_denom,
        }
    }
}

impl Neg for Amplitude {
    type Output = Amplitude;
    fn neg(self) -> Amplitude {
        -&self
    }
}

impl Mul for &Amplitude {
    type Output = Amplitude;
    fn mul(self, rhs: &Amplitude) -> Amplitude {
        // Complex product with components in Z[√2]:
        // (p + √2 q)(p' + √2 q') = (pp' + 2qq') + √2 (pq' + qp').
        let mul_rt2 = |p: &BigInt, q: &BigInt, p2: &BigInt, q2: &BigInt| {
            (p * p2 + q * q2 * 2, p * q2 + q * p2)
        };
        let (rr_i, rr_s) = mul_rt2(&self.re_int, &self.re_rt2, &rhs.re_int, &rhs.re_rt2);
        let (ii_i, ii_s) = mul_rt2(&self.im_int, &self.im_rt2, &rhs.im_int, &rhs.im_rt2);
        let (ri_i, ri_s) = mul_rt2(&self.re_int, &self.re_rt2, &rhs.im_int, &rhs.im_rt2);
        let (ir_i, ir_s) = mul_rt2(&self.im_int, &self.im_rt2, &rhs.re_int, &rhs.re_rt2);
        Amplitude::raw(
            rr_i - ii_i,
            rr_s - ii_s,
            ri_i + ir_i,
            ri_s + ir_s,
            self.half_denom + rhs.half_denom,
        )
    }
}

impl fmt::Debug for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Amplitude(({} + {}√2) + i({} + {}√2), k={})",
            self.re_int, self.re_rt2, self.im_int, self.im_rt2, self.half_denom
        )
    }
}

impl fmt::Display for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let re = rt2_component_string(&self.re_int, &self.re_rt2);
        let im = rt2_component_string(&self.im_int, &self.im_rt2);
        let num = match (re, im) {
            (Some(re), None) => re,
            (None, Some(im)) => imaginary_token(&im),
            (Some(re), Some(im)) => {
                let im_token = imaginary_token(&im);
                if im_token.starts_with('-') {
                    format!("{re}{im_token}")
                } else {
                    format!("{re}+{im_token}")
                }
            }
            (None, None) => unreachable!("zero handled above"),
        };
        if self.half_denom == 0 {
            return write!(f, "{num}");
        }
        let num = parenthesize_if_sum(&num);
        let whole = self.half_denom / 2;
        match (whole, self.half_denom % 2) {
            (w, 0) => write!(f, "{num}/{}", BigInt::one() << w),
            (0, _) => write!(f, "{num}/√2"),
            (w, _) => write!(f, "{num}/({}√2)", BigInt::one() << w),
        }
    }
}

/// Renders `p + q√2` compactly ("1", "-√2", "2√2", "1+√2"); `None` for zero.
fn rt2_component_string(p: &BigInt, q: &BigInt) -> Option<String> {
    let int_token = (!p.is_zero()).then(|| p.to_string());
    let rt2_token = (!q.is_zero()).then(|| {
        if q.is_one() {
            "√2".to_owned()
        } else if (-q).is_one() {
            "-√2".to_owned()
        } else {
            format!("{q}√2")
        }
    });
    match (int_token, rt2_token) {
        (None, None) => None,
        (Some(t), None) | (None, Some(t)) => Some(t),
        (Some(a), Some(b)) => {
            if b.starts_with('-') {
                Some(format!("{a}{b}"))
            } else {
                Some(format!("{a}+{b}"))
            }
        }
    }
}

fn imaginary_token(im: &str) -> String {
    match im {
        "1" => "i".to_owned(),
        "-1" => "-i".to_owned(),
        other => format!("{}i", parenthesize_if_sum(other)),
    }
}

fn parenthesize_if_sum(s: &str) -> String {
    // A sign after the leading character means a genuine sum or difference.
    let tail: String = s.chars().skip(1).collect();
    if tail.contains('+') || tail.contains('-') {
        format!("({s})")
    } else {
        s.to_owned()
    }
}

#[derive(Serialize, Deserialize)]
struct AmplitudeWire {
    re: String,
    im: String,
    k: u32,
}

impl Serialize for Amplitude {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (re, im, k) = self.to_parts().ok_or_else(|| {
            S::Error::custom(format!("amplitude has no (re, im, k) form: {self:?}"))
        })?;
        AmplitudeWire { re: re.to_string(), im: im.to_string(), k }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = AmplitudeWire::deserialize(deserializer)?;
        let parse = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|e| D::Error::custom(format!("bad integer {s:?}: {e}")))
        };
        Ok(Amplitude::from_parts(parse(&wire.re)?, parse(&wire.im)?, wire.k))
    }
}

/// Exact probability: a reduced rational with unbounded terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// num/den in reduced form. Panics on a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(n)))
    }

    /// 1/2^k.
    pub fn pow2_inverse(k: u32) -> Self {
        Self::new(1, BigInt::one() << k)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn pow(&self, n: u32) -> Self {
        Self(self.0.pow(n as i32))
    }

    /// Approximation for display and cross-backend comparisons.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            big_to_f64(self.0.numer()) / big_to_f64(self.0.denom())
        })
    }

    /// When the reduced denominator is 2^a·5^b, the exact terminating
    /// decimal expansion (e.g. 2476099/3200000 -> "0.7737809375").
    pub fn to_exact_decimal(&self) -> Option<String> {
        let mut den = self.denom().clone();
        let mut twos = 0u32;
        let mut fives = 0u32;
        while den.is_even() {
            den /= 2;
            twos += 1;
        }
        let five = BigInt::from(5);
        while (&den % &five).is_zero() {
            den /= &five;
            fives += 1;
        }
        if !den.is_one() {
            return None;
        }
        let digits = twos.max(fives);
        let scaled = self.numer() * BigInt::from(10u8).pow(digits)
            / self.denom();
        let sign = if scaled.is_negative() { "-" } else { "" };
        let body = scaled.abs().to_string();
        if digits == 0 {
            return Some(format!("{sign}{body}"));
        }
        let body = format!("{:0>width$}", body, width = digits as usize + 1);
        let (int_part, frac_part) = body.split_at(body.len() - digits as usize);
        Some(format!("{sign}{int_part}.{frac_part}"))
    }

    /// Parses "3/4", "0.75", or "3" exactly.
    pub fn parse_decimal_or_fraction(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| bad_rational(s))?;
            let den: BigInt = den.trim().parse().map_err(|_| bad_rational(s))?;
            if den.is_zero() {
                return Err(bad_rational(s));
            }
            return Ok(Self::new(num, den));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let digits = frac_part.len() as u32;
            let joined = format!("{int_part}{frac_part}");
            let num: BigInt = joined.parse().map_err(|_| bad_rational(s))?;
            return Ok(Self::new(num, BigInt::from(10u8).pow(digits)));
        }
        let num: BigInt = s.parse().map_err(|_| bad_rational(s))?;
        Ok(Self(BigRational::from_integer(num)))
    }
}

fn bad_rational(s: &str) -> Error {
    Error::Parse(format!("expected a rational like 3/4, 0.75 or 3, got {s:?}"))
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl Rational {
    /// self / rhs; panics on a zero divisor.
    pub fn div(&self, rhs: &Rational) -> Rational {
        Rational(&self.0 / &rhs.0)
    }

    /// self · n for an integer weight n.
    pub fn mul_int(&self, n: impl Into<BigInt>) -> Rational {
        Rational(&self.0 * BigRational::from_integer(n.into()))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RationalWire {
    num: String,
    den: String,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RationalWire { num: self.numer().to_string(), den: self.denom().to_string() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = RationalWire::deserialize(deserializer)?;
        let num: BigInt = wire
            .num
            .parse()
            .map_err(|e| D::Error::custom(format!("bad numerator {:?}: {e}", wire.num)))?;
        let den: BigInt = wire
            .den
            .parse()
            .map_err(|e| D::Error::custom(format!("bad denominator {:?}: {e}", wire.den)))?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(re: i64, im: i64, k: u32) -> Amplitude {
        Amplitude::from_parts(re, im, k)
    }

    #[test]
    fn opposite_halves_cancel() {
        assert!((&amp(1, 0, 1) + &amp(-1, 0, 1)).is_zero());
        assert!((&amp(0, 1, 2) + &amp(0, -1, 2)).is_zero());
    }

    #[test]
    fn inv_sqrt2_doubles_to_sqrt2() {
        let sum = &Amplitude::inv_sqrt2() + &Amplitude::inv_sqrt2();
        assert_eq!(sum, Amplitude::sqrt2());
        // √2 in three-field form is (2, 0, 1): 2·2^(-1/2).
        let (re, im, k) = sum.to_parts().unwrap();
        assert_eq!((re, im, k), (BigInt::from(2), BigInt::zero(), 1));
    }

    #[test]
    fn mixed_parity_sum_round_trips() {
        let mixed = &Amplitude::one() + &Amplitude::inv_sqrt2();
        assert!(mixed.to_parts().is_none());
        let back = &mixed - &Amplitude::inv_sqrt2();
        assert_eq!(back, Amplitude::one());
    }

    #[test]
    fn i_over_sqrt2_squares_to_minus_half() {
        let x = amp(0, 1, 1);
        assert_eq!(&x * &x, amp(-1, 0, 2));
        assert_eq!(&x * &Amplitude::one(), x);
        assert_eq!(&amp(1, 0, 1) * &amp(1, 0, 1), amp(1, 0, 2));
    }

    #[test]
    fn abs_squared_values() {
        assert_eq!(amp(1, 0, 9).abs_squared(), Rational::pow2_inverse(9));
        assert_eq!(Amplitude::zero().abs_squared(), Rational::zero());
        assert_eq!(amp(1, 1, 2).abs_squared(), Rational::new(1, 2));
        assert_eq!(Amplitude::sqrt2().abs_squared(), Rational::from_int(2));
    }

    #[test]
    #[should_panic(expected = "irrational")]
    fn abs_squared_mixed_parity_panics() {
        (&Amplitude::one() + &Amplitude::inv_sqrt2()).abs_squared();
    }

    #[test]
    fn canonical_collapses_even_k() {
        // (2, 0, 2) has value 1; the canonical form is (1, 0, 0).
        let x = amp(2, 0, 2);
        assert_eq!(x, Amplitude::one());
        let (re, im, k) = x.to_parts().unwrap();
        assert_eq!((re, im, k), (BigInt::one(), BigInt::zero(), 0));
    }

    #[test]
    fn quarter_phases_cycle() {
        assert_eq!(Amplitude::quarter_phase(0), Amplitude::one());
        assert_eq!(Amplitude::quarter_phase(1), Amplitude::i());
        assert_eq!(Amplitude::quarter_phase(2), -Amplitude::one());
        assert_eq!(Amplitude::quarter_phase(3), -Amplitude::i());
        assert_eq!(
            &Amplitude::quarter_phase(1) * &Amplitude::quarter_phase(3),
            Amplitude::one()
        );
    }

    #[test]
    fn sqrt2_power_scaling_inverts() {
        let x = amp(3, -5, 3);
        assert_eq!(x.div_sqrt2_pow(5).mul_sqrt2_pow(5), x);
        assert_eq!(x.mul_sqrt2_pow(2), &x * &Amplitude::from_int(2));
    }

    #[test]
    fn serialization_round_trip() {
        let x = amp(-7, 12, 5);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"re":"-7","im":"12","k":5}"#);
        let back: Amplitude = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);

        let rt2 = Amplitude::sqrt2();
        assert_eq!(serde_json::to_string(&rt2).unwrap(), r#"{"re":"2","im":"0","k":1}"#);

        let mixed = &Amplitude::one() + &Amplitude::inv_sqrt2();
        assert!(serde_json::to_string(&mixed).is_err());
    }

    #[test]
    fn rational_decimal_expansion() {
        assert_eq!(
            Rational::new(2476099, 3200000).to_exact_decimal().unwrap(),
            "0.7737809375"
        );
        assert_eq!(Rational::new(729, 1000).to_exact_decimal().unwrap(), "0.729");
        assert_eq!(Rational::from_int(1).to_exact_decimal().unwrap(), "1");
        assert_eq!(Rational::new(-1, 4).to_exact_decimal().unwrap(), "-0.25");
        assert_eq!(Rational::new(1, 3).to_exact_decimal(), None);
    }

    #[test]
    fn rational_parsing() {
        let parse = Rational::parse_decimal_or_fraction;
        assert_eq!(parse("0.95").unwrap(), Rational::new(19, 20));
        assert_eq!(parse("3/4").unwrap(), Rational::new(3, 4));
        assert_eq!(parse("2").unwrap(), Rational::from_int(2));
        assert!(parse("abc").is_err());
        assert!(parse("1/0").is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Amplitude::zero().to_string(), "0");
        assert_eq!(Amplitude::one().to_string(), "1");
        assert_eq!(Amplitude::i().to_string(), "i");
        assert_eq!(Amplitude::inv_sqrt2().to_string(), "1/√2");
        assert_eq!(amp(1, 1, 2).to_string(), "(1+i)/2");
        assert_eq!(amp(0, -1, 0).to_string(), "-i");
        assert_eq!(amp(-1, 0, 3).to_string(), "-1/(2√2)");
    }
}
