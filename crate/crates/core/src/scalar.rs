//! Scalar arithmetic: exact rationals, real quadratic extensions `Q(sqrt(d))`,
//! and a double-precision complex fallback.
//!
//! Every other module is generic over [`Scalar`]. The two exact kinds compare
//! structurally and make all verification checks decidable (a residual is
//! either exactly zero or it is not); [`ComplexFloat`] covers designs whose
//! coordinates do not live in any single quadratic field, such as regular
//! polygons with more than six vertices.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number with an arbitrary-precision reduced representation.
///
/// Backed by [`num_rational::BigRational`], which keeps the denominator
/// positive and the fraction fully reduced, so equality is structural.
pub type Rational = num_rational::BigRational;

/// Shorthand for building a [`Rational`] from machine integers.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Float math shim: `std` methods normally, `libm` on `no_std` targets.
pub(crate) mod fmath {
    #[cfg(feature = "std")]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    #[cfg(feature = "std")]
    pub fn cos(x: f64) -> f64 {
        x.cos()
    }
    #[cfg(feature = "std")]
    pub fn sin(x: f64) -> f64 {
        x.sin()
    }
    #[cfg(feature = "std")]
    pub fn abs(x: f64) -> f64 {
        x.abs()
    }

    #[cfg(all(not(feature = "std"), feature = "libm"))]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    #[cfg(all(not(feature = "std"), feature = "libm"))]
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }
    #[cfg(all(not(feature = "std"), feature = "libm"))]
    pub fn sin(x: f64) -> f64 {
        libm::sin(x)
    }
    #[cfg(all(not(feature = "std"), feature = "libm"))]
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }
}

/// Errors raised by scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarError {
    /// Inverse or division of an exact zero.
    DivisionByZero,
    /// Two [`QuadExt`] values carry different radicands, so they live in
    /// incompatible field contexts.
    MismatchedField { left: u64, right: u64 },
    /// Radicand is not a square-free integer >= 2.
    InvalidRadicand(u64),
    /// Demotion to `Rational` of a value with a nonzero radical part.
    NotRational,
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::DivisionByZero => write!(f, "division by zero"),
            ScalarError::MismatchedField { left, right } => write!(
                f,
                "incompatible field contexts: sqrt({left}) vs sqrt({right})"
            ),
            ScalarError::InvalidRadicand(d) => {
                write!(f, "radicand {d} is not a square-free integer >= 2")
            }
            ScalarError::NotRational => write!(f, "value has a nonzero radical part"),
        }
    }
}

impl core::error::Error for ScalarError {}

fn is_square_free(d: u64) -> bool {
    let mut p = 2u64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Element `a + b*sqrt(d)` of the real quadratic field `Q(sqrt(d))`.
///
/// `d` is square-free and at least 2. Values with `b == 0` are pure rationals
/// and store `d = 0` as a canonical "no radical" marker, so two
/// representations of the same number always compare equal and rationals mix
/// freely with elements of any one `Q(sqrt(d))`. Combining elements with two
/// different nonzero radicands is an error: the library works in one
/// quadratic field per computation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadExt {
    /// Builds `a + b*sqrt(d)`, canonicalizing `b == 0` to the rational form.
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, ScalarError> {
        if b.is_zero() {
            return Ok(QuadExt { a, b, d: 0 });
        }
        if d < 2 || !is_square_free(d) {
            return Err(ScalarError::InvalidRadicand(d));
        }
        Ok(QuadExt { a, b, d })
    }

    /// The element `sqrt(d)`.
    pub fn sqrt_of(d: u64) -> Result<Self, ScalarError> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadExt {
            a,
            b: Rational::zero(),
            d: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Radical coefficient `b`.
    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    /// Radicand `d`; 0 when the value is purely rational.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact demotion to `Rational`; errors if the radical part is nonzero.
    pub fn to_rational(&self) -> Result<Rational, ScalarError> {
        if self.is_rational() {
            Ok(self.a.clone())
        } else {
            Err(ScalarError::NotRational)
        }
    }

    fn joint_radicand(&self, rhs: &Self) -> Result<u64, ScalarError> {
        match (self.d, rhs.d) {
            (0, d) | (d, 0) => Ok(d),
            (l, r) if l == r => Ok(l),
            (l, r) => Err(ScalarError::MismatchedField { left: l, right: r }),
        }
    }

    fn canonical(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() {
            QuadExt { a, b, d: 0 }
        } else {
            QuadExt { a, b, d }
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let d = self.joint_radicand(rhs)?;
        Ok(Self::canonical(&self.a + &rhs.a, &self.b + &rhs.b, d))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let d = self.joint_radicand(rhs)?;
        Ok(Self::canonical(&self.a - &rhs.a, &self.b - &rhs.b, d))
    }

    /// `(a1 + b1*sqrt(d))(a2 + b2*sqrt(d)) = (a1*a2 + b1*b2*d) + (a1*b2 + b1*a2)*sqrt(d)`.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let d = self.joint_radicand(rhs)?;
        let dd = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &dd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(Self::canonical(a, b, d))
    }

    /// Multiplicative inverse `(a - b*sqrt(d)) / (a^2 - b^2*d)`.
    ///
    /// The Galois norm `a^2 - b^2*d` cannot vanish for a nonzero element
    /// because `d` is square-free.
    pub fn checked_inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let dd = Rational::from_integer(BigInt::from(self.d));
        let norm = &self.a * &self.a - &self.b * &self.b * &dd;
        debug_assert!(!norm.is_zero());
        Ok(Self::canonical(
            &self.a / &norm,
            -(&self.b / &norm),
            self.d,
        ))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.checked_mul(&rhs.checked_inv()?)
    }

    /// Value as a double: `a + b*sqrt(d)`.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * fmath::sqrt(self.d as f64)
    }

    /// Sign of the real number this element represents.
    pub fn signum(&self) -> Ordering {
        match (
            self.a.cmp(&Rational::zero()),
            self.b.cmp(&Rational::zero()),
        ) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (sa, sb) if sa == sb => sa,
            (sa, _) => {
                // a and b have opposite signs: compare a^2 against b^2*d.
                let dd = Rational::from_integer(BigInt::from(self.d));
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * &dd;
                match lhs.cmp(&rhs) {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                }
            }
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order as real numbers. Only meaningful within one field context;
/// comparing across distinct nonzero radicands panics like the arithmetic
/// operators do.
impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

macro_rules! quad_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$checked(&rhs)
                    .expect("QuadExt operands from incompatible field contexts")
            }
        }
        impl<'a> $trait<&'a QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &'a QuadExt) -> QuadExt {
                self.$checked(rhs)
                    .expect("QuadExt operands from incompatible field contexts")
            }
        }
    };
}

quad_binop!(Add, add, checked_add);
quad_binop!(Sub, sub, checked_sub);
quad_binop!(Mul, mul, checked_mul);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        Self::from_int(0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.d);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, -self.b.clone(), self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

/// Double-precision complex number for designs outside any quadratic field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFloat {
    pub re: f64,
    pub im: f64,
}

impl ComplexFloat {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexFloat { re, im }
    }

    pub fn real(re: f64) -> Self {
        ComplexFloat { re, im: 0.0 }
    }
}

impl Add for ComplexFloat {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ComplexFloat::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexFloat {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ComplexFloat::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for ComplexFloat {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ComplexFloat::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for ComplexFloat {
    type Output = Self;
    fn neg(self) -> Self {
        ComplexFloat::new(-self.re, -self.im)
    }
}

impl Zero for ComplexFloat {
    fn zero() -> Self {
        ComplexFloat::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl One for ComplexFloat {
    fn one() -> Self {
        ComplexFloat::new(1.0, 0.0)
    }
}

impl fmt::Display for ComplexFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}

/// The scalar contract shared by every module.
///
/// `EXACT` distinguishes the two regimes: exact scalars make all verification
/// checks decisions about literal zero, float scalars compare against a
/// tolerance. `mag` is the magnitude used for residual reporting (the larger
/// of |re| and |im| for complex values).
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    const EXACT: bool;

    /// The scalar `num/den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Complex conjugate; the identity on the exact (real) kinds.
    fn conj(&self) -> Self;

    /// Multiplicative inverse; errors on zero.
    fn inv(&self) -> Result<Self, ScalarError>;

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.clone() * rhs.inv()?)
    }

    /// Floating-point image of this scalar.
    fn to_float(&self) -> ComplexFloat;

    /// Magnitude for residual reports: max of component absolute values.
    fn mag(&self) -> f64;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        rat(num, den)
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn to_float(&self) -> ComplexFloat {
        ComplexFloat::real(rational_to_f64(self))
    }

    fn mag(&self) -> f64 {
        fmath::abs(rational_to_f64(self))
    }
}

impl Scalar for QuadExt {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        self.checked_inv()
    }

    fn to_float(&self) -> ComplexFloat {
        ComplexFloat::real(self.to_f64())
    }

    fn mag(&self) -> f64 {
        fmath::abs(self.to_f64())
    }
}

impl Scalar for ComplexFloat {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ComplexFloat::real(num as f64 / den as f64)
    }

    fn conj(&self) -> Self {
        ComplexFloat::new(self.re, -self.im)
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        let n = self.re * self.re + self.im * self.im;
        if n == 0.0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(ComplexFloat::new(self.re / n, -self.im / n))
    }

    fn to_float(&self) -> ComplexFloat {
        *self
    }

    fn mag(&self) -> f64 {
        let re = fmath::abs(self.re);
        let im = fmath::abs(self.im);
        if re >= im {
            re
        } else {
            im
        }
    }
}

/// Splits `m > 0` as `d * e^2` with `d` square-free; returns `(d, e)`.
pub(crate) fn square_free_split(m: u64) -> (u64, u64) {
    let mut d = m;
    let mut e = 1u64;
    let mut p = 2u64;
    while p * p <= d {
        while d % (p * p) == 0 {
            d /= p * p;
            e *= p;
        }
        p += 1;
    }
    (d, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: Rational, b: Rational, d: u64) -> QuadExt {
        QuadExt::new(a, b, d).unwrap()
    }

    #[test]
    fn sqrt3_squares_to_three() {
        let s3 = QuadExt::sqrt_of(3).unwrap();
        assert_eq!(s3.clone() * s3, QuadExt::from_int(3));
    }

    #[test]
    fn difference_of_squares() {
        let x = q(rat(1, 1), rat(1, 1), 3);
        let y = q(rat(1, 1), rat(-1, 1), 3);
        assert_eq!(x * y, QuadExt::from_int(-2));
    }

    #[test]
    fn rational_subfield_product() {
        let x = QuadExt::from_rational(rat(1, 2));
        let y = QuadExt::from_rational(rat(1, 3));
        assert_eq!(x * y, QuadExt::from_rational(rat(1, 6)));
    }

    #[test]
    fn inverse_of_two() {
        assert_eq!(
            QuadExt::from_int(2).checked_inv().unwrap(),
            QuadExt::from_rational(rat(1, 2))
        );
    }

    #[test]
    fn inverse_of_sqrt3() {
        let s3 = QuadExt::sqrt_of(3).unwrap();
        assert_eq!(
            s3.checked_inv().unwrap(),
            q(rat(0, 1), rat(1, 3), 3)
        );
    }

    #[test]
    fn inverse_of_one_plus_sqrt3() {
        let x = q(rat(1, 1), rat(1, 1), 3);
        let inv = x.checked_inv().unwrap();
        // Independent check: the product must be exactly 1.
        assert_eq!(x.checked_mul(&inv).unwrap(), QuadExt::one());
        assert_eq!(inv, q(rat(-1, 2), rat(1, 2), 3));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(
            QuadExt::zero().checked_inv(),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn mismatched_radicands_error() {
        let s3 = QuadExt::sqrt_of(3).unwrap();
        let s5 = QuadExt::sqrt_of(5).unwrap();
        assert_eq!(
            s3.checked_mul(&s5),
            Err(ScalarError::MismatchedField { left: 3, right: 5 })
        );
    }

    #[test]
    fn rationals_mix_with_any_radicand() {
        let s3 = QuadExt::sqrt_of(3).unwrap();
        let half = QuadExt::from_rational(rat(1, 2));
        assert_eq!(
            half.checked_mul(&s3).unwrap(),
            q(rat(0, 1), rat(1, 2), 3)
        );
    }

    #[test]
    fn radical_cancellation_restores_rational_form() {
        let s3 = QuadExt::sqrt_of(3).unwrap();
        let x = q(rat(2, 1), rat(1, 1), 3) - s3;
        assert_eq!(x.radicand(), 0);
        assert_eq!(x, QuadExt::from_int(2));
    }

    #[test]
    fn non_square_free_radicand_rejected() {
        assert_eq!(
            QuadExt::sqrt_of(12),
            Err(ScalarError::InvalidRadicand(12))
        );
        assert_eq!(QuadExt::sqrt_of(1), Err(ScalarError::InvalidRadicand(1)));
    }

    #[test]
    fn rational_reduction_is_canonical() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(-3, -6), rat(1, 2));
        assert_eq!(rat(0, 5), rat(0, 1));
    }

    #[test]
    fn to_float_values() {
        assert_eq!(QuadExt::from_rational(rat(1, 2)).to_f64(), 0.5);
        let s3 = QuadExt::sqrt_of(3).unwrap();
        assert!(fmath::abs(s3.to_f64() - 1.732_050_807_568_877_2) < 1e-12);
        let x = q(rat(-1, 2), rat(1, 2), 3);
        assert!(fmath::abs(x.to_f64() - 0.366_025_403_784_438_6) < 1e-12);
    }

    #[test]
    fn real_order_on_quadratic_elements() {
        let s3 = QuadExt::sqrt_of(3).unwrap();
        assert!(s3 > QuadExt::from_int(1));
        assert!(s3 < QuadExt::from_int(2));
        // 2 - sqrt(3) > 0, sqrt(3) - 2 < 0
        let x = QuadExt::from_int(2) - s3.clone();
        assert_eq!(x.signum(), Ordering::Greater);
        assert_eq!((-x).signum(), Ordering::Less);
    }

    #[test]
    fn complex_conjugation_negates_im() {
        let z = ComplexFloat::new(1.5, -2.0);
        assert_eq!(z.conj(), ComplexFloat::new(1.5, 2.0));
        let z_inv = z.inv().unwrap();
        let w = z * z_inv;
        assert!((w - ComplexFloat::one()).mag() < 1e-15);
    }

    #[test]
    fn square_free_split_examples() {
        assert_eq!(square_free_split(6), (6, 1));
        assert_eq!(square_free_split(12), (3, 2));
        assert_eq!(square_free_split(20), (5, 2));
        assert_eq!(square_free_split(30), (30, 1));
        assert_eq!(square_free_split(2), (2, 1));
    }
}
