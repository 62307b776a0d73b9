//! Precision-parameterized real scalars.
//!
//! Every scalar in the crate is a [`Real`], a binary floating-point number
//! whose mantissa width is fixed by the [`PrecisionContext`] it was created
//! under. Native binary64 behaviour is reproduced with a 53-bit mantissa, so
//! the same code paths serve both the double-precision runs and the
//! high-precision "exact arithmetic" runs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::ops::Pow;
use rug::Float;

use super::NumericsError;

/// Mantissa width of IEEE binary64.
pub const NATIVE_BITS: u32 = 53;

/// Smallest and largest supported decimal digit counts.
pub const MIN_DIGITS: u32 = 16;
pub const MAX_DIGITS: u32 = 4096;

/// Digit count used to scale `10^-(D-g)` tolerances in native mode.
const NATIVE_EFFECTIVE_DIGITS: u32 = 20;

/// Arithmetic environment: either native binary64 or `D` significant
/// decimal digits.
///
/// Contexts are plain values and are always passed explicitly, so runs at
/// different precisions can coexist in one process.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: Option<u32>,
}

impl PrecisionContext {
    /// Native binary64 arithmetic.
    pub const fn native() -> Self {
        Self { digits: None }
    }

    /// `digits` significant decimal digits; `0` selects native arithmetic.
    pub fn with_digits(digits: u32) -> Result<Self, NumericsError> {
        match digits {
            0 => Ok(Self::native()),
            MIN_DIGITS..=MAX_DIGITS => Ok(Self {
                digits: Some(digits),
            }),
            _ => Err(NumericsError::InvalidDigits(digits)),
        }
    }

    /// Decimal digit count, `None` for native arithmetic.
    pub fn digits(&self) -> Option<u32> {
        self.digits
    }

    pub fn is_native(&self) -> bool {
        self.digits.is_none()
    }

    /// High-precision runs (at least 64 digits) stand in for exact arithmetic.
    pub fn is_exact_mode(&self) -> bool {
        self.digits.is_some_and(|d| d >= 64)
    }

    /// Mantissa width in bits.
    pub fn bits(&self) -> u32 {
        match self.digits {
            None => NATIVE_BITS,
            Some(d) => (f64::from(d) * std::f64::consts::LOG2_10).ceil() as u32,
        }
    }

    /// Number of significant decimal digits used when printing values.
    /// Native values get 17, enough to round-trip binary64.
    pub fn output_digits(&self) -> usize {
        self.digits.map_or(17, |d| d as usize)
    }

    /// Digit count used to scale relative tolerances.
    pub fn effective_digits(&self) -> u32 {
        self.digits.unwrap_or(NATIVE_EFFECTIVE_DIGITS)
    }

    /// Module-wide tolerance: `10^-(D-8)`, or `1e-12` for native.
    pub fn tolerance(&self) -> Real {
        match self.digits {
            None => self.real(1e-12),
            Some(d) => self.pow10(-(d as i64 - 8)),
        }
    }

    /// `10^-(D-guard)` with the effective digit count.
    pub fn tolerance_with_guard(&self, guard: u32) -> Real {
        self.pow10(-(self.effective_digits() as i64 - guard as i64))
    }

    /// Unit roundoff `2^(1-bits)`.
    pub fn epsilon(&self) -> Real {
        Real(Float::with_val(self.bits(), 1) >> (self.bits() - 1))
    }

    pub fn zero(&self) -> Real {
        Real(Float::with_val(self.bits(), 0))
    }

    pub fn one(&self) -> Real {
        Real(Float::with_val(self.bits(), 1))
    }

    /// Lifts an `f64`. The conversion is exact whenever the context has at
    /// least 53 bits.
    pub fn real(&self, x: f64) -> Real {
        Real(Float::with_val(self.bits(), x))
    }

    pub fn int(&self, n: i64) -> Real {
        Real(Float::with_val(self.bits(), n))
    }

    /// `num / den` rounded once to the context.
    pub fn ratio(&self, num: i64, den: i64) -> Real {
        let n = Float::with_val(self.bits(), num);
        Real(Float::with_val(self.bits(), n / den))
    }

    /// `10^exp` correctly rounded.
    pub fn pow10(&self, exp: i64) -> Real {
        let ten = Float::with_val(self.bits(), 10);
        Real(Float::with_val(self.bits(), ten.pow(exp as i32)))
    }

    /// Parses a decimal string (`1.5`, `-2e-10`, ...) with a single rounding.
    pub fn parse(&self, s: &str) -> Result<Real, NumericsError> {
        let t = s.trim();
        Float::parse(t)
            .map(|p| Real(Float::with_val(self.bits(), p)))
            .map_err(|_| NumericsError::Parse(t.to_string()))
    }

    /// Re-rounds `x` to this context's precision.
    pub fn round(&self, x: &Real) -> Real {
        Real(Float::with_val(self.bits(), &x.0))
    }
}

impl fmt::Display for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.digits {
            None => write!(f, "native"),
            Some(d) => write!(f, "{d} digits"),
        }
    }
}

/// A real number carrying its own precision.
///
/// Binary operations round to the wider of the two operand precisions.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Real(Float);

impl Real {
    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Rounds to the nearest binary64 value, keeping this precision.
    pub fn to_native(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.to_f64()))
    }

    /// Largest binary64 value not exceeding `self`.
    pub fn native_floor(&self) -> Real {
        let mut f = self.0.to_f64();
        if Float::with_val(self.prec(), f) > self.0 {
            f = next_down(f);
        }
        Real(Float::with_val(self.prec(), f))
    }

    pub fn sqrt(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn abs(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.abs_ref()))
    }

    pub fn recip(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.recip_ref()))
    }

    pub fn square(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.square_ref()))
    }

    /// `sqrt(self^2 + other^2)` without intermediate overflow.
    pub fn hypot(&self, other: &Real) -> Real {
        let prec = self.prec().max(other.prec());
        Real(Float::with_val(prec, self.0.hypot_ref(&other.0)))
    }

    pub fn powi(&self, n: i32) -> Real {
        Real(Float::with_val(self.prec(), (&self.0).pow(n)))
    }

    /// Base-10 logarithm, as `f64` (used for reporting only).
    pub fn log10_f64(&self) -> f64 {
        Float::with_val(self.prec(), self.0.abs_ref()).log10().to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Greater)
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Less)
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    /// Magnitude with the sign of `sign` (Fortran `SIGN`).
    pub fn with_sign_of(&self, sign: &Real) -> Real {
        if sign.is_negative() {
            -self.abs()
        } else {
            self.abs()
        }
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    /// `|self - other| / |other|`, or `|self - other|` when `other` is zero.
    pub fn rel_diff(&self, other: &Real) -> Real {
        let d = (self - other).abs();
        if other.is_zero() {
            d
        } else {
            d / other.abs()
        }
    }

    pub fn zero_like(&self) -> Real {
        Real(Float::with_val(self.prec(), 0))
    }

    pub fn one_like(&self) -> Real {
        Real(Float::with_val(self.prec(), 1))
    }
}

fn next_down(x: f64) -> f64 {
    if x.is_nan() || x == f64::NEG_INFINITY {
        return x;
    }
    if x == 0.0 {
        return -f64::from_bits(1);
    }
    let bits = x.to_bits();
    if x > 0.0 {
        f64::from_bits(bits - 1)
    } else {
        f64::from_bits(bits + 1)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        f.write_str(&self.to_decimal(digits))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $asg:ident, $asg_method:ident, $op:tt) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let prec = self.0.prec().max(rhs.0.prec());
                Real(Float::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self $op &rhs
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                &self $op rhs
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                &self $op &rhs
            }
        }
        impl $tr<f64> for &Real {
            type Output = Real;
            fn $method(self, rhs: f64) -> Real {
                Real(Float::with_val(self.0.prec(), &self.0 $op rhs))
            }
        }
        impl $tr<f64> for Real {
            type Output = Real;
            fn $method(self, rhs: f64) -> Real {
                &self $op rhs
            }
        }
        impl $asg<&Real> for Real {
            fn $asg_method(&mut self, rhs: &Real) {
                *self = &*self $op rhs;
            }
        }
        impl $asg<Real> for Real {
            fn $asg_method(&mut self, rhs: Real) {
                *self = &*self $op &rhs;
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +);
binop!(Sub, sub, SubAssign, sub_assign, -);
binop!(Mul, mul, MulAssign, mul_assign, *);
binop!(Div, div, DivAssign, div_assign, /);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(Float::with_val(self.0.prec(), -&self.0))
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl std::iter::Sum for Real {
    /// Panics on an empty iterator: the precision would be unknown.
    fn sum<I: Iterator<Item = Real>>(mut iter: I) -> Real {
        let first = iter.next().expect("sum of an empty sequence of Real");
        iter.fold(first, |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_validation() {
        assert!(PrecisionContext::with_digits(0).unwrap().is_native());
        assert!(PrecisionContext::with_digits(15).is_err());
        assert!(PrecisionContext::with_digits(4097).is_err());
        assert_eq!(PrecisionContext::with_digits(128).unwrap().bits(), 426);
        assert!(PrecisionContext::with_digits(64).unwrap().is_exact_mode());
        assert!(!PrecisionContext::with_digits(32).unwrap().is_exact_mode());
    }

    #[test]
    fn native_matches_binary64() {
        let ctx = PrecisionContext::native();
        let a = ctx.real(0.1);
        let b = ctx.real(0.2);
        assert_eq!((&a + &b).to_f64(), 0.1 + 0.2);
        assert_eq!((&a / &b).to_f64(), 0.1 / 0.2);
        assert_eq!(ctx.real(2.0).sqrt().to_f64(), 2f64.sqrt());
    }

    #[test]
    fn parse_and_print_roundtrip() {
        let ctx = PrecisionContext::with_digits(50).unwrap();
        let x = ctx.ratio(1, 3);
        let s = x.to_decimal(ctx.output_digits());
        let y = ctx.parse(&s).unwrap();
        assert!(x.rel_diff(&y) < ctx.pow10(-48));
        assert!(ctx.parse("not a number").is_err());
    }

    #[test]
    fn native_floor_never_exceeds() {
        let ctx = PrecisionContext::with_digits(40).unwrap();
        let x = ctx.ratio(1, 3);
        let f = x.native_floor();
        assert!(f <= x);
        assert_eq!(f.to_f64(), f.to_native().to_f64());
        let g = ctx.real(0.5);
        assert_eq!(g.native_floor(), g);
    }

    #[test]
    fn tolerance_convention() {
        let ctx = PrecisionContext::with_digits(128).unwrap();
        assert_eq!(ctx.tolerance(), ctx.pow10(-120));
        assert_eq!(PrecisionContext::native().tolerance(), 1e-12);
    }

    /// Elementary operations at D digits agree with 2D digits to D-4 digits.
    #[test]
    fn agreement_with_doubled_precision() {
        for d in [16u32, 32, 64, 128] {
            let lo = PrecisionContext::with_digits(d).unwrap();
            let hi = PrecisionContext::with_digits(2 * d).unwrap();
            let tol = hi.pow10(-(d as i64 - 4));
            let (a_lo, b_lo) = (lo.ratio(2, 7), lo.ratio(-13, 11));
            let (a_hi, b_hi) = (hi.round(&a_lo), hi.round(&b_lo));
            let pairs = [
                (&a_lo + &b_lo, &a_hi + &b_hi),
                (&a_lo - &b_lo, &a_hi - &b_hi),
                (&a_lo * &b_lo, &a_hi * &b_hi),
                (&a_lo / &b_lo, &a_hi / &b_hi),
                (a_lo.sqrt(), a_hi.sqrt()),
            ];
            for (l, h) in pairs {
                assert!(hi.round(&l).rel_diff(&h) < tol, "d={d}");
            }
        }
    }
}
