//! Exact binary rationals `m * 2^e`.
//!
//! Every value is kept in canonical form: the mantissa is odd, or the value
//! is zero and stored as `0 * 2^0`. Addition, subtraction, multiplication and
//! comparison never round.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    mantissa: BigInt,
    exponent: i64,
}

impl DyadicRational {
    pub fn new(mantissa: impl Into<BigInt>, exponent: i64) -> Self {
        let mut mantissa = mantissa.into();
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        mantissa >>= tz;
        Self {
            mantissa,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Self {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self::pow2(0)
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(v, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Self {
            mantissa: BigInt::one(),
            exponent: e,
        }
    }

    /// Exact value of a finite `f64`; every finite double is dyadic.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let negative = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let m = BigInt::from(m);
        Some(Self::new(if negative { -m } else { m }, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiply by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    /// `floor(log2 |self|)`, or `None` for zero.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.mantissa.bits() as i64 - 1 + self.exponent)
    }

    /// Whether the value is an integer multiple of `2^k`.
    pub fn is_multiple_of_pow2(&self, k: i64) -> bool {
        self.is_zero() || self.exponent >= k
    }

    /// `floor(self / 2^k)` as an integer.
    pub fn floor_div_pow2(&self, k: i64) -> BigInt {
        let shift = self.exponent - k;
        if shift >= 0 {
            &self.mantissa << (shift as usize)
        } else {
            // Arithmetic right shift on BigInt rounds toward negative infinity.
            self.mantissa.div_floor(&(BigInt::one() << ((-shift) as usize)))
        }
    }

    /// The smallest multiple of `2^k` that is strictly greater than `self`.
    pub fn next_multiple_of_pow2(&self, k: i64) -> Self {
        let q = self.floor_div_pow2(k) + 1;
        Self::new(q, k)
    }

    /// Exact integer value when the exponent is non-negative.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.exponent >= 0 {
            Some(&self.mantissa << (self.exponent as usize))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Keep the top 64 bits with a sticky bit so the final conversion
        // rounds once.
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 64).max(0);
        let mag = self.mantissa.magnitude();
        let mut top = (mag >> (drop as usize)).to_u64().unwrap_or(u64::MAX);
        if drop > 0 && mag.trailing_zeros().unwrap_or(0) < drop as u64 {
            top |= 1;
        }
        let mut v = top as f64;
        if self.mantissa.is_negative() {
            v = -v;
        }
        // two factors, the first exact, so at most one rounding happens
        let e = self.exponent + drop;
        let first = e.clamp(-1022, 1023);
        let rest = (e - first).clamp(-2000, 2000);
        v * 2f64.powi(first as i32) * 2f64.powi(rest as i32)
    }

    /// Exact decimal expansion (dyadic rationals always terminate in base 10).
    pub fn to_decimal_string(&self) -> String {
        if self.exponent >= 0 {
            return (&self.mantissa << (self.exponent as usize)).to_string();
        }
        let places = (-self.exponent) as usize;
        // m / 2^p = m * 5^p / 10^p
        let scaled = self.mantissa.abs() * num_traits::pow(BigInt::from(5), places);
        let digits = scaled.to_string();
        let (int_part, frac_part) = if digits.len() > places {
            let (a, b) = digits.split_at(digits.len() - places);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat(places - digits.len()), digits))
        };
        let frac_part = frac_part.trim_end_matches('0');
        let sign = if self.mantissa.sign() == Sign::Minus { "-" } else { "" };
        if frac_part.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << ((self.exponent - e) as usize);
        let b = &other.mantissa << ((other.exponent - e) as usize);
        (a, b, e)
    }
}

impl Default for DyadicRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for DyadicRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigInt> for DyadicRational {
    fn from(v: BigInt) -> Self {
        Self::new(v, 0)
    }
}

impl fmt::Debug for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mantissa.sign(), other.mantissa.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;
    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(rhs);
        DyadicRational::new(a + b, e)
    }
}

impl Sub for &DyadicRational {
    type Output = DyadicRational;
    fn sub(self, rhs: &DyadicRational) -> DyadicRational {
        self + &(-rhs)
    }
}

impl Mul for &DyadicRational {
    type Output = DyadicRational;
    fn mul(self, rhs: &DyadicRational) -> DyadicRational {
        if self.is_zero() || rhs.is_zero() {
            return DyadicRational::zero();
        }
        // product of odd mantissas is odd, so the result is already canonical
        DyadicRational {
            mantissa: &self.mantissa * &rhs.mantissa,
            exponent: self.exponent + rhs.exponent,
        }
    }
}

impl Neg for &DyadicRational {
    type Output = DyadicRational;
    fn neg(self) -> DyadicRational {
        DyadicRational {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DyadicRational {
            type Output = DyadicRational;
            fn $m(self, rhs: DyadicRational) -> DyadicRational {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&DyadicRational> for DyadicRational {
            type Output = DyadicRational;
            fn $m(self, rhs: &DyadicRational) -> DyadicRational {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DyadicRational {
    type Output = DyadicRational;
    fn neg(self) -> DyadicRational {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(m: i64, e: i64) -> DyadicRational {
        DyadicRational::new(m, e)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(d(12, 0), d(3, 2));
        assert_eq!(d(12, 0).mantissa(), &BigInt::from(3));
        assert_eq!(d(12, 0).exponent(), 2);
        assert_eq!(d(0, 17).exponent(), 0);
        assert_eq!(d(-8, -3), DyadicRational::from_int(-1));
    }

    #[test]
    fn ordering_and_arithmetic() {
        let half = d(1, -1);
        let three_quarters = d(3, -2);
        assert!(half < three_quarters);
        assert!(d(-1, 5) < d(1, -40));
        assert_eq!(&half + &d(1, -2), three_quarters);
        assert_eq!(&half * &half, d(1, -2));
        assert_eq!(&half - &half, DyadicRational::zero());
    }

    #[test]
    fn floor_and_next_multiple() {
        assert_eq!(d(5, 0).floor_div_pow2(1), BigInt::from(2));
        assert_eq!(d(-5, 0).floor_div_pow2(1), BigInt::from(-3));
        assert_eq!(d(3, -2).floor_div_pow2(-1), BigInt::from(1));
        assert_eq!(DyadicRational::zero().next_multiple_of_pow2(2), d(4, 0));
        assert_eq!(d(4, 0).next_multiple_of_pow2(2), d(8, 0));
        assert_eq!(d(1, -1).next_multiple_of_pow2(-1), d(1, 0));
        assert_eq!(d(5, -3).floor_log2(), Some(-1));
    }

    #[test]
    fn f64_round_trip_and_decimal() {
        for v in [0.0, 1.0, -2.5, 0.1, 1e-300, 5e-324, 123456789.125] {
            let x = DyadicRational::from_f64(v).unwrap();
            assert_eq!(x.to_f64(), v);
        }
        assert_eq!(d(3, -2).to_string(), "0.75");
        assert_eq!(d(-21, -2).to_string(), "-5.25");
        assert_eq!(d(3, 3).to_string(), "24");
        assert_eq!(d(1, -10).to_string(), "0.0009765625");
    }

    proptest! {
        #[test]
        fn add_sub_round_trip(am in -1_000_000i64..1_000_000, ae in -40i64..40,
                              bm in -1_000_000i64..1_000_000, be in -40i64..40) {
            let a = d(am, ae);
            let b = d(bm, be);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!((&a + &b).to_f64(), a.to_f64() + b.to_f64());
        }

        #[test]
        fn ordering_matches_f64(am in -1_000_000i64..1_000_000, ae in -30i64..30,
                                bm in -1_000_000i64..1_000_000, be in -30i64..30) {
            let a = d(am, ae);
            let b = d(bm, be);
            prop_assert_eq!(a.partial_cmp(&b), a.to_f64().partial_cmp(&b.to_f64()));
        }
    }
}
