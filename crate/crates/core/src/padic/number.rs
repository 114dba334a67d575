//! Capped relative-precision elements of `Q_p`.
//!
//! A nonzero value is stored as `p^v * u` where `u` is a unit known modulo
//! `p^N`; `N` is the relative precision. A value indistinguishable from zero
//! is stored with `N = 0` and `v = M`, meaning "zero modulo `p^M`".

use std::cmp::{max, min};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::error::{PadicError, Result};

/// A validated prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    /// Largest supported prime; residues are manipulated in `u128`.
    pub const MAX: u64 = u32::MAX as u64;

    pub fn new(p: u64) -> Result<Self> {
        if p > Self::MAX || !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        Ok(Self(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Minimal valuation of `x - 1` for units in `E_p`, and of `x` for
    /// arguments of `exp_p`: the integer cutoff of `p^(-1/(p-1))`.
    pub fn exp_threshold(self) -> i64 {
        if self.0 == 2 {
            2
        } else {
            1
        }
    }

    pub(crate) fn big(self) -> BigUint {
        BigUint::from(self.0)
    }

    pub(crate) fn pow(self, e: u32) -> BigUint {
        self.big().pow(e)
    }
}

impl TryFrom<u64> for Prime {
    type Error = PadicError;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Removes all factors of `p`, returning the count and the cofactor.
fn strip_p(p: &BigUint, mut n: BigUint) -> (u32, BigUint) {
    debug_assert!(!n.is_zero());
    let mut count = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (count, n);
        }
        n = q;
        count += 1;
    }
}

/// Inverse of a unit modulo `modulus`.
fn inverse_mod(unit: &BigUint, modulus: &BigUint) -> BigUint {
    if modulus.is_one() {
        return BigUint::zero();
    }
    let a = BigInt::from_biguint(Sign::Plus, unit.clone());
    let m = BigInt::from_biguint(Sign::Plus, modulus.clone());
    let egcd = a.extended_gcd(&m);
    debug_assert!(egcd.gcd.is_one(), "inverse of a non-unit");
    egcd.x
        .mod_floor(&m)
        .to_biguint()
        .expect("mod_floor is non-negative")
}

/// An element of `Q_p` with capped relative precision.
///
/// Equality (`==`) is representation equality; use
/// [`PadicNumber::eq_to_precision`] for comparison up to known digits.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNumber {
    prime: Prime,
    valuation: i64,
    unit: BigUint,
    precision: u32,
}

impl PadicNumber {
    /// Zero known modulo `p^absolute_precision`.
    pub fn zero(prime: Prime, absolute_precision: i64) -> Self {
        Self {
            prime,
            valuation: absolute_precision,
            unit: BigUint::zero(),
            precision: 0,
        }
    }

    pub fn one(prime: Prime, precision: u32) -> Self {
        Self::from_parts_unchecked(prime, 0, BigUint::one(), precision)
    }

    /// Builds `p^valuation * unit` with `unit` reduced modulo `p^precision`.
    pub fn from_parts(prime: Prime, valuation: i64, unit: BigUint, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(PadicError::PrecisionExhausted {
                context: "a nonzero value needs at least one digit".into(),
            });
        }
        let unit = unit % prime.pow(precision);
        if (&unit % prime.big()).is_zero() {
            return Err(PadicError::Parse(format!(
                "mantissa {unit} is divisible by {prime}"
            )));
        }
        Ok(Self::from_parts_unchecked(
            prime, valuation, unit, precision,
        ))
    }

    fn from_parts_unchecked(prime: Prime, valuation: i64, unit: BigUint, precision: u32) -> Self {
        Self {
            prime,
            valuation,
            unit,
            precision,
        }
    }

    /// Embeds an integer with `precision` relative digits.
    pub fn from_bigint(prime: Prime, n: &BigInt, precision: u32) -> Self {
        if n.is_zero() {
            return Self::zero(prime, precision as i64);
        }
        let (v, cofactor) = strip_p(&prime.big(), n.magnitude().clone());
        let modulus = prime.pow(precision);
        let mut unit = cofactor % &modulus;
        if n.sign() == Sign::Minus {
            unit = &modulus - unit;
        }
        Self::from_parts_unchecked(prime, v as i64, unit, precision)
    }

    pub fn from_i64(prime: Prime, n: i64, precision: u32) -> Self {
        Self::from_bigint(prime, &BigInt::from(n), precision)
    }

    /// Embeds a rational number with `precision` relative digits.
    pub fn from_rational(prime: Prime, r: &BigRational, precision: u32) -> Self {
        if r.numer().is_zero() {
            return Self::zero(prime, precision as i64);
        }
        let num = Self::from_bigint(prime, r.numer(), precision);
        let den = Self::from_bigint(prime, r.denom(), precision);
        num.checked_div(&den).expect("nonzero denominator")
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.precision == 0
    }

    /// `v(x)` for nonzero values; for zero, the absolute precision `M` of
    /// `O(p^M)`, which is a lower bound of the unknown true valuation.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Number of known base-`p` digits of the unit part.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The value is known modulo `p^absolute_precision`.
    pub fn absolute_precision(&self) -> i64 {
        self.valuation + self.precision as i64
    }

    /// Unit part, `0 < u < p^N` with `p ∤ u`; zero for zero values.
    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    /// `|x|_p` as a float (`0` for zero).
    pub fn norm(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            (self.prime.get() as f64).powi(-(self.valuation as i32))
        }
    }

    /// Reduces the relative precision to at most `precision` digits.
    pub fn with_precision(&self, precision: u32) -> Self {
        if self.is_zero() || precision >= self.precision {
            return self.clone();
        }
        if precision == 0 {
            return Self::zero(self.prime, self.valuation);
        }
        let unit = &self.unit % self.prime.pow(precision);
        Self::from_parts_unchecked(self.prime, self.valuation, unit, precision)
    }

    /// Forgets every digit at or beyond `p^absolute`.
    pub fn truncate_absolute(&self, absolute: i64) -> Self {
        if self.is_zero() {
            return Self::zero(self.prime, min(self.valuation, absolute));
        }
        if absolute <= self.valuation {
            return Self::zero(self.prime, absolute);
        }
        let rel = min(self.precision as i64, absolute - self.valuation) as u32;
        self.with_precision(rel)
    }

    /// Pads the unit with zero digits up to `precision` relative digits.
    ///
    /// The padded digits are not known; only iterations that re-derive them
    /// (Newton steps) may use this.
    pub(crate) fn extend_precision(&self, precision: u32) -> Self {
        if self.is_zero() || precision <= self.precision {
            return self.clone();
        }
        Self::from_parts_unchecked(self.prime, self.valuation, self.unit.clone(), precision)
    }

    /// Digits `x_0, x_1, …` of the unit part, low to high.
    pub fn digits(&self) -> Vec<u64> {
        let p = self.prime.big();
        let mut out = Vec::with_capacity(self.precision as usize);
        let mut rest = self.unit.clone();
        for _ in 0..self.precision {
            let (q, r) = rest.div_rem(&p);
            out.push(r.to_u64().expect("digit below p"));
            rest = q;
        }
        out
    }

    /// `γ(x)` together with the first `n` canonical digits (`x_0 > 0`).
    pub fn canonical_digits(&self, n: u32) -> Result<(i64, Vec<u64>)> {
        if self.is_zero() {
            return Err(PadicError::PrecisionExhausted {
                context: "zero has no canonical expansion".into(),
            });
        }
        if n > self.precision {
            return Err(PadicError::TooManyDigits {
                requested: n,
                available: self.precision,
            });
        }
        let mut digits = self.digits();
        digits.truncate(n as usize);
        Ok((self.valuation, digits))
    }

    /// `x mod p^j` for `x ∈ Z_p`.
    pub fn residue(&self, j: u32) -> Result<BigUint> {
        if self.valuation < 0 && !self.is_zero() {
            return Err(PadicError::OutOfDomain {
                function: "residue",
                reason: format!("valuation {} < 0", self.valuation),
            });
        }
        if self.absolute_precision() < j as i64 {
            return Err(PadicError::PrecisionExhausted {
                context: format!(
                    "residue mod {}^{j} needs {j} digits, value known mod {}^{}",
                    self.prime,
                    self.prime,
                    self.absolute_precision()
                ),
            });
        }
        if self.is_zero() || self.valuation >= j as i64 {
            return Ok(BigUint::zero());
        }
        let modulus = self.prime.pow(j);
        Ok((&self.unit * self.prime.pow(self.valuation as u32)) % modulus)
    }

    pub fn residue_u64(&self, j: u32) -> Result<u64> {
        self.residue(j)?
            .to_u64()
            .ok_or_else(|| PadicError::PrecisionExhausted {
                context: "residue does not fit in 64 bits".into(),
            })
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(PadicError::PrimeMismatch {
                left: self.prime.get(),
                right: other.prime.get(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let absolute = min(self.absolute_precision(), other.absolute_precision());
        if self.is_zero() {
            return Ok(other.truncate_absolute(absolute));
        }
        if other.is_zero() {
            return Ok(self.truncate_absolute(absolute));
        }
        let low = min(self.valuation, other.valuation);
        if low >= absolute {
            return Ok(Self::zero(self.prime, absolute));
        }
        let digits = (absolute - low) as u32;
        let modulus = self.prime.pow(digits);
        let shift = |x: &Self| -> BigUint {
            let s = (x.valuation - low) as u32;
            if s >= digits {
                BigUint::zero()
            } else {
                (&x.unit * self.prime.pow(s)) % &modulus
            }
        };
        let sum = (shift(self) + shift(other)) % &modulus;
        if sum.is_zero() {
            return Ok(Self::zero(self.prime, absolute));
        }
        let (t, unit) = strip_p(&self.prime.big(), sum);
        Ok(Self::from_parts_unchecked(
            self.prime,
            low + t as i64,
            unit,
            digits - t,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.prime, self.valuation + other.valuation));
        }
        let precision = min(self.precision, other.precision);
        let unit = (&self.unit * &other.unit) % self.prime.pow(precision);
        Ok(Self::from_parts_unchecked(
            self.prime,
            self.valuation + other.valuation,
            unit,
            precision,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if other.is_zero() {
            return Err(PadicError::DivisionByZero {
                prime: self.prime.get(),
                absolute_precision: other.valuation,
            });
        }
        if self.is_zero() {
            return Ok(Self::zero(self.prime, self.valuation - other.valuation));
        }
        let precision = min(self.precision, other.precision);
        let modulus = self.prime.pow(precision);
        let inv = inverse_mod(&(&other.unit % &modulus), &modulus);
        let unit = (&self.unit * inv) % modulus;
        Ok(Self::from_parts_unchecked(
            self.prime,
            self.valuation - other.valuation,
            unit,
            precision,
        ))
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one(self.prime, max(self.precision, 1)).checked_div(self)
    }

    fn neg_ref(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = self.prime.pow(self.precision);
        Self::from_parts_unchecked(
            self.prime,
            self.valuation,
            &modulus - &self.unit,
            self.precision,
        )
    }

    /// `x^e` by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.prime, max(self.precision, 1));
        if self.is_zero() {
            return if e == 0 {
                result
            } else {
                Self::zero(self.prime, self.valuation.saturating_mul(e as i64))
            };
        }
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `x^e` for signed exponents.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            self.pow(e.unsigned_abs()).inverse()
        }
    }

    /// Multiplies by `p^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        let mut out = self.clone();
        out.valuation += shift;
        out
    }

    /// True when `self - other` vanishes at the coarser of the two
    /// absolute precisions.
    pub fn eq_to_precision(&self, other: &Self) -> bool {
        match self.checked_sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// Valuation of `self - other` (a lower bound when they agree to
    /// precision).
    pub fn distance_valuation(&self, other: &Self) -> Result<i64> {
        Ok(self.checked_sub(other)?.valuation())
    }

    /// Whether the value is a unit in `Z_p` and known to at least one digit.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.valuation == 0
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicNumber({self})")
    }
}

impl fmt::Display for PadicNumber {
    /// `p^v * (x_0 + x_1*p + …) + O(p^M)` in compact digit form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime.get();
        if self.is_zero() {
            return write!(f, "O({p}^{})", self.valuation);
        }
        let mut first = true;
        for (j, d) in self.digits().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let e = self.valuation + j as i64;
            match e {
                0 => write!(f, "{d}")?,
                1 if d == 1 => write!(f, "{p}")?,
                1 => write!(f, "{d}*{p}")?,
                _ if d == 1 => write!(f, "{p}^{e}")?,
                _ => write!(f, "{d}*{p}^{e}")?,
            }
        }
        write!(f, " + O({p}^{})", self.absolute_precision())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            /// Panics on prime mismatch (and, for division, on a zero
            /// divisor); use the `checked_*` form to handle those.
            fn $method(self, rhs: &PadicNumber) -> PadicNumber {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: &PadicNumber) -> PadicNumber {
                (&self).$method(rhs)
            }
        }
        impl $trait<PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_ref()
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_ref()
    }
}

/// Membership of a value in the sets used throughout the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainFlag {
    /// `|x|_p ≤ 1`
    pub in_zp: bool,
    /// `|x|_p = 1`
    pub in_zp_star: bool,
    /// `|x|_p = 1` and `|x - 1|_p < p^(-1/(p-1))`
    pub in_ep: bool,
    /// `|x|_p < p^(-1/(p-1))`, the convergence ball of `exp_p`
    pub in_exp_domain: bool,
}

impl PadicNumber {
    /// Domain memberships, decided on the integer-power cutoff
    /// `v(·) ≥ 1` (odd `p`) or `v(·) ≥ 2` (`p = 2`).
    ///
    /// A membership that cannot be decided at the tracked precision is
    /// reported as `false`.
    pub fn domain_flags(&self) -> DomainFlag {
        let threshold = self.prime.exp_threshold();
        let in_zp = self.valuation >= 0;
        let in_zp_star = self.is_unit();
        let in_ep =
            in_zp_star && (self - &Self::one(self.prime, self.precision)).valuation() >= threshold;
        let in_exp_domain = self.valuation >= threshold;
        DomainFlag {
            in_zp,
            in_zp_star,
            in_ep,
            in_exp_domain,
        }
    }

    pub fn in_ep(&self) -> bool {
        self.domain_flags().in_ep
    }
}

/// Wire form: `{prime, valuation, digits (low to high), precision}`.
///
/// Zero modulo `p^M` is written with `valuation = M`, no digits and
/// `precision = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicRepr {
    pub prime: u64,
    pub valuation: i64,
    pub digits: Vec<u64>,
    pub precision: u32,
}

impl From<&PadicNumber> for PadicRepr {
    fn from(x: &PadicNumber) -> Self {
        PadicRepr {
            prime: x.prime.get(),
            valuation: x.valuation,
            digits: x.digits(),
            precision: x.precision,
        }
    }
}

impl From<PadicNumber> for PadicRepr {
    fn from(x: PadicNumber) -> Self {
        PadicRepr::from(&x)
    }
}

impl TryFrom<PadicRepr> for PadicNumber {
    type Error = PadicError;

    fn try_from(r: PadicRepr) -> Result<Self> {
        let prime = Prime::new(r.prime)?;
        if r.digits.len() != r.precision as usize {
            return Err(PadicError::Parse(format!(
                "{} digits given for precision {}",
                r.digits.len(),
                r.precision
            )));
        }
        if r.precision == 0 {
            return Ok(PadicNumber::zero(prime, r.valuation));
        }
        if r.digits[0] == 0 {
            return Err(PadicError::Parse("leading digit must be nonzero".into()));
        }
        let mut unit = BigUint::zero();
        for &d in r.digits.iter().rev() {
            if d >= prime.get() {
                return Err(PadicError::Parse(format!("digit {d} out of range")));
            }
            unit = unit * prime.big() + BigUint::from(d);
        }
        PadicNumber::from_parts(prime, r.valuation, unit, r.precision)
    }
}

impl Serialize for PadicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PadicRepr::deserialize(d)?;
        PadicNumber::try_from(repr).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn primes() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert_eq!(Prime::new(1), Err(PadicError::NotPrime(1)));
        assert_eq!(Prime::new(91), Err(PadicError::NotPrime(91)));
    }

    #[test]
    fn norm_of_twelve() {
        let x = PadicNumber::from_i64(p(3), 12, 10);
        assert_eq!(x.valuation(), 1);
        assert!((x.norm() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn half_in_q3() {
        let one = PadicNumber::one(p(3), 3);
        let two = PadicNumber::from_i64(p(3), 2, 3);
        let h = &one / &two;
        assert_eq!(h.unit(), &BigUint::from(14u32));
        assert_eq!(h.valuation(), 0);
    }

    #[test]
    fn additive_inverse_is_zero() {
        let x = PadicNumber::from_i64(p(5), 1234, 20);
        let z = &x + &(-&x);
        assert!(z.is_zero());
        assert_eq!(z.valuation(), 20);
    }

    #[test]
    fn cancellation_loses_relative_precision() {
        let a = PadicNumber::from_i64(p(3), 10, 8);
        let b = PadicNumber::from_i64(p(3), 1, 8);
        let d = &a - &b;
        assert_eq!(d.valuation(), 2);
        assert_eq!(d.precision(), 6);
        assert_eq!(d.unit(), &BigUint::one());
    }

    #[test]
    fn digits_of_25() {
        let x = PadicNumber::from_i64(p(3), 25, 3);
        assert_eq!(x.canonical_digits(3).unwrap(), (0, vec![1, 2, 2]));
        let y = PadicNumber::from_i64(p(3), 3, 1);
        assert_eq!(y.canonical_digits(1).unwrap(), (1, vec![1]));
        let one = PadicNumber::one(p(5), 4);
        assert_eq!(one.canonical_digits(4).unwrap(), (0, vec![1, 0, 0, 0]));
        assert!(matches!(
            x.canonical_digits(4),
            Err(PadicError::TooManyDigits { .. })
        ));
    }

    #[test]
    fn negative_and_rational_embedding() {
        let m1 = PadicNumber::from_i64(p(3), -1, 4);
        assert_eq!(m1.digits(), vec![2, 2, 2, 2]);
        let r = BigRational::new(BigInt::from(1), BigInt::from(9));
        let x = PadicNumber::from_rational(p(3), &r, 4);
        assert_eq!(x.valuation(), -2);
        assert_eq!(x.digits(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn division_errors() {
        let x = PadicNumber::one(p(3), 5);
        let z = PadicNumber::zero(p(3), 5);
        assert!(matches!(
            x.checked_div(&z),
            Err(PadicError::DivisionByZero { .. })
        ));
        let y = PadicNumber::one(p(5), 5);
        assert!(matches!(
            x.checked_add(&y),
            Err(PadicError::PrimeMismatch { left: 3, right: 5 })
        ));
    }

    #[test]
    fn domain_flag_examples() {
        let f = PadicNumber::from_i64(p(3), 4, 10).domain_flags();
        assert!(f.in_ep && f.in_zp_star && f.in_zp && !f.in_exp_domain);
        let f = PadicNumber::from_i64(p(3), 2, 10).domain_flags();
        assert!(f.in_zp_star && !f.in_ep);
        assert!(!PadicNumber::from_i64(p(2), 3, 10).in_ep());
        assert!(PadicNumber::from_i64(p(2), 5, 10).in_ep());
        assert!(
            PadicNumber::from_i64(p(2), 4, 10)
                .domain_flags()
                .in_exp_domain
        );
        assert!(
            !PadicNumber::from_i64(p(2), 2, 10)
                .domain_flags()
                .in_exp_domain
        );
    }

    #[test]
    fn residues() {
        let x = PadicNumber::from_i64(p(3), 100, 10);
        assert_eq!(x.residue_u64(3).unwrap(), 100 % 27);
        let y = PadicNumber::from_i64(p(3), 18, 2);
        assert_eq!(y.residue_u64(3).unwrap(), 18);
        assert_eq!(y.residue_u64(4).unwrap(), 18);
        assert!(y.residue(5).is_err());
    }

    #[test]
    fn repr_round_trip() {
        let r = BigRational::new(BigInt::from(-7), BigInt::from(45));
        let x = PadicNumber::from_rational(p(3), &r, 12);
        let json = serde_json::to_string(&x).unwrap();
        let back: PadicNumber = serde_json::from_str(&json).unwrap();
        assert_eq!(x, back);
        let z = PadicNumber::zero(p(3), 7);
        let back: PadicNumber = serde_json::from_str(&serde_json::to_string(&z).unwrap()).unwrap();
        assert_eq!(z, back);
    }

    #[test]
    fn display_form() {
        let x = PadicNumber::from_i64(p(3), 7, 3);
        assert_eq!(x.to_string(), "1 + 2*3 + O(3^3)");
        assert_eq!(PadicNumber::zero(p(5), 4).to_string(), "O(5^4)");
    }
}
