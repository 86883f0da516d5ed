//! Session scalars: exact big rationals or configurable-precision binary floats.
//!
//! Exact values support equality tests with no tolerance. Float values carry
//! their precision and compare within a tolerance of `2^(-precision/2)` by
//! default. Polynomial identities stay exact in exact mode; irrational
//! operations (`sqrt`, `exp`, `acosh`, ...) move an exact value to a float at
//! [`DEFAULT_PRECISION`] bits.

use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Exponent, Radix, RoundingMode, Sign as FloatSign};
use num::bigint::Sign as IntSign;
use num::traits::{One, Signed, Zero};
use num::{BigInt, BigRational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Precision, in bits, used when an exact value must leave the rationals.
pub const DEFAULT_PRECISION: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: std::cell::RefCell<Consts> =
        std::cell::RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// A real quantity in one of the two session modes.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(BigFloat),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    /// A float scalar holding the exact value of `r` rounded to `p` bits.
    pub fn float_from_rational(r: &BigRational, p: usize) -> Self {
        Scalar::Float(rational_to_bigfloat(r, p))
    }

    pub fn float_from_i64(n: i64, p: usize) -> Self {
        Scalar::Float(bigint_to_bigfloat(&BigInt::from(n), p))
    }

    /// Parses a decimal string (scientific notation allowed) at `p` bits.
    pub fn float_from_decimal(s: &str, p: usize) -> Result<Self> {
        let f = with_consts(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc));
        if f.is_nan() {
            return Err(Error::InvalidInput(format!("unparseable decimal {s:?}")));
        }
        Ok(Scalar::Float(f))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Mantissa precision in bits. `None` for exact values and for float
    /// zeros (the backend stores zero without a precision; it is an exact
    /// value in any case).
    pub fn precision(&self) -> Option<usize> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(f) => f.precision().filter(|p| *p > 0),
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// The comparison tolerance of this value: zero when exact, otherwise
    /// `2^(-p/2)` for precision `p`.
    pub fn tolerance(&self) -> Scalar {
        match self.precision() {
            None => Scalar::zero(),
            Some(p) => Scalar::Float(pow2(-((p / 2) as i64), p)),
        }
    }

    fn working_precision(&self, rhs: &Scalar) -> usize {
        match (self.precision(), rhs.precision()) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => DEFAULT_PRECISION,
        }
    }

    /// This value as a float at precision `p` (exact conversion then rounding).
    pub fn to_bigfloat(&self, p: usize) -> BigFloat {
        match self {
            Scalar::Exact(r) => rational_to_bigfloat(r, p),
            Scalar::Float(f) => f.clone(),
        }
    }

    /// Forces float representation at precision `p` (identity on floats).
    pub fn to_float(&self, p: usize) -> Scalar {
        Scalar::Float(self.to_bigfloat(p))
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => {
                let p = self.working_precision(rhs);
                Scalar::Float(self.to_bigfloat(p).add(&rhs.to_bigfloat(p), p, RM))
            }
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => {
                let p = self.working_precision(rhs);
                Scalar::Float(self.to_bigfloat(p).sub(&rhs.to_bigfloat(p), p, RM))
            }
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => {
                let p = self.working_precision(rhs);
                Scalar::Float(self.to_bigfloat(p).mul(&rhs.to_bigfloat(p), p, RM))
            }
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a / b),
            _ => {
                let p = self.working_precision(rhs);
                Scalar::Float(self.to_bigfloat(p).div(&rhs.to_bigfloat(p), p, RM))
            }
        })
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one().div(self)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(f) => Scalar::Float(f.neg()),
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => f.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(f) => f.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(f) => f.is_positive() && !f.is_zero(),
        }
    }

    /// Total order. Mixed modes compare through a float promotion.
    pub fn cmp_total(&self, rhs: &Scalar) -> Ordering {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                let p = self.working_precision(rhs).max(DEFAULT_PRECISION);
                let d = self.to_bigfloat(p).sub(&rhs.to_bigfloat(p), p, RM);
                if d.is_zero() {
                    Ordering::Equal
                } else if d.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn lt(&self, rhs: &Scalar) -> bool {
        self.cmp_total(rhs) == Ordering::Less
    }

    pub fn le(&self, rhs: &Scalar) -> bool {
        self.cmp_total(rhs) != Ordering::Greater
    }

    pub fn gt(&self, rhs: &Scalar) -> bool {
        self.cmp_total(rhs) == Ordering::Greater
    }

    pub fn ge(&self, rhs: &Scalar) -> bool {
        self.cmp_total(rhs) != Ordering::Less
    }

    pub fn max_of(&self, rhs: &Scalar) -> Scalar {
        if self.ge(rhs) {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    pub fn min_of(&self, rhs: &Scalar) -> Scalar {
        if self.le(rhs) {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    /// Mode-aware equality: exact equality for exact pairs, `|a-b| <= tol`
    /// otherwise, with `tol` the larger of the two operand tolerances.
    pub fn approx_eq(&self, rhs: &Scalar) -> bool {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let tol = self.tolerance().max_of(&rhs.tolerance());
                self.sub(rhs).abs().le(&tol)
            }
        }
    }

    /// Square root. Exact values with rational square roots stay exact;
    /// everything else is computed at the value's precision (or
    /// [`DEFAULT_PRECISION`] when leaving exact mode).
    pub fn sqrt(&self) -> Result<Scalar> {
        if self.is_negative() {
            return Err(Error::NegativeSqrt);
        }
        match self {
            Scalar::Exact(r) => {
                if r.is_zero() {
                    return Ok(Scalar::zero());
                }
                let (n, d) = (r.numer(), r.denom());
                let (sn, sd) = (n.sqrt(), d.sqrt());
                if &(&sn * &sn) == n && &(&sd * &sd) == d {
                    Ok(Scalar::Exact(BigRational::new(sn, sd)))
                } else {
                    let f = rational_to_bigfloat(r, DEFAULT_PRECISION);
                    Ok(Scalar::Float(f.sqrt(DEFAULT_PRECISION, RM)))
                }
            }
            Scalar::Float(f) => {
                let p = f.precision().unwrap_or(DEFAULT_PRECISION);
                Ok(Scalar::Float(f.sqrt(p, RM)))
            }
        }
    }

    fn float_unary(&self, f: impl Fn(&BigFloat, usize, &mut Consts) -> BigFloat) -> Scalar {
        let p = self.precision().unwrap_or(DEFAULT_PRECISION);
        let x = self.to_bigfloat(p);
        Scalar::Float(with_consts(|cc| f(&x, p, cc)))
    }

    pub fn exp(&self) -> Scalar {
        self.float_unary(|x, p, cc| x.exp(p, RM, cc))
    }

    pub fn ln(&self) -> Result<Scalar> {
        if !self.is_positive() {
            return Err(Error::InvalidInput("ln of a nonpositive value".into()));
        }
        Ok(self.float_unary(|x, p, cc| x.ln(p, RM, cc)))
    }

    /// Inverse hyperbolic cosine; requires `self >= 1`.
    pub fn acosh(&self) -> Result<Scalar> {
        if self.lt(&Scalar::one()) {
            return Err(Error::InvalidInput("acosh needs an argument >= 1".into()));
        }
        Ok(self.float_unary(|x, p, cc| x.acosh(p, RM, cc)))
    }

    /// `self^s` for positive `self`.
    pub fn powf(&self, s: &Scalar) -> Result<Scalar> {
        if !self.is_positive() {
            return Err(Error::InvalidInput("powf needs a positive base".into()));
        }
        let p = self.working_precision(s);
        let base = self.to_bigfloat(p);
        let e = s.to_bigfloat(p);
        Ok(Scalar::Float(with_consts(|cc| base.pow(&e, p, RM, cc))))
    }

    pub fn floor(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.floor()),
            Scalar::Float(f) => Scalar::Float(f.floor()),
        }
    }

    /// Reduces into `[0, modulus)` for positive `modulus`.
    pub fn rem_euclid(&self, modulus: &Scalar) -> Result<Scalar> {
        let q = self.div(modulus)?.floor();
        Ok(self.sub(&q.mul(modulus)))
    }

    /// Lossy conversion for drawing and diagnostics.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => {
                let p = 64;
                bigfloat_to_f64(&rational_to_bigfloat(r, p))
            }
            Scalar::Float(f) => bigfloat_to_f64(f),
        }
    }

    /// Wire format: `num/den` for exact values, shortest-practical decimal
    /// with a precision annotation (`...@bits`) for floats.
    pub fn to_wire(&self) -> String {
        match self {
            Scalar::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
            Scalar::Float(f) => {
                let p = f.precision().unwrap_or(DEFAULT_PRECISION);
                let digits = p * 30103 / 100000 + 3; // ceil(p log10 2) + margin
                format!("{}@{}", format_decimal(f, digits), p)
            }
        }
    }

    pub fn parse_wire(s: &str) -> Result<Scalar> {
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad numerator {num:?}")))?;
            let d: BigInt = den
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad denominator {den:?}")))?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Scalar::Exact(BigRational::new(n, d)));
        }
        if let Some((mant, bits)) = s.rsplit_once('@') {
            let p: usize = bits
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad precision {bits:?}")))?;
            return Scalar::float_from_decimal(mant, p);
        }
        // Bare string: integer or decimal literal.
        if let Ok(n) = s.trim().parse::<BigInt>() {
            return Ok(Scalar::Exact(BigRational::from_integer(n)));
        }
        Err(Error::InvalidInput(format!("unparseable scalar {s:?}")))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_wire())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_total(other) == Ordering::Equal
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_wire())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Scalar::parse_wire(&s).map_err(serde::de::Error::custom)
    }
}

/// `2^k` at precision `p`.
fn pow2(k: i64, p: usize) -> BigFloat {
    let mut x = BigFloat::from_word(1, p);
    x.set_exponent((k + 1) as Exponent);
    x
}

/// Exact conversion of a big integer to a binary float (then rounded to `p`).
pub(crate) fn bigint_to_bigfloat(n: &BigInt, p: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::new(p);
    }
    let (sign, words) = n.to_u64_digits();
    let bits = words.len() * 64;
    let s = if sign == IntSign::Minus {
        FloatSign::Neg
    } else {
        FloatSign::Pos
    };
    let mut f = BigFloat::from_words(&words, s, bits as Exponent);
    // from_words keeps the full mantissa; round to the working precision.
    f.set_precision(p.max(64), RM).expect("set precision");
    f
}

pub(crate) fn rational_to_bigfloat(r: &BigRational, p: usize) -> BigFloat {
    let guard = p + 32;
    let n = bigint_to_bigfloat(r.numer(), guard.max(r.numer().bits() as usize + 1));
    let d = bigint_to_bigfloat(r.denom(), guard.max(r.denom().bits() as usize + 1));
    n.div(&d, p, RM)
}

/// Exact rational value of a finite float: mantissa times a power of two.
pub(crate) fn bigfloat_to_rational(f: &BigFloat) -> Option<BigRational> {
    if f.is_zero() {
        return Some(BigRational::zero());
    }
    let (words, bits, sign, e, _) = f.as_raw_parts()?;
    let mut m = num::BigUint::zero();
    for w in words.iter().rev() {
        m = (m << 64) | num::BigUint::from(*w);
    }
    let mut n = BigInt::from(m);
    if sign == FloatSign::Neg {
        n = -n;
    }
    // value = mantissa * 2^(e - total_mantissa_bits); words carry the
    // mantissa left-aligned, so the bit length is words.len() * 64.
    let _ = bits;
    let shift = e as i64 - (words.len() as i64) * 64;
    let num = BigRational::from_integer(n);
    let two = BigRational::from_integer(BigInt::from(2));
    Some(if shift >= 0 {
        num * two.pow(shift as i32)
    } else {
        num / two.pow((-shift) as i32)
    })
}

fn bigfloat_to_f64(f: &BigFloat) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    format_decimal(f, 19).parse().unwrap_or(f64::NAN)
}

/// Scientific-notation decimal rendering with `digits` significant digits.
pub(crate) fn format_decimal(f: &BigFloat, digits: usize) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let (sign, mant, e) = with_consts(|cc| f.convert_to_radix(Radix::Dec, RoundingMode::None, cc))
        .expect("finite value");
    let mut ds: Vec<u8> = mant.into_iter().take(digits).collect();
    while ds.len() > 1 && ds.last() == Some(&0) {
        ds.pop();
    }
    let head = ds[0].to_string();
    let tail: String = ds[1..].iter().map(|d| (b'0' + d) as char).collect();
    let exp10 = e as i64 - 1; // value = 0.mant * 10^e = head.tail * 10^(e-1)
    let s = if tail.is_empty() {
        format!("{head}e{exp10}")
    } else {
        format!("{head}.{tail}e{exp10}")
    };
    if sign == FloatSign::Neg {
        format!("-{s}")
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    /// `10^-e` as an exact scalar, for absolute-error bounds in tests.
    fn tol(e: u32) -> Scalar {
        Scalar::Exact(BigRational::new(1.into(), BigInt::from(10).pow(e)))
    }

    #[test]
    fn exact_arithmetic_is_exact() {
        let a = sq(1, 3);
        let b = sq(1, 6);
        let c = a.add(&b);
        assert_eq!(c.as_exact().unwrap(), &BigRational::new(1.into(), 2.into()));
        assert!(c.sub(&sq(1, 2)).is_zero());
    }

    #[test]
    fn bigint_conversion_matches_parse() {
        let n: BigInt = "123456789012345678901234567890".parse().unwrap();
        let f = bigint_to_bigfloat(&n, 256);
        let g = with_consts(|cc| {
            BigFloat::parse("123456789012345678901234567890", Radix::Dec, 256, RM, cc)
        });
        assert_eq!(f, g);
        let m: BigInt = "-987654321".parse().unwrap();
        let f = bigint_to_bigfloat(&m, 128);
        let g = with_consts(|cc| BigFloat::parse("-987654321", Radix::Dec, 128, RM, cc));
        assert_eq!(f, g);
    }

    #[test]
    fn sqrt_exact_when_perfect_square() {
        let s = sq(9, 4).sqrt().unwrap();
        assert!(s.is_exact());
        assert!(s.sub(&sq(3, 2)).is_zero());
        // 5 is not a perfect square: falls to a 256-bit float.
        let s5 = Scalar::from_i64(5).sqrt().unwrap();
        assert_eq!(s5.precision(), Some(DEFAULT_PRECISION));
        let target =
            Scalar::float_from_decimal("2.23606797749978969640917366873127623544", 256).unwrap();
        assert!(s5.sub(&target).abs().lt(&tol(36)));
    }

    #[test]
    fn transcendental_values_match_references() {
        // 2*acosh(3/2) and the McShane-style term 1/(1+e^l) against
        // independently computed 40-digit references.
        let l = sq(3, 2).acosh().unwrap().mul(&Scalar::from_i64(2));
        let l_ref =
            Scalar::float_from_decimal("1.92484730023841378999103565369747369254074", 256).unwrap();
        assert!(l.sub(&l_ref).abs().lt(&tol(36)));

        let term = Scalar::one()
            .div(&Scalar::one().add(&l.exp()))
            .unwrap();
        let t_ref =
            Scalar::float_from_decimal("0.127322003750035050598471055211453960759897", 256)
                .unwrap();
        assert!(term.sub(&t_ref).abs().lt(&tol(36)));
    }

    #[test]
    fn tolerance_matches_precision() {
        let x = Scalar::float_from_i64(1, 256);
        let tol = x.tolerance();
        // 2^-128
        let t = tol.to_f64();
        assert!(t > 0.0 && t < 1e-38);
        assert!(Scalar::from_i64(7).tolerance().is_zero());
    }

    #[test]
    fn wire_round_trip() {
        let x = sq(-31, 75);
        assert_eq!(x.to_wire(), "-31/75");
        let back = Scalar::parse_wire(&x.to_wire()).unwrap();
        assert!(back.sub(&x).is_zero());

        let f = Scalar::float_from_rational(&BigRational::new(31.into(), 75.into()), 192);
        let w = f.to_wire();
        assert!(w.ends_with("@192"));
        let back = Scalar::parse_wire(&w).unwrap();
        // Enough digits are emitted that reparsing reproduces the float.
        assert_eq!(back.to_bigfloat(192), f.to_bigfloat(192));
    }

    #[test]
    fn rem_euclid_reduces_into_window() {
        let a = Scalar::from_i64(3);
        let x = sq(-7, 2);
        let r = x.rem_euclid(&a).unwrap();
        assert!(r.sub(&sq(5, 2)).is_zero());
        let y = sq(19, 2);
        assert!(y.rem_euclid(&a).unwrap().sub(&sq(1, 2)).is_zero());
    }

    #[test]
    fn float_to_rational_round_trip() {
        let r = BigRational::new(BigInt::from(-31), BigInt::from(64)); // dyadic: exact
        let f = rational_to_bigfloat(&r, 128);
        assert_eq!(bigfloat_to_rational(&f).unwrap(), r);
        let x = Scalar::from_i64(5).sqrt().unwrap().to_bigfloat(256);
        let back = bigfloat_to_rational(&x).unwrap();
        let err = Scalar::Exact(back.clone() * back - BigRational::from_integer(5.into()));
        assert!(err.abs().to_f64() < 1e-70);
    }

    #[test]
    fn mixed_mode_promotes_to_float() {
        let e = sq(1, 3);
        let f = Scalar::float_from_i64(1, 128);
        let s = e.add(&f);
        assert_eq!(s.precision(), Some(128));
        assert!(s.sub(&sq(4, 3)).abs().le(&s.tolerance()));
    }
}
