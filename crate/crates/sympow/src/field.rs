//! Ground fields and exact scalar arithmetic.
//!
//! Three fields are supported: the rationals `Q`, the Gaussian rationals
//! `Q(i)`, and prime fields `F_p` for a `u64` prime `p`. Scalars carry their
//! field with them; mixing scalars from different fields in arithmetic is a
//! programming error and panics. Fallible code paths (parsing, user input)
//! validate fields before doing arithmetic.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::Error;

/// Deterministic Miller-Rabin for `u64` inputs.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This base set is deterministic for all n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128) % p as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse mod a prime, via Fermat. Returns `None` for zero.
pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// One of the supported ground fields.
///
/// Construct prime fields through [`Field::prime`], which checks primality;
/// the `Fp` payload is trusted everywhere else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Qi,
    Fp(u64),
}

impl Field {
    /// Checked constructor for `F_p`.
    pub fn prime(p: u64) -> Result<Field, Error> {
        if is_prime_u64(p) {
            Ok(Field::Fp(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Short tag used in JSON and error messages: `Q`, `Qi`, `F5`, ...
    pub fn tag(&self) -> String {
        match self {
            Field::Q => "Q".to_string(),
            Field::Qi => "Qi".to_string(),
            Field::Fp(p) => format!("F{p}"),
        }
    }

    /// Inverse of [`Field::tag`].
    pub fn from_tag(s: &str) -> Result<Field, Error> {
        match s {
            "Q" => Ok(Field::Q),
            "Qi" => Ok(Field::Qi),
            _ => {
                let rest = s
                    .strip_prefix('F')
                    .ok_or_else(|| Error::Parse(format!("unknown field tag {s:?}")))?;
                let p: u64 = rest
                    .parse()
                    .map_err(|_| Error::Parse(format!("unknown field tag {s:?}")))?;
                Field::prime(p)
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Qi => Scalar::Gaussian {
                re: BigRational::from_integer(BigInt::from(v)),
                im: BigRational::zero(),
            },
            Field::Fp(p) => {
                let value = (v as i128).rem_euclid(*p as i128) as u64;
                Scalar::Fp { value, p: *p }
            }
        }
    }

    /// Convenience rational constructor; errors on zero denominator or a
    /// field that cannot hold fractions.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar, Error> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        n.div(&d)
    }

    /// Parse the canonical scalar grammar for this field.
    ///
    /// `Q`: `-3`, `3/4`. `Qi`: a rational, or `a+bi` / `a-bi` / `bi` / `i` /
    /// `-i` with rational parts. `Fp`: `r mod p` or a bare integer, reduced.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, Error> {
        let s = s.trim();
        match self {
            Field::Q => Ok(Scalar::Rational(parse_rational(s)?)),
            Field::Qi => parse_gaussian(s),
            Field::Fp(p) => parse_fp(s, *p),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let num = BigInt::from_str(s).map_err(|_| bad())?;
            Ok(BigRational::from_integer(num))
        }
    }
}

fn parse_gaussian(s: &str) -> Result<Scalar, Error> {
    match s.strip_suffix('i') {
        None => {
            let re = parse_rational(s)?;
            Ok(Scalar::Gaussian { re, im: BigRational::zero() })
        }
        Some(body) => {
            // Split at the sign separating real and imaginary parts. Signs
            // inside rationals only occur at position 0, so any '+' or '-'
            // past the first byte is the separator.
            let bytes = body.as_bytes();
            let split = (1..bytes.len()).find(|&k| bytes[k] == b'+' || bytes[k] == b'-');
            let (re_str, im_str) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("", body),
            };
            let re = if re_str.is_empty() { BigRational::zero() } else { parse_rational(re_str)? };
            let im = match im_str {
                "" | "+" => BigRational::one(),
                "-" => -BigRational::one(),
                t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
            };
            Ok(Scalar::Gaussian { re, im })
        }
    }
}

fn parse_fp(s: &str, p: u64) -> Result<Scalar, Error> {
    let body = match s.split_once(" mod ") {
        Some((r, m)) => {
            let m: u64 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in {s:?}")))?;
            if m != p {
                return Err(Error::Parse(format!("modulus {m} does not match field F{p}")));
            }
            r.trim()
        }
        None => s,
    };
    let v = BigInt::from_str(body).map_err(|_| Error::Parse(format!("not an integer: {body:?}")))?;
    let p_big = BigInt::from(p);
    let r = ((v % &p_big) + &p_big) % &p_big;
    let (_, digits) = r.to_u64_digits();
    let value = digits.first().copied().unwrap_or(0);
    Ok(Scalar::Fp { value, p })
}

/// An exact field element. The variant fixes the field; see [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Gaussian { re: BigRational, im: BigRational },
    Fp { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Q,
            Scalar::Gaussian { .. } => Field::Qi,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Gaussian { re, im } => re.is_zero() && im.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Gaussian { re, im } => re.is_one() && im.is_zero(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; `Err(DivisionByZero)` on zero.
    pub fn inv(&self) -> Result<Scalar, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Gaussian { re, im } => {
                let norm = re * re + im * im;
                Scalar::Gaussian { re: re / &norm, im: -(im / &norm) }
            }
            Scalar::Fp { value, p } => Scalar::Fp { value: inv_mod(*value, *p).unwrap(), p: *p },
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        Ok(self * &rhs.inv()?)
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Embed a rational into `Q(i)`; identity on Gaussian scalars.
    pub fn to_gaussian(&self) -> Result<Scalar, Error> {
        match self {
            Scalar::Rational(r) => Ok(Scalar::Gaussian { re: r.clone(), im: BigRational::zero() }),
            Scalar::Gaussian { .. } => Ok(self.clone()),
            Scalar::Fp { .. } => Err(Error::UnsupportedField(self.field())),
        }
    }

    /// Canonical string form; inverse of [`Field::parse_scalar`].
    pub fn canonical(&self) -> String {
        self.to_string()
    }

    fn same_field(&self, rhs: &Scalar) -> bool {
        self.field() == rhs.field()
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

struct RatDisplay<'a>(&'a BigRational);

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(self.0, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => fmt_rational(r, f),
            Scalar::Gaussian { re, im } => {
                if im.is_zero() {
                    fmt_rational(re, f)
                } else if re.is_zero() {
                    write!(f, "{}i", RatDisplay(im))
                } else if im.is_negative() {
                    write!(f, "{}-{}i", RatDisplay(re), RatDisplay(&-im))
                } else {
                    write!(f, "{}+{}i", RatDisplay(re), RatDisplay(im))
                }
            }
            Scalar::Fp { value, p } => write!(f, "{value} mod {p}"),
        }
    }
}

macro_rules! mismatch {
    ($lhs:expr, $rhs:expr) => {
        panic!(
            "scalar arithmetic across fields: {} vs {}",
            $lhs.field(),
            $rhs.field()
        )
    };
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Gaussian { re: ar, im: ai }, Scalar::Gaussian { re: br, im: bi }) => {
                Scalar::Gaussian { re: ar + br, im: ai + bi }
            }
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Scalar::Fp { value: add_mod(*a, *b, *p), p: *p }
            }
            _ => mismatch!(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Gaussian { re: ar, im: ai }, Scalar::Gaussian { re: br, im: bi }) => {
                Scalar::Gaussian { re: ar - br, im: ai - bi }
            }
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Scalar::Fp { value: sub_mod(*a, *b, *p), p: *p }
            }
            _ => mismatch!(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Gaussian { re: ar, im: ai }, Scalar::Gaussian { re: br, im: bi }) => {
                Scalar::Gaussian { re: ar * br - ai * bi, im: ar * bi + ai * br }
            }
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Scalar::Fp { value: mul_mod(*a, *b, *p), p: *p }
            }
            _ => mismatch!(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Gaussian { re, im } => Scalar::Gaussian { re: -re, im: -im },
            Scalar::Fp { value, p } => Scalar::Fp { value: sub_mod(0, *value, *p), p: *p },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if !self.same_field(rhs) {
            mismatch!(self, rhs);
        }
        let tmp = &*self + rhs;
        *self = tmp;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if !self.same_field(rhs) {
            mismatch!(self, rhs);
        }
        let tmp = &*self - rhs;
        *self = tmp;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Field::Q.from_i64(v)
    }

    #[test]
    fn primality() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(5).is_ok());
        assert!(Field::prime(7919).is_ok());
        assert!(Field::prime(1_000_000_007).is_ok());
        assert!(matches!(Field::prime(1), Err(Error::NotPrime(1))));
        assert!(matches!(Field::prime(4), Err(Error::NotPrime(4))));
        assert!(matches!(Field::prime(561), Err(Error::NotPrime(561)))); // Carmichael
    }

    #[test]
    fn rational_parse_display() {
        let f = Field::Q;
        for (input, canon) in [("3", "3"), ("-3", "-3"), ("3/4", "3/4"), ("6/8", "3/4"), ("6/-8", "-3/4"), ("0/5", "0")] {
            let s = f.parse_scalar(input).unwrap();
            assert_eq!(s.canonical(), canon);
            assert_eq!(f.parse_scalar(&s.canonical()).unwrap(), s);
        }
        assert!(f.parse_scalar("1/0").is_err());
        assert!(f.parse_scalar("x").is_err());
        assert!(f.parse_scalar("1.5").is_err());
    }

    #[test]
    fn gaussian_parse_display() {
        let f = Field::Qi;
        for (input, canon) in [
            ("3", "3"),
            ("3+4i", "3+4i"),
            ("3-4i", "3-4i"),
            ("i", "1i"),
            ("-i", "-1i"),
            ("1i", "1i"),
            ("-3i", "-3i"),
            ("1/2-3/4i", "1/2-3/4i"),
            ("0+0i", "0"),
            ("5+0i", "5"),
            ("0+2i", "2i"),
        ] {
            let s = f.parse_scalar(input).unwrap();
            assert_eq!(s.canonical(), canon, "input {input:?}");
            assert_eq!(f.parse_scalar(&s.canonical()).unwrap(), s);
        }
        assert!(f.parse_scalar("i+3").is_err());
    }

    #[test]
    fn fp_parse_display() {
        let f = Field::prime(5).unwrap();
        for (input, canon) in [("3", "3 mod 5"), ("8", "3 mod 5"), ("-1", "4 mod 5"), ("3 mod 5", "3 mod 5"), ("0", "0 mod 5")] {
            let s = f.parse_scalar(input).unwrap();
            assert_eq!(s.canonical(), canon, "input {input:?}");
            assert_eq!(f.parse_scalar(&s.canonical()).unwrap(), s);
        }
        assert!(f.parse_scalar("3 mod 7").is_err());
        assert!(Field::from_tag("F4").is_err());
        assert_eq!(Field::from_tag("F5").unwrap(), f);
    }

    #[test]
    fn exact_arithmetic() {
        let half = Field::Q.ratio(1, 2).unwrap();
        let third = Field::Q.ratio(1, 3).unwrap();
        assert_eq!((&half + &third).canonical(), "5/6");
        assert_eq!((&half * &third).canonical(), "1/6");
        assert_eq!(half.inv().unwrap().canonical(), "2");
        assert_eq!((&half - &half).canonical(), "0");
        assert!(q(0).inv().is_err());

        // (3+4i)(3-4i) = 25, so inv(3+4i) = (3-4i)/25
        let z = Field::Qi.parse_scalar("3+4i").unwrap();
        assert_eq!(z.inv().unwrap().canonical(), "3/25-4/25i");
        assert_eq!((&z * &z.inv().unwrap()).canonical(), "1");
        let i = Field::Qi.parse_scalar("i").unwrap();
        assert_eq!((&i * &i).canonical(), "-1");
        assert_eq!(i.pow(4).canonical(), "1");

        let f5 = Field::prime(5).unwrap();
        let two = f5.from_i64(2);
        assert_eq!(two.inv().unwrap().canonical(), "3 mod 5");
        assert_eq!(two.pow(4).canonical(), "1 mod 5");
        assert_eq!((-&two).canonical(), "3 mod 5");
    }

    #[test]
    #[should_panic(expected = "scalar arithmetic across fields")]
    fn cross_field_panics() {
        let _ = &q(1) + &Field::Qi.from_i64(1);
    }

    #[test]
    fn promote_to_gaussian() {
        let s = Field::Q.ratio(2, 3).unwrap().to_gaussian().unwrap();
        assert_eq!(s.field(), Field::Qi);
        assert_eq!(s.canonical(), "2/3");
        assert!(Field::prime(5).unwrap().from_i64(1).to_gaussian().is_err());
    }

    #[test]
    fn from_i64_reduces() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.from_i64(-1).canonical(), "6 mod 7");
        assert_eq!(f7.from_i64(15).canonical(), "1 mod 7");
        assert_eq!(f7.from_i64(i64::MIN).field(), Field::Fp(7));
    }
}
