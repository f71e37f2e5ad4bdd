//! Exact scalars: rationals, Gaussian rationals and quadratic surds.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Largest trial divisor used when extracting square factors.
pub const TRIAL_BOUND: u64 = 1_000_000;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// `re + i*im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRational { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(rat_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::real(rat(n, d))
    }

    pub fn i() -> Self {
        GaussRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(GaussRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        GaussRational { re: &self.re * q, im: &self.im * q }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::from_int(-1),
            _ => -Self::i(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

impl From<BigRational> for GaussRational {
    fn from(q: BigRational) -> Self {
        GaussRational::real(q)
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        GaussRational::from_int(n)
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational::real(&self.re * &o.re);
        }
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Add for GaussRational {
    type Output = GaussRational;
    fn add(self, o: GaussRational) -> GaussRational {
        &self + &o
    }
}

impl Sub for GaussRational {
    type Output = GaussRational;
    fn sub(self, o: GaussRational) -> GaussRational {
        &self - &o
    }
}

impl Mul for GaussRational {
    type Output = GaussRational;
    fn mul(self, o: GaussRational) -> GaussRational {
        &self * &o
    }
}

/// Panics on a zero divisor; use [`GaussRational::checked_div`] otherwise.
impl Div for GaussRational {
    type Output = GaussRational;
    fn div(self, o: GaussRational) -> GaussRational {
        self.checked_div(&o).expect("division by zero")
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, o: &GaussRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussRational> for GaussRational {
    fn sub_assign(&mut self, o: &GaussRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussRational> for GaussRational {
    fn mul_assign(&mut self, o: &GaussRational) {
        *self = &*self * o;
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}*i", self.re, -self.im.clone())
                } else {
                    write!(f, "{}+{}*i", self.re, self.im)
                }
            }
        }
    }
}

impl FromStr for GaussRational {
    type Err = Error;

    /// Accepts `a`, `b*i`, `a+b*i` and `a-b*i` with `a`, `b` of the form `p` or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(body) = s.strip_suffix("*i") {
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(k, _)| k)
                .last();
            match split {
                Some(k) => {
                    let re = parse_rational(&body[..k])?;
                    let im = parse_rational(body[k..].trim_start_matches('+'))?;
                    Ok(GaussRational { re, im })
                }
                None => Ok(GaussRational { re: BigRational::zero(), im: parse_rational(body)? }),
            }
        } else {
            Ok(GaussRational::real(parse_rational(&s)?))
        }
    }
}

/// Write `n = s^2 t` with `t` square-free; `n > 0`.
pub fn square_free_decompose(n: &BigInt) -> Result<(BigInt, BigInt)> {
    assert!(n.is_positive(), "square_free_decompose needs n > 0");
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut t = BigInt::one();
    let mut d = 2u64;
    while d <= TRIAL_BOUND {
        let bd = BigInt::from(d);
        if &bd * &bd > rest {
            break;
        }
        let mut e = 0u32;
        while rest.is_multiple_of(&bd) {
            rest /= &bd;
            e += 1;
        }
        s *= bd.pow(e / 2);
        if e % 2 == 1 {
            t *= &bd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Ok((s, t));
    }
    let bound = BigInt::from(TRIAL_BOUND);
    if rest <= &bound * &bound || d <= TRIAL_BOUND {
        t *= rest;
        return Ok((s, t));
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        s *= root;
        return Ok((s, t));
    }
    Err(Error::RadicandTooLarge)
}

/// `coeff * sqrt(radicand)` with `radicand` a square-free positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    pub coeff: GaussRational,
    pub radicand: BigInt,
}

impl QuadScalar {
    pub fn rational(coeff: GaussRational) -> Self {
        QuadScalar { coeff, radicand: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::rational(GaussRational::one())
    }

    /// `sqrt(q)` for a positive rational `q`.
    pub fn sqrt(q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Parse(format!("sqrt of non-positive {q}")));
        }
        let pq = q.numer() * q.denom();
        let (s, t) = square_free_decompose(&pq)?;
        let coeff = BigRational::new(s, q.denom().clone());
        Ok(QuadScalar { coeff: GaussRational::real(coeff), radicand: t })
    }

    pub fn new(coeff: GaussRational, radicand: &BigRational) -> Result<Self> {
        let r = Self::sqrt(radicand)?;
        Ok(QuadScalar { coeff: &coeff * &r.coeff, radicand: r.radicand })
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one() || self.coeff.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn to_rational(&self) -> Option<GaussRational> {
        self.is_rational().then(|| self.coeff.clone())
    }

    pub fn conj(&self) -> Self {
        QuadScalar { coeff: self.coeff.conj(), radicand: self.radicand.clone() }
    }

    /// `|x|^2`, always rational.
    pub fn norm_sqr(&self) -> BigRational {
        self.coeff.norm_sqr() * BigRational::from_integer(self.radicand.clone())
    }

    pub fn mul(&self, o: &QuadScalar) -> Result<QuadScalar> {
        let prod = &self.radicand * &o.radicand;
        let (s, t) = square_free_decompose(&prod)?;
        let coeff = (&self.coeff * &o.coeff).scale(&BigRational::from_integer(s));
        Ok(QuadScalar { coeff, radicand: t })
    }

    pub fn add(&self, o: &QuadScalar) -> Result<QuadScalar> {
        if self.coeff.is_zero() {
            return Ok(o.clone());
        }
        if o.coeff.is_zero() {
            return Ok(self.clone());
        }
        if self.radicand != o.radicand {
            return Err(Error::RadicandMismatch(self.radicand.to_string(), o.radicand.to_string()));
        }
        Ok(QuadScalar { coeff: &self.coeff + &o.coeff, radicand: self.radicand.clone() })
    }

    pub fn inv(&self) -> Result<QuadScalar> {
        // 1/(c sqrt t) = (1/(c t)) sqrt t
        let ct = self.coeff.scale(&BigRational::from_integer(self.radicand.clone()));
        Ok(QuadScalar { coeff: ct.inv()?, radicand: self.radicand.clone() })
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let (re, im) = self.coeff.to_f64();
        let r = self.radicand.to_f64().unwrap_or(f64::NAN).sqrt();
        (re * r, im * r)
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{} sqrt({})", self.coeff, self.radicand)
        }
    }
}

impl FromStr for QuadScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.find("sqrt(") {
            Some(k) => {
                let head = s[..k].trim();
                let inner = s[k + 5..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("bad sqrt factor in {s:?}")))?;
                let coeff = if head.is_empty() { GaussRational::one() } else { head.parse()? };
                QuadScalar::new(coeff, &parse_rational(inner)?)
            }
            None => Ok(QuadScalar::rational(s.parse()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_text_round_trip() {
        for s in ["0", "3/4", "-1/2*i", "3/4-1/2*i", "5+7/3*i", "-2-1*i"] {
            let g: GaussRational = s.parse().unwrap();
            let again: GaussRational = g.to_string().parse().unwrap();
            assert_eq!(g, again, "{s}");
        }
        assert_eq!("3/4-1/2*i".parse::<GaussRational>().unwrap().to_string(), "3/4-1/2*i");
    }

    #[test]
    fn gauss_inverse() {
        let g: GaussRational = "1+1*i".parse().unwrap();
        assert_eq!(g.inv().unwrap().to_string(), "1/2-1/2*i");
        assert_eq!(GaussRational::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn sqrt_canonical() {
        let a = QuadScalar::sqrt(&rat(8, 1)).unwrap();
        assert_eq!(a.to_string(), "2 sqrt(2)");
        let b = QuadScalar::sqrt(&rat(1, 2)).unwrap();
        assert_eq!(b.to_string(), "1/2 sqrt(2)");
        let p = a.mul(&b).unwrap();
        assert!(p.is_rational());
        assert_eq!(p.coeff, GaussRational::from_int(2));
        assert_eq!(QuadScalar::sqrt(&rat(9, 4)).unwrap().to_string(), "3/2");
    }

    #[test]
    fn sqrt_mismatch() {
        let a = QuadScalar::sqrt(&rat(2, 1)).unwrap();
        let b = QuadScalar::sqrt(&rat(3, 1)).unwrap();
        assert!(matches!(a.add(&b), Err(Error::RadicandMismatch(..))));
        assert_eq!(a.mul(&b).unwrap().to_string(), "1 sqrt(6)");
    }

    #[test]
    fn quad_parse() {
        let q: QuadScalar = "1/2 sqrt(2)".parse().unwrap();
        assert_eq!(q.norm_sqr(), rat(1, 2));
        let q2: QuadScalar = "sqrt(1/2)".parse().unwrap();
        assert_eq!(q, q2);
    }

    #[test]
    fn large_prime_radicand() {
        // 1000003 is prime and above the trial bound
        let n = BigInt::from(1_000_003u64) * BigInt::from(4);
        let (s, t) = square_free_decompose(&n).unwrap();
        assert_eq!(s, BigInt::from(2));
        assert_eq!(t, BigInt::from(1_000_003u64));
        let big = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64) * BigInt::from(1_000_037u64);
        assert_eq!(square_free_decompose(&big), Err(Error::RadicandTooLarge));
    }
}
