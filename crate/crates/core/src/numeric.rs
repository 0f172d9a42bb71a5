//! Complex numbers with rational parts, and a rounded variant used as the
//! working field on certified-numeric paths.
//!
//! All arithmetic is exact on `CRat`; `Approx` rounds every result to a fixed
//! number of significant bits (relative to the modulus), which keeps numerator
//! and denominator sizes bounded during iterative algorithms. Nothing here is
//! ever used to decide an equality; those decisions are made over ℚ.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        CRat { re, im: Rat::zero() }
    }

    pub fn zero() -> Self {
        CRat::default()
    }

    pub fn one() -> Self {
        CRat::real(Rat::one())
    }

    pub fn i() -> Self {
        CRat::new(Rat::zero(), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> CRat {
        CRat::new(self.re.clone(), -&self.im)
    }

    pub fn inv(&self) -> Option<CRat> {
        let n = self.norm_sq();
        let inv = n.recip()?;
        Some(CRat::new(&self.re * &inv, -(&self.im * &inv)))
    }

    pub fn scale(&self, r: &Rat) -> CRat {
        CRat::new(&self.re * r, &self.im * r)
    }

    pub fn powi(&self, e: u32) -> CRat {
        let mut acc = CRat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64();
        a.hypot(b)
    }

    /// Rounds both parts to the same absolute grid, chosen so the larger part
    /// keeps `bits` significant bits.
    pub fn round(&self, bits: u32) -> CRat {
        if bits == 0 || self.is_zero() {
            return self.clone();
        }
        let e = log2_estimate(&self.re).max(log2_estimate(&self.im));
        let k = bits as i64 - e;
        CRat::new(round_to_grid(&self.re, k), round_to_grid(&self.im, k))
    }

    /// Principal square root to roughly `bits` significant bits.
    pub fn sqrt_approx(&self, bits: u32) -> CRat {
        if self.is_zero() {
            return CRat::zero();
        }
        let work = bits + 16;
        let r = sqrt_rat_approx(&self.norm_sq(), work);
        let two = Rat::from_int(2);
        let a = sqrt_rat_approx(&((&r + &self.re) / &two).max_zero(), work);
        let b = sqrt_rat_approx(&((&r - &self.re) / &two).max_zero(), work);
        let b = if self.im.is_negative() { -b } else { b };
        let mut w = CRat::new(a, b).round(work);
        if w.is_zero() {
            return w;
        }
        // Two Newton steps clean up the cancellation in a or b.
        for _ in 0..2 {
            let q = self * &w.inv().unwrap();
            w = (&w + &q).scale(&Rat::new(1, 2)).round(work);
        }
        w.round(bits)
    }

    /// Decimal rendering `a+bi` with `digits` significant digits per part.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let re = rat_to_decimal(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im = rat_to_decimal(&self.im.abs(), digits);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{re}{sign}{im}i")
    }
}

trait MaxZero {
    fn max_zero(self) -> Rat;
}

impl MaxZero for Rat {
    fn max_zero(self) -> Rat {
        if self.is_negative() {
            Rat::zero()
        } else {
            self
        }
    }
}

/// ⌊log2 |x|⌋ up to ±1; zero maps to a very small value.
pub fn log2_estimate(x: &Rat) -> i64 {
    if x.is_zero() {
        return i64::MIN / 4;
    }
    x.numer().bits() as i64 - x.denom().bits() as i64
}

/// Nearest multiple of 2^(-k).
fn round_to_grid(x: &Rat, k: i64) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let two = BigInt::from(2);
    let (num, den) = if k >= 0 {
        (
            x.numer() * num_traits::pow(two.clone(), k as usize),
            x.denom().clone(),
        )
    } else {
        (
            x.numer().clone(),
            x.denom() * num_traits::pow(two.clone(), (-k) as usize),
        )
    };
    // round half up: floor((2 num + den) / (2 den))
    let r: BigInt = Integer::div_floor(&(&num * 2 + &den), &(&den * 2));
    if k >= 0 {
        Rat::new(r, num_traits::pow(two, k as usize))
    } else {
        Rat::from_bigint(r * num_traits::pow(two, (-k) as usize))
    }
}

/// √x for x ≥ 0 to about `bits` significant bits (truncated).
pub fn sqrt_rat_approx(x: &Rat, bits: u32) -> Rat {
    assert!(!x.is_negative(), "square root of a negative rational");
    if x.is_zero() {
        return Rat::zero();
    }
    let e = log2_estimate(x);
    // scale by 4^k so that the integer part has about 2*bits bits
    let k = (bits as i64 + 2) - e.div_euclid(2);
    let two = BigInt::from(2);
    let n = if k >= 0 {
        (x.numer() * num_traits::pow(two.clone(), 2 * k as usize)) / x.denom()
    } else {
        x.numer() / (x.denom() * num_traits::pow(two.clone(), (-2 * k) as usize))
    };
    let s = n.sqrt();
    if k >= 0 {
        Rat::new(s, num_traits::pow(two, k as usize))
    } else {
        Rat::from_bigint(s * num_traits::pow(two, (-k) as usize))
    }
}

/// An upper bound on √x, exact to about `bits` bits.
pub fn sqrt_rat_upper(x: &Rat, bits: u32) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let s = sqrt_rat_approx(x, bits);
    // bump by one ulp until the square dominates
    let ulp = Rat::new(
        1,
        num_traits::pow(BigInt::from(2), (bits as i64 + 2 - log2_estimate(&s)).max(1) as usize),
    );
    let mut s = s;
    while &s * &s < *x {
        s = &s + &ulp;
    }
    s
}

pub fn rat_to_decimal(x: &Rat, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let f = x.to_f64();
    if f.is_finite() && f != 0.0 && digits <= 17 {
        return format!("{:.*e}", digits.saturating_sub(1), f);
    }
    // Long form through integer arithmetic.
    let neg = x.is_negative();
    let a = x.abs();
    let e10 = ((log2_estimate(&a) as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let shift = digits as i64 - 1 - e10;
    let ten = BigInt::from(10);
    let scaled = if shift >= 0 {
        a.numer() * num_traits::pow(ten.clone(), shift as usize) / a.denom()
    } else {
        a.numer() / (a.denom() * num_traits::pow(ten.clone(), (-shift) as usize))
    };
    let s = scaled.to_string();
    let exp = s.len() as i64 - 1 - shift;
    let (head, tail) = s.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

impl<'a, 'b> Add<&'b CRat> for &'a CRat {
    type Output = CRat;
    fn add(self, rhs: &'b CRat) -> CRat {
        CRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a, 'b> Sub<&'b CRat> for &'a CRat {
    type Output = CRat;
    fn sub(self, rhs: &'b CRat) -> CRat {
        CRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a, 'b> Mul<&'b CRat> for &'a CRat {
    type Output = CRat;
    fn mul(self, rhs: &'b CRat) -> CRat {
        CRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a, 'b> Div<&'b CRat> for &'a CRat {
    type Output = CRat;
    fn div(self, rhs: &'b CRat) -> CRat {
        self * &rhs.inv().expect("complex division by zero")
    }
}

impl Add for CRat {
    type Output = CRat;
    fn add(self, rhs: CRat) -> CRat {
        &self + &rhs
    }
}

impl Sub for CRat {
    type Output = CRat;
    fn sub(self, rhs: CRat) -> CRat {
        &self - &rhs
    }
}

impl Mul for CRat {
    type Output = CRat;
    fn mul(self, rhs: CRat) -> CRat {
        &self * &rhs
    }
}

impl Div for CRat {
    type Output = CRat;
    fn div(self, rhs: CRat) -> CRat {
        &self / &rhs
    }
}

impl Neg for CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat::new(-self.re, -self.im)
    }
}

impl fmt::Debug for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(12))
    }
}

/// A complex value on a rounded path. `bits == 0` marks a value that has not
/// been rounded (an exact lift); binary operations round to the larger
/// precision of their operands.
#[derive(Clone, PartialEq)]
pub struct Approx {
    pub z: CRat,
    pub bits: u32,
}

impl Approx {
    pub fn new(z: CRat, bits: u32) -> Self {
        Approx { z: z.round(bits), bits }
    }

    pub fn from_rat(r: &Rat, bits: u32) -> Self {
        Approx::new(CRat::real(r.clone()), bits)
    }
}

impl fmt::Debug for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.z)
    }
}

impl Serialize for Approx {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.z.to_decimal_string(decimal_digits(self.bits)))
    }
}

/// Number of decimal digits that `bits` binary digits support.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits.max(64) as f64) * std::f64::consts::LOG10_2).floor() as usize
}

macro_rules! approx_op {
    ($tr:ident, $m:ident) => {
        impl $tr for Approx {
            type Output = Approx;
            fn $m(self, rhs: Approx) -> Approx {
                let bits = self.bits.max(rhs.bits);
                Approx::new((&self.z).$m(&rhs.z), bits)
            }
        }
    };
}

approx_op!(Add, add);
approx_op!(Sub, sub);
approx_op!(Mul, mul);
approx_op!(Div, div);

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx {
            z: -self.z,
            bits: self.bits,
        }
    }
}

/// Convenience: `BigInt` 2^k as a rational.
pub fn pow2(k: i64) -> Rat {
    let two = BigInt::from(2);
    if k >= 0 {
        Rat::from_bigint(num_traits::pow(two, k as usize))
    } else {
        Rat::new(BigInt::one(), num_traits::pow(two, (-k) as usize))
    }
}
