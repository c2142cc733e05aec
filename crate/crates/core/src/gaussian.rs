//! Exact arithmetic in ℤ[ι].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, Zero};

/// A Gaussian integer a + bι with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianInteger(Complex<BigInt>);

impl GaussianInteger {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self(Complex::new(re.into(), im.into()))
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// ι
    pub fn i() -> Self {
        Self::new(0, 1)
    }

    /// ι^k for any integer k.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::new(1, 0),
            1 => Self::new(0, 1),
            2 => Self::new(-1, 0),
            _ => Self::new(0, -1),
        }
    }

    pub fn re(&self) -> &BigInt {
        &self.0.re
    }

    pub fn im(&self) -> &BigInt {
        &self.0.im
    }

    pub fn is_zero(&self) -> bool {
        self.0.re.is_zero() && self.0.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    /// |z|² = a² + b².
    pub fn norm_sqr(&self) -> BigInt {
        self.0.norm_sqr()
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// √2^sqrt2_exp · e^{ιπ·octant/4}, when that lies in ℤ[ι] (exponent and
    /// octant of equal parity).
    pub fn from_polar(sqrt2_exp: u32, octant: u8) -> Option<Self> {
        let octant = u32::from(octant % 8);
        if (sqrt2_exp + octant) % 2 == 1 {
            return None;
        }
        let two_pow = |e: u32| BigInt::one() << (e / 2) as usize;
        if octant % 2 == 0 {
            Some(Self::i_pow(i64::from(octant / 2)).scale(&two_pow(sqrt2_exp)))
        } else {
            // √2·e^{ιπ/4} = 1 + ι
            let unit = &Self::i_pow(i64::from((octant - 1) / 2)) * &Self::new(1, 1);
            Some(unit.scale(&two_pow(sqrt2_exp - 1)))
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self(Complex::new(&self.0.re * k, &self.0.im * k))
    }
}

impl From<Complex<BigInt>> for GaussianInteger {
    fn from(c: Complex<BigInt>) -> Self {
        Self(c)
    }
}

impl Add for GaussianInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a GaussianInteger> for &'a GaussianInteger {
    type Output = GaussianInteger;
    fn add(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger(&self.0 + &rhs.0)
    }
}

impl AddAssign<&GaussianInteger> for GaussianInteger {
    fn add_assign(&mut self, rhs: &GaussianInteger) {
        self.0.re += &rhs.0.re;
        self.0.im += &rhs.0.im;
    }
}

impl Sub for GaussianInteger {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for GaussianInteger {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a GaussianInteger> for &'a GaussianInteger {
    type Output = GaussianInteger;
    fn mul(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger(&self.0 * &rhs.0)
    }
}

impl Neg for GaussianInteger {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl fmt::Display for GaussianInteger {
    /// `0`, `3`, `-i`, `2i`, `-1+i`, `4-2i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (&self.0.re, &self.0.im);
        let imag = |f: &mut fmt::Formatter<'_>, leading: bool| -> fmt::Result {
            let sign = if im.is_negative() {
                "-"
            } else if leading {
                ""
            } else {
                "+"
            };
            let mag = im.abs();
            if mag.is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{mag}i")
            }
        };
        match (re.is_zero(), im.is_zero()) {
            (_, true) => write!(f, "{re}"),
            (true, false) => imag(f, true),
            (false, false) => {
                write!(f, "{re}")?;
                imag(f, false)
            }
        }
    }
}

impl fmt::Debug for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
