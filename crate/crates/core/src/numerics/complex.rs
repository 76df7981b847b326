use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::Float;

/// Complex number over two MPFR floats of equal precision.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        BigComplex {
            re: Float::with_val(p, re),
            im: Float::with_val(p, im),
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 1.0)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: &Float) -> Self {
        BigComplex {
            re: re.clone(),
            im: Float::new(re.prec()),
        }
    }

    pub fn from_imag(im: &Float) -> Self {
        BigComplex {
            re: Float::new(im.prec()),
            im: im.clone(),
        }
    }

    /// `r e^{i theta}`.
    pub fn polar(r: &Float, theta: &Float) -> Self {
        let p = r.prec().max(theta.prec());
        let (s, c) = Float::with_val(p, theta).sin_cos(Float::new(p));
        BigComplex {
            re: c * r,
            im: s * r,
        }
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        BigComplex { re: c, im: s }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.mul_add_mul_ref(&self.re, &self.im, &self.im))
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn scale(&self, x: &Float) -> Self {
        BigComplex {
            re: Float::with_val(self.prec(), &self.re * x),
            im: Float::with_val(self.prec(), &self.im * x),
        }
    }

    pub fn scale_f64(&self, x: f64) -> Self {
        BigComplex {
            re: self.re.clone() * x,
            im: self.im.clone() * x,
        }
    }

    /// Exact-input division by a positive integer (one rounding per part).
    pub fn div_u64(&self, k: u64) -> Self {
        BigComplex {
            re: self.re.clone() / k,
            im: self.im.clone() / k,
        }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        BigComplex {
            re: -self.im.clone(),
            im: self.re.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        BigComplex {
            re: Float::with_val(self.prec(), &self.re / &d),
            im: -Float::with_val(self.prec(), &self.im / &d),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn exp(&self) -> Self {
        let r = self.re.clone().exp();
        BigComplex::polar(&r, &self.im)
    }

    /// Principal logarithm, imaginary part in `(-pi, pi]`.
    pub fn ln(&self) -> Self {
        BigComplex {
            re: self.abs().ln(),
            im: self.arg(),
        }
    }

    /// Principal square root (real part non-negative).
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec();
        let half = Float::with_val(p, self.arg() / 2u32);
        BigComplex::polar(&self.abs().sqrt(), &half)
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn powi(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = BigComplex::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Binary exponent of the larger component, `None` for zero.
    pub fn mag_exp(&self) -> Option<i32> {
        match (self.re.get_exp(), self.im.get_exp()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, None) => a,
            (None, b) => b,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// `pi` at the given precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(20);
        write!(
            f,
            "{}{}{}i",
            self.re.to_string_radix(10, Some(d)),
            if self.im.is_sign_negative() { "" } else { "+" },
            self.im.to_string_radix(10, Some(d))
        )
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        let re = Float::with_val(p, self.re.mul_sub_mul_ref(&o.re, &self.im, &o.im));
        let im = Float::with_val(p, self.re.mul_add_mul_ref(&o.im, &self.im, &o.re));
        BigComplex { re, im }
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        let d = o.norm_sqr();
        let re = Float::with_val(p, self.re.mul_add_mul_ref(&o.re, &self.im, &o.im)) / &d;
        let im = Float::with_val(p, self.im.mul_sub_mul_ref(&o.re, &self.re, &o.im)) / &d;
        BigComplex { re, im }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: &BigComplex) -> BigComplex { (&self).$m(o) }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex { self.$m(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);
