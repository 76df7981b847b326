use std::ops::{Add, Mul, Sub};

use rug::Float;

use crate::numerics::BigComplex;

/// A 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    pub a: BigComplex,
    pub b: BigComplex,
    pub c: BigComplex,
    pub d: BigComplex,
}

impl TransferMatrix {
    pub fn new(a: BigComplex, b: BigComplex, c: BigComplex, d: BigComplex) -> Self {
        TransferMatrix { a, b, c, d }
    }

    pub fn identity(prec: u32) -> Self {
        Self::diag(BigComplex::one(prec), BigComplex::one(prec))
    }

    pub fn zero(prec: u32) -> Self {
        let z = BigComplex::zero(prec);
        TransferMatrix::new(z.clone(), z.clone(), z.clone(), z)
    }

    pub fn diag(a: BigComplex, d: BigComplex) -> Self {
        let p = a.prec();
        TransferMatrix::new(a, BigComplex::zero(p), BigComplex::zero(p), d)
    }

    /// `x^{σ3} = diag(x, 1/x)`.
    pub fn sigma3_power(x: &BigComplex) -> Self {
        Self::diag(x.clone(), x.recip())
    }

    /// `σ1 = [[0, 1], [1, 0]]`.
    pub fn sigma1(prec: u32) -> Self {
        let (z, o) = (BigComplex::zero(prec), BigComplex::one(prec));
        TransferMatrix::new(z.clone(), o.clone(), o, z)
    }

    pub fn lower(c: BigComplex) -> Self {
        let p = c.prec();
        TransferMatrix::new(BigComplex::one(p), BigComplex::zero(p), c, BigComplex::one(p))
    }

    pub fn upper(b: BigComplex) -> Self {
        let p = b.prec();
        TransferMatrix::new(BigComplex::one(p), b, BigComplex::zero(p), BigComplex::one(p))
    }

    pub fn entries(&self) -> [&BigComplex; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> BigComplex {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> BigComplex {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> Self {
        let r = self.det().recip();
        TransferMatrix::new(&self.d * &r, -(&self.b * &r), -(&self.c * &r), &self.a * &r)
    }

    pub fn scale(&self, s: &BigComplex) -> Self {
        TransferMatrix::new(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }

    pub fn conj(&self) -> Self {
        TransferMatrix::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    /// Max of entry moduli.
    pub fn norm_max(&self) -> Float {
        let mut m = self.a.abs();
        for e in [&self.b, &self.c, &self.d] {
            let v = e.abs();
            if v > m {
                m = v;
            }
        }
        m
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        TransferMatrix::new(
            self.a.with_prec(prec),
            self.b.with_prec(prec),
            self.c.with_prec(prec),
            self.d.with_prec(prec),
        )
    }
}

impl<'a> Mul<&'a TransferMatrix> for &'a TransferMatrix {
    type Output = TransferMatrix;
    fn mul(self, o: &TransferMatrix) -> TransferMatrix {
        TransferMatrix::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }
}

impl<'a> Add<&'a TransferMatrix> for &'a TransferMatrix {
    type Output = TransferMatrix;
    fn add(self, o: &TransferMatrix) -> TransferMatrix {
        TransferMatrix::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }
}

impl<'a> Sub<&'a TransferMatrix> for &'a TransferMatrix {
    type Output = TransferMatrix;
    fn sub(self, o: &TransferMatrix) -> TransferMatrix {
        TransferMatrix::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;
    fn mul(self, o: TransferMatrix) -> TransferMatrix {
        &self * &o
    }
}

impl Sub for TransferMatrix {
    type Output = TransferMatrix;
    fn sub(self, o: TransferMatrix) -> TransferMatrix {
        &self - &o
    }
}

impl Add for TransferMatrix {
    type Output = TransferMatrix;
    fn add(self, o: TransferMatrix) -> TransferMatrix {
        &self + &o
    }
}
