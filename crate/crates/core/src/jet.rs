//! Truncated Taylor series `Σ c_k t^k` about a base point.

use std::ops::{Add, Mul, Sub};

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{branch_power, BigComplex, BranchSpec};

/// Taylor jet; `coeffs[k]` is `f^{(k)}(x0)/k!`, truncation order `len - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSeries {
    pub coeffs: Vec<BigComplex>,
}

impl JetSeries {
    pub fn constant(c: BigComplex, order: usize) -> Self {
        let p = c.prec();
        let mut coeffs = vec![BigComplex::zero(p); order + 1];
        coeffs[0] = c;
        JetSeries { coeffs }
    }

    /// The identity function `x0 + t`.
    pub fn variable(x0: BigComplex, order: usize) -> Self {
        let p = x0.prec();
        let mut j = Self::constant(x0, order);
        if order >= 1 {
            j.coeffs[1] = BigComplex::one(p);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.coeffs[0].prec()
    }

    pub fn coeff(&self, k: usize) -> &BigComplex {
        &self.coeffs[k]
    }

    pub fn scale(&self, s: &BigComplex) -> Self {
        JetSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Series quotient; the divisor's constant term must be non-zero.
    pub fn div(&self, o: &JetSeries) -> Result<JetSeries> {
        let n = self.order().min(o.order());
        if o.coeffs[0].is_zero() {
            return Err(Error::DegenerateDenominator(None));
        }
        let inv0 = o.coeffs[0].recip();
        let mut q: Vec<BigComplex> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = &acc - &(&o.coeffs[j] * &q[k - j]);
            }
            q.push(&acc * &inv0);
        }
        Ok(JetSeries { coeffs: q })
    }

    /// `f^p` for real `p`, with the constant term's power taken on `spec`.
    ///
    /// Uses `f g' = p f' g` for `g = f^p`:
    /// `g_k = (1/(k f_0)) Σ_{j=1}^{k} (p j - (k - j)) f_j g_{k-j}`.
    pub fn powf(&self, p: &Float, spec: BranchSpec) -> Result<JetSeries> {
        let f0 = &self.coeffs[0];
        if f0.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let prec = self.prec();
        let inv0 = f0.recip();
        let mut g = vec![branch_power(f0, p, spec)?];
        for k in 1..=self.order() {
            let mut acc = BigComplex::zero(prec);
            for j in 1..=k {
                let w = Float::with_val(prec, p * j as u64) - (k - j) as u64;
                acc = &acc + &(&self.coeffs[j] * &g[k - j]).scale(&w);
            }
            g.push((&acc * &inv0).div_u64(k as u64));
        }
        Ok(JetSeries { coeffs: g })
    }

    /// Integer power; needs a non-zero constant term when `k < 0`.
    pub fn powi(&self, k: i64) -> Result<JetSeries> {
        let prec = self.prec();
        if k >= 0 {
            let mut acc = JetSeries::constant(BigComplex::one(prec), self.order());
            for _ in 0..k {
                acc = &acc * self;
            }
            return Ok(acc);
        }
        let pos = self.powi(-k)?;
        JetSeries::constant(BigComplex::one(prec), self.order()).div(&pos)
    }

    /// `Σ c_k t^k` at a point `t`.
    pub fn eval(&self, t: &BigComplex) -> BigComplex {
        let mut acc = BigComplex::zero(self.prec());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }
}

impl<'a> Add<&'a JetSeries> for &'a JetSeries {
    type Output = JetSeries;
    fn add(self, o: &JetSeries) -> JetSeries {
        let n = self.order().min(o.order());
        JetSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect(),
        }
    }
}

impl<'a> Sub<&'a JetSeries> for &'a JetSeries {
    type Output = JetSeries;
    fn sub(self, o: &JetSeries) -> JetSeries {
        let n = self.order().min(o.order());
        JetSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &o.coeffs[k]).collect(),
        }
    }
}

impl<'a> Mul<&'a JetSeries> for &'a JetSeries {
    type Output = JetSeries;
    fn mul(self, o: &JetSeries) -> JetSeries {
        let n = self.order().min(o.order());
        let p = self.prec();
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = BigComplex::zero(p);
                for j in 0..=k {
                    acc = &acc + &(&self.coeffs[j] * &o.coeffs[k - j]);
                }
                acc
            })
            .collect();
        JetSeries { coeffs }
    }
}
