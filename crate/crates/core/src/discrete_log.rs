//! The discrete logarithm `L = lim_{a→0} (Z^a - 1)/a`, the Hirota radii
//! `W^a(n,m) = |Z^a(n+1,m) - Z^a(n,m)|` and the Green's function
//! `ℓ = d/da W^a` at `a = 1`, all by finite differences in `a` over evolved
//! grids.

use rug::ops::Pow;
use rug::Float;

use crate::asymptotics::c_of_a;
use crate::error::{Error, Result};
use crate::lattice::{evolve_grid, PowerMapGrid};
use crate::numerics::{BigComplex, PrecisionContext};

/// An extrapolated value with the size of the last Richardson correction.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

fn check_eps(eps: &Float) -> Result<()> {
    if !(*eps > 0 && *eps <= 0.1) {
        return Err(Error::OutOfRange(format!("eps = {} not in (0, 0.1]", eps.to_f64())));
    }
    Ok(())
}

fn check_even(n: usize, m: usize) -> Result<()> {
    if (n + m) % 2 != 0 {
        return Err(Error::Parity((n, m)));
    }
    Ok(())
}

/// `W^a(n, m)`; needs even `n + m` and `n + 1 <= N`.
#[allow(non_snake_case)]
pub fn hirota_W(grid: &PowerMapGrid, n: usize, m: usize) -> Result<Float> {
    check_even(n, m)?;
    let next = grid.try_get(n + 1, m)?;
    Ok((next - grid.get(n, m)).abs())
}

/// Leading-order radius `c(a) (a/2) |(n+im)/2|^{a-1}`.
pub fn hirota_predictor(n: usize, m: usize, a: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if n + m == 0 {
        return Err(Error::ZeroArgument);
    }
    let p = ctx.bits();
    let r = Float::with_val(p, n as f64).hypot(&Float::with_val(p, m as f64)) / 2u32;
    let e = Float::with_val(p, a - 1u32);
    Ok(c_of_a(a, ctx)? * Float::with_val(p, a / 2u32) * r.pow(&e))
}

/// `log(n + im) + γ - log 2`.
pub fn log_predictor(n: usize, m: usize, ctx: &PrecisionContext) -> Result<BigComplex> {
    if n + m == 0 {
        return Err(Error::ZeroArgument);
    }
    let p = ctx.bits();
    let shift = ctx.constants().euler_gamma - Float::with_val(p, 2u32).ln();
    Ok(&ctx.complex(n as f64, m as f64).ln() + &BigComplex::from_real(&shift))
}

/// `log r + γ + log 2`.
pub fn green_predictor(n: usize, m: usize, ctx: &PrecisionContext) -> Result<Float> {
    if n + m == 0 {
        return Err(Error::ZeroArgument);
    }
    let p = ctx.bits();
    let r = Float::with_val(p, n as f64).hypot(&Float::with_val(p, m as f64));
    Ok(r.ln() + ctx.constants().euler_gamma + Float::with_val(p, 2u32).ln())
}

/// `L(n, m)` over `{0..N}²` from the grids at `a = ε` and `a = 2ε`.
/// One-sided quotients `D(a) = (Z^a - 1)/a` are extrapolated as
/// `2 D(ε) - D(2ε)`; the reported error is `|D(ε) - D(2ε)|`.
#[derive(Clone, Debug)]
pub struct LogGrid {
    pub size: usize,
    pub eps: Float,
    /// Order of the leading error term after extrapolation.
    pub order: u32,
    values: Vec<Estimate<BigComplex>>,
}

impl LogGrid {
    pub fn compute(size: usize, eps: &Float, ctx: &PrecisionContext) -> Result<Self> {
        check_eps(eps)?;
        let g1 = evolve_grid(eps, size, ctx)?;
        let g2 = evolve_grid(&Float::with_val(ctx.bits(), eps * 2u32), size, ctx)?;
        Self::from_grids(&g1, &g2)
    }

    /// `g2` must be evolved at exactly twice the parameter of `g1`.
    pub fn from_grids(g1: &PowerMapGrid, g2: &PowerMapGrid) -> Result<Self> {
        let p = g1.prec();
        let eps = g1.a.clone();
        if g1.size != g2.size || Float::with_val(p, &eps * 2u32) != g2.a {
            return Err(Error::OutOfRange("grids are not at a = eps, 2 eps".into()));
        }
        let two_eps = Float::with_val(p, &eps * 2u32);
        let one = BigComplex::one(p);
        let w = g1.size + 1;
        let mut values = Vec::with_capacity(w * w);
        for n in 0..w {
            for m in 0..w {
                let d1 = &(g1.get(n, m) - &one) / &BigComplex::from_real(&eps);
                let d2 = &(g2.get(n, m) - &one) / &BigComplex::from_real(&two_eps);
                let error = (&d1 - &d2).abs().to_f64();
                let value = &d1.scale_f64(2.0) - &d2;
                values.push(Estimate { value, error });
            }
        }
        Ok(LogGrid {
            size: g1.size,
            eps,
            order: 2,
            values,
        })
    }

    /// `L(n, m)`; the origin is a pole.
    pub fn get(&self, n: usize, m: usize) -> Result<&Estimate<BigComplex>> {
        if n > self.size || m > self.size {
            return Err(Error::SiteOutOfGrid((n, m)));
        }
        if n + m == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(&self.values[n * (self.size + 1) + m])
    }
}

/// `L(n, m)` from freshly evolved grids of the smallest admissible size.
#[allow(non_snake_case)]
pub fn discrete_log_L(
    n: usize,
    m: usize,
    ctx: &PrecisionContext,
    eps: &Float,
) -> Result<Estimate<BigComplex>> {
    let g = LogGrid::compute(n.max(m).max(2), eps, ctx)?;
    g.get(n, m).cloned()
}

/// `W^a` at every even site with `n < N`.
#[derive(Clone, Debug)]
pub struct HirotaRadii {
    pub a: Float,
    pub size: usize,
    values: Vec<Option<Float>>,
}

impl HirotaRadii {
    pub fn from_grid(grid: &PowerMapGrid) -> Self {
        let w = grid.size + 1;
        let mut values = Vec::with_capacity(w * w);
        for n in 0..w {
            for m in 0..w {
                values.push(hirota_W(grid, n, m).ok());
            }
        }
        HirotaRadii {
            a: grid.a.clone(),
            size: grid.size,
            values,
        }
    }

    pub fn get(&self, n: usize, m: usize) -> Result<&Float> {
        check_even(n, m)?;
        if n >= self.size || m > self.size {
            return Err(Error::SiteOutOfGrid((n, m)));
        }
        Ok(self.values[n * (self.size + 1) + m].as_ref().expect("even interior site"))
    }
}

/// `ℓ(n, m)` at even sites with `n < N`, from the radii at
/// `a = 1 ± ε, 1 ± 2ε`. Central quotients `D(h)` are extrapolated as
/// `(4 D(ε) - D(2ε))/3`; the reported error is `|D(ε) - D(2ε)|`.
#[derive(Clone, Debug)]
pub struct GreenGrid {
    pub size: usize,
    pub eps: Float,
    pub order: u32,
    values: Vec<Option<Estimate<Float>>>,
}

impl GreenGrid {
    pub fn compute(size: usize, eps: &Float, ctx: &PrecisionContext) -> Result<Self> {
        check_eps(eps)?;
        let p = ctx.bits();
        let at = |k: i32| -> Result<HirotaRadii> {
            let a = Float::with_val(p, eps * k) + 1u32;
            Ok(HirotaRadii::from_grid(&evolve_grid(&a, size, ctx)?))
        };
        let (p1, m1, p2, m2) = (at(1)?, at(-1)?, at(2)?, at(-2)?);
        let w = size + 1;
        let mut values = Vec::with_capacity(w * w);
        for n in 0..w {
            for m in 0..w {
                let v = match (p1.get(n, m), m1.get(n, m), p2.get(n, m), m2.get(n, m)) {
                    (Ok(a), Ok(b), Ok(c), Ok(d)) => {
                        let d1 = Float::with_val(p, a - b) / Float::with_val(p, eps * 2u32);
                        let d2 = Float::with_val(p, c - d) / Float::with_val(p, eps * 4u32);
                        let error = Float::with_val(p, &d1 - &d2).abs().to_f64();
                        let value = (d1 * 4u32 - d2) / 3u32;
                        Some(Estimate { value, error })
                    }
                    _ => None,
                };
                values.push(v);
            }
        }
        Ok(GreenGrid {
            size,
            eps: Float::with_val(p, eps),
            order: 4,
            values,
        })
    }

    pub fn get(&self, n: usize, m: usize) -> Result<&Estimate<Float>> {
        check_even(n, m)?;
        if n >= self.size || m > self.size {
            return Err(Error::SiteOutOfGrid((n, m)));
        }
        Ok(self.values[n * (self.size + 1) + m].as_ref().expect("even interior site"))
    }
}

/// `ℓ(n, m)` from freshly evolved grids of the smallest admissible size.
pub fn green_ell(n: usize, m: usize, ctx: &PrecisionContext, eps: &Float) -> Result<Estimate<Float>> {
    check_even(n, m)?;
    let g = GreenGrid::compute((n + 1).max(m).max(2), eps, ctx)?;
    g.get(n, m).cloned()
}
