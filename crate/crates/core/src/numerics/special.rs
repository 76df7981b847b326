use rug::Float;

use super::{lifted_power, pi, BigComplex, BranchSpec, PrecisionContext};
use crate::error::{Error, Result};

/// Largest `|z|` accepted by the series backend at the default precision.
pub const SERIES_CAP: f64 = 200.0;

const MAX_TERMS: usize = 200_000;

/// A point `modulus * e^{i arg}` on the universal covering of `C \ {0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lifted {
    pub modulus: Float,
    pub arg: Float,
}

impl Lifted {
    pub fn new(modulus: Float, arg: Float) -> Self {
        Lifted { modulus, arg }
    }

    pub fn from_branch(z: &BigComplex, spec: BranchSpec) -> Self {
        Lifted {
            modulus: z.abs(),
            arg: spec.arg(z),
        }
    }

    pub fn to_complex(&self) -> BigComplex {
        BigComplex::polar(&self.modulus, &self.arg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HankelKind {
    First,
    Second,
}

/// `H^{(1)}_ν, H^{(2)}_ν` and their `z`-derivatives at one lifted point.
#[derive(Clone, Debug)]
pub struct HankelPair {
    pub h1: BigComplex,
    pub h2: BigComplex,
    pub dh1: BigComplex,
    pub dh2: BigComplex,
}

/// Extra bits covering the `e^{2|z|}` cancellation of the oscillating series
/// and of the `J_{-ν}`/`J_ν` combinations.
fn guard_bits(r: &Float) -> u32 {
    let r = r.to_f64();
    32 + (2.9 * r).ceil() as u32
}

fn check_order(nu: &Float) -> Result<()> {
    if nu.is_integer() && *nu < 0 {
        return Err(Error::NegativeIntegerOrder(nu.to_f64() as i64));
    }
    Ok(())
}

/// `(J_ν(z), J_ν'(z))` by the power series at working precision `pw`.
/// Requires `ν+1 > 0` or `ν` non-integer.
fn series(nu: &Float, z: &Lifted, pw: u32) -> Result<(BigComplex, BigComplex)> {
    if z.modulus.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let r = Float::with_val(pw, &z.modulus);
    let phi = Float::with_val(pw, &z.arg);
    let nu = Float::with_val(pw, nu);
    let half_r = Float::with_val(pw, &r / 2u32);

    // t_0 = (z/2)^ν / Γ(ν+1)
    let nu1 = Float::with_val(pw, &nu + 1u32);
    let lead = lifted_power(&half_r, &phi, &nu);
    let mut t = if nu1.is_integer() && nu1 <= 0 {
        return Err(Error::NegativeIntegerOrder(nu.to_f64() as i64));
    } else {
        lead.scale(&nu1.clone().gamma().recip())
    };

    // -(z/2)^2
    let w2 = {
        let two_phi = Float::with_val(pw, &phi * 2u32);
        let sq = Float::with_val(pw, half_r.square_ref());
        -BigComplex::polar(&sq, &two_phi)
    };
    let zc = BigComplex::polar(&r, &phi);
    let rq = Float::with_val(pw, half_r.square_ref()).to_f64();

    let mut sum = BigComplex::zero(pw);
    let mut dsum = BigComplex::zero(pw);
    let mut max_exp = i64::MIN;
    let nu_f = nu.to_f64();
    for j in 0..MAX_TERMS {
        let k = Float::with_val(pw, &nu + 2 * j as u64);
        sum = &sum + &t;
        dsum = &dsum + &t.scale(&k);
        if let Some(e) = t.mag_exp() {
            max_exp = max_exp.max(e as i64);
        }
        // |t_{j+1}/t_j| <= q; once q <= 1/2 the tail is bounded by 2|t_{j+1}|.
        let denom = (j as f64 + 1.0) * (nu_f + j as f64 + 1.0).abs();
        let q = rq / denom;
        let small = match t.mag_exp() {
            None => true,
            Some(e) => (e as i64) < max_exp - pw as i64 - 2,
        };
        if q <= 0.5 && small && j > 0 {
            return Ok((sum, &dsum / &zc));
        }
        let d = Float::with_val(pw, &nu + (j as u64 + 1)) * (j as u64 + 1);
        t = (&t * &w2).scale(&d.recip());
    }
    Err(Error::NonConvergence(MAX_TERMS))
}

/// `J_ν(z)` and `J_ν'(z)` on the lifted argument, returned at `ctx` precision.
pub fn bessel_j_lifted(
    nu: &Float,
    z: &Lifted,
    ctx: &PrecisionContext,
) -> Result<(BigComplex, BigComplex)> {
    check_order(nu)?;
    let bits = ctx.bits();
    if z.modulus.is_zero() {
        return if nu.is_zero() {
            Ok((BigComplex::one(bits), BigComplex::zero(bits)))
        } else if *nu > 0 {
            Ok((BigComplex::zero(bits), BigComplex::zero(bits)))
        } else {
            Err(Error::ZeroArgument)
        };
    }
    let pw = bits + guard_bits(&z.modulus);
    let (j, dj) = series(nu, z, pw)?;
    Ok((j.with_prec(bits), dj.with_prec(bits)))
}

/// `J_ν(z) = Σ (-1)^j (z/2)^{2j+ν} / (j! Γ(ν+j+1))` with `z^ν` on `spec`.
pub fn bessel_j(
    nu: &Float,
    z: &BigComplex,
    spec: BranchSpec,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    let l = if z.is_zero() {
        Lifted::new(Float::new(ctx.bits()), Float::new(ctx.bits()))
    } else {
        Lifted::from_branch(z, spec)
    };
    Ok(bessel_j_lifted(nu, &l, ctx)?.0)
}

/// Both Hankel functions and derivatives from one pair of `J_{±ν}` series.
pub fn hankel_pair_lifted(nu: &Float, z: &Lifted, ctx: &PrecisionContext) -> Result<HankelPair> {
    if nu.is_integer() {
        return Err(Error::IntegerOrder(nu.to_f64() as i64));
    }
    let bits = ctx.bits();
    let pw = bits + guard_bits(&z.modulus);
    let nu_w = Float::with_val(pw, nu);
    let (jp, djp) = series(&nu_w, z, pw)?;
    let (jm, djm) = series(&Float::with_val(pw, -&nu_w), z, pw)?;
    let pnu = Float::with_val(pw, pi(pw) * &nu_w);
    let e_plus = BigComplex::cis(&pnu);
    let e_minus = e_plus.conj();
    // 1 / (i sin πν)
    let inv = BigComplex::from_imag(&Float::with_val(pw, -(pnu.clone().sin().recip())));
    let h1 = &(&jm - &(&jp * &e_minus)) * &inv;
    let h2 = &(&(&jp * &e_plus) - &jm) * &inv;
    let dh1 = &(&djm - &(&djp * &e_minus)) * &inv;
    let dh2 = &(&(&djp * &e_plus) - &djm) * &inv;
    Ok(HankelPair {
        h1: h1.with_prec(bits),
        h2: h2.with_prec(bits),
        dh1: dh1.with_prec(bits),
        dh2: dh2.with_prec(bits),
    })
}

pub fn hankel_h_lifted(
    kind: HankelKind,
    nu: &Float,
    z: &Lifted,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    let p = hankel_pair_lifted(nu, z, ctx)?;
    Ok(match kind {
        HankelKind::First => p.h1,
        HankelKind::Second => p.h2,
    })
}

/// `H^{(1)}_ν = (J_{-ν} - J_ν e^{-iπν}) / (i sin πν)`,
/// `H^{(2)}_ν = (J_ν e^{iπν} - J_{-ν}) / (i sin πν)`.
pub fn hankel_h(
    kind: HankelKind,
    nu: &Float,
    z: &BigComplex,
    spec: BranchSpec,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    if z.is_zero() {
        return Err(Error::ZeroArgument);
    }
    hankel_h_lifted(kind, nu, &Lifted::from_branch(z, spec), ctx)
}
