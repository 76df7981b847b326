//! The Bessel model solution `Ψ^(0)(ξ)` and the closed-form constants
//! `B₀`, `P̂^(0)(0)`, `P̂^(∞)(∞)` from which `c(a)` emerges.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::matrix::TransferMatrix;
use crate::numerics::{
    gamma_real, hankel_pair_lifted, lifted_power, pi, BigComplex, Lifted, PrecisionContext,
    SERIES_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    /// `(-π/2 - 2θ, π/4 - 2θ)`
    S1,
    /// `(π/4 - 2θ, 3π/4 - 2θ)`
    S2,
    /// `(3π/4 - 2θ, 3π/2 - 2θ)`
    S3,
}

#[derive(Clone, Debug)]
pub struct SectorSpec {
    pub theta: Float,
    pub sector: Sector,
}

impl SectorSpec {
    pub fn new(theta: Float, sector: Sector) -> Self {
        SectorSpec { theta, sector }
    }

    /// Closed bounds of the sector in `arg ξ`.
    pub fn bounds(&self) -> (Float, Float) {
        let p = self.theta.prec();
        let quarter = |k: i32| Float::with_val(p, pi(p) * k) / 4u32 - Float::with_val(p, &self.theta * 2u32);
        match self.sector {
            Sector::S1 => (quarter(-2), quarter(1)),
            Sector::S2 => (quarter(1), quarter(3)),
            Sector::S3 => (quarter(3), quarter(6)),
        }
    }

    pub fn contains(&self, arg: &Float) -> bool {
        let (lo, hi) = self.bounds();
        *arg >= lo && *arg <= hi
    }

    /// The sector containing `arg` (open-interval interiors; Γ₀ endpoints
    /// belong to S1 and S3).
    pub fn classify(theta: &Float, arg: &Float) -> Result<Sector> {
        for s in [Sector::S1, Sector::S2, Sector::S3] {
            if SectorSpec::new(theta.clone(), s).contains(arg) {
                return Ok(s);
            }
        }
        Err(Error::SectorMismatch(arg.to_f64()))
    }

    /// `arg ξ` lifted into `[-π/2 - 2θ, 3π/2 - 2θ)`.
    pub fn lift_arg(theta: &Float, xi: &BigComplex) -> Float {
        let p = xi.prec();
        let two_pi = Float::with_val(p, pi(p) * 2u32);
        let lo = Float::with_val(p, -pi(p) / 2u32) - Float::with_val(p, theta * 2u32);
        let mut t = xi.arg();
        while t < lo {
            t += &two_pi;
        }
        while Float::with_val(p, &t - &two_pi) >= lo {
            t -= &two_pi;
        }
        t
    }
}

/// Scalars and matrices of the model problem for one `(a, n, m)`.
#[derive(Clone, Debug)]
pub struct ParametrixConstants {
    pub a: Float,
    /// `√(e^{iπa} - 1)`, principal root.
    pub eta: BigComplex,
    /// `2(m - in)`.
    pub delta: BigComplex,
    /// `[[0, ψ₁], [ψ₁ - 1, 0]]`, `ψ₁ = (1 - a²)/4`.
    pub psi1: TransferMatrix,
    pub b0: TransferMatrix,
    /// `B = B₀ η^{-σ3}`.
    pub b: TransferMatrix,
    pub p0_hat: TransferMatrix,
    pub pinf_hat: TransferMatrix,
}

impl ParametrixConstants {
    pub fn new(a: &Float, n: usize, m: usize, ctx: &PrecisionContext) -> Result<Self> {
        check_a(a)?;
        let b0 = b0_matrix(a, ctx)?;
        let eta = eta(a, ctx);
        Ok(ParametrixConstants {
            a: Float::with_val(ctx.bits(), a),
            b: &b0 * &TransferMatrix::sigma3_power(&eta.recip()),
            eta,
            delta: delta(n, m, ctx.bits()),
            psi1: psi1_matrix(a, ctx.bits()),
            b0,
            p0_hat: p0_hat_zero(a, n, m, ctx)?,
            pinf_hat: pinf_hat(a, n, m, ctx)?,
        })
    }
}

fn check_a(a: &Float) -> Result<()> {
    if !(*a > 0 && *a < 2) {
        return Err(Error::OutOfRange(format!("a = {} not in (0, 2)", a.to_f64())));
    }
    Ok(())
}

pub fn eta(a: &Float, ctx: &PrecisionContext) -> BigComplex {
    let p = ctx.bits();
    let e = BigComplex::cis(&Float::with_val(p, a * pi(p)));
    (&e - &BigComplex::one(p)).sqrt()
}

pub fn delta(n: usize, m: usize, prec: u32) -> BigComplex {
    BigComplex::from_f64(prec, 2.0 * m as f64, -2.0 * n as f64)
}

pub fn psi1_matrix(a: &Float, prec: u32) -> TransferMatrix {
    let psi1 = (Float::with_val(prec, 1) - Float::with_val(prec, a.square_ref())) / 4u32;
    let z = BigComplex::zero(prec);
    TransferMatrix::new(
        z.clone(),
        BigComplex::from_real(&psi1),
        BigComplex::from_real(&(psi1.clone() - 1u32)),
        z,
    )
}

/// `√π 2^a / Γ(-a/2)` and `2^{-a-2} Γ(-a/2) / √π`, the two building blocks.
fn blocks(a: &Float, prec: u32) -> Result<(Float, Float)> {
    let g = gamma_real(&Float::with_val(prec, -a.clone() / 2u32))?;
    let sp = pi(prec).sqrt();
    let two = Float::with_val(prec, 2);
    let p2a = two.clone().pow(a);
    let m2a = two.pow(Float::with_val(prec, -a.clone() - 2u32));
    Ok((sp.clone() * p2a / &g, m2a * g / sp))
}

/// `B₀ = [[-2^a√π/(aΓ(-a/2)), -2^{-a-2} iΓ(-a/2)/√π],
///        [2^a√π/Γ(-a/2), -2^{-a-2} i aΓ(-a/2)/√π]]`.
pub fn b0_matrix(a: &Float, ctx: &PrecisionContext) -> Result<TransferMatrix> {
    check_a(a)?;
    b0_any(a, ctx.bits())
}

fn b0_any(a: &Float, p: u32) -> Result<TransferMatrix> {
    let a = Float::with_val(p, a);
    let (x, y) = blocks(&a, p)?;
    Ok(TransferMatrix::new(
        BigComplex::from_real(&-(x.clone() / &a)),
        BigComplex::from_imag(&-y.clone()),
        BigComplex::from_real(&x),
        BigComplex::from_imag(&-(y * &a)),
    ))
}

/// `P̂^(0)(0) = Δ^{σ3/2} B₀ η^{-σ3} Δ^{-(a/2)σ3}` (principal powers of `Δ`).
pub fn p0_hat_zero(a: &Float, n: usize, m: usize, ctx: &PrecisionContext) -> Result<TransferMatrix> {
    check_a(a)?;
    if n == 0 || m == 0 {
        return Err(Error::OutOfRange(format!("n = {n}, m = {m} must be >= 1")));
    }
    p0_hat_any(a, n, m, ctx)
}

fn p0_hat_any(a: &Float, n: usize, m: usize, ctx: &PrecisionContext) -> Result<TransferMatrix> {
    let p = ctx.bits();
    let d = delta(n, m, p);
    let half = Float::with_val(p, 0.5);
    let ha = Float::with_val(p, a / 2u32);
    let dp = |e: &Float| d.ln().scale(e).exp();
    let left = TransferMatrix::sigma3_power(&dp(&half));
    let right = TransferMatrix::sigma3_power(&dp(&-ha));
    let b = &b0_any(a, p)? * &TransferMatrix::sigma3_power(&eta(a, ctx).recip());
    Ok(&(&left * &b) * &right)
}

/// `P̂^(∞)(∞)` with the printed entries in `η`, `Γ(a/2)`, `Δ̄ = 2(m+in)`.
pub fn pinf_hat(a: &Float, n: usize, m: usize, ctx: &PrecisionContext) -> Result<TransferMatrix> {
    check_a(a)?;
    if n == 0 || m == 0 {
        return Err(Error::OutOfRange(format!("n = {n}, m = {m} must be >= 1")));
    }
    let p = ctx.bits();
    let a = Float::with_val(p, a);
    let eta = eta(&a, ctx);
    let db = delta(n, m, p).conj();
    let dbp = |e: Float| db.ln().scale(&e).exp();
    let half = Float::with_val(p, 0.5);
    let ha = Float::with_val(p, &a / 2u32);
    let g = gamma_real(&ha)?;
    let sp = pi(p).sqrt();
    let two = Float::with_val(p, 2);
    let x = sp.clone() * two.clone().pow(-a.clone()) / &g; // 2^{-a}√π/Γ(a/2)
    let y = two.pow(Float::with_val(p, &a - 2u32)) * &g / &sp; // 2^{a-2}Γ(a/2)/√π
    let ieta = eta.mul_i();
    let q11 = (&BigComplex::from_real(&x) / &eta) * dbp(ha.clone() - &half);
    let q12 = -(&ieta.scale(&(y.clone() * &a)) * &dbp(-(ha.clone() + &half)));
    let q21 = (&BigComplex::from_real(&(x / &a)) / &eta) * dbp(ha.clone() + &half);
    let q22 = &ieta.scale(&y) * &dbp(half - ha);
    Ok(TransferMatrix::new(q11, q12, q21, q22))
}

/// `σ1 · conj(P̂^(0)(0; -a))`, the symmetry form of `P̂^(∞)(∞)`.
pub fn pinf_hat_by_symmetry(
    a: &Float,
    n: usize,
    m: usize,
    ctx: &PrecisionContext,
) -> Result<TransferMatrix> {
    check_a(a)?;
    let minus = p0_hat_any(&Float::with_val(ctx.bits(), -a.clone()), n, m, ctx)?;
    Ok(&TransferMatrix::sigma1(ctx.bits()) * &minus.conj())
}

/// `-p₁₂/p₁₁` of `P̂^(0)(0)`.
pub fn leading_constant(a: &Float, n: usize, m: usize, ctx: &PrecisionContext) -> Result<BigComplex> {
    let p = p0_hat_zero(a, n, m, ctx)?;
    Ok(-(&p.b / &p.a))
}

/// `c(a) ((n + im)/2)^a`, for comparison with `leading_constant`.
pub fn leading_constant_target(
    a: &Float,
    n: usize,
    m: usize,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    crate::asymptotics::predict(n, m, a, ctx)
}

/// `C₀` of the small-`ξ` expansion in each sector.
pub fn c0_matrix(a: &Float, sector: Sector, prec: u32) -> TransferMatrix {
    let pa2 = Float::with_val(prec, a * pi(prec)) / 2u32;
    let up = BigComplex::from_imag(&(pa2.clone().sin() * 2u32)).recip();
    let base = TransferMatrix::upper(up);
    let e = BigComplex::cis(&pa2);
    match sector {
        Sector::S1 => &base * &TransferMatrix::lower(-e),
        Sector::S2 => base,
        Sector::S3 => &base * &TransferMatrix::lower(e.conj()),
    }
}

/// Jump matrices `L₀ = [[0, 1], [-1, 0]]`, `L₁,₂ = [[1, 0], [e^{±iπa/2}, 1]]`.
pub fn jump_matrices(a: &Float, prec: u32) -> [TransferMatrix; 3] {
    let pa2 = Float::with_val(prec, a * pi(prec)) / 2u32;
    let e = BigComplex::cis(&pa2);
    let (z, o) = (BigComplex::zero(prec), BigComplex::one(prec));
    [
        TransferMatrix::new(z.clone(), o.clone(), -o, z),
        TransferMatrix::lower(e.clone()),
        TransferMatrix::lower(e.conj()),
    ]
}

/// Sector factor multiplying the Hankel matrix on the right.
fn sector_factor(a: &Float, sector: Sector, prec: u32) -> TransferMatrix {
    let pa2 = Float::with_val(prec, a * pi(prec)) / 2u32;
    match sector {
        Sector::S1 => TransferMatrix::identity(prec),
        Sector::S2 => TransferMatrix::lower(BigComplex::cis(&pa2)),
        Sector::S3 => TransferMatrix::lower(BigComplex::from_real(&(pa2.cos() * 2u32))),
    }
}

/// `Ψ^(0)` at `ξ = |ξ| e^{i arg}` with `arg` on the covering and the sector
/// given explicitly.
pub fn psi0_eval_lifted(
    modulus: &Float,
    arg: &Float,
    a: &Float,
    sector: &SectorSpec,
    ctx: &PrecisionContext,
) -> Result<TransferMatrix> {
    if modulus.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if !sector.contains(arg) {
        return Err(Error::SectorMismatch(arg.to_f64()));
    }
    let p = ctx.bits();
    let root = Float::with_val(p, modulus.sqrt_ref());
    let zmod = Float::with_val(p, &root / 2u32);
    if zmod.to_f64() > SERIES_CAP * (p as f64 / 256.0).max(1.0) {
        return Err(Error::SeriesCap(zmod.to_f64()));
    }
    let half_arg = Float::with_val(p, arg / 2u32);
    let zarg = Float::with_val(p, pi(p) / 2u32) + &half_arg;
    let nu = Float::with_val(p, -a.clone() / 2u32);
    let h = hankel_pair_lifted(&nu, &Lifted::new(zmod, zarg), ctx)?;
    // dz/dξ = i / (4 √ξ)
    let sqrt_xi = BigComplex::polar(&root, &half_arg);
    let dz = BigComplex::i(p).scale_f64(0.25) / sqrt_xi;
    let xi = BigComplex::polar(&Float::with_val(p, modulus), arg);
    let hm = TransferMatrix::new(h.h2, h.h1, &h.dh2 * &dz, &h.dh1 * &dz);
    let left = TransferMatrix::diag(BigComplex::from_f64(p, 0.5, 0.0), xi.scale_f64(2.0));
    let phase = TransferMatrix::sigma3_power(&BigComplex::cis(&(Float::with_val(p, a * pi(p)) / 4u32)));
    let pref = BigComplex::from_real(&(pi(p).sqrt() / 2u32));
    let core = &(&left * &hm) * &phase;
    Ok((&core * &sector_factor(a, sector.sector, p)).scale(&pref))
}

/// `Ψ^(0)(ξ)` with `arg ξ` in `[-π/2-2θ, 3π/2-2θ)`; the sector must contain it.
pub fn psi0_eval(
    xi: &BigComplex,
    a: &Float,
    sector: &SectorSpec,
    ctx: &PrecisionContext,
) -> Result<TransferMatrix> {
    let arg = SectorSpec::lift_arg(&sector.theta, xi);
    psi0_eval_lifted(&xi.abs(), &arg, a, sector, ctx)
}

/// `Ψ^(0)` with the sector inferred from `arg ξ`.
pub fn psi0_auto(xi: &BigComplex, a: &Float, theta: &Float, ctx: &PrecisionContext) -> Result<TransferMatrix> {
    let arg = SectorSpec::lift_arg(theta, xi);
    let s = SectorSpec::classify(theta, &arg)?;
    psi0_eval_lifted(&xi.abs(), &arg, a, &SectorSpec::new(theta.clone(), s), ctx)
}

/// `‖Ψ₊ - Ψ₋ L₀‖ / ‖Ψ₊‖` on Γ₀ at `|ξ| = modulus`, after an optional left
/// gauge `[[1, 0], [κ, 1]]`.
pub fn gamma0_jump_residual(
    modulus: &Float,
    a: &Float,
    theta: &Float,
    kappa: Option<&BigComplex>,
    ctx: &PrecisionContext,
) -> Result<f64> {
    let p = ctx.bits();
    let (lo, _) = SectorSpec::new(theta.clone(), Sector::S1).bounds();
    let (_, hi) = SectorSpec::new(theta.clone(), Sector::S3).bounds();
    let gauge = kappa.map(|k| TransferMatrix::lower(k.clone()));
    let apply = |m: TransferMatrix| match &gauge {
        Some(g) => g * &m,
        None => m,
    };
    let plus = apply(psi0_eval_lifted(modulus, &lo, a, &SectorSpec::new(theta.clone(), Sector::S1), ctx)?);
    let minus = apply(psi0_eval_lifted(modulus, &hi, a, &SectorSpec::new(theta.clone(), Sector::S3), ctx)?);
    let [l0, _, _] = jump_matrices(a, p);
    Ok(((&plus - &(&minus * &l0)).norm_max() / plus.norm_max()).to_f64())
}

/// Jump residuals on Γ₁ and Γ₂ (`Ψ₊ = Ψ₋ L₁,₂`, `+` on the counter-clockwise side).
pub fn gamma12_jump_residuals(
    modulus: &Float,
    a: &Float,
    theta: &Float,
    kappa: Option<&BigComplex>,
    ctx: &PrecisionContext,
) -> Result<(f64, f64)> {
    let p = ctx.bits();
    let gauge = kappa.map(|k| TransferMatrix::lower(k.clone()));
    let apply = |m: TransferMatrix| match &gauge {
        Some(g) => g * &m,
        None => m,
    };
    let [_, l1, l2] = jump_matrices(a, p);
    let s = |sec| SectorSpec::new(theta.clone(), sec);
    let (_, g1) = s(Sector::S1).bounds();
    let (_, g2) = s(Sector::S2).bounds();
    let r1 = {
        let plus = apply(psi0_eval_lifted(modulus, &g1, a, &s(Sector::S2), ctx)?);
        let minus = apply(psi0_eval_lifted(modulus, &g1, a, &s(Sector::S1), ctx)?);
        ((&plus - &(&minus * &l1)).norm_max() / plus.norm_max()).to_f64()
    };
    let r2 = {
        let plus = apply(psi0_eval_lifted(modulus, &g2, a, &s(Sector::S3), ctx)?);
        let minus = apply(psi0_eval_lifted(modulus, &g2, a, &s(Sector::S2), ctx)?);
        ((&plus - &(&minus * &l2)).norm_max() / plus.norm_max()).to_f64()
    };
    Ok((r1, r2))
}

/// `‖dΨ/dξ - (1/4)[[0, 1/ξ], [1 + a²/ξ, 0]] Ψ‖ / ‖Ψ‖` with a central
/// difference of step `h`.
pub fn ode_residual(
    xi: &BigComplex,
    a: &Float,
    theta: &Float,
    h: f64,
    ctx: &PrecisionContext,
) -> Result<f64> {
    let p = ctx.bits();
    let step = BigComplex::from_f64(p, h, 0.0);
    let at = |x: &BigComplex| psi0_auto(x, a, theta, ctx);
    let psi = at(xi)?;
    let fd = (&at(&(xi + &step))? - &at(&(xi - &step))?).scale(&step.scale_f64(2.0).recip());
    let z = BigComplex::zero(p);
    let xi_inv = xi.recip();
    let a2 = Float::with_val(p, a.square_ref());
    let coef = TransferMatrix::new(
        z.clone(),
        xi_inv.clone(),
        &BigComplex::one(p) + &xi_inv.scale(&a2),
        z,
    )
    .scale(&BigComplex::from_f64(p, 0.25, 0.0));
    Ok(((&fd - &(&coef * &psi)).norm_max() / psi.norm_max()).to_f64())
}

/// `‖Ψ (ξ^{-(a/4)σ3} C₀)^{-1} - B₀‖` at `ξ = modulus > 0` (arg 0).
pub fn b0_small_xi_residual(
    modulus: &Float,
    a: &Float,
    theta: &Float,
    ctx: &PrecisionContext,
) -> Result<f64> {
    let p = ctx.bits();
    let zero = Float::new(p);
    let sec = SectorSpec::classify(theta, &zero)?;
    let psi = psi0_eval_lifted(modulus, &zero, a, &SectorSpec::new(theta.clone(), sec), ctx)?;
    let xi_pow = lifted_power(modulus, &zero, &Float::with_val(p, -a.clone() / 4u32));
    let local = &TransferMatrix::sigma3_power(&xi_pow) * &c0_matrix(a, sec, p);
    let approx = &psi * &local.inverse();
    Ok((&approx - &b0_matrix(a, ctx)?).norm_max().to_f64())
}

/// `‖ξ^{σ3/4} Ψ e^{-√ξ σ3/2} T^{-1} - I - Ψ₁/√ξ‖ · |ξ|` along `arg ξ = 0`,
/// `T = [[1/2, -i/2], [1/2, i/2]]`.
pub fn large_xi_defect(modulus: &Float, a: &Float, theta: &Float, ctx: &PrecisionContext) -> Result<f64> {
    let p = ctx.bits();
    let zero = Float::new(p);
    let sec = SectorSpec::classify(theta, &zero)?;
    let psi = psi0_eval_lifted(modulus, &zero, a, &SectorSpec::new(theta.clone(), sec), ctx)?;
    let root = Float::with_val(p, modulus.sqrt_ref());
    let quarter = BigComplex::from_real(&Float::with_val(p, root.sqrt_ref()));
    let expo = BigComplex::from_real(&(-(root.clone() / 2u32)).exp());
    let half = BigComplex::from_f64(p, 0.5, 0.0);
    let ihalf = BigComplex::from_f64(p, 0.0, 0.5);
    let t = TransferMatrix::new(half.clone(), -&ihalf, half, ihalf);
    let m = &(&(&TransferMatrix::sigma3_power(&quarter) * &psi) * &TransferMatrix::sigma3_power(&expo))
        * &t.inverse();
    let corr = psi1_matrix(a, p).scale(&BigComplex::from_real(&root.clone().recip()));
    let d = &(&m - &TransferMatrix::identity(p)) - &corr;
    Ok((d.norm_max() * modulus).to_f64())
}

/// `‖e^{-iπaσ3/2} C₀(S1) L₁ L₂ L₀ C₀(S1)^{-1} - I‖` plus the consistency of
/// consecutive `C₀` factors with `L₁`, `L₂`.
pub fn c0_monodromy_residual(a: &Float, prec: u32) -> f64 {
    let [l0, l1, l2] = jump_matrices(a, prec);
    let c1 = c0_matrix(a, Sector::S1, prec);
    let c2 = c0_matrix(a, Sector::S2, prec);
    let c3 = c0_matrix(a, Sector::S3, prec);
    let rot = TransferMatrix::sigma3_power(&BigComplex::cis(
        &-(Float::with_val(prec, a * pi(prec)) / 2u32),
    ));
    let id = TransferMatrix::identity(prec);
    let loop_ = &(&(&(&(&rot * &c1) * &l1) * &l2) * &l0) * &c1.inverse();
    let r0 = (&loop_ - &id).norm_max();
    let r1 = (&c2 - &(&c1 * &l1)).norm_max();
    let r2 = (&c3 - &(&c2 * &l2)).norm_max();
    r0.max(&r1).max(&r2).to_f64()
}

/// Largest of the three jump residuals on `|ξ| = modulus`.
pub fn all_jumps_residual(
    modulus: &Float,
    a: &Float,
    theta: &Float,
    ctx: &PrecisionContext,
) -> Result<f64> {
    let r0 = gamma0_jump_residual(modulus, a, theta, None, ctx)?;
    let (r1, r2) = gamma12_jump_residuals(modulus, a, theta, None, ctx)?;
    Ok(r0.max(r1).max(r2))
}
