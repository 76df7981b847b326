//! Moments of the weight `ω e^{-φ}` on `[0, -i∞)`, Hankel determinants,
//! monic orthogonal polynomials and the residue formula for `Z^a`.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::jet::JetSeries;
use crate::numerics::{gamma_real, pi, BigComplex, BranchSpec, PrecisionContext};

/// `H_0 .. H_{n+m-1}` for one `(n, m, a)`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub n: usize,
    pub m: usize,
    pub a: Float,
    pub h: Vec<BigComplex>,
}

/// Moments with determinants, monic polynomials and norms for `l <= k`.
#[derive(Clone, Debug)]
pub struct HankelSystem {
    pub moments: MomentTable,
    /// `det ℋ_l`, `l = 0..=k` (`det ℋ_0 = 1`).
    pub dets: Vec<BigComplex>,
    /// Coefficients of `P_l` in increasing degree; the last entry is 1.
    pub polys: Vec<Vec<BigComplex>>,
    /// `h_l = det ℋ_{l+1} / det ℋ_l`, `l = 0..k`.
    pub norms: Vec<BigComplex>,
}

fn check_indices(n: usize, m: usize, a: &Float) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::OutOfRange(format!("n = {n}, m = {m} must be >= 1")));
    }
    if !(*a > 0 && *a < 2) {
        return Err(Error::OutOfRange(format!("a = {} not in (0, 2)", a.to_f64())));
    }
    Ok(())
}

/// `2πi e^{iπa/2}`.
fn residue_prefactor(a: &Float) -> BigComplex {
    let p = a.prec();
    let two_pi = Float::with_val(p, pi(p) * 2u32);
    let e = BigComplex::cis(&(Float::with_val(p, a * pi(p)) / 2u32));
    e.mul_i().scale(&two_pi)
}

/// `Σ_{λ=±1} res( g(λ) λ^{e} (λ-1)^{-m} (λ+1)^{-n} )` for a polynomial `g`,
/// with `λ^e` on the cut `[0, -i∞)`.
fn residue_sum(g: &[BigComplex], e: &Float, n: usize, m: usize, prec: u32) -> Result<BigComplex> {
    let order = n.max(m);
    let jet_at = |x0: f64| -> Result<JetSeries> {
        let lam = JetSeries::variable(BigComplex::from_f64(prec, x0, 0.0), order);
        let mut poly = JetSeries::constant(BigComplex::zero(prec), order);
        for c in g.iter().rev() {
            poly = &(&poly * &lam) + &JetSeries::constant(c.clone(), order);
        }
        Ok(&poly * &lam.powf(e, BranchSpec::CutNegImag)?)
    };
    let one = JetSeries::constant(BigComplex::one(prec), order);
    // at λ = 1: (λ+1)^{-n}
    let at1 = jet_at(1.0)?;
    let lam1 = JetSeries::variable(BigComplex::one(prec), order);
    let f1 = &at1 * &(&lam1 + &one).powi(-(n as i64))?;
    // at λ = -1: (λ-1)^{-m}
    let atm1 = jet_at(-1.0)?;
    let lamm1 = JetSeries::variable(BigComplex::from_f64(prec, -1.0, 0.0), order);
    let f2 = &atm1 * &(&lamm1 - &one).powi(-(m as i64))?;
    Ok(f1.coeff(m - 1) + f2.coeff(n - 1))
}

/// `H_s` by residues at `λ = ±1`; `λ^{s-a/2}` on `-π/2 < arg λ < 3π/2`.
pub fn moment_residue(
    s: usize,
    n: usize,
    m: usize,
    a: &Float,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    check_indices(n, m, a)?;
    if s + 1 > n + m {
        return Err(Error::OutOfRange(format!("s = {s} > n + m - 1")));
    }
    let p = ctx.bits();
    let a = Float::with_val(p, a);
    let e = Float::with_val(p, s) - Float::with_val(p, &a / 2u32);
    let r = residue_sum(&[BigComplex::one(p)], &e, n, m, p)?;
    Ok(&residue_prefactor(&a) * &r)
}

pub fn moment_table(n: usize, m: usize, a: &Float, ctx: &PrecisionContext) -> Result<MomentTable> {
    let h = (0..n + m)
        .map(|s| moment_residue(s, n, m, a, ctx))
        .collect::<Result<_>>()?;
    Ok(MomentTable {
        n,
        m,
        a: Float::with_val(ctx.bits(), a),
        h,
    })
}

/// Hypergeometric moment and whether it reproduces the residue value.
#[derive(Clone, Debug)]
pub struct HypergeometricMoment {
    pub value: BigComplex,
    pub verified: bool,
}

/// Real `₂F₁(α, β; γ; x)` for `|x| < 1` by direct summation.
fn hyp2f1_series(alpha: &Float, beta: &Float, gamma: &Float, x: &Float) -> Result<Float> {
    let p = x.prec();
    let mut term = Float::with_val(p, 1);
    let mut sum = Float::with_val(p, 1);
    for k in 0..100_000u64 {
        let num = Float::with_val(p, alpha + k) * Float::with_val(p, beta + k);
        if num.is_zero() {
            return Ok(sum);
        }
        let den = Float::with_val(p, gamma + k) * (k + 1);
        if den.is_zero() {
            return Err(Error::ContinuationFailure("non-positive integer γ".into()));
        }
        term = term * num / den * x;
        sum += &term;
        match (term.get_exp(), sum.get_exp()) {
            (None, _) => return Ok(sum),
            (Some(t), Some(s)) if t < s - p as i32 - 4 && k > 4 => return Ok(sum),
            _ => {}
        }
    }
    Err(Error::ContinuationFailure("series did not converge".into()))
}

/// `₂F₁(α, β; γ; 2 - i0)` through the `1/z` connection formula
/// (requires `β - α ∉ ℤ`).
fn hyp2f1_at_two_below(alpha: &Float, beta: &Float, gamma: &Float) -> Result<BigComplex> {
    let p = alpha.prec();
    let diff = Float::with_val(p, beta - alpha);
    if diff.is_integer() {
        return Err(Error::ContinuationFailure("β - α is an integer".into()));
    }
    let half = Float::with_val(p, 0.5);
    let g = |x: Float| gamma_real(&x).map_err(|e| Error::ContinuationFailure(e.to_string()));
    // (-z)^{-t} at -z = -2 + i0: 2^{-t} e^{-iπt}
    let minus_z_pow = |t: &Float| {
        let modulus = Float::with_val(p, 2).pow(-t.clone());
        BigComplex::polar(&modulus, &(-Float::with_val(p, t * pi(p))))
    };
    let c1 = g(gamma.clone())? * g(diff.clone())? / (g(beta.clone())? * g(Float::with_val(p, gamma - alpha))?);
    let f1 = hyp2f1_series(
        alpha,
        &(Float::with_val(p, alpha - gamma) + 1u32),
        &(Float::with_val(p, alpha - beta) + 1u32),
        &half,
    )?;
    let c2 = g(gamma.clone())? * g(-diff.clone())? / (g(alpha.clone())? * g(Float::with_val(p, gamma - beta))?);
    let f2 = hyp2f1_series(
        beta,
        &(Float::with_val(p, beta - gamma) + 1u32),
        &(Float::with_val(p, beta - alpha) + 1u32),
        &half,
    )?;
    Ok(&minus_z_pow(alpha).scale(&(c1 * f1)) + &minus_z_pow(beta).scale(&(c2 * f2)))
}

/// `H_s = (-1)^{s+m} 2πi Γ(m+n-1+a/2-s) F(m, 1-a/2+s; m+n; 2-i0) / (Γ(a/2-s) (n+m-1)!)`.
pub fn moment_hypergeometric(
    s: usize,
    n: usize,
    m: usize,
    a: &Float,
    ctx: &PrecisionContext,
) -> Result<HypergeometricMoment> {
    check_indices(n, m, a)?;
    if s + 1 > n + m {
        return Err(Error::OutOfRange(format!("s = {s} > n + m - 1")));
    }
    let p = ctx.bits() + 64;
    let a_w = Float::with_val(p, a);
    let half_a = Float::with_val(p, &a_w / 2u32);
    let shift = Float::with_val(p, &half_a - s as u64);
    if shift.is_integer() {
        return Err(Error::GammaPole(shift.to_f64() as i64));
    }
    let alpha = Float::with_val(p, m as u64);
    let beta = Float::with_val(p, 1u32) - &shift;
    let gamma = Float::with_val(p, (m + n) as u64);
    let f = hyp2f1_at_two_below(&alpha, &beta, &gamma)?;
    let num = gamma_real(&(Float::with_val(p, (m + n - 1) as u64) + &shift))?;
    let den = gamma_real(&shift)? * gamma_real(&Float::with_val(p, (n + m) as u64))?;
    let sign = if (s + m) % 2 == 0 { 1.0 } else { -1.0 };
    let two_pi = Float::with_val(p, pi(p) * 2u32);
    let value = f
        .mul_i()
        .scale(&(two_pi * num / den))
        .scale_f64(sign)
        .with_prec(ctx.bits());
    let residue = moment_residue(s, n, m, a, ctx)?;
    let verified = (&value - &residue).abs().to_f64() <= 1e-10 * residue.abs().to_f64().max(1.0);
    Ok(HypergeometricMoment { value, verified })
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(mut a: Vec<Vec<BigComplex>>, prec: u32) -> BigComplex {
    let n = a.len();
    let mut d = BigComplex::one(prec);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].is_zero() {
            return BigComplex::zero(prec);
        }
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d = &d * &a[col][col];
        let inv = a[col][col].recip();
        for r in col + 1..n {
            let f = &a[r][col] * &inv;
            for c in col..n {
                let t = &a[col][c] * &f;
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    d
}

fn hankel_matrix(h: &[BigComplex], l: usize) -> Vec<Vec<BigComplex>> {
    (0..l).map(|j| (0..l).map(|i| h[i + j].clone()).collect()).collect()
}

/// Builds `P_0..P_k` by Cramer ratios of Hankel determinants, `k = (n+m)/2`.
pub fn orthopoly_build(
    n: usize,
    m: usize,
    a: &Float,
    ctx: &PrecisionContext,
) -> Result<HankelSystem> {
    if (n + m) % 2 != 0 {
        return Err(Error::Parity((n, m)));
    }
    let moments = moment_table(n, m, a, ctx)?;
    let p = ctx.bits();
    let k = (n + m) / 2;
    let h = &moments.h;
    let mut dets = vec![BigComplex::one(p)];
    let mut polys = vec![vec![BigComplex::one(p)]];
    let mut norms = Vec::new();
    for l in 1..=k {
        let dl = det(hankel_matrix(h, l), p);
        if dl.is_zero() {
            return Err(Error::SingularHankel(l));
        }
        // ℋ_l c = -(H_{l+j})_j, solved column by column (Cramer).
        let mut coeffs = Vec::with_capacity(l + 1);
        for i in 0..l {
            let mut mat = hankel_matrix(h, l);
            for (j, row) in mat.iter_mut().enumerate() {
                row[i] = -&h[l + j];
            }
            coeffs.push(&det(mat, p) / &dl);
        }
        coeffs.push(BigComplex::one(p));
        norms.push(&dl / &dets[l - 1]);
        dets.push(dl);
        polys.push(coeffs);
    }
    Ok(HankelSystem {
        moments,
        dets,
        polys,
        norms,
    })
}

impl HankelSystem {
    pub fn k(&self) -> usize {
        (self.moments.n + self.moments.m) / 2
    }

    /// `max_{j<l} |Σ_i c_i H_{i+j}|`, the orthogonality defect of `P_l`, and
    /// its cancellation scale `max_j Σ_i |c_i H_{i+j}|`.
    pub fn orthogonality_defect(&self, l: usize) -> (f64, f64) {
        let h = &self.moments.h;
        let c = &self.polys[l];
        let p = h[0].prec();
        let mut worst = 0f64;
        let mut scale = 0f64;
        for j in 0..l {
            let mut acc = BigComplex::zero(p);
            let mut mag = Float::with_val(p, 0);
            for (i, ci) in c.iter().enumerate() {
                let t = ci * &h[i + j];
                mag += t.abs();
                acc = &acc + &t;
            }
            worst = worst.max(acc.abs().to_f64());
            scale = scale.max(mag.to_f64());
        }
        (worst, scale)
    }

    /// Orthogonality defect of `P_l` relative to `|h_l|` (`l < k`) or to the
    /// cancellation scale (`l = k`, where `h_k` would need `H_{n+m}`).
    pub fn orthogonality_residual(&self, l: usize) -> f64 {
        let (d, scale) = self.orthogonality_defect(l);
        if l < self.norms.len() {
            d / self.norms[l].abs().to_f64()
        } else {
            d / scale
        }
    }

    /// `|h_{k-1} - Σ_j c_j H_{k-1+j}| / |h_{k-1}|` with `c` the coefficients of `P_{k-1}`.
    pub fn norm_consistency(&self) -> f64 {
        let k = self.k();
        let h = &self.moments.h;
        let c = &self.polys[k - 1];
        let mut acc = BigComplex::zero(h[0].prec());
        for (j, cj) in c.iter().enumerate() {
            acc = &acc + &(cj * &h[k - 1 + j]);
        }
        let hk = &self.norms[k - 1];
        ((&acc - hk).abs() / hk.abs()).to_f64()
    }

    pub fn eval_poly(&self, l: usize, x: &BigComplex) -> BigComplex {
        let mut acc = BigComplex::zero(x.prec());
        for c in self.polys[l].iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

/// `Z^a(n, m)` from `P_k`:
/// `(-1)^{m+1} / P_k(0) · Σ_{±1} res(P_k(λ) e^{iπa/2} λ^{-1-a/2} (λ-1)^{-m} (λ+1)^{-n})`.
pub fn za_from_system(sys: &HankelSystem) -> Result<BigComplex> {
    let (n, m) = (sys.moments.n, sys.moments.m);
    let a = &sys.moments.a;
    let p = a.prec();
    let k = sys.k();
    let pk0 = sys.polys[k][0].clone();
    if pk0.is_zero() {
        return Err(Error::ZeroAtOrigin);
    }
    let e = Float::with_val(p, -1) - Float::with_val(p, a / 2u32);
    let r = residue_sum(&sys.polys[k], &e, n, m, p)?;
    let eia = BigComplex::cis(&(Float::with_val(p, a * pi(p)) / 2u32));
    let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
    Ok((&(&eia * &r) / &pk0).scale_f64(sign))
}

pub fn za_from_polys(n: usize, m: usize, a: &Float, ctx: &PrecisionContext) -> Result<BigComplex> {
    za_from_system(&orthopoly_build(n, m, a, ctx)?)
}
