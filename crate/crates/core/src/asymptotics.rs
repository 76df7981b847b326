//! The g-function, `H(λ)`, the conformal map `ξ(λ)` and the large-`(n, m)`
//! law `Z^a ≈ c(a) ((n+im)/2)^a`.

use rug::Float;

use crate::error::{Error, Result};
use crate::lattice::PowerMapGrid;
use crate::numerics::{gamma_real, pi, BigComplex, BranchSpec, PrecisionContext};

/// `(n, m)` with `r = √(n²+m²)` and `θ = -arg(m - in) ∈ [0, π/2]`.
#[derive(Clone, Debug)]
pub struct GContext {
    pub n: usize,
    pub m: usize,
    pub r: Float,
    pub theta: Float,
}

impl GContext {
    pub fn new(n: usize, m: usize, ctx: &PrecisionContext) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::OutOfRange(format!("n = {n}, m = {m} must be >= 1")));
        }
        let p = ctx.bits();
        let (nf, mf) = (Float::with_val(p, n), Float::with_val(p, m));
        let r = Float::with_val(p, nf.clone().hypot(&mf));
        let theta = nf.atan2(&mf);
        Ok(GContext { n, m, r, theta })
    }

    /// `m - in`.
    pub fn m_minus_in(&self, prec: u32) -> BigComplex {
        BigComplex::from_f64(prec, self.m as f64, -(self.n as f64))
    }
}

#[derive(Clone, Debug)]
pub struct AsymptoticRow {
    pub n: usize,
    pub m: usize,
    pub r: f64,
    pub predicted: BigComplex,
    pub actual: BigComplex,
    pub rel_error: f64,
}

/// `c(a) = Γ(1 - a/2) / Γ(1 + a/2)`.
pub fn c_of_a(a: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.bits();
    let h = Float::with_val(p, a / 2u32);
    let one = Float::with_val(p, 1);
    Ok(gamma_real(&Float::with_val(p, &one - &h))? / gamma_real(&(one + h))?)
}

/// `c(a) ((n + im)/2)^a`, principal branch.
pub fn predict(n: usize, m: usize, a: &Float, ctx: &PrecisionContext) -> Result<BigComplex> {
    if n == 0 && m == 0 {
        return Err(Error::OutOfRange("(n, m) = (0, 0)".into()));
    }
    let p = ctx.bits();
    let z = BigComplex::from_f64(p, n as f64 / 2.0, m as f64 / 2.0);
    let pow = z.ln().scale(a).exp();
    Ok(pow.scale(&c_of_a(a, ctx)?))
}

pub fn asymptotic_row(
    grid: &PowerMapGrid,
    n: usize,
    m: usize,
    ctx: &PrecisionContext,
) -> Result<AsymptoticRow> {
    let actual = grid.try_get(n, m)?.clone();
    let predicted = predict(n, m, &grid.a, ctx)?;
    let one = BigComplex::one(ctx.bits());
    let rel_error = (&(&actual / &predicted) - &one).abs().to_f64();
    Ok(AsymptoticRow {
        n,
        m,
        r: ((n * n + m * m) as f64).sqrt(),
        predicted,
        actual,
        rel_error,
    })
}

/// Direction of an asymptotic table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ray {
    /// `n = m`
    Diagonal,
    /// `n = 2m`
    NTwiceM,
    /// `m = 2n`
    MTwiceN,
}

impl Ray {
    pub const ALL: [Ray; 3] = [Ray::Diagonal, Ray::NTwiceM, Ray::MTwiceN];

    pub fn name(self) -> &'static str {
        match self {
            Ray::Diagonal => "n=m",
            Ray::NTwiceM => "n=2m",
            Ray::MTwiceN => "m=2n",
        }
    }

    /// The `t`-th site on the ray.
    pub fn site(self, t: usize) -> (usize, usize) {
        match self {
            Ray::Diagonal => (t, t),
            Ray::NTwiceM => (2 * t, t),
            Ray::MTwiceN => (t, 2 * t),
        }
    }

    /// Sites with `max(n, m) <= limit` (and `t >= 1`).
    pub fn sites(self, limit: usize) -> impl Iterator<Item = (usize, usize)> {
        (1..).map(move |t| self.site(t)).take_while(move |&(n, m)| n.max(m) <= limit)
    }
}

/// Rows along `ray` for all sites inside the grid.
pub fn asymptotic_table(
    grid: &PowerMapGrid,
    ray: Ray,
    ctx: &PrecisionContext,
) -> Result<Vec<AsymptoticRow>> {
    ray.sites(grid.size)
        .map(|(n, m)| asymptotic_row(grid, n, m, ctx))
        .collect()
}

/// Least-squares slope and intercept of `ln y` against `ln x`.
pub fn loglog_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let k = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    (slope, (sy - slope * sx) / k)
}

/// `√λ` with `arg λ` in the branch's range.
fn sqrt_on(lambda: &BigComplex, spec: BranchSpec) -> Result<BigComplex> {
    if spec.on_cut(lambda) {
        return Err(Error::OnCut);
    }
    let p = lambda.prec();
    let half = Float::with_val(p, spec.arg(lambda) / 2u32);
    Ok(BigComplex::polar(&lambda.abs().sqrt(), &half))
}

/// `g(λ) = m log(1 + √λ) + n log(i + √λ)`; `√λ` on the cut `[0, -i∞)`,
/// principal logarithms.
pub fn g_eval(lambda: &BigComplex, g: &GContext) -> Result<BigComplex> {
    let s = sqrt_on(lambda, BranchSpec::CutNegImag)?;
    g_from_sqrt(&s, g)
}

/// `g` at `λ = s²` from a chosen root `s` (for one-sided limits on the cut).
pub fn g_from_sqrt(s: &BigComplex, g: &GContext) -> Result<BigComplex> {
    let p = s.prec();
    let one = BigComplex::one(p);
    let i = BigComplex::i(p);
    let a = &one + s;
    let b = &i + s;
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    Ok(&a.ln().scale_f64(g.m as f64) + &b.ln().scale_f64(g.n as f64))
}

/// `H(λ) = ((1+√λ)/(1-√λ))^m ((i+√λ)/(i-√λ))^n`, `√λ` on the cut `[0, +i∞)`.
pub fn big_h_eval(lambda: &BigComplex, g: &GContext) -> Result<BigComplex> {
    let s = sqrt_on(lambda, BranchSpec::CutPosImag)?;
    let p = s.prec();
    let one = BigComplex::one(p);
    let i = BigComplex::i(p);
    let f1 = &(&one + &s) / &(&one - &s);
    let f2 = &(&i + &s) / &(&i - &s);
    Ok(&f1.powi(g.m as i64) * &f2.powi(g.n as i64))
}

/// `h(λ) = m Log((1+√λ)/(1-√λ)) + n Log((i+√λ)/(i-√λ))` with the same root as
/// `big_h_eval`, principal logarithms (`exp h = H`).
pub fn h_eval(lambda: &BigComplex, g: &GContext) -> Result<BigComplex> {
    let s = sqrt_on(lambda, BranchSpec::CutPosImag)?;
    let p = s.prec();
    let one = BigComplex::one(p);
    let i = BigComplex::i(p);
    let f1 = &(&one + &s) / &(&one - &s);
    let f2 = &(&i + &s) / &(&i - &s);
    Ok(&f1.ln().scale_f64(g.m as f64) + &f2.ln().scale_f64(g.n as f64))
}

/// `b_j = 2(m - i(-1)^j n)/(2j+1)`: `h₀(λ) = √λ Σ_j b_j λ^j`.
fn h0_coefficient(j: usize, g: &GContext, prec: u32) -> BigComplex {
    let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
    BigComplex::from_f64(prec, 2.0 * g.m as f64, 2.0 * sign * g.n as f64)
        .div_u64(2 * j as u64 + 1)
}

/// `Σ_j b_j λ^j` to working precision, `|λ| < 1`.
fn h0_reduced(lambda: &BigComplex, g: &GContext) -> Result<BigComplex> {
    let p = lambda.prec();
    if !(lambda.abs() < 1) {
        return Err(Error::OutOfChart);
    }
    let mut sum = BigComplex::zero(p);
    let mut pow = BigComplex::one(p);
    for j in 0..1_000_000 {
        let t = &h0_coefficient(j, g, p) * &pow;
        sum = &sum + &t;
        match (t.mag_exp(), sum.mag_exp()) {
            (None, _) => break,
            (Some(te), Some(se)) if te < se - p as i32 - 8 => break,
            _ => {}
        }
        pow = &pow * lambda;
    }
    Ok(sum)
}

/// `h₀(λ) = m log((1+√λ)/(1-√λ)) + n log((i+√λ)/(i-√λ))` near 0, `√λ` on
/// the cut `[0, -i∞)`.
pub fn h0_eval(lambda: &BigComplex, g: &GContext) -> Result<BigComplex> {
    let s = sqrt_on(lambda, BranchSpec::CutNegImag)?;
    Ok(&s * &h0_reduced(lambda, g)?)
}

/// `ξ(λ) = h₀(λ)² = λ (Σ_j b_j λ^j)²`, holomorphic on `|λ| < 1`.
pub fn xi_map(lambda: &BigComplex, g: &GContext) -> Result<BigComplex> {
    let r = h0_reduced(lambda, g)?;
    Ok(lambda * &r.square())
}

/// `c_1..c_K` with `ξ(λ) = 4(m-in)² Σ_k c_k λ^k` (so `c_1 = 1`).
pub fn xi_coefficients(g: &GContext, count: usize, prec: u32) -> Vec<BigComplex> {
    let b: Vec<BigComplex> = (0..count).map(|j| h0_coefficient(j, g, prec)).collect();
    let lead = b[0].square();
    (0..count)
        .map(|k| {
            let mut acc = BigComplex::zero(prec);
            for i in 0..=k {
                acc = &acc + &(&b[i] * &b[k - i]);
            }
            &acc / &lead
        })
        .collect()
}

/// Counts of points where the quadrant bound on `|H|` fails, on
/// `side × side` log-polar grids in the open first and second quadrants,
/// `r_min <= |λ| <= r_max`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub first_quadrant_points: usize,
    pub first_quadrant_violations: usize,
    pub second_quadrant_points: usize,
    pub second_quadrant_violations: usize,
}

impl LemmaReport {
    pub fn violations(&self) -> usize {
        self.first_quadrant_violations + self.second_quadrant_violations
    }
}

/// Radii are log-spaced including both ends; angles are cell midpoints of
/// `(0, π/2)`, so no sample sits on an axis where `|H| = 1` can hold.
pub fn lemma1_check(
    g: &GContext,
    side: usize,
    r_min: f64,
    r_max: f64,
    prec: u32,
) -> Result<LemmaReport> {
    let mut rep = LemmaReport::default();
    let half_pi = Float::with_val(prec, pi(prec) / 2u32);
    let (l0, l1) = (r_min.ln(), r_max.ln());
    for i in 0..side {
        let t = if side == 1 { 0.0 } else { i as f64 / (side - 1) as f64 };
        let r = Float::with_val(prec, l0 + (l1 - l0) * t).exp();
        for j in 0..side {
            let phi = Float::with_val(prec, &half_pi * (j as f64 + 0.5)) / side as u64;
            let z1 = BigComplex::polar(&r, &phi);
            let z2 = BigComplex::polar(&r, &(Float::with_val(prec, &phi + &half_pi)));
            rep.first_quadrant_points += 1;
            if !(big_h_eval(&z1, g)?.abs() > 1) {
                rep.first_quadrant_violations += 1;
            }
            rep.second_quadrant_points += 1;
            if !(big_h_eval(&z2, g)?.abs() < 1) {
                rep.second_quadrant_violations += 1;
            }
        }
    }
    Ok(rep)
}

/// `|g(λ) - ((m+n)/2) log λ|` (principal `log λ`).
pub fn g_infinity_defect(lambda: &BigComplex, g: &GContext) -> Result<f64> {
    let lead = lambda.ln().scale_f64((g.m + g.n) as f64 / 2.0);
    Ok((&g_eval(lambda, g)? - &lead).abs().to_f64())
}

/// Reduces the imaginary part of `z` into `(-π, π]`.
pub fn reduce_mod_2pi_i(z: &BigComplex) -> BigComplex {
    let p = z.prec();
    let two_pi = Float::with_val(p, pi(p) * 2u32);
    let k = Float::with_val(p, &z.im / &two_pi).round();
    let mut im = Float::with_val(p, &z.im - k * &two_pi);
    if im <= -pi(p) {
        im += &two_pi;
    }
    BigComplex::new(z.re.clone(), im)
}
