//! Lax matrices `U, V`, the wave function `Ψ_{n,m}(λ)` and the isomonodromy
//! matrices `A, B, C, D`.

use rug::Float;

use crate::error::{Error, Result};
use crate::lattice::PowerMapGrid;
use crate::matrix::TransferMatrix;
use crate::numerics::{lifted_power, BigComplex, BranchSpec};

fn need(grid: &PowerMapGrid, n: usize, m: usize) -> Result<()> {
    grid.try_get(n, m).map(|_| ())
}

/// `u_{n,m} = f(n+1,m) - f(n,m)`.
pub fn u_diff(grid: &PowerMapGrid, n: usize, m: usize) -> Result<BigComplex> {
    need(grid, n + 1, m)?;
    let u = grid.get(n + 1, m) - grid.get(n, m);
    if u.is_zero() {
        return Err(Error::ZeroDifference((n, m)));
    }
    Ok(u)
}

/// `v_{n,m} = f(n,m+1) - f(n,m)`.
pub fn v_diff(grid: &PowerMapGrid, n: usize, m: usize) -> Result<BigComplex> {
    need(grid, n, m + 1)?;
    let v = grid.get(n, m + 1) - grid.get(n, m);
    if v.is_zero() {
        return Err(Error::ZeroDifference((n, m)));
    }
    Ok(v)
}

fn u_matrix(u: &BigComplex, lambda: &BigComplex) -> TransferMatrix {
    let one = BigComplex::one(u.prec());
    TransferMatrix::new(one.clone(), -u, lambda / u, one)
}

fn v_matrix(v: &BigComplex, lambda: &BigComplex) -> TransferMatrix {
    let one = BigComplex::one(v.prec());
    TransferMatrix::new(one.clone(), -v, -(lambda / v), one)
}

/// `U = [[1, -u], [λ/u, 1]]`, `V = [[1, -v], [-λ/v, 1]]`.
pub fn build_uv(
    grid: &PowerMapGrid,
    n: usize,
    m: usize,
    lambda: &BigComplex,
) -> Result<(TransferMatrix, TransferMatrix)> {
    let u = u_diff(grid, n, m)?;
    let v = v_diff(grid, n, m)?;
    Ok((u_matrix(&u, lambda), v_matrix(&v, lambda)))
}

/// `λ^{-(a/4)σ3}` on the cut `[0, -i∞)`.
pub fn lambda_power_sigma3(a: &Float, lambda: &BigComplex) -> Result<TransferMatrix> {
    if BranchSpec::CutNegImag.on_cut(lambda) {
        return Err(Error::OnCut);
    }
    let arg = BranchSpec::CutNegImag.arg(lambda);
    let e = Float::with_val(a.prec(), -a.clone() / 4u32);
    Ok(TransferMatrix::sigma3_power(&lifted_power(
        &lambda.abs(),
        &arg,
        &e,
    )))
}

/// `U_{n-1,m}···U_{0,m} V_{0,m-1}···V_{0,0} λ^{-(a/4)σ3}`.
pub fn psi_eval(
    grid: &PowerMapGrid,
    n: usize,
    m: usize,
    lambda: &BigComplex,
) -> Result<TransferMatrix> {
    need(grid, n, m)?;
    let mut x = lambda_power_sigma3(&grid.a, lambda)?;
    for j in 0..m {
        x = &v_matrix(&v_diff(grid, 0, j)?, lambda) * &x;
    }
    for i in 0..n {
        x = &u_matrix(&u_diff(grid, i, m)?, lambda) * &x;
    }
    Ok(x)
}

/// `V_{n,m-1}···V_{n,0} U_{n-1,0}···U_{0,0} λ^{-(a/4)σ3}`.
pub fn psi_eval_alt(
    grid: &PowerMapGrid,
    n: usize,
    m: usize,
    lambda: &BigComplex,
) -> Result<TransferMatrix> {
    need(grid, n, m)?;
    let mut x = lambda_power_sigma3(&grid.a, lambda)?;
    for i in 0..n {
        x = &u_matrix(&u_diff(grid, i, 0)?, lambda) * &x;
    }
    for j in 0..m {
        x = &v_matrix(&v_diff(grid, n, j)?, lambda) * &x;
    }
    Ok(x)
}

/// `|det Ψ - (λ+1)^n (1-λ)^m| / |(λ+1)^n (1-λ)^m|`.
pub fn det_psi_rel_error(
    grid: &PowerMapGrid,
    n: usize,
    m: usize,
    lambda: &BigComplex,
) -> Result<f64> {
    let d = psi_eval(grid, n, m, lambda)?.det();
    let one = BigComplex::one(lambda.prec());
    let expect = &(lambda + &one).powi(n as i64) * &(&one - lambda).powi(m as i64);
    Ok(((&d - &expect).abs() / expect.abs()).to_f64())
}

/// `‖U_{n,m+1} V_{n,m} - V_{n+1,m} U_{n,m}‖_max`.
pub fn check_compatibility(
    grid: &PowerMapGrid,
    n: usize,
    m: usize,
    lambda: &BigComplex,
) -> Result<f64> {
    let u_up = u_matrix(&u_diff(grid, n, m + 1)?, lambda);
    let v_right = v_matrix(&v_diff(grid, n + 1, m)?, lambda);
    let (u, v) = build_uv(grid, n, m, lambda)?;
    Ok((&(&u_up * &v) - &(&v_right * &u)).norm_max().to_f64())
}

/// `B`, `C`, `D` at one site; `A(λ) = -B/(1+λ) + C/(1-λ) + D/λ`.
#[derive(Clone, Debug)]
pub struct IsomonodromyData {
    pub b: TransferMatrix,
    pub c: TransferMatrix,
    pub d: TransferMatrix,
}

/// `-k/(w + w') [[w, w w'], [1, w']]`.
fn rank_one(k: usize, w: &BigComplex, w_prev: &BigComplex) -> Result<TransferMatrix> {
    let s = w + w_prev;
    if s.is_zero() {
        return Err(Error::DegenerateDenominator(None));
    }
    let f = (&BigComplex::from_f64(w.prec(), -(k as f64), 0.0)) / &s;
    Ok(TransferMatrix::new(w.clone(), w * w_prev, BigComplex::one(w.prec()), w_prev.clone())
        .scale(&f))
}

pub fn isomonodromy(grid: &PowerMapGrid, n: usize, m: usize) -> Result<IsomonodromyData> {
    let p = grid.prec();
    let b = if n == 0 {
        TransferMatrix::zero(p)
    } else {
        rank_one(n, &u_diff(grid, n, m)?, &u_diff(grid, n - 1, m)?)
            .map_err(|_| Error::DegenerateDenominator(Some((n, m))))?
    };
    let c = if m == 0 {
        TransferMatrix::zero(p)
    } else {
        rank_one(m, &v_diff(grid, n, m)?, &v_diff(grid, n, m - 1)?)
            .map_err(|_| Error::DegenerateDenominator(Some((n, m))))?
    };
    let quarter = Float::with_val(p, &grid.a / 4u32);
    let half = Float::with_val(p, &grid.a / 2u32);
    let d = TransferMatrix::new(
        BigComplex::from_real(&-quarter.clone()),
        -grid.get(n, m).scale(&half),
        BigComplex::zero(p),
        BigComplex::from_real(&quarter),
    );
    Ok(IsomonodromyData { b, c, d })
}

fn is_singular(lambda: &BigComplex) -> bool {
    lambda.im.is_zero() && (lambda.re.is_zero() || lambda.re == 1 || lambda.re == -1)
}

impl IsomonodromyData {
    pub fn a_matrix(&self, lambda: &BigComplex) -> Result<TransferMatrix> {
        if is_singular(lambda) {
            return Err(Error::SingularPoint);
        }
        let one = BigComplex::one(lambda.prec());
        let b = self.b.scale(&(&one + lambda).recip());
        let c = self.c.scale(&(&one - lambda).recip());
        let d = self.d.scale(&lambda.recip());
        Ok(&(&c - &b) + &d)
    }
}

/// Max of `‖dU/dλ - (A_{n+1,m} U - U A_{n,m})‖` and its `V` analogue.
pub fn check_lambda_equation(
    grid: &PowerMapGrid,
    n: usize,
    m: usize,
    lambda: &BigComplex,
) -> Result<f64> {
    if is_singular(lambda) {
        return Err(Error::SingularPoint);
    }
    let p = grid.prec();
    let a_here = isomonodromy(grid, n, m)?.a_matrix(lambda)?;
    let a_right = isomonodromy(grid, n + 1, m)?.a_matrix(lambda)?;
    let a_up = isomonodromy(grid, n, m + 1)?.a_matrix(lambda)?;
    let u = u_diff(grid, n, m)?;
    let v = v_diff(grid, n, m)?;
    let (um, vm) = (u_matrix(&u, lambda), v_matrix(&v, lambda));
    let z = BigComplex::zero(p);
    let du = TransferMatrix::new(z.clone(), z.clone(), u.recip(), z.clone());
    let dv = TransferMatrix::new(z.clone(), z.clone(), -v.recip(), z);
    let ru = &du - &(&(&a_right * &um) - &(&um * &a_here));
    let rv = &dv - &(&(&a_up * &vm) - &(&vm * &a_here));
    Ok(ru.norm_max().to_f64().max(rv.norm_max().to_f64()))
}

/// Continues `Ψ(λ) λ^{(a/4)σ3}` around a circle of radius `radius` about
/// `center` in `points` steps and returns `‖end - start‖ / ‖start‖`.
pub fn loop_monodromy_residual(
    grid: &PowerMapGrid,
    n: usize,
    m: usize,
    center: &BigComplex,
    radius: f64,
    points: usize,
) -> Result<f64> {
    let p = grid.prec();
    let two_pi = Float::with_val(p, crate::numerics::pi(p) * 2u32);
    let quarter = Float::with_val(p, &grid.a / 4u32);
    let eval = |k: usize, arg_prev: Option<&Float>| -> Result<(TransferMatrix, Float)> {
        let t = Float::with_val(p, &two_pi * k as u64) / points as u64;
        let lambda = center + &BigComplex::polar(&Float::with_val(p, radius), &t);
        // continue arg λ from the previous sample
        let mut arg = lambda.arg();
        if let Some(prev) = arg_prev {
            while Float::with_val(p, &arg - prev) > crate::numerics::pi(p) {
                arg -= &two_pi;
            }
            while Float::with_val(p, prev - &arg) > crate::numerics::pi(p) {
                arg += &two_pi;
            }
        }
        let psi = psi_eval(grid, n, m, &lambda)?;
        let undo = TransferMatrix::sigma3_power(&lifted_power(&lambda.abs(), &arg, &quarter));
        Ok((&psi * &undo, arg))
    };
    let (start, mut arg) = eval(0, None)?;
    let mut last = start.clone();
    for k in 1..=points {
        let (v, a) = eval(k, Some(&arg))?;
        arg = a;
        last = v;
    }
    Ok(((&last - &start).norm_max() / start.norm_max()).to_f64())
}

/// Fits a quadratic to `tr A(λ) λ (1 - λ²)` through three samples and returns
/// the relative misfit at two further samples.
pub fn trace_polynomial_residual(grid: &PowerMapGrid, n: usize, m: usize) -> Result<f64> {
    let p = grid.prec();
    let data = isomonodromy(grid, n, m)?;
    let xs: Vec<BigComplex> = [(0.3, 0.2), (-0.4, 0.7), (1.7, -0.5), (2.2, 1.1), (-0.8, -1.3)]
        .iter()
        .map(|&(r, i)| BigComplex::from_f64(p, r, i))
        .collect();
    let one = BigComplex::one(p);
    let ys: Vec<BigComplex> = xs
        .iter()
        .map(|x| -> Result<BigComplex> {
            let t = data.a_matrix(x)?.trace();
            Ok(&(&t * x) * &(&one - &x.square()))
        })
        .collect::<Result<_>>()?;
    let lagrange = |x: &BigComplex| {
        let mut acc = BigComplex::zero(p);
        for i in 0..3 {
            let mut term = ys[i].clone();
            for j in 0..3 {
                if i != j {
                    term = &term * &(&(x - &xs[j]) / &(&xs[i] - &xs[j]));
                }
            }
            acc = &acc + &term;
        }
        acc
    };
    let mut worst = 0f64;
    for k in 3..5 {
        let r = ((&lagrange(&xs[k]) - &ys[k]).abs() / (Float::with_val(p, 1) + ys[k].abs()))
            .to_f64();
        worst = worst.max(r);
    }
    Ok(worst)
}
