//! The identity suite behind `verify`: every structural relation the library
//! implements, evaluated on one grid and reported as residual vs tolerance.

use std::fmt::Write as _;

use rug::Float;

use crate::asymptotics::{lemma1_check, GContext};
use crate::error::{Result, Site};
use crate::lattice::PowerMapGrid;
use crate::lax::{check_compatibility, check_lambda_equation, det_psi_rel_error};
use crate::numerics::{BigComplex, PrecisionContext};
use crate::ortho::{moment_hypergeometric, moment_residue, orthopoly_build, za_from_system};
use crate::parametrix::{
    b0_matrix, b0_small_xi_residual, gamma0_jump_residual, gamma12_jump_residuals, leading_constant,
    leading_constant_target, ode_residual, p0_hat_zero, pinf_hat, psi0_eval_lifted, Sector, SectorSpec,
};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Worst site, where the check is lattice-local.
    pub site: Option<Site>,
}

impl CheckResult {
    fn new(name: &'static str, worst: Result<(f64, Option<Site>)>, tolerance: f64) -> Self {
        let (residual, site) = match worst {
            Ok((r, s)) if !r.is_nan() => (r, s),
            Ok((_, s)) => (f64::INFINITY, s),
            Err(_) => (f64::INFINITY, None),
        };
        CheckResult {
            name,
            residual,
            tolerance,
            pass: residual <= tolerance,
            site,
        }
    }
}

/// Per-check tolerances; the defaults are calibrated for 256 bits.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub cross_ratio: f64,
    pub constraint: f64,
    pub det_psi: f64,
    pub compatibility: f64,
    pub lambda_equation: f64,
    pub orthopoly: f64,
    pub orthogonality: f64,
    pub moments: f64,
    pub h0_closed_form: f64,
    pub jumps: f64,
    pub ode: f64,
    pub det_constancy: f64,
    pub b0_series: f64,
    pub constant_dets: f64,
    pub leading_constant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cross_ratio: 1e-35,
            constraint: 1e-30,
            det_psi: 1e-30,
            compatibility: 1e-30,
            lambda_equation: 1e-28,
            orthopoly: 1e-12,
            orthogonality: 1e-20,
            moments: 1e-10,
            h0_closed_form: 1e-30,
            jumps: 1e-20,
            ode: 1e-18,
            det_constancy: 1e-20,
            b0_series: 1e-15,
            constant_dets: 1e-25,
            leading_constant: 1e-25,
        }
    }
}

impl Tolerances {
    /// The same tolerance for every check.
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            cross_ratio: tol,
            constraint: tol,
            det_psi: tol,
            compatibility: tol,
            lambda_equation: tol,
            orthopoly: tol,
            orthogonality: tol,
            moments: tol,
            h0_closed_form: tol,
            jumps: tol,
            ode: tol,
            det_constancy: tol,
            b0_series: tol,
            constant_dets: tol,
            leading_constant: tol,
        }
    }
}

/// Spectral samples kept off `{0, ±1}` and the cut of `λ^{a/4}`.
pub fn sample_lambdas(prec: u32) -> [BigComplex; 3] {
    [
        BigComplex::from_f64(prec, 0.3, 0.2),
        BigComplex::from_f64(prec, -1.7, 0.4),
        BigComplex::from_f64(prec, 1.2, -0.9),
    ]
}

fn worst_over(
    sites: impl Iterator<Item = Site>,
    mut f: impl FnMut(usize, usize) -> Result<f64>,
) -> Result<(f64, Option<Site>)> {
    let mut best = (0.0f64, None);
    for (n, m) in sites {
        let r = f(n, m)?;
        let r = if r.is_nan() { f64::INFINITY } else { r };
        if best.1.is_none() || r > best.0 {
            best = (r, Some((n, m)));
        }
    }
    Ok(best)
}

fn square(lo: usize, hi: usize) -> impl Iterator<Item = Site> + Clone {
    (lo..=hi).flat_map(move |n| (lo..=hi).map(move |m| (n, m)))
}

fn rel(x: &BigComplex, y: &BigComplex) -> f64 {
    ((x - y).abs() / y.abs()).to_f64()
}

/// Runs the whole suite on `grid` at the precision of `ctx`.
pub fn verify_grid(grid: &PowerMapGrid, ctx: &PrecisionContext, tol: &Tolerances) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let a = &grid.a;
    let p = ctx.bits();
    let lams = sample_lambdas(p);
    let top = grid.size.min(20);

    out.push(CheckResult::new(
        "cross_ratio",
        Ok(grid.cross_ratio_worst().map_or((0.0, None), |(r, s)| (r, Some(s)))),
        tol.cross_ratio,
    ));
    out.push(CheckResult::new(
        "constraint",
        Ok(grid.constraint_worst().map_or((0.0, None), |(r, s)| (r, Some(s)))),
        tol.constraint,
    ));
    out.push(CheckResult::new(
        "det_psi",
        worst_over(square(0, top), |n, m| {
            lams.iter()
                .map(|l| det_psi_rel_error(grid, n, m, l))
                .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
        }),
        tol.det_psi,
    ));
    let inner = square(0, top.saturating_sub(2));
    out.push(CheckResult::new(
        "compatibility",
        worst_over(inner.clone(), |n, m| {
            lams.iter()
                .map(|l| check_compatibility(grid, n, m, l))
                .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
        }),
        tol.compatibility,
    ));
    out.push(CheckResult::new(
        "lambda_equation",
        worst_over(inner, |n, m| {
            lams.iter()
                .map(|l| check_lambda_equation(grid, n, m, l))
                .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
        }),
        tol.lambda_equation,
    ));

    // determinant route on even sites with n + m <= 16
    let even: Vec<Site> = square(1, grid.size.min(15))
        .filter(|&(n, m)| (n + m) % 2 == 0 && n + m <= 16)
        .collect();
    let mut orth = (0.0f64, None);
    let za = worst_over(even.into_iter(), |n, m| {
        let sys = orthopoly_build(n, m, a, ctx)?;
        for l in 0..=sys.k() {
            let r = sys.orthogonality_residual(l);
            if orth.1.is_none() || r > orth.0 {
                orth = (r, Some((n, m)));
            }
        }
        Ok(rel(&za_from_system(&sys)?, grid.get(n, m)))
    });
    out.push(CheckResult::new("orthopoly_vs_grid", za, tol.orthopoly));
    out.push(CheckResult::new("orthogonality", Ok(orth), tol.orthogonality));

    let pairs = [(1, 1), (2, 3), (4, 4), (6, 1), (1, 6), (6, 6)];
    out.push(CheckResult::new(
        "moments_residue_vs_hypergeometric",
        worst_over(pairs.into_iter(), |n, m| {
            (0..n + m).try_fold(0.0f64, |acc, s| {
                let r = moment_residue(s, n, m, a, ctx)?;
                let h = moment_hypergeometric(s, n, m, a, ctx)?;
                Ok(acc.max(rel(&h.value, &r)))
            })
        }),
        tol.moments,
    ));
    out.push(CheckResult::new(
        "moment_h0_closed_form",
        moment_residue(0, 1, 1, a, ctx).map(|h| {
            let e = BigComplex::cis(&(Float::with_val(p, a * ctx.pi()) / 2u32));
            let want = (&e - &BigComplex::one(p)).mul_i().scale(&ctx.pi());
            (rel(&h, &want), Some((1, 1)))
        }),
        tol.h0_closed_form,
    ));

    out.push(CheckResult::new(
        "lemma1_violations",
        worst_over([(1, 1), (3, 7), (10, 2)].into_iter(), |n, m| {
            let rep = lemma1_check(&GContext::new(n, m, ctx)?, 20, 1e-3, 1e3, p)?;
            Ok(rep.violations() as f64)
        }),
        0.0,
    ));

    parametrix_checks(a, ctx, tol, &mut out);
    out
}

fn parametrix_checks(a: &Float, ctx: &PrecisionContext, tol: &Tolerances, out: &mut Vec<CheckResult>) {
    let p = ctx.bits();
    // θ = -arg(m - in) at (n, m) = (3, 5)
    let theta = Float::with_val(p, 3).atan2(&Float::with_val(p, 5));
    let radii = [0.1, 1.0, 10.0];
    out.push(CheckResult::new(
        "parametrix_gamma0_jump",
        radii.iter().try_fold((0.0f64, None), |acc, &r| {
            Ok((acc.0.max(gamma0_jump_residual(&ctx.real(r), a, &theta, None, ctx)?), None))
        }),
        tol.jumps,
    ));
    out.push(CheckResult::new(
        "parametrix_gamma12_jumps",
        radii.iter().try_fold((0.0f64, None), |acc, &r| {
            let (x, y) = gamma12_jump_residuals(&ctx.real(r), a, &theta, None, ctx)?;
            Ok((acc.0.max(x).max(y), None))
        }),
        tol.jumps,
    ));
    out.push(CheckResult::new(
        "parametrix_ode",
        ode_residual(&ctx.complex(2.0, 1.0), a, &theta, 1e-10, ctx).map(|r| (r, None)),
        tol.ode,
    ));
    let half_i = BigComplex::from_f64(p, 0.0, 0.5);
    let det_const = (|| -> Result<(f64, Option<Site>)> {
        let mut worst = 0.0f64;
        for s in [Sector::S1, Sector::S2, Sector::S3] {
            let spec = SectorSpec::new(theta.clone(), s);
            let (lo, hi) = spec.bounds();
            for (t, r) in [(0.2, 0.5), (0.5, 3.0), (0.8, 20.0)] {
                let arg = Float::with_val(p, &lo * (1.0 - t)) + Float::with_val(p, &hi * t);
                let d = psi0_eval_lifted(&ctx.real(r), &arg, a, &spec, ctx)?.det();
                worst = worst.max(rel(&d, &half_i));
            }
        }
        Ok((worst, None))
    })();
    out.push(CheckResult::new("parametrix_det_constancy", det_const, tol.det_constancy));
    out.push(CheckResult::new(
        "parametrix_b0_small_xi",
        b0_small_xi_residual(&ctx.real(1e-20), a, &theta, ctx).map(|r| (r, None)),
        tol.b0_series,
    ));
    let dets = (|| -> Result<(f64, Option<Site>)> {
        let mut worst = rel(&b0_matrix(a, ctx)?.det(), &half_i);
        worst = worst.max(rel(&p0_hat_zero(a, 3, 5, ctx)?.det(), &half_i));
        worst = worst.max(rel(&pinf_hat(a, 3, 5, ctx)?.det(), &half_i));
        Ok((worst, None))
    })();
    out.push(CheckResult::new("parametrix_constant_dets", dets, tol.constant_dets));
    out.push(CheckResult::new(
        "leading_constant",
        worst_over([(1, 1), (3, 5), (10, 2), (7, 7)].into_iter(), |n, m| {
            Ok(rel(&leading_constant(a, n, m, ctx)?, &leading_constant_target(a, n, m, ctx)?))
        }),
        tol.leading_constant,
    ));
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}

/// `name,residual,tolerance,pass,site` with a header row.
pub fn report_csv(results: &[CheckResult]) -> String {
    let mut s = String::from("name,residual,tolerance,pass,site\n");
    for r in results {
        let site = r.site.map_or(String::new(), |(n, m)| format!("{n}:{m}"));
        let _ = writeln!(
            s,
            "{},{:.3e},{:.1e},{},{}",
            r.name,
            r.residual,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" },
            site
        );
    }
    s
}
