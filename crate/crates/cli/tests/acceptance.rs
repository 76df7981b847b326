//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use zpow_core::asymptotics::{asymptotic_table, lemma1_check, loglog_fit, GContext, Ray};
use zpow_core::discrete_log::{
    green_predictor, hirota_W, log_predictor, GreenGrid, LogGrid,
};
use zpow_core::lax::{check_compatibility, check_lambda_equation, det_psi_rel_error};
use zpow_core::numerics::pi;
use zpow_core::ortho::{moment_residue, orthopoly_build, za_from_system};
use zpow_core::parametrix::{
    b0_matrix, b0_small_xi_residual, gamma0_jump_residual, leading_constant, ode_residual,
    p0_hat_zero, pinf_hat, psi0_eval_lifted, Sector, SectorSpec,
};
use zpow_core::pattern::{extract_pattern, kite_overlaps};
use zpow_core::{evolve_grid, BigComplex, PrecisionContext};

fn ctx() -> PrecisionContext {
    PrecisionContext::with_bits(256).unwrap()
}

fn rel(x: &BigComplex, y: &BigComplex) -> f64 {
    ((x - y).abs() / y.abs()).to_f64()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(k: usize, title: &str, o: &Outcome) {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("criterion {k:>2} {tag}: {title}: {}", o.detail);
}

fn a_values(c: &PrecisionContext) -> Vec<(String, Float)> {
    vec![
        ("1/2".into(), c.real(0.5)),
        ("2/3".into(), c.ratio(2, 3)),
        ("3/2".into(), c.real(1.5)),
    ]
}

fn c1_identity_lattice() -> Outcome {
    let c = ctx();
    let t = Instant::now();
    let g = evolve_grid(&c.real(1.0), 100, &c).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let mut worst = 0.0f64;
    for n in 0..=100 {
        for m in 0..=100 {
            worst = worst.max((g.get(n, m) - &c.complex(n as f64, m as f64)).abs().to_f64());
        }
    }
    Outcome {
        pass: worst <= 1e-45 && secs < 5.0,
        detail: format!("max |Z - (n+im)| = {worst:.2e} (<= 1e-45), evolve time {secs:.2} s (< 5 s)"),
    }
}

fn c2_power_law() -> Outcome {
    let c = ctx();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, a) in a_values(&c) {
        let g = evolve_grid(&a, 100, &c).unwrap();
        let rows: Vec<_> = asymptotic_table(&g, Ray::Diagonal, &c)
            .unwrap()
            .into_iter()
            .filter(|r| r.n >= 20)
            .collect();
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.r, r.rel_error)).collect();
        let (slope, _) = loglog_fit(&pts);
        let mut scaled: Vec<f64> = rows.iter().map(|r| r.rel_error * r.r * r.r).collect();
        scaled.sort_by(f64::total_cmp);
        let med = scaled[scaled.len() / 2];
        let (lo, hi) = (scaled[0] / med, scaled[scaled.len() - 1] / med);
        let at140 = rows.iter().find(|r| r.n == 99).unwrap().rel_error;
        let ok = (-2.4..=-1.6).contains(&slope) && lo >= 1.0 / 3.0 && hi <= 3.0 && at140 <= 1e-3;
        pass &= ok;
        parts.push(format!(
            "a={name} slope {slope:.3} spread/median [{lo:.3}, {hi:.3}] err@r=140 {at140:.2e}"
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c3_integrability() -> Outcome {
    let c = ctx();
    let lams = [c.complex(0.3, 0.2), c.complex(-1.7, 0.4), c.complex(1.2, -0.9)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, a) in a_values(&c) {
        let g = evolve_grid(&a, 22, &c).unwrap();
        let (mut cr, mut co, mut cp, mut le, mut dp) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for n in 0..=20 {
            for m in 0..=20 {
                cr = cr.max(g.cross_ratio_residual(n, m));
                if n >= 1 && m >= 1 {
                    co = co.max(g.constraint_residual(n, m));
                }
                for l in &lams {
                    cp = cp.max(check_compatibility(&g, n, m, l).unwrap());
                    le = le.max(check_lambda_equation(&g, n, m, l).unwrap());
                    dp = dp.max(det_psi_rel_error(&g, n, m, l).unwrap());
                }
            }
        }
        let ok = cr <= 1e-35 && co <= 1e-30 && cp <= 1e-30 && le <= 1e-28 && dp <= 1e-30;
        pass &= ok;
        parts.push(format!(
            "a={name} cr {cr:.1e} constraint {co:.1e} compat {cp:.1e} lambda {le:.1e} detPsi {dp:.1e}"
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c4_determinant_route() -> Outcome {
    let c = ctx();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut avals = a_values(&c);
    avals.insert(2, ("1".into(), c.real(1.0)));
    for (name, a) in avals {
        let g = evolve_grid(&a, 15, &c).unwrap();
        let (mut za, mut orth, mut sites) = (0.0f64, 0.0f64, 0);
        for n in 1..=15 {
            for m in 1..=15 {
                if (n + m) % 2 != 0 || n + m > 16 {
                    continue;
                }
                let sys = orthopoly_build(n, m, &a, &c).unwrap();
                for l in 0..=sys.k() {
                    orth = orth.max(sys.orthogonality_residual(l));
                }
                za = za.max(rel(&za_from_system(&sys).unwrap(), g.get(n, m)));
                sites += 1;
            }
        }
        pass &= za <= 1e-12 && orth <= 1e-20;
        parts.push(format!("a={name} {sites} sites za {za:.1e} orth {orth:.1e}"));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

/// Independent moment oracle: the integral along `λ = -it` of the jump of
/// `λ^{-a/2}` against `λ^s/((λ-1)^m (λ+1)^n)`, by exp-sinh quadrature
/// `t = exp((π/2) sinh u)`, `|u| <= 7`. Returns the values for all `s` at
/// step 1/64 and the largest relative change against step 1/32.
fn moment_quadrature(n: usize, m: usize, a: f64) -> (Vec<BigComplex>, f64) {
    let p = 160;
    let a = Float::with_val(p, a);
    let pi = pi(p);
    let half_pi = Float::with_val(p, &pi / 2u32);
    let ha = Float::with_val(p, &a / 2u32);
    let phase = BigComplex::from_imag(&((Float::with_val(p, &a * &pi) / 2u32).sin() * 2u32))
        * BigComplex::cis(&(Float::with_val(p, &a * &pi) / 4u32));
    let one = BigComplex::one(p);
    let smax = n + m;
    let h = 1.0 / 64.0;
    let steps = (7.0 / h) as i64;
    let mut fine = vec![BigComplex::zero(p); smax];
    let mut coarse = vec![BigComplex::zero(p); smax];
    for j in -steps..=steps {
        let u: Float = Float::with_val(p, j) * h;
        let t = Float::with_val(p, &half_pi * Float::with_val(p, u.sinh_ref())).exp();
        let dt = Float::with_val(p, &t * &half_pi) * u.cosh();
        let lam = BigComplex::from_imag(&-t.clone());
        let den = (&lam - &one).powi(m as i64) * (&lam + &one).powi(n as i64);
        let base = (Float::with_val(p, t.ln_ref()) * Float::with_val(p, -&ha)).exp() * dt;
        let mut w = &BigComplex::from_real(&base) / &den;
        for s in 0..smax {
            fine[s] = &fine[s] + &w;
            if j % 2 == 0 {
                coarse[s] = &coarse[s] + &w;
            }
            w = w.scale(&t);
        }
    }
    let mut out = Vec::new();
    let mut est = 0.0f64;
    let minus_i = BigComplex::from_f64(p, 0.0, -1.0);
    for s in 0..smax {
        let k = &phase * &minus_i.powi(s as i64 + 1);
        let f = (&k * &fine[s]).scale_f64(h);
        let g = (&k * &coarse[s]).scale_f64(2.0 * h);
        est = est.max(rel(&g, &f));
        out.push(f.with_prec(256));
    }
    (out, est)
}

fn c5_moments() -> Outcome {
    let c = ctx();
    let (mut worst, mut est) = (0.0f64, 0.0f64);
    for a in [0.5, 1.3] {
        for n in 1..=6 {
            for m in 1..=6 {
                let (q, e) = moment_quadrature(n, m, a);
                est = est.max(e);
                for (s, qs) in q.iter().enumerate() {
                    let r = moment_residue(s, n, m, &c.real(a), &c).unwrap();
                    worst = worst.max(rel(&r, qs));
                }
            }
        }
    }
    let mut h0 = 0.0f64;
    for a in [0.5, 1.0, 1.3] {
        let a = c.real(a);
        let h = moment_residue(0, 1, 1, &a, &c).unwrap();
        let e = BigComplex::cis(&(Float::with_val(256, &a * pi(256)) / 2u32));
        let want = (&e - &BigComplex::one(256)).mul_i().scale(&pi(256));
        h0 = h0.max(rel(&h, &want));
    }
    Outcome {
        pass: worst <= 1e-10 && est <= 1e-12 && h0 <= 1e-30,
        detail: format!(
            "residue vs quadrature {worst:.1e} (oracle step change {est:.1e}); H0 closed form {h0:.1e}"
        ),
    }
}

fn c6_parametrix() -> Outcome {
    let c = ctx();
    let p = c.bits();
    let half_i = BigComplex::from_f64(p, 0.0, 0.5);
    let (mut jump, mut ode, mut detc, mut b0s, mut dets) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (a, th) in [(0.7, 0.3), (0.5, 0.9), (1.5, 0.1)] {
        let (a, th) = (c.real(a), c.real(th));
        for r in [0.1, 1.0, 10.0] {
            jump = jump.max(gamma0_jump_residual(&c.real(r), &a, &th, None, &c).unwrap());
        }
        ode = ode.max(ode_residual(&c.complex(2.0, 1.0), &a, &th, 1e-10, &c).unwrap());
        for s in [Sector::S1, Sector::S2, Sector::S3] {
            let spec = SectorSpec::new(th.clone(), s);
            let (lo, hi) = spec.bounds();
            for (t, r) in [(0.2, 0.5), (0.5, 3.0), (0.8, 20.0)] {
                let arg = Float::with_val(p, &lo * (1.0 - t)) + Float::with_val(p, &hi * t);
                let d = psi0_eval_lifted(&c.real(r), &arg, &a, &spec, &c).unwrap().det();
                detc = detc.max(rel(&d, &half_i));
            }
        }
        b0s = b0s.max(b0_small_xi_residual(&c.real(1e-20), &a, &th, &c).unwrap());
        dets = dets.max(rel(&b0_matrix(&a, &c).unwrap().det(), &half_i));
        for (n, m) in [(1, 1), (3, 5), (8, 2)] {
            dets = dets.max(rel(&p0_hat_zero(&a, n, m, &c).unwrap().det(), &half_i));
            dets = dets.max(rel(&pinf_hat(&a, n, m, &c).unwrap().det(), &half_i));
        }
    }
    // leading constant against c(a) ((n+im)/2)^a built from MPFR Γ and a
    // principal logarithm, independently of the predictor code
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut lead = 0.0f64;
    for _ in 0..10 {
        let a = c.real(rng.gen_range(0.05..1.95));
        let (n, m) = (rng.gen_range(1..40usize), rng.gen_range(1..40usize));
        let h = Float::with_val(p, &a / 2u32);
        let ca = Float::with_val(p, 1 - h.clone()).gamma() / Float::with_val(p, 1 + h).gamma();
        let z = c.complex(n as f64 / 2.0, m as f64 / 2.0);
        let want = z.ln().scale(&a).exp().scale(&ca);
        lead = lead.max(rel(&leading_constant(&a, n, m, &c).unwrap(), &want));
    }
    Outcome {
        pass: jump <= 1e-20 && ode <= 1e-18 && detc <= 1e-20 && b0s <= 1e-15 && dets <= 1e-25 && lead <= 1e-25,
        detail: format!(
            "jump {jump:.1e} ode {ode:.1e} det const {detc:.1e} B0 series {b0s:.1e} dets {dets:.1e} leading {lead:.1e}"
        ),
    }
}

fn c7_quadrant_bound() -> Outcome {
    let c = ctx();
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, m) in [(1, 1), (3, 7), (10, 2)] {
        let rep = lemma1_check(&GContext::new(n, m, &c).unwrap(), 20, 1e-3, 1e3, 256).unwrap();
        pass &= rep.violations() == 0 && rep.first_quadrant_points == 400 && rep.second_quadrant_points == 400;
        parts.push(format!(
            "({n},{m}) {}+{} points, {} violations",
            rep.first_quadrant_points,
            rep.second_quadrant_points,
            rep.violations()
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c8_log_and_green() -> Outcome {
    let c = ctx();
    let eps = c.real(1e-12);
    let half = Float::with_val(256, &eps / 2u32);
    let size = 104;
    let logs = LogGrid::compute(size, &eps, &c).unwrap();
    let logs_half = LogGrid::compute(size, &half, &c).unwrap();
    let green = GreenGrid::compute(size + 1, &eps, &c).unwrap();
    let green_half = GreenGrid::compute(size + 1, &half, &c).unwrap();
    let (mut cl, mut cg) = (0.0f64, 0.0f64);
    let (mut sites, mut rich_ok) = (0, true);
    let mut diag = Vec::new();
    for ray in Ray::ALL {
        for (n, m) in ray.sites(size) {
            let r = (n as f64).hypot(m as f64);
            if (n + m) % 2 != 0 || !(30.0..=120.0).contains(&r) {
                continue;
            }
            sites += 1;
            let l = logs.get(n, m).unwrap();
            let dl = (&l.value - &log_predictor(n, m, &c).unwrap()).abs().to_f64();
            cl = cl.max(dl * r * r / r.ln());
            let g = green.get(n, m).unwrap();
            let dg = (g.value.clone() - green_predictor(n, m, &c).unwrap()).abs().to_f64();
            cg = cg.max(dg * r / r.ln());
            let lh = &logs_half.get(n, m).unwrap().value;
            let gh = &green_half.get(n, m).unwrap().value;
            rich_ok &= (&l.value - lh).abs().to_f64() < l.error;
            rich_ok &= (g.value.clone() - gh).abs().to_f64() < g.error;
            if matches!(ray, Ray::Diagonal) {
                diag.push((r, dl));
            }
        }
    }
    let (slope, _) = loglog_fit(&diag);
    Outcome {
        pass: cl <= 10.0 && cg <= 10.0 && rich_ok && slope <= -1.6,
        detail: format!(
            "{sites} sites; max |L - law| r^2/log r = {cl:.3}, max |ell - law| r/log r = {cg:.3} (<= 10); \
             step-halving within estimates: {rich_ok}; L error slope on n=m {slope:.3} (<= -1.6)"
        ),
    }
}

fn c9_circle_pattern() -> Outcome {
    let c = ctx();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, a) in a_values(&c) {
        let g = evolve_grid(&a, 40, &c).unwrap();
        let doc = match extract_pattern(&g, 1e-22) {
            Ok(d) => d,
            Err(e) => {
                pass = false;
                parts.push(format!("a={name} extraction failed: {e}"));
                continue;
            }
        };
        let negative = doc.negative_kites().len();
        let overlaps = kite_overlaps(&doc, 20).len();
        let mut hw = 0.0f64;
        for circ in &doc.circles {
            let (n, m) = circ.site;
            if n < g.size {
                let w = hirota_W(&g, n, m).unwrap();
                hw = hw.max(((w - &circ.radius) / &circ.radius).abs().to_f64());
            }
        }
        let ok = doc.max_spread <= 1e-25 && doc.max_orthogonality <= 1e-22 && negative == 0 && overlaps == 0 && hw <= 1e-25;
        pass &= ok;
        parts.push(format!(
            "a={name} spread {:.1e} orth {:.1e} negative kites {negative} overlaps {overlaps} |r - W| {hw:.1e}",
            doc.max_spread, doc.max_orthogonality
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c10_reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 6] = [
        &["evolve", "--a", "2/3", "--n", "16"],
        &["verify", "--a", "2/3", "--n", "16"],
        &["table", "--a", "2/3", "--n", "40", "--ray", "all"],
        &["loggreen", "--n", "20", "--window", "10"],
        &["pattern", "--a", "1.5", "--n", "12", "--window", "12"],
        &["moments", "--a", "0.5", "--n", "3", "--m", "5"],
    ];
    let mut bad = Vec::new();
    for args in runs {
        let mut outs = Vec::new();
        for k in 0..2 {
            let f = dir.path().join(format!("{}-{k}", args[0]));
            let o = Command::new(env!("CARGO_BIN_EXE_zpow"))
                .args(args)
                .arg("--out")
                .arg(&f)
                .env_remove("ZPOW_BITS")
                .output()
                .unwrap();
            outs.push((o.status.code(), o.stdout, o.stderr, std::fs::read(&f).ok()));
        }
        if outs[0] != outs[1] || outs[0].0 != Some(0) {
            bad.push(args[0]);
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "six commands, two runs each, identical bytes".into()
        } else {
            format!("differing or failing: {bad:?}")
        },
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact a=1 lattice", c1_identity_lattice),
        ("power-law asymptotics", c2_power_law),
        ("integrability identities", c3_integrability),
        ("determinant route", c4_determinant_route),
        ("moment cross-check", c5_moments),
        ("parametrix suite", c6_parametrix),
        ("|H| off the imaginary axis", c7_quadrant_bound),
        ("discrete log and Green's function", c8_log_and_green),
        ("circle pattern", c9_circle_pattern),
        ("reproducibility", c10_reproducibility),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let o = f();
        report(k + 1, title, &o);
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
