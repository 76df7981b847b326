use proptest::prelude::*;
use rug::Float;
use zpow_core::numerics::pi;
use zpow_core::*;

fn ctx() -> PrecisionContext {
    PrecisionContext::with_bits(256).unwrap()
}

fn close(a: &BigComplex, b: &BigComplex, tol: f64) -> bool {
    (a - b).abs().to_f64() <= tol
}

/// Residual of the axis constraint `a f = 2k (x - f)(f - p)/(x - p)`.
fn axis_oracle(p: &BigComplex, f: &BigComplex, x: &BigComplex, k: usize, a: &Float) -> f64 {
    let rhs = &(&(x - f) * &(f - p)).scale_f64(2.0 * k as f64) / &(x - p);
    (&f.scale(a) - &rhs).abs().to_f64()
}

#[test]
fn axis_step_examples() {
    let c = ctx();
    let (z, one) = (BigComplex::zero(256), BigComplex::one(256));
    let x = axis_step(&z, &one, 1, &c.real(1.0), AxisKind::Horizontal).unwrap();
    assert!(close(&x, &c.complex(2.0, 0.0), 1e-70));
    let a = c.ratio(2, 5);
    let x = axis_step(&z, &one, 1, &a, AxisKind::Horizontal).unwrap();
    let want = BigComplex::from_real(&(Float::with_val(256, 2) / (Float::with_val(256, 2) - &a)));
    assert!(close(&x, &want, 1e-70));
    let rot = BigComplex::cis(&(Float::with_val(256, &a * pi(256)) / 2u32));
    let y = axis_step(&z, &rot, 1, &a, AxisKind::Vertical).unwrap();
    assert!(close(&y, &(&rot * &want), 1e-70));
}

#[test]
fn axis_step_degenerate() {
    // a f = 2k (f - p): f = 1, p = 0.75, k = 2, a = 1
    let c = ctx();
    let r = axis_step(&c.complex(0.75, 0.0), &c.complex(1.0, 0.0), 2, &c.real(1.0), AxisKind::Horizontal);
    assert!(matches!(r, Err(Error::DegenerateDenominator(_))));
}

#[test]
fn cross_ratio_fill_examples() {
    let c = ctx();
    let x = cross_ratio_fill(&c.complex(0.0, 0.0), &c.complex(1.0, 0.0), &c.complex(0.0, 1.0)).unwrap();
    assert!(close(&x, &c.complex(1.0, 1.0), 1e-70));
    let p = c.complex(7.0, 3.0);
    let x = cross_ratio_fill(&p, &c.complex(8.0, 3.0), &c.complex(7.0, 4.0)).unwrap();
    assert!(close(&x, &c.complex(8.0, 4.0), 1e-70));
    let r = cross_ratio_fill(&c.complex(1.0, 0.0), &c.complex(0.0, 0.0), &c.complex(2.0, 0.0));
    assert!(matches!(r, Err(Error::DegenerateDenominator(_))));
    let r = cross_ratio_fill(&c.complex(1.0, 0.0), &c.complex(1.0, 0.0), &c.complex(2.0, 0.0));
    assert!(matches!(r, Err(Error::CoincidentVertex(_))));
}

#[test]
fn f11_at_two_thirds() {
    let c = ctx();
    let g = evolve_grid(&c.ratio(2, 3), 2, &c).unwrap();
    let want = BigComplex::new(Float::with_val(256, 1), Float::with_val(256, 3).sqrt().recip());
    assert!(close(g.get(1, 1), &want, 1e-70));
}

#[test]
fn a_one_is_identity_lattice() {
    let c = ctx();
    let g = evolve_grid(&c.real(1.0), 100, &c).unwrap();
    let mut worst = 0.0f64;
    for n in 0..=100 {
        for m in 0..=100 {
            worst = worst.max((g.get(n, m) - &c.complex(n as f64, m as f64)).abs().to_f64());
        }
    }
    assert!(worst <= 1e-45, "{worst:e}");
}

#[test]
fn initial_data_and_axes() {
    let c = ctx();
    let a = c.real(0.5);
    let g = evolve_grid(&a, 40, &c).unwrap();
    assert!(g.get(0, 0).is_zero());
    assert!(close(g.get(1, 0), &BigComplex::one(256), 0.0));
    let rot = BigComplex::cis(&(Float::with_val(256, &a * pi(256)) / 2u32));
    assert!(close(g.get(0, 1), &rot, 1e-70));
    for n in 1..40 {
        let (x, y) = (g.get(n, 0), g.get(n + 1, 0));
        assert!(x.im.is_zero() && y.re > x.re && x.re > 0);
        let k = n;
        assert!(axis_oracle(g.get(n - 1, 0), x, y, k, &a) < 1e-60);
        // f(0, m) on the ray e^{iaπ/2} R+
        let w = g.get(0, n + 1) / &rot;
        assert!(w.im.clone().abs().to_f64() < 1e-60 && w.re > 0);
    }
}

#[test]
fn residuals_within_bounds() {
    let c = ctx();
    for a in [c.real(0.25), c.real(0.5), c.ratio(2, 3), c.real(1.0), c.real(1.5), c.real(1.75)] {
        let g = evolve_grid(&a, 40, &c).unwrap();
        assert!(g.residual_cr <= 1e-35, "a = {a}: {:e}", g.residual_cr);
        assert!(g.residual_constraint <= 1e-30, "a = {a}: {:e}", g.residual_constraint);
    }
}

#[test]
fn sector_property() {
    let c = ctx();
    for a in [c.real(0.5), c.real(1.5)] {
        let g = evolve_grid(&a, 40, &c).unwrap();
        let top = Float::with_val(256, &a * pi(256)) / 2u32;
        for n in 0..=40 {
            for m in 0..=40 {
                if n + m == 0 {
                    continue;
                }
                let t = g.get(n, m).arg();
                assert!(t.to_f64() >= -1e-30 && (t - &top).to_f64() <= 1e-30);
            }
        }
    }
}

#[test]
fn deterministic() {
    let c = ctx();
    let a = c.real(1.3);
    let g1 = evolve_grid(&a, 20, &c).unwrap();
    let g2 = evolve_grid(&a, 20, &c).unwrap();
    assert_eq!(g1, g2);
}

#[test]
fn rejects_bad_input() {
    let c = ctx();
    assert!(evolve_grid(&c.real(2.0), 10, &c).is_err());
    assert!(evolve_grid(&c.real(0.0), 10, &c).is_err());
    assert!(evolve_grid(&c.real(0.5), 1, &c).is_err());
}

#[test]
fn corruption_located() {
    let c = ctx();
    let mut g = evolve_grid(&c.real(0.5), 10, &c).unwrap();
    let bumped = g.get(4, 6) + &c.complex(1e-6, 0.0);
    g.set(4, 6, bumped);
    let (r, site) = g.cross_ratio_worst().unwrap();
    assert!(r > 1e-10);
    // the cell whose far corner is (4, 6) or any cell touching it
    assert!((3..=4).contains(&site.0) && (5..=6).contains(&site.1), "{site:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fill_satisfies_cross_ratio(px in -3.0f64..3.0, py in -3.0f64..3.0,
                                  qx in -3.0f64..3.0, qy in -3.0f64..3.0,
                                  sx in -3.0f64..3.0, sy in -3.0f64..3.0) {
        let c = ctx();
        let (p, q, s) = (c.complex(px, py), c.complex(qx, qy), c.complex(sx, sy));
        if let Ok(x) = cross_ratio_fill(&p, &q, &s) {
            let cr = cross_ratio(&p, &q, &x, &s);
            prop_assert!((&cr + &BigComplex::one(256)).abs().to_f64() < 1e-60);
        }
    }

    #[test]
    fn axis_step_satisfies_constraint(a in 0.05f64..1.95, k in 1usize..200, t in 0.1f64..10.0) {
        let c = ctx();
        let a = c.real(a);
        let (p, f) = (c.complex(t, 0.0), c.complex(t + 1.0, 0.0));
        if let Ok(x) = axis_step(&p, &f, k, &a, AxisKind::Horizontal) {
            prop_assert!(axis_oracle(&p, &f, &x, k, &a) < 1e-60 * (1.0 + x.abs().to_f64()));
        }
    }

    #[test]
    fn small_grids_have_tiny_residuals(a in 0.05f64..1.95) {
        let c = ctx();
        let g = evolve_grid(&c.real(a), 12, &c).unwrap();
        prop_assert!(g.residual_cr <= 1e-35 && g.residual_constraint <= 1e-30);
    }
}
