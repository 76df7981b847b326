use proptest::prelude::*;
use rug::Float;
use zpow_core::asymptotics::loglog_fit;
use zpow_core::discrete_log::*;
use zpow_core::numerics::pi;
use zpow_core::*;

fn ctx() -> PrecisionContext {
    PrecisionContext::with_bits(256).unwrap()
}

fn eps() -> Float {
    Float::with_val(256, 1e-12)
}

#[test]
fn log_on_axes() {
    let c = ctx();
    let l = discrete_log_L(1, 0, &c, &eps()).unwrap();
    assert!(l.value.abs().to_f64() < 1e-60, "{}", l.value);
    let l = discrete_log_L(0, 1, &c, &eps()).unwrap();
    let want = BigComplex::from_imag(&(pi(256) / 2u32));
    assert!((&l.value - &want).abs().to_f64() < 1e-20);
    assert!(discrete_log_L(0, 0, &c, &eps()).is_err());
}

#[test]
fn log_real_on_real_axis() {
    let c = ctx();
    let g = LogGrid::compute(10, &eps(), &c).unwrap();
    for n in 1..=10 {
        assert!(g.get(n, 0).unwrap().value.im.is_zero());
    }
}

#[test]
fn log_envelope_at_thirty_forty() {
    let c = ctx();
    let l = discrete_log_L(30, 40, &c, &eps()).unwrap();
    let err = (&l.value - &log_predictor(30, 40, &c).unwrap()).abs().to_f64();
    let r = 50f64;
    assert!(err <= 10.0 * r.ln() / (r * r), "{err:e}");
    assert!(l.error < 1e-9);
}

#[test]
fn log_error_slope_on_diagonal() {
    let c = ctx();
    let g = LogGrid::compute(85, &eps(), &c).unwrap();
    let pts: Vec<(f64, f64)> = (22..=84)
        .map(|k| {
            let r = k as f64 * 2f64.sqrt();
            let v = &g.get(k, k).unwrap().value;
            (r, (v - &log_predictor(k, k, &c).unwrap()).abs().to_f64())
        })
        .collect();
    let (slope, _) = loglog_fit(&pts);
    assert!(slope <= -1.6, "{slope}");
}

#[test]
fn log_richardson_consistency() {
    let c = ctx();
    let e = eps();
    let half = Float::with_val(256, &e / 2u32);
    let g1 = LogGrid::compute(20, &e, &c).unwrap();
    let g2 = LogGrid::compute(20, &half, &c).unwrap();
    for (n, m) in [(1, 1), (7, 3), (20, 20), (0, 13)] {
        let (x, y) = (g1.get(n, m).unwrap(), g2.get(n, m).unwrap());
        let change = (&x.value - &y.value).abs().to_f64();
        assert!(change < x.error, "({n},{m}): {change:e} vs {:e}", x.error);
    }
}

#[test]
fn from_grids_rejects_mismatch() {
    let c = ctx();
    let g1 = evolve_grid(&c.real(0.01), 4, &c).unwrap();
    let g2 = evolve_grid(&c.real(0.03), 4, &c).unwrap();
    assert!(LogGrid::from_grids(&g1, &g2).is_err());
    assert!(LogGrid::compute(4, &c.real(0.0), &c).is_err());
}

#[test]
fn hirota_at_one_is_unit() {
    let c = ctx();
    let g = evolve_grid(&c.real(1.0), 12, &c).unwrap();
    let radii = HirotaRadii::from_grid(&g);
    for n in 0..12 {
        for m in 0..=12 {
            if (n + m) % 2 == 0 {
                let w = radii.get(n, m).unwrap();
                assert!((w.clone() - 1u32).abs().to_f64() < 1e-60);
            }
        }
    }
    assert!(matches!(hirota_W(&g, 1, 2), Err(Error::Parity((1, 2)))));
    assert!(hirota_W(&g, 12, 0).is_err());
}

#[test]
fn hirota_matches_predictor() {
    let c = ctx();
    for a in [0.5, 1.5] {
        let a = c.real(a);
        let g = evolve_grid(&a, 60, &c).unwrap();
        for (n, m) in [(50, 50), (56, 28), (30, 60)] {
            let w = hirota_W(&g, n, m).unwrap();
            let p = hirota_predictor(n, m, &a, &c).unwrap();
            let r = (n as f64).hypot(m as f64);
            let rel = ((w - &p) / &p).abs().to_f64();
            assert!(rel <= 2.0 / r, "a = {a} ({n},{m}): {rel:e}");
        }
    }
}

#[test]
fn green_at_origin_and_parity() {
    let c = ctx();
    let l = green_ell(0, 0, &c, &eps()).unwrap();
    assert!(l.value.clone().abs().to_f64() < 1e-50, "{}", l.value);
    assert!(matches!(green_ell(1, 0, &c, &eps()), Err(Error::Parity((1, 0)))));
}

#[test]
fn green_envelope_at_thirty_forty() {
    let c = ctx();
    let l = green_ell(30, 40, &c, &eps()).unwrap();
    let err = (l.value.clone() - green_predictor(30, 40, &c).unwrap()).abs().to_f64();
    let r = 50f64;
    assert!(err <= 10.0 * r.ln() / r, "{err:e}");
    assert!(l.error < 1e-9);
}

#[test]
fn green_richardson_consistency() {
    let c = ctx();
    let e = eps();
    let half = Float::with_val(256, &e / 2u32);
    let g1 = GreenGrid::compute(12, &e, &c).unwrap();
    let g2 = GreenGrid::compute(12, &half, &c).unwrap();
    for (n, m) in [(1, 1), (4, 6), (11, 11), (0, 12)] {
        let (x, y) = (g1.get(n, m).unwrap(), g2.get(n, m).unwrap());
        let change = (x.value.clone() - &y.value).abs().to_f64();
        assert!(change < x.error, "({n},{m}): {change:e} vs {:e}", x.error);
    }
}

/// `d/da log|c(a)(a/2)((n+im)/2)^{a-1}|` at `a = 1` in two independent ways:
/// digamma values and a symmetric difference of the predictor itself.
#[test]
fn green_predictor_is_derivative_of_radius_law() {
    let c = ctx();
    let p = 256;
    let half = c.ratio(1, 2);
    let three_half = c.ratio(3, 2);
    let dlogc = -(half.digamma() + three_half.digamma()) / 2u32;
    // ψ(1/2) = -γ - 2 log 2 and ψ(3/2) = 2 - γ - 2 log 2
    let g = c.constants().euler_gamma;
    let ln2 = Float::with_val(p, 2u32).ln();
    let want_dlogc = g + Float::with_val(p, &ln2 * 2u32) - 1u32;
    assert!((dlogc.clone() - &want_dlogc).abs().to_f64() < 1e-70);
    for (n, m) in [(3, 5), (30, 40), (77, 1)] {
        let r = Float::with_val(p, n as f64).hypot(&Float::with_val(p, m as f64));
        let by_digamma = dlogc.clone() + 1u32 + (r / 2u32).ln();
        let target = green_predictor(n, m, &c).unwrap();
        assert!((by_digamma - &target).abs().to_f64() < 1e-70);
        let h = c.real(1e-20);
        let up = hirota_predictor(n, m, &(c.real(1.0) + &h), &c).unwrap().ln();
        let dn = hirota_predictor(n, m, &(c.real(1.0) - &h), &c).unwrap().ln();
        let fd = (up - dn) / (h * 2u32);
        assert!((fd - &target).abs().to_f64() < 1e-30);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Reflection `Z^a(m, n) = e^{iaπ/2} conj Z^a(n, m)` gives
    /// `L(m, n) = iπ/2 + conj L(n, m)`.
    #[test]
    fn log_reflection(n in 0usize..10, m in 0usize..10) {
        prop_assume!(n + m > 0);
        let c = ctx();
        let g = LogGrid::compute(10, &eps(), &c).unwrap();
        let x = &g.get(n, m).unwrap().value;
        let y = &g.get(m, n).unwrap().value;
        let want = &x.conj() + &BigComplex::from_imag(&(pi(256) / 2u32));
        prop_assert!((y - &want).abs().to_f64() < 1e-20);
    }
}
