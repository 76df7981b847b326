use proptest::prelude::*;
use zpow_core::discrete_log::hirota_W;
use zpow_core::pattern::*;
use zpow_core::*;

fn ctx() -> PrecisionContext {
    PrecisionContext::with_bits(256).unwrap()
}

fn grid(a: f64, n: usize) -> PowerMapGrid {
    let c = ctx();
    evolve_grid(&c.real(a), n, &c).unwrap()
}

fn count(hay: &str, needle: &str) -> usize {
    hay.matches(needle).count()
}

#[test]
fn unit_lattice_pattern() {
    let doc = extract_pattern(&grid(1.0, 6), 1e-40).unwrap();
    for c in &doc.circles {
        assert!((c.radius.clone() - 1u32).abs().to_f64() < 1e-60);
    }
    assert!(doc.max_orthogonality < 1e-60);
    let c = doc.circle(2, 2).unwrap();
    let d = doc.circle(3, 3).unwrap();
    let dist2 = (&c.center - &d.center).norm_sqr().to_f64();
    assert!((dist2 - 2.0).abs() < 1e-60);
    assert!(doc.circle(2, 3).is_none());
}

#[test]
fn counts_follow_parity() {
    let doc = extract_pattern(&grid(1.0, 4), 1e-40).unwrap();
    // even sites of {0..4}²: 5 rows alternating 3 and 2
    assert_eq!(doc.circles.len(), 13);
    assert_eq!(doc.points.len(), 12);
    assert_eq!(doc.kites.len(), 16);
}

#[test]
fn two_thirds_spread_and_orthogonality() {
    let doc = extract_pattern(&grid(2.0 / 3.0, 40), 1e-25).unwrap();
    assert!(doc.max_spread <= 1e-25, "{:e}", doc.max_spread);
    assert!(doc.max_orthogonality <= 1e-25, "{:e}", doc.max_orthogonality);
}

#[test]
fn radius_equals_hirota() {
    for a in [0.5, 1.5] {
        let g = grid(a, 20);
        let doc = extract_pattern(&g, 1e-25).unwrap();
        for c in &doc.circles {
            let (n, m) = c.site;
            if n < 20 {
                let w = hirota_W(&g, n, m).unwrap();
                assert!(((w - &c.radius) / &c.radius).abs().to_f64() <= 1e-25);
            }
        }
    }
}

#[test]
fn kites_embedded_in_window() {
    for a in [0.5, 1.5] {
        let doc = extract_pattern(&grid(a, 20), 1e-25).unwrap();
        assert!(doc.negative_kites().is_empty());
        assert!(kite_overlaps(&doc, 20).is_empty());
    }
}

#[test]
fn overlap_detected_after_corruption() {
    let mut g = grid(1.0, 4);
    let c = ctx();
    // push (2, 2) across its neighbours so two cells fold over
    g.set(2, 2, c.complex(3.4, 2.5));
    let doc = extract_pattern(&g, f64::INFINITY).unwrap();
    assert!(!kite_overlaps(&doc, 4).is_empty() || !doc.negative_kites().is_empty());
}

#[test]
fn spread_error_reports_site() {
    let mut g = grid(0.5, 8);
    let c = ctx();
    let z = g.get(4, 4) + &c.complex(1e-10, 0.0);
    g.set(4, 4, z);
    match extract_pattern(&g, 1e-25) {
        Err(Error::RadiusSpread { site, .. }) => assert!(site.0.abs_diff(4) + site.1.abs_diff(4) <= 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn svg_document() {
    let doc = extract_pattern(&grid(1.0, 4), 1e-40).unwrap();
    let svg = render_svg(&doc, &SvgOptions::default()).unwrap();
    let s = String::from_utf8(svg.clone()).unwrap();
    assert_eq!(count(&s, "<circle "), 13);
    assert_eq!(count(&s, "<polyline "), 16);
    assert!(s.starts_with("<?xml") && s.trim_end().ends_with("</svg>"));
    // bbox [-1, -1, 5, 5] at scale 100, padded by 30 on each side
    assert!(s.contains("viewBox=\"-130 -530 660 660\""), "{s}");
    assert!(s.contains("<circle cx=\"200\" cy=\"200\" r=\"100\"/>"));
    assert_eq!(svg, render_svg(&doc, &SvgOptions::default()).unwrap());
}

#[test]
fn svg_rejects_bad_input() {
    let mut doc = extract_pattern(&grid(1.0, 4), 1e-40).unwrap();
    let opts = SvgOptions {
        scale: 0.0,
        ..SvgOptions::default()
    };
    assert!(matches!(render_svg(&doc, &opts), Err(Error::InvalidOption(_))));
    doc.circles.clear();
    assert!(matches!(render_svg(&doc, &SvgOptions::default()), Err(Error::EmptyPattern)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kites_positive_for_all_a(a in 0.05f64..1.95) {
        let doc = extract_pattern(&grid(a, 12), 1e-25).unwrap();
        prop_assert!(doc.negative_kites().is_empty());
        prop_assert!(doc.max_orthogonality <= 1e-25);
    }
}
