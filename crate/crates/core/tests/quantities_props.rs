use isogrow::quantities::{mixed_pair_solve, star, tilde_from_vw, vw_from_tilde};
use proptest::prelude::*;

proptest! {
    #[test]
    fn conversions_round_trip(ev in -0.3..0.3f64, ew in -0.3..0.3f64, eps in 0.01..0.2f64) {
        let (v, w) = (ev / eps, ew / eps);
        let (vt, wt) = tilde_from_vw(v, w, eps);
        let (v2, w2) = vw_from_tilde(vt, wt, eps).unwrap();
        prop_assert!((v2 - v).abs() < 1e-12 * (1.0 + v.abs()));
        prop_assert!((w2 - w).abs() < 1e-12 * (1.0 + w.abs()));
        prop_assert!((eps * eps * vt * wt - (eps * v).sinh() * (eps * w).sinh()).abs() < 1e-12);
    }

    #[test]
    fn mixed_pair_is_consistent(ev in -0.3..0.3f64, ew in -0.3..0.3f64, eps in 0.01..0.2f64) {
        let (v, w) = (ev / eps, ew / eps);
        let (vt, wt) = tilde_from_vw(v, w, eps);
        let (vt2, w2) = mixed_pair_solve(v, wt, eps).unwrap();
        prop_assert!((vt2 - vt).abs() < 1e-12 * (1.0 + vt.abs()));
        prop_assert!((w2 - w).abs() < 1e-12 * (1.0 + w.abs()));
    }

    #[test]
    fn star_is_the_cosine_companion(ez in -0.99..0.99f64, eps in 0.01..0.5f64) {
        let z = ez / eps;
        let s = star(z, eps);
        prop_assert!((s * s + ez * ez - 1.0).abs() < 1e-14);
    }
}

#[test]
fn frozen_conversion_value() {
    let (v, w) = vw_from_tilde(1.0, 2.0, 0.1).unwrap();
    assert!((v - 0.983_147_346_734_629_1).abs() < 1e-14, "{v}");
    assert!(w > 0.0);
    let (vt, _) = tilde_from_vw(1.0, 2.0, 0.1);
    assert!((vt - 1.016_680_079_161_381_7).abs() < 1e-14, "{vt}");
}
