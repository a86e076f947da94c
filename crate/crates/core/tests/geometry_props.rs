use isogrow::geometry::{
    check_quad, complete_conformal_square, cross_ratio, is_collinear, orthonormality_defect, plane_chart,
    reorthonormalize,
};
use isogrow::{Frame3, Point3};
use num_complex::Complex64;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point3> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

/// Triangles whose smallest angle is not tiny.
fn triangle() -> impl Strategy<Value = [Point3; 3]> {
    (point(), point(), point())
        .prop_filter("well-shaped triangle", |(a, b, c)| {
            let min_side = (a - b).norm().min((b - c).norm()).min((c - a).norm());
            let area = 0.5 * (b - a).cross(&(c - a)).norm();
            min_side > 0.3 && area > 0.2 * min_side * min_side
        })
        .prop_map(|(a, b, c)| [a, b, c])
}

proptest! {
    #[test]
    fn chart_is_orthonormal(t in triangle()) {
        let ch = plane_chart(&t[0], &t[1], &t[2]).unwrap();
        prop_assert!(ch.e1.dot(&ch.e2).abs() < 1e-12);
        prop_assert!((ch.e1.cross(&ch.e2) - ch.normal).norm() < 1e-12);
        prop_assert!((ch.e1.norm() - 1.0).abs() < 1e-12 && (ch.e2.norm() - 1.0).abs() < 1e-12);
        prop_assert!(((t[1] - t[0]).normalize() - ch.e1).norm() < 1e-12);
    }

    #[test]
    fn chart_round_trip(t in triangle(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let ch = plane_chart(&t[0], &t[1], &t[2]).unwrap();
        let p = ch.origin + ch.e1 * a + ch.e2 * b;
        let z = ch.to_complex(&p).unwrap();
        prop_assert!((ch.from_complex(z) - p).norm() < 1e-14 * (1.0 + p.norm()) * 10.0);
        prop_assert!((z - Complex64::new(a, b)).norm() < 1e-13);
    }

    #[test]
    fn completed_square_is_conformal(t in triangle(), slot in 1usize..=4) {
        let p = complete_conformal_square(&t, slot).unwrap();
        let mut q = Vec::with_capacity(4);
        let mut k = 0;
        for s in 1..=4 {
            if s == slot { q.push(p) } else { q.push(t[k]); k += 1; }
        }
        let r = check_quad(&q[0], &q[1], &q[2], &q[3]);
        prop_assert!(r.is_conformal_square, "{r:?}");
        let cr = cross_ratio(&q[0], &q[1], &q[2], &q[3]).unwrap();
        prop_assert!((cr + 1.0).norm() < 1e-9);
    }

    #[test]
    fn cross_ratio_is_invariant_under_similarity(t in triangle(), s in 0.1..10.0f64, shift in point()) {
        let p = complete_conformal_square(&t, 4).unwrap();
        let q = [t[0], t[1], t[2], p].map(|x| x * s + shift);
        let cr = cross_ratio(&q[0], &q[1], &q[2], &q[3]).unwrap();
        prop_assert!((cr + 1.0).norm() < 1e-9);
    }

    #[test]
    fn polar_factor_is_a_rotation(m in proptest::array::uniform9(-1.0..1.0f64)) {
        let f = Frame3::from_row_slice(&m) + Frame3::identity() * 3.0;
        let r = reorthonormalize(&f);
        prop_assert!(orthonormality_defect(&r) < 1e-13);
    }
}

#[test]
fn collinear_triples_are_rejected() {
    let (a, b, c) = (Point3::zeros(), Point3::new(2.0, 0.0, 0.0), Point3::new(4.0, 0.0, 0.0));
    assert!(is_collinear(&a, &b, &c));
    assert!(plane_chart(&a, &b, &c).is_err());
    assert!(complete_conformal_square(&[a, b, c], 4).is_err());
}
