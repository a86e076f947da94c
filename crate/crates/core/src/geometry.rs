//! Small-scale Euclidean geometry: plane charts, cross-ratios and
//! conformal-square completion.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Point3 = Vector3<f64>;

/// Orthonormal frame stored column-wise: columns are the frame vectors.
pub type Frame3 = Matrix3<f64>;

/// Collinearity tolerance, relative to the squared diameter of a triple.
pub const TAU_COLL: f64 = 1e-10;
/// Planarity tolerance, relative to the diameter.
pub const TAU_PLANE: f64 = 1e-9;

/// Affine plane identified with the complex numbers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneChart {
    pub origin: Point3,
    pub e1: Point3,
    pub e2: Point3,
    pub normal: Point3,
    /// Diameter of the defining triple; sets the off-plane tolerance.
    pub scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadTolerances {
    pub concyclicity: f64,
    pub cross_ratio: f64,
    pub planarity: f64,
}

impl Default for QuadTolerances {
    fn default() -> Self {
        Self { concyclicity: 1e-10, cross_ratio: 1e-10, planarity: 1e-10 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadCheckReport {
    pub concyclicity_residual: f64,
    pub cr_residual: f64,
    pub planarity_residual: f64,
    pub is_conformal_square: bool,
}

pub fn diameter(points: &[Point3]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max((p - q).norm());
        }
    }
    d
}

/// True when the triangle `p, q, r` has area below `TAU_COLL * diam^2`.
pub fn is_collinear(p: &Point3, q: &Point3, r: &Point3) -> bool {
    let diam = diameter(&[*p, *q, *r]);
    let area = 0.5 * (q - p).cross(&(r - p)).norm();
    !(area > TAU_COLL * diam * diam)
}

pub fn plane_chart(p: &Point3, q: &Point3, r: &Point3) -> Result<PlaneChart> {
    if is_collinear(p, q, r) {
        return Err(Error::CollinearInput);
    }
    let e1 = (q - p).normalize();
    let d = r - p;
    let e2 = (d - e1 * e1.dot(&d)).normalize();
    Ok(PlaneChart { origin: *p, e1, e2, normal: e1.cross(&e2), scale: diameter(&[*p, *q, *r]) })
}

impl PlaneChart {
    /// Signed distance of `p` from the plane.
    pub fn offset(&self, p: &Point3) -> f64 {
        (p - self.origin).dot(&self.normal)
    }

    /// Orthogonal projection into the chart, without the coplanarity check.
    pub fn project(&self, p: &Point3) -> Complex64 {
        let d = p - self.origin;
        Complex64::new(d.dot(&self.e1), d.dot(&self.e2))
    }

    pub fn to_complex(&self, p: &Point3) -> Result<Complex64> {
        let distance = self.offset(p).abs();
        if distance > TAU_PLANE * self.scale {
            return Err(Error::OffPlane { distance });
        }
        Ok(self.project(p))
    }

    pub fn from_complex(&self, z: Complex64) -> Point3 {
        self.origin + self.e1 * z.re + self.e2 * z.im
    }
}

pub fn to_complex(chart: &PlaneChart, p: &Point3) -> Result<Complex64> {
    chart.to_complex(p)
}

pub fn from_complex(chart: &PlaneChart, z: Complex64) -> Point3 {
    chart.from_complex(z)
}

/// Cross-ratio of complex numbers, `(z1-z2)(z2-z3)^-1 (z3-z4)(z4-z1)^-1`.
pub fn cross_ratio_c(z: [Complex64; 4]) -> Complex64 {
    (z[0] - z[1]) * (z[2] - z[3]) / ((z[1] - z[2]) * (z[3] - z[0]))
}

/// Chart used to report cross-ratios of four coplanar points: the chart of
/// `(p1, p2, p3)` when that triple spans a plane.
fn chart_of_four(p: &[Point3; 4]) -> Result<PlaneChart> {
    if let Ok(c) = plane_chart(&p[0], &p[1], &p[2]) {
        return Ok(c);
    }
    for (a, b, c) in [(0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        if let Ok(ch) = plane_chart(&p[a], &p[b], &p[c]) {
            return Ok(ch);
        }
    }
    // All four on a line: any plane through it will do.
    let e1 = (p[1] - p[0]).normalize();
    let helper = if e1.x.abs() < 0.9 { Point3::x() } else { Point3::y() };
    let e2 = (helper - e1 * e1.dot(&helper)).normalize();
    Ok(PlaneChart { origin: p[0], e1, e2, normal: e1.cross(&e2), scale: diameter(p) })
}

pub fn cross_ratio(p1: &Point3, p2: &Point3, p3: &Point3, p4: &Point3) -> Result<Complex64> {
    let p = [*p1, *p2, *p3, *p4];
    let diam = diameter(&p);
    for i in 0..4 {
        if (p[i] - p[(i + 1) % 4]).norm() <= 1e-14 * diam || diam == 0.0 {
            return Err(Error::CoincidentPoints);
        }
    }
    let chart = chart_of_four(&p)?;
    let mut z = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        let distance = chart.offset(&p[i]).abs();
        if distance > TAU_PLANE * diam {
            return Err(Error::OffPlane { distance });
        }
        z[i] = chart.project(&p[i]);
    }
    Ok(cross_ratio_c(z))
}

/// Result of a cross-ratio completion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Completion {
    pub point: Point3,
    /// `(|A| + |q||D|) / |A + qD|` of the linear complex solve.
    pub condition: f64,
}

/// Fourth point of a quadruple with prescribed cross-ratio `q`.
///
/// `known` holds the other three points in increasing slot order and
/// `missing_slot` is in `1..=4`. The solve happens in the chart of `known`.
pub fn complete_with_cross_ratio(known: &[Point3; 3], missing_slot: usize, q: Complex64) -> Result<Completion> {
    assert!((1..=4).contains(&missing_slot), "slot must be in 1..=4");
    let chart = plane_chart(&known[0], &known[1], &known[2])?;
    // Rotate so the unknown sits in the last position. Each cyclic shift by
    // one inverts the cross-ratio.
    let rot = missing_slot % 4;
    let target = if rot % 2 == 1 { q.inv() } else { q };
    let mut full = [Complex64::new(0.0, 0.0); 4];
    let mut k = 0;
    for slot in 1..=4 {
        if slot != missing_slot {
            full[slot - 1] = chart.project(&known[k]);
            k += 1;
        }
    }
    let r = |i: usize| full[(i + rot) % 4];
    let (z1, z2, z3) = (r(0), r(1), r(2));
    let a = z1 - z2;
    let d = z2 - z3;
    let den = a + target * d;
    let condition = (a.norm() + target.norm() * d.norm()) / den.norm();
    if !condition.is_finite() {
        return Err(Error::CollinearInput);
    }
    let z4 = (a * z3 + target * d * z1) / den;
    Ok(Completion { point: chart.from_complex(z4), condition })
}

pub fn complete_conformal_square(known: &[Point3; 3], missing_slot: usize) -> Result<Point3> {
    complete_with_cross_ratio(known, missing_slot, Complex64::new(-1.0, 0.0)).map(|c| c.point)
}

pub fn check_quad(p1: &Point3, p2: &Point3, p3: &Point3, p4: &Point3) -> QuadCheckReport {
    check_quad_with(p1, p2, p3, p4, &QuadTolerances::default())
}

pub fn check_quad_with(p1: &Point3, p2: &Point3, p3: &Point3, p4: &Point3, tol: &QuadTolerances) -> QuadCheckReport {
    let p = [*p1, *p2, *p3, *p4];
    let scale = diameter(&p);
    let n = (p2 - p1).cross(&(p3 - p1));
    let (planarity_residual, concyclicity_residual) = if n.norm() > 0.0 && scale > 0.0 {
        let nhat = n.normalize();
        let planarity = (p4 - p1).dot(&nhat).abs() / scale;
        let (center, radius) = circumcircle(p1, p2, p3);
        (planarity, ((p4 - center).norm() - radius).abs() / radius)
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    let l12 = (p1 - p2).norm();
    let l23 = (p2 - p3).norm();
    let l34 = (p3 - p4).norm();
    let l41 = (p4 - p1).norm();
    let lhs = l12 * l34;
    let rhs = l23 * l41;
    let big = lhs.max(rhs);
    let cr_residual = if big > 0.0 { (lhs - rhs).abs() / big } else { f64::INFINITY };
    let alternating = cross_ratio(p1, p2, p3, p4).map(|q| q.re < 0.0).unwrap_or(false);
    let is_conformal_square = planarity_residual < tol.planarity
        && concyclicity_residual < tol.concyclicity
        && cr_residual < tol.cross_ratio
        && alternating;
    QuadCheckReport { concyclicity_residual, cr_residual, planarity_residual, is_conformal_square }
}

/// Circumcenter and radius of a non-degenerate triangle.
pub fn circumcircle(a: &Point3, b: &Point3, c: &Point3) -> (Point3, f64) {
    let u = b - a;
    let v = c - a;
    let w = u.cross(&v);
    let center = a + (w.cross(&u) * v.norm_squared() + v.cross(&w) * u.norm_squared()) / (2.0 * w.norm_squared());
    (center, (center - a).norm())
}

/// Largest entry of `|F^T F - I|`.
pub fn orthonormality_defect(f: &Frame3) -> f64 {
    (f.transpose() * f - Frame3::identity()).abs().max()
}

/// Nearest rotation via the polar decomposition `F (F^T F)^{-1/2}`.
pub fn reorthonormalize(f: &Frame3) -> Frame3 {
    let svd = f.svd(true, true);
    let (u, vt) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    u * vt
}

/// Frame from two orthonormal columns, completed by their cross product.
pub fn frame_from_columns(c1: &Point3, c2: &Point3) -> Frame3 {
    Frame3::from_columns(&[*c1, *c2, c1.cross(c2)])
}

/// Cosine of the angle at `b` in the triangle `a, b, c`.
pub fn cos_angle(a: &Point3, b: &Point3, c: &Point3) -> f64 {
    let u = a - b;
    let v = c - b;
    u.dot(&v) / (u.norm() * v.norm())
}
