//! Björling data, the Cauchy data it induces, and the initial zig-zag strip.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{is_collinear, Frame3, Point3};
use crate::lattice::{elementary_square, DiscreteSurface, DomainSpec, LatticeIndex, SlotKind};
use crate::quantities::{center_normal, edge_curvature};
use crate::taylor::{cross3, dot3, Taylor};

/// An analytic curve `f` with a normal field `n` along it, on `(-r, r)`.
///
/// `n` need not be unit length; it is normalized on evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct BjorlingData {
    pub name: String,
    pub f: [Expr; 3],
    pub n: [Expr; 3],
    pub r: f64,
}

const VALIDATION_SAMPLES: usize = 201;

fn vec_jet(e: &[Expr; 3], t: f64, len: usize) -> [Taylor; 3] {
    [e[0].jet(t, len), e[1].jet(t, len), e[2].jet(t, len)]
}

fn vec_value(v: &[Taylor; 3]) -> Point3 {
    Point3::new(v[0].value(), v[1].value(), v[2].value())
}

fn vec_derivative(v: &[Taylor; 3]) -> [Taylor; 3] {
    [v[0].derivative(), v[1].derivative(), v[2].derivative()]
}

fn vec_scale(v: &[Taylor; 3], s: &Taylor) -> [Taylor; 3] {
    [&v[0] * s, &v[1] * s, &v[2] * s]
}

fn vec_trunc(v: &[Taylor; 3], len: usize) -> [Taylor; 3] {
    [v[0].truncate(len), v[1].truncate(len), v[2].truncate(len)]
}

impl BjorlingData {
    pub fn new(name: impl Into<String>, f: [Expr; 3], n: [Expr; 3], r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidDomain(format!("curve half-length r = {r} must be positive")));
        }
        let data = Self { name: name.into(), f, n, r };
        data.validate()?;
        Ok(data)
    }

    /// Diagonal trace `F(xi, -xi)` of the unit cylinder `(cos x, sin x, y)`.
    pub fn cylinder(r: f64) -> Result<Self> {
        let t = Expr::var();
        Self::new(
            "cylinder",
            [t.clone().cos(), t.clone().sin(), -t.clone()],
            [t.clone().cos(), t.sin(), Expr::c(0.0)],
            r,
        )
    }

    /// Diagonal trace of the Mercator-parametrized unit sphere.
    pub fn sphere_mercator(r: f64) -> Result<Self> {
        let t = Expr::var();
        let f = [t.clone().sech() * t.clone().cos(), t.clone().sech() * t.clone().sin(), -t.tanh()];
        Self::new("sphere_mercator", f.clone(), f, r)
    }

    pub fn builtin(name: &str, r: f64) -> Result<Self> {
        match name {
            "cylinder" => Self::cylinder(r),
            "sphere_mercator" | "sphere" => Self::sphere_mercator(r),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }

    pub fn curve(&self, xi: f64) -> Point3 {
        Point3::new(self.f[0].eval(xi), self.f[1].eval(xi), self.f[2].eval(xi))
    }

    pub fn curve_derivative(&self, xi: f64) -> Point3 {
        vec_value(&vec_derivative(&vec_jet(&self.f, xi, 2)))
    }

    pub fn normal(&self, xi: f64) -> Point3 {
        Point3::new(self.n[0].eval(xi), self.n[1].eval(xi), self.n[2].eval(xi)).normalize()
    }

    pub fn normal_derivative(&self, xi: f64) -> Point3 {
        vec_value(&vec_derivative(&self.normal_jet(xi, 2)))
    }

    pub fn curve_jet(&self, xi: f64, len: usize) -> [Taylor; 3] {
        vec_jet(&self.f, xi, len)
    }

    /// Jet of the unit normal.
    pub fn normal_jet(&self, xi: f64, len: usize) -> [Taylor; 3] {
        let n = vec_jet(&self.n, xi, len);
        let inv = dot3(&n, &n).sqrt().recip();
        vec_scale(&n, &inv)
    }

    /// Sample points used for validation, including both ends.
    fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        (0..VALIDATION_SAMPLES).map(move |i| -self.r + 2.0 * self.r * i as f64 / (VALIDATION_SAMPLES - 1) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        for xi in self.samples() {
            let fp = self.curve_derivative(xi);
            let raw_n = Point3::new(self.n[0].eval(xi), self.n[1].eval(xi), self.n[2].eval(xi));
            if !(fp.norm() > 1e-12) || !fp.iter().all(|c| c.is_finite()) {
                return Err(Error::DegenerateCurve { xi });
            }
            if !(raw_n.norm() > 1e-12) {
                return Err(Error::InvalidInput(format!("normal field vanishes at xi = {xi}")));
            }
            let defect = fp.dot(&raw_n.normalize()).abs() / fp.norm();
            if !(defect <= 1e-10) {
                return Err(Error::NonOrthogonal { xi, defect });
            }
        }
        Ok(())
    }
}

/// Cauchy data induced by Björling data along `eta = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyData {
    pub data: BjorlingData,
}

/// Taylor expansions in `xi` of the Cauchy data about one point.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyJet {
    pub xi: f64,
    pub u: Taylor,
    pub v: Taylor,
    pub w: Taylor,
    pub k: Taylor,
    pub l: Taylor,
    /// `e^u`
    pub e: Taylor,
    /// Frame columns `Psi_1, Psi_2, Psi_3`.
    pub psi: [[Taylor; 3]; 3],
    pub f: [Taylor; 3],
}

pub fn derive_cauchy_data(data: &BjorlingData) -> Result<CauchyData> {
    data.validate()?;
    Ok(CauchyData { data: data.clone() })
}

impl CauchyData {
    /// Expansions with `len` coefficients about `xi`.
    pub fn jet(&self, xi: f64, len: usize) -> CauchyJet {
        let len = len.max(1);
        let f = self.data.curve_jet(xi, len + 2);
        let fp = vec_derivative(&f);
        let speed2 = dot3(&fp, &fp);
        let u = speed2.scale(0.5).ln().scale(0.5);
        let v = u.derivative().scale(0.5);
        let t = vec_scale(&fp, &speed2.sqrt().recip());
        let n = self.data.normal_jet(xi, len + 1);
        let s = cross3(&n, &t);
        let r = 1.0 / SQRT_2;
        let psi1: [Taylor; 3] = std::array::from_fn(|i| (&t[i] + &s[i]).scale(r));
        let psi2: [Taylor; 3] = std::array::from_fn(|i| (&s[i] - &t[i]).scale(r));
        let d2 = vec_derivative(&psi2);
        let d3 = vec_derivative(&n);
        let p1 = vec_trunc(&psi1, len);
        let p2 = vec_trunc(&psi2, len);
        let w = dot3(&p1, &d2).scale(0.5);
        let k = dot3(&p1, &d3).scale(-1.0);
        let l = dot3(&p2, &d3);
        let u = u.truncate(len);
        CauchyJet { xi, e: u.exp(), u, v, w, k, l, psi: [p1, p2, vec_trunc(&n, len)], f: vec_trunc(&f, len) }
    }

    pub fn u0(&self, xi: f64) -> f64 {
        self.jet(xi, 1).u.value()
    }
    pub fn v0(&self, xi: f64) -> f64 {
        self.jet(xi, 1).v.value()
    }
    pub fn w0(&self, xi: f64) -> f64 {
        self.jet(xi, 1).w.value()
    }
    pub fn k0(&self, xi: f64) -> f64 {
        self.jet(xi, 1).k.value()
    }
    pub fn l0(&self, xi: f64) -> f64 {
        self.jet(xi, 1).l.value()
    }

    pub fn psi0(&self, xi: f64) -> Frame3 {
        self.jet(xi, 1).frame()
    }

    /// `(v0, w0, k0, l0)` at `xi`.
    pub fn theta0(&self, xi: f64) -> [f64; 4] {
        let j = self.jet(xi, 1);
        [j.v.value(), j.w.value(), j.k.value(), j.l.value()]
    }
}

impl CauchyJet {
    pub fn frame(&self) -> Frame3 {
        let c = |i: usize| vec_value(&self.psi[i]);
        Frame3::from_columns(&[c(0), c(1), c(2)])
    }

    /// Skew generator `U - V` of the frame ODE in `xi`, from the jet values.
    pub fn generator(&self) -> Frame3 {
        let (w, k, l) = (self.w.value(), self.k.value(), self.l.value());
        Frame3::new(0.0, 2.0 * w, -k, -2.0 * w, 0.0, l, k, -l, 0.0)
    }
}

/// The sampled two-row strip `Omega(r, eps/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialStrip {
    pub eps: f64,
    pub surface: DiscreteSurface,
}

/// Vertex `V_j` of the zig-zag at `xi = j eps/2`: row 0 for even `j`, row 1 for odd.
pub fn strip_vertex(j: i64) -> LatticeIndex {
    if j.rem_euclid(2) == 0 {
        LatticeIndex::new(j, -j)
    } else {
        LatticeIndex::new(j + 1, 1 - j)
    }
}

/// Quad center of the triple `(V_{j-1}, V_j, V_{j+1})`.
pub fn strip_center(j: i64) -> LatticeIndex {
    if j.rem_euclid(2) == 0 {
        LatticeIndex::new(j + 1, 1 - j)
    } else {
        LatticeIndex::new(j, -j)
    }
}

fn check_star(quantity: &'static str, z: f64, eps: f64) -> Result<()> {
    let value = (eps * z).abs();
    if !(value < 1.0) {
        return Err(Error::StarOverflow { quantity, value });
    }
    Ok(())
}

struct StripBuilder<'a> {
    cd: &'a CauchyData,
    eps: f64,
    vertices: BTreeMap<i64, Point3>,
    normals: BTreeMap<i64, Point3>,
}

impl StripBuilder<'_> {
    fn vertex_at(&self, idx: LatticeIndex) -> Option<Point3> {
        let (a, _) = idx.xi_eta_units();
        // xi = j eps/2 means a = 2j
        let j = a.div_euclid(2);
        (strip_vertex(j) == idx).then(|| self.vertices.get(&j).copied()).flatten()
    }

    fn triple_normal(&self, center: LatticeIndex, extra: Option<(LatticeIndex, Point3)>) -> Option<Point3> {
        let idx = elementary_square(center).ok()?;
        let pts = idx.map(|i| match extra {
            Some((e, p)) if e == i => Some(p),
            _ => self.vertex_at(i),
        });
        center_normal(&pts)
    }

    /// Places the new vertex for the triple centered at `c_j`, next to `V_j`
    /// and opposite `V_from`.
    fn step(&mut self, j: i64, from: i64, to: i64) -> Result<()> {
        let eps = self.eps;
        let p = self.vertices[&from];
        let q = self.vertices[&j];
        let xi_c = j as f64 * eps / 2.0;
        let [v0, w0, ..] = self.cd.theta0(xi_c);
        check_star("v0", v0, eps)?;
        check_star("w0", w0, eps)?;
        let east = to > j;
        let len = (p - q).norm() * if east { (eps * v0).exp() } else { (-eps * v0).exp() };
        // V_j is p1 of its square for even j and p3 for odd j.
        let cos_target = if j.rem_euclid(2) == 0 { -eps * w0 } else { eps * w0 };

        // Curvature on the edge V_from V_j, flanked by c_from and c_j.
        let (ia, ib) = (strip_vertex(from.min(j)), strip_vertex(from.max(j)));
        let edge = LatticeIndex::new((ia.m + ib.m) / 2, (ia.n + ib.n) / 2);
        let kind = edge.kind();
        let xi_e = edge.xi(eps);
        let target = match kind {
            SlotKind::XEdge => self.cd.l0(xi_e),
            _ => self.cd.k0(xi_e),
        };
        check_star(if kind == SlotKind::XEdge { "l0" } else { "k0" }, target, eps)?;
        let (plus_dir, minus_dir) = match kind {
            SlotKind::XEdge => ((0, 1), (0, -1)),
            _ => ((1, 0), (-1, 0)),
        };
        let c_prev = strip_center(from);
        let c_new = strip_center(j);
        let n_prev = self.normals[&from];
        let (pa, pb) = (self.vertices[&from.min(j)], self.vertices[&from.max(j)]);
        // Edge tangent oriented along +x or +y.
        let (lo_pt, hi_pt) = if (ia.m, ia.n) < (ib.m, ib.n) { (pa, pb) } else { (pb, pa) };
        let tangent = (hi_pt - lo_pt).normalize();
        let axis = (q - p).normalize();
        let swing = axis.cross(&n_prev);
        let gain = {
            let (nm, np) = if c_prev == edge.offset(minus_dir.0, minus_dir.1) {
                debug_assert_eq!(c_new, edge.offset(plus_dir.0, plus_dir.1));
                (n_prev, swing)
            } else {
                (swing, n_prev)
            };
            edge_curvature(kind, &nm, &np, &tangent, 1.0)
        };
        let sin_phi = eps * target / gain;
        if !(sin_phi.abs() < 1.0) {
            return Err(Error::StarOverflow { quantity: "curvature", value: sin_phi.abs() });
        }
        let cos_phi = (1.0 - sin_phi * sin_phi).sqrt();
        let n_new = n_prev * cos_phi + swing * sin_phi;

        let d = (p - q).normalize();
        let perp = n_new.cross(&d);
        let sin_a = (1.0 - cos_target * cos_target).sqrt();
        let new_idx = strip_vertex(to);
        let mut chosen = None;
        for sign in [1.0, -1.0] {
            let r = q + (d * cos_target + perp * (sign * sin_a)) * len;
            if let Some(nc) = self.triple_normal(c_new, Some((new_idx, r))) {
                if nc.dot(&n_new) > 0.0 {
                    chosen = Some((r, nc));
                    break;
                }
            }
        }
        let (r, nc) = chosen.ok_or(Error::DegenerateTriple(c_new))?;
        if is_collinear(&p, &q, &r) {
            return Err(Error::DegenerateTriple(c_new));
        }
        self.vertices.insert(to, r);
        self.normals.insert(j, nc);
        Ok(())
    }
}

pub fn sample_initial_strip(cd: &CauchyData, eps: f64) -> Result<InitialStrip> {
    let r = cd.data.r;
    if !(eps > 0.0 && eps < r) {
        return Err(Error::InvalidDomain(format!("eps = {eps} must lie in (0, r = {r})")));
    }
    let spec = DomainSpec::strip(r, eps);
    let mut b = StripBuilder { cd, eps, vertices: BTreeMap::new(), normals: BTreeMap::new() };

    // Central triple V_{-1}, V_0, V_1 around c_0 = (1, 1).
    let j0 = cd.jet(0.0, 1);
    let (u0, v0, w0) = (j0.u.value(), j0.v.value(), j0.w.value());
    check_star("v0", v0, eps)?;
    check_star("w0", w0, eps)?;
    let psi = j0.frame();
    let (psi1, psi2) = (psi.column(0).into_owned(), psi.column(1).into_owned());
    let origin = cd.data.curve(0.0);
    let a_len = (u0 + eps * v0 / 2.0).exp();
    let b_len = (u0 - eps * v0 / 2.0).exp();
    let cos_b = -eps * w0;
    let sin_b = (1.0 - cos_b * cos_b).sqrt();
    b.vertices.insert(0, origin);
    b.vertices.insert(1, origin + psi1 * (eps * a_len));
    b.vertices.insert(-1, origin + (psi1 * cos_b + psi2 * sin_b) * (eps * b_len));
    let n0 = b.triple_normal(strip_center(0), None).ok_or(Error::DegenerateTriple(strip_center(0)))?;
    b.normals.insert(0, n0);

    let inside = |j: i64| spec.contains(strip_vertex(j));
    let mut j = 1;
    while inside(j + 1) {
        b.step(j, j - 1, j + 1)?;
        j += 1;
    }
    let mut j = -1;
    while inside(j - 1) {
        b.step(j, j + 1, j - 1)?;
        j -= 1;
    }

    let mut surface = DiscreteSurface::new(spec);
    for (&j, p) in &b.vertices {
        surface.positions.insert(strip_vertex(j), *p)?;
    }
    Ok(InitialStrip { eps, surface })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_cauchy_data() {
        let cd = derive_cauchy_data(&BjorlingData::cylinder(1.0).unwrap()).unwrap();
        for &xi in &[-0.9, -0.3, 0.0, 0.5, 0.99] {
            let [v, w, k, l] = cd.theta0(xi);
            assert!(cd.u0(xi).abs() < 1e-15);
            assert!(v.abs() < 1e-15 && w.abs() < 1e-15 && l.abs() < 1e-15);
            assert!((k + 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sphere_cauchy_data() {
        let cd = derive_cauchy_data(&BjorlingData::sphere_mercator(1.0).unwrap()).unwrap();
        for &xi in &[-0.8_f64, -0.2, 0.0, 0.4, 0.9] {
            let [v, w, k, l] = cd.theta0(xi);
            let sech = 1.0 / xi.cosh();
            assert!((cd.u0(xi) - sech.ln()).abs() < 1e-14);
            assert!((v + 0.5 * xi.tanh()).abs() < 1e-14, "v {v}");
            assert!((w - 0.5 * xi.tanh()).abs() < 1e-14, "w {w}");
            assert!((k + sech).abs() < 1e-14 && (l + sech).abs() < 1e-14);
        }
    }

    #[test]
    fn frame_is_rotation_and_matches_curve() {
        let cd = derive_cauchy_data(&BjorlingData::sphere_mercator(1.0).unwrap()).unwrap();
        for i in 0..100 {
            let xi = -0.99 + 1.98 * i as f64 / 99.0;
            let psi = cd.psi0(xi);
            assert!(crate::geometry::orthonormality_defect(&psi) < 1e-14);
            assert!((psi.determinant() - 1.0).abs() < 1e-14);
            let fp = cd.data.curve_derivative(xi);
            let diff = (psi.column(0) - psi.column(1)) * cd.u0(xi).exp() - fp;
            assert!(diff.norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_data() {
        let t = Expr::var();
        let flat = BjorlingData::new(
            "bad",
            [t.clone(), Expr::c(0.0), Expr::c(0.0)],
            [Expr::c(1.0), Expr::c(0.0), Expr::c(0.0)],
            1.0,
        );
        assert!(matches!(flat, Err(Error::NonOrthogonal { .. })));
        let stalled = BjorlingData::new(
            "bad",
            [t.clone().powi(2), Expr::c(0.0), Expr::c(0.0)],
            [Expr::c(0.0), Expr::c(0.0), Expr::c(1.0)],
            1.0,
        );
        assert!(matches!(stalled, Err(Error::DegenerateCurve { .. })));
        assert!(matches!(BjorlingData::builtin("torus", 1.0), Err(Error::UnknownName(_))));
    }

    #[test]
    fn strip_indices() {
        assert_eq!(strip_vertex(0), LatticeIndex::new(0, 0));
        assert_eq!(strip_vertex(1), LatticeIndex::new(2, 0));
        assert_eq!(strip_vertex(-1), LatticeIndex::new(0, 2));
        assert_eq!(strip_center(0), LatticeIndex::new(1, 1));
        assert_eq!(strip_center(1), LatticeIndex::new(1, -1));
        for j in -6..6 {
            assert!((strip_vertex(j).xi(1.0) - j as f64 / 2.0).abs() < 1e-15);
            assert!((strip_center(j).xi(1.0) - j as f64 / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn strip_star_gate() {
        let cd = derive_cauchy_data(&BjorlingData::cylinder(3.0).unwrap()).unwrap();
        assert!(matches!(sample_initial_strip(&cd, 1.5), Err(Error::StarOverflow { .. })));
        assert!(matches!(sample_initial_strip(&cd, 4.0), Err(Error::InvalidDomain(_))));
    }
}
