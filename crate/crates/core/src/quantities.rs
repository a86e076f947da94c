//! Discrete quantities on their staggered slots, the `(v, w)` / `(ṽ, w̃)`
//! conversions, frame relations and Gauss–Codazzi residuals.

use crate::error::{Error, Result};
use crate::geometry::{cos_angle, Point3};
use crate::lattice::{DiscreteSurface, DomainSpec, LatticeIndex, SlotKind, StaggeredField};

/// `z* = sqrt(1 - eps^2 z^2)`.
pub fn star(z: f64, eps: f64) -> f64 {
    (1.0 - (eps * z) * (eps * z)).sqrt()
}

fn star_checked(quantity: &'static str, z: f64, eps: f64) -> Result<f64> {
    let value = (eps * z).abs();
    if !(value < 1.0) {
        return Err(Error::StarOverflow { quantity, value });
    }
    Ok(star(z, eps))
}

/// `(v, w)` from `(ṽ, w̃)`.
pub fn vw_from_tilde(vt: f64, wt: f64, eps: f64) -> Result<(f64, f64)> {
    let vs = star_checked("v_tilde", vt, eps)?;
    let ws = star_checked("w_tilde", wt, eps)?;
    let v = (eps * vt * ws / vs).asinh() / eps;
    let w = (eps * wt * vs / ws).asinh() / eps;
    Ok((v, w))
}

/// `(ṽ, w̃)` from `(v, w)`.
pub fn tilde_from_vw(v: f64, w: f64, eps: f64) -> (f64, f64) {
    let vt = (eps * v).tanh() * (eps * w).cosh() / eps;
    let wt = (eps * w).tanh() * (eps * v).cosh() / eps;
    (vt, wt)
}

/// `(ṽ, w)` from the mixed pair `(v, w̃)`.
pub fn mixed_pair_solve(v: f64, wt: f64, eps: f64) -> Result<(f64, f64)> {
    let ws = star_checked("w_tilde", wt, eps)?;
    // Solve g(x) = x / x* = target for x = ṽ on (-1/eps, 1/eps); g is increasing.
    let target = (eps * v).sinh() / (eps * ws);
    let g = |x: f64| x / star(x, eps);
    let dg = |x: f64| star(x, eps).powi(-3);
    let bound = 1.0 / eps;
    let (mut lo, mut hi) = (-bound, bound);
    let mut x = 0.0;
    let mut converged = false;
    for _ in 0..100 {
        let gx = g(x) - target;
        if gx == 0.0 {
            converged = true;
            break;
        }
        if gx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = x - gx / dg(x);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= 1e-14 * (1.0 + x.abs()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence);
    }
    let vt = x;
    let vs = star_checked("v_tilde", vt, eps)?;
    let w = (eps * wt * vs / ws).asinh() / eps;
    Ok((vt, w))
}

/// Unit normal of a quad from any three consecutive corners, preferring the
/// corner `p3`, i.e. `(p3 - p4) x (p3 - p2)`.
pub fn center_normal(p: &[Option<Point3>; 4]) -> Option<Point3> {
    for corner in [2usize, 0, 1, 3] {
        let prev = p[(corner + 3) % 4];
        let here = p[corner];
        let next = p[(corner + 1) % 4];
        if let (Some(a), Some(b), Some(c)) = (prev, here, next) {
            let n = (c - b).cross(&(a - b));
            let norm = n.norm();
            if norm > 0.0 && norm.is_finite() {
                return Some(n / norm);
            }
        }
    }
    None
}

/// Scaled curvature on an edge from the normals of the flanking centers.
///
/// On x-edges this is `l` with `eps l = <N_- x N_+, a>`, on y-edges `k` with
/// `eps k = -<N_- x N_+, b>`; `N_-` is the center on the negative side.
pub fn edge_curvature(kind: SlotKind, n_minus: &Point3, n_plus: &Point3, tangent: &Point3, eps: f64) -> f64 {
    let s = n_minus.cross(n_plus).dot(tangent) / eps;
    match kind {
        SlotKind::XEdge => s,
        SlotKind::YEdge => -s,
        _ => panic!("curvatures live on edges"),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteQuantities {
    pub eps: f64,
    pub u_hat: StaggeredField<f64>,
    pub u_check: StaggeredField<f64>,
    pub a: StaggeredField<Point3>,
    pub b: StaggeredField<Point3>,
    pub normal: StaggeredField<Point3>,
    pub v: StaggeredField<f64>,
    pub w: StaggeredField<f64>,
    pub v_tilde: StaggeredField<f64>,
    pub w_tilde: StaggeredField<f64>,
    /// On y-edges.
    pub k: StaggeredField<f64>,
    /// On x-edges.
    pub l: StaggeredField<f64>,
    /// Largest disagreement between the two edge-length forms of `v`, `w`.
    pub defvw_defect: f64,
    /// Largest disagreement between the two angle forms of `ṽ`, `w̃`.
    pub defomega_defect: f64,
}

fn pick(first: Option<f64>, second: Option<f64>, defect: &mut f64) -> Option<f64> {
    if let (Some(a), Some(b)) = (first, second) {
        *defect = defect.max((a - b).abs());
    }
    first.or(second)
}

/// All discrete quantities that the surface's vertices determine.
///
/// Quantities on partial squares (three corners) are evaluated with whichever
/// of the equivalent expressions the available corners allow.
pub fn extract(surface: &DiscreteSurface) -> Result<DiscreteQuantities> {
    let spec: DomainSpec = *surface.spec();
    let eps = surface.eps;
    let mut u_hat = StaggeredField::new(spec, SlotKind::XEdge);
    let mut u_check = StaggeredField::new(spec, SlotKind::YEdge);
    let mut a = StaggeredField::new(spec, SlotKind::XEdge);
    let mut b = StaggeredField::new(spec, SlotKind::YEdge);
    for (kind, hat, unit, (dm, dn)) in
        [(SlotKind::XEdge, &mut u_hat, &mut a, (1, 0)), (SlotKind::YEdge, &mut u_check, &mut b, (0, 1))]
    {
        for e in spec.indices(kind) {
            if let (Some(p), Some(q)) = (surface.get(e.offset(-dm, -dn)), surface.get(e.offset(dm, dn))) {
                let d = (q - p) / eps;
                let len = d.norm();
                if !(len > 0.0) {
                    return Err(Error::DegenerateEdge(e));
                }
                hat.insert(e, len.ln())?;
                unit.insert(e, d / len)?;
            }
        }
    }

    let mut normal = StaggeredField::new(spec, SlotKind::Center);
    let mut v = StaggeredField::new(spec, SlotKind::Center);
    let mut w = StaggeredField::new(spec, SlotKind::Center);
    let mut v_tilde = StaggeredField::new(spec, SlotKind::Center);
    let mut w_tilde = StaggeredField::new(spec, SlotKind::Center);
    let mut defvw_defect: f64 = 0.0;
    let mut defomega_defect: f64 = 0.0;
    for c in spec.indices(SlotKind::Center) {
        let p = surface.partial_quad(c);
        if p.iter().filter(|x| x.is_some()).count() < 3 {
            continue;
        }
        if let Some(n) = center_normal(&p) {
            normal.insert(c, n)?;
        }
        let uh = |dm, dn| u_hat.get(c.offset(dm, dn)).copied();
        let uc = |dm, dn| u_check.get(c.offset(dm, dn)).copied();
        let sub = |x: Option<f64>, y: Option<f64>| Some((x? - y?) / eps);
        if let Some(val) = pick(sub(uc(1, 0), uh(0, 1)), sub(uh(0, -1), uc(-1, 0)), &mut defvw_defect) {
            v.insert(c, val)?;
        }
        if let Some(val) = pick(sub(uc(1, 0), uh(0, -1)), sub(uh(0, 1), uc(-1, 0)), &mut defvw_defect) {
            w.insert(c, val)?;
        }
        let ang = |i: usize, j: usize, k: usize, sign: f64| -> Option<f64> {
            Some(sign * cos_angle(&p[i]?, &p[j]?, &p[k]?) / eps)
        };
        if let Some(val) = pick(ang(0, 1, 2, 1.0), ang(2, 3, 0, -1.0), &mut defomega_defect) {
            v_tilde.insert(c, val)?;
        }
        if let Some(val) = pick(ang(1, 2, 3, 1.0), ang(3, 0, 1, -1.0), &mut defomega_defect) {
            w_tilde.insert(c, val)?;
        }
    }

    let mut k = StaggeredField::new(spec, SlotKind::YEdge);
    for (e, t) in b.iter() {
        if let (Some(nm), Some(np)) = (normal.get(e.offset(-1, 0)), normal.get(e.offset(1, 0))) {
            k.insert(e, edge_curvature(SlotKind::YEdge, nm, np, t, eps))?;
        }
    }
    let mut l = StaggeredField::new(spec, SlotKind::XEdge);
    for (e, t) in a.iter() {
        if let (Some(nm), Some(np)) = (normal.get(e.offset(0, -1)), normal.get(e.offset(0, 1))) {
            l.insert(e, edge_curvature(SlotKind::XEdge, nm, np, t, eps))?;
        }
    }

    Ok(DiscreteQuantities {
        eps,
        u_hat,
        u_check,
        a,
        b,
        normal,
        v,
        w,
        v_tilde,
        w_tilde,
        k,
        l,
        defvw_defect,
        defomega_defect,
    })
}

/// Sup-norm residuals of the discrete frame relations.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FrameResiduals {
    /// `delta_x F - e^û a` on x-edges.
    pub recon_x: f64,
    /// `delta_y F - e^ǔ b` on y-edges.
    pub recon_y: f64,
    /// Expansion of `delta_y a` at centers.
    pub recon_a: f64,
    /// Expansion of `delta_x b` at centers.
    pub recon_b: f64,
}

pub fn frame_relation_residuals(surface: &DiscreteSurface, q: &DiscreteQuantities) -> FrameResiduals {
    let eps = q.eps;
    let mut out = FrameResiduals::default();
    for (e, uh) in q.u_hat.iter() {
        if let (Some(p), Some(r), Some(a)) = (surface.get(e.offset(-1, 0)), surface.get(e.offset(1, 0)), q.a.get(e)) {
            out.recon_x = out.recon_x.max(((r - p) / eps - a * uh.exp()).norm());
        }
    }
    for (e, uc) in q.u_check.iter() {
        if let (Some(p), Some(r), Some(b)) = (surface.get(e.offset(0, -1)), surface.get(e.offset(0, 1)), q.b.get(e)) {
            out.recon_y = out.recon_y.max(((r - p) / eps - b * uc.exp()).norm());
        }
    }
    for (c, vt) in q.v_tilde.iter() {
        let Some(wt) = q.w_tilde.get(c) else { continue };
        let ratio = star(*vt, eps) / star(*wt, eps);
        let (a_up, a_dn) = (q.a.get(c.offset(0, 1)), q.a.get(c.offset(0, -1)));
        let (b_rt, b_lf) = (q.b.get(c.offset(1, 0)), q.b.get(c.offset(-1, 0)));
        if let (Some(a_up), Some(a_dn), Some(b_lf)) = (a_up, a_dn, b_lf) {
            let lhs = (a_up - a_dn) / eps;
            let rhs = b_lf * (ratio * wt + vt) + a_dn * ((ratio - 1.0) / eps);
            out.recon_a = out.recon_a.max((lhs - rhs).norm());
        }
        if let (Some(b_rt), Some(b_lf), Some(a_dn)) = (b_rt, b_lf, a_dn) {
            let lhs = (b_rt - b_lf) / eps;
            let rhs = a_dn * (ratio * wt - vt) + b_lf * ((ratio - 1.0) / eps);
            out.recon_b = out.recon_b.max((lhs - rhs).norm());
        }
    }
    out
}

/// Pointwise Gauss–Codazzi residuals on vertex slots.
#[derive(Clone, Debug, PartialEq)]
pub struct GCResidualFields {
    pub gd1: StaggeredField<f64>,
    pub gd1a: StaggeredField<f64>,
    pub gd2: StaggeredField<f64>,
    pub gd3: StaggeredField<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GCResiduals {
    pub r_gd1: f64,
    pub r_gd1a: f64,
    pub r_gd2: f64,
    pub r_gd3: f64,
    pub r_defiso: f64,
}

pub fn gc_residual_fields(q: &DiscreteQuantities) -> GCResidualFields {
    let spec = q.v.spec;
    let eps = q.eps;
    let mut gd1 = StaggeredField::new(spec, SlotKind::Vertex);
    let mut gd1a = StaggeredField::new(spec, SlotKind::Vertex);
    let mut gd2 = StaggeredField::new(spec, SlotKind::Vertex);
    let mut gd3 = StaggeredField::new(spec, SlotKind::Vertex);
    let uh = |i: LatticeIndex| q.u_hat.get(i).copied();
    let uc = |i: LatticeIndex| q.u_check.get(i).copied();
    for p in spec.indices(SlotKind::Vertex) {
        let at = |f: &StaggeredField<f64>, dm, dn| f.get(p.offset(dm, dn)).copied();
        // The four centers around p, with v and w taken from the edge-length
        // expressions that use only the edges incident to p.
        let local = (|| {
            let (xp, xm) = (uh(p.offset(1, 0))?, uh(p.offset(-1, 0))?);
            let (yp, ym) = (uc(p.offset(0, 1))?, uc(p.offset(0, -1))?);
            // each center must exist for the difference quotient to be defined
            for (dm, dn) in [(1, 1), (-1, -1), (1, -1), (-1, 1)] {
                q.v.get(p.offset(dm, dn))?;
            }
            let v_n = xp - yp; // center p + (1,1), p is its p1
            let v_s = ym - xm; // center p - (1,1), p is its p3
            let w_e = xp - ym; // center p + (1,-1), p is its p4
            let w_w = yp - xm; // center p + (-1,1), p is its p2
            Some(((v_n - v_s) - (w_e - w_w)) / (eps * eps))
        })();
        if let Some(r) = local {
            let _ = gd1.insert(p, r);
        }
        let (Some(_), Some(_), Some(v_e), Some(v_w)) =
            (at(&q.v, 1, 1), at(&q.v, -1, -1), at(&q.v, 1, -1), at(&q.v, -1, 1))
        else {
            continue;
        };
        let (Some(w_n), Some(w_s), Some(_), Some(_)) =
            (at(&q.w, 1, 1), at(&q.w, -1, -1), at(&q.w, 1, -1), at(&q.w, -1, 1))
        else {
            continue;
        };
        let k_s = at(&q.k, 0, -1);
        let k_n = at(&q.k, 0, 1);
        let l_w = at(&q.l, -1, 0);
        let l_e = at(&q.l, 1, 0);
        let d_eta_w = (w_n - w_s) / eps;
        let d_xi_v = (v_e - v_w) / eps;
        if let (Some(ks), Some(lw)) = (k_s, l_w) {
            let _ = gd1a.insert(p, d_eta_w + d_xi_v + ks * lw);
        }
        if let (Some(ks), Some(kn), Some(lw)) = (k_s, k_n, l_w) {
            let _ = gd2.insert(p, (kn - ks) / eps - lw * (w_s - v_e));
        }
        if let (Some(lw), Some(le), Some(ks)) = (l_w, l_e, k_s) {
            let _ = gd3.insert(p, (le - lw) / eps - ks * (w_s + v_w));
        }
    }
    GCResidualFields { gd1, gd1a, gd2, gd3 }
}

fn sup(f: &StaggeredField<f64>, keep: impl Fn(LatticeIndex) -> bool) -> f64 {
    f.iter().filter(|(i, _)| keep(*i)).fold(0.0, |m, (_, v)| m.max(v.abs()))
}

pub fn gc_residuals(q: &DiscreteQuantities) -> GCResiduals {
    gc_residuals_within(q, |_| true)
}

/// Residual sups restricted to vertices accepted by `keep`.
pub fn gc_residuals_within(q: &DiscreteQuantities, keep: impl Fn(LatticeIndex) -> bool + Copy) -> GCResiduals {
    let f = gc_residual_fields(q);
    let mut r_defiso: f64 = 0.0;
    for c in q.v.keys() {
        let get = |fld: &StaggeredField<f64>, dm, dn| fld.get(c.offset(dm, dn)).copied();
        if let (Some(a), Some(b), Some(c1), Some(d)) =
            (get(&q.u_check, 1, 0), get(&q.u_check, -1, 0), get(&q.u_hat, 0, 1), get(&q.u_hat, 0, -1))
        {
            r_defiso = r_defiso.max(((a + b) - (c1 + d)).exp_m1().abs());
        }
    }
    GCResiduals {
        r_gd1: sup(&f.gd1, keep),
        r_gd1a: sup(&f.gd1a, keep),
        r_gd2: sup(&f.gd2, keep),
        r_gd3: sup(&f.gd3, keep),
        r_defiso,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_at_zero() {
        assert_eq!(vw_from_tilde(0.0, 0.0, 0.1).unwrap(), (0.0, 0.0));
        assert_eq!(tilde_from_vw(0.0, 0.0, 0.1), (0.0, 0.0));
        assert_eq!(mixed_pair_solve(0.0, 0.0, 0.1).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn frozen_conversion_values() {
        let (v, _) = vw_from_tilde(1.0, 2.0, 0.1).unwrap();
        let want = 10.0 * (0.1 * (1.0f64 - 0.04).sqrt() / (1.0f64 - 0.01).sqrt()).asinh();
        assert!((v - want).abs() < 1e-15);
        assert!((v - 0.983_147_346_734_629).abs() < 1e-14);
        let (vt, _) = tilde_from_vw(1.0, 2.0, 0.1);
        assert!((vt - 0.1f64.tanh() * 0.2f64.cosh() / 0.1).abs() < 1e-15);
        assert!((vt - 1.01668).abs() < 5e-6);
    }

    #[test]
    fn star_overflow() {
        assert!(matches!(vw_from_tilde(10.0, 0.0, 0.1), Err(Error::StarOverflow { .. })));
        assert!(matches!(mixed_pair_solve(0.3, -12.0, 0.1), Err(Error::StarOverflow { .. })));
    }

    #[test]
    fn mixed_pair_matches_closed_form() {
        let eps = 0.2;
        for &(v, wt) in &[(0.7, -1.3), (-2.0, 0.4), (1.4, 1.4)] {
            let (vt, _) = mixed_pair_solve(v, wt, eps).unwrap();
            let s = (eps * v).sinh() / (eps * star(wt, eps));
            let exact = s / (1.0 + eps * eps * s * s).sqrt();
            assert!((vt - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn unit_square_normal_and_curvature_signs() {
        let p = [
            Some(Point3::new(0., 0., 0.)),
            Some(Point3::new(1., 0., 0.)),
            Some(Point3::new(1., 1., 0.)),
            Some(Point3::new(0., 1., 0.)),
        ];
        assert_eq!(center_normal(&p), Some(Point3::new(0., 0., 1.)));
        let mut partial = p;
        partial[2] = None;
        assert_eq!(center_normal(&partial), Some(Point3::new(0., 0., 1.)));
        let z = Point3::z();
        assert_eq!(edge_curvature(SlotKind::XEdge, &z, &z, &Point3::x(), 0.1), 0.0);
    }
}
