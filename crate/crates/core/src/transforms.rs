//! Christoffel and Darboux transformations, discrete and smooth.
//!
//! Discrete transforms are propagated over a breadth-first spanning tree of
//! the vertex graph. Every edge not on the tree is left as an independent
//! check, available through the audit functions.

use std::collections::VecDeque;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{complete_with_cross_ratio, cross_ratio, diameter, is_collinear, Point3};
use crate::lattice::{elementary_square, DiscreteSurface, LatticeIndex, SlotKind, StaggeredField};
use crate::smooth::SmoothSurface;

/// Completions with a larger condition number are reported as singular.
pub const MAX_DARBOUX_CONDITION: f64 = 1e12;

/// Edge family sign: `+1` along x, `-1` along y.
fn neighbours(i: LatticeIndex) -> [(LatticeIndex, f64); 4] {
    [(i.offset(2, 0), 1.0), (i.offset(-2, 0), 1.0), (i.offset(0, 2), -1.0), (i.offset(0, -2), -1.0)]
}

fn midpoint(a: LatticeIndex, b: LatticeIndex) -> LatticeIndex {
    LatticeIndex::new((a.m + b.m) / 2, (a.n + b.n) / 2)
}

fn check_base(surface: &DiscreteSurface, base: LatticeIndex) -> Result<Point3> {
    if base.kind() != SlotKind::Vertex {
        return Err(Error::WrongParity(base));
    }
    surface.get(base).copied().ok_or(Error::OutOfDomain(base))
}

/// Tree edges `(parent, child, family)` in breadth-first order from `base`.
fn spanning_tree(surface: &DiscreteSurface, base: LatticeIndex) -> Vec<(LatticeIndex, LatticeIndex, f64)> {
    let mut seen: StaggeredField<()> = StaggeredField::new(*surface.spec(), SlotKind::Vertex);
    seen.insert(base, ()).expect("base is a populated vertex");
    let mut queue = VecDeque::from([base]);
    let mut edges = Vec::with_capacity(surface.positions.len());
    while let Some(p) = queue.pop_front() {
        for (q, family) in neighbours(p) {
            if surface.get(q).is_some() && !seen.contains(q) {
                seen.insert(q, ()).expect("populated vertex is in the domain");
                edges.push((p, q, family));
                queue.push_back(q);
            }
        }
    }
    edges
}

/// Dual edge of the oriented edge `e` in the given family.
fn dual_edge(e: &Point3, family: f64, eps: f64) -> Option<Point3> {
    let n2 = e.norm_squared();
    (n2 > 0.0 && n2.is_finite()).then(|| e * (family * eps * eps / n2))
}

/// Discrete Christoffel dual, anchored with `base` at the origin.
pub fn christoffel_discrete(surface: &DiscreteSurface, base: LatticeIndex) -> Result<DiscreteSurface> {
    check_base(surface, base)?;
    let eps = surface.eps;
    let mut dual = DiscreteSurface::new(*surface.spec());
    dual.positions.insert(base, Point3::zeros())?;
    for (p, q, family) in spanning_tree(surface, base) {
        let e = surface.get(q).unwrap() - surface.get(p).unwrap();
        let de = dual_edge(&e, family, eps).ok_or(Error::DegenerateEdge(midpoint(p, q)))?;
        let at = dual.get(p).unwrap() + de;
        dual.positions.insert(q, at)?;
    }
    Ok(dual)
}

/// Largest loop sum of the dual one-form around a complete quad, relative
/// to the size of the dual quad.
pub fn christoffel_closedness(surface: &DiscreteSurface) -> Result<f64> {
    let eps = surface.eps;
    let mut worst: f64 = 0.0;
    for c in surface.complete_quads() {
        let p = surface.quad(c).unwrap();
        let idx = elementary_square(c)?;
        let mut sum = Point3::zeros();
        let mut corners = [Point3::zeros(); 4];
        for s in 0..4 {
            // p1 -> p2 and p3 -> p4 are x-edges
            let family = if s % 2 == 0 { 1.0 } else { -1.0 };
            let de = dual_edge(&(p[(s + 1) % 4] - p[s]), family, eps)
                .ok_or(Error::DegenerateEdge(midpoint(idx[s], idx[(s + 1) % 4])))?;
            sum += de;
            corners[(s + 1) % 4] = corners[s] + de;
        }
        let scale = diameter(&corners);
        worst = worst.max(sum.norm() / scale);
    }
    Ok(worst)
}

/// Transformed point at `to`, from the one at `from` across a single edge.
fn darboux_edge(
    base: &DiscreteSurface,
    plus: &DiscreteSurface,
    from: LatticeIndex,
    to: LatticeIndex,
    family: f64,
    c: f64,
) -> Result<Point3> {
    let forward = to.m > from.m || to.n > from.n;
    let (lo, hi) = if forward { (from, to) } else { (to, from) };
    let (f_lo, f_hi) = (*base.get(lo).unwrap(), *base.get(hi).unwrap());
    let known_plus = *plus.get(from).unwrap();
    // quadruple (F_lo, F_hi, F+_hi, F+_lo); the unknown is slot 3 or 4
    let known = [f_lo, f_hi, known_plus];
    let slot = if forward { 3 } else { 4 };
    if is_collinear(&known[0], &known[1], &known[2]) {
        return Err(Error::DegeneratePlane(to));
    }
    let eps = base.eps;
    let q = Complex64::new(family * eps * eps / c, 0.0);
    let done = complete_with_cross_ratio(&known, slot, q).map_err(|_| Error::DegeneratePlane(to))?;
    if done.condition > MAX_DARBOUX_CONDITION {
        return Err(Error::SingularMoebius(to));
    }
    Ok(done.point)
}

/// Discrete Darboux transform with parameter `c` (cross-ratio `eps^2 / c`
/// on x-edges and `-eps^2 / c` on y-edges), started from `seed` at `base`.
pub fn darboux_discrete_at(
    surface: &DiscreteSurface,
    base: LatticeIndex,
    seed: Point3,
    c: f64,
) -> Result<DiscreteSurface> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::ZeroParameter);
    }
    let f0 = check_base(surface, base)?;
    if (seed - f0).norm() <= 1e-12 * (1.0 + f0.norm()) {
        let eps = surface.eps;
        return Err(Error::CollapsedPair { x: base.x(eps), y: base.y(eps) });
    }
    let mut plus = DiscreteSurface::new(*surface.spec());
    plus.positions.insert(base, seed)?;
    for (p, q, family) in spanning_tree(surface, base) {
        let at = darboux_edge(surface, &plus, p, q, family, c)?;
        plus.positions.insert(q, at)?;
    }
    Ok(plus)
}

/// [`darboux_discrete_at`] from the lattice origin.
pub fn darboux_discrete(surface: &DiscreteSurface, seed: Point3, c: f64) -> Result<DiscreteSurface> {
    darboux_discrete_at(surface, LatticeIndex::new(0, 0), seed, c)
}

/// Largest relative cross-ratio error over every edge with all four points.
pub fn darboux_edge_audit(base: &DiscreteSurface, plus: &DiscreteSurface, c: f64) -> Result<f64> {
    let eps = base.eps;
    let mut worst: f64 = 0.0;
    for (kind, family) in [(SlotKind::XEdge, 1.0), (SlotKind::YEdge, -1.0)] {
        let target = family * eps * eps / c;
        for e in base.spec().indices(kind) {
            let (lo, hi) = if kind == SlotKind::XEdge {
                (e.offset(-1, 0), e.offset(1, 0))
            } else {
                (e.offset(0, -1), e.offset(0, 1))
            };
            let pts = (base.get(lo), base.get(hi), plus.get(hi), plus.get(lo));
            if let (Some(a), Some(b), Some(cc), Some(d)) = pts {
                let q = cross_ratio(a, b, cc, d)?;
                worst = worst.max((q - target).norm() / target.abs());
            }
        }
    }
    Ok(worst)
}

/// Largest disagreement, relative to the transformed quad's size, between
/// the two ways of carrying the transform from `p1` to `p3` around a quad,
/// and the stored value at `p3`.
pub fn darboux_face_audit(base: &DiscreteSurface, plus: &DiscreteSurface, c: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for center in base.complete_quads() {
        let idx = elementary_square(center)?;
        if idx.iter().any(|&i| plus.get(i).is_none()) {
            continue;
        }
        let mut scratch = DiscreteSurface::new(*base.spec());
        scratch.positions.insert(idx[0], *plus.get(idx[0]).unwrap())?;
        let via_2 = {
            let p2 = darboux_edge(base, &scratch, idx[0], idx[1], 1.0, c)?;
            scratch.positions.insert(idx[1], p2)?;
            darboux_edge(base, &scratch, idx[1], idx[2], -1.0, c)?
        };
        let via_4 = {
            let p4 = darboux_edge(base, &scratch, idx[0], idx[3], -1.0, c)?;
            scratch.positions.insert(idx[3], p4)?;
            darboux_edge(base, &scratch, idx[3], idx[2], 1.0, c)?
        };
        let quad: Vec<Point3> = idx.iter().map(|&i| *plus.get(i).unwrap()).collect();
        let scale = diameter(&quad);
        let stored = quad[2];
        let d = (via_2 - via_4).norm().max((via_2 - stored).norm()).max((via_4 - stored).norm());
        worst = worst.max(d / scale);
    }
    Ok(worst)
}

/// Symmetric grid `x = i * step`, `|x| <= half_x`, and likewise in `y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatchGrid {
    pub half_x: f64,
    pub half_y: f64,
    pub step: f64,
    /// Integrator substeps per grid step, for ODE-based transforms.
    pub substeps: usize,
}

impl PatchGrid {
    pub fn new(half_x: f64, half_y: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && half_x >= step && half_y >= step) {
            return Err(Error::InvalidInput("patch grid needs 0 < step <= half sizes".into()));
        }
        Ok(Self { half_x, half_y, step, substeps: 4 })
    }

    /// Nodes on each side of zero, in x and y.
    pub fn counts(&self) -> (i64, i64) {
        ((self.half_x / self.step + 1e-9).floor() as i64, (self.half_y / self.step + 1e-9).floor() as i64)
    }
}

/// Surface samples on a [`PatchGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSurface {
    pub grid: PatchGrid,
    nx: i64,
    ny: i64,
    /// Row-major from `(-nx, -ny)`.
    pub f: Vec<Point3>,
    /// Largest difference between the x-first and y-first integration orders.
    pub path_defect: f64,
}

impl SampledSurface {
    pub fn counts(&self) -> (i64, i64) {
        (self.nx, self.ny)
    }

    pub fn at(&self, i: i64, j: i64) -> Point3 {
        self.f[((j + self.ny) * (2 * self.nx + 1) + i + self.nx) as usize]
    }

    /// Sample at a grid node, if `(x, y)` is one.
    pub fn at_xy(&self, x: f64, y: f64) -> Option<Point3> {
        let (fi, fj) = (x / self.grid.step, y / self.grid.step);
        let (i, j) = (fi.round(), fj.round());
        if (fi - i).abs() > 1e-6 || (fj - j).abs() > 1e-6 {
            return None;
        }
        let (i, j) = (i as i64, j as i64);
        (i.abs() <= self.nx && j.abs() <= self.ny).then(|| self.at(i, j))
    }
}

/// Direction of a grid step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Along {
    X,
    Y,
}

// Integrates from the origin, x-first and y-first, with `step(value, along, from, to)`.
fn sweep_patch(
    grid: &PatchGrid,
    start: Point3,
    step: &(dyn Fn(Point3, Along, (f64, f64), (f64, f64)) -> Result<Point3> + Sync),
) -> Result<SampledSurface> {
    let (nx, ny) = grid.counts();
    let h = grid.step;
    let w = (2 * nx + 1) as usize;
    let idx = |i: i64, j: i64| ((j + ny) as usize) * w + (i + nx) as usize;
    let line = |start: Point3, along: Along, fixed: i64, n: i64| -> Result<Vec<Point3>> {
        let mut out = vec![start; (2 * n + 1) as usize];
        for dir in [1i64, -1] {
            let mut p = start;
            for t in 0..n {
                let (a, b) = (dir * t, dir * (t + 1));
                let pt = |s: i64| match along {
                    Along::X => (s as f64 * h, fixed as f64 * h),
                    Along::Y => (fixed as f64 * h, s as f64 * h),
                };
                p = step(p, along, pt(a), pt(b))?;
                out[(b + n) as usize] = p;
            }
        }
        Ok(out)
    };
    use rayon::prelude::*;
    let mut first = vec![Point3::zeros(); w * (2 * ny + 1) as usize];
    let row0 = line(start, Along::X, 0, nx)?;
    let cols: Vec<Vec<Point3>> = (-nx..=nx)
        .into_par_iter()
        .map(|i| line(row0[(i + nx) as usize], Along::Y, i, ny))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;
    for (ci, col) in cols.iter().enumerate() {
        for (j, p) in col.iter().enumerate() {
            first[idx(ci as i64 - nx, j as i64 - ny)] = *p;
        }
    }
    let col0 = line(start, Along::Y, 0, ny)?;
    let rows: Vec<Vec<Point3>> = (-ny..=ny)
        .into_par_iter()
        .map(|j| line(col0[(j + ny) as usize], Along::X, j, nx))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;
    let mut path_defect: f64 = 0.0;
    for (rj, row) in rows.iter().enumerate() {
        for (i, p) in row.iter().enumerate() {
            let k = idx(i as i64 - nx, rj as i64 - ny);
            path_defect = path_defect.max((first[k] - p).norm());
        }
    }
    Ok(SampledSurface { grid: *grid, nx, ny, f: first, path_defect })
}

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Smooth Christoffel dual on a patch, anchored at the origin.
pub fn christoffel_smooth(surface: &dyn SmoothSurface, grid: &PatchGrid) -> Result<SampledSurface> {
    let form = |along: Along, x: f64, y: f64| -> Result<Point3> {
        let (d, sign) = match along {
            Along::X => (surface.fx(x, y), 1.0),
            Along::Y => (surface.fy(x, y), -1.0),
        };
        let n2 = d.norm_squared();
        if !(n2 > 1e-24 && n2.is_finite()) {
            return Err(Error::DegenerateMetric { x, y });
        }
        Ok(d * (sign / n2))
    };
    let step = |p: Point3, along: Along, a: (f64, f64), b: (f64, f64)| -> Result<Point3> {
        let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
        let half = ((b.0 - a.0) / 2.0, (b.1 - a.1) / 2.0);
        let len = match along {
            Along::X => half.0,
            Along::Y => half.1,
        };
        let mut acc = Point3::zeros();
        for (t, wt) in GAUSS5 {
            acc += form(along, mid.0 + t * half.0, mid.1 + t * half.1)? * wt;
        }
        Ok(p + acc * len)
    };
    sweep_patch(grid, Point3::zeros(), &step)
}

/// Smooth Darboux transform with parameter `c`, seeded with `F+(0, 0) = seed`.
pub fn darboux_smooth(surface: &dyn SmoothSurface, seed: Point3, c: f64, grid: &PatchGrid) -> Result<SampledSurface> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::ZeroParameter);
    }
    let rate = |p: Point3, along: Along, x: f64, y: f64| -> Result<Point3> {
        let f = surface.position(x, y);
        let d = p - f;
        let dn = d.norm();
        if !(dn > 1e-10 * (1.0 + f.norm())) {
            return Err(Error::CollapsedPair { x, y });
        }
        let dhat = d / dn;
        let (t, sign) = match along {
            Along::X => (surface.fx(x, y), -1.0),
            Along::Y => (surface.fy(x, y), 1.0),
        };
        let reflected = t - dhat * (2.0 * t.dot(&dhat));
        Ok(reflected * (sign * dn * dn / (c * t.norm_squared())))
    };
    let subs = grid.substeps.max(1);
    let step = |p: Point3, along: Along, a: (f64, f64), b: (f64, f64)| -> Result<Point3> {
        let (dx, dy) = ((b.0 - a.0) / subs as f64, (b.1 - a.1) / subs as f64);
        let hs = match along {
            Along::X => dx,
            Along::Y => dy,
        };
        let mut p = p;
        for s in 0..subs {
            let (x, y) = (a.0 + s as f64 * dx, a.1 + s as f64 * dy);
            let k1 = rate(p, along, x, y)?;
            let k2 = rate(p + k1 * (hs / 2.0), along, x + dx / 2.0, y + dy / 2.0)?;
            let k3 = rate(p + k2 * (hs / 2.0), along, x + dx / 2.0, y + dy / 2.0)?;
            let k4 = rate(p + k3 * hs, along, x + dx, y + dy)?;
            p += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (hs / 6.0);
        }
        Ok(p)
    };
    sweep_patch(grid, seed, &step)
}

/// Conformal factor, Gauss–Codazzi quantities and normal of a sampled
/// surface at an interior node, by fourth-order finite differences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampledQuantities {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub k: f64,
    pub l: f64,
    pub normal: Point3,
}

/// Needs four nodes of margin on every side.
pub fn sampled_quantities(s: &SampledSurface, i: i64, j: i64) -> Option<SampledQuantities> {
    let (nx, ny) = s.counts();
    if i.abs() + 4 > nx || j.abs() + 4 > ny {
        return None;
    }
    let h = s.grid.step;
    let d = |g: &dyn Fn(i64) -> Point3| (g(-2) - g(-1) * 8.0 + g(1) * 8.0 - g(2)) / (12.0 * h);
    let fx = |i: i64, j: i64| d(&|t| s.at(i + t, j));
    let fy = |i: i64, j: i64| d(&|t| s.at(i, j + t));
    let u = |i: i64, j: i64| fx(i, j).norm().ln();
    let n = |i: i64, j: i64| fx(i, j).cross(&fy(i, j)).normalize();
    let ds = |g: &dyn Fn(i64) -> f64| (g(-2) - 8.0 * g(-1) + 8.0 * g(1) - g(2)) / (12.0 * h);
    let ux = ds(&|t| u(i + t, j));
    let uy = ds(&|t| u(i, j + t));
    let e = u(i, j).exp();
    let nx_ = d(&|t| n(i + t, j));
    let ny_ = d(&|t| n(i, j + t));
    Some(SampledQuantities {
        u: u(i, j),
        v: 0.5 * (ux - uy),
        w: 0.5 * (ux + uy),
        k: -nx_.dot(&fx(i, j)) / e,
        l: -ny_.dot(&fy(i, j)) / e,
        normal: n(i, j),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bjorling::{derive_cauchy_data, sample_initial_strip, BjorlingData};
    use crate::growth::grow;
    use crate::smooth::BuiltinSurface;

    fn grown(name: &str, eps: f64) -> DiscreteSurface {
        let cd = derive_cauchy_data(&BjorlingData::builtin(name, 1.0).unwrap()).unwrap();
        let strip = sample_initial_strip(&cd, eps).unwrap();
        grow(&strip, 0.3).surface
    }

    #[test]
    fn christoffel_is_closed_and_involutive() {
        let s = grown("sphere_mercator", 0.1);
        let o = LatticeIndex::new(0, 0);
        let dual = christoffel_discrete(&s, o).unwrap();
        assert_eq!(dual.positions.len(), s.positions.len());
        assert!(christoffel_closedness(&s).unwrap() < 1e-10);
        let back = christoffel_discrete(&dual, o).unwrap();
        let f0 = *s.get(o).unwrap();
        for (i, p) in s.positions.iter() {
            assert!((back.get(i).unwrap() - (p - f0)).norm() < 1e-9);
        }
    }

    #[test]
    fn christoffel_base_checks() {
        let s = grown("cylinder", 0.1);
        assert!(matches!(christoffel_discrete(&s, LatticeIndex::new(1, 0)), Err(Error::WrongParity(_))));
        assert!(matches!(christoffel_discrete(&s, LatticeIndex::new(400, 0)), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn darboux_cross_ratios_hold() {
        let s = grown("sphere_mercator", 0.1);
        let seed = s.get(LatticeIndex::new(0, 0)).unwrap() + Point3::new(0.2, 0.3, 0.1);
        let plus = darboux_discrete(&s, seed, 1.0).unwrap();
        assert_eq!(plus.positions.len(), s.positions.len());
        assert!(darboux_edge_audit(&s, &plus, 1.0).unwrap() < 1e-9);
        assert!(darboux_face_audit(&s, &plus, 1.0).unwrap() < 1e-9);
        assert_eq!(darboux_discrete(&s, seed, 0.0), Err(Error::ZeroParameter));
    }

    #[test]
    fn smooth_cylinder_dual() {
        let grid = PatchGrid::new(0.5, 0.5, 0.05).unwrap();
        let dual = christoffel_smooth(&BuiltinSurface::Cylinder, &grid).unwrap();
        assert!(dual.path_defect < 1e-12);
        let (nx, ny) = dual.counts();
        for j in -ny..=ny {
            for i in -nx..=nx {
                let (x, y) = (i as f64 * 0.05, j as f64 * 0.05);
                let want = Point3::new(x.cos() - 1.0, x.sin(), -y);
                assert!((dual.at(i, j) - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn smooth_sphere_dual_quantities() {
        let grid = PatchGrid::new(0.4, 0.4, 0.01).unwrap();
        let sph = BuiltinSurface::SphereMercator;
        let dual = christoffel_smooth(&sph, &grid).unwrap();
        assert!(dual.path_defect < 1e-8);
        for &(i, j) in &[(0i64, 0i64), (10, -7), (-20, 15)] {
            let q = sampled_quantities(&dual, i, j).unwrap();
            let (x, y) = (i as f64 * 0.01, j as f64 * 0.01);
            assert!((q.u + sph.u(x, y)).abs() < 1e-6);
            assert!((q.v + sph.v(x, y)).abs() < 1e-6);
            assert!((q.w + sph.w(x, y)).abs() < 1e-6);
            assert!((q.k + sph.k(x, y)).abs() < 1e-6);
            assert!((q.l - sph.l(x, y)).abs() < 1e-6);
            assert!((q.normal + sph.normal(x, y)).norm() < 1e-6);
        }
    }

    #[test]
    fn smooth_darboux_is_path_independent() {
        let grid = PatchGrid::new(0.3, 0.3, 0.025).unwrap();
        let cyl = BuiltinSurface::Cylinder;
        let seed = cyl.position(0.0, 0.0) + Point3::new(0.2, 0.3, 0.1);
        let plus = darboux_smooth(&cyl, seed, 1.0, &grid).unwrap();
        assert!(plus.path_defect < 1e-7, "{}", plus.path_defect);
        assert_eq!(darboux_smooth(&cyl, seed, 0.0, &grid).unwrap_err(), Error::ZeroParameter);
        let collapsed = darboux_smooth(&cyl, cyl.position(0.0, 0.0), 1.0, &grid);
        assert!(matches!(collapsed, Err(Error::CollapsedPair { .. })));
    }
}
