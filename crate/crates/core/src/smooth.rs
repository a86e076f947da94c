//! Smooth references: closed-form isothermic surfaces, a power-series
//! solver for the Gauss–Codazzi Cauchy problem, and frame reconstruction.
//!
//! The Cauchy problem in `eta` is elliptic, so marching schemes amplify
//! every high mode. The solver instead expands the solution about each
//! `xi` node as a bivariate power series, generated from the analytic jets
//! of the Björling data by the Cauchy–Kowalevskaya recursion.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::bjorling::CauchyData;
use crate::error::{Error, Result};
use crate::geometry::{orthonormality_defect, reorthonormalize, Frame3, Point3};
use crate::lattice::DomainSpec;

/// A conformal curvature-line parametrization with its Gauss–Codazzi data.
pub trait SmoothSurface: Send + Sync {
    fn position(&self, x: f64, y: f64) -> Point3;
    fn fx(&self, x: f64, y: f64) -> Point3;
    fn fy(&self, x: f64, y: f64) -> Point3;
    fn normal(&self, x: f64, y: f64) -> Point3;
    fn u(&self, x: f64, y: f64) -> f64;
    fn v(&self, x: f64, y: f64) -> f64;
    fn w(&self, x: f64, y: f64) -> f64;
    fn k(&self, x: f64, y: f64) -> f64;
    fn l(&self, x: f64, y: f64) -> f64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinSurface {
    /// `(cos x, sin x, y)`
    Cylinder,
    /// `(sech y cos x, sech y sin x, tanh y)`
    SphereMercator,
}

pub fn builtin_surface(name: &str) -> Result<BuiltinSurface> {
    match name {
        "cylinder" => Ok(BuiltinSurface::Cylinder),
        "sphere_mercator" | "sphere" => Ok(BuiltinSurface::SphereMercator),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn sech(t: f64) -> f64 {
    1.0 / t.cosh()
}

impl SmoothSurface for BuiltinSurface {
    fn position(&self, x: f64, y: f64) -> Point3 {
        match self {
            Self::Cylinder => Point3::new(x.cos(), x.sin(), y),
            Self::SphereMercator => Point3::new(sech(y) * x.cos(), sech(y) * x.sin(), y.tanh()),
        }
    }
    fn fx(&self, x: f64, y: f64) -> Point3 {
        match self {
            Self::Cylinder => Point3::new(-x.sin(), x.cos(), 0.0),
            Self::SphereMercator => Point3::new(-x.sin(), x.cos(), 0.0) * sech(y),
        }
    }
    fn fy(&self, x: f64, y: f64) -> Point3 {
        match self {
            Self::Cylinder => Point3::z(),
            Self::SphereMercator => {
                let s = sech(y);
                Point3::new(-s * y.tanh() * x.cos(), -s * y.tanh() * x.sin(), s * s)
            }
        }
    }
    fn normal(&self, x: f64, y: f64) -> Point3 {
        match self {
            Self::Cylinder => Point3::new(x.cos(), x.sin(), 0.0),
            Self::SphereMercator => self.position(x, y),
        }
    }
    fn u(&self, _x: f64, y: f64) -> f64 {
        match self {
            Self::Cylinder => 0.0,
            Self::SphereMercator => sech(y).ln(),
        }
    }
    fn v(&self, _x: f64, y: f64) -> f64 {
        match self {
            Self::Cylinder => 0.0,
            Self::SphereMercator => 0.5 * y.tanh(),
        }
    }
    fn w(&self, _x: f64, y: f64) -> f64 {
        match self {
            Self::Cylinder => 0.0,
            Self::SphereMercator => -0.5 * y.tanh(),
        }
    }
    fn k(&self, _x: f64, y: f64) -> f64 {
        match self {
            Self::Cylinder => -1.0,
            Self::SphereMercator => -sech(y),
        }
    }
    fn l(&self, _x: f64, y: f64) -> f64 {
        match self {
            Self::Cylinder => 0.0,
            Self::SphereMercator => -sech(y),
        }
    }
}

/// Residuals of the defining properties of a smooth surface.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SmoothInvariants {
    /// `| |F_x| - e^u |`, `| |F_y| - e^u |` and `|<F_x, F_y>|`.
    pub conformality: f64,
    /// `|<F_xy, N>|`, by finite differences.
    pub curvature_line: f64,
    /// `| -(u_xx + u_yy) - k l |`, by finite differences.
    pub gauss: f64,
}

/// Checks the invariant suite at the given points.
pub fn check_invariants(s: &dyn SmoothSurface, points: &[(f64, f64)]) -> SmoothInvariants {
    let h = 1e-3;
    // fourth-order first and second derivative stencils
    let d1 = |f: &dyn Fn(f64) -> f64| (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
    let d2 = |f: &dyn Fn(f64) -> f64| {
        (-f(-2.0 * h) + 16.0 * f(-h) - 30.0 * f(0.0) + 16.0 * f(h) - f(2.0 * h)) / (12.0 * h * h)
    };
    let mut out = SmoothInvariants::default();
    for &(x, y) in points {
        let (fx, fy) = (s.fx(x, y), s.fy(x, y));
        let eu = s.u(x, y).exp();
        out.conformality =
            out.conformality.max((fx.norm() - eu).abs()).max((fy.norm() - eu).abs()).max(fx.dot(&fy).abs());
        let n = s.normal(x, y);
        let fxy = Point3::from_fn(|i, _| d1(&|t| s.fx(x, y + t)[i]));
        out.curvature_line = out.curvature_line.max(fxy.dot(&n).abs());
        let lap = d2(&|t| s.u(x + t, y)) + d2(&|t| s.u(x, y + t));
        out.gauss = out.gauss.max((-lap - s.k(x, y) * s.l(x, y)).abs());
    }
    out
}

// State layout of the power-series solver.
const V: usize = 0;
const W: usize = 1;
const K: usize = 2;
const L: usize = 3;
const E: usize = 4;
const PSI: usize = 5; // PSI + 3 * column + component
const F: usize = 14;
const NVARS: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CkConfig {
    /// Highest power of `eta` kept.
    pub order: usize,
    /// Relative size of the last series terms above which the expansion
    /// is declared divergent.
    pub tail_tol: f64,
}

impl Default for CkConfig {
    fn default() -> Self {
        Self { order: 32, tail_tol: 1e-9 }
    }
}

/// Bivariate expansion about `(xi, 0)`: `c[var][j][i]` multiplies `s^i t^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CkNode {
    pub xi: f64,
    c: Vec<Vec<Vec<f64>>>,
    tail_tol: f64,
}

/// Full state at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CkState {
    pub v: f64,
    pub w: f64,
    pub k: f64,
    pub l: f64,
    /// `e^u`
    pub e: f64,
    pub psi: Frame3,
    pub f: Point3,
}

// Coefficient j (in t) of the product a * b, truncated to `len` in s.
fn product_level(a: &[Vec<f64>], b: &[Vec<f64>], j: usize, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for jj in 0..=j {
        let (x, y) = (&a[jj], &b[j - jj]);
        for (i, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for ii in 0..=i {
                s += x[ii] * y[i - ii];
            }
            *o += s;
        }
    }
    out
}

impl CkNode {
    pub fn new(cd: &CauchyData, xi: f64, cfg: &CkConfig) -> Self {
        let len = cfg.order + 1;
        let jet = cd.jet(xi, len);
        let mut c: Vec<Vec<Vec<f64>>> = vec![Vec::with_capacity(len); NVARS];
        let mut init = |var: usize, t: &crate::taylor::Taylor| c[var].push(t.coeffs().to_vec());
        init(V, &jet.v);
        init(W, &jet.w);
        init(K, &jet.k);
        init(L, &jet.l);
        init(E, &jet.e);
        for col in 0..3 {
            for r in 0..3 {
                init(PSI + 3 * col + r, &jet.psi[col][r]);
            }
        }
        for r in 0..3 {
            init(F + r, &jet.f[r]);
        }
        for j in 0..len - 1 {
            let n = len - j - 1;
            let ds = |var: usize, c: &Vec<Vec<Vec<f64>>>| -> Vec<f64> {
                (0..n).map(|i| (i + 1) as f64 * c[var][j][i + 1]).collect()
            };
            let lin = |coef: &[(usize, f64)], c: &Vec<Vec<Vec<f64>>>| -> Vec<Vec<f64>> {
                (0..=j)
                    .map(|jj| {
                        (0..c[coef[0].0][jj].len()).map(|i| coef.iter().map(|&(v, a)| a * c[v][jj][i]).sum()).collect()
                    })
                    .collect()
            };
            let prod = |a: usize, b: usize, c: &Vec<Vec<Vec<f64>>>| product_level(&c[a], &c[b], j, n);
            let w_minus_v = lin(&[(W, 1.0), (V, -1.0)], &c);
            let w_plus_v = lin(&[(W, 1.0), (V, 1.0)], &c);
            let mut rhs: Vec<Vec<f64>> = vec![vec![0.0; n]; NVARS];
            let kl = prod(K, L, &c);
            let dw = ds(W, &c);
            let dv = ds(V, &c);
            let dk = ds(K, &c);
            let dl = ds(L, &c);
            let l_wmv = product_level(&c[L], &w_minus_v, j, n);
            let k_wpv = product_level(&c[K], &w_plus_v, j, n);
            let we = prod(W, E, &c);
            for i in 0..n {
                rhs[V][i] = dw[i];
                rhs[W][i] = -dv[i] - kl[i];
                rhs[K][i] = dk[i] + 2.0 * l_wmv[i];
                rhs[L][i] = -dl[i] + 2.0 * k_wpv[i];
                rhs[E][i] = 2.0 * we[i];
            }
            for r in 0..3 {
                let p1 = PSI + r;
                let p2 = PSI + 3 + r;
                let p3 = PSI + 6 + r;
                let v_p2 = prod(V, p2, &c);
                let k_p3 = prod(K, p3, &c);
                let v_p1 = prod(V, p1, &c);
                let l_p3 = prod(L, p3, &c);
                let k_p1 = prod(K, p1, &c);
                let l_p2 = prod(L, p2, &c);
                let e_p1 = prod(E, p1, &c);
                let e_p2 = prod(E, p2, &c);
                for i in 0..n {
                    rhs[p1][i] = 2.0 * v_p2[i] + k_p3[i];
                    rhs[p2][i] = -2.0 * v_p1[i] + l_p3[i];
                    rhs[p3][i] = -k_p1[i] - l_p2[i];
                    rhs[F + r][i] = e_p1[i] + e_p2[i];
                }
            }
            let scale = 1.0 / (j + 1) as f64;
            for (var, r) in rhs.into_iter().enumerate() {
                c[var].push(r.into_iter().map(|x| x * scale).collect());
            }
        }
        Self { xi, c, tail_tol: cfg.tail_tol }
    }

    /// Coefficients of `t^j` at `s = 0` for one state variable.
    fn column(&self, var: usize) -> impl Iterator<Item = f64> + '_ {
        self.c[var].iter().map(|row| row[0])
    }

    /// State at `(xi, eta)`; `BlowUp` when the series has not converged.
    pub fn state(&self, eta: f64) -> Result<CkState> {
        let mut vals = [0.0; NVARS];
        for (var, out) in vals.iter_mut().enumerate() {
            let coeffs: Vec<f64> = self.column(var).collect();
            let mut sum = 0.0;
            let mut pw = 1.0;
            let mut terms = Vec::with_capacity(coeffs.len());
            for &a in &coeffs {
                let t = a * pw;
                terms.push(t.abs());
                sum += t;
                pw *= eta;
            }
            let tail = terms.iter().rev().take(4).fold(0.0f64, |m, &t| m.max(t));
            if !sum.is_finite() || tail > self.tail_tol * (1.0 + sum.abs()) {
                return Err(Error::BlowUp { xi: self.xi, eta });
            }
            *out = sum;
        }
        let psi = Frame3::from_fn(|r, col| vals[PSI + 3 * col + r]);
        Ok(CkState {
            v: vals[V],
            w: vals[W],
            k: vals[K],
            l: vals[L],
            e: vals[E],
            psi,
            f: Point3::new(vals[F], vals[F + 1], vals[F + 2]),
        })
    }
}

/// `(v, w, k, l)` on the `xi` nodes at one `eta` level.
#[derive(Clone, Debug, PartialEq)]
pub struct GCState {
    pub eta: f64,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub k: Vec<f64>,
    pub l: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GcHistory {
    /// Uniform nodes `i * dxi`, always including `xi = 0`.
    pub xi: Vec<f64>,
    pub levels: Vec<GCState>,
}

impl GcHistory {
    pub fn dxi(&self) -> f64 {
        self.xi[1] - self.xi[0]
    }

    pub fn deta(&self) -> f64 {
        self.levels[1].eta - self.levels[0].eta
    }

    pub fn origin_node(&self) -> usize {
        self.xi.iter().position(|&x| x == 0.0).expect("xi = 0 is a node")
    }
}

/// `nodes` uniform `xi` nodes spanning `[-r, r)`, with `xi = 0` among them.
pub fn xi_nodes(r: f64, nodes: usize) -> Vec<f64> {
    let d = 2.0 * r / nodes as f64;
    let first = -((nodes / 2) as i64);
    (0..nodes as i64).map(|i| (first + i) as f64 * d).collect()
}

/// Solves the Gauss–Codazzi Cauchy problem on `0 <= eta <= spec.h` at
/// `nodes` points in `xi` and `steps + 1` levels in `eta`.
pub fn solve_gc_cauchy(
    init: &CauchyData,
    spec: &DomainSpec,
    nodes: usize,
    steps: usize,
    cfg: &CkConfig,
) -> Result<GcHistory> {
    if nodes < 8 || steps < 2 {
        return Err(Error::InvalidInput("need at least 8 nodes and 2 steps".into()));
    }
    let xi = xi_nodes(spec.r, nodes);
    let etas: Vec<f64> = (0..=steps).map(|j| spec.h * j as f64 / steps as f64).collect();
    let columns: Vec<Result<Vec<CkState>>> = xi
        .par_iter()
        .map(|&x| {
            let node = CkNode::new(init, x, cfg);
            etas.iter().map(|&e| node.state(e)).collect()
        })
        .collect();
    // the first failing node in xi order, independent of scheduling
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
    let levels = etas
        .iter()
        .enumerate()
        .map(|(j, &eta)| GCState {
            eta,
            v: columns.iter().map(|c| c[j].v).collect(),
            w: columns.iter().map(|c| c[j].w).collect(),
            k: columns.iter().map(|c| c[j].k).collect(),
            l: columns.iter().map(|c| c[j].l).collect(),
        })
        .collect();
    Ok(GcHistory { xi, levels })
}

/// Initial values for reconstruction at `(xi, eta) = (0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Anchor {
    pub f: Point3,
    pub psi: Frame3,
    pub u: f64,
}

impl Anchor {
    pub fn from_cauchy(cd: &CauchyData) -> Self {
        let j = cd.jet(0.0, 1);
        Self { f: cd.data.curve(0.0), psi: j.frame(), u: j.u.value() }
    }
}

/// Surface samples on the `(xi, eta)` grid of a history.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    /// `f[level][node]`
    pub f: Vec<Vec<Point3>>,
    pub psi: Vec<Vec<Frame3>>,
    pub u: Vec<Vec<f64>>,
    /// Largest orthonormality defect seen before each re-orthonormalization.
    pub frame_drift: f64,
    /// Largest determinant deviation from one before re-orthonormalization.
    pub det_drift: f64,
    /// `max |F|` difference between the xi-first and eta-first integration orders.
    pub path_defect: f64,
}

/// Re-orthonormalization interval in integration steps.
pub const REORTHO_INTERVAL: usize = 16;

#[derive(Clone, Copy)]
struct Moving {
    e: f64,
    psi: Frame3,
    f: Point3,
}

// Sampled (v, w, k, l) along a grid line with 6-point Lagrange interpolation.
struct Line {
    data: Vec<[f64; 4]>,
}

impl Line {
    fn at(&self, pos: f64) -> [f64; 4] {
        let n = self.data.len();
        let near = pos.round();
        if (pos - near).abs() < 1e-12 {
            return self.data[near as usize];
        }
        let start = (pos.floor() as i64 - 2).clamp(0, n as i64 - 6) as usize;
        let mut out = [0.0; 4];
        for a in 0..6 {
            let xa = (start + a) as f64;
            let mut p = 1.0;
            for b in 0..6 {
                if b != a {
                    let xb = (start + b) as f64;
                    p *= (pos - xb) / (xa - xb);
                }
            }
            for (o, d) in out.iter_mut().zip(self.data[start + a]) {
                *o += p * d;
            }
        }
        out
    }
}

// d/d(xi) (sign = -1) or d/d(eta) (sign = +1) of the moving state.
fn rates(s: &Moving, th: [f64; 4], sign: f64) -> Moving {
    let [v, w, k, l] = th;
    // xi: U - V; eta: U + V
    let g = if sign < 0.0 {
        Frame3::new(0.0, 2.0 * w, -k, -2.0 * w, 0.0, l, k, -l, 0.0)
    } else {
        Frame3::new(0.0, -2.0 * v, -k, 2.0 * v, 0.0, -l, k, l, 0.0)
    };
    let de = if sign < 0.0 { 2.0 * v * s.e } else { 2.0 * w * s.e };
    let p1 = s.psi.column(0).into_owned();
    let p2 = s.psi.column(1).into_owned();
    let df = if sign < 0.0 { (p1 - p2) * s.e } else { (p1 + p2) * s.e };
    Moving { e: de, psi: s.psi * g, f: df }
}

fn axpy(s: &Moving, h: f64, d: &Moving) -> Moving {
    Moving { e: s.e + h * d.e, psi: s.psi + d.psi * h, f: s.f + d.f * h }
}

struct Drift {
    frame: f64,
    det: f64,
}

// Integrates along a line from index `from` to every other index, in both directions.
fn integrate_line(
    start: Moving,
    from: usize,
    line: &Line,
    h: f64,
    sign: f64,
    drift: &mut Drift,
) -> Result<Vec<Moving>> {
    let n = line.data.len();
    let mut out = vec![start; n];
    for dir in [1i64, -1] {
        let mut s = start;
        let mut i = from as i64;
        let mut count = 0;
        while (dir > 0 && (i as usize) + 1 < n) || (dir < 0 && i > 0) {
            let step = h * dir as f64;
            let p = i as f64;
            let half = p + 0.5 * dir as f64;
            let k1 = rates(&s, line.at(p), sign);
            let k2 = rates(&axpy(&s, 0.5 * step, &k1), line.at(half), sign);
            let k3 = rates(&axpy(&s, 0.5 * step, &k2), line.at(half), sign);
            let k4 = rates(&axpy(&s, step, &k3), line.at(p + dir as f64), sign);
            s = Moving {
                e: s.e + step / 6.0 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e),
                psi: s.psi + (k1.psi + k2.psi * 2.0 + k3.psi * 2.0 + k4.psi) * (step / 6.0),
                f: s.f + (k1.f + k2.f * 2.0 + k3.f * 2.0 + k4.f) * (step / 6.0),
            };
            i += dir;
            count += 1;
            if count % REORTHO_INTERVAL == 0 {
                let d = orthonormality_defect(&s.psi);
                drift.frame = drift.frame.max(d);
                drift.det = drift.det.max((s.psi.determinant() - 1.0).abs());
                if d > 1e-6 {
                    return Err(Error::FrameDrift { drift: d });
                }
                s.psi = reorthonormalize(&s.psi);
            }
            out[i as usize] = s;
        }
        let d = orthonormality_defect(&s.psi);
        drift.frame = drift.frame.max(d);
        drift.det = drift.det.max((s.psi.determinant() - 1.0).abs());
    }
    Ok(out)
}

/// Integrates `u`, the frame and `F` over the history's grid from `anchor`
/// at `(0, 0)`, xi-direction first; the eta-first order is used as a check.
pub fn reconstruct_surface(history: &GcHistory, anchor: &Anchor) -> Result<Reconstruction> {
    let nx = history.xi.len();
    let ne = history.levels.len();
    if nx < 6 || ne < 6 {
        return Err(Error::InvalidInput("reconstruction needs at least 6 nodes per direction".into()));
    }
    let (hx, he) = (history.dxi(), history.deta());
    let i0 = history.origin_node();
    let start = Moving { e: anchor.u.exp(), psi: anchor.psi, f: anchor.f };
    let mut drift = Drift { frame: 0.0, det: 0.0 };
    let lv = &history.levels;

    let xi_line = |j: usize| Line { data: (0..nx).map(|i| [lv[j].v[i], lv[j].w[i], lv[j].k[i], lv[j].l[i]]).collect() };
    let eta_line =
        |i: usize| Line { data: (0..ne).map(|j| [lv[j].v[i], lv[j].w[i], lv[j].k[i], lv[j].l[i]]).collect() };

    // xi first, then eta
    let base = integrate_line(start, i0, &xi_line(0), hx, -1.0, &mut drift)?;
    let mut grid = vec![vec![start; nx]; ne];
    for i in 0..nx {
        let col = integrate_line(base[i], 0, &eta_line(i), he, 1.0, &mut drift)?;
        for j in 0..ne {
            grid[j][i] = col[j];
        }
    }
    // eta first, then xi
    let spine = integrate_line(start, 0, &eta_line(i0), he, 1.0, &mut drift)?;
    let mut path_defect: f64 = 0.0;
    for j in 0..ne {
        let row = integrate_line(spine[j], i0, &xi_line(j), hx, -1.0, &mut drift)?;
        for i in 0..nx {
            path_defect = path_defect.max((row[i].f - grid[j][i].f).norm());
        }
    }

    Ok(Reconstruction {
        xi: history.xi.clone(),
        eta: lv.iter().map(|s| s.eta).collect(),
        f: grid.iter().map(|r| r.iter().map(|m| m.f).collect()).collect(),
        psi: grid.iter().map(|r| r.iter().map(|m| m.psi).collect()).collect(),
        u: grid.iter().map(|r| r.iter().map(|m| m.e.ln()).collect()).collect(),
        frame_drift: drift.frame,
        det_drift: drift.det,
        path_defect,
    })
}

/// Smooth surface determined by Cauchy data, evaluated pointwise through
/// the power-series solver. Expansions are cached per `xi`.
pub struct CkSurface {
    cd: CauchyData,
    cfg: CkConfig,
    cache: Mutex<HashMap<u64, std::sync::Arc<CkNode>>>,
}

impl CkSurface {
    pub fn new(cd: CauchyData, cfg: CkConfig) -> Self {
        Self { cd, cfg, cache: Mutex::new(HashMap::new()) }
    }

    fn node(&self, xi: f64) -> std::sync::Arc<CkNode> {
        let key = xi.to_bits();
        if let Some(n) = self.cache.lock().expect("cache lock").get(&key) {
            return n.clone();
        }
        let node = std::sync::Arc::new(CkNode::new(&self.cd, xi, &self.cfg));
        self.cache.lock().expect("cache lock").insert(key, node.clone());
        node
    }

    /// Full state at `(x, y)`.
    pub fn state(&self, x: f64, y: f64) -> Result<CkState> {
        self.node(0.5 * (x - y)).state(0.5 * (x + y))
    }

    fn must(&self, x: f64, y: f64) -> CkState {
        match self.state(x, y) {
            Ok(s) => s,
            Err(_) => CkState {
                v: f64::NAN,
                w: f64::NAN,
                k: f64::NAN,
                l: f64::NAN,
                e: f64::NAN,
                psi: Frame3::from_element(f64::NAN),
                f: Point3::from_element(f64::NAN),
            },
        }
    }
}

/// Divergent expansions evaluate to NaN.
impl SmoothSurface for CkSurface {
    fn position(&self, x: f64, y: f64) -> Point3 {
        self.must(x, y).f
    }
    fn fx(&self, x: f64, y: f64) -> Point3 {
        let s = self.must(x, y);
        s.psi.column(0) * s.e
    }
    fn fy(&self, x: f64, y: f64) -> Point3 {
        let s = self.must(x, y);
        s.psi.column(1) * s.e
    }
    fn normal(&self, x: f64, y: f64) -> Point3 {
        self.must(x, y).psi.column(2).into_owned()
    }
    fn u(&self, x: f64, y: f64) -> f64 {
        self.must(x, y).e.ln()
    }
    fn v(&self, x: f64, y: f64) -> f64 {
        self.must(x, y).v
    }
    fn w(&self, x: f64, y: f64) -> f64 {
        self.must(x, y).w
    }
    fn k(&self, x: f64, y: f64) -> f64 {
        self.must(x, y).k
    }
    fn l(&self, x: f64, y: f64) -> f64 {
        self.must(x, y).l
    }
}
