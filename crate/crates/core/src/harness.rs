//! Convergence experiments: grow at several lattice constants, measure
//! sup-norm errors against a smooth reference and fit the order.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::bjorling::{derive_cauchy_data, sample_initial_strip, BjorlingData, CauchyData, InitialStrip};
use crate::error::{Error, Result};
use crate::growth::grow;
use crate::lattice::{DiscreteSurface, DomainSpec, LatticeIndex, SlotKind, StaggeredField};
use crate::quantities::extract;
use crate::smooth::SmoothSurface;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub eps_list: Vec<f64>,
    /// `sup |F^eps - F|` over vertices.
    pub e_f: Vec<f64>,
    /// `sup |delta_x F^eps - F_x|` over x-edges.
    pub e_fx: Vec<f64>,
    /// `sup |delta_y F^eps - F_y|` over y-edges.
    pub e_fy: Vec<f64>,
    pub achieved_h: Vec<f64>,
    /// Height of the common domain all errors are measured on.
    pub h_common: f64,
    /// Fitted orders for `e_f`, `e_fx`, `e_fy`; NaN with fewer than two points.
    pub order: [f64; 3],
}

impl ConvergenceReport {
    pub fn empty() -> Self {
        Self {
            eps_list: Vec::new(),
            e_f: Vec::new(),
            e_fx: Vec::new(),
            e_fy: Vec::new(),
            achieved_h: Vec::new(),
            h_common: f64::NAN,
            order: [f64::NAN; 3],
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,e_F,e_Fx,e_Fy,achieved_h\n");
        for i in 0..self.eps_list.len() {
            let _ = writeln!(
                out,
                "{},{:.10e},{:.10e},{:.10e},{}",
                self.eps_list[i], self.e_f[i], self.e_fx[i], self.e_fy[i], self.achieved_h[i]
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "convergence report");
        let _ = writeln!(out, "runs: {}", self.eps_list.len());
        let _ = writeln!(out, "h_common: {}", self.h_common);
        for (name, o) in ["e_F", "e_Fx", "e_Fy"].iter().zip(self.order) {
            let _ = writeln!(out, "order {name}: {o:.4}");
        }
        out
    }
}

/// Least-squares slope of `log e` against `log eps`.
pub fn fitted_order(eps: &[f64], err: &[f64]) -> f64 {
    if eps.len() < 2 {
        return f64::NAN;
    }
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Sup-norm errors `(e_F, e_Fx, e_Fy)` of a surface against a reference on
/// the vertices and edges of `region`.
pub fn surface_errors(surface: &DiscreteSurface, reference: &dyn SmoothSurface, region: &DomainSpec) -> [f64; 3] {
    let eps = surface.eps;
    let mut e = [0.0f64; 3];
    for (i, p) in surface.positions.iter() {
        if region.contains(i) {
            e[0] = e[0].max((p - reference.position(i.x(eps), i.y(eps))).norm());
        }
    }
    let edge = |kind: SlotKind, lo: LatticeIndex, hi: LatticeIndex| {
        if !(region.contains(lo) && region.contains(hi)) {
            return None;
        }
        let d = (surface.get(hi)? - surface.get(lo)?) / eps;
        let mid = LatticeIndex::new((lo.m + hi.m) / 2, (lo.n + hi.n) / 2);
        let (x, y) = (mid.x(eps), mid.y(eps));
        let want = if kind == SlotKind::XEdge { reference.fx(x, y) } else { reference.fy(x, y) };
        Some((d - want).norm())
    };
    for i in surface.spec().indices(SlotKind::XEdge) {
        if let Some(d) = edge(SlotKind::XEdge, i.offset(-1, 0), i.offset(1, 0)) {
            e[1] = e[1].max(d);
        }
    }
    for i in surface.spec().indices(SlotKind::YEdge) {
        if let Some(d) = edge(SlotKind::YEdge, i.offset(0, -1), i.offset(0, 1)) {
            e[2] = e[2].max(d);
        }
    }
    e
}

/// How closely a sampled strip follows its Cauchy data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripFidelity {
    /// Largest relative deviation of `v`, `w̃`, `k`, `l` on the strip from
    /// `v0`, `w0`, `k0`, `l0` at the same `xi`.
    pub quantities: f64,
    /// `sup |f^eps - f(xi)|` over strip vertices.
    pub e_f: f64,
    /// `sup |delta_x f^eps - e^u0 Psi0_1|` over strip x-edges.
    pub e_fx: f64,
    /// `sup |delta_y f^eps - e^u0 Psi0_2|` over strip y-edges.
    pub e_fy: f64,
}

pub fn strip_fidelity(cd: &CauchyData, strip: &InitialStrip) -> Result<StripFidelity> {
    let eps = strip.eps;
    let s = &strip.surface;
    let q = extract(s)?;
    let dev = |field: &StaggeredField<f64>, want: &dyn Fn(f64) -> f64| {
        field
            .iter()
            .map(|(i, v)| {
                let w = want(i.xi(eps));
                (v - w).abs() / (1.0 + w.abs())
            })
            .fold(0.0, f64::max)
    };
    let quantities = dev(&q.v, &|x| cd.v0(x))
        .max(dev(&q.w_tilde, &|x| cd.w0(x)))
        .max(dev(&q.k, &|x| cd.k0(x)))
        .max(dev(&q.l, &|x| cd.l0(x)));
    let e_f = s.positions.iter().map(|(i, p)| (p - cd.data.curve(i.xi(eps))).norm()).fold(0.0, f64::max);
    let mut e = [0.0f64; 2];
    for (col, kind) in [SlotKind::XEdge, SlotKind::YEdge].into_iter().enumerate() {
        for i in s.spec().indices(kind) {
            let (lo, hi) = if col == 0 { (i.offset(-1, 0), i.offset(1, 0)) } else { (i.offset(0, -1), i.offset(0, 1)) };
            if let (Some(a), Some(b)) = (s.get(lo), s.get(hi)) {
                let xi = i.xi(eps);
                let want = cd.psi0(xi).column(col) * cd.u0(xi).exp();
                e[col] = e[col].max(((b - a) / eps - want).norm());
            }
        }
    }
    Ok(StripFidelity { quantities, e_f, e_fx: e[0], e_fy: e[1] })
}

/// Grows `data` at every lattice constant in `eps_list` (strictly
/// decreasing) and measures errors on the largest domain all runs reached.
pub fn run_convergence(
    data: &BjorlingData,
    reference: &dyn SmoothSurface,
    eps_list: &[f64],
    target_h: f64,
) -> Result<ConvergenceReport> {
    if eps_list.is_empty() {
        return Ok(ConvergenceReport::empty());
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("eps list must be strictly decreasing".into()));
    }
    let cd = derive_cauchy_data(data)?;
    let grown = eps_list
        .par_iter()
        .map(|&eps| {
            DomainSpec::new(data.r, target_h, eps)?;
            let strip = sample_initial_strip(&cd, eps)?;
            Ok(grow(&strip, target_h))
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let achieved_h: Vec<f64> = grown.iter().map(|g| g.achieved_h()).collect();
    let h_common = achieved_h.iter().copied().fold(f64::INFINITY, f64::min).min(target_h);
    if h_common <= eps_list[0] / 2.0 + 1e-12 {
        return Err(Error::EmptyOverlap);
    }
    let errors: Vec<[f64; 3]> = grown
        .par_iter()
        .zip(eps_list)
        .map(|(g, &eps)| surface_errors(&g.surface, reference, &DomainSpec::unchecked(data.r, h_common, eps)))
        .collect();
    let channel = |c: usize| errors.iter().map(|e| e[c]).collect::<Vec<f64>>();
    let (e_f, e_fx, e_fy) = (channel(0), channel(1), channel(2));
    let order = [fitted_order(eps_list, &e_f), fitted_order(eps_list, &e_fx), fitted_order(eps_list, &e_fy)];
    Ok(ConvergenceReport { eps_list: eps_list.to_vec(), e_f, e_fx, e_fy, achieved_h, h_common, order })
}

/// Writes the CSV to `path` and the summary next to it with extension `txt`.
pub fn emit_report(report: &ConvergenceReport, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, report.to_csv())?;
    std::fs::write(path.with_extension("txt"), report.summary())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_exact_power_law() {
        let eps = [0.1, 0.05, 0.025];
        let err: Vec<f64> = eps.iter().map(|e: &f64| 3.0 * e.powf(1.5)).collect();
        assert!((fitted_order(&eps, &err) - 1.5).abs() < 1e-12);
        assert!(fitted_order(&[0.1], &[1.0]).is_nan());
    }

    #[test]
    fn cylinder_strip_follows_its_data() {
        let cd = derive_cauchy_data(&BjorlingData::cylinder(1.0).unwrap()).unwrap();
        let strip = sample_initial_strip(&cd, 0.1).unwrap();
        let f = strip_fidelity(&cd, &strip).unwrap();
        assert!(f.quantities < 1e-12, "{f:?}");
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(ConvergenceReport::empty().to_csv(), "eps,e_F,e_Fx,e_Fy,achieved_h\n");
    }
}
