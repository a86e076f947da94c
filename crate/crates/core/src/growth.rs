//! Growing a discrete isothermic surface from the strip by completing
//! conformal squares row by row.

use rayon::prelude::*;

use crate::bjorling::InitialStrip;
use crate::geometry::{complete_with_cross_ratio, is_collinear, Point3};
use crate::lattice::{elementary_square, DiscreteSurface, DomainSpec, LatticeIndex, SlotKind};
use num_complex::Complex64;

/// Completions with a larger condition number stop growth.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FailureKind {
    /// The three known corners are collinear.
    Collinear,
    /// The complex solve is too badly conditioned.
    IllConditioned { condition: f64 },
    /// The triple `(T_xi^-1, T_eta^-1, T_xi)` of a center is collinear.
    CollinearLower,
    /// The triple `(T_xi^-1, T_eta, T_xi)` of a center is collinear.
    CollinearUpper,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Degeneracy {
    pub sweep: Sweep,
    /// Vertex that could not be placed.
    pub index: LatticeIndex,
    pub kind: FailureKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthResult {
    pub surface: DiscreteSurface,
    /// Largest `h` with every row of `0 <= eta <= h` populated.
    pub h_up: f64,
    /// Largest `h` with every row of `-h < eta <= 0` populated.
    pub h_down: f64,
    pub degeneracies: Vec<Degeneracy>,
}

impl GrowthResult {
    /// Height of the largest two-sided domain the surface covers.
    pub fn achieved_h(&self) -> f64 {
        self.h_up.min(self.h_down)
    }
}

fn complete(surface: &DiscreteSurface, target: LatticeIndex, sweep: Sweep) -> Option<Result<Point3, FailureKind>> {
    // target is p3 of the center below it (up) or p1 of the center above it (down)
    let (center, slot) = match sweep {
        Sweep::Up => (target.offset(-1, -1), 3),
        Sweep::Down => (target.offset(1, 1), 1),
    };
    let idx = elementary_square(center).ok()?;
    let mut known = [Point3::zeros(); 3];
    let mut k = 0;
    for (s, i) in idx.iter().enumerate() {
        if s + 1 != slot {
            known[k] = *surface.get(*i)?;
            k += 1;
        }
    }
    if is_collinear(&known[0], &known[1], &known[2]) {
        return Some(Err(FailureKind::Collinear));
    }
    Some(match complete_with_cross_ratio(&known, slot, Complex64::new(-1.0, 0.0)) {
        Ok(c) if c.condition <= MAX_CONDITION => Ok(c.point),
        Ok(c) => Err(FailureKind::IllConditioned { condition: c.condition }),
        Err(_) => Err(FailureKind::Collinear),
    })
}

/// Grows the strip to `-target_h < eta <= target_h`, stopping a sweep at
/// its first degenerate row. That row is discarded.
pub fn grow(strip: &InitialStrip, target_h: f64) -> GrowthResult {
    let eps = strip.eps;
    let base = strip.surface.spec();
    let h = target_h.max(eps / 2.0);
    let spec = DomainSpec::unchecked(base.r, h, eps);
    let mut surface = DiscreteSurface::new(spec);
    for (i, p) in strip.surface.positions.iter() {
        if spec.contains(i) {
            surface.positions.insert(i, *p).expect("strip index inside the grown domain");
        }
    }
    let (sum_lo, sum_hi) = spec.sum_range();
    let row_hi = sum_hi.div_euclid(2);
    let row_lo = (sum_lo + 1).div_euclid(2);
    let mut degeneracies = Vec::new();

    let mut top = 1;
    for row in 2..=row_hi {
        match grow_row(&mut surface, row, Sweep::Up) {
            Ok(()) => top = row,
            Err(d) => {
                degeneracies.push(d);
                break;
            }
        }
    }
    let mut bottom = 0;
    for row in (row_lo..=-1).rev() {
        match grow_row(&mut surface, row, Sweep::Down) {
            Ok(()) => bottom = row,
            Err(d) => {
                degeneracies.push(d);
                break;
            }
        }
    }
    GrowthResult { surface, h_up: top as f64 * eps / 2.0, h_down: (1 - bottom) as f64 * eps / 2.0, degeneracies }
}

fn row_indices(spec: &DomainSpec, row: i64) -> Vec<LatticeIndex> {
    let m_max = spec.max_abs();
    (-m_max..=m_max)
        .filter(|m| m.rem_euclid(2) == 0)
        .map(|m| LatticeIndex::new(m, 2 * row - m))
        .filter(|&i| spec.contains(i))
        .collect()
}

fn grow_row(surface: &mut DiscreteSurface, row: i64, sweep: Sweep) -> Result<(), Degeneracy> {
    let targets = row_indices(surface.spec(), row);
    let snapshot: &DiscreteSurface = surface;
    let results: Vec<(LatticeIndex, Option<Result<Point3, FailureKind>>)> =
        targets.par_iter().map(|&t| (t, complete(snapshot, t, sweep))).collect();
    let mut placed = Vec::with_capacity(results.len());
    for (index, r) in results {
        match r {
            Some(Ok(p)) => placed.push((index, p)),
            Some(Err(kind)) => return Err(Degeneracy { sweep, index, kind }),
            None => {}
        }
    }
    if placed.is_empty() {
        return Err(Degeneracy {
            sweep,
            index: targets.first().copied().unwrap_or(LatticeIndex::new(0, 0)),
            kind: FailureKind::Collinear,
        });
    }
    for (i, p) in placed {
        surface.positions.insert(i, p).expect("row index inside the domain");
    }
    Ok(())
}

/// Every center whose lower or upper triple is collinear.
pub fn degeneracy_scan(surface: &DiscreteSurface) -> Vec<(LatticeIndex, FailureKind)> {
    let mut out = Vec::new();
    for c in surface.spec().indices(SlotKind::Center) {
        let p = surface.partial_quad(c);
        if let (Some(p1), Some(p2), Some(p4)) = (p[0], p[1], p[3]) {
            if is_collinear(&p4, &p1, &p2) {
                out.push((c, FailureKind::CollinearLower));
            }
        }
        if let (Some(p2), Some(p3), Some(p4)) = (p[1], p[2], p[3]) {
            if is_collinear(&p4, &p3, &p2) {
                out.push((c, FailureKind::CollinearUpper));
            }
        }
    }
    out
}
