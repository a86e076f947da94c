//! Text exports: OBJ meshes and CSV tables.
//!
//! Floats are written in Rust's shortest round-trip form, so output is
//! byte-identical for identical values.

use std::fmt::Write as _;

use crate::lattice::{elementary_square, DiscreteSurface, StaggeredField};
use crate::quantities::DiscreteQuantities;
use crate::smooth::GcHistory;
use crate::transforms::SampledSurface;

/// OBJ with one `v` record per vertex (row-major) and one `f` record per
/// complete elementary square.
pub fn surface_obj(surface: &DiscreteSurface) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# eps {}", surface.eps);
    let mut numbering: StaggeredField<usize> = StaggeredField::new(*surface.spec(), crate::SlotKind::Vertex);
    for (k, (i, p)) in surface.positions.iter().enumerate() {
        let _ = writeln!(out, "v {} {} {}", p.x, p.y, p.z);
        numbering.insert(i, k + 1).expect("vertex index");
    }
    for c in surface.complete_quads() {
        let idx = elementary_square(c).expect("center parity");
        let n = idx.map(|i| *numbering.get(i).expect("complete quad"));
        let _ = writeln!(out, "f {} {} {} {}", n[0], n[1], n[2], n[3]);
    }
    out
}

/// OBJ point grid with quad faces between neighbouring samples.
pub fn sampled_obj(s: &SampledSurface) -> String {
    let mut out = String::new();
    for p in &s.f {
        let _ = writeln!(out, "v {} {} {}", p.x, p.y, p.z);
    }
    let (nx, ny) = s.counts();
    let w = 2 * nx + 1;
    for j in 0..2 * ny {
        for i in 0..2 * nx {
            let a = j * w + i + 1;
            let _ = writeln!(out, "f {} {} {} {}", a, a + 1, a + 1 + w, a + w);
        }
    }
    out
}

/// Long-format table `quantity,m,n,x,y,value` of the scalar quantities.
pub fn quantities_csv(q: &DiscreteQuantities) -> String {
    let mut out = String::from("quantity,m,n,x,y,value\n");
    let fields: [(&str, &StaggeredField<f64>); 8] = [
        ("u_hat", &q.u_hat),
        ("u_check", &q.u_check),
        ("v", &q.v),
        ("w", &q.w),
        ("v_tilde", &q.v_tilde),
        ("w_tilde", &q.w_tilde),
        ("k", &q.k),
        ("l", &q.l),
    ];
    for (name, f) in fields {
        for (i, v) in f.iter() {
            let _ = writeln!(out, "{name},{},{},{},{},{v}", i.m, i.n, i.x(q.eps), i.y(q.eps));
        }
    }
    out
}

/// Table `eta,xi,v,w,k,l` of a Gauss–Codazzi history.
pub fn gc_history_csv(h: &GcHistory) -> String {
    let mut out = String::from("eta,xi,v,w,k,l\n");
    for s in &h.levels {
        for (i, xi) in h.xi.iter().enumerate() {
            let _ = writeln!(out, "{},{xi},{},{},{},{}", s.eta, s.v[i], s.w[i], s.k[i], s.l[i]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{DomainSpec, LatticeIndex};
    use crate::Point3;

    #[test]
    fn single_quad_obj() {
        let mut s = DiscreteSurface::new(DomainSpec::new(1.0, 0.5, 0.4).unwrap());
        for (k, (m, n)) in [(0, 0), (2, 0), (2, 2), (0, 2)].into_iter().enumerate() {
            s.positions.insert(LatticeIndex::new(m, n), Point3::new(k as f64, 0.5, 0.0)).unwrap();
        }
        let obj = surface_obj(&s);
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 4);
        let faces: Vec<&str> = obj.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(faces.len(), 1);
        // row-major numbering: (0,0)=1, (2,0)=2, (0,2)=3, (2,2)=4
        assert_eq!(faces[0], "f 1 2 4 3");
        assert!(obj.contains("v 1 0.5 0\n"));
    }
}
