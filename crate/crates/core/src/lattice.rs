//! Staggered half-step lattice.
//!
//! An index `(m, n)` sits at `x = m eps/2`, `y = n eps/2`, so
//! `xi = (m - n) eps/4` and `eta = (m + n) eps/4`. The parities of `m` and
//! `n` decide the slot kind: vertices have both even, x-edges have `m` odd,
//! y-edges have `n` odd and quad centers have both odd.

use std::fmt;
use std::ops::{Mul, Sub};

use crate::error::{Error, Result};
use crate::geometry::Point3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeIndex {
    pub m: i64,
    pub n: i64,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    X,
    Y,
    Xi,
    Eta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotKind {
    Vertex,
    XEdge,
    YEdge,
    Center,
}

impl SlotKind {
    pub fn name(self) -> &'static str {
        match self {
            SlotKind::Vertex => "vertex",
            SlotKind::XEdge => "x_edge",
            SlotKind::YEdge => "y_edge",
            SlotKind::Center => "center",
        }
    }

    /// Parities `(m mod 2, n mod 2)` of this kind.
    fn parity(self) -> (i64, i64) {
        match self {
            SlotKind::Vertex => (0, 0),
            SlotKind::XEdge => (1, 0),
            SlotKind::YEdge => (0, 1),
            SlotKind::Center => (1, 1),
        }
    }
}

impl LatticeIndex {
    pub const fn new(m: i64, n: i64) -> Self {
        Self { m, n }
    }

    pub fn kind(self) -> SlotKind {
        match (self.m.rem_euclid(2), self.n.rem_euclid(2)) {
            (0, 0) => SlotKind::Vertex,
            (1, 0) => SlotKind::XEdge,
            (0, _) => SlotKind::YEdge,
            _ => SlotKind::Center,
        }
    }

    pub fn shift(self, dir: Dir, sign: i64) -> Self {
        let (dm, dn) = match dir {
            Dir::X => (1, 0),
            Dir::Y => (0, 1),
            Dir::Xi => (1, -1),
            Dir::Eta => (1, 1),
        };
        Self { m: self.m + sign * dm, n: self.n + sign * dn }
    }

    pub fn offset(self, dm: i64, dn: i64) -> Self {
        Self { m: self.m + dm, n: self.n + dn }
    }

    pub fn x(self, eps: f64) -> f64 {
        self.m as f64 * eps / 2.0
    }

    pub fn y(self, eps: f64) -> f64 {
        self.n as f64 * eps / 2.0
    }

    pub fn xi(self, eps: f64) -> f64 {
        (self.m - self.n) as f64 * eps / 4.0
    }

    pub fn eta(self, eps: f64) -> f64 {
        (self.m + self.n) as f64 * eps / 4.0
    }

    /// Index from `(xi, eta)` in units of `eps/4`; `a + b` must be even.
    pub fn from_xi_eta_units(a: i64, b: i64) -> Self {
        debug_assert!((a + b) % 2 == 0, "xi and eta units must share parity");
        Self { m: (a + b) / 2, n: (b - a) / 2 }
    }

    /// `(xi, eta)` in units of `eps/4`.
    pub fn xi_eta_units(self) -> (i64, i64) {
        (self.m - self.n, self.m + self.n)
    }
}

pub fn shift(idx: LatticeIndex, dir: Dir, sign: i64) -> LatticeIndex {
    idx.shift(dir, sign)
}

/// The four vertices `(T_eta^-1, T_xi, T_eta, T_xi^-1)` of a quad center.
pub fn elementary_square(center: LatticeIndex) -> Result<[LatticeIndex; 4]> {
    if center.kind() != SlotKind::Center {
        return Err(Error::WrongParity(center));
    }
    Ok([center.shift(Dir::Eta, -1), center.shift(Dir::Xi, 1), center.shift(Dir::Eta, 1), center.shift(Dir::Xi, -1)])
}

// floor, treating values within 1e-9 of an integer as that integer
fn fuzzy_floor(t: f64) -> i64 {
    let r = t.round();
    if (t - r).abs() < 1e-9 {
        r as i64
    } else {
        t.floor() as i64
    }
}

/// `Omega(r, h)` sampled with step `eps`: `max(|x|,|y|) <= r`, `-h < eta <= h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DomainSpec {
    pub r: f64,
    pub h: f64,
    pub eps: f64,
    max_abs: i64,
    sum_lo: i64,
    sum_hi: i64,
}

impl DomainSpec {
    pub fn new(r: f64, h: f64, eps: f64) -> Result<Self> {
        if !(r.is_finite() && h.is_finite() && eps.is_finite()) {
            return Err(Error::InvalidDomain("parameters must be finite".into()));
        }
        if r <= 0.0 {
            return Err(Error::InvalidDomain(format!("r = {r} must be positive")));
        }
        if h <= 0.0 || h > r {
            return Err(Error::InvalidDomain(format!("h = {h} must lie in (0, r = {r}]")));
        }
        if eps <= 0.0 || eps >= h {
            return Err(Error::InvalidDomain(format!("eps = {eps} must lie in (0, h = {h})")));
        }
        Ok(Self::unchecked(r, h, eps))
    }

    /// Domain without the `eps < h` requirement, e.g. the two-row strip `h = eps/2`.
    pub fn unchecked(r: f64, h: f64, eps: f64) -> Self {
        let max_abs = fuzzy_floor(2.0 * r / eps);
        let s = 4.0 * h / eps;
        let sum_hi = fuzzy_floor(s);
        let sum_lo = if (s - s.round()).abs() < 1e-9 { -(s.round() as i64) + 1 } else { (-s).floor() as i64 + 1 };
        Self { r, h, eps, max_abs, sum_lo, sum_hi }
    }

    /// The initial strip `Omega(r, eps/2)`.
    pub fn strip(r: f64, eps: f64) -> Self {
        Self::unchecked(r, eps / 2.0, eps)
    }

    /// Same lattice, different height.
    pub fn with_h(&self, h: f64) -> Self {
        Self::unchecked(self.r, h, self.eps)
    }

    pub fn contains(&self, i: LatticeIndex) -> bool {
        let s = i.m + i.n;
        i.m.abs() <= self.max_abs && i.n.abs() <= self.max_abs && s >= self.sum_lo && s <= self.sum_hi
    }

    /// Largest `|m|`, `|n|` allowed.
    pub fn max_abs(&self) -> i64 {
        self.max_abs
    }

    /// Inclusive range of `m + n`.
    pub fn sum_range(&self) -> (i64, i64) {
        (self.sum_lo, self.sum_hi)
    }

    /// All indices of a slot kind inside the domain, row-major in `(n, m)`.
    pub fn indices(&self, kind: SlotKind) -> Vec<LatticeIndex> {
        let (pm, pn) = kind.parity();
        let mut out = Vec::new();
        let lo = -self.max_abs;
        for n in lo..=self.max_abs {
            if n.rem_euclid(2) != pn {
                continue;
            }
            for m in lo..=self.max_abs {
                let i = LatticeIndex::new(m, n);
                if m.rem_euclid(2) == pm && self.contains(i) {
                    out.push(i);
                }
            }
        }
        out
    }
}

/// Values on one slot kind, stored densely over the domain's bounding box.
#[derive(Clone, Debug, PartialEq)]
pub struct StaggeredField<T> {
    pub spec: DomainSpec,
    pub kind: SlotKind,
    base_m: i64,
    base_n: i64,
    width: usize,
    height: usize,
    values: Vec<Option<T>>,
}

impl<T> StaggeredField<T> {
    pub fn new(spec: DomainSpec, kind: SlotKind) -> Self {
        let (pm, pn) = kind.parity();
        let lo = -spec.max_abs;
        // first index of the right parity at or above lo
        let base_m = lo + (pm - lo).rem_euclid(2);
        let base_n = lo + (pn - lo).rem_euclid(2);
        let width = ((spec.max_abs - base_m).div_euclid(2) + 1).max(0) as usize;
        let height = ((spec.max_abs - base_n).div_euclid(2) + 1).max(0) as usize;
        let mut values = Vec::with_capacity(width * height);
        values.resize_with(width * height, || None);
        Self { spec, kind, base_m, base_n, width, height, values }
    }

    fn slot(&self, i: LatticeIndex) -> Option<usize> {
        if i.kind() != self.kind {
            return None;
        }
        let a = (i.m - self.base_m).div_euclid(2);
        let b = (i.n - self.base_n).div_euclid(2);
        if a < 0 || b < 0 || a as usize >= self.width || b as usize >= self.height {
            return None;
        }
        Some(b as usize * self.width + a as usize)
    }

    fn index_of(&self, slot: usize) -> LatticeIndex {
        let a = (slot % self.width) as i64;
        let b = (slot / self.width) as i64;
        LatticeIndex::new(self.base_m + 2 * a, self.base_n + 2 * b)
    }

    pub fn get(&self, i: LatticeIndex) -> Option<&T> {
        self.slot(i).and_then(|s| self.values[s].as_ref())
    }

    pub fn contains(&self, i: LatticeIndex) -> bool {
        self.get(i).is_some()
    }

    /// Field value, or `OutOfDomain` when absent.
    pub fn at(&self, i: LatticeIndex) -> Result<&T> {
        self.get(i).ok_or(Error::OutOfDomain(i))
    }

    pub fn insert(&mut self, i: LatticeIndex, value: T) -> Result<()> {
        if i.kind() != self.kind {
            return Err(Error::WrongParity(i));
        }
        if !self.spec.contains(i) {
            return Err(Error::OutOfDomain(i));
        }
        let s = self.slot(i).ok_or(Error::OutOfDomain(i))?;
        self.values[s] = Some(value);
        Ok(())
    }

    pub fn remove(&mut self, i: LatticeIndex) -> Option<T> {
        self.slot(i).and_then(|s| self.values[s].take())
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|v| v.is_none())
    }

    /// Populated entries, row-major in `(n, m)`.
    pub fn iter(&self) -> impl Iterator<Item = (LatticeIndex, &T)> + '_ {
        self.values.iter().enumerate().filter_map(move |(s, v)| v.as_ref().map(|v| (self.index_of(s), v)))
    }

    pub fn keys(&self) -> Vec<LatticeIndex> {
        self.iter().map(|(i, _)| i).collect()
    }

    pub fn map<U>(&self, mut f: impl FnMut(LatticeIndex, &T) -> U) -> StaggeredField<U> {
        let mut out = StaggeredField::new(self.spec, self.kind);
        for (s, v) in self.values.iter().enumerate() {
            if let Some(v) = v {
                out.values[s] = Some(f(self.index_of(s), v));
            }
        }
        out
    }

    /// Re-home the values on a domain with the same lattice, dropping
    /// entries outside it.
    pub fn restrict(&self, spec: DomainSpec) -> Self
    where
        T: Clone,
    {
        let mut out = StaggeredField::new(spec, self.kind);
        for (i, v) in self.iter() {
            if spec.contains(i) {
                let _ = out.insert(i, v.clone());
            }
        }
        out
    }
}

/// Central difference quotient `(T f - T^-1 f) / eps` at `at`.
pub fn diff<T>(field: &StaggeredField<T>, dir: Dir, at: LatticeIndex) -> Result<T>
where
    T: Copy + Sub<Output = T> + Mul<f64, Output = T>,
{
    let plus = at.shift(dir, 1);
    let minus = at.shift(dir, -1);
    let fp = *field.at(plus)?;
    let fm = *field.at(minus)?;
    Ok((fp - fm) * (1.0 / field.spec.eps))
}

/// Difference quotient on every slot where both neighbours exist.
pub fn diff_field<T>(field: &StaggeredField<T>, dir: Dir) -> StaggeredField<T>
where
    T: Copy + Sub<Output = T> + Mul<f64, Output = T>,
{
    let (pm, pn) = field.kind.parity();
    let target_kind = LatticeIndex::new(pm, pn).shift(dir, 1).kind();
    let mut out = StaggeredField::new(field.spec, target_kind);
    for i in field.spec.indices(target_kind) {
        if let Ok(d) = diff(field, dir, i) {
            let slot = out.slot(i).expect("index from own domain");
            out.values[slot] = Some(d);
        }
    }
    out
}

/// An ε-discrete surface: positions on vertex slots.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteSurface {
    pub eps: f64,
    pub positions: StaggeredField<Point3>,
}

impl DiscreteSurface {
    pub fn new(spec: DomainSpec) -> Self {
        Self { eps: spec.eps, positions: StaggeredField::new(spec, SlotKind::Vertex) }
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.positions.spec
    }

    pub fn get(&self, i: LatticeIndex) -> Option<&Point3> {
        self.positions.get(i)
    }

    /// The four corners of a quad center, when all are present.
    pub fn quad(&self, center: LatticeIndex) -> Option<[Point3; 4]> {
        let idx = elementary_square(center).ok()?;
        Some([*self.get(idx[0])?, *self.get(idx[1])?, *self.get(idx[2])?, *self.get(idx[3])?])
    }

    /// Corners of a quad center, each optional.
    pub fn partial_quad(&self, center: LatticeIndex) -> [Option<Point3>; 4] {
        match elementary_square(center) {
            Ok(idx) => idx.map(|i| self.get(i).copied()),
            Err(_) => [None; 4],
        }
    }

    /// Centers whose four corners are all present, row-major.
    pub fn complete_quads(&self) -> Vec<LatticeIndex> {
        self.spec().indices(SlotKind::Center).into_iter().filter(|&c| self.quad(c).is_some()).collect()
    }

    /// Range of occupied vertex rows `(m + n) / 2`.
    pub fn row_range(&self) -> Option<(i64, i64)> {
        let mut it = self.positions.iter().map(|(i, _)| (i.m + i.n) / 2);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), r| (lo.min(r), hi.max(r))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_examples() {
        let o = LatticeIndex::new(0, 0);
        assert_eq!(o.shift(Dir::X, 1), LatticeIndex::new(1, 0));
        let e = o.shift(Dir::Eta, 1);
        assert_eq!(e, LatticeIndex::new(1, 1));
        assert_eq!(e.xi(0.2), 0.0);
        assert!((e.eta(0.2) - 0.1).abs() < 1e-16);
        for m in -3..3 {
            for n in -3..3 {
                let i = LatticeIndex::new(m, n);
                for d in [Dir::X, Dir::Y, Dir::Xi, Dir::Eta] {
                    assert_eq!(i.shift(d, 1).shift(d, -1), i);
                }
            }
        }
    }

    #[test]
    fn xi_eta_round_trip() {
        for m in -5..5 {
            for n in -5..5 {
                let i = LatticeIndex::new(m, n);
                let (a, b) = i.xi_eta_units();
                assert_eq!(LatticeIndex::from_xi_eta_units(a, b), i);
            }
        }
    }

    #[test]
    fn square_of_center() {
        let sq = elementary_square(LatticeIndex::new(1, 1)).unwrap();
        assert_eq!(
            sq,
            [LatticeIndex::new(0, 0), LatticeIndex::new(2, 0), LatticeIndex::new(2, 2), LatticeIndex::new(0, 2)]
        );
        assert!(sq.iter().all(|i| i.kind() == SlotKind::Vertex));
        assert_eq!(elementary_square(LatticeIndex::new(2, 0)), Err(Error::WrongParity(LatticeIndex::new(2, 0))));
        assert_eq!(elementary_square(LatticeIndex::new(1, 2)), Err(Error::WrongParity(LatticeIndex::new(1, 2))));
    }

    #[test]
    fn slot_kinds() {
        assert_eq!(LatticeIndex::new(0, 0).kind(), SlotKind::Vertex);
        assert_eq!(LatticeIndex::new(-1, 2).kind(), SlotKind::XEdge);
        assert_eq!(LatticeIndex::new(2, -3).kind(), SlotKind::YEdge);
        assert_eq!(LatticeIndex::new(-1, -1).kind(), SlotKind::Center);
    }

    #[test]
    fn domain_thresholds_are_exact() {
        // 4h/eps = 12 exactly in real arithmetic, but 0.3/0.1 is not exact in floats.
        let d = DomainSpec::new(1.0, 0.3, 0.1).unwrap();
        assert_eq!(d.sum_range(), (-11, 12));
        assert_eq!(d.max_abs(), 20);
        let s = DomainSpec::strip(1.0, 0.1);
        assert_eq!(s.sum_range(), (-1, 2));
        assert!(s.contains(LatticeIndex::new(0, 0)));
        assert!(s.contains(LatticeIndex::new(2, 0)));
        assert!(!s.contains(LatticeIndex::new(2, 2)));
        assert!(!s.contains(LatticeIndex::new(-2, 0)));
        assert!(!s.contains(LatticeIndex::new(-2, -2)));
    }

    #[test]
    fn domain_validation() {
        assert!(DomainSpec::new(1.0, 0.3, 0.3).is_err());
        assert!(DomainSpec::new(1.0, 1.5, 0.1).is_err());
        assert!(DomainSpec::new(-1.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn field_storage_and_parity() {
        let d = DomainSpec::new(1.0, 0.5, 0.1).unwrap();
        let mut f: StaggeredField<f64> = StaggeredField::new(d, SlotKind::XEdge);
        assert_eq!(f.insert(LatticeIndex::new(0, 0), 1.0), Err(Error::WrongParity(LatticeIndex::new(0, 0))));
        assert_eq!(f.insert(LatticeIndex::new(41, 0), 1.0), Err(Error::OutOfDomain(LatticeIndex::new(41, 0))));
        f.insert(LatticeIndex::new(-19, 4), 2.5).unwrap();
        f.insert(LatticeIndex::new(3, -2), 1.5).unwrap();
        assert_eq!(f.get(LatticeIndex::new(-19, 4)), Some(&2.5));
        assert_eq!(f.len(), 2);
        let keys = f.keys();
        assert_eq!(keys, vec![LatticeIndex::new(3, -2), LatticeIndex::new(-19, 4)]);
    }

    #[test]
    fn difference_quotients() {
        let eps = 0.1;
        let d = DomainSpec::new(1.0, 0.5, eps).unwrap();
        let mut f = StaggeredField::new(d, SlotKind::Vertex);
        let mut c = StaggeredField::new(d, SlotKind::Vertex);
        for i in d.indices(SlotKind::Vertex) {
            f.insert(i, i.x(eps)).unwrap();
            c.insert(i, 3.0).unwrap();
        }
        let dx = diff_field(&f, Dir::X);
        assert_eq!(dx.kind, SlotKind::XEdge);
        assert!(dx.iter().all(|(_, v)| (v - 1.0).abs() < 1e-12));
        let dy = diff_field(&f, Dir::Y);
        assert_eq!(dy.kind, SlotKind::YEdge);
        assert!(dy.iter().all(|(_, v)| v.abs() < 1e-15));
        assert!(diff_field(&c, Dir::Xi).iter().all(|(_, v)| *v == 0.0));
        assert_eq!(diff_field(&c, Dir::Xi).kind, SlotKind::Center);
        assert!(matches!(diff(&f, Dir::X, LatticeIndex::new(41, 0)), Err(Error::OutOfDomain(_))));
    }
}
