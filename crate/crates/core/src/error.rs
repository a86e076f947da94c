use crate::lattice::LatticeIndex;

/// Errors raised by the geometric and numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input points are collinear")]
    CollinearInput,
    #[error("point lies off the chart plane (distance {distance:.3e})")]
    OffPlane { distance: f64 },
    #[error("consecutive points coincide")]
    CoincidentPoints,
    #[error("index {0} has the wrong parity for this slot kind")]
    WrongParity(LatticeIndex),
    #[error("index {0} is outside the domain or not populated")]
    OutOfDomain(LatticeIndex),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("curve derivative vanishes at xi = {xi}")]
    DegenerateCurve { xi: f64 },
    #[error("normal is not orthogonal to the curve at xi = {xi} (defect {defect:.3e})")]
    NonOrthogonal { xi: f64, defect: f64 },
    #[error("star quantity overflow: |eps * {quantity}| = {value:.6} >= 1")]
    StarOverflow { quantity: &'static str, value: f64 },
    #[error("degenerate triple at {0}")]
    DegenerateTriple(LatticeIndex),
    #[error("degenerate edge at {0}")]
    DegenerateEdge(LatticeIndex),
    #[error("root finder did not converge")]
    NoConvergence,
    #[error("unknown surface name {0:?}")]
    UnknownName(String),
    #[error("Cauchy solver blow-up at xi = {xi}, eta = {eta}")]
    BlowUp { xi: f64, eta: f64 },
    #[error("frame drift {drift:.3e} exceeds tolerance")]
    FrameDrift { drift: f64 },
    #[error("degenerate metric at ({x}, {y})")]
    DegenerateMetric { x: f64, y: f64 },
    #[error("Darboux plane is degenerate at {0}")]
    DegeneratePlane(LatticeIndex),
    #[error("Darboux completion is singular at {0}")]
    SingularMoebius(LatticeIndex),
    #[error("Darboux pair collapsed at ({x}, {y})")]
    CollapsedPair { x: f64, y: f64 },
    #[error("Darboux parameter must be nonzero")]
    ZeroParameter,
    #[error("no common domain across the epsilon list")]
    EmptyOverlap,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
