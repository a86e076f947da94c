//! Discrete isothermic surfaces grown from Björling data.
//!
//! A surface is represented on a staggered half-step lattice: positions live
//! on vertex slots, conformal factors and curvatures on edge slots and the
//! remaining quantities on quad centers. Surfaces are grown from a two-row
//! zig-zag strip by completing conformal squares, and compared against smooth
//! references to measure convergence.

pub mod bjorling;
pub mod error;
pub mod export;
pub mod expr;
pub mod geometry;
pub mod growth;
pub mod harness;
pub mod lattice;
pub mod quantities;
pub mod smooth;
pub mod taylor;
pub mod transforms;

pub use bjorling::{BjorlingData, CauchyData, InitialStrip};
pub use error::{Error, Result};
pub use geometry::{Frame3, PlaneChart, Point3, QuadCheckReport};
pub use growth::{GrowthResult, Sweep};
pub use lattice::{Dir, DiscreteSurface, DomainSpec, LatticeIndex, SlotKind, StaggeredField};
pub use quantities::{DiscreteQuantities, GCResiduals};
pub use smooth::{BuiltinSurface, SmoothSurface};
