//! Shared fixtures for the criterion benches.

use isogrow::bjorling::{derive_cauchy_data, sample_initial_strip};
use isogrow::{BjorlingData, CauchyData, InitialStrip};

pub fn sphere_data() -> CauchyData {
    derive_cauchy_data(&BjorlingData::sphere_mercator(1.0).expect("builtin")).expect("sphere data")
}

pub fn sphere_strip(eps: f64) -> InitialStrip {
    sample_initial_strip(&sphere_data(), eps).expect("sphere strip")
}
