//! TOML configuration with `[surface]`, `[lattice]` and `[run]` sections.
//! Command-line flags override file values.

use std::path::PathBuf;

use isogrow::expr::Expr;
use isogrow::BjorlingData;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub surface: SurfaceSection,
    #[serde(default)]
    pub lattice: LatticeSection,
    #[serde(default)]
    pub run: RunSection,
}

/// A built-in surface by `name`, or custom Björling data given componentwise.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSection {
    pub name: Option<String>,
    pub curve: Option<[Component; 3]>,
    pub normal: Option<[Component; 3]>,
}

/// Sum of a polynomial and a trigonometric series in the curve parameter.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    /// Coefficients of `1, t, t^2, ...`.
    #[serde(default)]
    pub poly: Vec<f64>,
    /// `[w, a, b]` terms of `a cos(w t) + b sin(w t)`.
    #[serde(default)]
    pub trig: Vec<[f64; 3]>,
}

impl Component {
    pub fn expr(&self) -> Expr {
        (Expr::poly(&self.poly) + Expr::trig_sum(&self.trig)).simplify()
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub eps: Option<f64>,
    pub r: Option<f64>,
    pub h: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub out: Option<PathBuf>,
    pub export_quantities: Option<PathBuf>,
    pub kind: Option<String>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub seed: Option<[f64; 3]>,
    pub eps_list: Option<Vec<f64>>,
}

impl ConfigFile {
    pub fn load(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(toml::from_str(&text)?)
    }
}

pub const DEFAULT_R: f64 = 1.0;
pub const DEFAULT_H: f64 = 0.3;
pub const DEFAULT_EPS: f64 = 0.05;
pub const DEFAULT_EPS_LIST: [f64; 3] = [0.1, 0.05, 0.025];

/// Björling data for the configured surface; `name` from the command line wins.
pub fn bjorling_data(section: &SurfaceSection, name: Option<&str>, r: f64) -> isogrow::Result<BjorlingData> {
    let name = name.or(section.name.as_deref());
    match (name, &section.curve, &section.normal) {
        (Some(n), _, _) if n != "custom" => BjorlingData::builtin(n, r),
        (_, Some(f), Some(nrm)) => BjorlingData::new(
            name.unwrap_or("custom"),
            [f[0].expr(), f[1].expr(), f[2].expr()],
            [nrm[0].expr(), nrm[1].expr(), nrm[2].expr()],
            r,
        ),
        _ => Err(isogrow::Error::InvalidInput(
            "no surface given: use --surface or a [surface] section with curve and normal".into(),
        )),
    }
}
