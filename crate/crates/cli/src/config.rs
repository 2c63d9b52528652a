//! Run configuration: a JSON file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sturmian_core::greens1d::Variant;
use sturmian_core::verify::Suite;
use sturmian_core::weight::{PvMethod, QuadratureConfig};
use sturmian_core::{Error, PhysicalParams, Result};

use crate::Flags;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub b: Option<f64>,
    pub k: Option<f64>,
    pub t: Option<f64>,
    pub t0: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "N")]
    pub order: Option<usize>,
    pub variant: Option<Variant>,
    pub gauge_y: Option<f64>,
    pub suites: Option<Vec<Suite>>,
    pub quadrature: Option<QuadratureConfig>,
    pub out: Option<PathBuf>,
    pub ablate_pole_term: Option<bool>,
}

pub const DEFAULT_B: f64 = 1.0;
pub const DEFAULT_K: f64 = 1.0;
pub const DEFAULT_T: f64 = 0.7;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Domain(format!("config {}: {e}", path.display())))
    }

    /// Flags take precedence over values read from the file.
    pub fn overlay(mut self, f: &Flags) -> Result<Self> {
        macro_rules! take {
            ($field:ident, $flag:expr) => {
                if let Some(v) = $flag.clone() {
                    self.$field = Some(v);
                }
            };
        }
        take!(b, f.b);
        take!(k, f.k);
        take!(t, f.t);
        take!(t0, f.t0);
        take!(c, f.c);
        take!(order, f.order);
        take!(variant, f.variant);
        take!(gauge_y, f.gauge_y);
        take!(out, f.out);
        if !f.suite.is_empty() {
            let suites = f.suite.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>>>()?;
            self.suites = Some(suites);
        }
        if f.ablate_pole_term {
            self.ablate_pole_term = Some(true);
        }
        let mut q = self.quadrature.take().unwrap_or_default();
        if let Some(eps) = &f.pv_eps {
            q.pv_epsilon_schedule = eps.clone();
            q.pv_method = PvMethod::EpsilonRichardson;
        }
        if let Some(t) = f.tail_t {
            q.tail_cutoff = t;
        }
        if let Some(n) = f.nodes {
            q.panel_nodes = n;
        }
        self.quadrature = Some(q);
        Ok(self)
    }

    /// Parameters with t taken from `t` (or `t0` when only that is given).
    pub fn params(&self) -> Result<PhysicalParams> {
        let t = self.t.or(self.t0).unwrap_or(DEFAULT_T);
        self.build(t)
    }

    /// Parameters with t taken from `t0` (or `t`) for the two-dimensional
    /// commands.
    pub fn params_2d(&self) -> Result<PhysicalParams> {
        let t = self.t0.or(self.t).unwrap_or(DEFAULT_T);
        self.build(t)
    }

    fn build(&self, t: f64) -> Result<PhysicalParams> {
        PhysicalParams::new(self.b.unwrap_or(DEFAULT_B), self.k.unwrap_or(DEFAULT_K), t, self.c.unwrap_or(0.0))
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        self.quadrature.clone().unwrap_or_default()
    }
}
