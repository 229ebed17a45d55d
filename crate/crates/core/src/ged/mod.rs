//! Graph edit distance solvers.
//!
//! All solvers return a [`GedResult`] whose cost is the exact cost of the
//! returned transformation, so every heuristic result is an upper bound on GED.

mod bipartite;
mod exact;
mod ipfp;
mod multistart;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cost::{CostModel, COST_TOL};
use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Transformation};

pub use bipartite::ged_bipartite;
pub use exact::ged_exact;
pub use ipfp::ged_ipfp;
pub use multistart::{ged_multistart, random_transformation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GedMethod {
    Exact,
    Bipartite,
    Ipfp,
    #[serde(rename = "mbipartite")]
    MultistartBipartite,
    #[serde(rename = "mipfp")]
    MultistartIpfp,
}

impl GedMethod {
    pub fn name(self) -> &'static str {
        match self {
            GedMethod::Exact => "exact",
            GedMethod::Bipartite => "bipartite",
            GedMethod::Ipfp => "ipfp",
            GedMethod::MultistartBipartite => "mbipartite",
            GedMethod::MultistartIpfp => "mipfp",
        }
    }
}

impl fmt::Display for GedMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GedMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "exact" => GedMethod::Exact,
            "bipartite" => GedMethod::Bipartite,
            "ipfp" => GedMethod::Ipfp,
            "mbipartite" => GedMethod::MultistartBipartite,
            "mipfp" => GedMethod::MultistartIpfp,
            other => return Err(Error::InvalidConfig(format!(
                "unknown GED method `{other}` (expected exact, bipartite, ipfp, mbipartite, mipfp)"
            ))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GedSolverConfig {
    pub method: GedMethod,
    /// Total number of starts for the multistart methods, the bipartite start included.
    pub multistart: usize,
    pub ipfp_max_iters: usize,
    pub ipfp_tol: f64,
    pub seed: u64,
    pub exact_order_cap: usize,
}

impl Default for GedSolverConfig {
    fn default() -> Self {
        GedSolverConfig {
            method: GedMethod::MultistartIpfp,
            multistart: 40,
            ipfp_max_iters: 50,
            ipfp_tol: 1e-6,
            seed: 0,
            exact_order_cap: 8,
        }
    }
}

impl GedSolverConfig {
    pub fn with_method(method: GedMethod) -> Self {
        GedSolverConfig {
            method,
            ..Default::default()
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        GedSolverConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.multistart == 0 {
            return Err(Error::InvalidConfig("multistart count must be >= 1".into()));
        }
        if self.ipfp_max_iters == 0 {
            return Err(Error::InvalidConfig("ipfp_max_iters must be >= 1".into()));
        }
        if !(self.ipfp_tol > 0.0 && self.ipfp_tol.is_finite()) {
            return Err(Error::InvalidConfig(
                "ipfp_tol must be a positive real".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GedResult {
    pub transformation: Transformation,
    pub cost: f64,
    pub is_exact: bool,
}

impl GedResult {
    pub(crate) fn evaluate(
        model: &CostModel,
        transformation: Transformation,
        g: &AttributedGraph,
        g2: &AttributedGraph,
        is_exact: bool,
    ) -> Self {
        let cost = model.cost_unchecked(&transformation, g, g2);
        GedResult {
            transformation,
            cost,
            is_exact,
        }
    }

    /// Strictly cheaper, or equally cheap with a lexicographically smaller forward map.
    pub(crate) fn better_than(&self, other: &GedResult) -> bool {
        if self.cost < other.cost - COST_TOL {
            return true;
        }
        (self.cost - other.cost).abs() <= COST_TOL
            && self.transformation.forward() < other.transformation.forward()
    }
}

/// Runs the solver selected by `config.method`. Plain IPFP starts from the
/// bipartite transformation.
pub fn compute_ged(
    model: &CostModel,
    g: &AttributedGraph,
    g2: &AttributedGraph,
    config: &GedSolverConfig,
) -> Result<GedResult> {
    config.validate()?;
    match config.method {
        GedMethod::Exact => ged_exact(model, g, g2, config.exact_order_cap),
        GedMethod::Bipartite => ged_bipartite(model, g, g2),
        GedMethod::Ipfp => {
            let init = ged_bipartite(model, g, g2)?;
            ged_ipfp(model, g, g2, &init.transformation, config)
        }
        GedMethod::MultistartBipartite | GedMethod::MultistartIpfp => {
            ged_multistart(model, g, g2, config)
        }
    }
}
