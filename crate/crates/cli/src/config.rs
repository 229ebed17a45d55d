//! Effective run configuration: defaults, overlaid by a TOML file, overlaid
//! by command-line flags.

use std::path::PathBuf;

use gmg_core::eval::SampleSize;
use gmg_core::io::{EdgeAttrHint, ModeHints, VertexAttrHint};
use gmg_core::{
    AttributeKind, CostModel, DescentConfig, EdgeSubst, GedMethod, GedSolverConfig, VertexSubst,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Worker threads; all available cores when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Report wall-clock times; without them reports are byte-reproducible.
    pub timings: bool,
    pub seed: u64,
    pub dataset: DatasetSection,
    pub cost: CostSection,
    pub phase1: SolverSection,
    pub phase2: SolverSection,
    pub median: MedianSection,
    pub experiment: ExperimentSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            threads: None,
            out: None,
            timings: true,
            seed: 0,
            dataset: DatasetSection::default(),
            cost: CostSection::default(),
            phase1: SolverSection::default(),
            phase2: SolverSection::default(),
            median: MedianSection::default(),
            experiment: ExperimentSection::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSection {
    /// Collection index file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// One GXL attribute name for labels, or a comma-separated list for vectors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_attr: Option<String>,
    /// GXL edge attribute name, or `none` for unlabeled edges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_attr: Option<String>,
    /// Restrict `set-median` and `median` to one class of the collection.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
}

impl DatasetSection {
    pub fn hints(&self) -> ModeHints {
        let vertex = match self.vertex_attr.as_deref() {
            None => VertexAttrHint::Auto,
            Some(s) if s.contains(',') => {
                VertexAttrHint::Vector(s.split(',').map(|n| n.trim().to_string()).collect())
            }
            Some(s) => VertexAttrHint::Label(s.to_string()),
        };
        let edge = match self.edge_attr.as_deref() {
            None => EdgeAttrHint::Auto,
            Some("none") => EdgeAttrHint::Unlabeled,
            Some(s) => EdgeAttrHint::Label(s.to_string()),
        };
        ModeHints { vertex, edge }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostSection {
    pub c_vs: f64,
    pub c_es: f64,
    pub c_vr: f64,
    pub c_vi: f64,
    pub c_er: f64,
    pub c_ei: f64,
}

impl Default for CostSection {
    fn default() -> Self {
        CostSection {
            c_vs: 1.0,
            c_es: 1.0,
            c_vr: 3.0,
            c_vi: 3.0,
            c_er: 3.0,
            c_ei: 3.0,
        }
    }
}

impl CostSection {
    /// Applies `c_vs=1,c_er=2,...` overrides.
    pub fn apply(&mut self, spec: &str) -> Result<(), CliError> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("cost item `{item}` is not key=value")))?;
            let value: f64 = value.trim().parse().map_err(|_| {
                CliError::Usage(format!("cost `{key}` has non-numeric value `{value}`"))
            })?;
            let slot = match key.trim() {
                "c_vs" => &mut self.c_vs,
                "c_es" => &mut self.c_es,
                "c_vr" => &mut self.c_vr,
                "c_vi" => &mut self.c_vi,
                "c_er" => &mut self.c_er,
                "c_ei" => &mut self.c_ei,
                other => return Err(CliError::Usage(format!("unknown cost constant `{other}`"))),
            };
            *slot = value;
        }
        Ok(())
    }

    /// Cost model for data with the given vertex attributes and edge kind.
    /// Vector vertices use squared Euclidean substitution and ignore `c_vs`.
    pub fn model(
        &self,
        vertices: Option<AttributeKind>,
        labeled_edges: bool,
    ) -> Result<CostModel, CliError> {
        let all = [
            self.c_vs, self.c_es, self.c_vr, self.c_vi, self.c_er, self.c_ei,
        ];
        if all.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(CliError::Usage("cost constants must be positive".into()));
        }
        let vertex = match vertices {
            Some(AttributeKind::Vector(_)) => VertexSubst::SquaredEuclidean,
            _ => VertexSubst::LabelDelta(self.c_vs),
        };
        let edge = if labeled_edges {
            EdgeSubst::LabelDelta(self.c_es)
        } else {
            EdgeSubst::Zero
        };
        CostModel::new(vertex, edge, self.c_vr, self.c_vi, self.c_er, self.c_ei)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub method: GedMethod,
    pub multistart: usize,
    pub ipfp_max_iters: usize,
    pub ipfp_tol: f64,
    pub exact_order_cap: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = GedSolverConfig::default();
        SolverSection {
            method: d.method,
            multistart: d.multistart,
            ipfp_max_iters: d.ipfp_max_iters,
            ipfp_tol: d.ipfp_tol,
            exact_order_cap: d.exact_order_cap,
        }
    }
}

impl SolverSection {
    pub fn solver(&self, seed: u64) -> GedSolverConfig {
        GedSolverConfig {
            method: self.method,
            multistart: self.multistart,
            ipfp_max_iters: self.ipfp_max_iters,
            ipfp_tol: self.ipfp_tol,
            seed,
            exact_order_cap: self.exact_order_cap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MedianSection {
    pub max_iters: usize,
}

impl Default for MedianSection {
    fn default() -> Self {
        MedianSection {
            max_iters: DescentConfig::default().max_iters,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    /// Per-class sample (`sod-table`) or train share (`classify`):
    /// an integer count or a fraction.
    pub sample: SampleSize,
    pub repeats: usize,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            sample: SampleSize::Count(10),
            repeats: 1,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config file: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.threads == Some(0) {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        self.descent()
            .phase1
            .validate()
            .and(self.descent().phase2.validate())
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if self.median.max_iters == 0 {
            return Err(CliError::Usage("max_iters must be >= 1".into()));
        }
        if self.experiment.repeats == 0 {
            return Err(CliError::Usage("--repeats must be >= 1".into()));
        }
        self.cost.model(None, true)?;
        Ok(())
    }

    pub fn descent(&self) -> DescentConfig {
        DescentConfig {
            max_iters: self.median.max_iters,
            phase1: self.phase1.solver(self.seed),
            phase2: self.phase2.solver(self.seed),
        }
    }
}
