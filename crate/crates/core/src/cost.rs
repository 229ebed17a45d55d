//! Edit-cost model and the cost of a transformation.
//!
//! The cost of transforming `g` into `g2` with `t` is the vertex cost plus half
//! the edge cost, where the edge cost counts every undirected edge operation
//! twice (once per orientation). Removal and insertion costs are constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Attribute, AttributeKind, AttributedGraph, Transformation};

/// Absolute tolerance for comparing costs.
pub const COST_TOL: f64 = 1e-9;

/// Vertex substitution cost function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VertexSubst {
    /// `c_vs` when labels differ, 0 otherwise.
    LabelDelta(f64),
    /// Squared Euclidean distance between attribute vectors.
    SquaredEuclidean,
}

/// Edge substitution cost function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EdgeSubst {
    /// `c_es` when labels differ, 0 otherwise.
    LabelDelta(f64),
    /// Unlabeled edges: substitution is free.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    vertex_subst: VertexSubst,
    edge_subst: EdgeSubst,
    c_vr: f64,
    c_vi: f64,
    c_er: f64,
    c_ei: f64,
}

impl CostModel {
    pub fn new(
        vertex_subst: VertexSubst,
        edge_subst: EdgeSubst,
        c_vr: f64,
        c_vi: f64,
        c_er: f64,
        c_ei: f64,
    ) -> Result<Self> {
        for (name, c) in [
            ("c_vr", c_vr),
            ("c_vi", c_vi),
            ("c_er", c_er),
            ("c_ei", c_ei),
        ] {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::InvalidCost(format!(
                    "{name} = {c} must be finite and >= 0"
                )));
            }
        }
        if let VertexSubst::LabelDelta(c_vs) = vertex_subst {
            if !c_vs.is_finite() || c_vs <= 0.0 {
                return Err(Error::InvalidCost(format!("c_vs = {c_vs} must be > 0")));
            }
            if c_vs > c_vr + c_vi {
                return Err(Error::InvalidCost(format!(
                    "c_vs = {c_vs} exceeds c_vr + c_vi = {}",
                    c_vr + c_vi
                )));
            }
        }
        if let EdgeSubst::LabelDelta(c_es) = edge_subst {
            if !c_es.is_finite() || c_es <= 0.0 {
                return Err(Error::InvalidCost(format!("c_es = {c_es} must be > 0")));
            }
            if c_es > c_er + c_ei {
                return Err(Error::InvalidCost(format!(
                    "c_es = {c_es} exceeds c_er + c_ei = {}",
                    c_er + c_ei
                )));
            }
        }
        Ok(CostModel {
            vertex_subst,
            edge_subst,
            c_vr,
            c_vi,
            c_er,
            c_ei,
        })
    }

    /// Labeled vertices and edges with the default constants
    /// (`c_vs = c_es = 1`, every removal and insertion 3).
    pub fn default_labeled() -> Self {
        Self::new(
            VertexSubst::LabelDelta(1.0),
            EdgeSubst::LabelDelta(1.0),
            3.0,
            3.0,
            3.0,
            3.0,
        )
        .expect("default constants are valid")
    }

    /// Vector vertices under squared Euclidean cost, unlabeled edges, removals
    /// and insertions at 3.
    pub fn default_euclidean() -> Self {
        Self::new(
            VertexSubst::SquaredEuclidean,
            EdgeSubst::Zero,
            3.0,
            3.0,
            3.0,
            3.0,
        )
        .expect("default constants are valid")
    }

    pub fn vertex_subst(&self) -> VertexSubst {
        self.vertex_subst
    }

    pub fn edge_subst(&self) -> EdgeSubst {
        self.edge_subst
    }

    pub fn c_vr(&self) -> f64 {
        self.c_vr
    }

    pub fn c_vi(&self) -> f64 {
        self.c_vi
    }

    pub fn c_er(&self) -> f64 {
        self.c_er
    }

    pub fn c_ei(&self) -> f64 {
        self.c_ei
    }

    /// Whether GED is guaranteed to equal the minimal transformation cost,
    /// i.e. no substitution can exceed a removal plus an insertion.
    /// Squared Euclidean costs are unbounded, so this is `false` for them.
    pub fn is_metric_guaranteed(&self) -> bool {
        matches!(self.vertex_subst, VertexSubst::LabelDelta(_))
    }

    /// Removal and insertion constants are swapped-symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.c_vr == self.c_vi && self.c_er == self.c_ei
    }

    /// Checks that every attribute of `g` fits this model.
    pub fn check_graph(&self, g: &AttributedGraph) -> Result<()> {
        let vertex_ok = match (self.vertex_subst, g.vertex_kind()) {
            (_, None) => true,
            (VertexSubst::LabelDelta(_), Some(k)) => k == AttributeKind::Label,
            (VertexSubst::SquaredEuclidean, Some(k)) => matches!(k, AttributeKind::Vector(_)),
        };
        if !vertex_ok {
            return Err(Error::AttributeMismatch(format!(
                "graph `{}` vertex attributes are {:?}, model expects {:?}",
                g.id(),
                g.vertex_kind(),
                self.vertex_subst
            )));
        }
        if let (EdgeSubst::LabelDelta(_), Some(k)) = (self.edge_subst, g.edge_kind()) {
            if k != AttributeKind::Label {
                return Err(Error::AttributeMismatch(format!(
                    "graph `{}` edge attributes are {k:?}, model expects labels",
                    g.id()
                )));
            }
        }
        Ok(())
    }

    /// Checks both graphs against the model and against each other.
    pub fn check_pair(&self, g: &AttributedGraph, g2: &AttributedGraph) -> Result<()> {
        self.check_graph(g)?;
        self.check_graph(g2)?;
        if let (Some(a), Some(b)) = (g.vertex_kind(), g2.vertex_kind()) {
            if a != b {
                return Err(Error::AttributeMismatch(format!(
                    "vertex attributes {a:?} vs {b:?}"
                )));
            }
        }
        Ok(())
    }

    /// Vertex substitution cost; panics on a variant mismatch (checked at entry points).
    #[inline]
    pub(crate) fn vsub(&self, a: &Attribute, b: &Attribute) -> f64 {
        match (self.vertex_subst, a, b) {
            (VertexSubst::LabelDelta(c), Attribute::Label(x), Attribute::Label(y)) => {
                if x == y {
                    0.0
                } else {
                    c
                }
            }
            (VertexSubst::SquaredEuclidean, Attribute::Vector(x), Attribute::Vector(y)) => {
                x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum()
            }
            _ => panic!(
                "vertex attributes {a:?}, {b:?} do not match {:?}",
                self.vertex_subst
            ),
        }
    }

    #[inline]
    pub(crate) fn esub(&self, a: &Attribute, b: &Attribute) -> f64 {
        match self.edge_subst {
            EdgeSubst::Zero => 0.0,
            EdgeSubst::LabelDelta(c) => match (a, b) {
                (Attribute::Label(x), Attribute::Label(y)) => {
                    if x == y {
                        0.0
                    } else {
                        c
                    }
                }
                _ => panic!("edge attributes {a:?}, {b:?} are not labels"),
            },
        }
    }

    /// Edge cost counted once per undirected edge, without validation.
    pub(crate) fn edge_cost_once(
        &self,
        t: &Transformation,
        g: &AttributedGraph,
        g2: &AttributedGraph,
    ) -> f64 {
        let mut cost = 0.0;
        for (i, j, a) in g.edges() {
            cost += match (t.image(i), t.image(j)) {
                (Some(k), Some(l)) => match g2.edge_attr(k, l) {
                    Some(b) => self.esub(a, b),
                    None => self.c_er,
                },
                _ => self.c_er,
            };
        }
        for (k, l, _) in g2.edges() {
            let substituted = match (t.preimage(k), t.preimage(l)) {
                (Some(i), Some(j)) => g.has_edge(i, j),
                _ => false,
            };
            if !substituted {
                cost += self.c_ei;
            }
        }
        cost
    }

    pub(crate) fn vertex_cost_unchecked(
        &self,
        t: &Transformation,
        phi: &[Attribute],
        phi2: &[Attribute],
    ) -> f64 {
        let mut cost = 0.0;
        for (i, a) in phi.iter().enumerate() {
            cost += match t.image(i) {
                Some(k) => self.vsub(a, &phi2[k]),
                None => self.c_vr,
            };
        }
        let inserted = (0..phi2.len()).filter(|&k| t.preimage(k).is_none()).count();
        cost + self.c_vi * inserted as f64
    }

    /// Transformation cost without validation; used by the solvers.
    pub(crate) fn cost_unchecked(
        &self,
        t: &Transformation,
        g: &AttributedGraph,
        g2: &AttributedGraph,
    ) -> f64 {
        self.vertex_cost_unchecked(t, g.vertex_attrs(), g2.vertex_attrs())
            + self.edge_cost_once(t, g, g2)
    }
}

/// Cost of substituting vertex attribute `a` by `b`.
pub fn vertex_subst_cost(model: &CostModel, a: &Attribute, b: &Attribute) -> Result<f64> {
    let ok = match (model.vertex_subst, a, b) {
        (VertexSubst::LabelDelta(_), Attribute::Label(_), Attribute::Label(_)) => true,
        (VertexSubst::SquaredEuclidean, Attribute::Vector(x), Attribute::Vector(y)) => {
            x.len() == y.len()
        }
        _ => false,
    };
    if !ok {
        return Err(Error::AttributeMismatch(format!(
            "{a:?} and {b:?} under {:?}",
            model.vertex_subst
        )));
    }
    Ok(model.vsub(a, b))
}

/// Vertex part of the transformation cost.
pub fn vertex_cost(
    model: &CostModel,
    t: &Transformation,
    phi: &[Attribute],
    phi2: &[Attribute],
) -> Result<f64> {
    if phi.len() != t.source_order() || phi2.len() != t.target_order() {
        return Err(Error::OrderMismatch(format!(
            "transformation is {}->{}, attributes are {}->{}",
            t.source_order(),
            t.target_order(),
            phi.len(),
            phi2.len()
        )));
    }
    for (i, a) in phi.iter().enumerate() {
        if let Some(k) = t.image(i) {
            vertex_subst_cost(model, a, &phi2[k])?;
        }
    }
    Ok(model.vertex_cost_unchecked(t, phi, phi2))
}

/// Edge part of the cost, counting each undirected edge operation twice.
pub fn edge_cost(
    model: &CostModel,
    t: &Transformation,
    g: &AttributedGraph,
    g2: &AttributedGraph,
) -> Result<f64> {
    t.check_orders(g, g2)?;
    model.check_pair(g, g2)?;
    Ok(2.0 * model.edge_cost_once(t, g, g2))
}

/// Total cost: vertex cost plus half the edge cost.
pub fn transformation_cost(
    model: &CostModel,
    t: &Transformation,
    g: &AttributedGraph,
    g2: &AttributedGraph,
) -> Result<f64> {
    t.check_orders(g, g2)?;
    model.check_pair(g, g2)?;
    Ok(vertex_cost(model, t, g.vertex_attrs(), g2.vertex_attrs())?
        + 0.5 * edge_cost(model, t, g, g2)?)
}
