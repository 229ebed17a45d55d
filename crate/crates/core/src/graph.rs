//! Simple undirected attributed graphs and vertex transformations between them.
//!
//! Vertices are indexed `0..order`. A [`Transformation`] from a graph of order
//! `n` to a graph of order `n'` stores, for every source vertex, either its
//! substitution target in `0..n'` or the removal sentinel `n'`; the reverse map
//! uses `n` as the insertion sentinel. This is the 1-based `n'+1` convention
//! shifted down by one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex or edge attribute: an integer label or a real vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Attribute {
    Label(u32),
    Vector(Vec<f64>),
}

/// Variant (and dimension, for vectors) of an [`Attribute`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttributeKind {
    Label,
    Vector(usize),
}

impl Attribute {
    pub fn kind(&self) -> AttributeKind {
        match self {
            Attribute::Label(_) => AttributeKind::Label,
            Attribute::Vector(v) => AttributeKind::Vector(v.len()),
        }
    }

    pub fn as_label(&self) -> Option<u32> {
        match self {
            Attribute::Label(l) => Some(*l),
            Attribute::Vector(_) => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[f64]> {
        match self {
            Attribute::Label(_) => None,
            Attribute::Vector(v) => Some(v),
        }
    }

    /// Exact for labels, coordinate-wise within `tol` for vectors.
    pub fn approx_eq(&self, other: &Attribute, tol: f64) -> bool {
        match (self, other) {
            (Attribute::Label(a), Attribute::Label(b)) => a == b,
            (Attribute::Vector(a), Attribute::Vector(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
            }
            _ => false,
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Attribute::Label(l) => write!(f, "{l}"),
            Attribute::Vector(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A simple undirected graph with attributed vertices and edges.
///
/// Edge attributes are stored in a dense symmetric `order x order` matrix of
/// `Option<Attribute>`; `None` marks a non-edge, so the adjacency matrix is
/// implied by the attribute matrix and attributes of non-edges do not exist.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    id: String,
    vertex_attrs: Vec<Attribute>,
    edges: Vec<Option<Attribute>>,
}

impl AttributedGraph {
    /// Builds a graph from vertex attributes and an undirected edge list.
    pub fn new(
        id: impl Into<String>,
        vertex_attrs: Vec<Attribute>,
        edges: impl IntoIterator<Item = (usize, usize, Attribute)>,
    ) -> Result<Self> {
        let n = vertex_attrs.len();
        if let Some(first) = vertex_attrs.first() {
            let kind = first.kind();
            if vertex_attrs.iter().any(|a| a.kind() != kind) {
                return Err(Error::MixedAttributes("vertex attributes"));
            }
        }
        let mut g = AttributedGraph {
            id: id.into(),
            vertex_attrs,
            edges: vec![None; n * n],
        };
        let mut edge_kind = None;
        for (i, j, attr) in edges {
            for index in [i, j] {
                if index >= n {
                    return Err(Error::VertexOutOfRange { index, order: n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            match edge_kind {
                None => edge_kind = Some(attr.kind()),
                Some(k) if k != attr.kind() => {
                    return Err(Error::MixedAttributes("edge attributes"))
                }
                _ => {}
            }
            if g.has_edge(i, j) {
                return Err(Error::DuplicateEdge(i.min(j), i.max(j)));
            }
            g.set_edge(i, j, Some(attr));
        }
        Ok(g)
    }

    /// Builds a graph without validation. Callers guarantee symmetry,
    /// an empty diagonal and homogeneous attributes.
    pub(crate) fn from_parts(
        id: String,
        vertex_attrs: Vec<Attribute>,
        edges: Vec<Option<Attribute>>,
    ) -> Self {
        debug_assert_eq!(edges.len(), vertex_attrs.len() * vertex_attrs.len());
        AttributedGraph {
            id,
            vertex_attrs,
            edges,
        }
    }

    pub(crate) fn set_edge(&mut self, i: usize, j: usize, attr: Option<Attribute>) {
        let n = self.order();
        self.edges[i * n + j] = attr.clone();
        self.edges[j * n + i] = attr;
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn order(&self) -> usize {
        self.vertex_attrs.len()
    }

    pub fn vertex_attr(&self, i: usize) -> &Attribute {
        &self.vertex_attrs[i]
    }

    pub fn vertex_attrs(&self) -> &[Attribute] {
        &self.vertex_attrs
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges[i * self.order() + j].is_some()
    }

    #[inline]
    pub fn edge_attr(&self, i: usize, j: usize) -> Option<&Attribute> {
        self.edges[i * self.order() + j].as_ref()
    }

    /// Undirected edges as `(i, j, attr)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Attribute)> + '_ {
        let n = self.order();
        (0..n).flat_map(move |i| {
            ((i + 1)..n).filter_map(move |j| self.edge_attr(i, j).map(|a| (i, j, a)))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count() / 2
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.order();
        (0..n).filter(move |&j| self.edges[i * n + j].is_some())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    /// Kind of the vertex attributes, `None` for the empty graph.
    pub fn vertex_kind(&self) -> Option<AttributeKind> {
        self.vertex_attrs.first().map(Attribute::kind)
    }

    /// Kind of the edge attributes, `None` when there are no edges.
    pub fn edge_kind(&self) -> Option<AttributeKind> {
        self.edges.iter().flatten().next().map(Attribute::kind)
    }

    /// Structural equality with a tolerance on vector coordinates; ids are ignored.
    pub fn approx_eq(&self, other: &AttributedGraph, tol: f64) -> bool {
        self.order() == other.order()
            && self
                .vertex_attrs
                .iter()
                .zip(&other.vertex_attrs)
                .all(|(a, b)| a.approx_eq(b, tol))
            && self
                .edges
                .iter()
                .zip(&other.edges)
                .all(|(a, b)| match (a, b) {
                    (None, None) => true,
                    (Some(a), Some(b)) => a.approx_eq(b, tol),
                    _ => false,
                })
    }
}

/// A vertex transformation (error-correcting matching) between two graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    forward: Vec<usize>,
    reverse: Vec<usize>,
}

impl Transformation {
    /// Builds a transformation from its forward map and derives the reverse map.
    ///
    /// `forward[i] == target_order` marks vertex `i` as removed.
    pub fn from_forward(
        forward: Vec<usize>,
        source_order: usize,
        target_order: usize,
    ) -> Result<Self> {
        if forward.len() != source_order {
            return Err(Error::OrderMismatch(format!(
                "forward map has {} entries, source order is {source_order}",
                forward.len()
            )));
        }
        let mut reverse = vec![source_order; target_order];
        for (i, &k) in forward.iter().enumerate() {
            if k > target_order {
                return Err(Error::TargetOutOfRange {
                    value: k,
                    target_order,
                });
            }
            if k < target_order {
                if reverse[k] != source_order {
                    return Err(Error::DuplicateTarget(k));
                }
                reverse[k] = i;
            }
        }
        Ok(Transformation { forward, reverse })
    }

    pub fn identity(order: usize) -> Self {
        let forward: Vec<usize> = (0..order).collect();
        Transformation {
            reverse: forward.clone(),
            forward,
        }
    }

    /// Transformation removing every source vertex and inserting every target vertex.
    pub fn remove_all(source_order: usize, target_order: usize) -> Self {
        Transformation {
            forward: vec![target_order; source_order],
            reverse: vec![source_order; target_order],
        }
    }

    pub fn source_order(&self) -> usize {
        self.forward.len()
    }

    pub fn target_order(&self) -> usize {
        self.reverse.len()
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn reverse(&self) -> &[usize] {
        &self.reverse
    }

    /// Substitution target of source vertex `i`, `None` if removed.
    #[inline]
    pub fn image(&self, i: usize) -> Option<usize> {
        let k = self.forward[i];
        (k < self.reverse.len()).then_some(k)
    }

    /// Source vertex substituted to target vertex `k`, `None` if inserted.
    #[inline]
    pub fn preimage(&self, k: usize) -> Option<usize> {
        let i = self.reverse[k];
        (i < self.forward.len()).then_some(i)
    }

    pub fn substitution_count(&self) -> usize {
        self.forward
            .iter()
            .filter(|&&k| k < self.reverse.len())
            .count()
    }

    /// The transformation from the target graph back to the source graph.
    pub fn inverse(&self) -> Self {
        Transformation {
            forward: self.reverse.clone(),
            reverse: self.forward.clone(),
        }
    }

    /// Checks that the transformation maps `g` to `g2`.
    pub fn check_orders(&self, g: &AttributedGraph, g2: &AttributedGraph) -> Result<()> {
        if self.source_order() != g.order() || self.target_order() != g2.order() {
            return Err(Error::OrderMismatch(format!(
                "transformation is {}->{}, graphs are {}->{}",
                self.source_order(),
                self.target_order(),
                g.order(),
                g2.order()
            )));
        }
        Ok(())
    }

    /// Forward map in 1-based notation, removals written as `target_order + 1`.
    pub fn one_based(&self) -> Vec<usize> {
        self.forward.iter().map(|k| k + 1).collect()
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.one_based().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Edge operations induced by a vertex transformation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeClassification {
    /// `((i, j), (π_i, π_j))` with `i < j` in the source graph.
    pub substituted: Vec<((usize, usize), (usize, usize))>,
    /// Source edges `(i, j)`, `i < j`.
    pub removed: Vec<(usize, usize)>,
    /// Target edges `(k, l)`, `k < l`.
    pub inserted: Vec<(usize, usize)>,
}

/// Splits the edges of `g` and `g2` into substituted, removed and inserted sets.
pub fn classify_edges(
    t: &Transformation,
    g: &AttributedGraph,
    g2: &AttributedGraph,
) -> Result<EdgeClassification> {
    t.check_orders(g, g2)?;
    let mut out = EdgeClassification::default();
    for (i, j, _) in g.edges() {
        match (t.image(i), t.image(j)) {
            (Some(k), Some(l)) if g2.has_edge(k, l) => out.substituted.push(((i, j), (k, l))),
            _ => out.removed.push((i, j)),
        }
    }
    for (k, l, _) in g2.edges() {
        let hit = match (t.preimage(k), t.preimage(l)) {
            (Some(i), Some(j)) => g.has_edge(i, j),
            _ => false,
        };
        if !hit {
            out.inserted.push((k, l));
        }
    }
    Ok(out)
}
