//! Random graph generators for tests, benchmarks and toy datasets.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Attribute, AttributedGraph};

/// Random labeled graph: vertex labels in `1..=vertex_labels`, edge labels in
/// `1..=edge_labels`, each pair joined with probability `density`.
pub fn random_labeled_graph<R: Rng + ?Sized>(
    rng: &mut R,
    id: impl Into<String>,
    order: usize,
    vertex_labels: u32,
    edge_labels: u32,
    density: f64,
) -> AttributedGraph {
    let attrs = (0..order)
        .map(|_| Attribute::Label(rng.random_range(1..=vertex_labels)))
        .collect();
    let mut edges = Vec::new();
    for i in 0..order {
        for j in (i + 1)..order {
            if rng.random_bool(density) {
                edges.push((i, j, Attribute::Label(rng.random_range(1..=edge_labels))));
            }
        }
    }
    AttributedGraph::new(id, attrs, edges).expect("generated graph is valid")
}

/// Random graph with 2-D vertex coordinates in `[0, scale)²` and unlabeled edges
/// (every edge carries label 1).
pub fn random_vector_graph<R: Rng + ?Sized>(
    rng: &mut R,
    id: impl Into<String>,
    order: usize,
    scale: f64,
    density: f64,
) -> AttributedGraph {
    let attrs = (0..order)
        .map(|_| {
            Attribute::Vector(vec![
                rng.random::<f64>() * scale,
                rng.random::<f64>() * scale,
            ])
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..order {
        for j in (i + 1)..order {
            if rng.random_bool(density) {
                edges.push((i, j, Attribute::Label(1)));
            }
        }
    }
    AttributedGraph::new(id, attrs, edges).expect("generated graph is valid")
}

/// Noise applied by [`distort`].
#[derive(Debug, Clone, Copy)]
pub struct Distortion {
    /// Probability of relabeling each vertex (labels) or jitter amplitude (vectors).
    pub vertex: f64,
    /// Probability of flipping each vertex pair between edge and non-edge.
    pub edge: f64,
    /// Probability of dropping each vertex.
    pub drop: f64,
    pub vertex_labels: u32,
    pub edge_labels: u32,
}

/// A randomly distorted, vertex-shuffled copy of `base`.
pub fn distort<R: Rng + ?Sized>(
    rng: &mut R,
    base: &AttributedGraph,
    id: impl Into<String>,
    noise: Distortion,
) -> AttributedGraph {
    let n = base.order();
    let mut keep: Vec<usize> = (0..n).filter(|_| !rng.random_bool(noise.drop)).collect();
    if keep.is_empty() && n > 0 {
        keep.push(rng.random_range(0..n));
    }
    keep.shuffle(rng);
    let attrs = keep
        .iter()
        .map(|&i| match base.vertex_attr(i) {
            Attribute::Label(l) => {
                if rng.random_bool(noise.vertex) {
                    Attribute::Label(rng.random_range(1..=noise.vertex_labels))
                } else {
                    Attribute::Label(*l)
                }
            }
            Attribute::Vector(v) => Attribute::Vector(
                v.iter()
                    .map(|x| x + noise.vertex * (2.0 * rng.random::<f64>() - 1.0))
                    .collect(),
            ),
        })
        .collect();
    let mut edges = Vec::new();
    for a in 0..keep.len() {
        for b in (a + 1)..keep.len() {
            let existing = base.edge_attr(keep[a], keep[b]).cloned();
            let flip = rng.random_bool(noise.edge);
            let attr = match (existing, flip) {
                (Some(attr), false) => Some(attr),
                (None, true) => Some(match base.edge_kind() {
                    Some(crate::graph::AttributeKind::Label) | None => {
                        Attribute::Label(rng.random_range(1..=noise.edge_labels))
                    }
                    Some(_) => continue,
                }),
                _ => None,
            };
            if let Some(attr) = attr {
                edges.push((a, b, attr));
            }
        }
    }
    AttributedGraph::new(id, attrs, edges).expect("distorted graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_labeled_graph(&mut rng, "g", 6, 3, 2, 1.0);
        assert_eq!(g.edge_count(), 15);
        assert!(g
            .vertex_attrs()
            .iter()
            .all(|a| matches!(a, Attribute::Label(1..=3))));
        let v = random_vector_graph(&mut rng, "v", 4, 1.0, 0.0);
        assert_eq!(v.edge_count(), 0);
        let noise = Distortion {
            vertex: 0.0,
            edge: 0.0,
            drop: 0.0,
            vertex_labels: 3,
            edge_labels: 2,
        };
        let d = distort(&mut rng, &g, "d", noise);
        assert_eq!(d.order(), 6);
        assert_eq!(d.edge_count(), 15);
    }
}
