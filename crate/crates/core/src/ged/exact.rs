//! Exact GED by depth-first enumeration of transformations with branch and bound.

use crate::cost::{CostModel, COST_TOL};
use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Transformation};

use super::{ged_bipartite, GedResult};

struct Search<'a> {
    model: &'a CostModel,
    g: &'a AttributedGraph,
    g2: &'a AttributedGraph,
    forward: Vec<usize>,
    used: Vec<bool>,
    used_count: usize,
    bound: f64,
    best: Option<(f64, Vec<usize>)>,
}

impl Search<'_> {
    fn m(&self) -> usize {
        self.g2.order()
    }

    /// Cost of the edges between vertex `i` (mapped to `target`) and the
    /// already-assigned vertices `0..i`.
    fn incremental_edge_cost(&self, i: usize, target: usize) -> f64 {
        let m = self.m();
        let mut c = 0.0;
        for j in 0..i {
            let a = self.g.edge_attr(i, j);
            let tj = self.forward[j];
            if target < m && tj < m {
                match (a, self.g2.edge_attr(target, tj)) {
                    (Some(x), Some(y)) => c += self.model.esub(x, y),
                    (Some(_), None) => c += self.model.c_er(),
                    (None, Some(_)) => c += self.model.c_ei(),
                    (None, None) => {}
                }
            } else if a.is_some() {
                c += self.model.c_er();
            }
        }
        c
    }

    /// Insertion cost of target vertices and edges left unmatched at a leaf.
    fn completion_cost(&self) -> f64 {
        let m = self.m();
        let mut c = self.model.c_vi() * (m - self.used_count) as f64;
        for (k, l, _) in self.g2.edges() {
            if !self.used[k] || !self.used[l] {
                c += self.model.c_ei();
            }
        }
        c
    }

    fn remaining_lower_bound(&self, depth: usize) -> f64 {
        let left = self.g.order() - depth;
        let unmatched = self.m() - self.used_count;
        unmatched.saturating_sub(left) as f64 * self.model.c_vi()
    }

    fn visit(&mut self, depth: usize, partial: f64) {
        if partial + self.remaining_lower_bound(depth) > self.bound + COST_TOL {
            return;
        }
        if depth == self.g.order() {
            let total = partial + self.completion_cost();
            let accept = match &self.best {
                None => total <= self.bound + COST_TOL,
                Some((best, _)) => total < best - COST_TOL,
            };
            if accept {
                self.bound = self.bound.min(total);
                self.best = Some((total, self.forward.clone()));
            }
            return;
        }
        let m = self.m();
        let attr = self.g.vertex_attr(depth);
        for k in 0..m {
            if self.used[k] {
                continue;
            }
            let inc = self.model.vsub(attr, self.g2.vertex_attr(k))
                + self.incremental_edge_cost(depth, k);
            self.used[k] = true;
            self.used_count += 1;
            self.forward[depth] = k;
            self.visit(depth + 1, partial + inc);
            self.used[k] = false;
            self.used_count -= 1;
        }
        let inc = self.model.c_vr() + self.incremental_edge_cost(depth, m);
        self.forward[depth] = m;
        self.visit(depth + 1, partial + inc);
    }
}

/// Exact GED for graphs of order at most `order_cap`.
///
/// Among minimal transformations the one with the lexicographically smallest
/// forward map is returned (removal sorts after every substitution).
pub fn ged_exact(
    model: &CostModel,
    g: &AttributedGraph,
    g2: &AttributedGraph,
    order_cap: usize,
) -> Result<GedResult> {
    let order = g.order().max(g2.order());
    if order > order_cap {
        return Err(Error::ExactOrderCap {
            order,
            cap: order_cap,
        });
    }
    model.check_pair(g, g2)?;
    let upper = ged_bipartite(model, g, g2)?.cost;
    let mut search = Search {
        model,
        g,
        g2,
        forward: vec![g2.order(); g.order()],
        used: vec![false; g2.order()],
        used_count: 0,
        bound: upper,
        best: None,
    };
    search.visit(0, 0.0);
    let (_, forward) = search
        .best
        .expect("the bipartite transformation is within the bound");
    let t = Transformation::from_forward(forward, g.order(), g2.order())?;
    Ok(GedResult::evaluate(model, t, g, g2, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::example_pair;
    use crate::graph::Attribute;

    #[test]
    fn equal_graphs_cost_zero() {
        let m = CostModel::default_labeled();
        let (g, _) = example_pair();
        let r = ged_exact(&m, &g, &g, 8).unwrap();
        assert_eq!(r.cost, 0.0);
        assert!(r.is_exact);
        assert_eq!(r.transformation, Transformation::identity(4));
    }

    #[test]
    fn empty_source_only_insertions() {
        let m = CostModel::default_labeled();
        let l = Attribute::Label;
        let empty = AttributedGraph::new("e", vec![], vec![]).unwrap();
        let g2 = AttributedGraph::new("g2", vec![l(1), l(2)], vec![(0, 1, l(1))]).unwrap();
        let r = ged_exact(&m, &empty, &g2, 8).unwrap();
        assert_eq!(r.cost, 9.0);
    }

    #[test]
    fn example_pair_distance() {
        // Best: map 1->1, 2->2 or 3, 3->3 or 2, remove 4, keep (2,3) edge.
        let m = CostModel::default_labeled();
        let (g, g2) = example_pair();
        let r = ged_exact(&m, &g, &g2, 8).unwrap();
        let t = Transformation::from_forward(vec![0, 2, 1, 3], 4, 3).unwrap();
        assert!(r.cost <= crate::cost::transformation_cost(&m, &t, &g, &g2).unwrap());
        assert_eq!(
            r.cost,
            crate::cost::transformation_cost(&m, &r.transformation, &g, &g2).unwrap()
        );
    }

    #[test]
    fn order_cap_enforced() {
        let m = CostModel::default_labeled();
        let l = Attribute::Label;
        let big = AttributedGraph::new("b", vec![l(1); 9], vec![]).unwrap();
        assert!(matches!(
            ged_exact(&m, &big, &big, 8),
            Err(Error::ExactOrderCap { order: 9, cap: 8 })
        ));
    }
}
