//! Brute-force reference implementations, written against the definitions
//! rather than against the library code they check.
#![allow(dead_code)]

use gmg_core::cost::{EdgeSubst, VertexSubst};
use gmg_core::graph::{Attribute, AttributedGraph, Transformation};
use gmg_core::median::SubstitutionSets;
use gmg_core::synthetic::{random_labeled_graph, random_vector_graph};
use gmg_core::CostModel;
use rand::Rng;

pub fn vertex_subst(model: &CostModel, a: &Attribute, b: &Attribute) -> f64 {
    match (model.vertex_subst(), a, b) {
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
        _ => panic!("attribute does not fit the model"),
    }
}

pub fn edge_subst(model: &CostModel, a: &Attribute, b: &Attribute) -> f64 {
    match model.edge_subst() {
        EdgeSubst::Zero => 0.0,
        EdgeSubst::LabelDelta(c) => {
            if a == b {
                0.0
            } else {
                c
            }
        }
    }
}

/// Cost of the map `forward` (entry `m` = removal): vertex cost plus half the
/// edge cost, the edge cost summing over ordered vertex pairs of both graphs.
pub fn transformation_cost(
    model: &CostModel,
    forward: &[usize],
    g: &AttributedGraph,
    g2: &AttributedGraph,
) -> f64 {
    let (n, m) = (g.order(), g2.order());
    let mut preimage = vec![None; m];
    for (i, &k) in forward.iter().enumerate() {
        if k < m {
            assert!(preimage[k].is_none(), "map is not injective");
            preimage[k] = Some(i);
        }
    }
    let mut vertex = 0.0;
    for (i, &k) in forward.iter().enumerate() {
        vertex += if k < m {
            vertex_subst(model, g.vertex_attr(i), g2.vertex_attr(k))
        } else {
            model.c_vr()
        };
    }
    vertex += preimage.iter().filter(|p| p.is_none()).count() as f64 * model.c_vi();

    let mut edge = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let Some(a) = g.edge_attr(i, j) else { continue };
            let (k, l) = (forward[i], forward[j]);
            edge += match (k < m && l < m).then(|| g2.edge_attr(k, l)).flatten() {
                Some(b) => edge_subst(model, a, b),
                None => model.c_er(),
            };
        }
    }
    for k in 0..m {
        for l in 0..m {
            if k == l || !g2.has_edge(k, l) {
                continue;
            }
            let matched = match (preimage[k], preimage[l]) {
                (Some(i), Some(j)) => g.has_edge(i, j),
                _ => false,
            };
            if !matched {
                edge += model.c_ei();
            }
        }
    }
    vertex + 0.5 * edge
}

/// Every injective partial map from `n` vertices into `m`.
pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn extend(
        prefix: &mut Vec<usize>,
        used: &mut Vec<bool>,
        n: usize,
        m: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=m {
            if k < m && used[k] {
                continue;
            }
            if k < m {
                used[k] = true;
            }
            prefix.push(k);
            extend(prefix, used, n, m, out);
            prefix.pop();
            if k < m {
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; m], n, m, &mut out);
    out
}

/// Exact GED by enumeration.
pub fn ged(model: &CostModel, g: &AttributedGraph, g2: &AttributedGraph) -> f64 {
    all_maps(g.order(), g2.order())
        .iter()
        .map(|f| transformation_cost(model, f, g, g2))
        .fold(f64::INFINITY, f64::min)
}

/// Minimum over all permutations of `sum_i rows[i][perm[i]]`.
pub fn brute_lsap(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    // Heap's algorithm.
    let mut c = vec![0; n];
    let eval = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| rows[i][j]).sum::<f64>();
    best = best.min(eval(&perm));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(eval(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    if n == 0 {
        0.0
    } else {
        best
    }
}

/// Part of the total transformation cost that depends on the attribute `a`
/// of median vertex `i`.
pub fn vertex_objective(
    model: &CostModel,
    i: usize,
    a: &Attribute,
    transformations: &[Transformation],
    collection: &[AttributedGraph],
) -> f64 {
    transformations
        .iter()
        .zip(collection)
        .filter_map(|(t, g)| t.image(i).map(|k| vertex_subst(model, a, g.vertex_attr(k))))
        .sum()
}

/// Part of the total edge cost that depends on the median pair `(i, j)`
/// being a non-edge (`None`) or an edge with attribute `a`.
pub fn pair_objective(
    model: &CostModel,
    (i, j): (usize, usize),
    a: Option<&Attribute>,
    transformations: &[Transformation],
    collection: &[AttributedGraph],
) -> f64 {
    let mut cost = 0.0;
    for (t, g) in transformations.iter().zip(collection) {
        let target = match (t.image(i), t.image(j)) {
            (Some(k), Some(l)) => g.edge_attr(k, l),
            _ => None,
        };
        cost += match (a, target) {
            (Some(a), Some(b)) => edge_subst(model, a, b),
            (Some(_), None) => model.c_er(),
            (None, Some(_)) => model.c_ei(),
            (None, None) => 0.0,
        };
    }
    cost
}

/// Labels seen in the collection and the median, plus one unused label.
pub fn candidate_labels(
    median: &AttributedGraph,
    collection: &[AttributedGraph],
) -> (Vec<u32>, Vec<u32>) {
    let mut vertex: Vec<u32> = Vec::new();
    let mut edge: Vec<u32> = Vec::new();
    for g in collection.iter().chain(std::iter::once(median)) {
        vertex.extend(g.vertex_attrs().iter().filter_map(Attribute::as_label));
        edge.extend(g.edges().filter_map(|(_, _, a)| a.as_label()));
    }
    for v in [&mut vertex, &mut edge] {
        v.sort_unstable();
        v.dedup();
        let fresh = v.last().copied().unwrap_or(0) + 1;
        v.push(fresh);
    }
    (vertex, edge)
}

/// Sanity checks that the sets agree with the transformations.
pub fn check_sets(sets: &SubstitutionSets, transformations: &[Transformation]) {
    for i in 0..sets.order() {
        let expected = transformations
            .iter()
            .filter(|t| t.image(i).is_some())
            .count();
        assert_eq!(sets.vertex_set(i).len(), expected);
    }
}

pub fn random_labeled<R: Rng>(rng: &mut R, id: &str, max_order: usize) -> AttributedGraph {
    let order = rng.random_range(0..=max_order);
    let density = rng.random_range(0.2..0.8);
    random_labeled_graph(rng, id, order, 3, 2, density)
}

pub fn random_vector<R: Rng>(rng: &mut R, id: &str, max_order: usize) -> AttributedGraph {
    let order = rng.random_range(0..=max_order);
    let density = rng.random_range(0.2..0.8);
    random_vector_graph(rng, id, order, 4.0, density)
}

/// A few valid labeled cost models besides the default one.
pub fn labeled_models() -> Vec<CostModel> {
    let m = |vs, es, vr, vi, er, ei| {
        CostModel::new(
            VertexSubst::LabelDelta(vs),
            EdgeSubst::LabelDelta(es),
            vr,
            vi,
            er,
            ei,
        )
        .unwrap()
    };
    vec![
        CostModel::default_labeled(),
        m(2.0, 2.0, 1.0, 4.0, 1.0, 4.0),
        m(1.0, 3.0, 2.0, 2.0, 2.0, 1.5),
    ]
}
