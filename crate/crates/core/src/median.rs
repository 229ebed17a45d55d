//! Set-median initialization and block coordinate descent towards a
//! generalized median graph.
//!
//! For fixed transformations `π_p` from the median `M` (order `n̄`) to every
//! graph `G_p`, the sum of transformation costs separates into independent
//! per-vertex and per-pair terms:
//!
//! - a vertex `i` only pays substitution costs towards the vertices in `S_i`
//!   (the images `π_p(i)` that are not removals), minimized by a majority label
//!   or by the mean vector;
//! - a pair `(i, j)` pays `c_es` per mismatching label and `c_er` per graph in
//!   which it is not substituted to an edge if it is an edge of `M`, and
//!   `c_ei` per edge in `S_{i,j}` otherwise.
//!
//! The graph update therefore minimizes the objective exactly, and the
//! transformation update keeps a previous transformation whenever the solver
//! does not match it, so the tracked upper bound on the SOD never increases.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::{CostModel, EdgeSubst, VertexSubst, COST_TOL};
use crate::error::{Error, Result};
use crate::ged::{compute_ged, GedResult, GedSolverConfig};
use crate::graph::{Attribute, AttributedGraph, Transformation};
use crate::seed::derive_seed;

/// Vector coordinates closer than this are considered unchanged between iterations.
pub const CONVERGENCE_TOL: f64 = 1e-9;

const PHASE1_STREAM: u64 = 1;
const PHASE2_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DescentConfig {
    pub max_iters: usize,
    /// Solver for the pairwise distances of the set-median.
    pub phase1: GedSolverConfig,
    /// Solver for the transformation updates of the descent.
    pub phase2: GedSolverConfig,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig {
            max_iters: 100,
            phase1: GedSolverConfig::default(),
            phase2: GedSolverConfig::default(),
        }
    }
}

impl DescentConfig {
    pub fn with_solvers(phase1: GedSolverConfig, phase2: GedSolverConfig) -> Self {
        DescentConfig {
            phase1,
            phase2,
            ..Default::default()
        }
    }
}

/// Current median, its transformations to the collection and their total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianState {
    pub median: AttributedGraph,
    pub transformations: Vec<Transformation>,
    /// Sum of the transformation costs; an upper bound on the SOD of `median`.
    pub sod_upper: f64,
    pub iteration: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetMedian {
    pub index: usize,
    pub sod: f64,
    /// `pairwise[a][b]` transforms graph `a` into graph `b`; the diagonal is the identity.
    pub pairwise: Vec<Vec<GedResult>>,
}

impl SetMedian {
    pub fn transformations(&self) -> Vec<Transformation> {
        self.pairwise[self.index]
            .iter()
            .map(|r| r.transformation.clone())
            .collect()
    }
}

/// Substitutions towards each median vertex and vertex pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionSets {
    order: usize,
    collection_size: usize,
    /// `vertex_sets[i]`: `(p, π_p(i))` for every `p` substituting `i`.
    vertex_sets: Vec<Vec<(usize, usize)>>,
    /// Upper-triangular `(i, j)`, `i < j`: `(p, (π_p(i), π_p(j)))` for every
    /// `p` mapping the pair onto an edge of `G_p`.
    edge_sets: Vec<Vec<(usize, (usize, usize))>>,
}

impl SubstitutionSets {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn collection_size(&self) -> usize {
        self.collection_size
    }

    pub fn vertex_set(&self, i: usize) -> &[(usize, usize)] {
        &self.vertex_sets[i]
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * self.order + j
    }

    /// Set of the unordered pair `{i, j}`, `i != j`; mapped edges follow `(π_p(i), π_p(j))`
    /// for `i < j`.
    pub fn edge_set(&self, i: usize, j: usize) -> &[(usize, (usize, usize))] {
        assert_ne!(i, j, "pairs exclude the diagonal");
        &self.edge_sets[self.pair_index(i, j)]
    }
}

fn check_collection(model: &CostModel, collection: &[AttributedGraph]) -> Result<()> {
    if collection.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let kind = collection.iter().find_map(AttributedGraph::vertex_kind);
    for g in collection {
        model.check_graph(g)?;
        if let (Some(a), Some(b)) = (kind, g.vertex_kind()) {
            if a != b {
                return Err(Error::AttributeMismatch(format!(
                    "graph `{}` has {b:?} vertex attributes, collection has {a:?}",
                    g.id()
                )));
            }
        }
    }
    Ok(())
}

/// The collection graph minimizing the sum of estimated distances to all others.
///
/// All ordered pairs are solved (heuristics are not symmetric); ties go to the
/// smallest index.
pub fn set_median(
    model: &CostModel,
    collection: &[AttributedGraph],
    solver: &GedSolverConfig,
) -> Result<SetMedian> {
    check_collection(model, collection)?;
    let size = collection.len();
    let pairwise: Vec<Vec<GedResult>> = (0..size)
        .into_par_iter()
        .map(|a| {
            (0..size)
                .map(|b| {
                    if a == b {
                        return Ok(GedResult {
                            transformation: Transformation::identity(collection[a].order()),
                            cost: 0.0,
                            is_exact: true,
                        });
                    }
                    let cfg = solver.with_seed(derive_seed(
                        solver.seed,
                        &[PHASE1_STREAM, a as u64, b as u64],
                    ));
                    compute_ged(model, &collection[a], &collection[b], &cfg)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let sods: Vec<f64> = pairwise
        .iter()
        .map(|row| row.iter().map(|r| r.cost).sum())
        .collect();
    let mut index = 0;
    for (p, &s) in sods.iter().enumerate() {
        if s < sods[index] {
            index = p;
        }
    }
    Ok(SetMedian {
        index,
        sod: sods[index],
        pairwise,
    })
}

/// Builds `S_i` and `S_{i,j}` from the current transformations.
pub fn collect_substitution_sets(
    median_order: usize,
    transformations: &[Transformation],
    collection: &[AttributedGraph],
) -> SubstitutionSets {
    let n = median_order;
    let mut vertex_sets = vec![Vec::new(); n];
    let mut edge_sets = vec![Vec::new(); n * n];
    for (p, (t, g)) in transformations.iter().zip(collection).enumerate() {
        debug_assert_eq!(t.source_order(), n);
        for (i, set) in vertex_sets.iter_mut().enumerate() {
            if let Some(k) = t.image(i) {
                set.push((p, k));
            }
        }
        for i in 0..n {
            let Some(k) = t.image(i) else { continue };
            for j in (i + 1)..n {
                if let Some(l) = t.image(j) {
                    if g.has_edge(k, l) {
                        edge_sets[i * n + j].push((p, (k, l)));
                    }
                }
            }
        }
    }
    SubstitutionSets {
        order: n,
        collection_size: collection.len(),
        vertex_sets,
        edge_sets,
    }
}

/// Most frequent label, smallest label among ties.
fn majority_label(labels: impl Iterator<Item = u32>) -> Option<(u32, usize)> {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_default() += 1;
    }
    counts.into_iter().fold(None, |best, (l, c)| match best {
        Some((_, bc)) if bc >= c => best,
        _ => Some((l, c)),
    })
}

/// Majority label of the vertices substituted to each median vertex.
/// Vertices never substituted keep their current label.
pub fn update_vertex_labels(
    sets: &SubstitutionSets,
    collection: &[AttributedGraph],
    current: &[Attribute],
) -> Vec<Attribute> {
    (0..sets.order())
        .map(|i| {
            let labels = sets.vertex_set(i).iter().map(|&(p, k)| {
                collection[p]
                    .vertex_attr(k)
                    .as_label()
                    .expect("label collection")
            });
            match majority_label(labels) {
                Some((l, _)) => Attribute::Label(l),
                None => current[i].clone(),
            }
        })
        .collect()
}

/// Mean vector of the vertices substituted to each median vertex.
/// Vertices never substituted keep their current vector.
pub fn update_vertex_vectors(
    sets: &SubstitutionSets,
    collection: &[AttributedGraph],
    current: &[Attribute],
) -> Vec<Attribute> {
    (0..sets.order())
        .map(|i| {
            let set = sets.vertex_set(i);
            if set.is_empty() {
                return current[i].clone();
            }
            let dim = collection[set[0].0]
                .vertex_attr(set[0].1)
                .as_vector()
                .expect("vector collection")
                .len();
            let mut mean = vec![0.0; dim];
            for &(p, k) in set {
                let v = collection[p]
                    .vertex_attr(k)
                    .as_vector()
                    .expect("vector collection");
                for (m, x) in mean.iter_mut().zip(v) {
                    *m += x;
                }
            }
            let count = set.len() as f64;
            mean.iter_mut().for_each(|m| *m /= count);
            Attribute::Vector(mean)
        })
        .collect()
}

/// Dense symmetric `n̄ x n̄` edge matrix, `None` for non-edges.
pub type EdgeMatrix = Vec<Option<Attribute>>;

fn edge_label(collection: &[AttributedGraph], p: usize, (k, l): (usize, usize)) -> &Attribute {
    collection[p]
        .edge_attr(k, l)
        .expect("substituted pairs are edges")
}

/// Labeled edges: each pair gets the majority substituted label, and is an
/// edge iff that label's count strictly exceeds
/// `|G| c_er / c_es + |S_ij| (1 - (c_er + c_ei) / c_es)`.
pub fn update_edges_labeled(
    sets: &SubstitutionSets,
    collection: &[AttributedGraph],
    model: &CostModel,
) -> EdgeMatrix {
    let EdgeSubst::LabelDelta(c_es) = model.edge_subst() else {
        panic!("labeled edge update needs label edge costs");
    };
    let (c_er, c_ei) = (model.c_er(), model.c_ei());
    let n = sets.order();
    let graphs = sets.collection_size() as f64;
    let mut edges = vec![None; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let set = sets.edge_set(i, j);
            let labels = set.iter().map(|&(p, kl)| {
                edge_label(collection, p, kl)
                    .as_label()
                    .expect("labeled edges")
            });
            let Some((label, count)) = majority_label(labels) else {
                continue;
            };
            let threshold = graphs * c_er / c_es + set.len() as f64 * (1.0 - (c_er + c_ei) / c_es);
            if count as f64 > threshold {
                edges[i * n + j] = Some(Attribute::Label(label));
                edges[j * n + i] = Some(Attribute::Label(label));
            }
        }
    }
    edges
}

/// Unlabeled edges: a pair is an edge iff `|S_ij| > |G| c_er / (c_er + c_ei)`.
/// New edges carry the majority substituted attribute (label 1 on unlabeled data).
pub fn update_edges_unlabeled(
    sets: &SubstitutionSets,
    collection: &[AttributedGraph],
    model: &CostModel,
) -> EdgeMatrix {
    let (c_er, c_ei) = (model.c_er(), model.c_ei());
    let n = sets.order();
    let graphs = sets.collection_size() as f64;
    let mut edges = vec![None; n * n];
    if c_er + c_ei <= 0.0 {
        return edges;
    }
    let threshold = graphs * c_er / (c_er + c_ei);
    for i in 0..n {
        for j in (i + 1)..n {
            let set = sets.edge_set(i, j);
            if (set.len() as f64) <= threshold {
                continue;
            }
            let attr = match majority_label(
                set.iter()
                    .filter_map(|&(p, kl)| edge_label(collection, p, kl).as_label()),
            ) {
                Some((l, _)) => Attribute::Label(l),
                None => edge_label(collection, set[0].0, set[0].1).clone(),
            };
            edges[i * n + j] = Some(attr.clone());
            edges[j * n + i] = Some(attr);
        }
    }
    edges
}

/// Exact minimization of the total transformation cost over the median graph,
/// transformations fixed.
pub fn update_graph(
    model: &CostModel,
    median: &AttributedGraph,
    transformations: &[Transformation],
    collection: &[AttributedGraph],
) -> AttributedGraph {
    let sets = collect_substitution_sets(median.order(), transformations, collection);
    let vertices = match model.vertex_subst() {
        VertexSubst::LabelDelta(_) => {
            update_vertex_labels(&sets, collection, median.vertex_attrs())
        }
        VertexSubst::SquaredEuclidean => {
            update_vertex_vectors(&sets, collection, median.vertex_attrs())
        }
    };
    let edges = match model.edge_subst() {
        EdgeSubst::LabelDelta(_) => update_edges_labeled(&sets, collection, model),
        EdgeSubst::Zero => update_edges_unlabeled(&sets, collection, model),
    };
    AttributedGraph::from_parts(median.id().to_string(), vertices, edges)
}

/// Outcome of [`update_transformations`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransformationUpdate {
    pub transformations: Vec<Transformation>,
    pub costs: Vec<f64>,
    pub sod_upper: f64,
    /// Number of transformations replaced.
    pub changed: usize,
}

/// Re-solves GED from `median` to every graph. A new transformation replaces
/// the previous one only if it is strictly cheaper than the previous one
/// evaluated against the current median.
pub fn update_transformations(
    model: &CostModel,
    median: &AttributedGraph,
    collection: &[AttributedGraph],
    previous: &[Transformation],
    solver: &GedSolverConfig,
) -> Result<TransformationUpdate> {
    let updated: Vec<(Transformation, f64, bool)> = collection
        .par_iter()
        .zip(previous)
        .enumerate()
        .map(|(p, (g, prev))| {
            let cfg = solver.with_seed(derive_seed(solver.seed, &[PHASE2_STREAM, p as u64]));
            let fresh = compute_ged(model, median, g, &cfg)?;
            let prev_cost = model.cost_unchecked(prev, median, g);
            // Ties keep the previous transformation so fixed points stay fixed.
            Ok(if fresh.cost < prev_cost - COST_TOL {
                (fresh.transformation, fresh.cost, true)
            } else {
                (prev.clone(), prev_cost, false)
            })
        })
        .collect::<Result<_>>()?;
    let changed = updated.iter().filter(|u| u.2).count();
    let costs: Vec<f64> = updated.iter().map(|u| u.1).collect();
    Ok(TransformationUpdate {
        sod_upper: costs.iter().sum(),
        transformations: updated.into_iter().map(|u| u.0).collect(),
        costs,
        changed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// 0 for the set-median.
    pub iteration: usize,
    pub sod_upper: f64,
    /// Transformations replaced in this iteration.
    pub changed: usize,
    /// Time since the start of the phase that produced this record.
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MedianResult {
    pub median: AttributedGraph,
    pub transformations: Vec<Transformation>,
    /// Cost of each transformation against the final median.
    pub costs: Vec<f64>,
    pub set_median_index: usize,
    pub set_median_sod: f64,
    /// Record 0 is the set-median, then one record per descent iteration.
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
    pub phase1_time: Duration,
    pub phase2_time: Duration,
}

impl MedianResult {
    /// Final SOD upper bound.
    pub fn sod(&self) -> f64 {
        self.trace
            .last()
            .map_or(self.set_median_sod, |r| r.sod_upper)
    }

    /// Number of descent iterations run.
    pub fn iterations(&self) -> usize {
        self.trace.len() - 1
    }
}

/// Set-median initialization (phase 1) followed by the alternating descent
/// (phase 2), until neither the median nor any transformation changes, or
/// `max_iters` iterations.
pub fn compute_median(
    model: &CostModel,
    collection: &[AttributedGraph],
    config: &DescentConfig,
) -> Result<MedianResult> {
    check_collection(model, collection)?;
    config.phase1.validate()?;
    config.phase2.validate()?;
    if config.max_iters == 0 {
        return Err(Error::InvalidConfig("max_iters must be >= 1".into()));
    }

    let start = Instant::now();
    let sm = set_median(model, collection, &config.phase1)?;
    let phase1_time = start.elapsed();
    let mut state = MedianState {
        median: collection[sm.index].clone().with_id("median"),
        transformations: sm.transformations(),
        sod_upper: sm.sod,
        iteration: 0,
    };
    let mut costs: Vec<f64> = sm.pairwise[sm.index].iter().map(|r| r.cost).collect();
    let mut trace = vec![IterationRecord {
        iteration: 0,
        sod_upper: sm.sod,
        changed: 0,
        elapsed: phase1_time,
    }];
    log::info!(
        "set-median: graph {} (`{}`), sod {:.6}, {:.3?}",
        sm.index,
        collection[sm.index].id(),
        sm.sod,
        phase1_time
    );

    let start = Instant::now();
    let mut converged = false;
    while state.iteration < config.max_iters {
        let median = update_graph(model, &state.median, &state.transformations, collection);
        let update = update_transformations(
            model,
            &median,
            collection,
            &state.transformations,
            &config.phase2,
        )?;
        let stable = update.changed == 0 && median.approx_eq(&state.median, CONVERGENCE_TOL);
        debug_assert!(update.sod_upper <= state.sod_upper + 1e-6 * state.sod_upper.max(1.0));

        state = MedianState {
            median,
            transformations: update.transformations,
            sod_upper: update.sod_upper,
            iteration: state.iteration + 1,
        };
        costs = update.costs;
        let record = IterationRecord {
            iteration: state.iteration,
            sod_upper: state.sod_upper,
            changed: update.changed,
            elapsed: start.elapsed(),
        };
        log::info!(
            "iteration {}: sod_upper {:.6}, {} transformations changed, {:.3?}",
            record.iteration,
            record.sod_upper,
            record.changed,
            record.elapsed
        );
        trace.push(record);
        if stable {
            converged = true;
            break;
        }
    }
    let phase2_time = start.elapsed();

    Ok(MedianResult {
        median: state.median,
        transformations: state.transformations,
        costs,
        set_median_index: sm.index,
        set_median_sod: sm.sod,
        trace,
        converged,
        phase1_time,
        phase2_time,
    })
}
