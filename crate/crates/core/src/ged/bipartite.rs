//! Bipartite GED upper bound: one LSAP over vertices whose substitution costs
//! include the optimal assignment of the incident edges.

use crate::cost::CostModel;
use crate::error::Result;
use crate::graph::{AttributedGraph, Transformation};
use crate::lsap::{solve_lsap, AssignmentProblem};

use super::GedResult;

/// Minimal cost of transforming the edges incident to `i` in `g` into the
/// edges incident to `k` in `g2`, edges treated independently.
fn incident_edge_cost(
    model: &CostModel,
    g: &AttributedGraph,
    i: usize,
    g2: &AttributedGraph,
    k: usize,
) -> Result<f64> {
    let left: Vec<usize> = g.neighbors(i).collect();
    let right: Vec<usize> = g2.neighbors(k).collect();
    if left.is_empty() || right.is_empty() {
        return Ok(left.len() as f64 * model.c_er() + right.len() as f64 * model.c_ei());
    }
    let p = AssignmentProblem::ged_layout(
        left.len(),
        right.len(),
        |a, b| {
            model.esub(
                g.edge_attr(i, left[a]).expect("neighbor edge"),
                g2.edge_attr(k, right[b]).expect("neighbor edge"),
            )
        },
        |_| model.c_er(),
        |_| model.c_ei(),
    )?;
    Ok(solve_lsap(&p)?.objective)
}

/// Bipartite cost matrix in the augmented LSAP layout.
pub(crate) fn bipartite_problem(
    model: &CostModel,
    g: &AttributedGraph,
    g2: &AttributedGraph,
) -> Result<AssignmentProblem> {
    let (n, m) = (g.order(), g2.order());
    let mut subst = vec![0.0; n * m];
    for i in 0..n {
        for k in 0..m {
            subst[i * m + k] = model.vsub(g.vertex_attr(i), g2.vertex_attr(k))
                + 0.5 * incident_edge_cost(model, g, i, g2, k)?;
        }
    }
    AssignmentProblem::ged_layout(
        n,
        m,
        |i, k| subst[i * m + k],
        |i| model.c_vr() + 0.5 * g.degree(i) as f64 * model.c_er(),
        |k| model.c_vi() + 0.5 * g2.degree(k) as f64 * model.c_ei(),
    )
}

/// Converts an augmented-layout assignment into a transformation.
pub(crate) fn assignment_to_transformation(
    row_to_col: &[usize],
    n: usize,
    m: usize,
) -> Transformation {
    let forward = row_to_col[..n]
        .iter()
        .map(|&c| if c < m { c } else { m })
        .collect();
    Transformation::from_forward(forward, n, m).expect("assignment rows are injective")
}

/// Solves the bipartite problem with source and target vertices visited in
/// the given orders; different orders break LSAP ties differently.
pub(crate) fn bipartite_permuted(
    model: &CostModel,
    g: &AttributedGraph,
    g2: &AttributedGraph,
    base: &AssignmentProblem,
    row_perm: &[usize],
    col_perm: &[usize],
) -> Result<GedResult> {
    let (n, m) = (g.order(), g2.order());
    let size = n + m;
    // Permute the substitution block; the other blocks follow their diagonals.
    let row_of = |r: usize| {
        if r < n {
            row_perm[r]
        } else {
            n + col_perm[r - n]
        }
    };
    let col_of = |c: usize| {
        if c < m {
            col_perm[c]
        } else {
            m + row_perm[c - m]
        }
    };
    let mut costs = vec![0.0; size * size];
    for r in 0..size {
        for c in 0..size {
            costs[r * size + c] = base.get(row_of(r), col_of(c));
        }
    }
    let p = AssignmentProblem::new(size, costs)?;
    let a = solve_lsap(&p)?;
    let mut forward = vec![m; n];
    for r in 0..n {
        let c = a.row_to_col[r];
        if c < m {
            forward[row_perm[r]] = col_perm[c];
        }
    }
    let t = Transformation::from_forward(forward, n, m)?;
    Ok(GedResult::evaluate(model, t, g, g2, false))
}

/// Bipartite GED upper bound. The returned cost is the true cost of the
/// transformation read off the LSAP solution, not the LSAP objective.
pub fn ged_bipartite(
    model: &CostModel,
    g: &AttributedGraph,
    g2: &AttributedGraph,
) -> Result<GedResult> {
    model.check_pair(g, g2)?;
    let p = bipartite_problem(model, g, g2)?;
    let a = solve_lsap(&p)?;
    let t = assignment_to_transformation(&a.row_to_col, g.order(), g2.order());
    Ok(GedResult::evaluate(model, t, g, g2, false))
}
