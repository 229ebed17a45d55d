//! Integer projected fixed point refinement of a transformation.
//!
//! A transformation is a permutation matrix `x` over the augmented
//! `(n+m) x (m+n)` layout (see [`AssignmentProblem::ged_layout`]). Its cost is
//! the quadratic form `f(x) = <L, x> + ½ <x, Q x>` where `L` holds vertex
//! costs and `Q` the edge costs of pairs of assignments. IPFP relaxes `x` to
//! the doubly stochastic polytope and alternates an LSAP on the gradient with
//! an exact line search along the segment to its solution.

use crate::cost::{CostModel, COST_TOL};
use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Transformation};
use crate::lsap::{solve_lsap, AssignmentProblem, FORBIDDEN};

use super::bipartite::assignment_to_transformation;
use super::{GedResult, GedSolverConfig};

pub(crate) struct QuadraticGed<'a> {
    model: &'a CostModel,
    g: &'a AttributedGraph,
    g2: &'a AttributedGraph,
    n: usize,
    m: usize,
    adj: Vec<Vec<usize>>,
    adj2: Vec<Vec<usize>>,
    linear: Vec<f64>,
}

impl<'a> QuadraticGed<'a> {
    pub(crate) fn new(
        model: &'a CostModel,
        g: &'a AttributedGraph,
        g2: &'a AttributedGraph,
    ) -> Self {
        let (n, m) = (g.order(), g2.order());
        let size = n + m;
        let mut linear = vec![0.0; size * size];
        for i in 0..n {
            for k in 0..m {
                linear[i * size + k] = model.vsub(g.vertex_attr(i), g2.vertex_attr(k));
            }
            linear[i * size + m + i] = model.c_vr();
        }
        for k in 0..m {
            linear[(n + k) * size + k] = model.c_vi();
        }
        QuadraticGed {
            model,
            g,
            g2,
            n,
            m,
            adj: (0..n).map(|i| g.neighbors(i).collect()).collect(),
            adj2: (0..m).map(|k| g2.neighbors(k).collect()).collect(),
            linear,
        }
    }

    fn size(&self) -> usize {
        self.n + self.m
    }

    fn permitted(&self, r: usize, c: usize) -> bool {
        let (n, m) = (self.n, self.m);
        match (r < n, c < m) {
            (true, true) | (false, false) => true,
            (true, false) => c - m == r,
            (false, true) => r - n == c,
        }
    }

    pub(crate) fn to_matrix(&self, t: &Transformation) -> Vec<f64> {
        let (n, m, size) = (self.n, self.m, self.size());
        let mut x = vec![0.0; size * size];
        let mut removed = Vec::new();
        for i in 0..n {
            match t.image(i) {
                Some(k) => x[i * size + k] = 1.0,
                None => {
                    x[i * size + m + i] = 1.0;
                    removed.push(i);
                }
            }
        }
        let mut matched_targets = Vec::new();
        for k in 0..m {
            if t.preimage(k).is_none() {
                x[(n + k) * size + k] = 1.0;
            } else {
                matched_targets.push(k);
            }
        }
        // Epsilon rows of substituted targets pair with epsilon columns of
        // substituted sources; any bijection works since those cells are free.
        let matched_sources = (0..n).filter(|i| !removed.contains(i));
        for (&k, i) in matched_targets.iter().zip(matched_sources) {
            x[(n + k) * size + m + i] = 1.0;
        }
        x
    }

    /// `Q x` on every cell (zero on forbidden cells and the free block).
    pub(crate) fn apply_q(&self, x: &[f64]) -> Vec<f64> {
        let (n, m, size) = (self.n, self.m, self.size());
        let (c_er, c_ei) = (self.model.c_er(), self.model.c_ei());
        let xs = |j: usize, l: usize| x[j * size + l];
        let removal = |j: usize| x[j * size + m + j];
        let insertion = |l: usize| x[(n + l) * size + l];
        let row_sum: Vec<f64> = (0..n).map(|j| (0..m).map(|l| xs(j, l)).sum()).collect();
        let col_sum: Vec<f64> = (0..m).map(|l| (0..n).map(|j| xs(j, l)).sum()).collect();

        let mut out = vec![0.0; size * size];
        for i in 0..n {
            for k in 0..m {
                let mut v = 0.0;
                for &j in &self.adj[i] {
                    let a = self.g.edge_attr(i, j).expect("adjacent");
                    for &l in &self.adj2[k] {
                        let b = self.g2.edge_attr(k, l).expect("adjacent");
                        v += (self.model.esub(a, b) - c_er - c_ei) * xs(j, l);
                    }
                    v += c_er * (row_sum[j] - xs(j, k) + removal(j));
                }
                for &l in &self.adj2[k] {
                    v += c_ei * (col_sum[l] - xs(i, l) + insertion(l));
                }
                out[i * size + k] = v;
            }
            out[i * size + m + i] = c_er
                * self.adj[i]
                    .iter()
                    .map(|&j| row_sum[j] + removal(j))
                    .sum::<f64>();
        }
        for k in 0..m {
            out[(n + k) * size + k] = c_ei
                * self.adj2[k]
                    .iter()
                    .map(|&l| col_sum[l] + insertion(l))
                    .sum::<f64>();
        }
        out
    }

    /// `f(x) = <L, x> + ½ <x, Q x>`.
    #[cfg(test)]
    pub(crate) fn objective(&self, x: &[f64]) -> f64 {
        let qx = self.apply_q(x);
        x.iter()
            .zip(&self.linear)
            .zip(&qx)
            .map(|((xi, li), qi)| xi * (li + 0.5 * qi))
            .sum()
    }

    /// Discrete transformation minimizing `<costs, x>` over permitted cells.
    fn lsap_on(&self, costs: &[f64]) -> Result<Transformation> {
        let size = self.size();
        let mut masked = vec![FORBIDDEN; size * size];
        for r in 0..size {
            for c in 0..size {
                if self.permitted(r, c) {
                    masked[r * size + c] = costs[r * size + c];
                }
            }
        }
        let a = solve_lsap(&AssignmentProblem::new(size, masked)?)?;
        Ok(assignment_to_transformation(&a.row_to_col, self.n, self.m))
    }
}

/// Refines `init` with IPFP. The result is never worse than `init`: the best
/// discrete iterate is kept, `init` included.
pub fn ged_ipfp(
    model: &CostModel,
    g: &AttributedGraph,
    g2: &AttributedGraph,
    init: &Transformation,
    config: &GedSolverConfig,
) -> Result<GedResult> {
    init.check_orders(g, g2)
        .map_err(|e| Error::InvalidConfig(format!("invalid IPFP initialization: {e}")))?;
    model.check_pair(g, g2)?;
    let q = QuadraticGed::new(model, g, g2);
    let size = q.size();

    let mut best = GedResult::evaluate(model, init.clone(), g, g2, false);
    if size == 0 {
        return Ok(best);
    }
    let mut x = q.to_matrix(init);
    let mut qx = q.apply_q(&x);

    for _ in 0..config.ipfp_max_iters {
        let grad: Vec<f64> = q.linear.iter().zip(&qx).map(|(l, v)| l + v).collect();
        let b = q.lsap_on(&grad)?;
        let candidate = GedResult::evaluate(model, b.clone(), g, g2, false);
        if candidate.cost < best.cost - COST_TOL {
            best = candidate;
        }

        let bx = q.to_matrix(&b);
        let d: Vec<f64> = bx.iter().zip(&x).map(|(b, x)| b - x).collect();
        let slope: f64 = grad.iter().zip(&d).map(|(g, d)| g * d).sum();
        if slope >= -config.ipfp_tol {
            break;
        }
        let qd = q.apply_q(&d);
        let curvature = 0.5 * d.iter().zip(&qd).map(|(d, q)| d * q).sum::<f64>();
        let step = if curvature > 0.0 {
            (-slope / (2.0 * curvature)).min(1.0)
        } else {
            1.0
        };
        for ((xi, di), (qxi, qdi)) in x.iter_mut().zip(&d).zip(qx.iter_mut().zip(&qd)) {
            *xi += step * di;
            *qxi += step * qdi;
        }
        if step * d.iter().map(|v| v.abs()).fold(0.0, f64::max) < config.ipfp_tol {
            break;
        }
    }

    // Project the relaxed solution: the permutation with maximal overlap.
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    let projected = GedResult::evaluate(model, q.lsap_on(&neg)?, g, g2, false);
    if projected.cost < best.cost - COST_TOL {
        best = projected;
    }
    Ok(best)
}
