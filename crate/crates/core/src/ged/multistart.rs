use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::cost::CostModel;
use crate::error::Result;
use crate::graph::{AttributedGraph, Transformation};
use crate::seed::rng_for;

use super::bipartite::{bipartite_permuted, bipartite_problem};
use super::{ged_bipartite, ged_exact, ged_ipfp, GedMethod, GedResult, GedSolverConfig};

/// A random transformation between graphs of orders `n` and `m`.
///
/// With `maximal`, `min(n, m)` uniformly chosen source vertices are matched to
/// uniformly chosen targets; otherwise the number of substitutions is itself
/// uniform in `0..=min(n, m)`.
pub fn random_transformation<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    maximal: bool,
) -> Transformation {
    let mut sources: Vec<usize> = (0..n).collect();
    let mut targets: Vec<usize> = (0..m).collect();
    sources.shuffle(rng);
    targets.shuffle(rng);
    let pairs = if maximal {
        n.min(m)
    } else {
        rng.random_range(0..=n.min(m))
    };
    let mut forward = vec![m; n];
    for (&i, &k) in sources.iter().zip(&targets).take(pairs) {
        forward[i] = k;
    }
    Transformation::from_forward(forward, n, m).expect("random map is injective")
}

/// Best result over `config.multistart` starts of the base method.
///
/// Start 0 is the plain bipartite solution. For IPFP the other starts refine
/// random maximal transformations; for bipartite they re-solve the LSAP with
/// randomly permuted vertex orders, which breaks ties differently. Start `s`
/// draws from a stream derived from `(config.seed, s)`, and ties between
/// starts go to the smallest forward map, so the result does not depend on
/// scheduling.
pub fn ged_multistart(
    model: &CostModel,
    g: &AttributedGraph,
    g2: &AttributedGraph,
    config: &GedSolverConfig,
) -> Result<GedResult> {
    config.validate()?;
    model.check_pair(g, g2)?;
    let (n, m) = (g.order(), g2.order());
    let base = ged_bipartite(model, g, g2)?;
    let starts = 1..config.multistart;

    let results: Vec<GedResult> = match config.method {
        GedMethod::Exact => return ged_exact(model, g, g2, config.exact_order_cap),
        GedMethod::Bipartite | GedMethod::MultistartBipartite => {
            let problem = bipartite_problem(model, g, g2)?;
            let mut out = starts
                .into_par_iter()
                .map(|s| {
                    let mut rng = rng_for(config.seed, &[s as u64]);
                    let mut rows: Vec<usize> = (0..n).collect();
                    let mut cols: Vec<usize> = (0..m).collect();
                    rows.shuffle(&mut rng);
                    cols.shuffle(&mut rng);
                    bipartite_permuted(model, g, g2, &problem, &rows, &cols)
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(base);
            out
        }
        GedMethod::Ipfp | GedMethod::MultistartIpfp => {
            let mut out = starts
                .into_par_iter()
                .map(|s| {
                    let mut rng = rng_for(config.seed, &[s as u64]);
                    let init = random_transformation(&mut rng, n, m, true);
                    ged_ipfp(model, g, g2, &init, config)
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(ged_ipfp(model, g, g2, &base.transformation, config)?);
            out
        }
    };
    Ok(results
        .into_iter()
        .reduce(|best, r| if r.better_than(&best) { r } else { best })
        .expect("at least one start"))
}
