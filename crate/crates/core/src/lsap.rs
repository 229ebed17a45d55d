//! Linear sum assignment by shortest augmenting paths (Hungarian method), O(k³).

use crate::error::{Error, Result};

/// Cost marking a forbidden cell. Entries at or above this value are never
/// part of a returned assignment.
pub const FORBIDDEN: f64 = 1e15;

/// A square assignment problem with a row-major cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentProblem {
    size: usize,
    costs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Column assigned to each row.
    pub row_to_col: Vec<usize>,
    /// Sum of the selected entries.
    pub objective: f64,
}

impl AssignmentProblem {
    pub fn new(size: usize, costs: Vec<f64>) -> Result<Self> {
        if costs.len() != size * size {
            return Err(Error::MalformedProblem(format!(
                "{} entries for a {size}x{size} matrix",
                costs.len()
            )));
        }
        if let Some(pos) = costs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCost {
                row: pos / size,
                col: pos % size,
            });
        }
        Ok(AssignmentProblem { size, costs })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::MalformedProblem("matrix is not square".into()));
        }
        Self::new(size, rows.concat())
    }

    /// The augmented GED layout for `n` source and `m` target vertices:
    ///
    /// ```text
    ///            m target cols        n removal cols
    ///  n rows  [ substitution      |  diag(removal)    ]
    ///  m rows  [ diag(insertion)   |  0                ]
    /// ```
    ///
    /// Off-diagonal cells of the removal and insertion blocks are [`FORBIDDEN`].
    pub fn ged_layout(
        n: usize,
        m: usize,
        subst: impl Fn(usize, usize) -> f64,
        removal: impl Fn(usize) -> f64,
        insertion: impl Fn(usize) -> f64,
    ) -> Result<Self> {
        let size = n + m;
        let mut costs = vec![FORBIDDEN; size * size];
        for i in 0..n {
            for k in 0..m {
                costs[i * size + k] = subst(i, k);
            }
            costs[i * size + m + i] = removal(i);
        }
        for k in 0..m {
            costs[(n + k) * size + k] = insertion(k);
            for i in 0..n {
                costs[(n + k) * size + m + i] = 0.0;
            }
        }
        Self::new(size, costs)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.costs[row * self.size + col]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }
}

/// Solves the assignment problem exactly.
///
/// Fails with [`Error::Infeasible`] when every perfect matching uses a
/// forbidden cell.
pub fn solve_lsap(p: &AssignmentProblem) -> Result<Assignment> {
    let n = p.size;
    if n == 0 {
        return Ok(Assignment {
            row_to_col: vec![],
            objective: 0.0,
        });
    }
    // 1-based potentials; column 0 is the virtual start of each augmenting path.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![f64::INFINITY; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        col_owner[0] = row;
        let mut j0 = 0usize;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = p.get(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        row_to_col[col_owner[j] - 1] = j - 1;
    }
    let mut objective = 0.0;
    for (r, &c) in row_to_col.iter().enumerate() {
        let x = p.get(r, c);
        if x >= FORBIDDEN {
            return Err(Error::Infeasible);
        }
        objective += x;
    }
    Ok(Assignment {
        row_to_col,
        objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(p: &AssignmentProblem) -> f64 {
        fn rec(p: &AssignmentProblem, row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
            if row == p.size() {
                *best = best.min(acc);
                return;
            }
            for c in 0..p.size() {
                if !used[c] {
                    used[c] = true;
                    rec(p, row + 1, used, acc + p.get(row, c), best);
                    used[c] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(p, 0, &mut vec![false; p.size()], 0.0, &mut best);
        best
    }

    #[test]
    fn small_cases() {
        let p = AssignmentProblem::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let a = solve_lsap(&p).unwrap();
        assert_eq!(a.row_to_col, vec![0, 1]);
        assert_eq!(a.objective, 2.0);

        let p = AssignmentProblem::from_rows(&[vec![5.0]]).unwrap();
        assert_eq!(solve_lsap(&p).unwrap().objective, 5.0);

        let p = AssignmentProblem::new(0, vec![]).unwrap();
        assert_eq!(solve_lsap(&p).unwrap().objective, 0.0);
    }

    #[test]
    fn random_six_by_six_matches_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let costs: Vec<f64> = (0..36).map(|_| rng.random_range(0..20) as f64).collect();
            let p = AssignmentProblem::new(6, costs).unwrap();
            let a = solve_lsap(&p).unwrap();
            assert_eq!(a.objective, brute_force(&p));
            let sum: f64 = a
                .row_to_col
                .iter()
                .enumerate()
                .map(|(r, &c)| p.get(r, c))
                .sum();
            assert_eq!(sum, a.objective);
        }
    }

    #[test]
    fn negative_entries() {
        let p = AssignmentProblem::from_rows(&[
            vec![-1.0, 4.0, 0.5],
            vec![2.0, -3.0, 1.0],
            vec![0.0, 0.0, -2.5],
        ])
        .unwrap();
        assert_eq!(solve_lsap(&p).unwrap().objective, -6.5);
    }

    #[test]
    fn rejects_non_finite_and_infeasible() {
        assert!(matches!(
            AssignmentProblem::from_rows(&[vec![1.0, f64::NAN], vec![0.0, 0.0]]),
            Err(Error::NonFiniteCost { row: 0, col: 1 })
        ));
        assert!(AssignmentProblem::from_rows(&[vec![1.0, 2.0], vec![0.0]]).is_err());
        let p =
            AssignmentProblem::from_rows(&[vec![FORBIDDEN, FORBIDDEN], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(solve_lsap(&p), Err(Error::Infeasible)));
    }

    #[test]
    fn ged_layout_avoids_forbidden_cells() {
        let p =
            AssignmentProblem::ged_layout(2, 3, |i, k| (i + k) as f64, |_| 3.0, |_| 3.0).unwrap();
        assert_eq!(p.size(), 5);
        assert_eq!(p.get(0, 4), FORBIDDEN);
        assert_eq!(p.get(2, 1), FORBIDDEN);
        assert_eq!(p.get(4, 4), 0.0);
        let a = solve_lsap(&p).unwrap();
        assert!(a
            .row_to_col
            .iter()
            .enumerate()
            .all(|(r, &c)| p.get(r, c) < FORBIDDEN));
        assert_eq!(a.objective, brute_force(&p));
    }
}
