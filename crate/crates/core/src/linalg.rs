//! Dense Gaussian elimination over F_p, small enough for the linear systems
//! that arise when matching p^{-e}-linear maps on truncated monomial bases.

use crate::fp;

/// Solution of A x = b: one particular solution plus a basis of the
/// homogeneous solution space.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Vec<u64>,
    pub nullspace: Vec<Vec<u64>>,
}

/// Solve the system given by `rows` (each of length `ncols`) and `rhs`.
/// Returns `None` when inconsistent.  Deterministic: first nonzero pivot.
pub fn solve(mut rows: Vec<Vec<u64>>, mut rhs: Vec<u64>, ncols: usize, p: u64) -> Option<Solution> {
    debug_assert_eq!(rows.len(), rhs.len());
    let nrows = rows.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        rhs.swap(r, pr);
        let inv = fp::inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = fp::mul(*x, inv, p);
        }
        rhs[r] = fp::mul(rhs[r], inv, p);
        for i in 0..nrows {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for j in 0..ncols {
                    let sub = fp::mul(factor, rows[r][j], p);
                    rows[i][j] = fp::sub(rows[i][j], sub, p);
                }
                let sub = fp::mul(factor, rhs[r], p);
                rhs[i] = fp::sub(rhs[i], sub, p);
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    // inconsistency: zero row with nonzero rhs
    for i in r..nrows {
        if rhs[i] != 0 {
            return None;
        }
    }
    let mut particular = vec![0u64; ncols];
    for (k, &c) in pivot_cols.iter().enumerate() {
        particular[c] = rhs[k];
    }
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut nullspace = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![0u64; ncols];
        v[fc] = 1;
        for (k, &c) in pivot_cols.iter().enumerate() {
            v[c] = fp::neg(rows[k][fc], p);
        }
        nullspace.push(v);
    }
    Some(Solution {
        particular,
        nullspace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_unique_system() {
        // x + y = 1, x - y = 2 over F_5  =>  x = 4, y = 2
        let sol = solve(vec![vec![1, 1], vec![1, 4]], vec![1, 2], 2, 5).unwrap();
        assert_eq!(sol.particular, vec![4, 2]);
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn detects_inconsistency() {
        let none = solve(vec![vec![1, 1], vec![2, 2]], vec![1, 3], 2, 5);
        assert!(none.is_none());
    }

    #[test]
    fn reports_nullspace() {
        // x + y + z = 0 over F_3: two free variables
        let sol = solve(vec![vec![1, 1, 1]], vec![0], 3, 3).unwrap();
        assert_eq!(sol.particular, vec![0, 0, 0]);
        assert_eq!(sol.nullspace.len(), 2);
        for v in &sol.nullspace {
            let s: u64 = v.iter().sum();
            assert_eq!(s % 3, 0);
        }
    }
}
