//! Minimum-cost bipartite assignment.
//!
//! The solver pads the problem to a square matrix with zero-cost dummy rows
//! or columns and runs the shortest-augmenting-path form of the Hungarian
//! method, O(n^3). The result is then made canonical: among all optimal
//! assignments the lexicographically smallest (row, col) sequence is
//! returned, so equal-cost optima never depend on solver internals.

/// Dense row-major matrix of finite costs.
#[derive(Debug, Clone, PartialEq)]
pub struct Costs {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Costs {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "cost data does not match shape");
        Costs { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Costs { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged cost rows");
        Costs {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn transpose(&self) -> Costs {
        Costs::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Assigned (row, col) pairs in ascending row order.
    pub pairs: Vec<(usize, usize)>,
    /// Sum of the assigned entries, accumulated in row order.
    pub total_cost: f64,
}

impl Assignment {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn col_of(&self, row: usize) -> Option<usize> {
        self.pairs.iter().find(|&&(r, _)| r == row).map(|&(_, c)| c)
    }
}

/// Maximum-cardinality assignment of minimum total cost.
///
/// Panics if an entry is not finite.
pub fn solve(costs: &Costs) -> Assignment {
    assert!(
        costs.data.iter().all(|c| c.is_finite()),
        "assignment costs must be finite"
    );
    let n = costs.rows.max(costs.cols);
    if costs.rows == 0 || costs.cols == 0 {
        return Assignment {
            pairs: Vec::new(),
            total_cost: 0.0,
        };
    }

    let entry = |r: usize, c: usize| -> f64 {
        if r < costs.rows && c < costs.cols {
            costs.get(r, c)
        } else {
            0.0
        }
    };

    let (u, v, mut col_row) = hungarian(n, entry);

    let scale = costs.data.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
    let eps = 1e-9 * scale;
    let tight: Vec<bool> = (0..n * n)
        .map(|k| {
            let (r, c) = (k / n, k % n);
            entry(r, c) - u[r] - v[c] <= eps
        })
        .collect();

    let mut row_col = vec![0; n];
    for (c, &r) in col_row.iter().enumerate() {
        row_col[r] = c;
    }
    canonicalize(n, &tight, costs.rows, &mut row_col, &mut col_row);

    let pairs: Vec<(usize, usize)> = (0..costs.rows)
        .filter(|&r| row_col[r] < costs.cols)
        .map(|r| (r, row_col[r]))
        .collect();
    let total_cost = pairs.iter().map(|&(r, c)| costs.get(r, c)).sum();
    Assignment { pairs, total_cost }
}

/// Square Hungarian method. Returns row potentials, column potentials and
/// the owning row of every column; `entry(r, c) - u[r] - v[c] >= 0` holds
/// for all cells and is zero on the matching.
fn hungarian(n: usize, entry: impl Fn(usize, usize) -> f64) -> (Vec<f64>, Vec<f64>, Vec<usize>) {
    // 1-based arrays; index 0 is the virtual root column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = entry(i0 - 1, j - 1) - u[i0] - v[j];
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
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let col_row = (1..=n).map(|j| owner[j] - 1).collect();
    (u[1..].to_vec(), v[1..].to_vec(), col_row)
}

/// Moves a perfect matching of the tight subgraph to the lexicographically
/// smallest one. Rows are fixed one at a time; row `r` switches to the
/// smallest column `c` whose owner can reach the column of `r` along an
/// alternating path through rows that are not fixed yet.
fn canonicalize(
    n: usize,
    tight: &[bool],
    real_rows: usize,
    row_col: &mut [usize],
    col_row: &mut [usize],
) {
    // next[x]: the column row x takes when the path through it is applied.
    let mut next: Vec<Option<usize>> = vec![None; n];
    let mut queue = Vec::with_capacity(n);

    for r in 0..real_rows {
        let target = row_col[r];
        if !(0..target).any(|c| tight[r * n + c]) {
            continue;
        }
        // Backward search: row x reaches `target` when it is tight to it, or
        // tight to the column of a row that already reaches it.
        next.fill(None);
        queue.clear();
        queue.push(r);
        let mut head = 0;
        while head < queue.len() {
            let y = row_col[queue[head]];
            head += 1;
            for x in r + 1..n {
                if next[x].is_none() && tight[x * n + y] {
                    next[x] = Some(y);
                    queue.push(x);
                }
            }
        }

        let Some(c) = (0..target).find(|&c| tight[r * n + c] && next[col_row[c]].is_some())
        else {
            continue;
        };
        let mut row = col_row[c];
        while let Some(col) = next[row] {
            let displaced = col_row[col];
            row_col[row] = col;
            col_row[col] = row;
            if displaced == r {
                break;
            }
            row = displaced;
        }
        row_col[r] = c;
        col_row[c] = r;
    }
}
