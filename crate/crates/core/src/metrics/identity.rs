use serde::Serialize;

use crate::matching::{solve, Costs, Detection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct IdentityTally {
    pub idtp: usize,
    pub idfp: usize,
    pub idfn: usize,
}

impl IdentityTally {
    /// `2 IDTP / (|GT| + |Pred|)`; undefined when both sides are empty.
    pub fn idf1(&self) -> Option<f64> {
        let den = 2 * self.idtp + self.idfp + self.idfn;
        (den > 0).then(|| 2.0 * self.idtp as f64 / den as f64)
    }
}

/// Identity matching of one view. Two trajectories co-occur in a frame when
/// both are present and closer than `alpha`; ground-truth and prediction ids
/// are then paired one to one so that the total co-occurrence is maximal.
pub fn identity_tally(gt: &[Vec<Detection>], pred: &[Vec<Detection>], alpha: f64) -> IdentityTally {
    let gt_total: usize = gt.iter().map(Vec::len).sum();
    let pred_total: usize = pred.iter().map(Vec::len).sum();

    let mut gt_ids: Vec<usize> = gt.iter().flatten().map(|d| d.id).collect();
    let mut pred_ids: Vec<usize> = pred.iter().flatten().map(|d| d.id).collect();
    gt_ids.sort_unstable();
    gt_ids.dedup();
    pred_ids.sort_unstable();
    pred_ids.dedup();

    let mut co = vec![0usize; gt_ids.len() * pred_ids.len()];
    for (g_cell, p_cell) in gt.iter().zip(pred) {
        for g in g_cell {
            let r = gt_ids.binary_search(&g.id).expect("collected");
            for p in p_cell {
                if g.distance(p) < alpha {
                    let c = pred_ids.binary_search(&p.id).expect("collected");
                    co[r * pred_ids.len() + c] += 1;
                }
            }
        }
    }

    // Ids that never co-occur add nothing to the optimum; leaving them out
    // keeps the assignment small when there are many spurious tracks.
    let n = pred_ids.len();
    let rows: Vec<usize> = (0..gt_ids.len())
        .filter(|&r| co[r * n..(r + 1) * n].iter().any(|&v| v > 0))
        .collect();
    let cols: Vec<usize> = (0..n)
        .filter(|&c| rows.iter().any(|&r| co[r * n + c] > 0))
        .collect();
    let max = co.iter().copied().max().unwrap_or(0);
    let idtp = if max == 0 {
        0
    } else {
        let costs = Costs::from_fn(rows.len(), cols.len(), |r, c| {
            (max - co[rows[r] * n + cols[c]]) as f64
        });
        solve(&costs)
            .pairs
            .iter()
            .map(|&(r, c)| co[rows[r] * n + cols[c]])
            .sum()
    };

    IdentityTally {
        idtp,
        idfp: pred_total - idtp,
        idfn: gt_total - idtp,
    }
}
