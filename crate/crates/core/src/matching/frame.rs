use serde::Serialize;

use crate::dataset::ImageDims;
use crate::matching::assignment::{self, Assignment, Costs};

/// A point reduced to what matching needs: an integer identity and position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

impl Detection {
    pub fn new(id: usize, x: f64, y: f64) -> Self {
        Detection { id, x, y }
    }

    pub fn distance(&self, other: &Detection) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Thresholded distance matrix: entries below `alpha` keep their Euclidean
/// distance, every other entry is raised to the image diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    costs: Costs,
    alpha: f64,
    diagonal_bound: f64,
}

impl CostMatrix {
    pub fn costs(&self) -> &Costs {
        &self.costs
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn diagonal_bound(&self) -> f64 {
        self.diagonal_bound
    }

    pub fn rows(&self) -> usize {
        self.costs.rows()
    }

    pub fn cols(&self) -> usize {
        self.costs.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.costs.get(row, col)
    }

    pub fn solve(&self) -> Assignment {
        assignment::solve(&self.costs)
    }
}

pub fn build_cost_matrix(
    rows: &[Detection],
    cols: &[Detection],
    alpha: f64,
    dims: ImageDims,
) -> CostMatrix {
    let diagonal_bound = dims.diagonal();
    let costs = Costs::from_fn(rows.len(), cols.len(), |r, c| {
        let d = rows[r].distance(&cols[c]);
        if d < alpha {
            d
        } else {
            diagonal_bound
        }
    });
    CostMatrix {
        costs,
        alpha,
        diagonal_bound,
    }
}

pub fn solve_assignment(matrix: &CostMatrix) -> Assignment {
    matrix.solve()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TpPair {
    pub gt: usize,
    pub pred: usize,
    pub distance: f64,
}

/// Outcome of matching the ground truth and predictions of one view at one
/// frame.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FrameMatch {
    pub view: usize,
    pub frame: usize,
    pub true_positives: Vec<TpPair>,
    pub false_positives: Vec<usize>,
    pub false_negatives: Vec<usize>,
}

impl FrameMatch {
    pub fn is_tp_gt(&self, gt: usize) -> bool {
        self.true_positives.iter().any(|tp| tp.gt == gt)
    }
}

/// Matches ground truth (rows) against predictions (columns) with the
/// thresholded Hungarian method. Assigned pairs at distance `alpha` or more
/// are not matches and split into one false negative and one false
/// positive.
pub fn match_frame(
    view: usize,
    frame: usize,
    gt: &[Detection],
    pred: &[Detection],
    alpha: f64,
    dims: ImageDims,
) -> FrameMatch {
    let matrix = build_cost_matrix(gt, pred, alpha, dims);
    let assignment = matrix.solve();

    let mut gt_matched = vec![false; gt.len()];
    let mut pred_matched = vec![false; pred.len()];
    let mut true_positives = Vec::new();
    for &(r, c) in &assignment.pairs {
        let distance = gt[r].distance(&pred[c]);
        if distance < alpha {
            gt_matched[r] = true;
            pred_matched[c] = true;
            true_positives.push(TpPair {
                gt: gt[r].id,
                pred: pred[c].id,
                distance,
            });
        }
    }
    let false_negatives = gt
        .iter()
        .zip(&gt_matched)
        .filter(|(_, &m)| !m)
        .map(|(d, _)| d.id)
        .collect();
    let false_positives = pred
        .iter()
        .zip(&pred_matched)
        .filter(|(_, &m)| !m)
        .map(|(d, _)| d.id)
        .collect();

    FrameMatch {
        view,
        frame,
        true_positives,
        false_positives,
        false_negatives,
    }
}
