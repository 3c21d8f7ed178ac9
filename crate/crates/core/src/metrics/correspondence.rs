use serde::Serialize;

use crate::metrics::association::mean_or;
use crate::metrics::sequence::MatchedSequence;

/// Cross-view classification of one true positive against every other view
/// at the same frame.
///
/// For each other view `w`: if the ground-truth point is present in `w`, the
/// pair counts as a true positive correspondence when `w` also has a true
/// positive for that point and as a false negative correspondence
/// otherwise. If the point is absent from `w`, a prediction carrying the same
/// prediction id in `w` is a false positive correspondence; no such
/// prediction is a true positive correspondence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorresCounts {
    pub view: usize,
    pub frame: usize,
    pub gt: usize,
    pub pred: usize,
    pub tpc: usize,
    pub fpc: usize,
    pub fnc: usize,
}

impl CorresCounts {
    /// 1 when there is no other view to compare with.
    pub fn jaccard(&self) -> f64 {
        let den = self.tpc + self.fpc + self.fnc;
        if den == 0 {
            1.0
        } else {
            self.tpc as f64 / den as f64
        }
    }

    pub fn recall(&self) -> f64 {
        let den = self.tpc + self.fnc;
        if den == 0 {
            1.0
        } else {
            self.tpc as f64 / den as f64
        }
    }

    pub fn precision(&self) -> f64 {
        let den = self.tpc + self.fpc;
        if den == 0 {
            1.0
        } else {
            self.tpc as f64 / den as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorresTally {
    pub per_tp: Vec<CorresCounts>,
}

impl CorresTally {
    pub fn totals(&self) -> (usize, usize, usize) {
        self.per_tp.iter().fold((0, 0, 0), |(a, b, c), t| {
            (a + t.tpc, b + t.fpc, c + t.fnc)
        })
    }
}

pub fn classify_correspondence(seq: &MatchedSequence) -> CorresTally {
    let mut per_tp = Vec::new();
    for m in seq.matches() {
        for tp in &m.true_positives {
            let mut c = CorresCounts {
                view: m.view,
                frame: m.frame,
                gt: tp.gt,
                pred: tp.pred,
                tpc: 0,
                fpc: 0,
                fnc: 0,
            };
            for w in (0..seq.n_views()).filter(|&w| w != m.view) {
                if seq.has_gt(w, m.frame, tp.gt) {
                    if seq.frame_match(w, m.frame).is_tp_gt(tp.gt) {
                        c.tpc += 1;
                    } else {
                        c.fnc += 1;
                    }
                } else if seq.has_pred(w, m.frame, tp.pred) {
                    c.fpc += 1;
                } else {
                    c.tpc += 1;
                }
            }
            per_tp.push(c);
        }
    }
    CorresTally { per_tp }
}

/// Mean correspondence Jaccard over all true positives; `zero_tp` when there
/// are none.
pub fn corres_acc(tally: &CorresTally, zero_tp: f64) -> f64 {
    mean_or(tally.per_tp.iter().map(CorresCounts::jaccard), zero_tp)
}
