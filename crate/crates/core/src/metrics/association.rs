use std::collections::HashMap;

use serde::Serialize;

use crate::metrics::sequence::MatchedSequence;

/// Association counts of one true positive: how often its ground-truth id
/// and prediction id are matched to each other (`tpa`), how often the
/// prediction id occurs without that match (`fpa`) and how often the
/// ground-truth id does (`fna`). Occurrences are counted within the view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AssCounts {
    pub view: usize,
    pub tpa: usize,
    pub fpa: usize,
    pub fna: usize,
}

impl AssCounts {
    pub fn jaccard(&self) -> f64 {
        self.tpa as f64 / (self.tpa + self.fpa + self.fna) as f64
    }

    pub fn recall(&self) -> f64 {
        self.tpa as f64 / (self.tpa + self.fna) as f64
    }

    pub fn precision(&self) -> f64 {
        self.tpa as f64 / (self.tpa + self.fpa) as f64
    }
}

/// One entry per true positive, in match order (view, frame, pair).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AssTally {
    pub per_tp: Vec<AssCounts>,
}

pub fn tally_association(seq: &MatchedSequence) -> AssTally {
    let mut per_tp = Vec::new();
    for view in 0..seq.n_views() {
        let (gt_cells, pred_cells) = seq.view_cells(view);
        let mut gt_occ = vec![0usize; seq.gt_ids().n_global()];
        let mut pred_occ = vec![0usize; seq.pred_ids().n_global()];
        for d in gt_cells.iter().flatten() {
            gt_occ[d.id] += 1;
        }
        for d in pred_cells.iter().flatten() {
            pred_occ[d.id] += 1;
        }
        let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
        for m in seq.view_matches(view) {
            for tp in &m.true_positives {
                *pairs.entry((tp.gt, tp.pred)).or_default() += 1;
            }
        }
        for m in seq.view_matches(view) {
            for tp in &m.true_positives {
                let tpa = pairs[&(tp.gt, tp.pred)];
                per_tp.push(AssCounts {
                    view,
                    tpa,
                    fpa: pred_occ[tp.pred] - tpa,
                    fna: gt_occ[tp.gt] - tpa,
                });
            }
        }
    }
    AssTally { per_tp }
}

pub(crate) fn mean_or(values: impl Iterator<Item = f64>, empty: f64) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        empty
    } else {
        sum / n as f64
    }
}

/// Mean association Jaccard over all true positives; `zero_tp` when there
/// are none.
pub fn ass_acc(tally: &AssTally, zero_tp: f64) -> f64 {
    mean_or(tally.per_tp.iter().map(AssCounts::jaccard), zero_tp)
}

/// Association accuracy restricted to the true positives of one view.
pub fn view_ass_acc(tally: &AssTally, view: usize, zero_tp: f64) -> f64 {
    mean_or(
        tally
            .per_tp
            .iter()
            .filter(|c| c.view == view)
            .map(AssCounts::jaccard),
        zero_tp,
    )
}
