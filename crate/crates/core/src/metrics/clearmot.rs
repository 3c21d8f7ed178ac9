use std::collections::HashMap;

use crate::matching::FrameMatch;
use crate::metrics::detection::DetTally;

/// Identity switches over the frame matches of one view, given in frame
/// order. A switch is counted when a ground-truth id is matched to a
/// different prediction id than at its previous match.
pub fn id_switches(view_matches: &[FrameMatch]) -> usize {
    let mut last: HashMap<usize, usize> = HashMap::new();
    let mut switches = 0;
    for m in view_matches {
        for tp in &m.true_positives {
            if let Some(prev) = last.insert(tp.gt, tp.pred) {
                if prev != tp.pred {
                    switches += 1;
                }
            }
        }
    }
    switches
}

/// `1 - (FN + FP + IDSW) / |GT|`; undefined without ground truth.
pub fn mota(tally: DetTally, id_switches: usize, gt_count: usize) -> Option<f64> {
    if gt_count == 0 {
        return None;
    }
    Some(1.0 - (tally.fn_ + tally.fp + id_switches) as f64 / gt_count as f64)
}
