use serde::Serialize;

use crate::matching::FrameMatch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct DetTally {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl DetTally {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_
    }
}

impl std::ops::Add for DetTally {
    type Output = DetTally;

    fn add(self, o: DetTally) -> DetTally {
        DetTally {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            fn_: self.fn_ + o.fn_,
        }
    }
}

pub fn tally_detections(matches: &[FrameMatch]) -> DetTally {
    matches.iter().fold(DetTally::default(), |t, m| DetTally {
        tp: t.tp + m.true_positives.len(),
        fp: t.fp + m.false_positives.len(),
        fn_: t.fn_ + m.false_negatives.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct DetectionScores {
    pub det_acc: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Detection accuracy, precision, recall and F1. Any ratio with an empty
/// denominator is 0.
pub fn detection_scores(t: DetTally) -> DetectionScores {
    DetectionScores {
        det_acc: ratio(t.tp, t.total()),
        precision: ratio(t.tp, t.tp + t.fp),
        recall: ratio(t.tp, t.tp + t.fn_),
        f1: ratio(2 * t.tp, 2 * t.tp + t.fp + t.fn_),
    }
}
