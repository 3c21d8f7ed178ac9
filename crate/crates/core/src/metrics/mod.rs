//! Scores computed from a matched sequence: detection, temporal association,
//! cross-view correspondence, their geometric means, the CLEAR-MOT and
//! identity baselines, and the Occlusion Index.

pub mod association;
pub mod clearmot;
pub mod correspondence;
pub mod detection;
pub mod evaluate;
pub mod identity;
pub mod occlusion;
pub mod sequence;

pub use association::{ass_acc, tally_association, view_ass_acc, AssCounts, AssTally};
pub use clearmot::{id_switches, mota};
pub use correspondence::{classify_correspondence, corres_acc, CorresCounts, CorresTally};
pub use detection::{detection_scores, tally_detections, DetTally, DetectionScores};
pub use evaluate::{
    alpha_sweep, evaluate, evaluate_detailed, evaluate_with, Decomposition, Evaluation,
    MetricReport, SweepPoint, Tallies, ViewScores, UNLABELLED_CLASS,
};
pub use identity::{identity_tally, IdentityTally};
pub use occlusion::{occlusion_index, OcclusionIndex};
pub use sequence::MatchedSequence;

/// Cube root of the product of the three accuracies.
pub fn mv_hota(det_acc: f64, ass_acc: f64, corres_acc: f64) -> f64 {
    (det_acc * ass_acc * corres_acc).cbrt()
}

/// Square root of the product of detection and association accuracy.
pub fn hota(det_acc: f64, ass_acc: f64) -> f64 {
    (det_acc * ass_acc).sqrt()
}
