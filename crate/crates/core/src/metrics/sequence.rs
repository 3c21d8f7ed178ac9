use crate::dataset::{Dataset, ImageDims};
use crate::error::Result;
use crate::idmap::IdMap;
use crate::matching::{match_frame, Detection, FrameMatch};
use crate::par::Execution;

/// Ground truth and predictions of a whole sequence, indexed per
/// (view, frame) cell, together with the per-cell matches. This is the
/// complete match set every scoring pass reads from.
///
/// Ground-truth detections carry the global GT index from `gt_ids`;
/// prediction detections carry the index of their id string in `pred_ids`,
/// which is how a prediction identity is compared across views.
#[derive(Debug, Clone)]
pub struct MatchedSequence {
    n_views: usize,
    n_frames: usize,
    alpha: f64,
    gt_ids: IdMap,
    pred_ids: IdMap,
    gt: Vec<Vec<Detection>>,
    pred: Vec<Vec<Detection>>,
    matches: Vec<FrameMatch>,
}

impl MatchedSequence {
    /// `pred` must carry an id on every point. Views and frames are the union
    /// of both datasets; the ground-truth image size bounds the costs.
    pub fn build(gt: &Dataset, pred: &Dataset, alpha: f64, exec: Execution) -> Result<Self> {
        let gt_ids = IdMap::build(gt)?;
        let pred_ids = IdMap::build(pred)?;
        let n_views = gt.n_views().max(pred.n_views());
        let n_frames = gt.n_frames().max(pred.n_frames());
        let dims: ImageDims = gt.geometry().dims();

        let cells = |d: &Dataset, ids: &IdMap| {
            let mut cells = vec![Vec::new(); n_views * n_frames];
            for p in d.points() {
                let id = ids
                    .global_index(p.id.as_deref().expect("checked by IdMap::build"))
                    .expect("indexed");
                cells[p.view * n_frames + p.frame].push(Detection::new(id, p.x, p.y));
            }
            for cell in &mut cells {
                cell.sort_by_key(|d: &Detection| d.id);
            }
            cells
        };
        let gt_cells = cells(gt, &gt_ids);
        let pred_cells = cells(pred, &pred_ids);

        let matches = exec.map_range(0..n_views * n_frames, |k| {
            match_frame(
                k / n_frames,
                k % n_frames,
                &gt_cells[k],
                &pred_cells[k],
                alpha,
                dims,
            )
        });

        Ok(MatchedSequence {
            n_views,
            n_frames,
            alpha,
            gt_ids,
            pred_ids,
            gt: gt_cells,
            pred: pred_cells,
            matches,
        })
    }

    pub fn n_views(&self) -> usize {
        self.n_views
    }

    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gt_ids(&self) -> &IdMap {
        &self.gt_ids
    }

    pub fn pred_ids(&self) -> &IdMap {
        &self.pred_ids
    }

    fn index(&self, view: usize, frame: usize) -> usize {
        view * self.n_frames + frame
    }

    pub fn gt_cell(&self, view: usize, frame: usize) -> &[Detection] {
        &self.gt[self.index(view, frame)]
    }

    pub fn pred_cell(&self, view: usize, frame: usize) -> &[Detection] {
        &self.pred[self.index(view, frame)]
    }

    pub fn frame_match(&self, view: usize, frame: usize) -> &FrameMatch {
        &self.matches[self.index(view, frame)]
    }

    /// All frame matches, ordered by view then frame.
    pub fn matches(&self) -> &[FrameMatch] {
        &self.matches
    }

    /// Frame matches of one view in frame order.
    pub fn view_matches(&self, view: usize) -> &[FrameMatch] {
        &self.matches[view * self.n_frames..(view + 1) * self.n_frames]
    }

    pub fn has_gt(&self, view: usize, frame: usize, gt: usize) -> bool {
        self.gt_cell(view, frame).iter().any(|d| d.id == gt)
    }

    pub fn has_pred(&self, view: usize, frame: usize, pred: usize) -> bool {
        self.pred_cell(view, frame).iter().any(|d| d.id == pred)
    }

    pub fn gt_count(&self) -> usize {
        self.gt.iter().map(Vec::len).sum()
    }

    pub fn pred_count(&self) -> usize {
        self.pred.iter().map(Vec::len).sum()
    }

    pub fn view_gt_count(&self, view: usize) -> usize {
        self.gt[view * self.n_frames..(view + 1) * self.n_frames]
            .iter()
            .map(Vec::len)
            .sum()
    }

    pub fn view_pred_count(&self, view: usize) -> usize {
        self.pred[view * self.n_frames..(view + 1) * self.n_frames]
            .iter()
            .map(Vec::len)
            .sum()
    }

    /// Ground truth / prediction cells of one view in frame order.
    pub(crate) fn view_cells(&self, view: usize) -> (&[Vec<Detection>], &[Vec<Detection>]) {
        let range = view * self.n_frames..(view + 1) * self.n_frames;
        (&self.gt[range.clone()], &self.pred[range])
    }
}
