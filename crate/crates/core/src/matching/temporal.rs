//! Temporal identity assignment for predictions that arrive without ids.
//!
//! Each view keeps a registry of every id it has handed out together with
//! the position where that id was last matched. Frame by frame, the
//! unlabelled predictions are matched against the whole registry with the
//! thresholded Hungarian method, so a point that leaves the scene and comes
//! back near its old position gets its old id again. Unmatched predictions
//! open new tracks.

use std::collections::HashSet;

use crate::config::EvalConfig;
use crate::dataset::{Dataset, ImageDims, Role};
use crate::error::{Error, Result};
use crate::matching::frame::{build_cost_matrix, Detection};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub last_frame: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackRegistry {
    view: usize,
    tracks: Vec<Track>,
    next_fresh: usize,
}

impl TrackRegistry {
    pub fn new(view: usize) -> Self {
        TrackRegistry {
            view,
            tracks: Vec::new(),
            next_fresh: 0,
        }
    }

    pub fn tracks(&self) -> &[Track] {
        &self.tracks
    }

    /// Assigns ids to the predictions of one frame, returned in input order.
    /// Fresh ids never collide with anything in `reserved`.
    pub fn step(
        &mut self,
        frame: usize,
        positions: &[(f64, f64)],
        alpha: f64,
        dims: ImageDims,
        reserved: &HashSet<String>,
    ) -> Vec<String> {
        let current: Vec<Detection> = positions
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Detection::new(i, x, y))
            .collect();
        // Tracks far from every prediction all cost the diagonal, so the
        // canonical assignment only ever uses the first few of them. Keeping
        // one per prediction leaves the result unchanged and the matrix small.
        let mut spare = positions.len();
        let known: Vec<Detection> = self
            .tracks
            .iter()
            .enumerate()
            .map(|(i, t)| Detection::new(i, t.x, t.y))
            .filter(|k| {
                let near = current.iter().any(|c| c.distance(k) < alpha);
                if !near && spare > 0 {
                    spare -= 1;
                    return true;
                }
                near
            })
            .collect();
        let matrix = build_cost_matrix(&current, &known, alpha, dims);
        let assignment = matrix.solve();

        let mut ids: Vec<Option<usize>> = vec![None; positions.len()];
        for &(row, col) in &assignment.pairs {
            if current[row].distance(&known[col]) < alpha {
                ids[row] = Some(known[col].id);
            }
        }

        ids.into_iter()
            .enumerate()
            .map(|(row, slot)| {
                let (x, y) = positions[row];
                let track = match slot {
                    Some(col) => col,
                    None => {
                        let id = self.fresh_id(reserved);
                        self.tracks.push(Track {
                            id,
                            x,
                            y,
                            last_frame: frame,
                        });
                        self.tracks.len() - 1
                    }
                };
                let t = &mut self.tracks[track];
                t.x = x;
                t.y = y;
                t.last_frame = frame;
                t.id.clone()
            })
            .collect()
    }

    fn fresh_id(&mut self, reserved: &HashSet<String>) -> String {
        loop {
            let id = format!("v{}:t{}", self.view, self.next_fresh);
            self.next_fresh += 1;
            if !reserved.contains(&id) {
                return id;
            }
        }
    }
}

/// Gives every prediction without an id a temporally consistent one.
/// Predictions that already carry an id are left untouched.
pub fn assign_temporal_ids(pred: &Dataset, config: &EvalConfig) -> Result<Dataset> {
    assign_temporal_ids_with(pred, config, Execution::default())
}

pub fn assign_temporal_ids_with(
    pred: &Dataset,
    config: &EvalConfig,
    exec: Execution,
) -> Result<Dataset> {
    if pred.role() != Role::Prediction {
        return Err(Error::WrongRole {
            expected: "prediction",
        });
    }
    config.validate()?;
    if !pred.has_missing_ids() {
        return Ok(pred.clone());
    }

    let reserved: HashSet<String> = pred.points().iter().filter_map(|p| p.id.clone()).collect();
    let dims = pred.geometry().dims();

    // Work on point indices so the output keeps the input order.
    let mut unlabelled: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); pred.n_frames()]; pred.n_views()];
    for (i, p) in pred.points().iter().enumerate() {
        if p.id.is_none() {
            unlabelled[p.view][p.frame].push(i);
        }
    }

    let per_view: Vec<Vec<(usize, String)>> = exec.map_range(0..pred.n_views(), |view| {
        let mut registry = TrackRegistry::new(view);
        let mut out = Vec::new();
        for indices in &unlabelled[view] {
            if indices.is_empty() {
                continue;
            }
            let frame = pred.points()[indices[0]].frame;
            let positions: Vec<(f64, f64)> = indices
                .iter()
                .map(|&i| (pred.points()[i].x, pred.points()[i].y))
                .collect();
            let ids = registry.step(frame, &positions, config.alpha, dims, &reserved);
            out.extend(indices.iter().copied().zip(ids));
        }
        out
    });

    let mut points = pred.points().to_vec();
    for (index, id) in per_view.into_iter().flatten() {
        points[index].id = Some(id);
    }
    pred.with_points(points)
}

/// Copy of `pred` with every id removed, ready for re-assignment.
pub fn strip_ids(pred: &Dataset) -> Result<Dataset> {
    let points = pred
        .points()
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.id = None;
            q
        })
        .collect();
    pred.with_points(points)
}
