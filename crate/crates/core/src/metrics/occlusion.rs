use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::dataset::Dataset;

/// Occlusion statistics of a ground-truth dataset.
///
/// `simple` is the fraction of (frame, point) observations that are missing
/// from at least one view. The weighted form scores each view `v` as
/// `1 - (1/(N*P)) * sum over points and frames of p[v][f] * c[f]`, where
/// `p[v][f]` is 1 when the point is visible in `v` at frame `f` and `c[f]` is
/// the fraction of views it is visible in. The temporal variant fixes `c` to
/// 1 and the multi-view variant fixes `p` to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OcclusionIndex {
    pub simple: f64,
    pub weighted_per_view: Vec<f64>,
    pub weighted_mean: f64,
    pub temporal_per_view: Vec<f64>,
    pub temporal_mean: f64,
    pub multiview_per_view: Vec<f64>,
    pub multiview_mean: f64,
}

/// `None` for a dataset without points.
pub fn occlusion_index(gt: &Dataset) -> Option<OcclusionIndex> {
    if gt.is_empty() {
        return None;
    }
    let n_views = gt.n_views();
    let n_frames = gt.n_frames();

    // (id, frame) -> set of views
    let mut seen: BTreeMap<(&str, usize), BTreeSet<usize>> = BTreeMap::new();
    for p in gt.points() {
        let id = p.id.as_deref().expect("ground truth carries ids");
        seen.entry((id, p.frame)).or_default().insert(p.view);
    }
    let full = seen.values().filter(|v| v.len() == n_views).count();
    let simple = 1.0 - full as f64 / seen.len() as f64;

    let n_points = seen.keys().map(|&(id, _)| id).collect::<BTreeSet<_>>().len();
    let scale = (n_frames * n_points) as f64;
    let mut weighted = vec![0.0; n_views];
    let mut temporal = vec![0.0; n_views];
    let mut multiview = 0.0;
    for views in seen.values() {
        let c = views.len() as f64 / n_views as f64;
        multiview += c;
        for &v in views {
            weighted[v] += c;
            temporal[v] += 1.0;
        }
    }
    let finish = |sums: Vec<f64>| -> (Vec<f64>, f64) {
        let per_view: Vec<f64> = sums.into_iter().map(|s| 1.0 - s / scale).collect();
        let mean = per_view.iter().sum::<f64>() / n_views as f64;
        (per_view, mean)
    };
    let (weighted_per_view, weighted_mean) = finish(weighted);
    let (temporal_per_view, temporal_mean) = finish(temporal);
    let (multiview_per_view, multiview_mean) = finish(vec![multiview; n_views]);

    Some(OcclusionIndex {
        simple,
        weighted_per_view,
        weighted_mean,
        temporal_per_view,
        temporal_mean,
        multiview_per_view,
        multiview_mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Geometry, Point, Role};

    fn gt(n_views: usize, n_frames: usize, points: Vec<Point>) -> Dataset {
        Dataset::new(
            Role::GroundTruth,
            Geometry::new(n_views, n_frames, 100, 100),
            points,
        )
        .unwrap()
    }

    #[test]
    fn fully_visible_points_are_not_occluded() {
        let d = gt(
            2,
            2,
            (0..2)
                .flat_map(|v| (0..2).map(move |f| Point::new(v, f, 5.0, 5.0, Some("a"))))
                .collect(),
        );
        let oi = occlusion_index(&d).unwrap();
        assert_eq!(oi.simple, 0.0);
        assert_eq!(oi.weighted_mean, 0.0);
    }

    #[test]
    fn two_view_toy_matches_hand_evaluation() {
        let d = gt(
            2,
            2,
            vec![
                Point::new(0, 0, 1.0, 1.0, Some("A")),
                Point::new(0, 1, 1.0, 1.0, Some("A")),
                Point::new(1, 0, 1.0, 1.0, Some("A")),
                Point::new(1, 1, 1.0, 1.0, Some("A")),
                Point::new(0, 0, 9.0, 9.0, Some("B")),
            ],
        );
        let oi = occlusion_index(&d).unwrap();
        assert!((oi.simple - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(oi.weighted_per_view, vec![0.375, 0.5]);
        assert_eq!(oi.weighted_mean, 0.4375);
        assert_eq!(oi.temporal_per_view, vec![0.25, 0.5]);
        assert_eq!(oi.multiview_per_view, vec![0.375, 0.375]);
    }

    #[test]
    fn empty_ground_truth_is_undefined() {
        assert_eq!(occlusion_index(&gt(1, 1, vec![])), None);
    }
}
