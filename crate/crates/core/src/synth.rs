//! Deterministic synthetic multi-view sequences and hand-built fixtures.
//!
//! Every point follows a sinusoid with random phase and frequency around a
//! random centre; each view sees it shifted horizontally by a constant
//! disparity. Ground-truth visibility is thinned by temporal drops (the point
//! is gone from every view) and view drops (gone from one view). Predictions
//! copy the visible ground truth with Gaussian noise, misses, id switches,
//! ghost detections in views where the point is hidden, and uniform false
//! positives.
//!
//! Each point draws from its own ChaCha stream, so points are generated in
//! parallel and the output is sorted by (view, frame, id).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Geometry, Point, Role};
use crate::error::{Error, Result};
use crate::par::Execution;

/// Horizontal offset between consecutive views, in pixels.
pub const VIEW_DISPARITY: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_views: usize,
    pub n_frames: usize,
    pub n_points: usize,
    pub motion_amplitude: f64,
    /// Probability that a point is hidden from one view at one frame.
    pub view_drop_prob: f64,
    /// Probability that a point is hidden from every view at one frame.
    pub temporal_drop_prob: f64,
    pub pred_noise_sigma: f64,
    /// Expected number of false positives per view and frame.
    pub pred_fp_rate: f64,
    pub pred_miss_rate: f64,
    /// Probability that a view's prediction id for a point changes for good.
    pub id_switch_prob: f64,
    /// Probability of a prediction, carrying the point's id, in a view where
    /// the point is hidden.
    pub ghost_prob: f64,
    pub image_width: u32,
    pub image_height: u32,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_views: 2,
            n_frames: 20,
            n_points: 5,
            motion_amplitude: 40.0,
            view_drop_prob: 0.0,
            temporal_drop_prob: 0.0,
            pred_noise_sigma: 1.0,
            pred_fp_rate: 0.0,
            pred_miss_rate: 0.0,
            id_switch_prob: 0.0,
            ghost_prob: 0.0,
            image_width: 640,
            image_height: 480,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n_views == 0 {
            return fail("n_views must be at least 1".into());
        }
        if self.n_frames == 0 {
            return fail("n_frames must be at least 1".into());
        }
        if self.n_points == 0 {
            return fail("n_points must be at least 1".into());
        }
        if self.image_width == 0 || self.image_height == 0 {
            return fail("image dimensions must be positive".into());
        }
        for (name, p) in [
            ("view_drop_prob", self.view_drop_prob),
            ("temporal_drop_prob", self.temporal_drop_prob),
            ("pred_miss_rate", self.pred_miss_rate),
            ("id_switch_prob", self.id_switch_prob),
            ("ghost_prob", self.ghost_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} must lie in [0, 1] (got {p})"));
            }
        }
        for (name, v) in [
            ("motion_amplitude", self.motion_amplitude),
            ("pred_noise_sigma", self.pred_noise_sigma),
            ("pred_fp_rate", self.pred_fp_rate),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return fail(format!("{name} must be a non-negative number (got {v})"));
            }
        }
        Ok(())
    }
}

/// Generated pair plus the visibility draws behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthetic {
    pub gt: Dataset,
    pub pred: Dataset,
    /// `[point][frame]`: the point is hidden from every view.
    pub temporal_drops: Vec<Vec<bool>>,
    /// `[point][view][frame]`: the point is hidden from that view.
    pub view_drops: Vec<Vec<Vec<bool>>>,
}

impl Synthetic {
    pub fn visible(&self, point: usize, view: usize, frame: usize) -> bool {
        !self.temporal_drops[point][frame] && !self.view_drops[point][view][frame]
    }
}

pub fn generate(config: &SynthConfig) -> Result<(Dataset, Dataset)> {
    let s = generate_detailed(config, Execution::default())?;
    Ok((s.gt, s.pred))
}

struct PointOutput {
    gt: Vec<Point>,
    pred: Vec<Point>,
    temporal_drops: Vec<bool>,
    view_drops: Vec<Vec<bool>>,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gt_id(point: usize) -> String {
    format!("g{point}")
}

pub fn generate_detailed(config: &SynthConfig, exec: Execution) -> Result<Synthetic> {
    config.validate()?;
    let c = *config;
    let width = f64::from(c.image_width);
    let height = f64::from(c.image_height);
    let clamp = |x: f64, y: f64| (x.clamp(0.0, width), y.clamp(0.0, height));
    let noise = Normal::new(0.0, c.pred_noise_sigma).expect("sigma validated");

    let per_point: Vec<PointOutput> = exec.map_range(0..c.n_points, |i| {
        let mut rng = rng_for(c.seed, i as u64 + 1);
        let cx = rng.random_range(0.0..=width);
        let cy = rng.random_range(0.0..=height);
        let phase_x = rng.random_range(0.0..std::f64::consts::TAU);
        let phase_y = rng.random_range(0.0..std::f64::consts::TAU);
        let omega = rng.random_range(0.05..0.3);
        let position = |view: usize, frame: usize| {
            let t = omega * frame as f64;
            clamp(
                cx + c.motion_amplitude * (t + phase_x).sin() + VIEW_DISPARITY * view as f64,
                cy + c.motion_amplitude * (t + phase_y).cos(),
            )
        };

        let mut out = PointOutput {
            gt: Vec::new(),
            pred: Vec::new(),
            temporal_drops: vec![false; c.n_frames],
            view_drops: vec![vec![false; c.n_frames]; c.n_views],
        };
        let mut pred_ids = vec![format!("p{i}"); c.n_views];
        let mut switches = 0usize;

        for f in 0..c.n_frames {
            out.temporal_drops[f] = rng.random_bool(c.temporal_drop_prob);
            for (v, pred_id) in pred_ids.iter_mut().enumerate() {
                let view_drop = rng.random_bool(c.view_drop_prob);
                let miss = rng.random_bool(c.pred_miss_rate);
                let switch = rng.random_bool(c.id_switch_prob);
                let ghost = rng.random_bool(c.ghost_prob);
                let dx = noise.sample(&mut rng);
                let dy = noise.sample(&mut rng);
                out.view_drops[v][f] = view_drop;

                if switch {
                    *pred_id = format!("p{i}s{switches}");
                    switches += 1;
                }
                let (x, y) = position(v, f);
                let (px, py) = clamp(x + dx, y + dy);
                let pred = Point::new(v, f, px, py, Some(pred_id));
                if out.temporal_drops[f] {
                    continue;
                }
                if !view_drop {
                    out.gt.push(Point::new(v, f, x, y, Some(&gt_id(i))));
                    if !miss {
                        out.pred.push(pred);
                    }
                } else if ghost {
                    out.pred.push(pred);
                }
            }
        }
        out
    });

    let mut gt: Vec<Point> = Vec::new();
    let mut pred: Vec<Point> = Vec::new();
    let mut temporal_drops = Vec::with_capacity(c.n_points);
    let mut view_drops = Vec::with_capacity(c.n_points);
    for p in per_point {
        gt.extend(p.gt);
        pred.extend(p.pred);
        temporal_drops.push(p.temporal_drops);
        view_drops.push(p.view_drops);
    }

    if c.pred_fp_rate > 0.0 {
        let mut rng = rng_for(c.seed, 0);
        let poisson = Poisson::new(c.pred_fp_rate).expect("rate validated");
        let mut k = 0usize;
        for v in 0..c.n_views {
            for f in 0..c.n_frames {
                let n = poisson.sample(&mut rng) as usize;
                for _ in 0..n {
                    let x = rng.random_range(0.0..=width);
                    let y = rng.random_range(0.0..=height);
                    pred.push(Point::new(v, f, x, y, Some(&format!("f{k}"))));
                    k += 1;
                }
            }
        }
    }

    let order = |a: &Point, b: &Point| {
        (a.view, a.frame, &a.id).cmp(&(b.view, b.frame, &b.id))
    };
    gt.sort_by(order);
    pred.sort_by(order);

    let geometry = Geometry::new(c.n_views, c.n_frames, c.image_width, c.image_height);
    Ok(Synthetic {
        gt: Dataset::new(Role::GroundTruth, geometry, gt)?,
        pred: Dataset::new(Role::Prediction, geometry, pred)?,
        temporal_drops,
        view_drops,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    A,
    B,
}

/// Two-view, four-frame scene in which removing point `a` changes only the
/// cross-view correspondence structure.
///
/// Point `a` is seen by both views at frames 0 and 1; point `b` by view 0 at
/// frames 0 and 1 and by view 1 at frames 2 and 3. Predictions are exact,
/// except that view 1 misses each point at its second frame. Variant B drops
/// point `a` together with its predictions.
pub fn handoff_fixture(variant: Variant) -> (Dataset, Dataset) {
    let mut gt = vec![
        Point::new(0, 0, 300.0, 200.0, Some("b")),
        Point::new(0, 1, 302.0, 201.0, Some("b")),
        Point::new(1, 2, 290.0, 203.0, Some("b")),
        Point::new(1, 3, 292.0, 204.0, Some("b")),
    ];
    if variant == Variant::A {
        gt.extend([
            Point::new(0, 0, 100.0, 100.0, Some("a")),
            Point::new(0, 1, 101.0, 100.0, Some("a")),
            Point::new(1, 0, 88.0, 100.0, Some("a")),
            Point::new(1, 1, 89.0, 100.0, Some("a")),
        ]);
    }
    let pred = gt
        .iter()
        .filter(|p| !(p.view == 1 && (p.frame == 1 || p.frame == 3)))
        .map(|p| {
            let id = if p.id.as_deref() == Some("a") { "p1" } else { "p2" };
            Point::new(p.view, p.frame, p.x, p.y, Some(id))
        })
        .collect();
    let geometry = Geometry::new(2, 4, 640, 480);
    (
        Dataset::new(Role::GroundTruth, geometry, gt).expect("valid fixture"),
        Dataset::new(Role::Prediction, geometry, pred).expect("valid fixture"),
    )
}

/// Ground truth with four points per frame over two views and three frames;
/// three points are seen by both views and one only by view 0.
pub fn occlusion_fixture() -> Dataset {
    let mut points = Vec::new();
    for f in 0..3 {
        for (k, id) in ["a", "b", "c", "d"].into_iter().enumerate() {
            let x = 50.0 + 100.0 * k as f64 + 2.0 * f as f64;
            points.push(Point::new(0, f, x, 100.0, Some(id)));
            if id != "d" {
                points.push(Point::new(1, f, x - VIEW_DISPARITY, 100.0, Some(id)));
            }
        }
    }
    Dataset::new(Role::GroundTruth, Geometry::new(2, 3, 640, 480), points)
        .expect("valid fixture")
}

/// The three ways a true positive in view 0 can relate to view 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrespondenceCase {
    /// The point is seen and detected in all three views.
    Matched,
    /// The point is hidden from view 2, yet view 2 has a prediction with its id.
    Spurious,
    /// The point is seen in all three views but view 2 misses it.
    Missed,
}

/// Single-frame, three-view scene illustrating one correspondence case.
pub fn three_view_fixture(case: CorrespondenceCase) -> (Dataset, Dataset) {
    let at = |v: usize| Point::new(v, 0, 200.0 - VIEW_DISPARITY * v as f64, 150.0, None);
    let with_id = |mut p: Point, id: &str| {
        p.id = Some(id.into());
        p
    };
    let gt_views: &[usize] = match case {
        CorrespondenceCase::Spurious => &[0, 1],
        _ => &[0, 1, 2],
    };
    let pred_views: &[usize] = match case {
        CorrespondenceCase::Missed => &[0, 1],
        _ => &[0, 1, 2],
    };
    let gt = gt_views.iter().map(|&v| with_id(at(v), "x")).collect();
    let pred = pred_views.iter().map(|&v| with_id(at(v), "p")).collect();
    let geometry = Geometry::new(3, 1, 640, 480);
    (
        Dataset::new(Role::GroundTruth, geometry, gt).expect("valid fixture"),
        Dataset::new(Role::Prediction, geometry, pred).expect("valid fixture"),
    )
}
