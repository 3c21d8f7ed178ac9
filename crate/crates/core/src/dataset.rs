//! Point datasets: the JSON document model, validation on construction, and
//! the read-only checks run on a ground-truth / prediction pair.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    GroundTruth,
    Prediction,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::GroundTruth => f.write_str("ground truth"),
            Role::Prediction => f.write_str("prediction"),
        }
    }
}

/// One annotated or predicted 2-D point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub view: usize,
    pub frame: usize,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default, rename = "class")]
    pub class_label: Option<String>,
}

impl Point {
    pub fn new(view: usize, frame: usize, x: f64, y: f64, id: Option<&str>) -> Self {
        Point {
            view,
            frame,
            x,
            y,
            id: id.map(str::to_owned),
            class_label: None,
        }
    }

    pub fn with_class(mut self, class: &str) -> Self {
        self.class_label = Some(class.to_owned());
        self
    }
}

/// Camera-rig and sequence extent shared by every point of a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub n_views: usize,
    pub n_frames: usize,
    pub image_width: u32,
    pub image_height: u32,
}

impl Geometry {
    pub fn new(n_views: usize, n_frames: usize, image_width: u32, image_height: u32) -> Self {
        Geometry {
            n_views,
            n_frames,
            image_width,
            image_height,
        }
    }

    pub fn dims(&self) -> ImageDims {
        ImageDims {
            width: f64::from(self.image_width),
            height: f64::from(self.image_height),
        }
    }

    fn check(&self) -> Result<()> {
        if self.n_views == 0 {
            return Err(Error::NoViews);
        }
        if self.n_frames == 0 {
            return Err(Error::NoFrames);
        }
        if self.image_width == 0 || self.image_height == 0 {
            return Err(Error::EmptyImage {
                width: self.image_width,
                height: self.image_height,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageDims {
    pub width: f64,
    pub height: f64,
}

impl ImageDims {
    /// Length of the image diagonal; the largest distance two in-image
    /// points can have.
    pub fn diagonal(&self) -> f64 {
        self.width.hypot(self.height)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    n_views: usize,
    n_frames: usize,
    image_width: u32,
    image_height: u32,
    points: Vec<Point>,
}

/// An immutable, validated collection of points organised by view and frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    role: Role,
    geometry: Geometry,
    points: Vec<Point>,
    // point indices per (view, frame) cell, row-major by view
    cells: Vec<Vec<usize>>,
}

impl Dataset {
    pub fn new(role: Role, geometry: Geometry, points: Vec<Point>) -> Result<Self> {
        geometry.check()?;
        let mut cells = vec![Vec::new(); geometry.n_views * geometry.n_frames];
        let mut seen: HashMap<(&str, usize, usize), usize> = HashMap::new();
        let width = f64::from(geometry.image_width);
        let height = f64::from(geometry.image_height);

        for (index, point) in points.iter().enumerate() {
            if point.view >= geometry.n_views {
                return Err(Error::ViewOutOfRange {
                    index,
                    view: point.view,
                    n_views: geometry.n_views,
                });
            }
            if point.frame >= geometry.n_frames {
                return Err(Error::FrameOutOfRange {
                    index,
                    frame: point.frame,
                    n_frames: geometry.n_frames,
                });
            }
            // NaN fails both comparisons
            if !(0.0..=width).contains(&point.x) || !(0.0..=height).contains(&point.y) {
                return Err(Error::OutOfBounds {
                    index,
                    x: point.x,
                    y: point.y,
                    width: geometry.image_width,
                    height: geometry.image_height,
                });
            }
            match point.id.as_deref() {
                Some(id) => {
                    if let Some(&first) = seen.get(&(id, point.view, point.frame)) {
                        return Err(Error::DuplicateIdentity {
                            index,
                            first,
                            id: id.to_owned(),
                            view: point.view,
                            frame: point.frame,
                        });
                    }
                    seen.insert((id, point.view, point.frame), index);
                }
                None if role == Role::GroundTruth => return Err(Error::MissingId { index }),
                None => {}
            }
            cells[point.view * geometry.n_frames + point.frame].push(index);
        }

        Ok(Dataset {
            role,
            geometry,
            points,
            cells,
        })
    }

    /// Builds a dataset with the same role and geometry around new points.
    pub fn with_points(&self, points: Vec<Point>) -> Result<Self> {
        Dataset::new(self.role, self.geometry, points)
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn n_views(&self) -> usize {
        self.geometry.n_views
    }

    pub fn n_frames(&self) -> usize {
        self.geometry.n_frames
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points observed in one view at one frame, in input order.
    pub fn cell(&self, view: usize, frame: usize) -> impl Iterator<Item = &Point> + '_ {
        let indices: &[usize] = if view < self.geometry.n_views && frame < self.geometry.n_frames {
            &self.cells[view * self.geometry.n_frames + frame]
        } else {
            &[]
        };
        indices.iter().map(move |&i| &self.points[i])
    }

    pub fn has_missing_ids(&self) -> bool {
        self.points.iter().any(|p| p.id.is_none())
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.document()).expect("dataset serializes");
        out.push('\n');
        out
    }

    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        writer
            .write_all(self.to_json().as_bytes())
            .map_err(|source| Error::Io {
                path: "<output>".into(),
                source,
            })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
    }

    fn document(&self) -> Document {
        Document {
            n_views: self.geometry.n_views,
            n_frames: self.geometry.n_frames,
            image_width: self.geometry.image_width,
            image_height: self.geometry.image_height,
            points: self.points.clone(),
        }
    }
}

pub fn parse_dataset<R: Read>(reader: R, role: Role) -> Result<Dataset> {
    let doc: Document = serde_json::from_reader(reader)?;
    from_document(doc, role)
}

pub fn parse_dataset_str(text: &str, role: Role) -> Result<Dataset> {
    let doc: Document = serde_json::from_str(text)?;
    from_document(doc, role)
}

pub fn load_dataset(path: &Path, role: Role) -> Result<Dataset> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_dataset(BufReader::new(file), role)
}

fn from_document(doc: Document, role: Role) -> Result<Dataset> {
    let geometry = Geometry::new(doc.n_views, doc.n_frames, doc.image_width, doc.image_height);
    Dataset::new(role, geometry, doc.points)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Issue {
    GeometryMismatch {
        field: &'static str,
        ground_truth: u64,
        prediction: u64,
    },
    ViewMissing {
        view: usize,
        missing_from: Role,
    },
    FrameMissing {
        frame: usize,
        missing_from: Role,
    },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::GeometryMismatch {
                field,
                ground_truth,
                prediction,
            } => write!(
                f,
                "geometry mismatch: {field} is {ground_truth} in ground truth, {prediction} in prediction"
            ),
            Issue::ViewMissing { view, missing_from } => {
                write!(f, "view {view} has no points in the {missing_from} dataset")
            }
            Issue::FrameMissing {
                frame,
                missing_from,
            } => write!(f, "frame {frame} has no points in the {missing_from} dataset"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has_geometry_mismatch(&self) -> bool {
        self.issues
            .iter()
            .any(|i| matches!(i, Issue::GeometryMismatch { .. }))
    }
}

/// Compares the geometry and coverage of a ground-truth / prediction pair.
/// Missing views or frames are reported but are legal input: downstream they
/// simply contribute false negatives or false positives.
pub fn validate_pair(gt: &Dataset, pred: &Dataset) -> ValidationReport {
    let mut issues = Vec::new();
    let (g, p) = (gt.geometry(), pred.geometry());
    let fields = [
        ("n_views", g.n_views as u64, p.n_views as u64),
        ("n_frames", g.n_frames as u64, p.n_frames as u64),
        ("image_width", u64::from(g.image_width), u64::from(p.image_width)),
        ("image_height", u64::from(g.image_height), u64::from(p.image_height)),
    ];
    for (field, ground_truth, prediction) in fields {
        if ground_truth != prediction {
            issues.push(Issue::GeometryMismatch {
                field,
                ground_truth,
                prediction,
            });
        }
    }

    let occupied = |d: &Dataset, len: usize, key: fn(&Point) -> usize| {
        let mut used = vec![false; len];
        for point in d.points() {
            if let Some(slot) = used.get_mut(key(point)) {
                *slot = true;
            }
        }
        used
    };
    let n_views = g.n_views.max(p.n_views);
    let n_frames = g.n_frames.max(p.n_frames);

    let gt_views = occupied(gt, n_views, |pt| pt.view);
    let pred_views = occupied(pred, n_views, |pt| pt.view);
    for view in 0..n_views {
        match (gt_views[view], pred_views[view]) {
            (true, false) => issues.push(Issue::ViewMissing {
                view,
                missing_from: Role::Prediction,
            }),
            (false, true) => issues.push(Issue::ViewMissing {
                view,
                missing_from: Role::GroundTruth,
            }),
            _ => {}
        }
    }

    let gt_frames = occupied(gt, n_frames, |pt| pt.frame);
    let pred_frames = occupied(pred, n_frames, |pt| pt.frame);
    for frame in 0..n_frames {
        match (gt_frames[frame], pred_frames[frame]) {
            (true, false) => issues.push(Issue::FrameMissing {
                frame,
                missing_from: Role::Prediction,
            }),
            (false, true) => issues.push(Issue::FrameMissing {
                frame,
                missing_from: Role::GroundTruth,
            }),
            _ => {}
        }
    }

    ValidationReport { issues }
}
