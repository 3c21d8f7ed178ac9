//! Multi-view tracking evaluation: mvHOTA, the Occlusion Index and the
//! HOTA, MOTA, IDF1 and F1 baselines for multi-point detection and tracking.

pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod idmap;
pub mod matching;
pub mod metrics;
pub mod par;
pub mod report;
pub mod synth;

pub use config::{EvalConfig, DEFAULT_ALPHA};
pub use dataset::{
    load_dataset, parse_dataset, parse_dataset_str, validate_pair, Dataset, Geometry, ImageDims,
    Issue, Point, Role, ValidationReport,
};
pub use error::{Error, Result};
pub use idmap::{remap_gt_ids, IdMap};
pub use metrics::{evaluate, evaluate_with, hota, mv_hota, MetricReport};
pub use par::Execution;
