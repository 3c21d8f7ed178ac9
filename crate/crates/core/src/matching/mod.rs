//! Thresholded minimum-cost matching and its two uses: per-frame
//! ground-truth / prediction matching and temporal id assignment.

pub mod assignment;
pub mod frame;
pub mod temporal;

pub use assignment::{solve, Assignment, Costs};
pub use frame::{build_cost_matrix, match_frame, solve_assignment, CostMatrix, Detection, FrameMatch, TpPair};
pub use temporal::{assign_temporal_ids, assign_temporal_ids_with, strip_ids, Track, TrackRegistry};
