//! Global identity tokens and their per-view contiguous indices.
//!
//! Every distinct id string of a dataset receives a global index (ids sorted
//! lexicographically). Within each view the ids present there are numbered
//! again from 0 without gaps; the cross-view grouping of a physical point is
//! recovered through its global index.

use std::collections::{BTreeSet, HashMap};

use crate::dataset::{Dataset, Role};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMap {
    globals: Vec<String>,
    by_name: HashMap<String, usize>,
    views: Vec<ViewIds>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct ViewIds {
    // local index -> global index, ascending
    globals: Vec<usize>,
    locals: HashMap<usize, usize>,
}

impl IdMap {
    /// Indexes the ids of any dataset whose points all carry an id.
    pub fn build(dataset: &Dataset) -> Result<Self> {
        let mut names = BTreeSet::new();
        let mut per_view = vec![BTreeSet::new(); dataset.n_views()];
        for (index, point) in dataset.points().iter().enumerate() {
            let id = point.id.as_deref().ok_or(Error::MissingId { index })?;
            names.insert(id);
            per_view[point.view].insert(id);
        }
        let globals: Vec<String> = names.into_iter().map(str::to_owned).collect();
        let by_name: HashMap<String, usize> = globals
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), i))
            .collect();
        let views = per_view
            .into_iter()
            .map(|ids| {
                // BTreeSet iteration keeps ascending global order
                let globals: Vec<usize> = ids.into_iter().map(|id| by_name[id]).collect();
                let locals = globals.iter().enumerate().map(|(l, &g)| (g, l)).collect();
                ViewIds { globals, locals }
            })
            .collect();
        Ok(IdMap {
            globals,
            by_name,
            views,
        })
    }

    pub fn n_global(&self) -> usize {
        self.globals.len()
    }

    pub fn n_views(&self) -> usize {
        self.views.len()
    }

    pub fn n_local(&self, view: usize) -> usize {
        self.views.get(view).map_or(0, |v| v.globals.len())
    }

    pub fn global_index(&self, id: &str) -> Option<usize> {
        self.by_name.get(id).copied()
    }

    pub fn global_id(&self, index: usize) -> &str {
        &self.globals[index]
    }

    pub fn globals(&self) -> &[String] {
        &self.globals
    }

    pub fn local(&self, view: usize, id: &str) -> Option<usize> {
        let global = self.global_index(id)?;
        self.views.get(view)?.locals.get(&global).copied()
    }

    pub fn local_of_global(&self, view: usize, global: usize) -> Option<usize> {
        self.views.get(view)?.locals.get(&global).copied()
    }

    pub fn global_of_local(&self, view: usize, local: usize) -> Option<usize> {
        self.views.get(view)?.globals.get(local).copied()
    }

    /// Global ids present in `view`, ordered by local index.
    pub fn view_ids(&self, view: usize) -> impl Iterator<Item = &str> + '_ {
        self.views
            .get(view)
            .map(|v| v.globals.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(move |&g| self.globals[g].as_str())
    }

    /// Replaces every id of `remapped` (a dataset produced by
    /// [`remap_gt_ids`]) with the global id it stands for.
    pub fn restore(&self, remapped: &Dataset) -> Result<Dataset> {
        let mut points = remapped.points().to_vec();
        for (index, point) in points.iter_mut().enumerate() {
            let global = point
                .id
                .as_deref()
                .and_then(|s| s.parse::<usize>().ok())
                .and_then(|local| self.global_of_local(point.view, local))
                .ok_or(Error::MissingId { index })?;
            point.id = Some(self.globals[global].clone());
        }
        remapped.with_points(points)
    }
}

/// Relabels ground-truth ids with per-view contiguous indices (written as
/// decimal strings) and returns the map back to the global ids.
pub fn remap_gt_ids(gt: &Dataset) -> Result<(Dataset, IdMap)> {
    if gt.role() != Role::GroundTruth {
        return Err(Error::WrongRole {
            expected: "ground-truth",
        });
    }
    let map = IdMap::build(gt)?;
    let points = gt
        .points()
        .iter()
        .map(|p| {
            let id = p.id.as_deref().expect("checked by IdMap::build");
            let local = map.local(p.view, id).expect("id indexed in its view");
            let mut q = p.clone();
            q.id = Some(local.to_string());
            q
        })
        .collect();
    Ok((gt.with_points(points)?, map))
}
