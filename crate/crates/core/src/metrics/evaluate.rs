use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::config::EvalConfig;
use crate::dataset::{Dataset, Role};
use crate::error::{Error, Result};
use crate::matching::{assign_temporal_ids_with, strip_ids};
use crate::metrics::association::{mean_or, tally_association, view_ass_acc, AssCounts};
use crate::metrics::clearmot::{id_switches, mota};
use crate::metrics::correspondence::{classify_correspondence, CorresCounts};
use crate::metrics::detection::{detection_scores, tally_detections};
use crate::metrics::identity::{identity_tally, IdentityTally};
use crate::metrics::occlusion::{occlusion_index, OcclusionIndex};
use crate::metrics::sequence::MatchedSequence;
use crate::metrics::{hota, mv_hota};
use crate::par::Execution;

/// Class key used in per-class mode for points without a class label.
pub const UNLABELLED_CLASS: &str = "(unlabelled)";

/// Recall / precision split of each accuracy, for error-type analysis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Decomposition {
    pub det_re: f64,
    pub det_pr: f64,
    pub ass_re: f64,
    pub ass_pr: f64,
    pub corres_re: f64,
    pub corres_pr: f64,
}

/// Raw counts behind the scores. Association and correspondence counts are
/// summed over true positives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Tallies {
    pub gt_points: usize,
    pub pred_points: usize,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub id_switches: usize,
    pub idtp: usize,
    pub idfp: usize,
    pub idfn: usize,
    pub tpa: usize,
    pub fpa: usize,
    pub fna: usize,
    pub tpc: usize,
    pub fpc: usize,
    pub fnc: usize,
}

impl std::ops::Add for Tallies {
    type Output = Tallies;

    fn add(self, o: Tallies) -> Tallies {
        Tallies {
            gt_points: self.gt_points + o.gt_points,
            pred_points: self.pred_points + o.pred_points,
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            fn_: self.fn_ + o.fn_,
            id_switches: self.id_switches + o.id_switches,
            idtp: self.idtp + o.idtp,
            idfp: self.idfp + o.idfp,
            idfn: self.idfn + o.idfn,
            tpa: self.tpa + o.tpa,
            fpa: self.fpa + o.fpa,
            fna: self.fna + o.fna,
            tpc: self.tpc + o.tpc,
            fpc: self.fpc + o.fpc,
            fnc: self.fnc + o.fnc,
        }
    }
}

/// Scores of a single view. A score is `None` where the view has nothing to
/// score.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViewScores {
    pub view: usize,
    pub det_acc: Option<f64>,
    pub ass_acc: Option<f64>,
    pub hota: Option<f64>,
    pub mota: Option<f64>,
    pub idf1: Option<f64>,
    pub f1: Option<f64>,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub id_switches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub det_acc: f64,
    pub ass_acc: f64,
    pub corres_acc: f64,
    pub mv_hota: f64,
    pub hota: Option<f64>,
    pub loc_acc: Option<f64>,
}

/// Full evaluation result.
///
/// `det_acc`, `ass_acc`, `corres_acc`, `mv_hota`, `precision`, `recall` and
/// `loc_acc` pool every view. `hota`, `mota`, `idf1` and `f1` are averaged
/// over the views where they are defined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub alpha: f64,
    pub det_acc: f64,
    pub ass_acc: f64,
    pub corres_acc: f64,
    pub mv_hota: f64,
    pub hota: Option<f64>,
    pub mota: Option<f64>,
    pub idf1: Option<f64>,
    pub f1: Option<f64>,
    pub precision: f64,
    pub recall: f64,
    pub loc_acc: Option<f64>,
    pub occlusion_index: Option<OcclusionIndex>,
    pub decomposition: Decomposition,
    pub tallies: Tallies,
    pub per_view: Vec<ViewScores>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_class: Option<BTreeMap<String, MetricReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_sweep: Option<Vec<SweepPoint>>,
}

impl MetricReport {
    pub fn sweep_point(&self) -> SweepPoint {
        SweepPoint {
            alpha: self.alpha,
            det_acc: self.det_acc,
            ass_acc: self.ass_acc,
            corres_acc: self.corres_acc,
            mv_hota: self.mv_hota,
            hota: self.hota,
            loc_acc: self.loc_acc,
        }
    }
}

/// Report together with the matched sequences it was computed from, one per
/// class in per-class mode (keyed by class) and a single unkeyed one
/// otherwise.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub report: MetricReport,
    pub sequences: Vec<(Option<String>, MatchedSequence)>,
}

pub fn evaluate(gt: &Dataset, pred: &Dataset, config: &EvalConfig) -> Result<MetricReport> {
    evaluate_with(gt, pred, config, Execution::default())
}

pub fn evaluate_with(
    gt: &Dataset,
    pred: &Dataset,
    config: &EvalConfig,
    exec: Execution,
) -> Result<MetricReport> {
    Ok(evaluate_detailed(gt, pred, config, exec)?.report)
}

pub fn evaluate_detailed(
    gt: &Dataset,
    pred: &Dataset,
    config: &EvalConfig,
    exec: Execution,
) -> Result<Evaluation> {
    config.validate()?;
    if gt.role() != Role::GroundTruth {
        return Err(Error::WrongRole {
            expected: "ground_truth",
        });
    }
    if pred.role() != Role::Prediction {
        return Err(Error::WrongRole {
            expected: "prediction",
        });
    }
    if !config.per_class {
        let (report, seq) = evaluate_single(gt, pred, config, exec)?;
        return Ok(Evaluation {
            report,
            sequences: vec![(None, seq)],
        });
    }

    let classes: BTreeSet<Option<&str>> = gt
        .points()
        .iter()
        .chain(pred.points())
        .map(|p| p.class_label.as_deref())
        .collect();
    let mut reports = BTreeMap::new();
    let mut sequences = Vec::new();
    for class in classes {
        let select = |d: &Dataset| {
            d.with_points(
                d.points()
                    .iter()
                    .filter(|p| p.class_label.as_deref() == class)
                    .cloned()
                    .collect(),
            )
        };
        let key = class.unwrap_or(UNLABELLED_CLASS).to_string();
        let (report, seq) = evaluate_single(&select(gt)?, &select(pred)?, config, exec)?;
        reports.insert(key.clone(), report);
        sequences.push((Some(key), seq));
    }
    let report = macro_average(gt, config, reports);
    Ok(Evaluation { report, sequences })
}

/// Evaluates at each threshold in `alphas`.
pub fn alpha_sweep(
    gt: &Dataset,
    pred: &Dataset,
    config: &EvalConfig,
    alphas: &[f64],
    exec: Execution,
) -> Result<Vec<SweepPoint>> {
    exec.map(alphas, |&alpha| {
        let config = EvalConfig {
            alpha,
            ..*config
        };
        evaluate_with(gt, pred, &config, exec).map(|r| r.sweep_point())
    })
    .into_iter()
    .collect()
}

fn evaluate_single(
    gt: &Dataset,
    pred: &Dataset,
    config: &EvalConfig,
    exec: Execution,
) -> Result<(MetricReport, MatchedSequence)> {
    let pred = if config.reassign_ids {
        assign_temporal_ids_with(&strip_ids(pred)?, config, exec)?
    } else if pred.has_missing_ids() {
        assign_temporal_ids_with(pred, config, exec)?
    } else {
        pred.clone()
    };
    let seq = MatchedSequence::build(gt, &pred, config.alpha, exec)?;
    let report = score(&seq, gt, config, exec);
    Ok((report, seq))
}

fn score(seq: &MatchedSequence, gt: &Dataset, config: &EvalConfig, exec: Execution) -> MetricReport {
    let zero = config.zero_tp_policy;
    let det = tally_detections(seq.matches());
    let det_scores = detection_scores(det);
    let ass = tally_association(seq);
    let corres = classify_correspondence(seq);

    let ass_acc = mean_or(ass.per_tp.iter().map(AssCounts::jaccard), zero);
    let corres_acc = mean_or(corres.per_tp.iter().map(CorresCounts::jaccard), zero);
    let mv = if det.tp == 0 {
        0.0
    } else {
        mv_hota(det_scores.det_acc, ass_acc, corres_acc)
    };

    let per_view: Vec<(ViewScores, IdentityTally)> = exec.map_range(0..seq.n_views(), |view| {
        let matches = seq.view_matches(view);
        let t = tally_detections(matches);
        let idsw = id_switches(matches);
        let (gt_cells, pred_cells) = seq.view_cells(view);
        let identity = identity_tally(gt_cells, pred_cells, seq.alpha());
        let scored = t.total() > 0;
        let s = detection_scores(t);
        let ass_v = view_ass_acc(&ass, view, zero);
        let scores = ViewScores {
            view,
            det_acc: scored.then_some(s.det_acc),
            ass_acc: scored.then_some(ass_v),
            hota: scored.then(|| hota(s.det_acc, ass_v)),
            mota: mota(t, idsw, seq.view_gt_count(view)),
            idf1: identity.idf1(),
            f1: scored.then_some(s.f1),
            tp: t.tp,
            fp: t.fp,
            fn_: t.fn_,
            id_switches: idsw,
        };
        (scores, identity)
    });

    let tp_distances = seq
        .matches()
        .iter()
        .flat_map(|m| m.true_positives.iter().map(|tp| tp.distance));
    let loc_acc = (det.tp > 0).then(|| mean_or(tp_distances, 0.0));

    let (tpc, fpc, fnc) = corres.totals();
    let tallies = Tallies {
        gt_points: seq.gt_count(),
        pred_points: seq.pred_count(),
        tp: det.tp,
        fp: det.fp,
        fn_: det.fn_,
        id_switches: per_view.iter().map(|(v, _)| v.id_switches).sum(),
        idtp: per_view.iter().map(|(_, i)| i.idtp).sum(),
        idfp: per_view.iter().map(|(_, i)| i.idfp).sum(),
        idfn: per_view.iter().map(|(_, i)| i.idfn).sum(),
        tpa: ass.per_tp.iter().map(|c| c.tpa).sum(),
        fpa: ass.per_tp.iter().map(|c| c.fpa).sum(),
        fna: ass.per_tp.iter().map(|c| c.fna).sum(),
        tpc,
        fpc,
        fnc,
    };
    let decomposition = Decomposition {
        det_re: det_scores.recall,
        det_pr: det_scores.precision,
        ass_re: mean_or(ass.per_tp.iter().map(AssCounts::recall), zero),
        ass_pr: mean_or(ass.per_tp.iter().map(AssCounts::precision), zero),
        corres_re: mean_or(corres.per_tp.iter().map(CorresCounts::recall), zero),
        corres_pr: mean_or(corres.per_tp.iter().map(CorresCounts::precision), zero),
    };

    let per_view: Vec<ViewScores> = per_view.into_iter().map(|(v, _)| v).collect();
    MetricReport {
        alpha: config.alpha,
        det_acc: det_scores.det_acc,
        ass_acc,
        corres_acc,
        mv_hota: mv,
        hota: mean_defined(per_view.iter().map(|v| v.hota)),
        mota: mean_defined(per_view.iter().map(|v| v.mota)),
        idf1: mean_defined(per_view.iter().map(|v| v.idf1)),
        f1: mean_defined(per_view.iter().map(|v| v.f1)),
        precision: det_scores.precision,
        recall: det_scores.recall,
        loc_acc,
        occlusion_index: occlusion_index(gt),
        decomposition,
        tallies,
        per_view,
        per_class: None,
        alpha_sweep: None,
    }
}

/// Mean of the defined values; `None` if there are none.
fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let defined: Vec<f64> = values.flatten().collect();
    (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
}

fn macro_average(
    gt: &Dataset,
    config: &EvalConfig,
    reports: BTreeMap<String, MetricReport>,
) -> MetricReport {
    let rs: Vec<&MetricReport> = reports.values().collect();
    let mean = |f: &dyn Fn(&MetricReport) -> f64| mean_or(rs.iter().map(|r| f(r)), 0.0);
    let mean_opt = |f: &dyn Fn(&MetricReport) -> Option<f64>| mean_defined(rs.iter().map(|r| f(r)));

    let n_views = rs.iter().map(|r| r.per_view.len()).max().unwrap_or(0);
    let per_view = (0..n_views)
        .map(|view| {
            let vs: Vec<&ViewScores> = rs.iter().filter_map(|r| r.per_view.get(view)).collect();
            let avg = |f: &dyn Fn(&ViewScores) -> Option<f64>| mean_defined(vs.iter().map(|v| f(v)));
            ViewScores {
                view,
                det_acc: avg(&|v| v.det_acc),
                ass_acc: avg(&|v| v.ass_acc),
                hota: avg(&|v| v.hota),
                mota: avg(&|v| v.mota),
                idf1: avg(&|v| v.idf1),
                f1: avg(&|v| v.f1),
                tp: vs.iter().map(|v| v.tp).sum(),
                fp: vs.iter().map(|v| v.fp).sum(),
                fn_: vs.iter().map(|v| v.fn_).sum(),
                id_switches: vs.iter().map(|v| v.id_switches).sum(),
            }
        })
        .collect();

    MetricReport {
        alpha: config.alpha,
        det_acc: mean(&|r| r.det_acc),
        ass_acc: mean(&|r| r.ass_acc),
        corres_acc: mean(&|r| r.corres_acc),
        mv_hota: mean(&|r| r.mv_hota),
        hota: mean_opt(&|r| r.hota),
        mota: mean_opt(&|r| r.mota),
        idf1: mean_opt(&|r| r.idf1),
        f1: mean_opt(&|r| r.f1),
        precision: mean(&|r| r.precision),
        recall: mean(&|r| r.recall),
        loc_acc: mean_opt(&|r| r.loc_acc),
        occlusion_index: occlusion_index(gt),
        decomposition: Decomposition {
            det_re: mean(&|r| r.decomposition.det_re),
            det_pr: mean(&|r| r.decomposition.det_pr),
            ass_re: mean(&|r| r.decomposition.ass_re),
            ass_pr: mean(&|r| r.decomposition.ass_pr),
            corres_re: mean(&|r| r.decomposition.corres_re),
            corres_pr: mean(&|r| r.decomposition.corres_pr),
        },
        tallies: rs.iter().fold(Tallies::default(), |acc, r| acc + r.tallies),
        per_view,
        per_class: Some(reports),
        alpha_sweep: None,
    }
}
