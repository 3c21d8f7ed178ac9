//! Rendering of reports and frame matches.
//!
//! JSON keeps full precision; the table and CSV forms print scores to four
//! decimals and `n/a` for undefined values. All output is a pure function of
//! its input.

use std::fmt::Write as _;

use serde::Serialize;

use crate::metrics::{MatchedSequence, MetricReport};

/// Score columns of the table and CSV forms, in order.
pub const COLUMNS: [&str; 8] = [
    "MOTA", "IDF1", "F1", "DetAcc", "AssAcc", "HOTA", "CorresAcc", "mvHOTA",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
    Csv,
}

pub fn render(report: &MetricReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Table => to_table(report),
        Format::Csv => to_csv(report),
    }
}

pub fn to_json(report: &MetricReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"))
}

fn row(r: &MetricReport) -> [String; 8] {
    [
        cell(r.mota),
        cell(r.idf1),
        cell(r.f1),
        cell(Some(r.det_acc)),
        cell(Some(r.ass_acc)),
        cell(r.hota),
        cell(Some(r.corres_acc)),
        cell(Some(r.mv_hota)),
    ]
}

fn rows(report: &MetricReport) -> Vec<(String, [String; 8])> {
    let mut out = vec![("all".to_string(), row(report))];
    if let Some(classes) = &report.per_class {
        out.extend(classes.iter().map(|(k, r)| (k.clone(), row(r))));
    }
    out
}

fn aligned(header: &[String], body: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            body.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = String::new();
    for line in std::iter::once(header).chain(body.iter().map(Vec::as_slice)) {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (v, &w))| {
                if i == 0 {
                    format!("{v:<w$}")
                } else {
                    format!("{v:>w$}")
                }
            })
            .collect();
        let _ = writeln!(s, "{}", cells.join("  ").trim_end());
    }
    s
}

pub fn to_table(report: &MetricReport) -> String {
    let header: Vec<String> = std::iter::once("scope")
        .chain(COLUMNS)
        .map(String::from)
        .collect();
    let body: Vec<Vec<String>> = rows(report)
        .into_iter()
        .map(|(k, r)| std::iter::once(k).chain(r).collect())
        .collect();
    let mut s = aligned(&header, &body);

    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "alpha {}  LocAcc {}  TP {}  FP {}  FN {}  IDSW {}  TPC {}  FPC {}  FNC {}",
        report.alpha,
        cell(report.loc_acc),
        report.tallies.tp,
        report.tallies.fp,
        report.tallies.fn_,
        report.tallies.id_switches,
        report.tallies.tpc,
        report.tallies.fpc,
        report.tallies.fnc,
    );
    match &report.occlusion_index {
        Some(oi) => {
            let _ = writeln!(
                s,
                "Occlusion Index {}  weighted {}  temporal {}  multi-view {}",
                cell(Some(oi.simple)),
                cell(Some(oi.weighted_mean)),
                cell(Some(oi.temporal_mean)),
                cell(Some(oi.multiview_mean)),
            );
        }
        None => {
            let _ = writeln!(s, "Occlusion Index n/a");
        }
    }

    if let Some(sweep) = &report.alpha_sweep {
        let header: Vec<String> = ["alpha", "DetAcc", "AssAcc", "CorresAcc", "mvHOTA", "HOTA", "LocAcc"]
            .into_iter()
            .map(String::from)
            .collect();
        let body: Vec<Vec<String>> = sweep
            .iter()
            .map(|p| {
                vec![
                    format!("{}", p.alpha),
                    cell(Some(p.det_acc)),
                    cell(Some(p.ass_acc)),
                    cell(Some(p.corres_acc)),
                    cell(Some(p.mv_hota)),
                    cell(p.hota),
                    cell(p.loc_acc),
                ]
            })
            .collect();
        let _ = writeln!(s);
        s.push_str(&aligned(&header, &body));
    }
    s
}

pub fn to_csv(report: &MetricReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scope,{}", COLUMNS.join(","));
    for (k, r) in rows(report) {
        let _ = writeln!(s, "{},{}", csv_field(&k), r.join(","));
    }
    s
}

fn csv_field(v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

#[derive(Serialize)]
struct TpRecord<'a> {
    gt: &'a str,
    pred: &'a str,
    distance: f64,
}

#[derive(Serialize)]
struct FrameRecord<'a> {
    class: Option<&'a str>,
    view: usize,
    frame: usize,
    true_positives: Vec<TpRecord<'a>>,
    false_positives: Vec<&'a str>,
    false_negatives: Vec<&'a str>,
}

/// Every frame match as JSON, with ids written as their original strings.
pub fn matches_json(sequences: &[(Option<String>, MatchedSequence)]) -> String {
    let records: Vec<FrameRecord> = sequences
        .iter()
        .flat_map(|(class, seq)| {
            seq.matches().iter().map(move |m| FrameRecord {
                class: class.as_deref(),
                view: m.view,
                frame: m.frame,
                true_positives: m
                    .true_positives
                    .iter()
                    .map(|tp| TpRecord {
                        gt: seq.gt_ids().global_id(tp.gt),
                        pred: seq.pred_ids().global_id(tp.pred),
                        distance: tp.distance,
                    })
                    .collect(),
                false_positives: m
                    .false_positives
                    .iter()
                    .map(|&p| seq.pred_ids().global_id(p))
                    .collect(),
                false_negatives: m
                    .false_negatives
                    .iter()
                    .map(|&g| seq.gt_ids().global_id(g))
                    .collect(),
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&records).expect("matches serialize");
    s.push('\n');
    s
}
