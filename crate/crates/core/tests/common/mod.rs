#![allow(dead_code)]

pub mod oracle;

use mvhota::synth::SynthConfig;
use mvhota::MetricReport;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-12;

/// A small random scene configuration: at most 3 views, 8 frames and 6
/// points, with every kind of noise mixed in.
pub fn small_config(seed: u64) -> SynthConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut ChaCha8Rng, xs: &[f64]| xs[rng.random_range(0..xs.len())];
    let (w, h) = [(64, 48), (160, 120), (640, 480)][rng.random_range(0..3)];
    SynthConfig {
        n_views: rng.random_range(1..=3),
        n_frames: rng.random_range(1..=8),
        n_points: rng.random_range(1..=6),
        motion_amplitude: pick(&mut rng, &[0.0, 5.0, 30.0]),
        view_drop_prob: pick(&mut rng, &[0.0, 0.2, 0.5]),
        temporal_drop_prob: pick(&mut rng, &[0.0, 0.1, 0.3]),
        pred_noise_sigma: pick(&mut rng, &[0.0, 1.0, 3.0, 6.0]),
        pred_fp_rate: pick(&mut rng, &[0.0, 0.3, 1.0]),
        pred_miss_rate: pick(&mut rng, &[0.0, 0.1, 0.3]),
        id_switch_prob: pick(&mut rng, &[0.0, 0.1, 0.3]),
        ghost_prob: pick(&mut rng, &[0.0, 0.3, 0.8]),
        image_width: w,
        image_height: h,
        seed: rng.random(),
    }
}

fn close(name: &str, a: f64, b: f64, errs: &mut Vec<String>) {
    if (a - b).abs() > TOL {
        errs.push(format!("{name}: library {a} vs oracle {b}"));
    }
}

fn close_opt(name: &str, a: Option<f64>, b: Option<f64>, errs: &mut Vec<String>) {
    match (a, b) {
        (Some(a), Some(b)) => close(name, a, b, errs),
        (None, None) => {}
        _ => errs.push(format!("{name}: library {a:?} vs oracle {b:?}")),
    }
}

fn close_vec(name: &str, a: &[f64], b: &[f64], errs: &mut Vec<String>) {
    if a.len() != b.len() {
        errs.push(format!("{name}: lengths {} vs {}", a.len(), b.len()));
        return;
    }
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        close(&format!("{name}[{i}]"), *x, *y, errs);
    }
}

/// Every score and count of `r` against the oracle; empty when they agree.
pub fn compare(r: &MetricReport, o: &oracle::OracleReport) -> Vec<String> {
    let mut e = Vec::new();
    let t = &r.tallies;
    for (name, a, b) in [
        ("tp", t.tp, o.tp),
        ("fp", t.fp, o.fp),
        ("fn", t.fn_, o.fn_),
        ("id_switches", t.id_switches, o.id_switches),
        ("idtp", t.idtp, o.idtp),
        ("tpc", t.tpc, o.tpc),
        ("fpc", t.fpc, o.fpc),
        ("fnc", t.fnc, o.fnc),
    ] {
        if a != b {
            e.push(format!("{name}: library {a} vs oracle {b}"));
        }
    }
    close("det_acc", r.det_acc, o.det_acc, &mut e);
    close("precision", r.precision, o.precision, &mut e);
    close("recall", r.recall, o.recall, &mut e);
    close("ass_acc", r.ass_acc, o.ass_acc, &mut e);
    close("corres_acc", r.corres_acc, o.corres_acc, &mut e);
    close("mv_hota", r.mv_hota, o.mv_hota, &mut e);
    close("ass_re", r.decomposition.ass_re, o.ass_re, &mut e);
    close("ass_pr", r.decomposition.ass_pr, o.ass_pr, &mut e);
    close("corres_re", r.decomposition.corres_re, o.corres_re, &mut e);
    close("corres_pr", r.decomposition.corres_pr, o.corres_pr, &mut e);
    close_opt("hota", r.hota, o.hota, &mut e);
    close_opt("mota", r.mota, o.mota, &mut e);
    close_opt("idf1", r.idf1, o.idf1, &mut e);
    close_opt("f1", r.f1, o.f1, &mut e);
    close_opt("loc_acc", r.loc_acc, o.loc_acc, &mut e);
    match (&r.occlusion_index, &o.oi_simple) {
        (Some(oi), Some(simple)) => {
            close("oi.simple", oi.simple, *simple, &mut e);
            close_vec("oi.weighted", &oi.weighted_per_view, o.oi_weighted.as_ref().unwrap(), &mut e);
            close_vec("oi.temporal", &oi.temporal_per_view, o.oi_temporal.as_ref().unwrap(), &mut e);
            close_vec(
                "oi.multiview",
                &oi.multiview_per_view,
                o.oi_multiview.as_ref().unwrap(),
                &mut e,
            );
        }
        (None, None) => {}
        (a, b) => e.push(format!("occlusion: library {a:?} vs oracle {b:?}")),
    }
    e
}
