//! Definition-level reference evaluator. Everything here enumerates instead
//! of optimising and shares no code with the library beyond the dataset
//! types.

use std::collections::{BTreeMap, BTreeSet};

use mvhota::{Dataset, Point};

#[derive(Debug, Clone, Copy)]
pub struct Obs<'a> {
    pub id: &'a str,
    pub x: f64,
    pub y: f64,
}

fn dist(a: &Obs, b: &Obs) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

fn cells<'a>(d: &'a Dataset, n_views: usize, n_frames: usize) -> Vec<Vec<Vec<Obs<'a>>>> {
    let mut out = vec![vec![Vec::new(); n_frames]; n_views];
    for p in d.points() {
        out[p.view][p.frame].push(Obs {
            id: p.id.as_deref().expect("oracle needs ids"),
            x: p.x,
            y: p.y,
        });
    }
    for view in &mut out {
        for cell in view {
            cell.sort_by(|a, b| a.id.cmp(b.id));
        }
    }
    out
}

/// Smallest total of `d - bound` over partial matchings of pairs closer than
/// `alpha`, using only the given rows and columns.
fn best_gain(gt: &[Obs], pred: &[Obs], rows: &[usize], cols: &[usize], alpha: f64, bound: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn go(i: usize, gt: &[Obs], pred: &[Obs], rows: &[usize], cols: &[usize], used: &mut Vec<bool>, alpha: f64, bound: f64) -> f64 {
        if i == rows.len() {
            return 0.0;
        }
        let mut best = go(i + 1, gt, pred, rows, cols, used, alpha, bound);
        for (j, &c) in cols.iter().enumerate() {
            let d = dist(&gt[rows[i]], &pred[c]);
            if !used[j] && d < alpha {
                used[j] = true;
                best = best.min(d - bound + go(i + 1, gt, pred, rows, cols, used, alpha, bound));
                used[j] = false;
            }
        }
        best
    }
    go(0, gt, pred, rows, cols, &mut vec![false; cols.len()], alpha, bound)
}

/// Thresholded matching straight from its definition: costs are `d` below
/// `alpha` and `bound` otherwise, an assignment of `min(rows, cols)` pairs
/// of least total cost is chosen, ties go to the lexicographically smallest
/// (row, col) sequence, and the pairs closer than `alpha` are the matches.
///
/// Any assignment costs `bound * k` plus `d - bound` for each of its close
/// pairs, so the least cost of completing a prefix is found by enumerating
/// partial matchings of close pairs only. Rows are then fixed in order, each
/// to the first choice that still admits an optimal completion.
pub fn brute_match(gt: &[Obs], pred: &[Obs], alpha: f64, bound: f64) -> Vec<(usize, usize)> {
    let k = gt.len().min(pred.len());
    let all_rows: Vec<usize> = (0..gt.len()).collect();
    let all_cols: Vec<usize> = (0..pred.len()).collect();
    let optimum = bound * k as f64 + best_gain(gt, pred, &all_rows, &all_cols, alpha, bound);
    let tol = 1e-9 * bound.max(1.0);

    let mut used = vec![false; pred.len()];
    let mut prefix = 0.0;
    let mut assigned = 0;
    let mut out = Vec::new();
    for r in 0..gt.len() {
        let rest_rows: Vec<usize> = (r + 1..gt.len()).collect();
        let completion = |used: &[bool], assigned: usize| -> Option<f64> {
            let left = k - assigned;
            let cols: Vec<usize> = (0..pred.len()).filter(|&c| !used[c]).collect();
            (left <= rest_rows.len() && left <= cols.len()).then(|| {
                bound * left as f64 + best_gain(gt, pred, &rest_rows, &cols, alpha, bound)
            })
        };
        let mut chosen = None;
        if assigned < k {
            for c in 0..pred.len() {
                if used[c] {
                    continue;
                }
                let d = dist(&gt[r], &pred[c]);
                let cost = if d < alpha { d } else { bound };
                used[c] = true;
                let total = completion(&used, assigned + 1).map(|t| prefix + cost + t);
                used[c] = false;
                if total.is_some_and(|t| t <= optimum + tol) {
                    chosen = Some((c, cost, d));
                    break;
                }
            }
        }
        match chosen {
            Some((c, cost, d)) => {
                used[c] = true;
                prefix += cost;
                assigned += 1;
                if d < alpha {
                    out.push((r, c));
                }
            }
            None => assert!(
                completion(&used, assigned).is_some(),
                "no optimal completion"
            ),
        }
    }
    out
}

/// Largest total weight of a one-to-one pairing of rows and columns, by
/// exhaustive search over partial bijections that use positive entries.
pub fn brute_max_pairing(w: &[Vec<usize>]) -> usize {
    fn go(r: usize, w: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
        if r == w.len() {
            return 0;
        }
        let mut best = go(r + 1, w, used);
        for c in 0..used.len() {
            if !used[c] && w[r][c] > 0 {
                used[c] = true;
                best = best.max(w[r][c] + go(r + 1, w, used));
                used[c] = false;
            }
        }
        best
    }
    let cols = w.first().map_or(0, Vec::len);
    go(0, w, &mut vec![false; cols])
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub det_acc: f64,
    pub precision: f64,
    pub recall: f64,
    pub ass_acc: f64,
    pub corres_acc: f64,
    pub mv_hota: f64,
    pub hota: Option<f64>,
    pub mota: Option<f64>,
    pub idf1: Option<f64>,
    pub f1: Option<f64>,
    pub loc_acc: Option<f64>,
    pub id_switches: usize,
    pub idtp: usize,
    pub tpc: usize,
    pub fpc: usize,
    pub fnc: usize,
    pub ass_re: f64,
    pub ass_pr: f64,
    pub corres_re: f64,
    pub corres_pr: f64,
    pub oi_simple: Option<f64>,
    pub oi_weighted: Option<Vec<f64>>,
    pub oi_temporal: Option<Vec<f64>>,
    pub oi_multiview: Option<Vec<f64>>,
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn frac(num: usize, den: usize, empty: f64) -> f64 {
    if den == 0 {
        empty
    } else {
        num as f64 / den as f64
    }
}

struct Tp<'a> {
    view: usize,
    frame: usize,
    gt: &'a str,
    pred: &'a str,
    d: f64,
}

/// Evaluates `pred` (every point carrying an id) against `gt` straight from
/// the definitions, with AssAcc and CorresAcc set to 0 when there is no true
/// positive.
pub fn evaluate(gt: &Dataset, pred: &Dataset, alpha: f64) -> OracleReport {
    let nv = gt.n_views().max(pred.n_views());
    let nf = gt.n_frames().max(pred.n_frames());
    let g = gt.geometry();
    let bound = (f64::from(g.image_width).powi(2) + f64::from(g.image_height).powi(2)).sqrt();
    let gc = cells(gt, nv, nf);
    let pc = cells(pred, nv, nf);

    // matches[v][f] = list of (gt index, pred index)
    let mut matches = vec![vec![Vec::new(); nf]; nv];
    let mut tps: Vec<Tp> = Vec::new();
    for v in 0..nv {
        for f in 0..nf {
            matches[v][f] = brute_match(&gc[v][f], &pc[v][f], alpha, bound);
            for &(r, c) in &matches[v][f] {
                tps.push(Tp {
                    view: v,
                    frame: f,
                    gt: gc[v][f][r].id,
                    pred: pc[v][f][c].id,
                    d: dist(&gc[v][f][r], &pc[v][f][c]),
                });
            }
        }
    }
    let n_gt: usize = gc.iter().flatten().map(Vec::len).sum();
    let n_pred: usize = pc.iter().flatten().map(Vec::len).sum();
    let tp = tps.len();
    let fp = n_pred - tp;
    let fn_ = n_gt - tp;

    let is_tp = |v: usize, f: usize, gid: &str| tps.iter().any(|t| t.view == v && t.frame == f && t.gt == gid);

    // Association: count occurrences within the TP's view.
    let mut ass_j = Vec::new();
    let mut ass_r = Vec::new();
    let mut ass_p = Vec::new();
    for t in &tps {
        let tpa = tps
            .iter()
            .filter(|u| u.view == t.view && u.gt == t.gt && u.pred == t.pred)
            .count();
        let gt_occ = gt.points().iter().filter(|p| p.view == t.view && p.id.as_deref() == Some(t.gt)).count();
        let pred_occ = pred.points().iter().filter(|p| p.view == t.view && p.id.as_deref() == Some(t.pred)).count();
        let fna = gt_occ - tpa;
        let fpa = pred_occ - tpa;
        ass_j.push(tpa as f64 / (tpa + fna + fpa) as f64);
        ass_r.push(tpa as f64 / (tpa + fna) as f64);
        ass_p.push(tpa as f64 / (tpa + fpa) as f64);
    }

    // Correspondence.
    let (mut tpc, mut fpc, mut fnc) = (0, 0, 0);
    let mut cor_j = Vec::new();
    let mut cor_r = Vec::new();
    let mut cor_p = Vec::new();
    for t in &tps {
        let (mut a, mut b, mut c) = (0, 0, 0);
        for w in 0..nv {
            if w == t.view {
                continue;
            }
            let gt_there = gc[w][t.frame].iter().any(|o| o.id == t.gt);
            let pred_there = pc[w][t.frame].iter().any(|o| o.id == t.pred);
            if gt_there {
                if is_tp(w, t.frame, t.gt) {
                    a += 1;
                } else {
                    c += 1;
                }
            } else if pred_there {
                b += 1;
            } else {
                a += 1;
            }
        }
        tpc += a;
        fpc += b;
        fnc += c;
        cor_j.push(frac(a, a + b + c, 1.0));
        cor_r.push(frac(a, a + c, 1.0));
        cor_p.push(frac(a, a + b, 1.0));
    }

    let det_acc = frac(tp, tp + fp + fn_, 0.0);
    let ass_acc = mean(&ass_j).unwrap_or(0.0);
    let corres_acc = mean(&cor_j).unwrap_or(0.0);
    let mv_hota = if tp == 0 {
        0.0
    } else {
        (det_acc * ass_acc * corres_acc).cbrt()
    };

    // Per-view baselines.
    let mut hotas = Vec::new();
    let mut motas = Vec::new();
    let mut idf1s = Vec::new();
    let mut f1s = Vec::new();
    let mut id_switches = 0;
    let mut idtp_total = 0;
    for v in 0..nv {
        let vt: Vec<usize> = (0..tps.len()).filter(|&i| tps[i].view == v).collect();
        let vgt: usize = gc[v].iter().map(Vec::len).sum();
        let vpred: usize = pc[v].iter().map(Vec::len).sum();
        let vtp = vt.len();
        let vfp = vpred - vtp;
        let vfn = vgt - vtp;

        let mut last: BTreeMap<&str, &str> = BTreeMap::new();
        let mut sw = 0;
        for f in 0..nf {
            for t in tps.iter().filter(|t| t.view == v && t.frame == f) {
                if let Some(prev) = last.insert(t.gt, t.pred) {
                    if prev != t.pred {
                        sw += 1;
                    }
                }
            }
        }
        id_switches += sw;

        if vtp + vfp + vfn > 0 {
            let d = vtp as f64 / (vtp + vfp + vfn) as f64;
            let a = mean(&vt.iter().map(|&i| ass_j[i]).collect::<Vec<_>>()).unwrap_or(0.0);
            hotas.push((d * a).sqrt());
            f1s.push(2.0 * vtp as f64 / (2 * vtp + vfp + vfn) as f64);
        }
        if vgt > 0 {
            motas.push(1.0 - (vfn + vfp + sw) as f64 / vgt as f64);
        }

        let gids: BTreeSet<&str> = gc[v].iter().flatten().map(|o| o.id).collect();
        let pids: BTreeSet<&str> = pc[v].iter().flatten().map(|o| o.id).collect();
        let gids: Vec<&str> = gids.into_iter().collect();
        let pids: Vec<&str> = pids.into_iter().collect();
        let mut co = vec![vec![0usize; pids.len()]; gids.len()];
        for f in 0..nf {
            for go in &gc[v][f] {
                for po in &pc[v][f] {
                    if dist(go, po) < alpha {
                        let r = gids.iter().position(|&x| x == go.id).unwrap();
                        let c = pids.iter().position(|&x| x == po.id).unwrap();
                        co[r][c] += 1;
                    }
                }
            }
        }
        let idtp = brute_max_pairing(&co);
        idtp_total += idtp;
        if vgt + vpred > 0 {
            idf1s.push(2.0 * idtp as f64 / (vgt + vpred) as f64);
        }
    }

    let (oi_simple, oi_weighted, oi_temporal, oi_multiview) = occlusion(gt);

    OracleReport {
        tp,
        fp,
        fn_,
        det_acc,
        precision: frac(tp, tp + fp, 0.0),
        recall: frac(tp, tp + fn_, 0.0),
        ass_acc,
        corres_acc,
        mv_hota,
        hota: mean(&hotas),
        mota: mean(&motas),
        idf1: mean(&idf1s),
        f1: mean(&f1s),
        loc_acc: mean(&tps.iter().map(|t| t.d).collect::<Vec<_>>()),
        id_switches,
        idtp: idtp_total,
        tpc,
        fpc,
        fnc,
        ass_re: mean(&ass_r).unwrap_or(0.0),
        ass_pr: mean(&ass_p).unwrap_or(0.0),
        corres_re: mean(&cor_r).unwrap_or(0.0),
        corres_pr: mean(&cor_p).unwrap_or(0.0),
        oi_simple,
        oi_weighted,
        oi_temporal,
        oi_multiview,
    }
}

type Oi = (Option<f64>, Option<Vec<f64>>, Option<Vec<f64>>, Option<Vec<f64>>);

/// Occlusion indices by direct evaluation of the double sums.
pub fn occlusion(gt: &Dataset) -> Oi {
    if gt.is_empty() {
        return (None, None, None, None);
    }
    let m = gt.n_views();
    let n = gt.n_frames();
    let ids: BTreeSet<&str> = gt.points().iter().map(|p| p.id.as_deref().unwrap()).collect();
    let present = |id: &str, v: usize, f: usize| {
        gt.points()
            .iter()
            .any(|p: &Point| p.view == v && p.frame == f && p.id.as_deref() == Some(id))
    };

    let mut observed = 0;
    let mut full = 0;
    for &id in &ids {
        for f in 0..n {
            let k = (0..m).filter(|&v| present(id, v, f)).count();
            if k > 0 {
                observed += 1;
            }
            if k == m {
                full += 1;
            }
        }
    }
    let simple = 1.0 - full as f64 / observed as f64;

    let scale = (n * ids.len()) as f64;
    let per_view = |use_p: bool, use_c: bool| -> Vec<f64> {
        (0..m)
            .map(|v| {
                let mut s = 0.0;
                for &id in &ids {
                    for f in 0..n {
                        let p = if !use_p || present(id, v, f) { 1.0 } else { 0.0 };
                        let c = if use_c {
                            (0..m).filter(|&w| present(id, w, f)).count() as f64 / m as f64
                        } else {
                            1.0
                        };
                        s += p * c;
                    }
                }
                1.0 - s / scale
            })
            .collect()
    };
    (
        Some(simple),
        Some(per_view(true, true)),
        Some(per_view(true, false)),
        Some(per_view(false, true)),
    )
}

/// Minimum over every assignment of `min(rows, cols)` pairs, summed in row
/// order, together with the lexicographically smallest pair sequence that
/// attains it exactly.
pub fn brute_assignment(costs: &[Vec<f64>]) -> (f64, Vec<(usize, usize)>) {
    let rows = costs.len();
    let cols = costs.first().map_or(0, Vec::len);
    let k = rows.min(cols);
    let mut best: (f64, Vec<(usize, usize)>) = (f64::INFINITY, Vec::new());

    fn go(
        r: usize,
        picked: usize,
        k: usize,
        costs: &[Vec<f64>],
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, usize)>,
        best: &mut (f64, Vec<(usize, usize)>),
    ) {
        let rows = costs.len();
        if picked == k {
            let total: f64 = cur.iter().map(|&(r, c)| costs[r][c]).sum();
            if total < best.0 {
                *best = (total, cur.clone());
            }
            return;
        }
        if rows - r < k - picked {
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                cur.push((r, c));
                go(r + 1, picked + 1, k, costs, used, cur, best);
                cur.pop();
                used[c] = false;
            }
        }
        go(r + 1, picked, k, costs, used, cur, best);
    }
    if k == 0 {
        return (0.0, Vec::new());
    }
    go(0, 0, k, costs, &mut vec![false; cols], &mut Vec::new(), &mut best);
    best
}
