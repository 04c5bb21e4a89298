//! Selection quality metrics and the random-selection baseline.
//!
//! A node is a *target* when its affinity is at least `tau`. For a selection
//! `S`, `direct` counts targets inside `S` and `from_neighborhoods` counts
//! distinct targets adjacent to `S` but outside it.

use std::fmt::Write as _;
use std::io::Write;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, SocialGraph};
use crate::scalar::Score;
use crate::scoring::{rank_targets, score_aligned, Alpha, AffinityTable, Filter, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EvalMetrics<T> {
    pub direct: usize,
    pub from_neighborhoods: usize,
    pub total: usize,
    pub tau: T,
    /// Selection size.
    pub k: usize,
}

fn check_tau<T: Score>(tau: T) -> Result<()> {
    if tau.in_unit_interval() {
        Ok(())
    } else {
        Err(Error::OutOfUnitRange { what: "tau", value: tau.to_string() })
    }
}

/// Metrics for a selection given as dense graph indices. `mark` is scratch
/// space of length `node_count`, all zero on entry and on return.
fn evaluate_indices<T: Score>(
    g: &SocialGraph,
    aff: &[T],
    selection: &[usize],
    tau: T,
    mark: &mut [u8],
) -> EvalMetrics<T> {
    const SELECTED: u8 = 1;
    const SEEN: u8 = 2;
    let mut direct = 0;
    let mut k = 0;
    for &i in selection {
        if mark[i] == SELECTED {
            continue;
        }
        mark[i] = SELECTED;
        k += 1;
        if aff[i] >= tau {
            direct += 1;
        }
    }
    let mut from_neighborhoods = 0;
    let mut touched = Vec::new();
    for &i in selection {
        for &j in g.neighbor_indices(i) {
            let j = j as usize;
            if mark[j] == 0 {
                mark[j] = SEEN;
                touched.push(j);
                if aff[j] >= tau {
                    from_neighborhoods += 1;
                }
            }
        }
    }
    for &i in selection.iter().chain(&touched) {
        mark[i] = 0;
    }
    EvalMetrics { direct, from_neighborhoods, total: direct + from_neighborhoods, tau, k }
}

/// Evaluates a selection of node ids; duplicates count once.
pub fn evaluate_selection<T: Score>(
    g: &SocialGraph,
    aff: &AffinityTable<T>,
    selection: &[NodeId],
    tau: T,
) -> Result<EvalMetrics<T>> {
    check_tau(tau)?;
    let aligned = aff.aligned(g)?;
    let idx = selection.iter().map(|&n| g.index_of(n)).collect::<Result<Vec<_>>>()?;
    let mut mark = vec![0u8; g.node_count()];
    Ok(evaluate_indices(g, &aligned, &idx, tau, &mut mark))
}

/// Arithmetic means over baseline trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanMetrics {
    pub total: f64,
    pub direct: f64,
    pub from_neighborhoods: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineResult<T> {
    pub mean: MeanMetrics,
    pub trials: Vec<EvalMetrics<T>>,
}

/// Seed for trial `trial` derived from the master seed; independent of
/// execution order, so serial and parallel runs agree bit for bit.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn baseline_aligned<T: Score>(
    g: &SocialGraph,
    aff: &[T],
    k: usize,
    trials: usize,
    tau: T,
    seed: u64,
) -> Result<BaselineResult<T>> {
    let n = g.node_count();
    if k > n {
        return Err(Error::param("k", format!("{k} exceeds node count {n}")));
    }
    if trials == 0 {
        return Err(Error::param("trials", "need at least one trial"));
    }
    let per_trial: Vec<EvalMetrics<T>> = (0..trials)
        .into_par_iter()
        .map_init(
            || vec![0u8; n],
            |mark, t| {
                let picked = sample(&mut trial_rng(seed, t), n, k).into_vec();
                evaluate_indices(g, aff, &picked, tau, mark)
            },
        )
        .collect();
    let mean = |f: fn(&EvalMetrics<T>) -> usize| {
        per_trial.iter().map(|m| f(m) as u64).sum::<u64>() as f64 / trials as f64
    };
    Ok(BaselineResult {
        mean: MeanMetrics {
            total: mean(|m| m.total),
            direct: mean(|m| m.direct),
            from_neighborhoods: mean(|m| m.from_neighborhoods),
        },
        trials: per_trial,
    })
}

/// Averages `trials` uniform selections of `k` distinct nodes.
pub fn random_baseline<T: Score>(
    g: &SocialGraph,
    aff: &AffinityTable<T>,
    k: usize,
    trials: usize,
    tau: T,
    seed: u64,
) -> Result<BaselineResult<T>> {
    check_tau(tau)?;
    let aligned = aff.aligned(g)?;
    baseline_aligned(g, &aligned, k, trials, tau, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalMethod<T> {
    Affinity,
    Utility(T),
    Random,
}

impl<T: Score> EvalMethod<T> {
    pub fn name(&self) -> &'static str {
        match self {
            EvalMethod::Affinity => "affinity",
            EvalMethod::Utility(_) => "utility",
            EvalMethod::Random => "random",
        }
    }

    pub fn alpha(&self) -> Option<T> {
        match *self {
            EvalMethod::Utility(a) => Some(a),
            _ => None,
        }
    }

    fn label(&self) -> String {
        match self {
            EvalMethod::Utility(a) => format!("Utility (alpha={a})"),
            EvalMethod::Affinity => "Affinity".into(),
            EvalMethod::Random => "Random".into(),
        }
    }
}

/// Counts summed over `trials` selections (one for deterministic rankings);
/// the reported values are the per-trial means.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow<T> {
    pub method: EvalMethod<T>,
    pub trials: usize,
    pub sum_total: u64,
    pub sum_direct: u64,
    pub sum_from_neighborhoods: u64,
}

impl<T> ReportRow<T> {
    fn from_trials(method: EvalMethod<T>, trials: &[EvalMetrics<T>]) -> Self {
        let sum = |f: fn(&EvalMetrics<T>) -> usize| trials.iter().map(|m| f(m) as u64).sum();
        Self {
            method,
            trials: trials.len(),
            sum_total: sum(|m| m.total),
            sum_direct: sum(|m| m.direct),
            sum_from_neighborhoods: sum(|m| m.from_neighborhoods),
        }
    }

    fn mean(&self, sum: u64) -> f64 {
        sum as f64 / self.trials as f64
    }

    pub fn total(&self) -> f64 {
        self.mean(self.sum_total)
    }

    pub fn direct(&self) -> f64 {
        self.mean(self.sum_direct)
    }

    pub fn from_neighborhoods(&self) -> f64 {
        self.mean(self.sum_from_neighborhoods)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report<T> {
    pub rows: Vec<ReportRow<T>>,
    pub k: usize,
    pub tau: T,
    pub trials: usize,
    pub seed: u64,
}

/// Rows for affinity ranking, utility ranking per alpha and the random
/// baseline. Rankings are unfiltered; `tau` only decides who counts as a
/// target.
pub fn compare_methods<T: Score>(
    g: &SocialGraph,
    aff: &AffinityTable<T>,
    alphas: &[T],
    k: usize,
    trials: usize,
    tau: T,
    seed: u64,
) -> Result<Report<T>> {
    check_tau(tau)?;
    let alphas = alphas.iter().map(|&a| Alpha::new(a)).collect::<Result<Vec<_>>>()?;
    let n = g.node_count();
    if k > n {
        return Err(Error::param("k", format!("{k} exceeds node count {n}")));
    }
    let aligned = aff.aligned(g)?;
    let mut mark = vec![0u8; n];
    let mut eval_top = |records: &[crate::scoring::ScoreRecord<T>], method: Method| {
        let ranking = rank_targets(records, method, k, Filter::None);
        let idx: Vec<usize> =
            ranking.records.iter().map(|r| g.index_of(r.node).expect("scored node")).collect();
        evaluate_indices(g, &aligned, &idx, tau, &mut mark)
    };

    let mut rows = Vec::with_capacity(alphas.len() + 2);
    let by_affinity = score_aligned(g, &aligned, Alpha::new(T::one())?);
    rows.push(ReportRow::from_trials(EvalMethod::Affinity, &[eval_top(&by_affinity, Method::Affinity)]));
    for alpha in alphas {
        let scores = score_aligned(g, &aligned, alpha);
        let m = eval_top(&scores, Method::Utility);
        rows.push(ReportRow::from_trials(EvalMethod::Utility(alpha.get()), &[m]));
    }
    let base = baseline_aligned(g, &aligned, k, trials, tau, seed)?;
    rows.push(ReportRow::from_trials(EvalMethod::Random, &base.trials));
    Ok(Report { rows, k, tau, trials, seed })
}

fn fraction(part: u64, whole: u64) -> f64 {
    if whole == 0 {
        0.0
    } else {
        part as f64 / whole as f64
    }
}

impl<T: Score> Report<T> {
    /// CSV `method,alpha,total,direct,from_neighborhoods`, optionally with
    /// the two parts as fractions of `total`.
    pub fn write_csv<W: Write>(&self, w: W, fractions: bool) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["method", "alpha", "total", "direct", "from_neighborhoods"];
        if fractions {
            header.extend(["direct_fraction", "from_neighborhoods_fraction"]);
        }
        out.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                r.method.name().to_string(),
                r.method.alpha().map(|a| a.to_string()).unwrap_or_default(),
                r.total().to_string(),
                r.direct().to_string(),
                r.from_neighborhoods().to_string(),
            ];
            if fractions {
                rec.push(fraction(r.sum_direct, r.sum_total).to_string());
                rec.push(fraction(r.sum_from_neighborhoods, r.sum_total).to_string());
            }
            out.write_record(&rec)?;
        }
        out.flush().map_err(|e| Error::io("<report csv>", e))?;
        Ok(())
    }

    /// Aligned plain-text table for terminals.
    pub fn to_table(&self) -> String {
        let header = ["Method", "# of Target Nodes", "Directly Reached", "From Neighborhoods"];
        let body: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                [r.method.label(), r.total().to_string(), r.direct().to_string(), r.from_neighborhoods().to_string()]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &body {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut s = String::new();
        let line = |s: &mut String, cells: [&str; 4]| {
            let _ = writeln!(
                s,
                "{:<w0$}  {:>w1$}  {:>w2$}  {:>w3$}",
                cells[0],
                cells[1],
                cells[2],
                cells[3],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2],
                w3 = widths[3]
            );
        };
        line(&mut s, header);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        line(&mut s, [&rule[0], &rule[1], &rule[2], &rule[3]]);
        for row in &body {
            line(&mut s, [&row[0], &row[1], &row[2], &row[3]]);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> (SocialGraph, AffinityTable<f64>) {
        let g = SocialGraph::from_edges([(1, 2), (2, 3)]);
        let t = AffinityTable::new([(1, 0.9), (2, 0.1), (3, 0.9)]).unwrap();
        (g, t)
    }

    #[test]
    fn empty_selection() {
        let (g, t) = path();
        let m = evaluate_selection(&g, &t, &[], 0.6).unwrap();
        assert_eq!((m.direct, m.from_neighborhoods, m.total), (0, 0, 0));
    }

    #[test]
    fn path_example() {
        let (g, t) = path();
        let m = evaluate_selection(&g, &t, &[2], 0.6).unwrap();
        assert_eq!((m.direct, m.from_neighborhoods, m.total), (0, 2, 2));
        assert_eq!(m.k, 1);
    }

    #[test]
    fn whole_graph_selection() {
        let (g, t) = path();
        let m = evaluate_selection(&g, &t, &[1, 2, 3], 0.6).unwrap();
        assert_eq!((m.direct, m.from_neighborhoods), (2, 0));
    }

    #[test]
    fn duplicates_and_errors() {
        let (g, t) = path();
        let m = evaluate_selection(&g, &t, &[1, 1], 0.6).unwrap();
        assert_eq!((m.k, m.direct, m.from_neighborhoods), (1, 1, 0));
        assert!(matches!(evaluate_selection(&g, &t, &[8], 0.6), Err(Error::UnknownNode(8))));
        assert!(evaluate_selection(&g, &t, &[1], 1.5).is_err());
    }

    #[test]
    fn threshold_is_inclusive() {
        let g = SocialGraph::from_edges([(1, 2)]);
        let t = AffinityTable::new([(1, 0.5), (2, 0.5)]).unwrap();
        let m = evaluate_selection(&g, &t, &[1], 0.5).unwrap();
        assert_eq!(m.total, 2);
    }

    #[test]
    fn baseline_full_selection_matches_direct_evaluation() {
        let (g, t) = path();
        let b = random_baseline(&g, &t, 3, 1, 0.6, 11).unwrap();
        let direct = evaluate_selection(&g, &t, &[1, 2, 3], 0.6).unwrap();
        assert_eq!(b.trials, vec![direct]);
        assert_eq!(b.mean.total, direct.total as f64);
    }

    #[test]
    fn baseline_is_seeded() {
        let g = SocialGraph::from_edges((0..50u64).map(|i| (i, (i * 7 + 3) % 50)));
        let t = AffinityTable::new(g.nodes().iter().map(|&n| (n, (n % 10) as f64 / 10.0))).unwrap();
        let a = random_baseline(&g, &t, 5, 20, 0.6, 3).unwrap();
        let b = random_baseline(&g, &t, 5, 20, 0.6, 3).unwrap();
        assert_eq!(a, b);
        let c = random_baseline(&g, &t, 5, 20, 0.6, 4).unwrap();
        assert_ne!(a.trials, c.trials);
    }

    #[test]
    fn baseline_errors() {
        let (g, t) = path();
        assert!(random_baseline(&g, &t, 4, 1, 0.6, 0).is_err());
        assert!(random_baseline(&g, &t, 1, 0, 0.6, 0).is_err());
    }

    #[test]
    fn compare_single_node_graph() {
        let g = SocialGraph::from_nodes_and_edges([1], []);
        let t = AffinityTable::new([(1, 0.8)]).unwrap();
        let r = compare_methods(&g, &t, &[0.25, 0.5, 0.75], 1, 5, 0.6, 1).unwrap();
        assert_eq!(r.rows.len(), 5);
        for row in &r.rows {
            assert_eq!((row.total(), row.direct(), row.from_neighborhoods()), (1.0, 1.0, 0.0));
        }
    }

    #[test]
    fn report_outputs() {
        let (g, t) = path();
        let r = compare_methods(&g, &t, &[0.5], 1, 4, 0.6, 9).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("method,alpha,total,direct,from_neighborhoods"));
        assert!(lines.next().unwrap().starts_with("affinity,,"));
        assert!(lines.next().unwrap().starts_with("utility,0.5,"));
        assert!(lines.next().unwrap().starts_with("random,,"));
        let table = r.to_table();
        assert!(table.contains("Utility (alpha=0.5)"));
        let mut buf = Vec::new();
        r.write_csv(&mut buf, true).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("direct_fraction"));
    }
}
