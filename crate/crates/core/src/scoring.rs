//! Neighborhood centrality, utility and top-k target ranking.
//!
//! Centrality of a node is the mean affinity of its neighbors (0 for an
//! isolated node). Utility blends a node's own affinity with its centrality:
//! `alpha * affinity + (1 - alpha) * centrality`.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, SocialGraph};
use crate::scalar::{cmp_scores, Score};

/// Per-node affinity to one brand; every value lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityTable<T> {
    values: HashMap<NodeId, T>,
}

impl<T: Score> AffinityTable<T> {
    pub fn new<I: IntoIterator<Item = (NodeId, T)>>(values: I) -> Result<Self> {
        let mut map = HashMap::new();
        for (n, v) in values {
            if !v.in_unit_interval() {
                return Err(Error::OutOfUnitRange { what: "affinity", value: v.to_string() });
            }
            map.insert(n, v);
        }
        Ok(Self { values: map })
    }

    pub fn get(&self, node: NodeId) -> Option<T> {
        self.values.get(&node).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Affinities in the graph's dense index order.
    pub fn aligned(&self, g: &SocialGraph) -> Result<Vec<T>> {
        let mut missing = Vec::new();
        let mut count = 0;
        let out: Vec<T> = g
            .nodes()
            .iter()
            .map(|&n| {
                self.get(n).unwrap_or_else(|| {
                    count += 1;
                    if missing.len() < 5 {
                        missing.push(n);
                    }
                    T::zero()
                })
            })
            .collect();
        if count > 0 {
            return Err(Error::MissingAffinities { count, first: missing });
        }
        Ok(out)
    }
}

/// Blend weight in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha<T>(T);

impl<T: Score> Alpha<T> {
    pub fn new(value: T) -> Result<Self> {
        if value.in_unit_interval() {
            Ok(Self(value))
        } else {
            Err(Error::OutOfUnitRange { what: "alpha", value: value.to_string() })
        }
    }

    pub fn get(self) -> T {
        self.0
    }

    pub fn blend(self, affinity: T, centrality: T) -> T {
        self.0 * affinity + (T::one() - self.0) * centrality
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreRecord<T> {
    pub node: NodeId,
    pub affinity: T,
    pub centrality: T,
    pub utility: T,
    pub alpha: T,
}

impl<T: Score> ScoreRecord<T> {
    pub fn score(&self, method: Method) -> T {
        match method {
            Method::Affinity => self.affinity,
            Method::Utility => self.utility,
        }
    }
}

/// Which score orders a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Affinity,
    Utility,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Affinity => "affinity",
            Method::Utility => "utility",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "affinity" => Ok(Method::Affinity),
            "utility" => Ok(Method::Utility),
            _ => Err(Error::param("method", format!("expected affinity or utility, got {s:?}"))),
        }
    }
}

/// Optional pre-ranking filter. Thresholds are inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Filter<T> {
    None,
    MinAffinity(T),
    MinUtility(T),
}

impl<T: Score> Filter<T> {
    fn keeps(&self, r: &ScoreRecord<T>) -> bool {
        match *self {
            Filter::None => true,
            Filter::MinAffinity(t) => r.affinity >= t,
            Filter::MinUtility(t) => r.utility >= t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranking<T> {
    pub records: Vec<ScoreRecord<T>>,
    pub method: Method,
    pub k: usize,
    pub filter: Filter<T>,
}

impl<T: Score> Ranking<T> {
    pub fn node_ids(&self) -> Vec<NodeId> {
        self.records.iter().map(|r| r.node).collect()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn centrality_at<T: Score>(g: &SocialGraph, aff: &[T], index: usize) -> T {
    let nbrs = g.neighbor_indices(index);
    if nbrs.is_empty() {
        return T::zero();
    }
    let sum = nbrs.iter().fold(T::zero(), |acc, &j| acc + aff[j as usize]);
    sum / T::from_count(nbrs.len())
}

/// Mean neighbor affinity of `u`, summed in ascending neighbor id order.
pub fn centrality<T: Score>(u: NodeId, g: &SocialGraph, aff: &AffinityTable<T>) -> Result<T> {
    let i = g.index_of(u)?;
    let nbrs = g.neighbor_indices(i);
    if nbrs.is_empty() {
        return Ok(T::zero());
    }
    let mut sum = T::zero();
    let mut missing = Vec::new();
    for &j in nbrs {
        let v = g.node_id(j as usize);
        match aff.get(v) {
            Some(a) => sum = sum + a,
            None => missing.push(v),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingAffinities { count: missing.len(), first: missing });
    }
    Ok(sum / T::from_count(nbrs.len()))
}

/// `alpha * affinity + (1 - alpha) * centrality`.
pub fn utility<T: Score>(alpha: T, affinity: T, centrality: T) -> Result<T> {
    Ok(Alpha::new(alpha)?.blend(affinity, centrality))
}

/// One record per graph node, in ascending node id order.
pub fn score_all<T: Score>(
    g: &SocialGraph,
    aff: &AffinityTable<T>,
    alpha: Alpha<T>,
) -> Result<Vec<ScoreRecord<T>>> {
    let aligned = aff.aligned(g)?;
    Ok(score_aligned(g, &aligned, alpha))
}

/// [`score_all`] over affinities already aligned to the graph's index order.
pub fn score_aligned<T: Score>(g: &SocialGraph, aff: &[T], alpha: Alpha<T>) -> Vec<ScoreRecord<T>> {
    assert_eq!(aff.len(), g.node_count(), "affinities must align with graph nodes");
    (0..g.node_count())
        .into_par_iter()
        .map(|i| {
            let c = centrality_at(g, aff, i);
            ScoreRecord {
                node: g.node_id(i),
                affinity: aff[i],
                centrality: c,
                utility: alpha.blend(aff[i], c),
                alpha: alpha.get(),
            }
        })
        .collect()
}

/// Sorts by the chosen score descending (ties: ascending node id) after
/// applying `filter`, keeping at most `k` records.
pub fn rank_targets<T: Score>(
    scores: &[ScoreRecord<T>],
    method: Method,
    k: usize,
    filter: Filter<T>,
) -> Ranking<T> {
    let mut records: Vec<ScoreRecord<T>> =
        scores.iter().filter(|r| filter.keeps(r)).copied().collect();
    let order = |a: &ScoreRecord<T>, b: &ScoreRecord<T>| {
        cmp_scores(b.score(method), a.score(method)).then(a.node.cmp(&b.node))
    };
    if k < records.len() {
        records.select_nth_unstable_by(k, order);
        records.truncate(k);
    }
    records.sort_unstable_by(order);
    Ranking { records, method, k, filter }
}

/// Presentation form of a score: truncated (not rounded) to `decimals`
/// places, trailing zeros dropped, the way the evaluation tables print
/// values (0.712 -> "0.71", 0.708 -> "0.7").
pub fn present(value: f64, decimals: u32) -> String {
    let scale = 10f64.powi(decimals as i32);
    // Within 1e-9 of the next grid point counts as on it (0.74 is stored as 0.73999...).
    let truncated = (value * scale + 1e-9).floor() / scale;
    format!("{truncated}")
}

fn fmt_value<T: Score>(v: T, round: Option<u32>) -> String {
    match round {
        Some(d) => present(v.to_f64_lossy(), d),
        None => v.to_string(),
    }
}

/// CSV `node,affinity,centrality,utility,alpha`, full precision unless
/// `round` asks for presentation output.
pub fn write_scores_csv<T: Score, W: Write>(
    records: &[ScoreRecord<T>],
    w: W,
    round: Option<u32>,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["node", "affinity", "centrality", "utility", "alpha"])?;
    for r in records {
        out.write_record([
            r.node.to_string(),
            fmt_value(r.affinity, round),
            fmt_value(r.centrality, round),
            fmt_value(r.utility, round),
            fmt_value(r.alpha, round),
        ])?;
    }
    out.flush().map_err(|e| Error::io("<scores csv>", e))?;
    Ok(())
}

pub fn read_scores_csv<T: Score + FromStr, R: Read>(r: R) -> Result<Vec<ScoreRecord<T>>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = n + 2;
        let field = |i: usize| -> Result<&str> {
            rec.get(i).ok_or(Error::Parse { line, message: "missing column".into() })
        };
        let num = |i: usize| -> Result<T> {
            let s = field(i)?;
            s.parse().map_err(|_| Error::Parse { line, message: format!("invalid number {s:?}") })
        };
        let node = field(0)?
            .parse()
            .map_err(|_| Error::Parse { line, message: "invalid node id".into() })?;
        out.push(ScoreRecord {
            node,
            affinity: num(1)?,
            centrality: num(2)?,
            utility: num(3)?,
            alpha: num(4)?,
        });
    }
    Ok(out)
}
