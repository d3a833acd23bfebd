//! Canonical segmentation of a weighted path and the sort-value merge of
//! segment sets (node-sum model).
//!
//! Indexing convention: for a path of `m` movable nodes with weights
//! `w_1..w_m`, cut index `j` (0..=m) is the prefix cost `P_j` after node
//! `j`; `P_0` is the base cut before the path. Valleys and peaks are cut
//! indices; a segment covers nodes `valley_i + 1..=valley_{i+1}` and its
//! peak lies strictly inside except that the leftmost negative segment
//! may peak at the base cut.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentsError {
    RangeError { l: usize, r: usize, len: usize },
    InconsistentSelection,
}

impl fmt::Display for SegmentsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentsError::RangeError { l, r, len } => {
                write!(f, "window {l}:{r} out of range for {len} costs")
            }
            SegmentsError::InconsistentSelection => {
                write!(f, "selected segments are not an in-order subset of the segmentation")
            }
        }
    }
}

/// Arg-extrema of a 1-based cost window `l:r`: smallest-index peak,
/// largest-index peak, smallest-index valley, largest-index valley.
pub fn directional_extrema(
    costs: &[i64],
    l: usize,
    r: usize,
) -> Result<(usize, usize, usize, usize), SegmentsError> {
    if l < 1 || r > costs.len() || l > r {
        return Err(SegmentsError::RangeError { l, r, len: costs.len() });
    }
    let mut left_peak = l;
    let mut right_peak = l;
    let mut left_valley = l;
    let mut right_valley = l;
    for i in l..=r {
        let c = costs[i - 1];
        if c > costs[left_peak - 1] {
            left_peak = i;
        }
        if c >= costs[right_peak - 1] {
            right_peak = i;
        }
        if c < costs[left_valley - 1] {
            left_valley = i;
        }
        if c <= costs[right_valley - 1] {
            right_valley = i;
        }
    }
    Ok((left_peak, right_peak, left_valley, right_valley))
}

fn argmax_left(p: &[i64], l: usize, r: usize) -> usize {
    let mut best = l;
    for j in l..=r {
        if p[j] > p[best] {
            best = j;
        }
    }
    best
}

fn argmax_right(p: &[i64], l: usize, r: usize) -> usize {
    let mut best = l;
    for j in l..=r {
        if p[j] >= p[best] {
            best = j;
        }
    }
    best
}

fn argmin_left(p: &[i64], l: usize, r: usize) -> usize {
    let mut best = l;
    for j in l..=r {
        if p[j] < p[best] {
            best = j;
        }
    }
    best
}

fn argmin_right(p: &[i64], l: usize, r: usize) -> usize {
    let mut best = l;
    for j in l..=r {
        if p[j] <= p[best] {
            best = j;
        }
    }
    best
}

/// Exact rational sort value of a segment, `+1/den` for nonnegative
/// segments and `-1/den` for negative ones (`den >= 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SortValue {
    pub negative: bool,
    pub den: i64,
}

impl PartialOrd for SortValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SortValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.negative, other.negative) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            // -1/d grows with d, +1/d shrinks with d
            (true, true) => self.den.cmp(&other.den),
            (false, false) => other.den.cmp(&self.den),
        }
    }
}

impl fmt::Display for SortValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-1/{}", self.den)
        } else {
            write!(f, "1/{}", self.den)
        }
    }
}

/// One valley-to-valley slice of the path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// Covered nodes, 1-based inclusive.
    pub first: usize,
    pub last: usize,
    /// Cut index of the peak (`first - 1 <= peak <= last`).
    pub peak: usize,
    pub left_valley_cost: i64,
    pub right_valley_cost: i64,
    pub peak_cost: i64,
    pub negative: bool,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total weight change across the segment.
    pub fn total(&self) -> i64 {
        self.right_valley_cost - self.left_valley_cost
    }

    pub fn sort_value(&self) -> SortValue {
        if self.negative {
            SortValue { negative: true, den: 1 + self.peak_cost - self.left_valley_cost }
        } else {
            SortValue { negative: false, den: 1 + self.peak_cost - self.right_valley_cost }
        }
    }
}

/// Sort value straight from the path weights (matches
/// [`Segment::sort_value`]).
pub fn sort_value(path_weights: &[i64], segment: &Segment) -> SortValue {
    let _ = path_weights;
    segment.sort_value()
}

/// Segmentation of a weighted path: `mincut` plus the negative segments
/// left of it and the nonnegative segments right of it, which together
/// partition the nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSegmentation {
    /// Cut index of the leftmost minimum prefix cost.
    pub mincut: usize,
    /// Negative then nonnegative segments, in path order.
    pub segments: Vec<Segment>,
    pub negative_count: usize,
}

impl PathSegmentation {
    pub fn negative_segments(&self) -> &[Segment] {
        &self.segments[..self.negative_count]
    }

    pub fn nonnegative_segments(&self) -> &[Segment] {
        &self.segments[self.negative_count..]
    }
}

/// Canonical segmentation of the whole path. Prefix costs are padded
/// with a zero base cut so every node lands in exactly one segment.
pub fn segmentation(path_weights: &[i64]) -> PathSegmentation {
    let m = path_weights.len();
    let mut p = Vec::with_capacity(m + 1);
    p.push(0i64);
    let mut acc = 0i64;
    for &w in path_weights {
        acc += w;
        p.push(acc);
    }
    if m == 0 {
        return PathSegmentation { mincut: 0, segments: Vec::new(), negative_count: 0 };
    }
    let mincut = argmin_left(&p, 0, m);
    // negative segments: walk left from the mincut
    let mut negatives_rev: Vec<Segment> = Vec::new();
    let mut v = mincut;
    while v > 0 {
        let peak = argmax_left(&p, 0, v);
        let lv = argmin_left(&p, 0, peak);
        negatives_rev.push(Segment {
            first: lv + 1,
            last: v,
            peak,
            left_valley_cost: p[lv],
            right_valley_cost: p[v],
            peak_cost: p[peak],
            negative: true,
        });
        v = lv;
    }
    let mut segments: Vec<Segment> = negatives_rev.into_iter().rev().collect();
    let negative_count = segments.len();
    // nonnegative segments: walk right from the mincut
    let mut v = mincut;
    while v < m {
        let peak = argmax_right(&p, v, m);
        let rv = argmin_right(&p, peak, m);
        segments.push(Segment {
            first: v + 1,
            last: rv,
            peak,
            left_valley_cost: p[v],
            right_valley_cost: p[rv],
            peak_cost: p[peak],
            negative: false,
        });
        v = rv;
    }
    debug_assert!(segments.windows(2).all(|w| w[0].last + 1 == w[1].first));
    debug_assert!(segments.last().map_or(true, |s| s.last == m));
    debug_assert!(
        segments.windows(2).all(|w| w[0].sort_value() < w[1].sort_value()),
        "sort values must strictly increase"
    );
    PathSegmentation { mincut, segments, negative_count }
}

/// One path participating in a merge: node ids, weights, and which of
/// its segments take part (`None` selects all).
pub struct MergeItem<'a> {
    pub nodes: &'a [NodeId],
    pub weights: &'a [i64],
    pub select: Option<&'a [usize]>,
}

/// Arranges the selected segments of all paths in nondecreasing sort
/// value, ties broken by `(path index, segment index)`, and returns the
/// flattened node sequence. Within each path the result preserves the
/// original node order.
pub fn merge(items: &[MergeItem<'_>]) -> Result<Vec<NodeId>, SegmentsError> {
    let mut keyed: Vec<(SortValue, usize, usize, &[NodeId])> = Vec::new();
    for (pi, item) in items.iter().enumerate() {
        debug_assert_eq!(item.nodes.len(), item.weights.len());
        let seg = segmentation(item.weights);
        match item.select {
            None => {
                for (si, s) in seg.segments.iter().enumerate() {
                    keyed.push((s.sort_value(), pi, si, &item.nodes[s.first - 1..s.last]));
                }
            }
            Some(chosen) => {
                let mut prev: Option<usize> = None;
                for &si in chosen {
                    if si >= seg.segments.len() || prev.map_or(false, |p| p >= si) {
                        return Err(SegmentsError::InconsistentSelection);
                    }
                    prev = Some(si);
                    let s = &seg.segments[si];
                    keyed.push((s.sort_value(), pi, si, &item.nodes[s.first - 1..s.last]));
                }
            }
        }
    }
    keyed.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    let mut out = Vec::new();
    for (_, _, _, nodes) in keyed {
        out.extend_from_slice(nodes);
    }
    Ok(out)
}

/// Constructive form of the segment-consecutive theorem: given a
/// node-sum-isolated path `path` (endpoints pinned) inside `g` and a
/// schedule of `g`, relocates each interior segment to sit right after
/// the node owning its peak cut. The result is a valid schedule that
/// dominates the input.
pub fn make_segments_contiguous(
    g: &crate::profile::NodeSumGraph,
    path: &[NodeId],
    schedule: &crate::graph::Schedule,
) -> crate::graph::Schedule {
    if path.len() <= 2 {
        return schedule.clone();
    }
    let interior = &path[1..path.len() - 1];
    let weights: Vec<i64> = interior.iter().map(|&v| g.weight(v)).collect();
    let seg = segmentation(&weights);
    let mut order: Vec<NodeId> = schedule.order().to_vec();
    for s in &seg.segments {
        let nodes: Vec<NodeId> = interior[s.first - 1..s.last].to_vec();
        // the node whose completion attains the segment's peak: cut p is
        // after path[p] (p = 0 is the pinned head)
        let anchor = path[s.peak];
        let mut rest: Vec<NodeId> = Vec::with_capacity(order.len());
        for &v in &order {
            if nodes.contains(&v) && v != anchor {
                continue;
            }
            if v == anchor {
                // place the whole segment at the anchor position; the
                // anchor itself stays put when it is not a segment node
                if nodes.contains(&anchor) {
                    rest.extend_from_slice(&nodes);
                } else {
                    rest.push(v);
                    rest.extend_from_slice(&nodes);
                }
            } else {
                rest.push(v);
            }
        }
        order = rest;
    }
    debug_assert!(crate::graph::Schedule::new(&g.dag, order.clone()).is_ok());
    crate::graph::Schedule::new_unchecked(order)
}
