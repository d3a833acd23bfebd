//! Node-sum memory model: weighted graphs, memory profiles and the
//! dominance relation in both of its formulations.
//!
//! Weights are exact `i64`; every accumulation is overflow-checked and
//! aborts with [`ProfileError::ArithmeticOverflow`] instead of wrapping.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Dag, GraphError, NodeId, Schedule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileError {
    WeightCountMismatch { nodes: usize, weights: usize },
    NotASchedule,
    EmptyProfile,
    ArithmeticOverflow,
    NoDominantCandidate,
    NoCandidates,
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::WeightCountMismatch { nodes, weights } => {
                write!(f, "graph has {nodes} nodes but {weights} weights were given")
            }
            ProfileError::NotASchedule => write!(f, "sequence is not a schedule of the graph"),
            ProfileError::EmptyProfile => write!(f, "profile is empty"),
            ProfileError::ArithmeticOverflow => write!(f, "integer overflow in weight accumulation"),
            ProfileError::NoDominantCandidate => {
                write!(f, "no candidate dominates all others (solver bug upstream)")
            }
            ProfileError::NoCandidates => write!(f, "candidate list is empty"),
        }
    }
}

impl From<GraphError> for ProfileError {
    fn from(_: GraphError) -> Self {
        ProfileError::NotASchedule
    }
}

/// A DAG with one signed weight per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSumGraph {
    pub dag: Dag,
    weights: Vec<i64>,
}

impl NodeSumGraph {
    pub fn new(dag: Dag, weights: Vec<i64>) -> Result<NodeSumGraph, ProfileError> {
        if weights.len() != dag.node_count() {
            return Err(ProfileError::WeightCountMismatch {
                nodes: dag.node_count(),
                weights: weights.len(),
            });
        }
        Ok(NodeSumGraph { dag, weights })
    }

    pub fn weight(&self, v: NodeId) -> i64 {
        self.weights[v as usize]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn node_count(&self) -> usize {
        self.dag.node_count()
    }

    /// Total weight of a node set, overflow-checked.
    pub fn cost(&self, set: &[NodeId]) -> Result<i64, ProfileError> {
        let mut acc: i64 = 0;
        for &v in set {
            acc = acc
                .checked_add(self.weights[v as usize])
                .ok_or(ProfileError::ArithmeticOverflow)?;
        }
        Ok(acc)
    }

    /// Edges reversed and all weights negated. An involution.
    pub fn reverse_negate(&self) -> NodeSumGraph {
        let weights = self.weights.iter().map(|w| -w).collect();
        NodeSumGraph { dag: self.dag.reversed(), weights }
    }

    /// Induced subgraph plus the new-id -> old-id map.
    pub fn induced(&self, keep: &[NodeId]) -> (NodeSumGraph, Vec<NodeId>) {
        let (dag, old) = self.dag.induced(keep);
        let weights = old.iter().map(|&v| self.weights[v as usize]).collect();
        (NodeSumGraph { dag, weights }, old)
    }

    /// Adds a fresh source of the given weight (id `n`).
    pub fn with_added_source(&self, w: i64) -> (NodeSumGraph, NodeId) {
        let (dag, s) = crate::graph::add_source(&self.dag);
        let mut weights = self.weights.clone();
        weights.push(w);
        (NodeSumGraph { dag, weights }, s)
    }
}

/// An integer memory profile. Node-sum profiles of an `n`-node schedule
/// have length `n + 1` and start at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile(pub Vec<i64>);

impl Profile {
    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn peak(&self) -> Result<i64, ProfileError> {
        peak(&self.0)
    }
}

/// Maximum value of a nonempty profile.
pub fn peak(profile: &[i64]) -> Result<i64, ProfileError> {
    profile.iter().copied().max().ok_or(ProfileError::EmptyProfile)
}

/// Prefix sums of the weights in schedule order: `(0, c(S_1), ..., c(S_n))`.
pub fn node_sum_profile(graph: &NodeSumGraph, schedule: &Schedule) -> Result<Profile, ProfileError> {
    if schedule.len() != graph.node_count() {
        return Err(ProfileError::NotASchedule);
    }
    // Re-validate: profiles are only meaningful for topological orders.
    Schedule::new(&graph.dag, schedule.order().to_vec())?;
    profile_of_sequence(graph, schedule.order())
}

/// Prefix sums of an arbitrary node sequence (no validity check).
pub fn profile_of_sequence(graph: &NodeSumGraph, order: &[NodeId]) -> Result<Profile, ProfileError> {
    let mut values = Vec::with_capacity(order.len() + 1);
    let mut acc: i64 = 0;
    values.push(0);
    for &v in order {
        acc = acc
            .checked_add(graph.weight(v))
            .ok_or(ProfileError::ArithmeticOverflow)?;
        values.push(acc);
    }
    Ok(Profile(values))
}

/// Pointer-advancement witness: index pairs from `(1, 1)` to
/// `(|A|, |B|)`, each step advancing exactly one side, with
/// `A[a_k] <= B[b_k]` throughout. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceWitness {
    pub pairs: Vec<(usize, usize)>,
}

/// Searches the `(|A|+1) x (|B|+1)` reachability grid for a pointer
/// witness that `a` dominates `b`. Backtracking prefers the A-pointer
/// step so witnesses are deterministic.
pub fn dominates_pointer(a: &[i64], b: &[i64]) -> Option<DominanceWitness> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (la, lb) = (a.len(), b.len());
    if a[0] > b[0] {
        return None;
    }
    let mut reach = vec![false; la * lb];
    let idx = |i: usize, j: usize| i * lb + j;
    reach[idx(0, 0)] = true;
    for i in 0..la {
        for j in 0..lb {
            if reach[idx(i, j)] {
                continue;
            }
            if a[i] > b[j] {
                continue;
            }
            let from_a = i > 0 && reach[idx(i - 1, j)];
            let from_b = j > 0 && reach[idx(i, j - 1)];
            reach[idx(i, j)] = from_a || from_b;
        }
    }
    if !reach[idx(la - 1, lb - 1)] {
        return None;
    }
    let mut pairs = Vec::with_capacity(la + lb - 1);
    let (mut i, mut j) = (la - 1, lb - 1);
    pairs.push((i + 1, j + 1));
    while i > 0 || j > 0 {
        if i > 0 && reach[idx(i - 1, j)] {
            i -= 1;
        } else {
            debug_assert!(j > 0 && reach[idx(i, j - 1)]);
            j -= 1;
        }
        pairs.push((i + 1, j + 1));
    }
    pairs.reverse();
    Some(DominanceWitness { pairs })
}

/// Four running-extrema arrays per sequence: suffix max/min, prefix
/// max/min.
struct Extrema {
    smax: Vec<i64>,
    smin: Vec<i64>,
    pmax: Vec<i64>,
    pmin: Vec<i64>,
}

impl Extrema {
    fn of(seq: &[i64]) -> Extrema {
        let n = seq.len();
        let mut smax = vec![0; n];
        let mut smin = vec![0; n];
        let mut pmax = vec![0; n];
        let mut pmin = vec![0; n];
        for i in (0..n).rev() {
            smax[i] = if i + 1 < n { seq[i].max(smax[i + 1]) } else { seq[i] };
            smin[i] = if i + 1 < n { seq[i].min(smin[i + 1]) } else { seq[i] };
        }
        for i in 0..n {
            pmax[i] = if i > 0 { seq[i].max(pmax[i - 1]) } else { seq[i] };
            pmin[i] = if i > 0 { seq[i].min(pmin[i - 1]) } else { seq[i] };
        }
        Extrema { smax, smin, pmax, pmin }
    }
}

/// Algebraic dominance check: for every index `i` of `a` there is an
/// index `j` of `b` with the four prefix/suffix extrema inequalities.
/// Runs in `O(|a| + |b|)` with a monotone multi-pointer sweep.
pub fn dominates_algebraic(a: &[i64], b: &[i64]) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    let ea = Extrema::of(a);
    let eb = Extrema::of(b);
    let nb = b.len();
    // Feasible j for index i form an interval [lo, hi):
    //   smax_b[j] >= smax_a[i]  (smax_b non-increasing)  => j < hi1
    //   smin_b[j] >= smin_a[i]  (smin_b non-decreasing)  => j >= lo1
    //   pmax_b[j] >= pmax_a[i]  (pmax_b non-decreasing)  => j >= lo2
    //   pmin_b[j] >= pmin_a[i]  (pmin_b non-increasing)  => j < hi2
    // As i grows, smax_a/pmin_a fall and smin_a/pmax_a rise, so all four
    // bounds only move rightward and one sweep suffices.
    let mut hi1 = 0; // first j with smax_b[j] < smax_a[i]
    let mut lo1 = 0; // first j with smin_b[j] >= smin_a[i]
    let mut lo2 = 0;
    let mut hi2 = 0;
    for i in 0..a.len() {
        while hi1 < nb && eb.smax[hi1] >= ea.smax[i] {
            hi1 += 1;
        }
        while lo1 < nb && eb.smin[lo1] < ea.smin[i] {
            lo1 += 1;
        }
        while lo2 < nb && eb.pmax[lo2] < ea.pmax[i] {
            lo2 += 1;
        }
        while hi2 < nb && eb.pmin[hi2] >= ea.pmin[i] {
            hi2 += 1;
        }
        let lo = lo1.max(lo2);
        let hi = hi1.min(hi2);
        if lo >= hi {
            return false;
        }
    }
    true
}

/// Literal `O(|a| * |b|)` transcription of the algebraic definition,
/// kept for differential testing of the sweep above.
pub fn dominates_algebraic_naive(a: &[i64], b: &[i64]) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    for i in 0..a.len() {
        let fmax_a = a[i..].iter().copied().max().unwrap();
        let fmin_a = a[i..].iter().copied().min().unwrap();
        let pmax_a = a[..=i].iter().copied().max().unwrap();
        let pmin_a = a[..=i].iter().copied().min().unwrap();
        let ok = (0..b.len()).any(|j| {
            let fmax_b = b[j..].iter().copied().max().unwrap();
            let fmin_b = b[j..].iter().copied().min().unwrap();
            let pmax_b = b[..=j].iter().copied().max().unwrap();
            let pmin_b = b[..=j].iter().copied().min().unwrap();
            fmax_a <= fmax_b && fmin_a <= fmin_b && pmax_a <= pmax_b && pmin_a <= pmin_b
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Picks the first candidate whose profile dominates every other
/// candidate's profile. One always exists when the candidate set contains
/// a dominant schedule; otherwise this reports a solver bug.
pub fn select_dominant<T, F>(candidates: &[T], mut profile_fn: F) -> Result<usize, ProfileError>
where
    F: FnMut(&T) -> Result<Profile, ProfileError>,
{
    if candidates.is_empty() {
        return Err(ProfileError::NoCandidates);
    }
    let profiles: Vec<Profile> = candidates
        .iter()
        .map(|c| profile_fn(c))
        .collect::<Result<_, _>>()?;
    'outer: for i in 0..profiles.len() {
        for j in 0..profiles.len() {
            if i != j && !dominates_algebraic(profiles[i].values(), profiles[j].values()) {
                continue 'outer;
            }
        }
        return Ok(i);
    }
    Err(ProfileError::NoDominantCandidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Dag;

    /// Fixture G1: induced subgraph of the example graph on v2..v7,
    /// ids 0..5, weights (+10, -9, +4, -3, +4, -3).
    pub(crate) fn g1() -> NodeSumGraph {
        let dag = Dag::new(6, &[(0, 1), (1, 2), (1, 4), (2, 3), (4, 5)]).unwrap();
        NodeSumGraph::new(dag, vec![10, -9, 4, -3, 4, -3]).unwrap()
    }

    #[test]
    fn paper_profiles_for_g1() {
        let g = g1();
        let s1 = Schedule::new(&g.dag, vec![0, 1, 2, 4, 3, 5]).unwrap();
        let p1 = node_sum_profile(&g, &s1).unwrap();
        assert_eq!(p1.values(), &[0, 10, 1, 5, 9, 6, 3]);

        let s1_star = Schedule::new(&g.dag, vec![0, 1, 2, 3, 4, 5]).unwrap();
        let p2 = node_sum_profile(&g, &s1_star).unwrap();
        assert_eq!(p2.values(), &[0, 10, 1, 5, 2, 6, 3]);
    }

    #[test]
    fn single_zero_node_profile() {
        let dag = Dag::new(1, &[]).unwrap();
        let g = NodeSumGraph::new(dag, vec![0]).unwrap();
        let s = Schedule::new(&g.dag, vec![0]).unwrap();
        assert_eq!(node_sum_profile(&g, &s).unwrap().values(), &[0, 0]);
    }

    #[test]
    fn peak_examples() {
        assert_eq!(peak(&[0, 10, 1, 5, 9, 6, 3]).unwrap(), 10);
        assert_eq!(peak(&[0]).unwrap(), 0);
        assert_eq!(peak(&[0, -3, -1]).unwrap(), 0);
        assert!(matches!(peak(&[]), Err(ProfileError::EmptyProfile)));
    }

    #[test]
    fn algebraic_dominance_examples() {
        let a = [0, 5, 2];
        assert!(dominates_algebraic(&a, &a));
        let better = [0, 10, 1, 5, 2, 6, 3];
        let worse = [0, 10, 1, 5, 9, 6, 3];
        assert!(dominates_algebraic(&better, &worse));
        assert!(!dominates_algebraic(&worse, &better));
    }

    #[test]
    fn pointer_dominance_examples() {
        let w = dominates_pointer(&[0], &[0]).unwrap();
        assert_eq!(w.pairs, vec![(1, 1)]);

        let better = [0, 10, 1, 5, 2, 6, 3];
        let worse = [0, 10, 1, 5, 9, 6, 3];
        let w = dominates_pointer(&better, &worse).unwrap();
        check_witness(&better, &worse, &w);

        assert!(dominates_pointer(&[0, 1], &[0, 0]).is_none());
    }

    pub(crate) fn check_witness(a: &[i64], b: &[i64], w: &DominanceWitness) {
        assert_eq!(w.pairs.first(), Some(&(1, 1)));
        assert_eq!(w.pairs.last(), Some(&(a.len(), b.len())));
        assert_eq!(w.pairs.len(), a.len() + b.len() - 1);
        for k in 1..w.pairs.len() {
            let (pa, pb) = w.pairs[k - 1];
            let (ca, cb) = w.pairs[k];
            assert!((ca == pa + 1 && cb == pb) || (ca == pa && cb == pb + 1));
        }
        for &(i, j) in &w.pairs {
            assert!(a[i - 1] <= b[j - 1], "A[{i}]={} > B[{j}]={}", a[i - 1], b[j - 1]);
        }
    }

    #[test]
    fn select_dominant_examples() {
        let g = g1();
        let s1 = Schedule::new(&g.dag, vec![0, 1, 2, 4, 3, 5]).unwrap();
        let s1_star = Schedule::new(&g.dag, vec![0, 1, 2, 3, 4, 5]).unwrap();
        let cands = [s1, s1_star.clone()];
        let i = select_dominant(&cands, |s| node_sum_profile(&g, s)).unwrap();
        assert_eq!(cands[i].order(), s1_star.order());

        let single = [s1_star];
        assert_eq!(select_dominant(&single, |s| node_sum_profile(&g, s)).unwrap(), 0);

        let profs = [Profile(vec![0, 1]), Profile(vec![0, -1])];
        assert_eq!(select_dominant(&profs, |p| Ok(p.clone())).unwrap(), 1);
    }

    #[test]
    fn reverse_negate_examples() {
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        let g = NodeSumGraph::new(dag, vec![3, -1]).unwrap();
        let r = g.reverse_negate();
        assert_eq!(r.dag.edges(), &[(1, 0)]);
        assert_eq!(r.weights(), &[-3, 1]);
        assert_eq!(r.reverse_negate(), g);

        let g1 = g1();
        let r1 = g1.reverse_negate();
        assert_eq!(r1.weights(), &[-10, 9, -4, 3, -4, 3]);
        assert_eq!(r1.dag.edges(), &[(1, 0), (2, 1), (3, 2), (4, 1), (5, 4)]);
    }

    #[test]
    fn dominance_implies_peak() {
        // spot check; the property test covers random pairs
        let better = [0, 10, 1, 5, 2, 6, 3];
        let worse = [0, 10, 1, 5, 9, 6, 3];
        assert!(peak(&better).unwrap() <= peak(&worse).unwrap());
    }
}
