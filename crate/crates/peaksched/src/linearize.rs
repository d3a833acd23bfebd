//! Isolated-subgraph detection, path-from-profile construction, and the
//! linearization transform that swaps an isolated subgraph for the path
//! realizing its dominant schedule's profile.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::comp::{cg_profile, check_scratch_condition, ComputationGraph};
use crate::graph::{Dag, NodeId, Schedule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearizeError {
    NegativeEntry { index: usize, value: i64 },
    EvenLength { len: usize },
    NonzeroStart { value: i64 },
    NotIsolated(IsolationReport),
    InvalidInnerSchedule,
}

impl fmt::Display for LinearizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearizeError::NegativeEntry { index, value } => {
                write!(f, "profile entry {index} is negative ({value})")
            }
            LinearizeError::EvenLength { len } => {
                write!(f, "profile length {len} is even; expected 2n + 1 entries")
            }
            LinearizeError::NonzeroStart { value } => {
                write!(f, "profile starts at {value}, expected 0")
            }
            LinearizeError::NotIsolated(r) => write!(f, "subgraph is not isolated: {r}"),
            LinearizeError::InvalidInnerSchedule => {
                write!(f, "inner order is not a schedule of the induced subgraph")
            }
        }
    }
}

/// Why a node set fails (or passes) the isolation conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsolationFailure {
    TooSmall,
    NoUniqueSource(Vec<NodeId>),
    NoUniqueSink(Vec<NodeId>),
    /// Edge from outside into a non-source non-sink member.
    EntersInterior { from: NodeId, to: NodeId },
    /// Edge from a non-sink member to the outside.
    LeavesInterior { from: NodeId, to: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolationReport {
    pub is_isolated: bool,
    pub source: Option<NodeId>,
    pub sink: Option<NodeId>,
    pub failure: Option<IsolationFailure>,
}

impl fmt::Display for IsolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.failure, self.source, self.sink) {
            (None, Some(s), Some(t)) => write!(f, "isolated with source {s} and sink {t}"),
            (Some(why), _, _) => write!(f, "{why:?}"),
            _ => write!(f, "not isolated"),
        }
    }
}

/// Checks the three isolation conditions for `U` inside `dag`: unique
/// source and sink of the induced subgraph, every entering path funnels
/// through the source (or lands directly on the sink), every leaving
/// path funnels through the sink.
pub fn is_isolated(dag: &Dag, u: &[NodeId]) -> IsolationReport {
    let mut member = vec![false; dag.node_count()];
    let mut uu: Vec<NodeId> = u.to_vec();
    uu.sort_unstable();
    uu.dedup();
    for &v in &uu {
        member[v as usize] = true;
    }
    let fail = |failure: IsolationFailure| IsolationReport {
        is_isolated: false,
        source: None,
        sink: None,
        failure: Some(failure),
    };
    if uu.len() < 2 {
        return fail(IsolationFailure::TooSmall);
    }
    let inner_sources: Vec<NodeId> = uu
        .iter()
        .copied()
        .filter(|&v| dag.inn(v).iter().all(|&x| !member[x as usize]))
        .collect();
    if inner_sources.len() != 1 {
        return fail(IsolationFailure::NoUniqueSource(inner_sources));
    }
    let inner_sinks: Vec<NodeId> = uu
        .iter()
        .copied()
        .filter(|&v| dag.out(v).iter().all(|&x| !member[x as usize]))
        .collect();
    if inner_sinks.len() != 1 {
        return fail(IsolationFailure::NoUniqueSink(inner_sinks));
    }
    let s = inner_sources[0];
    let t = inner_sinks[0];
    // every edge from outside must land on s or t (a longer violating
    // path always contains such an edge as its last step into U)
    for &v in &uu {
        if v == s || v == t {
            continue;
        }
        for &x in dag.inn(v) {
            if !member[x as usize] {
                return fail(IsolationFailure::EntersInterior { from: x, to: v });
            }
        }
    }
    // every edge leaving U must start at t
    for &v in &uu {
        if v == t {
            continue;
        }
        for &y in dag.out(v) {
            if !member[y as usize] {
                return fail(IsolationFailure::LeavesInterior { from: v, to: y });
            }
        }
    }
    IsolationReport { is_isolated: true, source: Some(s), sink: Some(t), failure: None }
}

/// Builds the path whose unique schedule reproduces the given profile
/// `(0 = a_0, a_1, ..., a_2n)`: `size(v_i) = a_{2i}` and
/// `scratch(v_i) = a_{2i-1} - a_{2i} - a_{2i-2}`.
pub fn path_from_profile(profile: &[i64]) -> Result<ComputationGraph, LinearizeError> {
    if profile.len() % 2 == 0 || profile.is_empty() {
        return Err(LinearizeError::EvenLength { len: profile.len() });
    }
    if profile[0] != 0 {
        return Err(LinearizeError::NonzeroStart { value: profile[0] });
    }
    if let Some((i, &v)) = profile.iter().enumerate().find(|&(_, &v)| v < 0) {
        return Err(LinearizeError::NegativeEntry { index: i, value: v });
    }
    let n = profile.len() / 2;
    let edges: Vec<(NodeId, NodeId)> = (0..n.saturating_sub(1) as u32).map(|i| (i, i + 1)).collect();
    let dag = Dag::new(n, &edges).expect("a path is a DAG");
    let mut size = Vec::with_capacity(n);
    let mut scratch = Vec::with_capacity(n);
    for i in 1..=n {
        let prev_size = if i >= 2 { profile[2 * (i - 1)] } else { 0 };
        size.push(profile[2 * i]);
        scratch.push(profile[2 * i - 1] - profile[2 * i] - prev_size);
    }
    let cg = ComputationGraph::new(dag, size, scratch).expect("profile entries are nonnegative");
    debug_assert!(check_scratch_condition(&cg).is_empty());
    Ok(cg)
}

/// Provenance of a linearization step.
#[derive(Debug, Clone)]
pub struct LinearizeMap {
    /// For each new node id: the old node it copies, or `None` when it
    /// is the `i`-th path node (see `path_nodes`).
    pub old_of_new: Vec<Option<NodeId>>,
    /// New ids of the replacement path, in path order.
    pub path_nodes: Vec<NodeId>,
    /// The inner schedule realized by the path (old ids, in order).
    pub inner_order: Vec<NodeId>,
}

/// Replaces the isolated subgraph `G[U]` by the path realizing the
/// profile of the inner schedule `pi`. Boundary edges re-attach to the
/// path head (old source) and tail (old sink).
pub fn linearize(
    cg: &ComputationGraph,
    u: &[NodeId],
    pi: &Schedule,
) -> Result<(ComputationGraph, LinearizeMap), LinearizeError> {
    let report = is_isolated(&cg.dag, u);
    if !report.is_isolated {
        return Err(LinearizeError::NotIsolated(report));
    }
    let s = report.source.unwrap();
    let t = report.sink.unwrap();
    let (sub, old_ids) = cg.induced(u);
    let order_old: Vec<NodeId> = pi.order().to_vec();
    // map pi (expressed in cg ids) onto the induced subgraph
    let mut sub_of_old = vec![u32::MAX; cg.node_count()];
    for (new, &old) in old_ids.iter().enumerate() {
        sub_of_old[old as usize] = new as u32;
    }
    if order_old.len() != old_ids.len()
        || order_old.iter().any(|&v| sub_of_old[v as usize] == u32::MAX)
    {
        return Err(LinearizeError::InvalidInnerSchedule);
    }
    let sub_order: Vec<NodeId> = order_old.iter().map(|&v| sub_of_old[v as usize]).collect();
    let sub_sched =
        Schedule::new(&sub.dag, sub_order).map_err(|_| LinearizeError::InvalidInnerSchedule)?;
    let profile = cg_profile(&sub, &sub_sched).map_err(|_| LinearizeError::InvalidInnerSchedule)?;
    let path = path_from_profile(profile.values())?;

    // assemble the new graph: kept nodes first (ascending), then the path
    let mut member = vec![false; cg.node_count()];
    for &v in &order_old {
        member[v as usize] = true;
    }
    let kept: Vec<NodeId> = cg.dag.nodes().filter(|&v| !member[v as usize]).collect();
    let k = path.node_count();
    let mut new_of_old = vec![u32::MAX; cg.node_count()];
    let mut old_of_new: Vec<Option<NodeId>> = Vec::with_capacity(kept.len() + k);
    for (new, &old) in kept.iter().enumerate() {
        new_of_old[old as usize] = new as u32;
        old_of_new.push(Some(old));
    }
    let path_base = kept.len() as u32;
    let path_nodes: Vec<NodeId> = (0..k as u32).map(|i| path_base + i).collect();
    for _ in 0..k {
        old_of_new.push(None);
    }
    let head = path_nodes[0];
    let tail = path_nodes[k - 1];

    let mut size: Vec<i64> = kept.iter().map(|&v| cg.size(v)).collect();
    let mut scratch: Vec<i64> = kept.iter().map(|&v| cg.scratch(v)).collect();
    size.extend(path.sizes().iter().copied());
    scratch.extend(path.scratches().iter().copied());

    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for i in 0..k.saturating_sub(1) {
        edges.push((path_nodes[i], path_nodes[i + 1]));
    }
    for &(a, b) in cg.dag.edges() {
        match (member[a as usize], member[b as usize]) {
            (false, false) => edges.push((new_of_old[a as usize], new_of_old[b as usize])),
            (false, true) => {
                // isolation guarantees b is s or t
                let dst = if b == s { head } else { debug_assert_eq!(b, t); tail };
                edges.push((new_of_old[a as usize], dst));
            }
            (true, false) => {
                debug_assert_eq!(a, t);
                edges.push((tail, new_of_old[b as usize]));
            }
            (true, true) => {}
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let dag = Dag::new(kept.len() + k, &edges).expect("linearization preserves acyclicity");
    let out = ComputationGraph::new(dag, size, scratch).expect("sizes stay nonnegative");
    debug_assert!(
        check_scratch_condition(&out).is_empty(),
        "linearized graph keeps the scratch condition"
    );
    Ok((out, LinearizeMap { old_of_new, path_nodes, inner_order: order_old }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comp::{cg_peak, ComputationGraph};
    use crate::graph::Dag;

    #[test]
    fn isolation_examples() {
        // G_EX subgraph {v2..v7} (ids 1..=6): G[U] has two sinks -> not isolated
        let d = Dag::new(9, &[(0, 1), (1, 2), (2, 3), (2, 5), (3, 4), (5, 6), (0, 7), (7, 8)])
            .unwrap();
        let r = is_isolated(&d, &[1, 2, 3, 4, 5, 6]);
        assert!(!r.is_isolated);
        assert!(matches!(r.failure, Some(IsolationFailure::NoUniqueSink(_))));

        // a pumpkin inside a chain is isolated
        let d = Dag::new(6, &[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)]).unwrap();
        let r = is_isolated(&d, &[1, 2, 3, 4]);
        assert!(r.is_isolated);
        assert_eq!((r.source, r.sink), (Some(1), Some(4)));

        // a single edge's endpoints inside a chain
        let d = Dag::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(is_isolated(&d, &[1, 2]).is_isolated);

        // edges from outside directly into the sink are allowed
        let d = Dag::new(5, &[(0, 1), (0, 4), (4, 3), (1, 2), (2, 3)]).unwrap();
        let r = is_isolated(&d, &[1, 2, 3]);
        assert!(r.is_isolated, "{r}");
    }

    #[test]
    fn path_from_profile_examples() {
        let cg = path_from_profile(&[0, 3, 1, 2, 0]).unwrap();
        assert_eq!(cg.sizes(), &[1, 0]);
        assert_eq!(cg.scratches(), &[2, 1]);
        let s = Schedule::new(&cg.dag, vec![0, 1]).unwrap();
        assert_eq!(cg_profile(&cg, &s).unwrap().values(), &[0, 3, 1, 2, 0]);

        let cg = path_from_profile(&[0, 0, 0]).unwrap();
        assert_eq!((cg.sizes(), cg.scratches()), (&[0][..], &[0][..]));

        let cg = path_from_profile(&[0, 5, 5]).unwrap();
        assert_eq!((cg.sizes(), cg.scratches()), (&[5][..], &[0][..]));

        assert!(matches!(path_from_profile(&[0, 1]), Err(LinearizeError::EvenLength { .. })));
        assert!(matches!(path_from_profile(&[1, 2, 3]), Err(LinearizeError::NonzeroStart { .. })));
        assert!(matches!(
            path_from_profile(&[0, -1, 0]),
            Err(LinearizeError::NegativeEntry { .. })
        ));
    }

    #[test]
    fn linearize_path_is_fixed_point_up_to_renaming() {
        // chain 0-1-2-3, replace {1, 2}
        let dag = Dag::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let cg = ComputationGraph::new(dag, vec![1, 2, 3, 0], vec![0, 0, 0, 0]).unwrap();
        let pi = Schedule::new_unchecked(vec![1, 2]);
        let (out, map) = linearize(&cg, &[1, 2], &pi).unwrap();
        assert_eq!(out.node_count(), 4);
        assert!(out.dag.is_path());
        let s_old = Schedule::new(&cg.dag, vec![0, 1, 2, 3]).unwrap();
        let order_new = out.dag.topo_min_id();
        let s_new = Schedule::new(&out.dag, order_new).unwrap();
        assert_eq!(cg_peak(&cg, &s_old).unwrap(), cg_peak(&out, &s_new).unwrap());
        assert_eq!(map.path_nodes.len(), 2);
    }

    #[test]
    fn linearize_rejects_non_isolated() {
        let dag = Dag::new(3, &[(0, 1), (0, 2)]).unwrap();
        let cg = ComputationGraph::new(dag, vec![1, 1, 1], vec![0, 0, 0]).unwrap();
        let pi = Schedule::new_unchecked(vec![1, 2]);
        assert!(matches!(
            linearize(&cg, &[1, 2], &pi),
            Err(LinearizeError::NotIsolated(_))
        ));
    }
}
