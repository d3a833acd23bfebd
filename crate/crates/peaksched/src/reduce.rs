//! Reduction from the computation-graph model to node-sum: each node
//! splits into a start node (allocate scratch + output) and a finish
//! node (free scratch and fully-consumed inputs), plus a release node
//! when the output has two or more consumers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::comp::{check_scratch_condition, ComputationGraph, ScratchViolation};
use crate::graph::{Dag, NodeId, Schedule};
use crate::profile::NodeSumGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    ScratchConditionViolated(Vec<ScratchViolation>),
    NotASchedule,
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::ScratchConditionViolated(v) => {
                write!(f, "scratch condition violated at {} node(s)", v.len())
            }
            ReduceError::NotASchedule => write!(f, "sequence is not a schedule"),
        }
    }
}

/// What a node-sum node stands for, tagged with the original node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsRole {
    Start(NodeId),
    Finish(NodeId),
    Release(NodeId),
}

impl NsRole {
    pub fn origin(&self) -> NodeId {
        match *self {
            NsRole::Start(v) | NsRole::Finish(v) | NsRole::Release(v) => v,
        }
    }
}

/// Node-sum image of a computation graph with provenance maps.
#[derive(Debug, Clone)]
pub struct ReducedGraph {
    pub ns: NodeSumGraph,
    /// Role of each node-sum node.
    pub roles: Vec<NsRole>,
    /// Per original node: (start id, finish id, release id if any).
    pub parts: Vec<(NodeId, NodeId, Option<NodeId>)>,
}

/// Builds the node-sum graph. Start weight is `scratch + size`; finish
/// weight is `-scratch - sum of sizes folded from unique-consumer
/// inputs` (additionally `-size` when the node has no consumers);
/// release nodes exist only for out-degree >= 2 and carry `-size`.
pub fn to_node_sum(cg: &ComputationGraph) -> Result<ReducedGraph, ReduceError> {
    let violations = check_scratch_condition(cg);
    if !violations.is_empty() {
        return Err(ReduceError::ScratchConditionViolated(violations));
    }
    let n = cg.node_count();
    // Provisional ids start(v) = 3v, finish(v) = 3v + 1, release(v) = 3v + 2,
    // compacted to dense ids in that order.
    let mut present = vec![false; 3 * n];
    for v in 0..n {
        present[3 * v] = true;
        present[3 * v + 1] = true;
        if cg.dag.out(v as NodeId).len() >= 2 {
            present[3 * v + 2] = true;
        }
    }
    let mut compact = vec![u32::MAX; 3 * n];
    let mut roles = Vec::new();
    let mut next = 0u32;
    for (prov, &p) in present.iter().enumerate() {
        if p {
            compact[prov] = next;
            let v = (prov / 3) as NodeId;
            roles.push(match prov % 3 {
                0 => NsRole::Start(v),
                1 => NsRole::Finish(v),
                _ => NsRole::Release(v),
            });
            next += 1;
        }
    }
    let start = |v: NodeId| compact[3 * v as usize];
    let finish = |v: NodeId| compact[3 * v as usize + 1];
    let release = |v: NodeId| {
        let c = compact[3 * v as usize + 2];
        if c == u32::MAX {
            None
        } else {
            Some(c)
        }
    };

    let mut weights = vec![0i64; next as usize];
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for v in cg.dag.nodes() {
        weights[start(v) as usize] = cg.scratch(v) + cg.size(v);
        // inputs whose only consumer is v fold into v's finish
        let mut folded = 0i64;
        for &u in cg.dag.inn(v) {
            if cg.dag.out(u) == [v] {
                folded += cg.size(u);
            }
        }
        let mut w_finish = -cg.scratch(v) - folded;
        if cg.dag.out(v).is_empty() {
            w_finish -= cg.size(v);
        }
        weights[finish(v) as usize] = w_finish;
        edges.push((start(v), finish(v)));
        for &u in cg.dag.inn(v) {
            edges.push((finish(u), start(v)));
        }
        if let Some(r) = release(v) {
            weights[r as usize] = -cg.size(v);
            for &x in cg.dag.out(v) {
                edges.push((start(x), r));
            }
        }
    }
    let dag = Dag::new(next as usize, &edges).expect("reduction preserves acyclicity");
    let ns = NodeSumGraph::new(dag, weights).expect("one weight per node");
    let parts = (0..n as NodeId).map(|v| (start(v), finish(v), release(v))).collect();
    Ok(ReducedGraph { ns, roles, parts })
}

/// Moves every nonpositive-weight node to immediately after its last
/// in-neighbor (sourceless ones to the front), ties broken by ascending
/// node id. Positive nodes keep their relative order. The result
/// dominates the input.
pub fn eagerize(ns: &NodeSumGraph, schedule: &Schedule) -> Result<Schedule, ReduceError> {
    if Schedule::new(&ns.dag, schedule.order().to_vec()).is_err() {
        return Err(ReduceError::NotASchedule);
    }
    let n = ns.node_count();
    let mut pending_in: Vec<usize> = (0..n).map(|v| ns.dag.inn(v as NodeId).len()).collect();
    let mut emitted = vec![false; n];
    let mut ready_nonpos: alloc::collections::BTreeSet<NodeId> = (0..n as NodeId)
        .filter(|&v| pending_in[v as usize] == 0 && ns.weight(v) <= 0)
        .collect();
    let mut order = Vec::with_capacity(n);
    let emit = |v: NodeId,
                    order: &mut Vec<NodeId>,
                    pending_in: &mut Vec<usize>,
                    ready_nonpos: &mut alloc::collections::BTreeSet<NodeId>,
                    emitted: &mut Vec<bool>| {
        order.push(v);
        emitted[v as usize] = true;
        for &w in ns.dag.out(v) {
            pending_in[w as usize] -= 1;
            if pending_in[w as usize] == 0 && ns.weight(w) <= 0 {
                ready_nonpos.insert(w);
            }
        }
    };
    // flush all ready nonpositive nodes, cascading, ascending by id
    macro_rules! flush {
        () => {
            while let Some(&v) = ready_nonpos.iter().next() {
                ready_nonpos.remove(&v);
                emit(v, &mut order, &mut pending_in, &mut ready_nonpos, &mut emitted);
            }
        };
    }
    flush!();
    for &v in schedule.order() {
        if emitted[v as usize] {
            continue;
        }
        debug_assert!(ns.weight(v) > 0);
        emit(v, &mut order, &mut pending_in, &mut ready_nonpos, &mut emitted);
        flush!();
    }
    debug_assert_eq!(order.len(), n);
    Ok(Schedule::new_unchecked(order))
}

/// Restricts a node-sum schedule to start nodes, ordering the original
/// nodes accordingly.
pub fn lift_schedule(reduced: &ReducedGraph, ns_schedule: &Schedule) -> Result<Schedule, ReduceError> {
    if Schedule::new(&reduced.ns.dag, ns_schedule.order().to_vec()).is_err() {
        return Err(ReduceError::NotASchedule);
    }
    let order: Vec<NodeId> = ns_schedule
        .order()
        .iter()
        .filter_map(|&x| match reduced.roles[x as usize] {
            NsRole::Start(v) => Some(v),
            _ => None,
        })
        .collect();
    Ok(Schedule::new_unchecked(order))
}

/// Expands a computation-graph schedule into the eager node-sum
/// schedule: per node its start, then finish, then every release node
/// whose in-neighbors are all complete (ascending id).
pub fn lower_schedule(reduced: &ReducedGraph, cg_schedule: &Schedule) -> Result<Schedule, ReduceError> {
    let ns = &reduced.ns;
    let n_ns = ns.node_count();
    if cg_schedule.len() != reduced.parts.len() {
        return Err(ReduceError::NotASchedule);
    }
    let mut pending_in: Vec<usize> = (0..n_ns).map(|v| ns.dag.inn(v as NodeId).len()).collect();
    let mut emitted = vec![false; n_ns];
    let mut order: Vec<NodeId> = Vec::with_capacity(n_ns);
    let emit = |x: NodeId,
                    pending_in: &mut Vec<usize>,
                    emitted: &mut Vec<bool>,
                    order: &mut Vec<NodeId>| {
        order.push(x);
        emitted[x as usize] = true;
        for &w in ns.dag.out(x) {
            pending_in[w as usize] -= 1;
        }
    };
    for &v in cg_schedule.order() {
        let (s, f, _) = reduced.parts[v as usize];
        if pending_in[s as usize] != 0 {
            return Err(ReduceError::NotASchedule);
        }
        emit(s, &mut pending_in, &mut emitted, &mut order);
        emit(f, &mut pending_in, &mut emitted, &mut order);
        // releases that just became ready, ascending id
        let ready: Vec<NodeId> = (0..n_ns as NodeId)
            .filter(|&x| {
                matches!(reduced.roles[x as usize], NsRole::Release(_))
                    && pending_in[x as usize] == 0
                    && !emitted[x as usize]
            })
            .collect();
        for x in ready {
            emit(x, &mut pending_in, &mut emitted, &mut order);
        }
    }
    if order.len() != n_ns {
        return Err(ReduceError::NotASchedule);
    }
    Ok(Schedule::new_unchecked(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comp::ComputationGraph;
    use crate::graph::Dag;
    use crate::profile::{dominates_pointer, node_sum_profile};

    #[test]
    fn single_node_folds_size_into_finish() {
        let dag = Dag::new(1, &[]).unwrap();
        let cg = ComputationGraph::new(dag, vec![3], vec![1]).unwrap();
        let r = to_node_sum(&cg).unwrap();
        assert_eq!(r.ns.node_count(), 2);
        assert_eq!(r.ns.weights(), &[4, -4]);
        assert_eq!(r.roles, vec![NsRole::Start(0), NsRole::Finish(0)]);
    }

    #[test]
    fn chain_folds_release_into_consumer_finish() {
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        let cg = ComputationGraph::new(dag, vec![2, 5], vec![1, 0]).unwrap();
        let r = to_node_sum(&cg).unwrap();
        // a: start 3, finish -1 (nothing folds; a has one consumer)
        // b: start 5, finish -0 - size(a) - size(b) = -7 (sink folds own size)
        assert_eq!(r.ns.node_count(), 4);
        let (sa, fa, ra) = r.parts[0];
        let (_sb, fb, rb) = r.parts[1];
        assert_eq!(ra, None);
        assert_eq!(rb, None);
        assert_eq!(r.ns.weight(sa), 3);
        assert_eq!(r.ns.weight(fa), -1);
        assert_eq!(r.ns.weight(fb), -7);
    }

    #[test]
    fn star_gets_release_node() {
        // s -> x, s -> y
        let dag = Dag::new(3, &[(0, 1), (0, 2)]).unwrap();
        let cg = ComputationGraph::new(dag, vec![2, 1, 1], vec![0, 0, 0]).unwrap();
        let r = to_node_sum(&cg).unwrap();
        let (ss, _fs, rs) = r.parts[0];
        let rs = rs.expect("out-degree 2 gets a release node");
        assert_eq!(r.ns.weight(rs), -2);
        let (sx, _, _) = r.parts[1];
        let (sy, _, _) = r.parts[2];
        assert_eq!(r.ns.dag.inn(rs), &[sx.min(sy), sx.max(sy)]);
        // out-degree <= 1 nodes have no release node
        assert!(r.parts[1].2.is_none() && r.parts[2].2.is_none());
        // start weight
        assert_eq!(r.ns.weight(ss), 2);
    }

    #[test]
    fn virtual_nodes_are_nonpositive() {
        let dag = Dag::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let cg = ComputationGraph::new(dag, vec![3, 1, 2, 4], vec![1, 0, 2, -1]).unwrap();
        let r = to_node_sum(&cg).unwrap();
        for (x, role) in r.roles.iter().enumerate() {
            match role {
                NsRole::Finish(_) | NsRole::Release(_) => assert!(r.ns.weight(x as NodeId) <= 0),
                NsRole::Start(_) => {}
            }
        }
        // structural size bounds
        assert!(r.ns.node_count() <= 3 * cg.node_count());
    }

    #[test]
    fn scratch_violation_rejected() {
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        let cg = ComputationGraph::new(dag, vec![4, 4], vec![0, -5]).unwrap();
        assert!(matches!(to_node_sum(&cg), Err(ReduceError::ScratchConditionViolated(_))));
    }

    #[test]
    fn eagerize_examples() {
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        let cg = ComputationGraph::new(dag, vec![2, 5], vec![0, 0]).unwrap();
        let r = to_node_sum(&cg).unwrap();
        // already eager
        let eager = lower_schedule(&r, &Schedule::new(&cg.dag, vec![0, 1]).unwrap()).unwrap();
        let again = eagerize(&r.ns, &eager).unwrap();
        assert_eq!(again.order(), eager.order());

        // two independent nodes: delaying finish(a) past start(b) is a
        // valid schedule and eagerize moves it back next to start(a)
        let dag = Dag::new(2, &[]).unwrap();
        let cg = ComputationGraph::new(dag, vec![2, 5], vec![0, 0]).unwrap();
        let r = to_node_sum(&cg).unwrap();
        let (sa, fa, _) = r.parts[0];
        let (sb, fb, _) = r.parts[1];
        let delayed = Schedule::new(&r.ns.dag, vec![sa, sb, fa, fb]).unwrap();
        let fixed = eagerize(&r.ns, &delayed).unwrap();
        assert_eq!(fixed.order(), &[sa, fa, sb, fb]);

        // output dominates input
        let pd = node_sum_profile(&r.ns, &delayed).unwrap();
        let pf = node_sum_profile(&r.ns, &fixed).unwrap();
        assert!(dominates_pointer(pf.values(), pd.values()).is_some());
    }

    #[test]
    fn lower_then_lift_is_identity() {
        let dag = Dag::new(3, &[(0, 1), (0, 2)]).unwrap();
        let cg = ComputationGraph::new(dag, vec![2, 1, 1], vec![0, 0, 0]).unwrap();
        let r = to_node_sum(&cg).unwrap();
        let sched = Schedule::new(&cg.dag, vec![0, 1, 2]).unwrap();
        let low = lower_schedule(&r, &sched).unwrap();
        // (start s, finish s, start x, finish x, start y, finish y, release s)
        let (ss, fs, rs) = r.parts[0];
        let (sx, fx, _) = r.parts[1];
        let (sy, fy, _) = r.parts[2];
        assert_eq!(low.order(), &[ss, fs, sx, fx, sy, fy, rs.unwrap()]);
        let lifted = lift_schedule(&r, &low).unwrap();
        assert_eq!(lifted.order(), sched.order());
    }

    #[test]
    fn single_node_lower() {
        let dag = Dag::new(1, &[]).unwrap();
        let cg = ComputationGraph::new(dag, vec![3], vec![0]).unwrap();
        let r = to_node_sum(&cg).unwrap();
        let sched = Schedule::new(&cg.dag, vec![0]).unwrap();
        let low = lower_schedule(&r, &sched).unwrap();
        assert_eq!(low.order(), &[r.parts[0].0, r.parts[0].1]);
        assert_eq!(lift_schedule(&r, &low).unwrap().order(), &[0]);
    }
}
