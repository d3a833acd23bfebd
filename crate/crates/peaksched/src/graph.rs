//! DAG representation, topological cuts and the partial-schedule algebra
//! shared by every solver in the crate.
//!
//! Node ids are dense integers `0..n`; iteration order is ascending id
//! everywhere so that all derived schedules are reproducible.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Dense node identifier.
pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// The edge set contains a directed cycle; the payload is a witness
    /// cycle `v0 -> v1 -> ... -> v0`.
    CycleDetected(Vec<NodeId>),
    DuplicateEdge(NodeId, NodeId),
    SelfLoop(NodeId),
    DanglingNodeId(NodeId),
    UnknownNodeId(NodeId),
    InvalidPartialSchedule,
    NotATopologicalCut,
    NotASchedule,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::CycleDetected(c) => write!(f, "directed cycle detected: {c:?}"),
            GraphError::DuplicateEdge(u, v) => write!(f, "duplicate edge ({u}, {v})"),
            GraphError::SelfLoop(v) => write!(f, "self loop at node {v}"),
            GraphError::DanglingNodeId(v) => write!(f, "edge references unknown node {v}"),
            GraphError::UnknownNodeId(v) => write!(f, "unknown node id {v}"),
            GraphError::InvalidPartialSchedule => write!(f, "sequence is not a valid partial schedule"),
            GraphError::NotATopologicalCut => write!(f, "set is not a topological cut"),
            GraphError::NotASchedule => write!(f, "sequence is not a schedule of the graph"),
        }
    }
}

/// Immutable DAG over dense node ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
    adj: Vec<Vec<NodeId>>,
    radj: Vec<Vec<NodeId>>,
}

impl Dag {
    /// Validates and builds a DAG. Rejects self loops, duplicate edges,
    /// out-of-range endpoints and directed cycles (with a witness).
    pub fn new(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Dag, GraphError> {
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut radj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut sorted: Vec<(NodeId, NodeId)> = edges.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        for &(u, v) in &sorted {
            if u as usize >= n {
                return Err(GraphError::DanglingNodeId(u));
            }
            if v as usize >= n {
                return Err(GraphError::DanglingNodeId(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u as usize].push(v);
            radj[v as usize].push(u);
        }
        for l in adj.iter_mut().chain(radj.iter_mut()) {
            l.sort_unstable();
        }
        let dag = Dag { n, edges: sorted, adj, radj };
        if let Some(cycle) = dag.find_cycle() {
            return Err(GraphError::CycleDetected(cycle));
        }
        Ok(dag)
    }

    fn find_cycle(&self) -> Option<Vec<NodeId>> {
        // Iterative DFS with colors; returns the cycle nodes in edge order.
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.n];
        let mut parent = vec![u32::MAX; self.n];
        for root in 0..self.n as NodeId {
            if color[root as usize] != WHITE {
                continue;
            }
            let mut stack: Vec<(NodeId, usize)> = vec![(root, 0)];
            color[root as usize] = GRAY;
            while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
                if *idx < self.adj[v as usize].len() {
                    let w = self.adj[v as usize][*idx];
                    *idx += 1;
                    match color[w as usize] {
                        WHITE => {
                            color[w as usize] = GRAY;
                            parent[w as usize] = v;
                            stack.push((w, 0));
                        }
                        GRAY => {
                            // Found a back edge v -> w; unwind the cycle.
                            let mut cycle = vec![w];
                            let mut cur = v;
                            while cur != w {
                                cycle.push(cur);
                                cur = parent[cur as usize];
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    color[v as usize] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted ascending by `(u, v)`.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Out-neighbors of `v`, ascending.
    pub fn out(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v as usize]
    }

    /// In-neighbors of `v`, ascending.
    pub fn inn(&self, v: NodeId) -> &[NodeId] {
        &self.radj[v as usize]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.n as NodeId
    }

    /// Nodes with no in-edges, ascending.
    pub fn sources(&self) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.inn(v).is_empty()).collect()
    }

    /// Nodes with no out-edges, ascending.
    pub fn sinks(&self) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.out(v).is_empty()).collect()
    }

    /// True when the whole graph is one directed path.
    pub fn is_path(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        if self.edge_count() != self.n - 1 || self.sources().len() != 1 {
            return false;
        }
        let mut cur = self.sources()[0];
        let mut seen = 1usize;
        while let Some(&next) = self.out(cur).first() {
            if self.out(cur).len() != 1 || self.inn(next).len() != 1 {
                return false;
            }
            cur = next;
            seen += 1;
        }
        seen == self.n && self.out(cur).is_empty()
    }

    /// Canonical topological order: Kahn's algorithm taking the smallest
    /// ready id first.
    pub fn topo_min_id(&self) -> Vec<NodeId> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.radj[v].len()).collect();
        let mut ready: alloc::collections::BTreeSet<NodeId> =
            self.nodes().filter(|&v| indeg[v as usize] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(v);
            for &w in self.out(v) {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    ready.insert(w);
                }
            }
        }
        debug_assert_eq!(order.len(), self.n);
        order
    }

    /// Induced subgraph on `keep` (deduplicated, ascending). Returns the
    /// new graph plus the map from new ids to old ids.
    pub fn induced(&self, keep: &[NodeId]) -> (Dag, Vec<NodeId>) {
        let mut old_ids: Vec<NodeId> = keep.to_vec();
        old_ids.sort_unstable();
        old_ids.dedup();
        let mut new_of = vec![u32::MAX; self.n];
        for (new, &old) in old_ids.iter().enumerate() {
            new_of[old as usize] = new as NodeId;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            let (nu, nv) = (new_of[u as usize], new_of[v as usize]);
            if nu != u32::MAX && nv != u32::MAX {
                edges.push((nu, nv));
            }
        }
        let dag = Dag::new(old_ids.len(), &edges).expect("induced subgraph of a DAG is a DAG");
        (dag, old_ids)
    }

    /// Same graph with every edge reversed.
    pub fn reversed(&self) -> Dag {
        let edges: Vec<(NodeId, NodeId)> = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        Dag::new(self.n, &edges).expect("reversal of a DAG is a DAG")
    }

    /// All nodes reachable from `start` (inclusive), as a membership mask.
    pub fn reachable_from(&self, start: &[NodeId]) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack: Vec<NodeId> = start.to_vec();
        for &v in start {
            seen[v as usize] = true;
        }
        while let Some(v) = stack.pop() {
            for &w in self.out(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// A full topological order of a `Dag`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    order: Vec<NodeId>,
}

impl Schedule {
    pub fn new(dag: &Dag, order: Vec<NodeId>) -> Result<Schedule, GraphError> {
        if order.len() != dag.node_count() {
            return Err(GraphError::NotASchedule);
        }
        validate_prefixes(dag, &order).map_err(|_| GraphError::NotASchedule)?;
        Ok(Schedule { order })
    }

    /// Wraps an order the caller already knows to be valid (debug-checked).
    pub fn new_unchecked(order: Vec<NodeId>) -> Schedule {
        Schedule { order }
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn prefix(&self, len: usize) -> PartialSchedule {
        PartialSchedule { order: self.order[..len].to_vec() }
    }

    pub fn into_partial(self) -> PartialSchedule {
        PartialSchedule { order: self.order }
    }
}

/// A sequence of distinct nodes each of whose prefix sets is a
/// topological cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSchedule {
    order: Vec<NodeId>,
}

impl PartialSchedule {
    pub fn new(dag: &Dag, order: Vec<NodeId>) -> Result<PartialSchedule, GraphError> {
        validate_prefixes(dag, &order)?;
        Ok(PartialSchedule { order })
    }

    pub fn new_unchecked(order: Vec<NodeId>) -> PartialSchedule {
        PartialSchedule { order }
    }

    pub fn empty() -> PartialSchedule {
        PartialSchedule { order: Vec::new() }
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Promotes to a full schedule when every node appears.
    pub fn into_schedule(self, dag: &Dag) -> Result<Schedule, GraphError> {
        if self.order.len() != dag.node_count() {
            return Err(GraphError::NotASchedule);
        }
        Ok(Schedule { order: self.order })
    }
}

/// Distinct nodes, and every in-neighbor of an emitted node was emitted
/// before it. Equivalent to all prefix sets being topological cuts.
fn validate_prefixes(dag: &Dag, order: &[NodeId]) -> Result<(), GraphError> {
    let mut pos = vec![usize::MAX; dag.node_count()];
    for (i, &v) in order.iter().enumerate() {
        if v as usize >= dag.node_count() {
            return Err(GraphError::UnknownNodeId(v));
        }
        if pos[v as usize] != usize::MAX {
            return Err(GraphError::InvalidPartialSchedule);
        }
        pos[v as usize] = i;
    }
    for (i, &v) in order.iter().enumerate() {
        for &u in dag.inn(v) {
            if pos[u as usize] == usize::MAX || pos[u as usize] > i {
                return Err(GraphError::InvalidPartialSchedule);
            }
        }
    }
    Ok(())
}

/// The "lefthand" side of a topological cut: a node set with no incoming
/// edge from its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalCut {
    members: Vec<NodeId>,
}

impl TopologicalCut {
    pub fn new(dag: &Dag, members: &[NodeId]) -> Result<TopologicalCut, GraphError> {
        if !is_topological_cut(dag, members)? {
            return Err(GraphError::NotATopologicalCut);
        }
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        Ok(TopologicalCut { members: m })
    }

    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// True iff no edge enters `set` from its complement.
pub fn is_topological_cut(dag: &Dag, set: &[NodeId]) -> Result<bool, GraphError> {
    let mut member = vec![false; dag.node_count()];
    for &v in set {
        if v as usize >= dag.node_count() {
            return Err(GraphError::UnknownNodeId(v));
        }
        member[v as usize] = true;
    }
    for &v in set {
        for &u in dag.inn(v) {
            if !member[u as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Confirms that both `X ∩ Y` and `X ∪ Y` are topological cuts.
pub fn cut_closure_check(dag: &Dag, x: &[NodeId], y: &[NodeId]) -> Result<(bool, bool), GraphError> {
    let mut in_x = vec![false; dag.node_count()];
    let mut in_y = vec![false; dag.node_count()];
    for &v in x {
        if v as usize >= dag.node_count() {
            return Err(GraphError::UnknownNodeId(v));
        }
        in_x[v as usize] = true;
    }
    for &v in y {
        if v as usize >= dag.node_count() {
            return Err(GraphError::UnknownNodeId(v));
        }
        in_y[v as usize] = true;
    }
    let inter: Vec<NodeId> = dag.nodes().filter(|&v| in_x[v as usize] && in_y[v as usize]).collect();
    let uni: Vec<NodeId> = dag.nodes().filter(|&v| in_x[v as usize] || in_y[v as usize]).collect();
    Ok((is_topological_cut(dag, &inter)?, is_topological_cut(dag, &uni)?))
}

/// `sigma` followed by the nodes of `tau` not in `sigma`, in `tau` order.
pub fn dot_union(
    dag: &Dag,
    sigma: &PartialSchedule,
    tau: &PartialSchedule,
) -> Result<PartialSchedule, GraphError> {
    validate_prefixes(dag, sigma.order())?;
    validate_prefixes(dag, tau.order())?;
    let mut in_sigma = vec![false; dag.node_count()];
    for &v in sigma.order() {
        in_sigma[v as usize] = true;
    }
    let mut order = sigma.order().to_vec();
    order.extend(tau.order().iter().copied().filter(|&v| !in_sigma[v as usize]));
    debug_assert!(validate_prefixes(dag, &order).is_ok());
    Ok(PartialSchedule { order })
}

/// Subsequence of `sigma` restricted to the cut `t`.
pub fn dot_intersect(
    dag: &Dag,
    sigma: &PartialSchedule,
    t: &[NodeId],
) -> Result<PartialSchedule, GraphError> {
    if !is_topological_cut(dag, t)? {
        return Err(GraphError::NotATopologicalCut);
    }
    let mut member = vec![false; dag.node_count()];
    for &v in t {
        member[v as usize] = true;
    }
    let order: Vec<NodeId> = sigma.order().iter().copied().filter(|&v| member[v as usize]).collect();
    debug_assert!(validate_prefixes(dag, &order).is_ok());
    Ok(PartialSchedule { order })
}

/// True iff every node of `sigma` appears in `tau` in the same relative
/// order.
pub fn is_subschedule(sigma: &PartialSchedule, tau: &PartialSchedule) -> bool {
    let mut it = sigma.order().iter();
    let mut cur = it.next();
    for &v in tau.order() {
        match cur {
            Some(&s) if s == v => cur = it.next(),
            _ => {}
        }
    }
    cur.is_none()
}

/// Adds one fresh node (id `n`) with an edge to every old source.
pub fn add_source(dag: &Dag) -> (Dag, NodeId) {
    let s = dag.node_count() as NodeId;
    let mut edges = dag.edges().to_vec();
    for v in dag.sources() {
        edges.push((s, v));
    }
    let g = Dag::new(dag.node_count() + 1, &edges).expect("adding a source keeps the graph acyclic");
    (g, s)
}

/// Adds one fresh node (id `n`) with an edge from every old sink.
pub fn add_sink(dag: &Dag) -> (Dag, NodeId) {
    let t = dag.node_count() as NodeId;
    let mut edges = dag.edges().to_vec();
    for v in dag.sinks() {
        edges.push((v, t));
    }
    let g = Dag::new(dag.node_count() + 1, &edges).expect("adding a sink keeps the graph acyclic");
    (g, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 9-node example graph: v1..v9 are ids 0..8.
    pub(crate) fn g_ex() -> Dag {
        Dag::new(9, &[(0, 1), (1, 2), (2, 3), (2, 5), (3, 4), (5, 6), (0, 7), (7, 8)]).unwrap()
    }

    #[test]
    fn validate_accepts_single_edge() {
        let d = Dag::new(2, &[(0, 1)]).unwrap();
        assert_eq!(d.node_count(), 2);
        assert_eq!(d.edge_count(), 1);
    }

    #[test]
    fn validate_rejects_two_cycle() {
        match Dag::new(2, &[(0, 1), (1, 0)]) {
            Err(GraphError::CycleDetected(c)) => {
                assert_eq!(c.len(), 2);
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_self_loop_dup_dangling() {
        assert!(matches!(Dag::new(2, &[(0, 0)]), Err(GraphError::SelfLoop(0))));
        assert!(matches!(Dag::new(2, &[(0, 1), (0, 1)]), Err(GraphError::DuplicateEdge(0, 1))));
        assert!(matches!(Dag::new(2, &[(0, 2)]), Err(GraphError::DanglingNodeId(2))));
    }

    #[test]
    fn validate_accepts_example_graph() {
        let d = g_ex();
        assert_eq!(d.node_count(), 9);
        assert_eq!(d.edge_count(), 8);
        assert_eq!(d.sources(), vec![0]);
        assert_eq!(d.sinks(), vec![4, 6, 8]);
    }

    #[test]
    fn topological_cut_checks() {
        let d = g_ex();
        assert!(is_topological_cut(&d, &[0]).unwrap());
        // v2 alone: the edge v1 -> v2 enters the set.
        assert!(!is_topological_cut(&d, &[1]).unwrap());
        assert!(is_topological_cut(&d, &[]).unwrap());
        let all: Vec<NodeId> = d.nodes().collect();
        assert!(is_topological_cut(&d, &all).unwrap());
        assert!(matches!(is_topological_cut(&d, &[42]), Err(GraphError::UnknownNodeId(42))));
    }

    #[test]
    fn cut_closure_examples() {
        let d = g_ex();
        assert_eq!(cut_closure_check(&d, &[0], &[0, 1]).unwrap(), (true, true));
        assert_eq!(cut_closure_check(&d, &[0, 1], &[0, 7]).unwrap(), (true, true));
        assert_eq!(cut_closure_check(&d, &[], &[]).unwrap(), (true, true));
    }

    #[test]
    fn dot_union_examples() {
        let d = g_ex();
        let p = |v: &[NodeId]| PartialSchedule::new(&d, v.to_vec()).unwrap();
        // prefix overlap
        assert_eq!(dot_union(&d, &p(&[0]), &p(&[0, 1])).unwrap().order(), &[0, 1]);
        // (v1,v8) ∪̇ (v1,v2,v8,v9) = (v1,v8,v2,v9)
        assert_eq!(dot_union(&d, &p(&[0, 7]), &p(&[0, 1, 7, 8])).unwrap().order(), &[0, 7, 1, 8]);
        // identity
        let tau = p(&[0, 1, 7]);
        assert_eq!(dot_union(&d, &PartialSchedule::empty(), &tau).unwrap().order(), tau.order());
    }

    #[test]
    fn dot_intersect_examples() {
        let d = g_ex();
        let sigma = PartialSchedule::new(&d, vec![0, 1, 7, 8]).unwrap();
        assert_eq!(dot_intersect(&d, &sigma, &[0, 7]).unwrap().order(), &[0, 7]);
        assert_eq!(dot_intersect(&d, &sigma, &[0, 1, 7, 8]).unwrap().order(), sigma.order());
        assert_eq!(dot_intersect(&d, &sigma, &[]).unwrap().order(), &[] as &[NodeId]);
        // v2 alone is not a cut
        assert!(matches!(dot_intersect(&d, &sigma, &[1]), Err(GraphError::NotATopologicalCut)));
    }

    #[test]
    fn subschedule_examples() {
        let a = PartialSchedule::new_unchecked(vec![0, 8]);
        let b = PartialSchedule::new_unchecked(vec![0, 1, 7, 8]);
        let c = PartialSchedule::new_unchecked(vec![8, 0]);
        assert!(is_subschedule(&a, &b));
        assert!(!is_subschedule(&c, &b));
        assert!(is_subschedule(&PartialSchedule::empty(), &b));
    }

    #[test]
    fn add_source_examples() {
        // two isolated nodes
        let d = Dag::new(2, &[]).unwrap();
        let (g, s) = add_source(&d);
        assert_eq!(s, 2);
        assert_eq!(g.out(s), &[0, 1]);
        assert_eq!(g.sources(), vec![s]);

        // single-source dag
        let d = Dag::new(2, &[(0, 1)]).unwrap();
        let (g, s) = add_source(&d);
        assert_eq!(g.out(s), &[0]);

        // G_EX minus v1: old sources are v2 (id 0 here) and v8 (id 6).
        let d = g_ex();
        let keep: Vec<NodeId> = (1..9).collect();
        let (sub, old) = d.induced(&keep);
        let (g, s) = add_source(&sub);
        let srcs: Vec<NodeId> = g.out(s).iter().map(|&v| old[v as usize]).collect();
        assert_eq!(srcs, vec![1, 7]);
    }

    #[test]
    fn schedule_validation() {
        let d = g_ex();
        assert!(Schedule::new(&d, vec![0, 1, 2, 3, 4, 5, 6, 7, 8]).is_ok());
        assert!(Schedule::new(&d, vec![1, 0, 2, 3, 4, 5, 6, 7, 8]).is_err());
        assert!(Schedule::new(&d, vec![0, 1]).is_err());
        assert!(PartialSchedule::new(&d, vec![0, 0]).is_err());
    }

    #[test]
    fn path_detection() {
        assert!(Dag::new(3, &[(0, 1), (1, 2)]).unwrap().is_path());
        assert!(!Dag::new(3, &[(0, 1), (0, 2)]).unwrap().is_path());
        assert!(!Dag::new(2, &[]).unwrap().is_path());
    }
}
