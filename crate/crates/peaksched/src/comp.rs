//! Computation-graph memory model: output sizes held until the last
//! consumer finishes, plus per-node scratch held only while running.
//! Setting every scratch to zero recovers weighted one-shot black
//! pebbling.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Dag, NodeId, Schedule};
use crate::profile::{Profile, ProfileError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompError {
    SizeCountMismatch { nodes: usize, sizes: usize },
    ScratchCountMismatch { nodes: usize, scratches: usize },
    NegativeSize(NodeId),
    NegativeWeight(NodeId),
    NotASchedule,
    IndexOutOfRange { index: usize, len: usize },
    NotSingleSourceSink,
    ArithmeticOverflow,
}

impl fmt::Display for CompError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompError::SizeCountMismatch { nodes, sizes } => {
                write!(f, "graph has {nodes} nodes but {sizes} sizes were given")
            }
            CompError::ScratchCountMismatch { nodes, scratches } => {
                write!(f, "graph has {nodes} nodes but {scratches} scratch values were given")
            }
            CompError::NegativeSize(v) => write!(f, "node {v} has negative size"),
            CompError::NegativeWeight(v) => write!(f, "node {v} has negative pebbling weight"),
            CompError::NotASchedule => write!(f, "sequence is not a schedule of the graph"),
            CompError::IndexOutOfRange { index, len } => {
                write!(f, "step index {index} out of range 1..={len}")
            }
            CompError::NotSingleSourceSink => {
                write!(f, "graph does not have a unique source and a unique sink")
            }
            CompError::ArithmeticOverflow => write!(f, "integer overflow in memory accumulation"),
        }
    }
}

/// Per-node violation of the scratch lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScratchViolation {
    pub node: NodeId,
    pub scratch: i64,
    /// `max(-size(v), sum of -size(u) over u with v as unique consumer)`.
    pub lower_bound: i64,
}

/// `(dag, size, scratch)` triple. Sizes are nonnegative; scratch may be
/// negative down to the bound checked by [`check_scratch_condition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationGraph {
    pub dag: Dag,
    size: Vec<i64>,
    scratch: Vec<i64>,
}

impl ComputationGraph {
    pub fn new(dag: Dag, size: Vec<i64>, scratch: Vec<i64>) -> Result<ComputationGraph, CompError> {
        if size.len() != dag.node_count() {
            return Err(CompError::SizeCountMismatch { nodes: dag.node_count(), sizes: size.len() });
        }
        if scratch.len() != dag.node_count() {
            return Err(CompError::ScratchCountMismatch {
                nodes: dag.node_count(),
                scratches: scratch.len(),
            });
        }
        if let Some(v) = size.iter().position(|&s| s < 0) {
            return Err(CompError::NegativeSize(v as NodeId));
        }
        Ok(ComputationGraph { dag, size, scratch })
    }

    pub fn size(&self, v: NodeId) -> i64 {
        self.size[v as usize]
    }

    pub fn scratch(&self, v: NodeId) -> i64 {
        self.scratch[v as usize]
    }

    pub fn sizes(&self) -> &[i64] {
        &self.size
    }

    pub fn scratches(&self) -> &[i64] {
        &self.scratch
    }

    pub fn node_count(&self) -> usize {
        self.dag.node_count()
    }

    /// Induced subgraph plus the new-id -> old-id map.
    pub fn induced(&self, keep: &[NodeId]) -> (ComputationGraph, Vec<NodeId>) {
        let (dag, old) = self.dag.induced(keep);
        let size = old.iter().map(|&v| self.size[v as usize]).collect();
        let scratch = old.iter().map(|&v| self.scratch[v as usize]).collect();
        (ComputationGraph { dag, size, scratch }, old)
    }

    /// The scratch lower bound for `v`:
    /// `max(-size(v), sum over u with delta+(u) = {v} of -size(u))`.
    pub fn scratch_lower_bound(&self, v: NodeId) -> i64 {
        let mut sum = 0i64;
        for &u in self.dag.inn(v) {
            if self.dag.out(u) == [v] {
                sum -= self.size[u as usize];
            }
        }
        (-self.size[v as usize]).max(sum)
    }
}

/// Reports every node whose scratch is below its lower bound. Empty
/// result means the graph is admissible.
pub fn check_scratch_condition(cg: &ComputationGraph) -> Vec<ScratchViolation> {
    let mut violations = Vec::new();
    for v in cg.dag.nodes() {
        let lb = cg.scratch_lower_bound(v);
        if cg.scratch(v) < lb {
            violations.push(ScratchViolation { node: v, scratch: cg.scratch(v), lower_bound: lb });
        }
    }
    violations
}

/// Pebbling special case: `size = weights`, `scratch = 0` everywhere.
pub fn from_pebbling(dag: Dag, weights: &[i64]) -> Result<ComputationGraph, CompError> {
    if let Some(v) = weights.iter().position(|&w| w < 0) {
        return Err(CompError::NegativeWeight(v as NodeId));
    }
    let n = dag.node_count();
    ComputationGraph::new(dag, weights.to_vec(), vec![0; n])
}

fn positions(cg: &ComputationGraph, schedule: &Schedule) -> Result<Vec<usize>, CompError> {
    if schedule.len() != cg.node_count()
        || Schedule::new(&cg.dag, schedule.order().to_vec()).is_err()
    {
        return Err(CompError::NotASchedule);
    }
    let mut pos = vec![0usize; cg.node_count()];
    for (i, &v) in schedule.order().iter().enumerate() {
        pos[v as usize] = i;
    }
    Ok(pos)
}

/// Memory while running step `i` (1-based): sizes of retained
/// predecessors plus `size + scratch` of the running node. Direct
/// evaluation of the defining sums.
pub fn mem_during(cg: &ComputationGraph, schedule: &Schedule, i: usize) -> Result<i64, CompError> {
    let pos = positions(cg, schedule)?;
    if i < 1 || i > cg.node_count() {
        return Err(CompError::IndexOutOfRange { index: i, len: cg.node_count() });
    }
    let v = schedule.order()[i - 1];
    let mut mem = cg.size(v) + cg.scratch(v);
    for &u in schedule.order()[..i - 1].iter() {
        // u retained iff some out-neighbor is scheduled at position >= i-1
        if cg.dag.out(u).iter().any(|&w| pos[w as usize] >= i - 1) {
            mem += cg.size(u);
        }
    }
    Ok(mem)
}

/// Memory after finishing step `i` (1-based): sizes of nodes whose
/// output is still consumed later.
pub fn mem_after(cg: &ComputationGraph, schedule: &Schedule, i: usize) -> Result<i64, CompError> {
    let pos = positions(cg, schedule)?;
    if i < 1 || i > cg.node_count() {
        return Err(CompError::IndexOutOfRange { index: i, len: cg.node_count() });
    }
    let mut mem = 0;
    for &u in schedule.order()[..i].iter() {
        if cg.dag.out(u).iter().any(|&w| pos[w as usize] >= i) {
            mem += cg.size(u);
        }
    }
    Ok(mem)
}

/// Full profile `(0, during_1, after_1, ..., during_n, after_n)` of
/// length `2n + 1`, computed incrementally with per-node
/// remaining-consumer counters in `O(n + m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CgProfile(pub Vec<i64>);

impl CgProfile {
    pub fn values(&self) -> &[i64] {
        &self.0
    }

    /// Peak memory: the maximum over the odd (during) entries, or 0 for
    /// the empty graph.
    pub fn peak(&self) -> i64 {
        self.0.iter().skip(1).step_by(2).copied().max().unwrap_or(0).max(0)
    }
}

pub fn cg_profile(cg: &ComputationGraph, schedule: &Schedule) -> Result<CgProfile, CompError> {
    if schedule.len() != cg.node_count()
        || Schedule::new(&cg.dag, schedule.order().to_vec()).is_err()
    {
        return Err(CompError::NotASchedule);
    }
    let n = cg.node_count();
    let mut remaining: Vec<usize> = (0..n).map(|v| cg.dag.out(v as NodeId).len()).collect();
    let mut values = Vec::with_capacity(2 * n + 1);
    values.push(0i64);
    // retained = sum of sizes of finished nodes that still have pending
    // consumers (a node with no consumers is released when it finishes)
    let mut retained: i64 = 0;
    for &v in schedule.order() {
        let during = retained
            .checked_add(cg.size(v))
            .and_then(|m| m.checked_add(cg.scratch(v)))
            .ok_or(CompError::ArithmeticOverflow)?;
        values.push(during);
        // v finishes: its inputs with no further consumers are released
        let mut after = retained;
        for &u in cg.dag.inn(v) {
            remaining[u as usize] -= 1;
            if remaining[u as usize] == 0 {
                after -= cg.size(u);
            }
        }
        if remaining[v as usize] > 0 {
            after += cg.size(v);
        }
        values.push(after);
        retained = after;
    }
    Ok(CgProfile(values))
}

pub fn cg_peak(cg: &ComputationGraph, schedule: &Schedule) -> Result<i64, CompError> {
    Ok(cg_profile(cg, schedule)?.peak())
}

/// Internal profile of a single-source single-sink graph:
/// `(size(s) = after_1, during_2, after_2, ..., during_n, size(t))`.
pub fn internal_profile(cg: &ComputationGraph, schedule: &Schedule) -> Result<Profile, CompError> {
    let n = cg.node_count();
    if cg.dag.sources().len() != 1 || cg.dag.sinks().len() != 1 {
        return Err(CompError::NotSingleSourceSink);
    }
    let s = cg.dag.sources()[0];
    let t = cg.dag.sinks()[0];
    if n >= 2 && !cg.dag.reachable_from(&[s]).iter().all(|&r| r) {
        return Err(CompError::NotSingleSourceSink);
    }
    let full = cg_profile(cg, schedule)?;
    if schedule.order().first() != Some(&s) || schedule.order().last() != Some(&t) {
        return Err(CompError::NotASchedule);
    }
    // Drop the leading (0, during_1) and replace the trailing after_n
    // with size(t), which is still held at the cutoff point.
    let mut values: Vec<i64> = full.0[2..].to_vec();
    let last = values.len() - 1;
    values[last] = cg.size(t);
    Ok(Profile(values))
}

impl From<ProfileError> for CompError {
    fn from(e: ProfileError) -> Self {
        match e {
            ProfileError::ArithmeticOverflow => CompError::ArithmeticOverflow,
            _ => CompError::NotASchedule,
        }
    }
}
