//! Brute-force oracles, deterministic random instance generators and the
//! 3-Partition hardness-instance generator with its threshold verifier.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comp::{cg_profile, check_scratch_condition, ComputationGraph};
use crate::dominant::{DominantError, PeakOracle};
use crate::graph::{Dag, NodeId, Schedule};
use crate::profile::{dominates_algebraic, node_sum_profile, NodeSumGraph};

pub const DEFAULT_NS_CAP: usize = 12;
pub const DEFAULT_CG_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestkitError {
    TooLarge { nodes: usize, cap: usize },
    Infeasible3PartitionShape { sum: i64, groups: usize },
    ElementTooLarge { element: i64, bound: i64 },
    BadParameters,
    NotASchedule,
}

impl fmt::Display for TestkitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestkitError::TooLarge { nodes, cap } => {
                write!(f, "graph has {nodes} nodes, enumeration cap is {cap}")
            }
            TestkitError::Infeasible3PartitionShape { sum, groups } => {
                write!(f, "element sum {sum} is not divisible by {groups} groups")
            }
            TestkitError::ElementTooLarge { element, bound } => {
                write!(f, "element {element} exceeds the group sum {bound}")
            }
            TestkitError::BadParameters => write!(f, "generator parameters out of range"),
            TestkitError::NotASchedule => write!(f, "sequence is not a schedule"),
        }
    }
}

/// Streams every topological order of `dag`, lexicographic by node id.
pub struct ScheduleIter<'a> {
    dag: &'a Dag,
    // backtracking state: chosen prefix and, per depth, the id chosen
    prefix: Vec<NodeId>,
    in_prefix: Vec<bool>,
    indeg: Vec<usize>,
    done: bool,
}

pub fn enumerate_schedules(dag: &Dag, cap: usize) -> Result<ScheduleIter<'_>, TestkitError> {
    if dag.node_count() > cap {
        return Err(TestkitError::TooLarge { nodes: dag.node_count(), cap });
    }
    let indeg = (0..dag.node_count()).map(|v| dag.inn(v as NodeId).len()).collect();
    Ok(ScheduleIter {
        dag,
        prefix: Vec::new(),
        in_prefix: vec![false; dag.node_count()],
        indeg,
        done: dag.node_count() == 0,
    })
}

impl<'a> ScheduleIter<'a> {
    fn ready_after(&self, min_id: NodeId) -> Option<NodeId> {
        (min_id..self.dag.node_count() as NodeId)
            .find(|&v| self.indeg[v as usize] == 0 && !self.in_prefix[v as usize])
    }

    fn push(&mut self, v: NodeId) {
        self.prefix.push(v);
        self.in_prefix[v as usize] = true;
        for &w in self.dag.out(v) {
            self.indeg[w as usize] -= 1;
        }
    }

    fn pop(&mut self) -> NodeId {
        let v = self.prefix.pop().expect("pop on empty prefix");
        self.in_prefix[v as usize] = false;
        for &w in self.dag.out(v) {
            self.indeg[w as usize] += 1;
        }
        v
    }
}

impl<'a> Iterator for ScheduleIter<'a> {
    type Item = Schedule;

    fn next(&mut self) -> Option<Schedule> {
        if self.done {
            return None;
        }
        let n = self.dag.node_count();
        if n == 0 {
            self.done = true;
            return Some(Schedule::new_unchecked(Vec::new()));
        }
        // If a full order is pending emission, backtrack first.
        if self.prefix.len() == n {
            loop {
                let last = self.pop();
                match self.ready_after(last + 1) {
                    Some(v) => {
                        self.push(v);
                        break;
                    }
                    None => {
                        if self.prefix.is_empty() {
                            self.done = true;
                            return None;
                        }
                    }
                }
            }
        }
        // Extend greedily with the smallest ready id.
        while self.prefix.len() < n {
            let v = self.ready_after(0).expect("a DAG always has a ready node");
            self.push(v);
        }
        Some(Schedule::new_unchecked(self.prefix.clone()))
    }
}

/// Independent count of linear extensions via subset DP (n <= 24).
pub fn count_linear_extensions(dag: &Dag) -> u128 {
    let n = dag.node_count();
    assert!(n <= 24, "subset DP limited to 24 nodes");
    let mut pred_mask = vec![0u32; n];
    for &(u, v) in dag.edges() {
        pred_mask[v as usize] |= 1 << u;
    }
    let mut dp = vec![0u128; 1 << n];
    dp[0] = 1;
    for mask in 0..(1u32 << n) {
        if dp[mask as usize] == 0 {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) == 0 && pred_mask[v] & mask == pred_mask[v] {
                dp[(mask | (1 << v)) as usize] += dp[mask as usize];
            }
        }
    }
    dp[(1u32 << n) as usize - 1]
}

/// Minimum-peak schedule under the node-sum model by exhaustive
/// enumeration; ties go to the lexicographically smallest order.
pub fn brute_peak_min_ns(
    g: &NodeSumGraph,
    cap: usize,
) -> Result<(Schedule, i64), TestkitError> {
    let mut best: Option<(Schedule, i64)> = None;
    for s in enumerate_schedules(&g.dag, cap)? {
        let p = node_sum_profile(g, &s).expect("enumerated order is a schedule");
        let peak = p.peak().expect("profile nonempty");
        if best.as_ref().map_or(true, |(_, bp)| peak < *bp) {
            best = Some((s, peak));
        }
    }
    Ok(best.expect("every DAG has at least one schedule"))
}

/// Minimum-peak schedule under the computation-graph model.
pub fn brute_peak_min_cg(
    cg: &ComputationGraph,
    cap: usize,
) -> Result<(Schedule, i64), TestkitError> {
    let mut best: Option<(Schedule, i64)> = None;
    for s in enumerate_schedules(&cg.dag, cap)? {
        let peak = cg_profile(cg, &s).expect("enumerated order is a schedule").peak();
        if best.as_ref().map_or(true, |(_, bp)| peak < *bp) {
            best = Some((s, peak));
        }
    }
    Ok(best.expect("every DAG has at least one schedule"))
}

/// Verifies that `candidate` dominates every topological order of the
/// node-sum graph; returns a violating schedule otherwise.
pub fn brute_dominant_check_ns(
    g: &NodeSumGraph,
    candidate: &Schedule,
    cap: usize,
) -> Result<Option<Schedule>, TestkitError> {
    let cp = node_sum_profile(g, candidate).map_err(|_| TestkitError::NotASchedule)?;
    for s in enumerate_schedules(&g.dag, cap)? {
        let p = node_sum_profile(g, &s).expect("enumerated order is a schedule");
        if !dominates_algebraic(cp.values(), p.values()) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Verifies that `candidate` dominates every topological order of the
/// computation graph (full profiles); returns a violator otherwise.
pub fn brute_dominant_check_cg(
    cg: &ComputationGraph,
    candidate: &Schedule,
    cap: usize,
) -> Result<Option<Schedule>, TestkitError> {
    let cp = cg_profile(cg, candidate).map_err(|_| TestkitError::NotASchedule)?;
    for s in enumerate_schedules(&cg.dag, cap)? {
        let p = cg_profile(cg, &s).expect("enumerated order is a schedule");
        if !dominates_algebraic(cp.values(), p.values()) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Brute-force peak oracle for arbitrary node-sum graphs, capped.
pub struct BruteOracle {
    pub cap: usize,
}

impl Default for BruteOracle {
    fn default() -> Self {
        BruteOracle { cap: DEFAULT_NS_CAP }
    }
}

impl PeakOracle for BruteOracle {
    fn peak_minimizing(&self, g: &NodeSumGraph) -> Result<Schedule, DominantError> {
        brute_peak_min_ns(g, self.cap)
            .map(|(s, _)| s)
            .map_err(|e| match e {
                TestkitError::TooLarge { nodes, cap } => DominantError::OracleCapExceeded { nodes, cap },
                _ => DominantError::OracleInvalid,
            })
    }
}

/// Which hardness construction a generated instance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardnessVariant {
    Pumpkin,
    OutTree,
}

/// A weighted one-shot pebbling instance encoding a 3-Partition
/// question: the optimum meets `threshold` iff the instance is feasible.
#[derive(Debug, Clone)]
pub struct HardnessInstance {
    pub cg: ComputationGraph,
    pub variant: HardnessVariant,
    pub m: usize,
    pub a: Vec<i64>,
    pub b: i64,
    pub w: i64,
    pub threshold: i64,
    pub source: NodeId,
    /// Branch node ids from the source side inward, i.e. indices
    /// `k = 2m-1, 2m-2, ..., 1` of the construction.
    pub branches: Vec<Vec<NodeId>>,
    /// The shared sink (pumpkin) or the per-branch sinks (out-tree).
    pub sinks: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardnessVerdict {
    pub peak: i64,
    pub threshold: i64,
    pub meets_threshold: bool,
    /// Group sizes extracted from a canonically grouped schedule
    /// (branch index sets per group), best-effort diagnostic.
    pub partition: Option<Vec<Vec<usize>>>,
    pub partition_sums_match: Option<bool>,
}

fn hardness_weights(a: &[i64], m: usize) -> Result<(i64, i64, i64), TestkitError> {
    if a.is_empty() || m == 0 || a.iter().any(|&x| x < 1) {
        return Err(TestkitError::BadParameters);
    }
    let sum: i64 = a.iter().sum();
    if sum % m as i64 != 0 {
        return Err(TestkitError::Infeasible3PartitionShape { sum, groups: m });
    }
    let b = sum / m as i64;
    if let Some(&big) = a.iter().find(|&&x| x > b) {
        return Err(TestkitError::ElementTooLarge { element: big, bound: b });
    }
    let n = a.len() as i64;
    let m_i = m as i64;
    let w = m_i * (m_i + 1) * n * b / 2 + m_i * b;
    let threshold = w + m_i * (m_i + 1) * b / 2;
    Ok((b, w, threshold))
}

/// Weight of branch node `v^i_k`: odd `k` gives `(k+1)/2 * a_i`, even
/// `k` gives `(m - k/2)(m + k/2 + 1)B/2 - a_i`.
fn branch_node_weight(k: i64, a_i: i64, m: i64, b: i64) -> i64 {
    if k % 2 == 1 {
        (k + 1) / 2 * a_i
    } else {
        (m - k / 2) * (m + k / 2 + 1) * b / 2 - a_i
    }
}

fn gen_3partition(
    a: &[i64],
    m: usize,
    variant: HardnessVariant,
) -> Result<HardnessInstance, TestkitError> {
    let (b, w, threshold) = hardness_weights(a, m)?;
    let n_br = a.len();
    let per_branch = 2 * m - 1;
    let n_sinks = match variant {
        HardnessVariant::Pumpkin => 1,
        HardnessVariant::OutTree => n_br,
    };
    let total = 1 + n_br * per_branch + n_sinks;
    let source: NodeId = 0;
    let mut weights = vec![0i64; total];
    weights[0] = w;
    let mut edges = Vec::new();
    let mut branches = Vec::with_capacity(n_br);
    let mut next: NodeId = 1;
    let first_sink = (1 + n_br * per_branch) as NodeId;
    for (i, &a_i) in a.iter().enumerate() {
        let mut chain = Vec::with_capacity(per_branch);
        let mut prev = source;
        // nodes run k = 2m-1 down to 1 from the source inward
        for step in 0..per_branch {
            let k = (per_branch - step) as i64;
            weights[next as usize] = branch_node_weight(k, a_i, m as i64, b);
            debug_assert!(weights[next as usize] >= 0, "hardness weights are nonnegative");
            edges.push((prev, next));
            chain.push(next);
            prev = next;
            next += 1;
        }
        let sink = match variant {
            HardnessVariant::Pumpkin => first_sink,
            HardnessVariant::OutTree => first_sink + i as NodeId,
        };
        edges.push((prev, sink));
        branches.push(chain);
    }
    let sinks: Vec<NodeId> = match variant {
        HardnessVariant::Pumpkin => {
            weights[first_sink as usize] = 0;
            vec![first_sink]
        }
        HardnessVariant::OutTree => (0..n_br)
            .map(|i| {
                let t = first_sink + i as NodeId;
                weights[t as usize] = w;
                t
            })
            .collect(),
    };
    let dag = Dag::new(total, &edges).expect("hardness construction is acyclic");
    let cg = crate::comp::from_pebbling(dag, &weights).expect("weights are nonnegative");
    debug_assert!(check_scratch_condition(&cg).is_empty());
    Ok(HardnessInstance {
        cg,
        variant,
        m,
        a: a.to_vec(),
        b,
        w,
        threshold,
        source,
        branches,
        sinks,
    })
}

/// Pumpkin hardness instance: `|a|` branches of `2m - 1` nodes between a
/// source of size `W` and a zero-size sink.
pub fn gen_3partition_pumpkin(a: &[i64], m: usize) -> Result<HardnessInstance, TestkitError> {
    gen_3partition(a, m, HardnessVariant::Pumpkin)
}

/// Out-tree variant: each branch ends in its own sink of size `W`.
pub fn gen_3partition_outtree(a: &[i64], m: usize) -> Result<HardnessInstance, TestkitError> {
    gen_3partition(a, m, HardnessVariant::OutTree)
}

/// Checks a schedule against the instance threshold and, when the
/// schedule has the canonical grouped form, extracts the implied
/// partition and whether each group sums to `B`.
pub fn verify_hardness(
    inst: &HardnessInstance,
    schedule: &Schedule,
) -> Result<HardnessVerdict, TestkitError> {
    let profile = cg_profile(&inst.cg, schedule).map_err(|_| TestkitError::NotASchedule)?;
    let peak = profile.peak();
    let meets = peak <= inst.threshold;
    // Canonical grouped form: after the source, branches are executed to
    // completion-depth in one contiguous run each, depths weakly
    // increasing valley index (v_1 first). Extract how deep each branch
    // got before the first node of the next branch appears.
    let partition = extract_grouping(inst, schedule);
    let sums = partition.as_ref().map(|groups| {
        groups
            .iter()
            .filter(|g| !g.is_empty())
            .all(|g| g.iter().map(|&i| inst.a[i]).sum::<i64>() == inst.b)
    });
    Ok(HardnessVerdict {
        peak,
        threshold: inst.threshold,
        meets_threshold: meets,
        partition,
        partition_sums_match: sums,
    })
}

/// Best-effort: returns `groups[j]` = branches advanced exactly to their
/// `j`-th valley (odd node `v_{2j+1}`), when the schedule runs each
/// branch contiguously before the source is released.
fn extract_grouping(inst: &HardnessInstance, schedule: &Schedule) -> Option<Vec<Vec<usize>>> {
    let per_branch = 2 * inst.m - 1;
    let mut branch_of = vec![usize::MAX; inst.cg.node_count()];
    let mut depth_of = vec![0usize; inst.cg.node_count()];
    for (i, chain) in inst.branches.iter().enumerate() {
        for (d, &v) in chain.iter().enumerate() {
            branch_of[v as usize] = i;
            depth_of[v as usize] = d + 1;
        }
    }
    // walk until every branch has been entered, recording the depth each
    // branch reaches in its first contiguous run
    let mut depth = vec![0usize; inst.branches.len()];
    let mut cur: Option<usize> = None;
    let mut entered = vec![false; inst.branches.len()];
    for &v in schedule.order().iter().skip(1) {
        let b = branch_of[v as usize];
        if b == usize::MAX {
            break;
        }
        match cur {
            Some(c) if c == b => depth[b] = depth_of[v as usize],
            Some(c) if entered[b] || depth_of[v as usize] != 1 => {
                let _ = c;
                return None; // revisits a branch: not canonical
            }
            _ => {
                cur = Some(b);
                entered[b] = true;
                depth[b] = depth_of[v as usize];
            }
        }
        if entered.iter().all(|&e| e) && depth.iter().all(|&d| d == per_branch || d % 2 == 1) {
            // done once every branch has stopped at an odd node
        }
    }
    if !entered.iter().all(|&e| e) {
        return None;
    }
    // depth d corresponds to k = per_branch - d + 1; stopping at odd k =
    // 2j - 1 puts the branch in group j (1-based)
    let mut groups = vec![Vec::new(); inst.m];
    for (i, &d) in depth.iter().enumerate() {
        let k = per_branch as i64 - d as i64 + 1;
        if k % 2 != 1 {
            return None;
        }
        let j = ((k + 1) / 2) as usize; // group index 1..=m
        if j == 0 || j > inst.m {
            return None;
        }
        groups[j - 1].push(i);
    }
    Some(groups)
}

/// Exhaustive 3-Partition feasibility (assign each element to one of `m`
/// groups; feasible iff all groups can sum to `B`).
pub fn three_partition_feasible(a: &[i64], m: usize) -> bool {
    let sum: i64 = a.iter().sum();
    if m == 0 || sum % m as i64 != 0 {
        return false;
    }
    let b = sum / m as i64;
    fn go(a: &[i64], idx: usize, loads: &mut [i64], b: i64) -> bool {
        if idx == a.len() {
            return loads.iter().all(|&l| l == b);
        }
        for g in 0..loads.len() {
            if loads[g] + a[idx] <= b {
                loads[g] += a[idx];
                if go(a, idx + 1, loads, b) {
                    return true;
                }
                loads[g] -= a[idx];
            }
            // symmetry break: skip identical loads
            if loads[g] == 0 {
                break;
            }
        }
        false
    }
    let mut loads = vec![0i64; m];
    go(a, 0, &mut loads, b)
}

// ---------------------------------------------------------------------------
// deterministic random generators
// ---------------------------------------------------------------------------

/// Random node-sum DAG: edge (i, j) with i < j kept with probability ~1/2.
pub fn random_dag(seed: u64, n: usize, weight_range: (i64, i64)) -> NodeSumGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n as NodeId {
        for j in (i + 1)..n as NodeId {
            if rng.gen_bool(0.45) {
                edges.push((i, j));
            }
        }
    }
    let dag = Dag::new(n, &edges).expect("forward edges only");
    let weights = (0..n).map(|_| rng.gen_range(weight_range.0..=weight_range.1)).collect();
    NodeSumGraph::new(dag, weights).expect("one weight per node")
}

/// Random computation graph with the scratch condition enforced by
/// sampling scratch at or above its lower bound.
pub fn random_cg(seed: u64, n: usize) -> ComputationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n as NodeId {
        for j in (i + 1)..n as NodeId {
            if rng.gen_bool(0.4) {
                edges.push((i, j));
            }
        }
    }
    let dag = Dag::new(n, &edges).expect("forward edges only");
    let sizes: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    let cg0 = ComputationGraph::new(dag.clone(), sizes.clone(), vec![0; n]).unwrap();
    let scratch: Vec<i64> = (0..n as NodeId)
        .map(|v| {
            let lb = cg0.scratch_lower_bound(v);
            rng.gen_range(lb..=lb.max(0) + 3)
        })
        .collect();
    let cg = ComputationGraph::new(dag, sizes, scratch).unwrap();
    debug_assert!(check_scratch_condition(&cg).is_empty());
    cg
}

/// Random two-terminal series-parallel computation graph built by
/// sampling a decomposition tree and recomposing it. Out-degree stays
/// at most `d`.
pub fn random_sp(seed: u64, n: usize, d: usize) -> ComputationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let n = n.max(2);
    let d = d.max(2);
    // grow an edge list over nodes; start with s -> t and repeatedly
    // expand: series-split an edge or add a parallel chain between the
    // endpoints of an existing edge pair (kept simple: parallel adds a
    // fresh 1-node chain, which preserves SP-ness and bounds degree
    // growth to one per operation)
    let mut next: NodeId = 2;
    let mut edges: Vec<(NodeId, NodeId)> = vec![(0, 1)];
    let mut outdeg = vec![0usize; n];
    outdeg[0] = 1;
    while (next as usize) < n {
        let pick = rng.gen_range(0..edges.len());
        let (u, v) = edges[pick];
        if rng.gen_bool(0.55) {
            // series: u -> w -> v
            let w = next;
            edges[pick] = (u, w);
            edges.push((w, v));
            outdeg[w as usize] = 1;
            next += 1;
        } else if outdeg[u as usize] < d {
            // parallel: u -> w -> v alongside u -> ... -> v
            let w = next;
            edges.push((u, w));
            edges.push((w, v));
            outdeg[u as usize] += 1;
            outdeg[w as usize] = 1;
            next += 1;
        }
    }
    let dag = Dag::new(n, &edges).expect("SP construction is acyclic");
    let sizes: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    let cg0 = ComputationGraph::new(dag.clone(), sizes.clone(), vec![0; n]).unwrap();
    let scratch: Vec<i64> = (0..n as NodeId)
        .map(|v| {
            let lb = cg0.scratch_lower_bound(v);
            rng.gen_range(lb..=lb.max(0) + 2)
        })
        .collect();
    ComputationGraph::new(dag, sizes, scratch).unwrap()
}

/// Random caduceus node-sum graph with a staff of `p` nodes and `b`
/// bends. Weights are small signed integers.
pub fn random_caduceus(seed: u64, p: usize, b: usize) -> NodeSumGraph {
    random_caduceus_with(seed, p, b, 3, (-3, 3))
}

/// Caduceus generator with explicit bend length and weight ranges.
pub fn random_caduceus_with(
    seed: u64,
    p: usize,
    b: usize,
    max_bend_len: usize,
    weight_range: (i64, i64),
) -> NodeSumGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0xd134_2543_de82_ef95));
    let p = p.max(2);
    let mut edges: Vec<(NodeId, NodeId)> = (0..p as NodeId - 1).map(|i| (i, i + 1)).collect();
    let mut next = p as NodeId;
    for _ in 0..b {
        let l = rng.gen_range(0..p - 1) as NodeId;
        let r = rng.gen_range(l as usize + 1..p) as NodeId;
        let len = rng.gen_range(1..=max_bend_len.max(1));
        let mut prev = l;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, r));
    }
    let n = next as usize;
    let dag = Dag::new(n, &edges).expect("caduceus construction is acyclic");
    let weights = (0..n).map(|_| rng.gen_range(weight_range.0..=weight_range.1)).collect();
    NodeSumGraph::new(dag, weights).expect("one weight per node")
}

/// Random pumpkin computation graph with `d` branches of `1..=max_len`
/// internal nodes each (at most one empty branch when `allow_degenerate`).
pub fn random_pumpkin(seed: u64, d: usize, max_len: usize) -> ComputationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_f491_4f6c_dd1d));
    let d = d.max(1);
    let degenerate = rng.gen_bool(0.15);
    let mut edges = Vec::new();
    let mut next: NodeId = 2; // 0 = source, 1 = sink
    for i in 0..d {
        if degenerate && i == 0 {
            edges.push((0, 1));
            continue;
        }
        let len = rng.gen_range(1..=max_len.max(1));
        let mut prev: NodeId = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1));
    }
    let n = next as usize;
    let dag = Dag::new(n, &edges).expect("pumpkin construction is acyclic");
    let sizes: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    let cg0 = ComputationGraph::new(dag.clone(), sizes.clone(), vec![0; n]).unwrap();
    let scratch: Vec<i64> = (0..n as NodeId)
        .map(|v| {
            let lb = cg0.scratch_lower_bound(v);
            rng.gen_range(lb..=lb.max(0) + 2)
        })
        .collect();
    ComputationGraph::new(dag, sizes, scratch).unwrap()
}

/// Random in-tree computation graph rooted at node `n - 1`.
pub fn random_in_tree(seed: u64, n: usize) -> ComputationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x94d0_49bb_1331_11eb));
    let n = n.max(1);
    // each node i < n-1 points at a random later node
    let mut edges = Vec::new();
    for i in 0..n - 1 {
        let parent = rng.gen_range(i + 1..n) as NodeId;
        edges.push((i as NodeId, parent));
    }
    let dag = Dag::new(n, &edges).expect("in-tree construction is acyclic");
    let sizes: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    let cg0 = ComputationGraph::new(dag.clone(), sizes.clone(), vec![0; n]).unwrap();
    let scratch: Vec<i64> = (0..n as NodeId)
        .map(|v| {
            let lb = cg0.scratch_lower_bound(v);
            rng.gen_range(lb..=lb.max(0) + 2)
        })
        .collect();
    ComputationGraph::new(dag, sizes, scratch).unwrap()
}

/// Random topological order (used by property tests to sample schedules).
pub fn random_schedule(seed: u64, dag: &Dag) -> Schedule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x8f0c_23ff_51ab_c04d));
    let mut indeg: Vec<usize> = (0..dag.node_count()).map(|v| dag.inn(v as NodeId).len()).collect();
    let mut ready: Vec<NodeId> = dag.nodes().filter(|&v| indeg[v as usize] == 0).collect();
    let mut order = Vec::with_capacity(dag.node_count());
    while !ready.is_empty() {
        ready.shuffle(&mut rng);
        let v = ready.pop().unwrap();
        order.push(v);
        for &w in dag.out(v) {
            indeg[w as usize] -= 1;
            if indeg[w as usize] == 0 {
                ready.push(w);
            }
        }
        ready.sort_unstable();
    }
    debug_assert_eq!(order.len(), dag.node_count());
    Schedule::new_unchecked(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Dag;

    #[test]
    fn enumerate_small_cases() {
        let chain = Dag::new(2, &[(0, 1)]).unwrap();
        assert_eq!(enumerate_schedules(&chain, 12).unwrap().count(), 1);

        let free = Dag::new(2, &[]).unwrap();
        let orders: Vec<_> = enumerate_schedules(&free, 12).unwrap().map(|s| s.order().to_vec()).collect();
        assert_eq!(orders, vec![vec![0, 1], vec![1, 0]]);

        let too_big = Dag::new(13, &[]).unwrap();
        assert!(matches!(
            enumerate_schedules(&too_big, 12),
            Err(TestkitError::TooLarge { nodes: 13, cap: 12 })
        ));
    }

    #[test]
    fn enumeration_count_matches_subset_dp() {
        // G1 fixture
        let dag = Dag::new(6, &[(0, 1), (1, 2), (1, 4), (2, 3), (4, 5)]).unwrap();
        let by_enum = enumerate_schedules(&dag, 12).unwrap().count() as u128;
        assert_eq!(by_enum, count_linear_extensions(&dag));
        // enumeration is lexicographic
        let mut prev: Option<Vec<NodeId>> = None;
        for s in enumerate_schedules(&dag, 12).unwrap() {
            if let Some(p) = prev {
                assert!(p < s.order().to_vec());
            }
            prev = Some(s.order().to_vec());
        }
    }

    #[test]
    fn brute_peak_examples() {
        let dag = Dag::new(6, &[(0, 1), (1, 2), (1, 4), (2, 3), (4, 5)]).unwrap();
        let g = NodeSumGraph::new(dag, vec![10, -9, 4, -3, 4, -3]).unwrap();
        let (_, peak) = brute_peak_min_ns(&g, 12).unwrap();
        assert_eq!(peak, 10);

        let single = NodeSumGraph::new(Dag::new(1, &[]).unwrap(), vec![7]).unwrap();
        assert_eq!(brute_peak_min_ns(&single, 12).unwrap().1, 7);
    }

    #[test]
    fn dominant_check_finds_counterexample() {
        // sigma_1 is peak-minimizing for G1 but not dominant
        let dag = Dag::new(6, &[(0, 1), (1, 2), (1, 4), (2, 3), (4, 5)]).unwrap();
        let g = NodeSumGraph::new(dag, vec![10, -9, 4, -3, 4, -3]).unwrap();
        let s1 = Schedule::new(&g.dag, vec![0, 1, 2, 4, 3, 5]).unwrap();
        assert!(brute_dominant_check_ns(&g, &s1, 12).unwrap().is_some());

        let chain = NodeSumGraph::new(Dag::new(2, &[(0, 1)]).unwrap(), vec![5, -1]).unwrap();
        let only = Schedule::new(&chain.dag, vec![0, 1]).unwrap();
        assert!(brute_dominant_check_ns(&chain, &only, 12).unwrap().is_none());
    }

    #[test]
    fn hardness_pumpkin_m2() {
        let inst = gen_3partition_pumpkin(&[1, 1, 1, 1], 2).unwrap();
        assert_eq!(inst.b, 2);
        assert_eq!(inst.w, 28);
        assert_eq!(inst.threshold, 34);
        assert_eq!(inst.branches.len(), 4);
        assert_eq!(inst.branches[0].len(), 3);
        // k = 3 -> 2a_i = 2, k = 2 -> 3, k = 1 -> a_i = 1
        let chain = &inst.branches[0];
        assert_eq!(inst.cg.size(chain[0]), 2);
        assert_eq!(inst.cg.size(chain[1]), 3);
        assert_eq!(inst.cg.size(chain[2]), 1);
        assert!(inst.cg.sizes().iter().all(|&s| s >= 0));
    }

    #[test]
    fn hardness_m1_trivial() {
        let k = 5;
        let inst = gen_3partition_pumpkin(&[k], 1).unwrap();
        assert_eq!(inst.w, 2 * k);
        assert_eq!(inst.threshold, 3 * k);
    }

    #[test]
    fn hardness_guards() {
        assert!(matches!(
            gen_3partition_pumpkin(&[5, 1], 2),
            Err(TestkitError::ElementTooLarge { element: 5, bound: 3 })
        ));
        assert!(matches!(
            gen_3partition_pumpkin(&[1, 1, 1], 2),
            Err(TestkitError::Infeasible3PartitionShape { .. })
        ));
    }

    #[test]
    fn hardness_outtree_shape() {
        let inst = gen_3partition_outtree(&[1, 1, 1, 1], 2).unwrap();
        assert_eq!(inst.sinks.len(), 4);
        for &t in &inst.sinks {
            assert_eq!(inst.cg.size(t), 28);
        }
        assert_eq!(inst.cg.dag.out(inst.source).len(), 4);
        assert_eq!(inst.threshold, gen_3partition_pumpkin(&[1, 1, 1, 1], 2).unwrap().threshold);
    }

    #[test]
    fn branch_profile_shape_claim() {
        // (5) <= (1) <= (2) for every branch and every odd k
        let inst = gen_3partition_pumpkin(&[1, 2, 3, 2], 2).unwrap();
        let m = inst.m as i64;
        for (i, &a_i) in inst.a.iter().enumerate() {
            let _ = i;
            let mut k = 2 * m - 1;
            while k >= 3 {
                let s_k = branch_node_weight(k, a_i, m, inst.b);
                let s_k1 = branch_node_weight(k - 1, a_i, m, inst.b);
                let s_k2 = branch_node_weight(k - 2, a_i, m, inst.b);
                let st1 = s_k; // (1)
                let st2 = s_k + s_k1; // (2)
                let st5 = s_k2; // (5)
                assert!(st5 <= st1 && st1 <= st2);
                k -= 2;
            }
        }
    }

    #[test]
    fn feasibility_checker() {
        assert!(three_partition_feasible(&[1, 1, 1, 1], 2));
        // unrestricted groups: {3} and {1, 1, 1} both sum to 3
        assert!(three_partition_feasible(&[1, 1, 1, 3], 2));
        // no subset of (3, 3, 4) sums to 5
        assert!(!three_partition_feasible(&[3, 3, 4], 2));
        assert!(three_partition_feasible(&[3], 1));
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_dag(7, 6, (-5, 5));
        let b = random_dag(7, 6, (-5, 5));
        assert_eq!(a, b);
        let c = random_cg(9, 5);
        let d = random_cg(9, 5);
        assert_eq!(c, d);
    }
}
