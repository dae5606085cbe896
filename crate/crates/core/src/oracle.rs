//! Brute-force reference optima.
//!
//! Nothing here calls into a solver module. Subset searches are guarded by
//! size limits that fail loudly instead of truncating.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matchcore::{DegreeBoundedGraph, Graph, Matching};
use crate::model::{Batch, BatchSchedule, Instance, IntegralSchedule};
use crate::preempt::TwoMatching;
use crate::rational::{int, Rational};

pub const SLOT_GUARD: usize = 16;
pub const TF2M_GUARD: usize = 10;
pub const BATCH_GUARD: usize = 6;
pub const MATCHING_GUARD: usize = 16;
pub const DCS_EDGE_GUARD: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult<V, W> {
    pub value: V,
    pub witness: W,
    /// Number of candidate solutions examined.
    pub explored: u64,
}

// ---------------------------------------------------------------------------
// Slot subsets

/// Augmenting-path max flow on a dense capacity matrix.
struct Flow {
    cap: Vec<Vec<i64>>,
}

impl Flow {
    fn new(n: usize) -> Self {
        Flow { cap: vec![vec![0; n]; n] }
    }

    fn run(&mut self, s: usize, t: usize) -> i64 {
        let n = self.cap.len();
        let mut total = 0;
        loop {
            let mut prev = vec![usize::MAX; n];
            prev[s] = s;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for v in 0..n {
                    if prev[v] == usize::MAX && self.cap[u][v] > 0 {
                        prev[v] = u;
                        stack.push(v);
                    }
                }
            }
            if prev[t] == usize::MAX {
                return total;
            }
            let mut v = t;
            let mut push = i64::MAX;
            while v != s {
                push = push.min(self.cap[prev[v]][v]);
                v = prev[v];
            }
            let mut v = t;
            while v != s {
                self.cap[prev[v]][v] -= push;
                self.cap[v][prev[v]] += push;
                v = prev[v];
            }
            total += push;
        }
    }
}

/// Schedules the given jobs fully inside `slots`, if possible.
fn schedule_all(inst: &Instance, jobs: &[usize], slots: &[u32]) -> Option<IntegralSchedule> {
    let (n, m) = (jobs.len(), slots.len());
    let (src, sink) = (n + m, n + m + 1);
    let mut flow = Flow::new(n + m + 2);
    let mut need = 0;
    for (a, &j) in jobs.iter().enumerate() {
        let job = &inst.jobs()[j];
        flow.cap[src][a] = job.length as i64;
        need += job.length as i64;
        for (b, &s) in slots.iter().enumerate() {
            if job.is_feasible_slot(s) {
                flow.cap[a][n + b] = 1;
            }
        }
    }
    for b in 0..m {
        flow.cap[n + b][sink] = inst.b() as i64;
    }
    if flow.run(src, sink) != need {
        return None;
    }
    let mut sched = IntegralSchedule::new();
    for (a, &j) in jobs.iter().enumerate() {
        let used: Vec<u32> = (0..m).filter(|&b| flow.cap[n + b][a] > 0).map(|b| slots[b]).collect();
        sched.assign(inst.jobs()[j].id.clone(), used);
    }
    Some(sched)
}

/// Largest number of jobs that run to completion inside `slots`.
fn max_complete(inst: &Instance, slots: &[u32], explored: &mut u64) -> (usize, IntegralSchedule) {
    let n = inst.len();
    if inst.all_unit() {
        *explored += 1;
        let (src, sink) = (n + slots.len(), n + slots.len() + 1);
        let mut flow = Flow::new(n + slots.len() + 2);
        for (a, job) in inst.jobs().iter().enumerate() {
            flow.cap[src][a] = 1;
            for (b, &s) in slots.iter().enumerate() {
                if job.is_feasible_slot(s) {
                    flow.cap[a][n + b] = 1;
                }
            }
        }
        for b in 0..slots.len() {
            flow.cap[n + b][sink] = inst.b() as i64;
        }
        let value = flow.run(src, sink) as usize;
        let mut sched = IntegralSchedule::new();
        for (a, job) in inst.jobs().iter().enumerate() {
            if let Some(b) = (0..slots.len()).find(|&b| flow.cap[n + b][a] > 0) {
                sched.assign(job.id.clone(), vec![slots[b]]);
            }
        }
        return (value, sched);
    }
    // Non-unit lengths: try job subsets from the largest down.
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    for mask in masks {
        *explored += 1;
        let jobs: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
        if let Some(s) = schedule_all(inst, &jobs, slots) {
            return (jobs.len(), s);
        }
    }
    (0, IntegralSchedule::new())
}

fn guard_slots(inst: &Instance) -> Result<Vec<u32>> {
    let universe = inst.slot_universe();
    if universe.len() > SLOT_GUARD {
        return Err(Error::Guard(format!(
            "slot universe has {} slots, limit {SLOT_GUARD}",
            universe.len()
        )));
    }
    if !inst.is_integral() {
        return Err(Error::Unsupported("slot oracles need integer windows".into()));
    }
    if inst.len() > 20 {
        return Err(Error::Guard(format!("{} jobs, limit 20", inst.len())));
    }
    Ok(universe)
}

fn subsets_of_size(universe: &[u32], k: usize, mut visit: impl FnMut(&[u32]) -> bool) {
    fn rec(u: &[u32], k: usize, from: usize, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in from..u.len() {
            if u.len() - i < k - cur.len() {
                break;
            }
            cur.push(u[i]);
            if rec(u, k, i + 1, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(universe, k, 0, &mut Vec::with_capacity(k), &mut visit);
}

/// Fewest active slots. When no subset schedules every job, the value is
/// the fewest slots that reach the maximum throughput; the witness shows
/// which jobs are satisfied.
pub fn brute_min_active(inst: &Instance) -> Result<OracleResult<usize, IntegralSchedule>> {
    let universe = guard_slots(inst)?;
    let mut explored = 0;
    let (target, _) = max_complete(inst, &universe, &mut explored);
    for k in 0..=universe.len() {
        let mut found = None;
        subsets_of_size(&universe, k, |subset| {
            let (got, sched) = max_complete(inst, subset, &mut explored);
            if got == target {
                found = Some(sched);
                return true;
            }
            false
        });
        if let Some(witness) = found {
            return Ok(OracleResult { value: witness.active_time(), witness, explored });
        }
    }
    unreachable!("the full universe reaches the target")
}

/// Most jobs completed using at most `alpha` active slots.
pub fn brute_max_throughput(
    inst: &Instance,
    alpha: usize,
) -> Result<OracleResult<usize, IntegralSchedule>> {
    let universe = guard_slots(inst)?;
    let mut explored = 0;
    let mut best = (0, IntegralSchedule::new());
    for k in 0..=alpha.min(universe.len()) {
        subsets_of_size(&universe, k, |subset| {
            let (got, sched) = max_complete(inst, subset, &mut explored);
            if got > best.0 {
                best = (got, sched);
            }
            false
        });
    }
    Ok(OracleResult { value: best.0, witness: best.1, explored })
}

// ---------------------------------------------------------------------------
// Batches

struct BatchJob {
    release: Rational,
    deadline: Rational,
}

fn batch_jobs(inst: &Instance) -> Result<Vec<BatchJob>> {
    if inst.len() > BATCH_GUARD {
        return Err(Error::Guard(format!("{} jobs, limit {BATCH_GUARD}", inst.len())));
    }
    inst.jobs()
        .iter()
        .map(|j| match j.single_window() {
            Some(w) if j.length == 1 => Ok(BatchJob { release: w.release, deadline: w.deadline }),
            _ => Err(Error::Unsupported(format!("job {:?} is not a unit single-window job", j.id))),
        })
        .collect()
}

/// Fewest batches for the jobs in `mask`: every ordered partition into
/// blocks of at most `B`, each block started as early as its releases and
/// its predecessor allow.
fn min_batches_for(
    jobs: &[BatchJob],
    b: usize,
    mask: u32,
    explored: &mut u64,
) -> Option<Vec<(Rational, u32)>> {
    fn rec(
        jobs: &[BatchJob],
        b: usize,
        rest: u32,
        prev_end: Option<Rational>,
        cur: &mut Vec<(Rational, u32)>,
        best: &mut Option<Vec<(Rational, u32)>>,
        explored: &mut u64,
    ) {
        if rest == 0 {
            if best.as_ref().map_or(true, |bst| cur.len() < bst.len()) {
                *best = Some(cur.clone());
            }
            return;
        }
        if best.as_ref().is_some_and(|bst| cur.len() + 1 >= bst.len()) {
            return;
        }
        // enumerate non-empty sub-masks of rest
        let mut block = rest;
        while block != 0 {
            if block.count_ones() as usize <= b {
                *explored += 1;
                let members = (0..jobs.len()).filter(|&j| block >> j & 1 == 1);
                let mut start = prev_end.unwrap_or_else(|| int(i64::MIN / 4));
                let mut latest_end: Option<Rational> = None;
                for j in members {
                    start = start.max(jobs[j].release);
                    latest_end = Some(latest_end.map_or(jobs[j].deadline, |e| e.min(jobs[j].deadline)));
                }
                if start + Rational::one() <= latest_end.unwrap() {
                    cur.push((start, block));
                    rec(jobs, b, rest & !block, Some(start + Rational::one()), cur, best, explored);
                    cur.pop();
                }
            }
            block = (block - 1) & rest;
        }
    }
    let mut best = None;
    rec(jobs, b, mask, None, &mut Vec::new(), &mut best, explored);
    best
}

fn to_batch_schedule(inst: &Instance, blocks: &[(Rational, u32)]) -> BatchSchedule {
    let mut sched = BatchSchedule::default();
    for &(start, block) in blocks {
        let jobs = (0..inst.len()).filter(|&j| block >> j & 1 == 1).map(|j| inst.jobs()[j].id.clone()).collect();
        sched.batches.push(Batch { start, jobs });
    }
    sched
}

/// Fewest batches scheduling every job; `None` when infeasible.
pub fn brute_min_batches(inst: &Instance) -> Result<OracleResult<Option<usize>, BatchSchedule>> {
    let jobs = batch_jobs(inst)?;
    let mut explored = 0;
    let all = if jobs.is_empty() { 0 } else { (1u32 << jobs.len()) - 1 };
    let best = min_batches_for(&jobs, inst.b() as usize, all, &mut explored);
    Ok(match best {
        Some(blocks) => OracleResult {
            value: Some(blocks.len()),
            witness: to_batch_schedule(inst, &blocks),
            explored,
        },
        None => OracleResult { value: None, witness: BatchSchedule::default(), explored },
    })
}

/// Most jobs schedulable in at most `budget` batches.
pub fn brute_max_throughput_batches(
    inst: &Instance,
    budget: usize,
) -> Result<OracleResult<usize, BatchSchedule>> {
    let jobs = batch_jobs(inst)?;
    let mut explored = 0;
    let mut best = (0, Vec::new());
    for mask in 0..1u32 << jobs.len() {
        let size = mask.count_ones() as usize;
        if size <= best.0 {
            continue;
        }
        if let Some(blocks) = min_batches_for(&jobs, inst.b() as usize, mask, &mut explored) {
            if blocks.len() <= budget {
                best = (size, blocks);
            }
        }
    }
    Ok(OracleResult { value: best.0, witness: to_batch_schedule(inst, &best.1), explored })
}

// ---------------------------------------------------------------------------
// Graphs

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    let mut adj = vec![0u32; g.n()];
    for &(u, v) in g.edges() {
        if u != v {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    adj
}

/// Maximum matching, optionally required to cover `required`.
/// `None` when no matching covers the required set.
pub fn brute_max_matching(
    g: &Graph,
    required: &[usize],
) -> Result<OracleResult<Option<usize>, Matching>> {
    let n = g.n();
    if n > MATCHING_GUARD {
        return Err(Error::Guard(format!("{n} vertices, limit {MATCHING_GUARD}")));
    }
    let adj = adjacency_masks(g);
    let req: u32 = required.iter().fold(0, |m, &v| m | 1 << v);
    let mut memo: HashMap<u32, Option<(usize, Option<usize>)>> = HashMap::new();
    let mut explored = 0u64;
    fn best(
        mask: u32,
        adj: &[u32],
        req: u32,
        memo: &mut HashMap<u32, Option<(usize, Option<usize>)>>,
        explored: &mut u64,
    ) -> Option<(usize, Option<usize>)> {
        if mask == 0 {
            return Some((0, None));
        }
        if let Some(r) = memo.get(&mask) {
            return *r;
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut out: Option<(usize, Option<usize>)> = None;
        if req >> v & 1 == 0 {
            *explored += 1;
            out = best(rest, adj, req, memo, explored).map(|(s, _)| (s, None));
        }
        let mut cand = adj[v] & rest;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            *explored += 1;
            if let Some((s, _)) = best(rest & !(1 << u), adj, req, memo, explored) {
                if out.map_or(true, |(o, _)| s + 1 > o) {
                    out = Some((s + 1, Some(u)));
                }
            }
        }
        memo.insert(mask, out);
        out
    }
    let full = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let value = best(full, &adj, req, &mut memo, &mut explored).map(|(s, _)| s);
    let mut m = Matching::new(n);
    if value.is_some() {
        let mut mask = full;
        while mask != 0 {
            let v = mask.trailing_zeros() as usize;
            let (_, partner) = memo[&mask].unwrap();
            mask &= !(1 << v);
            if let Some(u) = partner {
                m.join(u, v);
                mask &= !(1 << u);
            }
        }
    }
    Ok(OracleResult { value, witness: m, explored })
}

/// Maximum degree-constrained subgraph by enumerating edge subsets.
/// Loops count twice toward their vertex.
pub fn brute_max_dcs(g: &DegreeBoundedGraph) -> Result<OracleResult<usize, Vec<usize>>> {
    let edges = g.graph.edges();
    if edges.len() > DCS_EDGE_GUARD {
        return Err(Error::Guard(format!("{} edges, limit {DCS_EDGE_GUARD}", edges.len())));
    }
    let mut best = (0, Vec::new());
    let mut explored = 0;
    for mask in 0u32..1 << edges.len() {
        explored += 1;
        let size = mask.count_ones() as usize;
        if size <= best.0 {
            continue;
        }
        let mut deg = vec![0u32; g.graph.n()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if mask >> e & 1 == 1 {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        if deg.iter().zip(&g.bound).all(|(d, b)| d <= b) {
            best = (size, (0..edges.len()).filter(|&e| mask >> e & 1 == 1).collect());
        }
    }
    Ok(OracleResult { value: best.0, witness: best.1, explored })
}

/// Maximum basic triangle-free 2-matching.
pub fn brute_tf2m(g: &Graph) -> Result<OracleResult<Rational, TwoMatching>> {
    brute_tf2m_covering(g, &[]).map(|r| OracleResult {
        value: r.value.expect("the empty cover is always coverable"),
        witness: r.witness,
        explored: r.explored,
    })
}

/// Maximum basic triangle-free 2-matching giving every vertex of `cover`
/// full weight; `None` when no such 2-matching exists.
///
/// A basic 2-matching is a matching at weight 1 plus vertex-disjoint odd
/// cycles at weight 1/2. Odd cycles of length 3 are excluded, which is
/// exactly the triangle-free condition for basic 2-matchings.
pub fn brute_tf2m_covering(
    g: &Graph,
    cover: &[usize],
) -> Result<OracleResult<Option<Rational>, TwoMatching>> {
    let n = g.n();
    if n > TF2M_GUARD {
        return Err(Error::Guard(format!("{n} vertices, limit {TF2M_GUARD}")));
    }
    let adj = adjacency_masks(g);
    let full: u32 = if n == 0 { 0 } else { (1 << n) - 1 };
    let req: u32 = cover.iter().fold(0, |m, &v| m | 1 << v);
    let mut explored = 0u64;

    // cycle[mask] = a Hamiltonian cycle through exactly `mask`
    let mut cycle: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for mask in 1..=full {
        let k = mask.count_ones();
        if k < 5 || k % 2 == 0 {
            continue;
        }
        let s = mask.trailing_zeros() as usize;
        // reach[sub][v]: a path from s to v visiting exactly sub
        let mut prev: HashMap<(u32, usize), usize> = HashMap::new();
        let mut frontier: Vec<(u32, usize)> = vec![(1 << s, s)];
        let mut seen = std::collections::HashSet::new();
        seen.insert((1u32 << s, s));
        let mut closing = None;
        while let Some((sub, v)) = frontier.pop() {
            explored += 1;
            if sub == mask {
                if adj[v] >> s & 1 == 1 {
                    closing = Some(v);
                    break;
                }
                continue;
            }
            let mut cand = adj[v] & mask & !sub;
            while cand != 0 {
                let u = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                let key = (sub | 1 << u, u);
                if seen.insert(key) {
                    prev.insert(key, v);
                    frontier.push(key);
                }
            }
        }
        if let Some(mut v) = closing {
            let mut sub = mask;
            let mut path = vec![v];
            while v != s {
                let p = prev[&(sub, v)];
                sub &= !(1 << v);
                v = p;
                path.push(v);
            }
            path.reverse();
            cycle.insert(mask, path);
        }
    }

    // best[mask] in half units over the unprocessed vertex set `mask`
    #[derive(Clone, Copy)]
    enum Pick {
        Skip,
        Edge(usize),
        Cycle(u32),
    }
    let mut best: Vec<Option<(i64, Pick)>> = vec![None; (full as usize) + 1];
    best[0] = Some((0, Pick::Skip));
    for mask in 1..=full {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut out: Option<(i64, Pick)> = None;
        let offer = |val: Option<i64>, pick: Pick, out: &mut Option<(i64, Pick)>| {
            if let Some(val) = val {
                if out.map_or(true, |(o, _)| val > o) {
                    *out = Some((val, pick));
                }
            }
        };
        if req >> v & 1 == 0 {
            explored += 1;
            offer(best[rest as usize].map(|b| b.0), Pick::Skip, &mut out);
        }
        let mut cand = adj[v] & rest;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            explored += 1;
            offer(best[(rest & !(1 << u)) as usize].map(|b| b.0 + 2), Pick::Edge(u), &mut out);
        }
        // odd cycles through v inside mask
        let mut sub = rest;
        while sub != 0 {
            let c = sub | 1 << v;
            if cycle.contains_key(&c) {
                explored += 1;
                let len = c.count_ones() as i64;
                offer(best[(mask & !c) as usize].map(|b| b.0 + len), Pick::Cycle(c), &mut out);
            }
            sub = (sub - 1) & rest;
        }
        best[mask as usize] = out;
    }

    let mut witness = TwoMatching::default();
    let value = best[full as usize].map(|(v, _)| Rational::new(v, 2));
    if value.is_some() {
        let mut mask = full;
        while mask != 0 {
            let v = mask.trailing_zeros() as usize;
            match best[mask as usize].unwrap().1 {
                Pick::Skip => mask &= !(1 << v),
                Pick::Edge(u) => {
                    witness.set(u, v, Rational::one());
                    mask &= !(1 << v | 1 << u);
                }
                Pick::Cycle(c) => {
                    let path = &cycle[&c];
                    for i in 0..path.len() {
                        witness.set(path[i], path[(i + 1) % path.len()], Rational::new(1, 2));
                    }
                    mask &= !c;
                }
            }
        }
    }
    Ok(OracleResult { value, witness, explored })
}

// ---------------------------------------------------------------------------
// Exact cover

/// Whether some sub-collection of `triples` partitions `elements`.
pub fn exact_cover_exists(elements: &[u32], triples: &[[u32; 3]]) -> bool {
    let idx: BTreeMap<u32, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let masks: Vec<Option<u64>> = triples
        .iter()
        .map(|t| {
            let mut m = 0u64;
            for e in t {
                let i = *idx.get(e)?;
                if m >> i & 1 == 1 {
                    return None;
                }
                m |= 1 << i;
            }
            Some(m)
        })
        .collect();
    let full = if elements.is_empty() { 0 } else { u64::MAX >> (64 - elements.len()) };
    (0u64..1 << triples.len()).any(|choice| {
        let mut covered = 0u64;
        for (t, m) in masks.iter().enumerate() {
            if choice >> t & 1 == 1 {
                match m {
                    Some(m) if covered & m == 0 => covered |= m,
                    _ => return false,
                }
            }
        }
        covered == full
    })
}

/// Value of a 2-matching: the sum of its weights.
pub fn two_matching_size(m: &TwoMatching) -> Rational {
    m.weights().values().fold(Rational::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_batches, validate_integral, Job, Window};
    use crate::rational::half;

    #[test]
    fn empty_instance() {
        let inst = Instance::new(2, vec![]).unwrap();
        assert_eq!(brute_min_active(&inst).unwrap().value, 0);
    }

    #[test]
    fn three_jobs_two_slots() {
        let inst = Instance::unit_windows(2, &[(0, 2), (0, 2), (0, 2)]).unwrap();
        let r = brute_min_active(&inst).unwrap();
        assert_eq!(r.value, 2);
        assert!(validate_integral(&inst, &r.witness).is_valid());
        assert_eq!(r.witness.jobs_scheduled(), 3);
    }

    #[test]
    fn four_jobs_three_slots() {
        let s: &[u32] = &[0, 1, 2];
        let inst = Instance::unit_slots(2, &[s, s, s, s]).unwrap();
        assert_eq!(brute_min_active(&inst).unwrap().value, 2);
    }

    #[test]
    fn throughput_small() {
        let inst = Instance::unit_windows(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(brute_max_throughput(&inst, 1).unwrap().value, 2);
        assert_eq!(brute_max_throughput(&inst, 0).unwrap().value, 0);
        let r = brute_min_active(&inst).unwrap();
        assert_eq!((r.value, r.witness.jobs_scheduled()), (1, 2));
    }

    #[test]
    fn throughput_mg_example() {
        let inst = Instance::new(
            2,
            vec![Job::slots("A", 1, vec![0, 1]), Job::slots("B", 1, vec![0, 1]), Job::slots("C", 1, vec![1])],
        )
        .unwrap();
        assert_eq!(brute_max_throughput(&inst, 1).unwrap().value, 2);
        assert_eq!(brute_max_throughput(&inst, 2).unwrap().value, 3);
    }

    #[test]
    fn lengths_use_distinct_slots() {
        let inst = Instance::new(2, vec![Job::slots("a", 2, vec![0])]).unwrap();
        let r = brute_min_active(&inst).unwrap();
        assert_eq!(r.witness.jobs_scheduled(), 0);
        let inst = Instance::new(2, vec![Job::slots("a", 2, vec![0, 1]), Job::slots("b", 2, vec![0, 1, 2, 3])]).unwrap();
        assert_eq!(brute_min_active(&inst).unwrap().value, 2);
    }

    #[test]
    fn guard_fires() {
        let inst = Instance::unit_windows(1, &[(0, 17)]).unwrap();
        assert!(matches!(brute_min_active(&inst), Err(Error::Guard(_))));
    }

    fn real_job(id: &str, r: Rational, d: Rational) -> Job {
        Job::windows(id, 1, vec![Window::new(r, d)])
    }

    #[test]
    fn batches_small() {
        let one = Instance::unit_windows(1, &[(0, 1)]).unwrap();
        assert_eq!(brute_min_batches(&one).unwrap().value, Some(1));
        let pair = Instance::new(
            2,
            vec![real_job("a", int(0), Rational::new(3, 2)), real_job("b", half(), Rational::new(3, 2))],
        )
        .unwrap();
        let r = brute_min_batches(&pair).unwrap();
        assert_eq!(r.value, Some(1));
        assert_eq!(r.witness.batches[0].start, half());
        assert!(validate_batches(&pair, &r.witness).is_valid());
        let bad = Instance::unit_windows(1, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(brute_min_batches(&bad).unwrap().value, None);
        assert_eq!(brute_max_throughput_batches(&bad, 5).unwrap().value, 1);
    }

    #[test]
    fn tf2m_small_graphs() {
        let mut k3 = Graph::new(3);
        k3.add_edge(0, 1);
        k3.add_edge(1, 2);
        k3.add_edge(0, 2);
        assert_eq!(brute_tf2m(&k3).unwrap().value, int(1));
        let mut c5 = Graph::new(5);
        for i in 0..5 {
            c5.add_edge(i, (i + 1) % 5);
        }
        let r = brute_tf2m(&c5).unwrap();
        assert_eq!(r.value, Rational::new(5, 2));
        assert_eq!(two_matching_size(&r.witness), Rational::new(5, 2));
        let mut e = Graph::new(2);
        e.add_edge(0, 1);
        assert_eq!(brute_tf2m(&e).unwrap().value, int(1));
        assert_eq!(brute_tf2m_covering(&k3, &[0, 1, 2]).unwrap().value, None);
    }

    #[test]
    fn matching_small() {
        let mut p = Graph::new(4);
        p.add_edge(0, 1);
        p.add_edge(1, 2);
        p.add_edge(2, 3);
        assert_eq!(brute_max_matching(&p, &[]).unwrap().value, Some(2));
        assert_eq!(brute_max_matching(&p, &[0, 3]).unwrap().value, Some(2));
        let mut star = Graph::new(3);
        star.add_edge(0, 1);
        star.add_edge(0, 2);
        let r = brute_max_matching(&star, &[1]).unwrap();
        assert_eq!(r.value, Some(1));
        assert_eq!(r.witness.mate(1), Some(0));
    }

    #[test]
    fn exact_cover() {
        assert!(exact_cover_exists(&[1, 2, 3, 4, 5, 6], &[[1, 2, 3], [4, 5, 6]]));
        assert!(!exact_cover_exists(&[1, 2, 3, 4, 5, 6], &[[1, 2, 3], [3, 4, 5], [5, 6, 1]]));
        assert!(exact_cover_exists(&[], &[]));
    }
}
