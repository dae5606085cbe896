//! Jobs with arbitrary feasible slot sets.
//!
//! For `B = 2` a schedule is a degree-constrained subgraph of the
//! activation graph: job `j` may take `ℓ(j)` edges, a slot two, and a slot
//! loop stands for the slot staying off. Maximizing loops at a fixed number
//! of job edges minimizes active slots.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matchcore::{max_dcs, DegreeBoundedGraph, Graph, VertexKind};
use crate::model::{schedule_to_value, Instance, IntegralSchedule, NumberFormat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationGraph {
    pub graph: DegreeBoundedGraph,
    /// Vertex of job `i` (instance order) is `i`.
    pub slot_vertex: BTreeMap<u32, usize>,
    /// Job edges come first: `(job index, slot)` per edge id.
    pub job_edges: Vec<(usize, u32)>,
    /// Loop edge id per slot.
    pub loops: BTreeMap<u32, usize>,
}

impl ActivationGraph {
    pub fn m(&self) -> usize {
        self.job_edges.len()
    }

    /// The graph with loops removed; job edge ids are unchanged.
    pub fn loopless(&self) -> DegreeBoundedGraph {
        let g = &self.graph.graph;
        let mut h = Graph::with_kinds((0..g.n()).map(|v| g.kind(v)).collect());
        for &(u, v) in &g.edges()[..self.m()] {
            h.add_edge(u, v);
        }
        DegreeBoundedGraph { graph: h, bound: self.graph.bound.clone() }
    }

    fn schedule(&self, inst: &Instance, edges: &[usize]) -> IntegralSchedule {
        let mut per_job: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for &e in edges {
            if let Some(&(j, s)) = self.job_edges.get(e) {
                per_job.entry(j).or_default().push(s);
            }
        }
        let mut sched = IntegralSchedule::new();
        for (j, slots) in per_job {
            sched.assign(inst.jobs()[j].id.clone(), slots);
        }
        sched
    }
}

/// Jobs, then every slot some job can use, each slot with its loop.
pub fn build_activation_graph(inst: &Instance) -> ActivationGraph {
    let mut kinds = vec![VertexKind::Job; inst.len()];
    let universe = inst.slot_universe();
    let mut slot_vertex = BTreeMap::new();
    for &s in &universe {
        slot_vertex.insert(s, kinds.len());
        kinds.push(VertexKind::Slot);
    }
    let mut g = Graph::with_kinds(kinds);
    let mut job_edges = Vec::new();
    for (j, job) in inst.jobs().iter().enumerate() {
        for s in job.feasible_slots() {
            g.add_edge(j, slot_vertex[&s]);
            job_edges.push((j, s));
        }
    }
    let loops = universe.iter().map(|&s| (s, g.add_loop(slot_vertex[&s]))).collect();
    let mut bound: Vec<u32> = inst.jobs().iter().map(|j| j.length).collect();
    bound.extend(std::iter::repeat(2).take(universe.len()));
    ActivationGraph { graph: DegreeBoundedGraph { graph: g, bound }, slot_vertex, job_edges, loops }
}

fn require_b2(inst: &Instance) -> Result<()> {
    if inst.b() != 2 {
        return Err(Error::Unsupported(format!("B = {} (this solver needs B = 2)", inst.b())));
    }
    Ok(())
}

fn require_unit(inst: &Instance) -> Result<()> {
    match inst.jobs().iter().find(|j| j.length != 1) {
        Some(j) => Err(Error::Unsupported(format!("job {:?} is not unit length", j.id))),
        None => Ok(()),
    }
}

/// Most job units the graph admits, then as many loops as possible on top.
fn two_stage(ag: &ActivationGraph) -> Result<(Vec<usize>, usize)> {
    let base = max_dcs(&ag.loopless(), None)?;
    let full = max_dcs(&ag.graph, Some(&base.edges))?;
    debug_assert_eq!(full.iota, base.iota);
    Ok((full.edges, base.iota))
}

/// Schedules as many unit jobs as possible (`ι*`), in the fewest active
/// slots any schedule of `ι*` jobs needs.
pub fn solve_b2(inst: &Instance) -> Result<(IntegralSchedule, usize)> {
    require_b2(inst)?;
    require_unit(inst)?;
    let ag = build_activation_graph(inst);
    let (edges, iota) = two_stage(&ag)?;
    Ok((ag.schedule(inst, &edges), iota))
}

/// Every job `j` in `ℓ(j)` distinct slots, with the fewest active slots.
pub fn solve_b2_lengths(inst: &Instance) -> Result<IntegralSchedule> {
    require_b2(inst)?;
    let ag = build_activation_graph(inst);
    let (edges, iota) = two_stage(&ag)?;
    let total = inst.total_length() as usize;
    if iota != total {
        return Err(Error::CompletionInfeasible(format!(
            "only {iota} of {total} job units can be scheduled"
        )));
    }
    Ok(ag.schedule(inst, &edges))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetEntry {
    pub alpha: usize,
    pub jobs: usize,
    pub schedule: IntegralSchedule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetTable {
    /// Active slots of the base solution holding one job.
    pub tau1: usize,
    /// Active slots of the base solution holding two jobs.
    pub tau2: usize,
    pub entries: Vec<BudgetEntry>,
}

impl BudgetTable {
    pub fn to_value(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    json!({
                        "alpha": e.alpha,
                        "jobs": e.jobs,
                        "schedule": schedule_to_value(&e.schedule, NumberFormat::Exact),
                    })
                })
                .collect(),
        )
    }
}

/// Best schedule for every budget `α` of active slots, `0..=τ1+τ2`,
/// obtained by switching off the base solution's slots: singletons first,
/// then pairs, lowest slot first within each group.
pub fn budget_schedules(inst: &Instance) -> Result<BudgetTable> {
    let (base, _) = solve_b2(inst)?;
    let load = base.load();
    let singles: Vec<u32> = load.iter().filter(|(_, &c)| c == 1).map(|(&s, _)| s).collect();
    let pairs: Vec<u32> = load.iter().filter(|(_, &c)| c == 2).map(|(&s, _)| s).collect();
    let (tau1, tau2) = (singles.len(), pairs.len());
    let mut entries = Vec::with_capacity(tau1 + tau2 + 1);
    for alpha in 0..=tau1 + tau2 {
        let delta = tau1 + tau2 - alpha;
        let off: BTreeSet<u32> = if delta <= tau1 {
            singles[..delta].iter().copied().collect()
        } else {
            singles.iter().chain(&pairs[..delta - tau1]).copied().collect()
        };
        let mut schedule = IntegralSchedule::new();
        for (id, slots) in &base.assignments {
            if !off.contains(&slots[0]) {
                schedule.assign(id.clone(), slots.clone());
            }
        }
        entries.push(BudgetEntry { alpha, jobs: schedule.jobs_scheduled(), schedule });
    }
    Ok(BudgetTable { tau1, tau2, entries })
}

/// Job-to-slot assignment at capacity `cap` restricted to open slots,
/// grown by augmenting paths.
#[derive(Clone)]
struct Assignment<'a> {
    feasible: &'a [Vec<u32>],
    cap: usize,
    slot_of: Vec<Option<u32>>,
    members: BTreeMap<u32, Vec<usize>>,
}

impl<'a> Assignment<'a> {
    fn new(feasible: &'a [Vec<u32>], cap: usize) -> Self {
        Assignment { feasible, cap, slot_of: vec![None; feasible.len()], members: BTreeMap::new() }
    }

    fn size(&self) -> usize {
        self.slot_of.iter().filter(|s| s.is_some()).count()
    }

    fn try_place(&mut self, j: usize, open: &BTreeSet<u32>, seen: &mut BTreeSet<u32>) -> bool {
        for &s in &self.feasible[j] {
            if !open.contains(&s) || !seen.insert(s) {
                continue;
            }
            let here = self.members.get(&s).map_or(0, Vec::len);
            if here < self.cap {
                self.put(j, s);
                return true;
            }
            let occupants = self.members[&s].clone();
            for k in occupants {
                if self.try_place(k, open, seen) {
                    let list = self.members.get_mut(&s).unwrap();
                    list.retain(|&x| x != k);
                    self.put(j, s);
                    return true;
                }
            }
        }
        false
    }

    fn put(&mut self, j: usize, s: u32) {
        if let Some(old) = self.slot_of[j] {
            self.members.get_mut(&old).unwrap().retain(|&x| x != j);
        }
        self.slot_of[j] = Some(s);
        self.members.entry(s).or_default().push(j);
    }

    fn grow(&mut self, open: &BTreeSet<u32>) {
        for j in 0..self.feasible.len() {
            if self.slot_of[j].is_none() {
                self.try_place(j, open, &mut BTreeSet::new());
            }
        }
    }
}

/// Greedy slot activation for any `B`: repeatedly open the slot that most
/// increases the number of schedulable jobs, until nothing improves.
pub fn greedy_general_b(inst: &Instance) -> Result<IntegralSchedule> {
    require_unit(inst)?;
    let feasible: Vec<Vec<u32>> = inst.jobs().iter().map(|j| j.feasible_slots()).collect();
    let universe = inst.slot_universe();
    let mut open = BTreeSet::new();
    let mut current = Assignment::new(&feasible, inst.b() as usize);
    loop {
        let mut best: Option<(usize, u32, Assignment)> = None;
        for &s in &universe {
            if open.contains(&s) {
                continue;
            }
            let mut trial_open = open.clone();
            trial_open.insert(s);
            let mut trial = current.clone();
            trial.grow(&trial_open);
            let gain = trial.size() - current.size();
            if gain > 0 && best.as_ref().map_or(true, |(g, _, _)| gain > *g) {
                best = Some((gain, s, trial));
            }
        }
        match best {
            Some((_, s, trial)) => {
                open.insert(s);
                current = trial;
            }
            None => break,
        }
    }
    let mut sched = IntegralSchedule::new();
    for (j, s) in current.slot_of.iter().enumerate() {
        if let Some(s) = s {
            sched.assign(inst.jobs()[j].id.clone(), vec![*s]);
        }
    }
    Ok(sched)
}
