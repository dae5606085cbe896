//! Active-time scheduling of unit jobs with single integer windows.
//!
//! Phase I pushes deadlines left until no deadline is shared by more than
//! `B` jobs; jobs pushed down to their release collapse and are dropped.
//! Phase II then activates slots lazily: the latest slot that still serves
//! the earliest outstanding deadline, filled by EDF.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::model::{Instance, IntegralSchedule};
use crate::rational;

/// Horizons longer than this many slots per job are compressed first.
pub const T_CAP_FACTOR: i64 = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustedInstance {
    pub original: Instance,
    pub adjusted_deadline: BTreeMap<String, i64>,
}

impl AdjustedInstance {
    /// Jobs whose adjusted deadline reached their release.
    pub fn collapsed(&self) -> BTreeSet<String> {
        let w = windows_unchecked(&self.original);
        self.original
            .jobs()
            .iter()
            .zip(&w)
            .filter(|(j, (r, _))| self.adjusted_deadline[&j.id] <= *r)
            .map(|(j, _)| j.id.clone())
            .collect()
    }

    /// Jobs sharing each adjusted deadline, collapsed jobs excluded.
    pub fn deadline_loads(&self) -> BTreeMap<i64, usize> {
        let collapsed = self.collapsed();
        let mut out = BTreeMap::new();
        for (id, &d) in &self.adjusted_deadline {
            if !collapsed.contains(id) {
                *out.entry(d).or_insert(0) += 1;
            }
        }
        out
    }

    /// The adjusted windows as an instance, collapsed jobs left out.
    pub fn to_instance(&self) -> Instance {
        let collapsed = self.collapsed();
        let w = windows_unchecked(&self.original);
        let list: Vec<(i64, i64)> = self
            .original
            .jobs()
            .iter()
            .zip(&w)
            .filter(|(j, _)| !collapsed.contains(&j.id))
            .map(|(j, &(r, _))| (r, self.adjusted_deadline[&j.id]))
            .collect();
        let ids: Vec<String> = self
            .original
            .jobs()
            .iter()
            .filter(|j| !collapsed.contains(&j.id))
            .map(|j| j.id.clone())
            .collect();
        let jobs = ids
            .into_iter()
            .zip(list)
            .map(|(id, (r, d))| crate::model::Job::unit(id, r, d))
            .collect();
        Instance::new(self.original.b(), jobs).expect("adjusted windows stay valid")
    }
}

/// A stretch of slots that more than `B` slots' worth of jobs must use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcessInterval {
    pub start: i64,
    pub end: i64,
    pub jobs: Vec<String>,
}

impl ExcessInterval {
    pub fn len(&self) -> i64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseRecord {
    pub collapsed_jobs: BTreeSet<String>,
    pub excess_intervals: Vec<ExcessInterval>,
}

/// Windows `(r, d)` of an instance of unit single-window integer jobs.
pub fn unit_windows(inst: &Instance) -> Result<Vec<(i64, i64)>> {
    inst.jobs()
        .iter()
        .map(|j| {
            if j.length != 1 {
                return Err(Error::Unsupported(format!("job {:?} is not unit length", j.id)));
            }
            let w = j
                .single_window()
                .ok_or_else(|| Error::Unsupported(format!("job {:?} needs a single window", j.id)))?;
            if !w.release.is_integer() || !w.deadline.is_integer() {
                return Err(Error::Unsupported(format!("job {:?} has real boundaries", j.id)));
            }
            Ok((rational::floor_i64(&w.release), rational::floor_i64(&w.deadline)))
        })
        .collect()
}

fn windows_unchecked(inst: &Instance) -> Vec<(i64, i64)> {
    unit_windows(inst).expect("checked on construction")
}

fn edf_feasible_windows(w: &[(i64, i64)], b: usize) -> bool {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by_key(|&i| w[i].0);
    let mut heap = BinaryHeap::new();
    let mut next = 0;
    let mut t = i64::MIN;
    while next < order.len() || !heap.is_empty() {
        if heap.is_empty() {
            t = t.max(w[order[next]].0);
        }
        while next < order.len() && w[order[next]].0 <= t {
            heap.push(Reverse(w[order[next]].1));
            next += 1;
        }
        for _ in 0..b {
            match heap.pop() {
                Some(Reverse(d)) if d <= t => return false,
                Some(_) => {}
                None => break,
            }
        }
        t += 1;
    }
    true
}

/// Whether every job fits in its window at `B` jobs per slot.
pub fn edf_feasibility(inst: &Instance) -> Result<bool> {
    Ok(edf_feasible_windows(&unit_windows(inst)?, inst.b() as usize))
}

/// Priority order for both adjusters: latest release first, then id.
fn priority_order(w: &[(i64, i64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by_key(|&i| (Reverse(w[i].0), i));
    order
}

fn phase1_sweep(w: &[(i64, i64)], b: usize) -> Vec<i64> {
    let rank: Vec<usize> = {
        let mut rank = vec![0; w.len()];
        for (pos, i) in priority_order(w).into_iter().enumerate() {
            rank[i] = pos;
        }
        rank
    };
    let n = w.len();
    let mut adjusted: Vec<i64> = w.iter().map(|&(_, d)| d).collect();
    let mut by_deadline: Vec<usize> = (0..n).collect();
    by_deadline.sort_by_key(|&i| Reverse(w[i].1));
    let mut by_release: Vec<usize> = (0..n).collect();
    by_release.sort_by_key(|&i| Reverse(w[i].0));
    // jobs sitting at the current deadline, best priority first
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
    let mut waiting = vec![false; n];
    let (mut live, mut di, mut ri) = (0usize, 0, 0);
    let mut d = i64::MAX;
    while live > 0 || di < n {
        d = if live == 0 { w[by_deadline[di]].1 } else { d - 1 };
        while di < n && w[by_deadline[di]].1 == d {
            let i = by_deadline[di];
            heap.push(Reverse((rank[i], i)));
            waiting[i] = true;
            live += 1;
            di += 1;
        }
        let mut kept = 0;
        while kept < b && live > 0 {
            let Some(Reverse((_, i))) = heap.pop() else { break };
            if waiting[i] {
                waiting[i] = false;
                live -= 1;
                adjusted[i] = d;
                kept += 1;
            }
        }
        // the rest move down to d - 1 unless that reaches their release
        while ri < n && w[by_release[ri]].0 >= d - 1 {
            let i = by_release[ri];
            if waiting[i] {
                waiting[i] = false;
                live -= 1;
                adjusted[i] = w[i].0;
            }
            ri += 1;
        }
    }
    adjusted
}

fn adjusted_instance(inst: &Instance, adjusted: Vec<i64>) -> AdjustedInstance {
    let adjusted_deadline = inst.jobs().iter().map(|j| j.id.clone()).zip(adjusted).collect();
    AdjustedInstance { original: inst.clone(), adjusted_deadline }
}

/// Phase I as a right-to-left sweep over deadlines.
pub fn phase1_adjust(inst: &Instance) -> Result<AdjustedInstance> {
    let w = unit_windows(inst)?;
    Ok(adjusted_instance(inst, phase1_sweep(&w, inst.b() as usize)))
}

/// Disjoint sets over `0..=t`: `find(x)` is the largest open value `<= x`.
struct Downward {
    parent: Vec<usize>,
}

impl Downward {
    fn new(t: usize) -> Self {
        Downward { parent: (0..=t).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Closes `x`; value 0 is a sentinel and never closes.
    fn close(&mut self, x: usize) {
        if x > 0 {
            self.parent[x] = x - 1;
        }
    }
}

/// Phase I' on windows already inside `0..=t`.
fn phase1_dsu_windows(w: &[(i64, i64)], b: usize, t: usize) -> Vec<i64> {
    let mut sets = Downward::new(t);
    let mut count = vec![0usize; t + 1];
    let mut adjusted = vec![0; w.len()];
    // bucket by release, latest first; ids ascend inside a bucket
    let mut by_release: Vec<Vec<usize>> = vec![Vec::new(); t + 1];
    for (i, &(r, _)) in w.iter().enumerate() {
        by_release[r as usize].push(i);
    }
    for bucket in by_release.iter().rev() {
        for &i in bucket {
            let (r, d) = w[i];
            let slot = sets.find(d as usize) as i64;
            if slot <= r {
                adjusted[i] = r;
                continue;
            }
            adjusted[i] = slot;
            count[slot as usize] += 1;
            if count[slot as usize] == b {
                sets.close(slot as usize);
            }
        }
    }
    adjusted
}

/// Maps a long horizon onto a short one. Gaps longer than `n` between
/// consecutive window boundaries shrink to `n`; the earliest boundary maps
/// to 0.
struct Compression {
    /// (new start, old start) per boundary point, ascending.
    points: Vec<(i64, i64)>,
}

impl Compression {
    fn new(w: &[(i64, i64)]) -> Self {
        let n = w.len().max(1) as i64;
        let set: BTreeSet<i64> = w.iter().flat_map(|&(r, d)| [r, d]).collect();
        let mut points = Vec::with_capacity(set.len());
        let mut prev: Option<(i64, i64)> = None;
        for p in set {
            let np = match prev {
                None => 0,
                Some((nq, q)) => nq + (p - q).min(n),
            };
            points.push((np, p));
            prev = Some((np, p));
        }
        Compression { points }
    }

    fn forward(&self, x: i64) -> i64 {
        let i = self.points.partition_point(|&(_, old)| old < x);
        debug_assert!(self.points[i].1 == x);
        self.points[i].0
    }

    /// Slots inside a shrunk gap are aligned to the gap's right end, where
    /// lowered deadlines land.
    fn back(&self, slot: i64) -> i64 {
        let i = self.points.partition_point(|&(new, _)| new <= slot);
        let (new, old) = self.points[i];
        old - (new - slot)
    }

    fn horizon(&self) -> i64 {
        self.points.last().map_or(0, |p| p.0)
    }
}

/// Phase I' via disjoint-set merging over the deadline universe.
pub fn phase1_dsu(inst: &Instance) -> Result<AdjustedInstance> {
    let w = unit_windows(inst)?;
    Ok(adjusted_instance(inst, phase1_dsu_mapped(&w, inst.b() as usize)))
}

fn phase1_dsu_mapped(w: &[(i64, i64)], b: usize) -> Vec<i64> {
    if w.is_empty() {
        return Vec::new();
    }
    let c = Compression::new(w);
    let cw: Vec<(i64, i64)> = w.iter().map(|&(r, d)| (c.forward(r), c.forward(d))).collect();
    let adj = phase1_dsu_windows(&cw, b, c.horizon() as usize);
    // adjusted values are slot ends; map the slot they close back
    adj.iter()
        .zip(w)
        .zip(&cw)
        .map(|((&a, &(r, _)), &(cr, _))| if a <= cr { r } else { c.back(a - 1) + 1 })
        .collect()
}

/// Phase II on adjusted windows of surviving jobs.
fn phase2(w: &[(i64, i64)], adjusted: &[i64], b: usize) -> Vec<Option<i64>> {
    let live: Vec<usize> = (0..w.len()).filter(|&i| adjusted[i] > w[i].0).collect();
    let mut by_deadline = live.clone();
    by_deadline.sort_by_key(|&i| (adjusted[i], i));
    let mut by_release = live;
    by_release.sort_by_key(|&i| (w[i].0, i));
    let mut slot_of: Vec<Option<i64>> = vec![None; w.len()];
    let mut heap: BinaryHeap<Reverse<(i64, usize)>> = BinaryHeap::new();
    let (mut di, mut ri) = (0, 0);
    loop {
        while di < by_deadline.len() && slot_of[by_deadline[di]].is_some() {
            di += 1;
        }
        let Some(&first) = by_deadline.get(di) else { break };
        let t = adjusted[first] - 1;
        while ri < by_release.len() && w[by_release[ri]].0 <= t {
            let i = by_release[ri];
            if slot_of[i].is_none() {
                heap.push(Reverse((adjusted[i], i)));
            }
            ri += 1;
        }
        let mut used = 0;
        while used < b {
            let Some(Reverse((_, i))) = heap.pop() else { break };
            if slot_of[i].is_none() {
                slot_of[i] = Some(t);
                used += 1;
            }
        }
        debug_assert!(slot_of[first].is_some());
    }
    slot_of
}

fn schedule_from(inst: &Instance, slots: &[Option<i64>]) -> IntegralSchedule {
    let mut sched = IntegralSchedule::new();
    for (j, s) in inst.jobs().iter().zip(slots) {
        if let Some(s) = s {
            sched.assign(j.id.clone(), vec![*s as u32]);
        }
    }
    sched
}

/// Phase I followed by lazy activation. Optimal on feasible instances; on
/// infeasible ones it schedules as many jobs as possible, in as few slots
/// as that many jobs need.
pub fn lazy_activation(inst: &Instance) -> Result<IntegralSchedule> {
    let w = unit_windows(inst)?;
    let b = inst.b() as usize;
    let adjusted = phase1_sweep(&w, b);
    Ok(schedule_from(inst, &phase2(&w, &adjusted, b)))
}

/// Disjoint sets over slot indices: `find(x)` is the smallest open index
/// `>= x`; the last index is a sentinel.
struct Upward {
    parent: Vec<usize>,
}

impl Upward {
    fn new(n: usize) -> Self {
        Upward { parent: (0..=n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn close(&mut self, x: usize) {
        self.parent[x] = x + 1;
    }
}

/// Same schedule shape as [`lazy_activation`] in near-linear time:
/// Phase I' on a compressed horizon, then a union-find EDF pass over the
/// distinct adjusted deadlines.
pub fn lazy_activation_linear(inst: &Instance) -> Result<IntegralSchedule> {
    let w = unit_windows(inst)?;
    let n = w.len();
    if n == 0 {
        return Ok(IntegralSchedule::new());
    }
    let b = inst.b() as usize;
    let raw_t = w.iter().map(|&(_, d)| d).max().unwrap_or(0);
    let c = (raw_t > T_CAP_FACTOR * n as i64).then(|| Compression::new(&w));
    let cw: Vec<(i64, i64)> = match &c {
        Some(c) => w.iter().map(|&(r, d)| (c.forward(r), c.forward(d))).collect(),
        None => w.clone(),
    };
    let t = cw.iter().map(|&(_, d)| d).max().unwrap_or(0) as usize;
    let adjusted = phase1_dsu_windows(&cw, b, t);

    // distinct deadlines of surviving jobs, as slot indices
    let mut is_deadline = vec![false; t + 1];
    for i in 0..n {
        if adjusted[i] > cw[i].0 {
            is_deadline[adjusted[i] as usize] = true;
        }
    }
    let mut index_of = vec![usize::MAX; t + 1];
    let mut deadlines = Vec::new();
    for (d, &yes) in is_deadline.iter().enumerate() {
        if yes {
            index_of[d] = deadlines.len();
            deadlines.push(d as i64);
        }
    }
    let m = deadlines.len();
    // first deadline index whose slot d - 1 is at or after each time
    let mut first_at = vec![m; t + 2];
    let mut k = m;
    for time in (0..=t).rev() {
        while k > 0 && deadlines[k - 1] - 1 >= time as i64 {
            k -= 1;
        }
        first_at[time] = k;
    }

    // jobs by (deadline, id) via buckets
    let mut by_deadline: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..n {
        if adjusted[i] > cw[i].0 {
            by_deadline[index_of[adjusted[i] as usize]].push(i);
        }
    }
    let mut sets = Upward::new(m);
    let mut active = vec![false; m];
    let mut load = vec![0usize; m];
    let mut slot_of: Vec<Option<i64>> = vec![None; n];
    for (dk, bucket) in by_deadline.iter().enumerate() {
        if dk > 0 && !active[dk - 1] && sets.find(dk - 1) == dk - 1 {
            sets.close(dk - 1);
        }
        for &i in bucket {
            let s = sets.find(first_at[cw[i].0 as usize]);
            debug_assert!(s <= dk);
            if s == dk {
                active[dk] = true;
            }
            load[s] += 1;
            if load[s] == b {
                sets.close(s);
            }
            let slot = deadlines[s] - 1;
            slot_of[i] = Some(match &c {
                Some(c) => c.back(slot),
                None => slot,
            });
        }
    }
    Ok(schedule_from(inst, &slot_of))
}

/// Collapsed jobs of Phase I with, for each, the shortest interval starting
/// at its release whose contained jobs exceed the interval's capacity.
pub fn collapse_record(inst: &Instance) -> Result<CollapseRecord> {
    let w = unit_windows(inst)?;
    let b = inst.b() as i64;
    let adjusted = phase1_sweep(&w, b as usize);
    let deadlines: BTreeSet<i64> = w.iter().map(|&(_, d)| d).collect();
    let mut record = CollapseRecord { collapsed_jobs: BTreeSet::new(), excess_intervals: Vec::new() };
    for i in 0..w.len() {
        let (r, _) = w[i];
        if adjusted[i] > r {
            continue;
        }
        record.collapsed_jobs.insert(inst.jobs()[i].id.clone());
        let w = &w;
        let inside = |e: i64| (0..w.len()).filter(move |&x| w[x].0 >= r && w[x].1 <= e);
        let end = deadlines
            .range(r + 1..)
            .copied()
            .find(|&e| inside(e).count() as i64 > b * (e - r))
            .ok_or_else(|| Error::Invalid(format!("no overloaded interval from {r}")))?;
        let jobs = inside(end).map(|x| inst.jobs()[x].id.clone()).collect();
        record.excess_intervals.push(ExcessInterval { start: r, end, jobs });
    }
    Ok(record)
}
