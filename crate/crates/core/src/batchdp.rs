//! Batch scheduling of unit jobs with real release times and deadlines.
//!
//! Jobs are indexed `1..=n` by (deadline, id). `U_k(a, b)` is the set of
//! jobs `j <= k` with `r_j` in `(a, b]`; its batches must start in
//! `[a + 1, b]`, and `μ` jobs already sit in a batch starting at `b`.
//! Splitting at the batch time `t` of job `k` separates jobs released by
//! `t` (scheduled no later than `t`) from those released after it.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use crate::error::{Error, Result};
use crate::model::{Batch, BatchSchedule, Instance};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateTimes {
    pub times: Vec<Rational>,
}

struct Jobs {
    ids: Vec<String>,
    release: Vec<Rational>,
    deadline: Vec<Rational>,
    /// Jobs whose window is shorter than one unit; they are left out.
    unfit: Vec<String>,
}

fn unit_jobs(inst: &Instance) -> Result<Jobs> {
    let mut rows = Vec::with_capacity(inst.len());
    let mut unfit = Vec::new();
    for j in inst.jobs() {
        if j.length != 1 {
            return Err(Error::Unsupported(format!("job {:?} is not unit length", j.id)));
        }
        let w = j
            .single_window()
            .ok_or_else(|| Error::Unsupported(format!("job {:?} needs a single window", j.id)))?;
        if w.deadline - w.release < Rational::one() {
            unfit.push(j.id.clone());
            continue;
        }
        rows.push((w.deadline, j.id.clone(), w.release));
    }
    rows.sort();
    Ok(Jobs {
        ids: rows.iter().map(|r| r.1.clone()).collect(),
        release: rows.iter().map(|r| r.2).collect(),
        deadline: rows.iter().map(|r| r.0).collect(),
        unfit,
    })
}

fn theta(jobs: &Jobs) -> Vec<Rational> {
    let n = jobs.ids.len();
    if n == 0 {
        return Vec::new();
    }
    let lo = *jobs.release.iter().min().unwrap();
    let hi = *jobs.deadline.iter().max().unwrap() - Rational::one();
    let mut out = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for k in 0..n as i64 {
            out.push(jobs.release[i] + k);
            out.push(jobs.deadline[i] - Rational::one() - k);
        }
    }
    out.retain(|t| lo <= *t && *t <= hi);
    out.sort();
    out.dedup();
    out
}

/// Candidate batch start times: releases shifted forward and deadlines
/// shifted back by up to `n - 1` whole units.
pub fn candidate_times(inst: &Instance) -> Result<CandidateTimes> {
    Ok(CandidateTimes { times: theta(&unit_jobs(inst)?) })
}

#[derive(Debug, Clone, Copy)]
enum Choice {
    Empty,
    Skip,
    AtRight,
    Split { t: usize, alpha: usize },
}

struct Dp<'a> {
    jobs: &'a Jobs,
    b_cap: usize,
    /// Θ plus the two sentinels, sorted.
    times: Vec<Rational>,
}

impl<'a> Dp<'a> {
    fn new(jobs: &'a Jobs, b_cap: usize) -> Self {
        let mut times = theta(jobs);
        let lo = *jobs.release.iter().min().unwrap() - Rational::one();
        let hi = *jobs.deadline.iter().max().unwrap() - Rational::one();
        times.push(lo);
        times.push(hi);
        times.sort();
        times.dedup();
        Dp { jobs, b_cap, times }
    }

    fn root(&self) -> (usize, usize) {
        let lo = *self.jobs.release.iter().min().unwrap() - Rational::one();
        let hi = *self.jobs.deadline.iter().max().unwrap() - Rational::one();
        (self.times.binary_search(&lo).unwrap(), self.times.binary_search(&hi).unwrap())
    }

    /// Largest job index `j <= k` (1-based) released in `(a, b]`, or 0.
    fn top(&self, k: usize, a: usize, b: usize) -> usize {
        let (a, b) = (self.times[a], self.times[b]);
        (1..=k).rev().find(|&j| a < self.jobs.release[j - 1] && self.jobs.release[j - 1] <= b).unwrap_or(0)
    }

    /// Start times `t` allowed for job `k` inside `(a, b]`.
    fn starts(&self, k: usize, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        let (r, d) = (self.jobs.release[k - 1], self.jobs.deadline[k - 1]);
        let lo = self.times[a] + Rational::one();
        let hi = self.times[b];
        (a + 1..=b).filter(move |&t| {
            let x = self.times[t];
            x >= lo && x <= hi && x >= r && x + Rational::one() <= d
        })
    }

    fn overlaps_right(&self, t: usize, b: usize, mu: usize) -> bool {
        mu > 0 && self.times[t] > self.times[b] - Rational::one()
    }
}

type MinKey = (usize, usize, usize, usize);

struct MinBatches<'a> {
    dp: Dp<'a>,
    memo: HashMap<MinKey, (Option<usize>, Choice)>,
}

impl<'a> MinBatches<'a> {
    fn solve(&mut self, k: usize, a: usize, b: usize, mu: usize) -> Option<usize> {
        let k = self.dp.top(k, a, b);
        if k == 0 {
            return Some(0);
        }
        let key = (k, a, b, mu);
        if let Some(&(v, _)) = self.memo.get(&key) {
            return v;
        }
        let mut best: (Option<usize>, Choice) = (None, Choice::Empty);
        let offer = |v: Option<usize>, c: Choice, best: &mut (Option<usize>, Choice)| {
            if let Some(v) = v {
                if best.0.map_or(true, |b| v < b) {
                    *best = (Some(v), c);
                }
            }
        };
        let starts: Vec<usize> = self.dp.starts(k, a, b).collect();
        for t in starts {
            if t == b {
                if mu == 0 {
                    let v = self.solve(k - 1, a, b, 1).map(|v| v + 1);
                    offer(v, Choice::AtRight, &mut best);
                } else if mu < self.dp.b_cap {
                    let v = self.solve(k - 1, a, b, mu + 1);
                    offer(v, Choice::AtRight, &mut best);
                }
            } else if !self.dp.overlaps_right(t, b, mu) {
                let left = self.solve(k - 1, a, t, 1);
                let right = self.solve(k - 1, t, b, mu);
                let v = left.zip(right).map(|(l, r)| 1 + l + r);
                offer(v, Choice::Split { t, alpha: 0 }, &mut best);
            }
        }
        self.memo.insert(key, best);
        best.0
    }

    fn trace(&self, k: usize, a: usize, b: usize, mu: usize, out: &mut Vec<(usize, usize)>) {
        let k = self.dp.top(k, a, b);
        if k == 0 {
            return;
        }
        match self.memo[&(k, a, b, mu)].1 {
            Choice::AtRight => {
                out.push((k, b));
                self.trace(k - 1, a, b, if mu == 0 { 1 } else { mu + 1 }, out);
            }
            Choice::Split { t, .. } => {
                out.push((k, t));
                self.trace(k - 1, a, t, 1, out);
                self.trace(k - 1, t, b, mu, out);
            }
            Choice::Empty | Choice::Skip => unreachable!("feasible states record a placement"),
        }
    }
}

fn to_schedule(dp: &Dp, placed: &[(usize, usize)]) -> BatchSchedule {
    let mut by_time: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for &(k, t) in placed {
        by_time.entry(t).or_default().push(dp.jobs.ids[k - 1].clone());
    }
    let batches = by_time
        .into_iter()
        .map(|(t, mut jobs)| {
            jobs.sort();
            Batch { start: dp.times[t], jobs }
        })
        .collect();
    BatchSchedule { batches }
}

/// Fewest batches scheduling every job, with one optimal schedule.
pub fn min_batches(inst: &Instance) -> Result<(usize, BatchSchedule)> {
    let jobs = unit_jobs(inst)?;
    if let Some(id) = jobs.unfit.first() {
        return Err(Error::Infeasible(format!("job {id:?} has a window shorter than one unit")));
    }
    let n = jobs.ids.len();
    if n == 0 {
        return Ok((0, BatchSchedule::default()));
    }
    let mut mb = MinBatches { dp: Dp::new(&jobs, inst.b() as usize), memo: HashMap::new() };
    let (a, b) = mb.dp.root();
    let count = mb
        .solve(n, a, b, 0)
        .ok_or_else(|| Error::Infeasible("no batch schedule covers every job".into()))?;
    let mut placed = Vec::with_capacity(n);
    mb.trace(n, a, b, 0, &mut placed);
    let sched = to_schedule(&mb.dp, &placed);
    debug_assert_eq!(sched.count(), count);
    Ok((count, sched))
}

type ThrKey = (usize, usize, usize, usize, usize);

struct Throughput<'a> {
    dp: Dp<'a>,
    memo: HashMap<ThrKey, (usize, Choice)>,
}

impl<'a> Throughput<'a> {
    fn solve(&mut self, k: usize, a: usize, b: usize, mu: usize, kappa: usize) -> usize {
        let k = self.dp.top(k, a, b);
        if k == 0 {
            return 0;
        }
        let key = (k, a, b, mu, kappa);
        if let Some(&(v, _)) = self.memo.get(&key) {
            return v;
        }
        let mut best = (self.solve(k - 1, a, b, mu, kappa), Choice::Skip);
        let starts: Vec<usize> = self.dp.starts(k, a, b).collect();
        for t in starts {
            if t == b {
                let v = if mu == 0 && kappa > 0 {
                    Some(1 + self.solve(k - 1, a, b, 1, kappa - 1))
                } else if mu > 0 && mu < self.dp.b_cap {
                    Some(1 + self.solve(k - 1, a, b, mu + 1, kappa))
                } else {
                    None
                };
                if let Some(v) = v.filter(|&v| v > best.0) {
                    best = (v, Choice::AtRight);
                }
            } else if !self.dp.overlaps_right(t, b, mu) {
                for alpha in 1..=kappa {
                    let v = 1 + self.solve(k - 1, a, t, 1, alpha - 1) + self.solve(k - 1, t, b, mu, kappa - alpha);
                    if v > best.0 {
                        best = (v, Choice::Split { t, alpha });
                    }
                }
            }
        }
        self.memo.insert(key, best);
        best.0
    }

    fn trace(&self, k: usize, a: usize, b: usize, mu: usize, kappa: usize, out: &mut Vec<(usize, usize)>) {
        let k = self.dp.top(k, a, b);
        if k == 0 {
            return;
        }
        match self.memo[&(k, a, b, mu, kappa)].1 {
            Choice::Skip => self.trace(k - 1, a, b, mu, kappa, out),
            Choice::AtRight => {
                out.push((k, b));
                if mu == 0 {
                    self.trace(k - 1, a, b, 1, kappa - 1, out);
                } else {
                    self.trace(k - 1, a, b, mu + 1, kappa, out);
                }
            }
            Choice::Split { t, alpha } => {
                out.push((k, t));
                self.trace(k - 1, a, t, 1, alpha - 1, out);
                self.trace(k - 1, t, b, mu, kappa - alpha, out);
            }
            Choice::Empty => {}
        }
    }
}

/// Most jobs schedulable in at most `budget` batches.
pub fn max_throughput_batches(inst: &Instance, budget: usize) -> Result<(usize, BatchSchedule)> {
    let jobs = unit_jobs(inst)?;
    let n = jobs.ids.len();
    if n == 0 || budget == 0 {
        return Ok((0, BatchSchedule::default()));
    }
    let budget = budget.min(n);
    let mut tp = Throughput { dp: Dp::new(&jobs, inst.b() as usize), memo: HashMap::new() };
    let (a, b) = tp.dp.root();
    let value = tp.solve(n, a, b, 0, budget);
    let mut placed = Vec::with_capacity(n);
    tp.trace(n, a, b, 0, budget, &mut placed);
    let sched = to_schedule(&tp.dp, &placed);
    debug_assert_eq!(sched.jobs_scheduled(), value);
    Ok((value, sched))
}
