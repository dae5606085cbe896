//! Instances, schedules, validators and their JSON forms.
//!
//! Slot `t` is the unit interval `[t, t+1)`. A window `[r, d)` contains slot
//! `t` iff `r <= t` and `t + 1 <= d`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub release: Rational,
    pub deadline: Rational,
}

impl Window {
    pub fn new(release: Rational, deadline: Rational) -> Self {
        Window { release, deadline }
    }

    pub fn int(release: i64, deadline: i64) -> Self {
        Window::new(int(release), int(deadline))
    }

    fn is_integral(&self) -> bool {
        self.release.is_integer() && self.deadline.is_integer()
    }

    /// Slots `t` with `[t, t+1)` inside the window.
    pub fn slots(&self) -> std::ops::Range<u32> {
        let lo = rational::ceil_i64(&self.release).max(0);
        let hi = rational::floor_i64(&self.deadline).max(0);
        let lo = lo.min(u32::MAX as i64) as u32;
        let hi = hi.min(u32::MAX as i64) as u32;
        lo..hi.max(lo)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    Windows(Vec<Window>),
    Slots(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub id: String,
    pub length: u32,
    pub region: Region,
}

impl Job {
    pub fn windows(id: impl Into<String>, length: u32, windows: Vec<Window>) -> Self {
        Job { id: id.into(), length, region: Region::Windows(windows) }
    }

    pub fn slots(id: impl Into<String>, length: u32, slots: Vec<u32>) -> Self {
        Job { id: id.into(), length, region: Region::Slots(slots) }
    }

    pub fn unit(id: impl Into<String>, release: i64, deadline: i64) -> Self {
        Job::windows(id, 1, vec![Window::int(release, deadline)])
    }

    /// The single window of a job, if it has exactly one.
    pub fn single_window(&self) -> Option<&Window> {
        match &self.region {
            Region::Windows(ws) if ws.len() == 1 => Some(&ws[0]),
            _ => None,
        }
    }

    pub fn feasible_slots(&self) -> Vec<u32> {
        match &self.region {
            Region::Slots(s) => s.clone(),
            Region::Windows(ws) => ws.iter().flat_map(|w| w.slots()).collect(),
        }
    }

    pub fn is_feasible_slot(&self, t: u32) -> bool {
        match &self.region {
            Region::Slots(s) => s.binary_search(&t).is_ok(),
            Region::Windows(ws) => ws.iter().any(|w| w.slots().contains(&t)),
        }
    }

    fn is_integral(&self) -> bool {
        match &self.region {
            Region::Slots(_) => true,
            Region::Windows(ws) => ws.iter().all(Window::is_integral),
        }
    }
}

/// A validated instance. Jobs are kept sorted by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    b: u32,
    jobs: Vec<Job>,
}

impl Instance {
    pub fn new(b: u32, mut jobs: Vec<Job>) -> Result<Self> {
        if b < 1 {
            return Err(Error::Invalid("B < 1".into()));
        }
        jobs.sort_by(|x, y| x.id.cmp(&y.id));
        for pair in jobs.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::Invalid(format!("duplicate id {:?}", pair[0].id)));
            }
        }
        for job in &mut jobs {
            normalize_job(job)?;
        }
        Ok(Instance { b, jobs })
    }

    /// Unit jobs with single integer windows, ids `j000`, `j001`, ...
    pub fn unit_windows(b: u32, windows: &[(i64, i64)]) -> Result<Self> {
        let jobs = windows
            .iter()
            .enumerate()
            .map(|(i, &(r, d))| Job::unit(format!("j{i:03}"), r, d))
            .collect();
        Instance::new(b, jobs)
    }

    /// Unit jobs with explicit slot sets, ids `j000`, `j001`, ...
    pub fn unit_slots(b: u32, slots: &[&[u32]]) -> Result<Self> {
        let jobs = slots
            .iter()
            .enumerate()
            .map(|(i, s)| Job::slots(format!("j{i:03}"), 1, s.to_vec()))
            .collect();
        Instance::new(b, jobs)
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn job_index(&self, id: &str) -> Option<usize> {
        self.jobs.binary_search_by(|j| j.id.as_str().cmp(id)).ok()
    }

    pub fn total_length(&self) -> u64 {
        self.jobs.iter().map(|j| j.length as u64).sum()
    }

    pub fn all_unit(&self) -> bool {
        self.jobs.iter().all(|j| j.length == 1)
    }

    pub fn is_integral(&self) -> bool {
        self.jobs.iter().all(Job::is_integral)
    }

    pub fn all_single_window(&self) -> bool {
        self.jobs.iter().all(|j| j.single_window().is_some())
    }

    /// Union of all feasible slots, ascending.
    pub fn slot_universe(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.jobs.iter().flat_map(|j| j.feasible_slots()).collect();
        set.into_iter().collect()
    }

    /// Latest deadline (or last explicit slot + 1).
    pub fn horizon(&self) -> Rational {
        let mut t = Rational::zero();
        for j in &self.jobs {
            let end = match &j.region {
                Region::Slots(s) => int(*s.last().unwrap() as i64 + 1),
                Region::Windows(ws) => ws.last().unwrap().deadline,
            };
            t = t.max(end);
        }
        t
    }

    /// Same parallelism bound, subset of jobs by index.
    pub fn restrict(&self, keep: &[usize]) -> Instance {
        Instance { b: self.b, jobs: keep.iter().map(|&i| self.jobs[i].clone()).collect() }
    }

    pub fn with_b(&self, b: u32) -> Result<Instance> {
        Instance::new(b, self.jobs.clone())
    }
}

fn normalize_job(job: &mut Job) -> Result<()> {
    if job.id.is_empty() {
        return Err(Error::Invalid("empty job id".into()));
    }
    if job.length < 1 {
        return Err(Error::Invalid(format!("job {:?}: length < 1", job.id)));
    }
    match &mut job.region {
        Region::Slots(s) => {
            if s.is_empty() {
                return Err(Error::Invalid(format!("job {:?}: empty slot set", job.id)));
            }
            s.sort_unstable();
            s.dedup();
        }
        Region::Windows(ws) => {
            if ws.is_empty() {
                return Err(Error::Invalid(format!("job {:?}: no windows", job.id)));
            }
            for w in ws.iter() {
                if w.release.is_negative() {
                    return Err(Error::Invalid(format!("job {:?}: negative release", job.id)));
                }
                if w.release >= w.deadline {
                    return Err(Error::Invalid(format!("job {:?}: empty window", job.id)));
                }
            }
            ws.sort_by(|a, b| a.release.cmp(&b.release));
            let mut merged: Vec<Window> = Vec::with_capacity(ws.len());
            for w in ws.drain(..) {
                match merged.last_mut() {
                    Some(last) if w.release < last.deadline => {
                        return Err(Error::Invalid(format!(
                            "job {:?}: overlapping windows",
                            job.id
                        )));
                    }
                    Some(last) if w.release == last.deadline => last.deadline = w.deadline,
                    _ => merged.push(w),
                }
            }
            *ws = merged;
            let real = !ws.iter().all(Window::is_integral);
            if real && (ws.len() > 1 || job.length > 1) {
                return Err(Error::Invalid(format!(
                    "job {:?}: real-valued windows require a unit-length single-window job",
                    job.id
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Schedules

/// Job id to the set of slots it runs in. Jobs that are absent are not
/// satisfied.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntegralSchedule {
    pub assignments: BTreeMap<String, Vec<u32>>,
}

impl IntegralSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign(&mut self, id: impl Into<String>, mut slots: Vec<u32>) {
        slots.sort_unstable();
        self.assignments.insert(id.into(), slots);
    }

    pub fn active_slots(&self) -> BTreeSet<u32> {
        self.assignments.values().flatten().copied().collect()
    }

    pub fn active_time(&self) -> usize {
        self.active_slots().len()
    }

    pub fn jobs_scheduled(&self) -> usize {
        self.assignments.len()
    }

    /// Jobs per slot.
    pub fn load(&self) -> BTreeMap<u32, usize> {
        let mut load = BTreeMap::new();
        for s in self.assignments.values().flatten() {
            *load.entry(*s).or_insert(0) += 1;
        }
        load
    }

    /// The 0/1 preemptive assignment this schedule induces.
    pub fn to_preemptive(&self) -> PreemptiveAssignment {
        let mut pa = PreemptiveAssignment::default();
        for (id, slots) in &self.assignments {
            for &s in slots {
                pa.x.insert((id.clone(), s), Rational::one());
                pa.idle.insert(s, Rational::zero());
            }
        }
        pa
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PreemptiveAssignment {
    pub x: BTreeMap<(String, u32), Rational>,
    pub idle: BTreeMap<u32, Rational>,
}

impl PreemptiveAssignment {
    pub fn idle_at(&self, s: u32) -> Rational {
        self.idle.get(&s).copied().unwrap_or_else(Rational::zero)
    }

    /// Slots carrying positive work.
    pub fn busy_slots(&self) -> BTreeSet<u32> {
        self.x.iter().filter(|(_, v)| v.is_positive()).map(|((_, s), _)| *s).collect()
    }

    pub fn active_time(&self) -> Rational {
        self.busy_slots().into_iter().map(|s| Rational::one() - self.idle_at(s)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub job: String,
    pub processor: u32,
    pub start: Rational,
    pub end: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TimedSchedule {
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Batch {
    pub start: Rational,
    pub jobs: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BatchSchedule {
    pub batches: Vec<Batch>,
}

impl BatchSchedule {
    pub fn count(&self) -> usize {
        self.batches.len()
    }

    pub fn jobs_scheduled(&self) -> usize {
        self.batches.iter().map(|b| b.jobs.len()).sum()
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownJob(String),
    Capacity { slot: u32, jobs: usize },
    InfeasibleSlot { job: String, slot: u32 },
    Length { job: String, expected: u32, got: usize },
    Demand { job: String, got: Rational },
    SlotLoad { slot: u32 },
    PairLoad { job: String, slot: u32 },
    OutOfRange { what: String },
    SelfOverlap { job: String },
    ProcessorOverlap { processor: u32 },
    ProcessorLoad { processor: u32, slot: u32 },
    Duration { job: String, got: Rational },
    DuplicateJob(String),
    BatchCapacity { start: Rational, jobs: usize },
    BatchWindow { job: String, start: Rational },
    BatchOverlap { first: Rational, second: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            UnknownJob(j) => write!(f, "unknown job {j:?}"),
            Capacity { slot, jobs } => write!(f, "capacity exceeded at slot {slot} ({jobs} jobs)"),
            InfeasibleSlot { job, slot } => write!(f, "job {job:?} not feasible in slot {slot}"),
            Length { job, expected, got } => {
                write!(f, "job {job:?} has {got} slots, length is {expected}")
            }
            Demand { job, got } => write!(f, "job {job:?} receives {got}, below its length"),
            SlotLoad { slot } => write!(f, "slot {slot}: work plus B times idle exceeds B"),
            PairLoad { job, slot } => write!(f, "job {job:?} in slot {slot}: x + idle exceeds 1"),
            OutOfRange { what } => write!(f, "value out of range: {what}"),
            SelfOverlap { job } => write!(f, "job {job:?} overlaps itself"),
            ProcessorOverlap { processor } => write!(f, "processor {processor} double-booked"),
            ProcessorLoad { processor, slot } => {
                write!(f, "processor {processor} exceeds its active time in slot {slot}")
            }
            Duration { job, got } => write!(f, "job {job:?} runs for {got}"),
            DuplicateJob(j) => write!(f, "job {j:?} appears in more than one batch"),
            BatchCapacity { start, jobs } => write!(f, "batch at {start} holds {jobs} jobs"),
            BatchWindow { job, start } => write!(f, "job {job:?} cannot run in batch at {start}"),
            BatchOverlap { first, second } => write!(f, "batches at {first} and {second} overlap"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub satisfied: Vec<String>,
    pub violations: Vec<Violation>,
    pub active_time: Rational,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "valid": self.is_valid(),
            "satisfied": self.satisfied,
            "violations": self.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "active_time": rational::format_rational(&self.active_time),
        })
    }
}

pub fn validate_integral(inst: &Instance, sched: &IntegralSchedule) -> ValidationReport {
    let mut violations = Vec::new();
    let mut satisfied = Vec::new();
    for (id, slots) in &sched.assignments {
        let Some(j) = inst.job_index(id) else {
            violations.push(Violation::UnknownJob(id.clone()));
            continue;
        };
        let job = &inst.jobs()[j];
        let distinct: BTreeSet<u32> = slots.iter().copied().collect();
        let mut ok = true;
        if distinct.len() != slots.len() || slots.len() != job.length as usize {
            violations.push(Violation::Length {
                job: id.clone(),
                expected: job.length,
                got: distinct.len(),
            });
            ok = false;
        }
        for &s in &distinct {
            if !job.is_feasible_slot(s) {
                violations.push(Violation::InfeasibleSlot { job: id.clone(), slot: s });
                ok = false;
            }
        }
        if ok {
            satisfied.push(id.clone());
        }
    }
    for (slot, jobs) in sched.load() {
        if jobs > inst.b() as usize {
            violations.push(Violation::Capacity { slot, jobs });
        }
    }
    ValidationReport { satisfied, violations, active_time: int(sched.active_time() as i64) }
}

pub fn validate_preemptive(inst: &Instance, pa: &PreemptiveAssignment) -> ValidationReport {
    let mut violations = Vec::new();
    let b = int(inst.b() as i64);
    let unit = Rational::one();
    let mut received: BTreeMap<&str, Rational> = BTreeMap::new();
    let mut slot_work: BTreeMap<u32, Rational> = BTreeMap::new();
    for ((id, s), v) in &pa.x {
        let Some(j) = inst.job_index(id) else {
            violations.push(Violation::UnknownJob(id.clone()));
            continue;
        };
        if v.is_negative() || *v > unit {
            violations.push(Violation::OutOfRange { what: format!("x[{id},{s}] = {v}") });
        }
        if v.is_positive() && !inst.jobs()[j].is_feasible_slot(*s) {
            violations.push(Violation::InfeasibleSlot { job: id.clone(), slot: *s });
        }
        *received.entry(id.as_str()).or_insert_with(Rational::zero) += v;
        *slot_work.entry(*s).or_insert_with(Rational::zero) += v;
        if *v + pa.idle_at(*s) > unit {
            violations.push(Violation::PairLoad { job: id.clone(), slot: *s });
        }
    }
    for (s, i) in &pa.idle {
        if i.is_negative() || *i > unit {
            violations.push(Violation::OutOfRange { what: format!("idle[{s}] = {i}") });
        }
    }
    for (s, w) in &slot_work {
        if *w + b * pa.idle_at(*s) > b {
            violations.push(Violation::SlotLoad { slot: *s });
        }
    }
    let mut satisfied = Vec::new();
    for job in inst.jobs() {
        let got = received.get(job.id.as_str()).copied().unwrap_or_else(Rational::zero);
        if got >= int(job.length as i64) {
            satisfied.push(job.id.clone());
        } else {
            violations.push(Violation::Demand { job: job.id.clone(), got });
        }
    }
    ValidationReport { satisfied, violations, active_time: pa.active_time() }
}

pub fn validate_timed(
    inst: &Instance,
    pa: &PreemptiveAssignment,
    ts: &TimedSchedule,
) -> ValidationReport {
    let mut violations = Vec::new();
    let mut per_job: BTreeMap<&str, Vec<(Rational, Rational)>> = BTreeMap::new();
    let mut per_proc: BTreeMap<u32, Vec<(Rational, Rational)>> = BTreeMap::new();
    let mut proc_slot: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
    for seg in &ts.segments {
        let Some(j) = inst.job_index(&seg.job) else {
            violations.push(Violation::UnknownJob(seg.job.clone()));
            continue;
        };
        if seg.processor < 1 || seg.processor > inst.b() || seg.start >= seg.end {
            violations.push(Violation::OutOfRange { what: format!("segment {seg:?}") });
            continue;
        }
        let slot = rational::floor_i64(&seg.start);
        if slot < 0 || seg.end > int(slot + 1) {
            violations.push(Violation::OutOfRange { what: format!("segment {seg:?} spans slots") });
            continue;
        }
        let slot = slot as u32;
        if !inst.jobs()[j].is_feasible_slot(slot) {
            violations.push(Violation::InfeasibleSlot { job: seg.job.clone(), slot });
        }
        per_job.entry(seg.job.as_str()).or_default().push((seg.start, seg.end));
        per_proc.entry(seg.processor).or_default().push((seg.start, seg.end));
        *proc_slot.entry((seg.processor, slot)).or_insert_with(Rational::zero) +=
            seg.end - seg.start;
    }
    let overlapping = |v: &mut Vec<(Rational, Rational)>| {
        v.sort();
        v.windows(2).any(|w| w[1].0 < w[0].1)
    };
    let mut satisfied = Vec::new();
    for job in inst.jobs() {
        let mut segs = per_job.remove(job.id.as_str()).unwrap_or_default();
        if overlapping(&mut segs) {
            violations.push(Violation::SelfOverlap { job: job.id.clone() });
        }
        let got: Rational = segs.iter().map(|(a, b)| b - a).sum();
        if got == int(job.length as i64) {
            satisfied.push(job.id.clone());
        } else {
            violations.push(Violation::Duration { job: job.id.clone(), got });
        }
    }
    for (p, mut segs) in per_proc {
        if overlapping(&mut segs) {
            violations.push(Violation::ProcessorOverlap { processor: p });
        }
    }
    for ((p, s), total) in proc_slot {
        if total > Rational::one() - pa.idle_at(s) {
            violations.push(Violation::ProcessorLoad { processor: p, slot: s });
        }
    }
    ValidationReport { satisfied, violations, active_time: pa.active_time() }
}

pub fn validate_batches(inst: &Instance, sched: &BatchSchedule) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen = BTreeSet::new();
    let mut satisfied = Vec::new();
    for batch in &sched.batches {
        if batch.jobs.len() > inst.b() as usize {
            violations.push(Violation::BatchCapacity { start: batch.start, jobs: batch.jobs.len() });
        }
        for id in &batch.jobs {
            let Some(j) = inst.job_index(id) else {
                violations.push(Violation::UnknownJob(id.clone()));
                continue;
            };
            if !seen.insert(id.clone()) {
                violations.push(Violation::DuplicateJob(id.clone()));
                continue;
            }
            let end = batch.start + Rational::one();
            let fits = match &inst.jobs()[j].region {
                Region::Windows(ws) => {
                    ws.iter().any(|w| w.release <= batch.start && end <= w.deadline)
                }
                Region::Slots(s) => {
                    batch.start.is_integer()
                        && !batch.start.is_negative()
                        && s.binary_search(&(batch.start.to_integer() as u32)).is_ok()
                }
            };
            if inst.jobs()[j].length != 1 || !fits {
                violations.push(Violation::BatchWindow { job: id.clone(), start: batch.start });
            } else {
                satisfied.push(id.clone());
            }
        }
    }
    let mut starts: Vec<Rational> = sched.batches.iter().map(|b| b.start).collect();
    starts.sort();
    for w in starts.windows(2) {
        if w[1] - w[0] < Rational::one() {
            violations.push(Violation::BatchOverlap { first: w[0], second: w[1] });
        }
    }
    satisfied.sort();
    ValidationReport { satisfied, violations, active_time: int(sched.batches.len() as i64) }
}

// ---------------------------------------------------------------------------
// JSON

/// How rationals are written in output files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumberFormat {
    /// Exact `"p/q"` strings.
    #[default]
    Exact,
    /// Lossy JSON floats, for reading by eye.
    Float,
}

impl NumberFormat {
    pub fn value(self, r: &Rational) -> Value {
        match self {
            NumberFormat::Exact => Value::String(rational::format_rational(r)),
            NumberFormat::Float => json!(rational::to_f64(r)),
        }
    }
}

fn parse_json(text: &[u8]) -> Result<Value> {
    serde_json::from_slice(text).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn as_u32(v: &Value, what: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::Parse(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

pub fn parse_instance(text: &[u8]) -> Result<Instance> {
    let v = parse_json(text)?;
    let b = field(&v, "B")?;
    let b = b.as_i64().ok_or_else(|| Error::Parse("B must be an integer".into()))?;
    if b < 1 {
        return Err(Error::Invalid("B < 1".into()));
    }
    let b = u32::try_from(b).map_err(|_| Error::Parse("B too large".into()))?;
    let mut jobs = Vec::new();
    for jv in as_array(field(&v, "jobs")?, "jobs")? {
        let id = field(jv, "id")?
            .as_str()
            .ok_or_else(|| Error::Parse("id must be a string".into()))?
            .to_string();
        let length = match jv.get("length") {
            None => 1,
            Some(l) => as_u32(l, "length")?,
        };
        let region = match (jv.get("windows"), jv.get("slots")) {
            (Some(ws), None) => {
                let mut out = Vec::new();
                for w in as_array(ws, "windows")? {
                    let pair = as_array(w, "window")?;
                    if pair.len() != 2 {
                        return Err(Error::Parse("a window is a [release, deadline] pair".into()));
                    }
                    out.push(Window::new(
                        rational::from_json(&pair[0])?,
                        rational::from_json(&pair[1])?,
                    ));
                }
                Region::Windows(out)
            }
            (None, Some(ss)) => Region::Slots(
                as_array(ss, "slots")?.iter().map(|s| as_u32(s, "slot")).collect::<Result<_>>()?,
            ),
            _ => {
                return Err(Error::Parse(format!(
                    "job {id:?}: exactly one of \"windows\" and \"slots\" is required"
                )))
            }
        };
        jobs.push(Job { id, length, region });
    }
    Instance::new(b, jobs)
}

pub fn instance_to_value(inst: &Instance) -> Value {
    let jobs: Vec<Value> = inst
        .jobs()
        .iter()
        .map(|j| {
            let mut m = Map::new();
            m.insert("id".into(), json!(j.id));
            if j.length != 1 {
                m.insert("length".into(), json!(j.length));
            }
            match &j.region {
                Region::Windows(ws) => {
                    let ws: Vec<Value> = ws
                        .iter()
                        .map(|w| json!([rational::to_json(&w.release), rational::to_json(&w.deadline)]))
                        .collect();
                    m.insert("windows".into(), Value::Array(ws));
                }
                Region::Slots(s) => {
                    m.insert("slots".into(), json!(s));
                }
            }
            Value::Object(m)
        })
        .collect();
    json!({ "B": inst.b(), "jobs": jobs })
}

pub fn instance_to_json(inst: &Instance) -> String {
    pretty(&instance_to_value(inst))
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn schedule_to_value(sched: &IntegralSchedule, fmt: NumberFormat) -> Value {
    let mut assignments = Map::new();
    for (id, slots) in &sched.assignments {
        assignments.insert(id.clone(), json!(slots));
    }
    let active: Vec<u32> = sched.active_slots().into_iter().collect();
    json!({
        "assignments": assignments,
        "active_slots": active,
        "active_time": fmt.value(&int(sched.active_time() as i64)),
    })
}

pub fn parse_schedule(text: &[u8]) -> Result<IntegralSchedule> {
    let v = parse_json(text)?;
    let obj = field(&v, "assignments")?
        .as_object()
        .ok_or_else(|| Error::Parse("assignments must be an object".into()))?;
    let mut sched = IntegralSchedule::new();
    for (id, slots) in obj {
        let slots = as_array(slots, "slots")?.iter().map(|s| as_u32(s, "slot")).collect::<Result<_>>()?;
        sched.assign(id.clone(), slots);
    }
    Ok(sched)
}

pub fn preemptive_to_value(pa: &PreemptiveAssignment, fmt: NumberFormat) -> Value {
    let mut x = Map::new();
    for ((id, s), v) in &pa.x {
        let entry = x.entry(id.clone()).or_insert_with(|| Value::Object(Map::new()));
        entry.as_object_mut().unwrap().insert(s.to_string(), fmt.value(v));
    }
    let mut idle = Map::new();
    for (s, v) in &pa.idle {
        idle.insert(s.to_string(), fmt.value(v));
    }
    json!({ "x": x, "idle": idle, "active_time": fmt.value(&pa.active_time()) })
}

pub fn parse_preemptive(text: &[u8]) -> Result<PreemptiveAssignment> {
    let v = parse_json(text)?;
    let slot_key = |k: &str| -> Result<u32> {
        k.parse().map_err(|_| Error::Parse(format!("bad slot key {k:?}")))
    };
    let mut pa = PreemptiveAssignment::default();
    let xs = field(&v, "x")?.as_object().ok_or_else(|| Error::Parse("x must be an object".into()))?;
    for (id, per_slot) in xs {
        let per_slot = per_slot
            .as_object()
            .ok_or_else(|| Error::Parse("x entries must be objects".into()))?;
        for (k, val) in per_slot {
            pa.x.insert((id.clone(), slot_key(k)?), rational::from_json(val)?);
        }
    }
    if let Some(idle) = v.get("idle") {
        let idle = idle.as_object().ok_or_else(|| Error::Parse("idle must be an object".into()))?;
        for (k, val) in idle {
            pa.idle.insert(slot_key(k)?, rational::from_json(val)?);
        }
    }
    Ok(pa)
}

pub fn timed_to_value(ts: &TimedSchedule, fmt: NumberFormat) -> Value {
    let segs: Vec<Value> = ts
        .segments
        .iter()
        .map(|s| {
            json!({
                "job": s.job,
                "processor": s.processor,
                "start": fmt.value(&s.start),
                "end": fmt.value(&s.end),
            })
        })
        .collect();
    json!({ "segments": segs })
}

pub fn batches_to_value(sched: &BatchSchedule, fmt: NumberFormat) -> Value {
    let batches: Vec<Value> = sched
        .batches
        .iter()
        .map(|b| json!({ "start": fmt.value(&b.start), "jobs": b.jobs }))
        .collect();
    json!({
        "batches": batches,
        "count": sched.count(),
        "jobs": sched.jobs_scheduled(),
    })
}

pub fn parse_batches(text: &[u8]) -> Result<BatchSchedule> {
    let v = parse_json(text)?;
    let mut out = BatchSchedule::default();
    for b in as_array(field(&v, "batches")?, "batches")? {
        let start = rational::from_json(field(b, "start")?)?;
        let jobs = as_array(field(b, "jobs")?, "jobs")?
            .iter()
            .map(|j| j.as_str().map(str::to_string).ok_or_else(|| Error::Parse("job ids are strings".into())))
            .collect::<Result<_>>()?;
        out.batches.push(Batch { start, jobs });
    }
    Ok(out)
}
