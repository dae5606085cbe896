//! Seeded instance generators.
//!
//! Randomness comes from SplitMix64 (increment `0x9E3779B97F4A7C15`,
//! multipliers `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`, shifts 30, 27,
//! 31) seeded directly with the 64-bit seed. A draw in `[0, k)` is
//! `next_u64() % k`. The sequence of draws is documented per generator so
//! other implementations can reproduce instances bit for bit.

use std::collections::BTreeSet;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::model::{Instance, Job, Window};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    /// One window `[a/g, d/g)` on the grid of step `1/g`.
    Window,
    /// Each slot kept with probability `density` percent; never empty.
    SlotSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    /// Slots `0..horizon`.
    pub horizon: u32,
    pub b: u32,
    pub region: RegionKind,
    /// Lengths are drawn from `1..=max_length`. Must be 1 off the integer grid.
    pub max_length: u32,
    pub grid: u32,
    pub density: u32,
    pub seed: u64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            n: 5,
            horizon: 6,
            b: 2,
            region: RegionKind::Window,
            max_length: 1,
            grid: 1,
            density: 50,
            seed: 0,
        }
    }
}

fn draw(rng: &mut SplitMix64, k: u64) -> u64 {
    rng.next_u64() % k
}

/// Per job, in id order: the length draw, then either `a` in `[0, gT)` and
/// `d − a − 1` in `[0, gT − a)`, or one draw in `[0, 100)` per slot followed,
/// if nothing was kept, by a fallback slot in `[0, T)`.
pub fn gen_random(spec: &RandomSpec) -> Result<Instance> {
    if spec.horizon < 1 || spec.b < 1 || spec.max_length < 1 || spec.grid < 1 {
        return Err(Error::InvalidSpec("horizon, B, max_length and grid must be positive".into()));
    }
    if spec.region == RegionKind::SlotSet && !(1..=100).contains(&spec.density) {
        return Err(Error::InvalidSpec(format!("density {} outside 1..=100", spec.density)));
    }
    if spec.region == RegionKind::Window && spec.grid > 1 && spec.max_length > 1 {
        return Err(Error::InvalidSpec("off-grid windows need unit lengths".into()));
    }
    let mut rng = SplitMix64::from_seed(spec.seed.to_le_bytes());
    let mut jobs = Vec::with_capacity(spec.n);
    let t = spec.horizon as u64;
    for i in 0..spec.n {
        let id = format!("j{i:03}");
        let length = 1 + draw(&mut rng, spec.max_length as u64) as u32;
        let job = match spec.region {
            RegionKind::Window => {
                let cells = t * spec.grid as u64;
                let a = draw(&mut rng, cells);
                let d = a + 1 + draw(&mut rng, cells - a);
                let g = spec.grid as i64;
                let w = Window::new(Rational::new(a as i64, g), Rational::new(d as i64, g));
                Job::windows(id, length, vec![w])
            }
            RegionKind::SlotSet => {
                let mut slots: Vec<u32> =
                    (0..spec.horizon).filter(|_| draw(&mut rng, 100) < spec.density as u64).collect();
                if slots.is_empty() {
                    slots.push(draw(&mut rng, t) as u32);
                }
                Job::slots(id, length, slots)
            }
        };
        jobs.push(job);
    }
    Instance::new(spec.b, jobs)
}

/// Exact cover by 3-sets as scheduling: one unit job per element, one slot
/// per triple, `B = 3`. Element `e` becomes job `e{e:03}`; triple `i` is
/// slot `i`.
pub fn from_3xc(elements: &[u32], triples: &[[u32; 3]]) -> Result<Instance> {
    let set: BTreeSet<u32> = elements.iter().copied().collect();
    if set.len() != elements.len() {
        return Err(Error::InvalidSpec("repeated element".into()));
    }
    for t in triples {
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(Error::InvalidSpec(format!("triple {t:?} repeats an element")));
        }
        if let Some(x) = t.iter().find(|x| !set.contains(x)) {
            return Err(Error::InvalidSpec(format!("triple {t:?} uses unknown element {x}")));
        }
    }
    let mut jobs = Vec::with_capacity(elements.len());
    for &e in &set {
        let slots: Vec<u32> =
            (0..triples.len()).filter(|&i| triples[i].contains(&e)).map(|i| i as u32).collect();
        if slots.is_empty() {
            return Err(Error::InvalidSpec(format!("element {e} lies in no triple")));
        }
        jobs.push(Job::slots(format!("e{e:03}"), 1, slots));
    }
    Instance::new(3, jobs)
}

/// `k` blocks of three unit jobs sharing slots `{2i, 2i+1}`, `B = 2`.
pub fn tight_gap_family(k: usize) -> Result<Instance> {
    if k == 0 {
        return Err(Error::InvalidSpec("k must be at least 1".into()));
    }
    let jobs = (0..3 * k)
        .map(|j| {
            let s = 2 * (j / 3) as u32;
            Job::slots(format!("j{j:03}"), 1, vec![s, s + 1])
        })
        .collect();
    Instance::new(2, jobs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::instance_to_json;

    #[test]
    fn deterministic_and_empty() {
        let spec = RandomSpec { seed: 7, ..Default::default() };
        assert_eq!(instance_to_json(&gen_random(&spec).unwrap()), instance_to_json(&gen_random(&spec).unwrap()));
        assert!(gen_random(&RandomSpec { n: 0, ..Default::default() }).unwrap().is_empty());
        assert!(gen_random(&RandomSpec { horizon: 0, ..Default::default() }).is_err());
    }

    #[test]
    fn xc3_shapes() {
        let inst = from_3xc(&[1, 2, 3, 4, 5, 6], &[[1, 2, 3], [4, 5, 6]]).unwrap();
        assert_eq!((inst.b(), inst.len(), inst.slot_universe()), (3, 6, vec![0, 1]));
        assert!(from_3xc(&[1, 2, 3], &[[1, 1, 2]]).is_err());
    }

    #[test]
    fn gap_family() {
        let inst = tight_gap_family(2).unwrap();
        assert_eq!(inst.len(), 6);
        assert_eq!(inst.jobs()[5].feasible_slots(), vec![2, 3]);
        assert!(tight_gap_family(0).is_err());
    }
}
