//! Law checking over finite or sampled domains, fanned out with rayon when
//! the `parallel` feature is enabled.
//!
//! A law is a predicate over a tuple drawn from a product of [`Factor`]s.
//! When every factor is finite and the product is within the budget, the
//! whole space is enumerated; otherwise `budget` tuples are drawn. Draw `i`
//! of law `L` uses its own ChaCha stream keyed by `(seed, L, i)`, so the
//! result does not depend on thread scheduling, and the reported witness is
//! always the failing tuple with the smallest index.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::algebra::{Element, Group};
use crate::report::{LawRecord, Mode, Status};

/// Default number of tuples checked per law when sampling.
pub const DEFAULT_BUDGET: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is on, sequential otherwise.
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// One coordinate of a law's domain.
#[derive(Clone, Copy, Debug)]
pub enum Factor<'a> {
    Group(&'a Group),
    /// Indices `0..n` into some caller-held list.
    Range(usize),
}

impl Factor<'_> {
    fn size(&self) -> Option<u64> {
        match self {
            Factor::Group(g) => g.order().map(|n| n as u64),
            Factor::Range(n) => Some(*n as u64),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Pick {
    Elem(Element),
    Index(usize),
}

/// A tuple drawn from a law's domain.
#[derive(Clone, Debug, Default)]
pub struct Draw(SmallVec<[Pick; 8]>);

impl Draw {
    pub fn elem(&self, k: usize) -> Element {
        match self.0[k] {
            Pick::Elem(e) => e,
            Pick::Index(_) => panic!("coordinate {k} is an index"),
        }
    }

    pub fn index(&self, k: usize) -> usize {
        match self.0[k] {
            Pick::Index(i) => i,
            Pick::Elem(_) => panic!("coordinate {k} is a group element"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Checker {
    pub exec: Exec,
    pub seed: u64,
    pub budget: u64,
}

impl Default for Checker {
    fn default() -> Self {
        Checker {
            exec: Exec::default(),
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Checker {
    pub fn new(seed: u64, budget: u64) -> Self {
        Checker {
            exec: Exec::default(),
            seed,
            budget,
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    /// Deterministic generator for draw `index` of the stream named `tag`.
    pub fn rng(&self, tag: &str, index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix(self.seed, fnv1a(tag), index))
    }

    /// Checks `pred` over the domain `factors`. `pred` returns `None` on
    /// success and a witness description on failure.
    pub fn law<F>(&self, law: &str, anchor: &str, factors: &[Factor<'_>], pred: F) -> LawRecord
    where
        F: Fn(&Draw) -> Option<String> + Sync,
    {
        let start = Instant::now();
        let sizes: Option<Vec<u64>> = factors.iter().map(Factor::size).collect();
        let total = sizes
            .as_ref()
            .map(|s| s.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n)));
        let (mode, checked, (failures, witness)) = match (sizes, total) {
            (Some(sizes), Some(Some(total))) if total <= self.budget || total == 0 => {
                let decode = |mut i: u64| {
                    let mut picks: SmallVec<[Pick; 8]> = SmallVec::with_capacity(factors.len());
                    picks.resize(factors.len(), Pick::Index(0));
                    for (k, f) in factors.iter().enumerate().rev() {
                        let n = sizes[k];
                        let j = (i % n) as usize;
                        i /= n;
                        picks[k] = match f {
                            Factor::Group(g) => Pick::Elem(g.elements().expect("finite")[j]),
                            Factor::Range(_) => Pick::Index(j),
                        };
                    }
                    Draw(picks)
                };
                let res = fold_range(self.exec, total, |i| pred(&decode(i)));
                (Mode::Exhaustive, total, res)
            }
            _ => {
                let tag = fnv1a(law);
                let draw = |i: u64| {
                    let mut rng = ChaCha8Rng::seed_from_u64(mix(self.seed, tag, i));
                    Draw(
                        factors
                            .iter()
                            .map(|f| match f {
                                Factor::Group(g) => Pick::Elem(g.sample(&mut rng)),
                                Factor::Range(n) => Pick::Index(rng.random_range(0..*n)),
                            })
                            .collect(),
                    )
                };
                let res = fold_range(self.exec, self.budget, |i| pred(&draw(i)));
                (Mode::Sampled, self.budget, res)
            }
        };
        LawRecord {
            law: law.to_string(),
            anchor: anchor.to_string(),
            status: if failures == 0 { Status::Pass } else { Status::Fail },
            mode,
            checked,
            failures,
            witness,
            note: None,
            elapsed: start.elapsed(),
        }
    }

    /// Runs `pred` on each item of an explicit list (always exhaustive).
    pub fn each<T, F>(&self, law: &str, anchor: &str, items: &[T], pred: F) -> LawRecord
    where
        T: Sync,
        F: Fn(&T) -> Option<String> + Sync,
    {
        let start = Instant::now();
        let (failures, witness) = fold_range(self.exec, items.len() as u64, |i| pred(&items[i as usize]));
        LawRecord {
            law: law.to_string(),
            anchor: anchor.to_string(),
            status: if failures == 0 { Status::Pass } else { Status::Fail },
            mode: Mode::Exhaustive,
            checked: items.len() as u64,
            failures,
            witness,
            note: None,
            elapsed: start.elapsed(),
        }
    }

    /// Maps `f` over `0..n` in order, in parallel when enabled.
    pub fn map_range<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.exec.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }
}

type Found = (u64, Option<(u64, String)>);

fn merge(a: Found, b: Found) -> Found {
    let first = match (a.1, b.1) {
        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
        (x, y) => x.or(y),
    };
    (a.0 + b.0, first)
}

/// Counts failures of `f` over `0..n` and keeps the lowest-index witness.
fn fold_range<F>(exec: Exec, n: u64, f: F) -> (u64, Option<String>)
where
    F: Fn(u64) -> Option<String> + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        let found = (0..n)
            .into_par_iter()
            .filter_map(|i| f(i).map(|w| (i, w)))
            .fold(|| (0u64, None), |acc, hit| merge(acc, (1, Some(hit))))
            .reduce(|| (0u64, None), merge);
        return (found.0, found.1.map(|(_, w)| w));
    }
    let _ = exec;
    let found = (0..n)
        .filter_map(|i| f(i).map(|w| (i, w)))
        .fold((0u64, None), |acc, hit| merge(acc, (1, Some(hit))));
    (found.0, found.1.map(|(_, w)| w))
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

// splitmix64 finalizer over the combined key
fn mix(seed: u64, tag: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(tag.rotate_left(17))
        .wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
