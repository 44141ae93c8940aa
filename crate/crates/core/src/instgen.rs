//! Interval instances from deterministic ones.
//!
//! Recipes (`c_e` is the base cost of edge `e`, draws are taken in edge
//! order):
//!
//! * `BE(β)`: `l = ⌊(1−β)c⌋`, `u = ⌈(1+β)c⌉`. No randomness.
//! * `MO(M)`: `l ~ U{0..M}`, `u = l + U{0..M}`.
//! * `KZ(M)`: `c' ~ U{1..M}`, `l ~ U{0..c'}`, `u = c' + U{0..c'}`.
//!
//! The random stream is ChaCha8 seeded with `seed_from_u64`; integers in
//! `lo..=hi` are drawn by rejection sampling on `next_u64` (see
//! [`Stream::uniform`]), so the output is fixed by the seed alone.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Instance, InstanceError};

pub const RNG_NAME: &str = "chacha8";

/// Seeded integer stream.
pub struct Stream(ChaCha8Rng);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform integer in `lo..=hi`: draw `v = next_u64()`, reject while
    /// `v ≥ 2^64 − (2^64 mod span)`, return `lo + v mod span`.
    pub fn uniform(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi);
        let span = (hi - lo).wrapping_add(1);
        if span == 0 {
            return self.0.next_u64();
        }
        let zone = u64::MAX - (u64::MAX - span + 1) % span;
        loop {
            let v = self.0.next_u64();
            if v <= zone {
                return lo + v % span;
            }
        }
    }
}

/// Relative width `β = num / den`, strictly between 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Beta {
    num: u64,
    den: u64,
}

impl Beta {
    pub fn new(num: u64, den: u64) -> Option<Self> {
        (num > 0 && num < den).then_some(Beta { num, den })
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

impl FromStr for Beta {
    type Err = GenError;

    /// Accepts decimals (`0.3`) and fractions (`3/10`), parsed exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GenError::BadBeta(s.to_string());
        let s = s.trim();
        let (num, den) = if let Some((n, d)) = s.split_once('/') {
            (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?)
        } else {
            let (int, frac) = s.split_once('.').unwrap_or((s, ""));
            if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10u64.pow(frac.len() as u32);
            let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            (int.checked_mul(den).and_then(|v| v.checked_add(frac_v)).ok_or_else(bad)?, den)
        };
        Beta::new(num, den).ok_or_else(bad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    Be(Beta),
    Mo(u64),
    Kz(u64),
}

impl Recipe {
    pub fn code(&self) -> &'static str {
        match self {
            Recipe::Be(_) => "BE",
            Recipe::Mo(_) => "MO",
            Recipe::Kz(_) => "KZ",
        }
    }

    pub fn param(&self) -> String {
        match self {
            Recipe::Be(b) => b.to_string(),
            Recipe::Mo(m) | Recipe::Kz(m) => m.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub recipe: Recipe,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("base instance must have degenerate intervals (edge {0} has l != u)")]
    NonDegenerateBase(usize),
    #[error("beta must be a number strictly between 0 and 1, got `{0}`")]
    BadBeta(String),
    #[error("M must be positive")]
    ZeroM,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

pub fn generate(base: &Instance, cfg: &GeneratorConfig) -> Result<Instance, GenError> {
    if let Some(e) = base.edges().iter().position(|e| e.lower != e.upper) {
        return Err(GenError::NonDegenerateBase(e));
    }
    let mut stream = Stream::new(cfg.seed);
    let intervals: Vec<(u64, u64)> = match cfg.recipe {
        Recipe::Be(beta) => base
            .edges()
            .iter()
            .map(|e| {
                let c = e.lower as u128;
                let (num, den) = (beta.num as u128, beta.den as u128);
                let lower = (den - num) * c / den;
                let upper = ((den + num) * c).div_ceil(den);
                (lower as u64, upper as u64)
            })
            .collect(),
        Recipe::Mo(m) => {
            if m == 0 {
                return Err(GenError::ZeroM);
            }
            (0..base.edge_count())
                .map(|_| {
                    let lower = stream.uniform(0, m);
                    (lower, lower + stream.uniform(0, m))
                })
                .collect()
        }
        Recipe::Kz(m) => {
            if m == 0 {
                return Err(GenError::ZeroM);
            }
            (0..base.edge_count())
                .map(|_| {
                    let c = stream.uniform(1, m);
                    let lower = stream.uniform(0, c);
                    (lower, c + stream.uniform(0, c))
                })
                .collect()
        }
    };
    Ok(base.with_intervals(&intervals)?)
}

/// Header comment lines recording how an instance was generated.
pub fn provenance(cfg: &GeneratorConfig, base_name: &str) -> Vec<String> {
    vec![
        format!("method {}", cfg.recipe.code()),
        format!("param {}", cfg.recipe.param()),
        format!("seed {}", cfg.seed),
        format!("rng {RNG_NAME}"),
        format!("base {base_name}"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn base(costs: &[u64]) -> Instance {
        let edges = costs
            .iter()
            .enumerate()
            .map(|(i, &c)| Edge::fixed(i + 1, i + 2, c))
            .collect();
        Instance::new(costs.len() + 1, edges, [1, costs.len() + 1]).unwrap()
    }

    fn be(beta: &str) -> GeneratorConfig {
        GeneratorConfig {
            recipe: Recipe::Be(beta.parse().unwrap()),
            seed: 0,
        }
    }

    #[test]
    fn be_intervals() {
        let b = base(&[10]);
        assert_eq!(generate(&b, &be("0.5")).unwrap().edge(0), &Edge::new(1, 2, 5, 15));
        assert_eq!(generate(&b, &be("0.1")).unwrap().edge(0), &Edge::new(1, 2, 9, 11));
        assert_eq!(generate(&base(&[7]), &be("0.3")).unwrap().edge(0), &Edge::new(1, 2, 4, 10));
        assert_eq!(generate(&base(&[0]), &be("1/2")).unwrap().edge(0), &Edge::new(1, 2, 0, 0));
    }

    #[test]
    fn beta_parsing() {
        assert_eq!("0.1".parse::<Beta>().unwrap(), Beta::new(1, 10).unwrap());
        assert_eq!(".25".parse::<Beta>().unwrap(), Beta::new(25, 100).unwrap());
        for bad in ["0", "1", "1.5", "-0.1", "abc", "0/3"] {
            assert!(bad.parse::<Beta>().is_err(), "{bad}");
        }
    }

    #[test]
    fn random_recipes_respect_bounds_and_seed() {
        let b = base(&[3; 40]);
        for recipe in [Recipe::Mo(750), Recipe::Kz(750)] {
            let cfg = GeneratorConfig { recipe, seed: 42 };
            let one = generate(&b, &cfg).unwrap();
            assert_eq!(one, generate(&b, &cfg).unwrap());
            let other = generate(&b, &GeneratorConfig { seed: 43, ..cfg }).unwrap();
            assert_ne!(one, other);
            for e in one.edges() {
                assert!(e.lower <= e.upper);
                match recipe {
                    Recipe::Mo(m) => assert!(e.lower <= m && e.width() <= m),
                    _ => assert!(e.upper <= 1500 && e.width() <= 1500),
                }
            }
        }
    }

    #[test]
    fn rejects_interval_base_and_zero_m() {
        let inst = crate::fixtures::tiny1();
        assert_eq!(generate(&inst, &be("0.1")).unwrap_err(), GenError::NonDegenerateBase(0));
        let cfg = GeneratorConfig {
            recipe: Recipe::Mo(0),
            seed: 1,
        };
        assert_eq!(generate(&base(&[1]), &cfg).unwrap_err(), GenError::ZeroM);
    }

    #[test]
    fn uniform_stays_in_range() {
        let mut s = Stream::new(7);
        let mut seen = [false; 4];
        for _ in 0..200 {
            let v = s.uniform(3, 6);
            assert!((3..=6).contains(&v));
            seen[(v - 3) as usize] = true;
        }
        assert!(seen.iter().all(|&b| b));
        assert_eq!(s.uniform(5, 5), 5);
        s.uniform(0, u64::MAX);
    }
}
