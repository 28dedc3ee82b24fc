//! Tunables shared by the enumeration and local-expansion kernels.

use crate::exec::Executor;

/// Default limit on the number of elements of a field that may be enumerated.
pub const DEFAULT_CAPACITY: u64 = 5_000_000;

/// Environment variable overriding [`Config::capacity`].
pub const CAPACITY_ENV: &str = "CURVELAB_CAPACITY";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Largest field that may be fully enumerated.
    pub capacity: u64,
    /// First truncation order tried for power series.
    pub precision_start: usize,
    /// Hard ceiling for precision escalation.
    pub precision_cap: usize,
    /// Number of random points used for generic behaviour.
    pub sample: usize,
    pub seed: u64,
    /// Highest extension degree scanned by censuses and conic tests.
    pub m_max: u32,
    pub executor: Executor,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            capacity: DEFAULT_CAPACITY,
            precision_start: 64,
            precision_cap: 4096,
            sample: 30,
            seed: 0,
            m_max: 3,
            executor: Executor::default(),
        }
    }
}

impl Config {
    /// Default configuration with the capacity taken from `CURVELAB_CAPACITY` when set.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Some(cap) = std::env::var(CAPACITY_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
        {
            if cap > 0 {
                cfg.capacity = cap;
            }
        }
        cfg
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_m_max(mut self, m_max: u32) -> Self {
        self.m_max = m_max;
        self
    }

    pub fn with_executor(mut self, executor: Executor) -> Self {
        self.executor = executor;
        self
    }

    /// Precision schedule for a quantity whose order is known to be at most `bound`:
    /// start at `min(precision_start, bound + 1)`, doubling up to `min(cap, bound + 1)`.
    pub(crate) fn schedule(&self, bound: usize) -> Vec<usize> {
        let ceiling = self.precision_cap.min(bound.saturating_add(1)).max(2);
        let mut p = self.precision_start.min(ceiling).max(2);
        let mut out = vec![p];
        while p < ceiling {
            p = (p * 2).min(ceiling);
            out.push(p);
        }
        out
    }
}
