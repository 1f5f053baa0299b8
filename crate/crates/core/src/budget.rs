//! Search limits shared by every bounded computation.

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Longest conjugator tried when searching for parabolic closures.
    pub ball_radius: usize,
    /// Most elements held in one search ball.
    pub ball_size: usize,
    /// Most powers of an element examined.
    pub power_cap: u64,
    /// Deepest root examined when looking for nesting certificates.
    pub root_depth: usize,
    /// Depth window for wall enumeration in the theorem checks.
    pub window_depth: usize,
    pub c_ceiling: usize,
    pub k_ceiling: usize,
    /// Exponent grid `|m|, |n| ≤ grid`.
    pub grid: i64,
    /// Samples per system in the suite.
    pub samples: usize,
    /// Largest rank for exhaustive subset enumeration.
    pub rank_cap: usize,
    /// Most roots enumerated at once.
    pub root_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            ball_radius: 10,
            ball_size: 20_000,
            power_cap: 120,
            root_depth: 14,
            window_depth: 14,
            c_ceiling: 10,
            k_ceiling: 12,
            grid: 12,
            samples: 20,
            rank_cap: 16,
            root_cap: 200_000,
        }
    }
}

impl Budget {
    /// A budget under which every bounded search gives up immediately.
    pub fn zero() -> Budget {
        Budget {
            ball_radius: 0,
            ball_size: 0,
            power_cap: 0,
            root_depth: 0,
            window_depth: 0,
            c_ceiling: 0,
            k_ceiling: 0,
            grid: 0,
            samples: 0,
            rank_cap: 0,
            root_cap: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Budget::zero()
    }

    /// Multiplies every limit by `factor` (rounded, at least 0).
    pub fn scaled(&self, factor: f64) -> Budget {
        let u = |x: usize| ((x as f64) * factor).round().max(0.0) as usize;
        Budget {
            ball_radius: u(self.ball_radius),
            ball_size: u(self.ball_size),
            power_cap: ((self.power_cap as f64) * factor).round().max(0.0) as u64,
            root_depth: u(self.root_depth),
            window_depth: u(self.window_depth),
            c_ceiling: u(self.c_ceiling),
            k_ceiling: u(self.k_ceiling),
            grid: ((self.grid as f64) * factor).round().max(0.0) as i64,
            samples: u(self.samples),
            rank_cap: u(self.rank_cap),
            root_cap: u(self.root_cap),
        }
    }

    /// Applies comma-separated `key=value` overrides, e.g. `power_cap=60,grid=8`.
    pub fn with_overrides(&self, spec: &str) -> Result<Budget> {
        let mut b = self.clone();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "zero" {
                b = Budget::zero();
                continue;
            }
            let Some((key, value)) = part.split_once('=') else {
                bail!(Input, "budget entry {part:?} is not key=value");
            };
            let value: u64 = match value.trim().parse() {
                Ok(v) => v,
                Err(_) => bail!(Input, "budget value for {key} is not a non-negative integer: {value:?}"),
            };
            let v = value as usize;
            match key.trim() {
                "ball_radius" => b.ball_radius = v,
                "ball_size" => b.ball_size = v,
                "power_cap" => b.power_cap = value,
                "root_depth" => b.root_depth = v,
                "window_depth" => b.window_depth = v,
                "c_ceiling" => b.c_ceiling = v,
                "k_ceiling" => b.k_ceiling = v,
                "grid" => b.grid = value as i64,
                "samples" => b.samples = v,
                "rank_cap" => b.rank_cap = v,
                "root_cap" => b.root_cap = v,
                other => bail!(Input, "unknown budget key {other:?}"),
            }
        }
        Ok(b)
    }
}
