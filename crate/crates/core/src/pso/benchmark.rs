//! Standard test functions for checking the optimizer on its own.

use alloc::string::ToString;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use super::Fitness;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    /// `sum x_d^2`, minimum 0 at the origin.
    Sphere,
    /// `sum 100 (x_{d+1} - x_d^2)^2 + (1 - x_d)^2`, minimum 0 at all-ones.
    Rosenbrock,
    /// `10 D + sum x_d^2 - 10 cos(2 pi x_d)`, minimum 0 at the origin.
    Rastrigin,
}

impl Benchmark {
    pub const ALL: [Benchmark; 3] = [
        Benchmark::Sphere,
        Benchmark::Rosenbrock,
        Benchmark::Rastrigin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Sphere => "sphere",
            Benchmark::Rosenbrock => "rosenbrock",
            Benchmark::Rastrigin => "rastrigin",
        }
    }

    /// Conventional symmetric search bound for each function.
    pub fn default_bound(self) -> f64 {
        match self {
            Benchmark::Sphere | Benchmark::Rastrigin => 5.12,
            Benchmark::Rosenbrock => 2.048,
        }
    }

    pub fn evaluate(self, x: &[f64]) -> f64 {
        match self {
            Benchmark::Sphere => x.iter().map(|v| v * v).sum(),
            Benchmark::Rosenbrock => x
                .windows(2)
                .map(|w| {
                    let a = w[1] - w[0] * w[0];
                    let b = 1.0 - w[0];
                    100.0 * a * a + b * b
                })
                .sum(),
            Benchmark::Rastrigin => {
                10.0 * x.len() as f64
                    + x.iter()
                        .map(|v| v * v - 10.0 * libm::cos(2.0 * PI * v))
                        .sum::<f64>()
            }
        }
    }
}

impl Fitness for Benchmark {
    fn evaluate(&self, position: &[f64]) -> f64 {
        Benchmark::evaluate(*self, position)
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Benchmark::Sphere),
            "rosenbrock" => Ok(Benchmark::Rosenbrock),
            "rastrigin" => Ok(Benchmark::Rastrigin),
            _ => Err(Error::UnknownBenchmark(s.to_string())),
        }
    }
}
