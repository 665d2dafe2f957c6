//! Global-best particle swarm optimization (minimization).
//!
//! One [`Swarm::step`] is two passes over the particles. The first evaluates
//! every current position, refreshes each personal best and then folds it
//! into the global best. The second moves every particle:
//!
//! ```text
//! v' = w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)     clamped to [-v_max, v_max]
//! x' = x + v'                                          clamped to [x_min, x_max]
//! ```
//!
//! where `r1`, `r2` are uniform in `[0, 1)`, drawn once per particle and
//! iteration by default or once per dimension (see [`Coefficients`]). With
//! `w = 1` this is the plain inertia-free update.

mod benchmark;
mod sampler;

pub use benchmark::Benchmark;
pub use sampler::{seeded_rng, ScriptedDraws, UnitSampler};

use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};

/// Objective to minimize. Must be pure: the same position always scores the same.
pub trait Fitness {
    fn evaluate(&self, position: &[f64]) -> f64;
}

impl<F: Fn(&[f64]) -> f64 + ?Sized> Fitness for F {
    fn evaluate(&self, position: &[f64]) -> f64 {
        self(position)
    }
}

/// Strategy for scoring the current position of every particle.
///
/// Implementations may evaluate concurrently but must write `out[i]` for
/// particle `i`; reconciling personal and global bests stays sequential.
pub trait Evaluator<F: ?Sized> {
    fn evaluate(&self, fitness: &F, particles: &[Particle], out: &mut [f64]);
}

/// Evaluates particles one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl<F: Fitness + ?Sized> Evaluator<F> for Sequential {
    fn evaluate(&self, fitness: &F, particles: &[Particle], out: &mut [f64]) {
        for (slot, particle) in out.iter_mut().zip(particles) {
            *slot = fitness.evaluate(&particle.position);
        }
    }
}

/// How often the random coefficients `r1`, `r2` are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Coefficients {
    /// One `(r1, r2)` pair per particle per iteration, shared by all dimensions.
    /// Under `w = 1` this is the variant that still contracts onto the optimum.
    #[default]
    PerParticle,
    /// A fresh `(r1, r2)` pair for every dimension. Explores anisotropically
    /// but needs `w < 1` to converge.
    PerDimension,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PsoConfig {
    pub swarm_size: usize,
    /// Search dimension. Derived from the network when training a forecaster.
    pub dim: usize,
    /// Cognitive acceleration (pull toward the personal best).
    pub c1: f64,
    /// Social acceleration (pull toward the global best).
    pub c2: f64,
    /// Inertia weight on the previous velocity.
    pub inertia: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub v_max: f64,
    pub max_iterations: usize,
    pub seed: u64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub coefficients: Coefficients,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            swarm_size: 30,
            dim: 1,
            c1: 1.4962,
            c2: 1.4962,
            inertia: 1.0,
            x_min: -1.0,
            x_max: 1.0,
            v_max: 1.0,
            max_iterations: 1000,
            seed: 0,
            coefficients: Coefficients::PerParticle,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.c1,
            self.c2,
            self.inertia,
            self.x_min,
            self.x_max,
            self.v_max,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidConfig(
                "all coefficients and bounds must be finite",
            ));
        }
        if self.swarm_size == 0 {
            return Err(Error::InvalidConfig("swarm size must be at least 1"));
        }
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dimension must be at least 1"));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1"));
        }
        if self.x_max <= self.x_min {
            return Err(Error::InvalidConfig("x_max must exceed x_min"));
        }
        if self.v_max <= 0.0 {
            return Err(Error::InvalidConfig("v_max must be positive"));
        }
        if self.c1 < 0.0 || self.c2 < 0.0 {
            return Err(Error::InvalidConfig(
                "acceleration constants must be non-negative",
            ));
        }
        if self.inertia < 0.0 {
            return Err(Error::InvalidConfig("inertia must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub pbest_position: Vec<f64>,
    pub pbest_fitness: f64,
}

impl Particle {
    /// A particle sitting on its own personal best.
    pub fn at_rest(position: Vec<f64>, velocity: Vec<f64>, fitness: f64) -> Self {
        Self {
            pbest_position: position.clone(),
            position,
            velocity,
            pbest_fitness: fitness,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    pub particles: Vec<Particle>,
    pub gbest_position: Vec<f64>,
    pub gbest_fitness: f64,
    /// Completed steps.
    pub iteration: usize,
    scores: Vec<f64>,
}

impl Swarm {
    /// Builds a swarm from particles whose personal bests are already scored,
    /// scanning for the global best from a `+inf` sentinel (strict `<`, so
    /// ties keep the lowest index).
    pub fn from_particles(particles: Vec<Particle>) -> Self {
        let mut swarm = Self {
            gbest_position: Vec::new(),
            gbest_fitness: f64::INFINITY,
            iteration: 0,
            scores: vec![0.0; particles.len()],
            particles,
        };
        for i in 0..swarm.particles.len() {
            swarm.offer_gbest(i);
        }
        if swarm.gbest_position.is_empty() {
            if let Some(first) = swarm.particles.first() {
                swarm.gbest_position = first.pbest_position.clone();
            }
        }
        swarm
    }

    /// Random initial swarm: positions uniform in `[x_min, x_max]`,
    /// velocities uniform in `[-v_max/3, v_max/3]`, drawn per dimension.
    pub fn initialize<F, S>(config: &PsoConfig, fitness: &F, sampler: &mut S) -> Result<Self>
    where
        F: Fitness + ?Sized,
        S: UnitSampler + ?Sized,
    {
        Self::initialize_with(config, fitness, sampler, &Sequential)
    }

    pub fn initialize_with<F, S, E>(
        config: &PsoConfig,
        fitness: &F,
        sampler: &mut S,
        evaluator: &E,
    ) -> Result<Self>
    where
        F: ?Sized,
        S: UnitSampler + ?Sized,
        E: Evaluator<F> + ?Sized,
    {
        config.validate()?;
        let v_init = config.v_max / 3.0;
        let mut particles = Vec::with_capacity(config.swarm_size);
        for _ in 0..config.swarm_size {
            let mut position = Vec::with_capacity(config.dim);
            let mut velocity = Vec::with_capacity(config.dim);
            for _ in 0..config.dim {
                position.push(sampler.uniform(config.x_min, config.x_max));
                velocity.push(sampler.uniform(-v_init, v_init));
            }
            particles.push(Particle::at_rest(position, velocity, f64::NAN));
        }

        let mut scores = vec![0.0; particles.len()];
        evaluator.evaluate(fitness, &particles, &mut scores);
        for (i, (particle, &score)) in particles.iter_mut().zip(&scores).enumerate() {
            if !score.is_finite() {
                return Err(Error::NonFiniteFitness {
                    particle: i,
                    iteration: 0,
                });
            }
            particle.pbest_fitness = score;
        }
        Ok(Self::from_particles(particles))
    }

    fn offer_gbest(&mut self, i: usize) {
        let p = &self.particles[i];
        if p.pbest_fitness < self.gbest_fitness {
            self.gbest_fitness = p.pbest_fitness;
            self.gbest_position.clone_from(&p.pbest_position);
        }
    }

    pub fn step<F, S>(&mut self, fitness: &F, config: &PsoConfig, sampler: &mut S) -> Result<()>
    where
        F: Fitness + ?Sized,
        S: UnitSampler + ?Sized,
    {
        self.step_with(fitness, config, sampler, &Sequential)
    }

    /// One iteration: best-update pass, then movement pass, then `t += 1`.
    pub fn step_with<F, S, E>(
        &mut self,
        fitness: &F,
        config: &PsoConfig,
        sampler: &mut S,
        evaluator: &E,
    ) -> Result<()>
    where
        F: ?Sized,
        S: UnitSampler + ?Sized,
        E: Evaluator<F> + ?Sized,
    {
        let mut scores = core::mem::take(&mut self.scores);
        scores.resize(self.particles.len(), 0.0);
        evaluator.evaluate(fitness, &self.particles, &mut scores);

        for i in 0..self.particles.len() {
            let score = scores[i];
            if !score.is_finite() {
                self.scores = scores;
                return Err(Error::NonFiniteFitness {
                    particle: i,
                    iteration: self.iteration,
                });
            }
            let p = &mut self.particles[i];
            if score < p.pbest_fitness {
                p.pbest_fitness = score;
                p.pbest_position.clone_from(&p.position);
            }
            self.offer_gbest(i);
        }
        self.scores = scores;

        let per_dimension = config.coefficients == Coefficients::PerDimension;
        for p in &mut self.particles {
            let (mut r1, mut r2) = (0.0, 0.0);
            if !per_dimension {
                r1 = sampler.next_unit();
                r2 = sampler.next_unit();
            }
            for d in 0..p.position.len() {
                if per_dimension {
                    r1 = sampler.next_unit();
                    r2 = sampler.next_unit();
                }
                let v = velocity_component(
                    config,
                    p.velocity[d],
                    p.position[d],
                    p.pbest_position[d],
                    self.gbest_position[d],
                    r1,
                    r2,
                );
                p.velocity[d] = v;
                p.position[d] = position_component(config, p.position[d], v);
            }
        }
        self.iteration += 1;
        Ok(())
    }
}

#[inline]
fn velocity_component(
    config: &PsoConfig,
    v: f64,
    x: f64,
    pbest: f64,
    gbest: f64,
    r1: f64,
    r2: f64,
) -> f64 {
    let v = config.inertia * v + config.c1 * r1 * (pbest - x) + config.c2 * r2 * (gbest - x);
    v.clamp(-config.v_max, config.v_max)
}

#[inline]
fn position_component(config: &PsoConfig, x: f64, v: f64) -> f64 {
    (x + v).clamp(config.x_min, config.x_max)
}

/// New velocity of `particle` given per-dimension coefficients `r1`, `r2`.
pub fn velocity_update(
    particle: &Particle,
    gbest: &[f64],
    config: &PsoConfig,
    r1: &[f64],
    r2: &[f64],
) -> Vec<f64> {
    (0..particle.position.len())
        .map(|d| {
            velocity_component(
                config,
                particle.velocity[d],
                particle.position[d],
                particle.pbest_position[d],
                gbest[d],
                r1[d],
                r2[d],
            )
        })
        .collect()
}

/// `x + v` per dimension, clamped to the search bounds. The velocity itself
/// is left untouched at a boundary.
pub fn position_update(x: &[f64], velocity: &[f64], config: &PsoConfig) -> Vec<f64> {
    x.iter()
        .zip(velocity)
        .map(|(&x, &v)| position_component(config, x, v))
        .collect()
}

/// Final global best of a run plus the global-best fitness after
/// initialization and after every completed step.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub position: Vec<f64>,
    pub fitness: f64,
    pub history: Vec<f64>,
}

/// Runs initialization and then `max_iterations` steps, seeded from `config.seed`.
pub fn optimize<F: Fitness + ?Sized>(config: &PsoConfig, fitness: &F) -> Result<Optimum> {
    optimize_with(config, fitness, &Sequential, |_: &Swarm| {
        ControlFlow::Continue(())
    })
}

/// [`optimize`] with a custom evaluator and an observer that sees the swarm
/// after initialization and after each step. Returning `Break` stops early.
pub fn optimize_with<F, E, O>(
    config: &PsoConfig,
    fitness: &F,
    evaluator: &E,
    mut observer: O,
) -> Result<Optimum>
where
    F: ?Sized,
    E: Evaluator<F> + ?Sized,
    O: FnMut(&Swarm) -> ControlFlow<()>,
{
    let mut rng = seeded_rng(config.seed);
    let mut swarm = Swarm::initialize_with(config, fitness, &mut rng, evaluator)?;
    let mut history = Vec::with_capacity(config.max_iterations + 1);
    history.push(swarm.gbest_fitness);

    if observer(&swarm).is_continue() {
        while swarm.iteration < config.max_iterations {
            swarm.step_with(fitness, config, &mut rng, evaluator)?;
            history.push(swarm.gbest_fitness);
            if observer(&swarm).is_break() {
                break;
            }
        }
    }
    Ok(Optimum {
        position: swarm.gbest_position,
        fitness: swarm.gbest_fitness,
        history,
    })
}
