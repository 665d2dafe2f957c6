//! Particle evaluation on a rayon thread pool.

use rayon::prelude::*;
use rayon::ThreadPool;
use swarmcast_core::pso::Evaluator;
use swarmcast_core::{Fitness, Particle};

/// Scores particles concurrently. Each particle's fitness lands in its own
/// slot, so results are identical to sequential evaluation.
#[derive(Debug, Default)]
pub struct Threaded {
    pool: Option<ThreadPool>,
}

impl Threaded {
    /// `None` uses rayon's global pool.
    pub fn new(threads: Option<usize>) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = match threads {
            Some(n) => Some(rayon::ThreadPoolBuilder::new().num_threads(n).build()?),
            None => None,
        };
        Ok(Self { pool })
    }
}

impl<F: Fitness + Sync + ?Sized> Evaluator<F> for Threaded {
    fn evaluate(&self, fitness: &F, particles: &[Particle], out: &mut [f64]) {
        let run = |out: &mut [f64]| {
            out.par_iter_mut()
                .zip(particles.par_iter())
                .for_each(|(slot, p)| *slot = fitness.evaluate(&p.position));
        };
        match &self.pool {
            Some(pool) => pool.install(|| run(out)),
            None => run(out),
        }
    }
}
