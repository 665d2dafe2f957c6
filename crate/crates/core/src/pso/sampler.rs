use alloc::vec::Vec;

/// Source of uniform draws in `[0, 1)` for initialization and the `r1`/`r2`
/// coefficients. Every seeded `rand` generator qualifies.
pub trait UnitSampler {
    fn next_unit(&mut self) -> f64;

    fn uniform(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.next_unit()
    }
}

impl<R: rand::RngCore + ?Sized> UnitSampler for R {
    fn next_unit(&mut self) -> f64 {
        rand::Rng::random::<f64>(self)
    }
}

/// Replays a fixed sequence of draws, for hand-traced runs.
///
/// # Panics
///
/// When more draws are requested than were scripted.
#[derive(Debug, Clone)]
pub struct ScriptedDraws {
    values: Vec<f64>,
    next: usize,
}

impl ScriptedDraws {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values, next: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.next
    }
}

impl UnitSampler for ScriptedDraws {
    fn next_unit(&mut self) -> f64 {
        let value = *self
            .values
            .get(self.next)
            .unwrap_or_else(|| panic!("scripted draws exhausted after {} values", self.next));
        self.next += 1;
        value
    }
}

/// The generator used for every seeded run.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
