//! Seeded random number generation.
//!
//! Every stochastic step in the crate draws from ChaCha8 (`rand_chacha`),
//! seeded through `seed_from_u64`, so a run is fully determined by the seeds
//! in its configuration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type PipelineRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> PipelineRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-week stream: `seed XOR week`, so adding weeks leaves earlier samples untouched.
pub fn for_week(seed: u64, week: u32) -> PipelineRng {
    seeded(seed ^ u64::from(week))
}
