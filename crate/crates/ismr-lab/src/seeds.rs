//! Per-task random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const PRNG_ID: &str = "ChaCha8Rng(seed_from_u64(seed)), stream = task index";

/// Trials per parallel task; fixed so results do not depend on thread count.
pub const TASK_SIZE: u64 = 10_000;

pub fn stream(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Runs `trials` Bernoulli trials split into fixed-size tasks and returns
/// the number of successes. Task `i` draws from `stream(seed, offset + i)`.
pub fn parallel_count<F, E>(seed: u64, offset: u64, trials: u64, f: F) -> Result<u64, E>
where
    F: Fn(&mut ChaCha8Rng) -> Result<bool, E> + Sync,
    E: Send,
{
    let tasks = trials.div_ceil(TASK_SIZE);
    (0..tasks)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, offset + t);
            let n = TASK_SIZE.min(trials - t * TASK_SIZE);
            let mut hits = 0;
            for _ in 0..n {
                hits += f(&mut rng)? as u64;
            }
            Ok(hits)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}
