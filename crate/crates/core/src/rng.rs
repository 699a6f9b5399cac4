use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent streams derived from one user seed. Each consumer of
/// randomness in a run draws from its own stream so that, e.g., changing the
/// number of noise draws never perturbs the sampled frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Frequencies = 0,
    InitialPhases = 1,
    Noise = 2,
    Junctions = 3,
    Network = 4,
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
