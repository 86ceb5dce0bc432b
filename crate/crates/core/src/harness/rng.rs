//! Counter-based per-trial random streams.
//!
//! Each `(master_seed, trial_index, stream_id)` triple addresses an
//! independent ChaCha stream: the master seed keys the cipher, the pair
//! `(trial, stream)` selects the stream counter. Trials can therefore run in
//! any order on any number of workers and still draw identical variates.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Direct-link draws.
pub const STREAM_DIRECT: u64 = 0;
/// IRS NLoS fading draws.
pub const STREAM_REFLECT: u64 = 1;
/// Decomposed SNR-gain draws.
pub const STREAM_DECOMPOSED: u64 = 2;
/// Phase perturbations and other test scaffolding.
pub const STREAM_PERTURB: u64 = 3;

const STREAMS_PER_TRIAL: u64 = 8;

/// Generator for one `(master_seed, trial, stream)` cell.
pub fn trial_rng(master_seed: u64, trial: u64, stream: u64) -> ChaCha8Rng {
    debug_assert!(stream < STREAMS_PER_TRIAL);
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial.wrapping_mul(STREAMS_PER_TRIAL).wrapping_add(stream));
    rng
}
