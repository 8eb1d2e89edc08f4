//! Seeded, splittable random streams.
//!
//! Every simulation takes a `&mut SimRng`. Independent trials use
//! [`stream`] with the same seed and distinct stream ids, which selects a
//! disjoint ChaCha keystream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream 0 of `seed`.
pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `id` of `seed`.
pub fn stream(seed: u64, id: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Child stream derived from a parent without disturbing other children.
pub fn split(parent: &mut SimRng) -> SimRng {
    use rand::Rng;
    let seed: u64 = parent.random();
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exponential waiting time with the given positive rate.
#[inline]
pub(crate) fn exp_wait<R: rand::Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    let e: f64 = rng.sample(rand_distr::Exp1);
    e / rate
}
