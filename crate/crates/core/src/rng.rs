//! Deterministic random substreams.
//!
//! Every consumer derives its generator from `(seed, domain, index)`:
//! the 64-bit key is `splitmix64(seed ^ splitmix64(domain))`, which seeds a
//! ChaCha8 generator, and `index` selects the ChaCha stream (the 64-bit
//! stream id of the cipher). Member `m` of an ensemble therefore draws the
//! same numbers no matter which thread builds it or in what order.
//!
//! Gaussian variates use the Marsaglia polar method on `(-1, 1)²` uniforms
//! built from 53-bit draws; both outputs of each accepted pair are used.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Substream domains, one per kind of random input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    PandeyMehta = 0x5045_4d48,
    KickedRotor = 0x514b_5221,
    SpinDisorder = 0x5350_494e,
    Subsample = 0x5355_4253,
    Synthetic = 0x5359_4e54,
}

/// SplitMix64 finaliser.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Generator for item `index` of `domain` under the master `seed`.
pub fn substream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let key = splitmix64(seed ^ splitmix64(domain as u64));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(index);
    rng
}

/// Standard normal variates by the polar method.
#[derive(Debug, Clone)]
pub struct Gaussian<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> Gaussian<R> {
    pub fn new(rng: R) -> Self {
        Gaussian { rng, spare: None }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.rng.random::<f64>() - 1.0;
            let v = 2.0 * self.rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }

    pub fn rng_mut(&mut self) -> &mut R {
        &mut self.rng
    }
}
