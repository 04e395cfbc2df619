//! Rayleigh-faded estimated channel gains drawn from counter-based streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::params::{Link, LinkValues, SystemParams};

/// Squared magnitudes |ĥ|² of the estimated channels, one per link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    pub g_hat: LinkValues,
}

impl ChannelRealization {
    pub fn gain(&self, link: Link) -> f64 {
        self.g_hat[link]
    }
}

/// Address of one trial: the master seed picks the ChaCha key and the trial
/// index picks the stream, so any trial can be regenerated in isolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrialSeed {
    pub master_seed: u64,
    pub trial_index: u64,
}

pub(crate) fn trial_rng(seed: TrialSeed) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.master_seed);
    rng.set_stream(seed.trial_index);
    rng
}

/// Draws every link gain independently as Exponential(mean λ_ℓ).
pub fn draw_realization(params: &SystemParams, seed: TrialSeed) -> ChannelRealization {
    let mut rng = trial_rng(seed);
    draw_with(params, &mut rng)
}

pub(crate) fn draw_with(params: &SystemParams, rng: &mut impl Rng) -> ChannelRealization {
    let mut g_hat = LinkValues::uniform(0.0);
    for link in Link::ALL {
        let u: f64 = rng.random();
        g_hat[link] = -params.lambda[link] * (-u).ln_1p();
    }
    ChannelRealization { g_hat }
}
