//! Observables computed from eigenvectors: moments `I_q`, dimensions
//! `D_q`, ensemble averages, spectral profiles, component histograms and
//! maximum-likelihood fits of the crossover parameter.
//!
//! Ensemble work is split into a per-member pass ([`MemberSummary`],
//! [`HistogramAccumulator`], [`FitAccumulator`]) and a reduction that runs in
//! member order, so eigenvectors never need to be held for a whole ensemble.

mod average;
mod fit;
mod histogram;
mod state;

pub use average::{
    ensemble_avg_dq, ensemble_avg_from_summaries, spectral_profile, spectral_profile_from_summaries, AveragedDimension,
    MemberSummary, ProfileRow, SpectralProfile, StateWindow,
};
pub use fit::{fit_epsilon, fit_epsilon_accumulated, EpsilonFit, FitAccumulator, DEFAULT_BRACKET};
pub use histogram::{component_histogram, ComponentHistogram, HistogramAccumulator, DEFAULT_BINS, DEFAULT_Y_RANGE};
pub use state::{component_weights, scaled_components, state_statistics, StateStatistics};
