//! Simulation toolkit for lossy Gaussian boson sampling with
//! photon-loss mitigation by post-selection.
//!
//! The crate covers four layers:
//!
//! - photon-number statistics of squeezed and cat inputs ([`fock`],
//!   [`pmf`]);
//! - exact brute-force simulation of small linear-optical networks,
//!   with and without loss, by three independent routes ([`linops`],
//!   [`statevec`], [`distribution`], [`permanent`], [`hafnian`]);
//! - loss and detector imperfection models ([`loss`]);
//! - the post-selection policy that trades sample count for an improved
//!   equivalent transmission, plus the classical-simulability bound it
//!   helps to beat ([`postselect`], [`nonclassical`]).
//!
//! The crate is deterministic throughout: random quantities take explicit
//! seeds, and the `parallel` feature (on by default) only distributes
//! independent work items, never changes results.

pub mod distribution;
pub mod error;
mod exec;
pub mod fock;
pub mod hafnian;
pub mod linalg;
pub mod linops;
pub mod loss;
pub mod nonclassical;
pub mod patterns;
pub mod permanent;
pub mod pmf;
pub mod postselect;
pub mod statevec;

pub use distribution::{
    hafnian_output_probability, lossless_output_distribution, lossless_pattern_probability,
    lossy_output_distribution, lossy_output_distribution_per_mode,
    lossy_output_distribution_thinned, PatternDistribution, PatternSampler,
};
pub use error::{GbsError, Result};
pub use fock::{
    cat_photon_pmf, pmf_mode, smss_amplitudes, smss_photon_pmf, total_photon_pmf, CatInput,
    SqueezerBank,
};
pub use hafnian::hafnian;
pub use linops::{
    embed_per_mode_loss, embed_uniform_loss, haar_random_unitary, transition_amplitude,
    Interferometer,
};
pub use loss::{
    apply_detector_model, compose_efficiencies, dark_count_equivalent_rate,
    dark_count_rate_bound, split_nonuniform_loss, DetectionOutcome, DetectorModel, LossModel,
    LossSplit,
};
pub use nonclassical::{
    classical_simulability_lhs, depth_tradeoff, epsilon0, postselected_epsilon0, verdict,
    SimulabilityVerdict, TestParameters,
};
pub use patterns::{patterns_up_to, patterns_with_total, OutputPattern};
pub use permanent::permanent;
pub use pmf::{binomial_thin, Pmf};
pub use postselect::{
    apply_postselection, build_policy, build_policy_cat, build_policy_per_mode,
    cat_post_selection_probability, default_cutoff_from_records, equivalent_transmission,
    mapping_ratio, max_equivalent_transmission, post_selection_probability,
    post_selection_probability_nonuniform, yield_fraction, PolicyVariant, PostSelectionPolicy,
    SampleRecord, YieldEstimate,
};
pub use statevec::{evolve_squeezed_input, FockStateVector};
