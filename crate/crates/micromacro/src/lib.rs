//! Hybrid micro-macro entanglement tests for an amplified single photon.
//!
//! A single photon of a polarization-entangled pair is amplified into a
//! multiphoton field; entanglement between the remaining photon and the
//! macroscopic beam is probed by combining qubit polarization measurements
//! with displaced-parity (Wigner-function) measurements on the field. This
//! crate evaluates:
//!
//! - the CHSH-based parameter `B` and its lossy decay `B_eta = B L(g, eta)`,
//! - the loss-compensated entanglement witness `W_eta = h(eta) B_eta`,
//! - the detection-efficiency and gain thresholds where violation is lost,
//! - the lossy Wigner negativity of the amplified mode at the origin,
//!
//! through exact closed forms ([`phase_space`], [`inequality`]), and
//! cross-validates every closed form against an independent truncated
//! Fock-space oracle ([`fock_oracle`], [`crosscheck`]). Parameter sweeps and
//! threshold contours live in [`sweep`], deterministic CSV/JSON emission in
//! [`output`].
//!
//! Start with the runnable examples (`cargo run --example chsh_violation`)
//! or the `micromacro` CLI.

pub mod crosscheck;
pub mod domain;
pub mod fock_oracle;
pub mod inequality;
pub mod output;
pub mod phase_space;
pub mod quad;
pub mod sweep;

pub use domain::{
    AmplifierParams, Channel, DomainError, MeasurementSettings, PhasePoint, PolarizationAngle,
};
pub use inequality::{
    chsh_parameter, chsh_parameter_optimal, eta_threshold_chsh, eta_threshold_witness,
    gain_threshold_chsh, optimal_settings, witness_correction, witness_parameter,
    witness_parameter_optimal, TestResult, ThresholdOutcome, WitnessCorrection,
};
pub use phase_space::{
    correlator_convolved, correlator_injected, correlator_lossless, correlator_lossy,
    loss_function, rotate_mode_amplitudes, rotate_quadratures, two_mode_correlator_q,
    wigner_amplified_two_mode, wigner_origin_lossy, Branch, CorrelatorValue, RotatedQuadratures,
};
