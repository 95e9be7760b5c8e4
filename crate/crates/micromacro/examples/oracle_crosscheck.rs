//! Cross-engine falsification run: the closed forms against the truncated
//! Fock-space oracle at a lossy working point, plus a direct look at the
//! oracle's building blocks.
//!
//! ```bash
//! cargo run --release --example oracle_crosscheck
//! ```

use micromacro::crosscheck::cross_check;
use micromacro::fock_oracle::{
    build_amplified_state, default_truncation, oracle_correlator, wigner_origin_converged,
};
use micromacro::{
    correlator_lossy, wigner_origin_lossy, AmplifierParams, Channel, PhasePoint, PolarizationAngle,
};

fn main() {
    let params = AmplifierParams::with_gain(0.8).unwrap();
    let channel = Channel::new(0.75).unwrap();

    println!(
        "truncation for g = {}: {} Fock levels (doubled until expectations settle)",
        params.gain(),
        default_truncation(params.gain())
    );
    let state = build_amplified_state(
        &params,
        PolarizationAngle::zero(),
        default_truncation(params.gain()),
    )
    .unwrap();
    println!(
        "amplified state: <n_injected> = {:.6} (expected {:.6}), <n_orthogonal> = {:.6} (expected {:.6})",
        state.mode_photon_expectation(0),
        params.mean_macro_photons(),
        state.mode_photon_expectation(1),
        params.mean_photon_pairs(),
    );

    let point = PhasePoint::new(0.3, -0.2).unwrap();
    let chi = PolarizationAngle::new(0.6).unwrap();
    let phi = PolarizationAngle::new(0.1).unwrap();
    let oracle = oracle_correlator(point, chi, phi, &params, &channel).unwrap();
    let closed = correlator_lossy(point, chi, phi, &params, &channel).value();
    println!();
    println!("one lossy correlator, two engines:");
    println!("  closed form : {closed:.15}");
    println!("  Fock oracle : {oracle:.15}");

    let w_closed = wigner_origin_lossy(&params, &channel);
    let w_oracle = wigner_origin_converged(&params, &channel).unwrap();
    println!("lossy Wigner origin, two engines:");
    println!("  closed form : {w_closed:.15}");
    println!("  Fock oracle : {w_oracle:.15}");

    println!();
    println!("randomized cross-check (10 tuples):");
    let report = cross_check(&params, &channel, 10, 20260810).unwrap();
    for q in &report.quantities {
        println!(
            "  {:<22} max |closed - oracle| = {:.3e}  ({} samples)",
            q.quantity, q.max_abs_discrepancy, q.samples
        );
    }
    println!(
        "verdict at 1e-6: {}",
        if report.passes(1e-6) {
            "PASS"
        } else {
            "FALSIFIED"
        }
    );
}
