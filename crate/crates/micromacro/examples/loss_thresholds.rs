//! Threshold searches: the detection efficiency below which each test goes
//! blind at fixed gain, and the gain above which the CHSH test goes blind
//! at fixed efficiency.
//!
//! ```bash
//! cargo run --example loss_thresholds
//! ```

use micromacro::{
    eta_threshold_chsh, eta_threshold_witness, gain_threshold_chsh, AmplifierParams, Channel,
    ThresholdOutcome,
};

fn describe(outcome: ThresholdOutcome) -> String {
    match outcome {
        ThresholdOutcome::Crossing(v) => format!("{v:.9}"),
        ThresholdOutcome::NeverViolated => "never violated".into(),
        ThresholdOutcome::AlwaysViolated => "always violated".into(),
    }
}

fn main() {
    let tol = 1e-9;

    println!("efficiency thresholds (smallest eta with a violation)");
    println!(
        "{:>6} {:>18} {:>18}",
        "g", "eta_lim (CHSH)", "eta_lim (witness)"
    );
    for g in [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0] {
        let params = AmplifierParams::with_gain(g).unwrap();
        println!(
            "{:>6.2} {:>18} {:>18}",
            g,
            describe(eta_threshold_chsh(&params, tol)),
            describe(eta_threshold_witness(&params, tol)),
        );
    }
    println!(
        "(CHSH floor at g = 0 is 1/sqrt(2) = {:.9})",
        1.0 / 2.0_f64.sqrt()
    );

    println!();
    println!("gain thresholds for the CHSH test");
    println!("{:>6} {:>18}", "eta", "g_lim");
    for eta in [1.0, 0.95, 0.9, 0.85, 0.8, 0.75, 0.71, 0.7] {
        let channel = Channel::new(eta).unwrap();
        println!(
            "{:>6.2} {:>18}",
            eta,
            describe(gain_threshold_chsh(&channel, 1.0, tol))
        );
    }

    println!();
    println!("imperfect injection shrinks everything (g = 0):");
    for p in [1.0, 0.9, 0.75, 1.0 / 2.0_f64.sqrt(), 0.5] {
        let params = AmplifierParams::new(0.0, p).unwrap();
        println!(
            "  p = {:>5.3}: eta_lim(CHSH) = {}",
            p,
            describe(eta_threshold_chsh(&params, tol))
        );
    }
}
