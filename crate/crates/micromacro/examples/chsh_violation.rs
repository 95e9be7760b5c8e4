//! Maximal CHSH violation is independent of the amplifier gain in the
//! lossless case, and decays through the loss function once detection is
//! inefficient.
//!
//! ```bash
//! cargo run --example chsh_violation
//! ```

use micromacro::{
    chsh_parameter, chsh_parameter_optimal, optimal_settings, AmplifierParams, Channel,
};

fn main() {
    let settings = optimal_settings();
    println!("lossless CHSH parameter at the canonical settings");
    println!("{:>6} {:>10} {:>22}", "g", "<n>", "B");
    for g in [0.0, 0.5, 1.0, 1.5, 2.0] {
        let params = AmplifierParams::with_gain(g).unwrap();
        let b = chsh_parameter(&settings, &params, &Channel::lossless());
        println!(
            "{:>6.2} {:>10.4} {:>22.16}",
            g,
            params.mean_macro_photons(),
            b.value
        );
    }
    println!(
        "(2*sqrt(2) = {:.16}; the macro part can be arbitrarily bright)",
        2.0_f64.sqrt() * 2.0
    );

    println!();
    println!("decay under detection inefficiency, g = 1");
    println!("{:>6} {:>22} {:>9}", "eta", "B_eta", "violated");
    let params = AmplifierParams::with_gain(1.0).unwrap();
    for eta in [1.0, 0.98, 0.95, 0.933, 0.9, 0.8] {
        let channel = Channel::new(eta).unwrap();
        let b = chsh_parameter_optimal(&params, &channel);
        println!("{:>6.3} {:>22.16} {:>9}", eta, b.value, b.violated);
    }
}
