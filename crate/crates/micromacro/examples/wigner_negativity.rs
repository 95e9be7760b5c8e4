//! Signed Wigner value at the origin of the amplified single-photon mode
//! under loss. Negativity survives any gain as long as eta > 1/2, but its
//! magnitude decays exponentially with gain, which is what ultimately
//! starves the correlation tests.
//!
//! ```bash
//! cargo run --example wigner_negativity
//! ```

use micromacro::{chsh_parameter_optimal, wigner_origin_lossy, AmplifierParams, Channel};

fn main() {
    println!("W(0) for the lossy amplified photon (negative = nonclassical)");
    print!("{:>6}", "g\\eta");
    let etas = [1.0, 0.9, 0.8, 0.71, 0.6, 0.5, 0.4];
    for eta in etas {
        print!(" {eta:>9.2}");
    }
    println!();
    for g in [0.0, 0.25, 0.5, 0.75, 1.0, 1.5] {
        let params = AmplifierParams::with_gain(g).unwrap();
        print!("{g:>6.2}");
        for eta in etas {
            let w = wigner_origin_lossy(&params, &Channel::new(eta).unwrap());
            print!(" {w:>9.5}");
        }
        println!();
    }
    println!(
        "(pure state value is -2/pi = {:.5}; sign flips at eta = 1/2 for g = 0)",
        -2.0 / std::f64::consts::PI
    );

    println!();
    println!("wherever the CHSH test still violates, W(0) is negative:");
    for (g, eta) in [(0.0, 0.75), (0.5, 0.85), (1.0, 0.95)] {
        let params = AmplifierParams::with_gain(g).unwrap();
        let channel = Channel::new(eta).unwrap();
        let b = chsh_parameter_optimal(&params, &channel);
        let w = wigner_origin_lossy(&params, &channel);
        println!(
            "  g = {:.2}, eta = {:.2}: B_eta = {:.4} ({}), W(0) = {:+.5}",
            g,
            eta,
            b.value,
            if b.violated {
                "violated"
            } else {
                "no violation"
            },
            w
        );
    }
}
