//! The qubit-CV correlator across phase space: maximal at the origin,
//! Gaussian decay with a squeezing-skewed footprint that rotates with the
//! measured polarization.
//!
//! ```bash
//! cargo run --example correlator_landscape
//! ```

use micromacro::{
    correlator_lossless, correlator_lossy, loss_function, AmplifierParams, Channel, PhasePoint,
    PolarizationAngle,
};

fn main() {
    let zero = PolarizationAngle::zero();
    println!("lossless correlator along the X axis (chi = phi = 0)");
    print!("{:>6}", "g\\X");
    let xs = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0];
    for x in xs {
        print!(" {x:>8.2}");
    }
    println!();
    for g in [0.0, 0.5, 1.0] {
        let params = AmplifierParams::with_gain(g).unwrap();
        print!("{g:>6.2}");
        for x in xs {
            let c = correlator_lossless(PhasePoint::new(x, 0.0).unwrap(), zero, zero, &params);
            print!(" {:>8.4}", c.value());
        }
        println!();
    }
    println!("gain widens the footprint along X (the anti-squeezed direction) and");
    println!("narrows it along P; the node ring sits where the argument reaches 1/2.");

    println!();
    println!("detection loss damps the whole landscape, origin value = L(g, eta):");
    let params = AmplifierParams::with_gain(0.8).unwrap();
    for eta in [1.0, 0.9, 0.75, 0.6] {
        let channel = Channel::new(eta).unwrap();
        let c = correlator_lossy(PhasePoint::origin(), zero, zero, &params, &channel);
        println!(
            "  eta = {:.2}: C_eta(0,0) = {:.10}   L(g, eta) = {:.10}",
            eta,
            c.value(),
            loss_function(&params, &channel)
        );
    }
}
