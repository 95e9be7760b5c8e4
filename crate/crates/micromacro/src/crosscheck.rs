//! Cross-engine comparison of the closed-form phase-space quantities
//! against the Fock-space oracle at a single `(g, eta)` working point.
//! This is the falsification channel: a discrepancy above tolerance means
//! one of the two engines is wrong.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::domain::{AmplifierParams, Channel, PhasePoint, PolarizationAngle};
use crate::fock_oracle::{
    oracle_correlator, oracle_witness_correlator, wigner_origin_converged, OracleError,
};
use crate::inequality::witness_correction;
use crate::phase_space::{correlator_lossless, correlator_lossy, wigner_origin_lossy};

/// Largest absolute closed-form/oracle discrepancy observed for one
/// quantity.
#[derive(Debug, Clone, Serialize)]
pub struct QuantityReport {
    pub quantity: &'static str,
    pub max_abs_discrepancy: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub g: f64,
    pub eta: f64,
    pub tuples: usize,
    pub seed: u64,
    pub quantities: Vec<QuantityReport>,
}

impl CrossCheckReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.quantities
            .iter()
            .map(|q| q.max_abs_discrepancy)
            .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_discrepancy() < tol
    }
}

/// Compares the lossless, lossy and witness correlators plus the lossy
/// Wigner origin over `tuples` randomized `(point, chi, phi)` settings.
/// Points are drawn from `[-1.2, 1.2]^2`, angles uniformly on the circle;
/// the draw is fully determined by `seed`.
pub fn cross_check(
    params: &AmplifierParams,
    channel: &Channel,
    tuples: usize,
    seed: u64,
) -> Result<CrossCheckReport, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lossless_max = 0.0f64;
    let mut lossy_max = 0.0f64;
    let mut witness_max = 0.0f64;

    let lossless_channel = Channel::lossless();
    for _ in 0..tuples {
        let point = PhasePoint::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2))
            .expect("finite draw");
        let chi = PolarizationAngle::new(rng.random_range(0.0..std::f64::consts::TAU))
            .expect("finite draw");
        let phi = PolarizationAngle::new(rng.random_range(0.0..std::f64::consts::TAU))
            .expect("finite draw");

        let closed = correlator_lossless(point, chi, phi, params).value();
        let oracle = oracle_correlator(point, chi, phi, params, &lossless_channel)?;
        lossless_max = lossless_max.max((closed - oracle).abs());

        let closed = correlator_lossy(point, chi, phi, params, channel).value();
        let oracle = oracle_correlator(point, chi, phi, params, channel)?;
        lossy_max = lossy_max.max((closed - oracle).abs());

        let closed = witness_correction(channel).h * closed;
        let oracle = oracle_witness_correlator(point, chi, phi, params, channel)?;
        witness_max = witness_max.max((closed - oracle).abs());
    }

    let wigner_closed = wigner_origin_lossy(params, channel);
    let wigner_oracle = wigner_origin_converged(params, channel)?;

    Ok(CrossCheckReport {
        g: params.gain(),
        eta: channel.eta(),
        tuples,
        seed,
        quantities: vec![
            QuantityReport {
                quantity: "correlator_lossless",
                max_abs_discrepancy: lossless_max,
                samples: tuples,
            },
            QuantityReport {
                quantity: "correlator_lossy",
                max_abs_discrepancy: lossy_max,
                samples: tuples,
            },
            QuantityReport {
                quantity: "witness_correlator",
                max_abs_discrepancy: witness_max,
                samples: tuples,
            },
            QuantityReport {
                quantity: "wigner_origin",
                max_abs_discrepancy: (wigner_closed - wigner_oracle).abs(),
                samples: 1,
            },
        ],
    })
}
