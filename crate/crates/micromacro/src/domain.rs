//! Domain types and numeric conventions shared by every other module.
//!
//! Conventions fixed here and used everywhere else:
//! - quadratures are dimensionless with `alpha = X + i P` and Wigner
//!   normalization `∫∫ W dX dP = 1`, so `<Pi(alpha)> = (pi/2) W(alpha)`;
//! - polarization angles are equatorial phases in radians, stored reduced
//!   modulo 2π (every physical quantity downstream is invariant under the
//!   reduction);
//! - `eta = 0` is rejected at construction: the witness correction and the
//!   loss-convolution kernel both degenerate there and the channel carries
//!   no signal.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

/// Validation failure for a domain quantity. The variant names the offending
/// field so the CLI can report it directly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("g: nonlinear gain must be finite and >= 0, got {0}")]
    Gain(f64),
    #[error("p: injection efficiency must lie in [0, 1], got {0}")]
    Injection(f64),
    #[error("eta: transmittivity must lie in (0, 1], got {0}")]
    Transmittivity(f64),
    #[error("{0}: quadrature must be finite, got {1}")]
    Quadrature(&'static str, f64),
    #[error("{0}: angle must be finite, got {1}")]
    Angle(&'static str, f64),
    #[error("{0}")]
    Grid(String),
}

/// Amplifier description: nonlinear gain `g` and single-photon injection
/// efficiency `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierParams {
    g: f64,
    p: f64,
}

impl AmplifierParams {
    pub fn new(g: f64, p: f64) -> Result<Self, DomainError> {
        if !g.is_finite() || g < 0.0 {
            return Err(DomainError::Gain(g));
        }
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(DomainError::Injection(p));
        }
        Ok(Self { g, p })
    }

    /// Ideal injection (`p = 1`).
    pub fn with_gain(g: f64) -> Result<Self, DomainError> {
        Self::new(g, 1.0)
    }

    pub fn gain(&self) -> f64 {
        self.g
    }

    pub fn injection(&self) -> f64 {
        self.p
    }

    /// Mean photon-pair number of the amplifier, `n̄ = sinh²(g)`.
    pub fn mean_photon_pairs(&self) -> f64 {
        self.g.sinh().powi(2)
    }

    /// Mean photon number of the amplified injected polarization mode,
    /// `<n> = 3 n̄ + 1`. The orthogonal mode carries a further `n̄` photons of
    /// squeezed vacuum; that count is `mean_photon_pairs`.
    pub fn mean_macro_photons(&self) -> f64 {
        3.0 * self.mean_photon_pairs() + 1.0
    }
}

/// Detection/loss channel of transmittivity `eta`, modeled as a beam
/// splitter tapping the measured mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    eta: f64,
}

impl Channel {
    pub fn new(eta: f64) -> Result<Self, DomainError> {
        if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
            return Err(DomainError::Transmittivity(eta));
        }
        Ok(Self { eta })
    }

    pub fn lossless() -> Self {
        Self { eta: 1.0 }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// A point of the single-mode phase space, `alpha = X + i P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    x: f64,
    p: f64,
}

impl PhasePoint {
    pub fn new(x: f64, p: f64) -> Result<Self, DomainError> {
        if !x.is_finite() {
            return Err(DomainError::Quadrature("x", x));
        }
        if !p.is_finite() {
            return Err(DomainError::Quadrature("p", p));
        }
        Ok(Self { x, p })
    }

    pub fn origin() -> Self {
        Self { x: 0.0, p: 0.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn amplitude(&self) -> Complex64 {
        Complex64::new(self.x, self.p)
    }
}

/// Equatorial polarization phase in radians, reduced to `[0, 2π)`.
///
/// Correlators depend on angles only through `cos[2(χ−φ)]` and through
/// quadrature rotations by `χ/2` that enter squared, so the reduction never
/// changes a physical result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationAngle {
    theta: f64,
}

impl PolarizationAngle {
    pub fn new(theta: f64) -> Result<Self, DomainError> {
        if !theta.is_finite() {
            return Err(DomainError::Angle("theta", theta));
        }
        Ok(Self {
            theta: theta.rem_euclid(TAU),
        })
    }

    pub fn zero() -> Self {
        Self { theta: 0.0 }
    }

    pub fn radians(&self) -> f64 {
        self.theta
    }
}

/// The four-setting tuple of a CHSH or witness evaluation: polarizations
/// `(φ, φ')` on the single-photon mode, polarizations `(χ, χ')` and phase-
/// space points `(α, α')` on the multiphoton mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSettings {
    pub phi: PolarizationAngle,
    pub phi_prime: PolarizationAngle,
    pub chi: PolarizationAngle,
    pub chi_prime: PolarizationAngle,
    pub alpha: PhasePoint,
    pub alpha_prime: PhasePoint,
}
