//! Closed-form phase-space quantities for the amplified singlet: two-mode
//! Wigner functions, the qubit-CV correlator in its lossless, lossy and
//! injection-degraded variants, the loss function, and the lossy Wigner
//! value at the origin.
//!
//! All functions here are pure and cheap; the numerical-quadrature paths
//! ([`correlator_convolved`] and friends) exist only to verify the closed
//! forms and are never used by sweeps.

use num_complex::Complex64;

use crate::domain::{AmplifierParams, Channel, PhasePoint, PolarizationAngle};
use crate::quad::{self, QuadratureError, QuadratureSpec};

/// A correlator sample. The modulus never exceeds 1: it is the expectation
/// of a product of two operators each bounded by 1 in operator norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorValue(f64);

impl CorrelatorValue {
    pub(crate) fn new(value: f64) -> Self {
        debug_assert!(
            value.abs() <= 1.0 + 1e-9,
            "correlator out of bounds: {value}"
        );
        Self(value)
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl From<CorrelatorValue> for f64 {
    fn from(v: CorrelatorValue) -> f64 {
        v.0
    }
}

/// Quadratures rotated by half the polarization angle of the measured mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedQuadratures {
    pub x_bar: f64,
    pub p_bar: f64,
}

/// Which amplified branch a two-mode Wigner function describes: the
/// amplified injected photon or the amplified orthogonal one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Injected,
    Orthogonal,
}

/// `X̄ = X cos(χ/2) − P sin(χ/2)`, `P̄ = X sin(χ/2) + P cos(χ/2)`.
pub fn rotate_quadratures(point: PhasePoint, chi: PolarizationAngle) -> RotatedQuadratures {
    let (s, c) = (chi.radians() / 2.0).sin_cos();
    RotatedQuadratures {
        x_bar: point.x() * c - point.p() * s,
        p_bar: point.x() * s + point.p() * c,
    }
}

/// Rotates mode amplitudes from the measurement basis `χ` to the state
/// basis `φ`:
///
/// ```text
/// α_φ  = e^{iδ/2} [α_χ  cos δ − i α_χ⊥ sin δ]
/// α_φ⊥ = e^{iδ/2} [α_χ⊥ cos δ − i α_χ  sin δ],   δ = χ − φ.
/// ```
pub fn rotate_mode_amplitudes(
    a_chi: Complex64,
    a_chi_perp: Complex64,
    chi: PolarizationAngle,
    phi: PolarizationAngle,
) -> (Complex64, Complex64) {
    let delta = chi.radians() - phi.radians();
    let phase = Complex64::from_polar(1.0, delta / 2.0);
    let (s, c) = delta.sin_cos();
    let i = Complex64::i();
    (
        phase * (a_chi * c - i * a_chi_perp * s),
        phase * (a_chi_perp * c - i * a_chi * s),
    )
}

/// Quadratic form of the mode carrying polarization angle `beta`:
/// `Z(α) = (1 + 2S²)|α|² ∓ 2CS Re(α² e^{iβ})`, minus sign for the mode
/// that carries the injected photon, plus sign for its orthogonal partner.
fn mode_quadratic_form(a: Complex64, g: f64, beta: f64, orthogonal: bool) -> f64 {
    let s = g.sinh();
    let c = g.cosh();
    let cross = 2.0 * c * s * (a * a * Complex64::from_polar(1.0, beta)).re;
    let iso = (1.0 + 2.0 * s * s) * a.norm_sqr();
    if orthogonal {
        iso + cross
    } else {
        iso - cross
    }
}

/// Two-mode Wigner function of the amplified single-photon state, evaluated
/// at the already-rotated mode amplitudes `(α_φ, α_φ⊥)`.
///
/// Both branches share the Gaussian envelope
/// `exp(−2[Z_φ(α_φ) + Z_φ⊥(α_φ⊥)])`; the branch selects which mode carries
/// the single-photon prefactor `4Z − 1`. The prefactor uses the same
/// quadratic form as the envelope for its mode, which is what makes each
/// branch an exact product of a squeezed photon and a squeezed vacuum.
pub fn wigner_amplified_two_mode(
    params: &AmplifierParams,
    phi: PolarizationAngle,
    a_phi: Complex64,
    a_phi_perp: Complex64,
    branch: Branch,
) -> f64 {
    let g = params.gain();
    let beta = phi.radians();
    let z_inj = mode_quadratic_form(a_phi, g, beta, false);
    let z_ort = mode_quadratic_form(a_phi_perp, g, beta, true);
    let envelope = (-2.0 * (z_inj + z_ort)).exp();
    let prefactor = match branch {
        Branch::Injected => 4.0 * z_inj - 1.0,
        Branch::Orthogonal => 4.0 * z_ort - 1.0,
    };
    4.0 / (std::f64::consts::PI * std::f64::consts::PI) * prefactor * envelope
}

/// Two-mode correlator `Q(α_χ, α_χ⊥, χ; φ)`: displaced parity measured on
/// both polarization modes of the macro part,
/// `Q = (π²/8) [W_φ⊥(rotated args) − W_φ(rotated args)]`.
pub fn two_mode_correlator_q(
    params: &AmplifierParams,
    alpha_chi: PhasePoint,
    alpha_chi_perp: PhasePoint,
    chi: PolarizationAngle,
    phi: PolarizationAngle,
) -> f64 {
    let (a_phi, a_phi_perp) =
        rotate_mode_amplitudes(alpha_chi.amplitude(), alpha_chi_perp.amplitude(), chi, phi);
    let pi2_8 = std::f64::consts::PI * std::f64::consts::PI / 8.0;
    pi2_8
        * (wigner_amplified_two_mode(params, phi, a_phi, a_phi_perp, Branch::Orthogonal)
            - wigner_amplified_two_mode(params, phi, a_phi, a_phi_perp, Branch::Injected))
}

/// Lossless qubit-CV correlator
/// `C = cos[2(χ−φ)] (1 − Z) e^{−Z}`, `Z = 2(e^{−2g} X̄² + e^{2g} P̄²)`.
///
/// At the origin this reduces to `cos[2(χ−φ)]` for every gain.
pub fn correlator_lossless(
    point: PhasePoint,
    chi: PolarizationAngle,
    phi: PolarizationAngle,
    params: &AmplifierParams,
) -> CorrelatorValue {
    let rq = rotate_quadratures(point, chi);
    let g = params.gain();
    let z = 2.0 * ((-2.0 * g).exp() * rq.x_bar * rq.x_bar + (2.0 * g).exp() * rq.p_bar * rq.p_bar);
    let angle = 2.0 * (chi.radians() - phi.radians());
    CorrelatorValue::new(angle.cos() * (1.0 - z) * (-z).exp())
}

/// Loss function `L(g, η) = η[1 + 2n̄(1−η)] / (1 + 4η(1−η)n̄)^{3/2}`,
/// the damping of the maximal test value under detection efficiency `η`.
pub fn loss_function(params: &AmplifierParams, channel: &Channel) -> f64 {
    let nbar = params.mean_photon_pairs();
    let eta = channel.eta();
    eta * (1.0 + 2.0 * nbar * (1.0 - eta)) / (1.0 + 4.0 * eta * (1.0 - eta) * nbar).powf(1.5)
}

/// Lossy correlator in closed form, with
/// `M = η e^{2g} + (1−η)`, `N = η e^{−2g} + (1−η)` (note `MN = 1 + 4η(1−η)n̄`):
///
/// ```text
/// C_η = cos[2(χ−φ)] e^{−2(X̄²/M + P̄²/N)} / sqrt(MN)
///       × {1 − (1−η)(1+2ηn̄)/(MN) − 2η[e^{2g} X̄²/M² + e^{−2g} P̄²/N²]}
/// ```
///
/// At the origin it equals `cos[2(χ−φ)] · L(g, η)`; at `η = 1` it reduces
/// pointwise to [`correlator_lossless`].
pub fn correlator_lossy(
    point: PhasePoint,
    chi: PolarizationAngle,
    phi: PolarizationAngle,
    params: &AmplifierParams,
    channel: &Channel,
) -> CorrelatorValue {
    let rq = rotate_quadratures(point, chi);
    let g = params.gain();
    let eta = channel.eta();
    let nbar = params.mean_photon_pairs();
    let e2g = (2.0 * g).exp();
    let em2g = (-2.0 * g).exp();
    let m = eta * e2g + (1.0 - eta);
    let n = eta * em2g + (1.0 - eta);
    // algebraically M*N; this arrangement is exactly 1 in the lossless limit
    let mn = 1.0 + 4.0 * eta * (1.0 - eta) * nbar;
    let x2 = rq.x_bar * rq.x_bar;
    let p2 = rq.p_bar * rq.p_bar;
    let envelope = (-2.0 * (x2 / m + p2 / n)).exp() / mn.sqrt();
    let brace = 1.0
        - (1.0 - eta) * (1.0 + 2.0 * eta * nbar) / mn
        - 2.0 * eta * (e2g * x2 / (m * m) + em2g * p2 / (n * n));
    let angle = 2.0 * (chi.radians() - phi.radians());
    CorrelatorValue::new(angle.cos() * envelope * brace)
}

/// Lossy correlator evaluated as the Gaussian convolution of the lossless
/// one. Verification path only: confirms [`correlator_lossy`] by quadrature.
///
/// The kernel is isotropic, so the integral is carried out in the
/// `χ/2`-rotated frame where the lossless correlator is axis-aligned; the
/// spec extent rule `L = max(6, 6e^g)` then applies to the anti-squeezed
/// axis.
pub fn correlator_convolved(
    point: PhasePoint,
    chi: PolarizationAngle,
    phi: PolarizationAngle,
    params: &AmplifierParams,
    channel: &Channel,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    let rq = rotate_quadratures(point, chi);
    let g = params.gain();
    let eta = channel.eta();
    if eta >= 1.0 {
        // Kernel degenerates to a delta.
        return Ok(correlator_lossless(point, chi, phi, params).value());
    }
    let cos_term = (2.0 * (chi.radians() - phi.radians())).cos();
    let sqrt_eta = eta.sqrt();
    let norm = 2.0 / (std::f64::consts::PI * (1.0 - eta));
    let integrand = move |u: f64, v: f64| {
        let z = 2.0 * ((-2.0 * g).exp() * u * u + (2.0 * g).exp() * v * v);
        let lossless = (1.0 - z) * (-z).exp();
        let dx = rq.x_bar - sqrt_eta * u;
        let dp = rq.p_bar - sqrt_eta * v;
        lossless * (-2.0 * (dx * dx + dp * dp) / (1.0 - eta)).exp()
    };
    // The kernel bounds the integrand: outside 12 kernel widths of its
    // center the product is below e^{-72} regardless of the correlator.
    // Restricting the window to that reach (clamped to the configured
    // extents) keeps the node count meaningful when the kernel is narrow.
    let reach = 12.0 * ((1.0 - eta) / (4.0 * eta)).sqrt();
    let window = |center: f64, half_extent: f64| -> (f64, f64) {
        let lo = (center - reach).max(-half_extent);
        let hi = (center + reach).min(half_extent);
        if lo < hi {
            (lo, hi)
        } else {
            (-half_extent, half_extent)
        }
    };
    let x_range = window(rq.x_bar / sqrt_eta, spec.half_extent_x);
    let p_range = window(rq.p_bar / sqrt_eta, spec.half_extent_p);
    Ok(cos_term * norm * quad::adaptive_integral_2d_on(&integrand, x_range, p_range, spec)?)
}

/// Injection-degraded correlator: the vacuum branch of an imperfect
/// injection carries no micro-macro correlation, so the correlator scales
/// by the injection probability, `C_{η,p} = p · C_η`.
pub fn correlator_injected(
    point: PhasePoint,
    chi: PolarizationAngle,
    phi: PolarizationAngle,
    params: &AmplifierParams,
    channel: &Channel,
) -> CorrelatorValue {
    CorrelatorValue::new(
        params.injection() * correlator_lossy(point, chi, phi, params, channel).value(),
    )
}

/// Signed Wigner value at the phase-space origin of the amplified injected
/// mode (a squeezed single photon) after transmission `η`.
///
/// Closed form obtained by convolving the reduced single-mode Wigner
/// function with the loss kernel, with `M̃ = η + (1−η)e^{2g}`,
/// `Ñ = η + (1−η)e^{−2g}`:
///
/// ```text
/// W_η(0) = (2/π) [(1−η)(e^{−2g}/Ñ + e^{2g}/M̃) − 1] / sqrt(M̃ Ñ)
/// ```
///
/// Injection efficiency does not enter: the quantity describes the amplified
/// single-photon state itself. Negativity is `max(0, −W_η(0))`.
pub fn wigner_origin_lossy(params: &AmplifierParams, channel: &Channel) -> f64 {
    let g = params.gain();
    let eta = channel.eta();
    let e2g = (2.0 * g).exp();
    let em2g = (-2.0 * g).exp();
    let mt = eta + (1.0 - eta) * e2g;
    let nt = eta + (1.0 - eta) * em2g;
    2.0 / std::f64::consts::PI * ((1.0 - eta) * (em2g / nt + e2g / mt) - 1.0) / (mt * nt).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::tensor_integral_2d;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn params(g: f64) -> AmplifierParams {
        AmplifierParams::with_gain(g).unwrap()
    }

    fn angle(t: f64) -> PolarizationAngle {
        PolarizationAngle::new(t).unwrap()
    }

    fn point(x: f64, p: f64) -> PhasePoint {
        PhasePoint::new(x, p).unwrap()
    }

    #[test]
    fn quadrature_rotation_examples() {
        let r = rotate_quadratures(point(1.0, 0.0), angle(0.0));
        assert_eq!((r.x_bar, r.p_bar), (1.0, 0.0));

        let r = rotate_quadratures(point(1.0, 0.0), angle(PI));
        assert_abs_diff_eq!(r.x_bar, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.p_bar, 1.0, epsilon = 1e-15);

        let r = rotate_quadratures(point(0.3, -0.4), angle(PI / 2.0));
        assert_relative_eq!(r.x_bar, 0.494_974_746_830_583_3, max_relative = 1e-12);
        assert_relative_eq!(r.p_bar, -0.07071067811865475, max_relative = 1e-12);
    }

    #[test]
    fn quadrature_rotation_preserves_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let p = point(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let chi = angle(rng.random_range(0.0..2.0 * PI));
            let r = rotate_quadratures(p, chi);
            assert_relative_eq!(
                r.x_bar * r.x_bar + r.p_bar * r.p_bar,
                p.x() * p.x() + p.p() * p.p(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn mode_rotation_identity_and_quarter_turn() {
        let a = Complex64::new(0.4, -0.2);
        let b = Complex64::new(-0.1, 0.7);
        let (ra, rb) = rotate_mode_amplitudes(a, b, angle(0.6), angle(0.6));
        assert_abs_diff_eq!((ra - a).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((rb - b).norm(), 0.0, epsilon = 1e-15);

        // chi - phi = pi/2 sends (1, 0) to (0, e^{i pi/4} (-i)).
        let (ra, rb) = rotate_mode_amplitudes(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            angle(PI / 2.0),
            angle(0.0),
        );
        assert_abs_diff_eq!(ra.norm(), 0.0, epsilon = 1e-15);
        let expected = Complex64::from_polar(1.0, PI / 4.0) * Complex64::new(0.0, -1.0);
        assert_abs_diff_eq!((rb - expected).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn mode_rotation_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let b = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let chi = angle(rng.random_range(0.0..2.0 * PI));
            let phi = angle(rng.random_range(0.0..2.0 * PI));
            let (ra, rb) = rotate_mode_amplitudes(a, b, chi, phi);
            assert_relative_eq!(
                ra.norm_sqr() + rb.norm_sqr(),
                a.norm_sqr() + b.norm_sqr(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn two_mode_wigner_anchors() {
        let zero = Complex64::new(0.0, 0.0);
        let w = wigner_amplified_two_mode(&params(0.0), angle(0.0), zero, zero, Branch::Injected);
        assert_relative_eq!(w, -4.0 / (PI * PI), max_relative = 1e-14);

        let w = wigner_amplified_two_mode(
            &params(0.0),
            angle(0.0),
            Complex64::new(1.0, 0.0),
            zero,
            Branch::Injected,
        );
        assert_relative_eq!(w, 12.0 / (PI * PI) * (-2.0f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(w, 0.16454797303325558, max_relative = 1e-12);
    }

    #[test]
    fn two_mode_wigner_normalization() {
        // Integrate in per-mode scaled coordinates that undo the squeezing,
        // so a fixed extent covers every gain tested.
        for &g in &[0.0, 0.5, 1.0] {
            let p = params(g);
            let phi = angle(0.0);
            let (eg, emg) = (g.exp(), (-g).exp());
            let inner = |x1: f64, p1: f64| {
                // injected mode wide along X, orthogonal mode wide along P
                let a1 = Complex64::new(eg * x1, emg * p1);
                tensor_integral_2d(
                    &|x2, p2| {
                        let a2 = Complex64::new(emg * x2, eg * p2);
                        wigner_amplified_two_mode(&p, phi, a1, a2, Branch::Injected)
                    },
                    5.0,
                    5.0,
                    40,
                )
            };
            let total = tensor_integral_2d(&inner, 5.0, 5.0, 40);
            assert_relative_eq!(total, 1.0, max_relative = 1e-6);
        }
    }

    #[test]
    fn q_frozen_values() {
        // alpha_perp = 0 with chi - phi = pi/4 makes the two branch
        // prefactors coincide, so Q vanishes identically there.
        let q = two_mode_correlator_q(
            &params(0.5),
            point(0.2, 0.1),
            point(0.0, 0.0),
            angle(PI / 4.0),
            angle(0.0),
        );
        assert_abs_diff_eq!(q, 0.0, epsilon = 1e-14);

        let q = two_mode_correlator_q(
            &params(0.5),
            point(0.2, 0.1),
            point(0.1, -0.05),
            angle(PI / 5.0),
            angle(0.1),
        );
        assert_relative_eq!(q, 0.10071854348787136, max_relative = 1e-12);
    }

    #[test]
    fn q_antisymmetric_under_branch_swap() {
        // Swapping which Wigner branch sits in each slot flips the bracket.
        let p = params(0.4);
        let phi = angle(0.3);
        let (a, b) = rotate_mode_amplitudes(
            Complex64::new(0.3, -0.2),
            Complex64::new(0.1, 0.4),
            angle(1.1),
            phi,
        );
        let wo = wigner_amplified_two_mode(&p, phi, a, b, Branch::Orthogonal);
        let wi = wigner_amplified_two_mode(&p, phi, a, b, Branch::Injected);
        let pi2_8 = PI * PI / 8.0;
        let q = pi2_8 * (wo - wi);
        let swapped = pi2_8 * (wi - wo);
        assert_relative_eq!(q, -swapped, max_relative = 1e-14);
    }

    #[test]
    fn q_covariant_under_common_angle_shift() {
        // Shifting every polarization angle by d while rotating the phase
        // points by -d/2 leaves Q unchanged.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let p = params(0.5);
        for _ in 0..50 {
            let a = Complex64::new(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6));
            let b = Complex64::new(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6));
            let chi = rng.random_range(0.0..2.0 * PI);
            let phi = rng.random_range(0.0..2.0 * PI);
            let d = rng.random_range(0.0..2.0 * PI);
            let rot = Complex64::from_polar(1.0, -d / 2.0);
            let (ar, br) = (a * rot, b * rot);
            let q1 = two_mode_correlator_q(
                &p,
                point(a.re, a.im),
                point(b.re, b.im),
                angle(chi),
                angle(phi),
            );
            let q2 = two_mode_correlator_q(
                &p,
                point(ar.re, ar.im),
                point(br.re, br.im),
                angle(chi + d),
                angle(phi + d),
            );
            assert_abs_diff_eq!(q1, q2, epsilon = 1e-12);
        }
    }

    #[test]
    fn closure_integral_reproduces_single_mode_correlator() {
        // (2/pi) ∫ Q d²α_χ⊥ = C for g in {0, 0.5}.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &g in &[0.0, 0.5] {
            let p = params(g);
            for _ in 0..2 {
                let a = point(rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7));
                let chi = angle(rng.random_range(0.0..2.0 * PI));
                let phi = angle(rng.random_range(0.0..2.0 * PI));
                let l = 6.0f64.max(6.0 * g.exp());
                let integral = tensor_integral_2d(
                    &|x, y| two_mode_correlator_q(&p, a, point(x, y), chi, phi),
                    l,
                    l,
                    160,
                );
                let expected = correlator_lossless(a, chi, phi, &p).value();
                assert_abs_diff_eq!(2.0 / PI * integral, expected, epsilon = 1e-4);
            }
        }
    }

    #[test]
    fn lossless_correlator_anchors() {
        // Origin: cos[2(chi-phi)] for any gain.
        for &g in &[0.0, 0.7, 1.5] {
            let c = correlator_lossless(PhasePoint::origin(), angle(0.4), angle(0.4), &params(g));
            assert_relative_eq!(c.value(), 1.0, max_relative = 1e-14);
            let c = correlator_lossless(
                PhasePoint::origin(),
                angle(PI / 4.0),
                angle(0.0),
                &params(g),
            );
            assert_abs_diff_eq!(c.value(), 0.0, epsilon = 1e-15);
        }
        let c = correlator_lossless(point(1.0, 0.0), angle(0.0), angle(0.0), &params(0.0));
        assert_relative_eq!(c.value(), -(-2.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(c.value(), -0.1353352832366127, max_relative = 1e-12);
    }

    #[test]
    fn lossless_main_text_and_appendix_groupings_agree() {
        // (1 - Z) cos e^{-Z} versus cos e^{-Z} [1 - Z]: same content, two
        // written arrangements; evaluated independently at random points.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3 {
            let g: f64 = rng.random_range(0.0..1.5);
            let x: f64 = rng.random_range(-1.0..1.0);
            let pq: f64 = rng.random_range(-1.0..1.0);
            let chi = rng.random_range(0.0..2.0 * PI);
            let phi = rng.random_range(0.0..2.0 * PI);
            let rq = rotate_quadratures(point(x, pq), angle(chi));
            let z = 2.0
                * ((-2.0 * g).exp() * rq.x_bar * rq.x_bar + (2.0 * g).exp() * rq.p_bar * rq.p_bar);
            let main_text = (1.0 - z) * (2.0 * (chi - phi)).cos() * (-z).exp();
            let appendix = (2.0 * (chi - phi)).cos() * (-z).exp() * (1.0 - z);
            let ours = correlator_lossless(point(x, pq), angle(chi), angle(phi), &params(g));
            assert_relative_eq!(ours.value(), main_text, max_relative = 1e-13);
            assert_relative_eq!(ours.value(), appendix, max_relative = 1e-13);
        }
    }

    #[test]
    fn origin_covariance_under_common_angle_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let g = rng.random_range(0.0..2.0);
            let chi = rng.random_range(0.0..2.0 * PI);
            let phi = rng.random_range(0.0..2.0 * PI);
            let d = rng.random_range(0.0..2.0 * PI);
            let c1 = correlator_lossless(PhasePoint::origin(), angle(chi), angle(phi), &params(g));
            let c2 = correlator_lossless(
                PhasePoint::origin(),
                angle(chi + d),
                angle(phi + d),
                &params(g),
            );
            assert_abs_diff_eq!(c1.value(), c2.value(), epsilon = 1e-12);
        }
    }

    #[test]
    fn loss_function_anchors() {
        for &g in &[0.0, 0.3, 1.0, 2.5] {
            assert_relative_eq!(
                loss_function(&params(g), &Channel::lossless()),
                1.0,
                max_relative = 1e-14
            );
        }
        assert_relative_eq!(
            loss_function(&params(0.0), &Channel::new(0.9).unwrap()),
            0.9,
            max_relative = 1e-14
        );
        // Independently derived value of L(1, 0.8).
        assert_relative_eq!(
            loss_function(&params(1.0), &Channel::new(0.8).unwrap()),
            0.48030476427490765,
            max_relative = 1e-12
        );
    }

    #[test]
    fn loss_function_decreases_with_gain_in_threshold_region() {
        // Monotone in g only where the threshold searches rely on it
        // (eta above ~0.71); for eta below 1/3 the loss function first rises.
        for &eta in &[0.72, 0.8, 0.9, 0.95, 0.99] {
            let ch = Channel::new(eta).unwrap();
            let mut prev = loss_function(&params(0.0), &ch);
            for i in 1..=60 {
                let l = loss_function(&params(0.05 * f64::from(i)), &ch);
                assert!(l < prev, "L not decreasing at eta={eta}, step {i}");
                prev = l;
            }
        }
    }

    #[test]
    fn lossy_reduces_to_lossless_at_unit_eta() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let g = rng.random_range(0.0..1.5);
            let pt = point(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
            let chi = angle(rng.random_range(0.0..2.0 * PI));
            let phi = angle(rng.random_range(0.0..2.0 * PI));
            let a = correlator_lossy(pt, chi, phi, &params(g), &Channel::lossless());
            let b = correlator_lossless(pt, chi, phi, &params(g));
            assert_abs_diff_eq!(a.value(), b.value(), epsilon = 1e-13);
        }
    }

    #[test]
    fn lossy_origin_equals_loss_function() {
        let ch = Channel::new(0.8).unwrap();
        let c = correlator_lossy(
            PhasePoint::origin(),
            angle(0.3),
            angle(0.3),
            &params(1.0),
            &ch,
        );
        assert_relative_eq!(c.value(), 0.48030476427490765, max_relative = 1e-12);
        for &(g, eta) in &[(0.0, 0.75), (0.6, 0.9), (1.3, 0.62)] {
            let ch = Channel::new(eta).unwrap();
            let p = params(g);
            let c = correlator_lossy(PhasePoint::origin(), angle(0.2), angle(0.2), &p, &ch);
            assert_relative_eq!(c.value(), loss_function(&p, &ch), max_relative = 1e-13);
        }
    }

    #[test]
    fn lossy_frozen_point() {
        let c = correlator_lossy(
            point(0.3, 0.2),
            angle(PI / 3.0),
            angle(PI / 6.0),
            &params(0.5),
            &Channel::new(0.7).unwrap(),
        );
        assert_relative_eq!(c.value(), 0.14235999498544127, max_relative = 1e-12);
    }

    #[test]
    fn convolution_matches_closed_form() {
        let ch = Channel::new(0.7).unwrap();
        let p = params(0.5);
        let spec = QuadratureSpec::for_gain(0.5);
        let got = correlator_convolved(
            point(0.3, 0.2),
            angle(PI / 3.0),
            angle(PI / 6.0),
            &p,
            &ch,
            &spec,
        )
        .unwrap();
        assert_abs_diff_eq!(got, 0.14235999498544127, epsilon = 1e-4);
    }

    #[test]
    fn convolution_near_lossless_limit() {
        let ch = Channel::new(0.999).unwrap();
        let p = params(0.3);
        let pt = point(0.4, -0.2);
        let spec = QuadratureSpec::for_gain(0.3);
        let got = correlator_convolved(pt, angle(0.7), angle(0.1), &p, &ch, &spec).unwrap();
        let lossless = correlator_lossless(pt, angle(0.7), angle(0.1), &p).value();
        assert_abs_diff_eq!(got, lossless, epsilon = 1e-3);
    }

    #[test]
    fn convolution_kernel_normalization() {
        // Over the output variables the kernel integrates to exactly 1;
        // over the input variables the sqrt(eta) scaling leaves 1/eta.
        let eta: f64 = 0.8;
        let norm = 2.0 / (PI * (1.0 - eta));
        let spec = QuadratureSpec {
            half_extent_x: 8.0,
            half_extent_p: 8.0,
            initial_nodes: 32,
            max_nodes: 512,
            rel_tol: 1e-10,
        };
        let over_output = quad::adaptive_integral_2d(
            &|x, p| {
                let dx = x - eta.sqrt() * 0.3;
                let dp = p - eta.sqrt() * (-0.1);
                norm * (-2.0 * (dx * dx + dp * dp) / (1.0 - eta)).exp()
            },
            &spec,
        )
        .unwrap();
        assert_abs_diff_eq!(over_output, 1.0, epsilon = 1e-8);

        let over_input = quad::adaptive_integral_2d(
            &|xp, pp| {
                let dx = 0.3 - eta.sqrt() * xp;
                let dp = -0.1 - eta.sqrt() * pp;
                norm * (-2.0 * (dx * dx + dp * dp) / (1.0 - eta)).exp()
            },
            &spec,
        )
        .unwrap();
        assert_abs_diff_eq!(over_input, 1.0 / eta, epsilon = 1e-8);
    }

    #[test]
    fn injected_correlator_scaling() {
        let ch = Channel::new(0.85).unwrap();
        let pt = point(0.2, -0.4);
        let chi = angle(0.9);
        let phi = angle(0.3);
        let full = AmplifierParams::new(0.6, 1.0).unwrap();
        let degraded = AmplifierParams::new(0.6, 0.8).unwrap();
        let none = AmplifierParams::new(0.6, 0.0).unwrap();
        let base = correlator_lossy(pt, chi, phi, &full, &ch).value();
        assert_relative_eq!(
            correlator_injected(pt, chi, phi, &full, &ch).value(),
            base,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            correlator_injected(pt, chi, phi, &degraded, &ch).value(),
            0.8 * base,
            max_relative = 1e-14
        );
        assert_eq!(correlator_injected(pt, chi, phi, &none, &ch).value(), 0.0);

        // p = 0.8 at the origin with eta = 1 and chi = phi gives exactly p.
        let c = correlator_injected(
            PhasePoint::origin(),
            angle(0.0),
            angle(0.0),
            &AmplifierParams::new(0.4, 0.8).unwrap(),
            &Channel::lossless(),
        );
        assert_relative_eq!(c.value(), 0.8, max_relative = 1e-14);
    }

    #[test]
    fn correlators_stay_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10_000 {
            let g = rng.random_range(0.0..2.5);
            let p = rng.random_range(0.0..1.0);
            let eta = rng.random_range(0.05..1.0);
            let pt = point(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
            let chi = angle(rng.random_range(0.0..2.0 * PI));
            let phi = angle(rng.random_range(0.0..2.0 * PI));
            let ap = AmplifierParams::new(g, p).unwrap();
            let ch = Channel::new(eta).unwrap();
            assert!(correlator_lossless(pt, chi, phi, &ap).value().abs() <= 1.0 + 1e-12);
            assert!(correlator_lossy(pt, chi, phi, &ap, &ch).value().abs() <= 1.0 + 1e-12);
            assert!(correlator_injected(pt, chi, phi, &ap, &ch).value().abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn wigner_origin_anchors() {
        assert_relative_eq!(
            wigner_origin_lossy(&params(0.0), &Channel::lossless()),
            -2.0 / PI,
            max_relative = 1e-14
        );
        // g = 0 under loss: (2/pi)(1 - 2 eta).
        for &eta in &[0.25, 0.5, 0.75, 0.9] {
            let w = wigner_origin_lossy(&params(0.0), &Channel::new(eta).unwrap());
            assert_relative_eq!(w, 2.0 / PI * (1.0 - 2.0 * eta), epsilon = 1e-14);
        }
        assert_relative_eq!(
            wigner_origin_lossy(&params(0.0), &Channel::new(0.75).unwrap()),
            -1.0 / PI,
            max_relative = 1e-13
        );
        // Pure amplified photon keeps parity -1 at the origin for every gain.
        for &g in &[0.5, 1.0, 2.0] {
            assert_relative_eq!(
                wigner_origin_lossy(&params(g), &Channel::lossless()),
                -2.0 / PI,
                max_relative = 1e-13
            );
        }
        // Frozen cross-engine anchor.
        assert_relative_eq!(
            wigner_origin_lossy(&params(0.8), &Channel::new(0.9).unwrap()),
            -0.3500670116972373,
            max_relative = 1e-12
        );
    }

    #[test]
    fn wigner_origin_matches_quadrature_convolution() {
        // Independent route: numerically convolve the reduced squeezed
        // single-photon Wigner function with the loss kernel at the origin.
        for &(g, eta) in &[(0.5f64, 0.7f64), (1.0, 0.9), (0.8, 0.55)] {
            let norm = 2.0 / (PI * (1.0 - eta));
            let spec = QuadratureSpec::for_gain(g);
            let quad_value = quad::adaptive_integral_2d(
                &|x, p| {
                    let z = (-2.0 * g).exp() * x * x + (2.0 * g).exp() * p * p;
                    let w = 2.0 / PI * (4.0 * z - 1.0) * (-2.0 * z).exp();
                    w * norm * (-2.0 * eta * (x * x + p * p) / (1.0 - eta)).exp()
                },
                &spec,
            )
            .unwrap();
            let closed = wigner_origin_lossy(&params(g), &Channel::new(eta).unwrap());
            assert_abs_diff_eq!(quad_value, closed, epsilon = 1e-8);
        }
    }
}
