//! Low-level numerics for the truncated Fock space: matrix exponentials of
//! banded generators applied to state vectors (scaled Taylor, exact for the
//! truncated generator to machine precision), loss Kraus vectors, and a
//! small Jacobi eigensolver used by the density-operator checks.

use num_complex::Complex64;

/// Applies `exp(G)` to `v` where `apply` computes `dst = G src`. The
/// generator is scaled by `2^-s` so its norm bound drops below 0.8, each
/// factor is summed by Taylor to machine precision, and the factor is
/// applied `2^s` times. For the anti-Hermitian generators used here the
/// scheme is backward-stable.
pub(crate) fn expm_apply<F>(apply: F, norm_bound: f64, v: &mut [Complex64])
where
    F: Fn(&[Complex64], &mut [Complex64]),
{
    let len = v.len();
    let steps = if norm_bound <= 0.8 {
        1u64
    } else {
        1u64 << ((norm_bound / 0.8).log2().ceil() as u32).min(40)
    };
    let scale = 1.0 / steps as f64;
    let mut term = vec![Complex64::ZERO; len];
    let mut next = vec![Complex64::ZERO; len];
    let mut acc = vec![Complex64::ZERO; len];
    for _ in 0..steps {
        acc.copy_from_slice(v);
        term.copy_from_slice(v);
        let acc_norm_sq: f64 = acc.iter().map(|z| z.norm_sqr()).sum();
        let mut threshold = 1e-32 * acc_norm_sq.max(1e-300);
        for k in 1..=80u32 {
            apply(&term, &mut next);
            let inv_k = scale / f64::from(k);
            let mut term_norm_sq = 0.0;
            for (t, n) in term.iter_mut().zip(&next) {
                *t = n * inv_k;
                term_norm_sq += t.norm_sqr();
            }
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
            if term_norm_sq < threshold {
                break;
            }
            // track growth of the partial sum so the cutoff stays relative
            threshold = 1e-32 * acc.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1e-300);
        }
        v.copy_from_slice(&acc);
    }
}

/// `exp(alpha a† − alpha* a) v`: the displacement of a single-mode vector.
pub(crate) fn displace_vector(alpha: Complex64, v: &mut [Complex64]) {
    let dim = v.len();
    if alpha == Complex64::ZERO {
        return;
    }
    let sqrt_n: Vec<f64> = (0..dim).map(|n| (n as f64).sqrt()).collect();
    let conj = alpha.conj();
    let apply = |src: &[Complex64], dst: &mut [Complex64]| {
        for n in 0..dim {
            let mut z = Complex64::ZERO;
            if n > 0 {
                z += alpha * sqrt_n[n] * src[n - 1];
            }
            if n + 1 < dim {
                z -= conj * sqrt_n[n + 1] * src[n + 1];
            }
            dst[n] = z;
        }
    };
    let bound = 2.0 * alpha.norm() * (dim as f64).sqrt();
    expm_apply(apply, bound, v);
}

/// `exp[(xi* a² − xi a†²)/2] v`: the single-mode squeezer.
pub(crate) fn squeeze_vector(xi: Complex64, v: &mut [Complex64]) {
    let dim = v.len();
    if xi == Complex64::ZERO {
        return;
    }
    let half_conj = 0.5 * xi.conj();
    let half = 0.5 * xi;
    let ladder: Vec<f64> = (0..dim)
        .map(|n| ((n as f64) * (n as f64 - 1.0)).max(0.0).sqrt())
        .collect();
    let apply = |src: &[Complex64], dst: &mut [Complex64]| {
        for n in 0..dim {
            let mut z = Complex64::ZERO;
            if n + 2 < dim {
                z += half_conj * ladder[n + 2] * src[n + 2];
            }
            if n >= 2 {
                z -= half * ladder[n] * src[n - 2];
            }
            dst[n] = z;
        }
    };
    let bound = xi.norm() * dim as f64;
    expm_apply(apply, bound, v);
}

/// Squeezed Fock column `S(xi) |seed>` at the given truncation.
pub(crate) fn squeezed_fock_column(xi: Complex64, seed: usize, dim: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::ZERO; dim];
    v[seed] = Complex64::ONE;
    squeeze_vector(xi, &mut v);
    v
}

/// Applies the passive polarization rotation
/// `exp(-i delta (n1+n2)/2) exp(i delta (a1† a2 + a1 a2†))` to a two-mode
/// vector stored row-major as `v[n1 * dim + n2]`.
pub(crate) fn rotate_two_mode_vector(delta: f64, dim: usize, v: &mut [Complex64]) {
    if delta == 0.0 {
        return;
    }
    let sqrt_n: Vec<f64> = (0..=dim).map(|n| (n as f64).sqrt()).collect();
    let i_delta = Complex64::new(0.0, delta);
    let apply = |src: &[Complex64], dst: &mut [Complex64]| {
        for n1 in 0..dim {
            for n2 in 0..dim {
                let mut z = Complex64::ZERO;
                // a1† a2: (n1, n2) <- (n1-1, n2+1)
                if n1 > 0 && n2 + 1 < dim {
                    z += sqrt_n[n1] * sqrt_n[n2 + 1] * src[(n1 - 1) * dim + (n2 + 1)];
                }
                // a1 a2†: (n1, n2) <- (n1+1, n2-1)
                if n2 > 0 && n1 + 1 < dim {
                    z += sqrt_n[n1 + 1] * sqrt_n[n2] * src[(n1 + 1) * dim + (n2 - 1)];
                }
                dst[n1 * dim + n2] = i_delta * z;
            }
        }
    };
    let bound = 2.0 * delta.abs() * dim as f64;
    expm_apply(apply, bound, v);
    for n1 in 0..dim {
        for n2 in 0..dim {
            let phase = Complex64::from_polar(1.0, -delta * (n1 + n2) as f64 / 2.0);
            v[n1 * dim + n2] *= phase;
        }
    }
}

/// Parity-weighted norm `Σ_n (−1)^n |v_n|²`.
pub(crate) fn parity_expectation(v: &[Complex64]) -> f64 {
    v.iter()
        .enumerate()
        .map(|(n, z)| {
            if n % 2 == 0 {
                z.norm_sqr()
            } else {
                -z.norm_sqr()
            }
        })
        .sum()
}

/// Beam-splitter loss Kraus coefficients for losing `k` photons:
/// `K_k |n> = sqrt(binom(n,k) eta^{n-k} (1-eta)^k) |n-k>`. The coefficient
/// row for fixed `k` is built by the stable ratio recurrence in `n`.
pub(crate) fn kraus_coefficients(k: usize, eta: f64, dim: usize) -> Vec<f64> {
    // entry m corresponds to input n = k + m
    let mut out = Vec::with_capacity(dim.saturating_sub(k));
    if k >= dim {
        return out;
    }
    let mut c = (1.0 - eta).powf(k as f64 / 2.0);
    out.push(c);
    for n in k..dim - 1 {
        // binom(n+1,k)/binom(n,k) = (n+1)/(n+1-k), times one more eta power
        c *= ((n + 1) as f64 / (n + 1 - k) as f64 * eta).sqrt();
        out.push(c);
    }
    out
}

/// Kraus vectors `K_k psi` for the loss channel, truncated once the
/// captured probability reaches `1 − tail_tol` of the state norm.
pub(crate) fn loss_kraus_vectors(
    psi: &[Complex64],
    eta: f64,
    tail_tol: f64,
) -> Vec<Vec<Complex64>> {
    let dim = psi.len();
    let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if eta >= 1.0 {
        return vec![psi.to_vec()];
    }
    let mut out = Vec::new();
    let mut captured = 0.0;
    for k in 0..dim {
        let coeff = kraus_coefficients(k, eta, dim);
        let mut w = vec![Complex64::ZERO; dim];
        let mut mass = 0.0;
        for (m, c) in coeff.iter().enumerate() {
            let z = c * psi[k + m];
            mass += z.norm_sqr();
            w[m] = z;
        }
        captured += mass;
        out.push(w);
        if norm_sq - captured < tail_tol {
            break;
        }
    }
    out
}

/// Smallest eigenvalue of a Hermitian matrix given as row-major complex
/// entries, via cyclic Jacobi on the real symmetric embedding
/// `[[Re, -Im], [Im, Re]]` (eigenvalues of the embedding are those of the
/// original, doubled in multiplicity).
pub(crate) fn min_eigenvalue_hermitian(entries: &[Complex64], dim: usize) -> f64 {
    let n = 2 * dim;
    let mut m = vec![0.0f64; n * n];
    for i in 0..dim {
        for j in 0..dim {
            let z = entries[i * dim + j];
            m[i * n + j] = z.re;
            m[(i + dim) * n + (j + dim)] = z.re;
            m[i * n + (j + dim)] = -z.im;
            m[(i + dim) * n + j] = z.im;
        }
    }
    // cyclic Jacobi sweeps, eigenvalues only
    for _sweep in 0..30 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() < 1e-12 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i * n + i]).fold(f64::INFINITY, f64::min)
}
