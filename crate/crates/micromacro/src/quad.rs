//! Tensor-product Gauss-Legendre quadrature used by the verification-only
//! integration paths (loss convolution, closure and normalization checks).
//!
//! The engine is pure: nodes and weights are recomputed per call and no
//! global state is held.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error(
        "quadrature did not converge: last change {last_change:e} above tolerance {tol:e} at {nodes} nodes per axis"
    )]
    NonConvergence {
        last_change: f64,
        tol: f64,
        nodes: usize,
    },
}

/// Integration parameters for the 2-D verification integrals. Extents are
/// half-widths of the `[-L, L]` range per axis; node counts double until the
/// result moves by less than `rel_tol` (relative to max(1, |I|)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub half_extent_x: f64,
    pub half_extent_p: f64,
    pub initial_nodes: usize,
    pub max_nodes: usize,
    pub rel_tol: f64,
}

impl QuadratureSpec {
    /// Extent rule for correlator integrands at gain `g`: the anti-squeezed
    /// direction widens like `e^g`, so the x-extent grows with it.
    pub fn for_gain(g: f64) -> Self {
        Self {
            half_extent_x: 6.0f64.max(6.0 * g.exp()),
            half_extent_p: 6.0,
            initial_nodes: 32,
            max_nodes: 2048,
            rel_tol: 1e-6,
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre polynomial with the usual asymptotic initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "need at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `∫∫ f(x, p) dx dp` over an arbitrary rectangle at a fixed node count
/// per axis.
pub fn tensor_integral_2d_on<F: Fn(f64, f64) -> f64>(
    f: &F,
    x_range: (f64, f64),
    p_range: (f64, f64),
    nodes_per_axis: usize,
) -> f64 {
    let (xs, ws) = gauss_legendre(nodes_per_axis);
    let (cx, hx) = (0.5 * (x_range.0 + x_range.1), 0.5 * (x_range.1 - x_range.0));
    let (cp, hp) = (0.5 * (p_range.0 + p_range.1), 0.5 * (p_range.1 - p_range.0));
    let mut total = 0.0;
    for (xi, wi) in xs.iter().zip(&ws) {
        let x = cx + hx * xi;
        let mut row = 0.0;
        for (pj, wj) in xs.iter().zip(&ws) {
            row += wj * f(x, cp + hp * pj);
        }
        total += wi * row;
    }
    total * hx * hp
}

/// `∫_{-Lx}^{Lx} ∫_{-Lp}^{Lp} f(x, p) dx dp` at a fixed node count per axis.
pub fn tensor_integral_2d<F: Fn(f64, f64) -> f64>(
    f: &F,
    half_extent_x: f64,
    half_extent_p: f64,
    nodes_per_axis: usize,
) -> f64 {
    tensor_integral_2d_on(
        f,
        (-half_extent_x, half_extent_x),
        (-half_extent_p, half_extent_p),
        nodes_per_axis,
    )
}

/// Adaptive node doubling over an arbitrary rectangle until the integral
/// changes by less than `rel_tol` (relative to `max(1, |I|)`).
pub fn adaptive_integral_2d_on<F: Fn(f64, f64) -> f64>(
    f: &F,
    x_range: (f64, f64),
    p_range: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    let mut n = spec.initial_nodes.max(2);
    let mut prev = tensor_integral_2d_on(f, x_range, p_range, n);
    let mut change = f64::INFINITY;
    while n < spec.max_nodes {
        n *= 2;
        let cur = tensor_integral_2d_on(f, x_range, p_range, n);
        change = (cur - prev).abs() / cur.abs().max(1.0);
        if change < spec.rel_tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(QuadratureError::NonConvergence {
        last_change: change,
        tol: spec.rel_tol,
        nodes: n,
    })
}

/// Adaptive variant over the symmetric `[-L, L]` rectangle of the
/// configured extents.
pub fn adaptive_integral_2d<F: Fn(f64, f64) -> f64>(
    f: &F,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    adaptive_integral_2d_on(
        f,
        (-spec.half_extent_x, spec.half_extent_x),
        (-spec.half_extent_p, spec.half_extent_p),
        spec,
    )
}
