//! Grid evaluation over `(eta, g)`, per-column threshold-contour
//! extraction, and the lost-photon dataset behind the violation-decay
//! figure. Everything here runs on the closed-form fast paths.

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{AmplifierParams, Channel, DomainError};
use crate::inequality::{chsh_parameter_optimal, witness_correction, witness_parameter_optimal};
use crate::phase_space::{loss_function, wigner_origin_lossy};

/// Rectangular `(eta, g)` evaluation grid with a fixed injection
/// efficiency. Axes are strictly ascending with at least two points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    eta_axis: Vec<f64>,
    g_axis: Vec<f64>,
    p: f64,
}

impl SweepGrid {
    pub fn new(eta_axis: Vec<f64>, g_axis: Vec<f64>, p: f64) -> Result<Self, DomainError> {
        if eta_axis.len() < 2 || g_axis.len() < 2 {
            return Err(DomainError::Grid(
                "each axis needs at least two points".into(),
            ));
        }
        if !eta_axis.windows(2).all(|w| w[0] < w[1]) {
            return Err(DomainError::Grid(
                "eta axis must be strictly ascending".into(),
            ));
        }
        if !g_axis.windows(2).all(|w| w[0] < w[1]) {
            return Err(DomainError::Grid(
                "g axis must be strictly ascending".into(),
            ));
        }
        for &eta in &eta_axis {
            Channel::new(eta)?;
        }
        for &g in &g_axis {
            AmplifierParams::new(g, p)?;
        }
        Ok(Self {
            eta_axis,
            g_axis,
            p,
        })
    }

    /// Uniform axes from inclusive ranges.
    pub fn linspace(
        eta: (f64, f64, usize),
        g: (f64, f64, usize),
        p: f64,
    ) -> Result<Self, DomainError> {
        let axis = |(lo, hi, n): (f64, f64, usize)| -> Vec<f64> {
            (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n.max(2) - 1) as f64)
                .collect()
        };
        Self::new(axis(eta), axis(g), p)
    }

    pub fn eta_axis(&self) -> &[f64] {
        &self.eta_axis
    }

    pub fn g_axis(&self) -> &[f64] {
        &self.g_axis
    }

    pub fn injection(&self) -> f64 {
        self.p
    }
}

/// One grid node. `b_eta = 2 sqrt(2) p L` and `w_eta = h b_eta` hold by
/// construction; `negativity = max(0, -wigner_origin)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub eta: f64,
    pub g: f64,
    pub nbar: f64,
    pub mean_n: f64,
    pub lost_photons: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "B_eta")]
    pub b_eta: f64,
    pub h: f64,
    #[serde(rename = "W_eta")]
    pub w_eta: f64,
    pub wigner_origin: f64,
    pub negativity: f64,
}

fn record_at(eta: f64, g: f64, p: f64) -> SweepRecord {
    let params = AmplifierParams::new(g, p).expect("validated by the grid");
    let channel = Channel::new(eta).expect("validated by the grid");
    let l = loss_function(&params, &channel);
    let b_eta = chsh_parameter_optimal(&params, &channel).value;
    let h = witness_correction(&channel).h;
    let w_eta = witness_parameter_optimal(&params, &channel).value;
    let wigner_origin = wigner_origin_lossy(&params, &channel);
    let mean_n = params.mean_macro_photons();
    SweepRecord {
        eta,
        g,
        nbar: params.mean_photon_pairs(),
        mean_n,
        lost_photons: (1.0 - eta) * mean_n,
        l,
        b_eta,
        h,
        w_eta,
        wigner_origin,
        negativity: (-wigner_origin).max(0.0),
    }
}

/// One record per grid node, evaluated in parallel, emitted sorted by
/// `(eta, g)` regardless of scheduling.
pub fn evaluate_grid(grid: &SweepGrid) -> Vec<SweepRecord> {
    let nodes: Vec<(f64, f64)> = grid
        .eta_axis
        .iter()
        .flat_map(|&eta| grid.g_axis.iter().map(move |&g| (eta, g)))
        .collect();
    nodes
        .par_iter()
        .map(|&(eta, g)| record_at(eta, g, grid.p))
        .collect()
}

/// Which test parameter a contour traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Chsh,
    Witness,
}

/// Level set `parameter = 2` as ordered `(eta, g)` vertices, one per grid
/// column whose g-samples bracket the crossing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourLine {
    pub test: TestKind,
    pub level: f64,
    pub vertices: Vec<(f64, f64)>,
}

impl ContourLine {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn parameter_value(kind: TestKind, eta: f64, g: f64, p: f64) -> f64 {
    let params = AmplifierParams::new(g, p).expect("validated by the grid");
    let channel = Channel::new(eta).expect("validated by the grid");
    match kind {
        TestKind::Chsh => chsh_parameter_optimal(&params, &channel).value,
        TestKind::Witness => witness_parameter_optimal(&params, &channel).value,
    }
}

/// Per-column bisection in `g` of the level-2 crossing. Columns whose
/// samples never bracket the level (all violating or none) contribute no
/// vertex; an entirely empty contour is a legitimate outcome below the
/// efficiency floor.
pub fn extract_contour(grid: &SweepGrid, kind: TestKind, tol: f64) -> ContourLine {
    assert!(tol > 0.0, "tolerance must be positive");
    let p = grid.p;
    let vertices: Vec<(f64, f64)> = grid
        .eta_axis
        .par_iter()
        .filter_map(|&eta| {
            let f = |g: f64| parameter_value(kind, eta, g, p) - 2.0;
            let samples: Vec<f64> = grid.g_axis.iter().map(|&g| f(g)).collect();
            let bracket = grid
                .g_axis
                .windows(2)
                .zip(samples.windows(2))
                .find(|(_, fv)| (fv[0] > 0.0) != (fv[1] > 0.0))?;
            let (mut lo, mut hi) = (bracket.0[0], bracket.0[1]);
            let mut flo = bracket.1[0];
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if (flo > 0.0) != (fm > 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            Some((eta, 0.5 * (lo + hi)))
        })
        .collect();
    ContourLine {
        test: kind,
        level: 2.0,
        vertices,
    }
}

/// Row of the violation-vs-lost-photons dataset. `b_lhv` carries the
/// constant local-realistic boundary for plotting alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig3Row {
    pub g: f64,
    pub eta: f64,
    pub nbar: f64,
    pub mean_n: f64,
    pub lost_photons: f64,
    #[serde(rename = "B_eta")]
    pub b_eta: f64,
    pub b_lhv: f64,
}

/// For each gain, the CHSH parameter against the mean number of lost
/// photons `(1 - eta) <n>`, sorted by `(g, lost_photons)`.
pub fn figure3_dataset(
    gains: &[f64],
    eta_samples: &[f64],
    p: f64,
) -> Result<Vec<Fig3Row>, DomainError> {
    for &g in gains {
        AmplifierParams::new(g, p)?;
    }
    for &eta in eta_samples {
        Channel::new(eta)?;
    }
    let mut rows = Vec::with_capacity(gains.len() * eta_samples.len());
    for &g in gains {
        let params = AmplifierParams::new(g, p).expect("checked above");
        let mean_n = params.mean_macro_photons();
        for &eta in eta_samples {
            let channel = Channel::new(eta).expect("checked above");
            rows.push(Fig3Row {
                g,
                eta,
                nbar: params.mean_photon_pairs(),
                mean_n,
                lost_photons: (1.0 - eta) * mean_n,
                b_eta: chsh_parameter_optimal(&params, &channel).value,
                b_lhv: 2.0,
            });
        }
    }
    rows.sort_by(|a, b| {
        (a.g, a.lost_photons)
            .partial_cmp(&(b.g, b.lost_photons))
            .expect("finite keys")
    });
    Ok(rows)
}
