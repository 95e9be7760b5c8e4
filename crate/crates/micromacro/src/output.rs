//! Deterministic file emission: CSV with a fixed header and 17-significant-
//! digit values (full f64 round-trip), and JSON documents with the records
//! under `"records"` and the run parameters under `"config"`.

use serde::Serialize;

use crate::sweep::{ContourLine, Fig3Row, SweepRecord};

/// Pinned sweep CSV header; golden files depend on it byte for byte.
pub const SWEEP_CSV_HEADER: &str =
    "eta,g,nbar,mean_n,lost_photons,L,B_eta,h,W_eta,wigner_origin,negativity";

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in records {
        let fields = [
            r.eta,
            r.g,
            r.nbar,
            r.mean_n,
            r.lost_photons,
            r.l,
            r.b_eta,
            r.h,
            r.w_eta,
            r.wigner_origin,
            r.negativity,
        ];
        let line: Vec<String> = fields.iter().map(|&v| format_f64(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn contour_csv(contour: &ContourLine) -> String {
    let mut out = String::from("eta,g\n");
    for &(eta, g) in &contour.vertices {
        out.push_str(&format!("{},{}\n", format_f64(eta), format_f64(g)));
    }
    out
}

pub fn fig3_csv(rows: &[Fig3Row]) -> String {
    let mut out = String::from("g,eta,nbar,mean_n,lost_photons,B_eta,b_lhv\n");
    for r in rows {
        let fields = [
            r.g,
            r.eta,
            r.nbar,
            r.mean_n,
            r.lost_photons,
            r.b_eta,
            r.b_lhv,
        ];
        let line: Vec<String> = fields.iter().map(|&v| format_f64(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// `{"config": ..., "records": ...}` with stable key order; re-parsing and
/// re-serializing reproduces the bytes exactly.
pub fn json_document<C: Serialize, R: Serialize>(config: &C, records: &[R]) -> String {
    #[derive(Serialize)]
    struct Document<'a, C: Serialize, R: Serialize> {
        config: &'a C,
        records: &'a [R],
    }
    let mut text = serde_json::to_string_pretty(&Document { config, records })
        .expect("serialization of plain data cannot fail");
    text.push('\n');
    text
}
