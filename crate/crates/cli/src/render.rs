//! Text and JSON forms of states and reports. Both are deterministic: JSON
//! objects have sorted keys and terms are listed in canonical order.

use std::f64::consts::PI;
use std::fmt::Write;

use fockline_core::algebra::{FockPolyState, ModeId, Monomial};
use fockline_core::elements::CoherentState;
use fockline_core::measurement::DetectionReport;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

/// A final or intermediate state from any backend.
pub enum StateView<'a> {
    Fock {
        state: &'a FockPolyState,
        backend: &'static str,
        truncation_tail: f64,
    },
    Coherent(&'a CoherentState),
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn modes_json(modes: &[ModeId]) -> Value {
    Value::Array(modes.iter().map(|m| Value::String(m.to_string())).collect())
}

pub fn state_json(view: &StateView) -> Value {
    match view {
        StateView::Fock {
            state,
            backend,
            truncation_tail,
        } => {
            let terms: Vec<Value> = state
                .terms()
                .iter()
                .map(|(mono, amp)| {
                    let occ: Map<String, Value> = mono.iter().map(|(m, n)| (m.to_string(), json!(n))).collect();
                    json!({ "occ": occ, "re": amp.re, "im": amp.im })
                })
                .collect();
            json!({
                "backend": backend,
                "modes": modes_json(&state.modes()),
                "norm": state.norm(),
                "terms": terms,
                "truncation_tail": truncation_tail,
            })
        }
        StateView::Coherent(cs) => {
            let amplitudes: Map<String, Value> = cs
                .modes()
                .iter()
                .map(|m| (m.to_string(), complex_json(cs.amplitude(m))))
                .collect();
            json!({
                "amplitudes": amplitudes,
                "backend": "coherent",
                "modes": modes_json(&cs.modes()),
                "norm": 1.0,
                "terms": [],
                "truncation_tail": 0.0,
            })
        }
    }
}

/// `0.433012701892·e^{i0.785398163397}`, phase in (−π, π]; negative phases
/// print as `e^{-i…}`.
pub fn polar(z: Complex64) -> String {
    let mut phase = z.arg();
    if phase.abs() < 5e-13 {
        phase = 0.0;
    } else if phase <= -PI + 5e-13 {
        phase = PI;
    }
    let sign = if phase < 0.0 { "-" } else { "" };
    format!("{:.12}·e^{{{sign}i{:.12}}}", z.norm(), phase.abs())
}

/// Sort key: modulus descending at 1e−12 resolution, so equal moduli fall
/// back to canonical order.
fn modulus_key(z: Complex64) -> std::cmp::Reverse<u64> {
    std::cmp::Reverse((z.norm() * 1e12).round() as u64)
}

pub fn state_text(view: &StateView) -> String {
    let mut out = String::new();
    match view {
        StateView::Fock {
            state,
            backend,
            truncation_tail,
        } => {
            let mut terms: Vec<(&Monomial, &Complex64)> = state.terms().iter().collect();
            terms.sort_by_key(|(m, a)| (modulus_key(**a), *m));
            let _ = writeln!(out, "backend: {backend}");
            let _ = writeln!(out, "norm: {:.12}", state.norm());
            if *truncation_tail > 0.0 {
                let _ = writeln!(out, "truncation tail: {truncation_tail:.3e}");
            }
            let _ = writeln!(out, "terms: {}", terms.len());
            for (m, a) in terms {
                let _ = writeln!(out, "  {}  {m}", polar(*a));
            }
        }
        StateView::Coherent(cs) => {
            let mut amps: Vec<(&ModeId, Complex64)> = cs.amplitudes().collect();
            amps.sort_by_key(|(m, a)| (modulus_key(*a), *m));
            let _ = writeln!(out, "backend: coherent");
            let _ = writeln!(out, "mean photons: {:.12}", cs.total_mean_photons());
            let _ = writeln!(out, "amplitudes: {}", amps.len());
            for (m, a) in amps {
                let _ = writeln!(out, "  {}  {m}", polar(a));
            }
        }
    }
    out
}

pub fn report_text(report: &DetectionReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:<6} {:>16} {:>16}  distribution",
        "detector", "mode", "click", "mean"
    );
    for d in &report.detectors {
        let dist: Vec<String> = d
            .distribution
            .iter()
            // the JSON form keeps every entry
            .filter(|(_, p)| **p >= 5e-7)
            .map(|(n, p)| format!("{n}:{p:.6}"))
            .collect();
        let _ = writeln!(
            out,
            "{:<10} {:<6} {:>16.12} {:>16.12}  {}",
            d.label,
            d.mode.to_string(),
            d.click_prob,
            d.mean_photons,
            dist.join(" ")
        );
    }
    for c in &report.coincidences {
        let modes: Vec<String> = c.modes.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "coincidence {} {:.12}", modes.join(","), c.prob);
    }
    out
}
