//! Detector-level predictions: threshold-detector click probabilities, mean
//! photon numbers, photon-number distributions and coincidences.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::{FockPolyState, ModeId};
use crate::elements::CoherentState;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error("unknown mode {0}")]
    UnknownMode(ModeId),
    #[error("mode {0} is listed twice in a coincidence")]
    DuplicateMode(ModeId),
    #[error("a coincidence needs at least two modes")]
    TooFewModes,
}

fn check_mode(modes: &[ModeId], m: &ModeId) -> Result<(), MeasureError> {
    if modes.binary_search(m).is_ok() {
        Ok(())
    } else {
        Err(MeasureError::UnknownMode(m.clone()))
    }
}

fn check_coincidence(all: &[ModeId], modes: &[ModeId]) -> Result<(), MeasureError> {
    if modes.len() < 2 {
        return Err(MeasureError::TooFewModes);
    }
    let mut seen = BTreeSet::new();
    for m in modes {
        check_mode(all, m)?;
        if !seen.insert(m) {
            return Err(MeasureError::DuplicateMode(m.clone()));
        }
    }
    Ok(())
}

// Sums below fold from +0.0: `Iterator::sum` over no f64s is −0.0, which
// would print as `-0`.

/// Probability that a threshold detector on `m` fires: Σ |amp|² over terms
/// with at least one photon in `m`.
pub fn click_prob(state: &FockPolyState, m: &ModeId) -> Result<f64, MeasureError> {
    check_mode(&state.modes(), m)?;
    Ok(state
        .terms()
        .iter()
        .filter(|(mono, _)| mono.occupation(m) >= 1)
        .map(|(_, a)| a.norm_sqr())
        .fold(0.0, |acc, p| acc + p))
}

/// ⟨n_m⟩ = Σ n_m |amp|².
pub fn mean_photons(state: &FockPolyState, m: &ModeId) -> Result<f64, MeasureError> {
    check_mode(&state.modes(), m)?;
    Ok(state
        .terms()
        .iter()
        .map(|(mono, a)| mono.occupation(m) as f64 * a.norm_sqr())
        .fold(0.0, |acc, p| acc + p))
}

/// ⟨n_m⟩ = |α_m|².
pub fn mean_photons_coherent(state: &CoherentState, m: &ModeId) -> Result<f64, MeasureError> {
    check_mode(&state.modes(), m)?;
    Ok(state.mean_photons(m))
}

/// P(n_m = n) for every n with nonzero probability.
pub fn occupation_distribution(state: &FockPolyState, m: &ModeId) -> Result<BTreeMap<u32, f64>, MeasureError> {
    check_mode(&state.modes(), m)?;
    let mut dist = BTreeMap::new();
    for (mono, a) in state.terms() {
        *dist.entry(mono.occupation(m)).or_insert(0.0) += a.norm_sqr();
    }
    Ok(dist)
}

/// Probability that every listed detector fires.
pub fn coincidence_prob(state: &FockPolyState, modes: &[ModeId]) -> Result<f64, MeasureError> {
    check_coincidence(&state.modes(), modes)?;
    Ok(state
        .terms()
        .iter()
        .filter(|(mono, _)| modes.iter().all(|m| mono.occupation(m) >= 1))
        .map(|(_, a)| a.norm_sqr())
        .fold(0.0, |acc, p| acc + p))
}

/// Poisson weights e^{−μ} μⁿ/n! until the remaining mass is below 1e−12.
fn poisson(mu: f64) -> BTreeMap<u32, f64> {
    let mut dist = BTreeMap::new();
    let mut p = (-mu).exp();
    let mut total = 0.0;
    let mut n = 0;
    loop {
        dist.insert(n, p);
        total += p;
        if 1.0 - total < 1e-12 || p == 0.0 && n as f64 > mu {
            break;
        }
        n += 1;
        p *= mu / n as f64;
    }
    dist
}

/// Which detectors to read and which coincidences to evaluate.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DetectorSpec {
    pub modes: Vec<ModeId>,
    pub coincidences: Vec<Vec<ModeId>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectorReading {
    pub mode: ModeId,
    /// Display name of the detector slot, e.g. `5R` after a basis change.
    pub label: String,
    pub click_prob: f64,
    pub mean_photons: f64,
    pub distribution: BTreeMap<u32, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoincidenceReading {
    pub modes: Vec<ModeId>,
    pub prob: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DetectionReport {
    pub detectors: Vec<DetectorReading>,
    pub coincidences: Vec<CoincidenceReading>,
}

impl DetectionReport {
    /// Replaces the default `<path><pol>` labels with slot names.
    pub fn with_labels(mut self, labels: &BTreeMap<ModeId, String>) -> Self {
        for d in &mut self.detectors {
            if let Some(l) = labels.get(&d.mode) {
                d.label = l.clone();
            }
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.detectors.is_empty() && self.coincidences.is_empty()
    }
}

pub fn report(state: &FockPolyState, spec: &DetectorSpec) -> Result<DetectionReport, MeasureError> {
    let detectors = spec
        .modes
        .iter()
        .map(|m| {
            Ok(DetectorReading {
                mode: m.clone(),
                label: m.to_string(),
                click_prob: click_prob(state, m)?,
                mean_photons: mean_photons(state, m)?,
                distribution: occupation_distribution(state, m)?,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let coincidences = spec
        .coincidences
        .iter()
        .map(|ms| {
            Ok(CoincidenceReading {
                modes: ms.clone(),
                prob: coincidence_prob(state, ms)?,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DetectionReport {
        detectors,
        coincidences,
    })
}

/// As [`report`] for a product of coherent states: Poisson statistics per
/// mode, click probability 1 − e^{−|α|²}, independent coincidences.
pub fn report_coherent(state: &CoherentState, spec: &DetectorSpec) -> Result<DetectionReport, MeasureError> {
    let modes = state.modes();
    let click = |m: &ModeId| 1.0 - (-state.mean_photons(m)).exp();
    let detectors = spec
        .modes
        .iter()
        .map(|m| {
            check_mode(&modes, m)?;
            Ok(DetectorReading {
                mode: m.clone(),
                label: m.to_string(),
                click_prob: click(m),
                mean_photons: state.mean_photons(m),
                distribution: poisson(state.mean_photons(m)),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let coincidences = spec
        .coincidences
        .iter()
        .map(|ms| {
            check_coincidence(&modes, ms)?;
            Ok(CoincidenceReading {
                modes: ms.clone(),
                prob: ms.iter().map(click).product(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DetectionReport {
        detectors,
        coincidences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn split() -> FockPolyState {
        FockPolyState::from_terms(
            ["1", "2"],
            [
                (Monomial::single(ModeId::h("1")), c(FRAC_1_SQRT_2)),
                (Monomial::single(ModeId::h("2")), c(FRAC_1_SQRT_2)),
            ],
        )
    }

    #[test]
    fn vacuum_never_clicks() {
        let s = FockPolyState::vacuum(["1"]);
        assert_eq!(click_prob(&s, &ModeId::h("1")).unwrap(), 0.0);
        assert_eq!(occupation_distribution(&s, &ModeId::v("1")).unwrap()[&0], 1.0);
    }

    #[test]
    fn single_photon_in_a_mode() {
        let s = FockPolyState::from_terms(["1"], [(Monomial::single(ModeId::v("1")), c(1.0))]);
        assert_eq!(mean_photons(&s, &ModeId::v("1")).unwrap(), 1.0);
    }

    #[test]
    fn one_photon_cannot_click_twice() {
        let s = split();
        assert_eq!(coincidence_prob(&s, &[ModeId::h("1"), ModeId::h("2")]).unwrap(), 0.0);
        let total: f64 = s.modes().iter().map(|m| click_prob(&s, m).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_state_coincides() {
        let s = FockPolyState::from_terms(
            ["1", "2"],
            [(Monomial::from_pairs([(ModeId::h("1"), 1), (ModeId::v("2"), 1)]), c(1.0))],
        );
        assert_eq!(coincidence_prob(&s, &[ModeId::h("1"), ModeId::v("2")]).unwrap(), 1.0);
    }

    #[test]
    fn mode_errors() {
        let s = split();
        assert_eq!(
            click_prob(&s, &ModeId::h("9")),
            Err(MeasureError::UnknownMode(ModeId::h("9")))
        );
        assert_eq!(
            coincidence_prob(&s, &[ModeId::h("1"), ModeId::h("1")]),
            Err(MeasureError::DuplicateMode(ModeId::h("1")))
        );
        assert_eq!(coincidence_prob(&s, &[ModeId::h("1")]), Err(MeasureError::TooFewModes));
    }

    #[test]
    fn empty_spec_gives_empty_report() {
        assert!(report(&split(), &DetectorSpec::default()).unwrap().is_empty());
    }

    #[test]
    fn coherent_statistics() {
        let cs = CoherentState::vacuum(["1", "2"])
            .with_amplitude(ModeId::h("1"), c(0.5))
            .with_amplitude(ModeId::v("2"), Complex64::new(0.0, 1.0));
        let spec = DetectorSpec {
            modes: vec![ModeId::h("1"), ModeId::h("2")],
            coincidences: vec![vec![ModeId::h("1"), ModeId::v("2")]],
        };
        let r = report_coherent(&cs, &spec).unwrap();
        assert!((r.detectors[0].click_prob - (1.0 - (-0.25f64).exp())).abs() < 1e-15);
        assert_eq!(r.detectors[1].click_prob, 0.0);
        assert_eq!(r.detectors[1].distribution.len(), 1);
        let mass: f64 = r.detectors[0].distribution.values().sum();
        assert!((mass - 1.0).abs() < 1e-12);
        let expected = (1.0 - (-0.25f64).exp()) * (1.0 - (-1.0f64).exp());
        assert!((r.coincidences[0].prob - expected).abs() < 1e-15);
    }

    #[test]
    fn labels_replace_mode_names() {
        let spec = DetectorSpec {
            modes: vec![ModeId::h("1")],
            coincidences: vec![],
        };
        let labels = BTreeMap::from([(ModeId::h("1"), "1R".to_string())]);
        let r = report(&split(), &spec).unwrap().with_labels(&labels);
        assert_eq!(r.detectors[0].label, "1R");
    }
}
