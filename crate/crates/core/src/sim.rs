//! Runs a bound circuit: builds the input state from its sources and applies
//! each element in order, keeping every intermediate state.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::algebra::{AlgebraError, FockPolyState, ModeId, Monomial, PathLabel, Polarization, DEFAULT_PRUNE_EPS};
use crate::dsl::{BoundCircuit, BoundSource, SourcePol};
use crate::elements::{coherent_apply, BasisTarget, CircularConvention, CoherentState, ElementError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("the Fock engine cannot represent coherent sources; use the coherent or oracle backend")]
    CoherentSourceInFockEngine,
    #[error("the coherent backend needs coherent or vacuum sources; path `{0}` has a photon source")]
    PhotonSourceInCoherentBackend(PathLabel),
    #[error("element on line {line}: {source}")]
    Element { line: usize, source: ElementError },
    #[error("element on line {line}: {source}")]
    Algebra { line: usize, source: AlgebraError },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimOptions {
    pub prune_eps: f64,
    pub circular: CircularConvention,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            prune_eps: DEFAULT_PRUNE_EPS,
            circular: CircularConvention::Real,
        }
    }
}

/// Per-mode displacement of a coherent pulse of amplitude `alpha` in the
/// given linear polarization.
pub fn coherent_components(alpha: Complex64, pol: SourcePol) -> [(Polarization, Complex64); 2] {
    let s = FRAC_1_SQRT_2;
    match pol {
        SourcePol::H => [(Polarization::H, alpha), (Polarization::V, Complex64::default())],
        SourcePol::V => [(Polarization::H, Complex64::default()), (Polarization::V, alpha)],
        SourcePol::Plus45 => [(Polarization::H, alpha * s), (Polarization::V, alpha * s)],
        SourcePol::Minus45 => [(Polarization::H, alpha * s), (Polarization::V, -alpha * s)],
    }
}

/// Product of the photon sources as a Fock polynomial.
pub fn fock_input(bc: &BoundCircuit, opts: &SimOptions) -> Result<FockPolyState, SimError> {
    let mut state = FockPolyState::vacuum(bc.paths.iter().cloned()).with_prune_eps(opts.prune_eps);
    for src in &bc.sources {
        match src {
            BoundSource::Photon { path, h, v } => {
                let photon = FockPolyState::from_terms(
                    bc.paths.iter().cloned(),
                    [
                        (Monomial::single(ModeId::new(path.clone(), Polarization::H)), *h),
                        (Monomial::single(ModeId::new(path.clone(), Polarization::V)), *v),
                    ],
                );
                state = state.product(&photon);
            }
            BoundSource::Coherent { .. } => return Err(SimError::CoherentSourceInFockEngine),
            BoundSource::Vacuum { .. } => {}
        }
    }
    Ok(state)
}

pub fn coherent_input(bc: &BoundCircuit) -> Result<CoherentState, SimError> {
    let mut cs = CoherentState::vacuum(bc.paths.iter().cloned());
    for src in &bc.sources {
        match src {
            BoundSource::Coherent { path, alpha, pol } => {
                for (p, a) in coherent_components(*alpha, *pol) {
                    if a.norm() > 0.0 {
                        cs = cs.with_amplitude(ModeId::new(path.clone(), p), a);
                    }
                }
            }
            BoundSource::Photon { path, .. } => return Err(SimError::PhotonSourceInCoherentBackend(path.clone())),
            BoundSource::Vacuum { .. } => {}
        }
    }
    Ok(cs)
}

/// Input state followed by the state after each element.
pub fn run_fock(bc: &BoundCircuit, opts: &SimOptions) -> Result<Vec<FockPolyState>, SimError> {
    evolve_fock(fock_input(bc, opts)?, bc, opts)
}

/// `state` followed by its image after each of the circuit's elements.
pub fn evolve_fock(state: FockPolyState, bc: &BoundCircuit, opts: &SimOptions) -> Result<Vec<FockPolyState>, SimError> {
    let mut snapshots = vec![state];
    for el in &bc.elements {
        let map = el
            .element
            .mode_map(opts.circular)
            .map_err(|source| SimError::Element { line: el.line, source })?;
        let next = snapshots
            .last()
            .expect("snapshots start non-empty")
            .substitute(&map)
            .map_err(|source| SimError::Algebra { line: el.line, source })?;
        snapshots.push(next);
    }
    Ok(snapshots)
}

pub fn run_coherent(bc: &BoundCircuit, opts: &SimOptions) -> Result<Vec<CoherentState>, SimError> {
    evolve_coherent(coherent_input(bc)?, bc, opts)
}

pub fn evolve_coherent(
    state: CoherentState,
    bc: &BoundCircuit,
    opts: &SimOptions,
) -> Result<Vec<CoherentState>, SimError> {
    let mut snapshots = vec![state];
    for el in &bc.elements {
        let map = el
            .element
            .mode_map(opts.circular)
            .map_err(|source| SimError::Element { line: el.line, source })?;
        let next = coherent_apply(&map, snapshots.last().expect("snapshots start non-empty"))
            .map_err(|source| SimError::Algebra { line: el.line, source })?;
        snapshots.push(next);
    }
    Ok(snapshots)
}

/// Display names for each mode after the circuit, accounting for basis
/// changes: a path passed through `basis RL` reports its slots as R and L.
pub fn slot_labels(bc: &BoundCircuit) -> BTreeMap<ModeId, String> {
    use crate::elements::Element;
    let mut basis: BTreeMap<PathLabel, Option<BasisTarget>> = bc.paths.iter().map(|p| (p.clone(), None)).collect();
    for el in &bc.elements {
        match &el.element {
            Element::BasisChange { target, path } => {
                // a second change (same or other target) leaves no named basis
                let next = match basis.get(path).copied().flatten() {
                    None => Some(*target),
                    Some(_) => None,
                };
                basis.insert(path.clone(), next);
            }
            Element::BeamSplitter { inputs, outputs, .. } | Element::PolarizingBeamSplitter { inputs, outputs } => {
                let in_bases: Vec<Option<BasisTarget>> = inputs
                    .iter()
                    .flatten()
                    .map(|p| basis.get(p).copied().flatten())
                    .collect();
                let shared = if in_bases.windows(2).all(|w| w[0] == w[1]) {
                    in_bases.first().copied().flatten()
                } else {
                    None
                };
                for p in inputs.iter().flatten() {
                    basis.insert(p.clone(), None);
                }
                for p in outputs {
                    basis.insert(p.clone(), shared);
                }
            }
            Element::PhaseRetarder { .. } | Element::HalfWavePlate { .. } => {}
        }
    }
    let mut labels = BTreeMap::new();
    for (path, b) in basis {
        for (i, pol) in Polarization::BOTH.into_iter().enumerate() {
            let slot = match b {
                Some(t) => t.slot_names()[i].to_string(),
                None => pol.to_string(),
            };
            labels.insert(ModeId::new(path.clone(), pol), format!("{path}{slot}"));
        }
    }
    labels
}
