use num_complex::Complex64;

use super::lift::{index_occupation, lift_to_fock, occupation_index, LiftedOperator};
use super::unitary::{element_action, with_line};
use super::{largest_fitting_n_max, truncated_dim, OracleConfig, OracleError};
use crate::algebra::{factorial, FockPolyState, ModeId, Monomial, PathLabel, Polarization};
use crate::dsl::{BoundCircuit, BoundSource};
use crate::elements::CoherentState;
use crate::sim::coherent_components;

/// Modes whose moduli lie within this relative distance of the largest are
/// tied for phase alignment; the first in index order wins.
const ALIGN_TIE: f64 = 1e-6;

/// A state vector over the Fock space of `modes`, each truncated at `n_max`
/// photons. Index = mixed-radix occupation numbers, first mode most
/// significant.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseFockVector {
    pub modes: Vec<ModeId>,
    pub n_max: u32,
    pub amps: Vec<Complex64>,
}

impl DenseFockVector {
    pub fn vacuum(modes: Vec<ModeId>, n_max: u32) -> Self {
        let dim = truncated_dim(n_max, modes.len()).expect("dimension overflow");
        let mut amps = vec![Complex64::default(); dim];
        amps[0] = Complex64::new(1.0, 0.0);
        DenseFockVector { modes, n_max, amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn index_of(&self, occ: &[u32]) -> usize {
        assert_eq!(occ.len(), self.modes.len());
        occupation_index(occ, self.n_max)
    }

    pub fn occupation(&self, index: usize) -> Vec<u32> {
        index_occupation(index, self.modes.len(), self.n_max)
    }

    pub fn amplitude(&self, occ: &[u32]) -> Complex64 {
        self.amps[self.index_of(occ)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    fn position(&self, mode: &ModeId) -> usize {
        self.modes.binary_search(mode).expect("mode belongs to the vector")
    }

    fn stride(&self, position: usize) -> usize {
        (self.n_max as usize + 1).pow((self.modes.len() - 1 - position) as u32)
    }

    /// ⟨n_m⟩ = Σ n_m |amp|².
    pub fn mean_photons(&self, mode: &ModeId) -> f64 {
        let (stride, base) = (self.stride(self.position(mode)), self.n_max as usize + 1);
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| ((i / stride) % base) as f64 * a.norm_sqr())
            .sum()
    }

    /// Exchanges the contents of two paths (both polarizations).
    pub fn swap_paths(&mut self, a: &PathLabel, b: &PathLabel) {
        let base = self.n_max as usize + 1;
        let pairs: Vec<(usize, usize)> = Polarization::BOTH
            .iter()
            .map(|&pol| {
                (
                    self.stride(self.position(&ModeId::new(a.clone(), pol))),
                    self.stride(self.position(&ModeId::new(b.clone(), pol))),
                )
            })
            .collect();
        let mut out = vec![Complex64::default(); self.dim()];
        for (i, amp) in self.amps.iter().enumerate() {
            let mut j = i;
            for &(sa, sb) in &pairs {
                let (da, db) = ((i / sa) % base, (i / sb) % base);
                j = j - da * sa - db * sb + db * sa + da * sb;
            }
            out[j] = *amp;
        }
        self.amps = out;
    }

    /// Applies an operator on the listed modes (in the operator's order).
    pub fn apply_local(&mut self, modes: &[ModeId], op: &LiftedOperator) {
        assert_eq!(op.n_max, self.n_max);
        assert_eq!(op.n_modes, modes.len());
        let base = self.n_max as usize + 1;
        let strides: Vec<usize> = modes.iter().map(|m| self.stride(self.position(m))).collect();
        let local_dim = op.dim();
        let offsets: Vec<usize> = (0..local_dim)
            .map(|li| {
                index_occupation(li, modes.len(), self.n_max)
                    .iter()
                    .zip(&strides)
                    .map(|(&d, &s)| d as usize * s)
                    .sum()
            })
            .collect();
        let mut gathered = Vec::new();
        for start in 0..self.dim() {
            if strides.iter().any(|&s| (start / s) % base != 0) {
                continue;
            }
            gathered.clear();
            gathered.extend(offsets.iter().map(|&o| self.amps[start + o]));
            let result = op.apply(&gathered);
            for (o, amp) in offsets.iter().zip(result) {
                self.amps[start + o] = amp;
            }
        }
    }

    /// Embeds a polynomial state; every occupation must be ≤ `n_max`.
    pub fn from_poly_state(state: &FockPolyState, n_max: u32) -> Result<Self, OracleError> {
        let max = state.max_occupation();
        if max > n_max {
            return Err(OracleError::TruncationMismatch(format!(
                "state has {max} photons in one mode, above the truncation n_max={n_max}"
            )));
        }
        let modes = state.modes();
        let mut v = DenseFockVector::vacuum(modes, n_max);
        v.amps[0] = Complex64::default();
        for (m, amp) in state.terms() {
            let occ: Vec<u32> = v.modes.iter().map(|mode| m.occupation(mode)).collect();
            let i = v.index_of(&occ);
            v.amps[i] = *amp;
        }
        Ok(v)
    }

    /// Back to a polynomial state, dropping amplitudes with |a| ≤ `eps`.
    pub fn to_poly_state(&self, eps: f64) -> FockPolyState {
        let paths: Vec<PathLabel> = self.modes.iter().map(|m| m.path.clone()).collect();
        let terms = self
            .amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > eps)
            .map(|(i, a)| {
                let occ = self.occupation(i);
                let mono = Monomial::from_pairs(self.modes.iter().cloned().zip(occ).filter(|(_, n)| *n > 0));
                (mono, *a)
            });
        FockPolyState::from_terms(paths, terms.collect::<Vec<_>>()).with_prune_eps(eps)
    }
}

/// Truncation large enough for the circuit's sources: the photon count for
/// single-photon sources, ⌈|α|² + 6|α| + 6⌉ for each coherent mode.
pub fn default_n_max(bc: &BoundCircuit) -> u32 {
    let mut n = bc.photon_count();
    for src in &bc.sources {
        if let BoundSource::Coherent { alpha, pol, .. } = src {
            for (_, a) in coherent_components(*alpha, *pol) {
                let r = a.norm();
                if r > 0.0 {
                    n = n.max((r * r + 6.0 * r + 6.0).ceil() as u32);
                }
            }
        }
    }
    n
}

fn circuit_modes(bc: &BoundCircuit) -> Vec<ModeId> {
    bc.paths
        .iter()
        .flat_map(|p| Polarization::BOTH.map(|pol| ModeId::new(p.clone(), pol)))
        .collect()
}

/// e^{−|α|²/2} αⁿ/√(n!).
fn coherent_coefficient(alpha: Complex64, n: u32) -> Complex64 {
    (-alpha.norm_sqr() / 2.0).exp() * alpha.powu(n) / factorial(n).sqrt()
}

/// The input state as a dense vector, with the norm lost to truncating the
/// coherent expansions (0 for photon and vacuum sources).
pub fn oracle_input(bc: &BoundCircuit, n_max: u32) -> Result<(DenseFockVector, f64), OracleError> {
    let modes = circuit_modes(bc);
    let mut v = DenseFockVector::vacuum(modes, n_max);
    // sparse product of per-source factors: (index offset, amplitude)
    let mut entries: Vec<(usize, Complex64)> = vec![(0, Complex64::new(1.0, 0.0))];
    let mut kept_mass = 1.0;
    for src in &bc.sources {
        let factor: Vec<(usize, Complex64)> = match src {
            BoundSource::Photon { path, h, v: vv } => {
                if n_max == 0 {
                    return Err(OracleError::TruncationMismatch(format!(
                        "photon source on path `{path}` needs n_max ≥ 1"
                    )));
                }
                vec![
                    (v.stride(v.position(&ModeId::new(path.clone(), Polarization::H))), *h),
                    (v.stride(v.position(&ModeId::new(path.clone(), Polarization::V))), *vv),
                ]
            }
            BoundSource::Coherent { path, alpha, pol } => {
                let mut f = vec![(0, Complex64::new(1.0, 0.0))];
                for (p, a) in coherent_components(*alpha, *pol) {
                    let stride = v.stride(v.position(&ModeId::new(path.clone(), p)));
                    let single: Vec<(usize, Complex64)> = (0..=n_max)
                        .map(|n| (n as usize * stride, coherent_coefficient(a, n)))
                        .collect();
                    kept_mass *= single.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>();
                    f = f
                        .iter()
                        .flat_map(|&(o1, c1)| single.iter().map(move |&(o2, c2)| (o1 + o2, c1 * c2)))
                        .collect();
                }
                f
            }
            BoundSource::Vacuum { .. } => continue,
        };
        entries = entries
            .iter()
            .flat_map(|&(o1, c1)| factor.iter().map(move |&(o2, c2)| (o1 + o2, c1 * c2)))
            .filter(|(_, c)| *c != Complex64::default())
            .collect();
    }
    v.amps[0] = Complex64::default();
    for (i, c) in entries {
        v.amps[i] += c;
    }
    Ok((v, (1.0 - kept_mass).max(0.0)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleRun {
    pub state: DenseFockVector,
    pub n_max: u32,
    /// 1 − Π (kept Poisson mass) over coherent input modes.
    pub truncation_tail: f64,
}

/// Evolves the circuit's input numerically, one lifted element at a time.
pub fn oracle_simulate(bc: &BoundCircuit, cfg: &OracleConfig) -> Result<OracleRun, OracleError> {
    let n_max = cfg.n_max.unwrap_or_else(|| default_n_max(bc));
    let actions = bc
        .elements
        .iter()
        .map(|el| element_action(&el.element, cfg.circular).map_err(|e| with_line(e, el.line)))
        .collect::<Result<Vec<_>, _>>()?;

    let n_modes = bc.paths.len() * 2;
    let local_max = actions.iter().map(|a| a.local.dim()).max().unwrap_or(0);
    let limits = [(n_modes, cfg.vector_cap), (local_max, cfg.dim_cap)];
    for &(m, cap) in &limits {
        match truncated_dim(n_max, m) {
            Some(d) if d <= cap => {}
            dim => {
                return Err(OracleError::DimensionCap {
                    dim: dim.unwrap_or(usize::MAX),
                    cap,
                    suggested_n_max: largest_fitting_n_max(&limits),
                })
            }
        }
    }

    let (mut state, truncation_tail) = oracle_input(bc, n_max)?;
    for (action, el) in actions.iter().zip(&bc.elements) {
        for (a, b) in &action.swaps {
            state.swap_paths(a, b);
        }
        let op = lift_to_fock(&action.local, n_max, cfg.dim_cap).map_err(|e| with_line(e, el.line))?;
        state.apply_local(&action.local.modes, &op);
    }
    Ok(OracleRun {
        state,
        n_max,
        truncation_tail,
    })
}

/// Rotates the vector so its first near-largest component is real and
/// nonnegative.
fn align_phase(v: &mut [Complex64]) {
    let max = v.iter().fold(0.0f64, |m, a| m.max(a.norm()));
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .find(|a| a.norm() >= max * (1.0 - ALIGN_TIE))
        .copied()
        .expect("the maximum exists");
    let rot = pivot.conj() / pivot.norm();
    for a in v.iter_mut() {
        *a *= rot;
    }
}

fn max_deviation(mut a: Vec<Complex64>, mut b: Vec<Complex64>) -> f64 {
    align_phase(&mut a);
    align_phase(&mut b);
    a.iter().zip(&b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

fn check_modes(left: Vec<ModeId>, right: &[ModeId]) -> Result<(), OracleError> {
    if left != right {
        return Err(OracleError::ModeMismatch {
            left,
            right: right.to_vec(),
        });
    }
    Ok(())
}

/// Largest amplitude difference after aligning the global phase of each
/// state independently.
pub fn compare(engine: &FockPolyState, oracle: &DenseFockVector) -> Result<f64, OracleError> {
    check_modes(engine.modes(), &oracle.modes)?;
    let embedded = DenseFockVector::from_poly_state(engine, oracle.n_max)?;
    Ok(max_deviation(embedded.amps, oracle.amps.clone()))
}

/// As [`compare`] for a coherent-backend state, over the sector of total
/// photon number ≤ n_max, where truncation introduces no error.
pub fn compare_coherent(engine: &CoherentState, oracle: &DenseFockVector) -> Result<f64, OracleError> {
    check_modes(engine.modes(), &oracle.modes)?;
    let alphas: Vec<Complex64> = oracle.modes.iter().map(|m| engine.amplitude(m)).collect();
    let (mut exact, mut numeric) = (Vec::new(), Vec::new());
    for i in 0..oracle.dim() {
        let occ = oracle.occupation(i);
        if occ.iter().sum::<u32>() > oracle.n_max {
            continue;
        }
        exact.push(
            alphas
                .iter()
                .zip(&occ)
                .map(|(&a, &n)| coherent_coefficient(a, n))
                .product::<Complex64>(),
        );
        numeric.push(oracle.amps[i]);
    }
    Ok(max_deviation(exact, numeric))
}
