//! Optical elements as creation-operator substitutions, and the action of the
//! same mode matrices on coherent displacement amplitudes.
//!
//! Sign conventions: a beam splitter of reflectance `eta` sends
//! `a† → √(1−η)·c† + √η·d†` and `b† → √η·c† − √(1−η)·d†`, so the second
//! output port carries the minus sign. A polarizing beam splitter transmits
//! H and reflects V. Phase retarders multiply the V creation operator by
//! `e^{+iθ}`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{AlgebraError, ModeId, ModeLinearMap, PathLabel, Polarization};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ElementError {
    #[error("beam splitter reflectance eta={0} is outside [0, 1]")]
    EtaOutOfRange(f64),
    #[error("two-port element needs distinct {0} paths")]
    RepeatedPort(&'static str),
    #[error("two-port element needs at least one non-vacuum input")]
    NoInput,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Target of a polarization basis change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BasisTarget {
    /// Circular: slots become (R, L).
    RL,
    /// Diagonal: slots become (+45°, −45°).
    Diag,
}

impl BasisTarget {
    pub fn keyword(self) -> &'static str {
        match self {
            BasisTarget::RL => "RL",
            BasisTarget::Diag => "DIAG",
        }
    }

    /// Names of the H and V slots after the change.
    pub fn slot_names(self) -> [&'static str; 2] {
        match self {
            BasisTarget::RL => ["R", "L"],
            BasisTarget::Diag => ["D", "A"],
        }
    }
}

/// Which matrix the R/L basis change uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CircularConvention {
    /// Real matrix H→(R+L)/√2, V→(R−L)/√2.
    #[default]
    Real,
    /// H→(R+iL)/√2, V→(iR+L)/√2.
    Physical,
}

/// A bound optical element. `None` in an input port is a vacuum placeholder.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    BeamSplitter {
        eta: f64,
        inputs: [Option<PathLabel>; 2],
        outputs: [PathLabel; 2],
    },
    PolarizingBeamSplitter {
        inputs: [Option<PathLabel>; 2],
        outputs: [PathLabel; 2],
    },
    PhaseRetarder {
        theta: f64,
        path: PathLabel,
    },
    HalfWavePlate {
        delta: f64,
        path: PathLabel,
    },
    BasisChange {
        target: BasisTarget,
        path: PathLabel,
    },
}

impl Element {
    pub fn mode_map(&self, circular: CircularConvention) -> Result<ModeLinearMap, ElementError> {
        match self {
            Element::BeamSplitter { eta, inputs, outputs } => bs_map(*eta, inputs, outputs),
            Element::PolarizingBeamSplitter { inputs, outputs } => pbs_map(inputs, outputs),
            Element::PhaseRetarder { theta, path } => pr_map(*theta, path),
            Element::HalfWavePlate { delta, path } => hwp_map(*delta, path),
            Element::BasisChange { target, path } => basis_map(*target, path, circular),
        }
    }

    /// Paths whose contents the element reads (vacuum ports excluded).
    pub fn input_paths(&self) -> Vec<&PathLabel> {
        match self {
            Element::BeamSplitter { inputs, .. } | Element::PolarizingBeamSplitter { inputs, .. } => {
                inputs.iter().flatten().collect()
            }
            Element::PhaseRetarder { path, .. }
            | Element::HalfWavePlate { path, .. }
            | Element::BasisChange { path, .. } => vec![path],
        }
    }

    pub fn output_paths(&self) -> Vec<&PathLabel> {
        match self {
            Element::BeamSplitter { outputs, .. } | Element::PolarizingBeamSplitter { outputs, .. } => {
                outputs.iter().collect()
            }
            Element::PhaseRetarder { path, .. }
            | Element::HalfWavePlate { path, .. }
            | Element::BasisChange { path, .. } => vec![path],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Element::BeamSplitter { .. } => "bs",
            Element::PolarizingBeamSplitter { .. } => "pbs",
            Element::PhaseRetarder { .. } => "pr",
            Element::HalfWavePlate { .. } => "hwp",
            Element::BasisChange { .. } => "basis",
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let port = |p: &Option<PathLabel>| p.as_ref().map_or("-".to_string(), |p| p.to_string());
        match self {
            Element::BeamSplitter { eta, inputs, outputs } => write!(
                f,
                "bs eta={eta} in={},{} out={},{}",
                port(&inputs[0]),
                port(&inputs[1]),
                outputs[0],
                outputs[1]
            ),
            Element::PolarizingBeamSplitter { inputs, outputs } => write!(
                f,
                "pbs in={},{} out={},{}",
                port(&inputs[0]),
                port(&inputs[1]),
                outputs[0],
                outputs[1]
            ),
            Element::PhaseRetarder { theta, path } => write!(f, "pr theta={theta} path={path}"),
            Element::HalfWavePlate { delta, path } => write!(f, "hwp delta={delta} path={path}"),
            Element::BasisChange { target, path } => write!(f, "basis {} path={path}", target.keyword()),
        }
    }
}

type Rows = BTreeMap<ModeId, Vec<(ModeId, Complex64)>>;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_two_port(inputs: &[Option<PathLabel>; 2], outputs: &[PathLabel; 2]) -> Result<(), ElementError> {
    if outputs[0] == outputs[1] {
        return Err(ElementError::RepeatedPort("output"));
    }
    match inputs {
        [Some(a), Some(b)] if a == b => Err(ElementError::RepeatedPort("input")),
        [None, None] => Err(ElementError::NoInput),
        _ => Ok(()),
    }
}

/// Shared 2×2 two-port builder: `port_rows[k]` gives the coefficients of
/// input port `k` onto `(out1, out2)`, applied to both polarizations.
fn two_port_map(
    inputs: &[Option<PathLabel>; 2],
    outputs: &[PathLabel; 2],
    per_pol: impl Fn(Polarization, usize) -> [(Polarization, Complex64); 2],
) -> Result<ModeLinearMap, ElementError> {
    check_two_port(inputs, outputs)?;
    let mut rows = Rows::new();
    for (k, input) in inputs.iter().enumerate() {
        let Some(input) = input else { continue };
        for pol in Polarization::BOTH {
            let [(p1, c1), (p2, c2)] = per_pol(pol, k);
            rows.insert(
                ModeId::new(input.clone(), pol),
                vec![
                    (ModeId::new(outputs[0].clone(), p1), c1),
                    (ModeId::new(outputs[1].clone(), p2), c2),
                ],
            );
        }
    }
    Ok(ModeLinearMap::new(rows)?)
}

/// Non-polarizing beam splitter of reflectance `eta`.
pub fn bs_map(
    eta: f64,
    inputs: &[Option<PathLabel>; 2],
    outputs: &[PathLabel; 2],
) -> Result<ModeLinearMap, ElementError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(ElementError::EtaOutOfRange(eta));
    }
    let t = (1.0 - eta).sqrt();
    let r = eta.sqrt();
    two_port_map(inputs, outputs, |pol, k| match k {
        0 => [(pol, re(t)), (pol, re(r))],
        _ => [(pol, re(r)), (pol, re(-t))],
    })
}

/// Polarizing beam splitter: H transmitted (port k → out k), V reflected
/// (port k → out 1−k).
pub fn pbs_map(inputs: &[Option<PathLabel>; 2], outputs: &[PathLabel; 2]) -> Result<ModeLinearMap, ElementError> {
    check_two_port(inputs, outputs)?;
    let mut rows = Rows::new();
    for (k, input) in inputs.iter().enumerate() {
        let Some(input) = input else { continue };
        rows.insert(
            ModeId::new(input.clone(), Polarization::H),
            vec![(ModeId::new(outputs[k].clone(), Polarization::H), re(1.0))],
        );
        rows.insert(
            ModeId::new(input.clone(), Polarization::V),
            vec![(ModeId::new(outputs[1 - k].clone(), Polarization::V), re(1.0))],
        );
    }
    Ok(ModeLinearMap::new(rows)?)
}

pub fn pr_map(theta: f64, path: &PathLabel) -> Result<ModeLinearMap, ElementError> {
    let mut rows = Rows::new();
    rows.insert(
        ModeId::new(path.clone(), Polarization::H),
        vec![(ModeId::new(path.clone(), Polarization::H), re(1.0))],
    );
    rows.insert(
        ModeId::new(path.clone(), Polarization::V),
        vec![(ModeId::new(path.clone(), Polarization::V), Complex64::cis(theta))],
    );
    Ok(ModeLinearMap::new(rows)?)
}

/// Half-wave plate modelled as a phase retarder of angle `delta`.
pub fn hwp_map(delta: f64, path: &PathLabel) -> Result<ModeLinearMap, ElementError> {
    pr_map(delta, path)
}

pub fn basis_map(
    target: BasisTarget,
    path: &PathLabel,
    circular: CircularConvention,
) -> Result<ModeLinearMap, ElementError> {
    let s = FRAC_1_SQRT_2;
    let x = ModeId::new(path.clone(), Polarization::H);
    let y = ModeId::new(path.clone(), Polarization::V);
    let (h_row, v_row) = match (target, circular) {
        (BasisTarget::RL, CircularConvention::Physical) => {
            ([re(s), Complex64::new(0.0, s)], [Complex64::new(0.0, s), re(s)])
        }
        _ => ([re(s), re(s)], [re(s), re(-s)]),
    };
    let mut rows = Rows::new();
    rows.insert(x.clone(), vec![(x.clone(), h_row[0]), (y.clone(), h_row[1])]);
    rows.insert(y.clone(), vec![(x, v_row[0]), (y, v_row[1])]);
    Ok(ModeLinearMap::new(rows)?)
}

/// Product of displaced vacua: one complex displacement per mode. Modes not
/// stored have amplitude zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentState {
    paths: BTreeSet<PathLabel>,
    amps: BTreeMap<ModeId, Complex64>,
}

impl CoherentState {
    pub fn vacuum<I, P>(paths: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<PathLabel>,
    {
        CoherentState {
            paths: paths.into_iter().map(Into::into).collect(),
            amps: BTreeMap::new(),
        }
    }

    /// Sets a mode's displacement; panics if the path is not declared.
    pub fn with_amplitude(mut self, mode: ModeId, alpha: Complex64) -> Self {
        assert!(self.paths.contains(&mode.path), "undeclared path {}", mode.path);
        self.amps.insert(mode, alpha);
        self
    }

    pub fn paths(&self) -> &BTreeSet<PathLabel> {
        &self.paths
    }

    pub fn amplitude(&self, mode: &ModeId) -> Complex64 {
        self.amps.get(mode).copied().unwrap_or_default()
    }

    /// Nonzero displacements in canonical mode order.
    pub fn amplitudes(&self) -> impl Iterator<Item = (&ModeId, Complex64)> {
        self.amps.iter().filter(|(_, a)| a.norm() > 0.0).map(|(m, a)| (m, *a))
    }

    pub fn modes(&self) -> Vec<ModeId> {
        self.paths
            .iter()
            .flat_map(|p| Polarization::BOTH.map(|pol| ModeId::new(p.clone(), pol)))
            .collect()
    }

    pub fn mean_photons(&self, mode: &ModeId) -> f64 {
        self.amplitude(mode).norm_sqr()
    }

    pub fn total_mean_photons(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }
}

/// Transforms displacement amplitudes by the element's mode matrix:
/// `α_out(q) = Σ_p M[p→q] α_in(p)`.
pub fn coherent_apply(map: &ModeLinearMap, cs: &CoherentState) -> Result<CoherentState, AlgebraError> {
    for path in map.paths() {
        if !cs.paths.contains(path) {
            return Err(AlgebraError::UndeclaredMode(path.clone()));
        }
    }
    let deviation = map.isometry_deviation();
    if deviation > crate::algebra::ISOMETRY_TOL {
        return Err(AlgebraError::NonIsometricMap { deviation });
    }
    let outputs = map.outputs();
    let mut amps: BTreeMap<ModeId, Complex64> = BTreeMap::new();
    for (mode, alpha) in &cs.amps {
        match map.row(mode) {
            Some(row) => {
                for (out, c) in row {
                    *amps.entry(out.clone()).or_default() += c * alpha;
                }
            }
            None => {
                if alpha.norm() > 0.0 && outputs.contains(mode) {
                    return Err(AlgebraError::ModeCollision(mode.clone()));
                }
                *amps.entry(mode.clone()).or_default() += alpha;
            }
        }
    }
    amps.retain(|_, a| a.norm() > 0.0);
    Ok(CoherentState {
        paths: cs.paths.clone(),
        amps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FockPolyState, Monomial};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn p(s: &str) -> PathLabel {
        PathLabel::new(s)
    }

    fn ports(a: &str, b: Option<&str>) -> [Option<PathLabel>; 2] {
        [Some(p(a)), b.map(p)]
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn half_bs_matrix() {
        let m = bs_map(0.5, &ports("1", Some("2")), &[p("3"), p("4")]).unwrap();
        let s = FRAC_1_SQRT_2;
        for pol in Polarization::BOTH {
            let a = ModeId::new("1", pol);
            let b = ModeId::new("2", pol);
            let c = ModeId::new("3", pol);
            let d = ModeId::new("4", pol);
            assert!(close(m.coefficient(&a, &c), re(s)));
            assert!(close(m.coefficient(&a, &d), re(s)));
            assert!(close(m.coefficient(&b, &c), re(s)));
            assert!(close(m.coefficient(&b, &d), re(-s)));
        }
    }

    #[test]
    fn eta_zero_is_diag_one_minus_one() {
        let m = bs_map(0.0, &ports("1", Some("2")), &[p("1"), p("2")]).unwrap();
        assert_eq!(m.coefficient(&ModeId::h("1"), &ModeId::h("1")), re(1.0));
        assert_eq!(m.coefficient(&ModeId::h("2"), &ModeId::h("2")), re(-1.0));
        assert_eq!(m.coefficient(&ModeId::h("1"), &ModeId::h("2")), re(0.0));
    }

    #[test]
    fn half_bs_is_involutory() {
        let m = bs_map(0.5, &ports("1", Some("2")), &[p("1"), p("2")]).unwrap();
        let twice = m.then(&m);
        for a in [ModeId::h("1"), ModeId::h("2"), ModeId::v("1"), ModeId::v("2")] {
            for b in [ModeId::h("1"), ModeId::h("2"), ModeId::v("1"), ModeId::v("2")] {
                let expected = if a == b { re(1.0) } else { re(0.0) };
                assert!(close(twice.coefficient(&a, &b), expected), "{a} -> {b}");
            }
        }
    }

    #[test]
    fn eta_out_of_range() {
        assert_eq!(
            bs_map(1.2, &ports("1", None), &[p("1"), p("2")]).unwrap_err(),
            ElementError::EtaOutOfRange(1.2)
        );
        assert!(bs_map(-0.1, &ports("1", None), &[p("1"), p("2")]).is_err());
    }

    #[test]
    fn repeated_ports_rejected() {
        assert_eq!(
            bs_map(0.5, &ports("1", Some("1")), &[p("1"), p("2")]).unwrap_err(),
            ElementError::RepeatedPort("input")
        );
        assert_eq!(
            pbs_map(&ports("1", None), &[p("2"), p("2")]).unwrap_err(),
            ElementError::RepeatedPort("output")
        );
    }

    #[test]
    fn vacuum_port_has_no_row() {
        let m = bs_map(0.5, &ports("1", None), &[p("1"), p("3")]).unwrap();
        assert_eq!(m.rows().len(), 2);
        assert!(m.row(&ModeId::h("3")).is_none());
    }

    #[test]
    fn pbs_routes_polarizations() {
        let (alpha, paths) = (PI / 3.0, ["1", "2", "c", "d"]);
        let m = pbs_map(&ports("1", Some("2")), &[p("c"), p("d")]).unwrap();
        let input = FockPolyState::from_terms(
            paths,
            [
                (Monomial::single(ModeId::v("1")), re(alpha.cos())),
                (Monomial::single(ModeId::h("1")), re(alpha.sin())),
            ],
        );
        let out = input.substitute(&m).unwrap();
        assert!(close(out.amplitude(&Monomial::single(ModeId::v("d"))), re(alpha.cos())));
        assert!(close(out.amplitude(&Monomial::single(ModeId::h("c"))), re(alpha.sin())));

        let h2 = FockPolyState::from_terms(paths, [(Monomial::single(ModeId::h("2")), re(1.0))]);
        let out = h2.substitute(&m).unwrap();
        assert_eq!(out.amplitude(&Monomial::single(ModeId::h("d"))), re(1.0));

        let pair = FockPolyState::from_terms(
            paths,
            [(
                Monomial::from_pairs([(ModeId::h("1"), 1), (ModeId::v("1"), 1)]),
                re(1.0),
            )],
        );
        let out = pair.substitute(&m).unwrap();
        let split = Monomial::from_pairs([(ModeId::h("c"), 1), (ModeId::v("d"), 1)]);
        assert_eq!(out.amplitude(&split), re(1.0));
    }

    #[test]
    fn pr_phases() {
        let path = p("3");
        let id = pr_map(0.0, &path).unwrap();
        let v = FockPolyState::from_terms(["3"], [(Monomial::single(ModeId::v("3")), re(1.0))]);
        assert_eq!(v.substitute(&id).unwrap(), v);

        let phi = 0.7;
        let out = v.substitute(&pr_map(phi, &path).unwrap()).unwrap();
        assert!(close(
            out.amplitude(&Monomial::single(ModeId::v("3"))),
            Complex64::cis(phi)
        ));

        let pi = pr_map(PI, &path).unwrap();
        let twice = v.substitute(&pi).unwrap().substitute(&pi).unwrap();
        assert!(close(twice.amplitude(&Monomial::single(ModeId::v("3"))), re(1.0)));
    }

    #[test]
    fn hwp_follows_retarder_model() {
        let path = p("2");
        let h = FockPolyState::from_terms(["2"], [(Monomial::single(ModeId::h("2")), re(1.0))]);
        assert_eq!(h.substitute(&hwp_map(FRAC_PI_4, &path).unwrap()).unwrap(), h);
        let v = FockPolyState::from_terms(["2"], [(Monomial::single(ModeId::v("2")), re(1.0))]);
        let out = v.substitute(&hwp_map(FRAC_PI_4, &path).unwrap()).unwrap();
        assert!(close(
            out.amplitude(&Monomial::single(ModeId::v("2"))),
            Complex64::cis(FRAC_PI_4)
        ));
        assert_eq!(v.substitute(&hwp_map(0.0, &path).unwrap()).unwrap(), v);
    }

    #[test]
    fn basis_change_examples() {
        let path = p("5");
        let m = basis_map(BasisTarget::RL, &path, CircularConvention::Real).unwrap();
        let h = FockPolyState::from_terms(["5"], [(Monomial::single(ModeId::h("5")), re(1.0))]);
        let out = h.substitute(&m).unwrap();
        assert!(close(
            out.amplitude(&Monomial::single(ModeId::h("5"))),
            re(FRAC_1_SQRT_2)
        ));
        assert!(close(
            out.amplitude(&Monomial::single(ModeId::v("5"))),
            re(FRAC_1_SQRT_2)
        ));
        let back = out.substitute(&m).unwrap();
        assert!(close(back.amplitude(&Monomial::single(ModeId::h("5"))), re(1.0)));
        assert_eq!(back.len(), 1);

        let g = Complex64::new(0.3, -0.2);
        let cs = CoherentState::vacuum(["5"])
            .with_amplitude(ModeId::h("5"), g)
            .with_amplitude(ModeId::v("5"), -g);
        let out = coherent_apply(&m, &cs).unwrap();
        assert!(out.amplitude(&ModeId::h("5")).norm() < 1e-15);
        assert!(close(out.amplitude(&ModeId::v("5")), g * 2f64.sqrt()));
    }

    #[test]
    fn physical_circular_convention_is_unitary() {
        let m = basis_map(BasisTarget::RL, &p("1"), CircularConvention::Physical).unwrap();
        assert!(m.isometry_deviation() < 1e-15);
        assert!(close(
            m.coefficient(&ModeId::h("1"), &ModeId::v("1")),
            Complex64::new(0.0, FRAC_1_SQRT_2)
        ));
    }

    #[test]
    fn coherent_through_low_transmission_bs() {
        let t: f64 = 0.1;
        let alpha = Complex64::new(0.8, 0.1);
        let m = bs_map(1.0 - t, &ports("1", None), &[p("2"), p("3")]).unwrap();
        let cs = CoherentState::vacuum(["1", "2", "3"]).with_amplitude(ModeId::h("1"), alpha);
        let out = coherent_apply(&m, &cs).unwrap();
        assert!(close(out.amplitude(&ModeId::h("2")), alpha * t.sqrt()));
        assert!(close(out.amplitude(&ModeId::h("3")), alpha * (1.0 - t).sqrt()));
        assert!((out.total_mean_photons() - cs.total_mean_photons()).abs() < 1e-14);
    }

    #[test]
    fn pbs_on_diagonal_pair_gives_equal_amplitudes() {
        let alpha = 1.0;
        let s = FRAC_1_SQRT_2;
        let cs = CoherentState::vacuum(["1", "2", "3", "4"])
            .with_amplitude(ModeId::h("1"), re(alpha * s))
            .with_amplitude(ModeId::v("1"), re(alpha * s))
            .with_amplitude(ModeId::h("2"), re(alpha * s))
            .with_amplitude(ModeId::v("2"), re(-alpha * s));
        let m = pbs_map(&ports("1", Some("2")), &[p("3"), p("4")]).unwrap();
        let out = coherent_apply(&m, &cs).unwrap();
        assert!(close(out.amplitude(&ModeId::h("3")), re(alpha * s)));
        assert!(close(out.amplitude(&ModeId::v("3")), re(-alpha * s)));
        assert!(close(out.amplitude(&ModeId::h("4")), re(alpha * s)));
        assert!(close(out.amplitude(&ModeId::v("4")), re(alpha * s)));
        assert_eq!(out.amplitude(&ModeId::h("1")), re(0.0));
    }

    #[test]
    fn zero_amplitude_stays_zero() {
        let cs = CoherentState::vacuum(["1", "2"]);
        let m = bs_map(0.3, &ports("1", Some("2")), &[p("1"), p("2")]).unwrap();
        let out = coherent_apply(&m, &cs).unwrap();
        assert_eq!(out.amplitudes().count(), 0);
    }
}
