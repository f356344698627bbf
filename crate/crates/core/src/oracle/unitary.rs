use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{OracleError, UNITARY_TOL};
use crate::algebra::{ModeId, ModeLinearMap, PathLabel, Polarization};
use crate::dsl::BoundCircuit;
use crate::elements::{CircularConvention, Element};

/// A unitary on an ordered mode list, acting on single-photon amplitude
/// vectors: column `j` is the image of `a†_{modes[j]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary {
    pub modes: Vec<ModeId>,
    pub matrix: DMatrix<Complex64>,
}

impl ModeUnitary {
    pub fn identity(modes: Vec<ModeId>) -> Self {
        let n = modes.len();
        ModeUnitary {
            modes,
            matrix: DMatrix::identity(n, n),
        }
    }

    /// Builds from a matrix, checking U†U = I within [`UNITARY_TOL`].
    pub fn new(modes: Vec<ModeId>, matrix: DMatrix<Complex64>) -> Result<Self, OracleError> {
        assert_eq!(matrix.nrows(), modes.len(), "matrix size must match the mode list");
        assert_eq!(matrix.ncols(), modes.len(), "matrix size must match the mode list");
        let u = ModeUnitary { modes, matrix };
        let deviation = u.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(OracleError::NotUnitary { deviation });
        }
        Ok(u)
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    /// max |(U†U − I)_jk|.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        let gram = self.matrix.adjoint() * &self.matrix;
        (gram - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Entry ⟨out| U |in⟩, zero for modes outside the list.
    pub fn entry(&self, output: &ModeId, input: &ModeId) -> Complex64 {
        match (self.index_of(output), self.index_of(input)) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => Complex64::default(),
        }
    }

    pub fn index_of(&self, mode: &ModeId) -> Option<usize> {
        self.modes.binary_search(mode).ok()
    }
}

/// One element as a unitary on the full mode list, factored as a path swap
/// followed by a small unitary on the element's output modes.
///
/// Input-only paths are first swapped into output-only paths (which are
/// empty by validation), so the element's rows all live on output modes;
/// rows for the remaining empty output modes are completed by Gram–Schmidt.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementAction {
    pub swaps: Vec<(PathLabel, PathLabel)>,
    pub local: ModeUnitary,
}

impl ElementAction {
    /// The action embedded as a matrix on `modes` (identity elsewhere).
    pub fn embed(&self, modes: &[ModeId]) -> DMatrix<Complex64> {
        let n = modes.len();
        let index: BTreeMap<&ModeId, usize> = modes.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut perm = DMatrix::<Complex64>::identity(n, n);
        for (a, b) in &self.swaps {
            for pol in Polarization::BOTH {
                let (i, j) = (index[&ModeId::new(a.clone(), pol)], index[&ModeId::new(b.clone(), pol)]);
                perm.swap_rows(i, j);
            }
        }
        let mut local = DMatrix::<Complex64>::identity(n, n);
        let pos: Vec<usize> = self.local.modes.iter().map(|m| index[m]).collect();
        for (a, &i) in pos.iter().enumerate() {
            for (b, &j) in pos.iter().enumerate() {
                local[(i, j)] = self.local.matrix[(a, b)];
            }
        }
        local * perm
    }
}

pub fn element_action(element: &Element, circular: CircularConvention) -> Result<ElementAction, OracleError> {
    let map = element
        .mode_map(circular)
        .map_err(|source| OracleError::Element { line: 0, source })?;
    action_from_map(element, &map)
}

fn action_from_map(element: &Element, map: &ModeLinearMap) -> Result<ElementAction, OracleError> {
    let ins: Vec<PathLabel> = element.input_paths().into_iter().cloned().collect();
    let mut outs: Vec<PathLabel> = element.output_paths().into_iter().cloned().collect();
    let in_only: Vec<&PathLabel> = ins.iter().filter(|p| !outs.contains(p)).collect();
    let out_only: Vec<&PathLabel> = outs.iter().filter(|p| !ins.contains(p)).collect();
    let swaps: Vec<(PathLabel, PathLabel)> = in_only
        .iter()
        .zip(&out_only)
        .map(|(a, b)| ((*a).clone(), (*b).clone()))
        .collect();
    let renamed = |p: &PathLabel| -> PathLabel {
        swaps
            .iter()
            .find(|(a, _)| a == p)
            .map_or_else(|| p.clone(), |(_, b)| b.clone())
    };

    outs.sort();
    outs.dedup();
    let modes: Vec<ModeId> = outs
        .iter()
        .flat_map(|p| Polarization::BOTH.map(|pol| ModeId::new(p.clone(), pol)))
        .collect();
    let k = modes.len();
    let index = |m: &ModeId| modes.binary_search(m).expect("element rows land on output modes");

    let mut columns: Vec<Option<Vec<Complex64>>> = vec![None; k];
    for (input, row) in map.rows() {
        let j = index(&ModeId::new(renamed(&input.path), input.pol));
        let mut col = vec![Complex64::default(); k];
        for (out, c) in row {
            col[index(out)] += *c;
        }
        columns[j] = Some(col);
    }
    let matrix = complete_columns(columns);
    Ok(ElementAction {
        swaps,
        local: ModeUnitary::new(modes, matrix)?,
    })
}

/// Fills missing columns with unit vectors orthogonal to all others,
/// trying standard basis vectors in order.
fn complete_columns(mut columns: Vec<Option<Vec<Complex64>>>) -> DMatrix<Complex64> {
    let k = columns.len();
    let dot = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>();
    let mut candidate = 0;
    for j in 0..k {
        if columns[j].is_some() {
            continue;
        }
        loop {
            assert!(candidate < k, "an isometry always has a unitary completion");
            let mut v = vec![Complex64::default(); k];
            v[candidate] = Complex64::new(1.0, 0.0);
            candidate += 1;
            // two passes of modified Gram–Schmidt for stability
            for _ in 0..2 {
                for col in columns.iter().flatten() {
                    let c = dot(col, &v);
                    for (x, y) in v.iter_mut().zip(col) {
                        *x -= c * y;
                    }
                }
            }
            let norm = dot(&v, &v).re.sqrt();
            if norm > 1e-6 {
                columns[j] = Some(v.into_iter().map(|x| x / norm).collect());
                break;
            }
        }
    }
    DMatrix::from_fn(k, k, |i, j| columns[j].as_ref().expect("completed")[i])
}

/// Product of the per-element unitaries on the circuit's full mode list,
/// in element order.
pub fn mode_unitary(bc: &BoundCircuit, circular: CircularConvention) -> Result<ModeUnitary, OracleError> {
    let modes: Vec<ModeId> = bc
        .paths
        .iter()
        .flat_map(|p| Polarization::BOTH.map(|pol| ModeId::new(p.clone(), pol)))
        .collect();
    let mut total = ModeUnitary::identity(modes);
    for el in &bc.elements {
        let action = element_action(&el.element, circular).map_err(|e| with_line(e, el.line))?;
        total.matrix = action.embed(&total.modes) * &total.matrix;
    }
    Ok(total)
}

pub(crate) fn with_line(e: OracleError, line: usize) -> OracleError {
    match e {
        OracleError::Element { source, .. } => OracleError::Element { line, source },
        other => other,
    }
}

/// Hermitian `H` with `exp(iH) = U`, eigenphases in (−π, π].
///
/// The eigenbasis comes from the Hermitian matrix (e^{−iφ}U + e^{iφ}U†)/2,
/// which commutes with U. Its eigenvalues are cos(θ − φ), so two distinct
/// eigenphases symmetric about φ would collide; a few rotation angles are
/// tried and the one that diagonalizes U is kept.
pub fn unitary_log(u: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, OracleError> {
    let n = u.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    const ANGLES: [f64; 6] = [0.371_1, 1.234_5, 2.653_7, -0.915_7, -2.023_9, 0.055_5];
    for phi in ANGLES {
        let rot = Complex64::from_polar(1.0, -phi);
        let b = (u * rot + u.adjoint() * rot.conj()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(b);
        let v = eig.eigenvectors;
        let d = v.adjoint() * u * &v;
        let off = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .fold(0.0f64, |m, (i, j)| m.max(d[(i, j)].norm()));
        if off > 1e-9 {
            continue;
        }
        let thetas: Vec<f64> = (0..n)
            .map(|i| {
                let t = d[(i, i)].arg();
                if t <= -std::f64::consts::PI {
                    std::f64::consts::PI
                } else {
                    t
                }
            })
            .collect();
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            thetas.iter().map(|&t| Complex64::new(t, 0.0)),
        ));
        let h = &v * diag * v.adjoint();
        // exact Hermitian part
        return Ok((&h + h.adjoint()) * Complex64::new(0.5, 0.0));
    }
    Err(OracleError::Decomposition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{bind, parse, ParamEnv};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bound(text: &str) -> BoundCircuit {
        bind(&parse(text).unwrap(), &ParamEnv::new()).unwrap()
    }

    fn expm_i(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let eig = SymmetricEigen::new(h.clone());
        let n = h.nrows();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, l)),
        ));
        &eig.eigenvectors * d * eig.eigenvectors.adjoint()
    }

    #[test]
    fn single_balanced_bs() {
        let u = mode_unitary(
            &bound("paths 1,2\nbs eta=0.5 in=1,2 out=1,2\n"),
            CircularConvention::Real,
        )
        .unwrap();
        let s = FRAC_1_SQRT_2;
        let (h1, h2, v1, v2) = (ModeId::h("1"), ModeId::h("2"), ModeId::v("1"), ModeId::v("2"));
        for (a, b) in [(&h1, &h2), (&v1, &v2)] {
            assert!((u.entry(a, a) - c(s)).norm() < 1e-15);
            assert!((u.entry(b, a) - c(s)).norm() < 1e-15);
            assert!((u.entry(a, b) - c(s)).norm() < 1e-15);
            assert!((u.entry(b, b) - c(-s)).norm() < 1e-15);
        }
        assert_eq!(u.entry(&v1, &h1), c(0.0));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let u = mode_unitary(&bound("paths 1,2\n"), CircularConvention::Real).unwrap();
        assert_eq!(u.matrix, DMatrix::identity(4, 4));
    }

    #[test]
    fn pbs_is_a_permutation() {
        let u = mode_unitary(&bound("paths 1,2\npbs in=1,2 out=1,2\n"), CircularConvention::Real).unwrap();
        for z in u.matrix.iter() {
            assert!(z.norm() == 0.0 || (z - c(1.0)).norm() == 0.0);
        }
        assert_eq!(u.entry(&ModeId::h("1"), &ModeId::h("1")), c(1.0));
        assert_eq!(u.entry(&ModeId::v("2"), &ModeId::v("1")), c(1.0));
        assert_eq!(u.entry(&ModeId::v("1"), &ModeId::v("2")), c(1.0));
    }

    #[test]
    fn vacuum_port_completion_is_unitary() {
        let bc = bound("paths 1\nbs eta=0.3 in=1,- out=2,7\npbs in=2,- out=3,4\n");
        let u = mode_unitary(&bc, CircularConvention::Real).unwrap();
        assert!(u.unitarity_deviation() < 1e-14);
        // the photon's route is fixed by the rows, not by the completion
        assert!((u.entry(&ModeId::h("3"), &ModeId::h("1")) - c(0.7f64.sqrt())).norm() < 1e-15);
        assert!((u.entry(&ModeId::v("4"), &ModeId::v("1")) - c(0.7f64.sqrt())).norm() < 1e-15);
        assert!((u.entry(&ModeId::h("7"), &ModeId::h("1")) - c(0.3f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn log_round_trips_awkward_unitaries() {
        let z = c(0.0);
        let o = c(1.0);
        let cycle = DMatrix::from_row_slice(4, 4, &[z, o, z, z, z, z, o, z, z, z, z, o, o, z, z, z]);
        let minus = DMatrix::from_diagonal_element(3, 3, c(-1.0));
        let bs = mode_unitary(
            &bound("paths 1,2\nbs eta=0.2 in=1,2 out=2,1\npr theta=2 path=1\n"),
            Default::default(),
        )
        .unwrap()
        .matrix;
        for u in [cycle, minus, DMatrix::identity(2, 2), bs] {
            let h = unitary_log(&u).unwrap();
            assert!((&h - h.adjoint()).norm() < 1e-14);
            assert!((expm_i(&h) - &u).norm() < 1e-12, "{u}");
        }
    }

    #[test]
    fn log_branch_is_half_open() {
        let h = unitary_log(&DMatrix::from_diagonal_element(1, 1, c(-1.0))).unwrap();
        assert!((h[(0, 0)] - c(std::f64::consts::PI)).norm() < 1e-15);
    }
}
