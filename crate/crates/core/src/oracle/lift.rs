use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::unitary::{unitary_log, ModeUnitary};
use super::{largest_fitting_n_max, truncated_dim, OracleError};

/// One fixed-total-photon-number block of a lifted operator.
#[derive(Clone, Debug, PartialEq)]
pub struct FockBlock {
    pub total: u32,
    /// Indices into the truncated space (mixed radix, first mode most
    /// significant) spanning this block.
    pub states: Vec<usize>,
    pub matrix: DMatrix<Complex64>,
}

/// An operator on the truncated Fock space of `n_modes` modes, each holding
/// at most `n_max` photons, stored block-diagonally by total photon number.
/// Entries between different photon numbers are zero by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedOperator {
    pub n_modes: usize,
    pub n_max: u32,
    pub blocks: Vec<FockBlock>,
}

impl LiftedOperator {
    pub fn dim(&self) -> usize {
        truncated_dim(self.n_max, self.n_modes).expect("checked at construction")
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim());
        let mut out = vec![Complex64::default(); v.len()];
        for b in &self.blocks {
            let x = DVector::from_iterator(b.states.len(), b.states.iter().map(|&i| v[i]));
            let y = &b.matrix * x;
            for (k, &i) in b.states.iter().enumerate() {
                out[i] = y[k];
            }
        }
        out
    }

    /// The full matrix; intended for small spaces and tests.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for b in &self.blocks {
            for (r, &i) in b.states.iter().enumerate() {
                for (c, &j) in b.states.iter().enumerate() {
                    m[(i, j)] = b.matrix[(r, c)];
                }
            }
        }
        m
    }

    /// Matrix element ⟨out|Ô|in⟩ for occupation tuples.
    pub fn entry(&self, out: &[u32], input: &[u32]) -> Complex64 {
        let (i, j) = (occupation_index(out, self.n_max), occupation_index(input, self.n_max));
        for b in &self.blocks {
            if let (Some(r), Some(c)) = (
                b.states.iter().position(|&s| s == i),
                b.states.iter().position(|&s| s == j),
            ) {
                return b.matrix[(r, c)];
            }
        }
        Complex64::default()
    }
}

pub(crate) fn occupation_index(occ: &[u32], n_max: u32) -> usize {
    let base = n_max as usize + 1;
    occ.iter().fold(0, |acc, &n| {
        assert!(n <= n_max, "occupation {n} above truncation {n_max}");
        acc * base + n as usize
    })
}

pub(crate) fn index_occupation(mut index: usize, n_modes: usize, n_max: u32) -> Vec<u32> {
    let base = n_max as usize + 1;
    let mut occ = vec![0; n_modes];
    for slot in occ.iter_mut().rev() {
        *slot = (index % base) as u32;
        index /= base;
    }
    occ
}

/// Single-mode annihilation operator truncated at `n_max`: a|n⟩ = √n |n−1⟩.
fn ladder(n_max: u32) -> DMatrix<f64> {
    let d = n_max as usize + 1;
    DMatrix::from_fn(d, d, |r, c| if c == r + 1 { (c as f64).sqrt() } else { 0.0 })
}

/// exp(iĤ) with Ĥ = Σ_jk H_jk a†_j a_k on the truncated space, computed
/// block by block with a Hermitian eigendecomposition.
pub fn lift_hamiltonian(h: &DMatrix<Complex64>, n_max: u32) -> LiftedOperator {
    let k = h.nrows();
    assert_eq!(k, h.ncols());
    let dim = truncated_dim(n_max, k).expect("dimension overflow");
    let a = ladder(n_max);
    let occs: Vec<Vec<u32>> = (0..dim).map(|i| index_occupation(i, k, n_max)).collect();

    let mut blocks = Vec::new();
    for total in 0..=(n_max * k as u32) {
        let states: Vec<usize> = (0..dim).filter(|&i| occs[i].iter().sum::<u32>() == total).collect();
        if states.is_empty() {
            continue;
        }
        let pos = |i: usize| states.binary_search(&i).ok();
        let n = states.len();
        let mut hb = DMatrix::<Complex64>::zeros(n, n);
        for (c, &s) in states.iter().enumerate() {
            for j in 0..k {
                for l in 0..k {
                    let hjl = h[(j, l)];
                    if hjl == Complex64::default() {
                        continue;
                    }
                    // a_l then a†_j, each through the truncated ladder matrix
                    let mut occ = occs[s].clone();
                    let nl = occ[l] as usize;
                    if nl == 0 {
                        continue;
                    }
                    let mut amp = a[(nl - 1, nl)];
                    occ[l] -= 1;
                    let nj = occ[j] as usize;
                    if nj == n_max as usize {
                        continue;
                    }
                    amp *= a[(nj, nj + 1)];
                    occ[j] += 1;
                    let r = pos(occupation_index(&occ, n_max)).expect("hopping keeps the photon number");
                    hb[(r, c)] += hjl * amp;
                }
            }
        }
        let matrix = exp_i_hermitian(&hb);
        blocks.push(FockBlock { total, states, matrix });
    }
    LiftedOperator {
        n_modes: k,
        n_max,
        blocks,
    }
}

/// exp(iM) for Hermitian M through its eigendecomposition.
fn exp_i_hermitian(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let m = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(m);
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, l));
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&phases) * v.adjoint()
}

/// The Fock-space representation of a mode unitary, truncated at `n_max`
/// photons per mode. Exact on every block with total photon number ≤ n_max.
pub fn lift_to_fock(u: &ModeUnitary, n_max: u32, cap: usize) -> Result<LiftedOperator, OracleError> {
    let k = u.dim();
    match truncated_dim(n_max, k) {
        Some(d) if d <= cap => {}
        dim => {
            return Err(OracleError::DimensionCap {
                dim: dim.unwrap_or(usize::MAX),
                cap,
                suggested_n_max: largest_fitting_n_max(&[(k, cap)]),
            })
        }
    }
    let h = unitary_log(&u.matrix)?;
    Ok(lift_hamiltonian(&h, n_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ModeId;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn balanced() -> ModeUnitary {
        let s = FRAC_1_SQRT_2;
        ModeUnitary::new(
            vec![ModeId::h("1"), ModeId::h("2")],
            DMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]),
        )
        .unwrap()
    }

    #[test]
    fn identity_lifts_to_identity() {
        let u = ModeUnitary::identity(vec![ModeId::h("1"), ModeId::v("1"), ModeId::h("2")]);
        let l = lift_to_fock(&u, 2, 4096).unwrap();
        assert!((l.to_dense() - DMatrix::identity(27, 27)).norm() < 1e-14);
    }

    #[test]
    fn single_photon_split() {
        let l = lift_to_fock(&balanced(), 1, 4096).unwrap();
        let s = FRAC_1_SQRT_2;
        assert!((l.entry(&[1, 0], &[1, 0]) - c(s)).norm() < 1e-12);
        assert!((l.entry(&[0, 1], &[1, 0]) - c(s)).norm() < 1e-12);
        assert!((l.entry(&[0, 1], &[0, 1]) - c(-s)).norm() < 1e-12);
        assert!((l.entry(&[0, 0], &[0, 0]) - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let l = lift_to_fock(&balanced(), 2, 4096).unwrap();
        assert!(l.entry(&[1, 1], &[1, 1]).norm() < 1e-12);
        // |1,1⟩ → (|2,0⟩ − |0,2⟩)/√2
        assert!((l.entry(&[2, 0], &[1, 1]) - c(FRAC_1_SQRT_2)).norm() < 1e-12);
        assert!((l.entry(&[0, 2], &[1, 1]) - c(-FRAC_1_SQRT_2)).norm() < 1e-12);
    }

    #[test]
    fn blocks_conserve_photon_number_and_are_unitary() {
        let l = lift_to_fock(&balanced(), 3, 4096).unwrap();
        let dense = l.to_dense();
        for i in 0..16 {
            for j in 0..16 {
                let (ni, nj): (u32, u32) = (
                    index_occupation(i, 2, 3).iter().sum(),
                    index_occupation(j, 2, 3).iter().sum(),
                );
                if ni != nj {
                    assert_eq!(dense[(i, j)], c(0.0));
                }
            }
        }
        for b in l.blocks.iter().filter(|b| b.total <= 3) {
            let n = b.states.len();
            assert!((b.matrix.adjoint() * &b.matrix - DMatrix::identity(n, n)).norm() < 1e-12);
        }
    }

    #[test]
    fn generator_entries_have_cos_sin_moduli() {
        // B = exp(iθ(a†b + b†a)): moduli cos θ and sin θ as for a real beam
        // splitter, but the cross term carries a phase of π/2, not 0 or π.
        let theta = 0.7;
        let h = DMatrix::from_row_slice(2, 2, &[c(0.0), c(theta), c(theta), c(0.0)]);
        let l = lift_hamiltonian(&h, 1);
        let stay = l.entry(&[1, 0], &[1, 0]);
        let hop = l.entry(&[0, 1], &[1, 0]);
        assert!((stay.norm() - theta.cos()).abs() < 1e-12);
        assert!((hop.norm() - theta.sin()).abs() < 1e-12);
        assert!(stay.arg().abs() < 1e-12);
        assert!((hop.arg() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn degenerate_spectrum_lifts_exactly() {
        // a polarization-blind beam splitter on H and V: every eigenvalue of
        // the generator is doubly degenerate
        let (cs, sn) = (0.950476, (1.0f64 - 0.950476 * 0.950476).sqrt());
        let modes = vec![ModeId::h("1"), ModeId::v("1"), ModeId::h("2"), ModeId::v("2")];
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            c(cs), c(0.0), c(sn), c(0.0),
            c(0.0), c(cs), c(0.0), c(sn),
            c(-sn), c(0.0), c(cs), c(0.0),
            c(0.0), c(-sn), c(0.0), c(cs),
        ]);
        let u = ModeUnitary::new(modes, m.clone()).unwrap();
        let l = lift_to_fock(&u, 1, 4096).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let (mut oi, mut oj) = ([0; 4], [0; 4]);
                oi[i] = 1;
                oj[j] = 1;
                assert!((l.entry(&oi, &oj) - m[(i, j)]).norm() < 1e-12, "entry ({i}, {j})");
            }
        }
    }

    #[test]
    fn cap_suggests_a_fitting_truncation() {
        let u = ModeUnitary::identity(vec![ModeId::h("1"), ModeId::h("2"), ModeId::h("3"), ModeId::h("4")]);
        match lift_to_fock(&u, 9, 4096) {
            Err(OracleError::DimensionCap {
                dim,
                cap,
                suggested_n_max,
            }) => {
                assert_eq!((dim, cap, suggested_n_max), (10_000, 4096, 7));
            }
            other => panic!("{other:?}"),
        }
    }
}
