use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use super::map::ModeLinearMap;
use super::mode::{ModeId, PathLabel};
use super::monomial::Monomial;
use super::AlgebraError;

pub const DEFAULT_PRUNE_EPS: f64 = 1e-12;

/// Multi-mode photonic state as a polynomial in creation operators acting on
/// the vacuum.
///
/// Amplitudes are stored in the orthonormal Fock basis: the amplitude of a
/// monomial `Π (a†_m)^{n_m}` is its raw operator coefficient times
/// `√(Π n_m!)`. The norm is therefore the plain ℓ² norm of the amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockPolyState {
    paths: BTreeSet<PathLabel>,
    terms: BTreeMap<Monomial, Complex64>,
    prune_eps: f64,
}

impl FockPolyState {
    /// Empty (zero) state over the given path universe.
    pub fn empty<I, P>(paths: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<PathLabel>,
    {
        FockPolyState {
            paths: paths.into_iter().map(Into::into).collect(),
            terms: BTreeMap::new(),
            prune_eps: DEFAULT_PRUNE_EPS,
        }
    }

    /// Vacuum with amplitude one.
    pub fn vacuum<I, P>(paths: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<PathLabel>,
    {
        let mut s = Self::empty(paths);
        s.terms.insert(Monomial::vacuum(), Complex64::new(1.0, 0.0));
        s
    }

    /// Builds from orthonormal-basis amplitudes, collecting repeated
    /// monomials and pruning.
    pub fn from_terms<I, P, T>(paths: I, terms: T) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<PathLabel>,
        T: IntoIterator<Item = (Monomial, Complex64)>,
    {
        let mut s = Self::empty(paths);
        for (m, a) in terms {
            *s.terms.entry(m).or_default() += a;
        }
        s.prune();
        s
    }

    pub fn with_prune_eps(mut self, eps: f64) -> Self {
        self.prune_eps = eps;
        self.prune();
        self
    }

    pub fn prune_eps(&self) -> f64 {
        self.prune_eps
    }

    pub fn paths(&self) -> &BTreeSet<PathLabel> {
        &self.paths
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Complex64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// All modes of the declared paths, in canonical order.
    pub fn modes(&self) -> Vec<ModeId> {
        self.paths
            .iter()
            .flat_map(|p| super::Polarization::BOTH.map(|pol| ModeId::new(p.clone(), pol)))
            .collect()
    }

    pub fn has_path(&self, path: &PathLabel) -> bool {
        self.paths.contains(path)
    }

    fn prune(&mut self) {
        let eps = self.prune_eps;
        self.terms.retain(|_, a| a.norm() >= eps);
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨a|b⟩`, conjugate-linear in `a`.
    pub fn inner_product(&self, other: &FockPolyState) -> Complex64 {
        let (small, large, flip) = if self.terms.len() <= other.terms.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::default();
        for (m, x) in &small.terms {
            if let Some(y) = large.terms.get(m) {
                acc += if flip { y.conj() * x } else { x.conj() * y };
            }
        }
        acc
    }

    /// `ca·a + cb·b`, collected and pruned with `a`'s tolerance.
    pub fn superpose(a: &FockPolyState, ca: Complex64, b: &FockPolyState, cb: Complex64) -> FockPolyState {
        let mut out = FockPolyState {
            paths: a.paths.union(&b.paths).cloned().collect(),
            terms: BTreeMap::new(),
            prune_eps: a.prune_eps,
        };
        for (m, x) in &a.terms {
            *out.terms.entry(m.clone()).or_default() += ca * x;
        }
        for (m, y) in &b.terms {
            *out.terms.entry(m.clone()).or_default() += cb * y;
        }
        out.prune();
        out
    }

    pub fn scaled(&self, c: Complex64) -> FockPolyState {
        let mut out = self.clone();
        for a in out.terms.values_mut() {
            *a *= c;
        }
        out.prune();
        out
    }

    /// Product state: multiplies the creation-operator polynomials of two
    /// states. Used to combine independent sources.
    pub fn product(&self, other: &FockPolyState) -> FockPolyState {
        let mut raw: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m1, a1) in &self.terms {
            for (m2, a2) in &other.terms {
                let mut m = m1.clone();
                for (mode, n) in m2.iter() {
                    m.raise(mode.clone(), n);
                }
                let c = a1 / m1.factorial_norm() * a2 / m2.factorial_norm();
                *raw.entry(m).or_default() += c;
            }
        }
        let terms = raw.into_iter().map(|(m, c)| {
            let f = m.factorial_norm();
            (m, c * f)
        });
        let mut out = FockPolyState::from_terms(self.paths.union(&other.paths).cloned(), terms);
        out.prune_eps = self.prune_eps;
        out.prune();
        out
    }

    /// Applies a mode substitution: every creation operator with a row in
    /// `map` is replaced by its linear combination of output operators, the
    /// products are expanded and like monomials collected.
    pub fn substitute(&self, map: &ModeLinearMap) -> Result<FockPolyState, AlgebraError> {
        for path in map.paths() {
            if !self.paths.contains(path) {
                return Err(AlgebraError::UndeclaredMode(path.clone()));
            }
        }
        let deviation = map.isometry_deviation();
        if deviation > super::map::ISOMETRY_TOL {
            return Err(AlgebraError::NonIsometricMap { deviation });
        }
        let outputs = map.outputs();

        let mut collected: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (monomial, amp) in &self.terms {
            // raw operator coefficient
            let mut partial: BTreeMap<Monomial, Complex64> = BTreeMap::new();
            partial.insert(Monomial::vacuum(), amp / monomial.factorial_norm());
            for (mode, n) in monomial.iter() {
                match map.row(mode) {
                    Some(row) => {
                        for _ in 0..n {
                            partial = multiply_linear(&partial, row);
                        }
                    }
                    None => {
                        if outputs.contains(mode) {
                            return Err(AlgebraError::ModeCollision(mode.clone()));
                        }
                        partial = partial
                            .into_iter()
                            .map(|(mut m, c)| {
                                m.raise(mode.clone(), n);
                                (m, c)
                            })
                            .collect();
                    }
                }
            }
            for (m, c) in partial {
                *collected.entry(m).or_default() += c;
            }
        }

        let mut out = FockPolyState {
            paths: self.paths.clone(),
            terms: collected
                .into_iter()
                .map(|(m, c)| {
                    let f = m.factorial_norm();
                    (m, c * f)
                })
                .collect(),
            prune_eps: self.prune_eps,
        };
        out.prune();
        Ok(out)
    }

    pub fn max_occupation(&self) -> u32 {
        self.terms.keys().map(Monomial::max_occupation).max().unwrap_or(0)
    }

    /// Largest total photon number among the terms.
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }
}

fn multiply_linear(poly: &BTreeMap<Monomial, Complex64>, row: &[(ModeId, Complex64)]) -> BTreeMap<Monomial, Complex64> {
    let mut out: BTreeMap<Monomial, Complex64> = BTreeMap::new();
    for (m, c) in poly {
        for (mode, k) in row {
            *out.entry(m.with_raised(mode)).or_default() += c * k;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn bs_half(p: &str, q: &str) -> ModeLinearMap {
        let s = FRAC_1_SQRT_2;
        let mut rows = BTreeMap::new();
        rows.insert(ModeId::h(p), vec![(ModeId::h(p), re(s)), (ModeId::h(q), re(s))]);
        rows.insert(ModeId::h(q), vec![(ModeId::h(p), re(s)), (ModeId::h(q), re(-s))]);
        ModeLinearMap::new(rows).unwrap()
    }

    #[test]
    fn norm_examples() {
        let vac = FockPolyState::vacuum(["1"]);
        assert_eq!(vac.norm(), 1.0);
        let s = FockPolyState::from_terms(
            ["1"],
            [
                (Monomial::single(ModeId::h("1")), re(0.6)),
                (Monomial::single(ModeId::v("1")), Complex64::new(0.0, 0.8)),
            ],
        );
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert_eq!(FockPolyState::empty(["1"]).norm(), 0.0);
    }

    #[test]
    fn identity_substitution_round_trips_factorials() {
        let two = Monomial::from_pairs([(ModeId::h("1"), 2)]);
        let s = FockPolyState::from_terms(["1"], [(two.clone(), re(1.0))]);
        let out = s.substitute(&ModeLinearMap::identity()).unwrap();
        assert_eq!(out, s);
        assert_eq!(out.amplitude(&two), re(1.0));
    }

    #[test]
    fn single_photon_split() {
        let s = FockPolyState::from_terms(["1", "3"], [(Monomial::single(ModeId::h("1")), re(1.0))]);
        let out = s.substitute(&bs_half("1", "3")).unwrap();
        assert_eq!(out.len(), 2);
        assert!((out.amplitude(&Monomial::single(ModeId::h("1"))) - re(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((out.amplitude(&Monomial::single(ModeId::h("3"))) - re(FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn hong_ou_mandel_pair() {
        let input = Monomial::from_pairs([(ModeId::h("1"), 1), (ModeId::h("2"), 1)]);
        let s = FockPolyState::from_terms(["1", "2"], [(input.clone(), re(1.0))]);
        let out = s.substitute(&bs_half("1", "2")).unwrap();
        let both1 = Monomial::from_pairs([(ModeId::h("1"), 2)]);
        let both2 = Monomial::from_pairs([(ModeId::h("2"), 2)]);
        assert!((out.amplitude(&both1) - re(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((out.amplitude(&both2) - re(-FRAC_1_SQRT_2)).norm() < 1e-15);
        assert_eq!(out.amplitude(&input), re(0.0));
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn undeclared_path_rejected() {
        let s = FockPolyState::vacuum(["1"]);
        let err = s.substitute(&bs_half("1", "9")).unwrap_err();
        assert_eq!(err, AlgebraError::UndeclaredMode(PathLabel::new("9")));
    }

    #[test]
    fn collision_with_occupied_output_rejected() {
        let s = FockPolyState::from_terms(["1", "3"], [(Monomial::single(ModeId::h("3")), re(1.0))]);
        let mut rows = BTreeMap::new();
        rows.insert(
            ModeId::h("1"),
            vec![(ModeId::h("1"), re(FRAC_1_SQRT_2)), (ModeId::h("3"), re(FRAC_1_SQRT_2))],
        );
        let map = ModeLinearMap::new(rows).unwrap();
        assert_eq!(
            s.substitute(&map).unwrap_err(),
            AlgebraError::ModeCollision(ModeId::h("3"))
        );
    }

    #[test]
    fn superpose_examples() {
        let s = FockPolyState::from_terms(["1"], [(Monomial::single(ModeId::h("1")), re(1.0))]);
        let empty = FockPolyState::empty(["1"]);
        assert_eq!(FockPolyState::superpose(&s, re(1.0), &empty, re(0.0)), s);
        let cancel = FockPolyState::superpose(&s, re(FRAC_1_SQRT_2), &s, re(-FRAC_1_SQRT_2));
        assert!(cancel.is_empty());
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first() {
        let h = FockPolyState::from_terms(["1"], [(Monomial::single(ModeId::h("1")), Complex64::new(0.0, 1.0))]);
        let h2 = FockPolyState::from_terms(["1"], [(Monomial::single(ModeId::h("1")), re(1.0))]);
        assert_eq!(h.inner_product(&h2), Complex64::new(0.0, -1.0));
        assert_eq!(h2.inner_product(&h), Complex64::new(0.0, 1.0));
        let v = FockPolyState::from_terms(["1"], [(Monomial::single(ModeId::v("1")), re(1.0))]);
        assert_eq!(h.inner_product(&v), re(0.0));
    }

    #[test]
    fn product_of_same_mode_photons_has_sqrt2_amplitude() {
        let h = FockPolyState::from_terms(["1"], [(Monomial::single(ModeId::h("1")), re(1.0))]);
        let hh = h.product(&h);
        // (a†)²|0⟩ = √2 |2⟩
        let two = Monomial::from_pairs([(ModeId::h("1"), 2)]);
        assert!((hh.amplitude(&two) - re(2f64.sqrt())).norm() < 1e-15);
    }
}
