use std::fmt;

use super::mode::ModeId;

/// Product of creation operators, stored as sorted `(mode, exponent)` pairs
/// with every exponent at least one. The empty monomial is the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    occupancy: Vec<(ModeId, u32)>,
}

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial::default()
    }

    pub fn single(mode: ModeId) -> Self {
        Monomial {
            occupancy: vec![(mode, 1)],
        }
    }

    /// Builds a monomial from arbitrary pairs; repeated modes add up and zero
    /// exponents vanish.
    pub fn from_pairs<I: IntoIterator<Item = (ModeId, u32)>>(pairs: I) -> Self {
        let mut m = Monomial::vacuum();
        for (mode, n) in pairs {
            m.raise(mode, n);
        }
        m
    }

    /// Multiplies in `(a†_mode)^n`.
    pub fn raise(&mut self, mode: ModeId, n: u32) {
        if n == 0 {
            return;
        }
        match self.occupancy.binary_search_by(|(m, _)| m.cmp(&mode)) {
            Ok(i) => self.occupancy[i].1 += n,
            Err(i) => self.occupancy.insert(i, (mode, n)),
        }
    }

    pub fn with_raised(&self, mode: &ModeId) -> Self {
        let mut m = self.clone();
        m.raise(mode.clone(), 1);
        m
    }

    pub fn occupation(&self, mode: &ModeId) -> u32 {
        self.occupancy
            .binary_search_by(|(m, _)| m.cmp(mode))
            .map(|i| self.occupancy[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModeId, u32)> {
        self.occupancy.iter().map(|(m, n)| (m, *n))
    }

    /// Total photon number.
    pub fn degree(&self) -> u32 {
        self.occupancy.iter().map(|(_, n)| n).sum()
    }

    pub fn max_occupation(&self) -> u32 {
        self.occupancy.iter().map(|(_, n)| *n).max().unwrap_or(0)
    }

    pub fn is_vacuum(&self) -> bool {
        self.occupancy.is_empty()
    }

    /// √(Π n_m!), the factor between the raw operator coefficient and the
    /// orthonormal Fock amplitude.
    pub fn factorial_norm(&self) -> f64 {
        self.occupancy
            .iter()
            .map(|(_, n)| factorial(*n))
            .product::<f64>()
            .sqrt()
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (2..=n).map(f64::from).product()
}

/// `|1V⟩`, `|3H^2 4H⟩`, `|vac⟩`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.occupancy.is_empty() {
            return f.write_str("|vac⟩");
        }
        f.write_str("|")?;
        for (i, (mode, n)) in self.occupancy.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{mode}")?;
            if *n > 1 {
                write!(f, "^{n}")?;
            }
        }
        f.write_str("⟩")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_regardless_of_insertion_order() {
        let a = Monomial::from_pairs([(ModeId::v("2"), 1), (ModeId::h("1"), 2)]);
        let b = Monomial::from_pairs([(ModeId::h("1"), 1), (ModeId::v("2"), 1), (ModeId::h("1"), 1)]);
        assert_eq!(a, b);
        assert_eq!(a.degree(), 3);
        assert_eq!(a.occupation(&ModeId::h("1")), 2);
        assert_eq!(a.occupation(&ModeId::h("2")), 0);
        assert_eq!(a.to_string(), "|1H^2 2V⟩");
    }

    #[test]
    fn zero_exponents_are_not_stored() {
        let m = Monomial::from_pairs([(ModeId::h("1"), 0)]);
        assert!(m.is_vacuum());
        assert_eq!(m.to_string(), "|vac⟩");
    }

    #[test]
    fn factorial_norm_values() {
        let m = Monomial::from_pairs([(ModeId::h("1"), 2), (ModeId::v("1"), 3)]);
        assert!((m.factorial_norm() - (2.0f64 * 6.0).sqrt()).abs() < 1e-15);
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
    }
}
