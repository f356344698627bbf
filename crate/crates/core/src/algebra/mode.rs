use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Polarization slot of a path. Derived bases (R/L, ±45°) reuse these two
/// slots after a basis-change element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub fn as_char(self) -> char {
        match self {
            Polarization::H => 'H',
            Polarization::V => 'V',
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Opaque path label, e.g. `1`, `bob`, `arm_3`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathLabel(String);

impl PathLabel {
    pub fn new(label: impl Into<String>) -> Self {
        PathLabel(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Labels are non-empty runs of ASCII alphanumerics and underscores.
    pub fn is_valid(label: &str) -> bool {
        !label.is_empty() && label.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
    }
}

impl fmt::Display for PathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PathLabel {
    fn from(s: &str) -> Self {
        PathLabel::new(s)
    }
}

/// A single bosonic mode: one polarization slot of one path.
///
/// Ordering is lexicographic by path label, then `H < V`; monomials rely on
/// it for their canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId {
    pub path: PathLabel,
    pub pol: Polarization,
}

impl ModeId {
    pub fn new(path: impl Into<PathLabel>, pol: Polarization) -> Self {
        ModeId { path: path.into(), pol }
    }

    pub fn h(path: &str) -> Self {
        ModeId::new(path, Polarization::H)
    }

    pub fn v(path: &str) -> Self {
        ModeId::new(path, Polarization::V)
    }
}

/// Formats as `<path><pol>`, the key used in serialized occupations.
impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.path, self.pol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid mode `{0}`: expected <path><H|V>")]
pub struct ParseModeError(pub String);

impl FromStr for ModeId {
    type Err = ParseModeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (path, pol) = match s.char_indices().last() {
            Some((i, 'H')) => (&s[..i], Polarization::H),
            Some((i, 'V')) => (&s[..i], Polarization::V),
            _ => return Err(ParseModeError(s.to_string())),
        };
        if !PathLabel::is_valid(path) {
            return Err(ParseModeError(s.to_string()));
        }
        Ok(ModeId::new(path, pol))
    }
}

impl Serialize for ModeId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_path_then_polarization() {
        let mut modes = [ModeId::v("2"), ModeId::h("2"), ModeId::v("1"), ModeId::h("1")];
        modes.sort();
        let names: Vec<String> = modes.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["1H", "1V", "2H", "2V"]);
    }

    #[test]
    fn parse_mode_keys() {
        assert_eq!("3H".parse::<ModeId>().unwrap(), ModeId::h("3"));
        assert_eq!("bob_V".parse::<ModeId>().unwrap(), ModeId::new("bob_", Polarization::V));
        assert!("H".parse::<ModeId>().is_err());
        assert!("3X".parse::<ModeId>().is_err());
        assert!("a-bH".parse::<ModeId>().is_err());
    }
}
