use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use super::mode::{ModeId, PathLabel};
use super::AlgebraError;

/// Column-orthonormality tolerance for every element map.
pub const ISOMETRY_TOL: f64 = 1e-12;

/// Linear substitution on creation operators: each input mode's `a†` is
/// replaced by `Σ coeff · c†_out`. Modes without a row pass through.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeLinearMap {
    rows: BTreeMap<ModeId, Vec<(ModeId, Complex64)>>,
}

impl ModeLinearMap {
    /// Validates the rows as an isometry (rows of the substitution are the
    /// columns of the mode matrix and must be orthonormal).
    pub fn new(rows: BTreeMap<ModeId, Vec<(ModeId, Complex64)>>) -> Result<Self, AlgebraError> {
        let map = Self::new_unchecked(rows);
        let deviation = map.isometry_deviation();
        if deviation > ISOMETRY_TOL {
            return Err(AlgebraError::NonIsometricMap { deviation });
        }
        Ok(map)
    }

    /// Builds without the isometry check; duplicate outputs within a row are
    /// merged and exact zeros dropped.
    pub fn new_unchecked(rows: BTreeMap<ModeId, Vec<(ModeId, Complex64)>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|(input, outs)| {
                let mut merged: BTreeMap<ModeId, Complex64> = BTreeMap::new();
                for (out, c) in outs {
                    *merged.entry(out).or_default() += c;
                }
                let outs = merged
                    .into_iter()
                    .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                    .collect();
                (input, outs)
            })
            .collect();
        ModeLinearMap { rows }
    }

    pub fn identity() -> Self {
        ModeLinearMap { rows: BTreeMap::new() }
    }

    pub fn rows(&self) -> &BTreeMap<ModeId, Vec<(ModeId, Complex64)>> {
        &self.rows
    }

    pub fn row(&self, input: &ModeId) -> Option<&[(ModeId, Complex64)]> {
        self.rows.get(input).map(Vec::as_slice)
    }

    /// Coefficient of `c†_output` in the image of `a†_input`; pass-through for
    /// modes without a row.
    pub fn coefficient(&self, input: &ModeId, output: &ModeId) -> Complex64 {
        match self.rows.get(input) {
            Some(outs) => outs
                .iter()
                .find(|(m, _)| m == output)
                .map(|(_, c)| *c)
                .unwrap_or_default(),
            None if input == output => Complex64::new(1.0, 0.0),
            None => Complex64::default(),
        }
    }

    pub fn inputs(&self) -> impl Iterator<Item = &ModeId> {
        self.rows.keys()
    }

    pub fn outputs(&self) -> BTreeSet<&ModeId> {
        self.rows.values().flatten().map(|(m, _)| m).collect()
    }

    /// Every path label the map reads or writes.
    pub fn paths(&self) -> BTreeSet<&PathLabel> {
        self.rows
            .iter()
            .flat_map(|(i, outs)| std::iter::once(i).chain(outs.iter().map(|(m, _)| m)))
            .map(|m| &m.path)
            .collect()
    }

    /// Largest entry of |G − I| where G is the Gram matrix of the rows.
    pub fn isometry_deviation(&self) -> f64 {
        let rows: Vec<&Vec<(ModeId, Complex64)>> = self.rows.values().collect();
        let mut worst = 0.0f64;
        for (i, ri) in rows.iter().enumerate() {
            for (j, rj) in rows.iter().enumerate().skip(i) {
                let mut dot = Complex64::default();
                for (m, ci) in ri.iter() {
                    if let Some((_, cj)) = rj.iter().find(|(mj, _)| mj == m) {
                        dot += ci.conj() * cj;
                    }
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn then(&self, other: &ModeLinearMap) -> ModeLinearMap {
        let mut rows: BTreeMap<ModeId, Vec<(ModeId, Complex64)>> = BTreeMap::new();
        let mut inputs: BTreeSet<ModeId> = self.rows.keys().cloned().collect();
        inputs.extend(other.rows.keys().filter(|m| !self.outputs().contains(m)).cloned());
        for input in inputs {
            let first: Vec<(ModeId, Complex64)> = match self.rows.get(&input) {
                Some(outs) => outs.clone(),
                None => vec![(input.clone(), Complex64::new(1.0, 0.0))],
            };
            let mut composed = Vec::new();
            for (mid, c) in first {
                match other.rows.get(&mid) {
                    Some(outs) => composed.extend(outs.iter().map(|(o, d)| (o.clone(), c * d))),
                    None => composed.push((mid, c)),
                }
            }
            rows.insert(input, composed);
        }
        ModeLinearMap::new_unchecked(rows)
    }
}
