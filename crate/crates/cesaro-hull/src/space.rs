//! Truncated countable atomic probability spaces, simple nonnegative random
//! variables on them, and measures equivalent to the base measure.
//!
//! A countable atomic space is tracked as a finite prefix of atoms plus an
//! explicit `tail_mass` for everything beyond the truncation. Random
//! variables are undefined on the tail: expectations and probabilities are
//! computed over the tracked atoms only, and `tail_mass` is reported
//! separately as an error bar rather than silently assigned values.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for all measure identities (sums of at most ~1e4 doubles).
pub const MEASURE_TOLERANCE: f64 = 1e-12;

/// A finite truncation of a countable atomic probability space.
///
/// Atoms carry stable labels (1-based by default) so that index sets and
/// measure weights survive permutation and truncation of the tracked prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicSpace {
    masses: Vec<f64>,
    tail_mass: f64,
    labels: Vec<u32>,
}

impl AtomicSpace {
    /// Build a space from atom masses and the mass of the untracked tail.
    /// Labels default to `1..=n` in the given order.
    pub fn new(masses: Vec<f64>, tail_mass: f64) -> Result<Self> {
        let labels = (1..=masses.len() as u32).collect();
        Self::with_labels(masses, tail_mass, labels)
    }

    /// Build a space with explicit atom labels (for permuted or truncated
    /// views of a previously constructed space).
    pub fn with_labels(masses: Vec<f64>, tail_mass: f64, labels: Vec<u32>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidSpace("atom count must be >= 1".into()));
        }
        if labels.len() != masses.len() {
            return Err(Error::LengthMismatch {
                expected: masses.len(),
                got: labels.len(),
            });
        }
        for (i, &p) in masses.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 || p > 1.0 {
                return Err(Error::InvalidSpace(format!(
                    "atom {} has mass {p}, want 0 < p <= 1",
                    i + 1
                )));
            }
        }
        if !(0.0..1.0).contains(&tail_mass) {
            return Err(Error::InvalidSpace(format!(
                "tail_mass {tail_mass} outside [0, 1)"
            )));
        }
        let total: f64 = masses.iter().sum::<f64>() + tail_mass;
        if (total - 1.0).abs() > MEASURE_TOLERANCE {
            return Err(Error::InvalidSpace(format!(
                "masses + tail_mass = {total}, want 1 within {MEASURE_TOLERANCE}"
            )));
        }
        let mut seen = BTreeSet::new();
        for &l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidSpace(format!("duplicate atom label {l}")));
            }
        }
        Ok(Self {
            masses,
            tail_mass,
            labels,
        })
    }

    /// Uniform space on `n` atoms with no tail.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("atom count must be >= 1".into()));
        }
        let p = 1.0 / n as f64;
        let mut masses = vec![p; n];
        // close the sum exactly
        let fixup: f64 = 1.0 - masses.iter().sum::<f64>();
        masses[0] += fixup;
        Self::new(masses, 0.0)
    }

    pub fn atom_count(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, position: usize) -> f64 {
        self.masses[position]
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Total tracked probability mass, `1 - tail_mass`.
    pub fn tracked_mass(&self) -> f64 {
        1.0 - self.tail_mass
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, position: usize) -> u32 {
        self.labels[position]
    }

    /// Position of the atom carrying `label`, if tracked.
    pub fn position_of(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// All tracked labels as a set.
    pub fn label_set(&self) -> BTreeSet<u32> {
        self.labels.iter().copied().collect()
    }

    /// P of the union of the atoms at the given (0-based) positions.
    pub fn probability_of(&self, atom_positions: &BTreeSet<usize>) -> Result<f64> {
        let mut total = 0.0;
        for &i in atom_positions {
            if i >= self.masses.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    count: self.masses.len(),
                });
            }
            total += self.masses[i];
        }
        Ok(total)
    }

    /// P of the union of the atoms with the given labels.
    pub fn probability_of_labels(&self, labels: &BTreeSet<u32>) -> Result<f64> {
        let mut total = 0.0;
        for &l in labels {
            let pos = self
                .position_of(l)
                .ok_or(Error::UnknownLabel { label: l })?;
            total += self.masses[pos];
        }
        Ok(total)
    }

    /// Reorder atoms by `perm` (new position `i` takes old position `perm[i]`).
    /// Labels travel with their atoms.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.atom_count())?;
        let masses = perm.iter().map(|&j| self.masses[j]).collect();
        let labels = perm.iter().map(|&j| self.labels[j]).collect();
        Self::with_labels(masses, self.tail_mass, labels)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &j in perm {
        if j >= n || seen[j] {
            return Err(Error::InvalidSpace(format!(
                "invalid permutation entry {j}"
            )));
        }
        seen[j] = true;
    }
    Ok(())
}

/// A simple nonnegative random variable: one value per tracked atom.
///
/// Members of a sequence are finite everywhere; only limit objects (the
/// Cesàro limit `xi`) may take the value `+inf`, and they must be
/// constructed through [`SimpleRv::limit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleRv {
    values: Vec<f64>,
    is_limit: bool,
}

impl SimpleRv {
    /// A sequence member: all values finite and nonnegative.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidRandomVariable("no values".into()));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidRandomVariable(format!(
                    "value {v} at atom position {i}; sequence members must be finite and >= 0"
                )));
            }
        }
        Ok(Self {
            values,
            is_limit: false,
        })
    }

    /// A limit object: values in `[0, +inf]`.
    pub fn limit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidRandomVariable("no values".into()));
        }
        for (i, &v) in values.iter().enumerate() {
            if v.is_nan() || v < 0.0 {
                return Err(Error::InvalidRandomVariable(format!(
                    "value {v} at atom position {i}; limit values must be in [0, +inf]"
                )));
            }
        }
        Ok(Self {
            values,
            is_limit: true,
        })
    }

    pub fn constant(value: f64, atoms: usize) -> Result<Self> {
        Self::new(vec![value; atoms])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, position: usize) -> f64 {
        self.values[position]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_limit(&self) -> bool {
        self.is_limit
    }

    /// The restriction `X 1_B` for an atom-label set `B`: values are zeroed
    /// outside `B`.
    pub fn restricted(&self, space: &AtomicSpace, labels: &BTreeSet<u32>) -> Result<Self> {
        if self.values.len() != space.atom_count() {
            return Err(Error::LengthMismatch {
                expected: space.atom_count(),
                got: self.values.len(),
            });
        }
        for &l in labels {
            if space.position_of(l).is_none() {
                return Err(Error::UnknownLabel { label: l });
            }
        }
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if labels.contains(&space.label(i)) {
                    v
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Self {
            values,
            is_limit: self.is_limit,
        })
    }
}

/// A probability measure equivalent to the base measure on the tracked
/// atoms: every atom receives strictly positive weight.
///
/// Weights are indexed by atom label. The tail receives weight 0 by the
/// truncation convention, so the tracked atom probabilities sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalentMeasure {
    labels: Vec<u32>,
    weights: Vec<f64>,
    normalizer: f64,
    atom_probabilities: Vec<f64>,
}

impl EquivalentMeasure {
    /// Normalize positive unnormalized weights `q_m` (indexed by label) into
    /// a probability measure `Q(A_m) = q_m / K`.
    pub fn from_weights(labels: Vec<u32>, weights: Vec<f64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidMeasure("empty atom set".into()));
        }
        if labels.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: labels.len(),
                got: weights.len(),
            });
        }
        for (&l, &q) in labels.iter().zip(&weights) {
            if !q.is_finite() || q <= 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "weight q = {q} on atom {l}; equivalence requires q > 0"
                )));
            }
        }
        let normalizer: f64 = weights.iter().sum();
        if !normalizer.is_finite() || normalizer <= 0.0 {
            return Err(Error::InvalidMeasure(format!(
                "normalizer K = {normalizer} must be finite and > 0"
            )));
        }
        let atom_probabilities = weights.iter().map(|q| q / normalizer).collect();
        Ok(Self {
            labels,
            weights,
            normalizer,
            atom_probabilities,
        })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Unnormalized weights `q_m`, aligned with `labels()`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The normalizer `K`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Normalized probabilities `Q(A_m)`, aligned with `labels()`.
    pub fn atom_probabilities(&self) -> &[f64] {
        &self.atom_probabilities
    }

    /// `Q(A_m)` for the atom with the given label.
    pub fn probability_of_label(&self, label: u32) -> Result<f64> {
        let pos = self
            .labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownLabel { label })?;
        Ok(self.atom_probabilities[pos])
    }
}

/// `E_mu[rv]` over the tracked atoms, under the base measure or an
/// equivalent measure.
///
/// Returns `+inf` as soon as an infinite value sits on an atom with positive
/// mass (all tracked atoms have positive mass under either measure). Tail
/// contribution is 0 by the truncation convention.
pub fn expectation(
    space: &AtomicSpace,
    rv: &SimpleRv,
    measure: Option<&EquivalentMeasure>,
) -> Result<f64> {
    if rv.len() != space.atom_count() {
        return Err(Error::LengthMismatch {
            expected: space.atom_count(),
            got: rv.len(),
        });
    }
    let mut total = 0.0;
    for (i, &v) in rv.values().iter().enumerate() {
        let mass = match measure {
            None => space.mass(i),
            Some(q) => q.probability_of_label(space.label(i))?,
        };
        if v.is_infinite() {
            return Ok(f64::INFINITY);
        }
        total += v * mass;
    }
    Ok(total)
}
