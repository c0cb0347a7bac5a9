//! The bounded / hereditarily-unbounded decomposition of a convex hull of
//! nonnegative random variables on an atomic space, the equivalent measure
//! that certifies L1-boundedness on the bounded part, and two independent
//! routes for deciding boundedness in probability.
//!
//! On an atomic space the Brannath–Schachermayer partition is computable:
//! the bounded part is the union of the atoms whose coefficient sequence
//! along the probed window is bounded (index set `J_b`), the hereditarily
//! unbounded part is the complement (`J_u`). The certifying measure puts
//! weight `q_m = 2^{-m} / C_m` on bounded atoms and `q_m = 2^{-m}` on
//! unbounded ones, so the geometric series caps the Q-expectation of every
//! hull member restricted to the bounded part.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{AtomBound, CesaroFamily, DivergenceRule, SequenceWindow};
use crate::space::{AtomicSpace, EquivalentMeasure, SimpleRv};

/// Whether a verdict rests on declared metadata or on growth probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Exact,
    Heuristic,
}

/// How undeclared (`Unknown`) atoms are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Refuse to classify atoms without declared metadata.
    Exact,
    /// Probe undeclared atoms with the dyadic growth rule; verdicts derived
    /// this way are labeled `Heuristic`.
    Heuristic,
}

/// A finite hull window: anything that exposes per-atom values along a
/// probed subsequence together with boundedness tags. Implemented by
/// [`SequenceWindow`] (the hull `C`) and [`CesaroFamily`] (the hull of
/// Cesàro means).
pub trait HullWindow {
    fn space(&self) -> &AtomicSpace;
    /// Per-atom boundedness along this window.
    fn atom_meta(&self) -> &[AtomBound];
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Value on `atom` (position) at window position `k` (1-based).
    fn value_at(&self, k: usize, atom: usize) -> Result<f64>;
    /// The whole RV at window position `k` (1-based).
    fn values_at(&self, k: usize) -> Result<SimpleRv>;
    /// Key used for dyadic growth blocks at position `k` (1-based).
    fn block_key(&self, k: usize) -> u64;
}

impl HullWindow for SequenceWindow {
    fn space(&self) -> &AtomicSpace {
        self.space()
    }

    fn atom_meta(&self) -> &[AtomBound] {
        self.window_meta()
    }

    fn len(&self) -> usize {
        self.len()
    }

    fn value_at(&self, k: usize, atom: usize) -> Result<f64> {
        if k == 0 || k > self.len() {
            return Err(Error::PositionOutOfRange {
                position: k,
                length: self.len(),
            });
        }
        self.family().coefficient(self.indices()[k - 1], atom)
    }

    fn values_at(&self, k: usize) -> Result<SimpleRv> {
        self.evaluate(k)
    }

    fn block_key(&self, k: usize) -> u64 {
        self.indices()[k - 1]
    }
}

impl HullWindow for CesaroFamily {
    fn space(&self) -> &AtomicSpace {
        self.window().space()
    }

    fn atom_meta(&self) -> &[AtomBound] {
        // Cesàro means of a bounded sequence obey the same bound, and on the
        // declared families the means of an unbounded atom diverge, so the
        // window tags carry over.
        self.window().window_meta()
    }

    fn len(&self) -> usize {
        self.len()
    }

    fn value_at(&self, k: usize, atom: usize) -> Result<f64> {
        Ok(self.evaluate(k)?.value(atom))
    }

    fn values_at(&self, k: usize) -> Result<SimpleRv> {
        self.evaluate(k)
    }

    fn block_key(&self, k: usize) -> u64 {
        k as u64
    }
}

/// The index sets `J_b` / `J_u` realizing the bounded / hereditarily
/// unbounded split, expressed as sets of atom labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    bounded: BTreeSet<u32>,
    unbounded: BTreeSet<u32>,
    provenance: Provenance,
}

impl Partition {
    pub fn new(
        bounded: BTreeSet<u32>,
        unbounded: BTreeSet<u32>,
        provenance: Provenance,
    ) -> Result<Self> {
        if !bounded.is_disjoint(&unbounded) {
            return Err(Error::InvalidSpace("J_b and J_u must be disjoint".into()));
        }
        Ok(Self {
            bounded,
            unbounded,
            provenance,
        })
    }

    /// `J_b`: labels of atoms with bounded coefficients along the window.
    pub fn bounded_atoms(&self) -> &BTreeSet<u32> {
        &self.bounded
    }

    /// `J_u`: labels of atoms with unbounded coefficients along the window.
    pub fn unbounded_atoms(&self) -> &BTreeSet<u32> {
        &self.unbounded
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// All tracked labels, `J_b ∪ J_u`.
    pub fn all_atoms(&self) -> BTreeSet<u32> {
        self.bounded.union(&self.unbounded).copied().collect()
    }
}

fn relative_le(value: f64, bound: f64) -> bool {
    value <= bound + bound.abs() * 1e-9 + 1e-9
}

/// Classify the atoms of a hull window (optionally only those in `only`),
/// returning per-label tags and the provenance of the classification.
fn classify<H: HullWindow>(
    hull: &H,
    mode: Mode,
    rule: &DivergenceRule,
    only: Option<&BTreeSet<u32>>,
) -> Result<(BTreeMap<u32, AtomBound>, Provenance)> {
    let space = hull.space();
    if let Some(only) = only {
        for &l in only {
            if space.position_of(l).is_none() {
                return Err(Error::UnknownLabel { label: l });
            }
        }
    }
    let mut tags = BTreeMap::new();
    let mut provenance = Provenance::Exact;
    let mut missing = Vec::new();
    for atom in 0..space.atom_count() {
        let label = space.label(atom);
        if let Some(only) = only {
            if !only.contains(&label) {
                continue;
            }
        }
        match hull.atom_meta()[atom] {
            AtomBound::Bounded(c) => {
                // spot-check the declaration over the window
                for k in 1..=hull.len() {
                    let v = hull.value_at(k, atom)?;
                    if !relative_le(v, c) {
                        return Err(Error::MetadataViolation {
                            label,
                            declared: c,
                            observed: v,
                            index: hull.block_key(k),
                        });
                    }
                }
                tags.insert(label, AtomBound::Bounded(c));
            }
            AtomBound::Unbounded => {
                tags.insert(label, AtomBound::Unbounded);
            }
            AtomBound::Unknown => match mode {
                Mode::Exact => missing.push(label),
                Mode::Heuristic => {
                    let points: Vec<(u64, f64)> = (1..=hull.len())
                        .map(|k| Ok((hull.block_key(k), hull.value_at(k, atom)?)))
                        .collect::<Result<_>>()?;
                    tags.insert(label, rule.probe(&points));
                    provenance = Provenance::Heuristic;
                }
            },
        }
    }
    if !missing.is_empty() {
        return Err(Error::UnknownMetadata { labels: missing });
    }
    Ok((tags, provenance))
}

/// Compute the partition together with the per-atom bounds `C_m` for the
/// bounded side (needed to construct the certifying measure).
pub fn partition_with_bounds<H: HullWindow>(
    hull: &H,
    mode: Mode,
    rule: &DivergenceRule,
) -> Result<(Partition, BTreeMap<u32, f64>)> {
    let (tags, provenance) = classify(hull, mode, rule, None)?;
    let mut bounded = BTreeSet::new();
    let mut unbounded = BTreeSet::new();
    let mut bounds = BTreeMap::new();
    for (label, tag) in tags {
        match tag {
            AtomBound::Bounded(c) => {
                bounded.insert(label);
                bounds.insert(label, c);
            }
            AtomBound::Unbounded => {
                unbounded.insert(label);
            }
            AtomBound::Unknown => unreachable!("classify resolves or refuses Unknown"),
        }
    }
    Ok((Partition::new(bounded, unbounded, provenance)?, bounds))
}

/// The Brannath–Schachermayer partition of a hull window into
/// bounded (`J_b`) and hereditarily unbounded (`J_u`) atom sets.
pub fn partition<H: HullWindow>(hull: &H, mode: Mode, rule: &DivergenceRule) -> Result<Partition> {
    partition_with_bounds(hull, mode, rule).map(|(p, _)| p)
}

fn split_weight(label: u32, bound: Option<f64>) -> f64 {
    let base = 2f64.powi(-(label as i32));
    match bound {
        // the construction assumes C_m >= 1; smaller declared bounds are
        // clamped up so the geometric-series cap still holds
        Some(c) => base / c.max(1.0),
        None => base,
    }
}

/// Construct the equivalent measure certifying boundedness on `J_b`:
/// `q_m = 2^{-m} / max(C_m, 1)` for bounded atoms, `q_m = 2^{-m}` for
/// unbounded ones, normalized by `K = sum q_m` over the tracked atoms.
pub fn build_equivalent_measure(
    part: &Partition,
    bounds: &BTreeMap<u32, f64>,
) -> Result<EquivalentMeasure> {
    let all = part.all_atoms();
    if all.is_empty() {
        return Err(Error::InvalidMeasure("empty atom set".into()));
    }
    for label in bounds.keys() {
        if !part.bounded_atoms().contains(label) {
            return Err(Error::InvalidMeasure(format!(
                "bound given for atom {label}, which is not in J_b"
            )));
        }
    }
    let mut labels = Vec::with_capacity(all.len());
    let mut weights = Vec::with_capacity(all.len());
    for &label in &all {
        let bound = if part.bounded_atoms().contains(&label) {
            match bounds.get(&label) {
                Some(&c) => Some(c),
                None => {
                    return Err(Error::InvalidMeasure(format!(
                        "missing bound C for atom {label} in J_b"
                    )))
                }
            }
        } else {
            None
        };
        labels.push(label);
        weights.push(split_weight(label, bound));
    }
    EquivalentMeasure::from_weights(labels, weights)
}

/// The geometric-series cap `(1/K) sum_{m in J_b} 2^{-m}` together with the
/// observed supremum of `E_Q[xi_{n_k} 1_{U_b}]` over the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessCertificate {
    measure: EquivalentMeasure,
    l1_bound: f64,
    checked_sup: f64,
}

impl BoundednessCertificate {
    pub fn measure(&self) -> &EquivalentMeasure {
        &self.measure
    }

    pub fn l1_bound(&self) -> f64 {
        self.l1_bound
    }

    pub fn checked_sup(&self) -> f64 {
        self.checked_sup
    }
}

/// Verify that the window is L1(Q)-bounded on the bounded part: the sup of
/// `E_Q[values(k) restricted to J_b]` over the window must not exceed the
/// geometric-series bound. A violation names the worst window position and
/// atom, which signals dishonest metadata.
pub fn certify_l1_bound<H: HullWindow>(
    hull: &H,
    part: &Partition,
    measure: &EquivalentMeasure,
) -> Result<BoundednessCertificate> {
    let all: Vec<u32> = part.all_atoms().into_iter().collect();
    if measure.labels() != all.as_slice() {
        return Err(Error::InvalidMeasure(
            "measure atoms do not match the partition".into(),
        ));
    }
    let space = hull.space();
    let l1_bound: f64 = part
        .bounded_atoms()
        .iter()
        .map(|&m| 2f64.powi(-(m as i32)))
        .sum::<f64>()
        / measure.normalizer();

    let mut checked_sup = 0.0f64;
    let mut worst: (usize, u32) = (1, 0);
    for k in 1..=hull.len() {
        let mut e = 0.0;
        let mut top_contribution = 0.0;
        let mut top_label = 0u32;
        for atom in 0..space.atom_count() {
            let label = space.label(atom);
            if !part.bounded_atoms().contains(&label) {
                continue;
            }
            let contribution = hull.value_at(k, atom)? * measure.probability_of_label(label)?;
            e += contribution;
            if contribution > top_contribution {
                top_contribution = contribution;
                top_label = label;
            }
        }
        if e > checked_sup {
            checked_sup = e;
            worst = (k, top_label);
        }
    }
    if checked_sup > l1_bound + 1e-9 {
        return Err(Error::CertificateViolation {
            position: worst.0,
            label: worst.1,
            checked_sup,
            bound: l1_bound,
        });
    }
    Ok(BoundednessCertificate {
        measure: measure.clone(),
        l1_bound,
        checked_sup,
    })
}

/// Outcome of the exact boundedness-in-probability decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BoundednessDecision {
    /// `sup_X P(X 1_B > M) < eps` holds at the reported `M`.
    BoundedWithM { m: f64 },
    /// Some restricted atom has unbounded coefficients, so the restricted
    /// hull is not bounded in probability (for small enough thresholds the
    /// witness atom's mass blocks every `M`).
    Unbounded { witness_atom: u32 },
}

/// Decide boundedness in probability of the hull restricted to the atom-label
/// set `restrict_to`.
///
/// If every restricted atom is bounded, `M` is the smallest declared-bound
/// level that covers all but `< epsilon` of the restricted mass (atoms taken
/// in increasing order of `C_m`). Any unbounded restricted atom makes the
/// restriction fail to be bounded in probability and is returned as witness.
pub fn bounded_in_probability<H: HullWindow>(
    hull: &H,
    restrict_to: &BTreeSet<u32>,
    epsilon: f64,
    mode: Mode,
    rule: &DivergenceRule,
) -> Result<BoundednessDecision> {
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::InvalidSpace(format!(
            "epsilon {epsilon} outside (0, 1)"
        )));
    }
    let (tags, _) = classify(hull, mode, rule, Some(restrict_to))?;
    if let Some((&witness, _)) = tags
        .iter()
        .find(|(_, tag)| matches!(tag, AtomBound::Unbounded))
    {
        return Ok(BoundednessDecision::Unbounded {
            witness_atom: witness,
        });
    }
    let space = hull.space();
    let mut atoms: Vec<(f64, f64)> = tags
        .iter()
        .map(|(&label, tag)| {
            let c = match tag {
                AtomBound::Bounded(c) => *c,
                _ => unreachable!("unbounded handled above"),
            };
            let mass = space.mass(space.position_of(label).expect("validated"));
            (c, mass)
        })
        .collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut uncovered: f64 = atoms.iter().map(|&(_, p)| p).sum();
    let mut m = 0.0f64;
    for &(c, p) in &atoms {
        if uncovered < epsilon {
            break;
        }
        uncovered -= p;
        m = c;
    }
    Ok(BoundednessDecision::BoundedWithM { m })
}

/// On an atomic space every positive-probability subset of `U_u` contains a
/// full atom, so the hull is hereditarily unbounded on `subset` exactly when
/// every atom of `subset` lies in `J_u`. The empty set is vacuously true.
pub fn hereditarily_unbounded(part: &Partition, subset: &BTreeSet<u32>) -> bool {
    subset.is_subset(part.unbounded_atoms())
}

/// Outcome of the brute-force grid search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OracleDecision {
    /// The least grid `M` with `sup_X P(X > M) < eps`.
    BoundedWithM { m: f64 },
    /// No grid point meets the criterion.
    UnboundedOnGrid,
}

impl OracleDecision {
    /// Same decision variant as an exact decision (the `M` values may differ:
    /// one comes from declared bounds, the other from the grid).
    pub fn agrees_with(&self, exact: &BoundednessDecision) -> bool {
        matches!(
            (self, exact),
            (
                OracleDecision::BoundedWithM { .. },
                BoundednessDecision::BoundedWithM { .. }
            ) | (
                OracleDecision::UnboundedOnGrid,
                BoundednessDecision::Unbounded { .. }
            )
        )
    }
}

/// Tuning for the brute-force oracle's hull probing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleParams {
    /// Number of Dirichlet(1, ..., 1) convex combinations to sample.
    pub combos: usize,
    /// Master seed; results are deterministic in it regardless of worker
    /// count (combinations are combined by index).
    pub seed: u64,
    /// When more RVs than this are supplied, combinations mix an evenly
    /// strided subset of them (the direct supremum still scans all RVs).
    pub combo_subset_cap: usize,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self {
            combos: 1000,
            seed: 0,
            combo_subset_cap: 256,
        }
    }
}

#[cfg(test)]
fn exceedance(space: &AtomicSpace, values: &[f64], m: f64) -> f64 {
    values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v > m)
        .map(|(i, _)| space.mass(i))
        .sum()
}

/// Values sorted descending with the cumulative mass strictly above each
/// value, so `P(X > M)` is a binary search.
struct ExceedanceProfile {
    sorted: Vec<(f64, f64)>,
}

impl ExceedanceProfile {
    fn new(space: &AtomicSpace, values: &[f64]) -> Self {
        let mut pairs: Vec<(f64, f64)> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, space.mass(i)))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut cum = 0.0;
        for pair in &mut pairs {
            cum += pair.1;
            pair.1 = cum;
        }
        Self { sorted: pairs }
    }

    fn above(&self, m: f64) -> f64 {
        // count of entries with value > m
        let count = self.sorted.partition_point(|&(v, _)| v > m);
        if count == 0 {
            0.0
        } else {
            self.sorted[count - 1].1
        }
    }
}

/// Independent oracle for boundedness in probability: directly evaluates
/// `sup_X P(X > M)` over the supplied RVs and over seeded Dirichlet convex
/// combinations of them, for each grid `M`, and reports the least grid point
/// meeting the `epsilon` criterion.
pub fn brute_force_boundedness_oracle(
    rvs: &[SimpleRv],
    space: &AtomicSpace,
    epsilon: f64,
    m_grid: &[f64],
    params: &OracleParams,
) -> Result<OracleDecision> {
    if m_grid.is_empty() {
        return Err(Error::EmptyInput("empty M grid".into()));
    }
    if rvs.is_empty() {
        return Err(Error::EmptyInput("no random variables".into()));
    }
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::InvalidSpace(format!(
            "epsilon {epsilon} outside (0, 1)"
        )));
    }
    for rv in rvs {
        if rv.len() != space.atom_count() {
            return Err(Error::LengthMismatch {
                expected: space.atom_count(),
                got: rv.len(),
            });
        }
    }
    let mut grid: Vec<f64> = m_grid.to_vec();
    grid.sort_by(f64::total_cmp);

    // evenly strided subset feeding the convex combinations
    let subset: Vec<&SimpleRv> = if rvs.len() > params.combo_subset_cap {
        (0..params.combo_subset_cap)
            .map(|i| &rvs[i * rvs.len() / params.combo_subset_cap])
            .collect()
    } else {
        rvs.iter().collect()
    };

    let combos: Vec<Vec<f64>> = (0..params.combos)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
            rng.set_stream(i as u64 + 1);
            // Dirichlet(1, ..., 1) via normalized Exp(1) draws
            let mut weights: Vec<f64> = (0..subset.len()).map(|_| Exp1.sample(&mut rng)).collect();
            let total: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= total;
            }
            let mut values = vec![0.0; space.atom_count()];
            for (rv, &w) in subset.iter().zip(&weights) {
                for (v, &x) in values.iter_mut().zip(rv.values()) {
                    *v += w * x;
                }
            }
            values
        })
        .collect();

    let profiles: Vec<ExceedanceProfile> = rvs
        .iter()
        .map(|rv| ExceedanceProfile::new(space, rv.values()))
        .chain(combos.iter().map(|c| ExceedanceProfile::new(space, c)))
        .collect();
    'grid: for &m in &grid {
        for profile in &profiles {
            if profile.above(m) >= epsilon {
                continue 'grid;
            }
        }
        return Ok(OracleDecision::BoundedWithM { m });
    }
    Ok(OracleDecision::UnboundedOnGrid)
}

/// Evenly spaced geometric grid on `[lo, hi]`, the default M-grid shape.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::EmptyInput("grid needs at least one point".into()));
    }
    if !(lo > 0.0 && hi >= lo) {
        return Err(Error::InvalidSpace(format!(
            "invalid grid range [{lo}, {hi}]"
        )));
    }
    if points == 1 {
        return Ok(vec![hi]);
    }
    let step = (hi / lo).powf(1.0 / (points - 1) as f64);
    Ok((0..points).map(|i| lo * step.powi(i as i32)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{AtomRule, CoefficientFamily, FamilyRule};
    use approx::assert_abs_diff_eq;

    fn labels(items: &[u32]) -> BTreeSet<u32> {
        items.iter().copied().collect()
    }

    fn rule() -> DivergenceRule {
        DivergenceRule::default()
    }

    /// 3 atoms: constant 1 (bounded), 2|sin n| (declared Bounded(2)),
    /// n (declared Unbounded).
    fn mixed_window() -> SequenceWindow {
        let family = CoefficientFamily::new(
            FamilyRule::PerAtom(vec![
                AtomRule::Constant { value: 1.0 },
                AtomRule::Oscillation {
                    level: 1.0,
                    wobble: 1.0,
                },
                AtomRule::Power {
                    alpha: 1.0,
                    scale: 1.0,
                },
            ]),
            vec![
                AtomBound::Bounded(1.0),
                AtomBound::Bounded(2.0),
                AtomBound::Unbounded,
            ],
            "mixed",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.5, 0.3, 0.2], 0.0).unwrap();
        SequenceWindow::identity(family, space, 256).unwrap()
    }

    #[test]
    fn partition_of_mixed_family() {
        let window = mixed_window();
        let part = partition(&window, Mode::Exact, &rule()).unwrap();
        assert_eq!(part.bounded_atoms(), &labels(&[1, 2]));
        assert_eq!(part.unbounded_atoms(), &labels(&[3]));
        assert_eq!(part.provenance(), Provenance::Exact);

        // independent per-atom sup check by direct enumeration over the window
        for (atom, declared) in [(0usize, 1.0f64), (1, 2.0)] {
            let sup = (1..=window.len())
                .map(|k| window.evaluate(k).unwrap().value(atom))
                .fold(0.0f64, f64::max);
            assert!(sup <= declared + 1e-12);
        }
        let atom3_grows = (1..=window.len())
            .map(|k| window.evaluate(k).unwrap().value(2))
            .fold(0.0f64, f64::max);
        assert!(atom3_grows >= 256.0 - 1e-12);
    }

    #[test]
    fn partition_all_constant() {
        let family = CoefficientFamily::new(
            FamilyRule::Uniform(AtomRule::Constant { value: 3.0 }),
            vec![AtomBound::Bounded(3.0); 4],
            "constants",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.25; 4], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 32).unwrap();
        let part = partition(&window, Mode::Exact, &rule()).unwrap();
        assert_eq!(part.bounded_atoms(), &labels(&[1, 2, 3, 4]));
        assert!(part.unbounded_atoms().is_empty());
    }

    #[test]
    fn partition_all_divergent() {
        let family = CoefficientFamily::new(
            FamilyRule::Uniform(AtomRule::Power {
                alpha: 1.0,
                scale: 1.0,
            }),
            vec![AtomBound::Unbounded; 3],
            "c = n everywhere",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.5, 0.3, 0.2], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 64).unwrap();
        let part = partition(&window, Mode::Exact, &rule()).unwrap();
        assert!(part.bounded_atoms().is_empty());
        assert_eq!(part.unbounded_atoms(), &labels(&[1, 2, 3]));
    }

    #[test]
    fn partition_refuses_unknown_in_exact_mode() {
        let family = CoefficientFamily::new(
            FamilyRule::Uniform(AtomRule::Constant { value: 1.0 }),
            vec![
                AtomBound::Bounded(1.0),
                AtomBound::Unknown,
                AtomBound::Unknown,
            ],
            "partially declared",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.5, 0.3, 0.2], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 16).unwrap();
        match partition(&window, Mode::Exact, &rule()) {
            Err(Error::UnknownMetadata { labels }) => assert_eq!(labels, vec![2, 3]),
            other => panic!("expected UnknownMetadata, got {other:?}"),
        }
    }

    #[test]
    fn partition_probes_unknown_in_heuristic_mode() {
        let family = CoefficientFamily::new(
            FamilyRule::PerAtom(vec![
                AtomRule::Constant { value: 2.0 },
                AtomRule::Power {
                    alpha: 1.0,
                    scale: 0.5,
                },
            ]),
            vec![AtomBound::Unknown, AtomBound::Unknown],
            "undeclared",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.5, 0.5], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 128).unwrap();
        let (part, bounds) = partition_with_bounds(&window, Mode::Heuristic, &rule()).unwrap();
        assert_eq!(part.bounded_atoms(), &labels(&[1]));
        assert_eq!(part.unbounded_atoms(), &labels(&[2]));
        assert_eq!(part.provenance(), Provenance::Heuristic);
        assert_abs_diff_eq!(bounds[&1], 2.0 * 1.1, epsilon = 1e-12);
    }

    #[test]
    fn partition_detects_dishonest_bound() {
        let family = CoefficientFamily::new(
            FamilyRule::Uniform(AtomRule::Constant { value: 5.0 }),
            vec![AtomBound::Bounded(1.0)],
            "dishonest",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![1.0], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 8).unwrap();
        assert!(matches!(
            partition(&window, Mode::Exact, &rule()),
            Err(Error::MetadataViolation { label: 1, .. })
        ));
    }

    #[test]
    fn measure_weights_match_hand_computation() {
        // J_b = {1, 2} with C = (1, 2), J_u = {3}:
        // q = (1/2, 1/8, 1/8), K = 3/4, Q = (2/3, 1/6, 1/6)
        let part = Partition::new(labels(&[1, 2]), labels(&[3]), Provenance::Exact).unwrap();
        let bounds = BTreeMap::from([(1, 1.0), (2, 2.0)]);
        let q = build_equivalent_measure(&part, &bounds).unwrap();
        assert_eq!(q.labels(), &[1, 2, 3]);
        for (got, want) in q.weights().iter().zip([0.5, 0.125, 0.125]) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(q.normalizer(), 0.75, epsilon = 1e-15);
        for (got, want) in q
            .atom_probabilities()
            .iter()
            .zip([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0])
        {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-15);
        }
    }

    #[test]
    fn measure_with_empty_bounded_side() {
        // J_b = {}, 2 atoms: q = (1/2, 1/4), K = 3/4, Q = (2/3, 1/3)
        let part = Partition::new(labels(&[]), labels(&[1, 2]), Provenance::Exact).unwrap();
        let q = build_equivalent_measure(&part, &BTreeMap::new()).unwrap();
        for (got, want) in q.weights().iter().zip([0.5, 0.25]) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(q.normalizer(), 0.75, epsilon = 1e-15);
        for (got, want) in q.atom_probabilities().iter().zip([2.0 / 3.0, 1.0 / 3.0]) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-15);
        }
    }

    #[test]
    fn measure_single_atom_forces_unit_mass() {
        let part = Partition::new(labels(&[1]), labels(&[]), Provenance::Exact).unwrap();
        let q = build_equivalent_measure(&part, &BTreeMap::from([(1, 1.0)])).unwrap();
        assert_eq!(q.atom_probabilities(), &[1.0]);
    }

    #[test]
    fn measure_clamps_small_bounds_to_one() {
        let part = Partition::new(labels(&[1]), labels(&[2]), Provenance::Exact).unwrap();
        let q = build_equivalent_measure(&part, &BTreeMap::from([(1, 0.25)])).unwrap();
        // clamped: q_1 = 2^{-1} / 1, not 2^{-1} / 0.25
        assert_abs_diff_eq!(q.weights()[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn measure_rejects_missing_or_stray_bounds() {
        let part = Partition::new(labels(&[1, 2]), labels(&[]), Provenance::Exact).unwrap();
        assert!(build_equivalent_measure(&part, &BTreeMap::from([(1, 1.0)])).is_err());
        let part2 = Partition::new(labels(&[1]), labels(&[2]), Provenance::Exact).unwrap();
        assert!(build_equivalent_measure(&part2, &BTreeMap::from([(1, 1.0), (2, 1.0)])).is_err());
        let empty = Partition::new(labels(&[]), labels(&[]), Provenance::Exact).unwrap();
        assert!(build_equivalent_measure(&empty, &BTreeMap::new()).is_err());
    }

    #[test]
    fn certificate_for_constant_family() {
        // c == 1 on 2 atoms, both bounded with C = 1: checked_sup = E_Q[1] = 1
        // and the bound is (1/K)(2^-1 + 2^-2) = 1.
        let family = CoefficientFamily::new(
            FamilyRule::Uniform(AtomRule::Constant { value: 1.0 }),
            vec![AtomBound::Bounded(1.0); 2],
            "ones",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.5, 0.5], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 16).unwrap();
        let (part, bounds) = partition_with_bounds(&window, Mode::Exact, &rule()).unwrap();
        let q = build_equivalent_measure(&part, &bounds).unwrap();
        let cert = certify_l1_bound(&window, &part, &q).unwrap();
        assert_abs_diff_eq!(cert.checked_sup(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cert.l1_bound(), 1.0, epsilon = 1e-12);
        assert!(cert.checked_sup() <= cert.l1_bound() + 1e-9);
    }

    #[test]
    fn certificate_with_empty_bounded_side() {
        let family = CoefficientFamily::new(
            FamilyRule::Uniform(AtomRule::Power {
                alpha: 1.0,
                scale: 1.0,
            }),
            vec![AtomBound::Unbounded; 2],
            "all divergent",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.5, 0.5], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 32).unwrap();
        let (part, bounds) = partition_with_bounds(&window, Mode::Exact, &rule()).unwrap();
        let q = build_equivalent_measure(&part, &bounds).unwrap();
        let cert = certify_l1_bound(&window, &part, &q).unwrap();
        assert_eq!(cert.checked_sup(), 0.0);
        assert_eq!(cert.l1_bound(), 0.0);
    }

    #[test]
    fn certificate_single_loaded_atom() {
        // only atom 2 carries mass: c_{n,2} = 2, J_b = {1, 2} with C = (1, 2):
        // q = (1/2, 1/8), K = 5/8, Q = (4/5, 1/5); checked_sup = 2 * 1/5 = 0.4
        // and the bound is (8/5)(3/4) = 1.2.
        let family = CoefficientFamily::new(
            FamilyRule::PerAtom(vec![
                AtomRule::Constant { value: 0.0 },
                AtomRule::Constant { value: 2.0 },
            ]),
            vec![AtomBound::Bounded(1.0), AtomBound::Bounded(2.0)],
            "atom-2 load",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.5, 0.5], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 8).unwrap();
        let (part, bounds) = partition_with_bounds(&window, Mode::Exact, &rule()).unwrap();
        let q = build_equivalent_measure(&part, &bounds).unwrap();
        let cert = certify_l1_bound(&window, &part, &q).unwrap();
        assert_abs_diff_eq!(cert.checked_sup(), 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(cert.l1_bound(), 1.2, epsilon = 1e-12);
    }

    #[test]
    fn certificate_violation_names_position_and_atom() {
        // hand-built partition lies about the bound: family is c == 5 but the
        // claimed C feeding the measure is 1
        let family = CoefficientFamily::new(
            FamilyRule::Uniform(AtomRule::Constant { value: 5.0 }),
            vec![AtomBound::Bounded(5.0); 2],
            "fives",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.5, 0.5], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 4).unwrap();
        let lying = Partition::new(labels(&[1, 2]), labels(&[]), Provenance::Exact).unwrap();
        let q = build_equivalent_measure(&lying, &BTreeMap::from([(1, 1.0), (2, 1.0)])).unwrap();
        match certify_l1_bound(&window, &lying, &q) {
            Err(Error::CertificateViolation {
                position, label, ..
            }) => {
                assert_eq!(position, 1);
                assert!(label == 1 || label == 2);
            }
            other => panic!("expected CertificateViolation, got {other:?}"),
        }
    }

    #[test]
    fn bounded_decision_covers_all_but_epsilon() {
        let window = mixed_window();
        // restricted to the bounded atoms {1, 2}
        let got =
            bounded_in_probability(&window, &labels(&[1, 2]), 0.1, Mode::Exact, &rule()).unwrap();
        let m = match got {
            BoundednessDecision::BoundedWithM { m } => m,
            other => panic!("expected bounded, got {other:?}"),
        };
        // uncovered mass after taking C=1 (mass .5) is .3 >= .1, so both atoms
        // are taken and M = 2
        assert_abs_diff_eq!(m, 2.0, epsilon = 1e-15);

        // brute-force confirmation: sup over window samples of P(X 1_B > M) < eps
        let b = labels(&[1, 2]);
        let sup = (1..=window.len())
            .map(|k| {
                let x = window
                    .evaluate(k)
                    .unwrap()
                    .restricted(window.space(), &b)
                    .unwrap();
                exceedance(window.space(), x.values(), m)
            })
            .fold(0.0f64, f64::max);
        assert!(sup < 0.1);
    }

    #[test]
    fn unbounded_atom_is_witnessed() {
        let window = mixed_window();
        let got =
            bounded_in_probability(&window, &labels(&[2, 3]), 0.5, Mode::Exact, &rule()).unwrap();
        assert_eq!(got, BoundednessDecision::Unbounded { witness_atom: 3 });
    }

    #[test]
    fn empty_restriction_is_bounded_at_zero() {
        let window = mixed_window();
        let got = bounded_in_probability(&window, &labels(&[]), 0.5, Mode::Exact, &rule()).unwrap();
        assert_eq!(got, BoundednessDecision::BoundedWithM { m: 0.0 });
    }

    #[test]
    fn hereditary_unboundedness_on_atoms() {
        let part = Partition::new(labels(&[1, 2]), labels(&[3, 4]), Provenance::Exact).unwrap();
        assert!(hereditarily_unbounded(&part, &labels(&[3])));
        assert!(hereditarily_unbounded(&part, &labels(&[3, 4])));
        assert!(!hereditarily_unbounded(&part, &labels(&[2, 3])));
        // vacuous truth on the empty set
        assert!(hereditarily_unbounded(&part, &labels(&[])));
    }

    #[test]
    fn oracle_constant_rv() {
        let space = AtomicSpace::new(vec![0.5, 0.5], 0.0).unwrap();
        let rvs = vec![SimpleRv::new(vec![1.0, 1.0]).unwrap()];
        let got = brute_force_boundedness_oracle(
            &rvs,
            &space,
            0.1,
            &[0.5, 2.0],
            &OracleParams::default(),
        )
        .unwrap();
        assert_eq!(got, OracleDecision::BoundedWithM { m: 2.0 });
    }

    #[test]
    fn oracle_detects_growth_past_grid() {
        // c = n for n <= 100 on a single full-mass atom, grid up to 50
        let space = AtomicSpace::new(vec![1.0], 0.0).unwrap();
        let rvs: Vec<SimpleRv> = (1..=100)
            .map(|n| SimpleRv::new(vec![n as f64]).unwrap())
            .collect();
        let grid = geometric_grid(1.0, 50.0, 16).unwrap();
        let got =
            brute_force_boundedness_oracle(&rvs, &space, 0.5, &grid, &OracleParams::default())
                .unwrap();
        assert_eq!(got, OracleDecision::UnboundedOnGrid);
    }

    #[test]
    fn oracle_is_deterministic_in_the_seed() {
        let space = AtomicSpace::new(vec![0.4, 0.6], 0.0).unwrap();
        let rvs: Vec<SimpleRv> = (1..=40)
            .map(|n| SimpleRv::new(vec![(n % 7) as f64, 1.0]).unwrap())
            .collect();
        let grid = geometric_grid(0.5, 20.0, 32).unwrap();
        let params = OracleParams {
            seed: 9,
            ..OracleParams::default()
        };
        let a = brute_force_boundedness_oracle(&rvs, &space, 0.1, &grid, &params).unwrap();
        let b = brute_force_boundedness_oracle(&rvs, &space, 0.1, &grid, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn oracle_result_does_not_depend_on_worker_count() {
        // combination draws are split off the master seed by index, so the
        // decision is the same whether one or many workers sample them
        let space = AtomicSpace::new(vec![0.3, 0.3, 0.4], 0.0).unwrap();
        let rvs: Vec<SimpleRv> = (1..=64)
            .map(|n| {
                SimpleRv::new(vec![(n % 5) as f64, ((n * 3) % 11) as f64, 1.5]).unwrap()
            })
            .collect();
        let grid = geometric_grid(0.5, 40.0, 32).unwrap();
        let params = OracleParams {
            seed: 31,
            ..OracleParams::default()
        };
        let run_with = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    brute_force_boundedness_oracle(&rvs, &space, 0.1, &grid, &params).unwrap()
                })
        };
        assert_eq!(run_with(1), run_with(4));
    }

    #[test]
    fn partition_is_permutation_invariant() {
        let window = mixed_window();
        let base = partition(&window, Mode::Exact, &rule()).unwrap();
        for perm in [[2usize, 1, 0], [1, 2, 0], [2, 0, 1]] {
            let permuted = window.permuted_atoms(&perm).unwrap();
            let part = partition(&permuted, Mode::Exact, &rule()).unwrap();
            assert_eq!(part.bounded_atoms(), base.bounded_atoms());
            assert_eq!(part.unbounded_atoms(), base.unbounded_atoms());
        }
    }

    #[test]
    fn measure_weights_survive_atom_permutation() {
        let window = mixed_window();
        let (part, bounds) = partition_with_bounds(&window, Mode::Exact, &rule()).unwrap();
        let q = build_equivalent_measure(&part, &bounds).unwrap();
        let permuted = window.permuted_atoms(&[2, 0, 1]).unwrap();
        let (part_p, bounds_p) = partition_with_bounds(&permuted, Mode::Exact, &rule()).unwrap();
        let q_p = build_equivalent_measure(&part_p, &bounds_p).unwrap();
        // labels are sorted inside the measure, so the weight vectors agree
        assert_eq!(q.labels(), q_p.labels());
        for (a, b) in q.weights().iter().zip(q_p.weights()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn cesaro_partition_dominates_base_partition() {
        // averaging smooths: sparse dyadic bursts have unbounded raw values
        // but bounded running means, so the probe puts the atom in J_b for
        // the Cesàro hull while the base hull keeps it in J_u
        let family = CoefficientFamily::from_fn(
            |n, _| if n.is_power_of_two() { n as f64 } else { 0.0 },
            vec![AtomBound::Unknown],
            "dyadic bursts",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![1.0], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 4096).unwrap();
        let base = partition(&window, Mode::Heuristic, &rule()).unwrap();
        let cesaro = CesaroFamily::new(window).unwrap();
        let averaged = partition(&cesaro, Mode::Heuristic, &rule()).unwrap();
        assert_eq!(base.unbounded_atoms(), &labels(&[1]));
        assert_eq!(averaged.bounded_atoms(), &labels(&[1]));
        assert!(base.bounded_atoms().is_subset(averaged.bounded_atoms()));

        // on declared families the two partitions coincide
        let declared = mixed_window();
        let b = partition(&declared, Mode::Exact, &rule()).unwrap();
        let c = partition(&CesaroFamily::new(declared).unwrap(), Mode::Exact, &rule()).unwrap();
        assert_eq!(b.bounded_atoms(), c.bounded_atoms());
    }

    #[test]
    fn bounded_subsets_live_inside_j_b() {
        // maximality: every subset that tests Bounded at all epsilon levels
        // is contained in J_b
        let window = mixed_window();
        let part = partition(&window, Mode::Exact, &rule()).unwrap();
        let subsets = [
            labels(&[1]),
            labels(&[2]),
            labels(&[1, 2]),
            labels(&[1, 3]),
            labels(&[3]),
            labels(&[1, 2, 3]),
        ];
        for b in &subsets {
            let all_bounded = [0.5, 0.1, 0.01].iter().all(|&eps| {
                matches!(
                    bounded_in_probability(&window, b, eps, Mode::Exact, &rule()).unwrap(),
                    BoundednessDecision::BoundedWithM { .. }
                )
            });
            if all_bounded {
                assert!(b.is_subset(part.bounded_atoms()));
            }
        }
    }

    #[test]
    fn l1_and_probability_boundedness_agree_both_ways() {
        // direction (a): Bounded on J_b implies the constructed measure
        // certifies an L1 bound
        let window = mixed_window();
        let (part, bounds) = partition_with_bounds(&window, Mode::Exact, &rule()).unwrap();
        let decision =
            bounded_in_probability(&window, part.bounded_atoms(), 0.1, Mode::Exact, &rule())
                .unwrap();
        assert!(matches!(decision, BoundednessDecision::BoundedWithM { .. }));
        let q = build_equivalent_measure(&part, &bounds).unwrap();
        assert!(certify_l1_bound(&window, &part, &q).is_ok());

        // direction (b): a random equivalent measure with a stabilized
        // Q-expectation sup over the window marks a probability-bounded set,
        // and a growing sup marks an unbounded one; the brute-force oracle
        // must concur in both cases.
        let space = AtomicSpace::new(vec![0.4, 0.6], 0.0).unwrap();
        let bounded_family = CoefficientFamily::new(
            FamilyRule::PerAtom(vec![
                AtomRule::Constant { value: 2.0 },
                AtomRule::Oscillation {
                    level: 1.5,
                    wobble: 1.0,
                },
            ]),
            vec![AtomBound::Bounded(2.0), AtomBound::Bounded(3.0)],
            "bounded pair",
        )
        .unwrap();
        let growing_family = CoefficientFamily::new(
            FamilyRule::PerAtom(vec![
                AtomRule::Constant { value: 2.0 },
                AtomRule::Power {
                    alpha: 1.0,
                    scale: 1.0,
                },
            ]),
            vec![AtomBound::Bounded(2.0), AtomBound::Unbounded],
            "growing pair",
        )
        .unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for (family, expect_bounded) in [(bounded_family, true), (growing_family, false)] {
            let window = SequenceWindow::identity(family, space.clone(), 512).unwrap();
            let weights: Vec<f64> = (0..2).map(|_| Exp1.sample(&mut rng)).collect();
            let q = EquivalentMeasure::from_weights(vec![1, 2], weights).unwrap();
            let sup_of = |range: std::ops::RangeInclusive<usize>| -> f64 {
                range
                    .map(|k| {
                        crate::space::expectation(&space, &window.evaluate(k).unwrap(), Some(&q))
                            .unwrap()
                    })
                    .fold(0.0f64, f64::max)
            };
            let first_half = sup_of(1..=256);
            let full = sup_of(1..=512);
            let stabilized = full <= first_half * 1.05;
            assert_eq!(stabilized, expect_bounded);

            let rvs: Vec<SimpleRv> = (1..=window.len())
                .map(|k| window.evaluate(k).unwrap())
                .collect();
            let grid = geometric_grid(0.5, 100.0, 64).unwrap();
            let oracle =
                brute_force_boundedness_oracle(&rvs, &space, 0.1, &grid, &OracleParams::default())
                    .unwrap();
            match oracle {
                OracleDecision::BoundedWithM { .. } => assert!(expect_bounded),
                OracleDecision::UnboundedOnGrid => assert!(!expect_bounded),
            }
        }
    }
}
