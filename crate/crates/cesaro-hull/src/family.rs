//! Doubly-indexed coefficient families `c_{n,m}` defining simple random
//! variables `xi_n = sum_m c_{n,m} 1_{A_m}`, probed along finite windows of
//! sequence indices, together with the Cesàro transform and convex mixing.
//!
//! Boundedness of an infinite coefficient sequence is not decidable from
//! finite probes, so each atom carries a declared tag: `Bounded(C_m)`,
//! `Unbounded`, or `Unknown`. Exact results require declared tags; `Unknown`
//! atoms can be classified by a growth probe whose verdicts are labeled
//! heuristic everywhere downstream.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{check_permutation, AtomicSpace, SimpleRv, MEASURE_TOLERANCE};

/// Declared boundedness of one atom's coefficient sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomBound {
    /// The sequence on this atom is bounded by `C_m`.
    Bounded(f64),
    /// The sequence on this atom is unbounded.
    Unbounded,
    /// No declaration; exact operations refuse, heuristic mode probes.
    Unknown,
}

impl AtomBound {
    pub fn is_unknown(&self) -> bool {
        matches!(self, AtomBound::Unknown)
    }
}

/// A per-atom rule `n -> c_{n,m}` for the built-in family library.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AtomRule {
    /// `c_n = value`
    Constant { value: f64 },
    /// `c_n = scale * n^alpha`
    Power { alpha: f64, scale: f64 },
    /// `c_n = level * (1 + wobble * sin n)`; bounded by `level * (1 + |wobble|)`.
    Oscillation { level: f64, wobble: f64 },
    /// `c_n = level + bump / n`; converges to `level` from the first index on.
    Decay { level: f64, bump: f64 },
    /// `c_n = amplitude` (or `amplitude * n` if `grow`) when
    /// `n % period == phase`, else 0.
    Burst {
        period: u64,
        phase: u64,
        amplitude: f64,
        grow: bool,
    },
    /// `c_n = values[n - 1]`, only defined for `n <= values.len()`.
    Table { values: Vec<f64> },
}

impl AtomRule {
    fn value(&self, n: u64) -> Result<f64> {
        let v = match self {
            AtomRule::Constant { value } => *value,
            AtomRule::Power { alpha, scale } => scale * (n as f64).powf(*alpha),
            AtomRule::Oscillation { level, wobble } => level * (1.0 + wobble * (n as f64).sin()),
            AtomRule::Decay { level, bump } => level + bump / n as f64,
            AtomRule::Burst {
                period,
                phase,
                amplitude,
                grow,
            } => {
                if *period > 0 && n % period == phase % period {
                    if *grow {
                        amplitude * n as f64
                    } else {
                        *amplitude
                    }
                } else {
                    0.0
                }
            }
            AtomRule::Table { values } => {
                let idx = n
                    .checked_sub(1)
                    .and_then(|i| usize::try_from(i).ok())
                    .filter(|&i| i < values.len());
                match idx {
                    Some(i) => values[i],
                    None => {
                        return Err(Error::InvalidFamily(format!(
                            "table rule has no row for n = {n}"
                        )))
                    }
                }
            }
        };
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidFamily(format!(
                "rule produced c = {v} at n = {n}; coefficients must be finite and >= 0"
            )));
        }
        Ok(v)
    }

    /// Largest defined sequence index, if the rule has finite support.
    fn max_index(&self) -> Option<u64> {
        match self {
            AtomRule::Table { values } => Some(values.len() as u64),
            _ => None,
        }
    }
}

type Evaluator = Arc<dyn Fn(u64, usize) -> f64 + Send + Sync>;

/// How coefficients are produced across atoms.
#[derive(Clone)]
pub enum FamilyRule {
    /// The same rule on every atom.
    Uniform(AtomRule),
    /// One rule per atom position.
    PerAtom(Vec<AtomRule>),
    /// Full table: `rows[n - 1][m]`.
    Table(Vec<Vec<f64>>),
    /// Arbitrary pure evaluator `(n, atom position) -> c`; programmatic use only.
    Custom(Evaluator),
}

impl fmt::Debug for FamilyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyRule::Uniform(r) => f.debug_tuple("Uniform").field(r).finish(),
            FamilyRule::PerAtom(rs) => f.debug_tuple("PerAtom").field(rs).finish(),
            FamilyRule::Table(rows) => f.debug_struct("Table").field("rows", &rows.len()).finish(),
            FamilyRule::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A coefficient family `c_{n,m}` with per-atom boundedness metadata.
///
/// The evaluator is pure, so families are safe to share across workers.
#[derive(Debug, Clone)]
pub struct CoefficientFamily {
    rule: Arc<FamilyRule>,
    atom_meta: Vec<AtomBound>,
    description: String,
}

impl CoefficientFamily {
    pub fn new(rule: FamilyRule, atom_meta: Vec<AtomBound>, description: &str) -> Result<Self> {
        if atom_meta.is_empty() {
            return Err(Error::InvalidFamily("no atoms".into()));
        }
        if let FamilyRule::PerAtom(rules) = &rule {
            if rules.len() != atom_meta.len() {
                return Err(Error::LengthMismatch {
                    expected: atom_meta.len(),
                    got: rules.len(),
                });
            }
        }
        if let FamilyRule::Table(rows) = &rule {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != atom_meta.len() {
                    return Err(Error::InvalidFamily(format!(
                        "table row {} has {} cells, want {}",
                        i + 1,
                        row.len(),
                        atom_meta.len()
                    )));
                }
            }
        }
        Ok(Self {
            rule: Arc::new(rule),
            atom_meta,
            description: description.to_string(),
        })
    }

    /// A custom evaluator family.
    pub fn from_fn<F>(f: F, atom_meta: Vec<AtomBound>, description: &str) -> Result<Self>
    where
        F: Fn(u64, usize) -> f64 + Send + Sync + 'static,
    {
        Self::new(FamilyRule::Custom(Arc::new(f)), atom_meta, description)
    }

    /// A single-atom table family from a sampled trajectory (the bridge from
    /// Monte Carlo paths to the atomic-space machinery).
    pub fn from_trajectory(values: &[f64], meta: AtomBound, description: &str) -> Result<Self> {
        let rule = FamilyRule::PerAtom(vec![AtomRule::Table {
            values: values.to_vec(),
        }]);
        Self::new(rule, vec![meta], description)
    }

    pub fn atom_count(&self) -> usize {
        self.atom_meta.len()
    }

    pub fn atom_meta(&self) -> &[AtomBound] {
        &self.atom_meta
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// `c_{n,m}` for atom position `m`.
    pub fn coefficient(&self, n: u64, atom: usize) -> Result<f64> {
        if atom >= self.atom_meta.len() {
            return Err(Error::IndexOutOfRange {
                index: atom,
                count: self.atom_meta.len(),
            });
        }
        if n == 0 {
            return Err(Error::InvalidFamily("sequence index n starts at 1".into()));
        }
        match self.rule.as_ref() {
            FamilyRule::Uniform(rule) => rule.value(n),
            FamilyRule::PerAtom(rules) => rules[atom].value(n),
            FamilyRule::Table(rows) => {
                let idx = usize::try_from(n - 1).ok().filter(|&i| i < rows.len());
                match idx {
                    Some(i) => {
                        let v = rows[i][atom];
                        if !v.is_finite() || v < 0.0 {
                            return Err(Error::InvalidFamily(format!(
                                "table cell ({n}, {atom}) = {v} must be finite and >= 0"
                            )));
                        }
                        Ok(v)
                    }
                    None => Err(Error::InvalidFamily(format!(
                        "table family has no row for n = {n}"
                    ))),
                }
            }
            FamilyRule::Custom(f) => {
                let v = f(n, atom);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidFamily(format!(
                        "custom evaluator produced c = {v} at (n = {n}, atom = {atom})"
                    )));
                }
                Ok(v)
            }
        }
    }

    /// Largest sequence index every atom is defined at, if finite.
    pub fn max_index(&self) -> Option<u64> {
        match self.rule.as_ref() {
            FamilyRule::Uniform(rule) => rule.max_index(),
            FamilyRule::PerAtom(rules) => rules.iter().filter_map(AtomRule::max_index).min(),
            FamilyRule::Table(rows) => Some(rows.len() as u64),
            FamilyRule::Custom(_) => None,
        }
    }

    /// Reorder atoms by `perm`; metadata travels with its atom. For custom
    /// evaluators the remap is applied on top of the stored closure.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.atom_count())?;
        let atom_meta = perm.iter().map(|&j| self.atom_meta[j]).collect();
        let rule = match self.rule.as_ref() {
            FamilyRule::Uniform(rule) => FamilyRule::Uniform(rule.clone()),
            FamilyRule::PerAtom(rules) => {
                FamilyRule::PerAtom(perm.iter().map(|&j| rules[j].clone()).collect())
            }
            FamilyRule::Table(rows) => FamilyRule::Table(
                rows.iter()
                    .map(|row| perm.iter().map(|&j| row[j]).collect())
                    .collect(),
            ),
            FamilyRule::Custom(f) => {
                let f = Arc::clone(f);
                let perm = perm.to_vec();
                FamilyRule::Custom(Arc::new(move |n, atom| f(n, perm[atom])))
            }
        };
        Ok(Self {
            rule: Arc::new(rule),
            atom_meta,
            description: self.description.clone(),
        })
    }

    /// Read a table family from CSV: header row names the atoms, data row `i`
    /// holds `c_{i,m}`. Missing or malformed cells are invalid.
    pub fn from_csv(path: &Path, atom_meta: Vec<AtomBound>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_path(path)
            .map_err(Error::Csv)?;
        let headers = reader.headers().map_err(Error::Csv)?.clone();
        let atoms = headers.len();
        if atoms != atom_meta.len() {
            return Err(Error::InvalidFamily(format!(
                "CSV names {atoms} atoms but {} metadata tags were given",
                atom_meta.len()
            )));
        }
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(Error::Csv)?;
            if record.len() != atoms {
                return Err(Error::InvalidFamily(format!(
                    "CSV row {} has {} cells, want {atoms}",
                    i + 1,
                    record.len()
                )));
            }
            let mut row = Vec::with_capacity(atoms);
            for (j, cell) in record.iter().enumerate() {
                let trimmed = cell.trim();
                if trimmed.is_empty() {
                    return Err(Error::InvalidFamily(format!(
                        "CSV row {} column {} ({}) is empty",
                        i + 1,
                        j + 1,
                        &headers[j]
                    )));
                }
                let v: f64 = trimmed.parse().map_err(|_| {
                    Error::InvalidFamily(format!(
                        "CSV row {} column {} ({}): cannot parse `{trimmed}`",
                        i + 1,
                        j + 1,
                        &headers[j]
                    ))
                })?;
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidFamily(format!(
                        "CSV row {} column {}: value {v} must be finite and >= 0",
                        i + 1,
                        j + 1
                    )));
                }
                row.push(v);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::InvalidFamily("CSV table has no data rows".into()));
        }
        let description = format!("table from {}", path.display());
        Self::new(FamilyRule::Table(rows), atom_meta, &description)
    }
}

/// A finite probed subsequence `n_1 < n_2 < ... < n_K` of a family on a space.
///
/// The window carries its own per-atom boundedness tags: they start as the
/// family's declared tags and may be refined by subsequence selection (an
/// atom unbounded over the full sequence can be bounded along a selected
/// window).
#[derive(Debug, Clone)]
pub struct SequenceWindow {
    family: CoefficientFamily,
    space: AtomicSpace,
    indices: Vec<u64>,
    window_meta: Vec<AtomBound>,
}

impl SequenceWindow {
    pub fn new(family: CoefficientFamily, space: AtomicSpace, indices: Vec<u64>) -> Result<Self> {
        if family.atom_count() != space.atom_count() {
            return Err(Error::LengthMismatch {
                expected: space.atom_count(),
                got: family.atom_count(),
            });
        }
        if indices.is_empty() {
            return Err(Error::InvalidWindow("indices must be nonempty".into()));
        }
        if indices[0] == 0 {
            return Err(Error::InvalidWindow("sequence indices start at 1".into()));
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidWindow(
                "indices must be strictly increasing".into(),
            ));
        }
        if let Some(max) = family.max_index() {
            let last = *indices.last().expect("nonempty");
            if last > max {
                return Err(Error::InvalidWindow(format!(
                    "index {last} exceeds the family's largest defined index {max}"
                )));
            }
        }
        let window_meta = family.atom_meta().to_vec();
        Ok(Self {
            family,
            space,
            indices,
            window_meta,
        })
    }

    /// The first `horizon` indices `1..=horizon`.
    pub fn identity(family: CoefficientFamily, space: AtomicSpace, horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidWindow("horizon must be >= 1".into()));
        }
        Self::new(family, space, (1..=horizon).collect())
    }

    pub fn family(&self) -> &CoefficientFamily {
        &self.family
    }

    pub fn space(&self) -> &AtomicSpace {
        &self.space
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Per-atom boundedness along this window.
    pub fn window_meta(&self) -> &[AtomBound] {
        &self.window_meta
    }

    /// Override the boundedness tag of one atom along this window
    /// (subsequence selection refines tags this way).
    pub fn set_window_meta(&mut self, atom: usize, meta: AtomBound) -> Result<()> {
        if atom >= self.window_meta.len() {
            return Err(Error::IndexOutOfRange {
                index: atom,
                count: self.window_meta.len(),
            });
        }
        self.window_meta[atom] = meta;
        Ok(())
    }

    fn check_position(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.indices.len() {
            return Err(Error::PositionOutOfRange {
                position: k,
                length: self.indices.len(),
            });
        }
        Ok(())
    }

    /// `xi_{n_k}` as a simple RV (`k` is 1-based).
    pub fn evaluate(&self, k: usize) -> Result<SimpleRv> {
        self.check_position(k)?;
        let n = self.indices[k - 1];
        let values = (0..self.space.atom_count())
            .map(|m| self.family.coefficient(n, m))
            .collect::<Result<Vec<_>>>()?;
        SimpleRv::new(values)
    }

    /// The Cesàro mean `(1/k) sum_{l<=k} xi_{n_l}` (`k` is 1-based).
    pub fn cesaro(&self, k: usize) -> Result<SimpleRv> {
        self.check_position(k)?;
        let atoms = self.space.atom_count();
        let mut sums = vec![0.0; atoms];
        for l in 1..=k {
            let n = self.indices[l - 1];
            for (m, sum) in sums.iter_mut().enumerate() {
                *sum += self.family.coefficient(n, m)?;
            }
        }
        SimpleRv::new(sums.into_iter().map(|s| s / k as f64).collect())
    }

    /// Permute atoms of the family and space together.
    pub fn permuted_atoms(&self, perm: &[usize]) -> Result<Self> {
        let family = self.family.permuted(perm)?;
        let space = self.space.permuted(perm)?;
        let window_meta = perm.iter().map(|&j| self.window_meta[j]).collect();
        Ok(Self {
            family,
            space,
            indices: self.indices.clone(),
            window_meta,
        })
    }
}

/// The Cesàro transform of a window: position `k` holds the running mean of
/// the first `k` window evaluations, computed once from prefix sums so that
/// every value equals the direct arithmetic mean.
#[derive(Debug, Clone)]
pub struct CesaroFamily {
    window: SequenceWindow,
    // means[k - 1][m] = (1/k) sum_{l<=k} c_{n_l, m}
    means: Vec<Vec<f64>>,
}

impl CesaroFamily {
    pub fn new(window: SequenceWindow) -> Result<Self> {
        let atoms = window.space().atom_count();
        let mut means = Vec::with_capacity(window.len());
        let mut sums = vec![0.0; atoms];
        for (k, &n) in window.indices().iter().enumerate() {
            for (m, sum) in sums.iter_mut().enumerate() {
                *sum += window.family().coefficient(n, m)?;
            }
            let k1 = (k + 1) as f64;
            means.push(sums.iter().map(|s| s / k1).collect());
        }
        Ok(Self { window, means })
    }

    pub fn window(&self) -> &SequenceWindow {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// `xi-bar_{n_k}` as a simple RV (`k` is 1-based).
    pub fn evaluate(&self, k: usize) -> Result<SimpleRv> {
        if k == 0 || k > self.means.len() {
            return Err(Error::PositionOutOfRange {
                position: k,
                length: self.means.len(),
            });
        }
        SimpleRv::new(self.means[k - 1].clone())
    }

    /// The per-atom Cesàro trajectory `k -> mean` for one atom position.
    pub fn atom_trajectory(&self, atom: usize) -> Vec<f64> {
        self.means.iter().map(|row| row[atom]).collect()
    }
}

/// Pointwise convex combination of hull members.
pub fn convex_combination(rvs: &[SimpleRv], weights: &[f64]) -> Result<SimpleRv> {
    if rvs.is_empty() {
        return Err(Error::EmptyInput("no random variables to combine".into()));
    }
    if rvs.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: rvs.len(),
            got: weights.len(),
        });
    }
    let len = rvs[0].len();
    for rv in rvs {
        if rv.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                got: rv.len(),
            });
        }
    }
    if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
        return Err(Error::InvalidRandomVariable(
            "convex weights must be finite and >= 0".into(),
        ));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > MEASURE_TOLERANCE {
        return Err(Error::WeightSum {
            sum,
            tolerance: MEASURE_TOLERANCE,
        });
    }
    let mut values = vec![0.0; len];
    for (rv, &w) in rvs.iter().zip(weights) {
        for (v, &x) in values.iter_mut().zip(rv.values()) {
            *v += w * x;
        }
    }
    SimpleRv::new(values)
}

/// Shared definition of divergence, keyed on block maxima over dyadic index
/// blocks `[2^j, 2^{j+1})`: the series diverges when at least `min_blocks`
/// blocks past the burn-in raise the running record by a factor of at least
/// `growth_factor`.
///
/// On monotone trajectories the record of the previous blocks is the
/// previous block itself, so this coincides with growth sustained across
/// consecutive blocks; counting records instead of consecutive ratios keeps
/// the detector from being reset by the long decay stretches that follow a
/// dominant jump in heavy-tailed data. Blocks before `burn_in_blocks` seed
/// the record but never count, which keeps the small-index noise of the
/// first few samples out of the verdict. A series needs indices up to about
/// `2^(burn_in_blocks + min_blocks)` before it can fire at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DivergenceRule {
    pub growth_factor: f64,
    pub min_blocks: usize,
    /// First dyadic block eligible to count as a record.
    pub burn_in_blocks: u32,
    /// Multiplier applied to the observed maximum when a probe reports
    /// "bounded so far".
    pub safety: f64,
}

impl Default for DivergenceRule {
    fn default() -> Self {
        Self {
            growth_factor: 1.5,
            min_blocks: 3,
            burn_in_blocks: 4,
            safety: 1.1,
        }
    }
}

impl DivergenceRule {
    /// Decide divergence of a series of `(index, value)` points, `index >= 1`.
    pub fn diverges<I>(&self, points: I) -> bool
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        let mut block_max: Vec<(u32, f64)> = Vec::new();
        for (idx, value) in points {
            if idx == 0 {
                continue;
            }
            let block = 63 - idx.leading_zeros(); // floor(log2(idx))
            match block_max.last_mut() {
                Some((b, max)) if *b == block => *max = max.max(value),
                _ => block_max.push((block, value)),
            }
        }
        let mut record = 0.0f64;
        let mut hits = 0usize;
        for (block, max) in block_max {
            if block >= self.burn_in_blocks {
                let is_record = if record == 0.0 {
                    max > 0.0
                } else {
                    max / record >= self.growth_factor
                };
                if is_record {
                    hits += 1;
                    if hits >= self.min_blocks {
                        return true;
                    }
                }
            }
            record = record.max(max);
        }
        false
    }

    /// Growth probe for an `Unknown` atom: classify its coefficients over the
    /// window as `Unbounded` on dyadic growth, else `Bounded` at the observed
    /// maximum times the safety factor.
    pub fn probe(&self, points: &[(u64, f64)]) -> AtomBound {
        if self.diverges(points.iter().copied()) {
            AtomBound::Unbounded
        } else {
            let max = points.iter().fold(0.0f64, |acc, &(_, v)| acc.max(v));
            AtomBound::Bounded(max * self.safety)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn three_atom_space() -> AtomicSpace {
        AtomicSpace::new(vec![0.5, 0.3, 0.2], 0.0).unwrap()
    }

    fn meta(n: usize) -> Vec<AtomBound> {
        vec![AtomBound::Unknown; n]
    }

    #[test]
    fn evaluate_constant_in_m() {
        // c_{n,m} = n on 3 atoms, window (1,2,3), k = 2 -> [2,2,2]
        let family = CoefficientFamily::from_fn(|n, _| n as f64, meta(3), "c = n").unwrap();
        let window = SequenceWindow::new(family, three_atom_space(), vec![1, 2, 3]).unwrap();
        assert_eq!(window.evaluate(2).unwrap().values(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn evaluate_constant_in_n() {
        let family = CoefficientFamily::from_fn(|_, m| (m + 1) as f64, meta(3), "c = m").unwrap();
        let window = SequenceWindow::new(family, three_atom_space(), vec![4, 9]).unwrap();
        assert_eq!(window.evaluate(1).unwrap().values(), &[1.0, 2.0, 3.0]);
        assert_eq!(window.evaluate(2).unwrap().values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn evaluate_single_atom_growth() {
        // c_{n,m} = n * 1{m = positional index 1}, window (5, 10), k = 2 -> [0, 10, 0]
        let family = CoefficientFamily::from_fn(
            |n, m| if m == 1 { n as f64 } else { 0.0 },
            meta(3),
            "growth on atom 2",
        )
        .unwrap();
        let window = SequenceWindow::new(family, three_atom_space(), vec![5, 10]).unwrap();
        assert_eq!(window.evaluate(2).unwrap().values(), &[0.0, 10.0, 0.0]);
    }

    #[test]
    fn evaluate_rejects_out_of_range_position() {
        let family = CoefficientFamily::from_fn(|_, _| 1.0, meta(3), "ones").unwrap();
        let window = SequenceWindow::new(family, three_atom_space(), vec![1, 2]).unwrap();
        assert!(matches!(
            window.evaluate(3),
            Err(Error::PositionOutOfRange { .. })
        ));
        assert!(matches!(
            window.evaluate(0),
            Err(Error::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn cesaro_of_constants() {
        let family = CoefficientFamily::from_fn(|_, _| 7.0, meta(3), "sevens").unwrap();
        let window = SequenceWindow::identity(family, three_atom_space(), 5).unwrap();
        for k in 1..=5 {
            assert_eq!(window.cesaro(k).unwrap().values(), &[7.0, 7.0, 7.0]);
        }
    }

    #[test]
    fn cesaro_of_linear_growth_matches_direct_sum() {
        // c_{n,m} = n with indices 1..k: the mean is (k+1)/2; the expected
        // value is frozen from the direct summation oracle below.
        let family = CoefficientFamily::from_fn(|n, _| n as f64, meta(3), "c = n").unwrap();
        let window = SequenceWindow::identity(family, three_atom_space(), 64).unwrap();
        for k in [1usize, 2, 7, 64] {
            let direct: f64 = (1..=k as u64).map(|n| n as f64).sum::<f64>() / k as f64;
            assert_abs_diff_eq!(direct, (k as f64 + 1.0) / 2.0, epsilon = 1e-12);
            for &v in window.cesaro(k).unwrap().values() {
                assert_abs_diff_eq!(v, direct, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn cesaro_of_alternating_indicator() {
        // c_{n,m} = 1{n odd}, indices 1..2j -> exactly 1/2; frozen from
        // direct summation over the 2j terms.
        let family = CoefficientFamily::from_fn(
            |n, _| if n % 2 == 1 { 1.0 } else { 0.0 },
            meta(2),
            "odd indicator",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.5, 0.5], 0.0).unwrap();
        let window = SequenceWindow::identity(family, space, 20).unwrap();
        for j in [1usize, 3, 10] {
            let k = 2 * j;
            let direct: f64 = (1..=k as u64)
                .map(|n| if n % 2 == 1 { 1.0 } else { 0.0 })
                .sum::<f64>()
                / k as f64;
            assert_abs_diff_eq!(direct, 0.5, epsilon = 1e-15);
            for &v in window.cesaro(k).unwrap().values() {
                assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn cesaro_family_matches_window_cesaro() {
        let family = CoefficientFamily::from_fn(
            |n, m| (n as f64).sqrt() * (m + 1) as f64,
            meta(3),
            "sqrt growth",
        )
        .unwrap();
        let window = SequenceWindow::identity(family, three_atom_space(), 32).unwrap();
        let cesaro = CesaroFamily::new(window.clone()).unwrap();
        for k in 1..=32 {
            let expect = window.cesaro(k).unwrap();
            let got = cesaro.evaluate(k).unwrap();
            for (a, b) in expect.values().iter().zip(got.values()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn convex_combination_identity() {
        let rv = SimpleRv::new(vec![1.0, 2.0]).unwrap();
        let out = convex_combination(std::slice::from_ref(&rv), &[1.0]).unwrap();
        assert_eq!(out.values(), rv.values());
    }

    #[test]
    fn convex_combination_midpoint() {
        let a = SimpleRv::new(vec![1.0, 1.0]).unwrap();
        let b = SimpleRv::new(vec![3.0, 3.0]).unwrap();
        let out = convex_combination(&[a, b], &[0.5, 0.5]).unwrap();
        assert_eq!(out.values(), &[2.0, 2.0]);
    }

    #[test]
    fn convex_combination_three_terms() {
        // hand evaluation: 1/4*[0,4] + 1/4*[4,0] + 1/2*[2,2] = [2,2]
        let rvs = [
            SimpleRv::new(vec![0.0, 4.0]).unwrap(),
            SimpleRv::new(vec![4.0, 0.0]).unwrap(),
            SimpleRv::new(vec![2.0, 2.0]).unwrap(),
        ];
        let out = convex_combination(&rvs, &[0.25, 0.25, 0.5]).unwrap();
        assert_eq!(out.values(), &[2.0, 2.0]);
    }

    #[test]
    fn convex_combination_rejects_bad_weights() {
        let a = SimpleRv::new(vec![1.0]).unwrap();
        let b = SimpleRv::new(vec![2.0]).unwrap();
        assert!(matches!(
            convex_combination(&[a.clone(), b.clone()], &[0.6, 0.6]),
            Err(Error::WeightSum { .. })
        ));
        let c = SimpleRv::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            convex_combination(&[a, c], &[0.5, 0.5]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn cesaro_equals_uniform_convex_combination() {
        // every Cesàro evaluation is a hull member of C with uniform weights
        let family = CoefficientFamily::from_fn(
            |n, m| ((n * (m as u64 + 1)) % 7) as f64,
            meta(3),
            "mod 7 pattern",
        )
        .unwrap();
        let window = SequenceWindow::identity(family, three_atom_space(), 12).unwrap();
        for k in 1..=12 {
            let evals: Vec<SimpleRv> = (1..=k).map(|l| window.evaluate(l).unwrap()).collect();
            let weights = vec![1.0 / k as f64; k];
            let mixed = convex_combination(&evals, &weights).unwrap();
            let cesaro = window.cesaro(k).unwrap();
            for (a, b) in mixed.values().iter().zip(cesaro.values()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn divergence_rule_fires_on_linear_growth() {
        let rule = DivergenceRule::default();
        assert!(rule.diverges((1..=256).map(|n| (n, n as f64))));
        assert!(!rule.diverges((1..=256).map(|n| (n, 5.0 + (n as f64).sin()))));
        // too few dyadic blocks past burn-in: cannot fire yet
        assert!(!rule.diverges((1..=64).map(|n| (n, n as f64))));
        assert!(rule.diverges((1..=128).map(|n| (n, n as f64))));
    }

    #[test]
    fn divergence_rule_handles_late_start() {
        // zero until n = 100, then linear: the zero -> positive jump plus
        // subsequent doubling still counts as growth.
        let rule = DivergenceRule::default();
        let pts = (1u64..=1024).map(|n| (n, if n >= 100 { n as f64 } else { 0.0 }));
        assert!(rule.diverges(pts));
    }

    #[test]
    fn growth_probe_bounds_with_safety_margin() {
        let rule = DivergenceRule::default();
        let pts: Vec<(u64, f64)> = (1..=128).map(|n| (n, 3.0 + (n as f64).cos())).collect();
        match rule.probe(&pts) {
            AtomBound::Bounded(c) => {
                let max = pts.iter().fold(0.0f64, |a, &(_, v)| a.max(v));
                assert_abs_diff_eq!(c, max * 1.1, epsilon = 1e-12);
            }
            other => panic!("expected Bounded, got {other:?}"),
        }
    }

    #[test]
    fn window_rejects_bad_indices() {
        let family = CoefficientFamily::from_fn(|_, _| 1.0, meta(3), "ones").unwrap();
        let space = three_atom_space();
        assert!(SequenceWindow::new(family.clone(), space.clone(), vec![]).is_err());
        assert!(SequenceWindow::new(family.clone(), space.clone(), vec![0, 1]).is_err());
        assert!(SequenceWindow::new(family, space, vec![3, 3]).is_err());
    }

    #[test]
    fn window_rejects_indices_beyond_table() {
        let family = CoefficientFamily::new(
            FamilyRule::Table(vec![vec![1.0, 2.0], vec![3.0, 4.0]]),
            meta(2),
            "2-row table",
        )
        .unwrap();
        let space = AtomicSpace::new(vec![0.5, 0.5], 0.0).unwrap();
        assert!(SequenceWindow::new(family.clone(), space.clone(), vec![1, 2]).is_ok());
        assert!(SequenceWindow::new(family, space, vec![1, 3]).is_err());
    }

    #[test]
    fn csv_round_trip_and_missing_cells() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("family.csv");
        std::fs::write(&good, "a1,a2\n1.0,2.0\n3.0,4.0\n").unwrap();
        let family = CoefficientFamily::from_csv(&good, meta(2)).unwrap();
        assert_eq!(family.coefficient(2, 1).unwrap(), 4.0);
        assert_eq!(family.max_index(), Some(2));

        let bad = dir.path().join("short.csv");
        std::fs::write(&bad, "a1,a2\n1.0,2.0\n3.0\n").unwrap();
        assert!(CoefficientFamily::from_csv(&bad, meta(2)).is_err());

        let empty_cell = dir.path().join("empty.csv");
        std::fs::write(&empty_cell, "a1,a2\n1.0,\n").unwrap();
        assert!(CoefficientFamily::from_csv(&empty_cell, meta(2)).is_err());
    }

    #[test]
    fn negative_coefficients_rejected() {
        let family =
            CoefficientFamily::from_fn(|n, _| 1.0 - n as f64, meta(2), "goes negative").unwrap();
        assert!(family.coefficient(1, 0).is_ok());
        assert!(family.coefficient(2, 0).is_err());
    }

    proptest! {
        // Cesàro is shift-contractive on bounded atoms: window values <= C
        // force every Cesàro value <= C.
        #[test]
        fn cesaro_respects_atom_bounds(values in proptest::collection::vec(0.0f64..10.0, 4..40)) {
            let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
            let bound = values.iter().cloned().fold(0.0f64, f64::max);
            let family = CoefficientFamily::new(
                FamilyRule::Table(rows),
                vec![AtomBound::Bounded(bound)],
                "bounded table",
            ).unwrap();
            let space = AtomicSpace::new(vec![1.0], 0.0).unwrap();
            let window = SequenceWindow::identity(family, space, values.len() as u64).unwrap();
            for k in 1..=values.len() {
                prop_assert!(window.cesaro(k).unwrap().value(0) <= bound + 1e-12);
            }
        }

        // Hull closure: nested mixing equals the flattened combination.
        #[test]
        fn nested_mixing_flattens(
            a in proptest::collection::vec(0.0f64..5.0, 3),
            b in proptest::collection::vec(0.0f64..5.0, 3),
            c in proptest::collection::vec(0.0f64..5.0, 3),
            lambda in 0.0f64..1.0,
            mu in 0.0f64..1.0,
        ) {
            let ra = SimpleRv::new(a).unwrap();
            let rb = SimpleRv::new(b).unwrap();
            let rc = SimpleRv::new(c).unwrap();
            let inner = convex_combination(&[ra.clone(), rb.clone()], &[lambda, 1.0 - lambda]).unwrap();
            let nested = convex_combination(&[inner, rc.clone()], &[mu, 1.0 - mu]).unwrap();
            let flat = convex_combination(
                &[ra, rb, rc],
                &[lambda * mu, (1.0 - lambda) * mu, 1.0 - mu],
            ).unwrap();
            for (x, y) in nested.values().iter().zip(flat.values()) {
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }
}
