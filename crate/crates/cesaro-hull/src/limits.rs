//! Cesàro limit profiles per atom, the set where the limit is finite, the
//! three-set equality report (finite set vs. the two hull partitions),
//! subsequence selection, and distribution-level checks (tightness, weak
//! convergence).
//!
//! "Cesàro convergent" is not decidable from finite data, so the classifier
//! below is the operational definition used everywhere: a trajectory whose
//! last `stability_span` values have relative oscillation at most `tol` has
//! a finite limit; one whose dyadic block maxima keep growing by the shared
//! divergence rule has limit infinity; anything else is `NoLimit` and every
//! downstream verdict says so rather than guessing.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::decomposition::{partition, Mode, Partition};
use crate::error::{Error, Result};
use crate::family::{AtomBound, CesaroFamily, CoefficientFamily, DivergenceRule, SequenceWindow};
use crate::space::{AtomicSpace, SimpleRv};

/// Classifier parameters carried by every limit verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitParams {
    /// Relative oscillation tolerance for declaring a finite limit.
    pub tol: f64,
    /// Tail length inspected for stability; `None` means `max(32, K / 4)`.
    pub stability_span: Option<usize>,
    pub divergence: DivergenceRule,
}

impl Default for LimitParams {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            stability_span: None,
            divergence: DivergenceRule::default(),
        }
    }
}

impl LimitParams {
    pub fn effective_span(&self, window_length: usize) -> usize {
        self.stability_span
            .unwrap_or_else(|| 32.max(window_length / 4))
    }
}

/// Classified limit of one atom's Cesàro trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AtomLimit {
    Finite(f64),
    Infinite,
    NoLimit,
}

/// The per-atom limit `xi` and the derived set where it is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitProfile {
    labels: Vec<u32>,
    limits: Vec<AtomLimit>,
    finite_set: BTreeSet<u32>,
    no_limit: BTreeSet<u32>,
    convergence_tolerance: f64,
    stability_span: usize,
    window_length: usize,
}

impl LimitProfile {
    /// Labels in space position order, aligned with `limits()`.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn limits(&self) -> &[AtomLimit] {
        &self.limits
    }

    pub fn limit(&self, atom: usize) -> AtomLimit {
        self.limits[atom]
    }

    /// Atom labels with a finite limit value.
    pub fn finite_set(&self) -> &BTreeSet<u32> {
        &self.finite_set
    }

    /// Atoms the classifier could not decide; flagged, never silently finite.
    pub fn no_limit_atoms(&self) -> &BTreeSet<u32> {
        &self.no_limit
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }

    /// The limit as a limit-flagged RV (`NoLimit` atoms are not representable
    /// and yield an error).
    pub fn as_limit_rv(&self) -> Result<SimpleRv> {
        let values = self
            .limits
            .iter()
            .map(|l| match l {
                AtomLimit::Finite(v) => Ok(*v),
                AtomLimit::Infinite => Ok(f64::INFINITY),
                AtomLimit::NoLimit => Err(Error::InvalidRandomVariable(
                    "profile contains NoLimit atoms".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        SimpleRv::limit(values)
    }
}

/// Classify one trajectory by the shared rule (finite on a stable tail,
/// infinite on dyadic record growth, `NoLimit` otherwise). Values are
/// indexed by position `1..=len` for the divergence blocks.
pub fn classify_trajectory(values: &[f64], params: &LimitParams) -> Result<AtomLimit> {
    let span = params.effective_span(values.len());
    if values.len() < 2 * span {
        return Err(Error::WindowTooShort {
            length: values.len(),
            required: 2 * span,
        });
    }
    Ok(classify_with_span(values, params, span))
}

fn classify_with_span(values: &[f64], params: &LimitParams, span: usize) -> AtomLimit {
    let tail = &values[values.len() - span..];
    let max = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let rel_osc = (max - min) / max.abs().max(1.0);
    if rel_osc <= params.tol {
        let mean = tail.iter().sum::<f64>() / span as f64;
        return AtomLimit::Finite(mean);
    }
    let points = values.iter().enumerate().map(|(i, &v)| (i as u64 + 1, v));
    if params.divergence.diverges(points) {
        AtomLimit::Infinite
    } else {
        AtomLimit::NoLimit
    }
}

/// Classify the Cesàro limit of every atom of a window.
pub fn limit_profile(window: &SequenceWindow, params: &LimitParams) -> Result<LimitProfile> {
    limit_profile_of_cesaro(&CesaroFamily::new(window.clone())?, params)
}

/// Same, reusing an already computed Cesàro transform.
pub fn limit_profile_of_cesaro(
    cesaro: &CesaroFamily,
    params: &LimitParams,
) -> Result<LimitProfile> {
    let length = cesaro.len();
    let span = params.effective_span(length);
    if length < 2 * span {
        return Err(Error::WindowTooShort {
            length,
            required: 2 * span,
        });
    }
    let space = cesaro.window().space();
    let mut limits = Vec::with_capacity(space.atom_count());
    let mut finite_set = BTreeSet::new();
    let mut no_limit = BTreeSet::new();
    for atom in 0..space.atom_count() {
        let trajectory = cesaro.atom_trajectory(atom);
        let class = classify_with_span(&trajectory, params, span);
        match class {
            AtomLimit::Finite(_) => {
                finite_set.insert(space.label(atom));
            }
            AtomLimit::NoLimit => {
                no_limit.insert(space.label(atom));
            }
            AtomLimit::Infinite => {}
        }
        limits.push(class);
    }
    Ok(LimitProfile {
        labels: space.labels().to_vec(),
        limits,
        finite_set,
        no_limit,
        convergence_tolerance: params.tol,
        stability_span: span,
        window_length: length,
    })
}

/// Verdict of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "detail")]
pub enum Verdict {
    Pass,
    Fail,
    /// The classifier could not decide the named atoms.
    Inconclusive {
        atoms: Vec<u32>,
    },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// The three atom sets whose equality is the central identity: the finite
/// set of the limit profile, the bounded part of the hull of window
/// evaluations, and the bounded part of the hull of Cesàro means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeSetReport {
    pub finite_set: BTreeSet<u32>,
    pub omega_b: BTreeSet<u32>,
    pub omega_b_bar: BTreeSet<u32>,
    /// Pairwise equality: finite = omega_b, omega_b = omega_b_bar,
    /// finite = omega_b_bar.
    pub equal: [bool; 3],
    pub verdict: Verdict,
    pub profile: LimitProfile,
    pub partition: Partition,
    pub cesaro_partition: Partition,
}

/// Verify `{xi < inf} = Omega_b = Omega_b-bar` as exact index-set equality.
/// In exact mode this requires declared metadata; heuristic mode probes
/// undeclared atoms and the embedded partitions carry that provenance. Atoms
/// the limit classifier cannot decide make the verdict inconclusive rather
/// than failing the sets.
pub fn verify_three_set_identity(
    window: &SequenceWindow,
    params: &LimitParams,
    mode: Mode,
) -> Result<ThreeSetReport> {
    let cesaro = CesaroFamily::new(window.clone())?;
    let profile = limit_profile_of_cesaro(&cesaro, params)?;
    let part = partition(window, mode, &params.divergence)?;
    let part_bar = partition(&cesaro, mode, &params.divergence)?;
    let finite_set = profile.finite_set().clone();
    let omega_b = part.bounded_atoms().clone();
    let omega_b_bar = part_bar.bounded_atoms().clone();
    let equal = [
        finite_set == omega_b,
        omega_b == omega_b_bar,
        finite_set == omega_b_bar,
    ];
    let verdict = if !profile.no_limit_atoms().is_empty() {
        Verdict::Inconclusive {
            atoms: profile.no_limit_atoms().iter().copied().collect(),
        }
    } else if equal.iter().all(|&e| e) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ThreeSetReport {
        finite_set,
        omega_b,
        omega_b_bar,
        equal,
        verdict,
        profile,
        partition: part,
        cesaro_partition: part_bar,
    })
}

/// Result of subsequence selection.
#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub window: SequenceWindow,
    /// True when band refinement left too few survivors and a stride window
    /// was used instead.
    pub fallback: bool,
    /// True when the identity window already converged and no thinning was
    /// performed.
    pub identity: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Band {
    Zero,
    Dyadic(i32),
}

fn band_of(value: f64) -> Band {
    if value == 0.0 {
        Band::Zero
    } else {
        Band::Dyadic(value.log2().floor() as i32)
    }
}

/// Diagonal band refinement standing in for a convergent-subsequence
/// extraction at desk scale.
///
/// Atoms are visited in order; for each atom that is not declared
/// `Unbounded`, only the indices whose values fall in the modal dyadic
/// value-band survive. If the identity window already converges it is
/// returned unthinned, and if refinement leaves fewer than `block`
/// survivors a stride window is returned with the `fallback` flag set.
/// The output is a heuristic: downstream partitions of refined windows run
/// in heuristic mode unless every atom carries declared tags that hold on
/// the selected indices.
pub fn select_subsequence(
    family: &CoefficientFamily,
    space: &AtomicSpace,
    horizon: u64,
    block: usize,
    params: &LimitParams,
) -> Result<SelectionResult> {
    if block == 0 {
        return Err(Error::InvalidWindow("block must be >= 1".into()));
    }
    if horizon < 4 * block as u64 {
        return Err(Error::WindowTooShort {
            length: horizon as usize,
            required: 4 * block,
        });
    }
    let identity = SequenceWindow::identity(family.clone(), space.clone(), horizon)?;
    let profile = limit_profile(&identity, params)?;
    // the unthinned window is enough when every atom converges, counting a
    // divergent mean as converged only where divergence was declared
    let identity_converges = (0..space.atom_count()).all(|atom| match profile.limit(atom) {
        AtomLimit::Finite(_) => true,
        AtomLimit::Infinite => matches!(family.atom_meta()[atom], AtomBound::Unbounded),
        AtomLimit::NoLimit => false,
    });
    if identity_converges {
        return Ok(SelectionResult {
            window: identity,
            fallback: false,
            identity: true,
        });
    }

    let mut survivors: Vec<u64> = (1..=horizon).collect();
    for atom in 0..space.atom_count() {
        if matches!(family.atom_meta()[atom], AtomBound::Unbounded) {
            continue;
        }
        let mut counts: std::collections::BTreeMap<Band, usize> = Default::default();
        for &n in &survivors {
            *counts
                .entry(band_of(family.coefficient(n, atom)?))
                .or_default() += 1;
        }
        let modal = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(&band, _)| band)
            .expect("survivors nonempty");
        let mut kept = Vec::with_capacity(survivors.len());
        for &n in &survivors {
            if band_of(family.coefficient(n, atom)?) == modal {
                kept.push(n);
            }
        }
        if kept.len() < block {
            let stride = horizon / block as u64;
            let indices: Vec<u64> = (1..=block as u64).map(|i| i * stride).collect();
            let window = SequenceWindow::new(family.clone(), space.clone(), indices)?;
            return Ok(SelectionResult {
                window,
                fallback: true,
                identity: false,
            });
        }
        survivors = kept;
    }
    let window = SequenceWindow::new(family.clone(), space.clone(), survivors)?;
    Ok(SelectionResult {
        window,
        fallback: false,
        identity: false,
    })
}

/// The mean over the full window visited in a caller-supplied order
/// (positions are 0-based). The arithmetic mean is permutation invariant, so
/// this must agree with `window.cesaro(len)` exactly for integer-valued
/// families and within floating-point reassociation error otherwise.
pub fn permuted_final_cesaro(window: &SequenceWindow, order: &[usize]) -> Result<SimpleRv> {
    crate::space::check_permutation(order, window.len())?;
    let atoms = window.space().atom_count();
    let mut sums = vec![0.0; atoms];
    for &pos in order {
        let rv = window.evaluate(pos + 1)?;
        for (s, &v) in sums.iter_mut().zip(rv.values()) {
            *s += v;
        }
    }
    let k = window.len() as f64;
    SimpleRv::new(sums.into_iter().map(|s| s / k).collect())
}

/// The discrete distribution of a simple RV: values sorted ascending with
/// cumulative probability, normalized over the tracked mass.
fn sorted_distribution(space: &AtomicSpace, rv: &SimpleRv) -> Result<Vec<(f64, f64)>> {
    if rv.len() != space.atom_count() {
        return Err(Error::LengthMismatch {
            expected: space.atom_count(),
            got: rv.len(),
        });
    }
    let total = space.tracked_mass();
    let mut pairs: Vec<(f64, f64)> = rv
        .values()
        .iter()
        .copied()
        .zip(space.masses().iter().map(|&p| p / total))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cum = 0.0;
    for pair in &mut pairs {
        cum += pair.1;
        pair.1 = cum;
    }
    Ok(pairs)
}

/// The `level`-quantile of `P ∘ rv` over the tracked atoms.
pub fn quantile(space: &AtomicSpace, rv: &SimpleRv, level: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&level) {
        return Err(Error::InvalidSpace(format!("quantile level {level}")));
    }
    let dist = sorted_distribution(space, rv)?;
    for (value, cum) in &dist {
        if *cum >= level - 1e-12 {
            return Ok(*value);
        }
    }
    Ok(dist.last().expect("nonempty").0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TightnessVerdict {
    Tight,
    NotTightOnWindow,
}

/// Quantile envelopes of a family of distributions over an epsilon grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub eps_grid: Vec<f64>,
    /// `sup` over samples of the `(1 - eps)`-quantile, per epsilon.
    pub envelopes: Vec<f64>,
    /// Whether each envelope stabilized over the second half of the sample.
    pub stable: Vec<bool>,
    /// Per-sample quantile grid, rows aligned with the samples.
    pub sample_quantiles: Vec<Vec<f64>>,
    pub verdict: TightnessVerdict,
}

/// Finite-sample tightness of `{P ∘ X}` via quantile envelopes: tight when
/// every `(1 - eps)`-quantile envelope is finite and grows by at most 10%
/// between the first half of the samples and the full sample.
pub fn tightness_check(
    samples: &[SimpleRv],
    space: &AtomicSpace,
    eps_grid: &[f64],
) -> Result<TightnessReport> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("no samples".into()));
    }
    if eps_grid.is_empty() || eps_grid.iter().any(|&e| !(0.0 < e && e < 1.0)) {
        return Err(Error::InvalidSpace("bad epsilon grid".into()));
    }
    let mut sample_quantiles = Vec::with_capacity(samples.len());
    for rv in samples {
        let qs: Vec<f64> = eps_grid
            .iter()
            .map(|&eps| quantile(space, rv, 1.0 - eps))
            .collect::<Result<_>>()?;
        sample_quantiles.push(qs);
    }
    let half = samples.len().div_ceil(2);
    let mut envelopes = Vec::with_capacity(eps_grid.len());
    let mut stable = Vec::with_capacity(eps_grid.len());
    for e in 0..eps_grid.len() {
        let env_half = sample_quantiles[..half]
            .iter()
            .map(|qs| qs[e])
            .fold(0.0f64, f64::max);
        let env_full = sample_quantiles
            .iter()
            .map(|qs| qs[e])
            .fold(0.0f64, f64::max);
        envelopes.push(env_full);
        stable.push(env_full.is_finite() && env_full <= env_half * 1.10 + 1e-12);
    }
    let verdict = if stable.iter().all(|&s| s) && envelopes.iter().all(|e| e.is_finite()) {
        TightnessVerdict::Tight
    } else {
        TightnessVerdict::NotTightOnWindow
    };
    Ok(TightnessReport {
        eps_grid: eps_grid.to_vec(),
        envelopes,
        stable,
        sample_quantiles,
        verdict,
    })
}

/// A distribution on the fixed evaluation grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub grid: Vec<f64>,
    pub cdf: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WeakConvergenceVerdict {
    ConvergesTo(DistributionSummary),
    NoConvergenceOnWindow,
}

/// Number of points in the fixed CDF evaluation grid.
pub const CDF_GRID_POINTS: usize = 256;

/// Sup-distance tolerance for the Cauchy tail criterion.
pub const CDF_CAUCHY_TOLERANCE: f64 = 1e-3;

fn cdf_on_grid(space: &AtomicSpace, rv: &SimpleRv, grid: &[f64]) -> Result<Vec<f64>> {
    let dist = sorted_distribution(space, rv)?;
    let mut out = Vec::with_capacity(grid.len());
    let mut i = 0;
    let mut cum = 0.0;
    for &x in grid {
        while i < dist.len() && dist[i].0 <= x {
            cum = dist[i].1;
            i += 1;
        }
        out.push(cum);
    }
    Ok(out)
}

/// Weak convergence of an ordered sample sequence: empirical CDFs are
/// compared on a fixed 256-point grid spanning `[0, 1.05 * max value]`, and
/// the sequence converges when the CDFs over the last half of the samples
/// stay within sup-distance `1e-3` of each other.
pub fn weak_convergence_check(
    samples: &[SimpleRv],
    space: &AtomicSpace,
) -> Result<WeakConvergenceVerdict> {
    if samples.len() < 8 {
        return Err(Error::WindowTooShort {
            length: samples.len(),
            required: 8,
        });
    }
    let max = samples
        .iter()
        .flat_map(|rv| rv.values().iter().copied())
        .fold(0.0f64, f64::max);
    let hi = if max > 0.0 { max * 1.05 } else { 1.0 };
    let grid: Vec<f64> = (0..CDF_GRID_POINTS)
        .map(|i| hi * i as f64 / (CDF_GRID_POINTS - 1) as f64)
        .collect();
    let tail_start = samples.len() / 2;
    let tail_cdfs: Vec<Vec<f64>> = samples[tail_start..]
        .iter()
        .map(|rv| cdf_on_grid(space, rv, &grid))
        .collect::<Result<_>>()?;
    // max pairwise sup-distance equals the sup over grid points of the range
    // of CDF values
    let mut worst = 0.0f64;
    for g in 0..grid.len() {
        let mut lo = f64::INFINITY;
        let mut hi_v = f64::NEG_INFINITY;
        for cdf in &tail_cdfs {
            lo = lo.min(cdf[g]);
            hi_v = hi_v.max(cdf[g]);
        }
        worst = worst.max(hi_v - lo);
    }
    if worst <= CDF_CAUCHY_TOLERANCE {
        Ok(WeakConvergenceVerdict::ConvergesTo(DistributionSummary {
            grid,
            cdf: tail_cdfs.last().expect("tail nonempty").clone(),
        }))
    } else {
        Ok(WeakConvergenceVerdict::NoConvergenceOnWindow)
    }
}
