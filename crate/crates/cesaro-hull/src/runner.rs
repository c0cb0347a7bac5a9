//! Experiment pipelines behind the CLI: partition runs, sampling runs, the
//! standalone oracle, and suite execution over a config directory. Reports
//! keep machine verdicts separate from narrative text, and everything except
//! the timings block is byte-deterministic for a fixed config.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, WindowConfig};
use crate::decomposition::{
    bounded_in_probability, brute_force_boundedness_oracle, build_equivalent_measure,
    certify_l1_bound, hereditarily_unbounded, partition_with_bounds, BoundednessDecision, Mode,
    OracleDecision, Partition, Provenance,
};
use crate::error::{Error, Result};
use crate::family::{CesaroFamily, SequenceWindow};
use crate::limits::{
    select_subsequence, tightness_check, verify_three_set_identity, weak_convergence_check,
    LimitProfile, TightnessReport, TightnessVerdict, Verdict, WeakConvergenceVerdict,
};
use crate::slln::{
    slln_regime_check, verify_variance_condition, RegimeParams, RegimeReport, VarianceReport,
};
use crate::space::SimpleRv;

/// CLI-level overrides applied on top of a loaded config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub mode: Option<Mode>,
    pub out_dir: Option<PathBuf>,
    pub eps_grid: Option<Vec<f64>>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(mode) = self.mode {
            config.mode = mode;
        }
        if let Some(out) = &self.out_dir {
            config.out_dir = Some(out.clone());
        }
        if let Some(grid) = &self.eps_grid {
            config.tolerances.eps_grid = grid.clone();
        }
    }
}

/// The external certificate schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateRecord {
    pub atoms: Vec<u32>,
    #[serde(rename = "J_b")]
    pub j_b: Vec<u32>,
    #[serde(rename = "J_u")]
    pub j_u: Vec<u32>,
    pub q: Vec<f64>,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "Q")]
    pub q_probs: Vec<f64>,
    pub l1_bound: f64,
    pub checked_sup: f64,
    pub provenance: Provenance,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainItem {
    pub name: String,
    pub pass: bool,
}

/// One fully asserted equivalence chain (every edge checked, not just the
/// endpoints).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub items: Vec<ChainItem>,
    pub pass: bool,
}

impl ChainReport {
    fn new(items: Vec<ChainItem>) -> Self {
        let pass = items.iter().all(|i| i.pass);
        Self { items, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeSetVerdict {
    pub finite_set: Vec<u32>,
    pub omega_b: Vec<u32>,
    pub omega_b_bar: Vec<u32>,
    pub equal: [bool; 3],
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionSummary {
    pub identity: bool,
    pub fallback: bool,
    pub kept: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionBody {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionSummary>,
    pub partition: Partition,
    pub cesaro_partition: Partition,
    pub limit_profile: LimitProfile,
    pub three_set: ThreeSetVerdict,
    pub certificate: CertificateRecord,
    pub cesaro_certificate_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_chain: Option<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinite_chain: Option<ChainReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingBody {
    pub regime: RegimeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance: Option<VarianceReport>,
    pub summary: crate::slln::RunSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleBody {
    pub m_grid: Vec<f64>,
    pub decisions: Vec<OracleItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleItem {
    pub eps: f64,
    pub oracle: OracleDecision,
    pub exact: BoundednessDecision,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RunBody {
    Partition(Box<PartitionBody>),
    Sampling(SamplingBody),
    Oracle(OracleBody),
}

/// A complete run report. `timings_ms` is the only nondeterministic block;
/// [`RunReport::deterministic_json`] strips it.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub seed: u64,
    pub mode: Mode,
    pub all_pass: bool,
    pub config: ExperimentConfig,
    pub body: RunBody,
    pub narrative: Vec<String>,
    pub timings_ms: BTreeMap<String, u128>,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The verdict sections only: serialized JSON with the timings block
    /// removed. Byte-identical across reruns of the same config.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut value = serde_json::to_value(self)?;
        if let Some(map) = value.as_object_mut() {
            map.remove("timings_ms");
        }
        Ok(serde_json::to_string_pretty(&value)?)
    }
}

struct Stopwatch {
    timings: BTreeMap<String, u128>,
    last: Instant,
}

impl Stopwatch {
    fn new() -> Self {
        Self {
            timings: BTreeMap::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.timings
            .insert(stage.to_string(), (now - self.last).as_millis());
        self.last = now;
    }
}

fn stage<T>(name: &'static str, result: Result<T>) -> Result<T> {
    result.map_err(|e| e.in_stage(name))
}

fn build_window(
    config: &ExperimentConfig,
    base_dir: &Path,
) -> Result<(SequenceWindow, Option<SelectionSummary>)> {
    let space = config.require_space()?.build()?;
    let family = config.require_family()?.build(base_dir)?;
    let params = config.tolerances.limit_params();
    match config.require_window()? {
        WindowConfig::Horizon { horizon } => {
            Ok((SequenceWindow::identity(family, space, *horizon)?, None))
        }
        WindowConfig::Indices { indices } => {
            Ok((SequenceWindow::new(family, space, indices.clone())?, None))
        }
        WindowConfig::Select { horizon, block } => {
            let result = select_subsequence(&family, &space, *horizon, *block, &params)?;
            let summary = SelectionSummary {
                identity: result.identity,
                fallback: result.fallback,
                kept: result.window.len(),
            };
            Ok((result.window, Some(summary)))
        }
    }
}

fn set_to_vec(set: &std::collections::BTreeSet<u32>) -> Vec<u32> {
    set.iter().copied().collect()
}

/// Everything the equivalence chains inspect, borrowed from the pipeline.
struct ChainContext<'a> {
    window: &'a SequenceWindow,
    cesaro: &'a CesaroFamily,
    part: &'a Partition,
    cesaro_part: &'a Partition,
    profile: &'a LimitProfile,
    eps_grid: &'a [f64],
    mode: Mode,
    rule: &'a crate::family::DivergenceRule,
}

impl ChainContext<'_> {
    fn decisions<H: crate::decomposition::HullWindow>(
        &self,
        hull: &H,
        restrict: &std::collections::BTreeSet<u32>,
    ) -> Result<Vec<BoundednessDecision>> {
        self.eps_grid
            .iter()
            .map(|&eps| bounded_in_probability(hull, restrict, eps, self.mode, self.rule))
            .collect()
    }

    fn finite_chain(
        &self,
        cert_ok: bool,
        cesaro_cert_ok: bool,
        tightness: &TightnessReport,
    ) -> Result<ChainReport> {
        let all = self.window.space().label_set();
        let mut items = Vec::new();
        items.push(ChainItem {
            name: "finite set covers every atom".into(),
            pass: self.profile.finite_set() == &all,
        });
        for (hull_name, decisions) in [
            ("evaluation hull", self.decisions(self.window, &all)?),
            ("cesaro hull", self.decisions(self.cesaro, &all)?),
        ] {
            items.push(ChainItem {
                name: format!("{hull_name} bounded in probability at every eps"),
                pass: decisions
                    .iter()
                    .all(|d| matches!(d, BoundednessDecision::BoundedWithM { .. })),
            });
        }
        items.push(ChainItem {
            name: "L1 certificate holds on the evaluation hull".into(),
            pass: cert_ok,
        });
        items.push(ChainItem {
            name: "L1 certificate holds on the cesaro hull".into(),
            pass: cesaro_cert_ok,
        });
        items.push(ChainItem {
            name: "evaluation samples are tight".into(),
            pass: tightness.verdict == TightnessVerdict::Tight,
        });
        let cesaro_samples: Vec<SimpleRv> = (1..=self.cesaro.len())
            .map(|k| self.cesaro.evaluate(k))
            .collect::<Result<_>>()?;
        let weak = if cesaro_samples.len() >= 8 {
            matches!(
                weak_convergence_check(&cesaro_samples, self.window.space())?,
                WeakConvergenceVerdict::ConvergesTo(_)
            )
        } else {
            false
        };
        items.push(ChainItem {
            name: "cesaro samples converge weakly".into(),
            pass: weak,
        });
        Ok(ChainReport::new(items))
    }

    fn infinite_chain(&self) -> Result<ChainReport> {
        let all = self.window.space().label_set();
        let mut items = Vec::new();
        items.push(ChainItem {
            name: "finite set is empty".into(),
            pass: self.profile.finite_set().is_empty(),
        });
        items.push(ChainItem {
            name: "evaluation hull hereditarily unbounded on the whole space".into(),
            pass: hereditarily_unbounded(self.part, &all),
        });
        items.push(ChainItem {
            name: "cesaro hull hereditarily unbounded on the whole space".into(),
            pass: hereditarily_unbounded(self.cesaro_part, &all),
        });
        for (hull_name, decisions) in [
            ("evaluation hull", self.decisions(self.window, &all)?),
            ("cesaro hull", self.decisions(self.cesaro, &all)?),
        ] {
            items.push(ChainItem {
                name: format!("{hull_name} unbounded with witness at every eps"),
                pass: decisions
                    .iter()
                    .all(|d| matches!(d, BoundednessDecision::Unbounded { .. })),
            });
        }
        Ok(ChainReport::new(items))
    }
}

/// Run the partition pipeline: window, partition, certifying measure, L1
/// certificate, limit profile, three-set identity, and the applicable
/// equivalence chain. Writes the JSON report and CSV plot data when an
/// output directory is configured.
pub fn run_partition(config: &ExperimentConfig, base_dir: &Path) -> Result<RunReport> {
    let mut watch = Stopwatch::new();
    let eps_grid = stage("config", config.eps_grid())?;
    let params = config.tolerances.limit_params();
    let mode = config.mode;
    let rule = config.tolerances.divergence;

    let (window, selection) = stage("window", build_window(config, base_dir))?;
    watch.lap("window");

    let (part, bounds) = stage("partition", partition_with_bounds(&window, mode, &rule))?;
    watch.lap("partition");

    let measure = stage("measure", build_equivalent_measure(&part, &bounds))?;
    let cert = stage("certificate", certify_l1_bound(&window, &part, &measure))?;
    let cert_ok = cert.checked_sup() <= cert.l1_bound() + 1e-9;
    watch.lap("certificate");

    let cesaro = stage("cesaro", CesaroFamily::new(window.clone()))?;
    let (cesaro_part, cesaro_bounds) = stage(
        "cesaro_partition",
        partition_with_bounds(&cesaro, mode, &rule),
    )?;
    let cesaro_measure = stage(
        "cesaro_measure",
        build_equivalent_measure(&cesaro_part, &cesaro_bounds),
    )?;
    let cesaro_cert_ok = certify_l1_bound(&cesaro, &cesaro_part, &cesaro_measure).is_ok();
    watch.lap("cesaro");

    let three = stage("limits", verify_three_set_identity(&window, &params, mode))?;
    let profile = three.profile.clone();
    watch.lap("limits");

    // quantile envelopes over the evaluation samples (plot data + chain input)
    let samples: Vec<SimpleRv> = (1..=window.len())
        .map(|k| window.evaluate(k))
        .collect::<Result<_>>()?;
    let tightness = stage(
        "tightness",
        tightness_check(&samples, window.space(), &eps_grid),
    )?;
    watch.lap("tightness");

    let chains = ChainContext {
        window: &window,
        cesaro: &cesaro,
        part: &part,
        cesaro_part: &cesaro_part,
        profile: &profile,
        eps_grid: &eps_grid,
        mode,
        rule: &config.tolerances.divergence,
    };
    let finite = if part.unbounded_atoms().is_empty() {
        Some(chains.finite_chain(cert_ok, cesaro_cert_ok, &tightness)?)
    } else {
        None
    };
    let infinite = if part.bounded_atoms().is_empty() {
        Some(chains.infinite_chain()?)
    } else {
        None
    };
    watch.lap("chains");

    let certificate = CertificateRecord {
        atoms: measure.labels().to_vec(),
        j_b: set_to_vec(part.bounded_atoms()),
        j_u: set_to_vec(part.unbounded_atoms()),
        q: measure.weights().to_vec(),
        k: measure.normalizer(),
        q_probs: measure.atom_probabilities().to_vec(),
        l1_bound: cert.l1_bound(),
        checked_sup: cert.checked_sup(),
        provenance: part.provenance(),
        seed: config.seed,
    };

    let mut narrative = Vec::new();
    narrative.push(format!(
        "partition: J_b = {:?}, J_u = {:?} ({:?})",
        certificate.j_b,
        certificate.j_u,
        part.provenance()
    ));
    narrative.push(format!(
        "L1 certificate: checked sup {:.6e} against bound {:.6e}",
        cert.checked_sup(),
        cert.l1_bound()
    ));
    if let Some(sel) = &selection {
        narrative.push(format!(
            "selection kept {} indices (identity: {}, fallback: {})",
            sel.kept, sel.identity, sel.fallback
        ));
    }
    narrative.push(format!("three-set identity verdict: {:?}", three.verdict));

    let all_pass = three.verdict.passed()
        && cert_ok
        && cesaro_cert_ok
        && finite.as_ref().is_none_or(|c| c.pass)
        && infinite.as_ref().is_none_or(|c| c.pass);

    let body = PartitionBody {
        selection,
        partition: part,
        cesaro_partition: cesaro_part,
        limit_profile: profile,
        three_set: ThreeSetVerdict {
            finite_set: set_to_vec(&three.finite_set),
            omega_b: set_to_vec(&three.omega_b),
            omega_b_bar: set_to_vec(&three.omega_b_bar),
            equal: three.equal,
            verdict: three.verdict,
        },
        certificate,
        cesaro_certificate_ok: cesaro_cert_ok,
        finite_chain: finite,
        infinite_chain: infinite,
    };

    let report = RunReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        mode,
        all_pass,
        config: config.clone(),
        body: RunBody::Partition(Box::new(body)),
        narrative,
        timings_ms: watch.timings,
    };
    if let Some(out) = &config.out_dir {
        write_partition_outputs(&report, &cesaro, &tightness, out)?;
    }
    Ok(report)
}

fn write_partition_outputs(
    report: &RunReport,
    cesaro: &CesaroFamily,
    tightness: &TightnessReport,
    out: &Path,
) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|source| Error::Io {
        path: out.display().to_string(),
        source,
    })?;
    write_text(&out.join("report.json"), &report.to_json()?)?;

    // cesaro trajectories: (k, atom, value)
    let space = cesaro.window().space();
    let mut w = csv::Writer::from_path(out.join("cesaro_trajectories.csv"))?;
    w.write_record(["k", "atom", "value"])?;
    for k in 1..=cesaro.len() {
        let rv = cesaro.evaluate(k)?;
        for (pos, &v) in rv.values().iter().enumerate() {
            w.write_record(&[k.to_string(), space.label(pos).to_string(), v.to_string()])?;
        }
    }
    w.flush().map_err(|source| Error::Io {
        path: out.display().to_string(),
        source,
    })?;

    // running quantile envelopes: (k = sample index, atom = eps index, value)
    let mut w = csv::Writer::from_path(out.join("quantile_envelopes.csv"))?;
    w.write_record(["k", "atom", "value"])?;
    let mut running = vec![0.0f64; tightness.eps_grid.len()];
    for (i, qs) in tightness.sample_quantiles.iter().enumerate() {
        for (e, &q) in qs.iter().enumerate() {
            running[e] = running[e].max(q);
            w.write_record(&[
                (i + 1).to_string(),
                (e + 1).to_string(),
                running[e].to_string(),
            ])?;
        }
    }
    w.flush().map_err(|source| Error::Io {
        path: out.display().to_string(),
        source,
    })?;
    Ok(())
}

/// Run the sampling pipeline: generate, regime check, and the variance
/// condition when the generator declares one.
pub fn run_slln(config: &ExperimentConfig) -> Result<RunReport> {
    let mut watch = Stopwatch::new();
    let generator = stage("config", config.require_generator())?;
    let spec = stage("generator", generator.to_spec(config.seed))?;
    let run = stage("generate", crate::slln::generate(&spec))?;
    watch.lap("generate");

    let regime_params = RegimeParams {
        limit: config.tolerances.limit_params(),
        ..RegimeParams::default()
    };
    let regime = stage("regime", slln_regime_check(&spec, &run, &regime_params))?;
    watch.lap("regime");

    let variance = match generator.declared_c() {
        Some(c) => Some(stage("variance", verify_variance_condition(&run, c))?),
        None => None,
    };
    watch.lap("variance");

    let mut narrative = Vec::new();
    narrative.push(format!(
        "final cesaro mean {:.6} over {} paths (declared mean {})",
        run.summary().final_cesaro_mean,
        run.summary().paths,
        spec.mean()
    ));
    narrative.push(format!("regime verdict: {:?}", regime.verdict));
    if let Some(v) = &variance {
        narrative.push(format!(
            "variance ratio at N = {}: {:.4} (c = {}, slack {:.4})",
            v.rows.last().map_or(0, |r| r.n),
            v.rows.last().map_or(f64::NAN, |r| r.ratio),
            v.c,
            v.slack
        ));
    }

    let all_pass = regime.verdict.passed() && variance.as_ref().is_none_or(|v| v.all_pass);
    let report = RunReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        mode: config.mode,
        all_pass,
        config: config.clone(),
        body: RunBody::Sampling(SamplingBody {
            regime,
            variance,
            summary: run.summary().clone(),
        }),
        narrative,
        timings_ms: watch.timings,
    };
    if let Some(out) = &config.out_dir {
        std::fs::create_dir_all(out).map_err(|source| Error::Io {
            path: out.display().to_string(),
            source,
        })?;
        write_text(&out.join("report.json"), &report.to_json()?)?;
        let mut w = csv::Writer::from_path(out.join("trajectories.csv"))?;
        w.write_record(["path", "n", "value"])?;
        for (p, path) in run.paths().iter().enumerate() {
            for (i, &v) in path.iter().enumerate() {
                w.write_record(&[p.to_string(), (i + 1).to_string(), v.to_string()])?;
            }
        }
        w.flush().map_err(|source| Error::Io {
            path: out.display().to_string(),
            source,
        })?;
    }
    Ok(report)
}

/// Run the brute-force oracle standalone over the configured window, one
/// decision per epsilon, alongside the exact decision for comparison.
pub fn run_oracle(config: &ExperimentConfig, base_dir: &Path) -> Result<RunReport> {
    let mut watch = Stopwatch::new();
    let eps_grid = stage("config", config.eps_grid())?;
    let oracle_config = config.oracle.clone().unwrap_or_default();
    let m_grid = stage("config", oracle_config.m_grid.build())?;
    let (window, _) = stage("window", build_window(config, base_dir))?;
    let rvs: Vec<SimpleRv> = (1..=window.len())
        .map(|k| window.evaluate(k))
        .collect::<Result<_>>()?;
    watch.lap("window");

    let params = oracle_config.params(config.seed);
    let all = window.space().label_set();
    let mut decisions = Vec::new();
    for &eps in &eps_grid {
        let oracle = stage(
            "oracle",
            brute_force_boundedness_oracle(&rvs, window.space(), eps, &m_grid, &params),
        )?;
        let exact = stage(
            "oracle",
            bounded_in_probability(
                &window,
                &all,
                eps,
                config.mode,
                &config.tolerances.divergence,
            ),
        )?;
        let agree = oracle.agrees_with(&exact);
        decisions.push(OracleItem {
            eps,
            oracle,
            exact,
            agree,
        });
    }
    watch.lap("oracle");

    let all_pass = decisions.iter().all(|d| d.agree);
    let narrative = decisions
        .iter()
        .map(|d| {
            format!(
                "eps = {}: oracle {:?}, exact {:?}",
                d.eps, d.oracle, d.exact
            )
        })
        .collect();
    let report = RunReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        mode: config.mode,
        all_pass,
        config: config.clone(),
        body: RunBody::Oracle(OracleBody { m_grid, decisions }),
        narrative,
        timings_ms: watch.timings,
    };
    if let Some(out) = &config.out_dir {
        std::fs::create_dir_all(out).map_err(|source| Error::Io {
            path: out.display().to_string(),
            source,
        })?;
        write_text(&out.join("report.json"), &report.to_json()?)?;
    }
    Ok(report)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum SuiteStatus {
    Pass,
    Fail,
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteItem {
    pub file: String,
    pub outcome: SuiteStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub items: Vec<SuiteItem>,
    pub all_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Run every `*.json` config in a directory (deterministic filename order,
/// concurrently up to `jobs`). Unreadable configs count as failures but do
/// not stop the suite.
pub fn run_suite(
    dir: &Path,
    jobs: usize,
    overrides: &Overrides,
    out_dir: Option<&Path>,
) -> Result<SuiteReport> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();

    if files.is_empty() {
        return Ok(SuiteReport {
            items: Vec::new(),
            all_pass: true,
            warning: Some(format!("no configs found in {}", dir.display())),
        });
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config {
            path: "--jobs".into(),
            message: e.to_string(),
        })?;
    let base_dir = dir.to_path_buf();
    let items: Vec<SuiteItem> = pool.install(|| {
        files
            .par_iter()
            .map(|file| {
                let name = file
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| file.display().to_string());
                let outcome = match run_one(file, &base_dir, overrides, out_dir) {
                    Ok(true) => SuiteStatus::Pass,
                    Ok(false) => SuiteStatus::Fail,
                    Err(e) => SuiteStatus::Error {
                        message: e.to_string(),
                    },
                };
                SuiteItem {
                    file: name,
                    outcome,
                }
            })
            .collect()
    });
    let all_pass = items.iter().all(|i| matches!(i.outcome, SuiteStatus::Pass));
    let report = SuiteReport {
        items,
        all_pass,
        warning: None,
    };
    if let Some(out) = out_dir {
        std::fs::create_dir_all(out).map_err(|source| Error::Io {
            path: out.display().to_string(),
            source,
        })?;
        write_text(
            &out.join("suite_report.json"),
            &serde_json::to_string_pretty(&report)?,
        )?;
    }
    Ok(report)
}

fn run_one(
    file: &Path,
    base_dir: &Path,
    overrides: &Overrides,
    out_dir: Option<&Path>,
) -> Result<bool> {
    let mut config = ExperimentConfig::load(file)?;
    overrides.apply(&mut config);
    if let Some(out) = out_dir {
        let stem = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        config.out_dir = Some(out.join(stem));
    }
    let report = if config.generator.is_some() {
        run_slln(&config)?
    } else {
        run_partition(&config, base_dir)?
    };
    Ok(report.all_pass)
}
