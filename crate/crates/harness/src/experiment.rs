//! End-to-end experiment runner: sweep the projection count under one of the
//! four corruption settings, score reconstructions, aggregate, and emit
//! plot-ready tables.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use uvtomo_core::error::{Error, Result};
use uvtomo_core::io;
use uvtomo_core::ordering::{measure_goodness, nn_order, synth_good_map, Permutation};
use uvtomo_core::sampling::sorted_angles_anchored;
use uvtomo_core::tomo::{add_projection_noise, radon, reconstruct_unknown_angles};
use uvtomo_core::{Image64, ReconstructionConfig64, RngSeed};

use crate::metrics::relative_error;
use crate::phantom::default_phantom;

/// Probe displacement at which ordering errors are counted in reports.
pub const DELTA_PROBE: usize = 4;

/// The four experimental corruption settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    /// Noiseless projections, perfect ordering.
    NoiselessPerfect,
    /// Noisy projections, perfect ordering.
    NoisyPerfect,
    /// Noisy projections, synthetic shuffles-and-shifts ordering errors.
    NoisySyntheticOrder,
    /// Noisy projections, ordering recovered by greedy nearest neighbor.
    NoisyNnOrder,
}

impl Setting {
    pub fn as_str(self) -> &'static str {
        match self {
            Setting::NoiselessPerfect => "noiseless_perfect",
            Setting::NoisyPerfect => "noisy_perfect",
            Setting::NoisySyntheticOrder => "noisy_synthetic_order",
            Setting::NoisyNnOrder => "noisy_nn_order",
        }
    }

    fn code(self) -> u64 {
        match self {
            Setting::NoiselessPerfect => 1,
            Setting::NoisyPerfect => 2,
            Setting::NoisySyntheticOrder => 3,
            Setting::NoisyNnOrder => 4,
        }
    }
}

/// Formula for an ordering-quality parameter as a function of N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaFormula {
    Zero,
    /// `ceil(sqrt(N))`
    CeilSqrt,
    /// `ceil(ln(N)^2)`
    CeilLogSq,
    Const(usize),
}

impl DeltaFormula {
    pub fn eval(self, n: usize) -> usize {
        match self {
            DeltaFormula::Zero => 0,
            DeltaFormula::CeilSqrt => (n as f64).sqrt().ceil() as usize,
            DeltaFormula::CeilLogSq => (n as f64).ln().powi(2).ceil() as usize,
            DeltaFormula::Const(c) => c,
        }
    }
}

/// `(delta_bar(N), n_delta(N))` for the synthetic-order setting.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DeltaPolicy {
    pub delta_bar: DeltaFormula,
    pub n_delta: DeltaFormula,
}

impl Default for DeltaPolicy {
    fn default() -> Self {
        DeltaPolicy {
            delta_bar: DeltaFormula::CeilSqrt,
            n_delta: DeltaFormula::CeilLogSq,
        }
    }
}

/// Full experiment description; JSON-serializable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub setting: Setting,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub sigma_rel: f64,
    #[serde(default)]
    pub delta_policy: DeltaPolicy,
    pub cfg: ReconstructionConfig64,
    pub seed: u64,
    /// Image file in the core format; the procedural phantom when absent.
    #[serde(default)]
    pub phantom: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        if self.n_list.is_empty() {
            return Err(Error::EmptyInput("experiment n_list"));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("n_list must be strictly ascending".into()));
        }
        if self.sigma_rel < 0.0 {
            return Err(Error::InvalidParameter("sigma_rel must be >= 0".into()));
        }
        self.cfg.validate()
    }

    /// Desk-scale profile: at most 5 trials, N capped at 2048.
    pub fn ci_profile(mut self) -> Result<Self> {
        self.trials = self.trials.min(5);
        let capped: Vec<usize> = self.n_list.iter().copied().filter(|&n| n <= 2048).collect();
        if capped.is_empty() {
            return Err(Error::InvalidParameter("ci profile removed every N in n_list".into()));
        }
        self.n_list = capped;
        Ok(self)
    }
}

/// One reconstruction run.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub setting: Setting,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub e: f64,
    pub n_delta: usize,
    pub delta_probe: usize,
    pub reversed: bool,
    pub wall_ms: f64,
    /// Worst per-angle Radon mass-conservation residual of the clean sinogram.
    pub mass_residual: f64,
    /// Error of the reversed ordering, reported when a reversal is flagged.
    pub e_reversed: Option<f64>,
}

/// Per-N aggregate.
#[derive(Clone, Debug, Serialize)]
pub struct Aggregate {
    pub n: usize,
    pub mean_e: f64,
    pub median_e: f64,
    /// Median over runs not flagged as reversed (None when all reversed).
    pub median_e_non_reversed: Option<f64>,
    pub reversed_count: usize,
    pub max_mass_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub setting: Setting,
    pub records: Vec<TrialRecord>,
    pub aggregates: Vec<Aggregate>,
}

impl ExperimentResult {
    pub fn mean_e_per_n(&self) -> Vec<f64> {
        self.aggregates.iter().map(|a| a.mean_e).collect()
    }

    pub fn n_list(&self) -> Vec<usize> {
        self.aggregates.iter().map(|a| a.n).collect()
    }
}

fn load_phantom(spec: &ExperimentSpec) -> Result<Image64> {
    match &spec.phantom {
        Some(path) => io::read_image(path),
        None => Ok(default_phantom(spec.cfg.grid)),
    }
}

fn odd_bins(grid: usize) -> usize {
    if grid % 2 == 0 {
        grid + 1
    } else {
        grid
    }
}

/// Run a single trial; pure function of the derived seed.
fn run_trial(
    spec: &ExperimentSpec,
    phantom: &Image64,
    n: usize,
    trial: usize,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let seed = RngSeed(spec.seed).derive(&[spec.setting.code(), n as u64, trial as u64]);
    let angles = sorted_angles_anchored(n, std::f64::consts::TAU, seed.derive(&[0]))?;
    let clean = radon(phantom, &angles, odd_bins(spec.cfg.grid))?;

    let mass = phantom.mass();
    let mass_residual = clean
        .projection_masses()
        .iter()
        .map(|m| (m - mass).abs() / mass)
        .fold(0.0f64, f64::max);

    let sino = match spec.setting {
        Setting::NoiselessPerfect => clean,
        _ => add_projection_noise(&clean, spec.sigma_rel, seed.derive(&[1]))?,
    };

    let order = match spec.setting {
        Setting::NoiselessPerfect | Setting::NoisyPerfect => Permutation::identity(n),
        Setting::NoisySyntheticOrder => synth_good_map(
            n,
            spec.delta_policy.delta_bar.eval(n),
            spec.delta_policy.n_delta.eval(n),
            seed.derive(&[2]),
        )?,
        Setting::NoisyNnOrder => {
            let rows: Vec<&[f64]> = sino.rows().collect();
            nn_order(&rows, 0)?
        }
    };

    let n_delta = measure_goodness(&order, DELTA_PROBE).n_delta;
    let reversed = order.orientation_correlation() < 0.0;

    let recon = reconstruct_unknown_angles(&sino, &spec.cfg, &order)?;
    let e = relative_error(phantom, &recon)?;

    // Diagnostic only: score the reversed tour when a reversal was flagged.
    let e_reversed = if reversed {
        let rev = order.reversed();
        let recon_rev = reconstruct_unknown_angles(&sino, &spec.cfg, &rev)?;
        Some(relative_error(phantom, &recon_rev)?)
    } else {
        None
    };

    Ok(TrialRecord {
        setting: spec.setting,
        n,
        trial,
        seed: seed.0,
        e,
        n_delta,
        delta_probe: DELTA_PROBE,
        reversed,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        mass_residual,
        e_reversed,
    })
}

fn median(values: &mut Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite errors"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Run the whole sweep. Deterministic for a fixed spec: per-trial seeds are
/// derived from labels, not from execution order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let phantom = load_phantom(spec)?;
    if phantom.width() != spec.cfg.grid || phantom.height() != spec.cfg.grid {
        return Err(Error::DimensionMismatch(format!(
            "phantom {}x{} vs configured grid {}",
            phantom.width(),
            phantom.height(),
            spec.cfg.grid
        )));
    }

    let jobs: Vec<(usize, usize)> = spec
        .n_list
        .iter()
        .flat_map(|&n| (0..spec.trials).map(move |t| (n, t)))
        .collect();
    let records: Vec<TrialRecord> = jobs
        .par_iter()
        .map(|&(n, t)| run_trial(spec, &phantom, n, t))
        .collect::<Result<_>>()?;

    let mut aggregates = Vec::with_capacity(spec.n_list.len());
    for &n in &spec.n_list {
        let group: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
        let mut es: Vec<f64> = group.iter().map(|r| r.e).collect();
        let mean_e = es.iter().sum::<f64>() / es.len() as f64;
        let median_e = median(&mut es);
        let mut non_rev: Vec<f64> =
            group.iter().filter(|r| !r.reversed).map(|r| r.e).collect();
        let median_e_non_reversed =
            if non_rev.is_empty() { None } else { Some(median(&mut non_rev)) };
        let reversed_count = group.iter().filter(|r| r.reversed).count();
        let max_mass_residual =
            group.iter().map(|r| r.mass_residual).fold(0.0f64, f64::max);
        log::info!(
            "{} N={n}: mean E={mean_e:.4e} median E={median_e:.4e} reversed={reversed_count} mass residual={max_mass_residual:.2e}",
            spec.setting.as_str()
        );
        aggregates.push(Aggregate {
            n,
            mean_e,
            median_e,
            median_e_non_reversed,
            reversed_count,
            max_mass_residual,
        });
    }

    Ok(ExperimentResult {
        setting: spec.setting,
        records,
        aggregates,
    })
}

/// Write per-trial records as CSV with the fixed column set.
pub fn write_results_csv(result: &ExperimentResult, path: &Path) -> Result<()> {
    let mut out = String::from("setting,N,trial,seed,E,n_delta,delta_probe,reversed,wall_ms\n");
    for r in &result.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{:.3}\n",
            r.setting.as_str(),
            r.n,
            r.trial,
            r.seed,
            r.e,
            r.n_delta,
            r.delta_probe,
            r.reversed as u8,
            r.wall_ms
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Write aggregates (and the spec echo) as JSON next to the CSV.
pub fn write_summary_json(
    spec: &ExperimentSpec,
    result: &ExperimentResult,
    path: &Path,
) -> Result<()> {
    #[derive(Serialize)]
    struct Summary<'a> {
        spec: &'a ExperimentSpec,
        aggregates: &'a [Aggregate],
        reversed_diagnostics: Vec<ReversedDiag>,
    }
    #[derive(Serialize)]
    struct ReversedDiag {
        n: usize,
        trial: usize,
        e: f64,
        e_reversed: f64,
    }
    let reversed_diagnostics = result
        .records
        .iter()
        .filter_map(|r| {
            r.e_reversed.map(|er| ReversedDiag {
                n: r.n,
                trial: r.trial,
                e: r.e,
                e_reversed: er,
            })
        })
        .collect();
    let summary = Summary {
        spec,
        aggregates: &result.aggregates,
        reversed_diagnostics,
    };
    std::fs::write(path, serde_json::to_string_pretty(&summary)?)?;
    Ok(())
}

/// Histogram study of nearest-neighbor ordering errors on clean projections.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderingHistogramSpec {
    pub n: usize,
    pub seeds: usize,
    pub grid: usize,
    pub sigma_rel: f64,
    pub seed: u64,
    #[serde(default)]
    pub phantom: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderingHistogramResult {
    pub delta_probe: usize,
    /// `(seed, n_delta, reversed)` per run.
    pub per_seed: Vec<(u64, usize, bool)>,
    /// Power-of-two bins over non-reversal runs: upper edges 0, 1, 2, 4, ...
    pub bins: Vec<(usize, usize)>,
    pub reversed_count: usize,
}

pub fn ordering_histogram(spec: &OrderingHistogramSpec) -> Result<OrderingHistogramResult> {
    let phantom = match &spec.phantom {
        Some(path) => io::read_image(path)?,
        None => default_phantom(spec.grid),
    };
    let per_seed: Vec<(u64, usize, bool)> = (0..spec.seeds)
        .into_par_iter()
        .map(|s| -> Result<(u64, usize, bool)> {
            let seed = RngSeed(spec.seed).derive(&[5, spec.n as u64, s as u64]);
            let angles = sorted_angles_anchored(spec.n, std::f64::consts::TAU, seed.derive(&[0]))?;
            let sino = radon(&phantom, &angles, odd_bins(spec.grid))?;
            let sino = add_projection_noise(&sino, spec.sigma_rel, seed.derive(&[1]))?;
            let rows: Vec<&[f64]> = sino.rows().collect();
            let order = nn_order(&rows, 0)?;
            let n_delta = measure_goodness(&order, DELTA_PROBE).n_delta;
            let reversed = order.orientation_correlation() < 0.0;
            Ok((seed.0, n_delta, reversed))
        })
        .collect::<Result<_>>()?;

    let reversed_count = per_seed.iter().filter(|r| r.2).count();
    let mut edges = vec![0usize, 1];
    while *edges.last().unwrap() < spec.n {
        edges.push(edges.last().unwrap() * 2);
    }
    let bins = edges
        .iter()
        .map(|&hi| {
            let lo = match hi {
                0 => 0,
                1 => 1,
                _ => hi / 2 + 1,
            };
            let count = per_seed
                .iter()
                .filter(|&&(_, nd, rev)| !rev && nd >= lo && nd <= hi)
                .count();
            (hi, count)
        })
        .collect();

    Ok(OrderingHistogramResult {
        delta_probe: DELTA_PROBE,
        per_seed,
        bins,
        reversed_count,
    })
}
