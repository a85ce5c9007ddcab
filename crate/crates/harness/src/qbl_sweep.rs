//! 1D sweep: reconstruction error of a quasi-bandlimited test signal versus
//! sample count, under configurable noise and ordering corruption.

use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use uvtomo_core::error::Result;
use uvtomo_core::fourier::{l2_distance_periodic, FourierSeries, PeriodicSignal};
use uvtomo_core::ordering::synth_good_map;
use uvtomo_core::qbl::{add_sample_noise, reconstruct_p3, NoiseSpec, OrderedSampleSet, QblParams};
use uvtomo_core::sampling::sample_sorted_uniform;
use uvtomo_core::RngSeed;

use crate::experiment::DeltaFormula;
use crate::metrics::slope_fit;

/// Sweep description. The test signal has coefficients
/// `a_k = exp(-gamma |k|)` truncated where they fall below 1e-14.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QblSweepSpec {
    pub gamma: f64,
    pub sigma: f64,
    pub pow2_min: u32,
    pub pow2_max: u32,
    pub trials: usize,
    pub delta_bar: DeltaFormula,
    pub n_delta: DeltaFormula,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QblSweepRow {
    pub n: usize,
    pub k0: usize,
    pub delta_bar: usize,
    pub n_delta: usize,
    pub mean_sq_err: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QblSweepResult {
    pub rows: Vec<QblSweepRow>,
    pub slope: f64,
}

/// The sweep's ground-truth signal.
pub fn sweep_signal(gamma: f64) -> FourierSeries<f64> {
    let kmax = (14.0 * std::f64::consts::LN_10 / gamma).ceil() as usize;
    let mut coeffs = Vec::with_capacity(2 * kmax + 1);
    for k in -(kmax as i64)..=(kmax as i64) {
        coeffs.push(Complex64::new((-gamma * k.unsigned_abs() as f64).exp(), 0.0));
    }
    FourierSeries::from_coeffs(coeffs, 1.0).expect("odd coefficient count")
}

pub fn run_qbl_sweep(spec: &QblSweepSpec) -> Result<QblSweepResult> {
    let truth = sweep_signal(spec.gamma);
    let signal = PeriodicSignal::from_series(truth.clone());
    let qbl = QblParams::new(0, spec.gamma, 1.0)?;

    let rows: Vec<QblSweepRow> = (spec.pow2_min..=spec.pow2_max)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&p| -> Result<QblSweepRow> {
            let n = 1usize << p;
            let delta_bar = spec.delta_bar.eval(n);
            let n_delta = spec.n_delta.eval(n);
            let mut acc = 0.0;
            let mut k0 = 0;
            for t in 0..spec.trials {
                let seed = RngSeed(spec.seed).derive(&[p as u64, t as u64]);
                let locs = sample_sorted_uniform(n, 0.0, 1.0, seed.derive(&[0]))?;
                let mut samples = OrderedSampleSet::from_signal(&signal, &locs)?;
                if n_delta > 0 || delta_bar > 0 {
                    let map = synth_good_map(n, delta_bar, n_delta, seed.derive(&[1]))?;
                    samples = samples.permuted(map.as_slice())?;
                }
                let noisy =
                    add_sample_noise(&samples, &NoiseSpec::new(spec.sigma)?, seed.derive(&[2]));
                let rec = reconstruct_p3(&noisy, &qbl)?;
                k0 = rec.k0();
                acc += l2_distance_periodic(&truth, &rec)?.powi(2);
            }
            Ok(QblSweepRow {
                n,
                k0,
                delta_bar,
                n_delta,
                mean_sq_err: acc / spec.trials as f64,
            })
        })
        .collect::<Result<_>>()?;

    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    let errs: Vec<f64> = rows.iter().map(|r| r.mean_sq_err).collect();
    let slope = slope_fit(&ns, &errs)?;
    Ok(QblSweepResult { rows, slope })
}

pub fn write_sweep_csv(result: &QblSweepResult, path: &Path) -> Result<()> {
    let mut out = String::from("N,k0,delta_bar,n_delta,mean_sq_err\n");
    for r in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n, r.k0, r.delta_bar, r.n_delta, r.mean_sq_err
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}
