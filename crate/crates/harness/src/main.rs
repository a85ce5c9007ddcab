use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use uvtomo_core::io;
use uvtomo_core::ordering::{measure_goodness, nn_order, perturb_shift, perturb_shuffle};
use uvtomo_core::sampling::sorted_angles_anchored;
use uvtomo_core::tomo::{
    fst_relative_errors, project_spectra, radon, reconstruct_unknown_angles, BandwidthPolicy,
    CutoffPolicy,
};
use uvtomo_core::{Image64, ReconstructionConfig64, RngSeed};

use uvtomo_harness::experiment::{
    ordering_histogram, run_experiment, write_results_csv, write_summary_json, DeltaFormula,
    ExperimentSpec, OrderingHistogramSpec,
};
use uvtomo_harness::phantom::default_phantom;
use uvtomo_harness::qbl_sweep::{run_qbl_sweep, write_sweep_csv, QblSweepSpec};

/// Tomographic reconstruction from projections at unknown angles.
#[derive(Parser)]
#[command(name = "uvtomo", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the built-in asymmetric Gaussian-mixture phantom.
    Phantom(PhantomArgs),
    /// Project an image at sorted random angles (anchor at zero).
    Project(ProjectArgs),
    /// Reconstruct an image from a sinogram and an ordering.
    Reconstruct(ReconstructArgs),
    /// Check the Fourier slice theorem on an image.
    FstCheck(FstArgs),
    /// Recover a projection ordering by greedy nearest neighbor.
    Order(OrderArgs),
    /// Apply a shuffle or shift corruption to a stored ordering.
    Perturb(PerturbArgs),
    /// Measure ordering goodness (violations beyond a displacement bound).
    Goodness(GoodnessArgs),
    /// 1D quasi-bandlimited reconstruction error sweep.
    QblSweep(QblSweepArgs),
    /// Run a full experiment spec and emit CSV + JSON summaries.
    Experiment(ExperimentArgs),
    /// Histogram of nearest-neighbor ordering errors across seeds.
    OrderHist(OrderHistArgs),
}

#[derive(Args)]
struct PhantomArgs {
    #[arg(long, default_value_t = 128)]
    grid: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProjectArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    angles_seed: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    bins: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    sinogram: PathBuf,
    /// `nn`, `true`, or a path to a 1-based permutation JSON file.
    #[arg(long, default_value = "nn")]
    order: String,
    /// `auto` or a cutoff radius.
    #[arg(long, default_value = "auto")]
    nu0: String,
    /// `auto` or an explicit ring bandwidth.
    #[arg(long, default_value = "auto")]
    k0: String,
    /// Polar spoke count.
    #[arg(long, default_value_t = 96)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    oversample: usize,
    #[arg(long, default_value_t = 128)]
    grid: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FstArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long, default_value_t = 8)]
    num_angles: usize,
    #[arg(long, default_value_t = 4)]
    oversample: usize,
    /// Relative L2 threshold for the pass/fail verdict.
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long)]
    sinogram: PathBuf,
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PerturbArgs {
    #[arg(long)]
    perm: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Shuffle a random subset of this size.
    #[arg(long)]
    shuffle_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shift block start (1-based position).
    #[arg(long)]
    shift_start: Option<usize>,
    #[arg(long)]
    shift_len: Option<usize>,
    /// Insertion point after removal (1-based).
    #[arg(long)]
    insert_at: Option<usize>,
}

#[derive(Args)]
struct GoodnessArgs {
    #[arg(long)]
    perm: PathBuf,
    #[arg(long)]
    delta_bar: usize,
}

#[derive(Args)]
struct QblSweepArgs {
    #[arg(long, default_value_t = 0.8)]
    gamma: f64,
    #[arg(long, default_value_t = 0.05)]
    sigma: f64,
    #[arg(long, default_value_t = 9)]
    pow2_min: u32,
    #[arg(long, default_value_t = 14)]
    pow2_max: u32,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// `zero`, `ceil_sqrt`, `ceil_log_sq`, or an integer.
    #[arg(long, default_value = "zero")]
    delta_bar: String,
    #[arg(long, default_value = "zero")]
    n_delta: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// `ci` (5 trials, N <= 2048) or `full`.
    #[arg(long, default_value = "full")]
    profile: String,
    /// Override the seed stored in the spec file.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct OrderHistArgs {
    #[arg(long, default_value_t = 4000)]
    n: usize,
    #[arg(long, default_value_t = 30)]
    seeds: usize,
    #[arg(long, default_value_t = 128)]
    grid: usize,
    #[arg(long, default_value_t = 0.0)]
    sigma_rel: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_nu0(text: &str) -> anyhow::Result<CutoffPolicy<f64>> {
    if text == "auto" {
        Ok(CutoffPolicy::Auto { energy_fraction: 0.999 })
    } else {
        let v: f64 = text.parse().context("nu0 must be `auto` or a number")?;
        Ok(CutoffPolicy::Value(v))
    }
}

fn parse_k0(text: &str) -> anyhow::Result<BandwidthPolicy> {
    if text == "auto" {
        Ok(BandwidthPolicy::Auto { auto: true })
    } else {
        let v: usize = text.parse().context("k0 must be `auto` or an integer")?;
        Ok(BandwidthPolicy::Explicit(v))
    }
}

fn parse_delta_formula(text: &str) -> anyhow::Result<DeltaFormula> {
    match text {
        "zero" => Ok(DeltaFormula::Zero),
        "ceil_sqrt" => Ok(DeltaFormula::CeilSqrt),
        "ceil_log_sq" => Ok(DeltaFormula::CeilLogSq),
        other => {
            let v: usize = other
                .parse()
                .context("delta formula must be zero|ceil_sqrt|ceil_log_sq|<int>")?;
            Ok(DeltaFormula::Const(v))
        }
    }
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Phantom(args) => {
            let img = default_phantom(args.grid);
            io::write_image(&args.out, &img)?;
            println!("phantom {}x{} -> {}", args.grid, args.grid, args.out.display());
        }
        Command::Project(args) => {
            let img: Image64 = io::read_image(&args.image)?;
            let angles =
                sorted_angles_anchored(args.n, std::f64::consts::TAU, RngSeed(args.angles_seed))?;
            let sino = radon(&img, &angles, args.bins)?;
            io::write_sinogram(&args.out, &sino)?;
            println!(
                "projected {} angles x {} bins -> {}",
                args.n,
                args.bins,
                args.out.display()
            );
        }
        Command::Reconstruct(args) => {
            let sino = io::read_sinogram(&args.sinogram)?;
            let cfg = ReconstructionConfig64 {
                nu0: parse_nu0(&args.nu0)?,
                k0: parse_k0(&args.k0)?,
                spokes: args.m,
                oversample: args.oversample,
                grid: args.grid,
            };
            let order = match args.order.as_str() {
                "nn" => {
                    let rows: Vec<&[f64]> = sino.rows().collect();
                    nn_order(&rows, 0)?
                }
                // rows written by `project` are already in the true sorted order
                "true" => uvtomo_core::ordering::Permutation::identity(sino.num_projections()),
                path => io::read_permutation(std::path::Path::new(path), true)?,
            };
            let img = reconstruct_unknown_angles(&sino, &cfg, &order)?;
            io::write_image(&args.out, &img)?;
            println!("reconstructed {}x{} -> {}", args.grid, args.grid, args.out.display());
        }
        Command::FstCheck(args) => {
            let img: Image64 = io::read_image(&args.image)?;
            let angles: Vec<f64> = (0..args.num_angles)
                .map(|i| std::f64::consts::TAU * i as f64 / args.num_angles as f64)
                .collect();
            let bins = if img.width() % 2 == 0 { img.width() + 1 } else { img.width() };
            let sino = radon(&img, &angles, bins)?;
            let spectra = project_spectra(&sino, args.oversample)?;
            let errs = fst_relative_errors(&img, &spectra, &angles)?;
            let mut ok = true;
            for (theta, e) in angles.iter().zip(&errs) {
                let pass = *e <= args.tolerance;
                ok &= pass;
                println!(
                    "theta={theta:.4} rad: slice relative L2 = {e:.5} [{}]",
                    if pass { "PASS" } else { "FAIL" }
                );
            }
            if !ok {
                bail!("Fourier slice check failed at tolerance {}", args.tolerance);
            }
        }
        Command::Order(args) => {
            let sino = io::read_sinogram::<f64>(&args.sinogram)?;
            let rows: Vec<&[f64]> = sino.rows().collect();
            let perm = nn_order(&rows, args.start)?;
            io::write_permutation(&args.out, &perm)?;
            println!(
                "ordered {} projections (orientation correlation {:.3}) -> {}",
                perm.len(),
                perm.orientation_correlation(),
                args.out.display()
            );
        }
        Command::Perturb(args) => {
            let perm = io::read_permutation(&args.perm, true)?;
            let out = match (args.shuffle_size, args.shift_start, args.shift_len, args.insert_at) {
                (Some(k), None, None, None) => perturb_shuffle(&perm, k, RngSeed(args.seed))?,
                (None, Some(start), Some(len), Some(at)) => {
                    if start == 0 || at == 0 {
                        bail!("shift positions are 1-based");
                    }
                    perturb_shift(&perm, start - 1, len, at - 1)?
                }
                _ => bail!("specify either --shuffle-size or --shift-start/--shift-len/--insert-at"),
            };
            io::write_permutation(&args.out, &out)?;
            println!("perturbed -> {}", args.out.display());
        }
        Command::Goodness(args) => {
            let perm = io::read_permutation(&args.perm, false)?;
            let q = measure_goodness(&perm, args.delta_bar);
            println!(
                "n_delta = {} at delta_bar = {} (N = {})",
                q.n_delta,
                q.delta_bar,
                perm.len()
            );
        }
        Command::QblSweep(args) => {
            let spec = QblSweepSpec {
                gamma: args.gamma,
                sigma: args.sigma,
                pow2_min: args.pow2_min,
                pow2_max: args.pow2_max,
                trials: args.trials,
                delta_bar: parse_delta_formula(&args.delta_bar)?,
                n_delta: parse_delta_formula(&args.n_delta)?,
                seed: args.seed,
            };
            let result = run_qbl_sweep(&spec)?;
            write_sweep_csv(&result, &args.out)?;
            for row in &result.rows {
                println!(
                    "N={:6} k0={:2} delta_bar={:3} n_delta={:3} mean ||g-g_rec||^2 = {:.4e}",
                    row.n, row.k0, row.delta_bar, row.n_delta, row.mean_sq_err
                );
            }
            println!("log-log slope: {:.3}", result.slope);
        }
        Command::Experiment(args) => {
            let text = std::fs::read_to_string(&args.spec)
                .with_context(|| format!("reading {}", args.spec.display()))?;
            let mut spec: ExperimentSpec = serde_json::from_str(&text)?;
            if let Some(seed) = args.seed {
                spec.seed = seed;
            }
            let spec = match args.profile.as_str() {
                "ci" => spec.ci_profile()?,
                "full" => spec,
                other => bail!("unknown profile {other:?} (use ci|full)"),
            };
            let result = run_experiment(&spec)?;
            write_results_csv(&result, &args.out)?;
            let summary = args.out.with_extension("summary.json");
            write_summary_json(&spec, &result, &summary)?;
            for agg in &result.aggregates {
                println!(
                    "{} N={:6}: mean E={:.4e} median E={:.4e} reversed={}",
                    spec.setting.as_str(),
                    agg.n,
                    agg.mean_e,
                    agg.median_e,
                    agg.reversed_count
                );
            }
            println!("records -> {}", args.out.display());
            println!("summary -> {}", summary.display());
        }
        Command::OrderHist(args) => {
            let spec = OrderingHistogramSpec {
                n: args.n,
                seeds: args.seeds,
                grid: args.grid,
                sigma_rel: args.sigma_rel,
                seed: args.seed,
                phantom: None,
            };
            let result = ordering_histogram(&spec)?;
            std::fs::write(&args.out, serde_json::to_string_pretty(&result)?)?;
            println!(
                "{} seeds at N={}: reversed {} times; non-reversal bins (upper edge, count):",
                args.seeds, args.n, result.reversed_count
            );
            for (hi, count) in &result.bins {
                if *count > 0 {
                    println!("  <= {hi:5}: {count}");
                }
            }
            println!("histogram -> {}", args.out.display());
        }
    }
    Ok(())
}
