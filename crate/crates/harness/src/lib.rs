//! Experiment harness for the unknown-angle reconstruction pipeline:
//! procedural phantom, error metrics, the four-setting sweep runner, the
//! nearest-neighbor ordering-error histogram, and the 1D quasi-bandlimited
//! sweep.

pub mod experiment;
pub mod metrics;
pub mod phantom;
pub mod qbl_sweep;

pub use experiment::{
    ordering_histogram, run_experiment, write_results_csv, write_summary_json, DeltaFormula,
    DeltaPolicy, ExperimentResult, ExperimentSpec, OrderingHistogramSpec, Setting,
};
pub use metrics::{relative_error, slope_fit};
pub use phantom::{default_phantom, gaussian_mixture_image, Blob, DEFAULT_BLOBS};
pub use qbl_sweep::{run_qbl_sweep, QblSweepSpec};
