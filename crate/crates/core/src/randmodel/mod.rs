//! The random Euler product model.
//!
//! Each prime `p` gets an independent Sato–Tate trace `t_p` (the trace of a
//! Haar-random element of SU(2)). From these come the multiplicative
//! coefficients `Y_n = prod U_nu(t_p)` over `p^nu || n`, and the random
//! function `L(s) = prod_p (1 - t_p p^-s + p^-2s)^-1 = sum_n Y_n n^-s`,
//! evaluated on grids inside the strip `1/2 < Re s < 1` through smoothed
//! partial sums.

mod coeffs;
mod ensemble;
mod euler;
mod grid;
mod sampler;
pub(crate) mod series;

pub use coeffs::{build_coefficients, MultCoefficients};
pub use ensemble::{
    model_ensemble, sample_on_grid, second_moment_stat, Ensemble, EnsembleMeta, HoloSample,
    ModelSampler, MomentEstimate, SampleMeta,
};
pub use euler::{eval_euler_product, prime_tail_bound, EulerProduct};
pub use grid::{EvalGrid, GridJson};
pub use sampler::{derive_seed, sample_traces, sato_tate_trace, SU2Sample};
pub use series::{eval_smoothed_series, SmoothedKernel};

/// Default smoothing parameter for grid sampling.
pub const DEFAULT_N: usize = 1 << 14;
