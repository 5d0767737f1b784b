//! Limiting objects: growth parameters, fixed-point pools for W and V,
//! samplers for the limiting tree degree, and closed-form special cases.

mod bfst;
pub mod closed_form;
mod hat_d;
mod malthusian;
mod pool;
mod v;
mod w;

pub use bfst::{bfst_limit_pmf, gf_hatd_deterministic_weights, unit_weight_sampler};
pub use hat_d::{
    CompleteGraphSampler, FiniteVarianceSampler, InfiniteVarianceSampler, DEFAULT_MARGIN,
    DEFAULT_POINT_BUDGET,
};
pub use malthusian::{lambda_s, mu_s_laplace_at_lambda_s, solve_malthusian, LimitParams};
pub use pool::{PoolMeta, PoolTarget, SamplePool};
pub use v::{sample_v_series, solve_v_min_recursion, solve_v_series, DEFAULT_SERIES_CUTOFF};
pub use w::{
    solve_w_cm, solve_w_complete, w_regular_exponential_laplace, PoolConfig, DEFAULT_TRUNCATION,
};
