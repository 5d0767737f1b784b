//! Analytic values at s = 1 and the general relation `P(M < m) = φ_W(e^{−m})`.

use super::pool::SamplePool;

/// Laplace transform of W at s = 1 (standard exponential).
pub fn phi_w_exponential(u: f64) -> f64 {
    1.0 / (1.0 + u)
}

pub fn mu_up(m: f64) -> f64 {
    (-m).exp().ln_1p()
}

pub fn mu_down(m: f64) -> f64 {
    m.exp().ln_1p()
}

/// `P(M ≥ m) = 1 / (1 + e^m)` at s = 1.
pub fn prob_m_at_least(m: f64) -> f64 {
    1.0 / (1.0 + m.exp())
}

/// `P(M < m)` from an empirical W pool.
pub fn prob_m_below(w_pool: &SamplePool, m: f64) -> f64 {
    w_pool.laplace((-m).exp())
}
