use super::hat_d::FiniteVarianceSampler;
use super::malthusian::solve_malthusian;
use super::w::{solve_w_cm, PoolConfig};
use crate::dist::{DegreeLaw, WeightLaw};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::special::{integrate, ln_gamma};

/// `a_k^{(r)} = Γ(r) Γ(k−1+1/(r−2)) / ((r−2) Γ(r+1/(r−2)) Γ(k))` for k = 1..=r,
/// returned as a table indexed by k (entry 0 is 0).
pub fn bfst_limit_pmf(r: u64) -> Result<Vec<f64>> {
    if r < 3 {
        return Err(Error::invalid(format!(
            "BFST limit law needs r >= 3, got {r}"
        )));
    }
    let rf = r as f64;
    let c = 1.0 / (rf - 2.0);
    let log_front = ln_gamma(rf) - (rf - 2.0).ln() - ln_gamma(rf + c);
    let mut pmf = vec![0.0; r as usize + 1];
    for k in 1..=r {
        let kf = k as f64;
        pmf[k as usize] = (log_front + ln_gamma(kf - 1.0 + c) - ln_gamma(kf)).exp();
    }
    Ok(pmf)
}

/// `z ∫_0^1 f'(t − (1−z) f'(f'(t)/f'(1)) / f'(1)) dt`, the generating function of the
/// limiting degree under unit weights.
pub fn gf_hatd_deterministic_weights(degree: &DegreeLaw, z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::invalid(format!("z must lie in [0, 1], got {z}")));
    }
    if degree.min_degree() < 3 {
        return Err(Error::invalid("unit-weight identity needs degrees >= 3"));
    }
    let fp1 = degree.pgf_derivative(1.0)?;
    let fp = |t: f64| {
        degree
            .pgf_derivative(t)
            .expect("finite support checked above")
    };
    let integral = integrate(
        |t| fp(t - (1.0 - z) * fp(fp(t) / fp1) / fp1),
        0.0,
        1.0,
        1e-12,
    );
    Ok(z * integral)
}

/// Sampler of the limiting degree under unit weights: `λ = log ν` and the matching W pool.
pub fn unit_weight_sampler(
    degree: &DegreeLaw,
    cfg: &PoolConfig,
    stream: RngStream,
) -> Result<FiniteVarianceSampler> {
    let nu = degree.size_biased()?.nu;
    let lambda = solve_malthusian(nu, &WeightLaw::Constant)?;
    let pool = solve_w_cm(degree, &WeightLaw::Constant, lambda, cfg, stream)?;
    FiniteVarianceSampler::new(degree, WeightLaw::Constant, lambda, &pool)
}
