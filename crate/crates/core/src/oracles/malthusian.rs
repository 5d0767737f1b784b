use crate::dist::{DegreeLaw, WeightLaw};
use crate::error::{Error, Result};
use crate::special::{gamma, integrate_half_line};

/// `λ_s = Γ(1 + 1/s)^s`.
pub fn lambda_s(s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::invalid(format!("s must be positive, got {s}")));
    }
    Ok(gamma(1.0 + 1.0 / s).powf(s))
}

/// `∫ e^{-λ_s x} dμ_s(x) = ∫_0^∞ e^{-λ_s t^s} dt`; equals 1.
pub fn mu_s_laplace_at_lambda_s(s: f64) -> Result<f64> {
    let l = lambda_s(s)?;
    Ok(integrate_half_line(|t| (-l * t.powf(s)).exp(), 1e-14))
}

/// Root of `ν E[e^{-λY}] = 1` by bisection.
pub fn solve_malthusian(nu: f64, weight: &WeightLaw) -> Result<f64> {
    if !(nu > 1.0) || !nu.is_finite() {
        return Err(Error::NoMalthusian { nu });
    }
    let f = |l: f64| nu * weight.laplace(l) - 1.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Convergence(
                "Malthusian bracket exceeded 1e12".into(),
            ));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Growth parameters shared by the finite-variance samplers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitParams {
    pub lambda: f64,
    pub nu: f64,
    pub s: Option<f64>,
}

impl LimitParams {
    pub fn configuration_model(degree: &DegreeLaw, weight: &WeightLaw) -> Result<Self> {
        let sb = degree.size_biased()?;
        if sb.infinite_mean {
            return Err(Error::invalid(format!(
                "{degree} has infinite-mean size-biased law; no Malthusian parameter"
            )));
        }
        Ok(LimitParams {
            lambda: solve_malthusian(sb.nu, weight)?,
            nu: sb.nu,
            s: None,
        })
    }

    pub fn complete_graph(s: f64) -> Result<Self> {
        Ok(LimitParams {
            lambda: lambda_s(s)?,
            nu: f64::INFINITY,
            s: Some(s),
        })
    }

    /// `|ν E[e^{-λY}] − 1|`.
    pub fn residual(&self, weight: &WeightLaw) -> f64 {
        (self.nu * weight.laplace(self.lambda) - 1.0).abs()
    }
}
