//! Numerical helpers: power sums, gamma function, quadrature on half-lines.

pub use statrs::function::gamma::{gamma, ln_gamma};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// B_{2j} / (2j)! for j = 1..=7
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
];

const DIRECT_TERMS: u64 = 32;

/// `Σ_{k=lo}^{hi} k^{-s}` for `1 <= lo`, inclusive `hi` (`None` = ∞, needs s > 1).
///
/// The first terms are summed directly, the remainder by Euler–Maclaurin;
/// relative accuracy is around 1e-15 for the exponents used here.
pub fn power_sum(s: f64, lo: u64, hi: Option<u64>) -> f64 {
    assert!(lo >= 1, "power_sum needs lo >= 1");
    if let Some(h) = hi {
        if h < lo {
            return 0.0;
        }
    } else {
        assert!(s > 1.0, "infinite power sum diverges for s <= 1");
    }
    let direct_end = match hi {
        Some(h) => h.min(lo + DIRECT_TERMS - 1),
        None => lo + DIRECT_TERMS - 1,
    };
    // largest terms last would be slightly better; the direct block is short
    let mut total: f64 = (lo..=direct_end).rev().map(|k| (k as f64).powf(-s)).sum();
    if hi.is_some_and(|h| h <= direct_end) {
        return total;
    }
    let a = (direct_end + 1) as f64;
    total += euler_maclaurin_tail(s, a, hi.map(|h| h as f64));
    total
}

fn euler_maclaurin_tail(s: f64, a: f64, b: Option<f64>) -> f64 {
    let f = |x: f64| x.powf(-s);
    // odd derivatives: f^{(m)}(x) = (-1)^m (s)_m x^{-s-m}
    let deriv = |x: f64, m: u32| {
        let mut rising = 1.0;
        for i in 0..m {
            rising *= s + f64::from(i);
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sign * rising * x.powf(-s - f64::from(m))
    };
    let integral = match b {
        Some(b) if (s - 1.0).abs() < 1e-15 => (b / a).ln(),
        Some(b) => (b.powf(1.0 - s) - a.powf(1.0 - s)) / (1.0 - s),
        None => a.powf(1.0 - s) / (s - 1.0),
    };
    let mut sum = integral + 0.5 * (f(a) + b.map_or(0.0, f));
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let m = 2 * j as u32 + 1;
        let at_b = b.map_or(0.0, |b| deriv(b, m));
        sum += c * (at_b - deriv(a, m));
    }
    sum
}

/// `∫_a^b f` by double-exponential quadrature.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    quadrature::double_exponential::integrate(f, a, b, abs_tol).integral
}

/// `∫_0^∞ f`, split at 1 with `x = 1/u` on the upper piece.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, abs_tol: f64) -> f64 {
    let lower = integrate(&f, 0.0, 1.0, abs_tol * 0.5);
    let upper = integrate(
        |u: f64| {
            if u <= 0.0 {
                0.0
            } else {
                let x = 1.0 / u;
                let v = f(x) * x * x;
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            }
        },
        0.0,
        1.0,
        abs_tol * 0.5,
    );
    lower + upper
}
