//! Gamma-family special functions.
//!
//! The regularized incomplete gamma functions use the usual split: power
//! series for `x < a + 1`, modified-Lentz continued fraction otherwise. The
//! common prefactor `xᵃe⁻ˣ/Γ(a)` is evaluated through Stirling's series for
//! large `a` so it stays accurate when `ln Γ(a)` is huge.

use core::f64::consts::{LN_2, PI, SQRT_2};
#[cfg(not(feature = "std"))]
use num_traits::Float;

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 1_000_000;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Tail of Stirling's series, `ln Γ(a) − [(a − ½)ln a − a + ½ln 2π]`, for `a ≥ 15`.
fn stirling_tail(a: f64) -> f64 {
    let r = 1.0 / a;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 / 1188.0))))
}

/// `ln(1 + u) − u`, accurate for small `u`.
pub fn log1pmx(u: f64) -> f64 {
    if u.abs() > 0.5 {
        return u.ln_1p() - u;
    }
    // ln(1+u) = 2 atanh(r) with r = u/(2+u), and u − 2r = r·u.
    let r = u / (2.0 + u);
    let r2 = r * r;
    let mut term = r * r2;
    let mut sum = 0.0;
    let mut k = 3.0;
    loop {
        let add = term / k;
        sum += add;
        if add.abs() <= EPS * sum.abs() {
            break;
        }
        term *= r2;
        k += 2.0;
    }
    2.0 * sum - r * u
}

/// `ln(xᵃ e⁻ˣ / Γ(a))` for `a > 0`, `x > 0`.
pub fn ln_gamma_prefactor(a: f64, x: f64) -> f64 {
    if a >= 15.0 {
        let t = x / a;
        a * log1pmx(t - 1.0) + 0.5 * a.ln() - HALF_LN_2PI - stirling_tail(a)
    } else {
        a * x.ln() - x - ln_gamma(a)
    }
}

/// `ln P(N = j)` for `N ~ Poisson(mean)`, `mean > 0`.
pub fn ln_poisson_pmf(j: u64, mean: f64) -> f64 {
    if j == 0 {
        return -mean;
    }
    ln_gamma_prefactor(j as f64 + 1.0, mean) - mean.ln()
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (ln_gamma_prefactor(a, x) + sum.ln()).exp()
}

fn gamma_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    (ln_gamma_prefactor(a, x) + h.ln()).exp()
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_continued_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 − P(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_continued_fraction(a, x)
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `ln(2)`, re-exported for density code.
pub(crate) const LN2: f64 = LN_2;
