//! Scalar distributions: the non-central chi-square and the difference of two
//! independent scaled non-central chi-squares.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::quadrature::{self, Tolerance};
use crate::roots::brent;
use crate::special::{gamma_p, gamma_q, ln_gamma_prefactor, ln_poisson_pmf, LN2};
use crate::{Error, Result};

pub use crate::special::normal_cdf;

/// Poisson mass left out on each side of the mixture sums.
const MIXTURE_TAIL: f64 = 5e-16;

/// Non-central chi-square with `df > 0` degrees of freedom (not necessarily
/// integer) and non-centrality `delta ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncentralChiSquare {
    df: f64,
    delta: f64,
}

impl NoncentralChiSquare {
    pub fn new(df: f64, delta: f64) -> Result<Self> {
        if !(df > 0.0 && df.is_finite()) {
            return Err(Error::Domain {
                what: "degrees of freedom",
                value: df,
            });
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::Domain {
                what: "non-centrality",
                value: delta,
            });
        }
        Ok(NoncentralChiSquare { df, delta })
    }

    pub fn central(df: f64) -> Result<Self> {
        Self::new(df, 0.0)
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn mean(&self) -> f64 {
        self.df + self.delta
    }

    pub fn variance(&self) -> f64 {
        2.0 * (self.df + 2.0 * self.delta)
    }

    /// Sums `Σ_j Pois(j; δ/2)·term(df/2 + j)` outward from the Poisson mode.
    /// `increasing` states whether `term` grows with `j`, which decides which
    /// side may be cut using the term value as well as the Poisson mass.
    fn mixture<F: FnMut(f64) -> f64>(&self, increasing: bool, mut term: F) -> f64 {
        let half_df = 0.5 * self.df;
        let mu = 0.5 * self.delta;
        if mu == 0.0 {
            return term(half_df);
        }
        let mode = mu.floor();
        let w_mode = ln_poisson_pmf(mode as u64, mu).exp();
        let mut sum = 0.0;

        let (mut j, mut w) = (mode, w_mode);
        loop {
            let v = term(half_df + j);
            sum += w * v;
            let r = mu / (j + 1.0);
            let tail = w * r / (1.0 - r);
            let bound = if increasing { tail } else { tail * v };
            if bound < MIXTURE_TAIL {
                break;
            }
            w *= r;
            j += 1.0;
        }

        let (mut j, mut w) = (mode, w_mode);
        while j > 0.0 {
            w *= j / mu;
            j -= 1.0;
            let v = term(half_df + j);
            sum += w * v;
            let r = j / mu;
            let tail = w * r / (1.0 - r);
            let bound = if increasing { tail * v } else { tail };
            if bound < MIXTURE_TAIL {
                break;
            }
        }
        sum
    }

    /// `P(Y ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        self.mixture(false, |a| gamma_p(a, 0.5 * x)).clamp(0.0, 1.0)
    }

    /// `P(Y > x)`, accurate in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        if x == f64::INFINITY {
            return 0.0;
        }
        self.mixture(true, |a| gamma_q(a, 0.5 * x)).clamp(0.0, 1.0)
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        let a = 0.5 * self.df;
        let mu = 0.5 * self.delta;
        if x == 0.0 {
            return match self.df.partial_cmp(&2.0) {
                Some(core::cmp::Ordering::Less) => f64::INFINITY,
                Some(core::cmp::Ordering::Equal) => -LN2 - mu,
                _ => f64::NEG_INFINITY,
            };
        }
        if x == f64::INFINITY {
            return f64::NEG_INFINITY;
        }
        let ln_central = |half_df: f64| ln_gamma_prefactor(half_df, 0.5 * x) - x.ln();
        if mu == 0.0 {
            return ln_central(a);
        }
        // Term ratio t_{j+1}/t_j = c / ((j+1)(a+j)).
        let c = 0.5 * mu * x;
        let root = 0.5 * (-(a + 1.0) + ((a - 1.0) * (a - 1.0) + 4.0 * c).sqrt());
        let peak = root.max(0.0).floor();
        let base = ln_poisson_pmf(peak as u64, mu) + ln_central(a + peak);

        let mut sum = 1.0;
        let (mut j, mut rel) = (peak, 1.0);
        for _ in 0..10_000_000 {
            let r = c / ((j + 1.0) * (a + j));
            rel *= r;
            j += 1.0;
            sum += rel;
            if r < 1.0 && rel * r / (1.0 - r) < 1e-17 * sum {
                break;
            }
        }
        let (mut j, mut rel) = (peak, 1.0);
        while j > 0.0 {
            let r = j * (a + j - 1.0) / c;
            rel *= r;
            j -= 1.0;
            sum += rel;
            if r < 1.0 && rel * r / (1.0 - r) < 1e-17 * sum {
                break;
            }
        }
        base + sum.ln()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn bracket_hi(&self) -> f64 {
        self.df + self.delta + 100.0 * (2.0 * (self.df + 2.0 * self.delta)).sqrt() + 100.0
    }

    /// Inverse CDF: `x` with `P(Y ≤ x) = p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain {
                what: "probability",
                value: p,
            });
        }
        if p > 0.5 {
            return self.upper_quantile(1.0 - p);
        }
        let mut hi = self.bracket_hi();
        while self.cdf(hi) < p {
            hi *= 2.0;
        }
        brent(|x| self.cdf(x) - p, 0.0, hi, 0.0, 0.0)
    }

    /// Inverse survival function: `x` with `P(Y > x) = alpha`.
    pub fn upper_quantile(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain {
                what: "probability",
                value: alpha,
            });
        }
        if alpha > 0.5 {
            return self.quantile(1.0 - alpha);
        }
        let mut hi = self.bracket_hi();
        while self.sf(hi) > alpha {
            hi *= 2.0;
        }
        brent(|x| self.sf(x) - alpha, 0.0, hi, 0.0, 0.0)
    }
}

/// `P(Y ≤ x)` for `Y ~ χ²_df(δ)`.
pub fn chisq_cdf(x: f64, dist: &NoncentralChiSquare) -> f64 {
    dist.cdf(x)
}

/// Inverse of [`chisq_cdf`].
pub fn chisq_quantile(p: f64, dist: &NoncentralChiSquare) -> Result<f64> {
    dist.quantile(p)
}

/// `scale · Y` with `Y` non-central chi-square. A zero scale is the point mass
/// at zero (an empty group of weights).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledChiSquare {
    pub scale: f64,
    pub chi: NoncentralChiSquare,
}

impl ScaledChiSquare {
    pub fn new(scale: f64, chi: NoncentralChiSquare) -> Result<Self> {
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::Domain {
                what: "scale",
                value: scale,
            });
        }
        Ok(ScaledChiSquare { scale, chi })
    }

    pub fn point_mass() -> Self {
        ScaledChiSquare {
            scale: 0.0,
            chi: NoncentralChiSquare { df: 1.0, delta: 0.0 },
        }
    }

    pub fn is_point_mass(&self) -> bool {
        self.scale == 0.0
    }

    pub fn mean(&self) -> f64 {
        self.scale * self.chi.mean()
    }

    pub fn variance(&self) -> f64 {
        self.scale * self.scale * self.chi.variance()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if self.is_point_mass() {
            return if x >= 0.0 { 1.0 } else { 0.0 };
        }
        self.chi.cdf(x / self.scale)
    }

    pub fn sf(&self, x: f64) -> f64 {
        if self.is_point_mass() {
            return if x >= 0.0 { 0.0 } else { 1.0 };
        }
        self.chi.sf(x / self.scale)
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        self.chi.ln_pdf(x / self.scale) - self.scale.ln()
    }

    /// Spread of the component in the `Z` scale, used to pick the integration variable.
    fn spread(&self) -> f64 {
        self.scale * self.chi.variance().sqrt()
    }
}

/// Maps `x ∈ (0, 1)` onto the real line by `u = center + spread·ln(x/(1−x))`.
#[derive(Debug, Clone, Copy)]
struct LogitMap {
    center: f64,
    spread: f64,
}

/// The mapped interval stops at `1 − ε` to stay clear of the logit singularity.
const LOGIT_EPS: f64 = 1e-12;

impl LogitMap {
    fn for_chi(chi: &NoncentralChiSquare) -> Self {
        // A spread below 2 would leave a (1−x)^{s/2−1} singularity at x → 1.
        LogitMap {
            center: chi.mean(),
            spread: chi.variance().sqrt().max(2.0),
        }
    }

    fn to_u(self, x: f64) -> f64 {
        self.center + self.spread * (x / (1.0 - x)).ln()
    }

    fn ln_jacobian(self, x: f64) -> f64 {
        self.spread.ln() - x.ln() - (-x).ln_1p()
    }

    fn to_x(self, u: f64) -> f64 {
        1.0 / (1.0 + (-(u - self.center) / self.spread).exp())
    }
}

/// `∫ f(u)·exp(ln_h(u)) du` over `u ∈ [lo, hi]`, where `f` is the density of
/// `chi`, after the logit substitution adapted to `chi`.
///
/// For `df < 2` the density is unbounded at the origin, which the logit map
/// cannot resolve in floating point, so `[0, 1]` is handled separately with
/// `u = t^{2/df}`, which cancels the leading power.
fn integrate_against<H>(
    chi: &NoncentralChiSquare,
    lo: f64,
    hi: Option<f64>,
    breaks: &[f64],
    ln_h: H,
    tol: Tolerance,
) -> Result<f64>
where
    H: Fn(f64) -> f64,
{
    let mut lo = lo.max(0.0);
    let mut total = 0.0;
    if lo == 0.0 && chi.df < 2.0 {
        let u1 = hi.map_or(1.0, |h| h.min(1.0));
        if u1 > 0.0 {
            total += integrate_head(chi, u1, breaks, &ln_h, tol)?;
        }
        lo = u1;
        if hi.is_some_and(|h| lo >= h) {
            return Ok(total);
        }
    }

    let map = LogitMap::for_chi(chi);
    let x_lo = map.to_x(lo);
    let x_hi = match hi {
        Some(h) => map.to_x(h).min(1.0 - LOGIT_EPS),
        None => 1.0 - LOGIT_EPS,
    };
    if x_lo >= x_hi {
        return Ok(total);
    }
    let mut points = alloc::vec![x_lo, x_hi];
    for &seed in &[-2.0f64, 0.0, 2.0] {
        points.push(1.0 / (1.0 + (-seed).exp()));
    }
    points.extend(breaks.iter().map(|&b| map.to_x(b)));
    points.retain(|&x| x >= x_lo && x <= x_hi);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let integrand = |x: f64| {
        let u = map.to_u(x);
        if u <= lo || hi.is_some_and(|h| u >= h) {
            return 0.0;
        }
        weighted(chi, u, map.ln_jacobian(x), &ln_h)
    };
    Ok(total + quadrature::integrate(integrand, &points, tol)?.value)
}

fn integrate_head<H>(chi: &NoncentralChiSquare, u1: f64, breaks: &[f64], ln_h: &H, tol: Tolerance) -> Result<f64>
where
    H: Fn(f64) -> f64,
{
    let power = 2.0 / chi.df;
    let mut points = alloc::vec![0.0, 1.0];
    points.extend(
        breaks
            .iter()
            .filter(|&&b| b > 0.0 && b < u1)
            .map(|&b| (b / u1).powf(1.0 / power)),
    );
    points.sort_by(f64::total_cmp);
    points.dedup();
    let integrand = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let u = u1 * t.powf(power);
        weighted(chi, u, (u1 * power).ln() + (power - 1.0) * t.ln(), ln_h)
    };
    Ok(quadrature::integrate(integrand, &points, tol)?.value)
}

fn weighted<H: Fn(f64) -> f64>(chi: &NoncentralChiSquare, u: f64, ln_jacobian: f64, ln_h: &H) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let ln_f = chi.ln_pdf(u) + ln_jacobian;
    if ln_f == f64::NEG_INFINITY {
        return 0.0;
    }
    let lh = ln_h(u);
    if lh == f64::NEG_INFINITY {
        return 0.0;
    }
    (ln_f + lh).exp()
}

fn ln_or_neg_inf(v: f64) -> f64 {
    if v > 0.0 {
        v.ln()
    } else {
        f64::NEG_INFINITY
    }
}

const PDF_TOL: Tolerance = Tolerance {
    abs: 1e-11,
    rel: 1e-10,
    max_segments: 4000,
};
const CDF_TOL: Tolerance = Tolerance {
    abs: 1e-11,
    rel: 1e-10,
    max_segments: 4000,
};
const SF_TOL: Tolerance = Tolerance {
    abs: 1e-15,
    rel: 1e-9,
    max_segments: 4000,
};

/// `Z = Y₁ − Y₂` with `Y₁ = pos`, `Y₂ = neg` independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareDifference {
    pub pos: ScaledChiSquare,
    pub neg: ScaledChiSquare,
}

/// Which component is integrated out.
enum Variable {
    Pos,
    Neg,
}

impl ChiSquareDifference {
    pub fn new(pos: ScaledChiSquare, neg: ScaledChiSquare) -> Self {
        ChiSquareDifference { pos, neg }
    }

    pub fn mean(&self) -> f64 {
        self.pos.mean() - self.neg.mean()
    }

    pub fn variance(&self) -> f64 {
        self.pos.variance() + self.neg.variance()
    }

    /// Integrate over the narrower component; the other factor is then smooth
    /// on the integration scale.
    fn variable(&self) -> Variable {
        if self.pos.spread() <= self.neg.spread() {
            Variable::Pos
        } else {
            Variable::Neg
        }
    }

    /// Density of `Z` at `z`.
    pub fn pdf(&self, z: f64) -> Result<f64> {
        let (p, n) = (&self.pos, &self.neg);
        match (p.is_point_mass(), n.is_point_mass()) {
            (true, true) => return Ok(if z == 0.0 { f64::INFINITY } else { 0.0 }),
            (false, true) => return Ok(p.ln_pdf(z).exp()),
            (true, false) => return Ok(n.ln_pdf(-z).exp()),
            _ => {}
        }
        let (a, b) = (p.scale, n.scale);
        match self.variable() {
            // f(z) = ∫ f₁(u)·f_{bY₂}(a u − z) du
            Variable::Pos => integrate_against(&p.chi, (z / a).max(0.0), None, &[], |u| n.ln_pdf(a * u - z), PDF_TOL),
            // f(z) = ∫ f₂(u)·f_{aY₁}(z + b u) du
            Variable::Neg => integrate_against(&n.chi, (-z / b).max(0.0), None, &[], |u| p.ln_pdf(z + b * u), PDF_TOL),
        }
    }

    /// `P(Z ≤ z)`.
    pub fn cdf(&self, z: f64) -> Result<f64> {
        let (p, n) = (&self.pos, &self.neg);
        if n.is_point_mass() {
            return Ok(p.cdf(z));
        }
        if p.is_point_mass() {
            // P(−bY₂ ≤ z) = P(bY₂ ≥ −z)
            return Ok(n.sf(-z));
        }
        let (a, b) = (p.scale, n.scale);
        let v = match self.variable() {
            // P(bY₂ ≥ aY₁ − z) = ∫ f₁(u)·S_{bY₂}(a u − z) du
            Variable::Pos => {
                integrate_against(&p.chi, 0.0, None, &[z / a], |u| ln_or_neg_inf(n.sf(a * u - z)), CDF_TOL)?
            }
            // ∫ f₂(u)·F_{aY₁}(z + b u) du
            Variable::Neg => integrate_against(
                &n.chi,
                (-z / b).max(0.0),
                None,
                &[],
                |u| ln_or_neg_inf(p.cdf(z + b * u)),
                CDF_TOL,
            )?,
        };
        Ok(v.clamp(0.0, 1.0))
    }

    /// `P(Z > z)`, computed directly so small tail probabilities keep their
    /// relative accuracy.
    pub fn sf(&self, z: f64) -> Result<f64> {
        let (p, n) = (&self.pos, &self.neg);
        if n.is_point_mass() {
            return Ok(p.sf(z));
        }
        if p.is_point_mass() {
            // P(−bY₂ > z) = P(bY₂ < −z)
            return Ok(n.cdf(-z));
        }
        let (a, b) = (p.scale, n.scale);
        let v = match self.variable() {
            Variable::Pos => integrate_against(
                &p.chi,
                (z / a).max(0.0),
                None,
                &[],
                |u| ln_or_neg_inf(n.cdf(a * u - z)),
                SF_TOL,
            )?,
            Variable::Neg => {
                integrate_against(&n.chi, 0.0, None, &[-z / b], |u| ln_or_neg_inf(p.sf(z + b * u)), SF_TOL)?
            }
        };
        Ok(v.clamp(0.0, 1.0))
    }

    /// `P(Z ≤ z)` as the iterated double integral of the two densities with
    /// both variables logit-transformed. Much slower than [`Self::cdf`], which
    /// evaluates the inner integral in closed form; kept as an independent
    /// route for cross-checks.
    pub fn cdf_double(&self, z: f64) -> Result<f64> {
        let (p, n) = (&self.pos, &self.neg);
        if p.is_point_mass() || n.is_point_mass() {
            return self.cdf(z);
        }
        let (a, b) = (p.scale, n.scale);
        let inner_tol = Tolerance::new(1e-12, 1e-11);
        let outer_tol = Tolerance::new(1e-9, 1e-9);
        // F(z) = ∫ f₂(u₂) ∫_0^{(z + b u₂)/a} f₁(u₁) du₁ du₂
        let v = integrate_against(
            &n.chi,
            (-z / b).max(0.0),
            None,
            &[],
            |u2| {
                let upper = (z + b * u2) / a;
                match integrate_against(&p.chi, 0.0, Some(upper), &[], |_| 0.0, inner_tol) {
                    Ok(v) => ln_or_neg_inf(v.min(1.0)),
                    Err(_) => f64::NAN,
                }
            },
            outer_tol,
        )?;
        Ok(v.clamp(0.0, 1.0))
    }

    /// `z` with `P(Z > z) = alpha`.
    pub fn upper_quantile(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain {
                what: "probability",
                value: alpha,
            });
        }
        if self.pos.is_point_mass() && self.neg.is_point_mass() {
            return Err(Error::DegenerateForm { constant: 0.0 });
        }
        let center = self.mean();
        let sd = self.variance().sqrt();
        let (mut lo, mut hi) = (center - 10.0 * sd, center + 10.0 * sd);
        let f = |z: f64| self.sf(z).map(|s| s - alpha);
        let mut guard = 0;
        while f(lo)? < 0.0 {
            lo -= 10.0 * sd * (1 << guard.min(20)) as f64;
            guard += 1;
            if guard > 60 {
                return Err(Error::Numerical {
                    what: "difference quantile bracket",
                    achieved: lo,
                });
            }
        }
        while f(hi)? > 0.0 {
            hi += 10.0 * sd * (1 << guard.min(20)) as f64;
            guard += 1;
            if guard > 60 {
                return Err(Error::Numerical {
                    what: "difference quantile bracket",
                    achieved: hi,
                });
            }
        }
        let mut failure = None;
        let root = brent(
            |z| match f(z) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            },
            lo,
            hi,
            1e-13 * sd,
            1e-12 * alpha,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(root),
        }
    }
}

/// Density of `Z = Y₁ − Y₂`.
pub fn diff_chisq_pdf(z: f64, dist: &ChiSquareDifference) -> Result<f64> {
    dist.pdf(z)
}

/// `P(Z ≤ z)` for `Z = Y₁ − Y₂`.
pub fn diff_chisq_cdf(z: f64, dist: &ChiSquareDifference) -> Result<f64> {
    dist.cdf(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn chi(df: f64, delta: f64) -> NoncentralChiSquare {
        NoncentralChiSquare::new(df, delta).unwrap()
    }

    /// Poisson-weighted central chi-square CDFs summed naively far past any
    /// reasonable cut-off.
    fn poisson_oracle(x: f64, df: f64, delta: f64) -> f64 {
        let mu = delta / 2.0;
        let mut w = (-mu).exp();
        let mut s = 0.0;
        for j in 0..400 {
            s += w * gamma_p(df / 2.0 + j as f64, x / 2.0);
            w *= mu / (j as f64 + 1.0);
        }
        s
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(chi(3.0, 0.0).cdf(0.0), 0.0);
        assert!((chi(1.0, 0.0).cdf(3.841_458_820_694_124) - 0.95).abs() < 1e-12);
        let v = chi(2.0, 1.0).cdf(5.0);
        assert!(v > 0.0 && v < 1.0);
        assert!((v - poisson_oracle(5.0, 2.0, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn cdf_matches_oracle_over_grid() {
        for &(df, delta) in &[(0.7, 0.0), (1.0, 3.0), (4.5, 12.0), (10.0, 40.0), (2.0, 80.0)] {
            for i in 1..60 {
                let x = i as f64 * (df + delta) / 15.0;
                let d = chi(df, delta);
                assert!(
                    (d.cdf(x) - poisson_oracle(x, df, delta)).abs() < 1e-12,
                    "{df} {delta} {x}"
                );
                assert!((d.cdf(x) + d.sf(x) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn quantile_examples() {
        let d = chi(1.0, 0.0);
        assert!((d.quantile(0.5).unwrap() - 0.454_936_4).abs() < 1e-6);
        assert!((d.quantile(0.95).unwrap() - 3.841_459).abs() < 1e-6);
        assert!(d.quantile(1e-300).unwrap() < 1e-200);
        assert!(d.quantile(0.0).is_err());
        assert!(d.quantile(1.0).is_err());
        assert!(d.quantile(f64::NAN).is_err());
    }

    #[test]
    fn pdf_integrates_to_one_and_matches_central() {
        let d = chi(3.0, 0.0);
        // χ²₃ density: sqrt(x) e^{-x/2} / sqrt(2π)
        let x = 1.7f64;
        let exact = x.sqrt() * (-x / 2.0).exp() / (2.0 * core::f64::consts::PI).sqrt();
        assert!((d.pdf(x) - exact).abs() < 1e-15);
        let nd = chi(3.0, 7.5);
        let r = quadrature::integrate(|x| nd.pdf(x), &[0.0, 20.0, 80.0, 200.0], Tolerance::new(1e-12, 0.0)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        // Derivative of the CDF.
        let h = 1e-5;
        let fd = (nd.cdf(6.0 + h) - nd.cdf(6.0 - h)) / (2.0 * h);
        assert!((fd - nd.pdf(6.0)).abs() < 1e-8);
    }

    #[test]
    fn pdf_at_origin() {
        assert_eq!(chi(1.0, 1.0).pdf(0.0), f64::INFINITY);
        assert!((chi(2.0, 0.0).pdf(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(chi(3.0, 2.0).pdf(0.0), 0.0);
        assert_eq!(chi(3.0, 2.0).pdf(-1.0), 0.0);
    }

    #[test]
    fn large_noncentrality() {
        let d = chi(5.0, 20_000.0);
        let m = d.mean();
        let s = d.variance().sqrt();
        // Approximately normal at this size.
        assert!((d.cdf(m) - 0.5).abs() < 0.01);
        assert!((d.cdf(m + 2.0 * s) - normal_cdf(2.0)).abs() < 0.01);
        let q = d.quantile(0.3).unwrap();
        assert!((d.cdf(q) - 0.3).abs() < 1e-10);
    }

    fn laplace(df: f64) -> ChiSquareDifference {
        let c = ScaledChiSquare::new(1.0, chi(df, 0.0)).unwrap();
        ChiSquareDifference::new(c, c)
    }

    #[test]
    fn laplace_difference() {
        // χ²₂ = Exp(mean 2); the difference of two is Laplace(0, 2).
        let d = laplace(2.0);
        assert!((d.pdf(0.0).unwrap() - 0.25).abs() < 1e-8);
        assert!((d.cdf(2.0).unwrap() - (1.0 - (-1.0f64).exp() / 2.0)).abs() < 1e-8);
        assert!((d.cdf(0.0).unwrap() - 0.5).abs() < 1e-9);
        for z in [-7.0f64, -1.5, 0.3, 4.0] {
            let exact = 0.25 * (-z.abs() / 2.0).exp();
            assert!((d.pdf(z).unwrap() - exact).abs() < 1e-8, "{z}");
        }
    }

    #[test]
    fn symmetric_difference() {
        let d = laplace(3.5);
        for z in [0.2, 1.0, 5.0] {
            assert!((d.pdf(z).unwrap() - d.pdf(-z).unwrap()).abs() < 1e-8);
        }
        assert!((d.cdf(0.0).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn sf_and_cdf_are_complementary() {
        let d = ChiSquareDifference::new(
            ScaledChiSquare::new(0.7, chi(2.5, 1.3)).unwrap(),
            ScaledChiSquare::new(1.9, chi(1.0, 0.4)).unwrap(),
        );
        for z in [-12.0, -3.0, 0.0, 0.5, 4.0, 15.0] {
            let s = d.sf(z).unwrap() + d.cdf(z).unwrap();
            assert!((s - 1.0).abs() < 1e-9, "{z}: {s}");
        }
    }

    #[test]
    fn double_integral_route_agrees() {
        let d = ChiSquareDifference::new(
            ScaledChiSquare::new(1.3, chi(3.0, 2.0)).unwrap(),
            ScaledChiSquare::new(0.6, chi(2.0, 0.5)).unwrap(),
        );
        for z in [-2.0, 0.0, 1.0, 6.0] {
            let a = d.cdf(z).unwrap();
            let b = d.cdf_double(z).unwrap();
            assert!((a - b).abs() < 1e-7, "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn degenerate_sides() {
        let c = ScaledChiSquare::new(2.0, chi(3.0, 1.0)).unwrap();
        let only_pos = ChiSquareDifference::new(c, ScaledChiSquare::point_mass());
        assert!((only_pos.cdf(5.0).unwrap() - c.cdf(5.0)).abs() < 1e-15);
        let only_neg = ChiSquareDifference::new(ScaledChiSquare::point_mass(), c);
        assert!((only_neg.cdf(-5.0).unwrap() - c.sf(5.0)).abs() < 1e-15);
        assert!((only_neg.sf(-5.0).unwrap() - c.cdf(5.0)).abs() < 1e-15);
        let tiny = ChiSquareDifference::new(c, ScaledChiSquare::new(1e-7, chi(2.0, 0.0)).unwrap());
        for x in [0.5, 3.0, 9.0] {
            assert!((tiny.cdf(x).unwrap() - c.cdf(x)).abs() < 1e-5);
        }
    }

    #[test]
    fn upper_quantile_round_trip() {
        let d = ChiSquareDifference::new(
            ScaledChiSquare::new(1.0, chi(4.0, 0.0)).unwrap(),
            ScaledChiSquare::new(0.5, chi(1.0, 0.0)).unwrap(),
        );
        for alpha in [0.2, 0.05, 1e-3] {
            let z = d.upper_quantile(alpha).unwrap();
            assert!((d.sf(z).unwrap() - alpha).abs() < 1e-9 * alpha.max(1e-3));
        }
        let pts: Vec<f64> = (0..30).map(|i| -5.0 + i as f64 * 0.7).collect();
        let cdfs: Vec<f64> = pts.iter().map(|&z| d.cdf(z).unwrap()).collect();
        assert!(cdfs.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }
}
