#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::form::{cumulants, CumulantVector, GaussianQuadraticForm};
use super::reduce::WeightedChiSquareForm;
use crate::distributions::{ChiSquareDifference, NoncentralChiSquare, ScaledChiSquare};
use crate::linalg::trace_of_product;
use crate::{Error, Method, Result};

/// `β·D ≈ χ²_{df0}`, matching the first two cumulants of a central form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCumSurrogate {
    pub beta: f64,
    pub df0: f64,
}

impl TwoCumSurrogate {
    /// From `tr(AΣ)` and `tr((AΣ)²)`.
    pub fn from_traces(tr_w: f64, tr_w2: f64) -> Result<Self> {
        if !(tr_w > 0.0 && tr_w2 > 0.0) {
            return Err(Error::NotApplicable {
                reason: "tr(A sigma) or tr((A sigma)^2) is not positive",
                fallback: Some(Method::DiffChisq),
            });
        }
        Ok(TwoCumSurrogate {
            beta: tr_w / tr_w2,
            df0: tr_w * tr_w / tr_w2,
        })
    }

    pub fn chi(&self) -> NoncentralChiSquare {
        NoncentralChiSquare::new(self.df0, 0.0).expect("df0 > 0 by construction")
    }

    /// `P(χ²_{df0} ≥ β·d)`.
    pub fn tail_prob(&self, d: f64) -> f64 {
        self.chi().sf(self.beta * d)
    }

    pub fn cdf(&self, d: f64) -> f64 {
        self.chi().cdf(self.beta * d)
    }

    pub fn critical_value(&self, alpha: f64) -> Result<f64> {
        Ok(self.chi().upper_quantile(alpha)? / self.beta)
    }
}

/// Two-cumulant surrogate of a zero-mean form, from traces only.
pub fn two_cum(form: &GaussianQuadraticForm) -> Result<TwoCumSurrogate> {
    if !form.is_central() {
        return Err(Error::NotApplicable {
            reason: "two-cum matching needs a zero-mean form",
            fallback: Some(Method::FourCum),
        });
    }
    let m = form.a() * form.sigma();
    TwoCumSurrogate::from_traces(m.trace(), trace_of_product(&m, &m))
}

/// `β₁·D + β₂ ≈ χ²_{df}(δ)`, matching four cumulants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourCumSurrogate {
    pub beta1: f64,
    pub beta2: f64,
    pub df: f64,
    pub delta: f64,
    pub s1: f64,
    pub s2: f64,
    /// `None` on the central branch `s₁ ≤ s₂`.
    pub xi: Option<f64>,
}

/// `s₁ − s₂` within this fraction of `s₂` counts as the central branch.
const BRANCH_TOL: f64 = 1e-12;

impl FourCumSurrogate {
    pub fn from_cumulants(c: &CumulantVector) -> Result<Self> {
        let [k1, k2, k3, k4] = c.kappa;
        if !(k2 > 0.0) {
            return Err(Error::Degenerate("second cumulant is not positive"));
        }
        let s1 = k3 * k3 / (8.0 * k2 * k2 * k2);
        let s2 = k4 / (12.0 * k2 * k2);
        if !(s1 > 0.0) || !s1.is_finite() {
            return Err(Error::Degenerate("third cumulant vanishes"));
        }
        let (df, delta, xi) = if s1 - s2 <= BRANCH_TOL * s2.abs() {
            (1.0 / s1, 0.0, None)
        } else {
            let root = s1.sqrt();
            let xi = 1.0 / (root - (s1 - s2).sqrt());
            let delta = xi * xi * (xi * root - 1.0);
            let df = xi * xi * (3.0 - 2.0 * xi * root);
            if !(df > 0.0) {
                return Err(Error::Numerical {
                    what: "four-cum degrees of freedom",
                    achieved: df,
                });
            }
            if !(delta >= 0.0) {
                return Err(Error::Numerical {
                    what: "four-cum non-centrality",
                    achieved: delta,
                });
            }
            (df, delta, Some(xi))
        };
        let beta1 = (2.0 * (df + 2.0 * delta) / k2).sqrt();
        let beta2 = df + delta - beta1 * k1;
        Ok(FourCumSurrogate {
            beta1,
            beta2,
            df,
            delta,
            s1,
            s2,
            xi,
        })
    }

    pub fn from_weighted(w: &WeightedChiSquareForm) -> Result<Self> {
        Self::from_cumulants(&w.cumulants())
    }

    pub fn chi(&self) -> NoncentralChiSquare {
        NoncentralChiSquare::new(self.df, self.delta).expect("validated at construction")
    }

    /// `P(χ²_{df}(δ) ≥ β₁d + β₂)`.
    pub fn tail_prob(&self, d: f64) -> f64 {
        let x = self.beta1 * d + self.beta2;
        // Rounding in β₁d + β₂ must not move d off the support minimum.
        if x <= 8.0 * f64::EPSILON * ((self.beta1 * d).abs() + self.beta2.abs()) {
            return 1.0;
        }
        self.chi().sf(x)
    }

    pub fn cdf(&self, d: f64) -> f64 {
        1.0 - self.tail_prob(d)
    }

    /// `(c*_α − β₂)/β₁` with `c*_α` the upper-α point of `χ²_{df}(δ)`.
    pub fn critical_value(&self, alpha: f64) -> Result<f64> {
        Ok((self.chi().upper_quantile(alpha)? - self.beta2) / self.beta1)
    }

    /// Left end of the surrogate's support, `−β₂/β₁`.
    pub fn support_min(&self) -> f64 {
        -self.beta2 / self.beta1
    }
}

pub fn four_cum(form: &GaussianQuadraticForm) -> Result<FourCumSurrogate> {
    FourCumSurrogate::from_cumulants(&cumulants(form))
}

/// `D ≈ Z + shift` with `Z` a difference of two scaled non-central
/// chi-squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceSurrogate {
    pub diff: ChiSquareDifference,
    pub shift: f64,
    /// Four-cumulant fits of the positive and negated negative groups.
    pub pos_fit: Option<FourCumSurrogate>,
    pub neg_fit: Option<FourCumSurrogate>,
}

impl DifferenceSurrogate {
    /// `P(D ≥ d)`.
    pub fn tail_prob(&self, d: f64) -> Result<f64> {
        self.diff.sf(d - self.shift)
    }

    pub fn cdf(&self, d: f64) -> Result<f64> {
        self.diff.cdf(d - self.shift)
    }

    pub fn critical_value(&self, alpha: f64) -> Result<f64> {
        Ok(self.diff.upper_quantile(alpha)? + self.shift)
    }
}

/// Matches the positive-weight and the negated negative-weight terms
/// (offsets included) each to a four-cumulant surrogate and returns their
/// difference. An empty group becomes a point mass at zero.
pub fn split_sign_approx(w: &WeightedChiSquareForm) -> Result<DifferenceSurrogate> {
    if w.omega.iter().all(|&x| x == 0.0) {
        return Err(Error::DegenerateForm { constant: w.c });
    }
    let fit = |positive: bool| -> Result<(ScaledChiSquare, f64, Option<FourCumSurrogate>)> {
        let group = w.sign_group(positive);
        if group.is_empty() {
            return Ok((ScaledChiSquare::point_mass(), 0.0, None));
        }
        let s = FourCumSurrogate::from_weighted(&group)?;
        // group ≈ (χ² − β₂)/β₁
        let scaled = ScaledChiSquare::new(1.0 / s.beta1, s.chi())?;
        Ok((scaled, -s.beta2 / s.beta1, Some(s)))
    };
    let (pos, pos_shift, pos_fit) = fit(true)?;
    let (neg, neg_shift, neg_fit) = fit(false)?;
    Ok(DifferenceSurrogate {
        diff: ChiSquareDifference::new(pos, neg),
        shift: w.c + pos_shift - neg_shift,
        pos_fit,
        neg_fit,
    })
}

/// A closed-form approximation to the distribution of `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Surrogate {
    TwoCum(TwoCumSurrogate),
    FourCum(FourCumSurrogate),
    Difference(DifferenceSurrogate),
    /// `D` is the constant.
    PointMass(f64),
}

impl Surrogate {
    pub fn method(&self) -> Option<Method> {
        match self {
            Surrogate::TwoCum(_) => Some(Method::TwoCum),
            Surrogate::FourCum(_) => Some(Method::FourCum),
            Surrogate::Difference(_) => Some(Method::DiffChisq),
            Surrogate::PointMass(_) => None,
        }
    }

    /// `P(D ≥ d)`.
    pub fn tail_prob(&self, d: f64) -> Result<f64> {
        match self {
            Surrogate::TwoCum(s) => Ok(s.tail_prob(d)),
            Surrogate::FourCum(s) => Ok(s.tail_prob(d)),
            Surrogate::Difference(s) => s.tail_prob(d),
            Surrogate::PointMass(c) => Ok(if d <= *c + 1e-12 * c.abs().max(1.0) { 1.0 } else { 0.0 }),
        }
    }

    /// `d*` with `P(D ≥ d*) = α`.
    pub fn critical_value(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain {
                what: "significance level",
                value: alpha,
            });
        }
        match self {
            Surrogate::TwoCum(s) => s.critical_value(alpha),
            Surrogate::FourCum(s) => s.critical_value(alpha),
            Surrogate::Difference(s) => s.critical_value(alpha),
            Surrogate::PointMass(c) => Err(Error::DegenerateForm { constant: *c }),
        }
    }
}

pub fn tail_prob(surrogate: &Surrogate, d: f64) -> Result<f64> {
    surrogate.tail_prob(d)
}

pub fn critical_value(surrogate: &Surrogate, alpha: f64) -> Result<f64> {
    surrogate.critical_value(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Matrix, Vector};
    use alloc::vec;

    fn identity_form(k: usize) -> GaussianQuadraticForm {
        GaussianQuadraticForm::central(Matrix::identity(k, k), Matrix::identity(k, k)).unwrap()
    }

    #[test]
    fn two_cum_examples() {
        let s = two_cum(&identity_form(3)).unwrap();
        assert_eq!((s.beta, s.df0), (1.0, 3.0));
        let s = TwoCumSurrogate::from_traces(3.0, 5.0).unwrap();
        assert!((s.beta - 0.6).abs() < 1e-15 && (s.df0 - 1.8).abs() < 1e-15);
        let s = TwoCumSurrogate::from_traces(4.0, 16.0).unwrap();
        assert_eq!((s.beta, s.df0), (0.25, 1.0));
        assert!(matches!(
            TwoCumSurrogate::from_traces(-1.0, 2.0),
            Err(Error::NotApplicable {
                fallback: Some(Method::DiffChisq),
                ..
            })
        ));
        let nc = GaussianQuadraticForm::new(
            Matrix::identity(1, 1),
            Vector::from_element(1, 1.0),
            Matrix::identity(1, 1),
        )
        .unwrap();
        assert!(matches!(two_cum(&nc), Err(Error::NotApplicable { .. })));
    }

    #[test]
    fn two_cum_tail_and_critical_value() {
        let s = Surrogate::TwoCum(TwoCumSurrogate { beta: 1.0, df0: 1.0 });
        assert!((s.tail_prob(3.841_458_820_694_124).unwrap() - 0.05).abs() < 1e-12);
        assert!((s.critical_value(0.05).unwrap() - 3.841_458_820_694_124).abs() < 1e-9);
        let s = Surrogate::TwoCum(TwoCumSurrogate { beta: 2.0, df0: 1.0 });
        assert!((s.critical_value(0.05).unwrap() - 1.920_729_410_347_062).abs() < 1e-9);
        assert!(s.critical_value(1.0).is_err());
    }

    #[test]
    fn four_cum_recovers_chi_square() {
        for k in 1..=10 {
            let s = four_cum(&identity_form(k)).unwrap();
            assert!((s.df - k as f64).abs() < 1e-10);
            assert_eq!(s.delta, 0.0);
            assert!((s.beta1 - 1.0).abs() < 1e-10 && s.beta2.abs() < 1e-10);
            assert_eq!(s.tail_prob(0.0), 1.0);
        }
    }

    #[test]
    fn four_cum_recovers_noncentral_chi_square() {
        for mu in [0.0, 0.3, 1.0, 2.0, 3.0] {
            let w = WeightedChiSquareForm::new(vec![1.0], vec![mu], 0.0).unwrap();
            let s = FourCumSurrogate::from_weighted(&w).unwrap();
            assert!((s.df - 1.0).abs() < 1e-8, "{mu}: {s:?}");
            assert!((s.delta - mu * mu).abs() < 1e-8);
            assert!((s.beta1 - 1.0).abs() < 1e-10 && s.beta2.abs() < 1e-8);
        }
    }

    #[test]
    fn four_cum_tail_example() {
        let s = FourCumSurrogate {
            beta1: 1.0,
            beta2: 0.0,
            df: 2.0,
            delta: 0.0,
            s1: 0.5,
            s2: 0.5,
            xi: None,
        };
        assert!((s.tail_prob(5.991_464_547_107_979) - 0.05).abs() < 1e-12);
        assert!((s.critical_value(0.05).unwrap() - 5.991_464_547_107_979).abs() < 1e-9);
    }

    #[test]
    fn split_of_positive_form_equals_four_cum() {
        let w = WeightedChiSquareForm::new(vec![2.0, 1.0, 0.3], vec![0.2, 0.0, -0.5], 0.4).unwrap();
        let split = split_sign_approx(&w).unwrap();
        let four = FourCumSurrogate::from_weighted(&w).unwrap();
        for d in [0.5, 2.0, 6.0, 15.0] {
            assert!((split.tail_prob(d).unwrap() - four.tail_prob(d)).abs() < 1e-9);
        }
    }

    #[test]
    fn split_symmetric_difference() {
        let w = WeightedChiSquareForm::central(vec![1.0, -1.0]);
        let split = split_sign_approx(&w).unwrap();
        assert!((split.cdf(0.0).unwrap() - 0.5).abs() < 1e-8);
        assert!(split.shift.abs() < 1e-12);
    }

    #[test]
    fn point_mass_surrogate() {
        let s = Surrogate::PointMass(5.0);
        assert_eq!(s.tail_prob(5.0).unwrap(), 1.0);
        assert_eq!(s.tail_prob(5.1).unwrap(), 0.0);
        assert!(s.critical_value(0.05).is_err());
        assert!(split_sign_approx(&WeightedChiSquareForm::new(vec![], vec![], 5.0).unwrap()).is_err());
    }
}
