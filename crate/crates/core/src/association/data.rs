use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Haplotype categories with their counts in two groups.
#[derive(Debug, Clone, PartialEq)]
pub struct HaplotypeSample {
    haplotypes: Vec<String>,
    counts1: Vec<u64>,
    counts2: Vec<u64>,
}

/// Checks a list of haplotype labels: nonempty, distinct, one allele per
/// character, all of the same positive length.
pub(crate) fn check_haplotypes(haplotypes: &[String]) -> Result<usize> {
    let Some(first) = haplotypes.first() else {
        return Err(Error::validation("no haplotypes"));
    };
    let len = first.chars().count();
    if len == 0 {
        return Err(Error::validation("haplotypes must have at least one locus"));
    }
    let mut seen = BTreeSet::new();
    for h in haplotypes {
        if h.chars().count() != len {
            return Err(Error::validation(format!(
                "haplotype `{h}` has {} loci, expected {len}",
                h.chars().count()
            )));
        }
        if !seen.insert(h.as_str()) {
            return Err(Error::validation(format!("duplicate haplotype `{h}`")));
        }
    }
    Ok(len)
}

impl HaplotypeSample {
    pub fn new(haplotypes: Vec<String>, counts1: Vec<u64>, counts2: Vec<u64>) -> Result<Self> {
        check_haplotypes(&haplotypes)?;
        if counts1.len() != haplotypes.len() || counts2.len() != haplotypes.len() {
            return Err(Error::validation("count vectors must match the haplotype list"));
        }
        let s = HaplotypeSample {
            haplotypes,
            counts1,
            counts2,
        };
        if s.n() == 0 || s.m() == 0 {
            return Err(Error::validation("both groups need at least one observation"));
        }
        Ok(s)
    }

    pub fn haplotypes(&self) -> &[String] {
        &self.haplotypes
    }

    pub fn counts1(&self) -> &[u64] {
        &self.counts1
    }

    pub fn counts2(&self) -> &[u64] {
        &self.counts2
    }

    pub fn k(&self) -> usize {
        self.haplotypes.len()
    }

    pub fn loci(&self) -> usize {
        self.haplotypes[0].chars().count()
    }

    pub fn n(&self) -> u64 {
        self.counts1.iter().sum()
    }

    pub fn m(&self) -> u64 {
        self.counts2.iter().sum()
    }

    pub fn p_hat(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.counts1.iter().map(|&c| c as f64 / n).collect()
    }

    pub fn q_hat(&self) -> Vec<f64> {
        let m = self.m() as f64;
        self.counts2.iter().map(|&c| c as f64 / m).collect()
    }

    /// Removes categories observed in neither group. Returns the reduced
    /// sample and the indices that were kept.
    pub fn drop_empty(&self) -> (HaplotypeSample, Vec<usize>) {
        let kept: Vec<usize> = (0..self.k())
            .filter(|&i| self.counts1[i] + self.counts2[i] > 0)
            .collect();
        let sample = HaplotypeSample {
            haplotypes: kept.iter().map(|&i| self.haplotypes[i].clone()).collect(),
            counts1: kept.iter().map(|&i| self.counts1[i]).collect(),
            counts2: kept.iter().map(|&i| self.counts2[i]).collect(),
        };
        (sample, kept)
    }

    /// The same sample with categories listed in the order `order`.
    pub fn permuted(&self, order: &[usize]) -> Result<HaplotypeSample> {
        HaplotypeSample::new(
            order.iter().map(|&i| self.haplotypes[i].clone()).collect(),
            order.iter().map(|&i| self.counts1[i]).collect(),
            order.iter().map(|&i| self.counts2[i]).collect(),
        )
    }
}

/// Population haplotype frequencies `p` (group 1) and `q` (group 2).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyModel {
    haplotypes: Vec<String>,
    p: Vec<f64>,
    q: Vec<f64>,
}

const SUM_TOL: f64 = 1e-12;

impl FrequencyModel {
    pub fn new(haplotypes: Vec<String>, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        check_haplotypes(&haplotypes)?;
        let k = haplotypes.len();
        if p.len() != k || q.len() != k {
            return Err(Error::validation("frequency vectors must match the haplotype list"));
        }
        for (name, v) in [("p", &p), ("q", &q)] {
            if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                return Err(Error::validation(format!("{name} has negative or non-finite entries")));
            }
            let s: f64 = v.iter().sum();
            if (s - 1.0).abs() > SUM_TOL {
                return Err(Error::validation(format!("{name} sums to {s}, not 1")));
            }
        }
        if let Some(i) = (0..k).find(|&i| p[i] + q[i] <= 0.0) {
            return Err(Error::validation(format!(
                "haplotype `{}` has zero frequency in both groups",
                haplotypes[i]
            )));
        }
        Ok(FrequencyModel { haplotypes, p, q })
    }

    /// `p = q`.
    pub fn null(haplotypes: Vec<String>, p: Vec<f64>) -> Result<Self> {
        let q = p.clone();
        Self::new(haplotypes, p, q)
    }

    pub fn haplotypes(&self) -> &[String] {
        &self.haplotypes
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn k(&self) -> usize {
        self.p.len()
    }

    pub fn is_null(&self) -> bool {
        self.p == self.q
    }

    /// `(n p + m q)/(n + m)`.
    pub fn mixture(&self, n: u64, m: u64) -> Vec<f64> {
        let (n, m) = (n as f64, m as f64);
        self.p
            .iter()
            .zip(&self.q)
            .map(|(&p, &q)| (n * p + m * q) / (n + m))
            .collect()
    }

    /// The model with `q` replaced by `p + t(q − p)`. `t` must keep `q`
    /// nonnegative.
    pub fn with_effect(&self, t: f64) -> Result<Self> {
        let q = self.p.iter().zip(&self.q).map(|(&p, &q)| p + t * (q - p)).collect();
        Self::new(self.haplotypes.clone(), self.p.clone(), q)
    }
}
