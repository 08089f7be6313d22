use alloc::string::String;
use alloc::vec::Vec;

use super::data::check_haplotypes;
use crate::linalg::{self, Matrix};
use crate::{Error, Result};

/// How a similarity matrix was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// 1 for identical haplotypes, 0 otherwise.
    Matching,
    /// Longest run of consecutive loci with equal alleles.
    Length,
    /// Fraction of loci with equal alleles.
    Counting,
    /// Supplied by the caller.
    Custom,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Matching => "matching",
            Measure::Length => "length",
            Measure::Counting => "counting",
            Measure::Custom => "custom",
        }
    }
}

impl core::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matching" => Ok(Measure::Matching),
            "length" => Ok(Measure::Length),
            "counting" => Ok(Measure::Counting),
            _ => Err(Error::validation(alloc::format!("unknown similarity measure `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    a: Matrix,
    measure: Measure,
}

/// Asymmetry accepted in a user-supplied matrix before symmetrizing.
const CUSTOM_SYMMETRY_TOL: f64 = 1e-9;

impl SimilarityMatrix {
    /// Any symmetric matrix; `|a_ij − a_ji|` up to `1e-9·max|a|` is averaged out.
    pub fn custom(a: Matrix) -> Result<Self> {
        let a = linalg::symmetrized(&a, CUSTOM_SYMMETRY_TOL, "similarity matrix")?;
        Ok(SimilarityMatrix {
            a,
            measure: Measure::Custom,
        })
    }

    pub fn from_haplotypes(haplotypes: &[String], measure: Measure) -> Result<Self> {
        match measure {
            Measure::Custom => Err(Error::validation("a custom measure needs an explicit matrix")),
            Measure::Length => {
                let loci = check_haplotypes(haplotypes)?;
                Self::length_weighted(haplotypes, &alloc::vec![1.0; loci])
            }
            _ => {
                check_haplotypes(haplotypes)?;
                let seqs = split(haplotypes);
                let loci = seqs[0].len() as f64;
                let score = |x: &[char], y: &[char]| match measure {
                    Measure::Matching => (x == y) as u8 as f64,
                    _ => x.iter().zip(y).filter(|(a, b)| a == b).count() as f64 / loci,
                };
                Ok(Self::build(&seqs, measure, score))
            }
        }
    }

    /// Length measure where a run scores the sum of its per-locus weights
    /// (for example inter-marker distances) instead of its locus count.
    pub fn length_weighted(haplotypes: &[String], weights: &[f64]) -> Result<Self> {
        let loci = check_haplotypes(haplotypes)?;
        if weights.len() != loci || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::validation("need one nonnegative weight per locus"));
        }
        let seqs = split(haplotypes);
        let score = |x: &[char], y: &[char]| {
            let (mut best, mut run) = (0.0f64, 0.0);
            for ((a, b), w) in x.iter().zip(y).zip(weights) {
                run = if a == b { run + w } else { 0.0 };
                best = best.max(run);
            }
            best
        };
        Ok(Self::build(&seqs, Measure::Length, score))
    }

    fn build<F: Fn(&[char], &[char]) -> f64>(seqs: &[Vec<char>], measure: Measure, score: F) -> Self {
        let k = seqs.len();
        let mut a = Matrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let v = score(&seqs[i], &seqs[j]);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        SimilarityMatrix { a, measure }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn k(&self) -> usize {
        self.a.nrows()
    }

    /// Rows and columns `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> SimilarityMatrix {
        let a = Matrix::from_fn(indices.len(), indices.len(), |r, c| self.a[(indices[r], indices[c])]);
        SimilarityMatrix {
            a,
            measure: self.measure,
        }
    }
}

fn split(haplotypes: &[String]) -> Vec<Vec<char>> {
    haplotypes.iter().map(|h| h.chars().collect()).collect()
}

pub fn similarity_matrix(haplotypes: &[String], measure: Measure) -> Result<SimilarityMatrix> {
    SimilarityMatrix::from_haplotypes(haplotypes, measure)
}
