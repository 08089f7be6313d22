//! Bundled synthetic haplotype models used by the examples, the CLI and the
//! test suite. Each model has a null frequency vector `p` and an alternative
//! `q` for the second group.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::association::FrequencyModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticModel {
    pub name: &'static str,
    pub haplotypes: &'static [&'static str],
    pub p: &'static [f64],
    pub q: &'static [f64],
}

/// Four haplotypes over five loci.
pub const FOUR: SyntheticModel = SyntheticModel {
    name: "k4",
    haplotypes: &["00000", "00011", "01101", "11110"],
    p: &[0.40, 0.30, 0.20, 0.10],
    q: &[0.30, 0.30, 0.25, 0.15],
};

/// Five haplotypes over seven loci, two of them rare.
pub const FIVE_RARE: SyntheticModel = SyntheticModel {
    name: "k5-rare",
    haplotypes: &["0000000", "0001111", "0110011", "1010101", "1111000"],
    p: &[0.34, 0.32, 0.30, 0.02, 0.02],
    q: &[0.28, 0.32, 0.32, 0.04, 0.04],
};

/// Eight haplotypes over six loci.
pub const EIGHT: SyntheticModel = SyntheticModel {
    name: "k8",
    haplotypes: &[
        "000000", "000011", "001100", "011010", "100101", "101111", "110001", "111110",
    ],
    p: &[0.25, 0.18, 0.15, 0.12, 0.10, 0.08, 0.07, 0.05],
    q: &[0.21, 0.17, 0.16, 0.12, 0.11, 0.09, 0.08, 0.06],
};

pub const ALL: [SyntheticModel; 3] = [FOUR, FIVE_RARE, EIGHT];

pub fn by_name(name: &str) -> Option<SyntheticModel> {
    ALL.into_iter().find(|m| m.name == name)
}

impl SyntheticModel {
    pub fn haplotype_strings(&self) -> Vec<String> {
        self.haplotypes.iter().map(|h| h.to_string()).collect()
    }

    /// `p` in group 1, `q` in group 2.
    pub fn alternative(&self) -> FrequencyModel {
        FrequencyModel::new(self.haplotype_strings(), self.p.to_vec(), self.q.to_vec()).expect("bundled model is valid")
    }

    /// `p` in both groups.
    pub fn null(&self) -> FrequencyModel {
        FrequencyModel::null(self.haplotype_strings(), self.p.to_vec()).expect("bundled model is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_models_are_valid() {
        let mut ks: Vec<usize> = ALL.iter().map(|m| m.haplotypes.len()).collect();
        ks.sort();
        assert_eq!(ks, [4, 5, 8]);
        for m in ALL {
            m.alternative();
            m.null();
            assert_eq!(by_name(m.name), Some(m));
        }
        assert!(ALL.iter().any(|m| m.p.iter().any(|&p| p <= 0.02)));
        assert!(by_name("nope").is_none());
    }
}
