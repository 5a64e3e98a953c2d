//! Published values for the six exceptional groups, shipped as data.
//!
//! Anything read from here is reported with the `paper-table` provenance.

use crate::cartan::GroupLabel;
use crate::poly::UniPoly;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaperEntry {
    pub label: GroupLabel,
    pub degrees: &'static [u32],
    pub orbit_size: usize,
    pub v: &'static [i64],
    /// Coefficients of the Sym^2 numerator, constant term first.
    pub sym2_numerator: &'static [i64],
    pub choices: usize,
}

impl PaperEntry {
    pub fn numerator(&self) -> UniPoly {
        UniPoly::from_ints(self.sym2_numerator)
    }

    pub fn point(&self) -> Vec<Scalar> {
        self.v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    pub fn order(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).product()
    }
}

pub const PAPER_TABLE: [PaperEntry; 6] = [
    PaperEntry {
        label: GroupLabel::H3,
        degrees: &[2, 6, 10],
        orbit_size: 12,
        v: &[1, 2, 3],
        sym2_numerator: &[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1],
        choices: 2,
    },
    PaperEntry {
        label: GroupLabel::H4,
        degrees: &[2, 12, 20, 30],
        orbit_size: 20,
        v: &[1, 2, 3, 5],
        sym2_numerator: &[
            1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0,
            0, 0, 0, 0, 1,
        ],
        choices: 2,
    },
    PaperEntry {
        label: GroupLabel::F4,
        degrees: &[2, 6, 8, 12],
        orbit_size: 24,
        v: &[2, -3, 5, 7],
        sym2_numerator: &[1, 0, 1, 0, 1, 0, 2, 0, 1, 0, 2, 0, 1, 0, 1],
        choices: 2,
    },
    PaperEntry {
        label: GroupLabel::E6,
        degrees: &[2, 5, 6, 8, 9, 12],
        orbit_size: 27,
        v: &[2, -5, 41, 7, -9, 110],
        sym2_numerator: &[1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 1, 2, 1, 1, 1, 1],
        choices: 12,
    },
    PaperEntry {
        label: GroupLabel::E7,
        degrees: &[2, 6, 8, 10, 12, 14, 18],
        orbit_size: 56,
        v: &[2, -5, 41, 7, -9, 110, -87],
        sym2_numerator: &[1, 0, 1, 0, 1, 0, 2, 0, 2, 0, 3, 0, 3, 0, 3, 0, 3, 0, 3, 0, 2, 0, 2, 0, 1, 0, 1],
        choices: 48,
    },
    PaperEntry {
        label: GroupLabel::E8,
        degrees: &[2, 8, 12, 14, 18, 20, 24, 30],
        orbit_size: 240,
        v: &[2, -5, 41, 7, -9, 110, -87, 11],
        sym2_numerator: &[
            1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 2, 0, 2, 0, 1, 0, 3, 0, 2, 0, 2, 0, 3, 0, 2, 0, 2, 0, 3, 0, 1, 0,
            2, 0, 2, 0, 1, 0, 1, 0, 1, 0, 0, 0, 1,
        ],
        choices: 96,
    },
];

pub fn paper_entry(label: GroupLabel) -> Option<&'static PaperEntry> {
    PAPER_TABLE.iter().find(|e| e.label == label)
}
