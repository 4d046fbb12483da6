//! Sparse cyclic-diagonal matrices.
//!
//! Every unit-gain subchannel matrix has exactly one nonzero per row, sitting
//! on the cyclic diagonal `col = (row + shift) mod N`. An effective channel is
//! a sum of a few such diagonals, stored as one `(shift, coefficients)` pair
//! per diagonal.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_len, Result};

/// One cyclic diagonal: entry `(m, (m + shift) mod N)` equals `coeffs[m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tap {
    pub shift: usize,
    pub coeffs: Vec<Complex64>,
}

impl Tap {
    pub fn column(&self, row: usize) -> usize {
        (row + self.shift) % self.coeffs.len()
    }

    /// Row holding this diagonal's entry in column `col`.
    pub fn row(&self, col: usize) -> usize {
        let n = self.coeffs.len();
        (col + n - self.shift % n) % n
    }
}

/// An `N×N` matrix made of cyclic diagonals with distinct shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseChannel {
    n: usize,
    taps: Vec<Tap>,
}

impl SparseChannel {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            taps: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    pub fn is_zero(&self) -> bool {
        self.taps.is_empty()
    }

    /// Adds `scale · tap`, merging with an existing diagonal of the same shift.
    pub fn add_scaled(&mut self, scale: Complex64, tap: &Tap) {
        debug_assert_eq!(tap.coeffs.len(), self.n);
        let shift = tap.shift % self.n;
        match self.taps.iter_mut().find(|t| t.shift == shift) {
            Some(existing) => {
                for (a, b) in existing.coeffs.iter_mut().zip(&tap.coeffs) {
                    *a += scale * b;
                }
            }
            None => self.taps.push(Tap {
                shift,
                coeffs: tap.coeffs.iter().map(|c| scale * c).collect(),
            }),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.n, x.len())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for tap in &self.taps {
            for (m, o) in out.iter_mut().enumerate() {
                *o += tap.coeffs[m] * x[tap.column(m)];
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut d = DMatrix::zeros(self.n, self.n);
        for tap in &self.taps {
            for m in 0..self.n {
                d[(m, tap.column(m))] += tap.coeffs[m];
            }
        }
        d
    }

    /// Largest number of structurally nonzero entries in any row.
    pub fn row_support(&self) -> usize {
        (0..self.n)
            .map(|m| {
                self.taps
                    .iter()
                    .filter(|t| t.coeffs[m].norm() > 0.0)
                    .count()
            })
            .max()
            .unwrap_or(0)
    }
}
