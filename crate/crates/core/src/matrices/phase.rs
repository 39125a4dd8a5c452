use std::f64::consts::TAU;

use num_complex::Complex64;

/// Phases `a` in `[0, 1)` of a unit-modulus table, `value = exp(2 pi i a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl PhaseMatrix {
    /// Row/column 0 is the identity and is pinned to 0. Phases within `tol` of an
    /// integer snap to exactly 0.
    pub fn from_values(n: usize, values: &[Complex64], tol: f64) -> Self {
        assert_eq!(values.len(), n * n);
        let data = values
            .iter()
            .enumerate()
            .map(|(k, z)| {
                if k / n == 0 || k % n == 0 {
                    0.0
                } else {
                    phase_of(*z, tol)
                }
            })
            .collect();
        PhaseMatrix { n, data }
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.n + y]
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }
}

/// Phase of `z` in `[0, 1)`, snapping to 0 within `tol`.
pub fn phase_of(z: Complex64, tol: f64) -> f64 {
    let a = (z.arg() / TAU).rem_euclid(1.0);
    if a < tol || 1.0 - a < tol {
        0.0
    } else {
        a
    }
}
