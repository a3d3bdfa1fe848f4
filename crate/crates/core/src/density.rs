//! Sampled one-particle densities on a square with dyadic cell structure.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// A nonnegative density ρ sampled as cell averages on an n×n grid over a
/// square. n must be a power of two so dyadic subsquares align with cells
/// and square moments are exact sums.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityGrid {
    origin: (f64, f64),
    side: f64,
    n: usize,
    /// row-major cell averages, length n*n
    cells: Vec<f64>,
}

impl DensityGrid {
    pub fn new(origin: (f64, f64), side: f64, n: usize, cells: Vec<f64>) -> Result<Self> {
        if !(side.is_finite() && side > 0.0) {
            return Err(CoreError::Validation(format!("side must be > 0, got {side}")));
        }
        if n == 0 || !n.is_power_of_two() {
            return Err(CoreError::Validation(format!(
                "grid size must be a power of two, got {n}"
            )));
        }
        if cells.len() != n * n {
            return Err(CoreError::Validation(format!(
                "expected {} cells, got {}",
                n * n,
                cells.len()
            )));
        }
        if cells.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(CoreError::Validation(
                "density cells must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { origin, side, n, cells })
    }

    /// Uniform density integrating to `mass` over the square.
    pub fn uniform(origin: (f64, f64), side: f64, n: usize, mass: f64) -> Result<Self> {
        let rho = mass / (side * side);
        Self::new(origin, side, n, vec![rho; n * n])
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn cell(&self, ix: usize, iy: usize) -> f64 {
        self.cells[iy * self.n + ix]
    }

    pub fn cell_area(&self) -> f64 {
        let h = self.side / self.n as f64;
        h * h
    }

    /// Total mass N = sum of cells times cell area.
    pub fn total_mass(&self) -> f64 {
        self.cells.iter().sum::<f64>() * self.cell_area()
    }

    /// ∫ ρ² over the whole square.
    pub fn second_moment(&self) -> f64 {
        self.cells.iter().map(|c| c * c).sum::<f64>() * self.cell_area()
    }

    /// (∫ρ, ∫ρ²) over the cell-aligned subsquare with corner (ix, iy) and
    /// `size` cells per side; row-major accumulation order is fixed so the
    /// result is deterministic.
    pub fn moments_on(&self, ix: usize, iy: usize, size: usize) -> (f64, f64) {
        let mut m = 0.0;
        let mut s = 0.0;
        for y in iy..iy + size {
            for x in ix..ix + size {
                let c = self.cells[y * self.n + x];
                m += c;
                s += c * c;
            }
        }
        let a = self.cell_area();
        (m * a, s * a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_mass() {
        let g = DensityGrid::uniform((0.0, 0.0), 2.0, 8, 5.0).unwrap();
        assert_abs_diff_eq!(g.total_mass(), 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.second_moment(), 25.0 / 4.0, epsilon = 1e-12);
        let (m, s) = g.moments_on(0, 0, 4);
        assert_abs_diff_eq!(m, 1.25, epsilon = 1e-12);
        assert_abs_diff_eq!(s, 25.0 / 16.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(DensityGrid::new((0.0, 0.0), 1.0, 3, vec![0.0; 9]).is_err());
        assert!(DensityGrid::new((0.0, 0.0), 1.0, 2, vec![0.0; 3]).is_err());
        assert!(DensityGrid::new((0.0, 0.0), 1.0, 2, vec![-1.0, 0.0, 0.0, 0.0]).is_err());
        assert!(DensityGrid::new((0.0, 0.0), 0.0, 2, vec![0.0; 4]).is_err());
    }
}
