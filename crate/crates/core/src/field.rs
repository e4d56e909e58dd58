//! Real-space and spectral field containers.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid3};
use crate::math;

/// Real samples of a scalar on a [`Grid3`], x1-fastest. Values are finite.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: Grid3,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid3, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    /// Skips the finiteness scan; for values produced by finite arithmetic.
    pub(crate) fn from_vec_unchecked(grid: Grid3, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid3) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid3, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.len()])
    }

    /// Samples `f(x1, x2, x3)` at the grid points `x_i = j_i h_i`.
    pub fn from_fn(grid: Grid3, mut f: impl FnMut(f64, f64, f64) -> f64) -> Result<Self> {
        let [n1, n2, n3] = grid.dims();
        let mut values = Vec::with_capacity(grid.len());
        for i3 in 0..n3 {
            let x3 = grid.coord(Axis::X3, i3);
            for i2 in 0..n2 {
                let x2 = grid.coord(Axis::X2, i2);
                for i1 in 0..n1 {
                    values.push(f(grid.coord(Axis::X1, i1), x2, x3));
                }
            }
        }
        Self::new(grid, values)
    }

    pub fn grid(&self) -> Grid3 {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, i1: usize, i2: usize, i3: usize) -> f64 {
        self.values[self.grid.index(i1, i2, i3)]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(math::abs(*v)))
    }

    /// Root mean square of the samples.
    pub fn rms(&self) -> f64 {
        let ss: f64 = self.values.iter().map(|v| v * v).sum();
        math::sqrt(ss / self.values.len() as f64)
    }

    /// Rectangle-rule `L²` norm `√(Σ|f|² h₁h₂h₃)`.
    pub fn l2_norm(&self) -> f64 {
        math::sqrt(self.sum_squares() * self.grid.cell_volume())
    }

    pub(crate) fn sum_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Axis relabeling `x1 ↔ x2`.
    pub fn swap_x1_x2(&self) -> Self {
        let [n1, n2, n3] = self.grid.dims();
        let grid = Grid3::new(n2, n1, n3).expect("dims already validated");
        let mut values = vec![0.0; self.values.len()];
        for i3 in 0..n3 {
            for i2 in 0..n2 {
                for i1 in 0..n1 {
                    values[grid.index(i2, i1, i3)] = self.get(i1, i2, i3);
                }
            }
        }
        Self { grid, values }
    }
}

/// Three real components on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    grid: Grid3,
    components: [ScalarField; 3],
}

impl VectorField {
    pub fn new(u1: ScalarField, u2: ScalarField, u3: ScalarField) -> Result<Self> {
        let grid = u1.grid();
        if u2.grid() != grid || u3.grid() != grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid,
            components: [u1, u2, u3],
        })
    }

    pub fn zeros(grid: Grid3) -> Self {
        Self {
            grid,
            components: [
                ScalarField::zeros(grid),
                ScalarField::zeros(grid),
                ScalarField::zeros(grid),
            ],
        }
    }

    pub fn from_fn(grid: Grid3, mut f: impl FnMut(f64, f64, f64) -> [f64; 3]) -> Result<Self> {
        let u1 = ScalarField::from_fn(grid, |a, b, c| f(a, b, c)[0])?;
        let u2 = ScalarField::from_fn(grid, |a, b, c| f(a, b, c)[1])?;
        let u3 = ScalarField::from_fn(grid, |a, b, c| f(a, b, c)[2])?;
        Self::new(u1, u2, u3)
    }

    pub fn grid(&self) -> Grid3 {
        self.grid
    }

    pub fn components(&self) -> &[ScalarField; 3] {
        &self.components
    }

    pub fn component(&self, axis: Axis) -> &ScalarField {
        &self.components[axis.index()]
    }

    pub fn into_components(self) -> [ScalarField; 3] {
        self.components
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            components: [
                self.components[0].scaled(factor),
                self.components[1].scaled(factor),
                self.components[2].scaled(factor),
            ],
        }
    }

    /// Pointwise Euclidean magnitude `|u|`.
    pub fn magnitude(&self) -> ScalarField {
        let [a, b, c] = &self.components;
        let values = a
            .values()
            .iter()
            .zip(b.values())
            .zip(c.values())
            .map(|((x, y), z)| math::sqrt(x * x + y * y + z * z))
            .collect();
        ScalarField::from_vec_unchecked(self.grid, values)
    }

    /// `√(Σᵢ ‖uᵢ‖²)` by the rectangle rule.
    pub fn l2_norm(&self) -> f64 {
        let ss: f64 = self.components.iter().map(ScalarField::sum_squares).sum();
        math::sqrt(ss * self.grid.cell_volume())
    }

    /// RMS of the pointwise magnitude.
    pub fn rms(&self) -> f64 {
        let ss: f64 = self.components.iter().map(ScalarField::sum_squares).sum();
        math::sqrt(ss / self.grid.len() as f64)
    }

    pub fn max_abs(&self) -> f64 {
        self.magnitude().max_abs()
    }

    /// Relabels `x1 ↔ x2` in both coordinates and components.
    pub fn swap_x1_x2(&self) -> Self {
        let [a, b, c] = &self.components;
        let u1 = b.swap_x1_x2();
        let grid = u1.grid();
        Self {
            grid,
            components: [u1, a.swap_x1_x2(), c.swap_x1_x2()],
        }
    }
}

/// Fourier-series coefficients `f = Σ_k ĉ_k e^{ik·x}` in FFT storage order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid3,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: Grid3, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: Grid3) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> Grid3 {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of the integer wavenumber `k`.
    pub fn mode(&self, k1: i64, k2: i64, k3: i64) -> Complex64 {
        let g = self.grid;
        self.coeffs[g.index(
            g.slot(Axis::X1, k1),
            g.slot(Axis::X2, k2),
            g.slot(Axis::X3, k3),
        )]
    }

    /// Coefficient-space `L²` norm `√((2π)³ Σ|ĉ_k|²)`; equals the
    /// quadrature norm of the real field by Parseval.
    pub fn l2_norm(&self) -> f64 {
        let ss: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        math::sqrt(ss * self.grid.volume())
    }

    /// Largest deviation `|ĉ_{-k} - conj(ĉ_k)|` relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(crate::math::sqrt(c.norm_sqr())));
        if scale == 0.0 {
            return 0.0;
        }
        let worst = (0..self.coeffs.len()).fold(0.0f64, |m, idx| {
            let d = self.coeffs[self.grid.mirror(idx)] - self.coeffs[idx].conj();
            m.max(crate::math::sqrt(d.norm_sqr()))
        });
        worst / scale
    }
}
