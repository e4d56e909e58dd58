use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Coordinate direction. `X1` is the fastest-varying storage index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X1, Axis::X2, Axis::X3];

    /// Zero-based position of the axis.
    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
            Axis::X3 => 2,
        }
    }
}

impl TryFrom<usize> for Axis {
    type Error = Error;

    /// One-based, matching `∂₁, ∂₂, ∂₃`.
    fn try_from(value: usize) -> Result<Self> {
        match value {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            3 => Ok(Axis::X3),
            other => Err(Error::InvalidAxis(other)),
        }
    }
}

/// Uniform periodic grid on `[0, 2π)³` with `n1 × n2 × n3` samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid3 {
    n: [usize; 3],
}

impl Grid3 {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        let ok = |n: usize| n >= 4 && n % 2 == 0;
        if !(ok(n1) && ok(n2) && ok(n3)) {
            return Err(Error::InvalidGrid { n1, n2, n3 });
        }
        Ok(Self { n: [n1, n2, n3] })
    }

    pub fn cubic(n: usize) -> Result<Self> {
        Self::new(n, n, n)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.n
    }

    pub fn n(&self, axis: Axis) -> usize {
        self.n[axis.index()]
    }

    /// Total number of samples.
    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        2.0 * PI / self.n(axis) as f64
    }

    pub fn min_spacing(&self) -> f64 {
        Axis::ALL
            .iter()
            .map(|&a| self.spacing(a))
            .fold(f64::INFINITY, f64::min)
    }

    /// Quadrature weight `h₁h₂h₃` of one sample.
    pub fn cell_volume(&self) -> f64 {
        self.spacing(Axis::X1) * self.spacing(Axis::X2) * self.spacing(Axis::X3)
    }

    /// `(2π)³`.
    pub fn volume(&self) -> f64 {
        8.0 * PI * PI * PI
    }

    pub fn coord(&self, axis: Axis, i: usize) -> f64 {
        i as f64 * self.spacing(axis)
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        i1 + self.n[0] * (i2 + self.n[1] * i3)
    }

    /// Inverse of [`Grid3::index`].
    #[inline]
    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let i1 = idx % self.n[0];
        let rest = idx / self.n[0];
        (i1, rest % self.n[1], rest / self.n[1])
    }

    /// Signed integer wavenumber of storage slot `j` along `axis`.
    /// The Nyquist slot `n/2` reports `-n/2`.
    pub fn wavenumber(&self, axis: Axis, j: usize) -> i64 {
        let n = self.n(axis);
        if j < n / 2 {
            j as i64
        } else {
            j as i64 - n as i64
        }
    }

    /// Wavenumber used by first derivatives: the Nyquist slot maps to 0.
    pub fn derivative_wavenumber(&self, axis: Axis, j: usize) -> f64 {
        if self.is_nyquist(axis, j) {
            0.0
        } else {
            self.wavenumber(axis, j) as f64
        }
    }

    pub fn is_nyquist(&self, axis: Axis, j: usize) -> bool {
        j == self.n(axis) / 2
    }

    /// Storage slot of wavenumber `k` (taken modulo `n`).
    pub fn slot(&self, axis: Axis, k: i64) -> usize {
        let n = self.n(axis) as i64;
        k.rem_euclid(n) as usize
    }

    /// Two-thirds rule: a slot survives dealiasing when `3|k| < n`.
    pub fn dealias_keeps(&self, axis: Axis, j: usize) -> bool {
        3 * self.wavenumber(axis, j).unsigned_abs() < self.n(axis) as u64
    }

    /// `|k|²` of the mode stored at flat index `idx`, Nyquist counted at `n/2`.
    pub fn k_squared(&self, idx: usize) -> f64 {
        let (j1, j2, j3) = self.unravel(idx);
        let k1 = self.wavenumber(Axis::X1, j1) as f64;
        let k2 = self.wavenumber(Axis::X2, j2) as f64;
        let k3 = self.wavenumber(Axis::X3, j3) as f64;
        k1 * k1 + k2 * k2 + k3 * k3
    }

    /// Flat index of the mode `-k` for the mode stored at `idx`.
    pub fn mirror(&self, idx: usize) -> usize {
        let (j1, j2, j3) = self.unravel(idx);
        let m = |j: usize, n: usize| (n - j) % n;
        self.index(m(j1, self.n[0]), m(j2, self.n[1]), m(j3, self.n[2]))
    }
}
