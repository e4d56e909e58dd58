//! Forward/inverse transforms, spectral differentiation and Leray projection.
//!
//! Coefficients are normalized as Fourier-series coefficients: the forward
//! transform divides by `n1·n2·n3`, so `f(x) = Σ_k ĉ_k e^{ik·x}` and
//! `‖f‖²_{L²} = (2π)³ Σ|ĉ_k|²`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Fft3;
use crate::field::{ScalarField, SpectralField, VectorField};
use crate::grid::{Axis, Grid3};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Reusable transform plan for one grid.
#[derive(Clone, Debug)]
pub struct Transform {
    grid: Grid3,
    fft: Fft3,
    /// Flat index of `−k` for every flat index of `k`.
    mirror: Vec<usize>,
}

impl Transform {
    pub fn new(grid: Grid3) -> Self {
        Self {
            grid,
            fft: Fft3::new(grid.dims()),
            mirror: (0..grid.len()).map(|idx| grid.mirror(idx)).collect(),
        }
    }

    pub fn grid(&self) -> Grid3 {
        self.grid
    }

    fn check(&self, grid: Grid3) {
        assert_eq!(grid, self.grid, "field grid does not match the transform plan");
    }

    /// Forward transform of a real field. The result is exactly Hermitian.
    pub fn forward(&self, f: &ScalarField) -> SpectralField {
        self.check(f.grid());
        let coeffs = self.forward_real(f.values(), None).0;
        SpectralField::new(self.grid, coeffs).expect("length matches grid")
    }

    /// Inverse transform; the imaginary part (rounding noise for Hermitian
    /// input) is discarded.
    pub fn inverse(&self, s: &SpectralField) -> ScalarField {
        self.check(s.grid());
        let values = self.inverse_real(s.coeffs(), None).0;
        ScalarField::from_vec_unchecked(self.grid, values)
    }

    /// Transforms two real fields with one complex FFT.
    pub fn forward_pair(&self, a: &ScalarField, b: &ScalarField) -> (SpectralField, SpectralField) {
        self.check(a.grid());
        self.check(b.grid());
        let (ca, cb) = self.forward_real(a.values(), Some(b.values()));
        (
            SpectralField::new(self.grid, ca).expect("length matches grid"),
            SpectralField::new(self.grid, cb.expect("pair requested")).expect("length matches grid"),
        )
    }

    /// Inverse of two Hermitian spectra with one complex FFT.
    pub fn inverse_pair(&self, a: &SpectralField, b: &SpectralField) -> (ScalarField, ScalarField) {
        self.check(a.grid());
        self.check(b.grid());
        let (va, vb) = self.inverse_real(a.coeffs(), Some(b.coeffs()));
        (
            ScalarField::from_vec_unchecked(self.grid, va),
            ScalarField::from_vec_unchecked(self.grid, vb.expect("pair requested")),
        )
    }

    /// Inverse of any number of Hermitian spectra, two per complex FFT.
    pub fn inverse_many(&self, spectra: &[&[Complex64]]) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(spectra.len());
        for chunk in spectra.chunks(2) {
            let (a, b) = self.inverse_real(chunk[0], chunk.get(1).copied());
            out.push(a);
            if let Some(b) = b {
                out.push(b);
            }
        }
        out
    }

    /// Forward of any number of real arrays, two per complex FFT.
    pub fn forward_many(&self, fields: &[&[f64]]) -> Vec<Vec<Complex64>> {
        let mut out = Vec::with_capacity(fields.len());
        for chunk in fields.chunks(2) {
            let (a, b) = self.forward_real(chunk[0], chunk.get(1).copied());
            out.push(a);
            if let Some(b) = b {
                out.push(b);
            }
        }
        out
    }

    pub(crate) fn forward_real(&self, a: &[f64], b: Option<&[f64]>) -> (Vec<Complex64>, Option<Vec<Complex64>>) {
        let n = self.grid.len();
        let mut z: Vec<Complex64> = match b {
            Some(b) => a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect(),
            None => a.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        };
        self.fft.forward(&mut z);
        let scale = 1.0 / n as f64;
        let mut ca = Vec::with_capacity(n);
        let mut cb = b.map(|_| Vec::with_capacity(n));
        for idx in 0..n {
            let zk = z[idx] * scale;
            let zm = z[self.mirror[idx]].conj() * scale;
            ca.push((zk + zm) * 0.5);
            if let Some(cb) = cb.as_mut() {
                cb.push((zk - zm) * Complex64::new(0.0, -0.5));
            }
        }
        (ca, cb)
    }

    pub(crate) fn inverse_real(&self, a: &[Complex64], b: Option<&[Complex64]>) -> (Vec<f64>, Option<Vec<f64>>) {
        let mut z: Vec<Complex64> = match b {
            Some(b) => a.iter().zip(b).map(|(&x, &y)| x + I * y).collect(),
            None => a.to_vec(),
        };
        self.fft.inverse(&mut z);
        let va = z.iter().map(|c| c.re).collect();
        let vb = b.map(|_| z.iter().map(|c| c.im).collect());
        (va, vb)
    }

    /// `∂_axis f` spectrally.
    pub fn derivative(&self, f: &ScalarField, axis: Axis) -> ScalarField {
        let mut s = self.forward(f);
        differentiate(self.grid, s.coeffs_mut(), axis);
        self.inverse(&s)
    }

    pub fn divergence(&self, u: &VectorField) -> ScalarField {
        let [a, b, c] = u.components();
        let (mut sa, mut sb) = self.forward_pair(a, b);
        let mut sc = self.forward(c);
        differentiate(self.grid, sa.coeffs_mut(), Axis::X1);
        differentiate(self.grid, sb.coeffs_mut(), Axis::X2);
        differentiate(self.grid, sc.coeffs_mut(), Axis::X3);
        let sum: Vec<Complex64> = sa
            .coeffs()
            .iter()
            .zip(sb.coeffs())
            .zip(sc.coeffs())
            .map(|((x, y), z)| x + y + z)
            .collect();
        self.inverse(&SpectralField::new(self.grid, sum).expect("length matches grid"))
    }

    pub fn leray_project(&self, u: &VectorField) -> VectorField {
        let [a, b, c] = u.components();
        let (sa, sb) = self.forward_pair(a, b);
        let sc = self.forward(c);
        let mut comps = [sa.into_coeffs(), sb.into_coeffs(), sc.into_coeffs()];
        project(self.grid, &mut comps);
        let [ca, cb, cc] = comps;
        let (ua, ub) = self.inverse_real(&ca, Some(&cb));
        let uc = self.inverse_real(&cc, None).0;
        VectorField::new(
            ScalarField::from_vec_unchecked(self.grid, ua),
            ScalarField::from_vec_unchecked(self.grid, ub.expect("pair requested")),
            ScalarField::from_vec_unchecked(self.grid, uc),
        )
        .expect("components share the grid")
    }
}

/// Multiplies coefficients by `i k_axis`; the Nyquist slot is zeroed.
pub fn differentiate(grid: Grid3, coeffs: &mut [Complex64], axis: Axis) {
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let (j1, j2, j3) = grid.unravel(idx);
        let j = [j1, j2, j3][axis.index()];
        *c *= I * grid.derivative_wavenumber(axis, j);
    }
}

/// Removes `k (k·û)/|k|²` from every mode, with `k` the derivative
/// wavenumber. Modes whose derivative wavenumber vanishes pass through.
pub fn project(grid: Grid3, comps: &mut [Vec<Complex64>; 3]) {
    for idx in 0..grid.len() {
        let (j1, j2, j3) = grid.unravel(idx);
        let k = [
            grid.derivative_wavenumber(Axis::X1, j1),
            grid.derivative_wavenumber(Axis::X2, j2),
            grid.derivative_wavenumber(Axis::X3, j3),
        ];
        let kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if kk == 0.0 {
            continue;
        }
        let dot = comps[0][idx] * k[0] + comps[1][idx] * k[1] + comps[2][idx] * k[2];
        let f = dot / kk;
        for axis in 0..3 {
            comps[axis][idx] -= f * k[axis];
        }
    }
}

/// Zeroes every mode outside the two-thirds band.
pub fn dealias(grid: Grid3, coeffs: &mut [Complex64]) {
    for (idx, c) in coeffs.iter_mut().enumerate() {
        if !keeps(grid, idx) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}

pub(crate) fn keeps(grid: Grid3, idx: usize) -> bool {
    let (j1, j2, j3) = grid.unravel(idx);
    grid.dealias_keeps(Axis::X1, j1) && grid.dealias_keeps(Axis::X2, j2) && grid.dealias_keeps(Axis::X3, j3)
}

pub fn forward_transform(f: &ScalarField) -> Result<SpectralField> {
    if let Some(index) = f.values().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(Transform::new(f.grid()).forward(f))
}

pub fn inverse_transform(s: &SpectralField) -> ScalarField {
    Transform::new(s.grid()).inverse(s)
}

pub fn spectral_derivative(f: &ScalarField, axis: Axis) -> ScalarField {
    Transform::new(f.grid()).derivative(f, axis)
}

/// `∂₁u₁ + ∂₂u₂ + ∂₃u₃`.
pub fn divergence(u: &VectorField) -> ScalarField {
    Transform::new(u.grid()).divergence(u)
}

/// Orthogonal projection onto (discretely) divergence-free fields.
pub fn leray_project(u: &VectorField) -> VectorField {
    Transform::new(u.grid()).leray_project(u)
}

/// Rectangle-rule `L²` norm of scalar or vector fields.
pub trait L2Norm {
    fn l2_norm(&self) -> f64;
}

impl L2Norm for ScalarField {
    fn l2_norm(&self) -> f64 {
        ScalarField::l2_norm(self)
    }
}

impl L2Norm for VectorField {
    fn l2_norm(&self) -> f64 {
        VectorField::l2_norm(self)
    }
}

pub fn l2_norm<F: L2Norm + ?Sized>(f: &F) -> f64 {
    f.l2_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::vec::Vec;

    fn random_field(grid: Grid3, seed: u64) -> ScalarField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..grid.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        ScalarField::new(grid, v).unwrap()
    }

    fn random_vector(grid: Grid3, seed: u64) -> VectorField {
        VectorField::new(
            random_field(grid, seed),
            random_field(grid, seed + 1),
            random_field(grid, seed + 2),
        )
        .unwrap()
    }

    fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn zero_field_has_zero_spectrum() {
        let g = Grid3::cubic(8).unwrap();
        let s = forward_transform(&ScalarField::zeros(g)).unwrap();
        assert!(s.coeffs().iter().all(|c| c.norm_sqr().sqrt() == 0.0));
    }

    #[test]
    fn sine_has_two_modes() {
        let g = Grid3::cubic(8).unwrap();
        let f = ScalarField::from_fn(g, |x, _, _| x.sin()).unwrap();
        let s = forward_transform(&f).unwrap();
        let big: Vec<usize> = (0..g.len()).filter(|&i| s.coeffs()[i].norm_sqr().sqrt() > 1e-14).collect();
        assert_eq!(big.len(), 2);
        assert!((s.mode(1, 0, 0) - Complex64::new(0.0, -0.5)).norm_sqr().sqrt() < 1e-15);
        assert!((s.mode(-1, 0, 0) - Complex64::new(0.0, 0.5)).norm_sqr().sqrt() < 1e-15);
    }

    #[test]
    fn parseval_and_round_trip_on_random_fields() {
        for (n, seed) in [(8usize, 1u64), (16, 2), (6, 3)] {
            let g = Grid3::cubic(n).unwrap();
            let f = random_field(g, seed);
            let s = forward_transform(&f).unwrap();
            // Nested-loop quadrature of |f|².
            let mut quad = 0.0;
            for i3 in 0..n {
                for i2 in 0..n {
                    for i1 in 0..n {
                        quad += f.get(i1, i2, i3).powi(2) * g.cell_volume();
                    }
                }
            }
            let spec = s.l2_norm().powi(2);
            assert!((quad - spec).abs() <= 1e-10 * quad);
            assert!(s.hermitian_defect() < 1e-12);
            let back = inverse_transform(&s);
            assert!(max_diff(&back, &f) <= 1e-12 * f.max_abs());
        }
    }

    #[test]
    fn derivative_of_analytic_fields() {
        let g = Grid3::cubic(16).unwrap();
        let f = ScalarField::from_fn(g, |x, _, _| x.sin()).unwrap();
        let df = spectral_derivative(&f, Axis::X1);
        let expect = ScalarField::from_fn(g, |x, _, _| x.cos()).unwrap();
        assert!(max_diff(&df, &expect) < 1e-12);

        let f = ScalarField::from_fn(g, |x, _, z| (3.0 * z).sin() * (2.0 * x).cos()).unwrap();
        let df = spectral_derivative(&f, Axis::X3);
        let expect = ScalarField::from_fn(g, |x, _, z| 3.0 * (3.0 * z).cos() * (2.0 * x).cos()).unwrap();
        assert!(max_diff(&df, &expect) < 1e-12);

        let c = ScalarField::constant(g, 2.5).unwrap();
        for axis in Axis::ALL {
            assert!(spectral_derivative(&c, axis).max_abs() < 1e-14);
        }
    }

    #[test]
    fn nyquist_mode_is_not_differentiated() {
        let g = Grid3::cubic(8).unwrap();
        // cos(4 x1) lives entirely in the Nyquist slot.
        let f = ScalarField::from_fn(g, |x, _, _| (4.0 * x).cos()).unwrap();
        assert!(spectral_derivative(&f, Axis::X1).max_abs() < 1e-14);
    }

    #[test]
    fn divergence_examples() {
        let g = Grid3::cubic(16).unwrap();
        let u = VectorField::from_fn(g, |_, y, _| [y.sin(), 0.0, 0.0]).unwrap();
        assert!(divergence(&u).max_abs() < 1e-13);
        let u = VectorField::from_fn(g, |_, _, _| [1.0, -2.0, 0.5]).unwrap();
        assert!(divergence(&u).max_abs() < 1e-13);
        // u = ∇g with g = sin x1 sin x2 sin x3, so div u = Δg = -3g.
        let u = VectorField::from_fn(g, |x, y, z| {
            [
                x.cos() * y.sin() * z.sin(),
                x.sin() * y.cos() * z.sin(),
                x.sin() * y.sin() * z.cos(),
            ]
        })
        .unwrap();
        let lap = ScalarField::from_fn(g, |x, y, z| -3.0 * x.sin() * y.sin() * z.sin()).unwrap();
        assert!(max_diff(&divergence(&u), &lap) <= 1e-12);
    }

    #[test]
    fn leray_projection_properties() {
        let g = Grid3::cubic(16).unwrap();
        let tg = VectorField::from_fn(g, |x, y, z| {
            [x.sin() * y.cos() * z.cos(), -x.cos() * y.sin() * z.cos(), 0.0]
        })
        .unwrap();
        let p = leray_project(&tg);
        for i in 0..3 {
            assert!(max_diff(&p.components()[i], &tg.components()[i]) < 1e-12);
        }

        let grad = VectorField::from_fn(g, |x, y, z| {
            [
                x.cos() * (2.0 * y).sin() * z.sin(),
                2.0 * x.sin() * (2.0 * y).cos() * z.sin(),
                x.sin() * (2.0 * y).sin() * z.cos(),
            ]
        })
        .unwrap();
        assert!(leray_project(&grad).max_abs() < 1e-12);

        let u = random_vector(g, 11);
        let p = leray_project(&u);
        assert!(divergence(&p).max_abs() <= 1e-10 * u.rms());
        let pp = leray_project(&p);
        for i in 0..3 {
            assert!(max_diff(&pp.components()[i], &p.components()[i]) <= 1e-12 * p.max_abs());
        }
    }

    #[test]
    fn projection_keeps_the_mean() {
        let g = Grid3::cubic(8).unwrap();
        let u = VectorField::from_fn(g, |x, _, _| [1.0 + x.cos(), 2.0, -1.0]).unwrap();
        let p = leray_project(&u);
        let mean = |f: &ScalarField| f.values().iter().sum::<f64>() / g.len() as f64;
        assert!((mean(&p.components()[0]) - 1.0).abs() < 1e-14);
        assert!((mean(&p.components()[1]) - 2.0).abs() < 1e-14);
        assert!((mean(&p.components()[2]) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn paired_transforms_match_single() {
        let g = Grid3::new(8, 6, 4).unwrap();
        let a = random_field(g, 5);
        let b = random_field(g, 6);
        let t = Transform::new(g);
        let (sa, sb) = t.forward_pair(&a, &b);
        let (ra, rb) = (t.forward(&a), t.forward(&b));
        for (x, y) in sa.coeffs().iter().zip(ra.coeffs()).chain(sb.coeffs().iter().zip(rb.coeffs())) {
            assert!((x - y).norm_sqr().sqrt() < 1e-15);
        }
        let (ia, ib) = t.inverse_pair(&sa, &sb);
        assert!(max_diff(&ia, &a) < 1e-13);
        assert!(max_diff(&ib, &b) < 1e-13);
    }

    #[test]
    fn constant_l2_norm() {
        let g = Grid3::cubic(8).unwrap();
        let one = ScalarField::constant(g, 1.0).unwrap();
        assert!((l2_norm(&one) - (2.0 * PI).powf(1.5)).abs() < 1e-12);
    }
}
