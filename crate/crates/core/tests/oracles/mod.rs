//! Brute-force reference implementations. Nothing here calls the library's
//! transforms or norms; they exist only to be compared against.
#![allow(dead_code)]

use std::f64::consts::PI;

use anisoreg_core::{Exponent, Grid3, ScalarField, VectorField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Spectrum = [Vec<Complex64>; 3];

/// Signed integer wavenumber of slot `j` on an axis of length `n`, with the
/// Nyquist slot reported as `n/2`.
pub fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Slot holding wavenumber `k`.
pub fn slot(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Derivative multiplier: the Nyquist slot differentiates to zero.
pub fn k_eff(j: usize, n: usize) -> f64 {
    if n % 2 == 0 && j == n / 2 {
        0.0
    } else {
        wavenumber(j, n) as f64
    }
}

fn polar(r: f64, phase: f64) -> Complex64 {
    Complex64::new(r * phase.cos(), r * phase.sin())
}

fn flat(grid: Grid3, i1: usize, i2: usize, i3: usize) -> usize {
    let [n1, n2, _] = grid.dims();
    i1 + n1 * (i2 + n2 * i3)
}

/// Direct `O(N²)` DFT, scaled by `1/N` so coefficients are Fourier-series
/// coefficients.
pub fn dft(grid: Grid3, values: &[f64]) -> Vec<Complex64> {
    let [n1, n2, n3] = grid.dims();
    let total = (n1 * n2 * n3) as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for k3 in 0..n3 {
        for k2 in 0..n2 {
            for k1 in 0..n1 {
                let mut acc = Complex64::new(0.0, 0.0);
                for i3 in 0..n3 {
                    for i2 in 0..n2 {
                        for i1 in 0..n1 {
                            let phase = -2.0
                                * PI
                                * ((k1 * i1) as f64 / n1 as f64
                                    + (k2 * i2) as f64 / n2 as f64
                                    + (k3 * i3) as f64 / n3 as f64);
                            acc += polar(values[flat(grid, i1, i2, i3)], phase);
                        }
                    }
                }
                out[flat(grid, k1, k2, k3)] = acc / total;
            }
        }
    }
    out
}

/// Inverse of [`dft`], real part.
pub fn idft(grid: Grid3, coeffs: &[Complex64]) -> Vec<f64> {
    let [n1, n2, n3] = grid.dims();
    let mut out = vec![0.0; grid.len()];
    for i3 in 0..n3 {
        for i2 in 0..n2 {
            for i1 in 0..n1 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k3 in 0..n3 {
                    for k2 in 0..n2 {
                        for k1 in 0..n1 {
                            let phase = 2.0
                                * PI
                                * ((k1 * i1) as f64 / n1 as f64
                                    + (k2 * i2) as f64 / n2 as f64
                                    + (k3 * i3) as f64 / n3 as f64);
                            acc += coeffs[flat(grid, k1, k2, k3)] * polar(1.0, phase);
                        }
                    }
                }
                out[flat(grid, i1, i2, i3)] = acc.re;
            }
        }
    }
    out
}

/// Spectral derivative by direct DFT.
pub fn derivative(grid: Grid3, values: &[f64], axis: usize) -> Vec<f64> {
    let mut c = dft(grid, values);
    let dims = grid.dims();
    for k3 in 0..dims[2] {
        for k2 in 0..dims[1] {
            for k1 in 0..dims[0] {
                let j = [k1, k2, k3][axis];
                let idx = flat(grid, k1, k2, k3);
                c[idx] *= Complex64::new(0.0, k_eff(j, dims[axis]));
            }
        }
    }
    idft(grid, &c)
}

fn lp_reduce(values: &[f64], e: Exponent, h: f64) -> f64 {
    match e {
        Exponent::Infinite => values.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        Exponent::Finite(p) => {
            let s: f64 = values.iter().map(|v| v.abs().powf(p) * h).sum();
            s.powf(1.0 / p)
        }
    }
}

/// The mixed norm exactly as defined: `L^p` in `x1`, then `L^q` in `x2`,
/// then `L^r` in `x3`, each by the rectangle rule on the periodic grid.
pub fn mixed_norm(f: &ScalarField, p: Exponent, q: Exponent, r: Exponent) -> f64 {
    let grid = f.grid();
    let [n1, n2, n3] = grid.dims();
    let h = [2.0 * PI / n1 as f64, 2.0 * PI / n2 as f64, 2.0 * PI / n3 as f64];
    let mut outer = Vec::with_capacity(n3);
    for i3 in 0..n3 {
        let mut middle = Vec::with_capacity(n2);
        for i2 in 0..n2 {
            let line: Vec<f64> = (0..n1).map(|i1| f.get(i1, i2, i3)).collect();
            middle.push(lp_reduce(&line, p, h[0]));
        }
        outer.push(lp_reduce(&middle, q, h[1]));
    }
    lp_reduce(&outer, r, h[2])
}

/// `L^s` norm over the whole box by the rectangle rule.
pub fn lp_norm(f: &ScalarField, s: Exponent) -> f64 {
    let h = f.grid().cell_volume();
    lp_reduce(f.values(), s, h)
}

/// Seeded field of uniform values in `[-1, 1]`.
pub fn random_scalar(grid: Grid3, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    ScalarField::new(grid, values).unwrap()
}

pub fn gradients(u: &VectorField) -> [[Vec<f64>; 3]; 3] {
    let grid = u.grid();
    std::array::from_fn(|i| std::array::from_fn(|j| derivative(grid, u.components()[i].values(), j)))
}

/// `−Σᵢⱼ ∫ (∂₃uᵢ)(∂ᵢuⱼ)(∂₃uⱼ) dx` as a triple loop over grid points.
pub fn trilinear_d3(u: &VectorField) -> f64 {
    let grid = u.grid();
    let g = gradients(u);
    let mut acc = 0.0;
    for p in 0..grid.len() {
        for i in 0..3 {
            for j in 0..3 {
                acc += g[i][2][p] * g[j][i][p] * g[j][2][p];
            }
        }
    }
    -acc * grid.cell_volume()
}

/// Whether slot `(k1, k2, k3)` survives the two-thirds rule.
pub fn kept(grid: Grid3, k: [i64; 3]) -> bool {
    let dims = grid.dims();
    (0..3).all(|a| 3 * k[a].unsigned_abs() < dims[a] as u64)
}

/// `−P[(u·∇)u]` by direct convolution of Fourier coefficients in the
/// convective form, with two-thirds truncation of the input and the output.
pub fn nonlinear_convolution(u: &VectorField) -> Spectrum {
    let grid = u.grid();
    let dims = grid.dims();
    let mut hat: Spectrum = std::array::from_fn(|i| dft(grid, u.components()[i].values()));
    let mut modes = Vec::new();
    for k3 in 0..dims[2] {
        for k2 in 0..dims[1] {
            for k1 in 0..dims[0] {
                let k = [wavenumber(k1, dims[0]), wavenumber(k2, dims[1]), wavenumber(k3, dims[2])];
                let idx = flat(grid, k1, k2, k3);
                if kept(grid, k) {
                    modes.push(k);
                } else {
                    for c in hat.iter_mut() {
                        c[idx] = Complex64::new(0.0, 0.0);
                    }
                }
            }
        }
    }
    let at = |k: [i64; 3]| flat(grid, slot(k[0], dims[0]), slot(k[1], dims[1]), slot(k[2], dims[2]));
    let mut out: Spectrum = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); grid.len()]);
    for &k in &modes {
        // (u·∇)u at k = Σ_{p+q=k} û_j(p) · i q_j · û_i(q)
        let mut conv = [Complex64::new(0.0, 0.0); 3];
        for &p in &modes {
            let q = [k[0] - p[0], k[1] - p[1], k[2] - p[2]];
            if !kept(grid, q) {
                continue;
            }
            let (ip, iq) = (at(p), at(q));
            let mut transport = Complex64::new(0.0, 0.0);
            for j in 0..3 {
                transport += hat[j][ip] * Complex64::new(0.0, q[j] as f64);
            }
            for i in 0..3 {
                conv[i] += transport * hat[i][iq];
            }
        }
        let k2: f64 = k.iter().map(|&x| (x * x) as f64).sum();
        let idx = at(k);
        for i in 0..3 {
            let mut v = conv[i];
            if k2 > 0.0 {
                for j in 0..3 {
                    v -= conv[j] * ((k[i] * k[j]) as f64 / k2);
                }
            }
            out[i][idx] = -v;
        }
    }
    out
}
