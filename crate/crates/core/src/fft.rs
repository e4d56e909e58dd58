//! Complex FFTs for the 3D transforms.
//!
//! Power-of-two lengths use an iterative radix-2 Cooley-Tukey kernel; any
//! other length goes through Bluestein's chirp-z algorithm on top of a
//! power-of-two kernel. Transforms are unnormalized; the caller scales.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math;

#[derive(Clone, Debug)]
struct Radix2 {
    n: usize,
    /// `exp(-2πi k / n)` for `k < n/2`.
    twiddles: Vec<Complex64>,
    bit_reverse: Vec<usize>,
}

impl Radix2 {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let twiddles = (0..n / 2)
            .map(|k| unit_root(k as f64 / n as f64))
            .collect();
        let bits = n.trailing_zeros();
        let bit_reverse = (0..n)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (usize::BITS - bits)
                }
            })
            .collect();
        Self {
            n,
            twiddles,
            bit_reverse,
        }
    }

    /// In-place forward transform, `X_k = Σ x_j exp(-2πi jk/n)`.
    fn forward(&self, data: &mut [Complex64]) {
        let n = self.n;
        debug_assert_eq!(data.len(), n);
        for i in 0..n {
            let j = self.bit_reverse[i];
            if j > i {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

impl Radix2 {
    /// Forward transforms of `count` interleaved sequences: element `j` of
    /// sequence `c` sits at `data[j * stride + c]`. Butterflies sweep whole
    /// rows of `count` contiguous values, which keeps strided axes in cache.
    fn forward_rows(&self, data: &mut [Complex64], stride: usize, count: usize) {
        let n = self.n;
        for i in 0..n {
            let j = self.bit_reverse[i];
            if j > i {
                let (lo, hi) = data.split_at_mut(j * stride);
                lo[i * stride..i * stride + count].swap_with_slice(&mut hi[..count]);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let tw_stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * tw_stride];
                    let top = (start + k) * stride;
                    let bottom = (start + k + half) * stride;
                    let (lo, hi) = data.split_at_mut(bottom);
                    let a_row = &mut lo[top..top + count];
                    let b_row = &mut hi[..count];
                    for (a, b) in a_row.iter_mut().zip(b_row.iter_mut()) {
                        let t = *b * w;
                        *b = *a - t;
                        *a += t;
                    }
                }
            }
            len <<= 1;
        }
    }
}

/// `exp(-2πi x)` with the argument reduced to keep `sin`/`cos` accurate.
fn unit_root(x: f64) -> Complex64 {
    let angle = -2.0 * PI * x;
    Complex64::new(math::cos(angle), math::sin(angle))
}

#[derive(Clone, Debug)]
struct Bluestein {
    n: usize,
    inner: Radix2,
    /// `exp(-iπ j²/n)` for `j < n`.
    chirp: Vec<Complex64>,
    /// Forward transform of the padded conjugate chirp, pre-divided by the
    /// inner length so the convolution needs no extra scaling.
    kernel: Vec<Complex64>,
}

impl Bluestein {
    fn new(n: usize) -> Self {
        let m = (2 * n - 1).next_power_of_two();
        let inner = Radix2::new(m);
        let two_n = 2 * n as u128;
        let chirp: Vec<Complex64> = (0..n)
            .map(|j| {
                // j² mod 2n keeps the phase argument small.
                let jj = (j as u128 * j as u128) % two_n;
                unit_root(jj as f64 / two_n as f64)
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for j in 1..n {
            kernel[j] = chirp[j].conj();
            kernel[m - j] = chirp[j].conj();
        }
        inner.forward(&mut kernel);
        let scale = 1.0 / m as f64;
        for c in kernel.iter_mut() {
            *c *= scale;
        }
        Self {
            n,
            inner,
            chirp,
            kernel,
        }
    }

    fn forward(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        let m = self.inner.n;
        scratch.clear();
        scratch.resize(m, Complex64::new(0.0, 0.0));
        for j in 0..self.n {
            scratch[j] = data[j] * self.chirp[j];
        }
        self.inner.forward(scratch);
        for (s, k) in scratch.iter_mut().zip(&self.kernel) {
            *s = (*s * k).conj();
        }
        // Inverse via conjugation; the 1/m factor already sits in `kernel`.
        self.inner.forward(scratch);
        for k in 0..self.n {
            data[k] = scratch[k].conj() * self.chirp[k];
        }
    }
}

#[derive(Clone, Debug)]
enum Kernel {
    Radix2(Radix2),
    Bluestein(Bluestein),
}

/// Plan for one-dimensional complex transforms of a fixed length.
#[derive(Clone, Debug)]
pub struct Fft1 {
    kernel: Kernel,
    len: usize,
}

impl Fft1 {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "FFT length must be positive");
        let kernel = if len.is_power_of_two() {
            Kernel::Radix2(Radix2::new(len))
        } else {
            Kernel::Bluestein(Bluestein::new(len))
        };
        Self { kernel, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalized forward transform with kernel `exp(-2πi jk/n)`.
    pub fn forward(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        assert_eq!(data.len(), self.len);
        match &self.kernel {
            Kernel::Radix2(k) => k.forward(data),
            Kernel::Bluestein(k) => k.forward(data, scratch),
        }
    }

    /// Unnormalized inverse transform with kernel `exp(+2πi jk/n)`.
    pub fn inverse(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        for c in data.iter_mut() {
            *c = c.conj();
        }
        self.forward(data, scratch);
        for c in data.iter_mut() {
            *c = c.conj();
        }
    }
}

/// Separable 3D transform over an `n1 × n2 × n3` array stored x1-fastest.
#[derive(Clone, Debug)]
pub struct Fft3 {
    dims: [usize; 3],
    plans: [Fft1; 3],
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Inverse,
}

impl Fft3 {
    pub fn new(dims: [usize; 3]) -> Self {
        Self {
            dims,
            plans: [Fft1::new(dims[0]), Fft1::new(dims[1]), Fft1::new(dims[2])],
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, Direction::Forward);
    }

    /// Unnormalized inverse transform in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, Direction::Inverse);
    }

    fn run(&self, data: &mut [Complex64], dir: Direction) {
        let [n1, n2, n3] = self.dims;
        assert_eq!(data.len(), n1 * n2 * n3);
        // The inverse is the conjugated forward transform of the conjugate.
        if dir == Direction::Inverse {
            conjugate(data);
        }
        let mut scratch = Vec::new();

        for line in data.chunks_exact_mut(n1) {
            self.plans[0].forward(line, &mut scratch);
        }
        let plane = n1 * n2;
        for slab in data.chunks_exact_mut(plane) {
            self.strided(1, slab, n1, n1, &mut scratch);
        }
        self.strided(2, data, plane, plane, &mut scratch);

        if dir == Direction::Inverse {
            conjugate(data);
        }
    }

    /// Forward transforms along axis `axis` of the `count` interleaved
    /// sequences in `data` with element stride `stride`.
    fn strided(&self, axis: usize, data: &mut [Complex64], stride: usize, count: usize, scratch: &mut Vec<Complex64>) {
        let plan = &self.plans[axis];
        match &plan.kernel {
            Kernel::Radix2(k) => k.forward_rows(data, stride, count),
            Kernel::Bluestein(_) => {
                let n = plan.len;
                let mut line = vec![Complex64::new(0.0, 0.0); n];
                for c in 0..count {
                    for (j, v) in line.iter_mut().enumerate() {
                        *v = data[j * stride + c];
                    }
                    plan.forward(&mut line, scratch);
                    for (j, v) in line.iter().enumerate() {
                        data[j * stride + c] = *v;
                    }
                }
            }
        }
    }
}

fn conjugate(data: &mut [Complex64]) {
    for c in data.iter_mut() {
        c.im = -c.im;
    }
}
