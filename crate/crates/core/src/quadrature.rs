//! Running time integrals over sampled series.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

fn check_times(times: &[f64], values: &[f64]) -> Result<()> {
    if times.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: times.len(),
            found: values.len(),
        });
    }
    for i in 1..times.len() {
        if !(times[i] >= times[i - 1]) {
            return Err(Error::NonMonotoneTimes { index: i });
        }
    }
    Ok(())
}

/// Cumulative trapezoid `∫_{t₀}^{tᵢ} g dt` at every sample.
pub fn cumulative_trapezoid(times: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    check_times(times, values)?;
    let mut out = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    for i in 0..times.len() {
        if i > 0 {
            acc += 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Integral over `[times[i], times[i+1]]` of the cubic through four
/// neighbouring samples, one entry per interval. Falls back to the
/// trapezoid when fewer than four samples exist. Fourth-order accurate on
/// smooth integrands, any spacing.
pub fn interval_integrals_cubic(times: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    check_times(times, values)?;
    let n = times.len();
    if n < 2 {
        return Ok(Vec::new());
    }
    if n < 4 {
        return Ok((0..n - 1)
            .map(|i| 0.5 * (times[i + 1] - times[i]) * (values[i] + values[i + 1]))
            .collect());
    }
    // Two-point Gauss-Legendre is exact for cubics.
    let gauss = 0.5 / libm::sqrt(3.0);
    let mut out = vec![0.0; n - 1];
    for (i, slot) in out.iter_mut().enumerate() {
        let start = i.saturating_sub(1).min(n - 4);
        let nodes = &times[start..start + 4];
        let ys = &values[start..start + 4];
        let (a, b) = (times[i], times[i + 1]);
        let width = b - a;
        if width == 0.0 {
            continue;
        }
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for x in [mid - gauss * width, mid + gauss * width] {
            sum += lagrange(nodes, ys, x);
        }
        *slot = 0.5 * width * sum;
    }
    Ok(out)
}

fn lagrange(nodes: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut total = 0.0;
    for (j, (&xj, &yj)) in nodes.iter().zip(ys).enumerate() {
        let mut basis = 1.0;
        for (m, &xm) in nodes.iter().enumerate() {
            if m != j {
                basis *= (x - xm) / (xj - xm);
            }
        }
        total += yj * basis;
    }
    total
}

/// Running sum of [`interval_integrals_cubic`], starting at zero.
pub fn cumulative_cubic(times: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    let parts = interval_integrals_cubic(times, values)?;
    let mut out = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    if !times.is_empty() {
        out.push(0.0);
    }
    for p in parts {
        acc += p;
        out.push(acc);
    }
    Ok(out)
}
