//! Numerical laboratory for the two anisotropic interpolation inequalities:
//!
//! * mixed-norm Gagliardo-Nirenberg type:
//!   `‖f‖_{L^{p'}_{x1} L^{q'}_{x2} L^{r'}_{x3}} ≤ C ‖∂₁f‖^{1/p} ‖∂₂f‖^{1/q} ‖∂₃f‖^{1/r} ‖f‖^{1−s}`
//!   with `p' = 2p/(p−2)` and all right-hand norms in `L²`;
//! * directional Sobolev:
//!   `‖φ‖_{L^μ} ≤ C ‖∂₁φ‖_{L^θ}^{1/3} ‖∂₂φ‖_{L^λ}^{1/3} ‖∂₃φ‖_{L^κ}^{1/3}`
//!   with `1 + 3/μ = 1/θ + 1/λ + 1/κ`.
//!
//! Both are stated for compactly supported functions on `ℝ³`; on the torus
//! they fail for constants, so every test function here vanishes, together
//! with its gradient, well inside the cell. Constants are only ever
//! estimated (as the sup of observed ratios), never asserted.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::{Axis, Grid3};
use crate::math;
use crate::mixed_norm::{mixed_norm, Exponent, MixedExponents};
use crate::spectral::{differentiate, Transform};

pub use crate::mixed_norm::lp_norm;

/// A derivative norm below this fraction of `‖f‖_{L²}` counts as zero.
pub const DEGENERATE_TOL: f64 = 1e-13;

/// Exponents `(θ, λ, κ)` and the derived `μ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma2Exponents {
    theta: f64,
    lambda: f64,
    kappa: f64,
    mu: f64,
}

impl Lemma2Exponents {
    pub fn new(theta: f64, lambda: f64, kappa: f64) -> Result<Self> {
        for (name, v) in [("theta", theta), ("lambda", lambda), ("kappa", kappa)] {
            if !(v >= 1.0 && v.is_finite()) {
                return Err(Error::InvalidExponent(format!(
                    "{name} = {v}: need 1 <= {name} < inf"
                )));
            }
        }
        let sum = 1.0 / theta + 1.0 / lambda + 1.0 / kappa;
        if sum <= 1.0 {
            return Err(Error::InvalidExponent(format!(
                "1/theta + 1/lambda + 1/kappa = {sum} must exceed 1"
            )));
        }
        let mu = 3.0 / (sum - 1.0);
        Ok(Self {
            theta,
            lambda,
            kappa,
            mu,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// Both sides of one inequality evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioSample {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

fn derivative_fields(f: &ScalarField) -> [ScalarField; 3] {
    let grid = f.grid();
    let t = Transform::new(grid);
    let base = t.forward(f);
    let mut specs: [Vec<_>; 3] = core::array::from_fn(|_| base.coeffs().to_vec());
    for (axis, s) in Axis::ALL.iter().zip(specs.iter_mut()) {
        differentiate(grid, s, *axis);
    }
    let mut real = t
        .inverse_many(&[&specs[0], &specs[1], &specs[2]])
        .into_iter()
        .map(|v| ScalarField::new(grid, v));
    core::array::from_fn(|_| real.next().expect("three derivatives").expect("finite derivative"))
}

fn check_derivative(norm: f64, f_norm: f64, axis: usize) -> Result<()> {
    if norm < DEGENERATE_TOL * f_norm {
        return Err(Error::Degenerate(format!(
            "derivative along x{axis} vanishes (f is constant along that axis)"
        )));
    }
    Ok(())
}

/// `LHS / RHS` of the mixed-norm interpolation inequality, with both sides.
pub fn lemma1_sides(f: &ScalarField, exps: &MixedExponents) -> Result<RatioSample> {
    let f_norm = f.l2_norm();
    if f_norm == 0.0 {
        return Err(Error::Degenerate("f is identically zero".into()));
    }
    let powers = [exps.p().reciprocal(), exps.q().reciprocal(), exps.r().reciprocal()];
    let mut rhs = math::powf(f_norm, 1.0 - exps.reciprocal_sum());
    if powers.iter().any(|&e| e > 0.0) {
        let derivs = derivative_fields(f);
        for (i, (d, &e)) in derivs.iter().zip(&powers).enumerate() {
            if e > 0.0 {
                let n = d.l2_norm();
                check_derivative(n, f_norm, i + 1)?;
                rhs *= math::powf(n, e);
            }
        }
    }
    let (pc, qc, rc) = exps.conjugates();
    let lhs = mixed_norm(f, pc, qc, rc)?;
    Ok(RatioSample {
        lhs,
        rhs,
        ratio: lhs / rhs,
    })
}

pub fn lemma1_ratio(f: &ScalarField, exps: &MixedExponents) -> Result<f64> {
    lemma1_sides(f, exps).map(|s| s.ratio)
}

/// `LHS / RHS` of the directional Sobolev inequality, with both sides.
pub fn lemma2_sides(phi: &ScalarField, exps: &Lemma2Exponents) -> Result<RatioSample> {
    let phi_norm = phi.l2_norm();
    if phi_norm == 0.0 {
        return Err(Error::Degenerate("phi is identically zero".into()));
    }
    let derivs = derivative_fields(phi);
    let mut rhs = 1.0;
    for (i, (d, e)) in derivs
        .iter()
        .zip([exps.theta, exps.lambda, exps.kappa])
        .enumerate()
    {
        check_derivative(d.l2_norm(), phi_norm, i + 1)?;
        rhs *= math::powf(lp_norm(d, Exponent::finite(e)?)?, 1.0 / 3.0);
    }
    let lhs = lp_norm(phi, Exponent::finite(exps.mu)?)?;
    Ok(RatioSample {
        lhs,
        rhs,
        ratio: lhs / rhs,
    })
}

pub fn lemma2_ratio(phi: &ScalarField, exps: &Lemma2Exponents) -> Result<f64> {
    lemma2_sides(phi, exps).map(|s| s.ratio)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TestFunctionKind {
    /// Anisotropic Gaussian, negligible (< 1e-13) beyond eight widths.
    GaussianBump,
    /// `(1 − ρ²)⁸` on an anisotropic ellipsoid.
    PolynomialBump,
    /// Product of one-dimensional `(1 − t²)⁸` bumps.
    Separable,
    /// Smooth compactly supported envelope times a band-limited random
    /// field; support radius drawn from `[π/4, radius]`.
    RandomBump,
}

impl TestFunctionKind {
    pub fn name(self) -> &'static str {
        match self {
            TestFunctionKind::GaussianBump => "gaussian-bump",
            TestFunctionKind::PolynomialBump => "polynomial-bump",
            TestFunctionKind::Separable => "separable",
            TestFunctionKind::RandomBump => "random-bump",
        }
    }
}

impl fmt::Display for TestFunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian-bump" | "gaussian" => Ok(TestFunctionKind::GaussianBump),
            "polynomial-bump" | "polynomial" => Ok(TestFunctionKind::PolynomialBump),
            "separable" => Ok(TestFunctionKind::Separable),
            "random-bump" | "random" => Ok(TestFunctionKind::RandomBump),
            other => Err(Error::InvalidConfig(format!("unknown test function kind {other:?}"))),
        }
    }
}

/// A seeded family of boundary-vanishing test functions. Sample `i` of the
/// family depends only on `(kind, radius, seed, amplitude, i)`, never on the
/// grid, so the same function can be evaluated at several resolutions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunctionSpec {
    pub kind: TestFunctionKind,
    /// Support radius, `< π`.
    pub radius: f64,
    pub seed: u64,
    pub amplitude: f64,
}

const BUMP_POWER: i32 = 8;
const GAUSSIAN_WIDTHS: f64 = 8.0;

impl TestFunctionSpec {
    pub fn new(kind: TestFunctionKind, seed: u64) -> Self {
        let radius = match kind {
            TestFunctionKind::GaussianBump => 3.1,
            TestFunctionKind::PolynomialBump | TestFunctionKind::Separable => 2.5,
            TestFunctionKind::RandomBump => 0.75 * PI,
        };
        Self {
            kind,
            radius,
            seed,
            amplitude: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius < PI) {
            return Err(Error::InvalidConfig(format!(
                "support radius {} must lie in (0, pi)",
                self.radius
            )));
        }
        if self.kind == TestFunctionKind::RandomBump && self.radius < PI / 4.0 {
            return Err(Error::InvalidConfig(format!(
                "random-bump radius {} must be at least pi/4",
                self.radius
            )));
        }
        if self.amplitude == 0.0 || !self.amplitude.is_finite() {
            return Err(Error::InvalidConfig(format!("invalid amplitude {}", self.amplitude)));
        }
        Ok(())
    }

    fn rng(&self, sample: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sample as u64);
        rng
    }

    /// Draws the analytic description of sample `sample`.
    pub fn function(&self, sample: usize) -> Result<TestFunction> {
        self.validate()?;
        let mut rng = self.rng(sample);
        let mut center = [PI; 3];
        let shape = match self.kind {
            TestFunctionKind::GaussianBump => {
                let mut sigma = [0.0; 3];
                for i in 0..3 {
                    sigma[i] = self.radius / GAUSSIAN_WIDTHS * rng.random_range(0.95..=1.0);
                    let margin = PI - GAUSSIAN_WIDTHS * sigma[i];
                    center[i] += rng.random_range(-margin..=margin);
                }
                Shape::Gaussian { sigma }
            }
            TestFunctionKind::PolynomialBump | TestFunctionKind::Separable => {
                let mut radii = [0.0; 3];
                for i in 0..3 {
                    radii[i] = self.radius * rng.random_range(0.6..=1.0);
                    let margin = PI - radii[i];
                    center[i] += rng.random_range(-margin..=margin);
                }
                if self.kind == TestFunctionKind::Separable {
                    Shape::Separable { radii }
                } else {
                    Shape::Polynomial { radii }
                }
            }
            TestFunctionKind::RandomBump => {
                let radius = rng.random_range(PI / 4.0..=self.radius);
                let margin = PI - radius;
                for c in center.iter_mut() {
                    *c += rng.random_range(-margin..=margin);
                }
                let mut modes = [(0i32, 0i32, 0i32, 0.0f64, 0.0f64); RANDOM_MODES];
                for m in modes.iter_mut() {
                    *m = (
                        rng.random_range(-3..=3),
                        rng.random_range(-3..=3),
                        rng.random_range(-3..=3),
                        rng.random_range(-0.4..=0.4),
                        rng.random_range(0.0..2.0 * PI),
                    );
                }
                Shape::Random { radius, modes }
            }
        };
        Ok(TestFunction {
            amplitude: self.amplitude,
            center,
            shape,
        })
    }

    /// Sample `sample` on `grid`.
    pub fn sample(&self, grid: Grid3, sample: usize) -> Result<ScalarField> {
        self.function(sample)?.on_grid(grid)
    }
}

const RANDOM_MODES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Shape {
    Gaussian { sigma: [f64; 3] },
    Polynomial { radii: [f64; 3] },
    Separable { radii: [f64; 3] },
    Random {
        radius: f64,
        modes: [(i32, i32, i32, f64, f64); RANDOM_MODES],
    },
}

/// Closed-form test function drawn from a [`TestFunctionSpec`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    amplitude: f64,
    center: [f64; 3],
    shape: Shape,
}

fn bump(t2: f64) -> f64 {
    if t2 >= 1.0 {
        0.0
    } else {
        let b = 1.0 - t2;
        let mut out = 1.0;
        for _ in 0..BUMP_POWER {
            out *= b;
        }
        out
    }
}

/// `exp(1 − 1/(1 − ρ²))`, smooth with all derivatives vanishing at `ρ = 1`.
fn mollifier(rho2: f64) -> f64 {
    if rho2 >= 1.0 {
        0.0
    } else {
        math::exp(1.0 - 1.0 / (1.0 - rho2))
    }
}

impl TestFunction {
    pub fn eval(&self, x: [f64; 3]) -> f64 {
        let d = [x[0] - self.center[0], x[1] - self.center[1], x[2] - self.center[2]];
        let value = match &self.shape {
            Shape::Gaussian { sigma } => {
                let q: f64 = (0..3).map(|i| d[i] * d[i] / (2.0 * sigma[i] * sigma[i])).sum();
                math::exp(-q)
            }
            Shape::Polynomial { radii } => {
                bump((0..3).map(|i| (d[i] / radii[i]) * (d[i] / radii[i])).sum())
            }
            Shape::Separable { radii } => (0..3)
                .map(|i| bump((d[i] / radii[i]) * (d[i] / radii[i])))
                .product(),
            Shape::Random { radius, modes } => {
                let rho2 = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / (radius * radius);
                let env = mollifier(rho2);
                if env == 0.0 {
                    0.0
                } else {
                    let field: f64 = modes
                        .iter()
                        .map(|&(k1, k2, k3, a, phase)| {
                            a * math::cos(k1 as f64 * x[0] + k2 as f64 * x[1] + k3 as f64 * x[2] + phase)
                        })
                        .sum();
                    env * (1.0 + field)
                }
            }
        };
        self.amplitude * value
    }

    pub fn on_grid(&self, grid: Grid3) -> Result<ScalarField> {
        ScalarField::from_fn(grid, |a, b, c| self.eval([a, b, c]))
    }
}

/// Which inequality to evaluate, with its exponents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Suite {
    Lemma1(MixedExponents),
    Lemma2(Lemma2Exponents),
}

impl Suite {
    pub fn evaluate(&self, f: &ScalarField) -> Result<RatioSample> {
        match self {
            Suite::Lemma1(e) => lemma1_sides(f, e),
            Suite::Lemma2(e) => lemma2_sides(f, e),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lemma1(_) => "lemma1",
            Suite::Lemma2(_) => "lemma2",
        }
    }

    /// Key under which empirical constants are reported.
    pub fn label(&self) -> String {
        match self {
            Suite::Lemma1(e) => format!("lemma1(p={},q={},r={})", e.p(), e.q(), e.r()),
            Suite::Lemma2(e) => format!(
                "lemma2(theta={},lambda={},kappa={},mu={})",
                e.theta, e.lambda, e.kappa, e.mu
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioRow {
    pub sample: usize,
    pub grid: Grid3,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Per-sample ratios and the empirical constant of one family run.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport {
    pub family: String,
    pub samples: usize,
    pub grids: Vec<Grid3>,
    /// Grid-major, then sample index.
    pub rows: Vec<RatioRow>,
    /// Sup of the ratios on each grid, in `grids` order.
    pub sup_by_grid: Vec<f64>,
    /// Sup on the last (finest) grid: the empirical constant.
    pub sup: f64,
    /// `|sup_last − sup_first| / sup_first` when more than one grid ran.
    pub drift: Option<f64>,
}

/// Evaluates `samples` members of `spec` on every grid.
pub fn run_family(spec: &TestFunctionSpec, suite: &Suite, samples: usize, grids: &[Grid3]) -> Result<RatioReport> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    if grids.is_empty() {
        return Err(Error::InvalidConfig("at least one grid is required".into()));
    }
    spec.validate()?;
    let functions = (0..samples)
        .map(|i| spec.function(i))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(samples * grids.len());
    let mut sup_by_grid = Vec::with_capacity(grids.len());
    for &grid in grids {
        let mut sup = 0.0f64;
        for (sample, tf) in functions.iter().enumerate() {
            let wrap = |e: Error| Error::Sample {
                index: sample,
                source: alloc::boxed::Box::new(e),
            };
            let f = tf.on_grid(grid).map_err(wrap)?;
            let s = suite.evaluate(&f).map_err(wrap)?;
            if !(s.ratio.is_finite() && s.ratio > 0.0) {
                return Err(wrap(Error::Degenerate(format!("ratio {} is not finite and positive", s.ratio))));
            }
            sup = sup.max(s.ratio);
            rows.push(RatioRow {
                sample,
                grid,
                lhs: s.lhs,
                rhs: s.rhs,
                ratio: s.ratio,
            });
        }
        sup_by_grid.push(sup);
    }
    let sup = *sup_by_grid.last().expect("at least one grid");
    let drift = (grids.len() > 1).then(|| math::abs(sup - sup_by_grid[0]) / sup_by_grid[0]);
    Ok(RatioReport {
        family: format!("{}:{}:seed={}", suite.label(), spec.kind, spec.seed),
        samples,
        grids: grids.to_vec(),
        rows,
        sup_by_grid,
        sup,
        drift,
    })
}
