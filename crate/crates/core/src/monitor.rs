//! Regularity diagnostics along a trajectory.
//!
//! For every sampled state the monitor records energy-type norms, the
//! mixed norm of `|∂₃u|`, the criterion integrand
//! `‖|∂₃u|‖^β_{L^p_{x1}L^q_{x2}L^r_{x3}} / (1 + ln(‖∂₃u‖_{L²} + e))`
//! and its running time integral, the log-energy `F = ln(‖∂₃u‖² + e)`, and
//! the two trilinear terms driving the `‖∂₃u‖` and `‖∇u‖` estimates.
//!
//! The constant-free steps of those estimates (the Hölder split of the
//! `∂₃u` trilinear term, and the `L³` interpolation between `L²` and `L⁶`)
//! are audited exactly. Steps that carry an unknown constant are only
//! reported as ratios.

use alloc::vec::Vec;
use core::f64::consts::E;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ScalarField, SpectralField, VectorField};
use crate::grid::{Axis, Grid3};
use crate::math;
use crate::mixed_norm::{lp_norm, mixed_norm, Exponent, MixedExponents};
use crate::quadrature;
use crate::solver::SolverState;
use crate::spectral::{differentiate, Transform};

/// Relative slack granted to the constant-free audits.
pub const AUDIT_SLACK: f64 = 1e-10;
/// Relative slack of the energy inequality, as a fraction of `E(0)`.
pub const ENERGY_SLACK: f64 = 1e-6;

/// Hölder step of the `∂₃u` estimate.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Audit24 {
    /// `|∫ ∂₃u·∇u·∂₃u|`.
    pub a: f64,
    /// `‖∂₃u‖_{(p,q,r)} ‖∂₃u‖_{(p',q',r')} ‖∇u‖_{L²}`.
    pub b: f64,
    /// Bound after substituting the mixed-norm interpolation inequality:
    /// `‖∂₃u‖_{(p,q,r)} ‖∂₁∂₃u‖^{1/p} ‖∂₂∂₃u‖^{1/q} ‖∂₃∂₃u‖^{1/r} ‖∂₃u‖^{1−s} ‖∇u‖`.
    pub c: f64,
    /// `a ≤ b·(1 + AUDIT_SLACK)`.
    pub holds: bool,
}

impl Audit24 {
    /// `a / c`, the constant this step needs; `None` when `c = 0`.
    pub fn constant_ratio(&self) -> Option<f64> {
        (self.c > 0.0).then(|| self.a / self.c)
    }
}

/// Interpolation step of the `‖∇u‖` estimate.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Audit210 {
    /// `∫ (u·∇)u·Δu`.
    pub h1_trilinear: f64,
    /// `‖∇u‖³_{L³}`.
    pub lhs: f64,
    /// `‖∇u‖^{3/2}_{L²} ‖∇u‖^{3/2}_{L⁶}`.
    pub rhs: f64,
    /// `‖∇u‖_{L⁶}`.
    pub l6: f64,
    /// `∏ᵢ ‖∇∂ᵢu‖^{1/2}_{L²}`.
    pub sobolev_product: f64,
    /// `lhs ≤ rhs·(1 + AUDIT_SLACK)`.
    pub holds: bool,
}

impl Audit210 {
    /// `|∫(u·∇)u·Δu| / ‖∇u‖³_{L³}`.
    pub fn trilinear_ratio(&self) -> Option<f64> {
        (self.lhs > 0.0).then(|| math::abs(self.h1_trilinear) / self.lhs)
    }

    /// `‖∇u‖_{L⁶}^{3/2} / ∏ᵢ‖∇∂ᵢu‖^{1/2}`.
    pub fn sobolev_ratio(&self) -> Option<f64> {
        (self.sobolev_product > 0.0).then(|| math::powf(self.l6, 1.5) / self.sobolev_product)
    }
}

/// One sampled instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonitorRecord {
    pub t: f64,
    /// `‖u‖²_{L²}`.
    pub energy: f64,
    /// `‖∇u‖²_{L²}`.
    pub grad_sq: f64,
    /// `‖∂₃u‖²_{L²}`.
    pub d3u_sq: f64,
    /// `‖∇∂₃u‖²_{L²}`.
    pub grad_d3u_sq: f64,
    /// Mixed `(p, q, r)` norm of the pointwise magnitude `|∂₃u|`.
    pub mixed: f64,
    /// `∞` in sup mode.
    pub beta: f64,
    /// Criterion integrand; in sup mode the mixed norm itself.
    pub integrand: f64,
    /// Trapezoid time integral of `integrand`; running max in sup mode.
    pub cumulative: f64,
    /// `ln(‖∂₃u‖² + e)`.
    pub log_energy: f64,
    /// `−∫ ∂₃u·∇u·∂₃u`.
    pub trilinear: f64,
    /// `∫ (u·∇)u·Δu`.
    pub h1_trilinear: f64,
    pub audit24: Audit24,
    pub audit210: Audit210,
}

/// Whether the criterion is integrated in time or tracked as a sup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionMode {
    Integral,
    /// `β = ∞`: running sup of the mixed norm.
    Sup,
}

impl CriterionMode {
    pub fn name(self) -> &'static str {
        match self {
            CriterionMode::Integral => "integral",
            CriterionMode::Sup => "sup",
        }
    }
}

/// Every quantity derived from one velocity field.
struct Diagnostics {
    grid: Grid3,
    u: [Vec<f64>; 3],
    /// `grad[i][j] = ∂ⱼuᵢ`.
    grad: [[Vec<f64>; 3]; 3],
    lap: [Vec<f64>; 3],
    /// `‖∂ⱼ∂₃u‖²` per `j`.
    d3_parts: [f64; 3],
    /// `‖∇∂ⱼu‖²` per `j`.
    hessian_parts: [f64; 3],
}

fn wavenumbers(grid: Grid3, idx: usize) -> [f64; 3] {
    let (j1, j2, j3) = grid.unravel(idx);
    [
        grid.derivative_wavenumber(Axis::X1, j1),
        grid.derivative_wavenumber(Axis::X2, j2),
        grid.derivative_wavenumber(Axis::X3, j3),
    ]
}

impl Diagnostics {
    fn from_velocity(t: &Transform, u: &VectorField) -> Self {
        let [a, b, c] = u.components();
        let spec = t.forward_many(&[a.values(), b.values(), c.values()]);
        let mut it = spec.into_iter();
        let hat: [Vec<Complex64>; 3] = core::array::from_fn(|_| it.next().expect("three components"));
        Self::from_parts(t, u, &hat)
    }

    fn from_state(t: &Transform, state: &SolverState) -> Self {
        let hat: [Vec<Complex64>; 3] = core::array::from_fn(|i| state.spectrum()[i].coeffs().to_vec());
        Self::from_parts(t, state.velocity(), &hat)
    }

    fn from_parts(t: &Transform, u: &VectorField, hat: &[Vec<Complex64>; 3]) -> Self {
        let grid = t.grid();
        let mut grads: Vec<Vec<Complex64>> = Vec::with_capacity(12);
        for comp in hat {
            for axis in Axis::ALL {
                let mut d = comp.clone();
                differentiate(grid, &mut d, axis);
                grads.push(d);
            }
        }
        for comp in hat {
            let lap: Vec<Complex64> = comp
                .iter()
                .enumerate()
                .map(|(idx, c)| {
                    let k = wavenumbers(grid, idx);
                    c * -(k[0] * k[0] + k[1] * k[1] + k[2] * k[2])
                })
                .collect();
            grads.push(lap);
        }
        // The ∂₃u spectra are paired only with each other: pairing packs two
        // spectra as x + iy, and rounding in a nonzero partner would leak into
        // a ∂₃u that is exactly zero.
        let is_d3 = |k: usize| k < 9 && k % 3 == 2;
        let d3_refs: Vec<&[Complex64]> = (0..12).filter(|&k| is_d3(k)).map(|k| grads[k].as_slice()).collect();
        let rest_refs: Vec<&[Complex64]> = (0..12).filter(|&k| !is_d3(k)).map(|k| grads[k].as_slice()).collect();
        let mut d3_real = t.inverse_many(&d3_refs).into_iter();
        let mut rest_real = t.inverse_many(&rest_refs).into_iter();
        let mut real = (0..12).map(|k| {
            if is_d3(k) {
                d3_real.next().expect("three x3 derivatives")
            } else {
                rest_real.next().expect("nine other fields")
            }
        });
        let grad: [[Vec<f64>; 3]; 3] =
            core::array::from_fn(|_| core::array::from_fn(|_| real.next().expect("nine gradients")));
        let lap: [Vec<f64>; 3] = core::array::from_fn(|_| real.next().expect("three laplacians"));

        let mut d3_parts = [0.0; 3];
        let mut hessian_parts = [0.0; 3];
        for idx in 0..grid.len() {
            let k = wavenumbers(grid, idx);
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            let amp: f64 = hat.iter().map(|c| c[idx].norm_sqr()).sum();
            for j in 0..3 {
                let kj2 = k[j] * k[j];
                d3_parts[j] += kj2 * k[2] * k[2] * amp;
                hessian_parts[j] += k2 * kj2 * amp;
            }
        }
        let vol = grid.volume();
        for j in 0..3 {
            d3_parts[j] *= vol;
            hessian_parts[j] *= vol;
        }
        let comps = u.components();
        Self {
            grid,
            u: core::array::from_fn(|i| comps[i].values().to_vec()),
            grad,
            lap,
            d3_parts,
            hessian_parts,
        }
    }

    fn dv(&self) -> f64 {
        self.grid.cell_volume()
    }

    fn energy(&self) -> f64 {
        self.u.iter().flat_map(|c| c.iter()).map(|v| v * v).sum::<f64>() * self.dv()
    }

    fn grad_sq(&self) -> f64 {
        self.grad
            .iter()
            .flat_map(|row| row.iter())
            .flat_map(|c| c.iter())
            .map(|v| v * v)
            .sum::<f64>()
            * self.dv()
    }

    fn d3u_sq(&self) -> f64 {
        (0..3)
            .map(|i| self.grad[i][2].iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>()
            * self.dv()
    }

    /// Pointwise `|∂₃u|`.
    fn d3u_magnitude(&self) -> ScalarField {
        let n = self.grid.len();
        let values = (0..n)
            .map(|p| {
                let (a, b, c) = (self.grad[0][2][p], self.grad[1][2][p], self.grad[2][2][p]);
                math::sqrt(a * a + b * b + c * c)
            })
            .collect();
        ScalarField::from_vec_unchecked(self.grid, values)
    }

    /// Pointwise Frobenius norm `|∇u|`.
    fn grad_magnitude(&self) -> ScalarField {
        let n = self.grid.len();
        let values = (0..n)
            .map(|p| {
                let mut s = 0.0;
                for row in &self.grad {
                    for c in row {
                        s += c[p] * c[p];
                    }
                }
                math::sqrt(s)
            })
            .collect();
        ScalarField::from_vec_unchecked(self.grid, values)
    }

    /// `−Σᵢⱼ ∫ (∂₃uᵢ)(∂ᵢuⱼ)(∂₃uⱼ)`.
    fn trilinear(&self) -> f64 {
        let n = self.grid.len();
        let mut acc = 0.0;
        for p in 0..n {
            for i in 0..3 {
                let d3i = self.grad[i][2][p];
                for j in 0..3 {
                    acc += d3i * self.grad[j][i][p] * self.grad[j][2][p];
                }
            }
        }
        -acc * self.dv()
    }

    /// `Σᵢ ∫ (Σⱼ uⱼ ∂ⱼuᵢ) Δuᵢ`.
    fn h1_trilinear(&self) -> f64 {
        let n = self.grid.len();
        let mut acc = 0.0;
        for p in 0..n {
            for i in 0..3 {
                let adv: f64 = (0..3).map(|j| self.u[j][p] * self.grad[i][j][p]).sum();
                acc += adv * self.lap[i][p];
            }
        }
        acc * self.dv()
    }

    fn audit24(&self, exps: &MixedExponents, d3mag: &ScalarField, mixed: f64, trilinear: f64) -> Result<Audit24> {
        if d3mag.max_abs() == 0.0 {
            return Ok(Audit24 {
                holds: true,
                ..Audit24::default()
            });
        }
        let grad_l2 = math::sqrt(self.grad_sq());
        let (pc, qc, rc) = exps.conjugates();
        let conj = mixed_norm(d3mag, pc, qc, rc)?;
        let a = math::abs(trilinear);
        let b = mixed * conj * grad_l2;
        let powers = [exps.p().reciprocal(), exps.q().reciprocal(), exps.r().reciprocal()];
        let mut c = mixed * grad_l2 * math::powf(math::sqrt(self.d3u_sq()), 1.0 - exps.reciprocal_sum());
        for (part, e) in self.d3_parts.iter().zip(powers) {
            c *= math::powf(math::sqrt(*part), e);
        }
        Ok(Audit24 {
            a,
            b,
            c,
            holds: a <= b * (1.0 + AUDIT_SLACK),
        })
    }

    fn audit210(&self, h1_trilinear: f64) -> Result<Audit210> {
        let gm = self.grad_magnitude();
        let l2 = lp_norm(&gm, Exponent::Finite(2.0))?;
        let l3 = lp_norm(&gm, Exponent::Finite(3.0))?;
        let l6 = lp_norm(&gm, Exponent::Finite(6.0))?;
        let lhs = l3 * l3 * l3;
        let rhs = math::powf(l2, 1.5) * math::powf(l6, 1.5);
        let sobolev_product = self
            .hessian_parts
            .iter()
            .map(|h| math::powf(*h, 0.25))
            .product();
        Ok(Audit210 {
            h1_trilinear,
            lhs,
            rhs,
            l6,
            sobolev_product,
            holds: lhs <= rhs * (1.0 + AUDIT_SLACK),
        })
    }
}

fn denominator(d3u_sq: f64) -> f64 {
    1.0 + math::ln(math::sqrt(d3u_sq) + E)
}

/// `‖|∂₃u|‖^β_{(p,q,r)} / (1 + ln(‖∂₃u‖_{L²} + e))`.
pub fn criterion_integrand(u: &VectorField, exps: &MixedExponents) -> Result<f64> {
    let beta = match exps.beta() {
        crate::mixed_norm::Beta::Finite(b) => b,
        crate::mixed_norm::Beta::Boundary => return Err(Error::BoundaryExponents),
    };
    let d = Diagnostics::from_velocity(&Transform::new(u.grid()), u);
    let mag = d.d3u_magnitude();
    let mixed = mixed_norm(&mag, exps.p(), exps.q(), exps.r())?;
    Ok(math::powf(mixed, beta) / denominator(d.d3u_sq()))
}

/// `−∫ ∂₃u·∇u·∂₃u dx`.
pub fn trilinear_d3(u: &VectorField) -> f64 {
    Diagnostics::from_velocity(&Transform::new(u.grid()), u).trilinear()
}

/// `∫ (u·∇)u·Δu dx`.
pub fn h1_trilinear(u: &VectorField) -> f64 {
    Diagnostics::from_velocity(&Transform::new(u.grid()), u).h1_trilinear()
}

pub fn audit_chain_24(u: &VectorField, exps: &MixedExponents) -> Result<Audit24> {
    let d = Diagnostics::from_velocity(&Transform::new(u.grid()), u);
    let mag = d.d3u_magnitude();
    let mixed = mixed_norm(&mag, exps.p(), exps.q(), exps.r())?;
    d.audit24(exps, &mag, mixed, d.trilinear())
}

pub fn audit_chain_210(u: &VectorField) -> Result<Audit210> {
    let d = Diagnostics::from_velocity(&Transform::new(u.grid()), u);
    d.audit210(d.h1_trilinear())
}

/// Trapezoid running integral of the integrand over the record times.
pub fn accumulate(records: &[MonitorRecord]) -> Result<Vec<f64>> {
    let t: Vec<f64> = records.iter().map(|r| r.t).collect();
    let g: Vec<f64> = records.iter().map(|r| r.integrand).collect();
    quadrature::cumulative_trapezoid(&t, &g)
}

/// `(E₁ − E₀)/(2Δt) + ν·(G₀ + G₁)/2` for two consecutive records, with
/// `G = ‖∇u‖²`. Zero up to discretization for an exact solution.
pub fn energy_residual(prev: &MonitorRecord, next: &MonitorRecord, dt: f64, nu: f64) -> f64 {
    (next.energy - prev.energy) / (2.0 * dt) + nu * 0.5 * (prev.grad_sq + next.grad_sq)
}

/// Per-interval energy balance with a fourth-order step average of `‖∇u‖²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyBalance {
    pub t0: f64,
    pub t1: f64,
    /// `(E₁ − E₀)/(2Δt) + ν⟨‖∇u‖²⟩`.
    pub residual: f64,
    /// `ν⟨‖∇u‖²⟩`, the scale the residual is compared against.
    pub dissipation: f64,
}

impl EnergyBalance {
    pub fn relative(&self) -> f64 {
        if self.dissipation == 0.0 {
            math::abs(self.residual)
        } else {
            math::abs(self.residual) / self.dissipation
        }
    }
}

/// Energy balance on every interval of a trajectory. The step average of
/// `‖∇u‖²` is the cubic-interpolation integral over the interval divided by
/// its length, so the comparison is limited by the solver, not by the
/// `O(Δt²)` error of a two-point average.
pub fn energy_balances(records: &[MonitorRecord], nu: f64) -> Result<Vec<EnergyBalance>> {
    let t: Vec<f64> = records.iter().map(|r| r.t).collect();
    let g: Vec<f64> = records.iter().map(|r| r.grad_sq).collect();
    let parts = quadrature::interval_integrals_cubic(&t, &g)?;
    Ok(parts
        .iter()
        .enumerate()
        .filter(|(i, _)| t[i + 1] > t[*i])
        .map(|(i, integral)| {
            let dt = t[i + 1] - t[i];
            let dissipation = nu * integral / dt;
            EnergyBalance {
                t0: t[i],
                t1: t[i + 1],
                residual: (records[i + 1].energy - records[i].energy) / (2.0 * dt) + dissipation,
                dissipation,
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyCheck {
    /// `E(0) − E(t) − 2ν∫₀ᵗ‖∇u‖²`.
    pub slack: f64,
    /// `slack ≥ −ENERGY_SLACK·E(0)`.
    pub holds: bool,
}

/// `E(t) + 2ν∫₀ᵗ‖∇u‖² ≤ E(0)` at one record, given the dissipation integral.
pub fn energy_inequality_check(record: &MonitorRecord, initial: &MonitorRecord, dissipated: f64, nu: f64) -> EnergyCheck {
    let slack = initial.energy - record.energy - 2.0 * nu * dissipated;
    EnergyCheck {
        slack,
        holds: slack >= -ENERGY_SLACK * initial.energy,
    }
}

/// Energy inequality at every record, with `∫‖∇u‖²` from the fourth-order
/// composite cubic rule.
pub fn energy_inequality_profile(records: &[MonitorRecord], nu: f64) -> Result<Vec<EnergyCheck>> {
    let Some(first) = records.first() else {
        return Ok(Vec::new());
    };
    let t: Vec<f64> = records.iter().map(|r| r.t).collect();
    let g: Vec<f64> = records.iter().map(|r| r.grad_sq).collect();
    let dissipated = quadrature::cumulative_cubic(&t, &g)?;
    Ok(records
        .iter()
        .zip(dissipated)
        .map(|(r, d)| energy_inequality_check(r, first, d, nu))
        .collect())
}

/// Aggregate view of a monitored trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct MonitorSummary {
    pub samples: usize,
    pub mode: CriterionMode,
    pub final_cumulative: f64,
    pub max_integrand: f64,
    pub audit24_pass: usize,
    pub audit24_fail: usize,
    pub audit210_pass: usize,
    pub audit210_fail: usize,
    pub energy_inequality_pass: usize,
    pub energy_inequality_fail: usize,
    pub min_energy_slack: f64,
    pub max_energy_residual: f64,
    /// Largest `a/c` of the `∂₃u` chain.
    pub max_audit24_constant: f64,
    /// Largest `|∫(u·∇)u·Δu| / ‖∇u‖³_{L³}`.
    pub max_audit210_trilinear_ratio: f64,
    /// Largest `‖∇u‖^{3/2}_{L⁶} / ∏‖∇∂ᵢu‖^{1/2}`.
    pub max_audit210_sobolev_ratio: f64,
}

/// Collects [`MonitorRecord`]s from solver states.
#[derive(Clone, Debug)]
pub struct RegularityMonitor {
    exps: MixedExponents,
    transform: Transform,
    records: Vec<MonitorRecord>,
}

impl RegularityMonitor {
    pub fn new(grid: Grid3, exps: MixedExponents) -> Self {
        Self {
            exps,
            transform: Transform::new(grid),
            records: Vec::new(),
        }
    }

    pub fn exponents(&self) -> &MixedExponents {
        &self.exps
    }

    pub fn mode(&self) -> CriterionMode {
        if self.exps.is_boundary() {
            CriterionMode::Sup
        } else {
            CriterionMode::Integral
        }
    }

    pub fn records(&self) -> &[MonitorRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<MonitorRecord> {
        self.records
    }

    /// Measures `state` and appends a record.
    pub fn observe(&mut self, state: &SolverState) -> Result<&MonitorRecord> {
        if state.grid() != self.transform.grid() {
            return Err(Error::GridMismatch);
        }
        let d = Diagnostics::from_state(&self.transform, state);
        self.push(state.t(), &d)
    }

    /// Measures a bare velocity field at time `t`.
    pub fn observe_field(&mut self, t: f64, u: &VectorField) -> Result<&MonitorRecord> {
        if u.grid() != self.transform.grid() {
            return Err(Error::GridMismatch);
        }
        let d = Diagnostics::from_velocity(&self.transform, u);
        self.push(t, &d)
    }

    fn push(&mut self, t: f64, d: &Diagnostics) -> Result<&MonitorRecord> {
        if let Some(last) = self.records.last() {
            if !(t >= last.t) {
                return Err(Error::NonMonotoneTimes {
                    index: self.records.len(),
                });
            }
        }
        let exps = self.exps;
        let d3u_sq = d.d3u_sq();
        let mag = d.d3u_magnitude();
        let mixed = mixed_norm(&mag, exps.p(), exps.q(), exps.r())?;
        let (beta, integrand) = match exps.beta() {
            crate::mixed_norm::Beta::Finite(b) => (b, math::powf(mixed, b) / denominator(d3u_sq)),
            crate::mixed_norm::Beta::Boundary => (f64::INFINITY, mixed),
        };
        let cumulative = match (self.records.last(), self.mode()) {
            (None, CriterionMode::Integral) => 0.0,
            (None, CriterionMode::Sup) => integrand,
            (Some(last), CriterionMode::Integral) => {
                last.cumulative + 0.5 * (t - last.t) * (integrand + last.integrand)
            }
            (Some(last), CriterionMode::Sup) => last.cumulative.max(integrand),
        };
        let trilinear = d.trilinear();
        let h1 = d.h1_trilinear();
        let record = MonitorRecord {
            t,
            energy: d.energy(),
            grad_sq: d.grad_sq(),
            d3u_sq,
            grad_d3u_sq: d.d3_parts.iter().sum(),
            mixed,
            beta,
            integrand,
            cumulative,
            log_energy: math::ln(d3u_sq + E),
            trilinear,
            h1_trilinear: h1,
            audit24: d.audit24(&exps, &mag, mixed, trilinear)?,
            audit210: d.audit210(h1)?,
        };
        self.records.push(record);
        Ok(self.records.last().expect("just pushed"))
    }

    pub fn summary(&self, nu: f64) -> Result<MonitorSummary> {
        let energy = energy_inequality_profile(&self.records, nu)?;
        let balances = energy_balances(&self.records, nu)?;
        let count = |f: &dyn Fn(&MonitorRecord) -> bool| self.records.iter().filter(|r| f(r)).count();
        let fmax = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0f64, f64::max);
        Ok(MonitorSummary {
            samples: self.records.len(),
            mode: self.mode(),
            final_cumulative: self.records.last().map_or(0.0, |r| r.cumulative),
            max_integrand: fmax(&mut self.records.iter().map(|r| r.integrand)),
            audit24_pass: count(&|r| r.audit24.holds),
            audit24_fail: count(&|r| !r.audit24.holds),
            audit210_pass: count(&|r| r.audit210.holds),
            audit210_fail: count(&|r| !r.audit210.holds),
            energy_inequality_pass: energy.iter().filter(|c| c.holds).count(),
            energy_inequality_fail: energy.iter().filter(|c| !c.holds).count(),
            min_energy_slack: energy.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min),
            max_energy_residual: fmax(&mut balances.iter().map(EnergyBalance::relative)),
            max_audit24_constant: fmax(&mut self.records.iter().filter_map(|r| r.audit24.constant_ratio())),
            max_audit210_trilinear_ratio: fmax(
                &mut self.records.iter().filter_map(|r| r.audit210.trilinear_ratio()),
            ),
            max_audit210_sobolev_ratio: fmax(
                &mut self.records.iter().filter_map(|r| r.audit210.sobolev_ratio()),
            ),
        })
    }
}

/// Spectral coefficients of a field, for callers holding only real data.
pub fn spectrum_of(u: &VectorField) -> [SpectralField; 3] {
    let t = Transform::new(u.grid());
    let [a, b, c] = u.components();
    let (sa, sb) = t.forward_pair(a, b);
    [sa, sb, t.forward(c)]
}
