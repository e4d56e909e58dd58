//! Anisotropic mixed Lebesgue norms
//! `‖‖‖f‖_{L^p_{x1}}‖_{L^q_{x2}}‖_{L^r_{x3}}` and their exponent algebra.

use alloc::format;
use alloc::vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::Axis;
use crate::math;

/// Tolerance for deciding `1/p + 1/q + 1/r = 1`.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// An integrability exponent in `(0, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    /// A finite exponent; must be positive.
    pub fn finite(value: f64) -> Result<Self> {
        if value.is_nan() || value <= 0.0 {
            return Err(Error::InvalidExponent(format!("{value} is not positive")));
        }
        if value.is_infinite() {
            return Ok(Exponent::Infinite);
        }
        Ok(Exponent::Finite(value))
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinite => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// The exponent as an `f64`, `∞` included.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) => Exponent::finite(p),
            Exponent::Infinite => Ok(self),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts a positive number, `inf`, `infinity` or `∞`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Exponent::Infinite);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::InvalidExponent(format!("cannot parse {s:?}")))?;
        Exponent::finite(v)
    }
}

/// Time-integrability exponent of the criterion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Beta {
    Finite(f64),
    /// `1/p + 1/q + 1/r = 1`: `β = ∞`.
    Boundary,
}

impl Beta {
    pub fn value(self) -> f64 {
        match self {
            Beta::Finite(b) => b,
            Beta::Boundary => f64::INFINITY,
        }
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, Beta::Boundary)
    }
}

/// Validated `(p, q, r, β)` with `2 < p, q, r ≤ ∞`,
/// `s = 1/p + 1/q + 1/r ≤ 1` and `2/β + s = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedExponents {
    p: Exponent,
    q: Exponent,
    r: Exponent,
    beta: Beta,
}

impl MixedExponents {
    pub fn new(p: Exponent, q: Exponent, r: Exponent) -> Result<Self> {
        for (name, e) in [("p", p), ("q", q), ("r", r)] {
            let e = e.validate()?;
            if let Exponent::Finite(v) = e {
                if v <= 2.0 {
                    return Err(Error::InvalidExponent(format!(
                        "{name} = {v}: exponents must satisfy 2 < {name} <= inf"
                    )));
                }
            }
        }
        let beta = beta_of(p, q, r)?;
        Ok(Self { p, q, r, beta })
    }

    pub fn uniform(e: Exponent) -> Result<Self> {
        Self::new(e, e, e)
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn q(&self) -> Exponent {
        self.q
    }

    pub fn r(&self) -> Exponent {
        self.r
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }

    pub fn is_boundary(&self) -> bool {
        self.beta.is_boundary()
    }

    /// `1/p + 1/q + 1/r`.
    pub fn reciprocal_sum(&self) -> f64 {
        self.p.reciprocal() + self.q.reciprocal() + self.r.reciprocal()
    }

    pub fn conjugates(&self) -> (Exponent, Exponent, Exponent) {
        conjugate_exponents(self.p, self.q, self.r).expect("validated exponents exceed 2")
    }
}

/// `p ↦ 2p/(p−2)` per axis (`∞ ↦ 2`), the exponents paired with `(p, q, r)`
/// by Hölder against an `L²` factor.
pub fn conjugate_exponents(p: Exponent, q: Exponent, r: Exponent) -> Result<(Exponent, Exponent, Exponent)> {
    fn one(e: Exponent) -> Result<Exponent> {
        match e.validate()? {
            Exponent::Infinite => Ok(Exponent::Finite(2.0)),
            Exponent::Finite(p) if p > 2.0 => Ok(Exponent::Finite(2.0 * p / (p - 2.0))),
            Exponent::Finite(p) => Err(Error::InvalidExponent(format!(
                "{p}: conjugate 2p/(p-2) needs p > 2"
            ))),
        }
    }
    Ok((one(p)?, one(q)?, one(r)?))
}

/// Solves `2/β + 1/p + 1/q + 1/r = 1`.
pub fn beta_of(p: Exponent, q: Exponent, r: Exponent) -> Result<Beta> {
    let s = p.validate()?.reciprocal() + q.validate()?.reciprocal() + r.validate()?.reciprocal();
    if math::abs(1.0 - s) <= BOUNDARY_TOL {
        return Ok(Beta::Boundary);
    }
    if s > 1.0 {
        return Err(Error::InvalidExponent(format!(
            "1/p + 1/q + 1/r = {s} exceeds 1"
        )));
    }
    Ok(Beta::Finite(2.0 / (1.0 - s)))
}

/// Streaming one-dimensional `L^e` accumulator with weight `h`.
#[derive(Clone, Copy)]
struct Accumulator {
    exponent: Exponent,
    /// Set for small integer exponents, which skip `powf`.
    integer: Option<u32>,
    h: f64,
    acc: f64,
}

impl Accumulator {
    fn new(exponent: Exponent, h: f64) -> Self {
        let integer = match exponent {
            Exponent::Finite(e) if e == math::round(e) && (1.0..=32.0).contains(&e) => Some(e as u32),
            _ => None,
        };
        Self {
            exponent,
            integer,
            h,
            acc: 0.0,
        }
    }

    #[inline]
    fn push(&mut self, v: f64) {
        let a = math::abs(v);
        match (self.exponent, self.integer) {
            (Exponent::Infinite, _) => self.acc = self.acc.max(a),
            (_, Some(n)) => self.acc += int_pow(a, n),
            (Exponent::Finite(e), None) => self.acc += math::powf(a, e),
        }
    }

    fn finish(self) -> f64 {
        match self.exponent {
            Exponent::Infinite => self.acc,
            Exponent::Finite(e) if e == 2.0 => math::sqrt(self.acc * self.h),
            Exponent::Finite(e) if e == 1.0 => self.acc * self.h,
            Exponent::Finite(e) => math::powf(self.acc * self.h, 1.0 / e),
        }
    }
}

#[inline]
fn int_pow(mut base: f64, mut n: u32) -> f64 {
    let mut out = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            out *= base;
        }
        base *= base;
        n >>= 1;
    }
    out
}

/// Nested rectangle-rule norm: `L^p` along x1 lines, then `L^q` over x2,
/// then `L^r` over x3. An infinite exponent takes the max over samples.
pub fn mixed_norm(f: &ScalarField, p: Exponent, q: Exponent, r: Exponent) -> Result<f64> {
    let (p, q, r) = (p.validate()?, q.validate()?, r.validate()?);
    let g = f.grid();
    let [n1, n2, n3] = g.dims();
    let (h1, h2, h3) = (g.spacing(Axis::X1), g.spacing(Axis::X2), g.spacing(Axis::X3));
    let values = f.values();

    let mut outer = Accumulator::new(r, h3);
    let mut lines = vec![0.0; n2];
    for (i3, slab) in values.chunks_exact(n1 * n2).enumerate() {
        debug_assert!(i3 < n3);
        for (line_norm, line) in lines.iter_mut().zip(slab.chunks_exact(n1)) {
            let mut inner = Accumulator::new(p, h1);
            for &v in line {
                inner.push(v);
            }
            *line_norm = inner.finish();
        }
        let mut middle = Accumulator::new(q, h2);
        for &v in &lines {
            middle.push(v);
        }
        outer.push(middle.finish());
    }
    Ok(outer.finish())
}

/// Standard rectangle-rule `L^s` norm, `s ∈ [1, ∞]`.
pub fn lp_norm(f: &ScalarField, s: Exponent) -> Result<f64> {
    let s = s.validate()?;
    if let Exponent::Finite(v) = s {
        if v < 1.0 {
            return Err(Error::InvalidExponent(format!("{v}: L^s needs s >= 1")));
        }
    }
    let mut acc = Accumulator::new(s, f.grid().cell_volume());
    for &v in f.values() {
        acc.push(v);
    }
    Ok(acc.finish())
}
