//! Matrix realization of the torus at a root of unity.
//!
//! For `q` of order `N` the clock–shift pair `(U₀, V₀)` satisfies
//! `U₀V₀ = qV₀U₀`, `U₀^N = V₀^N = 𝕀`. An element `f` evaluates at the fiber
//! over `(u, v) ∈ S¹ × S¹` as `Σ f_{k,l} (uU₀)^k (vV₀)^l`.

mod circle;

pub use circle::{circle_check_relations, circle_eval, CircleElement, CircleSpec, CircleTerm};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::PhaseQ;
use crate::torus::TorusElement;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Tolerance on `|u| = 1` for fiber coordinates.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Power-iteration steps used by [`MatrixN::op_norm`].
const POWER_STEPS: usize = 50;

/// A dense complex `n × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixN(pub DMatrix<Complex64>);

impl MatrixN {
    pub fn zeros(n: usize) -> Self {
        MatrixN(DMatrix::from_element(n, n, ZERO))
    }

    pub fn identity(n: usize) -> Self {
        MatrixN(DMatrix::identity(n, n))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        MatrixN(DMatrix::from_fn(n, n, f))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn mul(&self, other: &Self) -> Self {
        MatrixN(&self.0 * &other.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        MatrixN(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        MatrixN(&self.0 - &other.0)
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        MatrixN(&self.0 * alpha)
    }

    pub fn adjoint(&self) -> Self {
        MatrixN(self.0.adjoint())
    }

    /// `M^e` by repeated squaring; negative powers are `(M^{|e|})^†`, which
    /// is the inverse for unitary `M`.
    pub fn unitary_pow(&self, e: i64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n());
        let mut m = e.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            m >>= 1;
        }
        if e < 0 {
            acc.adjoint()
        } else {
            acc
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest singular value, estimated by power iteration on `M†M`
    /// (never below the largest column norm).
    pub fn op_norm(&self) -> f64 {
        let n = self.n();
        if n == 0 {
            return 0.0;
        }
        let col_max = (0..n).map(|j| self.0.column(j).norm()).fold(0.0, f64::max);
        if col_max == 0.0 {
            return 0.0;
        }
        let gram = self.0.adjoint() * &self.0;
        let mut x = DVector::from_fn(n, |i, _| Complex64::cis(0.7 * i as f64) * (1.0 + 0.1 * i as f64));
        let mut lambda = 0.0;
        for _ in 0..POWER_STEPS {
            let y = &gram * &x;
            let norm = y.norm();
            if norm == 0.0 {
                break;
            }
            lambda = norm / x.norm();
            x = y / Complex64::new(norm, 0.0);
        }
        lambda.sqrt().max(col_max)
    }

    /// `‖M - c𝕀‖` with `c` the mean diagonal entry.
    pub fn scalar_defect(&self) -> f64 {
        let n = self.n();
        let c = self.0.trace() / n as f64;
        self.sub(&Self::identity(n).scale(c)).op_norm()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for MatrixN {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.n();
        let entries = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| [self.0[(i, j)].re, self.0[(i, j)].im])
            .collect();
        MatrixRepr { n, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixN {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MatrixRepr::deserialize(d)?;
        if r.entries.len() != r.n * r.n {
            return Err(D::Error::custom(format!(
                "entries: expected {} values, found {}",
                r.n * r.n,
                r.entries.len()
            )));
        }
        Ok(MatrixN::from_fn(r.n, |i, j| {
            let [re, im] = r.entries[i * r.n + j];
            Complex64::new(re, im)
        }))
    }
}

/// `U₀` (ones at `(i, i+1 mod N)`) and `V₀ = diag(1, q, …, q^{N-1})`.
pub fn clock_shift(q: PhaseQ) -> Result<(MatrixN, MatrixN)> {
    let n = q.require_rational()? as usize;
    let u0 = MatrixN::from_fn(n, |i, j| if j == (i + 1) % n { ONE } else { ZERO });
    let v0 = MatrixN::from_fn(n, |i, j| if i == j { q.pow(i as i64) } else { ZERO });
    Ok((u0, v0))
}

/// `U₀^a V₀^b`, whose only nonzero entries are `(i, i+a) ↦ q^{(i+a)b}`.
pub(crate) fn clock_shift_monomial(q: PhaseQ, n: usize, a: i64, b: i64) -> MatrixN {
    let ni = n as i64;
    let a = a.rem_euclid(ni);
    let b = b.rem_euclid(ni);
    let mut m = MatrixN::zeros(n);
    for i in 0..ni {
        let j = (i + a) % ni;
        m.0[(i as usize, j as usize)] = q.pow(j * b);
    }
    m
}

pub(crate) fn check_unit(field: &'static str, z: Complex64) -> Result<()> {
    let modulus = z.norm();
    if !((modulus - 1.0).abs() <= UNIT_TOLERANCE) {
        return Err(Error::NonUnit { field, modulus });
    }
    Ok(())
}

/// `Σ f_{k,l} u^k v^l U₀^k V₀^l`, summed in lexicographic order.
pub fn eval_section(f: &TorusElement, u: Complex64, v: Complex64) -> Result<MatrixN> {
    let n = f.q.require_rational()? as usize;
    check_unit("u", u)?;
    check_unit("v", v)?;
    let mut out = MatrixN::zeros(n);
    for (k, l, c) in f.coeffs.support() {
        let w = c * u.powi(k as i32) * v.powi(l as i32);
        let ni = n as i64;
        let (a, b) = (k.rem_euclid(ni), l.rem_euclid(ni));
        for i in 0..ni {
            let j = (i + a) % ni;
            out.0[(i as usize, j as usize)] += w * f.q.pow(j * b);
        }
    }
    Ok(out)
}

/// One coefficient `c_{k,l,s,t}` of a section written as
/// `Σ c_{k,l,s,t} u^k v^l U₀^s V₀^t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionEntry {
    pub k: i64,
    pub l: i64,
    pub s: i64,
    pub t: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivarianceCheck {
    Ok,
    Violation { k: i64, l: i64, s: i64, t: i64 },
}

/// The family of `f` as a section: `c_{k,l,k mod N,l mod N} = f_{k,l}`.
pub fn section_family(f: &TorusElement) -> Result<Vec<SectionEntry>> {
    let n = f.q.require_rational()? as i64;
    Ok(f.coeffs
        .support()
        .map(|(k, l, c)| SectionEntry {
            k,
            l,
            s: k.rem_euclid(n),
            t: l.rem_euclid(n),
            re: c.re,
            im: c.im,
        })
        .collect())
}

/// `c_{k,l,s,t} ≠ 0` only if `k ≡ s` and `l ≡ t (mod N)`; reports the first
/// violation in lexicographic `(k, l, s, t)` order.
pub fn equivariance_check(family: &[SectionEntry], q: PhaseQ) -> Result<EquivarianceCheck> {
    let n = q.require_rational()? as i64;
    if let Some(e) = family.iter().find(|e| !(0..n).contains(&e.s) || !(0..n).contains(&e.t)) {
        return Err(Error::invalid(
            "s, t",
            format!("({}, {}) outside 0..{n}", e.s, e.t),
        ));
    }
    let mut bad: Vec<_> = family
        .iter()
        .filter(|e| (e.re != 0.0 || e.im != 0.0) && ((e.k - e.s).rem_euclid(n) != 0 || (e.l - e.t).rem_euclid(n) != 0))
        .map(|e| (e.k, e.l, e.s, e.t))
        .collect();
    bad.sort_unstable();
    Ok(match bad.first() {
        Some(&(k, l, s, t)) => EquivarianceCheck::Violation { k, l, s, t },
        None => EquivarianceCheck::Ok,
    })
}

/// Unit circle samples `e^{2πi(j + φ)/m}` with an irrational offset `φ`.
pub fn unit_samples(m: usize, offset: f64) -> Vec<Complex64> {
    (0..m)
        .map(|j| Complex64::cis(std::f64::consts::TAU * (j as f64 + offset) / m as f64))
        .collect()
}

/// Default fiber grid: `16 × 16` pairs offset by the golden ratio and `√2`.
pub fn fiber_grid() -> Vec<(Complex64, Complex64)> {
    let us = unit_samples(16, 0.618_033_988_749_894_8);
    let vs = unit_samples(16, std::f64::consts::SQRT_2 - 1.0);
    us.iter().flat_map(|&u| vs.iter().map(move |&v| (u, v))).collect()
}

/// Residuals of the fiberwise identities for a pair of elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberReport {
    pub multiplicative: f64,
    pub star: f64,
}

/// `max ‖ev(fg) - ev(f)ev(g)‖` and `max ‖ev(f*) - ev(f)†‖` over a fiber grid.
pub fn fiber_check(exec: Exec, f: &TorusElement, g: &TorusElement, grid: &[(Complex64, Complex64)]) -> Result<FiberReport> {
    let fg = f.mul(g)?;
    let fs = crate::torus::adjoint(f);
    f.q.require_rational()?;
    let rows = exec.map(grid.len(), |i| {
        let (u, v) = grid[i];
        let ef = eval_section(f, u, v)?;
        let eg = eval_section(g, u, v)?;
        let mult = eval_section(&fg, u, v)?.sub(&ef.mul(&eg)).op_norm();
        let star = eval_section(&fs, u, v)?.sub(&ef.adjoint()).op_norm();
        Ok((mult, star))
    });
    let mut report = FiberReport {
        multiplicative: 0.0,
        star: 0.0,
    };
    for r in rows {
        let (m, s) = r?;
        report.multiplicative = crate::exec::nan_max(report.multiplicative, m);
        report.star = crate::exec::nan_max(report.star, s);
    }
    Ok(report)
}
