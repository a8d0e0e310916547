//! Uniformly sampled complex functions on an interval or a rectangle, and the
//! discrete Fourier transform in the convention `Ff(y) = ∫ e^{-ixy} f(x) dx`,
//! `F⁻¹g(x) = (2π)⁻¹ ∫ e^{ixy} g(y) dy` (per dimension).
//!
//! A grid of half-extent `L` with `n` samples has nodes `x_j = -L + j·2L/n`,
//! so `x_{n/2} = 0`. Its transform lives on the grid of half-extent `nπ/(2L)`
//! with the same `n`; the trapezoidal rule on the periodized data gives
//! `F_k = Δ(-1)^k Σ_j (-1)^j f_j e^{-2πijk/n}` exactly for `n/2` even.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Number of samples at each edge inspected by `boundary_mass`.
const EDGE: usize = 2;

fn check_count(field: &'static str, n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::invalid(field, format!("sample count must be a power of two ≥ 8, got {n}")));
    }
    Ok(())
}

fn check_extent(field: &'static str, l: f64) -> Result<()> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::invalid(field, format!("half extent must be positive and finite, got {l}")));
    }
    Ok(())
}

fn check_values(values: &[Complex64]) -> Result<()> {
    if let Some(index) = values.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::NonFinite {
            field: "values".into(),
            index,
        });
    }
    Ok(())
}

pub(crate) fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

fn alternate(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Continuous-normalized transform of one line in place; `delta` is the
/// spacing of the input grid.
fn line_transform(line: &mut [Complex64], fft: &dyn Fft<f64>, inverse: bool, delta: f64) {
    for (j, c) in line.iter_mut().enumerate() {
        *c *= alternate(j);
    }
    fft.process(line);
    let scale = if inverse {
        delta / std::f64::consts::TAU
    } else {
        delta
    };
    for (k, c) in line.iter_mut().enumerate() {
        *c *= alternate(k) * scale;
    }
}

/// Angular frequency `y_k = (k - n/2)π/L` on the dual grid.
fn dual_nodes(n: usize, half_extent: f64) -> Vec<f64> {
    let eta = std::f64::consts::PI / half_extent;
    (0..n).map(|k| (k as f64 - (n / 2) as f64) * eta).collect()
}

fn nodes(n: usize, half_extent: f64) -> Vec<f64> {
    let h = 2.0 * half_extent / n as f64;
    (0..n).map(|j| -half_extent + j as f64 * h).collect()
}

/// Samples of a function on `[-L, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1D {
    half_extent: f64,
    values: Vec<Complex64>,
}

impl GridFunction1D {
    pub fn new(half_extent: f64, values: Vec<Complex64>) -> Result<Self> {
        check_extent("half_extent", half_extent)?;
        check_count("n", values.len())?;
        check_values(&values)?;
        Ok(GridFunction1D { half_extent, values })
    }

    pub fn from_fn(half_extent: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = nodes(n, half_extent).into_iter().map(f).collect();
        Self::new(half_extent, values)
    }

    pub fn zeros_like(&self) -> Self {
        self.with_values(vec![ZERO; self.n()])
    }

    pub(crate) fn with_values(&self, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), self.n());
        GridFunction1D {
            half_extent: self.half_extent,
            values,
        }
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.n() as f64
    }

    pub fn points(&self) -> Vec<f64> {
        nodes(self.n(), self.half_extent)
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.half_extent != other.half_extent {
            return Err(Error::GridMismatch(format!(
                "(L = {}, n = {}) vs (L = {}, n = {})",
                self.half_extent,
                self.n(),
                other.half_extent,
                other.n()
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self.points().into_iter().zip(&self.values).map(|(x, &c)| f(x, c)).collect();
        self.with_values(values)
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        self.with_values(self.values.iter().map(|&c| alpha * c).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect()))
    }

    /// Discrete `L²` norm `(Δ Σ |f_j|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.spacing() * self.values.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus among the outermost samples at either end.
    pub fn boundary_mass(&self) -> f64 {
        let n = self.n();
        self.values[..EDGE]
            .iter()
            .chain(&self.values[n - EDGE..])
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// `Ff` on the dual grid.
    pub fn fourier(&self) -> Self {
        let mut v = self.values.clone();
        line_transform(&mut v, &*plan(self.n(), false), false, self.spacing());
        GridFunction1D {
            half_extent: self.n() as f64 * std::f64::consts::PI / (2.0 * self.half_extent),
            values: v,
        }
    }

    /// `F⁻¹g` on the dual grid.
    pub fn inverse_fourier(&self) -> Self {
        let mut v = self.values.clone();
        line_transform(&mut v, &*plan(self.n(), true), true, self.spacing());
        GridFunction1D {
            half_extent: self.n() as f64 * std::f64::consts::PI / (2.0 * self.half_extent),
            values: v,
        }
    }

    /// Multiplies the spectrum by `m(y)` and transforms back.
    pub fn spectral_multiplier(&self, m: impl Fn(f64) -> Complex64) -> Self {
        let n = self.n();
        let mut v: Vec<Complex64> = self.values.iter().enumerate().map(|(j, &c)| c * alternate(j)).collect();
        plan(n, false).process(&mut v);
        for (c, y) in v.iter_mut().zip(dual_nodes(n, self.half_extent)) {
            *c *= m(y);
        }
        plan(n, true).process(&mut v);
        let inv = 1.0 / n as f64;
        self.with_values(v.into_iter().enumerate().map(|(j, c)| c * alternate(j) * inv).collect())
    }

    /// `f^{(order)}` by spectral differentiation; the Nyquist mode is
    /// dropped for odd orders.
    pub fn derivative(&self, order: u32) -> Self {
        let nyquist = -(self.n() as f64) * std::f64::consts::PI / (2.0 * self.half_extent);
        self.spectral_multiplier(|y| {
            if order % 2 == 1 && y == nyquist {
                ZERO
            } else {
                Complex64::new(0.0, y).powu(order)
            }
        })
    }

    /// `x ↦ f(x + a)` by a spectral phase ramp; exactly unitary.
    pub fn shifted(&self, a: f64) -> Self {
        self.spectral_multiplier(|y| Complex64::cis(y * a))
    }
}

/// Samples of a function of `(t, s)` on `[-L_t, L_t) × [-L_s, L_s)`, stored
/// row-major with `t` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction2D {
    half_extent_t: f64,
    half_extent_s: f64,
    n_t: usize,
    n_s: usize,
    values: Vec<Complex64>,
}

impl GridFunction2D {
    pub fn new(half_extent_t: f64, half_extent_s: f64, n_t: usize, n_s: usize, values: Vec<Complex64>) -> Result<Self> {
        check_extent("half_extent_t", half_extent_t)?;
        check_extent("half_extent_s", half_extent_s)?;
        check_count("n_t", n_t)?;
        check_count("n_s", n_s)?;
        if values.len() != n_t * n_s {
            return Err(Error::Arity {
                field: format!("values (n_t = {n_t}, n_s = {n_s})"),
                expected: n_t * n_s,
                found: values.len(),
            });
        }
        check_values(&values)?;
        Ok(GridFunction2D {
            half_extent_t,
            half_extent_s,
            n_t,
            n_s,
            values,
        })
    }

    /// Square grid `[-L, L)²` with `n × n` samples.
    pub fn square(half_extent: f64, n: usize, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        Self::from_fn(half_extent, half_extent, n, n, f)
    }

    pub fn from_fn(
        half_extent_t: f64,
        half_extent_s: f64,
        n_t: usize,
        n_s: usize,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        check_count("n_t", n_t)?;
        check_count("n_s", n_s)?;
        let ts = nodes(n_t, half_extent_t);
        let ss = nodes(n_s, half_extent_s);
        let values = ts.iter().flat_map(|&t| ss.iter().map(move |&s| (t, s))).map(|(t, s)| f(t, s)).collect();
        Self::new(half_extent_t, half_extent_s, n_t, n_s, values)
    }

    pub(crate) fn with_values(&self, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        GridFunction2D {
            values,
            ..self.clone_shape()
        }
    }

    fn clone_shape(&self) -> Self {
        GridFunction2D {
            half_extent_t: self.half_extent_t,
            half_extent_s: self.half_extent_s,
            n_t: self.n_t,
            n_s: self.n_s,
            values: Vec::new(),
        }
    }

    pub fn zeros_like(&self) -> Self {
        self.with_values(vec![ZERO; self.values.len()])
    }

    pub fn half_extent_t(&self) -> f64 {
        self.half_extent_t
    }

    pub fn half_extent_s(&self) -> f64 {
        self.half_extent_s
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.n_s + j]
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.half_extent_t / self.n_t as f64
    }

    pub fn ds(&self) -> f64 {
        2.0 * self.half_extent_s / self.n_s as f64
    }

    pub fn t_points(&self) -> Vec<f64> {
        nodes(self.n_t, self.half_extent_t)
    }

    pub fn s_points(&self) -> Vec<f64> {
        nodes(self.n_s, self.half_extent_s)
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.n_t != other.n_t
            || self.n_s != other.n_s
            || self.half_extent_t != other.half_extent_t
            || self.half_extent_s != other.half_extent_s
        {
            return Err(Error::GridMismatch(format!(
                "({} × {} on ±{} × ±{}) vs ({} × {} on ±{} × ±{})",
                self.n_t,
                self.n_s,
                self.half_extent_t,
                self.half_extent_s,
                other.n_t,
                other.n_s,
                other.half_extent_t,
                other.half_extent_s
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64, f64, Complex64) -> Complex64) -> Self {
        let ts = self.t_points();
        let ss = self.s_points();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &c)| f(ts[idx / self.n_s], ss[idx % self.n_s], c))
            .collect();
        self.with_values(values)
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        self.with_values(self.values.iter().map(|&c| alpha * c).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect()))
    }

    pub fn mul_pointwise(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect()))
    }

    /// Discrete `L²` norm `(Δt Δs Σ |a|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.dt() * self.ds() * self.values.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `‖a - b‖ / ‖b‖` in the discrete `L²` norm.
    pub fn rel_l2_diff(&self, reference: &Self) -> Result<f64> {
        let diff = self.sub(reference)?.l2_norm();
        let norm = reference.l2_norm();
        Ok(if norm == 0.0 { diff } else { diff / norm })
    }

    /// Largest modulus in the two outermost rows and columns.
    pub fn boundary_mass(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n_t {
            for j in 0..self.n_s {
                let edge = i < EDGE || i >= self.n_t - EDGE || j < EDGE || j >= self.n_s - EDGE;
                if edge {
                    m = m.max(self.get(i, j).norm());
                }
            }
        }
        m
    }

    fn dual_extents(&self) -> (f64, f64) {
        let pi = std::f64::consts::PI;
        (
            self.n_t as f64 * pi / (2.0 * self.half_extent_t),
            self.n_s as f64 * pi / (2.0 * self.half_extent_s),
        )
    }

    fn transform2(&self, exec: Exec, inverse: bool) -> Self {
        let (nt, ns) = (self.n_t, self.n_s);
        let (dt, ds) = (self.dt(), self.ds());
        let row_fft = plan(ns, inverse);
        let rows = exec.map(nt, |i| {
            let mut line = self.values[i * ns..(i + 1) * ns].to_vec();
            line_transform(&mut line, &*row_fft, inverse, ds);
            line
        });
        let col_fft = plan(nt, inverse);
        let cols = exec.map(ns, |j| {
            let mut line: Vec<Complex64> = rows.iter().map(|r| r[j]).collect();
            line_transform(&mut line, &*col_fft, inverse, dt);
            line
        });
        let mut values = vec![ZERO; nt * ns];
        for (j, col) in cols.iter().enumerate() {
            for (i, &c) in col.iter().enumerate() {
                values[i * ns + j] = c;
            }
        }
        let (yt, ys) = self.dual_extents();
        GridFunction2D {
            half_extent_t: yt,
            half_extent_s: ys,
            n_t: nt,
            n_s: ns,
            values,
        }
    }

    /// `Fa(y) = ∫ e^{-i⟨x,y⟩} a(x) dx` on the dual grid.
    pub fn fourier(&self) -> Self {
        self.transform2(Exec::default(), false)
    }

    /// `F⁻¹b(x) = (2π)⁻² ∫ e^{i⟨x,y⟩} b(y) dy` on the dual grid.
    pub fn inverse_fourier(&self) -> Self {
        self.transform2(Exec::default(), true)
    }

    /// `∂_t^a ∂_s^b` by spectral differentiation; Nyquist modes are dropped
    /// along axes differentiated an odd number of times.
    pub fn derivative(&self, a: u32, b: u32) -> Self {
        if a == 0 && b == 0 {
            return self.clone();
        }
        let spec = self.fourier();
        let yt = dual_nodes(self.n_t, self.half_extent_t);
        let ys = dual_nodes(self.n_s, self.half_extent_s);
        let values = spec
            .values
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let (k1, k2) = (idx / self.n_s, idx % self.n_s);
                if (a % 2 == 1 && k1 == 0) || (b % 2 == 1 && k2 == 0) {
                    return ZERO;
                }
                c * Complex64::new(0.0, yt[k1]).powu(a) * Complex64::new(0.0, ys[k2]).powu(b)
            })
            .collect();
        GridFunction2D { values, ..spec.clone_shape() }.inverse_fourier()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Grid1Repr {
    half_extent: f64,
    n: usize,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Grid2Repr {
    half_extent_t: f64,
    half_extent_s: f64,
    n_t: usize,
    n_s: usize,
    values: Vec<[f64; 2]>,
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn complexes(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl Serialize for GridFunction1D {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Grid1Repr {
            half_extent: self.half_extent,
            n: self.n(),
            values: pairs(&self.values),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridFunction1D {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = Grid1Repr::deserialize(d)?;
        if r.values.len() != r.n {
            return Err(D::Error::custom(Error::Arity {
                field: format!("values (n = {})", r.n),
                expected: r.n,
                found: r.values.len(),
            }));
        }
        GridFunction1D::new(r.half_extent, complexes(&r.values)).map_err(D::Error::custom)
    }
}

impl Serialize for GridFunction2D {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Grid2Repr {
            half_extent_t: self.half_extent_t,
            half_extent_s: self.half_extent_s,
            n_t: self.n_t,
            n_s: self.n_s,
            values: pairs(&self.values),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridFunction2D {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = Grid2Repr::deserialize(d)?;
        GridFunction2D::new(r.half_extent_t, r.half_extent_s, r.n_t, r.n_s, complexes(&r.values))
            .map_err(D::Error::custom)
    }
}
