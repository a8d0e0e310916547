//! Twisted convolutions on sampled functions of `x = (t, s) ∈ ℝ²`.
//!
//! - `(a *_ħ b)(t,s) = ∫ a(t-u, s-v) b(u,v) e^{i(s-v)uħ} du dv`
//! - `(a *̂_ħ b)(x) = ∫ a(x-y) b(y) e^{-(iħ/2)ω(x,y)} dy`, `ω(x,y) = x₁y₂ - y₁x₂`
//!
//! Both are computed by the trapezoidal rule on the sample grid; samples of
//! `a(x - y)` outside the grid are taken as zero.

mod bridge;
mod poly;

pub use bridge::{fourier_bridge_error, moyal_grid_series, BridgeReport};
pub use poly::{
    compare_half_full, half_moyal, moyal_star, poisson_bracket, series_star, ComplexRational, HalfFullComparison,
    HbarSeries, PolySymbol,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{plan, GridFunction2D};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Boundary mass, relative to the largest sample, above which the
/// trapezoidal quadrature is flagged.
pub const DECAY_THRESHOLD: f64 = 1e-10;

/// An input whose samples have not decayed at the grid boundary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayWarning {
    pub field: String,
    pub boundary_mass: f64,
}

/// Flags each named input whose relative boundary mass exceeds [`DECAY_THRESHOLD`].
pub fn decay_warnings(inputs: &[(&str, &GridFunction2D)]) -> Vec<DecayWarning> {
    inputs
        .iter()
        .filter_map(|&(field, g)| {
            let max = g.max_abs();
            let rel = if max == 0.0 { 0.0 } else { g.boundary_mass() / max };
            (rel > DECAY_THRESHOLD).then(|| DecayWarning {
                field: field.to_string(),
                boundary_mass: rel,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvKind {
    /// `*_ħ`, from the ordering `e^{itQ} e^{isP}`.
    Twisted,
    /// `*̂_ħ`, with the symplectic phase.
    Symplectic,
}

/// `c(x) = Σ_y a(x-y) b(y) A(x₂,y₂,x₁-y₁) B(x₂,y₂,y₁) Δ₁Δ₂`.
///
/// For each output column `x₂` the sum over `y₁` is a linear convolution
/// along `t`, done by zero-padded FFTs and accumulated over `y₂` in the
/// frequency domain.
fn conv_engine<FA, FB>(exec: Exec, a: &GridFunction2D, b: &GridFunction2D, phase_a: FA, phase_b: FB) -> Result<GridFunction2D>
where
    FA: Fn(f64, f64, f64) -> Complex64 + Sync,
    FB: Fn(f64, f64, f64) -> Complex64 + Sync,
{
    a.same_grid(b)?;
    let (n1, n2) = (a.n_t(), a.n_s());
    let m = 2 * n1;
    let (d1, d2) = (a.dt(), a.ds());
    let x1 = a.t_points();
    let x2 = a.s_points();
    // z₁ = x₁ - y₁ for the a-factor: index p ↦ (p - n1/2)Δ₁.
    let z1: Vec<f64> = (0..n1).map(|p| (p as f64 - (n1 / 2) as f64) * d1).collect();
    let forward = plan(m, false);
    let inverse = plan(m, true);
    let half2 = (n2 / 2) as i64;

    let columns = exec.map(n2, |j| {
        let mut acc = vec![ZERO; m];
        let mut fa = vec![ZERO; m];
        let mut fb = vec![ZERO; m];
        for l in 0..n2 {
            let w = j as i64 - l as i64 + half2;
            if !(0..n2 as i64).contains(&w) {
                continue;
            }
            let w = w as usize;
            let (xs, ys) = (x2[j], x2[l]);
            fa.iter_mut().for_each(|c| *c = ZERO);
            fb.iter_mut().for_each(|c| *c = ZERO);
            let mut any = false;
            for p in 0..n1 {
                let av = a.get(p, w);
                if av != ZERO {
                    fa[p] = av * phase_a(xs, ys, z1[p]);
                    any = true;
                }
            }
            if !any {
                continue;
            }
            any = false;
            for i in 0..n1 {
                let bv = b.get(i, l);
                if bv != ZERO {
                    fb[i] = bv * phase_b(xs, ys, x1[i]);
                    any = true;
                }
            }
            if !any {
                continue;
            }
            forward.process(&mut fa);
            forward.process(&mut fb);
            for k in 0..m {
                acc[k] += fa[k] * fb[k];
            }
        }
        inverse.process(&mut acc);
        let scale = d1 * d2 / m as f64;
        (0..n1).map(|i| acc[i + n1 / 2] * scale).collect::<Vec<_>>()
    });
    let mut values = vec![ZERO; n1 * n2];
    for (j, col) in columns.iter().enumerate() {
        for (i, &c) in col.iter().enumerate() {
            values[i * n2 + j] = c;
        }
    }
    Ok(a.with_values(values))
}

/// `a *_ħ b`.
pub fn twisted_conv(a: &GridFunction2D, b: &GridFunction2D, hbar: f64) -> Result<GridFunction2D> {
    twisted_conv_with(Exec::default(), a, b, hbar)
}

pub fn twisted_conv_with(exec: Exec, a: &GridFunction2D, b: &GridFunction2D, hbar: f64) -> Result<GridFunction2D> {
    conv_engine(exec, a, b, |_, _, _| Complex64::new(1.0, 0.0), |x2, y2, y1| Complex64::cis(hbar * (x2 - y2) * y1))
}

/// `a *̂_ħ b`.
pub fn other_twisted_conv(a: &GridFunction2D, b: &GridFunction2D, hbar: f64) -> Result<GridFunction2D> {
    other_twisted_conv_with(Exec::default(), a, b, hbar)
}

pub fn other_twisted_conv_with(exec: Exec, a: &GridFunction2D, b: &GridFunction2D, hbar: f64) -> Result<GridFunction2D> {
    conv_engine(
        exec,
        a,
        b,
        |_, y2, z1| Complex64::cis(-0.5 * hbar * y2 * z1),
        |x2, y2, y1| Complex64::cis(0.5 * hbar * (x2 - y2) * y1),
    )
}

pub fn conv(kind: ConvKind, a: &GridFunction2D, b: &GridFunction2D, hbar: f64) -> Result<GridFunction2D> {
    match kind {
        ConvKind::Twisted => twisted_conv(a, b, hbar),
        ConvKind::Symplectic => other_twisted_conv(a, b, hbar),
    }
}

/// Untwisted `Σ_y a(x-y) b(y) Δ₁Δ₂` by a zero-padded 2D FFT.
pub fn plain_conv(a: &GridFunction2D, b: &GridFunction2D) -> Result<GridFunction2D> {
    a.same_grid(b)?;
    let (n1, n2) = (a.n_t(), a.n_s());
    let (m1, m2) = (2 * n1, 2 * n2);
    let pad = |g: &GridFunction2D| {
        let mut v = vec![ZERO; m1 * m2];
        for i in 0..n1 {
            for j in 0..n2 {
                v[i * m2 + j] = g.get(i, j);
            }
        }
        v
    };
    let transform = |v: &mut Vec<Complex64>, inverse: bool| {
        let rows = plan(m2, inverse);
        for r in v.chunks_mut(m2) {
            rows.process(r);
        }
        let cols = plan(m1, inverse);
        let mut line = vec![ZERO; m1];
        for j in 0..m2 {
            for i in 0..m1 {
                line[i] = v[i * m2 + j];
            }
            cols.process(&mut line);
            for i in 0..m1 {
                v[i * m2 + j] = line[i];
            }
        }
    };
    let (mut fa, mut fb) = (pad(a), pad(b));
    transform(&mut fa, false);
    transform(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    transform(&mut fa, true);
    let scale = a.dt() * a.ds() / (m1 * m2) as f64;
    let mut values = vec![ZERO; n1 * n2];
    for i in 0..n1 {
        for j in 0..n2 {
            values[i * n2 + j] = fa[(i + n1 / 2) * m2 + j + n2 / 2] * scale;
        }
    }
    Ok(a.with_values(values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeDirection {
    Forward,
    Inverse,
}

/// `a ↦ e^{-(iħ/2) t s} a` (forward) or its inverse.
///
/// The forward map carries `*_ħ` to `*̂_ħ`: `G(a *_ħ b) = G(a) *̂_ħ G(b)`.
pub fn gauge_iso(a: &GridFunction2D, hbar: f64, direction: GaugeDirection) -> GridFunction2D {
    let sign = match direction {
        GaugeDirection::Forward => -1.0,
        GaugeDirection::Inverse => 1.0,
    };
    a.map(|t, s, c| c * Complex64::cis(sign * 0.5 * hbar * t * s))
}

/// A point `(x, α)` of the Heisenberg group with
/// `(x, α)(y, β) = (x + y, αβ e^{(iħ/2)ω(x,y)})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergPoint {
    pub x: [f64; 2],
    pub alpha: Complex64,
}

pub fn symplectic_form(x: [f64; 2], y: [f64; 2]) -> f64 {
    x[0] * y[1] - y[0] * x[1]
}

impl HeisenbergPoint {
    pub fn new(x: [f64; 2], alpha: Complex64) -> Self {
        HeisenbergPoint { x, alpha }
    }

    pub fn mul(&self, other: &Self, hbar: f64) -> Self {
        let phase = Complex64::cis(0.5 * hbar * symplectic_form(self.x, other.x));
        HeisenbergPoint::new([self.x[0] + other.x[0], self.x[1] + other.x[1]], self.alpha * other.alpha * phase)
    }

    pub fn inverse(&self) -> Self {
        HeisenbergPoint::new([-self.x[0], -self.x[1]], self.alpha.conj())
    }
}

/// `(ã * b̃)(g) = ∫ ã(h) b̃(h⁻¹g) dh` for `ã(x, α) = a(x) α`, returned as the
/// `ℝ²`-part at `α = 1`.
///
/// The circle integral collapses because `ã(h) b̃(h⁻¹g)` does not depend on
/// the circle coordinate of `h`; the remaining sum is evaluated pointwise
/// from the group law (`O(n⁴)`).
pub fn heisenberg_group_conv(a: &GridFunction2D, b: &GridFunction2D, hbar: f64) -> Result<GridFunction2D> {
    heisenberg_group_conv_with(Exec::default(), a, b, hbar)
}

pub fn heisenberg_group_conv_with(exec: Exec, a: &GridFunction2D, b: &GridFunction2D, hbar: f64) -> Result<GridFunction2D> {
    a.same_grid(b)?;
    let (n1, n2) = (a.n_t(), a.n_s());
    let ts = a.t_points();
    let ss = a.s_points();
    let (h1, h2) = ((n1 / 2) as i64, (n2 / 2) as i64);
    let cell = a.dt() * a.ds();
    let one = Complex64::new(1.0, 0.0);
    let rows = exec.map(n1, |i| {
        (0..n2)
            .map(|j| {
                let g = HeisenbergPoint::new([ts[i], ss[j]], one);
                let mut acc = ZERO;
                for p in 0..n1 {
                    // x - y on the grid: index i - p + n/2.
                    let di = i as i64 - p as i64 + h1;
                    if !(0..n1 as i64).contains(&di) {
                        continue;
                    }
                    for q in 0..n2 {
                        let dj = j as i64 - q as i64 + h2;
                        if !(0..n2 as i64).contains(&dj) {
                            continue;
                        }
                        let av = a.get(p, q);
                        if av == ZERO {
                            continue;
                        }
                        let h = HeisenbergPoint::new([ts[p], ss[q]], one);
                        let rest = h.inverse().mul(&g, hbar);
                        let bv = b.get(di as usize, dj as usize) * rest.alpha;
                        acc += av * h.alpha * bv;
                    }
                }
                acc * cell
            })
            .collect::<Vec<_>>()
    });
    Ok(a.with_values(rows.into_iter().flatten().collect()))
}

/// `T a(X₁, X₂) = ħ⁻¹ a(X₁/ħ, X₂)`, the transport along
/// `(x₁, x₂, α) ↦ (ħx₁, x₂, α)`, which maps the group at `ħ` onto the
/// group at `1`; the grid's first axis is stretched by `ħ`.
pub fn rescale_to_unit(a: &GridFunction2D, hbar: f64) -> Result<GridFunction2D> {
    check_positive_hbar(hbar)?;
    let values = a.values().iter().map(|&c| c / hbar).collect();
    GridFunction2D::new(a.half_extent_t() * hbar, a.half_extent_s(), a.n_t(), a.n_s(), values)
}

/// Inverse of [`rescale_to_unit`] onto the grid of `like`.
pub fn rescale_from_unit(c: &GridFunction2D, hbar: f64, like: &GridFunction2D) -> Result<GridFunction2D> {
    check_positive_hbar(hbar)?;
    if c.n_t() != like.n_t() || c.n_s() != like.n_s() {
        return Err(Error::GridMismatch("rescaled grid has different sample counts".into()));
    }
    Ok(like.with_values(c.values().iter().map(|&v| v * hbar).collect()))
}

fn check_positive_hbar(hbar: f64) -> Result<()> {
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::invalid("hbar", format!("rescaling needs ħ > 0, got {hbar}")));
    }
    Ok(())
}

/// `a *̂_ħ b` computed as `T⁻¹(Ta *̂_1 Tb)`.
pub fn rescaled_conv(a: &GridFunction2D, b: &GridFunction2D, hbar: f64) -> Result<GridFunction2D> {
    let ta = rescale_to_unit(a, hbar)?;
    let tb = rescale_to_unit(b, hbar)?;
    rescale_from_unit(&other_twisted_conv(&ta, &tb, 1.0)?, hbar, a)
}

/// Central-difference estimates of `∂_ħ(a *_ħ b)` at three step sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HbarProbe {
    /// Richardson-extrapolated derivative from steps `δ/2` and `δ/4`.
    #[serde(skip)]
    pub derivative: GridFunction2D,
    /// `‖D(δ) - D(δ/2)‖` in the discrete `L²` norm.
    pub residual_coarse: f64,
    /// `‖D(δ/2) - D(δ/4)‖`.
    pub residual_fine: f64,
    /// `residual_coarse / residual_fine`; close to 4 for a `C³` map.
    pub ratio: f64,
    /// `‖derivative‖`.
    pub derivative_norm: f64,
}

pub fn hbar_smoothness_probe(a: &GridFunction2D, b: &GridFunction2D, hbar0: f64, delta: f64) -> Result<HbarProbe> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::invalid("delta", format!("step must be positive, got {delta}")));
    }
    let central = |h: f64| -> Result<GridFunction2D> {
        let plus = twisted_conv(a, b, hbar0 + h)?;
        let minus = twisted_conv(a, b, hbar0 - h)?;
        Ok(plus.sub(&minus)?.scale(Complex64::new(0.5 / h, 0.0)))
    };
    let d1 = central(delta)?;
    let d2 = central(delta / 2.0)?;
    let d4 = central(delta / 4.0)?;
    let residual_coarse = d1.sub(&d2)?.l2_norm();
    let residual_fine = d2.sub(&d4)?.l2_norm();
    let derivative = d4.scale(Complex64::new(4.0 / 3.0, 0.0)).sub(&d2.scale(Complex64::new(1.0 / 3.0, 0.0)))?;
    Ok(HbarProbe {
        derivative_norm: derivative.l2_norm(),
        derivative,
        residual_coarse,
        residual_fine,
        ratio: residual_coarse / residual_fine,
    })
}

/// `∂_ħ(a *_ħ b) = ∫ a(t-u,s-v) b(u,v) i(s-v)u e^{i(s-v)uħ}`, exactly on the grid.
pub fn twisted_conv_hbar_derivative(a: &GridFunction2D, b: &GridFunction2D, hbar: f64) -> Result<GridFunction2D> {
    conv_engine(
        Exec::default(),
        a,
        b,
        |_, _, _| Complex64::new(1.0, 0.0),
        |x2, y2, y1| Complex64::new(0.0, (x2 - y2) * y1) * Complex64::cis(hbar * (x2 - y2) * y1),
    )
}
