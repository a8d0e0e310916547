use num_complex::Complex64;
use serde::Serialize;

use super::other_twisted_conv;
use crate::error::{Error, Result};
use crate::grid::GridFunction2D;

const TWO_PI_SQ: f64 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeReport {
    /// `‖A − B‖ / ‖A‖`.
    pub error: f64,
    #[serde(skip)]
    pub route_a: GridFunction2D,
    #[serde(skip)]
    pub route_b: GridFunction2D,
}

/// `(2π)² Σ_{k≤K} (iħ/2)^k/k! Σ_j C(k,j)(−1)^j ∂₁^{k−j}∂₂^j f · ∂₁^j∂₂^{k−j} g`,
/// with spectral derivatives.
pub fn moyal_grid_series(f: &GridFunction2D, g: &GridFunction2D, hbar: f64, order: u32) -> Result<GridFunction2D> {
    f.same_grid(g)?;
    let mut out = f.mul_pointwise(g)?;
    let mut weight = Complex64::new(1.0, 0.0);
    for k in 1..=order {
        weight *= Complex64::new(0.0, hbar / 2.0) / k as f64;
        let mut binom = 1.0f64;
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let term = f.derivative(k - j, j).mul_pointwise(&g.derivative(j, k - j))?;
            out = out.add(&term.scale(weight * sign * binom))?;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
    }
    Ok(out.scale(Complex64::new(TWO_PI_SQ, 0.0)))
}

/// Compares `F⁻¹(Ff *̂_ħ Fg)` with the truncated series of order `K`.
pub fn fourier_bridge(f: &GridFunction2D, g: &GridFunction2D, hbar: f64, order: u32) -> Result<BridgeReport> {
    if !hbar.is_finite() {
        return Err(Error::invalid("hbar", format!("must be finite, got {hbar}")));
    }
    f.same_grid(g)?;
    let route_a = other_twisted_conv(&f.fourier(), &g.fourier(), hbar)?.inverse_fourier();
    let route_a = f.with_values(route_a.values().to_vec());
    let route_b = moyal_grid_series(f, g, hbar, order)?;
    let error = route_b.rel_l2_diff(&route_a)?;
    Ok(BridgeReport { error, route_a, route_b })
}

pub fn fourier_bridge_error(f: &GridFunction2D, g: &GridFunction2D, hbar: f64, order: u32) -> Result<f64> {
    Ok(fourier_bridge(f, g, hbar, order)?.error)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(c: (f64, f64), w: f64) -> GridFunction2D {
        GridFunction2D::square(12.0, 64, |t, s| {
            Complex64::new((-((t - c.0).powi(2) + (s - c.1).powi(2)) / (2.0 * w * w)).exp(), 0.0)
        })
        .unwrap()
    }

    #[test]
    fn zero_hbar_gives_scaled_product() {
        let (f, g) = (gauss((0.5, 0.0), 1.0), gauss((0.0, -0.5), 1.2));
        let r = fourier_bridge(&f, &g, 0.0, 0).unwrap();
        assert!(r.error <= 1e-8, "{}", r.error);
        let expect = f.mul_pointwise(&g).unwrap().scale(Complex64::new(TWO_PI_SQ, 0.0));
        assert!(r.route_a.rel_l2_diff(&expect).unwrap() <= 1e-8);
    }

    #[test]
    fn series_matches_at_small_hbar() {
        let (f, g) = (gauss((0.5, 0.0), 1.0), gauss((0.0, -0.5), 1.2));
        let errs: Vec<f64> = (0..=8).map(|k| fourier_bridge_error(&f, &g, 0.05, k).unwrap()).collect();
        assert!(errs[8] <= 1e-3);
    }

    #[test]
    fn series_refines_with_order() {
        let (f, g) = (gauss((0.5, 0.0), 1.0), gauss((0.0, -0.5), 1.2));
        for hbar in [0.05, 0.1] {
            let errs: Vec<f64> = (0..=10).map(|k| fourier_bridge_error(&f, &g, hbar, k).unwrap()).collect();
            for k in 0..=8 {
                assert!(errs[k + 2] <= errs[k] + 1e-12, "hbar {hbar}, K {k}: {errs:?}");
            }
            assert!(errs[4] < 1e-2 * errs[0]);
        }
    }

    #[test]
    fn sign_of_first_order_term_matters() {
        let (f, g) = (gauss((0.5, 0.0), 1.0), gauss((0.0, -0.5), 1.2));
        let good = fourier_bridge(&f, &g, 0.05, 1).unwrap();
        let flipped = moyal_grid_series(&f, &g, -0.05, 1).unwrap();
        assert!(flipped.rel_l2_diff(&good.route_a).unwrap() > 10.0 * good.error);
    }
}
