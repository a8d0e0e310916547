use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{nan_max, Exec};
use crate::grid::GridFunction2D;

/// Coefficient densities of `D(Q) = ∫ a_Q(t,s) e^{itQ} e^{isP}` and
/// `D(P) = ∫ a_P(t,s) e^{itQ} e^{isP}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationData {
    pub a_q: GridFunction2D,
    pub a_p: GridFunction2D,
    pub hbar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolverOptions {
    /// Bound on `max |a_Q t + a_P s| / max(|a_Q t|, |a_P s|)`.
    pub compatibility_tol: f64,
    /// Bound on the relative disagreement of the two division branches.
    pub branch_tol: f64,
    /// Division is used at least this many cells away from an axis.
    pub cutoff_cells: usize,
    pub exec: Exec,
}

impl Default for InnerSolverOptions {
    fn default() -> Self {
        InnerSolverOptions {
            compatibility_tol: 1e-8,
            branch_tol: 1e-6,
            cutoff_cells: 2,
            exec: Exec::default(),
        }
    }
}

/// `b` with `ad(b) = D` on `Q` and `P`, normalized so that the origin sample
/// carries no extra multiple of the unit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerSolution {
    pub b: GridFunction2D,
    pub compatibility_residual: f64,
    pub branch_disagreement: f64,
    pub quadrature_nodes: usize,
}

/// Solves `b(t,s) sħ = a_Q(t,s)` and `-b(t,s) tħ = a_P(t,s)`.
///
/// Off the axes `b` is a quotient; in the box where both `|t|` and `|s|` are
/// below the cutoff it comes from the Poincaré integral on the Fourier side,
/// `b̂(x) = (iħ)⁻¹ ∫₀¹ (â_Q(τx) x₂ - â_P(τx) x₁) dτ`, and at the origin from
/// the limit `(∂_s a_Q - ∂_t a_P)(0) / 2ħ`.
pub fn solve_inner_generator(d: &DerivationData, opts: &InnerSolverOptions) -> Result<InnerSolution> {
    let hbar = d.hbar;
    if !(hbar.is_finite() && hbar != 0.0) {
        return Err(Error::invalid("hbar", format!("must be finite and nonzero, got {hbar}")));
    }
    let (aq, ap) = (&d.a_q, &d.a_p);
    aq.same_grid(ap)?;
    let ts = aq.t_points();
    let ss = aq.s_points();
    let (nt, ns) = (aq.n_t(), aq.n_s());
    let (ct, cs) = (nt / 2, ns / 2);

    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut scale = 0.0f64;
    for i in 0..nt {
        for j in 0..ns {
            let (t, s) = (ts[i], ss[j]);
            let (x, y) = (aq.get(i, j) * t, ap.get(i, j) * s);
            scale = scale.max(x.norm()).max(y.norm());
            let r = (x + y).norm();
            if r > worst.2 {
                worst = (t, s, r);
            }
        }
    }
    let compatibility_residual = if scale == 0.0 { 0.0 } else { worst.2 / scale };
    if !(compatibility_residual <= opts.compatibility_tol) {
        return Err(Error::Compatibility {
            t: worst.0,
            s: worst.1,
            residual: compatibility_residual,
        });
    }

    let k = opts.cutoff_cells;
    let far = |idx: usize, center: usize| idx.abs_diff(center) >= k;
    let mut values = vec![Complex64::new(0.0, 0.0); nt * ns];
    let mut disagreement = 0.0f64;
    let mut bmax = 0.0f64;
    for i in 0..nt {
        for j in 0..ns {
            let (t, s) = (ts[i], ss[j]);
            let by_s = far(j, cs).then(|| aq.get(i, j) / (s * hbar));
            let by_t = far(i, ct).then(|| -ap.get(i, j) / (t * hbar));
            let b = match (by_s, by_t) {
                (Some(x), Some(y)) => {
                    disagreement = nan_max(disagreement, (x - y).norm());
                    if s.abs() >= t.abs() {
                        x
                    } else {
                        y
                    }
                }
                (Some(x), None) => x,
                (None, Some(y)) => y,
                (None, None) => continue,
            };
            bmax = bmax.max(b.norm());
            values[i * ns + j] = b;
        }
    }
    let branch_disagreement = if bmax == 0.0 { disagreement } else { disagreement / bmax };
    if !(branch_disagreement <= opts.branch_tol) {
        return Err(Error::BranchDisagreement {
            residual: branch_disagreement,
        });
    }

    let (poincare, nodes) = poincare_generator(opts.exec, aq, ap, hbar);
    for i in 0..nt {
        for j in 0..ns {
            if !far(i, ct) && !far(j, cs) {
                values[i * ns + j] = poincare.get(i, j);
            }
        }
    }
    let dq = aq.derivative(0, 1).get(ct, cs);
    let dp = ap.derivative(1, 0).get(ct, cs);
    values[ct * ns + cs] = (dq - dp) / (2.0 * hbar);

    Ok(InnerSolution {
        b: aq.with_values(values),
        compatibility_residual,
        branch_disagreement,
        quadrature_nodes: nodes,
    })
}

/// `F⁻¹` of the Poincaré integral with `b̂(0) = 0`, on the grid of `a_Q`.
fn poincare_generator(exec: Exec, aq: &GridFunction2D, ap: &GridFunction2D, hbar: f64) -> (GridFunction2D, usize) {
    let (nt, ns) = (aq.n_t(), aq.n_s());
    let spectrum = aq.fourier();
    let xi = spectrum.t_points();
    let eta = spectrum.s_points();
    let ts = aq.t_points();
    let ss = aq.s_points();

    let omega = std::f64::consts::PI * (nt + ns) as f64 / 2.0;
    let m = 32usize.max((omega / 2.0).ceil() as usize + 16);
    let rule = GaussLegendre::new(NonZeroUsize::new(m).expect("m ≥ 32"));
    let pairs: Vec<(f64, f64)> = rule
        .nodes()
        .zip(rule.weights())
        .map(|(&x, &w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();

    let a_q = DMatrix::from_fn(nt, ns, |i, j| aq.get(i, j));
    let a_p = DMatrix::from_fn(nt, ns, |i, j| ap.get(i, j));
    let cell = aq.dt() * aq.ds();
    let inv_ih = Complex64::new(0.0, -1.0 / hbar);

    let terms = exec.map(pairs.len(), |n| {
        let (tau, w) = pairs[n];
        let e1 = DMatrix::from_fn(nt, nt, |k, i| Complex64::cis(-ts[i] * tau * xi[k]));
        let e2 = DMatrix::from_fn(ns, ns, |j, k| Complex64::cis(-ss[j] * tau * eta[k]));
        let hq = &e1 * &a_q * &e2;
        let hp = &e1 * &a_p * &e2;
        DMatrix::from_fn(nt, ns, |k1, k2| {
            (hq[(k1, k2)] * eta[k2] - hp[(k1, k2)] * xi[k1]) * (w * cell) * inv_ih
        })
    });
    let mut psi = DMatrix::from_element(nt, ns, Complex64::new(0.0, 0.0));
    for t in &terms {
        psi += t;
    }
    let psi_values: Vec<Complex64> = (0..nt).flat_map(|i| (0..ns).map(move |j| (i, j))).map(|(i, j)| psi[(i, j)]).collect();
    let b = spectrum.with_values(psi_values).inverse_fourier();
    (aq.with_values(b.values().to_vec()), m)
}
