//! Weyl operators on sampled functions of one variable.
//!
//! `(Qf)(u) = u f(u)`, `(Pf)(u) = (ħ/i) f'(u)`, `(e^{itQ}f)(u) = e^{itu} f(u)`
//! and `(e^{isP}f)(u) = f(u + sħ)`, so that `[Q, P] = iħ` and
//! `e^{itQ} e^{isP} = e^{-itsħ} e^{isP} e^{itQ}`.

mod inner;

pub use inner::{solve_inner_generator, DerivationData, InnerSolution, InnerSolverOptions};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GridFunction1D;
use crate::lattice::{CoeffLattice2, PhaseQ};

/// `Qf`.
pub fn apply_q(f: &GridFunction1D) -> GridFunction1D {
    f.map(|u, c| u * c)
}

/// `Pf = (ħ/i) ∂f`, differentiated spectrally.
pub fn apply_p(f: &GridFunction1D, hbar: f64) -> GridFunction1D {
    f.derivative(1).scale(Complex64::new(0.0, -hbar))
}

/// `e^{itQ} f`.
pub fn weyl_q(t: f64, f: &GridFunction1D) -> GridFunction1D {
    f.map(|u, c| Complex64::cis(t * u) * c)
}

/// `e^{isP} f = f(· + sħ)`, by a spectral shift.
pub fn weyl_p(s: f64, f: &GridFunction1D, hbar: f64) -> GridFunction1D {
    if s * hbar == 0.0 {
        return f.clone();
    }
    f.shifted(s * hbar)
}

/// `Σ c_{k,l} e^{iσkQ} e^{iσlP} f`, summed in lexicographic order.
pub fn rep_lattice_measure(c: &CoeffLattice2, sigma: f64, hbar: f64, f: &GridFunction1D) -> Result<GridFunction1D> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid("sigma", format!("lattice spacing must be positive, got {sigma}")));
    }
    let mut out = f.zeros_like();
    for (k, l, ckl) in c.support() {
        let term = weyl_q(sigma * k as f64, &weyl_p(sigma * l as f64, f, hbar));
        out = out.add(&term.scale(ckl))?;
    }
    Ok(out)
}

/// The commutation phase of the lattice generators, measured on a probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    pub q: PhaseQ,
    /// `⟨rep(V)rep(U)f, rep(U)rep(V)f⟩ / ‖rep(V)rep(U)f‖²`.
    pub measured: Complex64,
    /// `‖rep(U)rep(V)f - q rep(V)rep(U)f‖ / ‖rep(U)rep(V)f‖`.
    pub residual: f64,
}

/// Probe norms below this are rejected as degenerate.
const MIN_PROBE_NORM: f64 = 1e-12;

/// Measures `q_eff` with `rep(U) rep(V) = q_eff rep(V) rep(U)`, where
/// `rep(U) = e^{iσQ}` and `rep(V) = e^{iσP}`.
pub fn calibrate_q(sigma: f64, hbar: f64, probe: &GridFunction1D) -> Result<Calibration> {
    let norm = probe.l2_norm();
    if !(norm >= MIN_PROBE_NORM) {
        return Err(Error::DegenerateProbe { norm });
    }
    let uv = weyl_q(sigma, &weyl_p(sigma, probe, hbar));
    let vu = weyl_p(sigma, &weyl_q(sigma, probe), hbar);
    let dot: Complex64 = vu.values().iter().zip(uv.values()).map(|(b, a)| b.conj() * a).sum();
    let nn: f64 = vu.values().iter().map(|b| b.norm_sqr()).sum();
    if !(nn.sqrt() * probe.spacing().sqrt() >= MIN_PROBE_NORM) {
        return Err(Error::DegenerateProbe { norm: nn.sqrt() });
    }
    let measured = dot / nn;
    let q = PhaseQ::irrational(measured.arg())?;
    let residual = uv.sub(&vu.scale(q.value()))?.l2_norm() / uv.l2_norm();
    Ok(Calibration { q, measured, residual })
}

/// The default probe: `e^{-u²/2}` on `[-16, 16)` with 512 samples.
pub fn default_probe() -> GridFunction1D {
    GridFunction1D::from_fn(16.0, 512, |u| Complex64::new((-u * u / 2.0).exp(), 0.0)).expect("valid grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(center: f64, width: f64) -> GridFunction1D {
        GridFunction1D::from_fn(16.0, 512, |u| {
            let x = (u - center) / width;
            Complex64::new((-x * x / 2.0).exp(), 0.0) * Complex64::cis(0.3 * u)
        })
        .unwrap()
    }

    fn rel(a: &GridFunction1D, b: &GridFunction1D) -> f64 {
        a.sub(b).unwrap().l2_norm() / b.l2_norm()
    }

    #[test]
    fn q_on_constant_gives_nodes() {
        let one = GridFunction1D::from_fn(4.0, 16, |_| Complex64::new(1.0, 0.0)).unwrap();
        let q = apply_q(&one);
        for (x, c) in one.points().iter().zip(q.values()) {
            assert_eq!(c.re, *x);
        }
    }

    #[test]
    fn canonical_commutator() {
        let f = gaussian(0.5, 1.3);
        for hbar in [0.3, 1.0, 2.5] {
            let qp = apply_q(&apply_p(&f, hbar));
            let pq = apply_p(&apply_q(&f), hbar);
            let lhs = qp.sub(&pq).unwrap();
            assert!(rel(&lhs, &f.scale(Complex64::new(0.0, hbar))) < 1e-8);
        }
        assert_eq!(apply_p(&f, 0.0).max_abs(), 0.0);
    }

    #[test]
    fn weyl_relation_and_composite() {
        let f = gaussian(-0.4, 1.0);
        let hbar = 0.7;
        for (t, s) in [(0.5, 1.2), (-1.1, 0.4), (2.0, -0.9)] {
            let lhs = weyl_q(t, &weyl_p(s, &f, hbar));
            let rhs = weyl_p(s, &weyl_q(t, &f), hbar).scale(Complex64::cis(-t * s * hbar));
            assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-8);
            let direct = GridFunction1D::from_fn(16.0, 512, |u| {
                let x = (u + s * hbar + 0.4) / 1.0;
                Complex64::cis(s * t * hbar) * Complex64::cis(t * u) * Complex64::new((-x * x / 2.0).exp(), 0.0)
                    * Complex64::cis(0.3 * (u + s * hbar))
            })
            .unwrap();
            let composite = weyl_p(s, &weyl_q(t, &f), hbar);
            assert!(composite.sub(&direct).unwrap().max_abs() < 1e-8);
        }
        assert_eq!(weyl_p(0.0, &f, hbar), f);
        assert_eq!(weyl_q(0.0, &f), f);
    }

    #[test]
    fn unitarity_and_group_law() {
        let f = gaussian(1.0, 0.8);
        let hbar = 0.9;
        assert!((weyl_q(1.7, &f).l2_norm() - f.l2_norm()).abs() < 1e-13);
        assert!((weyl_p(1.7, &f, hbar).l2_norm() - f.l2_norm()).abs() < 1e-10);
        let two_steps = weyl_p(0.4, &weyl_p(1.1, &f, hbar), hbar);
        assert!(two_steps.sub(&weyl_p(1.5, &f, hbar)).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn generators_by_central_differences() {
        let f = gaussian(0.2, 1.1);
        let hbar = 0.6;
        let h = 1e-4;
        let dq = weyl_q(h, &f).sub(&weyl_q(-h, &f)).unwrap().scale(Complex64::new(0.5 / h, 0.0));
        assert!(rel(&dq, &apply_q(&f).scale(Complex64::i())) < 1e-6);
        let dp = weyl_p(h, &f, hbar).sub(&weyl_p(-h, &f, hbar)).unwrap().scale(Complex64::new(0.5 / h, 0.0));
        assert!(rel(&dp, &apply_p(&f, hbar).scale(Complex64::i())) < 1e-6);
    }

    #[test]
    fn lattice_measure_examples() {
        let f = gaussian(0.0, 1.0);
        let same = rep_lattice_measure(&CoeffLattice2::unit(), 2.0 * PI, 0.5, &f).unwrap();
        assert_eq!(same, f);
        let u = rep_lattice_measure(&CoeffLattice2::delta(1, 0), 2.0 * PI, 0.5, &f).unwrap();
        assert_eq!(u, weyl_q(2.0 * PI, &f));
        assert!(rep_lattice_measure(&CoeffLattice2::unit(), 0.0, 0.5, &f).is_err());
    }

    #[test]
    fn calibration_examples() {
        let probe = default_probe();
        assert_eq!(calibrate_q(1.0, 0.0, &probe).unwrap().q.theta(), 0.0);
        let c = calibrate_q(1.0, PI, &probe).unwrap();
        assert!((c.q.value() - Complex64::new(-1.0, 0.0)).norm() < 1e-8);
        for k in 1..=10 {
            let hbar = 0.1 * k as f64;
            let c = calibrate_q(0.8, hbar, &probe).unwrap();
            assert!((c.q.value() - Complex64::cis(-0.64 * hbar)).norm() < 1e-8);
            assert!(c.residual < 1e-10);
        }
        let zero = probe.zeros_like();
        assert!(matches!(calibrate_q(1.0, 1.0, &zero), Err(Error::DegenerateProbe { .. })));
    }

    #[test]
    fn representation_is_multiplicative_with_calibrated_q() {
        use crate::torus::{q_mul, TorusElement};
        let (sigma, hbar) = (0.9, 0.4);
        let probe = gaussian(0.0, 1.0);
        let q = calibrate_q(sigma, hbar, &probe).unwrap().q;
        let c = TorusElement::new(CoeffLattice2::from_fn(1, 1, |k, l| Complex64::new(0.5 + k as f64, 0.25 * l as f64)), q);
        let d = TorusElement::new(CoeffLattice2::from_fn(1, 1, |k, l| Complex64::new((k * l) as f64, 1.0 - k as f64)), q);
        let cd = q_mul(&c, &d).unwrap();
        let lhs = rep_lattice_measure(&cd.coeffs, sigma, hbar, &probe).unwrap();
        let inner = rep_lattice_measure(&d.coeffs, sigma, hbar, &probe).unwrap();
        let rhs = rep_lattice_measure(&c.coeffs, sigma, hbar, &inner).unwrap();
        assert!(rel(&lhs, &rhs) < 1e-7);
    }
}
