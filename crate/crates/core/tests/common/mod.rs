#![allow(dead_code)]

use nctorus::grid::GridFunction2D;
use nctorus::torus::TorusElement;
use nctorus::{CoeffLattice2, Complex64, PhaseQ};
use proptest::prelude::*;

pub fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

pub fn lattice(max_radius: usize) -> impl Strategy<Value = CoeffLattice2> {
    (0..=max_radius, 0..=max_radius).prop_flat_map(|(rk, rl)| {
        prop::collection::vec(coeff(), (2 * rk + 1) * (2 * rl + 1))
            .prop_map(move |c| CoeffLattice2::new(rk, rl, c).expect("sized to the box"))
    })
}

pub fn rational_q() -> impl Strategy<Value = PhaseQ> {
    (1u64..=8).prop_flat_map(|n| (0..n as i64).prop_map(move |p| PhaseQ::rational(p, n).expect("n ≥ 1")))
}

pub fn any_q() -> impl Strategy<Value = PhaseQ> {
    prop_oneof![
        rational_q(),
        (-3.0f64..3.0).prop_map(|t| PhaseQ::irrational(t).expect("finite")),
    ]
}

pub fn element(max_radius: usize, q: PhaseQ) -> impl Strategy<Value = TorusElement> {
    lattice(max_radius).prop_map(move |c| TorusElement::new(c, q))
}

/// Three elements sharing one `q`.
pub fn triple(max_radius: usize, q: impl Strategy<Value = PhaseQ>) -> impl Strategy<Value = (TorusElement, TorusElement, TorusElement)> {
    q.prop_flat_map(move |q| (element(max_radius, q), element(max_radius, q), element(max_radius, q)))
}

/// `e^{-|x-c|²/2w²} e^{i⟨k,x⟩}` on `[-L, L)²` with `n × n` samples.
pub fn gaussian(l: f64, n: usize, c: (f64, f64), w: f64, k: (f64, f64)) -> GridFunction2D {
    GridFunction2D::square(l, n, |t, s| {
        let r2 = ((t - c.0).powi(2) + (s - c.1).powi(2)) / (w * w);
        Complex64::new((-r2 / 2.0).exp(), 0.0) * Complex64::cis(k.0 * t + k.1 * s)
    })
    .expect("valid grid")
}

/// Gaussian parameters well inside `[-8, 8)²`.
pub fn gaussian_params() -> impl Strategy<Value = ((f64, f64), f64, (f64, f64))> {
    ((-1.0f64..1.0, -1.0f64..1.0), 0.7f64..1.3, (-0.5f64..0.5, -0.5f64..0.5))
}
