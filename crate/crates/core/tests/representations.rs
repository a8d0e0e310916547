mod common;

use common::{coeff, lattice, rational_q};
use nctorus::grid::GridFunction1D;
use nctorus::heisenberg::{apply_p, apply_q, rep_lattice_measure, weyl_p, weyl_q};
use nctorus::matrep::{clock_shift, eval_section, fiber_check, fiber_grid};
use nctorus::torus::{q_mul, TorusElement};
use nctorus::{CoeffLattice2, Complex64, Exec};
use proptest::prelude::*;

fn gaussian_1d(center: f64, width: f64, k: f64) -> GridFunction1D {
    GridFunction1D::from_fn(16.0, 512, |u| {
        let x = (u - center) / width;
        Complex64::new((-x * x / 2.0).exp(), 0.0) * Complex64::cis(k * u)
    })
    .unwrap()
}

fn unit_pair() -> impl Strategy<Value = (Complex64, Complex64)> {
    (0.0f64..std::f64::consts::TAU, 0.0f64..std::f64::consts::TAU).prop_map(|(a, b)| (Complex64::cis(a), Complex64::cis(b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sections_are_multiplicative_and_star_preserving(q in rational_q(), f in lattice(3), g in lattice(3)) {
        let f = TorusElement::new(f, q);
        let g = TorusElement::new(g, q);
        let r = fiber_check(Exec::Sequential, &f, &g, &fiber_grid()).unwrap();
        prop_assert!(r.multiplicative <= 1e-10);
        prop_assert!(r.star <= 1e-10);
    }

    #[test]
    fn center_evaluates_to_scalars(q in rational_q(), c in lattice(1), (u, v) in unit_pair()) {
        let n = q.order().unwrap() as i64;
        let mut z = CoeffLattice2::zeros((n as usize) * 1, (n as usize) * 1);
        for (k, l, x) in c.iter() {
            z.set(k * n, l * n, x);
        }
        let e = eval_section(&TorusElement::new(z, q), u, v).unwrap();
        prop_assert!(e.scalar_defect() <= 1e-12);
    }

    #[test]
    fn sections_are_covariant(q in rational_q(), f in lattice(2), (u, v) in unit_pair(), m in -3i64..3, n in -3i64..3) {
        let f = TorusElement::new(f, q);
        let (u0, v0) = clock_shift(q).unwrap();
        let e = eval_section(&f, u, v).unwrap();
        let moved = eval_section(&f, q.pow(m) * u, q.pow(n) * v).unwrap();
        let conj = u0.unitary_pow(n).mul(&v0.unitary_pow(-m)).mul(&e).mul(&v0.unitary_pow(m)).mul(&u0.unitary_pow(-n));
        prop_assert!(moved.sub(&conj).op_norm() <= 1e-10);
    }

    #[test]
    fn weyl_operators_are_unitary(t in -2.0f64..2.0, s in -2.0f64..2.0, hbar in 0.1f64..1.5, c in -1.0f64..1.0) {
        let f = gaussian_1d(c, 1.0, 0.3);
        prop_assert!((weyl_q(t, &f).l2_norm() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
        prop_assert!((weyl_p(s, &f, hbar).l2_norm() - f.l2_norm()).abs() <= 1e-10 * f.l2_norm());
    }

    #[test]
    fn weyl_p_is_a_group(s1 in -1.5f64..1.5, s2 in -1.5f64..1.5, hbar in 0.1f64..1.0) {
        let f = gaussian_1d(0.2, 1.0, 0.0);
        let two = weyl_p(s1, &weyl_p(s2, &f, hbar), hbar);
        prop_assert!(two.sub(&weyl_p(s1 + s2, &f, hbar)).unwrap().max_abs() <= 1e-9);
    }

    #[test]
    fn weyl_relation_holds(t in -2.0f64..2.0, s in -2.0f64..2.0, hbar in 0.1f64..1.5) {
        let f = gaussian_1d(-0.3, 1.1, 0.2);
        let lhs = weyl_q(t, &weyl_p(s, &f, hbar));
        let rhs = weyl_p(s, &weyl_q(t, &f), hbar).scale(Complex64::cis(-t * s * hbar));
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-8);
    }

    #[test]
    fn canonical_commutator(hbar in 0.1f64..2.0, c in -1.0f64..1.0) {
        let f = gaussian_1d(c, 1.2, 0.0);
        let comm = apply_q(&apply_p(&f, hbar)).sub(&apply_p(&apply_q(&f), hbar)).unwrap();
        let expect = f.scale(Complex64::new(0.0, hbar));
        prop_assert!(comm.sub(&expect).unwrap().l2_norm() <= 1e-8 * expect.l2_norm());
    }

    #[test]
    fn lattice_measure_is_linear(c1 in lattice(1), c2 in lattice(1), a in coeff(), hbar in 0.2f64..1.0) {
        let f = gaussian_1d(0.0, 1.0, 0.0);
        let g = gaussian_1d(0.5, 0.8, 0.4);
        let sigma = 0.7;
        let lhs = rep_lattice_measure(&c1.scale(a).add(&c2), sigma, hbar, &f).unwrap();
        let rhs = rep_lattice_measure(&c1, sigma, hbar, &f).unwrap().scale(a).add(&rep_lattice_measure(&c2, sigma, hbar, &f).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12);
        let lhs = rep_lattice_measure(&c1, sigma, hbar, &f.scale(a).add(&g).unwrap()).unwrap();
        let rhs = rep_lattice_measure(&c1, sigma, hbar, &f).unwrap().scale(a).add(&rep_lattice_measure(&c1, sigma, hbar, &g).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12);
    }
}

#[test]
fn products_evaluate_consistently_at_the_identity_fiber() {
    let q = nctorus::PhaseQ::rational(2, 5).unwrap();
    let f = TorusElement::new(CoeffLattice2::from_fn(2, 1, |k, l| Complex64::new(k as f64, l as f64)), q);
    let g = TorusElement::new(CoeffLattice2::from_fn(1, 2, |k, l| Complex64::new(1.0, (k - l) as f64)), q);
    let one = Complex64::new(1.0, 0.0);
    let lhs = eval_section(&q_mul(&f, &g).unwrap(), one, one).unwrap();
    let rhs = eval_section(&f, one, one).unwrap().mul(&eval_section(&g, one, one).unwrap());
    assert!(lhs.sub(&rhs).op_norm() <= 1e-12);
}
