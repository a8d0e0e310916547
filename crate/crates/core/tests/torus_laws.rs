mod common;

use common::{any_q, coeff, element, lattice, rational_q, triple};
use nctorus::torus::{
    adjoint, apply_derivation, check_derivation_relation, d_power, inner_derivation, q_mul, trace, DerivationSpec,
    TorusElement,
};
use nctorus::{CoeffLattice2, PhaseQ};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

const TOL: f64 = 1e-12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_mul_is_associative((f, g, h) in triple(4, any_q())) {
        let left = q_mul(&q_mul(&f, &g).unwrap(), &h).unwrap();
        let right = q_mul(&f, &q_mul(&g, &h).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) <= TOL * 10.0);
    }

    #[test]
    fn adjoint_is_an_involutive_antihomomorphism((f, g, _) in triple(4, any_q())) {
        prop_assert!(adjoint(&adjoint(&f)).max_abs_diff(&f) <= TOL);
        let lhs = adjoint(&q_mul(&f, &g).unwrap());
        let rhs = q_mul(&adjoint(&g), &adjoint(&f)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= TOL * 10.0);
    }

    #[test]
    fn trace_is_tracial((f, g, _) in triple(4, any_q())) {
        let fg = trace(&q_mul(&f, &g).unwrap());
        let gf = trace(&q_mul(&g, &f).unwrap());
        prop_assert!((fg - gf).norm() <= TOL * 10.0);
    }

    #[test]
    fn seminorm_is_homogeneous_subadditive_and_monotone(f in lattice(4), g in lattice(4), a in coeff(), m in 0u32..4) {
        let s = f.seminorm(m);
        prop_assert!((f.scale(a).seminorm(m) - a.norm() * s).abs() <= 1e-12 * (1.0 + s));
        prop_assert!(f.add(&g).seminorm(m) <= s + g.seminorm(m) + 1e-12);
        prop_assert!(s <= f.seminorm(m + 1) + 1e-12);
    }

    #[test]
    fn primed_coefficients_invert(f in lattice(4), q in any_q()) {
        // At q = -1 the conjugate phase is q itself and picks the same square root.
        if q.conj() != q || q == PhaseQ::ONE {
            prop_assert!(f.to_primed(&q).to_primed(&q.conj()).max_abs_diff(&f) <= 1e-14);
        }
        prop_assert!(f.to_primed(&q).from_primed(&q).max_abs_diff(&f) <= 1e-14);
    }

    #[test]
    fn zero_padding_changes_nothing((f, g, _) in triple(3, any_q()), pad in 0usize..3) {
        let fp = TorusElement::new(f.coeffs.padded(f.coeffs.radius_k() + pad, f.coeffs.radius_l() + pad), f.q);
        let a = q_mul(&f, &g).unwrap();
        let b = q_mul(&fp, &g).unwrap();
        prop_assert!(a.max_abs_diff(&b) == 0.0);
        prop_assert!(adjoint(&fp).max_abs_diff(&adjoint(&f)) == 0.0);
        prop_assert_eq!(trace(&fp), trace(&f));
    }

    #[test]
    fn inner_derivations_satisfy_the_relation_and_leibniz((a, f, g) in triple(2, any_q())) {
        let d = DerivationSpec::inner(&a);
        prop_assert!(check_derivation_relation(&d, 1e-10).is_ok());
        let lhs = apply_derivation(&d, &q_mul(&f, &g).unwrap(), 1e-10).unwrap();
        let rhs = q_mul(&apply_derivation(&d, &f, 1e-10).unwrap(), &g)
            .unwrap()
            .add(&q_mul(&f, &apply_derivation(&d, &g, 1e-10).unwrap()).unwrap())
            .unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
        prop_assert!(apply_derivation(&d, &f, 1e-10).unwrap().max_abs_diff(&inner_derivation(&a, &f).unwrap()) <= 1e-10);
    }

    #[test]
    fn outer_generators_satisfy_leibniz((f, g, _) in triple(3, any_q())) {
        for (m, n) in [(1, 0), (0, 1)] {
            let lhs = d_power(&q_mul(&f, &g).unwrap(), m, n);
            let rhs = q_mul(&d_power(&f, m, n), &g).unwrap().add(&q_mul(&f, &d_power(&g, m, n)).unwrap()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
        }
    }

    #[test]
    fn inner_derivations_kill_the_center(q in rational_q(), a in lattice(2)) {
        let n = q.order().unwrap() as i64;
        prop_assume!(n > 1);
        let a = TorusElement::new(a, q);
        let z = TorusElement::monomial(n, 0, q);
        prop_assert!(inner_derivation(&a, &z).unwrap().max_abs_diff(&TorusElement::new(CoeffLattice2::zeros(0, 0), q)) <= 1e-10);
        let outer = apply_derivation(&DerivationSpec::d_u(q), &z, 1e-10).unwrap();
        prop_assert!((outer.get(n, 0).re - n as f64).abs() <= 1e-10);
    }
}

#[test]
fn uv_relation_is_exact_at_quarter_turn() {
    let q = PhaseQ::rational(1, 4).unwrap();
    let uv = q_mul(&TorusElement::u(q), &TorusElement::v(q)).unwrap();
    let vu = q_mul(&TorusElement::v(q), &TorusElement::u(q)).unwrap();
    assert!(uv.max_abs_diff(&vu.scale(q.value())) <= 1e-14);
}

#[test]
fn element_strategy_respects_q() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let q = PhaseQ::rational(1, 3).unwrap();
    let f = element(2, q).new_tree(&mut runner).unwrap().current();
    assert_eq!(f.q, q);
}
