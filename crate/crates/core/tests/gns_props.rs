use nalgebra::DVector;
use nctorus::gns::{
    gns_build, intertwiner, is_positive, schwarz_check, state_action, AlgebraKind, FiniteAlgebra, GnsOptions,
    PositiveForm,
};
use nctorus::{Complex64, PhaseQ};
use proptest::prelude::*;

fn algebra(n: u64) -> FiniteAlgebra {
    FiniteAlgebra::new(AlgebraKind::TorusQuotient {
        q: PhaseQ::rational(1, n).unwrap(),
    })
    .unwrap()
}

fn vector(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

/// A random vector state on the quotient of order `n`, or a convex mix with the trace.
fn form(n: u64) -> impl Strategy<Value = (FiniteAlgebra, PositiveForm)> {
    (vector(n as usize), 0.0f64..1.0).prop_map(move |(w, mix)| {
        let a = algebra(n);
        let norm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1e-3);
        let w: Vec<Complex64> = w.iter().map(|c| c / norm).collect();
        let pure = PositiveForm::vector_state(&a, &w).unwrap();
        let tr = PositiveForm::trace(&a);
        let values = pure.values.iter().zip(&tr.values).map(|(p, t)| p * mix + t * (1.0 - mix)).collect();
        (a, PositiveForm::new(values))
    })
}

fn any_form() -> impl Strategy<Value = (FiniteAlgebra, PositiveForm)> {
    (1u64..=5).prop_flat_map(form)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gns_reconstructs_and_represents((a, phi) in any_form()) {
        let t = gns_build(&phi, &a, &GnsOptions::default()).unwrap();
        prop_assert!(t.residuals.reconstruction <= 1e-10);
        prop_assert!(t.residuals.homomorphism <= 1e-10);
        prop_assert!(t.residuals.adjoint <= 1e-10);
        prop_assert_eq!(t.residuals.cyclic_rank, t.quotient_dim);
    }

    #[test]
    fn hermitian_representation((a, phi) in any_form(), x in vector(25), y in vector(25), f in vector(25)) {
        let d = a.dim();
        let t = gns_build(&phi, &a, &GnsOptions::default()).unwrap();
        let (x, y, f) = (DVector::from_column_slice(&x[..d]), DVector::from_column_slice(&y[..d]), DVector::from_column_slice(&f[..d]));
        // ⟨[x], [f y]⟩ = ⟨[f* x], [y]⟩
        let lhs = t.class_of(&x).dotc(&t.class_of(&a.mul(&f, &y)));
        let rhs = t.class_of(&a.mul(&a.adjoint(&f), &x)).dotc(&t.class_of(&y));
        prop_assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn orderings_give_equivalent_triplets((a, phi) in any_form(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut order: Vec<usize> = (0..a.dim()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let t1 = gns_build(&phi, &a, &GnsOptions::default()).unwrap();
        let t2 = gns_build(&phi, &a, &GnsOptions { order: Some(order), ..GnsOptions::default() }).unwrap();
        prop_assert!(intertwiner(&t1, &t2).unwrap().residual <= 1e-8);
    }

    #[test]
    fn state_action_preserves_positivity((a, phi) in any_form(), f in vector(25)) {
        let f = DVector::from_column_slice(&f[..a.dim()]);
        let moved = state_action(&phi, &f, &a).unwrap();
        prop_assert!(is_positive(&moved, &a, 1e-9).unwrap().is_yes());
    }

    #[test]
    fn schwarz_inequality_holds((a, phi) in any_form(), f in vector(25), s in 0.1f64..10.0) {
        let f = DVector::from_column_slice(&f[..a.dim()]);
        prop_assert!(schwarz_check(&phi, &f, &a).unwrap() <= 1e-10);
        prop_assert!(schwarz_check(&phi, &(f * Complex64::new(s, 0.0)), &a).unwrap() <= 1e-10 * s);
    }
}
