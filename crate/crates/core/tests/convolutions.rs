mod common;

use common::{gaussian, gaussian_params};
use nctorus::twisted::{
    gauge_iso, heisenberg_group_conv, other_twisted_conv, twisted_conv, twisted_conv_with, GaugeDirection,
};
use nctorus::{Complex64, Exec};
use proptest::prelude::*;

const L: f64 = 8.0;
const N: usize = 32;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn convolutions_are_bilinear(pa in gaussian_params(), pb in gaussian_params(), pc in gaussian_params(), re in -1.0f64..1.0, hbar in 0.0f64..1.0) {
        let a = gaussian(L, N, pa.0, pa.1, pa.2);
        let b = gaussian(L, N, pb.0, pb.1, pb.2);
        let c = gaussian(L, N, pc.0, pc.1, pc.2);
        let alpha = Complex64::new(re, 0.5);
        let bc = b.scale(alpha).add(&c).unwrap();
        for conv in [twisted_conv, other_twisted_conv] {
            let lhs = conv(&a, &bc, hbar).unwrap();
            let rhs = conv(&a, &b, hbar).unwrap().scale(alpha).add(&conv(&a, &c, hbar).unwrap()).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12);
            let lhs = conv(&bc, &a, hbar).unwrap();
            let rhs = conv(&b, &a, hbar).unwrap().scale(alpha).add(&conv(&c, &a, hbar).unwrap()).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12);
        }
    }

    #[test]
    fn gauge_map_intertwines(pa in gaussian_params(), pb in gaussian_params(), hbar in 0.0f64..1.5) {
        let a = gaussian(L, N, pa.0, pa.1, pa.2);
        let b = gaussian(L, N, pb.0, pb.1, pb.2);
        let g = |x: &nctorus::grid::GridFunction2D| gauge_iso(x, hbar, GaugeDirection::Forward);
        let lhs = g(&twisted_conv(&a, &b, hbar).unwrap());
        let rhs = other_twisted_conv(&g(&a), &g(&b), hbar).unwrap();
        prop_assert!(lhs.rel_l2_diff(&rhs).unwrap() <= 1e-6);
    }

    #[test]
    fn group_convolution_agrees(pa in gaussian_params(), pb in gaussian_params(), hbar in 0.0f64..1.0) {
        let a = gaussian(L, 16, pa.0, pa.1, pa.2);
        let b = gaussian(L, 16, pb.0, pb.1, pb.2);
        let g = heisenberg_group_conv(&a, &b, hbar).unwrap();
        let o = other_twisted_conv(&a, &b, hbar).unwrap();
        prop_assert!(g.sub(&o).unwrap().max_abs() <= 1e-10 * o.max_abs().max(1.0));
    }

    #[test]
    fn execution_policy_is_invisible(pa in gaussian_params(), pb in gaussian_params(), hbar in 0.0f64..1.0) {
        let a = gaussian(L, N, pa.0, pa.1, pa.2);
        let b = gaussian(L, N, pb.0, pb.1, pb.2);
        prop_assert_eq!(
            twisted_conv_with(Exec::Sequential, &a, &b, hbar).unwrap(),
            twisted_conv_with(Exec::Parallel, &a, &b, hbar).unwrap()
        );
    }
}
