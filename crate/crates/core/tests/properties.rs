use ghcs::dynamics::{evolve, rotation_property};
use ghcs::kernel::{gram_min_eigenvalue, kernel};
use ghcs::states::{label_distance, overlap, state};
use ghcs::thermal::{boltzmann_moment, oracle_observables, G2Convention};
use ghcs::{Complex64, FamilyParams};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = FamilyParams> {
    (any::<bool>(), 0u32..4, 0.05f64..2.0).prop_map(|(bessel, m, nu)| {
        if bessel {
            FamilyParams::bessel(m, nu).unwrap()
        } else {
            FamilyParams::jacobi(m, nu).unwrap()
        }
    })
}

/// Label inside the disc, as a fraction of a family-dependent radius.
fn label(p: &FamilyParams, r: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(r * p.radius().min(4.0) * 0.95, theta)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn overlap_is_bounded(p in params(), r1 in 0.0f64..1.0, t1 in -3.2f64..3.2, r2 in 0.0f64..1.0, t2 in -3.2f64..3.2) {
        let (a, b) = (label(&p, r1, t1), label(&p, r2, t2));
        let o = overlap(&p, a, b).unwrap();
        prop_assert!(o.norm() <= 1.0 + 1e-12);
        prop_assert!((overlap(&p, a, a).unwrap() - 1.0).norm() < 1e-12);
        prop_assert!(label_distance(&p, a, b).unwrap() <= 2.0);
    }

    #[test]
    fn kernel_is_hermitian(p in params(), r1 in 0.0f64..1.0, t1 in -3.2f64..3.2, r2 in 0.0f64..1.0, t2 in -3.2f64..3.2) {
        let (a, b) = (label(&p, r1, t1), label(&p, r2, t2));
        let d = kernel(&p, a, b).unwrap() - kernel(&p, b, a).unwrap().conj();
        prop_assert!(d.norm() < 1e-14);
    }

    #[test]
    fn gram_is_positive(p in params(), rs in prop::collection::vec((0.0f64..1.0, -3.2f64..3.2), 4)) {
        let labels: Vec<_> = rs.iter().map(|&(r, t)| label(&p, r, t)).collect();
        prop_assert!(gram_min_eigenvalue(&p, &labels).unwrap() >= -1e-9);
    }

    #[test]
    fn evolution_is_unitary(p in params(), r in 0.0f64..1.0, th in -3.2f64..3.2, t in -20.0f64..20.0) {
        let z = label(&p, r, th);
        let v = state(&p, z, None).unwrap();
        let w = evolve(&p, &v, t);
        prop_assert!((w.norm_sqr() - v.norm_sqr()).abs() < 1e-12);
        prop_assert!((w.inner(&w) - v.inner(&v)).norm() < 1e-12);
        prop_assert!(rotation_property(&p, z, t).unwrap() < 1e-10);
    }

    #[test]
    fn thermal_moments_are_consistent(beta in 0.05f64..5.0, mu in -0.9f64..4.0) {
        let o = oracle_observables(beta, mu, G2Convention::Conventional).unwrap();
        prop_assert!(o.n2_mean - o.n_mean * o.n_mean >= -1e-15 * o.n2_mean);
        prop_assert!(boltzmann_moment(beta * 1.1, mu, 1).unwrap() <= o.n_mean * (1.0 + 1e-14));
    }
}
