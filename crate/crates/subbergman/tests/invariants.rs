//! Property-based invariants: structural identities that must hold across
//! randomly drawn parameters, not just at hand-picked examples.

use num_complex::Complex64;
use proptest::prelude::*;
use subbergman::analytic::{BlaschkeProduct, MoebiusMap, PowerSeries};
use subbergman::bergman::{
    inner_product_quadrature, BergmanSpaceModel, KernelSpec, PointKernel,
};
use subbergman::pick::NormalizedKernel;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A point strictly inside the disk of the given radius.
fn disk_point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..radius, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, theta)| Complex64::from_polar(r, theta))
}

fn unimodular() -> impl Strategy<Value = Complex64> {
    (0.0..std::f64::consts::TAU).prop_map(|t| Complex64::from_polar(1.0, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moebius_maps_the_circle_to_the_circle(
        xi in unimodular(),
        a in disk_point(0.95),
        theta in 0.0..std::f64::consts::TAU,
    ) {
        let m = MoebiusMap::new(xi, a).unwrap();
        let z = Complex64::from_polar(1.0, theta);
        let image = m.eval(z).unwrap();
        prop_assert!((image.norm() - 1.0).abs() < 1e-10, "modulus {}", image.norm());
    }

    #[test]
    fn moebius_is_an_involution_up_to_rotation(
        a in disk_point(0.9),
        z in disk_point(0.999),
    ) {
        // with xi = 1 the map is its own inverse
        let m = MoebiusMap::new(Complex64::ONE, a).unwrap();
        let twice = m.eval(m.eval(z).unwrap()).unwrap();
        prop_assert!((twice - z).norm() < 1e-9, "double application drifted by {:e}", (twice - z).norm());
    }

    #[test]
    fn blaschke_products_are_unimodular_on_the_circle(
        xi in unimodular(),
        zeros in proptest::collection::vec(disk_point(0.9), 1..4),
        theta in 0.0..std::f64::consts::TAU,
    ) {
        let b = BlaschkeProduct::with_repeated_zeros(xi, zeros).unwrap();
        let z = Complex64::from_polar(1.0, theta);
        let image = b.eval(z).unwrap();
        prop_assert!((image.norm() - 1.0).abs() < 1e-10, "modulus {}", image.norm());
    }

    #[test]
    fn blaschke_is_contractive_inside(
        zeros in proptest::collection::vec(disk_point(0.85), 1..4),
        z in disk_point(0.99),
    ) {
        let b = BlaschkeProduct::with_repeated_zeros(Complex64::ONE, zeros).unwrap();
        prop_assert!(b.eval(z).unwrap().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn series_expansion_tracks_the_map(
        xi in unimodular(),
        a in disk_point(0.8),
        z in disk_point(0.6),
    ) {
        let m = MoebiusMap::new(xi, a).unwrap();
        let s = m.series(160);
        let err = (s.eval(z) - m.eval(z).unwrap()).norm();
        // tail ratio at most 0.8 * 0.6: comfortably below 1e-10 by degree 160
        prop_assert!(err < 1e-10, "series error {err:e}");
    }

    #[test]
    fn antiderivative_then_derivative_is_identity(
        coeffs in proptest::collection::vec((-3.0..3.0, -3.0..3.0), 0..8),
        offset in (-5.0..5.0, -5.0..5.0),
    ) {
        let p = PowerSeries::from_coeffs(
            coeffs.into_iter().map(|(re, im)| c(re, im)).collect(),
        ).unwrap();
        let restored = p.antiderivative(c(offset.0, offset.1)).derivative();
        // dividing by n + 1 and multiplying back rounds once each way
        let scale = p.max_coeff_modulus().max(1.0);
        for n in 0..p.coeffs().len().max(restored.coeffs().len()) {
            let err = (restored.coeff(n) - p.coeff(n)).norm();
            prop_assert!(err <= 1e-15 * scale, "coefficient {n} off by {err:e}");
        }
    }

    #[test]
    fn kernel_values_are_hermitian_and_diagonally_positive(
        s in 0.25..4.0f64,
        z in disk_point(0.9),
        w in disk_point(0.9),
    ) {
        let k = KernelSpec::generalized(s).unwrap();
        let forward = k.eval(z, w).unwrap();
        let backward = k.eval(w, z).unwrap();
        prop_assert!((forward - backward.conj()).norm() < 1e-12 * forward.norm().max(1.0));
        let diag = k.eval(z, z).unwrap();
        prop_assert!(diag.re > 0.0 && diag.im.abs() < 1e-12 * diag.re);
    }

    #[test]
    fn sub_bergman_diagonal_is_nonnegative(
        alpha in -0.9..3.0f64,
        a in disk_point(0.8),
        z in disk_point(0.9),
    ) {
        let phi = MoebiusMap::new(Complex64::ONE, a).unwrap();
        let k = KernelSpec::sub_bergman(alpha, phi.into()).unwrap();
        let diag = k.eval(z, z).unwrap();
        prop_assert!(diag.re >= 0.0, "diagonal {diag}");
        prop_assert!(diag.im.abs() < 1e-10 * diag.re.max(1.0));
    }

    #[test]
    fn quadrature_agrees_with_the_norm_table(
        alpha in -0.9..3.0f64,
        f_coeffs in proptest::collection::vec((-1.0..1.0, -1.0..1.0), 1..20),
        g_coeffs in proptest::collection::vec((-1.0..1.0, -1.0..1.0), 1..20),
    ) {
        let f = PowerSeries::from_coeffs(
            f_coeffs.into_iter().map(|(re, im)| c(re, im)).collect(),
        ).unwrap();
        let g = PowerSeries::from_coeffs(
            g_coeffs.into_iter().map(|(re, im)| c(re, im)).collect(),
        ).unwrap();
        let space = BergmanSpaceModel::new(alpha, 40).unwrap();
        let table = space.inner_product(&f, &g).unwrap();
        let quad = inner_product_quadrature(&f, &g, &space).unwrap();
        prop_assert!(
            (table - quad).norm() < 1e-11,
            "routes disagree by {:e}",
            (table - quad).norm()
        );
    }

    #[test]
    fn normalization_is_invariant_under_kernel_rescaling(
        s in 0.5..3.0f64,
        z in disk_point(0.85),
        w in disk_point(0.85),
        g_coeff in -0.4..0.4f64,
    ) {
        // k -> g(z) k(z, w) conj(g(w)) with zero-free g leaves the
        // normalized kernel untouched
        struct Rescaled {
            base: KernelSpec,
            g: PowerSeries,
        }
        impl PointKernel for Rescaled {
            fn kernel(&self, z: Complex64, w: Complex64) -> subbergman::Result<Complex64> {
                Ok(self.g.eval(z) * self.base.kernel(z, w)? * self.g.eval(w).conj())
            }
        }
        let base = KernelSpec::generalized(s).unwrap();
        let rescaled = Rescaled {
            base: base.clone(),
            g: PowerSeries::from_real_coeffs(&[1.0, g_coeff]).unwrap(),
        };
        let plain = NormalizedKernel::new(&base, Complex64::ZERO).unwrap();
        let tilted = NormalizedKernel::new(&rescaled, Complex64::ZERO).unwrap();
        let p = plain.kernel(z, w).unwrap();
        let t = tilted.kernel(z, w).unwrap();
        prop_assert!((p - t).norm() < 1e-10 * p.norm().max(1.0), "normalization leaked the rescaling");
    }
}
