mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::*;
use ellcf::elliptical::*;
use ellcf::quadrature::{integrate_half_line, integrate_interval, QuadratureControl};
use ellcf::specfun::{bessel_j, hyp0f1};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use statrs::function::gamma::gamma as gamma_oracle;

#[test]
fn omega_n_examples() {
    for n in 1..=10 {
        assert_eq!(omega_n(n, 0.0).unwrap(), 1.0);
    }
    assert_relative_eq!(omega_n(3, 1.0).unwrap(), 1f64.sin(), max_relative = 1e-14);
    assert!(omega_n(2, 2.404825557695773f64.powi(2)).unwrap().abs() < 1e-12);
    // n = 1: cos
    for x in [0.5, 3.0, 40.0] {
        assert!((omega_n(1, x * x).unwrap() - x.cos()).abs() < 1e-12);
    }
}

#[test]
fn omega_n_matches_sinc_on_fine_grid() {
    let mut worst = 0.0f64;
    for i in 1..=500 {
        let x = 50.0 * i as f64 / 500.0;
        worst = worst.max((omega_n(3, x * x).unwrap() - x.sin() / x).abs());
    }
    assert!(worst <= 1e-10, "{worst:e}");
}

#[test]
fn omega_n_matches_hyp0f1() {
    for n in 1..=10 {
        for i in 0..=250 {
            let s = 10.0 * i as f64;
            let a = omega_n(n, s).unwrap();
            let b = hyp0f1(0.5 * n as f64, -0.25 * s).unwrap();
            assert!((a - b).abs() <= 1e-11, "n={n} s={s}: {a} vs {b}");
        }
        // the small-argument branch
        for s in [1e-9, 1e-7, 9.9e-7] {
            let a = omega_n(n, s).unwrap();
            let x = s.sqrt();
            let nu = 0.5 * n as f64 - 1.0;
            let b = gamma_oracle(0.5 * n as f64) * (2.0 / x).powf(nu) * bessel_j(nu, x).unwrap();
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn normalizing_constants() {
    for n in 1..=6 {
        let nf = n as f64;
        let normal = gen(Family::Normal, n);
        assert_relative_eq!(
            normal.normalizing_constant(),
            (2.0 * PI).powf(-0.5 * nf),
            max_relative = 1e-13
        );
        let ball = gen(Family::UniformBall, n);
        let want = nf * gamma_oracle(0.5 * nf) / (2.0 * PI.powf(0.5 * nf));
        assert_relative_eq!(ball.normalizing_constant(), want, max_relative = 1e-13);
        let (big_n, r, s) = (1.7, 0.8, 1.3);
        let kotz = gen(Family::Kotz { big_n, r, s }, n);
        let a = (2.0 * big_n + nf - 2.0) / (2.0 * s);
        let want = s * gamma_oracle(0.5 * nf) * r.powf(a) / (PI.powf(0.5 * nf) * gamma_oracle(a));
        assert_relative_eq!(kotz.normalizing_constant(), want, max_relative = 1e-12);
        assert_relative_eq!(normalizing_constant(&kotz), want, max_relative = 1e-12);
    }
}

#[test]
fn radial_density_examples() {
    let spec = EllipticalSpec::standard(gen(Family::Normal, 1)).unwrap();
    for v in [0.0f64, 0.3, 1.0, 2.5] {
        let want = (2.0 / PI).sqrt() * (-0.5 * v * v).exp();
        assert_relative_eq!(spec.radial_density(v).unwrap(), want, max_relative = 1e-13);
    }
    for n in [1, 2, 3, 5] {
        let spec = EllipticalSpec::standard(gen(Family::UniformBall, n)).unwrap();
        for v in [0.1f64, 0.5, 0.99] {
            let want = n as f64 * v.powi(n as i32 - 1);
            assert_relative_eq!(spec.radial_density(v).unwrap(), want, max_relative = 1e-13);
        }
        assert_eq!(spec.radial_density(1.01).unwrap(), 0.0);
    }
}

#[test]
fn radial_density_integrates_to_one() {
    let ctl = QuadratureControl::default();
    for n in DIMS {
        for fam in closed_form_families(n) {
            let g = gen(fam, n);
            let total = if g.support_radius().is_finite() {
                // substitute z = v² so the (1 - z)^m endpoint is resolved via its gap
                integrate_interval(
                    &|z: f64, gap: f64| {
                        let v = z.sqrt();
                        let gz = g.eval_with_gap(z, gap);
                        if gz == 0.0 {
                            0.0
                        } else {
                            2.0 * v.powi(n as i32 - 1) * gz / g.moment_n() / (2.0 * v)
                        }
                    },
                    1.0,
                    &ctl,
                )
                .unwrap()
                .value
            } else {
                integrate_half_line(&|v: f64| g.radial_density(v), 1.0, &ctl)
                    .unwrap()
                    .value
            };
            assert!((total - 1.0).abs() < 1e-8, "n={n} {fam:?}: {total}");
        }
    }
}

#[test]
fn rank_deficient_sigma_blocks_radial_density_only() {
    let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
    let spec = EllipticalSpec::new(DVector::zeros(2), sigma, gen(Family::Normal, 2)).unwrap();
    assert_eq!(spec.rank(), 1);
    assert!(matches!(
        radial_density(&spec, 0.5),
        Err(ModelError::RankDeficient { rank: 1, n: 2 })
    ));
    // CF along the null direction is 1, along (1, 1) it is e^{-2}
    let c = cf(&spec, &DVector::from_vec(vec![1.0, -1.0]), Route::Auto).unwrap();
    assert_relative_eq!(c.re, 1.0, max_relative = 1e-14);
    let c = cf(&spec, &DVector::from_vec(vec![1.0, 1.0]), Route::Hankel).unwrap();
    assert!((c.re - (-2.0f64).exp()).abs() < 1e-8);
}

#[test]
fn phi_closed_examples() {
    let n2 = |f| gen(f, 2);
    assert_relative_eq!(
        phi_closed(&n2(Family::cauchy()), 4.0).unwrap(),
        (-2.0f64).exp(),
        max_relative = 1e-14
    );
    assert_relative_eq!(
        phi_closed(&n2(Family::Normal), 1.0).unwrap(),
        (-0.5f64).exp(),
        max_relative = 1e-14
    );
    assert_relative_eq!(
        phi_closed(&n2(Family::GeneralizedT { s: 1.0, m: 1.0 }), 1.0).unwrap(),
        (-1.0f64).exp(),
        max_relative = 1e-14
    );
    assert_eq!(phi_closed(&n2(Family::Bessel { a: 0.7, beta: 2.0 }), 0.0).unwrap(), 1.0);
    for n in DIMS {
        for fam in closed_form_families(n) {
            assert_eq!(phi_closed(&gen(fam, n), 0.0).unwrap(), 1.0);
        }
    }
}

#[test]
fn generalized_t_reduces_to_cauchy() {
    for i in 0..=400 {
        let q = 0.05 * i as f64;
        let t = phi_generalized_t(1.0, 1.0, q).unwrap();
        assert!((t - phi_cauchy(q)).abs() <= 1e-10, "Q={q}");
    }
}

#[test]
fn pearson_vii_reduces_to_generalized_t() {
    for n in DIMS {
        for (m, s) in [(1.0, 1.0), (3.0, 2.0), (4.0, 0.5)] {
            let big_n = 0.5 * (n as f64 + m);
            for q in Q_GRID {
                let a = phi_pearson_vii(n, big_n, s, q).unwrap();
                let b = phi_generalized_t(m, s, q).unwrap();
                assert!((a - b).abs() <= 1e-10);
                let via_family = phi_closed(&gen(Family::PearsonVII { big_n, s }, n), q).unwrap();
                assert!((via_family - b).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn generalized_t_matches_student_t_cf_in_one_dimension() {
    // Student t with 3 dof, scale 1: φ(t²) = (1 + √3|t|) e^{-√3|t|}
    for t in [0.1f64, 0.7, 2.0, 5.0] {
        let want = (1.0 + 3f64.sqrt() * t) * (-(3f64.sqrt()) * t).exp();
        assert!((phi_generalized_t(3.0, 3.0, t * t).unwrap() - want).abs() <= 1e-12);
    }
}

#[test]
fn kotz_reductions() {
    for n in DIMS {
        let g = gen(
            Family::Kotz {
                big_n: 1.0,
                r: 0.5,
                s: 1.0,
            },
            n,
        );
        for i in 0..=200 {
            let q = 0.25 * i as f64;
            assert!((phi_closed(&g, q).unwrap() - phi_normal(q)).abs() <= 1e-10);
        }
    }
    for r in [0.5, 1.0, 2.5] {
        for i in 0..=200 {
            let q = 0.25 * i as f64;
            let a = phi_kotz_half_plane(r, q);
            let b = phi_kotz_half(2, 1.0, r, q).unwrap();
            assert!((a - b).abs() <= 1e-10);
        }
    }
    // n = 1, N = 1, s = 1/2 is the Laplace law with rate r: φ = r²/(r² + t²)
    for t in [0.3, 1.0, 4.0] {
        let r = 1.5;
        assert!((phi_kotz_half(1, 1.0, r, t * t).unwrap() - r * r / (r * r + t * t)).abs() < 1e-13);
    }
    assert!(matches!(
        phi_kotz_half(2, 2.0, 1.0, 1.0),
        Err(ModelError::NoClosedForm(_))
    ));
    let g = gen(
        Family::Kotz {
            big_n: 1.0,
            r: 1.0,
            s: 2.0,
        },
        2,
    );
    assert!(matches!(phi_closed(&g, 1.0), Err(ModelError::NoClosedForm(_))));
    assert!(!has_closed_form(&g));
}

#[test]
fn pearson_ii_and_ball_dual_forms() {
    for n in DIMS {
        for m in [-0.5, 0.0, 1.0, 2.5] {
            for q in Q_GRID.iter().chain([0.5, 10.0, 100.0].iter()) {
                let a = phi_pearson_ii(n, m, *q).unwrap();
                let b = phi_pearson_ii_bessel(n, m, *q).unwrap();
                assert!((a - b).abs() <= 1e-10, "n={n} m={m} Q={q}");
            }
        }
        for q in Q_GRID {
            let a = phi_uniform_ball(n, q).unwrap();
            let b = phi_uniform_ball_bessel(n, q).unwrap();
            assert!((a - b).abs() <= 1e-10);
        }
    }
    // n = 1 ball is uniform on [-1, 1]: sin t / t
    for t in [0.2f64, 1.0, 4.0] {
        assert!((phi_uniform_ball(1, t * t).unwrap() - t.sin() / t).abs() < 1e-13);
    }
}

#[test]
fn cf_examples() {
    let mu = DVector::from_vec(vec![1.0, 0.0]);
    let spec = EllipticalSpec::new(mu, DMatrix::identity(2, 2), gen(Family::Normal, 2)).unwrap();
    let t = DVector::from_vec(vec![1.0, 0.0]);
    let c = cf(&spec, &t, Route::Auto).unwrap();
    let want = Complex64::from_polar((-0.5f64).exp(), 1.0);
    assert!((c.value() - want).norm() < 1e-15);
    assert_eq!(c.method, Method::ClosedForm);
    let c = cf(&spec, &t, Route::Hankel).unwrap();
    assert!((c.value() - want).norm() < 1e-8);
    assert_eq!(c.method, Method::Hankel);

    let zero = DVector::zeros(2);
    for route in [Route::Auto, Route::Closed, Route::Hankel] {
        let c = cf(&spec, &zero, route).unwrap();
        assert_eq!((c.re, c.im), (1.0, 0.0));
    }
    assert!(cf(&spec, &DVector::zeros(3), Route::Auto).is_err());
}

#[test]
fn custom_generator_goes_through_hankel() {
    let g = DensityGenerator::custom(2, std::sync::Arc::new(|z: f64| (-0.5 * z).exp()), None, f64::INFINITY).unwrap();
    assert!(!has_closed_form(&g));
    assert!(matches!(phi_closed(&g, 1.0), Err(ModelError::NoClosedForm(_))));
    let spec = EllipticalSpec::standard(g).unwrap();
    let c = cf(&spec, &DVector::from_vec(vec![0.6, 0.8]), Route::Auto).unwrap();
    assert!((c.re - (-0.5f64).exp()).abs() < 1e-8);
    assert_eq!(c.method, Method::Hankel);
    assert!(DensityGenerator::custom(2, std::sync::Arc::new(|_| -1.0), None, 1.0).is_err());
}

#[test]
fn parameter_validation() {
    assert!(DensityGenerator::new(Family::PearsonII { m: -1.0 }, 2).is_err());
    assert!(DensityGenerator::new(Family::PearsonVII { big_n: 1.0, s: 1.0 }, 2).is_err());
    assert!(DensityGenerator::new(Family::GeneralizedT { s: 1.0, m: 1.5 }, 2).is_err());
    assert!(DensityGenerator::new(Family::GeneralizedT { s: 0.0, m: 1.0 }, 2).is_err());
    assert!(DensityGenerator::new(
        Family::Kotz {
            big_n: 0.0,
            r: 1.0,
            s: 1.0
        },
        2
    )
    .is_err());
    assert!(DensityGenerator::new(
        Family::Kotz {
            big_n: 0.6,
            r: 1.0,
            s: 1.0
        },
        1
    )
    .is_ok());
    assert!(DensityGenerator::new(Family::Bessel { a: -1.0, beta: 1.0 }, 2).is_err());
    assert!(DensityGenerator::new(Family::Normal, 0).is_err());
    let err = DensityGenerator::new(Family::PearsonII { m: -2.0 }, 2).unwrap_err();
    assert!(err.to_string().contains("`m`"));
}

#[test]
fn matrix_roots_examples() {
    let r = matrix_roots(&DMatrix::identity(3, 3)).unwrap();
    assert!((r.a.clone() - DMatrix::identity(3, 3)).norm() < 1e-15);
    assert!((r.sym.clone() - DMatrix::identity(3, 3)).norm() < 1e-15);
    let r = matrix_roots(&DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 9.0]))).unwrap();
    assert!((r.sym - DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0]))).norm() < 1e-14);
    assert_eq!(r.rank, 2);
    let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
    assert!(matches!(matrix_roots(&asym), Err(ModelError::NotSymmetric(_))));
    let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
    assert!(matches!(matrix_roots(&indefinite), Err(ModelError::NotPsd(_))));
    let err = EllipticalSpec::new(DVector::zeros(2), asym, gen(Family::Normal, 2)).unwrap_err();
    assert!(matches!(err, ModelError::NotSymmetric(_)));
}

fn psd_strategy(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| {
        let b = DMatrix::from_vec(n, n, v);
        &b * b.transpose()
    })
}

fn vec_strategy(n: usize, r: f64) -> impl Strategy<Value = DVector<f64>> {
    prop::collection::vec(-r..r, n).prop_map(DVector::from_vec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_roots_reconstruct(sigma in psd_strategy(5)) {
        let r = matrix_roots(&sigma).unwrap();
        let scale = sigma.norm().max(1.0);
        prop_assert!((r.a.transpose() * &r.a - &sigma).norm() <= 1e-10 * scale);
        prop_assert!((&r.sym * &r.sym - &sigma).norm() <= 1e-10 * scale);
        prop_assert!((&r.sym - r.sym.transpose()).norm() <= 1e-12 * scale);
    }

    #[test]
    fn cf_universal_laws(
        sigma in psd_strategy(3),
        mu in vec_strategy(3, 2.0),
        t in vec_strategy(3, 3.0),
        pick in 0usize..18,
    ) {
        let fam = closed_form_families(3)[pick];
        let spec = EllipticalSpec::new(mu, sigma, gen(fam, 3)).unwrap();
        let c = cf(&spec, &t, Route::Auto).unwrap();
        let c_neg = cf(&spec, &(-&t), Route::Auto).unwrap();
        prop_assert!(c.modulus() <= 1.0 + 1e-12);
        prop_assert!((c.value() - c_neg.value().conj()).norm() <= 1e-12);
        let centred = EllipticalSpec::new(DVector::zeros(3), spec.sigma().clone(), gen(fam, 3)).unwrap();
        prop_assert!(cf(&centred, &t, Route::Auto).unwrap().im.abs() <= 1e-12);
    }
}

#[test]
fn hankel_route_obeys_universal_laws() {
    let sigma = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 0.5]);
    let mu = DVector::from_vec(vec![0.4, -1.0]);
    for fam in closed_form_families(2) {
        let spec = EllipticalSpec::new(mu.clone(), sigma.clone(), gen(fam, 2)).unwrap();
        for t in [[0.3, 0.1], [1.0, -2.0], [-2.5, 0.7]] {
            let t = DVector::from_vec(t.to_vec());
            let c = cf(&spec, &t, Route::Hankel).unwrap();
            let c_neg = cf(&spec, &(-&t), Route::Hankel).unwrap();
            assert!(c.modulus() <= 1.0 + 1e-12);
            assert!((c.value() - c_neg.value().conj()).norm() <= 1e-12);
            let closed = cf(&spec, &t, Route::Closed).unwrap();
            assert!((c.value() - closed.value()).norm() <= 1e-6, "{fam:?}");
        }
    }
}
