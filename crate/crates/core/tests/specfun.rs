//! Special-function checks against independent oracles: brute-force series
//! evaluated in the test, elementary closed forms, recurrences, and
//! reference values computed once with 40-digit arithmetic (mpmath).

use std::f64::consts::PI;

use approx::assert_relative_eq;
use ellcf::specfun::*;
use proptest::prelude::*;

/// Plain power series for J_ν, independent of the library's branch logic.
fn j_series_oracle(nu: f64, x: f64) -> f64 {
    let mut term = (0.5 * x).powf(nu) / gamma_fn(nu + 1.0).unwrap();
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= -(0.25 * x * x) / (kf * (nu + kf));
        sum += term;
    }
    sum
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn bessel_j_trivial_and_elementary_values() {
    assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
    assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-15);
    assert!(bessel_j(0.0, 2.404825557695773).unwrap().abs() < 1e-10);
}

#[test]
fn bessel_j_half_order_matches_sine_form() {
    for i in 1..=5000 {
        let x = 50.0 * i as f64 / 5000.0;
        let exact = (2.0 / (PI * x)).sqrt() * x.sin();
        let got = bessel_j(0.5, x).unwrap();
        assert!((got - exact).abs() <= 1e-12 * x.sin().abs().max(1.0), "x = {x}");
    }
}

#[test]
fn bessel_j_reference_values() {
    // (nu, x, J_nu(x)) from 40-digit arithmetic
    let cases = [
        (0.3, 15.5, -0.020439979971347817118),
        (2.5, 30.0, 0.14120285879928212036),
        (0.0, 12.5, 0.14688405470042110231),
        (7.3, 20.0, -0.17439710031283123753),
        (0.0, 50.0, 0.055812327669251815005),
        (1.0, 100.0, -0.077145352014112158033),
        (-0.3, 20.0, 0.12009245322630804481),
        (-0.3, 5.0, -0.0150494093195696575),
        (12.0, 13.0, 0.26153687541034509911),
        (0.0, 4.5, -0.32054250898512142436),
        (0.0, 6.0, 0.15064525725099693166),
        (0.0, 8.5, 0.041939251842934503552),
        (0.0, 11.0, -0.17119030040719608835),
        (0.0, 12.5, 0.14688405470042110231),
        (0.0, 16.0, -0.17489907398362918483),
        (0.0, 25.0, 0.096266783275958116174),
        (0.3, 4.5, -0.37409565621580871588),
        (0.3, 6.0, 0.0057970543473122940093),
        (0.3, 8.5, 0.15891941506282578109),
        (0.3, 11.0, -0.22893061248434177955),
        (0.3, 12.5, 0.053938933483013422757),
        (0.3, 16.0, -0.11281080338851265176),
        (0.3, 25.0, 0.028287780084076882199),
        (1.5, 4.5, -0.0024196645430747363845),
        (1.5, 6.0, -0.32793031086178821761),
        (1.5, 8.5, 0.19046255815281232166),
        (1.5, 11.0, -0.022934594839359303149),
        (1.5, 12.5, -0.22637633819446598575),
        (1.5, 16.0, 0.18743615328645922853),
        (1.5, 25.0, -0.15901789538603657984),
        (3.0, 4.5, 0.42470397297745560025),
        (3.0, 6.0, 0.11476838482077529636),
        (3.0, 8.5, -0.26261620385768479155),
        (3.0, 11.0, 0.22734803305806741749),
        (3.0, 12.5, 0.11000813631434926814),
        (3.0, 16.0, -0.043847495425981134212),
        (3.0, 25.0, 0.10834308106150889528),
        (6.2, 4.5, 0.069536598674284436432),
        (6.2, 6.0, 0.2201246107059205263),
        (6.2, 8.5, 0.31034366918177637352),
        (6.2, 11.0, -0.16592031219783235528),
        (6.2, 12.5, -0.2237564355702658077),
        (6.2, 16.0, 0.19134677899625260991),
        (6.2, 25.0, -0.14487857207274246944),
    ];
    for (nu, x, want) in cases {
        let got = bessel_j(nu, x).unwrap();
        assert_relative_eq!(got, want, max_relative = 1e-12);
    }
}

#[test]
fn bessel_j_agrees_with_series_oracle_in_series_range() {
    for &nu in &[0.0, 0.5, 1.0, 2.5, 4.0] {
        for i in 1..=40 {
            let x = 0.1 * i as f64;
            let got = bessel_j(nu, x).unwrap();
            let want = j_series_oracle(nu, x);
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-3), "nu={nu} x={x}");
        }
    }
}

#[test]
fn bessel_j_branches_join_continuously() {
    // Series / Steed at 4 and Steed / asymptotic at 40.
    for &nu in &[0.0, 0.3, 1.5, 3.0] {
        for &x0 in &[4.0, 40.0] {
            let below = bessel_j(nu, x0 * (1.0 - 1e-15)).unwrap();
            let above = bessel_j(nu, x0 * (1.0 + 1e-15)).unwrap();
            assert!((below - above).abs() < 1e-13, "nu={nu} x={x0}: {below} vs {above}");
        }
    }
}

#[test]
fn bessel_j_rejects_bad_input() {
    assert!(bessel_j(-1.0, 1.0).is_err());
    assert!(bessel_j(0.0, -1.0).is_err());
    assert!(bessel_j(0.0, f64::NAN).is_err());
}

#[test]
fn bessel_k_reference_values() {
    assert_relative_eq!(
        bessel_k(0.5, 1.0).unwrap(),
        (PI / 2.0).sqrt() * (-1.0f64).exp(),
        max_relative = 1e-14
    );
    assert_relative_eq!(
        bessel_k(0.5, 1.0).unwrap(),
        0.46106850444789455844,
        max_relative = 1e-14
    );
    assert_eq!(bessel_k(-0.5, 1.0).unwrap(), bessel_k(0.5, 1.0).unwrap());
    let cases = [
        (0.3, 0.01, 6.8901026382927695432),
        (1.7, 20.0, 6.1605837901883487337e-10),
        (0.0, 1e-5, 11.628856980944362212),
        (5.2, 0.5, 21685.020505671139903),
        (0.25, 3.0, 0.035057056089413133983),
    ];
    for (nu, x, want) in cases {
        assert_relative_eq!(bessel_k(nu, x).unwrap(), want, max_relative = 1e-13);
    }
}

#[test]
fn bessel_k_recurrence_oracle() {
    // K_{3/2} from K_{-1/2}, K_{1/2} via K_{ν+1} = K_{ν-1} + (2ν/x) K_ν at ν = 1/2
    let x = 2.0;
    let khalf = (PI / (2.0 * x)).sqrt() * (-x).exp();
    let k32 = khalf + (1.0 / x) * khalf;
    assert_relative_eq!(bessel_k(1.5, x).unwrap(), k32, max_relative = 1e-14);
    assert_relative_eq!(k32, 0.17990665795209217105, max_relative = 1e-14);
    // the integral representation reaches the same half-integer values
    for &nu in &[0.5, 1.5, 3.5, 6.5] {
        for &x in &[0.05, 0.7, 3.0, 25.0] {
            assert_relative_eq!(
                bessel_k_integral(nu, x).unwrap(),
                bessel_k(nu, x).unwrap(),
                max_relative = 1e-13
            );
        }
    }
}

#[test]
fn bessel_k_even_in_order() {
    for &nu in &[0.3, 0.5, 1.7] {
        for i in 1..=200 {
            let x = 0.1 * i as f64;
            let a = bessel_k(nu, x).unwrap();
            let b = bessel_k(-nu, x).unwrap();
            assert!(a > 0.0);
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }
}

#[test]
fn bessel_k_domain() {
    assert!(bessel_k(0.5, 0.0).is_err());
    assert!(bessel_k(0.5, -2.0).is_err());
    let scaled = bessel_k_scaled(2.3, 900.0).unwrap();
    assert!(scaled.is_finite() && scaled > 0.0);
}

#[test]
fn hyp0f1_values() {
    assert_eq!(hyp0f1(2.7, 0.0).unwrap(), 1.0);
    // ₀F₁(3/2; -x²/4) = sin(x)/x
    assert_relative_eq!(hyp0f1(1.5, -0.25).unwrap(), 1f64.sin(), max_relative = 1e-14);
    // n = 3, x = 2: ₀F₁(n/2+1; -x²/4) = (x/2)^{-n/2} Γ(n/2+1) J_{n/2}(x)
    let (n, x) = (3.0, 2.0);
    let rhs = (x / 2.0f64).powf(-n / 2.0) * gamma_fn(n / 2.0 + 1.0).unwrap() * bessel_j(n / 2.0, x).unwrap();
    let bessel_oracle = (x / 2.0f64).powf(-n / 2.0) * gamma_fn(n / 2.0 + 1.0).unwrap() * j_series_oracle(n / 2.0, x);
    assert_relative_eq!(hyp0f1(n / 2.0 + 1.0, -x * x / 4.0).unwrap(), rhs, max_relative = 1e-13);
    assert_relative_eq!(
        hyp0f1(n / 2.0 + 1.0, -x * x / 4.0).unwrap(),
        bessel_oracle,
        max_relative = 1e-13
    );
    assert!(matches!(hyp0f1(-2.0, 1.0), Err(SpecFunError::Pole { .. })));
}

#[test]
fn hyp0f1_matches_bessel_relation() {
    for &nu in &[0.0, 0.5, 1.0, 2.5] {
        for i in 1..=300 {
            let x = 0.1 * i as f64;
            let lhs = hyp0f1(nu + 1.0, -x * x / 4.0).unwrap() * (x / 2.0).powf(nu) / gamma_fn(nu + 1.0).unwrap();
            let rhs = bessel_j(nu, x).unwrap();
            // relative where J is not near one of its zeros
            assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs().max(1e-3), "nu={nu} x={x}");
        }
    }
}

#[test]
fn hyp0f1_truncation_is_reported() {
    let ctl = SeriesControl::new(1e-14, 3).unwrap();
    let v = hyp0f1_with(1.0, 10.0, &ctl).unwrap();
    assert!(!v.converged);
    assert!(SeriesControl::new(0.0, 10).is_err());
    assert!(SeriesControl::new(1e-10, 0).is_err());
}

#[test]
fn hyp1f1_values() {
    assert_relative_eq!(hyp1f1(2.0, 2.0, 1.0).unwrap(), 1f64.exp(), max_relative = 1e-14);
    for &n in &[1.0, 2.0, 3.0, 5.0] {
        assert_relative_eq!(
            hyp1f1(n / 2.0, n / 2.0, -0.5).unwrap(),
            (-0.5f64).exp(),
            max_relative = 1e-14
        );
    }
    // 40-digit series value of ₁F₁(2; 1.5; -9)
    assert_relative_eq!(
        hyp1f1(2.0, 1.5, -9.0).unwrap(),
        -0.005101253396581814137365228,
        max_relative = 1e-12
    );
}

#[test]
fn hyp1f1_equal_parameters_is_exponential() {
    for &a in &[0.5, 3.0] {
        for i in -200..=200 {
            let z = 0.1 * i as f64;
            assert_relative_eq!(hyp1f1(a, a, z).unwrap(), z.exp(), max_relative = 1e-12);
        }
    }
}

#[test]
fn phi_imag_values() {
    let v = phi_imag(0.0).unwrap().value().unwrap();
    assert_eq!(v.re, 0.5);
    assert_eq!(v.im, 0.0);

    // Simpson oracle for erfi(1/√2) = (2/√π) ∫₀^{1/√2} e^{t²} dt
    let upper = 1.0 / 2f64.sqrt();
    let m = 2000;
    let h = upper / m as f64;
    let f = |t: f64| (t * t).exp();
    let mut s = f(0.0) + f(upper);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    let erfi_oracle = 2.0 / PI.sqrt() * s * h / 3.0;
    let got = phi_imag(1.0).unwrap().value().unwrap();
    assert_eq!(got.re, 0.5);
    assert_relative_eq!(got.im, 0.5 * erfi_oracle, max_relative = 1e-12);
    assert_relative_eq!(erfi(upper), erfi_oracle, max_relative = 1e-12);
}

#[test]
fn phi_imag_scaled_form_avoids_overflow() {
    let y = 40.0;
    let p = phi_imag(y).unwrap();
    assert!(p.value().is_err());
    let v = p.scaled_by(-0.5 * y * y - 1.0).unwrap();
    assert!(v.re.is_finite() && v.im.is_finite() && v.im > 0.0);
}

#[test]
fn dawson_reference_values() {
    // scipy.special.dawsn
    let cases = [
        (0.1, 0.099335992397852861),
        (0.5, 0.42443638350202229),
        (1.0, 0.53807950691276842),
        (2.0, 0.30134038892379197),
        (5.0, 0.10213407442427684),
        (30.0, 0.016675941401059196),
    ];
    for (x, want) in cases {
        assert_relative_eq!(dawson(x), want, max_relative = 1e-14);
        assert_relative_eq!(dawson(-x), -want, max_relative = 1e-14);
    }
}

#[test]
fn bessel_zeros() {
    assert!((bessel_j_zero(0.0, 1).unwrap() - 2.404825557695773).abs() < 1e-9);
    let oracle = bisect(|x| j_series_oracle(0.0, x), 2.0, 3.0);
    assert!((bessel_j_zero(0.0, 1).unwrap() - oracle).abs() < 1e-9);
    assert!((bessel_j_zero(2.5, 3).unwrap() - 12.322940970566582052).abs() < 1e-9);
    for k in 1..=20 {
        assert_eq!(bessel_j_zero(0.5, k).unwrap(), k as f64 * PI);
    }
    for nu in 0..=5 {
        let zeros = bessel_j_zeros(nu as f64, 51).unwrap();
        for w in zeros.windows(2) {
            assert!(w[1] > w[0] + 1.0);
        }
        for &z in &zeros {
            assert!(bessel_j(nu as f64, z).unwrap().abs() < 1e-12);
        }
    }
    assert!(bessel_j_zero(-0.7, 1).is_err());
    assert!(bessel_j_zero(1.0, 0).is_err());
}

proptest! {
    #[test]
    fn gamma_recurrence(x in 0.1f64..50.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs());
    }

    #[test]
    fn phi_imag_reflection(y in -30.0f64..30.0) {
        let a = phi_imag(y).unwrap();
        let b = phi_imag(-y).unwrap();
        let (va, vb) = (a.scaled_by(-a.log_scale).unwrap(), b.scaled_by(-b.log_scale).unwrap());
        prop_assert_eq!(a.log_scale, b.log_scale);
        prop_assert_eq!(va.im, -vb.im);
        let sum = a.value().unwrap() + b.value().unwrap();
        prop_assert_eq!(sum.re, 1.0);
        prop_assert_eq!(sum.im, 0.0);
    }
}
