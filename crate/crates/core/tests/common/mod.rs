#![allow(dead_code)]

use ellcf::elliptical::{DensityGenerator, Family};

pub const Q_GRID: [f64; 5] = [0.01, 0.1, 1.0, 4.0, 25.0];
pub const DIMS: [usize; 4] = [1, 2, 3, 5];

/// Fixed parameter grid for every family that has a closed form.
pub fn closed_form_families(n: usize) -> Vec<Family> {
    let h = 0.5 * n as f64;
    vec![
        Family::Normal,
        Family::UniformBall,
        Family::cauchy(),
        Family::GeneralizedT { s: 2.0, m: 3.0 },
        Family::GeneralizedT { s: 0.5, m: 4.0 },
        Family::PearsonII { m: 0.0 },
        Family::PearsonII { m: 1.0 },
        Family::PearsonII { m: 2.5 },
        Family::PearsonII { m: -0.5 },
        Family::PearsonVII { big_n: h + 1.5, s: 1.0 },
        Family::PearsonVII {
            big_n: h + 0.75,
            s: 3.0,
        },
        Family::Kotz {
            big_n: 2.0,
            r: 0.5,
            s: 1.0,
        },
        Family::Kotz {
            big_n: 1.5,
            r: 1.0,
            s: 1.0,
        },
        Family::Kotz {
            big_n: 1.0,
            r: 1.0,
            s: 0.5,
        },
        Family::Kotz {
            big_n: 1.0,
            r: 2.5,
            s: 0.5,
        },
        Family::Bessel { a: 0.5, beta: 1.0 },
        Family::Bessel { a: 1.5, beta: 0.5 },
        Family::Bessel { a: 0.0, beta: 1.0 },
    ]
}

pub fn gen(family: Family, n: usize) -> DensityGenerator {
    DensityGenerator::new(family, n).unwrap_or_else(|e| panic!("{family:?} n={n}: {e}"))
}

/// Simpson's rule on [a, b] with an even number of intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let m = intervals + intervals % 2;
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}
