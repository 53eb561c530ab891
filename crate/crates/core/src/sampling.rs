//! Stochastic-representation samplers and the Monte Carlo empirical CF.
//!
//! Draws are produced in fixed blocks of rows. Block b of a stream uses its
//! own ChaCha20 window keyed by (seed, stream_id, b), so a batch is the same
//! whatever rayon pool it runs on.

use std::io::{self, Write};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Beta, ChiSquared, Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::elliptical::{
    check_len, ComplexCF, DensityGenerator, EllipticalSpec, Family, Method, ModelError, Result, ScalarFn,
};
use crate::quadrature::integrate_adaptive;
use crate::skewmix::{LSMixtureSpec, MixingKind, MixingLaw, SkewNormalSpec};

/// Rows per RNG block.
pub const BLOCK_ROWS: usize = 4096;
/// ChaCha words reserved per block (2^36, far beyond any block's needs).
const BLOCK_WORDS: u128 = 1 << 36;

fn invalid(field: &'static str, detail: impl Into<String>) -> ModelError {
    ModelError::InvalidParameter {
        field,
        detail: detail.into(),
    }
}

/// A counter-based random stream keyed by (seed, stream_id).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Generator for block `block` of this stream.
    pub fn block(&self, block: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng.set_word_pos(block as u128 * BLOCK_WORDS);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub spec_hash: Option<String>,
    pub seed: u64,
    pub stream_id: u64,
}

/// `count` draws in ℝⁿ, one per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub n: usize,
    pub count: usize,
    pub data: DMatrix<f64>,
    pub provenance: Provenance,
    /// Probability mass lost to tail truncation in numeric inversion.
    pub truncation: f64,
}

impl SampleBatch {
    fn from_rows(n: usize, rows: Vec<f64>, rng: &RngStream, truncation: f64) -> Result<Self> {
        let count = rows.len() / n.max(1);
        if let Some(i) = rows.iter().position(|v| !v.is_finite()) {
            return Err(invalid("sample", format!("non-finite draw in row {}", i / n)));
        }
        Ok(Self {
            n,
            count,
            data: DMatrix::from_row_slice(count, n, &rows),
            provenance: Provenance {
                spec_hash: None,
                seed: rng.seed,
                stream_id: rng.stream_id,
            },
            truncation,
        })
    }

    pub fn with_spec_hash(mut self, hash: impl Into<String>) -> Self {
        self.provenance.spec_hash = Some(hash.into());
        self
    }

    pub fn row(&self, i: usize) -> DVector<f64> {
        self.data.row(i).transpose()
    }

    /// Applies x ↦ Bx to every row.
    pub fn map_linear(&self, b: &DMatrix<f64>) -> Result<Self> {
        if b.ncols() != self.n {
            return Err(ModelError::Dimension(format!(
                "B has {} columns, batch n = {}",
                b.ncols(),
                self.n
            )));
        }
        Ok(Self {
            n: b.nrows(),
            count: self.count,
            data: &self.data * b.transpose(),
            provenance: self.provenance.clone(),
            truncation: self.truncation,
        })
    }

    /// CSV with header `x1,...,xn`, one row per draw.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let header: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.count {
            let row: Vec<String> = self.data.row(i).iter().map(|v| fmt_value(*v)).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Shortest round-trip text, in exponent form outside [1e-4, 1e15).
pub fn fmt_value(v: f64) -> String {
    if v == 0.0 || (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Fills `count` rows of width n, block by block, in parallel.
fn fill<F>(n: usize, count: usize, rng: &RngStream, row: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha20Rng, &mut [f64]) -> Result<()> + Sync,
{
    if count == 0 {
        return Err(invalid("count", "must be >= 1"));
    }
    let blocks = count.div_ceil(BLOCK_ROWS);
    let parts: Vec<Result<Vec<f64>>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let rows = BLOCK_ROWS.min(count - b * BLOCK_ROWS);
            let mut r = rng.block(b as u64);
            let mut out = vec![0.0; rows * n];
            for chunk in out.chunks_mut(n.max(1)) {
                row(&mut r, chunk)?;
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::with_capacity(count * n);
    for p in parts {
        all.extend(p?);
    }
    Ok(all)
}

fn normal(r: &mut ChaCha20Rng) -> f64 {
    StandardNormal.sample(r)
}

/// Uniform draw on the unit sphere in ℝⁿ written into `out`.
fn sphere_point(r: &mut ChaCha20Rng, out: &mut [f64]) {
    loop {
        for x in out.iter_mut() {
            *x = normal(r);
        }
        let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-150 {
            out.iter_mut().for_each(|x| *x /= norm);
            return;
        }
    }
}

pub fn sample_sphere(n: usize, count: usize, rng: &RngStream) -> Result<SampleBatch> {
    if n == 0 {
        return Err(invalid("n", "must be >= 1"));
    }
    let rows = fill(n, count, rng, |r, out| {
        sphere_point(r, out);
        Ok(())
    })?;
    SampleBatch::from_rows(n, rows, rng, 0.0)
}

pub fn sample_ball(n: usize, count: usize, rng: &RngStream) -> Result<SampleBatch> {
    if n == 0 {
        return Err(invalid("n", "must be >= 1"));
    }
    let inv = 1.0 / n as f64;
    let rows = fill(n, count, rng, |r, out| {
        sphere_point(r, out);
        let radius = r.random::<f64>().powf(inv);
        out.iter_mut().for_each(|x| *x *= radius);
        Ok(())
    })?;
    SampleBatch::from_rows(n, rows, rng, 0.0)
}

/// Tabulated CDF of a density on [0, upper): cubic Hermite pieces with the
/// density as slope, limited to stay monotone; quantiles by bisection on the interpolant.
#[derive(Debug, Clone)]
pub struct InverseCdf {
    nodes: Vec<f64>,
    cdf: Vec<f64>,
    slopes: Vec<f64>,
    truncation: f64,
}

/// Tail mass at which the tabulation of an unbounded support stops.
const TAIL_MASS: f64 = 1e-10;
const MAX_NODES: usize = 20_000;

impl InverseCdf {
    /// `scale` locates the bulk of the mass for unbounded supports.
    pub fn from_density<F: Fn(f64) -> f64>(density: F, upper: f64, scale: f64) -> Result<Self> {
        if !(upper > 0.0) || !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid("support", format!("upper = {upper}, scale = {scale}")));
        }
        let piece = |a: f64, b: f64| -> Result<f64> {
            let (v, _) = integrate_adaptive(&|x: f64| density(x), a, b, 1e-14, 1e-12)?;
            if !(v >= 0.0) {
                return Err(invalid(
                    "density",
                    format!("negative or non-finite mass {v} on [{a}, {b}]"),
                ));
            }
            Ok(v)
        };
        let mut nodes = vec![0.0];
        let mut cdf = vec![0.0];
        if upper.is_finite() {
            let k = 2048;
            for i in 1..=k {
                let v = upper * 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / k as f64).cos());
                let last = *nodes.last().unwrap();
                cdf.push(cdf.last().unwrap() + piece(last, v)?);
                nodes.push(v);
            }
        } else {
            let mut v = scale * 1e-4;
            cdf.push(piece(0.0, v)?);
            nodes.push(v);
            while 1.0 - cdf.last().unwrap() > TAIL_MASS {
                if nodes.len() >= MAX_NODES {
                    return Err(invalid(
                        "density",
                        format!("tail mass {} beyond v = {v}", 1.0 - cdf.last().unwrap()),
                    ));
                }
                let next = v * 1.01;
                cdf.push(cdf.last().unwrap() + piece(v, next)?);
                nodes.push(next);
                v = next;
            }
        }
        let total = *cdf.last().unwrap();
        let truncation = if upper.is_finite() {
            if (total - 1.0).abs() > 1e-8 {
                return Err(invalid("density", format!("integrates to {total}, not 1")));
            }
            0.0
        } else {
            (1.0 - total).max(0.0)
        };
        cdf.iter_mut().for_each(|c| *c /= total);
        let mut slopes = pchip_slopes(&nodes, &cdf);
        for (d, x) in slopes.iter_mut().zip(&nodes) {
            let exact = density(*x) / total;
            if exact.is_finite() && exact >= 0.0 {
                *d = exact;
            }
        }
        limit_slopes(&nodes, &cdf, &mut slopes);
        Ok(Self {
            nodes,
            cdf,
            slopes,
            truncation,
        })
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    /// Interpolated CDF.
    pub fn cdf(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        let last = self.nodes.len() - 1;
        if v >= self.nodes[last] {
            return 1.0;
        }
        let k = self.nodes.partition_point(|x| *x <= v) - 1;
        self.hermite(k, v)
    }

    fn hermite(&self, k: usize, v: f64) -> f64 {
        let (x0, x1) = (self.nodes[k], self.nodes[k + 1]);
        let h = x1 - x0;
        let s = (v - x0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.cdf[k] + h10 * h * self.slopes[k] + h01 * self.cdf[k + 1] + h11 * h * self.slopes[k + 1]
    }

    pub fn quantile(&self, u: f64) -> f64 {
        let k = self.cdf.partition_point(|c| *c <= u).clamp(1, self.cdf.len() - 1) - 1;
        let (mut lo, mut hi) = (self.nodes[k], self.nodes[k + 1]);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.hermite(k, mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Fritsch-Carlson slopes, monotone on monotone data.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let m = x.len();
    let delta: Vec<f64> = (0..m - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
    let mut d = vec![0.0; m];
    d[0] = delta[0];
    d[m - 1] = delta[m - 2];
    for i in 1..m - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
            let w1 = 2.0 * h1 + h0;
            let w2 = h1 + 2.0 * h0;
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d
}

/// Scales slopes so each Hermite piece stays monotone.
fn limit_slopes(x: &[f64], y: &[f64], d: &mut [f64]) {
    for i in 0..x.len() - 1 {
        let delta = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        if delta <= 0.0 {
            d[i] = 0.0;
            d[i + 1] = 0.0;
            continue;
        }
        let (a, b) = (d[i] / delta, d[i + 1] / delta);
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            d[i] = tau * a * delta;
            d[i + 1] = tau * b * delta;
        }
    }
}

/// How the generating variate R is drawn.
#[derive(Debug, Clone)]
pub enum RadialSampler {
    Constant(f64),
    /// R² ~ χ²_n
    Chi {
        n: usize,
    },
    /// R = U^{1/n}
    Ball {
        n: usize,
    },
    /// R² ~ Beta(a, b)
    BetaSquare {
        a: f64,
        b: f64,
    },
    /// R² = s χ²_n / χ²_m
    TRatio {
        n: usize,
        m: f64,
        s: f64,
    },
    /// r R^{2s} ~ Gamma(alpha, 1)
    KotzGamma {
        alpha: f64,
        r: f64,
        s: f64,
    },
    /// R² = W χ²_n, W ~ Gamma(shape, scale)
    GammaMixture {
        n: usize,
        shape: f64,
        scale: f64,
    },
    Inverse(Arc<InverseCdf>),
}

impl RadialSampler {
    /// Exact shortcut for the named families, numeric inversion otherwise.
    pub fn for_generator(g: &DensityGenerator) -> Result<Self> {
        let n = g.dim();
        let nf = n as f64;
        Ok(match g.family() {
            Family::Normal => RadialSampler::Chi { n },
            Family::UniformBall => RadialSampler::Ball { n },
            Family::PearsonII { m } => RadialSampler::BetaSquare {
                a: 0.5 * nf,
                b: m + 1.0,
            },
            Family::GeneralizedT { s, m } => RadialSampler::TRatio { n, m, s },
            Family::PearsonVII { big_n, s } => RadialSampler::TRatio {
                n,
                m: 2.0 * big_n - nf,
                s,
            },
            Family::Kotz { big_n, r, s } => RadialSampler::KotzGamma {
                alpha: (2.0 * big_n + nf - 2.0) / (2.0 * s),
                r,
                s,
            },
            Family::Bessel { a, beta } => RadialSampler::GammaMixture {
                n,
                shape: 0.5 * nf + a,
                scale: 2.0 * beta * beta,
            },
            Family::Custom => Self::numeric(g)?,
        })
    }

    /// Numeric CDF inversion of the radial density.
    pub fn numeric(g: &DensityGenerator) -> Result<Self> {
        let scale = g.scale_hint().sqrt();
        let inv = InverseCdf::from_density(|v| g.radial_density(v), g.support_radius(), scale)?;
        Ok(RadialSampler::Inverse(Arc::new(inv)))
    }

    pub fn truncation(&self) -> f64 {
        match self {
            RadialSampler::Inverse(inv) => inv.truncation(),
            _ => 0.0,
        }
    }

    pub fn draw(&self, r: &mut ChaCha20Rng) -> Result<f64> {
        let dist = |e: rand_distr::ChiSquaredError| invalid("radial", e.to_string());
        Ok(match self {
            RadialSampler::Constant(c) => *c,
            RadialSampler::Chi { n } => ChiSquared::new(*n as f64).map_err(dist)?.sample(r).sqrt(),
            RadialSampler::Ball { n } => r.random::<f64>().powf(1.0 / *n as f64),
            RadialSampler::BetaSquare { a, b } => Beta::new(*a, *b)
                .map_err(|e| invalid("radial", e.to_string()))?
                .sample(r)
                .sqrt(),
            RadialSampler::TRatio { n, m, s } => {
                let num = ChiSquared::new(*n as f64).map_err(dist)?.sample(r);
                let den = ChiSquared::new(*m).map_err(dist)?.sample(r);
                (s * num / den).sqrt()
            }
            RadialSampler::KotzGamma { alpha, r: rate, s } => {
                let y: f64 = Gamma::new(*alpha, 1.0)
                    .map_err(|e| invalid("radial", e.to_string()))?
                    .sample(r);
                (y / rate).powf(0.5 / s)
            }
            RadialSampler::GammaMixture { n, shape, scale } => {
                let w: f64 = Gamma::new(*shape, *scale)
                    .map_err(|e| invalid("radial", e.to_string()))?
                    .sample(r);
                (w * ChiSquared::new(*n as f64).map_err(dist)?.sample(r)).sqrt()
            }
            RadialSampler::Inverse(inv) => inv.quantile(r.random::<f64>()),
        })
    }
}

/// Draws of the generating variate R for the spec's generator.
pub fn sample_radius(spec: &EllipticalSpec, count: usize, rng: &RngStream) -> Result<Vec<f64>> {
    let radial = RadialSampler::for_generator(spec.generator())?;
    fill(1, count, rng, |r, out| {
        out[0] = radial.draw(r)?;
        Ok(())
    })
}

/// X = μ + R A′U with A′A = Σ.
pub fn sample_elliptical(spec: &EllipticalSpec, count: usize, rng: &RngStream) -> Result<SampleBatch> {
    let radial = RadialSampler::for_generator(spec.generator())?;
    sample_elliptical_with(spec, &radial, count, rng)
}

pub fn sample_elliptical_with(
    spec: &EllipticalSpec,
    radial: &RadialSampler,
    count: usize,
    rng: &RngStream,
) -> Result<SampleBatch> {
    let n = spec.dim();
    if spec.rank() < n {
        return Err(ModelError::RankDeficient { rank: spec.rank(), n });
    }
    let at = spec.roots().a.transpose();
    let mu = spec.mu().clone();
    let rows = fill(n, count, rng, |r, out| {
        sphere_point(r, out);
        let radius = radial.draw(r)?;
        let x = &mu + &at * DVector::from_column_slice(out) * radius;
        out.copy_from_slice(x.as_slice());
        Ok(())
    })?;
    SampleBatch::from_rows(n, rows, rng, radial.truncation())
}

/// Draws of the mixing variable ξ.
#[derive(Debug, Clone)]
enum MixingSampler {
    Constant(f64),
    Discrete { points: Vec<f64>, cumulative: Vec<f64> },
    InverseGamma(Gamma<f64>, f64),
    Inverse(Arc<InverseCdf>),
}

impl MixingSampler {
    fn new(law: &MixingLaw) -> Result<Self> {
        Ok(match law.kind() {
            MixingKind::Degenerate(v) => MixingSampler::Constant(*v),
            MixingKind::FiniteDiscrete { points, weights } => {
                let mut acc = 0.0;
                let cumulative = weights
                    .iter()
                    .map(|w| {
                        acc += w;
                        acc
                    })
                    .collect();
                MixingSampler::Discrete {
                    points: points.clone(),
                    cumulative,
                }
            }
            MixingKind::InverseGamma { shape, scale } => MixingSampler::InverseGamma(
                Gamma::new(*shape, 1.0).map_err(|e| invalid("mixing", e.to_string()))?,
                *scale,
            ),
            MixingKind::CustomDensity { density, upper } => {
                let d: ScalarFn = density.clone();
                MixingSampler::Inverse(Arc::new(InverseCdf::from_density(move |x| d(x), *upper, 1.0)?))
            }
        })
    }

    fn truncation(&self) -> f64 {
        match self {
            MixingSampler::Inverse(inv) => inv.truncation(),
            _ => 0.0,
        }
    }

    fn draw(&self, r: &mut ChaCha20Rng) -> f64 {
        match self {
            MixingSampler::Constant(v) => *v,
            MixingSampler::Discrete { points, cumulative } => {
                let u = r.random::<f64>() * cumulative.last().copied().unwrap_or(1.0);
                let i = cumulative.partition_point(|c| *c <= u).min(points.len() - 1);
                points[i]
            }
            MixingSampler::InverseGamma(g, scale) => scale / g.sample(r),
            MixingSampler::Inverse(inv) => inv.quantile(r.random::<f64>()),
        }
    }
}

/// X = μ + Vγ + √V Σ^{1/2} Z with Z spherical from the base generator.
pub fn sample_lsm(spec: &LSMixtureSpec, count: usize, rng: &RngStream) -> Result<SampleBatch> {
    let n = spec.dim();
    let radial = RadialSampler::for_generator(&spec.psi.generator)?;
    let mixing = MixingSampler::new(&spec.mixing)?;
    let rows = fill(n, count, rng, |r, out| {
        let v = spec.mixing.scale_at(mixing.draw(r));
        if !(v >= 0.0) {
            return Err(invalid("mixing", format!("V = {v} is negative")));
        }
        sphere_point(r, out);
        let radius = radial.draw(r)?;
        let z = DVector::from_column_slice(out) * radius;
        let x = &spec.mu + &spec.gamma * v + &spec.sigma_root * z * v.sqrt();
        out.copy_from_slice(x.as_slice());
        Ok(())
    })?;
    SampleBatch::from_rows(n, rows, rng, radial.truncation() + mixing.truncation())
}

/// Standardized skew-normal draw by conditioning: (Z₀, Z) jointly normal
/// with corr(Z₀, Z) = δ, keep Z when Z₀ > 0.
fn skew_normal_core(r: &mut ChaCha20Rng, delta: &DVector<f64>, resid: f64, out: &mut [f64]) {
    loop {
        for x in out.iter_mut() {
            *x = normal(r);
        }
        let z0 = delta.iter().zip(out.iter()).map(|(d, z)| d * z).sum::<f64>() + resid * normal(r);
        if z0 > 0.0 {
            return;
        }
    }
}

fn skew_delta(spec: &SkewNormalSpec) -> (DVector<f64>, f64) {
    let lambda = spec.lambda();
    let c = (1.0 + lambda.norm_squared()).sqrt();
    let delta = lambda / c;
    let resid = (1.0 - delta.norm_squared()).max(0.0).sqrt();
    (delta, resid)
}

pub fn sample_skew_normal(spec: &SkewNormalSpec, count: usize, rng: &RngStream) -> Result<SampleBatch> {
    let n = spec.dim();
    let (delta, resid) = skew_delta(spec);
    let rows = fill(n, count, rng, |r, out| {
        skew_normal_core(r, &delta, resid, out);
        let x = &spec.mu + &spec.sigma_root * DVector::from_column_slice(out);
        out.copy_from_slice(x.as_slice());
        Ok(())
    })?;
    SampleBatch::from_rows(n, rows, rng, 0.0)
}

/// X = μ + √k(ξ) Σ^{1/2} Z, Z standardized skew-normal.
pub fn sample_smsn(spec: &SkewNormalSpec, mixing: &MixingLaw, count: usize, rng: &RngStream) -> Result<SampleBatch> {
    let n = spec.dim();
    let (delta, resid) = skew_delta(spec);
    let xi = MixingSampler::new(mixing)?;
    let rows = fill(n, count, rng, |r, out| {
        let k = mixing.scale_at(xi.draw(r));
        if !(k >= 0.0) {
            return Err(invalid("mixing", format!("k = {k} is negative")));
        }
        skew_normal_core(r, &delta, resid, out);
        let x = &spec.mu + &spec.sigma_root * DVector::from_column_slice(out) * k.sqrt();
        out.copy_from_slice(x.as_slice());
        Ok(())
    })?;
    SampleBatch::from_rows(n, rows, rng, xi.truncation())
}

/// (1/N) Σ e^{it′X_j} with abs_err = 3/√N plus any truncated mass.
pub fn empirical_cf(batch: &SampleBatch, t: &DVector<f64>) -> Result<ComplexCF> {
    check_len(t, batch.n)?;
    let band = 3.0 / (batch.count as f64).sqrt() + batch.truncation;
    if t.iter().all(|v| *v == 0.0) {
        return Ok(ComplexCF::new(Complex64::new(1.0, 0.0), Some(band), Method::MonteCarlo));
    }
    let proj = &batch.data * t;
    let partial: Vec<(f64, f64)> = proj
        .as_slice()
        .par_chunks(BLOCK_ROWS)
        .map(|c| c.iter().fold((0.0, 0.0), |(re, im), s| (re + s.cos(), im + s.sin())))
        .collect();
    let (re, im) = partial.iter().fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    let n = batch.count as f64;
    Ok(ComplexCF::new(
        Complex64::new(re / n, im / n),
        Some(band),
        Method::MonteCarlo,
    ))
}
