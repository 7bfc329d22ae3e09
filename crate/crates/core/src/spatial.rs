//! Gaussian spatial wave functions and the overlap factor `g(O1, O2)`.
//!
//! Each packet has density `(m^2 / 2pi)^{3/2} exp(-m^2 |r - mean|^2 / 2)`, so
//! every coordinate is normal with standard deviation `1/m`. For a product
//! wave function the six-dimensional integral of `|phi|^2` over `O1 x O2`
//! factorizes into six one-dimensional Gaussian masses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::BoxRegion;
use crate::normal::interval_probability;
use crate::quadrature::{self, MAX_SUBINTERVALS};

/// Box half-extent (in units of `1/m`) that stands in for all of space.
pub const ALL_SPACE_EXTENT: f64 = 1e8;

/// Samples per Monte Carlo chunk; each chunk owns one generator stream.
pub const MC_CHUNK: usize = 1 << 16;

pub const MC_MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    mean: [f64; 3],
    m: f64,
}

impl GaussianPacket {
    pub fn new(mean: [f64; 3], m: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidParameter(format!("inverse width must be positive, got {m}")));
        }
        if mean.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("packet mean must be finite".into()));
        }
        Ok(GaussianPacket { mean, m })
    }

    pub fn mean(&self) -> [f64; 3] {
        self.mean
    }

    pub fn inverse_width(&self) -> f64 {
        self.m
    }

    /// `|psi(r)|^2`.
    pub fn density(&self, r: [f64; 3]) -> f64 {
        (0..3).map(|i| self.axis_density(i, r[i])).product()
    }

    /// One-coordinate marginal density on axis `i`.
    pub fn axis_density(&self, i: usize, x: f64) -> f64 {
        let u = self.m * (x - self.mean[i]);
        self.m * (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt()
    }

    pub fn translated(&self, l: [f64; 3]) -> GaussianPacket {
        GaussianPacket {
            mean: [0, 1, 2].map(|i| self.mean[i] + l[i]),
            m: self.m,
        }
    }

    /// Cube of half-width `h` centered on the packet mean.
    pub fn centered_box(&self, half_width: f64) -> Result<BoxRegion> {
        BoxRegion::cube(self.mean, half_width)
    }
}

/// `phi(r1, r2) = psi1(r1) psi2(r2)` with a shared inverse width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductWaveFunction {
    pub packet1: GaussianPacket,
    pub packet2: GaussianPacket,
}

impl ProductWaveFunction {
    pub fn new(m: f64, mean1: [f64; 3], mean2: [f64; 3]) -> Result<Self> {
        Ok(ProductWaveFunction {
            packet1: GaussianPacket::new(mean1, m)?,
            packet2: GaussianPacket::new(mean2, m)?,
        })
    }

    pub fn inverse_width(&self) -> f64 {
        self.packet1.m
    }
}

/// The box standing in for all of space at inverse width `m`.
pub fn all_space(m: f64) -> BoxRegion {
    let e = ALL_SPACE_EXTENT / m;
    BoxRegion::new([-e; 3], [e; 3]).expect("all-space box is valid")
}

/// Probability that a particle in packet `p` is found in `r`.
pub fn region_probability(p: &GaussianPacket, r: &BoxRegion) -> f64 {
    let (lo, hi) = (r.lo(), r.hi());
    (0..3)
        .map(|i| interval_probability(p.m * (lo[i] - p.mean[i]), p.m * (hi[i] - p.mean[i])))
        .product()
}

/// Closed-form `g(O1, O2)` for a product wave function.
pub fn g_factor(w: &ProductWaveFunction, r1: &BoxRegion, r2: &BoxRegion) -> f64 {
    region_probability(&w.packet1, r1) * region_probability(&w.packet2, r2)
}

fn axis_breakpoints(p: &GaussianPacket, i: usize) -> Vec<f64> {
    const SIGMAS: [f64; 13] = [-32.0, -16.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
    SIGMAS.iter().map(|k| p.mean[i] + k / p.m).collect()
}

fn quadrature_region_probability(p: &GaussianPacket, r: &BoxRegion, axis_tol: f64) -> Result<(f64, f64)> {
    let (lo, hi) = (r.lo(), r.hi());
    let mut value = 1.0;
    let mut error = 0.0;
    for i in 0..3 {
        let est = quadrature::integrate(
            |x| p.axis_density(i, x),
            lo[i],
            hi[i],
            &axis_breakpoints(p, i),
            axis_tol,
            MAX_SUBINTERVALS,
        )?;
        // Every factor is at most 1, so errors add to first order.
        error += est.error;
        value *= est.value;
    }
    Ok((value, error))
}

/// `g(O1, O2)` as a product of six adaptive quadratures of the Gaussian density.
///
/// Each axis is integrated to `tol / 16`, which bounds the product error by `tol`.
pub fn g_factor_quadrature(w: &ProductWaveFunction, r1: &BoxRegion, r2: &BoxRegion, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let axis_tol = tol / 16.0;
    let (p1, e1) = quadrature_region_probability(&w.packet1, r1, axis_tol)?;
    let (p2, e2) = quadrature_region_probability(&w.packet2, r2, axis_tol)?;
    let error = e1 + e2;
    if error > tol {
        return Err(Error::QuadratureNotConverged {
            estimate: p1 * p2,
            error_bound: error,
        });
    }
    Ok(p1 * p2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Monte Carlo estimate of `g` from `n` draws of `|phi|^2`.
///
/// Draws are split into fixed chunks of [`MC_CHUNK`]; chunk `c` uses a
/// ChaCha8 generator seeded with `seed` on stream `c`. The result depends only
/// on `(n, seed)` and not on the execution policy.
pub fn g_factor_montecarlo(
    w: &ProductWaveFunction,
    r1: &BoxRegion,
    r2: &BoxRegion,
    n: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    g_factor_montecarlo_with(w, r1, r2, n, seed, Exec::default())
}

pub fn g_factor_montecarlo_with(
    w: &ProductWaveFunction,
    r1: &BoxRegion,
    r2: &BoxRegion,
    n: usize,
    seed: u64,
    exec: Exec,
) -> Result<MonteCarloEstimate> {
    if n < MC_MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo needs at least {MC_MIN_SAMPLES} samples, got {n}"
        )));
    }
    let chunks = n.div_ceil(MC_CHUNK);
    let hits: usize = exec
        .map_indices(chunks, |c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = MC_CHUNK.min(n - c * MC_CHUNK);
            (0..len)
                .filter(|_| sample_hits(&mut rng, &w.packet1, r1) & sample_hits(&mut rng, &w.packet2, r2))
                .count()
        })
        .into_iter()
        .sum();
    let p = hits as f64 / n as f64;
    Ok(MonteCarloEstimate {
        estimate: p,
        stderr: (p * (1.0 - p) / n as f64).sqrt(),
        samples: n,
        seed,
    })
}

// Always consumes exactly three normals so the stream layout is fixed.
fn sample_hits(rng: &mut ChaCha8Rng, p: &GaussianPacket, r: &BoxRegion) -> bool {
    let z: [f64; 3] = [0, 1, 2].map(|_| rng.sample(StandardNormal));
    let point = [0, 1, 2].map(|i| p.mean[i] + z[i] / p.m);
    r.contains_point(point)
}

/// `P(a, O1 | D1)`: probability of a given spin outcome along any direction
/// with the particle in `o1`, conditioned on it being in `d1`.
///
/// The singlet marginal for either spin outcome is 1/2 for every direction.
pub fn conditional_spin_region_probability(p: &GaussianPacket, o1: &BoxRegion, d1: &BoxRegion) -> Result<f64> {
    if !d1.contains(o1) {
        return Err(Error::RegionNotContained);
    }
    let denominator = region_probability(p, d1);
    if denominator <= 1e-15 {
        return Err(Error::NullEvent);
    }
    Ok((0.5 * region_probability(p, o1) / denominator).min(0.5))
}
