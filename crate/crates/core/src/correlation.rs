//! Localized correlation `E = g * E_spin`, the CHSH functional and its
//! maximization, and the locality criterion `g <= 1/sqrt(2)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{BoxRegion, UnitVector3};
use crate::spatial::{g_factor, ProductWaveFunction};
use crate::spin::e_spin;

/// Largest `g` for which no CHSH violation is possible.
pub const LOCALITY_THRESHOLD: f64 = FRAC_1_SQRT_2;

/// Separation of the two packets in the symmetric family, in units of `1/m`.
pub const PAPER_SEPARATION: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub a: UnitVector3,
    pub a_prime: UnitVector3,
    pub b: UnitVector3,
    pub b_prime: UnitVector3,
}

/// Settings with `a.b = a'.b = a'.b' = -a.b' = sqrt(2)/2`.
pub fn tsirelson_settings() -> ChshSettings {
    let h = FRAC_1_SQRT_2;
    ChshSettings {
        a: UnitVector3::X,
        a_prime: UnitVector3::Y,
        b: UnitVector3::new(h, h, 0.0).unwrap(),
        b_prime: UnitVector3::new(-h, h, 0.0).unwrap(),
    }
}

/// A product wave function together with the two detector boxes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub wave: ProductWaveFunction,
    pub region1: BoxRegion,
    pub region2: BoxRegion,
}

impl Scenario {
    pub fn new(wave: ProductWaveFunction, region1: BoxRegion, region2: BoxRegion) -> Self {
        Scenario { wave, region1, region2 }
    }

    /// Packets at `0` and `(separation/m, 0, 0)`, each detector a cube of
    /// half-width `half_width/m` on its packet mean. Both arguments are
    /// dimensionless.
    pub fn symmetric(m: f64, half_width: f64, separation: f64) -> Result<Scenario> {
        let l = [separation / m, 0.0, 0.0];
        let wave = ProductWaveFunction::new(m, [0.0; 3], l)?;
        let region1 = wave.packet1.centered_box(half_width / m)?;
        let region2 = wave.packet2.centered_box(half_width / m)?;
        Ok(Scenario { wave, region1, region2 })
    }

    /// Boxes `|r_i| < 1/m` and their translate by `l = (10/m, 0, 0)`.
    pub fn paper(m: f64) -> Result<Scenario> {
        Scenario::symmetric(m, 1.0, PAPER_SEPARATION)
    }

    pub fn g(&self) -> f64 {
        g_factor(&self.wave, &self.region1, &self.region2)
    }
}

/// `E(a, O1, b, O2) = g(O1, O2) * E_spin(a, b)` via the closed-form `g`.
pub fn e_full(s: &Scenario, a: &UnitVector3, b: &UnitVector3) -> f64 {
    s.g() * e_spin(a, b)
}

/// `P(a,b) - P(a,b') + P(a',b) + P(a',b')`.
pub fn chsh_value<F>(correlator: F, s: &ChshSettings) -> f64
where
    F: Fn(&UnitVector3, &UnitVector3) -> f64,
{
    correlator(&s.a, &s.b) - correlator(&s.a, &s.b_prime) + correlator(&s.a_prime, &s.b)
        + correlator(&s.a_prime, &s.b_prime)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshOptions {
    /// Number of independent random starts.
    pub starts: usize,
    /// Target accuracy of the maximal `|CHSH|`.
    pub tol: f64,
    pub seed: u64,
    /// Fail with [`Error::OptimizerStuck`] unless the maximum exceeds this.
    pub require_above: Option<f64>,
    pub exec: Exec,
}

impl Default for ChshOptions {
    fn default() -> Self {
        ChshOptions {
            starts: 32,
            tol: 1e-6,
            seed: 0x5eed,
            require_above: None,
            exec: Exec::default(),
        }
    }
}

impl ChshOptions {
    pub fn with_tol(tol: f64) -> Self {
        ChshOptions { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshOptimum {
    pub settings: ChshSettings,
    /// Maximal `|CHSH|` found.
    pub value: f64,
    /// Index of the start that produced it.
    pub start: usize,
}

// Angles (theta, phi) for a, a', b, b'.
type Angles = [f64; 8];

fn settings_from(x: &Angles) -> ChshSettings {
    ChshSettings {
        a: UnitVector3::from_spherical(x[0], x[1]),
        a_prime: UnitVector3::from_spherical(x[2], x[3]),
        b: UnitVector3::from_spherical(x[4], x[5]),
        b_prime: UnitVector3::from_spherical(x[6], x[7]),
    }
}

const GRID: usize = 24;
const INV_PHI: f64 = 0.618_033_988_749_894_9;
const ANGLE_TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 2000;

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > ANGLE_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

// Coordinate ascent: each angle is scanned on a coarse grid over a full
// period, then refined by golden section around the best grid point.
fn local_search<F>(correlator: &F, mut x: Angles, tol: f64) -> (Angles, f64)
where
    F: Fn(&UnitVector3, &UnitVector3) -> f64,
{
    let objective = |x: &Angles| chsh_value(correlator, &settings_from(x)).abs();
    let mut best = objective(&x);
    let step = TAU / GRID as f64;
    for _ in 0..MAX_SWEEPS {
        let before = best;
        for k in 0..8 {
            let along = |t: f64| {
                let mut y = x;
                y[k] = t;
                objective(&y)
            };
            let (mut t_best, mut f_best) = (x[k], best);
            for j in 1..GRID {
                let t = x[k] + j as f64 * step;
                let f = along(t);
                if f > f_best {
                    t_best = t;
                    f_best = f;
                }
            }
            let (t, f) = golden_max(along, t_best - step, t_best + step);
            if f > f_best {
                t_best = t;
                f_best = f;
            }
            if f_best > best {
                x[k] = t_best.rem_euclid(TAU);
                best = f_best;
            }
        }
        if best - before <= 1e-4 * tol {
            break;
        }
    }
    (x, best)
}

/// Maximize `|CHSH|` over four unit vectors by multi-start coordinate ascent.
///
/// Starts are independent and seeded from `opts.seed`; the best start wins,
/// ties going to the lowest start index.
pub fn chsh_maximize<F>(correlator: F, opts: &ChshOptions) -> Result<ChshOptimum>
where
    F: Fn(&UnitVector3, &UnitVector3) -> f64 + Sync + Send,
{
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if opts.starts == 0 {
        return Err(Error::InvalidParameter("need at least one start".into()));
    }
    let runs = opts.exec.map_indices(opts.starts, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(i as u64);
        let mut x = [0.0; 8];
        for pair in x.chunks_mut(2) {
            pair[0] = rng.random_range(0.0..PI);
            pair[1] = rng.random_range(0.0..TAU);
        }
        local_search(&correlator, x, opts.tol)
    });
    let (start, (x, value)) = runs
        .into_iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, (Angles, f64))>, (i, run)| match acc {
            Some((j, best)) if best.1 >= run.1 => Some((j, best)),
            _ => Some((i, run)),
        })
        .expect("at least one start");
    if let Some(required) = opts.require_above {
        if value <= required {
            return Err(Error::OptimizerStuck { best: value, required });
        }
    }
    Ok(ChshOptimum {
        settings: settings_from(&x),
        value,
        start,
    })
}

/// Maximal `|CHSH|` of the bare singlet correlation; must exceed the local bound 2.
pub fn tsirelson_maximum(tol: f64) -> Result<ChshOptimum> {
    let opts = ChshOptions {
        require_above: Some(2.0),
        ..ChshOptions::with_tol(tol)
    };
    chsh_maximize(e_spin, &opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalityVerdict {
    pub g: f64,
    pub local: bool,
}

/// `g <= 1/sqrt(2)` counts as local; the boundary itself is local.
pub fn is_local(g: f64) -> bool {
    g <= LOCALITY_THRESHOLD
}

pub fn locality_criterion(s: &Scenario) -> LocalityVerdict {
    let g = s.g();
    LocalityVerdict { g, local: is_local(g) }
}

/// Dimensionless half-width `w*m` at which the symmetric family reaches
/// `g = 1/sqrt(2)`.
pub fn criterion_threshold(m: f64, tol: f64) -> Result<f64> {
    criterion_threshold_for(m, LOCALITY_THRESHOLD, tol)
}

/// Bisection for the half-width `w*m` where the symmetric family has `g = target`.
pub fn criterion_threshold_for(m: f64, target: f64, tol: f64) -> Result<f64> {
    if !(m > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("need m > 0 and tol > 0, got m={m}, tol={tol}")));
    }
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!("target g must lie in (0, 1), got {target}")));
    }
    let g_at = |x: f64| Scenario::symmetric(m, x, PAPER_SEPARATION).map(|s| s.g());
    // g(40) is 1 to machine precision, g(tiny) is ~0.
    let (mut lo, mut hi) = (1e-12, 40.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if g_at(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaperBound {
    pub g: f64,
    /// `(2/pi)^3`.
    pub bound: f64,
    /// `g < bound`.
    pub holds: bool,
    /// `bound < 1/sqrt(2)`.
    pub bound_below_threshold: bool,
}

pub fn verify_paper_bound(m: f64) -> Result<PaperBound> {
    let g = Scenario::paper(m)?.g();
    let bound = (2.0 / PI).powi(3);
    Ok(PaperBound {
        g,
        bound,
        holds: g < bound,
        bound_below_threshold: bound < LOCALITY_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spatial::all_space;

    const SQRT8: f64 = 2.0 * std::f64::consts::SQRT_2;
    const PAPER_G: f64 = 0.101_237_009_970_611_1;
    // mpmath root of erf(x/sqrt 2)^6 = 1/sqrt 2.
    const THRESHOLD: f64 = 1.910_058_455_222_521_6;

    fn all_space_scenario() -> Scenario {
        let wave = ProductWaveFunction::new(1.0, [0.0; 3], [10.0, 0.0, 0.0]).unwrap();
        Scenario::new(wave, all_space(1.0), all_space(1.0))
    }

    #[test]
    fn tsirelson_settings_overlaps() {
        let s = tsirelson_settings();
        let h = FRAC_1_SQRT_2;
        assert!((s.a.dot(&s.b) - h).abs() < 1e-15);
        assert!((s.a_prime.dot(&s.b) - h).abs() < 1e-15);
        assert!((s.a_prime.dot(&s.b_prime) - h).abs() < 1e-15);
        assert!((s.a.dot(&s.b_prime) + h).abs() < 1e-15);
    }

    #[test]
    fn e_full_examples() {
        let x = UnitVector3::X;
        assert!((e_full(&all_space_scenario(), &x, &x) + 1.0).abs() < 1e-12);
        let paper = Scenario::paper(1.0).unwrap();
        assert!((e_full(&paper, &x, &x) + PAPER_G).abs() < 1e-12);
        assert_eq!(e_full(&paper, &x, &UnitVector3::Y), 0.0);
    }

    #[test]
    fn chsh_value_examples() {
        let s = tsirelson_settings();
        assert!((chsh_value(e_spin, &s) + SQRT8).abs() < 1e-12);
        let full = all_space_scenario();
        let v = chsh_value(|a: &UnitVector3, b: &UnitVector3| e_full(&full, a, b), &s);
        assert!((v + SQRT8).abs() < 1e-12);
        let same = ChshSettings { a: s.a, a_prime: s.a, b: s.a, b_prime: s.a };
        assert_eq!(chsh_value(e_spin, &same), -2.0);
    }

    #[test]
    fn chsh_at_paper_settings_scales_with_g() {
        for half_width in [0.3, 1.0, 1.7, 2.5, 4.0] {
            let sc = Scenario::symmetric(1.3, half_width, 10.0).unwrap();
            let v = chsh_value(|a: &UnitVector3, b: &UnitVector3| e_full(&sc, a, b), &tsirelson_settings());
            assert!((v.abs() - SQRT8 * sc.g()).abs() < 1e-9);
        }
    }

    #[test]
    fn maximize_reaches_tsirelson() {
        let best = tsirelson_maximum(1e-6).unwrap();
        assert!((best.value - SQRT8).abs() < 1e-6, "{}", best.value);
        assert!((chsh_value(e_spin, &best.settings).abs() - best.value).abs() < 1e-12);
    }

    #[test]
    fn maximize_scaled_and_zero() {
        let half = chsh_maximize(|a: &UnitVector3, b: &UnitVector3| 0.5 * e_spin(a, b), &ChshOptions::with_tol(1e-6))
            .unwrap();
        assert!((half.value - std::f64::consts::SQRT_2).abs() < 1e-6);
        let zero = chsh_maximize(|_: &UnitVector3, _: &UnitVector3| 0.0, &ChshOptions::default()).unwrap();
        assert_eq!(zero.value, 0.0);
        assert_eq!(zero.start, 0);
    }

    #[test]
    fn stuck_optimizer_is_reported() {
        let opts = ChshOptions { require_above: Some(2.0), ..ChshOptions::default() };
        let err = chsh_maximize(|a: &UnitVector3, b: &UnitVector3| 0.5 * e_spin(a, b), &opts).unwrap_err();
        assert!(matches!(err, Error::OptimizerStuck { .. }));
    }

    #[test]
    fn maximize_is_policy_independent() {
        let seq = ChshOptions { exec: Exec::Sequential, starts: 8, ..ChshOptions::default() };
        let par = ChshOptions { exec: Exec::Parallel, ..seq };
        assert_eq!(chsh_maximize(e_spin, &seq).unwrap(), chsh_maximize(e_spin, &par).unwrap());
    }

    #[test]
    fn locality_examples() {
        let v = locality_criterion(&Scenario::paper(1.0).unwrap());
        assert!((v.g - PAPER_G).abs() < 1e-12 && v.local);
        let v = locality_criterion(&all_space_scenario());
        assert!((v.g - 1.0).abs() < 1e-12 && !v.local);
        assert!(is_local(LOCALITY_THRESHOLD - 1e-9));
        assert!(is_local(LOCALITY_THRESHOLD));
        assert!(!is_local(LOCALITY_THRESHOLD + 1e-15));
    }

    #[test]
    fn threshold_examples() {
        let w = criterion_threshold(1.0, 1e-8).unwrap();
        assert!((w - THRESHOLD).abs() < 1e-8);
        let g_at = |x: f64| Scenario::symmetric(1.0, x, 10.0).unwrap().g();
        assert!(g_at(w - 1e-6) < LOCALITY_THRESHOLD && LOCALITY_THRESHOLD < g_at(w + 1e-6));
        assert!((g_at(w) - LOCALITY_THRESHOLD).abs() <= 1e-7);

        let w1 = criterion_threshold_for(1.0, PAPER_G, 1e-8).unwrap();
        assert!((w1 - 1.0).abs() < 1e-8);

        let w5 = criterion_threshold(5.0, 1e-8).unwrap();
        assert!((w5 - w).abs() < 2e-8);
    }

    #[test]
    fn paper_bound_chain() {
        for m in [1.0, 0.01, 7.5, 1e3] {
            let b = verify_paper_bound(m).unwrap();
            assert!((b.g - PAPER_G).abs() < 1e-12);
            // (2/pi)^3, mpmath
            assert!((b.bound - 0.258_012_275_465_595_9).abs() < 1e-15);
            assert!(b.holds && b.bound_below_threshold);
        }
    }
}
