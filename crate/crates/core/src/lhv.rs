//! Local hidden variable representability of finite correlation tables.
//!
//! A table `P(a_i, b_j)` has a representation `integral A(a_i, l) B(b_j, l) drho(l)`
//! with `|A|, |B| <= 1` iff it lies in the convex hull of the deterministic
//! `+-1` strategy tables `s_i t_j`. Response functions valued in `[-1, 1]`
//! are themselves mixtures of `+-1` responses, so the vertex set and the
//! bounded continuum span the same polytope. Membership is decided by a
//! phase-one linear program over the mixture weights.
//!
//! The measure `rho` is taken independent of the detector regions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::UnitVector3;
use crate::simplex::{LinearProgram, LpOutcome, SimplexOptions};

/// Per-side limit on the number of settings for strategy enumeration.
pub const MAX_SETTINGS_PER_SIDE: usize = 12;

/// Column limit of the membership LP (`2^(m_a + m_b - 1)` strategies).
pub const MAX_LP_STRATEGIES: usize = 1 << 11;

pub const DEFAULT_TOL: f64 = 1e-9;

const ENTRY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    /// Setting labels; empty for a purely numeric table.
    pub settings_a: Vec<UnitVector3>,
    pub settings_b: Vec<UnitVector3>,
    values: Vec<Vec<f64>>,
}

impl CorrelationTable {
    /// An unlabelled table.
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        Self::labelled(Vec::new(), Vec::new(), values)
    }

    pub fn labelled(settings_a: Vec<UnitVector3>, settings_b: Vec<UnitVector3>, values: Vec<Vec<f64>>) -> Result<Self> {
        let rows = values.len();
        let cols = values.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("correlation table must be non-empty".into()));
        }
        if values.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("correlation table rows differ in length".into()));
        }
        if !settings_a.is_empty() && settings_a.len() != rows || !settings_b.is_empty() && settings_b.len() != cols {
            return Err(Error::Dimension(format!(
                "{}x{} settings for a {rows}x{cols} table",
                settings_a.len(),
                settings_b.len()
            )));
        }
        if let Some(v) = values.iter().flatten().find(|v| !(v.abs() <= 1.0 + ENTRY_SLACK)) {
            return Err(Error::InvalidParameter(format!("correlation {v} outside [-1, 1]")));
        }
        Ok(CorrelationTable { settings_a, settings_b, values })
    }

    /// `P(a_i, b_j) = correlator(a_i, b_j)`.
    pub fn from_correlator<F>(settings_a: Vec<UnitVector3>, settings_b: Vec<UnitVector3>, correlator: F) -> Result<Self>
    where
        F: Fn(&UnitVector3, &UnitVector3) -> f64,
    {
        let values = settings_a
            .iter()
            .map(|a| settings_b.iter().map(|b| correlator(a, b)).collect())
            .collect();
        Self::labelled(settings_a, settings_b, values)
    }

    pub fn rows(&self) -> usize {
        self.values.len()
    }

    pub fn cols(&self) -> usize {
        self.values[0].len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    /// Entrywise scaling; labels are kept.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let values = self.values.iter().map(|r| r.iter().map(|v| v * factor).collect()).collect();
        Self::labelled(self.settings_a.clone(), self.settings_b.clone(), values)
    }
}

/// Fixed `+-1` responses for every setting on each side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub signs_a: Vec<i8>,
    pub signs_b: Vec<i8>,
}

impl DeterministicStrategy {
    /// Vertex `V[i][j] = s_i t_j` of the local correlation polytope.
    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        f64::from(self.signs_a[i] * self.signs_b[j])
    }

    pub fn flipped(&self) -> DeterministicStrategy {
        DeterministicStrategy {
            signs_a: self.signs_a.iter().map(|s| -s).collect(),
            signs_b: self.signs_b.iter().map(|s| -s).collect(),
        }
    }
}

/// All strategies for `m_a x m_b` settings, one per global-flip class.
///
/// `(s, t)` and `(-s, -t)` give the same correlation vertex, so the first
/// response on side A is pinned to `+1`, leaving `2^(m_a + m_b - 1)` strategies.
/// Bit `k` of the index sets `signs_a[k + 1]` for `k < m_a - 1` and
/// `signs_b[k - m_a + 1]` otherwise; a set bit means `-1`.
pub fn enumerate_strategies(m_a: usize, m_b: usize) -> Result<Vec<DeterministicStrategy>> {
    if m_a == 0 || m_b == 0 {
        return Err(Error::InvalidParameter("need at least one setting per side".into()));
    }
    if m_a > MAX_SETTINGS_PER_SIDE || m_b > MAX_SETTINGS_PER_SIDE {
        return Err(Error::TooLarge(format!(
            "{m_a}x{m_b} settings, limit is {MAX_SETTINGS_PER_SIDE} per side"
        )));
    }
    let free_bits = m_a + m_b - 1;
    let sign = |index: u64, bit: usize| if index >> bit & 1 == 0 { 1i8 } else { -1i8 };
    Ok((0..1u64 << free_bits)
        .map(|k| DeterministicStrategy {
            signs_a: std::iter::once(1).chain((0..m_a - 1).map(|i| sign(k, i))).collect(),
            signs_b: (0..m_b).map(|j| sign(k, m_a - 1 + j)).collect(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhvModel {
    pub weights: Vec<f64>,
    pub strategies: Vec<DeterministicStrategy>,
}

impl LhvModel {
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest entrywise deviation of the reconstruction from `t`.
    pub fn max_deviation(&self, t: &CorrelationTable) -> f64 {
        let r = reconstruct(self);
        r.iter()
            .zip(t.values())
            .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
            .fold(0.0, f64::max)
    }
}

/// `sum_k w_k s_k[i] t_k[j]`.
pub fn reconstruct(model: &LhvModel) -> Vec<Vec<f64>> {
    let Some(first) = model.strategies.first() else {
        return Vec::new();
    };
    let (rows, cols) = (first.signs_a.len(), first.signs_b.len());
    let mut out = vec![vec![0.0; cols]; rows];
    for (w, s) in model.weights.iter().zip(&model.strategies) {
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v += w * s.correlation(i, j);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub feasible: bool,
    /// Witness with strictly positive weights, present iff feasible.
    pub model: Option<LhvModel>,
    /// Phase-one L1 residual of the equality system.
    pub residual: f64,
}

/// Decide whether `t` lies in the local correlation polytope.
///
/// Feasible means some mixture of deterministic strategies, with weights
/// summing to one, reproduces `t` up to an L1 residual of `tol` over all
/// entries and the normalization row.
pub fn lhv_membership(t: &CorrelationTable, tol: f64) -> Result<Membership> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let (m_a, m_b) = (t.rows(), t.cols());
    if m_a + m_b - 1 > MAX_LP_STRATEGIES.trailing_zeros() as usize {
        return Err(Error::TooLarge(format!(
            "{m_a}x{m_b} settings need {} strategies, LP limit is {MAX_LP_STRATEGIES} (m_a + m_b <= 12)",
            1u128 << (m_a + m_b - 1)
        )));
    }
    let strategies = enumerate_strategies(m_a, m_b)?;

    let mut a = Vec::with_capacity(m_a * m_b + 1);
    let mut b = Vec::with_capacity(m_a * m_b + 1);
    for i in 0..m_a {
        for j in 0..m_b {
            a.push(strategies.iter().map(|s| s.correlation(i, j)).collect());
            b.push(t.get(i, j));
        }
    }
    a.push(vec![1.0; strategies.len()]);
    b.push(1.0);
    let lp = LinearProgram { a, b, c: vec![0.0; strategies.len()] };
    let opts = SimplexOptions { feasibility_tol: tol, ..SimplexOptions::default() };

    match lp.solve(&opts)? {
        LpOutcome::Optimal { x, residual, .. } => {
            let (weights, strategies) = x.into_iter().zip(strategies).filter(|(w, _)| *w > 0.0).unzip();
            Ok(Membership { feasible: true, model: Some(LhvModel { weights, strategies }), residual })
        }
        LpOutcome::Infeasible { residual } => Ok(Membership { feasible: false, model: None, residual }),
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

/// Largest of the eight CHSH expressions of a 2x2 table.
///
/// `<= 2` is necessary for membership and, at this size, sufficient.
pub fn chsh_facet_check(t: &CorrelationTable) -> Result<f64> {
    if t.rows() != 2 || t.cols() != 2 {
        return Err(Error::Dimension(format!("CHSH facets need a 2x2 table, got {}x{}", t.rows(), t.cols())));
    }
    let e = [t.get(0, 0), t.get(0, 1), t.get(1, 0), t.get(1, 1)];
    let total: f64 = e.iter().sum();
    // Flipping the sign of one entry picks which term carries the minus.
    Ok((0..4)
        .map(|k| (total - 2.0 * e[k]).abs())
        .fold(f64::NEG_INFINITY, f64::max))
}
