//! Verification scans over explicit filter families.
//!
//! The filters are parameterized as `Q(a, theta) = M(a, b) U(theta)` with
//! `b = sqrt(1 - a^2)` and `U(theta) = R(theta) sigma_z`, one per qubit. A
//! scan evaluates the outcome concurrence on a grid of angles; a random
//! search samples arbitrary positive filters. Neither should ever beat
//! [`crate::filtering::maximize`].

mod oracle;

use std::f64::consts::PI;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concurrence::normalized_concurrence;
use crate::error::{Error, Result};
use crate::filtering::TAU_WEIGHT;
use crate::qmat::{kron, Complex, Mat2};
use crate::random::random_filter;
use crate::states::{filter_m, rotation_r, DensityOperator};

pub use oracle::{eigenvalues_general, oracle_concurrence};

/// `a1` of the published surface.
pub const DEFAULT_A1: f64 = 0.99987;
/// `a2` of the published surface.
pub const DEFAULT_A2: f64 = 0.01797;
/// Points per axis of the default coarse grid.
pub const DEFAULT_STEPS: usize = 201;
/// Samples per independently seeded stream in [`random_search`].
const SEARCH_CHUNK: usize = 4096;

/// `steps` equally spaced angles from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AngleRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let r = Self { lo, hi, steps };
        r.validate()?;
        Ok(r)
    }

    /// `steps` points covering `[lo, hi)` with spacing `(hi - lo) / steps`.
    pub fn half_open(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let h = (hi - lo) / steps as f64;
        Self::new(lo, hi - h, steps)
    }

    /// The default axis `[0, pi)` with [`DEFAULT_STEPS`] points.
    pub fn default_axis() -> Self {
        Self::half_open(0.0, PI, DEFAULT_STEPS).expect("valid default")
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidConfig(format!(
                "range needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.hi <= self.lo {
            return Err(Error::InvalidConfig(format!(
                "range {}:{} is empty or not finite",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.steps - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }
}

impl FromStr for AngleRange {
    type Err = Error;

    /// Parses `lo:hi:steps`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("expected lo:hi:steps, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(bad());
        };
        let lo = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim().parse().map_err(|_| bad())?;
        let steps = steps.trim().parse().map_err(|_| bad())?;
        Self::new(lo, hi, steps)
    }
}

/// Which angle a one-dimensional slice varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceAxis {
    Theta1,
    Theta2,
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub theta1: AngleRange,
    pub theta2: AngleRange,
    pub a1: f64,
    pub a2: f64,
    /// Pins `theta1` (giving a `theta2` slice).
    pub fix_theta1: Option<f64>,
    /// Pins `theta2` (giving a `theta1` slice).
    pub fix_theta2: Option<f64>,
    pub state: DensityOperator,
}

impl ScanConfig {
    /// Default grid with the published `a1`, `a2`.
    pub fn with_defaults(state: DensityOperator) -> Self {
        Self {
            theta1: AngleRange::default_axis(),
            theta2: AngleRange::default_axis(),
            a1: DEFAULT_A1,
            a2: DEFAULT_A2,
            fix_theta1: None,
            fix_theta2: None,
            state,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.theta1.validate()?;
        self.theta2.validate()?;
        for a in [self.a1, self.a2] {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::InvalidConfig(format!("a = {a} outside (0, 1)")));
            }
        }
        if self.fix_theta1.is_some() && self.fix_theta2.is_some() {
            return Err(Error::InvalidConfig("cannot pin both angles".into()));
        }
        Ok(())
    }

    pub fn slice(&self) -> Option<SliceAxis> {
        match (self.fix_theta1, self.fix_theta2) {
            (Some(_), None) => Some(SliceAxis::Theta2),
            (None, Some(_)) => Some(SliceAxis::Theta1),
            _ => None,
        }
    }

    fn points(&self) -> Vec<(f64, f64)> {
        let axis1: Vec<f64> = match self.fix_theta1 {
            Some(t) => vec![t],
            None => (0..self.theta1.steps)
                .map(|i| self.theta1.value(i))
                .collect(),
        };
        let axis2: Vec<f64> = match self.fix_theta2 {
            Some(t) => vec![t],
            None => (0..self.theta2.steps)
                .map(|i| self.theta2.value(i))
                .collect(),
        };
        axis1
            .iter()
            .flat_map(|&t1| axis2.iter().map(move |&t2| (t1, t2)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub theta1: f64,
    pub theta2: f64,
    /// NaN where the filters removed the state.
    pub concurrence: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanResult {
    /// Row-major in `theta1`, then `theta2`.
    pub grid: Vec<ScanPoint>,
    pub argmax: ScanPoint,
    pub slice: Option<SliceAxis>,
}

/// `U(theta) = R(theta) sigma_z`.
pub fn u_theta(theta: f64) -> Mat2 {
    rotation_r(theta) * Mat2::pauli_z()
}

/// `M(a, sqrt(1 - a^2)) U(theta)`.
pub fn scan_filter(a: f64, theta: f64) -> Mat2 {
    let b = (1.0 - a * a).max(0.0).sqrt();
    filter_m(Complex::new(a, 0.0), Complex::new(b, 0.0)) * u_theta(theta)
}

/// Normalized concurrence of `(q1 ⊗ q2) rho (q1 ⊗ q2)^dagger`, or `None`
/// when the filters remove the state.
pub fn outcome_concurrence(rho: &DensityOperator, q1: &Mat2, q2: &Mat2) -> Option<f64> {
    let out = rho.transformed(&kron(q1, q2));
    if !(out.weight() > TAU_WEIGHT * rho.weight()) {
        return None;
    }
    normalized_concurrence(&out).ok()
}

/// Evaluates the outcome concurrence on the configured grid or slice.
pub fn scan_theta(cfg: &ScanConfig) -> Result<ScanResult> {
    cfg.validate()?;
    let grid: Vec<ScanPoint> = cfg
        .points()
        .into_par_iter()
        .map(|(theta1, theta2)| {
            let q1 = scan_filter(cfg.a1, theta1);
            let q2 = scan_filter(cfg.a2, theta2);
            ScanPoint {
                theta1,
                theta2,
                concurrence: outcome_concurrence(&cfg.state, &q1, &q2).unwrap_or(f64::NAN),
            }
        })
        .collect();

    // First strictly larger entry wins, so ties go to the lowest index.
    let mut argmax: Option<ScanPoint> = None;
    for p in &grid {
        if p.concurrence.is_nan() {
            continue;
        }
        if argmax.map_or(true, |best| p.concurrence > best.concurrence) {
            argmax = Some(*p);
        }
    }
    let argmax = argmax.ok_or(Error::FilteredToZero { weight: 0.0 })?;
    Ok(ScanResult {
        grid,
        argmax,
        slice: cfg.slice(),
    })
}

/// A coarse scan followed by a second scan of `refine_steps` points per
/// free axis spanning one coarse spacing on either side of the coarse peak.
pub fn scan_refined(cfg: &ScanConfig, refine_steps: usize) -> Result<(ScanResult, ScanResult)> {
    let coarse = scan_theta(cfg)?;
    let around = |center: f64, range: &AngleRange| {
        let h = range.spacing();
        AngleRange::new(center - h, center + h, refine_steps)
    };
    let mut fine_cfg = cfg.clone();
    if cfg.fix_theta1.is_none() {
        fine_cfg.theta1 = around(coarse.argmax.theta1, &cfg.theta1)?;
    }
    if cfg.fix_theta2.is_none() {
        fine_cfg.theta2 = around(coarse.argmax.theta2, &cfg.theta2)?;
    }
    let fine = scan_theta(&fine_cfg)?;
    Ok((coarse, fine))
}

/// Best filter pair found by [`random_search`].
#[derive(Debug, Clone, Copy)]
pub struct SearchResult {
    pub best_c: f64,
    pub best_ops: (Mat2, Mat2),
    /// Sample index of the best pair.
    pub best_index: usize,
}

/// Samples `n` filter pairs `diag(d) U` (Haar `U`, `d_i` uniform in
/// `[0.01, 1]`) and keeps the best outcome concurrence.
///
/// Output depends only on `(state, n, seed)`: samples are drawn in fixed
/// chunks, each from its own stream of a seeded ChaCha generator.
pub fn random_search(state: &DensityOperator, n: usize, seed: u64) -> Result<SearchResult> {
    random_search_with(state, n, seed, |rng| {
        (random_filter(rng), random_filter(rng))
    })
}

/// [`random_search`] with a custom sampler.
pub fn random_search_with<F>(
    state: &DensityOperator,
    n: usize,
    seed: u64,
    sampler: F,
) -> Result<SearchResult>
where
    F: Fn(&mut ChaCha8Rng) -> (Mat2, Mat2) + Sync,
{
    if n == 0 {
        return Err(Error::InvalidConfig("random search needs n >= 1".into()));
    }
    let chunks = n.div_ceil(SEARCH_CHUNK);
    let per_chunk: Vec<Option<SearchResult>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let start = chunk * SEARCH_CHUNK;
            let end = (start + SEARCH_CHUNK).min(n);
            let mut best: Option<SearchResult> = None;
            for index in start..end {
                let (q1, q2) = sampler(&mut rng);
                let Some(c) = outcome_concurrence(state, &q1, &q2) else {
                    continue;
                };
                if best.map_or(true, |b| c > b.best_c) {
                    best = Some(SearchResult {
                        best_c: c,
                        best_ops: (q1, q2),
                        best_index: index,
                    });
                }
            }
            best
        })
        .collect();

    per_chunk
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.best_c > a.best_c { b } else { a })
        .ok_or(Error::FilteredToZero { weight: 0.0 })
}
