//! Checkers for ε-cut and ε-spectral approximation.
//!
//! A graph `G̃` is an ε-cut approximation of `G` when every cut satisfies
//! `(1-ε) cut_G(S) ≤ cut_G̃(S) ≤ (1+ε) cut_G(S)`, and an ε-spectral
//! approximation when `(1-ε) xᵀL_G̃x ≤ xᵀL_Gx ≤ (1+ε) xᵀL_G̃x` for all `x`.

use nalgebra::{DMatrix, DVector};
use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{cut_weight, laplacian_matrix, quadratic_form, CutSpec, Graph, ZERO_EIGEN_TOL};
use crate::mincut::for_each_cut;
use crate::rng::{stream, streams};
use crate::spectral::full_eigen;

/// Largest vertex count accepted by [`check_cut_approximation`].
pub const EXHAUSTIVE_CUT_LIMIT: usize = 22;

/// Largest vertex count accepted by [`check_spectral_approximation`].
pub const SPECTRAL_CHECK_LIMIT: usize = 500;

/// Relative slack on the `1 ± ε` window absorbing floating-point noise.
pub const RATIO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproxKind {
    Cut,
    Spectral,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// Vertices on one side of the extremal cut.
    Cut(Vec<usize>),
    /// Extremal direction of the generalized Rayleigh quotient.
    Direction(Vec<f64>),
}

/// Outcome of an approximation check.
///
/// `worst_ratio` is the ratio farthest from 1 (`cut_G̃/cut_G` for cuts,
/// `xᵀL_Gx / xᵀL_G̃x` for the spectral check) and `witness` attains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApproxReport {
    pub kind: ApproxKind,
    pub epsilon: f64,
    pub holds: bool,
    #[serde(serialize_with = "serialize_ratio")]
    pub worst_ratio: f64,
    pub witness: Option<Witness>,
}

fn serialize_ratio<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    }
}

impl ApproxReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn witness_cut(&self, n: usize) -> Option<CutSpec> {
        match &self.witness {
            Some(Witness::Cut(members)) => CutSpec::new(n, members.iter().copied()).ok(),
            _ => None,
        }
    }
}

pub fn within(ratio: f64, epsilon: f64) -> bool {
    ratio >= (1.0 - epsilon) * (1.0 - RATIO_TOL) && ratio <= (1.0 + epsilon) * (1.0 + RATIO_TOL)
}

fn deviation(ratio: f64) -> f64 {
    (ratio - 1.0).abs()
}

fn check_pair(g: &Graph, g_tilde: &Graph) -> Result<()> {
    if g.n() != g_tilde.n() {
        return Err(Error::DimensionMismatch(format!(
            "graphs have {} and {} vertices",
            g.n(),
            g_tilde.n()
        )));
    }
    if g.n() < 2 {
        return Err(Error::InvalidArgument("need at least 2 vertices".into()));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon >= 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon = {epsilon} must be nonnegative")))
    }
}

/// `cut_G̃ / cut_G`, with `0/0 = 1`. Values below `zero` count as zero.
fn cut_ratio(cut_g: f64, cut_gt: f64, zero: f64) -> f64 {
    match (cut_g <= zero, cut_gt <= zero) {
        (true, true) => 1.0,
        (true, false) => f64::INFINITY,
        _ => cut_gt.max(0.0) / cut_g,
    }
}

fn total_weight(g: &Graph) -> f64 {
    g.weights().iter().sum::<f64>() / 2.0
}

/// Ratio of one cut, evaluated directly from the weight matrices.
pub fn cut_ratio_of(g: &Graph, g_tilde: &Graph, cut: &CutSpec) -> Result<f64> {
    check_pair(g, g_tilde)?;
    Ok(cut_ratio(cut_weight(g, cut)?, cut_weight(g_tilde, cut)?, 0.0))
}

/// Exhaustive ε-cut check over all `2^(n-1) - 1` cuts.
pub fn check_cut_approximation(g: &Graph, g_tilde: &Graph, epsilon: f64) -> Result<ApproxReport> {
    check_pair(g, g_tilde)?;
    check_epsilon(epsilon)?;
    let n = g.n();
    if n > EXHAUSTIVE_CUT_LIMIT {
        return Err(Error::TooLargeForExhaustive {
            n,
            limit: EXHAUSTIVE_CUT_LIMIT,
        });
    }
    let zero = 1e-12 * (total_weight(g) + total_weight(g_tilde)).max(1.0);
    let mut worst = (1.0, f64::NEG_INFINITY, 1u64);
    for_each_cut(&[g, g_tilde], |mask, cuts| {
        let r = cut_ratio(cuts[0], cuts[1], zero);
        let d = deviation(r);
        if d > worst.1 {
            worst = (r, d, mask);
        }
    });
    let cut = CutSpec::from_mask(n, worst.2)?;
    let ratio = cut_ratio(cut_weight(g, &cut)?, cut_weight(g_tilde, &cut)?, zero);
    Ok(ApproxReport {
        kind: ApproxKind::Cut,
        epsilon,
        holds: within(ratio, epsilon),
        worst_ratio: ratio,
        witness: Some(Witness::Cut(cut.members().to_vec())),
    })
}

/// Verdict of the randomized cut checker, which can only falsify.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase", tag = "verdict")]
pub enum SampledCutVerdict {
    Violated(ApproxReport),
    NotFalsified {
        cuts_checked: usize,
        #[serde(serialize_with = "serialize_ratio")]
        worst_ratio: f64,
    },
}

/// Tests every singleton cut plus `samples` uniformly random cuts.
pub fn check_cut_approximation_sampled(
    g: &Graph,
    g_tilde: &Graph,
    epsilon: f64,
    samples: usize,
    seed: u64,
) -> Result<SampledCutVerdict> {
    check_pair(g, g_tilde)?;
    check_epsilon(epsilon)?;
    let n = g.n();
    let mut rng = stream(seed, streams::CUT_SAMPLES);
    let mut worst: Option<(f64, CutSpec)> = None;
    let mut checked = 0;
    let mut consider = |cut: CutSpec| -> Result<()> {
        let r = cut_ratio(cut_weight(g, &cut)?, cut_weight(g_tilde, &cut)?, 0.0);
        checked += 1;
        if worst.as_ref().is_none_or(|(w, _)| deviation(r) > deviation(*w)) {
            worst = Some((r, cut));
        }
        Ok(())
    };
    for v in 0..n {
        consider(CutSpec::new(n, [v])?)?;
    }
    let mut drawn = 0;
    while drawn < samples {
        let members: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if members.is_empty() || members.len() == n {
            continue;
        }
        drawn += 1;
        consider(CutSpec::new(n, members)?)?;
    }
    let (ratio, cut) = worst.expect("n >= 2 gives at least one cut");
    if within(ratio, epsilon) {
        Ok(SampledCutVerdict::NotFalsified {
            cuts_checked: checked,
            worst_ratio: ratio,
        })
    } else {
        Ok(SampledCutVerdict::Violated(ApproxReport {
            kind: ApproxKind::Cut,
            epsilon,
            holds: false,
            worst_ratio: ratio,
            witness: Some(Witness::Cut(cut.members().to_vec())),
        }))
    }
}

/// Generalized Rayleigh quotients `xᵀL_Gx / xᵀL_G̃x` of a pair of graphs.
#[derive(Debug, Clone)]
pub struct RayleighSpectrum {
    /// `None` when the null spaces agree; otherwise a vector in one null
    /// space but not the other, with its ratio (`∞` or `0`).
    pub null_mismatch: Option<(f64, DVector<f64>)>,
    /// Ascending generalized eigenvalues on the common range.
    pub ratios: Vec<f64>,
    /// Generalized eigenvectors matching `ratios`, as columns.
    pub directions: DMatrix<f64>,
}

/// Solves the generalized eigenproblem `L_G x = r L_G̃ x` on the range of
/// `L_G̃` by symmetrizing with `L_G̃^{+1/2}`.
pub fn rayleigh_spectrum(g: &Graph, g_tilde: &Graph) -> Result<RayleighSpectrum> {
    check_pair(g, g_tilde)?;
    let n = g.n();
    let lg = laplacian_matrix(g);
    let lt = laplacian_matrix(g_tilde);
    let eg = full_eigen(&lg);
    let et = full_eigen(&lt);
    let tol_g = ZERO_EIGEN_TOL * eg.eigenvalues[n - 1].max(1.0);
    let tol_t = ZERO_EIGEN_TOL * et.eigenvalues[n - 1].max(1.0);
    let null_g = eg.eigenvalues.iter().take_while(|&&v| v <= tol_g).count();
    let null_t = et.eigenvalues.iter().take_while(|&&v| v <= tol_t).count();

    // a null vector of G̃ that G does not annihilate has ratio ∞
    let mut escape: Option<(f64, DVector<f64>)> = None;
    for c in 0..null_t {
        let x = et.eigenvectors.column(c).into_owned();
        let q = quadratic_form(&lg, &x);
        if q > tol_g && escape.as_ref().is_none_or(|(best, _)| q > *best) {
            escape = Some((q, x));
        }
    }
    if let Some((_, x)) = escape {
        return Ok(RayleighSpectrum {
            null_mismatch: Some((f64::INFINITY, x)),
            ratios: Vec::new(),
            directions: DMatrix::zeros(n, 0),
        });
    }
    if null_g != null_t {
        // null(L_G̃) ⊂ null(L_G) strictly: some null vector of G has ratio 0
        let mut best: Option<(f64, DVector<f64>)> = None;
        for c in 0..null_g {
            let x = eg.eigenvectors.column(c).into_owned();
            let q = quadratic_form(&lt, &x);
            if best.as_ref().is_none_or(|(b, _)| q > *b) {
                best = Some((q, x));
            }
        }
        let (_, x) = best.expect("null space of a Laplacian is nonempty");
        return Ok(RayleighSpectrum {
            null_mismatch: Some((0.0, x)),
            ratios: Vec::new(),
            directions: DMatrix::zeros(n, 0),
        });
    }

    let rank = n - null_t;
    let mut half_inv = DMatrix::zeros(n, rank);
    for (c, col) in (null_t..n).enumerate() {
        let scale = 1.0 / et.eigenvalues[col].sqrt();
        half_inv.set_column(c, &(et.eigenvectors.column(col) * scale));
    }
    let mut m = half_inv.transpose() * &lg * &half_inv;
    m = (&m + m.transpose()) * 0.5;
    let inner = full_eigen(&m);
    let directions = &half_inv * &inner.eigenvectors;
    Ok(RayleighSpectrum {
        null_mismatch: None,
        ratios: inner.eigenvalues,
        directions,
    })
}

/// Exact ε-spectral check via the generalized eigenvalues of the pair.
pub fn check_spectral_approximation(g: &Graph, g_tilde: &Graph, epsilon: f64) -> Result<ApproxReport> {
    check_pair(g, g_tilde)?;
    check_epsilon(epsilon)?;
    if g.n() > SPECTRAL_CHECK_LIMIT {
        return Err(Error::TooLargeForExhaustive {
            n: g.n(),
            limit: SPECTRAL_CHECK_LIMIT,
        });
    }
    let spec = rayleigh_spectrum(g, g_tilde)?;
    let (ratio, direction) = match spec.null_mismatch {
        Some(found) => found,
        None if spec.ratios.is_empty() => (1.0, DVector::zeros(g.n())),
        None => {
            let last = spec.ratios.len() - 1;
            let pick = if deviation(spec.ratios[0]) >= deviation(spec.ratios[last]) { 0 } else { last };
            (spec.ratios[pick], spec.directions.column(pick).into_owned())
        }
    };
    Ok(ApproxReport {
        kind: ApproxKind::Spectral,
        epsilon,
        holds: within(ratio, epsilon),
        worst_ratio: ratio,
        witness: Some(Witness::Direction(direction.iter().copied().collect())),
    })
}

/// Both verdicts on one pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Implication {
    pub spectral: ApproxReport,
    pub cut: ApproxReport,
}

impl Implication {
    /// False only when the spectral check holds and the cut check fails.
    pub fn consistent(&self) -> bool {
        !self.spectral.holds || self.cut.holds
    }
}

pub fn check_implies(g: &Graph, g_tilde: &Graph, epsilon: f64) -> Result<Implication> {
    Ok(Implication {
        spectral: check_spectral_approximation(g, g_tilde, epsilon)?,
        cut: check_cut_approximation(g, g_tilde, epsilon)?,
    })
}
