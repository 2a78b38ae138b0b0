//! Closed-form query budgets for uniform sampling.
//!
//! All logarithms are natural. Each calculator returns the real-valued bound
//! and the smallest integer edge count meeting it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::num_pairs;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Budget {
    pub value: f64,
    /// `ceil(value)`, saturating.
    pub edges: u64,
}

impl Budget {
    fn new(value: f64) -> Self {
        let edges = if value <= 0.0 {
            0
        } else if value >= u64::MAX as f64 {
            u64::MAX
        } else {
            value.ceil() as u64
        };
        Self { value, edges }
    }

    /// The budget clipped to the `C(n,2)` available edges.
    pub fn capped(&self, n: usize) -> usize {
        (self.edges.min(num_pairs(n) as u64)) as usize
    }

    pub fn exceeds_all_pairs(&self, n: usize) -> bool {
        self.edges > num_pairs(n) as u64
    }
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} = {v} must lie in (0, 1)")))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} = {v} must be positive")))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("n = {n} must be at least 2")))
    }
}

fn pairs(n: usize) -> f64 {
    num_pairs(n) as f64
}

/// `ln(2 + 4 ln n)`, the union-bound slack over cut sizes.
pub fn cut_count_slack(n: usize) -> f64 {
    (2.0 + 4.0 * (n as f64).ln()).ln()
}

/// Inputs of the spectral-approximation budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralBudgetInputs {
    pub n: usize,
    /// Smallest weighted degree of the hidden graph.
    pub min_degree: f64,
    /// Second smallest eigenvalue of the normalized Laplacian.
    pub lambda2: f64,
    pub epsilon: f64,
    pub delta: f64,
}

/// `m ≥ C(n,2) (12 k / (ε λ₂))² / min_i D_ii` with `k = max{ln(3/δ), ln n}`
/// edges suffice for an ε-spectral approximation with probability `1 - δ`.
///
/// `λ₂ ≤ 0` is reported as [`Error::BoundVacuous`].
pub fn theorem1_budget(inp: &SpectralBudgetInputs) -> Result<Budget> {
    check_n(inp.n)?;
    check_open_unit("epsilon", inp.epsilon)?;
    check_open_unit("delta", inp.delta)?;
    if !(inp.lambda2 > 0.0) {
        return Err(Error::BoundVacuous(format!(
            "lambda2 = {} (graph has a nontrivial normalized null space)",
            inp.lambda2
        )));
    }
    if !(inp.min_degree > 0.0) {
        return Err(Error::BoundVacuous(format!("min degree = {}", inp.min_degree)));
    }
    let k = (3.0 / inp.delta).ln().max((inp.n as f64).ln());
    let ratio = 12.0 * k / (inp.epsilon * inp.lambda2);
    Ok(Budget::new(pairs(inp.n) * ratio * ratio / inp.min_degree))
}

/// `C(n,2)(1 - δ)/c`: below this many uniform samples no ε < 1 cut
/// approximation of a binary graph with minimum cut `c` holds with
/// probability above `1 - δ`.
pub fn theorem2_lower_budget(n: usize, c: f64, delta: f64) -> Result<f64> {
    check_n(n)?;
    check_positive("c", c)?;
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!("delta = {delta} must lie in [0, 1)")));
    }
    Ok(pairs(n) * (1.0 - delta) / c)
}

/// Inputs of the cut-approximation budget given the true minimum cut.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutBudgetInputs {
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Minimum cut weight of the hidden graph.
    pub c: f64,
}

/// `C(n,2) · 3(2 ln n + ln(1/δ) + k) / (ε² c)` with `k = ln(2 + 4 ln n)`.
pub fn appendix_c_cut_budget(inp: &CutBudgetInputs) -> Result<Budget> {
    check_n(inp.n)?;
    check_open_unit("epsilon", inp.epsilon)?;
    check_open_unit("delta", inp.delta)?;
    check_positive("c", inp.c)?;
    let n = inp.n as f64;
    let k = cut_count_slack(inp.n);
    let value = pairs(inp.n) * 3.0 * (2.0 * n.ln() + (1.0 / inp.delta).ln() + k)
        / (inp.epsilon * inp.epsilon * inp.c);
    Ok(Budget::new(value))
}

/// The shrink factor `β = sqrt(1 + l/(p c̃)) - sqrt(l/(p c̃))`, `l = 3 ln(1/δ)/4`.
pub fn appendix_c_beta(p_observed: f64, c_tilde: f64, delta: f64) -> Result<f64> {
    check_positive("p", p_observed)?;
    check_positive("observed min cut", c_tilde)?;
    check_open_unit("delta", delta)?;
    let l = 3.0 * (1.0 / delta).ln() / 4.0;
    let r = l / (p_observed * c_tilde);
    Ok((1.0 + r).sqrt() - r.sqrt())
}

/// High-probability lower bound `c̃ β²` on the hidden minimum cut from the
/// minimum cut `c̃` of the rescaled sample taken with edge probability `p`.
pub fn appendix_c_cmin_lower(p_observed: f64, c_tilde: f64, delta: f64) -> Result<f64> {
    let beta = appendix_c_beta(p_observed, c_tilde, delta)?;
    Ok(c_tilde * beta * beta)
}

/// Budget from observable quantities only:
/// `C(n,2) · 3(2 ln n + ln(2/δ) + k) / (ε² β² c̃)`, with `β` taken at
/// confidence `δ/2`.
pub fn appendix_c_observable_budget(
    n: usize,
    epsilon: f64,
    delta: f64,
    p_observed: f64,
    c_tilde: f64,
) -> Result<Budget> {
    check_n(n)?;
    check_open_unit("epsilon", epsilon)?;
    check_open_unit("delta", delta)?;
    let beta = appendix_c_beta(p_observed, c_tilde, delta / 2.0)?;
    let nf = n as f64;
    let value = pairs(n) * 3.0 * (2.0 * nf.ln() + (2.0 / delta).ln() + cut_count_slack(n))
        / (epsilon * epsilon * beta * beta * c_tilde);
    Ok(Budget::new(value))
}

/// Inputs of the clusterable-graph budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterBudgetInputs {
    pub n: usize,
    /// Lower bound on every within-cluster minimum cut.
    pub c_in: f64,
    /// Upper bound on every cut separating whole clusters.
    pub c_out: f64,
    /// Number of clusters.
    pub clusters: usize,
    pub delta: f64,
}

/// `(12 n² / c_in)(2 ln n + ℓ ln(2/δ) + k)` with `k = ln(2 + 4 ln n)`;
/// requires `c_in > 4 c_out`, otherwise [`Error::AssumptionViolated`].
pub fn theorem4_cluster_budget(inp: &ClusterBudgetInputs) -> Result<Budget> {
    check_n(inp.n)?;
    check_open_unit("delta", inp.delta)?;
    check_positive("c_in", inp.c_in)?;
    if inp.clusters == 0 {
        return Err(Error::InvalidArgument("need at least one cluster".into()));
    }
    if !(inp.c_out >= 0.0) {
        return Err(Error::InvalidArgument(format!("c_out = {} must be nonnegative", inp.c_out)));
    }
    if !(inp.c_in > 4.0 * inp.c_out) {
        return Err(Error::AssumptionViolated(format!(
            "c_in = {} is not greater than 4 c_out = {}",
            inp.c_in,
            4.0 * inp.c_out
        )));
    }
    let n = inp.n as f64;
    let value = 12.0 * n * n / inp.c_in
        * (2.0 * n.ln() + inp.clusters as f64 * (2.0 / inp.delta).ln() + cut_count_slack(inp.n));
    Ok(Budget::new(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1(epsilon: f64, min_degree: f64) -> SpectralBudgetInputs {
        SpectralBudgetInputs {
            n: 100,
            min_degree,
            lambda2: 0.5,
            epsilon,
            delta: 0.05,
        }
    }

    #[test]
    fn spectral_budget_reference_value() {
        // 50-digit evaluation: 24186835.028153613...
        let b = theorem1_budget(&t1(0.5, 10.0)).unwrap();
        assert!((b.value - 24_186_835.028_153_613).abs() / b.value < 1e-12);
        assert_eq!(b.edges, 24_186_836);
    }

    #[test]
    fn spectral_budget_scaling() {
        let a = theorem1_budget(&t1(0.2, 10.0)).unwrap();
        let b = theorem1_budget(&t1(0.4, 10.0)).unwrap();
        assert!((a.value / b.value - 4.0).abs() < 1e-12);
        assert!(a.edges.abs_diff(4 * b.edges) <= 4);
        let c = theorem1_budget(&t1(0.2, 20.0)).unwrap();
        assert!((a.value / c.value - 2.0).abs() < 1e-12);
        assert!(a.edges.abs_diff(2 * c.edges) <= 2);
    }

    #[test]
    fn spectral_budget_vacuous() {
        let mut inp = t1(0.5, 10.0);
        inp.lambda2 = 0.0;
        assert!(matches!(theorem1_budget(&inp), Err(Error::BoundVacuous(_))));
        inp.lambda2 = 0.5;
        inp.epsilon = 1.5;
        assert!(matches!(theorem1_budget(&inp), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn lower_budget_values() {
        assert_eq!(theorem2_lower_budget(20, 1.0, 0.0).unwrap(), 190.0);
        assert_eq!(theorem2_lower_budget(20, 2.0, 0.5).unwrap(), 47.5);
        assert!(theorem2_lower_budget(20, 0.0, 0.5).is_err());
    }

    #[test]
    fn beta_reference_value_and_limit() {
        // l = 2.2467992051654932..., β = 0.5335505398787614..., c̃β² = 14.233808930245890...
        let beta = appendix_c_beta(0.1, 50.0, 0.05).unwrap();
        assert!((beta - 0.533_550_539_878_761_44).abs() < 1e-14);
        let lower = appendix_c_cmin_lower(0.1, 50.0, 0.05).unwrap();
        assert!((lower - 14.233_808_930_245_89).abs() < 1e-12);
        let near = appendix_c_cmin_lower(1.0, 1e12, 0.05).unwrap();
        assert!((near / 1e12 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn cut_budget_reference_value() {
        // 12374.070285144807...
        let b = appendix_c_cut_budget(&CutBudgetInputs {
            n: 30,
            epsilon: 0.5,
            delta: 0.1,
            c: 5.0,
        })
        .unwrap();
        assert!((b.value - 12_374.070_285_144_807).abs() < 1e-8);
        assert_eq!(b.edges, 12_375);
    }

    #[test]
    fn cluster_budget_reference_value_and_assumption() {
        // 218185.85933879650...
        let inp = ClusterBudgetInputs {
            n: 200,
            c_in: 50.0,
            c_out: 10.0,
            clusters: 3,
            delta: 0.1,
        };
        let b = theorem4_cluster_budget(&inp).unwrap();
        assert!((b.value - 218_185.859_338_796_5).abs() < 1e-7);
        assert_eq!(b.edges, 218_186);
        let halved = theorem4_cluster_budget(&ClusterBudgetInputs { c_in: 100.0, ..inp }).unwrap();
        assert!((b.value / halved.value - 2.0).abs() < 1e-12);
        let bad = ClusterBudgetInputs { c_out: 12.5, ..inp };
        assert!(matches!(theorem4_cluster_budget(&bad), Err(Error::AssumptionViolated(_))));
    }

    #[test]
    fn observable_budget_exceeds_known_cut_budget() {
        let known = appendix_c_cut_budget(&CutBudgetInputs {
            n: 30,
            epsilon: 0.5,
            delta: 0.1,
            c: 5.0,
        })
        .unwrap();
        let observed = appendix_c_observable_budget(30, 0.5, 0.1, 0.5, 5.0).unwrap();
        assert!(observed.value > known.value);
    }

    #[test]
    fn capping() {
        let b = Budget::new(1e9);
        assert_eq!(b.capped(10), 45);
        assert!(b.exceeds_all_pairs(10));
        assert_eq!(Budget::new(12.0).edges, 12);
    }
}
