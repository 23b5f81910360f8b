//! Exact and sampled evaluation of an adaptive scheme.

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{contract_first, residual_state, AdaptiveScheme};
use crate::error::{Error, Result};
use crate::matcore::Ket;
use crate::povm::PovmPair;
use crate::rng;
use crate::scalar::Scalar;
use crate::tol::Tolerances;

const SHARD: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SimulationMode {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub first_outcome: usize,
    pub second_outcome: usize,
    /// `|<v_1|v_2>|` of the normalized conditional states; absent when either vanishes.
    pub overlap: Option<f64>,
    pub probability_first: f64,
    pub probability_second: f64,
    /// Joint probability of this path and each final outcome, per hypothesis.
    pub likelihoods: [[f64; 3]; 2],
    /// Guess made on each final outcome.
    pub decisions: [Hypothesis; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub success_probability: f64,
    /// Binomial standard error; sampled mode only.
    pub standard_error: Option<f64>,
    pub mode: SimulationMode,
    /// Largest path overlap over paths where both states are non-zero.
    pub max_overlap: f64,
    /// Sum of path probabilities under each hypothesis.
    pub total_probability: [f64; 2],
    pub paths: Vec<PathRecord>,
}

fn check_dims<T: Scalar>(scheme: &AdaptiveScheme<T>, pair: &PovmPair<T>) -> Result<()> {
    if scheme.d != pair.dim() || scheme.m != pair.effects() {
        return Err(Error::DimensionMismatch(format!(
            "scheme is for d = {}, m = {}; pair has d = {}, m = {}",
            scheme.d,
            scheme.m,
            pair.dim(),
            pair.effects()
        )));
    }
    let d = scheme.d;
    if scheme.isometries.len() != scheme.m
        || scheme.final_measurements.len() != scheme.m * scheme.m
        || scheme.isometries.iter().any(|u| u.shape() != (d * d, d))
    {
        return Err(Error::DimensionMismatch("scheme components have inconsistent sizes".into()));
    }
    Ok(())
}

pub fn simulate_exact<T: Scalar>(
    scheme: &AdaptiveScheme<T>,
    pair: &PovmPair<T>,
    tol: &Tolerances,
) -> Result<SimulationReport> {
    simulate_exact_with_prior(scheme, pair, 0.5, tol)
}

/// Enumerates all `m^2` outcome paths; `prior` is the probability of the
/// first hypothesis.
pub fn simulate_exact_with_prior<T: Scalar>(
    scheme: &AdaptiveScheme<T>,
    pair: &PovmPair<T>,
    prior: f64,
    tol: &Tolerances,
) -> Result<SimulationReport> {
    check_dims(scheme, pair)?;
    if !(0.0..=1.0).contains(&prior) {
        return Err(Error::InvalidShape(format!("prior {prior} outside [0, 1]")));
    }
    let priors = [prior, 1.0 - prior];
    let m = scheme.m;
    let povms = [&pair.first, &pair.second];
    let zero = tol.zero_norm;

    // Reference-register state after the isometry, per hypothesis and first outcome.
    let mid: Vec<[Ket<T>; 2]> = (0..m)
        .map(|i| {
            let u = &scheme.isometries[i];
            [0, 1].map(|h| u * residual_state(povms[h].vector(i)))
        })
        .collect();

    let mut paths = Vec::with_capacity(m * m);
    let mut success = 0.0;
    let mut total = [0.0; 2];
    let mut max_overlap = 0.0f64;
    for (i, states) in mid.iter().enumerate() {
        for j in 0..m {
            let w = [0, 1].map(|h| contract_first(&states[h], povms[h].vector(j)));
            let probs = [0, 1].map(|h| w[h].norm_squared().to_f64_lossy());
            let norms = probs.map(f64::sqrt);
            let overlap = (norms[0] > zero && norms[1] > zero).then(|| {
                let z = w[0].dotc(&w[1]).norm_sqr().sqrt().to_f64_lossy();
                z / (norms[0] * norms[1])
            });
            if let Some(o) = overlap {
                max_overlap = max_overlap.max(o);
            }
            let fm = scheme.final_measurement(i, j);
            let likelihoods = [0, 1].map(|h| fm.outcome_weights(&w[h]).map(|p| p.to_f64_lossy() * priors[h]));
            let decisions = [0, 1, 2].map(|k| {
                if likelihoods[0][k] >= likelihoods[1][k] {
                    Hypothesis::First
                } else {
                    Hypothesis::Second
                }
            });
            for k in 0..3 {
                success += likelihoods[0][k].max(likelihoods[1][k]);
            }
            total[0] += probs[0];
            total[1] += probs[1];
            paths.push(PathRecord {
                first_outcome: i,
                second_outcome: j,
                overlap,
                probability_first: probs[0],
                probability_second: probs[1],
                likelihoods,
                decisions,
            });
        }
    }
    Ok(SimulationReport {
        success_probability: success.clamp(0.0, 1.0),
        standard_error: None,
        mode: SimulationMode::Exact,
        max_overlap,
        total_probability: total,
        paths,
    })
}

/// Monte-Carlo run with a uniform prior: draws the hypothesis, then a path
/// and final outcome, then applies the exact report's decision table.
///
/// Shots are split into fixed shards, each with its own stream, so the
/// frequency does not depend on the thread count.
pub fn simulate_sampled<T: Scalar>(
    scheme: &AdaptiveScheme<T>,
    pair: &PovmPair<T>,
    shots: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<SimulationReport> {
    if shots == 0 {
        return Err(Error::InvalidShape("shots must be at least 1".into()));
    }
    let exact = simulate_exact(scheme, pair, tol)?;
    let decisions: Vec<Hypothesis> = exact.paths.iter().flat_map(|p| p.decisions).collect();
    // The likelihoods carry the prior 1/2; the weights only need proportionality.
    let dists = [0, 1].map(|h| {
        WeightedIndex::new(exact.paths.iter().flat_map(|p| p.likelihoods[h]).map(|w| w.max(0.0)))
            .map_err(|e| Error::PreconditionFailed(format!("outcome distribution: {e}")))
    });
    let [d0, d1] = dists;
    let dists = [d0?, d1?];

    let shards = shots.div_ceil(SHARD);
    let correct: u64 = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut r = rng::stream(seed, s);
            let n = SHARD.min(shots - s * SHARD);
            let mut ok = 0u64;
            for _ in 0..n {
                let h = usize::from(r.random::<bool>());
                let k = dists[h].sample(&mut r);
                let truth = if h == 0 { Hypothesis::First } else { Hypothesis::Second };
                if decisions[k] == truth {
                    ok += 1;
                }
            }
            ok
        })
        .sum();
    let f = correct as f64 / shots as f64;
    Ok(SimulationReport {
        success_probability: f,
        standard_error: Some((f * (1.0 - f) / shots as f64).sqrt()),
        mode: SimulationMode::Sampled { shots, seed },
        ..exact
    })
}
