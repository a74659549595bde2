//! Repeated embed-and-certify runs under random Dirichlet weights.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::Complex;
use crate::embed::{assemble_weights, place_boundary, solve_positions, EmbedError, PlacementStrategy, WeightScheme};
use crate::geom::Tolerance;
use crate::verify::{certify, CertifyOptions, SampleSpec, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchemeDescriptor {
    pub alpha: f64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FailureModes {
    pub degenerate: usize,
    pub flipped: usize,
    pub overlapping: usize,
}

impl FailureModes {
    pub fn total(&self) -> usize {
        self.degenerate + self.flipped + self.overlapping
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Summary {
    fn of(values: &[f64]) -> Option<Summary> {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = match n {
            0 => return None,
            _ if n % 2 == 1 => v[n / 2],
            _ => 0.5 * (v[n / 2 - 1] + v[n / 2]),
        };
        Some(Summary {
            count: n,
            min: v[0],
            median,
            max: v[n - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub mesh_id: String,
    pub trials: usize,
    pub scheme: SchemeDescriptor,
    /// Trials whose realization was certified as not embedded.
    pub failures: usize,
    pub failure_modes: FailureModes,
    /// Trials that failed before certification, keyed by error message.
    pub errors: BTreeMap<String, usize>,
    /// Indices of failed or erroring trials, ascending.
    pub failing_trials: Vec<usize>,
    /// Per-trial minimum signed tet volume over certified trials.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_volume: Option<Summary>,
}

enum Trial {
    Certified { verdict: Verdict, min_volume: f64 },
    Error(String),
}

/// Seed of trial `t`.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    seed ^ t as u64
}

/// Runs `trials` Dirichlet(`alpha`) weight draws. The boundary placement is
/// checked once up front; per-trial errors are tallied, not propagated.
pub fn run_random_weight_experiment(
    mesh_id: &str,
    complex: &Complex,
    trials: usize,
    alpha: f64,
    seed: u64,
    opts: &CertifyOptions,
) -> Result<ExperimentResult, EmbedError> {
    let coords = complex.mesh().coords().ok_or(EmbedError::MissingCoordinates)?;
    let placement = place_boundary(complex, PlacementStrategy::AsGiven, coords, &opts.tolerance)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(EmbedError::Internal(format!("Dirichlet concentration must be positive, got {alpha}")));
    }

    let outcomes: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, t);
            let run = || -> Result<Trial, EmbedError> {
                let weights = assemble_weights(complex, &WeightScheme::Dirichlet { alpha, seed: s })?;
                let realized = solve_positions(complex, &weights, &placement)?;
                let cert = certify(
                    &realized,
                    &CertifyOptions {
                        samples: SampleSpec {
                            seed: s,
                            ..opts.samples
                        },
                        ..*opts
                    },
                );
                Ok(Trial::Certified {
                    verdict: cert.verdict,
                    min_volume: cert.min_signed_volume,
                })
            };
            run().unwrap_or_else(|e| Trial::Error(e.to_string()))
        })
        .collect();

    let mut modes = FailureModes::default();
    let mut errors = BTreeMap::new();
    let mut failing = Vec::new();
    let mut volumes = Vec::new();
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Trial::Certified { verdict, min_volume } => {
                volumes.push(min_volume);
                match verdict {
                    Verdict::Embedded => continue,
                    Verdict::Degenerate => modes.degenerate += 1,
                    Verdict::Flipped => modes.flipped += 1,
                    Verdict::Overlapping => modes.overlapping += 1,
                }
            }
            Trial::Error(e) => *errors.entry(e).or_insert(0) += 1,
        }
        failing.push(t);
    }
    Ok(ExperimentResult {
        mesh_id: mesh_id.to_string(),
        trials,
        scheme: SchemeDescriptor { alpha, seed },
        failures: modes.total(),
        failure_modes: modes,
        errors,
        failing_trials: failing,
        min_volume: Summary::of(&volumes),
    })
}

/// Default options scaled down for bulk trials.
pub fn experiment_options(tol: Tolerance) -> CertifyOptions {
    CertifyOptions {
        tolerance: tol,
        samples: SampleSpec {
            samples: 200,
            ..SampleSpec::default()
        },
    }
}
