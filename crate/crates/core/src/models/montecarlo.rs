use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::rational::to_f64;

use super::{build_model, ModelSpec, Query};

/// Samples per independent stream. Chunk `i` always uses stream `i` of the
/// seed, so results do not depend on the number of worker threads.
const CHUNK: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub stderr: f64,
}

pub fn mc_estimate(g: &MultiGraph, spec: &ModelSpec, q: &Query, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::Precondition("at least one sample is needed".into()));
    }
    let model = build_model(g, spec)?;
    q.validate(g)?;
    let probs: Vec<f64> = model
        .bit_laws()
        .iter()
        .map(|law| {
            law.as_constant()
                .map(|c| to_f64(&c))
                .ok_or_else(|| Error::ModelMismatch("sampling needs a numeric p".into()))
        })
        .collect::<Result<_>>()?;
    let m = model.as_ref();
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut hits = 0u64;
            for _ in 0..count {
                let outcome = probs.iter().enumerate().fold(0u64, |acc, (i, &p)| {
                    acc | ((rng.random::<f64>() < p) as u64) << i
                });
                hits += q.holds(m, outcome) as u64;
            }
            hits
        })
        .sum();
    let estimate = hits as f64 / samples as f64;
    Ok(McEstimate {
        samples,
        hits,
        estimate,
        stderr: (estimate * (1.0 - estimate) / samples as f64).sqrt(),
    })
}
