use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::quadrature::jensen_integrand;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Samples per independently seeded chunk. Fixed so that results do not
/// depend on the number of worker threads.
const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum McIntegrand {
    /// arcosh⁺(|2cos θ₁ + 2cos θ₂ − k|/2) on the 2-torus.
    #[default]
    Jensen,
    /// log|2cos θ₁ + 2cos θ₂ + 2cos θ₃ − k| on the 3-torus.
    Torus3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct McOptions {
    pub integrand: McIntegrand,
    /// Pair each draw θ with π − θ, which flips the sign of every cosine.
    pub antithetic: bool,
}

/// Plain Monte Carlo estimate of m(P_k) from the Jensen-reduced integrand.
pub fn mahler_mc(k: f64, samples: u64, seed: u64) -> Result<McEstimate> {
    mahler_mc_with(k, samples, seed, McOptions::default())
}

pub fn mahler_mc_with(k: f64, samples: u64, seed: u64, opts: McOptions) -> Result<McEstimate> {
    if samples < 1000 {
        return Err(Error::Domain("Monte Carlo needs at least 1000 samples".into()));
    }
    // One observation is a single draw, or an antithetic pair counted as two samples.
    let per_obs = if opts.antithetic { 2 } else { 1 };
    let obs = samples / per_obs;
    let chunks = obs.div_ceil(CHUNK);
    let parts: Vec<(CompensatedSum, CompensatedSum)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK.min(obs - c * CHUNK);
            let mut s = CompensatedSum::new();
            let mut s2 = CompensatedSum::new();
            for _ in 0..n {
                let x = observe(&mut rng, k, opts);
                s.add(x);
                s2.add(x * x);
            }
            (s, s2)
        })
        .collect();
    let mut s = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for (a, b) in &parts {
        s.merge(a);
        s2.merge(b);
    }
    let n = obs as f64;
    let mean = s.value() / n;
    let var = ((s2.value() / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(McEstimate { estimate: mean, stderr: (var / n).sqrt(), samples: obs * per_obs })
}

fn observe(rng: &mut ChaCha8Rng, k: f64, opts: McOptions) -> f64 {
    match opts.integrand {
        McIntegrand::Jensen => {
            let c = 2.0 * (PI * rng.random::<f64>()).cos() + 2.0 * (PI * rng.random::<f64>()).cos();
            if opts.antithetic {
                0.5 * (jensen_integrand(c - k) + jensen_integrand(-c - k))
            } else {
                jensen_integrand(c - k)
            }
        }
        McIntegrand::Torus3 => {
            let c: f64 = (0..3).map(|_| 2.0 * (PI * rng.random::<f64>()).cos()).sum();
            if opts.antithetic {
                0.5 * ((c - k).abs().ln() + (-c - k).abs().ln())
            } else {
                (c - k).abs().ln()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let a = mahler_mc(6.0, 1000, 7).unwrap();
        let b = mahler_mc(6.0, 1000, 7).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        assert_ne!(a.estimate, mahler_mc(6.0, 1000, 8).unwrap().estimate);
        assert!(mahler_mc(6.0, 999, 7).is_err());
    }

    #[test]
    fn chunking_is_thread_independent() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let one = pool.install(|| mahler_mc(3.0, 300_000, 11).unwrap());
        let many = mahler_mc(3.0, 300_000, 11).unwrap();
        assert_eq!(one, many);
    }
}
