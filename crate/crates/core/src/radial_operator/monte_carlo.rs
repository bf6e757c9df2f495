use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

use super::kernel::check_dimension;
use super::profile::RadialProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Direct average of f(|x - t y|) over y uniform on S^{d-1}, x = (r, 0, …, 0).
/// Directions come from normalized Gaussian vectors.
pub fn monte_carlo_mean(
    d: u32,
    f: &RadialProfile,
    r: f64,
    t: f64,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_dimension(d)?;
    if samples < 2 {
        return Err(Error::InsufficientData("need at least two samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = vec![0.0f64; d as usize];
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let mut norm_sq = 0.0;
        for c in y.iter_mut() {
            *c = StandardNormal.sample(&mut rng);
            norm_sq += *c * *c;
        }
        let y1 = y[0] / norm_sq.sqrt();
        let dist = (r * r + t * t - 2.0 * r * t * y1).max(0.0).sqrt();
        let v = f.eval(dist);
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(MonteCarloEstimate { mean, std_error: (var / n).sqrt(), samples })
}
