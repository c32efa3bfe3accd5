use super::{poisson::poisson_sample, ByteMatrix, ImagingError, COLUMNS};
use crate::rng::DeterministicRng;

/// One matrix row of displacement on average.
pub const DEFAULT_LAMBDA: f64 = COLUMNS as f64;

/// Poisson mean for swap distances and the seed driving the draws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShuffleSpec {
    lambda: f64,
    seed: u64,
}

impl ShuffleSpec {
    pub fn new(lambda: f64, seed: u64) -> Result<Self, ImagingError> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(ImagingError::InvalidLambda(lambda));
        }
        Ok(Self { lambda, seed })
    }

    /// Lambda zero: every swap is a no-op.
    pub fn identity() -> Self {
        Self {
            lambda: 0.0,
            seed: 0,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl Default for ShuffleSpec {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
            seed: 0,
        }
    }
}

/// Poisson-displacement swap pass over the flattened matrix.
///
/// For each position `i` in order, draw `d ~ Poisson(lambda)` and swap `i`
/// with `(i + d) mod L`. Padding bytes take part like any other entry.
pub fn shuffle(matrix: &ByteMatrix, spec: &ShuffleSpec) -> ByteMatrix {
    let mut data = matrix.data().to_vec();
    if spec.lambda > 0.0 {
        let len = data.len() as u64;
        let mut rng = DeterministicRng::from_seed(spec.seed);
        for i in 0..data.len() {
            let d = poisson_sample(spec.lambda, &mut rng);
            let j = ((i as u64 + d % len) % len) as usize;
            data.swap(i, j);
        }
    }
    matrix.with_data(data)
}
