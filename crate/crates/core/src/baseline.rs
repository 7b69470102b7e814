//! Classical coupon collecting: uniform draws with replacement until every
//! element has been seen.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Number of draws needed to see all `n` elements.
pub fn classical_baseline_with<R: Rng + ?Sized>(n: u64, rng: &mut R) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let n_usize = usize::try_from(n).map_err(|_| Error::InvalidArgument(format!("n = {n} too large")))?;
    let mut seen = vec![false; n_usize];
    let mut remaining = n;
    let mut draws = 0u64;
    while remaining > 0 {
        let k = rng.random_range(0..n_usize);
        draws += 1;
        if !seen[k] {
            seen[k] = true;
            remaining -= 1;
        }
    }
    Ok(draws)
}

pub fn classical_baseline(n: u64, seed: u64) -> Result<u64> {
    classical_baseline_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `n * H_n`, the expected draw count.
pub fn expected_draws(n: u64) -> f64 {
    n as f64 * (1..=n).map(|k| 1.0 / k as f64).sum::<f64>()
}
