//! Numeric stable rank bounds for matrix rings and Morita-equivalent corners.

use crate::error::{Error, Result};

fn positive(v: u64) -> Result<u64> {
    if v == 0 {
        return Err(Error::InvalidSize(0));
    }
    Ok(v)
}

/// Stable rank bound for `M_n(A)` from `sr(A)`: `ceil((sr - 1) / n) + 1`.
pub fn vaserstein_bound(sr_a: u64, n: u64) -> Result<u64> {
    let (sr, n) = (positive(sr_a)?, positive(n)?);
    Ok((sr - 1).div_ceil(n) + 1)
}

/// For `B = pAp` with `p` full: `1 <~ t.p` in `A` and `n` copies of the
/// corner idempotent reach `1_B`. Returns the bounds
/// `(sr(A) <= n.sr(B) - n + 1, sr(B) <= t.sr(A) - t + 1)`.
pub fn morita_bounds(n: u64, t: u64, sr_a: u64, sr_b: u64) -> Result<(u64, u64)> {
    let (n, t) = (positive(n)?, positive(t)?);
    let (sr_a, sr_b) = (positive(sr_a)?, positive(sr_b)?);
    Ok((n * sr_b - n + 1, t * sr_a - t + 1))
}
