//! Growth-rate estimation for characteristic sequences. The limit of
//! alpha(n)/n is the quantity everything else in this crate computes in
//! closed form, so the two estimators here are the empirical side of every
//! cross-check.

use crate::error::{Error, Result};
use crate::ordering::CharSequence;

/// `endpoint` is alpha(N)/N at the last index; `least_squares` fits a line
/// through the last `window` points. The endpoint converges like the
/// sequence itself; the fit smooths the staircase pattern out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeEstimate {
    pub endpoint: f64,
    pub least_squares: f64,
    pub window: usize,
}

pub fn slope_estimate(seq: &CharSequence, window: usize) -> Result<SlopeEstimate> {
    if window < 100 {
        return Err(Error::WindowTooShort { min: 100, got: window });
    }
    if seq.len() < window {
        return Err(Error::WindowTooShort {
            min: window,
            got: seq.len(),
        });
    }
    let v = seq.values();
    let n_last = v.len() - 1;
    let endpoint = v[n_last] as f64 / n_last as f64;

    let start = v.len() - window;
    let mean_x = (start + n_last) as f64 / 2.0;
    let mean_y = v[start..].iter().map(|&y| y as f64).sum::<f64>() / window as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, &y) in v[start..].iter().enumerate() {
        let dx = (start + i) as f64 - mean_x;
        num += dx * (y as f64 - mean_y);
        den += dx * dx;
    }
    Ok(SlopeEstimate {
        endpoint,
        least_squares: num / den,
        window,
    })
}
