//! Hurwitz zeta function ζ(s, q) = Σ_{n≥0} (n + q)^(−s) for real s > 1, q > 0.
//!
//! Evaluation sums leading terms directly and closes the remainder with the
//! Euler–Maclaurin formula carried through the B₆ Bernoulli term. Terms are
//! summed until the first omitted correction (the B₈ term) falls below
//! `1e-16` of the running value, which keeps the relative error near machine
//! precision for every exponent the fitting code visits.

use crate::error::{Error, Result};

/// Relative size of the first omitted Euler–Maclaurin correction.
const REL_TOL: f64 = 1e-16;

// B_{2j} / (2j)! for j = 1..=4.
const B2_F: f64 = 1.0 / 12.0;
const B4_F: f64 = -1.0 / 720.0;
const B6_F: f64 = 1.0 / 30240.0;
const B8_F: f64 = -1.0 / 1_209_600.0;

/// Hurwitz zeta ζ(alpha, q).
///
/// `alpha ≤ 1` is rejected with [`Error::DivergentSeries`] and `q ≤ 0` with
/// [`Error::Domain`]. With `q = 1` this is the Riemann zeta function.
pub fn hurwitz_zeta(alpha: f64, q: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 1.0 {
        return Err(Error::DivergentSeries(alpha));
    }
    if !q.is_finite() || q <= 0.0 {
        return Err(Error::Domain(format!("hurwitz zeta needs q > 0, got {q}")));
    }
    Ok(zeta_unchecked(alpha, q))
}

/// ζ(s, q) without argument validation. Callers guarantee s > 1 and q > 0.
pub(crate) fn zeta_unchecked(s: f64, q: f64) -> f64 {
    // Rising factorial s(s+1)...(s+6) feeds the B₈ error estimate.
    let rising7 = (0..7).fold(1.0, |acc, k| acc * (s + k as f64));
    let b8_coeff = (B8_F * rising7).abs();

    let mut partial = 0.0;
    let mut a = q;
    loop {
        let t = a.powf(-s);
        let tail = t * a / (s - 1.0);
        let next_corr = b8_coeff * t * a.powi(-7);
        if next_corr <= REL_TOL * (partial + tail) {
            return partial + em_remainder(s, a, t);
        }
        partial += t;
        a += 1.0;
    }
}

/// Σ_{n≥0} (a + n)^(−s) via Euler–Maclaurin through B₆, given t = a^(−s).
fn em_remainder(s: f64, a: f64, t: f64) -> f64 {
    let inv_a = 1.0 / a;
    let inv_a2 = inv_a * inv_a;
    let c1 = B2_F * s;
    let c2 = B4_F * s * (s + 1.0) * (s + 2.0);
    let c3 = B6_F * s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0);
    let corrections = t * inv_a * (c1 + inv_a2 * (c2 + inv_a2 * c3));
    t * a / (s - 1.0) + 0.5 * t + corrections
}

/// ζ(s, x + 1) for every point of an ascending slice of integers.
///
/// Neighbouring points are linked by the recurrence
/// ζ(s, x + 1) = ζ(s, y + 1) + Σ_{j = x+1..=y} j^(−s), walking downward so the
/// accumulation only ever adds positive terms. Wide gaps fall back to a
/// direct evaluation.
pub(crate) fn zeta_shifted_sorted(s: f64, xs: &[f64]) -> Vec<f64> {
    const MAX_GAP: f64 = 48.0;
    let mut out = vec![0.0; xs.len()];
    let Some(last) = xs.len().checked_sub(1) else {
        return out;
    };
    out[last] = zeta_unchecked(s, xs[last] + 1.0);
    for i in (0..last).rev() {
        let (x, y) = (xs[i], xs[i + 1]);
        let gap = y - x;
        out[i] = if gap == 0.0 {
            out[i + 1]
        } else if gap <= MAX_GAP {
            let mut acc = out[i + 1];
            let mut j = y;
            while j > x {
                acc += j.powf(-s);
                j -= 1.0;
            }
            acc
        } else {
            zeta_unchecked(s, x + 1.0)
        };
    }
    out
}
