//! The anyon exclusion measure
//! ξ_A(α, n) = min_{p in {0..n-2}} min_{q in Z} |(2p+1)α - 2q|
//! and its large-N limit, with exact integer arithmetic for rational α.

use crate::error::{CoreError, Result};
use num::integer::gcd;
use serde::Serialize;

/// A reduced fraction μ/ν representing the statistics parameter mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReducedFraction {
    numerator: u64,
    denominator: u64,
}

impl ReducedFraction {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(CoreError::Domain("denominator must be >= 1".into()));
        }
        if gcd(numerator, denominator) != 1 {
            return Err(CoreError::Domain(format!(
                "{numerator}/{denominator} is not reduced"
            )));
        }
        Ok(Self { numerator, denominator })
    }

    /// Reduce on construction.
    pub fn reduced(numerator: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(CoreError::Domain("denominator must be >= 1".into()));
        }
        let g = gcd(numerator, denominator).max(1);
        Self::new(numerator / g, denominator / g)
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

/// Result of the exact ξ_A minimization, with the minimizing pair (p, q).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct XiAResult {
    pub value: f64,
    pub argmin_p: u64,
    pub argmin_q: i64,
}

/// ξ_A(α, n) by direct O(n) minimization: for each p the optimal q is the
/// nearest-even rounding of (2p+1)α.
pub fn xi_a(alpha: f64, n: u64) -> Result<XiAResult> {
    if n < 2 {
        return Err(CoreError::Domain(format!("xi_A requires n >= 2, got {n}")));
    }
    if !alpha.is_finite() {
        return Err(CoreError::Domain("alpha must be finite".into()));
    }
    let mut best = XiAResult { value: f64::INFINITY, argmin_p: 0, argmin_q: 0 };
    for p in 0..=n - 2 {
        let y = (2 * p + 1) as f64 * alpha;
        let q = (y / 2.0).round() as i64;
        let d = (y - 2.0 * q as f64).abs();
        if d < best.value {
            best = XiAResult { value: d, argmin_p: p, argmin_q: q };
        }
        if best.value == 0.0 {
            break;
        }
    }
    Ok(best)
}

/// ξ_A(μ/ν, n) in exact integer arithmetic: distance of (2p+1)μ from the
/// nearest multiple of 2ν, minimized over p and divided by ν. Exact zero
/// detection comes for free.
pub fn xi_a_rational(frac: ReducedFraction, n: u64) -> Result<XiAResult> {
    if n < 2 {
        return Err(CoreError::Domain(format!("xi_A requires n >= 2, got {n}")));
    }
    let mu = frac.numerator() as u128;
    let two_nu = 2 * frac.denominator() as u128;
    let mut best_dist = u128::MAX;
    let mut best = XiAResult { value: f64::INFINITY, argmin_p: 0, argmin_q: 0 };
    for p in 0..=n - 2 {
        let y = (2 * p as u128 + 1) * mu;
        let r = y % two_nu;
        let (dist, q) = if r <= two_nu - r {
            (r, (y - r) / two_nu)
        } else {
            (two_nu - r, (y - r) / two_nu + 1)
        };
        if dist < best_dist {
            best_dist = dist;
            best = XiAResult {
                value: dist as f64 / frac.denominator() as f64,
                argmin_p: p,
                argmin_q: q as i64,
            };
        }
        if best_dist == 0 {
            break;
        }
    }
    Ok(best)
}

/// The large-N limit of ξ_A for rational α, with the stabilization index.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct XiALimit {
    /// 1/ν for odd numerator, 0 for even numerator.
    pub value: f64,
    /// Smallest n at which xi_a_rational attains the limit.
    pub stabilization_n: u64,
}

/// lim_{N->inf} ξ_A(μ/ν, N): 1/ν when μ is odd, 0 when μ is even.
///
/// Also reports the smallest n at which the finite-n value reaches the
/// limit; for reduced fractions this happens no later than n = 2ν + 2.
pub fn xi_a_limit(frac: ReducedFraction) -> Result<XiALimit> {
    let nu = frac.denominator();
    let odd = frac.numerator() % 2 == 1;
    let limit_dist: u64 = if odd { 1 } else { 0 };
    let limit_value = limit_dist as f64 / nu as f64;
    // the integer distance is monotone nonincreasing in n and bounded below
    // by the limit, so the first p attaining it fixes the stabilization
    // index n = p + 2
    let mu = frac.numerator() as u128;
    let two_nu = 2 * nu as u128;
    let p_cap = (4 * nu * nu).max(4);
    for p in 0..=p_cap {
        let r = ((2 * p as u128 + 1) * mu) % two_nu;
        let dist = r.min(two_nu - r) as u64;
        if dist == limit_dist {
            return Ok(XiALimit { value: limit_value, stabilization_n: p + 2 });
        }
    }
    Err(CoreError::Validation(format!(
        "xi_A({}/{nu}, n) did not stabilize by n = {}",
        frac.numerator(),
        p_cap + 2
    )))
}
