//! The 1D exclusion constants: ξ_S from the Robin quantization condition
//! ξ tan ξ = ηl, ξ_H from the first stationary point of ξ^{1/2} J_{α-1/2}(ξ),
//! the fermionic ξ_F = π/√2 and the Dyson-Lenard ball root.

use crate::error::{CoreError, Result};
use crate::special::bessel_j;
use serde::Serialize;

/// Default residual tolerance for all root solves.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A solved transcendental root with its certificate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RootResult {
    /// The dimensionless root ξ.
    pub value: f64,
    /// |f(value)| of the (well-scaled) root function at return.
    pub residual: f64,
    /// The sign-changing bracket the solve started from.
    pub bracket: (f64, f64),
    /// Function evaluations spent.
    pub iterations: u32,
}

/// Real Bessel order ν = α - 1/2 for the H-case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder {
    order: f64,
}

impl BesselOrder {
    pub fn new(order: f64) -> Result<Self> {
        if !(order.is_finite() && order >= 0.0) {
            return Err(CoreError::Domain(format!(
                "Bessel order must be finite and >= 0, got {order}"
            )));
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    /// Half-integer orders admit trigonometric closed forms.
    pub fn is_half_integer(&self) -> bool {
        let two = 2.0 * self.order;
        two.fract() == 0.0 && (two as i64) % 2 == 1
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        bessel_j(self.order, x)
    }
}

/// Bracketed bisection refined by safeguarded secant steps. Runs until the
/// residual drops below `tol` or the bracket collapses to f64 resolution.
fn solve_bracketed<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    what: &str,
) -> Result<RootResult> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    let mut iters = 2u32;
    if fa == 0.0 {
        return Ok(RootResult { value: a, residual: 0.0, bracket: (lo, hi), iterations: iters });
    }
    if fb == 0.0 {
        return Ok(RootResult { value: b, residual: 0.0, bracket: (lo, hi), iterations: iters });
    }
    if fa.signum() == fb.signum() {
        return Err(CoreError::Bracket { what: what.to_string(), lo, hi });
    }
    let mut x = 0.5 * (a + b);
    let mut fx = f(x);
    iters += 1;
    let mut prev = (a, fa);
    for _ in 0..200 {
        if fx.abs() <= tol {
            break;
        }
        // shrink the bracket
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if b - a <= f64::EPSILON * b.abs().max(1.0) {
            break;
        }
        // secant proposal from the two most recent points, fall back to
        // bisection when it leaves the bracket or stalls
        let (xp, fxp) = prev;
        prev = (x, fx);
        let denom = fx - fxp;
        let mut next = if denom != 0.0 { x - fx * (x - xp) / denom } else { f64::NAN };
        let width = b - a;
        if !next.is_finite() || next <= a + 1e-3 * width || next >= b - 1e-3 * width {
            next = 0.5 * (a + b);
        }
        x = next;
        fx = f(x);
        iters += 1;
    }
    let _ = fb;
    Ok(RootResult {
        value: x,
        residual: fx.abs(),
        bracket: (lo, hi),
        iterations: iters,
    })
}

fn degenerate_root(value: f64) -> RootResult {
    RootResult {
        value,
        residual: 0.0,
        bracket: (value - 1e-12, value + 1e-12),
        iterations: 0,
    }
}

/// ξ_S(t): the root of ξ tan ξ = t on the continuous branch [0, π/2).
///
/// `t = +inf` is accepted and yields the Dirichlet (fermion) limit π/2.
/// The root function is scaled as (ξ sin ξ - t cos ξ)/(1 + t), so the
/// residual contract is meaningful uniformly in t.
pub fn xi_s(t: f64, tol: f64) -> Result<RootResult> {
    if t.is_nan() || t < 0.0 {
        return Err(CoreError::Domain(format!("xi_S requires t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(degenerate_root(0.0));
    }
    if t.is_infinite() {
        return Ok(degenerate_root(std::f64::consts::FRAC_PI_2));
    }
    let f = |xi: f64| (xi * xi.sin() - t * xi.cos()) / (1.0 + t);
    solve_bracketed(f, 0.0, std::f64::consts::FRAC_PI_2, tol, "xi_S")
}

/// The arctan approximation to ξ_S from the ξ_S figure:
/// arctan sqrt(t + 4t²/π²).
pub fn xi_s_approx(t: f64) -> f64 {
    if t.is_infinite() {
        return std::f64::consts::FRAC_PI_2;
    }
    let pi = std::f64::consts::PI;
    (t + 4.0 * t * t / (pi * pi)).sqrt().atan()
}

/// ξ_H(α): smallest positive zero of d/dξ (ξ^{1/2} J_{α-1/2}(ξ)), α >= 1.
///
/// The derivative is taken analytically through the Bessel recurrence,
/// which turns the condition into α J_ν(ξ) = ξ J_{ν+1}(ξ) with ν = α - 1/2.
pub fn xi_h(alpha: f64, tol: f64) -> Result<RootResult> {
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(CoreError::Domain(format!(
            "xi_H requires alpha >= 1, got {alpha}"
        )));
    }
    let nu = alpha - 0.5;
    let f = |xi: f64| -> f64 {
        let j0 = bessel_j(nu, xi).unwrap_or(f64::NAN);
        let j1 = bessel_j(nu + 1.0, xi).unwrap_or(f64::NAN);
        j0 - (xi / alpha) * j1
    };
    let lo = tol.max(1e-6);
    let hi = alpha + 10.0 * alpha.cbrt() + 10.0;
    // scan for the first sign change; f underflows to 0 far below the
    // turning point for large orders, which counts as "still positive"
    let nsteps = 2000usize;
    let step = (hi - lo) / nsteps as f64;
    let mut last_x = lo;
    let mut last_sign = 0.0f64;
    for i in 0..=nsteps {
        let x = lo + i as f64 * step;
        let fx = f(x);
        let sign = if fx == 0.0 { 0.0 } else { fx.signum() };
        if sign != 0.0 {
            if last_sign != 0.0 && sign != last_sign {
                let mut root = solve_bracketed(&f, last_x, x, tol, "xi_H")?;
                root.iterations += i as u32;
                return Ok(root);
            }
            last_sign = sign;
            last_x = x;
        }
    }
    Err(CoreError::Bracket {
        what: format!("xi_H(alpha={alpha})"),
        lo,
        hi,
    })
}

/// ξ_F = π/√2, the Dyson-Lenard cube constant for spinless fermions.
pub fn xi_f() -> f64 {
    std::f64::consts::PI / std::f64::consts::SQRT_2
}

/// Smallest positive root of (d²/dξ²)(sin ξ / ξ) = 0, i.e. of
/// (2 - ξ²) sin ξ - 2ξ cos ξ after clearing the ξ³ denominator.
pub fn dyson_lenard_ball_root(tol: f64) -> Result<RootResult> {
    let f = |xi: f64| (2.0 - xi * xi) * xi.sin() - 2.0 * xi * xi.cos();
    solve_bracketed(f, 1e-3, std::f64::consts::PI, tol, "Dyson-Lenard ball root")
}
