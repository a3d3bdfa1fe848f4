//! Finite-difference eigenvalue oracles: the relative 1D problems behind the
//! exclusion constants, and the few-particle interval checks.
//!
//! The 1D problems are discretized variationally (edge stiffness plus
//! trapezoid or weighted cell masses) and symmetrized, so the smallest
//! eigenvalue comes from a symmetric tridiagonal matrix solved by Sturm
//! bisection. The few-particle operators are Kronecker sums of the 1D
//! matrix plus a diagonal interaction, solved by Lanczos iteration.

use crate::constants::{xi_h, xi_s, DEFAULT_TOL};
use crate::error::{CoreError, Result};
use serde::Serialize;

/// Uniform grid of npoints nodes on a closed interval.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Grid1D {
    pub npoints: usize,
    pub interval: (f64, f64),
}

impl Grid1D {
    pub fn new(npoints: usize, interval: (f64, f64)) -> Result<Self> {
        if npoints < 16 {
            return Err(CoreError::Validation(format!(
                "grid needs at least 16 points, got {npoints}"
            )));
        }
        if !(interval.0 < interval.1 && interval.0.is_finite() && interval.1.is_finite()) {
            return Err(CoreError::Validation(format!(
                "interval must satisfy a < b, got ({}, {})",
                interval.0, interval.1
            )));
        }
        Ok(Self { npoints, interval })
    }

    pub fn spacing(&self) -> f64 {
        (self.interval.1 - self.interval.0) / (self.npoints - 1) as f64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigResult {
    pub eigenvalue: f64,
    pub eigvec_norm_check: f64,
    pub grid: Grid1D,
}

/// Symmetric tridiagonal matrix; off has length diag.len() - 1.
struct Tridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiag {
    /// Number of eigenvalues strictly below x, by the Sturm LDL recurrence.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            if d == 0.0 {
                d = 1e-300;
            }
            d = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / d;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn smallest_eigenvalue(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let n = self.diag.len();
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector by inverse iteration with a slightly shifted solve.
    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let scale = self
            .diag
            .iter()
            .map(|d| d.abs())
            .fold(0.0_f64, f64::max)
            .max(1.0);
        let shift = lambda - 1e-10 * scale;
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..3 {
            v = self.solve_shifted(shift, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in v.iter_mut() {
                *x /= norm;
            }
        }
        v
    }

    /// Solve (T - shift) x = b by Gaussian elimination with partial
    /// pivoting (tridiagonal plus one fill superdiagonal).
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut a = vec![0.0; n]; // subdiagonal entry into row i (from i-1)
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - shift).collect();
        let mut e = vec![0.0; n]; // first superdiagonal
        let mut f = vec![0.0; n]; // second superdiagonal (pivot fill)
        let mut rhs = b.to_vec();
        for i in 0..n - 1 {
            a[i + 1] = self.off[i];
            e[i] = self.off[i];
        }
        for i in 0..n - 1 {
            if a[i + 1].abs() > d[i].abs() {
                d.swap(i, i + 1);
                // row i+1's superdiagonal moves into the swapped row
                let tmp = e[i];
                e[i] = e[i + 1];
                e[i + 1] = tmp;
                f[i] = if i + 2 < n { a[i + 2] } else { 0.0 };
                // after the swap the subdiagonal entry is the old d[i]
                rhs.swap(i, i + 1);
            }
            let mut piv = d[i];
            if piv == 0.0 {
                piv = 1e-300;
            }
            let m = a[i + 1] / piv;
            d[i + 1] -= m * e[i];
            if i + 2 < n {
                // note f[i] may be zero if no swap happened
                let fill = f[i];
                e[i + 1] -= m * fill;
            }
            rhs[i + 1] -= m * rhs[i];
            a[i + 1] = 0.0;
        }
        // back substitution
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= e[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= f[i] * x[i + 2];
            }
            let mut piv = d[i];
            if piv == 0.0 {
                piv = 1e-300;
            }
            x[i] = s / piv;
        }
        x
    }
}

/// Free-Laplacian pieces on [0, l]: edge stiffness 1/h and trapezoid cell
/// masses. Used by both the S-problem and the few-particle operators.
fn neumann_parts(npoints: usize, l: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let h = l / (npoints - 1) as f64;
    let mut k_diag = vec![0.0; npoints];
    let mut mass = vec![h; npoints];
    mass[0] = h / 2.0;
    mass[npoints - 1] = h / 2.0;
    for i in 0..npoints {
        let edges = if i == 0 || i == npoints - 1 { 1.0 } else { 2.0 };
        k_diag[i] = edges / h;
    }
    (k_diag, mass, h)
}

fn symmetrize(k_diag: &[f64], k_off: &[f64], mass: &[f64]) -> Tridiag {
    let n = k_diag.len();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    for i in 0..n {
        diag[i] = k_diag[i] / mass[i];
    }
    for i in 0..n - 1 {
        off[i] = k_off[i] / (mass[i] * mass[i + 1]).sqrt();
    }
    Tridiag { diag, off }
}

fn eig_from_form(k_diag: Vec<f64>, k_off: Vec<f64>, mass: Vec<f64>, grid: Grid1D) -> EigResult {
    let t = symmetrize(&k_diag, &k_off, &mass);
    let lambda = t.smallest_eigenvalue();
    let v = t.eigenvector(lambda);
    // v is 2-normalized in the mass-weighted variables, so the quadrature
    // norm of the physical eigenfunction is the same sum
    let norm: f64 = v.iter().map(|x| x * x).sum();
    EigResult {
        eigenvalue: lambda,
        eigvec_norm_check: norm.sqrt(),
        grid,
    }
}

/// Lowest eigenvalue of -d²/dr² on (0, l) with the Robin condition
/// ψ'(0) = η ψ(0) and a Neumann wall at r = l. Pass eta = +∞ for the
/// Dirichlet (fermion) limit. Converges to xi_S(ηl)²/l².
pub fn solve_relative_s(eta: f64, l: f64, grid: &Grid1D) -> Result<EigResult> {
    if eta.is_nan() || eta < 0.0 {
        return Err(CoreError::Domain(format!("eta must be >= 0, got {eta}")));
    }
    check_grid(grid, l)?;
    let m = grid.npoints;
    let (mut k_diag, mut mass, h) = neumann_parts(m, l);
    let mut k_off = vec![-1.0 / h; m - 1];
    if eta.is_infinite() {
        // Dirichlet at 0: drop the first node
        k_diag.remove(0);
        k_off.remove(0);
        mass.remove(0);
        mass[0] = h; // interior node now
        return Ok(eig_from_form(k_diag, k_off, mass, *grid));
    }
    k_diag[0] += eta;
    Ok(eig_from_form(k_diag, k_off, mass, *grid))
}

/// Lowest eigenvalue of -d²/dr² + α(α-1)/r² on (0, l] with ψ ~ r^α at the
/// origin and a Neumann wall at l. The substitution ψ = r^α u removes the
/// singularity: the problem becomes -(r^{2α} u')' = λ r^{2α} u with
/// u'(l) = -(α/l) u(l), discretized with edge weights r^{2α} at midpoints
/// and exact cell masses ∫ r^{2α} dr. Converges to xi_H(α)²/l².
pub fn solve_relative_h(alpha: f64, l: f64, grid: &Grid1D) -> Result<EigResult> {
    if !(alpha >= 1.0) {
        return Err(CoreError::Domain(format!("alpha must be >= 1, got {alpha}")));
    }
    check_grid(grid, l)?;
    let m = grid.npoints;
    let h = grid.spacing();
    let p = 2.0 * alpha;
    let cell_mass = |lo: f64, hi: f64| (hi.powf(p + 1.0) - lo.powf(p + 1.0)) / (p + 1.0);
    let mut k_diag = vec![0.0; m];
    let mut k_off = vec![0.0; m - 1];
    let mut mass = vec![0.0; m];
    for i in 0..m - 1 {
        let w = ((i as f64 + 0.5) * h).powf(p);
        k_off[i] = -w / h;
        k_diag[i] += w / h;
        k_diag[i + 1] += w / h;
    }
    // boundary term from u'(l) = -(α/l) u(l)
    k_diag[m - 1] += alpha * l.powf(p - 1.0);
    for i in 0..m {
        let lo = (i as f64 - 0.5).max(0.0) * h;
        let hi = ((i as f64 + 0.5) * h).min(l);
        mass[i] = cell_mass(lo, hi);
    }
    Ok(eig_from_form(k_diag, k_off, mass, *grid))
}

fn check_grid(grid: &Grid1D, l: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(CoreError::Domain(format!("interval length must be > 0, got {l}")));
    }
    if grid.interval.0 != 0.0 || (grid.interval.1 - l).abs() > 1e-12 * l {
        return Err(CoreError::Validation(format!(
            "grid must cover [0, {l}], got ({}, {})",
            grid.interval.0, grid.interval.1
        )));
    }
    Ok(())
}

/// Richardson extrapolation over successive grid doublings with a fitted
/// convergence order. `npoints` must double at each entry.
pub fn richardson<F>(f: F, npoints: &[usize; 3]) -> Result<f64>
where
    F: Fn(usize) -> Result<f64>,
{
    if npoints[1] != 2 * npoints[0] || npoints[2] != 2 * npoints[1] {
        return Err(CoreError::Validation(
            "extrapolation expects grid sizes doubling twice".into(),
        ));
    }
    let v1 = f(npoints[0])?;
    let v2 = f(npoints[1])?;
    let v3 = f(npoints[2])?;
    let d1 = v2 - v1;
    let d2 = v3 - v2;
    if d2 == 0.0 || d1 == 0.0 {
        return Ok(v3);
    }
    let p = (d1 / d2).abs().log2().clamp(0.5, 4.0);
    Ok(v3 + d2 / (2.0_f64.powf(p) - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExclusionModel {
    S,
    H,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExclusionReport {
    pub model: ExclusionModel,
    pub param: f64,
    pub n: u8,
    pub length: f64,
    pub e0: f64,
    pub bound: f64,
    pub allowance_rel: f64,
    pub pass: bool,
}

/// Few-particle interval check: lowest eigenvalue of
/// -(1/2) Σ ∂_i² + Σ_{i<j} V(x_i - x_j) on [0, l]^n with Neumann walls,
/// compared against (n-1) ξ²/l² with a 5% discretization allowance.
///
/// The S-model delta interaction becomes a diagonal term 2η/m_i wherever a
/// coordinate pair coincides. The H-model inverse-square interaction keeps
/// its off-diagonal values and the coincidence nodes are excluded
/// (Dirichlet), matching the r^α vanishing; at α = 1 this fermionizes the
/// discrete problem exactly.
pub fn interval_exclusion_check(
    model: ExclusionModel,
    param: f64,
    n: u8,
    l: f64,
    npoints: usize,
) -> Result<ExclusionReport> {
    if !(n == 2 || n == 3) {
        return Err(CoreError::Domain(format!("few-particle check supports n = 2 or 3, got {n}")));
    }
    if npoints < 16 {
        return Err(CoreError::Validation(format!(
            "need at least 16 points per axis, got {npoints}"
        )));
    }
    let xi = match model {
        ExclusionModel::S => {
            if !(param >= 0.0) || param.is_infinite() {
                return Err(CoreError::Domain(format!(
                    "S-model eta must be finite and >= 0, got {param}"
                )));
            }
            xi_s(param * l, DEFAULT_TOL)?.value
        }
        ExclusionModel::H => {
            if !(param >= 1.0) {
                return Err(CoreError::Domain(format!(
                    "H-model alpha must be >= 1, got {param}"
                )));
            }
            if ((npoints - 1) as f64) < 4.0 * param {
                return Err(CoreError::Refinement(format!(
                    "{npoints} points per axis cannot resolve the r^{param} vanishing; \
                     use at least {} points",
                    (4.0 * param).ceil() as usize + 1
                )));
            }
            xi_h(param, DEFAULT_TOL)?.value
        }
    };
    let (k_diag, mass, h) = neumann_parts(npoints, l);
    let k_off = vec![-1.0 / h; npoints - 1];
    let one_d = symmetrize(&k_diag, &k_off, &mass);

    let m = npoints;
    let dim = m.pow(n as u32);
    let mut potential = vec![0.0_f64; dim];
    let mut allowed = vec![true; dim];
    let idx_of = |flat: usize| -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut rest = flat;
        for item in out.iter_mut().take(n as usize) {
            *item = rest % m;
            rest /= m;
        }
        out
    };
    for flat in 0..dim {
        let idx = idx_of(flat);
        for a in 0..n as usize {
            for b in a + 1..n as usize {
                let (ia, ib) = (idx[a], idx[b]);
                match model {
                    ExclusionModel::S => {
                        if ia == ib {
                            potential[flat] += 2.0 * param / mass[ia];
                        }
                    }
                    ExclusionModel::H => {
                        if ia == ib {
                            allowed[flat] = false;
                        } else {
                            let r = (ia as f64 - ib as f64) * h;
                            potential[flat] += param * (param - 1.0) / (r * r);
                        }
                    }
                }
            }
        }
    }

    let apply = |v: &[f64], out: &mut [f64]| {
        for (o, (&p, &x)) in out.iter_mut().zip(potential.iter().zip(v.iter())) {
            *o = p * x;
        }
        // Kronecker sum of the symmetrized 1D operator, factor 1/2 kinetic
        for axis in 0..n as usize {
            let stride = m.pow(axis as u32);
            let block = stride * m;
            let nblocks = dim / block;
            for bidx in 0..nblocks {
                let base = bidx * block;
                for off in 0..stride {
                    let start = base + off;
                    for k in 0..m {
                        let i = start + k * stride;
                        let mut acc = one_d.diag[k] * v[i];
                        if k > 0 {
                            acc += one_d.off[k - 1] * v[i - stride];
                        }
                        if k + 1 < m {
                            acc += one_d.off[k] * v[i + stride];
                        }
                        out[i] += 0.5 * acc;
                    }
                }
            }
        }
        for (o, &ok) in out.iter_mut().zip(allowed.iter()) {
            if !ok {
                *o = 0.0;
            }
        }
    };

    let mut start = vec![0.0; dim];
    for (s, &ok) in start.iter_mut().zip(allowed.iter()) {
        if ok {
            *s = 1.0;
        }
    }
    let e0 = lanczos_smallest(apply, start, 400, 1e-11);
    let bound = (n as f64 - 1.0) * xi * xi / (l * l);
    let allowance = 0.05;
    let pass = e0 >= bound * (1.0 - allowance) - 1e-8;
    Ok(ExclusionReport {
        model,
        param,
        n,
        length: l,
        e0,
        bound,
        allowance_rel: allowance,
        pass,
    })
}

/// Smallest eigenvalue of a symmetric operator by plain Lanczos iteration
/// (no reorthogonalization; the smallest Ritz value is monotone and ghost
/// copies cannot undershoot it). Deterministic for a fixed start vector.
fn lanczos_smallest<F>(apply: F, start: Vec<f64>, max_iter: usize, tol: f64) -> f64
where
    F: Fn(&[f64], &mut [f64]),
{
    let dim = start.len();
    let mut v = start;
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    let mut v_prev = vec![0.0; dim];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    let mut best = f64::INFINITY;
    let mut stable = 0;
    for it in 0..max_iter.min(dim) {
        apply(&v, &mut w);
        let alpha: f64 = v.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
        alphas.push(alpha);
        let beta_prev = betas.last().copied().unwrap_or(0.0);
        for i in 0..dim {
            w[i] -= alpha * v[i] + beta_prev * v_prev[i];
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if it % 5 == 4 || beta < 1e-14 {
            let t = Tridiag {
                diag: alphas.clone(),
                off: betas.clone(),
            };
            let ritz = t.smallest_eigenvalue();
            if (best - ritz).abs() <= tol * best.abs().max(1.0) {
                stable += 1;
                if stable >= 3 {
                    return ritz.min(best);
                }
            } else {
                stable = 0;
            }
            best = best.min(ritz);
        }
        if beta < 1e-14 {
            break;
        }
        betas.push(beta);
        std::mem::swap(&mut v_prev, &mut v);
        for i in 0..dim {
            v[i] = w[i] / beta;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid(np: usize, l: f64) -> Grid1D {
        Grid1D::new(np, (0.0, l)).unwrap()
    }

    #[test]
    fn s_problem_limits() {
        let g = grid(400, 1.0);
        let free = solve_relative_s(0.0, 1.0, &g).unwrap();
        assert_abs_diff_eq!(free.eigenvalue, 0.0, epsilon = 1e-10);
        let dirichlet = solve_relative_s(f64::INFINITY, 1.0, &g).unwrap();
        assert_relative_eq!(dirichlet.eigenvalue, PI * PI / 4.0, max_relative = 1e-4);
        assert_abs_diff_eq!(free.eigvec_norm_check, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn s_problem_matches_root() {
        let want = {
            let v = xi_s(1.0, DEFAULT_TOL).unwrap().value;
            v * v
        };
        let ext = richardson(
            |np| Ok(solve_relative_s(1.0, 1.0, &grid(np, 1.0)).unwrap().eigenvalue),
            &[200, 400, 800],
        )
        .unwrap();
        assert_relative_eq!(ext, want, max_relative = 1e-5);
    }

    #[test]
    fn h_problem_matches_root() {
        for &(alpha, l) in &[(1.0, 1.0), (2.0, 1.0), (1.0, 2.0), (3.5, 0.7)] {
            let xi = xi_h(alpha, DEFAULT_TOL).unwrap().value;
            let want = xi * xi / (l * l);
            let ext = richardson(
                |np| Ok(solve_relative_h(alpha, l, &grid(np, l)).unwrap().eigenvalue),
                &[200, 400, 800],
            )
            .unwrap();
            assert_relative_eq!(ext, want, max_relative = 1e-4);
        }
    }

    #[test]
    fn discrete_scaling_is_exact() {
        // scaling the interval with a fixed point count scales the discrete
        // eigenvalue by exactly 1/l^2
        let e1 = solve_relative_h(2.0, 1.0, &grid(200, 1.0)).unwrap().eigenvalue;
        let e2 = solve_relative_h(2.0, 2.0, &grid(200, 2.0)).unwrap().eigenvalue;
        assert_relative_eq!(e1, 4.0 * e2, max_relative = 1e-12);
        let e1 = solve_relative_s(3.0, 1.0, &grid(200, 1.0)).unwrap().eigenvalue;
        let e2 = solve_relative_s(1.5, 2.0, &grid(200, 2.0)).unwrap().eigenvalue;
        assert_relative_eq!(e1, 4.0 * e2, max_relative = 1e-12);
    }

    #[test]
    fn grid_doubling_is_cauchy() {
        let vals: Vec<f64> = [100, 200, 400, 800]
            .iter()
            .map(|&np| solve_relative_s(1.0, 1.0, &grid(np, 1.0)).unwrap().eigenvalue)
            .collect();
        let d1 = (vals[1] - vals[0]).abs();
        let d2 = (vals[2] - vals[1]).abs();
        let d3 = (vals[3] - vals[2]).abs();
        assert!(d2 < d1 && d3 < d2);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = grid(100, 1.0);
        assert!(solve_relative_s(-1.0, 1.0, &g).is_err());
        assert!(solve_relative_h(0.5, 1.0, &g).is_err());
        assert!(Grid1D::new(8, (0.0, 1.0)).is_err());
        assert!(interval_exclusion_check(ExclusionModel::H, 1.0, 4, 1.0, 30).is_err());
        // resolution guard for steep r^alpha vanishing
        assert!(matches!(
            interval_exclusion_check(ExclusionModel::H, 10.0, 2, 1.0, 20),
            Err(CoreError::Refinement(_))
        ));
    }

    #[test]
    fn two_free_bosons() {
        let r = interval_exclusion_check(ExclusionModel::S, 0.0, 2, 1.0, 40).unwrap();
        assert_abs_diff_eq!(r.e0, 0.0, epsilon = 1e-8);
        assert_eq!(r.bound, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn two_fermionized_particles() {
        // alpha = 1 fermionizes exactly: E0 equals the sum of the two lowest
        // distinct discrete Neumann levels, close to 0 + pi^2/2
        let r = interval_exclusion_check(ExclusionModel::H, 1.0, 2, 1.0, 60).unwrap();
        assert_relative_eq!(r.e0, PI * PI / 2.0, max_relative = 2e-3);
        assert_relative_eq!(r.bound, PI * PI / 4.0, max_relative = 1e-10);
        assert!(r.pass);
    }

    #[test]
    fn three_fermionized_particles() {
        let r = interval_exclusion_check(ExclusionModel::H, 1.0, 3, 1.0, 36).unwrap();
        assert_relative_eq!(r.e0, PI * PI / 2.0 + 2.0 * PI * PI, max_relative = 1e-2);
        assert_relative_eq!(r.bound, PI * PI / 2.0, max_relative = 1e-10);
        assert!(r.pass);
    }

    #[test]
    fn lemma_holds_on_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let eta = rng.gen_range(0.1..5.0);
            let l = rng.gen_range(0.5..2.0);
            let r = interval_exclusion_check(ExclusionModel::S, eta, 2, l, 48).unwrap();
            assert!(r.pass, "S eta={eta} l={l}: e0={} bound={}", r.e0, r.bound);
            let alpha = rng.gen_range(1.0..4.0);
            let r = interval_exclusion_check(ExclusionModel::H, alpha, 2, l, 48).unwrap();
            assert!(r.pass, "H alpha={alpha} l={l}: e0={} bound={}", r.e0, r.bound);
        }
    }
}
