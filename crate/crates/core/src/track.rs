//! Hardware-double predictor–corrector path tracker shared by the univariate
//! solver and the bivariate continuations.
//!
//! Predictor: classical 4th-order Runge–Kutta on the Davidenko equation
//! `J(z,t)·dz/dt = −∂H/∂t`. Corrector: Newton at fixed `t`. A rejected step
//! halves the step size; three accepted steps in a row double it.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) type C64 = Complex64;

/// Tunables of the path tracker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Relative size of the last Newton correction that counts as converged.
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    /// Angle θ of the start-system multiplier `e^{iθ}`.
    pub gamma_angle: f64,
    pub execution: crate::par::Execution,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            initial_step: 0.01,
            min_step: 1e-12,
            max_step: 0.05,
            corrector_tol: 1e-11,
            max_corrector_iters: 3,
            gamma_angle: 1.234_567,
            execution: crate::par::Execution::Parallel,
        }
    }
}

impl TrackerConfig {
    pub fn with_gamma_angle(mut self, theta: f64) -> Self {
        self.gamma_angle = theta;
        self
    }

    pub fn gamma(&self) -> C64 {
        C64::from_polar(1.0, self.gamma_angle)
    }

    /// Stricter settings used when re-running suspicious paths.
    pub fn tightened(&self) -> Self {
        TrackerConfig {
            initial_step: self.initial_step / 4.0,
            max_step: self.max_step / 4.0,
            corrector_tol: self.corrector_tol / 16.0,
            min_step: self.min_step / 4.0,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.min_step > 0.0
            && self.min_step <= self.initial_step
            && self.initial_step < 1.0
            && self.max_corrector_iters >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::PathFailure(format!("invalid tracker configuration {self:?}")))
        }
    }
}

/// A square homotopy `H: ℂ^N × [0,1] → ℂ^N`.
pub(crate) trait Homotopy<const N: usize>: Sync {
    fn residual(&self, z: &[C64; N], t: f64) -> [C64; N];
    fn jacobian(&self, z: &[C64; N], t: f64) -> [[C64; N]; N];
    fn dt(&self, z: &[C64; N], t: f64) -> [C64; N];
}

fn norm<const N: usize>(v: &[C64; N]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Solves `a·x = b` by Gaussian elimination with partial pivoting.
fn solve<const N: usize>(mut a: [[C64; N]; N], mut b: [C64; N]) -> Option<[C64; N]> {
    for col in 0..N {
        let p = (col..N).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[p][col].norm() == 0.0 || !a[p][col].norm().is_finite() {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..N {
            let f = a[r][col] / a[col][col];
            for c in col..N {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = [C64::new(0.0, 0.0); N];
    for r in (0..N).rev() {
        let mut s = b[r];
        for c in r + 1..N {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    x.iter().all(|c| c.is_finite()).then_some(x)
}

fn tangent<H: Homotopy<N>, const N: usize>(h: &H, z: &[C64; N], t: f64) -> Option<[C64; N]> {
    let rhs = h.dt(z, t).map(|c| -c);
    solve(h.jacobian(z, t), rhs)
}

fn axpy<const N: usize>(z: &[C64; N], k: &[C64; N], s: f64) -> [C64; N] {
    let mut out = *z;
    for i in 0..N {
        out[i] += k[i] * s;
    }
    out
}

fn rk4<H: Homotopy<N>, const N: usize>(h: &H, z: &[C64; N], t: f64, dt: f64) -> Option<[C64; N]> {
    let k1 = tangent(h, z, t)?;
    let k2 = tangent(h, &axpy(z, &k1, dt / 2.0), t + dt / 2.0)?;
    let k3 = tangent(h, &axpy(z, &k2, dt / 2.0), t + dt / 2.0)?;
    let k4 = tangent(h, &axpy(z, &k3, dt), t + dt)?;
    let mut out = *z;
    for i in 0..N {
        out[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
    }
    Some(out)
}

/// Newton at fixed `t`. Succeeds when corrections contract and the last one
/// is below `tol` relative to `|z|`.
fn correct<H: Homotopy<N>, const N: usize>(
    h: &H,
    mut z: [C64; N],
    t: f64,
    tol: f64,
    iters: usize,
) -> Option<[C64; N]> {
    let mut last = f64::INFINITY;
    for _ in 0..iters {
        let r = h.residual(&z, t).map(|c| -c);
        let dz = solve(h.jacobian(&z, t), r)?;
        let step = norm(&dz);
        if step > 0.5 * last {
            return None;
        }
        for i in 0..N {
            z[i] += dz[i];
        }
        if step <= tol * (1.0 + norm(&z)) {
            return Some(z);
        }
        last = step;
    }
    None
}

/// Result of tracking one path to `t = 1`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Endpoint<const N: usize> {
    pub z: [C64; N],
    /// Size of the last Newton correction at `t = 1`.
    pub last_step: f64,
}

pub(crate) fn track<H: Homotopy<N>, const N: usize>(
    h: &H,
    start: [C64; N],
    cfg: &TrackerConfig,
) -> Result<Endpoint<N>> {
    let mut t = 0.0f64;
    let mut z = start;
    let mut dt = cfg.initial_step;
    let mut streak = 0;
    while t < 1.0 {
        dt = dt.min(1.0 - t).min(cfg.max_step);
        let t_next = if 1.0 - (t + dt) < 1e-14 { 1.0 } else { t + dt };
        let step = rk4(h, &z, t, t_next - t).and_then(|pred| {
            correct(h, pred, t_next, cfg.corrector_tol, cfg.max_corrector_iters)
        });
        match step {
            Some(next) if next.iter().all(|c| c.is_finite()) => {
                z = next;
                t = t_next;
                streak += 1;
                if streak >= 3 {
                    dt *= 2.0;
                    streak = 0;
                }
            }
            _ => {
                dt /= 2.0;
                streak = 0;
                if dt < cfg.min_step {
                    return Err(Error::PathFailure(format!(
                        "step size underflow at t = {t:.6}"
                    )));
                }
            }
        }
    }
    // polish at the target system
    let mut last_step = f64::INFINITY;
    for _ in 0..8 {
        let r = h.residual(&z, 1.0).map(|c| -c);
        let Some(dz) = solve(h.jacobian(&z, 1.0), r) else {
            break;
        };
        let s = norm(&dz);
        if s >= last_step {
            break;
        }
        for i in 0..N {
            z[i] += dz[i];
        }
        last_step = s;
        if s <= f64::EPSILON * (1.0 + norm(&z)) {
            break;
        }
    }
    Ok(Endpoint { z, last_step })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `H(z,t) = z^2 − (1 + 3t)`, whose path from 1 ends at 2.
    struct Sqrt;

    impl Homotopy<1> for Sqrt {
        fn residual(&self, z: &[C64; 1], t: f64) -> [C64; 1] {
            [z[0] * z[0] - (1.0 + 3.0 * t)]
        }
        fn jacobian(&self, z: &[C64; 1], _t: f64) -> [[C64; 1]; 1] {
            [[z[0] * 2.0]]
        }
        fn dt(&self, _z: &[C64; 1], _t: f64) -> [C64; 1] {
            [C64::new(-3.0, 0.0)]
        }
    }

    #[test]
    fn tracks_square_root_path() {
        let end = track(&Sqrt, [C64::new(1.0, 0.0)], &TrackerConfig::default()).unwrap();
        assert!((end.z[0] - 2.0).norm() < 1e-13);
    }

    #[test]
    fn two_by_two_solve() {
        let a = [[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], [C64::new(2.0, 0.0), C64::new(1.0, 1.0)]];
        let b = [C64::new(1.0, 0.0), C64::new(3.0, 1.0)];
        let x = solve(a, b).unwrap();
        assert!((x[1] - 1.0).norm() < 1e-15);
        assert!((x[0] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = TrackerConfig { min_step: 0.5, initial_step: 0.1, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
