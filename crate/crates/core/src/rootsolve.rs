//! All complex roots of a square-free integer polynomial to a requested
//! accuracy: total-degree homotopy from `z^d − 1` in hardware doubles, then
//! multi-precision Newton refinement.

use std::f64::consts::PI;

use rug::{Complex, Float};

use crate::algebra::mp::{self, BOUND_PREC};
use crate::algebra::UniPolyZ;
use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::track::{track, Homotopy, C64};
pub use crate::track::TrackerConfig;

/// Approximation of one root with an upper bound on its distance to the
/// exact root it approximates.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxRoot {
    pub value: Complex,
    pub err_bound: Float,
    /// Index of the start root the path began at.
    pub path_index: usize,
}

impl ApproxRoot {
    pub fn exact(value: Complex, path_index: usize) -> Self {
        ApproxRoot { value, err_bound: Float::new(BOUND_PREC), path_index }
    }

    pub fn from_c64(z: C64, err: f64, path_index: usize) -> Self {
        ApproxRoot {
            value: mp::from_f64(64, z.re, z.im),
            err_bound: mp::bound(err),
            path_index,
        }
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(self.value.real().to_f64(), self.value.imag().to_f64())
    }

    /// Whether `err_bound ≤ 2^-bits`.
    pub fn accurate_to(&self, bits: u32) -> bool {
        self.err_bound <= mp::pow2(-(bits as i64))
    }
}

/// The `d` roots of unity `e^{2kπi/d}` at `prec` bits.
pub fn start_roots(d: usize, prec: u32) -> Vec<Complex> {
    assert!(d >= 1, "start system needs degree at least one");
    (0..d)
        .map(|k| {
            let mut angle = Float::with_val(prec, rug::float::Constant::Pi);
            angle *= 2 * k as u64;
            angle /= d as u64;
            let (s, c) = angle.sin_cos(Float::new(prec));
            Complex::with_val(prec, (c, s))
        })
        .collect()
}

/// `H(z,t) = t·p(z) + γ(1−t)(z^d − 1)` with `p` scaled to unit max-norm.
struct TotalDegree {
    coeffs: Vec<f64>,
    gamma: C64,
}

impl TotalDegree {
    fn new(p: &UniPolyZ, gamma: C64) -> Self {
        TotalDegree { coeffs: scaled_f64(p), gamma }
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn p(&self, z: C64) -> (C64, C64) {
        let mut v = C64::new(0.0, 0.0);
        let mut dv = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dv = dv * z + v;
            v = v * z + c;
        }
        (v, dv)
    }
}

impl Homotopy<1> for TotalDegree {
    fn residual(&self, z: &[C64; 1], t: f64) -> [C64; 1] {
        let (p, _) = self.p(z[0]);
        let zd = z[0].powu(self.degree() as u32);
        [p * t + self.gamma * (1.0 - t) * (zd - 1.0)]
    }
    fn jacobian(&self, z: &[C64; 1], t: f64) -> [[C64; 1]; 1] {
        let (_, dp) = self.p(z[0]);
        let d = self.degree() as u32;
        let dzd = z[0].powu(d - 1) * d as f64;
        [[dp * t + self.gamma * (1.0 - t) * dzd]]
    }
    fn dt(&self, z: &[C64; 1], _t: f64) -> [C64; 1] {
        let (p, _) = self.p(z[0]);
        let zd = z[0].powu(self.degree() as u32);
        [p - self.gamma * (zd - 1.0)]
    }
}

/// Integer coefficients scaled by a power of two so the largest has
/// magnitude in `[1/2, 1)`; safe for coefficients far beyond f64 range.
pub(crate) fn scaled_f64(p: &UniPolyZ) -> Vec<f64> {
    let bits = p.coeffs().iter().map(|c| c.significant_bits()).max().unwrap_or(0);
    p.coeffs()
        .iter()
        .map(|c| {
            let f = Float::with_val(64, c) >> bits;
            f.to_f64()
        })
        .collect()
}

/// Distance below which two endpoints are considered the same root.
pub const COINCIDENCE: f64 = 1.0 / (1u64 << 20) as f64;

fn coincident_pairs(z: &[C64]) -> Vec<usize> {
    let mut bad = Vec::new();
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if (z[i] - z[j]).norm() < COINCIDENCE * (1.0 + z[i].norm()) {
                bad.push(i);
                bad.push(j);
            }
        }
    }
    bad.sort_unstable();
    bad.dedup();
    bad
}

/// Tracks all `d` paths of the total-degree homotopy in doubles.
pub fn track_all(p: &UniPolyZ, cfg: &TrackerConfig) -> Result<Vec<C64>> {
    cfg.validate()?;
    let d = p.deg();
    if d == 0 {
        return Err(Error::ZeroPolynomial);
    }
    let h = TotalDegree::new(p, cfg.gamma());
    let starts: Vec<C64> = (0..d)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64))
        .collect();
    let run = |cfg: &TrackerConfig, idx: &[usize]| -> Vec<Result<C64>> {
        map_indexed(cfg.execution, idx, |_, &k| track(&h, [starts[k]], cfg).map(|e| e.z[0]))
    };
    let all: Vec<usize> = (0..d).collect();
    let mut ends = run(cfg, &all).into_iter().collect::<Result<Vec<_>>>()?;
    let mut strict = *cfg;
    for _ in 0..2 {
        let bad = coincident_pairs(&ends);
        if bad.is_empty() {
            return Ok(ends);
        }
        strict = strict.tightened();
        for (k, r) in bad.iter().zip(run(&strict, &bad)) {
            ends[*k] = r?;
        }
    }
    if coincident_pairs(&ends).is_empty() {
        Ok(ends)
    } else {
        Err(Error::NotSquareFree)
    }
}

/// Every root of the square-free polynomial `p`, each within
/// `2^-target_bits` of an exact root and with `|p(z)| ≤ 2^-target_bits·‖p‖₂`.
/// Output is ordered by `path_index`.
pub fn solve_univariate(p: &UniPolyZ, cfg: &TrackerConfig, target_bits: u32) -> Result<Vec<ApproxRoot>> {
    if p.deg() == 0 {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_squarefree() {
        return Err(Error::NotSquareFree);
    }
    let ends = track_all(p, cfg)?;
    let mut stricter = *cfg;
    let refine_all = |ends: &[C64]| -> Vec<Result<ApproxRoot>> {
        map_indexed(cfg.execution, ends, |k, z| {
            refine_to_residual(p, &ApproxRoot::from_c64(*z, 1e-3, k), target_bits)
        })
    };
    let mut roots = refine_all(&ends);
    if roots.iter().any(|r| r.is_err()) {
        // some endpoint is outside the Newton basin: re-track tighter
        stricter = stricter.tightened();
        let ends = track_all(p, &stricter)?;
        roots = refine_all(&ends);
    }
    let roots = roots.into_iter().collect::<Result<Vec<_>>>()?;
    check_distinct(&roots)?;
    Ok(roots)
}

/// Refines and additionally drives the residual below `2^-target·‖p‖₂`.
fn refine_to_residual(p: &UniPolyZ, z: &ApproxRoot, target_bits: u32) -> Result<ApproxRoot> {
    let norm = mp::norm2(p);
    let mut bits = target_bits;
    let mut root = newton_refine(p, z, bits)?;
    let limit = Float::with_val(BOUND_PREC, &norm * mp::pow2(-(target_bits as i64)));
    for _ in 0..8 {
        let prec = root.value.prec().0;
        let r = mp::abs_up(&mp::eval(p, &root.value, prec));
        if r <= limit {
            return Ok(root);
        }
        bits += 32 + mp::log2_ceil_at_least_one(&(r / &limit));
        root = newton_refine(p, &root, bits)?;
    }
    Err(Error::NotConverging)
}

fn check_distinct(roots: &[ApproxRoot]) -> Result<()> {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let mut diff = roots[i].value.clone();
            diff -= &roots[j].value;
            let gap = mp::abs(&diff);
            let errs = Float::with_val(BOUND_PREC, &roots[i].err_bound + &roots[j].err_bound);
            if gap <= errs {
                return Err(Error::NotSquareFree);
            }
        }
    }
    Ok(())
}

/// Multi-precision Newton refinement with geometric (doubling) precision
/// escalation. The returned `err_bound` is twice the last Newton correction
/// plus the rounding noise floor at the final precision.
pub fn newton_refine(p: &UniPolyZ, z: &ApproxRoot, target_bits: u32) -> Result<ApproxRoot> {
    let d = p.deg();
    if d == 0 {
        return Err(Error::ZeroPolynomial);
    }
    let target = mp::pow2(-(target_bits as i64));
    let mut prec = z.value.prec().0.clamp(64, target_bits.max(64));
    let mut x = Complex::with_val(prec, &z.value);

    // quadratic-convergence basin heuristic |p·p''| < |p'|²
    {
        let (v, d1, d2) = mp::eval2(p, &x, prec.max(128));
        let lhs = mp::abs(&Complex::with_val(BOUND_PREC, &v * &d2));
        let rhs = mp::abs(&d1).square();
        if v.real().is_zero() && v.imag().is_zero() {
            // exact hit
        } else if lhs >= rhs {
            return Err(Error::NotConverging);
        }
    }

    let log2d = (usize::BITS - d.leading_zeros()) as i64;
    let final_prec = target_bits + mp::log2_ceil_at_least_one(&mp::abs_eval(p, &x)) + 64;
    let ceiling = final_prec.saturating_mul(4);
    let mut prev_step: Option<Float> = None;
    let mut slow = 0;
    for _ in 0..400 {
        let (v, dv) = mp::eval_with_derivative(p, &x, prec);
        if dv.real().is_zero() && dv.imag().is_zero() {
            return Err(Error::NotConverging);
        }
        // Horner rounding error scaled by 1/|p'| bounds the attainable accuracy
        let noise = Float::with_val(BOUND_PREC, mp::abs_eval(p, &x) * mp::pow2(2 * log2d - prec as i64))
            / mp::abs(&dv);
        let step = Complex::with_val(prec, &v / &dv);
        let step_mag = mp::abs(&step);
        x -= &step;
        let err = Float::with_val(BOUND_PREC, &step_mag * 2u32) + Float::with_val(BOUND_PREC, &noise * 4u32);
        if err <= target {
            return Ok(ApproxRoot { value: x, err_bound: err, path_index: z.path_index });
        }
        let at_floor = step_mag <= Float::with_val(BOUND_PREC, &noise * 4u32);
        // next correction ≈ step², so once that drops under the current
        // precision's resolution more bits are needed
        let next_bits = -2 * step_mag.get_exp().unwrap_or(i32::MIN / 4) as i64;
        if at_floor || next_bits + 16 > prec as i64 {
            if prec >= ceiling {
                return Err(Error::NotConverging);
            }
            prec = (prec * 2).min(ceiling);
            x = Complex::with_val(prec, &x);
        }
        if !at_floor {
            if let Some(prev) = &prev_step {
                if step_mag > Float::with_val(BOUND_PREC, prev * 0.9f64) {
                    slow += 1;
                    if slow > 8 {
                        return Err(Error::NotConverging);
                    }
                } else {
                    slow = 0;
                }
            }
            prev_step = Some(step_mag);
        }
    }
    Err(Error::NotConverging)
}
