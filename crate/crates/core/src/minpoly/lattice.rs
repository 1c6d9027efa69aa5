//! Integer lattices and exact LLL reduction (δ = 3/4).
//!
//! The reduction is the all-integer variant of LLL: instead of rational
//! Gram–Schmidt coefficients it keeps `d_i = Π_{j≤i} ‖b*_j‖²` and
//! `λ_{i,j} = d_j · μ_{i,j}`, both integers. Every comparison is therefore
//! exact.

use std::cmp::Ordering;

use rug::{Complex, Float, Integer};

use crate::algebra::mp;
use crate::error::{Error, Result};

/// Rows of an integer lattice basis, all the same length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    pub rows: Vec<Vec<Integer>>,
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vec<Integer>>) -> Self {
        debug_assert!(rows.windows(2).all(|w| w[0].len() == w[1].len()));
        LatticeBasis { rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        LatticeBasis::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| Integer::from(v)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn norm_sq(row: &[Integer]) -> Integer {
        dot(row, row)
    }
}

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).fold(Integer::new(), |acc, (x, y)| acc + Integer::from(x * y))
}

/// Lattice of the integer-relation problem for `1, ᾱ, …, ᾱ^n`:
/// `(n+1) × (n+3)` with an identity block followed by the columns
/// `round(2^s·Re ᾱ^i)` and `round(2^s·Im ᾱ^i)`.
pub fn build_lattice(alpha: &Complex, err_bound: &Float, n: usize, s: u32) -> Result<LatticeBasis> {
    let limit = mp::pow2(-(s as i64)) / (12 * n.max(1)) as u32;
    if *err_bound > limit {
        return Err(Error::PrecisionTooLow(format!(
            "approximation error exceeds 2^-{s}/(12·{n})"
        )));
    }
    let prec = (2 * s).max(alpha.prec().0) + 64;
    let a = Complex::with_val(prec, alpha);
    let mut power = Complex::with_val(prec, (1, 0));
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![Integer::new(); n + 3];
        row[i] = Integer::from(1);
        let re = Float::with_val(prec, power.real()) << s;
        let im = Float::with_val(prec, power.imag()) << s;
        row[n + 1] = mp::round_to_integer(&re);
        row[n + 2] = mp::round_to_integer(&im);
        rows.push(row);
        power *= &a;
    }
    Ok(LatticeBasis::new(rows))
}

/// Nearest integer to `num/den` for `den > 0`.
fn round_div(num: &Integer, den: &Integer) -> Integer {
    // floor((2·num + den) / (2·den))
    let n2 = Integer::from(num << 1) + den;
    let d2 = Integer::from(den << 1);
    n2.div_rem_floor(d2).0
}

/// LLL reduction with δ = 3/4. Panics if the rows are linearly dependent.
pub fn lll_reduce(basis: &LatticeBasis) -> LatticeBasis {
    let mut b = basis.rows.clone();
    let n = b.len();
    if n <= 1 {
        return LatticeBasis::new(b);
    }
    // d[0] = 1, d[i+1] = Π_{j≤i} ‖b*_j‖²; lam[i][j] for j < i
    let mut d = vec![Integer::new(); n + 1];
    let mut lam = vec![vec![Integer::new(); n]; n];
    d[0] = Integer::from(1);
    d[1] = dot(&b[0], &b[0]);
    let mut k = 1usize;
    let mut kmax = 0usize;

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (Integer::from(&d[i + 1] * &u) - Integer::from(&lam[k][i] * &lam[j][i])) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(u.cmp0() != Ordering::Equal, "lattice rows are linearly dependent");
                    d[k + 1] = u;
                }
            }
        }
        size_reduce(&mut b, &mut lam, &d, k, k - 1);
        // Lovász: 4·d_{k+1}·d_{k-1} < 3·d_k² − 4·λ_{k,k-1}²  ⇒ swap
        let lhs = Integer::from(&d[k + 1] * &d[k - 1]) << 2;
        let rhs = Integer::from(d[k].square_ref()) * 3u32 - (Integer::from(lam[k][k - 1].square_ref()) << 2);
        if lhs < rhs {
            swap(&mut b, &mut lam, &mut d, k, kmax);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                size_reduce(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    LatticeBasis::new(b)
}

fn size_reduce(b: &mut [Vec<Integer>], lam: &mut [Vec<Integer>], d: &[Integer], k: usize, l: usize) {
    let twice = Integer::from(lam[k][l].abs_ref()) << 1;
    if twice <= d[l + 1] {
        return;
    }
    let q = round_div(&lam[k][l], &d[l + 1]);
    let (lo, hi) = b.split_at_mut(k);
    for (x, y) in hi[0].iter_mut().zip(&lo[l]) {
        *x -= Integer::from(&q * y);
    }
    lam[k][l] -= Integer::from(&q * &d[l + 1]);
    for i in 0..l {
        let t = Integer::from(&q * &lam[l][i]);
        lam[k][i] -= t;
    }
}

fn swap(b: &mut [Vec<Integer>], lam: &mut [Vec<Integer>], d: &mut [Integer], k: usize, kmax: usize) {
    b.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = std::mem::take(&mut lam[k][j]);
        lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
    }
    let l = lam[k][k - 1].clone();
    let bb = (Integer::from(&d[k - 1] * &d[k + 1]) + Integer::from(l.square_ref())) / &d[k];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (Integer::from(&d[k + 1] * &lam[i][k - 1]) - Integer::from(&l * &t)) / &d[k];
        lam[i][k - 1] = (Integer::from(&bb * &t) + Integer::from(&l * &lam[i][k])) / &d[k + 1];
    }
    d[k] = bb;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_for_one() {
        let one = Complex::with_val(64, (1, 0));
        let b = build_lattice(&one, &Float::new(64), 1, 4).unwrap();
        assert_eq!(b, LatticeBasis::from_i64(&[&[1, 0, 16, 0], &[0, 1, 16, 0]]));
    }

    #[test]
    fn lattice_for_i() {
        let i = Complex::with_val(64, (0, 1));
        let b = build_lattice(&i, &Float::new(64), 2, 4).unwrap();
        assert_eq!(
            b,
            LatticeBasis::from_i64(&[&[1, 0, 0, 16, 0], &[0, 1, 0, 0, 16], &[0, 0, 1, -16, 0]])
        );
    }

    #[test]
    fn lattice_for_half() {
        let h = Complex::with_val(64, (0.5, 0));
        let b = build_lattice(&h, &Float::new(64), 1, 8).unwrap();
        assert_eq!(b, LatticeBasis::from_i64(&[&[1, 0, 256, 0], &[0, 1, 128, 0]]));
    }

    #[test]
    fn lattice_rejects_coarse_input() {
        let h = Complex::with_val(64, (0.5, 0));
        let err = mp::bound(0.01);
        assert!(matches!(build_lattice(&h, &err, 1, 8), Err(Error::PrecisionTooLow(_))));
    }

    #[test]
    fn identity_is_reduced() {
        let id = LatticeBasis::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(lll_reduce(&id), id);
    }

    #[test]
    fn two_dimensional_example() {
        let b = LatticeBasis::from_i64(&[&[2, 0], &[1, 1]]);
        let r = lll_reduce(&b);
        let mut rows: Vec<Vec<i64>> = r
            .rows
            .iter()
            .map(|row| {
                let sign = if row.iter().find(|v| v.cmp0().is_ne()).unwrap().cmp0().is_lt() { -1 } else { 1 };
                row.iter().map(|v| v.to_i64().unwrap() * sign).collect()
            })
            .collect();
        rows.sort();
        assert_eq!(rows, vec![vec![1, -1], vec![1, 1]]);
    }
}
