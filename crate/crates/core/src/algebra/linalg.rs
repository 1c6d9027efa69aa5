//! Exact linear algebra over ℚ: row reduction, rank, nullspace, solve.

use rug::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c].cmp0().is_ne()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::from(1) / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].cmp0().is_eq() {
                continue;
            }
            let factor = m[i][c].clone();
            for k in c..cols {
                let t = Rational::from(&factor * &m[r][k]);
                m[i][k] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Basis of the right nullspace `{v : m·v = 0}`.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut m = m.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::new(); cols];
            v[f] = Rational::from(1);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = Rational::from(-&m[row][f]);
            }
            v
        })
        .collect()
}

/// Solves the square system `a·x = b`; `None` if singular.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::new(), |acc, (a, b)| acc + Rational::from(a * b))
        })
        .collect()
}
