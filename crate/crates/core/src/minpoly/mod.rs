//! Exact minimal polynomials of algebraic numbers from numerical
//! approximations, by integer-relation search with LLL.

mod lattice;

use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use crate::algebra::{mp, UniPolyZ};
use crate::error::{Error, Result};
use crate::rootsolve::ApproxRoot;

pub use lattice::{build_lattice, lll_reduce, LatticeBasis};

/// Smallest `s ≥ 1` with `2^s > 2^{d²/2}·(d+1)^{(3d+4)/2}·H^{2d}`.
///
/// Squared to stay in integers: `4^s > 2^{d²}·(d+1)^{3d+4}·H^{4d}`.
pub fn required_bits(d: usize, h: &Integer) -> u32 {
    assert!(d >= 1 && *h >= 1, "required_bits needs d ≥ 1 and H ≥ 1");
    let d32 = d as u32;
    let rhs = (Integer::from(1) << (d32 * d32))
        * Integer::from(d + 1).pow(3 * d32 + 4)
        * Integer::from(h.pow(4 * d32));
    let mut s = (rhs.significant_bits().saturating_sub(1) / 2).max(1);
    while Integer::from(1) << (2 * s) <= rhs {
        s += 1;
    }
    s
}

/// Largest approximation error that `minimal_polynomial` accepts.
pub fn error_tolerance(d: usize, h: &Integer) -> Float {
    mp::pow2(-(required_bits(d, h) as i64)) / (12 * d as u32)
}

/// A set of roots sharing one minimal polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RootGroup {
    pub root_indices: Vec<usize>,
    pub min_poly: UniPolyZ,
    /// `(deg_x, deg_y)` of the bivariate factor this group belongs to.
    pub degree_pair: Option<(usize, usize)>,
}

fn normalize(coeffs: Vec<Integer>) -> UniPolyZ {
    UniPolyZ::new(coeffs).primitive().normalize_sign()
}

/// Minimal polynomial of degree ≤ `d` and height ≤ `h` of the number
/// approximated by `alpha`.
pub fn minimal_polynomial(alpha: &ApproxRoot, d: usize, h: &Integer) -> Result<UniPolyZ> {
    let s = required_bits(d, h);
    let tol = mp::pow2(-(s as i64)) / (12 * d as u32);
    if alpha.err_bound > tol {
        return Err(Error::PrecisionTooLow(format!(
            "root known to {} but {} bits needed",
            alpha.err_bound.to_f64(),
            s
        )));
    }
    if mp::abs(&alpha.value) > 1 {
        let prec = alpha.value.prec().0;
        let inv = Complex::with_val(prec, 1) / &alpha.value;
        // |1/a − 1/ã| ≤ ε/(|ã|(|ã|−ε)) ≤ 3ε for |ã| > 1 and ε ≤ 1/2
        let err = Float::with_val(mp::BOUND_PREC, &alpha.err_bound * 3u32);
        let p = search(&inv, &err, d, h, s)?;
        return Ok(p.reversed().primitive().normalize_sign());
    }
    search(&alpha.value, &alpha.err_bound, d, h, s)
}

fn search(alpha: &Complex, err: &Float, d: usize, h: &Integer, s: u32) -> Result<UniPolyZ> {
    // |v|² ≤ 2^d·(d+1)²·H²
    let accept = (Integer::from(1) << d as u32) * Integer::from(d + 1).square() * Integer::from(h.square_ref());
    for n in 1..=d {
        let basis = lll_reduce(&build_lattice(alpha, err, n, s)?);
        let v = &basis.rows[0];
        if LatticeBasis::norm_sq(v) <= accept {
            let p = normalize(v[..=n].to_vec());
            if p.degree().is_some_and(|k| k >= 1) {
                return Ok(p);
            }
        }
    }
    Err(Error::NoCandidateFound)
}

/// Whether `x̃` passes the membership test for `p`: `|p(x̃)|` is below the
/// perturbation a root with error `err` can cause.
fn satisfies(p: &UniPolyZ, root: &ApproxRoot, d: usize) -> bool {
    let prec = root.value.prec().0 + p.height().significant_bits() + 64;
    let value = mp::abs_up(&mp::eval(p, &root.value, prec));
    let radius = Float::with_val(mp::BOUND_PREC, mp::abs_up(&root.value) + &root.err_bound).max(&mp::bound(1.0));
    let mut threshold = mp::norm2(p) * (2 * d as u32) * &root.err_bound;
    threshold *= radius.pow(d.saturating_sub(1) as u32);
    value < threshold
}

/// Partitions the complete root set of a square-free polynomial of degree
/// `d` into conjugate classes with their minimal polynomials.
pub fn group_roots(roots: &[ApproxRoot], d: usize, h: &Integer) -> Result<Vec<RootGroup>> {
    if roots.len() != d {
        return Err(Error::InconsistentGrouping(format!("{} roots for degree {d}", roots.len())));
    }
    let mut assigned = vec![false; d];
    let mut groups = Vec::new();
    while let Some(first) = assigned.iter().position(|a| !a) {
        let remaining = assigned.iter().filter(|a| !**a).count();
        let p = minimal_polynomial(&roots[first], remaining, h)?;
        let members: Vec<usize> = (first..d)
            .filter(|&i| !assigned[i] && (i == first || satisfies(&p, &roots[i], d)))
            .collect();
        if members.len() != p.deg() || groups.iter().any(|g: &RootGroup| g.min_poly == p) {
            return Err(Error::InconsistentGrouping(format!(
                "{} roots matched {p} of degree {}",
                members.len(),
                p.deg()
            )));
        }
        for &i in &members {
            assigned[i] = true;
        }
        groups.push(RootGroup { root_indices: members, min_poly: p, degree_pair: None });
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsolve::{solve_univariate, TrackerConfig};

    fn z(v: i64) -> Integer {
        Integer::from(v)
    }

    fn approx(re: &str, im: &str, prec: u32) -> ApproxRoot {
        let value = Complex::with_val(
            prec,
            (
                Float::with_val(prec, Float::parse(re).unwrap()),
                Float::with_val(prec, Float::parse(im).unwrap()),
            ),
        );
        ApproxRoot { value, err_bound: mp::pow2(-(prec as i64) + 4), path_index: 0 }
    }

    #[test]
    fn required_bits_small_cases() {
        assert_eq!(required_bits(1, &z(1)), 5);
        assert_eq!(required_bits(2, &z(2)), 14);
        assert_eq!(required_bits(2, &z(1)), 10);
    }

    #[test]
    fn required_bits_is_minimal() {
        for d in 1..6usize {
            for h in [1, 3, 17, 1000] {
                let s = required_bits(d, &z(h));
                let rhs = (Integer::from(1) << (d * d) as u32)
                    * Integer::from(d + 1).pow(3 * d as u32 + 4)
                    * z(h).pow(4 * d as u32);
                assert!(Integer::from(1) << (2 * s) > rhs);
                assert!(s == 1 || Integer::from(1) << (2 * s - 2) <= rhs);
            }
        }
    }

    #[test]
    fn sqrt_two() {
        let mut two = Float::with_val(400, 2);
        two.sqrt_mut();
        let a = ApproxRoot {
            value: Complex::with_val(400, (two, 0)),
            err_bound: mp::pow2(-390),
            path_index: 0,
        };
        assert_eq!(minimal_polynomial(&a, 2, &z(2)).unwrap(), UniPolyZ::from_i64(&[-2, 0, 1]));
    }

    #[test]
    fn one_half() {
        let a = approx("0.5", "0", 200);
        assert_eq!(minimal_polynomial(&a, 1, &z(2)).unwrap(), UniPolyZ::from_i64(&[-1, 2]));
    }

    #[test]
    fn reciprocal_trick() {
        let a = ApproxRoot {
            value: Complex::with_val(600, (Float::with_val(600, 202) / 97u32, 0)),
            err_bound: mp::pow2(-590),
            path_index: 0,
        };
        let p = minimal_polynomial(&a, 3, &z(20_000_000)).unwrap();
        assert_eq!(p, UniPolyZ::from_i64(&[-202, 97]));
        let inv = ApproxRoot {
            value: Complex::with_val(600, (Float::with_val(600, 97) / 202u32, 0)),
            err_bound: mp::pow2(-590),
            path_index: 0,
        };
        assert_eq!(minimal_polynomial(&inv, 3, &z(20_000_000)).unwrap().reversed().normalize_sign(), p);
    }

    #[test]
    fn rejects_coarse_root() {
        let a = approx("0.5", "0", 20);
        assert!(matches!(minimal_polynomial(&a, 2, &z(5)), Err(Error::PrecisionTooLow(_))));
    }

    fn solved(p: &UniPolyZ, h: &Integer) -> Vec<ApproxRoot> {
        let s = required_bits(p.deg(), h) + 8 + 4 * p.deg() as u32;
        solve_univariate(p, &TrackerConfig::default(), s).unwrap()
    }

    #[test]
    fn groups_of_reference_cubic() {
        let p = UniPolyZ::from_i64(&[159984, -76824, -2060602, 989497]);
        let h = (p.norm2_sq().sqrt() + 1u32) << 3;
        let groups = group_roots(&solved(&p, &h), 3, &h).unwrap();
        let mut polys: Vec<String> = groups.iter().map(|g| g.min_poly.to_string()).collect();
        polys.sort();
        assert_eq!(polys, vec!["10201*x^2 - 792", "97*x - 202"]);
        let sizes: Vec<usize> = groups.iter().map(|g| g.root_indices.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 3);
    }

    #[test]
    fn irreducible_quadratic_is_one_group() {
        let p = UniPolyZ::from_i64(&[-2, 0, 1]);
        let groups = group_roots(&solved(&p, &z(16)), 2, &z(16)).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].min_poly, p);
    }

    #[test]
    fn linear_factors_split() {
        let p = UniPolyZ::from_i64(&[2, -3, 1]);
        let groups = group_roots(&solved(&p, &z(32)), 2, &z(32)).unwrap();
        let mut polys: Vec<UniPolyZ> = groups.into_iter().map(|g| g.min_poly).collect();
        polys.sort_by_key(|q| q.coeff(0).to_i64().unwrap());
        assert_eq!(polys, vec![UniPolyZ::from_i64(&[-2, 1]), UniPolyZ::from_i64(&[-1, 1])]);
    }
}
