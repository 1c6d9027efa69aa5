//! Exact node polynomials from approximate roots, and exact bivariate
//! factors from node polynomials by scaled Lagrange interpolation.

use rug::{Complex, Float, Integer, Rational};

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::{mp, BivarPolyZ, Poly, UniPolyQ, UniPolyZ};
use crate::error::{Error, Result};
use crate::rootsolve::ApproxRoot;

/// One specialization node of a factor.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub y: Rational,
    pub node_poly: UniPolyZ,
    pub alpha_used: Integer,
}

/// `δ* = 1/(2αM)` with `M = max_i i·r^{i−1}·C(m,i) + 1`: root errors below
/// `δ*` keep every coefficient of `α·Π(x − x̃ᵢ)` within 1/2 of its exact
/// value.
pub fn rounding_threshold(m: usize, r_mag: &Float, alpha: &Integer) -> Float {
    assert!(m >= 1 && *alpha >= 1);
    let r = Float::with_val(mp::BOUND_PREC, r_mag);
    let mut max = Float::new(mp::BOUND_PREC);
    let mut r_pow = Float::with_val(mp::BOUND_PREC, 1);
    for i in 1..=m {
        let binom = Integer::from(Integer::binomial_u(m as u32, i as u32));
        let term = Float::with_val(mp::BOUND_PREC, &r_pow * i as u32) * binom;
        if term > max {
            max = term;
        }
        r_pow *= &r;
    }
    let big_m = max + 1u32;
    let denom = big_m * Float::with_val(mp::BOUND_PREC, alpha) * 2u32;
    Float::with_val_round(mp::BOUND_PREC, denom.recip_ref(), rug::float::Round::Down).0
}

/// Rounds `α·Π(x − x̃ᵢ)` to an integer polynomial and returns its primitive
/// part.
pub fn node_polynomial(roots: &[ApproxRoot], alpha: &Integer) -> Result<UniPolyZ> {
    if roots.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let m = roots.len();
    let r_mag = roots
        .iter()
        .map(|r| mp::abs_up(&r.value))
        .fold(Float::new(mp::BOUND_PREC), |a, b| a.max(&b));
    let threshold = rounding_threshold(m, &r_mag, alpha);
    if let Some(bad) = roots.iter().find(|r| r.err_bound >= threshold) {
        return Err(Error::PrecisionTooLow(format!(
            "root error {:.3e} exceeds rounding threshold {:.3e}",
            bad.err_bound.to_f64(),
            threshold.to_f64()
        )));
    }
    let root_prec = roots.iter().map(|r| r.value.prec().0).max().unwrap_or(64);
    let prec = root_prec
        + alpha.significant_bits()
        + m as u32 * (mp::log2_ceil_at_least_one(&r_mag) + 2)
        + 64;
    let mut coeffs = vec![Complex::with_val(prec, (alpha, 0))];
    for r in roots {
        // multiply by (x − r)
        let mut next = vec![Complex::new(prec); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= Complex::with_val(prec, c * &r.value);
        }
        coeffs = next;
    }
    let quarter = mp::bound(0.25);
    let mut ints = Vec::with_capacity(coeffs.len());
    for (k, c) in coeffs.iter().enumerate() {
        let n = mp::round_to_integer(c.real());
        let off = Float::with_val(mp::BOUND_PREC, c.real() - &n).abs();
        let im = Float::with_val(mp::BOUND_PREC, c.imag().abs_ref());
        if off >= quarter || im >= quarter {
            return Err(Error::PrecisionTooLow(format!(
                "coefficient of x^{k} is not near an integer"
            )));
        }
        ints.push(n);
    }
    Ok(UniPolyZ::new(ints).primitive())
}

/// `μ = ⌈r·n/(r−1)⌉`: the number of interpolation nodes beyond the first
/// that make the scaling system have a one-dimensional solution space.
pub fn required_nodes(r_rank: usize, n: usize) -> Result<usize> {
    if r_rank < 2 {
        return Err(Error::RankOne);
    }
    Ok((r_rank * n).div_ceil(r_rank - 1))
}

/// Node polynomials `fᵢ` at distinct nodes `yᵢ` of a factor with `y`-degree
/// `n`, to be combined as `Σ λᵢ fᵢ ℓᵢ(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSystem {
    pub nodes: Vec<Rational>,
    pub polys: Vec<UniPolyQ>,
    pub n: usize,
}

impl ScalingSystem {
    pub fn new(nodes: Vec<Rational>, polys: Vec<UniPolyQ>, n: usize) -> Self {
        assert_eq!(nodes.len(), polys.len());
        ScalingSystem { nodes, polys, n }
    }

    pub fn from_records(records: &[NodeRecord], n: usize) -> Self {
        ScalingSystem::new(
            records.iter().map(|r| r.y.clone()).collect(),
            records.iter().map(|r| r.node_poly.to_rational()).collect(),
            n,
        )
    }

    /// Index of the last node; nodes are `y₀ … y_k`.
    pub fn k(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.polys.iter().map(|p| p.deg()).max().unwrap_or(0) + 1
    }

    /// `(k+1) × (m+1)`; row `i` holds the coefficients of `fᵢ`.
    pub fn a_matrix(&self) -> Matrix {
        let w = self.width();
        self.polys.iter().map(|p| (0..w).map(|j| p.coeff(j)).collect()).collect()
    }

    /// Vandermonde with row `i` equal to `(yᵢ^k, …, yᵢ, 1)`.
    pub fn vandermonde(&self) -> Matrix {
        let k = self.k();
        self.nodes
            .iter()
            .map(|y| {
                let mut row = vec![Rational::from(1); k + 1];
                for c in (0..k).rev() {
                    row[c] = Rational::from(&row[c + 1] * y);
                }
                row
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.a_matrix())
    }
}

/// Row `i` of `V⁻¹`, from `Vᵀu = eᵢ`.
fn inverse_row(vt: &Matrix, i: usize) -> Result<Vec<Rational>> {
    let mut e = vec![Rational::new(); vt.len()];
    e[i] = Rational::from(1);
    linalg::solve(vt, &e).ok_or_else(|| Error::Inconsistent("interpolation nodes are not distinct".into()))
}

/// Scaling constants `λ₀ = 1, λ₁, …, λ_k` making the top `k − n` rows of
/// `V⁻¹·Λ·A` vanish.
pub fn scaling_constants(sys: &ScalingSystem) -> Result<Vec<Rational>> {
    let k = sys.k();
    if k <= sys.n {
        return Err(Error::NeedMoreNodes);
    }
    let v = sys.vandermonde();
    let vt: Matrix = (0..=k).map(|c| (0..=k).map(|r| v[r][c].clone()).collect()).collect();
    let a = sys.a_matrix();
    let mut eqs: Matrix = Vec::new();
    for i in 0..k - sys.n {
        let row = inverse_row(&vt, i)?;
        for j in 0..sys.width() {
            eqs.push((0..=k).map(|l| Rational::from(&row[l] * &a[l][j])).collect());
        }
    }
    let null = linalg::nullspace(&eqs, k + 1);
    match null.len() {
        0 => Err(Error::Inconsistent("scaling system has only the zero solution".into())),
        1 => {
            let v = &null[0];
            if v.iter().any(|c| c.cmp0().is_eq()) {
                return Err(Error::Inconsistent("a scaling constant vanishes".into()));
            }
            let first = v[0].clone();
            Ok(v.iter().map(|c| Rational::from(c / &first)).collect())
        }
        _ => Err(Error::NeedMoreNodes),
    }
}

/// `ℓᵢ(y) = Π_{j≠i} (y − y_j)/(yᵢ − y_j)`.
fn lagrange_basis(nodes: &[Rational], i: usize) -> UniPolyQ {
    let mut p = UniPolyQ::one();
    for (j, yj) in nodes.iter().enumerate() {
        if j == i {
            continue;
        }
        let denom = Rational::from(&nodes[i] - yj);
        let lin = Poly::new(vec![Rational::from(-yj) / &denom, Rational::from(1) / denom]);
        p = &p * &lin;
    }
    p
}

/// `Σ λᵢ fᵢ(x) ℓᵢ(y)` as a primitive integer polynomial with positive
/// leading coefficient.
pub fn assemble_factor(sys: &ScalingSystem, lambda: &[Rational]) -> Result<BivarPolyZ> {
    assert_eq!(lambda.len(), sys.nodes.len());
    let w = sys.width();
    let k = sys.k();
    let mut table = vec![vec![Rational::new(); k + 1]; w];
    for (i, (f, lam)) in sys.polys.iter().zip(lambda).enumerate() {
        let ell = lagrange_basis(&sys.nodes, i);
        for (a, row) in table.iter_mut().enumerate() {
            let c = Rational::from(&f.coeff(a) * lam);
            if c.cmp0().is_eq() {
                continue;
            }
            for (b, e) in ell.coeffs().iter().enumerate() {
                row[b] += Rational::from(&c * e);
            }
        }
    }
    if let Some(b) = (sys.n + 1..=k).rev().find(|&b| table.iter().any(|row| row[b].cmp0().is_ne())) {
        return Err(Error::DegreeOverflow(b));
    }
    let lcm = table.iter().flatten().fold(Integer::from(1), |l, c| l.lcm(c.denom()));
    let terms = table.iter().enumerate().flat_map(|(a, row)| {
        let lcm = &lcm;
        row.iter().enumerate().filter(|(_, c)| c.cmp0().is_ne()).map(move |(b, c)| {
            let scaled = Rational::from(c * lcm);
            ((a as u32, b as u32), scaled.into_numer_denom().0)
        })
    });
    BivarPolyZ::from_terms(terms).primitive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{primitive_from_rational, Var};

    fn q(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    fn circle() -> BivarPolyZ {
        BivarPolyZ::from_i64_terms(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)])
    }

    #[test]
    fn threshold_examples() {
        let t = rounding_threshold(1, &Float::new(64), &Integer::from(1));
        assert_eq!(t, 0.25);
        let t = rounding_threshold(2, &mp::bound(1.0), &Integer::from(1));
        assert!((t.to_f64() - 1.0 / 6.0).abs() < 1e-15);
        let t = rounding_threshold(3, &mp::bound(2.1), &Integer::from(97));
        assert!((t.to_f64() - 1.0 / (2.0 * 97.0 * 14.23)).abs() < 1e-12);
    }

    #[test]
    fn node_polynomial_of_unit_roots() {
        let roots: Vec<ApproxRoot> = [1.0, -1.0]
            .iter()
            .enumerate()
            .map(|(k, &v)| ApproxRoot::from_c64(num_complex::Complex64::new(v, 0.0), 1e-12, k))
            .collect();
        assert_eq!(node_polynomial(&roots, &Integer::from(1)).unwrap(), UniPolyZ::from_i64(&[-1, 0, 1]));
    }

    fn exact_root(re: Float, im: Float, k: usize) -> ApproxRoot {
        ApproxRoot { value: Complex::with_val(re.prec(), (re, im)), err_bound: mp::pow2(-150), path_index: k }
    }

    #[test]
    fn node_polynomial_real_pair() {
        let r = Float::with_val(200, 792).sqrt() / 101u32;
        let roots = vec![exact_root(r.clone(), Float::new(200), 0), exact_root(-r, Float::new(200), 1)];
        let p = node_polynomial(&roots, &Integer::from(989497)).unwrap();
        assert_eq!(p.to_string(), "10201*x^2 - 792");
    }

    #[test]
    fn node_polynomial_imaginary_pair() {
        let r = Float::with_val(200, 615).sqrt() / 101u32;
        let roots = vec![exact_root(Float::new(200), r.clone(), 0), exact_root(Float::new(200), -r, 1)];
        let p = node_polynomial(&roots, &Integer::from(989497)).unwrap();
        assert_eq!(p.to_string(), "10201*x^2 + 615");
    }

    #[test]
    fn node_polynomial_rejects_coarse_roots() {
        let roots = vec![ApproxRoot::from_c64(num_complex::Complex64::new(0.5, 0.0), 0.3, 0)];
        assert!(matches!(node_polynomial(&roots, &Integer::from(2)), Err(Error::PrecisionTooLow(_))));
    }

    #[test]
    fn node_counts() {
        assert_eq!(required_nodes(2, 2).unwrap(), 4);
        assert_eq!(required_nodes(2, 1).unwrap(), 2);
        assert_eq!(required_nodes(3, 4).unwrap(), 6);
        assert!(matches!(required_nodes(1, 3), Err(Error::RankOne)));
    }

    fn hyperbola_system() -> ScalingSystem {
        ScalingSystem::new(
            vec![q(4, 1), q(2, 1), q(3, 1)],
            vec![
                UniPolyQ::from_pairs(&[(-1, 4), (1, 1)]),
                UniPolyQ::from_pairs(&[(-1, 2), (1, 1)]),
                UniPolyQ::from_pairs(&[(-1, 3), (1, 1)]),
            ],
            1,
        )
    }

    #[test]
    fn hyperbola_scaling_and_assembly() {
        let sys = hyperbola_system();
        assert_eq!(sys.rank(), 2);
        let lam = scaling_constants(&sys).unwrap();
        assert_eq!(lam, vec![q(1, 1), q(1, 2), q(3, 4)]);
        let f = assemble_factor(&sys, &lam).unwrap();
        assert_eq!(f, BivarPolyZ::from_i64_terms(&[(1, 1, 1), (0, 0, -1)]));
    }

    #[test]
    fn circle_from_consistent_specializations() {
        let nodes = vec![q(-1, 2), q(0, 1), q(1, 2)];
        let polys = vec![
            UniPolyQ::from_pairs(&[(-3, 4), (0, 1), (1, 1)]),
            UniPolyQ::from_pairs(&[(-1, 1), (0, 1), (1, 1)]),
            UniPolyQ::from_pairs(&[(-3, 4), (0, 1), (1, 1)]),
        ];
        let sys = ScalingSystem::new(nodes, polys, 2);
        let ones = vec![Rational::from(1); 3];
        assert_eq!(assemble_factor(&sys, &ones).unwrap(), circle());
    }

    fn circle_nodes() -> ScalingSystem {
        let nodes = vec![q(97, 101), q(1, 1), q(104, 101), q(123, 101), q(129, 101)];
        let polys = nodes
            .iter()
            .map(|y| primitive_from_rational(&circle().specialize(Var::Y, y)).unwrap().to_rational())
            .collect();
        ScalingSystem::new(nodes, polys, 2)
    }

    #[test]
    fn circle_scaling_constants() {
        let sys = circle_nodes();
        let lam = scaling_constants(&sys).unwrap();
        let expect: Vec<Rational> = [1, 10201, 1, 1, 1].iter().map(|&v| Rational::from(v)).collect();
        assert_eq!(lam, expect);
        assert_eq!(assemble_factor(&sys, &lam).unwrap(), circle());
    }

    #[test]
    fn too_few_nodes() {
        let mut sys = circle_nodes();
        sys.nodes.truncate(4);
        sys.polys.truncate(4);
        assert!(matches!(scaling_constants(&sys), Err(Error::NeedMoreNodes)));
    }

    #[test]
    fn overflow_is_detected() {
        let sys = hyperbola_system();
        let bad = vec![q(1, 1), q(1, 1), q(1, 1)];
        assert!(matches!(assemble_factor(&sys, &bad), Err(Error::DegreeOverflow(2))));
    }
}
