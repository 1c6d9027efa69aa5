//! Sparse bivariate integer polynomials and the reductions built on them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::{Integer, Rational};

use super::poly::{Poly, UniPolyQ, UniPolyZ};
use crate::error::{Error, Result};

/// `ℤ[y][x]`: a polynomial in `x` whose coefficients are polynomials in `y`.
pub type RecPoly = Poly<UniPolyZ>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// Bivariate polynomial over ℤ stored as a sparse map `(i, j) → coeff of x^i y^j`.
/// No zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivarPolyZ {
    terms: BTreeMap<(u32, u32), Integer>,
}

impl BivarPolyZ {
    pub fn zero() -> Self {
        BivarPolyZ::default()
    }

    pub fn one() -> Self {
        BivarPolyZ::constant(Integer::from(1))
    }

    pub fn constant(c: Integer) -> Self {
        BivarPolyZ::from_terms([((0, 0), c)])
    }

    pub fn x() -> Self {
        BivarPolyZ::from_terms([((1, 0), Integer::from(1))])
    }

    pub fn y() -> Self {
        BivarPolyZ::from_terms([((0, 1), Integer::from(1))])
    }

    /// Builds a polynomial from `(i, j) → coeff` pairs, summing repeated
    /// exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Integer)>>(it: I) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in it {
            *terms.entry(e).or_insert_with(Integer::new) += c;
        }
        terms.retain(|_, c: &mut Integer| c.cmp0() != Ordering::Equal);
        BivarPolyZ { terms }
    }

    pub fn from_i64_terms(terms: &[(u32, u32, i64)]) -> Self {
        BivarPolyZ::from_terms(terms.iter().map(|&(i, j, c)| ((i, j), Integer::from(c))))
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Integer> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> Integer {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    /// Degree pair `[deg_x, deg_y]`.
    pub fn degree_pair(&self) -> [usize; 2] {
        let dx = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let dy = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        [dx as usize, dy as usize]
    }

    pub fn deg_x(&self) -> usize {
        self.degree_pair()[0]
    }

    pub fn deg_y(&self) -> usize {
        self.degree_pair()[1]
    }

    pub fn involves(&self, var: Var) -> bool {
        match var {
            Var::X => self.terms.keys().any(|e| e.0 > 0),
            Var::Y => self.terms.keys().any(|e| e.1 > 0),
        }
    }

    /// Leading coefficient in lex order `x > y`.
    pub fn lc(&self) -> Integer {
        self.terms.iter().next_back().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_vars(&self) -> Self {
        BivarPolyZ::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    pub fn neg(&self) -> Self {
        BivarPolyZ::from_terms(self.terms.iter().map(|(&e, c)| (e, Integer::from(-c))))
    }

    pub fn add(&self, other: &Self) -> Self {
        BivarPolyZ::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(&e, c)| (e, c.clone())),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                terms.push(((i + k, j + l), Integer::from(a * b)));
            }
        }
        BivarPolyZ::from_terms(terms)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(BivarPolyZ::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &Integer) -> Self {
        BivarPolyZ::from_terms(self.terms.iter().map(|(&e, a)| (e, Integer::from(a * c))))
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: Var) -> Self {
        BivarPolyZ::from_terms(self.terms.iter().filter_map(|(&(i, j), c)| match var {
            Var::X if i > 0 => Some(((i - 1, j), Integer::from(c * i))),
            Var::Y if j > 0 => Some(((i, j - 1), Integer::from(c * j))),
            _ => None,
        }))
    }

    /// Recursive view `ℤ[y][x]`.
    pub fn to_rec(&self) -> RecPoly {
        let dx = self.deg_x();
        let mut rows: Vec<Vec<Integer>> = vec![Vec::new(); dx + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[i as usize];
            if row.len() <= j as usize {
                row.resize(j as usize + 1, Integer::new());
            }
            row[j as usize] = c.clone();
        }
        if self.is_zero() {
            return Poly::zero();
        }
        Poly::new(rows.into_iter().map(Poly::new).collect())
    }

    pub fn from_rec(p: &RecPoly) -> Self {
        BivarPolyZ::from_terms(p.coeffs().iter().enumerate().flat_map(|(i, cy)| {
            cy.coeffs()
                .iter()
                .enumerate()
                .map(move |(j, c)| ((i as u32, j as u32), c.clone()))
        }))
    }

    /// Embeds a univariate polynomial as a polynomial in `var`.
    pub fn from_univariate(p: &UniPolyZ, var: Var) -> Self {
        BivarPolyZ::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let k = k as u32;
            let e = match var {
                Var::X => (k, 0),
                Var::Y => (0, k),
            };
            (e, c.clone())
        }))
    }

    /// The polynomial as a univariate one in `var`, if it does not involve the
    /// other variable.
    pub fn to_univariate(&self, var: Var) -> Option<UniPolyZ> {
        let other = match var {
            Var::X => Var::Y,
            Var::Y => Var::X,
        };
        if self.involves(other) {
            return None;
        }
        let n = match var {
            Var::X => self.deg_x(),
            Var::Y => self.deg_y(),
        };
        let mut c = vec![Integer::new(); n + 1];
        for (&(i, j), v) in &self.terms {
            c[(i + j) as usize] = v.clone();
        }
        Some(Poly::new(c))
    }

    /// Gcd of all integer coefficients, signed so the primitive part has a
    /// positive lex-leading coefficient.
    pub fn content_primitive(&self) -> Result<(Integer, BivarPolyZ)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut g = self
            .terms
            .values()
            .fold(Integer::new(), |g, c| Integer::from(g.gcd_ref(c)));
        if self.lc().cmp0() == Ordering::Less {
            g = -g;
        }
        let p = BivarPolyZ::from_terms(
            self.terms
                .iter()
                .map(|(&e, c)| (e, Integer::from(c.div_exact_ref(&g)))),
        );
        Ok((g, p))
    }

    pub fn primitive(&self) -> Result<BivarPolyZ> {
        Ok(self.content_primitive()?.1)
    }

    /// Substitutes `value` for `var`, returning a polynomial in the other variable.
    pub fn specialize(&self, var: Var, value: &Rational) -> UniPolyQ {
        let n = match var {
            Var::X => self.deg_y(),
            Var::Y => self.deg_x(),
        };
        let max_pow = match var {
            Var::X => self.deg_x(),
            Var::Y => self.deg_y(),
        };
        let mut powers = Vec::with_capacity(max_pow + 1);
        powers.push(Rational::from(1));
        for k in 1..=max_pow {
            powers.push(Rational::from(&powers[k - 1] * value));
        }
        let mut c = vec![Rational::new(); n + 1];
        for (&(i, j), v) in &self.terms {
            let (keep, sub) = match var {
                Var::X => (j as usize, i as usize),
                Var::Y => (i as usize, j as usize),
            };
            c[keep] += Rational::from(&powers[sub] * v);
        }
        Poly::new(c)
    }

    /// `f(s, slope·s + intercept)` as a polynomial in `s`.
    pub fn restrict_to_line(&self, slope: &Rational, intercept: &Rational) -> UniPolyQ {
        let line = Poly::new(vec![intercept.clone(), slope.clone()]);
        let mut powers = vec![UniPolyQ::one()];
        for k in 1..=self.deg_y() {
            powers.push(&powers[k - 1] * &line);
        }
        let mut acc = UniPolyQ::zero();
        for (&(i, j), v) in &self.terms {
            let term = powers[j as usize].scale(&Rational::from(v));
            acc = &acc + &(&term * &Poly::monomial(Rational::from(1), i as usize));
        }
        acc
    }

    /// Exact rational evaluation at a point.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.specialize(Var::Y, y).eval(x)
    }

    /// Canonical ordering key: degree pair, then coefficients in lex order.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.degree_pair()
            .cmp(&other.degree_pair())
            .then_with(|| {
                let a = self.terms.iter().rev();
                let b = other.terms.iter().rev();
                a.cmp(b)
            })
    }
}

/// Clears denominators of a rational polynomial and returns its primitive
/// integer associate with positive leading coefficient.
pub fn primitive_from_rational(f: &UniPolyQ) -> Result<UniPolyZ> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lcm = f
        .coeffs()
        .iter()
        .fold(Integer::from(1), |l, c| l.lcm(c.denom()));
    let ints: Vec<Integer> = f
        .coeffs()
        .iter()
        .map(|c| {
            let (n, d) = c.clone().into_numer_denom();
            n * Integer::from(lcm.div_exact_ref(&d))
        })
        .collect();
    Ok(Poly::new(ints).primitive())
}

/// Primitive gcd over `ℚ[x, y]`, normalized to a positive lex-leading
/// coefficient. `gcd(0, 0)` is zero.
pub fn gcd_bivariate(f: &BivarPolyZ, g: &BivarPolyZ) -> BivarPolyZ {
    if f.is_zero() && g.is_zero() {
        return BivarPolyZ::zero();
    }
    let h = BivarPolyZ::from_rec(&f.to_rec().gcd(&g.to_rec()));
    h.primitive().expect("gcd of not-both-zero inputs is nonzero")
}

/// `F = cofactor · quotient · G` with `quotient` primitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub cofactor: Rational,
    pub quotient: BivarPolyZ,
}

/// Exact division in `ℚ[x, y]`. The quotient is returned in primitive integer
/// form together with the rational cofactor.
pub fn exact_divide(f: &BivarPolyZ, g: &BivarPolyZ) -> Result<Quotient> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_zero() {
        return Ok(Quotient { cofactor: Rational::new(), quotient: BivarPolyZ::zero() });
    }
    // Gauss: the product of primitive polynomials is primitive, so the
    // primitive parts divide exactly in ℤ[y][x]
    let (cf, pf) = f.content_primitive()?;
    let (cg, pg) = g.content_primitive()?;
    let q = pf
        .to_rec()
        .div_exact_poly(&pg.to_rec())
        .ok_or(Error::NotDivisible)?;
    let q = BivarPolyZ::from_rec(&q);
    let cofactor = Rational::from((cf, cg));
    Ok(Quotient { cofactor, quotient: q })
}

/// Square-free decomposition. Returns nonconstant, square-free, pairwise
/// coprime primitive factors with multiplicities; the integer content is
/// the only thing not represented.
pub fn squarefree_decompose(f: &BivarPolyZ) -> Result<Vec<(BivarPolyZ, usize)>> {
    let p = f.primitive()?;
    let rec = p.to_rec();
    // y-only content first, then Yun over ℤ[y][x]
    let (cont_y, pp) = rec.content_primitive();
    let mut out: Vec<(BivarPolyZ, usize)> = cont_y
        .yun()
        .into_iter()
        .map(|(a, k)| (BivarPolyZ::from_univariate(&a, Var::Y), k))
        .collect();
    out.extend(
        pp.yun()
            .into_iter()
            .map(|(a, k)| (BivarPolyZ::from_rec(&a), k)),
    );
    for (a, _) in out.iter_mut() {
        *a = a.primitive()?;
    }
    Ok(out)
}

/// Classical Mignotte-style bound `⌈2^d · ‖f‖₂⌉` on the height of any
/// integer factor of `f`.
pub fn height_bound(f: &UniPolyZ) -> Integer {
    let d = f.deg() as u32;
    let scaled = f.norm2_sq() << (2 * d);
    let (root, rem) = scaled.sqrt_rem(Integer::new());
    if rem.cmp0() == Ordering::Equal {
        root
    } else {
        root + 1
    }
}

impl fmt::Display for BivarPolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.cmp0() == Ordering::Less;
            let mag = Integer::from(c.abs_ref());
            match (n == 0, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            let mut parts = Vec::new();
            if mag != 1 || (i, j) == (0, 0) {
                parts.push(mag.to_string());
            }
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPolyZ({self})")
    }
}
