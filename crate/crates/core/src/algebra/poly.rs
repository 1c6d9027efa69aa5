//! Dense univariate polynomials over an exact coefficient domain.
//!
//! The same type serves as `ℤ[x]`, `ℚ[x]` and, by nesting, as the recursive
//! representation `ℤ[y][x]` used for bivariate gcd and square-free work.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

/// Coefficient domain: an integral domain with exact division and a
/// normalized gcd.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_int(&self, k: u64) -> Self;
    /// `Some(q)` with `self == q * d`; `None` if `d` does not divide `self`.
    fn div_exact(&self, d: &Self) -> Option<Self>;
    /// Gcd with positive leading sign; `gcd(0, 0) == 0`.
    fn gcd(&self, other: &Self) -> Self;
    /// Sign of the leading unit.
    fn sign(&self) -> Ordering;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Coeff for Integer {
    fn zero() -> Self {
        Integer::new()
    }
    fn one() -> Self {
        Integer::from(1)
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == Ordering::Equal
    }
    fn add(&self, other: &Self) -> Self {
        Integer::from(self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Integer::from(self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Integer::from(self * other)
    }
    fn neg(&self) -> Self {
        Integer::from(-self)
    }
    fn mul_int(&self, k: u64) -> Self {
        Integer::from(self * k)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.cmp0() == Ordering::Equal {
            return None;
        }
        let (q, r) = self.clone().div_rem(d.clone());
        r.is_zero().then_some(q)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::from(self.gcd_ref(other))
    }
    fn sign(&self) -> Ordering {
        self.cmp0()
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::new()
    }
    fn one() -> Self {
        Rational::from(1)
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == Ordering::Equal
    }
    fn add(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn mul_int(&self, k: u64) -> Self {
        Rational::from(self * k)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        (d.cmp0() != Ordering::Equal).then(|| Rational::from(self / d))
    }
    fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() && other.is_zero() {
            Rational::new()
        } else {
            Rational::from(1)
        }
    }
    fn sign(&self) -> Ordering {
        self.cmp0()
    }
}

/// Polynomial with coefficients in ascending order of power. The coefficient
/// vector never has a trailing zero; the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

pub type UniPolyZ = Poly<Integer>;
pub type UniPolyQ = Poly<Rational>;

impl<C: Coeff> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    /// `c · x^k`
    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul_int(k as u64))
                .collect(),
        )
    }

    pub fn eval(&self, at: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc.mul(at).add(c))
    }

    /// `x^deg · p(1/x)`, i.e. the coefficient vector reversed.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    /// Pseudo-division: returns `(q, r)` with `lc(d)^(deg a - deg d + 1) · a = q·d + r`.
    pub fn pseudo_div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "pseudo-division by zero polynomial");
        let dd = d.deg();
        let Some(da) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if da < dd {
            return (Poly::zero(), self.clone());
        }
        let lcd = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![C::zero(); da - dd + 1];
        for k in (0..=da - dd).rev() {
            let top = r[k + dd].clone();
            for c in q.iter_mut() {
                *c = c.mul(&lcd);
            }
            q[k] = top.clone();
            for c in r.iter_mut().take(k + dd + 1) {
                *c = c.mul(&lcd);
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&top.mul(dc));
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn pseudo_rem(&self, d: &Self) -> Self {
        self.pseudo_div_rem(d).1
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact_poly(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let Some(da) = self.degree() else {
            return Some(Poly::zero());
        };
        let dd = d.deg();
        if da < dd {
            return None;
        }
        let lcd = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![C::zero(); da - dd + 1];
        for k in (0..=da - dd).rev() {
            let t = r[k + dd].div_exact(&lcd)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&t.mul(dc));
            }
            q[k] = t;
        }
        r.iter().all(|c| c.is_zero()).then(|| Poly::new(q))
    }

    /// Gcd of the coefficients, signed so that `self / content` has a positive
    /// leading coefficient.
    pub fn content(&self) -> C {
        let g = self
            .coeffs
            .iter()
            .fold(C::zero(), |g, c| if g.is_one() { g } else { g.gcd(c) });
        if self.lc().sign() == Ordering::Less {
            g.neg()
        } else {
            g
        }
    }

    pub fn content_primitive(&self) -> (C, Self) {
        if self.is_zero() {
            return (C::zero(), Poly::zero());
        }
        let c = self.content();
        let p = self.div_scalar(&c).expect("content divides every coefficient");
        (c, p)
    }

    pub fn primitive(&self) -> Self {
        self.content_primitive().1
    }

    pub fn div_scalar(&self, c: &C) -> Option<Self> {
        self.coeffs
            .iter()
            .map(|a| a.div_exact(c))
            .collect::<Option<Vec<_>>>()
            .map(Poly::new)
    }

    /// Multiplies by ±1 so the leading coefficient is positive.
    pub fn normalize_sign(self) -> Self {
        if self.lc().sign() == Ordering::Less {
            -&self
        } else {
            self
        }
    }

    /// Greatest common divisor by the subresultant remainder sequence.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = if self.deg() >= other.deg() {
            (self.clone(), other.clone())
        } else {
            (other.clone(), self.clone())
        };
        if b.is_zero() {
            return a.normalize_sign();
        }
        if a.is_zero() {
            return b.normalize_sign();
        }
        let (ca, pa) = a.content_primitive();
        let (cb, pb) = b.content_primitive();
        let d = ca.gcd(&cb);
        a = pa;
        b = pb;
        let mut g = C::one();
        let mut h = C::one();
        loop {
            let delta = a.deg() - b.deg();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                break;
            }
            if r.deg() == 0 {
                b = Poly::one();
                break;
            }
            let denom = g.mul(&pow(&h, delta));
            a = b;
            b = r.div_scalar(&denom).expect("subresultant division is exact");
            g = a.lc();
            h = if delta == 0 {
                h
            } else {
                pow(&g, delta)
                    .div_exact(&pow(&h, delta - 1))
                    .expect("subresultant h update is exact")
            };
        }
        b.primitive().scale(&d).normalize_sign()
    }

    /// Square-free decomposition (Yun) of a primitive polynomial over a
    /// characteristic-zero domain. Returns `(factor, multiplicity)` pairs with
    /// nonconstant, pairwise coprime, square-free factors.
    pub fn yun(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.primitive();
        let df = f.derivative();
        let b = f.gcd(&df);
        let mut c = f.div_exact_poly(&b).expect("gcd divides f");
        let mut d = &df.div_exact_poly(&b).expect("gcd divides f'") - &c.derivative();
        let mut i = 1;
        while !c.is_constant() {
            let a = c.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            c = c.div_exact_poly(&a).expect("yun: a divides c");
            d = &d.div_exact_poly(&a).expect("yun: a divides d") - &c.derivative();
            i += 1;
        }
        out
    }
}

pub(crate) fn pow<C: Coeff>(c: &C, k: usize) -> C {
    let mut acc = C::one();
    for _ in 0..k {
        acc = acc.mul(c);
    }
    acc
}

impl<C: Coeff> Coeff for Poly<C> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_int(&self, k: u64) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.mul_int(k)).collect())
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        self.div_exact_poly(d)
    }
    fn gcd(&self, other: &Self) -> Self {
        Poly::gcd(self, other)
    }
    fn sign(&self) -> Ordering {
        self.coeffs.last().map_or(Ordering::Equal, |c| c.sign())
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect())
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).sub(&rhs.coeff(k))).collect())
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl UniPolyZ {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    /// Squared Euclidean norm of the coefficient vector.
    pub fn norm2_sq(&self) -> Integer {
        self.coeffs
            .iter()
            .fold(Integer::new(), |acc, c| acc + Integer::from(c * c))
    }

    /// Max-norm of the coefficient vector.
    pub fn height(&self) -> Integer {
        self.coeffs
            .iter()
            .map(|c| Integer::from(c.abs_ref()))
            .max()
            .unwrap_or_default()
    }

    pub fn to_rational(&self) -> UniPolyQ {
        Poly::new(self.coeffs.iter().map(Rational::from).collect())
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }
}

impl UniPolyQ {
    pub fn from_pairs(coeffs: &[(i64, u64)]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&(n, d)| Rational::from((n, d)))
                .collect(),
        )
    }
}

impl fmt::Display for UniPolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.cmp0() == Ordering::Equal {
                continue;
            }
            let mag = Integer::from(c.abs_ref());
            let neg = c.cmp0() == Ordering::Less;
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
