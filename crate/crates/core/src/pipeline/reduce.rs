//! Splitting an input into content, monomial, univariate and square-free
//! bivariate parts.

use rug::Integer;

use crate::algebra::{exact_divide, gcd_bivariate, squarefree_decompose, BivarPolyZ, Var};
use crate::error::{Error, Result};

/// An input split into independently factorable pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduced {
    /// Integer content, signed so every other piece has positive leading
    /// coefficient.
    pub content: Integer,
    /// Exponents `(a, b)` of the monomial factor `x^a y^b`.
    pub monomial: (u32, u32),
    /// Square-free primitive parts in a single variable.
    pub univariate: Vec<(BivarPolyZ, usize)>,
    /// Square-free primitive parts involving both variables, with no factor
    /// in a single variable.
    pub parts: Vec<(BivarPolyZ, usize)>,
}

fn strip_monomial(f: &BivarPolyZ) -> ((u32, u32), BivarPolyZ) {
    let a = f.terms().keys().map(|&(i, _)| i).min().unwrap_or(0);
    let b = f.terms().keys().map(|&(_, j)| j).min().unwrap_or(0);
    let rest = BivarPolyZ::from_terms(f.terms().iter().map(|(&(i, j), c)| ((i - a, j - b), c.clone())));
    ((a, b), rest)
}

pub fn reduce_input(f: &BivarPolyZ) -> Result<Reduced> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (content, pp) = f.content_primitive()?;
    let (monomial, rest) = strip_monomial(&pp);
    let mut univariate = Vec::new();
    let mut parts = Vec::new();
    if !rest.is_constant() {
        for (s, k) in squarefree_decompose(&rest)? {
            if s.is_constant() {
                continue;
            }
            if !(s.involves(Var::X) && s.involves(Var::Y)) {
                univariate.push((s, k));
                continue;
            }
            // for square-free s, gcd(s, ∂s/∂x) collects the factors free of x
            let y_only = gcd_bivariate(&s, &s.derivative(Var::X));
            let x_only = gcd_bivariate(&s, &s.derivative(Var::Y));
            let mut core = s;
            for g in [&y_only, &x_only] {
                if !g.is_constant() {
                    core = exact_divide(&core, g)?.quotient;
                    univariate.push((g.clone(), k));
                }
            }
            if !core.is_constant() {
                parts.push((core, k));
            }
        }
    }
    Ok(Reduced { content, monomial, univariate, parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::parse_poly;

    fn p(s: &str) -> BivarPolyZ {
        parse_poly(s).unwrap()
    }

    #[test]
    fn content_monomial_and_square() {
        let r = reduce_input(&p("6*x*(x*y-2)^2")).unwrap();
        assert_eq!(r.content, 6);
        assert_eq!(r.monomial, (1, 0));
        assert!(r.univariate.is_empty());
        assert_eq!(r.parts, vec![(p("x*y-2"), 2)]);
    }

    #[test]
    fn square_free_product_untouched() {
        let f = p("(x*y-2)*(x^2+y^2-1)");
        let r = reduce_input(&f).unwrap();
        assert_eq!(r.content, 1);
        assert_eq!(r.parts, vec![(f, 1)]);
    }

    #[test]
    fn univariate_factor_split_off() {
        let r = reduce_input(&p("(y^2-2)*(x*y-2)")).unwrap();
        assert_eq!(r.univariate, vec![(p("y^2-2"), 1)]);
        assert_eq!(r.parts, vec![(p("x*y-2"), 1)]);
    }

    #[test]
    fn x_only_factor_inside_a_square_free_part() {
        let r = reduce_input(&p("(x^2-3)*(x+y)*(x-y+1)")).unwrap();
        assert_eq!(r.univariate, vec![(p("x^2-3"), 1)]);
        assert_eq!(r.parts.len(), 1);
        assert_eq!(r.parts[0].0.degree_pair(), [2, 2]);
    }

    #[test]
    fn pure_monomial() {
        let r = reduce_input(&p("x^2*y^2")).unwrap();
        assert_eq!(r.monomial, (2, 2));
        assert!(r.parts.is_empty() && r.univariate.is_empty());
    }

    #[test]
    fn negative_content() {
        let r = reduce_input(&p("-4*x*y+8")).unwrap();
        assert_eq!(r.content, -4);
        assert_eq!(r.parts, vec![(p("x*y-2"), 1)]);
    }
}
