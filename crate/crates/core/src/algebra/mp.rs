//! Multi-precision complex helpers. Every function takes its working
//! precision explicitly; nothing reads a global default.

use rug::float::Round;
use rug::{Complex, Float, Integer};

use super::poly::UniPolyZ;

/// Precision used for error bounds and magnitudes: only the exponent matters.
pub const BOUND_PREC: u32 = 64;

pub type PrecComplex = Complex;

pub fn bound(v: f64) -> Float {
    Float::with_val(BOUND_PREC, v)
}

/// `2^e` as a bound-precision float (exponent may be far outside f64 range).
pub fn pow2(e: i64) -> Float {
    let one = Float::with_val(BOUND_PREC, 1);
    if e >= 0 {
        one << (e as u32)
    } else {
        one >> ((-e) as u32)
    }
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(BOUND_PREC, z.abs_ref())
}

/// `|z|` rounded up, so it is safe to use in upper bounds.
pub fn abs_up(z: &Complex) -> Float {
    Float::with_val_round(BOUND_PREC, z.abs_ref(), Round::Up).0
}

pub fn from_f64(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

/// Horner evaluation of an integer polynomial and its derivative at `z`.
pub fn eval_with_derivative(p: &UniPolyZ, z: &Complex, prec: u32) -> (Complex, Complex) {
    let mut v = Complex::new(prec);
    let mut dv = Complex::new(prec);
    for c in p.coeffs().iter().rev() {
        dv *= z;
        dv += &v;
        v *= z;
        v += c;
    }
    (v, dv)
}

pub fn eval(p: &UniPolyZ, z: &Complex, prec: u32) -> Complex {
    let mut v = Complex::new(prec);
    for c in p.coeffs().iter().rev() {
        v *= z;
        v += c;
    }
    v
}

/// Value, first and second derivative.
pub fn eval2(p: &UniPolyZ, z: &Complex, prec: u32) -> (Complex, Complex, Complex) {
    let mut v = Complex::new(prec);
    let mut d1 = Complex::new(prec);
    let mut d2 = Complex::new(prec);
    for c in p.coeffs().iter().rev() {
        d2 *= z;
        d2 += &d1;
        d1 *= z;
        d1 += &v;
        v *= z;
        v += c;
    }
    d2 *= 2;
    (v, d1, d2)
}

/// `Σ |c_k| |z|^k`, the magnitude scale of Horner rounding errors at `z`.
pub fn abs_eval(p: &UniPolyZ, z: &Complex) -> Float {
    let r = abs_up(z);
    let mut acc = Float::new(BOUND_PREC);
    for c in p.coeffs().iter().rev() {
        acc *= &r;
        acc += Float::with_val(BOUND_PREC, c).abs();
    }
    acc
}

/// Euclidean norm of an integer coefficient vector.
pub fn norm2(p: &UniPolyZ) -> Float {
    Float::with_val(BOUND_PREC, p.norm2_sq()).sqrt()
}

/// `log2(max(1, |v|))` rounded up to an integer.
pub fn log2_ceil_at_least_one(v: &Float) -> u32 {
    if *v <= 1 {
        return 0;
    }
    v.get_exp().map_or(0, |e| e.max(0) as u32)
}

/// Nearest integer to a real float (ties away from zero).
pub fn round_to_integer(v: &Float) -> Integer {
    v.to_integer_round(Round::Nearest).map(|(i, _)| i).unwrap_or_default()
}

pub fn bits_of(i: &Integer) -> u32 {
    i.significant_bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_direct() {
        let p = UniPolyZ::from_i64(&[1, -3, 0, 2]);
        let z = from_f64(128, 0.5, -1.25);
        let (v, d) = eval_with_derivative(&p, &z, 128);
        let zc = num_complex::Complex64::new(0.5, -1.25);
        let ve = 1.0 - 3.0 * zc + 2.0 * zc * zc * zc;
        let de = -3.0 + 6.0 * zc * zc;
        assert!((v.real().to_f64() - ve.re).abs() < 1e-12);
        assert!((v.imag().to_f64() - ve.im).abs() < 1e-12);
        assert!((d.real().to_f64() - de.re).abs() < 1e-12);
        assert!((d.imag().to_f64() - de.im).abs() < 1e-12);
        let (_, _, d2) = eval2(&p, &z, 128);
        let d2e = 12.0 * zc;
        assert!((d2.real().to_f64() - d2e.re).abs() < 1e-12);
    }

    #[test]
    fn pow2_outside_f64_range() {
        let tiny = pow2(-5000);
        assert!(tiny > 0);
        assert_eq!(tiny.get_exp(), Some(-4999));
    }
}
