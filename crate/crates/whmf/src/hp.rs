//! Bridges between the exact rational world and arbitrary-precision floats.
//!
//! Everything numerical downstream (zero location, contour integration, lattice
//! recognition) works in [`rug`] floats and complexes at an explicit precision.
//! This module keeps all the conversions in one place — exact `BigInt`/
//! `BigRational` into `rug` values, scaled rounding back out — together with the
//! nome map and a deterministic fixed-point decimal renderer for reports.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use rug::float::Constant;
use rug::integer::Order;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

/// Exact conversion of a `BigInt` into a `rug::Integer`.
pub fn to_rug_integer(x: &BigInt) -> Integer {
    let (sign, bytes) = x.to_bytes_le();
    let mut out = Integer::from_digits(&bytes, Order::Lsf);
    if sign == Sign::Minus {
        out = -out;
    }
    out
}

/// Exact conversion of a `rug::Integer` into a `BigInt`.
pub fn from_rug_integer(x: &Integer) -> BigInt {
    let mut bytes = vec![0u8; x.significant_digits::<u8>()];
    x.write_digits(&mut bytes, Order::Lsf);
    let sign = match x.cmp0() {
        std::cmp::Ordering::Less => Sign::Minus,
        std::cmp::Ordering::Equal => Sign::NoSign,
        std::cmp::Ordering::Greater => Sign::Plus,
    };
    BigInt::from_bytes_le(sign, &bytes)
}

/// Exact conversion of a `BigRational` into a `rug::Rational`.
pub fn to_rug_rational(x: &BigRational) -> Rational {
    Rational::from((to_rug_integer(x.numer()), to_rug_integer(x.denom())))
}

/// A `BigRational` correctly rounded to a float of the given precision.
pub fn float_of(x: &BigRational, prec: u32) -> Float {
    Float::with_val(prec, to_rug_rational(x))
}

/// A complex value at the given precision from f64 parts (used for coarse seeds
/// only; exact quantities go through the rational conversions).
pub fn complex_of(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

/// π at the given precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// e^{2πi z / r}: the nome adapted to ramification index r, so a term q^{m/r}
/// evaluates as this value to the integer power m. Computed through sin/cos of
/// the real part and a real exponential of the imaginary part, which is entire
/// in z — no branch cut is ever consulted.
pub fn nome(z: &Complex, r: i64, prec: u32) -> Complex {
    let scale = pi(prec) * 2u32 / Float::with_val(prec, r);
    let angle = Float::with_val(prec, z.real() * &scale);
    let decay = Float::with_val(prec, z.imag() * &scale);
    let radius = (-decay).exp();
    let (sin, cos) = angle.sin_cos(Float::new(prec));
    Complex::with_val(prec, (cos * &radius, sin * &radius))
}

/// round(x · 2^bits) as an exact integer — the scaling step feeding the
/// recognition lattice.
pub fn scaled_round(x: &Float, bits: u32) -> BigInt {
    let scaled = Float::with_val(x.prec() + bits + 8, x << bits);
    let rounded = scaled.to_integer().expect("scaled_round: non-finite float");
    from_rug_integer(&rounded)
}

/// Renders a float as a fixed-point decimal with exactly `frac_digits` digits
/// after the point, rounding to nearest. Deterministic: the same value and
/// digit count always produce identical bytes.
pub fn format_decimal(x: &Float, frac_digits: usize) -> String {
    let scale = Integer::from(10u32).pow(frac_digits as u32);
    let scale = Integer::from(scale);
    let scaled = Float::with_val(x.prec() + 64, x * &scale);
    let rounded = scaled.to_integer().expect("format_decimal: non-finite float");
    let neg = rounded.cmp0() == std::cmp::Ordering::Less;
    let mut digits = rounded.abs().to_string();
    if digits.len() <= frac_digits {
        digits = format!("{}{}", "0".repeat(frac_digits + 1 - digits.len()), digits);
    }
    let point = digits.len() - frac_digits;
    let (int_part, frac_part) = digits.split_at(point);
    let body = if frac_digits == 0 {
        int_part.to_string()
    } else {
        format!("{}.{}", int_part, frac_part)
    };
    if neg && body.bytes().any(|b| b.is_ascii_digit() && b != b'0') {
        format!("-{}", body)
    } else {
        body
    }
}

/// Renders a complex value as `re+im*i` / `re-im*i` with fixed-point parts.
pub fn format_complex(z: &Complex, frac_digits: usize) -> String {
    let re = format_decimal(z.real(), frac_digits);
    let im = format_decimal(z.imag(), frac_digits);
    if let Some(mag) = im.strip_prefix('-') {
        format!("{}-{}i", re, mag)
    } else {
        format!("{}+{}i", re, im)
    }
}
