//! Reduction of weakly holomorphic forms to polynomials in `J`.
//!
//! A weakly holomorphic form `f` of even weight `k` with rational
//! coefficients determines a unique polynomial `P_f` with
//! `f = P_f(J) · Δ^{k/12}` when `12 | k`, and more generally
//! `f^{12} = P_f(J) · Δ^k`.  [`extract_pf`] computes `P_f` by leading-term
//! elimination against powers of `J` and certifies the result by
//! re-substitution up to the available truncation, so a claimed weight that
//! does not match the series is detected rather than silently accepted.
//!
//! The second route raises `f` to the 12th power, which multiplies contents:
//! `P_{f^{12}}` has integral coefficients exactly when a 12th power worth of
//! content is integral, so integrality statements transfer faithfully in
//! both directions.  [`integrality_report`] inspects the coefficients and
//! [`equivalent`] decides projective equivalence `f^{k₂/g} = λ · g^{k₁/g}`
//! of two forms of weights k₁, k₂ with g = gcd(k₁, k₂).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rug::Complex;

use crate::forms::{delta, jfunction};
use crate::hp;
use crate::qseries::{Expo, QSeries, SeriesError};

/// Errors from polynomial extraction and equivalence testing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JPolyError {
    /// Only even weights occur for the forms handled here.
    #[error("weight {0} is odd; only even weights are supported")]
    OddWeight(i64),
    /// The series has fractional exponents and is not a level-1 expansion.
    #[error("series has ramified exponents; a level-1 integer-power expansion is required")]
    FractionalExponents,
    /// The truncation is too short to determine and certify the polynomial.
    #[error("truncation too short: coefficients through q^{required} are needed")]
    InsufficientTruncation { required: Expo },
    /// No polynomial in J reproduces the series at the claimed weight.
    #[error("series is not P(J)·Δ^(k/12) for the claimed weight: {0}")]
    NotPolynomial(String),
    /// An underlying series operation failed.
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A polynomial `P_f` in `J` attached to a form of weight `weight`.
///
/// `coeffs[m]` is the coefficient of `J^m`; the top coefficient is nonzero.
/// `n0` records the order of vanishing at the cusp of the source series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JPolynomial {
    pub coeffs: Vec<BigRational>,
    pub weight: i64,
    pub n0: Expo,
}

impl JPolynomial {
    /// Degree of the polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// JSON rendering `{"weight": k, "coeffs": ["c0", …, "cd"]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "weight": self.weight,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Extracts the polynomial `P_f` from the expansion of a weight-`k` form.
///
/// For `12 | k` the quotient `g = f / Δ^{k/12}` is a weight-0 function and
/// `P_f` has degree `k/12 − n₀`; otherwise `g = f^{12} / Δ^k` is used and the
/// degree is `k − 12·n₀`.  In both cases `g` must be a Laurent polynomial in
/// `J`, which is verified by eliminating leading terms against `J^m` and
/// checking that the residual vanishes identically up to the truncation.
pub fn extract_pf(f: &QSeries, k: i64) -> Result<JPolynomial, JPolyError> {
    if k % 2 != 0 {
        return Err(JPolyError::OddWeight(k));
    }
    if f.ramification() != 1 {
        return Err(JPolyError::FractionalExponents);
    }
    let n0 = f.valuation().ok_or_else(|| {
        JPolyError::NotPolynomial("the zero series determines no polynomial".into())
    })?;

    // Generous internal truncation for Δ: the budget below makes the
    // quotient's truncation limited only by the information in f.
    let slack = Expo::from_integer(k.abs() + 4);
    let g = if k % 12 == 0 {
        let m = k / 12;
        let dpow = delta(f.truncation() + slack).pow(m)?;
        f.div(&dpow)?
    } else {
        let f12 = f.pow(12)?;
        let dpow = delta(f12.truncation() + slack).pow(k)?;
        f12.div(&dpow)?
    };

    let cert = g.truncation();
    if cert < Expo::from_integer(2) {
        let deficit = Expo::from_integer(2) - cert;
        return Err(JPolyError::InsufficientTruncation {
            required: f.truncation() + deficit,
        });
    }

    let gval = match g.valuation() {
        Some(v) => v,
        None => {
            // g vanishes identically to its truncation; with f nonzero this
            // means the weight claim is inconsistent with the series.
            return Err(JPolyError::NotPolynomial(
                "quotient by the Δ-power vanishes to the available order".into(),
            ));
        }
    };
    if gval > Expo::zero() {
        return Err(JPolyError::NotPolynomial(
            "quotient by the Δ-power vanishes at the cusp".into(),
        ));
    }
    debug_assert!(gval.is_integer());
    let d = (-gval.to_integer()) as usize;

    // Powers of J through J^d, each accurate past the certification window.
    let jt = cert + Expo::from_integer(d as i64 + 1);
    let j = jfunction(jt);
    let mut jpow: Vec<QSeries> = Vec::with_capacity(d + 1);
    jpow.push(QSeries::one(jt + Expo::from_integer(d as i64)));
    for _ in 0..d {
        let last = jpow.last().expect("nonempty");
        jpow.push(last.mul(&j));
    }

    let mut residual = g;
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for m in (0..=d).rev() {
        let c = residual.coeff(Expo::from_integer(-(m as i64)));
        if !c.is_zero() {
            residual = residual.sub(&jpow[m].scalar_mul(&c));
            coeffs[m] = c;
        }
    }
    if !residual.is_zero() {
        return Err(JPolyError::NotPolynomial(format!(
            "re-substitution leaves a residual starting at q^{}",
            residual.valuation().expect("nonzero residual")
        )));
    }
    debug_assert!(!coeffs[d].is_zero());
    Ok(JPolynomial { coeffs, weight: k, n0 })
}

/// Evaluates `P(x)` by Horner's rule at the precision carried by `x`.
pub fn evaluate_pf(p: &JPolynomial, x: &Complex) -> Complex {
    let prec = x.prec().0;
    let mut acc = Complex::with_val(prec, 0);
    for c in p.coeffs.iter().rev() {
        acc *= x;
        acc += hp::float_of(c, prec);
    }
    acc
}

/// Integrality facts about the coefficients of a [`JPolynomial`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityReport {
    /// The top coefficient is ±1.
    pub leading_is_unit_integer: bool,
    /// The top coefficient is a (nonzero) rational integer.
    pub leading_is_integer: bool,
    /// Every coefficient is a rational integer.
    pub all_integral: bool,
    /// Indices of non-integral coefficients, ascending.
    pub offending_indices: Vec<usize>,
}

/// Reports which coefficients of `P` are integers and whether the leading
/// coefficient is an integer or a unit.
pub fn integrality_report(p: &JPolynomial) -> IntegralityReport {
    let offending: Vec<usize> = p
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_integer())
        .map(|(i, _)| i)
        .collect();
    let lead = &p.coeffs[p.degree()];
    let leading_is_integer = lead.is_integer();
    let leading_is_unit_integer = leading_is_integer && lead.numer().abs() == BigInt::one();
    IntegralityReport {
        leading_is_unit_integer,
        leading_is_integer,
        all_integral: offending.is_empty(),
        offending_indices: offending,
    }
}

/// Outcome of [`equivalent`]: either the scalar relating the matched powers
/// or a witness that no scalar exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    /// `f^{exp_f} = lambda · g^{exp_g}`.
    Equivalent { lambda: BigRational, exp_f: u32, exp_g: u32 },
    Inequivalent,
}

/// Decides whether nonzero powers of `f` (weight `k1`) and `g` (weight `k2`)
/// agree up to a scalar: with `g₀ = gcd(|k1|, |k2|)` it tests
/// `f^{|k2|/g₀} = λ · g^{|k1|/g₀}`, the minimal exponents compatible with the
/// weights.  Weight-0 pairs are compared directly (`exponents (1, 1)`).
///
/// At least 8 coefficients beyond the common valuation must be available on
/// both sides; fewer give [`JPolyError::InsufficientTruncation`].
pub fn equivalent(
    f: &QSeries,
    k1: i64,
    g: &QSeries,
    k2: i64,
) -> Result<Equivalence, JPolyError> {
    if f.ramification() != 1 || g.ramification() != 1 {
        return Err(JPolyError::FractionalExponents);
    }
    match (f.is_zero(), g.is_zero()) {
        (true, true) => {
            return Ok(Equivalence::Equivalent {
                lambda: BigRational::one(),
                exp_f: 1,
                exp_g: 1,
            })
        }
        (true, false) | (false, true) => return Ok(Equivalence::Inequivalent),
        _ => {}
    }
    if (k1 > 0 && k2 < 0) || (k1 < 0 && k2 > 0) {
        // Natural powers cannot balance weights of opposite sign.
        return Ok(Equivalence::Inequivalent);
    }

    let (exp_f, exp_g) = if k1 == 0 && k2 == 0 {
        (1u32, 1u32)
    } else {
        let g0 = gcd_i64(k1.abs(), k2.abs());
        ((k2.abs() / g0) as u32, (k1.abs() / g0) as u32)
    };

    let fp = f.pow(i64::from(exp_f))?;
    let gp = g.pow(i64::from(exp_g))?;
    let (vf, vg) = (
        fp.valuation().expect("nonzero power"),
        gp.valuation().expect("nonzero power"),
    );
    if vf != vg {
        return Ok(Equivalence::Inequivalent);
    }
    let trunc = fp.truncation().min(gp.truncation());
    if trunc - vf < Expo::from_integer(8) {
        return Err(JPolyError::InsufficientTruncation {
            required: vf + Expo::from_integer(8),
        });
    }
    let lambda = fp.coeff(vf) / gp.coeff(vg);
    let diff = fp.truncated(trunc).sub(&gp.scalar_mul(&lambda).truncated(trunc));
    if diff.is_zero() {
        Ok(Equivalence::Equivalent { lambda, exp_f, exp_g })
    } else {
        Ok(Equivalence::Inequivalent)
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd_i64(b, a % b)
    }
}
