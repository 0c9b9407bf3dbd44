//! Arithmetic classification of located zeros.
//!
//! A zero `z` of a form with rational q-expansion is *CM* when it is an
//! imaginary quadratic irrationality; every other algebraic candidate is
//! ruled out by the theory, so a point with no small integral quadratic
//! relation is reported as a transcendental candidate.  The classifier
//! searches for a relation `a z² + b z + c ≈ 0` with a recognition lattice
//! (coefficients bounded by [`RecognitionBounds::max_quad_height`]) and
//! accepts it only after exact re-evaluation at working precision.
//!
//! A recognized quadratic point is then corroborated through its modular
//! invariant: `j(z)` must be an algebraic integer of degree equal to the
//! form class number of the discriminant.  Three levels of evidence are
//! produced, strongest first:
//!
//! * [`JEvidence::Integer`] — class number one, `j(z)` snaps to an integer;
//! * [`JEvidence::MinimalPolynomial`] — a monic integer polynomial of the
//!   exact class-number degree recovered by lattice reduction from the
//!   numerical value alone, within the height bound;
//! * [`JEvidence::ClassPolynomial`] — for discriminants whose polynomial
//!   exceeds the recognition height, the polynomial is constructed
//!   numerically as `∏ (x − j(τ_i))` over all reduced forms at a precision
//!   scaled to its coefficient size, its coefficients are verified to snap
//!   to integers, and `j(z)` is matched against one of the roots.
//!
//! Failure of corroboration yields [`Verdict::Unresolved`] rather than a
//! guess.  [`integrality_certificate`] grades the hypotheses under which
//! every non-CM zero of a form is guaranteed transcendental: it inspects
//! the integrality of the form's polynomial in the j-function.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rug::{Complex, Float};

use crate::cm::{self, QuadraticForm};
use crate::forms::jfunction;
use crate::hp;
use crate::jpoly::{extract_pf, integrality_report, JPolyError};
use crate::lattice::lll_reduce;
use crate::locator::{suggested_truncation, PreparedForm};
use crate::qseries::QSeries;

/// Search bounds for algebraicity recognition.
#[derive(Debug, Clone, Copy)]
pub struct RecognitionBounds {
    /// Largest class number for which a minimal polynomial is attempted.
    pub max_poly_degree: usize,
    /// Height bound 10^n on recognized polynomial coefficients.
    pub max_poly_height_pow10: u32,
    /// Height bound on quadratic relation coefficients.
    pub max_quad_height: i64,
}

impl Default for RecognitionBounds {
    fn default() -> Self {
        RecognitionBounds {
            max_poly_degree: 8,
            max_poly_height_pow10: 40,
            max_quad_height: 1_000_000,
        }
    }
}

/// Corroborating evidence that the modular invariant of a recognized point
/// is the algebraic integer the discriminant predicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JEvidence {
    /// `j(z)` is a rational integer (class number one).
    Integer(BigInt),
    /// Monic integer minimal polynomial of `j(z)`, ascending coefficients,
    /// of degree equal to the class number.
    MinimalPolynomial(Vec<BigInt>),
    /// The full class polynomial, constructed numerically from all reduced
    /// forms and integer-snapped; ascending coefficients, monic.
    ClassPolynomial(Vec<BigInt>),
}

/// The classification of a located zero.
#[derive(Debug, Clone)]
pub enum Verdict {
    /// An imaginary quadratic point: the primitive integral form vanishing
    /// at it, with corroboration through the modular invariant.
    Cm { disc: i64, form: QuadraticForm, evidence: JEvidence },
    /// No integral quadratic relation within the stated height passed
    /// verification at the stated precision.
    TranscendentalCandidate { quad_height: i64, prec: u32 },
    /// A quadratic relation was found but the invariant could not be
    /// corroborated; the reason is reported verbatim.
    Unresolved { reason: String },
}

/// Recognizes and corroborates CM points at a fixed working precision.
pub struct Classifier {
    prec: u32,
    bounds: RecognitionBounds,
    j_prepared: PreparedForm,
}

impl Classifier {
    /// A classifier at `prec` bits with default bounds.  The j-function is
    /// expanded once, deep enough for points in the classical fundamental
    /// domain (inputs are reduced there before the invariant is computed).
    pub fn new(prec: u32) -> Classifier {
        Classifier::with_bounds(prec, RecognitionBounds::default())
    }

    pub fn with_bounds(prec: u32, bounds: RecognitionBounds) -> Classifier {
        let j = jfunction(suggested_truncation(prec, 0.8, 12));
        Classifier { prec, bounds, j_prepared: PreparedForm::new(&j, prec) }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Searches for a primitive integral quadratic `a z² + b z + c = 0`
    /// with negative discriminant and coefficients within the height bound.
    /// A lattice candidate is accepted only if the relation re-evaluates
    /// below `2^(−P/2+8)` relative to its own term magnitudes.
    pub fn recognize_quadratic(&self, z: &Complex) -> Option<QuadraticForm> {
        let prec = self.prec;
        let shift = prec / 2;
        let z2 = Complex::with_val(prec, z * z);
        let powers = [Complex::with_val(prec, 1), Complex::with_val(prec, z), z2];

        let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(3);
        for (i, p) in powers.iter().enumerate() {
            let mut row = vec![BigInt::zero(); 5];
            row[i] = BigInt::one();
            row[3] = hp::scaled_round(p.real(), shift);
            row[4] = hp::scaled_round(p.imag(), shift);
            basis.push(row);
        }
        lll_reduce(&mut basis);

        for row in &basis {
            let Ok(c) = i64::try_from(&row[0]) else { continue };
            let Ok(b) = i64::try_from(&row[1]) else { continue };
            let Ok(a) = i64::try_from(&row[2]) else { continue };
            if a == 0 {
                continue;
            }
            let height = a.abs().max(b.abs()).max(c.abs());
            if height > self.bounds.max_quad_height {
                continue;
            }
            // Exact re-evaluation of the candidate relation.
            let v = Complex::with_val(prec, &powers[2] * a)
                + Complex::with_val(prec, &powers[1] * b)
                + Float::with_val(prec, c);
            let scale = Float::with_val(prec, powers[2].abs_ref()) * a.unsigned_abs()
                + Float::with_val(prec, powers[1].abs_ref()) * b.unsigned_abs()
                + Float::with_val(prec, c.unsigned_abs());
            if scale.is_zero() {
                continue;
            }
            let tol = scale * (Float::with_val(prec, 1) >> (shift - 8));
            if Float::with_val(prec, v.abs_ref()) >= tol {
                continue;
            }
            let (a, b, c) = if a < 0 { (-a, -b, -c) } else { (a, b, c) };
            let g = gcd3(a, b, c);
            if let Ok(form) = QuadraticForm::new(a / g, b / g, c / g) {
                return Some(form);
            }
        }
        None
    }

    /// Classifies a point: CM with evidence, transcendental candidate, or
    /// unresolved.
    pub fn classify_zero(&self, z: &Complex) -> Verdict {
        let Some(form) = self.recognize_quadratic(z) else {
            return Verdict::TranscendentalCandidate {
                quad_height: self.bounds.max_quad_height,
                prec: self.prec,
            };
        };
        let disc = form.discriminant();
        match self.j_evidence(disc, z) {
            Ok(evidence) => Verdict::Cm { disc, form, evidence },
            Err(reason) => Verdict::Unresolved { reason },
        }
    }

    /// Corroborates the recognized discriminant through `j(z)`.
    fn j_evidence(&self, disc: i64, z: &Complex) -> Result<JEvidence, String> {
        let prec = self.prec;
        let forms = cm::reduced_forms(disc).map_err(|e| e.to_string())?;
        let h = forms.len();
        let (w, _) = cm::reduce_to_fundamental_domain(z, prec).map_err(|e| e.to_string())?;
        let jz = self.j_prepared.eval(&w).map_err(|e| e.to_string())?;

        let j_scale = Float::with_val(prec, jz.abs_ref()).max(&Float::with_val(prec, 1));
        let real_tol = Float::with_val(prec, &j_scale) * (Float::with_val(prec, 1) >> (prec / 4));
        if Float::with_val(prec, jz.imag().abs_ref()) < real_tol {
            let x = jz.real();
            if h == 1 {
                if let Some(n) = self.recognize_integer(x) {
                    return Ok(JEvidence::Integer(n));
                }
            } else if h <= self.bounds.max_poly_degree {
                if let Some(coeffs) = self.monic_minpoly(x, h) {
                    return Ok(JEvidence::MinimalPolynomial(coeffs));
                }
            }
        }
        self.class_polynomial_evidence(disc, &forms, &jz)
    }

    /// Snaps a real value to a rational integer within `2^(−P/2+8)` of its
    /// own magnitude.
    fn recognize_integer(&self, x: &Float) -> Option<BigInt> {
        let prec = self.prec;
        let n = hp::scaled_round(x, 0);
        let nf = Float::with_val(prec, hp::to_rug_integer(&n));
        let err = Float::with_val(prec, x - &nf).abs();
        let scale = Float::with_val(prec, x.abs_ref()).max(&Float::with_val(prec, 1));
        if err < scale * (Float::with_val(prec, 1) >> (prec / 2 - 8)) {
            Some(n)
        } else {
            None
        }
    }

    /// Attempts a monic integer polynomial of degree exactly `deg`
    /// vanishing at `x`, within the height bound, via lattice reduction.
    fn monic_minpoly(&self, x: &Float, deg: usize) -> Option<Vec<BigInt>> {
        let prec = self.prec;
        let shift = prec / 2;
        let n = deg + 1;
        let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        let mut pw = Float::with_val(prec, 1);
        for i in 0..n {
            let mut row = vec![BigInt::zero(); n + 1];
            row[i] = BigInt::one();
            row[n] = hp::scaled_round(&pw, shift);
            basis.push(row);
            pw *= x;
        }
        lll_reduce(&mut basis);

        let height_cap = BigInt::from(10).pow(self.bounds.max_poly_height_pow10);
        'rows: for row in &basis {
            let coeffs = &row[..n];
            if coeffs[deg].abs() != BigInt::one() {
                continue;
            }
            for c in coeffs {
                if c.abs() > height_cap {
                    continue 'rows;
                }
            }
            // Exact re-evaluation.
            let mut acc = Float::with_val(prec, 0);
            let mut scale = Float::with_val(prec, 0);
            let mut pw = Float::with_val(prec, 1);
            for c in coeffs {
                let cf = Float::with_val(prec, hp::to_rug_integer(c));
                acc += Float::with_val(prec, &cf * &pw);
                scale += Float::with_val(prec, cf.abs_ref()) * Float::with_val(prec, pw.abs_ref());
                pw *= x;
            }
            if scale.is_zero() || acc.abs() >= scale * (Float::with_val(prec, 1) >> (shift - 8)) {
                continue;
            }
            let mut out = coeffs.to_vec();
            if out[deg].is_negative() {
                for c in &mut out {
                    *c = -&*c;
                }
            }
            return Some(out);
        }
        None
    }

    /// Constructs the class polynomial of the discriminant numerically at a
    /// precision scaled to its coefficient size, snaps the coefficients to
    /// integers, and matches `j(z)` against one of its roots.
    fn class_polynomial_evidence(
        &self,
        disc: i64,
        forms: &[QuadraticForm],
        jz: &Complex,
    ) -> Result<JEvidence, String> {
        use std::f64::consts::{LN_2, PI};
        let sqrt_d = (disc.unsigned_abs() as f64).sqrt();
        let sum_inv_a: f64 = forms.iter().map(|f| 1.0 / f.a as f64).sum();
        let prec_cp = ((PI * sqrt_d * sum_inv_a) / LN_2).ceil() as u32 + 96;
        let j_hi = PreparedForm::new(&jfunction(suggested_truncation(prec_cp, 0.85, 12)), prec_cp);

        let mut roots: Vec<Complex> = Vec::with_capacity(forms.len());
        for f in forms {
            let tau = f.root(prec_cp);
            roots.push(j_hi.eval(&tau).map_err(|e| format!("class polynomial root: {e}"))?);
        }

        // ∏ (x − j(τ_i)), ascending coefficients.
        let mut coeffs = vec![Complex::with_val(prec_cp, 1)];
        for r in &roots {
            let mut next = vec![Complex::with_val(prec_cp, 0); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= Complex::with_val(prec_cp, r * c);
            }
            coeffs = next;
        }

        let mut int_coeffs: Vec<BigInt> = Vec::with_capacity(coeffs.len());
        for c in coeffs.iter() {
            let snapped = hp::scaled_round(c.real(), 0);
            let sf = Float::with_val(prec_cp, hp::to_rug_integer(&snapped));
            let err = Float::with_val(prec_cp, c.real() - &sf).abs()
                + Float::with_val(prec_cp, c.imag().abs_ref());
            let scale = Float::with_val(prec_cp, c.real().abs_ref())
                .max(&Float::with_val(prec_cp, 1));
            if err > scale * 1e-10f64 {
                return Err(format!(
                    "class polynomial coefficient for discriminant {disc} did not settle to an integer"
                ));
            }
            int_coeffs.push(snapped);
        }

        let tol = Float::with_val(self.prec, jz.abs_ref()).max(&Float::with_val(self.prec, 1))
            * (Float::with_val(self.prec, 1) >> (self.prec / 4));
        let matched = roots.iter().any(|r| {
            let d = Complex::with_val(self.prec, r) - jz;
            Float::with_val(self.prec, d.abs_ref()) < tol
        });
        if !matched {
            return Err(format!(
                "numerical invariant does not match any root of the discriminant-{disc} class polynomial"
            ));
        }
        Ok(JEvidence::ClassPolynomial(int_coeffs))
    }
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    fn gcd(x: i64, y: i64) -> i64 {
        if y == 0 { x.abs() } else { gcd(y, x % y) }
    }
    gcd(gcd(a, b), c)
}

/// How strongly the integrality hypotheses hold for a form written as
/// `Δ^m · P(j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateOutcome {
    /// Every coefficient of `P` is a rational integer.
    AllIntegral,
    /// The leading coefficient of `P` is an integer (some later one is
    /// not): non-CM zeros are still guaranteed transcendental.
    Guaranteed,
    /// The leading coefficient is not an integer; the criterion does not
    /// apply.
    HypothesesNotMet,
}

/// The graded certificate for a form, with the shape of its j-polynomial.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub outcome: CertificateOutcome,
    pub degree: usize,
    pub weight: i64,
    /// Indices (ascending powers) of non-integral coefficients.
    pub offending_indices: Vec<usize>,
}

/// Reduces `f` to its polynomial in the j-function and grades the
/// integrality hypotheses of the transcendence criterion.
pub fn integrality_certificate(f: &QSeries, weight: i64) -> Result<CertificateReport, JPolyError> {
    let p = extract_pf(f, weight)?;
    let report = integrality_report(&p);
    let outcome = if report.all_integral {
        CertificateOutcome::AllIntegral
    } else if report.leading_is_integer {
        CertificateOutcome::Guaranteed
    } else {
        CertificateOutcome::HypothesesNotMet
    };
    Ok(CertificateReport {
        outcome,
        degree: p.degree(),
        weight,
        offending_indices: report.offending_indices,
    })
}
