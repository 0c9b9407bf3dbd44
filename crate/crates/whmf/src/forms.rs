//! Symbolic expressions for weakly holomorphic modular forms and their exact
//! q-expansions.
//!
//! A [`FormExpr`] is a small algebraic tree over a fixed set of generators:
//! the Eisenstein series `E_k` (k ≥ 4 even) and `E_2`, their rescalings
//! `E_k(pz)`, the discriminant `Δ` and `Δ(pz)`, and the modular function
//! `J = E_4^3/Δ`.  Sums must combine terms of equal weight, products add
//! weights, and negative powers are restricted to expressions that are
//! nonvanishing away from the cusp (products of `Δ`, `Δ(pz)` and nonzero
//! constants), so every valid tree denotes a weakly holomorphic form.
//!
//! [`expand`] turns a tree into a truncated [`QSeries`].  Internal
//! truncations are budgeted with a retry pass, so the requested order is
//! always reached even though division and negative powers lose terms.
//!
//! For level p the module also provides the right coset representatives of
//! Γ₀(p) in SL₂(ℤ), expansion of a form slashed by a representative
//! ([`slash_expand`], which produces series in q^{1/p}), and the symmetrized
//! product over all p+1 cosets ([`coset_product`]), whose expansion is again
//! a series in integer powers of q with rational coefficients.  The twisted
//! coefficients that appear along the way live in ℚ(ζ_p) and are tracked
//! exactly by a private cyclotomic-series type; rationality of the final
//! product is checked, not assumed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::qseries::{bernoulli, sigma, Expo, QSeries, SeriesError};

/// Errors arising from malformed expressions or invalid slash/coset requests.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    /// Eisenstein weights must be even and at least 4.
    #[error("unsupported Eisenstein weight {0}: expected an even integer >= 4")]
    UnsupportedWeight(u32),
    /// Scaling levels must be primes (only small primes are ever needed).
    #[error("level {0} is not prime")]
    CompositeLevel(u32),
    /// Summands of different weights cannot be combined.
    #[error("sum mixes weights {0} and {1}")]
    MixedWeights(i64, i64),
    /// An expression mixes two distinct scaling levels.
    #[error("expression mixes levels {0} and {1}")]
    LevelMismatch(u32, u32),
    /// Negative powers are only defined for forms without zeros away from
    /// the cusp: products of Delta, scaled Delta and nonzero constants.
    #[error("negative power of an expression that may vanish away from the cusp")]
    NonInvertibleBase,
    /// No closed transformation rule is available (E_2 is not modular).
    #[error("no transformation rule for {0} under the requested coset")]
    UnknownTransform(String),
    /// A coset index must satisfy n < p.
    #[error("coset index {n} out of range for level {p}")]
    BadCosetIndex { n: u32, p: u32 },
    /// The requested single-coset expansion has coefficients in ℚ(ζ_p) ∖ ℚ.
    #[error("coset expansion for level {p}, index {n} has irrational coefficients")]
    IrrationalTwist { p: u32, n: u32 },
    /// The symmetrized coset product failed to collapse to a rational series
    /// in integer powers of q; this indicates a bookkeeping error upstream.
    #[error("coset product retains {what} at exponent {exponent}")]
    RamificationLeak { exponent: Expo, what: String },
    /// An underlying series operation failed.
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Symbolic expression over the modular generators.
///
/// `EkScaled(k, p)` denotes `E_k(pz)` and `DeltaScaled(p)` denotes `Δ(pz)`;
/// both have the same weight as their unscaled versions but level p.
#[derive(Debug, Clone, PartialEq)]
pub enum FormExpr {
    /// Normalized Eisenstein series `E_k`, k ≥ 4 even.
    Ek(u32),
    /// The quasimodular series `E_2`.
    E2,
    /// `E_k(pz)` for prime p.
    EkScaled(u32, u32),
    /// The discriminant cusp form `Δ`.
    Delta,
    /// `Δ(pz)` for prime p.
    DeltaScaled(u32),
    /// The modular function `J = E_4^3 / Δ` (weight 0, simple pole at ∞).
    J,
    /// A rational constant (weight 0).
    Const(BigRational),
    /// Sum of equal-weight terms.
    Sum(Vec<FormExpr>),
    /// Product; weights add, levels must agree.
    Product(Vec<FormExpr>),
    /// Integer power; negative exponents require a nonvanishing base.
    Power(Box<FormExpr>, i64),
    /// Rational multiple of a subexpression.
    Scale(BigRational, Box<FormExpr>),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn rational_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl FormExpr {
    /// Difference `a − b` as a tree.
    pub fn sub(a: FormExpr, b: FormExpr) -> FormExpr {
        FormExpr::Sum(vec![a, FormExpr::Scale(rational_int(-1), Box::new(b))])
    }

    /// The weight-k level-p Eisenstein series attached to the Fricke
    /// involution: `(p^{k/2} E_k(pz) + E_k(z)) / (p^{k/2} + 1)`.
    pub fn fricke(k: u32, p: u32) -> FormExpr {
        let pk2 = BigRational::from_integer(BigInt::from(p).pow(k / 2));
        let norm = (pk2.clone() + BigRational::one()).recip();
        FormExpr::Scale(
            norm,
            Box::new(FormExpr::Sum(vec![
                FormExpr::Scale(pk2, Box::new(FormExpr::EkScaled(k, p))),
                FormExpr::Ek(k),
            ])),
        )
    }

    /// Weight of the expression; errors on mixed-weight sums or invalid
    /// generator parameters.
    pub fn weight(&self) -> Result<i64, FormError> {
        match self {
            FormExpr::Ek(k) | FormExpr::EkScaled(k, _) => {
                if *k < 4 || k % 2 != 0 {
                    Err(FormError::UnsupportedWeight(*k))
                } else {
                    Ok(i64::from(*k))
                }
            }
            FormExpr::E2 => Ok(2),
            FormExpr::Delta | FormExpr::DeltaScaled(_) => Ok(12),
            FormExpr::J | FormExpr::Const(_) => Ok(0),
            FormExpr::Sum(parts) => {
                let mut w = None;
                for part in parts {
                    let pw = part.weight()?;
                    match w {
                        None => w = Some(pw),
                        Some(prev) if prev != pw => {
                            return Err(FormError::MixedWeights(prev, pw))
                        }
                        _ => {}
                    }
                }
                Ok(w.unwrap_or(0))
            }
            FormExpr::Product(parts) => {
                let mut w = 0;
                for part in parts {
                    w += part.weight()?;
                }
                Ok(w)
            }
            FormExpr::Power(base, e) => Ok(base.weight()? * e),
            FormExpr::Scale(_, inner) => inner.weight(),
        }
    }

    /// Level of the expression: 1 unless a scaled generator appears, in
    /// which case every scaled generator must use the same prime.
    pub fn level(&self) -> Result<u32, FormError> {
        fn merge(a: u32, b: u32) -> Result<u32, FormError> {
            match (a, b) {
                (1, x) | (x, 1) => Ok(x),
                (x, y) if x == y => Ok(x),
                (x, y) => Err(FormError::LevelMismatch(x, y)),
            }
        }
        match self {
            FormExpr::EkScaled(_, p) | FormExpr::DeltaScaled(p) => {
                if is_prime(*p) {
                    Ok(*p)
                } else {
                    Err(FormError::CompositeLevel(*p))
                }
            }
            FormExpr::Ek(_)
            | FormExpr::E2
            | FormExpr::Delta
            | FormExpr::J
            | FormExpr::Const(_) => Ok(1),
            FormExpr::Sum(parts) | FormExpr::Product(parts) => {
                let mut level = 1;
                for part in parts {
                    level = merge(level, part.level()?)?;
                }
                Ok(level)
            }
            FormExpr::Power(base, _) => base.level(),
            FormExpr::Scale(_, inner) => inner.level(),
        }
    }

    /// Whether the expression is known to be nonvanishing on the upper half
    /// plane (so that negative powers stay weakly holomorphic).  This is a
    /// conservative syntactic check: Δ, Δ(pz), nonzero constants, and
    /// products/powers/scalings thereof.
    fn nonvanishing(&self) -> bool {
        match self {
            FormExpr::Delta | FormExpr::DeltaScaled(_) => true,
            FormExpr::Const(c) => !c.is_zero(),
            FormExpr::Product(parts) => parts.iter().all(FormExpr::nonvanishing),
            FormExpr::Power(base, _) => base.nonvanishing(),
            FormExpr::Scale(c, inner) => !c.is_zero() && inner.nonvanishing(),
            _ => false,
        }
    }

    /// Validates weights, levels and invertibility constraints of the whole
    /// tree without expanding anything.
    pub fn validate(&self) -> Result<(), FormError> {
        self.weight()?;
        self.level()?;
        match self {
            FormExpr::Sum(parts) | FormExpr::Product(parts) => {
                for part in parts {
                    part.validate()?;
                }
            }
            FormExpr::Power(base, e) => {
                if *e < 0 && !base.nonvanishing() {
                    return Err(FormError::NonInvertibleBase);
                }
                base.validate()?;
            }
            FormExpr::Scale(_, inner) => inner.validate()?,
            _ => {}
        }
        Ok(())
    }
}

/// Normalized Eisenstein series `E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) q^n`
/// truncated at `trunc`; k must be even and at least 4.
pub fn eisenstein(k: u32, trunc: Expo) -> Result<QSeries, FormError> {
    if k < 4 || k % 2 != 0 {
        return Err(FormError::UnsupportedWeight(k));
    }
    Ok(eisenstein_any(k, trunc))
}

/// The quasimodular series `E_2 = 1 − 24 Σ σ_1(n) q^n`.
pub fn eisenstein2(trunc: Expo) -> QSeries {
    eisenstein_any(2, trunc)
}

fn eisenstein_any(k: u32, trunc: Expo) -> QSeries {
    let factor = -rational_int(2 * i64::from(k)) / bernoulli(k as usize);
    let mut terms: Vec<(Expo, BigRational)> = vec![(Expo::zero(), BigRational::one())];
    let mut n = 1i64;
    while Expo::from_integer(n) < trunc {
        let c = &factor * BigRational::from_integer(sigma(k - 1, n as u64));
        terms.push((Expo::from_integer(n), c));
        n += 1;
    }
    QSeries::from_terms(trunc, terms)
}

/// The discriminant `Δ = q ∏_{n≥1} (1 − q^n)^{24}` truncated at `trunc`.
pub fn delta(trunc: Expo) -> QSeries {
    // Work with the unit part ∏(1 − q^n) to one extra order, 24th-power it,
    // then shift by q.  The product over n < N is exact to order N because
    // later factors only contribute at exponents ≥ N.
    let unit_trunc = trunc - Expo::one();
    if unit_trunc <= Expo::zero() {
        return QSeries::zero(trunc);
    }
    let mut eta = QSeries::one(unit_trunc);
    let mut n = 1i64;
    while Expo::from_integer(n) < unit_trunc {
        let factor = QSeries::from_terms(
            unit_trunc,
            vec![
                (Expo::zero(), BigRational::one()),
                (Expo::from_integer(n), -BigRational::one()),
            ],
        );
        eta = eta.mul(&factor);
        n += 1;
    }
    eta.pow(24).expect("unit series").shifted(Expo::one())
}

/// The modular function `J = E_4^3 / Δ`: valuation −1, constant term 744.
pub fn jfunction(trunc: Expo) -> QSeries {
    // Division costs two orders of truncation around the valuation, so
    // expand the ingredients with slack and cut back at the end.
    let slack = trunc + Expo::from_integer(3);
    let e4 = eisenstein(4, slack).expect("weight 4 is valid");
    let num = e4.pow(3).expect("positive power");
    let den = delta(slack);
    let j = num.div(&den).expect("delta is a unit times q");
    debug_assert!(j.truncation() >= trunc);
    j.truncated(trunc)
}

/// Expansion of the Fricke–Eisenstein combination
/// `(p^{k/2} E_k(pz) + E_k(z)) / (p^{k/2} + 1)` for prime p.
pub fn fricke_eisenstein(k: u32, p: u32, trunc: Expo) -> Result<QSeries, FormError> {
    if !is_prime(p) {
        return Err(FormError::CompositeLevel(p));
    }
    expand(&FormExpr::fricke(k, p), trunc)
}

fn expand_at(expr: &FormExpr, trunc: Expo) -> Result<QSeries, FormError> {
    match expr {
        FormExpr::Ek(k) => eisenstein(*k, trunc),
        FormExpr::E2 => Ok(eisenstein2(trunc)),
        FormExpr::EkScaled(k, p) => {
            Ok(eisenstein(*k, trunc)?.substitute_q_pow(i64::from(*p)).truncated(trunc))
        }
        FormExpr::Delta => Ok(delta(trunc)),
        FormExpr::DeltaScaled(p) => {
            Ok(delta(trunc).substitute_q_pow(i64::from(*p)).truncated(trunc))
        }
        FormExpr::J => Ok(jfunction(trunc)),
        FormExpr::Const(c) => Ok(QSeries::constant(c.clone(), trunc)),
        FormExpr::Sum(parts) => {
            let mut acc = QSeries::zero(trunc);
            for part in parts {
                acc = acc.add(&expand_at(part, trunc)?);
            }
            Ok(acc)
        }
        FormExpr::Product(parts) => {
            let mut acc = QSeries::one(trunc);
            for part in parts {
                acc = acc.mul(&expand_at(part, trunc)?);
            }
            Ok(acc)
        }
        FormExpr::Power(base, e) => Ok(expand_at(base, trunc)?.pow(*e)?),
        FormExpr::Scale(c, inner) => Ok(expand_at(inner, trunc)?.scalar_mul(c)),
    }
}

/// Expands a validated expression to a series truncated exactly at `trunc`.
///
/// Division and negative powers propagate truncation as `N − 2·valuation`,
/// so a first pass may fall short of the request; the deficit is linear in
/// the request, and a single retry with widened internal truncation closes
/// it.  The returned series always has truncation exactly `trunc`.
pub fn expand(expr: &FormExpr, trunc: Expo) -> Result<QSeries, FormError> {
    expr.validate()?;
    expand_with_slack(trunc, |t| expand_at(expr, t))
}

/// Runs `builder` at increasing truncation until the result reaches `trunc`,
/// then cuts back.  Two passes suffice for affine truncation loss; the loop
/// allows a couple more for safety and panics only on a logic error.
fn expand_with_slack(
    trunc: Expo,
    mut builder: impl FnMut(Expo) -> Result<QSeries, FormError>,
) -> Result<QSeries, FormError> {
    let mut request = trunc;
    for _ in 0..4 {
        let series = builder(request)?;
        if series.truncation() >= trunc {
            return Ok(series.truncated(trunc));
        }
        request = request + (trunc - series.truncation());
    }
    panic!("truncation deficit failed to close; expansion budgeting is broken");
}

/// A right coset representative of Γ₀(p) in SL₂(ℤ): the identity or
/// `S·T^n = [[0, −1], [1, n]]` for 0 ≤ n < p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetRep {
    Identity,
    STn(u32),
}

impl CosetRep {
    /// The full list of p + 1 representatives for prime p.
    pub fn all(p: u32) -> Vec<CosetRep> {
        let mut reps = vec![CosetRep::Identity];
        reps.extend((0..p).map(CosetRep::STn));
        reps
    }

    /// The representative as an integer matrix.
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        match self {
            CosetRep::Identity => [[1, 0], [0, 1]],
            CosetRep::STn(n) => [[0, -1], [1, i64::from(*n)]],
        }
    }
}

/// Expands `f|_k γ` for a coset representative γ, as a series in `q^{1/p}`.
///
/// Transformation rules are applied per generator: level-1 generators are
/// invariant under S, while `E_k(pz)|_k S = p^{−k} E_k(z/p)` and
/// `Δ(pz)|₁₂ S = p^{−12} Δ(z/p)`; `T^n` then multiplies the coefficient of
/// `q^{m/p}` by `ζ_p^{mn}`.  The result is only requested through this
/// rational interface, so a twist that leaves ℚ (any n ≥ 1 with p ≥ 3) is
/// reported as [`FormError::IrrationalTwist`]; `E2` has no transformation
/// rule and yields [`FormError::UnknownTransform`].
pub fn slash_expand(expr: &FormExpr, rep: CosetRep, trunc: Expo) -> Result<QSeries, FormError> {
    expr.validate()?;
    match rep {
        CosetRep::Identity => expand(expr, trunc),
        CosetRep::STn(n) => {
            let p = expr.level()?;
            if p == 1 {
                return Err(FormError::LevelMismatch(1, 1));
            }
            if n >= p {
                return Err(FormError::BadCosetIndex { n, p });
            }
            let slashed = expand_with_slack(trunc, |t| expand_s_at(expr, t))?;
            twist_rational(&slashed, n, p)
        }
    }
}

/// Expansion of `f|_k S` (a series in q^{1/p} for level-p input).
fn expand_s_at(expr: &FormExpr, trunc: Expo) -> Result<QSeries, FormError> {
    match expr {
        FormExpr::Ek(k) => eisenstein(*k, trunc),
        FormExpr::E2 => Err(FormError::UnknownTransform("E2".into())),
        FormExpr::EkScaled(k, p) => {
            let inner = substituted_root(eisenstein(*k, trunc * Expo::from_integer(i64::from(*p)))?, *p);
            let scale = BigRational::from_integer(BigInt::from(*p).pow(*k)).recip();
            Ok(inner.scalar_mul(&scale).truncated(trunc))
        }
        FormExpr::Delta => Ok(delta(trunc)),
        FormExpr::DeltaScaled(p) => {
            let inner = substituted_root(delta(trunc * Expo::from_integer(i64::from(*p))), *p);
            let scale = BigRational::from_integer(BigInt::from(*p).pow(12)).recip();
            Ok(inner.scalar_mul(&scale).truncated(trunc))
        }
        FormExpr::J => Ok(jfunction(trunc)),
        FormExpr::Const(c) => Ok(QSeries::constant(c.clone(), trunc)),
        FormExpr::Sum(parts) => {
            let mut acc = QSeries::zero(trunc);
            for part in parts {
                acc = acc.add(&expand_s_at(part, trunc)?);
            }
            Ok(acc)
        }
        FormExpr::Product(parts) => {
            let mut acc = QSeries::one(trunc);
            for part in parts {
                acc = acc.mul(&expand_s_at(part, trunc)?);
            }
            Ok(acc)
        }
        FormExpr::Power(base, e) => Ok(expand_s_at(base, trunc)?.pow(*e)?),
        FormExpr::Scale(c, inner) => Ok(expand_s_at(inner, trunc)?.scalar_mul(c)),
    }
}

/// Substitutes q ↦ q^{1/p}, turning `g(z/p)` expansions into q^{1/p} series.
fn substituted_root(series: QSeries, p: u32) -> QSeries {
    series.scale_exponents(Ratio::new(1, i64::from(p)))
}

/// Applies the T^n twist to a q^{1/p} series, staying inside ℚ.
fn twist_rational(series: &QSeries, n: u32, p: u32) -> Result<QSeries, FormError> {
    let mut terms = Vec::new();
    for (e, c) in series.iter() {
        let scaled = e * Expo::from_integer(i64::from(p));
        debug_assert!(scaled.is_integer(), "ramification must divide the level");
        let m = scaled.to_integer().rem_euclid(i64::from(p));
        let t = (m * i64::from(n)).rem_euclid(i64::from(p));
        if t == 0 {
            terms.push((*e, c.clone()));
        } else if p == 2 {
            terms.push((*e, -c.clone()));
        } else {
            return Err(FormError::IrrationalTwist { p, n });
        }
    }
    Ok(QSeries::from_terms(series.truncation(), terms))
}

/// An element of ℚ(ζ_p) in the power basis 1, ζ, …, ζ^{p−2}.
#[derive(Debug, Clone, PartialEq)]
struct CycloNum {
    comps: Vec<BigRational>,
}

impl CycloNum {
    fn zero(p: u32) -> CycloNum {
        CycloNum { comps: vec![BigRational::zero(); (p - 1) as usize] }
    }

    fn is_zero(&self) -> bool {
        self.comps.iter().all(Zero::is_zero)
    }

    /// `c · ζ_p^t` embedded in the power basis; `ζ^{p−1} = −(1 + ζ + … + ζ^{p−2})`.
    fn from_zeta_multiple(c: &BigRational, t: usize, p: u32) -> CycloNum {
        let mut out = CycloNum::zero(p);
        let t = t % p as usize;
        if t == (p - 1) as usize {
            for comp in &mut out.comps {
                *comp -= c;
            }
        } else {
            out.comps[t] += c;
        }
        out
    }

    fn add_assign(&mut self, other: &CycloNum) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            *a += b;
        }
    }

    fn mul(&self, other: &CycloNum, p: u32) -> CycloNum {
        let mut out = CycloNum::zero(p);
        for (i, a) in self.comps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.comps.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                out.add_assign(&CycloNum::from_zeta_multiple(&prod, i + j, p));
            }
        }
        out
    }

    /// The rational value if all ζ-components vanish.
    fn as_rational(&self) -> Option<&BigRational> {
        if self.comps[1..].iter().all(Zero::is_zero) {
            Some(&self.comps[0])
        } else {
            None
        }
    }
}

/// A truncated series in q^{1/p} with coefficients in ℚ(ζ_p).
#[derive(Debug, Clone)]
struct CycloSeries {
    p: u32,
    trunc: Expo,
    terms: BTreeMap<Expo, CycloNum>,
}

impl CycloSeries {
    /// Embeds a rational series, twisting the coefficient of `q^{m/p}` by
    /// `ζ_p^{mn}`.
    fn from_twisted(series: &QSeries, n: u32, p: u32) -> CycloSeries {
        let mut terms = BTreeMap::new();
        for (e, c) in series.iter() {
            let scaled = *e * Expo::from_integer(i64::from(p));
            debug_assert!(scaled.is_integer(), "ramification must divide the level");
            let t = (scaled.to_integer() * i64::from(n)).rem_euclid(i64::from(p));
            let num = CycloNum::from_zeta_multiple(c, t as usize, p);
            if !num.is_zero() {
                terms.insert(*e, num);
            }
        }
        CycloSeries { p, trunc: series.truncation(), terms }
    }

    fn valuation_for_trunc(&self) -> Expo {
        self.terms.keys().next().copied().unwrap_or(self.trunc)
    }

    fn mul(&self, other: &CycloSeries) -> CycloSeries {
        debug_assert_eq!(self.p, other.p);
        let trunc = (self.trunc + other.valuation_for_trunc())
            .min(other.trunc + self.valuation_for_trunc());
        let mut terms: BTreeMap<Expo, CycloNum> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = *ea + *eb;
                if e >= trunc {
                    break;
                }
                let prod = ca.mul(cb, self.p);
                match terms.entry(e) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut slot) => {
                        slot.get_mut().add_assign(&prod);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        CycloSeries { p: self.p, trunc, terms }
    }

    /// Collapses to a rational integer-exponent series, or reports which
    /// exponent keeps a fractional power or an irrational coefficient.
    fn into_qseries(self) -> Result<QSeries, FormError> {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if !e.is_integer() {
                return Err(FormError::RamificationLeak {
                    exponent: *e,
                    what: "a fractional exponent".into(),
                });
            }
            match c.as_rational() {
                Some(r) => terms.push((*e, r.clone())),
                None => {
                    return Err(FormError::RamificationLeak {
                        exponent: *e,
                        what: "an irrational coefficient".into(),
                    })
                }
            }
        }
        Ok(QSeries::from_terms(self.trunc, terms))
    }
}

/// Expands `∏_γ f|_k γ` over all p + 1 coset representatives of Γ₀(p).
///
/// The product is invariant under SL₂(ℤ) and under Gal(ℚ(ζ_p)/ℚ), so its
/// expansion must be a rational series in integer powers of q; this is
/// verified exactly and a failure surfaces as [`FormError::RamificationLeak`].
/// Level-1 input is rejected, since the coset decomposition is trivial there.
pub fn coset_product(expr: &FormExpr, trunc: Expo) -> Result<QSeries, FormError> {
    expr.validate()?;
    let p = expr.level()?;
    if p == 1 {
        return Err(FormError::LevelMismatch(1, 1));
    }
    let series = expand_with_slack(trunc, |t| {
        let plain = expand_at(expr, t)?;
        let slashed = expand_with_slack(t, |s| expand_s_at(expr, s))?;
        let mut acc = CycloSeries::from_twisted(&plain, 0, p);
        for n in 0..p {
            acc = acc.mul(&CycloSeries::from_twisted(&slashed, n, p));
        }
        acc.into_qseries()
    })?;
    debug_assert_eq!(series.ramification(), 1);
    Ok(series)
}
