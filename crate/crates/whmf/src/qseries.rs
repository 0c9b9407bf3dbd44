//! Truncated Puiseux series in the nome q with exact rational coefficients.
//!
//! A [`QSeries`] represents Σ_{e ≥ v} a(e) q^e where the exponents e are rationals
//! whose denominators divide the ramification index r (so the series lives in
//! q^{1/r}), the coefficients are exact `BigRational`s, and everything at or above
//! the truncation exponent N is unknown. Operations propagate N pessimistically:
//! addition takes min(N₁, N₂), multiplication min(N₁+v₂, N₂+v₁), and inversion of
//! a series with valuation v yields truncation N − 2v. Exponent arithmetic is done
//! in `Ratio<i64>`, which is exact and totally ordered, so term maps stay sorted.
//!
//! The module also hosts the two elementary arithmetic helpers the expansions
//! need: divisor power sums and Bernoulli numbers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exponent type: exact rationals over machine integers. Exponents in practice
/// stay tiny (|e| ≤ a few thousand, denominators ≤ 5), far from overflow.
pub type Expo = Ratio<i64>;

/// Errors from series arithmetic.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SeriesError {
    /// Inverting (or raising to a negative power) a series with no known nonzero term.
    #[error("series is not invertible: no nonzero leading coefficient below the truncation")]
    NonInvertible,
    /// Dividing by the identically-zero series.
    #[error("division by the zero series")]
    DivisionByZeroSeries,
}

/// A truncated Puiseux series with exact rational coefficients.
///
/// Invariants: every stored exponent is strictly below the truncation, no stored
/// coefficient is zero, and the ramification reported by [`QSeries::ramification`]
/// is the least common multiple of the exponent denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    trunc: Expo,
    terms: BTreeMap<Expo, BigRational>,
}

impl QSeries {
    /// The zero series known up to (but excluding) exponent `trunc`.
    pub fn zero(trunc: Expo) -> Self {
        QSeries { trunc, terms: BTreeMap::new() }
    }

    /// The constant series 1 + O(q^trunc).
    pub fn one(trunc: Expo) -> Self {
        Self::monomial(Expo::zero(), BigRational::one(), trunc)
    }

    /// The constant series c + O(q^trunc).
    pub fn constant(c: BigRational, trunc: Expo) -> Self {
        Self::monomial(Expo::zero(), c, trunc)
    }

    /// c·q^e + O(q^trunc). Terms at or above the truncation are dropped.
    pub fn monomial(e: Expo, c: BigRational, trunc: Expo) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() && e < trunc {
            terms.insert(e, c);
        }
        QSeries { trunc, terms }
    }

    /// Builds a series from explicit terms; zero coefficients and terms at or
    /// above the truncation are dropped.
    pub fn from_terms<I>(trunc: Expo, terms: I) -> Self
    where
        I: IntoIterator<Item = (Expo, BigRational)>,
    {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() || e >= trunc {
                continue;
            }
            let entry = map.entry(e).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                map.remove(&e);
            }
        }
        QSeries { trunc, terms: map }
    }

    /// Convenience: series with integer exponents from (exponent, coefficient) pairs.
    pub fn from_int_terms<I>(trunc: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        Self::from_terms(
            Expo::from_integer(trunc),
            terms.into_iter().map(|(e, c)| (Expo::from_integer(e), c)),
        )
    }

    /// Truncation exponent N: coefficients at exponents ≥ N are unknown.
    pub fn truncation(&self) -> Expo {
        self.trunc
    }

    /// Least common multiple of the exponent denominators (1 for an integral
    /// expansion, including the zero series).
    pub fn ramification(&self) -> i64 {
        self.terms.keys().fold(1i64, |r, e| r.lcm(e.denom()))
    }

    /// The least exponent with a nonzero coefficient, or `None` for the zero series.
    pub fn valuation(&self) -> Option<Expo> {
        self.terms.keys().next().copied()
    }

    /// Valuation used for truncation propagation: the zero series acts as if its
    /// first unknown term (at the truncation) might be nonzero.
    fn val_for_trunc(&self) -> Expo {
        self.valuation().unwrap_or(self.trunc)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at exponent `e`. Panics if `e` is at or beyond the truncation,
    /// where the coefficient is unknown rather than zero.
    pub fn coeff(&self, e: Expo) -> BigRational {
        assert!(e < self.trunc, "coefficient at q^{} is beyond the truncation O(q^{})", e, self.trunc);
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient at an integer exponent.
    pub fn coeff_int(&self, e: i64) -> BigRational {
        self.coeff(Expo::from_integer(e))
    }

    /// Iterates (exponent, coefficient) pairs in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&Expo, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Lowers the truncation to `new_trunc`, discarding terms above it.
    pub fn truncated(&self, new_trunc: Expo) -> Self {
        let trunc = self.trunc.min(new_trunc);
        let terms = self.terms.iter().filter(|(e, _)| **e < trunc).map(|(e, c)| (*e, c.clone())).collect();
        QSeries { trunc, terms }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(rhs.terms.iter()) {
            if *e >= trunc {
                continue;
            }
            let entry = terms.entry(*e).or_insert_with(BigRational::zero);
            *entry += c;
        }
        terms.retain(|_, c: &mut BigRational| !c.is_zero());
        QSeries { trunc, terms }
    }

    pub fn neg(&self) -> Self {
        QSeries {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scalar_mul(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return QSeries::zero(self.trunc);
        }
        QSeries {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Multiplies by q^shift, shifting every exponent and the truncation.
    pub fn shifted(&self, shift: Expo) -> Self {
        QSeries {
            trunc: self.trunc + shift,
            terms: self.terms.iter().map(|(e, c)| (*e + shift, c.clone())).collect(),
        }
    }

    /// Product with truncation min(N₁ + v₂, N₂ + v₁).
    pub fn mul(&self, rhs: &Self) -> Self {
        let trunc = (self.trunc + rhs.val_for_trunc()).min(rhs.trunc + self.val_for_trunc());
        let mut terms: BTreeMap<Expo, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = *e1 + *e2;
                if e >= trunc {
                    // rhs exponents ascend, so later ones only get larger.
                    break;
                }
                let entry = terms.entry(e).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c: &mut BigRational| !c.is_zero());
        QSeries { trunc, terms }
    }

    /// Multiplicative inverse. For a series with valuation v and truncation N the
    /// inverse is known to O(q^{N−2v}): the unit part is determined to relative
    /// order N − v, and the q^{−v} prefactor shifts it down by another v.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let v = self.valuation().ok_or(SeriesError::NonInvertible)?;
        let lead = self.terms[&v].clone();
        // Unit part u = self/q^v with u(0) = lead; relative precision rel = N − v,
        // positive because stored exponents sit strictly below the truncation.
        let rel = self.trunc - v;
        debug_assert!(rel > Expo::zero());
        // Solve u·w = 1 term by term: w(e) = −(Σ_{0<d≤e} u(d)·w(e−d)) / u(0).
        let unit: BTreeMap<Expo, BigRational> =
            self.terms.iter().map(|(e, c)| (*e - v, c.clone())).collect();
        let mut w: BTreeMap<Expo, BigRational> = BTreeMap::new();
        w.insert(Expo::zero(), BigRational::one() / lead.clone());
        // Work through the exponent grid actually reachable: sums of unit
        // exponents. Always determining the smallest reachable undetermined
        // exponent first guarantees every w(e−d) needed below is already known.
        loop {
            // Find the smallest exponent 0 < e < rel not yet determined that can
            // receive a contribution u(d)·w(e−d).
            let mut next: Option<Expo> = None;
            for (d, _) in unit.iter().filter(|(d, _)| !d.is_zero()) {
                for (g, _) in w.iter() {
                    let e = *d + *g;
                    if e < rel && !w.contains_key(&e) {
                        next = Some(match next {
                            Some(n) => n.min(e),
                            None => e,
                        });
                    }
                }
            }
            let e = match next {
                Some(e) => e,
                None => break,
            };
            let mut acc = BigRational::zero();
            for (d, ud) in unit.iter().filter(|(d, _)| !d.is_zero() && **d <= e) {
                if let Some(wg) = w.get(&(e - *d)) {
                    acc += ud * wg;
                }
            }
            w.insert(e, -acc / lead.clone());
        }
        let terms = w.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e - v, c)).collect();
        Ok(QSeries { trunc: rel - v, terms })
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, m: i64) -> Result<Self, SeriesError> {
        if m < 0 {
            return self.inv()?.pow(-m);
        }
        if m == 0 {
            return Ok(QSeries::one(self.trunc));
        }
        // Square-and-multiply keeps the truncation propagation identical to the
        // corresponding chain of `mul` calls.
        let mut base = self.clone();
        let mut m = m as u64;
        let mut acc: Option<QSeries> = None;
        loop {
            if m & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            m >>= 1;
            if m == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc.unwrap())
    }

    /// Quotient self/rhs with truncation min(N₁ − v₂, N₂ + v₁ − 2v₂).
    pub fn div(&self, rhs: &Self) -> Result<Self, SeriesError> {
        if rhs.is_zero() {
            return Err(SeriesError::DivisionByZeroSeries);
        }
        Ok(self.mul(&rhs.inv()?))
    }

    /// Substitutes q ↦ q^p (p > 0): exponents and truncation scale by p.
    pub fn substitute_q_pow(&self, p: i64) -> Self {
        assert!(p > 0, "substitution exponent must be positive");
        self.scale_exponents(Expo::from_integer(p))
    }

    /// Rescales every exponent (and the truncation) by a positive rational
    /// factor; `scale_exponents(1/p)` turns a series in q into one in q^{1/p}.
    pub fn scale_exponents(&self, r: Expo) -> Self {
        assert!(r > Expo::zero(), "exponent scale must be positive");
        QSeries {
            trunc: self.trunc * r,
            terms: self.terms.iter().map(|(e, c)| (*e * r, c.clone())).collect(),
        }
    }

    /// The weighted derivative Σ e·a(e) q^e (the operator q·d/dq). The true
    /// z-derivative of the evaluated series is 2πi times this.
    pub fn theta(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c * BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        QSeries { trunc: self.trunc, terms }
    }

    /// Serializes as `{"ramification": r, "truncation": "N", "terms": [["e","c"],…]}`
    /// with exponents ascending and both exponents and coefficients as exact
    /// rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ramification": self.ramification(),
            "truncation": self.trunc.to_string(),
            "terms": self.terms.iter()
                .map(|(e, c)| serde_json::json!([e.to_string(), c.to_string()]))
                .collect::<Vec<_>>(),
        })
    }

    /// Parses the representation produced by [`QSeries::to_json`].
    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let trunc: Expo = v.get("truncation")?.as_str()?.parse().ok()?;
        let mut terms = BTreeMap::new();
        for pair in v.get("terms")?.as_array()? {
            let e: Expo = pair.get(0)?.as_str()?.parse().ok()?;
            let c: BigRational = pair.get(1)?.as_str()?.parse().ok()?;
            if !c.is_zero() && e < trunc {
                terms.insert(e, c);
            }
        }
        Some(QSeries { trunc, terms })
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if e.is_zero() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "q^{}", e)?;
            } else {
                write!(f, "{}*q^{}", mag, e)?;
            }
        }
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc)
    }
}

/// σ_k(n): the sum of d^k over the positive divisors d of n.
pub fn sigma(k: u32, n: u64) -> BigInt {
    assert!(n >= 1, "sigma is defined for n ≥ 1");
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    total
}

/// The n-th Bernoulli number (B₁ = −1/2 convention), via the defining recurrence
/// Σ_{j=0}^{m} C(m+1, j) B_j = 0.
pub fn bernoulli(n: usize) -> BigRational {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // binom accumulates C(m+1, j) incrementally.
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate().take(m) {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m as u64 + 1 - j as u64) / BigInt::from(j as u64 + 1);
        }
        // C(m+1, m) = m+1.
        b.push(-acc / BigRational::from_integer(BigInt::from(m as u64 + 1)));
    }
    b.pop().unwrap()
}
