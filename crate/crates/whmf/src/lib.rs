//! Exact q-expansions of weakly holomorphic modular forms and tools built on them:
//! reduction to polynomials in the j-invariant, enumeration of CM points on the
//! boundary geodesics of the classical fundamental domains, high-precision zero
//! location on those loci, and algebraicity classification of located zeros.
//!
//! The crate is layered bottom-up:
//!
//! * [`qseries`] — truncated Puiseux series in q with exact rational coefficients;
//! * [`forms`] — expression trees over the classical generators (Eisenstein series,
//!   the discriminant, the j-function, their rescalings to level p) and their
//!   expansions, including slash actions by coset representatives;
//! * [`jpoly`] — extraction of the polynomial P with f = P(j)·Δ^{k/12} (or the
//!   weight-0 power quotient when 12 ∤ k) and integrality reporting;
//! * [`cm`] — binary quadratic forms, exact CM points, and the bounded
//!   enumerations of CM candidates on the arcs and vertical lines;
//! * [`locator`] — evaluation of expansions at high precision, real profiles on
//!   the loci, bisection zero location, and contour-based zero counting;
//! * [`classify`] — recognition of located zeros as CM points (quadratic surd +
//!   integral j-value) or transcendental candidates, plus the integrality
//!   certificate for forms with unit leading coefficient.

pub mod classify;
pub mod cm;
pub mod forms;
pub mod jpoly;
pub mod lattice;
pub mod locator;
pub mod hp;
pub mod qseries;

pub use qseries::QSeries;
