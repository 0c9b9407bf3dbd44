//! High-precision evaluation and zero location on the distinguished loci.
//!
//! A [`PreparedForm`] compiles an exact q-expansion into floating-point
//! coefficients at a chosen precision; every evaluation estimates the
//! truncation tail by geometric extrapolation of the stored coefficients and
//! refuses to return a value unless the estimate is below `2^(−P/2)`.  The
//! extrapolation is a policy check, not a proof: it multiplies the largest
//! recent coefficient ratio by a headroom factor, which dominates the
//! eventually-decreasing ratio families produced by this crate (Eisenstein
//! series, eta products, `J`-polynomials).
//!
//! On the circular locus `|z| = 1/√p` the function
//! `θ ↦ (√p·z)^{k/2} · f(z)` is real for the symmetric forms considered
//! here; [`restricted_real_profile`] exposes it and verifies realness at
//! every evaluation.  On the vertical lines `Re z = 0` and `Re z = −1/2` the
//! values are real outright.  Zeros are located by scanning a grid for sign
//! changes and bisecting to a width of `10^(−(P/4+6))`; endpoints are
//! accepted when the profile vanishes below `2^(−P/4)`, and grid points that
//! dip toward zero without a sign change are refined by ternary search and
//! flagged as possible even-order zeros.
//!
//! Independently of the profiles, [`count_zeros_contour`] counts zeros with
//! multiplicity inside the truncated fundamental region by integrating
//! `θf/f` (the logarithmic derivative over `2πi`) around an inset contour,
//! and [`corner_multiplicity`] does the same around a small circle at a
//! corner point.  The two routes are compared by the integration tests: the
//! contour total must equal the interior profile zeros plus the corner
//! multiplicities.
//!
//! The unimodular transports `γ_L` (det 3) and `γ_R` (det 2) carry the arc
//! to the two vertical lines: `γ_R(e^{iθ}) = i·tan(θ/2)` maps the arc onto
//! `[i, i√3]` and `γ_L` fixes `ρ` while sending `i` to `−1/2 + 3i/2`.
//! [`line_profile_pullback`] studies a level-1 form along a line through
//! these maps.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::hp;
use crate::qseries::{Expo, QSeries};

/// Errors from evaluation, zero location and contour counting.
#[derive(Debug, Clone, thiserror::Error)]
pub enum LocateError {
    /// The geometric tail estimate at this point exceeds the accuracy goal.
    #[error("truncation tail not under control at y = {y:.6}: {detail}")]
    TailBoundUnsatisfiable { y: f64, detail: String },
    /// The arc profile produced a value with a non-negligible imaginary part.
    #[error("profile is not real on the arc at θ = {theta:.6} (|Im| ≈ {imag:.3e})")]
    NotRealOnArc { theta: f64, imag: f64 },
    /// The line profile produced a value with a non-negligible imaginary part.
    #[error("profile is not real on the line at t = {t:.6} (|Im| ≈ {imag:.3e})")]
    NotRealOnLine { t: f64, imag: f64 },
    /// The contour integral did not settle near an integer, or the integrand
    /// blew up on the contour: a zero lies on or next to the path.
    #[error("contour integration unreliable: {0}")]
    ContourTooClose(String),
    /// The inset contour only exists for p with 1/√p above the region cut.
    #[error("no inset contour for level {0} at this inset")]
    RegionUnsupported(u32),
    /// Profiles require even weight.
    #[error("weight {0} is odd")]
    OddWeight(i64),
    /// Evaluation requested outside the upper half plane.
    #[error("point is not in the upper half plane")]
    OutsideUpperHalfPlane,
}

/// Evaluation context: the working precision in bits.
#[derive(Debug, Clone, Copy)]
pub struct EvalContext {
    pub prec: u32,
}

impl EvalContext {
    pub fn new(prec: u32) -> EvalContext {
        EvalContext { prec }
    }
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext { prec: 256 }
    }
}

/// A q-expansion compiled to floating-point coefficients at a fixed
/// precision, with the data needed for tail estimates.
#[derive(Debug, Clone)]
pub struct PreparedForm {
    prec: u32,
    /// Ramification: exponents are `m/ram` with integer `m`.
    ram: i64,
    /// `(m, coefficient)` with `m` the scaled exponent, ascending.
    terms: Vec<(i64, Float)>,
    /// Scaled truncation: terms with `m ≥ trunc_scaled` are not stored.
    trunc_scaled: i64,
    /// Estimated per-step growth of coefficient magnitudes (with headroom).
    growth: Float,
}

impl PreparedForm {
    /// Compiles `f` at `prec` bits.
    pub fn new(f: &QSeries, prec: u32) -> PreparedForm {
        let ram = f.ramification();
        let terms: Vec<(i64, Float)> = f
            .iter()
            .map(|(e, c)| {
                let scaled = *e * Expo::from_integer(ram);
                debug_assert!(scaled.is_integer());
                (scaled.to_integer(), hp::float_of(c, prec))
            })
            .collect();
        let trunc_scaled = {
            let t = f.truncation() * Expo::from_integer(ram);
            // Terms live strictly below the truncation; take the ceiling.
            t.ceil().to_integer()
        };
        // Largest recent adjacent ratio |a_j/a_i|^(1/(m_j−m_i)), with 1.5×
        // headroom for divisor-type fluctuations.
        let mut growth = Float::with_val(prec, 1);
        let start = terms.len().saturating_sub(9);
        for w in terms[start..].windows(2) {
            let (m0, c0) = (&w[0].0, &w[0].1);
            let (m1, c1) = (&w[1].0, &w[1].1);
            if c0.is_zero() {
                continue;
            }
            let ratio = Float::with_val(prec, c1.abs_ref()) / Float::with_val(prec, c0.abs_ref());
            let step = Float::with_val(prec, (ratio.ln() / (m1 - m0)).exp());
            if step > growth {
                growth = step;
            }
        }
        growth *= Float::with_val(prec, 1.5f64);
        PreparedForm { prec, ram, terms, trunc_scaled, growth }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Evaluates the series at `z` in the upper half plane, verifying that
    /// the neglected tail is below `2^(−P/2)` in absolute value.
    pub fn eval(&self, z: &Complex) -> Result<Complex, LocateError> {
        self.eval_with_scale(z).map(|(v, _)| v)
    }

    /// Like [`PreparedForm::eval`], also returning the magnitude scale
    /// `Σ |c·w^m|` of the summation, against which the rounding error of the
    /// value is relative.
    pub fn eval_with_scale(&self, z: &Complex) -> Result<(Complex, Float), LocateError> {
        let prec = self.prec;
        let y = z.imag().to_f64();
        if !(y > 0.0) {
            return Err(LocateError::OutsideUpperHalfPlane);
        }
        let w = hp::nome(z, self.ram, prec);
        let w_abs = Float::with_val(prec, w.abs_ref());

        let mut acc = Complex::with_val(prec, 0);
        let mut scale = Float::new(prec);
        if self.terms.is_empty() {
            return Ok((acc, scale));
        }
        let mut cur = Complex::with_val(prec, &w).pow(exponent_i32(self.terms[0].0));
        let mut cur_m = self.terms[0].0;
        for (m, c) in &self.terms {
            if *m > cur_m {
                cur *= Complex::with_val(prec, &w).pow(exponent_i32(m - cur_m));
                cur_m = *m;
            }
            let term = Complex::with_val(prec, &cur) * c;
            scale += Float::with_val(prec, term.abs_ref());
            acc += term;
        }

        // Tail estimate: first omitted term ≈ |a_last|·g^gap·|w|^trunc, then
        // a geometric series with ratio g·|w|.
        let (last_m, last_c) = self.terms.last().expect("nonempty");
        let ratio = Float::with_val(prec, &self.growth * &w_abs);
        if ratio >= 1u32 {
            return Err(LocateError::TailBoundUnsatisfiable {
                y,
                detail: format!(
                    "extrapolated term ratio {:.3} does not contract; increase the truncation",
                    ratio.to_f64()
                ),
            });
        }
        let gap = self.trunc_scaled - last_m;
        let first_omitted = Float::with_val(prec, last_c.abs_ref())
            * Float::with_val(prec, (&self.growth).pow(exponent_i32(gap)))
            * Float::with_val(prec, (&w_abs).pow(exponent_i32(self.trunc_scaled)));
        let tail = first_omitted / (Float::with_val(prec, 1) - &ratio);
        let goal = Float::with_val(prec, 1) >> (prec / 2);
        if tail > goal {
            return Err(LocateError::TailBoundUnsatisfiable {
                y,
                detail: format!(
                    "tail estimate {:.3e} exceeds 2^-{} ; increase the truncation",
                    tail.to_f64(),
                    prec / 2
                ),
            });
        }
        Ok((acc, scale))
    }
}

fn exponent_i32(m: i64) -> i32 {
    i32::try_from(m).expect("scaled exponent fits in i32")
}

/// One-shot evaluation of an exact series at a point.
pub fn eval_form(f: &QSeries, z: &Complex, ctx: &EvalContext) -> Result<Complex, LocateError> {
    PreparedForm::new(f, ctx.prec).eval(z)
}

/// A truncation adequate for evaluating at height ≥ `y_min` with `prec`
/// bits, for coefficient families growing like `n^poly_exponent · e^{4π√n}`.
pub fn suggested_truncation(prec: u32, y_min: f64, poly_exponent: u32) -> Expo {
    use std::f64::consts::PI;
    let target = f64::from(prec) * std::f64::consts::LN_2 + 40.0;
    let mut n = 32.0f64;
    for _ in 0..8 {
        n = (target + f64::from(poly_exponent) * (n + 2.0).ln() + 4.0 * PI * n.sqrt())
            / (2.0 * PI * y_min);
        n = n.clamp(8.0, 1.0e6);
    }
    Expo::from_integer(n.ceil() as i64 + 1)
}

/// The real profile of a weight-k form restricted to `|z| = 1/√p`.
pub struct ArcProfile {
    prepared: PreparedForm,
    k_half: i64,
    p: u32,
    prec: u32,
}

/// Builds the restricted profile `θ ↦ (√p·z)^{k/2}·f(z)`, `z = e^{iθ}/√p`,
/// which is real-valued on the arc for forms invariant under the Fricke
/// reflection of level p (p = 1 uses the modular inversion itself).
/// Realness is asserted at every evaluation, failing with
/// [`LocateError::NotRealOnArc`] for forms without the symmetry.
pub fn restricted_real_profile(
    f: &QSeries,
    k: i64,
    p: u32,
    ctx: &EvalContext,
) -> Result<ArcProfile, LocateError> {
    if k % 2 != 0 {
        return Err(LocateError::OddWeight(k));
    }
    Ok(ArcProfile {
        prepared: PreparedForm::new(f, ctx.prec),
        k_half: k / 2,
        p,
        prec: ctx.prec,
    })
}

impl ArcProfile {
    /// Radius `1/√p` of the arc.
    pub fn radius(&self) -> Float {
        Float::with_val(self.prec, self.p).recip().sqrt()
    }

    /// The angle of the left endpoint: `acos(−√p/2)` (2π/3, 3π/4, 5π/6 for
    /// p = 1, 2, 3), where the arc meets `Re z = −1/2`.
    pub fn theta_left(&self) -> Float {
        (-Float::with_val(self.prec, self.p).sqrt() / 2u32).acos()
    }

    /// The right endpoint `π/2` (the point `i/√p`).
    pub fn theta_right(&self) -> Float {
        let pi = hp::pi(self.prec);
        pi / 2u32
    }

    /// The point `e^{iθ}/√p`.
    pub fn point(&self, theta: &Float) -> Complex {
        let (sin, cos) = Float::with_val(self.prec, theta).sin_cos(Float::new(self.prec));
        let r = self.radius();
        Complex::with_val(self.prec, (cos * &r, sin * &r))
    }

    /// The profile value at angle θ.
    pub fn value(&self, theta: &Float) -> Result<Float, LocateError> {
        let z = self.point(theta);
        let fz = self.prepared.eval(&z)?;
        // u = √p·z = e^{iθ}.
        let (sin, cos) = Float::with_val(self.prec, theta).sin_cos(Float::new(self.prec));
        let u = Complex::with_val(self.prec, (cos, sin));
        let phi = u.pow(exponent_i32(self.k_half)) * fz;
        let tol = Float::with_val(self.prec, 1) >> (self.prec / 4);
        let imag_abs = Float::with_val(self.prec, phi.imag().abs_ref());
        let scale = Float::with_val(self.prec, phi.real().abs_ref()).max(&Float::with_val(self.prec, 1));
        if imag_abs > tol * scale {
            return Err(LocateError::NotRealOnArc {
                theta: theta.to_f64(),
                imag: phi.imag().to_f64(),
            });
        }
        let (real, _) = phi.into_real_imag();
        Ok(real)
    }

    /// Re-bisects inside a bracket known to contain a sign change; used to
    /// refine a record at a higher precision.  The bounds are exact floats
    /// because refinement brackets are far narrower than f64 resolution.
    pub fn refine(
        &self,
        lo: &Float,
        hi: &Float,
        weight: i64,
        form_id: &str,
    ) -> Result<ZeroRecord, LocateError> {
        let lo = Float::with_val(self.prec, lo);
        let hi = Float::with_val(self.prec, hi);
        let raw = bisect_sign_change(&|t| self.value(t), &lo, &hi, self.prec)?;
        Ok(self.record_from_raw(raw, weight, form_id))
    }

    fn record_from_raw(&self, raw: RawZero, weight: i64, form_id: &str) -> ZeroRecord {
        let z = self.point(&raw.param);
        ZeroRecord {
            locus: if self.p == 1 { "A".into() } else { format!("A{}", self.p) },
            param: raw.param,
            z,
            residual: raw.residual,
            width: raw.width,
            weight,
            form_id: form_id.into(),
            endpoint: raw.endpoint,
            even_order_suspect: raw.even_order_suspect,
        }
    }
}

/// Which vertical line a profile lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineId {
    /// `Re z = −1/2`, heights from `√3/2`.
    L,
    /// `Re z = 0`, heights from `1`.
    R,
}

impl LineId {
    fn base(&self, prec: u32) -> Float {
        match self {
            LineId::L => Float::with_val(prec, 3u32).sqrt() / 2u32,
            LineId::R => Float::with_val(prec, 1),
        }
    }

    fn re(&self) -> f64 {
        match self {
            LineId::L => -0.5,
            LineId::R => 0.0,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            LineId::L => "L",
            LineId::R => "R",
        }
    }
}

enum LineInner {
    /// Evaluate the form itself along the line (values are real there for
    /// real-coefficient expansions in integer powers of q).
    Direct(PreparedForm),
    /// Evaluate a level-1 form along the arc image of the line under the
    /// inverse transport; zeros then sit at the transported parameters.
    PulledBack(ArcProfile),
}

/// A real-valued profile along one of the vertical lines.
pub struct LineProfile {
    inner: LineInner,
    line: LineId,
    prec: u32,
}

/// Profile of `f` itself restricted to a vertical line.
pub fn line_profile_direct(
    f: &QSeries,
    k: i64,
    line: LineId,
    ctx: &EvalContext,
) -> Result<LineProfile, LocateError> {
    if k % 2 != 0 {
        return Err(LocateError::OddWeight(k));
    }
    Ok(LineProfile {
        inner: LineInner::Direct(PreparedForm::new(f, ctx.prec)),
        line,
        prec: ctx.prec,
    })
}

/// Profile of the transported form `f|γ⁻¹` along a line: the level-1 form
/// `f` is evaluated on the unit circle at the angle corresponding to the
/// line parameter (`θ = 2·atan t` for R, `θ = π − 2·atan(2t/3)` for L), so
/// its zeros appear exactly at the transported line points.
pub fn line_profile_pullback(
    f: &QSeries,
    k: i64,
    line: LineId,
    ctx: &EvalContext,
) -> Result<LineProfile, LocateError> {
    let arc = restricted_real_profile(f, k, 1, ctx)?;
    Ok(LineProfile { inner: LineInner::PulledBack(arc), line, prec: ctx.prec })
}

impl LineProfile {
    /// The lower end of the scanned segment (`√3/2` on L, `1` on R).
    pub fn base(&self) -> Float {
        self.line.base(self.prec)
    }

    pub fn line(&self) -> LineId {
        self.line
    }

    /// The line point at parameter t.
    pub fn point(&self, t: &Float) -> Complex {
        Complex::with_val(
            self.prec,
            (Float::with_val(self.prec, self.line.re()), Float::with_val(self.prec, t)),
        )
    }

    /// The profile value at parameter t.
    pub fn value(&self, t: &Float) -> Result<Float, LocateError> {
        match &self.inner {
            LineInner::Direct(prepared) => {
                let z = self.point(t);
                let v = prepared.eval(&z)?;
                let tol = Float::with_val(self.prec, 1) >> (self.prec / 4);
                let imag_abs = Float::with_val(self.prec, v.imag().abs_ref());
                let scale = Float::with_val(self.prec, v.real().abs_ref())
                    .max(&Float::with_val(self.prec, 1));
                if imag_abs > tol * scale {
                    return Err(LocateError::NotRealOnLine {
                        t: t.to_f64(),
                        imag: v.imag().to_f64(),
                    });
                }
                let (real, _) = v.into_real_imag();
                Ok(real)
            }
            LineInner::PulledBack(arc) => {
                let theta = self.theta_of(t);
                arc.value(&theta)
            }
        }
    }

    /// The arc angle corresponding to the line parameter under the inverse
    /// transport.
    fn theta_of(&self, t: &Float) -> Float {
        match self.line {
            LineId::R => Float::with_val(self.prec, t).atan() * 2u32,
            LineId::L => {
                let inner = (Float::with_val(self.prec, t) * 2u32 / 3u32).atan() * 2u32;
                hp::pi(self.prec) - inner
            }
        }
    }

    /// Re-bisects inside a bracket known to contain a sign change.
    pub fn refine(
        &self,
        lo: &Float,
        hi: &Float,
        weight: i64,
        form_id: &str,
    ) -> Result<ZeroRecord, LocateError> {
        let lo = Float::with_val(self.prec, lo);
        let hi = Float::with_val(self.prec, hi);
        let raw = bisect_sign_change(&|t| self.value(t), &lo, &hi, self.prec)?;
        Ok(self.record_from_raw(raw, weight, form_id))
    }

    fn record_from_raw(&self, raw: RawZero, weight: i64, form_id: &str) -> ZeroRecord {
        let z = self.point(&raw.param);
        ZeroRecord {
            locus: self.line.label().into(),
            param: raw.param,
            z,
            residual: raw.residual,
            width: raw.width,
            weight,
            form_id: form_id.into(),
            endpoint: raw.endpoint,
            even_order_suspect: raw.even_order_suspect,
        }
    }
}

/// A located zero: the locus, the parameter along it, the point, and the
/// quality of the refinement.
#[derive(Debug, Clone)]
pub struct ZeroRecord {
    /// Locus label: `A`, `A2`, `A3`, `L` or `R`.
    pub locus: String,
    /// Angle θ on arcs, height t on lines.
    pub param: Float,
    /// The located point.
    pub z: Complex,
    /// |profile| at the final parameter.
    pub residual: Float,
    /// Width of the final bracket (0 for endpoint hits).
    pub width: Float,
    /// Weight of the form.
    pub weight: i64,
    /// Caller-supplied identifier of the form.
    pub form_id: String,
    /// The zero sits at an endpoint of the scanned segment.
    pub endpoint: bool,
    /// The profile touched zero without a sign change (possible even order).
    pub even_order_suspect: bool,
}

struct RawZero {
    param: Float,
    residual: Float,
    width: Float,
    endpoint: bool,
    even_order_suspect: bool,
}

/// Scans `[lo, hi]` with `samples` panels for endpoint zeros, sign changes
/// and near-touches, refining each to the width target.
fn scan_real_zeros(
    value: &dyn Fn(&Float) -> Result<Float, LocateError>,
    lo: &Float,
    hi: &Float,
    samples: usize,
    prec: u32,
    check_endpoints: (bool, bool),
) -> Result<Vec<RawZero>, LocateError> {
    assert!(samples >= 8, "sample grid too coarse");
    let endpoint_tol = Float::with_val(prec, 1) >> (prec / 4);
    let step = Float::with_val(prec, hi - lo) / Float::with_val(prec, samples as u32);

    let mut params: Vec<Float> = Vec::with_capacity(samples + 1);
    let mut values: Vec<Float> = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = Float::with_val(prec, lo + Float::with_val(prec, i as u32) * &step);
        let v = value(&t)?;
        params.push(t);
        values.push(v);
    }

    let mut out: Vec<RawZero> = Vec::new();
    let mut claimed = vec![false; samples + 1];

    // Endpoints first: they are legitimate zero sites (corner points).
    for (idx, enabled) in [(0usize, check_endpoints.0), (samples, check_endpoints.1)] {
        if enabled && Float::with_val(prec, values[idx].abs_ref()) < endpoint_tol {
            out.push(RawZero {
                param: params[idx].clone(),
                residual: Float::with_val(prec, values[idx].abs_ref()),
                width: Float::new(prec),
                endpoint: true,
                even_order_suspect: false,
            });
            claimed[idx] = true;
            // Shield the adjacent panel from re-detecting the same zero.
            if idx == 0 {
                claimed[1] = true;
            } else {
                claimed[samples - 1] = true;
            }
        }
    }

    // Sign changes.
    for i in 0..samples {
        if claimed[i] && claimed[i + 1] {
            continue;
        }
        let prod_negative = values[i].is_sign_negative() != values[i + 1].is_sign_negative();
        if values[i].is_zero() {
            if !claimed[i] {
                out.push(RawZero {
                    param: params[i].clone(),
                    residual: Float::new(prec),
                    width: Float::new(prec),
                    endpoint: false,
                    even_order_suspect: false,
                });
                claimed[i] = true;
            }
            continue;
        }
        if prod_negative && !values[i + 1].is_zero() {
            let raw = bisect_sign_change(value, &params[i], &params[i + 1], prec)?;
            out.push(raw);
            claimed[i] = true;
            claimed[i + 1] = true;
        }
    }

    // Near-touches without a sign change: possible even-order zeros.  A
    // local minimum of |F| counts as a candidate when it dips well below
    // the geometric mean of its neighbours (a quadratic zero between grid
    // points gives a ratio ≤ 1/9; a smooth positive minimum stays near 1).
    // Candidates are refined by ternary search and kept only if the profile
    // actually reaches the endpoint tolerance.
    for i in 1..samples {
        if claimed[i - 1] || claimed[i] || claimed[i + 1] {
            continue;
        }
        let ai = Float::with_val(prec, values[i].abs_ref());
        let a_prev = Float::with_val(prec, values[i - 1].abs_ref());
        let a_next = Float::with_val(prec, values[i + 1].abs_ref());
        let dips = Float::with_val(prec, (&ai) * (&ai)) * 5u32 < Float::with_val(prec, a_prev * a_next);
        if dips
            && ai <= Float::with_val(prec, values[i - 1].abs_ref())
            && ai <= Float::with_val(prec, values[i + 1].abs_ref())
            && values[i - 1].is_sign_negative() == values[i + 1].is_sign_negative()
        {
            let raw = ternary_min_abs(value, &params[i - 1], &params[i + 1], prec)?;
            if raw.residual < endpoint_tol {
                out.push(raw);
                claimed[i] = true;
            }
        }
    }

    out.sort_by(|a, b| a.param.partial_cmp(&b.param).expect("finite parameters"));
    Ok(out)
}

/// Bisection to width `10^(−(P/4+6))`; the bracket must change sign.
fn bisect_sign_change(
    value: &dyn Fn(&Float) -> Result<Float, LocateError>,
    lo: &Float,
    hi: &Float,
    prec: u32,
) -> Result<RawZero, LocateError> {
    let target = width_target(prec);
    let mut a = Float::with_val(prec, lo);
    let mut b = Float::with_val(prec, hi);
    let mut fa = value(&a)?;
    let fb = value(&b)?;
    assert!(
        fa.is_sign_negative() != fb.is_sign_negative(),
        "bisection bracket must change sign"
    );
    while Float::with_val(prec, &b - &a) > target {
        let mid = Float::with_val(prec, &a + &b) / 2u32;
        let fm = value(&mid)?;
        if fm.is_zero() || Float::with_val(prec, &b - &a) <= target {
            a = mid;
            break;
        }
        if fm.is_sign_negative() == fa.is_sign_negative() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let mid = Float::with_val(prec, &a + &b) / 2u32;
    let residual = Float::with_val(prec, value(&mid)?.abs_ref());
    Ok(RawZero {
        param: mid,
        residual,
        width: Float::with_val(prec, &b - &a),
        endpoint: false,
        even_order_suspect: false,
    })
}

/// Ternary search for the minimum of |value| on a bracket without a sign
/// change; the result is flagged as a possible even-order zero.
fn ternary_min_abs(
    value: &dyn Fn(&Float) -> Result<Float, LocateError>,
    lo: &Float,
    hi: &Float,
    prec: u32,
) -> Result<RawZero, LocateError> {
    let target = width_target(prec);
    let mut a = Float::with_val(prec, lo);
    let mut b = Float::with_val(prec, hi);
    let third = Float::with_val(prec, 3);
    while Float::with_val(prec, &b - &a) > target {
        let d = Float::with_val(prec, &b - &a) / &third;
        let m1 = Float::with_val(prec, &a + &d);
        let m2 = Float::with_val(prec, &b - &d);
        let f1 = Float::with_val(prec, value(&m1)?.abs_ref());
        let f2 = Float::with_val(prec, value(&m2)?.abs_ref());
        if f1 <= f2 {
            b = m2;
        } else {
            a = m1;
        }
    }
    let mid = Float::with_val(prec, &a + &b) / 2u32;
    let residual = Float::with_val(prec, value(&mid)?.abs_ref());
    Ok(RawZero {
        param: mid,
        residual,
        width: Float::with_val(prec, &b - &a),
        endpoint: false,
        even_order_suspect: true,
    })
}

fn width_target(prec: u32) -> Float {
    Float::with_val(prec, 10).pow(-((prec as i32) / 4 + 6))
}

/// Locates zeros of the arc profile on `θ ∈ [π/2, θ_left]`.
pub fn find_zeros_on_arc(
    profile: &ArcProfile,
    samples: usize,
    weight: i64,
    form_id: &str,
) -> Result<Vec<ZeroRecord>, LocateError> {
    let lo = profile.theta_right();
    let hi = profile.theta_left();
    let raws = scan_real_zeros(
        &|t| profile.value(t),
        &lo,
        &hi,
        samples,
        profile.prec,
        (true, true),
    )?;
    Ok(raws
        .into_iter()
        .map(|raw| profile.record_from_raw(raw, weight, form_id))
        .collect())
}

/// Locates zeros of a line profile on `t ∈ [base, t_max]`.
pub fn find_zeros_on_line(
    profile: &LineProfile,
    t_max: f64,
    samples: usize,
    weight: i64,
    form_id: &str,
) -> Result<Vec<ZeroRecord>, LocateError> {
    let lo = profile.base();
    let hi = Float::with_val(profile.prec, t_max);
    let raws = scan_real_zeros(
        &|t| profile.value(t),
        &lo,
        &hi,
        samples,
        profile.prec,
        (true, false),
    )?;
    Ok(raws
        .into_iter()
        .map(|raw| profile.record_from_raw(raw, weight, form_id))
        .collect())
}

/// The unimodular transports from the unit circle to the vertical lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportMap {
    /// `γ_L = [[2, 1], [−1, 1]]` (det 3): fixes ρ, sends i to −1/2 + 3i/2.
    GammaL,
    /// `γ_R = [[1, −1], [1, 1]]` (det 2): `e^{iθ} ↦ i·tan(θ/2)`.
    GammaR,
}

impl TransportMap {
    /// The integer matrix of the map or of its inverse (up to the positive
    /// determinant, which cancels in the Möbius action).
    pub fn matrix(&self, inverse: bool) -> [[i64; 2]; 2] {
        match (self, inverse) {
            (TransportMap::GammaL, false) => [[2, 1], [-1, 1]],
            (TransportMap::GammaL, true) => [[1, -1], [1, 2]],
            (TransportMap::GammaR, false) => [[1, -1], [1, 1]],
            (TransportMap::GammaR, true) => [[1, 1], [-1, 1]],
        }
    }
}

/// Applies a transport map (or its inverse) to a point.
pub fn transport(z: &Complex, map: TransportMap, inverse: bool, prec: u32) -> Complex {
    let m = map.matrix(inverse);
    let num = Complex::with_val(prec, z) * m[0][0] + Float::with_val(prec, m[0][1]);
    let den = Complex::with_val(prec, z) * m[1][0] + Float::with_val(prec, m[1][1]);
    num / den
}

/// The truncated fundamental region for the zero count: heights up to
/// `height`, real parts in `[−1/2 − inset, inset]`, above the circle
/// `|z| = (1 − inset)/√p`.  The half width pairs each orbit of zeros once
/// (translates and Fricke mirrors fall outside).
#[derive(Debug, Clone, Copy)]
pub struct FundamentalRegion {
    pub p: u32,
    pub height: f64,
    pub inset: f64,
}

impl FundamentalRegion {
    pub fn new(p: u32, height: f64) -> FundamentalRegion {
        FundamentalRegion { p, height, inset: 0.01 }
    }
}

/// The corner `i/√p` where the circle meets `Re z = 0`.
pub fn right_corner(p: u32, prec: u32) -> Complex {
    let r = Float::with_val(prec, p).recip().sqrt();
    Complex::with_val(prec, (Float::new(prec), r))
}

/// The corner `−1/2 + i·√(1/p − 1/4)` where the circle meets `Re z = −1/2`
/// (ρ for p = 1).
pub fn left_corner(p: u32, prec: u32) -> Complex {
    let im = (Float::with_val(prec, p).recip() - Float::with_val(prec, 0.25)).sqrt();
    Complex::with_val(prec, (Float::with_val(prec, -0.5), im))
}

/// Counts zeros of `f` (with multiplicity) inside the truncated region by
/// integrating `θf/f` counterclockwise around its boundary.  The integral
/// equals the winding number directly — the exponent-weighting absorbs the
/// `2πi`.  A result farther than 0.1 from an integer, or an evaluation too
/// close to a zero of `f`, reports [`LocateError::ContourTooClose`].
pub fn count_zeros_contour(
    f: &QSeries,
    region: &FundamentalRegion,
    ctx: &EvalContext,
) -> Result<i64, LocateError> {
    let prec = ctx.prec;
    let r_inset = (1.0 - region.inset) / f64::from(region.p).sqrt();
    let x_left = -0.5 - region.inset;
    let x_right = region.inset;
    if r_inset <= -x_left {
        return Err(LocateError::RegionUnsupported(region.p));
    }
    let integrand = LogDerivative::new(f, prec);

    // Counterclockwise polyline: along the inset circle from the left cut to
    // the right cut, up the right edge, across the top leftward, down.
    let theta_l = (x_left / r_inset).acos();
    let theta_r = (x_right / r_inset).acos();
    let mut vertices: Vec<Complex> = Vec::new();
    let arc_panels = 48;
    for i in 0..=arc_panels {
        let theta = theta_l + (theta_r - theta_l) * (i as f64) / (arc_panels as f64);
        vertices.push(Complex::with_val(
            prec,
            (r_inset * theta.cos(), r_inset * theta.sin()),
        ));
    }
    vertices.push(Complex::with_val(prec, (x_right, region.height)));
    vertices.push(Complex::with_val(prec, (x_left, region.height)));
    vertices.push(vertices[0].clone());

    let winding = integrate_polyline(&integrand, &vertices, prec)?;
    settle_winding(winding)
}

/// The multiplicity of `f` at `center`: the winding of `θf/f` around a small
/// circle (as a 16-gon, which is homotopic to it for zeros at the center
/// only).
pub fn corner_multiplicity(
    f: &QSeries,
    center: &Complex,
    radius: f64,
    ctx: &EvalContext,
) -> Result<i64, LocateError> {
    let prec = ctx.prec;
    let integrand = LogDerivative::new(f, prec);
    let sides = 16;
    let mut vertices: Vec<Complex> = Vec::new();
    for i in 0..=sides {
        let phi = 2.0 * std::f64::consts::PI * (i as f64) / (sides as f64);
        let offset = Complex::with_val(prec, (radius * phi.cos(), radius * phi.sin()));
        vertices.push(Complex::with_val(prec, center + &offset));
    }
    let winding = integrate_polyline(&integrand, &vertices, prec)?;
    settle_winding(winding)
}

fn settle_winding(w: Complex) -> Result<i64, LocateError> {
    let re = w.real().to_f64();
    let im = w.imag().to_f64();
    let rounded = re.round();
    let residual = ((re - rounded).powi(2) + im.powi(2)).sqrt();
    if residual > 0.1 {
        return Err(LocateError::ContourTooClose(format!(
            "winding {re:.4} + {im:.4}i is {residual:.4} from an integer"
        )));
    }
    Ok(rounded as i64)
}

/// `θf/f` evaluated with a floor guard against zeros on the contour.
struct LogDerivative {
    num: PreparedForm,
    den: PreparedForm,
    prec: u32,
}

impl LogDerivative {
    fn new(f: &QSeries, prec: u32) -> LogDerivative {
        LogDerivative {
            num: PreparedForm::new(&f.theta(), prec),
            den: PreparedForm::new(f, prec),
            prec,
        }
    }

    fn eval(&self, z: &Complex) -> Result<Complex, LocateError> {
        let n = self.num.eval(z)?;
        let (d, d_scale) = self.den.eval_with_scale(z)?;
        let d_abs = Float::with_val(self.prec, d.abs_ref());
        // The value of f is unreliable once cancellation eats through half
        // the working precision relative to the summation's own magnitude.
        let floor = d_scale * (Float::with_val(self.prec, 1) >> (self.prec / 2));
        if d_abs < floor {
            return Err(LocateError::ContourTooClose(format!(
                "|f| ≈ {:.3e} on the contour near ({:.4}, {:.4})",
                d_abs.to_f64(),
                z.real().to_f64(),
                z.imag().to_f64()
            )));
        }
        Ok(n / d)
    }
}

fn integrate_polyline(
    g: &LogDerivative,
    vertices: &[Complex],
    prec: u32,
) -> Result<Complex, LocateError> {
    let mut total = Complex::with_val(prec, 0);
    for pair in vertices.windows(2) {
        total += integrate_edge(g, &pair[0], &pair[1], prec)?;
    }
    Ok(total)
}

/// Adaptive Simpson on the straight edge from `a` to `b`:
/// `∫ g dz = (b − a) ∫₀¹ g(a + s(b−a)) ds`.
fn integrate_edge(
    g: &LogDerivative,
    a: &Complex,
    b: &Complex,
    prec: u32,
) -> Result<Complex, LocateError> {
    let dz = Complex::with_val(prec, b - a);
    let at = |s: f64| -> Result<Complex, LocateError> {
        let z = Complex::with_val(prec, a + &(Complex::with_val(prec, &dz) * Float::with_val(prec, s)));
        g.eval(&z)
    };
    let fa = at(0.0)?;
    let fm = at(0.5)?;
    let fb = at(1.0)?;
    let tol = 1e-6;
    let unit = simpson_recurse(&at, 0.0, 1.0, &fa, &fm, &fb, tol, 0, prec)?;
    Ok(unit * dz)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse(
    at: &dyn Fn(f64) -> Result<Complex, LocateError>,
    lo: f64,
    hi: f64,
    flo: &Complex,
    fmid: &Complex,
    fhi: &Complex,
    tol: f64,
    depth: u32,
    prec: u32,
) -> Result<Complex, LocateError> {
    let h = hi - lo;
    let simpson = |f0: &Complex, f1: &Complex, f2: &Complex, width: f64| {
        (Complex::with_val(prec, f0 + f2) + Complex::with_val(prec, f1 * 4u32))
            * Float::with_val(prec, width / 6.0)
    };
    let whole = simpson(flo, fmid, fhi, h);
    let m = (lo + hi) / 2.0;
    let fq1 = at((lo + m) / 2.0)?;
    let fq3 = at((m + hi) / 2.0)?;
    let left = simpson(flo, &fq1, fmid, h / 2.0);
    let right = simpson(fmid, &fq3, fhi, h / 2.0);
    let refined = Complex::with_val(prec, &left + &right);
    let err = Complex::with_val(prec, &refined - &whole);
    if Float::with_val(prec, err.abs_ref()).to_f64() < 15.0 * tol || h < 1e-9 {
        return Ok(refined);
    }
    if depth >= 28 {
        return Err(LocateError::ContourTooClose(
            "quadrature failed to converge; a zero is adjacent to the path".into(),
        ));
    }
    let l = simpson_recurse(at, lo, m, flo, &fq1, fmid, tol / 2.0, depth + 1, prec)?;
    let r = simpson_recurse(at, m, hi, fmid, &fq3, fhi, tol / 2.0, depth + 1, prec)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta, eisenstein, expand, fricke_eisenstein, FormExpr};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn ctx() -> EvalContext {
        EvalContext::new(256)
    }

    fn ek(k: u32, y_min: f64) -> QSeries {
        eisenstein(k, suggested_truncation(256, y_min, k)).unwrap()
    }

    #[test]
    fn delta_at_i_matches_direct_product() {
        let prec = 256;
        let d = delta(suggested_truncation(prec, 1.0, 12));
        let z = Complex::with_val(prec, (0, 1));
        let v = eval_form(&d, &z, &ctx()).unwrap();
        assert!(v.imag().to_f64().abs() < 1e-70);

        // Independent oracle: q·∏(1−q^n)^24 summed as real numbers.
        let q0 = Float::with_val(prec, -2) * hp::pi(prec);
        let q0 = q0.exp();
        let mut prod = Float::with_val(prec, &q0);
        for n in 1..200u32 {
            let qn = Float::with_val(prec, (&q0).pow(n));
            let factor = (Float::with_val(prec, 1) - qn).pow(24u32);
            prod *= factor;
        }
        let diff = Float::with_val(prec, v.real() - &prod).abs();
        assert!(diff.to_f64() < 1e-70, "Δ(i) mismatch: {:.3e}", diff.to_f64());

        // Leading digits of the classical value.
        assert_eq!(&hp::format_decimal(v.real(), 10), "0.0017853699");
    }

    #[test]
    fn corner_vanishing_of_small_eisenstein() {
        let prec = 256;
        let e6 = ek(6, 0.8);
        let i = Complex::with_val(prec, (0, 1));
        let v6 = eval_form(&e6, &i, &ctx()).unwrap();
        assert!(Float::with_val(prec, v6.abs_ref()).to_f64() < 1e-70);

        let e4 = ek(4, 0.8);
        let rho = left_corner(1, prec);
        let v4 = eval_form(&e4, &rho, &ctx()).unwrap();
        assert!(Float::with_val(prec, v4.abs_ref()).to_f64() < 1e-70);
    }

    #[test]
    fn tail_bound_refuses_thin_truncations() {
        let e4 = eisenstein(4, Expo::from_integer(8)).unwrap();
        let low = Complex::with_val(256, (0.0, 0.05));
        assert!(matches!(
            eval_form(&e4, &low, &ctx()),
            Err(LocateError::TailBoundUnsatisfiable { .. })
        ));
        let outside = Complex::with_val(256, (0.3, -1.0));
        assert!(matches!(
            eval_form(&e4, &outside, &ctx()),
            Err(LocateError::OutsideUpperHalfPlane)
        ));
    }

    #[test]
    fn arc_profile_is_real_and_detects_asymmetry() {
        let profile = restricted_real_profile(&ek(12, 0.8), 12, 1, &ctx()).unwrap();
        let theta = Float::with_val(256, 1.8f64);
        profile.value(&theta).unwrap();

        // Δ(2z) alone is not Fricke-symmetric at level 2: the profile must
        // detect a complex value rather than silently project.
        let skew = expand(&FormExpr::DeltaScaled(2), Expo::from_integer(40)).unwrap();
        let profile = restricted_real_profile(&skew, 12, 2, &ctx()).unwrap();
        let theta = Float::with_val(256, 1.9f64);
        assert!(matches!(
            profile.value(&theta),
            Err(LocateError::NotRealOnArc { .. })
        ));
    }

    #[test]
    fn e4_zero_set_on_arc_is_the_left_corner() {
        let profile = restricted_real_profile(&ek(4, 0.8), 4, 1, &ctx()).unwrap();
        let records = find_zeros_on_arc(&profile, 128, 4, "E4").unwrap();
        assert_eq!(records.len(), 1);
        let rec = &records[0];
        assert!(rec.endpoint);
        let two_pi_thirds = 2.0 * std::f64::consts::PI / 3.0;
        assert!((rec.param.to_f64() - two_pi_thirds).abs() < 1e-12);
        assert!(rec.residual.to_f64() < 1e-60);
    }

    #[test]
    fn e12_has_one_interior_arc_zero() {
        let profile = restricted_real_profile(&ek(12, 0.8), 12, 1, &ctx()).unwrap();
        let records = find_zeros_on_arc(&profile, 192, 12, "E12").unwrap();
        assert_eq!(records.len(), 1);
        let rec = &records[0];
        assert!(!rec.endpoint && !rec.even_order_suspect);
        // E12 = (441·E4³ + 250·E6²)/691 vanishes where j = 432000/691,
        // i.e. at θ* ≈ 1.8249 on the arc.
        let theta = rec.param.to_f64();
        assert!(theta > 1.80 && theta < 1.85, "θ* = {theta}");
        assert!(rec.residual.to_f64() < 1e-60);
        assert!(rec.width.to_f64() < 1e-69);

        // Refining at doubled precision shrinks the residual by far more
        // than the safety margin — the signature of a true zero.
        let fine = restricted_real_profile(
            &eisenstein(12, suggested_truncation(512, 0.8, 12)).unwrap(),
            12,
            1,
            &EvalContext::new(512),
        )
        .unwrap();
        let spread = Float::with_val(512, &rec.width) * 2u32;
        let lo = Float::with_val(512, &rec.param) - &spread;
        let hi = Float::with_val(512, &rec.param) + &spread;
        let refined = fine.refine(&lo, &hi, 12, "E12").unwrap();
        assert!(refined.residual < Float::with_val(256, rec.residual.to_f64() * 1e-6));
    }

    #[test]
    fn fricke_profiles_find_arc_zeros() {
        // E_{6,2} on |z| = 1/√2: the profile is real and its zeros lie on
        // the arc; spot-check realness plus at least one zero for k = 6.
        let f = fricke_eisenstein(6, 2, suggested_truncation(256, 0.33, 6)).unwrap();
        let profile = restricted_real_profile(&f, 6, 2, &ctx()).unwrap();
        let records = find_zeros_on_arc(&profile, 128, 6, "E_{6,2}").unwrap();
        assert!(!records.is_empty());
        for rec in &records {
            let norm = Float::with_val(256, rec.z.norm_ref()).to_f64();
            assert!((norm - 0.5).abs() < 1e-40, "|z|² = {norm} should be 1/2");
        }
    }

    #[test]
    fn line_profiles_direct_and_pulled_back() {
        let prec = 256;
        // E4 on L: the only zero is the endpoint ρ.
        let e4 = ek(4, 0.8);
        let profile = line_profile_direct(&e4, 4, LineId::L, &ctx()).unwrap();
        let records = find_zeros_on_line(&profile, 1.6, 96, 4, "E4").unwrap();
        assert_eq!(records.len(), 1);
        assert!(records[0].endpoint);
        assert!((records[0].z.real().to_f64() + 0.5).abs() < 1e-70);

        // E6 on R: the only zero is the endpoint i.
        let e6 = ek(6, 0.8);
        let profile = line_profile_direct(&e6, 6, LineId::R, &ctx()).unwrap();
        let records = find_zeros_on_line(&profile, 2.0, 96, 6, "E6").unwrap();
        assert_eq!(records.len(), 1);
        assert!(records[0].endpoint);

        // Pullback of E12 to R: the unique interior arc zero appears at
        // t* = tan(θ*/2), and transporting the arc point forward lands on
        // the same line point.
        let e12 = ek(12, 0.8);
        let arc = restricted_real_profile(&e12, 12, 1, &ctx()).unwrap();
        let arc_zero = &find_zeros_on_arc(&arc, 192, 12, "E12").unwrap()[0];
        let pulled = line_profile_pullback(&e12, 12, LineId::R, &ctx()).unwrap();
        let line_zeros = find_zeros_on_line(&pulled, 2.0, 192, 12, "E12|R").unwrap();
        assert_eq!(line_zeros.len(), 1);
        let lz = &line_zeros[0];
        assert!(!lz.endpoint);
        let expected_t = (arc_zero.param.to_f64() / 2.0).tan();
        assert!((lz.param.to_f64() - expected_t).abs() < 1e-12);
        let transported = transport(&arc_zero.z, TransportMap::GammaR, false, prec);
        let dist = Complex::with_val(prec, &transported - &lz.z);
        assert!(Float::with_val(prec, dist.abs_ref()).to_f64() < 1e-25);
    }

    #[test]
    fn transport_round_trips_and_maps_corners() {
        let prec = 128;
        let z = Complex::with_val(prec, (0.1234, 1.375));
        for map in [TransportMap::GammaL, TransportMap::GammaR] {
            let there = transport(&z, map, false, prec);
            let back = transport(&there, map, true, prec);
            let dist = Complex::with_val(prec, &back - &z);
            assert!(Float::with_val(prec, dist.abs_ref()).to_f64() < 1e-30);
        }

        // γ_R: i ↦ i·tan(π/4) = i, ρ ↦ i·tan(π/3) = i√3.
        let i = Complex::with_val(prec, (0, 1));
        let im = transport(&i, TransportMap::GammaR, false, prec);
        assert!((im.imag().to_f64() - 1.0).abs() < 1e-25 && im.real().to_f64().abs() < 1e-25);
        let rho = left_corner(1, prec);
        let rho_image = transport(&rho, TransportMap::GammaR, false, prec);
        assert!((rho_image.imag().to_f64() - 3f64.sqrt()).abs() < 1e-25);

        // γ_L: ρ is fixed; i goes to −1/2 + 3i/2.
        let fixed = transport(&rho, TransportMap::GammaL, false, prec);
        let dist = Complex::with_val(prec, &fixed - &rho);
        assert!(Float::with_val(prec, dist.abs_ref()).to_f64() < 1e-25);
        let i_image = transport(&i, TransportMap::GammaL, false, prec);
        assert!((i_image.real().to_f64() + 0.5).abs() < 1e-25);
        assert!((i_image.imag().to_f64() - 1.5).abs() < 1e-25);
    }

    #[test]
    fn contour_counts_match_known_zero_structure() {
        let ctx = EvalContext::new(128);
        let region = FundamentalRegion::new(1, 10.0);
        let trunc = suggested_truncation(128, 0.25, 20);

        // Δ is nonvanishing.
        assert_eq!(count_zeros_contour(&delta(trunc), &region, &ctx).unwrap(), 0);
        // E4 vanishes once (at ρ), E6 once (at i), E12 once (interior).
        let e4 = eisenstein(4, trunc).unwrap();
        assert_eq!(count_zeros_contour(&e4, &region, &ctx).unwrap(), 1);
        let e6 = eisenstein(6, trunc).unwrap();
        assert_eq!(count_zeros_contour(&e6, &region, &ctx).unwrap(), 1);
        let e12 = eisenstein(12, trunc).unwrap();
        assert_eq!(count_zeros_contour(&e12, &region, &ctx).unwrap(), 1);
        // E6² = Δ·(J − 1728) has a double zero at i.
        let e6sq = e6.pow(2).unwrap();
        assert_eq!(count_zeros_contour(&e6sq, &region, &ctx).unwrap(), 2);

        // Corner multiplicities.
        let prec = 128;
        assert_eq!(
            corner_multiplicity(&e4, &left_corner(1, prec), 0.05, &ctx).unwrap(),
            1
        );
        assert_eq!(
            corner_multiplicity(&e4, &right_corner(1, prec), 0.05, &ctx).unwrap(),
            0
        );
        assert_eq!(
            corner_multiplicity(&e6, &right_corner(1, prec), 0.05, &ctx).unwrap(),
            1
        );
        let e8 = eisenstein(8, trunc).unwrap();
        assert_eq!(
            corner_multiplicity(&e8, &left_corner(1, prec), 0.05, &ctx).unwrap(),
            2
        );
        assert_eq!(
            corner_multiplicity(&delta(trunc), &right_corner(1, prec), 0.05, &ctx).unwrap(),
            0
        );
    }

    #[test]
    fn census_for_a_fricke_form() {
        // E_{8,2}: contour total over the level-2 region equals interior
        // arc zeros plus both corner multiplicities.
        let ctx = EvalContext::new(128);
        let trunc = suggested_truncation(128, 0.2, 10);
        let f = fricke_eisenstein(8, 2, trunc).unwrap();
        let total = count_zeros_contour(&f, &FundamentalRegion::new(2, 10.0), &ctx).unwrap();

        let profile = restricted_real_profile(&f, 8, 2, &EvalContext::new(256)).unwrap();
        let records = find_zeros_on_arc(&profile, 160, 8, "E_{8,2}").unwrap();
        let interior = records.iter().filter(|r| !r.endpoint).count() as i64;
        let prec = 128;
        let wl = corner_multiplicity(&f, &left_corner(2, prec), 0.05, &ctx).unwrap();
        let wr = corner_multiplicity(&f, &right_corner(2, prec), 0.05, &ctx).unwrap();
        assert_eq!(total, interior + wl + wr, "census mismatch for E_{{8,2}}");
    }

    #[test]
    fn suggested_truncation_is_monotone_in_demand() {
        let a = suggested_truncation(128, 0.8, 4);
        let b = suggested_truncation(256, 0.8, 4);
        let c = suggested_truncation(256, 0.25, 4);
        assert!(b > a);
        assert!(c > b);
        // And actually sufficient: prepared E4 evaluates at the stated height.
        let e4 = eisenstein(4, c).unwrap();
        let z = Complex::with_val(256, (0.0, 0.25));
        eval_form(&e4, &z, &EvalContext::new(256)).unwrap();
    }

    #[test]
    fn even_order_touch_is_flagged() {
        // The square of the E12 profile's zero: (Δ(J−j(θ*)))-free synthetic
        // test using E12² on the arc, whose interior zero is double.
        let e12 = ek(12, 0.8);
        let sq = e12.pow(2).unwrap();
        let profile = restricted_real_profile(&sq, 24, 1, &ctx()).unwrap();
        let records = find_zeros_on_arc(&profile, 192, 24, "E12^2").unwrap();
        assert_eq!(records.len(), 1);
        assert!(records[0].even_order_suspect);
        assert!(records[0].residual.to_f64() < 1e-30);
    }

    #[test]
    fn weight_zero_profile_handles_j_values() {
        // J − 1728 vanishes at i, an endpoint of the arc.
        let expr = FormExpr::sub(FormExpr::J, FormExpr::Const(BigRational::from_integer(BigInt::from(1728))));
        let j = expand(&expr, suggested_truncation(256, 0.8, 12)).unwrap();
        let profile = restricted_real_profile(&j, 0, 1, &ctx()).unwrap();
        let records = find_zeros_on_arc(&profile, 128, 0, "J-1728").unwrap();
        assert_eq!(records.len(), 1);
        assert!(records[0].endpoint);
        assert!((records[0].param.to_f64() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
