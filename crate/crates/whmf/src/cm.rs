//! CM points on the distinguished loci, via binary quadratic forms.
//!
//! A point is *CM* when it satisfies an integral quadratic equation
//! `a z² + b z + c = 0` with `a > 0` and negative discriminant; the triple is
//! kept primitive.  Each enumerated point carries its defining form, the
//! locus it lives on, and the `(D, a)` label under which it was found:
//! points on the vertical lines are parametrized as
//! `−1/2 + i√|D|/(2a)` (with `D ≡ 1 mod 4`) and `i√|D|/(2a)` (with
//! `D ≡ 0 mod 4`), where `D` ranges over negative discriminants of the given
//! parity — not only fundamental ones, since e.g. `i√3` needs `D = −12`.
//!
//! The enumerations reproduce, exactly and in order, the finite CM lists on
//! the circular arcs `|z| = 1/√p` and on the two boundary lines up to a
//! height bound:
//!
//! * on the arcs, primitive forms `(pc, b, c)` with `0 ≤ b ≤ pc` subject to
//!   `|D| ≤ 4p`, the height cap that keeps the conjugate point
//!   `α₁ = i√|D|/2` (or its odd-`D` translate) inside the pulled-back
//!   segment;
//! * on the lines, labels `(D, a)` whose point lies in the height window,
//!   again capped by `|D| < 4h²` so that `α₁` itself stays below the height
//!   bound, deduplicated towards the smallest `|D|`.
//!
//! [`reduce_to_fundamental_domain`] moves arbitrary points into the standard
//! fundamental domain (left-closed convention) and returns the word applied,
//! and [`coset_corner_images`] lists the images of the two corner points
//! under the nontrivial coset representatives, the exceptional set for
//! zero-transfer between level 1 and level p.

use num_integer::Integer;
use num_rational::BigRational;
use rug::{Complex, Float};


/// Errors from form construction and domain reduction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CmError {
    /// The triple does not define a positive definite form.
    #[error("({a}, {b}, {c}) is not positive definite with negative discriminant")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },
    /// The triple has a common factor.
    #[error("({a}, {b}, {c}) is not primitive")]
    NotPrimitive { a: i64, b: i64, c: i64 },
    /// A discriminant must be a negative integer ≡ 0 or 1 mod 4.
    #[error("{0} is not a negative discriminant")]
    BadDiscriminant(i64),
    /// Only prime levels are supported.
    #[error("level {0} is not prime")]
    CompositeLevel(u32),
    /// The reduction loop exceeded its iteration cap.
    #[error("fundamental-domain reduction did not converge")]
    NonConvergence,
}

/// A primitive positive definite integral binary quadratic form
/// `a x² + b x y + c y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    /// Validates positivity, negative discriminant and primitivity.
    pub fn new(a: i64, b: i64, c: i64) -> Result<QuadraticForm, CmError> {
        if a <= 0 || b * b - 4 * a * c >= 0 {
            return Err(CmError::NotPositiveDefinite { a, b, c });
        }
        if a.gcd(&b).gcd(&c) != 1 {
            return Err(CmError::NotPrimitive { a, b, c });
        }
        Ok(QuadraticForm { a, b, c })
    }

    /// `b² − 4ac` (negative).
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The principal form of discriminant `d`: `(1, 0, |d|/4)` for
    /// `d ≡ 0 mod 4` and `(1, 1, (1+|d|)/4)` for `d ≡ 1 mod 4`.
    pub fn principal(d: i64) -> Result<QuadraticForm, CmError> {
        if d >= 0 {
            return Err(CmError::BadDiscriminant(d));
        }
        match d.rem_euclid(4) {
            0 => QuadraticForm::new(1, 0, -d / 4),
            1 => QuadraticForm::new(1, 1, (1 - d) / 4),
            _ => Err(CmError::BadDiscriminant(d)),
        }
    }

    /// Gauss reduction: the unique equivalent form with `|b| ≤ a ≤ c` and
    /// `b ≥ 0` whenever `|b| = a` or `a = c`.
    pub fn reduced(&self) -> QuadraticForm {
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        loop {
            // Normalize b into (−a, a] by translations.
            if b > a || b <= -a {
                let shift = (b + a).div_euclid(2 * a);
                // (a, b, c) ↦ (a, b − 2ka, c − kb + k²a) under z ↦ z + k.
                c += shift * shift * a - shift * b;
                b -= 2 * shift * a;
            }
            if a > c {
                // Apply S: (a, b, c) ↦ (c, −b, a).
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if (b < 0 && -b == a) || (b < 0 && a == c) {
                b = -b;
            }
            break;
        }
        QuadraticForm { a, b, c }
    }

    /// The root `(−b + i√|D|) / (2a)` in the upper half plane.
    pub fn root(&self, prec: u32) -> Complex {
        let disc = Float::with_val(prec, -self.discriminant());
        let im = disc.sqrt() / Float::with_val(prec, 2 * self.a);
        let re = Float::with_val(prec, -self.b) / Float::with_val(prec, 2 * self.a);
        Complex::with_val(prec, (re, im))
    }
}

/// The locus a CM point was enumerated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locus {
    /// The arc `|z| = 1, π/2 ≤ arg z ≤ 2π/3`.
    ArcA,
    /// The arc `|z| = 1/√p` between the corners of the level-p domain.
    FrickeArc(u32),
    /// The vertical line `Re z = −1/2`.
    LineL,
    /// The vertical line `Re z = 0`.
    LineR,
    /// The orbit of the two corners under the nontrivial level-p cosets.
    CornerOrbit(u32),
}

impl std::fmt::Display for Locus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Locus::ArcA => write!(f, "A"),
            Locus::FrickeArc(p) => write!(f, "A{p}"),
            Locus::LineL => write!(f, "L"),
            Locus::LineR => write!(f, "R"),
            Locus::CornerOrbit(p) => write!(f, "C{p}"),
        }
    }
}

/// A CM point: its primitive form, the locus, and the `(D, a)` label it was
/// enumerated under (for arcs the label is the form's own discriminant and
/// leading coefficient).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMPoint {
    pub form: QuadraticForm,
    pub locus: Locus,
    /// Label discriminant: the `D` of the `(D, a)` parametrization.
    pub disc: i64,
    /// Label denominator parameter `a` (the point has imaginary part
    /// `√|D|/(2a)`).
    pub denom: i64,
}

impl CMPoint {
    fn from_form(form: QuadraticForm, locus: Locus) -> CMPoint {
        CMPoint { disc: form.discriminant(), denom: form.a, form, locus }
    }

    /// The point as a complex number.
    pub fn approx(&self, prec: u32) -> Complex {
        self.form.root(prec)
    }

    /// Exact real part as a rational.
    pub fn re(&self) -> BigRational {
        BigRational::new((-self.form.b).into(), (2 * self.form.a).into())
    }

    /// Exact squared imaginary part as a rational.
    pub fn im_squared(&self) -> BigRational {
        BigRational::new(
            (-self.form.discriminant()).into(),
            (4 * self.form.a * self.form.a).into(),
        )
    }

    /// Renders the point as an exact surd `(−b + i·s√m) / (2a)` in lowest
    /// terms, e.g. `i`, `(-1+i*sqrt(3))/2`, `i*sqrt(2)/2`.
    pub fn surd(&self) -> String {
        let (a, b) = (self.form.a, self.form.b);
        let d = -self.form.discriminant();
        // |D| = s²·m with m squarefree.
        let mut m = d;
        let mut s = 1i64;
        let mut f = 2i64;
        while f * f <= m {
            while m % (f * f) == 0 {
                m /= f * f;
                s *= f;
            }
            f += 1;
        }
        let g = gcd3(b.abs(), s, 2 * a);
        let (num_re, num_im, den) = (-b / g, s / g, 2 * a / g);
        let root = if m == 1 {
            String::new()
        } else {
            format!("*sqrt({m})")
        };
        let imag = match (num_im, root.is_empty()) {
            (1, true) => "i".to_string(),
            (1, false) => format!("i{root}"),
            (v, _) => format!("{v}*i{root}"),
        };
        let numerator = if num_re == 0 {
            imag
        } else {
            format!("({num_re}+{imag})")
        };
        if den == 1 {
            numerator
        } else {
            format!("{numerator}/{den}")
        }
    }

    /// JSON record with the form, label and exact coordinates.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "a": self.form.a,
            "b": self.form.b,
            "c": self.form.c,
            "form_disc": self.form.discriminant(),
            "disc": self.disc,
            "denom": self.denom,
            "locus": self.locus.to_string(),
            "surd": self.surd(),
        })
    }
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
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

/// The distinguished conjugate point attached to a label discriminant:
/// `i√|D|/2` for `D ≡ 0 mod 4` and `(−1 + i√|D|)/2` for `D ≡ 1 mod 4` — the
/// root of the principal form, which lies on the corresponding vertical line.
pub fn galois_rep(d: i64) -> Result<CMPoint, CmError> {
    let form = QuadraticForm::principal(d)?;
    let locus = if d.rem_euclid(4) == 0 { Locus::LineR } else { Locus::LineL };
    Ok(CMPoint { form, locus, disc: d, denom: 1 })
}

/// All reduced primitive positive-definite forms of discriminant `d`
/// (`−a < b ≤ a ≤ c`, with `b ≥ 0` when `a = c`), sorted by `(a, b)`.  The
/// count is the class number of the order of discriminant `d`.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadraticForm>, CmError> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(CmError::BadDiscriminant(d));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in (-a + 1)..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || gcd3(a, b, c) != 1 {
                continue;
            }
            if a == c && b < 0 {
                continue;
            }
            out.push(QuadraticForm::new(a, b, c)?);
        }
        a += 1;
    }
    out.sort_by_key(|f| (f.a, f.b));
    Ok(out)
}

/// CM points on the closed arc `A`: exactly `i` and `ρ`.
///
/// A root of `(a, b, a)` on the unit arc is a Galois-stable CM point only
/// when the principal form of its discriminant also has its root on the
/// arc, which forces `|D| ∈ {3, 4}`.
pub fn enumerate_arc_a() -> Vec<CMPoint> {
    let mut points = Vec::new();
    // Forms with root on |z| = 1 have c = a; sweep small b.
    for a in 1..=2i64 {
        for b in 0..=a {
            let Ok(form) = QuadraticForm::new(a, b, a) else { continue };
            let d = form.discriminant();
            let principal = QuadraticForm::principal(d).expect("negative discriminant");
            if principal.c != 1 {
                continue;
            }
            points.push(CMPoint::from_form(form, Locus::ArcA));
        }
    }
    points.sort_by(|p, q| q.re().cmp(&p.re()));
    points.dedup_by_key(|p| (p.re(), p.im_squared()));
    points
}

/// CM points on the arc `|z| = 1/√p` bounding the level-p domain, in order
/// of decreasing real part.
///
/// Roots on the arc come from primitive forms `(pc, b, c)`; the transport
/// argument pulls the segment back to height at most `√p` on the vertical
/// lines, so the conjugate point survives only when `|D| ≤ 4p`.
pub fn enumerate_fricke_arc(p: u32) -> Result<Vec<CMPoint>, CmError> {
    if !is_prime(p) {
        return Err(CmError::CompositeLevel(p));
    }
    let p64 = i64::from(p);
    let mut points = Vec::new();
    // |D| = 4pc² − b² ≤ 4p forces c = 1 already; keep the general scan tight.
    for c in 1..=2i64 {
        let a = p64 * c;
        for b in 0..=a {
            let Ok(form) = QuadraticForm::new(a, b, c) else { continue };
            if -form.discriminant() <= 4 * p64 {
                points.push(CMPoint::from_form(form, Locus::FrickeArc(p)));
            }
        }
    }
    points.sort_by(|x, y| y.re().cmp(&x.re()));
    points.dedup_by_key(|x| (x.re(), x.im_squared()));
    Ok(points)
}

/// The integral form of the line-L label `(D, a)`: the point
/// `(−1 + i√|D|)/2a·…` rewritten as a root of `(4a², 4a², a² + |D|)/g`.
fn line_l_form(d: i64, a: i64) -> QuadraticForm {
    let (fa, fb, fc) = (4 * a * a, 4 * a * a, a * a + (-d));
    let g = gcd3(fa, fb, fc);
    QuadraticForm { a: fa / g, b: fb / g, c: fc / g }
}

/// The integral form of the line-R label `(D, a)`: `(4a², 0, |D|)/g`.
fn line_r_form(d: i64, a: i64) -> QuadraticForm {
    let (fa, fb, fc) = (4 * a * a, 0, -d);
    let g = gcd3(fa, fb, fc);
    QuadraticForm { a: fa / g, b: fb / g, c: fc / g }
}

/// Shared enumeration over labels `(D, a)` for the two vertical lines.
///
/// `parity` selects `|D| mod 4` (3 on L, 0 on R); the window keeps the point
/// at height `[base, h)` with `base = √3/2` on L and `1` on R, and the cap
/// `|D| < 4h²` keeps the conjugate label point below the height bound.  All
/// comparisons are exact (squared heights are rational).  Points coinciding
/// for several labels keep the smallest `|D|`.
fn enumerate_line(
    d_bound: i64,
    height: &BigRational,
    on_l: bool,
) -> Vec<CMPoint> {
    let parity = if on_l { 3 } else { 0 };
    let four_h2 = BigRational::from_integer(4.into()) * height * height;
    let mut points: Vec<CMPoint> = Vec::new();
    let mut seen: Vec<BigRational> = Vec::new();
    for dd in 3..=d_bound {
        if dd % 4 != parity {
            continue;
        }
        if BigRational::from_integer(dd.into()) >= four_h2 {
            continue;
        }
        let mut a = 1i64;
        loop {
            // Height window: base ≤ √|D|/(2a) < h, tested on squares.
            let im2 = BigRational::new(dd.into(), (4 * a * a).into());
            let base2 = if on_l {
                BigRational::new(3.into(), 4.into())
            } else {
                BigRational::from_integer(1.into())
            };
            if im2 < base2 {
                break;
            }
            if &im2 < &(height * height) {
                if !seen.contains(&im2) {
                    seen.push(im2);
                    let form = if on_l { line_l_form(-dd, a) } else { line_r_form(-dd, a) };
                    points.push(CMPoint {
                        form,
                        locus: if on_l { Locus::LineL } else { Locus::LineR },
                        disc: -dd,
                        denom: a,
                    });
                }
            }
            a += 1;
        }
    }
    points.sort_by(|x, y| {
        (-x.disc, x.denom).cmp(&(-y.disc, y.denom))
    });
    points
}

/// CM points `−1/2 + i√|D|/(2a)` on the line `Re z = −1/2` with label
/// `|D| ≤ d_bound`, height in `[√3/2, h)`.
pub fn enumerate_line_l(d_bound: i64, height: &BigRational) -> Vec<CMPoint> {
    enumerate_line(d_bound, height, true)
}

/// CM points `i√|D|/(2a)` on the line `Re z = 0` with label `|D| ≤ d_bound`,
/// height in `[1, h)`.
pub fn enumerate_line_r(d_bound: i64, height: &BigRational) -> Vec<CMPoint> {
    enumerate_line(d_bound, height, false)
}

/// Images of the corners `i` and `ρ` under the nontrivial coset
/// representatives `S·T^n`, `0 ≤ n < p`: the points
/// `(i − n)/(n² + 1)` and `(ρ + 1 − n)/(n² − n + 1)`, with defining forms
/// `(n²+1, 2n, 1)` and `(n²−n+1, 2n−1, 1)`.
pub fn coset_corner_images(p: u32) -> Result<Vec<CMPoint>, CmError> {
    if !is_prime(p) {
        return Err(CmError::CompositeLevel(p));
    }
    let mut points = Vec::new();
    for n in 0..i64::from(p) {
        let form = QuadraticForm::new(n * n + 1, 2 * n, 1).expect("disc −4 family");
        points.push(CMPoint::from_form(form, Locus::CornerOrbit(p)));
    }
    for n in 0..i64::from(p) {
        let form = QuadraticForm::new(n * n - n + 1, 2 * n - 1, 1).expect("disc −3 family");
        points.push(CMPoint::from_form(form, Locus::CornerOrbit(p)));
    }
    Ok(points)
}

/// Moves `z` into the standard fundamental domain (|Re| ≤ 1/2, |z| ≥ 1, with
/// the left-closed convention `Re = −1/2` and the left unit-arc half kept)
/// by alternating translations and inversions.  Returns the reduced point
/// together with the integer matrix `γ` with `γ·z = z'`.
pub fn reduce_to_fundamental_domain(
    z: &Complex,
    prec: u32,
) -> Result<(Complex, [[i64; 2]; 2]), CmError> {
    let mut w = Complex::with_val(prec, z);
    let mut gamma = [[1i64, 0], [0, 1]];
    let half = Float::with_val(prec, 0.5);
    let snap = Float::with_val(prec, 1) >> (prec / 2);
    for _ in 0..10_000 {
        // Translate Re into [−1/2, 1/2).
        let shift_f = Float::with_val(prec, w.real() + &half).floor();
        let shift = shift_f.to_f64() as i64;
        if shift != 0 {
            w -= Float::with_val(prec, shift);
            gamma = mat_mul([[1, -shift], [0, 1]], gamma);
        }
        let norm = Float::with_val(prec, w.norm_ref());
        if norm < Float::with_val(prec, 1) - &snap {
            // Invert: z ↦ −1/z.
            w = -w.recip();
            gamma = mat_mul([[0, -1], [1, 0]], gamma);
            continue;
        }
        // Boundary conventions: push Re = 1/2 to −1/2, and fold the right
        // half of the unit arc onto the left half.
        let re_at_half = Float::with_val(prec, w.real() - &half).abs() < snap;
        if re_at_half {
            w -= 1u32;
            gamma = mat_mul([[1, -1], [0, 1]], gamma);
        }
        let on_arc = Float::with_val(prec, &norm - 1u32).abs() < snap;
        if on_arc && w.real().is_sign_positive() && !w.real().is_zero() {
            w = -w.recip();
            gamma = mat_mul([[0, -1], [1, 0]], gamma);
            // A fold can leave Re = 1/2 only if it started there; loop once
            // more to re-normalize.
            continue;
        }
        return Ok((w, gamma));
    }
    Err(CmError::NonConvergence)
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Applies an integer Möbius matrix to a point.
pub fn apply_mobius(m: [[i64; 2]; 2], z: &Complex, prec: u32) -> Complex {
    let num = Complex::with_val(prec, z) * m[0][0] + Float::with_val(prec, m[0][1]);
    let den = Complex::with_val(prec, z) * m[1][0] + Float::with_val(prec, m[1][1]);
    num / den
}
