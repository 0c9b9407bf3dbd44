//! Reference targets for the `verify` subcommand.
//!
//! Each target regenerates one of the checked-in reference lists from
//! scratch — CM-point enumerations in exact surd notation, or integrality
//! certificates — and is compared byte-for-byte against its golden file.
//! The goldens are embedded at compile time; `--golden-dir` substitutes a
//! directory of replacement files, which the test suite uses to prove that
//! corruption is detected.

use num_rational::BigRational;
use whmf::classify::{integrality_certificate, CertificateOutcome};
use whmf::cm;
use whmf::forms::{expand, FormExpr};
use whmf::qseries::Expo;

use crate::render::{point_rows, Format};

/// A named reference list: its golden content and its regenerator.
pub struct Target {
    pub name: &'static str,
    pub golden: &'static str,
    pub generate: fn() -> Result<String, String>,
}

/// All targets, in report order.
pub fn all_targets() -> Vec<Target> {
    vec![
        Target {
            name: "arc-a",
            golden: include_str!("../golden/arc-a.txt"),
            generate: || Ok(point_rows(&cm::enumerate_arc_a()).render(Format::Table)),
        },
        Target {
            name: "fricke-p2",
            golden: include_str!("../golden/fricke-p2.txt"),
            generate: || fricke(2),
        },
        Target {
            name: "fricke-p3",
            golden: include_str!("../golden/fricke-p3.txt"),
            generate: || fricke(3),
        },
        Target {
            name: "line-l",
            golden: include_str!("../golden/line-l.txt"),
            generate: || {
                let height = BigRational::from_integer(2.into());
                Ok(point_rows(&cm::enumerate_line_l(1000, &height)).render(Format::Table))
            },
        },
        Target {
            name: "line-r",
            golden: include_str!("../golden/line-r.txt"),
            generate: || {
                let height = BigRational::from_integer(2.into());
                Ok(point_rows(&cm::enumerate_line_r(1000, &height)).render(Format::Table))
            },
        },
        Target {
            name: "corner-images-p2",
            golden: include_str!("../golden/corner-images-p2.txt"),
            generate: || corners(2),
        },
        Target {
            name: "corner-images-p3",
            golden: include_str!("../golden/corner-images-p3.txt"),
            generate: || corners(3),
        },
        Target {
            name: "corner-images-p5",
            golden: include_str!("../golden/corner-images-p5.txt"),
            generate: || corners(5),
        },
        Target {
            name: "certificates",
            golden: include_str!("../golden/certificates.txt"),
            generate: certificates,
        },
    ]
}

fn fricke(p: u32) -> Result<String, String> {
    let points = cm::enumerate_fricke_arc(p).map_err(|e| e.to_string())?;
    Ok(point_rows(&points).render(Format::Table))
}

fn corners(p: u32) -> Result<String, String> {
    let points = cm::coset_corner_images(p).map_err(|e| e.to_string())?;
    Ok(point_rows(&points).render(Format::Table))
}

/// Grades the three example families: a monic-but-fractional form (some
/// coefficient not integral), a fractional rescaling of an integral form,
/// and an integral form.
fn certificates() -> Result<String, String> {
    let half = BigRational::new(1.into(), 2.into());
    let j_minus = |c: i64| {
        FormExpr::sub(FormExpr::J, FormExpr::Const(BigRational::from_integer(c.into())))
    };
    let examples: Vec<(&str, FormExpr)> = vec![
        (
            "delta-times-j-minus-half",
            FormExpr::Product(vec![
                FormExpr::Delta,
                FormExpr::sub(FormExpr::J, FormExpr::Const(half.clone())),
            ]),
        ),
        (
            "half-delta-times-j-minus-1728",
            FormExpr::Scale(half, Box::new(FormExpr::Product(vec![FormExpr::Delta, j_minus(1728)]))),
        ),
        ("delta", FormExpr::Delta),
    ];
    let mut out = String::new();
    for (name, expr) in &examples {
        let series = expand(expr, Expo::from_integer(24)).map_err(|e| e.to_string())?;
        let report = integrality_certificate(&series, 12).map_err(|e| e.to_string())?;
        out.push_str(&format!("{name}: {}\n", outcome_phrase(report.outcome)));
    }
    Ok(out)
}

pub fn outcome_phrase(outcome: CertificateOutcome) -> &'static str {
    match outcome {
        CertificateOutcome::AllIntegral => "all coefficients integral",
        CertificateOutcome::Guaranteed => "transcendental zero guaranteed",
        CertificateOutcome::HypothesesNotMet => "hypotheses not met",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_target_matches_its_embedded_golden() {
        for target in all_targets() {
            let actual = (target.generate)().expect("target generates");
            assert_eq!(actual, target.golden, "target {} drifted", target.name);
        }
    }
}
