//! `hopf`: pointwise O'Neill data of a weighted circle foliation.

use super::{Check, Finding, ReportBuilder, RunConfig, RunReport};
use crate::curvature::{curvature_term, TransverseCurvature};
use crate::error::Result;
use crate::hopf::{
    bracket_displays, dot, kahler_form, mean_curvature, norm_displays, oneill_closed_form, sample_indexed,
    transverse_model, AdaptedFrame, WeightedHopfModel, DEFAULT_EPS_DEG,
};
use crate::oneill::{bplus_norm, prop31_value};
use crate::sweep::map_indexed;

pub const FRAME_TOL: f64 = 1e-10;
pub const DISPLAY_TOL: f64 = 1e-12;
pub const BRACKET_TOL: f64 = 1e-10;
pub const VALUE_TOL: f64 = 1e-9;
pub const CLOSED_FORM_TOL: f64 = 1e-8;
pub const KAPPA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
struct Kahler {
    curvature_term: f64,
    prop31: f64,
    bplus: f64,
    norm_sq: f64,
}

#[derive(Debug, Clone, Copy)]
struct PointResult {
    a_brackets: f64,
    a_closed: f64,
    kappa: f64,
    frame: f64,
    tangency: f64,
    norms: f64,
    brackets: f64,
    scal: f64,
    kahler: Option<Kahler>,
}

fn evaluate(model: &WeightedHopfModel, seed: u64, index: u64) -> Result<PointResult> {
    let z = sample_indexed(model, seed, index, DEFAULT_EPS_DEG)?;
    let frame = AdaptedFrame::new(model, &z)?;
    let (rm, a) = transverse_model(model, &z)?;
    let a_brackets = crate::oneill::oneill_norm(&a);
    let kappa = mean_curvature(model, &z)?;
    let tc = TransverseCurvature::compute(&rm, &a)?;
    let worst = |xs: Vec<f64>| xs.into_iter().fold(0.0f64, |m, x| m.max(x));
    let kahler = if model.is_hopf() {
        let w = kahler_form(model, &frame)?;
        Some(Kahler {
            curvature_term: curvature_term(&tc.ricci, &tc.riemann, &w)?,
            prop31: prop31_value(&rm, &a, &w)?,
            bplus: bplus_norm(&a, &w)?,
            norm_sq: w.norm_sq(),
        })
    } else {
        None
    };
    Ok(PointResult {
        a_brackets,
        a_closed: oneill_closed_form(model, &z)?,
        kappa: dot(&kappa, &kappa).sqrt(),
        frame: frame.gram_residual(),
        tangency: frame.tangency_residual(&z),
        norms: worst(norm_displays(model, &z)?.iter().map(|d| (d.computed - d.displayed).abs()).collect()),
        brackets: worst(bracket_displays(model, &z)?.iter().map(|d| (d.computed - d.displayed).abs()).collect()),
        scal: tc.scalar,
        kahler,
    })
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Worst value of `f` over the points, with the index where it occurs.
fn worst_by(points: &[PointResult], f: impl Fn(&PointResult) -> f64) -> (usize, f64) {
    points
        .iter()
        .map(f)
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| if v > bv || v.is_nan() { (i, v) } else { (bi, bv) })
}

pub fn cmd_hopf(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let model = config.model()?;
    let mut report = ReportBuilder::new(config);
    let points: Vec<PointResult> = map_indexed(config.samples, |i| evaluate(&model, config.seed, i as u64))
        .into_iter()
        .collect::<Result<_>>()?;
    let q = model.q() as f64;
    let m = model.m() as f64;

    for (i, p) in points.iter().enumerate() {
        report.point(&[
            ("index", i as f64),
            ("a_norm_sq_brackets", p.a_brackets),
            ("a_norm_sq_closed", p.a_closed),
            ("kappa_norm", p.kappa),
            ("frame_residual", p.frame),
            ("scal_nabla", p.scal),
        ]);
    }

    let (_, v) = worst_by(&points, |p| p.frame);
    report.check(Check::eq("frame orthonormality", v, 0.0, FRAME_TOL));
    let (_, v) = worst_by(&points, |p| p.tangency);
    report.check(Check::eq("frame tangent to sphere", v, 0.0, FRAME_TOL));
    let (_, v) = worst_by(&points, |p| p.norms);
    report.check(Check::eq("field norm displays", v, 0.0, DISPLAY_TOL));
    let (_, v) = worst_by(&points, |p| p.brackets);
    report.check(Check::eq("bracket pairing displays", v, 0.0, BRACKET_TOL));
    let (i, _) = worst_by(&points, |p| (3.0 * p.a_brackets - (p.scal - q * (q - 1.0))).abs());
    report.check(Check::eq(
        "sandwich identity 3|A|^2 = Scal^nabla - q(q-1)",
        3.0 * points[i].a_brackets,
        points[i].scal - q * (q - 1.0),
        VALUE_TOL * points[i].scal.abs().max(1.0),
    ));

    if model.is_hopf() {
        let target = 2.0 * (m - 1.0);
        let (i, _) = worst_by(&points, |p| (p.a_brackets - target).abs());
        report.check(Check::eq("|A|^2 = 2(m-1)", points[i].a_brackets, target, VALUE_TOL));
        let (_, v) = worst_by(&points, |p| p.kappa);
        report.check(Check::eq("mean curvature vanishes", v, 0.0, KAPPA_TOL));
        let (i, _) = worst_by(&points, |p| (p.scal - q * (q + 2.0)).abs());
        report.check(Check::eq("Scal^nabla = q(q+2)", points[i].scal, q * (q + 2.0), VALUE_TOL));
        let kahler: Vec<Kahler> = points.iter().filter_map(|p| p.kahler).collect();
        let pick = |f: &dyn Fn(&Kahler) -> f64| {
            kahler
                .iter()
                .copied()
                .max_by(|a, b| f(a).total_cmp(&f(b)))
                .expect("at least two points")
        };
        let k = pick(&|k| k.curvature_term.abs());
        report.check(Check::eq("Kahler form <R(w),w> = 0", k.curvature_term, 0.0, VALUE_TOL));
        let k = pick(&|k| (k.prop31 - k.bplus).abs());
        report.check(Check::eq("Kahler form E(w) = |B+(w)|^2", k.prop31, k.bplus, VALUE_TOL));
        let k = pick(&|k| (k.norm_sq - q / 2.0).abs());
        report.check(Check::eq("Kahler form |w|^2 = q/2", k.norm_sq, q / 2.0, DISPLAY_TOL));
    }

    let (i, diff) = worst_by(&points, |p| (p.a_closed - p.a_brackets).abs());
    report.check(
        Check::eq(
            "closed-form |A|^2 vs brackets",
            points[i].a_closed,
            points[i].a_brackets,
            CLOSED_FORM_TOL,
        )
        .advisory(),
    );
    if diff > CLOSED_FORM_TOL {
        let mismatched = points.iter().filter(|p| (p.a_closed - p.a_brackets).abs() > CLOSED_FORM_TOL).count();
        report.finding(Finding::new(
            "closed-form-mismatch",
            format!(
                "the closed-form |A|^2 disagrees with the bracket computation at {mismatched} of {} points; \
                 the bracket route is authoritative",
                points.len()
            ),
            &[
                ("worst_index", i as f64),
                ("closed_form", points[i].a_closed),
                ("brackets", points[i].a_brackets),
                ("difference", points[i].a_closed - points[i].a_brackets),
            ],
        ));
    }

    let norms: Vec<f64> = points.iter().map(|p| p.a_brackets).collect();
    let (mean, var) = mean_var(&norms);
    report.stat("a_norm_sq_mean", mean);
    report.stat("a_norm_sq_variance", var);
    report.stat("a_norm_sq_min", norms.iter().copied().fold(f64::INFINITY, f64::min));
    report.stat("a_norm_sq_max", norms.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    report.stat("kappa_norm_min", points.iter().map(|p| p.kappa).fold(f64::INFINITY, f64::min));
    report.stat("kappa_norm_max", points.iter().map(|p| p.kappa).fold(f64::NEG_INFINITY, f64::max));
    report.stat("scal_nabla_mean", mean_var(&points.iter().map(|p| p.scal).collect::<Vec<_>>()).0);
    report.stat("closed_form_max_abs_diff", diff);
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s5_report() {
        let cfg = RunConfig {
            samples: 10,
            ..RunConfig::hopf(vec![1.0; 3])
        };
        let r = cmd_hopf(&cfg).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.render_text());
        assert!(r.findings.is_empty());
        assert_eq!(r.points.len(), 10);
    }

    #[test]
    fn weighted_report_has_variance() {
        let cfg = RunConfig {
            samples: 30,
            ..RunConfig::hopf(vec![1.0, 1.0, 0.5])
        };
        let r = cmd_hopf(&cfg).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.render_text());
        let var = r.summary.stats.iter().find(|v| v.name == "a_norm_sq_variance").unwrap().value.0;
        assert!(var > 0.01);
    }
}
