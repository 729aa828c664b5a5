//! Pointwise evaluators for the O'Neill-norm bounds.
//!
//! A negative gap is data, not a failure: the theorems carry existence
//! hypotheses (parallel or harmonic forms) that a pointwise evaluator cannot
//! check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::identities::prop31_with;
use super::ONeillTensor;
use crate::curvature::{sectional_extremes, RiemannTensor};
use crate::error::{Error, Result};
use crate::exterior::AlternatingForm;
use crate::gram::ContractionGram;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremId {
    /// `Scal^∇ − q(q−1)K₁ ≤ 3|A|²`
    SandwichLower,
    /// `3|A|² ≤ Scal^∇ − q(q−1)K₀`
    SandwichUpper,
    Thm31,
    Thm32,
    Thm41,
    Prop41,
    /// No parallel 1-form under positive curvature: `0 > max E(α)`.
    Cor31,
}

impl TheoremId {
    pub fn label(&self) -> &'static str {
        match self {
            TheoremId::SandwichLower => "sandwich-lower",
            TheoremId::SandwichUpper => "sandwich-upper",
            TheoremId::Thm31 => "thm3.1",
            TheoremId::Thm32 => "thm3.2",
            TheoremId::Thm41 => "thm4.1",
            TheoremId::Prop41 => "prop4.1",
            TheoremId::Cor31 => "cor3.1",
        }
    }

    /// Bounds that the underlying theorem only asserts at some point.
    pub fn existence_type(&self) -> bool {
        matches!(self, TheoremId::Thm41)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputsDigest {
    pub q: usize,
    pub p: Option<usize>,
    pub n: Option<usize>,
    pub scalars: Vec<(&'static str, f64)>,
}

/// `lhs ≥ rhs` evaluated at a point; `gap = lhs − rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub inputs: InputsDigest,
    pub existence_type: bool,
}

impl BoundReport {
    pub fn new(theorem: TheoremId, lhs: f64, rhs: f64, inputs: InputsDigest) -> Self {
        BoundReport {
            theorem,
            lhs,
            rhs,
            gap: lhs - rhs,
            inputs,
            existence_type: theorem.existence_type(),
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.gap >= -tol
    }
}

fn two_form_constant(q: usize, p: usize) -> f64 {
    (p * (p - 1) + (q - p) * (q - p - 1)) as f64
}

fn parallel_hypotheses(q: usize, p: usize) -> Result<()> {
    if q < 4 {
        return Err(Error::HypothesisViolated(format!("q ≥ 4 required, got q = {q}")));
    }
    if p < 2 || p > q - 2 {
        return Err(Error::HypothesisViolated(format!(
            "2 ≤ p ≤ q − 2 required, got p = {p}, q = {q}"
        )));
    }
    Ok(())
}

/// Both sides of `Scal^∇ − q(q−1)K₁ ≤ 3|A|² ≤ Scal^∇ − q(q−1)K₀`.
pub fn sandwich_check(scal_nabla: f64, k0: f64, k1: f64, q: usize, a_norm_sq: f64) -> Result<(BoundReport, BoundReport)> {
    if q < 2 {
        return Err(Error::HypothesisViolated(format!("q ≥ 2 required, got q = {q}")));
    }
    let qq = (q * (q - 1)) as f64;
    let digest = InputsDigest {
        q,
        p: None,
        n: None,
        scalars: vec![("scal_nabla", scal_nabla), ("k0", k0), ("k1", k1), ("a_norm_sq", a_norm_sq)],
    };
    let lower = BoundReport::new(TheoremId::SandwichLower, 3.0 * a_norm_sq, scal_nabla - qq * k1, digest.clone());
    let upper = BoundReport::new(TheoremId::SandwichUpper, scal_nabla - qq * k0, 3.0 * a_norm_sq, digest);
    Ok((lower, upper))
}

/// `(q−2)|A|² ≥ K₀ q(q−1) − (p(p−1) + (q−p)(q−p−1)) ρ₁`.
pub fn thm31_report(k0: f64, rho1: f64, q: usize, p: usize, a_norm_sq: f64) -> Result<BoundReport> {
    parallel_hypotheses(q, p)?;
    let lhs = (q - 2) as f64 * a_norm_sq;
    let rhs = k0 * (q * (q - 1)) as f64 - two_form_constant(q, p) * rho1;
    Ok(BoundReport::new(
        TheoremId::Thm31,
        lhs,
        rhs,
        InputsDigest {
            q,
            p: Some(p),
            n: None,
            scalars: vec![("k0", k0), ("rho1", rho1), ("a_norm_sq", a_norm_sq)],
        },
    ))
}

/// `(q−2)|A|² ≥ Scal^M − K₁(n−q)(n+q−1) − (p(p−1) + (q−p)(q−p−1)) ρ₁`.
#[allow(clippy::too_many_arguments)]
pub fn thm32_report(scal_m: f64, k1: f64, rho1: f64, n: usize, q: usize, p: usize, a_norm_sq: f64) -> Result<BoundReport> {
    parallel_hypotheses(q, p)?;
    if n < q {
        return Err(Error::HypothesisViolated(format!("n ≥ q required, got n = {n}, q = {q}")));
    }
    let lhs = (q - 2) as f64 * a_norm_sq;
    let rhs = scal_m - k1 * ((n - q) * (n + q - 1)) as f64 - two_form_constant(q, p) * rho1;
    Ok(BoundReport::new(
        TheoremId::Thm32,
        lhs,
        rhs,
        InputsDigest {
            q,
            p: Some(p),
            n: Some(n),
            scalars: vec![("scal_m", scal_m), ("k1", k1), ("rho1", rho1), ("a_norm_sq", a_norm_sq)],
        },
    ))
}

/// `(2q+1)|A|² ≥ −(p−7)/3 Scal^∇ + (p−1)/3 q(q−1)K₀ − 2(p(p−1) + (q−p)(q−p−1)) ρ₁`.
///
/// Existence-type: the theorem asserts this at some point only.
pub fn thm41_report(scal_nabla: f64, k0: f64, rho1: f64, q: usize, p: usize, a_norm_sq: f64) -> Result<BoundReport> {
    if p < 2 || p + 2 > q {
        return Err(Error::HypothesisViolated(format!(
            "2 ≤ p ≤ q − 2 required, got p = {p}, q = {q}"
        )));
    }
    let pf = p as f64;
    let lhs = (2 * q + 1) as f64 * a_norm_sq;
    let rhs = -(pf - 7.0) / 3.0 * scal_nabla + (pf - 1.0) / 3.0 * (q * (q - 1)) as f64 * k0
        - 2.0 * two_form_constant(q, p) * rho1;
    Ok(BoundReport::new(
        TheoremId::Thm41,
        lhs,
        rhs,
        InputsDigest {
            q,
            p: Some(p),
            n: None,
            scalars: vec![("scal_nabla", scal_nabla), ("k0", k0), ("rho1", rho1), ("a_norm_sq", a_norm_sq)],
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cor31Scan {
    /// Largest `E(α)` over the sampled unit 1-forms.
    pub max_value: f64,
    pub trials: usize,
    /// Whether the sampled sectional curvatures were all positive; only then
    /// does a negative maximum witness the obstruction.
    pub positive_curvature: bool,
}

/// Samples unit 1-forms and returns the maximum of `E(α)`.
pub fn cor31_scan(rm: &RiemannTensor, a: &ONeillTensor, trials: usize, seed: u64) -> Result<Cor31Scan> {
    let q = rm.dim();
    if a.dim() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: a.dim(),
        });
    }
    let ric = rm.ricci();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_value = f64::NEG_INFINITY;
    let mut done = 0;
    while done < trials {
        let coeffs: Vec<f64> = (0..q).map(|_| StandardNormal.sample(&mut rng)).collect();
        let form = AlternatingForm::from_coeffs(q, 1, coeffs)?;
        if form.norm_sq() < 1e-12 {
            continue;
        }
        let g = ContractionGram::new(&form.normalized())?;
        max_value = max_value.max(prop31_with(rm, &ric, a, &g));
        done += 1;
    }
    let (k0, _) = sectional_extremes(rm, 16, seed);
    Ok(Cor31Scan {
        max_value,
        trials,
        positive_curvature: k0 > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s5_sharpness() {
        let r = thm31_report(1.0, 1.0, 4, 2, 4.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (8.0, 8.0));
        let r = thm32_report(20.0, 1.0, 1.0, 5, 4, 2, 4.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (8.0, 8.0));
        let r = thm41_report(24.0, 1.0, 1.0, 4, 2, 4.0).unwrap();
        assert!((r.lhs - 36.0).abs() < 1e-12 && (r.rhs - 36.0).abs() < 1e-12);
        assert!(r.existence_type);
    }

    #[test]
    fn s7_gaps() {
        assert_eq!(thm31_report(1.0, 1.0, 6, 2, 6.0).unwrap().gap, 8.0);
        assert_eq!(thm32_report(42.0, 1.0, 1.0, 7, 6, 2, 6.0).unwrap().gap, 8.0);
        let r = thm41_report(48.0, 1.0, 1.0, 6, 2, 6.0).unwrap();
        assert!((r.lhs - 78.0).abs() < 1e-12);
        assert!((r.rhs - 62.0).abs() < 1e-12);
    }

    #[test]
    fn flat_cases() {
        assert_eq!(thm31_report(0.0, 0.0, 4, 2, 0.0).unwrap().gap, 0.0);
        assert_eq!(thm32_report(0.0, 0.0, 0.0, 6, 4, 2, 0.0).unwrap().gap, 0.0);
        let r = thm41_report(0.0, 0.0, 0.0, 4, 2, 0.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }

    #[test]
    fn hypotheses_are_enforced() {
        assert!(matches!(thm31_report(1.0, 1.0, 3, 2, 1.0), Err(Error::HypothesisViolated(_))));
        assert!(matches!(thm31_report(1.0, 1.0, 6, 1, 1.0), Err(Error::HypothesisViolated(_))));
        assert!(matches!(thm31_report(1.0, 1.0, 6, 5, 1.0), Err(Error::HypothesisViolated(_))));
        assert!(matches!(thm41_report(1.0, 1.0, 1.0, 5, 4, 1.0), Err(Error::HypothesisViolated(_))));
        assert!(matches!(thm32_report(1.0, 1.0, 1.0, 3, 4, 2, 1.0), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn sandwich_on_s5_and_flat() {
        let (lo, hi) = sandwich_check(24.0, 1.0, 1.0, 4, 4.0).unwrap();
        assert_eq!((lo.gap, hi.gap), (0.0, 0.0));
        let (lo, hi) = sandwich_check(12.0 * 0.5, 0.5, 0.5, 4, 0.0).unwrap();
        assert_eq!((lo.gap, hi.gap), (0.0, 0.0));
    }

    #[test]
    fn cor31_signs() {
        let q = 4;
        let a = ONeillTensor::zeros(q, 1);
        let flat = cor31_scan(&RiemannTensor::space_form(q, 0.0), &a, 50, 1).unwrap();
        assert_eq!(flat.max_value, 0.0);
        assert!(!flat.positive_curvature);
        let neg = cor31_scan(&RiemannTensor::space_form(q, -1.0), &a, 50, 1).unwrap();
        assert!(neg.max_value > 0.0);
        let pos = cor31_scan(&RiemannTensor::space_form(q, 1.0), &a, 50, 1).unwrap();
        assert!(pos.max_value < 0.0 && pos.positive_curvature);
    }
}
