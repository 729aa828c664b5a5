//! The curvature-term identities linking `⟨R(α),α⟩` to ambient curvature,
//! the O'Neill terms and the `B±` norms.

use super::bounds::{BoundReport, InputsDigest, TheoremId};
use super::tensors::{bplus_norm, mixed_with, vertical_with};
use super::ONeillTensor;
use crate::curvature::{curvature_term_with, ricci_pairing, riemann_pairing, RiemannTensor, TransverseCurvature};
use crate::error::{Error, Result};
use crate::exterior::AlternatingForm;
use crate::gram::ContractionGram;

/// Absolute residual allowed by [`master_identity_residual`], relative to
/// `max(1, largest term)`.
pub const MASTER_TOL: f64 = 1e-10;

fn check(rm: &RiemannTensor, a: &ONeillTensor, form: &AlternatingForm) -> Result<()> {
    for found in [a.dim(), form.dim()] {
        if found != rm.dim() {
            return Err(Error::DimensionMismatch {
                expected: rm.dim(),
                found,
            });
        }
    }
    Ok(())
}

/// `E(α) = −Σ R^M_{lilj}⟨e_i⌟α, e_j⌟α⟩ + ½ Σ R^M_{ijkl}⟨(e_j∧e_i)⌟α, (e_l∧e_k)⌟α⟩
///        + Σ_s { |(Σ_i A_{e_i}V_s ∧ e_i)⌟α|² − 2 Σ_i |A_{e_i}V_s⌟α|² }`.
///
/// A parallel α forces `E(α) = |B⁺(α)|² ≥ 0`.
pub fn prop31_value(rm: &RiemannTensor, a: &ONeillTensor, form: &AlternatingForm) -> Result<f64> {
    check(rm, a, form)?;
    let g = ContractionGram::new(form)?;
    Ok(prop31_with(rm, &rm.ricci(), a, &g))
}

pub(crate) fn prop31_with(
    rm: &RiemannTensor,
    ric_m: &[f64],
    a: &ONeillTensor,
    g: &ContractionGram,
) -> f64 {
    -ricci_pairing(ric_m, g) + 0.5 * riemann_pairing(rm, g) + mixed_with(a, g) - 2.0 * vertical_with(a, g)
}

/// Every term of the curvature-term identity, so callers can assemble or
/// inspect it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterIdentityParts {
    /// `⟨R(α),α⟩` from the transverse Ricci/Riemann tensors.
    pub curvature_term: f64,
    /// `Σ R^M_{lilj}⟨e_i⌟α, e_j⌟α⟩`.
    pub ambient_ricci: f64,
    /// `Σ R^M_{ijkl}⟨(e_j∧e_i)⌟α, (e_l∧e_k)⌟α⟩`.
    pub ambient_riemann: f64,
    /// `|B⁺(α)|²`, definitional.
    pub bplus: f64,
    /// `Σ_{l,s} |A_{e_l}V_s⌟α|²`.
    pub vertical: f64,
    /// `Σ_s |(Σ_i A_{e_i}V_s ∧ e_i)⌟α|²`.
    pub mixed: f64,
}

impl MasterIdentityParts {
    pub fn compute(rm: &RiemannTensor, a: &ONeillTensor, form: &AlternatingForm) -> Result<Self> {
        check(rm, a, form)?;
        let g = ContractionGram::new(form)?;
        let tc = TransverseCurvature::compute(rm, a)?;
        Ok(MasterIdentityParts {
            curvature_term: curvature_term_with(&tc.ricci, &tc.riemann, &g),
            ambient_ricci: ricci_pairing(&rm.ricci(), &g),
            ambient_riemann: riemann_pairing(rm, &g),
            bplus: bplus_norm(a, form)?,
            vertical: vertical_with(a, &g),
            mixed: mixed_with(a, &g),
        })
    }

    /// `Σ R^M_lilj⟨⟩ − ½ Σ R^M_ijkl⟨⟩ + |B⁺|² + 2·vertical − mixed`.
    pub fn right_side(&self) -> f64 {
        self.ambient_ricci - 0.5 * self.ambient_riemann + self.bplus + 2.0 * self.vertical - self.mixed
    }

    pub fn residual(&self) -> f64 {
        self.curvature_term - self.right_side()
    }

    pub fn scale(&self) -> f64 {
        [
            1.0,
            self.curvature_term.abs(),
            self.ambient_ricci.abs(),
            self.ambient_riemann.abs(),
            self.bplus.abs(),
            self.vertical.abs(),
            self.mixed.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Residual of
/// `⟨R(α),α⟩ = Σ R^M_lilj⟨⟩ − ½ Σ R^M_ijkl⟨⟩ + |B⁺(α)|² + 2 Σ|A_{e_l}V_s⌟α|²
///             − Σ_s |(Σ_i A_{e_i}V_s ∧ e_i)⌟α|²`,
/// with the left side built from the transverse curvature of `(R^M, A)`.
/// Errors when the residual exceeds [`MASTER_TOL`].
pub fn master_identity_residual(rm: &RiemannTensor, a: &ONeillTensor, form: &AlternatingForm) -> Result<f64> {
    let parts = MasterIdentityParts::compute(rm, a, form)?;
    let residual = parts.residual();
    if residual.abs() > MASTER_TOL * parts.scale() {
        return Err(Error::IdentityViolation {
            name: "curvature-term identity",
            residual,
            digest: format!(
                "q={} p={} vdim={} |A|^2={:.6e} |a|^2={:.6e} parts={parts:?}",
                rm.dim(),
                form.degree(),
                a.vdim(),
                super::oneill_norm(a),
                form.norm_sq()
            ),
        });
    }
    Ok(residual)
}

/// `2⟨R(α),α⟩ ≥ −(p−7)/3 Σ Ric^∇_ij⟨⟩ + (p−1)/3 Σ R^M_lilj⟨⟩ − Σ R^M_ijkl⟨⟩
///              − Σ_s { Σ_i |A_{e_i}V_s⌟α|² + 2 |(Σ_i A_{e_i}V_s ∧ e_i)⌟α|² }`.
///
/// The gap equals `½|B⁻α|² + |B⁺α|²`.
pub fn prop41_check(rm: &RiemannTensor, a: &ONeillTensor, form: &AlternatingForm) -> Result<BoundReport> {
    check(rm, a, form)?;
    let g = ContractionGram::new(form)?;
    let tc = TransverseCurvature::compute(rm, a)?;
    let p = form.degree() as f64;
    let lhs = 2.0 * curvature_term_with(&tc.ricci, &tc.riemann, &g);
    let rhs = -(p - 7.0) / 3.0 * ricci_pairing(&tc.ricci, &g) + (p - 1.0) / 3.0 * ricci_pairing(&rm.ricci(), &g)
        - riemann_pairing(rm, &g)
        - (vertical_with(a, &g) + 2.0 * mixed_with(a, &g));
    Ok(BoundReport::new(
        TheoremId::Prop41,
        lhs,
        rhs,
        InputsDigest {
            q: rm.dim(),
            p: Some(form.degree()),
            n: None,
            scalars: vec![("scal_nabla", tc.scalar), ("a_norm_sq", super::oneill_norm(a))],
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::binomial;

    #[test]
    fn prop31_without_oneill_on_space_form() {
        // E = −(q−1)c for unit 1-forms; the pair term underflows at p = 1
        for c in [0.5, 1.0, 2.0] {
            let q = 4;
            let rm = RiemannTensor::space_form(q, c);
            let f = AlternatingForm::from_coeffs(q, 1, vec![0.5, -0.5, 0.5, 0.5]).unwrap();
            let e = prop31_value(&rm, &ONeillTensor::zeros(q, 1), &f).unwrap();
            assert!((e + (q as f64 - 1.0) * c).abs() < 1e-14);
        }
        let zero = AlternatingForm::zeros(4, 2).unwrap();
        let a = ONeillTensor::from_upper(4, 1, |i, j, _| (i + 2 * j) as f64);
        assert_eq!(prop31_value(&RiemannTensor::space_form(4, 1.0), &a, &zero).unwrap(), 0.0);
    }

    #[test]
    fn master_identity_reduces_without_oneill() {
        let q = 5;
        let rm = RiemannTensor::space_form(q, 0.8);
        for p in 1..q {
            let f = AlternatingForm::from_coeffs(q, p, (0..binomial(q, p)).map(|k| (k as f64).cos()).collect())
                .unwrap();
            let r = master_identity_residual(&rm, &ONeillTensor::zeros(q, 2), &f).unwrap();
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn flipping_the_mixed_term_breaks_the_identity() {
        let q = 4;
        let rm = RiemannTensor::space_form(q, 1.0);
        let a = ONeillTensor::from_upper(q, 1, |i, j, _| 0.3 * (i as f64) - 0.1 * j as f64);
        let f = AlternatingForm::from_coeffs(q, 2, vec![1.0, 0.0, 0.5, 0.0, -0.5, 1.0]).unwrap();
        let mut parts = MasterIdentityParts::compute(&rm, &a, &f).unwrap();
        assert!(parts.residual().abs() < 1e-12);
        parts.mixed = -parts.mixed;
        assert!(parts.residual().abs() > 1e-6 || parts.mixed == 0.0);
    }
}
