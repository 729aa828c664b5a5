//! The termwise estimates feeding the Thm 3.1 bound, evaluated on concrete
//! data so each inequality (or identity) can be checked on its own.

use super::tensors::vertical_with;
use super::{oneill_norm, ONeillTensor};
use crate::curvature::{curvature_operator_matrix, ricci_pairing, riemann_pairing, RiemannTensor};
use crate::error::{Error, Result};
use crate::exterior::{
    for_each_tuple, hodge, interior_multi, interior_vector, sort_with_sign, wedge, AlternatingForm,
    FiberVector, MultiIndex,
};
use crate::gram::ContractionGram;

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// The second curvature sum rewritten through the 2-forms
/// `θ^I = ½ Σ_{i,j} α_{ijI} e_i∧e_j`, `I` an ordered `(p−2)`-tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaRewrite {
    /// `½ Σ R_ijkl ⟨(e_j∧e_i)⌟α, (e_l∧e_k)⌟α⟩`.
    pub lhs: f64,
    /// `(2/(p−2)!) Σ_I ρ(θ^I, θ^I)`.
    pub theta_sum: f64,
    /// `(2/(p−2)!) Σ_I |θ^I|²`, which equals `p(p−1)|α|²`.
    pub theta_norms: f64,
    /// `p(p−1) ρ₁ |α|²`.
    pub bound: f64,
}

pub fn theta_rewrite(rm: &RiemannTensor, form: &AlternatingForm, rho1: f64) -> Result<ThetaRewrite> {
    let q = rm.dim();
    same_dim(q, form.dim())?;
    let p = form.degree();
    if p < 2 {
        return Err(Error::HypothesisViolated(format!("θ-forms need p ≥ 2, got p = {p}")));
    }
    let g = ContractionGram::new(form)?;
    let lhs = 0.5 * riemann_pairing(rm, &g);

    let op = curvature_operator_matrix(rm);
    let pairs = MultiIndex::all(q, 2);
    let r = p - 2;
    let mut theta_sum = 0.0;
    let mut theta_norms = 0.0;
    let mut idx = vec![0usize; p];
    let mut theta = vec![0.0; pairs.len()];
    for_each_tuple(q, r, |tail| {
        if sort_with_sign(tail).is_none() {
            return;
        }
        idx[2..].copy_from_slice(tail);
        for (slot, ij) in pairs.iter().enumerate() {
            idx[0] = ij.as_slice()[0];
            idx[1] = ij.as_slice()[1];
            theta[slot] = form.component(&idx);
        }
        for (a, ta) in theta.iter().enumerate() {
            if *ta == 0.0 {
                continue;
            }
            theta_norms += ta * ta;
            for (b, tb) in theta.iter().enumerate() {
                theta_sum += ta * op[(a, b)] * tb;
            }
        }
    });
    let c: f64 = 2.0 / (1..=r).map(|k| k as f64).product::<f64>();
    Ok(ThetaRewrite {
        lhs,
        theta_sum: c * theta_sum,
        theta_norms: c * theta_norms,
        bound: (p * (p - 1)) as f64 * rho1 * form.norm_sq(),
    })
}

/// One vertical index of the Cauchy–Schwarz chain bounding the mixed term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainStep {
    pub s: usize,
    /// `|(Σ_i A_{e_i}V_s ∧ e_i)⌟α|²`.
    pub mixed: f64,
    /// `q Σ_i |(A_{e_i}V_s ∧ e_i)⌟α|²`.
    pub bivector_middle: f64,
    /// `q Σ_i |A_{e_i}V_s ∧ (e_i⌟α)|²`, the literal wedge reading.
    pub wedge_middle: f64,
    /// `q Σ_i |A_{e_i}V_s⌟α|²`.
    pub end: f64,
}

impl ChainStep {
    pub fn bivector_holds(&self, tol: f64) -> bool {
        self.mixed <= self.bivector_middle + tol && self.bivector_middle <= self.end + tol
    }

    pub fn wedge_holds(&self, tol: f64) -> bool {
        self.mixed <= self.wedge_middle + tol && self.wedge_middle <= self.end + tol
    }
}

pub fn cauchy_schwarz_chain(a: &ONeillTensor, form: &AlternatingForm) -> Result<Vec<ChainStep>> {
    let q = a.dim();
    same_dim(q, form.dim())?;
    let p = form.degree();
    let qf = q as f64;
    let mut out = Vec::with_capacity(a.vdim());
    for s in 0..a.vdim() {
        let mut step = ChainStep {
            s,
            mixed: 0.0,
            bivector_middle: 0.0,
            wedge_middle: 0.0,
            end: 0.0,
        };
        if p == 0 {
            out.push(step);
            continue;
        }
        let mut total = if p >= 2 { Some(AlternatingForm::zeros(q, p - 2)?) } else { None };
        for i in 0..q {
            let v = a.on_vertical(i, s);
            let ei = FiberVector::basis(q, i);
            if let Some(total) = total.as_mut() {
                let c = interior_multi(&[v.clone(), ei.clone()], form)?;
                step.bivector_middle += c.norm_sq();
                total.add_scaled(&c.form, 1.0)?;
            }
            step.wedge_middle += wedge(&v.flat(), &interior_vector(&ei, form)?)?.norm_sq();
            step.end += interior_vector(&v, form)?.norm_sq();
        }
        step.mixed = total.map_or(0.0, |t| t.norm_sq());
        step.bivector_middle *= qf;
        step.wedge_middle *= qf;
        step.end *= qf;
        out.push(step);
    }
    Ok(out)
}

/// `Σ R^M_lilj (⟨e_i⌟α, e_j⌟α⟩ + ⟨e_i⌟*α, e_j⌟*α⟩)` against `Scal^M |α|²`.
pub fn hodge_ricci_identity(rm: &RiemannTensor, form: &AlternatingForm) -> Result<(f64, f64)> {
    same_dim(rm.dim(), form.dim())?;
    let ric = rm.ricci();
    let lhs = ricci_pairing(&ric, &ContractionGram::new(form)?) + ricci_pairing(&ric, &ContractionGram::new(&hodge(form))?);
    Ok((lhs, rm.scalar() * form.norm_sq()))
}

/// The pieces of the Thm 3.1 argument for `α` and `*α`, and the bound they
/// assemble to per unit `|α|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityCheck {
    /// `Σ_{l,s} |A_{e_l}V_s⌟α|² + Σ_{l,s} |A_{e_l}V_s⌟*α|²`.
    pub vertical_sum: f64,
    /// `|A|² |α|²`.
    pub vertical_expected: f64,
    /// Ricci pairings of `α` plus `*α`.
    pub ricci_sum: f64,
    /// `Scal^M |α|²`.
    pub ricci_expected: f64,
    /// `p(p−1)ρ₁|α|² + (q−p)(q−p−1)ρ₁|*α|²`.
    pub theta_bounds: f64,
    /// `(p(p−1) + (q−p)(q−p−1)) ρ₁ |α|²`, the constant symmetric in `p ↔ q−p`.
    pub theta_expected: f64,
    /// `[Scal^M − (p(p−1)+(q−p)(q−p−1))ρ₁ − (q−2)|A|²] |α|²` built from the
    /// summed pieces; a parallel α forces it to be `≤ 0`.
    pub assembled: f64,
}

impl DualityCheck {
    pub fn max_residual(&self) -> f64 {
        [
            self.vertical_sum - self.vertical_expected,
            self.ricci_sum - self.ricci_expected,
            self.theta_bounds - self.theta_expected,
        ]
        .into_iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }
}

pub fn duality_check(rm: &RiemannTensor, a: &ONeillTensor, form: &AlternatingForm, rho1: f64) -> Result<DualityCheck> {
    let q = rm.dim();
    same_dim(q, form.dim())?;
    same_dim(q, a.dim())?;
    let p = form.degree();
    let star = hodge(form);
    let (ga, gs) = (ContractionGram::new(form)?, ContractionGram::new(&star)?);
    let ric = rm.ricci();
    let n2 = form.norm_sq();
    let vertical_sum = vertical_with(a, &ga) + vertical_with(a, &gs);
    let ricci_sum = ricci_pairing(&ric, &ga) + ricci_pairing(&ric, &gs);
    let (cp, cq) = ((p * p.saturating_sub(1)) as f64, ((q - p) * (q - p).saturating_sub(1)) as f64);
    let theta_bounds = cp * rho1 * n2 + cq * rho1 * star.norm_sq();
    Ok(DualityCheck {
        vertical_sum,
        vertical_expected: oneill_norm(a) * n2,
        ricci_sum,
        ricci_expected: rm.scalar() * n2,
        theta_bounds,
        theta_expected: (cp + cq) * rho1 * n2,
        assembled: ricci_sum - theta_bounds - (q as f64 - 2.0) * vertical_sum,
    })
}
