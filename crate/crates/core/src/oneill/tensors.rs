//! The `B⁺`/`B⁻` auxiliary tensors and the two O'Neill contraction terms,
//! each by a literal definition and by its closed Gram-matrix form.

use super::ONeillTensor;
use crate::error::{Error, Result};
use crate::exterior::{
    for_each_tuple, interior_multi, interior_vector, sort_with_sign, wedge, AlternatingForm,
    FiberVector,
};
use crate::gram::ContractionGram;

/// A value that may be vacuous (the defining object does not exist in this
/// degree); vacuous values read as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flagged {
    pub value: f64,
    pub vacuous: bool,
}

impl Flagged {
    fn vacuous() -> Self {
        Flagged {
            value: 0.0,
            vacuous: true,
        }
    }

    fn of(value: f64) -> Self {
        Flagged {
            value,
            vacuous: false,
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_dims(a: &ONeillTensor, form: &AlternatingForm) -> Result<()> {
    if a.dim() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: form.dim(),
        });
    }
    Ok(())
}

/// `|B⁺(α)|²` from the definition
/// `B⁺(α)(X₁…X_p) = Σ_i (e_i⌟α ∧ A_{e_i})(X₁…X_p)`, normed as
/// `(1/p!) Σ_{ordered tuples, s} B⁺_s(e_t)²`.
pub fn bplus_norm(a: &ONeillTensor, form: &AlternatingForm) -> Result<f64> {
    check_dims(a, form)?;
    let (q, p) = (form.dim(), form.degree());
    if p == 0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut head = vec![0usize; p];
    for_each_tuple(q, p, |t| {
        for s in 0..a.vdim() {
            let mut val = 0.0;
            for i in 0..q {
                // (β ∧ γ)(X₁…X_p) = Σ_r (−1)^{p−1−r} β(X without r) γ(X_r)
                for r in 0..p {
                    let gamma = a.get(i, t[r], s);
                    if gamma == 0.0 {
                        continue;
                    }
                    head[0] = i;
                    let mut w = 1;
                    for (u, &x) in t.iter().enumerate() {
                        if u != r {
                            head[w] = x;
                            w += 1;
                        }
                    }
                    let sign = if (p - 1 - r) % 2 == 0 { 1.0 } else { -1.0 };
                    val += sign * form.component(&head) * gamma;
                }
            }
            total += val * val;
        }
    });
    Ok(total / factorial(p))
}

/// `Σ g(A_ke_i, A_ke_j)⟨e_i⌟α, e_j⌟α⟩ + Σ g(A_ie_l, A_je_k)⟨(e_j∧e_i)⌟α, (e_l∧e_k)⌟α⟩`.
pub fn bplus_norm_closed(a: &ONeillTensor, form: &AlternatingForm) -> Result<f64> {
    check_dims(a, form)?;
    let g = ContractionGram::new(form)?;
    Ok(bplus_closed_with(a, &g))
}

pub(crate) fn bplus_closed_with(a: &ONeillTensor, g: &ContractionGram) -> f64 {
    let q = a.dim();
    let first = g.contract_single(|i, j| (0..q).map(|k| a.pairing(k, i, k, j)).sum());
    let second = g.contract_pair(|i, j, k, l| a.pairing(i, l, j, k));
    first + second
}

/// All permutations of `0..n` with their signs.
fn permutations(n: usize) -> Vec<(f64, Vec<usize>)> {
    let mut out = Vec::new();
    for_each_tuple(n, n, |t| {
        if let Some((sign, _)) = sort_with_sign(t) {
            out.push((sign, t.to_vec()));
        }
    });
    out
}

/// `|B⁻α|²` from the definition
/// `B⁻α = (1/(p−2)!) Σ ((e_i∧e_{i₁}∧…∧e_{i_{p−2}})⌟α ∧ A_{e_i}) ⊗ e^{i₁}∧…∧e^{i_{p−2}}`
/// with `|B⁻α|² = (1/(p−2)!) Σ_{k,l,i₁…} |(B⁻α)_{k l i₁…}|²`. Vacuous for `p < 2`.
pub fn bminus_norm(a: &ONeillTensor, form: &AlternatingForm) -> Result<Flagged> {
    check_dims(a, form)?;
    let (q, p) = (form.dim(), form.degree());
    if p < 2 {
        return Ok(Flagged::vacuous());
    }
    let r = p - 2;
    let basis: Vec<FiberVector> = (0..q).map(|i| FiberVector::basis(q, i)).collect();
    let perms = permutations(r);
    let norm = factorial(r);
    let mut total = 0.0;
    let mut failure = None;
    let mut reordered = vec![0usize; r];
    for_each_tuple(q, r, |jt| {
        if failure.is_some() || sort_with_sign(jt).is_none() {
            // e^{I}(e_J) vanishes when J repeats
            return;
        }
        // T_s[k][l] for this J
        let mut comp = vec![0.0; a.vdim() * q * q];
        for (sign, perm) in &perms {
            for (slot, &src) in perm.iter().enumerate() {
                reordered[slot] = jt[src];
            }
            for i in 0..q {
                let mut vs = Vec::with_capacity(r + 1);
                vs.push(basis[i].clone());
                vs.extend(reordered.iter().map(|&x| basis[x].clone()));
                let beta = match interior_multi(&vs, form) {
                    Ok(c) => c.form,
                    Err(e) => {
                        failure = Some(e);
                        return;
                    }
                };
                for s in 0..a.vdim() {
                    let two = match wedge(&beta, &a.horizontal_component_form(i, s)) {
                        Ok(w) => w,
                        Err(e) => {
                            failure = Some(e);
                            return;
                        }
                    };
                    for k in 0..q {
                        for l in 0..q {
                            comp[(s * q + k) * q + l] += sign * two.component(&[k, l]);
                        }
                    }
                }
            }
        }
        total += comp.iter().map(|x| (x / norm).powi(2)).sum::<f64>();
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Flagged::of(total / norm))
}

/// `|B⁻α|² = 2(p−1) Σ ⟨e_i⌟α, e_j⌟α⟩ g(A_ie_l, A_je_l)
///          − 2 Σ ⟨(e_j∧e_i)⌟α, (e_l∧e_k)⌟α⟩ g(A_ie_l, A_ke_j)`.
pub fn bminus_norm_closed(a: &ONeillTensor, form: &AlternatingForm) -> Result<Flagged> {
    check_dims(a, form)?;
    if form.degree() < 2 {
        return Ok(Flagged::vacuous());
    }
    let g = ContractionGram::new(form)?;
    Ok(Flagged::of(bminus_closed_with(a, &g)))
}

pub(crate) fn bminus_closed_with(a: &ONeillTensor, g: &ContractionGram) -> f64 {
    let q = a.dim();
    let p = g.degree() as f64;
    let first = g.contract_single(|i, j| (0..q).map(|l| a.pairing(i, l, j, l)).sum());
    let second = g.contract_pair(|i, j, k, l| a.pairing(i, l, k, j));
    2.0 * ((p - 1.0) * first - second)
}

/// `Σ_s |(Σ_i A_{e_i}V_s ∧ e_i)⌟α|²`, evaluated as the quadruple sum
/// `Σ g(A_iV_s, e_j) g(A_kV_s, e_l) ⟨(e_j∧e_i)⌟α, (e_l∧e_k)⌟α⟩`.
pub fn mixed_bivector_term(a: &ONeillTensor, form: &AlternatingForm) -> Result<f64> {
    check_dims(a, form)?;
    let g = ContractionGram::new(form)?;
    Ok(mixed_with(a, &g))
}

pub(crate) fn mixed_with(a: &ONeillTensor, g: &ContractionGram) -> f64 {
    g.contract_pair(|i, j, k, l| a.pairing(i, j, k, l))
}

/// The per-`s` values of `|(Σ_i A_{e_i}V_s ∧ e_i)⌟α|²`, assembled from the
/// bivector contraction itself.
pub fn mixed_bivector_term_norm_form(a: &ONeillTensor, form: &AlternatingForm) -> Result<Vec<f64>> {
    check_dims(a, form)?;
    let q = form.dim();
    let mut out = Vec::with_capacity(a.vdim());
    for s in 0..a.vdim() {
        if form.degree() < 2 {
            out.push(0.0);
            continue;
        }
        let mut acc = AlternatingForm::zeros(q, form.degree() - 2)?;
        for i in 0..q {
            let c = interior_multi(&[a.on_vertical(i, s), FiberVector::basis(q, i)], form)?;
            acc.add_scaled(&c.form, 1.0)?;
        }
        out.push(acc.norm_sq());
    }
    Ok(out)
}

/// `Σ_{l,s} |A_{e_l}V_s ⌟ α|²` in its Gram form `Σ g(A_le_i, A_le_j)⟨e_i⌟α, e_j⌟α⟩`.
pub fn vertical_contraction_term(a: &ONeillTensor, form: &AlternatingForm) -> Result<f64> {
    check_dims(a, form)?;
    let g = ContractionGram::new(form)?;
    Ok(vertical_with(a, &g))
}

pub(crate) fn vertical_with(a: &ONeillTensor, g: &ContractionGram) -> f64 {
    let q = a.dim();
    g.contract_single(|i, j| (0..q).map(|l| a.pairing(l, i, l, j)).sum())
}

/// `Σ_{l,s} |A_{e_l}V_s ⌟ α|²` by contracting with the vectors directly.
pub fn vertical_contraction_term_norm_form(a: &ONeillTensor, form: &AlternatingForm) -> Result<f64> {
    check_dims(a, form)?;
    if form.degree() == 0 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for l in 0..a.dim() {
        for s in 0..a.vdim() {
            acc += interior_vector(&a.on_vertical(l, s), form)?.norm_sq();
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(q: usize, p: usize, salt: f64) -> AlternatingForm {
        let n = crate::exterior::binomial(q, p);
        AlternatingForm::from_coeffs(q, p, (0..n).map(|k| ((k as f64 + salt) * 1.3).cos()).collect())
            .unwrap()
    }

    fn tensor(q: usize, vdim: usize, salt: f64) -> ONeillTensor {
        ONeillTensor::from_upper(q, vdim, |i, j, s| ((i * 5 + j * 11 + s * 3) as f64 + salt).sin())
    }

    #[test]
    fn zero_oneill_gives_zero_everywhere() {
        let a = ONeillTensor::zeros(4, 2);
        let f = form(4, 2, 0.1);
        assert_eq!(bplus_norm(&a, &f).unwrap(), 0.0);
        assert_eq!(bplus_norm_closed(&a, &f).unwrap(), 0.0);
        assert_eq!(bminus_norm(&a, &f).unwrap().value, 0.0);
        assert_eq!(mixed_bivector_term(&a, &f).unwrap(), 0.0);
        assert_eq!(vertical_contraction_term(&a, &f).unwrap(), 0.0);
    }

    #[test]
    fn one_forms_underflow() {
        let a = tensor(4, 2, 0.4);
        let f = form(4, 1, 0.2);
        assert_eq!(mixed_bivector_term(&a, &f).unwrap(), 0.0);
        assert!(bminus_norm(&a, &f).unwrap().vacuous);
        assert!(bminus_norm_closed(&a, &f).unwrap().vacuous);
        // only the first sum survives for p = 1
        let g = ContractionGram::new(&f).unwrap();
        let first = g.contract_single(|i, j| (0..4).map(|k| a.pairing(k, i, k, j)).sum());
        assert!((bplus_norm_closed(&a, &f).unwrap() - first).abs() < 1e-13);
        assert!((bplus_norm(&a, &f).unwrap() - first).abs() < 1e-12);
    }

    #[test]
    fn vertical_term_single_entry_by_hand() {
        // α = e¹∧e², only a[0][1][0] = t: A_{e_0}V = −t e_1, A_{e_1}V = t e_0,
        // so Σ|A_lV⌟α|² = t² + t².
        let t = 0.7;
        let a = ONeillTensor::from_upper(3, 1, |i, j, _| if (i, j) == (0, 1) { t } else { 0.0 });
        let f = AlternatingForm::basis(3, &[0, 1]).unwrap();
        let want = 2.0 * t * t;
        assert!((vertical_contraction_term(&a, &f).unwrap() - want).abs() < 1e-15);
        assert!((vertical_contraction_term_norm_form(&a, &f).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn bminus_single_entry_by_hand() {
        // α = e¹∧e², a[0][1][0] = t, q = 3, p = 2.
        // B⁻ = Σ_i (e_i⌟α) ∧ A_{e_i}: i=0 gives e² ∧ (t e²) = 0, i=1 gives
        // (−e¹) ∧ (−t e¹) = 0, so B⁻ = 0; closed form: 2[(1)·Σ… − …] = 0.
        let t = 0.7;
        let a = ONeillTensor::from_upper(3, 1, |i, j, _| if (i, j) == (0, 1) { t } else { 0.0 });
        let f = AlternatingForm::basis(3, &[0, 1]).unwrap();
        assert!(bminus_norm(&a, &f).unwrap().value.abs() < 1e-15);
        assert!(bminus_norm_closed(&a, &f).unwrap().value.abs() < 1e-15);

        // α = e¹∧e³ with the same A: i=0 gives e³ ∧ (t e²) = −t e²∧e³, so
        // |B⁻|² sums 2·t² over the ordered (k,l) pairs.
        let f = AlternatingForm::basis(3, &[0, 2]).unwrap();
        assert!((bminus_norm(&a, &f).unwrap().value - 2.0 * t * t).abs() < 1e-14);
        assert!((bminus_norm_closed(&a, &f).unwrap().value - 2.0 * t * t).abs() < 1e-14);
    }

    #[test]
    fn definitional_and_closed_agree() {
        for (q, p, vdim) in [(4, 2, 1), (4, 3, 2), (5, 2, 3), (5, 3, 1), (6, 4, 2)] {
            let a = tensor(q, vdim, p as f64);
            let f = form(q, p, 0.3);
            let d = bplus_norm(&a, &f).unwrap();
            let c = bplus_norm_closed(&a, &f).unwrap();
            assert!((d - c).abs() < 1e-10 * d.abs().max(1.0), "B+ q={q} p={p}: {d} {c}");
            let d = bminus_norm(&a, &f).unwrap().value;
            let c = bminus_norm_closed(&a, &f).unwrap().value;
            assert!((d - c).abs() < 1e-10 * d.abs().max(1.0), "B- q={q} p={p}: {d} {c}");
            let quad = mixed_bivector_term(&a, &f).unwrap();
            let norm: f64 = mixed_bivector_term_norm_form(&a, &f).unwrap().iter().sum();
            assert!((quad - norm).abs() < 1e-10 * quad.abs().max(1.0));
            let gram = vertical_contraction_term(&a, &f).unwrap();
            let direct = vertical_contraction_term_norm_form(&a, &f).unwrap();
            assert!((gram - direct).abs() < 1e-10 * gram.abs().max(1.0));
        }
    }
}
