//! Gram matrices of the single and pair contractions of a form.
//!
//! Nearly every curvature expression pairs `e_i⌟α` with `e_j⌟α`, or
//! `(e_j∧e_i)⌟α` with `(e_l∧e_k)⌟α`, against some coefficient array. The
//! contractions are computed once here and the sums become plain loops.

use crate::exterior::{interior_multi, AlternatingForm, Contraction, FiberVector};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct ContractionGram {
    dim: usize,
    degree: usize,
    /// `⟨e_i⌟α, e_j⌟α⟩`, row-major `q×q`.
    single: Vec<f64>,
    /// `⟨(e_j∧e_i)⌟α, (e_l∧e_k)⌟α⟩ = ⟨α(e_i,e_j,·), α(e_k,e_l,·)⟩`, `q⁴`.
    pair: Vec<f64>,
}

impl ContractionGram {
    pub fn new(form: &AlternatingForm) -> Result<Self> {
        let q = form.dim();
        let basis: Vec<FiberVector> = (0..q).map(|i| FiberVector::basis(q, i)).collect();

        let singles: Vec<Contraction> = basis
            .iter()
            .map(|v| interior_multi(std::slice::from_ref(v), form))
            .collect::<Result<_>>()?;
        let mut single = vec![0.0; q * q];
        for i in 0..q {
            for j in 0..q {
                single[i * q + j] = singles[i].inner(&singles[j])?;
            }
        }

        // pairs[i*q + j] = (e_j ∧ e_i) ⌟ α
        let mut pairs = Vec::with_capacity(q * q);
        for i in 0..q {
            for j in 0..q {
                pairs.push(interior_multi(&[basis[j].clone(), basis[i].clone()], form)?);
            }
        }
        let mut pair = vec![0.0; q * q * q * q];
        for ij in 0..q * q {
            for kl in ij..q * q {
                let v = pairs[ij].inner(&pairs[kl])?;
                pair[ij * q * q + kl] = v;
                pair[kl * q * q + ij] = v;
            }
        }
        Ok(ContractionGram {
            dim: q,
            degree: form.degree(),
            single,
            pair,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn single(&self, i: usize, j: usize) -> f64 {
        self.single[i * self.dim + j]
    }

    #[inline]
    pub fn pair(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let q = self.dim;
        self.pair[((i * q + j) * q + k) * q + l]
    }

    /// `Σ_{ij} S(i,j) ⟨e_i⌟α, e_j⌟α⟩`.
    pub fn contract_single(&self, coeff: impl Fn(usize, usize) -> f64) -> f64 {
        let q = self.dim;
        let mut acc = 0.0;
        for i in 0..q {
            for j in 0..q {
                let g = self.single(i, j);
                if g != 0.0 {
                    acc += coeff(i, j) * g;
                }
            }
        }
        acc
    }

    /// `Σ_{ijkl} T(i,j,k,l) ⟨(e_j∧e_i)⌟α, (e_l∧e_k)⌟α⟩`.
    pub fn contract_pair(&self, coeff: impl Fn(usize, usize, usize, usize) -> f64) -> f64 {
        let q = self.dim;
        let mut acc = 0.0;
        for i in 0..q {
            for j in 0..q {
                for k in 0..q {
                    for l in 0..q {
                        let g = self.pair(i, j, k, l);
                        if g != 0.0 {
                            acc += coeff(i, j, k, l) * g;
                        }
                    }
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_forms_have_no_pair_terms() {
        let a = AlternatingForm::from_coeffs(3, 1, vec![1.0, -2.0, 0.5]).unwrap();
        let g = ContractionGram::new(&a).unwrap();
        assert_eq!(g.contract_pair(|_, _, _, _| 1.0), 0.0);
        assert_eq!(g.single(0, 1), -2.0);
    }

    #[test]
    fn pair_gram_of_basis_two_form() {
        let a = AlternatingForm::basis(3, &[0, 1]).unwrap();
        let g = ContractionGram::new(&a).unwrap();
        // α(e_0,e_1) = 1, α(e_1,e_0) = -1
        assert_eq!(g.pair(0, 1, 0, 1), 1.0);
        assert_eq!(g.pair(0, 1, 1, 0), -1.0);
        assert_eq!(g.pair(0, 2, 0, 2), 0.0);
    }
}
