//! The O'Neill integrability tensor and everything built from it.

mod bounds;
mod estimates;
mod identities;
mod tensors;

pub use bounds::{
    cor31_scan, sandwich_check, thm31_report, thm32_report, thm41_report, BoundReport, Cor31Scan,
    InputsDigest, TheoremId,
};
pub use estimates::{
    cauchy_schwarz_chain, duality_check, hodge_ricci_identity, theta_rewrite, ChainStep,
    DualityCheck, ThetaRewrite,
};
pub use identities::{master_identity_residual, prop31_value, prop41_check, MasterIdentityParts};
pub use tensors::{
    bminus_norm, bminus_norm_closed, bplus_norm, bplus_norm_closed, mixed_bivector_term,
    mixed_bivector_term_norm_form, vertical_contraction_term, vertical_contraction_term_norm_form,
    Flagged,
};

use crate::error::{Error, Result};
use crate::exterior::{AlternatingForm, FiberVector};

/// Components `a[i][j][s] = g(A_{e_i}e_j, V_s)` for horizontal frame indices
/// `i, j < q` and vertical index `s < vdim`.
#[derive(Debug, Clone, PartialEq)]
pub struct ONeillTensor {
    dim: usize,
    vdim: usize,
    data: Vec<f64>,
}

impl ONeillTensor {
    /// Requires exact skewness in `(i, j)`.
    pub fn new(dim: usize, vdim: usize, data: Vec<f64>) -> Result<Self> {
        let expected = dim * dim * vdim;
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: data.len(),
            });
        }
        let a = ONeillTensor { dim, vdim, data };
        for i in 0..dim {
            for j in 0..dim {
                for s in 0..vdim {
                    if a.get(i, j, s) != -a.get(j, i, s) {
                        return Err(Error::InvalidONeill(format!(
                            "not skew at ({i},{j},{s}): {} vs {}",
                            a.get(i, j, s),
                            a.get(j, i, s)
                        )));
                    }
                }
            }
        }
        Ok(a)
    }

    pub fn zeros(dim: usize, vdim: usize) -> Self {
        ONeillTensor {
            dim,
            vdim,
            data: vec![0.0; dim * dim * vdim],
        }
    }

    /// Fills `i < j` from `f` and mirrors with a sign, so skewness is exact.
    pub fn from_upper(dim: usize, vdim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut a = ONeillTensor::zeros(dim, vdim);
        for i in 0..dim {
            for j in i + 1..dim {
                for s in 0..vdim {
                    let v = f(i, j, s);
                    a.data[(i * dim + j) * vdim + s] = v;
                    a.data[(j * dim + i) * vdim + s] = -v;
                }
            }
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, s: usize) -> f64 {
        self.data[(i * self.dim + j) * self.vdim + s]
    }

    /// `g(A_{e_i}e_j, A_{e_k}e_l)`.
    #[inline]
    pub fn pairing(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let v = self.vdim;
        let x = &self.data[(i * self.dim + j) * v..][..v];
        let y = &self.data[(k * self.dim + l) * v..][..v];
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// `A_{e_i}V_s`, the horizontal vector with components
    /// `g(A_{e_i}V_s, e_j) = −a[i][j][s]`.
    pub fn on_vertical(&self, i: usize, s: usize) -> FiberVector {
        FiberVector::new((0..self.dim).map(|j| -self.get(i, j, s)).collect())
    }

    /// The 1-form `X ↦ g(A_{e_i}X, V_s)`.
    pub fn horizontal_component_form(&self, i: usize, s: usize) -> AlternatingForm {
        AlternatingForm::from_coeffs(self.dim, 1, (0..self.dim).map(|j| self.get(i, j, s)).collect())
            .expect("degree 1 fits any nonzero fiber")
    }

    pub fn scaled(&self, c: f64) -> ONeillTensor {
        ONeillTensor {
            dim: self.dim,
            vdim: self.vdim,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }
}

/// `|A|² = Σ_{i,j,s} a[i][j][s]²`.
pub fn oneill_norm(a: &ONeillTensor) -> f64 {
    a.data.iter().map(|x| x * x).sum()
}

/// `|A|² = Σ_{i,s} |A_{e_i}V_s|²`, the vertical-argument definition.
pub fn oneill_norm_vertical(a: &ONeillTensor) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.dim {
        for s in 0..a.vdim {
            acc += a.on_vertical(i, s).norm_sq();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skewness_is_enforced() {
        let mut data = vec![0.0; 2 * 2];
        data[1] = 1.0;
        assert!(ONeillTensor::new(2, 1, data.clone()).is_err());
        data[2] = -1.0;
        let a = ONeillTensor::new(2, 1, data).unwrap();
        assert_eq!(a.get(0, 1, 0), 1.0);
        assert_eq!(a.on_vertical(0, 0).components(), &[0.0, -1.0]);
    }

    #[test]
    fn two_norm_definitions_agree() {
        let a = ONeillTensor::from_upper(5, 3, |i, j, s| ((i * 7 + j * 3 + s) as f64).sin());
        assert!((oneill_norm(&a) - oneill_norm_vertical(&a)).abs() < 1e-12);
        assert_eq!(oneill_norm(&ONeillTensor::zeros(4, 2)), 0.0);
    }
}
