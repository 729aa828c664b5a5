//! Seeded synthetic inputs: ambient curvature near a space form, random
//! O'Neill tensors and random unit forms.
//!
//! Every instance draws from its own ChaCha stream, so instance `k` is the
//! same whether a sweep runs sequentially or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::curvature::RiemannTensor;
use crate::error::{Error, Result};
use crate::exterior::{binomial, AlternatingForm};
use crate::oneill::ONeillTensor;

/// Size of the Kulkarni–Nomizu perturbation added to the space form.
pub const PERTURBATION: f64 = 0.1;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Symmetric `q×q` matrix with `N(0, scale²)` entries on and above the diagonal.
pub fn random_symmetric<R: Rng + ?Sized>(q: usize, scale: f64, rng: &mut R) -> Vec<f64> {
    let mut h = vec![0.0; q * q];
    for i in 0..q {
        for j in i..q {
            let x = scale * normal(rng);
            h[i * q + j] = x;
            h[j * q + i] = x;
        }
    }
    h
}

/// `c(δ_ik δ_jl − δ_il δ_jk) + eps·(h ⊙ k)`; valid by construction.
pub fn perturbed_space_form<R: Rng + ?Sized>(q: usize, c: f64, eps: f64, rng: &mut R) -> RiemannTensor {
    let h = random_symmetric(q, eps.sqrt(), rng);
    let k = random_symmetric(q, eps.sqrt(), rng);
    RiemannTensor::space_form(q, c)
        .sum(&RiemannTensor::kulkarni_nomizu(q, &h, &k))
        .expect("same dimension")
}

/// Skew O'Neill components `N(0, 1/q)`.
pub fn random_oneill<R: Rng + ?Sized>(q: usize, vdim: usize, rng: &mut R) -> ONeillTensor {
    let scale = 1.0 / (q as f64).sqrt();
    ONeillTensor::from_upper(q, vdim, |_, _, _| scale * normal(rng))
}

/// A unit `p`-form with Gaussian coefficients.
pub fn random_unit_form<R: Rng + ?Sized>(q: usize, p: usize, rng: &mut R) -> Result<AlternatingForm> {
    for _ in 0..64 {
        let coeffs = (0..binomial(q, p)).map(|_| normal(rng)).collect();
        let f = AlternatingForm::from_coeffs(q, p, coeffs)?;
        if f.norm_sq() > 1e-12 {
            return Ok(f.normalized());
        }
    }
    Err(Error::SamplingExhausted(64))
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub rm: RiemannTensor,
    pub a: ONeillTensor,
    pub form: AlternatingForm,
}

impl Instance {
    /// Instance `index` of the `(q, p)` family under `seed`; the vertical
    /// dimension cycles through 1, 2, 3.
    pub fn generate(q: usize, p: usize, seed: u64, index: u64) -> Result<Self> {
        if p > q || q == 0 {
            return Err(Error::DegreeOverflow { degree: p, dim: q });
        }
        let mut rng = stream(seed ^ ((q as u64) << 40) ^ ((p as u64) << 32), index);
        let vdim = 1 + (index % 3) as usize;
        Ok(Instance {
            rm: perturbed_space_form(q, 1.0, PERTURBATION, &mut rng),
            a: random_oneill(q, vdim, &mut rng),
            form: random_unit_form(q, p, &mut rng)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible_and_valid() {
        let a = Instance::generate(5, 2, 7, 3).unwrap();
        let b = Instance::generate(5, 2, 7, 3).unwrap();
        assert_eq!(a.rm, b.rm);
        assert_eq!(a.a, b.a);
        assert_eq!(a.form, b.form);
        assert_eq!(a.a.vdim(), 1);
        assert!((a.form.norm_sq() - 1.0).abs() < 1e-14);
        assert!(a.rm.symmetry_residual() < 1e-12 && a.rm.bianchi_residual() < 1e-12);
        assert_ne!(a.form, Instance::generate(5, 2, 7, 4).unwrap().form);
        assert!(Instance::generate(3, 4, 0, 0).is_err());
    }
}
