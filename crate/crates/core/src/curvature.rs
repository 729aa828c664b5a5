//! Algebraic curvature tensors and the Bochner curvature term.
//!
//! Sign convention: `R_{ijkl}` is normalized so that the sectional curvature
//! of the plane `(e_i, e_j)` is `R_{ijij}`. The unit round metric therefore
//! has `R_{ijkl} = δ_ik δ_jl − δ_il δ_jk`, and `Ric_{ij} = Σ_l R_{lilj}`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::exterior::{interior_vector, wedge, AlternatingForm, FiberVector, MultiIndex};
use crate::gram::ContractionGram;
use crate::oneill::ONeillTensor;

/// Default absolute tolerance for the symmetry and Bianchi checks, scaled by
/// `max(1, max |R|)`.
pub const TENSOR_TOL: f64 = 1e-10;

/// A 4-index curvature array in an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannTensor {
    dim: usize,
    data: Vec<f64>,
    /// Set when the tensor was produced by [`RiemannTensor::space_form`].
    space_form: Option<f64>,
}

impl RiemannTensor {
    /// Validates the pair/skew symmetries and the first Bianchi identity.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(dim, data, TENSOR_TOL)
    }

    pub fn with_tolerance(dim: usize, data: Vec<f64>, tol: f64) -> Result<Self> {
        let expected = dim.pow(4);
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: data.len(),
            });
        }
        let r = RiemannTensor {
            dim,
            data,
            space_form: None,
        };
        let scale = tol * r.max_abs().max(1.0);
        let sym = r.symmetry_residual();
        if sym > scale {
            return Err(Error::InvalidTensor {
                what: "symmetry",
                residual: sym,
            });
        }
        let bianchi = r.bianchi_residual();
        if bianchi > scale {
            return Err(Error::InvalidTensor {
                what: "first Bianchi identity",
                residual: bianchi,
            });
        }
        Ok(r)
    }

    pub fn zeros(dim: usize) -> Self {
        RiemannTensor {
            dim,
            data: vec![0.0; dim.pow(4)],
            space_form: None,
        }
    }

    /// Constant curvature `c`: `R_{ijkl} = c(δ_ik δ_jl − δ_il δ_jk)`.
    pub fn space_form(dim: usize, c: f64) -> Self {
        let mut r = RiemannTensor::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    r.set(i, j, i, j, c);
                    r.set(i, j, j, i, -c);
                }
            }
        }
        r.space_form = Some(c);
        r
    }

    /// Kulkarni–Nomizu product of two symmetric `q×q` matrices,
    /// `h_ik k_jl + h_jl k_ik − h_il k_jk − h_jk k_il`.
    pub fn kulkarni_nomizu(dim: usize, h: &[f64], k: &[f64]) -> Self {
        let mut r = RiemannTensor::zeros(dim);
        let at = |m: &[f64], a: usize, b: usize| m[a * dim + b];
        for i in 0..dim {
            for j in 0..dim {
                for a in 0..dim {
                    for b in 0..dim {
                        let v = at(h, i, a) * at(k, j, b) + at(h, j, b) * at(k, i, a)
                            - at(h, i, b) * at(k, j, a)
                            - at(h, j, a) * at(k, i, b);
                        r.set(i, j, a, b, v);
                    }
                }
            }
        }
        r
    }

    /// Componentwise sum; the space-form marker survives only if both carry it.
    pub fn sum(&self, other: &RiemannTensor) -> Result<RiemannTensor> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(RiemannTensor {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            space_form: match (self.space_form, other.space_form) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        })
    }

    pub fn scaled(&self, c: f64) -> RiemannTensor {
        RiemannTensor {
            dim: self.dim,
            data: self.data.iter().map(|x| c * x).collect(),
            space_form: self.space_form.map(|k| c * k),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space_form_constant(&self) -> Option<f64> {
        self.space_form
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let q = self.dim;
        ((i * q + j) * q + k) * q + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.index(i, j, k, l)]
    }

    fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let idx = self.index(i, j, k, l);
        self.data[idx] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &RiemannTensor) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Worst violation of `R_ijkl = −R_jikl = −R_ijlk = R_klij`.
    pub fn symmetry_residual(&self) -> f64 {
        let q = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..q {
            for j in 0..q {
                for k in 0..q {
                    for l in 0..q {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Worst cyclic sum `R_ijkl + R_jkil + R_kijl`.
    pub fn bianchi_residual(&self) -> f64 {
        let q = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..q {
            for j in 0..q {
                for k in 0..q {
                    for l in 0..q {
                        let s = self.get(i, j, k, l) + self.get(j, k, i, l) + self.get(k, i, j, l);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `Ric_ij = Σ_l R_{lilj}`, row-major.
    pub fn ricci(&self) -> Vec<f64> {
        let q = self.dim;
        let mut ric = vec![0.0; q * q];
        for i in 0..q {
            for j in 0..q {
                ric[i * q + j] = (0..q).map(|l| self.get(l, i, l, j)).sum();
            }
        }
        ric
    }

    pub fn scalar(&self) -> f64 {
        let q = self.dim;
        let ric = self.ricci();
        (0..q).map(|i| ric[i * q + i]).sum()
    }

    /// `R(u, v, u, v)`.
    pub fn quadruple(&self, u: &[f64], v: &[f64]) -> f64 {
        let q = self.dim;
        let mut acc = 0.0;
        for i in 0..q {
            for j in 0..q {
                let uv = u[i] * v[j];
                if uv == 0.0 {
                    continue;
                }
                for k in 0..q {
                    for l in 0..q {
                        acc += uv * u[k] * v[l] * self.get(i, j, k, l);
                    }
                }
            }
        }
        acc
    }
}

/// `M_{(i<j),(k<l)} = R_{ijkl}` on the orthonormal bivector basis.
pub fn curvature_operator_matrix(r: &RiemannTensor) -> DMatrix<f64> {
    let q = r.dim();
    let pairs = MultiIndex::all(q, 2);
    let n = pairs.len();
    DMatrix::from_fn(n, n, |a, b| {
        let (i, j) = (pairs[a].as_slice()[0], pairs[a].as_slice()[1]);
        let (k, l) = (pairs[b].as_slice()[0], pairs[b].as_slice()[1]);
        r.get(i, j, k, l)
    })
}

/// Smallest and largest eigenvalue of the curvature operator.
pub fn curvature_operator_extremes(r: &RiemannTensor) -> Result<(f64, f64)> {
    if r.dim() < 2 {
        return Ok((0.0, 0.0));
    }
    let m = curvature_operator_matrix(r);
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::EigenFailure("non-finite curvature entries".into()));
    }
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::EigenFailure("symmetric eigensolver did not converge".into()))?;
    let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Sectional curvature of the plane spanned by `u` and `v`.
pub fn sectional(r: &RiemannTensor, u: &FiberVector, v: &FiberVector) -> Result<f64> {
    let q = r.dim();
    for w in [u, v] {
        if w.dim() != q {
            return Err(Error::DimensionMismatch {
                expected: q,
                found: w.dim(),
            });
        }
    }
    let gram = u.norm_sq() * v.norm_sq() - u.dot(v).powi(2);
    if gram < 1e-14 {
        return Err(Error::DegeneratePlane(gram));
    }
    Ok(r.quadruple(u.components(), v.components()) / gram)
}

/// Sectional curvature of an orthonormal pair through the operator matrix.
fn plane_curvature(m: &DMatrix<f64>, pairs: &[MultiIndex], u: &[f64], v: &[f64]) -> f64 {
    let b: Vec<f64> = pairs
        .iter()
        .map(|p| {
            let (i, j) = (p.as_slice()[0], p.as_slice()[1]);
            u[i] * v[j] - u[j] * v[i]
        })
        .collect();
    let norm: f64 = b.iter().map(|x| x * x).sum();
    let mut acc = 0.0;
    for a in 0..b.len() {
        if b[a] == 0.0 {
            continue;
        }
        for c in 0..b.len() {
            acc += b[a] * m[(a, c)] * b[c];
        }
    }
    acc / norm
}

fn orthonormalize(u: &mut [f64], v: &mut [f64]) -> bool {
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu < 1e-12 {
        return false;
    }
    u.iter_mut().for_each(|x| *x /= nu);
    let d: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    v.iter_mut().zip(u.iter()).for_each(|(b, a)| *b -= d * a);
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nv < 1e-12 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= nv);
    true
}

/// Coordinate ascent over plane rotations toward the basis directions.
/// `sense = 1` maximizes, `-1` minimizes.
fn refine_plane(
    m: &DMatrix<f64>,
    pairs: &[MultiIndex],
    u0: &[f64],
    v0: &[f64],
    sense: f64,
) -> f64 {
    let q = u0.len();
    let mut u = u0.to_vec();
    let mut v = v0.to_vec();
    let mut best = sense * plane_curvature(m, pairs, &u, &v);
    let mut step: f64 = 0.5;
    let mut rounds = 0;
    while step > 1e-7 && rounds < 400 {
        rounds += 1;
        let mut improved = false;
        for dir in 0..q {
            for which in 0..2 {
                for sgn in [1.0, -1.0] {
                    let (c, s) = ((sgn * step).cos(), (sgn * step).sin());
                    let mut nu = u.clone();
                    let mut nv = v.clone();
                    let target = if which == 0 { &mut nu } else { &mut nv };
                    // rotate toward e_dir
                    for (t, x) in target.iter_mut().enumerate() {
                        *x = c * *x + if t == dir { s } else { 0.0 };
                    }
                    if !orthonormalize(&mut nu, &mut nv) {
                        continue;
                    }
                    let val = sense * plane_curvature(m, pairs, &nu, &nv);
                    if val > best + 1e-15 {
                        best = val;
                        u = nu;
                        v = nv;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    sense * best
}

/// Sampled estimates `(K₀, K₁)` of the extreme sectional curvatures.
///
/// Random planes are drawn from a fixed stream and each is refined by
/// coordinate ascent. Always `ρ₀ ≤ k0_est` and `k1_est ≤ ρ₁`; no global
/// optimality is claimed. Space forms return their constant exactly.
pub fn sectional_extremes(r: &RiemannTensor, budget: usize, seed: u64) -> (f64, f64) {
    if let Some(c) = r.space_form_constant() {
        return (c, c);
    }
    let q = r.dim();
    if q < 2 {
        return (0.0, 0.0);
    }
    let m = curvature_operator_matrix(r);
    let pairs = MultiIndex::all(q, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k0 = f64::INFINITY;
    let mut k1 = f64::NEG_INFINITY;
    let mut drawn = 0;
    while drawn < budget.max(1) {
        let mut u: Vec<f64> = (0..q).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut v: Vec<f64> = (0..q).map(|_| StandardNormal.sample(&mut rng)).collect();
        if !orthonormalize(&mut u, &mut v) {
            continue;
        }
        drawn += 1;
        k0 = k0.min(refine_plane(&m, &pairs, &u, &v, -1.0));
        k1 = k1.max(refine_plane(&m, &pairs, &u, &v, 1.0));
    }
    (k0, k1)
}

/// The four curvature scalars `ρ₀ ≤ K₀ ≤ K₁ ≤ ρ₁` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureExtremes {
    pub rho0: f64,
    pub rho1: f64,
    pub k0_est: f64,
    pub k1_est: f64,
    pub exact_space_form: Option<f64>,
}

impl CurvatureExtremes {
    pub fn compute(r: &RiemannTensor, budget: usize, seed: u64) -> Result<Self> {
        let (rho0, rho1) = match r.space_form_constant() {
            Some(c) => (c, c),
            None => curvature_operator_extremes(r)?,
        };
        let (k0_est, k1_est) = sectional_extremes(r, budget, seed);
        Ok(CurvatureExtremes {
            rho0,
            rho1,
            k0_est,
            k1_est,
            exact_space_form: r.space_form_constant(),
        })
    }

    /// Worst violation of the ordering chain (zero when it holds).
    pub fn chain_violation(&self) -> f64 {
        [
            self.rho0 - self.k0_est,
            self.k0_est - self.k1_est,
            self.k1_est - self.rho1,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `R^∇ = R^M + 2g(A_ie_j, A_ke_l) − g(A_je_k, A_ie_l) − g(A_ke_i, A_je_l)`.
pub fn transverse_riemann(rm: &RiemannTensor, a: &ONeillTensor) -> Result<RiemannTensor> {
    let q = rm.dim();
    if a.dim() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: a.dim(),
        });
    }
    let mut data = vec![0.0; q.pow(4)];
    for i in 0..q {
        for j in 0..q {
            for k in 0..q {
                for l in 0..q {
                    data[((i * q + j) * q + k) * q + l] = rm.get(i, j, k, l)
                        + 2.0 * a.pairing(i, j, k, l)
                        - a.pairing(j, k, i, l)
                        - a.pairing(k, i, j, l);
                }
            }
        }
    }
    RiemannTensor::with_tolerance(q, data, 1e-9)
}

/// Transverse Ricci tensor from its own O'Neill formula (row-major) and the
/// transverse scalar curvature. Cross-checked against the trace of
/// [`transverse_riemann`].
pub fn transverse_ricci(rm: &RiemannTensor, a: &ONeillTensor) -> Result<(Vec<f64>, f64)> {
    let q = rm.dim();
    if a.dim() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: a.dim(),
        });
    }
    let mut ric = vec![0.0; q * q];
    for i in 0..q {
        for j in 0..q {
            let mut acc = 0.0;
            for l in 0..q {
                acc += rm.get(l, i, l, j) + 2.0 * a.pairing(l, i, l, j)
                    - a.pairing(i, l, l, j)
                    - a.pairing(l, l, i, j);
            }
            ric[i * q + j] = acc;
        }
    }
    let traced = transverse_riemann(rm, a)?.ricci();
    let residual = ric
        .iter()
        .zip(&traced)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    let scale = ric.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    if residual > 1e-10 * scale {
        return Err(Error::IdentityViolation {
            name: "transverse Ricci vs trace of transverse Riemann",
            residual,
            digest: format!("q={q} vdim={}", a.vdim()),
        });
    }
    let scalar = (0..q).map(|i| ric[i * q + i]).sum();
    Ok((ric, scalar))
}

/// `R^∇`, `Ric^∇` and `Scal^∇` together.
#[derive(Debug, Clone)]
pub struct TransverseCurvature {
    pub riemann: RiemannTensor,
    pub ricci: Vec<f64>,
    pub scalar: f64,
}

impl TransverseCurvature {
    pub fn compute(rm: &RiemannTensor, a: &ONeillTensor) -> Result<Self> {
        let riemann = transverse_riemann(rm, a)?;
        let (ricci, scalar) = transverse_ricci(rm, a)?;
        Ok(TransverseCurvature {
            riemann,
            ricci,
            scalar,
        })
    }
}

/// `R(a) = −Σ_{ij} e^j ∧ (e_i ⌟ R(e_i,e_j)a)`, where `R(e_i,e_j)` acts on
/// forms as the negative derivation of `Z ↦ R(e_i,e_j)Z = Σ_l R_{ij·l} e_l`.
pub fn curvature_action_on_form(r: &RiemannTensor, a: &AlternatingForm) -> Result<AlternatingForm> {
    let q = r.dim();
    if a.dim() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: a.dim(),
        });
    }
    let p = a.degree();
    let mut out = AlternatingForm::zeros(q, p)?;
    if p == 0 {
        return Ok(out);
    }
    let slots = MultiIndex::all(q, p);
    let mut tuple = vec![0usize; p];
    for i in 0..q {
        for j in 0..q {
            // (R(e_i,e_j)a)_T = −Σ_r Σ_l R_{ij t_r l} a(…, e_l, …)
            let mut acted = AlternatingForm::zeros(q, p)?;
            let mut nonzero = false;
            for (slot, t) in slots.iter().enumerate() {
                let mut acc = 0.0;
                for r_pos in 0..p {
                    tuple.copy_from_slice(t.as_slice());
                    for l in 0..q {
                        let coef = r.get(i, j, t.as_slice()[r_pos], l);
                        if coef == 0.0 {
                            continue;
                        }
                        tuple[r_pos] = l;
                        acc += coef * a.component(&tuple);
                    }
                }
                acted.coeffs_mut()[slot] = -acc;
                nonzero |= acc != 0.0;
            }
            if !nonzero {
                continue;
            }
            let contracted = interior_vector(&FiberVector::basis(q, i), &acted)?;
            let term = wedge(&FiberVector::basis(q, j).flat(), &contracted)?;
            out.add_scaled(&term, -1.0)?;
        }
    }
    Ok(out)
}

/// `Σ S_ij ⟨e_i⌟a, e_j⌟a⟩` for a `q×q` row-major matrix `S`.
pub fn ricci_pairing(s: &[f64], gram: &ContractionGram) -> f64 {
    let q = gram.dim();
    gram.contract_single(|i, j| s[i * q + j])
}

/// `Σ R_ijkl ⟨(e_j∧e_i)⌟a, (e_l∧e_k)⌟a⟩`.
pub fn riemann_pairing(r: &RiemannTensor, gram: &ContractionGram) -> f64 {
    gram.contract_pair(|i, j, k, l| r.get(i, j, k, l))
}

/// `⟨R(a), a⟩ = Σ Ric_ij ⟨e_i⌟a, e_j⌟a⟩ − ½ Σ R_ijkl ⟨(e_j∧e_i)⌟a, (e_l∧e_k)⌟a⟩`.
pub fn curvature_term(ric: &[f64], r: &RiemannTensor, a: &AlternatingForm) -> Result<f64> {
    let q = r.dim();
    if ric.len() != q * q {
        return Err(Error::DimensionMismatch {
            expected: q * q,
            found: ric.len(),
        });
    }
    if a.dim() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: a.dim(),
        });
    }
    let gram = ContractionGram::new(a)?;
    Ok(curvature_term_with(ric, r, &gram))
}

pub(crate) fn curvature_term_with(ric: &[f64], r: &RiemannTensor, gram: &ContractionGram) -> f64 {
    ricci_pairing(ric, gram) - 0.5 * riemann_pairing(r, gram)
}
