//! Weighted circle actions `z_k ↦ e^{2πiθ_k t} z_k` on `S^{2m−1}` and the
//! polynomial vector fields spanning their normal bundle.
//!
//! Points live in realified coordinates: `x[2k] + i·x[2k+1] = z_{k+1}`.
//! Field labels keep the usual 1-based numbering (`Y_1 … Y_{m−1}`,
//! `W_1 … W_{m−2}`, and the separate `W_{m−1}`).

mod frame;

pub use frame::{
    bracket_displays, kahler_form, mean_curvature, norm_displays, oneill_closed_form,
    oneill_from_brackets, transverse_model, AdaptedFrame, BracketDisplay, NormDisplay,
};

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dual::{jvp, Scalar};
use crate::error::{Error, Result};

pub const DEFAULT_EPS_DEG: f64 = 1e-3;
pub const UNIT_TOL: f64 = 1e-12;
pub const REJECTION_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedHopfModel {
    theta: Vec<f64>,
}

impl WeightedHopfModel {
    /// Requires `m ≥ 2`, `θ₁ = 1` and every `θ_k ∈ (0, 1]`.
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.len() < 2 {
            return Err(Error::InvalidModel(format!("need m ≥ 2 weights, got {}", theta.len())));
        }
        if theta[0] != 1.0 {
            return Err(Error::InvalidModel(format!("θ₁ must be 1, got {}", theta[0])));
        }
        if let Some((k, t)) = theta.iter().enumerate().find(|(_, &t)| !(t > 0.0 && t <= 1.0)) {
            return Err(Error::InvalidModel(format!("θ_{} = {t} outside (0, 1]", k + 1)));
        }
        Ok(WeightedHopfModel { theta })
    }

    /// The Hopf fibration itself, all weights 1.
    pub fn hopf(m: usize) -> Result<Self> {
        Self::new(vec![1.0; m])
    }

    pub fn m(&self) -> usize {
        self.theta.len()
    }

    /// Codimension of the foliation, `2m − 2`.
    pub fn q(&self) -> usize {
        2 * self.m() - 2
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn is_hopf(&self) -> bool {
        self.theta.iter().all(|&t| t == 1.0)
    }
}

/// A unit vector of `ℝ^{2m}` together with the smallest `|z_k|²` the frame
/// construction will accept there.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    x: Vec<f64>,
    eps_deg: f64,
}

impl SpherePoint {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.len() < 4 || x.len() % 2 != 0 {
            return Err(Error::DegeneratePoint(format!("need 2m ≥ 4 real coordinates, got {}", x.len())));
        }
        let n2: f64 = x.iter().map(|v| v * v).sum();
        if (n2 - 1.0).abs() > UNIT_TOL {
            return Err(Error::DegeneratePoint(format!("|z|² = {n2}, not on the unit sphere")));
        }
        Ok(SpherePoint {
            x,
            eps_deg: DEFAULT_EPS_DEG,
        })
    }

    /// Rescales `x` onto the sphere first.
    pub fn normalized(x: Vec<f64>) -> Result<Self> {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::DegeneratePoint("cannot normalize a zero vector".into()));
        }
        Self::new(x.into_iter().map(|v| v / n).collect())
    }

    pub fn with_margin(mut self, eps_deg: f64) -> Self {
        self.eps_deg = eps_deg;
        self
    }

    pub fn coords(&self) -> &[f64] {
        &self.x
    }

    pub fn m(&self) -> usize {
        self.x.len() / 2
    }

    pub fn eps_deg(&self) -> f64 {
        self.eps_deg
    }

    /// `|z_k|²` for 0-based `k`.
    pub fn modulus_sq(&self, k: usize) -> f64 {
        self.x[2 * k] * self.x[2 * k] + self.x[2 * k + 1] * self.x[2 * k + 1]
    }

    pub fn moduli_sq(&self) -> Vec<f64> {
        (0..self.m()).map(|k| self.modulus_sq(k)).collect()
    }

    pub fn check_nondegenerate(&self) -> Result<()> {
        for k in 0..self.m() {
            let a = self.modulus_sq(k);
            if a < self.eps_deg {
                return Err(Error::DegeneratePoint(format!(
                    "|z_{}|² = {a:.3e} below the margin {:.1e}; resample",
                    k + 1,
                    self.eps_deg
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldId {
    X,
    /// `Y_l`, `1 ≤ l ≤ m−1`.
    Y(usize),
    /// `W_p`, `1 ≤ p ≤ m−2`.
    W(usize),
    /// `W_{m−1}`.
    WLast,
}

impl FieldId {
    pub fn validate(&self, m: usize) -> Result<()> {
        let ok = match *self {
            FieldId::X | FieldId::WLast => true,
            FieldId::Y(l) => (1..m).contains(&l),
            FieldId::W(p) => (1..m.saturating_sub(1)).contains(&p),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnknownField(format!("{self} for m = {m}")))
        }
    }

    /// `Y_1 … Y_{m−1}, W_1 … W_{m−2}, W_{m−1}`, the horizontal frame order.
    pub fn horizontal(m: usize) -> Vec<FieldId> {
        let mut ids: Vec<FieldId> = (1..m).map(FieldId::Y).collect();
        ids.extend((1..m - 1).map(FieldId::W));
        ids.push(FieldId::WLast);
        ids
    }

    pub fn label(&self, m: usize) -> String {
        match self {
            FieldId::WLast => format!("W{}", m - 1),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldId::X => write!(f, "X"),
            FieldId::Y(l) => write!(f, "Y{l}"),
            FieldId::W(p) => write!(f, "W{p}"),
            FieldId::WLast => write!(f, "W_last"),
        }
    }
}

/// Evaluates a field at any point of `ℝ^{2m}`; generic so the same code
/// yields exact Jacobians under dual numbers.
pub fn eval_field<T: Scalar>(theta: &[f64], id: FieldId, x: &[T]) -> Vec<T> {
    let m = theta.len();
    let zero = T::cst(0.0);
    let a: Vec<T> = (0..m).map(|k| x[2 * k] * x[2 * k] + x[2 * k + 1] * x[2 * k + 1]).collect();
    let mut out = vec![zero; 2 * m];
    // writes c·z_k, or c·iz_k with i(u + iv) = −v + iu
    let mut put = |k: usize, c: T, rotate: bool| {
        let (u, v) = (x[2 * k], x[2 * k + 1]);
        if rotate {
            out[2 * k] = -(c * v);
            out[2 * k + 1] = c * u;
        } else {
            out[2 * k] = c * u;
            out[2 * k + 1] = c * v;
        }
    };
    match id {
        FieldId::X => {
            for (k, &t) in theta.iter().enumerate() {
                put(k, T::cst(t), true);
            }
        }
        FieldId::Y(l) => {
            let l = l - 1;
            let tail = a[l + 1..].iter().fold(zero, |s, &v| s + v);
            put(l, -tail, false);
            for k in l + 1..m {
                put(k, a[l], false);
            }
        }
        FieldId::W(p) => {
            let p = p - 1;
            let tail = (p + 1..m).fold(zero, |s, k| s + T::cst(theta[k] * theta[k]) * a[k]);
            put(p, -tail, true);
            for k in p + 1..m {
                put(k, T::cst(theta[p] * theta[k]) * a[p], true);
            }
        }
        FieldId::WLast => {
            put(m - 2, -(T::cst(theta[m - 1]) * a[m - 1]), true);
            put(m - 1, T::cst(theta[m - 2]) * a[m - 2], true);
        }
    }
    out
}

fn check_point(model: &WeightedHopfModel, z: &SpherePoint) -> Result<()> {
    if z.m() != model.m() {
        return Err(Error::DimensionMismatch {
            expected: 2 * model.m(),
            found: z.coords().len(),
        });
    }
    Ok(())
}

pub fn field(model: &WeightedHopfModel, id: FieldId, z: &SpherePoint) -> Result<Vec<f64>> {
    check_point(model, z)?;
    id.validate(model.m())?;
    Ok(eval_field(model.theta(), id, z.coords()))
}

/// The generator `X = (iθ₁z₁, …, iθ_m z_m)`.
pub fn field_x(model: &WeightedHopfModel, z: &SpherePoint) -> Result<Vec<f64>> {
    field(model, FieldId::X, z)
}

/// The `2m − 2` horizontal fields in frame order.
pub fn fields_yw(model: &WeightedHopfModel, z: &SpherePoint) -> Result<Vec<Vec<f64>>> {
    check_point(model, z)?;
    z.check_nondegenerate()?;
    Ok(FieldId::horizontal(model.m())
        .into_iter()
        .map(|id| eval_field(model.theta(), id, z.coords()))
        .collect())
}

/// `[U, V] = DV·U − DU·V`, with exact Jacobians.
pub fn lie_bracket(model: &WeightedHopfModel, u: FieldId, v: FieldId, z: &SpherePoint) -> Result<Vec<f64>> {
    let uz = field(model, u, z)?;
    let vz = field(model, v, z)?;
    let th = model.theta();
    let dv_u = jvp(|x| eval_field(th, v, x), z.coords(), &uz);
    let du_v = jvp(|x| eval_field(th, u, x), z.coords(), &vz);
    Ok(dv_u.iter().zip(&du_v).map(|(a, b)| a - b).collect())
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Uniform on the sphere (normalized Gaussian), resampled until every
/// `|z_k|² ≥ eps_deg`.
pub fn sample_point<R: Rng + ?Sized>(model: &WeightedHopfModel, rng: &mut R, eps_deg: f64) -> Result<SpherePoint> {
    let n = 2 * model.m();
    for _ in 0..REJECTION_BUDGET {
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let Ok(point) = SpherePoint::normalized(x) else {
            continue;
        };
        let point = point.with_margin(eps_deg);
        if point.check_nondegenerate().is_ok() {
            return Ok(point);
        }
    }
    Err(Error::SamplingExhausted(REJECTION_BUDGET))
}

/// The `index`-th point of the stream seeded by `seed`; independent of how
/// many other points are drawn, so sweeps can run in any order.
pub fn sample_indexed(model: &WeightedHopfModel, seed: u64, index: u64, eps_deg: f64) -> Result<SpherePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    sample_point(model, &mut rng, eps_deg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(pairs: &[(f64, f64)]) -> SpherePoint {
        SpherePoint::normalized(pairs.iter().flat_map(|&(a, b)| [a, b]).collect()).unwrap()
    }

    #[test]
    fn model_validation() {
        assert!(WeightedHopfModel::new(vec![1.0]).is_err());
        assert!(WeightedHopfModel::new(vec![0.9, 1.0]).is_err());
        assert!(WeightedHopfModel::new(vec![1.0, 0.0]).is_err());
        assert!(WeightedHopfModel::new(vec![1.0, 1.5]).is_err());
        assert!(WeightedHopfModel::new(vec![1.0, f64::NAN]).is_err());
        let m = WeightedHopfModel::new(vec![1.0, 0.5, 1.0]).unwrap();
        assert_eq!((m.m(), m.q(), m.is_hopf()), (3, 4, false));
    }

    #[test]
    fn generator_norms() {
        let model = WeightedHopfModel::new(vec![1.0, 0.5]).unwrap();
        let x = field_x(&model, &pt(&[(1.0, 0.0), (0.0, 0.0)])).unwrap();
        assert_eq!(x, vec![0.0, 1.0, 0.0, 0.0]);
        let x = field_x(&model, &pt(&[(0.0, 0.0), (0.0, 1.0)])).unwrap();
        assert!((dot(&x, &x) - 0.25).abs() < 1e-15);
        let hopf = WeightedHopfModel::hopf(3).unwrap();
        let z = pt(&[(0.3, -0.2), (1.1, 0.4), (-0.5, 0.7)]);
        let x = field_x(&hopf, &z).unwrap();
        assert!((dot(&x, &x) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn field_ids() {
        assert_eq!(
            FieldId::horizontal(3),
            vec![FieldId::Y(1), FieldId::Y(2), FieldId::W(1), FieldId::WLast]
        );
        assert_eq!(FieldId::horizontal(2), vec![FieldId::Y(1), FieldId::WLast]);
        assert!(matches!(FieldId::Y(3).validate(3), Err(Error::UnknownField(_))));
        assert!(matches!(FieldId::W(1).validate(2), Err(Error::UnknownField(_))));
        assert!(FieldId::W(1).validate(3).is_ok());
        assert_eq!(FieldId::WLast.label(4), "W3");
        let model = WeightedHopfModel::hopf(2).unwrap();
        let z = pt(&[(1.0, 0.0), (1.0, 0.0)]);
        assert!(lie_bracket(&model, FieldId::Y(2), FieldId::X, &z).is_err());
    }

    #[test]
    fn degenerate_points_are_rejected() {
        let model = WeightedHopfModel::hopf(2).unwrap();
        let z = pt(&[(1.0, 0.0), (1e-3, 0.0)]);
        assert!(matches!(fields_yw(&model, &z), Err(Error::DegeneratePoint(_))));
        assert!(SpherePoint::new(vec![1.0, 0.0, 0.0, 0.1]).is_err());
    }

    #[test]
    fn sampling_is_reproducible_and_nondegenerate() {
        let model = WeightedHopfModel::new(vec![1.0, 0.7, 0.4]).unwrap();
        let a = sample_indexed(&model, 9, 3, DEFAULT_EPS_DEG).unwrap();
        let b = sample_indexed(&model, 9, 3, DEFAULT_EPS_DEG).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_indexed(&model, 9, 4, DEFAULT_EPS_DEG).unwrap());

        let n = 1000;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut mean = [0.0; 3];
        for _ in 0..n {
            let z = sample_point(&model, &mut rng, DEFAULT_EPS_DEG).unwrap();
            assert!(z.check_nondegenerate().is_ok());
            for (k, v) in z.moduli_sq().into_iter().enumerate() {
                mean[k] += v / n as f64;
            }
        }
        // |z_k|² ~ Beta(1, m−1) on S^5: mean 1/3, sd 1/√18
        let sigma = (1.0f64 / 18.0).sqrt() / (n as f64).sqrt();
        for v in mean {
            assert!((v - 1.0 / 3.0).abs() < 3.0 * sigma, "{mean:?}");
        }
    }

    #[test]
    fn impossible_margin_exhausts_budget() {
        let model = WeightedHopfModel::hopf(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(sample_point(&model, &mut rng, 0.6), Err(Error::SamplingExhausted(_))));
    }
}
