//! The adapted frame at a point, the O'Neill tensor from exact brackets and
//! the closed-form expressions it is compared against.

use super::{dot, eval_field, field_x, fields_yw, lie_bracket, FieldId, SpherePoint, WeightedHopfModel};
use crate::curvature::RiemannTensor;
use crate::dual::jvp;
use crate::error::{Error, Result};
use crate::exterior::AlternatingForm;
use crate::oneill::{oneill_norm, ONeillTensor};

/// Unit vertical vector and the normalized horizontal fields, in ambient
/// coordinates, plus the raw squared norms used to normalize them.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFrame {
    pub vertical: Vec<f64>,
    pub horizontal: Vec<Vec<f64>>,
    pub x_norm_sq: f64,
    pub field_norms_sq: Vec<f64>,
}

impl AdaptedFrame {
    pub fn new(model: &WeightedHopfModel, z: &SpherePoint) -> Result<Self> {
        let fields = fields_yw(model, z)?;
        let x = field_x(model, z)?;
        let x_norm_sq = dot(&x, &x);
        let field_norms_sq: Vec<f64> = fields.iter().map(|f| dot(f, f)).collect();
        let floor = z.eps_deg().powi(3);
        for (id, n) in FieldId::horizontal(model.m()).iter().zip(&field_norms_sq) {
            if *n < floor {
                return Err(Error::DegeneratePoint(format!(
                    "|{}|² = {n:.3e} too small for a frame",
                    id.label(model.m())
                )));
            }
        }
        let unit = |v: &[f64], n2: f64| v.iter().map(|c| c / n2.sqrt()).collect::<Vec<f64>>();
        Ok(AdaptedFrame {
            vertical: unit(&x, x_norm_sq),
            horizontal: fields.iter().zip(&field_norms_sq).map(|(f, &n)| unit(f, n)).collect(),
            x_norm_sq,
            field_norms_sq,
        })
    }

    pub fn q(&self) -> usize {
        self.horizontal.len()
    }

    fn all(&self) -> impl Iterator<Item = &Vec<f64>> {
        std::iter::once(&self.vertical).chain(&self.horizontal)
    }

    /// `max |⟨f_a, f_b⟩ − δ_ab|` over the full frame.
    pub fn gram_residual(&self) -> f64 {
        let vs: Vec<&Vec<f64>> = self.all().collect();
        let mut worst = 0.0f64;
        for (a, u) in vs.iter().enumerate() {
            for (b, v) in vs.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot(u, v) - want).abs());
            }
        }
        worst
    }

    /// `max |⟨f_a, z⟩|`: every frame vector is tangent to the sphere.
    pub fn tangency_residual(&self, z: &SpherePoint) -> f64 {
        self.all().fold(0.0, |m, v| m.max(dot(v, z.coords()).abs()))
    }

    /// Horizontal components `⟨w, e_i⟩`.
    pub fn horizontal_coords(&self, w: &[f64]) -> Vec<f64> {
        self.horizontal.iter().map(|e| dot(e, w)).collect()
    }
}

/// One squared norm, computed from the field and from its closed display.
#[derive(Debug, Clone, PartialEq)]
pub struct NormDisplay {
    pub field: String,
    pub computed: f64,
    pub displayed: f64,
}

/// `|X|²`, `|Y_l|²`, `|W_p|²`, `|W_{m−1}|²` both ways.
pub fn norm_displays(model: &WeightedHopfModel, z: &SpherePoint) -> Result<Vec<NormDisplay>> {
    let m = model.m();
    let th = model.theta();
    let a = z.moduli_sq();
    let s = |j: usize| a[j..].iter().sum::<f64>();
    let st = |j: usize| (j..m).map(|k| th[k] * th[k] * a[k]).sum::<f64>();

    let x = field_x(model, z)?;
    let mut out = vec![NormDisplay {
        field: "X".into(),
        computed: dot(&x, &x),
        displayed: a[0] + (1..m).map(|k| th[k] * th[k] * a[k]).sum::<f64>(),
    }];
    let fields = fields_yw(model, z)?;
    for (id, f) in FieldId::horizontal(m).into_iter().zip(&fields) {
        let displayed = match id {
            FieldId::Y(l) => a[l - 1] * s(l) * s(l - 1),
            FieldId::W(p) => a[p - 1] * st(p) * st(p - 1),
            FieldId::WLast => (th[m - 1] * th[m - 1] * a[m - 1] + th[m - 2] * th[m - 2] * a[m - 2]) * a[m - 1] * a[m - 2],
            FieldId::X => unreachable!("X is not horizontal"),
        };
        out.push(NormDisplay {
            field: id.label(m),
            computed: dot(f, f),
            displayed,
        });
    }
    Ok(out)
}

/// `⟨[Z_i, Z_j], X⟩` computed and as displayed; pairs with no display are
/// claimed to vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketDisplay {
    pub left: String,
    pub right: String,
    pub computed: f64,
    pub displayed: f64,
    pub has_display: bool,
}

fn displayed_pairing(model: &WeightedHopfModel, z: &SpherePoint, u: FieldId, v: FieldId) -> Option<f64> {
    let m = model.m();
    let th = model.theta();
    let a = z.moduli_sq();
    let s = |j: usize| a[j..].iter().sum::<f64>();
    let st = |j: usize| (j..m).map(|k| th[k] * th[k] * a[k]).sum::<f64>();
    match (u, v) {
        (FieldId::Y(l), FieldId::W(p)) if l == p => {
            let l = l - 1;
            Some(-2.0 * th[l] * a[l] * st(l + 1) * s(l))
        }
        (FieldId::Y(l), FieldId::W(p)) if l > p => {
            let (l, p) = (l - 1, p - 1);
            let tail: f64 = (l + 1..m).map(|k| (th[l] * th[l] - th[k] * th[k]) * a[k]).sum();
            Some(2.0 * a[l] * th[p] * a[p] * tail)
        }
        (FieldId::Y(l), FieldId::WLast) if l == m - 1 => {
            Some(-2.0 * a[m - 2] * a[m - 1] * th[m - 2] * th[m - 1] * (a[m - 2] + a[m - 1]))
        }
        _ => None,
    }
}

/// Every `i < j` pairing of the horizontal frame fields with `X`.
pub fn bracket_displays(model: &WeightedHopfModel, z: &SpherePoint) -> Result<Vec<BracketDisplay>> {
    z.check_nondegenerate()?;
    let m = model.m();
    let x = field_x(model, z)?;
    let ids = FieldId::horizontal(m);
    let mut out = Vec::new();
    for (i, &u) in ids.iter().enumerate() {
        for &v in &ids[i + 1..] {
            let computed = dot(&lie_bracket(model, u, v, z)?, &x);
            let shown = displayed_pairing(model, z, u, v);
            out.push(BracketDisplay {
                left: u.label(m),
                right: v.label(m),
                computed,
                displayed: shown.unwrap_or(0.0),
                has_display: shown.is_some(),
            });
        }
    }
    Ok(out)
}

/// `a[i][j][0] = ⟨[Z_i, Z_j], X⟩ / (2|Z_i||Z_j||X|)` on the adapted frame,
/// and `|A|² = (1/(2|X|²)) Σ_{i<j} ⟨[Z_i,Z_j],X⟩² / (|Z_i|²|Z_j|²)`.
/// The two routes to `|A|²` must agree.
pub fn oneill_from_brackets(model: &WeightedHopfModel, z: &SpherePoint) -> Result<(ONeillTensor, f64)> {
    let frame = AdaptedFrame::new(model, z)?;
    let m = model.m();
    let q = model.q();
    let x = field_x(model, z)?;
    let ids = FieldId::horizontal(m);
    let mut pairing = vec![0.0; q * q];
    for i in 0..q {
        for j in i + 1..q {
            pairing[i * q + j] = dot(&lie_bracket(model, ids[i], ids[j], z)?, &x);
        }
    }
    let norms = &frame.field_norms_sq;
    let xn = frame.x_norm_sq;
    let a = ONeillTensor::from_upper(q, 1, |i, j, _| pairing[i * q + j] / (2.0 * (norms[i] * norms[j] * xn).sqrt()));
    let mut sum = 0.0;
    for i in 0..q {
        for j in i + 1..q {
            sum += pairing[i * q + j].powi(2) / (norms[i] * norms[j]);
        }
    }
    let display = sum / (2.0 * xn);
    let direct = oneill_norm(&a);
    let residual = direct - display;
    if residual.abs() > 1e-10 * display.abs().max(1.0) {
        return Err(Error::IdentityViolation {
            name: "|A|² from components vs bracket sum",
            residual,
            digest: format!("theta={:?} z={:?}", model.theta(), z.coords()),
        });
    }
    Ok((a, display))
}

/// The three-part closed expression for `|A|²`, evaluated literally.
pub fn oneill_closed_form(model: &WeightedHopfModel, z: &SpherePoint) -> Result<f64> {
    z.check_nondegenerate()?;
    let m = model.m();
    let th = model.theta();
    let a = z.moduli_sq();
    let s = |j: usize| a[j..].iter().sum::<f64>();
    let st = |j: usize| (j..m).map(|k| th[k] * th[k] * a[k]).sum::<f64>();
    let x2 = a[0] + (1..m).map(|k| th[k] * th[k] * a[k]).sum::<f64>();

    let (t1, t2) = (th[m - 2], th[m - 1]);
    let first = t1 * t1 * t2 * t2 * (a[m - 2] + a[m - 1]) / (t1 * t1 * a[m - 2] + t2 * t2 * a[m - 1]);
    let second: f64 = (0..m.saturating_sub(2))
        .map(|j| th[j] * th[j] * st(j + 1) * s(j) / (st(j) * s(j + 1)))
        .sum();
    let mut third = 0.0;
    for j in 0..m.saturating_sub(2) {
        for i in j + 1..m - 1 {
            let tail: f64 = (i + 1..m).map(|k| (th[i] * th[i] - th[k] * th[k]) * a[k]).sum();
            third += a[i] * a[j] * tail * tail / (st(j + 1) * st(j) * s(i + 1) * s(i));
        }
    }
    Ok(2.0 / x2 * (first + second + third))
}

/// `ω_ij = ⟨J e_i, e_j⟩` with `J` multiplication by `i`; defined only for
/// the Hopf weights, where `J` preserves the horizontal distribution.
pub fn kahler_form(model: &WeightedHopfModel, frame: &AdaptedFrame) -> Result<AlternatingForm> {
    if !model.is_hopf() {
        return Err(Error::InvalidModel(format!(
            "the Kähler form needs all θ = 1, got {:?}",
            model.theta()
        )));
    }
    let q = frame.q();
    let j = |v: &[f64]| -> Vec<f64> { v.chunks(2).flat_map(|c| [-c[1], c[0]]).collect() };
    let mut form = AlternatingForm::zeros(q, 2)?;
    let mut slot = 0;
    for a in 0..q {
        let ja = j(&frame.horizontal[a]);
        for b in a + 1..q {
            form.coeffs_mut()[slot] = dot(&ja, &frame.horizontal[b]);
            slot += 1;
        }
    }
    Ok(form)
}

/// `κ = π_Q(∇_V V)` for `V = X/|X|`. The sphere correction and the
/// derivative of `1/|X|` are normal to `Q`, so `κ = π_Q(DX·X)/|X|²`.
pub fn mean_curvature(model: &WeightedHopfModel, z: &SpherePoint) -> Result<Vec<f64>> {
    let frame = AdaptedFrame::new(model, z)?;
    let x = field_x(model, z)?;
    let dxx = jvp(|p| eval_field(model.theta(), FieldId::X, p), z.coords(), &x);
    let coords = frame.horizontal_coords(&dxx);
    let mut kappa = vec![0.0; z.coords().len()];
    for (c, e) in coords.iter().zip(&frame.horizontal) {
        for (k, v) in kappa.iter_mut().zip(e) {
            *k += c * v / frame.x_norm_sq;
        }
    }
    Ok(kappa)
}

/// The ambient curvature (unit sphere) restricted to the normal fiber and
/// the O'Neill tensor at `z`.
pub fn transverse_model(model: &WeightedHopfModel, z: &SpherePoint) -> Result<(RiemannTensor, ONeillTensor)> {
    let (a, _) = oneill_from_brackets(model, z)?;
    Ok((RiemannTensor::space_form(model.q(), 1.0), a))
}
