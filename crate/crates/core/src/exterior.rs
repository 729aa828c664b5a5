//! Exterior algebra on an oriented `q`-dimensional inner-product fiber.
//!
//! Forms are stored by their coefficients on strictly increasing multi-indices
//! (0-based, lexicographic order), so `α(e_{i₁},…,e_{i_p})` for `i₁ < … < i_p`
//! is exactly the stored coefficient. Arbitrary index tuples are resolved on
//! the fly by sorting with a permutation sign; repeated indices read zero.
//!
//! Conventions:
//! * `e^I ∧ e^J` is the determinant-normalized wedge, `(e¹∧e²)(e₁,e₂) = 1`.
//! * `⟨α, β⟩ = (1/p!) Σ_{all p-tuples} α(e_I) β(e_I)`, i.e. the plain dot
//!   product of increasing-index coefficients.
//! * `(X₁∧…∧X_s)⌟α = α(X_s, …, X₁, ·)`. The last listed vector fills the
//!   first slot.
//! * The orientation is the ordered frame `e₁…e_q` and the Hodge operator is
//!   fixed by `α ∧ *α = |α|² vol`.

use crate::error::{Error, Result};

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Sorts an index tuple and reports the sign of the sorting permutation.
/// Returns `None` when an index repeats.
pub fn sort_with_sign(tuple: &[usize]) -> Option<(f64, Vec<usize>)> {
    let mut v = tuple.to_vec();
    let mut sign = 1.0;
    // insertion sort; tuples are short
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((sign, v))
    }
}

/// A strictly increasing tuple of 0-based frame indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>, dim: usize) -> Result<Self> {
        let increasing = indices.windows(2).all(|w| w[0] < w[1]);
        if !increasing || indices.iter().any(|&i| i >= dim) {
            return Err(Error::InvalidMultiIndex(indices));
        }
        Ok(MultiIndex(indices))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lexicographic rank among all increasing `p`-tuples drawn from `0..dim`.
    pub fn rank(&self, dim: usize) -> usize {
        rank_of(&self.0, dim)
    }

    pub fn unrank(mut rank: usize, dim: usize, degree: usize) -> Self {
        let mut out = Vec::with_capacity(degree);
        let mut next = 0;
        for slot in 0..degree {
            let remaining = degree - slot - 1;
            let mut c = next;
            loop {
                let block = binomial(dim - c - 1, remaining);
                if rank < block {
                    break;
                }
                rank -= block;
                c += 1;
            }
            out.push(c);
            next = c + 1;
        }
        MultiIndex(out)
    }

    /// All increasing `degree`-tuples of `0..dim`, in rank order.
    pub fn all(dim: usize, degree: usize) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(binomial(dim, degree));
        if degree > dim {
            return out;
        }
        let mut cur: Vec<usize> = (0..degree).collect();
        loop {
            out.push(MultiIndex(cur.clone()));
            // advance to the next combination
            let mut t = degree;
            loop {
                if t == 0 {
                    return out;
                }
                t -= 1;
                if cur[t] < dim - degree + t {
                    cur[t] += 1;
                    for u in t + 1..degree {
                        cur[u] = cur[u - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// The increasing complement in `0..dim`.
    pub fn complement(&self, dim: usize) -> MultiIndex {
        MultiIndex((0..dim).filter(|i| !self.0.contains(i)).collect())
    }
}

fn rank_of(sorted: &[usize], dim: usize) -> usize {
    let p = sorted.len();
    let total = binomial(dim, p);
    let tail: usize = sorted
        .iter()
        .enumerate()
        .map(|(t, &c)| binomial(dim - 1 - c, p - t))
        .sum();
    total - 1 - tail
}

/// A vector of the normal fiber, in the orthonormal frame `{e_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberVector {
    components: Vec<f64>,
}

impl FiberVector {
    pub fn new(components: Vec<f64>) -> Self {
        FiberVector { components }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut components = vec![0.0; dim];
        components[i] = 1.0;
        FiberVector { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn dot(&self, other: &FiberVector) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn scaled(&self, c: f64) -> FiberVector {
        FiberVector::new(self.components.iter().map(|x| c * x).collect())
    }

    /// The metric dual 1-form `X♭`.
    pub fn flat(&self) -> AlternatingForm {
        AlternatingForm {
            dim: self.dim(),
            degree: 1,
            coeffs: self.components.clone(),
        }
    }
}

/// A degree-`p` alternating form on the `q`-dimensional fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl AlternatingForm {
    pub fn zeros(dim: usize, degree: usize) -> Result<Self> {
        if degree > dim {
            return Err(Error::DegreeOverflow { degree, dim });
        }
        Ok(AlternatingForm {
            dim,
            degree,
            coeffs: vec![0.0; binomial(dim, degree)],
        })
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        AlternatingForm {
            dim,
            degree: 0,
            coeffs: vec![value],
        }
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if degree > dim {
            return Err(Error::DegreeOverflow { degree, dim });
        }
        let expected = binomial(dim, degree);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(AlternatingForm { dim, degree, coeffs })
    }

    /// `e^{i₁} ∧ … ∧ e^{i_p}` for an arbitrary index tuple (sign resolved,
    /// zero on repeats).
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut form = AlternatingForm::zeros(dim, indices.len())?;
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::InvalidMultiIndex(vec![bad]));
        }
        if let Some((sign, sorted)) = sort_with_sign(indices) {
            form.coeffs[rank_of(&sorted, dim)] = sign;
        }
        Ok(form)
    }

    /// The volume form `e¹ ∧ … ∧ e^q`.
    pub fn volume(dim: usize) -> Self {
        AlternatingForm {
            dim,
            degree: dim,
            coeffs: vec![1.0],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// `α(e_{t₁}, …, e_{t_p})` for any tuple.
    pub fn component(&self, tuple: &[usize]) -> f64 {
        debug_assert_eq!(tuple.len(), self.degree);
        match sort_with_sign(tuple) {
            Some((sign, sorted)) => sign * self.coeffs[rank_of(&sorted, self.dim)],
            None => 0.0,
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn scaled(&self, c: f64) -> AlternatingForm {
        AlternatingForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        }
    }

    /// Unit-norm copy; the zero form is returned unchanged.
    pub fn normalized(&self) -> AlternatingForm {
        let n = self.norm_sq().sqrt();
        if n == 0.0 {
            self.clone()
        } else {
            self.scaled(1.0 / n)
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &AlternatingForm, c: f64) -> Result<()> {
        self.check_same_shape(other)?;
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += c * y;
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &AlternatingForm) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    fn check_same_shape(&self, other: &AlternatingForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }
}

/// `a ∧ b`.
pub fn wedge(a: &AlternatingForm, b: &AlternatingForm) -> Result<AlternatingForm> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    let q = a.dim;
    let mut out = AlternatingForm::zeros(q, a.degree + b.degree)?;
    let left = MultiIndex::all(q, a.degree);
    let right = MultiIndex::all(q, b.degree);
    let mut tuple = Vec::with_capacity(a.degree + b.degree);
    for (ia, ca) in left.iter().zip(&a.coeffs) {
        if *ca == 0.0 {
            continue;
        }
        for (ib, cb) in right.iter().zip(&b.coeffs) {
            if *cb == 0.0 {
                continue;
            }
            tuple.clear();
            tuple.extend_from_slice(ia.as_slice());
            tuple.extend_from_slice(ib.as_slice());
            if let Some((sign, sorted)) = sort_with_sign(&tuple) {
                out.coeffs[rank_of(&sorted, q)] += sign * ca * cb;
            }
        }
    }
    Ok(out)
}

/// `v ⌟ a`, i.e. `(v⌟a)(Y₁,…) = a(v, Y₁, …)`.
pub fn interior_vector(v: &FiberVector, a: &AlternatingForm) -> Result<AlternatingForm> {
    if a.degree == 0 {
        return Err(Error::ScalarContraction);
    }
    if v.dim() != a.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: v.dim(),
        });
    }
    let q = a.dim;
    let mut out = AlternatingForm::zeros(q, a.degree - 1)?;
    let mut tuple = Vec::with_capacity(a.degree);
    for (slot, rest) in MultiIndex::all(q, a.degree - 1).iter().enumerate() {
        let mut acc = 0.0;
        for (i, vi) in v.components().iter().enumerate() {
            if *vi == 0.0 || rest.as_slice().contains(&i) {
                continue;
            }
            tuple.clear();
            tuple.push(i);
            tuple.extend_from_slice(rest.as_slice());
            acc += vi * a.component(&tuple);
        }
        out.coeffs[slot] = acc;
    }
    Ok(out)
}

/// Result of a multi-vector contraction. When more vectors than the form's
/// degree are contracted the object would have negative degree; it is then
/// reported as the zero scalar with `vacuous` set.
#[derive(Debug, Clone, PartialEq)]
pub struct Contraction {
    pub form: AlternatingForm,
    pub vacuous: bool,
}

impl Contraction {
    pub fn norm_sq(&self) -> f64 {
        if self.vacuous {
            0.0
        } else {
            self.form.norm_sq()
        }
    }

    /// Inner product of two contractions; zero if either is vacuous.
    pub fn inner(&self, other: &Contraction) -> Result<f64> {
        if self.vacuous || other.vacuous {
            return Ok(0.0);
        }
        inner(&self.form, &other.form)
    }
}

/// `(X₁ ∧ … ∧ X_s) ⌟ a = a(X_s, …, X₁, ·)`.
pub fn interior_multi(vs: &[FiberVector], a: &AlternatingForm) -> Result<Contraction> {
    if let Some(v) = vs.iter().find(|v| v.dim() != a.dim) {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: v.dim(),
        });
    }
    if vs.len() > a.degree {
        return Ok(Contraction {
            form: AlternatingForm::scalar(a.dim, 0.0),
            vacuous: true,
        });
    }
    // X_s fills the first slot, so it is contracted first.
    let mut form = a.clone();
    for v in vs.iter().rev() {
        form = interior_vector(v, &form)?;
    }
    Ok(Contraction {
        form,
        vacuous: false,
    })
}

/// `⟨a, b⟩`.
pub fn inner(a: &AlternatingForm, b: &AlternatingForm) -> Result<f64> {
    a.check_same_shape(b)?;
    Ok(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y).sum())
}

/// The Hodge operator `*a` of degree `q − p`.
pub fn hodge(a: &AlternatingForm) -> AlternatingForm {
    let q = a.dim;
    let mut out = AlternatingForm {
        dim: q,
        degree: q - a.degree,
        coeffs: vec![0.0; binomial(q, q - a.degree)],
    };
    let mut tuple = Vec::with_capacity(q);
    for (idx, c) in MultiIndex::all(q, a.degree).iter().zip(&a.coeffs) {
        let comp = idx.complement(q);
        tuple.clear();
        tuple.extend_from_slice(idx.as_slice());
        tuple.extend_from_slice(comp.as_slice());
        let (sign, _) = sort_with_sign(&tuple).expect("index and complement are disjoint");
        out.coeffs[comp.rank(q)] += sign * c;
    }
    out
}

/// Brute-force `(1/p!) Σ_{all ordered p-tuples} a b`, used as a test oracle.
pub fn inner_by_tuples(a: &AlternatingForm, b: &AlternatingForm) -> f64 {
    let p = a.degree;
    let q = a.dim;
    let mut total = 0.0;
    for_each_tuple(q, p, |t| total += a.component(t) * b.component(t));
    total / factorial(p)
}

/// Calls `f` on every ordered tuple in `(0..dim)^len`.
pub fn for_each_tuple(dim: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; len];
    loop {
        f(&t);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            t[pos] += 1;
            if t[pos] < dim {
                break;
            }
            t[pos] = 0;
        }
    }
}
