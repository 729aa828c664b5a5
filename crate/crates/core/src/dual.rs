//! Forward-mode dual numbers, enough to differentiate polynomial fields.

use std::ops::{Add, Mul, Neg, Sub};

/// The ring operations the field definitions are written against.
pub trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn cst(x: f64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn cst(x: f64) -> Self {
        x
    }
}

/// `re + eps·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub fn new(re: f64, eps: f64) -> Self {
        Dual { re, eps }
    }
}

impl Scalar for Dual {
    #[inline]
    fn cst(x: f64) -> Self {
        Dual { re: x, eps: 0.0 }
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

/// Directional derivative `Df(x)·v` of a map written over [`Scalar`].
pub fn jvp(f: impl Fn(&[Dual]) -> Vec<Dual>, x: &[f64], v: &[f64]) -> Vec<f64> {
    let seeded: Vec<Dual> = x.iter().zip(v).map(|(&a, &b)| Dual::new(a, b)).collect();
    f(&seeded).into_iter().map(|d| d.eps).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic<T: Scalar>(x: &[T]) -> Vec<T> {
        vec![x[0] * x[0] * x[1] - T::cst(3.0) * x[1], -x[0]]
    }

    #[test]
    fn derivative_of_polynomial() {
        // d/dt at (2,5) along (1,−1): 2·x·y·vx + x²·vy − 3vy = 20 − 4 + 3
        let d = jvp(cubic, &[2.0, 5.0], &[1.0, -1.0]);
        assert_eq!(d, vec![19.0, -1.0]);
        assert_eq!(cubic(&[2.0, 5.0]), vec![5.0, -2.0]);
    }
}
