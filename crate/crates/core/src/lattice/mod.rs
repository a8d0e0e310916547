//! Truncated coefficient lattices over a box in ℤ² and the deformation
//! parameter `q`.
//!
//! A [`CoeffLattice2`] *is* the element it describes: coefficients outside
//! the box are exactly zero and nothing is ever inferred about decay.
//! Products grow the box; shrinking it is explicit ([`CoeffLattice2::truncate`])
//! and reports the sup-norm of what was dropped.

mod json;
mod phase;

pub use json::{read_json, write_json};
pub use phase::PhaseQ;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex coefficients `f_{k,l}` on `[-R_k, R_k] × [-R_l, R_l]`,
/// stored row-major with `k` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffLattice2 {
    radius_k: usize,
    radius_l: usize,
    coeffs: Vec<Complex64>,
}

impl CoeffLattice2 {
    pub fn new(radius_k: usize, radius_l: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let expected = (2 * radius_k + 1) * (2 * radius_l + 1);
        if coeffs.len() != expected {
            return Err(Error::Arity {
                field: format!("coeffs (radius_k = {radius_k}, radius_l = {radius_l})"),
                expected,
                found: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite {
                field: "coeffs".into(),
                index,
            });
        }
        Ok(CoeffLattice2 {
            radius_k,
            radius_l,
            coeffs,
        })
    }

    pub fn zeros(radius_k: usize, radius_l: usize) -> Self {
        CoeffLattice2 {
            radius_k,
            radius_l,
            coeffs: vec![Complex64::new(0.0, 0.0); (2 * radius_k + 1) * (2 * radius_l + 1)],
        }
    }

    /// The unit `1 = U⁰V⁰`.
    pub fn unit() -> Self {
        Self::monomial(0, 0, Complex64::new(1.0, 0.0))
    }

    /// `δ_{(k,l)}`, i.e. the monomial `U^k V^l`.
    pub fn delta(k: i64, l: i64) -> Self {
        Self::monomial(k, l, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(k: i64, l: i64, c: Complex64) -> Self {
        let mut out = Self::zeros(k.unsigned_abs() as usize, l.unsigned_abs() as usize);
        out.set(k, l, c);
        out
    }

    pub fn from_fn(radius_k: usize, radius_l: usize, mut f: impl FnMut(i64, i64) -> Complex64) -> Self {
        let mut out = Self::zeros(radius_k, radius_l);
        for k in out.k_range() {
            for l in out.l_range() {
                out.set(k, l, f(k, l));
            }
        }
        out
    }

    pub fn radius_k(&self) -> usize {
        self.radius_k
    }

    pub fn radius_l(&self) -> usize {
        self.radius_l
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn k_range(&self) -> std::ops::RangeInclusive<i64> {
        -(self.radius_k as i64)..=self.radius_k as i64
    }

    pub fn l_range(&self) -> std::ops::RangeInclusive<i64> {
        -(self.radius_l as i64)..=self.radius_l as i64
    }

    pub fn contains(&self, k: i64, l: i64) -> bool {
        k.unsigned_abs() as usize <= self.radius_k && l.unsigned_abs() as usize <= self.radius_l
    }

    fn index(&self, k: i64, l: i64) -> usize {
        let width = 2 * self.radius_l + 1;
        (k + self.radius_k as i64) as usize * width + (l + self.radius_l as i64) as usize
    }

    /// `f_{k,l}`; zero outside the box.
    pub fn get(&self, k: i64, l: i64) -> Complex64 {
        if self.contains(k, l) {
            self.coeffs[self.index(k, l)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Panics if `(k, l)` lies outside the box.
    pub fn set(&mut self, k: i64, l: i64, c: Complex64) {
        assert!(self.contains(k, l), "({k}, {l}) outside the lattice box");
        let i = self.index(k, l);
        self.coeffs[i] = c;
    }

    /// `(k, l, f_{k,l})` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let rk = self.radius_k as i64;
        let rl = self.radius_l as i64;
        let width = 2 * rl + 1;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 / width - rk, i as i64 % width - rl, c))
    }

    /// Nonzero entries only.
    pub fn support(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        self.iter().filter(|&(_, _, c)| c != Complex64::new(0.0, 0.0))
    }

    /// The same element on a larger (or equal) box.
    pub fn padded(&self, radius_k: usize, radius_l: usize) -> Self {
        let rk = radius_k.max(self.radius_k);
        let rl = radius_l.max(self.radius_l);
        let mut out = Self::zeros(rk, rl);
        for (k, l, c) in self.iter() {
            out.set(k, l, c);
        }
        out
    }

    /// Restricts to a smaller box; returns the kept part and `seminorm(tail, 0)`.
    pub fn truncate(&self, radius_k: usize, radius_l: usize) -> (Self, f64) {
        let mut kept = Self::zeros(radius_k, radius_l);
        let mut tail = 0.0f64;
        for (k, l, c) in self.iter() {
            if kept.contains(k, l) {
                kept.set(k, l, c);
            } else {
                tail = tail.max(c.norm());
            }
        }
        (kept, tail)
    }

    /// Smallest box containing the support (the zero lattice shrinks to the origin).
    pub fn trimmed(&self) -> Self {
        let (mut rk, mut rl) = (0usize, 0usize);
        for (k, l, _) in self.support() {
            rk = rk.max(k.unsigned_abs() as usize);
            rl = rl.max(l.unsigned_abs() as usize);
        }
        self.truncate(rk, rl).0
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        CoeffLattice2 {
            radius_k: self.radius_k,
            radius_l: self.radius_l,
            coeffs: self.coeffs.iter().map(|&c| alpha * c).collect(),
        }
    }

    pub fn map(&self, mut f: impl FnMut(i64, i64, Complex64) -> Complex64) -> Self {
        let coeffs = self.iter().map(|(k, l, c)| f(k, l, c)).collect();
        CoeffLattice2 {
            radius_k: self.radius_k,
            radius_l: self.radius_l,
            coeffs,
        }
    }

    /// Coefficient-wise sum on the union box.
    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let rk = self.radius_k.max(other.radius_k);
        let rl = self.radius_l.max(other.radius_l);
        Self::from_fn(rk, rl, |k, l| f(self.get(k, l), other.get(k, l)))
    }

    /// `max |f_{k,l} - g_{k,l}|` over the union box.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).seminorm(0)
    }

    /// `‖f‖_m = sup |f_{k,l}| (1 + |k| + |l|)^m`.
    pub fn seminorm(&self, m: u32) -> f64 {
        self.iter()
            .map(|(k, l, c)| c.norm() * ((1 + k.abs() + l.abs()) as f64).powi(m as i32))
            .fold(0.0, f64::max)
    }

    /// `(Σ |f_{k,l}|²)^{1/2}`, summed lexicographically.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Primed coefficients `f'_{k,l} = f_{k,l} q^{kl/2}`.
    pub fn to_primed(&self, q: &PhaseQ) -> Self {
        self.map(|k, l, c| c * q.half_pow(k * l))
    }

    /// Inverse of [`to_primed`](Self::to_primed): `f_{k,l} = f'_{k,l} q^{-kl/2}`.
    pub fn from_primed(&self, q: &PhaseQ) -> Self {
        self.map(|k, l, c| c * q.half_pow(-k * l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn seminorm_examples() {
        assert_eq!(CoeffLattice2::unit().seminorm(5), 1.0);
        assert_eq!(CoeffLattice2::delta(1, 0).seminorm(3), 8.0);
        let f = CoeffLattice2::delta(1, 0).add(&CoeffLattice2::delta(0, 1));
        assert_eq!(f.seminorm(2), 4.0);
        assert_eq!(CoeffLattice2::zeros(3, 2).seminorm(4), 0.0);
    }

    #[test]
    fn out_of_box_reads_are_zero() {
        let f = CoeffLattice2::delta(1, -1);
        assert_eq!(f.get(5, 0), c(0.0, 0.0));
        assert_eq!(f.get(1, -1), c(1.0, 0.0));
        let p = f.padded(4, 4);
        assert_eq!(p.seminorm(3), f.seminorm(3));
        assert_eq!(p.trimmed(), f);
    }

    #[test]
    fn primed_examples() {
        let q = PhaseQ::irrational(std::f64::consts::PI).unwrap();
        assert_eq!(CoeffLattice2::delta(1, 0).to_primed(&q), CoeffLattice2::delta(1, 0));
        let g = CoeffLattice2::delta(1, 1).to_primed(&q);
        assert!((g.get(1, 1) - c(0.0, 1.0)).norm() < 1e-15);
        let f = CoeffLattice2::from_fn(2, 2, |k, l| c(k as f64, l as f64 * 0.5));
        assert_eq!(f.to_primed(&PhaseQ::irrational(0.0).unwrap()), f);
    }

    #[test]
    fn truncation_reports_tail() {
        let f = CoeffLattice2::from_fn(2, 1, |k, l| c((k * 10 + l) as f64, 0.0));
        let (kept, tail) = f.truncate(1, 1);
        assert_eq!(kept.radius_k(), 1);
        assert_eq!(tail, 21.0);
        assert_eq!(kept.get(1, 1), c(11.0, 0.0));
    }

    #[test]
    fn arity_and_finiteness_checked() {
        assert!(matches!(
            CoeffLattice2::new(1, 0, vec![c(0.0, 0.0); 2]),
            Err(Error::Arity { expected: 3, found: 2, .. })
        ));
        assert!(matches!(
            CoeffLattice2::new(0, 0, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { index: 0, .. })
        ));
    }

    #[test]
    fn iteration_is_lexicographic() {
        let f = CoeffLattice2::zeros(1, 1);
        let idx: Vec<_> = f.iter().map(|(k, l, _)| (k, l)).collect();
        assert_eq!(idx[0], (-1, -1));
        assert_eq!(idx[1], (-1, 0));
        assert_eq!(idx[3], (0, -1));
        assert_eq!(idx[8], (1, 1));
    }
}
