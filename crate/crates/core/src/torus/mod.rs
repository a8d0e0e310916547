//! The smooth noncommutative torus, truncated to finite coefficient boxes.
//!
//! Elements are `f = Σ f_{k,l} U^k V^l` with `UV = qVU` and `U* = U⁻¹`,
//! `V* = V⁻¹`. Multiplication uses the normal-ordering rule
//! `V^n U^m = q^{-nm} U^m V^n`.

mod derivation;
mod higher;

pub use derivation::{
    apply_derivation, check_derivation_relation, decompose_derivation, DerivationDecomposition,
    DerivationSpec, RelationCheck, DEFAULT_TOLERANCE,
};
pub use higher::{commutation_phase, reorder_phase, tensor_generators, Generator, Reordered, TensorGenerators};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{CoeffLattice2, PhaseQ};

/// An element of `C^∞(T²_q)` with finitely many nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusElement {
    pub coeffs: CoeffLattice2,
    pub q: PhaseQ,
}

/// A state used by [`smooth_seminorm`]: `ν(f) = φ(f* f)^{1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub enum TorusState {
    /// `φ = tr`, giving the ℓ² norm of the coefficients.
    Trace,
    /// `φ(f) = tr(g* f g)`.
    Vector(TorusElement),
}

impl TorusElement {
    pub fn new(coeffs: CoeffLattice2, q: PhaseQ) -> Self {
        TorusElement { coeffs, q }
    }

    pub fn unit(q: PhaseQ) -> Self {
        Self::new(CoeffLattice2::unit(), q)
    }

    /// `U^k V^l`.
    pub fn monomial(k: i64, l: i64, q: PhaseQ) -> Self {
        Self::new(CoeffLattice2::delta(k, l), q)
    }

    pub fn u(q: PhaseQ) -> Self {
        Self::monomial(1, 0, q)
    }

    pub fn v(q: PhaseQ) -> Self {
        Self::monomial(0, 1, q)
    }

    pub fn get(&self, k: i64, l: i64) -> Complex64 {
        self.coeffs.get(k, l)
    }

    fn check_q(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::PhaseMismatch {
                left: self.q.to_string(),
                right: other.q.to_string(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        q_mul(self, other)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_q(other)?;
        Ok(Self::new(self.coeffs.add(&other.coeffs), self.q))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_q(other)?;
        Ok(Self::new(self.coeffs.sub(&other.coeffs), self.q))
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self::new(self.coeffs.scale(alpha), self.q)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs.max_abs_diff(&other.coeffs)
    }
}

/// `(fg)_{k,l} = Σ_{m,n} f_{m,n} g_{k-m,l-n} q^{-n(k-m)}`.
///
/// The output box is the sum of the input boxes; each coefficient is reduced
/// over `(m, n)` in lexicographic order.
pub fn q_mul(f: &TorusElement, g: &TorusElement) -> Result<TorusElement> {
    q_mul_with(Exec::default(), f, g)
}

pub fn q_mul_with(exec: Exec, f: &TorusElement, g: &TorusElement) -> Result<TorusElement> {
    f.check_q(g)?;
    let (a, b, q) = (&f.coeffs, &g.coeffs, f.q);
    let rk = a.radius_k() + b.radius_k();
    let rl = a.radius_l() + b.radius_l();
    let (ark, arl) = (a.radius_k() as i64, a.radius_l() as i64);
    let (brk, brl) = (b.radius_k() as i64, b.radius_l() as i64);

    let rows = exec.map(2 * rk + 1, |row| {
        let k = row as i64 - rk as i64;
        let m_lo = (-ark).max(k - brk);
        let m_hi = ark.min(k + brk);
        (-(rl as i64)..=rl as i64)
            .map(|l| {
                let n_lo = (-arl).max(l - brl);
                let n_hi = arl.min(l + brl);
                let mut acc = Complex64::new(0.0, 0.0);
                for m in m_lo..=m_hi {
                    for n in n_lo..=n_hi {
                        let x = a.get(m, n);
                        let y = b.get(k - m, l - n);
                        if x == Complex64::new(0.0, 0.0) || y == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        acc += x * y * q.pow(-n * (k - m));
                    }
                }
                acc
            })
            .collect::<Vec<_>>()
    });
    let coeffs = CoeffLattice2::new(rk, rl, rows.into_iter().flatten().collect())?;
    Ok(TorusElement::new(coeffs, q))
}

/// `(f*)_{k,l} = conj(f_{-k,-l}) q^{-kl}`.
pub fn adjoint(f: &TorusElement) -> TorusElement {
    let q = f.q;
    let coeffs = f
        .coeffs
        .map(|k, l, _| f.coeffs.get(-k, -l).conj() * q.pow(-k * l));
    TorusElement::new(coeffs, q)
}

/// `tr(f) = f_{0,0}`.
pub fn trace(f: &TorusElement) -> Complex64 {
    f.coeffs.get(0, 0)
}

/// `tr(f* f)^{1/2}`, computed through the product.
pub fn l2_state(f: &TorusElement) -> f64 {
    let ff = q_mul(&adjoint(f), f).expect("same q");
    trace(&ff).re.max(0.0).sqrt()
}

/// `D_U^m D_V^n f`: multiplies `f_{k,l}` by `k^m l^n` (with `0⁰ = 1`).
pub fn d_power(f: &TorusElement, m: u32, n: u32) -> TorusElement {
    let coeffs = f
        .coeffs
        .map(|k, l, c| c * (k as f64).powi(m as i32) * (l as f64).powi(n as i32));
    TorusElement::new(coeffs, f.q)
}

/// `ad(a) f = af - fa`.
pub fn inner_derivation(a: &TorusElement, f: &TorusElement) -> Result<TorusElement> {
    q_mul(a, f)?.sub(&q_mul(f, a)?)
}

/// `ν_φ(X₁ ∘ … ∘ X_p f)` with `X_i = D_U^{m_i} D_V^{n_i}`.
pub fn smooth_seminorm(f: &TorusElement, word: &[(u32, u32)], state: &TorusState) -> Result<f64> {
    let h = word
        .iter()
        .rev()
        .fold(f.clone(), |acc, &(m, n)| d_power(&acc, m, n));
    match state {
        TorusState::Trace => Ok(l2_state(&h)),
        TorusState::Vector(g) => Ok(l2_state(&q_mul(&h, g)?)),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusRepr {
    radius_k: usize,
    radius_l: usize,
    coeffs: Vec<[f64; 2]>,
    q: PhaseQ,
}

impl Serialize for TorusElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TorusRepr {
            radius_k: self.coeffs.radius_k(),
            radius_l: self.coeffs.radius_l(),
            coeffs: self.coeffs.coeffs().iter().map(|c| [c.re, c.im]).collect(),
            q: self.q,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = TorusRepr::deserialize(d)?;
        let coeffs = r.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        let lattice = CoeffLattice2::new(r.radius_k, r.radius_l, coeffs).map_err(D::Error::custom)?;
        Ok(TorusElement::new(lattice, r.q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q4() -> PhaseQ {
        PhaseQ::rational(1, 4).unwrap()
    }

    #[test]
    fn uv_and_vu() {
        let q = q4();
        let uv = q_mul(&TorusElement::u(q), &TorusElement::v(q)).unwrap();
        assert_eq!(uv.get(1, 1), Complex64::new(1.0, 0.0));
        let vu = q_mul(&TorusElement::v(q), &TorusElement::u(q)).unwrap();
        assert_eq!(vu.get(1, 1), q.pow(-1));
        assert_eq!(uv.coeffs.trimmed(), vu.scale(q.value()).coeffs.trimmed());
    }

    #[test]
    fn uv_times_v() {
        let q = PhaseQ::irrational(0.7).unwrap();
        let uv = q_mul(&TorusElement::u(q), &TorusElement::v(q)).unwrap();
        let uvv = q_mul(&uv, &TorusElement::v(q)).unwrap();
        assert_eq!(uvv.get(1, 2), Complex64::new(1.0, 0.0));
        assert_eq!(uvv.coeffs.trimmed().l2_norm(), 1.0);
    }

    #[test]
    fn unit_is_neutral() {
        let q = PhaseQ::irrational(0.3).unwrap();
        let f = TorusElement::new(
            CoeffLattice2::from_fn(2, 1, |k, l| Complex64::new(k as f64, (l * k) as f64 + 0.5)),
            q,
        );
        let one = TorusElement::unit(q);
        assert_eq!(q_mul(&one, &f).unwrap().coeffs, f.coeffs);
        assert_eq!(q_mul(&f, &one).unwrap().coeffs, f.coeffs);
    }

    #[test]
    fn mismatched_q_rejected() {
        let a = TorusElement::u(q4());
        let b = TorusElement::v(PhaseQ::rational(1, 3).unwrap());
        assert!(matches!(q_mul(&a, &b), Err(Error::PhaseMismatch { .. })));
    }

    #[test]
    fn adjoint_examples() {
        let q = q4();
        let us = adjoint(&TorusElement::u(q));
        assert_eq!(us.get(-1, 0), Complex64::new(1.0, 0.0));
        let uv = q_mul(&TorusElement::u(q), &TorusElement::v(q)).unwrap();
        // V⁻¹U⁻¹ = q^{-1} U⁻¹V⁻¹ by the normal-ordering rule.
        assert_eq!(adjoint(&uv).get(-1, -1), q.pow(-1));
        assert_eq!(adjoint(&TorusElement::unit(q)), TorusElement::unit(q));
    }

    #[test]
    fn trace_and_state() {
        let q = q4();
        assert_eq!(trace(&TorusElement::monomial(2, -1, q)), Complex64::new(0.0, 0.0));
        assert_eq!(trace(&TorusElement::unit(q)), Complex64::new(1.0, 0.0));
        assert_eq!(l2_state(&TorusElement::u(q)), 1.0);
        assert_eq!(l2_state(&TorusElement::new(CoeffLattice2::zeros(1, 1), q)), 0.0);
        let f = TorusElement::new(
            CoeffLattice2::from_fn(2, 2, |k, l| Complex64::new(0.1 * k as f64, 0.2 - 0.05 * l as f64)),
            PhaseQ::irrational(1.1).unwrap(),
        );
        assert!((l2_state(&f) - f.coeffs.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn d_power_examples() {
        let q = q4();
        let f = TorusElement::monomial(2, 3, q);
        assert_eq!(d_power(&f, 0, 0), f);
        assert_eq!(d_power(&f, 1, 1).get(2, 3), Complex64::new(6.0, 0.0));
        assert_eq!(d_power(&TorusElement::unit(q), 1, 0).get(0, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn inner_derivation_closed_forms() {
        let q = PhaseQ::irrational(0.9).unwrap();
        let u = TorusElement::u(q);
        let v = TorusElement::v(q);
        let ad_v_u = inner_derivation(&v, &u).unwrap();
        assert!((ad_v_u.get(1, 1) - (q.pow(-1) - 1.0)).norm() < 1e-15);
        let ad_u_v = inner_derivation(&u, &v).unwrap();
        assert!((ad_u_v.get(1, 1) - (1.0 - q.pow(-1))).norm() < 1e-15);
        let f = TorusElement::new(CoeffLattice2::from_fn(1, 1, |k, l| Complex64::new(k as f64, l as f64)), q);
        assert_eq!(inner_derivation(&TorusElement::unit(q), &f).unwrap().coeffs.seminorm(0), 0.0);
    }

    #[test]
    fn smooth_seminorm_examples() {
        let q = q4();
        let s = smooth_seminorm(&TorusElement::u(q), &[], &TorusState::Trace).unwrap();
        assert_eq!(s, 1.0);
        let s = smooth_seminorm(&TorusElement::unit(q), &[(1, 0)], &TorusState::Trace).unwrap();
        assert_eq!(s, 0.0);
        let s = smooth_seminorm(&TorusElement::monomial(2, 3, q), &[(1, 1)], &TorusState::Trace).unwrap();
        assert!((s - 6.0).abs() < 1e-14);
        // A unitary vector state leaves the norm unchanged.
        let g = TorusElement::monomial(1, -2, q);
        let s = smooth_seminorm(&TorusElement::monomial(2, 3, q), &[(1, 1)], &TorusState::Vector(g)).unwrap();
        assert!((s - 6.0).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let f = TorusElement::monomial(1, 0, q4());
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains(r#""q":{"rational":[1,4]}"#));
        let back: TorusElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
