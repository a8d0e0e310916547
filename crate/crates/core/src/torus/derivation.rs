use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{adjoint, q_mul, TorusElement};
use crate::error::{Error, Result};
use crate::lattice::{CoeffLattice2, PhaseQ};

/// Identity checks default to this absolute tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Divisors `1 - q^j` smaller than this abort a solve.
const SMALL_DIVISOR: f64 = 1e-8;

/// A derivation given by its values `D(U) = Σ u_{k,l} U^k V^l` and
/// `D(V) = Σ v_{k,l} U^k V^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationSpec {
    pub du: CoeffLattice2,
    pub dv: CoeffLattice2,
    pub q: PhaseQ,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelationCheck {
    Ok { max_residual: f64 },
    Violation { k: i64, l: i64, residual: f64 },
}

impl RelationCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, RelationCheck::Ok { .. })
    }

    pub fn max_residual(&self) -> f64 {
        match *self {
            RelationCheck::Ok { max_residual } => max_residual,
            RelationCheck::Violation { residual, .. } => residual,
        }
    }
}

impl DerivationSpec {
    pub fn new(du: CoeffLattice2, dv: CoeffLattice2, q: PhaseQ) -> Self {
        DerivationSpec { du, dv, q }
    }

    /// `D_U`: `U ↦ U`, `V ↦ 0`.
    pub fn d_u(q: PhaseQ) -> Self {
        Self::new(CoeffLattice2::delta(1, 0), CoeffLattice2::zeros(0, 0), q)
    }

    /// `D_V`: `U ↦ 0`, `V ↦ V`.
    pub fn d_v(q: PhaseQ) -> Self {
        Self::new(CoeffLattice2::zeros(0, 0), CoeffLattice2::delta(0, 1), q)
    }

    /// `ad(a)`, determined by `ad(a)U` and `ad(a)V`.
    pub fn inner(a: &TorusElement) -> Self {
        let u = TorusElement::u(a.q);
        let v = TorusElement::v(a.q);
        let du = super::inner_derivation(a, &u).expect("same q");
        let dv = super::inner_derivation(a, &v).expect("same q");
        Self::new(du.coeffs, dv.coeffs, a.q)
    }
}

/// Residual of `u_{k,l-1}(1 - q^{1-k}) + v_{k-1,l}(1 - q^{1-l}) = 0` at one index.
fn relation_residual(d: &DerivationSpec, k: i64, l: i64) -> f64 {
    let q = d.q;
    let lhs = d.du.get(k, l - 1) * (1.0 - q.pow(1 - k)) + d.dv.get(k - 1, l) * (1.0 - q.pow(1 - l));
    lhs.norm()
}

/// Scans every `(k, l)` touched by either value box (plus a margin of one)
/// and reports the largest residual; a violation is the first index, in
/// lexicographic order, attaining it.
pub fn check_derivation_relation(d: &DerivationSpec, tol: f64) -> RelationCheck {
    let rk = d.du.radius_k().max(d.dv.radius_k()) as i64 + 2;
    let rl = d.du.radius_l().max(d.dv.radius_l()) as i64 + 2;
    let mut worst = (0i64, 0i64, 0.0f64);
    for k in -rk..=rk {
        for l in -rl..=rl {
            let r = relation_residual(d, k, l);
            if r > worst.2 || r.is_nan() {
                worst = (k, l, r);
            }
        }
    }
    if worst.2 <= tol {
        RelationCheck::Ok { max_residual: worst.2 }
    } else {
        RelationCheck::Violation {
            k: worst.0,
            l: worst.1,
            residual: worst.2,
        }
    }
}

/// Extends `D` from the generators to `f` by the Leibniz rule.
///
/// Negative powers use `D(U⁻¹) = -U⁻¹ D(U) U⁻¹`, which Leibniz forces on
/// `U U⁻¹ = 1`.
pub fn apply_derivation(d: &DerivationSpec, f: &TorusElement, tol: f64) -> Result<TorusElement> {
    if d.q != f.q {
        return Err(Error::PhaseMismatch {
            left: d.q.to_string(),
            right: f.q.to_string(),
        });
    }
    if let RelationCheck::Violation { k, l, residual } = check_derivation_relation(d, tol) {
        return Err(Error::RelationViolation { k, l, residual });
    }
    let q = d.q;
    let mut powers = GeneratorPowers::new(d);
    let mut out = TorusElement::new(CoeffLattice2::zeros(0, 0), q);
    for (k, l, c) in f.coeffs.support() {
        // D(U^k V^l) = D(U^k) V^l + U^k D(V^l)
        let du_k = powers.d_u_pow(k);
        let dv_l = powers.d_v_pow(l);
        let left = q_mul(&du_k, &TorusElement::monomial(0, l, q))?;
        let right = q_mul(&TorusElement::monomial(k, 0, q), &dv_l)?;
        out = out.add(&left.add(&right)?.scale(c))?;
    }
    Ok(out)
}

/// Memoized `D(U^k)` and `D(V^l)`.
struct GeneratorPowers {
    q: PhaseQ,
    du: TorusElement,
    dv: TorusElement,
    u_cache: BTreeMap<i64, TorusElement>,
    v_cache: BTreeMap<i64, TorusElement>,
}

impl GeneratorPowers {
    fn new(d: &DerivationSpec) -> Self {
        GeneratorPowers {
            q: d.q,
            du: TorusElement::new(d.du.clone(), d.q),
            dv: TorusElement::new(d.dv.clone(), d.q),
            u_cache: BTreeMap::new(),
            v_cache: BTreeMap::new(),
        }
    }

    fn d_u_pow(&mut self, k: i64) -> TorusElement {
        let q = self.q;
        let du = self.du.clone();
        leibniz_power(&mut self.u_cache, &du, k, |e| TorusElement::monomial(e, 0, q), q)
    }

    fn d_v_pow(&mut self, l: i64) -> TorusElement {
        let q = self.q;
        let dv = self.dv.clone();
        leibniz_power(&mut self.v_cache, &dv, l, |e| TorusElement::monomial(0, e, q), q)
    }
}

/// `D(X^e)` for a unitary generator `X` given `D(X)`.
fn leibniz_power(
    cache: &mut BTreeMap<i64, TorusElement>,
    dx: &TorusElement,
    e: i64,
    x_pow: impl Fn(i64) -> TorusElement,
    q: PhaseQ,
) -> TorusElement {
    if let Some(hit) = cache.get(&e) {
        return hit.clone();
    }
    let result = if e == 0 {
        TorusElement::new(CoeffLattice2::zeros(0, 0), q)
    } else {
        // D(X^{-1}) = -X^{-1} D(X) X^{-1}
        let step = if e > 0 {
            dx.clone()
        } else {
            let xi = x_pow(-1);
            q_mul(&q_mul(&xi, dx).expect("same q"), &xi)
                .expect("same q")
                .scale(Complex64::new(-1.0, 0.0))
        };
        let sign = e.signum();
        let m = e.abs();
        // D(Y^m) = Σ_{j<m} Y^j D(Y) Y^{m-1-j} with Y = X^{sign}
        let mut acc = TorusElement::new(CoeffLattice2::zeros(0, 0), q);
        for j in 0..m {
            let term = q_mul(&q_mul(&x_pow(sign * j), &step).expect("same q"), &x_pow(sign * (m - 1 - j)))
                .expect("same q");
            acc = acc.add(&term).expect("same q");
        }
        acc
    };
    cache.insert(e, result.clone());
    result
}

/// `D = ad(a) + f(U^N, V^N) D_U + g(U^N, V^N) D_V`.
///
/// `outer_u` holds the coefficients of `f` and `outer_v` those of `g`; both
/// are supported on `(Nℤ)²` (on `(0, 0)` alone for irrational `q`). The
/// central part of `a` is not determined and is returned as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationDecomposition {
    pub inner: TorusElement,
    pub outer_u: CoeffLattice2,
    pub outer_v: CoeffLattice2,
    /// `max |D(X) - (ad(a) + outer)(X)|` over `X ∈ {U, V}`.
    pub residual: f64,
}

/// Splits a derivation into inner and outer parts by solving
/// `a_{k-1,l}(q^{-l} - 1) = u_{k,l}` and `a_{k,l-1}(1 - q^{-k}) = v_{k,l}`.
pub fn decompose_derivation(d: &DerivationSpec, tol: f64) -> Result<DerivationDecomposition> {
    if let RelationCheck::Violation { k, l, residual } = check_derivation_relation(d, tol) {
        return Err(Error::RelationViolation { k, l, residual });
    }
    let q = d.q;
    let n = q.order().unwrap_or(0) as i64;
    let central = |j: i64| if n == 0 { j == 0 } else { j.rem_euclid(n) == 0 };

    let rk = d.du.radius_k().max(d.dv.radius_k()) + 1;
    let rl = d.du.radius_l().max(d.dv.radius_l()) + 1;
    let mut a = CoeffLattice2::zeros(rk, rl);
    let mut outer_u = CoeffLattice2::zeros(rk, rl);
    let mut outer_v = CoeffLattice2::zeros(rk, rl);

    for (k, l, u) in d.du.iter() {
        if central(l) {
            outer_u.set(k - 1, l, u);
        } else {
            let div = q.pow(-l) - 1.0;
            if div.norm() < SMALL_DIVISOR {
                return Err(Error::SmallDivisor { index: l, modulus: div.norm() });
            }
            a.set(k - 1, l, u / div);
        }
    }
    for (k, l, v) in d.dv.iter() {
        if central(k) {
            outer_v.set(k, l - 1, v);
        } else if central(l - 1) {
            let div = 1.0 - q.pow(-k);
            if div.norm() < SMALL_DIVISOR {
                return Err(Error::SmallDivisor { index: k, modulus: div.norm() });
            }
            a.set(k, l - 1, v / div);
        }
    }

    let inner = TorusElement::new(a.trimmed(), q);
    let outer_u = outer_u.trimmed();
    let outer_v = outer_v.trimmed();
    let ad = DerivationSpec::inner(&inner);
    let u = TorusElement::u(q);
    let v = TorusElement::v(q);
    let out_u = q_mul(&TorusElement::new(outer_u.clone(), q), &u)?;
    let out_v = q_mul(&TorusElement::new(outer_v.clone(), q), &v)?;
    let res_u = d.du.sub(&ad.du).sub(&out_u.coeffs).seminorm(0);
    let res_v = d.dv.sub(&ad.dv).sub(&out_v.coeffs).seminorm(0);
    Ok(DerivationDecomposition {
        inner,
        outer_u,
        outer_v,
        residual: res_u.max(res_v),
    })
}

/// `D(f*) = D(f)*` holds for real outer parts; exposed for tests.
#[allow(dead_code)]
pub(crate) fn star_defect(d: &DerivationSpec, f: &TorusElement, tol: f64) -> Result<f64> {
    let lhs = apply_derivation(d, &adjoint(f), tol)?;
    let rhs = adjoint(&apply_derivation(d, f, tol)?);
    Ok(lhs.max_abs_diff(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{d_power, inner_derivation};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn outer_generators_pass() {
        for q in [PhaseQ::rational(1, 3).unwrap(), PhaseQ::irrational(0.4).unwrap()] {
            assert!(check_derivation_relation(&DerivationSpec::d_u(q), DEFAULT_TOLERANCE).is_ok());
            assert!(check_derivation_relation(&DerivationSpec::d_v(q), DEFAULT_TOLERANCE).is_ok());
        }
    }

    #[test]
    fn u_to_v_violates_at_0_2() {
        let q = PhaseQ::rational(1, 5).unwrap();
        let d = DerivationSpec::new(CoeffLattice2::delta(0, 1), CoeffLattice2::zeros(0, 0), q);
        match check_derivation_relation(&d, DEFAULT_TOLERANCE) {
            RelationCheck::Violation { k, l, residual } => {
                assert_eq!((k, l), (0, 2));
                assert!((residual - (1.0 - q.value()).norm()).abs() < 1e-15);
            }
            ok => panic!("{ok:?}"),
        }
        assert!(matches!(
            apply_derivation(&d, &TorusElement::u(q), DEFAULT_TOLERANCE),
            Err(Error::RelationViolation { k: 0, l: 2, .. })
        ));
    }

    #[test]
    fn trivial_q_accepts_everything() {
        let d = DerivationSpec::new(CoeffLattice2::delta(0, 1), CoeffLattice2::delta(3, -2), PhaseQ::ONE);
        assert!(check_derivation_relation(&d, DEFAULT_TOLERANCE).is_ok());
    }

    #[test]
    fn apply_examples() {
        let q = PhaseQ::irrational(0.77).unwrap();
        let u2 = TorusElement::monomial(2, 0, q);
        let got = apply_derivation(&DerivationSpec::d_u(q), &u2, DEFAULT_TOLERANCE).unwrap();
        assert!(got.max_abs_diff(&u2.scale(c(2.0, 0.0))) < 1e-15);
        let got = apply_derivation(&DerivationSpec::d_v(q), &TorusElement::unit(q), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(got.coeffs.seminorm(0), 0.0);
        let v = TorusElement::v(q);
        let u = TorusElement::u(q);
        let got = apply_derivation(&DerivationSpec::inner(&v), &u, DEFAULT_TOLERANCE).unwrap();
        assert!((got.get(1, 1) - (q.pow(-1) - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn negative_powers_match_d_power() {
        let q = PhaseQ::rational(2, 7).unwrap();
        let f = TorusElement::new(
            CoeffLattice2::from_fn(3, 2, |k, l| c(0.3 * k as f64 - 0.1, 0.2 * l as f64 + 0.05 * k as f64)),
            q,
        );
        let du = apply_derivation(&DerivationSpec::d_u(q), &f, DEFAULT_TOLERANCE).unwrap();
        assert!(du.max_abs_diff(&d_power(&f, 1, 0)) < 1e-12);
        let dv = apply_derivation(&DerivationSpec::d_v(q), &f, DEFAULT_TOLERANCE).unwrap();
        assert!(dv.max_abs_diff(&d_power(&f, 0, 1)) < 1e-12);
    }

    #[test]
    fn inner_derivations_reproduce_commutators() {
        let q = PhaseQ::irrational(2.1).unwrap();
        let a = TorusElement::new(CoeffLattice2::from_fn(1, 2, |k, l| c(k as f64 + 0.5, (l - k) as f64)), q);
        let f = TorusElement::new(CoeffLattice2::from_fn(2, 1, |k, l| c((k * l) as f64, 1.0 - l as f64)), q);
        let via_spec = apply_derivation(&DerivationSpec::inner(&a), &f, DEFAULT_TOLERANCE).unwrap();
        let direct = inner_derivation(&a, &f).unwrap();
        assert!(via_spec.max_abs_diff(&direct) < 1e-10);
    }

    #[test]
    fn decomposition_of_inner_recovers_generator() {
        let q = PhaseQ::irrational(1.3).unwrap();
        // No central part: a_{0,0} = 0.
        let a = TorusElement::new(
            CoeffLattice2::from_fn(1, 1, |k, l| if k == 0 && l == 0 { c(0.0, 0.0) } else { c(k as f64, 0.5 * l as f64 + 0.25) }),
            q,
        );
        let dec = decompose_derivation(&DerivationSpec::inner(&a), DEFAULT_TOLERANCE).unwrap();
        assert!(dec.inner.max_abs_diff(&a) < 1e-12);
        assert!(dec.outer_u.seminorm(0) < 1e-12 && dec.outer_v.seminorm(0) < 1e-12);
        assert!(dec.residual < 1e-12);
    }

    #[test]
    fn decomposition_of_outer_rational() {
        let q = PhaseQ::rational(1, 3).unwrap();
        // D = U^3 D_U + V^{-3} D_V
        let d = DerivationSpec::new(CoeffLattice2::delta(4, 0), CoeffLattice2::delta(0, -2), q);
        let dec = decompose_derivation(&d, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(dec.inner.coeffs.seminorm(0), 0.0);
        assert_eq!(dec.outer_u.get(3, 0), c(1.0, 0.0));
        assert_eq!(dec.outer_v.get(0, -3), c(1.0, 0.0));
        assert!(dec.residual < 1e-14);
    }

    #[test]
    fn near_resonant_irrational_divisor_aborts() {
        let q = PhaseQ::irrational(1e-9).unwrap();
        let a = TorusElement::monomial(0, 1, q);
        let d = DerivationSpec::inner(&a);
        assert!(matches!(decompose_derivation(&d, 1.0), Err(Error::SmallDivisor { .. })));
    }
}
