use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_unit, clock_shift, clock_shift_monomial, MatrixN};
use crate::error::{Error, Result};
use crate::exec::{nan_max, Exec};
use crate::lattice::PhaseQ;

/// Slope `b/a` data: `gcd(a, b) = 1`, `a a' + b b' = 1`, and `q` of order `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub a: i64,
    pub b: i64,
    pub a_prime: i64,
    pub b_prime: i64,
    pub q: PhaseQ,
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) ≥ 0`.
fn extended_euclid(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - k * r1);
        (x0, x1) = (x1, x0 - k * x1);
        (y0, y1) = (y1, y0 - k * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

impl CircleSpec {
    /// Fills in a Bézout pair by the extended Euclidean algorithm.
    pub fn new(a: i64, b: i64, q: PhaseQ) -> Result<Self> {
        let (g, x, y) = extended_euclid(a, b);
        if g != 1 {
            return Err(Error::invalid("a, b", format!("gcd({a}, {b}) = {g}, expected 1")));
        }
        Self::with_bezout(a, b, x, y, q)
    }

    pub fn with_bezout(a: i64, b: i64, a_prime: i64, b_prime: i64, q: PhaseQ) -> Result<Self> {
        q.require_rational()?;
        if a * a_prime + b * b_prime != 1 {
            return Err(Error::invalid(
                "a_prime, b_prime",
                format!("{a}·{a_prime} + {b}·{b_prime} ≠ 1"),
            ));
        }
        Ok(CircleSpec {
            a,
            b,
            a_prime,
            b_prime,
            q,
        })
    }

    pub fn order(&self) -> usize {
        self.q.order().expect("validated rational") as usize
    }

    /// `(Z, U, V) = (z^N 𝕀, z^a U₀, z^b V₀)` at one point of the circle.
    pub fn generators(&self, z: Complex64) -> Result<(MatrixN, MatrixN, MatrixN)> {
        check_unit("z", z)?;
        let n = self.order();
        let (u0, v0) = clock_shift(self.q)?;
        let zz = MatrixN::identity(n).scale(z.powi(n as i32));
        Ok((zz, u0.scale(z.powi(self.a as i32)), v0.scale(z.powi(self.b as i32))))
    }
}

/// The coefficient of `Z^j U^s V^t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleTerm {
    pub j: i64,
    pub s: i64,
    pub t: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleElement {
    pub spec: CircleSpec,
    pub coeffs: Vec<CircleTerm>,
}

/// `Σ c_{j,s,t} z^{jN} (z^a U₀)^s (z^b V₀)^t`.
pub fn circle_eval(f: &CircleElement, z: Complex64) -> Result<MatrixN> {
    check_unit("z", z)?;
    let spec = &f.spec;
    let n = spec.order();
    let mut out = MatrixN::zeros(n);
    for term in &f.coeffs {
        if !(0..n as i64).contains(&term.s) || !(0..n as i64).contains(&term.t) {
            return Err(Error::invalid(
                "coeffs",
                format!("(s, t) = ({}, {}) outside 0..{n}", term.s, term.t),
            ));
        }
        let power = term.j * n as i64 + spec.a * term.s + spec.b * term.t;
        let w = Complex64::new(term.re, term.im) * z.powi(power as i32);
        out = out.add(&clock_shift_monomial(spec.q, n, term.s, term.t).scale(w));
    }
    Ok(out)
}

/// Largest operator-norm residual of `UV = qVU`, `ZU = UZ`, `ZV = VZ`,
/// `U^N = Z^a`, `V^N = Z^b` and `Z = U^{Na'} V^{Nb'}` over the samples.
pub fn circle_check_relations(exec: Exec, spec: &CircleSpec, samples: &[Complex64]) -> Result<f64> {
    let n = spec.order() as i64;
    let per_sample = exec.map(samples.len(), |i| -> Result<f64> {
        let (zz, u, v) = spec.generators(samples[i])?;
        let residuals = [
            u.mul(&v).sub(&v.mul(&u).scale(spec.q.value())),
            zz.mul(&u).sub(&u.mul(&zz)),
            zz.mul(&v).sub(&v.mul(&zz)),
            u.unitary_pow(n).sub(&zz.unitary_pow(spec.a)),
            v.unitary_pow(n).sub(&zz.unitary_pow(spec.b)),
            zz.sub(&u.unitary_pow(n * spec.a_prime).mul(&v.unitary_pow(n * spec.b_prime))),
        ];
        Ok(residuals.iter().map(MatrixN::op_norm).fold(0.0, nan_max))
    });
    per_sample.into_iter().try_fold(0.0, |acc, r| r.map(|x| nan_max(acc, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrep::unit_samples;

    fn spec(n: u64, a: i64, b: i64) -> CircleSpec {
        CircleSpec::new(a, b, PhaseQ::rational(1, n).unwrap()).unwrap()
    }

    #[test]
    fn bezout_pairs() {
        let s = spec(5, 2, 3);
        assert_eq!((s.a_prime, s.b_prime), (-1, 1));
        assert_eq!(extended_euclid(-4, 6).0, 2);
        assert!(CircleSpec::new(2, 4, PhaseQ::ONE).is_err());
        assert!(CircleSpec::with_bezout(1, 1, 1, 1, PhaseQ::ONE).is_err());
        assert!(CircleSpec::new(1, 0, PhaseQ::irrational(0.3).unwrap()).is_err());
    }

    #[test]
    fn relations_hold() {
        let zs = unit_samples(16, 0.618_033_988_749_894_8);
        assert!(circle_check_relations(Exec::Sequential, &spec(1, 3, 5), &zs).unwrap() <= 1e-15);
        let s = CircleSpec::with_bezout(1, 1, 1, 0, PhaseQ::rational(1, 2).unwrap()).unwrap();
        assert!(circle_check_relations(Exec::Sequential, &s, &zs).unwrap() <= 1e-12);
        let s = CircleSpec::with_bezout(1, 2, 1, 0, PhaseQ::rational(1, 3).unwrap()).unwrap();
        assert!(circle_check_relations(Exec::Sequential, &s, &zs).unwrap() <= 1e-12);
        assert!(circle_check_relations(Exec::Parallel, &spec(5, 2, 3), &zs).unwrap() <= 1e-12);
    }

    #[test]
    fn wrong_bezout_pair_is_detected() {
        let good = spec(3, 1, 2);
        let bad = CircleSpec { a_prime: 2, ..good };
        let zs = unit_samples(4, 0.3);
        assert!(circle_check_relations(Exec::Sequential, &bad, &zs).unwrap() > 0.1);
    }

    #[test]
    fn commutative_case_is_scalar_functions() {
        let s = spec(1, 2, 3);
        let z = Complex64::cis(0.9);
        let u = CircleElement {
            spec: s,
            coeffs: vec![CircleTerm { j: 0, s: 0, t: 0, re: 1.0, im: 0.0 }, CircleTerm { j: 2, s: 0, t: 0, re: 0.0, im: 1.0 }],
        };
        let e = circle_eval(&u, z).unwrap();
        assert!((e.get(0, 0) - (1.0 + Complex64::i() * z.powi(2))).norm() < 1e-15);
    }

    #[test]
    fn u_to_the_n_is_z_to_the_a() {
        let s = CircleSpec::with_bezout(1, 1, 1, 0, PhaseQ::rational(1, 2).unwrap()).unwrap();
        let z = Complex64::cis(0.37);
        let (_, u, _) = s.generators(z).unwrap();
        assert!(u.unitary_pow(2).sub(&MatrixN::identity(2).scale(z * z)).op_norm() < 1e-15);
        let unit = CircleElement {
            spec: s,
            coeffs: vec![CircleTerm { j: 0, s: 0, t: 0, re: 1.0, im: 0.0 }],
        };
        assert_eq!(circle_eval(&unit, z).unwrap(), MatrixN::identity(2));
        let bad = CircleElement {
            spec: s,
            coeffs: vec![CircleTerm { j: 0, s: 2, t: 0, re: 1.0, im: 0.0 }],
        };
        assert!(circle_eval(&bad, z).is_err());
    }
}
