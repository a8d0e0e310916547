use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The deformation parameter `q = e^{iθ}`.
///
/// Rational phases are stored as `θ = 2πp/N` with `gcd(p, N) = 1` and `p`
/// reduced into `(-N/2, N/2]`, so `N` is the order of `q` and `θ ∈ (-π, π]`.
/// Irrational phases store `θ` reduced into the same interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseQ {
    Rational { p: i64, n: u64 },
    Irrational { theta: f64 },
}

impl PhaseQ {
    pub const ONE: PhaseQ = PhaseQ::Rational { p: 0, n: 1 };

    /// `q = e^{2πi p/N}`; the pair is normalized by `gcd(p, N)`.
    pub fn rational(p: i64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("q", "root of unity order N must be positive"));
        }
        let g = gcd(p.unsigned_abs(), n);
        let n = n / g;
        let ni = n as i64;
        let mut p = (p / g as i64).rem_euclid(ni);
        if 2 * p > ni {
            p -= ni;
        }
        Ok(PhaseQ::Rational { p, n })
    }

    pub fn irrational(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::invalid("q", "theta must be finite"));
        }
        Ok(PhaseQ::Irrational {
            theta: reduce_angle(theta),
        })
    }

    pub fn theta(&self) -> f64 {
        match *self {
            PhaseQ::Rational { p, n } => TAU * p as f64 / n as f64,
            PhaseQ::Irrational { theta } => theta,
        }
    }

    pub fn value(&self) -> Complex64 {
        self.pow(1)
    }

    /// Order of `q` for rational kind, `None` otherwise.
    pub fn order(&self) -> Option<u64> {
        match *self {
            PhaseQ::Rational { n, .. } => Some(n),
            PhaseQ::Irrational { .. } => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, PhaseQ::Rational { .. })
    }

    /// `q^e`. Rational exponents are reduced mod `N` before evaluation.
    pub fn pow(&self, e: i64) -> Complex64 {
        match *self {
            PhaseQ::Rational { p, n } => root_of_unity((p as i128 * e as i128).rem_euclid(n as i128), n as i128),
            PhaseQ::Irrational { theta } => Complex64::cis(theta * e as f64),
        }
    }

    /// `q^{e/2} := e^{iθe/2}` with the stored representative `θ`.
    pub fn half_pow(&self, e: i64) -> Complex64 {
        match *self {
            PhaseQ::Rational { p, n } => {
                let m = 2 * n as i128;
                root_of_unity((p as i128 * e as i128).rem_euclid(m), m)
            }
            PhaseQ::Irrational { theta } => Complex64::cis(0.5 * theta * e as f64),
        }
    }

    /// `q̄`, with the same kind.
    pub fn conj(&self) -> PhaseQ {
        match *self {
            PhaseQ::Rational { p, n } => PhaseQ::rational(-p, n).expect("n > 0"),
            PhaseQ::Irrational { theta } => PhaseQ::Irrational {
                theta: reduce_angle(-theta),
            },
        }
    }

    pub fn require_rational(&self) -> Result<u64> {
        self.order()
            .ok_or_else(|| Error::IrrationalPhase(self.to_string()))
    }
}

impl Default for PhaseQ {
    fn default() -> Self {
        PhaseQ::ONE
    }
}

impl fmt::Display for PhaseQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseQ::Rational { p, n } => write!(f, "exp(2πi·{p}/{n})"),
            PhaseQ::Irrational { theta } => write!(f, "exp(i·{theta})"),
        }
    }
}

/// `e^{2πi r/m}` for `0 ≤ r < m`; quarter turns are returned exactly.
fn root_of_unity(r: i128, m: i128) -> Complex64 {
    debug_assert!(0 <= r && r < m);
    if 4 * r == m {
        return Complex64::new(0.0, 1.0);
    }
    if 2 * r == m {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * r == 3 * m {
        return Complex64::new(0.0, -1.0);
    }
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // Signed residue in (-m/2, m/2].
    let s = if 2 * r > m { r - m } else { r };
    Complex64::cis(TAU * (s as f64) / (m as f64))
}

pub(crate) fn reduce_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    t
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PhaseRepr {
    Rational { rational: (i64, u64) },
    Irrational { theta: f64 },
}

impl Serialize for PhaseQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            PhaseQ::Rational { p, n } => PhaseRepr::Rational { rational: (p, n) },
            PhaseQ::Irrational { theta } => PhaseRepr::Irrational { theta },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PhaseQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match PhaseRepr::deserialize(d)? {
            PhaseRepr::Rational { rational: (p, n) } => {
                PhaseQ::rational(p, n).map_err(D::Error::custom)
            }
            PhaseRepr::Irrational { theta } => PhaseQ::irrational(theta).map_err(D::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normalization() {
        assert_eq!(PhaseQ::rational(2, 4).unwrap(), PhaseQ::Rational { p: 1, n: 2 });
        assert_eq!(PhaseQ::rational(3, 4).unwrap(), PhaseQ::Rational { p: -1, n: 4 });
        assert_eq!(PhaseQ::rational(5, 1).unwrap(), PhaseQ::ONE);
        assert!(PhaseQ::rational(1, 0).is_err());
    }

    #[test]
    fn order_is_minimal() {
        let q = PhaseQ::rational(6, 9).unwrap();
        assert_eq!(q.order(), Some(3));
        for k in 1..3 {
            assert!((q.pow(k) - 1.0).norm() > 0.5);
        }
        assert!((q.pow(3) - 1.0).norm() == 0.0);
    }

    #[test]
    fn powers_are_unit_and_exact_for_large_exponents() {
        let q = PhaseQ::rational(1, 7).unwrap();
        assert!((q.pow(7_000_000_001) - q.pow(1)).norm() == 0.0);
        assert!((q.pow(-1) - q.pow(6)).norm() == 0.0);
        let r = PhaseQ::irrational(1.234).unwrap();
        for e in -50..50 {
            assert!((r.pow(e).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn quarter_turns_are_exact() {
        let q = PhaseQ::rational(1, 4).unwrap();
        assert_eq!(q.value(), Complex64::new(0.0, 1.0));
        assert_eq!(q.pow(2), Complex64::new(-1.0, 0.0));
        assert_eq!(PhaseQ::rational(1, 2).unwrap().half_pow(1), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn angle_reduction() {
        let q = PhaseQ::irrational(3.0 * PI).unwrap();
        assert!((q.theta() - PI).abs() < 1e-15);
        assert!((PhaseQ::irrational(-0.5).unwrap().conj().theta() - 0.5).abs() < 1e-16);
    }

    #[test]
    fn json_forms() {
        let q: PhaseQ = serde_json::from_str(r#"{"rational":[1,4]}"#).unwrap();
        assert_eq!(q, PhaseQ::Rational { p: 1, n: 4 });
        let t: PhaseQ = serde_json::from_str(r#"{"theta":0.5}"#).unwrap();
        assert_eq!(t, PhaseQ::Irrational { theta: 0.5 });
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"{"rational":[1,4]}"#);
        assert!(serde_json::from_str::<PhaseQ>(r#"{"rational":[1,0]}"#).is_err());
    }
}
