use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CoeffLattice2;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct LatticeRepr {
    pub radius_k: usize,
    pub radius_l: usize,
    pub coeffs: Vec<[f64; 2]>,
}

impl From<&CoeffLattice2> for LatticeRepr {
    fn from(f: &CoeffLattice2) -> Self {
        LatticeRepr {
            radius_k: f.radius_k(),
            radius_l: f.radius_l(),
            coeffs: f.coeffs().iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<LatticeRepr> for CoeffLattice2 {
    type Error = Error;

    fn try_from(r: LatticeRepr) -> Result<Self> {
        let coeffs = r.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        CoeffLattice2::new(r.radius_k, r.radius_l, coeffs)
    }
}

impl Serialize for CoeffLattice2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffLattice2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        CoeffLattice2::try_from(LatticeRepr::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Parses `{"radius_k", "radius_l", "coeffs": [[re, im], ...]}`.
pub fn read_json(bytes: &[u8]) -> Result<CoeffLattice2> {
    let repr: LatticeRepr = serde_json::from_slice(bytes).map_err(Error::from_json)?;
    CoeffLattice2::try_from(repr)
}

pub fn write_json(f: &CoeffLattice2) -> Vec<u8> {
    serde_json::to_vec(&LatticeRepr::from(f)).expect("lattice serialization is infallible")
}
